//! The invariant lattice of the Enriques involution of surface 0, built from the bundled
//! reference matrices without generating the automorphism group.

use k3aut::fixtures::Reference;
use k3aut_core::arith;
use k3aut_core::enriques::{invariant_split, EnriquesError, EnriquesLattice};
use k3aut_core::k3::{self, InvolutionType, SurfaceConfig};

#[test]
fn invariant_lattice_in_the_reference_basis_has_the_reference_gram() {
    let r = Reference::bundled();
    let cfg = SurfaceConfig::new(0);
    let lat = EnriquesLattice::new(&cfg, &r.enriques_involution_x0, Some(r.enriques_basis.clone())).unwrap();
    assert_eq!(lat.rank(), 10);
    assert_eq!(lat.gram, r.enriques_gram);
    // even, unimodular and hyperbolic
    assert_eq!(arith::det_z(&lat.gram).to_string(), "-1");
    assert!(lat.lattice().is_hyperbolic());
    assert!(lat.lattice().is_even());
}

#[test]
fn both_eigenlattices_have_rank_ten() {
    let r = Reference::bundled();
    let (plus, minus) = invariant_split(&r.enriques_involution_x0).unwrap();
    assert_eq!((plus.len(), minus.len()), (10, 10));
    assert!(arith::rows_primitive(&plus) && arith::rows_primitive(&minus));
}

#[test]
fn descent_of_the_order_four_automorphism_matches_the_reference_image() {
    let r = Reference::bundled();
    let cfg = SurfaceConfig::new(0);
    let lat = EnriquesLattice::new(&cfg, &r.enriques_involution_x0, Some(r.enriques_basis.clone())).unwrap();
    let image = lat.descend(&r.order4_x0).unwrap();
    assert_eq!(image, r.enriques_generators["order4"]);
    assert_eq!(arith::gram_of(&lat.gram, &image), lat.gram);
    // the involution itself descends to the identity
    assert_eq!(lat.descend(&r.enriques_involution_x0).unwrap(), arith::identity(10));
}

#[test]
fn descended_double_plane_involution_matches_the_reference_image() {
    let r = Reference::bundled();
    let cfg = SurfaceConfig::new(0);
    let lat = EnriquesLattice::new(&cfg, &r.enriques_involution_x0, Some(r.enriques_basis.clone())).unwrap();
    assert_eq!(
        lat.descend(&r.double_plane_tlh0_3).unwrap(),
        r.enriques_generators["double_plane_tlh0_3"]
    );
}

#[test]
fn invalid_inputs_are_rejected() {
    let r = Reference::bundled();
    let cfg = SurfaceConfig::new(0);
    assert_eq!(
        EnriquesLattice::new(&cfg, &r.order4_x0, None).unwrap_err(),
        EnriquesError::NotInvolution
    );
    assert_eq!(
        k3::classify_involution(&cfg, &r.double_plane_tlh0_3).unwrap(),
        InvolutionType::Rational
    );
    assert_eq!(
        EnriquesLattice::new(&cfg, &r.double_plane_tlh0_3, None).unwrap_err(),
        EnriquesError::NotEnriques
    );
    let mut doubled = r.enriques_basis.clone();
    doubled[0] = arith::scale_vec(&doubled[0], 2);
    assert_eq!(
        EnriquesLattice::new(&cfg, &r.enriques_involution_x0, Some(doubled)).unwrap_err(),
        EnriquesError::WrongBasis
    );
}
