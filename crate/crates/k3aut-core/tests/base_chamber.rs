//! Structural invariants of the base chamber of surface 2 and of one chamber crossing.

use k3aut_core::arith;
use k3aut_core::borcherds::{self, BaseChamber};
use k3aut_core::lattice_core::is_isometry;

#[test]
fn base_chamber_of_surface_two_is_consistent() {
    let base = BaseChamber::new(2).unwrap();
    let gram = &base.cfg.gram;
    let walls: Vec<_> = base.walls.iter().map(|w| w.dual.clone()).collect();

    // every automorphism is an isometry fixing the ample class and permuting the walls
    for g in base.aut.elements() {
        assert!(is_isometry(gram, g));
        assert_eq!(arith::vec_mat(&base.cfg.ample, g), base.cfg.ample);
        let dual = k3aut_core::chambers::dual_action(g);
        let mut moved: Vec<_> = walls.iter().map(|w| arith::vec_mat(w, &dual)).collect();
        moved.sort();
        let mut sorted = walls.clone();
        sorted.sort();
        assert_eq!(moved, sorted);
    }
    assert!(base.aut.order() <= base.chamber_group.len());
    assert_eq!(base.chamber_group.len() % base.aut.order(), 0);

    // the orbit records partition the walls
    let total: usize = base.orbits.iter().map(|o| o.size).sum();
    assert_eq!(total, base.walls.len());
    for o in &base.orbits {
        assert!(walls.contains(&o.representative));
        assert!(o.ample_pairing > 0);
    }

    // the Weyl vector is an isotropic Leech-type vector
    let l26 = borcherds::l26();
    assert_eq!(l26.norm(&base.weyl), 0);
    assert_eq!(borcherds::leech_check(&base.weyl), Ok(true));
}

#[test]
fn crossing_a_wall_lands_in_a_congruent_chamber() {
    let base = BaseChamber::new(2).unwrap();
    let i = *base.crossable().first().expect("some wall can be crossed");
    let c = base.cross(i).unwrap();
    let gram = &base.cfg.gram;
    assert!(is_isometry(gram, &c.gamma));
    assert!(base.cfg.torelli().g_membership(&c.gamma));
    // the adjacent chamber's Weyl vector is again of Leech type
    assert_eq!(borcherds::leech_check(&c.weyl), Ok(true));
    assert_ne!(c.weyl, base.weyl);
}
