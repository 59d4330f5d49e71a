//! Validation of the reference data: every published matrix and vector is checked for the
//! properties claimed for it (membership and property checks, not bit-identical
//! regeneration, since representatives may legitimately differ).

use serde::{Deserialize, Serialize};

use k3aut_core::arith::{self, ZMat};
use k3aut_core::borcherds;
use k3aut_core::enriques::EnriquesLattice;
use k3aut_core::groups::MatrixGroup;
use k3aut_core::k3::{self, AdeType, InvolutionType, SurfaceConfig};
use k3aut_core::lattice_core;

use crate::fixtures::Reference;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureCheck {
    /// Fixture identifier, e.g. `enriques_involution_x0/central`.
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

struct Checks(Vec<FixtureCheck>);

impl Checks {
    fn push(&mut self, id: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(FixtureCheck {
            id: id.into(),
            passed,
            detail: detail.into(),
        });
    }
}

fn order(m: &ZMat) -> Option<usize> {
    let id = arith::identity(m.len());
    let mut p = m.clone();
    for n in 1..=24 {
        if p == id {
            return Some(n);
        }
        p = arith::mat_mul(&p, m);
    }
    None
}

fn square(m: &ZMat, n: usize) -> bool {
    m.len() == n && m.iter().all(|r| r.len() == n)
}

/// Common checks for a published isometry of a surface lattice: shape, isometry, order,
/// membership in the group preserving the periods, and the period scalar.
fn isometry_checks(
    c: &mut Checks,
    id: &str,
    cfg: &SurfaceConfig,
    m: &ZMat,
    want_order: usize,
    want_level: u32,
) -> bool {
    let n = cfg.gram.len();
    if !square(m, n) {
        c.push(format!("{id}/shape"), false, format!("expected {n}×{n}"));
        return false;
    }
    let iso = lattice_core::is_isometry(&cfg.gram, m);
    c.push(format!("{id}/isometry"), iso, "A·G·Aᵀ = G");
    // powers of a non-isometry grow without bound
    let o = if iso { order(m) } else { None };
    c.push(
        format!("{id}/order"),
        o == Some(want_order),
        format!("order {o:?}, expected {want_order}"),
    );
    let member = iso && cfg.torelli().g_membership(m);
    c.push(
        format!("{id}/period-condition"),
        member,
        "acts on the discriminant as the periods allow",
    );
    let level = if member {
        cfg.torelli().symplectic_level(m).ok()
    } else {
        None
    };
    c.push(
        format!("{id}/period-scalar"),
        level == Some(want_level),
        format!("order of the period scalar {level:?}, expected {want_level}"),
    );
    iso && member
}

fn involution_type(c: &mut Checks, id: &str, cfg: &SurfaceConfig, m: &ZMat, want: InvolutionType) {
    let t = k3::classify_involution(cfg, m);
    c.push(
        format!("{id}/type"),
        t == Ok(want),
        format!("{t:?}, expected {}", want.name()),
    );
}

/// Runs every fixture check. `aut0` is `Aut(X₀,a₀)`; the checks needing it (centrality and
/// membership) are omitted when it is not supplied.
pub fn verify(reference: &Reference, aut0: Option<&MatrixGroup>) -> Vec<FixtureCheck> {
    let mut c = Checks(Vec::new());
    let cfgs: Vec<SurfaceConfig> = (0..3).map(SurfaceConfig::new).collect();

    c.push(
        "schema_version",
        reference.schema_version == 1,
        format!("version {}", reference.schema_version),
    );

    // embeddings and ample classes
    for (k, cfg) in cfgs.iter().enumerate() {
        let ok_rows = reference.embeddings_s1_s2.get(k).is_some_and(|rows| {
            let expected = borcherds::embedding_s_rows(k);
            rows[0] == expected[0] && rows[1] == expected[1]
        });
        let induced = arith::gram_of(&borcherds::l26_gram(), &borcherds::embedding_rows(k)) == cfg.gram;
        c.push(
            format!("embeddings_s1_s2/{k}"),
            ok_rows && induced,
            format!("rows match {ok_rows}, induced Gram equals the surface Gram {induced}"),
        );
        let ample = reference.ample.get(k);
        let same = ample == Some(&cfg.ample);
        let is_ample = ample.is_some_and(|a| k3::is_ample(cfg, a) == Ok(true));
        c.push(
            format!("ample/{k}"),
            same && is_ample,
            format!("equals the projection {same}, ample {is_ample}"),
        );
    }

    // the Enriques involution: central in Aut(X0,a0)
    let eps = &reference.enriques_involution_x0;
    let id = "enriques_involution_x0";
    if isometry_checks(&mut c, id, &cfgs[0], eps, 2, 2) {
        involution_type(&mut c, id, &cfgs[0], eps, InvolutionType::Enriques);
        if let Some(g) = aut0 {
            let central = g.contains(eps)
                && g.elements()
                    .iter()
                    .all(|x| arith::mat_mul(x, eps) == arith::mat_mul(eps, x));
            c.push(
                format!("{id}/central"),
                central,
                "in Aut(X,a) and commutes with all of it",
            );
        }
    }

    // the purely non-symplectic automorphism of order 4
    let rho = &reference.order4_x0;
    let id = "order4_x0";
    if isometry_checks(&mut c, id, &cfgs[0], rho, 4, 4) {
        let preserves = arith::vec_mat(&cfgs[0].ample, rho) == cfgs[0].ample;
        c.push(format!("{id}/fixes-ample"), preserves, "a·ρ = a");
        if let Some(g) = aut0 {
            c.push(format!("{id}/member"), g.contains(rho), "in Aut(X,a)");
        }
    }

    // the symplectic involution of surface 1
    let sigma = &reference.symplectic_involution_x1;
    let id = "symplectic_involution_x1";
    if isometry_checks(&mut c, id, &cfgs[1], sigma, 2, 1) {
        involution_type(&mut c, id, &cfgs[1], sigma, InvolutionType::Symplectic);
    }

    // the rational double-plane involution across a wall of surface 0
    let iota = &reference.double_plane_tlh0_3;
    let id = "double_plane_tlh0_3";
    if isometry_checks(&mut c, id, &cfgs[0], iota, 2, 2) {
        involution_type(&mut c, id, &cfgs[0], iota, InvolutionType::Rational);
        let same = reference
            .polarization("tlh0_3")
            .is_some_and(|p| k3::double_plane_involution(&cfgs[0], &p.h).as_ref() == Ok(iota));
        c.push(
            format!("{id}/double-plane"),
            same,
            "is the double-plane involution of its polarization",
        );
    }

    // degree-2 polarizations
    for p in &reference.polarizations {
        let cfg = &cfgs[p.k.min(2)];
        let id = format!("polarizations/{}", p.name);
        let norm = cfg.pairing(&p.h, &p.h);
        let nef = k3::is_nef(cfg, &p.h) == Ok(true);
        let pol = nef && k3::is_polarization(cfg, &p.h) == Ok(true);
        let pairing = cfg.pairing(&p.h, &cfg.ample);
        let ade = k3::rational_curve_classes(cfg, &p.h, 0)
            .ok()
            .and_then(|cs| k3::ade_type(&cfg.gram, &cs[0]).ok());
        let want = AdeType::parse(&p.sing);
        let ok = p.k <= 2 && norm == 2 && pol && pairing == p.pairing_with_ample && ade.is_some() && ade == want;
        c.push(
            id,
            ok,
            format!(
                "norm {norm}, nef {nef}, polarization {pol}, ⟨h,a⟩ = {pairing} (listed {}), singularities {} (listed {})",
                p.pairing_with_ample,
                ade.map_or("?".to_string(), |a| a.to_string()),
                p.sing
            ),
        );
    }

    // the invariant lattice of the Enriques involution and the descended generators
    let lat = EnriquesLattice::new(&cfgs[0], eps, Some(reference.enriques_basis.clone()));
    c.push("enriques_basis", lat.is_ok(), format!("{:?}", lat.as_ref().err()));
    if let Ok(lat) = lat {
        c.push(
            "enriques_gram",
            lat.gram == reference.enriques_gram,
            "half the induced form on the basis",
        );
        let det = arith::det_z(&lat.gram);
        let even = (0..lat.rank()).all(|i| lat.gram[i][i] % 2 == 0);
        c.push(
            "enriques_gram/unimodular",
            even && det == (-1i64).into(),
            format!("even {even}, determinant {det}"),
        );
        let descended: Option<Vec<ZMat>> = aut0.map(|g| {
            let mut v: Vec<ZMat> = g.elements().iter().filter_map(|x| lat.descend(x).ok()).collect();
            v.sort();
            v.dedup();
            v
        });
        for (name, m) in &reference.enriques_generators {
            let id = format!("enriques_generators/{name}");
            let lift: Option<ZMat> = match name.as_str() {
                "order4" => Some(reference.order4_x0.clone()),
                "double_plane_tlh0_3" => Some(reference.double_plane_tlh0_3.clone()),
                other => other
                    .strip_prefix("double_plane_")
                    .and_then(|n| reference.polarization(n))
                    .and_then(|p| k3::double_plane_involution(&cfgs[0], &p.h).ok()),
            };
            let iso = square(m, 10) && arith::gram_of(&lat.gram, m) == lat.gram;
            let image = lift.as_ref().and_then(|g| lat.descend(g).ok());
            c.push(
                format!("{id}/descent"),
                iso && image.as_ref() == Some(m),
                format!(
                    "isometry {iso}, image of the lifted automorphism {}",
                    image.as_ref() == Some(m)
                ),
            );
            if let Some(d) = &descended {
                let finite = name != "double_plane_tlh0_3";
                let member = d.binary_search(m).is_ok();
                c.push(
                    format!("{id}/finite-part"),
                    member == finite,
                    format!("in the image of Aut(X,a): {member}, expected {finite}"),
                );
            }
        }
    }
    c.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_fixtures_pass_without_the_group() {
        let checks = verify(&Reference::bundled(), None);
        let failed: Vec<&FixtureCheck> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(checks.len() > 60);
    }

    #[test]
    fn corrupted_fixtures_fail_by_name() {
        let mut r = Reference::bundled();
        r.polarizations.truncate(8);
        r.enriques_involution_x0[0][0] += 1;
        r.polarizations[5].pairing_with_ample += 1;
        let name = r.polarizations[5].name.clone();
        let failed: Vec<String> = verify(&r, None)
            .into_iter()
            .filter(|c| !c.passed)
            .map(|c| c.id)
            .collect();
        assert!(
            failed.contains(&"enriques_involution_x0/isometry".to_string()),
            "{failed:?}"
        );
        assert!(failed.contains(&format!("polarizations/{name}")), "{failed:?}");
    }
}
