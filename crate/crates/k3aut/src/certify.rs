//! Internal certificates checked on every result before it is reported: isometry
//! identities on every emitted matrix, the Weyl vector invariants, involutivity of the
//! chamber walk, group closure and the Enriques descent conditions.

use serde::{Deserialize, Serialize};

use k3aut_core::arith::{self, ZMat};
use k3aut_core::borcherds::{self, GenerationResult, Splitting};
use k3aut_core::enriques::{self, EnriquesResult};
use k3aut_core::k3::SurfaceConfig;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Certificate {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

pub fn all_passed(certs: &[Certificate]) -> bool {
    certs.iter().all(|c| c.passed)
}

fn isometries(gram: &ZMat, mats: &[&ZMat]) -> usize {
    mats.iter().filter(|m| arith::gram_of(gram, m) != *gram).count()
}

/// Certificates for one surface.
pub fn generation_certificates(r: &GenerationResult) -> Vec<Certificate> {
    let cfg = SurfaceConfig::new(r.k);
    let mut out = Vec::new();
    let crossings: Vec<&borcherds::Crossing> = r.orbits.iter().filter_map(|o| o.crossing.as_ref()).collect();

    let s_mats: Vec<&ZMat> = r
        .aut
        .iter()
        .chain(&r.generators)
        .chain(
            crossings
                .iter()
                .flat_map(|c| std::iter::once(&c.gamma).chain(&c.involutions)),
        )
        .collect();
    let l26 = borcherds::l26_gram();
    let l_mats: Vec<&ZMat> = r
        .generators_l26
        .iter()
        .chain(crossings.iter().map(|c| &c.gamma_l26))
        .collect();
    let bad = isometries(&cfg.gram, &s_mats) + isometries(&l26, &l_mats);
    out.push(Certificate::new(
        "isometry",
        bad == 0,
        format!(
            "{} matrices checked, {bad} fail A·G·Aᵀ = G",
            s_mats.len() + l_mats.len()
        ),
    ));

    let weyls: Vec<&Vec<i64>> = std::iter::once(&r.weyl)
        .chain(crossings.iter().map(|c| &c.weyl))
        .collect();
    let bad_weyl = weyls
        .iter()
        .filter(|w| arith::bilinear(&l26, w, w) != 0 || !borcherds::leech_check(w).unwrap_or(false))
        .count();
    out.push(Certificate::new(
        "weyl-vectors",
        bad_weyl == 0,
        format!(
            "{} Weyl vectors isotropic with Leech quotient, {bad_weyl} fail",
            weyls.len()
        ),
    ));

    let walk = borcherds::embed(r.k).and_then(|e| Splitting::new(&e)).map(|sp| {
        r.orbits
            .iter()
            .filter(|o| o.crossing.is_some())
            .filter(|o| {
                let c = o.crossing.as_ref().expect("filtered");
                let back = borcherds::adjacent_weyl(&sp, &c.weyl, &arith::neg_vec(&o.representative), &o.witness);
                back.as_ref() != Ok(&r.weyl)
            })
            .count()
    });
    out.push(match walk {
        Ok(bad) => Certificate::new(
            "walk-involutive",
            bad == 0,
            format!("{bad} crossings fail to walk back"),
        ),
        Err(e) => Certificate::new("walk-involutive", false, e.to_string()),
    });

    let torelli = cfg.torelli();
    let outside = r.generators.iter().filter(|g| !torelli.g_membership(g)).count();
    out.push(Certificate::new(
        "period-condition",
        outside == 0,
        format!(
            "{} generators, {outside} outside the group preserving the periods",
            r.generators.len()
        ),
    ));

    out.push(match r.aut_group() {
        Ok(g) => Certificate::new("group-closure", true, format!("order {}", g.order())),
        Err(e) => Certificate::new("group-closure", false, e.to_string()),
    });
    let involution_total: usize = r.base_split.total();
    out.push(Certificate::new(
        "involution-count",
        involution_total == r.base_involutions.len(),
        format!("{involution_total} classified of {}", r.base_involutions.len()),
    ));
    out.push(Certificate::new(
        "tessellation",
        r.tessellation_checked,
        "adjacent chambers across every non-nef wall are congruent",
    ));
    out
}

/// Certificates for the Enriques descent.
pub fn enriques_certificates(r: &EnriquesResult, base: &GenerationResult) -> Vec<Certificate> {
    let mut out = Vec::new();
    let lat = &r.lattice;
    let n = lat.rank();
    let mut eps_kernel = vec![arith::identity(lat.involution.len()), lat.involution.clone()];
    eps_kernel.sort();
    out.push(Certificate::new(
        "descent-kernel",
        r.kernel == eps_kernel,
        format!("kernel of order {} generated by the involution", r.kernel.len()),
    ));
    let gram = &lat.gram;
    let even = (0..n).all(|i| gram[i][i] % 2 == 0);
    let det = arith::det_z(gram);
    out.push(Certificate::new(
        "invariant-lattice",
        even && det == (-1i64).into() && n == 10,
        format!("rank {n}, determinant {det}, even {even}"),
    ));
    let bad = r
        .group
        .iter()
        .chain(&r.generators)
        .filter(|m| arith::gram_of(gram, m) != *gram)
        .count();
    out.push(Certificate::new(
        "isometry",
        bad == 0,
        format!("{bad} descended matrices fail"),
    ));
    out.push(Certificate::new(
        "mathieu-group",
        enriques::is_mathieu_certified(r),
        format!(
            "order {}, symplectic image {}, involutions inside it {}",
            r.fingerprint.order, r.symplectic_image_order, r.involutions_in_symplectic_image
        ),
    ));
    let gens = &base.aut_generators;
    let homomorphism = gens.iter().all(|a| {
        gens.iter().all(
            |b| match (lat.descend(&arith::mat_mul(a, b)), lat.descend(a), lat.descend(b)) {
                (Ok(ab), Ok(x), Ok(y)) => ab == arith::mat_mul(&x, &y),
                _ => false,
            },
        )
    });
    out.push(Certificate::new(
        "descent-homomorphism",
        homomorphism,
        format!("products of {} generator pairs", gens.len() * gens.len()),
    ));
    let cross = r.generators.last().expect("crossing element");
    out.push(Certificate::new(
        "crossing",
        enriques::crosses_wall(&r.chamber, cross, &r.crossing_wall),
        "the crossing element maps the chamber across one of its walls",
    ));
    out
}
