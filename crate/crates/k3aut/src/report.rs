//! Versioned JSON reports and the plain-text orbit table.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use k3aut_core::arith::{ZMat, ZVec};
use k3aut_core::borcherds::{GenerationResult, InvolutionSplit};
use k3aut_core::enriques::EnriquesResult;
use k3aut_core::groups::MatrixGroup;
use k3aut_core::k3::{self, GroupFingerprint};

use crate::certify::Certificate;

/// Version of the report layout; bumped on any incompatible change.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub order: usize,
    pub center_order: usize,
    /// `(element order, class size)` per conjugacy class.
    pub classes: Vec<(usize, usize)>,
    pub name: Option<String>,
    pub central_quotient_name: Option<String>,
}

impl From<&GroupFingerprint> for GroupReport {
    fn from(f: &GroupFingerprint) -> Self {
        Self {
            order: f.order,
            center_order: f.center_order,
            classes: f.classes.clone(),
            name: f.name.map(|n| n.name().to_string()),
            central_quotient_name: f.central_quotient_name.map(|n| n.name().to_string()),
        }
    }
}

impl GroupReport {
    pub fn of(group: &MatrixGroup) -> Self {
        Self::from(&k3::group_fingerprint(group))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitReport {
    pub total: usize,
    pub symplectic: usize,
    pub enriques: usize,
    pub rational: usize,
}

impl From<&InvolutionSplit> for SplitReport {
    fn from(s: &InvolutionSplit) -> Self {
        Self {
            total: s.total(),
            symplectic: s.symplectic,
            enriques: s.enriques,
            rational: s.rational,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingReport {
    /// Weyl vector of a Conway chamber inducing the adjacent chamber.
    #[serde(with = "crate::json::decimal")]
    pub weyl: ZVec,
    /// An isometry mapping the base chamber onto the adjacent one.
    #[serde(with = "crate::json::decimal")]
    pub congruence: ZMat,
    pub involutions: SplitReport,
    /// `⟨a·γ, a⟩`.
    #[serde(with = "crate::json::decimal")]
    pub ample_image_pairing: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub label: String,
    pub size: usize,
    /// `⟨v,v⟩` of the primitive wall vector, as a reduced fraction.
    pub norm: String,
    #[serde(with = "crate::json::decimal")]
    pub ample_pairing: i64,
    /// `n` with `n·v` the class of a smooth rational curve, for walls of the nef cone.
    #[serde(with = "crate::json::decimal")]
    pub nef_multiple: Option<i64>,
    /// Wall vector in dual coordinates (`⟨v, x⟩ = t·x`).
    #[serde(with = "crate::json::decimal")]
    pub representative: ZVec,
    pub crossing: Option<CrossingReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub schema_version: u32,
    pub surface: usize,
    #[serde(with = "crate::json::decimal")]
    pub gram: ZMat,
    #[serde(with = "crate::json::decimal")]
    pub embedding: ZMat,
    #[serde(with = "crate::json::decimal")]
    pub weyl: ZVec,
    #[serde(with = "crate::json::decimal")]
    pub ample: ZVec,
    pub candidate_walls: usize,
    pub weyl_roots: usize,
    pub chamber_group_order: usize,
    pub automorphisms: GroupReport,
    pub symplectic_subgroup: GroupReport,
    pub involutions: SplitReport,
    pub orbits: Vec<OrbitReport>,
    /// Orbit indices merged by the full symmetry group of the chamber.
    pub fused_orbits: Vec<Vec<usize>>,
    #[serde(with = "crate::json::decimal")]
    pub generators: Vec<ZMat>,
    #[serde(with = "crate::json::decimal")]
    pub generators_l26: Vec<ZMat>,
    #[serde(with = "crate::json::decimal")]
    pub walls: Vec<ZVec>,
    pub certificates: Vec<Certificate>,
}

pub fn surface_report(r: &GenerationResult, certificates: Vec<Certificate>) -> SurfaceReport {
    let cfg = k3::SurfaceConfig::new(r.k);
    let automorphisms = r.aut_group().map(|g| GroupReport::of(&g));
    let symplectic = r.symplectic_subgroup().map(|g| GroupReport::of(&g));
    let empty = GroupReport {
        order: 0,
        center_order: 0,
        classes: Vec::new(),
        name: None,
        central_quotient_name: None,
    };
    SurfaceReport {
        schema_version: SCHEMA_VERSION,
        surface: r.k,
        gram: cfg.gram.clone(),
        embedding: cfg.embedding.clone(),
        weyl: r.weyl.clone(),
        ample: r.ample.clone(),
        candidate_walls: r.candidate_count,
        weyl_roots: r.base_roots,
        chamber_group_order: r.chamber_group_order,
        automorphisms: automorphisms.unwrap_or_else(|_| empty.clone()),
        symplectic_subgroup: symplectic.unwrap_or(empty),
        involutions: SplitReport::from(&r.base_split),
        orbits: r
            .orbits
            .iter()
            .map(|o| OrbitReport {
                label: o.label.clone(),
                size: o.size,
                norm: o.norm.to_string(),
                ample_pairing: o.ample_pairing,
                nef_multiple: o.nef_multiple,
                representative: o.representative.clone(),
                crossing: o.crossing.as_ref().map(|c| CrossingReport {
                    weyl: c.weyl.clone(),
                    congruence: c.gamma.clone(),
                    involutions: SplitReport::from(&c.split),
                    ample_image_pairing: c.ample_image_pairing,
                }),
            })
            .collect(),
        fused_orbits: r.fused_orbits.clone(),
        generators: r.generators.clone(),
        generators_l26: r.generators_l26.clone(),
        walls: r.walls.iter().map(|w| w.dual.clone()).collect(),
        certificates,
    }
}

/// The orbit table: one row per wall orbit with its size, norm, pairing with the ample
/// class, involution counts (symplectic + Enriques + rational) and `⟨a', a⟩`.
pub fn orbit_table(r: &SurfaceReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "surface {}: |Aut(X,a)| = {}, walls = {}, involutions in Aut(X,a) = {} = {}+{}+{}",
        r.surface,
        r.automorphisms.order,
        r.walls.len(),
        r.involutions.total,
        r.involutions.symplectic,
        r.involutions.enriques,
        r.involutions.rational
    );
    let _ = writeln!(
        s,
        "{:<6} {:>5} {:>6} {:>6} {:>14} {:>8}",
        "orbit", "size", "norm", "<a,v>", "involutions", "<a',a>"
    );
    for o in &r.orbits {
        let (inv, pairing) = match &o.crossing {
            Some(c) => (
                format!(
                    "{}={}+{}+{}",
                    c.involutions.total, c.involutions.symplectic, c.involutions.enriques, c.involutions.rational
                ),
                c.ample_image_pairing.to_string(),
            ),
            None => ("nef".to_string(), "-".to_string()),
        };
        let _ = writeln!(
            s,
            "{:<6} {:>5} {:>6} {:>6} {:>14} {:>8}",
            o.label, o.size, o.norm, o.ample_pairing, inv, pairing
        );
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnriquesReport {
    pub schema_version: u32,
    /// The Enriques involution of surface 0 (20×20).
    #[serde(with = "crate::json::decimal")]
    pub involution: ZMat,
    /// Basis of the invariant lattice in surface coordinates.
    #[serde(with = "crate::json::decimal")]
    pub basis: ZMat,
    /// Halved Gram matrix on the basis.
    #[serde(with = "crate::json::decimal")]
    pub gram: ZMat,
    /// The ample class in basis coordinates.
    #[serde(with = "crate::json::decimal")]
    pub interior: ZVec,
    pub group: GroupReport,
    pub symplectic_image_order: usize,
    pub involutions_in_symplectic_image: bool,
    pub projected_walls: usize,
    /// Wall orbits in dual coordinates.
    #[serde(with = "crate::json::decimal")]
    pub wall_orbits_dual: Vec<Vec<ZVec>>,
    /// The same orbits as lattice vectors `r` with wall `r^⊥`.
    #[serde(with = "crate::json::decimal")]
    pub wall_orbits: Vec<Vec<ZVec>>,
    /// Generators of the finite group followed by the crossing element.
    #[serde(with = "crate::json::decimal")]
    pub generators: Vec<ZMat>,
    /// The wall (lattice vector) crossed by the last generator.
    #[serde(with = "crate::json::decimal")]
    pub crossing_wall: ZVec,
    pub certificates: Vec<Certificate>,
}

pub fn enriques_report(r: &EnriquesResult, certificates: Vec<Certificate>) -> EnriquesReport {
    let lat = &r.lattice;
    let crossing_wall = k3aut_core::arith::solve_left_integer(&lat.gram, &r.crossing_wall).unwrap_or_default();
    EnriquesReport {
        schema_version: SCHEMA_VERSION,
        involution: lat.involution.clone(),
        basis: lat.basis.clone(),
        gram: lat.gram.clone(),
        interior: r.chamber.interior.clone(),
        group: GroupReport::from(&r.fingerprint),
        symplectic_image_order: r.symplectic_image_order,
        involutions_in_symplectic_image: r.involutions_in_symplectic_image,
        projected_walls: r.chamber.defining.len(),
        wall_orbits_dual: r.chamber.orbits.clone(),
        wall_orbits: r.chamber.orbit_vectors.clone(),
        generators: r.generators.clone(),
        crossing_wall,
        certificates,
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}
