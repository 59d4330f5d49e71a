//! Published reference data: embeddings, ample classes, involution matrices, degree-2
//! polarization tables, the Enriques lattice data and special classes used in the examples.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub type ZVec = Vec<i64>;
pub type ZMat = Vec<Vec<i64>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolarizationRow {
    pub name: String,
    pub k: usize,
    #[serde(with = "crate::json::decimal")]
    pub h: ZVec,
    /// ADE type of the singularities of the double plane, e.g. `D4+2A5+A3`.
    pub sing: String,
    /// `⟨h, a_k⟩`.
    #[serde(with = "crate::json::decimal")]
    pub pairing_with_ample: i64,
}

/// One wall orbit of the base chamber.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitRow {
    pub label: String,
    pub size: usize,
    /// Norm of the primitive wall vector as a fraction, e.g. `-3/2`.
    pub norm: String,
    #[serde(with = "crate::json::decimal")]
    pub ample_pairing: i64,
    /// `[total, symplectic, Enriques, rational]` for orbits that are crossed.
    #[serde(default)]
    pub involutions: Option<[usize; 4]>,
    #[serde(default, with = "crate::json::decimal")]
    pub ample_image_pairing: Option<i64>,
}

/// Pairings of the lines and nodes on the quartic model under its order-4 symmetry; see
/// [`k3aut_core::k3::CyclicPattern`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuarticPattern {
    pub node_orbit_sizes: Vec<usize>,
    pub line_nodes: Vec<Vec<(usize, usize)>>,
    #[serde(with = "crate::json::decimal")]
    pub rows: Vec<Vec<ZVec>>,
}

impl QuarticPattern {
    pub fn to_core(&self) -> k3aut_core::k3::CyclicPattern {
        k3aut_core::k3::CyclicPattern {
            node_orbit_sizes: self.node_orbit_sizes.clone(),
            line_nodes: self.line_nodes.clone(),
            rows: self.rows.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Reference {
    pub schema_version: u32,
    #[serde(with = "crate::json::decimal")]
    pub embeddings_s1_s2: Vec<[ZVec; 2]>,
    #[serde(with = "crate::json::decimal")]
    pub ample: Vec<ZVec>,
    #[serde(with = "crate::json::decimal")]
    pub enriques_involution_x0: ZMat,
    #[serde(with = "crate::json::decimal")]
    pub order4_x0: ZMat,
    #[serde(with = "crate::json::decimal")]
    pub symplectic_involution_x1: ZMat,
    #[serde(with = "crate::json::decimal")]
    pub double_plane_tlh0_3: ZMat,
    pub polarizations: Vec<PolarizationRow>,
    #[serde(with = "crate::json::decimal")]
    pub enriques_basis: ZMat,
    #[serde(with = "crate::json::decimal")]
    pub enriques_gram: ZMat,
    #[serde(with = "crate::json::decimal")]
    pub enriques_generators: BTreeMap<String, ZMat>,
    #[serde(with = "crate::json::decimal")]
    pub enriques_orbit_large: Vec<ZVec>,
    #[serde(with = "crate::json::decimal")]
    pub enriques_orbit_small: Vec<ZVec>,
    #[serde(with = "crate::json::decimal")]
    pub quartic_h: ZVec,
    #[serde(with = "crate::json::decimal")]
    pub nef_wall_x0_twice: ZVec,
    #[serde(with = "crate::json::decimal")]
    pub nef_wall_x1_twice: ZVec,
    #[serde(with = "crate::json::decimal")]
    pub h_sigma_x1: ZVec,
    #[serde(with = "crate::json::decimal")]
    pub h_prime_x2: ZVec,
    #[serde(with = "crate::json::decimal")]
    pub h_second_x2: ZVec,
    pub quartic_pattern: QuarticPattern,
    /// Wall orbits of the base chamber per surface (keys `"0"`, `"1"`, `"2"`).
    pub orbit_table: BTreeMap<String, Vec<OrbitRow>>,
    /// `(element order, class size)` lists: `surface0`, `surface1_2` and `enriques`.
    pub class_tables: BTreeMap<String, Vec<(usize, usize)>>,
}

const BUNDLED: &str = include_str!("../fixtures/reference.json");

impl Reference {
    /// The reference data shipped with the crate.
    pub fn bundled() -> Self {
        serde_json::from_str(BUNDLED).expect("bundled reference data parses")
    }

    /// The bundled reference data as JSON text.
    pub fn bundled_json() -> &'static str {
        BUNDLED
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn polarization(&self, name: &str) -> Option<&PolarizationRow> {
        self.polarizations.iter().find(|p| p.name == name)
    }
}
