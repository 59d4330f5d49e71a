//! The even unimodular hyperbolic lattice of rank 26, its Conway chambers and Weyl
//! vectors, the primitive embeddings of the Néron–Severi lattices, and the generation of
//! automorphism groups by exploring induced chambers.
//!
//! Notation: `L` is the rank-26 lattice, `S` the embedded Néron–Severi lattice and `R` its
//! orthogonal complement (a negative definite root lattice). Vectors of `S∨` and `R∨` are
//! stored by dual coordinates, see [`crate::chambers`]. For `x ∈ L` the dual coordinates of
//! the projections are `x·G_L·Eᵀ` and `x·G_L·Bᵀ` where `E`, `B` are the basis rows of `S`
//! and `R` inside `L`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{self, q, QMat, QVec, ZMat, ZVec, Q, R64};
use crate::chambers::{self, Chamber, ChamberError, DualForm, Wall};
use crate::discform::{self, DiscError, DiscriminantGroup, FqfAutomorphism};
use crate::enumeration::{self, BallEnumerator, EnumError, FiberEnumerator};
use crate::groups::{GroupError, MatrixGroup};
use crate::k3::{self, InvolutionType, SurfaceConfig};
use crate::lattice_core::{self, IntegerLattice, LatticeError, RatVec, SublatticeEmbedding};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BorcherdsError {
    NotIsotropic,
    NotPrimitive,
    InvalidWeylVector,
    /// The wall is a wall of the nef cone; crossing it leaves the nef cone.
    NefWall,
    /// The reflection walk did not end in a chamber adjacent across the wall.
    CrossingFailed,
    NoExtension,
    CongruenceNotFound(usize),
    NotInTorelliGroup,
    Lattice(LatticeError),
    Enumeration(EnumError),
    Chamber(ChamberError),
    Discriminant(DiscError),
    Group(GroupError),
}

impl fmt::Display for BorcherdsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotIsotropic => write!(f, "vector is not isotropic"),
            Self::NotPrimitive => write!(f, "vector is not primitive"),
            Self::InvalidWeylVector => write!(f, "vector is not a Weyl vector inducing a chamber"),
            Self::NefWall => write!(f, "wall bounds the nef cone"),
            Self::CrossingFailed => write!(f, "wall crossing did not reach the adjacent chamber"),
            Self::NoExtension => write!(f, "no isometry of the complement matches the discriminant action"),
            Self::CongruenceNotFound(i) => write!(f, "no congruence in the Torelli group for orbit {i}"),
            Self::NotInTorelliGroup => write!(f, "isometry is not in the Torelli group"),
            Self::Lattice(e) => write!(f, "lattice error: {e}"),
            Self::Enumeration(e) => write!(f, "enumeration error: {e}"),
            Self::Chamber(e) => write!(f, "chamber error: {e}"),
            Self::Discriminant(e) => write!(f, "discriminant error: {e}"),
            Self::Group(e) => write!(f, "group error: {e}"),
        }
    }
}

impl core::error::Error for BorcherdsError {}

impl From<LatticeError> for BorcherdsError {
    fn from(e: LatticeError) -> Self {
        Self::Lattice(e)
    }
}
impl From<EnumError> for BorcherdsError {
    fn from(e: EnumError) -> Self {
        Self::Enumeration(e)
    }
}
impl From<ChamberError> for BorcherdsError {
    fn from(e: ChamberError) -> Self {
        Self::Chamber(e)
    }
}
impl From<DiscError> for BorcherdsError {
    fn from(e: DiscError) -> Self {
        Self::Discriminant(e)
    }
}
impl From<GroupError> for BorcherdsError {
    fn from(e: GroupError) -> Self {
        Self::Group(e)
    }
}

// ---------------------------------------------------------------------------
// the rank-26 lattice

/// `[[0,1],[1,−2]]`: the hyperbolic plane spanned by a fiber class and a zero section.
pub fn u_ell() -> ZMat {
    vec![vec![0, 1], vec![1, -2]]
}

/// Gram matrix `diag(U_ell, E8⁻, E8⁻, E8⁻)`.
pub fn l26_gram() -> ZMat {
    let e8 = lattice_core::e8_gram();
    lattice_core::direct_sum(&[u_ell(), e8.clone(), e8.clone(), e8])
}

pub fn l26() -> IntegerLattice {
    IntegerLattice::new(l26_gram()).expect("valid Gram matrix")
}

const E8_BLOCK_W0: [i64; 8] = [-68, -46, -91, -135, -110, -84, -57, -29];

/// The Weyl vector of the base Conway chamber.
pub fn w0() -> ZVec {
    let mut w = vec![61, 30];
    for _ in 0..3 {
        w.extend_from_slice(&E8_BLOCK_W0);
    }
    w
}

/// An isotropic vector pairing to 1 with [`w0`], exhibiting a hyperbolic plane.
pub fn w0_prime() -> ZVec {
    let mut w = vec![62, 30, -71, -48, -95, -141, -115, -88, -60, -31];
    for _ in 0..2 {
        w.extend_from_slice(&E8_BLOCK_W0);
    }
    w
}

fn check_isotropic_primitive(w: &[i64]) -> Result<(), BorcherdsError> {
    let g = l26_gram();
    if w.len() != 26 || arith::bilinear(&g, w, w) != 0 {
        return Err(BorcherdsError::NotIsotropic);
    }
    if arith::gcd_slice(w) != 1 {
        return Err(BorcherdsError::NotPrimitive);
    }
    Ok(())
}

/// Whether a lattice is even, unimodular, negative definite of rank 24 without roots.
fn is_leech_like(gram: &ZMat) -> bool {
    let Ok(l) = IntegerLattice::new(gram.clone()) else {
        return false;
    };
    l.rank() == 24
        && l.is_even()
        && l.det().abs().is_one()
        && l.is_negative_definite()
        && enumeration::short_vectors_with(&l, -2, true).is_ok_and(|v| v.is_empty())
}

/// Gram matrix of `⟨w⟩⊥/⟨w⟩` for a primitive isotropic `w`.
pub fn isotropic_quotient_gram(w: &[i64]) -> Result<ZMat, BorcherdsError> {
    check_isotropic_primitive(w)?;
    let g = l26_gram();
    let gw: ZMat = arith::vec_mat(w, &g).into_iter().map(|x| vec![x]).collect();
    let k = arith::left_kernel(&gw);
    let c = arith::solve_left_integer(&k, w).ok_or(BorcherdsError::NotPrimitive)?;
    // complete c to a unimodular matrix: with U·c·V = (1,0,…), c = ±(row 0 of V⁻¹)
    let s = arith::smith(&vec![c]);
    let v_inv = lattice_core::unimodular_inverse(&s.v);
    let rows: ZMat = v_inv[1..].iter().map(|r| arith::vec_mat(r, &k)).collect();
    Ok(arith::gram_of(&g, &rows))
}

/// Whether `⟨w⟩⊥/⟨w⟩` is the negative definite Leech lattice, i.e. even unimodular of rank
/// 24 with no vectors of norm −2. This is exactly the condition for `w` to be the Weyl
/// vector of a Conway chamber.
pub fn leech_check(w: &[i64]) -> Result<bool, BorcherdsError> {
    Ok(is_leech_like(&isotropic_quotient_gram(w)?))
}

/// Cross-check through an explicit partner `w′` with `⟨w,w′⟩ = 1`: the orthogonal
/// complement of the unimodular plane `⟨w,w′⟩` must be the Leech lattice.
pub fn leech_check_with_partner(w: &[i64], partner: &[i64]) -> Result<bool, BorcherdsError> {
    check_isotropic_primitive(w)?;
    let l = l26();
    if l.pairing(w, partner) != 1 {
        return Err(BorcherdsError::InvalidWeylVector);
    }
    let plane = SublatticeEmbedding::new(l, vec![w.to_vec(), partner.to_vec()])?;
    let comp = lattice_core::orthogonal_complement(&plane)?;
    Ok(is_leech_like(&comp.induced_gram()))
}

// ---------------------------------------------------------------------------
// embeddings

/// Coefficients of the images of `s₁`, `s₂` in the first `E8⁻` summand.
pub fn embedding_s_rows(k: usize) -> [[i64; 8]; 2] {
    match k {
        0 => [[3, 2, 4, 6, 6, 6, 4, 2], [6, 4, 8, 12, 9, 6, 4, 2]],
        1 => [[3, 2, 4, 6, 5, 4, 3, 2], [6, 4, 8, 12, 9, 6, 3, 0]],
        2 => [[3, 2, 4, 6, 5, 4, 3, 2], [6, 4, 8, 12, 10, 7, 4, 1]],
        _ => panic!("surface index must be 0, 1 or 2"),
    }
}

/// Rows of the embedding `S_k → L` in the basis `f, z, s₁, s₂, e₁…e₈, e′₁…e′₈`:
/// `f ↦ f`, `z ↦ z`, `s₁, s₂` into the first `E8⁻`, `eᵢ ↦ e′ᵢ`, `e′ᵢ ↦ e″ᵢ`.
pub fn embedding_rows(k: usize) -> ZMat {
    let mut rows = vec![vec![0i64; 26]; 20];
    rows[0][0] = 1;
    rows[1][1] = 1;
    for (j, s) in embedding_s_rows(k).iter().enumerate() {
        rows[2 + j][2..10].copy_from_slice(s);
    }
    for i in 0..16 {
        rows[4 + i][10 + i] = 1;
    }
    rows
}

/// The embedding of `S_k` into `L`, checked to be primitive with the expected Gram matrix.
pub fn embed(k: usize) -> Result<SublatticeEmbedding, BorcherdsError> {
    let e = SublatticeEmbedding::new(l26(), embedding_rows(k))?;
    if !e.is_primitive() {
        return Err(BorcherdsError::Lattice(LatticeError::NotPrimitive));
    }
    if e.induced_gram() != k3::surface_gram(k) {
        return Err(BorcherdsError::Lattice(LatticeError::NotIsometry));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// the split L ⊗ Q = (S ⊕ R) ⊗ Q

/// Precomputed data for a primitive embedding `S ⊂ L` with negative definite complement.
#[derive(Debug, Clone)]
pub struct Splitting {
    pub l_gram: ZMat,
    pub s_gram: ZMat,
    /// Basis rows of `S` in `L`.
    pub s_rows: ZMat,
    /// LLL-reduced basis rows of `R = S⊥` in `L`.
    pub r_rows: ZMat,
    pub r_gram: ZMat,
    /// `x ↦ x·s_pair` gives the dual coordinates of `pr_S(x)`.
    s_pair: ZMat,
    r_pair: ZMat,
    s_inv: QMat,
    r_inv: QMat,
    /// Inverse of the 26×26 matrix `[s_pair | r_pair]`.
    split_inv: QMat,
    /// `M = [E; B]` and its inverse, for assembling isometries of `L`.
    sr_rows: ZMat,
    sr_inv: QMat,
    pub s_form: DualForm,
    pub r_form: DualForm,
    /// Nonzero dual coordinates `t` of `R∨` with `⟨t,t⟩ > −2`, with `−|det R|·⟨t,t⟩`.
    r_dual_short: Vec<(ZVec, i64)>,
    /// For each entry of `r_dual_short`, some `x ∈ L` with `pr_R(x)` equal to it.
    r_dual_lifts: Vec<ZVec>,
}

impl Splitting {
    pub fn new(emb: &SublatticeEmbedding) -> Result<Self, BorcherdsError> {
        let l_gram = emb.ambient.gram().clone();
        let s_rows = emb.basis_rows.clone();
        let s_gram = emb.induced_gram();
        let comp = lattice_core::orthogonal_complement(emb)?;
        let r0 = comp.basis_rows.clone();
        let rg0 = arith::gram_of(&l_gram, &r0);
        if !IntegerLattice::new(rg0.clone())?.is_negative_definite() {
            return Err(BorcherdsError::Lattice(LatticeError::NotDefinite));
        }
        let t = arith::lll_gram(&arith::neg_mat(&rg0));
        let r_rows = arith::mat_mul(&t, &r0);
        let r_gram = arith::gram_of(&l_gram, &r_rows);
        let s_pair = arith::mat_mul(&l_gram, &arith::transpose(&s_rows));
        let r_pair = arith::mat_mul(&l_gram, &arith::transpose(&r_rows));
        let split: ZMat = s_pair
            .iter()
            .zip(&r_pair)
            .map(|(a, b)| a.iter().chain(b).copied().collect())
            .collect();
        let split_inv = arith::q_inverse(&arith::to_qmat(&split)).expect("nondegenerate");
        let sr_rows: ZMat = s_rows.iter().chain(&r_rows).cloned().collect();
        let sr_inv = arith::q_inverse(&arith::to_qmat(&sr_rows)).expect("nondegenerate");
        let s_inv = arith::q_inverse(&arith::to_qmat(&s_gram)).expect("nondegenerate");
        let r_inv = arith::q_inverse(&arith::to_qmat(&r_gram)).expect("nondegenerate");
        let s_form = DualForm::new(&s_gram);
        let r_form = DualForm::new(&r_gram);
        // R∨ vectors of norm > −2: −scale·⟨t,t⟩ = t·(−adj)·tᵀ < 2·scale
        let p = arith::neg_mat(&r_form.adj);
        let ball = BallEnumerator::new(&p)?;
        let mut r_dual_short = Vec::new();
        let bound = q(2 * r_form.scale - 1);
        ball.for_each(&vec![Q::zero(); r_rows.len()], &bound, |t, v| {
            r_dual_short.push((t.to_vec(), arith::big_to_i64(&v.to_integer())));
        });
        r_dual_short.sort();
        let r_dual_lifts = r_dual_short
            .iter()
            .map(|(t, _)| arith::solve_left_integer(&r_pair, t).expect("L is unimodular"))
            .collect();
        Ok(Self {
            l_gram,
            s_gram,
            s_rows,
            r_rows,
            r_gram,
            s_pair,
            r_pair,
            s_inv,
            r_inv,
            split_inv,
            sr_rows,
            sr_inv,
            s_form,
            r_form,
            r_dual_short,
            r_dual_lifts,
        })
    }

    pub fn s_rank(&self) -> usize {
        self.s_rows.len()
    }

    /// Dual coordinates of `pr_S(x)`.
    pub fn s_dual(&self, x: &[i64]) -> ZVec {
        arith::vec_mat(x, &self.s_pair)
    }

    pub fn r_dual(&self, x: &[i64]) -> ZVec {
        arith::vec_mat(x, &self.r_pair)
    }

    /// `pr_S(x)` in coordinates of the basis of `S`.
    pub fn s_coords(&self, x: &[i64]) -> QVec {
        arith::q_vec_mat(&arith::to_qvec(&self.s_dual(x)), &self.s_inv)
    }

    /// `S`-coordinates of a dual vector given by dual coordinates.
    pub fn s_dual_to_coords(&self, t: &[i64]) -> RatVec {
        RatVec::from_q(&arith::q_vec_mat(&arith::to_qvec(t), &self.s_inv))
    }

    /// The roots of `R`.
    pub fn r_roots(&self) -> Vec<ZVec> {
        let r = IntegerLattice::new(self.r_gram.clone()).expect("valid Gram matrix");
        enumeration::short_vectors_reduced(&r, -2)
    }

    /// The vector of `L` with prescribed projections (given by dual coordinates), if integral.
    pub fn assemble(&self, s_dual: &[i64], r_dual: &[i64]) -> Option<ZVec> {
        let t: QVec = s_dual.iter().chain(r_dual).map(|&x| q(x)).collect();
        let x = arith::q_vec_mat(&t, &self.split_inv);
        if x.iter().all(|c| c.is_integer()) {
            Some(x.iter().map(|c| arith::big_to_i64(&c.to_integer())).collect())
        } else {
            None
        }
    }

    /// The isometry of `L ⊗ Q` acting as `γ` on `S` and `ρ` on `R`.
    pub fn block_isometry(&self, gamma: &ZMat, rho: &ZMat) -> Option<ZMat> {
        let ns = gamma.len();
        let n = self.l_gram.len();
        let mut d = vec![vec![Q::zero(); n]; n];
        for i in 0..ns {
            for j in 0..ns {
                d[i][j] = q(gamma[i][j]);
            }
        }
        for i in 0..rho.len() {
            for j in 0..rho.len() {
                d[ns + i][ns + j] = q(rho[i][j]);
            }
        }
        let m = arith::to_qmat(&self.sr_rows);
        let a = arith::q_mat_mul(&arith::q_mat_mul(&self.sr_inv, &d), &m);
        if a.iter().all(|r| r.iter().all(|x| x.is_integer())) {
            Some(
                a.iter()
                    .map(|r| r.iter().map(|x| arith::big_to_i64(&x.to_integer())).collect())
                    .collect(),
            )
        } else {
            None
        }
    }
}

// ---------------------------------------------------------------------------
// roots attached to a Weyl vector

/// `Δ_w = { r ∈ L : ⟨r,r⟩ = −2, ⟨r,w⟩ = 1, ⟨r_S, r_S⟩ < 0 }`, sorted.
///
/// Each such `r` decomposes as `r_S + r_R` with `r_R ∈ R∨` of norm in `(−2, 0]`; for each
/// such `r_R` the `S`-part is enumerated in the coset of `S` it determines, on the affine
/// hyperplane fixed by the pairing with `w`.
pub fn delta_w(sp: &Splitting, w: &[i64]) -> Result<Vec<ZVec>, BorcherdsError> {
    check_isotropic_primitive(w)?;
    let w_s = sp.s_coords(w);
    let ws_norm = arith::q_dot(&arith::q_vec_mat(&w_s, &arith::to_qmat(&sp.s_gram)), &w_s);
    if !ws_norm.is_positive() {
        return Err(BorcherdsError::InvalidWeylVector);
    }
    let fiber = FiberEnumerator::new(&sp.s_gram, &[w_s])?;
    let tw_r = sp.r_dual(w);
    let w_r = arith::q_vec_mat(&arith::to_qvec(&tw_r), &sp.r_inv);
    let scale = q(sp.r_form.scale);
    let mut out = Vec::new();
    let mut visit = |x0: &[i64], t_r: &[i64], val: i64| {
        // ⟨r_R, w_R⟩ and −⟨r_R, r_R⟩
        let rw = arith::q_dot(&arith::to_qvec(t_r), &w_r);
        let target = Q::one() - rw;
        let d = q(-2) + q(val) / &scale;
        let shift = sp.s_coords(x0);
        for s in fiber.solve(&shift, &[target], &d) {
            let r = arith::add_vec(x0, &arith::vec_mat(&s, &sp.s_rows));
            out.push(r);
        }
    };
    let zero26 = vec![0i64; 26];
    visit(&zero26, &vec![0; sp.r_rows.len()], 0);
    for ((t, val), x0) in sp.r_dual_short.iter().zip(&sp.r_dual_lifts) {
        if t.iter().any(|&c| c != 0) {
            visit(x0, t, *val);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// `pr_S(Δ_w)` as primitive dual coordinates, deduplicated and sorted.
pub fn candidate_walls(sp: &Splitting, roots: &[ZVec]) -> Vec<ZVec> {
    let set: BTreeSet<ZVec> = roots.iter().map(|r| arith::primitive_part(&sp.s_dual(r))).collect();
    set.into_iter().collect()
}

/// If `(v)⊥` is a wall of the nef cone, the positive integer `n` with `n·v ∈ S` a root.
pub fn nef_wall_multiple(sp: &Splitting, t: &[i64]) -> Option<i64> {
    let nu = sp.s_form.norm(t);
    let ratio = q(-2) / &nu;
    if !ratio.is_integer() || !ratio.is_positive() {
        return None;
    }
    let r = ratio.to_integer();
    let n = r.sqrt();
    if &n * &n != r {
        return None;
    }
    let v = sp.s_dual_to_coords(t);
    let n = arith::big_to_i64(&n);
    (v.scale(R64::from_integer(n))).is_integral().then_some(n)
}

/// Roots `r` of `L` with `r_S` a positive multiple of the primitive dual vector `t`.
/// These are exactly the roots whose mirrors contain the hyperplane `(t)⊥` of `S`.
fn roots_over_wall(sp: &Splitting, t: &[i64]) -> Vec<ZVec> {
    let nu = sp.s_form.norm(t);
    let scale = sp.r_form.scale;
    let mut out = Vec::new();
    let mut lambda = 1i64;
    loop {
        // required −⟨r_R, r_R⟩ = 2 + λ²ν ≥ 0
        let need = q(2) + q(lambda * lambda) * &nu;
        if need.is_negative() {
            break;
        }
        let scaled = need * q(scale);
        if scaled.is_integer() {
            let val = arith::big_to_i64(&scaled.to_integer());
            let ts = arith::scale_vec(t, lambda);
            let mut push = |t_r: &[i64]| {
                if let Some(x) = sp.assemble(&ts, t_r) {
                    debug_assert_eq!(arith::bilinear(&sp.l_gram, &x, &x), -2);
                    out.push(x);
                }
            };
            if val == 0 {
                push(&vec![0; sp.r_rows.len()]);
            } else {
                for (tr, v) in &sp.r_dual_short {
                    if *v == val {
                        push(tr);
                    }
                }
            }
        }
        lambda += 1;
    }
    out.sort();
    out
}

/// The Weyl vector of the Conway chamber inducing the chamber adjacent to the one induced
/// by `w` across the wall with primitive dual coordinates `wall`.
///
/// A point just beyond the wall is separated from the chamber of `w` exactly by the mirrors
/// of the roots over the wall; the walk reflects `w` in those that are walls of the current
/// Conway chamber (`⟨r,w⟩ = 1`) until none is left. `witness` is a point in the relative
/// interior of the wall, used to certify the result.
pub fn adjacent_weyl(sp: &Splitting, w: &[i64], wall: &[i64], witness: &RatVec) -> Result<ZVec, BorcherdsError> {
    if nef_wall_multiple(sp, wall).is_some() {
        return Err(BorcherdsError::NefWall);
    }
    let mut pending = roots_over_wall(sp, wall);
    if pending.is_empty() {
        return Err(BorcherdsError::CrossingFailed);
    }
    let mut w = w.to_vec();
    loop {
        let hit = pending.iter().position(|r| arith::bilinear(&sp.l_gram, r, &w) == 1);
        match hit {
            Some(i) => {
                let r = pending.remove(i);
                w = arith::add_vec(&w, &r);
            }
            None => break,
        }
    }
    if !pending.is_empty() {
        return Err(BorcherdsError::CrossingFailed);
    }
    // certify: the new chamber has the opposite wall and contains the witness
    let cand = candidate_walls(sp, &delta_w(sp, &w)?);
    let opposite = arith::neg_vec(wall);
    if !cand.contains(&opposite) || cand.iter().any(|u| arith::dot(u, &witness.num) < 0) {
        return Err(BorcherdsError::CrossingFailed);
    }
    Ok(w)
}

// ---------------------------------------------------------------------------
// extension of isometries to L

/// Data for extending isometries of `S` to `L` through the discriminant glue.
#[derive(Debug, Clone)]
pub struct Extender {
    s_disc: DiscriminantGroup,
    r_disc: DiscriminantGroup,
    /// Glue isomorphism `A_S → A_R` on generators of `A_S`.
    glue: Vec<ZVec>,
    glue_table: BTreeMap<ZVec, ZVec>,
    glue_inv_table: BTreeMap<ZVec, ZVec>,
    /// `O(R)` indexed by the induced action on generators of `A_R`.
    r_by_action: BTreeMap<Vec<ZVec>, ZMat>,
    pub r_group_order: usize,
}

impl Extender {
    pub fn new(sp: &Splitting) -> Result<Self, BorcherdsError> {
        let s = IntegerLattice::new(sp.s_gram.clone())?;
        let r = IntegerLattice::new(sp.r_gram.clone())?;
        let s_disc = discform::discriminant_form(&s)?;
        let r_disc = discform::discriminant_form(&r)?;
        let glue: Vec<ZVec> = s_disc
            .generators
            .iter()
            .map(|x| {
                let t = arith::vec_mat(&x.num, &sp.s_gram);
                let t: ZVec = t.iter().map(|c| c / x.den).collect();
                let l = arith::solve_left_integer(&sp.s_pair, &t).expect("L is unimodular");
                let y = RatVec::from_q(&arith::q_vec_mat(&arith::to_qvec(&sp.r_dual(&l)), &sp.r_inv));
                r_disc.class_of(&y)
            })
            .collect();
        let f = FqfAutomorphism { images: glue.clone() };
        let mut glue_table = BTreeMap::new();
        let mut glue_inv_table = BTreeMap::new();
        for a in s_disc.form.elements() {
            let b = f.apply_between(&r_disc.form, &a);
            glue_inv_table.insert(b.clone(), a.clone());
            glue_table.insert(a, b);
        }
        if glue_inv_table.len() != r_disc.form.order() {
            return Err(BorcherdsError::NoExtension);
        }
        let group = lattice_core::definite_orthogonal_group(&r, 8)?;
        let r_group_order = group.len();
        // the identity represents the trivial action, so identities extend to identities
        let mut r_by_action = BTreeMap::new();
        let id = arith::identity(sp.r_rows.len());
        r_by_action.insert(r_disc.eta(&id).images, id);
        for g in group {
            r_by_action.entry(r_disc.eta(&g).images).or_insert(g);
        }
        Ok(Self {
            s_disc,
            r_disc,
            glue,
            glue_table,
            glue_inv_table,
            r_by_action,
            r_group_order,
        })
    }

    /// Whether `η_R : O(R) → O(q_R)` is onto.
    pub fn eta_r_surjective(&self) -> Result<bool, BorcherdsError> {
        Ok(self.r_by_action.len() == discform::oq_group(&self.r_disc.form)?.len())
    }

    /// An isometry of `L` restricting to `γ` on `S` and preserving `R`.
    pub fn extend(&self, sp: &Splitting, gamma: &ZMat) -> Result<ZMat, BorcherdsError> {
        let eta = self.s_disc.eta(gamma);
        // target action on A_R: b ↦ ψ(ψ⁻¹(b)·η(γ)), evaluated on generators of A_R
        let ng = self.r_disc.form.generator_orders.len();
        let images: Vec<ZVec> = (0..ng)
            .map(|j| {
                let mut e = vec![0i64; ng];
                e[j] = 1;
                let a = &self.glue_inv_table[&e];
                let a2 = eta.apply(&self.s_disc.form, a);
                self.glue_table[&a2].clone()
            })
            .collect();
        let rho = self.r_by_action.get(&images).ok_or(BorcherdsError::NoExtension)?;
        let g = sp.block_isometry(gamma, rho).ok_or(BorcherdsError::NoExtension)?;
        if !lattice_core::is_isometry(&sp.l_gram, &g) {
            return Err(BorcherdsError::NoExtension);
        }
        Ok(g)
    }

    pub fn glue_images(&self) -> &[ZVec] {
        &self.glue
    }
}

/// Extends `γ ∈ G_k` to an isometry of `L` preserving the embedded `S_k`.
pub fn extend_to_l(cfg: &SurfaceConfig, sp: &Splitting, ext: &Extender, gamma: &ZMat) -> Result<ZMat, BorcherdsError> {
    if !cfg.torelli().g_membership(gamma) {
        return Err(BorcherdsError::NotInTorelliGroup);
    }
    ext.extend(sp, gamma)
}

// ---------------------------------------------------------------------------
// the generation loop

/// An induced chamber with the Weyl vector of a Conway chamber inducing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedChamberRecord {
    pub weyl: ZVec,
    pub walls: Vec<ZVec>,
    /// Isometry carrying the base chamber onto this one (absent for the base chamber).
    pub congruence: Option<ZMat>,
}

/// Counts of involutions by type.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct InvolutionSplit {
    pub symplectic: usize,
    pub enriques: usize,
    pub rational: usize,
}

impl InvolutionSplit {
    pub fn total(&self) -> usize {
        self.symplectic + self.enriques + self.rational
    }

    pub fn add(&mut self, t: InvolutionType) {
        match t {
            InvolutionType::Symplectic => self.symplectic += 1,
            InvolutionType::Enriques => self.enriques += 1,
            InvolutionType::Rational => self.rational += 1,
        }
    }
}

/// Data for crossing one wall orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub weyl: ZVec,
    /// An element of `G_k` mapping the base chamber onto the adjacent one.
    pub gamma: ZMat,
    pub gamma_l26: ZMat,
    /// `{ g·γ : g ∈ Aut(X,a) }` of order 2, sorted.
    pub involutions: Vec<ZMat>,
    pub involution_types: Vec<InvolutionType>,
    pub split: InvolutionSplit,
    /// `⟨a·γ, a⟩` for the ample class `a`.
    pub ample_image_pairing: i64,
}

/// One orbit of walls of the base chamber under `Aut(X,a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    pub label: alloc::string::String,
    pub representative: ZVec,
    pub witness: RatVec,
    pub size: usize,
    /// `⟨v,v⟩` of the primitive dual wall vector.
    pub norm: R64,
    /// `⟨a, v⟩`.
    pub ample_pairing: i64,
    /// `n` with `n·v` a smooth rational curve class, if the wall bounds the nef cone.
    pub nef_multiple: Option<i64>,
    pub crossing: Option<Crossing>,
}

/// The outcome of the generation for one surface.
#[derive(Debug, Clone)]
pub struct GenerationResult {
    pub k: usize,
    pub weyl: ZVec,
    pub ample: ZVec,
    pub candidate_count: usize,
    pub base_roots: usize,
    pub walls: Vec<Wall>,
    pub chamber_group_order: usize,
    /// `Aut(X,a)`, sorted.
    pub aut: Vec<ZMat>,
    pub aut_generators: Vec<ZMat>,
    pub aut_generators_l26: Vec<ZMat>,
    /// Involutions in `Aut(X,a)` and their types.
    pub base_involutions: Vec<ZMat>,
    pub base_involution_types: Vec<InvolutionType>,
    pub base_split: InvolutionSplit,
    pub orbits: Vec<OrbitRecord>,
    /// The orbits of the full chamber group as groups of orbit indices.
    pub fused_orbits: Vec<Vec<usize>>,
    /// Generators of `Aut(X)`: those of `Aut(X,a)` followed by one congruence per crossed orbit.
    pub generators: Vec<ZMat>,
    pub generators_l26: Vec<ZMat>,
    pub tessellation_checked: bool,
}

impl GenerationResult {
    /// A faithful invariant point set for `Aut(X,a)`: the wall vectors in lattice
    /// coordinates, scaled to be integral.
    pub fn faithful_points(&self) -> Vec<ZVec> {
        let form = DualForm::new(&k3::surface_gram(self.k));
        self.walls.iter().map(|w| arith::vec_mat(&w.dual, &form.adj)).collect()
    }

    /// `Aut(X,a)` as a permutation group on the walls.
    pub fn aut_group(&self) -> Result<MatrixGroup, BorcherdsError> {
        let g = MatrixGroup::generate(&self.aut_generators, &self.faithful_points(), self.ample.len())?;
        if g.elements() != self.aut.as_slice() {
            return Err(BorcherdsError::Group(GroupError::NotClosed));
        }
        Ok(g)
    }

    /// For an involution `g` mapping the base chamber onto an adjacent one: the index of the
    /// crossed orbit, certified by conjugating `g` by an element of `Aut(X,a)` into the
    /// involutions recorded for that orbit's representative wall.
    pub fn crossing_orbit_of(&self, g: &ZMat) -> Option<usize> {
        let group = self.aut_group().ok()?;
        self.orbits.iter().position(|o| {
            o.crossing.as_ref().is_some_and(|c| {
                (0..group.order()).any(|h| {
                    let hi = &group.elements()[group.inverse(h)];
                    let conj = arith::mat_mul(&arith::mat_mul(&group.elements()[h], g), hi);
                    c.involutions.binary_search(&conj).is_ok()
                })
            })
        })
    }

    /// The elements of `Aut(X,a)` acting trivially on the transcendental periods.
    pub fn symplectic_subgroup(&self) -> Result<MatrixGroup, BorcherdsError> {
        let cfg = SurfaceConfig::new(self.k);
        let torelli = cfg.torelli();
        let mut elems = Vec::new();
        for g in &self.aut {
            if torelli
                .symplectic_level(g)
                .map_err(|_| BorcherdsError::NotInTorelliGroup)?
                == 1
            {
                elems.push(g.clone());
            }
        }
        Ok(MatrixGroup::from_elements(
            &elems,
            &self.faithful_points(),
            self.ample.len(),
        )?)
    }
}

/// State after the base chamber has been analyzed; orbit crossings can be computed
/// independently (and in parallel) from it.
#[derive(Debug, Clone)]
pub struct BaseChamber {
    pub cfg: SurfaceConfig,
    pub splitting: Splitting,
    pub extender: Extender,
    pub weyl: ZVec,
    pub roots: Vec<ZVec>,
    pub candidates: Vec<ZVec>,
    pub walls: Vec<Wall>,
    pub chamber_group: Vec<ZMat>,
    pub aut: MatrixGroup,
    pub orbits: Vec<OrbitRecord>,
    pub fused_orbits: Vec<Vec<usize>>,
}

fn involution_types(
    cfg: &SurfaceConfig,
    invols: &[ZMat],
) -> Result<(Vec<InvolutionType>, InvolutionSplit), BorcherdsError> {
    let mut split = InvolutionSplit::default();
    let mut types = Vec::with_capacity(invols.len());
    for m in invols {
        let t = k3::classify_involution(cfg, m).map_err(|_| BorcherdsError::NotInTorelliGroup)?;
        split.add(t);
        types.push(t);
    }
    Ok((types, split))
}

impl BaseChamber {
    pub fn new(k: usize) -> Result<Self, BorcherdsError> {
        let cfg = SurfaceConfig::new(k);
        let emb = embed(k)?;
        let sp = Splitting::new(&emb)?;
        let extender = Extender::new(&sp)?;
        let weyl = w0();
        let roots = delta_w(&sp, &weyl)?;
        let candidates = candidate_walls(&sp, &roots);
        let s_lat = IntegerLattice::new(sp.s_gram.clone())?;
        let chamber = Chamber::new(s_lat, candidates.clone(), RatVec::integral(cfg.ample.clone()))?;
        // isometries of S preserving the candidate set contain the chamber group
        let stab = chambers::set_stabilizer(&sp.s_gram, &candidates)?;
        let walls = chambers::extract_walls_symmetric(&chamber, &stab)?;
        let chamber_group = chambers::chamber_aut(&chamber, &walls)?;
        let torelli = cfg.torelli();
        let aut_elems: Vec<ZMat> = chamber_group
            .iter()
            .filter(|g| torelli.g_membership(g))
            .cloned()
            .collect();
        let wall_duals: Vec<ZVec> = walls.iter().map(|w| w.dual.clone()).collect();
        // act on walls through the dual action; use the walls as a faithful point set
        let dual_elems: Vec<ZMat> = aut_elems.iter().map(chambers::dual_action).collect();
        let dual_group = MatrixGroup::from_elements(&dual_elems, &wall_duals, sp.s_rank())?;
        let gens: Vec<ZMat> = dual_group.generators().iter().map(chambers::from_dual_action).collect();
        let aut = MatrixGroup::generate(&gens, &spanning_points(&sp, &walls), sp.s_rank())?;
        if aut.order() != aut_elems.len() {
            return Err(BorcherdsError::Group(GroupError::NotClosed));
        }
        let mut base = Self {
            cfg,
            splitting: sp,
            extender,
            weyl,
            roots,
            candidates,
            walls,
            chamber_group,
            aut,
            orbits: Vec::new(),
            fused_orbits: Vec::new(),
        };
        base.orbits = base.wall_orbits(&gens)?;
        base.fused_orbits = base.fuse_orbits()?;
        Ok(base)
    }

    fn wall_orbits(&self, gens: &[ZMat]) -> Result<Vec<OrbitRecord>, BorcherdsError> {
        let sp = &self.splitting;
        let duals: Vec<ZMat> = gens.iter().map(chambers::dual_action).collect();
        let wall_duals: Vec<ZVec> = self.walls.iter().map(|w| w.dual.clone()).collect();
        let witness: BTreeMap<&ZVec, &RatVec> = self.walls.iter().map(|w| (&w.dual, &w.witness)).collect();
        let orbits = chambers::orbit_decompose_with(&wall_duals, &duals)?;
        let mut recs: Vec<OrbitRecord> = orbits
            .into_iter()
            .map(|o| {
                let rep = o.members[0].clone();
                OrbitRecord {
                    label: alloc::string::String::new(),
                    witness: witness[&rep].clone(),
                    size: o.members.len(),
                    norm: arith::q_to_r64(&sp.s_form.norm(&rep)),
                    ample_pairing: arith::dot(&rep, &self.cfg.ample),
                    nef_multiple: nef_wall_multiple(sp, &rep),
                    representative: rep,
                    crossing: None,
                }
            })
            .collect();
        recs.sort_by(|a, b| {
            (
                a.nef_multiple.is_none(),
                a.norm,
                a.ample_pairing,
                a.size,
                &a.representative,
            )
                .cmp(&(
                    b.nef_multiple.is_none(),
                    b.norm,
                    b.ample_pairing,
                    b.size,
                    &b.representative,
                ))
        });
        let nef_count = recs.iter().filter(|r| r.nef_multiple.is_some()).count();
        let mut i = 1;
        for (j, r) in recs.iter_mut().enumerate() {
            r.label = if j < nef_count {
                alloc::format!("o0{}", "'".repeat(j))
            } else {
                let l = alloc::format!("o{i}");
                i += 1;
                l
            };
        }
        Ok(recs)
    }

    /// Which `Aut(X,a)`-orbits fuse under the full chamber group.
    fn fuse_orbits(&self) -> Result<Vec<Vec<usize>>, BorcherdsError> {
        let duals: Vec<ZMat> = self.chamber_group.iter().map(chambers::dual_action).collect();
        let wall_duals: Vec<ZVec> = self.walls.iter().map(|w| w.dual.clone()).collect();
        let big = chambers::orbit_decompose(&wall_duals, &duals)?;
        let mut out: Vec<Vec<usize>> = big
            .iter()
            .map(|members| {
                let set: BTreeSet<&ZVec> = members.iter().collect();
                self.orbits
                    .iter()
                    .enumerate()
                    .filter(|(_, o)| set.contains(&o.representative))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        out.sort();
        Ok(out)
    }

    /// Crosses the wall of orbit `i` (which must not bound the nef cone), finds a congruence
    /// in `G_k` and the involutions mapping the base chamber onto the adjacent one.
    pub fn cross(&self, i: usize) -> Result<Crossing, BorcherdsError> {
        let w = self.adjacent(i)?;
        let gamma = self.find_congruence(i, &w)?;
        self.complete_crossing(i, w, gamma)
    }

    /// The Weyl vector of a Conway chamber inducing the chamber adjacent across orbit `i`.
    pub fn adjacent(&self, i: usize) -> Result<ZVec, BorcherdsError> {
        let o = &self.orbits[i];
        adjacent_weyl(&self.splitting, &self.weyl, &o.representative, &o.witness)
    }

    /// The search for an element of `G_k` mapping the base chamber onto the chamber
    /// induced by `w` and keeping the ample class on the positive side of the nef seed.
    pub fn find_congruence(&self, i: usize, w: &[i64]) -> Result<ZMat, BorcherdsError> {
        let sp = &self.splitting;
        let cand = candidate_walls(sp, &delta_w(sp, w)?);
        let torelli = self.cfg.torelli();
        let a = &self.cfg.ample;
        let seed = &self.cfg.nef_seed;
        chambers::chamber_congruent(&sp.s_gram, &self.candidates, &cand, |g| {
            let ag = arith::vec_mat(a, g);
            arith::bilinear(&sp.s_gram, &ag, seed) > 0 && torelli.g_membership(g)
        })?
        .ok_or(BorcherdsError::CongruenceNotFound(i))
    }

    /// Checks a congruence for orbit `i` (an isometry in `G_k` whose image of the base
    /// chamber lies across the wall) and derives the rest of the crossing data from it.
    pub fn complete_crossing(&self, i: usize, w: ZVec, gamma: ZMat) -> Result<Crossing, BorcherdsError> {
        let sp = &self.splitting;
        let o = &self.orbits[i];
        let a = &self.cfg.ample;
        let n = sp.s_rank();
        if gamma.len() != n
            || gamma.iter().any(|r| r.len() != n)
            || arith::gram_of(&sp.s_gram, &gamma) != sp.s_gram
            || !self.cfg.torelli().g_membership(&gamma)
        {
            return Err(BorcherdsError::CrossingFailed);
        }
        // the new chamber's walls are the images of the base walls
        let dual = chambers::dual_action(&gamma);
        let new_walls: BTreeSet<ZVec> = self.walls.iter().map(|w| arith::vec_mat(&w.dual, &dual)).collect();
        let ag = arith::vec_mat(a, &gamma);
        if !new_walls.contains(&arith::neg_vec(&o.representative))
            || arith::bilinear(&sp.s_gram, &ag, &self.cfg.nef_seed) <= 0
            || arith::dot(&o.representative, &ag) >= 0
        {
            return Err(BorcherdsError::CrossingFailed);
        }
        let gamma_l26 = self.extender.extend(sp, &gamma)?;
        let id = arith::identity(n);
        let mut involutions: Vec<ZMat> = self
            .aut
            .elements()
            .iter()
            .map(|g| arith::mat_mul(g, &gamma))
            .filter(|m| arith::mat_mul(m, m) == id)
            .collect();
        involutions.sort();
        let (types, split) = involution_types(&self.cfg, &involutions)?;
        Ok(Crossing {
            weyl: w,
            gamma_l26,
            involutions,
            involution_types: types,
            split,
            ample_image_pairing: arith::bilinear(&sp.s_gram, &ag, a),
            gamma,
        })
    }

    pub fn crossable(&self) -> Vec<usize> {
        (0..self.orbits.len())
            .filter(|&i| self.orbits[i].nef_multiple.is_none())
            .collect()
    }

    /// Assembles the result from the crossings of all non-nef orbits (in [`crossable`] order).
    ///
    /// [`crossable`]: Self::crossable
    pub fn finish(mut self, crossings: Vec<Crossing>) -> Result<GenerationResult, BorcherdsError> {
        let sp = &self.splitting;
        let n = sp.s_rank();
        let id = arith::identity(n);
        let idx = self.crossable();
        for (i, c) in idx.iter().zip(crossings) {
            self.orbits[*i].crossing = Some(c);
        }
        let mut base_involutions: Vec<ZMat> = self
            .aut
            .elements()
            .iter()
            .filter(|g| **g != id && arith::mat_mul(g, g) == id)
            .cloned()
            .collect();
        base_involutions.sort();
        let (base_types, base_split) = involution_types(&self.cfg, &base_involutions)?;
        let aut_generators = self.aut.generators();
        let aut_generators_l26 = aut_generators
            .iter()
            .map(|g| self.extender.extend(sp, g))
            .collect::<Result<Vec<_>, _>>()?;
        let mut generators = aut_generators.clone();
        let mut generators_l26 = aut_generators_l26.clone();
        for o in &self.orbits {
            if let Some(c) = &o.crossing {
                generators.push(c.gamma.clone());
                generators_l26.push(c.gamma_l26.clone());
            }
        }
        let tessellation_checked = self.check_tessellation();
        Ok(GenerationResult {
            k: self.cfg.k,
            weyl: self.weyl.clone(),
            ample: self.cfg.ample.clone(),
            candidate_count: self.candidates.len(),
            base_roots: self.roots.len(),
            walls: self.walls.clone(),
            chamber_group_order: self.chamber_group.len(),
            aut: self.aut.elements().to_vec(),
            aut_generators,
            aut_generators_l26,
            base_involutions,
            base_involution_types: base_types,
            base_split,
            orbits: self.orbits,
            fused_orbits: self.fused_orbits,
            generators,
            generators_l26,
            tessellation_checked,
        })
    }

    /// For each crossed orbit: the adjacent chamber contains the opposite wall, and the two
    /// ample images pair with opposite signs against the wall vector.
    fn check_tessellation(&self) -> bool {
        let a = &self.cfg.ample;
        self.orbits.iter().all(|o| match &o.crossing {
            None => o.nef_multiple.is_some(),
            Some(c) => {
                let ag = arith::vec_mat(a, &c.gamma);
                arith::dot(&o.representative, a) > 0 && arith::dot(&o.representative, &ag) < 0
            }
        })
    }
}

/// A faithful point set for the action on `S`: the wall vectors in lattice coordinates,
/// scaled by `|det S|` to be integral.
fn spanning_points(sp: &Splitting, walls: &[Wall]) -> Vec<ZVec> {
    walls.iter().map(|w| arith::vec_mat(&w.dual, &sp.s_form.adj)).collect()
}

/// The complete generation for surface `k`, sequentially.
pub fn run_borcherds(k: usize) -> Result<GenerationResult, BorcherdsError> {
    let base = BaseChamber::new(k)?;
    let crossings = base
        .crossable()
        .into_iter()
        .map(|i| base.cross(i))
        .collect::<Result<Vec<_>, _>>()?;
    base.finish(crossings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn w0_is_isotropic_and_pairs_to_one_with_its_partner() {
        let l = l26();
        assert_eq!(l.norm(&w0()), 0);
        assert_eq!(l.norm(&w0_prime()), 0);
        assert_eq!(l.pairing(&w0(), &w0_prime()), 1);
        assert_eq!(w0()[0], 61);
        assert_eq!(l.det(), BigInt::from(-1));
        assert!(l.is_even());
    }

    #[test]
    fn w0_pairs_to_one_with_the_dual_basis_except_first() {
        // w0 = (30, 1, …, 1) in the dual basis
        let t = arith::vec_mat(&w0(), &l26_gram());
        assert_eq!(t[0], 30);
        assert!(t[1..].iter().all(|&x| x == 1));
    }

    #[test]
    fn leech_check_accepts_w0_and_rejects_fiber_class() {
        assert!(leech_check(&w0()).unwrap());
        assert!(leech_check_with_partner(&w0(), &w0_prime()).unwrap());
        let mut f = vec![0i64; 26];
        f[0] = 1;
        assert!(!leech_check(&f).unwrap());
        let w2 = arith::scale_vec(&w0(), 2);
        assert_eq!(leech_check(&w2), Err(BorcherdsError::NotPrimitive));
        let mut z = vec![0i64; 26];
        z[1] = 1;
        assert_eq!(leech_check(&z), Err(BorcherdsError::NotIsotropic));
    }

    #[test]
    fn embeddings_are_primitive_with_expected_complements() {
        let expected_roots = [16, 20, 26];
        let expected_order = [2304, 1152, 2880];
        for k in 0..3 {
            let e = embed(k).unwrap();
            let sp = Splitting::new(&e).unwrap();
            assert_eq!(sp.r_roots().len(), expected_roots[k]);
            let ext = Extender::new(&sp).unwrap();
            assert_eq!(ext.r_group_order, expected_order[k]);
            assert!(ext.eta_r_surjective().unwrap());
        }
    }

    #[test]
    fn extension_of_identity_is_identity() {
        let e = embed(2).unwrap();
        let sp = Splitting::new(&e).unwrap();
        let ext = Extender::new(&sp).unwrap();
        let g = ext.extend(&sp, &arith::identity(20)).unwrap();
        assert_eq!(g, arith::identity(26));
    }
}
