//! Discriminant groups and forms, induced actions of isometries, and the Torelli-side
//! membership test for automorphisms of the singular K3 surfaces.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::arith::{self, ZMat, ZVec, R64};
use crate::lattice_core::{self, IntegerLattice, RatVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiscError {
    OddLattice,
    CapExceeded(usize),
    NotIsometry,
    NotInGroup,
    DimensionMismatch,
}

impl fmt::Display for DiscError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OddLattice => write!(f, "lattice is not even"),
            Self::CapExceeded(n) => write!(f, "group scan of {n} elements exceeds the cap"),
            Self::NotIsometry => write!(f, "matrix is not an isometry"),
            Self::NotInGroup => write!(f, "isometry does not lie in the Torelli subgroup"),
            Self::DimensionMismatch => write!(f, "dimension mismatch"),
        }
    }
}

impl core::error::Error for DiscError {}

/// Scan cap for brute-force automorphism searches of finite quadratic forms.
pub const OQ_SCAN_CAP: usize = 1_000_000;

fn mod2(x: R64) -> R64 {
    let two = R64::from_integer(2);
    let f = (x / two).floor();
    x - f * two
}

fn mod1(x: R64) -> R64 {
    x - x.floor()
}

/// A finite abelian group `⊕ Z/dᵢ` with a `Q/2Z`-valued quadratic form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    pub generator_orders: Vec<i64>,
    /// `q(xᵢ)` in `[0, 2)`.
    pub q_values: Vec<R64>,
    /// `b(xᵢ, xⱼ)` in `[0, 1)`.
    pub bilinear: Vec<Vec<R64>>,
}

impl FiniteQuadraticForm {
    pub fn order(&self) -> usize {
        self.generator_orders.iter().map(|d| *d as usize).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.generator_orders.is_empty()
    }

    pub fn reduce(&self, a: &[i64]) -> ZVec {
        a.iter()
            .zip(&self.generator_orders)
            .map(|(x, d)| x.rem_euclid(*d))
            .collect()
    }

    pub fn q(&self, a: &[i64]) -> R64 {
        let mut s = R64::zero();
        let n = a.len();
        for i in 0..n {
            s += self.q_values[i] * R64::from_integer(a[i] * a[i]);
            for j in i + 1..n {
                s += self.bilinear[i][j] * R64::from_integer(2 * a[i] * a[j]);
            }
        }
        mod2(s)
    }

    pub fn b(&self, a: &[i64], c: &[i64]) -> R64 {
        let mut s = R64::zero();
        for (i, x) in a.iter().enumerate() {
            for (j, y) in c.iter().enumerate() {
                s += self.bilinear[i][j] * R64::from_integer(x * y);
            }
        }
        mod1(s)
    }

    /// All group elements in lexicographic order of their coordinates.
    pub fn elements(&self) -> Vec<ZVec> {
        let mut out = vec![Vec::new()];
        for d in &self.generator_orders {
            let mut next = Vec::with_capacity(out.len() * *d as usize);
            for e in &out {
                for x in 0..*d {
                    let mut v = e.clone();
                    v.push(x);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    /// `q(x+y) − q(x) − q(y) ≡ 2 b(x,y)` on all generator pairs.
    pub fn is_consistent(&self) -> bool {
        let n = self.generator_orders.len();
        for i in 0..n {
            for j in 0..n {
                let mut e = vec![0; n];
                e[i] += 1;
                e[j] += 1;
                let mut ei = vec![0; n];
                ei[i] = 1;
                let mut ej = vec![0; n];
                ej[j] = 1;
                let lhs = mod2(self.q(&e) - self.q(&ei) - self.q(&ej));
                let rhs = mod2(self.bilinear[i][j] * R64::from_integer(2));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    pub fn negated(&self) -> Self {
        Self {
            generator_orders: self.generator_orders.clone(),
            q_values: self.q_values.iter().map(|x| mod2(-*x)).collect(),
            bilinear: self
                .bilinear
                .iter()
                .map(|r| r.iter().map(|x| mod1(-*x)).collect())
                .collect(),
        }
    }
}

/// An automorphism of a finite quadratic form, given by the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqfAutomorphism {
    pub images: Vec<ZVec>,
}

impl FqfAutomorphism {
    pub fn identity(q: &FiniteQuadraticForm) -> Self {
        let n = q.generator_orders.len();
        Self {
            images: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
        }
    }

    pub fn apply(&self, q: &FiniteQuadraticForm, a: &[i64]) -> ZVec {
        let n = q.generator_orders.len();
        let mut out = vec![0i64; n];
        for (x, img) in a.iter().zip(&self.images) {
            for (o, y) in out.iter_mut().zip(img) {
                *o += x * y;
            }
        }
        q.reduce(&out)
    }

    /// `x ↦ (x·self)·other` (right actions compose left to right).
    pub fn then(&self, q: &FiniteQuadraticForm, other: &Self) -> Self {
        Self {
            images: self.images.iter().map(|a| other.apply(q, a)).collect(),
        }
    }

    pub fn is_identity(&self, q: &FiniteQuadraticForm) -> bool {
        *self == Self::identity(q)
    }

    pub fn order(&self, q: &FiniteQuadraticForm) -> usize {
        let mut p = self.clone();
        let mut n = 1;
        while !p.is_identity(q) {
            p = p.then(q, self);
            n += 1;
        }
        n
    }

    pub fn inverse(&self, q: &FiniteQuadraticForm) -> Self {
        let mut p = Self::identity(q);
        for _ in 1..self.order(q) {
            p = p.then(q, self);
        }
        p
    }

    pub fn preserves(&self, q: &FiniteQuadraticForm) -> bool {
        let n = q.generator_orders.len();
        for i in 0..n {
            let zero = q.reduce(&arith::scale_vec(&self.images[i], q.generator_orders[i]));
            if zero.iter().any(|x| *x != 0) {
                return false;
            }
            if q.q(&self.images[i]) != q.q_values[i] {
                return false;
            }
            for j in i + 1..n {
                if q.b(&self.images[i], &self.images[j]) != q.bilinear[i][j] {
                    return false;
                }
            }
        }
        let imgs: BTreeSet<ZVec> = q.elements().iter().map(|a| self.apply(q, a)).collect();
        imgs.len() == q.order()
    }
}

/// The discriminant group `L∨/L` of an even lattice with its presentation data.
///
/// With `U·G·V = D` (Smith form) the generators are the dual vectors `(row i of U)/dᵢ`
/// for `dᵢ > 1`; a dual vector `x` has coordinates `(x·G·V)ᵢ mod dᵢ`.
#[derive(Debug, Clone)]
pub struct DiscriminantGroup {
    pub form: FiniteQuadraticForm,
    pub generators: Vec<RatVec>,
    gram: ZMat,
    v_cols: Vec<ZVec>,
}

pub fn discriminant_form(l: &IntegerLattice) -> Result<DiscriminantGroup, DiscError> {
    if !l.is_even() {
        return Err(DiscError::OddLattice);
    }
    let g = l.gram();
    let n = l.rank();
    let s = arith::smith(g);
    let mut orders = Vec::new();
    let mut gens = Vec::new();
    let mut v_cols = Vec::new();
    for i in 0..n {
        let d = arith::big_to_i64(&s.diag[i]).abs();
        if d > 1 {
            orders.push(d);
            gens.push(RatVec::new(s.u[i].clone(), d));
            v_cols.push((0..n).map(|r| s.v[r][i]).collect());
        }
    }
    let m = gens.len();
    let mut q_values = Vec::with_capacity(m);
    let mut bilinear = vec![vec![R64::zero(); m]; m];
    for i in 0..m {
        q_values.push(mod2(l.pairing_rat(&gens[i], &gens[i])));
        for j in 0..m {
            bilinear[i][j] = mod1(l.pairing_rat(&gens[i], &gens[j]));
        }
    }
    Ok(DiscriminantGroup {
        form: FiniteQuadraticForm {
            generator_orders: orders,
            q_values,
            bilinear,
        },
        generators: gens,
        gram: g.clone(),
        v_cols,
    })
}

impl DiscriminantGroup {
    /// Coordinates of the class of a dual vector.
    pub fn class_of(&self, x: &RatVec) -> ZVec {
        let t = arith::vec_mat(&x.num, &self.gram);
        assert!(t.iter().all(|v| v % x.den == 0), "vector is not in the dual lattice");
        let t: ZVec = t.iter().map(|v| v / x.den).collect();
        let c: ZVec = self.v_cols.iter().map(|col| arith::dot(&t, col)).collect();
        self.form.reduce(&c)
    }

    /// The automorphism of the discriminant form induced by an isometry (right action).
    pub fn eta(&self, gamma: &ZMat) -> FqfAutomorphism {
        FqfAutomorphism {
            images: self.generators.iter().map(|x| self.class_of(&x.apply(gamma))).collect(),
        }
    }
}

/// Brute-force automorphism group of a finite quadratic form, sorted.
pub fn oq_group(q: &FiniteQuadraticForm) -> Result<Vec<FqfAutomorphism>, DiscError> {
    let order = q.order();
    let scan = order.saturating_mul(q.generator_orders.len().max(1));
    if scan > OQ_SCAN_CAP {
        return Err(DiscError::CapExceeded(scan));
    }
    let elems = q.elements();
    let n = q.generator_orders.len();
    let cands: Vec<Vec<ZVec>> = (0..n)
        .map(|i| {
            elems
                .iter()
                .filter(|y| {
                    let z = q.reduce(&arith::scale_vec(y, q.generator_orders[i]));
                    z.iter().all(|v| *v == 0) && q.q(y) == q.q_values[i]
                })
                .cloned()
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut imgs: Vec<ZVec> = Vec::new();
    fn rec(q: &FiniteQuadraticForm, cands: &[Vec<ZVec>], imgs: &mut Vec<ZVec>, out: &mut Vec<FqfAutomorphism>) {
        let i = imgs.len();
        if i == cands.len() {
            let a = FqfAutomorphism { images: imgs.clone() };
            if a.preserves(q) {
                out.push(a);
            }
            return;
        }
        for y in &cands[i] {
            if (0..i).all(|j| q.b(&imgs[j], y) == q.bilinear[j][i]) {
                imgs.push(y.clone());
                rec(q, cands, imgs, out);
                imgs.pop();
            }
        }
    }
    rec(q, &cands, &mut imgs, &mut out);
    out.sort();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Torelli data of the three surfaces

/// Gram matrix of the transcendental lattice of surface `k` (positive definite).
pub fn transcendental_gram(k: usize) -> ZMat {
    match k {
        0 => vec![vec![6, 0], vec![0, 6]],
        1 => vec![vec![2, 0], vec![0, 12]],
        2 => vec![vec![2, 1], vec![1, 8]],
        _ => panic!("surface index must be 0, 1 or 2"),
    }
}

/// The isometries of `T_k` that multiply the period by a scalar, each with the order of
/// that scalar.
pub fn period_group(k: usize) -> Vec<(ZMat, u32)> {
    let id = vec![vec![1, 0], vec![0, 1]];
    let mid = vec![vec![-1, 0], vec![0, -1]];
    let mut c = vec![(id, 1), (mid, 2)];
    if k == 0 {
        c.push((vec![vec![0, 1], vec![-1, 0]], 4));
        c.push((vec![vec![0, -1], vec![1, 0]], 4));
    }
    c
}

/// Discriminant-side description of the subgroup `G_k ⊂ O(S_k)`.
#[derive(Debug, Clone)]
pub struct TorelliData {
    pub k: usize,
    pub s_disc: DiscriminantGroup,
    pub t_disc: DiscriminantGroup,
    /// The identification of generators: row `i` = image in `A_T` of the `i`-th generator of `A_S`.
    pub delta: Vec<ZVec>,
    pub delta_inv: Vec<ZVec>,
    /// `δ*(η_T(C_k))` with the order of the period scalar.
    pub c_prime: Vec<(FqfAutomorphism, u32)>,
}

impl TorelliData {
    /// `s_gram` is the Gram matrix of `S_k`; `v_index` are the positions of the two basis
    /// vectors spanning the sublattice isometric to `T_k(−1)` (its complement is unimodular).
    pub fn new(k: usize, s_gram: &ZMat, v_index: [usize; 2]) -> Self {
        let s = IntegerLattice::new(s_gram.clone()).expect("valid Gram matrix");
        let t = IntegerLattice::new(transcendental_gram(k)).expect("valid Gram matrix");
        let s_disc = discriminant_form(&s).expect("even");
        let t_disc = discriminant_form(&t).expect("even");
        let delta: Vec<ZVec> = s_disc
            .generators
            .iter()
            .map(|x| {
                let y = RatVec::new(vec![x.num[v_index[0]], x.num[v_index[1]]], x.den);
                t_disc.class_of(&y)
            })
            .collect();
        let delta_inv = invert_iso(&s_disc.form, &t_disc.form, &delta);
        let mut td = Self {
            k,
            s_disc,
            t_disc,
            delta,
            delta_inv,
            c_prime: Vec::new(),
        };
        td.c_prime = period_group(k)
            .into_iter()
            .map(|(m, o)| (td.glue_delta(&td.t_disc.eta(&m)), o))
            .collect();
        td
    }

    fn map_to_t(&self, a: &[i64]) -> ZVec {
        FqfAutomorphism {
            images: self.delta.clone(),
        }
        .apply_between(&self.t_disc.form, a)
    }

    fn map_to_s(&self, a: &[i64]) -> ZVec {
        FqfAutomorphism {
            images: self.delta_inv.clone(),
        }
        .apply_between(&self.s_disc.form, a)
    }

    /// `δ*`: transports an automorphism of `q_T` to `q_S` along the identification.
    pub fn glue_delta(&self, tau: &FqfAutomorphism) -> FqfAutomorphism {
        FqfAutomorphism {
            images: self
                .delta
                .iter()
                .map(|y| self.map_to_s(&tau.apply(&self.t_disc.form, y)))
                .collect(),
        }
    }

    pub fn eta_s(&self, gamma: &ZMat) -> FqfAutomorphism {
        self.s_disc.eta(gamma)
    }

    /// Whether `η_S(γ) ∈ C'_k`.
    pub fn g_membership(&self, gamma: &ZMat) -> bool {
        let e = self.eta_s(gamma);
        self.c_prime.iter().any(|(c, _)| *c == e)
    }

    /// The order of the period scalar of `γ ∈ G_k` (1: symplectic).
    pub fn symplectic_level(&self, gamma: &ZMat) -> Result<u32, DiscError> {
        let e = self.eta_s(gamma);
        self.c_prime
            .iter()
            .filter(|(c, _)| *c == e)
            .map(|(_, o)| *o)
            .min()
            .ok_or(DiscError::NotInGroup)
    }

    #[doc(hidden)]
    pub fn check_delta_roundtrip(&self) -> bool {
        self.s_disc
            .form
            .elements()
            .iter()
            .all(|a| self.map_to_s(&self.map_to_t(a)) == *a)
    }
}

impl FqfAutomorphism {
    /// Applies a homomorphism given by generator images into the group `target`.
    pub fn apply_between(&self, target: &FiniteQuadraticForm, a: &[i64]) -> ZVec {
        let n = target.generator_orders.len();
        let mut out = vec![0i64; n];
        for (x, img) in a.iter().zip(&self.images) {
            for (o, y) in out.iter_mut().zip(img) {
                *o += x * y;
            }
        }
        target.reduce(&out)
    }
}

/// Inverse of a group isomorphism `A → B` given on generators (search over `B`'s generators).
fn invert_iso(a: &FiniteQuadraticForm, b: &FiniteQuadraticForm, fwd: &[ZVec]) -> Vec<ZVec> {
    let f = FqfAutomorphism { images: fwd.to_vec() };
    let elems = a.elements();
    let nb = b.generator_orders.len();
    (0..nb)
        .map(|j| {
            let mut e = vec![0; nb];
            e[j] = 1;
            elems
                .iter()
                .find(|x| f.apply_between(b, x) == e)
                .expect("identification is surjective")
                .clone()
        })
        .collect()
}

/// The image `η_L(O(L))` for a definite lattice, as a sorted set.
pub fn eta_image(disc: &DiscriminantGroup, group: &[ZMat]) -> Vec<FqfAutomorphism> {
    let set: BTreeSet<FqfAutomorphism> = group.iter().map(|g| disc.eta(g)).collect();
    set.into_iter().collect()
}

/// Whether a matrix is an isometry of the Gram matrix (helper for callers of this module).
pub fn check_isometry(gram: &ZMat, gamma: &ZMat) -> Result<(), DiscError> {
    if lattice_core::is_isometry(gram, gamma) {
        Ok(())
    } else {
        Err(DiscError::NotIsometry)
    }
}

/// Minimal `n` with `γⁿ = 1` for a matrix of finite order (bounded search).
pub fn matrix_order(gamma: &ZMat, max: usize) -> Option<usize> {
    let n = gamma.len();
    let id = arith::identity(n);
    let mut p = gamma.clone();
    for k in 1..=max {
        if p == id {
            return Some(k);
        }
        p = arith::mat_mul(&p, gamma);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_core::{a_gram, direct_sum, e8_gram};

    #[test]
    fn unimodular_is_trivial() {
        let d = discriminant_form(&IntegerLattice::new(e8_gram()).unwrap()).unwrap();
        assert!(d.form.is_trivial());
        assert_eq!(oq_group(&d.form).unwrap().len(), 1);
    }

    #[test]
    fn diag_six_six() {
        let l = IntegerLattice::new(transcendental_gram(0)).unwrap();
        let d = discriminant_form(&l).unwrap();
        assert_eq!(d.form.generator_orders, vec![6, 6]);
        assert_eq!(d.form.q_values, vec![R64::new(1, 6), R64::new(1, 6)]);
        assert!(d.form.is_consistent());
        let minus = d.eta(&vec![vec![-1, 0], vec![0, -1]]);
        assert!(!minus.is_identity(&d.form));
        assert!(d.eta(&arith::identity(2)).is_identity(&d.form));
    }

    #[test]
    fn oq_orders_of_transcendental_forms() {
        let orders: Vec<usize> = (0..3)
            .map(|k| {
                let l = IntegerLattice::new(transcendental_gram(k)).unwrap();
                oq_group(&discriminant_form(&l).unwrap().form).unwrap().len()
            })
            .collect();
        assert_eq!(orders, vec![16, 4, 4]);
    }

    #[test]
    fn period_group_acts_faithfully() {
        for k in 0..3 {
            let l = IntegerLattice::new(transcendental_gram(k)).unwrap();
            let d = discriminant_form(&l).unwrap();
            let c = period_group(k);
            let imgs: BTreeSet<FqfAutomorphism> = c.iter().map(|(m, _)| d.eta(m)).collect();
            assert_eq!(imgs.len(), c.len());
            for (m, _) in &c {
                assert!(lattice_core::is_isometry(l.gram(), m));
            }
        }
    }

    #[test]
    fn eta_is_homomorphism_on_a2_a1() {
        let l = IntegerLattice::new(direct_sum(&[a_gram(2), a_gram(1)])).unwrap();
        let d = discriminant_form(&l).unwrap();
        let grp = lattice_core::definite_orthogonal_group(&l, 8).unwrap();
        for a in grp.iter().step_by(3) {
            for b in grp.iter().step_by(5) {
                let ab = arith::mat_mul(a, b);
                assert_eq!(d.eta(&ab), d.eta(a).then(&d.form, &d.eta(b)));
            }
        }
    }

    #[test]
    fn torelli_data_small_model() {
        // U ⊕ T_k(−1) ⊕ E8 models the discriminant part of S_k
        for k in 0..3 {
            let m = arith::neg_mat(&transcendental_gram(k));
            let g = direct_sum(&[vec![vec![0, 1], vec![1, -2]], m, e8_gram()]);
            let td = TorelliData::new(k, &g, [2, 3]);
            assert!(td.check_delta_roundtrip());
            assert!(td.g_membership(&arith::identity(12)));
            assert_eq!(td.symplectic_level(&arith::identity(12)).unwrap(), 1);
            let cp: BTreeSet<FqfAutomorphism> = td.c_prime.iter().map(|(c, _)| c.clone()).collect();
            assert_eq!(cp.len(), if k == 0 { 4 } else { 2 });
            // C'_k is normal in O(q_S)
            let oq = oq_group(&td.s_disc.form).unwrap();
            for g in &oq {
                for c in &cp {
                    let conj = g
                        .inverse(&td.s_disc.form)
                        .then(&td.s_disc.form, c)
                        .then(&td.s_disc.form, g);
                    assert!(cp.contains(&conj));
                }
            }
        }
    }
}
