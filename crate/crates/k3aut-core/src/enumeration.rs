//! Exact enumeration of lattice vectors of prescribed norm, with or without linear
//! constraints (Fincke–Pohst style backtracking with rational layered bounds).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, q, QMat, QVec, ZMat, ZVec, Q};
use crate::lattice_core::{IntegerLattice, RatVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnumError {
    NotNegativeDefinite,
    NotHyperbolic,
    NonNegativeNorm,
    NotPositive,
    Precondition(&'static str),
}

impl fmt::Display for EnumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotNegativeDefinite => write!(f, "lattice is not negative definite"),
            Self::NotHyperbolic => write!(f, "lattice is not hyperbolic"),
            Self::NonNegativeNorm => write!(f, "target norm must be negative"),
            Self::NotPositive => write!(f, "reference vector must have positive norm"),
            Self::Precondition(s) => write!(f, "precondition violated: {s}"),
        }
    }
}

impl core::error::Error for EnumError {}

/// Integer points of an ellipsoid `(z − c)·P·(z − c)ᵀ ≤ B` for a positive definite `P`.
///
/// `P = Uᵀ·diag(d)·U` with `U` unit upper triangular is computed once over `Q`; the search
/// fixes coordinates from the last to the first, bounding each by an exact square root.
#[derive(Debug, Clone)]
pub struct BallEnumerator {
    n: usize,
    d: QVec,
    // u[i][j] for j > i
    u: QMat,
}

impl BallEnumerator {
    pub fn new(p: &ZMat) -> Result<Self, EnumError> {
        let n = p.len();
        let pq = arith::to_qmat(p);
        let mut d: QVec = vec![Q::zero(); n];
        let mut u: QMat = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            let mut di = pq[i][i].clone();
            for k in 0..i {
                di -= &d[k] * &u[k][i] * &u[k][i];
            }
            if !di.is_positive() {
                return Err(EnumError::NotNegativeDefinite);
            }
            for j in i + 1..n {
                let mut s = pq[i][j].clone();
                for k in 0..i {
                    s -= &d[k] * &u[k][i] * &u[k][j];
                }
                u[i][j] = s / &di;
            }
            u[i][i] = Q::one();
            d[i] = di;
        }
        Ok(Self { n, d, u })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Calls `visit(z, value)` for every integer `z` with `value = (z − c)P(z − c)ᵀ ≤ bound`.
    pub fn for_each(&self, center: &[Q], bound: &Q, mut visit: impl FnMut(&[i64], &Q)) {
        let n = self.n;
        if bound.is_negative() {
            return;
        }
        if n == 0 {
            visit(&[], &Q::zero());
            return;
        }
        let mut z = vec![0i64; n];
        let mut hi = vec![0i64; n];
        let mut mid: QVec = vec![Q::zero(); n];
        let mut rem: QVec = vec![Q::zero(); n];
        let mut uval: QVec = vec![Q::zero(); n];
        let mut i = n - 1;
        rem[i] = bound.clone();
        mid[i] = center[i].clone();
        match int_range(&mid[i], &(&rem[i] / &self.d[i])) {
            Some((lo, h)) => {
                z[i] = lo;
                hi[i] = h;
            }
            None => return,
        }
        loop {
            if z[i] > hi[i] {
                i += 1;
                if i == n {
                    return;
                }
                z[i] += 1;
                continue;
            }
            let y = q(z[i]) - &mid[i];
            let left = &rem[i] - &self.d[i] * &y * &y;
            if i == 0 {
                let value = bound - &left;
                visit(&z, &value);
                z[0] += 1;
                continue;
            }
            uval[i] = q(z[i]) - &center[i];
            let k = i - 1;
            let mut s = Q::zero();
            for j in i..n {
                if !self.u[k][j].is_zero() {
                    s += &self.u[k][j] * &uval[j];
                }
            }
            mid[k] = &center[k] - s;
            rem[k] = left;
            i = k;
            match int_range(&mid[i], &(&rem[i] / &self.d[i])) {
                Some((lo, h)) => {
                    z[i] = lo;
                    hi[i] = h;
                }
                None => {
                    z[i] = 1;
                    hi[i] = 0;
                }
            }
        }
    }
}

/// The integers `z` with `(z − m)² ≤ r`, as an inclusive range.
fn int_range(m: &Q, r: &Q) -> Option<(i64, i64)> {
    if r.is_negative() {
        return None;
    }
    let k = arith::isqrt_floor_q(r);
    let ok = |z: &BigInt| {
        let t = Q::from_integer(z.clone()) - m;
        &t * &t <= *r
    };
    let fm = m.floor().to_integer();
    let cm = m.ceil().to_integer();
    let two = BigInt::from(2);
    let mut hi = &fm + &k + &two;
    let floor_hi = &fm - &k - &two;
    while hi > floor_hi && !ok(&hi) {
        hi -= 1;
    }
    let mut lo = &cm - &k - &two;
    let ceil_lo = &cm + &k + &two;
    while lo < ceil_lo && !ok(&lo) {
        lo += 1;
    }
    if lo > hi || !ok(&lo) {
        return None;
    }
    Some((
        lo.to_i64().expect("range fits in i64"),
        hi.to_i64().expect("range fits in i64"),
    ))
}

/// All vectors of norm `d` in a negative definite lattice, sorted lexicographically.
pub fn short_vectors(l: &IntegerLattice, d: i64) -> Result<Vec<ZVec>, EnumError> {
    short_vectors_with(l, d, false)
}

/// As [`short_vectors`], optionally searching in an LLL-reduced basis first.
pub fn short_vectors_with(l: &IntegerLattice, d: i64, reduce: bool) -> Result<Vec<ZVec>, EnumError> {
    if d >= 0 {
        return Err(EnumError::NonNegativeNorm);
    }
    let p = arith::neg_mat(l.gram());
    let (t, pg) = if reduce {
        let t = arith::lll_gram(&p);
        let pg = arith::gram_of(&p, &t);
        (Some(t), pg)
    } else {
        (None, p)
    };
    let ball = BallEnumerator::new(&pg)?;
    let target = q(-d);
    let mut out = Vec::new();
    ball.for_each(&vec![Q::zero(); l.rank()], &target, |z, v| {
        if *v == target {
            out.push(match &t {
                Some(t) => arith::vec_mat(z, t),
                None => z.to_vec(),
            });
        }
    });
    out.sort();
    Ok(out)
}

/// Vectors of norm `d` found in an LLL-reduced basis (used internally on constructed lattices).
pub fn short_vectors_reduced(l: &IntegerLattice, d: i64) -> Vec<ZVec> {
    short_vectors_with(l, d, true).expect("negative definite lattice and negative norm")
}

/// Vectors of norm `≥ bound` (i.e. `0 ≥ ⟨v,v⟩ ≥ bound`) in a negative definite lattice, with
/// rational shift: all `x ∈ Zⁿ` such that `(c + x)` has norm at least `bound`.
pub fn ball_points(gram: &ZMat, center: &[Q], bound: &Q) -> Result<Vec<(ZVec, Q)>, EnumError> {
    let p = arith::neg_mat(gram);
    let t = arith::lll_gram(&p);
    let pg = arith::gram_of(&p, &t);
    let t_inv = crate::lattice_core::unimodular_inverse(&t);
    let ball = BallEnumerator::new(&pg)?;
    // x = z·T, and (c + x) = (c·T⁻¹ + z)·T
    let tinv_q = arith::to_qmat(&t_inv);
    let c_red = arith::q_vec_mat(center, &tinv_q);
    let neg_c: QVec = c_red.iter().map(|x| -x).collect();
    let mut out = Vec::new();
    ball.for_each(&neg_c, &-bound, |z, v| {
        out.push((arith::vec_mat(z, &t), -v));
    });
    out.sort();
    Ok(out)
}

/// Enumerates `{ v ∈ shift + L : ⟨cᵢ, v⟩ = bᵢ, ⟨v, v⟩ = d }` for a fixed set of constraint
/// vectors `cᵢ` whose orthogonal complement is negative definite.
///
/// The complement is computed once (saturated kernel, LLL-reduced); each query splits a
/// particular solution into its component along the span of the `cᵢ` and a remainder, and
/// enumerates the remainder's coset in the definite complement.
#[derive(Debug, Clone)]
pub struct FiberEnumerator {
    gram: ZMat,
    constraints: Vec<QVec>,
    // columns of G·cᵀ scaled to integers: ⟨cᵢ, x⟩ = (x · col_i) · scale_i
    cols: ZMat,
    scale: QVec,
    cons_gram_inv: QMat,
    kernel: ZMat,
    kernel_q: QMat,
    ball: BallEnumerator,
}

impl FiberEnumerator {
    pub fn new(gram: &ZMat, constraints: &[QVec]) -> Result<Self, EnumError> {
        let n = gram.len();
        let gq = arith::to_qmat(gram);
        let mut cols_t: ZMat = Vec::new();
        let mut scale = Vec::new();
        for c in constraints {
            let gc = arith::q_vec_mat(c, &gq);
            let (nums, den) = arith::clear_denominators(&gc);
            let g = nums
                .iter()
                .fold(BigInt::zero(), |a, b| num_integer::Integer::gcd(&a, b));
            if g.is_zero() {
                return Err(EnumError::Precondition("zero constraint vector"));
            }
            cols_t.push(nums.iter().map(|x| arith::big_to_i64(&(x / &g))).collect());
            scale.push(Q::new(g, den));
        }
        let cons_gram: QMat = constraints
            .iter()
            .map(|a| {
                constraints
                    .iter()
                    .map(|b| arith::q_dot(&arith::q_vec_mat(a, &gq), b))
                    .collect()
            })
            .collect();
        let cons_gram_inv =
            arith::q_inverse(&cons_gram).ok_or(EnumError::Precondition("dependent constraint vectors"))?;
        let cols = if constraints.is_empty() {
            vec![Vec::new(); n]
        } else {
            arith::transpose(&cols_t)
        };
        let kernel0 = if constraints.is_empty() {
            arith::identity(n)
        } else {
            arith::left_kernel(&cols)
        };
        let kg = arith::gram_of(gram, &kernel0);
        let pk = arith::neg_mat(&kg);
        // positive definiteness is checked by the LDL step; LLL needs it too
        BallEnumerator::new(&pk)?;
        let t = arith::lll_gram(&pk);
        let kernel = arith::mat_mul(&t, &kernel0);
        let pk_red = arith::neg_mat(&arith::gram_of(gram, &kernel));
        let ball = BallEnumerator::new(&pk_red)?;
        let kernel_q = arith::to_qmat(&kernel);
        Ok(Self {
            gram: gram.clone(),
            constraints: constraints.to_vec(),
            cols,
            scale,
            cons_gram_inv,
            kernel,
            kernel_q,
            ball,
        })
    }

    pub fn kernel(&self) -> &ZMat {
        &self.kernel
    }

    /// All `x ∈ Zⁿ` such that `v = shift + x` satisfies the constraints and `⟨v,v⟩ = d`,
    /// sorted lexicographically.
    pub fn solve(&self, shift: &[Q], targets: &[Q], d: &Q) -> Vec<ZVec> {
        let mut out = Vec::new();
        self.for_each(shift, targets, d, true, |x, _| out.push(x.to_vec()));
        out.sort();
        out
    }

    /// As [`solve`](Self::solve) but with `⟨v,v⟩ ≥ d` (inclusive) when `exact` is false;
    /// `visit` receives `x` and the norm of `v`.
    pub fn for_each(&self, shift: &[Q], targets: &[Q], d: &Q, exact: bool, mut visit: impl FnMut(&[i64], &Q)) {
        let n = self.gram.len();
        let k = self.constraints.len();
        let gq_rows = |v: &[Q]| -> QVec {
            let mut r = vec![Q::zero(); n];
            for (vi, row) in v.iter().zip(&self.gram) {
                if !vi.is_zero() {
                    for (rj, g) in r.iter_mut().zip(row) {
                        if *g != 0 {
                            *rj += vi * q(*g);
                        }
                    }
                }
            }
            r
        };
        let shift_g = gq_rows(shift);
        // integer right-hand sides for x · cols = t
        let mut t = Vec::with_capacity(k);
        for i in 0..k {
            let rhs = (&targets[i] - arith::q_dot(&shift_g, &self.constraints[i])) / &self.scale[i];
            if !rhs.is_integer() {
                return;
            }
            t.push(arith::big_to_i64(&rhs.to_integer()));
        }
        let x0 = if k == 0 {
            vec![0i64; n]
        } else {
            match arith::solve_left_integer(&self.cols, &t) {
                Some(x) => x,
                None => return,
            }
        };
        let v0: QVec = shift.iter().zip(&x0).map(|(s, x)| s + q(*x)).collect();
        // v0 = Σ αᵢ cᵢ + p with p ⟂ cᵢ
        let alpha = arith::q_vec_mat(targets, &self.cons_gram_inv);
        let mut p = v0.clone();
        for (a, c) in alpha.iter().zip(&self.constraints) {
            for (pj, cj) in p.iter_mut().zip(c) {
                *pj -= a * cj;
            }
        }
        let par_norm = arith::q_dot(&alpha, targets);
        let m = d - &par_norm; // required norm of p + y, y in the kernel
        if m.is_positive() {
            return;
        }
        let c = arith::q_solve_left(&self.kernel_q, &p).expect("remainder lies in the complement");
        let neg_c: QVec = c.iter().map(|x| -x).collect();
        let bound = -&m;
        self.ball.for_each(&neg_c, &bound, |z, val| {
            if exact && *val != bound {
                return;
            }
            let y = arith::vec_mat(z, &self.kernel);
            let x: ZVec = x0.iter().zip(&y).map(|(a, b)| a + b).collect();
            let norm = &par_norm - val;
            visit(&x, &norm);
        });
    }
}

fn check_hyperbolic_positive(l: &IntegerLattice, a: &RatVec) -> Result<Q, EnumError> {
    if a.len() != l.rank() {
        return Err(EnumError::Precondition("dimension mismatch"));
    }
    if !l.is_hyperbolic() {
        return Err(EnumError::NotHyperbolic);
    }
    let n = Q::new(BigInt::from(l.norm(&a.num)), BigInt::from(a.den * a.den));
    if !n.is_positive() {
        return Err(EnumError::NotPositive);
    }
    Ok(n)
}

/// `{ v ∈ L : ⟨a, v⟩ = b, ⟨v, v⟩ = d }` for `L` hyperbolic and `⟨a, a⟩ > 0`.
pub fn vectors_with_pairing(l: &IntegerLattice, a: &RatVec, b: i64, d: i64) -> Result<Vec<ZVec>, EnumError> {
    check_hyperbolic_positive(l, a)?;
    let fe = FiberEnumerator::new(l.gram(), &[a.to_q()])?;
    Ok(fe.solve(&vec![Q::zero(); l.rank()], &[q(b)], &q(d)))
}

/// The pairing values `⟨a, v⟩` for `v ∈ L` form the group `step · Z`.
fn pairing_step(l: &IntegerLattice, a: &RatVec) -> Q {
    let ag = arith::vec_mat(&a.num, l.gram());
    Q::new(BigInt::from(arith::gcd_slice(&ag)), BigInt::from(a.den))
}

/// `{ v ∈ L : ⟨a₁, v⟩ > 0, ⟨a₂, v⟩ < 0, ⟨v, v⟩ = d }` for positive `a₁`, `a₂` with `⟨a₁, a₂⟩ > 0`.
pub fn separating_roots(l: &IntegerLattice, a1: &RatVec, a2: &RatVec, d: i64) -> Result<Vec<ZVec>, EnumError> {
    let n11 = check_hyperbolic_positive(l, a1)?;
    let n22 = check_hyperbolic_positive(l, a2)?;
    if d >= 0 {
        return Err(EnumError::NonNegativeNorm);
    }
    let n12 = Q::new(BigInt::from(l.pairing(&a1.num, &a2.num)), BigInt::from(a1.den * a2.den));
    if !n12.is_positive() {
        return Err(EnumError::Precondition("reference vectors must pair positively"));
    }
    let det = &n11 * &n22 - &n12 * &n12;
    if det.is_zero() {
        // proportional: no vector can have opposite signs against both
        return Ok(Vec::new());
    }
    let fe = FiberEnumerator::new(l.gram(), &[a1.to_q(), a2.to_q()])?;
    let (s1, s2) = (pairing_step(l, a1), pairing_step(l, a2));
    // projection to span(a₁,a₂) has norm ≥ d  ⇔  n22·b1² − 2n12·b1·b2 + n11·b2² ≤ d·det
    let kbound = q(d) * &det;
    let zero = vec![Q::zero(); l.rank()];
    let mut out = Vec::new();
    let mut i = 1i64;
    loop {
        let b1 = &s1 * q(i);
        if &n22 * &b1 * &b1 > kbound {
            break;
        }
        let mut j = 1i64;
        loop {
            let b2 = -(&s2 * q(j));
            let f = &n22 * &b1 * &b1 - q(2) * &n12 * &b1 * &b2 + &n11 * &b2 * &b2;
            if f > kbound {
                break;
            }
            out.extend(fe.solve(&zero, &[b1.clone(), b2], &q(d)));
            j += 1;
        }
        i += 1;
    }
    out.sort();
    Ok(out)
}

/// Reference implementation: all `x` in the box `|xᵢ| ≤ r` with `⟨x,x⟩ = d`.
pub fn brute_force_box(gram: &ZMat, r: i64, mut keep: impl FnMut(&[i64]) -> bool) -> Vec<ZVec> {
    let n = gram.len();
    let mut out = Vec::new();
    let mut x = vec![-r; n];
    if n == 0 {
        if keep(&x) {
            out.push(x);
        }
        return out;
    }
    loop {
        if keep(&x) {
            out.push(x.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                out.sort();
                return out;
            }
            if x[i] < r {
                x[i] += 1;
                break;
            }
            x[i] = -r;
            i += 1;
        }
    }
}

/// A coordinate-box radius that contains every vector of norm `≥ −b` in a negative definite
/// lattice: `|xᵢ| ≤ sqrt(b · (P⁻¹)ᵢᵢ)` with `P = −G`.
pub fn box_radius(gram: &ZMat, b: i64) -> i64 {
    let p = arith::to_qmat(&arith::neg_mat(gram));
    let inv = arith::q_inverse(&p).expect("nondegenerate");
    (0..gram.len())
        .map(|i| {
            let x = &inv[i][i] * q(b);
            let s = arith::isqrt_floor_q(&x);
            arith::big_to_i64(&s) + 1
        })
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_core::{a_gram, d_gram, direct_sum, e8_gram};
    use proptest::prelude::*;

    #[test]
    fn rank_one() {
        let l = IntegerLattice::new(vec![vec![-2]]).unwrap();
        assert_eq!(short_vectors(&l, -2).unwrap(), vec![vec![-1], vec![1]]);
        assert!(short_vectors(&l, 0).is_err());
    }

    #[test]
    fn e8_roots() {
        let l = IntegerLattice::new(e8_gram()).unwrap();
        let roots = short_vectors(&l, -2).unwrap();
        assert_eq!(roots.len(), 240);
        assert_eq!(short_vectors_with(&l, -2, true).unwrap(), roots);
        assert_eq!(short_vectors(&l, -4).unwrap().len(), 2160);
    }

    #[test]
    fn hyperbolic_plane_fiber() {
        let l = IntegerLattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let a = RatVec::integral(vec![1, 1]);
        assert_eq!(
            vectors_with_pairing(&l, &a, 0, -2).unwrap(),
            vec![vec![-1, 1], vec![1, -1]]
        );
    }

    #[test]
    fn separating_same_vector_is_empty() {
        let l = IntegerLattice::new(direct_sum(&[vec![vec![0, 1], vec![1, 0]], vec![vec![-2]]])).unwrap();
        let a = RatVec::integral(vec![1, 2, 0]);
        assert!(separating_roots(&l, &a, &a, -2).unwrap().is_empty());
    }

    #[test]
    fn separating_across_a_mirror() {
        // U ⊕ ⟨−2⟩, root r = (0,0,1); a₁ = (2,3,1) and a₂ = (2,3,−1) lie on opposite sides
        let l = IntegerLattice::new(direct_sum(&[vec![vec![0, 1], vec![1, 0]], vec![vec![-2]]])).unwrap();
        let a1 = RatVec::integral(vec![2, 3, 1]);
        let a2 = RatVec::integral(vec![2, 3, -1]);
        let got = separating_roots(&l, &a1, &a2, -2).unwrap();
        let brute = brute_force_box(l.gram(), 4, |x| {
            l.norm(x) == -2 && l.pairing(&a1.num, x) > 0 && l.pairing(&a2.num, x) < 0
        });
        assert_eq!(got, brute);
        assert!(got.contains(&vec![0, 0, -1]));
        assert!(!got.contains(&vec![0, 0, 1]));
    }

    fn rank_le_4_fixtures() -> Vec<ZMat> {
        vec![
            vec![vec![-2]],
            vec![vec![-6]],
            a_gram(2),
            vec![vec![-2, -1], vec![-1, -8]],
            vec![vec![-6, 0], vec![0, -6]],
            a_gram(3),
            direct_sum(&[a_gram(2), vec![vec![-2]]]),
            vec![vec![-4, 1, 0], vec![1, -4, 1], vec![0, 1, -6]],
            d_gram(4),
            a_gram(4),
            direct_sum(&[a_gram(2), a_gram(2)]),
            vec![
                vec![-4, 2, 1, 0],
                vec![2, -6, 1, 1],
                vec![1, 1, -4, 0],
                vec![0, 1, 0, -10],
            ],
        ]
    }

    #[test]
    fn definite_fixtures_match_box_search() {
        for g in rank_le_4_fixtures() {
            let l = IntegerLattice::new(g.clone()).unwrap();
            for d in 1..=12 {
                let r = box_radius(&g, d);
                let brute = brute_force_box(&g, r, |x| l.norm(x) == -d);
                assert_eq!(short_vectors(&l, -d).unwrap(), brute, "gram {g:?} norm {d}");
                assert_eq!(short_vectors_with(&l, -d, true).unwrap(), brute);
            }
        }
    }

    proptest! {
        #[test]
        fn random_definite_rank3(a in 2i64..8, b in -3i64..4, c in 2i64..8, e in -3i64..4, f in 2i64..10, h in -3i64..4, d in 1i64..13) {
            let g = vec![vec![-a, b, h], vec![b, -c, e], vec![h, e, -f]];
            let l = IntegerLattice::new(g.clone());
            prop_assume!(l.is_ok());
            let l = l.unwrap();
            prop_assume!(l.is_negative_definite());
            let r = box_radius(&g, d);
            let brute = brute_force_box(&g, r, |x| l.norm(x) == -d);
            let got = short_vectors(&l, -d).unwrap();
            prop_assert_eq!(&got, &brute);
            for v in &got {
                prop_assert!(got.binary_search(&arith::neg_vec(v)).is_ok());
            }
        }

        #[test]
        fn hyperbolic_fiber_matches_box(x in 1i64..4, y in 1i64..4, z in -2i64..3, b in -4i64..5, d in -8i64..1) {
            // U ⊕ A₂, a = (x, y, z, 0) with ⟨a,a⟩ = 2xy − 2z² > 0
            let g = direct_sum(&[vec![vec![0, 1], vec![1, 0]], a_gram(2)]);
            let l = IntegerLattice::new(g.clone()).unwrap();
            let a = RatVec::integral(vec![x, y, z, 0]);
            prop_assume!(l.norm(&a.num) > 0);
            let got = vectors_with_pairing(&l, &a, b, d).unwrap();
            for v in &got {
                prop_assert_eq!(l.pairing(&a.num, v), b);
                prop_assert_eq!(l.norm(v), d);
            }
            let neg: Vec<ZVec> = {
                let mut n: Vec<ZVec> = vectors_with_pairing(&l, &a, -b, d).unwrap().iter().map(|v| arith::neg_vec(v)).collect();
                n.sort();
                n
            };
            prop_assert_eq!(&got, &neg);
            let brute = brute_force_box(&g, 7, |v| l.pairing(&a.num, v) == b && l.norm(v) == d);
            // every box solution is found (the box may miss far solutions, never the reverse)
            for v in &brute {
                prop_assert!(got.binary_search(v).is_ok());
            }
        }
    }
}
