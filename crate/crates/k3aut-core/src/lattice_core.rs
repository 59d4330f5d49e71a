//! Lattices, rational vectors, isometries and sublattices.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, q, QVec, ZMat, ZVec, Q, R64};
use crate::enumeration;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    DimensionMismatch,
    NotSymmetric,
    Degenerate,
    NotPrimitive,
    NotDefinite,
    RankCap(usize),
    NotIsometry,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DimensionMismatch => write!(f, "dimension mismatch"),
            Self::NotSymmetric => write!(f, "Gram matrix is not symmetric"),
            Self::Degenerate => write!(f, "Gram matrix is degenerate"),
            Self::NotPrimitive => write!(f, "sublattice is not primitive"),
            Self::NotDefinite => write!(f, "lattice is not negative definite"),
            Self::RankCap(r) => write!(f, "rank {r} exceeds the configured cap"),
            Self::NotIsometry => write!(f, "matrix is not an isometry"),
        }
    }
}

impl core::error::Error for LatticeError {}

/// A free Z-module with a nondegenerate symmetric integer Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerLattice {
    gram: ZMat,
}

impl IntegerLattice {
    pub fn new(gram: ZMat) -> Result<Self, LatticeError> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::DimensionMismatch);
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        if n > 0 && arith::det_z(&gram).is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(Self { gram })
    }

    pub fn gram(&self) -> &ZMat {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn det(&self) -> BigInt {
        if self.rank() == 0 {
            return BigInt::one();
        }
        arith::det_z(&self.gram)
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0)
    }

    pub fn pairing(&self, u: &[i64], v: &[i64]) -> i64 {
        arith::bilinear(&self.gram, u, v)
    }

    pub fn norm(&self, v: &[i64]) -> i64 {
        self.pairing(v, v)
    }

    pub fn pairing_rat(&self, u: &RatVec, v: &RatVec) -> R64 {
        R64::new(self.pairing(&u.num, &v.num), u.den * v.den)
    }

    /// Sylvester signature `(positive, negative)`.
    pub fn signature(&self) -> (usize, usize) {
        signature(&self.gram)
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature() == (0, self.rank())
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.signature() == (1, self.rank() - 1)
    }

    /// Inverse Gram matrix, i.e. the Gram matrix of the dual basis.
    pub fn gram_inverse(&self) -> Vec<QVec> {
        arith::q_inverse(&arith::to_qmat(&self.gram)).expect("nondegenerate")
    }

    pub fn negated(&self) -> Self {
        Self {
            gram: arith::neg_mat(&self.gram),
        }
    }
}

/// Sylvester signature of a symmetric integer matrix (rational congruence diagonalisation).
pub fn signature(g: &ZMat) -> (usize, usize) {
    let n = g.len();
    let mut a = arith::to_qmat(g);
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        // find a nonzero diagonal pivot in the remaining block
        if let Some(p) = (k..n).find(|&i| !a[i][i].is_zero()) {
            a.swap(k, p);
            for row in a.iter_mut() {
                row.swap(k, p);
            }
        } else if let Some((i, j)) = (k..n)
            .flat_map(|i| (k..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        {
            // add row/col j to i to create a nonzero diagonal entry
            let _ = i;
            let (i, j) = if i == k { (j, i) } else { (i, j) };
            let rj = a[j].clone();
            for (x, y) in a[i].iter_mut().zip(&rj) {
                *x += y;
            }
            for row in a.iter_mut() {
                let y = row[j].clone();
                row[i] += y;
            }
            if a[i][i].is_zero() {
                // add with opposite sign instead
                let rj = a[j].clone();
                for (x, y) in a[i].iter_mut().zip(&rj) {
                    *x -= y * q(2);
                }
                for row in a.iter_mut() {
                    let y = row[j].clone();
                    row[i] -= y * q(2);
                }
            }
            continue;
        } else {
            break;
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        // Schur complement on the trailing block
        let prow = a[k].clone();
        for i in k + 1..n {
            if !prow[i].is_zero() {
                let f = &prow[i] / &p;
                for j in k + 1..n {
                    let y = &f * &prow[j];
                    a[i][j] -= y;
                }
            }
        }
        for i in k + 1..n {
            a[i][k] = Q::zero();
            a[k][i] = Q::zero();
        }
        k += 1;
    }
    (pos, neg)
}

/// A rational vector `num / den` with `den > 0` and `gcd(num, den) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVec {
    pub num: ZVec,
    pub den: i64,
}

impl RatVec {
    pub fn new(num: ZVec, den: i64) -> Self {
        assert!(den != 0);
        let (mut num, mut den) = (num, den);
        if den < 0 {
            num = arith::neg_vec(&num);
            den = -den;
        }
        let g = arith::gcd_slice(&num).gcd(&den);
        if g > 1 {
            num = num.iter().map(|x| x / g).collect();
            den /= g;
        }
        Self { num, den }
    }

    pub fn integral(v: ZVec) -> Self {
        Self { num: v, den: 1 }
    }

    pub fn from_q(v: &[Q]) -> Self {
        let (nums, den) = arith::clear_denominators(v);
        Self::new(nums.iter().map(arith::big_to_i64).collect(), arith::big_to_i64(&den))
    }

    pub fn to_q(&self) -> QVec {
        self.num.iter().map(|x| arith::qr(*x, self.den)).collect()
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    pub fn neg(&self) -> Self {
        Self {
            num: arith::neg_vec(&self.num),
            den: self.den,
        }
    }

    pub fn scale(&self, s: R64) -> Self {
        Self::new(self.num.iter().map(|x| x * s.numer()).collect(), self.den * s.denom())
    }

    pub fn add(&self, other: &Self) -> Self {
        let l = self.den.lcm(&other.den);
        let (a, b) = (l / self.den, l / other.den);
        Self::new(self.num.iter().zip(&other.num).map(|(x, y)| x * a + y * b).collect(), l)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn apply(&self, m: &ZMat) -> Self {
        Self::new(arith::vec_mat(&self.num, m), self.den)
    }

    pub fn is_zero(&self) -> bool {
        arith::is_zero_vec(&self.num)
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.num.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let r = R64::new(*x, self.den);
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// An integer matrix acting on row vectors from the right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isometry {
    pub matrix: ZMat,
}

impl Isometry {
    pub fn new(l: &IntegerLattice, matrix: ZMat) -> Result<Self, LatticeError> {
        if !is_isometry(l.gram(), &matrix) {
            return Err(LatticeError::NotIsometry);
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: arith::identity(n),
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: arith::mat_mul(&self.matrix, &other.matrix),
        }
    }
}

/// `A · G · Aᵀ = G` for a nondegenerate Gram matrix `G` (which forces `det A = ±1`).
pub fn is_isometry(g: &ZMat, a: &ZMat) -> bool {
    let n = g.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return false;
    }
    // the Gram matrix is nondegenerate, so A·G·Aᵀ = G forces det A = ±1
    arith::gram_of(g, a) == *g
}

/// Inverse of a unimodular integer matrix, by Euclidean row reduction of `[A | I]`.
pub fn unimodular_inverse(a: &ZMat) -> ZMat {
    let n = a.len();
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<i128> = r.iter().map(|&x| x as i128).collect();
            row.extend((0..n).map(|j| i128::from(i == j)));
            row
        })
        .collect();
    for c in 0..n {
        // Euclid on column c among rows c..n until one nonzero entry remains
        loop {
            let mut piv: Option<usize> = None;
            for r in c..n {
                if m[r][c] != 0 && piv.is_none_or(|p| m[r][c].abs() < m[p][c].abs()) {
                    piv = Some(r);
                }
            }
            let p = piv.expect("matrix is not unimodular");
            m.swap(c, p);
            let mut done = true;
            for r in c + 1..n {
                if m[r][c] != 0 {
                    let f = m[r][c] / m[c][c];
                    for j in c..2 * n {
                        let v = m[c][j];
                        m[r][j] -= f * v;
                    }
                    if m[r][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        assert!(m[c][c].abs() == 1, "matrix is not unimodular");
        if m[c][c] < 0 {
            for j in c..2 * n {
                m[c][j] = -m[c][j];
            }
        }
    }
    for c in (0..n).rev() {
        for r in 0..c {
            let f = m[r][c];
            if f != 0 {
                for j in c..2 * n {
                    let v = m[c][j];
                    m[r][j] -= f * v;
                }
            }
        }
    }
    m.iter()
        .map(|r| {
            r[n..]
                .iter()
                .map(|&x| i64::try_from(x).expect("inverse entries fit in i64"))
                .collect()
        })
        .collect()
}

/// Inverse of an isometry via `A⁻¹ = G Aᵀ G⁻¹`; falls back to elimination.
pub fn isometry_inverse(a: &ZMat) -> ZMat {
    unimodular_inverse(a)
}

/// A sublattice given by basis rows in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SublatticeEmbedding {
    pub ambient: IntegerLattice,
    pub basis_rows: ZMat,
}

impl SublatticeEmbedding {
    pub fn new(ambient: IntegerLattice, basis_rows: ZMat) -> Result<Self, LatticeError> {
        if basis_rows.iter().any(|r| r.len() != ambient.rank()) {
            return Err(LatticeError::DimensionMismatch);
        }
        let e = Self { ambient, basis_rows };
        if !e.basis_rows.is_empty() && arith::det_z(&e.induced_gram()).is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(e)
    }

    pub fn induced_gram(&self) -> ZMat {
        arith::gram_of(self.ambient.gram(), &self.basis_rows)
    }

    pub fn lattice(&self) -> IntegerLattice {
        IntegerLattice {
            gram: self.induced_gram(),
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.basis_rows.is_empty() || arith::rows_primitive(&self.basis_rows)
    }

    /// Ambient coordinates of a sublattice vector.
    pub fn push_forward(&self, v: &[i64]) -> ZVec {
        arith::vec_mat(v, &self.basis_rows)
    }
}

/// The primitive sublattice orthogonal to all rows of `emb`.
pub fn orthogonal_complement(emb: &SublatticeEmbedding) -> Result<SublatticeEmbedding, LatticeError> {
    if !emb.is_primitive() {
        return Err(LatticeError::NotPrimitive);
    }
    let n = emb.ambient.rank();
    let rows = if emb.basis_rows.is_empty() {
        arith::identity(n)
    } else {
        let gbt: ZMat = arith::transpose(
            &emb.basis_rows
                .iter()
                .map(|r| arith::vec_mat(r, emb.ambient.gram()))
                .collect::<ZMat>(),
        );
        arith::left_kernel(&gbt)
    };
    Ok(SublatticeEmbedding {
        ambient: emb.ambient.clone(),
        basis_rows: rows,
    })
}

/// Gauss reduction of a negative definite binary form.
///
/// Works with the positive form `P = −F`, brings it to `|2b| ≤ a ≤ c` with `b ≥ 0`
/// (reduction under GL₂(Z)), and returns `−P`.
pub fn gauss_reduce_binary(form: &[[i64; 2]; 2]) -> Result<[[i64; 2]; 2], LatticeError> {
    if form[0][1] != form[1][0] {
        return Err(LatticeError::NotSymmetric);
    }
    let (mut a, mut b, mut c) = (-form[0][0], -form[0][1], -form[1][1]);
    if a <= 0 || a * c - b * b <= 0 {
        return Err(LatticeError::NotDefinite);
    }
    loop {
        if 2 * b.abs() > a {
            // translate: (x, y) ↦ (x, y − t x) with t = round(b / a)
            let t = (2 * b + a).div_euclid(2 * a);
            c = c - 2 * t * b + t * t * a;
            b -= t * a;
            continue;
        }
        if a > c {
            core::mem::swap(&mut a, &mut c);
            continue;
        }
        break;
    }
    b = b.abs();
    Ok([[-a, -b], [-b, -c]])
}

/// The full orthogonal group of a negative definite lattice of rank ≤ `cap`.
pub fn definite_orthogonal_group(l: &IntegerLattice, cap: usize) -> Result<Vec<ZMat>, LatticeError> {
    let n = l.rank();
    if n > cap {
        return Err(LatticeError::RankCap(n));
    }
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }
    if !l.is_negative_definite() {
        return Err(LatticeError::NotDefinite);
    }
    // work in an LLL-reduced basis, conjugate back at the end
    let t = arith::lll_gram(&arith::neg_mat(l.gram()));
    let t_inv = unimodular_inverse(&t);
    let g = arith::gram_of(l.gram(), &t);
    let red = IntegerLattice { gram: g.clone() };
    let mut candidates: Vec<Vec<ZVec>> = Vec::with_capacity(n);
    for i in 0..n {
        let norm = g[i][i];
        let vs = enumeration::short_vectors_reduced(&red, norm);
        candidates.push(vs);
    }
    let mut out = Vec::new();
    let mut images: Vec<ZVec> = Vec::with_capacity(n);
    backtrack_images(&red, &candidates, &mut images, &mut out);
    // conjugate: A = T⁻¹ · M · T
    let mut res: Vec<ZMat> = out
        .into_iter()
        .map(|m| arith::mat_mul(&arith::mat_mul(&t_inv, &m), &t))
        .collect();
    res.sort();
    Ok(res)
}

fn backtrack_images(l: &IntegerLattice, candidates: &[Vec<ZVec>], images: &mut Vec<ZVec>, out: &mut Vec<ZMat>) {
    let i = images.len();
    let n = candidates.len();
    if i == n {
        out.push(images.clone());
        return;
    }
    let g = l.gram();
    for v in &candidates[i] {
        let ok = images.iter().enumerate().all(|(j, w)| l.pairing(v, w) == g[i][j]);
        if ok {
            images.push(v.clone());
            backtrack_images(l, candidates, images, out);
            images.pop();
        }
    }
}

// ---------------------------------------------------------------------------
// standard root lattices (negative definite), labelled as in the usual Dynkin pictures:
//   A_l: a1 – a2 – … – al
//   D_m: d2 – d3 – d4 – … – dm, with d1 attached to d3
//   E_n: e2 – e3 – e4 – … – en, with e1 attached to e4

pub fn cartan_from_edges(n: usize, edges: &[(usize, usize)]) -> ZMat {
    let mut g = arith::zeros(n, n);
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    for &(a, b) in edges {
        g[a][b] = 1;
        g[b][a] = 1;
    }
    g
}

pub fn a_gram(l: usize) -> ZMat {
    let edges: Vec<(usize, usize)> = (1..l).map(|i| (i - 1, i)).collect();
    cartan_from_edges(l, &edges)
}

pub fn d_gram(m: usize) -> ZMat {
    // indices: d1 = 0, d2 = 1, …, dm = m-1
    let mut edges: Vec<(usize, usize)> = (2..m).map(|i| (i - 1, i)).collect();
    edges.push((0, 2));
    cartan_from_edges(m, &edges)
}

pub fn e_gram(n: usize) -> ZMat {
    let mut edges: Vec<(usize, usize)> = (2..n).map(|i| (i - 1, i)).collect();
    edges.push((0, 3));
    cartan_from_edges(n, &edges)
}

/// `E₈⁻` with the labelling above.
pub fn e8_gram() -> ZMat {
    e_gram(8)
}

/// Block diagonal sum.
pub fn direct_sum(blocks: &[ZMat]) -> ZMat {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut g = arith::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                g[off + i][off + j] = *x;
            }
        }
        off += b.len();
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn e8_is_unimodular_even_definite() {
        let l = IntegerLattice::new(e8_gram()).unwrap();
        assert!(l.det().is_one());
        assert!(l.is_even());
        assert!(l.is_negative_definite());
    }

    #[test]
    fn signature_of_hyperbolic_plane() {
        assert_eq!(signature(&vec![vec![0, 1], vec![1, 0]]), (1, 1));
        assert_eq!(signature(&vec![vec![0, 1], vec![1, -2]]), (1, 1));
        assert_eq!(signature(&vec![vec![2, 0], vec![0, 2]]), (2, 0));
    }

    #[test]
    fn gauss_examples() {
        assert_eq!(gauss_reduce_binary(&[[-6, 0], [0, -6]]).unwrap(), [[-6, 0], [0, -6]]);
        assert_eq!(
            gauss_reduce_binary(&[[-8, -1], [-1, -2]]).unwrap(),
            [[-2, -1], [-1, -8]]
        );
        assert!(gauss_reduce_binary(&[[2, 0], [0, -2]]).is_err());
    }

    #[test]
    fn orthogonal_group_small() {
        let l = IntegerLattice::new(vec![vec![-2]]).unwrap();
        let g = definite_orthogonal_group(&l, 8).unwrap();
        assert_eq!(g, vec![vec![vec![-1]], vec![vec![1]]]);
        // W(A2) × {±1} has order 12
        let a2 = IntegerLattice::new(a_gram(2)).unwrap();
        assert_eq!(definite_orthogonal_group(&a2, 8).unwrap().len(), 12);
        // |O(D4)| = 1152
        let d4 = IntegerLattice::new(d_gram(4)).unwrap();
        assert_eq!(definite_orthogonal_group(&d4, 8).unwrap().len(), 1152);
    }

    #[test]
    fn orthogonal_group_closed_rank_le_4() {
        let l = IntegerLattice::new(direct_sum(&[a_gram(2), a_gram(1)])).unwrap();
        let grp = definite_orthogonal_group(&l, 8).unwrap();
        assert_eq!(grp.len(), 24);
        for a in &grp {
            assert!(is_isometry(l.gram(), a));
            let inv = unimodular_inverse(a);
            assert!(grp.binary_search(&inv).is_ok());
            for b in grp.iter().take(6) {
                assert!(grp.binary_search(&arith::mat_mul(a, b)).is_ok());
            }
        }
    }

    #[test]
    fn complement_twice_is_saturation() {
        let amb = IntegerLattice::new(direct_sum(&[vec![vec![0, 1], vec![1, -2]], e8_gram()])).unwrap();
        let mut r = vec![0i64; 10];
        r[2] = 1;
        r[3] = 1;
        let emb = SublatticeEmbedding::new(amb, vec![r.clone()]).unwrap();
        let c = orthogonal_complement(&emb).unwrap();
        assert_eq!(c.basis_rows.len(), 9);
        let cc = orthogonal_complement(&c).unwrap();
        assert_eq!(arith::saturation(&cc.basis_rows), arith::saturation(&vec![r]));
    }

    proptest! {
        #[test]
        fn gauss_reduction_is_invariant(a in 1i64..20, b in -20i64..20, c in 1i64..40,
                                        p in -3i64..4, q2 in -3i64..4, r in -3i64..4) {
            prop_assume!(a * c - b * b > 0);
            let f = [[-a, -b], [-b, -c]];
            // a unimodular matrix [[1, p], [0, 1]] · [[1, 0], [q2, 1]] · [[0,1],[1,r]]
            let u1 = vec![vec![1, p], vec![0, 1]];
            let u2 = vec![vec![1, 0], vec![q2, 1]];
            let u3 = vec![vec![0, 1], vec![1, r]];
            let u = arith::mat_mul(&arith::mat_mul(&u1, &u2), &u3);
            let fm = vec![vec![f[0][0], f[0][1]], vec![f[1][0], f[1][1]]];
            let g = arith::gram_of(&fm, &u);
            let red1 = gauss_reduce_binary(&f).unwrap();
            let red2 = gauss_reduce_binary(&[[g[0][0], g[0][1]], [g[1][0], g[1][1]]]).unwrap();
            prop_assert_eq!(red1, red2);
            prop_assert_eq!(gauss_reduce_binary(&red1).unwrap(), red1);
        }
    }
}
