//! Exact integer and rational linear algebra used throughout the crate.
//!
//! Integer vectors and matrices are plain `Vec<i64>` / `Vec<Vec<i64>>`; anything that can
//! grow (elimination, reduction, Smith forms) runs on `BigInt`/`BigRational` internally.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type ZVec = Vec<i64>;
pub type ZMat = Vec<Vec<i64>>;
pub type Q = BigRational;
pub type QVec = Vec<Q>;
pub type QMat = Vec<Vec<Q>>;
pub type R64 = Ratio<i64>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn big_to_i64(b: &BigInt) -> i64 {
    b.to_i64().expect("integer does not fit in i64")
}

pub fn q_to_r64(x: &Q) -> R64 {
    R64::new(big_to_i64(x.numer()), big_to_i64(x.denom()))
}

pub fn r64_to_q(x: &R64) -> Q {
    qr(*x.numer(), *x.denom())
}

pub fn identity(n: usize) -> ZMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn zeros(r: usize, c: usize) -> ZMat {
    vec![vec![0; c]; r]
}

pub fn transpose(m: &ZMat) -> ZMat {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

pub fn dot(u: &[i64], v: &[i64]) -> i64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn vec_mat(v: &[i64], m: &ZMat) -> ZVec {
    let cols = m.first().map_or(0, Vec::len);
    let mut out = vec![0i64; cols];
    for (x, row) in v.iter().zip(m) {
        if *x != 0 {
            for (o, e) in out.iter_mut().zip(row) {
                *o += x * e;
            }
        }
    }
    out
}

pub fn mat_mul(a: &ZMat, b: &ZMat) -> ZMat {
    a.iter().map(|row| vec_mat(row, b)).collect()
}

/// `u · G · vᵀ`.
pub fn bilinear(g: &ZMat, u: &[i64], v: &[i64]) -> i64 {
    dot(&vec_mat(u, g), v)
}

/// `B · G · Bᵀ`.
pub fn gram_of(g: &ZMat, rows: &ZMat) -> ZMat {
    let bg: ZMat = rows.iter().map(|r| vec_mat(r, g)).collect();
    rows.iter().map(|r| bg.iter().map(|s| dot(r, s)).collect()).collect()
}

pub fn neg_mat(m: &ZMat) -> ZMat {
    m.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
}

pub fn neg_vec(v: &[i64]) -> ZVec {
    v.iter().map(|x| -x).collect()
}

pub fn add_vec(u: &[i64], v: &[i64]) -> ZVec {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn sub_vec(u: &[i64], v: &[i64]) -> ZVec {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn scale_vec(v: &[i64], s: i64) -> ZVec {
    v.iter().map(|x| x * s).collect()
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

/// Divides out the content; the zero vector is returned unchanged.
pub fn primitive_part(v: &[i64]) -> ZVec {
    let g = gcd_slice(v);
    if g <= 1 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

pub fn is_zero_vec(v: &[i64]) -> bool {
    v.iter().all(|x| *x == 0)
}

// ---------------------------------------------------------------------------
// rational matrices

pub fn to_qmat(m: &ZMat) -> QMat {
    m.iter().map(|r| r.iter().map(|x| q(*x)).collect()).collect()
}

pub fn to_qvec(v: &[i64]) -> QVec {
    v.iter().map(|x| q(*x)).collect()
}

pub fn q_dot(u: &[Q], v: &[Q]) -> Q {
    let mut s = Q::zero();
    for (a, b) in u.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            s += a * b;
        }
    }
    s
}

pub fn q_vec_mat(v: &[Q], m: &QMat) -> QVec {
    let cols = m.first().map_or(0, Vec::len);
    let mut out = vec![Q::zero(); cols];
    for (x, row) in v.iter().zip(m) {
        if !x.is_zero() {
            for (o, e) in out.iter_mut().zip(row) {
                if !e.is_zero() {
                    *o += x * e;
                }
            }
        }
    }
    out
}

pub fn q_mat_mul(a: &QMat, b: &QMat) -> QMat {
    a.iter().map(|r| q_vec_mat(r, b)).collect()
}

pub fn q_transpose(m: &QMat) -> QMat {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Common denominator and integer numerators of a rational vector.
pub fn clear_denominators(v: &[Q]) -> (Vec<BigInt>, BigInt) {
    let mut den = BigInt::one();
    for x in v {
        den = den.lcm(x.denom());
    }
    let nums = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    (nums, den)
}

/// Inverse of a square rational matrix, `None` when singular.
pub fn q_inverse(m: &QMat) -> Option<QMat> {
    let n = m.len();
    let mut a: QMat = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let prow = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn q_det(m: &QMat) -> Q {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        let prow = a[col].clone();
        for row in a.iter_mut().skip(col + 1) {
            if !row[col].is_zero() {
                let f = &row[col] / &p;
                for (x, pv) in row.iter_mut().zip(&prow) {
                    if !pv.is_zero() {
                        *x -= &f * pv;
                    }
                }
            }
        }
    }
    det
}

pub fn det_z(m: &ZMat) -> BigInt {
    let d = q_det(&to_qmat(m));
    d.to_integer()
}

/// Row echelon rank over Q.
pub fn q_rank(rows: &[QVec]) -> usize {
    let mut a: QMat = rows.to_vec();
    let (nr, nc) = (a.len(), a.first().map_or(0, Vec::len));
    let mut rank = 0;
    for col in 0..nc {
        let Some(piv) = (rank..nr).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let prow = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            if !row[col].is_zero() {
                let f = &row[col] / &prow[col];
                for (x, pv) in row.iter_mut().zip(&prow) {
                    if !pv.is_zero() {
                        *x -= &f * pv;
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn z_rank(rows: &ZMat) -> usize {
    let qm: Vec<QVec> = rows.iter().map(|r| to_qvec(r)).collect();
    q_rank(&qm)
}

/// Solves `c · B = v` for `c`, where the rows of `B` are linearly independent.
pub fn q_solve_left(b: &QMat, v: &[Q]) -> Option<QVec> {
    let k = b.len();
    let n = v.len();
    // Columns of the system: unknowns c_0..c_{k-1}; equations one per coordinate.
    let mut a: QMat = (0..n)
        .map(|j| {
            let mut row: QVec = (0..k).map(|i| b[i][j].clone()).collect();
            row.push(v[j].clone());
            row
        })
        .collect();
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..k {
        let Some(piv) = (r..n).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        let inv = a[r][col].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let prow = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut c = vec![Q::zero(); k];
    for (i, col) in pivots.iter().enumerate() {
        c[*col] = a[i][k].clone();
    }
    Some(c)
}

// ---------------------------------------------------------------------------
// integer row reduction, kernels, Smith normal form

type BMat = Vec<Vec<BigInt>>;

fn to_bmat(m: &ZMat) -> BMat {
    m.iter().map(|r| r.iter().map(|x| BigInt::from(*x)).collect()).collect()
}

fn bmat_to_z(m: &BMat) -> ZMat {
    m.iter().map(|r| r.iter().map(big_to_i64).collect()).collect()
}

fn row_axpy(a: &mut BMat, target: usize, src: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    let (t, s) = if target < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= f * y;
        }
    }
}

/// Unimodular row reduction of `[m | I]` to echelon form on the `m` part.
/// Returns (echelon rows of `m`, transform rows, rank).
fn row_echelon_with_transform(m: &ZMat) -> (BMat, BMat, usize) {
    let nr = m.len();
    let nc = m.first().map_or(0, Vec::len);
    let mut a = to_bmat(m);
    for (i, row) in a.iter_mut().enumerate() {
        row.extend((0..nr).map(|j| BigInt::from(i64::from(i == j))));
    }
    let mut rank = 0;
    for col in 0..nc {
        loop {
            let piv = (rank..nr)
                .filter(|&r| !a[r][col].is_zero())
                .min_by(|&x, &y| a[x][col].abs().cmp(&a[y][col].abs()));
            let Some(p) = piv else { break };
            a.swap(rank, p);
            let mut done = true;
            for r in rank + 1..nr {
                if !a[r][col].is_zero() {
                    let f = a[r][col].div_floor(&a[rank][col]);
                    row_axpy(&mut a, r, rank, &f);
                    if !a[r][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                if a[rank][col].is_negative() {
                    for x in a[rank].iter_mut() {
                        *x = -&*x;
                    }
                }
                // reduce rows above to keep entries small
                for r in 0..rank {
                    if !a[r][col].is_zero() {
                        let f = a[r][col].div_floor(&a[rank][col]);
                        row_axpy(&mut a, r, rank, &f);
                    }
                }
                rank += 1;
                break;
            }
        }
        if rank == nr {
            break;
        }
    }
    let ech = a.iter().map(|r| r[..nc].to_vec()).collect();
    let tr = a.iter().map(|r| r[nc..].to_vec()).collect();
    (ech, tr, rank)
}

/// Basis (rows) of the saturated left kernel `{x ∈ Zⁿ : x·m = 0}`, LLL-free but size-reduced.
pub fn left_kernel(m: &ZMat) -> ZMat {
    let nr = m.len();
    if nr == 0 {
        return Vec::new();
    }
    if m[0].is_empty() {
        return identity(nr);
    }
    let (_, tr, rank) = row_echelon_with_transform(m);
    let mut k: BMat = tr[rank..].to_vec();
    reduce_rows_hnf(&mut k);
    bmat_to_z(&k)
}

/// Hermite-style reduction of the rows of a basis (keeps the span, shrinks entries).
fn reduce_rows_hnf(k: &mut BMat) {
    if k.is_empty() {
        return;
    }
    let n = k[0].len();
    let mut rank = 0;
    let nr = k.len();
    for col in 0..n {
        loop {
            let piv = (rank..nr)
                .filter(|&r| !k[r][col].is_zero())
                .min_by(|&x, &y| k[x][col].abs().cmp(&k[y][col].abs()));
            let Some(p) = piv else { break };
            k.swap(rank, p);
            let mut done = true;
            for r in rank + 1..nr {
                if !k[r][col].is_zero() {
                    let f = k[r][col].div_floor(&k[rank][col]);
                    row_axpy(k, r, rank, &f);
                    if !k[r][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                if k[rank][col].is_negative() {
                    for x in k[rank].iter_mut() {
                        *x = -&*x;
                    }
                }
                for r in 0..rank {
                    if !k[r][col].is_zero() {
                        let f = k[r][col].div_floor(&k[rank][col]);
                        row_axpy(k, r, rank, &f);
                    }
                }
                rank += 1;
                break;
            }
        }
        if rank == nr {
            break;
        }
    }
}

/// Hermite normal form of the row span (nonzero rows only).
pub fn hnf_rows(m: &ZMat) -> ZMat {
    let mut k = to_bmat(m);
    reduce_rows_hnf(&mut k);
    k.retain(|r| r.iter().any(|x| !x.is_zero()));
    bmat_to_z(&k)
}

/// Saturation `(span_Q rows) ∩ Zⁿ`, as an HNF basis.
pub fn saturation(rows: &ZMat) -> ZMat {
    if rows.is_empty() {
        return Vec::new();
    }
    let right = left_kernel(&transpose(rows)); // y with rows·yᵀ = 0
    if right.is_empty() {
        return identity(rows[0].len());
    }
    left_kernel(&transpose(&right))
}

/// Smith normal form `U · m · V = D` with `U`, `V` unimodular.
pub struct Smith {
    pub u: ZMat,
    pub v: ZMat,
    /// Diagonal entries (length `min(rows, cols)`), non-negative, each dividing the next.
    pub diag: Vec<BigInt>,
}

pub fn smith(m: &ZMat) -> Smith {
    let nr = m.len();
    let nc = m.first().map_or(0, Vec::len);
    let mut a = to_bmat(m);
    let mut u = to_bmat(&identity(nr));
    let mut v = to_bmat(&identity(nc));
    let mut t = 0;
    while t < nr.min(nc) {
        // choose the smallest nonzero entry in the remaining block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..nr {
            if !a[i][t].is_zero() {
                let f = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &f);
                row_axpy(&mut u, i, t, &f);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..nc {
            if !a[t][j].is_zero() {
                let f = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut() {
                    let s = row[t].clone();
                    row[j] -= &f * s;
                }
                for row in v.iter_mut() {
                    let s = row[t].clone();
                    row[j] -= &f * s;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // divisibility condition
        let p = a[t][t].clone();
        let mut bad = None;
        'outer: for i in t + 1..nr {
            for j in t + 1..nc {
                if !(&a[i][j] % &p).is_zero() {
                    bad = Some(i);
                    break 'outer;
                }
            }
        }
        if let Some(i) = bad {
            // add row i to row t and retry
            row_axpy(&mut a, t, i, &BigInt::from(-1));
            row_axpy(&mut u, t, i, &BigInt::from(-1));
            continue;
        }
        if p.is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
        t += 1;
    }
    let diag = (0..nr.min(nc)).map(|i| a[i][i].clone()).collect();
    Smith {
        u: bmat_to_z(&u),
        v: bmat_to_z(&v),
        diag,
    }
}

/// Whether the row span of `rows` is a primitive (saturated) sublattice of `Zⁿ`.
pub fn rows_primitive(rows: &ZMat) -> bool {
    let s = smith(rows);
    s.diag.iter().all(|d| d.is_one()) && s.diag.len() == rows.len()
}

/// Integer solution `x` of `x · m = target`, if any.
pub fn solve_left_integer(m: &ZMat, target: &[i64]) -> Option<ZVec> {
    // U m V = D  ⇒  x m = t  ⇔  (x U⁻¹) D = t V
    let s = smith(m);
    let tv = vec_mat(target, &s.v);
    let nr = m.len();
    let mut y = vec![BigInt::zero(); nr];
    for (j, t) in tv.iter().enumerate() {
        let d = s.diag.get(j).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if *t != 0 {
                return None;
            }
        } else {
            let tb = BigInt::from(*t);
            if !(&tb % &d).is_zero() {
                return None;
            }
            if j < nr {
                y[j] = tb / d;
            }
        }
    }
    // x = y U
    let mut x = vec![BigInt::zero(); nr];
    for (yi, urow) in y.iter().zip(&s.u) {
        if !yi.is_zero() {
            for (xj, uij) in x.iter_mut().zip(urow) {
                *xj += yi * BigInt::from(*uij);
            }
        }
    }
    Some(x.iter().map(big_to_i64).collect())
}

// ---------------------------------------------------------------------------
// integral LLL on a Gram matrix

/// LLL reduction (δ = 3/4) of a positive definite integer Gram matrix.
/// Returns `T` (unimodular, rows = new basis in old coordinates); the reduced Gram is `T·G·Tᵀ`.
pub fn lll_gram(g: &ZMat) -> ZMat {
    let gb = to_bmat(g);
    bmat_to_z(&lll_gram_big(&gb))
}

/// Same as [`lll_gram`] for a big-integer Gram matrix.
pub fn lll_gram_big(g: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = g.len();
    let mut gm: Vec<Vec<BigInt>> = g.to_vec();
    let mut h: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect())
        .collect();
    if n <= 1 {
        return h;
    }
    // d[0] = 1, d[i] for i = 1..=n (1-based as in the integral algorithm)
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[0] = BigInt::one();
    d[1] = gm[0][0].clone();
    let mut k = 1usize; // 0-based index of current vector
    let mut kmax = 0usize;

    fn red(k: usize, l: usize, gm: &mut [Vec<BigInt>], h: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt]) {
        let dl = &d[l + 1];
        let two_l: BigInt = &lam[k][l] * BigInt::from(2);
        if two_l.abs() > *dl {
            // nearest integer to lam/dl
            let qv = (&two_l + dl).div_floor(&(dl * 2));
            if qv.is_zero() {
                return;
            }
            let n = gm.len();
            for j in 0..n {
                let t = &qv * &h[l][j];
                h[k][j] -= t;
            }
            // Gram update: b_k -= q b_l
            for j in 0..n {
                let t = &qv * &gm[l][j];
                gm[k][j] -= t;
            }
            for j in 0..n {
                let t = &qv * &gm[j][l];
                gm[j][k] -= t;
            }
            lam[k][l] -= &qv * dl;
            for i in 0..l {
                let t = &qv * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    }

    loop {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = gm[k][j].clone();
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    assert!(!u.is_zero(), "Gram matrix is not positive definite");
                    d[k + 1] = u;
                }
            }
        }
        loop {
            red(k, k - 1, &mut gm, &mut h, &mut lam, &d);
            let lhs = BigInt::from(4) * &d[k + 1] * &d[k - 1];
            let rhs = BigInt::from(3) * &d[k] * &d[k] - BigInt::from(4) * &lam[k][k - 1] * &lam[k][k - 1];
            if lhs < rhs {
                // swap k and k-1
                h.swap(k, k - 1);
                gm.swap(k, k - 1);
                for row in gm.iter_mut() {
                    row.swap(k, k - 1);
                }
                for j in 0..k - 1 {
                    let t = lam[k][j].clone();
                    lam[k][j] = lam[k - 1][j].clone();
                    lam[k - 1][j] = t;
                }
                let l = lam[k][k - 1].clone();
                let b = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
                for i in k + 1..=kmax {
                    let t = lam[i][k].clone();
                    lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
                    lam[i][k - 1] = (&b * &t + &l * &lam[i][k]) / &d[k + 1];
                }
                d[k] = b;
                if k > 1 {
                    k -= 1;
                }
            } else {
                for l in (0..k - 1).rev() {
                    red(k, l, &mut gm, &mut h, &mut lam, &d);
                }
                k += 1;
                break;
            }
        }
        if k >= n {
            break;
        }
    }
    h
}

pub fn cmp_q(a: &Q, b: &Q) -> Ordering {
    a.cmp(b)
}

/// Floor of the square root of a non-negative rational.
pub fn isqrt_floor_q(x: &Q) -> BigInt {
    let f = x.floor().to_integer();
    if f.is_negative() {
        return BigInt::zero();
    }
    f.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_row() {
        let m = vec![vec![2], vec![3], vec![5]];
        let k = left_kernel(&m);
        assert_eq!(k.len(), 2);
        for r in &k {
            assert_eq!(dot(r, &[2, 3, 5]), 0);
        }
        assert!(rows_primitive(&k));
    }

    #[test]
    fn smith_diag() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith(&m);
        let d: Vec<i64> = s.diag.iter().map(big_to_i64).collect();
        assert_eq!(d, vec![2, 6, 12]);
        let prod = mat_mul(&mat_mul(&s.u, &m), &s.v);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(prod[i][j], if i == j { d[i] } else { 0 });
            }
        }
    }

    #[test]
    fn saturation_recovers() {
        let rows = vec![vec![2, 0, 0], vec![0, 3, 3]];
        let s = saturation(&rows);
        assert_eq!(s, vec![vec![1, 0, 0], vec![0, 1, 1]]);
    }

    #[test]
    fn lll_reduces_skewed_basis() {
        // Gram of the basis (1,0),(100,1) of Z² under the standard form
        let g = vec![vec![1, 100], vec![100, 10001]];
        let t = lll_gram(&g);
        let r = gram_of(&g, &t);
        assert_eq!(r[0][0] + r[1][1], 2);
        assert_eq!(det_z(&t).abs(), BigInt::one());
    }

    #[test]
    fn integer_solve() {
        let m = vec![vec![4], vec![6]];
        let x = solve_left_integer(&m, &[2]).unwrap();
        assert_eq!(4 * x[0] + 6 * x[1], 2);
        assert!(solve_left_integer(&m, &[3]).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = to_qmat(&vec![vec![2, 1], vec![1, 8]]);
        let inv = q_inverse(&m).unwrap();
        let p = q_mat_mul(&m, &inv);
        assert_eq!(p, to_qmat(&identity(2)));
    }
}
