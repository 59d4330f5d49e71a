//! Chambers in hyperbolic lattices: wall extraction by exact linear programming,
//! automorphism groups of wall sets, congruence tests and orbit decomposition.
//!
//! Defining vectors live in the dual lattice and are stored by their *dual coordinates*
//! `t = v·G` (an integer vector), so that `⟨v, x⟩ = t·x` for `x` in lattice coordinates.
//! A dual vector is primitive in `L∨` iff its dual coordinates are coprime.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, q, QMat, QVec, ZMat, ZVec, Q};
use crate::lattice_core::{self, IntegerLattice, RatVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChamberError {
    EmptyInterior,
    WallsDoNotSpan,
    NotClosed,
    DimensionMismatch,
}

impl fmt::Display for ChamberError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyInterior => write!(f, "interior point certificate fails"),
            Self::WallsDoNotSpan => write!(f, "wall vectors do not span the ambient space"),
            Self::NotClosed => write!(f, "group does not act on the given set"),
            Self::DimensionMismatch => write!(f, "dimension mismatch"),
        }
    }
}

impl core::error::Error for ChamberError {}

/// A chamber given by defining dual vectors and an interior point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    pub lattice: IntegerLattice,
    /// Dual coordinates of the defining vectors; the chamber is `{x : t·x ≥ 0}` in the
    /// positive cone containing `interior`.
    pub defining: Vec<ZVec>,
    pub interior: RatVec,
}

/// A wall of a chamber with an exact witness point on the wall hyperplane that lies
/// strictly on the positive side of every other defining hyperplane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub dual: ZVec,
    pub witness: RatVec,
}

impl Chamber {
    pub fn new(lattice: IntegerLattice, defining: Vec<ZVec>, interior: RatVec) -> Result<Self, ChamberError> {
        let n = lattice.rank();
        if interior.len() != n || defining.iter().any(|t| t.len() != n) {
            return Err(ChamberError::DimensionMismatch);
        }
        let c = Self {
            lattice,
            defining,
            interior,
        };
        if !c.interior_certified() {
            return Err(ChamberError::EmptyInterior);
        }
        Ok(c)
    }

    /// `⟨x, v⟩ > 0` for all defining `v` and `⟨x, x⟩ > 0`.
    pub fn interior_certified(&self) -> bool {
        self.lattice.norm(&self.interior.num) > 0 && self.defining.iter().all(|t| arith::dot(t, &self.interior.num) > 0)
    }

    /// Primitive, deduplicated defining vectors in sorted order.
    pub fn normalized_defining(&self) -> Vec<ZVec> {
        let set: BTreeSet<ZVec> = self.defining.iter().map(|t| arith::primitive_part(t)).collect();
        set.into_iter().collect()
    }
}

/// The pairing on dual vectors given by dual coordinates: `t·G⁻¹·uᵀ`, scaled by `|det G|`
/// to stay integral.
#[derive(Debug, Clone)]
pub struct DualForm {
    pub scale: i64,
    pub adj: ZMat,
}

impl DualForm {
    pub fn new(gram: &ZMat) -> Self {
        let det = arith::det_z(gram);
        let inv = arith::q_inverse(&arith::to_qmat(gram)).expect("nondegenerate");
        let scale = arith::big_to_i64(&det.abs());
        let adj = inv
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        let y = x * q(scale);
                        assert!(y.is_integer());
                        arith::big_to_i64(&y.to_integer())
                    })
                    .collect()
            })
            .collect();
        Self { scale, adj }
    }

    /// `|det G| · ⟨t, u⟩`.
    pub fn scaled(&self, t: &[i64], u: &[i64]) -> i64 {
        arith::dot(&arith::vec_mat(t, &self.adj), u)
    }

    pub fn pairing(&self, t: &[i64], u: &[i64]) -> Q {
        Q::new(BigInt::from(self.scaled(t, u)), BigInt::from(self.scale))
    }

    pub fn norm(&self, t: &[i64]) -> Q {
        self.pairing(t, t)
    }
}

/// Action of an isometry `g` (rows act on lattice coordinates) on dual coordinates:
/// `t ↦ t·(g⁻¹)ᵀ`.
pub fn dual_action(g: &ZMat) -> ZMat {
    arith::transpose(&lattice_core::unimodular_inverse(g))
}

/// Isometry `g` from its dual action matrix `T = (g⁻¹)ᵀ`.
pub fn from_dual_action(t: &ZMat) -> ZMat {
    lattice_core::unimodular_inverse(&arith::transpose(t))
}

// ---------------------------------------------------------------------------
// exact simplex (phase one of the Farkas system)

/// Outcome of testing whether `target` lies in the cone spanned by `columns`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeMembership {
    /// `target = Σ λⱼ columnⱼ` with `λ ≥ 0`.
    Inside(Vec<(usize, Q)>),
    /// `x` with `x·column ≥ 0` for every column and `x·target < 0`.
    Separated(QVec),
}

/// Decides `target ∈ cone(columns)` with a revised simplex method on the phase-one
/// problem `min Σ aᵢ` s.t. `A·λ + a = b`, `λ, a ≥ 0`, using Bland's rule.
pub fn cone_membership(columns: &[ZVec], target: &[i64]) -> ConeMembership {
    let n = target.len();
    let m = columns.len();
    // row signs so that b ≥ 0
    let sign: Vec<i64> = target.iter().map(|b| if *b < 0 { -1 } else { 1 }).collect();
    let b: QVec = target.iter().zip(&sign).map(|(x, s)| q(x * s)).collect();
    let col = |j: usize| -> ZVec {
        if j < m {
            columns[j].iter().zip(&sign).map(|(x, s)| x * s).collect()
        } else {
            let mut e = vec![0; n];
            e[j - m] = 1;
            e
        }
    };
    let cost = |j: usize| -> Q {
        if j < m {
            Q::zero()
        } else {
            Q::one()
        }
    };
    let mut basis: Vec<usize> = (m..m + n).collect();
    let mut binv: QMat = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    let mut xb: QVec = b.clone();
    let mut in_basis = vec![false; m + n];
    for j in m..m + n {
        in_basis[j] = true;
    }
    loop {
        // simplex multipliers y = c_B B⁻¹ as integers over a common denominator
        let mut y: QVec = vec![Q::zero(); n];
        for (i, &bj) in basis.iter().enumerate() {
            let c = cost(bj);
            if !c.is_zero() {
                for (yk, bk) in y.iter_mut().zip(&binv[i]) {
                    *yk += &c * bk;
                }
            }
        }
        let (ynum, _yden) = arith::clear_denominators(&y);
        // Bland: smallest index with negative reduced cost c_j − y·A_j
        let mut entering = None;
        for j in 0..m + n {
            if in_basis[j] {
                continue;
            }
            let a = col(j);
            let mut s = BigInt::zero();
            for (yk, ak) in ynum.iter().zip(&a) {
                if *ak != 0 {
                    s += yk * BigInt::from(*ak);
                }
            }
            let red = if j < m {
                -s.signum()
            } else {
                // c_j = 1: reduced cost 1 − y·e
                let v = Q::one() - &y[j - m];
                if v.is_negative() {
                    -BigInt::one()
                } else if v.is_zero() {
                    BigInt::zero()
                } else {
                    BigInt::one()
                }
            };
            if red.is_negative() {
                entering = Some(j);
                break;
            }
        }
        let Some(e) = entering else {
            let obj: Q = basis
                .iter()
                .zip(&xb)
                .filter(|(bj, _)| **bj >= m)
                .map(|(_, x)| x.clone())
                .sum();
            if obj.is_zero() {
                let mut lam: Vec<(usize, Q)> = basis
                    .iter()
                    .zip(&xb)
                    .filter(|(bj, x)| **bj < m && !x.is_zero())
                    .map(|(bj, x)| (*bj, x.clone()))
                    .collect();
                lam.sort();
                return ConeMembership::Inside(lam);
            }
            // certificate: x = −(y·S)
            let x: QVec = y.iter().zip(&sign).map(|(yk, s)| -(yk * q(*s))).collect();
            return ConeMembership::Separated(x);
        };
        let a = col(e);
        let u: QVec = binv
            .iter()
            .map(|row| {
                let mut s = Q::zero();
                for (r, ak) in row.iter().zip(&a) {
                    if *ak != 0 && !r.is_zero() {
                        s += r * q(*ak);
                    }
                }
                s
            })
            .collect();
        // ratio test, ties broken by the smallest basic variable index
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..n {
            if u[i].is_positive() {
                let r = &xb[i] / &u[i];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => r < *lr || (r == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, r));
                }
            }
        }
        let (l, _) = leave.expect("phase-one problem is bounded");
        let piv = u[l].clone();
        let prow: QVec = binv[l].iter().map(|x| x / &piv).collect();
        let xl = &xb[l] / &piv;
        for i in 0..n {
            if i == l || u[i].is_zero() {
                continue;
            }
            let f = u[i].clone();
            for (x, p) in binv[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            xb[i] -= &f * &xl;
        }
        binv[l] = prow;
        xb[l] = xl;
        in_basis[basis[l]] = false;
        in_basis[e] = true;
        basis[l] = e;
    }
}

/// Wall status of one defining vector against the others; returns the witness when it is
/// a wall.
pub fn wall_witness(defining: &[ZVec], idx: usize, interior: &RatVec) -> Option<RatVec> {
    let others: Vec<ZVec> = defining
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != idx)
        .map(|(_, t)| t.clone())
        .collect();
    let v = &defining[idx];
    match cone_membership(&others, v) {
        ConeMembership::Inside(_) => None,
        ConeMembership::Separated(x) => {
            // y = p + s·x with s chosen so that ⟨v, y⟩ = 0
            let p = interior.to_q();
            let vp = q_dot_z(v, &p);
            let vx = q_dot_z(v, &x);
            debug_assert!(vx.is_negative() && vp.is_positive());
            let s = -(vp / vx);
            let y: QVec = p.iter().zip(&x).map(|(a, b)| a + &s * b).collect();
            let w = RatVec::from_q(&y);
            // exact re-check
            assert_eq!(arith::dot(v, &w.num), 0);
            assert!(others.iter().all(|u| arith::dot(u, &w.num) > 0));
            Some(w)
        }
    }
}

fn q_dot_z(t: &[i64], x: &[Q]) -> Q {
    let mut s = Q::zero();
    for (a, b) in t.iter().zip(x) {
        if *a != 0 {
            s += q(*a) * b;
        }
    }
    s
}

/// All walls of a chamber: a defining vector is kept iff it is not in the cone spanned by
/// the others (equivalently the LP `min ⟨v,x⟩` over the other half-spaces is unbounded).
pub fn extract_walls(c: &Chamber) -> Result<Vec<Wall>, ChamberError> {
    if !c.interior_certified() {
        return Err(ChamberError::EmptyInterior);
    }
    let defs = c.normalized_defining();
    let mut out = Vec::new();
    for i in 0..defs.len() {
        if let Some(w) = wall_witness(&defs, i, &c.interior) {
            out.push(Wall {
                dual: defs[i].clone(),
                witness: w,
            });
        }
    }
    Ok(out)
}

/// As [`extract_walls`], solving one LP per orbit of a group preserving the defining set.
/// `group` holds lattice isometries; the result is the same set in the same order.
pub fn extract_walls_symmetric(c: &Chamber, group: &[ZMat]) -> Result<Vec<Wall>, ChamberError> {
    if !c.interior_certified() {
        return Err(ChamberError::EmptyInterior);
    }
    let defs = c.normalized_defining();
    let duals: Vec<ZMat> = group.iter().map(dual_action).collect();
    let orbits = orbit_decompose_with(&defs, &duals)?;
    let index: BTreeMap<&ZVec, usize> = defs.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut witness: Vec<Option<RatVec>> = vec![None; defs.len()];
    for orbit in &orbits {
        let rep = &orbit.members[0];
        let ri = index[rep];
        if let Some(w) = wall_witness(&defs, ri, &c.interior) {
            for (m, gi) in orbit.members.iter().zip(&orbit.transversal) {
                let wi = match gi {
                    None => w.clone(),
                    Some(word) => {
                        let mut x = w.clone();
                        for g in word {
                            x = x.apply(&group[*g]);
                        }
                        x
                    }
                };
                witness[index[m]] = Some(wi);
            }
        }
    }
    Ok(defs
        .into_iter()
        .zip(witness)
        .filter_map(|(t, w)| w.map(|w| Wall { dual: t, witness: w }))
        .collect())
}

// ---------------------------------------------------------------------------
// orbits

/// An orbit with, for each member, a word in the acting matrices carrying the
/// representative (the first member) to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub members: Vec<ZVec>,
    pub transversal: Vec<Option<Vec<usize>>>,
}

/// Orbits of `vectors` under the group generated by `mats` acting by `v ↦ v·g`; orbits are
/// keyed (and sorted) by their lexicographically minimal element, which is listed first.
pub fn orbit_decompose_with(vectors: &[ZVec], mats: &[ZMat]) -> Result<Vec<Orbit>, ChamberError> {
    let set: BTreeSet<&ZVec> = vectors.iter().collect();
    let mut seen: BTreeSet<ZVec> = BTreeSet::new();
    let mut sorted: Vec<&ZVec> = set.iter().copied().collect();
    sorted.sort();
    let mut out = Vec::new();
    for v in sorted {
        if seen.contains(v) {
            continue;
        }
        let mut members = vec![v.clone()];
        let mut words: Vec<Option<Vec<usize>>> = vec![None];
        seen.insert(v.clone());
        let mut head = 0;
        while head < members.len() {
            let cur = members[head].clone();
            let cur_word = words[head].clone().unwrap_or_default();
            for (gi, g) in mats.iter().enumerate() {
                let img = arith::vec_mat(&cur, g);
                if !set.contains(&img) {
                    return Err(ChamberError::NotClosed);
                }
                if seen.insert(img.clone()) {
                    let mut w = cur_word.clone();
                    w.push(gi);
                    members.push(img);
                    words.push(Some(w));
                }
            }
            head += 1;
        }
        // members[0] is the minimum because we scan in sorted order
        out.push(Orbit {
            members,
            transversal: words,
        });
    }
    Ok(out)
}

/// Orbits as plain sorted vector lists (first element = canonical key).
pub fn orbit_decompose(vectors: &[ZVec], group: &[ZMat]) -> Result<Vec<Vec<ZVec>>, ChamberError> {
    Ok(orbit_decompose_with(vectors, group)?
        .into_iter()
        .map(|o| {
            let mut m = o.members;
            m.sort();
            m
        })
        .collect())
}

// ---------------------------------------------------------------------------
// isometries between wall sets

/// Scaled pairings `|det G|·⟨tᵢ, uⱼ⟩` between two sets of dual vectors, row-major.
fn pairing_table(form: &DualForm, a: &[ZVec], b: &[ZVec]) -> Vec<i32> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for t in a {
        let th = arith::vec_mat(t, &form.adj);
        for u in b {
            out.push(i32::try_from(arith::dot(&th, u)).expect("scaled pairing fits in i32"));
        }
    }
    out
}

/// `(norm, sorted multiset of pairings with the other vectors)`.
type Profile = (i32, Vec<(i32, usize)>);

/// Pairing fingerprints of each vector of the set.
fn fingerprints(table: &[i32], m: usize) -> Vec<Profile> {
    (0..m)
        .map(|i| {
            let row = &table[i * m..(i + 1) * m];
            let mut hist: BTreeMap<i32, usize> = BTreeMap::new();
            for &x in row {
                *hist.entry(x).or_insert(0) += 1;
            }
            (row[i], hist.into_iter().collect())
        })
        .collect()
}

/// Enumerates all lattice isometries `g` with `from·g = to` as sets of dual vectors,
/// calling `visit` on each (in a deterministic order) until it breaks.
///
/// The search fixes a base of independent vectors of `from`, ordered greedily so that each
/// base vector is as determined as possible by its pairings with the earlier ones, and
/// backtracks over images with matching fingerprints and pairings.
pub fn for_each_set_isometry(
    gram: &ZMat,
    from: &[ZVec],
    to: &[ZVec],
    mut visit: impl FnMut(&ZMat) -> ControlFlow<()>,
) -> Result<(), ChamberError> {
    let n = gram.len();
    let m = from.len();
    if m != to.len() {
        return Ok(());
    }
    let qrows: Vec<QVec> = from.iter().map(|t| arith::to_qvec(t)).collect();
    if arith::q_rank(&qrows) < n {
        return Err(ChamberError::WallsDoNotSpan);
    }
    let form = DualForm::new(gram);
    let pa = pairing_table(&form, from, from);
    let pb = if from == to {
        pa.clone()
    } else {
        pairing_table(&form, to, to)
    };
    let fa = fingerprints(&pa, m);
    let fb = fingerprints(&pb, m);
    {
        let mut sa = fa.clone();
        let mut sb = fb.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return Ok(());
        }
    }
    // fingerprint classes as small integers
    let class_ids: BTreeMap<&Profile, usize> = {
        let set: BTreeSet<&Profile> = fa.iter().collect();
        set.into_iter().enumerate().map(|(i, f)| (f, i)).collect()
    };
    let ca: Vec<usize> = fa.iter().map(|f| class_ids[f]).collect();
    let cb: Vec<usize> = fb.iter().map(|f| class_ids[f]).collect();
    // greedy base: minimize the number of vectors sharing the profile (class, pairings
    // with the chosen base vectors)
    let mut base: Vec<usize> = Vec::new();
    let mut base_rows: Vec<QVec> = Vec::new();
    while base.len() < n {
        let mut groups: BTreeMap<(usize, Vec<i32>), usize> = BTreeMap::new();
        let profile =
            |i: usize, base: &[usize]| -> (usize, Vec<i32>) { (ca[i], base.iter().map(|&b| pa[b * m + i]).collect()) };
        for i in 0..m {
            *groups.entry(profile(i, &base)).or_insert(0) += 1;
        }
        let mut order: Vec<(usize, usize)> = (0..m)
            .filter(|i| !base.contains(i))
            .map(|i| (groups[&profile(i, &base)], i))
            .collect();
        order.sort();
        let mut picked = false;
        for (_, i) in order {
            base_rows.push(qrows[i].clone());
            if arith::q_rank(&base_rows) == base_rows.len() {
                base.push(i);
                picked = true;
                break;
            }
            base_rows.pop();
        }
        if !picked {
            return Err(ChamberError::WallsDoNotSpan);
        }
    }
    let base_mat: QMat = base.iter().map(|&i| qrows[i].clone()).collect();
    let base_inv = arith::q_inverse(&base_mat).expect("independent base");
    let target_set: BTreeSet<&ZVec> = to.iter().collect();
    let base_pair: Vec<Vec<i32>> = (0..n)
        .map(|i| (0..n).map(|j| pa[base[i] * m + base[j]]).collect())
        .collect();
    let mut class_b: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in cb.iter().enumerate() {
        class_b.entry(c).or_default().push(i);
    }
    let cands: Vec<&Vec<usize>> = base.iter().map(|&i| &class_b[&ca[i]]).collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut stop = false;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        depth: usize,
        n: usize,
        m: usize,
        cands: &[&Vec<usize>],
        base_pair: &[Vec<i32>],
        pb: &[i32],
        chosen: &mut Vec<usize>,
        finish: &mut dyn FnMut(&[usize]) -> bool,
        stop: &mut bool,
    ) {
        if *stop {
            return;
        }
        if depth == n {
            if finish(chosen) {
                *stop = true;
            }
            return;
        }
        for &c in cands[depth] {
            if pb[c * m + c] != base_pair[depth][depth] || chosen.contains(&c) {
                continue;
            }
            let ok = (0..depth).all(|j| pb[chosen[j] * m + c] == base_pair[j][depth]);
            if ok {
                chosen.push(c);
                rec(depth + 1, n, m, cands, base_pair, pb, chosen, finish, stop);
                chosen.pop();
                if *stop {
                    return;
                }
            }
        }
    }
    // T = base⁻¹·img with base⁻¹ = binv/den in machine integers; g = G·T·G⁻¹
    let (binv, den) = {
        let flat: QVec = base_inv.iter().flatten().cloned().collect();
        let (nums, d) = arith::clear_denominators(&flat);
        let to_i128 = |x: &BigInt| i128::try_from(x).ok().filter(|v| v.abs() < (1i128 << 62));
        let rows: Option<Vec<Vec<i128>>> = nums.chunks(n).map(|r| r.iter().map(to_i128).collect()).collect();
        (
            rows.expect("base inverse fits in machine integers"),
            to_i128(&d).expect("denominator fits"),
        )
    };
    let mut finish = |img: &[usize]| -> bool {
        let mut t: ZMat = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s: i128 = 0;
                for (k, &c) in img.iter().enumerate() {
                    s += binv[i][k] * i128::from(to[c][j]);
                }
                if s % den != 0 {
                    return false;
                }
                t[i][j] = match i64::try_from(s / den) {
                    Ok(v) => v,
                    Err(_) => return false,
                };
            }
        }
        let gt = arith::mat_mul(gram, &t);
        let num = arith::mat_mul(&gt, &form.adj);
        if num.iter().flatten().any(|x| x % form.scale != 0) {
            return false;
        }
        let g: ZMat = num.iter().map(|r| r.iter().map(|x| x / form.scale).collect()).collect();
        if !lattice_core::is_isometry(gram, &g) {
            return false;
        }
        if !from.iter().all(|v| target_set.contains(&arith::vec_mat(v, &t))) {
            return false;
        }
        visit(&g).is_break()
    };
    rec(0, n, m, &cands, &base_pair, &pb, &mut chosen, &mut finish, &mut stop);
    Ok(())
}

/// All isometries preserving a spanning set of dual vectors, sorted.
pub fn set_stabilizer(gram: &ZMat, set: &[ZVec]) -> Result<Vec<ZMat>, ChamberError> {
    let mut out = Vec::new();
    for_each_set_isometry(gram, set, set, |g| {
        out.push(g.clone());
        ControlFlow::Continue(())
    })?;
    out.sort();
    Ok(out)
}

/// The automorphism group of a chamber given by its walls.
pub fn chamber_aut(c: &Chamber, walls: &[Wall]) -> Result<Vec<ZMat>, ChamberError> {
    let w: Vec<ZVec> = walls.iter().map(|w| w.dual.clone()).collect();
    set_stabilizer(c.lattice.gram(), &w)
}

/// Some isometry mapping the wall set `walls1` onto `walls2`, if any; `accept` filters
/// candidates (e.g. by a Torelli condition). The first accepted match is returned.
pub fn chamber_congruent(
    gram: &ZMat,
    walls1: &[ZVec],
    walls2: &[ZVec],
    mut accept: impl FnMut(&ZMat) -> bool,
) -> Result<Option<ZMat>, ChamberError> {
    let mut found = None;
    for_each_set_isometry(gram, walls1, walls2, |g| {
        if accept(g) {
            found = Some(g.clone());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_core::direct_sum;

    fn u_a1() -> IntegerLattice {
        // U ⊕ ⟨−2⟩ ⊕ ⟨−2⟩
        IntegerLattice::new(direct_sum(&[
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![-2]],
            vec![vec![-2]],
        ]))
        .unwrap()
    }

    #[test]
    fn duplicates_collapse_to_one_wall() {
        let l = u_a1();
        // x = (3,3,0,0): ⟨x,x⟩ = 18
        let x = RatVec::integral(vec![3, 3, 0, 0]);
        let e = vec![1, 0, 0, 0];
        let c = Chamber::new(l, vec![e.clone(), e.clone(), vec![2, 0, 0, 0]], x).unwrap();
        let w = extract_walls(&c).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].dual, e);
    }

    #[test]
    fn redundant_vector_is_dropped() {
        let l = u_a1();
        let x = RatVec::integral(vec![3, 3, 0, 0]);
        let a = vec![1, 0, 0, 0];
        let b = vec![0, 1, 0, 0];
        let ab = vec![1, 1, 0, 0];
        let c = Chamber::new(l, vec![a.clone(), b.clone(), ab], x).unwrap();
        let w: Vec<ZVec> = extract_walls(&c).unwrap().into_iter().map(|w| w.dual).collect();
        assert_eq!(w, vec![b, a]);
    }

    #[test]
    fn interior_failure() {
        let l = u_a1();
        let x = RatVec::integral(vec![3, 3, 0, 0]);
        assert_eq!(
            Chamber::new(l, vec![vec![-1, 0, 0, 0]], x).unwrap_err(),
            ChamberError::EmptyInterior
        );
    }

    #[test]
    fn cone_membership_certificates() {
        let cols = vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 1]];
        match cone_membership(&cols, &[2, 3, 1]) {
            ConeMembership::Inside(l) => {
                let mut s = vec![Q::zero(); 3];
                for (j, c) in l {
                    for k in 0..3 {
                        s[k] += &c * q(cols[j][k]);
                    }
                }
                assert_eq!(s, vec![q(2), q(3), q(1)]);
            }
            _ => panic!("expected membership"),
        }
        match cone_membership(&cols, &[0, 0, 1]) {
            ConeMembership::Separated(x) => {
                for c in &cols {
                    assert!(!q_dot_z(c, &x).is_negative());
                }
                assert!(q_dot_z(&[0, 0, 1], &x).is_negative());
            }
            _ => panic!("expected separation"),
        }
    }

    #[test]
    fn stabilizer_of_coordinate_frame() {
        // walls ±eᵢ in the dual of the definite-free hyperbolic lattice U ⊕ A1 ⊕ A1 all span
        let l = u_a1();
        let set: Vec<ZVec> = vec![
            vec![0, 0, 1, 0],
            vec![0, 0, -1, 0],
            vec![0, 0, 0, 1],
            vec![0, 0, 0, -1],
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
        ];
        let grp = set_stabilizer(l.gram(), &set).unwrap();
        // signs of the two A1 factors, their swap, and the swap of the U basis
        assert_eq!(grp.len(), 16);
        for g in &grp {
            assert!(lattice_core::is_isometry(l.gram(), g));
        }
        let orbits = orbit_decompose(&set, &grp.iter().map(dual_action).collect::<Vec<_>>()).unwrap();
        assert_eq!(orbits.len(), 2);
    }

    #[test]
    fn asymmetric_set_has_trivial_group() {
        let l = u_a1();
        let set: Vec<ZVec> = vec![
            vec![1, 0, 0, 0],
            vec![0, 2, 1, 0],
            vec![0, 1, 0, 3],
            vec![1, 1, 1, 1],
            vec![0, 0, 1, 0],
        ];
        let set: Vec<ZVec> = set.iter().map(|t| arith::primitive_part(t)).collect();
        let grp = set_stabilizer(l.gram(), &set).unwrap();
        assert_eq!(grp, vec![arith::identity(4)]);
    }
}
