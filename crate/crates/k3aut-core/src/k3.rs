//! Surface-level computations on the Néron–Severi lattices `S_k`: the surface data, nef and
//! ample tests, smooth rational curve classes, polarizations, double-plane involutions,
//! involution types and line configurations.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed};

use crate::arith::{self, ZMat, ZVec};
use crate::borcherds;
use crate::discform::{DiscError, TorelliData};
use crate::enumeration::{self, EnumError};
use crate::groups::MatrixGroup;
use crate::lattice_core::{self, IntegerLattice, LatticeError, RatVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum K3Error {
    NotPositive,
    NotNef,
    NotInvolution,
    NotPolarization,
    WrongDegree,
    NotAde,
    NotIntegral,
    NotInvariant,
    Lattice(LatticeError),
    Enumeration(EnumError),
    Discriminant(DiscError),
}

impl fmt::Display for K3Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotPositive => write!(f, "vector does not have positive norm"),
            Self::NotNef => write!(f, "class is not nef"),
            Self::NotInvolution => write!(f, "matrix is not an involution"),
            Self::NotPolarization => write!(f, "class is not a polarization"),
            Self::WrongDegree => write!(f, "polarization has the wrong degree"),
            Self::NotAde => write!(f, "root configuration is not of ADE type"),
            Self::NotIntegral => write!(f, "constructed matrix is not an integral isometry"),
            Self::NotInvariant => write!(f, "group elements do not preserve the line classes"),
            Self::Lattice(e) => write!(f, "lattice error: {e}"),
            Self::Enumeration(e) => write!(f, "enumeration error: {e}"),
            Self::Discriminant(e) => write!(f, "discriminant error: {e}"),
        }
    }
}

impl core::error::Error for K3Error {}

impl From<LatticeError> for K3Error {
    fn from(e: LatticeError) -> Self {
        Self::Lattice(e)
    }
}
impl From<EnumError> for K3Error {
    fn from(e: EnumError) -> Self {
        Self::Enumeration(e)
    }
}
impl From<DiscError> for K3Error {
    fn from(e: DiscError) -> Self {
        Self::Discriminant(e)
    }
}

// ---------------------------------------------------------------------------
// surface data

/// The `2×2` block spanned by `s₁, s₂`.
pub fn mordell_weil_block(k: usize) -> ZMat {
    match k {
        0 => vec![vec![-6, 0], vec![0, -6]],
        1 => vec![vec![-2, 0], vec![0, -12]],
        2 => vec![vec![-2, -1], vec![-1, -8]],
        _ => panic!("surface index must be 0, 1 or 2"),
    }
}

/// Gram matrix of `S_k` in the basis `f, z, s₁, s₂, e₁…e₈, e′₁…e′₈`.
pub fn surface_gram(k: usize) -> ZMat {
    let e8 = lattice_core::e8_gram();
    lattice_core::direct_sum(&[borcherds::u_ell(), mordell_weil_block(k), e8.clone(), e8])
}

/// Index of `s₁` in the basis; `s₂` follows it.
pub const S1_INDEX: usize = 2;

#[derive(Debug, Clone)]
pub struct SurfaceConfig {
    pub k: usize,
    pub gram: ZMat,
    /// `2f + z`: nef of norm 2.
    pub nef_seed: ZVec,
    /// The smooth rational curves orthogonal to the nef seed.
    pub base_curves: Vec<ZVec>,
    /// The ample class at the center of the base induced chamber.
    pub ample: ZVec,
    pub embedding: ZMat,
    torelli: TorelliData,
}

fn unit(n: usize, i: usize) -> ZVec {
    let mut v = vec![0i64; n];
    v[i] = 1;
    v
}

impl SurfaceConfig {
    pub fn new(k: usize) -> Self {
        let gram = surface_gram(k);
        let mut nef_seed = vec![0i64; 20];
        nef_seed[0] = 2;
        nef_seed[1] = 1;
        let mut base_curves = vec![unit(20, 1)];
        if k != 0 {
            base_curves.push(unit(20, S1_INDEX));
        }
        base_curves.extend((4..20).map(|i| unit(20, i)));
        let embedding = borcherds::embedding_rows(k);
        // pr_S(w0): solve x·G_S = w0·G_L·Eᵀ
        let t = arith::vec_mat(
            &borcherds::w0(),
            &arith::mat_mul(&borcherds::l26_gram(), &arith::transpose(&embedding)),
        );
        let x = arith::q_solve_left(&arith::to_qmat(&gram), &arith::to_qvec(&t)).expect("nondegenerate");
        let factor = if k == 2 { 1 } else { 2 };
        let ample: ZVec = x
            .iter()
            .map(|c| {
                let y = c * arith::q(factor);
                assert!(y.is_integer(), "projection of w0 has the expected denominator");
                arith::big_to_i64(&y.to_integer())
            })
            .collect();
        let torelli = TorelliData::new(k, &gram, [S1_INDEX, S1_INDEX + 1]);
        Self {
            k,
            gram,
            nef_seed,
            base_curves,
            ample,
            embedding,
            torelli,
        }
    }

    pub fn lattice(&self) -> IntegerLattice {
        IntegerLattice::new(self.gram.clone()).expect("valid Gram matrix")
    }

    pub fn torelli(&self) -> &TorelliData {
        &self.torelli
    }

    pub fn pairing(&self, u: &[i64], v: &[i64]) -> i64 {
        arith::bilinear(&self.gram, u, v)
    }
}

// ---------------------------------------------------------------------------
// involutions

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InvolutionType {
    Symplectic,
    Enriques,
    Rational,
}

impl InvolutionType {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Symplectic => "symplectic",
            Self::Enriques => "Enriques",
            Self::Rational => "rational",
        }
    }
}

/// Bases of the `(+1)`- and `(−1)`-eigenlattices of an involution.
pub fn eigenlattices(m: &ZMat) -> (ZMat, ZMat) {
    let n = m.len();
    let id = arith::identity(n);
    let minus: ZMat = (0..n).map(|i| (0..n).map(|j| m[i][j] - id[i][j]).collect()).collect();
    let plus: ZMat = (0..n).map(|i| (0..n).map(|j| m[i][j] + id[i][j]).collect()).collect();
    (arith::left_kernel(&minus), arith::left_kernel(&plus))
}

/// Whether the fixed lattice scaled by 1/2 is even unimodular hyperbolic of rank 10 and
/// the anti-fixed lattice has no roots: the lattice condition for a fixed-point-free
/// involution.
pub fn enriques_lattice_condition(gram: &ZMat, m: &ZMat) -> bool {
    let (plus, minus) = eigenlattices(m);
    if plus.len() != 10 {
        return false;
    }
    let gp = arith::gram_of(gram, &plus);
    if gp.iter().flatten().any(|x| x % 2 != 0) {
        return false;
    }
    let half: ZMat = gp.iter().map(|r| r.iter().map(|x| x / 2).collect()).collect();
    let Ok(h) = IntegerLattice::new(half) else {
        return false;
    };
    if !(h.is_even() && h.det().abs().is_one() && h.is_hyperbolic()) {
        return false;
    }
    let Ok(neg) = IntegerLattice::new(arith::gram_of(gram, &minus)) else {
        return false;
    };
    neg.is_negative_definite() && enumeration::short_vectors_with(&neg, -2, true).is_ok_and(|v| v.is_empty())
}

/// Symplectic, Enriques (fixed-point free) or rational (non-symplectic with fixed curves).
pub fn classify_involution(cfg: &SurfaceConfig, m: &ZMat) -> Result<InvolutionType, K3Error> {
    let n = cfg.gram.len();
    if m.len() != n || arith::mat_mul(m, m) != arith::identity(n) || *m == arith::identity(n) {
        return Err(K3Error::NotInvolution);
    }
    if !lattice_core::is_isometry(&cfg.gram, m) {
        return Err(K3Error::NotIntegral);
    }
    if cfg.torelli().symplectic_level(m)? == 1 {
        return Ok(InvolutionType::Symplectic);
    }
    if enriques_lattice_condition(&cfg.gram, m) {
        Ok(InvolutionType::Enriques)
    } else {
        Ok(InvolutionType::Rational)
    }
}

// ---------------------------------------------------------------------------
// nef and ample classes

fn check_positive(cfg: &SurfaceConfig, v: &[i64]) -> Result<(), K3Error> {
    if v.len() != cfg.gram.len() || cfg.pairing(v, v) <= 0 {
        return Err(K3Error::NotPositive);
    }
    Ok(())
}

/// Nef test for a class of positive norm: it lies on the positive side of the nef seed, of
/// every base curve, and no root separates it from the nef seed.
pub fn is_nef(cfg: &SurfaceConfig, v: &[i64]) -> Result<bool, K3Error> {
    check_positive(cfg, v)?;
    if cfg.pairing(v, &cfg.nef_seed) <= 0 {
        return Ok(false);
    }
    if cfg.base_curves.iter().any(|b| cfg.pairing(v, b) < 0) {
        return Ok(false);
    }
    let sep = enumeration::separating_roots(
        &cfg.lattice(),
        &RatVec::integral(cfg.nef_seed.clone()),
        &RatVec::integral(v.to_vec()),
        -2,
    )?;
    Ok(sep.is_empty())
}

/// Nef and orthogonal to no root.
pub fn is_ample(cfg: &SurfaceConfig, v: &[i64]) -> Result<bool, K3Error> {
    if !is_nef(cfg, v)? {
        return Ok(false);
    }
    let roots = enumeration::vectors_with_pairing(&cfg.lattice(), &RatVec::integral(v.to_vec()), 0, -2)?;
    Ok(roots.is_empty())
}

// ---------------------------------------------------------------------------
// smooth rational curves

/// Classes of smooth rational curves of degree `0..=d_max` with respect to the nef class `h`
/// (entry `d` holds the curves `Γ` with `⟨h,Γ⟩ = d`), using the surface's ample class.
pub fn rational_curve_classes(cfg: &SurfaceConfig, h: &[i64], d_max: u32) -> Result<Vec<Vec<ZVec>>, K3Error> {
    if !is_nef(cfg, h)? {
        return Err(K3Error::NotNef);
    }
    curve_filtration(cfg, h, &cfg.ample, d_max)
}

/// As [`rational_curve_classes`] with another ample reference class.
pub fn rational_curve_classes_with_ample(
    cfg: &SurfaceConfig,
    h: &[i64],
    ample: &[i64],
    d_max: u32,
) -> Result<Vec<Vec<ZVec>>, K3Error> {
    if !is_nef(cfg, h)? {
        return Err(K3Error::NotNef);
    }
    if !is_ample(cfg, ample)? {
        return Err(K3Error::NotNef);
    }
    curve_filtration(cfg, h, ample, d_max)
}

/// The inductive filtration: a root `v` of degree `d` on the positive side of `ample` is a
/// curve class unless it pairs negatively with an already accepted curve of smaller degree
/// (for `d = 0`: of smaller `ample`-degree).
fn curve_filtration(cfg: &SurfaceConfig, h: &[i64], ample: &[i64], d_max: u32) -> Result<Vec<Vec<ZVec>>, K3Error> {
    let l = cfg.lattice();
    let hv = RatVec::integral(h.to_vec());
    let ag = arith::vec_mat(ample, &cfg.gram);
    let mut accepted: Vec<ZVec> = Vec::new();
    let mut out = Vec::new();
    for d in 0..=i64::from(d_max) {
        let mut vd: Vec<(i64, ZVec)> = enumeration::vectors_with_pairing(&l, &hv, d, -2)?
            .into_iter()
            .filter_map(|v| {
                let alpha = arith::dot(&ag, &v);
                (alpha > 0).then_some((alpha, v))
            })
            .collect();
        vd.sort();
        let accepted_g: Vec<ZVec> = accepted.iter().map(|g| arith::vec_mat(g, &cfg.gram)).collect();
        let mut cd: Vec<ZVec> = Vec::new();
        if d == 0 {
            let mut start = 0;
            while start < vd.len() {
                let alpha = vd[start].0;
                let end = start + vd[start..].iter().take_while(|(a, _)| *a == alpha).count();
                let earlier: Vec<ZVec> = cd.iter().map(|g| arith::vec_mat(g, &cfg.gram)).collect();
                let stratum: Vec<ZVec> = vd[start..end]
                    .iter()
                    .filter(|(_, v)| earlier.iter().all(|g| arith::dot(g, v) >= 0))
                    .map(|(_, v)| v.clone())
                    .collect();
                cd.extend(stratum);
                start = end;
            }
        } else {
            cd = vd
                .into_iter()
                .filter(|(_, v)| accepted_g.iter().all(|g| arith::dot(g, v) >= 0))
                .map(|(_, v)| v)
                .collect();
        }
        cd.sort();
        accepted.extend(cd.iter().cloned());
        out.push(cd);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// ADE types

/// Kinds of indecomposable root systems, in display order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AdeKind {
    E,
    D,
    A,
}

impl AdeKind {
    fn letter(self) -> char {
        match self {
            Self::A => 'A',
            Self::D => 'D',
            Self::E => 'E',
        }
    }
}

/// An indecomposable component of a root configuration with its vertices listed in the
/// standard labelling: `a₁…a_l` along the path; `d₁, d₂` the two short leaves, `d₃` the
/// branch vertex, then the long arm; `e₁` the short arm, `e₂, e₃` the arm of length two
/// (`e₃` next to the branch vertex), `e₄` the branch vertex, then the long arm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootComponent {
    pub kind: AdeKind,
    pub rank: usize,
    /// Indices into the root list, in label order.
    pub labeled: Vec<usize>,
}

impl RootComponent {
    /// The permutation of this component induced by a double-plane involution, as pairs
    /// `(root, image)` of indices into the root list.
    pub fn double_plane_action(&self) -> Vec<(usize, usize)> {
        let n = self.labeled.len();
        let mut image: Vec<usize> = (0..n).collect();
        match self.kind {
            AdeKind::A => image.reverse(),
            AdeKind::D if n % 2 == 1 => image.swap(0, 1),
            AdeKind::E if n == 6 => {
                image.swap(1, 5);
                image.swap(2, 4);
            }
            _ => {}
        }
        (0..n).map(|i| (self.labeled[i], self.labeled[image[i]])).collect()
    }
}

/// A multiset of ADE components, kept in display order (`E`, then `D`, then `A`, each by
/// descending rank).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AdeType(Vec<(AdeKind, usize)>);

impl AdeType {
    pub fn new(mut parts: Vec<(AdeKind, usize)>) -> Self {
        parts.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        Self(parts)
    }

    pub fn components(&self) -> &[(AdeKind, usize)] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.iter().map(|c| c.1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses labels such as `D4+2A5+A3`; `none` is the empty configuration.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s == "none" {
            return Some(Self::default());
        }
        let mut parts = Vec::new();
        for term in s.split('+') {
            let term = term.trim();
            let pos = term.find(|c: char| c.is_ascii_alphabetic())?;
            let mult: usize = if pos == 0 { 1 } else { term[..pos].parse().ok()? };
            let kind = match &term[pos..pos + 1] {
                "A" => AdeKind::A,
                "D" => AdeKind::D,
                "E" => AdeKind::E,
                _ => return None,
            };
            let rank: usize = term[pos + 1..].parse().ok()?;
            let valid = match kind {
                AdeKind::A => rank >= 1,
                AdeKind::D => rank >= 4,
                AdeKind::E => (6..=8).contains(&rank),
            };
            if !valid || mult == 0 {
                return None;
            }
            parts.extend(core::iter::repeat_n((kind, rank), mult));
        }
        Some(Self::new(parts))
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "none");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let c = self.0[i];
            let mult = self.0[i..].iter().take_while(|x| **x == c).count();
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if mult > 1 {
                write!(f, "{mult}")?;
            }
            write!(f, "{}{}", c.0.letter(), c.1)?;
            i += mult;
        }
        Ok(())
    }
}

/// Splits a set of roots with pairwise non-negative pairings into indecomposable root
/// systems and labels each one; fails unless every component is of type A, D or E.
pub fn root_components(gram: &ZMat, roots: &[ZVec]) -> Result<Vec<RootComponent>, K3Error> {
    let n = roots.len();
    let rg: Vec<ZVec> = roots.iter().map(|r| arith::vec_mat(r, gram)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        if arith::dot(&rg[i], &roots[i]) != -2 {
            return Err(K3Error::NotAde);
        }
        for j in i + 1..n {
            match arith::dot(&rg[i], &roots[j]) {
                0 => {}
                1 => {
                    adj[i].push(j);
                    adj[j].push(i);
                }
                _ => return Err(K3Error::NotAde),
            }
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut head = 0;
        while head < comp.len() {
            for &j in &adj[comp[head]] {
                if !seen[j] {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            head += 1;
        }
        comp.sort();
        out.push(label_component(&adj, &comp)?);
    }
    Ok(out)
}

/// The vertices along an arm leaving `from` through `first`, ending at a leaf.
fn walk_arm(adj: &[Vec<usize>], from: usize, first: usize) -> Vec<usize> {
    let mut arm = vec![first];
    let (mut prev, mut cur) = (from, first);
    while let Some(&next) = adj[cur].iter().find(|&&x| x != prev) {
        arm.push(next);
        prev = cur;
        cur = next;
    }
    arm
}

fn label_component(adj: &[Vec<usize>], comp: &[usize]) -> Result<RootComponent, K3Error> {
    let edges: usize = comp.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
    if edges + 1 != comp.len() || comp.iter().any(|&v| adj[v].len() > 3) {
        return Err(K3Error::NotAde);
    }
    let branches: Vec<usize> = comp.iter().copied().filter(|&v| adj[v].len() == 3).collect();
    match branches.as_slice() {
        [] => {
            let start = comp
                .iter()
                .copied()
                .find(|&v| adj[v].len() <= 1)
                .expect("a path has an end");
            let mut labeled = vec![start];
            if let Some(&first) = adj[start].first() {
                labeled.extend(walk_arm(adj, start, first));
            }
            Ok(RootComponent {
                kind: AdeKind::A,
                rank: labeled.len(),
                labeled,
            })
        }
        [c] => {
            let mut arms: Vec<Vec<usize>> = adj[*c].iter().map(|&x| walk_arm(adj, *c, x)).collect();
            arms.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            let lens = [arms[0].len(), arms[1].len(), arms[2].len()];
            let rank = comp.len();
            let (kind, labeled) = match lens {
                [1, 1, _] => {
                    let mut l = vec![arms[0][0], arms[1][0], *c];
                    l.extend(arms[2].iter().copied());
                    (AdeKind::D, l)
                }
                [1, 2, 2..=4] => {
                    let mut l = vec![arms[0][0], arms[1][1], arms[1][0], *c];
                    l.extend(arms[2].iter().copied());
                    (AdeKind::E, l)
                }
                _ => return Err(K3Error::NotAde),
            };
            Ok(RootComponent { kind, rank, labeled })
        }
        _ => Err(K3Error::NotAde),
    }
}

/// The ADE type of a configuration of roots (see [`root_components`]).
pub fn ade_type(gram: &ZMat, roots: &[ZVec]) -> Result<AdeType, K3Error> {
    let comps = root_components(gram, roots)?;
    Ok(AdeType::new(comps.iter().map(|c| (c.kind, c.rank)).collect()))
}

// ---------------------------------------------------------------------------
// polarizations and double-plane involutions

/// A nef class `h` of positive norm is a polarization iff no isotropic `f` has `⟨f,h⟩ = 1`.
pub fn is_polarization(cfg: &SurfaceConfig, h: &[i64]) -> Result<bool, K3Error> {
    if !is_nef(cfg, h)? {
        return Err(K3Error::NotNef);
    }
    let f = enumeration::vectors_with_pairing(&cfg.lattice(), &RatVec::integral(h.to_vec()), 1, 0)?;
    Ok(f.is_empty())
}

/// A polarization of degree 4 is hyperelliptic iff some isotropic `v` has `⟨h,v⟩ = 2`.
pub fn is_hyperelliptic_deg4(cfg: &SurfaceConfig, h: &[i64]) -> Result<bool, K3Error> {
    check_positive(cfg, h)?;
    if cfg.pairing(h, h) != 4 {
        return Err(K3Error::WrongDegree);
    }
    if !is_polarization(cfg, h)? {
        return Err(K3Error::NotPolarization);
    }
    let e = enumeration::vectors_with_pairing(&cfg.lattice(), &RatVec::integral(h.to_vec()), 2, 0)?;
    Ok(!e.is_empty())
}

fn check_degree_two(cfg: &SurfaceConfig, h: &[i64]) -> Result<(), K3Error> {
    check_positive(cfg, h)?;
    if cfg.pairing(h, h) != 2 {
        return Err(K3Error::WrongDegree);
    }
    if !is_polarization(cfg, h)? {
        return Err(K3Error::NotPolarization);
    }
    Ok(())
}

/// The matrix of the double-plane involution of a polarization of degree 2.
pub fn double_plane_involution(cfg: &SurfaceConfig, h: &[i64]) -> Result<ZMat, K3Error> {
    check_degree_two(cfg, h)?;
    let c0 = curve_filtration(cfg, h, &cfg.ample, 0)?.remove(0);
    involution_from_contracted(cfg, h, &c0)
}

/// The involution fixing `h` that acts on the contracted curves `c0` by the diagram rules
/// and as `−1` on the orthogonal complement of the invariant part.
fn involution_from_contracted(cfg: &SurfaceConfig, h: &[i64], c0: &[ZVec]) -> Result<ZMat, K3Error> {
    let n = cfg.gram.len();
    let mut plus_rows: ZMat = vec![h.to_vec()];
    for comp in root_components(&cfg.gram, c0)? {
        for (r, img) in comp.double_plane_action() {
            plus_rows.push(arith::add_vec(&c0[r], &c0[img]));
        }
    }
    let plus = arith::hnf_rows(&plus_rows);
    let minus = arith::left_kernel(&arith::mat_mul(&cfg.gram, &arith::transpose(&plus)));
    if plus.len() + minus.len() != n {
        return Err(K3Error::NotIntegral);
    }
    let basis: ZMat = plus.iter().chain(&minus).cloned().collect();
    let bq = arith::to_qmat(&basis);
    let binv = arith::q_inverse(&bq).ok_or(K3Error::NotIntegral)?;
    let mut db = bq;
    for row in db.iter_mut().skip(plus.len()) {
        for x in row.iter_mut() {
            *x = -x.clone();
        }
    }
    let m = arith::q_mat_mul(&binv, &db);
    let mut out = arith::zeros(n, n);
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_integer() {
                return Err(K3Error::NotIntegral);
            }
            out[i][j] = arith::big_to_i64(&x.to_integer());
        }
    }
    if !lattice_core::is_isometry(&cfg.gram, &out) || arith::mat_mul(&out, &out) != arith::identity(n) {
        return Err(K3Error::NotIntegral);
    }
    Ok(out)
}

/// Searches degree-2 polarizations `h` fixed by `iota` in order of `⟨h, a⟩ = 1, 2, …, d_max`
/// (lexicographic within a degree) and returns the first with `ι_h = iota`.
pub fn find_polarization_for(cfg: &SurfaceConfig, iota: &ZMat, d_max: u32) -> Result<Option<ZVec>, K3Error> {
    let n = cfg.gram.len();
    if iota.len() != n || arith::mat_mul(iota, iota) != arith::identity(n) {
        return Err(K3Error::NotInvolution);
    }
    let (plus, _) = eigenlattices(iota);
    if plus.is_empty() {
        return Ok(None);
    }
    let gp = arith::gram_of(&cfg.gram, &plus);
    // ⟨x·P, a⟩ = ⟨x, c⟩ in the fixed lattice
    let target = arith::vec_mat(&cfg.ample, &arith::mat_mul(&cfg.gram, &arith::transpose(&plus)));
    let Some(c) = arith::q_solve_left(&arith::to_qmat(&gp), &arith::to_qvec(&target)) else {
        return Ok(None);
    };
    let Ok(fe) = enumeration::FiberEnumerator::new(&gp, &[c]) else {
        return Ok(None);
    };
    let zero = vec![arith::q(0); plus.len()];
    for d in 1..=i64::from(d_max) {
        let mut hs: Vec<ZVec> = fe
            .solve(&zero, &[arith::q(d)], &arith::q(2))
            .iter()
            .map(|x| arith::vec_mat(x, &plus))
            .collect();
        hs.sort();
        for h in hs {
            if !is_nef(cfg, &h)? || !is_polarization(cfg, &h)? {
                continue;
            }
            if double_plane_involution(cfg, &h)? == *iota {
                return Ok(Some(h));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// line configurations

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineConfiguration {
    pub h: ZVec,
    pub degree: i64,
    /// Curves contracted by the polarization.
    pub contracted: Vec<ZVec>,
    /// Curves of degree one: the lines.
    pub lines: Vec<ZVec>,
    pub ade: AdeType,
    /// Indecomposable components of the contracted curves (indices into `contracted`).
    pub components: Vec<RootComponent>,
    /// Pairings on `contracted ++ lines`.
    pub pairings: ZMat,
    /// Orbits of the lines (indices into `lines`) under the supplied group elements.
    pub line_orbits: Vec<Vec<usize>>,
    /// For degree 2: orbits of length two under the double-plane involution.
    pub splitting_lines: Option<usize>,
    /// For degree 2: lines fixed by the double-plane involution (line components of the
    /// branch curve).
    pub branch_lines: Option<usize>,
    /// For each line, the components (indices into `components`) it meets.
    pub incidence: Vec<Vec<usize>>,
    /// Whether the contracted curves and lines span the lattice over `Q`.
    pub spans_full: bool,
}

/// Orbits of `items` under the right action of `mats`; each image must lie in `items`.
fn orbits_under(items: &[ZVec], mats: &[ZMat]) -> Result<Vec<Vec<usize>>, K3Error> {
    let mut seen = vec![false; items.len()];
    let mut out = Vec::new();
    for s in 0..items.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut orbit = vec![s];
        let mut head = 0;
        while head < orbit.len() {
            for m in mats {
                let img = arith::vec_mat(&items[orbit[head]], m);
                let j = items.binary_search(&img).map_err(|_| K3Error::NotInvariant)?;
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(j);
                }
            }
            head += 1;
        }
        orbit.sort();
        out.push(orbit);
    }
    Ok(out)
}

/// Contracted curves, lines, their pairings and ADE type, line orbits under `group`, and for
/// degree 2 the splitting lines of the branch curve.
pub fn line_configuration(cfg: &SurfaceConfig, h: &[i64], group: &[ZMat]) -> Result<LineConfiguration, K3Error> {
    if !is_polarization(cfg, h)? {
        return Err(K3Error::NotPolarization);
    }
    let degree = cfg.pairing(h, h);
    let mut cd = curve_filtration(cfg, h, &cfg.ample, 1)?;
    let lines = cd.pop().expect("two degrees");
    let contracted = cd.pop().expect("two degrees");
    let components = root_components(&cfg.gram, &contracted)?;
    let ade = AdeType::new(components.iter().map(|c| (c.kind, c.rank)).collect());
    let all: ZMat = contracted.iter().chain(&lines).cloned().collect();
    let pairings: ZMat = all
        .iter()
        .map(|u| all.iter().map(|v| cfg.pairing(u, v)).collect())
        .collect();
    let line_orbits = orbits_under(&lines, group)?;
    let (splitting_lines, branch_lines) = if degree == 2 {
        let iota = involution_from_contracted(cfg, h, &contracted)?;
        let orbits = orbits_under(&lines, &[iota])?;
        (
            Some(orbits.iter().filter(|o| o.len() == 2).count()),
            Some(orbits.iter().filter(|o| o.len() == 1).count()),
        )
    } else {
        (None, None)
    };
    let incidence = lines
        .iter()
        .map(|l| {
            components
                .iter()
                .enumerate()
                .filter(|(_, c)| c.labeled.iter().any(|&r| cfg.pairing(l, &contracted[r]) != 0))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let spans_full = arith::z_rank(&all) == cfg.gram.len();
    Ok(LineConfiguration {
        h: h.to_vec(),
        degree,
        contracted,
        lines,
        ade,
        components,
        pairings,
        line_orbits,
        splitting_lines,
        branch_lines,
        incidence,
        spans_full,
    })
}

/// An intersection pattern of lines and nodes under a cyclic group `⟨ρ⟩`, written with
/// orbits listed as `[s, s·ρ, s·ρ², …]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicPattern {
    /// Sizes of the node orbits, in labelling order.
    pub node_orbit_sizes: Vec<usize>,
    /// For each line orbit `i`: the nodes met by its first line, as (node orbit, position).
    pub line_nodes: Vec<Vec<(usize, usize)>>,
    /// For each pair `i ≤ j`: the first row `(⟨ℓᵢ, ℓⱼ⟩, ⟨ℓᵢ, ℓⱼ·ρ⟩, …)` of the cyclic pairing
    /// matrix, indexed as `rows[i][j - i]`.
    pub rows: Vec<Vec<ZVec>>,
}

/// A labelling realizing a [`CyclicPattern`]: the first element of every node and line orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicLabelling {
    pub node_starts: Vec<ZVec>,
    pub line_starts: Vec<ZVec>,
}

fn cyclic_orbit(v: &[i64], rho: &ZMat) -> Vec<ZVec> {
    let mut out = vec![v.to_vec()];
    loop {
        let next = arith::vec_mat(out.last().expect("nonempty"), rho);
        if next == v {
            return out;
        }
        out.push(next);
    }
}

/// Searches for a labelling of the nodes (contracted curves, all of type `A1`) and lines of
/// a configuration by orbits of `ρ` reproducing `pattern` exactly; lines must fall into
/// orbits of equal length.
pub fn match_cyclic_pattern(
    cfg: &SurfaceConfig,
    lc: &LineConfiguration,
    rho: &ZMat,
    pattern: &CyclicPattern,
) -> Option<CyclicLabelling> {
    if lc.components.iter().any(|c| c.kind != AdeKind::A || c.rank != 1) {
        return None;
    }
    // node orbits, grouped by size
    let mut node_orbits: Vec<Vec<ZVec>> = Vec::new();
    for c in &lc.contracted {
        if !node_orbits.iter().any(|o| o.contains(c)) {
            node_orbits.push(cyclic_orbit(c, rho));
        }
    }
    let mut line_orbits: Vec<Vec<ZVec>> = Vec::new();
    for l in &lc.lines {
        if !line_orbits.iter().any(|o| o.contains(l)) {
            line_orbits.push(cyclic_orbit(l, rho));
        }
    }
    if line_orbits.len() != pattern.line_nodes.len() {
        return None;
    }
    let mut sizes: Vec<usize> = node_orbits.iter().map(Vec::len).collect();
    let mut wanted = pattern.node_orbit_sizes.clone();
    sizes.sort();
    wanted.sort();
    if sizes != wanted {
        return None;
    }
    // every assignment of node orbits (and starting points) to the labelled orbits
    let mut node_choices: Vec<Vec<Vec<ZVec>>> = vec![Vec::new()];
    for &size in &pattern.node_orbit_sizes {
        let mut next = Vec::new();
        for partial in &node_choices {
            for o in node_orbits.iter().filter(|o| o.len() == size) {
                if partial.iter().any(|p: &Vec<ZVec>| o.contains(&p[0])) {
                    continue;
                }
                for start in o {
                    let mut q = partial.clone();
                    q.push(cyclic_orbit(start, rho));
                    next.push(q);
                }
            }
        }
        node_choices = next;
    }
    for nodes in &node_choices {
        let mut chosen: Vec<Vec<ZVec>> = Vec::new();
        let mut used = vec![false; line_orbits.len()];
        if assign_lines(cfg, rho, pattern, nodes, &line_orbits, &mut used, &mut chosen) {
            return Some(CyclicLabelling {
                node_starts: nodes.iter().map(|o| o[0].clone()).collect(),
                line_starts: chosen.iter().map(|o| o[0].clone()).collect(),
            });
        }
    }
    None
}

fn assign_lines(
    cfg: &SurfaceConfig,
    rho: &ZMat,
    pattern: &CyclicPattern,
    nodes: &[Vec<ZVec>],
    line_orbits: &[Vec<ZVec>],
    used: &mut [bool],
    chosen: &mut Vec<Vec<ZVec>>,
) -> bool {
    let i = chosen.len();
    if i == pattern.line_nodes.len() {
        return true;
    }
    let first_row = |a: &[i64], orbit: &[ZVec]| -> ZVec { orbit.iter().map(|b| cfg.pairing(a, b)).collect() };
    for k in 0..line_orbits.len() {
        if used[k] {
            continue;
        }
        for start in &line_orbits[k] {
            let orbit = cyclic_orbit(start, rho);
            let met: BTreeSet<(usize, usize)> = nodes
                .iter()
                .enumerate()
                .flat_map(|(a, o)| o.iter().enumerate().map(move |(b, n)| (a, b, n)))
                .filter(|(_, _, n)| cfg.pairing(start, n) != 0)
                .map(|(a, b, _)| (a, b))
                .collect();
            if met != pattern.line_nodes[i].iter().copied().collect::<BTreeSet<_>>() {
                continue;
            }
            if first_row(start, &orbit) != pattern.rows[i][0] {
                continue;
            }
            if (0..i).any(|j| first_row(&chosen[j][0], &orbit) != pattern.rows[j][i - j]) {
                continue;
            }
            used[k] = true;
            chosen.push(orbit);
            if assign_lines(cfg, rho, pattern, nodes, line_orbits, used, chosen) {
                return true;
            }
            chosen.pop();
            used[k] = false;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// finite group fingerprints

/// The three groups containing the alternating group of degree 6 with index 2 and trivial
/// center that are told apart by their numbers of classes of elements of order 3 and 5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupName {
    /// Symmetric group of degree 6: two classes of order 3, one of order 5.
    S6,
    /// Mathieu group of degree 10: one class of each.
    M10,
    /// Projective general linear group over the field of 9 elements: one class of order 3,
    /// two of order 5.
    Pgl2F9,
}

impl GroupName {
    pub fn name(&self) -> &'static str {
        match self {
            Self::S6 => "S6",
            Self::M10 => "M10",
            Self::Pgl2F9 => "PGL2(F9)",
        }
    }

    fn from_counts(order3: usize, order5: usize) -> Option<Self> {
        match (order3, order5) {
            (2, 1) => Some(Self::S6),
            (1, 1) => Some(Self::M10),
            (1, 2) => Some(Self::Pgl2F9),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupFingerprint {
    pub order: usize,
    pub center_order: usize,
    /// `(element order, class size)` per conjugacy class, sorted.
    pub classes: Vec<(usize, usize)>,
    /// Name for groups of order 720 with trivial center in which the elements of order 3
    /// generate a subgroup of index 2.
    pub name: Option<GroupName>,
    /// The same test applied to the quotient by a center of order 2.
    pub central_quotient_name: Option<GroupName>,
}

pub fn group_fingerprint(group: &MatrixGroup) -> GroupFingerprint {
    let classes = group.conjugacy_classes();
    let mut class_data: Vec<(usize, usize)> = classes.iter().map(|c| (group.element_order(c[0]), c.len())).collect();
    class_data.sort();
    let center = group.center();
    let count = |o: usize| class_data.iter().filter(|c| c.0 == o).count();
    let name = if group.order() == 720 && center.len() == 1 {
        let threes: Vec<usize> = (0..group.order()).filter(|&x| group.element_order(x) == 3).collect();
        if group.subgroup_generated(&threes).len() == 360 {
            GroupName::from_counts(count(3), count(5))
        } else {
            None
        }
    } else {
        None
    };
    let central_quotient_name = if group.order() == 1440 && center.len() == 2 {
        quotient_class_counts(group, &classes, &center).and_then(|(c3, c5)| GroupName::from_counts(c3, c5))
    } else {
        None
    };
    GroupFingerprint {
        order: group.order(),
        center_order: center.len(),
        classes: class_data,
        name,
        central_quotient_name,
    }
}

/// Numbers of conjugacy classes of elements of order 3 and 5 in the quotient by a central
/// subgroup `{1, z}`, provided the images of order 3 generate a subgroup of index 2.
fn quotient_class_counts(group: &MatrixGroup, classes: &[Vec<usize>], center: &[usize]) -> Option<(usize, usize)> {
    let id = group.identity_index();
    let z = *center.iter().find(|&&c| c != id)?;
    let class_of: BTreeMap<usize, usize> = classes
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.iter().map(move |&x| (x, i)))
        .collect();
    // order of the image of x: least n with xⁿ ∈ {1, z}
    let image_order = |x: usize| -> usize {
        let mut p = x;
        let mut n = 1;
        while p != id && p != z {
            p = group.mul(p, x);
            n += 1;
        }
        n
    };
    let mut merged: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut threes = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        let j = class_of[&group.mul(c[0], z)];
        let key = (i.min(j), i.max(j));
        let o = image_order(c[0]);
        if o == 3 {
            threes.extend(c.iter().copied());
        }
        if o == 3 || o == 5 {
            merged.insert((o, key.0 * classes.len() + key.1));
        }
    }
    let mut gens = threes;
    gens.push(z);
    if group.subgroup_generated(&gens).len() != 720 {
        return None;
    }
    let c3 = merged.iter().filter(|m| m.0 == 3).count();
    let c5 = merged.iter().filter(|m| m.0 == 5).count();
    Some((c3, c5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn surface_config_invariants() {
        for k in 0..3 {
            let c = SurfaceConfig::new(k);
            assert_eq!(c.pairing(&c.nef_seed, &c.nef_seed), 2);
            for b in &c.base_curves {
                assert_eq!(c.pairing(b, b), -2);
                assert_eq!(c.pairing(b, &c.nef_seed), 0);
            }
            assert_eq!(arith::gcd_slice(&c.ample), 1);
        }
    }

    #[test]
    fn ample_vectors_match_the_published_coordinates() {
        let a0 = SurfaceConfig::new(0).ample;
        assert_eq!(&a0[..4], &[122, 60, -11, -17]);
        let a1 = SurfaceConfig::new(1).ample;
        assert_eq!(&a1[..4], &[122, 60, -29, -8]);
        let a2 = SurfaceConfig::new(2).ample;
        assert_eq!(&a2[..12], &[61, 30, -12, -5, -68, -46, -91, -135, -110, -84, -57, -29]);
    }

    fn simple_roots(n: usize) -> Vec<ZVec> {
        (0..n)
            .map(|i| {
                let mut e = vec![0i64; n];
                e[i] = 1;
                e
            })
            .collect()
    }

    #[test]
    fn ade_type_of_standard_root_bases() {
        use crate::lattice_core::{a_gram, d_gram, direct_sum, e_gram};
        let cases = [
            (direct_sum(&[e_gram(6), a_gram(11)]), "E6+A11"),
            (direct_sum(&[a_gram(15), a_gram(3)]), "A15+A3"),
            (direct_sum(&[a_gram(2), a_gram(2), d_gram(5), e_gram(8)]), "E8+D5+2A2"),
            (direct_sum(&[a_gram(1), a_gram(1), a_gram(1)]), "3A1"),
        ];
        for (gram, label) in cases {
            let t = ade_type(&gram, &simple_roots(gram.len())).unwrap();
            assert_eq!(t.to_string(), label);
            assert_eq!(AdeType::parse(label), Some(t.clone()));
            assert_eq!(t.rank(), gram.len());
        }
        assert_eq!(ade_type(&a_gram(1), &[]).unwrap().to_string(), "none");
    }

    #[test]
    fn invalid_ade_labels_are_rejected() {
        for s in ["E9", "A0", "D3", "0A2", "B2", "A", "2+A1"] {
            assert_eq!(AdeType::parse(s), None, "{s}");
        }
    }

    #[test]
    fn double_plane_action_reverses_a_chains_and_folds_e6() {
        use crate::lattice_core::{a_gram, e_gram};
        let a = &root_components(&a_gram(4), &simple_roots(4)).unwrap()[0];
        let perm: Vec<usize> = a.double_plane_action().iter().map(|&(_, j)| j).collect();
        let rev: Vec<usize> = a.labeled.iter().rev().copied().collect();
        assert_eq!(perm, rev);
        let e = &root_components(&e_gram(6), &simple_roots(6)).unwrap()[0];
        let moved = e.double_plane_action().iter().filter(|(i, j)| i != j).count();
        assert_eq!(moved, 4);
    }

    #[test]
    fn ample_classes_are_ample_and_their_negatives_are_not_nef() {
        for k in 0..3 {
            let c = SurfaceConfig::new(k);
            assert_eq!(is_ample(&c, &c.ample), Ok(true));
            assert_eq!(is_nef(&c, &c.nef_seed), Ok(true));
            assert_eq!(is_ample(&c, &c.nef_seed), Ok(false));
            assert_eq!(is_nef(&c, &arith::neg_vec(&c.ample)), Ok(false));
        }
    }

    #[test]
    fn identity_and_non_involutions_are_not_classified() {
        let c = SurfaceConfig::new(0);
        assert_eq!(
            classify_involution(&c, &arith::identity(20)),
            Err(K3Error::NotInvolution)
        );
        let mut m = arith::identity(20);
        m[0][1] = 1;
        assert_eq!(classify_involution(&c, &m), Err(K3Error::NotInvolution));
    }
}
