//! Finite matrix groups handled through a faithful permutation representation on a
//! finite invariant spanning set of vectors: closure, generating sets, element orders,
//! conjugacy classes and centers.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{self, ZMat, ZVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    /// The point set is not invariant under some matrix.
    NotInvariant,
    /// The point set does not span, so the action would not be faithful.
    NotFaithful,
    /// The supplied elements are not closed under products.
    NotClosed,
}

impl fmt::Display for GroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotInvariant => write!(f, "point set is not invariant"),
            Self::NotFaithful => write!(f, "point set does not span the ambient space"),
            Self::NotClosed => write!(f, "elements are not closed under multiplication"),
        }
    }
}

impl core::error::Error for GroupError {}

pub type Perm = Vec<u32>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    // first a, then b (right action)
    a.iter().map(|&i| b[i as usize]).collect()
}

fn invert(a: &Perm) -> Perm {
    let mut out = vec![0u32; a.len()];
    for (i, &j) in a.iter().enumerate() {
        out[j as usize] = i as u32;
    }
    out
}

fn perm_order(a: &Perm) -> usize {
    let mut seen = vec![false; a.len()];
    let mut order = 1usize;
    for s in 0..a.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0usize;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = a[i] as usize;
            len += 1;
        }
        order = num_integer::lcm(order, len);
    }
    order
}

/// A finite group of integer matrices acting on row vectors from the right.
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    points: Vec<ZVec>,
    point_index: BTreeMap<ZVec, u32>,
    /// Elements sorted by matrix.
    elements: Vec<ZMat>,
    perms: Vec<Perm>,
    perm_index: BTreeMap<Perm, usize>,
    generators: Vec<usize>,
}

impl MatrixGroup {
    /// The group generated by `gens`, acting on the invariant spanning set `points`
    /// (vectors acted on by `v ↦ v·g`).
    pub fn generate(gens: &[ZMat], points: &[ZVec], dim: usize) -> Result<Self, GroupError> {
        let pts: BTreeSet<ZVec> = points.iter().cloned().collect();
        let points: Vec<ZVec> = pts.into_iter().collect();
        if arith::z_rank(&points) < dim {
            return Err(GroupError::NotFaithful);
        }
        let point_index: BTreeMap<ZVec, u32> = points.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let to_perm = |g: &ZMat| -> Result<Perm, GroupError> {
            points
                .iter()
                .map(|p| {
                    point_index
                        .get(&arith::vec_mat(p, g))
                        .copied()
                        .ok_or(GroupError::NotInvariant)
                })
                .collect()
        };
        let gen_perms: Vec<Perm> = gens.iter().map(to_perm).collect::<Result<_, _>>()?;
        let id_perm: Perm = (0..points.len() as u32).collect();
        let mut perm_set: BTreeMap<Perm, ZMat> = BTreeMap::new();
        perm_set.insert(id_perm.clone(), arith::identity(dim));
        let mut queue = vec![id_perm];
        while let Some(p) = queue.pop() {
            let m = perm_set[&p].clone();
            for (gp, gm) in gen_perms.iter().zip(gens) {
                let q = compose(&p, gp);
                if !perm_set.contains_key(&q) {
                    perm_set.insert(q.clone(), arith::mat_mul(&m, gm));
                    queue.push(q);
                }
            }
        }
        let mut pairs: Vec<(ZMat, Perm)> = perm_set.into_iter().map(|(p, m)| (m, p)).collect();
        pairs.sort();
        let (elements, perms): (Vec<ZMat>, Vec<Perm>) = pairs.into_iter().unzip();
        let perm_index = perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let mut g = Self {
            points,
            point_index,
            elements,
            perms,
            perm_index,
            generators: Vec::new(),
        };
        g.generators = g.reduce_generators(gens);
        Ok(g)
    }

    /// The group consisting of exactly `elements` (verified closed).
    pub fn from_elements(elements: &[ZMat], points: &[ZVec], dim: usize) -> Result<Self, GroupError> {
        let g = Self::generate(elements, points, dim)?;
        if g.order() != elements.iter().collect::<BTreeSet<_>>().len() {
            return Err(GroupError::NotClosed);
        }
        Ok(g)
    }

    /// A generating set chosen greedily among `candidates` (then among all elements).
    fn reduce_generators(&self, candidates: &[ZMat]) -> Vec<usize> {
        let mut chosen: Vec<usize> = Vec::new();
        let mut sub: BTreeSet<usize> = BTreeSet::new();
        sub.insert(self.identity_index());
        let idx: Vec<usize> = candidates
            .iter()
            .filter_map(|m| self.index_of(m))
            .chain(0..self.order())
            .collect();
        for i in idx {
            if sub.len() == self.order() {
                break;
            }
            if sub.contains(&i) {
                continue;
            }
            chosen.push(i);
            sub = self.closure_indices(&chosen);
        }
        chosen.sort();
        chosen.dedup();
        chosen
    }

    fn closure_indices(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut set = BTreeSet::new();
        let id = self.identity_index();
        set.insert(id);
        let mut queue = vec![id];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push(y);
                }
            }
        }
        set
    }

    /// Indices of the subgroup generated by the given element indices.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        self.closure_indices(gens).into_iter().collect()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ZMat] {
        &self.elements
    }

    pub fn points(&self) -> &[ZVec] {
        &self.points
    }

    /// Indices of a small generating set.
    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn generators(&self) -> Vec<ZMat> {
        self.generators.iter().map(|&i| self.elements[i].clone()).collect()
    }

    pub fn identity_index(&self) -> usize {
        let id: Perm = (0..self.points.len() as u32).collect();
        self.perm_index[&id]
    }

    pub fn index_of(&self, m: &ZMat) -> Option<usize> {
        self.elements.binary_search(m).ok()
    }

    pub fn contains(&self, m: &ZMat) -> bool {
        self.index_of(m).is_some()
    }

    /// Index of the product `x·y` (first `x`, then `y`).
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.perm_index[&compose(&self.perms[x], &self.perms[y])]
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.perm_index[&invert(&self.perms[x])]
    }

    pub fn element_order(&self, x: usize) -> usize {
        perm_order(&self.perms[x])
    }

    /// Permutation of the point set induced by an element.
    pub fn point_image(&self, x: usize, p: usize) -> usize {
        self.perms[x][p] as usize
    }

    pub fn point_index(&self, v: &ZVec) -> Option<usize> {
        self.point_index.get(v).map(|&i| i as usize)
    }

    /// Conjugacy classes as sorted index lists, ordered by (element order, size, minimum).
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let gens: Vec<(usize, usize)> = self.generators.iter().map(|&g| (g, self.inverse(g))).collect();
        let mut assigned = vec![false; self.order()];
        let mut classes = Vec::new();
        for x in 0..self.order() {
            if assigned[x] {
                continue;
            }
            assigned[x] = true;
            let mut class = vec![x];
            let mut head = 0;
            while head < class.len() {
                let y = class[head];
                for &(g, gi) in &gens {
                    let z = self.mul(self.mul(gi, y), g);
                    if !assigned[z] {
                        assigned[z] = true;
                        class.push(z);
                    }
                }
                head += 1;
            }
            class.sort();
            classes.push(class);
        }
        classes.sort_by_key(|c| (self.element_order(c[0]), c.len(), c[0]));
        classes
    }

    /// Elements commuting with every generator.
    pub fn center(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&x| self.generators.iter().all(|&g| self.mul(x, g) == self.mul(g, x)))
            .collect()
    }

    /// Whether the listed indices form a subgroup.
    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        set.contains(&self.identity_index()) && set.iter().all(|&x| set.iter().all(|&y| set.contains(&self.mul(x, y))))
    }
}

/// A finite invariant spanning set for the group generated by `gens`: the union of the
/// smallest orbits of the standard basis vectors (and their negatives) that together span.
pub fn spanning_orbit_points(gens: &[ZMat], dim: usize) -> Vec<ZVec> {
    let mut orbits: Vec<Vec<ZVec>> = Vec::new();
    for i in 0..dim {
        let mut e = vec![0i64; dim];
        e[i] = 1;
        let mut seen: BTreeSet<ZVec> = BTreeSet::new();
        seen.insert(e.clone());
        seen.insert(arith::neg_vec(&e));
        let mut queue: Vec<ZVec> = seen.iter().cloned().collect();
        while let Some(v) = queue.pop() {
            for g in gens {
                let w = arith::vec_mat(&v, g);
                if seen.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
        orbits.push(seen.into_iter().collect());
    }
    orbits.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut pts: Vec<ZVec> = Vec::new();
    for o in orbits {
        if arith::z_rank(&pts) == dim {
            break;
        }
        pts.extend(o);
    }
    pts
}
