//! Descent to the Enriques quotient by a fixed-point-free involution: the invariant lattice
//! with its halved form, the induced action of the centralizer, the restricted chamber with
//! its walls, and the certificate identifying the finite group acting on it.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{self, ZMat, ZVec};
use crate::borcherds::GenerationResult;
use crate::chambers::{self, Chamber, ChamberError, Wall};
use crate::groups::{GroupError, MatrixGroup};
use crate::k3::{self, GroupFingerprint, GroupName, InvolutionType, K3Error, SurfaceConfig};
use crate::lattice_core::{IntegerLattice, LatticeError, RatVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnriquesError {
    NotInvolution,
    /// The involution fails the fixed-point-free lattice criterion.
    NotEnriques,
    /// The supplied basis does not span the invariant lattice.
    WrongBasis,
    /// An isometry does not commute with the involution.
    NotCentralizing,
    /// The kernel of the descent map is not generated by the involution.
    KernelMismatch,
    /// The descended group is not the expected extension.
    Certificate(&'static str),
    Lattice(LatticeError),
    Chamber(ChamberError),
    Group(GroupError),
    K3(K3Error),
}

impl fmt::Display for EnriquesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotInvolution => write!(f, "matrix is not an involution"),
            Self::NotEnriques => write!(f, "involution is not fixed-point free"),
            Self::WrongBasis => write!(f, "basis does not span the invariant lattice"),
            Self::NotCentralizing => write!(f, "isometry does not commute with the involution"),
            Self::KernelMismatch => write!(f, "kernel of the descent map is not generated by the involution"),
            Self::Certificate(what) => write!(f, "certificate failed: {what}"),
            Self::Lattice(e) => write!(f, "lattice error: {e}"),
            Self::Chamber(e) => write!(f, "chamber error: {e}"),
            Self::Group(e) => write!(f, "group error: {e}"),
            Self::K3(e) => write!(f, "surface error: {e}"),
        }
    }
}

impl core::error::Error for EnriquesError {}

impl From<LatticeError> for EnriquesError {
    fn from(e: LatticeError) -> Self {
        Self::Lattice(e)
    }
}
impl From<ChamberError> for EnriquesError {
    fn from(e: ChamberError) -> Self {
        Self::Chamber(e)
    }
}
impl From<GroupError> for EnriquesError {
    fn from(e: GroupError) -> Self {
        Self::Group(e)
    }
}
impl From<K3Error> for EnriquesError {
    fn from(e: K3Error) -> Self {
        Self::K3(e)
    }
}

/// Integer bases of the `(+1)`- and `(−1)`-eigenlattices (both primitive).
pub fn invariant_split(m: &ZMat) -> Result<(ZMat, ZMat), EnriquesError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) || arith::mat_mul(m, m) != arith::identity(n) {
        return Err(EnriquesError::NotInvolution);
    }
    Ok(k3::eigenlattices(m))
}

/// The invariant lattice of a fixed-point-free involution with the halved form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnriquesLattice {
    pub involution: ZMat,
    /// Basis vectors in the coordinates of the ambient lattice.
    pub basis: ZMat,
    /// `⟨fᵢ, fⱼ⟩ / 2`.
    pub gram: ZMat,
    ambient_gram: ZMat,
}

impl EnriquesLattice {
    /// Builds the lattice for `involution` on the surface, in the given basis (checked to
    /// span the invariant lattice) or else in the Hermite basis of the invariant lattice.
    pub fn new(cfg: &SurfaceConfig, involution: &ZMat, basis: Option<ZMat>) -> Result<Self, EnriquesError> {
        let (plus, _) = invariant_split(involution)?;
        if k3::classify_involution(cfg, involution)? != InvolutionType::Enriques {
            return Err(EnriquesError::NotEnriques);
        }
        let basis = match basis {
            Some(b) => {
                if b.len() != plus.len() || arith::hnf_rows(&b) != arith::hnf_rows(&plus) {
                    return Err(EnriquesError::WrongBasis);
                }
                b
            }
            None => arith::hnf_rows(&plus),
        };
        let g2 = arith::gram_of(&cfg.gram, &basis);
        let gram: ZMat = g2.iter().map(|r| r.iter().map(|x| x / 2).collect()).collect();
        Ok(Self {
            involution: involution.clone(),
            basis,
            gram,
            ambient_gram: cfg.gram.clone(),
        })
    }

    pub fn lattice(&self) -> IntegerLattice {
        IntegerLattice::new(self.gram.clone()).expect("valid Gram matrix")
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates in the basis of a vector of the ambient lattice lying in the invariant
    /// lattice.
    pub fn coordinates(&self, v: &[i64]) -> Option<ZVec> {
        arith::solve_left_integer(&self.basis, v)
    }

    /// `(⟨v, fᵢ⟩)ᵢ` for `v` given by ambient dual coordinates `t`: the dual coordinates of
    /// `2·pr(v)` with respect to the halved form.
    pub fn project_dual(&self, t: &[i64]) -> ZVec {
        self.basis.iter().map(|f| arith::dot(t, f)).collect()
    }

    /// The matrix of an isometry commuting with the involution on the basis: `F·g = M·F`.
    pub fn descend(&self, g: &ZMat) -> Result<ZMat, EnriquesError> {
        if arith::mat_mul(g, &self.involution) != arith::mat_mul(&self.involution, g) {
            return Err(EnriquesError::NotCentralizing);
        }
        let m = self
            .basis
            .iter()
            .map(|f| {
                self.coordinates(&arith::vec_mat(f, g))
                    .ok_or(EnriquesError::NotCentralizing)
            })
            .collect::<Result<ZMat, _>>()?;
        debug_assert_eq!(arith::gram_of(&self.ambient_gram, &self.basis), {
            let g2 = arith::gram_of(&self.gram, &m);
            g2.iter()
                .map(|r| r.iter().map(|x| 2 * x).collect::<ZVec>())
                .collect::<ZMat>()
        });
        Ok(m)
    }
}

/// The descended images of a group of isometries commuting with the involution, together
/// with the indices of the elements acting trivially.
#[derive(Debug, Clone)]
pub struct Descent {
    /// Distinct images, sorted.
    pub images: Vec<ZMat>,
    /// Elements of the input acting trivially on the invariant lattice.
    pub kernel: Vec<ZMat>,
}

/// Descends every element of `elements` and checks that the kernel is `{1, ι}`.
pub fn centralizer_and_descent(lat: &EnriquesLattice, elements: &[ZMat]) -> Result<Descent, EnriquesError> {
    let n = lat.rank();
    let id = arith::identity(n);
    let mut images: BTreeSet<ZMat> = BTreeSet::new();
    let mut kernel = Vec::new();
    for g in elements {
        let m = lat.descend(g)?;
        if m == id {
            kernel.push(g.clone());
        }
        images.insert(m);
    }
    kernel.sort();
    let mut expected = alloc::vec![arith::identity(lat.involution.len()), lat.involution.clone()];
    expected.sort();
    if kernel != expected {
        return Err(EnriquesError::KernelMismatch);
    }
    Ok(Descent {
        images: images.into_iter().collect(),
        kernel,
    })
}

/// The chamber cut out on the invariant cone by the walls of the base chamber.
#[derive(Debug, Clone)]
pub struct EnriquesChamber {
    /// Interior point (the ample class) in basis coordinates.
    pub interior: ZVec,
    /// Distinct primitive projections of the base walls.
    pub defining: Vec<ZVec>,
    pub walls: Vec<Wall>,
    /// Orbits of wall vectors (dual coordinates) under the descended group, sorted by
    /// (size descending, minimum).
    pub orbits: Vec<Vec<ZVec>>,
    /// The same orbits with each wall given by the lattice vector `r` with wall `r^⊥`
    /// (the form is unimodular), each orbit sorted.
    pub orbit_vectors: Vec<Vec<ZVec>>,
}

/// Projects the walls of the base chamber, finds the walls of the restricted chamber by
/// linear programming, and decomposes them under the descended group.
pub fn enriques_chamber(
    lat: &EnriquesLattice,
    base: &GenerationResult,
    group: &[ZMat],
) -> Result<EnriquesChamber, EnriquesError> {
    let interior = lat
        .coordinates(&base.ample)
        .ok_or(EnriquesError::Certificate("ample class is not invariant"))?;
    let defining: BTreeSet<ZVec> = base
        .walls
        .iter()
        .map(|w| arith::primitive_part(&lat.project_dual(&w.dual)))
        .filter(|u| !arith::is_zero_vec(u))
        .collect();
    let defining: Vec<ZVec> = defining.into_iter().collect();
    let chamber = Chamber::new(lat.lattice(), defining.clone(), RatVec::integral(interior.clone()))?;
    let walls = chambers::extract_walls_symmetric(&chamber, group)?;
    let duals: Vec<ZMat> = group.iter().map(chambers::dual_action).collect();
    let wall_vecs: Vec<ZVec> = walls.iter().map(|w| w.dual.clone()).collect();
    let mut orbits = chambers::orbit_decompose(&wall_vecs, &duals)?;
    orbits.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let orbit_vectors = orbits
        .iter()
        .map(|o| {
            let mut vs = o
                .iter()
                .map(|u| {
                    arith::solve_left_integer(&lat.gram, u).ok_or(EnriquesError::Certificate("form is not unimodular"))
                })
                .collect::<Result<Vec<ZVec>, _>>()?;
            vs.sort();
            Ok(vs)
        })
        .collect::<Result<Vec<_>, EnriquesError>>()?;
    Ok(EnriquesChamber {
        interior,
        defining,
        walls,
        orbits,
        orbit_vectors,
    })
}

/// Checks that `g` maps the chamber onto the chamber adjacent across `wall`: the image of
/// the wall set contains `−wall` and the interior point moves to the other side.
pub fn crosses_wall(ch: &EnriquesChamber, g: &ZMat, wall: &[i64]) -> bool {
    let dual = chambers::dual_action(g);
    let images: BTreeSet<ZVec> = ch.walls.iter().map(|w| arith::vec_mat(&w.dual, &dual)).collect();
    let moved = arith::vec_mat(&ch.interior, g);
    ch.walls.iter().any(|w| w.dual == wall)
        && images.contains(&arith::neg_vec(wall))
        && arith::dot(wall, &ch.interior) > 0
        && arith::dot(wall, &moved) < 0
}

/// The outcome of the descent.
#[derive(Debug, Clone)]
pub struct EnriquesResult {
    pub lattice: EnriquesLattice,
    pub kernel: Vec<ZMat>,
    /// The descended finite group, sorted.
    pub group: Vec<ZMat>,
    pub fingerprint: GroupFingerprint,
    /// Order of the image of the symplectic subgroup.
    pub symplectic_image_order: usize,
    /// Every element of order 2 lies in the image of the symplectic subgroup.
    pub involutions_in_symplectic_image: bool,
    pub chamber: EnriquesChamber,
    /// Generators: those of the finite group followed by the crossing element.
    pub generators: Vec<ZMat>,
    /// The wall crossed by the crossing element.
    pub crossing_wall: ZVec,
}

/// The Enriques involution generating the center of `Aut(X,a)`, if the center has order 2
/// and its nontrivial element is of Enriques type.
pub fn central_enriques_involution(
    cfg: &SurfaceConfig,
    base: &GenerationResult,
) -> Result<Option<ZMat>, EnriquesError> {
    let group = base
        .aut_group()
        .map_err(|_| EnriquesError::Certificate("automorphism group is not closed"))?;
    let center = group.center();
    if center.len() != 2 {
        return Ok(None);
    }
    let id = group.identity_index();
    let z = &group.elements()[center.iter().copied().find(|&c| c != id).expect("center of order 2")];
    Ok((k3::classify_involution(cfg, z)? == InvolutionType::Enriques).then(|| z.clone()))
}

/// Runs the descent for the base result of surface 0: kernel check, descended group and
/// its certificate, the restricted chamber, and a crossing element.
///
/// `preferred` lists isometries of the surface lattice to favour when choosing generators:
/// those descending into the finite group all become generators (completed to a generating
/// set if needed), and the first remaining one that is certified as an involution across a
/// wall of the base chamber and carries the restricted chamber across one of its walls
/// becomes the crossing element. Without a suitable preferred element the
/// crossing element is the first such involution in orbit order.
pub fn run_enriques(
    cfg: &SurfaceConfig,
    base: &GenerationResult,
    lat: EnriquesLattice,
    preferred: &[ZMat],
) -> Result<EnriquesResult, EnriquesError> {
    let descent = centralizer_and_descent(&lat, &base.aut)?;
    let n = lat.rank();
    let group = descent.images;
    let preferred_images: Vec<(ZMat, ZMat)> = preferred
        .iter()
        .filter_map(|g| lat.descend(g).ok().map(|m| (g.clone(), m)))
        .collect();
    let points = crate::groups::spanning_orbit_points(&group, n);
    let mg = MatrixGroup::from_elements(&group, &points, n)?;
    // preferred finite elements first, completed greedily to a generating set
    let mut gen_idx: Vec<usize> = Vec::new();
    for (_, m) in &preferred_images {
        if let Some(i) = mg.index_of(m) {
            if !gen_idx.contains(&i) {
                gen_idx.push(i);
            }
        }
    }
    for &i in mg.generator_indices() {
        let sub = mg.subgroup_generated(&gen_idx);
        if sub.len() == mg.order() {
            break;
        }
        if sub.binary_search(&i).is_err() {
            gen_idx.push(i);
        }
    }
    let fingerprint = k3::group_fingerprint(&mg);
    let torelli = cfg.torelli();
    let mut symplectic: BTreeSet<ZMat> = BTreeSet::new();
    for g in &base.aut {
        if torelli.symplectic_level(g).map_err(K3Error::from)? == 1 {
            symplectic.insert(lat.descend(g)?);
        }
    }
    let id = arith::identity(n);
    let involutions_in_symplectic_image = group
        .iter()
        .filter(|g| **g != id && arith::mat_mul(g, g) == id)
        .all(|g| symplectic.contains(g));
    let chamber = enriques_chamber(&lat, base, &group)?;
    let crosses_some_wall = |m: &ZMat| {
        chamber
            .walls
            .iter()
            .find(|w| crosses_wall(&chamber, m, &w.dual))
            .map(|w| w.dual.clone())
    };
    let mut crossing = preferred_images
        .iter()
        .filter(|(g, m)| mg.index_of(m).is_none() && base.crossing_orbit_of(g).is_some())
        .find_map(|(_, m)| crosses_some_wall(m).map(|w| (m.clone(), w)));
    if crossing.is_none() {
        'outer: for o in &base.orbits {
            let Some(c) = &o.crossing else { continue };
            for inv in &c.involutions {
                if let Ok(m) = lat.descend(inv) {
                    if let Some(w) = crosses_some_wall(&m) {
                        crossing = Some((m, w));
                        break 'outer;
                    }
                }
            }
        }
    }
    let (cross_elem, crossing_wall) = crossing.ok_or(EnriquesError::Certificate("no crossing element"))?;
    let mut generators: Vec<ZMat> = gen_idx.iter().map(|&i| mg.elements()[i].clone()).collect();
    generators.push(cross_elem);
    Ok(EnriquesResult {
        lattice: lat,
        kernel: descent.kernel,
        symplectic_image_order: symplectic.len(),
        group,
        fingerprint,
        involutions_in_symplectic_image,
        chamber,
        generators,
        crossing_wall,
    })
}

/// The certificate that the descended group is the Mathieu group of degree 10: order 720,
/// an index-2 image of the symplectic subgroup containing all involutions (non-split), and
/// one class each of elements of order 3 and 5.
pub fn is_mathieu_certified(r: &EnriquesResult) -> bool {
    r.fingerprint.order == 720
        && r.symplectic_image_order == 360
        && r.involutions_in_symplectic_image
        && r.fingerprint.name == Some(GroupName::M10)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn eigenlattices_of_a_coordinate_swap() {
        let swap: ZMat = vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]];
        let (plus, minus) = invariant_split(&swap).unwrap();
        assert_eq!(plus.len(), 2);
        assert_eq!(minus.len(), 1);
        for v in &plus {
            assert_eq!(arith::vec_mat(v, &swap), *v);
        }
        assert_eq!(arith::vec_mat(&minus[0], &swap), arith::neg_vec(&minus[0]));
        assert_eq!(arith::primitive_part(&minus[0]), minus[0]);
    }

    #[test]
    fn non_involutions_are_rejected() {
        let shear: ZMat = vec![vec![1, 1], vec![0, 1]];
        assert_eq!(invariant_split(&shear).unwrap_err(), EnriquesError::NotInvolution);
        assert_eq!(
            invariant_split(&vec![vec![1, 0]]).unwrap_err(),
            EnriquesError::NotInvolution
        );
    }

    #[test]
    fn a_surface_isometry_that_is_not_an_involution_has_no_enriques_lattice() {
        let cfg = SurfaceConfig::new(0);
        let id = arith::identity(20);
        assert!(EnriquesLattice::new(&cfg, &id, None).is_err());
    }
}
