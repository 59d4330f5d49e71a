//! Orchestration: the generation for one surface with crossings computed in parallel and
//! cached on disk, and the descent to the Enriques quotient of surface 0.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use k3aut_core::arith::{ZMat, ZVec};
use k3aut_core::borcherds::{self, BaseChamber, BorcherdsError, GenerationResult};
use k3aut_core::enriques::{self, EnriquesError, EnriquesLattice, EnriquesResult};
use k3aut_core::k3::{self, K3Error, SurfaceConfig};

use crate::cache::Cache;
use crate::fixtures::Reference;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("surface index {0} is not one of 0, 1, 2")]
    UnknownSurface(usize),
    #[error("generation failed: {0}")]
    Borcherds(#[from] BorcherdsError),
    #[error("Enriques descent failed: {0}")]
    Enriques(#[from] EnriquesError),
    #[error("surface computation failed: {0}")]
    K3(#[from] K3Error),
    #[error("reference data: {0}")]
    Reference(String),
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

/// Settings shared by the commands.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads for the crossings; `None` uses the rayon default.
    pub threads: Option<usize>,
    pub cache: Option<Cache>,
}

/// Cache entry for one crossing: the congruence found for the chamber with this Weyl vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct CongruenceEntry {
    #[serde(with = "crate::json::decimal")]
    weyl: ZVec,
    #[serde(with = "crate::json::decimal")]
    gamma: ZMat,
}

const CONGRUENCE_KIND: &str = "congruence";

fn cross_cached(base: &BaseChamber, i: usize, cache: Option<&Cache>) -> Result<borcherds::Crossing, BorcherdsError> {
    let w = base.adjacent(i)?;
    let key = cache.map(|_| Cache::key(&base.cfg.gram, &base.cfg.embedding, &w));
    if let (Some(c), Some(key)) = (cache, &key) {
        if let Some(entry) = c.load::<CongruenceEntry>(CONGRUENCE_KIND, key) {
            // a stale or corrupted entry is recomputed rather than trusted
            if entry.weyl == w {
                if let Ok(x) = base.complete_crossing(i, w.clone(), entry.gamma) {
                    return Ok(x);
                }
            }
        }
    }
    let gamma = base.find_congruence(i, &w)?;
    let crossing = base.complete_crossing(i, w.clone(), gamma.clone())?;
    if let (Some(c), Some(key)) = (cache, &key) {
        // the cache is an accelerator only; a failed write does not fail the run
        let _ = c.store(CONGRUENCE_KIND, key, &CongruenceEntry { weyl: w, gamma });
    }
    Ok(crossing)
}

/// The complete generation for surface `k`. Crossings run in parallel; results are
/// collected in orbit order, so the outcome does not depend on the thread count.
pub fn generate(k: usize, opts: &RunOptions) -> Result<GenerationResult, PipelineError> {
    if k > 2 {
        return Err(PipelineError::UnknownSurface(k));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let base = BaseChamber::new(k)?;
    let idx = base.crossable();
    let crossings = pool.install(|| {
        idx.par_iter()
            .map(|&i| cross_cached(&base, i, opts.cache.as_ref()))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(base.finish(crossings)?)
}

/// Isometries of the surface lattice favoured as generators of the Enriques group: the
/// order-4 automorphism, the double-plane involutions of the first three polarizations of
/// surface 0, and the double-plane involution crossing into the adjacent chamber.
pub fn preferred_enriques_generators(cfg: &SurfaceConfig, reference: &Reference) -> Result<Vec<ZMat>, PipelineError> {
    let mut out = vec![reference.order4_x0.clone()];
    for name in ["h0_1", "h0_2", "h0_3", "tlh0_3"] {
        let row = reference
            .polarization(name)
            .ok_or_else(|| PipelineError::Reference(format!("polarization {name} missing")))?;
        out.push(k3::double_plane_involution(cfg, &row.h)?);
    }
    Ok(out)
}

/// The descent for surface 0 from a finished generation: the Enriques involution is the
/// central one of `Aut(X,a)`, the basis of the invariant lattice is the reference basis.
pub fn enriques(base: &GenerationResult, reference: &Reference) -> Result<EnriquesResult, PipelineError> {
    if base.k != 0 {
        return Err(PipelineError::UnknownSurface(base.k));
    }
    let cfg = SurfaceConfig::new(0);
    let eps = enriques::central_enriques_involution(&cfg, base)?.ok_or(EnriquesError::Certificate(
        "center is not generated by an Enriques involution",
    ))?;
    let lat = EnriquesLattice::new(&cfg, &eps, Some(reference.enriques_basis.clone()))?;
    let preferred = preferred_enriques_generators(&cfg, reference)?;
    Ok(enriques::run_enriques(&cfg, base, lat, &preferred)?)
}
