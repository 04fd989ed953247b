//! Seeded random-coloring experiments.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::GroundStructure;
use crate::patterns::ExpandedPattern;

use super::instances::enumerate_instances;
use super::SearchError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentStats {
    pub trials: u64,
    pub hits: u64,
    pub fraction: f64,
}

/// Fraction of uniformly random k-colorings containing a monochromatic
/// instance; deterministic for a given seed.
pub fn random_coloring_experiment(
    g: &GroundStructure,
    pat: &ExpandedPattern,
    k: u32,
    trials: u64,
    seed: u64,
) -> Result<ExperimentStats, SearchError> {
    if trials < 1 {
        return Err(SearchError::BadParams("trials must be >= 1".into()));
    }
    if k == 0 {
        return Err(SearchError::NoColors);
    }
    let set = enumerate_instances(g, pat, 1 << 24)?;
    let n = g.carrier_size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    let mut colors = vec![0u32; n];
    for _ in 0..trials {
        for c in colors.iter_mut() {
            *c = rng.gen_range(0..k);
        }
        let hit = set.instances.iter().any(|inst| {
            let first = colors[inst[0]];
            inst.iter().all(|&e| colors[e] == first)
        });
        if hit {
            hits += 1;
        }
    }
    Ok(ExperimentStats {
        trials,
        hits,
        fraction: hits as f64 / trials as f64,
    })
}
