//! Exploratory search: how far is the numerical roof from C_l1 on random
//! qutrits of rank 1 and 3? Nothing is asserted; the gaps are only reported.

use cohere::measures::c_l1;
use cohere::random;
use cohere::roof::roof_optimize;
use cohere::{OptimizerConfig, Result, Tolerances};
use serde::Serialize;

use crate::io::StateOut;

const DIM: usize = 3;
const RANKS: [usize; 2] = [1, 3];

#[derive(Debug, Clone, Serialize)]
pub struct RankSummary {
    pub rank: usize,
    pub cases: usize,
    /// `max |roof_optimize - C_l1|`.
    pub max_gap: f64,
    pub mean_gap: f64,
    pub worst_case: usize,
    pub worst_seed: u64,
    pub worst_roof: f64,
    pub worst_c_l1: f64,
    pub worst_state: StateOut,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub dim: usize,
    pub seed: u64,
    pub ranks: Vec<RankSummary>,
    /// Largest gap over all ranks.
    pub max_gap: f64,
}

pub fn run(seed: u64, cases: usize, cfg: &OptimizerConfig, tol: &Tolerances) -> Result<ConjectureReport> {
    let mut ranks = Vec::with_capacity(RANKS.len());
    for rank in RANKS {
        let mut worst: Option<RankSummary> = None;
        let mut total = 0.0;
        for case in 0..cases {
            let case_seed = random::derive_seed(seed, &[0x636f_6e6a, rank as u64, case as u64]);
            let rho = random::random_state(DIM, rank, case_seed);
            let run_cfg = OptimizerConfig { seed: case_seed, ..*cfg };
            let v = roof_optimize(&rho, &run_cfg, tol)?.value;
            let c = c_l1(&rho).value;
            let gap = (v - c).abs();
            total += gap;
            if worst.as_ref().map_or(true, |w| gap > w.max_gap) {
                worst = Some(RankSummary {
                    rank,
                    cases,
                    max_gap: gap,
                    mean_gap: 0.0,
                    worst_case: case,
                    worst_seed: case_seed,
                    worst_roof: v,
                    worst_c_l1: c,
                    worst_state: StateOut::from(&rho),
                });
            }
        }
        let mut summary = worst.expect("at least one case");
        summary.mean_gap = total / cases as f64;
        ranks.push(summary);
    }
    let max_gap = ranks.iter().map(|r| r.max_gap).fold(0.0, f64::max);
    Ok(ConjectureReport {
        dim: DIM,
        seed,
        ranks,
        max_gap,
    })
}
