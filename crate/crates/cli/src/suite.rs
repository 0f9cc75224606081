//! Randomized invariant battery.
//!
//! Each check evaluates one inequality on freshly drawn cases and reports its
//! worst excess: `lhs - rhs - slack`, so a case passes when the excess is at
//! most zero. Case `c` of check `k` draws from `derive_seed(seed, [k, c])`,
//! which makes every case reproducible on its own.

use cohere::measures::{c_l1, c_l1_pure, c_rel_entropy, dephase};
use cohere::random::{self, ZeroPattern};
use cohere::roof::{certificate_residual, roof_bounds_thm4, roof_optimize, roof_thm3};
use cohere::triangle::{g_values, lemma3_check, theorem1_bounds, theorem2_dominance};
use cohere::upper::{bound_report, zero_diagonal_indices};
use cohere::{
    CoherenceError, DensityMatrix, Ensemble, OptimizerConfig, PureState, QuantumState, Result, Tolerances, C64,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Failing cases listed per check; the count is always complete.
const MAX_LISTED: usize = 10;

pub struct SuiteOptions {
    pub seed: u64,
    pub cases: usize,
    pub dims: Vec<usize>,
    pub tol: Tolerances,
    pub cfg: OptimizerConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct FailingCase {
    pub case: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excess: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest excess over cases that evaluated; `None` if none did.
    pub max_excess: Option<f64>,
    pub failing: Vec<FailingCase>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub cases: usize,
    pub dims: Vec<usize>,
    pub checks: Vec<CheckOutcome>,
    pub total_cases: usize,
    pub total_failures: usize,
    pub passed: bool,
}

struct Case<'a> {
    rng: ChaCha8Rng,
    seed: u64,
    index: usize,
    opts: &'a SuiteOptions,
}

impl Case<'_> {
    fn dim(&self) -> usize {
        self.opts.dims[self.index % self.opts.dims.len()]
    }

    /// Dimension restricted to at most `cap`, for the expensive roof checks.
    fn small_dim(&self, cap: usize) -> usize {
        let small: Vec<usize> = self.opts.dims.iter().copied().filter(|&d| d <= cap).collect();
        if small.is_empty() {
            2
        } else {
            small[self.index % small.len()]
        }
    }

    fn cfg(&self) -> OptimizerConfig {
        OptimizerConfig {
            seed: self.seed,
            ..self.opts.cfg
        }
    }

    fn tol(&self) -> &Tolerances {
        &self.opts.tol
    }
}

type CheckFn = fn(&mut Case) -> Result<f64>;

/// `(name, case divisor, check)`; a check runs `max(1, cases / divisor)` cases.
const CHECKS: &[(&str, usize, CheckFn)] = &[
    ("state_validity", 1, state_validity),
    ("c_l1_range", 1, c_l1_range),
    ("pure_formula", 1, pure_formula),
    ("phase_invariance", 1, phase_invariance),
    ("convexity", 1, convexity),
    ("triangle_sandwich", 1, triangle_sandwich),
    ("theorem2_dominance", 1, dominance),
    ("two_member_lower_bound", 1, two_member),
    ("ratio_of_squares_chain", 1, ratio_chain),
    ("principal_submatrix_psd", 1, submatrix_psd),
    ("upper_bounds_dominate", 1, upper_bounds),
    ("zero_diagonal_reduction", 1, zero_diagonal_reduction),
    ("roof_qubit_equality", 5, roof_qubit),
    ("roof_block_qutrit_equality", 10, roof_block_qutrit),
    ("roof_above_c_l1", 10, roof_above_c_l1),
    ("roof_bounds_sandwich", 25, roof_bounds_sandwich),
];

pub fn run(opts: &SuiteOptions) -> SuiteReport {
    let mut checks = Vec::with_capacity(CHECKS.len());
    for (k, &(name, divisor, check)) in CHECKS.iter().enumerate() {
        let cases = (opts.cases / divisor).max(1);
        let mut outcome = CheckOutcome {
            name,
            cases,
            failures: 0,
            max_excess: None,
            failing: Vec::new(),
        };
        for index in 0..cases {
            let seed = random::derive_seed(opts.seed, &[k as u64, index as u64]);
            let mut case = Case {
                rng: random::rng_for(seed, &[]),
                seed,
                index,
                opts,
            };
            let (excess, error) = match check(&mut case) {
                Ok(x) => (Some(x), None),
                Err(e) => (None, Some(e.to_string())),
            };
            if let Some(x) = excess {
                outcome.max_excess = Some(outcome.max_excess.map_or(x, |m: f64| m.max(x)));
            }
            // NaN excess counts as a failure
            let failed = error.is_some() || !excess.is_some_and(|x| x <= 0.0);
            if failed {
                outcome.failures += 1;
                if outcome.failing.len() < MAX_LISTED {
                    outcome.failing.push(FailingCase {
                        case: index,
                        seed,
                        excess,
                        error,
                    });
                }
            }
        }
        checks.push(outcome);
    }
    let total_cases = checks.iter().map(|c| c.cases).sum();
    let total_failures = checks.iter().map(|c| c.failures).sum();
    SuiteReport {
        seed: opts.seed,
        cases: opts.cases,
        dims: opts.dims.clone(),
        checks,
        total_cases,
        total_failures,
        passed: total_failures == 0,
    }
}

fn worst(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn random_rank_state(case: &mut Case, d: usize) -> DensityMatrix {
    let rank = case.rng.gen_range(1..=d);
    random::random_state_with(&mut case.rng, d, rank)
}

fn state_validity(case: &mut Case) -> Result<f64> {
    let d = case.dim();
    let rho = random_rank_state(case, d);
    let rho = DensityMatrix::from_matrix(rho.matrix().clone(), case.tol())?;
    let spec = rho.spectrum(case.tol())?;
    let sum: f64 = spec.eigenvalues.iter().sum();
    let sq: f64 = spec.eigenvalues.iter().map(|l| l * l).sum();
    let recon = cohere::matrix::frobenius_distance(&spec.reconstruct(), rho.matrix());
    Ok(worst([
        (sum - 1.0).abs() - 1e-10,
        (rho.purity() - sq).abs() - 1e-10,
        recon - case.tol().eig,
    ]))
}

fn c_l1_range(case: &mut Case) -> Result<f64> {
    let d = case.dim();
    let rho = random_rank_state(case, d);
    let c = c_l1(&rho).value;
    let re = c_rel_entropy(&rho, case.tol())?.value;
    Ok(worst([
        -c,
        c - (d - 1) as f64 - 1e-8,
        c_l1(&dephase(&rho)).value,
        -re - 1e-10,
    ]))
}

fn pure_formula(case: &mut Case) -> Result<f64> {
    let d = case.dim();
    let psi = random::random_pure_with(&mut case.rng, d);
    Ok((c_l1_pure(&psi).value - c_l1(&psi.projector()).value).abs() - 1e-12)
}

fn phase_invariance(case: &mut Case) -> Result<f64> {
    let d = case.dim();
    let psi = random::random_pure_with(&mut case.rng, d);
    let rotated: Vec<C64> = psi
        .amps()
        .iter()
        .map(|&z| z * C64::from_polar(1.0, case.rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    let rotated = PureState::normalized(rotated)?;
    Ok((c_l1_pure(&psi).value - c_l1_pure(&rotated).value).abs() - 1e-12)
}

fn random_ensemble(case: &mut Case, n: usize) -> Ensemble<DensityMatrix> {
    let d = case.dim();
    random::random_mixed_ensemble(&mut case.rng, d, n)
}

fn convexity(case: &mut Case) -> Result<f64> {
    let n = case.rng.gen_range(2..=4);
    let ens = random_ensemble(case, n);
    Ok(c_l1(&ens.mixture()).value - ens.average_c_l1() - 1e-10)
}

fn triangle_sandwich(case: &mut Case) -> Result<f64> {
    let n = case.rng.gen_range(2..=4);
    let ens = random_ensemble(case, n);
    let b = theorem1_bounds(&ens, case.tol())?;
    Ok(worst([
        b.lower_thm1 - b.c_l1_actual - 1e-8,
        b.c_l1_actual - b.upper_thm1 - 1e-8,
    ]))
}

fn dominance(case: &mut Case) -> Result<f64> {
    let n = case.rng.gen_range(2..=4);
    let ens = random_ensemble(case, n);
    let s = theorem2_dominance(&ens, case.tol())?;
    Ok(worst([
        s.mean_a - s.ratio_a - 1e-10,
        s.upper_thm1 - s.upper_convexity - 1e-10,
    ]))
}

fn two_member(case: &mut Case) -> Result<f64> {
    let ens = random_ensemble(case, 2);
    let p = ens.weights();
    let m = ens.members();
    let lhs = (p[0] * m[0].c_l1() - p[1] * m[1].c_l1()).abs();
    Ok(lhs - c_l1(&ens.mixture()).value - 1e-10)
}

fn ratio_chain(case: &mut Case) -> Result<f64> {
    let n = case.rng.gen_range(2..=4);
    let ens = random_ensemble(case, n);
    let c = c_l1(&ens.mixture()).value;
    let gv = g_values(&ens, case.tol())?;
    let precondition = worst(gv.a.iter().map(|a| a - c - 1e-8));
    match lemma3_check(&gv.a, c + 1e-8) {
        Ok(chk) => Ok(worst([
            precondition,
            chk.mean - chk.ratio - 1e-12,
            chk.ratio - c - 1e-8,
        ])),
        Err(CoherenceError::AllZeros) => Ok(precondition),
        Err(e) => Err(e),
    }
}

fn submatrix_psd(case: &mut Case) -> Result<f64> {
    let d = case.dim();
    let rho = random_rank_state(case, d);
    let kept: Vec<usize> = (0..d).filter(|_| case.rng.gen_bool(0.5)).collect();
    if kept.is_empty() {
        return Ok(-1.0);
    }
    let sub = rho.principal_submatrix(&kept, false, case.tol())?;
    Ok(-sub.min_eigenvalue()? - case.tol().psd)
}

fn patterned(case: &mut Case, d: usize) -> DensityMatrix {
    let pattern = ZeroPattern::ALL[case.rng.gen_range(0..ZeroPattern::ALL.len())];
    random::random_patterned_state(&mut case.rng, d, pattern)
}

fn upper_bounds(case: &mut Case) -> Result<f64> {
    let d = case.dim();
    let rho = patterned(case, d);
    let report = bound_report(&rho, case.tol())?;
    let c = report.c_l1_actual;
    let mut excess = worst(report.applicable().into_iter().map(|(_, b)| c - b - 1e-8));
    if let Some(b) = report.eig_bound {
        excess = excess.max(b - (d - 1) as f64 - 1e-8);
    }
    Ok(excess)
}

fn zero_diagonal_reduction(case: &mut Case) -> Result<f64> {
    let d = case.dim();
    let rho = random::random_patterned_state(&mut case.rng, d, ZeroPattern::ZeroDiagonal);
    let zeros = zero_diagonal_indices(&rho, case.tol());
    let kept: Vec<usize> = (0..d).filter(|k| !zeros.contains(k)).collect();
    let sub = rho.principal_submatrix(&kept, true, case.tol())?;
    let line = worst(zeros.iter().map(|&k| rho.max_offdiag_in_line(k) - case.tol().diag_zero.sqrt()));
    Ok(worst([(c_l1(&rho).value - c_l1(&sub).value).abs() - 1e-10, line]))
}

fn roof_qubit(case: &mut Case) -> Result<f64> {
    let rho = random::random_state_with(&mut case.rng, 2, 2);
    let v = roof_optimize(&rho, &case.cfg(), case.tol())?.value;
    Ok((v - 2.0 * rho.entry(0, 1).norm()).abs() - 1e-6)
}

fn roof_block_qutrit(case: &mut Case) -> Result<f64> {
    let rho = random::random_block_qutrit(&mut case.rng);
    let c = c_l1(&rho).value;
    let exact = roof_thm3(&rho, case.tol())?;
    let v = roof_optimize(&rho, &case.cfg(), case.tol())?.value;
    Ok(worst([
        (exact.value - c).abs() - 1e-12,
        certificate_residual(&exact.certificate, &rho) - 1e-10,
        (v - c).abs() - 1e-6,
    ]))
}

fn roof_above_c_l1(case: &mut Case) -> Result<f64> {
    let d = case.small_dim(3);
    let rho = random_rank_state(case, d);
    let v = roof_optimize(&rho, &case.cfg(), case.tol())?.value;
    Ok(c_l1(&rho).value - v - 1e-8)
}

fn roof_bounds_sandwich(case: &mut Case) -> Result<f64> {
    let n = case.rng.gen_range(2..=3);
    let ens = random::random_pure_ensemble(&mut case.rng, 3, n);
    let b = roof_bounds_thm4(&ens, 1, 2, &case.cfg(), case.tol())?;
    let v = roof_optimize(&ens.mixture(), &case.cfg(), case.tol())?.value;
    Ok(worst([
        b.lower_thm4 - v,
        v - b.upper_thm4 - 1e-6,
        b.upper_thm4 - b.upper_convexity - 1e-10,
    ]))
}
