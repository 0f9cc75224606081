//! The convex-roof l1-norm
//! `min over {q_k, |phi_k>} with rho = sum q_k |phi_k><phi_k| of sum q_k C_l1(|phi_k>)`.
//!
//! Exact values are available for pure states, qubits, and qutrits of the
//! block form `[[a, b, 0], [conj b, c, 0], [0, 0, e]]` of full rank. Everything
//! else goes through [`roof_optimize`], whose value is an upper estimate backed
//! by an explicit certificate ensemble.

mod optimizer;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::ensemble::Ensemble;
use crate::error::{CoherenceError, Result};
use crate::matrix::{frobenius_distance, hermitian_eigen, DensityMatrix, PureState};
use crate::measures::{c_l1, c_l1_pure};
use crate::tolerance::Tolerances;
use crate::triangle::{check_splittable, complement};
use crate::C64;

use optimizer::{random_isometry, Factor};

/// Max allowed reconstruction residual of a certificate.
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoofMethod {
    PureExact,
    QubitExact,
    Thm3Exact,
    Optimizer,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Random starts per ensemble size.
    pub starts: usize,
    /// Largest ensemble size tried; `None` means `d^2`.
    pub max_ensemble: Option<usize>,
    pub seed: u64,
    /// Iteration cap per smoothing stage.
    pub max_iters: usize,
    /// A stage ends after 20 consecutive steps improving by less than this.
    pub tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 32,
            max_ensemble: None,
            seed: 0,
            max_iters: 2000,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoofResult {
    pub value: f64,
    pub method: RoofMethod,
    pub certificate: Ensemble<PureState>,
    /// `|sum q_k |phi_k><phi_k| - rho|_F`.
    pub residual: f64,
    pub starts: usize,
    pub seed: u64,
    /// Size of the winning ensemble before zero-weight members were dropped.
    pub ensemble_size: usize,
    pub best_start: usize,
    pub iterations: usize,
}

impl RoofResult {
    /// `sum q_k C_l1(phi_k)` recomputed over the certificate.
    pub fn certificate_value(&self) -> f64 {
        self.certificate.iter().map(|(q, s)| q * c_l1_pure(s).value).sum()
    }

    fn exact(value: f64, method: RoofMethod, certificate: Ensemble<PureState>, rho: &DensityMatrix) -> Self {
        let residual = certificate_residual(&certificate, rho);
        let n = certificate.len();
        Self {
            value,
            method,
            certificate,
            residual,
            starts: 0,
            seed: 0,
            ensemble_size: n,
            best_start: 0,
            iterations: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoofBounds {
    /// `|rho_st|^2 / B`.
    pub lower_thm4: f64,
    /// `(1/n) sum_k (g_tilde_k + p_k C_l1(psi_k))`.
    pub upper_thm4: f64,
    /// `sum_k p_k C_l1(psi_k)`.
    pub upper_convexity: f64,
    /// `B = n (sum_k p_k C_l1(psi_k) + 1)`.
    pub b_value: f64,
    /// `(1 - p_k)` times the roof of the mixture without member `k`, exact when a closed form applies.
    pub g_tilde: Vec<f64>,
    /// `(1/n) sum_k |g_tilde_k - p_k C_l1(psi_k)|`; reported, not asserted.
    pub lemma6_lower: f64,
    pub rho_st_modulus: f64,
    /// Some `g_tilde` entry came from the optimizer, so `upper_thm4` is an
    /// estimate relative to it rather than a certified bound on the true roof.
    pub g_tilde_estimated: bool,
}

pub fn certificate_residual(cert: &Ensemble<PureState>, rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let mut acc = DMatrix::<C64>::zeros(d, d);
    for (q, s) in cert.iter() {
        acc += s.amps() * s.amps().adjoint() * C64::new(q, 0.0);
    }
    frobenius_distance(&acc, rho.matrix())
}

/// The roof of a pure state is its own l1 coherence.
pub fn roof_pure(psi: &PureState) -> RoofResult {
    let tol = Tolerances::default();
    let cert = Ensemble::new(vec![1.0], vec![psi.clone()], &tol).expect("singleton ensemble");
    let mut out = RoofResult::exact(c_l1_pure(psi).value, RoofMethod::PureExact, cert, &psi.projector());
    out.residual = 0.0;
    out
}

/// Certificate for a state whose coherence lives in the `{0, 1}` block:
/// `psi_1 ~ sqrt(rho_00)|0> + (|rho_01| / sqrt(rho_00)) e^{-i arg rho_01}|1>`
/// with weight `rho_00 + |rho_01|^2 / rho_00`, then `|1>` with weight
/// `rho_11 - |rho_01|^2 / rho_00`, then `|k>` with weight `rho_kk` for `k >= 2`.
fn block_certificate(rho: &DensityMatrix, tol: &Tolerances) -> Result<Ensemble<PureState>> {
    let d = rho.dim();
    let a = rho.entry(0, 0).re;
    let b = rho.entry(0, 1);
    let shift = b.norm_sqr() / a;
    let p1 = a + shift;
    let p2 = rho.entry(1, 1).re - shift;
    if p2 < -tol.weight {
        return Err(CoherenceError::BadWeights(format!(
            "second weight {p2} is negative"
        )));
    }
    let mut amps = DVector::zeros(d);
    amps[0] = C64::new(a.sqrt(), 0.0);
    amps[1] = C64::from_polar(b.norm() / a.sqrt(), -b.arg());
    let psi1 = PureState::from_vector(amps)?;

    let mut weights = vec![p1];
    let mut members = vec![psi1];
    if p2 > 0.0 {
        weights.push(p2);
        members.push(PureState::basis(d, 1));
    }
    for k in 2..d {
        let w = rho.entry(k, k).re;
        if w > 0.0 {
            weights.push(w);
            members.push(PureState::basis(d, k));
        }
    }
    let total: f64 = weights.iter().sum();
    let weights = weights.into_iter().map(|w| w / total).collect();
    Ensemble::new(weights, members, tol)
}

/// Exact roof of a qubit, `2 |rho_01|`.
pub fn roof_qubit(rho: &DensityMatrix, tol: &Tolerances, cfg: &OptimizerConfig) -> Result<RoofResult> {
    if rho.dim() != 2 {
        return Err(CoherenceError::WrongDimension {
            expected: 2,
            found: rho.dim(),
        });
    }
    if rho.entry(0, 0).re <= tol.diag_zero {
        return roof_optimize(rho, cfg, tol);
    }
    let cert = block_certificate(rho, tol)?;
    Ok(RoofResult::exact(c_l1(rho).value, RoofMethod::QubitExact, cert, rho))
}

/// Exact roof of a full-rank qutrit with `rho_02 = rho_12 = 0`: equal to `C_l1`.
pub fn roof_thm3(rho: &DensityMatrix, tol: &Tolerances) -> Result<RoofResult> {
    if rho.dim() != 3 {
        return Err(CoherenceError::WrongDimension {
            expected: 3,
            found: rho.dim(),
        });
    }
    if rho.entry(0, 2).norm() > tol.diag_zero || rho.entry(1, 2).norm() > tol.diag_zero {
        return Err(CoherenceError::NotApplicable(
            "third row/column is not decoupled".into(),
        ));
    }
    if rho.entry(0, 0).re <= tol.diag_zero {
        return Err(CoherenceError::NotApplicable("rho_11 vanishes".into()));
    }
    let rank = rho.rank(tol)?;
    if rank != 3 {
        return Err(CoherenceError::NotApplicable(format!("rank is {rank}, not 3")));
    }
    let cert = block_certificate(rho, tol)?;
    Ok(RoofResult::exact(c_l1(rho).value, RoofMethod::Thm3Exact, cert, rho))
}

/// Numerical upper estimate of the roof; see the module docs of the optimizer.
pub fn roof_optimize(rho: &DensityMatrix, cfg: &OptimizerConfig, tol: &Tolerances) -> Result<RoofResult> {
    let d = rho.dim();
    let spec = rho.spectrum(tol)?;
    let r = spec.eigenvalues.iter().filter(|&&l| l > tol.psd).count().max(1);
    let max_m = cfg.max_ensemble.unwrap_or(d * d);
    if max_m < r {
        return Err(CoherenceError::InvalidInput(format!(
            "max_ensemble {max_m} is below the rank {r}"
        )));
    }
    if cfg.starts == 0 {
        return Err(CoherenceError::InvalidInput("starts must be positive".into()));
    }
    let mut w = vec![C64::new(0.0, 0.0); d * r];
    for j in 0..r {
        let s = spec.eigenvalues[j].max(0.0).sqrt();
        for i in 0..d {
            w[i * r + j] = spec.eigenvectors[j].amps()[i] * s;
        }
    }
    let factor = Factor { d, r, w };

    struct Best {
        value: f64,
        m: usize,
        start: usize,
        v: Vec<C64>,
    }
    let mut best: Option<Best> = None;
    let mut iterations = 0;
    for m in r..=max_m {
        for start in 0..cfg.starts {
            let v0 = random_isometry(cfg.seed, m, r, start);
            let local = factor.descend(v0, m, cfg.max_iters, cfg.tol);
            iterations += local.iterations;
            if best.as_ref().map_or(true, |b| local.value < b.value) {
                best = Some(Best {
                    value: local.value,
                    m,
                    start,
                    v: local.v,
                });
            }
        }
    }
    let best = best.expect("at least one start ran");

    let u = factor.members(&best.v, best.m);
    let mut weights = Vec::with_capacity(best.m);
    let mut members = Vec::with_capacity(best.m);
    for k in 0..best.m {
        let uk = DVector::from_column_slice(&u[k * d..(k + 1) * d]);
        let q = uk.norm_squared();
        if q > 0.0 {
            weights.push(q);
            members.push(PureState::from_vector(uk)?);
        }
    }
    let total: f64 = weights.iter().sum();
    let weights: Vec<f64> = weights.into_iter().map(|q| q / total).collect();
    let certificate = Ensemble::new(weights, members, tol)?;
    let residual = certificate_residual(&certificate, rho);
    if !(residual <= RESIDUAL_TOL) {
        return Err(CoherenceError::NumericalFailure(format!(
            "best certificate reconstructs rho only to {residual:e}"
        )));
    }
    let mut out = RoofResult {
        value: 0.0,
        method: RoofMethod::Optimizer,
        certificate,
        residual,
        starts: cfg.starts,
        seed: cfg.seed,
        ensemble_size: best.m,
        best_start: best.start,
        iterations,
    };
    out.value = out.certificate_value();
    Ok(out)
}

/// Rank-one projector check plus its pure state.
fn as_pure(rho: &DensityMatrix, tol: &Tolerances) -> Result<Option<PureState>> {
    let spec = rho.spectrum(tol)?;
    if spec.eigenvalues.iter().skip(1).all(|&l| l <= tol.psd) {
        Ok(Some(spec.eigenvectors[0].clone()))
    } else {
        Ok(None)
    }
}

/// Picks the exact method that applies, in the order pure, qubit, block
/// qutrit, and falls back to the optimizer.
pub fn roof(rho: &DensityMatrix, cfg: &OptimizerConfig, tol: &Tolerances, force_optimizer: bool) -> Result<RoofResult> {
    if force_optimizer {
        return roof_optimize(rho, cfg, tol);
    }
    if let Some(psi) = as_pure(rho, tol)? {
        let mut out = roof_pure(&psi);
        out.residual = certificate_residual(&out.certificate, rho);
        return Ok(out);
    }
    if rho.dim() == 2 {
        return roof_qubit(rho, tol, cfg);
    }
    if rho.dim() == 3 {
        match roof_thm3(rho, tol) {
            Ok(r) => return Ok(r),
            Err(CoherenceError::NotApplicable(_)) => {}
            Err(e) => return Err(e),
        }
    }
    roof_optimize(rho, cfg, tol)
}

/// Lower and upper estimates of the roof of `sum_k p_k |psi_k><psi_k|` from a
/// decomposition into linearly independent pure states. `s` and `t` are
/// 1-based indices of the off-diagonal entry used in the lower bound.
pub fn roof_bounds_thm4(
    ens: &Ensemble<PureState>,
    s: usize,
    t: usize,
    cfg: &OptimizerConfig,
    tol: &Tolerances,
) -> Result<RoofBounds> {
    let d = ens.dim();
    for idx in [s, t] {
        if idx == 0 || idx > d {
            return Err(CoherenceError::IndexOutOfRange { index: idx, dim: d });
        }
    }
    if s == t {
        return Err(CoherenceError::InvalidIndices(
            "s and t must name an off-diagonal entry".into(),
        ));
    }
    check_splittable(ens, tol)?;

    let n = ens.len();
    let gram = DMatrix::from_fn(n, n, |i, j| ens.members()[i].inner(&ens.members()[j]));
    let min_eigenvalue = hermitian_eigen(&gram)?
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if !(min_eigenvalue > 1e-10) {
        return Err(CoherenceError::LinearlyDependent { min_eigenvalue });
    }

    let rho = ens.mixture();
    let member_c: Vec<f64> = ens.members().iter().map(|p| c_l1_pure(p).value).collect();
    let upper_convexity: f64 = ens.weights().iter().zip(&member_c).map(|(p, c)| p * c).sum();
    let b_value = n as f64 * (upper_convexity + 1.0);
    let rho_st_modulus = rho.entry(s - 1, t - 1).norm();

    let mut g_tilde = Vec::with_capacity(n);
    let mut g_tilde_estimated = false;
    for (k, &pk) in ens.weights().iter().enumerate() {
        let sigma = complement(ens, k, tol)?;
        let r = roof(&sigma, cfg, tol, false)?;
        g_tilde_estimated |= r.method == RoofMethod::Optimizer;
        g_tilde.push((1.0 - pk) * r.value);
    }
    let upper_thm4 = g_tilde
        .iter()
        .zip(ens.weights())
        .zip(&member_c)
        .map(|((g, p), c)| g + p * c)
        .sum::<f64>()
        / n as f64;
    let lemma6_lower = g_tilde
        .iter()
        .zip(ens.weights())
        .zip(&member_c)
        .map(|((g, p), c)| (g - p * c).abs())
        .sum::<f64>()
        / n as f64;

    Ok(RoofBounds {
        lower_thm4: rho_st_modulus * rho_st_modulus / b_value,
        upper_thm4,
        upper_convexity,
        b_value,
        g_tilde,
        lemma6_lower,
        rho_st_modulus,
        g_tilde_estimated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use approx::assert_abs_diff_eq;

    fn quick() -> OptimizerConfig {
        OptimizerConfig {
            starts: 8,
            ..OptimizerConfig::default()
        }
    }

    fn real(rows: &[&[f64]]) -> DensityMatrix {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        DensityMatrix::from_rows(&rows, &Tolerances::default()).unwrap()
    }

    fn check_sound(res: &RoofResult, rho: &DensityMatrix) {
        assert!(res.residual <= RESIDUAL_TOL, "residual {}", res.residual);
        assert_abs_diff_eq!(res.certificate_value(), res.value, epsilon = 1e-10);
        assert!(res.value >= c_l1(rho).value - 1e-8);
    }

    #[test]
    fn pure_roofs() {
        assert_eq!(roof_pure(&PureState::basis(3, 0)).value, 0.0);
        assert_abs_diff_eq!(roof_pure(&PureState::maximally_coherent(2)).value, 1.0, epsilon = 1e-12);
        let r = roof_pure(&PureState::maximally_coherent(3));
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-12);
        assert_eq!(r.method, RoofMethod::PureExact);
        assert_eq!(r.certificate.len(), 1);
    }

    #[test]
    fn qubit_closed_form() {
        let tol = Tolerances::default();
        let rho = real(&[&[0.5, 0.3], &[0.3, 0.5]]);
        let r = roof_qubit(&rho, &tol, &quick()).unwrap();
        assert_abs_diff_eq!(r.value, 0.6, epsilon = 1e-15);
        assert_eq!(r.certificate.len(), 2);
        assert_eq!(r.method, RoofMethod::QubitExact);
        check_sound(&r, &rho);
        // the optimizer finds nothing below the closed form
        let opt = roof_optimize(&rho, &quick(), &tol).unwrap();
        assert_abs_diff_eq!(opt.value, 0.6, epsilon = 1e-6);

        let diag = real(&[&[0.3, 0.0], &[0.0, 0.7]]);
        assert_eq!(roof_qubit(&diag, &tol, &quick()).unwrap().value, 0.0);
        let plus = real(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let r = roof_qubit(&plus, &tol, &quick()).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-15);
        check_sound(&r, &plus);

        assert!(matches!(
            roof_qubit(&DensityMatrix::maximally_mixed(3), &tol, &quick()),
            Err(CoherenceError::WrongDimension { .. })
        ));
    }

    #[test]
    fn complex_qubit_certificate_reconstructs() {
        let tol = Tolerances::default();
        let rows = vec![
            vec![C64::new(0.6, 0.0), C64::new(0.1, -0.2)],
            vec![C64::new(0.1, 0.2), C64::new(0.4, 0.0)],
        ];
        let rho = DensityMatrix::from_rows(&rows, &tol).unwrap();
        let r = roof_qubit(&rho, &tol, &quick()).unwrap();
        check_sound(&r, &rho);
        assert!(r.residual < 1e-15);
        assert_abs_diff_eq!(r.value, 2.0 * 0.05f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn block_qutrit_closed_form() {
        let tol = Tolerances::default();
        let rho = real(&[&[0.4, 0.2, 0.0], &[0.2, 0.4, 0.0], &[0.0, 0.0, 0.2]]);
        let r = roof_thm3(&rho, &tol).unwrap();
        assert_abs_diff_eq!(r.value, 0.4, epsilon = 1e-15);
        let w = r.certificate.weights();
        assert_abs_diff_eq!(w[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(w[1], 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(w[2], 0.2, epsilon = 1e-15);
        assert!(r.residual <= 1e-10);
        check_sound(&r, &rho);

        let diag = real(&[&[0.2, 0.0, 0.0], &[0.0, 0.3, 0.0], &[0.0, 0.0, 0.5]]);
        let r = roof_thm3(&diag, &tol).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.certificate.len(), 3);
        assert!(r.certificate.members().iter().all(|m| c_l1_pure(m).value == 0.0));

        let coupled = real(&[&[0.4, 0.0, 0.1], &[0.0, 0.3, 0.0], &[0.1, 0.0, 0.3]]);
        assert!(matches!(roof_thm3(&coupled, &tol), Err(CoherenceError::NotApplicable(_))));
        let rank2 = real(&[&[0.25, 0.25, 0.0], &[0.25, 0.25, 0.0], &[0.0, 0.0, 0.5]]);
        assert!(matches!(roof_thm3(&rank2, &tol), Err(CoherenceError::NotApplicable(_))));
    }

    #[test]
    fn optimizer_on_block_qutrit() {
        let tol = Tolerances::default();
        let rho = real(&[&[0.4, 0.2, 0.0], &[0.2, 0.4, 0.0], &[0.0, 0.0, 0.2]]);
        let r = roof_optimize(&rho, &quick(), &tol).unwrap();
        check_sound(&r, &rho);
        assert_abs_diff_eq!(r.value, 0.4, epsilon = 1e-6);
    }

    #[test]
    fn optimizer_on_pure_and_random_qubit() {
        let tol = Tolerances::default();
        let psi = random::random_pure(3, 4);
        let rho = psi.projector();
        let r = roof_optimize(&rho, &quick(), &tol).unwrap();
        check_sound(&r, &rho);
        assert_abs_diff_eq!(r.value, c_l1(&rho).value, epsilon = 1e-6);

        let q = random::random_state(2, 2, 13);
        let r = roof_optimize(&q, &quick(), &tol).unwrap();
        let exact = roof_qubit(&q, &tol, &quick()).unwrap();
        assert_abs_diff_eq!(r.value, exact.value, epsilon = 1e-6);
    }

    #[test]
    fn optimizer_is_deterministic_and_monotone_in_starts() {
        let tol = Tolerances::default();
        let rho = random::random_state(3, 2, 17);
        let cfg = |starts| OptimizerConfig {
            starts,
            max_ensemble: Some(4),
            ..OptimizerConfig::default()
        };
        let a = roof_optimize(&rho, &cfg(4), &tol).unwrap();
        let b = roof_optimize(&rho, &cfg(4), &tol).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        let more = roof_optimize(&rho, &cfg(8), &tol).unwrap();
        assert!(more.value <= a.value);
    }

    #[test]
    fn dispatcher_precedence() {
        let tol = Tolerances::default();
        let cfg = quick();
        let plus = PureState::maximally_coherent(3).projector();
        assert_eq!(roof(&plus, &cfg, &tol, false).unwrap().method, RoofMethod::PureExact);
        let q = random::random_state(2, 2, 1);
        assert_eq!(roof(&q, &cfg, &tol, false).unwrap().method, RoofMethod::QubitExact);
        let b = real(&[&[0.4, 0.2, 0.0], &[0.2, 0.4, 0.0], &[0.0, 0.0, 0.2]]);
        assert_eq!(roof(&b, &cfg, &tol, false).unwrap().method, RoofMethod::Thm3Exact);
        assert_eq!(roof(&b, &cfg, &tol, true).unwrap().method, RoofMethod::Optimizer);
    }

    #[test]
    fn bounds_for_basis_and_plus() {
        let tol = Tolerances::default();
        let cfg = quick();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::normalized(vec![C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
        let ens = Ensemble::new(vec![0.5, 0.5], vec![PureState::basis(2, 0), plus], &tol).unwrap();
        let b = roof_bounds_thm4(&ens, 1, 2, &cfg, &tol).unwrap();
        assert_abs_diff_eq!(b.rho_st_modulus, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(b.b_value, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.lower_thm4, 0.0625 / 3.0, epsilon = 1e-12);
        // both complements are pure, so G~ is exact
        assert!(!b.g_tilde_estimated);
        assert_abs_diff_eq!(b.g_tilde[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(b.g_tilde[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.upper_thm4, 0.5, epsilon = 1e-12);
        let est = roof(&ens.mixture(), &cfg, &tol, false).unwrap().value;
        assert!(b.lower_thm4 <= est);
        assert!(est <= b.upper_thm4 + 1e-6);
        assert!(b.upper_thm4 <= b.upper_convexity + 1e-10);

        let basis = Ensemble::new(
            vec![0.3, 0.7],
            vec![PureState::basis(2, 0), PureState::basis(2, 1)],
            &tol,
        )
        .unwrap();
        let b = roof_bounds_thm4(&basis, 2, 1, &cfg, &tol).unwrap();
        assert_eq!((b.lower_thm4, b.upper_thm4), (0.0, 0.0));
    }

    #[test]
    fn bounds_reject_bad_input() {
        let tol = Tolerances::default();
        let cfg = quick();
        let a = PureState::basis(2, 0);
        let dup = Ensemble::new(vec![0.5, 0.5], vec![a.clone(), a.clone()], &tol).unwrap();
        assert!(matches!(
            roof_bounds_thm4(&dup, 1, 2, &cfg, &tol),
            Err(CoherenceError::LinearlyDependent { .. })
        ));
        let ok = Ensemble::new(vec![0.5, 0.5], vec![a, PureState::basis(2, 1)], &tol).unwrap();
        assert!(matches!(
            roof_bounds_thm4(&ok, 1, 3, &cfg, &tol),
            Err(CoherenceError::IndexOutOfRange { .. })
        ));
        assert!(roof_bounds_thm4(&ok, 2, 2, &cfg, &tol).is_err());
    }
}
