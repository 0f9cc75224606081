//! Multi-start local search over pure-state decompositions of a mixed state.
//!
//! Write `rho = W W^dagger` with `W = [sqrt(lambda_1) v_1, ..., sqrt(lambda_r) v_r]`.
//! Every `m`-member pure decomposition of `rho` is `u_k = sum_j V_kj w_j` for an
//! `m x r` matrix `V` with orthonormal columns, with weights `q_k = |u_k|^2` and
//! members `u_k / |u_k|`. The average coherence of such a decomposition is
//!
//! ```text
//! sum_k q_k C_l1(u_k / |u_k|) = sum_k |u_k|_1^2 - 1
//! ```
//!
//! which is minimized over the complex Stiefel manifold by projected gradient
//! descent with a QR-type retraction. The moduli make the objective
//! non-differentiable exactly where optimal decompositions tend to live (zero
//! amplitudes), so `|z|` is replaced by `sqrt(|z|^2 + eps^2) - eps` and `eps` is
//! driven to zero over a fixed schedule, warm-starting each stage.

use crate::random;
use crate::C64;

const ARMIJO: f64 = 1e-4;
const STALL_LIMIT: usize = 20;
const MIN_STEP: f64 = 1e-18;
const SMOOTHING: [f64; 9] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-10, 0.0];

/// `rho = W W^dagger` in row-major `d x r` layout.
pub(crate) struct Factor {
    pub d: usize,
    pub r: usize,
    pub w: Vec<C64>,
}

pub(crate) struct LocalResult {
    /// Row-major `m x r` isometry.
    pub v: Vec<C64>,
    /// Unsmoothed objective at `v`.
    pub value: f64,
    pub iterations: usize,
}

impl Factor {
    /// `u = W V^T`, stored row-major `m x d` (row `k` is member `k`).
    pub fn members(&self, v: &[C64], m: usize) -> Vec<C64> {
        let (d, r) = (self.d, self.r);
        let mut u = vec![C64::new(0.0, 0.0); m * d];
        for k in 0..m {
            let vk = &v[k * r..(k + 1) * r];
            for i in 0..d {
                let wi = &self.w[i * r..(i + 1) * r];
                u[k * d + i] = wi.iter().zip(vk).map(|(a, b)| a * b).sum();
            }
        }
        u
    }

    /// Smoothed objective `sum_k (sum_i h(u_ki))^2 - 1`; writes the Euclidean
    /// gradient with respect to `V` into `grad` when given.
    pub fn objective(&self, v: &[C64], m: usize, eps: f64, grad: Option<&mut [C64]>) -> f64 {
        let (d, r) = (self.d, self.r);
        let mut row_u = vec![C64::new(0.0, 0.0); d];
        let mut f = 0.0;
        let mut grad = grad;
        for k in 0..m {
            let vk = &v[k * r..(k + 1) * r];
            let mut len = 0.0;
            for (i, ui) in row_u.iter_mut().enumerate() {
                let wi = &self.w[i * r..(i + 1) * r];
                *ui = wi.iter().zip(vk).map(|(a, b)| a * b).sum();
                len += smooth_abs(*ui, eps);
            }
            f += len * len;
            if let Some(g) = grad.as_deref_mut() {
                let row = &mut g[k * r..(k + 1) * r];
                row.iter_mut().for_each(|x| *x = C64::new(0.0, 0.0));
                for (i, z) in row_u.iter().enumerate() {
                    let s = (z.norm_sqr() + eps * eps).sqrt();
                    if s == 0.0 {
                        continue;
                    }
                    let e = z * (2.0 * len / s);
                    let wi = &self.w[i * r..(i + 1) * r];
                    for (gj, wij) in row.iter_mut().zip(wi) {
                        *gj += e * wij.conj();
                    }
                }
            }
        }
        f - 1.0
    }

    /// Local descent from `v0` through the whole smoothing schedule.
    pub fn descend(&self, mut v: Vec<C64>, m: usize, max_iters: usize, tol: f64) -> LocalResult {
        let r = self.r;
        let mut grad = vec![C64::new(0.0, 0.0); m * r];
        let mut best_v = v.clone();
        let mut best = self.objective(&v, m, 0.0, None);
        let mut iterations = 0;

        for &eps in &SMOOTHING {
            let mut f = self.objective(&v, m, eps, Some(&mut grad));
            let mut p = project_tangent(&v, &grad, m, r);
            let mut step = 0.5;
            let mut stall = 0;
            for _ in 0..max_iters {
                let pn2 = norm_sq(&p);
                if pn2 < 1e-30 {
                    break;
                }
                let mut t = step;
                let accepted = loop {
                    let cand = retract(&v, &p, t, m, r);
                    if let Some(cand) = cand {
                        let fc = self.objective(&cand, m, eps, None);
                        if fc <= f - ARMIJO * t * pn2 {
                            break Some((cand, fc));
                        }
                    }
                    t *= 0.5;
                    if t < MIN_STEP {
                        break None;
                    }
                };
                iterations += 1;
                let Some((next, f_next)) = accepted else { break };
                let mut g_next = vec![C64::new(0.0, 0.0); m * r];
                self.objective(&next, m, eps, Some(&mut g_next));
                let p_next = project_tangent(&next, &g_next, m, r);

                // Barzilai-Borwein guess for the next trial step
                let (ss, sy) = next
                    .iter()
                    .zip(&v)
                    .zip(p_next.iter().zip(&p))
                    .fold((0.0, 0.0), |(ss, sy), ((a, b), (c, e))| {
                        let s = a - b;
                        let y = c - e;
                        (ss + s.norm_sqr(), sy + (s.conj() * y).re)
                    });
                step = if sy > 0.0 {
                    (ss / sy).clamp(1e-10, 1e3)
                } else {
                    (t * 4.0).min(1e3)
                };

                stall = if f - f_next < tol { stall + 1 } else { 0 };
                v = next;
                f = f_next;
                p = p_next;
                grad = g_next;
                if stall >= STALL_LIMIT {
                    break;
                }
            }
            let exact = self.objective(&v, m, 0.0, None);
            if exact < best {
                best = exact;
                best_v.clone_from(&v);
            }
        }
        LocalResult {
            v: best_v,
            value: best,
            iterations,
        }
    }
}

fn smooth_abs(z: C64, eps: f64) -> f64 {
    if eps == 0.0 {
        z.norm()
    } else {
        (z.norm_sqr() + eps * eps).sqrt() - eps
    }
}

fn norm_sq(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// `G - V herm(V^dagger G)`: projection onto the tangent space of the Stiefel manifold.
fn project_tangent(v: &[C64], g: &[C64], m: usize, r: usize) -> Vec<C64> {
    let mut a = vec![C64::new(0.0, 0.0); r * r];
    for k in 0..m {
        for x in 0..r {
            let vx = v[k * r + x].conj();
            for y in 0..r {
                a[x * r + y] += vx * g[k * r + y];
            }
        }
    }
    let mut h = vec![C64::new(0.0, 0.0); r * r];
    for x in 0..r {
        for y in 0..r {
            h[x * r + y] = (a[x * r + y] + a[y * r + x].conj()) * 0.5;
        }
    }
    let mut p = g.to_vec();
    for k in 0..m {
        for y in 0..r {
            let mut acc = C64::new(0.0, 0.0);
            for x in 0..r {
                acc += v[k * r + x] * h[x * r + y];
            }
            p[k * r + y] -= acc;
        }
    }
    p
}

/// `qf(V - t P)` via modified Gram-Schmidt (positive-diagonal R).
fn retract(v: &[C64], p: &[C64], t: f64, m: usize, r: usize) -> Option<Vec<C64>> {
    let mut out: Vec<C64> = v.iter().zip(p).map(|(a, b)| a - b * t).collect();
    orthonormalize_columns(&mut out, m, r).then_some(out)
}

/// Orthonormalizes the columns of a row-major `m x r` matrix in place.
/// Returns false if a column collapses.
pub(crate) fn orthonormalize_columns(x: &mut [C64], m: usize, r: usize) -> bool {
    for j in 0..r {
        // two passes keep orthogonality at machine precision
        for _ in 0..2 {
            for l in 0..j {
                let mut dot = C64::new(0.0, 0.0);
                for k in 0..m {
                    dot += x[k * r + l].conj() * x[k * r + j];
                }
                for k in 0..m {
                    let xl = x[k * r + l];
                    x[k * r + j] -= xl * dot;
                }
            }
        }
        let n = (0..m).map(|k| x[k * r + j].norm_sqr()).sum::<f64>().sqrt();
        if !(n > 1e-12) {
            return false;
        }
        for k in 0..m {
            x[k * r + j] /= n;
        }
    }
    true
}

/// Haar-random `m x r` isometry for start `start` at ensemble size `m`.
pub(crate) fn random_isometry(seed: u64, m: usize, r: usize, start: usize) -> Vec<C64> {
    let mut rng = random::rng_for(seed, &[0x6973_6f6d, m as u64, start as u64]);
    loop {
        let mut x: Vec<C64> = (0..m * r).map(|_| random::gaussian_complex(&mut rng)).collect();
        if orthonormalize_columns(&mut x, m, r) {
            return x;
        }
    }
}
