//! Seeded generators for test states.
//!
//! Every draw is keyed by a base seed plus a path of stream labels, so a
//! consumer asking for "case 17 of check 3" gets the same state no matter how
//! many other draws happened before it.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::ensemble::Ensemble;
use crate::matrix::{DensityMatrix, PureState};
use crate::tolerance::Tolerances;
use crate::C64;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent child seed from `base` and a label path.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix(base), |acc, &p| mix(acc ^ mix(p)))
}

pub fn rng_for(base: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(base, path))
}

pub fn gaussian_complex<R: rand::Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// `rows x cols` matrix of i.i.d. standard complex Gaussians (Ginibre).
pub fn ginibre<R: rand::Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<C64> {
    // column-major fill keeps the draw order fixed
    DMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Random state `G G^dagger / tr(G G^dagger)` for a `d x rank` Ginibre matrix `G`.
///
/// # Panics
/// If `rank` is zero or exceeds `d`.
pub fn random_state_with<R: rand::Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> DensityMatrix {
    assert!(rank >= 1 && rank <= d, "rank must lie in 1..=d");
    let g = ginibre(rng, d, rank);
    let mut m = &g * g.adjoint();
    let tr: f64 = (0..d).map(|k| m[(k, k)].re).sum();
    m.unscale_mut(tr);
    DensityMatrix::from_trusted(m)
}

pub fn random_pure_with<R: rand::Rng + ?Sized>(rng: &mut R, d: usize) -> PureState {
    loop {
        let v = DVector::from_fn(d, |_, _| gaussian_complex(rng));
        if let Ok(p) = PureState::from_vector(v) {
            return p;
        }
    }
}

pub fn random_state(d: usize, rank: usize, seed: u64) -> DensityMatrix {
    random_state_with(&mut rng_for(seed, &[]), d, rank)
}

pub fn random_pure(d: usize, seed: u64) -> PureState {
    random_pure_with(&mut rng_for(seed, &[]), d)
}

/// Uniform draw from the probability simplex of size `n`.
pub fn random_weights<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            -u.ln()
        })
        .collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// `n` members of random rank in dimension `d` with simplex weights.
pub fn random_mixed_ensemble<R: rand::Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> Ensemble<DensityMatrix> {
    let weights = random_weights(rng, n);
    let members = (0..n)
        .map(|_| {
            let rank = rng.gen_range(1..=d);
            random_state_with(rng, d, rank)
        })
        .collect();
    Ensemble::new(weights, members, &Tolerances::default()).expect("simplex weights are valid")
}

pub fn random_pure_ensemble<R: rand::Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> Ensemble<PureState> {
    let weights = random_weights(rng, n);
    let members = (0..n).map(|_| random_pure_with(rng, d)).collect();
    Ensemble::new(weights, members, &Tolerances::default()).expect("simplex weights are valid")
}

/// Random state of the block form `[[a, b, 0], [conj b, c, 0], [0, 0, e]]`,
/// full rank almost surely.
pub fn random_block_qutrit<R: rand::Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    loop {
        let w = random_weights(rng, 2);
        let block = random_state_with(rng, 2, 2);
        let mut m = DMatrix::zeros(3, 3);
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = block.entry(i, j) * w[0];
            }
        }
        m[(2, 2)] = C64::new(w[1], 0.0);
        let rho = DensityMatrix::from_trusted(m);
        let det = block.entry(0, 0).re * block.entry(1, 1).re - block.entry(0, 1).norm_sqr();
        if w[1] > 1e-3 && det * w[0] * w[0] > 1e-6 {
            return rho;
        }
    }
}

/// Structured zeros injected into random states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroPattern {
    None,
    /// Some diagonal entries (with their rows and columns) vanish.
    ZeroDiagonal,
    /// Entries beyond a random bandwidth vanish.
    Banded,
    /// Entries coupling different blocks of a random index partition vanish.
    OffDiagonalZeros,
}

impl ZeroPattern {
    pub const ALL: [ZeroPattern; 4] = [
        ZeroPattern::None,
        ZeroPattern::ZeroDiagonal,
        ZeroPattern::Banded,
        ZeroPattern::OffDiagonalZeros,
    ];
}

/// Random state of random rank with the requested zero structure.
///
/// Masks are applied as Schur products with a positive semidefinite,
/// unit-diagonal matrix, which preserves positivity and the diagonal.
pub fn random_patterned_state<R: rand::Rng + ?Sized>(rng: &mut R, d: usize, pattern: ZeroPattern) -> DensityMatrix {
    use rand::seq::SliceRandom;
    match pattern {
        ZeroPattern::None => {
            let rank = rng.gen_range(1..=d);
            random_state_with(rng, d, rank)
        }
        ZeroPattern::ZeroDiagonal => {
            let zeros = rng.gen_range(1..d.max(2)).min(d - 1);
            let mut idx: Vec<usize> = (0..d).collect();
            idx.shuffle(rng);
            let mut kept: Vec<usize> = idx[zeros..].to_vec();
            kept.sort_unstable();
            let k = kept.len();
            let rank = rng.gen_range(1..=k);
            let small = random_state_with(rng, k, rank);
            let mut m = DMatrix::zeros(d, d);
            for (a, &i) in kept.iter().enumerate() {
                for (b, &j) in kept.iter().enumerate() {
                    m[(i, j)] = small.entry(a, b);
                }
            }
            DensityMatrix::from_trusted(m)
        }
        ZeroPattern::Banded => {
            let width = rng.gen_range(0..d.max(2) - 1);
            let b = DMatrix::from_fn(d, d, |i, j| {
                if i >= j && i - j <= width {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .map(|z| z * gaussian_complex(rng));
            schur_mask(rng, d, unit_diagonal(&b * b.adjoint()))
        }
        ZeroPattern::OffDiagonalZeros => {
            let groups = rng.gen_range(2..=d.max(2));
            let label: Vec<usize> = (0..d).map(|_| rng.gen_range(0..groups)).collect();
            let mask = DMatrix::from_fn(d, d, |i, j| {
                C64::new(if label[i] == label[j] { 1.0 } else { 0.0 }, 0.0)
            });
            schur_mask(rng, d, mask)
        }
    }
}

fn unit_diagonal(mut m: DMatrix<C64>) -> DMatrix<C64> {
    let d = m.nrows();
    let s: Vec<f64> = (0..d)
        .map(|k| {
            let x = m[(k, k)].re;
            if x > 0.0 { 1.0 / x.sqrt() } else { 0.0 }
        })
        .collect();
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] *= s[i] * s[j];
        }
    }
    // keep structural zeros and an exact unit diagonal
    for k in 0..d {
        m[(k, k)] = C64::new(1.0, 0.0);
    }
    m
}

fn schur_mask<R: rand::Rng + ?Sized>(rng: &mut R, d: usize, mask: DMatrix<C64>) -> DensityMatrix {
    let rank = rng.gen_range(1..=d);
    let rho = random_state_with(rng, d, rank);
    DensityMatrix::from_trusted(rho.matrix().component_mul(&mask))
}
