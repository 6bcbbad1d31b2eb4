//! Deterministic sample factories for tests and randomized diagnostics.
//!
//! Everything here is seeded through [`SplitMix64`], so diagnostic output
//! is byte-identical across runs and platforms.

use num_complex::Complex64;

use crate::krein::OperatorPair;
use crate::matrix::CMatrix;
use crate::rng::SplitMix64;

/// Random Hermitian matrix with entries of the given scale.
pub fn random_hermitian(rng: &mut SplitMix64, n: usize, scale: f64) -> CMatrix {
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rng.range(-scale, scale), 0.0);
        for j in (i + 1)..n {
            let v = rng.complex(-scale, scale);
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    m
}

/// Random complex matrix with spectral radius below the given bound
/// (enforced through the max-row-sum norm).
pub fn random_bounded(rng: &mut SplitMix64, n: usize, radius_bound: f64) -> CMatrix {
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = rng.complex(-1.0, 1.0);
        }
    }
    let row_norm = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    m.scale(Complex64::new(radius_bound / row_norm.max(1e-12) * 0.9, 0.0))
}

/// Random unit vector.
fn random_unit(rng: &mut SplitMix64, n: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n).map(|_| rng.complex(-1.0, 1.0)).collect();
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
    v
}

/// Rank-one projector gamma * phi phi^H added to a random base matrix.
pub fn random_rank_one_pair(rng: &mut SplitMix64, n: usize, gamma: f64) -> OperatorPair {
    let h0 = random_hermitian(rng, n, 1.5);
    let phi = random_unit(rng, n);
    let mut v = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            v[(i, j)] = phi[i] * phi[j].conj() * gamma;
        }
    }
    OperatorPair::new(h0.clone(), h0.add(&v)).expect("constructed pair is Hermitian")
}

/// Hermitian pair with a rank-`rank` perturbation built from orthogonal
/// directions with eigenvalues bounded away from zero.
pub fn random_pair(rng: &mut SplitMix64, n: usize, rank: usize) -> OperatorPair {
    assert!(rank <= n);
    let h0 = random_hermitian(rng, n, 1.5);
    let mut v = CMatrix::zeros(n);
    let mut dirs: Vec<Vec<Complex64>> = Vec::new();
    while dirs.len() < rank {
        let mut cand = random_unit(rng, n);
        // Gram-Schmidt against what we already have.
        for d in &dirs {
            let overlap: Complex64 = d.iter().zip(&cand).map(|(a, b)| a.conj() * b).sum();
            for (ci, di) in cand.iter_mut().zip(d) {
                *ci -= overlap * di;
            }
        }
        let norm = cand.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        for x in cand.iter_mut() {
            *x /= norm;
        }
        dirs.push(cand);
    }
    for dir in &dirs {
        let sign = if rng.next_f64() < 0.5 { -1.0 } else { 1.0 };
        let gamma = sign * rng.range(0.3, 1.2);
        for i in 0..n {
            for j in 0..n {
                v[(i, j)] += dir[i] * dir[j].conj() * gamma;
            }
        }
    }
    OperatorPair::new(h0.clone(), h0.add(&v)).expect("constructed pair is Hermitian")
}

/// Uniform grid over [lo, hi] with points nudged away from the pair's
/// eigenvalues by at least `margin` (and never less than the module's
/// 1e-6 skip tolerance).
pub fn grid_avoiding_eigenvalues(
    lo: f64,
    hi: f64,
    n: usize,
    pair: &OperatorPair,
    margin: f64,
) -> Vec<f64> {
    let eigs: Vec<f64> = pair
        .h0_eigenvalues()
        .iter()
        .chain(pair.h_eigenvalues().iter())
        .cloned()
        .collect();
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|k| {
            let mut x = lo + step * k as f64;
            for _ in 0..8 {
                match eigs.iter().find(|&&e| (e - x).abs() < margin) {
                    Some(&e) => {
                        // Step to the far side of the offending eigenvalue.
                        x = if x >= e { e + margin } else { e - margin };
                    }
                    None => break,
                }
            }
            x
        })
        .collect()
}
