//! Spectral-shift machinery for finite self-adjoint pairs: eigenvalue
//! counting, perturbation determinants with the argument-limit inversion,
//! the trace formula, Dunford-Taylor functional calculus, and the
//! Hilbert-Schmidt / sphere-measure utilities.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigen, min_pivot_rel, solve, CMatrix};
use crate::quad::{gamma_lanczos, gauss_legendre_on, trapezoid_on};

/// Tolerance below which a grid point counts as sitting on an eigenvalue
/// for the argument-limit method (skipped and interpolated).
pub const EIGENVALUE_SKIP_TOL: f64 = 1e-6;

/// A pair of Hermitian matrices and their difference V = H - H0, with
/// eigendecompositions computed once up front.
#[derive(Debug, Clone)]
pub struct OperatorPair {
    pub h0: CMatrix,
    pub h: CMatrix,
    pub v: CMatrix,
    pub rank_v: usize,
    h0_eigs: Vec<f64>,
    h_eigs: Vec<f64>,
    v_eigs: Vec<f64>,
}

impl OperatorPair {
    pub fn new(h0: CMatrix, h: CMatrix) -> Result<Self> {
        if h0.dim() != h.dim() {
            return Err(Error::SizeMismatch { left: h0.dim(), right: h.dim() });
        }
        for m in [&h0, &h] {
            let defect = m.hermitian_defect();
            if defect > 1e-12 * (1.0 + m.max_abs()) {
                return Err(Error::NotHermitian { defect });
            }
        }
        let v = h.sub(&h0);
        let (h0_eigs, _) = hermitian_eigen(&h0)?;
        let (h_eigs, _) = hermitian_eigen(&h)?;
        let (v_eigs, _) = hermitian_eigen(&v)?;
        let v_norm = v_eigs.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let rank_v = v_eigs.iter().filter(|e| e.abs() > 1e-10 * v_norm).count();
        let rank_v = if v_norm == 0.0 { 0 } else { rank_v };
        Ok(OperatorPair { h0, h, v, rank_v, h0_eigs, h_eigs, v_eigs })
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }

    pub fn h0_eigenvalues(&self) -> &[f64] {
        &self.h0_eigs
    }

    pub fn h_eigenvalues(&self) -> &[f64] {
        &self.h_eigs
    }

    pub fn v_eigenvalues(&self) -> &[f64] {
        &self.v_eigs
    }

    pub fn trace_v(&self) -> f64 {
        self.v.trace().re
    }

    /// Trace norm = sum of singular values; for Hermitian V these are the
    /// absolute eigenvalues.
    pub fn trace_norm_v(&self) -> f64 {
        self.v_eigs.iter().map(|e| e.abs()).sum()
    }

    fn spectrum_bounds(&self) -> (f64, f64) {
        let lo = self.h0_eigs[0].min(self.h_eigs[0]);
        let hi = self.h0_eigs[self.h0_eigs.len() - 1].max(self.h_eigs[self.h_eigs.len() - 1]);
        (lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsfMethod {
    Counting,
    ArgLimit,
}

/// Sampled spectral shift function.
#[derive(Debug, Clone)]
pub struct SsfSample {
    pub grid: Vec<f64>,
    pub xi: Vec<f64>,
    pub method: SsfMethod,
}

impl SsfSample {
    /// Trapezoid integral on the sample grid. For counting samples the
    /// grid contains every jump twice (left and right value), so this is
    /// the exact interval sum.
    pub fn trapezoid_integral(&self) -> f64 {
        let mut acc = 0.0;
        for k in 1..self.grid.len() {
            acc += 0.5 * (self.xi[k] + self.xi[k - 1]) * (self.grid[k] - self.grid[k - 1]);
        }
        acc
    }
}

/// Counting value xi(lambda) = #{eig H0 <= lambda} - #{eig H <= lambda}.
pub fn counting_xi_at(pair: &OperatorPair, lambda: f64) -> i64 {
    let n0 = pair.h0_eigs.iter().filter(|&&e| e <= lambda).count() as i64;
    let n1 = pair.h_eigs.iter().filter(|&&e| e <= lambda).count() as i64;
    n0 - n1
}

fn counting_xi_left(pair: &OperatorPair, lambda: f64) -> i64 {
    let n0 = pair.h0_eigs.iter().filter(|&&e| e < lambda).count() as i64;
    let n1 = pair.h_eigs.iter().filter(|&&e| e < lambda).count() as i64;
    n0 - n1
}

/// Constancy intervals of the counting shift function between consecutive
/// spectral breakpoints: (start, end, xi on the open interval). Outside
/// the joint spectrum xi vanishes, so the finite list is exhaustive.
pub fn counting_intervals(pair: &OperatorPair) -> Vec<(f64, f64, i64)> {
    let mut points: Vec<f64> = pair
        .h0_eigs
        .iter()
        .chain(pair.h_eigs.iter())
        .cloned()
        .collect();
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup_by(|a, b| a == b);
    let mut out = Vec::new();
    for k in 0..points.len().saturating_sub(1) {
        let (a, b) = (points[k], points[k + 1]);
        out.push((a, b, counting_xi_at(pair, 0.5 * (a + b))));
    }
    out
}

/// Sample the counting shift function. The returned grid is the caller's
/// grid merged with every spectral breakpoint inserted twice (left-limit
/// value then jump value), so the trapezoid rule integrates the step
/// function exactly.
pub fn counting_ssf(pair: &OperatorPair, grid: &[f64]) -> Result<SsfSample> {
    if grid.len() < 2 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("grid must be sorted strictly ascending".into()));
    }
    let (lo, hi) = pair.spectrum_bounds();
    if grid[0] > lo || *grid.last().unwrap() < hi {
        return Err(Error::GridDoesNotCoverSpectrum);
    }
    let mut breaks: Vec<f64> = pair
        .h0_eigs
        .iter()
        .chain(pair.h_eigs.iter())
        .cloned()
        .collect();
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup_by(|a, b| a == b);

    // (lambda, is_left_copy) merged and sorted; left copies sort first.
    let mut merged: Vec<(f64, bool)> = grid.iter().map(|&g| (g, false)).collect();
    for &b in &breaks {
        merged.push((b, true));
        merged.push((b, false));
    }
    merged.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(b.1.cmp(&a.1))
    });
    merged.dedup();

    let mut out_grid = Vec::with_capacity(merged.len());
    let mut out_xi = Vec::with_capacity(merged.len());
    for (lambda, is_left) in merged {
        out_grid.push(lambda);
        let v = if is_left {
            counting_xi_left(pair, lambda)
        } else {
            counting_xi_at(pair, lambda)
        };
        out_xi.push(v as f64);
    }
    Ok(SsfSample { grid: out_grid, xi: out_xi, method: SsfMethod::Counting })
}

/// Perturbation determinant det((H - z)(H0 - z)^{-1}) through the
/// eigenvalue products; requires Im z != 0.
pub fn perturbation_determinant(pair: &OperatorPair, z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 {
        return Err(Error::RealSpectralParameter);
    }
    Ok(det_ratio(pair, z))
}

fn det_ratio(pair: &OperatorPair, z: Complex64) -> Complex64 {
    let mut val = Complex64::new(1.0, 0.0);
    for (&h, &h0) in pair.h_eigs.iter().zip(&pair.h0_eigs) {
        val *= (Complex64::new(h, 0.0) - z) / (Complex64::new(h0, 0.0) - z);
    }
    val
}

fn wrap_to_pi(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut y = x % two_pi;
    if y > std::f64::consts::PI {
        y -= two_pi;
    } else if y <= -std::f64::consts::PI {
        y += two_pi;
    }
    y
}

/// Continuous phase of the determinant along the segment, resolved by
/// adaptive bisection.
///
/// A wrapped step larger than pi/2 always forces a split. A small
/// wrapped step is only trusted once the segment is either clear of
/// eigenvalues or narrower than eps/(4 n): below that width the true
/// phase change is at most width * n/eps <= 1/4 rad per segment, so a
/// whole 2 pi turn (two jumps hiding between neighboring samples) can
/// no longer alias to an innocent-looking step.
#[allow(clippy::too_many_arguments)]
fn unwind_segment(
    pair: &OperatorPair,
    eigs: &[f64],
    eps: f64,
    a: f64,
    phase_a: f64,
    principal_a: f64,
    b: f64,
    depth: usize,
) -> Result<f64> {
    let principal_b = det_ratio(pair, Complex64::new(b, eps)).arg();
    let step = wrap_to_pi(principal_b - principal_a);
    let width = b - a;
    let fine_enough = width <= eps / (4.0 * eigs.len().max(1) as f64);
    let crowded = !fine_enough
        && eigs
            .iter()
            .any(|&e| e > a - width && e < b + width);
    if step.abs() <= std::f64::consts::FRAC_PI_2 && !crowded {
        return Ok(phase_a + step);
    }
    if depth >= 48 {
        return Err(Error::PhaseUnwindAmbiguous { lambda: b, jump: step });
    }
    let mid = 0.5 * (a + b);
    let principal_mid = det_ratio(pair, Complex64::new(mid, eps)).arg();
    let phase_mid = unwind_segment(pair, eigs, eps, a, phase_a, principal_a, mid, depth + 1)?;
    unwind_segment(pair, eigs, eps, mid, phase_mid, principal_mid, b, depth + 1)
}

fn unwound_phases(pair: &OperatorPair, grid: &[f64], eps: f64) -> Result<Vec<f64>> {
    let eigs: Vec<f64> = pair
        .h0_eigs
        .iter()
        .chain(pair.h_eigs.iter())
        .cloned()
        .collect();
    let mut phases = Vec::with_capacity(grid.len());
    let mut principal = det_ratio(pair, Complex64::new(grid[0], eps)).arg();
    let mut phase = principal;
    phases.push(phase);
    for k in 1..grid.len() {
        phase = unwind_segment(pair, &eigs, eps, grid[k - 1], phase, principal, grid[k], 0)?;
        principal = det_ratio(pair, Complex64::new(grid[k], eps)).arg();
        phases.push(phase);
    }
    Ok(phases)
}

/// Neville extrapolation of (eps_i, value_i) to eps = 0.
fn extrapolate_to_zero(eps: &[f64], values: &[f64]) -> f64 {
    let n = eps.len();
    let mut p = values.to_vec();
    for m in 1..n {
        for i in 0..(n - m) {
            p[i] = (eps[i + m] * p[i] - eps[i] * p[i + 1]) / (eps[i + m] - eps[i]);
        }
    }
    p[0]
}

/// Argument-limit shift function: xi(lambda) = (1/pi) lim arg D(lambda + i eps),
/// with the phase tracked continuously in lambda for each rung of the
/// epsilon ladder and the limit taken by Richardson extrapolation.
///
/// Grid points within 1e-6 of an eigenvalue are skipped and interpolated
/// from their neighbors. The sign convention matches the counting
/// function (calibrated on 1x1 pairs in the tests).
pub fn ssf_via_arg(pair: &OperatorPair, grid: &[f64], eps_ladder: &[f64]) -> Result<SsfSample> {
    if grid.len() < 2 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("grid must be sorted strictly ascending".into()));
    }
    if eps_ladder.is_empty()
        || eps_ladder.iter().any(|&e| e <= 0.0)
        || eps_ladder.windows(2).any(|w| w[0] <= w[1])
    {
        return Err(Error::Precondition(
            "eps ladder must be strictly descending positive".into(),
        ));
    }
    let mut per_rung: Vec<Vec<f64>> = Vec::with_capacity(eps_ladder.len());
    for &eps in eps_ladder {
        per_rung.push(unwound_phases(pair, grid, eps)?);
    }
    let near_eigenvalue = |lambda: f64| {
        pair.h0_eigs
            .iter()
            .chain(pair.h_eigs.iter())
            .any(|&e| (e - lambda).abs() < EIGENVALUE_SKIP_TOL)
    };
    let pi = std::f64::consts::PI;
    let mut xi: Vec<Option<f64>> = Vec::with_capacity(grid.len());
    for (k, &lambda) in grid.iter().enumerate() {
        if near_eigenvalue(lambda) {
            xi.push(None);
            continue;
        }
        let vals: Vec<f64> = per_rung.iter().map(|rung| rung[k] / pi).collect();
        xi.push(Some(extrapolate_to_zero(eps_ladder, &vals)));
    }
    if xi.iter().all(|v| v.is_none()) {
        return Err(Error::Precondition(
            "every grid point sits on an eigenvalue".into(),
        ));
    }
    // Fill skipped points by linear interpolation between known neighbors.
    let filled: Vec<f64> = (0..grid.len())
        .map(|k| {
            if let Some(v) = xi[k] {
                return v;
            }
            let left = (0..k).rev().find(|&i| xi[i].is_some());
            let right = ((k + 1)..grid.len()).find(|&i| xi[i].is_some());
            match (left, right) {
                (Some(i), Some(j)) => {
                    let t = (grid[k] - grid[i]) / (grid[j] - grid[i]);
                    xi[i].unwrap() * (1.0 - t) + xi[j].unwrap() * t
                }
                (Some(i), None) => xi[i].unwrap(),
                (None, Some(j)) => xi[j].unwrap(),
                (None, None) => 0.0,
            }
        })
        .collect();
    Ok(SsfSample { grid: grid.to_vec(), xi: filled, method: SsfMethod::ArgLimit })
}

/// Both sides of the trace formula for a real-coefficient polynomial f:
/// Tr(f(H) - f(H0)) against the exact interval sum of f' xi.
#[derive(Debug, Clone, Copy)]
pub struct TraceFormulaCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
}

pub fn trace_formula_check(pair: &OperatorPair, f_coeffs: &[f64]) -> Result<TraceFormulaCheck> {
    if f_coeffs.len() > 9 {
        return Err(Error::Precondition("polynomial degree must be <= 8".into()));
    }
    let f = |x: f64| {
        let mut acc = 0.0;
        for &c in f_coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    let lhs: f64 = pair.h_eigs.iter().map(|&e| f(e)).sum::<f64>()
        - pair.h0_eigs.iter().map(|&e| f(e)).sum::<f64>();
    // int f' xi = sum over constancy intervals of xi * (f(b) - f(a)).
    let rhs: f64 = counting_intervals(pair)
        .iter()
        .map(|&(a, b, xi)| xi as f64 * (f(b) - f(a)))
        .sum();
    Ok(TraceFormulaCheck { lhs, rhs, diff: lhs - rhs })
}

/// Exact interval sums for the L1 bound: (int |xi|, trace norm of V).
pub fn ssf_l1_bound_check(pair: &OperatorPair) -> (f64, f64) {
    let l1: f64 = counting_intervals(pair)
        .iter()
        .map(|&(a, b, xi)| (xi.abs() as f64) * (b - a))
        .sum();
    (l1, pair.trace_norm_v())
}

/// Holomorphic functional calculus by the contour integral
/// (1/2 pi i) oint f(lambda) (lambda - M)^{-1} d lambda on a circle,
/// discretized by the trapezoid rule on 256 equispaced nodes.
pub fn dunford_taylor<F>(f: F, m: &CMatrix, center: Complex64, radius: f64) -> Result<CMatrix>
where
    F: Fn(Complex64) -> Complex64,
{
    let n = m.dim();
    let nodes = 256usize;
    let mut acc = CMatrix::zeros(n);
    for k in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / nodes as f64;
        let phase = Complex64::from_polar(1.0, theta);
        let lambda = center + phase * radius;
        let mut shifted = m.scale(Complex64::new(-1.0, 0.0));
        for i in 0..n {
            shifted[(i, i)] += lambda;
        }
        if min_pivot_rel(&shifted) < 1e-10 {
            return Err(Error::EigenvalueOnContour { min_distance: min_pivot_rel(&shifted) });
        }
        // Column-by-column resolvent applied to the identity.
        let fval = f(lambda);
        for col in 0..n {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[col] = Complex64::new(1.0, 0.0);
            let x = solve(&shifted, &e)?;
            for row in 0..n {
                acc[(row, col)] += fval * phase * x[row];
            }
        }
    }
    Ok(acc.scale(Complex64::new(radius / nodes as f64, 0.0)))
}

/// Quadrature rule selector for kernel grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    GaussLegendre,
    Trapezoid,
}

/// Sampled kernel K(x, y) on a rectangle with product quadrature weights.
#[derive(Debug, Clone)]
pub struct KernelGrid {
    pub nodes_x: Vec<f64>,
    pub weights_x: Vec<f64>,
    pub nodes_y: Vec<f64>,
    pub weights_y: Vec<f64>,
    /// Row-major samples: values[i * nodes_y.len() + j] = K(x_i, y_j).
    pub values: Vec<Complex64>,
}

impl KernelGrid {
    pub fn sample<K>(
        kernel: K,
        x_range: (f64, f64),
        y_range: (f64, f64),
        nx: usize,
        ny: usize,
        rule: QuadratureRule,
    ) -> Self
    where
        K: Fn(f64, f64) -> Complex64,
    {
        let (nodes_x, weights_x) = match rule {
            QuadratureRule::GaussLegendre => gauss_legendre_on(nx, x_range.0, x_range.1),
            QuadratureRule::Trapezoid => trapezoid_on(nx, x_range.0, x_range.1),
        };
        let (nodes_y, weights_y) = match rule {
            QuadratureRule::GaussLegendre => gauss_legendre_on(ny, y_range.0, y_range.1),
            QuadratureRule::Trapezoid => trapezoid_on(ny, y_range.0, y_range.1),
        };
        let mut values = Vec::with_capacity(nx * ny);
        for &x in &nodes_x {
            for &y in &nodes_y {
                values.push(kernel(x, y));
            }
        }
        KernelGrid { nodes_x, weights_x, nodes_y, weights_y, values }
    }

    /// Product of the weight sums; equals the rectangle area.
    pub fn weight_sum(&self) -> f64 {
        let sx: f64 = self.weights_x.iter().sum();
        let sy: f64 = self.weights_y.iter().sum();
        sx * sy
    }
}

/// Discrete Hilbert-Schmidt norm squared: sum w_i w_j |K(x_i, y_j)|^2.
pub fn hs_norm_discrete(grid: &KernelGrid) -> f64 {
    let ny = grid.nodes_y.len();
    let mut acc = 0.0;
    for (i, &wx) in grid.weights_x.iter().enumerate() {
        for (j, &wy) in grid.weights_y.iter().enumerate() {
            acc += wx * wy * grid.values[i * ny + j].norm_sqr();
        }
    }
    acc
}

/// Surface area of the unit sphere S^{k-1} in R^k:
/// k pi^{k/2} / Gamma(1 + k/2).
pub fn sphere_surface_area(k: u32) -> f64 {
    assert!(k >= 1);
    let kf = k as f64;
    kf * std::f64::consts::PI.powf(kf / 2.0) / gamma_lanczos(1.0 + kf / 2.0)
}
