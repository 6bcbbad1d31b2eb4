//! The sl(2, C) generators on the polynomial spin module, the quantum
//! Euler top built from them, and the trace/determinant identities it
//! feeds. The module also hosts the non-asserting comparison between the
//! top's characteristic polynomial and the spectral polynomial.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{general_eigenvalues, matrix_exp, CMatrix};

pub use crate::matrix::charpoly;
use crate::poly::{lame_spectral_poly, poly_roots, ComplexPoly};

/// Half-integer spin stored as 2j, so j = 0, 1/2, 1, 3/2, ... are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Spin(pub u32);

impl Spin {
    /// Accepts only nonnegative half-integers.
    pub fn from_f64(j: f64) -> Result<Spin> {
        let two_j = 2.0 * j;
        if j < 0.0 || !two_j.is_finite() || (two_j - two_j.round()).abs() > 1e-9 {
            return Err(Error::InvalidSpin { value: j });
        }
        Ok(Spin(two_j.round() as u32))
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Module dimension 2j + 1.
    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }
}

/// The three generators as matrices on the monomial basis {1, w, ..., w^{2j}}.
///
/// Action on w^k: lowering w^k = k w^{k-1}; cartan w^k = (k - j) w^k;
/// raising w^k = (k - 2j) w^{k+1} (so the top monomial is annihilated and
/// the module closes).
#[derive(Debug, Clone)]
pub struct Sl2Generators {
    pub spin: Spin,
    pub raising: CMatrix,
    pub cartan: CMatrix,
    pub lowering: CMatrix,
}

/// Matrices of the generators for a given spin.
pub fn sl2_generators(spin: Spin) -> Sl2Generators {
    let dim = spin.dim();
    let j = spin.value();
    let mut raising = CMatrix::zeros(dim);
    let mut cartan = CMatrix::zeros(dim);
    let mut lowering = CMatrix::zeros(dim);
    for k in 0..dim {
        let kf = k as f64;
        cartan[(k, k)] = Complex64::new(kf - j, 0.0);
        if k + 1 < dim {
            raising[(k + 1, k)] = Complex64::new(kf - 2.0 * j, 0.0);
        }
        if k >= 1 {
            lowering[(k - 1, k)] = Complex64::new(kf, 0.0);
        }
    }
    Sl2Generators { spin, raising, cartan, lowering }
}

/// Quantum Euler top on the spin module:
/// 4 J+^2 - g2 J0^2 - (g3/2) J- J0 - ((3j-1)/4) g2 J0 - (3/16)(3j-1)^2 g2 J-.
#[derive(Debug, Clone)]
pub struct EulerTopMatrix {
    pub s: u32,
    pub spin: Spin,
    pub g2: Complex64,
    pub g3: Complex64,
    pub matrix: CMatrix,
}

/// Assemble the top term by term. The default spin used by callers is
/// j = s, which makes det(E - H) a degree-(2s+1) polynomial; the
/// alternative reading j = 3s/2 is accepted as well and surfaces a dimension mismatch in the
/// diagnostic rather than an error.
pub fn build_euler_top(s: u32, spin: Spin, g2: Complex64, g3: Complex64) -> EulerTopMatrix {
    let gens = sl2_generators(spin);
    let j = spin.value();
    let three_j_minus_1 = 3.0 * j - 1.0;
    let term1 = gens.raising.mul(&gens.raising).scale(Complex64::new(4.0, 0.0));
    let term2 = gens.cartan.mul(&gens.cartan).scale(-g2);
    let term3 = gens.lowering.mul(&gens.cartan).scale(-g3 / 2.0);
    let term4 = gens.cartan.scale(-g2 * (three_j_minus_1 / 4.0));
    let term5 = gens
        .lowering
        .scale(-g2 * (3.0 / 16.0 * three_j_minus_1 * three_j_minus_1));
    let matrix = term1.add(&term2).add(&term3).add(&term4).add(&term5);
    EulerTopMatrix { s, spin, g2, g3, matrix }
}

/// Convenience constructor with the dimension-consistent default j = s.
pub fn build_euler_top_default(s: u32, g2: Complex64, g3: Complex64) -> EulerTopMatrix {
    build_euler_top(s, Spin(2 * s), g2, g3)
}

/// Both sides of Tr(X) = ln det(exp(X)) and their difference reduced
/// modulo 2 pi i.
#[derive(Debug, Clone, Copy)]
pub struct TraceLogDet {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// |lhs - rhs| after reducing the imaginary part mod 2 pi.
    pub diff_mod_2pi: f64,
}

/// Check the trace/log-determinant identity: exponential by scaling and
/// squaring, determinant's logarithm through the eigenvalue product of
/// exp(X) (principal logs), comparison mod 2 pi i.
pub fn trace_log_det_check(m: &CMatrix) -> Result<TraceLogDet> {
    let n = m.dim();
    if n > 16 {
        return Err(Error::DimensionCap { dim: n, cap: 16 });
    }
    let lhs = m.trace();
    let em = matrix_exp(m);
    let eigs = general_eigenvalues(&em)?;
    let rhs: Complex64 = eigs.iter().map(|lam| lam.ln()).sum();
    let raw = lhs - rhs;
    let two_pi = 2.0 * std::f64::consts::PI;
    let im = raw.im - two_pi * (raw.im / two_pi).round();
    let diff_mod_2pi = Complex64::new(raw.re, im).norm();
    Ok(TraceLogDet { lhs, rhs, diff_mod_2pi })
}

/// Non-asserting comparison of det(E - H_s) against the spectral
/// polynomial: degrees, aligned coefficient gaps, and directed root-set
/// distances. Disagreements are findings for the report, never errors.
#[derive(Debug, Clone)]
pub struct SpectralPolyDiagnostic {
    pub s: u32,
    pub spin: Spin,
    pub g2: Complex64,
    pub g3: Complex64,
    pub matrix_poly: ComplexPoly,
    pub product_poly: ComplexPoly,
    pub matrix_degree: usize,
    pub product_degree: usize,
    pub degree_mismatch: bool,
    /// Per-position |difference| when the degrees agree.
    pub coeff_diffs: Option<Vec<f64>>,
    pub matrix_roots: Vec<Complex64>,
    pub product_roots: Vec<Complex64>,
    /// sup over matrix roots of the distance to the nearest product root.
    pub root_distance_forward: f64,
    /// sup over product roots of the distance to the nearest matrix root.
    pub root_distance_backward: f64,
}

pub fn spectral_poly_diagnostic(
    s: u32,
    spin: Spin,
    g2: Complex64,
    g3: Complex64,
) -> Result<SpectralPolyDiagnostic> {
    let top = build_euler_top(s, spin, g2, g3);
    let matrix_poly = charpoly(&top.matrix)?;
    let product_poly = lame_spectral_poly(s, g2);
    let matrix_degree = matrix_poly.degree();
    let product_degree = product_poly.degree();
    let degree_mismatch = matrix_degree != product_degree;
    let coeff_diffs = if degree_mismatch {
        None
    } else {
        Some(
            matrix_poly
                .coeffs()
                .iter()
                .zip(product_poly.coeffs())
                .map(|(a, b)| (a - b).norm())
                .collect(),
        )
    };
    let matrix_roots = poly_roots(&matrix_poly)?.roots;
    let product_roots = poly_roots(&product_poly)?.roots;
    let root_distance_forward = directed_distance(&matrix_roots, &product_roots);
    let root_distance_backward = directed_distance(&product_roots, &matrix_roots);
    Ok(SpectralPolyDiagnostic {
        s,
        spin,
        g2,
        g3,
        matrix_poly,
        product_poly,
        matrix_degree,
        product_degree,
        degree_mismatch,
        coeff_diffs,
        matrix_roots,
        product_roots,
        root_distance_forward,
        root_distance_backward,
    })
}

fn directed_distance(from: &[Complex64], to: &[Complex64]) -> f64 {
    from.iter()
        .map(|a| {
            to.iter()
                .map(|b| (a - b).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}
