//! The classical solution of -y'' + 2 wp(z) y = B y built from sigma and
//! zeta, its distributional Green kernel, and the associated shift
//! expression with the symbolic infinity branch.

use num_complex::Complex64;

use crate::distribution::DistributionExpr;
use crate::elliptic::EllipticParams;
use crate::error::{Error, Result};

/// Parameters of the two-sided solution: the pullback eps with
/// wp(eps) = B, the two free amplitudes, and the lattice data.
#[derive(Debug, Clone)]
pub struct LameSolutionParams {
    pub eps: Complex64,
    pub k1: Complex64,
    pub k2: Complex64,
    pub elliptic: EllipticParams,
}

impl LameSolutionParams {
    /// Requires eps off-lattice so that wp(eps) is finite.
    pub fn new(
        eps: Complex64,
        k1: Complex64,
        k2: Complex64,
        elliptic: EllipticParams,
    ) -> Result<Self> {
        elliptic.wp(eps)?;
        Ok(LameSolutionParams { eps, k1, k2, elliptic })
    }

    /// wp(eps): the constant the kernel formulas divide by.
    pub fn wp_at_eps(&self) -> Result<Complex64> {
        self.elliptic.wp(self.eps)
    }

    /// The eigenvalue the constructed solution actually satisfies in
    /// -f'' + 2 wp f = B f, namely B = -wp(eps). (Both basis branches
    /// sigma(z +- eps)/sigma(z) exp(-+ z zeta(eps)) solve the equation
    /// with this B; see the addition-theorem identity
    /// f''/f = 2 wp(z) + wp(eps).)
    pub fn satisfied_eigenvalue(&self) -> Result<Complex64> {
        Ok(-self.elliptic.wp(self.eps)?)
    }
}

/// K1 sigma(z+eps)/sigma(z) exp(-z zeta(eps))
///   + K2 sigma(z-eps)/sigma(z) exp(z zeta(eps)).
pub fn lame_solution(z: Complex64, p: &LameSolutionParams) -> Result<Complex64> {
    let el = &p.elliptic;
    let sigma_z = el.sigma(z)?;
    if sigma_z.norm() == 0.0 {
        return Err(Error::LatticeProximity { distance: 0.0, tolerance: 0.0 });
    }
    let zeta_eps = el.zeta(p.eps)?;
    let plus = el.sigma(z + p.eps)? / sigma_z * (-z * zeta_eps).exp();
    let minus = el.sigma(z - p.eps)? / sigma_z * (z * zeta_eps).exp();
    Ok(p.k1 * plus + p.k2 * minus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfPlane {
    Upper,
    Lower,
}

fn half_plane_of(w: Complex64) -> Result<HalfPlane> {
    if w.im > 0.0 {
        Ok(HalfPlane::Upper)
    } else if w.im < 0.0 {
        Ok(HalfPlane::Lower)
    } else {
        Err(Error::BoundaryHalfPlane)
    }
}

/// Green kernel of -G'' + 2 wp G = kappa delta: a delta plus delta-prime
/// combination scaled by 1/wp(eps). The delta-prime coefficient is the
/// solution evaluated at the kernel's own location, the product rule
/// having already been absorbed; the lower half-plane mirrors the
/// locations to -w.
pub fn green_kernel(
    w: Complex64,
    p: &LameSolutionParams,
    kappa: Complex64,
) -> Result<DistributionExpr> {
    let b = p.wp_at_eps()?;
    if b.norm() < 1e-12 {
        return Err(Error::ZeroEigenvalue);
    }
    let location = match half_plane_of(w)? {
        HalfPlane::Upper => w,
        HalfPlane::Lower => -w,
    };
    let f_at = lame_solution(location, p)?;
    let expr = DistributionExpr::delta(location, kappa / b)
        .add(&DistributionExpr::delta_prime(location, f_at / b));
    Ok(expr)
}

/// Shift expression value: symbolic infinity in the upper half-plane,
/// a distribution expression in the lower one.
#[derive(Debug, Clone)]
pub enum SsfExpr {
    Infinite,
    Expr(DistributionExpr),
}

#[derive(Debug, Clone)]
pub struct LameSsfValue {
    pub halfplane: HalfPlane,
    pub value: SsfExpr,
}

/// Spectral shift expression at real lambda != 0:
/// upper half-plane carries the delta(0) = infinity branch; the lower
/// half-plane gives (2 kappa delta_w + f(w) delta'(z-w)) H(lambda) / 4,
/// the arctangent limit having contributed the Heaviside factor.
pub fn lame_ssf(
    lambda: f64,
    w: Complex64,
    p: &LameSolutionParams,
    kappa: Complex64,
) -> Result<LameSsfValue> {
    if lambda == 0.0 {
        return Err(Error::UndefinedAtZero);
    }
    match half_plane_of(w)? {
        HalfPlane::Upper => Ok(LameSsfValue { halfplane: HalfPlane::Upper, value: SsfExpr::Infinite }),
        HalfPlane::Lower => {
            let heaviside = if lambda > 0.0 { 1.0 } else { 0.0 };
            let f_at = lame_solution(w, p)?;
            let expr = DistributionExpr::delta(w, 2.0 * kappa)
                .add(&DistributionExpr::delta_prime(w, f_at))
                .scale(Complex64::new(heaviside / 4.0, 0.0));
            Ok(LameSsfValue { halfplane: HalfPlane::Lower, value: SsfExpr::Expr(expr) })
        }
    }
}
