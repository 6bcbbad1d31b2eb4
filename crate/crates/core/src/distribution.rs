//! Formal distribution expressions with pairing semantics.
//!
//! A [`DistributionExpr`] is a coefficient structure, never a pointwise
//! object: delta and delta-prime terms carry (location, coefficient)
//! pairs, the Heaviside part is a single coefficient for H(x) on a
//! caller-supplied interval, and an optional smooth part is integrated
//! against the test function. The symbolic "delta(0) = infinity" branch
//! of the shift expressions lives in the Green-kernel module as an
//! explicit flag, not here as a number.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::gauss_legendre_on;

pub type SmoothFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

#[derive(Clone, Default)]
pub struct DistributionExpr {
    /// (location w, coefficient c) for c * delta(z - w).
    pub delta_terms: Vec<(Complex64, Complex64)>,
    /// (location w, coefficient c) for c * delta'(z - w).
    pub delta_prime_terms: Vec<(Complex64, Complex64)>,
    /// Coefficient of the Heaviside step H(x).
    pub heaviside_coeff: Complex64,
    /// Optional smooth density integrated against the test function.
    pub smooth: Option<SmoothFn>,
}

impl std::fmt::Debug for DistributionExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DistributionExpr")
            .field("delta_terms", &self.delta_terms)
            .field("delta_prime_terms", &self.delta_prime_terms)
            .field("heaviside_coeff", &self.heaviside_coeff)
            .field("smooth", &self.smooth.as_ref().map(|_| "<fn>"))
            .finish()
    }
}

impl DistributionExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn delta(location: Complex64, coeff: Complex64) -> Self {
        DistributionExpr { delta_terms: vec![(location, coeff)], ..Default::default() }
    }

    pub fn delta_prime(location: Complex64, coeff: Complex64) -> Self {
        DistributionExpr { delta_prime_terms: vec![(location, coeff)], ..Default::default() }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let smooth = self.smooth.clone().map(|f| {
            let f: SmoothFn = Arc::new(move |z| f(z) * c);
            f
        });
        DistributionExpr {
            delta_terms: self.delta_terms.iter().map(|&(w, a)| (w, a * c)).collect(),
            delta_prime_terms: self
                .delta_prime_terms
                .iter()
                .map(|&(w, a)| (w, a * c))
                .collect(),
            heaviside_coeff: self.heaviside_coeff * c,
            smooth,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let smooth = match (&self.smooth, &other.smooth) {
            (None, None) => None,
            (Some(f), None) => Some(f.clone()),
            (None, Some(g)) => Some(g.clone()),
            (Some(f), Some(g)) => {
                let (f, g) = (f.clone(), g.clone());
                let h: SmoothFn = Arc::new(move |z| f(z) + g(z));
                Some(h)
            }
        };
        DistributionExpr {
            delta_terms: self
                .delta_terms
                .iter()
                .chain(&other.delta_terms)
                .cloned()
                .collect(),
            delta_prime_terms: self
                .delta_prime_terms
                .iter()
                .chain(&other.delta_prime_terms)
                .cloned()
                .collect(),
            heaviside_coeff: self.heaviside_coeff + other.heaviside_coeff,
            smooth,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn is_structurally_zero(&self, tol: f64) -> bool {
        self.delta_terms.iter().all(|(_, c)| c.norm() <= tol)
            && self.delta_prime_terms.iter().all(|(_, c)| c.norm() <= tol)
            && self.heaviside_coeff.norm() <= tol
            && self.smooth.is_none()
    }
}

/// Pair a distribution with a test function: sum of c phi(w) over delta
/// terms, minus c phi'(w) over delta-prime terms, plus the Heaviside and
/// smooth contributions integrated by a 64-node Gauss rule on the
/// caller's interval.
///
/// The (phi, phi') pair is spot-checked for consistency by central
/// differences at up to three points before any value is produced.
pub fn pair<F, G>(
    d: &DistributionExpr,
    phi: F,
    phi_prime: G,
    interval: (f64, f64),
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
{
    // Consistency spot check.
    let mut check_points: Vec<Complex64> = Vec::new();
    for (w, _) in d.delta_terms.iter().chain(&d.delta_prime_terms) {
        if check_points.len() < 2 {
            check_points.push(*w);
        }
    }
    check_points.push(Complex64::new(0.5 * (interval.0 + interval.1), 0.0));
    let h = 1e-5;
    for &p in check_points.iter().take(3) {
        let fd = (phi(p + Complex64::new(h, 0.0)) - phi(p - Complex64::new(h, 0.0))) / (2.0 * h);
        let direct = phi_prime(p);
        let dev = (fd - direct).norm();
        if dev > 1e-6 * (1.0 + direct.norm()) {
            return Err(Error::InconsistentTestFunctions {
                point_re: p.re,
                point_im: p.im,
                deviation: dev,
            });
        }
    }

    let mut acc = Complex64::new(0.0, 0.0);
    for &(w, c) in &d.delta_terms {
        acc += c * phi(w);
    }
    for &(w, c) in &d.delta_prime_terms {
        acc -= c * phi_prime(w);
    }
    if d.heaviside_coeff.norm() > 0.0 {
        // H(x) restricted to the interval: integrate phi over [max(a,0), b].
        let a = interval.0.max(0.0);
        let b = interval.1;
        if b > a {
            let (nodes, weights) = gauss_legendre_on(64, a, b);
            let integral: Complex64 = nodes
                .iter()
                .zip(&weights)
                .map(|(&x, &w)| phi(Complex64::new(x, 0.0)) * w)
                .sum();
            acc += d.heaviside_coeff * integral;
        }
    }
    if let Some(smooth) = &d.smooth {
        let (nodes, weights) = gauss_legendre_on(64, interval.0, interval.1);
        let integral: Complex64 = nodes
            .iter()
            .zip(&weights)
            .map(|(&x, &w)| smooth(Complex64::new(x, 0.0)) * phi(Complex64::new(x, 0.0)) * w)
            .sum();
        acc += integral;
    }
    Ok(acc)
}

/// Coefficients of the composition rule
/// delta'(g(z)) = (1/|g'(w)|^2) { delta'(z-w) + (g''(w)/g'(w)) delta(z-w) },
/// together with the first-order scaling 1/|g'(w)| that governs
/// delta(g(z)) and produces the delta(2w) = delta(w)/2 specialization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaComposition {
    /// Applied to delta'(z - w): 1/|g'(w)|^2 (the 1/4 case at g' = 2).
    pub delta_prime_coeff: f64,
    /// Applied to delta(z - w): g''(w) / (g'(w) |g'(w)|^2).
    pub delta_coeff: Complex64,
    /// First-order scaling of delta(g(z)): 1/|g'(w)| (the 1/2 case at g' = 2).
    pub delta_scale_coeff: f64,
}

pub fn delta_compose(
    g_prime_at_w: Complex64,
    g_double_prime_at_w: Complex64,
) -> Result<DeltaComposition> {
    let gp = g_prime_at_w.norm();
    if gp < 1e-14 {
        return Err(Error::VanishingDerivative);
    }
    Ok(DeltaComposition {
        delta_prime_coeff: 1.0 / (gp * gp),
        delta_coeff: g_double_prime_at_w / (g_prime_at_w * gp * gp),
        delta_scale_coeff: 1.0 / gp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn delta_sifting() {
        let d = DistributionExpr::delta(c(0.3, 0.0), c(1.0, 0.0));
        let v = pair(&d, |z| z.exp(), |z| z.exp(), (-1.0, 1.0)).unwrap();
        assert!((v - c(0.3f64.exp(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn delta_prime_pairing_definition() {
        let d = DistributionExpr::delta_prime(c(0.0, 0.0), c(1.0, 0.0));
        let v = pair(&d, |z| z, |_| c(1.0, 0.0), (-1.0, 1.0)).unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn linear_combination() {
        // (2 delta_0 + 3 delta'_0) against x^2 + 1: 2*1 - 3*0 = 2.
        let d = DistributionExpr::delta(c(0.0, 0.0), c(2.0, 0.0))
            .add(&DistributionExpr::delta_prime(c(0.0, 0.0), c(3.0, 0.0)));
        let v = pair(&d, |z| z * z + 1.0, |z| 2.0 * z, (-1.0, 1.0)).unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn pairing_is_linear() {
        let mut rng = SplitMix64::new(87);
        let phi = |z: Complex64| (z * c(0.7, 0.1)).exp();
        let dphi = |z: Complex64| c(0.7, 0.1) * (z * c(0.7, 0.1)).exp();
        for _ in 0..10 {
            let d1 = DistributionExpr::delta(rng.complex(-1.0, 1.0), rng.complex(-1.0, 1.0));
            let d2 = DistributionExpr::delta_prime(rng.complex(-1.0, 1.0), rng.complex(-1.0, 1.0));
            let a = rng.complex(-1.0, 1.0);
            let b = rng.complex(-1.0, 1.0);
            let combined = d1.scale(a).add(&d2.scale(b));
            let lhs = pair(&combined, phi, dphi, (-1.0, 1.0)).unwrap();
            let rhs = a * pair(&d1, phi, dphi, (-1.0, 1.0)).unwrap()
                + b * pair(&d2, phi, dphi, (-1.0, 1.0)).unwrap();
            assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn heaviside_contribution() {
        // H(x) paired with exp over [-1, 1]: int_0^1 e^x dx = e - 1.
        let d = DistributionExpr {
            heaviside_coeff: c(1.0, 0.0),
            ..Default::default()
        };
        let v = pair(&d, |z| z.exp(), |z| z.exp(), (-1.0, 1.0)).unwrap();
        assert!((v - c(1f64.exp() - 1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn smooth_part_contribution() {
        let d = DistributionExpr {
            smooth: Some(Arc::new(|z: Complex64| z) as SmoothFn),
            ..Default::default()
        };
        // int_0^1 x * x dx = 1/3.
        let v = pair(&d, |z| z, |_| c(1.0, 0.0), (0.0, 1.0)).unwrap();
        assert!((v - c(1.0 / 3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn inconsistent_test_pair_rejected() {
        let d = DistributionExpr::delta_prime(c(0.0, 0.0), c(1.0, 0.0));
        let bad = pair(&d, |z| z * z, |_| c(5.0, 0.0), (-1.0, 1.0));
        assert!(matches!(bad, Err(Error::InconsistentTestFunctions { .. })));
    }

    #[test]
    fn compose_doubling() {
        // g(z) = 2z: delta'(2w) = delta'(z-w)/4, delta(2w) = delta(w)/2.
        let comp = delta_compose(c(2.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((comp.delta_prime_coeff - 0.25).abs() == 0.0);
        assert!(comp.delta_coeff.norm() == 0.0);
        assert!((comp.delta_scale_coeff - 0.5).abs() == 0.0);
    }

    #[test]
    fn compose_identity() {
        let comp = delta_compose(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((comp.delta_prime_coeff - 1.0).abs() == 0.0);
        assert!(comp.delta_coeff.norm() == 0.0);
        assert!((comp.delta_scale_coeff - 1.0).abs() == 0.0);
    }

    #[test]
    fn compose_square_at_one() {
        // g(z) = z^2 at w = 1: g' = 2, g'' = 2.
        let comp = delta_compose(c(2.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!((comp.delta_prime_coeff - 0.25).abs() == 0.0);
        assert!((comp.delta_coeff - c(0.25, 0.0)).norm() == 0.0);
        assert!((comp.delta_scale_coeff - 0.5).abs() == 0.0);
    }

    #[test]
    fn compose_rejects_critical_point() {
        assert!(matches!(
            delta_compose(c(0.0, 0.0), c(1.0, 0.0)),
            Err(Error::VanishingDerivative)
        ));
    }
}
