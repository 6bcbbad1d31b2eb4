//! Dense complex polynomials, the all-roots simultaneous iteration, and
//! the Lame spectral polynomial with its band edges.

use num_complex::Complex64;

use crate::error::{Error, Result};

const STRIP_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 500;
const CLUSTER_TOL: f64 = 1e-6;

/// Dense polynomial with ascending-degree complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    /// Build from ascending-degree coefficients, stripping trailing
    /// near-zeros (tolerance 1e-14 relative to the largest coefficient).
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut coeffs = coeffs;
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        while coeffs.len() > 1 {
            let last = coeffs.last().unwrap().norm();
            if last <= STRIP_TOL * scale {
                coeffs.pop();
            } else {
                break;
            }
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        ComplexPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Ascending coefficients taken verbatim (no magnitude-based strip);
    /// for constructions that know their exact degree, like monic
    /// expansions, where a unit leading coefficient must survive even
    /// when inner coefficients are huge.
    pub(crate) fn from_coeffs_exact(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty());
        ComplexPoly { coeffs }
    }

    /// Monic polynomial with the given roots, expanded by convolution.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        ComplexPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> ComplexPoly {
        if self.coeffs.len() <= 1 {
            return ComplexPoly::new(vec![Complex64::new(0.0, 0.0)]);
        }
        ComplexPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Root set produced by the simultaneous iteration, with per-root
/// residuals and multiplicity counts for clustered roots.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
    /// Number of roots within 1e-6 of this one (1 = simple).
    pub multiplicity: Vec<usize>,
    pub sweeps: usize,
}

/// All roots at once by the Weierstrass/Durand-Kerner fixed-point scheme.
///
/// Deterministic start: points on a slightly-perturbed circle whose radius
/// is the Cauchy bound 1 + max|c_i/c_deg|, capped by the Fujiwara bound so
/// that badly scaled coefficients (large spectral polynomials) do not
/// start the iteration astronomically far from the roots. A root set is
/// accepted once every residual satisfies
/// |p(r)| < 1e-9 * max(1, |r|^deg) * max|coeff|; running out of sweeps
/// reports the residuals instead of failing silently.
pub fn poly_roots(p: &ComplexPoly) -> Result<RootSet> {
    let deg = p.degree();
    if deg < 1 {
        return Err(Error::PolynomialDegreeTooLow);
    }
    let lead = p.coeffs[deg];
    let cauchy = 1.0
        + p.coeffs[..deg]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max);
    let fujiwara = 2.0
        * (1..=deg)
            .map(|k| {
                let ratio = (p.coeffs[deg - k] / lead).norm();
                let ratio = if k == deg { ratio / 2.0 } else { ratio };
                ratio.powf(1.0 / k as f64)
            })
            .fold(0.0, f64::max);
    let radius = cauchy.min(fujiwara).max(1e-3);
    let mut zs: Vec<Complex64> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.5 / deg as f64;
            let r = radius * (1.0 + 1e-3 * (k as f64 + 1.0) / deg as f64);
            Complex64::from_polar(r, angle)
        })
        .collect();

    let scale = p.max_coeff_norm();
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut max_step = 0.0f64;
        for k in 0..deg {
            let zk = zs[k];
            let mut denom = lead;
            for (j, &zj) in zs.iter().enumerate() {
                if j != k {
                    denom *= zk - zj;
                }
            }
            if denom.norm() == 0.0 {
                // Coincident iterates: nudge and continue.
                zs[k] += Complex64::new(1e-8 * radius, 1e-8 * radius);
                continue;
            }
            let step = p.eval(zk) / denom;
            zs[k] = zk - step;
            max_step = max_step.max(step.norm() / (1.0 + zs[k].norm()));
        }
        if max_step < 1e-15 {
            break;
        }
    }

    let residuals: Vec<f64> = zs.iter().map(|&z| p.eval(z).norm()).collect();
    let accepted = zs.iter().zip(&residuals).all(|(&z, &res)| {
        res < 1e-9 * z.norm().powi(deg as i32).max(1.0) * scale
    });
    if !accepted {
        return Err(Error::RootFindingStalled { sweeps, residuals });
    }

    let multiplicity = (0..deg)
        .map(|k| {
            zs.iter()
                .filter(|&&z| (z - zs[k]).norm() < CLUSTER_TOL)
                .count()
        })
        .collect();
    Ok(RootSet { roots: zs, residuals, multiplicity, sweeps })
}

/// Band-edge energies: a positive gap count together with the 2s+1 zeros
/// of the spectral polynomial, sorted by real part.
#[derive(Debug, Clone)]
pub struct BandEdges {
    pub s: u32,
    pub edges: Vec<Complex64>,
    pub residuals: Vec<f64>,
    /// True when two edges sit closer than the clustering tolerance.
    pub clustered: bool,
}

/// Analytic zero of the j-th factor of the spectral polynomial.
pub fn band_edge_factor(j: u32, g2: Complex64) -> Complex64 {
    let jf = j as f64;
    g2 * (jf * (jf + 1.0) / 4.0) + Complex64::new(3.0 * jf * (3.0 * jf - 1.0) / 4.0, 0.0)
}

/// The degree-(2s+1) spectral polynomial, expanded from its factored
/// form prod_{j=0}^{2s} (E - j(j+1) g2/4 - 3j(3j-1)/4).
///
/// The factors carry no g3 dependence; that is taken as given here and
/// surfaced by the diagnostic comparison in the operator module.
pub fn lame_spectral_poly(s: u32, g2: Complex64) -> ComplexPoly {
    assert!(s >= 1, "gap count s must be >= 1");
    let roots: Vec<Complex64> = (0..=2 * s).map(|j| band_edge_factor(j, g2)).collect();
    ComplexPoly::from_roots(&roots)
}

/// Band edges of the s-gap operator: zeros of the spectral polynomial via
/// the simultaneous iteration, sorted by real part (then imaginary part).
pub fn band_edges(s: u32, g2: Complex64) -> Result<BandEdges> {
    let poly = lame_spectral_poly(s, g2);
    let set = poly_roots(&poly)?;
    let mut order: Vec<usize> = (0..set.roots.len()).collect();
    order.sort_by(|&i, &j| {
        set.roots[i]
            .re
            .partial_cmp(&set.roots[j].re)
            .unwrap()
            .then(set.roots[i].im.partial_cmp(&set.roots[j].im).unwrap())
    });
    let edges: Vec<Complex64> = order.iter().map(|&i| set.roots[i]).collect();
    let residuals: Vec<f64> = order.iter().map(|&i| set.residuals[i]).collect();
    let clustered = set.multiplicity.iter().any(|&m| m > 1);
    Ok(BandEdges { s, edges, residuals, clustered })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn match_root_sets(a: &[Complex64], b: &[Complex64]) -> f64 {
        // Greedy nearest matching; adequate for well-separated test roots.
        let mut used = vec![false; b.len()];
        let mut worst = 0.0f64;
        for &ra in a {
            let mut best = f64::INFINITY;
            let mut best_j = 0;
            for (j, &rb) in b.iter().enumerate() {
                if !used[j] && (ra - rb).norm() < best {
                    best = (ra - rb).norm();
                    best_j = j;
                }
            }
            used[best_j] = true;
            worst = worst.max(best);
        }
        worst
    }

    #[test]
    fn cube_roots_of_unity() {
        let p = ComplexPoly::from_real(&[-1.0, 0.0, 0.0, 1.0]);
        let set = poly_roots(&p).unwrap();
        let expect = [
            c(1.0, 0.0),
            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0),
            Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI / 3.0),
        ];
        assert!(match_root_sets(&expect, &set.roots) < 1e-10);
    }

    #[test]
    fn double_root_detected() {
        // (z - 2)^2 = 4 - 4z + z^2
        let p = ComplexPoly::from_real(&[4.0, -4.0, 1.0]);
        let set = poly_roots(&p).unwrap();
        for r in &set.roots {
            assert!((r - c(2.0, 0.0)).norm() < 1e-6, "root {r}");
        }
        assert!(set.multiplicity.iter().all(|&m| m == 2));
    }

    #[test]
    fn planted_degree_seven_roots_recovered() {
        let mut rng = SplitMix64::new(777);
        let roots: Vec<Complex64> = (0..7).map(|_| rng.complex(-2.0, 2.0)).collect();
        let p = ComplexPoly::from_roots(&roots);
        let set = poly_roots(&p).unwrap();
        assert!(match_root_sets(&roots, &set.roots) < 1e-8);
    }

    #[test]
    fn expansion_roundtrip_random_instances() {
        let mut rng = SplitMix64::new(4242);
        let mut done = 0;
        while done < 20 {
            let deg = 2 + rng.usize_below(9);
            let roots: Vec<Complex64> = (0..deg).map(|_| rng.complex(-1.5, 1.5)).collect();
            // Require separation > 1e-2 so the match is unambiguous.
            let mut ok = true;
            for i in 0..deg {
                for j in 0..i {
                    if (roots[i] - roots[j]).norm() < 1e-2 {
                        ok = false;
                    }
                }
            }
            if !ok {
                continue;
            }
            done += 1;
            let p = ComplexPoly::from_roots(&roots);
            let set = poly_roots(&p).unwrap();
            assert!(match_root_sets(&roots, &set.roots) < 1e-8);
        }
    }

    #[test]
    fn coefficient_roundtrip_through_roots() {
        // Monic polynomial -> roots -> re-expansion reproduces the
        // coefficients to 1e-10 relative.
        let mut rng = SplitMix64::new(515);
        let mut done = 0;
        while done < 10 {
            let deg = 2 + rng.usize_below(7);
            let roots: Vec<Complex64> = (0..deg).map(|_| rng.complex(-1.5, 1.5)).collect();
            let mut separated = true;
            for i in 0..deg {
                for j in 0..i {
                    if (roots[i] - roots[j]).norm() < 5e-2 {
                        separated = false;
                    }
                }
            }
            if !separated {
                continue;
            }
            done += 1;
            let p = ComplexPoly::from_roots(&roots);
            let set = poly_roots(&p).unwrap();
            let q = ComplexPoly::from_roots(&set.roots);
            let scale = p.max_coeff_norm();
            for (a, b) in p.coeffs().iter().zip(q.coeffs()) {
                assert!((a - b).norm() <= 1e-10 * scale, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn constant_term_is_signed_root_product() {
        let mut rng = SplitMix64::new(31_337);
        for s in 1..=3u32 {
            let g2 = rng.complex(-3.0, 3.0);
            let poly = lame_spectral_poly(s, g2);
            let product: Complex64 = (0..=2 * s)
                .map(|j| band_edge_factor(j, g2))
                .product();
            let sign = if (2 * s + 1) % 2 == 0 { 1.0 } else { -1.0 };
            let expect = product * sign;
            let got = poly.coeffs()[0];
            assert!(
                (got - expect).norm() <= 1e-10 * (1.0 + expect.norm()),
                "s = {s}: constant {got} vs {expect}"
            );
        }
    }

    #[test]
    fn degree_zero_rejected() {
        let p = ComplexPoly::from_real(&[3.0]);
        assert!(matches!(poly_roots(&p), Err(Error::PolynomialDegreeTooLow)));
    }

    #[test]
    fn trailing_zero_strip() {
        let p = ComplexPoly::from_real(&[1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 1);
    }

    #[test]
    fn one_gap_edges_g2_four() {
        let be = band_edges(1, c(4.0, 0.0)).unwrap();
        let expect = [c(0.0, 0.0), c(3.5, 0.0), c(13.5, 0.0)];
        assert_eq!(be.edges.len(), 3);
        for (e, x) in be.edges.iter().zip(&expect) {
            assert!((e - x).norm() < 1e-8, "edge {e} vs {x}");
        }
    }

    #[test]
    fn one_gap_edges_g2_zero() {
        let be = band_edges(1, c(0.0, 0.0)).unwrap();
        let expect = [c(0.0, 0.0), c(1.5, 0.0), c(7.5, 0.0)];
        for (e, x) in be.edges.iter().zip(&expect) {
            assert!((e - x).norm() < 1e-8, "edge {e} vs {x}");
        }
    }

    #[test]
    fn factor_j_zero_vanishes() {
        for s in 1..=4 {
            let g2 = c(2.7, -1.1);
            let poly = lame_spectral_poly(s, g2);
            assert!(poly.eval(c(0.0, 0.0)).norm() < 1e-9 * poly.max_coeff_norm());
        }
    }

    #[test]
    fn two_gap_edge_residuals() {
        let be = band_edges(2, c(4.0, 0.0)).unwrap();
        assert_eq!(be.edges.len(), 5);
        let poly = lame_spectral_poly(2, c(4.0, 0.0));
        for e in &be.edges {
            let res = poly.eval(*e).norm();
            assert!(res < 1e-8 * e.norm().powi(5).max(1.0) * poly.max_coeff_norm());
        }
    }

    #[test]
    fn band_edges_match_factor_values() {
        let mut rng = SplitMix64::new(606);
        for s in 1..=6u32 {
            for _ in 0..20 {
                let g2 = rng.complex(-4.0, 4.0);
                let be = band_edges(s, g2).unwrap();
                let analytic: Vec<Complex64> =
                    (0..=2 * s).map(|j| band_edge_factor(j, g2)).collect();
                let worst = match_root_sets(&analytic, &be.edges);
                let scale = analytic.iter().map(|e| e.norm()).fold(1.0, f64::max);
                assert!(
                    worst < 1e-8 * scale,
                    "s = {s}, g2 = {g2}: worst match {worst:e}"
                );
            }
        }
    }
}
