//! The Fourier-symbol pipeline for the algebraic form of the operator:
//! weight coefficients, the quadratic symbol X2 z^2 + i X1 z + X0 and its
//! roots, the step-function selector, the two-sided Green function, and
//! the shift values it produces.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::elliptic::EllipticParams;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Inputs of the symbol pipeline: gap count, weight exponents, lattice
/// data, and the complementary-solution amplitude.
#[derive(Debug, Clone)]
pub struct BhParams {
    pub s: u32,
    pub sigma: [u32; 3],
    pub elliptic: EllipticParams,
    pub amplitude: Complex64,
}

impl BhParams {
    pub fn new(
        s: u32,
        sigma: [u32; 3],
        elliptic: EllipticParams,
        amplitude: Complex64,
    ) -> Result<Self> {
        if s < 1 {
            return Err(Error::Precondition("gap count s must be >= 1".into()));
        }
        if sigma.iter().any(|&x| x < 1) {
            return Err(Error::Precondition("weight exponents must be >= 1".into()));
        }
        Ok(BhParams { s, sigma, elliptic, amplitude })
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Weight-expansion coefficients
/// h_mnq = C(sigma1-1, m) C(sigma2-1, n) C(sigma3-1, q) e1^m e2^n e3^q
/// for 0 <= m < sigma1, 0 <= n < sigma2, 0 <= q < sigma3.
pub fn weight_coeffs(
    sigma: [u32; 3],
    roots: [Complex64; 3],
) -> BTreeMap<(u32, u32, u32), Complex64> {
    let mut out = BTreeMap::new();
    for m in 0..sigma[0] {
        for n in 0..sigma[1] {
            for q in 0..sigma[2] {
                let coeff = binomial(sigma[0] - 1, m)
                    * binomial(sigma[1] - 1, n)
                    * binomial(sigma[2] - 1, q);
                let val = roots[0].powu(m) * roots[1].powu(n) * roots[2].powu(q) * coeff;
                out.insert((m, n, q), val);
            }
        }
    }
    out
}

/// The quadratic symbol and its roots.
#[derive(Debug, Clone, Copy)]
pub struct SymbolQuadratic {
    pub x2: Complex64,
    pub x1: Complex64,
    pub x0: Complex64,
    pub a_plus: Complex64,
    pub a_minus: Complex64,
    /// X1^2 + 4 X2 X0.
    pub discriminant: Complex64,
}

fn sigma_dot_roots(p: &BhParams) -> Complex64 {
    p.sigma
        .iter()
        .zip(&p.elliptic.roots)
        .map(|(&s, &e)| e * s as f64)
        .sum()
}

fn quadratic_root_sum(p: &BhParams) -> Complex64 {
    // The g3-weighted quadratic combination in X0:
    // sum over pairs (sigma_i - 1)(sigma_j - 1) e_i e_j
    // plus sum over i of (sigma_i - 1)(sigma_i - 2)/2 e_i^2.
    let s = p.sigma;
    let e = p.elliptic.roots;
    let f = |x: u32| (x - 1) as f64;
    let pair_part = e[0] * e[1] * (f(s[0]) * f(s[1]))
        + e[1] * e[2] * (f(s[1]) * f(s[2]))
        + e[0] * e[2] * (f(s[0]) * f(s[2]));
    let square_part: Complex64 = (0..3)
        .map(|i| e[i] * e[i] * (f(s[i]) * (f(s[i]) - 1.0) / 2.0))
        .sum();
    pair_part + square_part
}

/// Symbol coefficients per the consolidated formulas:
/// X2 = g3, X1 = (3-2s) g3/2 - 2 (sigma . e) g3,
/// X0 = (sigma . e)(5-2s) g2/2 - 2 Q g3, and the roots
/// a_pm = i(-X1 pm sqrt(X1^2 + 4 X2 X0)) / (2 X2) with the principal root.
pub fn symbol_coefficients(p: &BhParams) -> Result<SymbolQuadratic> {
    let g2 = p.elliptic.g2;
    let g3 = p.elliptic.g3;
    let scale = 1.0 + g2.norm() + g3.norm();
    if g3.norm() <= 1e-12 * scale {
        return Err(Error::DegenerateSymbol);
    }
    let s = p.s as f64;
    let se = sigma_dot_roots(p);
    let x2 = g3;
    let x1 = g3 * ((3.0 - 2.0 * s) / 2.0) - se * g3 * 2.0;
    let x0 = se * ((5.0 - 2.0 * s) / 2.0) * g2 - quadratic_root_sum(p) * g3 * 2.0;
    let discriminant = x1 * x1 + 4.0 * x2 * x0;
    let sqrt_disc = discriminant.sqrt();
    let i = Complex64::new(0.0, 1.0);
    let a_plus = i * (-x1 + sqrt_disc) / (2.0 * x2);
    let a_minus = i * (-x1 - sqrt_disc) / (2.0 * x2);
    Ok(SymbolQuadratic { x2, x1, x0, a_plus, a_minus, discriminant })
}

/// Max deviation between 1/((z-a+)(z-a-)) and its partial-fraction
/// splitting at 20 deterministic sample points away from the poles.
pub fn partial_fractions(a_plus: Complex64, a_minus: Complex64) -> Result<f64> {
    let gap = (a_plus - a_minus).norm();
    if gap < 1e-12 * (1.0 + a_plus.norm().max(a_minus.norm())) {
        return Err(Error::CoincidentRoots);
    }
    let mut rng = SplitMix64::new(0x9d5f_3c11);
    let mut worst = 0.0f64;
    let mut taken = 0;
    while taken < 20 {
        let z = rng.complex(-4.0, 4.0);
        if (z - a_plus).norm() < 0.5 || (z - a_minus).norm() < 0.5 {
            continue;
        }
        taken += 1;
        let lhs = 1.0 / ((z - a_plus) * (z - a_minus));
        let rhs = (1.0 / (z - a_plus) - 1.0 / (z - a_minus)) / (a_plus - a_minus);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Signum with sgn(0) = 0.
fn sgn(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Step function u(t) = 1/2 + sgn(t)/2.
pub fn unit_step(t: f64) -> f64 {
    0.5 + 0.5 * sgn(t)
}

/// The three-branch selector:
/// u(t) for p > 0, -sgn(t)/2 for p = 0, -u(-t) for p < 0.
pub fn gamma_selector(p: f64, t: f64) -> f64 {
    if p > 0.0 {
        unit_step(t)
    } else if p == 0.0 {
        -0.5 * sgn(t)
    } else {
        -unit_step(-t)
    }
}

/// Which symbol root supplies the selector subscript p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootChoice {
    ImAPlus,
    ImAMinus,
}

/// Two-sided Green function
/// G_pm(w) = i/(a+ - a-) (e^{pm i a+ w} - e^{pm i a- w}) Gamma_p(Re(pm w))
///          + A (e^{pm i a+ w} + e^{pm i a- w}) / (2 pi sqrt(X1^2 + 4 X2 X0)).
///
/// The selector argument is the real part of pm w (the selector is a
/// real-variable object; points on the imaginary axis fall through to
/// the p = 0 branch convention of `gamma_selector`), and p defaults to
/// Im(a+).
pub fn green_bh(w: Complex64, p: &BhParams) -> Result<(Complex64, Complex64)> {
    green_bh_with(w, p, RootChoice::ImAPlus)
}

pub fn green_bh_with(
    w: Complex64,
    p: &BhParams,
    choice: RootChoice,
) -> Result<(Complex64, Complex64)> {
    let sym = symbol_coefficients(p)?;
    if sym.discriminant.norm() < 1e-14 * (1.0 + sym.x1.norm_sqr()) {
        return Err(Error::CoincidentRoots);
    }
    let p_sub = match choice {
        RootChoice::ImAPlus => sym.a_plus.im,
        RootChoice::ImAMinus => sym.a_minus.im,
    };
    let i = Complex64::new(0.0, 1.0);
    let sqrt_disc = sym.discriminant.sqrt();
    let eval = |sign: f64| {
        let ep = (i * sym.a_plus * w * sign).exp();
        let em = (i * sym.a_minus * w * sign).exp();
        let particular =
            i / (sym.a_plus - sym.a_minus) * (ep - em) * gamma_selector(p_sub, (w * sign).re);
        let complementary =
            p.amplitude * (ep + em) / (2.0 * std::f64::consts::PI * sqrt_disc);
        particular + complementary
    };
    Ok((eval(1.0), eval(-1.0)))
}

/// Heaviside convention for the shift values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeavisideConvention {
    /// xi_pm = G_pm(w) H(lambda): 1 for lambda > 0, 0 for lambda < 0.
    Standard,
    /// The argument-limit variant pi H(-lambda).
    ArgLimitPi,
}

/// Shift values xi_pm(lambda, w) = G_pm(w) H(lambda); lambda = 0 is a
/// jump point and rejected.
pub fn ssf_bh(lambda: f64, w: Complex64, p: &BhParams) -> Result<(Complex64, Complex64)> {
    ssf_bh_with(lambda, w, p, RootChoice::ImAPlus, HeavisideConvention::Standard)
}

pub fn ssf_bh_with(
    lambda: f64,
    w: Complex64,
    p: &BhParams,
    choice: RootChoice,
    convention: HeavisideConvention,
) -> Result<(Complex64, Complex64)> {
    if lambda == 0.0 {
        return Err(Error::UndefinedAtZero);
    }
    let factor = match convention {
        HeavisideConvention::Standard => {
            if lambda > 0.0 {
                1.0
            } else {
                0.0
            }
        }
        HeavisideConvention::ArgLimitPi => {
            std::f64::consts::PI * if lambda < 0.0 { 1.0 } else { 0.0 }
        }
    };
    let (gp, gm) = green_bh_with(w, p, choice)?;
    Ok((gp * factor, gm * factor))
}

/// One row of the weight-coefficient comparison: the binomial-product
/// form against its falling-factorial variant.
#[derive(Debug, Clone, Copy)]
pub struct WeightRow {
    pub key: (u32, u32, u32),
    pub binomial_form: Complex64,
    pub factorial_form: Complex64,
    pub diff: f64,
}

/// The symbol-coefficient comparison report: consolidated formulas
/// against the table-row variants (g2 in the linear term of row 000, and
/// the 4s(2s-1) constant that the consolidated X0 drops). Disagreements
/// are findings, never errors.
#[derive(Debug, Clone)]
pub struct TableCheckReport {
    pub consolidated: SymbolQuadratic,
    /// Linear coefficient with the row-000 g2 variant.
    pub table_x1: Complex64,
    /// Constant term including the row-000 contribution 4s(2s-1).
    pub table_x0: Complex64,
    pub x1_difference: Complex64,
    pub x0_difference: Complex64,
    pub weight_rows: Vec<WeightRow>,
}

pub fn bh_table_check(p: &BhParams) -> Result<TableCheckReport> {
    let consolidated = symbol_coefficients(p)?;
    let g2 = p.elliptic.g2;
    let g3 = p.elliptic.g3;
    let s = p.s as f64;
    let se = sigma_dot_roots(p);
    let table_x1 = g2 * ((3.0 - 2.0 * s) / 2.0) - se * g3 * 2.0;
    let table_x0 = consolidated.x0 + 4.0 * s * (2.0 * s - 1.0);
    let e = p.elliptic.roots;
    let sg = p.sigma;
    let f = |x: u32| (x - 1) as f64;
    let mut weight_rows = Vec::new();
    let all = weight_coeffs(p.sigma, p.elliptic.roots);
    // The ten tabulated rows; coefficients outside the sigma range are
    // zero in both forms (the falling factorials vanish there too).
    let tabulated: [((u32, u32, u32), Complex64); 10] = [
        ((0, 0, 0), Complex64::new(1.0, 0.0)),
        ((1, 0, 0), e[0] * f(sg[0])),
        ((0, 1, 0), e[1] * f(sg[1])),
        ((0, 0, 1), e[2] * f(sg[2])),
        ((1, 1, 0), e[0] * e[1] * (f(sg[0]) * f(sg[1]))),
        ((1, 0, 1), e[0] * e[2] * (f(sg[0]) * f(sg[2]))),
        ((0, 1, 1), e[1] * e[2] * (f(sg[1]) * f(sg[2]))),
        ((2, 0, 0), e[0] * e[0] * (f(sg[0]) * (f(sg[0]) - 1.0) / 2.0)),
        ((0, 2, 0), e[1] * e[1] * (f(sg[1]) * (f(sg[1]) - 1.0) / 2.0)),
        ((0, 0, 2), e[2] * e[2] * (f(sg[2]) * (f(sg[2]) - 1.0) / 2.0)),
    ];
    for (key, factorial_form) in tabulated {
        let binomial_form = all.get(&key).copied().unwrap_or(Complex64::new(0.0, 0.0));
        weight_rows.push(WeightRow {
            key,
            binomial_form,
            factorial_form,
            diff: (binomial_form - factorial_form).norm(),
        });
    }
    Ok(TableCheckReport {
        consolidated,
        table_x1,
        table_x0,
        x1_difference: table_x1 - consolidated.x1,
        x0_difference: table_x0 - consolidated.x0,
        weight_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(s: u32, sigma: [u32; 3], g2: Complex64, g3: Complex64, a: Complex64) -> BhParams {
        let el = EllipticParams::from_invariants(g2, g3).unwrap();
        BhParams::new(s, sigma, el, a).unwrap()
    }

    fn random_params(rng: &mut SplitMix64) -> BhParams {
        loop {
            let g2 = c(rng.range(-5.0, 7.0), 0.0);
            let g3 = c(rng.range(-4.0, 4.0), 0.0);
            if g3.norm() < 0.3 {
                continue;
            }
            let disc = (g2 * g2 * g2 - 27.0 * g3 * g3).norm();
            if disc < 1e-2 * (1.0 + g2.norm().powi(3)).max(g3.norm_sqr()) {
                continue;
            }
            let Ok(el) = EllipticParams::from_invariants(g2, g3) else { continue };
            let sigma = [
                1 + rng.usize_below(3) as u32,
                1 + rng.usize_below(3) as u32,
                1 + rng.usize_below(3) as u32,
            ];
            let s = 1 + rng.usize_below(4) as u32;
            return BhParams::new(s, sigma, el, rng.complex(-1.0, 1.0)).unwrap();
        }
    }

    #[test]
    fn weights_all_unit_exponents() {
        let coeffs = weight_coeffs([1, 1, 1], [c(1.0, 0.0), c(2.0, 0.0), c(-3.0, 0.0)]);
        assert_eq!(coeffs.len(), 1);
        assert!((coeffs[&(0, 0, 0)] - c(1.0, 0.0)).norm() == 0.0);
    }

    #[test]
    fn weights_single_raised_exponent() {
        let coeffs = weight_coeffs([2, 1, 1], [c(2.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0)]);
        assert_eq!(coeffs.len(), 2);
        assert!((coeffs[&(0, 0, 0)] - c(1.0, 0.0)).norm() == 0.0);
        assert!((coeffs[&(1, 0, 0)] - c(2.0, 0.0)).norm() == 0.0);
    }

    #[test]
    fn weights_match_factorial_rows() {
        let el = EllipticParams::from_invariants(c(7.0, 0.0), c(3.0, 0.0)).unwrap();
        let p = BhParams::new(2, [3, 2, 2], el, c(0.0, 0.0)).unwrap();
        let report = bh_table_check(&p).unwrap();
        for row in &report.weight_rows {
            assert!(
                row.diff < 1e-12 * (1.0 + row.factorial_form.norm()),
                "row {:?}: {} vs {}",
                row.key,
                row.binomial_form,
                row.factorial_form
            );
        }
        // h_200 = C(2,2) e1^2 = e1^2 and h_110 = C(2,1) C(1,1) e1 e2 = 2 e1 e2.
        let e1 = p.elliptic.roots[0];
        let e2 = p.elliptic.roots[1];
        let all = weight_coeffs(p.sigma, p.elliptic.roots);
        assert!((all[&(2, 0, 0)] - e1 * e1).norm() < 1e-12 * (1.0 + e1.norm_sqr()));
        assert!((all[&(1, 1, 0)] - e1 * e2 * 2.0).norm() < 1e-12 * (1.0 + (e1 * e2).norm()));
    }

    #[test]
    fn symbol_degenerate_when_g3_vanishes() {
        // Roots (1, 0, -1) give g3 = 0, so X2 = 0.
        let el = EllipticParams::from_invariants(c(4.0, 0.0), c(0.0, 0.0)).unwrap();
        let p = BhParams::new(1, [1, 1, 1], el, c(0.0, 0.0)).unwrap();
        assert!(matches!(symbol_coefficients(&p), Err(Error::DegenerateSymbol)));
    }

    #[test]
    fn symbol_equianharmonic_example() {
        // sigma = (1,1,1), s = 1, roots of (g2, g3) = (0, 4):
        // X2 = 4, X1 = 2, X0 = 0.
        let p = params(1, [1, 1, 1], c(0.0, 0.0), c(4.0, 0.0), c(0.0, 0.0));
        let sym = symbol_coefficients(&p).unwrap();
        assert!((sym.x2 - c(4.0, 0.0)).norm() < 1e-12);
        assert!((sym.x1 - c(2.0, 0.0)).norm() < 1e-10, "X1 = {}", sym.x1);
        assert!(sym.x0.norm() < 1e-10, "X0 = {}", sym.x0);
    }

    #[test]
    fn quadratic_factorization_random() {
        let mut rng = SplitMix64::new(97_531);
        for _ in 0..100 {
            let p = random_params(&mut rng);
            let sym = symbol_coefficients(&p).unwrap();
            // X2 (z - a+)(z - a-) == X2 z^2 + i X1 z + X0 coefficientwise.
            let sum_coeff = -sym.x2 * (sym.a_plus + sym.a_minus);
            let prod_coeff = sym.x2 * sym.a_plus * sym.a_minus;
            let scale = sym.x2.norm().max(sym.x1.norm()).max(sym.x0.norm()).max(1.0);
            assert!(
                (sum_coeff - Complex64::new(0.0, 1.0) * sym.x1).norm() < 1e-12 * scale,
                "linear coefficient mismatch"
            );
            assert!((prod_coeff - sym.x0).norm() < 1e-12 * scale, "constant mismatch");
        }
    }

    #[test]
    fn purely_imaginary_roots_when_discriminant_positive() {
        let mut rng = SplitMix64::new(24_680);
        let mut seen = 0;
        for _ in 0..200 {
            let p = random_params(&mut rng);
            let sym = symbol_coefficients(&p).unwrap();
            if sym.discriminant.im.abs() > 1e-12 || sym.discriminant.re <= 0.0 {
                continue;
            }
            seen += 1;
            let pair_scale = sym.a_plus.norm().max(sym.a_minus.norm());
            for a in [sym.a_plus, sym.a_minus] {
                if a.norm() < 1e-10 * pair_scale {
                    continue; // root is zero to roundoff: on the axis
                }
                assert!(
                    a.re.abs() <= 1e-10 * a.norm(),
                    "Re a = {} for |a| = {}",
                    a.re,
                    a.norm()
                );
            }
        }
        assert!(seen > 10, "conditional property exercised only {seen} times");
    }

    #[test]
    fn partial_fractions_unit_imaginary_pair() {
        let dev = partial_fractions(c(0.0, 1.0), c(0.0, -1.0)).unwrap();
        assert!(dev < 1e-14, "deviation {dev:e}");
    }

    #[test]
    fn partial_fractions_random_pairs() {
        let mut rng = SplitMix64::new(1_000_003);
        for _ in 0..20 {
            let a = rng.complex(-2.0, 2.0);
            let mut b = rng.complex(-2.0, 2.0);
            if (a - b).norm() < 0.3 {
                b += c(1.0, 1.0);
            }
            let dev = partial_fractions(a, b).unwrap();
            assert!(dev < 1e-12, "deviation {dev:e}");
        }
    }

    #[test]
    fn partial_fractions_rejects_coincident() {
        assert!(matches!(
            partial_fractions(c(1.0, 2.0), c(1.0, 2.0)),
            Err(Error::CoincidentRoots)
        ));
    }

    #[test]
    fn selector_table() {
        assert_eq!(gamma_selector(1.0, 0.5), 1.0);
        assert_eq!(gamma_selector(0.0, -2.0), 0.5);
        assert_eq!(gamma_selector(-1.0, -3.0), -1.0);
        // u(t) = 1/2 + sgn(t)/2 pointwise for t != 0.
        for t in [-3.0, -0.1, 0.2, 5.0] {
            assert_eq!(unit_step(t), 0.5 + 0.5 * sgn(t));
        }
        assert_eq!(unit_step(0.0), 0.5);
        // Output set is {1, 0, -1, +-1/2}.
        for p in [-1.0, 0.0, 1.0] {
            for t in [-1.0, 0.0, 1.0] {
                let v = gamma_selector(p, t);
                assert!([1.0, 0.5, 0.0, -0.5, -1.0].contains(&v), "{v}");
            }
        }
    }

    #[test]
    fn green_zero_amplitude_at_origin() {
        let p = params(1, [2, 2, 2], c(7.0, 0.0), c(3.0, 0.0), c(0.0, 0.0));
        let (gp, gm) = green_bh(c(0.0, 0.0), &p).unwrap();
        assert!(gp.norm() == 0.0 && gm.norm() == 0.0);
    }

    #[test]
    fn green_unit_amplitude_at_origin() {
        let p = params(1, [2, 2, 2], c(7.0, 0.0), c(3.0, 0.0), c(1.0, 0.0));
        let sym = symbol_coefficients(&p).unwrap();
        let expect = p.amplitude / (std::f64::consts::PI * sym.discriminant.sqrt());
        let (gp, gm) = green_bh(c(0.0, 0.0), &p).unwrap();
        assert!((gp - expect).norm() < 1e-12 * (1.0 + expect.norm()), "{gp} vs {expect}");
        assert!((gm - expect).norm() < 1e-12 * (1.0 + expect.norm()));
    }

    #[test]
    fn green_reduces_to_particular_solution() {
        // A = 0 leaves exactly the fundamental-solution formula.
        let p = params(2, [2, 2, 2], c(7.0, 0.0), c(3.0, 0.0), c(0.0, 0.0));
        let sym = symbol_coefficients(&p).unwrap();
        let i = c(0.0, 1.0);
        for wr in [0.4, 1.3, -0.8] {
            let w = c(wr, 0.0);
            let (gp, _) = green_bh(w, &p).unwrap();
            let expect = i / (sym.a_plus - sym.a_minus)
                * ((i * sym.a_plus * w).exp() - (i * sym.a_minus * w).exp())
                * gamma_selector(sym.a_plus.im, wr);
            assert!((gp - expect).norm() < 1e-13 * (1.0 + expect.norm()));
        }
    }

    #[test]
    fn green_continuous_on_half_line() {
        // Largest step-to-step change must contract when the step halves:
        // true for a continuous (here piecewise-smooth) function, false
        // across a jump.
        let p = params(1, [2, 2, 2], c(7.0, 0.0), c(3.0, 0.0), c(0.5, 0.2));
        let max_jump = |step: f64| {
            let mut worst = 0.0f64;
            let mut w = 0.1;
            let mut prev = green_bh(c(w, 0.0), &p).unwrap();
            while w < 2.0 {
                w += step;
                let cur = green_bh(c(w, 0.0), &p).unwrap();
                worst = worst.max((cur.0 - prev.0).norm()).max((cur.1 - prev.1).norm());
                prev = cur;
            }
            worst
        };
        let coarse = max_jump(0.01);
        let fine = max_jump(0.005);
        assert!(fine < 0.6 * coarse, "no contraction: {fine} vs {coarse}");
        // At the selector switch itself the jump is suppressed by the
        // vanishing exponential difference, so G extends continuously
        // through the origin onto both half-lines.
        let (left, _) = green_bh(c(-1e-9, 0.0), &p).unwrap();
        let (right, _) = green_bh(c(1e-9, 0.0), &p).unwrap();
        assert!((left - right).norm() < 1e-6);
    }

    #[test]
    fn ssf_negative_lambda_annihilates() {
        let p = params(1, [2, 2, 2], c(7.0, 0.0), c(3.0, 0.0), c(1.0, 0.0));
        let (xp, xm) = ssf_bh(-1.0, c(0.7, 0.0), &p).unwrap();
        assert!(xp.norm() == 0.0 && xm.norm() == 0.0);
    }

    #[test]
    fn ssf_positive_lambda_is_green_value() {
        let p = params(1, [2, 2, 2], c(7.0, 0.0), c(3.0, 0.0), c(1.0, 0.0));
        let w = c(0.7, 0.0);
        let (xp, xm) = ssf_bh(1.0, w, &p).unwrap();
        let (gp, gm) = green_bh(w, &p).unwrap();
        assert!((xp - gp).norm() == 0.0);
        assert!((xm - gm).norm() == 0.0);
    }

    #[test]
    fn ssf_zero_amplitude_at_origin_vanishes() {
        let p = params(1, [2, 2, 2], c(7.0, 0.0), c(3.0, 0.0), c(0.0, 0.0));
        let (xp, xm) = ssf_bh(1.0, c(0.0, 0.0), &p).unwrap();
        assert!(xp.norm() == 0.0 && xm.norm() == 0.0);
    }

    #[test]
    fn ssf_rejects_lambda_zero() {
        let p = params(1, [2, 2, 2], c(7.0, 0.0), c(3.0, 0.0), c(1.0, 0.0));
        assert!(matches!(
            ssf_bh(0.0, c(0.5, 0.0), &p),
            Err(Error::UndefinedAtZero)
        ));
    }

    #[test]
    fn table_check_reports_both_variants() {
        let p = params(2, [3, 2, 2], c(7.0, 0.0), c(3.0, 0.0), c(0.0, 0.0));
        let report = bh_table_check(&p).unwrap();
        // Constant-term variant differs by exactly 4s(2s-1) = 24 at s = 2.
        assert!((report.x0_difference - c(24.0, 0.0)).norm() < 1e-12);
        // Linear variant swaps g3 for g2 in the row-000 term.
        let expected_x1_diff =
            (p.elliptic.g2 - p.elliptic.g3) * ((3.0 - 2.0 * p.s as f64) / 2.0);
        assert!((report.x1_difference - expected_x1_diff).norm() < 1e-12);
        assert_eq!(report.weight_rows.len(), 10);
    }
}
