//! Weierstrass elliptic functions and the invariant/root conversions.
//!
//! Evaluation strategy: Laurent series about the origin (terms through
//! z^30, coefficients from the standard recursion driven by g2, g3)
//! combined with the duplication formulas after reducing the argument
//! into the fundamental cell. The argument is halved until the series
//! tail is below 1e-14, then the quadruple (wp, wp', zeta, sigma) is
//! doubled back up. Half-periods come from the optimal arithmetic-
//! geometric mean, and are matched against the cubic roots so that
//! e_j = wp(omega_j) holds for the stored ordering.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::tanh_sinh_unit;

/// Distance from a lattice point (after cell reduction) below which
/// wp, wp' and zeta refuse to evaluate.
pub const LATTICE_PROXIMITY_TOL: f64 = 1e-8;

const SERIES_TOP: usize = 16; // c_k for k = 2..=16, i.e. terms through z^30
const HALVING_TARGET: f64 = 0.25; // halve until |z| <= 0.25 * shortest lattice vector

/// Roots of 4w^3 - g2 w - g3, flagged when the discriminant vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoots {
    /// Sorted by real part descending, then imaginary part descending.
    pub roots: [Complex64; 3],
    /// True when g2^3 = 27 g3^2 within tolerance (repeated roots).
    pub degenerate: bool,
}

/// Both sign conventions of the invariants recovered from a root triple.
///
/// `g2_pair_sum` is +4(e1e2+e2e3+e1e3); expanding
/// 4(w-e1)(w-e2)(w-e3) = 4w^3 - g2 w - g3 instead forces the opposite
/// sign, exposed as `g2_vieta`. Downstream defaults use the Vieta value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootInvariants {
    pub g2_pair_sum: Complex64,
    pub g3: Complex64,
    pub g2_vieta: Complex64,
}

/// Lattice data for one choice of invariants: roots, half-periods and the
/// precomputed series coefficients every evaluation reuses.
#[derive(Debug, Clone)]
pub struct EllipticParams {
    pub g2: Complex64,
    pub g3: Complex64,
    /// e1, e2, e3 sorted by (Re desc, Im desc); e_j = wp(omega_j).
    pub roots: [Complex64; 3],
    /// omega_1, omega_2, omega_3 with omega_1 + omega_2 + omega_3 = 0.
    pub half_periods: [Complex64; 3],
    // Lagrange-reduced full-period basis; `basis_a` is the shortest vector.
    basis_a: Complex64,
    basis_b: Complex64,
    inv_basis: [[f64; 2]; 2],
    // zeta at the half points of the reduced basis, for quasi-periodicity.
    eta_a: Complex64,
    eta_b: Complex64,
    // Laurent coefficients c_k, k = 2..=SERIES_TOP (index 0 and 1 unused).
    series: [Complex64; SERIES_TOP + 1],
}

/// Solve 4w^3 - g2 w - g3 = 0 in closed form (Cardano), returning the
/// roots in deterministic order together with a repeated-root flag.
pub fn roots_from_invariants(g2: Complex64, g3: Complex64) -> CubicRoots {
    let disc = g2 * g2 * g2 - 27.0 * g3 * g3;
    let scale = (g2.norm().powi(3)).max(g3.norm().powi(2)).max(1.0);
    let degenerate = disc.norm() <= 1e-12 * scale;

    // Depressed form w^3 + p w + q with p = -g2/4, q = -g3/4.
    let p = -g2 / 4.0;
    let q = -g3 / 4.0;
    let mut roots = if p.norm() == 0.0 && q.norm() == 0.0 {
        [Complex64::new(0.0, 0.0); 3]
    } else {
        let d = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        let cand1 = -q / 2.0 + d;
        let cand2 = -q / 2.0 - d;
        let u3 = if cand1.norm() >= cand2.norm() { cand1 } else { cand2 };
        let u = u3.powf(1.0 / 3.0);
        let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let uk = u * omega.powu(k as u32);
            let vk = if uk.norm() > 0.0 { -p / (3.0 * uk) } else { Complex64::new(0.0, 0.0) };
            *slot = uk + vk;
        }
        out
    };
    sort_roots(&mut roots);
    CubicRoots { roots, degenerate }
}

fn sort_roots(roots: &mut [Complex64; 3]) {
    roots.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(b.im.partial_cmp(&a.im).unwrap())
    });
}

/// Recover the invariants from a zero-sum root triple; both sign
/// conventions of g2 are returned.
pub fn invariants_from_roots(
    e1: Complex64,
    e2: Complex64,
    e3: Complex64,
) -> Result<RootInvariants> {
    let sum = e1 + e2 + e3;
    let scale = e1.norm().max(e2.norm()).max(e3.norm()).max(1.0);
    if sum.norm() > 1e-10 * scale {
        return Err(Error::RootsNotZeroSum { sum_modulus: sum.norm() });
    }
    let pair_sum = e1 * e2 + e2 * e3 + e1 * e3;
    Ok(RootInvariants {
        g2_pair_sum: 4.0 * pair_sum,
        g3: 4.0 * e1 * e2 * e3,
        g2_vieta: -4.0 * pair_sum,
    })
}

fn wp_series_coeffs(g2: Complex64, g3: Complex64) -> [Complex64; SERIES_TOP + 1] {
    let mut c = [Complex64::new(0.0, 0.0); SERIES_TOP + 1];
    c[2] = g2 / 20.0;
    c[3] = g3 / 28.0;
    for k in 4..=SERIES_TOP {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 2..=(k - 2) {
            acc += c[m] * c[k - m];
        }
        c[k] = acc * (3.0 / ((2 * k + 1) as f64 * (k - 3) as f64));
    }
    c
}

/// Optimal arithmetic-geometric mean: at every step the square-root sign
/// is chosen so that |a' - b'| <= |a' + b'|.
fn agm_optimal(a0: Complex64, b0: Complex64) -> Complex64 {
    let mut a = a0;
    let mut b = b0;
    if (a - b).norm() > (a + b).norm() {
        b = -b;
    }
    for _ in 0..80 {
        if (a - b).norm() <= 1e-15 * a.norm() {
            break;
        }
        let a1 = (a + b) / 2.0;
        let mut b1 = (a * b).sqrt();
        if (a1 - b1).norm() > (a1 + b1).norm() {
            b1 = -b1;
        }
        a = a1;
        b = b1;
    }
    (a + b) / 2.0
}

/// Lagrange reduction of a complex lattice basis: returns (a, b) spanning
/// the same lattice with a the shortest vector.
fn reduce_basis(mut a: Complex64, mut b: Complex64) -> (Complex64, Complex64) {
    if a.norm() > b.norm() {
        std::mem::swap(&mut a, &mut b);
    }
    for _ in 0..64 {
        let q = (b * a.conj()).re / a.norm_sqr();
        let b2 = b - a * q.round();
        if b2.norm() >= a.norm() {
            return (a, b2);
        }
        b = a;
        a = b2;
    }
    (a, b)
}

impl EllipticParams {
    /// Build lattice data from the invariants. Degenerate discriminants
    /// (repeated roots) are refused.
    pub fn from_invariants(g2: Complex64, g3: Complex64) -> Result<Self> {
        let cubic = roots_from_invariants(g2, g3);
        if cubic.degenerate {
            let disc = g2 * g2 * g2 - 27.0 * g3 * g3;
            return Err(Error::DegenerateLattice { g2_cubed_minus_27_g3_squared: disc.norm() });
        }
        Self::build(g2, g3, cubic.roots)
    }

    /// Build lattice data from a zero-sum root triple, using the
    /// Vieta-consistent invariants internally.
    pub fn from_roots(e1: Complex64, e2: Complex64, e3: Complex64) -> Result<Self> {
        let inv = invariants_from_roots(e1, e2, e3)?;
        let mut roots = [e1, e2, e3];
        sort_roots(&mut roots);
        let g2 = inv.g2_vieta;
        let g3 = inv.g3;
        let disc = g2 * g2 * g2 - 27.0 * g3 * g3;
        let scale = (g2.norm().powi(3)).max(g3.norm().powi(2)).max(1.0);
        if disc.norm() <= 1e-12 * scale {
            return Err(Error::DegenerateLattice { g2_cubed_minus_27_g3_squared: disc.norm() });
        }
        Self::build(g2, g3, roots)
    }

    fn build(g2: Complex64, g3: Complex64, roots: [Complex64; 3]) -> Result<Self> {
        let [e1, e2, e3] = roots;
        let x13 = (e1 - e3).sqrt();
        let mut x12 = (e1 - e2).sqrt();
        let mut x23 = (e2 - e3).sqrt();
        if (x13 - x12).norm() > (x13 + x12).norm() {
            x12 = -x12;
        }
        if (x13 - x23).norm() > (x13 + x23).norm() {
            x23 = -x23;
        }
        let half_pi = std::f64::consts::FRAC_PI_2;
        let omega1 = half_pi / agm_optimal(x13, x12);
        let omega3 = Complex64::new(0.0, half_pi) / agm_optimal(x13, x23);
        let omega2 = -omega1 - omega3;

        let (basis_a, basis_b) = reduce_basis(2.0 * omega1, 2.0 * omega3);
        let det = basis_a.re * basis_b.im - basis_a.im * basis_b.re;
        if det.abs() < 1e-12 * basis_a.norm() * basis_b.norm() {
            return Err(Error::HalfPeriodMismatch { worst: f64::INFINITY });
        }
        let inv_basis = [
            [basis_b.im / det, -basis_b.re / det],
            [-basis_a.im / det, basis_a.re / det],
        ];

        let mut params = EllipticParams {
            g2,
            g3,
            roots,
            half_periods: [omega1, omega2, omega3],
            basis_a,
            basis_b,
            inv_basis,
            eta_a: Complex64::new(0.0, 0.0),
            eta_b: Complex64::new(0.0, 0.0),
            series: wp_series_coeffs(g2, g3),
        };
        params.eta_a = params.eval_core(basis_a / 2.0)?.2;
        params.eta_b = params.eval_core(basis_b / 2.0)?.2;

        // Match the half-periods to the roots so that e_j = wp(omega_j).
        let omegas = [omega1, omega2, omega3];
        let mut wp_at = [Complex64::new(0.0, 0.0); 3];
        for (slot, om) in wp_at.iter_mut().zip(&omegas) {
            *slot = params.eval_core(*om)?.0;
        }
        let mut best: Option<([usize; 3], f64)> = None;
        for perm in PERMUTATIONS {
            let worst = (0..3)
                .map(|j| (wp_at[perm[j]] - roots[j]).norm())
                .fold(0.0, f64::max);
            if best.is_none_or(|(_, w)| worst < w) {
                best = Some((perm, worst));
            }
        }
        let (perm, worst) = best.unwrap();
        let scale = 1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        if worst > 1e-6 * scale {
            return Err(Error::HalfPeriodMismatch { worst });
        }
        params.half_periods = [omegas[perm[0]], omegas[perm[1]], omegas[perm[2]]];
        Ok(params)
    }

    /// Shortest nonzero lattice vector; sets the scale for proximity checks.
    pub fn lattice_scale(&self) -> f64 {
        self.basis_a.norm()
    }

    /// Reduce z modulo the period lattice; returns the representative with
    /// minimal modulus and the integer translation (z = z0 + m a + n b).
    pub(crate) fn reduce(&self, z: Complex64) -> (Complex64, i64, i64) {
        let x = self.inv_basis[0][0] * z.re + self.inv_basis[0][1] * z.im;
        let y = self.inv_basis[1][0] * z.re + self.inv_basis[1][1] * z.im;
        let m0 = x.round() as i64;
        let n0 = y.round() as i64;
        let mut best = (z, 0i64, 0i64, f64::INFINITY);
        for dm in -1..=1 {
            for dn in -1..=1 {
                let m = m0 + dm;
                let n = n0 + dn;
                let z0 = z - self.basis_a * m as f64 - self.basis_b * n as f64;
                if z0.norm() < best.3 {
                    best = (z0, m, n, z0.norm());
                }
            }
        }
        (best.0, best.1, best.2)
    }

    /// Series + duplication evaluation of (wp, wp', zeta, sigma) without
    /// lattice reduction; valid for any z, most accurate within the cell.
    fn eval_core(&self, z: Complex64) -> Result<(Complex64, Complex64, Complex64, Complex64)> {
        let rho = self.basis_a.norm();
        let mut halvings = 0u32;
        let mut zn = z.norm();
        while zn > HALVING_TARGET * rho && halvings < 64 {
            zn *= 0.5;
            halvings += 1;
        }
        let zs = z / 2f64.powi(halvings as i32);
        let (mut u, mut v, mut zt, mut sg) = self.eval_series(zs);
        for _ in 0..halvings {
            let w = 6.0 * u * u - self.g2 / 2.0;
            let h = w / (2.0 * v);
            let u2 = h * h - 2.0 * u;
            let v2 = h * (6.0 * u - 2.0 * h * h) - v;
            let zt2 = 2.0 * zt + h;
            let sg2 = -sg * sg * sg * sg * v;
            u = u2;
            v = v2;
            zt = zt2;
            sg = sg2;
            if !(u.is_finite() && v.is_finite() && zt.is_finite() && sg.is_finite()) {
                return Err(Error::IllConditioned { stage: "duplication" });
            }
        }
        Ok((u, v, zt, sg))
    }

    /// Laurent/Taylor series for the quadruple at small |z|.
    fn eval_series(&self, z: Complex64) -> (Complex64, Complex64, Complex64, Complex64) {
        let z2 = z * z;
        let mut wp = Complex64::new(0.0, 0.0); // sum c_k z^{2k-2}
        let mut dwp = Complex64::new(0.0, 0.0); // sum (2k-2) c_k z^{2k-3}
        let mut zeta_tail = Complex64::new(0.0, 0.0); // sum c_k z^{2k-1}/(2k-1)
        let mut log_sigma = Complex64::new(0.0, 0.0); // sum c_k z^{2k}/(2k(2k-1))
        let mut pow = z2; // z^{2k-2} starting at k = 2
        for k in 2..=SERIES_TOP {
            let c = self.series[k];
            wp += c * pow;
            dwp += c * pow * ((2 * k - 2) as f64) / z;
            zeta_tail += c * pow * z / (2 * k - 1) as f64;
            log_sigma += c * pow * z2 / ((2 * k) as f64 * (2 * k - 1) as f64);
            pow *= z2;
        }
        let inv_z = 1.0 / z;
        let inv_z2 = inv_z * inv_z;
        (
            inv_z2 + wp,
            -2.0 * inv_z2 * inv_z + dwp,
            inv_z - zeta_tail,
            z * (-log_sigma).exp(),
        )
    }

    fn reduced_off_lattice(&self, z: Complex64) -> Result<(Complex64, i64, i64)> {
        let (z0, m, n) = self.reduce(z);
        if z0.norm() < LATTICE_PROXIMITY_TOL {
            return Err(Error::LatticeProximity {
                distance: z0.norm(),
                tolerance: LATTICE_PROXIMITY_TOL,
            });
        }
        Ok((z0, m, n))
    }

    /// Weierstrass wp(z).
    pub fn wp(&self, z: Complex64) -> Result<Complex64> {
        let (z0, _, _) = self.reduced_off_lattice(z)?;
        Ok(self.eval_core(z0)?.0)
    }

    /// Derivative wp'(z).
    pub fn wp_prime(&self, z: Complex64) -> Result<Complex64> {
        let (z0, _, _) = self.reduced_off_lattice(z)?;
        Ok(self.eval_core(z0)?.1)
    }

    /// Weierstrass zeta(z); quasi-periodic, corrected across cells.
    pub fn zeta(&self, z: Complex64) -> Result<Complex64> {
        let (z0, m, n) = self.reduced_off_lattice(z)?;
        let raw = self.eval_core(z0)?.2;
        Ok(raw + 2.0 * m as f64 * self.eta_a + 2.0 * n as f64 * self.eta_b)
    }

    /// Weierstrass sigma(z); entire, so lattice proximity is not an error
    /// (sigma vanishes at lattice points).
    pub fn sigma(&self, z: Complex64) -> Result<Complex64> {
        let (z0, m, n) = self.reduce(z);
        let raw = if z0.norm() < LATTICE_PROXIMITY_TOL {
            z0 // sigma(z) = z + O(z^5) near the origin
        } else {
            self.eval_core(z0)?.3
        };
        let (m, n) = (m as f64, n as f64);
        // sigma(z0 + m a + n b) built by translating one basis direction
        // at a time; exact for either lattice orientation.
        let expo = 2.0 * m * self.eta_a * (z0 + m * self.basis_a / 2.0)
            + 2.0 * n * self.eta_b * (z0 + m * self.basis_a + n * self.basis_b / 2.0);
        let sign = if ((m + n) as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        Ok(raw * expo.exp() * sign)
    }

    /// Inverse of wp along the real ray: eps = int_E^inf dw / sqrt(4w^3 - g2 w - g3),
    /// parameterized by w = E + t/(1-t) on t in [0, 1).
    pub fn wp_inverse(&self, e_val: Complex64) -> Result<Complex64> {
        let cubic = |w: Complex64| 4.0 * w * w * w - self.g2 * w - self.g3;
        let scale = (1.0 + e_val.norm().powi(3)) * (1.0 + self.g2.norm() + self.g3.norm());
        let at_start = cubic(e_val).norm();
        if at_start < 1e-10 * scale {
            return Err(Error::BranchPointProximity { cubic_modulus: at_start });
        }
        // Coarse scan of the ray for interior branch points.
        for k in 0..32 {
            let w = e_val + Complex64::new(10f64.powf(-2.0 + k as f64 * 0.2), 0.0);
            let c = cubic(w).norm();
            if c < 1e-10 * (1.0 + w.norm().powi(3)) {
                return Err(Error::BranchPointProximity { cubic_modulus: c });
            }
        }
        tanh_sinh_unit(
            |t, omt| {
                let w = e_val + Complex64::new(t / omt, 0.0);
                let jac = 1.0 / (omt * omt);
                jac / cubic(w).sqrt()
            },
            1e-12,
        )
    }
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cubic_residual(g2: Complex64, g3: Complex64, w: Complex64) -> f64 {
        (4.0 * w * w * w - g2 * w - g3).norm()
    }

    /// Random non-degenerate real invariants, bounded away from the
    /// discriminant locus.
    fn random_invariants(rng: &mut SplitMix64) -> (Complex64, Complex64) {
        loop {
            let g2 = c(rng.range(-6.0, 8.0), 0.0);
            let g3 = c(rng.range(-4.0, 4.0), 0.0);
            let disc = (g2 * g2 * g2 - 27.0 * g3 * g3).norm();
            let scale = g2.norm().powi(3).max(g3.norm().powi(2)).max(1.0);
            if disc > 1e-2 * scale {
                return (g2, g3);
            }
        }
    }

    #[test]
    fn roots_lemniscatic_case() {
        let r = roots_from_invariants(c(4.0, 0.0), c(0.0, 0.0));
        assert!(!r.degenerate);
        assert!((r.roots[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(r.roots[1].norm() < 1e-12);
        assert!((r.roots[2] - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn roots_equianharmonic_case() {
        // 4w^3 - 4 = 0: cube roots of unity.
        let r = roots_from_invariants(c(0.0, 0.0), c(4.0, 0.0));
        let third = 2.0 * std::f64::consts::PI / 3.0;
        assert!((r.roots[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((r.roots[1] - Complex64::from_polar(1.0, third)).norm() < 1e-12);
        assert!((r.roots[2] - Complex64::from_polar(1.0, -third)).norm() < 1e-12);
    }

    #[test]
    fn roots_residual_check() {
        let r = roots_from_invariants(c(7.0, 0.0), c(3.0, 0.0));
        for root in r.roots {
            assert!(cubic_residual(c(7.0, 0.0), c(3.0, 0.0), root) < 1e-10);
        }
    }

    #[test]
    fn degenerate_discriminant_flagged() {
        // g2 = 3, g3 = 1 gives g2^3 = 27 = 27 g3^2 exactly.
        let r = roots_from_invariants(c(3.0, 0.0), c(1.0, 0.0));
        assert!(r.degenerate);
        assert!(EllipticParams::from_invariants(c(3.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn invariants_from_simple_triple() {
        let inv = invariants_from_roots(c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)).unwrap();
        assert!((inv.g2_pair_sum - c(-4.0, 0.0)).norm() < 1e-14);
        assert!(inv.g3.norm() < 1e-14);
        assert!((inv.g2_vieta - c(4.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn invariants_zero_triple() {
        let inv = invariants_from_roots(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(inv.g2_pair_sum.norm() == 0.0 && inv.g3.norm() == 0.0);
    }

    #[test]
    fn invariants_reject_nonzero_sum() {
        assert!(matches!(
            invariants_from_roots(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)),
            Err(Error::RootsNotZeroSum { .. })
        ));
    }

    #[test]
    fn roots_invariants_roundtrip() {
        let r = roots_from_invariants(c(7.0, 0.0), c(3.0, 0.0));
        let inv = invariants_from_roots(r.roots[0], r.roots[1], r.roots[2]).unwrap();
        assert!((inv.g2_vieta - c(7.0, 0.0)).norm() < 1e-10);
        assert!((inv.g3 - c(3.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn roundtrip_random_invariants() {
        let mut rng = SplitMix64::new(11_235);
        for _ in 0..50 {
            let (g2, g3) = random_invariants(&mut rng);
            let r = roots_from_invariants(g2, g3);
            let inv = invariants_from_roots(r.roots[0], r.roots[1], r.roots[2]).unwrap();
            assert!((inv.g2_vieta - g2).norm() <= 1e-10 * (1.0 + g2.norm()));
            assert!((inv.g3 - g3).norm() <= 1e-10 * (1.0 + g3.norm()));
        }
    }

    #[test]
    fn params_invariants_hold() {
        let cases = [
            (c(4.0, 0.0), c(0.0, 0.0)),
            (c(7.0, 0.0), c(3.0, 0.0)),
            (c(0.0, 0.0), c(4.0, 0.0)),
            (c(5.0, 1.5), c(1.0, -0.8)),
        ];
        for (g2, g3) in cases {
            let p = EllipticParams::from_invariants(g2, g3).unwrap();
            let root_sum: Complex64 = p.roots.iter().sum();
            assert!(root_sum.norm() < 1e-12, "root sum {root_sum}");
            let omega_sum: Complex64 = p.half_periods.iter().sum();
            assert!(omega_sum.norm() < 1e-10, "omega sum {omega_sum}");
            let scale = 1.0 + g2.norm() + g3.norm();
            for e in p.roots {
                assert!(cubic_residual(g2, g3, e) < 1e-10 * scale);
            }
            // e_j = wp(omega_j) for the stored ordering.
            for j in 0..3 {
                let val = p.wp(p.half_periods[j]).unwrap();
                assert!(
                    (val - p.roots[j]).norm() < 1e-8 * scale,
                    "wp(omega_{j}) = {val} vs {}",
                    p.roots[j]
                );
            }
        }
    }

    #[test]
    fn legendre_relation() {
        for (g2, g3) in [(c(4.0, 0.0), c(0.0, 0.0)), (c(7.0, 0.0), c(3.0, 0.0))] {
            let p = EllipticParams::from_invariants(g2, g3).unwrap();
            let o1 = p.half_periods[0];
            let o3 = p.half_periods[2];
            let eta1 = p.zeta(o1).unwrap();
            let eta3 = p.zeta(o3).unwrap();
            let rel = (eta1 * o3 - eta3 * o1).norm();
            assert!(
                (rel - std::f64::consts::FRAC_PI_2).abs() < 1e-10,
                "legendre relation gave {rel}"
            );
        }
    }

    #[test]
    fn wp_laurent_leading_term() {
        let p = EllipticParams::from_invariants(c(4.0, 0.0), c(0.0, 0.0)).unwrap();
        let z = c(1e-3, 0.0);
        let val = p.wp(z).unwrap();
        let lead = 1.0 / (z * z);
        assert!((val - lead).norm() / lead.norm() < 1e-4, "wp(1e-3) = {val}");
    }

    #[test]
    fn wp_ode_residual_single_point() {
        let p = EllipticParams::from_invariants(c(7.0, 0.0), c(3.0, 0.0)).unwrap();
        let z = c(0.3, 0.2);
        let wp = p.wp(z).unwrap();
        let dwp = p.wp_prime(z).unwrap();
        let res = (dwp * dwp - (4.0 * wp * wp * wp - p.g2 * wp - p.g3)).norm();
        assert!(res < 1e-9 * wp.norm().powi(3).max(1.0), "residual {res:e}");
    }

    #[test]
    fn wp_even_wp_prime_odd() {
        let p = EllipticParams::from_invariants(c(7.0, 0.0), c(3.0, 0.0)).unwrap();
        let mut rng = SplitMix64::new(99);
        let mut tested = 0;
        while tested < 50 {
            let z = c(rng.range(-0.9, 0.9), rng.range(-0.9, 0.9));
            if p.reduce(z).0.norm() < 0.05 * p.lattice_scale() {
                continue;
            }
            tested += 1;
            let wp_p = p.wp(z).unwrap();
            let wp_m = p.wp(-z).unwrap();
            assert!((wp_p - wp_m).norm() < 1e-10 * (1.0 + wp_p.norm()));
            let d_p = p.wp_prime(z).unwrap();
            let d_m = p.wp_prime(-z).unwrap();
            assert!((d_p + d_m).norm() < 1e-10 * (1.0 + d_p.norm()));
            let zt_p = p.zeta(z).unwrap();
            let zt_m = p.zeta(-z).unwrap();
            assert!((zt_p + zt_m).norm() < 1e-10 * (1.0 + zt_p.norm()));
            let sg_p = p.sigma(z).unwrap();
            let sg_m = p.sigma(-z).unwrap();
            assert!((sg_p + sg_m).norm() < 1e-10 * (1.0 + sg_p.norm()));
        }
    }

    #[test]
    fn sigma_and_zeta_near_origin() {
        let p = EllipticParams::from_invariants(c(7.0, 0.0), c(3.0, 0.0)).unwrap();
        let z = c(1e-4, 0.0);
        let sg = p.sigma(z).unwrap();
        assert!((sg - z).norm() / z.norm() < 1e-6, "sigma(1e-4) = {sg}");
        let zt = p.zeta(z).unwrap();
        let lead = 1.0 / z;
        assert!((zt - lead).norm() / lead.norm() < 1e-4, "zeta(1e-4) = {zt}");
    }

    #[test]
    fn zeta_derivative_is_minus_wp() {
        let p = EllipticParams::from_invariants(c(7.0, 0.0), c(3.0, 0.0)).unwrap();
        let z = c(0.4, 0.1);
        let h = 1e-5;
        let fd = (p.zeta(z + c(h, 0.0)).unwrap() - p.zeta(z - c(h, 0.0)).unwrap()) / (2.0 * h);
        let val = (fd + p.wp(z).unwrap()).norm();
        assert!(val < 1e-6, "zeta' + wp = {val:e}");
    }

    #[test]
    fn derivative_chain_fourth_order() {
        // zeta' = -wp and sigma'/sigma = zeta under 4th-order differences.
        let mut rng = SplitMix64::new(314_159);
        let p = EllipticParams::from_invariants(c(7.0, 0.0), c(3.0, 0.0)).unwrap();
        let h = 1e-4;
        let d4 = |f: &dyn Fn(Complex64) -> Complex64, z: Complex64| {
            (-f(z + c(2.0 * h, 0.0)) + 8.0 * f(z + c(h, 0.0)) - 8.0 * f(z - c(h, 0.0))
                + f(z - c(2.0 * h, 0.0)))
                / (12.0 * h)
        };
        let mut tested = 0;
        while tested < 20 {
            let z = c(rng.range(-0.8, 0.8), rng.range(-0.8, 0.8));
            if p.reduce(z).0.norm() < 0.25 * p.lattice_scale() {
                continue;
            }
            tested += 1;
            let dz = d4(&|w| p.zeta(w).unwrap(), z);
            assert!((dz + p.wp(z).unwrap()).norm() < 1e-6);
            let ds = d4(&|w| p.sigma(w).unwrap(), z);
            let ratio = ds / p.sigma(z).unwrap();
            assert!((ratio - p.zeta(z).unwrap()).norm() < 1e-6);
        }
    }

    #[test]
    fn sigma_quasi_periodicity() {
        // Evaluate across one full period and compare against the
        // defining translation identity.
        let p = EllipticParams::from_invariants(c(7.0, 0.0), c(3.0, 0.0)).unwrap();
        let z = c(0.31, 0.17);
        let a = p.basis_a;
        let eta_a = p.zeta(a / 2.0).unwrap();
        let lhs = p.sigma(z + a).unwrap();
        let rhs = -(2.0 * eta_a * (z + a / 2.0)).exp() * p.sigma(z).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * rhs.norm(), "{lhs} vs {rhs}");
    }

    #[test]
    fn wp_inverse_roundtrip() {
        let p = EllipticParams::from_invariants(c(4.0, 0.0), c(0.0, 0.0)).unwrap();
        let e_val = p.roots[0] + c(10.0, 0.0);
        let eps = p.wp_inverse(e_val).unwrap();
        let back = p.wp(eps).unwrap();
        assert!(
            (back - e_val).norm() / e_val.norm() < 1e-8,
            "wp(wp_inverse({e_val})) = {back}"
        );
    }

    #[test]
    fn wp_inverse_large_argument_decay() {
        let p = EllipticParams::from_invariants(c(4.0, 0.0), c(0.0, 0.0)).unwrap();
        let eps = p.wp_inverse(c(1e8, 0.0)).unwrap();
        assert!(eps.norm() < 2e-4, "eps(1e8) = {eps}");
    }

    #[test]
    fn wp_inverse_at_branch_point_errors() {
        let p = EllipticParams::from_invariants(c(4.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(matches!(
            p.wp_inverse(p.roots[0]),
            Err(Error::BranchPointProximity { .. })
        ));
    }

    #[test]
    fn lattice_proximity_detected() {
        let p = EllipticParams::from_invariants(c(4.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(matches!(
            p.wp(c(1e-9, 0.0)),
            Err(Error::LatticeProximity { .. })
        ));
        // Proximity applies after reduction: a point near a far lattice node.
        let far = p.basis_a * 3.0 + p.basis_b * 2.0 + c(1e-10, 0.0);
        assert!(p.wp(far).is_err());
    }

    #[test]
    fn ode_residual_random_sweep() {
        let mut rng = SplitMix64::new(271_828);
        for case in 0..5 {
            let (g2, g3) = if case < 3 {
                random_invariants(&mut rng)
            } else {
                (
                    c(rng.range(-4.0, 6.0), rng.range(-1.0, 1.0)),
                    c(rng.range(-3.0, 3.0), rng.range(-1.0, 1.0)),
                )
            };
            let p = match EllipticParams::from_invariants(g2, g3) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let mut tested = 0;
            while tested < 100 {
                let s = rng.range(-0.5, 0.5);
                let t = rng.range(-0.5, 0.5);
                let z = p.basis_a * s + p.basis_b * t;
                if p.reduce(z).0.norm() < 0.02 * p.lattice_scale() {
                    continue;
                }
                tested += 1;
                let wp = p.wp(z).unwrap();
                let dwp = p.wp_prime(z).unwrap();
                let res = (dwp * dwp - (4.0 * wp * wp * wp - g2 * wp - g3)).norm();
                assert!(
                    res < 1e-9 * wp.norm().powi(3).max(1.0),
                    "residual {res:e} at z = {z} for g2 = {g2}, g3 = {g3}"
                );
            }
        }
    }
}
