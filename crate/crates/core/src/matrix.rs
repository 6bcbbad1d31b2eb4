//! Dense complex matrices with the linear-algebra kernels the operator
//! modules need: Hermitian Jacobi eigensolver, LU solves, the scaled
//! series exponential, and the trace-driven characteristic polynomial.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{poly_roots, ComplexPoly};

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must form a square matrix");
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(&other.data) {
            *o += b;
        }
        out
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(&other.data) {
            *o -= b;
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= c;
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from the adjoint.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn commutator(&self, other: &CMatrix) -> CMatrix {
        self.mul(other).sub(&other.mul(self))
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian
/// matrix by cyclic complex Jacobi rotations.
pub fn hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let defect = a.hermitian_defect();
    if defect > 1e-10 * (1.0 + a.max_abs()) {
        return Err(Error::NotHermitian { defect });
    }
    let n = a.dim();
    let mut m = a.clone();
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius().max(1e-300);
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // tan(2 phi) = 2r / (app - aqq)
                let tau = (app - aqq) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Columns mix as (p, q) <- (c p - s* conj(phase) q, ...);
                // rotation G: G[p,p] = c, G[p,q] = s*phase, G[q,p] = -s*conj(phase), G[q,q] = c
                // applied as m <- G^H m G with A'_pq = 0.
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * c + mkq * s * phase.conj();
                    m[(k, q)] = -mkp * s * phase + mkq * c;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = mpk * c + mqk * s * phase;
                    m[(q, k)] = -mpk * s * phase.conj() + mqk * c;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * s * phase.conj();
                    v[(k, q)] = -vkp * s * phase + vkq * c;
                }
            }
        }
    }
    let mut off = 0.0f64;
    for p in 0..n {
        for q in (p + 1)..n {
            off += m[(p, q)].norm_sqr();
        }
    }
    if off.sqrt() > 1e-10 * scale {
        return Err(Error::EigensolverStalled { off_norm: off.sqrt() });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, new_col)] = v[(k, old_col)];
        }
    }
    Ok((eigenvalues, vectors))
}

/// LU decomposition with partial pivoting. Returns the packed factors,
/// the pivot permutation, and the parity sign.
struct Lu {
    n: usize,
    lu: Vec<Complex64>,
    pivots: Vec<usize>,
    sign: f64,
    /// Smallest pivot magnitude relative to the matrix scale.
    min_pivot_rel: f64,
}

fn lu_decompose(a: &CMatrix) -> Lu {
    let n = a.dim();
    let mut lu = a.data.clone();
    let mut pivots: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let scale = a.max_abs().max(1e-300);
    let mut min_pivot_rel = f64::INFINITY;
    for col in 0..n {
        let mut best = col;
        let mut best_norm = lu[col * n + col].norm();
        for row in (col + 1)..n {
            let v = lu[row * n + col].norm();
            if v > best_norm {
                best = row;
                best_norm = v;
            }
        }
        if best != col {
            for j in 0..n {
                lu.swap(col * n + j, best * n + j);
            }
            pivots.swap(col, best);
            sign = -sign;
        }
        let pivot = lu[col * n + col];
        min_pivot_rel = min_pivot_rel.min(pivot.norm() / scale);
        if pivot.norm() == 0.0 {
            continue;
        }
        for row in (col + 1)..n {
            let factor = lu[row * n + col] / pivot;
            lu[row * n + col] = factor;
            for j in (col + 1)..n {
                let sub = factor * lu[col * n + j];
                lu[row * n + j] -= sub;
            }
        }
    }
    Lu { n, lu, pivots, sign, min_pivot_rel }
}

impl Lu {
    fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.pivots.iter().map(|&p| b[p]).collect();
        // Forward substitution (unit lower triangle).
        for i in 1..n {
            for j in 0..i {
                let sub = self.lu[i * n + j] * x[j];
                x[i] -= sub;
            }
        }
        // Back substitution (upper triangle).
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let sub = self.lu[i * n + j] * x[j];
                x[i] -= sub;
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    fn det(&self) -> Complex64 {
        let mut d = Complex64::new(self.sign, 0.0);
        for i in 0..self.n {
            d *= self.lu[i * self.n + i];
        }
        d
    }
}

/// Solve A x = b by LU with partial pivoting.
pub fn solve(a: &CMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let lu = lu_decompose(a);
    if lu.min_pivot_rel < 1e-14 {
        return Err(Error::IllConditioned { stage: "linear solve" });
    }
    Ok(lu.solve(b))
}

/// Determinant via LU.
pub fn determinant(a: &CMatrix) -> Complex64 {
    lu_decompose(a).det()
}

/// Reciprocal pivot-based conditioning probe: the smallest pivot relative
/// to the matrix scale. Near-zero means a (numerically) singular matrix.
pub fn min_pivot_rel(a: &CMatrix) -> f64 {
    lu_decompose(a).min_pivot_rel
}

/// Matrix exponential by scaling-and-squaring of the truncated series
/// (order 18, scaled until the max-abs norm is below 0.5).
pub fn matrix_exp(a: &CMatrix) -> CMatrix {
    let n = a.dim();
    let norm = a.max_abs() * n as f64;
    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > 0.5 && squarings < 60 {
        scaled_norm *= 0.5;
        squarings += 1;
    }
    let b = a.scale(Complex64::new(2f64.powi(-(squarings as i32)), 0.0));
    let mut term = CMatrix::identity(n);
    let mut sum = CMatrix::identity(n);
    for k in 1..=18 {
        term = term.mul(&b).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    sum
}

/// Characteristic polynomial det(E I - M) through the Faddeev-LeVerrier
/// trace recursion (ascending coefficients, monic). Dimension capped at 64.
pub fn charpoly(m: &CMatrix) -> Result<ComplexPoly> {
    let n = m.dim();
    if n > 64 {
        return Err(Error::DimensionCap { dim: n, cap: 64 });
    }
    // det(E I - M) = E^n + c_1 E^{n-1} + ... + c_n with
    // M_1 = M, c_1 = -tr M_1, M_{k+1} = M (M_k + c_k I), c_{k+1} = -tr(M_{k+1})/(k+1).
    let mut coeffs_desc = vec![Complex64::new(1.0, 0.0)];
    let mut mk = m.clone();
    let mut ck = -mk.trace();
    coeffs_desc.push(ck);
    for k in 2..=n {
        let mut shifted = mk;
        for i in 0..n {
            shifted[(i, i)] += ck;
        }
        mk = m.mul(&shifted);
        ck = -mk.trace() / k as f64;
        coeffs_desc.push(ck);
    }
    coeffs_desc.reverse();
    Ok(ComplexPoly::from_coeffs_exact(coeffs_desc))
}

/// Eigenvalues of a general complex matrix: Durand-Kerner on the
/// characteristic polynomial, each root polished by a few rounds of
/// inverse iteration with Rayleigh-quotient updates on the matrix itself.
pub fn general_eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    let n = m.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let poly = charpoly(m)?;
    let set = poly_roots(&poly)?;
    let mut out = Vec::with_capacity(n);
    for (idx, &root) in set.roots.iter().enumerate() {
        out.push(polish_eigenvalue(m, root, idx));
    }
    Ok(out)
}

fn polish_eigenvalue(m: &CMatrix, lambda0: Complex64, seed: usize) -> Complex64 {
    let n = m.dim();
    let mut lambda = lambda0;
    // Deterministic, index-dependent start vector.
    let mut x: Vec<Complex64> = (0..n)
        .map(|i| {
            let t = ((i + 1) * (seed + 3)) as f64;
            Complex64::new((1.3 * t).sin() + 0.2, (0.7 * t).cos())
        })
        .collect();
    normalize(&mut x);
    for _ in 0..4 {
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] -= lambda;
        }
        let lu = lu_decompose(&shifted);
        if lu.min_pivot_rel < 1e-16 {
            break; // numerically exact eigenvalue already
        }
        let mut y = lu.solve(&x);
        if y.iter().any(|v| !v.is_finite()) {
            break;
        }
        normalize(&mut y);
        // Rayleigh quotient x^H M x.
        let mx = m.apply(&y);
        let num: Complex64 = y.iter().zip(&mx).map(|(a, b)| a.conj() * b).sum();
        let den: f64 = y.iter().map(|a| a.norm_sqr()).sum();
        let next = num / den;
        x = y;
        if (next - lambda).norm() < 1e-15 * (1.0 + lambda.norm()) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda
}

fn normalize(x: &mut [Complex64]) {
    let norm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for v in x.iter_mut() {
            *v /= norm;
        }
    }
}
