use std::fmt;

/// Error type shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// g2^3 = 27 g3^2: the cubic has a repeated root and the lattice degenerates.
    DegenerateLattice { g2_cubed_minus_27_g3_squared: f64 },
    /// Evaluation point landed within the proximity tolerance of a lattice point.
    LatticeProximity { distance: f64, tolerance: f64 },
    /// Half-period construction could not match the cubic roots.
    HalfPeriodMismatch { worst: f64 },
    /// Lower integration limit sits on (or too close to) a branch point of the radical.
    BranchPointProximity { cubic_modulus: f64 },
    /// A quadrature did not reach the requested tolerance.
    QuadratureDidNotConverge { last_delta: f64 },
    /// Root triple violates the zero-sum precondition e1+e2+e3 = 0.
    RootsNotZeroSum { sum_modulus: f64 },
    /// Simultaneous root iteration ran out of sweeps; residuals are reported.
    RootFindingStalled { sweeps: usize, residuals: Vec<f64> },
    /// Polynomial input had no degree-1-or-higher term.
    PolynomialDegreeTooLow,
    /// Spin must be a nonnegative half-integer (2j integral).
    InvalidSpin { value: f64 },
    /// Matrix dimension exceeds the supported cap for this operation.
    DimensionCap { dim: usize, cap: usize },
    /// Input matrix is not Hermitian within the stated tolerance.
    NotHermitian { defect: f64 },
    /// Matrices of an operator pair have mismatched sizes.
    SizeMismatch { left: usize, right: usize },
    /// Sample grid does not cover both spectra with margin.
    GridDoesNotCoverSpectrum,
    /// Perturbation determinant needs Im z != 0.
    RealSpectralParameter,
    /// Raw phase jumped by more than pi/2 between refined grid points.
    PhaseUnwindAmbiguous { lambda: f64, jump: f64 },
    /// An eigenvalue lies on (or hugs) the integration contour.
    EigenvalueOnContour { min_distance: f64 },
    /// Jacobi iteration failed to reduce the off-diagonal norm.
    EigensolverStalled { off_norm: f64 },
    /// Test-function pair (phi, phi') failed the finite-difference consistency spot check.
    InconsistentTestFunctions { point_re: f64, point_im: f64, deviation: f64 },
    /// delta'(g(z)) composition needs g'(w) != 0.
    VanishingDerivative,
    /// Division by the eigenvalue wp(eps) = 0 in the Green kernel.
    ZeroEigenvalue,
    /// The spectral shift expressions are undefined at lambda = 0.
    UndefinedAtZero,
    /// Evaluation point sits on the real axis: neither half-plane applies.
    BoundaryHalfPlane,
    /// Fourier symbol degenerates when X2 = g3 = 0.
    DegenerateSymbol,
    /// Quadratic symbol has coincident roots.
    CoincidentRoots,
    /// Duplication ladder lost all significance (point too close to a stationary point).
    IllConditioned { stage: &'static str },
    /// Generic precondition failure with a short description.
    Precondition(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateLattice { g2_cubed_minus_27_g3_squared } => write!(
                f,
                "degenerate lattice: g2^3 - 27 g3^2 = {g2_cubed_minus_27_g3_squared:e}"
            ),
            Error::LatticeProximity { distance, tolerance } => write!(
                f,
                "point within {distance:e} of a lattice point (tolerance {tolerance:e})"
            ),
            Error::HalfPeriodMismatch { worst } => write!(
                f,
                "half-periods do not reproduce the cubic roots (worst mismatch {worst:e})"
            ),
            Error::BranchPointProximity { cubic_modulus } => write!(
                f,
                "integration limit too close to a branch point (|cubic| = {cubic_modulus:e})"
            ),
            Error::QuadratureDidNotConverge { last_delta } => {
                write!(f, "quadrature did not converge (last delta {last_delta:e})")
            }
            Error::RootsNotZeroSum { sum_modulus } => {
                write!(f, "root triple sum has modulus {sum_modulus:e}, expected 0")
            }
            Error::RootFindingStalled { sweeps, residuals } => write!(
                f,
                "root iteration stalled after {sweeps} sweeps (max residual {:e})",
                residuals.iter().cloned().fold(0.0, f64::max)
            ),
            Error::PolynomialDegreeTooLow => write!(f, "polynomial must have degree >= 1"),
            Error::InvalidSpin { value } => {
                write!(f, "spin must be a nonnegative half-integer, got {value}")
            }
            Error::DimensionCap { dim, cap } => {
                write!(f, "matrix dimension {dim} exceeds cap {cap}")
            }
            Error::NotHermitian { defect } => {
                write!(f, "matrix is not Hermitian (defect {defect:e})")
            }
            Error::SizeMismatch { left, right } => {
                write!(f, "matrix sizes differ: {left} vs {right}")
            }
            Error::GridDoesNotCoverSpectrum => {
                write!(f, "grid does not span both spectra with margin")
            }
            Error::RealSpectralParameter => write!(f, "spectral parameter must have Im z != 0"),
            Error::PhaseUnwindAmbiguous { lambda, jump } => write!(
                f,
                "phase unwinding ambiguous near lambda = {lambda} (raw jump {jump})"
            ),
            Error::EigenvalueOnContour { min_distance } => write!(
                f,
                "eigenvalue within {min_distance:e} of the integration contour"
            ),
            Error::EigensolverStalled { off_norm } => {
                write!(f, "Jacobi sweeps stalled with off-diagonal norm {off_norm:e}")
            }
            Error::InconsistentTestFunctions { point_re, point_im, deviation } => write!(
                f,
                "phi' disagrees with finite differences of phi at ({point_re}, {point_im}): {deviation:e}"
            ),
            Error::VanishingDerivative => write!(f, "g'(w) = 0: composition undefined"),
            Error::ZeroEigenvalue => write!(f, "wp(eps) = 0: Green kernel undefined"),
            Error::UndefinedAtZero => write!(f, "spectral shift undefined at lambda = 0"),
            Error::BoundaryHalfPlane => {
                write!(f, "point lies on the real axis: choose a half-plane")
            }
            Error::DegenerateSymbol => write!(f, "degenerate symbol: X2 = g3 = 0"),
            Error::CoincidentRoots => write!(f, "symbol roots coincide"),
            Error::IllConditioned { stage } => write!(f, "lost significance during {stage}"),
            Error::Precondition(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
