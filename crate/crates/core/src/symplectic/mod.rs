//! Real symplectic matrices and paraxial ray optics.
//!
//! A [`SymplecticMatrix`] is a `2r×2r` real matrix `[[A, B], [C, D]]` whose
//! blocks satisfy the five symplectic block conditions. Optical systems are
//! built from thin lenses and free propagation (refractive index fixed to 1)
//! and map onto `r = 1` matrices; everything else in this module works for
//! general `r`.

mod exact;
mod optics;

pub use exact::{ExactMatrix2, ExactRay};
pub use optics::{OpticalElement, OpticalSystem, RayVector};

use nalgebra::DMatrix;
use thiserror::Error;

/// Largest condition number of the `D` block accepted by
/// [`SymplecticMatrix::canonical_decompose`].
pub const MAX_D_CONDITION: f64 = 1e8;

/// Base tolerance for the block conditions checked on construction. It is
/// scaled by the squared magnitude of the largest entry.
pub const CONSTRUCTION_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymplecticError {
    #[error("matrix is {rows}x{cols}; a square matrix of even dimension is required")]
    Dimension { rows: usize, cols: usize },
    #[error("dimension mismatch: 2r = {left} on the left, 2r = {right} on the right")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix violates the symplectic block conditions (largest residual {residual:e})")]
    NotSymplectic { residual: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("invalid optical element: {0}")]
    InvalidElement(String),
    #[error("optical system has no elements")]
    EmptySystem,
    #[error("block {block} is singular or ill-conditioned (condition number {condition:e})")]
    SingularBlock { block: &'static str, condition: f64 },
    #[error("trajectory snapshot {index} is the zero vector; its angle is undefined")]
    DegenerateTrajectory { index: usize },
    #[error("operation needs r = 1, matrix has r = {0}")]
    NotTwoByTwo(usize),
}

pub type Result<T, E = SymplecticError> = std::result::Result<T, E>;

/// Largest absolute residual over the five block conditions
/// `ADᵗ − BCᵗ = I`, `AᵗC = CᵗA`, `ABᵗ = BAᵗ`, `BᵗD = DᵗB`, `CDᵗ = DCᵗ`.
pub fn symplectic_residual(m: &DMatrix<f64>) -> Result<f64> {
    let (rows, cols) = m.shape();
    if rows != cols || rows % 2 != 0 || rows == 0 {
        return Err(SymplecticError::Dimension { rows, cols });
    }
    let r = rows / 2;
    let a = m.view((0, 0), (r, r));
    let b = m.view((0, r), (r, r));
    let c = m.view((r, 0), (r, r));
    let d = m.view((r, r), (r, r));

    let residuals = [
        &a * d.transpose() - &b * c.transpose() - DMatrix::<f64>::identity(r, r),
        a.transpose() * &c - c.transpose() * &a,
        &a * b.transpose() - &b * a.transpose(),
        b.transpose() * &d - d.transpose() * &b,
        &c * d.transpose() - &d * c.transpose(),
    ];
    Ok(residuals.iter().map(|x| x.amax()).fold(0.0, f64::max))
}

/// True iff every block condition holds entrywise within `tol`.
pub fn is_symplectic(m: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let residual = symplectic_residual(m)?;
    Ok(residual.is_finite() && residual <= tol)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMatrix {
    m: DMatrix<f64>,
}

impl SymplecticMatrix {
    /// Validates the block conditions with a tolerance scaled to the
    /// magnitude of the entries.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(SymplecticError::NonFinite);
        }
        let residual = symplectic_residual(&m)?;
        let scale = m.amax().max(1.0);
        if residual > CONSTRUCTION_TOL * scale * scale {
            return Err(SymplecticError::NotSymplectic { residual });
        }
        Ok(Self { m })
    }

    /// Skips validation; used for products of matrices already known to be
    /// symplectic.
    pub(crate) fn from_trusted(m: DMatrix<f64>) -> Self {
        debug_assert!(m.nrows() == m.ncols() && m.nrows() % 2 == 0);
        Self { m }
    }

    /// `[[a, b], [c, d]]`.
    pub fn from_2x2(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(DMatrix::from_row_slice(2, 2, &[a, b, c, d]))
    }

    pub fn identity(r: usize) -> Self {
        Self::from_trusted(DMatrix::identity(2 * r, 2 * r))
    }

    /// `[[I, b], [0, I]]` for `r = 1`: free propagation / Fresnel shear.
    pub fn shear_upper(b: f64) -> Self {
        Self::from_trusted(DMatrix::from_row_slice(2, 2, &[1.0, b, 0.0, 1.0]))
    }

    /// `[[I, 0], [c, I]]` for `r = 1`: thin lens with `c = −1/f`.
    pub fn shear_lower(c: f64) -> Self {
        Self::from_trusted(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, c, 1.0]))
    }

    /// `diag(s, 1/s)` for `r = 1`.
    pub fn scaling(s: f64) -> Self {
        Self::from_trusted(DMatrix::from_row_slice(2, 2, &[s, 0.0, 0.0, 1.0 / s]))
    }

    /// Half-dimension `r`.
    pub fn dim_r(&self) -> usize {
        self.m.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    fn block(&self, row: usize, col: usize) -> DMatrix<f64> {
        let r = self.dim_r();
        self.m.view((row * r, col * r), (r, r)).into_owned()
    }

    pub fn a(&self) -> DMatrix<f64> {
        self.block(0, 0)
    }

    pub fn b(&self) -> DMatrix<f64> {
        self.block(0, 1)
    }

    pub fn c(&self) -> DMatrix<f64> {
        self.block(1, 0)
    }

    pub fn d(&self) -> DMatrix<f64> {
        self.block(1, 1)
    }

    /// Entry `(i, j)` of the full matrix.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn is_symplectic(&self, tol: f64) -> bool {
        is_symplectic(&self.m, tol).unwrap_or(false)
    }

    /// Matrix product `self · right`: `right` acts first.
    pub fn compose(&self, right: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if self.m.nrows() != right.m.nrows() {
            return Err(SymplecticError::DimensionMismatch {
                left: self.m.nrows(),
                right: right.m.nrows(),
            });
        }
        Ok(Self::from_trusted(&self.m * &right.m))
    }

    pub fn pow(&self, n: u32) -> SymplecticMatrix {
        let mut out = Self::identity(self.dim_r());
        for _ in 0..n {
            out = Self::from_trusted(&self.m * &out.m);
        }
        out
    }

    /// The inverse `−J Sᵗ J`, exact up to rounding of the transpose.
    pub fn inverse(&self) -> SymplecticMatrix {
        let r = self.dim_r();
        let mut inv = DMatrix::zeros(2 * r, 2 * r);
        inv.view_mut((0, 0), (r, r)).copy_from(&self.d().transpose());
        inv.view_mut((0, r), (r, r)).copy_from(&(-self.b().transpose()));
        inv.view_mut((r, 0), (r, r)).copy_from(&(-self.c().transpose()));
        inv.view_mut((r, r), (r, r)).copy_from(&self.a().transpose());
        Self::from_trusted(inv)
    }

    pub fn apply(&self, ray: RayVector) -> Result<RayVector> {
        if self.dim_r() != 1 {
            return Err(SymplecticError::NotTwoByTwo(self.dim_r()));
        }
        Ok(RayVector {
            q: self.m[(0, 0)] * ray.q + self.m[(0, 1)] * ray.p,
            p: self.m[(1, 0)] * ray.q + self.m[(1, 1)] * ray.p,
        })
    }

    /// Largest absolute entry of `self − other`.
    pub fn max_abs_diff(&self, other: &SymplecticMatrix) -> f64 {
        (&self.m - &other.m).amax()
    }

    /// Splits `S = S1·S2·S3` with `S1 = [[I, BD⁻¹], [0, I]]`,
    /// `S2 = [[D⁻¹, 0], [0, D]]` and `S3 = [[I, 0], [CD⁻¹, I]]`.
    ///
    /// Fails when `cond(D)` exceeds [`MAX_D_CONDITION`].
    pub fn canonical_decompose(&self) -> Result<CanonicalDecomposition> {
        let r = self.dim_r();
        let d = self.d();
        let condition = condition_number(&d, self.m.amax());
        if !(condition <= MAX_D_CONDITION) {
            return Err(SymplecticError::SingularBlock { block: "D", condition });
        }
        let d_inv = d.clone().try_inverse().ok_or(SymplecticError::SingularBlock {
            block: "D",
            condition: f64::INFINITY,
        })?;
        let shear = self.b() * &d_inv;
        let lower = self.c() * &d_inv;

        let mut s1 = DMatrix::identity(2 * r, 2 * r);
        s1.view_mut((0, r), (r, r)).copy_from(&shear);
        let mut s2 = DMatrix::zeros(2 * r, 2 * r);
        s2.view_mut((0, 0), (r, r)).copy_from(&d_inv);
        s2.view_mut((r, r), (r, r)).copy_from(&d);
        let mut s3 = DMatrix::identity(2 * r, 2 * r);
        s3.view_mut((r, 0), (r, r)).copy_from(&lower);

        Ok(CanonicalDecomposition {
            upper: Self::from_trusted(s1),
            scaling: Self::from_trusted(s2),
            lower: Self::from_trusted(s3),
            shear,
            d,
            lower_block: lower,
        })
    }
}

/// `σ_max/σ_min`, infinite when the smallest singular value is negligible
/// next to `scale`.
fn condition_number(m: &DMatrix<f64>, scale: f64) -> f64 {
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min <= f64::EPSILON * scale.max(max) || min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Result of [`SymplecticMatrix::canonical_decompose`].
#[derive(Clone, Debug)]
pub struct CanonicalDecomposition {
    /// `S1 = [[I, BD⁻¹], [0, I]]`
    pub upper: SymplecticMatrix,
    /// `S2 = [[D⁻¹, 0], [0, D]]`
    pub scaling: SymplecticMatrix,
    /// `S3 = [[I, 0], [CD⁻¹, I]]`
    pub lower: SymplecticMatrix,
    /// `BD⁻¹`
    pub shear: DMatrix<f64>,
    /// `D`
    pub d: DMatrix<f64>,
    /// `CD⁻¹`
    pub lower_block: DMatrix<f64>,
}

impl CanonicalDecomposition {
    pub fn recompose(&self) -> SymplecticMatrix {
        SymplecticMatrix::from_trusted(self.upper.matrix() * self.scaling.matrix() * self.lower.matrix())
    }
}

/// Accumulated winding angle of a phase-space trajectory, positive in the
/// clockwise sense of the `(q, p)` plane (the sense of the harmonic flow
/// `q̇ = p, ṗ = −q`).
///
/// Each step contributes the signed angle between consecutive snapshots,
/// so consecutive snapshots must subtend less than `π`.
pub fn phase_space_angle(trajectory: &[RayVector]) -> Result<f64> {
    if let Some(index) = trajectory.iter().position(|r| r.q == 0.0 && r.p == 0.0) {
        return Err(SymplecticError::DegenerateTrajectory { index });
    }
    Ok(trajectory
        .windows(2)
        .map(|w| {
            let (u, v) = (w[0], w[1]);
            let cross = u.q * v.p - u.p * v.q;
            let dot = u.q * v.q + u.p * v.p;
            -cross.atan2(dot)
        })
        .sum())
}

/// Running winding angle after each snapshot; the first entry is 0.
pub fn accumulated_angles(trajectory: &[RayVector]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(trajectory.len());
    let mut total = 0.0;
    for k in 0..trajectory.len() {
        if k > 0 {
            total += phase_space_angle(&trajectory[k - 1..=k])?;
        } else if trajectory[0].q == 0.0 && trajectory[0].p == 0.0 {
            return Err(SymplecticError::DegenerateTrajectory { index: 0 });
        }
        out.push(total);
    }
    Ok(out)
}
