//! Lifts of `Sp(2)` to the metaplectic group acting on sampled wavefunctions.
//!
//! Each lift is kept as an operator product of three kinds of factor with a
//! known symplectic image, so the sign ambiguity of the double cover is
//! settled by composing the kernels themselves rather than by convention.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symplectic::{OpticalElement, OpticalSystem, SymplecticError, SymplecticMatrix};
use crate::wavefield::{self, dilate, fresnel_propagate, quadratic_phase, Method, WaveError, WaveGrid};

pub use crate::wavefield::global_phase;

/// Closure tolerance for a loop's system matrix.
pub const LOOP_TOL: f64 = 1e-10;
/// A sign readout must land within this distance of `±1`.
pub const SIGN_TOL: f64 = 0.1;
/// Relative tolerance for a probe to count as even.
pub const EVEN_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetaplecticError {
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error(transparent)]
    Wave(#[from] WaveError),
    #[error("metaplectic lifts are implemented for r = 1 only (got r = {0})")]
    UnsupportedDimension(usize),
    #[error("loop is not closed: max |S - I| = {residual:.3e}")]
    LoopNotClosed { residual: f64 },
    #[error("probe is not even on a symmetric grid (asymmetry {asymmetry:.3e})")]
    ProbeNotEven { asymmetry: f64 },
    #[error("normalized overlap {overlap} is not within {SIGN_TOL} of +1 or -1")]
    AmbiguousSign { overlap: Complex64 },
}

pub type Result<T, E = MetaplecticError> = std::result::Result<T, E>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.as_i32())
    }
}

/// Elementary metaplectic operator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetaplecticFactor {
    /// `exp(−i c P²/2)` ↔ `[[1, c], [0, 1]]`.
    FresnelP2(f64),
    /// `exp(−i c Q²/2)` ↔ `[[1, 0], [−c, 1]]`.
    QuadraticQ2(f64),
    /// `ψ(x) → d^{−1/2} ψ(x/d)` ↔ `diag(d, 1/d)`.
    Scaling(f64),
}

impl MetaplecticFactor {
    pub fn validate(&self) -> Result<()> {
        let bad = match *self {
            MetaplecticFactor::FresnelP2(c) | MetaplecticFactor::QuadraticQ2(c) => !c.is_finite(),
            MetaplecticFactor::Scaling(d) => d == 0.0 || !d.is_finite(),
        };
        if bad {
            return Err(SymplecticError::InvalidElement(format!("invalid metaplectic factor {self:?}")).into());
        }
        Ok(())
    }

    pub fn matrix(&self) -> SymplecticMatrix {
        match *self {
            MetaplecticFactor::FresnelP2(c) => SymplecticMatrix::shear_upper(c),
            MetaplecticFactor::QuadraticQ2(c) => SymplecticMatrix::shear_lower(-c),
            MetaplecticFactor::Scaling(d) => SymplecticMatrix::scaling(d),
        }
    }

    /// Factor of a single optical element; `None` for `Free(0)`.
    pub fn from_element(e: &OpticalElement) -> Option<Self> {
        match *e {
            OpticalElement::Free { d } if d == 0.0 => None,
            OpticalElement::Free { d } => Some(MetaplecticFactor::FresnelP2(d)),
            OpticalElement::Lens { f } => Some(MetaplecticFactor::QuadraticQ2(1.0 / f)),
        }
    }

    pub fn apply(&self, psi: &WaveGrid, method: Method) -> Result<WaveGrid> {
        Ok(match *self {
            MetaplecticFactor::FresnelP2(c) if c == 0.0 => psi.clone(),
            MetaplecticFactor::FresnelP2(c) => fresnel_propagate(psi, c, method)?,
            MetaplecticFactor::QuadraticQ2(c) => quadratic_phase(psi, c),
            MetaplecticFactor::Scaling(d) => dilate(psi, d)?,
        })
    }
}

/// Operator product `factors[0]·factors[1]⋯` times `phase_offset`, with its
/// projection to `Sp(2)` carried alongside.
#[derive(Clone, Debug, PartialEq)]
pub struct MetaplecticElement {
    factors: Vec<MetaplecticFactor>,
    shadow: SymplecticMatrix,
    phase_offset: Complex64,
}

fn product_of(factors: &[MetaplecticFactor]) -> SymplecticMatrix {
    let m = factors.iter().fold(DMatrix::identity(2, 2), |acc, f| acc * f.matrix().matrix());
    SymplecticMatrix::from_trusted(m)
}

impl MetaplecticElement {
    pub fn identity() -> Self {
        Self { factors: vec![], shadow: SymplecticMatrix::identity(1), phase_offset: Complex64::new(1.0, 0.0) }
    }

    /// Factors in operator order: the last one acts first.
    pub fn from_factors(factors: Vec<MetaplecticFactor>) -> Result<Self> {
        for f in &factors {
            f.validate()?;
        }
        let shadow = product_of(&factors);
        Ok(Self { factors, shadow, phase_offset: Complex64::new(1.0, 0.0) })
    }

    pub fn factors(&self) -> &[MetaplecticFactor] {
        &self.factors
    }

    /// Projection `ρ(M)`.
    pub fn shadow(&self) -> &SymplecticMatrix {
        &self.shadow
    }

    pub fn phase_offset(&self) -> Complex64 {
        self.phase_offset
    }

    /// Multiplies by a unit phase.
    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase_offset *= Complex64::from_polar(1.0, phase);
        self
    }

    /// `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&rhs.factors);
        Self {
            factors,
            shadow: SymplecticMatrix::from_trusted(self.shadow.matrix() * rhs.shadow.matrix()),
            phase_offset: self.phase_offset * rhs.phase_offset,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc.compose(self))
    }

    /// Applies the factors right to left, then the phase offset.
    pub fn apply(&self, psi: &WaveGrid, method: Method) -> Result<WaveGrid> {
        let mut out = psi.clone();
        for f in self.factors.iter().rev() {
            out = f.apply(&out, method)?;
        }
        if self.phase_offset != Complex64::new(1.0, 0.0) {
            out = out.scale(self.phase_offset);
        }
        Ok(out)
    }
}

fn is_identity_block(m: &DMatrix<f64>, value: f64) -> bool {
    m.iter().all(|x| *x == value)
}

/// Canonical lift `exp(−i·BD⁻¹·P²/2) · Scaling(D⁻¹) · exp(+i·CD⁻¹·Q²/2)`
/// of `S = S1·S2·S3`; identity factors are dropped.
pub fn lift(s: &SymplecticMatrix) -> Result<MetaplecticElement> {
    if s.dim_r() != 1 {
        return Err(MetaplecticError::UnsupportedDimension(s.dim_r()));
    }
    let dec = s.canonical_decompose()?;
    let mut factors = Vec::with_capacity(3);
    if !is_identity_block(&dec.shear, 0.0) {
        factors.push(MetaplecticFactor::FresnelP2(dec.shear[(0, 0)]));
    }
    if !is_identity_block(&dec.d, 1.0) {
        factors.push(MetaplecticFactor::Scaling(1.0 / dec.d[(0, 0)]));
    }
    if !is_identity_block(&dec.lower_block, 0.0) {
        factors.push(MetaplecticFactor::QuadraticQ2(-dec.lower_block[(0, 0)]));
    }
    Ok(MetaplecticElement { factors, shadow: s.clone(), phase_offset: Complex64::new(1.0, 0.0) })
}

/// One factor per optical element (`Free(0)` contributes none); the first
/// element acts first, so it is the rightmost factor.
pub fn lift_system(sys: &OpticalSystem) -> MetaplecticElement {
    let factors: Vec<_> = sys.elements().iter().rev().filter_map(MetaplecticFactor::from_element).collect();
    MetaplecticElement { factors, shadow: sys.system_matrix(), phase_offset: Complex64::new(1.0, 0.0) }
}

/// Normalized overlap, read as a sign.
fn sign_of(reference: &WaveGrid, out: &WaveGrid) -> Result<Sign> {
    let overlap = reference.inner(out)? / (reference.norm() * out.norm());
    if (overlap - 1.0).norm() <= SIGN_TOL {
        Ok(Sign::Plus)
    } else if (overlap + 1.0).norm() <= SIGN_TOL {
        Ok(Sign::Minus)
    } else {
        Err(MetaplecticError::AmbiguousSign { overlap })
    }
}

/// `λ` in `M(a·b) = λ·M(a)·M(b)`, measured on `probe`.
pub fn cocycle_sign_elements(
    m_ab: &MetaplecticElement,
    m_a: &MetaplecticElement,
    m_b: &MetaplecticElement,
    probe: &WaveGrid,
    method: Method,
) -> Result<Sign> {
    let direct = m_ab.apply(probe, method)?;
    let composed = m_a.apply(&m_b.apply(probe, method)?, method)?;
    sign_of(&composed, &direct)
}

/// `λ(Sa, Sb)` for the canonical lifts.
pub fn cocycle_sign(sa: &SymplecticMatrix, sb: &SymplecticMatrix, probe: &WaveGrid, method: Method) -> Result<Sign> {
    let sab = sa.compose(sb)?;
    cocycle_sign_elements(&lift(&sab)?, &lift(sa)?, &lift(sb)?, probe, method)
}

/// `max |ψ(x) − ψ(−x)| / max |ψ|`, infinite on a non-symmetric grid.
pub fn asymmetry(psi: &WaveGrid) -> f64 {
    if !psi.is_symmetric() {
        return f64::INFINITY;
    }
    let s = psi.samples();
    let n = s.len();
    let peak = s.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let worst = (0..n).map(|j| (s[j] - s[(n - j) % n]).norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        0.0
    } else {
        worst / peak
    }
}

/// Sign acquired by an even probe carried around a closed loop of optical
/// elements; `−1` exhibits the double cover.
pub fn holonomy_loop(sys_loop: &OpticalSystem, probe: &WaveGrid, method: Method) -> Result<Sign> {
    let residual = sys_loop.system_matrix().max_abs_diff(&SymplecticMatrix::identity(1));
    if !(residual <= LOOP_TOL) {
        return Err(MetaplecticError::LoopNotClosed { residual });
    }
    let asym = asymmetry(probe);
    if !(asym <= EVEN_TOL) {
        return Err(MetaplecticError::ProbeNotEven { asymmetry: asym });
    }
    let out = lift_system(sys_loop).apply(probe, method)?;
    sign_of(probe, &out)
}

/// Global phase of `M` on `probe`.
pub fn phase_of(m: &MetaplecticElement, probe: &WaveGrid, method: Method) -> Result<f64> {
    Ok(wavefield::global_phase(&m.apply(probe, method)?, probe)?)
}
