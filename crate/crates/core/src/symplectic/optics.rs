use serde::{Deserialize, Serialize};

use super::{accumulated_angles, ExactMatrix2, Result, SymplecticError, SymplecticMatrix};

/// Paraxial ray: transverse height `q` and `p = n·θ` (with `n = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayVector {
    pub q: f64,
    pub p: f64,
}

impl RayVector {
    pub const fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }

    pub fn is_finite(&self) -> bool {
        self.q.is_finite() && self.p.is_finite()
    }
}

/// A thin lens of focal length `f` or a free-space gap of length `d`.
///
/// Serializes as `{"lens": {"f": 1.0}}` / `{"free": {"d": 1.0}}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum OpticalElement {
    Lens { f: f64 },
    Free { d: f64 },
}

impl OpticalElement {
    pub fn validate(&self) -> Result<()> {
        match *self {
            OpticalElement::Lens { f } if f == 0.0 || !f.is_finite() => Err(
                SymplecticError::InvalidElement(format!("lens focal length must be finite and nonzero, got {f}")),
            ),
            OpticalElement::Free { d } if !(d >= 0.0) || !d.is_finite() => Err(
                SymplecticError::InvalidElement(format!("free-space distance must be finite and >= 0, got {d}")),
            ),
            _ => Ok(()),
        }
    }

    /// `Lens(f) → [[1, 0], [−1/f, 1]]`, `Free(d) → [[1, d], [0, 1]]`.
    pub fn matrix(&self) -> Result<SymplecticMatrix> {
        self.validate()?;
        Ok(match *self {
            OpticalElement::Lens { f } => SymplecticMatrix::shear_lower(-1.0 / f),
            OpticalElement::Free { d } => SymplecticMatrix::shear_upper(d),
        })
    }

    /// Same as [`OpticalElement::matrix`] in exact rational arithmetic, using
    /// the exact binary value of each float parameter.
    pub fn exact_matrix(&self) -> Result<ExactMatrix2> {
        self.validate()?;
        let m = match *self {
            OpticalElement::Lens { f } => ExactMatrix2::lens(f),
            OpticalElement::Free { d } => ExactMatrix2::free(d),
        };
        m.ok_or_else(|| SymplecticError::InvalidElement("parameter is not a finite float".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSystem", into = "RawSystem")]
pub struct OpticalSystem {
    elements: Vec<OpticalElement>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    elements: Vec<OpticalElement>,
}

impl TryFrom<RawSystem> for OpticalSystem {
    type Error = SymplecticError;

    fn try_from(raw: RawSystem) -> Result<Self> {
        OpticalSystem::new(raw.elements)
    }
}

impl From<OpticalSystem> for RawSystem {
    fn from(sys: OpticalSystem) -> Self {
        RawSystem { elements: sys.elements }
    }
}

impl OpticalSystem {
    pub fn new(elements: Vec<OpticalElement>) -> Result<Self> {
        if elements.is_empty() {
            return Err(SymplecticError::EmptySystem);
        }
        for e in &elements {
            e.validate()?;
        }
        Ok(Self { elements })
    }

    /// `Free(f), Lens(f), Free(f)`: takes a ray parallel to the axis through
    /// the back focal point, a quarter turn in phase space.
    pub fn focal_relay(f: f64) -> Result<Self> {
        Self::new(vec![
            OpticalElement::Free { d: f },
            OpticalElement::Lens { f },
            OpticalElement::Free { d: f },
        ])
    }

    /// `copies` back-to-back repetitions of [`OpticalSystem::focal_relay`].
    pub fn focal_relays(f: f64, copies: usize) -> Result<Self> {
        let cell = Self::focal_relay(f)?;
        cell.repeat(copies)
    }

    pub fn repeat(&self, copies: usize) -> Result<Self> {
        Self::new(self.elements.repeat(copies))
    }

    pub fn elements(&self) -> &[OpticalElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Product of the element matrices with the last element leftmost.
    pub fn system_matrix(&self) -> SymplecticMatrix {
        self.elements.iter().fold(SymplecticMatrix::identity(1), |acc, e| {
            // elements were validated on construction
            SymplecticMatrix::from_trusted(e.matrix().expect("validated element").matrix() * acc.matrix())
        })
    }

    pub fn system_matrix_exact(&self) -> Result<ExactMatrix2> {
        self.elements
            .iter()
            .try_fold(ExactMatrix2::identity(), |acc, e| Ok(e.exact_matrix()?.mul(&acc)))
    }

    /// Ray snapshots: `r0` followed by the ray after every element.
    pub fn trace_ray(&self, r0: RayVector) -> Vec<RayVector> {
        let mut out = Vec::with_capacity(self.elements.len() + 1);
        out.push(r0);
        let mut ray = r0;
        for e in &self.elements {
            ray = match *e {
                OpticalElement::Lens { f } => RayVector::new(ray.q, ray.p - ray.q / f),
                OpticalElement::Free { d } => RayVector::new(ray.q + d * ray.p, ray.p),
            };
            out.push(ray);
        }
        out
    }

    /// Snapshots paired with the running phase-space winding angle.
    pub fn trace_with_angles(&self, r0: RayVector) -> Result<Vec<(RayVector, f64)>> {
        let rays = self.trace_ray(r0);
        let angles = accumulated_angles(&rays)?;
        Ok(rays.into_iter().zip(angles).collect())
    }
}
