use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{unwrap_phases, GridSpec, Result, SpectralPropagator, WaveError, WaveGrid};

/// Cylindrical Gaussian beam `ψ(x, z) = A·ξ(z)^{−1/2}·exp(−i x²/(2ξ(z)))`
/// with `ξ(z) = z − z0 − ξ0`.
///
/// `Im ξ0 < 0` gives a field that decays off axis. Propagation by `dz`
/// is the Fresnel operator with coefficient `−dz`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBeam", into = "RawBeam")]
pub struct GaussianBeam {
    xi0: Complex64,
    z0: f64,
    amplitude: Complex64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBeam {
    xi0_re: f64,
    xi0_im: f64,
    z0: f64,
    #[serde(default = "one")]
    amplitude_re: f64,
    #[serde(default)]
    amplitude_im: f64,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawBeam> for GaussianBeam {
    type Error = WaveError;

    fn try_from(r: RawBeam) -> Result<Self> {
        GaussianBeam::new(Complex64::new(r.xi0_re, r.xi0_im), r.z0, Complex64::new(r.amplitude_re, r.amplitude_im))
    }
}

impl From<GaussianBeam> for RawBeam {
    fn from(b: GaussianBeam) -> Self {
        RawBeam {
            xi0_re: b.xi0.re,
            xi0_im: b.xi0.im,
            z0: b.z0,
            amplitude_re: b.amplitude.re,
            amplitude_im: b.amplitude.im,
        }
    }
}

/// `ξ` together with the real pair in `1/ξ = 1/ξ₁ − i/ξ₂`, stored as
/// reciprocals so that a flat front reads `inv_xi1 = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XiDecomposition {
    pub xi: Complex64,
    pub inv_xi1: f64,
    pub inv_xi2: f64,
}

impl GaussianBeam {
    pub fn new(xi0: Complex64, z0: f64, amplitude: Complex64) -> Result<Self> {
        if xi0.im == 0.0 || !(xi0.re.is_finite() && xi0.im.is_finite() && z0.is_finite()) {
            return Err(WaveError::InvalidGrid(format!("beam needs finite z0 and Im xi0 != 0, got xi0 = {xi0}")));
        }
        Ok(Self { xi0, z0, amplitude })
    }

    /// Focus at `z0` with `ξ0 = −i·b`.
    pub fn focused(b: f64, z0: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, -b), z0, Complex64::new(1.0, 0.0))
    }

    pub fn xi0(&self) -> Complex64 {
        self.xi0
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn amplitude(&self) -> Complex64 {
        self.amplitude
    }

    pub fn xi(&self, z: f64) -> Complex64 {
        Complex64::new(z - self.z0, 0.0) - self.xi0
    }

    pub fn beam_xi(&self, z: f64) -> XiDecomposition {
        let xi = self.xi(z);
        let inv = xi.inv();
        XiDecomposition { xi, inv_xi1: inv.re, inv_xi2: -inv.im }
    }

    /// Gouy phase: the argument of the `ξ^{−1/2}` amplitude, `½·arg(1/ξ)`,
    /// continuous in `z` because `Im ξ` never changes sign.
    ///
    /// For `Im ξ0 < 0` it rises from `−π/2` at `z → −∞` through `−π/4` at
    /// the focus to `0` at `z → +∞`. Infinite `z` is accepted.
    pub fn gouy_phase(&self, z: f64) -> f64 {
        let b = -self.xi0.im;
        let delta = z - self.z0 - self.xi0.re;
        -0.5 * b.atan2(delta)
    }

    /// `ξ^{−1/2}` on the branch used by [`GaussianBeam::gouy_phase`].
    fn inv_sqrt_xi(&self, z: f64) -> Complex64 {
        Complex64::from_polar(self.xi(z).norm().powf(-0.5), self.gouy_phase(z))
    }

    pub fn field_at(&self, x: f64, z: f64) -> Complex64 {
        let xi = self.xi(z);
        self.amplitude * self.inv_sqrt_xi(z) * (Complex64::new(0.0, -0.5 * x * x) / xi).exp()
    }

    /// Samples the transverse profile at `z`.
    pub fn field(&self, spec: &GridSpec, z: f64) -> Result<WaveGrid> {
        spec.sample(|x| self.field_at(x, z))
    }
}

/// Phase of the on-axis field along `z`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GouyTrace {
    pub z_samples: Vec<f64>,
    pub theta: Vec<f64>,
}

impl GouyTrace {
    pub fn analytic(beam: &GaussianBeam, z_samples: &[f64]) -> Self {
        Self { z_samples: z_samples.to_vec(), theta: z_samples.iter().map(|&z| beam.gouy_phase(z)).collect() }
    }

    pub fn total_sweep(&self) -> f64 {
        match (self.theta.first(), self.theta.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.theta.iter().zip(&other.theta).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Propagates `psi0` (taken to sit at `z_samples[0]`) to every sample and
/// records the unwrapped phase at `x = 0`.
///
/// Samples are evaluated in parallel from one shared spectrum.
pub fn gouy_trace_numeric(psi0: &WaveGrid, z_samples: &[f64]) -> Result<GouyTrace> {
    if z_samples.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(WaveError::UnorderedSamples);
    }
    let Some(&z_start) = z_samples.first() else {
        return Ok(GouyTrace { z_samples: vec![], theta: vec![] });
    };
    psi0.check_resolved()?;
    let prop = SpectralPropagator::new(psi0);
    let axis = psi0.origin_index();
    let raw: Vec<Result<f64>> = z_samples
        .par_iter()
        .map(|&z| {
            let dz = z - z_start;
            if dz == 0.0 {
                return Ok(psi0.samples()[axis].arg());
            }
            let psi = prop.propagate(-dz);
            let fraction = psi.edge_energy_fraction();
            if fraction > super::EDGE_ENERGY_TOL {
                return Err(WaveError::Aliasing { domain: "position", fraction });
            }
            Ok(psi.samples()[axis].arg())
        })
        .collect();
    let raw: Vec<f64> = raw.into_iter().collect::<Result<_>>()?;
    Ok(GouyTrace { z_samples: z_samples.to_vec(), theta: unwrap_phases(&raw)? })
}
