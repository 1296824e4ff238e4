use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GaussianBeam, GridSpec, Result, SpectralPropagator, WaveError, WaveGrid};

/// `|ψ_beam + ψ_ref|²` per sample.
pub fn fringe_pattern(beam: &WaveGrid, reference: &WaveGrid) -> Result<Vec<f64>> {
    Ok(beam.add(reference)?.intensity())
}

/// Displacement of `after` relative to `before`, in fringe periods, read off
/// the phase of the cross spectrum at the fringe frequency. In `(−½, ½]`.
pub fn fringe_shift(xs: &[f64], before: &[f64], after: &[f64], period: f64) -> Result<f64> {
    if xs.len() != before.len() || xs.len() != after.len() || xs.is_empty() {
        return Err(WaveError::GridMismatch);
    }
    let k = 2.0 * PI / period;
    let component = |v: &[f64]| {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        xs.iter().zip(v).map(|(x, i)| (i - mean) * Complex64::from_polar(1.0, -k * x)).sum::<Complex64>()
    };
    // I_after(x) = I_before(x − s) multiplies the component by e^{−iks}
    let ratio = component(after) / component(before);
    let shift = -ratio.arg() / (2.0 * PI);
    Ok(if shift <= -0.5 { shift + 1.0 } else { shift })
}

/// Parameters of the tilted-reference interference demo.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FringeDemoConfig {
    /// Rayleigh parameter `b` in `ξ0 = −i·b`.
    pub b: f64,
    /// Observation planes sit at `z0 ∓ distance`.
    pub distance: f64,
    pub grid: GridSpec,
    /// Reference tilt period.
    pub period: f64,
    /// Fringes are compared on `[−window, window)`.
    pub window: f64,
}

impl Default for FringeDemoConfig {
    fn default() -> Self {
        Self {
            b: 1.0,
            distance: 2000.0,
            grid: GridSpec { n: 65536, x_min: -16384.0, x_max: 16384.0 },
            period: 4.0,
            window: 8.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FringeDemo {
    pub x: Vec<f64>,
    pub intensity_before: Vec<f64>,
    pub intensity_after: Vec<f64>,
    /// In fringe periods.
    pub shift: f64,
}

/// Interferes a focused beam with a tilted plane wave before and after the
/// focus. The "after" field is obtained by numerical propagation through
/// the focus, not from the closed form.
pub fn fringe_demo(cfg: &FringeDemoConfig) -> Result<FringeDemo> {
    cfg.grid.validate()?;
    if !(cfg.b > 0.0 && cfg.distance > 0.0 && cfg.period > 0.0 && cfg.window > 0.0) {
        return Err(WaveError::InvalidGrid("b, distance, period and window must be positive".into()));
    }
    let beam = GaussianBeam::focused(cfg.b, 0.0)?;
    let before = beam.field(&cfg.grid, -cfg.distance)?;
    before.check_resolved()?;
    let after = SpectralPropagator::new(&before).propagate(-2.0 * cfg.distance);
    let fraction = after.edge_energy_fraction();
    if fraction > super::EDGE_ENERGY_TOL {
        return Err(WaveError::Aliasing { domain: "position", fraction });
    }
    let amp = before.samples()[before.origin_index()].norm();
    let k = 2.0 * PI / cfg.period;
    let reference = cfg.grid.sample(|x| Complex64::from_polar(amp, k * x))?;
    let i_before = fringe_pattern(&before, &reference)?;
    let i_after = fringe_pattern(&after, &reference)?;

    let idx: Vec<usize> = (0..before.len()).filter(|&j| (-cfg.window..cfg.window).contains(&before.x(j))).collect();
    if idx.len() < 4 {
        return Err(WaveError::InvalidGrid("window holds fewer than 4 samples".into()));
    }
    let x: Vec<f64> = idx.iter().map(|&j| before.x(j)).collect();
    let intensity_before: Vec<f64> = idx.iter().map(|&j| i_before[j]).collect();
    let intensity_after: Vec<f64> = idx.iter().map(|&j| i_after[j]).collect();
    let shift = fringe_shift(&x, &intensity_before, &intensity_after, cfg.period)?;
    Ok(FringeDemo { x, intensity_before, intensity_after, shift })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_patterns() {
        let spec = GridSpec::default();
        let psi = WaveGrid::unit_gaussian(&spec).unwrap();
        let same = fringe_pattern(&psi, &psi).unwrap();
        for (i, z) in same.iter().zip(psi.samples()) {
            assert!((i - 4.0 * z.norm_sqr()).abs() < 1e-15);
        }
        let cancel = fringe_pattern(&psi.scale(Complex64::new(-1.0, 0.0)), &psi).unwrap();
        assert!(cancel.iter().all(|i| *i == 0.0));
        let other = WaveGrid::unit_gaussian(&GridSpec::new(64, -4.0, 4.0).unwrap()).unwrap();
        assert_eq!(fringe_pattern(&psi, &other), Err(WaveError::GridMismatch));
    }

    #[test]
    fn shift_of_a_translated_cosine() {
        let xs: Vec<f64> = (0..64).map(|j| -8.0 + 0.25 * j as f64).collect();
        let f = |s: f64| xs.iter().map(|x| 1.0 + (2.0 * PI * (x - s) / 4.0).cos()).collect::<Vec<_>>();
        let shift = fringe_shift(&xs, &f(0.0), &f(1.0), 4.0).unwrap();
        assert!((shift - 0.25).abs() < 1e-12);
    }

    #[test]
    fn quarter_period_through_focus() {
        let demo = fringe_demo(&FringeDemoConfig::default()).unwrap();
        assert_eq!(demo.x.len(), 32);
        assert!((demo.shift.abs() - 0.25).abs() < 0.02 * 0.25, "{}", demo.shift);
    }
}
