//! Sampled 1-D wavefunctions and the paraxial propagators acting on them.

mod beam;
mod fringe;

pub use beam::{gouy_trace_numeric, GaussianBeam, GouyTrace, XiDecomposition};
pub use fringe::{fringe_demo, fringe_pattern, fringe_shift, FringeDemo, FringeDemoConfig};

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_N: usize = 4096;
pub const DEFAULT_X_MIN: f64 = -20.0;
pub const DEFAULT_X_MAX: f64 = 20.0;
pub const MIN_N: usize = 16;
/// Energy fraction allowed in the outer sixteenth of the grid (either domain).
pub const EDGE_ENERGY_TOL: f64 = 1e-6;
/// Below this `|f|` the Fresnel kernel is treated as its identity limit.
pub const FRESNEL_IDENTITY_LIMIT: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WaveError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grids differ in size, spacing or origin")]
    GridMismatch,
    #[error("Fresnel coefficient must be finite and nonzero, got {0}")]
    BadCoefficient(f64),
    #[error("Fresnel kernel for f = {f} oscillates faster than the grid resolves ((N-1)dx^2/|f| = {ratio:.3} >= pi)")]
    Nyquist { f: f64, ratio: f64 },
    #[error("{domain} edge holds energy fraction {fraction:.3e} (limit {EDGE_ENERGY_TOL:e})")]
    Aliasing { domain: &'static str, fraction: f64 },
    #[error("states are not proportional: |<ref,out>| / (|ref||out|) = {ratio:.4}")]
    NotProportional { ratio: f64 },
    #[error("phase jump of {step:.4} rad at sample {index} exceeds pi/2")]
    PhaseJump { index: usize, step: f64 },
    #[error("sample sequence must be non-decreasing")]
    UnorderedSamples,
}

pub type Result<T, E = WaveError> = std::result::Result<T, E>;

/// Grid geometry: `x_j = x_min + j·dx`, `dx = (x_max − x_min)/N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(rename = "N")]
    pub n: usize,
    pub x_min: f64,
    pub x_max: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { n: DEFAULT_N, x_min: DEFAULT_X_MIN, x_max: DEFAULT_X_MAX }
    }
}

impl GridSpec {
    pub fn new(n: usize, x_min: f64, x_max: f64) -> Result<Self> {
        let g = Self { n, x_min, x_max };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < MIN_N || self.n % 2 != 0 {
            return Err(WaveError::InvalidGrid(format!("N must be even and >= {MIN_N}, got {}", self.n)));
        }
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_max > self.x_min) {
            return Err(WaveError::InvalidGrid(format!(
                "need finite x_min < x_max, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn sample(&self, f: impl Fn(f64) -> Complex64) -> Result<WaveGrid> {
        self.validate()?;
        let dx = self.dx();
        WaveGrid::new((0..self.n).map(|j| f(self.x_min + j as f64 * dx)).collect(), self.x_min, dx)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Fourier multiplier `exp(−i f k²/2)`.
    #[default]
    Spectral,
    /// Direct `O(N²)` evaluation of the Fresnel integral.
    Quadrature,
}

/// Uniformly sampled complex wavefunction.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveGrid {
    samples: Vec<Complex64>,
    x0: f64,
    dx: f64,
}

/// Angular wavenumbers in FFT order.
fn wavenumbers(n: usize, dx: f64) -> Vec<f64> {
    let scale = 2.0 * PI / (n as f64 * dx);
    (0..n)
        .map(|m| {
            let m = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
            m * scale
        })
        .collect()
}

fn fft_pair(n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    let mut planner = FftPlanner::new();
    (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
}

/// Fraction of `Σ|v|²` carried by the indices `idx`.
fn energy_fraction(v: &[Complex64], idx: impl Iterator<Item = usize>) -> f64 {
    let total: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    idx.map(|j| v[j].norm_sqr()).sum::<f64>() / total
}

impl WaveGrid {
    pub fn new(samples: Vec<Complex64>, x0: f64, dx: f64) -> Result<Self> {
        let n = samples.len();
        if n < MIN_N || n % 2 != 0 {
            return Err(WaveError::InvalidGrid(format!("N must be even and >= {MIN_N}, got {n}")));
        }
        if !(dx > 0.0 && dx.is_finite() && x0.is_finite()) {
            return Err(WaveError::InvalidGrid(format!("need finite x0 and dx > 0, got x0 = {x0}, dx = {dx}")));
        }
        if samples.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(WaveError::InvalidGrid("non-finite sample".into()));
        }
        Ok(Self { samples, x0, dx })
    }

    /// `π^{−1/4}·exp(−x²/2)` on `spec`.
    pub fn unit_gaussian(spec: &GridSpec) -> Result<Self> {
        let c = PI.powf(-0.25);
        spec.sample(|x| Complex64::new(c * (-0.5 * x * x).exp(), 0.0))
    }

    /// Normalized Hermite–Gauss function `h_n(x)` on `spec`.
    pub fn hermite_gaussian(spec: &GridSpec, n: usize) -> Result<Self> {
        spec.sample(|x| Complex64::new(hermite_function(n, x), 0.0))
    }

    fn with_samples(&self, samples: Vec<Complex64>) -> Self {
        Self { samples, x0: self.x0, dx: self.dx }
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec { n: self.len(), x_min: self.x0, x_max: self.x0 + self.len() as f64 * self.dx }
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|j| self.x(j))
    }

    /// Index of the sample closest to `x = 0`.
    pub fn origin_index(&self) -> usize {
        ((-self.x0 / self.dx).round().max(0.0) as usize).min(self.len() - 1)
    }

    /// `x_{N−j} = −x_j` (indices mod N).
    pub fn is_symmetric(&self) -> bool {
        let half = self.len() as f64 * self.dx / 2.0;
        (self.x0 + half).abs() <= 1e-12 * half.max(1.0)
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        let tol = 1e-12 * self.dx;
        self.len() == other.len() && (self.dx - other.dx).abs() <= tol && (self.x0 - other.x0).abs() <= tol
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(WaveError::GridMismatch)
        }
    }

    /// `⟨self, other⟩ = Σ conj(self)·other·dx`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same(other)?;
        Ok(self.samples.iter().zip(&other.samples).map(|(a, b)| a.conj() * b).sum::<Complex64>() * self.dx)
    }

    pub fn norm(&self) -> f64 {
        (self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dx).sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.with_samples(self.samples.iter().map(|z| z * c).collect())
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scale(Complex64::new(1.0 / n, 0.0))
        }
    }

    /// Largest `|self − other|` over the samples.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok(self.samples.iter().zip(&other.samples).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// `‖self − other‖ / ‖other‖`.
    pub fn relative_l2(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        let diff: f64 = self.samples.iter().zip(&other.samples).map(|(a, b)| (a - b).norm_sqr()).sum();
        let base: f64 = other.samples.iter().map(|z| z.norm_sqr()).sum();
        Ok((diff / base).sqrt())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.with_samples(self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect()))
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Energy fraction in the outer `N/16` samples on each side.
    pub fn edge_energy_fraction(&self) -> f64 {
        let n = self.len();
        let m = n / 16;
        energy_fraction(&self.samples, (0..m).chain(n - m..n))
    }

    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut buf = self.samples.clone();
        fft_pair(self.len()).0.process(&mut buf);
        buf
    }

    /// Energy fraction in the outer sixteenth of the wavenumber band on each side.
    pub fn spectral_edge_fraction(&self) -> f64 {
        let spec = self.spectrum();
        let n = self.len();
        let m = n / 16;
        energy_fraction(&spec, n / 2 - m..n / 2 + m)
    }

    /// Fails if the state reaches the grid edge in position or wavenumber.
    pub fn check_resolved(&self) -> Result<()> {
        let fraction = self.edge_energy_fraction();
        if fraction > EDGE_ENERGY_TOL {
            return Err(WaveError::Aliasing { domain: "position", fraction });
        }
        let fraction = self.spectral_edge_fraction();
        if fraction > EDGE_ENERGY_TOL {
            return Err(WaveError::Aliasing { domain: "wavenumber", fraction });
        }
        Ok(())
    }

    /// `⟨Q⟩` and `⟨P⟩` with `P = −i d/dx`, the latter from the spectrum.
    pub fn centroid(&self) -> (f64, f64) {
        let norm2: f64 = self.samples.iter().map(|z| z.norm_sqr()).sum();
        let q = self.xs().zip(&self.samples).map(|(x, z)| x * z.norm_sqr()).sum::<f64>() / norm2;
        let spec = self.spectrum();
        let ks = wavenumbers(self.len(), self.dx);
        let spec_norm: f64 = spec.iter().map(|z| z.norm_sqr()).sum();
        let p = ks.iter().zip(&spec).map(|(k, z)| k * z.norm_sqr()).sum::<f64>() / spec_norm;
        (q, p)
    }
}

/// `h_n(x) = (2ⁿ n! √π)^{−1/2} H_n(x) e^{−x²/2}` by the stable recurrence.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for k in 0..n {
        let next = (2.0 / (k + 1) as f64).sqrt() * x * cur - (k as f64 / (k + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Principal `1/√(2πif)`.
pub fn fresnel_prefactor(f: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI * f).sqrt().inv()
}

/// Applies `exp(−i f P²/2)`, the Fresnel kernel
/// `(2πif)^{−1/2} ∫ψ(x′) exp[−(x′ − x)²/(2if)] dx′`.
pub fn fresnel_propagate(psi: &WaveGrid, f: f64, method: Method) -> Result<WaveGrid> {
    if f == 0.0 || !f.is_finite() {
        return Err(WaveError::BadCoefficient(f));
    }
    psi.check_resolved()?;
    let out = match method {
        Method::Spectral => spectral_propagate(psi, f),
        Method::Quadrature if f.abs() < FRESNEL_IDENTITY_LIMIT => spectral_propagate(psi, f),
        Method::Quadrature => quadrature_propagate(psi, f)?,
    };
    let fraction = out.edge_energy_fraction();
    if fraction > EDGE_ENERGY_TOL {
        return Err(WaveError::Aliasing { domain: "position", fraction });
    }
    Ok(out)
}

/// Spectral propagation of a precomputed spectrum.
pub(crate) struct SpectralPropagator {
    spectrum: Vec<Complex64>,
    ks: Vec<f64>,
    inverse: Arc<dyn Fft<f64>>,
    template: WaveGrid,
}

impl SpectralPropagator {
    pub(crate) fn new(psi: &WaveGrid) -> Self {
        let (fwd, inv) = fft_pair(psi.len());
        let mut spectrum = psi.samples.clone();
        fwd.process(&mut spectrum);
        Self { spectrum, ks: wavenumbers(psi.len(), psi.dx), inverse: inv, template: psi.clone() }
    }

    pub(crate) fn propagate(&self, f: f64) -> WaveGrid {
        let n = self.spectrum.len() as f64;
        let mut buf: Vec<Complex64> = self
            .spectrum
            .iter()
            .zip(&self.ks)
            .map(|(s, k)| s * Complex64::from_polar(1.0 / n, -0.5 * f * k * k))
            .collect();
        self.inverse.process(&mut buf);
        self.template.with_samples(buf)
    }
}

fn spectral_propagate(psi: &WaveGrid, f: f64) -> WaveGrid {
    SpectralPropagator::new(psi).propagate(f)
}

fn quadrature_propagate(psi: &WaveGrid, f: f64) -> Result<WaveGrid> {
    let n = psi.len();
    let dx = psi.dx;
    let ratio = (n - 1) as f64 * dx * dx / f.abs();
    if ratio >= PI {
        return Err(WaveError::Nyquist { f, ratio });
    }
    // Toeplitz kernel: depends on |i − j| only
    let pre = fresnel_prefactor(f) * dx;
    let kernel: Vec<Complex64> = (0..n)
        .map(|m| {
            let d = m as f64 * dx;
            pre * Complex64::from_polar(1.0, d * d / (2.0 * f))
        })
        .collect();
    let samples = &psi.samples;
    let out: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, s) in samples.iter().enumerate() {
                acc += kernel[i.abs_diff(j)] * s;
            }
            acc
        })
        .collect();
    Ok(psi.with_samples(out))
}

/// Pointwise `exp(−i c x²/2)`.
pub fn quadratic_phase(psi: &WaveGrid, c: f64) -> WaveGrid {
    if c == 0.0 {
        return psi.clone();
    }
    psi.with_samples(
        psi.xs()
            .zip(&psi.samples)
            .map(|(x, z)| z * Complex64::from_polar(1.0, -0.5 * c * x * x))
            .collect(),
    )
}

/// `ψ(x) → d^{−1/2}·ψ(x/d)` with the principal root, so `d < 0` carries `−i`.
///
/// `d = ±1` on a symmetric grid is an exact index map; other values use
/// trigonometric interpolation of the samples.
pub fn dilate(psi: &WaveGrid, d: f64) -> Result<WaveGrid> {
    if d == 0.0 || !d.is_finite() {
        return Err(WaveError::BadCoefficient(d));
    }
    let factor = Complex64::new(d, 0.0).sqrt().inv();
    let n = psi.len();
    if d == 1.0 {
        return Ok(psi.clone());
    }
    if d == -1.0 && psi.is_symmetric() {
        let out = (0..n).map(|j| factor * psi.samples[(n - j) % n]).collect();
        return Ok(psi.with_samples(out));
    }
    psi.check_resolved()?;
    let spec = psi.spectrum();
    let ks = wavenumbers(n, psi.dx);
    let inv_n = 1.0 / n as f64;
    let out: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let y = psi.x(j) / d - psi.x0;
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, (s, k)) in spec.iter().zip(&ks).enumerate() {
                if m == n / 2 {
                    // split the Nyquist bin evenly between ±k
                    acc += s * Complex64::new((k * y).cos(), 0.0);
                } else {
                    acc += s * Complex64::from_polar(1.0, k * y);
                }
            }
            factor * acc * inv_n
        })
        .collect();
    let out = psi.with_samples(out);
    let fraction = out.edge_energy_fraction();
    if fraction > EDGE_ENERGY_TOL {
        return Err(WaveError::Aliasing { domain: "position", fraction });
    }
    Ok(out)
}

/// `arg⟨ψ_ref, ψ_out⟩` in `(−π, π]`; requires the states to agree up to phase.
pub fn global_phase(psi_out: &WaveGrid, psi_ref: &WaveGrid) -> Result<f64> {
    let overlap = psi_ref.inner(psi_out)?;
    let ratio = overlap.norm() / (psi_ref.norm() * psi_out.norm());
    if !(ratio >= 0.9) {
        return Err(WaveError::NotProportional { ratio });
    }
    Ok(overlap.arg())
}

/// Continues each phase onto the branch nearest its predecessor.
pub fn unwrap_phases(raw: &[f64]) -> Result<Vec<f64>> {
    let mut out: Vec<f64> = Vec::with_capacity(raw.len());
    for (i, &p) in raw.iter().enumerate() {
        match out.last() {
            None => out.push(p),
            Some(&prev) => {
                let step = (p - prev + PI).rem_euclid(2.0 * PI) - PI;
                if step.abs() > PI / 2.0 {
                    return Err(WaveError::PhaseJump { index: i, step });
                }
                out.push(prev + step);
            }
        }
    }
    Ok(out)
}
