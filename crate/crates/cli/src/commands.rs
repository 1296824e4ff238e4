use std::f64::consts::PI;

use anyhow::{Context, Result};
use log::{info, warn};
use metaplectica::metaplectic::{holonomy_loop, lift_system, phase_of, LOOP_TOL};
use metaplectica::pauli::{pauli_demo, PauliSpinor};
use metaplectica::symplectic::{OpticalElement, OpticalSystem, RayVector, SymplecticMatrix};
use metaplectica::wavefield::{
    global_phase, gouy_trace_numeric, hermite_function, fringe_demo, GaussianBeam, GouyTrace, GridSpec, WaveGrid,
};
use metaplectica::weyl::{fock_matrix, parse::parse, Scalar, Surd};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{config_error, Probe, RunConfig, Sweep};

/// A `cover` loop whose system matrix is not the identity. Carries the
/// report that is still written out. Reported with exit code 3.
#[derive(Debug)]
pub struct OpenLoop {
    pub residual: f64,
    pub report: String,
}

impl std::fmt::Display for OpenLoop {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "loop is not closed: max |S - I| = {:.3e} (limit {LOOP_TOL:e})", self.residual)
    }
}

impl std::error::Error for OpenLoop {}

pub struct RunContext {
    pub cfg: RunConfig,
    pub seed: u64,
    pub grid_n: Option<usize>,
    pub exact: bool,
}

/// 17 significant digits; parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

const GOUY_GRID: GridSpec = GridSpec { n: 16384, x_min: -1024.0, x_max: 1024.0 };
const GOUY_SWEEP: Sweep = Sweep { z_start: -50.0, z_end: 50.0, samples: 201 };
const DEFAULT_THETAS: [f64; 5] = [0.0, PI, 2.0 * PI, 3.0 * PI, 4.0 * PI];

impl RunContext {
    fn grid(&self, default: GridSpec) -> Result<GridSpec> {
        let mut spec = self.cfg.grid.unwrap_or(default);
        if let Some(n) = self.grid_n {
            spec.n = n;
        }
        spec.validate().map_err(|e| config_error(e.to_string()))?;
        if !spec.n.is_power_of_two() {
            warn!("grid N = {} is not a power of two; FFTs will be slower", spec.n);
        }
        Ok(spec)
    }

    fn system(&self, default_relays: usize) -> Result<OpticalSystem> {
        match &self.cfg.system {
            Some(s) => Ok(s.clone()),
            None => Ok(OpticalSystem::focal_relays(1.0, default_relays)?),
        }
    }

    fn probe(&self, kind: Probe, spec: &GridSpec) -> Result<WaveGrid> {
        Ok(match kind {
            Probe::Gaussian => WaveGrid::unit_gaussian(spec)?,
            Probe::Odd => WaveGrid::hermite_gaussian(spec, 1)?,
            Probe::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let coeffs: Vec<Complex64> =
                    (0..8).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                spec.sample(|x| coeffs.iter().enumerate().map(|(n, c)| c * hermite_function(n, x)).sum())?
                    .normalized()
            }
        })
    }
}

fn element_label(e: &OpticalElement) -> String {
    match e {
        OpticalElement::Lens { f } => format!("lens(f={f})"),
        OpticalElement::Free { d } => format!("free(d={d})"),
    }
}

pub fn trace(ctx: &RunContext) -> Result<String> {
    let sys = ctx.system(4)?;
    let ray = ctx.cfg.ray.unwrap_or(RayVector::new(1.0, 0.0));
    if !ray.is_finite() {
        return Err(config_error("ray must be finite"));
    }
    let rows = sys.trace_with_angles(ray)?;
    let labels = std::iter::once("start".to_string()).chain(sys.elements().iter().map(element_label));
    Ok(csv(
        &["index", "element", "q", "p", "angle_accum"],
        rows.iter()
            .zip(labels)
            .enumerate()
            .map(|(i, ((r, angle), label))| vec![i.to_string(), label, num(r.q), num(r.p), num(*angle)]),
    ))
}

#[derive(Serialize)]
struct CoverReport {
    loop_closed: bool,
    holonomy: Option<i32>,
    phase_m2: Option<f64>,
}

/// Holonomy sign of the loop, plus the global phase picked up over its
/// first half.
pub fn cover(ctx: &RunContext) -> Result<String> {
    let sys = ctx.system(4)?;
    let residual = sys.system_matrix().max_abs_diff(&SymplecticMatrix::identity(1));
    if !(residual <= LOOP_TOL) {
        let report = serde_json::to_string_pretty(&CoverReport { loop_closed: false, holonomy: None, phase_m2: None })?;
        return Err(OpenLoop { residual, report }.into());
    }
    let spec = ctx.grid(GridSpec::default())?;
    let probe = ctx.probe(ctx.cfg.probe.unwrap_or_default(), &spec)?;
    let method = ctx.cfg.method.unwrap_or_default();
    let holonomy = holonomy_loop(&sys, &probe, method)?;
    let half = &sys.elements()[..sys.len() / 2];
    let phase_m2 = if half.is_empty() {
        0.0
    } else {
        phase_of(&lift_system(&OpticalSystem::new(half.to_vec())?), &probe, method)?
    };
    info!("holonomy {holonomy} over {} elements", sys.len());
    let report = CoverReport { loop_closed: true, holonomy: Some(holonomy.as_i32()), phase_m2: Some(phase_m2) };
    Ok(serde_json::to_string_pretty(&report)? + "\n")
}

pub fn propagate(ctx: &RunContext, probe: Option<Probe>) -> Result<String> {
    let sys = ctx.system(2)?;
    let spec = ctx.grid(GridSpec::default())?;
    let input = ctx.probe(probe.or(ctx.cfg.probe).unwrap_or_default(), &spec)?;
    let method = ctx.cfg.method.unwrap_or_default();
    let output = lift_system(&sys).apply(&input, method)?;
    match global_phase(&output, &input) {
        Ok(phase) => info!("output is the input times exp(i*{phase})"),
        Err(e) => info!("no global phase: {e}"),
    }
    Ok(csv(
        &["x", "re_in", "im_in", "re_out", "im_out"],
        input.samples().iter().zip(output.samples()).enumerate().map(|(j, (a, b))| {
            vec![num(input.x(j)), num(a.re), num(a.im), num(b.re), num(b.im)]
        }),
    ))
}

pub fn gouy(ctx: &RunContext) -> Result<String> {
    let beam = match ctx.cfg.beam {
        Some(b) => b,
        None => GaussianBeam::focused(1.0, 0.0)?,
    };
    let spec = ctx.grid(GOUY_GRID)?;
    let zs = ctx.cfg.sweep.unwrap_or(GOUY_SWEEP).points()?;
    let psi0 = beam.field(&spec, zs[0])?;
    let numeric = gouy_trace_numeric(&psi0, &zs)?;
    let analytic = GouyTrace::analytic(&beam, &zs);
    info!(
        "sweep over samples {:.6}, over the whole axis {:.6}, max |numeric - analytic| {:.3e}",
        analytic.total_sweep(),
        beam.gouy_phase(f64::INFINITY) - beam.gouy_phase(f64::NEG_INFINITY),
        numeric.max_abs_diff(&analytic)
    );
    Ok(csv(
        &["z", "theta_numeric", "theta_analytic"],
        zs.iter().zip(&numeric.theta).zip(&analytic.theta).map(|((z, n), a)| vec![num(*z), num(*n), num(*a)]),
    ))
}

pub fn fringe(ctx: &RunContext) -> Result<String> {
    let mut cfg = ctx.cfg.fringe.unwrap_or_default();
    if let Some(n) = ctx.grid_n {
        cfg.grid.n = n;
    }
    cfg.grid.validate().map_err(|e| config_error(e.to_string()))?;
    let demo = fringe_demo(&cfg)?;
    info!("fringe shift {:.6} periods", demo.shift);
    Ok(csv(
        &["x", "intensity_before", "intensity_after", "shift_estimate"],
        (0..demo.x.len()).map(|j| {
            vec![num(demo.x[j]), num(demo.intensity_before[j]), num(demo.intensity_after[j]), num(demo.shift)]
        }),
    ))
}

#[derive(Serialize)]
struct AlgebraReport<F: Serialize> {
    expression: String,
    mode: &'static str,
    normal_form: String,
    fock: F,
}

fn algebra_in<S: Scalar>(expression: &str, fock_n: Option<usize>) -> Result<String> {
    let parsed = parse::<S>(expression).map_err(|e| config_error(format!("expression {expression:?}: {e}")))?;
    let normal_form = parsed.to_string();
    let Some(n) = fock_n else {
        return Ok(normal_form + "\n");
    };
    let (mode, coded) = match &parsed {
        metaplectica::weyl::parse::Parsed::Weyl(x) => ("weyl", x.clone()),
        metaplectica::weyl::parse::Parsed::Boson(b) => ("boson", b.coded().clone()),
    };
    let fock = fock_matrix(&coded, n).map_err(|e| config_error(e.to_string()))?;
    let report = AlgebraReport { expression: expression.to_string(), mode, normal_form, fock };
    Ok(serde_json::to_string_pretty(&report)? + "\n")
}

pub fn algebra(ctx: &RunContext, expression: Option<String>, fock: Option<usize>) -> Result<String> {
    let section = ctx.cfg.algebra.clone().unwrap_or_default();
    let expression = expression.or(section.expression).unwrap_or_else(|| "[D,Q]".to_string());
    let fock_n = fock.or(section.fock_n);
    if ctx.exact {
        algebra_in::<Surd>(&expression, fock_n)
    } else {
        algebra_in::<Complex64>(&expression, fock_n)
    }
}

pub fn pauli(ctx: &RunContext) -> Result<String> {
    let thetas = ctx.cfg.pauli.as_ref().map_or(DEFAULT_THETAS.to_vec(), |p| p.thetas.clone());
    if thetas.iter().any(|t| !t.is_finite()) {
        return Err(config_error("pauli thetas must be finite"));
    }
    let rows = pauli_demo(&thetas)?;
    let mut lines = Vec::with_capacity(rows.len());
    for r in &rows {
        let s = PauliSpinor::from_ideal(&r.spinor).context("rotated beam left the spinor ideal")?;
        lines.push(vec![num(r.theta), num(s.psi1.re), num(s.psi1.im), num(s.psi2.re), num(s.psi2.im), num(r.intensity)]);
    }
    Ok(csv(&["theta", "psi1_re", "psi1_im", "psi2_re", "psi2_im", "intensity"], lines))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> RunContext {
        RunContext { cfg: RunConfig::default(), seed: 0, grid_n: None, exact: false }
    }

    #[test]
    fn num_round_trips() {
        for x in [0.1, -PI, 1e-300, 6.02e23] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn random_probe_is_seeded() {
        let spec = GridSpec::new(256, -10.0, 10.0).unwrap();
        let a = ctx().probe(Probe::Random, &spec).unwrap();
        let b = ctx().probe(Probe::Random, &spec).unwrap();
        assert_eq!(a, b);
        let other = RunContext { seed: 1, ..ctx() }.probe(Probe::Random, &spec).unwrap();
        assert_ne!(a, other);
        assert!((a.norm() - 1.0).abs() < 1e-12);
    }
}
