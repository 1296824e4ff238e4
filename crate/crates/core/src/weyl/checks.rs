use nalgebra::DMatrix;
use serde::Serialize;

use super::{fock_matrix, AlgebraElement, AlgebraError, Generator, Result, Scalar, Surd};

/// Truncations below this are too coarse for the E/V comparisons.
pub const MIN_EV_TRUNCATION: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct Sl2Report {
    /// `[H′, X] = 2X`
    pub h_x: bool,
    /// `[H′, Y] = −2Y`
    pub h_y: bool,
    /// `[X, Y] = −H′`
    pub x_y: bool,
    pub x_x_zero: bool,
    pub fock_n_max: usize,
    /// Worst interior deviation between symbolic commutators and their Fock images.
    pub fock_max_diff: f64,
    pub convention_map: &'static str,
}

impl Sl2Report {
    pub fn symbolic_ok(&self) -> bool {
        self.h_x && self.h_y && self.x_y && self.x_x_zero
    }
}

/// Checks that `X = Q²/2`, `Y = D²/2`, `H′ = (QD + DQ)/2` close into sl(2),
/// symbolically in exact arithmetic and against truncated Fock matrices.
pub fn sp2_structure_check(fock_n_max: usize) -> Result<Sl2Report> {
    type El = AlgebraElement<Surd>;
    let half = Surd::recip_int(2);
    let x = El::q().pow(2)?.scale(&half);
    let y = El::d().pow(2)?.scale(&half);
    let qd = El::q().multiply(&El::d())?;
    let dq = El::d().multiply(&El::q())?;
    let h = (&qd + &dq).scale(&half);
    let two = Surd::from_i64(2);

    let hx = h.commutator(&x)?;
    let hy = h.commutator(&y)?;
    let xy = x.commutator(&y)?;
    let report_symbolic = (hx == x.scale(&two), hy == y.scale(&-two.clone()), xy == -&h, x.commutator(&x)?.is_zero());

    let mut worst = 0.0f64;
    for (a, b) in [(&h, &x), (&h, &y), (&x, &y)] {
        let symbolic = fock_matrix(&a.commutator(b)?, fock_n_max)?;
        let fa = fock_matrix(a, fock_n_max)?;
        let fb = fock_matrix(b, fock_n_max)?;
        let diff = fa.matmul(&fb).sub(&fb.matmul(&fa));
        let limit = fock_n_max.saturating_sub((a.degree() + b.degree()) as usize);
        worst = worst.max(symbolic.max_abs_diff_block(&diff, limit));
    }

    Ok(Sl2Report {
        h_x: report_symbolic.0,
        h_y: report_symbolic.1,
        x_y: report_symbolic.2,
        x_x_zero: report_symbolic.3,
        fock_n_max,
        fock_max_diff: worst,
        convention_map: "with P = -iD: X_P = X, Y_P = P^2/2 = -Y, H_P = (PQ + QP)/2 = -iH'",
    })
}

fn real_generator(g: Generator, n_max: usize) -> DMatrix<f64> {
    let n = n_max + 1;
    let mut m = DMatrix::zeros(n, n);
    match g {
        Generator::Q => (0..n_max).for_each(|j| m[(j + 1, j)] = ((j + 1) as f64).sqrt()),
        Generator::D => (0..n_max).for_each(|j| m[(j, j + 1)] = ((j + 1) as f64).sqrt()),
        Generator::E => m[(0, 0)] = 1.0,
    }
    m
}

/// `exp(m)` for nilpotent `m`, summed until the terms vanish.
fn nilpotent_exp(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let mut out = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=n {
        term = &term * m / k as f64;
        if term.iter().all(|v| *v == 0.0) {
            break;
        }
        out += &term;
    }
    out
}

/// Unit vector spanning the kernel of `m = (D + s·Q)/√2`, if that kernel is
/// one-dimensional.
///
/// The SVD only counts the kernel. The vector itself comes from the row
/// recurrence `√(n+1)·v_{n+1} = −s·√n·v_{n−1}`, which keeps `a^k u` at
/// rounding level instead of at the SVD tolerance.
fn kernel_vector(m: &DMatrix<f64>, s: f64, name: &'static str, n_max: usize) -> Result<nalgebra::DVector<f64>> {
    let svd = m.clone().svd(false, false);
    let scale = svd.singular_values.max().max(1.0);
    let dim = svd.singular_values.iter().filter(|&&sv| sv <= 1e-10 * scale).count();
    if dim != 1 {
        return Err(AlgebraError::KernelDimension { operator: name, dim, n_max });
    }
    let mut v = nalgebra::DVector::zeros(n_max + 1);
    v[0] = 1.0;
    for n in (1..n_max).step_by(2) {
        v[n + 1] = -s * (n as f64 / (n + 1) as f64).sqrt() * v[n - 1];
    }
    Ok(v.normalize())
}

#[derive(Clone, Debug, Serialize)]
pub struct EvRelationReport {
    pub n_max: usize,
    /// Best `λ` in `V ≈ λ·exp(−Q²/2) E exp(D²/2)`.
    pub lambda: f64,
    /// `‖V − λR‖_F / ‖V‖_F`.
    pub residual: f64,
    pub v_idempotent_residual: f64,
    /// `max |aV|` over rows `≤ n_max/2`.
    pub a_v: f64,
    /// `max |Va†|` over columns `≤ n_max/2`.
    pub v_adag: f64,
}

struct EvParts {
    q: DMatrix<f64>,
    d: DMatrix<f64>,
    a: DMatrix<f64>,
    adag: DMatrix<f64>,
    u: nalgebra::DVector<f64>,
    w: nalgebra::DVector<f64>,
    v: DMatrix<f64>,
}

fn ev_parts(n_max: usize) -> Result<EvParts> {
    if n_max < MIN_EV_TRUNCATION {
        return Err(AlgebraError::TruncationBelowMinimum { got: n_max, min: MIN_EV_TRUNCATION });
    }
    let q = real_generator(Generator::Q, n_max);
    let d = real_generator(Generator::D, n_max);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let a = (&q + &d) * r;
    let adag = (&q - &d) * r;
    let u = kernel_vector(&a, 1.0, "a", n_max)?;
    let w = kernel_vector(&adag.transpose(), -1.0, "a†ᵀ", n_max)?;
    let v = &u * w.transpose() / w.dot(&u);
    Ok(EvParts { q, d, a, adag, u, w, v })
}

/// Fits `V = λ·exp(−Q²/2) E exp(D²/2)` in the truncated Fock space.
///
/// `V` is built from the kernels of `a` and `a†ᵀ` so that `aV = 0`,
/// `Va† = 0` and `V² = V`.
pub fn e_v_relation_check(n_max: usize) -> Result<EvRelationReport> {
    let p = ev_parts(n_max)?;
    let e = real_generator(Generator::E, n_max);
    let left = nilpotent_exp(&(-(&p.q * &p.q) * 0.5));
    let right = nilpotent_exp(&((&p.d * &p.d) * 0.5));
    let r = left * e * right;
    let lambda = r.dot(&p.v) / r.dot(&r);
    let residual = (&p.v - &r * lambda).norm() / p.v.norm();
    let interior = n_max / 2;
    let av = &p.a * &p.v;
    let vad = &p.v * &p.adag;
    Ok(EvRelationReport {
        n_max,
        lambda,
        residual,
        v_idempotent_residual: (&p.v * &p.v - &p.v).amax(),
        a_v: av.rows(0, interior + 1).amax(),
        v_adag: vad.columns(0, interior + 1).amax(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NonHermiticityReport {
    pub n_max: usize,
    /// Boson indices `0..=block` are compared.
    pub block: usize,
    /// `max |E_b† − E_b|` in the boson basis.
    pub e_dagger_minus_e: f64,
    /// `max |V_b† − V_b|` in the boson basis.
    pub v_dagger_minus_v: f64,
    pub e_is_hermitian: bool,
}

/// Moves `E` and `V` into the basis `f_n = (a†)^n u/√n!` with dual
/// `g_m = wᵀ a^m/(√m!·wᵀu)`, in which `a†` is the adjoint of `a`, and
/// compares each with its transpose there.
pub fn e_dagger_nonhermitian_check(n_max: usize) -> Result<NonHermiticityReport> {
    let p = ev_parts(n_max)?;
    let block = n_max / 2;
    let norm = p.w.dot(&p.u);
    let adag_t = p.adag.transpose();
    let mut f = Vec::with_capacity(block + 1);
    let mut g = Vec::with_capacity(block + 1);
    // a^m u and (a†ᵀ)^n w vanish for m, n > 0; keep them to evaluate V_b
    let mut v_left = Vec::with_capacity(block + 1);
    let mut v_right = Vec::with_capacity(block + 1);
    let (mut fv, mut gv) = (p.u.clone(), p.w.clone() / norm);
    let (mut au, mut aw) = (p.u.clone(), p.w.clone());
    for n in 0..=block {
        if n > 0 {
            let s = (n as f64).sqrt();
            fv = &p.adag * fv / s;
            gv = p.a.transpose() * gv / s;
            au = &p.a * au / s;
            aw = &adag_t * aw / s;
        }
        f.push(fv.clone());
        g.push(gv.clone());
        v_left.push(p.w.dot(&au) / norm);
        v_right.push(aw.dot(&p.u) / norm);
    }
    let e_b = DMatrix::from_fn(block + 1, block + 1, |m, n| g[m][0] * f[n][0]);
    // g_m V f_n = (g_m·u)(wᵀf_n)/(wᵀu) with each factor taken in its small form
    let v_b = DMatrix::from_fn(block + 1, block + 1, |m, n| v_left[m] * v_right[n]);
    let e_diff = (e_b.transpose() - &e_b).amax();
    let v_diff = (v_b.transpose() - &v_b).amax();
    Ok(NonHermiticityReport {
        n_max,
        block,
        e_dagger_minus_e: e_diff,
        v_dagger_minus_v: v_diff,
        e_is_hermitian: e_diff <= 1e-10,
    })
}
