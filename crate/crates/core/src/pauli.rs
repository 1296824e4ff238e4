//! The Euclidean Clifford algebra of `R³` with `e_i² = 1`.
//!
//! Elements are dense over `{1, e1, e2, e3, e12, e13, e23, e123}`. Spinors
//! live in the minimal left ideal generated by `ε = (1 + e3)/2`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for grade, unit-norm and ideal membership checks.
pub const PAULI_TOL: f64 = 1e-12;

pub const BASIS_LABELS: [&str; 8] = ["1", "e1", "e2", "e3", "e12", "e13", "e23", "e123"];

/// Blade bitmask (bit i ↔ e_{i+1}) of each basis slot.
const MASK: [u8; 8] = [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];
/// Inverse of `MASK`.
const SLOT: [usize; 8] = [0, 1, 2, 4, 3, 5, 6, 7];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PauliError {
    #[error("axis is not a pure bivector (off-grade weight {off_grade:.3e})")]
    NotBivector { off_grade: f64 },
    #[error("axis bivector has norm {norm}, expected 1")]
    NotUnit { norm: f64 },
    #[error("element is not in the left ideal of (1 + e3)/2 (residual {residual:.3e})")]
    NotInIdeal { residual: f64 },
    #[error("element is not a rotor: alpha(g) g - 1 = {residual:.3e}")]
    NotRotor { residual: f64 },
    #[error("non-finite coefficient")]
    NonFinite,
}

pub type Result<T, E = PauliError> = std::result::Result<T, E>;

fn grade(slot: usize) -> u32 {
    MASK[slot].count_ones()
}

/// Sign of reordering `e_A e_B` into the canonical blade.
fn reorder_sign(a: u8, b: u8) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PauliElement(pub [f64; 8]);

impl PauliElement {
    pub const ZERO: Self = Self([0.0; 8]);
    pub const ONE: Self = Self([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

    pub fn scalar(c: f64) -> Self {
        let mut x = Self::ZERO;
        x.0[0] = c;
        x
    }

    /// `e_i` for `i ∈ {1, 2, 3}`.
    pub fn e(i: usize) -> Self {
        assert!((1..=3).contains(&i), "generator index {i} out of range");
        let mut x = Self::ZERO;
        x.0[i] = 1.0;
        x
    }

    /// `e_i e_j` for `i < j`.
    pub fn e2(i: usize, j: usize) -> Self {
        assert!(i < j && (1..=3).contains(&i) && (2..=3).contains(&j), "bad bivector indices ({i}, {j})");
        let mut x = Self::ZERO;
        x.0[SLOT[(1 << (i - 1)) | (1 << (j - 1))]] = 1.0;
        x
    }

    pub fn pseudoscalar() -> Self {
        let mut x = Self::ZERO;
        x.0[7] = 1.0;
        x
    }

    /// `(1 + e3)/2`.
    pub fn epsilon() -> Self {
        Self([0.5, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0])
    }

    pub fn coeffs(&self) -> &[f64; 8] {
        &self.0
    }

    pub fn grade_part(&self, g: u32) -> Self {
        let mut out = Self::ZERO;
        for s in 0..8 {
            if grade(s) == g {
                out.0[s] = self.0[s];
            }
        }
        out
    }

    pub fn even_part(&self) -> Self {
        &self.grade_part(0) + &self.grade_part(2)
    }

    /// Reversion: grades 2 and 3 change sign. On the even subalgebra this
    /// is the main anti-involution, so `α(g)·g = 1` for a rotor.
    pub fn reversion(&self) -> Self {
        let mut out = *self;
        for s in 0..8 {
            if grade(s) >= 2 {
                out.0[s] = -out.0[s];
            }
        }
        out
    }

    pub fn spin_norm(&self) -> Self {
        clifford_multiply(&self.reversion(), self)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(self.0.map(|x| c * x))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// `‖ψ·ε − ψ‖∞`.
    pub fn ideal_residual(&self) -> f64 {
        clifford_multiply(self, &Self::epsilon()).max_abs_diff(self)
    }

    pub fn is_left_spinor(&self) -> bool {
        self.ideal_residual() <= PAULI_TOL * self.0.iter().fold(1.0_f64, |m, c| m.max(c.abs()))
    }
}

/// Structure-constant product. Bilinear, associative, with `e_i² = 1`.
pub fn clifford_multiply(x: &PauliElement, y: &PauliElement) -> PauliElement {
    let mut out = PauliElement::ZERO;
    for (i, &a) in x.0.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        for (j, &b) in y.0.iter().enumerate() {
            if b == 0.0 {
                continue;
            }
            let (ma, mb) = (MASK[i], MASK[j]);
            out.0[SLOT[(ma ^ mb) as usize]] += reorder_sign(ma, mb) * a * b;
        }
    }
    out
}

impl Add for &PauliElement {
    type Output = PauliElement;
    fn add(self, rhs: Self) -> PauliElement {
        PauliElement(std::array::from_fn(|s| self.0[s] + rhs.0[s]))
    }
}

impl Sub for &PauliElement {
    type Output = PauliElement;
    fn sub(self, rhs: Self) -> PauliElement {
        PauliElement(std::array::from_fn(|s| self.0[s] - rhs.0[s]))
    }
}

impl Neg for &PauliElement {
    type Output = PauliElement;
    fn neg(self) -> PauliElement {
        PauliElement(self.0.map(|c| -c))
    }
}

impl Mul for &PauliElement {
    type Output = PauliElement;
    fn mul(self, rhs: Self) -> PauliElement {
        clifford_multiply(self, rhs)
    }
}

impl fmt::Display for PauliElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, &c) in self.0.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let mag = c.abs();
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (s, mag == 1.0) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => f.write_str(BASIS_LABELS[s])?,
                (_, false) => write!(f, "{mag}*{}", BASIS_LABELS[s])?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `(sin πu, cos πu)`, exact when `2u` is an integer up to rounding.
fn sin_cos_pi(u: f64) -> (f64, f64) {
    let n = (2.0 * u).round();
    if (2.0 * u - n).abs() <= 4.0 * f64::EPSILON * n.abs().max(1.0) {
        return match n.rem_euclid(4.0) as u8 {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        };
    }
    (std::f64::consts::PI * u).sin_cos()
}

/// `g(θ/2) = cos(θ/2) + B·sin(θ/2)` for a unit bivector `B`.
///
/// Angles that are whole multiples of `π` give exact coefficients, so
/// `θ = 2π` yields `−1` and `θ = 4π` yields `+1` with no rounding.
pub fn rotor(axis_bivector: &PauliElement, theta: f64) -> Result<PauliElement> {
    if !axis_bivector.is_finite() || !theta.is_finite() {
        return Err(PauliError::NonFinite);
    }
    let off_grade = axis_bivector.max_abs_diff(&axis_bivector.grade_part(2));
    if off_grade > PAULI_TOL {
        return Err(PauliError::NotBivector { off_grade });
    }
    let norm = axis_bivector.0[4..7].iter().map(|c| c * c).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > PAULI_TOL {
        return Err(PauliError::NotUnit { norm });
    }
    let (s, c) = sin_cos_pi(theta / (2.0 * std::f64::consts::PI));
    let mut g = axis_bivector.grade_part(2).scale(s);
    g.0[0] = c;
    Ok(g)
}

fn check_rotor(g: &PauliElement) -> Result<()> {
    if !g.is_finite() {
        return Err(PauliError::NonFinite);
    }
    let residual = g.spin_norm().max_abs_diff(&PauliElement::ONE).max(g.max_abs_diff(&g.even_part()));
    if residual > 1e-10 {
        return Err(PauliError::NotRotor { residual });
    }
    Ok(())
}

/// Left-ideal action `ψ → α(g)·ψ`.
pub fn rotate_spinor(psi: &PauliElement, g: &PauliElement) -> Result<PauliElement> {
    if !psi.is_finite() || !g.is_finite() {
        return Err(PauliError::NonFinite);
    }
    if !psi.is_left_spinor() {
        return Err(PauliError::NotInIdeal { residual: psi.ideal_residual() });
    }
    Ok(clifford_multiply(&g.reversion(), psi))
}

/// Matrix of `v → α(g)·v·g` on vectors, `R[i][j]` being the `e_{i+1}`
/// component of the image of `e_{j+1}`. For a rotor `α(g) = g⁻¹`.
pub fn rotation_matrix(g: &PauliElement) -> Result<[[f64; 3]; 3]> {
    check_rotor(g)?;
    let inv = g.reversion();
    let mut r = [[0.0; 3]; 3];
    for j in 0..3 {
        let image = clifford_multiply(&clifford_multiply(&inv, &PauliElement::e(j + 1)), g);
        for (i, row) in r.iter_mut().enumerate() {
            row[j] = image.0[i + 1];
        }
    }
    Ok(r)
}

/// Two-component Pauli spinor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliSpinor {
    pub psi1: Complex64,
    pub psi2: Complex64,
}

impl PauliSpinor {
    pub fn new(psi1: Complex64, psi2: Complex64) -> Self {
        Self { psi1, psi2 }
    }

    /// `(g0 + g1·e23 + g2·e13 + g3·e12)·ε` with
    /// `g0 = Re ψ1`, `g1 = Im ψ2`, `g2 = Re ψ2`, `g3 = Im ψ1`.
    pub fn to_ideal(&self) -> PauliElement {
        let phi = PauliElement([self.psi1.re, 0.0, 0.0, 0.0, self.psi1.im, self.psi2.re, self.psi2.im, 0.0]);
        clifford_multiply(&phi, &PauliElement::epsilon())
    }

    /// Inverse of [`PauliSpinor::to_ideal`]: the even part of `φ·ε` is `φ/2`.
    pub fn from_ideal(x: &PauliElement) -> Result<Self> {
        if !x.is_finite() {
            return Err(PauliError::NonFinite);
        }
        if !x.is_left_spinor() {
            return Err(PauliError::NotInIdeal { residual: x.ideal_residual() });
        }
        let g = x.even_part().scale(2.0).0;
        Ok(Self { psi1: Complex64::new(g[0], g[4]), psi2: Complex64::new(g[5], g[6]) })
    }

    /// `|ψ1|² + |ψ2|²`.
    pub fn density(&self) -> f64 {
        self.psi1.norm_sqr() + self.psi2.norm_sqr()
    }
}

/// Recombined state `ψ1 + α(g(θ/2))·ψ2` after the second beam is rotated
/// through `θ` about `axis_bivector`.
pub fn recombine(psi1: &PauliElement, psi2: &PauliElement, axis_bivector: &PauliElement, theta: f64) -> Result<PauliElement> {
    if !psi1.is_left_spinor() {
        return Err(PauliError::NotInIdeal { residual: psi1.ideal_residual() });
    }
    let g = rotor(axis_bivector, theta)?;
    Ok(psi1 + &rotate_spinor(psi2, &g)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PauliDemoRow {
    pub theta: f64,
    pub rotor: PauliElement,
    /// Rotated second beam.
    pub spinor: PauliElement,
    pub recombined: PauliElement,
    pub intensity: f64,
}

/// Sweeps `θ` for two spin-up beams with the second rotated about `e12`.
/// The recombined intensity is `2 + 2·cos(θ/2)`, so it vanishes at `2π` and
/// recovers only at `4π`.
pub fn pauli_demo(thetas: &[f64]) -> Result<Vec<PauliDemoRow>> {
    let up = PauliSpinor::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).to_ideal();
    let axis = PauliElement::e2(1, 2);
    thetas
        .iter()
        .map(|&theta| {
            let rotor = rotor(&axis, theta)?;
            let spinor = rotate_spinor(&up, &rotor)?;
            let recombined = &up + &spinor;
            let intensity = PauliSpinor::from_ideal(&recombined)?.density();
            Ok(PauliDemoRow { theta, rotor, spinor, recombined, intensity })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn e(i: usize) -> PauliElement {
        PauliElement::e(i)
    }

    #[test]
    fn generator_products() {
        for i in 1..=3 {
            assert_eq!(&e(i) * &e(i), PauliElement::ONE);
        }
        assert_eq!(&e(1) * &e(2), PauliElement::e2(1, 2));
        assert_eq!(&e(2) * &e(1), -&PauliElement::e2(1, 2));
        assert_eq!(&e(3) * &e(1), -&PauliElement::e2(1, 3));
        let i = PauliElement::pseudoscalar();
        assert_eq!(&i * &i, PauliElement::scalar(-1.0));
        assert_eq!(&(&e(1) * &e(2)) * &e(3), i);
        for b in [PauliElement::e2(1, 2), PauliElement::e2(1, 3), PauliElement::e2(2, 3)] {
            assert_eq!(&b * &b, PauliElement::scalar(-1.0));
        }
    }

    #[test]
    fn anticommutator_is_twice_delta() {
        for i in 1..=3 {
            for j in 1..=3 {
                let anti = &(&e(i) * &e(j)) + &(&e(j) * &e(i));
                let expected = PauliElement::scalar(if i == j { 2.0 } else { 0.0 });
                assert_eq!(anti, expected);
            }
        }
    }

    #[test]
    fn associativity_on_basis() {
        let basis: Vec<PauliElement> = (0..8)
            .map(|s| {
                let mut x = PauliElement::ZERO;
                x.0[s] = 1.0;
                x
            })
            .collect();
        for a in &basis {
            for b in &basis {
                for c in &basis {
                    assert_eq!(&(a * b) * c, a * &(b * c));
                }
            }
        }
    }

    #[test]
    fn epsilon_is_idempotent() {
        let eps = PauliElement::epsilon();
        assert_eq!(&eps * &eps, eps);
        assert!(eps.is_left_spinor());
        assert!(!e(1).is_left_spinor());
    }

    #[test]
    fn rotor_signs() {
        let b = PauliElement::e2(1, 2);
        assert_eq!(rotor(&b, 0.0).unwrap(), PauliElement::ONE);
        assert_eq!(rotor(&b, 2.0 * PI).unwrap(), PauliElement::scalar(-1.0));
        assert_eq!(rotor(&b, 4.0 * PI).unwrap(), PauliElement::ONE);
        assert_eq!(rotor(&b, PI).unwrap(), b);
        assert!(matches!(rotor(&e(1), 1.0), Err(PauliError::NotBivector { .. })));
        assert!(matches!(rotor(&b.scale(2.0), 1.0), Err(PauliError::NotUnit { .. })));
    }

    #[test]
    fn rotor_has_unit_spin_norm() {
        let axis = PauliElement([0.0, 0.0, 0.0, 0.0, 0.6, 0.0, 0.8, 0.0]);
        for k in 0..50 {
            let g = rotor(&axis, 0.37 * k as f64).unwrap();
            assert!(g.spin_norm().max_abs_diff(&PauliElement::ONE) < 1e-15);
        }
    }

    #[test]
    fn spinor_action() {
        let psi = PauliSpinor::new(Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5)).to_ideal();
        assert!(psi.is_left_spinor());
        let b = PauliElement::e2(2, 3);
        assert_eq!(rotate_spinor(&psi, &PauliElement::ONE).unwrap(), psi);
        assert_eq!(rotate_spinor(&psi, &rotor(&b, 2.0 * PI).unwrap()).unwrap(), -&psi);
        assert_eq!(rotate_spinor(&psi, &rotor(&b, 4.0 * PI).unwrap()).unwrap(), psi);
        let turned = rotate_spinor(&psi, &rotor(&b, 0.7).unwrap()).unwrap();
        assert!(turned.is_left_spinor());
        assert!(matches!(rotate_spinor(&e(1), &PauliElement::ONE), Err(PauliError::NotInIdeal { .. })));
    }

    #[test]
    fn component_map_round_trip() {
        let s = PauliSpinor::new(Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5));
        let x = s.to_ideal();
        assert_eq!(x.0[0], 0.15);
        assert_eq!(PauliSpinor::from_ideal(&x).unwrap(), s);
        assert_eq!(PauliSpinor::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).to_ideal(), PauliElement::epsilon());
    }

    #[test]
    fn rotation_matrix_turns_e1_toward_e2() {
        let theta = 0.9;
        let r = rotation_matrix(&rotor(&PauliElement::e2(1, 2), theta).unwrap()).unwrap();
        let expected = [[theta.cos(), -theta.sin(), 0.0], [theta.sin(), theta.cos(), 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((r[i][j] - expected[i][j]).abs() < 1e-15);
            }
        }
        assert!(rotation_matrix(&PauliElement::scalar(2.0)).is_err());
    }

    #[test]
    fn recombination_inverts_at_two_pi() {
        let p1 = PauliSpinor::new(Complex64::new(1.0, 0.5), Complex64::new(-0.25, 0.0)).to_ideal();
        let p2 = PauliSpinor::new(Complex64::new(0.0, 2.0), Complex64::new(0.75, -1.0)).to_ideal();
        let b = PauliElement::e2(1, 3);
        assert_eq!(recombine(&p1, &p2, &b, 2.0 * PI).unwrap(), &p1 - &p2);
        assert_eq!(recombine(&p1, &p2, &b, 4.0 * PI).unwrap(), &p1 + &p2);
    }

    #[test]
    fn demo_intensities() {
        let rows = pauli_demo(&[0.0, PI, 2.0 * PI, 3.0 * PI, 4.0 * PI]).unwrap();
        let got: Vec<f64> = rows.iter().map(|r| r.intensity).collect();
        assert_eq!(got, vec![4.0, 2.0, 0.0, 2.0, 4.0]);
    }

    #[test]
    fn display() {
        assert_eq!(PauliElement::epsilon().to_string(), "0.5 + 0.5*e3");
        assert_eq!((-&PauliElement::e2(1, 2)).to_string(), "-e12");
        assert_eq!(PauliElement::ZERO.to_string(), "0");
    }
}
