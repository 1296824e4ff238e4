//! The single-mode Heisenberg algebra over `{Q, D}` with `[D, Q] = 1`,
//! extended by a primitive idempotent `E` with `E² = E`, `DE = 0`, `EQ = 0`.
//!
//! Every element has a unique normal form `Σ λ·Q^h E^ε D^k` (`ε ∈ {0, 1}`).
//! Products are computed in closed form from the relations; [`rewrite`]
//! holds the literal term-rewriting system the closed form is checked
//! against.

mod boson;
mod checks;
mod fock;
pub mod parse;
pub mod rewrite;
mod scalar;

pub use boson::{to_boson, BosonElement};
pub use checks::{
    e_dagger_nonhermitian_check, e_v_relation_check, sp2_structure_check, EvRelationReport, NonHermiticityReport,
    Sl2Report,
};
pub use fock::{fock_matrix, FockMatrix};
pub use scalar::{GaussianRational, Scalar, Surd};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::One;
use thiserror::Error;

/// Default bound on the total degree `h + k` of any monomial.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("degree cap {cap} exceeded (degree {degree})")]
    CapExceeded { cap: u32, degree: u32 },
    #[error("Fock truncation n_max = {n_max} is below the element's degree {degree}")]
    TruncationTooSmall { n_max: usize, degree: u32 },
    #[error("element contains E; the boson transform only covers the pure Weyl part")]
    ContainsIdempotent,
    #[error("kernel of {operator} is {dim}-dimensional at n_max = {n_max}; an even n_max gives a one-dimensional kernel")]
    KernelDimension { operator: &'static str, dim: usize, n_max: usize },
    #[error("n_max = {got} is below the required minimum {min}")]
    TruncationBelowMinimum { got: usize, min: usize },
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Q,
    D,
    E,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::Q => "Q",
            Generator::D => "D",
            Generator::E => "E",
        })
    }
}

/// `Q^q E^e D^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub q: u32,
    pub e: bool,
    pub d: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { q: 0, e: false, d: 0 };
    pub const E: Monomial = Monomial { q: 0, e: true, d: 0 };

    pub const fn new(q: u32, e: bool, d: u32) -> Self {
        Self { q, e, d }
    }

    pub fn degree(&self) -> u32 {
        self.q + self.d
    }

    pub fn generator(g: Generator) -> Self {
        match g {
            Generator::Q => Monomial::new(1, false, 0),
            Generator::D => Monomial::new(0, false, 1),
            Generator::E => Monomial::E,
        }
    }

    /// Renders with the given symbols for `Q`, `E`, `D`.
    pub(crate) fn render_with(&self, symbols: [&str; 3]) -> String {
        let mut parts = Vec::new();
        let power = |sym: &str, n: u32| if n == 1 { sym.to_string() } else { format!("{sym}^{n}") };
        if self.q > 0 {
            parts.push(power(symbols[0], self.q));
        }
        if self.e {
            parts.push(symbols[1].to_string());
        }
        if self.d > 0 {
            parts.push(power(symbols[2], self.d));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(["Q", "E", "D"]))
    }
}

fn falling(n: u32, k: u32) -> BigUint {
    ((n - k + 1)..=n).map(BigUint::from).product()
}

fn binomial(n: u32, k: u32) -> BigUint {
    falling(n, k) / falling(k, k)
}

fn factorial(n: u32) -> BigUint {
    falling(n, n)
}

/// Normal-ordered product of two monomials. Coefficients are natural numbers.
///
/// `D^k Q^h = Σ_j C(k,j)·C(h,j)·j!·Q^{h−j} D^{k−j}`; an `E` on the left kills
/// any surviving `Q`, an `E` on the right kills any surviving `D`, which for
/// `E D^k Q^m E` leaves `m!·δ_km·E`.
pub fn multiply_monomials(a: Monomial, b: Monomial) -> Vec<(Monomial, BigUint)> {
    let (k, h) = (a.d, b.q);
    match (a.e, b.e) {
        (false, false) => (0..=k.min(h))
            .map(|j| {
                let c = binomial(k, j) * binomial(h, j) * factorial(j);
                (Monomial::new(a.q + h - j, false, k - j + b.d), c)
            })
            .collect(),
        (true, false) => {
            if h > k {
                vec![]
            } else {
                vec![(Monomial::new(a.q, true, k - h + b.d), falling(k, h))]
            }
        }
        (false, true) => {
            if k > h {
                vec![]
            } else {
                vec![(Monomial::new(a.q + h - k, true, b.d), falling(h, k))]
            }
        }
        (true, true) => {
            if h == k {
                vec![(Monomial::new(a.q, true, b.d), factorial(k))]
            } else {
                vec![]
            }
        }
    }
}

/// Finite complex-linear combination of normal-ordered monomials.
#[derive(Clone, PartialEq)]
pub struct AlgebraElement<S: Scalar = Complex64> {
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Default for AlgebraElement<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::ONE, S::one())
    }

    pub fn scalar(c: S) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn monomial(m: Monomial, c: S) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn generator(g: Generator) -> Self {
        Self::monomial(Monomial::generator(g), S::one())
    }

    pub fn q() -> Self {
        Self::generator(Generator::Q)
    }

    pub fn d() -> Self {
        Self::generator(Generator::D)
    }

    pub fn e() -> Self {
        Self::generator(Generator::E)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: S) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest total degree `h + k` over the support (0 for the zero element).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn contains_idempotent(&self) -> bool {
        self.terms.keys().any(|m| m.e)
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, x)| (*m, x.clone() * c.clone())))
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AlgebraElement<T> {
        AlgebraElement::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn to_c64(&self) -> AlgebraElement<Complex64> {
        self.map_scalars(S::to_c64)
    }

    /// Product with the default degree cap.
    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        self.multiply_capped(rhs, DEFAULT_DEGREE_CAP)
    }

    pub fn multiply_capped(&self, rhs: &Self, cap: u32) -> Result<Self> {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let cab = ca.clone() * cb.clone();
                for (m, n) in multiply_monomials(*ma, *mb) {
                    if m.degree() > cap {
                        return Err(AlgebraError::CapExceeded { cap, degree: m.degree() });
                    }
                    out.add_term(m, cab.clone() * S::from_bigint(&BigInt::from(n)));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        (0..n).try_fold(Self::one(), |acc, _| acc.multiply(self))
    }

    /// `[self, rhs] = self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        Ok(&self.multiply(rhs)? - &rhs.multiply(self)?)
    }

    /// Every monomial is `Q^h E` (minimal left ideal generated by `E`).
    pub fn is_left_spinor(&self) -> bool {
        self.terms.keys().all(|m| m.e && m.d == 0)
    }

    /// Every monomial is `E D^k` (minimal right ideal generated by `E`).
    pub fn is_right_spinor(&self) -> bool {
        self.terms.keys().all(|m| m.e && m.q == 0)
    }

    /// Largest coefficient deviation from `other`, in floating point.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let diff = self - other;
        diff.terms.values().map(|c| c.to_c64().norm()).fold(0.0, f64::max)
    }

    pub(crate) fn render_with(&self, symbols: [&str; 3]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        // highest degree first; within a degree, more Q first
        let mut entries: Vec<_> = self.terms.iter().collect();
        entries.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then(b.q.cmp(&a.q)).then(b.e.cmp(&a.e)));
        let mut out = String::new();
        for (i, (m, c)) in entries.into_iter().enumerate() {
            let mono = m.render_with(symbols);
            let coeff = c.render();
            let (neg, mag) = match coeff.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
                _ => (false, coeff),
            };
            let term = match (mag.as_str(), *m == Monomial::ONE) {
                (_, true) => mag,
                ("1", false) => mono,
                _ => format!("{mag}*{mono}"),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }
}

impl<S: Scalar> fmt::Display for AlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(["Q", "E", "D"]))
    }
}

impl<S: Scalar> fmt::Debug for AlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement({self})")
    }
}

impl<S: Scalar> Add for &AlgebraElement<S> {
    type Output = AlgebraElement<S>;

    fn add(self, rhs: Self) -> AlgebraElement<S> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &AlgebraElement<S> {
    type Output = AlgebraElement<S>;

    fn sub(self, rhs: Self) -> AlgebraElement<S> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<S: Scalar> Neg for &AlgebraElement<S> {
    type Output = AlgebraElement<S>;

    fn neg(self) -> AlgebraElement<S> {
        AlgebraElement::from_terms(self.terms.iter().map(|(m, c)| (*m, -c.clone())))
    }
}

/// Normal form of a word in the generators.
pub fn normal_order<S: Scalar>(word: &[Generator]) -> Result<AlgebraElement<S>> {
    normal_order_capped(word, DEFAULT_DEGREE_CAP)
}

pub fn normal_order_capped<S: Scalar>(word: &[Generator], cap: u32) -> Result<AlgebraElement<S>> {
    if word.len() > cap as usize {
        return Err(AlgebraError::CapExceeded { cap, degree: word.len() as u32 });
    }
    word.iter()
        .try_fold(AlgebraElement::one(), |acc, g| acc.multiply_capped(&AlgebraElement::generator(*g), cap))
}

/// `E^{mn} = (m!·n!)^{−1/2}·Q^m E D^n`; `E^{00} = E`.
pub fn matrix_unit<S: Scalar>(m: u32, n: u32) -> AlgebraElement<S> {
    let norm = S::sqrt_ratio(&BigUint::one(), &(factorial(m) * factorial(n)));
    AlgebraElement::monomial(Monomial::new(m, true, n), norm)
}

/// `Σ λ_h·Q^h E`, an element of the minimal left ideal generated by `E`.
pub fn spinor<S: Scalar>(coeffs: &[S]) -> AlgebraElement<S> {
    AlgebraElement::from_terms(
        coeffs
            .iter()
            .enumerate()
            .map(|(h, c)| (Monomial::new(h as u32, true, 0), c.clone())),
    )
}

/// `Σ μ_k·E D^k`, an element of the minimal right ideal generated by `E`.
pub fn co_spinor<S: Scalar>(coeffs: &[S]) -> AlgebraElement<S> {
    AlgebraElement::from_terms(
        coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (Monomial::new(0, true, k as u32), c.clone())),
    )
}
