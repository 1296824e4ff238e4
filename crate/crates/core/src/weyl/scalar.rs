//! Coefficient rings for algebra elements.
//!
//! [`Complex64`] is the floating-point ring. [`Surd`] is exact: a finite sum
//! `Σ cₜ·√t` over squarefree radicands `t` with Gaussian-rational `cₜ`,
//! closed under the products that normalized matrix units and `1/√2` boson
//! substitutions produce.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_bigint(n: &BigInt) -> Self;
    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }
    fn imag_unit() -> Self;
    /// `√(num/den)`, `den > 0`.
    fn sqrt_ratio(num: &BigUint, den: &BigUint) -> Self;
    /// `1/den`, `den ≠ 0`.
    fn recip_int(den: i64) -> Self;
    fn conj(&self) -> Self;
    fn to_c64(&self) -> Complex64;
    fn render(&self) -> String;
}

fn big_to_f64(n: &BigUint) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY)
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn from_bigint(n: &BigInt) -> Self {
        Complex64::new(n.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }

    fn sqrt_ratio(num: &BigUint, den: &BigUint) -> Self {
        let (n, d) = (big_to_f64(num), big_to_f64(den));
        let v = if n.is_finite() && d.is_finite() {
            (n / d).sqrt()
        } else {
            // ratio of two huge integers; go through logarithms of the bit lengths
            let ln = |x: &BigUint| {
                let shift = x.bits().saturating_sub(64);
                big_to_f64(&(x >> shift)).ln() + shift as f64 * std::f64::consts::LN_2
            };
            (0.5 * (ln(num) - ln(den))).exp()
        };
        Complex64::new(v, 0.0)
    }

    fn recip_int(den: i64) -> Self {
        Complex64::new(1.0 / den as f64, 0.0)
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn render(&self) -> String {
        if self.im == 0.0 {
            format!("{}", self.re)
        } else if self.re == 0.0 {
            format!("{}i", self.im)
        } else {
            format!("({}{:+}i)", self.re, self.im)
        }
    }
}

pub type GaussianRational = Complex<BigRational>;

/// Exact element of `ℚ(i)(√2, √3, √5, …)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Surd {
    /// squarefree radicand → Gaussian-rational coefficient; never stores zero
    terms: BTreeMap<BigUint, GaussianRational>,
}

fn gr_is_zero(c: &GaussianRational) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

fn gr_int(n: BigInt) -> GaussianRational {
    Complex::new(BigRational::from_integer(n), BigRational::zero())
}

/// Splits `n = s²·t` with `t` squarefree (up to prime factors above the
/// trial-division bound, which are assumed to occur once).
fn square_split(n: &BigUint) -> (BigUint, BigUint) {
    const TRIAL_LIMIT: u64 = 1_000_000;
    let mut rest = n.clone();
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut count = 0u32;
        loop {
            let (q, r) = rest.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            rest = q;
            count += 1;
        }
        if count > 0 {
            square *= pb.pow(count / 2);
            if count % 2 == 1 {
                free *= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > BigUint::one() {
        let root = rest.sqrt();
        if &root * &root == rest {
            square *= root;
        } else {
            free *= rest;
        }
    }
    (square, free)
}

impl Surd {
    pub fn from_gaussian(c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !gr_is_zero(&c) {
            terms.insert(BigUint::one(), c);
        }
        Self { terms }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::from_gaussian(Complex::new(r, BigRational::zero()))
    }

    /// `√t` terms with their coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &GaussianRational)> {
        self.terms.iter()
    }

    /// The rational value when no irrational part is present.
    pub fn as_gaussian(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(Complex::new(BigRational::zero(), BigRational::zero())),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }

    fn insert(&mut self, radicand: BigUint, c: GaussianRational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(radicand) {
            Entry::Vacant(v) => {
                if !gr_is_zero(&c) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if gr_is_zero(&sum) {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }
}

impl Add for Surd {
    type Output = Surd;

    fn add(mut self, rhs: Surd) -> Surd {
        for (t, c) in rhs.terms {
            self.insert(t, c);
        }
        self
    }
}

impl Sub for Surd {
    type Output = Surd;

    fn sub(self, rhs: Surd) -> Surd {
        self + (-rhs)
    }
}

impl Neg for Surd {
    type Output = Surd;

    fn neg(self) -> Surd {
        Surd { terms: self.terms.into_iter().map(|(t, c)| (t, -c)).collect() }
    }
}

impl Mul for Surd {
    type Output = Surd;

    fn mul(self, rhs: Surd) -> Surd {
        let mut out = Surd::default();
        for (ta, ca) in &self.terms {
            for (tb, cb) in &rhs.terms {
                // √a·√b = g·√((a/g)(b/g)) for squarefree a, b with g = gcd(a, b)
                let g = ta.gcd(tb);
                let radicand = (ta / &g) * (tb / &g);
                let c = ca * cb * gr_int(BigInt::from(g));
                out.insert(radicand, c);
            }
        }
        out
    }
}

fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn render_gaussian(c: &GaussianRational) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => render_rational(&c.re),
        (true, false) => format!("{}i", render_rational(&c.im)),
        (false, false) => {
            let sign = if c.im.is_negative() { "-" } else { "+" };
            format!("({}{}{}i)", render_rational(&c.re), sign, render_rational(&c.im.abs()))
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Scalar::render(self))
    }
}

impl Scalar for Surd {
    fn zero() -> Self {
        Surd::default()
    }

    fn one() -> Self {
        Surd::from_gaussian(gr_int(BigInt::one()))
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn from_bigint(n: &BigInt) -> Self {
        Surd::from_gaussian(gr_int(n.clone()))
    }

    fn imag_unit() -> Self {
        Surd::from_gaussian(Complex::new(BigRational::zero(), BigRational::one()))
    }

    fn sqrt_ratio(num: &BigUint, den: &BigUint) -> Self {
        // √(n/d) = √(n·d)/d
        let (square, free) = square_split(&(num * den));
        let coeff = BigRational::new(BigInt::from(square), BigInt::from(den.clone()));
        let mut out = Surd::default();
        out.insert(free, Complex::new(coeff, BigRational::zero()));
        out
    }

    fn recip_int(den: i64) -> Self {
        Surd::from_rational(BigRational::new(BigInt::one(), BigInt::from(den)))
    }

    fn conj(&self) -> Self {
        Surd { terms: self.terms.iter().map(|(t, c)| (t.clone(), c.conj())).collect() }
    }

    fn to_c64(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(t, c)| {
                let root = big_to_f64(t).sqrt();
                Complex64::new(
                    c.re.to_f64().unwrap_or(f64::NAN) * root,
                    c.im.to_f64().unwrap_or(f64::NAN) * root,
                )
            })
            .sum()
    }

    fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| {
                if t.is_one() {
                    render_gaussian(c)
                } else if c.re.is_one() && c.im.is_zero() {
                    format!("√{t}")
                } else {
                    format!("{}·√{t}", render_gaussian(c))
                }
            })
            .collect();
        if parts.len() == 1 {
            parts.into_iter().next().unwrap_or_default()
        } else {
            format!("({})", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn square_split_factors() {
        assert_eq!(square_split(&u(72)), (u(6), u(2)));
        assert_eq!(square_split(&u(1)), (u(1), u(1)));
        assert_eq!(square_split(&u(30)), (u(1), u(30)));
        assert_eq!(square_split(&u(1_000_003 * 1_000_003)), (u(1_000_003), u(1)));
    }

    #[test]
    fn surd_products_are_exact() {
        let r2 = Surd::sqrt_ratio(&u(2), &u(1));
        let r3 = Surd::sqrt_ratio(&u(3), &u(1));
        assert_eq!(r2.clone() * r2.clone(), Surd::from_i64(2));
        assert_eq!((r2.clone() * r3.clone()) * (r2 * r3), Surd::from_i64(6));
        let half = Surd::sqrt_ratio(&u(1), &u(2));
        assert_eq!(half.clone() * half, Surd::recip_int(2));
    }

    #[test]
    fn surd_addition_cancels() {
        let r2 = Surd::sqrt_ratio(&u(8), &u(1));
        let diff = r2.clone() - r2;
        assert!(diff.is_zero());
        let x = Surd::from_i64(3) + Surd::sqrt_ratio(&u(2), &u(1));
        assert_eq!(x.render(), "(3 + √2)");
        assert!((x.to_c64().re - (3.0 + 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn imaginary_unit() {
        let i = Surd::imag_unit();
        assert_eq!(i.clone() * i.clone(), Surd::from_i64(-1));
        assert_eq!(i.conj(), -Surd::imag_unit());
        assert_eq!(i.render(), "1i");
    }

    #[test]
    fn float_sqrt_ratio_handles_huge_factorials() {
        let big: BigUint = (1..=200u32).map(BigUint::from).product();
        let v = Complex64::sqrt_ratio(&big, &big);
        assert!((v.re - 1.0).abs() < 1e-12);
    }
}
