use std::fmt;

use num_bigint::BigUint;
use num_complex::Complex64;

use super::{AlgebraElement, AlgebraError, Monomial, Result, Scalar};

/// Normal-ordered combination of `(a†)^m V^ε a^n` with `[a, a†] = 1`,
/// `aV = 0`, `Va† = 0`, `V² = V`.
///
/// These are the defining relations of the extended Heisenberg algebra under
/// `a† ↔ Q`, `V ↔ E`, `a ↔ D`, so the product is the same and only the
/// symbols differ.
#[derive(Clone, PartialEq)]
pub struct BosonElement<S: Scalar = Complex64> {
    inner: AlgebraElement<S>,
}

impl<S: Scalar> BosonElement<S> {
    pub fn zero() -> Self {
        Self { inner: AlgebraElement::zero() }
    }

    pub fn one() -> Self {
        Self { inner: AlgebraElement::one() }
    }

    /// `a`
    pub fn annihilation() -> Self {
        Self { inner: AlgebraElement::d() }
    }

    /// `a†`
    pub fn creation() -> Self {
        Self { inner: AlgebraElement::q() }
    }

    /// `V`
    pub fn vacuum() -> Self {
        Self { inner: AlgebraElement::e() }
    }

    /// Coefficient of `(a†)^m V^ε a^n`.
    pub fn coeff(&self, m: u32, eps: bool, n: u32) -> S {
        self.inner.coeff(&Monomial::new(m, eps, n))
    }

    /// The same element written in `Q, E, D` under the coding. Its Fock
    /// matrix is the matrix of this element in the number basis.
    pub fn coded(&self) -> &AlgebraElement<S> {
        &self.inner
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.inner.terms()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        Ok(Self { inner: self.inner.multiply(&rhs.inner)? })
    }

    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        Ok(Self { inner: self.inner.commutator(&rhs.inner)? })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self { inner: &self.inner + &rhs.inner }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self { inner: &self.inner - &rhs.inner }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { inner: self.inner.scale(c) }
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        Ok(Self { inner: self.inner.pow(n)? })
    }

    pub fn contains_vacuum(&self) -> bool {
        self.inner.contains_idempotent()
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BosonElement<T> {
        BosonElement { inner: self.inner.map_scalars(f) }
    }

    /// Back to `{Q, D}` via `a = (Q + D)/√2`, `a† = (Q − D)/√2`.
    pub fn to_weyl(&self) -> Result<AlgebraElement<S>> {
        if self.contains_vacuum() {
            return Err(AlgebraError::ContainsIdempotent);
        }
        let r = inv_sqrt2::<S>();
        let a = (&AlgebraElement::q() + &AlgebraElement::d()).scale(&r);
        let ad = (&AlgebraElement::q() - &AlgebraElement::d()).scale(&r);
        substitute(&self.inner, &ad, &a)
    }
}

fn inv_sqrt2<S: Scalar>() -> S {
    S::sqrt_ratio(&BigUint::from(1u8), &BigUint::from(2u8))
}

/// Replaces `Q^h D^k` by `q_img^h · d_img^k` in an element without `E`.
fn substitute<S: Scalar>(
    x: &AlgebraElement<S>,
    q_img: &AlgebraElement<S>,
    d_img: &AlgebraElement<S>,
) -> Result<AlgebraElement<S>> {
    let mut out = AlgebraElement::zero();
    for (m, c) in x.terms() {
        let term = q_img.pow(m.q)?.multiply(&d_img.pow(m.d)?)?;
        out = &out + &term.scale(c);
    }
    Ok(out)
}

/// Substitutes `Q = (a + a†)/√2`, `D = (a − a†)/√2` and normal-orders.
pub fn to_boson<S: Scalar>(x: &AlgebraElement<S>) -> Result<BosonElement<S>> {
    if x.contains_idempotent() {
        return Err(AlgebraError::ContainsIdempotent);
    }
    let r = inv_sqrt2::<S>();
    // in boson coding Q stands for a† and D for a
    let a = AlgebraElement::<S>::d();
    let ad = AlgebraElement::<S>::q();
    let q_img = (&a + &ad).scale(&r);
    let d_img = (&a - &ad).scale(&r);
    Ok(BosonElement { inner: substitute(x, &q_img, &d_img)? })
}

impl<S: Scalar> From<AlgebraElement<S>> for BosonElement<S> {
    /// Reads `Q, E, D` as `a†, V, a` without any substitution.
    fn from(inner: AlgebraElement<S>) -> Self {
        Self { inner }
    }
}

impl<S: Scalar> fmt::Display for BosonElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.inner.render_with(["ad", "V", "a"]))
    }
}

impl<S: Scalar> fmt::Debug for BosonElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BosonElement({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{normal_order, Generator, Surd};

    type El = AlgebraElement<Surd>;
    type B = BosonElement<Surd>;

    #[test]
    fn q_maps_to_half_sum() {
        let b = to_boson(&El::q()).unwrap();
        let r = inv_sqrt2::<Surd>();
        assert_eq!(b, B::annihilation().add(&B::creation()).scale(&r));
    }

    #[test]
    fn canonical_commutator() {
        let c = B::annihilation().commutator(&B::creation()).unwrap();
        assert_eq!(c, B::one());
        let image = to_boson(&El::d().commutator(&El::q()).unwrap()).unwrap();
        assert_eq!(image, B::one());
    }

    #[test]
    fn symmetric_product() {
        let qd = normal_order::<Surd>(&[Generator::Q, Generator::D]).unwrap();
        let dq = normal_order::<Surd>(&[Generator::D, Generator::Q]).unwrap();
        let b = to_boson(&(&qd + &dq)).unwrap();
        let expected = B::annihilation().pow(2).unwrap().sub(&B::creation().pow(2).unwrap());
        assert_eq!(b, expected);
        assert_eq!(b.to_string(), "-ad^2 + a^2");
    }

    #[test]
    fn round_trip() {
        let x = &El::q().pow(3).unwrap() - &normal_order::<Surd>(&[Generator::D, Generator::Q, Generator::D]).unwrap();
        assert_eq!(to_boson(&x).unwrap().to_weyl().unwrap(), x);
    }

    #[test]
    fn vacuum_relations() {
        let v = B::vacuum();
        assert!(B::annihilation().multiply(&v).unwrap().is_zero());
        assert!(v.multiply(&B::creation()).unwrap().is_zero());
        assert_eq!(v.multiply(&v).unwrap(), v);
        assert!(to_boson(&El::e()).is_err());
    }
}
