use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};

use super::SymplecticMatrix;

/// 2×2 matrix over the rationals, used to check ray identities such as
/// `S⁴ = I` without rounding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix2 {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactRay {
    pub q: BigRational,
    pub p: BigRational,
}

impl ExactRay {
    pub fn new(q: BigRational, p: BigRational) -> Self {
        Self { q, p }
    }

    pub fn from_ints(q: i64, p: i64) -> Self {
        Self::new(int(q), int(p))
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl ExactMatrix2 {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(int(a), int(b), int(c), int(d))
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    /// `[[1, 0], [−1/f, 1]]` with `f` taken at its exact binary value.
    pub fn lens(f: f64) -> Option<Self> {
        let f = BigRational::from_f64(f)?;
        if f.is_zero() {
            return None;
        }
        Some(Self::new(int(1), int(0), -f.recip(), int(1)))
    }

    /// `[[1, d], [0, 1]]`.
    pub fn free(d: f64) -> Option<Self> {
        Some(Self::new(int(1), BigRational::from_f64(d)?, int(0), int(1)))
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| self.mul(&acc))
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    pub fn det(&self) -> BigRational {
        &self.a * &self.d - &self.b * &self.c
    }

    /// For 2×2 matrices the symplectic conditions reduce to `det = 1`.
    pub fn is_symplectic(&self) -> bool {
        self.det().is_one()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn apply(&self, ray: &ExactRay) -> ExactRay {
        ExactRay {
            q: &self.a * &ray.q + &self.b * &ray.p,
            p: &self.c * &ray.q + &self.d * &ray.p,
        }
    }

    pub fn to_f64(&self) -> SymplecticMatrix {
        let f = |x: &BigRational| num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN);
        SymplecticMatrix::from_trusted(nalgebra::DMatrix::from_row_slice(
            2,
            2,
            &[f(&self.a), f(&self.b), f(&self.c), f(&self.d)],
        ))
    }
}
