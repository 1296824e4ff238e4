use num_bigint::BigUint;
use num_complex::Complex64;
use serde::Serialize;

use super::{AlgebraElement, AlgebraError, Monomial, Result, Scalar};

/// Dense `(n_max+1)×(n_max+1)` matrix in the truncated Fock basis `|0⟩…|n_max⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockMatrix<S: Scalar = Complex64> {
    n_max: usize,
    entries: Vec<S>,
}

fn fact(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

impl<S: Scalar> FockMatrix<S> {
    pub fn zeros(n_max: usize) -> Self {
        let n = n_max + 1;
        Self { n_max, entries: vec![S::zero(); n * n] }
    }

    pub fn identity(n_max: usize) -> Self {
        let mut m = Self::zeros(n_max);
        for i in 0..=n_max {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn get(&self, row: usize, col: usize) -> &S {
        &self.entries[row * self.dim() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: S) {
        let n = self.dim();
        self.entries[row * n + col] = v;
    }

    fn add_at(&mut self, row: usize, col: usize, v: S) {
        let n = self.dim();
        let slot = &mut self.entries[row * n + col];
        *slot = slot.clone() + v;
    }

    /// Plain truncated matrix product.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n_max, rhs.n_max, "Fock truncation mismatch");
        let n = self.dim();
        let mut out = Self::zeros(self.n_max);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, a.clone() * b.clone());
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.n_max, rhs.n_max, "Fock truncation mismatch");
        Self {
            n_max: self.n_max,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.n_max, rhs.n_max, "Fock truncation mismatch");
        Self {
            n_max: self.n_max,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn to_c64(&self) -> FockMatrix<Complex64> {
        FockMatrix { n_max: self.n_max, entries: self.entries.iter().map(S::to_c64).collect() }
    }

    /// Largest entry deviation over rows and columns `≤ limit`.
    pub fn max_abs_diff_block(&self, other: &Self, limit: usize) -> f64 {
        let lim = limit.min(self.n_max);
        let mut worst = 0.0f64;
        for i in 0..=lim {
            for j in 0..=lim {
                let d = (self.get(i, j).clone() - other.get(i, j).clone()).to_c64().norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.max_abs_diff_block(other, self.n_max)
    }

    /// Row-major `[[re, im], …]` rows, for JSON output.
    pub fn to_json_rows(&self) -> Vec<Vec<[f64; 2]>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let z = self.get(i, j).to_c64();
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_dmatrix(&self) -> nalgebra::DMatrix<Complex64> {
        let n = self.dim();
        nalgebra::DMatrix::from_fn(n, n, |i, j| self.get(i, j).to_c64())
    }
}

#[derive(Serialize)]
struct FockJson {
    n_max: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl<S: Scalar> Serialize for FockMatrix<S> {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        FockJson { n_max: self.n_max, entries: self.to_json_rows() }.serialize(s)
    }
}

/// Adds the truncated matrix of `c·Q^h E^ε D^k` into `out`.
///
/// `Q|n⟩ = √(n+1)|n+1⟩`, `D|n⟩ = √n|n−1⟩`, `E = |0⟩⟨0|`.
fn accumulate<S: Scalar>(out: &mut FockMatrix<S>, m: Monomial, c: &S) {
    let (h, k) = (m.q as usize, m.d as usize);
    let n_max = out.n_max;
    if m.e {
        if h <= n_max && k <= n_max {
            let v = S::sqrt_ratio(&(fact(h) * fact(k)), &BigUint::from(1u8));
            out.add_at(h, k, c.clone() * v);
        }
        return;
    }
    for j in k..=n_max {
        let row = j - k + h;
        if row > n_max {
            break;
        }
        // √(j!·row!)/(j−k)!
        let base = fact(j - k);
        let v = S::sqrt_ratio(&(fact(j) * fact(row)), &(&base * &base));
        out.add_at(row, j, c.clone() * v);
    }
}

/// Truncated matrix of `x`. Requires `n_max ≥ deg x`.
pub fn fock_matrix<S: Scalar>(x: &AlgebraElement<S>, n_max: usize) -> Result<FockMatrix<S>> {
    let degree = x.degree();
    if n_max < degree as usize {
        return Err(AlgebraError::TruncationTooSmall { n_max, degree });
    }
    let mut out = FockMatrix::zeros(n_max);
    for (m, c) in x.terms() {
        accumulate(&mut out, *m, c);
    }
    Ok(out)
}
