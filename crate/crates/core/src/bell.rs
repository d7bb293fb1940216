//! Bell numbers, singleton-free Bell numbers, and binomial coefficients as
//! exact tables, plus the numeric identities used to cross-check them.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact tables of `B(n)` (Bell), `B~(n)` (partitions with no singleton
/// block), and Pascal's triangle, up to a fixed capacity (largest admissible
/// `n`). Built eagerly; all accessors are cheap references.
pub struct BellTable {
    cap: usize,
    bell: Vec<BigUint>,
    reduced: Vec<BigUint>,
    choose: Vec<Vec<BigUint>>,
    zero: BigUint,
}

impl BellTable {
    /// Default largest admissible index. Overridable at the CLI surface via
    /// the `PEXT_TABLE_CAP` environment variable.
    pub const DEFAULT_CAPACITY: usize = 512;

    /// Build tables for all `0 <= n <= cap`.
    ///
    /// Recurrences, with `C` read off Pascal's triangle:
    /// `B(n+1) = sum_i C(n,i) B(i)` and
    /// `B~(n+1) = sum_{i<n} C(n,i) B~(i)` (the block containing element
    /// `n+1` takes `n-i` companions, at least one of them).
    pub fn new(cap: usize) -> Self {
        let mut choose: Vec<Vec<BigUint>> = Vec::with_capacity(cap + 1);
        for n in 0..=cap {
            let mut row = vec![BigUint::one(); n + 1];
            for k in 1..n {
                row[k] = &choose[n - 1][k - 1] + &choose[n - 1][k];
            }
            choose.push(row);
        }

        let mut bell = vec![BigUint::one()];
        let mut reduced = vec![BigUint::one()];
        if cap >= 1 {
            reduced.push(BigUint::zero());
        }
        for (n, row) in choose.iter().enumerate().take(cap) {
            let next: BigUint = row.iter().zip(&bell).map(|(c, b)| c * b).sum();
            bell.push(next);
            if n >= 1 {
                let next: BigUint = row[..n].iter().zip(&reduced).map(|(c, r)| c * r).sum();
                reduced.push(next);
            }
        }

        BellTable {
            cap,
            bell,
            reduced,
            choose,
            zero: BigUint::zero(),
        }
    }

    pub fn with_default_capacity() -> Self {
        Self::new(Self::DEFAULT_CAPACITY)
    }

    pub fn capacity(&self) -> usize {
        self.cap
    }

    /// `B(n)`, the number of partitions of an n-element set.
    pub fn bell(&self, n: usize) -> Result<&BigUint> {
        self.bell.get(n).ok_or(Error::Capacity {
            what: "bell table",
            requested: n,
            cap: self.cap,
        })
    }

    /// `B~(n)`, the number of partitions of an n-element set with no
    /// singleton block. `B~(0)=1`, `B~(1)=0`.
    pub fn bell_reduced(&self, n: usize) -> Result<&BigUint> {
        self.reduced.get(n).ok_or(Error::Capacity {
            what: "bell table",
            requested: n,
            cap: self.cap,
        })
    }

    /// `B~` extended by zero to negative arguments, as the summation
    /// formulas require. Panics beyond capacity (callers bound their `n`
    /// before looping over sum indices).
    pub fn reduced_signed(&self, i: i64) -> &BigUint {
        if i < 0 {
            &self.zero
        } else {
            &self.reduced[i as usize]
        }
    }

    /// Binomial coefficient `C(n,k)`; zero for `k > n`. Panics beyond
    /// capacity.
    pub fn choose(&self, n: usize, k: usize) -> &BigUint {
        if k > n {
            &self.zero
        } else {
            &self.choose[n][k]
        }
    }

    /// Checks the binomial inversion `B~(n) = sum_i (-1)^{n-i} C(n,i) B(i)`
    /// exactly.
    pub fn verify_inversion(&self, n: usize) -> Result<bool> {
        self.bell(n)?;
        let mut acc = BigInt::zero();
        for i in 0..=n {
            let term = BigInt::from(self.choose(n, i) * &self.bell[i]);
            if (n - i).is_multiple_of(2) {
                acc += term;
            } else {
                acc -= term;
            }
        }
        Ok(!acc.is_negative() && acc.magnitude() == &self.reduced[n])
    }

    /// Truncated series for `B~(n)`: `(1/e) sum_{i=0}^{terms} (i-1)^n / i!`.
    ///
    /// The signed `i=0` term `(-1)^n` is part of the identity; dropping it
    /// visibly breaks `n=1` (which must come out near 0) and `n=4`.
    /// Factorials are accumulated in `f64`, so the sum is truncated at
    /// `i=170` regardless of `terms`; by then the tail is far below f64
    /// resolution for every `n` this is used with.
    pub fn dobinski_reduced_approx(&self, n: u32, terms: u32) -> f64 {
        let mut sum = 0.0_f64;
        let mut factorial = 1.0_f64;
        for i in 0..=terms.min(170) {
            if i > 0 {
                factorial *= f64::from(i);
            }
            let term = (f64::from(i) - 1.0).powi(n as i32) / factorial;
            if !term.is_finite() {
                break;
            }
            sum += term;
        }
        sum / std::f64::consts::E
    }

    /// Exact check of the product inequality
    /// `B~(n-a) B~(n-b) <= B~(n-delta) B~(n-(a+b-delta))`.
    ///
    /// Requires `0 <= delta <= min(a,b)` and all four arguments
    /// nonnegative. Note this is a *check*, not an axiom: the inequality
    /// fails on part of its domain (see the acceptance suite), and callers
    /// treat `false` as a reportable finding.
    pub fn log_supermodular_check(&self, n: u32, a: u32, b: u32, delta: u32) -> Result<bool> {
        if delta > a.min(b) {
            return Err(Error::arg(format!(
                "delta={delta} exceeds min(a,b)=min({a},{b})"
            )));
        }
        if a > n || b > n || a + b - delta > n {
            return Err(Error::arg(format!(
                "arguments out of range: need a,b <= n and a+b-delta <= n, got n={n} a={a} b={b} delta={delta}"
            )));
        }
        self.bell(n as usize)?;
        let lhs = &self.reduced[(n - a) as usize] * &self.reduced[(n - b) as usize];
        let rhs = &self.reduced[(n - delta) as usize] * &self.reduced[(n - (a + b - delta)) as usize];
        Ok(lhs <= rhs)
    }
}

/// Relative error helper used by the series checks; exact zero targets fall
/// back to absolute error.
pub fn relative_error(approx: f64, exact: &BigUint) -> f64 {
    let exact = exact.to_f64().unwrap_or(f64::INFINITY);
    if exact == 0.0 {
        approx.abs()
    } else {
        (approx - exact).abs() / exact
    }
}
