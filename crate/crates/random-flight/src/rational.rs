//! Exact rational monomials in the model parameters `c` and `lambda`.
//!
//! Every coefficient produced by the gamma recurrence has the shape
//! `r * c^a * lambda^b` with `r` an exact rational depending only on the
//! dimension. Keeping `c` and `lambda` symbolic lets the whole engine run
//! over the rationals; floating point enters only at evaluation time.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

/// The rising factorial `(a)_n = a (a+1) ... (a+n-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: &BigRational, n: u32) -> BigRational {
    let mut acc = BigRational::one();
    let mut factor = a.clone();
    let one = BigRational::one();
    for _ in 0..n {
        acc *= &factor;
        factor += &one;
    }
    acc
}

/// Convenience constructor for an exact rational from an integer pair.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// An exact term `coeff * c^c_power * lambda^lambda_power`.
///
/// `num::BigRational` keeps the coefficient in lowest terms with a positive
/// denominator, so equality of monomials is plain structural equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMonomial {
    pub coeff: BigRational,
    pub c_power: u32,
    pub lambda_power: u32,
}

impl RationalMonomial {
    pub fn new(coeff: BigRational, c_power: u32, lambda_power: u32) -> Self {
        Self {
            coeff,
            c_power,
            lambda_power,
        }
    }

    /// `1 * c^0 * lambda^0`.
    pub fn one() -> Self {
        Self::new(BigRational::one(), 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Product of two monomials; powers add, coefficients multiply exactly.
    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            &self.coeff * &other.coeff,
            self.c_power + other.c_power,
            self.lambda_power + other.lambda_power,
        )
    }

    /// Multiplies by `lambda` (raises the lambda power by one).
    pub fn times_lambda(&self) -> Self {
        Self::new(self.coeff.clone(), self.c_power, self.lambda_power + 1)
    }

    /// Adds a like term. Returns `None` when the powers disagree, which in
    /// the gamma engine would indicate a broken structural invariant.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.c_power != other.c_power || self.lambda_power != other.lambda_power {
            return None;
        }
        Some(Self::new(
            &self.coeff + &other.coeff,
            self.c_power,
            self.lambda_power,
        ))
    }

    /// Numeric value at concrete `c`, `lambda`.
    pub fn eval(&self, c: f64, lambda: f64) -> f64 {
        self.coeff_f64() * c.powi(self.c_power as i32) * lambda.powi(self.lambda_power as i32)
    }

    /// The rational coefficient rounded to the nearest `f64`.
    pub fn coeff_f64(&self) -> f64 {
        self.coeff
            .to_f64()
            .expect("rational-to-f64 conversion is total for finite ratios")
    }
}

impl std::fmt::Display for RationalMonomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeff.is_integer() {
            write!(f, "{}", self.coeff.numer())?;
        } else {
            write!(f, "{}/{}", self.coeff.numer(), self.coeff.denom())?;
        }
        if self.c_power > 0 {
            write!(f, "*c^{}", self.c_power)?;
        }
        if self.lambda_power > 0 {
            write!(f, "*lambda^{}", self.lambda_power)?;
        }
        Ok(())
    }
}

/// Sign-aware absolute value, used when series oracles need `|coeff|`.
pub fn abs_rational(r: &BigRational) -> BigRational {
    r.abs()
}
