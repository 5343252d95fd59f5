//! Model parameters and moment multi-indices.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("dimension must be at least 3, got {0}")]
    DimensionTooSmall(u32),
    #[error("speed must be positive and finite, got {0}")]
    NonPositiveSpeed(f64),
    #[error("switching intensity must be positive and finite, got {0}")]
    NonPositiveIntensity(f64),
    #[error("multi-index has length {len} but the dimension is {m}")]
    IndexLengthMismatch { len: usize, m: u32 },
}

/// The three parameters of the symmetric Markov random flight: dimension `m`,
/// speed `c` and switching intensity `lambda`. The standing hypothesis
/// `m >= 3` is enforced at construction, as are `c > 0` and `lambda > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlightParams {
    m: u32,
    c: f64,
    lambda: f64,
}

impl FlightParams {
    pub fn new(m: u32, c: f64, lambda: f64) -> Result<Self, ParamError> {
        if m < 3 {
            return Err(ParamError::DimensionTooSmall(m));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(ParamError::NonPositiveSpeed(c));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(ParamError::NonPositiveIntensity(lambda));
        }
        Ok(Self { m, c, lambda })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Shape of a multi-index, as far as the analytic formulas are concerned.
///
/// Only the *number* of entries equal to 2 matters for the marginal second
/// moment functions; which coordinate slots carry them does not, by the
/// rotational symmetry of the flight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    /// Exactly one entry equal to 2, the rest 0: 1-marginal second moment.
    OneMarginalSquare,
    /// Exactly two entries equal to 2, the rest 0: 2-marginal second moment.
    TwoMarginalSquare,
    /// Every entry equal to 1; the corresponding mixed moment vanishes by
    /// symmetry (a coordinate sign flip leaves the flight invariant and
    /// negates the product).
    AllOnes,
    /// Anything else; no analytic reference value is asserted.
    Other,
}

/// A moment multi-index `q = (q_1, ..., q_m)` of non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndex {
    entries: Vec<u32>,
}

impl MultiIndex {
    /// Builds a multi-index checked against the dimension of `params`.
    pub fn new(entries: Vec<u32>, params: &FlightParams) -> Result<Self, ParamError> {
        if entries.len() != params.m() as usize {
            return Err(ParamError::IndexLengthMismatch {
                len: entries.len(),
                m: params.m(),
            });
        }
        Ok(Self { entries })
    }

    /// Builds a multi-index without a dimension check (length is still the
    /// implied dimension; callers pair it with matching params).
    pub fn from_entries(entries: Vec<u32>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn kind(&self) -> IndexKind {
        let twos = self.entries.iter().filter(|&&q| q == 2).count();
        let zeros = self.entries.iter().filter(|&&q| q == 0).count();
        let ones = self.entries.iter().filter(|&&q| q == 1).count();
        let n = self.entries.len();
        if twos == 1 && zeros == n - 1 {
            IndexKind::OneMarginalSquare
        } else if twos == 2 && zeros == n - 2 {
            IndexKind::TwoMarginalSquare
        } else if ones == n && n > 0 {
            IndexKind::AllOnes
        } else {
            IndexKind::Other
        }
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|q| q.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Validates `(m, c, lambda)` and returns the parameter triple.
pub fn validate_params(m: u32, c: f64, lambda: f64) -> Result<FlightParams, ParamError> {
    FlightParams::new(m, c, lambda)
}
