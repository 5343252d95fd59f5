//! Truncation control and compensated summation for series evaluation.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncationPolicy {
    /// Sum exactly `max_terms` terms, then require the trailing terms to have
    /// converged below `abs_tol`.
    FixedOrder,
    /// Stop as soon as three consecutive term magnitudes fall below
    /// `abs_tol`; fail if `max_terms` is exhausted first.
    AdaptiveUntilTol,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub abs_tol: f64,
    pub policy: TruncationPolicy,
}

impl SeriesControl {
    pub fn adaptive(max_terms: usize, abs_tol: f64) -> Self {
        assert!(max_terms > 0, "max_terms must be positive");
        assert!(abs_tol >= 0.0, "abs_tol must be non-negative");
        Self {
            max_terms,
            abs_tol,
            policy: TruncationPolicy::AdaptiveUntilTol,
        }
    }

    pub fn fixed(max_terms: usize, abs_tol: f64) -> Self {
        assert!(max_terms > 0, "max_terms must be positive");
        assert!(abs_tol >= 0.0, "abs_tol must be non-negative");
        Self {
            max_terms,
            abs_tol,
            policy: TruncationPolicy::FixedOrder,
        }
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self::adaptive(512, 1e-12)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error(
        "series did not converge below {abs_tol:e} within {max_terms} terms \
         (last term magnitude {last_term:e})"
    )]
    TruncationNotConverged {
        max_terms: usize,
        abs_tol: f64,
        last_term: f64,
    },
    #[error(
        "cancellation in the series exceeds the tolerance budget \
         (estimated rounding error {estimated_error:e})"
    )]
    CancellationBudgetExceeded { estimated_error: f64 },
    #[error("series term at index {index} is not finite")]
    NonFiniteTerm { index: usize },
}

/// Outcome of a compensated summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub terms_used: usize,
    /// Sum of absolute term values; `epsilon * abs_sum` estimates the
    /// rounding error accumulated through cancellation.
    pub abs_sum: f64,
}

/// Sums `terms` under `ctrl` using Neumaier-compensated accumulation.
///
/// Terms are consumed in order. Convergence means three consecutive term
/// magnitudes strictly below `abs_tol` (or equal, when `abs_tol` is zero);
/// under the fixed-order policy all `max_terms` terms are consumed first and
/// the trailing three must have converged.
pub fn sum_series<I>(ctrl: &SeriesControl, terms: I) -> Result<SeriesSum, SeriesError>
where
    I: IntoIterator<Item = f64>,
{
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut abs_sum = 0.0f64;
    let mut small_run = 0usize;
    let mut used = 0usize;
    let mut last_term = f64::INFINITY;

    for (index, term) in terms.into_iter().take(ctrl.max_terms).enumerate() {
        if !term.is_finite() {
            return Err(SeriesError::NonFiniteTerm { index });
        }
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        abs_sum += term.abs();
        used = index + 1;
        last_term = term.abs();

        let below = if ctrl.abs_tol > 0.0 {
            last_term < ctrl.abs_tol
        } else {
            last_term == 0.0
        };
        small_run = if below { small_run + 1 } else { 0 };

        if ctrl.policy == TruncationPolicy::AdaptiveUntilTol && small_run >= 3 {
            return Ok(SeriesSum {
                value: sum + comp,
                terms_used: used,
                abs_sum,
            });
        }
    }

    if small_run >= 3 {
        Ok(SeriesSum {
            value: sum + comp,
            terms_used: used,
            abs_sum,
        })
    } else {
        Err(SeriesError::TruncationNotConverged {
            max_terms: ctrl.max_terms,
            abs_tol: ctrl.abs_tol,
            last_term,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adaptive_stops_after_three_small_terms() {
        let ctrl = SeriesControl::adaptive(100, 1e-3);
        let terms = vec![1.0, 0.5, 1e-4, 1e-5, 1e-6, 10.0, 10.0];
        let s = sum_series(&ctrl, terms).unwrap();
        assert_eq!(s.terms_used, 5);
        assert!((s.value - 1.500111).abs() < 1e-12);
    }

    #[test]
    fn adaptive_fails_when_budget_exhausted() {
        let ctrl = SeriesControl::adaptive(10, 1e-12);
        let err = sum_series(&ctrl, std::iter::repeat(1.0)).unwrap_err();
        assert!(matches!(err, SeriesError::TruncationNotConverged { .. }));
    }

    #[test]
    fn fixed_order_consumes_everything_then_validates_tail() {
        let ctrl = SeriesControl::fixed(6, 1e-3);
        let terms = vec![1.0, 0.5, 1e-4, 1e-5, 1e-6, 1e-7];
        let s = sum_series(&ctrl, terms.clone()).unwrap();
        assert_eq!(s.terms_used, 6);

        // Same terms but an order too small to reach the converged tail.
        let ctrl_small = SeriesControl::fixed(2, 1e-3);
        let err = sum_series(&ctrl_small, terms).unwrap_err();
        assert!(matches!(err, SeriesError::TruncationNotConverged { .. }));
    }

    #[test]
    fn zero_tolerance_accepts_exact_zero_tail() {
        let ctrl = SeriesControl::adaptive(10, 0.0);
        let s = sum_series(&ctrl, vec![2.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(s.value, 2.0);
    }

    #[test]
    fn non_finite_term_is_rejected() {
        let ctrl = SeriesControl::adaptive(10, 1e-6);
        let err = sum_series(&ctrl, vec![1.0, f64::INFINITY]).unwrap_err();
        assert_eq!(err, SeriesError::NonFiniteTerm { index: 1 });
    }

    #[test]
    fn compensated_sum_beats_naive_on_cancellation() {
        // 1 + 1e-16 repeated, then -1: naive summation loses the 1e-16s.
        let mut terms = vec![1.0];
        terms.extend(std::iter::repeat(1e-16).take(100));
        terms.push(-1.0);
        terms.extend([0.0, 0.0, 0.0]);
        let ctrl = SeriesControl::adaptive(200, 1e-30);
        let s = sum_series(&ctrl, terms).unwrap();
        assert!((s.value - 100.0e-16).abs() < 1e-20, "got {}", s.value);
    }
}
