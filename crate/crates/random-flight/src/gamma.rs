//! Exact construction of the polynomials `gamma_n` and the closed forms for
//! their coefficients at `||alpha||^2` and `||alpha||^4`.
//!
//! The characteristic function of the flight expands as
//! `H(alpha, t) = exp(-lambda t) * sum_n gamma_{n+1}(||alpha||) t^n / n!`,
//! where each `gamma_n` is a polynomial in `||alpha||^2` of degree
//! `floor((n-1)/2)` defined by a convolution recurrence against the odd
//! source coefficients `theta_{2k+1}`. Everything in this module is exact:
//! coefficients are [`RationalMonomial`]s and the recurrence is evaluated
//! over the rationals.

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::rational::{ratio, RationalMonomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("closed form for this coefficient starts at n = {min}, got n = {n}")]
    IndexTooSmall { n: u32, min: u32 },
}

/// The odd source coefficient `theta_{2k+1}` as a monomial of degree `k` in
/// `||alpha||^2`: `(-1)^k (1/2)_k / (m/2)_k * c^{2k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaCoefficient {
    pub n: u32,
    pub k: u32,
    pub value: RationalMonomial,
}

/// `theta_n`; even indices are identically zero and carry an explicit
/// marker so the unified recurrence can be written down literally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Theta {
    Zero,
    Coefficient(ThetaCoefficient),
}

/// Computes `theta_n` for dimension `m`. `n` must be at least 1.
pub fn theta(n: u32, m: u32) -> Theta {
    assert!(n >= 1, "theta is defined for n >= 1");
    if n % 2 == 0 {
        return Theta::Zero;
    }
    let k = (n - 1) / 2;
    Theta::Coefficient(ThetaCoefficient {
        n,
        k,
        value: theta_monomial(k, m),
    })
}

/// `(-1)^k (1/2)_k / (m/2)_k * c^{2k}` via the term-ratio recurrence
/// `r_k = r_{k-1} * (-(2k-1) / (m + 2k - 2))`.
fn theta_monomial(k: u32, m: u32) -> RationalMonomial {
    let mut coeff = BigRational::one();
    for j in 1..=k {
        coeff *= ratio(-(2 * j as i64 - 1), m as i64 + 2 * j as i64 - 2);
    }
    RationalMonomial::new(coeff, 2 * k, 0)
}

/// `gamma_n` as a sparse polynomial in `||alpha||^2`, keyed by the power `k`.
///
/// Structural invariant: the term at `k` has `c_power = 2k` and
/// `lambda_power = n - 1 - 2k`; `gamma_0` is the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaPolynomial {
    n: u32,
    coeffs: BTreeMap<u32, RationalMonomial>,
}

impl GammaPolynomial {
    fn zero(n: u32) -> Self {
        Self {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `||alpha||^2`, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Coefficient of `||alpha||^{2k}`.
    pub fn coeff(&self, k: u32) -> Option<&RationalMonomial> {
        self.coeffs.get(&k)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &RationalMonomial)> {
        self.coeffs.iter().map(|(k, mono)| (*k, mono))
    }

    fn add_term(&mut self, k: u32, mono: RationalMonomial) {
        if mono.is_zero() {
            return;
        }
        match self.coeffs.remove(&k) {
            None => {
                self.coeffs.insert(k, mono);
            }
            Some(existing) => {
                let sum = existing
                    .checked_add(&mono)
                    .expect("gamma terms at equal degree always share c/lambda powers");
                if !sum.is_zero() {
                    self.coeffs.insert(k, sum);
                }
            }
        }
    }

    /// Accumulates `lambda * self * theta_monomial` (degree shift `shift`)
    /// into `out`, dropping degrees beyond `cap`.
    fn mul_shift_into(
        &self,
        shift: u32,
        mono: &RationalMonomial,
        cap: Option<u32>,
        out: &mut GammaPolynomial,
    ) {
        for (k, term) in &self.coeffs {
            let target = k + shift;
            if let Some(cap) = cap {
                if target > cap {
                    continue;
                }
            }
            out.add_term(target, term.mul(mono).times_lambda());
        }
    }
}

/// Memoized table of `gamma_0 .. gamma_N` for a fixed dimension, built
/// bottom-up with the split even/odd recurrences.
///
/// An optional degree cap truncates every polynomial to the slices
/// `k <= cap`; multiplication by `theta_{2b+1}` only moves degrees upward,
/// so the retained slices are still exact. The table is immutable through
/// `&self` accessors once grown, so concurrent reads are safe after the
/// single-writer build phase.
#[derive(Debug, Clone)]
pub struct GammaTable {
    m: u32,
    cap: Option<u32>,
    polys: Vec<GammaPolynomial>,
    thetas: Vec<RationalMonomial>,
}

impl GammaTable {
    pub fn new(m: u32) -> Self {
        Self::with_degree_cap(m, None)
    }

    pub fn with_degree_cap(m: u32, cap: Option<u32>) -> Self {
        assert!(m >= 3, "the flight model requires dimension m >= 3");
        let mut gamma1 = GammaPolynomial::zero(1);
        gamma1.add_term(0, RationalMonomial::one());
        Self {
            m,
            cap,
            polys: vec![GammaPolynomial::zero(0), gamma1],
            thetas: vec![RationalMonomial::one()],
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Grows the table so that `gamma_n` is available.
    pub fn ensure(&mut self, n: u32) {
        while self.polys.len() <= n as usize {
            let next = self.polys.len() as u32;
            let poly = self.build(next);
            self.polys.push(poly);
        }
    }

    /// `gamma_n`, growing the table as needed.
    pub fn gamma(&mut self, n: u32) -> &GammaPolynomial {
        self.ensure(n);
        &self.polys[n as usize]
    }

    /// `gamma_n` if already built.
    pub fn get(&self, n: u32) -> Option<&GammaPolynomial> {
        self.polys.get(n as usize)
    }

    /// Coefficient of `||alpha||^{2k}` in `gamma_n`, growing as needed.
    pub fn coeff(&mut self, n: u32, k: u32) -> Option<RationalMonomial> {
        self.ensure(n);
        self.polys[n as usize].coeff(k).cloned()
    }

    fn theta_mono(&mut self, k: u32) -> RationalMonomial {
        while self.thetas.len() <= k as usize {
            let next = self.thetas.len() as u32;
            self.thetas.push(theta_monomial(next, self.m));
        }
        self.thetas[k as usize].clone()
    }

    fn build(&mut self, n: u32) -> GammaPolynomial {
        debug_assert!(n >= 2);
        let mut out = GammaPolynomial::zero(n);
        if n % 2 == 0 {
            // gamma_{2j} = lambda * sum_{k=0}^{j-1} gamma_{2j-2k-1} theta_{2k+1}
            let j = n / 2;
            for k in 0..j {
                let mono = self.theta_mono(k);
                if let Some(cap) = self.cap {
                    if k > cap {
                        break;
                    }
                }
                self.polys[(n - 2 * k - 1) as usize].mul_shift_into(k, &mono, self.cap, &mut out);
            }
        } else {
            // gamma_{2j+1} = theta_{2j+1}
            //              + lambda * sum_{k=0}^{j-1} gamma_{2j-2k} theta_{2k+1}
            let j = (n - 1) / 2;
            let lead = self.theta_mono(j);
            if self.cap.map_or(true, |cap| j <= cap) {
                out.add_term(j, lead);
            }
            for k in 0..j {
                let mono = self.theta_mono(k);
                if let Some(cap) = self.cap {
                    if k > cap {
                        break;
                    }
                }
                self.polys[(n - 2 * k - 1) as usize].mul_shift_into(k, &mono, self.cap, &mut out);
            }
        }
        out
    }
}

/// Builds `gamma_0 .. gamma_{max_n}` by the unified recurrence
/// `gamma_n = theta_n + lambda * sum_{k=1}^{n-1} gamma_{n-k} theta_k`,
/// keeping the even-index zero markers explicit. Used to cross-check the
/// split-recurrence table.
pub fn gamma_unified(max_n: u32, m: u32) -> Vec<GammaPolynomial> {
    assert!(m >= 3);
    let mut polys = vec![GammaPolynomial::zero(0)];
    let mut gamma1 = GammaPolynomial::zero(1);
    gamma1.add_term(0, RationalMonomial::one());
    polys.push(gamma1);

    for n in 2..=max_n {
        let mut out = GammaPolynomial::zero(n);
        match theta(n, m) {
            Theta::Zero => {}
            Theta::Coefficient(tc) => out.add_term(tc.k, tc.value),
        }
        for k in 1..n {
            match theta(k, m) {
                Theta::Zero => {
                    // even-index source coefficients vanish identically
                }
                Theta::Coefficient(tc) => {
                    polys[(n - k) as usize].mul_shift_into(tc.k, &tc.value, None, &mut out);
                }
            }
        }
        polys.push(out);
    }
    polys
}

/// Closed form for the coefficient of `||alpha||^2` in `gamma_n`:
/// `-(n-2)/m * c^2 * lambda^{n-3}` for `n >= 3`.
pub fn coeff_a2_closed(n: u32, m: u32) -> Result<RationalMonomial, CoeffError> {
    if n < 3 {
        return Err(CoeffError::IndexTooSmall { n, min: 3 });
    }
    let coeff = ratio(-((n as i64) - 2), m as i64);
    Ok(RationalMonomial::new(coeff, 2, n - 3))
}

/// Closed form for the coefficient of `||alpha||^4` in `gamma_n`:
/// `c^4 lambda^{n-5} (n-4) / (m^2 (m+2)) * [ (n+1)/2 * m + (n-5) ]`
/// for `n >= 5`. The bracket is a half-integer times `m` plus an integer,
/// so the whole computation stays rational.
pub fn coeff_a4_closed(n: u32, m: u32) -> Result<RationalMonomial, CoeffError> {
    if n < 5 {
        return Err(CoeffError::IndexTooSmall { n, min: 5 });
    }
    let n_i = n as i64;
    let m_i = m as i64;
    let bracket = ratio(n_i + 1, 2) * ratio(m_i, 1) + ratio(n_i - 5, 1);
    let coeff = ratio(n_i - 4, m_i * m_i * (m_i + 2)) * bracket;
    Ok(RationalMonomial::new(coeff, 4, n - 5))
}

/// One compared coefficient slice in a verification run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationRow {
    pub m: u32,
    pub n: u32,
    pub k: u32,
    pub recurrence: RationalMonomial,
    pub closed_form: RationalMonomial,
    pub matches: bool,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub rows: Vec<VerificationRow>,
}

impl VerificationReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.matches)
    }

    pub fn first_mismatch(&self) -> Option<&VerificationRow> {
        self.rows.iter().find(|r| !r.matches)
    }
}

/// Compares the recurrence-extracted coefficients at `||alpha||^2`
/// (`3 <= n <= max_n`) and `||alpha||^4` (`5 <= n <= max_n`) against the
/// closed forms, for every dimension in `dims`. Exact rational comparison;
/// a mismatch is reported, never thrown. Requires `max_n >= 3` and all
/// dimensions `>= 3`.
pub fn verify_closed_forms(max_n: u32, dims: &[u32]) -> VerificationReport {
    assert!(max_n >= 3, "verification starts at n = 3");
    assert!(dims.iter().all(|&m| m >= 3), "dimensions must be >= 3");

    let per_dim: Vec<Vec<VerificationRow>> = dims
        .par_iter()
        .map(|&m| {
            // Only the k <= 2 slices are compared; the capped build keeps
            // them exact at a fraction of the full-table cost.
            let mut table = GammaTable::with_degree_cap(m, Some(2));
            table.ensure(max_n);
            let mut rows = Vec::new();
            for n in 3..=max_n {
                let rec = table
                    .get(n)
                    .and_then(|p| p.coeff(1))
                    .cloned()
                    .expect("gamma_n has a degree-1 term for n >= 3");
                let closed = coeff_a2_closed(n, m).expect("n >= 3");
                let matches = rec == closed;
                rows.push(VerificationRow {
                    m,
                    n,
                    k: 1,
                    recurrence: rec,
                    closed_form: closed,
                    matches,
                });
                if n >= 5 {
                    let rec = table
                        .get(n)
                        .and_then(|p| p.coeff(2))
                        .cloned()
                        .expect("gamma_n has a degree-2 term for n >= 5");
                    let closed = coeff_a4_closed(n, m).expect("n >= 5");
                    let matches = rec == closed;
                    rows.push(VerificationRow {
                        m,
                        n,
                        k: 2,
                        recurrence: rec,
                        closed_form: closed,
                        matches,
                    });
                }
            }
            rows
        })
        .collect();

    VerificationReport {
        rows: per_dim.into_iter().flatten().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::traits::Zero;

    /// The first nine polynomials, frozen as exact rational functions of the
    /// dimension: for each n, the list of (k, coeff(m)) with the term
    /// structure coeff * c^{2k} * lambda^{n-1-2k}.
    fn frozen_table(m: i64) -> Vec<(u32, Vec<(u32, BigRational)>)> {
        vec![
            (0, vec![]),
            (1, vec![(0, ratio(1, 1))]),
            (2, vec![(0, ratio(1, 1))]),
            (3, vec![(0, ratio(1, 1)), (1, ratio(-1, m))]),
            (4, vec![(0, ratio(1, 1)), (1, ratio(-2, m))]),
            (
                5,
                vec![
                    (0, ratio(1, 1)),
                    (1, ratio(-3, m)),
                    (2, ratio(3, m * (m + 2))),
                ],
            ),
            (
                6,
                vec![
                    (0, ratio(1, 1)),
                    (1, ratio(-4, m)),
                    (2, ratio(7 * m + 2, m * m * (m + 2))),
                ],
            ),
            (
                7,
                vec![
                    (0, ratio(1, 1)),
                    (1, ratio(-5, m)),
                    (2, ratio(12 * m + 6, m * m * (m + 2))),
                    (3, ratio(-15, m * (m + 2) * (m + 4))),
                ],
            ),
            (
                8,
                vec![
                    (0, ratio(1, 1)),
                    (1, ratio(-6, m)),
                    (2, ratio(18 * m + 12, m * m * (m + 2))),
                    (3, ratio(-(36 * m + 24), m * m * (m + 2) * (m + 4))),
                ],
            ),
        ]
    }

    fn assert_matches_frozen(table: &mut GammaTable, m: i64) {
        for (n, entries) in frozen_table(m) {
            let poly = table.gamma(n).clone();
            assert_eq!(
                poly.terms().count(),
                entries.len(),
                "gamma_{n} term count at m = {m}"
            );
            for (k, coeff) in entries {
                let expected = RationalMonomial::new(coeff, 2 * k, n - 1 - 2 * k);
                assert_eq!(
                    poly.coeff(k),
                    Some(&expected),
                    "gamma_{n} coefficient at k = {k}, m = {m}"
                );
            }
        }
    }

    #[test]
    fn gamma_zero_is_zero_polynomial() {
        let mut table = GammaTable::new(3);
        assert!(table.gamma(0).is_zero());
    }

    #[test]
    fn gamma_two_is_lambda() {
        let mut table = GammaTable::new(5);
        let poly = table.gamma(2);
        assert_eq!(poly.coeff(0), Some(&RationalMonomial::new(ratio(1, 1), 0, 1)));
        assert_eq!(poly.terms().count(), 1);
    }

    #[test]
    fn gamma_five_matches_known_coefficients() {
        // gamma_5 = lambda^4 - 3/m c^2 lambda^2 ||a||^2 + 3/(m(m+2)) c^4 ||a||^4
        for m in [3u32, 4, 7] {
            let mut table = GammaTable::new(m);
            let poly = table.gamma(5).clone();
            let mi = m as i64;
            assert_eq!(poly.coeff(0), Some(&RationalMonomial::new(ratio(1, 1), 0, 4)));
            assert_eq!(poly.coeff(1), Some(&RationalMonomial::new(ratio(-3, mi), 2, 2)));
            assert_eq!(
                poly.coeff(2),
                Some(&RationalMonomial::new(ratio(3, mi * (mi + 2)), 4, 0))
            );
        }
    }

    #[test]
    fn first_nine_polynomials_match_frozen_table() {
        for m in 3..=10 {
            let mut table = GammaTable::new(m);
            assert_matches_frozen(&mut table, m as i64);
        }
    }

    #[test]
    fn theta_examples() {
        assert_eq!(
            theta(1, 3),
            Theta::Coefficient(ThetaCoefficient {
                n: 1,
                k: 0,
                value: RationalMonomial::one(),
            })
        );
        assert_eq!(theta(2, 3), Theta::Zero);
        assert_eq!(theta(4, 9), Theta::Zero);
        // theta_3 at m = 3 is -(1/3) c^2.
        assert_eq!(
            theta(3, 3),
            Theta::Coefficient(ThetaCoefficient {
                n: 3,
                k: 1,
                value: RationalMonomial::new(ratio(-1, 3), 2, 0),
            })
        );
    }

    #[test]
    fn degree_and_constant_term_invariants() {
        let mut table = GammaTable::new(4);
        for n in 1..=40 {
            let poly = table.gamma(n).clone();
            assert_eq!(poly.degree(), Some((n - 1) / 2), "degree of gamma_{n}");
            let k0 = poly.coeff(0).unwrap();
            assert!(k0.coeff.is_one());
            assert_eq!(k0.c_power, 0);
            assert_eq!(k0.lambda_power, n - 1);
        }
    }

    #[test]
    fn term_powers_follow_the_slot_structure() {
        let mut table = GammaTable::new(6);
        for n in 1..=30 {
            for (k, mono) in table.gamma(n).terms() {
                assert_eq!(mono.c_power, 2 * k);
                assert_eq!(mono.lambda_power, n - 1 - 2 * k);
                assert!(!mono.coeff.is_zero());
            }
        }
    }

    #[test]
    fn split_and_unified_recurrences_agree_to_n_60() {
        for m in [3u32, 5, 9] {
            let unified = gamma_unified(60, m);
            let mut table = GammaTable::new(m);
            table.ensure(60);
            for n in 0..=60u32 {
                assert_eq!(
                    table.get(n).unwrap(),
                    &unified[n as usize],
                    "gamma_{n} at m = {m}"
                );
            }
        }
    }

    #[test]
    fn degree_capped_table_matches_full_table_slices() {
        let mut full = GammaTable::new(3);
        let mut capped = GammaTable::with_degree_cap(3, Some(2));
        for n in 1..=50 {
            let f = full.gamma(n).clone();
            let c = capped.gamma(n).clone();
            for k in 0..=2 {
                assert_eq!(f.coeff(k), c.coeff(k), "slice k = {k} of gamma_{n}");
            }
            assert!(c.degree().unwrap_or(0) <= 2);
        }
    }

    #[test]
    fn closed_form_a2_examples() {
        // n = 3: -(1/m) c^2
        for m in 3..=10u32 {
            assert_eq!(
                coeff_a2_closed(3, m).unwrap(),
                RationalMonomial::new(ratio(-1, m as i64), 2, 0)
            );
        }
        // n = 8: -(6/m) c^2 lambda^5
        assert_eq!(
            coeff_a2_closed(8, 5).unwrap(),
            RationalMonomial::new(ratio(-6, 5), 2, 5)
        );
        // n = 4, m = 3: -(2/3) c^2 lambda
        assert_eq!(
            coeff_a2_closed(4, 3).unwrap(),
            RationalMonomial::new(ratio(-2, 3), 2, 1)
        );
        assert_eq!(
            coeff_a2_closed(2, 3),
            Err(CoeffError::IndexTooSmall { n: 2, min: 3 })
        );
    }

    #[test]
    fn closed_form_a4_examples() {
        // n = 5: 3/(m(m+2)) c^4
        assert_eq!(
            coeff_a4_closed(5, 3).unwrap(),
            RationalMonomial::new(ratio(3, 15), 4, 0)
        );
        // n = 7: (12m+6)/(m^2(m+2)) c^4 lambda^2
        for m in [3i64, 6] {
            assert_eq!(
                coeff_a4_closed(7, m as u32).unwrap(),
                RationalMonomial::new(ratio(12 * m + 6, m * m * (m + 2)), 4, 2)
            );
        }
        // n = 6: (7m+2)/(m^2(m+2)) c^4 lambda
        assert_eq!(
            coeff_a4_closed(6, 4).unwrap(),
            RationalMonomial::new(ratio(30, 96), 4, 1)
        );
        assert_eq!(
            coeff_a4_closed(4, 3),
            Err(CoeffError::IndexTooSmall { n: 4, min: 5 })
        );
    }

    #[test]
    fn verification_passes_on_the_small_table() {
        let report = verify_closed_forms(8, &[3]);
        assert!(report.all_match());
        assert!(report.first_mismatch().is_none());
        // K2 rows for n in 3..=8 plus K4 rows for n in 5..=8.
        assert_eq!(report.rows.len(), 6 + 4);
    }

    #[test]
    fn verification_below_k4_domain_checks_only_k2() {
        let report = verify_closed_forms(4, &[3]);
        assert!(report.all_match());
        assert!(report.rows.iter().all(|r| r.k == 1));
        assert_eq!(report.rows.len(), 2);
    }

    #[test]
    fn verification_medium_sweep() {
        let report = verify_closed_forms(80, &[3, 4, 5]);
        assert!(report.all_match());
    }
}
