//! Moment machinery for the m-dimensional symmetric Markov random flight.
//!
//! The model: a particle moves in `R^m` (`m >= 3`) at constant speed `c`,
//! redrawing its direction uniformly on the unit sphere at the epochs of a
//! Poisson process with intensity `lambda`. This crate provides
//!
//! - an exact-rational engine for the polynomials `gamma_n` that appear in
//!   the time-series expansion of the characteristic function, together with
//!   closed forms for their coefficients at `||alpha||^2` and `||alpha||^4`
//!   and machine verification of those closed forms ([`gamma`]);
//! - closed-form 1- and 2-marginal second moment functions, series oracles
//!   that re-derive them from the characteristic function, the diffusion
//!   (Kac) scaling limit, and the auxiliary series identities ([`moments`]);
//! - numerical evaluation of the characteristic function itself ([`charfn`]);
//! - a deterministic, parallel Monte Carlo sampler of the flight for
//!   statistical validation of the analytic formulas ([`simulator`]).

pub mod charfn;
pub mod gamma;
pub mod moments;
pub mod params;
pub mod rational;
pub mod series;
pub mod simulator;

pub use charfn::{char_fn, mixed_derivative_constant, CharFnQuery, DerivativePattern};
pub use gamma::{
    coeff_a2_closed, coeff_a4_closed, theta, verify_closed_forms, CoeffError, GammaPolynomial,
    GammaTable, Theta, ThetaCoefficient, VerificationReport, VerificationRow,
};
pub use moments::{
    analytic_moment, kac_limit_value, lemma_a1_rhs, lemma_a2_rhs, lemma_lhs_partial,
    mu_1marginal, mu_1marginal_series, mu_2marginal, mu_2marginal_series, KacScaling, LemmaId,
    MomentQuery,
};
pub use params::{FlightParams, IndexKind, MultiIndex, ParamError};
pub use rational::{pochhammer, RationalMonomial};
pub use series::{SeriesControl, SeriesError, TruncationPolicy};
pub use simulator::{
    estimate_moment, sample_position, singular_mass_estimate, MomentEstimate, SimConfig,
    SimError,
};
