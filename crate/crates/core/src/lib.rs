//! Exact solvers for reforming an allocation of indivisible goods into an
//! EF1 allocation by pairwise exchanges.
//!
//! Everything is generic over the utility scalar ([`Utility`]); the aliases
//! below fix it to `u64` for the common case.

pub mod error;
pub mod generators;
pub mod model;
pub mod optimal;
pub mod oracle;
pub mod reformability;
pub mod scalar;
pub mod weak_ef1;
pub mod worst_case;

pub use error::{Error, Result, Side};
pub use model::{
    apply_exchange, is_balanced, is_ef1, is_ef1_pair, is_weak_ef1, round_robin, size_vector,
    Allocation, ExchangeStep, ExchangeTrace, SizeVector, UtilityClass,
};
pub use scalar::Utility;

/// Default utility scalar.
pub type Util = u64;
/// Instance over the default scalar.
pub type Instance = model::Instance<Util>;
/// Exact rational used by the bound formulas.
pub type Rational = num_rational::Ratio<i64>;
