//! Zero-sum Bayesian games in which a rate-limited helper describes the
//! game state to one player.
//!
//! - [`game`]: games, information structures, exact values and best-response payoffs.
//! - [`info`]: entropy, mutual information and Wyner common information.
//! - [`rate_value`]: achievable rate-value tradeoffs for the helper's coding schemes.
//! - [`sim`]: Monte Carlo block-coding matches against decoding adversaries.

pub mod dist;
pub mod error;
pub mod game;
pub mod info;
pub mod lp;
pub mod rate_value;
pub mod sim;

pub use dist::ConditionalDistribution;
pub use error::{Error, Result};
pub use game::{Game, GameValueResult, SignalFunction};
pub use info::{CommonInfoResult, JointDistribution, WynerSearch};
pub use rate_value::{LayeredPayoff, LayeredScheme, RateValuePoint, Scheme, SchemeStats};
