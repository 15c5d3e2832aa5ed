//! Mean-variance investment and per-claim retention strategies for an
//! insurer in a jump-diffusion market.
//!
//! The insurer holds surplus `X(s)`, invests an amount `pi(s)` in a risky
//! asset, and retains a fraction of its liability exposure through the
//! per-unit retention level `L(s)`:
//!
//! ```text
//! dX = [r X + (mu - r) pi + (p - alpha) L] ds
//!      + (sigma pi - rho beta L) dW1
//!      - beta sqrt(1 - rho^2) L dW2
//!      - L * integral gamma(z) N(ds, dz)
//! ```
//!
//! `W1` drives the asset, `W1/W2` together drive the diffusion part of the
//! claims process with correlation `rho` between asset and claims, and `N`
//! is a Poisson random measure with intensity `lambda dF(z)` producing
//! claim jumps of size `L * gamma(z)`.
//!
//! The objective is the mean-variance criterion over terminal surplus,
//!
//! ```text
//! J = E[X(T)] - (theta / 2) Var[X(T)],
//! ```
//!
//! which is time-inconsistent. This crate implements the closed-form
//! solutions of both standard resolutions:
//!
//! * the **time-consistent** (game-theoretic) strategy, obtained from an
//!   extended HJB system with a forward expectation process, whose optimal
//!   controls are deterministic exponentials in time; and
//! * the **precommitment** strategy, obtained by embedding the
//!   mean-variance problem into a quadratic-loss family, whose optimal
//!   controls are affine in current wealth.
//!
//! Everything the closed forms claim is cross-checked three independent
//! ways: Monte Carlo simulation of the wealth SDE ([`simulate`]), numerical
//! integration of the value-function coefficient ODEs plus pointwise HJB
//! residuals ([`verify`]), and finite-difference sensitivity sign checks
//! against comparative statics ([`verify::sensitivity_signs`]).
//!
//! # Quick start
//!
//! ```
//! use mvjump::{MarketParams, JumpDistribution, Scenario};
//! use mvjump::closed_form::{Strategy, StrategyKind, StrategySpec};
//!
//! let scenario = Scenario::new(
//!     MarketParams::default(),
//!     JumpDistribution::Exponential { mean: 0.2 },
//! ).unwrap();
//!
//! // Time-consistent controls at the start of a one-year horizon.
//! let strategy = Strategy::new(&scenario, StrategySpec {
//!     kind: StrategyKind::TimeConsistent { theta: 2.0 },
//!     t0: 0.0,
//!     x0: 1.0,
//! }).unwrap();
//! let (pi, l) = strategy.control(0.0, 1.0).unwrap();
//! assert!(pi > 0.0 && l > 0.0);
//! ```

pub mod closed_form;
pub mod config;
pub mod model;
pub mod simulate;
pub mod verify;

pub use model::{
    DerivedCoefficients, JumpDistribution, MarketParams, Scenario, Warning,
};

/// Errors across the crate. Domain violations and degenerate models are
/// kept distinct from config-file problems so callers can map them to
/// different exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter or argument is outside its mathematical domain.
    #[error("{0}")]
    Domain(String),

    /// The residual variance rate `beta^2 (1 - rho^2) + lambda E[gamma^2]`
    /// vanishes, so the optimal-control coefficients are undefined.
    #[error(
        "degenerate model: residual variance rate {denominator:.3e} is \
         below 1e-14, optimal-control coefficients are undefined \
         (requires beta > 0 with |rho| < 1, or a nontrivial jump part)"
    )]
    DegenerateModel { denominator: f64 },

    /// The requested operation is not defined for the given strategy kind.
    #[error("{0}")]
    Unsupported(String),

    /// Too few Monte Carlo samples for the requested estimator.
    #[error("need at least {need} samples, got {got}")]
    InsufficientSamples { got: usize, need: usize },

    /// A config file failed to parse; `line` is 1-based.
    #[error("config line {line}: {msg}")]
    ConfigLine { line: usize, msg: String },

    /// A config file is structurally invalid (e.g. a required key missing).
    #[error("config: {msg}")]
    Config { msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
