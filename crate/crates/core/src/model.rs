//! Market model: parameters, jump-size distributions, and the derived
//! coefficients that all closed-form strategies are built from.
//!
//! Given excess return `mu_bar = mu - r`, net premium loading
//! `q = p - alpha - lambda E[gamma]`, liability variance rate
//! `b = beta^2 + lambda E[gamma^2]`, and residual (unhedgeable) variance
//! rate `D = beta^2 (1 - rho^2) + lambda E[gamma^2]`, the optimal-control
//! coefficients are
//!
//! ```text
//! kappa1 = (mu_bar b + rho beta sigma q) / (D sigma^2)     (investment)
//! kappa2 = (rho beta mu_bar + q sigma) / (D sigma)         (retention)
//! kappa3 = mu_bar kappa1 + q kappa2                        (drift gain)
//! kappa4 = q^2 / b                                         (no-investment gain)
//! ```
//!
//! `kappa3` admits the equivalent decomposition
//! `mu_bar^2 / sigma^2 + (q + rho beta mu_bar / sigma)^2 / D`, which shows
//! it is positive whenever the market offers any excess return or any net
//! loading, and splits it into a pure-investment part and a residual
//! insurance part. Both forms must agree to near machine precision; the
//! verification suite checks this on randomized scenarios.

use rand::Rng;
use rand_distr::Distribution;

use crate::{Error, Result};

/// Residual variance rates below this are treated as degenerate: the
/// control coefficients divide by `D`, and a vanishing `D` means the
/// liability risk is perfectly hedgeable, which the model excludes.
pub const DEGENERACY_THRESHOLD: f64 = 1e-14;

// ============================================================================
// Parameters
// ============================================================================

/// Market and insurance parameters.
///
/// `Default` is the baseline calibration used throughout the test suite
/// and the documentation examples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    /// Risk-free rate. Any sign.
    pub r: f64,
    /// Risky asset drift. Any sign; `mu <= r` triggers a warning.
    pub mu: f64,
    /// Risky asset volatility. Must be positive.
    pub sigma: f64,
    /// Insurer's expense/reinsurance cost rate per unit of retention.
    pub alpha: f64,
    /// Diffusion volatility of the claims process per unit of retention.
    /// Must be nonnegative.
    pub beta: f64,
    /// Correlation between asset returns and claim diffusion, in [-1, 1].
    pub rho: f64,
    /// Claim arrival intensity. Must be nonnegative.
    pub lambda: f64,
    /// Premium income rate per unit of retention.
    pub p: f64,
    /// Planning horizon `T`. Must be positive.
    pub horizon: f64,
}

impl Default for MarketParams {
    fn default() -> Self {
        Self {
            r: 0.01,
            mu: 0.05,
            sigma: 0.25,
            alpha: 0.08,
            beta: 0.1,
            rho: 0.0,
            lambda: 0.1,
            p: 0.15,
            horizon: 1.0,
        }
    }
}

impl MarketParams {
    /// Checks every field against its domain. Returns the first violation.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("r", self.r),
            ("mu", self.mu),
            ("sigma", self.sigma),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("rho", self.rho),
            ("lambda", self.lambda),
            ("p", self.p),
            ("T", self.horizon),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::Domain(format!("{name} must be finite, got {value}")));
            }
        }
        if self.sigma <= 0.0 {
            return Err(Error::Domain(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        if self.beta < 0.0 {
            return Err(Error::Domain(format!(
                "beta must be nonnegative, got {}",
                self.beta
            )));
        }
        if !(-1.0..=1.0).contains(&self.rho) {
            return Err(Error::Domain(format!(
                "rho must lie in [-1, 1], got {}",
                self.rho
            )));
        }
        if self.lambda < 0.0 {
            return Err(Error::Domain(format!(
                "lambda must be nonnegative, got {}",
                self.lambda
            )));
        }
        if self.horizon <= 0.0 {
            return Err(Error::Domain(format!(
                "T must be positive, got {}",
                self.horizon
            )));
        }
        Ok(())
    }
}

/// Mean-variance preference: terminal objective `E[X(T)] - (theta/2) Var[X(T)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preference {
    /// Risk-aversion weight on terminal variance. Must be positive.
    pub theta: f64,
}

impl Preference {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() || theta <= 0.0 {
            return Err(Error::Domain(format!(
                "theta must be positive, got {theta}"
            )));
        }
        Ok(Self { theta })
    }
}

// ============================================================================
// Jump-size distributions
// ============================================================================

/// Distribution of the per-claim severity factor `gamma(z) > 0`.
///
/// Only the first two moments enter the closed forms; the full
/// distribution matters for simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpDistribution {
    /// Every claim has the same severity.
    Constant { gamma: f64 },
    /// Exponential severities with the given mean.
    Exponential { mean: f64 },
    /// Lognormal severities: `exp(mu_log + sigma_log Z)`, `Z` standard normal.
    Lognormal { mu_log: f64, sigma_log: f64 },
}

impl JumpDistribution {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Constant { gamma } => {
                if !gamma.is_finite() || gamma <= 0.0 {
                    return Err(Error::Domain(format!(
                        "constant jump size must be positive, got {gamma}"
                    )));
                }
            }
            Self::Exponential { mean } => {
                if !mean.is_finite() || mean <= 0.0 {
                    return Err(Error::Domain(format!(
                        "exponential jump mean must be positive, got {mean}"
                    )));
                }
            }
            Self::Lognormal { mu_log, sigma_log } => {
                if !mu_log.is_finite() {
                    return Err(Error::Domain(format!(
                        "lognormal jump location must be finite, got {mu_log}"
                    )));
                }
                if !sigma_log.is_finite() || sigma_log <= 0.0 {
                    return Err(Error::Domain(format!(
                        "lognormal jump log-volatility must be positive, got \
                         {sigma_log} (use a constant jump for zero dispersion)"
                    )));
                }
            }
        }
        Ok(())
    }

    /// First two raw moments `(E[gamma], E[gamma^2])`.
    pub fn moments(&self) -> (f64, f64) {
        match *self {
            Self::Constant { gamma } => (gamma, gamma * gamma),
            // E[gamma^k] = k! mean^k for the exponential.
            Self::Exponential { mean } => (mean, 2.0 * mean * mean),
            Self::Lognormal { mu_log, sigma_log } => {
                let v = sigma_log * sigma_log;
                ((mu_log + 0.5 * v).exp(), (2.0 * mu_log + 2.0 * v).exp())
            }
        }
    }

    /// Draws one claim severity.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Constant { gamma } => gamma,
            Self::Exponential { mean } => {
                rand_distr::Exp::new(1.0 / mean).expect("validated rate").sample(rng)
            }
            Self::Lognormal { mu_log, sigma_log } => rand_distr::LogNormal::new(mu_log, sigma_log)
                .expect("validated parameters")
                .sample(rng),
        }
    }
}

/// First two jump-severity moments, after validating the distribution.
pub fn jump_moments(jump: &JumpDistribution) -> Result<(f64, f64)> {
    jump.validate()?;
    Ok(jump.moments())
}

// ============================================================================
// Derived coefficients
// ============================================================================

/// Everything the closed forms need, precomputed once per scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCoefficients {
    /// Excess return `mu - r`.
    pub mu_bar: f64,
    /// Premium margin over expenses, `p - alpha`.
    pub p_bar: f64,
    /// Mean claim severity `E[gamma]`.
    pub gamma_bar1: f64,
    /// Second raw moment `E[gamma^2]`.
    pub gamma_bar2: f64,
    /// Net loading `q = p_bar - lambda gamma_bar1`: premium income per unit
    /// of retention net of the compensated claim drift.
    pub net_loading: f64,
    /// `b = beta^2 + lambda gamma_bar2`: total variance rate of the
    /// liability per unit of retention.
    pub liability_var_rate: f64,
    /// `D = beta^2 (1 - rho^2) + lambda gamma_bar2`: the part of the
    /// liability variance that cannot be hedged with the asset.
    pub residual_var_rate: f64,
    /// Investment coefficient; optimal `pi` is proportional to it.
    pub kappa1: f64,
    /// Retention coefficient; optimal `L` is proportional to it.
    pub kappa2: f64,
    /// Squared market price of total risk: controls the drift gain of the
    /// optimal surplus and the slope of the efficient frontier.
    pub kappa3: f64,
    /// Drift gain when investment is forbidden, `q^2 / b`. Always at most
    /// `kappa3`, with equality only in degenerate corners.
    pub kappa4: f64,
}

impl DerivedCoefficients {
    /// `kappa3` recomputed through its decomposition
    /// `mu_bar^2/sigma^2 + (q + rho beta mu_bar / sigma)^2 / D`.
    /// Agreement with the stored value is a consistency check on the
    /// whole coefficient block.
    pub fn kappa3_decomposed(&self, params: &MarketParams) -> f64 {
        let merton = self.mu_bar / params.sigma;
        let tilted = self.net_loading + params.rho * params.beta * merton;
        merton * merton + tilted * tilted / self.residual_var_rate
    }
}

/// Validates inputs and computes every derived coefficient.
pub fn derive(params: &MarketParams, jump: &JumpDistribution) -> Result<DerivedCoefficients> {
    params.validate()?;
    let (gamma_bar1, gamma_bar2) = jump_moments(jump)?;

    let mu_bar = params.mu - params.r;
    let p_bar = params.p - params.alpha;
    let net_loading = p_bar - params.lambda * gamma_bar1;
    let liability_var_rate = params.beta * params.beta + params.lambda * gamma_bar2;
    let residual_var_rate =
        params.beta * params.beta * (1.0 - params.rho * params.rho) + params.lambda * gamma_bar2;

    if residual_var_rate < DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateModel {
            denominator: residual_var_rate,
        });
    }

    let sigma = params.sigma;
    let cross = params.rho * params.beta;
    let kappa1 =
        (mu_bar * liability_var_rate + cross * sigma * net_loading) / (residual_var_rate * sigma * sigma);
    let kappa2 = (cross * mu_bar + net_loading * sigma) / (residual_var_rate * sigma);
    let kappa3 = mu_bar * kappa1 + net_loading * kappa2;
    // b >= D > 0 here, so the ratio is well defined.
    let kappa4 = net_loading * net_loading / liability_var_rate;

    Ok(DerivedCoefficients {
        mu_bar,
        p_bar,
        gamma_bar1,
        gamma_bar2,
        net_loading,
        liability_var_rate,
        residual_var_rate,
        kappa1,
        kappa2,
        kappa3,
        kappa4,
    })
}

// ============================================================================
// Scenario
// ============================================================================

/// Economically suspicious but mathematically valid parameter corners.
/// These are surfaced rather than rejected: the closed forms remain
/// correct, only their interpretation changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Warning {
    /// `mu <= r`: the risky asset earns no excess return, so any optimal
    /// investment is purely a hedge against claim risk.
    NonpositiveExcessReturn,
    /// Net loading `q <= 0`: premiums do not cover the compensated claim
    /// drift. With no investment the surplus then drifts down and ruin is
    /// certain in the long run.
    NonpositiveNetLoading,
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NonpositiveExcessReturn => write!(
                f,
                "mu <= r: no excess return; investment acts only as a hedge"
            ),
            Self::NonpositiveNetLoading => write!(
                f,
                "net loading q <= 0: premiums do not cover expected claims; \
                 without investment income, eventual ruin is certain"
            ),
        }
    }
}

/// A validated model: parameters plus precomputed coefficients.
///
/// Construction is the single validation gate; every downstream function
/// takes `&Scenario` and may assume the domain checks have passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub market: MarketParams,
    pub jump: JumpDistribution,
    pub coef: DerivedCoefficients,
    pub warnings: Vec<Warning>,
}

impl Scenario {
    pub fn new(market: MarketParams, jump: JumpDistribution) -> Result<Self> {
        let coef = derive(&market, &jump)?;
        let mut warnings = Vec::new();
        if coef.mu_bar <= 0.0 {
            warnings.push(Warning::NonpositiveExcessReturn);
        }
        if coef.net_loading <= 0.0 {
            warnings.push(Warning::NonpositiveNetLoading);
        }
        Ok(Self {
            market,
            jump,
            coef,
            warnings,
        })
    }

    /// The baseline calibration: `MarketParams::default()` with a
    /// constant claim severity of 0.3.
    pub fn baseline() -> Self {
        Self::new(
            MarketParams::default(),
            JumpDistribution::Constant { gamma: 0.3 },
        )
        .expect("baseline calibration is valid")
    }

    /// Whether this scenario matches the baseline calibration except for
    /// the correlation, which the figure reproductions sweep over.
    pub fn is_baseline_except_rho(&self) -> bool {
        let base = MarketParams::default();
        let m = &self.market;
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12;
        close(m.r, base.r)
            && close(m.mu, base.mu)
            && close(m.sigma, base.sigma)
            && close(m.alpha, base.alpha)
            && close(m.beta, base.beta)
            && close(m.lambda, base.lambda)
            && close(m.p, base.p)
            && close(m.horizon, base.horizon)
            && matches!(self.jump, JumpDistribution::Constant { gamma } if close(gamma, 0.3))
    }
}

// ============================================================================
// Tests
// ============================================================================
