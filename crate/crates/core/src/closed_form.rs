//! Closed-form optimal strategies and their moments.
//!
//! Throughout, `tc_` marks the time-consistent (game-theoretic) solution
//! and `pre_` the precommitment solution; `tau = T - t` is time to the
//! horizon. The two families look like this:
//!
//! ```text
//! time-consistent:  pi*(s) = (kappa1 / theta) e^{-r (T - s)}
//!                   L*(s)  = (kappa2 / theta) e^{-r (T - s)}
//!
//! precommitment:    pi(s)  = -kappa1 (X(s) - xi e^{-r (T - s)})
//!                   L(s)   = -kappa2 (X(s) - xi e^{-r (T - s)})
//! ```
//!
//! Time-consistent controls are deterministic functions of time;
//! precommitment controls are affine in current wealth and steer it toward
//! the discounted target level `xi`. The precommitment problem is solved
//! by embedding: minimizing the quadratic loss `E[(X(T) - xi)^2]` and then
//! choosing `xi` to hit a terminal mean. Setting the mean to its
//! preference-optimal level `m*(theta)` recovers the mean-variance
//! precommitment optimum.
//!
//! Both families produce the same constant retention-to-investment ratio
//! `kappa2 / kappa1` (when `kappa1 != 0`), so the difference between them
//! is purely in how aggressively the common risky bundle is scaled over
//! time and wealth.

use crate::model::{Preference, Scenario};
use crate::{Error, Result};

/// First two central moments of terminal (or interim) surplus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

// ============================================================================
// Strategy objects
// ============================================================================

/// Which closed-form policy to follow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StrategyKind {
    /// Equilibrium strategy of the mean-variance game for weight `theta`.
    TimeConsistent { theta: f64 },
    /// Precommitment optimum for weight `theta`.
    Precommit { theta: f64 },
    /// Precommitment strategy achieving `E[X(T)] = mean_target`.
    PrecommitTarget { mean_target: f64 },
    /// Time-consistent-style deterministic strategy achieving
    /// `E[X(T)] = mean_target`.
    TcTarget { mean_target: f64 },
    /// Minimizer of the quadratic loss `E[(X(T) - xi)^2]`.
    AuxQuadratic { xi: f64 },
    /// Time-consistent strategy constrained to `pi = 0` (insurance book
    /// only).
    NoInvestment { theta: f64 },
    /// Time-consistent strategy constrained to `L = 0` (pure investment,
    /// Merton-style).
    NoInsurance { theta: f64 },
    /// Constant controls, mainly for diagnostics and stress tests.
    Fixed { pi: f64, l: f64 },
}

/// A strategy request: what to follow, from when, from what wealth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategySpec {
    pub kind: StrategyKind,
    /// Start time, in `[0, T)`.
    pub t0: f64,
    /// Wealth at `t0`.
    pub x0: f64,
}

/// Normalized control rule. Every supported kind reduces to one of these,
/// which keeps the simulation loop free of per-kind branches.
#[derive(Debug, Clone, Copy, PartialEq)]
enum ControlRule {
    /// `(pi, L)(s) = (pi_scale, l_scale) e^{-r (T - s)}`.
    DiscountedExponential { pi_scale: f64, l_scale: f64 },
    /// `(pi, L)(s) = -(kappa1, kappa2) (x - xi e^{-r (T - s)})`.
    TargetReverting { xi: f64 },
    Fixed { pi: f64, l: f64 },
}

/// A validated, ready-to-evaluate strategy bound to one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    spec: StrategySpec,
    rule: ControlRule,
    r: f64,
    horizon: f64,
    kappa1: f64,
    kappa2: f64,
    kappa3: f64,
    /// Multiplier on both controls; 1 except for sensitivity probes.
    gain_scale: f64,
}

impl Strategy {
    pub fn new(sc: &Scenario, spec: StrategySpec) -> Result<Self> {
        let t_max = sc.market.horizon;
        if !spec.t0.is_finite() || spec.t0 < 0.0 || spec.t0 >= t_max {
            return Err(Error::Domain(format!(
                "strategy start time must lie in [0, T), got t0={} with T={t_max}",
                spec.t0
            )));
        }
        if !spec.x0.is_finite() {
            return Err(Error::Domain(format!(
                "initial wealth must be finite, got {}",
                spec.x0
            )));
        }

        let c = &sc.coef;
        let m = &sc.market;
        let tau0 = t_max - spec.t0;
        let rule = match spec.kind {
            StrategyKind::TimeConsistent { theta } => {
                let theta = Preference::new(theta)?.theta;
                ControlRule::DiscountedExponential {
                    pi_scale: c.kappa1 / theta,
                    l_scale: c.kappa2 / theta,
                }
            }
            StrategyKind::NoInvestment { theta } => {
                let theta = Preference::new(theta)?.theta;
                ControlRule::DiscountedExponential {
                    pi_scale: 0.0,
                    l_scale: c.net_loading / (c.liability_var_rate * theta),
                }
            }
            StrategyKind::NoInsurance { theta } => {
                let theta = Preference::new(theta)?.theta;
                ControlRule::DiscountedExponential {
                    pi_scale: c.mu_bar / (theta * m.sigma * m.sigma),
                    l_scale: 0.0,
                }
            }
            StrategyKind::TcTarget { mean_target } => {
                check_reachable_mean(sc, mean_target, spec.t0, spec.x0)?;
                let gap = mean_target - spec.x0 * (m.r * tau0).exp();
                let scale = gap / (c.kappa3 * tau0);
                ControlRule::DiscountedExponential {
                    pi_scale: c.kappa1 * scale,
                    l_scale: c.kappa2 * scale,
                }
            }
            StrategyKind::Precommit { theta } => {
                let theta = Preference::new(theta)?.theta;
                // Composed form of the optimal target level; unlike the
                // generic mean-target formula it stays finite as kappa3 -> 0.
                let xi = spec.x0 * (m.r * tau0).exp() + (c.kappa3 * tau0).exp() / theta;
                ControlRule::TargetReverting { xi }
            }
            StrategyKind::PrecommitTarget { mean_target } => {
                let xi = aux_target_for_mean(sc, mean_target, spec.t0, spec.x0)?;
                ControlRule::TargetReverting { xi }
            }
            StrategyKind::AuxQuadratic { xi } => {
                if !xi.is_finite() {
                    return Err(Error::Domain(format!(
                        "quadratic-loss target must be finite, got {xi}"
                    )));
                }
                ControlRule::TargetReverting { xi }
            }
            StrategyKind::Fixed { pi, l } => {
                if !pi.is_finite() || !l.is_finite() {
                    return Err(Error::Domain(format!(
                        "fixed controls must be finite, got pi={pi}, L={l}"
                    )));
                }
                ControlRule::Fixed { pi, l }
            }
        };

        Ok(Self {
            spec,
            rule,
            r: m.r,
            horizon: t_max,
            kappa1: c.kappa1,
            kappa2: c.kappa2,
            kappa3: c.kappa3,
            gain_scale: 1.0,
        })
    }

    /// The same policy with both controls multiplied by `factor`, for
    /// probing how the objective degrades away from an optimum. Scaled
    /// wealth-affine strategies lose their closed-form terminal moments.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !factor.is_finite() || factor <= 0.0 {
            return Err(Error::Domain(format!(
                "control scale must be positive and finite, got {factor}"
            )));
        }
        let mut scaled = self.clone();
        scaled.gain_scale *= factor;
        Ok(scaled)
    }

    pub fn spec(&self) -> &StrategySpec {
        &self.spec
    }

    pub fn kind(&self) -> &StrategyKind {
        &self.spec.kind
    }

    /// True when the controls depend on current wealth.
    pub fn is_wealth_affine(&self) -> bool {
        matches!(self.rule, ControlRule::TargetReverting { .. })
    }

    /// The discounted level wealth-affine controls steer toward, if any.
    pub fn target_locus(&self) -> Option<f64> {
        match self.rule {
            ControlRule::TargetReverting { xi } => Some(xi),
            _ => None,
        }
    }

    /// Controls at time `s` with current wealth `x`.
    pub fn control(&self, s: f64, x: f64) -> Result<(f64, f64)> {
        let slack = 1e-9 * self.horizon.max(1.0);
        if !s.is_finite() || s < self.spec.t0 - slack || s > self.horizon + slack {
            return Err(Error::Domain(format!(
                "evaluation time {s} outside the strategy window [{}, {}]",
                self.spec.t0, self.horizon
            )));
        }
        if !x.is_finite() {
            return Err(Error::Domain(format!("wealth must be finite, got {x}")));
        }
        Ok(self.control_unchecked(s, x))
    }

    /// Hot-path variant: the simulation grid is validated once up front.
    pub(crate) fn control_unchecked(&self, s: f64, x: f64) -> (f64, f64) {
        let (pi, l) = match self.rule {
            ControlRule::DiscountedExponential { pi_scale, l_scale } => {
                let disc = (-self.r * (self.horizon - s)).exp();
                (pi_scale * disc, l_scale * disc)
            }
            ControlRule::TargetReverting { xi } => {
                let gap = x - xi * (-self.r * (self.horizon - s)).exp();
                (-self.kappa1 * gap, -self.kappa2 * gap)
            }
            ControlRule::Fixed { pi, l } => (pi, l),
        };
        (self.gain_scale * pi, self.gain_scale * l)
    }

    /// Deterministic control path, available only when the controls do
    /// not depend on wealth.
    pub fn expected_control(&self, s: f64) -> Option<(f64, f64)> {
        match self.rule {
            ControlRule::TargetReverting { .. } => None,
            _ => Some(self.control_unchecked(s, f64::NAN)),
        }
    }
}

// ============================================================================
// Time-consistent solution
// ============================================================================

/// Equilibrium controls `(pi*, L*)` at time `s`.
pub fn tc_control(sc: &Scenario, theta: f64, s: f64) -> Result<(f64, f64)> {
    let theta = Preference::new(theta)?.theta;
    check_time(sc, s, "evaluation time")?;
    let disc = (-sc.market.r * (sc.market.horizon - s)).exp();
    Ok((
        sc.coef.kappa1 / theta * disc,
        sc.coef.kappa2 / theta * disc,
    ))
}

/// Equilibrium value function
/// `-(theta/2) e^{2 r tau} (x - y)^2 + e^{r tau} x + kappa3 tau / (2 theta)`,
/// where `y` is the running conditional expectation of terminal wealth's
/// forward process. On the equilibrium path `y = x`.
pub fn tc_value(sc: &Scenario, theta: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    let theta = Preference::new(theta)?.theta;
    check_time(sc, t, "evaluation time")?;
    check_finite(x, "wealth")?;
    check_finite(y, "expectation state")?;
    let tau = sc.market.horizon - t;
    let growth = (sc.market.r * tau).exp();
    let d = x - y;
    Ok(-0.5 * theta * growth * growth * d * d + growth * x + 0.5 * sc.coef.kappa3 * tau / theta)
}

/// Mean and variance of equilibrium surplus at time `s`, started from
/// `(t, x)`:
///
/// ```text
/// E[X*(s)]   = x e^{r (s - t)} + (kappa3 / theta) e^{-r (T - s)} (s - t)
/// Var[X*(s)] = (kappa3 / theta^2) e^{-2 r (T - s)} (s - t)
/// ```
pub fn tc_moments(sc: &Scenario, theta: f64, t: f64, x: f64, s: f64) -> Result<Moments> {
    let theta = Preference::new(theta)?.theta;
    check_window(sc, t, s)?;
    check_finite(x, "wealth")?;
    let r = sc.market.r;
    let disc = (-r * (sc.market.horizon - s)).exp();
    let elapsed = s - t;
    Ok(Moments {
        mean: x * (r * elapsed).exp() + sc.coef.kappa3 / theta * disc * elapsed,
        variance: sc.coef.kappa3 / (theta * theta) * disc * disc * elapsed,
    })
}

/// Running mean-variance trade-off `E[X*(s)] - (theta/2) Var[X*(s)]`.
/// At `s = T` this equals `tc_value(t, x, x)`.
pub fn tc_tradeoff(sc: &Scenario, theta: f64, t: f64, x: f64, s: f64) -> Result<f64> {
    let m = tc_moments(sc, theta, t, x, s)?;
    Ok(m.mean - 0.5 * theta * m.variance)
}

/// Variance needed on the time-consistent frontier to reach `mean` at
/// time `s`: `(mean - x e^{r (s - t)})^2 / (kappa3 (s - t))`.
pub fn tc_frontier_variance(sc: &Scenario, mean: f64, t: f64, x: f64, s: f64) -> Result<f64> {
    check_window(sc, t, s)?;
    check_finite(x, "wealth")?;
    check_finite(mean, "target mean")?;
    if s <= t {
        return Err(Error::Domain(format!(
            "frontier requires s > t, got s={s}, t={t}"
        )));
    }
    let benchmark = x * (sc.market.r * (s - t)).exp();
    let gap = mean - benchmark;
    if gap < 0.0 {
        return Err(Error::Domain(format!(
            "target mean {mean} lies below the risk-free benchmark {benchmark}"
        )));
    }
    Ok(gap * gap / (sc.coef.kappa3 * (s - t)))
}

/// Slope of the security market line at elapsed time `s - t`:
/// `sqrt(kappa3 (s - t))` in mean/standard-deviation coordinates.
pub fn sml_slope(sc: &Scenario, t: f64, s: f64) -> Result<f64> {
    check_window(sc, t, s)?;
    Ok((sc.coef.kappa3 * (s - t)).sqrt())
}

// ============================================================================
// Precommitment solution
// ============================================================================

/// Quadratic-loss target level `xi` whose optimal strategy delivers
/// `E[X(T)] = mean`:
///
/// ```text
/// xi = (mean - x e^{(r - kappa3) tau}) / (1 - e^{-kappa3 tau})
/// ```
pub fn aux_target_for_mean(sc: &Scenario, mean: f64, t: f64, x: f64) -> Result<f64> {
    check_time(sc, t, "start time")?;
    check_finite(x, "wealth")?;
    check_finite(mean, "target mean")?;
    let r = sc.market.r;
    let tau = sc.market.horizon - t;
    let shrink = sc.coef.kappa3 * tau;
    if shrink < 1e-12 {
        return Err(Error::Domain(
            "no excess return and no net loading: only the risk-free mean is attainable"
                .to_string(),
        ));
    }
    let benchmark = x * (r * tau).exp();
    if mean <= benchmark {
        return Err(Error::Domain(format!(
            "target mean {mean} must exceed the risk-free benchmark {benchmark}"
        )));
    }
    Ok((mean - x * ((r - sc.coef.kappa3) * tau).exp()) / (1.0 - (-shrink).exp()))
}

/// The terminal mean chosen by a precommitted mean-variance optimizer:
/// `m*(theta) = x e^{r tau} + (e^{kappa3 tau} - 1) / theta`.
pub fn optimal_mean(sc: &Scenario, theta: f64, t: f64, x: f64) -> Result<f64> {
    let theta = Preference::new(theta)?.theta;
    check_time(sc, t, "start time")?;
    check_finite(x, "wealth")?;
    let tau = sc.market.horizon - t;
    Ok(x * (sc.market.r * tau).exp() + ((sc.coef.kappa3 * tau).exp() - 1.0) / theta)
}

/// Precommitment controls at `(s, x_s)` for the problem started at `(t, x)`.
pub fn pre_control(
    sc: &Scenario,
    theta: f64,
    t: f64,
    x: f64,
    s: f64,
    x_s: f64,
) -> Result<(f64, f64)> {
    let strategy = Strategy::new(
        sc,
        StrategySpec {
            kind: StrategyKind::Precommit { theta },
            t0: t,
            x0: x,
        },
    )?;
    strategy.control(s, x_s)
}

/// Terminal moments of the precommitment optimum:
/// mean `m*(theta)`, variance `(e^{kappa3 tau} - 1) / theta^2`.
pub fn pre_moments(sc: &Scenario, theta: f64, t: f64, x: f64) -> Result<Moments> {
    let mean = optimal_mean(sc, theta, t, x)?;
    let tau = sc.market.horizon - t;
    Ok(Moments {
        mean,
        variance: ((sc.coef.kappa3 * tau).exp() - 1.0) / (theta * theta),
    })
}

/// Optimal precommitment objective
/// `x e^{r tau} + (e^{kappa3 tau} - 1) / (2 theta)`.
pub fn pre_value(sc: &Scenario, theta: f64, t: f64, x: f64) -> Result<f64> {
    let m = pre_moments(sc, theta, t, x)?;
    Ok(m.mean - 0.5 * theta * m.variance)
}

/// Variance needed on the precommitment frontier to reach `mean` at the
/// horizon: `(mean - x e^{r tau})^2 / (e^{kappa3 tau} - 1)`.
pub fn pre_frontier_variance(sc: &Scenario, mean: f64, t: f64, x: f64) -> Result<f64> {
    check_time(sc, t, "start time")?;
    check_finite(x, "wealth")?;
    check_finite(mean, "target mean")?;
    let tau = sc.market.horizon - t;
    let benchmark = x * (sc.market.r * tau).exp();
    let gap = mean - benchmark;
    if gap < 0.0 {
        return Err(Error::Domain(format!(
            "target mean {mean} lies below the risk-free benchmark {benchmark}"
        )));
    }
    let spread = (sc.coef.kappa3 * tau).exp() - 1.0;
    if spread <= 0.0 {
        return Err(Error::Domain(
            "no excess return and no net loading: the frontier is a single point".to_string(),
        ));
    }
    Ok(gap * gap / spread)
}

// ============================================================================
// Quadratic-loss (auxiliary) problem
// ============================================================================

/// Optimal controls for minimizing `E[(X(T) - xi)^2]`, evaluated at
/// `(s, x)`.
pub fn aux_control(sc: &Scenario, xi: f64, s: f64, x: f64) -> Result<(f64, f64)> {
    check_time(sc, s, "evaluation time")?;
    check_finite(x, "wealth")?;
    check_finite(xi, "quadratic-loss target")?;
    let gap = x - xi * (-sc.market.r * (sc.market.horizon - s)).exp();
    Ok((-sc.coef.kappa1 * gap, -sc.coef.kappa2 * gap))
}

/// Minimal quadratic loss from `(t, x)`:
/// `min E[(X(T) - xi)^2] = (x e^{r tau} - xi)^2 e^{-kappa3 tau}`.
pub fn aux_value(sc: &Scenario, xi: f64, t: f64, x: f64) -> Result<f64> {
    check_time(sc, t, "start time")?;
    check_finite(x, "wealth")?;
    check_finite(xi, "quadratic-loss target")?;
    let tau = sc.market.horizon - t;
    let gap = x * (sc.market.r * tau).exp() - xi;
    Ok(gap * gap * (-sc.coef.kappa3 * tau).exp())
}

// ============================================================================
// Fixed-mean comparison and special cases
// ============================================================================

/// Both strategies pinned to the same terminal mean `m`, evaluated at the
/// start `(t, x)`, plus the risk weights that would make each family pick
/// `m` on its own.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetControls {
    pub pre_pi: f64,
    pub pre_l: f64,
    pub tc_pi: f64,
    pub tc_l: f64,
    /// Weight for which the precommitment optimum has mean `m`.
    pub theta_pre: f64,
    /// Weight for which the time-consistent equilibrium has mean `m`.
    pub theta_tc: f64,
}

/// Same-mean comparison of the two families at the start of the horizon.
///
/// Both control vectors are proportional to `(kappa1, kappa2)`; their
/// scales differ by the factor `kappa3 tau / (1 - e^{-kappa3 tau}) > 1`,
/// so precommitment always starts more aggressively.
pub fn target_controls(sc: &Scenario, mean: f64, t: f64, x: f64) -> Result<TargetControls> {
    let xi = aux_target_for_mean(sc, mean, t, x)?;
    let r = sc.market.r;
    let tau = sc.market.horizon - t;
    let disc = (-r * tau).exp();
    let gap = x - xi * disc;
    let pre_pi = -sc.coef.kappa1 * gap;
    let pre_l = -sc.coef.kappa2 * gap;

    let spread = mean - x * (r * tau).exp();
    let scale = spread / (sc.coef.kappa3 * tau) * disc;
    let tc_pi = sc.coef.kappa1 * scale;
    let tc_l = sc.coef.kappa2 * scale;

    Ok(TargetControls {
        pre_pi,
        pre_l,
        tc_pi,
        tc_l,
        theta_pre: ((sc.coef.kappa3 * tau).exp() - 1.0) / spread,
        theta_tc: sc.coef.kappa3 * tau / spread,
    })
}

/// One single-instrument policy: its control at `t`, its objective value,
/// and the objective shortfall relative to using both instruments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoloPolicy {
    /// `L` at `t` for the no-investment case, `pi` at `t` for the
    /// no-insurance case.
    pub control: f64,
    pub value: f64,
    /// Always nonnegative; zero only when the dropped instrument was
    /// useless to begin with.
    pub loss: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialCases {
    pub no_investment: SoloPolicy,
    pub no_insurance: SoloPolicy,
}

/// Time-consistent objective values when one instrument is switched off.
///
/// ```text
/// no investment: L(s) = q / (b theta) e^{-r (T - s)},
///                loss = (kappa3 - kappa4) tau / (2 theta)
/// no insurance:  pi(s) = mu_bar / (theta sigma^2) e^{-r (T - s)},
///                loss = (kappa3 - mu_bar^2 / sigma^2) tau / (2 theta)
/// ```
///
/// The second loss equals `(q + rho beta mu_bar / sigma)^2 / D` times
/// `tau / (2 theta)`, which is the residual-risk part of `kappa3`.
pub fn special_cases(sc: &Scenario, theta: f64, t: f64, x: f64) -> Result<SpecialCases> {
    let theta = Preference::new(theta)?.theta;
    check_time(sc, t, "evaluation time")?;
    check_finite(x, "wealth")?;
    let c = &sc.coef;
    let m = &sc.market;
    let tau = m.horizon - t;
    let growth = (m.r * tau).exp();
    let disc = 1.0 / growth;
    let merton_gain = c.mu_bar * c.mu_bar / (m.sigma * m.sigma);

    let full = x * growth + 0.5 * c.kappa3 * tau / theta;
    let value_no_inv = x * growth + 0.5 * c.kappa4 * tau / theta;
    let value_no_ins = x * growth + 0.5 * merton_gain * tau / theta;

    Ok(SpecialCases {
        no_investment: SoloPolicy {
            control: c.net_loading / (c.liability_var_rate * theta) * disc,
            value: value_no_inv,
            loss: full - value_no_inv,
        },
        no_insurance: SoloPolicy {
            control: c.mu_bar / (theta * m.sigma * m.sigma) * disc,
            value: value_no_ins,
            loss: full - value_no_ins,
        },
    })
}

/// Split of the equilibrium investment into a variance-amplified Merton
/// demand and a correlation hedge:
///
/// ```text
/// pi*(t) = (b / D) [mu_bar / (theta sigma^2)] e^{-r tau}
///          + [rho beta q / (D sigma theta)] e^{-r tau}
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiDecomposition {
    pub merton_term: f64,
    pub hedge_term: f64,
}

impl PiDecomposition {
    pub fn total(&self) -> f64 {
        self.merton_term + self.hedge_term
    }
}

pub fn decompose_pi(sc: &Scenario, theta: f64, t: f64) -> Result<PiDecomposition> {
    let theta = Preference::new(theta)?.theta;
    check_time(sc, t, "evaluation time")?;
    let c = &sc.coef;
    let m = &sc.market;
    let disc = (-m.r * (m.horizon - t)).exp();
    let merton = c.mu_bar / (theta * m.sigma * m.sigma);
    Ok(PiDecomposition {
        merton_term: c.liability_var_rate / c.residual_var_rate * merton * disc,
        hedge_term: m.rho * m.beta * c.net_loading / (c.residual_var_rate * m.sigma * theta)
            * disc,
    })
}

// ============================================================================
// Reference moments for arbitrary strategies
// ============================================================================

/// Mean and variance of surplus at time `s` under any deterministic
/// control path, by Simpson quadrature of
///
/// ```text
/// E[X(s)]   = x0 e^{r (s - t0)} + int_t0^s (mu_bar pi + q L)(v) e^{r (s - v)} dv
/// Var[X(s)] = int_t0^s [(sigma pi - rho beta L)^2 + beta^2 (1 - rho^2) L^2
///                       + lambda gamma_bar2 L^2](v) e^{2 r (s - v)} dv
/// ```
///
/// This is an independent code path from the per-kind closed forms, which
/// makes it a useful cross-check as well as the reference for kinds
/// without a dedicated formula.
pub fn deterministic_moments(sc: &Scenario, strategy: &Strategy, s: f64) -> Result<Moments> {
    if strategy.is_wealth_affine() {
        return Err(Error::Unsupported(
            "moment quadrature requires deterministic controls; use \
             terminal_moments for wealth-affine strategies"
                .to_string(),
        ));
    }
    let t0 = strategy.spec.t0;
    if s < t0 || s > sc.market.horizon + 1e-9 {
        return Err(Error::Domain(format!(
            "evaluation time {s} outside [{t0}, {}]",
            sc.market.horizon
        )));
    }

    let m = &sc.market;
    let c = &sc.coef;
    let cross = m.rho * m.beta;
    let resid = m.beta * m.beta * (1.0 - m.rho * m.rho) + m.lambda * c.gamma_bar2;

    // 2048 Simpson panels: O(h^4) error is far below reporting tolerances
    // for these smooth exponential integrands.
    let panels = 2048usize;
    let h = (s - t0) / panels as f64;
    let mut mean_acc = 0.0;
    let mut var_acc = 0.0;
    let integrand = |v: f64| -> (f64, f64) {
        let (pi, l) = strategy
            .expected_control(v)
            .expect("deterministic rule checked above");
        let growth = (m.r * (s - v)).exp();
        let diff = m.sigma * pi - cross * l;
        (
            (c.mu_bar * pi + c.net_loading * l) * growth,
            (diff * diff + resid * l * l) * growth * growth,
        )
    };
    for i in 0..panels {
        let a = t0 + i as f64 * h;
        let (fa_m, fa_v) = integrand(a);
        let (fm_m, fm_v) = integrand(a + 0.5 * h);
        let (fb_m, fb_v) = integrand(a + h);
        mean_acc += h / 6.0 * (fa_m + 4.0 * fm_m + fb_m);
        var_acc += h / 6.0 * (fa_v + 4.0 * fm_v + fb_v);
    }

    Ok(Moments {
        mean: strategy.spec.x0 * (m.r * (s - t0)).exp() + mean_acc,
        variance: var_acc,
    })
}

/// Terminal mean and variance for any supported strategy kind.
///
/// Wealth-affine kinds use the exact forward equations of the discounted
/// gap `Z(s) = e^{r (T - s)} X(s) - xi`, which contracts at rate `kappa3`:
/// `E[Z(T)] = Z(t0) e^{-kappa3 tau}` and `E[Z(T)^2] = Z(t0)^2 e^{-kappa3 tau}`.
pub fn terminal_moments(sc: &Scenario, strategy: &Strategy) -> Result<Moments> {
    match strategy.rule {
        ControlRule::TargetReverting { xi } => {
            if strategy.gain_scale != 1.0 {
                return Err(Error::Unsupported(
                    "scaled wealth-affine strategies have no closed-form \
                     terminal moments"
                        .to_string(),
                ));
            }
            let tau = sc.market.horizon - strategy.spec.t0;
            let z0 = strategy.spec.x0 * (sc.market.r * tau).exp() - xi;
            let shrink = (-sc.coef.kappa3 * tau).exp();
            let mean_z = z0 * shrink;
            let second_z = z0 * z0 * shrink;
            Ok(Moments {
                mean: xi + mean_z,
                variance: second_z - mean_z * mean_z,
            })
        }
        _ => deterministic_moments(sc, strategy, sc.market.horizon),
    }
}

// ============================================================================
// Shared argument checks
// ============================================================================

fn check_finite(v: f64, what: &str) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be finite, got {v}")))
    }
}

fn check_time(sc: &Scenario, t: f64, what: &str) -> Result<()> {
    let t_max = sc.market.horizon;
    let slack = 1e-9 * t_max.max(1.0);
    if !t.is_finite() || t < -slack || t > t_max + slack {
        return Err(Error::Domain(format!(
            "{what} must lie in [0, {t_max}], got {t}"
        )));
    }
    Ok(())
}

fn check_window(sc: &Scenario, t: f64, s: f64) -> Result<()> {
    check_time(sc, t, "start time")?;
    check_time(sc, s, "evaluation time")?;
    if s < t {
        return Err(Error::Domain(format!(
            "evaluation time {s} precedes start time {t}"
        )));
    }
    Ok(())
}

/// Shared reachability check for explicit mean targets.
fn check_reachable_mean(sc: &Scenario, mean: f64, t: f64, x: f64) -> Result<()> {
    check_finite(mean, "target mean")?;
    let tau = sc.market.horizon - t;
    if sc.coef.kappa3 * tau < 1e-12 {
        return Err(Error::Domain(
            "no excess return and no net loading: only the risk-free mean is attainable"
                .to_string(),
        ));
    }
    let benchmark = x * (sc.market.r * tau).exp();
    if mean <= benchmark {
        return Err(Error::Domain(format!(
            "target mean {mean} must exceed the risk-free benchmark {benchmark}"
        )));
    }
    Ok(())
}

// ============================================================================
// Tests
// ============================================================================
