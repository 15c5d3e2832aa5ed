//! Monte Carlo simulation of the surplus SDE and estimators for the
//! quantities the closed forms predict.
//!
//! The surplus is discretized with a left-point Euler scheme:
//!
//! ```text
//! X_{k+1} = X_k + (r X_k + mu_bar pi_k + p_bar L_k) dt
//!           + (sigma pi_k - rho beta L_k) sqrt(dt) Z1
//!           - beta sqrt(1 - rho^2) L_k sqrt(dt) Z2
//!           - L_k * (sum of claim severities in the step)
//! ```
//!
//! with controls evaluated at the left endpoint and the claim count per
//! step drawn as `Poisson(lambda dt)`. Claims enter through the raw
//! (uncompensated) jump sum; the compensator only appears in expectations.
//!
//! # Reproducibility
//!
//! Each path owns a dedicated counter-mode RNG stream keyed by its path
//! index, so results are bit-identical for a given seed regardless of how
//! many threads execute the paths. The per-step draw order inside a path
//! is fixed (two normals, then the claim count, then the claim sizes) and
//! never depends on the controls, so two runs with the same seed see the
//! same noise even when the strategies differ. That makes common random
//! numbers valid for comparing strategies.
//!
//! Antithetic sampling simulates paths in pairs that share one stream:
//! the second leg negates both normal draws and reuses the claim draws.
//! Each leg still has the exact model law, so the pooled estimate stays
//! unbiased while the Gaussian part of the variance cancels.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;

use crate::closed_form::Strategy;
use crate::model::Scenario;
use crate::{Error, Result};

// ============================================================================
// Configuration
// ============================================================================

/// Monte Carlo controls. `steps_per_year` scales with the horizon: a
/// two-year simulation at the default resolution takes 504 steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationConfig {
    pub n_paths: usize,
    pub steps_per_year: usize,
    pub seed: u64,
    /// Simulate antithetic pairs; requires an even `n_paths`.
    pub antithetic: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            n_paths: 10_000,
            steps_per_year: 252,
            seed: 42,
            antithetic: false,
        }
    }
}

impl SimulationConfig {
    fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::Domain("n_paths must be positive".to_string()));
        }
        if self.antithetic && self.n_paths % 2 != 0 {
            return Err(Error::Domain(format!(
                "antithetic sampling needs an even number of paths, got {}",
                self.n_paths
            )));
        }
        if self.steps_per_year == 0 {
            return Err(Error::Domain("steps_per_year must be positive".to_string()));
        }
        Ok(())
    }
}

// ============================================================================
// Path generation
// ============================================================================

/// Fixed per-scenario pieces of the Euler step.
struct StepModel {
    r: f64,
    mu_bar: f64,
    p_bar: f64,
    sigma: f64,
    cross: f64,
    resid_vol: f64,
    poisson: Option<Poisson<f64>>,
    jump: crate::model::JumpDistribution,
    dt: f64,
    sqrt_dt: f64,
}

impl StepModel {
    fn new(sc: &Scenario, dt: f64) -> Self {
        let m = &sc.market;
        let mean_count = m.lambda * dt;
        Self {
            r: m.r,
            mu_bar: sc.coef.mu_bar,
            p_bar: sc.coef.p_bar,
            sigma: m.sigma,
            cross: m.rho * m.beta,
            resid_vol: m.beta * (1.0 - m.rho * m.rho).sqrt(),
            // Poisson(0) is degenerate at zero; model it as "no jumps".
            poisson: (mean_count > 0.0).then(|| {
                Poisson::new(mean_count).expect("positive mean")
            }),
            jump: sc.jump,
            dt,
            sqrt_dt: dt.sqrt(),
        }
    }

    /// Draws one step's noise. The number of RNG calls depends only on
    /// the claim count, never on the controls.
    fn draw(&self, rng: &mut ChaCha12Rng) -> (f64, f64, f64) {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let jump_sum = match &self.poisson {
            None => 0.0,
            Some(poisson) => {
                let count = poisson.sample(rng) as u64;
                let mut total = 0.0;
                for _ in 0..count {
                    total += self.jump.sample(rng);
                }
                total
            }
        };
        (z1, z2, jump_sum)
    }

    fn advance(&self, x: f64, pi: f64, l: f64, z1: f64, z2: f64, jump_sum: f64) -> f64 {
        x + (self.r * x + self.mu_bar * pi + self.p_bar * l) * self.dt
            + (self.sigma * pi - self.cross * l) * self.sqrt_dt * z1
            - self.resid_vol * l * self.sqrt_dt * z2
            - l * jump_sum
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Simulates terminal surplus `X(T)` for every path.
///
/// `t0` may differ from the strategy's own start time as long as the
/// strategy is defined there; `x0` is the surplus at `t0`. Paths are
/// returned in index order.
pub fn simulate_wealth(
    sc: &Scenario,
    strategy: &Strategy,
    config: &SimulationConfig,
    t0: f64,
    x0: f64,
) -> Result<Vec<f64>> {
    config.validate()?;
    if !x0.is_finite() {
        return Err(Error::Domain(format!(
            "initial wealth must be finite, got {x0}"
        )));
    }
    let horizon = sc.market.horizon;
    if !t0.is_finite() || t0 < 0.0 || t0 >= horizon {
        return Err(Error::Domain(format!(
            "simulation start must lie in [0, T), got {t0} with T={horizon}"
        )));
    }
    // Fails fast if the strategy window does not cover [t0, T].
    strategy.control(t0, x0)?;

    let tau = horizon - t0;
    let n_steps = ((config.steps_per_year as f64 * tau).round() as usize).max(1);
    let dt = tau / n_steps as f64;
    let model = StepModel::new(sc, dt);

    let run_single = |stream: u64| -> f64 {
        let mut rng = stream_rng(config.seed, stream);
        let mut x = x0;
        for k in 0..n_steps {
            let s = t0 + k as f64 * dt;
            let (pi, l) = strategy.control_unchecked(s, x);
            let (z1, z2, jump_sum) = model.draw(&mut rng);
            x = model.advance(x, pi, l, z1, z2, jump_sum);
        }
        x
    };

    let run_pair = |stream: u64| -> (f64, f64) {
        let mut rng = stream_rng(config.seed, stream);
        let mut x_plus = x0;
        let mut x_minus = x0;
        for k in 0..n_steps {
            let s = t0 + k as f64 * dt;
            let (z1, z2, jump_sum) = model.draw(&mut rng);
            let (pi, l) = strategy.control_unchecked(s, x_plus);
            x_plus = model.advance(x_plus, pi, l, z1, z2, jump_sum);
            let (pi, l) = strategy.control_unchecked(s, x_minus);
            x_minus = model.advance(x_minus, pi, l, -z1, -z2, jump_sum);
        }
        (x_plus, x_minus)
    };

    let terminal = if config.antithetic {
        (0..config.n_paths as u64 / 2)
            .into_par_iter()
            .map(run_pair)
            .flat_map_iter(|(a, b)| [a, b])
            .collect()
    } else {
        (0..config.n_paths as u64)
            .into_par_iter()
            .map(run_single)
            .collect()
    };
    Ok(terminal)
}

// ============================================================================
// Forward expectation process
// ============================================================================

/// Integrates the forward expectation process
///
/// ```text
/// dY/ds = r Y + mu_bar E[pi(s)] + q E[L(s)],   Y(t0) = y0
/// ```
///
/// to time `s` with classical RK4. Only strategies with deterministic
/// controls are supported: for wealth-affine strategies the expected
/// controls are path functionals, and the game-theoretic construction
/// that needs `Y` does not apply to them.
pub fn auxiliary_y(
    sc: &Scenario,
    strategy: &Strategy,
    t0: f64,
    y0: f64,
    s: f64,
) -> Result<f64> {
    if strategy.is_wealth_affine() {
        return Err(Error::Unsupported(
            "the forward expectation process is defined only for strategies \
             with deterministic controls"
                .to_string(),
        ));
    }
    if !y0.is_finite() {
        return Err(Error::Domain(format!("y0 must be finite, got {y0}")));
    }
    if !s.is_finite() || s < t0 || s > sc.market.horizon + 1e-9 {
        return Err(Error::Domain(format!(
            "evaluation time {s} outside [{t0}, {}]",
            sc.market.horizon
        )));
    }
    strategy.control(t0, y0)?;

    let rate = |v: f64, y: f64| -> f64 {
        let (pi, l) = strategy
            .expected_control(v)
            .expect("deterministic rule checked above");
        sc.market.r * y + sc.coef.mu_bar * pi + sc.coef.net_loading * l
    };

    let span = s - t0;
    if span == 0.0 {
        return Ok(y0);
    }
    let n_steps = ((256.0 * span).ceil() as usize).max(8);
    let h = span / n_steps as f64;
    let mut y = y0;
    for k in 0..n_steps {
        let v = t0 + k as f64 * h;
        let k1 = rate(v, y);
        let k2 = rate(v + 0.5 * h, y + 0.5 * h * k1);
        let k3 = rate(v + 0.5 * h, y + 0.5 * h * k2);
        let k4 = rate(v + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    Ok(y)
}

// ============================================================================
// Estimators
// ============================================================================

/// A point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    /// Absolute deviation from `reference` in units of the standard error.
    pub fn deviation_in_se(&self, reference: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.value == reference {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.value - reference).abs() / self.std_error
        }
    }
}

/// Sample summary of terminal surplus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathStats {
    pub n: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub se_mean: f64,
    /// Standard error of the sample variance, from the exact finite-sample
    /// formula `Var[s^2] = (m4 - s^4 (n-3)/(n-1)) / n`.
    pub se_variance: f64,
}

impl PathStats {
    pub fn mean_estimate(&self) -> Estimate {
        Estimate {
            value: self.mean,
            std_error: self.se_mean,
        }
    }

    pub fn variance_estimate(&self) -> Estimate {
        Estimate {
            value: self.variance,
            std_error: self.se_variance,
        }
    }
}

/// Computes `PathStats` from terminal samples. Needs at least two.
pub fn path_stats(samples: &[f64]) -> Result<PathStats> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::InsufficientSamples { got: n, need: 2 });
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let (mut m2, mut m4) = (0.0, 0.0);
    for &x in samples {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m4 /= nf;

    let variance = m2 * nf / (nf - 1.0);
    let var_of_var = ((m4 - variance * variance * (nf - 3.0) / (nf - 1.0)) / nf).max(0.0);
    Ok(PathStats {
        n,
        mean,
        variance,
        se_mean: (variance / nf).sqrt(),
        se_variance: var_of_var.sqrt(),
    })
}

/// Joint estimates of the mean-variance trade-off and, when the terminal
/// value of the forward expectation process is supplied, the modified
/// objective `E[X(T) - (theta/2)(X(T) - y_T)^2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveEstimates {
    pub stats: PathStats,
    /// `mean - (theta/2) variance`, with a standard error that accounts
    /// for the correlation between the sample mean and sample variance.
    pub mv_objective: Estimate,
    pub modified_objective: Option<Estimate>,
}

/// Estimates the mean-variance objective from terminal samples.
pub fn estimate_objectives(
    samples: &[f64],
    theta: f64,
    aux_terminal_y: Option<f64>,
) -> Result<ObjectiveEstimates> {
    let theta = crate::model::Preference::new(theta)?.theta;
    let stats = path_stats(samples)?;
    let nf = samples.len() as f64;

    let mut m3 = 0.0;
    for &x in samples {
        let d = x - stats.mean;
        m3 += d * d * d;
    }
    m3 /= nf;

    let j = stats.mean - 0.5 * theta * stats.variance;
    // Var[J] = Var[mean] + (theta/2)^2 Var[s^2] - theta Cov[mean, s^2],
    // with Cov[mean, s^2] ~ m3 / n.
    let var_j = (stats.variance / nf + 0.25 * theta * theta * stats.se_variance.powi(2)
        - theta * m3 / nf)
        .max(0.0);
    let mv_objective = Estimate {
        value: j,
        std_error: var_j.sqrt(),
    };

    let modified_objective = match aux_terminal_y {
        None => None,
        Some(y) => {
            if !y.is_finite() {
                return Err(Error::Domain(format!(
                    "terminal expectation state must be finite, got {y}"
                )));
            }
            let transformed: Vec<f64> = samples
                .iter()
                .map(|&x| x - 0.5 * theta * (x - y) * (x - y))
                .collect();
            let s = path_stats(&transformed)?;
            Some(Estimate {
                value: s.mean,
                std_error: s.se_mean,
            })
        }
    };

    Ok(ObjectiveEstimates {
        stats,
        mv_objective,
        modified_objective,
    })
}

/// Estimates the quadratic loss `E[(X(T) - xi)^2]`.
pub fn estimate_quadratic_loss(samples: &[f64], xi: f64) -> Result<Estimate> {
    if !xi.is_finite() {
        return Err(Error::Domain(format!(
            "quadratic-loss target must be finite, got {xi}"
        )));
    }
    let losses: Vec<f64> = samples.iter().map(|&x| (x - xi) * (x - xi)).collect();
    let stats = path_stats(&losses)?;
    Ok(Estimate {
        value: stats.mean,
        std_error: stats.se_mean,
    })
}

// ============================================================================
// Tests
// ============================================================================
