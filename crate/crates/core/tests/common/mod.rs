//! Seeded scenario samplers shared by the integration suites.

use mvjump::{JumpDistribution, MarketParams, Scenario};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

pub fn draw_jump(rng: &mut ChaCha12Rng) -> JumpDistribution {
    match rng.random_range(0..3u8) {
        0 => JumpDistribution::Constant {
            gamma: rng.random_range(0.05..0.6),
        },
        1 => JumpDistribution::Exponential {
            mean: rng.random_range(0.05..0.5),
        },
        _ => JumpDistribution::Lognormal {
            mu_log: rng.random_range(-2.5..-0.5),
            sigma_log: rng.random_range(0.1..0.8),
        },
    }
}

struct Ranges {
    r: (f64, f64),
    excess: (f64, f64),
    sigma: (f64, f64),
    beta: (f64, f64),
    rho: (f64, f64),
    lambda: (f64, f64),
    loading: (f64, f64),
    horizon: (f64, f64),
}

fn draw(rng: &mut ChaCha12Rng, ranges: &Ranges) -> Scenario {
    let jump = draw_jump(rng);
    let r = rng.random_range(ranges.r.0..ranges.r.1);
    let mu = r + rng.random_range(ranges.excess.0..ranges.excess.1);
    let sigma = rng.random_range(ranges.sigma.0..ranges.sigma.1);
    let alpha = rng.random_range(0.02..0.12);
    let beta = rng.random_range(ranges.beta.0..ranges.beta.1);
    let rho = rng.random_range(ranges.rho.0..ranges.rho.1);
    let lambda = rng.random_range(ranges.lambda.0..ranges.lambda.1);
    let loading = rng.random_range(ranges.loading.0..ranges.loading.1);
    let horizon = rng.random_range(ranges.horizon.0..ranges.horizon.1);
    let gamma_bar1 = match jump {
        JumpDistribution::Constant { gamma } => gamma,
        JumpDistribution::Exponential { mean } => mean,
        JumpDistribution::Lognormal { mu_log, sigma_log } => {
            (mu_log + 0.5 * sigma_log * sigma_log).exp()
        }
    };
    let params = MarketParams {
        r,
        mu,
        sigma,
        alpha,
        beta,
        rho,
        lambda,
        p: alpha + lambda * gamma_bar1 + loading,
        horizon,
    };
    Scenario::new(params, jump).expect("sampled parameters must be valid")
}

/// Anywhere in the valid domain, extreme corners included. Suitable for
/// relative-error and ordering claims, which are scale-free.
pub fn draw_wide(rng: &mut ChaCha12Rng) -> Scenario {
    draw(
        rng,
        &Ranges {
            r: (0.0, 0.06),
            excess: (0.003, 0.12),
            sigma: (0.1, 0.6),
            beta: (0.02, 0.4),
            rho: (-0.95, 0.95),
            lambda: (0.0, 0.8),
            loading: (-0.02, 0.15),
            horizon: (0.25, 2.0),
        },
    )
}

/// Conditioned so that absolute tolerances near machine precision stay
/// meaningful (extreme corners inflate the kappa scale and with it the
/// rounding floor).
pub fn draw_moderate(rng: &mut ChaCha12Rng) -> Scenario {
    draw(
        rng,
        &Ranges {
            r: (0.0, 0.04),
            excess: (0.01, 0.08),
            sigma: (0.15, 0.45),
            beta: (0.05, 0.2),
            rho: (-0.6, 0.6),
            lambda: (0.05, 0.3),
            loading: (0.0, 0.08),
            horizon: (0.5, 1.5),
        },
    )
}

pub fn draw_theta(rng: &mut ChaCha12Rng) -> f64 {
    rng.random_range(0.5..5.0)
}
