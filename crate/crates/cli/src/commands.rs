//! One function per subcommand. Each writes its primary output to the
//! supplied writer and reports failures through `mvjump::Error`, so the
//! binary's exit-code mapping stays in one place.
//!
//! CSV output is locale-independent by construction: floats go through
//! Rust's `Display`, which always uses `.` and round-trips exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use mvjump::closed_form::{
    self, aux_value, decompose_pi, optimal_mean, pre_control, pre_frontier_variance, pre_moments,
    special_cases, sml_slope, target_controls, tc_control, tc_frontier_variance, tc_moments,
    terminal_moments, StrategyKind, StrategySpec,
};
use mvjump::config::ParsedConfig;
use mvjump::model::Preference;
use mvjump::simulate::{
    estimate_objectives, estimate_quadratic_loss, path_stats, simulate_wealth, SimulationConfig,
};
use mvjump::verify::run_all;
use mvjump::{Error, JumpDistribution, Result, Scenario};

// ============================================================================
// Shared helpers
// ============================================================================

fn config_error(msg: impl Into<String>) -> Error {
    Error::Config { msg: msg.into() }
}

fn describe_jump(jump: &JumpDistribution) -> String {
    match jump {
        JumpDistribution::Constant { gamma } => format!("constant (gamma = {gamma})"),
        JumpDistribution::Exponential { mean } => format!("exponential (mean = {mean})"),
        JumpDistribution::Lognormal { mu_log, sigma_log } => {
            format!("lognormal (mu_log = {mu_log}, sigma_log = {sigma_log})")
        }
    }
}

/// Precommitment controls at `s` along the mean wealth path. The
/// discounted gap to the target contracts deterministically at rate
/// `kappa3`, which pins the expected wealth at `s`.
fn pre_mean_path_control(
    sc: &Scenario,
    theta: f64,
    t0: f64,
    x0: f64,
    s: f64,
) -> Result<(f64, f64)> {
    let strategy = closed_form::Strategy::new(
        sc,
        StrategySpec {
            kind: StrategyKind::Precommit { theta },
            t0,
            x0,
        },
    )?;
    let xi = strategy
        .target_locus()
        .expect("precommitment reverts to a target");
    let m = &sc.market;
    let z0 = x0 - xi * (-m.r * (m.horizon - t0)).exp();
    let x_mean =
        xi * (-m.r * (m.horizon - s)).exp() + z0 * ((m.r - sc.coef.kappa3) * (s - t0)).exp();
    strategy.control(s, x_mean)
}

fn require_ascending(values: &[f64], what: &str) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(config_error(format!("{what} must be finite")));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(config_error(format!("{what} must be strictly ascending")));
    }
    Ok(())
}

// ============================================================================
// strategy
// ============================================================================

#[derive(Args)]
pub struct StrategyArgs {
    /// Start time of the problem
    #[arg(short = 't', long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub time: f64,

    /// Wealth at the start time
    #[arg(short = 'x', long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub wealth: f64,

    /// Time the controls are evaluated at; the horizon when omitted
    #[arg(short = 's', long, allow_negative_numbers = true)]
    pub eval_time: Option<f64>,

    /// Risk-aversion weight; the config's theta when omitted
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
}

pub fn strategy(
    out: &mut dyn Write,
    cfg: &ParsedConfig,
    label: &str,
    args: &StrategyArgs,
) -> Result<()> {
    let sc = cfg.scenario()?;
    let theta = Preference::new(args.theta.unwrap_or(cfg.theta))?.theta;
    let t = args.time;
    let x = args.wealth;
    let s = args.eval_time.unwrap_or(sc.market.horizon);

    let c = &sc.coef;
    writeln!(out, "scenario: {label}")?;
    writeln!(out, "jump severity: {}", describe_jump(&sc.jump))?;
    writeln!(out, "derived coefficients")?;
    writeln!(
        out,
        "  mu_bar = {}  p_bar = {}  q = {}",
        c.mu_bar, c.p_bar, c.net_loading
    )?;
    writeln!(
        out,
        "  gamma_bar1 = {}  gamma_bar2 = {}  b = {}  D = {}",
        c.gamma_bar1, c.gamma_bar2, c.liability_var_rate, c.residual_var_rate
    )?;
    writeln!(
        out,
        "  kappa1 = {}  kappa2 = {}  kappa3 = {}  kappa4 = {}",
        c.kappa1, c.kappa2, c.kappa3, c.kappa4
    )?;

    let (tc_pi, tc_l) = tc_control(&sc, theta, s)?;
    let (pre_pi, pre_l) = pre_mean_path_control(&sc, theta, t, x, s)?;
    let solos = special_cases(&sc, theta, s, x)?;

    writeln!(
        out,
        "controls at s = {s} (theta = {theta}, problem started at t = {t}, x = {x})"
    )?;
    writeln!(out, "  {:<18} {:<24} {:<24}", "strategy", "pi", "L")?;
    writeln!(out, "  {:<18} {:<24} {:<24}", "time-consistent", tc_pi, tc_l)?;
    writeln!(out, "  {:<18} {:<24} {:<24}", "precommitment*", pre_pi, pre_l)?;
    writeln!(
        out,
        "  {:<18} {:<24} {:<24}",
        "no-investment", 0.0, solos.no_investment.control
    )?;
    writeln!(
        out,
        "  {:<18} {:<24} {:<24}",
        "no-insurance", solos.no_insurance.control, 0.0
    )?;
    writeln!(out, "  * along the mean wealth path")?;

    let split = decompose_pi(&sc, theta, s)?;
    writeln!(
        out,
        "investment split: merton = {}, hedge = {}",
        split.merton_term, split.hedge_term
    )?;

    if sc.warnings.is_empty() {
        writeln!(out, "warnings: none")?;
    } else {
        for warning in &sc.warnings {
            writeln!(out, "warning: {warning}")?;
        }
    }
    Ok(())
}

// ============================================================================
// frontier
// ============================================================================

#[derive(Args)]
pub struct FrontierArgs {
    /// Start time of the problem
    #[arg(short = 't', long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub time: f64,

    /// Wealth at the start time
    #[arg(short = 'x', long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub wealth: f64,

    /// Horizon the frontier refers to; the terminal horizon when omitted
    #[arg(short = 's', long, allow_negative_numbers = true)]
    pub eval_time: Option<f64>,

    /// Strictly ascending terminal means, comma separated
    #[arg(
        long,
        value_delimiter = ',',
        conflicts_with = "thetas",
        required_unless_present = "thetas"
    , allow_negative_numbers = true)]
    pub means: Vec<f64>,

    /// Strictly ascending risk weights; each is mapped to its equilibrium
    /// mean and the frontier is evaluated there
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub thetas: Vec<f64>,
}

pub fn frontier(out: &mut dyn Write, cfg: &ParsedConfig, args: &FrontierArgs) -> Result<()> {
    let sc = cfg.scenario()?;
    let t = args.time;
    let x = args.wealth;
    let s = args.eval_time.unwrap_or(sc.market.horizon);
    let at_horizon = (sc.market.horizon - s).abs() <= 1e-12;

    let means: Vec<f64> = if args.means.is_empty() {
        require_ascending(&args.thetas, "--thetas")?;
        args.thetas
            .iter()
            .map(|&theta| Ok(tc_moments(&sc, theta, t, x, s)?.mean))
            .collect::<Result<_>>()?
    } else {
        require_ascending(&args.means, "--means")?;
        args.means.clone()
    };

    writeln!(out, "mean,variance_tc,variance_pre,sml_slope")?;
    let slope = sml_slope(&sc, t, s)?;
    for mean in means {
        let var_tc = tc_frontier_variance(&sc, mean, t, x, s)?;
        // The precommitment frontier is a statement about the terminal
        // horizon only; the column is empty at interim dates.
        let var_pre = if at_horizon {
            Some(pre_frontier_variance(&sc, mean, t, x)?)
        } else {
            None
        };
        match var_pre {
            Some(v) => writeln!(out, "{mean},{var_tc},{v},{slope}")?,
            None => writeln!(out, "{mean},{var_tc},,{slope}")?,
        }
    }
    Ok(())
}

// ============================================================================
// sweep
// ============================================================================

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PremiumRule {
    /// Keep the configured premium while sweeping
    Fixed,
    /// Recompute p = (1 + loading) (alpha + lambda gamma_bar1) at every
    /// grid point
    ExpectedValue,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Parameter to sweep: r, mu, sigma, alpha, beta, rho, lambda, p, or
    /// gamma (constant severities only)
    #[arg(long)]
    pub param: String,

    /// Grid lower end (with --max and --count)
    #[arg(long, conflicts_with = "values", requires = "max", requires = "count", allow_negative_numbers = true)]
    pub min: Option<f64>,

    /// Grid upper end
    #[arg(long, allow_negative_numbers = true)]
    pub max: Option<f64>,

    /// Number of grid points, at least 2
    #[arg(long)]
    pub count: Option<usize>,

    /// Explicit grid values, comma separated
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub values: Vec<f64>,

    /// Risk weights, one pair of control columns rendered per row each;
    /// the config's theta when omitted
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub thetas: Vec<f64>,

    /// Premium rule applied at each grid point
    #[arg(long, value_enum, default_value_t = PremiumRule::Fixed)]
    pub premium: PremiumRule,

    /// Loading eta for the expected-value premium rule
    #[arg(long, required_if_eq("premium", "expected-value"), allow_negative_numbers = true)]
    pub loading: Option<f64>,

    /// Add precommitment control columns (mean-path values at the
    /// evaluation time, problem started at t = 0)
    #[arg(long)]
    pub precommit: bool,

    /// Time the controls are evaluated at
    #[arg(short = 's', long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eval_time: f64,

    /// Initial wealth for the precommitment columns
    #[arg(short = 'x', long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub wealth: f64,
}

fn sweep_grid(args: &SweepArgs) -> Result<Vec<f64>> {
    if !args.values.is_empty() {
        if args.values.iter().any(|v| !v.is_finite()) {
            return Err(config_error("--values must be finite"));
        }
        return Ok(args.values.clone());
    }
    let (min, max, count) = match (args.min, args.max, args.count) {
        (Some(min), Some(max), Some(count)) => (min, max, count),
        _ => {
            return Err(config_error(
                "sweep needs either --values or all of --min, --max, --count",
            ))
        }
    };
    if count < 2 {
        return Err(config_error("--count must be at least 2"));
    }
    if !min.is_finite() || !max.is_finite() || max <= min {
        return Err(config_error("--max must exceed --min"));
    }
    Ok((0..count)
        .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
        .collect())
}

pub fn sweep(out: &mut dyn Write, cfg: &ParsedConfig, args: &SweepArgs) -> Result<()> {
    let param = args.param.as_str();
    const PARAMS: [&str; 9] = [
        "r", "mu", "sigma", "alpha", "beta", "rho", "lambda", "p", "gamma",
    ];
    if !PARAMS.contains(&param) {
        return Err(config_error(format!(
            "unknown sweep parameter `{param}` (expected one of {})",
            PARAMS.join(", ")
        )));
    }
    if param == "gamma" && !matches!(cfg.jump, JumpDistribution::Constant { .. }) {
        return Err(Error::Domain(
            "sweeping gamma requires a constant claim severity".to_string(),
        ));
    }
    if param == "p" && args.premium == PremiumRule::ExpectedValue {
        return Err(config_error(
            "cannot sweep p under the expected-value premium rule: the rule \
             overwrites it",
        ));
    }

    let grid = sweep_grid(args)?;
    let thetas = if args.thetas.is_empty() {
        vec![cfg.theta]
    } else {
        args.thetas.clone()
    };
    let s = args.eval_time;

    write!(out, "{param},theta,p,pi,L")?;
    if args.precommit {
        write!(out, ",pre_pi,pre_l")?;
    }
    writeln!(out)?;

    for &value in &grid {
        let mut market = cfg.market;
        let mut jump = cfg.jump;
        match param {
            "r" => market.r = value,
            "mu" => market.mu = value,
            "sigma" => market.sigma = value,
            "alpha" => market.alpha = value,
            "beta" => market.beta = value,
            "rho" => market.rho = value,
            "lambda" => market.lambda = value,
            "p" => market.p = value,
            "gamma" => jump = JumpDistribution::Constant { gamma: value },
            _ => unreachable!("validated above"),
        }
        if args.premium == PremiumRule::ExpectedValue {
            let loading = args.loading.expect("clap enforces --loading");
            if !loading.is_finite() {
                return Err(config_error("--loading must be finite"));
            }
            let (gamma_bar1, _) = jump.moments();
            market.p = (1.0 + loading) * (market.alpha + market.lambda * gamma_bar1);
        }
        let sc = Scenario::new(market, jump)?;
        for &theta in &thetas {
            let (pi, l) = tc_control(&sc, theta, s)?;
            write!(out, "{value},{theta},{},{pi},{l}", market.p)?;
            if args.precommit {
                let (pre_pi, pre_l) = pre_mean_path_control(&sc, theta, 0.0, args.wealth, s)?;
                write!(out, ",{pre_pi},{pre_l}")?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

// ============================================================================
// simulate
// ============================================================================

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyChoice {
    /// Time-consistent equilibrium policy
    Tc,
    /// Precommitment optimum
    Precommit,
    /// Precommitment policy pinned to --mean-target
    TargetPre,
    /// Deterministic policy pinned to --mean-target
    TargetTc,
    /// Quadratic-loss minimizer toward --xi
    Aux,
    /// Insurance book only
    NoInvestment,
    /// Investment only
    NoInsurance,
    /// Constant controls --pi and --retention
    Fixed,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Policy to simulate
    #[arg(long, value_enum)]
    pub strategy: StrategyChoice,

    /// Risk-aversion weight; the config's theta when omitted
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,

    /// Terminal mean for the target policies
    #[arg(
        long,
        required_if_eq_any([("strategy", "target-pre"), ("strategy", "target-tc")])
    , allow_negative_numbers = true)]
    pub mean_target: Option<f64>,

    /// Quadratic-loss target for the aux policy
    #[arg(long, required_if_eq("strategy", "aux"), allow_negative_numbers = true)]
    pub xi: Option<f64>,

    /// Investment level for the fixed policy
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub pi: f64,

    /// Retention level for the fixed policy
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub retention: f64,

    /// Number of simulated paths
    #[arg(long, default_value_t = 10_000)]
    pub paths: usize,

    /// Euler steps per year
    #[arg(long, default_value_t = 252)]
    pub steps: usize,

    /// Simulate antithetic pairs (requires an even path count)
    #[arg(long)]
    pub antithetic: bool,

    /// Simulation start time
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t0: f64,

    /// Wealth at the start time
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub x0: f64,

    /// Also write raw terminal samples, one per line
    #[arg(long, value_name = "PATH")]
    pub samples_out: Option<PathBuf>,
}

fn describe_strategy(kind: &StrategyKind) -> String {
    match kind {
        StrategyKind::TimeConsistent { theta } => format!("tc (theta = {theta})"),
        StrategyKind::Precommit { theta } => format!("precommit (theta = {theta})"),
        StrategyKind::PrecommitTarget { mean_target } => {
            format!("target-pre (mean = {mean_target})")
        }
        StrategyKind::TcTarget { mean_target } => format!("target-tc (mean = {mean_target})"),
        StrategyKind::AuxQuadratic { xi } => format!("aux (xi = {xi})"),
        StrategyKind::NoInvestment { theta } => format!("no-investment (theta = {theta})"),
        StrategyKind::NoInsurance { theta } => format!("no-insurance (theta = {theta})"),
        StrategyKind::Fixed { pi, l } => format!("fixed (pi = {pi}, L = {l})"),
    }
}

pub fn simulate(
    out: &mut dyn Write,
    cfg: &ParsedConfig,
    label: &str,
    seed: Option<u64>,
    args: &SimulateArgs,
) -> Result<()> {
    let sc = cfg.scenario()?;
    let theta = args.theta.unwrap_or(cfg.theta);
    let kind = match args.strategy {
        StrategyChoice::Tc => StrategyKind::TimeConsistent { theta },
        StrategyChoice::Precommit => StrategyKind::Precommit { theta },
        StrategyChoice::TargetPre => StrategyKind::PrecommitTarget {
            mean_target: args.mean_target.expect("clap enforces --mean-target"),
        },
        StrategyChoice::TargetTc => StrategyKind::TcTarget {
            mean_target: args.mean_target.expect("clap enforces --mean-target"),
        },
        StrategyChoice::Aux => StrategyKind::AuxQuadratic {
            xi: args.xi.expect("clap enforces --xi"),
        },
        StrategyChoice::NoInvestment => StrategyKind::NoInvestment { theta },
        StrategyChoice::NoInsurance => StrategyKind::NoInsurance { theta },
        StrategyChoice::Fixed => StrategyKind::Fixed {
            pi: args.pi,
            l: args.retention,
        },
    };

    let strategy = closed_form::Strategy::new(
        &sc,
        StrategySpec {
            kind,
            t0: args.t0,
            x0: args.x0,
        },
    )?;
    let sim = SimulationConfig {
        n_paths: args.paths,
        steps_per_year: args.steps,
        seed: seed.unwrap_or(SimulationConfig::default().seed),
        antithetic: args.antithetic,
    };
    let samples = simulate_wealth(&sc, &strategy, &sim, args.t0, args.x0)?;
    if let Some(path) = &args.samples_out {
        let mut dump = BufWriter::new(File::create(path)?);
        for sample in &samples {
            writeln!(dump, "{sample}")?;
        }
        dump.flush()?;
    }

    writeln!(out, "simulation report")?;
    writeln!(out, "scenario: {label}")?;
    writeln!(out, "strategy: {}", describe_strategy(strategy.kind()))?;
    writeln!(
        out,
        "paths = {}, steps_per_year = {}, seed = {}, antithetic = {}",
        sim.n_paths, sim.steps_per_year, sim.seed, sim.antithetic
    )?;
    writeln!(
        out,
        "window: t0 = {}, x0 = {}, T = {}",
        args.t0, args.x0, sc.market.horizon
    )?;
    writeln!(
        out,
        "{:<16} {:<24} {:<24} {:<10} band",
        "quantity", "estimate", "closed_form", "|dev|/SE"
    )?;

    let mut row = |name: &str, estimate: mvjump::simulate::Estimate, reference: f64| {
        let dev = estimate.deviation_in_se(reference);
        let band = if dev <= 3.0 { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "{name:<16} {:<24} {reference:<24} {dev:<10.2} {band}",
            estimate.value
        )
    };

    let reference = terminal_moments(&sc, &strategy)?;
    let has_theta = matches!(
        kind,
        StrategyKind::TimeConsistent { .. }
            | StrategyKind::Precommit { .. }
            | StrategyKind::NoInvestment { .. }
            | StrategyKind::NoInsurance { .. }
    );
    if has_theta {
        let estimates = estimate_objectives(&samples, theta, None)?;
        row("mean", estimates.stats.mean_estimate(), reference.mean)?;
        row(
            "variance",
            estimates.stats.variance_estimate(),
            reference.variance,
        )?;
        let closed_j = reference.mean - 0.5 * theta * reference.variance;
        row("objective", estimates.mv_objective, closed_j)?;
    } else {
        let stats = path_stats(&samples)?;
        row("mean", stats.mean_estimate(), reference.mean)?;
        row("variance", stats.variance_estimate(), reference.variance)?;
        if let StrategyKind::AuxQuadratic { xi } = kind {
            let loss = estimate_quadratic_loss(&samples, xi)?;
            let closed_loss = aux_value(&sc, xi, args.t0, args.x0)?;
            row("quadratic_loss", loss, closed_loss)?;
        }
    }
    Ok(())
}

// ============================================================================
// verify
// ============================================================================

#[derive(Args)]
pub struct VerifyArgs {
    /// Risk-aversion weight; the config's theta when omitted
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
}

/// Returns whether every check passed.
pub fn verify(
    out: &mut dyn Write,
    cfg: &ParsedConfig,
    label: &str,
    args: &VerifyArgs,
) -> Result<bool> {
    let sc = cfg.scenario()?;
    let theta = Preference::new(args.theta.unwrap_or(cfg.theta))?.theta;
    let report = run_all(&sc, theta)?;
    writeln!(out, "verification report")?;
    writeln!(out, "scenario: {label} (theta = {theta})")?;
    write!(out, "{}", report.render())?;
    Ok(report.all_pass())
}

// ============================================================================
// compare
// ============================================================================

#[derive(Args)]
pub struct CompareArgs {
    /// Risk-aversion weight; the config's theta when omitted
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,

    /// Start time of the problem
    #[arg(short = 't', long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub time: f64,

    /// Wealth at the start time
    #[arg(short = 'x', long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub wealth: f64,

    /// Shared terminal mean for the same-mean section; the precommitment
    /// optimum's own mean when omitted
    #[arg(long, allow_negative_numbers = true)]
    pub mean: Option<f64>,
}

pub fn compare(out: &mut dyn Write, cfg: &ParsedConfig, args: &CompareArgs) -> Result<()> {
    let sc = cfg.scenario()?;
    let theta = Preference::new(args.theta.unwrap_or(cfg.theta))?.theta;
    let t = args.time;
    let x = args.wealth;
    let horizon = sc.market.horizon;

    let tc = tc_moments(&sc, theta, t, x, horizon)?;
    let pre = pre_moments(&sc, theta, t, x)?;
    let tc_j = tc.mean - 0.5 * theta * tc.variance;
    let pre_j = pre.mean - 0.5 * theta * pre.variance;
    let (tc_pi, tc_l) = tc_control(&sc, theta, t)?;
    let (pre_pi, pre_l) = pre_control(&sc, theta, t, x, t, x)?;

    writeln!(out, "comparison at t = {t}, x = {x}, theta = {theta}")?;
    writeln!(
        out,
        "{:<20} {:<24} {:<24} {:<24}",
        "quantity", "time-consistent", "precommitment", "pre - tc"
    )?;
    let mut row = |name: &str, a: f64, b: f64| {
        writeln!(out, "{name:<20} {a:<24} {b:<24} {:<24}", b - a)
    };
    row("terminal mean", tc.mean, pre.mean)?;
    row("terminal variance", tc.variance, pre.variance)?;
    row("objective", tc_j, pre_j)?;
    row("pi at start", tc_pi, pre_pi)?;
    row("L at start", tc_l, pre_l)?;

    // Same-mean section: both families pinned to one terminal mean.
    let benchmark = x * (sc.market.r * (horizon - t)).exp();
    let shared_mean = match args.mean {
        Some(mean) => Some(mean),
        None => {
            let mean = optimal_mean(&sc, theta, t, x)?;
            (mean > benchmark).then_some(mean)
        }
    };
    match shared_mean {
        // An explicitly requested mean is validated by target_controls.
        Some(mean) => {
            let tcs = target_controls(&sc, mean, t, x)?;
            writeln!(out, "same-mean comparison at mean = {mean}")?;
            writeln!(
                out,
                "  pi: tc = {}, pre = {}  (ratio {})",
                tcs.tc_pi,
                tcs.pre_pi,
                tcs.pre_pi / tcs.tc_pi
            )?;
            writeln!(
                out,
                "  L:  tc = {}, pre = {}  (ratio {})",
                tcs.tc_l,
                tcs.pre_l,
                tcs.pre_l / tcs.tc_l
            )?;
            writeln!(
                out,
                "  implied weights: theta_tc = {}, theta_pre = {}",
                tcs.theta_tc, tcs.theta_pre
            )?;
        }
        None => writeln!(
            out,
            "same-mean comparison skipped: only the risk-free mean is attainable"
        )?,
    }

    let solos = special_cases(&sc, theta, t, x)?;
    writeln!(out, "single-instrument shortfalls (time-consistent)")?;
    writeln!(
        out,
        "  no-investment: L = {}, value = {}, loss = {}",
        solos.no_investment.control, solos.no_investment.value, solos.no_investment.loss
    )?;
    writeln!(
        out,
        "  no-insurance:  pi = {}, value = {}, loss = {}",
        solos.no_insurance.control, solos.no_insurance.value, solos.no_insurance.loss
    )?;
    Ok(())
}
