//! Flat `key = value` scenario files.
//!
//! ```text
//! # baseline calibration
//! r      = 0.01
//! mu     = 0.05
//! sigma  = 0.25
//! alpha  = 0.08
//! beta   = 0.1
//! rho    = 0.0
//! lambda = 0.1
//! p      = 0.15
//! T      = 1.0
//! theta  = 2.0
//!
//! jump.kind   = constant
//! jump.param1 = 0.3
//! ```
//!
//! `#` starts a comment (full-line or trailing), blank lines are ignored,
//! every key is required except `jump.param2`, which is required for
//! lognormal severities and rejected otherwise. Unknown and duplicate
//! keys are errors. Numbers use `.` as the decimal separator regardless
//! of locale.
//!
//! Parsing is purely syntactic; domain validation happens when the
//! parsed values are turned into a [`Scenario`] and a preference.

use std::collections::HashMap;
use std::path::Path;

use crate::model::{JumpDistribution, MarketParams, Scenario};
use crate::{Error, Result};

/// All scalar keys, in canonical order.
const SCALAR_KEYS: [&str; 10] = [
    "r", "mu", "sigma", "alpha", "beta", "rho", "lambda", "p", "T", "theta",
];

/// Raw parsed values; not yet validated against the model's domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParsedConfig {
    pub market: MarketParams,
    pub jump: JumpDistribution,
    pub theta: f64,
}

impl ParsedConfig {
    /// The baseline calibration as a config, for callers that allow the
    /// scenario file to be omitted.
    pub fn baseline() -> Self {
        Self {
            market: MarketParams::default(),
            jump: JumpDistribution::Constant { gamma: 0.3 },
            theta: 2.0,
        }
    }

    /// Validates and derives. Domain violations surface here, not during
    /// parsing.
    pub fn scenario(&self) -> Result<Scenario> {
        Scenario::new(self.market, self.jump)
    }
}

/// Parses config text. Errors carry 1-based line numbers where a line is
/// at fault.
pub fn parse_config(text: &str) -> Result<ParsedConfig> {
    // key -> (raw value, line number)
    let mut scalars: HashMap<&str, (f64, usize)> = HashMap::new();
    let mut jump_kind: Option<(String, usize)> = None;
    let mut jump_param1: Option<(f64, usize)> = None;
    let mut jump_param2: Option<(f64, usize)> = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::ConfigLine {
                line,
                msg: format!("expected `key = value`, got `{content}`"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(Error::ConfigLine {
                line,
                msg: format!("empty value for key `{key}`"),
            });
        }

        let parse_number = || -> Result<f64> {
            value.parse::<f64>().map_err(|_| Error::ConfigLine {
                line,
                msg: format!("invalid number `{value}` for key `{key}`"),
            })
        };

        if key == "jump.kind" {
            if jump_kind.is_some() {
                return Err(Error::ConfigLine {
                    line,
                    msg: "duplicate key `jump.kind`".to_string(),
                });
            }
            let kind = value.to_ascii_lowercase();
            if !["constant", "exponential", "lognormal"].contains(&kind.as_str()) {
                return Err(Error::ConfigLine {
                    line,
                    msg: format!(
                        "unknown jump kind `{value}` (expected constant, exponential, \
                         or lognormal)"
                    ),
                });
            }
            jump_kind = Some((kind, line));
        } else if key == "jump.param1" {
            if jump_param1.is_some() {
                return Err(Error::ConfigLine {
                    line,
                    msg: "duplicate key `jump.param1`".to_string(),
                });
            }
            jump_param1 = Some((parse_number()?, line));
        } else if key == "jump.param2" {
            if jump_param2.is_some() {
                return Err(Error::ConfigLine {
                    line,
                    msg: "duplicate key `jump.param2`".to_string(),
                });
            }
            jump_param2 = Some((parse_number()?, line));
        } else if let Some(canonical) = SCALAR_KEYS.iter().find(|&&k| k == key) {
            if scalars.contains_key(canonical) {
                return Err(Error::ConfigLine {
                    line,
                    msg: format!("duplicate key `{key}`"),
                });
            }
            scalars.insert(canonical, (parse_number()?, line));
        } else {
            return Err(Error::ConfigLine {
                line,
                msg: format!("unknown key `{key}`"),
            });
        }
    }

    let scalar = |key: &str| -> Result<f64> {
        scalars
            .get(key)
            .map(|&(v, _)| v)
            .ok_or_else(|| Error::Config {
                msg: format!("missing key `{key}`"),
            })
    };

    let market = MarketParams {
        r: scalar("r")?,
        mu: scalar("mu")?,
        sigma: scalar("sigma")?,
        alpha: scalar("alpha")?,
        beta: scalar("beta")?,
        rho: scalar("rho")?,
        lambda: scalar("lambda")?,
        p: scalar("p")?,
        horizon: scalar("T")?,
    };
    let theta = scalar("theta")?;

    let (kind, _) = jump_kind.ok_or_else(|| Error::Config {
        msg: "missing key `jump.kind`".to_string(),
    })?;
    let (param1, _) = jump_param1.ok_or_else(|| Error::Config {
        msg: "missing key `jump.param1`".to_string(),
    })?;
    let jump = match kind.as_str() {
        "constant" => {
            if let Some((_, line)) = jump_param2 {
                return Err(Error::ConfigLine {
                    line,
                    msg: "`jump.param2` is only valid for lognormal severities".to_string(),
                });
            }
            JumpDistribution::Constant { gamma: param1 }
        }
        "exponential" => {
            if let Some((_, line)) = jump_param2 {
                return Err(Error::ConfigLine {
                    line,
                    msg: "`jump.param2` is only valid for lognormal severities".to_string(),
                });
            }
            JumpDistribution::Exponential { mean: param1 }
        }
        "lognormal" => {
            let (param2, _) = jump_param2.ok_or_else(|| Error::Config {
                msg: "missing key `jump.param2` (lognormal severities need a log-volatility)"
                    .to_string(),
            })?;
            JumpDistribution::Lognormal {
                mu_log: param1,
                sigma_log: param2,
            }
        }
        _ => unreachable!("kind validated during parsing"),
    };

    Ok(ParsedConfig {
        market,
        jump,
        theta,
    })
}

/// Reads and parses a config file.
pub fn load_config(path: &Path) -> Result<ParsedConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

// ============================================================================
// Tests
// ============================================================================

#[cfg(test)]
mod tests {
    use super::*;

    const BASELINE: &str = "\
# baseline calibration
r      = 0.01
mu     = 0.05   # drift
sigma  = 0.25
alpha  = 0.08
beta   = 0.1
rho    = 0.0
lambda = 0.1
p      = 0.15
T      = 1.0
theta  = 2.0

jump.kind   = constant
jump.param1 = 0.3
";

    #[test]
    fn parses_the_baseline() {
        let parsed = parse_config(BASELINE).unwrap();
        assert_eq!(parsed.market, MarketParams::default());
        assert_eq!(parsed.jump, JumpDistribution::Constant { gamma: 0.3 });
        assert_eq!(parsed.theta, 2.0);
        assert_eq!(parsed, ParsedConfig::baseline());
        assert!(parsed.scenario().is_ok());
    }

    #[test]
    fn jump_kinds() {
        let exponential = BASELINE
            .replace("jump.kind   = constant", "jump.kind = exponential")
            .replace("jump.param1 = 0.3", "jump.param1 = 0.2");
        assert_eq!(
            parse_config(&exponential).unwrap().jump,
            JumpDistribution::Exponential { mean: 0.2 }
        );

        let lognormal = BASELINE
            .replace("jump.kind   = constant", "jump.kind = lognormal")
            .replace("jump.param1 = 0.3", "jump.param1 = -1.5\njump.param2 = 0.5");
        assert_eq!(
            parse_config(&lognormal).unwrap().jump,
            JumpDistribution::Lognormal {
                mu_log: -1.5,
                sigma_log: 0.5
            }
        );
    }

    #[test]
    fn unknown_key_reports_the_line() {
        let text = format!("{BASELINE}volatility = 0.3\n");
        let expected_line = text.lines().count();
        match parse_config(&text) {
            Err(Error::ConfigLine { line, msg }) => {
                assert_eq!(line, expected_line);
                assert!(msg.contains("volatility"), "{msg}");
            }
            other => panic!("expected a line error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_key_reports_the_line() {
        let text = format!("{BASELINE}mu = 0.06\n");
        match parse_config(&text) {
            Err(Error::ConfigLine { line, msg }) => {
                assert_eq!(line, text.lines().count());
                assert!(msg.contains("duplicate") && msg.contains("mu"), "{msg}");
            }
            other => panic!("expected a line error, got {other:?}"),
        }
    }

    #[test]
    fn missing_key_is_named() {
        let text = BASELINE.replace("sigma  = 0.25\n", "");
        match parse_config(&text) {
            Err(Error::Config { msg }) => assert!(msg.contains("`sigma`"), "{msg}"),
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_lines() {
        let text = BASELINE.replace("rho    = 0.0", "rho 0.0");
        assert!(matches!(
            parse_config(&text),
            Err(Error::ConfigLine { line: 7, .. })
        ));

        let text = BASELINE.replace("rho    = 0.0", "rho = zero");
        match parse_config(&text) {
            Err(Error::ConfigLine { line: 7, msg }) => {
                assert!(msg.contains("zero"), "{msg}")
            }
            other => panic!("expected a line error, got {other:?}"),
        }

        let text = BASELINE.replace("rho    = 0.0", "rho =   # oops");
        assert!(matches!(
            parse_config(&text),
            Err(Error::ConfigLine { line: 7, .. })
        ));
    }

    #[test]
    fn param2_rules() {
        let extra = format!("{BASELINE}jump.param2 = 0.5\n");
        match parse_config(&extra) {
            Err(Error::ConfigLine { msg, .. }) => {
                assert!(msg.contains("lognormal"), "{msg}")
            }
            other => panic!("expected a line error, got {other:?}"),
        }

        let lognormal_missing =
            BASELINE.replace("jump.kind   = constant", "jump.kind = lognormal");
        match parse_config(&lognormal_missing) {
            Err(Error::Config { msg }) => assert!(msg.contains("jump.param2"), "{msg}"),
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn domain_violations_surface_at_scenario_construction() {
        // Parsing accepts sigma = 0; building the scenario rejects it.
        let text = BASELINE.replace("sigma  = 0.25", "sigma = 0.0");
        let parsed = parse_config(&text).unwrap();
        assert!(matches!(parsed.scenario(), Err(Error::Domain(_))));
    }

    #[test]
    fn load_reports_io_errors() {
        let err = load_config(Path::new("/nonexistent/scenario.conf")).unwrap_err();
        assert!(matches!(err, Error::Io(_)));
    }
}
