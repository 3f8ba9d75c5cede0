//! Experiment configuration: a flat `key = value` file with bracketed
//! section headers, parseable without any dependencies.
//!
//! ```text
//! [measure]
//! family = laguerre        # laguerre | jacobi | freud
//! alpha = 0.0              # jacobi also takes beta; freud takes 2 or 4
//!
//! [product]
//! c = left                 # left | right | origin | a number
//! masses = 1.0, 1.0
//!
//! [run]
//! n_list = 25, 50, 100, 200
//! n_max = 200              # optional, defaults to max(n_list)
//! z_max = 2.0
//! z_points = 41
//! k_max = 5                # zeros command only
//! output_dir = out
//!
//! [tolerances]             # optional per-check overrides for `verify`
//! orthonormality = 1e-8
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use sobolev_mh_core::measures::MeasureSpec;

/// Degree bound past which runs are refused (documented error growth cap).
pub const MAX_DEGREE: usize = 256;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

/// Where the mass point sits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PointSpec {
    Left,
    Right,
    Origin,
    Value(f64),
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub measure: MeasureSpec<f64>,
    pub point: PointSpec,
    pub masses: Vec<f64>,
    pub n_list: Vec<usize>,
    pub n_max: usize,
    pub z_max: f64,
    pub z_points: usize,
    pub k_max: usize,
    pub output_dir: PathBuf,
    pub tolerances: BTreeMap<String, f64>,
}

impl ExperimentConfig {
    /// The concrete mass point.
    pub fn c(&self) -> Result<f64, ConfigError> {
        match self.point {
            PointSpec::Left => {
                let c = self.measure.support_inf();
                if !c.is_finite() {
                    return Err(ConfigError(
                        "the support has no finite left endpoint".into(),
                    ));
                }
                Ok(c)
            }
            PointSpec::Right => {
                let c = self.measure.support_sup();
                if !c.is_finite() {
                    return Err(ConfigError(
                        "the support has no finite right endpoint".into(),
                    ));
                }
                Ok(c)
            }
            PointSpec::Origin => {
                if !self.measure.is_symmetric() {
                    return Err(ConfigError(
                        "c = origin requires a symmetric measure".into(),
                    ));
                }
                Ok(0.0)
            }
            PointSpec::Value(v) => Ok(v),
        }
    }

    /// Whether the run goes through the symmetric (half-line) machinery.
    pub fn symmetric_origin(&self) -> bool {
        self.measure.is_symmetric() && matches!(self.c(), Ok(c) if c == 0.0)
    }

    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }
}

fn parse_sections(text: &str) -> Result<BTreeMap<String, BTreeMap<String, String>>, ConfigError> {
    let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    let mut current = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if !line.ends_with(']') {
                return Err(ConfigError(format!(
                    "line {}: unterminated section header",
                    lineno + 1
                )));
            }
            current = line[1..line.len() - 1].trim().to_string();
            sections.entry(current.clone()).or_default();
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(ConfigError(format!(
                "line {}: expected key = value",
                lineno + 1
            )));
        };
        if current.is_empty() {
            return Err(ConfigError(format!(
                "line {}: key outside any [section]",
                lineno + 1
            )));
        }
        let key = line[..eq].trim().to_string();
        let value = line[eq + 1..].trim().to_string();
        sections.get_mut(&current).unwrap().insert(key, value);
    }
    Ok(sections)
}

fn parse_f64(section: &str, key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .map_err(|_| ConfigError(format!("[{section}] {key}: not a number: {value:?}")))
}

fn parse_list_f64(section: &str, key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|item| parse_f64(section, key, item.trim()))
        .collect()
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let sections = parse_sections(text)?;
    let get = |section: &str, key: &str| -> Option<&String> {
        sections.get(section).and_then(|s| s.get(key))
    };
    let require = |section: &str, key: &str| -> Result<&String, ConfigError> {
        get(section, key).ok_or_else(|| ConfigError(format!("missing [{section}] {key}")))
    };

    let family = require("measure", "family")?.to_ascii_lowercase();
    let measure = match family.as_str() {
        "laguerre" => {
            let alpha = parse_f64("measure", "alpha", require("measure", "alpha")?)?;
            MeasureSpec::laguerre(alpha)
        }
        "jacobi" => {
            let alpha = parse_f64("measure", "alpha", require("measure", "alpha")?)?;
            let beta = parse_f64("measure", "beta", require("measure", "beta")?)?;
            MeasureSpec::jacobi(alpha, beta)
        }
        "freud" => {
            let alpha = parse_f64("measure", "alpha", require("measure", "alpha")?)?;
            if alpha != 2.0 && alpha != 4.0 {
                return Err(ConfigError("freud alpha must be 2 or 4".into()));
            }
            MeasureSpec::freud(alpha as u32)
        }
        other => return Err(ConfigError(format!("unknown family {other:?}"))),
    }
    .map_err(|e| ConfigError(e.to_string()))?;

    let point = match require("product", "c")?.to_ascii_lowercase().as_str() {
        "left" => PointSpec::Left,
        "right" => PointSpec::Right,
        "origin" => PointSpec::Origin,
        other => PointSpec::Value(parse_f64("product", "c", other)?),
    };

    let mut masses = parse_list_f64("product", "masses", require("product", "masses")?)?;
    if masses.is_empty() {
        masses.push(0.0);
    }
    if let Some(bad) = masses.iter().find(|m| !(**m >= 0.0) || !m.is_finite()) {
        return Err(ConfigError(format!("masses must be nonnegative, got {bad}")));
    }

    let n_list: Vec<usize> = require("run", "n_list")?
        .split(',')
        .map(|item| {
            item.trim()
                .parse::<usize>()
                .map_err(|_| ConfigError(format!("n_list entry not an integer: {item:?}")))
        })
        .collect::<Result<_, _>>()?;
    if n_list.is_empty() {
        return Err(ConfigError("n_list must not be empty".into()));
    }
    if !n_list.windows(2).all(|w| w[0] < w[1]) {
        return Err(ConfigError("n_list must be strictly ascending".into()));
    }

    let n_max = match get("run", "n_max") {
        Some(v) => v
            .parse::<usize>()
            .map_err(|_| ConfigError(format!("n_max not an integer: {v:?}")))?,
        None => *n_list.last().unwrap(),
    };
    if n_max < *n_list.last().unwrap() {
        return Err(ConfigError("n_max must cover the largest n_list entry".into()));
    }

    let z_max = match get("run", "z_max") {
        Some(v) => parse_f64("run", "z_max", v)?,
        None => 2.0,
    };
    let z_points = match get("run", "z_points") {
        Some(v) => v
            .parse::<usize>()
            .map_err(|_| ConfigError(format!("z_points not an integer: {v:?}")))?,
        None => 41,
    };
    if z_points < 2 {
        return Err(ConfigError("z_points must be at least 2".into()));
    }
    let k_max = match get("run", "k_max") {
        Some(v) => v
            .parse::<usize>()
            .map_err(|_| ConfigError(format!("k_max not an integer: {v:?}")))?,
        None => 5,
    };

    let output_dir = PathBuf::from(
        get("run", "output_dir")
            .cloned()
            .unwrap_or_else(|| "out".to_string()),
    );

    let mut tolerances = BTreeMap::new();
    if let Some(tols) = sections.get("tolerances") {
        for (k, v) in tols {
            tolerances.insert(k.clone(), parse_f64("tolerances", k, v)?);
        }
    }

    Ok(ExperimentConfig {
        measure,
        point,
        masses,
        n_list,
        n_max,
        z_max,
        z_points,
        k_max,
        output_dir,
        tolerances,
    })
}
