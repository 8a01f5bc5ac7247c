//! Scenario config files: flat `key = value` text, one pair per line,
//! `#` comments. Parsing is strict — unknown keys, duplicates, and malformed
//! lines are errors with line numbers.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{SystemConfig, DEFAULT_DT};
use crate::propagator::TimeGrid;

/// A parsed scenario: system parameters plus the integration grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemConfig,
    pub grid: TimeGrid,
}

const SYSTEM_KEYS: &[&str] = &[
    "n_levels",
    "omega_p_peak",
    "omega_s_peak",
    "omega_c",
    "omega_d",
    "pulse_width",
    "half_delay",
    "delta_1",
    "delta_2",
    "delta_3",
    "delta_4",
];

const GRID_KEYS: &[&str] = &["grid.t_start", "grid.t_end", "grid.dt"];

const REQUIRED_KEYS: &[&str] = &[
    "n_levels",
    "omega_p_peak",
    "omega_s_peak",
    "omega_c",
    "pulse_width",
    "half_delay",
    "delta_1",
    "delta_2",
];

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let mut seen: HashMap<String, (usize, f64)> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if !SYSTEM_KEYS.contains(&key) && !GRID_KEYS.contains(&key) {
            return Err(Error::UnknownKey { line: line_no, key: key.to_string() });
        }
        let parsed: f64 = value.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("`{value}` is not a number for key `{key}`"),
        })?;
        if let Some((first_line, _)) = seen.get(key) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate key `{key}` (first set on line {first_line})"),
            });
        }
        seen.insert(key.to_string(), (line_no, parsed));
    }

    for key in REQUIRED_KEYS {
        if !seen.contains_key(*key) {
            return Err(Error::MissingKey { key });
        }
    }

    let get = |key: &str| seen.get(key).map(|&(_, v)| v);
    let n_levels_raw = get("n_levels").expect("required");
    if n_levels_raw.fract() != 0.0 {
        return Err(Error::InvalidConfig {
            field: "n_levels",
            message: format!("must be an integer, got {n_levels_raw}"),
        });
    }
    let system = SystemConfig {
        n_levels: n_levels_raw as usize,
        omega_p_peak: get("omega_p_peak").expect("required"),
        omega_s_peak: get("omega_s_peak").expect("required"),
        omega_c: get("omega_c").expect("required"),
        omega_d: get("omega_d").unwrap_or(0.0),
        pulse_width: get("pulse_width").expect("required"),
        half_delay: get("half_delay").expect("required"),
        delta_1: get("delta_1").expect("required"),
        delta_2: get("delta_2").expect("required"),
        delta_3: get("delta_3").unwrap_or(0.0),
        delta_4: get("delta_4").unwrap_or(0.0),
    };
    system.validate()?;

    let default_grid = system.default_grid();
    let grid = TimeGrid {
        t_start: get("grid.t_start").unwrap_or(default_grid.t_start),
        t_end: get("grid.t_end").unwrap_or(default_grid.t_end),
        dt: get("grid.dt").unwrap_or(DEFAULT_DT),
    };
    grid.validate()?;

    Ok(RunConfig { system, grid })
}

/// Apply a single `key=value` override using the config-file key names.
pub fn apply_override(cfg: &mut RunConfig, spec: &str) -> Result<()> {
    let Some((key, value)) = spec.split_once('=') else {
        return Err(Error::Parse {
            line: 0,
            message: format!("override must look like key=value, got `{spec}`"),
        });
    };
    let key = key.trim();
    let value: f64 = value.trim().parse().map_err(|_| Error::Parse {
        line: 0,
        message: format!("override value for `{key}` is not a number"),
    })?;
    match key {
        "n_levels" => cfg.system.n_levels = value as usize,
        "omega_p_peak" => cfg.system.omega_p_peak = value,
        "omega_s_peak" => cfg.system.omega_s_peak = value,
        "omega_c" => cfg.system.omega_c = value,
        "omega_d" => cfg.system.omega_d = value,
        "pulse_width" => cfg.system.pulse_width = value,
        "half_delay" => cfg.system.half_delay = value,
        "delta_1" => cfg.system.delta_1 = value,
        "delta_2" => cfg.system.delta_2 = value,
        "delta_3" => cfg.system.delta_3 = value,
        "delta_4" => cfg.system.delta_4 = value,
        "grid.t_start" => cfg.grid.t_start = value,
        "grid.t_end" => cfg.grid.t_end = value,
        "grid.dt" => cfg.grid.dt = value,
        other => {
            return Err(Error::UnknownKey { line: 0, key: other.to_string() });
        }
    }
    cfg.system.validate()?;
    cfg.grid.validate()
}

/// Render a config back to the file format (used by `scenario run --out`-style
/// tooling and tests).
pub fn format_config(cfg: &RunConfig) -> String {
    let s = &cfg.system;
    format!(
        "n_levels = {}\n\
         omega_p_peak = {}\n\
         omega_s_peak = {}\n\
         omega_c = {}\n\
         omega_d = {}\n\
         pulse_width = {}\n\
         half_delay = {}\n\
         delta_1 = {}\n\
         delta_2 = {}\n\
         delta_3 = {}\n\
         delta_4 = {}\n\
         grid.t_start = {}\n\
         grid.t_end = {}\n\
         grid.dt = {}\n",
        s.n_levels,
        s.omega_p_peak,
        s.omega_s_peak,
        s.omega_c,
        s.omega_d,
        s.pulse_width,
        s.half_delay,
        s.delta_1,
        s.delta_2,
        s.delta_3,
        s.delta_4,
        cfg.grid.t_start,
        cfg.grid.t_end,
        cfg.grid.dt,
    )
}
