//! Run configuration and its flat `key = value` file format.
//!
//! ```text
//! # comments start with '#' or ';'
//! command = sweep
//! hartmann = 5
//! z_from = 0
//! z_to = 5
//! steps = 351
//! ```
//!
//! Unknown keys are rejected. Command-line flags override file values.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::params::FlowParams;
use crate::presets::FigurePreset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    CsvPlot,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "csv+plot" => Ok(Self::CsvPlot),
            other => Err(Error::config(
                "format",
                format!("`{other}` is not csv or csv+plot"),
            )),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::CsvPlot => "csv+plot",
        }
    }

    pub fn with_plot(self) -> bool {
        self == Self::CsvPlot
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Geometry {
        samples: usize,
    },
    Profile {
        z: f64,
        samples: usize,
    },
    Sweep {
        z_from: f64,
        z_to: f64,
        steps: usize,
    },
    Validate {
        grid_points: usize,
    },
    Figures {
        presets: Vec<&'static FigurePreset>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Geometry { .. } => "geometry",
            Command::Profile { .. } => "profile",
            Command::Sweep { .. } => "sweep",
            Command::Validate { .. } => "validate",
            Command::Figures { .. } => "figures",
        }
    }
}

pub const DEFAULT_GEOMETRY_SAMPLES: usize = 351;
pub const DEFAULT_PROFILE_SAMPLES: usize = 101;
pub const DEFAULT_SWEEP_STEPS: usize = 351;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: FlowParams,
    pub command: Command,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
}

/// Raw key-value pairs, in file order, before interpretation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    entries: Vec<(String, String)>,
}

const KEYS: &[&str] = &[
    "command",
    "alpha",
    "hematocrit",
    "beta",
    "m",
    "hartmann",
    "permeability",
    "l",
    "d",
    "length",
    "severity",
    "tol",
    "n_max",
    "z",
    "z_from",
    "z_to",
    "steps",
    "samples",
    "grid_points",
    "preset",
    "out",
    "format",
];

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut settings = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if line.starts_with('[') && line.ends_with(']') {
                // section headers carry no meaning in the flat format
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(
                    format!("line {}", lineno + 1),
                    format!("expected key = value, got `{line}`"),
                )
            })?;
            settings.set(key.trim().replace('-', "_"), value.trim())?;
        }
        Ok(settings)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Sets or replaces a value. Unknown keys are rejected.
    pub fn set(&mut self, key: impl Into<String>, value: impl Into<String>) -> Result<()> {
        let key = key.into();
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::config(key, "unknown key"));
        }
        let value = value.into();
        match self.entries.iter_mut().find(|(k, _)| *k == key) {
            Some(entry) => entry.1 = value,
            None => self.entries.push((key, value)),
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// A copy with the given keys removed.
    pub fn without(mut self, keys: &[&str]) -> Self {
        self.entries.retain(|(k, _)| !keys.contains(&k.as_str()));
        self
    }

    fn number<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::config(key, format!("`{v}`: {e}")))
            })
            .transpose()
    }

    fn require<T: std::str::FromStr>(&self, key: &str, command: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.number(key)?
            .ok_or_else(|| Error::config(key, format!("required by `{command}`")))
    }

    /// Interprets the settings. `default_out` is used when no `out` key is set.
    pub fn into_config(self, default_out: &Path) -> Result<RunConfig> {
        let d = FlowParams::default();
        let params = FlowParams {
            alpha: self.number("alpha")?.unwrap_or(d.alpha),
            hematocrit: self.number("hematocrit")?.unwrap_or(d.hematocrit),
            beta: self.number("beta")?.unwrap_or(d.beta),
            m: self.number("m")?.unwrap_or(d.m),
            hartmann: self.number("hartmann")?.unwrap_or(d.hartmann),
            permeability: self.number("permeability")?.unwrap_or(d.permeability),
            throat_spacing: self.number("l")?.unwrap_or(d.throat_spacing),
            onset: self.number("d")?.unwrap_or(d.onset),
            length: self.number("length")?.unwrap_or(d.length),
            severity: self.number("severity")?.unwrap_or(d.severity),
            tol: self.number("tol")?.unwrap_or(d.tol),
            n_max: self.number("n_max")?.unwrap_or(d.n_max),
        };
        params.validate().map_err(|e| match e {
            Error::InvalidParameter { name, reason } => Error::config(name, reason),
            other => other,
        })?;

        let name = self
            .get("command")
            .ok_or_else(|| Error::config("command", "no command given"))?;
        let allowed: &[&str] = match name {
            "geometry" => &["samples"],
            "profile" => &["z", "samples"],
            "sweep" => &["z_from", "z_to", "steps"],
            "validate" => &["grid_points"],
            "figures" => &["preset"],
            other => {
                return Err(Error::config(
                    "command",
                    format!("unknown command `{other}`"),
                ))
            }
        };
        for key in [
            "z",
            "z_from",
            "z_to",
            "steps",
            "samples",
            "grid_points",
            "preset",
        ] {
            if self.get(key).is_some() && !allowed.contains(&key) {
                return Err(Error::config(key, format!("not accepted by `{name}`")));
            }
        }
        let command = match name {
            "geometry" => Command::Geometry {
                samples: self.number("samples")?.unwrap_or(DEFAULT_GEOMETRY_SAMPLES),
            },
            "profile" => Command::Profile {
                z: self.require("z", name)?,
                samples: self.number("samples")?.unwrap_or(DEFAULT_PROFILE_SAMPLES),
            },
            "sweep" => Command::Sweep {
                z_from: self.number("z_from")?.unwrap_or(0.0),
                z_to: self.number("z_to")?.unwrap_or(params.length),
                steps: self.number("steps")?.unwrap_or(DEFAULT_SWEEP_STEPS),
            },
            "validate" => Command::Validate {
                grid_points: self
                    .number("grid_points")?
                    .unwrap_or(crate::validation::ORACLE_POINTS),
            },
            _ => {
                let spec = self.get("preset").unwrap_or("all");
                let presets = if spec == "all" {
                    crate::presets::PRESETS.iter().collect()
                } else {
                    spec.split(',')
                        .map(|s| s.trim().parse::<&'static FigurePreset>())
                        .collect::<Result<Vec<_>>>()?
                };
                Command::Figures { presets }
            }
        };
        let config = RunConfig {
            params,
            command,
            out_dir: self
                .get("out")
                .map(PathBuf::from)
                .unwrap_or_else(|| default_out.to_path_buf()),
            format: self
                .get("format")
                .map(OutputFormat::parse)
                .transpose()?
                .unwrap_or_default(),
        };
        config.check()?;
        Ok(config)
    }
}

impl RunConfig {
    fn check(&self) -> Result<()> {
        let length = self.params.length;
        match &self.command {
            Command::Geometry { samples } if *samples < 2 => {
                Err(Error::config("samples", "need at least 2"))
            }
            Command::Profile { z, samples } => {
                if !(0.0..=length).contains(z) {
                    Err(Error::config("z", format!("{z} outside [0, {length}]")))
                } else if *samples < 2 {
                    Err(Error::config("samples", "need at least 2"))
                } else {
                    Ok(())
                }
            }
            Command::Sweep {
                z_from,
                z_to,
                steps,
            } => {
                if !(0.0..=length).contains(z_from) {
                    Err(Error::config(
                        "z_from",
                        format!("{z_from} outside [0, {length}]"),
                    ))
                } else if !(0.0..=length).contains(z_to) || z_to < z_from {
                    Err(Error::config(
                        "z_to",
                        format!("{z_to} outside [{z_from}, {length}]"),
                    ))
                } else if *steps < 2 {
                    Err(Error::config("steps", "need at least 2"))
                } else {
                    Ok(())
                }
            }
            Command::Validate { grid_points } => {
                if *grid_points < crate::fd::MIN_POINTS || grid_points % 2 == 0 {
                    Err(Error::config("grid_points", "must be odd and at least 33"))
                } else {
                    Ok(())
                }
            }
            Command::Figures { presets } if presets.is_empty() => {
                Err(Error::config("preset", "no presets selected"))
            }
            _ => Ok(()),
        }
    }

    /// Serialises the configuration in the file format; parsing the result
    /// reproduces this configuration exactly.
    pub fn to_config_string(&self) -> String {
        let p = &self.params;
        let mut s = String::new();
        let _ = writeln!(s, "command = {}", self.command.name());
        match &self.command {
            Command::Geometry { samples } => {
                let _ = writeln!(s, "samples = {samples}");
            }
            Command::Profile { z, samples } => {
                let _ = writeln!(s, "z = {z}");
                let _ = writeln!(s, "samples = {samples}");
            }
            Command::Sweep {
                z_from,
                z_to,
                steps,
            } => {
                let _ = writeln!(s, "z_from = {z_from}");
                let _ = writeln!(s, "z_to = {z_to}");
                let _ = writeln!(s, "steps = {steps}");
            }
            Command::Validate { grid_points } => {
                let _ = writeln!(s, "grid_points = {grid_points}");
            }
            Command::Figures { presets } => {
                let names: Vec<String> = presets.iter().map(|p| p.name()).collect();
                let _ = writeln!(s, "preset = {}", names.join(","));
            }
        }
        for (k, v) in [
            ("alpha", p.alpha),
            ("hematocrit", p.hematocrit),
            ("beta", p.beta),
            ("hartmann", p.hartmann),
            ("permeability", p.permeability),
            ("l", p.throat_spacing),
            ("d", p.onset),
            ("length", p.length),
            ("severity", p.severity),
            ("tol", p.tol),
        ] {
            let _ = writeln!(s, "{k} = {v:?}");
        }
        let _ = writeln!(s, "m = {}", p.m);
        let _ = writeln!(s, "n_max = {}", p.n_max);
        let _ = writeln!(s, "out = {}", self.out_dir.display());
        let _ = writeln!(s, "format = {}", self.format.as_str());
        s
    }
}
