//! Run configuration: per-command key schema, flat `key = value` files and the
//! canonical serialization that is hashed into every output.
//!
//! Canonical form: one `key=value` line per entry, `command` first, the rest
//! sorted by key. Values are normalized on entry (floats printed with Rust's
//! shortest round-trip formatting, lists comma-separated without spaces), so
//! parsing a canonical serialization reproduces it byte for byte.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use otto_core::{MediumKind, Regime, U_MAX};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command {
    Occupation,
    Cycle,
    Figure,
    Optimize,
    Efftemp,
    Relax,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Occupation,
        Command::Cycle,
        Command::Figure,
        Command::Optimize,
        Command::Efftemp,
        Command::Relax,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Occupation => "occupation",
            Command::Cycle => "cycle",
            Command::Figure => "figure",
            Command::Optimize => "optimize",
            Command::Efftemp => "efftemp",
            Command::Relax => "relax",
        }
    }

    pub fn schema(self) -> &'static [Key] {
        match self {
            Command::Occupation => OCCUPATION,
            Command::Cycle => CYCLE,
            Command::Figure => FIGURE,
            Command::Optimize => OPTIMIZE,
            Command::Efftemp => EFFTEMP,
            Command::Relax => RELAX,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Finite float.
    Float,
    /// Float > 0.
    Positive,
    /// Velocity in `[0, U_MAX]`.
    Velocity,
    /// Non-negative integer.
    Count,
    /// Comma-separated floats, possibly empty.
    FloatList,
    /// Comma-separated velocities.
    VelocityList,
    Medium,
    Regime,
    /// Figure number 1 to 4.
    Figure,
    /// `ground` or `steady`.
    Initial,
}

#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub default: &'static str,
    pub help: &'static str,
}

const fn key(name: &'static str, kind: Kind, default: &'static str, help: &'static str) -> Key {
    Key {
        name,
        kind,
        default,
        help,
    }
}

const UMAX: Key = key("umax", Kind::Velocity, "0.999", "largest accepted bath velocity");

const OCCUPATION: &[Key] = &[
    key("x", Kind::FloatList, "", "explicit gaps beta*omega; overrides the log grid"),
    key("x_min", Kind::Positive, "0.001", "log grid start"),
    key("x_max", Kind::Positive, "30", "log grid end"),
    key("x_points", Kind::Count, "50", "log grid size"),
    key("u", Kind::VelocityList, "0,0.1,0.5,0.9", "bath velocities"),
    key("tol", Kind::Positive, "1e-12", "absolute tolerance of the band-average oracle"),
    UMAX,
];

const CYCLE: &[Key] = &[
    key("medium", Kind::Medium, "oscillator", "qubit or oscillator"),
    key("omega_c", Kind::Positive, "1", "cold frequency"),
    key("omega_h", Kind::Positive, "2", "hot frequency"),
    key("beta_c", Kind::Positive, "2", "cold inverse temperature"),
    key("beta_h", Kind::Positive, "0.5", "hot inverse temperature"),
    key("u", Kind::Velocity, "0.5", "hot bath velocity"),
    UMAX,
];

// Figure grids are reconstructions; the source figures give only the families.
const FIGURE: &[Key] = &[
    key("which", Kind::Figure, "1", "figure 1-4 (1,2 qubit; 3,4 oscillator)"),
    key("eta_min", Kind::Float, "0.01", "efficiency axis start (figures 1,3)"),
    key("eta_max", Kind::Float, "0.99", "efficiency axis end"),
    key("eta_step", Kind::Positive, "0.01", "efficiency axis step"),
    key("ratio_min", Kind::Positive, "0.05", "beta_h/beta_c axis start"),
    key("ratio_max", Kind::Positive, "0.95", "beta_h/beta_c axis end"),
    key("ratio_step", Kind::Positive, "0.05", "beta_h/beta_c axis step"),
    key("u", Kind::VelocityList, "0,0.5,0.9", "bath velocities"),
    key("omega_c", Kind::Positive, "1", "cold frequency"),
    key("beta_c", Kind::Positive, "1", "cold inverse temperature"),
    UMAX,
];

const OPTIMIZE: &[Key] = &[
    key("medium", Kind::Medium, "oscillator", "qubit or oscillator"),
    key("regime", Kind::Regime, "high_t", "closed form to compare against"),
    key("omega_c", Kind::Positive, "0.001", "cold frequency"),
    key("beta_c", Kind::Positive, "1", "cold inverse temperature"),
    key("beta_h", Kind::Positive, "0.25", "hot inverse temperature"),
    key("u", Kind::Velocity, "0.5", "hot bath velocity"),
    key("omega_lo", Kind::Float, "0", "search bracket start; 0 selects the engine window"),
    key("omega_hi", Kind::Float, "0", "search bracket end; 0 selects the engine window"),
    UMAX,
];

const EFFTEMP: &[Key] = &[
    key("omega_c", Kind::Positive, "1", "cold frequency (low-T forms)"),
    key("beta_c", Kind::Positive, "1", "cold inverse temperature"),
    key("beta_h", Kind::Positive, "0.25", "hot inverse temperature"),
    key("u", Kind::Velocity, "0.5", "hot bath velocity"),
    key("x_min", Kind::Positive, "0.001", "mismatch grid start in beta_h*omega"),
    key("x_max", Kind::Positive, "100", "mismatch grid end"),
    key("x_points", Kind::Count, "241", "mismatch grid size"),
    UMAX,
];

const RELAX: &[Key] = &[
    key("medium", Kind::Medium, "qubit", "qubit or oscillator"),
    key("n", Kind::Float, "0.5", "bath occupation N"),
    key("gamma0", Kind::Positive, "1", "decay coefficient"),
    key("omega", Kind::Positive, "1", "medium frequency"),
    key("tol", Kind::Positive, "1e-9", "distance to the steady state that counts as relaxed"),
    key("dt", Kind::Float, "0", "sample spacing; 0 means 0.5/gamma0"),
    key("n_max", Kind::Count, "0", "oscillator cutoff; 0 derives it from trunc_eps"),
    key("trunc_eps", Kind::Positive, "1e-12", "oscillator tail budget"),
    key("initial", Kind::Initial, "ground", "ground or steady"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    command: Command,
    values: BTreeMap<String, String>,
}

fn bad(key: &str, raw: &str, why: &str) -> CliError {
    CliError::Usage(format!("invalid value `{raw}` for `{key}`: {why}"))
}

fn float(key: &str, raw: &str) -> Result<f64, CliError> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| bad(key, raw, "not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(key, raw, "must be finite"))
    }
}

fn velocity(key: &str, raw: &str) -> Result<f64, CliError> {
    let v = float(key, raw)?;
    if (0.0..=U_MAX).contains(&v) {
        Ok(v)
    } else {
        Err(bad(key, raw, &format!("velocity must lie in [0, {U_MAX}]")))
    }
}

fn normalize(key: &Key, raw: &str) -> Result<String, CliError> {
    let name = key.name;
    let raw = raw.trim();
    let list = |check: fn(&str, &str) -> Result<f64, CliError>| -> Result<String, CliError> {
        if raw.is_empty() {
            return Ok(String::new());
        }
        raw.split(',')
            .map(|item| check(name, item).map(|v| v.to_string()))
            .collect::<Result<Vec<_>, _>>()
            .map(|items| items.join(","))
    };
    Ok(match key.kind {
        Kind::Float => float(name, raw)?.to_string(),
        Kind::Positive => {
            let v = float(name, raw)?;
            if v <= 0.0 {
                return Err(bad(name, raw, "must be positive"));
            }
            v.to_string()
        }
        Kind::Velocity => velocity(name, raw)?.to_string(),
        Kind::Count => raw
            .parse::<usize>()
            .map_err(|_| bad(name, raw, "not a non-negative integer"))?
            .to_string(),
        Kind::FloatList => list(float)?,
        Kind::VelocityList => list(velocity)?,
        Kind::Medium => raw
            .parse::<MediumKind>()
            .map_err(|e| bad(name, raw, &e.to_string()))?
            .to_string(),
        Kind::Regime => raw
            .parse::<Regime>()
            .map_err(|e| bad(name, raw, &e.to_string()))?
            .to_string(),
        Kind::Figure => match raw.parse::<u8>() {
            Ok(n @ 1..=4) => n.to_string(),
            _ => return Err(bad(name, raw, "figure must be 1, 2, 3 or 4")),
        },
        Kind::Initial => match raw {
            "ground" | "steady" => raw.to_string(),
            _ => return Err(bad(name, raw, "expected `ground` or `steady`")),
        },
    })
}

impl RunConfig {
    /// Schema defaults for `command`.
    pub fn defaults(command: Command) -> Self {
        let values = command
            .schema()
            .iter()
            .map(|k| {
                let v = normalize(k, k.default).expect("schema defaults are valid");
                (k.name.to_string(), v)
            })
            .collect();
        Self { command, values }
    }

    pub fn command(&self) -> Command {
        self.command
    }

    pub fn has_key(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    /// Sets one key, normalizing the value. Unknown keys are usage errors.
    pub fn set(&mut self, key: &str, raw: &str) -> Result<(), CliError> {
        let spec = self
            .command
            .schema()
            .iter()
            .find(|k| k.name == key)
            .ok_or_else(|| {
                CliError::Usage(format!("`{}` has no setting `{key}`", self.command))
            })?;
        let v = normalize(spec, raw)?;
        self.values.insert(key.to_string(), v);
        Ok(())
    }

    /// Overlays a flat `key = value` text. Blank lines and `#` comments are
    /// ignored; a `command` line, if present, must name this command.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected `key = value`", lineno + 1))
            })?;
            let (k, v) = (k.trim(), v.trim());
            if k == "command" {
                if v != self.command.as_str() {
                    return Err(CliError::Usage(format!(
                        "config is for `{v}`, not `{}`",
                        self.command
                    )));
                }
                continue;
            }
            self.set(k, v)?;
        }
        Ok(())
    }

    /// Parses text that names its own command (a canonical serialization or a
    /// config file with a `command` line) on top of that command's defaults.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let command = text
            .lines()
            .filter_map(|l| l.trim().split_once('='))
            .find(|(k, _)| k.trim() == "command")
            .map(|(_, v)| v.trim().parse::<Command>())
            .ok_or_else(|| CliError::Usage("config has no `command` line".into()))??;
        let mut cfg = Self::defaults(command);
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn canonical(&self) -> String {
        let mut out = format!("command={}\n", self.command);
        for (k, v) in &self.values {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    pub fn sha256(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn raw(&self, key: &str) -> &str {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("`{}` schema has no key `{key}`", self.command))
    }

    pub fn f64(&self, key: &str) -> f64 {
        self.raw(key).parse().expect("normalized float")
    }

    pub fn usize(&self, key: &str) -> usize {
        self.raw(key).parse().expect("normalized count")
    }

    pub fn list(&self, key: &str) -> Vec<f64> {
        let raw = self.raw(key);
        if raw.is_empty() {
            return Vec::new();
        }
        raw.split(',').map(|s| s.parse().expect("normalized float")).collect()
    }

    pub fn medium(&self, key: &str) -> MediumKind {
        self.raw(key).parse().expect("normalized medium")
    }

    pub fn regime(&self, key: &str) -> Regime {
        self.raw(key).parse().expect("normalized regime")
    }

    pub fn str(&self, key: &str) -> &str {
        self.raw(key)
    }

    /// Rejects velocities above the configured `umax`.
    pub fn check_umax(&self, velocities: &[f64]) -> Result<(), CliError> {
        let umax = self.f64("umax");
        match velocities.iter().find(|&&u| u > umax) {
            Some(u) => Err(CliError::Usage(format!("velocity {u} exceeds umax = {umax}"))),
            None => Ok(()),
        }
    }
}
