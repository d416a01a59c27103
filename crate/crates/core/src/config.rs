//! Flat `key=value` run configuration.
//!
//! One assignment per line, `#` starts a comment. Keys are either bare
//! string constants (`L`, `v`, `gamma`, `sigma`) or carry a section prefix
//! (`quantum.cutoff=3`). Unknown and duplicate keys are errors; absent keys
//! take the defaults listed in [`RunConfig::default`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::classical::Reduction;
use crate::fock::FockState;
use crate::modes::{ModeIndex, StringParams};
use crate::table::Format;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumConfig {
    pub cutoff: ModeIndex,
    pub max_phonons: u32,
    pub momentum_sector: Option<i64>,
    pub initial: FockState,
    pub t_end: f64,
    pub steps: usize,
    /// Number of eigenvalues reported by `spectrum`; 0 reports all.
    pub eigs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialProfile {
    #[default]
    Standing,
    Traveling,
}

impl FromStr for InitialProfile {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "standing" => Ok(InitialProfile::Standing),
            "traveling" => Ok(InitialProfile::Traveling),
            _ => Err(format!("expected standing or traveling, got '{s}'")),
        }
    }
}

impl std::fmt::Display for InitialProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InitialProfile::Standing => "standing",
            InitialProfile::Traveling => "traveling",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DriveKind {
    #[default]
    None,
    Constant,
    Harmonic,
}

impl FromStr for DriveKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "none" => Ok(DriveKind::None),
            "constant" => Ok(DriveKind::Constant),
            "harmonic" => Ok(DriveKind::Harmonic),
            _ => Err(format!("expected none, constant or harmonic, got '{s}'")),
        }
    }
}

impl std::fmt::Display for DriveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DriveKind::None => "none",
            DriveKind::Constant => "constant",
            DriveKind::Harmonic => "harmonic",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalConfig {
    pub grid: usize,
    pub dt: f64,
    pub t_end: f64,
    pub rr_order: usize,
    pub reduction: Reduction,
    pub initial: InitialProfile,
    /// Mode number of the initial sine profile.
    pub mode: u32,
    pub amplitude: f64,
    pub drive: DriveKind,
    pub drive_amplitude: f64,
    pub drive_frequency: f64,
    /// Steps between trajectory rows.
    pub output_every: usize,
    /// Fourier modes reported per row.
    pub modes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmissionKind {
    /// Differential rate table and total rate.
    #[default]
    Rate,
    /// Reduced single-emission and scattering amplitudes per direction.
    Amplitudes,
}

impl FromStr for EmissionKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "rate" => Ok(EmissionKind::Rate),
            "amplitudes" => Ok(EmissionKind::Amplitudes),
            _ => Err(format!("expected rate or amplitudes, got '{s}'")),
        }
    }
}

impl std::fmt::Display for EmissionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EmissionKind::Rate => "rate",
            EmissionKind::Amplitudes => "amplitudes",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmissionConfig {
    pub mode: ModeIndex,
    pub resolution: usize,
    pub kind: EmissionKind,
    /// Final string mode `n` for scattering amplitudes; the incoming photon
    /// is on shell with `|omega_n|`.
    pub scatter_mode: Option<ModeIndex>,
    pub incoming_theta: f64,
    pub incoming_phi: f64,
    pub incoming_polarization: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub format: Format,
    /// `None` writes to standard output.
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: StringParams,
    pub quantum: QuantumConfig,
    pub rates_initial: ModeIndex,
    pub classical: ClassicalConfig,
    pub emission: EmissionConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: StringParams::default(),
            quantum: QuantumConfig {
                cutoff: 3,
                max_phonons: 3,
                momentum_sector: None,
                initial: FockState::vacuum(),
                t_end: 1.0,
                steps: 10,
                eigs: 0,
            },
            rates_initial: 3,
            classical: ClassicalConfig {
                grid: 256,
                dt: 1e-3,
                t_end: 1.0,
                rr_order: 0,
                reduction: Reduction::OrderReduced,
                initial: InitialProfile::Standing,
                mode: 1,
                amplitude: 0.1,
                drive: DriveKind::None,
                drive_amplitude: 0.0,
                drive_frequency: 0.0,
                output_every: 10,
                modes: 4,
            },
            emission: EmissionConfig {
                mode: 1,
                resolution: 64,
                kind: EmissionKind::Rate,
                scatter_mode: None,
                incoming_theta: std::f64::consts::FRAC_PI_2,
                incoming_phi: 0.0,
                incoming_polarization: 1,
            },
            output: OutputConfig {
                format: Format::Csv,
                path: None,
            },
        }
    }
}

/// Every recognized key, in echo order.
pub const KEYS: &[&str] = &[
    "L",
    "v",
    "gamma",
    "sigma",
    "quantum.cutoff",
    "quantum.max_phonons",
    "quantum.momentum_sector",
    "quantum.initial",
    "quantum.t_end",
    "quantum.steps",
    "quantum.eigs",
    "rates.initial",
    "classical.grid",
    "classical.dt",
    "classical.t_end",
    "classical.rr_order",
    "classical.reduction",
    "classical.initial",
    "classical.mode",
    "classical.amplitude",
    "classical.drive",
    "classical.drive_amplitude",
    "classical.drive_frequency",
    "classical.output_every",
    "classical.modes",
    "emission.mode",
    "emission.resolution",
    "emission.kind",
    "emission.scatter_mode",
    "emission.incoming_theta",
    "emission.incoming_phi",
    "emission.incoming_polarization",
    "output.format",
    "output.path",
];

fn invalid(key: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        what: key.to_owned(),
        message: message.into(),
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e: T::Err| invalid(key, format!("cannot parse '{value}': {e}")))
}

fn optional<T: FromStr>(key: &str, value: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    if value == "none" || value.is_empty() {
        Ok(None)
    } else {
        parse_value(key, value).map(Some)
    }
}

/// Splits `text` into `(key, value, line)` assignments.
fn assignments(text: &str, origin: &str) -> Result<Vec<(String, String, usize)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            what: format!("{origin} line {}", i + 1),
            message: format!("expected key=value, got '{line}'"),
        })?;
        out.push((k.trim().to_owned(), v.trim().to_owned(), i + 1));
    }
    Ok(out)
}

impl RunConfig {
    /// Parses configuration text; `origin` names the source in errors.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let mut cfg = RunConfig::default();
        for (key, value, line) in assignments(text, origin)? {
            if let Some(first) = seen.insert(key.clone(), line) {
                return Err(Error::Parse {
                    what: key,
                    message: format!("duplicate key in {origin} on lines {first} and {line}"),
                });
            }
            cfg.set(&key, &value).map_err(|e| match e {
                Error::Parse { what, message } => Error::Parse {
                    what,
                    message: format!("{message} ({origin} line {line})"),
                },
                other => other,
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies `key=value` overrides on top of the current values.
    pub fn apply_overrides<S: AsRef<str>>(&mut self, overrides: &[S]) -> Result<()> {
        for o in overrides {
            let o = o.as_ref();
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| invalid(o, "override must have the form key=value"))?;
            self.set(k.trim(), v.trim())?;
        }
        self.validate()
    }

    /// Assigns a single key without cross-field validation.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value;
        match key {
            "L" => self.params.length = parse_value(key, v)?,
            "v" => self.params.speed = parse_value(key, v)?,
            "gamma" => self.params.gamma = parse_value(key, v)?,
            "sigma" => self.params.sigma = parse_value(key, v)?,
            "quantum.cutoff" => self.quantum.cutoff = parse_value(key, v)?,
            "quantum.max_phonons" => self.quantum.max_phonons = parse_value(key, v)?,
            "quantum.momentum_sector" => self.quantum.momentum_sector = optional(key, v)?,
            "quantum.initial" => self.quantum.initial = parse_value(key, v)?,
            "quantum.t_end" => self.quantum.t_end = parse_value(key, v)?,
            "quantum.steps" => self.quantum.steps = parse_value(key, v)?,
            "quantum.eigs" => self.quantum.eigs = parse_value(key, v)?,
            "rates.initial" => self.rates_initial = parse_value(key, v)?,
            "classical.grid" => self.classical.grid = parse_value(key, v)?,
            "classical.dt" => self.classical.dt = parse_value(key, v)?,
            "classical.t_end" => self.classical.t_end = parse_value(key, v)?,
            "classical.rr_order" => self.classical.rr_order = parse_value(key, v)?,
            "classical.reduction" => self.classical.reduction = parse_value(key, v)?,
            "classical.initial" => self.classical.initial = parse_value(key, v)?,
            "classical.mode" => self.classical.mode = parse_value(key, v)?,
            "classical.amplitude" => self.classical.amplitude = parse_value(key, v)?,
            "classical.drive" => self.classical.drive = parse_value(key, v)?,
            "classical.drive_amplitude" => self.classical.drive_amplitude = parse_value(key, v)?,
            "classical.drive_frequency" => self.classical.drive_frequency = parse_value(key, v)?,
            "classical.output_every" => self.classical.output_every = parse_value(key, v)?,
            "classical.modes" => self.classical.modes = parse_value(key, v)?,
            "emission.mode" => self.emission.mode = parse_value(key, v)?,
            "emission.resolution" => self.emission.resolution = parse_value(key, v)?,
            "emission.kind" => self.emission.kind = parse_value(key, v)?,
            "emission.scatter_mode" => self.emission.scatter_mode = optional(key, v)?,
            "emission.incoming_theta" => self.emission.incoming_theta = parse_value(key, v)?,
            "emission.incoming_phi" => self.emission.incoming_phi = parse_value(key, v)?,
            "emission.incoming_polarization" => self.emission.incoming_polarization = parse_value(key, v)?,
            "output.format" => self.output.format = parse_value(key, v)?,
            "output.path" => self.output.path = optional(key, v)?,
            _ => return Err(invalid(key, "unknown key")),
        }
        Ok(())
    }

    /// Checks every field against the preconditions of the module that uses it.
    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        let positive = |key: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(invalid(key, format!("must be positive, got {x}")))
            }
        };
        positive("L", p.length)?;
        positive("v", p.speed)?;
        if !p.gamma.is_finite() {
            return Err(invalid("gamma", "must be finite"));
        }
        if !(p.sigma.is_finite() && p.sigma >= 0.0) {
            return Err(invalid("sigma", format!("must be non-negative, got {}", p.sigma)));
        }
        let q = &self.quantum;
        if q.cutoff < 1 {
            return Err(invalid("quantum.cutoff", format!("must be at least 1, got {}", q.cutoff)));
        }
        if q.initial.max_abs_mode() > q.cutoff {
            return Err(invalid("quantum.initial", "occupies a mode beyond quantum.cutoff"));
        }
        if q.initial.total_phonons() > q.max_phonons {
            return Err(invalid("quantum.initial", "has more phonons than quantum.max_phonons"));
        }
        if !(q.t_end.is_finite() && q.t_end >= 0.0) {
            return Err(invalid("quantum.t_end", "must be non-negative"));
        }
        if q.steps < 1 {
            return Err(invalid("quantum.steps", "must be at least 1"));
        }
        if self.rates_initial == 0 {
            return Err(invalid("rates.initial", "mode 0 is not allowed"));
        }
        let c = &self.classical;
        if c.grid < 8 || !c.grid.is_power_of_two() {
            return Err(invalid("classical.grid", format!("must be a power of two >= 8, got {}", c.grid)));
        }
        positive("classical.dt", c.dt)?;
        let limit = 0.5 * p.length / c.grid as f64 / p.speed;
        if c.dt >= limit {
            return Err(invalid("classical.dt", format!("must be below the stability limit {limit}")));
        }
        if !(c.t_end.is_finite() && c.t_end >= 0.0) {
            return Err(invalid("classical.t_end", "must be non-negative"));
        }
        if c.rr_order > crate::classical::MAX_KERNEL_ORDER {
            return Err(invalid("classical.rr_order", "must be at most 6"));
        }
        if c.mode == 0 || 4 * c.mode as usize > c.grid {
            return Err(invalid("classical.mode", "must be nonzero and at most classical.grid / 4"));
        }
        if !c.amplitude.is_finite() || !c.drive_amplitude.is_finite() || !c.drive_frequency.is_finite() {
            return Err(invalid("classical.amplitude", "must be finite"));
        }
        if c.output_every < 1 {
            return Err(invalid("classical.output_every", "must be at least 1"));
        }
        if c.modes >= c.grid / 2 {
            return Err(invalid("classical.modes", "must be below classical.grid / 2"));
        }
        let e = &self.emission;
        if e.mode == 0 {
            return Err(invalid("emission.mode", "mode 0 is not allowed"));
        }
        if e.scatter_mode == Some(0) {
            return Err(invalid("emission.scatter_mode", "mode 0 is not allowed"));
        }
        if e.resolution < 1 {
            return Err(invalid("emission.resolution", "must be at least 1"));
        }
        if !(1..=2).contains(&e.incoming_polarization) {
            return Err(invalid("emission.incoming_polarization", "must be 1 or 2"));
        }
        Ok(())
    }

    /// Every key with its current value; parses back to an equal config.
    pub fn to_kv(&self) -> Vec<(&'static str, String)> {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map_or("none".to_owned(), T::to_string)
        }
        let p = &self.params;
        let q = &self.quantum;
        let c = &self.classical;
        let e = &self.emission;
        let values = vec![
            p.length.to_string(),
            p.speed.to_string(),
            p.gamma.to_string(),
            p.sigma.to_string(),
            q.cutoff.to_string(),
            q.max_phonons.to_string(),
            opt(&q.momentum_sector),
            q.initial.to_string(),
            q.t_end.to_string(),
            q.steps.to_string(),
            q.eigs.to_string(),
            self.rates_initial.to_string(),
            c.grid.to_string(),
            c.dt.to_string(),
            c.t_end.to_string(),
            c.rr_order.to_string(),
            c.reduction.to_string(),
            c.initial.to_string(),
            c.mode.to_string(),
            c.amplitude.to_string(),
            c.drive.to_string(),
            c.drive_amplitude.to_string(),
            c.drive_frequency.to_string(),
            c.output_every.to_string(),
            c.modes.to_string(),
            e.mode.to_string(),
            e.resolution.to_string(),
            e.kind.to_string(),
            opt(&e.scatter_mode),
            e.incoming_theta.to_string(),
            e.incoming_phi.to_string(),
            e.incoming_polarization.to_string(),
            self.output.format.to_string(),
            self.output.path.as_ref().map_or("none".to_owned(), |p| p.display().to_string()),
        ];
        KEYS.iter().copied().zip(values).collect()
    }

    pub fn to_text(&self) -> String {
        self.to_kv().iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        what: path.display().to_string(),
        message: format!("cannot read config: {e}"),
    })?;
    RunConfig::parse(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_takes_defaults() {
        let cfg = RunConfig::parse("L=5.5\nv=1.0\ngamma=0.01\nsigma=0.1", "t").unwrap();
        assert_eq!(cfg.params.length, 5.5);
        assert_eq!(cfg.params.gamma, 0.01);
        assert_eq!(cfg.quantum, RunConfig::default().quantum);
    }

    #[test]
    fn zero_cutoff_rejected() {
        let err = RunConfig::parse("quantum.cutoff=0", "t").unwrap_err();
        assert!(matches!(err, Error::Parse { ref what, .. } if what == "quantum.cutoff"), "{err}");
    }

    #[test]
    fn duplicate_key_names_both_lines() {
        let err = RunConfig::parse("gamma=1\n# note\nv=2\ngamma=2\n", "cfg").unwrap_err();
        let text = err.to_string();
        assert!(text.contains("gamma") && text.contains("lines 1 and 4"), "{text}");
    }

    #[test]
    fn unknown_key_rejected() {
        let err = RunConfig::parse("quantum.cutof=3", "t").unwrap_err();
        assert!(err.to_string().contains("unknown key"));
        assert!(RunConfig::parse("just text", "t").is_err());
    }

    #[test]
    fn echo_round_trips() {
        let mut cfg = RunConfig::default();
        cfg.apply_overrides(&[
            "gamma=0.1234567890123",
            "quantum.initial=[-3;1;1;1]",
            "quantum.max_phonons=4",
            "quantum.momentum_sector=0",
            "classical.reduction=off",
            "classical.drive=harmonic",
            "emission.scatter_mode=-2",
            "output.format=json",
            "output.path=out/run.json",
        ])
        .unwrap();
        let back = RunConfig::parse(&cfg.to_text(), "echo").unwrap();
        assert_eq!(back, cfg);
        assert_eq!(RunConfig::parse(&RunConfig::default().to_text(), "echo").unwrap(), RunConfig::default());
    }

    #[test]
    fn every_key_is_settable() {
        let cfg = RunConfig::default();
        for (k, v) in cfg.to_kv() {
            let mut c = cfg.clone();
            c.set(k, &v).unwrap();
        }
        assert_eq!(cfg.to_kv().len(), KEYS.len());
    }

    #[test]
    fn stability_guard_checked_up_front() {
        assert!(RunConfig::parse("classical.grid=256\nclassical.dt=0.02", "t").is_err());
    }
}
