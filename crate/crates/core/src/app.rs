//! Config-driven batch runs behind the `nlstring` binary.
//!
//! Each command produces a [`Report`]: header lines describing the run and one
//! table. Apart from the timestamp line, identical configs produce
//! byte-identical output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::str::FromStr;

use num_complex::Complex64;

use crate::classical::{ConstantDrive, FieldState, RRConfig, RrStepper, StringSolver, UniformHarmonic};
use crate::config::{DriveKind, EmissionKind, InitialProfile, RunConfig};
use crate::fock::{build_h1, build_hamiltonian, exact_eigs, evolve_exact, FockBasis, FockState};
use crate::modes::ModeIndex;
use crate::perturb::{evolve_first_order, transition_rate_report, RESONANCE_TOL};
use crate::photon::{amp_scatter, amp_single_emission, angular_distribution, gauss_legendre, PhotonSpec};
use crate::table::{Cell, Table};
use crate::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Prefix of echoed config lines in output headers.
pub const CONFIG_PREFIX: &str = "config ";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Evolve,
    Rates,
    Emission,
    Classical,
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectrum" => Ok(Command::Spectrum),
            "evolve" => Ok(Command::Evolve),
            "rates" => Ok(Command::Rates),
            "emission" => Ok(Command::Emission),
            "classical" => Ok(Command::Classical),
            other => Err(Error::Parse {
                what: "command".into(),
                message: format!("unknown command '{other}'"),
            }),
        }
    }
}

impl std::fmt::Display for Command {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Command::Spectrum => "spectrum",
            Command::Evolve => "evolve",
            Command::Rates => "rates",
            Command::Emission => "emission",
            Command::Classical => "classical",
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// `evolve`: use exact evolution instead of first-order theory.
    pub exact: bool,
    /// `rates`: decaying mode, overriding `rates.initial`.
    pub initial: Option<ModeIndex>,
    /// Header timestamp; the current Unix time when absent.
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub header: Vec<String>,
    pub table: Table,
}

impl Report {
    pub fn write<W: Write>(&self, w: W, cfg: &RunConfig) -> Result<()> {
        self.table.write(w, cfg.output.format, &self.header)
    }

    /// Writes to `output.path`, or standard output when unset.
    pub fn emit(&self, cfg: &RunConfig) -> Result<()> {
        match &cfg.output.path {
            Some(path) => {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                let mut w = BufWriter::new(File::create(path)?);
                self.write(&mut w, cfg)?;
                w.flush()?;
            }
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                self.write(&mut lock, cfg)?;
            }
        }
        Ok(())
    }
}

/// Failure classes mapped to process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    Config,
    Numeric,
}

impl FailureKind {
    pub fn exit_code(self) -> i32 {
        match self {
            FailureKind::Config => 2,
            FailureKind::Numeric => 3,
        }
    }
}

/// One-line, `key=value` error record for machine consumption.
pub fn error_record(kind: FailureKind, err: &Error) -> String {
    let label = match kind {
        FailureKind::Config => "config",
        FailureKind::Numeric => "numeric",
    };
    let message = err.to_string().replace('\\', "\\\\").replace('"', "\\\"").replace('\n', " ");
    format!("error kind={label} code={} message=\"{message}\"", kind.exit_code())
}

/// Caps the global rayon pool at `NLSTRING_THREADS` when set.
pub fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("NLSTRING_THREADS") else {
        return Ok(());
    };
    let n: usize = value.trim().parse().map_err(|_| Error::Parse {
        what: "NLSTRING_THREADS".into(),
        message: format!("expected a positive integer, got '{value}'"),
    })?;
    if n == 0 {
        return Err(Error::Parse {
            what: "NLSTRING_THREADS".into(),
            message: "must be at least 1".into(),
        });
    }
    // A pool that is already initialized keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn timestamp() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("unix:{secs}")
}

fn header(command: Command, cfg: &RunConfig, opts: &RunOptions) -> Vec<String> {
    let mut h = vec![
        format!("nlstring {VERSION} {command}"),
        format!("timestamp {}", opts.timestamp.clone().unwrap_or_else(timestamp)),
    ];
    h.extend(cfg.to_kv().into_iter().map(|(k, v)| format!("{CONFIG_PREFIX}{k}={v}")));
    h
}

/// Recovers the run configuration echoed in an output header.
pub fn config_from_header(lines: &[String]) -> Result<RunConfig> {
    let text: String = lines
        .iter()
        .filter_map(|l| l.strip_prefix(CONFIG_PREFIX))
        .map(|l| format!("{l}\n"))
        .collect();
    RunConfig::parse(&text, "header")
}

pub fn run(command: Command, cfg: &RunConfig, opts: &RunOptions) -> Result<Report> {
    cfg.validate()?;
    let mut head = header(command, cfg, opts);
    let (summary, table) = match command {
        Command::Spectrum => spectrum(cfg)?,
        Command::Evolve => evolve(cfg, opts.exact)?,
        Command::Rates => rates(cfg, opts.initial.unwrap_or(cfg.rates_initial))?,
        Command::Emission => emission(cfg)?,
        Command::Classical => classical(cfg)?,
    };
    head.extend(summary);
    Ok(Report { header: head, table })
}

fn basis(cfg: &RunConfig) -> Result<FockBasis> {
    let q = &cfg.quantum;
    FockBasis::new(q.cutoff, q.max_phonons, q.momentum_sector)
}

type Output = (Vec<String>, Table);

fn spectrum(cfg: &RunConfig) -> Result<Output> {
    let basis = basis(cfg)?;
    let h = build_hamiltonian(&basis, &cfg.params)?;
    let k = if cfg.quantum.eigs == 0 { basis.dim() } else { cfg.quantum.eigs };
    let pairs = exact_eigs(&h, k)?;
    let mut table = Table::new(["index", "eigenvalue", "dominant_state", "weight"]);
    for (i, pair) in pairs.iter().enumerate() {
        let (j, w) = pair
            .vector
            .iter()
            .map(|c| c.norm_sqr())
            .enumerate()
            .fold((0, -1.0), |best, (j, w)| if w > best.1 { (j, w) } else { best });
        table.push(vec![
            i.into(),
            pair.value.into(),
            basis.state(j).to_string().into(),
            w.into(),
        ]);
    }
    Ok((vec![format!("basis_dim {}", basis.dim())], table))
}

fn transition_columns() -> Table {
    Table::new(["initial", "final", "re_amp", "im_amp", "prob", "resonant_flag", "t"])
}

fn evolve(cfg: &RunConfig, exact: bool) -> Result<Output> {
    let basis = basis(cfg)?;
    let q = &cfg.quantum;
    let initial = &q.initial;
    let times: Vec<f64> = (1..=q.steps).map(|i| q.t_end * i as f64 / q.steps as f64).collect();
    let mut table = transition_columns();
    let mut summary = vec![format!("basis_dim {}", basis.dim())];
    if exact {
        summary.push("method exact".into());
        let h = build_hamiltonian(&basis, &cfg.params)?;
        let h1 = build_h1(&basis, &cfg.params).diagonal();
        let psi0 = basis.unit_vector(initial)?;
        let e_i = h1[basis.require_index(initial)?].re;
        for &t in &times {
            let psi = evolve_exact(&h, &psi0, t)?;
            for (j, amp) in psi.iter().enumerate() {
                // Interaction picture of H1, matching the first-order records.
                let e_f = h1[j].re;
                let a = amp * Complex64::from_polar(1.0, e_f * t);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let resonant = (e_f - e_i).abs() <= RESONANCE_TOL * e_i.max(e_f).max(1.0);
                push_transition(&mut table, initial, basis.state(j), a, resonant, t);
            }
        }
    } else {
        summary.push("method first-order".into());
        for &t in &times {
            let records = evolve_first_order(initial, t, &basis, &cfg.params)?;
            if records.iter().any(|r| r.outside_validity) {
                summary.push(format!("outside_validity t={t}"));
            }
            for r in records {
                push_transition(&mut table, &r.initial, &r.final_state, r.amplitude, r.on_resonance, t);
            }
        }
    }
    Ok((summary, table))
}

fn push_transition(table: &mut Table, i: &FockState, f: &FockState, a: Complex64, resonant: bool, t: f64) {
    table.push(vec![
        i.to_string().into(),
        f.to_string().into(),
        a.re.into(),
        a.im.into(),
        a.norm_sqr().into(),
        resonant.into(),
        t.into(),
    ]);
}

fn rates(cfg: &RunConfig, j: ModeIndex) -> Result<Output> {
    if j == 0 {
        return Err(Error::ZeroMode);
    }
    let n = cfg.quantum.cutoff.max(j.abs());
    let modes: Vec<ModeIndex> = (-n..=n).filter(|&m| m != 0).collect();
    let mut table = Table::new(["j", "p", "q", "r", "matrix_element", "rate", "closed_form", "ratio"]);
    let mut scanned = 0usize;
    for (ia, &a) in modes.iter().enumerate() {
        for (ib, &b) in modes.iter().enumerate().skip(ia) {
            for &c in modes.iter().skip(ib) {
                scanned += 1;
                let r = transition_rate_report(j, (a, b, c), &cfg.params)?;
                if !(r.momentum_conserved && r.resonant) {
                    continue;
                }
                table.push(vec![
                    j.into(),
                    a.into(),
                    b.into(),
                    c.into(),
                    r.matrix_element.into(),
                    r.rate.into(),
                    r.closed_form.into(),
                    r.ratio.into(),
                ]);
            }
        }
    }
    Ok((vec![format!("scanned_triples {scanned}"), format!("allowed_triples {}", table.len())], table))
}

fn emission(cfg: &RunConfig) -> Result<Output> {
    let e = &cfg.emission;
    let p = &cfg.params;
    match e.kind {
        EmissionKind::Rate => {
            let samples = angular_distribution(e.mode, p, e.resolution)?;
            let total: f64 = samples.iter().map(|s| s.weight * s.d_rate_d_omega).sum();
            let mut table = Table::new(["theta", "phi", "polarization", "dRate_dOmega"]);
            for s in &samples {
                table.push(vec![
                    s.theta.into(),
                    s.phi.into(),
                    i64::from(s.polarization).into(),
                    s.d_rate_d_omega.into(),
                ]);
            }
            Ok((vec![format!("total_rate {total}")], table))
        }
        EmissionKind::Amplitudes => {
            let mut cols = vec!["theta", "phi", "polarization", "re_amp", "im_amp", "on_shell"];
            if e.scatter_mode.is_some() {
                cols.extend(["re_scatter", "im_scatter"]);
            }
            let mut table = Table::new(cols);
            let wm = p.phonon_energy(e.mode);
            let incoming = match e.scatter_mode {
                Some(n) => Some((
                    n,
                    PhotonSpec::from_angles(
                        p.phonon_energy(n),
                        e.incoming_theta,
                        e.incoming_phi,
                        e.incoming_polarization,
                    )?,
                )),
                None => None,
            };
            let (nodes, _) = gauss_legendre(e.resolution);
            for c in nodes {
                let theta = c.clamp(-1.0, 1.0).acos();
                for k in 0..e.resolution {
                    let phi = 2.0 * std::f64::consts::PI * k as f64 / e.resolution as f64;
                    for r in [1u8, 2] {
                        let photon = PhotonSpec::from_angles(wm, theta, phi, r)?;
                        let a = amp_single_emission(e.mode, &photon, p)?;
                        let mut row: Vec<Cell> = vec![
                            theta.into(),
                            phi.into(),
                            i64::from(r).into(),
                            a.value.re.into(),
                            a.value.im.into(),
                            a.on_shell.into(),
                        ];
                        if let Some((n, inc)) = &incoming {
                            let s = amp_scatter(e.mode, *n, inc, &photon, p)?;
                            row.extend([Cell::from(s.value.re), Cell::from(s.value.im)]);
                        }
                        table.push(row);
                    }
                }
            }
            Ok((Vec::new(), table))
        }
    }
}

fn classical(cfg: &RunConfig) -> Result<Output> {
    let c = &cfg.classical;
    let p = cfg.params;
    let k = p.wavenumber(c.mode as ModeIndex);
    let a = c.amplitude;
    let state = match c.initial {
        InitialProfile::Standing => FieldState::from_fn(p, c.grid, |x| a * (k * x).sin(), |_| 0.0)?,
        InitialProfile::Traveling => {
            FieldState::from_fn(p, c.grid, |x| a * (k * x).sin(), |x| -p.speed * a * k * (k * x).cos())?
        }
    };
    let mut rr = RRConfig::new(c.rr_order)?.with_reduction(c.reduction);
    rr = match c.drive {
        DriveKind::None => rr,
        DriveKind::Constant => rr.with_drive(ConstantDrive(c.drive_amplitude)),
        DriveKind::Harmonic => rr.with_drive(UniformHarmonic {
            amplitude: c.drive_amplitude,
            frequency: c.drive_frequency,
            phase: 0.0,
        }),
    };
    let solver = StringSolver::new(p, c.grid)?;
    let mut stepper = RrStepper::new(solver.clone(), rr);
    let steps = (c.t_end / c.dt).round() as usize;
    let mut table = Table::new(crate::classical::trajectory_columns(c.modes));
    let mut s = state;
    table.push(crate::classical::trajectory_row(&solver, &s, c.modes));
    let e0 = solver.energy(&s);
    for i in 1..=steps {
        s = stepper.step(&s, c.dt)?;
        if s.y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidField(format!("field diverged at step {i}")));
        }
        if i % c.output_every == 0 || i == steps {
            table.push(crate::classical::trajectory_row(&solver, &s, c.modes));
        }
    }
    let e1 = solver.energy(&s);
    Ok((
        vec![
            format!("steps {steps}"),
            format!("energy_initial {e0}"),
            format!("energy_final {e1}"),
        ],
        table,
    ))
}
