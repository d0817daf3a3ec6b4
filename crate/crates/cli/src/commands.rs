//! Subcommand execution.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use unruh_core::sweeps::{
    run_curve, run_events, run_max_concurrence, run_region_map, Output, SweepSpec,
};
use unruh_core::{assemble, AtomOrder, BathKind, SystemParams};

use crate::config::{ConfigError, RunConfig};
use crate::output::{
    self, region_table, CoeffRow, CurveRow, EventRow, MaxRow, Metadata, Table, WriteError,
};
use crate::presets;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Coeffs,
    Evolve,
    Sweep,
    Region,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Coeffs => "coeffs",
            Command::Evolve => "evolve",
            Command::Sweep => "sweep",
            Command::Region => "region",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Config(PathBuf),
    Preset(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub command: Command,
    pub source: Source,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("computation failed: {0}")]
    Computation(#[from] unruh_core::Error),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Computation(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<WriteError> for CliError {
    fn from(e: WriteError) -> Self {
        CliError::Io(e.to_string())
    }
}

/// What a successful command produced.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    /// Human-readable summary for stdout.
    pub text: String,
    pub directory: Option<PathBuf>,
    pub files: Vec<String>,
}

pub fn load(source: &Source) -> Result<RunConfig, CliError> {
    let (origin, text) = match source {
        Source::Preset(name) => {
            let text = presets::find(name).ok_or_else(|| {
                let known: Vec<_> = presets::names().collect();
                CliError::Validation(format!(
                    "unknown preset `{name}` (available: {})",
                    known.join(", ")
                ))
            })?;
            (format!("preset {name}"), text.to_string())
        }
        Source::Config(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            (path.display().to_string(), text)
        }
    };
    RunConfig::parse(&text).map_err(|e: ConfigError| CliError::Validation(format!("{origin}, {e}")))
}

pub fn execute(inv: &Invocation) -> Result<Report, CliError> {
    let config = load(&inv.source)?;
    match inv.threads {
        Some(0) => Err(CliError::Validation("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Io(format!("cannot start worker threads: {e}")))?
            .install(|| run(inv, &config)),
        None => run(inv, &config),
    }
}

fn run(inv: &Invocation, config: &RunConfig) -> Result<Report, CliError> {
    let spec = config
        .to_spec()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    match inv.command {
        Command::Coeffs => coeffs(inv, config, &spec),
        Command::Evolve => evolve(inv, config, spec),
        Command::Sweep => sweep(inv, config, spec),
        Command::Region => region(inv, config, spec),
    }
}

fn with_outputs(mut spec: SweepSpec, outputs: &[Output]) -> SweepSpec {
    spec.outputs = outputs.iter().copied().collect::<BTreeSet<_>>();
    spec
}

fn output_dir(inv: &Invocation, config: &RunConfig) -> PathBuf {
    inv.out
        .clone()
        .or_else(|| config.output.directory.clone())
        .unwrap_or_else(|| {
            let name = match &inv.source {
                Source::Preset(p) => p.clone(),
                Source::Config(_) => config.name.clone().unwrap_or_else(|| "run".into()),
            };
            Path::new("output").join(name)
        })
}

fn metadata(inv: &Invocation, config: &RunConfig) -> Result<Metadata, CliError> {
    Ok(Metadata {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: inv.command.name().into(),
        preset: match &inv.source {
            Source::Preset(p) => Some(p.clone()),
            Source::Config(_) => None,
        },
        config: serde_json::to_value(config).map_err(|e| CliError::Validation(e.to_string()))?,
        files: Default::default(),
    })
}

fn write(
    inv: &Invocation,
    config: &RunConfig,
    dir: PathBuf,
    tables: &[(&str, &Table)],
    mut text: String,
) -> Result<Report, CliError> {
    let files = output::write_outputs(&dir, tables, metadata(inv, config)?)?;
    for (name, table) in tables {
        let _ = writeln!(
            text,
            "wrote {} rows to {}",
            table.rows.len(),
            dir.join(name).display()
        );
    }
    Ok(Report {
        text,
        directory: Some(dir),
        files,
    })
}

/// Coefficients for both baths and both atom orders at every grid point.
pub fn coefficient_rows(spec: &SweepSpec) -> Result<Vec<CoeffRow>, CliError> {
    let mut rows = Vec::new();
    for &(d1, d2) in &spec.polarizations {
        for &a in spec.accelerations.as_slice() {
            for &l in spec.separations.as_slice() {
                for bath in BathKind::ALL {
                    let params = SystemParams::new(a, l, d1, d2, bath)?
                        .with_gamma0(spec.gamma0_over_omega)?;
                    for order in [AtomOrder::Forward, AtomOrder::Reverse] {
                        rows.push(CoeffRow {
                            dipole1: d1.components(),
                            dipole2: d2.components(),
                            a_over_omega: a,
                            omega_l: l,
                            bath,
                            order,
                            coefficients: assemble(&params, order)?,
                        });
                    }
                }
            }
        }
    }
    Ok(rows)
}

fn coeffs(inv: &Invocation, config: &RunConfig, spec: &SweepSpec) -> Result<Report, CliError> {
    let rows = coefficient_rows(spec)?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:>24} {:>24} {:>12} {:>5} {:>24} {:>24} {:>24} {:>24}",
        "a/omega", "omega*L", "bath", "order", "A1", "B1", "A2", "B2"
    );
    for r in &rows {
        let c = r.coefficients;
        let _ = writeln!(
            text,
            "{:>24} {:>24} {:>12} {:>5} {:>24} {:>24} {:>24} {:>24}",
            output::real(r.a_over_omega),
            output::real(r.omega_l),
            r.bath.label(),
            r.order.label(),
            output::real(c.a1),
            output::real(c.b1),
            output::real(c.a2),
            output::real(c.b2),
        );
    }
    if inv.out.is_none() && config.output.directory.is_none() {
        return Ok(Report {
            text,
            ..Report::default()
        });
    }
    let table = CoeffRow::table(&rows);
    write(
        inv,
        config,
        output_dir(inv, config),
        &[("coeffs.csv", &table)],
        text,
    )
}

fn evolve(inv: &Invocation, config: &RunConfig, spec: SweepSpec) -> Result<Report, CliError> {
    let spec = with_outputs(spec, &[Output::Curve, Output::Events]);
    let curves = CurveRow::table(&spec.baths, &CurveRow::from_results(&run_curve(&spec)?));
    let events = EventRow::table(&EventRow::from_results(&run_events(&spec)?));
    write(
        inv,
        config,
        output_dir(inv, config),
        &[("curves.csv", &curves), ("events.csv", &events)],
        String::new(),
    )
}

fn sweep(inv: &Invocation, config: &RunConfig, spec: SweepSpec) -> Result<Report, CliError> {
    let spec = with_outputs(spec, &[Output::MaxConcurrence, Output::Events]);
    let max = MaxRow::table(&MaxRow::from_results(&run_max_concurrence(&spec)?));
    let events = EventRow::table(&EventRow::from_results(&run_events(&spec)?));
    write(
        inv,
        config,
        output_dir(inv, config),
        &[("max_concurrence.csv", &max), ("events.csv", &events)],
        String::new(),
    )
}

fn region(inv: &Invocation, config: &RunConfig, spec: SweepSpec) -> Result<Report, CliError> {
    if spec.baths.len() != BathKind::ALL.len() {
        return Err(CliError::Validation(
            "physics.baths: a region map needs both bath modes".into(),
        ));
    }
    if spec.initial_states.len() != 1 {
        return Err(CliError::Validation(
            "initial_states: a region map needs exactly one".into(),
        ));
    }
    if spec.polarizations.len() != 1 {
        return Err(CliError::Validation(
            "polarizations: a region map needs exactly one".into(),
        ));
    }
    let spec = with_outputs(spec, &[Output::Region]);
    let map = run_region_map(&spec)?;
    let mut text = format!("{} cells, event = {}\n", map.cells.len(), map.event.label());
    for (label, count) in map.counts() {
        let _ = writeln!(text, "{:>17} {count}", label.label());
    }
    let table = region_table(&map);
    write(
        inv,
        config,
        output_dir(inv, config),
        &[("region.csv", &table)],
        text,
    )
}
