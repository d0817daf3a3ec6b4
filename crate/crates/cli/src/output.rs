//! CSV tables and the metadata sidecar.
//!
//! Reals are written with 17 significant digits (`{:.16e}`), which round-trips
//! every `f64` exactly. Each table has a row type with a matching parser so
//! emitted files can be read back into the values that produced them.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};
use unruh_core::entanglement::{Transition, TransitionKind};
use unruh_core::sweeps::{Cell, CurveCell, EventCell, MaxCell, RegionCell, RegionLabel, RegionMap};
use unruh_core::{AtomOrder, BathKind, CoefficientSet, EntanglementEvents, XState};

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("row {row}, column `{column}`: cannot parse `{value}`")]
    BadValue {
        row: usize,
        column: String,
        value: String,
    },
}

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn optional(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

/// An in-memory table with a fixed header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, TableError> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&self.header)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        writer.flush().map_err(csv::Error::from)?;
        Ok(writer
            .into_inner()
            .map_err(|e| csv::Error::from(e.into_error()))?)
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, TableError> {
        let mut reader = csv::Reader::from_reader(bytes);
        let header = reader.headers()?.iter().map(str::to_string).collect();
        let rows = reader
            .records()
            .map(|r| r.map(|r| r.iter().map(str::to_string).collect()))
            .collect::<Result<_, _>>()?;
        Ok(Self { header, rows })
    }

    fn reader(&self) -> Columns<'_> {
        Columns { table: self }
    }
}

struct Columns<'a> {
    table: &'a Table,
}

impl Columns<'_> {
    fn index(&self, name: &str) -> Result<usize, TableError> {
        self.table
            .header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| TableError::MissingColumn(name.to_string()))
    }

    fn text<'r>(&self, row: &'r [String], name: &str) -> Result<&'r str, TableError> {
        Ok(&row[self.index(name)?])
    }

    fn value<T: std::str::FromStr>(
        &self,
        k: usize,
        row: &[String],
        name: &str,
    ) -> Result<T, TableError> {
        let raw = self.text(row, name)?;
        raw.parse().map_err(|_| TableError::BadValue {
            row: k,
            column: name.to_string(),
            value: raw.to_string(),
        })
    }

    fn optional(&self, k: usize, row: &[String], name: &str) -> Result<Option<f64>, TableError> {
        if self.text(row, name)?.is_empty() {
            Ok(None)
        } else {
            self.value(k, row, name).map(Some)
        }
    }
}

fn bad(row: usize, column: &str, value: &str) -> TableError {
    TableError::BadValue {
        row,
        column: column.to_string(),
        value: value.to_string(),
    }
}

fn parse_bath(k: usize, s: &str) -> Result<BathKind, TableError> {
    BathKind::ALL
        .into_iter()
        .find(|b| b.label() == s)
        .ok_or_else(|| bad(k, "bath", s))
}

const CELL_COLUMNS: [&str; 10] = [
    "state",
    "p",
    "d1x",
    "d1y",
    "d1z",
    "d2x",
    "d2y",
    "d2z",
    "a_over_omega",
    "omega_l",
];

/// Identifies the sweep cell a row belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct CellKey {
    pub state: String,
    pub p: Option<f64>,
    pub dipole1: [f64; 3],
    pub dipole2: [f64; 3],
    pub a_over_omega: f64,
    pub omega_l: f64,
}

impl CellKey {
    pub fn of(cell: &Cell) -> Self {
        Self {
            state: cell.initial_state.name().to_string(),
            p: cell.initial_state.mixing(),
            dipole1: cell.dipoles.0.components(),
            dipole2: cell.dipoles.1.components(),
            a_over_omega: cell.a_over_omega,
            omega_l: cell.omega_l,
        }
    }

    fn record(&self) -> Vec<String> {
        let mut r = vec![self.state.clone(), optional(self.p)];
        r.extend(self.dipole1.iter().chain(&self.dipole2).map(|&x| real(x)));
        r.push(real(self.a_over_omega));
        r.push(real(self.omega_l));
        r
    }

    fn read(cols: &Columns<'_>, k: usize, row: &[String]) -> Result<Self, TableError> {
        let d = |prefix: &str| -> Result<[f64; 3], TableError> {
            Ok([
                cols.value(k, row, &format!("{prefix}x"))?,
                cols.value(k, row, &format!("{prefix}y"))?,
                cols.value(k, row, &format!("{prefix}z"))?,
            ])
        };
        Ok(Self {
            state: cols.text(row, "state")?.to_string(),
            p: cols.optional(k, row, "p")?,
            dipole1: d("d1")?,
            dipole2: d("d2")?,
            a_over_omega: cols.value(k, row, "a_over_omega")?,
            omega_l: cols.value(k, row, "omega_l")?,
        })
    }
}

const STATE_FIELDS: [&str; 8] = [
    "p_gg", "p_aa", "p_ss", "p_ee", "c_as_re", "c_as_im", "c_ge_re", "c_ge_im",
];

fn state_record(s: &XState) -> [f64; 8] {
    [
        s.p_gg, s.p_aa, s.p_ss, s.p_ee, s.c_as.re, s.c_as.im, s.c_ge.re, s.c_ge.im,
    ]
}

/// One time sample of one cell, with the concurrence and state for each bath.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub cell: CellKey,
    pub gamma0_tau: f64,
    pub concurrence: Vec<(BathKind, f64)>,
    pub states: Vec<(BathKind, XState)>,
}

impl CurveRow {
    pub fn from_results(cells: &[CurveCell]) -> Vec<Self> {
        let mut rows = Vec::new();
        for c in cells {
            let key = CellKey::of(&c.cell);
            for (k, &t) in c.times.iter().enumerate() {
                rows.push(CurveRow {
                    cell: key.clone(),
                    gamma0_tau: t,
                    concurrence: c
                        .series
                        .iter()
                        .map(|s| (s.bath, s.concurrence[k]))
                        .collect(),
                    states: c.series.iter().map(|s| (s.bath, s.states[k])).collect(),
                });
            }
        }
        rows
    }

    pub fn table(baths: &[BathKind], rows: &[Self]) -> Table {
        let mut header: Vec<String> = CELL_COLUMNS.iter().map(|s| s.to_string()).collect();
        header.push("gamma0_tau".into());
        header.extend(baths.iter().map(|b| format!("C_{}", b.label())));
        for b in baths {
            header.extend(STATE_FIELDS.iter().map(|f| format!("{f}_{}", b.label())));
        }
        let mut table = Table::new(header);
        for row in rows {
            let mut r = row.cell.record();
            r.push(real(row.gamma0_tau));
            r.extend(row.concurrence.iter().map(|&(_, c)| real(c)));
            for (_, s) in &row.states {
                r.extend(state_record(s).into_iter().map(real));
            }
            table.push(r);
        }
        table
    }

    pub fn parse(table: &Table) -> Result<Vec<Self>, TableError> {
        let cols = table.reader();
        let baths: Vec<BathKind> = table
            .header
            .iter()
            .filter_map(|h| h.strip_prefix("C_"))
            .map(|b| parse_bath(0, b))
            .collect::<Result<_, _>>()?;
        table
            .rows
            .iter()
            .enumerate()
            .map(|(k, row)| {
                let mut concurrence = Vec::new();
                let mut states = Vec::new();
                for &b in &baths {
                    let label = b.label();
                    concurrence.push((b, cols.value(k, row, &format!("C_{label}"))?));
                    let v = |f: &str| cols.value::<f64>(k, row, &format!("{f}_{label}"));
                    let mut s =
                        XState::from_populations([v("p_gg")?, v("p_aa")?, v("p_ss")?, v("p_ee")?]);
                    s.c_as = num_complex::Complex64::new(v("c_as_re")?, v("c_as_im")?);
                    s.c_ge = num_complex::Complex64::new(v("c_ge_re")?, v("c_ge_im")?);
                    states.push((b, s));
                }
                Ok(CurveRow {
                    cell: CellKey::read(&cols, k, row)?,
                    gamma0_tau: cols.value(k, row, "gamma0_tau")?,
                    concurrence,
                    states,
                })
            })
            .collect()
    }
}

fn transitions_text(transitions: &[Transition]) -> String {
    transitions
        .iter()
        .map(|t| {
            let kind = match t.kind {
                TransitionKind::Death => "death",
                TransitionKind::Birth => "birth",
            };
            format!("{kind}@{}", real(t.time))
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn parse_transitions(k: usize, s: &str) -> Result<Vec<Transition>, TableError> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|item| {
            let (kind, time) = item
                .split_once('@')
                .ok_or_else(|| bad(k, "transitions", item))?;
            let kind = match kind {
                "death" => TransitionKind::Death,
                "birth" => TransitionKind::Birth,
                _ => return Err(bad(k, "transitions", item)),
            };
            let time = time.parse().map_err(|_| bad(k, "transitions", item))?;
            Ok(Transition { time, kind })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventRow {
    pub cell: CellKey,
    pub bath: BathKind,
    pub events: EntanglementEvents,
}

impl EventRow {
    pub fn from_results(cells: &[EventCell]) -> Vec<Self> {
        cells
            .iter()
            .map(|c| EventRow {
                cell: CellKey::of(&c.cell),
                bath: c.bath,
                events: c.events.clone(),
            })
            .collect()
    }

    pub fn table(rows: &[Self]) -> Table {
        let mut header: Vec<&str> = CELL_COLUMNS.to_vec();
        header.extend([
            "bath",
            "initial_concurrence",
            "death_time",
            "birth_time",
            "revival_time",
            "revival",
            "enhancement",
            "max_concurrence",
            "max_time",
            "transitions",
        ]);
        let mut table = Table::new(header);
        for row in rows {
            let e = &row.events;
            let mut r = row.cell.record();
            r.extend([
                row.bath.label().to_string(),
                real(e.initial_concurrence),
                optional(e.death_time),
                optional(e.birth_time),
                optional(e.revival_time),
                e.revival.to_string(),
                e.enhancement.to_string(),
                real(e.max_concurrence),
                real(e.max_time),
                transitions_text(&e.transitions),
            ]);
            table.push(r);
        }
        table
    }

    pub fn parse(table: &Table) -> Result<Vec<Self>, TableError> {
        let cols = table.reader();
        table
            .rows
            .iter()
            .enumerate()
            .map(|(k, row)| {
                Ok(EventRow {
                    cell: CellKey::read(&cols, k, row)?,
                    bath: parse_bath(k, cols.text(row, "bath")?)?,
                    events: EntanglementEvents {
                        initial_concurrence: cols.value(k, row, "initial_concurrence")?,
                        death_time: cols.optional(k, row, "death_time")?,
                        birth_time: cols.optional(k, row, "birth_time")?,
                        revival_time: cols.optional(k, row, "revival_time")?,
                        revival: cols.value(k, row, "revival")?,
                        enhancement: cols.value(k, row, "enhancement")?,
                        max_concurrence: cols.value(k, row, "max_concurrence")?,
                        max_time: cols.value(k, row, "max_time")?,
                        transitions: parse_transitions(k, cols.text(row, "transitions")?)?,
                    },
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxRow {
    pub cell: CellKey,
    pub bath: BathKind,
    pub max_concurrence: f64,
    pub max_time: f64,
}

impl MaxRow {
    pub fn from_results(cells: &[MaxCell]) -> Vec<Self> {
        cells
            .iter()
            .map(|c| MaxRow {
                cell: CellKey::of(&c.cell),
                bath: c.bath,
                max_concurrence: c.max_concurrence,
                max_time: c.max_time,
            })
            .collect()
    }

    pub fn table(rows: &[Self]) -> Table {
        let mut header: Vec<&str> = CELL_COLUMNS.to_vec();
        header.extend(["bath", "max_concurrence", "max_time"]);
        let mut table = Table::new(header);
        for row in rows {
            let mut r = row.cell.record();
            r.extend([
                row.bath.label().to_string(),
                real(row.max_concurrence),
                real(row.max_time),
            ]);
            table.push(r);
        }
        table
    }

    pub fn parse(table: &Table) -> Result<Vec<Self>, TableError> {
        let cols = table.reader();
        table
            .rows
            .iter()
            .enumerate()
            .map(|(k, row)| {
                Ok(MaxRow {
                    cell: CellKey::read(&cols, k, row)?,
                    bath: parse_bath(k, cols.text(row, "bath")?)?,
                    max_concurrence: cols.value(k, row, "max_concurrence")?,
                    max_time: cols.value(k, row, "max_time")?,
                })
            })
            .collect()
    }
}

pub fn region_table(map: &RegionMap) -> Table {
    let mut table = Table::new(["a_over_omega", "omega_l", "accelerated", "thermal", "label"]);
    for c in &map.cells {
        table.push(vec![
            real(c.a_over_omega),
            real(c.omega_l),
            c.accelerated.to_string(),
            c.thermal.to_string(),
            c.label.label().to_string(),
        ]);
    }
    table
}

pub fn parse_region(table: &Table) -> Result<Vec<RegionCell>, TableError> {
    let cols = table.reader();
    table
        .rows
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let label = cols.text(row, "label")?;
            Ok(RegionCell {
                a_over_omega: cols.value(k, row, "a_over_omega")?,
                omega_l: cols.value(k, row, "omega_l")?,
                accelerated: cols.value(k, row, "accelerated")?,
                thermal: cols.value(k, row, "thermal")?,
                label: label
                    .parse::<RegionLabel>()
                    .map_err(|_| bad(k, "label", label))?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffRow {
    pub dipole1: [f64; 3],
    pub dipole2: [f64; 3],
    pub a_over_omega: f64,
    pub omega_l: f64,
    pub bath: BathKind,
    pub order: AtomOrder,
    pub coefficients: CoefficientSet,
}

impl CoeffRow {
    pub fn table(rows: &[Self]) -> Table {
        let mut table = Table::new([
            "d1x",
            "d1y",
            "d1z",
            "d2x",
            "d2y",
            "d2z",
            "a_over_omega",
            "omega_l",
            "bath",
            "order",
            "A1",
            "B1",
            "A2",
            "B2",
        ]);
        for row in rows {
            let c = row.coefficients;
            let mut r: Vec<String> = row
                .dipole1
                .iter()
                .chain(&row.dipole2)
                .map(|&x| real(x))
                .collect();
            r.extend([
                real(row.a_over_omega),
                real(row.omega_l),
                row.bath.label().to_string(),
                row.order.label().to_string(),
                real(c.a1),
                real(c.b1),
                real(c.a2),
                real(c.b2),
            ]);
            table.push(r);
        }
        table
    }

    pub fn parse(table: &Table) -> Result<Vec<Self>, TableError> {
        let cols = table.reader();
        table
            .rows
            .iter()
            .enumerate()
            .map(|(k, row)| {
                let v = |name: &str| cols.value::<f64>(k, row, name);
                let order = match cols.text(row, "order")? {
                    "12" => AtomOrder::Forward,
                    "21" => AtomOrder::Reverse,
                    other => return Err(bad(k, "order", other)),
                };
                Ok(CoeffRow {
                    dipole1: [v("d1x")?, v("d1y")?, v("d1z")?],
                    dipole2: [v("d2x")?, v("d2y")?, v("d2z")?],
                    a_over_omega: v("a_over_omega")?,
                    omega_l: v("omega_l")?,
                    bath: parse_bath(k, cols.text(row, "bath")?)?,
                    order,
                    coefficients: CoefficientSet {
                        a1: v("A1")?,
                        b1: v("B1")?,
                        a2: v("A2")?,
                        b2: v("B2")?,
                    },
                })
            })
            .collect()
    }
}

/// Contents of `metadata.json`. Nothing run-specific beyond the inputs is
/// recorded, so identical inputs give identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub preset: Option<String>,
    pub config: serde_json::Value,
    /// SHA-256 of every table, keyed by file name.
    pub files: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes the tables and a metadata sidecar into `dir`, creating it if needed.
pub fn write_outputs(
    dir: &Path,
    tables: &[(&str, &Table)],
    mut metadata: Metadata,
) -> Result<Vec<String>, WriteError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, table) in tables {
        let bytes = table.to_bytes()?;
        metadata.files.insert(name.to_string(), sha256_hex(&bytes));
        fs::write(dir.join(name), &bytes)?;
        written.push(name.to_string());
    }
    let mut json = serde_json::to_string_pretty(&metadata).map_err(io::Error::from)?;
    json.push('\n');
    fs::write(dir.join("metadata.json"), json)?;
    written.push("metadata.json".to_string());
    Ok(written)
}

#[derive(Debug, thiserror::Error)]
pub enum WriteError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Table(#[from] TableError),
}
