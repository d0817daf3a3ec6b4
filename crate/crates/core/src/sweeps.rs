//! Parameter sweeps over acceleration, separation, initial state and dipole
//! geometry, and classification of the `(a/ω, ωL)` plane by which bath shows a
//! given entanglement event.
//!
//! Cells are independent and evaluated in parallel; results are always
//! returned in cell order, so output is identical for any thread count.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::coefficients::{assemble, BathKind, CoefficientSet, DipoleOrientation, SystemParams};
use crate::dynamics::{InitialState, Propagator, XState};
use crate::entanglement::{detect_events, EntanglementEvents, Trajectory};
use crate::error::{Error, Result};
use crate::spectral::AtomOrder;

pub const DEFAULT_HORIZON: f64 = 50.0;
pub const DEFAULT_SAMPLES: usize = 400;
/// Exponential stretch of the default time grid; larger values crowd samples
/// towards `τ = 0`.
pub const DEFAULT_STRETCH: f64 = 6.0;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSweep(msg.into())
}

/// Values taken by one swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis(Vec<f64>);

impl Axis {
    pub fn fixed(value: f64) -> Self {
        Self(vec![value])
    }

    pub fn values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("axis has no values"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("axis values must be finite"));
        }
        Ok(Self(values))
    }

    /// `count` evenly spaced values from `min` to `max` inclusive.
    pub fn linspace(min: f64, max: f64, count: usize) -> Result<Self> {
        check_range(min, max, count)?;
        let span = max - min;
        let last = (count - 1) as f64;
        Self::values((0..count).map(|k| min + span * k as f64 / last).collect())
    }

    /// `count` evenly spaced values in `(min, max]`. Doubling `count` keeps
    /// every previous value bit for bit.
    pub fn open_linspace(min: f64, max: f64, count: usize) -> Result<Self> {
        check_range(min, max, count)?;
        let span = max - min;
        Self::values(
            (1..=count)
                .map(|k| min + span * k as f64 / count as f64)
                .collect(),
        )
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_range(min: f64, max: f64, count: usize) -> Result<()> {
    if count < 2 {
        return Err(invalid(format!(
            "a swept axis needs at least 2 points, got {count}"
        )));
    }
    if !(min.is_finite() && max.is_finite() && max > min) {
        return Err(invalid(format!("invalid axis range [{min}, {max}]")));
    }
    Ok(())
}

/// Sampling of `Γ₀τ ∈ [0, horizon]`, geometrically denser near zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub horizon: f64,
    pub samples: usize,
    pub stretch: f64,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            horizon: DEFAULT_HORIZON,
            samples: DEFAULT_SAMPLES,
            stretch: DEFAULT_STRETCH,
        }
    }
}

impl TimeGrid {
    pub fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(invalid(format!(
                "time grid needs at least 2 samples, got {}",
                self.samples
            )));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(invalid(format!(
                "time horizon must be positive, got {}",
                self.horizon
            )));
        }
        if !(self.stretch.is_finite() && self.stretch >= 0.0) {
            return Err(invalid(format!(
                "time stretch must be non-negative, got {}",
                self.stretch
            )));
        }
        Ok(())
    }

    /// `τ_k = T (e^{sk/(n−1)} − 1)/(e^s − 1)`, or uniform for `s = 0`.
    pub fn times(&self) -> Vec<f64> {
        let n = self.samples;
        let last = (n - 1) as f64;
        let s = self.stretch;
        let mut times: Vec<f64> = (0..n)
            .map(|k| {
                let u = k as f64 / last;
                if s == 0.0 {
                    self.horizon * u
                } else {
                    self.horizon * (s * u).exp_m1() / s.exp_m1()
                }
            })
            .collect();
        times[n - 1] = self.horizon;
        times
    }
}

/// Result tables a sweep is asked to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Output {
    Curve,
    MaxConcurrence,
    Events,
    Region,
}

impl Output {
    pub fn label(self) -> &'static str {
        match self {
            Output::Curve => "curve",
            Output::MaxConcurrence => "max_concurrence",
            Output::Events => "events",
            Output::Region => "region",
        }
    }
}

impl FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Output::Curve,
            Output::MaxConcurrence,
            Output::Events,
            Output::Region,
        ]
        .into_iter()
        .find(|o| o.label() == s)
        .ok_or_else(|| invalid(format!("unknown output `{s}`")))
    }
}

/// Event used to classify region-map cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegionEvent {
    #[default]
    Revival,
    Enhancement,
}

impl RegionEvent {
    pub fn label(self) -> &'static str {
        match self {
            RegionEvent::Revival => "revival",
            RegionEvent::Enhancement => "enhancement",
        }
    }

    pub fn occurs(self, events: &EntanglementEvents) -> bool {
        match self {
            RegionEvent::Revival => events.revival,
            RegionEvent::Enhancement => events.enhancement,
        }
    }
}

impl FromStr for RegionEvent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "revival" => Ok(RegionEvent::Revival),
            "enhancement" => Ok(RegionEvent::Enhancement),
            _ => Err(invalid(format!("unknown region event `{s}`"))),
        }
    }
}

/// A sweep over the cartesian product
/// `initial_states × polarizations × accelerations × separations`,
/// evaluated for every bath in `baths`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub initial_states: Vec<InitialState>,
    pub polarizations: Vec<(DipoleOrientation, DipoleOrientation)>,
    pub baths: Vec<BathKind>,
    pub accelerations: Axis,
    pub separations: Axis,
    pub gamma0_over_omega: f64,
    pub atom_order: AtomOrder,
    pub time: TimeGrid,
    pub outputs: BTreeSet<Output>,
    pub region_event: RegionEvent,
}

/// One point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub initial_state: InitialState,
    pub dipoles: (DipoleOrientation, DipoleOrientation),
    pub a_over_omega: f64,
    pub omega_l: f64,
}

impl SweepSpec {
    /// A single-state, single-geometry sweep over both baths with default
    /// time grid and every output enabled.
    pub fn new(
        initial_state: InitialState,
        dipoles: (DipoleOrientation, DipoleOrientation),
        accelerations: Axis,
        separations: Axis,
    ) -> Self {
        Self {
            initial_states: vec![initial_state],
            polarizations: vec![dipoles],
            baths: BathKind::ALL.to_vec(),
            accelerations,
            separations,
            gamma0_over_omega: 1.0,
            atom_order: AtomOrder::Forward,
            time: TimeGrid::default(),
            outputs: [
                Output::Curve,
                Output::MaxConcurrence,
                Output::Events,
                Output::Region,
            ]
            .into_iter()
            .collect(),
            region_event: RegionEvent::Revival,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.initial_states.is_empty() {
            return Err(invalid("no initial states"));
        }
        if self.polarizations.is_empty() {
            return Err(invalid("no polarizations"));
        }
        if self.baths.is_empty() {
            return Err(invalid("no bath modes"));
        }
        let unique: BTreeSet<_> = self.baths.iter().collect();
        if unique.len() != self.baths.len() {
            return Err(invalid("bath modes listed twice"));
        }
        if self.accelerations.is_empty() || self.separations.is_empty() {
            return Err(invalid("empty parameter grid"));
        }
        if let Some(a) = self.accelerations.as_slice().iter().find(|&&a| a < 0.0) {
            return Err(invalid(format!(
                "acceleration must be non-negative, got {a}"
            )));
        }
        if let Some(l) = self.separations.as_slice().iter().find(|&&l| l <= 0.0) {
            return Err(invalid(format!(
                "separation must be strictly positive, got {l}"
            )));
        }
        if self.outputs.is_empty() {
            return Err(invalid("no outputs requested"));
        }
        self.time.validate()?;
        for s in &self.initial_states {
            s.state()?;
        }
        // Catches Γ₀ and dipole problems with the first cell's parameters.
        let (d1, d2) = self.polarizations[0];
        SystemParams::new(
            self.accelerations.as_slice()[0],
            self.separations.as_slice()[0],
            d1,
            d2,
            self.baths[0],
        )?
        .with_gamma0(self.gamma0_over_omega)?;
        Ok(())
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &initial_state in &self.initial_states {
            for &dipoles in &self.polarizations {
                for &a_over_omega in self.accelerations.as_slice() {
                    for &omega_l in self.separations.as_slice() {
                        cells.push(Cell {
                            index: cells.len(),
                            initial_state,
                            dipoles,
                            a_over_omega,
                            omega_l,
                        });
                    }
                }
            }
        }
        cells
    }

    pub fn params(&self, cell: &Cell, bath: BathKind) -> Result<SystemParams> {
        SystemParams::new(
            cell.a_over_omega,
            cell.omega_l,
            cell.dipoles.0,
            cell.dipoles.1,
            bath,
        )?
        .with_gamma0(self.gamma0_over_omega)
    }

    fn require(&self, output: Output) -> Result<()> {
        self.validate()?;
        if self.outputs.contains(&output) {
            Ok(())
        } else {
            Err(invalid(format!(
                "sweep does not request the `{}` output",
                output.label()
            )))
        }
    }

    fn propagator(&self, cell: &Cell, bath: BathKind) -> Result<(CoefficientSet, Propagator)> {
        let coeffs = assemble(&self.params(cell, bath)?, self.atom_order)?;
        Ok((coeffs, Propagator::new(&coeffs)?))
    }
}

/// Concurrence-vs-time series of one bath for one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BathSeries {
    pub bath: BathKind,
    pub coefficients: CoefficientSet,
    pub states: Vec<XState>,
    pub concurrence: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveCell {
    pub cell: Cell,
    pub times: Vec<f64>,
    pub series: Vec<BathSeries>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventCell {
    pub cell: Cell,
    pub bath: BathKind,
    pub events: EntanglementEvents,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxCell {
    pub cell: Cell,
    pub bath: BathKind,
    pub max_concurrence: f64,
    pub max_time: f64,
}

/// Full time series on the spec's grid for every cell and bath.
pub fn run_curve(spec: &SweepSpec) -> Result<Vec<CurveCell>> {
    spec.require(Output::Curve)?;
    let times = spec.time.times();
    spec.cells()
        .par_iter()
        .map(|cell| {
            let initial = cell.initial_state.state()?;
            let series = spec
                .baths
                .iter()
                .map(|&bath| {
                    let (coefficients, propagator) = spec.propagator(cell, bath)?;
                    let traj = Trajectory::sample(propagator, &initial, &times)?;
                    Ok(BathSeries {
                        bath,
                        coefficients,
                        states: traj.states().to_vec(),
                        concurrence: traj.concurrence().to_vec(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CurveCell {
                cell: *cell,
                times: times.clone(),
                series,
            })
        })
        .collect()
}

fn events_for(spec: &SweepSpec, cell: &Cell, bath: BathKind, times: &[f64]) -> Result<EventCell> {
    let initial = cell.initial_state.state()?;
    let (_, propagator) = spec.propagator(cell, bath)?;
    let traj = Trajectory::sample_until_settled(propagator, &initial, times)?;
    Ok(EventCell {
        cell: *cell,
        bath,
        events: detect_events(&traj)?,
    })
}

fn all_events(spec: &SweepSpec) -> Result<Vec<EventCell>> {
    let times = spec.time.times();
    let jobs: Vec<(Cell, BathKind)> = spec
        .cells()
        .into_iter()
        .flat_map(|c| spec.baths.iter().map(move |&b| (c, b)))
        .collect();
    jobs.par_iter()
        .map(|(cell, bath)| events_for(spec, cell, *bath, &times))
        .collect()
}

/// Entanglement events for every cell and bath, in cell-major order.
pub fn run_events(spec: &SweepSpec) -> Result<Vec<EventCell>> {
    spec.require(Output::Events)?;
    all_events(spec)
}

/// Maximum concurrence over the evolution for every cell and bath, located by
/// sampling and golden-section refinement.
pub fn run_max_concurrence(spec: &SweepSpec) -> Result<Vec<MaxCell>> {
    spec.require(Output::MaxConcurrence)?;
    Ok(all_events(spec)?
        .into_iter()
        .map(|e| MaxCell {
            cell: e.cell,
            bath: e.bath,
            max_concurrence: e.events.max_concurrence,
            max_time: e.events.max_time,
        })
        .collect())
}

/// Which baths show the classified event in a region-map cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegionLabel {
    Both,
    AcceleratedOnly,
    ThermalOnly,
    Neither,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 4] = [
        RegionLabel::Both,
        RegionLabel::AcceleratedOnly,
        RegionLabel::ThermalOnly,
        RegionLabel::Neither,
    ];

    pub fn classify(accelerated: bool, thermal: bool) -> Self {
        match (accelerated, thermal) {
            (true, true) => RegionLabel::Both,
            (true, false) => RegionLabel::AcceleratedOnly,
            (false, true) => RegionLabel::ThermalOnly,
            (false, false) => RegionLabel::Neither,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RegionLabel::Both => "both",
            RegionLabel::AcceleratedOnly => "accelerated-only",
            RegionLabel::ThermalOnly => "thermal-only",
            RegionLabel::Neither => "neither",
        }
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for RegionLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RegionLabel::ALL
            .into_iter()
            .find(|l| l.label() == s)
            .ok_or_else(|| invalid(format!("unknown region label `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionCell {
    pub a_over_omega: f64,
    pub omega_l: f64,
    pub accelerated: bool,
    pub thermal: bool,
    pub label: RegionLabel,
}

/// Classification of the `(a/ω, ωL)` grid, stored acceleration-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionMap {
    pub event: RegionEvent,
    pub accelerations: Vec<f64>,
    pub separations: Vec<f64>,
    pub cells: Vec<RegionCell>,
}

impl RegionMap {
    pub fn cell(&self, i_accel: usize, j_sep: usize) -> &RegionCell {
        &self.cells[i_accel * self.separations.len() + j_sep]
    }

    pub fn counts(&self) -> BTreeMap<RegionLabel, usize> {
        let mut counts: BTreeMap<RegionLabel, usize> =
            RegionLabel::ALL.iter().map(|&l| (l, 0)).collect();
        for c in &self.cells {
            *counts.entry(c.label).or_default() += 1;
        }
        counts
    }

    pub fn contains(&self, label: RegionLabel) -> bool {
        self.cells.iter().any(|c| c.label == label)
    }

    /// Coarse cells whose four neighbours share their label but whose
    /// counterpart on the finer map `fine` carries a different label. Every
    /// coarse grid value must also occur on the fine grid.
    pub fn refinement_flips(&self, fine: &RegionMap) -> Result<Vec<(usize, usize)>> {
        let locate = |value: f64, axis: &[f64]| {
            axis.iter()
                .position(|&v| v == value)
                .ok_or_else(|| invalid(format!("grid value {value} missing from the finer map")))
        };
        let (na, nl) = (self.accelerations.len(), self.separations.len());
        let mut flips = Vec::new();
        for i in 0..na {
            for j in 0..nl {
                let label = self.cell(i, j).label;
                let neighbours = [
                    (i.wrapping_sub(1), j),
                    (i + 1, j),
                    (i, j.wrapping_sub(1)),
                    (i, j + 1),
                ];
                let interior = neighbours
                    .iter()
                    .filter(|&&(p, q)| p < na && q < nl)
                    .all(|&(p, q)| self.cell(p, q).label == label);
                if !interior {
                    continue;
                }
                let fi = locate(self.accelerations[i], &fine.accelerations)?;
                let fj = locate(self.separations[j], &fine.separations)?;
                if fine.cell(fi, fj).label != label {
                    flips.push((i, j));
                }
            }
        }
        Ok(flips)
    }
}

/// Classifies every `(a/ω, ωL)` cell by which bath shows the spec's region
/// event. Needs both baths, one initial state and one dipole geometry.
pub fn run_region_map(spec: &SweepSpec) -> Result<RegionMap> {
    spec.require(Output::Region)?;
    let baths: BTreeSet<_> = spec.baths.iter().copied().collect();
    if baths != BathKind::ALL.into_iter().collect() {
        return Err(invalid("a region map needs both bath modes"));
    }
    if spec.initial_states.len() != 1 || spec.polarizations.len() != 1 {
        return Err(invalid(
            "a region map needs exactly one initial state and one polarization",
        ));
    }
    let events = all_events(spec)?;
    let cells = events
        .chunks(spec.baths.len())
        .map(|pair| {
            let occurs = |bath| {
                pair.iter()
                    .any(|e| e.bath == bath && spec.region_event.occurs(&e.events))
            };
            let accelerated = occurs(BathKind::AcceleratedVacuum);
            let thermal = occurs(BathKind::ThermalAtUnruh);
            RegionCell {
                a_over_omega: pair[0].cell.a_over_omega,
                omega_l: pair[0].cell.omega_l,
                accelerated,
                thermal,
                label: RegionLabel::classify(accelerated, thermal),
            }
        })
        .collect();
    Ok(RegionMap {
        event: spec.region_event,
        accelerations: spec.accelerations.as_slice().to_vec(),
        separations: spec.separations.as_slice().to_vec(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_axis_nests_under_doubling() {
        let coarse = Axis::open_linspace(0.0, 3.0, 7).unwrap();
        let fine = Axis::open_linspace(0.0, 3.0, 14).unwrap();
        for (k, v) in coarse.as_slice().iter().enumerate() {
            assert_eq!(*v, fine.as_slice()[2 * k + 1]);
        }
        assert_eq!(*coarse.as_slice().last().unwrap(), 3.0);
        assert!(Axis::open_linspace(0.0, 3.0, 1).is_err());
        assert!(Axis::linspace(1.0, 1.0, 4).is_err());
    }

    #[test]
    fn time_grid_shape() {
        let g = TimeGrid::default();
        let t = g.times();
        assert_eq!(t.len(), 400);
        assert_eq!(t[0], 0.0);
        assert_eq!(t[399], 50.0);
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        assert!(t[1] < 1e-2);
        let uniform = TimeGrid { stretch: 0.0, ..g }.times();
        assert!((uniform[1] - 50.0 / 399.0).abs() < 1e-15);
    }

    #[test]
    fn spec_validation() {
        let z = DipoleOrientation::z();
        let mut spec = SweepSpec::new(
            InitialState::Symmetric,
            (z, z),
            Axis::fixed(1.0),
            Axis::fixed(1.0),
        );
        assert!(spec.validate().is_ok());
        spec.separations = Axis::fixed(0.0);
        assert!(spec.validate().is_err());
        spec.separations = Axis::fixed(1.0);
        spec.outputs.clear();
        assert!(spec.validate().is_err());
        spec.outputs.insert(Output::Events);
        assert!(run_curve(&spec).is_err());
        spec.baths = vec![BathKind::ThermalAtUnruh];
        spec.outputs.insert(Output::Region);
        assert!(run_region_map(&spec).is_err());
    }

    #[test]
    fn labels_round_trip() {
        for l in RegionLabel::ALL {
            assert_eq!(l.label().parse::<RegionLabel>().unwrap(), l);
        }
        assert!("revival".parse::<RegionEvent>().is_ok());
        assert!("curves".parse::<Output>().is_err());
    }

    #[test]
    fn cell_order_is_cartesian() {
        let z = DipoleOrientation::z();
        let mut spec = SweepSpec::new(
            InitialState::Symmetric,
            (z, z),
            Axis::values(vec![0.5, 1.0]).unwrap(),
            Axis::values(vec![1.0, 2.0, 3.0]).unwrap(),
        );
        spec.initial_states.push(InitialState::Antisymmetric);
        let cells = spec.cells();
        assert_eq!(cells.len(), 12);
        assert_eq!(cells[4].a_over_omega, 1.0);
        assert_eq!(cells[4].omega_l, 2.0);
        assert_eq!(cells[6].initial_state, InitialState::Antisymmetric);
        assert!(cells.iter().enumerate().all(|(k, c)| c.index == k));
    }
}
