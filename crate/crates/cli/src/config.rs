//! TOML run configuration.
//!
//! A configuration describes one sweep: the `(a/ω, ωL)` grid, initial
//! states, dipole geometries, bath modes and time grid. Which tables are
//! produced is decided by the subcommand. Unknown keys are rejected, and every
//! physical constraint is checked before any computation starts.

use std::fmt;
use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use unruh_core::sweeps::{Axis, RegionEvent, SweepSpec, TimeGrid};
use unruh_core::{AtomOrder, BathKind, DipoleOrientation, InitialState, SystemParams, XState};

/// A configuration problem, located by line and column for syntax errors or
/// by key path for semantic ones.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub location: String,
    pub message: String,
}

impl ConfigError {
    fn at(key: impl Into<String>, message: impl fmt::Display) -> Self {
        Self {
            location: key.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub grid: GridConfig,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default)]
    pub physics: PhysicsConfig,
    pub initial_states: Vec<StateConfig>,
    pub polarizations: Vec<PolarizationConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub a_over_omega: AxisConfig,
    pub omega_l: AxisConfig,
}

/// A single value, an explicit list, or an evenly spaced range. Ranges
/// exclude `min` unless `include_min` is set, so `(0, max]` grids never hit
/// the excluded endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisConfig {
    Value(f64),
    Values(Vec<f64>),
    Range(RangeConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeConfig {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub include_min: bool,
}

impl AxisConfig {
    fn to_axis(&self, key: &str) -> Result<Axis, ConfigError> {
        let axis = match self {
            AxisConfig::Value(v) => Ok(Axis::fixed(*v)),
            AxisConfig::Values(v) => Axis::values(v.clone()),
            AxisConfig::Range(r) if r.include_min => Axis::linspace(r.min, r.max, r.count),
            AxisConfig::Range(r) => Axis::open_linspace(r.min, r.max, r.count),
        };
        axis.map_err(|e| ConfigError::at(key, e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_stretch")]
    pub stretch: f64,
}

fn default_horizon() -> f64 {
    TimeGrid::default().horizon
}

fn default_samples() -> usize {
    TimeGrid::default().samples
}

fn default_stretch() -> f64 {
    TimeGrid::default().stretch
}

impl Default for TimeConfig {
    fn default() -> Self {
        let g = TimeGrid::default();
        Self {
            horizon: g.horizon,
            samples: g.samples,
            stretch: g.stretch,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderName {
    #[serde(rename = "12")]
    Forward,
    #[serde(rename = "21")]
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BathName {
    Accelerated,
    Thermal,
}

impl BathName {
    fn kind(self) -> BathKind {
        match self {
            BathName::Accelerated => BathKind::AcceleratedVacuum,
            BathName::Thermal => BathKind::ThermalAtUnruh,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsConfig {
    #[serde(default = "default_gamma0")]
    pub gamma0_over_omega: f64,
    #[serde(default = "default_order")]
    pub atom_order: OrderName,
    #[serde(default = "default_baths")]
    pub baths: Vec<BathName>,
}

fn default_gamma0() -> f64 {
    1.0
}

fn default_order() -> OrderName {
    OrderName::Forward
}

fn default_baths() -> Vec<BathName> {
    vec![BathName::Accelerated, BathName::Thermal]
}

impl Default for PhysicsConfig {
    fn default() -> Self {
        Self {
            gamma0_over_omega: default_gamma0(),
            atom_order: default_order(),
            baths: default_baths(),
        }
    }
}

/// `state` is one of `G`, `A`, `S`, `E`, `psi1`, `psi2` (which need `p`) or
/// `custom` (which needs `populations` and optionally `c_as`, `c_ge` as
/// `[re, im]` pairs).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub state: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub populations: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_as: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_ge: Option<[f64; 2]>,
}

impl StateConfig {
    fn to_state(&self, key: &str) -> Result<InitialState, ConfigError> {
        let err = |m: &str| ConfigError::at(key, m);
        let custom_fields =
            self.populations.is_some() || self.c_as.is_some() || self.c_ge.is_some();
        let needs_p = matches!(self.state.as_str(), "psi1" | "psi2");
        if needs_p != self.p.is_some() {
            return Err(err(if needs_p {
                "`p` is required for psi1 and psi2"
            } else {
                "`p` only applies to psi1 and psi2"
            }));
        }
        if custom_fields && self.state != "custom" {
            return Err(err(
                "`populations`, `c_as` and `c_ge` only apply to custom states",
            ));
        }
        let state = match self.state.as_str() {
            "G" => InitialState::Ground,
            "A" => InitialState::Antisymmetric,
            "S" => InitialState::Symmetric,
            "E" => InitialState::Excited,
            "psi1" => InitialState::Psi1(self.p.unwrap_or_default()),
            "psi2" => InitialState::Psi2(self.p.unwrap_or_default()),
            "custom" => {
                let p = self
                    .populations
                    .ok_or_else(|| err("custom states need `populations`"))?;
                let c = |v: Option<[f64; 2]>| {
                    let [re, im] = v.unwrap_or_default();
                    Complex64::new(re, im)
                };
                InitialState::Custom(XState {
                    c_as: c(self.c_as),
                    c_ge: c(self.c_ge),
                    ..XState::from_populations(p)
                })
            }
            other => {
                return Err(err(&format!(
                    "unknown state `{other}` (expected G, A, S, E, psi1, psi2 or custom)"
                )))
            }
        };
        state.state().map_err(|e| ConfigError::at(key, e))?;
        Ok(state)
    }
}

/// `"x"`, `"y"`, `"z"` or an explicit unit vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DipoleConfig {
    Axis(AxisName),
    Vector([f64; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    X,
    Y,
    Z,
}

impl DipoleConfig {
    fn to_dipole(&self, key: &str) -> Result<DipoleOrientation, ConfigError> {
        match self {
            DipoleConfig::Axis(AxisName::X) => Ok(DipoleOrientation::x()),
            DipoleConfig::Axis(AxisName::Y) => Ok(DipoleOrientation::y()),
            DipoleConfig::Axis(AxisName::Z) => Ok(DipoleOrientation::z()),
            DipoleConfig::Vector(v) => {
                DipoleOrientation::new(*v).map_err(|e| ConfigError::at(key, e))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarizationConfig {
    pub dipole1: DipoleConfig,
    pub dipole2: DipoleConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatName {
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionEventName {
    Revival,
    Enhancement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Used when `--out` is not given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<PathBuf>,
    #[serde(default = "default_format")]
    pub format: FormatName,
    #[serde(default = "default_region_event")]
    pub region_event: RegionEventName,
}

fn default_format() -> FormatName {
    FormatName::Csv
}

fn default_region_event() -> RegionEventName {
    RegionEventName::Revival
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: None,
            format: default_format(),
            region_event: default_region_event(),
        }
    }
}

impl RunConfig {
    /// Parses and fully validates a configuration.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: RunConfig = toml::from_str(text).map_err(|e| syntax_error(text, &e))?;
        config.to_spec()?;
        Ok(config)
    }

    /// Converts to a sweep with every output enabled; callers narrow
    /// `outputs` to what they produce.
    pub fn to_spec(&self) -> Result<SweepSpec, ConfigError> {
        let accelerations = self.grid.a_over_omega.to_axis("grid.a_over_omega")?;
        let separations = self.grid.omega_l.to_axis("grid.omega_l")?;
        if let Some(a) = accelerations.as_slice().iter().find(|&&a| a < 0.0) {
            return Err(ConfigError::at(
                "grid.a_over_omega",
                format!("a/ω must be non-negative, got {a}"),
            ));
        }
        if let Some(l) = separations.as_slice().iter().find(|&&l| l <= 0.0) {
            return Err(ConfigError::at(
                "grid.omega_l",
                format!("ωL must be strictly positive, got {l}"),
            ));
        }
        if self.initial_states.is_empty() {
            return Err(ConfigError::at(
                "initial_states",
                "at least one initial state is required",
            ));
        }
        if self.polarizations.is_empty() {
            return Err(ConfigError::at(
                "polarizations",
                "at least one polarization is required",
            ));
        }
        let initial_states = self
            .initial_states
            .iter()
            .enumerate()
            .map(|(k, s)| s.to_state(&format!("initial_states[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let polarizations = self
            .polarizations
            .iter()
            .enumerate()
            .map(|(k, p)| {
                Ok((
                    p.dipole1
                        .to_dipole(&format!("polarizations[{k}].dipole1"))?,
                    p.dipole2
                        .to_dipole(&format!("polarizations[{k}].dipole2"))?,
                ))
            })
            .collect::<Result<Vec<_>, ConfigError>>()?;
        let mut baths: Vec<BathName> = self.physics.baths.clone();
        baths.sort();
        baths.dedup();
        if baths.len() != self.physics.baths.len() || baths.is_empty() {
            return Err(ConfigError::at(
                "physics.baths",
                "list each bath mode once, at least one",
            ));
        }
        let gamma0 = self.physics.gamma0_over_omega;
        let z = DipoleOrientation::z();
        SystemParams::new(1.0, 1.0, z, z, BathKind::AcceleratedVacuum)
            .and_then(|p| p.with_gamma0(gamma0))
            .map_err(|e| ConfigError::at("physics.gamma0_over_omega", e))?;
        let time = TimeGrid {
            horizon: self.time.horizon,
            samples: self.time.samples,
            stretch: self.time.stretch,
        };
        time.validate().map_err(|e| ConfigError::at("time", e))?;
        let mut spec = SweepSpec::new(
            initial_states[0],
            polarizations[0],
            accelerations,
            separations,
        );
        spec.initial_states = initial_states;
        spec.polarizations = polarizations;
        spec.baths = baths.iter().map(|b| b.kind()).collect();
        spec.gamma0_over_omega = gamma0;
        spec.atom_order = match self.physics.atom_order {
            OrderName::Forward => AtomOrder::Forward,
            OrderName::Reverse => AtomOrder::Reverse,
        };
        spec.time = time;
        spec.region_event = match self.output.region_event {
            RegionEventName::Revival => RegionEvent::Revival,
            RegionEventName::Enhancement => RegionEvent::Enhancement,
        };
        spec.validate().map_err(|e| ConfigError::at("grid", e))?;
        Ok(spec)
    }
}

fn syntax_error(text: &str, err: &toml::de::Error) -> ConfigError {
    let location = match err.span() {
        Some(span) => {
            let before = &text[..span.start.min(text.len())];
            let line = before.matches('\n').count() + 1;
            let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            format!("line {line}, column {column}")
        }
        None => "configuration".to_string(),
    };
    ConfigError {
        location,
        message: err.message().to_string(),
    }
}
