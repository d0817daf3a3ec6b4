//! Kossakowski coefficients of the two-atom dissipator.
//!
//! For accelerated atoms
//!
//! ```text
//! A₁ = ¼ f⁽¹¹⁾(ω,a) coth(πω/a)        B₁ = ¼ f⁽¹¹⁾(ω,a)
//! A₂ = ¼ Σᵢⱼ f⁽¹²⁾ᵢⱼ d̂⁽¹⁾ᵢ d̂⁽²⁾ⱼ coth(πω/a)   B₂ = ¼ Σᵢⱼ f⁽¹²⁾ᵢⱼ d̂⁽¹⁾ᵢ d̂⁽²⁾ⱼ
//! ```
//!
//! in units of `Γ₀`. Static atoms in a thermal bath at `T = a/2π` use the same
//! structure with `f⁽¹¹⁾ ≡ 1` and the thermal cross functions.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{domain, Result};
use crate::spectral::{self, AtomOrder};

/// Absolute tolerance on the unit norm of a dipole direction.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-12;

/// `coth(x)` for `x > 0` without overflow.
pub fn coth_stable(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!("coth argument must be positive, got {x}")));
    }
    if x > 20.0 {
        return Ok(1.0 + 2.0 * (-2.0 * x).exp());
    }
    if x < 1e-6 {
        return Ok(1.0 / x + x / 3.0);
    }
    Ok(1.0 / x.tanh())
}

/// Thermal occupation factor `coth(πω/a)` with `ω = 1`; `1` at zero acceleration.
pub fn thermal_factor(a_over_omega: f64) -> Result<f64> {
    if a_over_omega == 0.0 {
        return Ok(1.0);
    }
    if !(a_over_omega.is_finite() && a_over_omega > 0.0) {
        return Err(domain(format!(
            "acceleration must be non-negative, got {a_over_omega}"
        )));
    }
    coth_stable(PI / a_over_omega)
}

/// Unit vector giving the orientation of an atomic transition dipole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleOrientation([f64; 3]);

impl DipoleOrientation {
    pub fn new(components: [f64; 3]) -> Result<Self> {
        if components.iter().any(|c| !c.is_finite()) {
            return Err(domain("dipole components must be finite"));
        }
        let norm2: f64 = components.iter().map(|c| c * c).sum();
        if (norm2 - 1.0).abs() > UNIT_NORM_TOLERANCE {
            return Err(domain(format!(
                "dipole orientation must be a unit vector, |d|² = {norm2}"
            )));
        }
        Ok(Self(components))
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(components: [f64; 3]) -> Result<Self> {
        let norm = components.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(domain(
                "cannot normalize a zero or non-finite dipole vector",
            ));
        }
        Self::new(components.map(|c| c / norm))
    }

    pub fn x() -> Self {
        Self([1.0, 0.0, 0.0])
    }

    pub fn y() -> Self {
        Self([0.0, 1.0, 0.0])
    }

    pub fn z() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }
}

impl fmt::Display for DipoleOrientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            [1.0, 0.0, 0.0] => write!(f, "x"),
            [0.0, 1.0, 0.0] => write!(f, "y"),
            [0.0, 0.0, 1.0] => write!(f, "z"),
            [x, y, z] => write!(f, "({x}, {y}, {z})"),
        }
    }
}

/// The environment the atoms see.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BathKind {
    /// Uniformly accelerated atoms in the Minkowski vacuum.
    AcceleratedVacuum,
    /// Static atoms in a thermal bath at the Unruh temperature `a/2π`.
    ThermalAtUnruh,
}

impl BathKind {
    pub const ALL: [BathKind; 2] = [BathKind::AcceleratedVacuum, BathKind::ThermalAtUnruh];

    pub fn label(self) -> &'static str {
        match self {
            BathKind::AcceleratedVacuum => "accelerated",
            BathKind::ThermalAtUnruh => "thermal",
        }
    }
}

/// Dimensionless physical configuration of the two-atom system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub a_over_omega: f64,
    pub omega_l: f64,
    pub gamma0_over_omega: f64,
    pub dipole1: DipoleOrientation,
    pub dipole2: DipoleOrientation,
    pub bath: BathKind,
}

impl SystemParams {
    pub fn new(
        a_over_omega: f64,
        omega_l: f64,
        dipole1: DipoleOrientation,
        dipole2: DipoleOrientation,
        bath: BathKind,
    ) -> Result<Self> {
        let params = Self {
            a_over_omega,
            omega_l,
            gamma0_over_omega: 1.0,
            dipole1,
            dipole2,
            bath,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_gamma0(mut self, gamma0_over_omega: f64) -> Result<Self> {
        self.gamma0_over_omega = gamma0_over_omega;
        self.validate()?;
        Ok(self)
    }

    pub fn with_bath(self, bath: BathKind) -> Self {
        Self { bath, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a_over_omega.is_finite() && self.a_over_omega >= 0.0) {
            return Err(domain(format!(
                "a/ω must be non-negative, got {}",
                self.a_over_omega
            )));
        }
        if !(self.omega_l.is_finite() && self.omega_l > 0.0) {
            return Err(domain(format!(
                "ωL must be strictly positive, got {}",
                self.omega_l
            )));
        }
        if !(self.gamma0_over_omega.is_finite() && self.gamma0_over_omega > 0.0) {
            return Err(domain(format!(
                "Γ₀/ω must be positive, got {}",
                self.gamma0_over_omega
            )));
        }
        DipoleOrientation::new(self.dipole1.0)?;
        DipoleOrientation::new(self.dipole2.0)?;
        Ok(())
    }

    /// Unruh temperature `a/2π` in units of `ω`.
    pub fn unruh_temperature(&self) -> f64 {
        self.a_over_omega / (2.0 * PI)
    }

    /// Converts a `Γ₀τ` time to `ωτ`.
    pub fn omega_time(&self, gamma0_tau: f64) -> f64 {
        gamma0_tau / self.gamma0_over_omega
    }
}

/// Dissipator coefficients in units of `Γ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
}

impl CoefficientSet {
    pub fn new(a1: f64, b1: f64, a2: f64, b2: f64) -> Result<Self> {
        let c = Self { a1, b1, a2, b2 };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if [self.a1, self.b1, self.a2, self.b2]
            .iter()
            .any(|v| !v.is_finite())
        {
            return Err(domain("coefficients must be finite"));
        }
        if !(self.b1 > 0.0 && self.a1 >= self.b1) {
            return Err(domain(format!(
                "coefficients must satisfy A1 ≥ B1 > 0, got A1 = {}, B1 = {}",
                self.a1, self.b1
            )));
        }
        Ok(())
    }

    /// `|A₂| ≤ A₁` and `|B₂| ≤ B₁`.
    pub fn within_positivity_bounds(&self) -> bool {
        self.a2.abs() <= self.a1 && self.b2.abs() <= self.b1
    }

    /// Whether `A₁B₂ = A₂B₁`, i.e. the cross and self terms share the same
    /// thermal factor. Both bath kinds produce such sets.
    pub fn is_thermally_balanced(&self) -> bool {
        let scale = self.a1 * self.b1;
        (self.a1 * self.b2 - self.a2 * self.b1).abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE)
    }

    /// Coefficients in units of `ω` instead of `Γ₀`.
    pub fn in_omega_units(&self, gamma0_over_omega: f64) -> [f64; 4] {
        [self.a1, self.b1, self.a2, self.b2].map(|v| v * gamma0_over_omega)
    }

    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        [
            self.a1 - other.a1,
            self.b1 - other.b1,
            self.a2 - other.a2,
            self.b2 - other.b2,
        ]
        .iter()
        .fold(0.0f64, |m, d| m.max(d.abs()))
    }
}

/// Assembles the dissipator coefficients for the given configuration.
pub fn assemble(params: &SystemParams, order: AtomOrder) -> Result<CoefficientSet> {
    params.validate()?;
    let a = params.a_over_omega;
    let l = params.omega_l;
    let coth = thermal_factor(a)?;
    let (self_factor, tensor) = match params.bath {
        BathKind::AcceleratedVacuum => (
            spectral::f11(1.0, a)?,
            spectral::f12_tensor(1.0, a, l, order)?,
        ),
        BathKind::ThermalAtUnruh => (1.0, spectral::f12_thermal_tensor(1.0, l)?),
    };
    let d1 = params.dipole1.components();
    let d2 = params.dipole2.components();
    let mut cross = 0.0;
    for (i, row) in tensor.iter().enumerate() {
        for (j, f) in row.iter().enumerate() {
            cross += f * d1[i] * d2[j];
        }
    }
    Ok(CoefficientSet {
        a1: 0.25 * self_factor * coth,
        b1: 0.25 * self_factor,
        a2: 0.25 * cross * coth,
        b2: 0.25 * cross,
    })
}
