//! Open-system entanglement dynamics of two uniformly accelerated two-level
//! atoms coupled to the fluctuating electromagnetic vacuum, compared against
//! static atoms in a thermal bath at the Unruh temperature `T = a / 2π`.
//!
//! Units: the atomic transition frequency is `ω = 1`. Accelerations are given
//! as `a/ω`, separations as `ωL`, dissipator coefficients in units of the
//! spontaneous emission rate `Γ₀`, and times as `Γ₀τ`.
//!
//! The pipeline is
//!
//! 1. [`spectral`]: modulating functions of the field correlations,
//! 2. [`coefficients`]: Kossakowski coefficients `A₁, B₁, A₂, B₂`,
//! 3. [`dynamics`]: exact propagation of the X-state populations/coherences,
//! 4. [`entanglement`]: concurrence and event detection,
//! 5. [`sweeps`]: parameter sweeps and region classification.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coefficients;
pub mod dynamics;
pub mod entanglement;
mod error;
pub mod spectral;
pub mod sweeps;

pub use coefficients::{
    assemble, coth_stable, BathKind, CoefficientSet, DipoleOrientation, SystemParams,
};
pub use dynamics::{
    asymptotic_state, basis_transform, build_generator, evolve, InitialState, PopulationGenerator,
    Propagator, XState,
};
pub use entanglement::{
    concurrence_wootters, concurrence_x, detect_events, EntanglementEvents, Trajectory,
};
pub use error::{Error, Result};
pub use spectral::AtomOrder;
