//! Concurrence of two-qubit states and detection of entanglement events
//! (sudden death, delayed birth, revival, enhancement) along trajectories.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::dynamics::{asymptotic_state, min_eigenvalue, Evolver, Propagator, XState};
use crate::error::{Error, Result};

/// Concurrence at or below this value counts as separable.
pub const DEAD_THRESHOLD: f64 = 1e-12;
/// Margin by which the maximum must exceed `C(0)` to count as enhancement.
pub const ENHANCEMENT_THRESHOLD: f64 = 1e-9;
/// Width of the bracket left around refined death and birth times.
pub const CROSSING_TOLERANCE: f64 = 1e-9;
/// Negative radicands within this slack are treated as zero.
pub const RADICAND_SLACK: f64 = 1e-12;
/// Distance to the stationary state at which a trajectory counts as settled.
pub const SETTLED_TOLERANCE: f64 = 1e-8;

const GOLDEN_TOLERANCE: f64 = 1e-13;

fn radical(x: f64, what: &str) -> Result<f64> {
    if x < -RADICAND_SLACK {
        return Err(Error::InvalidState(format!(
            "negative radicand {x} in {what}"
        )));
    }
    Ok(x.max(0.0).sqrt())
}

/// The two candidates `(K₁, K₂)` whose positive part is the concurrence.
pub fn k_values(state: &XState) -> Result<(f64, f64)> {
    let s = state;
    let k1 = radical((s.p_aa - s.p_ss).powi(2) + 4.0 * s.c_as.im.powi(2), "K1")?
        - 2.0 * radical(s.p_gg * s.p_ee, "K1")?;
    let k2 =
        2.0 * s.c_ge.norm() - radical((s.p_aa + s.p_ss).powi(2) - 4.0 * s.c_as.re.powi(2), "K2")?;
    Ok((k1, k2))
}

/// `max(K₁, K₂)`, the unclamped entanglement margin.
pub fn entanglement_margin(state: &XState) -> Result<f64> {
    let (k1, k2) = k_values(state)?;
    Ok(k1.max(k2))
}

/// Concurrence of an X state, `max{0, K₁, K₂}`.
pub fn concurrence_x(state: &XState) -> Result<f64> {
    Ok(entanglement_margin(state)?.max(0.0))
}

/// Wootters concurrence of an arbitrary two-qubit density matrix in the
/// product basis.
pub fn concurrence_wootters(rho: &Matrix4<Complex64>) -> Result<f64> {
    let hermiticity = (rho - rho.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if !(hermiticity <= 1e-10) {
        return Err(Error::InvalidDensityMatrix(format!(
            "matrix is not Hermitian (deviation {hermiticity:e})"
        )));
    }
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidDensityMatrix(format!("trace is {trace}")));
    }
    let lowest = min_eigenvalue(rho);
    if lowest < -1e-9 {
        return Err(Error::InvalidDensityMatrix(format!(
            "matrix is not positive semidefinite (minimum eigenvalue {lowest:e})"
        )));
    }
    let eigen = rho.symmetric_eigen();
    let roots = eigen
        .eigenvalues
        .map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    let sqrt_rho =
        eigen.eigenvectors * Matrix4::from_diagonal(&roots) * eigen.eigenvectors.adjoint();
    // σy ⊗ σy in the product basis.
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let flip = Matrix4::new(
        zero, zero, zero, -one,
        zero, zero, one,  zero,
        zero, one,  zero, zero,
        -one, zero, zero, zero,
    );
    let sqrt_tilde = flip * sqrt_rho.conjugate() * flip;
    let mut lambdas: Vec<f64> = (sqrt_rho * sqrt_tilde)
        .singular_values()
        .iter()
        .copied()
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Kind of an entanglement transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionKind {
    Death,
    Birth,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub time: f64,
    pub kind: TransitionKind,
}

/// Entanglement features of one trajectory. Times are in units of `1/Γ₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementEvents {
    pub initial_concurrence: f64,
    pub death_time: Option<f64>,
    pub birth_time: Option<f64>,
    /// First birth after the first death.
    pub revival_time: Option<f64>,
    pub revival: bool,
    pub enhancement: bool,
    pub max_concurrence: f64,
    pub max_time: f64,
    /// All deaths and births in time order.
    pub transitions: Vec<Transition>,
}

/// Sampled evolution of one initial state under one propagator.
#[derive(Debug, Clone)]
pub struct Trajectory {
    propagator: Propagator,
    initial: XState,
    times: Vec<f64>,
    states: Vec<XState>,
    concurrence: Vec<f64>,
    margins: Vec<f64>,
}

impl Trajectory {
    /// Samples the evolution at `times`, which must start at 0 and increase
    /// strictly.
    pub fn sample(propagator: Propagator, initial: &XState, times: &[f64]) -> Result<Self> {
        Self::build(propagator, initial, times, None)
    }

    /// Like [`Trajectory::sample`] but stops once the state is separable and
    /// within [`SETTLED_TOLERANCE`] of the stationary state.
    pub fn sample_until_settled(
        propagator: Propagator,
        initial: &XState,
        times: &[f64],
    ) -> Result<Self> {
        let stationary = match asymptotic_state(propagator.coefficients()) {
            Ok(s) => Some(s),
            Err(Error::DegenerateNullSpace(_)) => None,
            Err(e) => return Err(e),
        };
        Self::build(propagator, initial, times, stationary)
    }

    fn build(
        propagator: Propagator,
        initial: &XState,
        times: &[f64],
        stationary: Option<XState>,
    ) -> Result<Self> {
        validate_times(times)?;
        let mut states = Vec::with_capacity(times.len());
        let mut concurrence = Vec::with_capacity(times.len());
        let mut margins = Vec::with_capacity(times.len());
        {
            let evolver = propagator.evolver(initial)?;
            for &t in times {
                let state = evolver.at(t);
                state.validate()?;
                let margin = entanglement_margin(&state)?;
                states.push(state);
                margins.push(margin);
                concurrence.push(margin.max(0.0));
                let settled = stationary.as_ref().is_some_and(|s| {
                    margin <= DEAD_THRESHOLD && state.max_abs_difference(s) < SETTLED_TOLERANCE
                });
                if settled && states.len() > 1 {
                    break;
                }
            }
        }
        let times = times[..states.len()].to_vec();
        Ok(Self {
            propagator,
            initial: *initial,
            times,
            states,
            concurrence,
            margins,
        })
    }

    pub fn propagator(&self) -> &Propagator {
        &self.propagator
    }

    pub fn initial(&self) -> &XState {
        &self.initial
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[XState] {
        &self.states
    }

    pub fn concurrence(&self) -> &[f64] {
        &self.concurrence
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

fn validate_times(times: &[f64]) -> Result<()> {
    let Some(&first) = times.first() else {
        return Err(Error::EmptyTrajectory);
    };
    if first != 0.0 {
        return Err(Error::InvalidTrajectory(format!(
            "first time must be 0, got {first}"
        )));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidTrajectory("non-finite time".into()));
    }
    if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidTrajectory(format!(
            "times must increase strictly, found {} then {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Margin without radicand checks, for refinement between validated samples.
fn margin_at(evolver: &Evolver<'_>, t: f64) -> f64 {
    let s = evolver.at(t);
    let k1 = ((s.p_aa - s.p_ss).powi(2) + 4.0 * s.c_as.im.powi(2))
        .max(0.0)
        .sqrt()
        - 2.0 * (s.p_gg * s.p_ee).max(0.0).sqrt();
    let k2 = 2.0 * s.c_ge.norm()
        - ((s.p_aa + s.p_ss).powi(2) - 4.0 * s.c_as.re.powi(2))
            .max(0.0)
            .sqrt();
    k1.max(k2)
}

fn alive(margin: f64) -> bool {
    margin > DEAD_THRESHOLD
}

/// Golden-section search for an extremum of `f` on `[lo, hi]`; `sign = 1`
/// minimizes, `sign = -1` maximizes. Returns the best probe.
fn golden(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, sign: f64) -> (f64, f64) {
    const R: f64 = 0.618_033_988_749_894_8;
    let g = |t: f64| sign * f(t);
    let mut x1 = hi - R * (hi - lo);
    let mut x2 = lo + R * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    let tol = GOLDEN_TOLERANCE * hi.abs().max(1.0);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - R * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + R * (hi - lo);
            f2 = g(x2);
        }
    }
    if f1 <= f2 {
        (x1, sign * f1)
    } else {
        (x2, sign * f2)
    }
}

/// Bisects for the alive/dead boundary in `[lo, hi]`, given which side of the
/// threshold `lo` lies on.
fn bisect(evolver: &Evolver<'_>, mut lo: f64, mut hi: f64, lo_alive: bool) -> f64 {
    while hi - lo > CROSSING_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if alive(margin_at(evolver, mid)) == lo_alive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Detects entanglement events along a trajectory, refining on the exact
/// propagator. Dips to separability narrower than the sampling step are found
/// by minimizing the margin around every sampled local minimum, and short
/// entangled windows by maximizing it around sampled local maxima.
pub fn detect_events(trajectory: &Trajectory) -> Result<EntanglementEvents> {
    if trajectory.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let evolver = trajectory.propagator.evolver(&trajectory.initial)?;
    let t = &trajectory.times;
    let m = &trajectory.margins;
    let n = t.len();
    let mut transitions = Vec::new();
    let mut peaks: Vec<(f64, f64)> = Vec::new();

    for k in 0..n.saturating_sub(1) {
        let (a, b) = (alive(m[k]), alive(m[k + 1]));
        if a != b {
            let kind = if a {
                TransitionKind::Death
            } else {
                TransitionKind::Birth
            };
            transitions.push(Transition {
                time: bisect(&evolver, t[k], t[k + 1], a),
                kind,
            });
        }
    }
    for k in 1..n.saturating_sub(1) {
        let (l, c, r) = (m[k - 1], m[k], m[k + 1]);
        let all_alive = alive(l) && alive(c) && alive(r);
        let all_dead = !alive(l) && !alive(c) && !alive(r);
        if all_alive && c <= l && c <= r {
            let (tm, mm) = golden(|x| margin_at(&evolver, x), t[k - 1], t[k + 1], 1.0);
            if !alive(mm) {
                transitions.push(Transition {
                    time: bisect(&evolver, t[k - 1], tm, true),
                    kind: TransitionKind::Death,
                });
                transitions.push(Transition {
                    time: bisect(&evolver, tm, t[k + 1], false),
                    kind: TransitionKind::Birth,
                });
            }
        } else if all_dead && c >= l && c >= r {
            let (tm, mm) = golden(|x| margin_at(&evolver, x), t[k - 1], t[k + 1], -1.0);
            if alive(mm) {
                transitions.push(Transition {
                    time: bisect(&evolver, t[k - 1], tm, false),
                    kind: TransitionKind::Birth,
                });
                transitions.push(Transition {
                    time: bisect(&evolver, tm, t[k + 1], true),
                    kind: TransitionKind::Death,
                });
                peaks.push((tm, mm));
            }
        }
    }
    transitions.sort_by(|a, b| a.time.total_cmp(&b.time));
    let mut current = alive(m[0]);
    transitions.retain(|tr| {
        let keep = (tr.kind == TransitionKind::Death) == current;
        if keep {
            current = !current;
        }
        keep
    });

    let c = &trajectory.concurrence;
    let best = (0..n).fold(0, |b, k| if c[k] > c[b] { k } else { b });
    peaks.push((t[best], c[best]));
    if n > 1 {
        let lo = t[best.saturating_sub(1)];
        let hi = t[(best + 1).min(n - 1)];
        peaks.push(golden(|x| margin_at(&evolver, x).max(0.0), lo, hi, -1.0));
    }
    let (max_time, max_concurrence) =
        peaks.iter().copied().fold(
            (t[best], c[best]),
            |acc, p| if p.1 > acc.1 { p } else { acc },
        );

    let first = |kind| {
        transitions
            .iter()
            .find(|tr| tr.kind == kind)
            .map(|tr| tr.time)
    };
    let death_time = first(TransitionKind::Death);
    let birth_time = first(TransitionKind::Birth);
    let revival_time = death_time.and_then(|d| {
        transitions
            .iter()
            .find(|tr| tr.kind == TransitionKind::Birth && tr.time > d)
            .map(|tr| tr.time)
    });
    Ok(EntanglementEvents {
        initial_concurrence: c[0],
        death_time,
        birth_time,
        revival_time,
        revival: revival_time.is_some(),
        enhancement: max_concurrence > c[0] + ENHANCEMENT_THRESHOLD,
        max_concurrence: max_concurrence.min(1.0),
        max_time,
        transitions,
    })
}
