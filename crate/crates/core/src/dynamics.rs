//! Exact propagation of the two-atom X state.
//!
//! In the coupled basis `{G, A, S, E}` the populations obey a closed linear
//! system `ṗ = M p`, while the two independent coherences `ρ_AS` and `ρ_GE`
//! decay at the single-atom rate `4A₁`. Times are in units of `1/Γ₀`.

use log::warn;
use nalgebra::{Matrix4, Matrix5, Vector4};
use num_complex::Complex64;

use crate::coefficients::CoefficientSet;
use crate::error::{domain, Error, Result};

/// Tolerance on `|Tr ρ − 1|`.
pub const TRACE_TOLERANCE: f64 = 1e-10;
/// Slack allowed for negative populations and eigenvalues.
pub const POSITIVITY_SLACK: f64 = 1e-9;
/// Eigenvector condition number above which the eigen path is abandoned.
pub const MAX_CONDITION: f64 = 1e12;
/// Relative eigenvalue separation below which the eigen path is abandoned.
/// Eigenvector errors grow like `ε/gap`, so closer spectra go to the matrix
/// exponential.
pub const DEGENERACY_TOLERANCE: f64 = 1e-2;
/// Tolerance of the printed closed form for `ρ_AA(∞)`.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Two-atom X state in the coupled basis. `ρ_SA = ρ_AS*` and `ρ_EG = ρ_GE*`
/// are implied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    pub p_gg: f64,
    pub p_aa: f64,
    pub p_ss: f64,
    pub p_ee: f64,
    pub c_as: Complex64,
    pub c_ge: Complex64,
}

impl XState {
    pub fn from_populations(p: [f64; 4]) -> Self {
        Self {
            p_gg: p[0],
            p_aa: p[1],
            p_ss: p[2],
            p_ee: p[3],
            c_as: ZERO,
            c_ge: ZERO,
        }
    }

    pub fn populations(&self) -> [f64; 4] {
        [self.p_gg, self.p_aa, self.p_ss, self.p_ee]
    }

    pub fn trace(&self) -> f64 {
        self.p_gg + self.p_aa + self.p_ss + self.p_ee
    }

    /// Smallest eigenvalue, from the two 2×2 blocks `{A,S}` and `{G,E}`.
    pub fn min_eigenvalue(&self) -> f64 {
        let block = |p: f64, q: f64, c: Complex64| {
            0.5 * (p + q) - (0.25 * (p - q) * (p - q) + c.norm_sqr()).sqrt()
        };
        block(self.p_aa, self.p_ss, self.c_as).min(block(self.p_gg, self.p_ee, self.c_ge))
    }

    pub fn validate(&self) -> Result<()> {
        let values = [
            self.p_gg,
            self.p_aa,
            self.p_ss,
            self.p_ee,
            self.c_as.re,
            self.c_as.im,
            self.c_ge.re,
            self.c_ge.im,
        ];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState(
                "non-finite density-matrix entry".into(),
            ));
        }
        let trace = self.trace();
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        if let Some(p) = self.populations().iter().find(|&&p| p < -POSITIVITY_SLACK) {
            return Err(Error::InvalidState(format!("negative population {p}")));
        }
        let lowest = self.min_eigenvalue();
        if lowest < -POSITIVITY_SLACK {
            return Err(Error::InvalidState(format!(
                "state is not positive semidefinite, minimum eigenvalue {lowest}"
            )));
        }
        Ok(())
    }

    /// Largest componentwise difference over the eight stored entries.
    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        let p = self
            .populations()
            .iter()
            .zip(other.populations())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        p.max((self.c_as - other.c_as).norm())
            .max((self.c_ge - other.c_ge).norm())
    }

    /// Reads an X-form density matrix given in the product basis.
    pub fn from_product_basis(rho: &Matrix4<Complex64>) -> Result<Self> {
        const OFF_X: [(usize, usize); 8] = [
            (0, 1),
            (0, 2),
            (1, 0),
            (2, 0),
            (1, 3),
            (2, 3),
            (3, 1),
            (3, 2),
        ];
        if let Some(&(i, j)) = OFF_X.iter().find(|&&(i, j)| rho[(i, j)].norm() > 1e-12) {
            return Err(Error::InvalidState(format!(
                "matrix is not of X form, entry ({i}, {j}) = {}",
                rho[(i, j)]
            )));
        }
        let (r01, r10) = (rho[(1, 1)].re, rho[(2, 2)].re);
        let coherence = rho[(1, 2)];
        let state = Self {
            p_gg: rho[(0, 0)].re,
            p_aa: 0.5 * (r01 + r10) - coherence.re,
            p_ss: 0.5 * (r01 + r10) + coherence.re,
            p_ee: rho[(3, 3)].re,
            c_as: Complex64::new(0.5 * (r10 - r01), -coherence.im),
            c_ge: rho[(0, 3)],
        };
        state.validate()?;
        Ok(state)
    }
}

/// Density matrix in the product basis `{|00⟩, |01⟩, |10⟩, |11⟩}`.
pub fn basis_transform(state: &XState) -> Matrix4<Complex64> {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let one = Complex64::new(1.0, 0.0);
    // Columns are |G⟩, |A⟩, |S⟩, |E⟩ in product coordinates.
    #[rustfmt::skip]
    let u = Matrix4::new(
        one, ZERO, ZERO, ZERO,
        ZERO, -h,  h,    ZERO,
        ZERO, h,   h,    ZERO,
        ZERO, ZERO, ZERO, one,
    );
    let re = |x: f64| Complex64::new(x, 0.0);
    #[rustfmt::skip]
    let coupled = Matrix4::new(
        re(state.p_gg),       ZERO,             ZERO,         state.c_ge,
        ZERO,                 re(state.p_aa),   state.c_as,   ZERO,
        ZERO,                 state.c_as.conj(), re(state.p_ss), ZERO,
        state.c_ge.conj(),    ZERO,             ZERO,         re(state.p_ee),
    );
    u * coupled * u.adjoint()
}

/// Smallest eigenvalue of a Hermitian 4×4 matrix.
pub fn min_eigenvalue(rho: &Matrix4<Complex64>) -> f64 {
    rho.symmetric_eigenvalues().min()
}

/// The paper's initial states and arbitrary X states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Ground,
    Antisymmetric,
    Symmetric,
    Excited,
    /// `√p |A⟩ + √(1−p) |S⟩`.
    Psi1(f64),
    /// `√p |G⟩ + √(1−p) |E⟩`.
    Psi2(f64),
    Custom(XState),
}

impl InitialState {
    pub fn name(&self) -> &'static str {
        match self {
            InitialState::Ground => "G",
            InitialState::Antisymmetric => "A",
            InitialState::Symmetric => "S",
            InitialState::Excited => "E",
            InitialState::Psi1(_) => "psi1",
            InitialState::Psi2(_) => "psi2",
            InitialState::Custom(_) => "custom",
        }
    }

    pub fn mixing(&self) -> Option<f64> {
        match *self {
            InitialState::Psi1(p) | InitialState::Psi2(p) => Some(p),
            _ => None,
        }
    }

    pub fn state(&self) -> Result<XState> {
        let superposition = |p: f64| {
            if !(0.0..=1.0).contains(&p) {
                return Err(domain(format!(
                    "mixing parameter p must lie in [0, 1], got {p}"
                )));
            }
            Ok((p, 1.0 - p, Complex64::new((p * (1.0 - p)).sqrt(), 0.0)))
        };
        let basis = |i: usize| {
            let mut p = [0.0; 4];
            p[i] = 1.0;
            XState::from_populations(p)
        };
        let state = match *self {
            InitialState::Ground => basis(0),
            InitialState::Antisymmetric => basis(1),
            InitialState::Symmetric => basis(2),
            InitialState::Excited => basis(3),
            InitialState::Psi1(p) => {
                let (p_aa, p_ss, c_as) = superposition(p)?;
                XState {
                    p_aa,
                    p_ss,
                    c_as,
                    ..basis(1)
                }
                .with_zero_ground()
            }
            InitialState::Psi2(p) => {
                let (p_gg, p_ee, c_ge) = superposition(p)?;
                XState {
                    p_gg,
                    p_ee,
                    c_ge,
                    ..basis(0)
                }
            }
            InitialState::Custom(s) => s,
        };
        state.validate()?;
        Ok(state)
    }
}

impl XState {
    fn with_zero_ground(self) -> Self {
        Self { p_gg: 0.0, ..self }
    }
}

/// Rate matrix of the populations `(ρ_GG, ρ_AA, ρ_SS, ρ_EE)` together with the
/// coherence decay rate `4A₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationGenerator {
    pub matrix: Matrix4<f64>,
    pub coherence_rate: f64,
}

impl PopulationGenerator {
    /// Largest absolute column sum.
    pub fn max_column_sum(&self) -> f64 {
        self.matrix
            .column_iter()
            .map(|c| c.sum().abs())
            .fold(0.0, f64::max)
    }
}

/// Fills the rate matrix from the dissipator coefficients. Each diagonal entry
/// is the negated sum of its column's transfer rates, so probability is
/// conserved by construction.
pub fn build_generator(coeffs: &CoefficientSet) -> Result<PopulationGenerator> {
    coeffs.validate()?;
    let &CoefficientSet { a1, b1, a2, b2 } = coeffs;
    let up_a = 2.0 * (a1 - b1 - a2 + b2);
    let up_s = 2.0 * (a1 - b1 + a2 - b2);
    let down_a = 2.0 * (a1 + b1 - a2 - b2);
    let down_s = 2.0 * (a1 + b1 + a2 + b2);
    let scale = a1 + b1;
    if [up_a, up_s, down_a, down_s]
        .iter()
        .any(|&r| r < -1e-14 * scale)
    {
        return Err(domain(format!(
            "coefficients do not define a rate matrix: A1={a1}, B1={b1}, A2={a2}, B2={b2}"
        )));
    }
    let [up_a, up_s, down_a, down_s] = [up_a, up_s, down_a, down_s].map(|r| r.max(0.0));
    #[rustfmt::skip]
    let matrix = Matrix4::new(
        -(up_a + up_s), down_a,          down_s,          0.0,
        up_a,           -(down_a + up_a), 0.0,            down_a,
        up_s,           0.0,             -(down_s + up_s), down_s,
        0.0,            up_a,            up_s,            -(down_a + down_s),
    );
    Ok(PopulationGenerator {
        matrix,
        coherence_rate: 4.0 * a1,
    })
}

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
enum Method {
    Eigen {
        values: Vector4<Complex64>,
        vectors: Matrix4<Complex64>,
        inverse: Matrix4<Complex64>,
    },
    Exponential,
}

/// Prepared propagator for one coefficient set. Immutable and shareable
/// across threads.
#[derive(Debug, Clone)]
pub struct Propagator {
    coeffs: CoefficientSet,
    generator: PopulationGenerator,
    method: Method,
}

impl Propagator {
    pub fn new(coeffs: &CoefficientSet) -> Result<Self> {
        let generator = build_generator(coeffs)?;
        let method = eigen_method(&generator.matrix).unwrap_or(Method::Exponential);
        Ok(Self {
            coeffs: *coeffs,
            generator,
            method,
        })
    }

    /// Forces the scaling-and-squaring path.
    pub fn exponential(coeffs: &CoefficientSet) -> Result<Self> {
        Ok(Self {
            coeffs: *coeffs,
            generator: build_generator(coeffs)?,
            method: Method::Exponential,
        })
    }

    pub fn coefficients(&self) -> &CoefficientSet {
        &self.coeffs
    }

    pub fn generator(&self) -> &PopulationGenerator {
        &self.generator
    }

    pub fn uses_eigendecomposition(&self) -> bool {
        matches!(self.method, Method::Eigen { .. })
    }

    pub fn evolve(&self, initial: &XState, tau: f64) -> Result<XState> {
        check_time(tau)?;
        Ok(self.evolver(initial)?.at(tau))
    }

    /// Binds an initial state, caching its decomposition over eigenmodes.
    pub fn evolver(&self, initial: &XState) -> Result<Evolver<'_>> {
        initial.validate()?;
        let p0 = Vector4::from(initial.populations());
        let weights = match &self.method {
            Method::Eigen { inverse, .. } => Some(inverse * p0.map(|p| Complex64::new(p, 0.0))),
            Method::Exponential => None,
        };
        Ok(Evolver {
            propagator: self,
            initial: *initial,
            weights,
        })
    }
}

/// A propagator bound to an initial state.
#[derive(Debug, Clone)]
pub struct Evolver<'a> {
    propagator: &'a Propagator,
    initial: XState,
    weights: Option<Vector4<Complex64>>,
}

impl Evolver<'_> {
    pub fn initial(&self) -> &XState {
        &self.initial
    }

    pub fn propagator(&self) -> &Propagator {
        self.propagator
    }

    /// State at `Γ₀τ = tau`; `tau` must be non-negative.
    ///
    /// The populations are propagated as increments `p(τ) − p(0)`, so that
    /// populations which start at zero keep full relative precision at early
    /// times.
    pub fn at(&self, tau: f64) -> XState {
        if tau == 0.0 {
            return self.initial;
        }
        let p0 = Vector4::from(self.initial.populations());
        let m = &self.propagator.generator.matrix;
        let increment = match (&self.propagator.method, &self.weights) {
            (
                Method::Eigen {
                    values, vectors, ..
                },
                Some(w),
            ) => {
                let modes = Vector4::from_fn(|k, _| expm1(values[k] * tau) * w[k]);
                (vectors * modes).map(|z| z.re)
            }
            _ => {
                // exp([[Mτ, Mp₀τ], [0, 0]]) carries τφ₁(Mτ)Mp₀ = p(τ) − p₀
                // in its last column.
                let mut augmented = Matrix5::zeros();
                augmented.fixed_view_mut::<4, 4>(0, 0).copy_from(&(m * tau));
                augmented
                    .fixed_view_mut::<4, 1>(0, 4)
                    .copy_from(&(m * p0 * tau));
                augmented.exp().fixed_view::<4, 1>(0, 4).into_owned()
            }
        };
        // The generator conserves trace exactly; rounding of order ε‖M‖τ does
        // not. The residual is removed in proportion to min(|Δpᵢ|, |pᵢ|), so
        // neither a small increment nor a small population loses relative
        // accuracy.
        let p = p0 + increment;
        let residual = increment.sum();
        let weights = increment.zip_map(&p, |d, q| d.abs().min(q.abs()));
        let total = weights.sum();
        let p = if total > 0.0 {
            p - weights * (residual / total)
        } else {
            p
        };
        let decay = (-self.propagator.generator.coherence_rate * tau).exp();
        XState {
            p_gg: p[0],
            p_aa: p[1],
            p_ss: p[2],
            p_ee: p[3],
            c_as: self.initial.c_as * decay,
            c_ge: self.initial.c_ge * decay,
        }
    }
}

/// `e^z − 1` without cancellation for small `|z|`.
fn expm1(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return Complex64::new(z.re.exp_m1(), 0.0);
    }
    // e^{x+iy} − 1 = (e^x − 1) cos y − 2 sin²(y/2) + i e^x sin y
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    Complex64::new(z.re.exp_m1() * c - 2.0 * half * half, z.re.exp() * s)
}

fn check_time(tau: f64) -> Result<()> {
    if tau.is_finite() && tau >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!(
            "evolution time must be finite and non-negative, got {tau}"
        )))
    }
}

fn eigen_method(m: &Matrix4<f64>) -> Option<Method> {
    let values = m.complex_eigenvalues();
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            if (values[i] - values[j]).norm() <= DEGENERACY_TOLERANCE * scale {
                return None;
            }
        }
    }
    let mc = m.map(|x| Complex64::new(x, 0.0));
    let mut vectors = Matrix4::<Complex64>::zeros();
    for (k, &lambda) in values.iter().enumerate() {
        let shifted = mc - Matrix4::from_diagonal_element(lambda);
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t?;
        let (smallest, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))?;
        let v = v_t.row(smallest).adjoint();
        vectors.set_column(k, &v);
    }
    let sv = vectors.singular_values();
    let condition = sv.max() / sv.min();
    if !(condition <= MAX_CONDITION) {
        warn!("ill-conditioned generator (eigenvector condition {condition:.3e}); using matrix exponential");
        return None;
    }
    let inverse = vectors.try_inverse()?;
    Some(Method::Eigen {
        values,
        vectors,
        inverse,
    })
}

/// Evolves `initial` for a time `Γ₀τ = tau`.
pub fn evolve(initial: &XState, coeffs: &CoefficientSet, tau: f64) -> Result<XState> {
    Propagator::new(coeffs)?.evolve(initial, tau)
}

/// Printed closed form of `ρ_AA(∞) = ρ_SS(∞)`, valid when `A₁B₂ = A₂B₁`.
pub fn closed_form_antisymmetric_population(coeffs: &CoefficientSet) -> f64 {
    let &CoefficientSet { a1, b1, a2, b2 } = coeffs;
    let num = -(-a1.powi(3) + a1 * a2 * a2 + a1 * b1 * b1 - a1 * b2 * b2);
    let den = 4.0 * (a1.powi(3) - a1 * a2 * a2 - a2 * b1 * b2 + a1 * b2 * b2);
    num / den
}

/// Stationary state: the trace-one null vector of the generator, with all
/// coherences zero. When the coefficients satisfy `A₁B₂ = A₂B₁`, as both bath
/// kinds do, it is checked against the printed closed form.
///
/// The null vector is found by Grassmann–Taksar–Heyman state reduction, which
/// avoids subtractions and so resolves exponentially small thermal
/// populations to full relative precision.
pub fn asymptotic_state(coeffs: &CoefficientSet) -> Result<XState> {
    let generator = build_generator(coeffs)?;
    let m = generator.matrix;
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(f64::total_cmp);
    if !(sv[1] > 1e-10 * sv[3]) {
        return Err(Error::DegenerateNullSpace(format!(
            "generator null space is not one-dimensional (singular values {sv:?})"
        )));
    }
    let p = stationary_distribution(&m)?;
    let state = XState::from_populations(p);
    if coeffs.is_thermally_balanced() {
        let closed = closed_form_antisymmetric_population(coeffs);
        if (state.p_aa - closed).abs() > CLOSED_FORM_TOLERANCE
            || (state.p_ss - closed).abs() > CLOSED_FORM_TOLERANCE
        {
            return Err(Error::ClosedFormMismatch {
                null_space: state.p_aa,
                closed_form: closed,
            });
        }
    }
    Ok(state)
}

/// GTH elimination on the transfer rates `q[i][j]` (from `i` to `j`).
fn stationary_distribution(m: &Matrix4<f64>) -> Result<[f64; 4]> {
    let mut q = [[0.0; 4]; 4];
    for (i, row) in q.iter_mut().enumerate() {
        for (j, rate) in row.iter_mut().enumerate() {
            if i != j {
                *rate = m[(j, i)];
            }
        }
    }
    let mut exit = [0.0; 4];
    for k in (1..4).rev() {
        let s: f64 = q[k][..k].iter().sum();
        if !(s > 0.0) {
            return Err(Error::DegenerateNullSpace(format!(
                "state {k} has no transfer towards lower states"
            )));
        }
        exit[k] = s;
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    q[i][j] += q[i][k] * q[k][j] / s;
                }
            }
        }
    }
    let mut p = [1.0, 0.0, 0.0, 0.0];
    for k in 1..4 {
        p[k] = (0..k).map(|i| p[i] * q[i][k]).sum::<f64>() / exit[k];
    }
    let total: f64 = p.iter().sum();
    Ok(p.map(|x| x / total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn vacuum() -> CoefficientSet {
        CoefficientSet::new(0.25, 0.25, 0.0, 0.0).unwrap()
    }

    #[test]
    fn isolated_vacuum_generator() {
        let m = build_generator(&vacuum()).unwrap().matrix;
        assert_eq!(m[(0, 1)], 1.0);
        assert_eq!(m[(0, 2)], 1.0);
        assert_eq!(m[(1, 3)], 1.0);
        assert_eq!(m[(2, 3)], 1.0);
        assert_eq!(m[(1, 0)], 0.0);
        assert_eq!(m[(2, 0)], 0.0);
        assert_eq!(m[(3, 1)], 0.0);
    }

    #[test]
    fn diagonal_matches_printed_rates() {
        let c = CoefficientSet::new(0.7, 0.3, 0.2, 0.05).unwrap();
        let m = build_generator(&c).unwrap().matrix;
        let printed = [
            -4.0 * (c.a1 - c.b1),
            -4.0 * (c.a1 - c.a2),
            -4.0 * (c.a1 + c.a2),
            -4.0 * (c.a1 + c.b1),
        ];
        for (i, d) in printed.iter().enumerate() {
            assert_relative_eq!(m[(i, i)], d, max_relative = 1e-15);
        }
        assert!(build_generator(&c).unwrap().max_column_sum() < 1e-15);
    }

    #[test]
    fn non_rate_coefficients_rejected() {
        let c = CoefficientSet::new(0.3, 0.25, 0.5, 0.0).unwrap();
        assert!(build_generator(&c).is_err());
    }

    #[test]
    fn product_basis_examples() {
        let a = basis_transform(&InitialState::Antisymmetric.state().unwrap());
        assert_relative_eq!(a[(1, 1)].re, 0.5, epsilon = 1e-15);
        assert_relative_eq!(a[(2, 2)].re, 0.5, epsilon = 1e-15);
        assert_relative_eq!(a[(1, 2)].re, -0.5, epsilon = 1e-15);
        assert_relative_eq!(a[(2, 1)].re, -0.5, epsilon = 1e-15);
        let g = basis_transform(&InitialState::Ground.state().unwrap());
        assert_eq!(
            g,
            Matrix4::from_diagonal(
                &Vector4::new(1.0, 0.0, 0.0, 0.0).map(|x| Complex64::new(x, 0.0))
            )
        );
        let half = XState {
            p_gg: 0.5,
            p_ee: 0.5,
            c_ge: Complex64::new(0.5, 0.0),
            ..XState::from_populations([0.0; 4])
        };
        let m = basis_transform(&half);
        assert_eq!(m[(0, 3)], Complex64::new(0.5, 0.0));
        assert_eq!(m[(3, 0)], Complex64::new(0.5, 0.0));
    }

    #[test]
    fn product_basis_round_trip() {
        let s = XState {
            p_gg: 0.1,
            p_aa: 0.3,
            p_ss: 0.4,
            p_ee: 0.2,
            c_as: Complex64::new(0.1, -0.2),
            c_ge: Complex64::new(-0.05, 0.1),
        };
        let back = XState::from_product_basis(&basis_transform(&s)).unwrap();
        assert!(back.max_abs_difference(&s) < 1e-15);
    }

    #[test]
    fn catalogue_states() {
        let psi1 = InitialState::Psi1(0.25).state().unwrap();
        assert_eq!(psi1.p_aa, 0.25);
        assert_eq!(psi1.p_ss, 0.75);
        assert_relative_eq!(psi1.c_as.re, (0.25f64 * 0.75).sqrt());
        let psi2 = InitialState::Psi2(0.8).state().unwrap();
        assert_eq!(psi2.p_gg, 0.8);
        assert_relative_eq!(psi2.c_ge.re, 0.4, epsilon = 1e-15);
        assert!(InitialState::Psi1(1.2).state().is_err());
        assert!(psi1.min_eigenvalue().abs() < 1e-15);
    }

    #[test]
    fn invalid_states_rejected() {
        let mut s = XState::from_populations([0.5, 0.5, 0.0, 0.0]);
        assert!(s.validate().is_ok());
        s.c_ge = Complex64::new(0.3, 0.0);
        assert!(s.validate().is_err());
        assert!(XState::from_populations([0.5, 0.6, 0.0, 0.0])
            .validate()
            .is_err());
    }

    #[test]
    fn zero_time_is_identity() {
        let s = InitialState::Psi1(0.3).state().unwrap();
        let c = CoefficientSet::new(0.6, 0.4, 0.1, 0.0667).unwrap();
        assert_eq!(evolve(&s, &c, 0.0).unwrap(), s);
        assert!(evolve(&s, &c, -1.0).is_err());
    }

    #[test]
    fn antisymmetric_vacuum_decay() {
        let prop = Propagator::new(&vacuum()).unwrap();
        let a = InitialState::Antisymmetric.state().unwrap();
        for &t in &[0.1, 1.0, 3.0] {
            let s = prop.evolve(&a, t).unwrap();
            assert_relative_eq!(s.p_aa, (-t).exp(), epsilon = 1e-13);
            assert_relative_eq!(s.p_gg, 1.0 - (-t).exp(), epsilon = 1e-13);
        }
    }

    #[test]
    fn exponential_path_agrees_with_eigen_path() {
        let c = CoefficientSet::new(0.9, 0.3, 0.2, 0.2 / 3.0).unwrap();
        let eig = Propagator::new(&c).unwrap();
        assert!(eig.uses_eigendecomposition());
        let exp = Propagator::exponential(&c).unwrap();
        let s = InitialState::Excited.state().unwrap();
        for &t in &[0.01, 0.5, 4.0, 30.0] {
            let d = eig
                .evolve(&s, t)
                .unwrap()
                .max_abs_difference(&exp.evolve(&s, t).unwrap());
            assert!(d < 1e-12, "t = {t}: {d}");
        }
    }

    #[test]
    fn degenerate_spectrum_uses_exponential() {
        // Without cross terms |A⟩ and |S⟩ decay at the same rate.
        let prop = Propagator::new(&vacuum()).unwrap();
        assert!(!prop.uses_eigendecomposition());
    }

    #[test]
    fn gibbs_stationary_state() {
        for &a in &[0.3f64, 1.0, 2.5] {
            let x = std::f64::consts::PI / a;
            let coth = 1.0 / x.tanh();
            let c = CoefficientSet::new(0.25 * coth, 0.25, 0.0, 0.0).unwrap();
            let s = asymptotic_state(&c).unwrap();
            let expected = 1.0 / (4.0 * x.cosh().powi(2));
            assert_relative_eq!(s.p_aa, expected, epsilon = 1e-13);
            assert_relative_eq!(s.p_ss, expected, epsilon = 1e-13);
            assert_relative_eq!(
                s.p_aa,
                (c.a1 * c.a1 - c.b1 * c.b1) / (4.0 * c.a1 * c.a1),
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn zero_temperature_asymptote_is_ground() {
        let c = CoefficientSet::new(0.25, 0.25, 0.1, 0.1).unwrap();
        let s = asymptotic_state(&c).unwrap();
        assert_relative_eq!(s.p_gg, 1.0, epsilon = 1e-14);
    }
}
