//! Brute-force Fourier transform of the proper-time field correlations.
//!
//! Test support only: the production path never calls into this module. It
//! transforms the two-point functions of the electric field along the two
//! hyperbolic trajectories directly and divides out the Planck-weighted
//! prefactor, so that its output can be compared with [`super::f11`] and
//! [`super::f12_component`].
//!
//! The regulated correlation `G_ε(u)` has poles at `u = ±u₀ + iε + 2πik/a`
//! with `u₀ = (2/a) sinh⁻¹(aL/2)` (or a single fourth-order pole at `u = iε`
//! for the same-atom function). The real-axis integral is moved down to the
//! line `Im u = −h` with `0 < h < 2π/a`, which crosses no pole, and there the
//! integrand is smooth and decays like `e^{−2a|u|}`, so the trapezoid rule
//! converges geometrically. `h` is capped so that the growth `e^{λh}` of the
//! Fourier kernel on the shifted line stays below `10³` and does not eat
//! precision. The regulator is then removed by Richardson extrapolation over
//! `ε ∈ {10⁻², 10⁻³, 10⁻⁴}` (proper-time units).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::spectral::AtomOrder;

/// The regulator schedule, largest first.
pub const EPSILON_SCHEDULE: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Default relative tolerance on the agreement of successive extrapolants.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Numerically evaluated modulating function for axis indices `(i, j)`.
///
/// `same_atom` selects the single-atom correlation (compare with `f⁽¹¹⁾ δᵢⱼ`),
/// otherwise the cross correlation between the atom at `z = L` and the atom
/// at `z = 0` in the requested order.
pub fn fourier_oracle(
    i: usize,
    j: usize,
    lambda: f64,
    a: f64,
    l: f64,
    same_atom: bool,
    order: AtomOrder,
) -> Result<f64> {
    fourier_oracle_with_tolerance(i, j, lambda, a, l, same_atom, order, DEFAULT_TOLERANCE)
}

#[allow(clippy::too_many_arguments)]
pub fn fourier_oracle_with_tolerance(
    i: usize,
    j: usize,
    lambda: f64,
    a: f64,
    l: f64,
    same_atom: bool,
    order: AtomOrder,
    tolerance: f64,
) -> Result<f64> {
    if !(1..=3).contains(&i) || !(1..=3).contains(&j) {
        return Err(domain(format!(
            "axis indices must be in 1..=3, got ({i},{j})"
        )));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(domain(format!(
            "frequency argument must be positive, got {lambda}"
        )));
    }
    if !(a.is_finite() && a > 0.0) {
        return Err(domain(format!("the trajectory needs a > 0, got {a}")));
    }
    if !same_atom && !(l.is_finite() && l > 0.0) {
        return Err(domain(format!("separation must be positive, got {l}")));
    }

    let kernel = Kernel {
        m: i,
        n: j,
        a,
        l,
        same_atom,
        handedness: match order {
            AtomOrder::Forward => 1.0,
            AtomOrder::Reverse => -1.0,
        },
    };
    let values: Vec<f64> = EPSILON_SCHEDULE
        .iter()
        .map(|&eps| kernel.transform(lambda, eps))
        .collect();

    let [e0, e1, e2] = EPSILON_SCHEDULE;
    let [v0, v1, v2] = [values[0], values[1], values[2]];
    // Linear extrapolants from consecutive pairs, then the quadratic one.
    let lin01 = (e1 * v0 - e0 * v1) / (e1 - e0);
    let lin12 = (e2 * v1 - e1 * v2) / (e2 - e1);
    let quad = (e2 * lin01 - e0 * lin12) / (e2 - e0);

    let scale = quad.abs().max(1.0);
    if (lin12 - quad).abs() > tolerance * scale {
        return Err(Error::NonConvergence(format!(
            "extrapolants {lin12} and {quad} differ by more than {tolerance} (relative)"
        )));
    }
    let prefactor = lambda.powi(3) / (3.0 * PI) * planck_weight(lambda, a);
    Ok(quad / prefactor)
}

/// `1 + 1/(e^{2πλ/a} − 1)`.
fn planck_weight(lambda: f64, a: f64) -> f64 {
    1.0 + 1.0 / (2.0 * PI * lambda / a).exp_m1()
}

struct Kernel {
    m: usize,
    n: usize,
    a: f64,
    l: f64,
    same_atom: bool,
    /// `ε_{αβ3}`: +1 for the (12) ordering, −1 for (21).
    handedness: f64,
}

impl Kernel {
    /// Two-point function `G⁽ᵅᵝ⁾ₘₙ(u)` at complex proper-time difference `u`,
    /// regulated as `sinh(a(u − iε)/2)` in the light-cone denominator.
    fn correlation(&self, u: Complex64, eps: f64) -> Complex64 {
        let a = self.a;
        let pref = a.powi(4) / (16.0 * PI * PI);
        let reg = ((u - Complex64::new(0.0, eps)) * (0.5 * a)).sinh();
        let delta = if self.m == self.n { 1.0 } else { 0.0 };
        if self.same_atom {
            return pref * delta / reg.powi(4);
        }
        // k = x̂ (index 1), l = ẑ (index 3).
        let k = |idx: usize| if idx == 1 { 1.0 } else { 0.0 };
        let lv = |idx: usize| if idx == 3 { 1.0 } else { 0.0 };
        let (m, n) = (self.m, self.n);
        let al = a * self.l;
        let half = u * (0.5 * a);
        let sh2 = half.sinh().powi(2);
        let ch2 = half.cosh().powi(2);
        let mixed = al * self.handedness * (lv(m) * k(n) - lv(n) * k(m));
        let numerator = (delta + mixed) * sh2
            + 0.25
                * al
                * al
                * ((delta - 2.0 * lv(m) * lv(n)) * ch2
                    + (delta - 2.0 * lv(m) * lv(n) - 2.0 * k(m) * k(n)) * sh2);
        let denominator = (reg * reg - 0.25 * al * al).powi(3);
        pref * numerator / denominator
    }

    /// `∫ dΔτ e^{iλΔτ} G(Δτ)` along `Im Δτ = −h`.
    fn transform(&self, lambda: f64, eps: f64) -> f64 {
        let a = self.a;
        let h = (PI / a).min(1e3f64.ln() / lambda);
        let half_width = (40.0 + lambda * h) / (2.0 * a) + 10.0;
        let step = 0.02 * (1.0f64).min(1.0 / lambda).min(1.0 / a).min(h);
        let count = (2.0 * half_width / step).ceil() as usize;
        let dx = 2.0 * half_width / count as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for idx in 0..=count {
            let x = -half_width + dx * idx as f64;
            let u = Complex64::new(x, -h);
            let w = if idx == 0 || idx == count { 0.5 } else { 1.0 };
            acc += w * (Complex64::i() * lambda * u).exp() * self.correlation(u, eps);
        }
        (acc * dx).re
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{f11, f12_component};

    #[test]
    fn same_atom_matches_f11() {
        let v = fourier_oracle(1, 1, 1.0, 1.0, 1.0, true, AtomOrder::Forward).unwrap();
        assert!((v - f11(1.0, 1.0).unwrap()).abs() < 1e-4, "{v}");
        let off = fourier_oracle(1, 2, 1.0, 1.0, 1.0, true, AtomOrder::Forward).unwrap();
        assert_eq!(off, 0.0);
    }

    #[test]
    fn cross_components() {
        let v12 = fourier_oracle(1, 2, 1.0, 1.0, 1.0, false, AtomOrder::Forward).unwrap();
        assert!(v12.abs() < 1e-6);
        let v13 = fourier_oracle(1, 3, 1.0, 1.0, 1.0, false, AtomOrder::Forward).unwrap();
        let f13 = f12_component(1, 3, 1.0, 1.0, 1.0, AtomOrder::Forward).unwrap();
        assert!((v13 - f13).abs() < 1e-4 * f13.abs(), "{v13} vs {f13}");
        let r13 = fourier_oracle(1, 3, 1.0, 1.0, 1.0, false, AtomOrder::Reverse).unwrap();
        assert!((r13 + f13).abs() < 1e-4 * f13.abs());
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(fourier_oracle(1, 1, 1.0, 0.0, 1.0, false, AtomOrder::Forward).is_err());
        assert!(fourier_oracle(4, 1, 1.0, 1.0, 1.0, false, AtomOrder::Forward).is_err());
        assert!(fourier_oracle(1, 1, 1.0, 1.0, 0.0, false, AtomOrder::Forward).is_err());
    }

    #[test]
    fn impossible_tolerance_reports_non_convergence() {
        let r =
            fourier_oracle_with_tolerance(1, 1, 1.0, 1.0, 1.0, false, AtomOrder::Forward, 1e-30);
        assert!(matches!(r, Err(Error::NonConvergence(_))));
    }
}
