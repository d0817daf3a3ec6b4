//! Modulating functions of the electromagnetic field correlations seen by two
//! atoms accelerating perpendicular to their separation.
//!
//! The Fourier transform of the single-atom correlation is
//! `(λ³/3π)(1 + 1/(e^{2πλ/a} − 1)) f⁽¹¹⁾(λ,a) δₘₙ` and the cross-atom one is the
//! same Planck-weighted prefactor times `f⁽¹²⁾ₘₙ(λ,a,L)`. This module evaluates
//! the dimensionless `f` factors. Only the `(1,1)`, `(2,2)`, `(3,3)`, `(1,3)`
//! and `(3,1)` components are nonzero; the last two are antisymmetric and flip
//! sign when the atom order is reversed.
//!
//! Two numerically delicate corners are handled explicitly:
//!
//! * `L` small: the closed forms divide an `O(L³)` numerator by `L³`; once
//!   `L·max(λ, a)` drops below [`SMALL_SEPARATION`] a Taylor series in `L`
//!   through sixth order is used.
//! * `a` small: below [`SMALL_ACCELERATION`] the functions are replaced by their
//!   `a → 0` limits, which coincide with the thermal-bath functions.

pub mod oracle;

use crate::error::{domain, Result};

/// Below this value of `L·max(λ, a)` the small-separation series replaces the
/// closed forms.
pub const SMALL_SEPARATION: f64 = 2e-2;

/// Below this value of `a/λ`-scale acceleration the thermal limit is used.
pub const SMALL_ACCELERATION: f64 = 1e-4;

/// Which atom's dipole is contracted with the first tensor index.
///
/// `Forward` selects `f⁽¹²⁾`, `Reverse` selects `f⁽²¹⁾ = (f⁽¹²⁾)ᵀ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum AtomOrder {
    #[default]
    Forward,
    Reverse,
}

impl AtomOrder {
    pub fn label(self) -> &'static str {
        match self {
            AtomOrder::Forward => "12",
            AtomOrder::Reverse => "21",
        }
    }
}

/// A validated argument triple `(λ, a, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub lambda: f64,
    pub accel: f64,
    pub separation: f64,
}

impl SpectralPoint {
    pub fn new(lambda: f64, accel: f64, separation: f64) -> Result<Self> {
        check_lambda(lambda)?;
        check_accel(accel)?;
        check_separation(separation)?;
        Ok(Self {
            lambda,
            accel,
            separation,
        })
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(domain(format!(
            "frequency argument must be positive, got {lambda}"
        )));
    }
    Ok(())
}

fn check_accel(a: f64) -> Result<()> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(domain(format!(
            "acceleration must be non-negative, got {a}"
        )));
    }
    Ok(())
}

fn check_separation(l: f64) -> Result<()> {
    if !(l.is_finite() && l > 0.0) {
        return Err(domain(format!(
            "separation must be strictly positive (vanishing separation is outside the model), got {l}"
        )));
    }
    Ok(())
}

fn check_index(i: usize) -> Result<()> {
    if !(1..=3).contains(&i) {
        return Err(domain(format!("axis index must be 1, 2 or 3, got {i}")));
    }
    Ok(())
}

/// `f⁽¹¹⁾(λ, a) = 1 + a²/λ²`.
pub fn f11(lambda: f64, a: f64) -> Result<f64> {
    check_lambda(lambda)?;
    check_accel(a)?;
    Ok(1.0 + a * a / (lambda * lambda))
}

/// Cross-atom modulating function component `f⁽¹²⁾ᵢⱼ` (or `f⁽²¹⁾ᵢⱼ` for
/// [`AtomOrder::Reverse`]) with axis indices in `1..=3`.
pub fn f12_component(
    i: usize,
    j: usize,
    lambda: f64,
    a: f64,
    l: f64,
    order: AtomOrder,
) -> Result<f64> {
    check_index(i)?;
    check_index(j)?;
    check_lambda(lambda)?;
    check_accel(a)?;
    check_separation(l)?;
    if a < SMALL_ACCELERATION {
        return thermal_unchecked(i, j, lambda, l);
    }
    let sign = match order {
        AtomOrder::Forward => 1.0,
        AtomOrder::Reverse => -1.0,
    };
    let small = l * lambda.max(a) < SMALL_SEPARATION;
    let value = match (i, j) {
        (1, 1) | (2, 2) | (3, 3) => {
            if small {
                diagonal_series(i, lambda, a, l)
            } else {
                diagonal_closed(i, lambda, a, l)
            }
        }
        (1, 3) | (3, 1) => {
            let f13 = if small {
                f13_series(lambda, a, l)
            } else {
                f13_closed(lambda, a, l)
            };
            if (i, j) == (1, 3) {
                sign * f13
            } else {
                -sign * f13
            }
        }
        _ => 0.0,
    };
    Ok(value)
}

/// The `a → 0` limit of `f⁽¹²⁾ᵢⱼ`, identical to the modulating function of
/// static atoms in a thermal bath.
pub fn f12_thermal_component(i: usize, j: usize, lambda: f64, l: f64) -> Result<f64> {
    check_index(i)?;
    check_index(j)?;
    check_lambda(lambda)?;
    check_separation(l)?;
    thermal_unchecked(i, j, lambda, l)
}

/// All nine components of `f⁽¹²⁾` (or `f⁽²¹⁾`), indexed from zero.
pub fn f12_tensor(lambda: f64, a: f64, l: f64, order: AtomOrder) -> Result<[[f64; 3]; 3]> {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = f12_component(i + 1, j + 1, lambda, a, l, order)?;
        }
    }
    Ok(out)
}

/// All nine components of the thermal-bath cross function, indexed from zero.
pub fn f12_thermal_tensor(lambda: f64, l: f64) -> Result<[[f64; 3]; 3]> {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = f12_thermal_component(i + 1, j + 1, lambda, l)?;
        }
    }
    Ok(out)
}

fn thermal_unchecked(i: usize, j: usize, lambda: f64, l: f64) -> Result<f64> {
    let x = lambda * l;
    let small = x < SMALL_SEPARATION;
    let x2 = x * x;
    let value = match (i, j) {
        (1, 1) | (2, 2) => {
            if small {
                1.0 - x2 / 5.0 + 3.0 * x2 * x2 / 280.0 - x2 * x2 * x2 / 3780.0
            } else {
                let (s, c) = x.sin_cos();
                (3.0 * x * c - 3.0 * s + 3.0 * x2 * s) / (2.0 * x2 * x)
            }
        }
        (3, 3) => {
            if small {
                1.0 - x2 / 10.0 + x2 * x2 / 280.0 - x2 * x2 * x2 / 15120.0
            } else {
                let (s, c) = x.sin_cos();
                (-3.0 * x * c + 3.0 * s) / (x2 * x)
            }
        }
        _ => 0.0,
    };
    Ok(value)
}

/// Phase `(2λ/a) sinh⁻¹(aL/2)`, the proper-time separation of the two
/// light-cone poles scaled by `λ`.
fn phase(lambda: f64, a: f64, l: f64) -> f64 {
    2.0 * lambda / a * (0.5 * a * l).asinh()
}

fn diagonal_closed(i: usize, lambda: f64, a: f64, l: f64) -> f64 {
    let (sn, cs) = phase(lambda, a, l).sin_cos();
    let al2 = a * a * l * l;
    let ll2 = lambda * lambda * l * l;
    let q = 4.0 + al2;
    let sq = q.sqrt();
    let lam3l3 = lambda.powi(3) * l.powi(3);
    match i {
        1 => {
            let cos_term = 2.0 * lambda * l * (1.0 + al2) * sq;
            let sin_term = 4.0 - 4.0 * ll2 + al2 * (2.0 - ll2 + al2);
            12.0 / (lam3l3 * q * q * sq) * (cos_term * cs - sin_term * sn)
        }
        2 => {
            let cos_term = lambda * l * (2.0 + al2) * sq;
            let sin_term = -4.0 + 4.0 * ll2 + al2 * ll2;
            3.0 / (lam3l3 * q * sq) * (cos_term * cs + sin_term * sn)
        }
        _ => {
            let cos_term = lambda * l * (16.0 + 2.0 * al2 + al2 * al2) * sq;
            let sin_term = -32.0 + al2 * al2 * ll2 + 4.0 * al2 * (-5.0 + ll2);
            -3.0 / (lam3l3 * q * q * sq) * (cos_term * cs + sin_term * sn)
        }
    }
}

fn f13_closed(lambda: f64, a: f64, l: f64) -> f64 {
    let (sn, cs) = phase(lambda, a, l).sin_cos();
    let al2 = a * a * l * l;
    let ll2 = lambda * lambda * l * l;
    let q = 4.0 + al2;
    let sq = q.sqrt();
    let cos_term = lambda * l * (-2.0 + al2) * sq;
    let sin_term = 4.0 + 4.0 * ll2 + al2 * (4.0 + ll2);
    -6.0 * a / (lambda.powi(3) * l * l * q * q * sq) * (cos_term * cs + sin_term * sn)
}

// Series coefficients in powers of L; each is a polynomial in a², λ² with
// an a^{2k}/λ² tail.
fn diagonal_series(i: usize, lambda: f64, a: f64, l: f64) -> f64 {
    let a2 = a * a;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let a8 = a4 * a4;
    let m2 = lambda * lambda;
    let m4 = m2 * m2;
    let m6 = m4 * m2;
    let c0 = 1.0 + a2 / m2;
    let (c2, c4, c6) = match i {
        1 => (
            -4.0 * a4 / (5.0 * m2) - a2 - m2 / 5.0,
            27.0 * a6 / (70.0 * m2) + 21.0 * a4 / 40.0 + 3.0 * a2 * m2 / 20.0 + 3.0 * m4 / 280.0,
            -16.0 * a8 / (105.0 * m2)
                - 41.0 * a6 / 189.0
                - 13.0 * a4 * m2 / 180.0
                - a2 * m4 / 126.0
                - m6 / 3780.0,
        ),
        2 => (
            -3.0 * a4 / (10.0 * m2) - a2 / 2.0 - m2 / 5.0,
            3.0 * a6 / (35.0 * m2) + 3.0 * a4 / 20.0 + 3.0 * a2 * m2 / 40.0 + 3.0 * m4 / 280.0,
            -a8 / (42.0 * m2)
                - 317.0 * a6 / 7560.0
                - a4 * m2 / 45.0
                - 11.0 * a2 * m4 / 2520.0
                - m6 / 3780.0,
        ),
        _ => (
            -9.0 * a4 / (10.0 * m2) - a2 - m2 / 10.0,
            3.0 * a6 / (7.0 * m2) + 11.0 * a4 / 20.0 + a2 * m2 / 8.0 + m4 / 280.0,
            -a8 / (6.0 * m2)
                - 1733.0 * a6 / 7560.0
                - 49.0 * a4 * m2 / 720.0
                - a2 * m4 / 180.0
                - m6 / 15120.0,
        ),
    };
    let l2 = l * l;
    c0 + l2 * (c2 + l2 * (c4 + l2 * c6))
}

fn f13_series(lambda: f64, a: f64, l: f64) -> f64 {
    let a2 = a * a;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let m2 = lambda * lambda;
    let m4 = m2 * m2;
    let c1 = -a * (a2 / m2 + 1.0);
    let c3 = a * (3.0 * a4 / (5.0 * m2) + 3.0 * a2 / 4.0 + 3.0 * m2 / 20.0);
    let c5 = -a * (9.0 * a6 / (35.0 * m2) + 7.0 * a4 / 20.0 + a2 * m2 / 10.0 + m4 / 140.0);
    let l2 = l * l;
    l * (c1 + l2 * (c3 + l2 * c5))
}
