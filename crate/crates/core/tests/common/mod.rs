#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unruh_core::{
    assemble, AtomOrder, BathKind, CoefficientSet, DipoleOrientation, SystemParams, XState,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_dipole(rng: &mut impl Rng) -> DipoleOrientation {
    loop {
        let v = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n2: f64 = v.iter().map(|x: &f64| x * x).sum();
        if n2 > 0.05 && n2 <= 1.0 {
            return DipoleOrientation::normalized(v).unwrap();
        }
    }
}

pub fn random_params(rng: &mut impl Rng) -> SystemParams {
    let bath = if rng.gen_bool(0.5) {
        BathKind::AcceleratedVacuum
    } else {
        BathKind::ThermalAtUnruh
    };
    SystemParams::new(
        rng.gen_range(0.05..3.0),
        rng.gen_range(0.1..5.0),
        random_dipole(rng),
        random_dipole(rng),
        bath,
    )
    .unwrap()
}

pub fn random_coefficients(rng: &mut impl Rng) -> CoefficientSet {
    assemble(&random_params(rng), AtomOrder::Forward).unwrap()
}

/// Random full-rank X state: Dirichlet populations, coherences strictly
/// inside the positivity bound with random phases.
pub fn random_x_state(rng: &mut impl Rng) -> XState {
    let w: Vec<f64> = (0..4).map(|_| -rng.gen_range(1e-3f64..1.0).ln()).collect();
    let total: f64 = w.iter().sum();
    let p: Vec<f64> = w.iter().map(|x| x / total).collect();
    let mut coherence = |x: f64, y: f64| {
        let r = rng.gen_range(0.0..0.95) * (x * y).sqrt();
        Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
    };
    let c_as = coherence(p[1], p[2]);
    let c_ge = coherence(p[0], p[3]);
    XState {
        p_gg: p[0],
        p_aa: p[1],
        p_ss: p[2],
        p_ee: 1.0 - p[0] - p[1] - p[2],
        c_as,
        c_ge,
    }
}

/// Right-hand side of the population and coherence equations, written out
/// term by term.
pub fn x_state_rhs(
    c: &CoefficientSet,
    s: &[f64; 4],
    coh: [Complex64; 2],
) -> ([f64; 4], [Complex64; 2]) {
    let CoefficientSet { a1, b1, a2, b2 } = *c;
    let [gg, aa, ss, ee] = *s;
    let d_gg =
        -4.0 * (a1 - b1) * gg + 2.0 * (a1 + b1 - a2 - b2) * aa + 2.0 * (a1 + b1 + a2 + b2) * ss;
    let d_aa =
        2.0 * (a1 - b1 - a2 + b2) * gg - 4.0 * (a1 - a2) * aa + 2.0 * (a1 + b1 - a2 - b2) * ee;
    let d_ss =
        2.0 * (a1 - b1 + a2 - b2) * gg - 4.0 * (a1 + a2) * ss + 2.0 * (a1 + b1 + a2 + b2) * ee;
    let d_ee =
        2.0 * (a1 - b1 - a2 + b2) * aa + 2.0 * (a1 - b1 + a2 - b2) * ss - 4.0 * (a1 + b1) * ee;
    (
        [d_gg, d_aa, d_ss, d_ee],
        [coh[0] * (-4.0 * a1), coh[1] * (-4.0 * a1)],
    )
}

/// Fixed-step classical Runge–Kutta integration of the X-state equations.
pub fn rk4(c: &CoefficientSet, initial: &XState, tau: f64, h: f64) -> XState {
    let steps = (tau / h).round() as usize;
    let h = tau / steps as f64;
    let mut p = [initial.p_gg, initial.p_aa, initial.p_ss, initial.p_ee];
    let mut q = [initial.c_as, initial.c_ge];
    let axpy = |p: &[f64; 4], k: &[f64; 4], s: f64| [0, 1, 2, 3].map(|i| p[i] + s * k[i]);
    let caxpy = |q: &[Complex64; 2], k: &[Complex64; 2], s: f64| [q[0] + k[0] * s, q[1] + k[1] * s];
    for _ in 0..steps {
        let (k1, l1) = x_state_rhs(c, &p, q);
        let (k2, l2) = x_state_rhs(c, &axpy(&p, &k1, h / 2.0), caxpy(&q, &l1, h / 2.0));
        let (k3, l3) = x_state_rhs(c, &axpy(&p, &k2, h / 2.0), caxpy(&q, &l2, h / 2.0));
        let (k4, l4) = x_state_rhs(c, &axpy(&p, &k3, h), caxpy(&q, &l3, h));
        for i in 0..4 {
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        for i in 0..2 {
            q[i] += (l1[i] + l2[i] * 2.0 + l3[i] * 2.0 + l4[i]) * (h / 6.0);
        }
    }
    XState {
        p_gg: p[0],
        p_aa: p[1],
        p_ss: p[2],
        p_ee: p[3],
        c_as: q[0],
        c_ge: q[1],
    }
}
