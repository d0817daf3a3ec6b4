mod common;

use proptest::prelude::*;
use rand::Rng;
use unruh_core::dynamics::{closed_form_antisymmetric_population, min_eigenvalue};
use unruh_core::{
    assemble, asymptotic_state, basis_transform, build_generator, evolve, AtomOrder, BathKind,
    CoefficientSet, DipoleOrientation, InitialState, Propagator, SystemParams, XState,
};

const CATALOGUE: [InitialState; 6] = [
    InitialState::Ground,
    InitialState::Antisymmetric,
    InitialState::Symmetric,
    InitialState::Excited,
    InitialState::Psi1(0.25),
    InitialState::Psi2(0.2),
];

#[test]
fn exact_propagator_matches_runge_kutta() {
    let mut rng = common::rng(11);
    for _ in 0..10 {
        let c = common::random_coefficients(&mut rng);
        let s = common::random_x_state(&mut rng);
        let exact = evolve(&s, &c, 5.0).unwrap();
        let rk = common::rk4(&c, &s, 5.0, 1e-4);
        let d = exact.max_abs_difference(&rk);
        assert!(d < 1e-6, "{c:?}: {d}");
    }
}

#[test]
fn trace_and_positivity_along_random_trajectories() {
    let mut rng = common::rng(23);
    for _ in 0..100 {
        let c = common::random_coefficients(&mut rng);
        let prop = Propagator::new(&c).unwrap();
        let s = common::random_x_state(&mut rng);
        let ev = prop.evolver(&s).unwrap();
        for k in 0..=100 {
            let t = 0.5 * k as f64;
            let x = ev.at(t);
            assert!(
                (x.trace() - 1.0).abs() < 1e-10,
                "trace at τ={t}: {}",
                x.trace()
            );
            let rho = basis_transform(&x);
            assert!(min_eigenvalue(&rho) >= -1e-9);
        }
    }
}

#[test]
fn long_time_limit_is_asymptotic_state() {
    let mut rng = common::rng(31);
    for _ in 0..20 {
        let c = common::random_coefficients(&mut rng);
        let inf = asymptotic_state(&c).unwrap();
        for s in CATALOGUE {
            let x = evolve(&s.state().unwrap(), &c, 1e3).unwrap();
            assert!(x.max_abs_difference(&inf) < 1e-8, "{s:?} {c:?}");
        }
    }
}

#[test]
fn asymptotic_closed_form_on_grid() {
    for k in 1..=10 {
        for m in 1..=10 {
            let (a, l) = (0.3 * k as f64, 0.5 * m as f64);
            for bath in BathKind::ALL {
                let z = DipoleOrientation::z();
                let c = assemble(
                    &SystemParams::new(a, l, z, z, bath).unwrap(),
                    AtomOrder::Forward,
                )
                .unwrap();
                let s = asymptotic_state(&c).unwrap();
                let closed = closed_form_antisymmetric_population(&c);
                assert!((s.p_aa - closed).abs() < 1e-10);
                assert!((s.p_ss - closed).abs() < 1e-10);
                assert_eq!(s.c_as.norm(), 0.0);
                assert_eq!(s.c_ge.norm(), 0.0);
            }
        }
    }
}

#[test]
fn asymptotic_generic_point() {
    let z = DipoleOrientation::z();
    let c = assemble(
        &SystemParams::new(1.0, 1.0, z, z, BathKind::AcceleratedVacuum).unwrap(),
        AtomOrder::Forward,
    )
    .unwrap();
    let s = asymptotic_state(&c).unwrap();
    assert!((s.p_aa - closed_form_antisymmetric_population(&c)).abs() < 1e-10);
    let m = build_generator(&c).unwrap().matrix;
    let p = nalgebra::Vector4::from(s.populations());
    assert!((m * p).amax() < 1e-14);
}

#[test]
fn generator_is_a_rate_matrix() {
    let mut rng = common::rng(3);
    for _ in 0..200 {
        let c = common::random_coefficients(&mut rng);
        let g = build_generator(&c).unwrap();
        for j in 0..4 {
            let off: f64 = (0..4).filter(|&i| i != j).map(|i| g.matrix[(i, j)]).sum();
            assert_eq!(-off, g.matrix[(j, j)]);
            for i in 0..4 {
                if i != j {
                    assert!(g.matrix[(i, j)] >= 0.0);
                }
            }
        }
        assert!(g.max_column_sum() <= 4.0 * f64::EPSILON * g.matrix.amax());
    }
}

#[test]
fn x_structure_is_preserved() {
    let mut rng = common::rng(8);
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
    for _ in 0..50 {
        let c = common::random_coefficients(&mut rng);
        let s = common::random_x_state(&mut rng);
        let rho = basis_transform(&evolve(&s, &c, rng.gen_range(0.0..20.0)).unwrap());
        for (i, j) in OFF_X {
            assert!(rho[(i, j)].norm() < 1e-14);
        }
    }
}

#[test]
fn eigen_and_exponential_paths_agree() {
    let mut rng = common::rng(77);
    let mut compared = 0;
    while compared < 50 {
        let c = common::random_coefficients(&mut rng);
        let eig = Propagator::new(&c).unwrap();
        if !eig.uses_eigendecomposition() {
            continue;
        }
        compared += 1;
        let exp = Propagator::exponential(&c).unwrap();
        let s = common::random_x_state(&mut rng);
        for &t in &[0.3, 2.0, 15.0] {
            let d = eig
                .evolve(&s, t)
                .unwrap()
                .max_abs_difference(&exp.evolve(&s, t).unwrap());
            assert!(d < 1e-11, "{c:?} τ={t}: {d}");
        }
    }
}

#[test]
fn strong_acceleration_keeps_trace_and_positivity() {
    let (x, z) = (DipoleOrientation::x(), DipoleOrientation::z());
    for a in [50.0, 400.0] {
        for (d1, d2) in [(z, z), (z, x)] {
            let params = SystemParams::new(a, 1.0, d1, d2, BathKind::AcceleratedVacuum).unwrap();
            let c = assemble(&params, AtomOrder::Forward).unwrap();
            let eig = Propagator::new(&c).unwrap();
            let exp = Propagator::exponential(&c).unwrap();
            for s in CATALOGUE {
                let s = s.state().unwrap();
                for k in 1..=50 {
                    let t = k as f64;
                    let x = eig.evolve(&s, t).unwrap();
                    assert!(
                        (x.trace() - 1.0).abs() < 1e-10,
                        "a={a} τ={t}: {}",
                        x.trace()
                    );
                    let m = min_eigenvalue(&basis_transform(&x));
                    assert!(m >= -1e-9, "a={a} τ={t}: {m:e} {x:?}");
                    let d = x.max_abs_difference(&exp.evolve(&s, t).unwrap());
                    let rounding = 64.0 * f64::EPSILON * eig.generator().matrix.norm() * t;
                    assert!(d < rounding.max(1e-12), "a={a} τ={t}: {d:e} {c:?}");
                }
            }
        }
    }
}

#[test]
fn degenerate_cross_rate_falls_back() {
    // A₁ = A₂ makes |A⟩ a dark state and the spectrum degenerate at zero.
    let c = CoefficientSet::new(0.25, 0.25, 0.25, 0.25).unwrap();
    let prop = Propagator::new(&c).unwrap();
    assert!(!prop.uses_eigendecomposition());
    let s = prop
        .evolve(&InitialState::Antisymmetric.state().unwrap(), 3.0)
        .unwrap();
    assert!((s.p_aa - 1.0).abs() < 1e-14);
    assert!(asymptotic_state(&c).is_err());
}

proptest! {
    #[test]
    fn semigroup_property(seed in any::<u64>(), t1 in 0.0f64..10.0, t2 in 0.0f64..10.0) {
        let mut rng = common::rng(seed);
        let c = common::random_coefficients(&mut rng);
        let s = common::random_x_state(&mut rng);
        let two_step = evolve(&evolve(&s, &c, t1).unwrap(), &c, t2).unwrap();
        let one_step = evolve(&s, &c, t1 + t2).unwrap();
        prop_assert!(two_step.max_abs_difference(&one_step) < 1e-10);
    }

    #[test]
    fn evolved_states_stay_valid(seed in any::<u64>(), t in 0.0f64..50.0) {
        let mut rng = common::rng(seed);
        let c = common::random_coefficients(&mut rng);
        let s: XState = common::random_x_state(&mut rng);
        let x = evolve(&s, &c, t).unwrap();
        prop_assert!(x.validate().is_ok());
    }
}
