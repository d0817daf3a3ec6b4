mod common;

use proptest::prelude::*;
use unruh_core::entanglement::{k_values, DEAD_THRESHOLD};
use unruh_core::{
    assemble, asymptotic_state, basis_transform, concurrence_wootters, concurrence_x,
    detect_events, AtomOrder, BathKind, CoefficientSet, DipoleOrientation, InitialState,
    Propagator, SystemParams, Trajectory,
};

fn coefficients(
    a: f64,
    l: f64,
    d1: DipoleOrientation,
    d2: DipoleOrientation,
    bath: BathKind,
) -> CoefficientSet {
    assemble(
        &SystemParams::new(a, l, d1, d2, bath).unwrap(),
        AtomOrder::Forward,
    )
    .unwrap()
}

fn events(c: &CoefficientSet, s: InitialState) -> unruh_core::EntanglementEvents {
    let times = unruh_core::sweeps::TimeGrid::default().times();
    let traj =
        Trajectory::sample_until_settled(Propagator::new(c).unwrap(), &s.state().unwrap(), &times)
            .unwrap();
    detect_events(&traj).unwrap()
}

#[test]
fn x_formula_matches_wootters_on_random_states() {
    let mut rng = common::rng(1);
    for _ in 0..1000 {
        let s = common::random_x_state(&mut rng);
        let x = concurrence_x(&s).unwrap();
        let w = concurrence_wootters(&basis_transform(&s)).unwrap();
        assert!((x - w).abs() < 1e-10, "{s:?}: {x} vs {w}");
        assert!((0.0..=1.0).contains(&x));
    }
}

#[test]
fn initial_decay_rate_at_large_separation() {
    let z = DipoleOrientation::z();
    for &a in &[0.25f64, 1.0, 2.0] {
        let coth = 1.0 / (std::f64::consts::PI / (2.0 * a)).tanh();
        for (bath, expected) in [
            (BathKind::AcceleratedVacuum, (1.0 + a * a) * coth),
            (BathKind::ThermalAtUnruh, coth),
        ] {
            let c = coefficients(a, 1e4, z, z, bath);
            let s = InitialState::Symmetric.state().unwrap();
            let h = 1e-6;
            let slope = (concurrence_x(&s).unwrap()
                - concurrence_x(&unruh_core::evolve(&s, &c, h).unwrap()).unwrap())
                / h;
            assert!(
                (slope / expected - 1.0).abs() < 1e-3,
                "a={a} {bath:?}: {slope} vs {expected}"
            );
        }
    }
}

#[test]
fn asymptotic_states_are_separable() {
    let pairs = [
        (DipoleOrientation::z(), DipoleOrientation::z()),
        (DipoleOrientation::y(), DipoleOrientation::y()),
        (DipoleOrientation::z(), DipoleOrientation::x()),
    ];
    for k in 1..=20 {
        for m in 1..=20 {
            for (d1, d2) in pairs {
                for bath in BathKind::ALL {
                    let c = coefficients(0.15 * k as f64, 0.25 * m as f64, d1, d2, bath);
                    let s = asymptotic_state(&c).unwrap();
                    assert_eq!(concurrence_x(&s).unwrap(), 0.0);
                    let (k1, k2) = k_values(&s).unwrap();
                    assert!(k1 <= 0.0 && k2 <= 0.0);
                    // Below this the thermal excitation A₁ − B₁ underflows
                    // against B₁ and the asymptote is exactly |G⟩.
                    if c.a1 - c.b1 > 1e-3 * f64::EPSILON * c.b1 {
                        assert!(k1 < 0.0 && k2 < 0.0, "{c:?}: {k1} {k2}");
                    }
                }
            }
        }
    }
}

#[test]
fn antisymmetric_state_dies_without_revival() {
    let z = DipoleOrientation::z();
    let e = events(
        &coefficients(1.0, 1e4, z, z, BathKind::ThermalAtUnruh),
        InitialState::Antisymmetric,
    );
    assert!(e.death_time.is_some());
    assert!(!e.revival && !e.enhancement);
    assert_eq!(e.max_concurrence, 1.0);
    assert_eq!(e.max_time, 0.0);
}

#[test]
fn revival_and_enhancement_for_aligned_dipoles() {
    let z = DipoleOrientation::z();
    for bath in BathKind::ALL {
        let c = coefficients(0.5, 1.0, z, z, bath);
        let revival = events(&c, InitialState::Psi1(0.25));
        assert!(revival.revival, "{bath:?}: {revival:?}");
        let t_death = revival.death_time.unwrap();
        assert!(revival.revival_time.unwrap() > t_death);
        let enhanced = events(&c, InitialState::Psi1(0.75));
        assert!(enhanced.enhancement, "{bath:?}: {enhanced:?}");
        assert!(enhanced.max_concurrence > enhanced.initial_concurrence);
    }
}

#[test]
fn refined_transitions_straddle_the_threshold() {
    let z = DipoleOrientation::z();
    let c = coefficients(0.5, 1.0, z, z, BathKind::AcceleratedVacuum);
    let e = events(&c, InitialState::Psi1(0.25));
    let s = InitialState::Psi1(0.25).state().unwrap();
    let prop = Propagator::new(&c).unwrap();
    for tr in &e.transitions {
        let before = concurrence_x(&prop.evolve(&s, tr.time - 1e-8).unwrap()).unwrap();
        let after = concurrence_x(&prop.evolve(&s, tr.time + 1e-8).unwrap()).unwrap();
        match tr.kind {
            unruh_core::entanglement::TransitionKind::Death => {
                assert!(before > DEAD_THRESHOLD && after <= DEAD_THRESHOLD)
            }
            unruh_core::entanglement::TransitionKind::Birth => {
                assert!(before <= DEAD_THRESHOLD && after > DEAD_THRESHOLD)
            }
        }
    }
}

proptest! {
    #[test]
    fn concurrence_is_a_unit_interval_value(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let s = common::random_x_state(&mut rng);
        let c = concurrence_x(&s).unwrap();
        prop_assert!((0.0..=1.0).contains(&c));
    }

    #[test]
    fn event_invariants(seed in any::<u64>(), p in 0.0f64..1.0) {
        let mut rng = common::rng(seed);
        let c = common::random_coefficients(&mut rng);
        let e = events(&c, InitialState::Psi1(p));
        if e.revival {
            prop_assert!(e.death_time.unwrap() < e.revival_time.unwrap());
        }
        prop_assert_eq!(e.enhancement, e.max_concurrence > e.initial_concurrence + 1e-9);
        prop_assert!((0.0..=1.0).contains(&e.max_concurrence));
        let kinds: Vec<_> = e.transitions.iter().map(|t| t.kind).collect();
        prop_assert!(kinds.windows(2).all(|w| w[0] != w[1]));
    }
}
