use emsym::dynamics::{
    hamiltonian, integrate, lorentz_rhs, poisson_bracket, write_csv, InvariantFn, IntegrateError, Method, PhaseState,
};
use emsym::fields::FieldSpec;
use proptest::prelude::*;

fn uniform() -> FieldSpec {
    FieldSpec::parse(["-y/2", "x/2", "0"], "0").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn energy_is_conserved_in_a_static_field(
        x in prop::array::uniform3(-1.0f64..1.0),
        v in prop::array::uniform3(-1.0f64..1.0),
    ) {
        let fs = FieldSpec::parse(["-y/2 + z^2/4", "x/2", "x*y/3"], "(x^2 + y^2 + z^2)/2").unwrap();
        let s0 = PhaseState::new(x, v);
        // a pass close to the origin ends the run early; the prefix still counts
        let traj = match integrate(&fs, s0, 5.0, Method::Adaptive { atol: 1e-11, rtol: 1e-11 }) {
            Ok(t) => t,
            Err(e) => e.partial().to_vec(),
        };
        let h0 = hamiltonian(&fs, &s0).unwrap();
        for s in &traj {
            prop_assert!((hamiltonian(&fs, s).unwrap() - h0).abs() < 1e-8);
        }
    }

    #[test]
    fn bracket_is_antisymmetric(
        x in prop::array::uniform3(-1.0f64..1.0),
        v in prop::array::uniform3(-1.0f64..1.0),
    ) {
        let fs = uniform();
        let f = InvariantFn::custom("f", |s: &PhaseState| Ok(s.x[0] * s.v[1] + s.v[2].powi(2)));
        let g = InvariantFn::custom("g", |s: &PhaseState| Ok(s.x[2] * s.v[0] - s.x[1]));
        let s = PhaseState::new(x, v);
        let (a, b) = (poisson_bracket(&f, &g, &fs, &s).unwrap(), poisson_bracket(&g, &f, &fs, &s).unwrap());
        prop_assert!((a + b).abs() < 1e-6);
    }
}

#[test]
fn gyration_matches_the_closed_form() {
    // B = (0, 0, 1): circles of radius |v| with period 2π
    let fs = uniform();
    let s0 = PhaseState::new([0.5, 0.0, 0.0], [1.0, 0.0, 0.5]);
    let traj = integrate(&fs, s0, std::f64::consts::TAU, Method::Adaptive { atol: 1e-12, rtol: 1e-12 }).unwrap();
    let end = traj.last().unwrap();
    assert!((end.x[0] - 0.5).abs() < 1e-8 && end.x[1].abs() < 1e-8, "{end:?}");
    assert!((end.x[2] - std::f64::consts::PI).abs() < 1e-8);
    let rhs = lorentz_rhs(&fs, &s0).unwrap();
    assert_eq!(rhs, [1.0, 0.0, 0.5, 0.0, -1.0, 0.0]);
}

#[test]
fn fixed_step_and_adaptive_agree() {
    let fs = uniform();
    let s0 = PhaseState::new([0.3, 0.1, 0.0], [0.2, 0.4, 0.1]);
    let a = integrate(&fs, s0, 3.0, Method::Rk4 { h: 1e-3 }).unwrap();
    let b = integrate(&fs, s0, 3.0, Method::Adaptive { atol: 1e-12, rtol: 1e-12 }).unwrap();
    let (ea, eb) = (a.last().unwrap(), b.last().unwrap());
    assert!((ea.t - eb.t).abs() < 1e-12);
    for k in 0..3 {
        assert!((ea.x[k] - eb.x[k]).abs() < 1e-9);
    }
}

#[test]
fn leaving_the_domain_keeps_the_partial_trajectory() {
    // radial fall into an attracting centre
    let fs = FieldSpec::parse(["0", "0", "0"], "-1/sqrt(x^2+y^2+z^2)").unwrap();
    let s0 = PhaseState::new([1.0, 0.0, 0.0], [-0.1, 0.0, 0.0]);
    match integrate(&fs, s0, 5.0, Method::Adaptive { atol: 1e-10, rtol: 1e-10 }) {
        Err(IntegrateError::DomainExit { trajectory, .. }) => assert!(trajectory.len() > 1),
        other => panic!("expected a domain exit, got {:?}", other.map(|t| t.len())),
    }
}

#[test]
fn csv_has_one_column_per_invariant() {
    let fs = uniform();
    let traj = integrate(&fs, PhaseState::new([0.1, 0.0, 0.0], [0.0, 0.1, 0.0]), 0.1, Method::Rk4 { h: 0.05 }).unwrap();
    let mut out = Vec::new();
    write_csv(&mut out, &traj, &[InvariantFn::hamiltonian(&fs)]).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,x,y,z,vx,vy,vz,H");
    assert_eq!(text.lines().count(), traj.len() + 1);
}
