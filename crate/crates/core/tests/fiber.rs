mod common;

use carpet_core::closed_form::gl_dims;
use carpet_core::fiber::{
    build_exceptional, few_large_tangents, level_set_dim, pointwise_assouad_baranski, pointwise_assouad_gl,
    symbolic_slice,
};
use carpet_core::{nonauto_assouad, solve_moran, validate, DiagonalMap, Error, EventuallyPeriodicWord, OmegaClass};

fn w(s: &str) -> EventuallyPeriodicWord {
    s.parse().unwrap()
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b}");
}

#[test]
fn gl_pointwise_values() {
    let sys = common::gl3();
    let dim_b = gl_dims(&sys).unwrap().dim_b;
    let full = pointwise_assouad_gl(&sys, &w(":(0)")).unwrap();
    close(full.fiber_dim, 0.5, 1e-12);
    close(full.pointwise_assouad, 1.5, 1e-12);
    let thin = pointwise_assouad_gl(&sys, &w(":(2)")).unwrap();
    close(thin.fiber_dim, 0.0, 1e-12);
    close(thin.pointwise_assouad, dim_b, 1e-10);
    // alternating columns: the average fibre exponent is 1/4
    let mixed = pointwise_assouad_gl(&sys, &w(":(0,2)")).unwrap();
    close(mixed.fiber_dim, 0.25, 1e-12);
    close(mixed.pointwise_assouad, dim_b, 1e-10);
    // the preperiod does not matter
    let shifted = pointwise_assouad_gl(&sys, &w("2,2,2:(1)")).unwrap();
    close(shifted.pointwise_assouad, 1.5, 1e-12);
}

#[test]
fn gl_pointwise_checks_the_class_and_letters() {
    let exc = build_exceptional(0.0).unwrap();
    assert!(matches!(pointwise_assouad_gl(&exc, &w(":(0)")), Err(Error::WrongClass { .. })));
    assert!(matches!(pointwise_assouad_gl(&common::gl3(), &w(":(3)")), Err(Error::IndexError { .. })));
}

#[test]
fn slices_follow_the_column_sequence() {
    let sys = common::gl3();
    let seq = symbolic_slice(&sys, &w("2:(0)"), carpet_core::Axis::X).unwrap();
    assert_eq!(seq.step(0).ratios(), &[0.25]);
    assert_eq!(seq.step(1).ratios(), &[0.25, 0.25]);
    close(nonauto_assouad(&seq), 0.5, 1e-12);
}

#[test]
fn baranski_pointwise_in_both_directions() {
    let delta = 1.0 / 40.0;
    let sys = build_exceptional(delta).unwrap();
    let (a1, a2, b) = (1.0 / 3.0 - delta, 1.0 / 6.0 - delta, 0.25 - delta);

    let wide = pointwise_assouad_baranski(&sys, &w(":(0)")).unwrap();
    assert_eq!(wide.omega_class, OmegaClass::Omega1);
    assert_eq!(wide.axis, 1);
    close(wide.fiber_dim, solve_moran(&[b; 4]).unwrap(), 1e-12);
    close(wide.tangent_dim, solve_moran(&[a1, a2, a2, a2, a2]).unwrap() + wide.fiber_dim, 1e-12);
    assert!(wide.pointwise_assouad >= wide.tangent_dim);

    let narrow = pointwise_assouad_baranski(&sys, &w(":(4)")).unwrap();
    assert_eq!(narrow.omega_class, OmegaClass::Omega2);
    assert_eq!(narrow.axis, 2);
    close(narrow.fiber_dim, solve_moran(&[a1, a2, a2]).unwrap(), 1e-12);
    close(narrow.tangent_dim, solve_moran(&[b; 4]).unwrap() + narrow.fiber_dim, 1e-12);
}

#[test]
fn baranski_pointwise_needs_a_direction() {
    let third = 1.0 / 3.0;
    let sys = validate(vec![
        DiagonalMap::new(third, third, 0.0, 0.0),
        DiagonalMap::new(third, third, 2.0 * third, 2.0 * third),
    ])
    .unwrap();
    assert!(matches!(pointwise_assouad_baranski(&sys, &w(":(0,1)")), Err(Error::Unsupported(_))));
}

#[test]
fn level_sets() {
    let sys = common::gl3();
    let dims = gl_dims(&sys).unwrap();
    let mid = level_set_dim(&sys, 1.4).unwrap();
    close(mid.dim.unwrap(), dims.dim_h, 1e-12);
    assert!(!mid.full_measure);
    let top = level_set_dim(&sys, 1.5).unwrap();
    assert!(top.full_measure);
    close(top.dim.unwrap(), dims.dim_h, 1e-12);
    assert_eq!(level_set_dim(&sys, 1.0).unwrap().dim, None);
    assert_eq!(level_set_dim(&sys, 1.6).unwrap().dim, None);
}

#[test]
fn few_large_tangents_cases() {
    let exc = build_exceptional(1.0 / 40.0).unwrap();
    let r = few_large_tangents(&exc).unwrap();
    assert!(r.holds);
    assert_eq!(r.witness, Some(1));

    let swapped = validate(vec![
        DiagonalMap::new(0.5, 0.25, 0.0, 0.75),
        DiagonalMap::new(0.25, 0.5, 0.75, 0.0),
        DiagonalMap::new(0.25, 0.25, 0.75, 0.75),
    ])
    .unwrap();
    let r = few_large_tangents(&swapped).unwrap();
    assert!(!r.holds);
    assert_eq!(r.witness, None);

    let third = 1.0 / 3.0;
    let corners = validate(
        [(0.0, 0.0), (2.0 * third, 0.0), (0.0, 2.0 * third), (2.0 * third, 2.0 * third)]
            .iter()
            .map(|&(x, y)| DiagonalMap::new(third, third, x, y))
            .collect(),
    )
    .unwrap();
    assert!(matches!(few_large_tangents(&corners), Err(Error::Unsupported(_))));
    assert!(matches!(few_large_tangents(&common::gl3()), Err(Error::Unsupported(_))));
}
