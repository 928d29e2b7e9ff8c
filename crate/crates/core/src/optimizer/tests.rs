use super::*;
use crate::schemes::lookup;

fn slot(s: &Scheme, name: &str) -> usize {
    s.slot_index(name).unwrap()
}

#[test]
fn sl11_nearest_root_from_analytic_guess() {
    let entry = lookup("n2-p4-sl-m11-analytic").unwrap();
    let s = entry.scheme().unwrap();
    let analytic = entry.params_f64().unwrap();
    let w1 = analytic.values()[0];
    let p = solve_on_manifold(
        &s,
        4,
        &[slot(&s, "w2")],
        &[2.0 / 3.0],
        Some(&[0.25686636]),
        0,
    )
    .unwrap();
    assert!(
        (p.values()[0] - w1).abs() < 1e-10,
        "{:?} vs {w1}",
        p.values()
    );
    let (ok, _) = verify_order(&s, &p, 4, 1e-10).unwrap();
    assert!(ok);
}

#[test]
fn closure_only_case_needs_no_iterations() {
    let s = Scheme::build(2, Family::S, 5).unwrap();
    let a1 = (3.0 - 3f64.sqrt()) / 6.0;
    let chooser = Chooser::new(&s, &[slot(&s, "a1")]).unwrap();
    let pt = solve_dependent(&s, 2, &chooser, &[a1], &[]).unwrap();
    assert_eq!(pt.iterations, 0);
    let values = s.resolve(&pt.template_free).unwrap();
    assert_eq!(values[1], 0.5);
    assert!((values[2] - (1.0 - 2.0 * a1)).abs() < 1e-15);
}

#[test]
fn fixed_slot_cannot_be_free() {
    let s = Scheme::build(2, Family::S, 9).unwrap();
    assert!(Chooser::new(&s, &[slot(&s, "a3")]).is_err());
}

#[test]
fn default_free_slots_and_validation() {
    let s = Scheme::build(2, Family::S, 9).unwrap();
    let prob = OptimizationProblem::new(s.clone(), 4).unwrap();
    assert_eq!(prob.free_names(), ["b1"]);
    prob.validate().unwrap();
    let bad = prob.with_free_slot_names(&["a1", "b1"]).unwrap();
    assert!(bad.validate().is_err());
    assert_eq!(active_constraints(&s, 4, 3).unwrap(), 2);
}

#[test]
fn s9_two_minima() {
    let s = Scheme::build(2, Family::S, 9).unwrap();
    let prob = OptimizationProblem::new(s, 4)
        .unwrap()
        .with_starts(Starts::Sampled(40))
        .with_seed(1);
    let r = minimize_epsilon(&prob).unwrap();
    let best = r.best();
    assert!(
        (best.report.epsilon - 0.068161).abs() / 0.068161 < 1e-4,
        "{}",
        best.report.epsilon
    );
    assert!((best.free_values[0] + 0.35905925).abs() < 1e-4);
    let second = r
        .minima
        .iter()
        .find(|m| (m.free_values[0] - 0.60417498).abs() < 1e-4)
        .expect("second minimum");
    assert!((second.report.epsilon - 0.069172).abs() / 0.069172 < 1e-4);
    for m in &r.minima {
        assert!(verify_order(&r.scheme, &m.params, 4, VERIFY_TOL).unwrap().0);
    }
}

#[test]
fn deterministic_under_fixed_seed() {
    let s = Scheme::build(2, Family::SL, 11).unwrap();
    let prob = OptimizationProblem::new(s, 4)
        .unwrap()
        .with_starts(Starts::Sampled(12))
        .with_seed(5);
    let a = minimize_epsilon(&prob).unwrap();
    let b = minimize_epsilon(&prob).unwrap();
    let vals = |r: &OptimizationResult| {
        r.minima
            .iter()
            .map(|m| m.params.values().to_vec())
            .collect::<Vec<_>>()
    };
    assert_eq!(vals(&a), vals(&b));
}

#[test]
fn minimum_is_stationary() {
    let s = Scheme::build(2, Family::SL, 11).unwrap();
    let prob = OptimizationProblem::new(s.clone(), 4)
        .unwrap()
        .with_starts(Starts::Explicit(vec![vec![0.6]]));
    let r = minimize_epsilon(&prob).unwrap();
    let m = r.best();
    assert!((m.report.epsilon - 0.10509).abs() / 0.10509 < 1e-4);
    let chooser = Chooser::new(&s, &prob.free_slots).unwrap();
    let guess = chooser.dependent_part(
        &s.free_slots()
            .iter()
            .map(|&i| m.params.values()[i])
            .collect::<Vec<_>>(),
    );
    for h in [1e-6, -1e-6] {
        let pt = solve_dependent(&s, 4, &chooser, &[m.free_values[0] + h], &guess).unwrap();
        let (e, _) = epsilon_value(&s, &s.resolve(&pt.template_free).unwrap(), 4).unwrap();
        // Minima sit on kinks of the 1-norm, so ε rises linearly on both sides.
        assert!(e >= m.report.epsilon * (1.0 - 1e-8));
        assert!((e - m.report.epsilon).abs() / m.report.epsilon < 1e-4);
    }
}

#[test]
fn halton_points_fill_the_box() {
    let pts: Vec<Vec<f64>> = (0..64).map(|i| halton(i, 2, -1.5, 1.5)).collect();
    assert!(pts.iter().flatten().all(|x| (-1.5..=1.5).contains(x)));
    let quadrant = |sx: bool, sy: bool| {
        pts.iter()
            .filter(|p| (p[0] > 0.0) == sx && (p[1] > 0.0) == sy)
            .count()
    };
    for (a, b) in [(true, true), (true, false), (false, true), (false, false)] {
        assert!((12..=20).contains(&quadrant(a, b)));
    }
}
