//! One PASS/FAIL line per acceptance criterion.
//!
//! Known discrepancies are listed in `KNOWN`; the test fails only when a
//! check outside that list fails.
//!
//! Runs without the test harness so the lines are always printed:
//! `cargo test -p lts-core --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use lts_core::constraints::{
    analyze_freedom, family_constraint_count, hall_accounting, symbolic_log,
};
use lts_core::hall::{
    expand_hall, format_ordering, lie_coordinates, lie_coordinates_checked, witt_dimension,
};
use lts_core::lattice::{
    partition, reduce_to_nearest_neighbor, validate_partition, InteractionGraph,
    Strategy as Pattern,
};
use lts_core::optimizer::{minimize_epsilon, OptimizationProblem};
use lts_core::schemes::{catalog, epsilon_with_tolerance, log_scheme, lookup, Provenance};
use lts_core::validate::{
    build_generators, default_grid, scaling_fit, GeneratorClass, SchemeInstance,
};
use lts_core::{
    Alphabet, DenseSeries, Family, HallBasis, HallTree, NCSeries, ParamAssignment, Rational,
    Scheme, Word,
};

/// Checks that are expected to fail, as `(criterion, item)`.
const KNOWN: &[(usize, &str)] = &[
    (4, "n2-p6-sl-m51-suzuki value"),
    (4, "n2-p6-sl-m51-suzuki ordering"),
    (4, "n3-p4-se-m21-opt ordering"),
    (6, "n2 S m=11 p=4"),
    (6, "n3 SE m=21 p=4"),
];

#[derive(Default)]
struct Outcome {
    failed: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, item: impl Into<String>) {
        if !ok {
            self.failed.push(item.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn unit_basis(n: usize, d: u32) -> Arc<HallBasis> {
    HallBasis::cached(&Arc::new(Alphabet::unit(n)), d, &(0..n).collect::<Vec<_>>()).unwrap()
}

fn rendered(b: &HallBasis, k: u32) -> Vec<String> {
    b.degree_range(k).map(|i| b.render(i)).collect()
}

fn run_props<S: proptest::strategy::Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> std::result::Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn hall_counts() -> Outcome {
    let mut o = Outcome::default();
    let two: Vec<u128> = (1..=12).map(|k| witt_dimension(2, k)).collect();
    o.check(
        two == [2, 1, 2, 3, 6, 9, 18, 30, 56, 99, 186, 335],
        format!("n=2 {two:?}"),
    );
    let three: Vec<u128> = (1..=12).map(|k| witt_dimension(3, k)).collect();
    o.check(
        three == [3, 3, 8, 18, 48, 116, 312, 810, 2184, 5880, 16104, 44220],
        format!("n=3 {three:?}"),
    );
    let b2 = unit_basis(2, 8);
    o.check(
        (1..=8).all(|k| b2.count(k) as u128 == witt_dimension(2, k)),
        "n=2 basis sizes",
    );

    let odd: Vec<u32> = (1..=13).step_by(2).collect();
    let l = Arc::new(Alphabet::graded("Z", &odd).unwrap());
    let bl = HallBasis::new(l, 13, &(0..odd.len()).collect::<Vec<_>>()).unwrap();
    let sl: Vec<usize> = odd.iter().map(|&k| bl.count(k)).collect();
    o.check(
        sl == [1, 1, 2, 4, 8, 18, 40],
        format!("leapfrog grading {sl:?}"),
    );
    let all: Vec<u32> = (1..=13).collect();
    let e = Arc::new(Alphabet::graded("Z", &all).unwrap());
    let be = HallBasis::new(e, 13, &(0..all.len()).collect::<Vec<_>>()).unwrap();
    let se: Vec<usize> = odd.iter().map(|&k| be.count(k)).collect();
    o.check(
        se == [1, 2, 6, 18, 56, 186, 630],
        format!("Euler grading {se:?}"),
    );
    o
}

fn basis_fidelity() -> Outcome {
    let mut o = Outcome::default();
    let b = unit_basis(2, 5);
    let expect2: [&[&str]; 5] = [
        &["A", "B"],
        &["[A,B]"],
        &["[A,[A,B]]", "[B,[A,B]]"],
        &["[A,[A,[A,B]]]", "[B,[A,[A,B]]]", "[B,[B,[A,B]]]"],
        &[
            "[A,[A,[A,[A,B]]]]",
            "[B,[A,[A,[A,B]]]]",
            "[B,[B,[A,[A,B]]]]",
            "[B,[B,[B,[A,B]]]]",
            "[[A,B],[A,[A,B]]]",
            "[[A,B],[B,[A,B]]]",
        ],
    ];
    for (k, want) in expect2.iter().enumerate() {
        o.check(
            rendered(&b, k as u32 + 1) == *want,
            format!("n=2 degree {}", k + 1),
        );
    }
    let b = unit_basis(3, 4);
    let expect3: [&[&str]; 4] = [
        &["A", "B", "C"],
        &["[A,B]", "[A,C]", "[B,C]"],
        &[
            "[A,[A,B]]",
            "[A,[A,C]]",
            "[B,[A,B]]",
            "[B,[A,C]]",
            "[B,[B,C]]",
            "[C,[A,B]]",
            "[C,[A,C]]",
            "[C,[B,C]]",
        ],
        &[
            "[A,[A,[A,B]]]",
            "[A,[A,[A,C]]]",
            "[B,[A,[A,B]]]",
            "[B,[A,[A,C]]]",
            "[B,[B,[A,B]]]",
            "[B,[B,[A,C]]]",
            "[B,[B,[B,C]]]",
            "[C,[A,[A,B]]]",
            "[C,[A,[A,C]]]",
            "[C,[B,[A,B]]]",
            "[C,[B,[A,C]]]",
            "[C,[B,[B,C]]]",
            "[C,[C,[A,B]]]",
            "[C,[C,[A,C]]]",
            "[C,[C,[B,C]]]",
            "[[A,B],[A,C]]",
            "[[A,B],[B,C]]",
            "[[A,C],[B,C]]",
        ],
    ];
    for (k, want) in expect3.iter().enumerate() {
        let got = rendered(&b, k as u32 + 1);
        o.check(got == *want, format!("n=3 degree {}: {got:?}", k + 1));
    }
    o
}

fn bch_fidelity() -> Outcome {
    let mut o = Outcome::default();
    let b = unit_basis(2, 4);
    let alpha = b.alphabet().clone();
    let a = NCSeries::from_generator(alpha.clone(), 0, q(1, 1), 4).unwrap();
    let bb = NCSeries::from_generator(alpha, 1, q(1, 1), 4).unwrap();
    let z = a
        .exp()
        .unwrap()
        .mul(&bb.exp().unwrap())
        .unwrap()
        .log()
        .unwrap();
    let lie = lie_coordinates_checked(&z, &b, 0.0).unwrap();
    let expect = [
        ("A", q(1, 1)),
        ("B", q(1, 1)),
        ("[A,B]", q(1, 2)),
        ("[A,[A,B]]", q(1, 12)),
        ("[B,[A,B]]", q(-1, 12)),
        ("[B,[A,[A,B]]]", q(-1, 24)),
    ];
    let got = lie.nonzero();
    o.check(
        got.len() == expect.len(),
        format!("{} nonzero coordinates", got.len()),
    );
    for (label, value) in expect {
        o.check(
            got.contains(&(label.to_string(), value.clone())),
            format!("{label} = {value}"),
        );
    }
    o
}

fn golden_epsilons() -> Outcome {
    let mut o = Outcome::default();
    let mut count = 0;
    for e in catalog() {
        let Some(claim) = e.claimed_epsilon else {
            continue;
        };
        count += 1;
        let s = e.scheme().unwrap();
        let r = epsilon_with_tolerance(&s, &e.params_f64().unwrap(), e.p, e.tolerance()).unwrap();
        let rel = (r.epsilon - claim).abs() / claim;
        if rel >= 1e-3 {
            o.check(false, format!("{} value", e.key));
            o.note(format!("{}: {:.6} vs {claim}", e.key, r.epsilon));
        }
        if let Some(claimed) = e.claimed_ordering_vecs() {
            if !claimed.iter().any(|c| r.tied_orderings.contains(c)) {
                let alpha = Alphabet::unit(e.n);
                o.check(false, format!("{} ordering", e.key));
                o.note(format!(
                    "{}: best {}",
                    e.key,
                    format_ordering(&alpha, &r.ordering_best)
                ));
            }
        }
    }
    o.check(count >= 35, format!("{count} printed values"));
    o.note(format!("{count} entries"));
    o
}

fn constraint_counts() -> Outcome {
    let mut o = Outcome::default();
    let table = |n: usize, fam: Family, ps: &[u32]| -> Vec<usize> {
        ps.iter()
            .map(|&p| hall_accounting(n, fam, p).unwrap())
            .collect()
    };
    o.check(
        table(2, Family::N, &[1, 2, 3, 4, 5, 6]) == [2, 3, 5, 8, 14, 23],
        "n=2 N",
    );
    o.check(
        table(2, Family::S, &[2, 4, 6, 8]) == [2, 4, 10, 28],
        "n=2 S",
    );
    o.check(
        table(2, Family::SL, &[2, 4, 6, 8]) == [1, 2, 4, 8],
        "n=2 SL",
    );
    o.check(
        table(3, Family::N, &[1, 2, 3, 4]) == [3, 6, 14, 32],
        "n=3 N",
    );
    o.check(table(3, Family::S, &[2, 4, 6]) == [3, 11, 59], "n=3 S");
    o.check(
        table(3, Family::SAbc, &[2, 4, 6]) == [3, 11, 59],
        "n=3 S-abc",
    );
    o.check(table(3, Family::SE, &[2, 4, 6]) == [1, 3, 9], "n=3 SE");
    o.check(table(3, Family::SL, &[2, 4, 6]) == [1, 2, 4], "n=3 SL");

    let measured = [
        (2, Family::N, 5),
        (2, Family::S, 7),
        (2, Family::SL, 7),
        (3, Family::N, 4),
        (3, Family::S, 5),
        (3, Family::SAbc, 5),
        (3, Family::SE, 5),
        (3, Family::SL, 5),
    ];
    for (n, fam, pmax) in measured {
        for p in 1..=pmax {
            let got = family_constraint_count(n, fam, p, 7).unwrap().total();
            o.check(
                got == hall_accounting(n, fam, p).unwrap(),
                format!("measured n={n} {fam} p={p}"),
            );
        }
    }

    let s9 = analyze_freedom(&symbolic_log(&Scheme::build(2, Family::S, 9).unwrap(), 4).unwrap())
        .unwrap();
    o.check(
        s9.free_count == Some(1)
            && s9
                .admissible_free_sets
                .iter()
                .any(|s| s == &["b1".to_string()]),
        "n=2 S m=9 p=4 free b1",
    );
    let sl15 =
        analyze_freedom(&symbolic_log(&Scheme::build(2, Family::SL, 15).unwrap(), 6).unwrap())
            .unwrap();
    o.check(
        sl15.zero_dimensional && sl15.real_solution_count == Some(3),
        "n=2 SL m=15 p=6 three real",
    );
    let sl17 =
        analyze_freedom(&symbolic_log(&Scheme::build(3, Family::SL, 17).unwrap(), 4).unwrap())
            .unwrap();
    o.check(
        sl17.solution_count == Some(2) && sl17.real_solution_count == Some(0),
        "n=3 SL m=17 p=4 two complex",
    );
    o
}

fn optimizer_recovery() -> Outcome {
    let mut o = Outcome::default();
    let targets = [
        ("n2 S m=9 p=4", "n2-p4-s-m9-opt"),
        ("n2 SL m=11 p=4", "n2-p4-sl-m11-opt"),
        ("n2 S m=11 p=4", "n2-p4-s-m11-opt"),
        ("n2 SL m=19 p=6", "n2-p6-sl-m19-opt"),
        ("n3 S m=9 p=2", "n3-p2-s-m9-opt"),
        ("n3 SE m=21 p=4", "n3-p4-se-m21-opt"),
        ("n3 SL m=37 p=6", "n3-p6-sl-m37-opt"),
    ];
    for (label, key) in targets {
        let t0 = Instant::now();
        let entry = lookup(key).unwrap();
        let scheme = entry.scheme().unwrap();
        let printed = entry.params_f64().unwrap();
        let claim = entry.claimed_epsilon.unwrap();
        let prob = OptimizationProblem::new(scheme.clone(), entry.p).unwrap();
        let r = minimize_epsilon(&prob).unwrap();
        let best = r.best();
        let dist = prob
            .free_slots
            .iter()
            .zip(&best.free_values)
            .map(|(&i, v)| (v - printed.values()[i]).abs())
            .fold(0.0, f64::max);
        let rel = (best.report.epsilon - claim).abs() / claim;
        let secs = t0.elapsed().as_secs_f64();
        o.check(dist < 1e-4 && rel < 1e-4 && secs < 600.0, label);
        o.note(format!(
            "{label}: ε {:.7} (printed {claim}), distance {dist:.1e}, {secs:.1}s",
            best.report.epsilon
        ));
    }
    o
}

fn order_scaling() -> Outcome {
    let mut o = Outcome::default();
    for key in [
        "n2-p2-sl-m3-leapfrog",
        "n2-p4-s-m11-opt",
        "n2-p6-sl-m19-opt",
        "n3-p4-se-m21-opt",
    ] {
        let t0 = Instant::now();
        let inst = SchemeInstance::from_catalog(key).unwrap();
        let p = lookup(key).unwrap().p;
        let g = build_generators(GeneratorClass::RandomGeneral, inst.scheme.n(), 16, 1).unwrap();
        let (lo, hi, pts) = default_grid(p);
        match scaling_fit(&inst.scheme, &inst.slot_values, &g, lo, hi, pts) {
            Ok(r) => {
                let secs = t0.elapsed().as_secs_f64();
                o.check(
                    (r.fitted_slope - (p + 1) as f64).abs() <= 0.15 && secs < 60.0,
                    key,
                );
                o.note(format!("{key}: slope {:.4}", r.fitted_slope));
            }
            Err(e) => o.check(false, format!("{key}: {e}")),
        }
    }
    o
}

fn lattice_partitions() -> Outcome {
    let mut o = Outcome::default();
    let cases = [
        (
            "chain",
            InteractionGraph::chain(10, 1, false, true),
            Pattern::BondParity,
            2,
        ),
        (
            "even ring",
            InteractionGraph::chain(10, 1, true, true),
            Pattern::BondParity,
            2,
        ),
        (
            "triangular",
            InteractionGraph::triangular(6, 5, false, true),
            Pattern::TriangularPlaquettes,
            3,
        ),
        (
            "kagome",
            InteractionGraph::kagome(3, 3, false, true),
            Pattern::KagomeTriangles,
            2,
        ),
        (
            "square",
            InteractionGraph::square(6, 4, false, true),
            Pattern::SquareFour,
            2,
        ),
        (
            "square",
            InteractionGraph::square(6, 4, false, true),
            Pattern::SquareThree,
            3,
        ),
        (
            "hexagonal",
            InteractionGraph::hexagonal(6, 4, false, true),
            Pattern::HexagonalEdges,
            3,
        ),
    ];
    for (name, g, strategy, n) in cases {
        match partition(&g, strategy) {
            Ok(p) => {
                let (ok, violations) = validate_partition(&g, &p);
                o.check(
                    ok && p.n() == n,
                    format!("{name} {strategy}: n={} {violations:?}", p.n()),
                );
            }
            Err(e) => o.check(false, format!("{name} {strategy}: {e}")),
        }
    }
    let (reduced, maps) =
        reduce_to_nearest_neighbor(&InteractionGraph::chain(12, 2, false, true)).unwrap();
    o.check(
        maps.len() == 1 && reduced.is_nearest_neighbor(),
        format!("range-2 chain: {} steps", maps.len()),
    );
    o
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

fn property_suites() -> Outcome {
    let mut o = Outcome::default();

    let alpha = Arc::new(Alphabet::unit(3));
    let series = prop::collection::vec(
        (prop::collection::vec(0usize..3, 1..=5), -5i64..=5, 1i64..=4),
        0..6,
    );
    let a = alpha.clone();
    let r = run_props(64, series, move |terms| {
        let x = NCSeries::from_terms(
            a.clone(),
            5,
            terms
                .into_iter()
                .map(|(l, n, d)| (Word::from_letters(&l).unwrap(), q(n, d))),
        );
        prop_assert_eq!(x.exp().unwrap().log().unwrap(), x);
        Ok(())
    });
    o.check(r.is_ok(), format!("exp/log roundtrip {r:?}"));

    let b = unit_basis(3, 5);
    let al = b.alphabet().clone();
    let trees: Vec<HallTree> = (0..b.len())
        .filter(|&i| b.node(i).degree <= 2)
        .map(|i| b.tree(i))
        .collect();
    let mut jacobi_ok = true;
    for v in &trees {
        for w in &trees {
            for x in &trees {
                if v.degree(&al) + w.degree(&al) + x.degree(&al) > 5 {
                    continue;
                }
                let cyc = [
                    HallTree::bracket(v.clone(), HallTree::bracket(w.clone(), x.clone())),
                    HallTree::bracket(w.clone(), HallTree::bracket(x.clone(), v.clone())),
                    HallTree::bracket(x.clone(), HallTree::bracket(v.clone(), w.clone())),
                ];
                let mut s = NCSeries::zero(al.clone(), 5);
                for t in &cyc {
                    s = s.add(&expand_hall(t, &al, 5).unwrap()).unwrap();
                }
                let (lie, res) = lie_coordinates(&s, &b).unwrap();
                jacobi_ok &= res == 0.0 && lie.coords().iter().all(Zero::is_zero);
            }
        }
    }
    o.check(jacobi_ok, "Jacobi nullity");

    let r = run_props(
        100,
        (0usize..4, prop::collection::vec(small_rational(), 6)),
        |(which, free)| {
            let (n, fam, m) = [
                (2, Family::S, 7),
                (2, Family::SL, 11),
                (3, Family::S, 9),
                (3, Family::SE, 13),
            ][which];
            let s = Scheme::build(n, fam, m).unwrap();
            let p =
                ParamAssignment::from_free(&s, &free[..s.num_free()], Provenance::Manual).unwrap();
            let d = if n == 2 { 6 } else { 4 };
            let z = log_scheme(&s, &p, d, &(0..n).collect::<Vec<_>>()).unwrap();
            for k in (2..=d).step_by(2) {
                prop_assert!(
                    z.degree_coords(k).iter().all(Zero::is_zero),
                    "{} degree {}",
                    s.name(),
                    k
                );
            }
            Ok(())
        },
    );
    o.check(r.is_ok(), format!("even degrees vanish {r:?}"));

    let r = run_props(32, (2usize..=3, small_rational()), |(n, tau)| {
        let d = if n == 2 { 6 } else { 5 };
        let fwd: Vec<(usize, Rational)> = (0..n).map(|g| (g, tau.clone())).collect();
        let bwd: Vec<(usize, Rational)> = fwd.iter().rev().cloned().collect();
        let plus = DenseSeries::exp_product(n, d, &fwd).log().unwrap();
        let minus = DenseSeries::exp_product(n, d, &bwd).log().unwrap();
        let basis = unit_basis(n, d);
        for k in 1..=d {
            let a = basis.dense_coordinates_at(&plus, k);
            let b = basis.dense_coordinates_at(&minus, k);
            for (x, y) in a.iter().zip(&b) {
                if k % 2 == 1 {
                    prop_assert_eq!(x, y);
                } else {
                    prop_assert_eq!(x, &-y.clone());
                }
            }
        }
        Ok(())
    });
    o.check(r.is_ok(), format!("Euler sign parity {r:?}"));

    let symmetric = [
        (2, Family::S, 9),
        (2, Family::SL, 15),
        (3, Family::S, 13),
        (3, Family::SAbc, 11),
        (3, Family::SE, 21),
        (3, Family::SL, 17),
    ];
    let r = run_props(
        48,
        (
            0usize..symmetric.len(),
            prop::collection::vec(small_rational(), 8),
        ),
        |(which, free)| {
            let (n, fam, m) = symmetric[which];
            let s = Scheme::build(n, fam, m).unwrap();
            let slots = s.resolve(&free[..s.num_free()]).unwrap();
            let f = s.factor_values(&slots);
            let rev: Vec<(usize, Rational)> = f.iter().rev().cloned().collect();
            prop_assert_eq!(&f, &rev);
            let back: Vec<(usize, Rational)> = f.iter().map(|(g, c)| (*g, -c.clone())).collect();
            let d = if n == 2 { 6 } else { 4 };
            let u = DenseSeries::exp_product(n, d, &f)
                .mul(&DenseSeries::exp_product(n, d, &back))
                .unwrap();
            prop_assert_eq!(u, DenseSeries::one(n, d));
            Ok(())
        },
    );
    o.check(r.is_ok(), format!("palindromes {r:?}"));

    let templates = [
        (2, Family::N, 6),
        (2, Family::S, 11),
        (2, Family::SL, 19),
        (3, Family::N, 9),
        (3, Family::S, 13),
        (3, Family::SAbc, 11),
        (3, Family::SE, 21),
        (3, Family::SL, 37),
    ];
    for (n, fam, m) in templates {
        let s = Scheme::build(n, fam, m).unwrap();
        let f = s.factors();
        let merged = f.windows(2).all(|w| w[0].generator != w[1].generator);
        o.check(f.len() == m && merged, format!("factor count {}", s.name()));
    }
    for e in catalog() {
        let s = e.scheme().unwrap();
        o.check(s.factors().len() == e.m, format!("factor count {}", e.key));
    }
    o
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Hall counts", hall_counts),
        ("basis fidelity", basis_fidelity),
        ("BCH fidelity", bch_fidelity),
        ("golden epsilon suite", golden_epsilons),
        ("constraint counting", constraint_counts),
        ("optimizer recovery", optimizer_recovery),
        ("order scaling", order_scaling),
        ("lattice partitions", lattice_partitions),
        ("property suites", property_suites),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let k = i + 1;
        let t0 = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome {
                failed: vec![format!("panic: {msg}")],
                notes: vec![],
            }
        });
        let secs = t0.elapsed().as_secs_f64();
        let status = if outcome.failed.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        let mut line = format!("criterion {k} ({name}): {status} [{secs:.1}s]");
        if !outcome.failed.is_empty() {
            line.push_str(&format!(" failed: {}", outcome.failed.join("; ")));
        }
        println!("{line}");
        for n in &outcome.notes {
            println!("    {n}");
        }
        for f in outcome.failed {
            if !KNOWN.contains(&(k, f.as_str())) {
                unexpected.push(format!("criterion {k}: {f}"));
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:#?}");
        std::process::exit(1);
    }
}
