use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::scalar::parse_rational;
use crate::schemes::{lookup, Family, Scheme};

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn x(i: usize) -> MultiPoly {
    MultiPoly::var(i)
}

fn c(s: &str) -> MultiPoly {
    MultiPoly::constant(q(s))
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[test]
fn single_variable_basis_is_itself() {
    let g = buchberger(&[x(0)], MonomialOrder::Lex).unwrap();
    assert_eq!(g.polys, vec![x(0)]);
}

#[test]
fn linear_system_reduces_to_solution() {
    let g = buchberger(&[x(0) + x(1) - c("1"), x(0) - x(1)], MonomialOrder::Lex).unwrap();
    assert_eq!(g.polys.len(), 2);
    assert!(g.polys.contains(&(x(0) - c("1/2"))));
    assert!(g.polys.contains(&(x(1) - c("1/2"))));
}

#[test]
fn sqrt_two_system_is_zero_dimensional() {
    let f = vec![x(0) * x(0) - c("2"), x(1) - x(0)];
    let g = buchberger(&f, MonomialOrder::GrevLex).unwrap();
    assert!(g.is_zero_dimensional());
    assert_eq!(g.solution_count(), Some(2));
    assert_eq!(g.dimension(), Some(0));
}

#[test]
fn inconsistent_system_is_trivial() {
    let g = buchberger(&[x(0) - c("1"), x(0) - c("2")], MonomialOrder::GrevLex).unwrap();
    assert!(g.is_trivial());
    assert_eq!(g.dimension(), None);
}

#[test]
fn ideal_membership() {
    let f = vec![x(0) * x(1) - c("1"), x(1) * x(1) - x(0)];
    for order in [MonomialOrder::Lex, MonomialOrder::GrevLex] {
        let g = buchberger(&f, order).unwrap();
        for p in &f {
            assert!(g.contains(p));
        }
        let combo = f[0].clone() * (x(0) + c("3")) + f[1].clone() * x(1) * x(1);
        assert!(g.contains(&combo));
        assert!(!g.contains(&(x(0) - c("2"))));
    }
}

#[test]
fn twisted_cubic_has_dimension_one() {
    // (t, t^2, t^3)
    let f = vec![x(1) - x(0) * x(0), x(2) - x(0) * x(1)];
    let mut g = buchberger(&f, MonomialOrder::GrevLex).unwrap();
    g.nvars = 3;
    assert_eq!(g.dimension(), Some(1));
    assert!(g.contains(&(x(1) * x(1) - x(0) * x(2))));
}

#[test]
fn render_uses_names() {
    let p = c("3/2") * x(0) * x(0) * x(1) - x(2) + c("1");
    assert_eq!(
        p.render(&names(&["a", "b", "c"]), MonomialOrder::GrevLex),
        "3/2*a^2*b - c + 1"
    );
}

#[test]
fn sturm_counts() {
    // (x-1)(x-2)(x+3)
    let p = UPoly::new(vec![q("6"), q("-7"), q("0"), q("1")]);
    assert_eq!(p.count_real_roots(), 3);
    let roots = p.real_roots(40);
    let want = [-3.0, 1.0, 2.0];
    for (r, w) in roots.iter().zip(want) {
        assert!((r.to_f64().unwrap() - w).abs() < 1e-9);
    }
    // x^2 + 1
    assert_eq!(
        UPoly::new(vec![q("1"), q("0"), q("1")]).count_real_roots(),
        0
    );
    // (x-1)^2 (x+1)
    let p = UPoly::new(vec![q("1"), q("-1"), q("-1"), q("1")]);
    assert_eq!(p.count_real_roots(), 2);
    assert_eq!(p.real_roots(30).len(), 2);
}

#[test]
fn fp_arithmetic_and_rank() {
    let a = Fp::new(123_456_789_012_345);
    assert_eq!(a * a.inv(), Fp::one());
    assert_eq!(Fp::from_rational(&q("1/3")) * Fp::new(3), Fp::one());
    assert_eq!(
        Fp::new(modp::MODULUS - 1) * Fp::new(modp::MODULUS - 1),
        Fp::one()
    );
    let r = |v: &[u64]| v.iter().map(|&x| Fp::new(x)).collect::<Vec<_>>();
    assert_eq!(
        modp::rank(vec![r(&[1, 2, 3]), r(&[2, 4, 6]), r(&[0, 1, 1])]),
        2
    );
    assert_eq!(modp::rank(vec![r(&[1, 0]), r(&[0, 1]), r(&[1, 1])]), 2);
}

#[test]
fn first_order_conditions() {
    let s = Scheme::build(2, Family::N, 3).unwrap();
    let cs = symbolic_log(&s, 1).unwrap();
    assert_eq!(cs.len(), 2);
    for p in cs.polys() {
        assert_eq!(p.constant_term(), -Rational::one());
        assert!(p
            .terms()
            .filter(|(m, _)| !m.is_empty())
            .all(|(_, c)| c.is_one()));
    }
    let sl = Scheme::build(2, Family::SL, 5).unwrap();
    let cs = symbolic_log(&sl, 1).unwrap();
    assert_eq!(cs.len(), 1, "{}", cs.to_text());
}

#[test]
fn catalog_values_satisfy_constraints() {
    for key in [
        "n2-p4-s-m9-opt",
        "n2-p4-sl-m11-opt",
        "n3-p4-se-m17-opt",
        "n3-p2-s-m9-opt",
    ] {
        let entry = lookup(key).unwrap();
        let (scheme, params) = (entry.scheme().unwrap(), entry.params_f64().unwrap());
        let cs = symbolic_log(&scheme, entry.p).unwrap();
        let v: Vec<f64> = params.values().to_vec();
        for r in cs.evaluate(&v) {
            assert!(r.abs() < 1e-8, "{key}: residual {r}");
        }
    }
}

#[test]
fn s9_has_one_free_parameter() {
    let s = Scheme::build(2, Family::S, 9).unwrap();
    let cs = symbolic_log(&s, 4).unwrap();
    let r = analyze_freedom(&cs).unwrap();
    assert_eq!(r.free_count, Some(1), "{}", cs.to_text());
    assert!(r.admissible_free_sets.iter().any(|s| s == &names(&["b1"])));
    assert!(!r.zero_dimensional);
}

#[test]
fn sl15_sixth_order_has_three_real_solutions() {
    let s = Scheme::build(2, Family::SL, 15).unwrap();
    let cs = symbolic_log(&s, 6).unwrap();
    let r = analyze_freedom(&cs).unwrap();
    assert!(r.zero_dimensional);
    assert_eq!(r.real_solution_count, Some(3));
    for sol in &r.real_solutions {
        for res in cs.evaluate(sol) {
            assert!(res.abs() < 1e-9);
        }
    }
}

#[test]
fn sl17_three_generators_has_no_real_solution() {
    let s = Scheme::build(3, Family::SL, 17).unwrap();
    let cs = symbolic_log(&s, 4).unwrap();
    let r = analyze_freedom(&cs).unwrap();
    assert!(r.zero_dimensional);
    assert_eq!(r.solution_count, Some(2));
    assert_eq!(r.real_solution_count, Some(0));
}

#[test]
fn accounting_two_generators() {
    let n: Vec<usize> = (1..=6)
        .map(|p| hall_accounting(2, Family::N, p).unwrap())
        .collect();
    assert_eq!(n, [2, 3, 5, 8, 14, 23]);
    let s: Vec<usize> = [2, 4, 6, 8]
        .iter()
        .map(|&p| hall_accounting(2, Family::S, p).unwrap())
        .collect();
    assert_eq!(s, [2, 4, 10, 28]);
    let sl: Vec<usize> = [2, 4, 6, 8]
        .iter()
        .map(|&p| hall_accounting(2, Family::SL, p).unwrap())
        .collect();
    assert_eq!(sl, [1, 2, 4, 8]);
}

#[test]
fn accounting_three_generators() {
    let n: Vec<usize> = (1..=4)
        .map(|p| hall_accounting(3, Family::N, p).unwrap())
        .collect();
    assert_eq!(n, [3, 6, 14, 32]);
    for fam in [Family::S, Family::SAbc] {
        let v: Vec<usize> = [2, 4, 6]
            .iter()
            .map(|&p| hall_accounting(3, fam, p).unwrap())
            .collect();
        assert_eq!(v, [3, 11, 59]);
    }
    let se: Vec<usize> = [2, 4, 6]
        .iter()
        .map(|&p| hall_accounting(3, Family::SE, p).unwrap())
        .collect();
    assert_eq!(se, [1, 3, 9]);
    let sl: Vec<usize> = [2, 4, 6]
        .iter()
        .map(|&p| hall_accounting(3, Family::SL, p).unwrap())
        .collect();
    assert_eq!(sl, [1, 2, 4]);
}

#[test]
fn minimal_factor_counts() {
    assert_eq!(min_factors(3, Family::SAbc, 4).unwrap(), 23);
    assert_eq!(min_factors(3, Family::SL, 6).unwrap(), 29);
    assert_eq!(min_factors(3, Family::SE, 2).unwrap(), 5);
}

#[test]
fn measured_counts_match_accounting() {
    let cases = [
        (2, Family::N, 1..=5),
        (2, Family::S, 1..=7),
        (2, Family::SL, 1..=7),
        (3, Family::N, 1..=4),
        (3, Family::S, 1..=5),
        (3, Family::SAbc, 1..=5),
        (3, Family::SE, 1..=5),
        (3, Family::SL, 1..=5),
    ];
    for (n, fam, ps) in cases {
        for p in ps {
            let got = family_constraint_count(n, fam, p, 7).unwrap();
            assert_eq!(
                got.total(),
                hall_accounting(n, fam, p).unwrap(),
                "n={n} {fam} p={p}: {got:?}"
            );
        }
    }
}

#[test]
fn size_guard_trips() {
    let s = Scheme::build(3, Family::N, 61).unwrap();
    assert!(matches!(symbolic_log(&s, 8), Err(Error::SizeGuard(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn groebner_basis_generates_the_inputs(
        coeffs in prop::collection::vec(-3i64..=3, 6),
    ) {
        let k = |i: usize| MultiPoly::constant(Rational::from_integer(coeffs[i].into()));
        let f = vec![
            k(0) * x(0) * x(1) + k(1) * x(1) + c("1"),
            k(2) * x(0) * x(0) + k(3) * x(1) * x(1) - k(4) * x(0) + k(5),
        ];
        let g = buchberger(&f, MonomialOrder::GrevLex).unwrap();
        for p in &f {
            prop_assert!(g.contains(p));
        }
        for p in &g.polys {
            prop_assert!(p.leading(MonomialOrder::GrevLex).unwrap().1.is_one());
        }
        prop_assert!(!g.contains(&MultiPoly::one()) || g.is_trivial());
        prop_assert!(g.reduce(&MultiPoly::zero()).is_zero());
    }
}
