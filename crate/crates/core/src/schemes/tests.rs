use super::*;
use crate::free_algebra::DenseSeries;
use crate::hall::HallBasis;
use crate::scalar::{parse_rational, Rational, Scalar};
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn rendered_factors(s: &Scheme) -> Vec<(usize, String)> {
    let names = s.slot_names();
    s.factors()
        .iter()
        .map(|f| (f.generator, f.coeff.render(&names)))
        .collect()
}

#[test]
fn leapfrog_template() {
    let s = Scheme::build(2, Family::SL, 3).unwrap();
    assert_eq!(s.nu(), 1);
    assert_eq!(s.num_free(), 0);
    let f = rendered_factors(&s);
    assert_eq!(f.len(), 3);
    assert_eq!(f.iter().map(|x| x.0).collect::<Vec<_>>(), [0, 1, 0]);
    let v = s.resolve::<Rational>(&[]).unwrap();
    assert_eq!(v, [Rational::one()]);
    let fv = s.factor_values(&v);
    assert_eq!(fv, [(0, q(1, 2)), (1, q(1, 1)), (0, q(1, 2))]);
}

#[test]
fn parameter_counts() {
    let cases = [
        (2, Family::N, 4, 4),
        (2, Family::S, 5, 3),
        (2, Family::S, 11, 6),
        (2, Family::SL, 11, 3),
        (2, Family::SL, 19, 5),
        (3, Family::S, 9, 5),
        (3, Family::SE, 13, 3),
        (3, Family::SL, 17, 2),
    ];
    for (n, fam, m, nu) in cases {
        let s = Scheme::build(n, fam, m).unwrap();
        assert_eq!(s.nu(), nu, "{}", s.name());
        assert_eq!(s.factors().len(), m, "{}", s.name());
    }
}

#[test]
fn invalid_templates_rejected() {
    assert!(Scheme::build(2, Family::S, 4).is_err());
    assert!(Scheme::build(2, Family::SE, 7).is_err());
    assert!(Scheme::build(3, Family::SAbc, 7).is_err());
    assert!(Scheme::build(3, Family::SL, 7).is_err());
}

#[test]
fn symmetric_factor_lists_are_palindromes() {
    for (n, fam, m) in [
        (2, Family::S, 9),
        (2, Family::SL, 15),
        (3, Family::S, 13),
        (3, Family::SE, 21),
        (3, Family::SAbc, 11),
    ] {
        let s = Scheme::build(n, fam, m).unwrap();
        let f = rendered_factors(&s);
        let rev: Vec<_> = f.iter().rev().cloned().collect();
        assert_eq!(f, rev, "{}", s.name());
    }
}

#[test]
fn closures_make_coefficients_sum_to_one() {
    for (n, fam, m) in [
        (2, Family::N, 6),
        (2, Family::S, 13),
        (2, Family::SL, 13),
        (3, Family::N, 9),
        (3, Family::SE, 13),
    ] {
        let s = Scheme::build(n, fam, m).unwrap();
        let free: Vec<Rational> = (0..s.num_free()).map(|i| q(i as i64 + 2, 7)).collect();
        let v = s.resolve(&free).unwrap();
        let mut sums = vec![Rational::zero(); n];
        for (g, c) in s.factor_values(&v) {
            sums[g] += c;
        }
        assert!(sums.iter().all(|x| x.is_one()), "{}", s.name());
    }
}

#[test]
fn euler_pair_chart_closure() {
    let s = Scheme::build_with_chart(3, Family::SE, 13, Chart::EulerPair).unwrap();
    assert_eq!(s.slot_names(), ["u", "q1", "r1"]);
    assert_eq!(s.closure_text(), ["r1 = 1/2 - u"]);
    let s = Scheme::build(3, Family::SE, 13).unwrap();
    assert_eq!(s.closure_text(), ["u2 = 1/2 - u1 - v1"]);
}

#[test]
fn leapfrog_epsilon_exact() {
    let s = Scheme::build(2, Family::SL, 3).unwrap();
    let p = ParamAssignment::<Rational>::from_free(&s, &[], Provenance::Manual).unwrap();
    let r = epsilon(&s, &p, 2).unwrap();
    assert_eq!(r.epsilon_exact, Some(q(9, 32)));
    assert_eq!(r.tied_orderings.len(), 2);

    let s = Scheme::build(3, Family::SL, 5).unwrap();
    let p = ParamAssignment::<Rational>::from_free(&s, &[], Provenance::Manual).unwrap();
    let r = epsilon(&s, &p, 2).unwrap();
    assert_eq!(r.epsilon_exact, Some(q(325, 96)));
}

#[test]
fn leapfrog_is_exactly_second_order() {
    let s = Scheme::build(2, Family::SL, 3).unwrap();
    let p = ParamAssignment::<Rational>::from_free(&s, &[], Provenance::Manual).unwrap();
    assert!(verify_order(&s, &p, 2, 0.0).unwrap().0);
    let (ok, res) = verify_order(&s, &p, 3, 0.0).unwrap();
    assert!(!ok);
    assert!(res[2] > 0.0);
}

#[test]
fn first_degree_coordinates_are_generators() {
    let s = Scheme::build(3, Family::SL, 5).unwrap();
    let p = ParamAssignment::<Rational>::from_free(&s, &[], Provenance::Manual).unwrap();
    let z = log_scheme(&s, &p, 3, &[0, 1, 2]).unwrap();
    assert_eq!(z.degree_coords(1), [q(1, 1), q(1, 1), q(1, 1)]);
    assert!(z.degree_coords(2).iter().all(Zero::is_zero));
}

#[test]
fn order_failure_reported() {
    let s = Scheme::build(2, Family::N, 2).unwrap();
    let p = ParamAssignment::<Rational>::from_free(&s, &[], Provenance::Manual).unwrap();
    assert!(matches!(
        epsilon(&s, &p, 2),
        Err(crate::Error::OrderNotVerified(_))
    ));
    assert!(epsilon(&s, &p, 1).is_ok());
}

#[test]
fn recursion_constants() {
    let y = yoshida_constant_f64(1);
    assert!((y - 1.351207191959657).abs() < 1e-14);
    let z = recursive::suzuki_constant(1).to_f64().unwrap();
    assert!((z - 0.4144907717943757).abs() < 1e-14);
}

fn yoshida_constant_f64(j: u32) -> f64 {
    recursive::yoshida_constant(j).to_f64().unwrap()
}

#[test]
fn first_recursion_level_is_leapfrog() {
    let (s, p) = yoshida_recursive(2, 1).unwrap();
    assert_eq!(s.m(), 3);
    assert_eq!(p.values(), [Rational::one()]);
    let (s, _) = yoshida_recursive(3, 2).unwrap();
    assert_eq!(s.m(), 13);
    let (s, _) = suzuki_recursive(2, 2).unwrap();
    assert_eq!(s.m(), 11);
    assert!(yoshida_recursive(2, 9).is_err());
}

#[test]
fn recursion_raises_order() {
    let (s, p) = yoshida_recursive(2, 2).unwrap();
    let (ok, res) = verify_order(&s, &p.to_f64(), 4, 1e-12).unwrap();
    assert!(ok, "{res:?}");
}

#[test]
fn document_roundtrip() {
    let e = lookup("n2-p4-s-m11-opt").unwrap();
    let s = e.scheme().unwrap();
    let p = e.params().unwrap();
    let doc = SchemeDocument::new(&s, &p, 40);
    let text = doc.to_toml();
    let back = SchemeDocument::from_toml(&text).unwrap();
    assert_eq!(back, doc);
    let s2 = back.scheme().unwrap();
    assert_eq!(s2, s);
    assert_eq!(back.params(&s2).unwrap().values(), p.values());
}

#[test]
fn document_accepts_fractions_and_skips_dependents() {
    let text = "n = 2\nfamily = \"S\"\nm = 5\n\n[params]\na1 = \"1/4\"\nb1 = \"1/2\"\na2 = \"7\"\n";
    let doc = SchemeDocument::from_toml(text).unwrap();
    let s = doc.scheme().unwrap();
    let p = doc.params(&s).unwrap();
    assert_eq!(p.value(&s, "a2"), Some(&q(1, 2)));
    let missing = "n = 2\nfamily = \"S\"\nm = 7\n[params]\na1 = \"0.25\"\n";
    let doc = SchemeDocument::from_toml(missing).unwrap();
    assert!(doc.params(&doc.scheme().unwrap()).is_err());
}

#[test]
fn catalog_keys_are_unique_and_resolvable() {
    let mut keys: Vec<&str> = catalog().iter().map(|e| e.key).collect();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), catalog().len());
    assert!(lookup("nope").is_err());
    for e in catalog() {
        let s = e.scheme().unwrap();
        assert!(
            e.key
                .starts_with(&format!("n{}-p{}-{}-m{}-", e.n, e.p, e.family.tag(), e.m)),
            "{}",
            e.key
        );
        e.params().unwrap().check_len(&s).unwrap();
    }
}

#[test]
fn short_literals_select_loose_tolerance() {
    assert_eq!(
        lookup("n2-p6-sl-m19-opt").unwrap().tolerance(),
        catalog::SHORT_TOLERANCE
    );
    assert_eq!(
        lookup("n2-p4-s-m11-opt").unwrap().tolerance(),
        catalog::FULL_TOLERANCE
    );
    assert_eq!(parse_rational("0.5").unwrap(), q(1, 2));
}

fn euler_log(order: &[usize], d: u32) -> DenseSeries<Rational> {
    let tau = q(1, 1);
    let factors: Vec<(usize, Rational)> = order.iter().map(|&g| (g, tau.clone())).collect();
    DenseSeries::exp_product(3, d, &factors).log().unwrap()
}

#[test]
fn euler_pair_parity() {
    let d = 5;
    let plus = euler_log(&[0, 1, 2], d);
    let minus = euler_log(&[2, 1, 0], d);
    let basis = HallBasis::cached(&eval::unit_alphabet(3), d, &[0, 1, 2]).unwrap();
    for k in 1..=d {
        let a = basis.dense_coordinates_at(&plus, k);
        let b = basis.dense_coordinates_at(&minus, k);
        for (x, y) in a.iter().zip(&b) {
            if k % 2 == 1 {
                assert_eq!(x, y, "degree {k}");
            } else {
                assert_eq!(x, &-y.clone(), "degree {k}");
            }
        }
        if k == 2 {
            assert!(a.iter().any(|x| !x.is_zero()));
        }
    }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn symmetric_schemes_have_no_even_degrees(
        which in 0usize..4,
        free in proptest::collection::vec(small_rational(), 6),
    ) {
        let (n, fam, m) = [(2, Family::S, 7), (2, Family::SL, 11), (3, Family::S, 9), (3, Family::SE, 13)][which];
        let s = Scheme::build(n, fam, m).unwrap();
        let p = ParamAssignment::from_free(&s, &free[..s.num_free()], Provenance::Manual).unwrap();
        let d = if n == 2 { 6 } else { 4 };
        let z = log_scheme(&s, &p, d, &(0..n).collect::<Vec<_>>()).unwrap();
        for k in (2..=d).step_by(2) {
            prop_assert!(z.degree_coords(k).iter().all(Zero::is_zero), "{} degree {}", s.name(), k);
        }
    }

    #[test]
    fn float_and_exact_epsilon_agree(a1 in small_rational(), b1 in small_rational()) {
        let s = Scheme::build(2, Family::S, 7).unwrap();
        let exact = ParamAssignment::from_free(&s, &[a1, b1], Provenance::Manual).unwrap();
        let re = epsilon_with_tolerance(&s, &exact, 1, 0.0).unwrap();
        let rf = epsilon(&s, &exact.to_f64(), 1).unwrap();
        let e = re.epsilon_exact.unwrap().to_f64().unwrap();
        prop_assert!((rf.epsilon - e).abs() <= 1e-9 * e.abs().max(1.0));
        prop_assert_eq!(rf.epsilon.as_f64(), Some(rf.epsilon));
    }
}
