use super::*;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn basis(n: usize, d: u32) -> Arc<HallBasis> {
    HallBasis::cached(&Arc::new(Alphabet::unit(n)), d, &(0..n).collect::<Vec<_>>()).unwrap()
}

fn rendered(b: &HallBasis, k: u32) -> Vec<String> {
    b.degree_range(k).map(|i| b.render(i)).collect()
}

#[test]
fn witt_values() {
    assert_eq!(witt_dimension(2, 6), 9);
    assert_eq!(witt_dimension(3, 12), 44220);
    assert_eq!(witt_dimension(1, 1), 1);
    for k in 2..8 {
        assert_eq!(witt_dimension(1, k), 0);
    }
}

#[test]
fn unit_counts_follow_witt() {
    let b2 = basis(2, 8);
    for k in 1..=8 {
        assert_eq!(b2.count(k) as u128, witt_dimension(2, k));
    }
    let b3 = basis(3, 6);
    assert_eq!(b3.counts(), vec![3, 3, 8, 18, 48, 116]);
}

#[test]
fn two_generator_listing() {
    let b = basis(2, 5);
    assert_eq!(rendered(&b, 1), ["A", "B"]);
    assert_eq!(rendered(&b, 2), ["[A,B]"]);
    assert_eq!(rendered(&b, 3), ["[A,[A,B]]", "[B,[A,B]]"]);
    assert_eq!(
        rendered(&b, 4),
        ["[A,[A,[A,B]]]", "[B,[A,[A,B]]]", "[B,[B,[A,B]]]"]
    );
    assert_eq!(
        rendered(&b, 5),
        [
            "[A,[A,[A,[A,B]]]]",
            "[B,[A,[A,[A,B]]]]",
            "[B,[B,[A,[A,B]]]]",
            "[B,[B,[B,[A,B]]]]",
            "[[A,B],[A,[A,B]]]",
            "[[A,B],[B,[A,B]]]"
        ]
    );
}

#[test]
fn reversed_ordering_relabels() {
    let alpha = Arc::new(Alphabet::unit(2));
    let b = HallBasis::new(alpha, 3, &[1, 0]).unwrap();
    assert_eq!(rendered(&b, 1), ["B", "A"]);
    assert_eq!(rendered(&b, 2), ["[B,A]"]);
    assert_eq!(rendered(&b, 3), ["[B,[B,A]]", "[A,[B,A]]"]);
}

#[test]
fn graded_counts() {
    let l = Arc::new(Alphabet::graded("Z", &[1, 3, 5, 7]).unwrap());
    let bl = HallBasis::new(l.clone(), 7, &[0, 1, 2, 3]).unwrap();
    let odd: Vec<usize> = [1, 3, 5, 7].iter().map(|&k| bl.count(k)).collect();
    assert_eq!(odd, vec![1, 1, 2, 4]);
    let e = Arc::new(Alphabet::graded("Z", &[1, 2, 3, 4, 5, 6, 7]).unwrap());
    let be = HallBasis::new(e, 7, &(0..7).collect::<Vec<_>>()).unwrap();
    let odd: Vec<usize> = [1, 3, 5, 7].iter().map(|&k| be.count(k)).collect();
    assert_eq!(odd, vec![1, 2, 6, 18]);
}

#[test]
fn expansions_by_hand() {
    let alpha = Arc::new(Alphabet::unit(2));
    let w = |s: &str| alpha.parse_word(s).unwrap();
    let ab = HallTree::bracket(HallTree::Leaf(0), HallTree::Leaf(1));
    let e = expand_hall(&ab, &alpha, 3).unwrap();
    assert_eq!(e.len(), 2);
    assert_eq!(e.coeff(w("AB")), q(1, 1));
    assert_eq!(e.coeff(w("BA")), q(-1, 1));
    let aab = HallTree::bracket(HallTree::Leaf(0), ab);
    let e = expand_hall(&aab, &alpha, 3).unwrap();
    assert_eq!(e.len(), 3);
    assert_eq!(e.coeff(w("AAB")), q(1, 1));
    assert_eq!(e.coeff(w("ABA")), q(-2, 1));
    assert_eq!(e.coeff(w("BAA")), q(1, 1));
    let leaf = expand_hall(&HallTree::Leaf(0), &alpha, 3).unwrap();
    assert_eq!(leaf.coeff(w("A")), q(1, 1));
    assert!(expand_hall(&aab, &alpha, 2).is_err());
}

#[test]
fn tree_parse_roundtrip() {
    let b = basis(3, 4);
    for i in 0..b.len() {
        let t = HallTree::parse(&b.render(i), b.alphabet()).unwrap();
        assert_eq!(t, b.tree(i));
        assert_eq!(b.index_of(&t), Some(i));
    }
    let not_hall = HallTree::parse("[B,A]", b.alphabet()).unwrap();
    assert_eq!(b.index_of(&not_hall), None);
}

#[test]
fn coordinates_of_simple_inputs() {
    let b = basis(2, 4);
    let alpha = b.alphabet().clone();
    let s = NCSeries::from_terms(
        alpha.clone(),
        4,
        [
            (alpha.parse_word("AB").unwrap(), q(1, 1)),
            (alpha.parse_word("BA").unwrap(), q(-1, 1)),
        ],
    );
    let (lie, res) = lie_coordinates(&s, &b).unwrap();
    assert_eq!(res, 0.0);
    assert_eq!(lie.nonzero(), vec![("[A,B]".to_string(), q(1, 1))]);

    let not_lie = NCSeries::from_terms(
        alpha.clone(),
        4,
        [(alpha.parse_word("AB").unwrap(), q(1, 1))],
    );
    let (_, res) = lie_coordinates(&not_lie, &b).unwrap();
    assert!(res > 0.1);
    assert!(matches!(
        lie_coordinates_checked(&not_lie, &b, 1e-12),
        Err(Error::NotLieElement { degree: 2, .. })
    ));
}

#[test]
fn bch_coordinates_through_degree_four() {
    let b = basis(2, 4);
    let alpha = b.alphabet().clone();
    let a = NCSeries::from_generator(alpha.clone(), 0, q(1, 1), 4).unwrap();
    let bb = NCSeries::from_generator(alpha.clone(), 1, q(1, 1), 4).unwrap();
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
    assert_eq!(got.len(), expect.len());
    for (label, value) in expect {
        assert!(got.contains(&(label.to_string(), value.clone())), "{label}");
    }
}

#[test]
fn jacobi_identity_has_zero_coordinates() {
    let b = basis(3, 5);
    let alpha = b.alphabet().clone();
    let trees: Vec<HallTree> = (0..b.len())
        .filter(|&i| b.node(i).degree <= 2)
        .map(|i| b.tree(i))
        .collect();
    for v in &trees {
        for w in &trees {
            for x in &trees {
                let deg = v.degree(&alpha) + w.degree(&alpha) + x.degree(&alpha);
                if deg > 5 {
                    continue;
                }
                let t1 = HallTree::bracket(v.clone(), HallTree::bracket(w.clone(), x.clone()));
                let t2 = HallTree::bracket(w.clone(), HallTree::bracket(x.clone(), v.clone()));
                let t3 = HallTree::bracket(x.clone(), HallTree::bracket(v.clone(), w.clone()));
                let s = expand_hall(&t1, &alpha, 5)
                    .unwrap()
                    .add(&expand_hall(&t2, &alpha, 5).unwrap())
                    .unwrap()
                    .add(&expand_hall(&t3, &alpha, 5).unwrap())
                    .unwrap();
                let (lie, res) = lie_coordinates(&s, &b).unwrap();
                assert_eq!(res, 0.0);
                assert!(lie.coords().iter().all(|c| *c == q(0, 1)));
            }
        }
    }
}

#[test]
fn float_coordinates_match_exact() {
    let b = basis(3, 5);
    let coords: Vec<Rational> = (0..b.len())
        .map(|i| q((i as i64 % 7) - 3, 1 + i as i64 % 5))
        .collect();
    let lie = LieSeries::new(b.clone(), coords.clone()).unwrap();
    let s = lie.to_series();
    let sf = s.map(|c| num_traits::ToPrimitive::to_f64(c).unwrap());
    let (back, res) = lie_coordinates(&sf, &b).unwrap();
    assert!(res < 1e-12);
    for (x, y) in back.coords().iter().zip(&coords) {
        assert!((x - num_traits::ToPrimitive::to_f64(y).unwrap()).abs() < 1e-12);
    }
    let dense = DenseSeries::from_sparse(&sf).unwrap();
    for k in 1..=5 {
        let dc = b.dense_coordinates_at(&dense, k);
        assert!(b.dense_residual_at(&dense, k, &dc) < 1e-12);
        assert_eq!(dc.as_slice(), back.degree_coords(k));
    }
}

fn arb_combination(n: usize, d: u32) -> impl Strategy<Value = (Vec<usize>, Vec<(i64, i64)>)> {
    let len = basis(n, d).len();
    (
        Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        prop::collection::vec((-6i64..=6, 1i64..=5), len),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn coordinates_invert_expansion((ordering, raw) in arb_combination(2, 7)) {
        let alpha = Arc::new(Alphabet::unit(2));
        let b = HallBasis::cached(&alpha, 7, &ordering).unwrap();
        let coords: Vec<Rational> = raw.iter().map(|(n, d)| q(*n, *d)).collect();
        let lie = LieSeries::new(b.clone(), coords.clone()).unwrap();
        let (back, res) = lie_coordinates(&lie.to_series(), &b).unwrap();
        prop_assert_eq!(res, 0.0);
        prop_assert_eq!(back.coords(), coords.as_slice());
    }

    #[test]
    fn ordering_covariance((ordering, raw) in arb_combination(3, 4)) {
        let alpha = Arc::new(Alphabet::unit(3));
        let b0 = HallBasis::cached(&alpha, 4, &[0, 1, 2]).unwrap();
        let b1 = HallBasis::cached(&alpha, 4, &ordering).unwrap();
        let coords: Vec<Rational> = raw.iter().map(|(n, d)| q(*n, *d)).collect();
        let s = LieSeries::new(b0, coords).unwrap().to_series();
        let (other, res) = lie_coordinates(&s, &b1).unwrap();
        prop_assert_eq!(res, 0.0);
        prop_assert_eq!(other.to_series(), s);
    }
}
