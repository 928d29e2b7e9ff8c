//! Truncated power series in noncommuting generators.
//!
//! A term of total generator degree `k` stands for the `t^k` coefficient of an
//! expansion in the step size, so no explicit time symbol is carried around.

mod dense;
mod word;

use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::scalar::{Const, Scalar};

pub use dense::DenseSeries;
pub use word::{Word, MAX_GENERATORS, MAX_WORD_LEN};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub id: usize,
    pub label: String,
    pub degree: u32,
}

/// Ordered generator list. Ids are positions in the list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    generators: Vec<Generator>,
}

impl Alphabet {
    pub fn new(labels_and_degrees: &[(&str, u32)]) -> Result<Self> {
        if labels_and_degrees.is_empty() || labels_and_degrees.len() > MAX_GENERATORS {
            return Err(Error::InvalidAlphabet(format!(
                "need 1..={MAX_GENERATORS} generators, got {}",
                labels_and_degrees.len()
            )));
        }
        let mut generators = Vec::with_capacity(labels_and_degrees.len());
        for (id, &(label, degree)) in labels_and_degrees.iter().enumerate() {
            if degree == 0 {
                return Err(Error::InvalidAlphabet(format!(
                    "generator {label} has degree 0"
                )));
            }
            if generators.iter().any(|g: &Generator| g.label == label) {
                return Err(Error::InvalidAlphabet(format!("duplicate label {label}")));
            }
            generators.push(Generator {
                id,
                label: label.to_string(),
                degree,
            });
        }
        Ok(Alphabet { generators })
    }

    /// `n` unit-degree generators labelled A, B, C, ...
    pub fn unit(n: usize) -> Self {
        let labels: Vec<String> = (0..n)
            .map(|i| ((b'A' + i as u8) as char).to_string())
            .collect();
        let spec: Vec<(&str, u32)> = labels.iter().map(|l| (l.as_str(), 1)).collect();
        Alphabet::new(&spec).expect("valid unit alphabet")
    }

    /// Generators with the given degrees, labelled `{prefix}{degree}` when
    /// degrees are distinct and `{prefix}{degree}_{k}` otherwise.
    pub fn graded(prefix: &str, degrees: &[u32]) -> Result<Self> {
        let mut labels = Vec::with_capacity(degrees.len());
        let mut seen: FxHashMap<u32, usize> = FxHashMap::default();
        for &d in degrees {
            let k = seen.entry(d).or_insert(0);
            *k += 1;
            labels.push(if degrees.iter().filter(|&&e| e == d).count() > 1 {
                format!("{prefix}{d}_{k}")
            } else {
                format!("{prefix}{d}")
            });
        }
        let spec: Vec<(&str, u32)> = labels
            .iter()
            .map(String::as_str)
            .zip(degrees.iter().copied())
            .collect();
        Alphabet::new(&spec)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, id: usize) -> &Generator {
        &self.generators[id]
    }

    pub fn degree_of(&self, id: usize) -> u32 {
        self.generators[id].degree
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().all(|g| g.degree == 1)
    }

    pub fn id_of(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    pub fn word_degree(&self, w: Word) -> u32 {
        if self.is_unit() {
            w.len() as u32
        } else {
            w.letters().map(|l| self.generators[l].degree).sum()
        }
    }

    pub fn format_word(&self, w: Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let single = self.generators.iter().all(|g| g.label.chars().count() == 1);
        let parts: Vec<&str> = w
            .letters()
            .map(|l| self.generators[l].label.as_str())
            .collect();
        if single {
            parts.concat()
        } else {
            parts.join("·")
        }
    }

    /// Parses a word written as concatenated single-character labels.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        if text == "1" {
            return Ok(Word::EMPTY);
        }
        let mut letters = Vec::new();
        for ch in text.chars() {
            let id = self.id_of(&ch.to_string()).ok_or_else(|| {
                Error::Parse(format!("unknown generator `{ch}` in word `{text}`"))
            })?;
            letters.push(id);
        }
        Word::from_letters(&letters).ok_or_else(|| Error::Parse(format!("word `{text}` too long")))
    }
}

/// Degree-truncated series `Σ c_w w` with coefficients in `S`.
#[derive(Clone)]
pub struct NCSeries<S> {
    alphabet: Arc<Alphabet>,
    max_degree: u32,
    terms: FxHashMap<Word, S>,
}

impl<S: Scalar> NCSeries<S> {
    pub fn zero(alphabet: Arc<Alphabet>, max_degree: u32) -> Self {
        NCSeries {
            alphabet,
            max_degree,
            terms: FxHashMap::default(),
        }
    }

    pub fn one(alphabet: Arc<Alphabet>, max_degree: u32) -> Self {
        let mut s = Self::zero(alphabet, max_degree);
        s.terms.insert(Word::EMPTY, S::one());
        s
    }

    pub fn from_generator(
        alphabet: Arc<Alphabet>,
        id: usize,
        coeff: S,
        max_degree: u32,
    ) -> Result<Self> {
        if id >= alphabet.len() {
            return Err(Error::InvalidAlphabet(format!("no generator with id {id}")));
        }
        let degree = alphabet.degree_of(id);
        if degree > max_degree {
            return Err(Error::DegreeExceedsTruncation { degree, max_degree });
        }
        let mut s = Self::zero(alphabet, max_degree);
        s.add_term(Word::letter_word(id), coeff);
        Ok(s)
    }

    /// Builds a series from `(word, coeff)` pairs, summing duplicates and
    /// dropping words above the truncation.
    pub fn from_terms(
        alphabet: Arc<Alphabet>,
        max_degree: u32,
        terms: impl IntoIterator<Item = (Word, S)>,
    ) -> Self {
        let mut s = Self::zero(alphabet, max_degree);
        for (w, c) in terms {
            if s.alphabet.word_degree(w) <= max_degree {
                s.add_term(w, c);
            }
        }
        s
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: Word) -> S {
        self.terms.get(&w).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(Word::EMPTY)
    }

    /// Terms in lexicographic word order.
    pub fn sorted_terms(&self) -> Vec<(Word, &S)> {
        let mut v: Vec<(Word, &S)> = self.terms.iter().map(|(w, c)| (*w, c)).collect();
        v.sort_by_key(|(w, _)| *w);
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = (Word, &S)> {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    /// Adds `c` to the coefficient of `w`, removing it if it cancels.
    pub fn add_term(&mut self, w: Word, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(slot) => {
                slot.add_assign_ref(&c);
                if slot.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        let same_alphabet =
            Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet;
        if !same_alphabet || self.max_degree != other.max_degree {
            return Err(Error::AlphabetMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in other.iter() {
            out.add_term(w, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in other.iter() {
            out.add_term(w, -c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(w, c)| (*w, -c.clone())).collect();
        NCSeries {
            alphabet: self.alphabet.clone(),
            max_degree: self.max_degree,
            terms,
        }
    }

    pub fn scale(&self, c: &Const) -> Self {
        let mut out = Self::zero(self.alphabet.clone(), self.max_degree);
        if c.is_zero() {
            return out;
        }
        for (w, x) in self.iter() {
            out.add_term(w, x.scale(c));
        }
        out
    }

    pub fn scale_by(&self, c: &S) -> Self {
        let mut out = Self::zero(self.alphabet.clone(), self.max_degree);
        for (w, x) in self.iter() {
            out.add_term(w, x.mul_ref(c));
        }
        out
    }

    fn by_degree(&self) -> Vec<Vec<(Word, &S)>> {
        let mut buckets: Vec<Vec<(Word, &S)>> = vec![Vec::new(); self.max_degree as usize + 1];
        for (w, c) in self.iter() {
            buckets[self.alphabet.word_degree(w) as usize].push((w, c));
        }
        buckets
    }

    /// Concatenation product, truncated at the common degree bound.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let d = self.max_degree as usize;
        let left = self.by_degree();
        let right = other.by_degree();
        let mut acc: FxHashMap<Word, S> = FxHashMap::default();
        for (da, lterms) in left.iter().enumerate() {
            for rterms in right.iter().take(d + 1 - da) {
                for (wa, ca) in lterms {
                    for (wb, cb) in rterms {
                        let w = wa.concat(*wb).ok_or_else(|| {
                            Error::SizeGuard(format!("word longer than {MAX_WORD_LEN} letters"))
                        })?;
                        acc.entry(w).or_insert_with(S::zero).add_mul(ca, cb);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(NCSeries {
            alphabet: self.alphabet.clone(),
            max_degree: self.max_degree,
            terms: acc,
        })
    }

    /// Homogeneous part of the given degree.
    pub fn degree_part(&self, k: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| self.alphabet.word_degree(**w) == k)
            .map(|(w, c)| (*w, c.clone()))
            .collect();
        NCSeries {
            alphabet: self.alphabet.clone(),
            max_degree: self.max_degree,
            terms,
        }
    }

    /// Same terms under a smaller truncation bound.
    pub fn truncate(&self, max_degree: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| self.alphabet.word_degree(**w) <= max_degree)
            .map(|(w, c)| (*w, c.clone()))
            .collect();
        NCSeries {
            alphabet: self.alphabet.clone(),
            max_degree,
            terms,
        }
    }

    /// `Σ_{k=0..D} x^k / k!`.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut result = Self::one(self.alphabet.clone(), self.max_degree);
        let mut power = Self::one(self.alphabet.clone(), self.max_degree);
        for k in 1..=self.max_degree as i64 {
            power = power.mul(self)?.scale(&Const::from_ratio(1, k));
            if power.is_zero() {
                break;
            }
            result = result.add(&power)?;
        }
        Ok(result)
    }

    /// `Σ_{k=1..D} (-1)^{k+1} (x-1)^k / k`.
    pub fn log(&self) -> Result<Self> {
        if self.constant_term() != S::one() {
            return Err(Error::ConstantTermNotOne);
        }
        let mut y = self.clone();
        y.terms.remove(&Word::EMPTY);
        let mut result = Self::zero(self.alphabet.clone(), self.max_degree);
        let mut power = Self::one(self.alphabet.clone(), self.max_degree);
        for k in 1..=self.max_degree as i64 {
            power = power.mul(&y)?;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            result = result.add(&power.scale(&Const::from_ratio(sign, k)))?;
        }
        Ok(result)
    }

    /// Commutator `xy - yx`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Largest coefficient magnitude.
    pub fn max_norm(&self) -> f64 {
        self.terms
            .values()
            .map(Scalar::magnitude)
            .fold(0.0, f64::max)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> NCSeries<T> {
        let mut out = NCSeries::zero(self.alphabet.clone(), self.max_degree);
        for (w, c) in self.iter() {
            out.add_term(w, f(c));
        }
        out
    }
}

impl<S: Scalar> PartialEq for NCSeries<S> {
    fn eq(&self, other: &Self) -> bool {
        self.max_degree == other.max_degree
            && self.alphabet == other.alphabet
            && self.terms == other.terms
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for NCSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms = terms;
        terms.sort_by_key(|(w, _)| (self.alphabet.word_degree(*w), *w));
        let parts: Vec<String> = terms
            .iter()
            .map(|(w, c)| format!("{}: {}", self.alphabet.format_word(*w), c))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl<S: Scalar> fmt::Debug for NCSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = self.sorted_terms();
        terms.sort_by_key(|(w, _)| (self.alphabet.word_degree(*w), *w));
        let mut m = f.debug_map();
        for (w, c) in terms {
            m.entry(&self.alphabet.format_word(w), c);
        }
        m.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn ab(d: u32) -> (Arc<Alphabet>, NCSeries<Rational>, NCSeries<Rational>) {
        let alpha = Arc::new(Alphabet::unit(2));
        let a = NCSeries::from_generator(alpha.clone(), 0, q(1, 1), d).unwrap();
        let b = NCSeries::from_generator(alpha.clone(), 1, q(1, 1), d).unwrap();
        (alpha, a, b)
    }

    fn w(alpha: &Alphabet, s: &str) -> Word {
        alpha.parse_word(s).unwrap()
    }

    #[test]
    fn generator_construction() {
        let (alpha, a, _) = ab(4);
        assert_eq!(a.len(), 1);
        assert_eq!(a.coeff(w(&alpha, "A")), q(1, 1));
        let half_b = NCSeries::from_generator(alpha.clone(), 1, q(1, 2), 4).unwrap();
        assert_eq!(half_b.coeff(w(&alpha, "B")), q(1, 2));
        let graded = Arc::new(Alphabet::graded("Z", &[1, 3]).unwrap());
        let err = NCSeries::from_generator(graded, 1, q(1, 1), 2).unwrap_err();
        assert!(matches!(
            err,
            Error::DegreeExceedsTruncation {
                degree: 3,
                max_degree: 2
            }
        ));
    }

    #[test]
    fn products() {
        let (alpha, a, b) = ab(4);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(w(&alpha, "AB")), q(1, 1));
        let s = a.add(&b).unwrap();
        let sq = s.mul(&s).unwrap();
        for word in ["AA", "AB", "BA", "BB"] {
            assert_eq!(sq.coeff(w(&alpha, word)), q(1, 1));
        }
        assert_eq!(sq.len(), 4);
        let (_, a1, b1) = ab(1);
        assert!(a1.mul(&b1).unwrap().is_zero());
        assert!(matches!(a1.mul(&a), Err(Error::AlphabetMismatch)));
    }

    #[test]
    fn exp_of_generator() {
        let (alpha, a, _) = ab(3);
        let e = a.exp().unwrap();
        assert_eq!(e.len(), 4);
        assert_eq!(e.coeff(Word::EMPTY), q(1, 1));
        assert_eq!(e.coeff(w(&alpha, "A")), q(1, 1));
        assert_eq!(e.coeff(w(&alpha, "AA")), q(1, 2));
        assert_eq!(e.coeff(w(&alpha, "AAA")), q(1, 6));
        let zero = NCSeries::<Rational>::zero(alpha.clone(), 3);
        assert_eq!(zero.exp().unwrap(), NCSeries::one(alpha.clone(), 3));
        assert!(matches!(e.exp(), Err(Error::NonzeroConstantTerm)));
        assert!(matches!(a.log(), Err(Error::ConstantTermNotOne)));
        assert!(NCSeries::<Rational>::one(alpha, 3).log().unwrap().is_zero());
    }

    #[test]
    fn bch_low_degree() {
        let (alpha, a, b) = ab(2);
        let z = a
            .exp()
            .unwrap()
            .mul(&b.exp().unwrap())
            .unwrap()
            .log()
            .unwrap();
        let expected = NCSeries::from_terms(
            alpha.clone(),
            2,
            [
                (w(&alpha, "A"), q(1, 1)),
                (w(&alpha, "B"), q(1, 1)),
                (w(&alpha, "AB"), q(1, 2)),
                (w(&alpha, "BA"), q(-1, 2)),
            ],
        );
        assert_eq!(z, expected);
    }

    #[test]
    fn bch_degree_three_words() {
        let (alpha, a, b) = ab(3);
        let z = a
            .exp()
            .unwrap()
            .mul(&b.exp().unwrap())
            .unwrap()
            .log()
            .unwrap();
        // [A,[A,B]]/12 - [B,[A,B]]/12 expanded by hand.
        let words = [
            ("AAB", 1),
            ("ABA", -2),
            ("BAA", 1),
            ("BAB", -2),
            ("ABB", 1),
            ("BBA", 1),
        ];
        for (s, c) in words {
            assert_eq!(z.coeff(w(&alpha, s)), q(c, 12), "word {s}");
        }
        assert_eq!(z.degree_part(3).len(), 6);
    }

    fn arb_series(d: u32) -> impl Strategy<Value = NCSeries<Rational>> {
        let alpha = Arc::new(Alphabet::unit(3));
        prop::collection::vec(
            (
                prop::collection::vec(0usize..3, 1..=d as usize),
                -5i64..=5,
                1i64..=4,
            ),
            0..6,
        )
        .prop_map(move |terms| {
            NCSeries::from_terms(
                alpha.clone(),
                d,
                terms
                    .into_iter()
                    .map(|(l, n, den)| (Word::from_letters(&l).unwrap(), q(n, den))),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn exp_log_roundtrip(x in arb_series(6)) {
            prop_assert_eq!(x.exp().unwrap().log().unwrap(), x.clone());
        }

        #[test]
        fn mul_associative_and_distributive(x in arb_series(5), y in arb_series(5), z in arb_series(5)) {
            let l = x.mul(&y).unwrap().mul(&z).unwrap();
            let r = x.mul(&y.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(l, r);
            let l = x.mul(&y.add(&z).unwrap()).unwrap();
            let r = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn truncation_respected(x in arb_series(4), y in arb_series(4)) {
            let p = x.mul(&y).unwrap();
            prop_assert!(p.iter().all(|(w, _)| w.len() <= 4));
        }
    }
}
