use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::{fraction_string, Const, Rational, Scalar};

/// Exponent vector with trailing zeros trimmed, so `x0` is `[1]` and the
/// constant monomial is `[]`.
pub type Monomial = Vec<u32>;

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn exp(m: &[u32], i: usize) -> u32 {
    m.get(i).copied().unwrap_or(0)
}

pub fn total_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

pub fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| exp(a, i) + exp(b, i)).collect())
}

pub fn mono_lcm(a: &[u32], b: &[u32]) -> Monomial {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| exp(a, i).max(exp(b, i))).collect())
}

pub fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().enumerate().all(|(i, &e)| e <= exp(b, i))
}

/// `b / a`, assuming `a | b`.
pub fn mono_div(b: &[u32], a: &[u32]) -> Monomial {
    trim((0..b.len()).map(|i| exp(b, i) - exp(a, i)).collect())
}

pub fn mono_coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Term order. Variable 0 is the largest variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        let n = a.len().max(b.len());
        match self {
            MonomialOrder::Lex => {
                for i in 0..n {
                    match exp(a, i).cmp(&exp(b, i)) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::GrevLex => match total_degree(a).cmp(&total_degree(b)) {
                Ordering::Equal => {
                    for i in (0..n).rev() {
                        match exp(a, i).cmp(&exp(b, i)) {
                            Ordering::Equal => continue,
                            o => return o.reverse(),
                        }
                    }
                    Ordering::Equal
                }
                o => o,
            },
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MonomialOrder::Lex => "lex",
            MonomialOrder::GrevLex => "grevlex",
        })
    }
}

/// Sparse multivariate polynomial with exact rational coefficients. Variables
/// are positional; names live with whoever owns the polynomial.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn constant(c: Rational) -> Self {
        let mut p = MultiPoly::default();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn var(i: usize) -> Self {
        let mut m = vec![0; i + 1];
        m[i] = 1;
        MultiPoly::monomial(m, Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = MultiPoly::default();
        if !c.is_zero() {
            p.terms.insert(trim(m), c);
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = MultiPoly::default();
        for (m, c) in terms {
            p.add_term(trim(m), &c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&[])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| total_degree(m))
            .max()
            .unwrap_or(0)
    }

    /// One past the highest variable index that occurs.
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| exp(m, i) > 0)
    }

    /// Terms sorted from largest to smallest under `order`.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(Monomial, Rational)> {
        let mut v: Vec<(Monomial, Rational)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn leading(&self, order: MonomialOrder) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return MultiPoly::default();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &[u32], c: &Rational) -> Self {
        if c.is_zero() {
            return MultiPoly::default();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, x)| (mono_mul(k, m), x * c))
                .collect(),
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, order: MonomialOrder) -> Self {
        match self.leading(order) {
            Some((_, c)) => self.scale_rational(&c.recip()),
            None => self.clone(),
        }
    }

    pub fn eval<S: Scalar>(&self, point: &[S]) -> S {
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = S::from_const(&Const::new(c.clone()));
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul_ref(&point[i]);
                }
            }
            acc.add_assign_ref(&t);
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (i, &e) in m.iter().enumerate() {
                    t *= point[i].powi(e as i32);
                }
                t
            })
            .sum()
    }

    /// Renames variable `i` to `map[i]`.
    pub fn permute(&self, map: &[usize]) -> Self {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut out = vec![0; map.len()];
            for (i, &e) in m.iter().enumerate() {
                out[map[i]] = e;
            }
            (out, c.clone())
        }))
    }

    /// Univariate coefficients (lowest first) when only variable `i` occurs.
    pub fn as_univariate(&self, i: usize) -> Option<Vec<Rational>> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            if m.iter().enumerate().any(|(j, &e)| j != i && e > 0) {
                return None;
            }
            let d = exp(m, i) as usize;
            if out.len() <= d {
                out.resize(d + 1, Rational::zero());
            }
            out[d] = c.clone();
        }
        Some(out)
    }

    /// Renders as `3/2*x0^2*x1 - x2 + 1` with the given names, largest term
    /// first under `order`.
    pub fn render(&self, names: &[String], order: MonomialOrder) -> String {
        if self.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.sorted_terms(order).into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_empty() {
                factors.push(fraction_string(&a));
            }
            for (i, &e) in m.iter().enumerate() {
                let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                match e {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[], MonomialOrder::GrevLex))
    }
}

impl Zero for MultiPoly {
    fn zero() -> Self {
        MultiPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MultiPoly {
    fn one() -> Self {
        MultiPoly::constant(Rational::one())
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(mut self, rhs: MultiPoly) -> MultiPoly {
        self.sub_assign_ref(&rhs);
        self
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        self.mul_ref(&rhs)
    }
}

impl Scalar for MultiPoly {
    const EXACT: bool = true;

    fn from_const(c: &Const) -> Self {
        MultiPoly::constant(c.exact().clone())
    }

    fn scale(&self, c: &Const) -> Self {
        self.scale_rational(c.exact())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = MultiPoly::default();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(mono_mul(a, b), &(x * y));
            }
        }
        out
    }

    fn add_assign_ref(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    fn sub_assign_ref(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), &-c.clone());
        }
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        for (ma, x) in &a.terms {
            for (mb, y) in &b.terms {
                self.add_term(mono_mul(ma, mb), &(x * y));
            }
        }
    }

    fn add_scaled(&mut self, x: &Self, c: &Const) {
        for (m, v) in &x.terms {
            self.add_term(m.clone(), &(v * c.exact()));
        }
    }

    /// Largest absolute coefficient.
    fn magnitude(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    fn as_f64(&self) -> Option<f64> {
        self.is_constant()
            .then(|| self.constant_term().to_f64().unwrap_or(f64::NAN))
    }

    fn as_rational(&self) -> Option<Rational> {
        self.is_constant().then(|| self.constant_term())
    }
}
