use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{fraction_string, Const, Rational, Scalar};

/// Decomposition families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Generic alternating product (ABAB... or ABCB ABCB...).
    N,
    /// Palindromic product with the N building block.
    S,
    /// Palindromic product with the ABC building block.
    SAbc,
    /// Palindromic product of alternating `e^A e^B e^C` / `e^C e^B e^A` terms.
    SE,
    /// Palindromic product of leapfrog terms.
    SL,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::N, Family::S, Family::SAbc, Family::SE, Family::SL];

    pub fn tag(self) -> &'static str {
        match self {
            Family::N => "n",
            Family::S => "s",
            Family::SAbc => "sabc",
            Family::SE => "se",
            Family::SL => "sl",
        }
    }

    pub fn is_symmetric(self) -> bool {
        self != Family::N
    }

    pub fn valid_for(self, n: usize) -> bool {
        match n {
            2 => matches!(self, Family::N | Family::S | Family::SL),
            3 => true,
            _ => false,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::N => "N",
            Family::S => "S",
            Family::SAbc => "S-abc",
            Family::SE => "SE",
            Family::SL => "SL",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s
            .trim()
            .to_ascii_lowercase()
            .replace(['-', '_', '\''], "")
            .as_str()
        {
            "n" => Ok(Family::N),
            "s" => Ok(Family::S),
            "sabc" => Ok(Family::SAbc),
            "se" => Ok(Family::SE),
            "sl" => Ok(Family::SL),
            _ => Err(Error::Parse(format!("unknown family `{s}`"))),
        }
    }
}

/// Slot naming for SE schemes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Chart {
    /// One slot per Euler term: `u1, v1, u2, v2, ...`.
    #[default]
    Standard,
    /// Slots are the contracted exponents: `u = u1, q1 = u1+v1, r1 = v1+u2, q2 = u2+v2, ...`.
    EulerPair,
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chart::Standard => "standard",
            Chart::EulerPair => "euler-pair",
        })
    }
}

impl FromStr for Chart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "standard" | "std" | "uv" => Ok(Chart::Standard),
            "euler-pair" | "euler_pair" | "eulerpair" | "uqr" => Ok(Chart::EulerPair),
            _ => Err(Error::Parse(format!("unknown chart `{s}`"))),
        }
    }
}

/// Affine expression `constant + Σ coeff · slot` with exact coefficients.
#[derive(Clone, PartialEq)]
pub struct LinExpr {
    constant: Const,
    /// Sorted by slot, no zero coefficients.
    terms: Vec<(usize, Const)>,
}

impl LinExpr {
    pub fn constant(c: Rational) -> Self {
        LinExpr {
            constant: Const::new(c),
            terms: Vec::new(),
        }
    }

    pub fn slot(i: usize) -> Self {
        LinExpr {
            constant: Const::from_int(0),
            terms: vec![(i, Const::from_int(1))],
        }
    }

    fn from_parts(constant: Rational, mut terms: Vec<(usize, Rational)>) -> Self {
        terms.sort_by_key(|(i, _)| *i);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(terms.len());
        for (i, c) in terms {
            match merged.last_mut() {
                Some((j, d)) if *j == i => *d += c,
                _ => merged.push((i, c)),
            }
        }
        LinExpr {
            constant: Const::new(constant),
            terms: merged
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, Const::new(c)))
                .collect(),
        }
    }

    pub fn constant_part(&self) -> &Rational {
        self.constant.exact()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.terms.iter().map(|(i, c)| (*i, c.exact()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff_of(&self, slot: usize) -> Rational {
        self.terms
            .iter()
            .find(|(i, _)| *i == slot)
            .map(|(_, c)| c.exact().clone())
            .unwrap_or_else(Rational::zero)
    }

    fn parts(&self) -> (Rational, Vec<(usize, Rational)>) {
        (
            self.constant.exact().clone(),
            self.terms
                .iter()
                .map(|(i, c)| (*i, c.exact().clone()))
                .collect(),
        )
    }

    pub fn add(&self, other: &LinExpr) -> LinExpr {
        let (c1, mut t1) = self.parts();
        let (c2, t2) = other.parts();
        t1.extend(t2);
        LinExpr::from_parts(c1 + c2, t1)
    }

    pub fn scaled(&self, f: &Rational) -> LinExpr {
        let (c, t) = self.parts();
        LinExpr::from_parts(c * f, t.into_iter().map(|(i, x)| (i, x * f)).collect())
    }

    pub fn sub(&self, other: &LinExpr) -> LinExpr {
        self.add(&other.scaled(&-Rational::one()))
    }

    /// Replaces `slot` by `value`.
    pub fn substitute(&self, slot: usize, value: &LinExpr) -> LinExpr {
        let k = self.coeff_of(slot);
        if k.is_zero() {
            return self.clone();
        }
        let (c, t) = self.parts();
        let rest = LinExpr::from_parts(c, t.into_iter().filter(|(i, _)| *i != slot).collect());
        rest.add(&value.scaled(&k))
    }

    pub fn eval<S: Scalar>(&self, values: &[S]) -> S {
        let mut out = S::from_const(&self.constant);
        for (i, c) in &self.terms {
            out.add_scaled(&values[*i], c);
        }
        out
    }

    /// Human-readable form such as `1/2 - b1` or `1 - 2*a1 - 2*a2`.
    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        if !self.constant.is_zero() || self.terms.is_empty() {
            out.push_str(&fraction_string(self.constant.exact()));
        }
        for (i, c) in &self.terms {
            let c = c.exact();
            let negative = c < &Rational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&fraction_string(&mag));
                out.push('*');
            }
            out.push_str(&names[*i]);
        }
        out
    }
}

impl fmt::Debug for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..=self.terms.last().map_or(0, |t| t.0))
            .map(|i| format!("x{i}"))
            .collect();
        f.write_str(&self.render(&names))
    }
}

/// One exponential `exp(coeff · t · generator)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub generator: usize,
    pub coeff: LinExpr,
}

/// A named parameter. Dependent slots carry their closure over free slots.
#[derive(Clone, Debug, PartialEq)]
pub struct Slot {
    pub name: String,
    pub closure: Option<LinExpr>,
}

impl Slot {
    pub fn is_free(&self) -> bool {
        self.closure.is_none()
    }
}

/// A decomposition template with consistency closures built in.
#[derive(Clone, Debug, PartialEq)]
pub struct Scheme {
    n: usize,
    family: Family,
    chart: Chart,
    m: usize,
    slots: Vec<Slot>,
    factors: Vec<Factor>,
}

fn label(g: usize) -> char {
    (b'A' + g as u8) as char
}

struct Builder {
    names: Vec<String>,
    counters: [usize; 3],
    raw: Vec<(usize, LinExpr)>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            names: Vec::new(),
            counters: [0; 3],
            raw: Vec::new(),
        }
    }

    fn named(&mut self, name: String) -> usize {
        self.names.push(name);
        self.names.len() - 1
    }

    /// A fresh slot `a_k`, `b_k` or `c_k` for generator `g`.
    fn fresh(&mut self, g: usize) -> usize {
        self.counters[g] += 1;
        let name = format!("{}{}", label(g).to_ascii_lowercase(), self.counters[g]);
        self.named(name)
    }
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

impl Scheme {
    pub fn build(n: usize, family: Family, m: usize) -> Result<Scheme> {
        Scheme::build_with_chart(n, family, m, Chart::Standard)
    }

    pub fn build_with_chart(n: usize, family: Family, m: usize, chart: Chart) -> Result<Scheme> {
        let bad = |why: &str| {
            Err(Error::InvalidScheme(format!(
                "n={n}, {family}, m={m}: {why}"
            )))
        };
        if !family.valid_for(n) {
            return bad("family not defined for this number of terms");
        }
        if chart == Chart::EulerPair && family != Family::SE {
            return bad("the Euler-pair chart only applies to SE");
        }
        let mut b = Builder::new();
        match (n, family) {
            (2, Family::N) | (3, Family::N) => {
                if m < n {
                    return bad("need at least one factor per term");
                }
                for i in 0..m {
                    let g = pattern(n, family, i);
                    let s = b.fresh(g);
                    b.raw.push((g, LinExpr::slot(s)));
                }
            }
            (_, Family::S) | (3, Family::SAbc) => {
                if m.is_multiple_of(2) || m < 2 * n - 1 {
                    return bad("needs odd m large enough to contain every term");
                }
                if family == Family::SAbc
                    && (!(m + 1).is_multiple_of(3) || !((m + 1) / 3).is_multiple_of(2))
                {
                    return bad("needs even (m+1)/3");
                }
                let h = m.div_ceil(2);
                let mut half_list = Vec::with_capacity(h);
                for i in 0..h {
                    let g = pattern(n, family, i);
                    let s = b.fresh(g);
                    half_list.push((g, LinExpr::slot(s)));
                }
                b.raw.extend(half_list.iter().cloned());
                b.raw.extend(half_list[..h - 1].iter().rev().cloned());
            }
            (_, Family::SL) => {
                let per = 2 * (n - 1);
                if m < per + 1 || !(m - 1).is_multiple_of(per) {
                    return bad(if n == 2 {
                        "needs odd m >= 3"
                    } else {
                        "needs integer (m-1)/4"
                    });
                }
                let k = (m - 1) / per;
                let nu = k.div_ceil(2);
                let ids: Vec<usize> = (1..=nu).map(|i| b.named(format!("w{i}"))).collect();
                for j in 1..=k {
                    let w = LinExpr::slot(ids[j.min(k + 1 - j) - 1]);
                    let hw = w.scaled(&half());
                    if n == 2 {
                        b.raw.extend([(0, hw.clone()), (1, w), (0, hw)]);
                    } else {
                        b.raw.extend([
                            (0, hw.clone()),
                            (1, hw.clone()),
                            (2, w),
                            (1, hw.clone()),
                            (0, hw),
                        ]);
                    }
                }
            }
            (3, Family::SE) => {
                if m < 5 || !(m - 1).is_multiple_of(4) {
                    return bad("needs even (m-1)/2");
                }
                let t = (m - 1) / 2;
                let nu = t / 2;
                let x: Vec<LinExpr> = match chart {
                    Chart::Standard => (1..=nu)
                        .map(|s| {
                            let name = if s % 2 == 1 {
                                format!("u{}", s.div_ceil(2))
                            } else {
                                format!("v{}", s / 2)
                            };
                            LinExpr::slot(b.named(name))
                        })
                        .collect(),
                    Chart::EulerPair => {
                        let mut x: Vec<LinExpr> = Vec::with_capacity(nu);
                        for i in 1..=nu {
                            let name = match i {
                                1 => "u".to_string(),
                                i if i % 2 == 0 => format!("q{}", i / 2),
                                i => format!("r{}", (i - 1) / 2),
                            };
                            let y = LinExpr::slot(b.named(name));
                            let xi = match x.last() {
                                Some(prev) => y.sub(prev),
                                None => y,
                            };
                            x.push(xi);
                        }
                        x
                    }
                };
                for j in 1..=t {
                    let xj = x[j.min(t + 1 - j) - 1].clone();
                    let gens: [usize; 3] = if j % 2 == 1 { [0, 1, 2] } else { [2, 1, 0] };
                    b.raw.extend(gens.iter().map(|&g| (g, xj.clone())));
                }
            }
            _ => return bad("unsupported combination"),
        }

        let mut factors: Vec<Factor> = Vec::with_capacity(m);
        for (g, e) in b.raw {
            match factors.last_mut() {
                Some(f) if f.generator == g => f.coeff = f.coeff.add(&e),
                _ => factors.push(Factor {
                    generator: g,
                    coeff: e,
                }),
            }
        }
        if factors.len() != m {
            return bad(&format!("template contracts to {} factors", factors.len()));
        }
        let closures = derive_closures(n, b.names.len(), &factors)
            .map_err(|e| Error::InvalidScheme(format!("n={n}, {family}, m={m}: {e}")))?;
        let slots = b
            .names
            .into_iter()
            .zip(closures)
            .map(|(name, closure)| Slot { name, closure })
            .collect();
        Ok(Scheme {
            n,
            family,
            chart,
            m,
            slots,
            factors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of parameter slots, free and dependent.
    pub fn nu(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn slot_names(&self) -> Vec<String> {
        self.slots.iter().map(|s| s.name.clone()).collect()
    }

    pub fn slot_index(&self, name: &str) -> Option<usize> {
        let wanted = name.trim().replace('_', "");
        self.slots.iter().position(|s| s.name == wanted)
    }

    pub fn free_slots(&self) -> Vec<usize> {
        (0..self.slots.len())
            .filter(|&i| self.slots[i].is_free())
            .collect()
    }

    pub fn num_free(&self) -> usize {
        self.slots.iter().filter(|s| s.is_free()).count()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_symmetric(&self) -> bool {
        self.family.is_symmetric()
    }

    /// Short identifier such as `n2-s-m11`.
    pub fn name(&self) -> String {
        let chart = if self.chart == Chart::EulerPair {
            "-uqr"
        } else {
            ""
        };
        format!("n{}-{}-m{}{}", self.n, self.family.tag(), self.m, chart)
    }

    /// All slot values from the free ones, in slot order.
    pub fn resolve<S: Scalar>(&self, free: &[S]) -> Result<Vec<S>> {
        let idx = self.free_slots();
        if free.len() != idx.len() {
            return Err(Error::InvalidParams(format!(
                "{} expects {} free values, got {}",
                self.name(),
                idx.len(),
                free.len()
            )));
        }
        let mut values = vec![S::zero(); self.slots.len()];
        for (i, v) in idx.iter().zip(free) {
            values[*i] = v.clone();
        }
        for (i, s) in self.slots.iter().enumerate() {
            if let Some(c) = &s.closure {
                values[i] = c.eval(&values);
            }
        }
        Ok(values)
    }

    /// `(generator, coefficient)` for every factor, given all slot values.
    pub fn factor_values<S: Scalar>(&self, slot_values: &[S]) -> Vec<(usize, S)> {
        self.factors
            .iter()
            .map(|f| (f.generator, f.coeff.eval(slot_values)))
            .collect()
    }

    /// Textual product such as `exp(a1 A) exp(b1 B) exp(a1 A)`.
    pub fn describe(&self) -> String {
        let names = self.slot_names();
        self.factors
            .iter()
            .map(|f| format!("exp(({}) {})", f.coeff.render(&names), label(f.generator)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Closures as `name = expression` lines.
    pub fn closure_text(&self) -> Vec<String> {
        let names = self.slot_names();
        self.slots
            .iter()
            .filter_map(|s| {
                s.closure
                    .as_ref()
                    .map(|c| format!("{} = {}", s.name, c.render(&names)))
            })
            .collect()
    }
}

fn pattern(n: usize, family: Family, i: usize) -> usize {
    match (n, family) {
        (2, _) => i % 2,
        (3, Family::SAbc) => i % 3,
        _ => [0, 1, 2, 1][i % 4],
    }
}

/// Solves `Σ coefficients of generator g = 1` for every g, one dependent slot
/// per independent equation (the last slot occurring in it).
fn derive_closures(n: usize, nslots: usize, factors: &[Factor]) -> Result<Vec<Option<LinExpr>>> {
    let mut closures: Vec<Option<LinExpr>> = vec![None; nslots];
    for g in 0..n {
        let mut eq = LinExpr::constant(-Rational::one());
        for f in factors.iter().filter(|f| f.generator == g) {
            eq = eq.add(&f.coeff);
        }
        for (i, c) in closures.iter().enumerate() {
            if let Some(c) = c {
                eq = eq.substitute(i, c);
            }
        }
        let Some((dep, k)) = eq.terms().last().map(|(i, k)| (i, k.clone())) else {
            if !eq.constant_part().is_zero() {
                return Err(Error::InvalidScheme(format!(
                    "coefficients of {} cannot sum to 1",
                    label(g)
                )));
            }
            continue;
        };
        let rest = eq.sub(&LinExpr::slot(dep).scaled(&k));
        let value = rest.scaled(&(-k.recip()));
        for c in closures.iter_mut().flatten() {
            *c = c.substitute(dep, &value);
        }
        closures[dep] = Some(value);
    }
    Ok(closures)
}
