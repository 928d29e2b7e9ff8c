//! Buchberger's algorithm with the Gebauer-Möller pair criteria.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::{One, Zero};

use super::poly::{
    mono_coprime, mono_div, mono_divides, mono_lcm, mono_mul, Monomial, MonomialOrder, MultiPoly,
};
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Terms sorted ascending under the order, so the leading term is last.
#[derive(Clone, Debug)]
struct Sorted {
    terms: Vec<(Monomial, Rational)>,
}

impl Sorted {
    fn new(p: &MultiPoly, order: MonomialOrder) -> Self {
        let mut terms = p.sorted_terms(order);
        terms.reverse();
        Sorted { terms }
    }

    fn lead(&self) -> Option<&(Monomial, Rational)> {
        self.terms.last()
    }

    fn lm(&self) -> &Monomial {
        &self.terms.last().expect("nonzero polynomial").0
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn to_poly(&self) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().cloned())
    }

    fn monic(&mut self) {
        if let Some((_, c)) = self.lead() {
            let inv = c.recip();
            for (_, x) in &mut self.terms {
                *x *= &inv;
            }
        }
    }

    /// `self - c·m·g`, merging the two ascending lists.
    fn sub_scaled(&self, c: &Rational, m: &[u32], g: &Sorted, order: MonomialOrder) -> Sorted {
        let shifted = g.terms.iter().map(|(gm, gc)| (mono_mul(gm, m), gc * c));
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().cloned().peekable();
        let mut b = shifted.peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match order.cmp(&x.0, &y.0) {
                    Ordering::Less => out.push(a.next().unwrap()),
                    Ordering::Greater => {
                        let (m, c) = b.next().unwrap();
                        out.push((m, -c));
                    }
                    Ordering::Equal => {
                        let (m, x) = a.next().unwrap();
                        let (_, y) = b.next().unwrap();
                        let d = x - y;
                        if !d.is_zero() {
                            out.push((m, d));
                        }
                    }
                },
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (m, c) = b.next().unwrap();
                    out.push((m, -c));
                }
                (None, None) => break,
            }
        }
        Sorted { terms: out }
    }
}

/// Full reduction of `f` modulo `basis` (all monic).
fn reduce_sorted(f: &Sorted, basis: &[&Sorted], order: MonomialOrder) -> Sorted {
    let mut p = f.clone();
    let mut rem: Vec<(Monomial, Rational)> = Vec::new();
    while let Some((lm, lc)) = p.lead().cloned() {
        match basis.iter().find(|g| mono_divides(g.lm(), &lm)) {
            Some(g) => {
                let q = mono_div(&lm, g.lm());
                p = p.sub_scaled(&lc, &q, g, order);
            }
            None => {
                rem.push((lm, lc));
                p.terms.pop();
            }
        }
    }
    rem.reverse();
    Sorted { terms: rem }
}

/// Work limits; exceeding either aborts with [`Error::SizeGuard`].
#[derive(Clone, Copy, Debug)]
pub struct GroebnerLimits {
    pub max_basis: usize,
    pub max_pairs: usize,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits {
            max_basis: 400,
            max_pairs: 20_000,
        }
    }
}

/// A reduced Gröbner basis, monic and sorted by leading monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis {
    pub polys: Vec<MultiPoly>,
    pub order: MonomialOrder,
    pub nvars: usize,
}

pub fn buchberger(polys: &[MultiPoly], order: MonomialOrder) -> Result<GroebnerBasis> {
    buchberger_with_limits(polys, order, GroebnerLimits::default())
}

pub fn buchberger_with_limits(
    polys: &[MultiPoly],
    order: MonomialOrder,
    limits: GroebnerLimits,
) -> Result<GroebnerBasis> {
    let nvars = polys.iter().map(MultiPoly::num_vars).max().unwrap_or(0);
    let mut all: Vec<Sorted> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut processed = 0usize;

    let insert = |h: Sorted,
                  all: &mut Vec<Sorted>,
                  active: &mut Vec<usize>,
                  pairs: &mut Vec<(usize, usize)>|
     -> Result<()> {
        let hi = all.len();
        all.push(h);
        if all.len() > limits.max_basis {
            return Err(Error::SizeGuard(format!(
                "Gröbner basis grew beyond {} polynomials",
                limits.max_basis
            )));
        }
        gm_update(hi, all, active, pairs);
        Ok(())
    };

    for p in polys {
        let s = Sorted::new(p, order);
        let refs: Vec<&Sorted> = active.iter().map(|&i| &all[i]).collect();
        let mut r = reduce_sorted(&s, &refs, order);
        if r.is_zero() {
            continue;
        }
        r.monic();
        insert(r, &mut all, &mut active, &mut pairs)?;
    }

    while !pairs.is_empty() {
        processed += 1;
        if processed > limits.max_pairs {
            return Err(Error::SizeGuard(format!(
                "more than {} critical pairs",
                limits.max_pairs
            )));
        }
        let k = (0..pairs.len())
            .min_by(|&a, &b| {
                let la = mono_lcm(all[pairs[a].0].lm(), all[pairs[a].1].lm());
                let lb = mono_lcm(all[pairs[b].0].lm(), all[pairs[b].1].lm());
                order.cmp(&la, &lb)
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(k);
        let s = s_poly(&all[i], &all[j], order);
        let refs: Vec<&Sorted> = active.iter().map(|&i| &all[i]).collect();
        let mut r = reduce_sorted(&s, &refs, order);
        if r.is_zero() {
            continue;
        }
        r.monic();
        insert(r, &mut all, &mut active, &mut pairs)?;
    }

    Ok(GroebnerBasis {
        polys: interreduce(active.iter().map(|&i| all[i].clone()).collect(), order),
        order,
        nvars,
    })
}

fn s_poly(f: &Sorted, g: &Sorted, order: MonomialOrder) -> Sorted {
    let l = mono_lcm(f.lm(), g.lm());
    let a = mono_div(&l, f.lm());
    let b = mono_div(&l, g.lm());
    let fa = Sorted::default_zero().sub_scaled(&-Rational::one(), &a, f, order);
    fa.sub_scaled(&Rational::one(), &b, g, order)
}

impl Sorted {
    fn default_zero() -> Sorted {
        Sorted { terms: Vec::new() }
    }
}

/// Gebauer-Möller update for the new element `h`.
fn gm_update(h: usize, all: &[Sorted], active: &mut Vec<usize>, pairs: &mut Vec<(usize, usize)>) {
    let lh = all[h].lm().clone();
    let lcm_with = |g: usize| mono_lcm(&lh, all[g].lm());

    let mut c: Vec<usize> = active.clone();
    let mut d: Vec<usize> = Vec::new();
    while let Some(g1) = c.pop() {
        let l1 = lcm_with(g1);
        let coprime = mono_coprime(&lh, all[g1].lm());
        let dominated = c
            .iter()
            .chain(d.iter())
            .any(|&g2| mono_divides(&lcm_with(g2), &l1));
        if coprime || !dominated {
            d.push(g1);
        }
    }
    let e: Vec<(usize, usize)> = d
        .into_iter()
        .filter(|&g| !mono_coprime(&lh, all[g].lm()))
        .map(|g| (g, h))
        .collect();

    pairs.retain(|&(g1, g2)| {
        let l12 = mono_lcm(all[g1].lm(), all[g2].lm());
        !(mono_divides(&lh, &l12) && lcm_with(g1) != l12 && lcm_with(g2) != l12)
    });
    pairs.extend(e);

    active.retain(|&g| !mono_divides(&lh, all[g].lm()));
    active.push(h);
}

fn interreduce(mut g: Vec<Sorted>, order: MonomialOrder) -> Vec<MultiPoly> {
    g.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    let mut keep: Vec<Sorted> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let redundant = g
            .iter()
            .enumerate()
            .any(|(j, q)| j != i && mono_divides(q.lm(), p.lm()) && (q.lm() != p.lm() || j < i));
        if !redundant {
            keep.push(p.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<&Sorted> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, q)| q)
            .collect();
        let mut r = reduce_sorted(&keep[i], &others, order);
        r.monic();
        out.push(r.to_poly());
    }
    out
}

impl GroebnerBasis {
    pub fn reduce(&self, f: &MultiPoly) -> MultiPoly {
        let sorted: Vec<Sorted> = self
            .polys
            .iter()
            .map(|p| Sorted::new(p, self.order))
            .collect();
        let refs: Vec<&Sorted> = sorted.iter().collect();
        reduce_sorted(&Sorted::new(f, self.order), &refs, self.order).to_poly()
    }

    pub fn contains(&self, f: &MultiPoly) -> bool {
        self.reduce(f).is_zero()
    }

    /// True when the ideal is the whole ring (no solutions at all).
    pub fn is_trivial(&self) -> bool {
        self.polys.iter().any(MultiPoly::is_constant)
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys
            .iter()
            .filter_map(|p| p.leading(self.order).map(|(m, _)| m.clone()))
            .collect()
    }

    /// Variable sets `S` of maximal size such that no leading monomial lives
    /// in the variables of `S` alone. Their size is the dimension of the
    /// variety.
    pub fn maximal_independent_sets(&self) -> Vec<Vec<usize>> {
        if self.is_trivial() {
            return Vec::new();
        }
        let lms = self.leading_monomials();
        let n = self.nvars;
        let mut best: Vec<Vec<usize>> = Vec::new();
        let mut best_size = 0;
        for mask in 0u64..(1u64 << n) {
            let size = mask.count_ones() as usize;
            if size < best_size {
                continue;
            }
            let inside = |m: &Monomial| {
                m.iter()
                    .enumerate()
                    .all(|(i, &e)| e == 0 || mask & (1 << i) != 0)
            };
            if lms.iter().any(inside) {
                continue;
            }
            let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if size > best_size {
                best_size = size;
                best.clear();
            }
            best.push(set);
        }
        best.sort();
        best
    }

    /// Dimension of the variety, `None` when it is empty.
    pub fn dimension(&self) -> Option<usize> {
        self.maximal_independent_sets().first().map(Vec::len)
    }

    pub fn is_zero_dimensional(&self) -> bool {
        !self.is_trivial()
            && (0..self.nvars).all(|i| {
                self.leading_monomials()
                    .iter()
                    .any(|m| m.iter().enumerate().all(|(j, &e)| (j == i) == (e > 0)))
            })
    }

    /// Monomials outside the initial ideal, for zero-dimensional ideals.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        if !self.is_zero_dimensional() {
            return None;
        }
        let lms = self.leading_monomials();
        let mut out = Vec::new();
        let mut stack: Vec<Monomial> = vec![Vec::new()];
        let mut seen = HashSet::new();
        while let Some(m) = stack.pop() {
            if !seen.insert(m.clone()) || lms.iter().any(|l| mono_divides(l, &m)) {
                continue;
            }
            for i in 0..self.nvars {
                stack.push(mono_mul(&m, &unit(i)));
            }
            out.push(m);
        }
        out.sort_by(|a, b| self.order.cmp(a, b));
        Some(out)
    }

    /// Number of standard monomials, i.e. complex solutions counted with
    /// multiplicity, for zero-dimensional ideals.
    pub fn solution_count(&self) -> Option<usize> {
        self.standard_monomials().map(|v| v.len())
    }

    /// Converts a zero-dimensional basis to another order by linear algebra
    /// on the quotient ring (FGLM).
    pub fn convert(&self, target: MonomialOrder) -> Result<GroebnerBasis> {
        if target == self.order {
            return Ok(self.clone());
        }
        if !self.is_zero_dimensional() {
            return Err(Error::InvalidParams(
                "order conversion needs a zero-dimensional ideal".into(),
            ));
        }
        let sorted: Vec<Sorted> = self
            .polys
            .iter()
            .map(|p| Sorted::new(p, self.order))
            .collect();
        let refs: Vec<&Sorted> = sorted.iter().collect();
        // NF(x_i m) is computed from the cached NF(m), whose terms are all
        // standard, so each reduction is short.
        let mut cache: HashMap<Monomial, Sorted> = HashMap::new();
        let mut normal_form = |m: &Monomial| -> BTreeMap<Monomial, Rational> {
            let parent = (0..self.nvars).find_map(|i| {
                let u = unit(i);
                if !mono_divides(&u, m) {
                    return None;
                }
                cache.get(&mono_div(m, &u)).map(|nf| (u, nf))
            });
            let f = match parent {
                Some((u, nf)) => {
                    let mut terms: Vec<(Monomial, Rational)> = nf
                        .terms
                        .iter()
                        .map(|(k, c)| (mono_mul(k, &u), c.clone()))
                        .collect();
                    terms.sort_by(|a, b| self.order.cmp(&a.0, &b.0));
                    Sorted { terms }
                }
                None => Sorted {
                    terms: vec![(m.clone(), Rational::one())],
                },
            };
            let nf = reduce_sorted(&f, &refs, self.order);
            let out = nf.terms.iter().cloned().collect();
            cache.insert(m.clone(), nf);
            out
        };

        // Echelon rows: pivot monomial, reduced normal form, and the
        // combination of staircase monomials that produced it.
        let mut rows: Vec<(
            Monomial,
            BTreeMap<Monomial, Rational>,
            BTreeMap<Monomial, Rational>,
        )> = Vec::new();
        let mut lms: Vec<Monomial> = Vec::new();
        let mut out: Vec<MultiPoly> = Vec::new();
        let mut candidates: Vec<Monomial> = vec![Vec::new()];
        let mut seen = HashSet::new();
        while !candidates.is_empty() {
            candidates.sort_by(|a, b| target.cmp(b, a));
            let m = candidates.pop().unwrap();
            if !seen.insert(m.clone()) || lms.iter().any(|l| mono_divides(l, &m)) {
                continue;
            }
            let mut v = normal_form(&m);
            let mut combo: BTreeMap<Monomial, Rational> = BTreeMap::new();
            combo.insert(m.clone(), Rational::one());
            for (pivot, row, rc) in &rows {
                let Some(f) = v.get(pivot).cloned() else {
                    continue;
                };
                axpy(&mut v, &f, row);
                axpy(&mut combo, &f, rc);
            }
            if v.is_empty() {
                out.push(MultiPoly::from_terms(combo));
                lms.push(m);
                continue;
            }
            let (pivot, lead) = v
                .iter()
                .next_back()
                .map(|(k, c)| (k.clone(), c.clone()))
                .unwrap();
            let inv = lead.recip();
            v.values_mut().for_each(|c| *c *= &inv);
            combo.values_mut().for_each(|c| *c *= &inv);
            for (_, row, rc) in rows.iter_mut() {
                if let Some(f) = row.get(&pivot).cloned() {
                    axpy(row, &f, &v);
                    axpy(rc, &f, &combo);
                }
            }
            rows.push((pivot, v, combo));
            for i in 0..self.nvars {
                candidates.push(mono_mul(&m, &unit(i)));
            }
        }
        out.sort_by(|a, b| target.cmp(a.leading(target).unwrap().0, b.leading(target).unwrap().0));
        let out = out.into_iter().map(|p| p.monic(target)).collect();
        Ok(GroebnerBasis {
            polys: out,
            order: target,
            nvars: self.nvars,
        })
    }
}

fn unit(i: usize) -> Monomial {
    let mut u = vec![0; i + 1];
    u[i] = 1;
    u
}

/// `v -= f * w`.
fn axpy(v: &mut BTreeMap<Monomial, Rational>, f: &Rational, w: &BTreeMap<Monomial, Rational>) {
    for (m, c) in w {
        let e = v.entry(m.clone()).or_insert_with(Rational::zero);
        *e -= f * c;
        if e.is_zero() {
            v.remove(m);
        }
    }
}
