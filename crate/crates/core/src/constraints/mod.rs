//! Order conditions as exact polynomials in the slot values, Gröbner-basis
//! analysis of the resulting ideal, and constraint counting.

mod groebner;
pub mod modp;
mod poly;
#[cfg(test)]
mod tests;
mod univariate;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub use groebner::{buchberger, buchberger_with_limits, GroebnerBasis, GroebnerLimits};
pub use modp::Fp;
pub use poly::{Monomial, MonomialOrder, MultiPoly};
pub use univariate::UPoly;

use crate::error::{Error, Result};
use crate::free_algebra::{Alphabet, DenseSeries};
use crate::hall::{witt_dimension, HallBasis};
use crate::scalar::Rational;
use crate::schemes::{Family, Scheme};

/// Upper bound on `C(ν+p, p) · n^p`, a proxy for the work of the symbolic
/// expansion.
pub const SYMBOLIC_GUARD: u128 = 300_000;

/// Upper bound on `m · n^p · points` for the modular rank counts.
pub const COUNT_GUARD: u128 = 2_000_000_000;

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Order conditions of a scheme: every slot is a variable (template closures
/// are not substituted), one polynomial per linearly independent Hall
/// coordinate of degree `<= p`.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    scheme: Scheme,
    p: u32,
    variables: Vec<String>,
    polys: Vec<MultiPoly>,
    hall_labels: Vec<String>,
    degrees: Vec<u32>,
    dropped: usize,
}

impl ConstraintSystem {
    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn hall_labels(&self) -> &[String] {
        &self.hall_labels
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Coordinates that were zero or linearly dependent on earlier ones of
    /// the same degree.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Number of emitted polynomials of each degree `1..=p`.
    pub fn counts_by_degree(&self) -> Vec<usize> {
        (1..=self.p)
            .map(|k| self.degrees.iter().filter(|&&d| d == k).count())
            .collect()
    }

    /// Evaluates every polynomial at the given slot values.
    pub fn evaluate(&self, slot_values: &[f64]) -> Vec<f64> {
        self.polys.iter().map(|p| p.eval_f64(slot_values)).collect()
    }

    /// Plain-text export: variables on the first line, then one polynomial
    /// per line.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# {} order {}\nvariables: {}\n",
            self.scheme.name(),
            self.p,
            self.variables.join(", ")
        );
        for ((p, l), d) in self.polys.iter().zip(&self.hall_labels).zip(&self.degrees) {
            out.push_str(&format!(
                "# degree {d}, {l}\n{}\n",
                p.render(&self.variables, MonomialOrder::GrevLex)
            ));
        }
        out
    }
}

/// Keeps polynomials that are linearly independent of the ones seen so far.
#[derive(Default)]
struct LinearSpan {
    rows: Vec<(Monomial, BTreeMap<Monomial, Rational>)>,
}

impl LinearSpan {
    fn insert(&mut self, p: &MultiPoly) -> bool {
        let mut v: BTreeMap<Monomial, Rational> =
            p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        for (pivot, row) in &self.rows {
            let Some(f) = v.get(pivot).cloned() else {
                continue;
            };
            for (m, c) in row {
                let e = v.entry(m.clone()).or_insert_with(Rational::zero);
                *e -= &f * c;
            }
            v.retain(|_, c| !c.is_zero());
        }
        let Some((pivot, lead)) = v.iter().next().map(|(m, c)| (m.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.recip();
        for c in v.values_mut() {
            *c *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if let Some(f) = row.get(&pivot).cloned() {
                for (m, c) in &v {
                    let e = row.entry(m.clone()).or_insert_with(Rational::zero);
                    *e -= &f * c;
                }
                row.retain(|_, c| !c.is_zero());
            }
        }
        self.rows.push((pivot, v));
        true
    }
}

/// Expands `log U` with polynomial coefficients and reads off the order
/// conditions: degree-1 coordinates minus one, then all coordinates of degrees
/// `2..=p` (odd degrees only for symmetric schemes).
pub fn symbolic_log(scheme: &Scheme, p: u32) -> Result<ConstraintSystem> {
    if p == 0 {
        return Err(Error::InvalidParams("order p must be at least 1".into()));
    }
    let nu = scheme.nu() as u128;
    let work = binomial(nu + p as u128, p as u128) * (scheme.n() as u128).pow(p);
    if work > SYMBOLIC_GUARD {
        return Err(Error::SizeGuard(format!(
            "{} at order {p}: symbolic expansion estimate {work} exceeds {SYMBOLIC_GUARD}",
            scheme.name()
        )));
    }
    let vars: Vec<MultiPoly> = (0..scheme.nu()).map(MultiPoly::var).collect();
    let z = DenseSeries::exp_product(scheme.n(), p, &scheme.factor_values(&vars)).log()?;
    let alphabet = Arc::new(Alphabet::unit(scheme.n()));
    let basis = HallBasis::cached(&alphabet, p, &(0..scheme.n()).collect::<Vec<_>>())?;
    let mut polys = Vec::new();
    let mut hall_labels = Vec::new();
    let mut degrees = Vec::new();
    let mut dropped = 0;
    for k in 1..=p {
        if k > 1 && scheme.is_symmetric() && k % 2 == 0 {
            continue;
        }
        let mut span = LinearSpan::default();
        for (i, c) in basis.degree_range(k).zip(basis.dense_coordinates_at(&z, k)) {
            let c = if k == 1 { c - MultiPoly::one() } else { c };
            if span.insert(&c) {
                polys.push(c);
                hall_labels.push(basis.render(i));
                degrees.push(k);
            } else {
                dropped += 1;
            }
        }
    }
    Ok(ConstraintSystem {
        scheme: scheme.clone(),
        p,
        variables: scheme.slot_names(),
        polys,
        hall_labels,
        degrees,
        dropped,
    })
}

/// Result of [`analyze_freedom`].
#[derive(Clone, Debug)]
pub struct FreedomReport {
    /// Dimension of the solution variety; `None` when there are no solutions.
    pub free_count: Option<usize>,
    /// Every maximal set of slots that can be chosen freely.
    pub admissible_free_sets: Vec<Vec<String>>,
    pub suggested_free_slots: Vec<String>,
    pub zero_dimensional: bool,
    /// Complex solutions with multiplicity, when finite.
    pub solution_count: Option<usize>,
    /// Distinct real solutions, when finite and the lex basis is in shape
    /// position.
    pub real_solution_count: Option<usize>,
    pub real_solutions: Vec<Vec<f64>>,
    pub basis: GroebnerBasis,
}

impl FreedomReport {
    pub fn to_json(&self, variables: &[String]) -> Value {
        json!({
            "free_count": self.free_count,
            "admissible_free_sets": self.admissible_free_sets,
            "suggested_free_slots": self.suggested_free_slots,
            "zero_dimensional": self.zero_dimensional,
            "solution_count": self.solution_count,
            "real_solution_count": self.real_solution_count,
            "real_solutions": self.real_solutions,
            "groebner_order": self.basis.order.to_string(),
            "groebner_basis": self.basis.polys.iter()
                .map(|p| p.render(variables, self.basis.order))
                .collect::<Vec<_>>(),
        })
    }
}

/// Dimension, admissible free slots and, for finite solution sets, the
/// number of real solutions (via a lexicographic basis and Sturm sequences on
/// the eliminant).
pub fn analyze_freedom(cs: &ConstraintSystem) -> Result<FreedomReport> {
    let nvars = cs.variables.len();
    let mut grevlex = buchberger(&cs.polys, MonomialOrder::GrevLex)?;
    grevlex.nvars = nvars;
    let sets = admissible_sets(&cs.polys, &grevlex, nvars);
    let free_count = grevlex.dimension();
    let template_free = cs.scheme.free_slots();
    let suggested = sets
        .iter()
        .find(|s| s.iter().all(|i| template_free.contains(i)))
        .or(sets.first())
        .cloned()
        .unwrap_or_default();
    let name = |s: &Vec<usize>| {
        s.iter()
            .map(|&i| cs.variables[i].clone())
            .collect::<Vec<_>>()
    };
    let zero_dimensional = grevlex.is_zero_dimensional();
    let solution_count = grevlex.solution_count();

    let mut real_solution_count = None;
    let mut real_solutions = Vec::new();
    let mut basis = grevlex.clone();
    if zero_dimensional {
        let lex = grevlex.convert(MonomialOrder::Lex)?;
        if let Some((count, sols)) = shape_solutions(&lex, nvars) {
            real_solution_count = Some(count);
            real_solutions = sols;
        }
        basis = lex;
    }
    Ok(FreedomReport {
        free_count,
        admissible_free_sets: sets.iter().map(name).collect(),
        suggested_free_slots: name(&suggested),
        zero_dimensional,
        solution_count,
        real_solution_count,
        real_solutions,
        basis,
    })
}

/// Slot sets of size `dim` on which the ideal has no nonzero polynomial,
/// i.e. sets that can be prescribed freely. Each candidate is checked with a
/// lexicographic basis that lists its variables last; when that is too
/// expensive the sets read off the grevlex initial ideal are returned.
fn admissible_sets(polys: &[MultiPoly], grevlex: &GroebnerBasis, nvars: usize) -> Vec<Vec<usize>> {
    let fallback = grevlex.maximal_independent_sets();
    let Some(dim) = grevlex.dimension() else {
        return fallback;
    };
    if dim == 0 || binomial(nvars as u128, dim as u128) > 64 {
        return fallback;
    }
    let limits = GroebnerLimits {
        max_basis: 200,
        max_pairs: 4_000,
    };
    let mut out = Vec::new();
    for mask in 0u64..(1 << nvars) {
        if mask.count_ones() as usize != dim {
            continue;
        }
        let set: Vec<usize> = (0..nvars).filter(|i| mask & (1 << i) != 0).collect();
        let mut map = vec![0; nvars];
        for (k, i) in (0..nvars)
            .filter(|i| mask & (1 << i) == 0)
            .chain(set.iter().copied())
            .enumerate()
        {
            map[i] = k;
        }
        let permuted: Vec<MultiPoly> = polys.iter().map(|p| p.permute(&map)).collect();
        let Ok(lex) = buchberger_with_limits(&permuted, MonomialOrder::Lex, limits) else {
            return fallback;
        };
        let first = nvars - dim;
        if !lex.polys.iter().any(|p| (0..first).all(|j| !p.uses_var(j))) {
            out.push(set);
        }
    }
    out
}

/// Real solutions of a lex basis of the form `{x_i - g_i(x_last)} ∪ {f(x_last)}`.
fn shape_solutions(lex: &GroebnerBasis, nvars: usize) -> Option<(usize, Vec<Vec<f64>>)> {
    if nvars == 0 {
        return None;
    }
    let last = nvars - 1;
    let f = lex
        .polys
        .iter()
        .find_map(|p| p.as_univariate(last).filter(|c| c.len() > 1))?;
    let f = UPoly::new(f);
    if lex.polys.len() != nvars {
        return None;
    }
    let mut back: Vec<(usize, MultiPoly)> = Vec::new();
    for p in &lex.polys {
        if p.as_univariate(last).is_some() {
            continue;
        }
        let (lm, _) = p.leading(MonomialOrder::Lex)?;
        let i = lm.iter().position(|&e| e > 0)?;
        if lm
            .iter()
            .enumerate()
            .any(|(j, &e)| (j == i && e != 1) || (j != i && e != 0))
        {
            return None;
        }
        if (0..nvars).any(|j| j != i && j != last && p.uses_var(j)) {
            return None;
        }
        back.push((i, p.clone()));
    }
    let roots = f.real_roots(200);
    let mut sols = Vec::with_capacity(roots.len());
    for r in &roots {
        let mut point = vec![Rational::zero(); nvars];
        point[last] = r.clone();
        for (i, p) in &back {
            let rest = p.clone() - MultiPoly::var(*i);
            point[*i] = -rest.eval(&point);
        }
        sols.push(
            point
                .iter()
                .map(|x| x.to_f64().unwrap_or(f64::NAN))
                .collect(),
        );
    }
    Some((roots.len(), sols))
}

/// The number of independent order conditions through order `p` predicted by
/// free-Lie-algebra counting: plain Hall elements for N, odd degrees for S and
/// S-abc, odd degrees over generators of degrees 1,3,5,… for SL and over
/// generators of every degree for SE.
pub fn hall_accounting(n: usize, family: Family, p: u32) -> Result<usize> {
    let odd_graded = |degrees: Vec<u32>| -> Result<usize> {
        let alphabet = Arc::new(Alphabet::graded("Z", &degrees)?);
        let basis = HallBasis::new(alphabet, p, &(0..degrees.len()).collect::<Vec<_>>())?;
        Ok((1..=p).step_by(2).map(|k| basis.count(k)).sum())
    };
    match family {
        Family::N => Ok((1..=p).map(|k| witt_dimension(n as u64, k) as usize).sum()),
        Family::S | Family::SAbc => Ok((1..=p)
            .step_by(2)
            .map(|k| witt_dimension(n as u64, k) as usize)
            .sum()),
        Family::SL => odd_graded((1..=p).step_by(2).collect()),
        Family::SE => odd_graded((1..=p).collect()),
    }
}

/// Smallest `m` whose template has at least as many parameters as
/// [`hall_accounting`] predicts constraints.
pub fn min_factors(n: usize, family: Family, p: u32) -> Result<usize> {
    let need = hall_accounting(n, family, p)?;
    (1..100_000)
        .find(|&m| Scheme::build(n, family, m).is_ok_and(|s| s.nu() >= need))
        .ok_or_else(|| Error::SizeGuard(format!("no template with {need} parameters")))
}

/// Constraint ranks per degree measured on a concrete scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintCount {
    pub m: usize,
    pub nu: usize,
    /// Rank of the degree-`k` conditions, `k = 1..=p`.
    pub per_degree: Vec<usize>,
}

impl ConstraintCount {
    pub fn total(&self) -> usize {
        self.per_degree.iter().sum()
    }
}

/// Rank of the span of each degree's order-condition polynomials, measured
/// by evaluating `log U` modulo a large prime at random slot values.
pub fn measure_constraints(scheme: &Scheme, p: u32, seed: u64) -> Result<ConstraintCount> {
    if p == 0 {
        return Err(Error::InvalidParams("order p must be at least 1".into()));
    }
    let n = scheme.n();
    let widths: Vec<usize> = (1..=p)
        .map(|k| witt_dimension(n as u64, k) as usize)
        .collect();
    let points = widths.iter().copied().max().unwrap_or(0) + 4;
    let work = scheme.m() as u128 * (n as u128).pow(p) * points as u128 * p as u128;
    if work > COUNT_GUARD {
        return Err(Error::SizeGuard(format!(
            "{} at order {p}: rank count estimate {work} exceeds {COUNT_GUARD}",
            scheme.name()
        )));
    }
    let alphabet = Arc::new(Alphabet::unit(n));
    let basis = HallBasis::cached(&alphabet, p, &(0..n).collect::<Vec<_>>())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // columns[k-1][coord] = values across points
    let mut columns: Vec<Vec<Vec<Fp>>> = widths
        .iter()
        .map(|&w| vec![Vec::with_capacity(points); w])
        .collect();
    for _ in 0..points {
        let x: Vec<Fp> = (0..scheme.nu()).map(|_| Fp::new(rng.gen())).collect();
        let z = DenseSeries::exp_product(n, p, &scheme.factor_values(&x)).log()?;
        for k in 1..=p {
            for (j, c) in basis.dense_coordinates_at(&z, k).into_iter().enumerate() {
                let c = if k == 1 { c - Fp::one() } else { c };
                columns[k as usize - 1][j].push(c);
            }
        }
    }
    // Degree 1 conditions are affine; append the constant column so that
    // `Σa - 1` and `Σb - 1` are not mistaken for dependent.
    let per_degree = columns
        .into_iter()
        .enumerate()
        .map(|(k, mut rows)| {
            if k == 0 {
                for r in rows.iter_mut() {
                    r.push(-Fp::one());
                }
            }
            modp::rank(rows)
        })
        .collect();
    Ok(ConstraintCount {
        m: scheme.m(),
        nu: scheme.nu(),
        per_degree,
    })
}

/// Measures the constraint count of a family on the smallest template with
/// two parameters to spare over [`hall_accounting`].
pub fn family_constraint_count(
    n: usize,
    family: Family,
    p: u32,
    seed: u64,
) -> Result<ConstraintCount> {
    let need = hall_accounting(n, family, p)? + 2;
    let m = (1..100_000)
        .find(|&m| Scheme::build(n, family, m).is_ok_and(|s| s.nu() >= need))
        .ok_or_else(|| Error::SizeGuard(format!("no template with {need} parameters")))?;
    measure_constraints(&Scheme::build(n, family, m)?, p, seed)
}
