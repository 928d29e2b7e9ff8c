//! Numerical solution of the order conditions and multi-start minimization
//! of ε over the remaining free slots.

mod simplex;
#[cfg(test)]
mod tests;

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

pub use simplex::{nelder_mead, nelder_mead_restarted, SimplexOptions, SimplexResult};

use crate::constraints::{analyze_freedom, symbolic_log};
use crate::error::{Error, Result};
use crate::free_algebra::Alphabet;
use crate::hall::format_ordering;
use crate::schemes::{
    epsilon_value, epsilon_with_tolerance, order_conditions, verify_order, Chart, ErrorReport,
    Family, ParamAssignment, Provenance, Scheme,
};

/// Target for the order-condition residual (max-norm).
pub const RESIDUAL_TOL: f64 = 1e-12;
/// Tolerance used when checking reported minima with `verify_order`.
pub const VERIFY_TOL: f64 = 1e-10;
/// Minima closer than this in every slot are merged.
pub const DEDUP_DISTANCE: f64 = 1e-5;

const MAX_NEWTON: usize = 60;

/// Free slots named in the literature for the optimized schemes.
fn stated_free_slots(
    n: usize,
    family: Family,
    m: usize,
    p: u32,
    chart: Chart,
) -> Option<&'static [&'static str]> {
    use Family::*;
    Some(match (n, family, m, p, chart) {
        (2, S, 5, 2, _) => &["a1"],
        (2, S, 9, 4, _) => &["b1"],
        (2, SL, 11 | 13 | 19, _, _) => &["w2"],
        (2, S, 11, 4, _) => &["b1", "b2"],
        (2, S, 13, 4, _) => &["a2", "b2", "a3"],
        (2, SL, 23, 6, _) => &["w4", "w5"],
        (3, S, 9, 2, _) => &["a1", "b1"],
        (3, SAbc, 11, 2, _) => &["a1", "b1", "c1"],
        (3, S, 11, 2, _) => &["a1", "b1", "b2"],
        (3, SE, 17, 4, Chart::EulerPair) => &["r1"],
        (3, SE, 21, 4, Chart::EulerPair) => &["r1", "q2"],
        (3, SE, 25, 4, Chart::EulerPair) => &["u", "r1", "r2"],
        (3, SL, 21 | 25, 4, _) => &["w2"],
        (3, SL, 37, 6, _) => &["w4"],
        _ => return None,
    })
}

/// Number of independent order conditions beyond the template closures,
/// measured as the rank of their Jacobian at a seeded random point.
pub fn active_constraints(scheme: &Scheme, p: u32, seed: u64) -> Result<usize> {
    let t = scheme.free_slots().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<f64> = (0..t).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let all: Vec<usize> = (0..t).collect();
    let j = jacobian(scheme, p, &x, &all)?;
    if j.nrows() == 0 || j.ncols() == 0 {
        return Ok(0);
    }
    let scale = j.norm().max(1.0);
    Ok(j.svd(false, false).rank(1e-7 * scale))
}

fn residual(scheme: &Scheme, p: u32, template_free: &[f64]) -> Result<Vec<f64>> {
    let values = scheme.resolve(template_free)?;
    order_conditions(scheme, &values, p)
}

/// Central-difference Jacobian of the order conditions with respect to the
/// template-free coordinates listed in `cols`.
fn jacobian(scheme: &Scheme, p: u32, x: &[f64], cols: &[usize]) -> Result<DMatrix<f64>> {
    let r0 = residual(scheme, p, x)?;
    let mut j = DMatrix::zeros(r0.len(), cols.len());
    for (c, &i) in cols.iter().enumerate() {
        let h = 1e-6 * x[i].abs().max(1.0);
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[i] += h;
        xm[i] -= h;
        let rp = residual(scheme, p, &xp)?;
        let rm = residual(scheme, p, &xm)?;
        for r in 0..r0.len() {
            j[(r, c)] = (rp[r] - rm[r]) / (2.0 * h);
        }
    }
    Ok(j)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// A point on the constraint manifold.
#[derive(Clone, Debug)]
pub struct ManifoldPoint {
    /// Values of the template-free slots, in template order.
    pub template_free: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Splits the template-free slots into the chosen free ones and the
/// dependent ones that Newton solves for.
#[derive(Clone, Debug)]
pub struct Chooser {
    free: Vec<usize>,
    dependent: Vec<usize>,
}

impl Chooser {
    /// `free_slots` are slot indices; each must be free in the template.
    pub fn new(scheme: &Scheme, free_slots: &[usize]) -> Result<Chooser> {
        let tf = scheme.free_slots();
        let mut free = Vec::new();
        for s in free_slots {
            let pos = tf.iter().position(|t| t == s).ok_or_else(|| {
                Error::InvalidParams(format!(
                    "slot {} is fixed by the template",
                    scheme.slot_names()[*s]
                ))
            })?;
            if free.contains(&pos) {
                return Err(Error::InvalidParams("free slot listed twice".into()));
            }
            free.push(pos);
        }
        let dependent = (0..tf.len()).filter(|i| !free.contains(i)).collect();
        Ok(Chooser { free, dependent })
    }

    pub fn num_free(&self) -> usize {
        self.free.len()
    }

    pub fn num_dependent(&self) -> usize {
        self.dependent.len()
    }

    fn assemble(&self, free: &[f64], dep: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.free.len() + self.dependent.len()];
        for (i, v) in self.free.iter().zip(free) {
            x[*i] = *v;
        }
        for (i, v) in self.dependent.iter().zip(dep) {
            x[*i] = *v;
        }
        x
    }

    fn dependent_part(&self, x: &[f64]) -> Vec<f64> {
        self.dependent.iter().map(|&i| x[i]).collect()
    }
}

/// Gauss-Newton on the order conditions in the dependent slots with the free
/// ones held fixed, starting from `guess`.
pub fn solve_dependent(
    scheme: &Scheme,
    p: u32,
    chooser: &Chooser,
    free: &[f64],
    guess: &[f64],
) -> Result<ManifoldPoint> {
    if free.len() != chooser.num_free() || guess.len() != chooser.num_dependent() {
        return Err(Error::DimensionMismatch(format!(
            "expected {} free and {} dependent values",
            chooser.num_free(),
            chooser.num_dependent()
        )));
    }
    let mut x = chooser.assemble(free, guess);
    let mut r = residual(scheme, p, &x)?;
    let mut norm = max_abs(&r);
    let mut iterations = 0;
    while norm > RESIDUAL_TOL {
        if iterations == MAX_NEWTON || !norm.is_finite() {
            return Err(Error::NoConvergence(format!(
                "residual {norm:e} after {iterations} Newton steps"
            )));
        }
        if chooser.dependent.is_empty() {
            return Err(Error::NoConvergence(format!(
                "no dependent slots and residual {norm:e}"
            )));
        }
        iterations += 1;
        let j = jacobian(scheme, p, &x, &chooser.dependent)?;
        let svd = j.svd(true, true);
        let smax = svd.singular_values.max();
        if svd.singular_values.min() <= 1e-13 * smax.max(1.0) {
            return Err(Error::SingularJacobian);
        }
        let step = svd
            .solve(&DVector::from_column_slice(&r), 0.0)
            .map_err(|_| Error::SingularJacobian)?;
        // Halve the step until the residual decreases.
        let mut t = 1.0;
        loop {
            let mut trial = x.clone();
            for (k, &i) in chooser.dependent.iter().enumerate() {
                trial[i] -= t * step[k];
            }
            let rt = residual(scheme, p, &trial)?;
            let nt = max_abs(&rt);
            if nt < norm || t < 1e-3 {
                if nt >= norm && norm <= 1e3 * RESIDUAL_TOL {
                    // Roundoff floor just above the target.
                    return Err(Error::NoConvergence(format!(
                        "residual stalled at {norm:e}"
                    )));
                }
                x = trial;
                r = rt;
                norm = nt;
                break;
            }
            t *= 0.5;
        }
    }
    Ok(ManifoldPoint {
        template_free: x,
        residual: norm,
        iterations,
    })
}

/// Solves for the dependent slots given values of the chosen free slots.
/// The initial guess for the dependent slots is `guess` when given, else a
/// sequence of seeded random points in `[-1.5, 1.5]`.
pub fn solve_on_manifold(
    scheme: &Scheme,
    p: u32,
    free_slots: &[usize],
    free_values: &[f64],
    guess: Option<&[f64]>,
    seed: u64,
) -> Result<ParamAssignment<f64>> {
    let chooser = Chooser::new(scheme, free_slots)?;
    let point = match guess {
        Some(g) => solve_dependent(scheme, p, &chooser, free_values, g)?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut last = Error::NoConvergence("no attempts".into());
            let mut found = None;
            for _ in 0..32 {
                let g: Vec<f64> = (0..chooser.num_dependent())
                    .map(|_| rng.gen_range(-1.5..1.5))
                    .collect();
                match solve_dependent(scheme, p, &chooser, free_values, &g) {
                    Ok(pt) => {
                        found = Some(pt);
                        break;
                    }
                    Err(e) => last = e,
                }
            }
            found.ok_or(last)?
        }
    };
    ParamAssignment::from_free(
        scheme,
        &point.template_free,
        Provenance::Optimized {
            seed,
            detail: "solve_on_manifold".into(),
        },
    )
}

/// How starting points are produced.
#[derive(Clone, Debug)]
pub enum Starts {
    /// Halton points in the search box; dependent guesses from the seed.
    Sampled(usize),
    /// Explicit free-slot values.
    Explicit(Vec<Vec<f64>>),
}

#[derive(Clone, Debug)]
pub struct OptimizationProblem {
    pub scheme: Scheme,
    pub p: u32,
    /// Slot indices varied by the search.
    pub free_slots: Vec<usize>,
    pub starts: Starts,
    pub bounds: (f64, f64),
    pub seed: u64,
    pub simplex: SimplexOptions,
}

impl OptimizationProblem {
    /// Problem with default free slots, start count and search box.
    pub fn new(scheme: Scheme, p: u32) -> Result<Self> {
        let free_slots = default_free_slots(&scheme, p)?;
        let starts = Starts::Sampled(default_start_count(free_slots.len()));
        Ok(OptimizationProblem {
            scheme,
            p,
            free_slots,
            starts,
            bounds: (-1.5, 1.5),
            seed: 0,
            simplex: SimplexOptions::default(),
        })
    }

    pub fn with_free_slot_names(mut self, names: &[&str]) -> Result<Self> {
        self.free_slots = names
            .iter()
            .map(|n| {
                self.scheme
                    .slot_index(n)
                    .ok_or_else(|| Error::InvalidParams(format!("no slot named {n}")))
            })
            .collect::<Result<_>>()?;
        Ok(self)
    }

    pub fn with_starts(mut self, starts: Starts) -> Self {
        self.starts = starts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Checks that the free-slot count matches the number of template-free
    /// slots minus the independent order conditions.
    pub fn validate(&self) -> Result<()> {
        let chooser = Chooser::new(&self.scheme, &self.free_slots)?;
        let c = active_constraints(&self.scheme, self.p, self.seed)?;
        if chooser.num_dependent() != c {
            return Err(Error::InvalidParams(format!(
                "{} at order {} has {} independent conditions on {} template-free slots; {} free slots chosen",
                self.scheme.name(),
                self.p,
                c,
                self.scheme.free_slots().len(),
                chooser.num_free()
            )));
        }
        Ok(())
    }

    fn free_names(&self) -> Vec<String> {
        let names = self.scheme.slot_names();
        self.free_slots.iter().map(|&i| names[i].clone()).collect()
    }
}

/// 200 starts for up to two free slots, 2000 for three or more, one when
/// there is nothing to vary.
pub fn default_start_count(free: usize) -> usize {
    match free {
        0 => 1,
        1 | 2 => 200,
        _ => 2000,
    }
}

/// Free slots from the literature when known, else the Gröbner suggestion,
/// else the last template-free slots.
pub fn default_free_slots(scheme: &Scheme, p: u32) -> Result<Vec<usize>> {
    if let Some(names) =
        stated_free_slots(scheme.n(), scheme.family(), scheme.m(), p, scheme.chart())
    {
        return names
            .iter()
            .map(|n| {
                scheme
                    .slot_index(n)
                    .ok_or_else(|| Error::InvalidScheme(format!("no slot {n}")))
            })
            .collect();
    }
    let tf = scheme.free_slots();
    let c = active_constraints(scheme, p, 0)?;
    let f = tf.len().saturating_sub(c);
    if let Ok(cs) = symbolic_log(scheme, p) {
        if let Ok(report) = analyze_freedom(&cs) {
            let names = scheme.slot_names();
            let idx: Vec<usize> = report
                .suggested_free_slots
                .iter()
                .filter_map(|n| names.iter().position(|x| x == n))
                .collect();
            if idx.len() == f && idx.iter().all(|i| tf.contains(i)) {
                return Ok(idx);
            }
        }
    }
    Ok(tf[tf.len() - f..].to_vec())
}

/// Per-start record.
#[derive(Clone, Debug)]
pub struct StartTrace {
    pub index: usize,
    pub start: Vec<f64>,
    pub converged: bool,
    pub evaluations: usize,
    pub epsilon: Option<f64>,
    pub message: Option<String>,
}

/// A local minimum: slot values and the full error report.
#[derive(Clone, Debug)]
pub struct Minimum {
    pub free_values: Vec<f64>,
    pub params: ParamAssignment<f64>,
    pub report: ErrorReport<f64>,
    /// Starts that ended here.
    pub hits: usize,
}

#[derive(Clone, Debug)]
pub struct OptimizationResult {
    pub scheme: Scheme,
    pub p: u32,
    pub free_slot_names: Vec<String>,
    pub seed: u64,
    /// Sorted by ε, then parameters.
    pub minima: Vec<Minimum>,
    pub diagnostics: Vec<StartTrace>,
    pub wall_seconds: f64,
}

impl OptimizationResult {
    pub fn best(&self) -> &Minimum {
        &self.minima[0]
    }

    pub fn to_json(&self) -> Value {
        let alphabet = Alphabet::unit(self.scheme.n());
        let names = self.scheme.slot_names();
        json!({
            "scheme": self.scheme.name(),
            "order": self.p,
            "free_slots": self.free_slot_names,
            "seed": self.seed,
            "starts": self.diagnostics.len(),
            "failed_starts": self.diagnostics.iter().filter(|d| d.epsilon.is_none()).count(),
            "wall_seconds": self.wall_seconds,
            "minima": self.minima.iter().map(|m| json!({
                "epsilon": m.report.epsilon,
                "ordering": format_ordering(&alphabet, &m.report.ordering_best),
                "free_values": m.free_values,
                "slots": names.iter().zip(m.params.values()).map(|(n, v)| json!([n, v])).collect::<Vec<_>>(),
                "hits": m.hits,
                "report": m.report.to_json(&alphabet),
            })).collect::<Vec<_>>(),
        })
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Halton point `i` (skipping the origin) scaled into `[lo, hi]^dim`.
pub fn halton(i: usize, dim: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..dim)
        .map(|k| lo + (hi - lo) * radical_inverse(i as u64 + 1, PRIMES[k % PRIMES.len()]))
        .collect()
}

struct Outcome {
    trace: StartTrace,
    point: Option<(Vec<f64>, Vec<f64>, f64)>,
}

fn run_start(
    prob: &OptimizationProblem,
    chooser: &Chooser,
    index: usize,
    start: Vec<f64>,
) -> Outcome {
    let mut rng =
        ChaCha8Rng::seed_from_u64(prob.seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let (lo, hi) = prob.bounds;
    let mut first = None;
    let mut message = None;
    for _ in 0..16 {
        let g: Vec<f64> = (0..chooser.num_dependent())
            .map(|_| rng.gen_range(lo..hi))
            .collect();
        match solve_dependent(&prob.scheme, prob.p, chooser, &start, &g) {
            Ok(pt) => {
                first = Some(pt);
                break;
            }
            Err(e) => message = Some(e.to_string()),
        }
    }
    let Some(first) = first else {
        let trace = StartTrace {
            index,
            start,
            converged: false,
            evaluations: 0,
            epsilon: None,
            message,
        };
        return Outcome { trace, point: None };
    };

    // Warm-start every probe from the dependent values of the best point
    // seen so far, which keeps the search on one solution branch.
    let mut anchor = chooser.dependent_part(&first.template_free);
    let mut anchor_value = f64::INFINITY;
    let objective = |x: &[f64]| -> f64 {
        let Ok(pt) = solve_dependent(&prob.scheme, prob.p, chooser, x, &anchor) else {
            return f64::INFINITY;
        };
        let Ok(values) = prob.scheme.resolve(&pt.template_free) else {
            return f64::INFINITY;
        };
        let Ok((eps, _)) = epsilon_value(&prob.scheme, &values, prob.p) else {
            return f64::INFINITY;
        };
        if eps < anchor_value {
            anchor_value = eps;
            anchor = chooser.dependent_part(&pt.template_free);
        }
        eps
    };
    let res = nelder_mead_restarted(objective, &start, prob.simplex, 8);
    if !res.value.is_finite() {
        let trace = StartTrace {
            index,
            start,
            converged: false,
            evaluations: res.evals,
            epsilon: None,
            message: Some("objective infeasible".into()),
        };
        return Outcome { trace, point: None };
    }
    let final_point = solve_dependent(&prob.scheme, prob.p, chooser, &res.x, &anchor).ok();
    let point = final_point.map(|pt| (res.x.clone(), pt.template_free, res.value));
    let trace = StartTrace {
        index,
        start,
        converged: res.converged,
        evaluations: res.evals,
        epsilon: point.as_ref().map(|p| p.2),
        message: None,
    };
    Outcome { trace, point }
}

/// Multi-start simplex descent of ε on the constraint manifold.
pub fn minimize_epsilon(prob: &OptimizationProblem) -> Result<OptimizationResult> {
    let t0 = Instant::now();
    let chooser = Chooser::new(&prob.scheme, &prob.free_slots)?;
    let f = chooser.num_free();
    let starts: Vec<Vec<f64>> = match &prob.starts {
        Starts::Sampled(k) => (0..*k.max(&1))
            .map(|i| halton(i, f, prob.bounds.0, prob.bounds.1))
            .collect(),
        Starts::Explicit(v) => {
            if let Some(bad) = v.iter().find(|s| s.len() != f) {
                return Err(Error::DimensionMismatch(format!(
                    "start {bad:?} needs {f} values"
                )));
            }
            v.clone()
        }
    };
    let outcomes: Vec<Outcome> = starts
        .into_par_iter()
        .enumerate()
        .map(|(i, s)| run_start(prob, &chooser, i, s))
        .collect();

    let mut candidates: Vec<(Vec<f64>, Vec<f64>, f64)> =
        outcomes.iter().filter_map(|o| o.point.clone()).collect();
    candidates.sort_by(|a, b| {
        a.2.total_cmp(&b.2)
            .then_with(|| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
    });

    let mut minima: Vec<Minimum> = Vec::new();
    let mut kept_values: Vec<Vec<f64>> = Vec::new();
    for (free, tf, _) in candidates {
        let params = ParamAssignment::from_free(
            &prob.scheme,
            &tf,
            Provenance::Optimized {
                seed: prob.seed,
                detail: format!("{} p={}", prob.scheme.name(), prob.p),
            },
        )?;
        let values = params.values().to_vec();
        if let Some(k) = kept_values.iter().position(|v| {
            max_abs(
                &v.iter()
                    .zip(&values)
                    .map(|(a, b)| a - b)
                    .collect::<Vec<_>>(),
            ) <= DEDUP_DISTANCE
        }) {
            minima[k].hits += 1;
            continue;
        }
        let (ok, _) = verify_order(&prob.scheme, &params, prob.p, VERIFY_TOL)?;
        if !ok {
            continue;
        }
        let report = epsilon_with_tolerance(&prob.scheme, &params, prob.p, VERIFY_TOL)?;
        kept_values.push(values);
        minima.push(Minimum {
            free_values: free,
            params,
            report,
            hits: 1,
        });
    }
    if minima.is_empty() {
        let why = outcomes
            .iter()
            .find_map(|o| o.trace.message.clone())
            .unwrap_or_else(|| "no feasible start".into());
        return Err(Error::OptimizationFailed(format!(
            "all {} starts failed: {why}",
            outcomes.len()
        )));
    }
    Ok(OptimizationResult {
        scheme: prob.scheme.clone(),
        p: prob.p,
        free_slot_names: prob.free_names(),
        seed: prob.seed,
        minima,
        diagnostics: outcomes.into_iter().map(|o| o.trace).collect(),
        wall_seconds: t0.elapsed().as_secs_f64(),
    })
}
