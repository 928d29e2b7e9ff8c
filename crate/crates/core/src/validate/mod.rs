//! Dense-matrix checks of decompositions on concrete generators.
//!
//! Exponentials use nalgebra's scaling-and-squaring Padé routine; operator
//! norms are largest singular values.


use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, InteractionGraph, Strategy};
use crate::schemes::{lookup, Scheme};

pub type CMatrix = DMatrix<Complex64>;

pub const MAX_DIM: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorClass {
    RandomAntihermitian,
    RandomGeneral,
    /// `-i` times Heisenberg couplings on an open chain, split by the lattice
    /// partition: even/odd bonds for two terms, three-site groups of a
    /// chain with next-nearest couplings for three.
    SpinChainEvenOdd,
    /// Diagonal matrices, so every pair commutes exactly.
    CommutingPair,
}

impl GeneratorClass {
    pub const ALL: [GeneratorClass; 4] = [
        GeneratorClass::RandomAntihermitian,
        GeneratorClass::RandomGeneral,
        GeneratorClass::SpinChainEvenOdd,
        GeneratorClass::CommutingPair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorClass::RandomAntihermitian => "random-antihermitian",
            GeneratorClass::RandomGeneral => "random-general",
            GeneratorClass::SpinChainEvenOdd => "spin-chain-even-odd",
            GeneratorClass::CommutingPair => "commuting-pair",
        }
    }
}

impl fmt::Display for GeneratorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneratorClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown generator class `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub n: usize,
    pub dim: usize,
    pub class: GeneratorClass,
    pub seed: u64,
    pub matrices: Vec<CMatrix>,
}

impl GeneratorSet {
    pub fn sum(&self) -> CMatrix {
        self.matrices
            .iter()
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, m| acc + m)
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    })
}

fn unit_norm(m: CMatrix) -> CMatrix {
    let s = op_norm(&m);
    if s > 0.0 {
        m.unscale(s)
    } else {
        m
    }
}

/// Heisenberg coupling `XX + YY + ZZ` between sites `i` and `j` of an
/// `l`-site spin-1/2 chain, added into `out` with weight `w`.
fn add_heisenberg(out: &mut CMatrix, l: usize, i: usize, j: usize, w: Complex64) {
    let (bi, bj) = (l - 1 - i, l - 1 - j);
    for s in 0..1usize << l {
        let (si, sj) = ((s >> bi) & 1, (s >> bj) & 1);
        if si == sj {
            out[(s, s)] += w;
        } else {
            out[(s, s)] -= w;
            let flipped = s ^ (1 << bi) ^ (1 << bj);
            out[(flipped, s)] += w * 2.0;
        }
    }
}

fn spin_chain(n: usize, dim: usize) -> Result<Vec<CMatrix>> {
    let l = dim.trailing_zeros() as usize;
    if !dim.is_power_of_two() || !(4..=10).contains(&l) {
        return Err(Error::UnsupportedGenerators(format!(
            "spin chain needs dim = 2^L with 4 ≤ L ≤ 10 (and dim ≤ {MAX_DIM}), got {dim}"
        )));
    }
    let (graph, strategy, couplings) = match n {
        2 => (
            InteractionGraph::chain(l, 1, false, false),
            Strategy::BondParity,
            [1.0, 0.0],
        ),
        _ => (
            InteractionGraph::chain(l, 2, false, false),
            Strategy::ChainTriples,
            [1.0, 0.5],
        ),
    };
    let part = lattice::partition(&graph, strategy)?;
    if part.n() != n {
        return Err(Error::UnsupportedGenerators(format!(
            "chain of {l} sites splits into {} groups",
            part.n()
        )));
    }
    let mut mats = Vec::with_capacity(n);
    for k in 0..n {
        let mut m = CMatrix::zeros(dim, dim);
        for i in part.group_interactions(k) {
            let int = &graph.interactions()[i];
            let w = couplings[(int[1] - int[0]) - 1];
            add_heisenberg(&mut m, l, int[0], int[1], Complex64::new(0.0, -w));
        }
        mats.push(m);
    }
    Ok(mats)
}

/// Seeded test generators. Random classes are normalized to unit operator
/// norm; the spin chain is scaled so its largest term has unit norm.
pub fn build_generators(
    class: GeneratorClass,
    n: usize,
    dim: usize,
    seed: u64,
) -> Result<GeneratorSet> {
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedGenerators(format!("n = {n}")));
    }
    if !(2..=MAX_DIM).contains(&dim) {
        return Err(Error::UnsupportedGenerators(format!(
            "dim {dim} outside 2..={MAX_DIM}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrices = match class {
        GeneratorClass::RandomGeneral => (0..n)
            .map(|_| unit_norm(random_matrix(&mut rng, dim)))
            .collect(),
        GeneratorClass::RandomAntihermitian => (0..n)
            .map(|_| {
                let g = random_matrix(&mut rng, dim);
                unit_norm((&g - g.adjoint()).scale(0.5))
            })
            .collect(),
        GeneratorClass::CommutingPair => (0..n)
            .map(|_| {
                let diag = random_matrix(&mut rng, dim).diagonal();
                unit_norm(CMatrix::from_diagonal(&diag))
            })
            .collect(),
        GeneratorClass::SpinChainEvenOdd => {
            let mats = spin_chain(n, dim)?;
            let s = mats.iter().map(op_norm).fold(0.0, f64::max);
            mats.into_iter().map(|m| m.unscale(s)).collect()
        }
    };
    Ok(GeneratorSet {
        n,
        dim,
        class,
        seed,
        matrices,
    })
}

/// Largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

pub fn expm(m: &CMatrix) -> CMatrix {
    m.exp()
}

/// `Π_k exp(x_k t G_{g_k})` in factor order. Repeated factors share one
/// exponential.
pub fn apply_scheme(
    scheme: &Scheme,
    slot_values: &[f64],
    gens: &GeneratorSet,
    t: f64,
) -> Result<CMatrix> {
    if scheme.n() != gens.n {
        return Err(Error::DimensionMismatch(format!(
            "scheme has n = {}, generators n = {}",
            scheme.n(),
            gens.n
        )));
    }
    if slot_values.len() != scheme.nu() {
        return Err(Error::InvalidParams(format!(
            "{} expects {} slot values",
            scheme.name(),
            scheme.nu()
        )));
    }
    let mut cache: HashMap<(usize, u64), CMatrix> = HashMap::new();
    let mut u = CMatrix::identity(gens.dim, gens.dim);
    for (g, x) in scheme.factor_values(slot_values) {
        let c = x * t;
        if c == 0.0 {
            continue;
        }
        let e = cache
            .entry((g, c.to_bits()))
            .or_insert_with(|| expm(&gens.matrices[g].scale(c)));
        u = &u * &*e;
    }
    Ok(u)
}

/// `‖U(t) − e^{tH}‖` for one step size.
pub fn step_error(
    scheme: &Scheme,
    slot_values: &[f64],
    gens: &GeneratorSet,
    t: f64,
) -> Result<f64> {
    let h = gens.sum();
    let exact = expm(&h.scale(t));
    Ok(op_norm(
        &(apply_scheme(scheme, slot_values, gens, t)? - exact),
    ))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalingReport {
    pub scheme: String,
    pub class: GeneratorClass,
    pub dim: usize,
    pub seed: u64,
    pub t_grid: Vec<f64>,
    pub errors: Vec<f64>,
    /// Indices into `t_grid` used for the fit.
    pub window: Vec<usize>,
    pub fitted_slope: f64,
    pub intercept: f64,
}

impl ScalingReport {
    pub fn to_csv(&self) -> String {
        let mut s = format!(
            "# scheme={} class={} dim={} seed={} slope={:.16e}\nt,error,in_window\n",
            self.scheme, self.class, self.dim, self.seed, self.fitted_slope
        );
        for (i, (t, e)) in self.t_grid.iter().zip(&self.errors).enumerate() {
            let _ = writeln!(
                s,
                "{t:.16e},{e:.16e},{}",
                u8::from(self.window.contains(&i))
            );
        }
        s
    }
}

/// `points` step sizes spaced geometrically over `[lo, hi]`.
pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

/// Step-size range that brackets the asymptotic regime of an order-`p`
/// scheme on unit-norm generators in double precision.
pub fn default_grid(p: u32) -> (f64, f64, usize) {
    (10f64.powf(-11.0 / (p as f64 + 1.0)), 1.0, 30)
}

pub const FLOOR_FACTOR: f64 = 1e-13;
pub const ERROR_CEILING: f64 = 1e-1;
pub const SLOPE_STABILITY: f64 = 0.1;
pub const MIN_WINDOW: usize = 5;

fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Longest run of consecutive usable points whose local slopes all lie
/// within [`SLOPE_STABILITY`] of the run's fitted slope; ties go to the
/// smaller step sizes.
fn select_window(t: &[f64], err: &[f64], dim: usize) -> Option<(Vec<usize>, f64, f64)> {
    let floor = FLOOR_FACTOR * dim as f64;
    let usable: Vec<bool> = err
        .iter()
        .map(|&e| e.is_finite() && e >= floor && e <= ERROR_CEILING)
        .collect();
    let lx: Vec<f64> = t.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = err.iter().map(|x| x.ln()).collect();
    let mut best: Option<(Vec<usize>, f64, f64)> = None;
    for i in 0..t.len() {
        for j in (i + MIN_WINDOW - 1)..t.len() {
            if !usable[i..=j].iter().all(|&u| u) {
                break;
            }
            let longer = best.as_ref().is_none_or(|b| j + 1 - i > b.0.len());
            if !longer {
                continue;
            }
            let (slope, icpt) = least_squares(&lx[i..=j], &ly[i..=j]);
            let stable = (i..j).all(|k| {
                ((ly[k + 1] - ly[k]) / (lx[k + 1] - lx[k]) - slope).abs() <= SLOPE_STABILITY
            });
            if stable {
                best = Some(((i..=j).collect(), slope, icpt));
            }
        }
    }
    best
}

/// Errors on a geometric grid and the log-log slope over the asymptotic
/// window.
pub fn scaling_fit(
    scheme: &Scheme,
    slot_values: &[f64],
    gens: &GeneratorSet,
    t_lo: f64,
    t_hi: f64,
    points: usize,
) -> Result<ScalingReport> {
    if !(t_lo > 0.0 && t_hi > t_lo) || points < MIN_WINDOW {
        return Err(Error::InvalidParams(format!(
            "grid [{t_lo}, {t_hi}] with {points} points"
        )));
    }
    let t_grid = geometric_grid(t_lo, t_hi, points);
    let h = gens.sum();
    let errors = t_grid
        .par_iter()
        .map(|&t| {
            Ok(op_norm(
                &(apply_scheme(scheme, slot_values, gens, t)? - expm(&h.scale(t))),
            ))
        })
        .collect::<Result<Vec<f64>>>()?;
    let (window, fitted_slope, intercept) = select_window(&t_grid, &errors, gens.dim).ok_or_else(|| {
        Error::NoValidWindow(format!(
            "{}: fewer than {MIN_WINDOW} consecutive points between {:.1e} and {ERROR_CEILING:.0e} with stable slope",
            scheme.name(),
            FLOOR_FACTOR * gens.dim as f64
        ))
    })?;
    Ok(ScalingReport {
        scheme: scheme.name(),
        class: gens.class,
        dim: gens.dim,
        seed: gens.seed,
        t_grid,
        errors,
        window,
        fitted_slope,
        intercept,
    })
}

/// A scheme with concrete slot values, as used by the comparison.
#[derive(Clone, Debug)]
pub struct SchemeInstance {
    pub label: String,
    pub scheme: Scheme,
    pub slot_values: Vec<f64>,
}

impl SchemeInstance {
    pub fn new(label: impl Into<String>, scheme: Scheme, slot_values: Vec<f64>) -> Self {
        SchemeInstance {
            label: label.into(),
            scheme,
            slot_values,
        }
    }

    pub fn from_catalog(key: &str) -> Result<Self> {
        let entry = lookup(key)?;
        Ok(SchemeInstance::new(
            key,
            entry.scheme()?,
            entry.params_f64()?.values().to_vec(),
        ))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub label: String,
    pub m: usize,
    pub steps: usize,
    pub step: f64,
    pub error: f64,
    /// 1 for the smallest error.
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub total_time: f64,
    pub budget: usize,
    pub class: GeneratorClass,
    pub dim: usize,
    pub seed: u64,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn to_csv(&self) -> String {
        let mut s = format!(
            "# T={:.16e} budget={} class={} dim={} seed={}\nscheme,m,steps,step,error,rank\n",
            self.total_time, self.budget, self.class, self.dim, self.seed
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{:.16e},{:.16e},{}",
                r.label, r.m, r.steps, r.step, r.error, r.rank
            );
        }
        s
    }
}

/// Evolves to time `T` with about `budget` exponentials per scheme: scheme
/// `j` takes `round(budget/m_j)` steps of size `T/steps`.
pub fn equal_cost_comparison(
    schemes: &[SchemeInstance],
    gens: &GeneratorSet,
    total_time: f64,
    budget: usize,
) -> Result<ComparisonTable> {
    if let Some(big) = schemes.iter().find(|s| s.scheme.m() > budget) {
        return Err(Error::InvalidBudget(format!(
            "budget {budget} is below m = {} of {}",
            big.scheme.m(),
            big.label
        )));
    }
    let exact = expm(&gens.sum().scale(total_time));
    let mut rows = schemes
        .par_iter()
        .map(|s| {
            let m = s.scheme.m();
            let steps = ((budget as f64 / m as f64).round() as usize).max(1);
            let step = total_time / steps as f64;
            let u = apply_scheme(&s.scheme, &s.slot_values, gens, step)?;
            let mut total = CMatrix::identity(gens.dim, gens.dim);
            for _ in 0..steps {
                total = &total * &u;
            }
            Ok(ComparisonRow {
                label: s.label.clone(),
                m,
                steps,
                step,
                error: op_norm(&(total - &exact)),
                rank: 0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| rows[a].error.total_cmp(&rows[b].error));
    for (r, &i) in order.iter().enumerate() {
        rows[i].rank = r + 1;
    }
    Ok(ComparisonTable {
        total_time,
        budget,
        class: gens.class,
        dim: gens.dim,
        seed: gens.seed,
        rows,
    })
}
