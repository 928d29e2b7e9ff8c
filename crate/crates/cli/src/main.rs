use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use lts_core::constraints::{analyze_freedom, symbolic_log};
use lts_core::hall::format_ordering;
use lts_core::lattice::{
    partition, reduce_to_nearest_neighbor, validate_partition, InteractionGraph, Strategy,
};
use lts_core::optimizer::{minimize_epsilon, OptimizationProblem, Starts};
use lts_core::scalar::{format_rational, fraction_string, Scalar};
use lts_core::schemes::{
    catalog, epsilon_with_tolerance, verify_order, Chart, ErrorReport, SchemeDocument,
};
use lts_core::validate::{
    build_generators, default_grid, equal_cost_comparison, scaling_fit, GeneratorClass,
    SchemeInstance, MIN_WINDOW,
};
use lts_core::{Alphabet, Family, Scheme};

mod fmt;
mod source;

use fmt::sig;
use source::{resolve, Filter, Source};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(lts_core::Error),
}

impl From<lts_core::Error> for CliError {
    fn from(e: lts_core::Error) -> Self {
        CliError::Compute(e)
    }
}

type Out = Result<String, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "lts",
    version,
    about = "Construct, verify, optimize and test Lie-Trotter-Suzuki decompositions"
)]
struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for optimize, bench and compare (0 = all cores).
    #[arg(long, global = true, env = "LTS_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy, Default)]
struct Pick {
    /// Number of generators, used to disambiguate short names.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List catalog entries.
    List {
        #[command(flatten)]
        pick: Pick,
        #[arg(long)]
        order: Option<u32>,
        /// Recompute ε and the best ordering instead of showing reference values.
        #[arg(long)]
        compute: bool,
    },
    /// Print a scheme and its parameters at full precision.
    Show {
        scheme: String,
        #[command(flatten)]
        pick: Pick,
        #[arg(long)]
        order: Option<u32>,
        /// Decimal places for the parameter values.
        #[arg(long, default_value_t = 40)]
        digits: usize,
        /// Print a scheme file instead of the summary.
        #[arg(long, conflicts_with = "json")]
        toml: bool,
    },
    /// Check the order conditions.
    Verify {
        scheme: String,
        #[command(flatten)]
        pick: Pick,
        #[arg(long)]
        order: Option<u32>,
        /// Exact rational arithmetic; every residual must vanish.
        #[arg(long, conflicts_with = "tol")]
        exact: bool,
        /// Residual tolerance (default depends on the precision of the parameters).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Leading-error measure ε and its minimizing generator ordering.
    Epsilon {
        scheme: String,
        #[command(flatten)]
        pick: Pick,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long)]
        exact: bool,
    },
    /// Multi-start minimization of ε over the order-p solution set.
    Optimize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        family: Family,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        order: u32,
        #[arg(long)]
        chart: Option<Chart>,
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated slot names to vary.
        #[arg(long, value_delimiter = ',')]
        free_slots: Option<Vec<String>>,
        /// Number of minima to print.
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Gröbner analysis of the order conditions.
    Groebner {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        family: Family,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        order: u32,
        #[arg(long)]
        chart: Option<Chart>,
        /// Also print the polynomial system.
        #[arg(long)]
        system: bool,
    },
    /// Split a lattice interaction graph into mutually commuting groups.
    Partition {
        graph: String,
        #[arg(long, default_value = "auto")]
        strategy: Strategy,
        /// Coarse grain to nearest-neighbor interactions first.
        #[arg(long)]
        reduce: bool,
        /// Print Graphviz output.
        #[arg(long, conflicts_with = "json")]
        dot: bool,
    },
    /// Step error against the exact exponential on a grid of step sizes, as CSV.
    Bench {
        scheme: String,
        #[command(flatten)]
        pick: Pick,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long, default_value = "random-general")]
        class: GeneratorClass,
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tmin: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Errors at equal numbers of exponentials, as CSV.
    Compare {
        #[arg(required = true)]
        schemes: Vec<String>,
        #[command(flatten)]
        pick: Pick,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long)]
        budget: usize,
        #[arg(long = "T", visible_alias = "time", default_value_t = 1.0)]
        total_time: f64,
        #[arg(long, default_value = "random-antihermitian")]
        class: GeneratorClass,
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn filter(pick: Pick, order: Option<u32>) -> Filter {
    Filter {
        n: pick.n,
        order,
        family: pick.family,
        m: pick.m,
    }
}

fn pretty(v: Value) -> String {
    serde_json::to_string_pretty(&v).expect("JSON values serialize") + "\n"
}

fn ordering_text(n: usize, o: &[usize]) -> String {
    format_ordering(&Alphabet::unit(n), o)
}

fn list(pick: Pick, order: Option<u32>, compute: bool, as_json: bool) -> Out {
    let f = filter(pick, order);
    let mut rows = Vec::new();
    for e in catalog().iter().filter(|e| f.accepts(e)) {
        let (eps, ordering) = if compute {
            let r = epsilon_with_tolerance(&e.scheme()?, &e.params_f64()?, e.p, e.tolerance())?;
            (Some(r.epsilon), Some(ordering_text(e.n, &r.ordering_best)))
        } else {
            let o = e.claimed_ordering_vecs().map(|v| {
                v.iter()
                    .map(|o| ordering_text(e.n, o))
                    .collect::<Vec<_>>()
                    .join(" ")
            });
            (e.claimed_epsilon, o)
        };
        rows.push((e, eps, ordering));
    }
    if as_json {
        let items: Vec<Value> = rows
            .iter()
            .map(|(e, eps, o)| {
                json!({"key": e.key, "title": e.title, "n": e.n, "family": e.family.to_string(),
                       "m": e.m, "p": e.p, "epsilon": eps, "ordering": o})
            })
            .collect();
        return Ok(pretty(json!({"computed": compute, "entries": items})));
    }
    let mut s = format!(
        "{:<24} {:>2} {:<6} {:>4} {:>2} {:>24} ordering\n",
        "key", "n", "family", "m", "p", "epsilon"
    );
    for (e, eps, o) in rows {
        // Reference values are printed as tabulated, computed ones at full precision.
        let eps = eps
            .map(|x| if compute { sig(x) } else { x.to_string() })
            .unwrap_or_else(|| "-".into());
        s += &format!(
            "{:<24} {:>2} {:<6} {:>4} {:>2} {:>24} {}\n",
            e.key,
            e.n,
            e.family.to_string(),
            e.m,
            e.p,
            eps,
            o.unwrap_or_else(|| "-".into())
        );
    }
    Ok(s)
}

fn show(src: &Source, digits: usize, toml: bool, as_json: bool) -> Out {
    let names = src.scheme.slot_names();
    let values = src.params.values();
    if toml {
        let mut doc = SchemeDocument::new(&src.scheme, &src.params, digits);
        doc.order = src.order;
        return Ok(doc.to_toml());
    }
    let free = src.scheme.free_slots();
    if as_json {
        let slots: Vec<Value> = names
            .iter()
            .zip(values)
            .enumerate()
            .map(|(i, (n, v))| {
                json!({"name": n, "value": format_rational(v, digits), "exact": fraction_string(v),
                       "free": free.contains(&i)})
            })
            .collect();
        return Ok(pretty(json!({
            "scheme": src.label,
            "title": src.entry.map(|e| e.title),
            "n": src.scheme.n(), "family": src.scheme.family().to_string(), "m": src.scheme.m(),
            "nu": src.scheme.nu(), "order": src.order, "chart": src.scheme.chart().to_string(),
            "product": src.scheme.describe(), "closures": src.scheme.closure_text(), "slots": slots,
        })));
    }
    let mut s = format!("{}\n", src.label);
    if let Some(e) = src.entry {
        s += &format!("  {}\n", e.title);
    }
    s += &format!(
        "n {} family {} m {} nu {} order {}\n",
        src.scheme.n(),
        src.scheme.family(),
        src.scheme.m(),
        src.scheme.nu(),
        src.order
            .map(|p| p.to_string())
            .unwrap_or_else(|| "-".into())
    );
    s += &format!("product: {}\n", src.scheme.describe());
    for c in src.scheme.closure_text() {
        s += &format!("closure: {c}\n");
    }
    let width = names.iter().map(|n| n.len()).max().unwrap_or(0);
    for (i, (n, v)) in names.iter().zip(values).enumerate() {
        let tag = if free.contains(&i) {
            ""
        } else {
            "  (dependent)"
        };
        s += &format!("{n:<width$} = {}{tag}\n", format_rational(v, digits));
    }
    Ok(s)
}

fn verify(src: &Source, order: Option<u32>, exact: bool, tol: Option<f64>, as_json: bool) -> Out {
    let p = src.order_or(order)?;
    let (ok, residuals, tol) = if exact {
        let (ok, r) = verify_order(&src.scheme, &src.params, p, 0.0)?;
        (ok, r, 0.0)
    } else {
        let tol = tol.unwrap_or(src.tolerance);
        let (ok, r) = verify_order(&src.scheme, &src.params.to_f64(), p, tol)?;
        (ok, r, tol)
    };
    let out = if as_json {
        pretty(
            json!({"scheme": src.label, "order": p, "exact": exact, "tolerance": tol,
                      "residuals": residuals, "pass": ok}),
        )
    } else {
        let mut s = format!(
            "{} order {p} ({}, tolerance {tol:e})\n",
            src.label,
            if exact { "exact" } else { "float" }
        );
        for (k, r) in residuals.iter().enumerate() {
            s += &format!("degree {:>2}  residual {}\n", k + 1, sig(*r));
        }
        s + if ok { "PASS\n" } else { "FAIL\n" }
    };
    if ok {
        Ok(out)
    } else {
        print!("{out}");
        let worst = residuals.iter().cloned().fold(0.0, f64::max);
        Err(CliError::Compute(lts_core::Error::OrderNotVerified(
            format!(
                "{} at order {p}: largest residual {}",
                src.label,
                sig(worst)
            ),
        )))
    }
}

fn report_text<S: Scalar>(label: &str, n: usize, r: &ErrorReport<S>) -> String {
    let mut s = format!("{label} order {} m {}\n", r.p, r.m);
    s += &format!("epsilon = {}\n", sig(r.epsilon));
    if let Some(e) = &r.epsilon_exact {
        s += &format!("epsilon exact = {}\n", fraction_string(e));
    }
    s += &format!("ordering = {}\n", ordering_text(n, &r.ordering_best));
    if r.tied_orderings.len() > 1 {
        let tied: Vec<String> = r
            .tied_orderings
            .iter()
            .map(|o| ordering_text(n, o))
            .collect();
        s += &format!("tied = {}\n", tied.join(" "));
    }
    s += "one-norm by ordering:\n";
    for o in &r.per_ordering {
        s += &format!(
            "  {:<6} {}\n",
            ordering_text(n, &o.ordering),
            sig(o.one_norm)
        );
    }
    s
}

fn epsilon_cmd(src: &Source, order: Option<u32>, exact: bool, as_json: bool) -> Out {
    let p = src.order_or(order)?;
    let n = src.scheme.n();
    let alphabet = Alphabet::unit(n);
    if exact {
        let r = epsilon_with_tolerance(&src.scheme, &src.params, p, 0.0)?;
        return Ok(if as_json {
            pretty(json!({"scheme": src.label, "report": r.to_json(&alphabet)}))
        } else {
            report_text(&src.label, n, &r)
        });
    }
    let r = epsilon_with_tolerance(&src.scheme, &src.params.to_f64(), p, src.tolerance)?;
    Ok(if as_json {
        pretty(json!({"scheme": src.label, "report": r.to_json(&alphabet)}))
    } else {
        report_text(&src.label, n, &r)
    })
}

fn build(n: usize, family: Family, m: usize, chart: Option<Chart>) -> Result<Scheme, CliError> {
    let chart = chart.unwrap_or(if family == Family::SE {
        Chart::EulerPair
    } else {
        Chart::Standard
    });
    Ok(Scheme::build_with_chart(n, family, m, chart)?)
}

#[allow(clippy::too_many_arguments)]
fn optimize(
    scheme: Scheme,
    p: u32,
    starts: Option<usize>,
    seed: u64,
    free: Option<Vec<String>>,
    top: usize,
    as_json: bool,
) -> Out {
    let mut prob = OptimizationProblem::new(scheme, p)?.with_seed(seed);
    if let Some(names) = &free {
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        prob = prob
            .with_free_slot_names(&names)
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    if let Some(k) = starts {
        prob = prob.with_starts(Starts::Sampled(k));
    }
    prob.validate()?;
    let mut r = minimize_epsilon(&prob)?;
    r.minima.truncate(top);
    if as_json {
        let mut v = r.to_json();
        // Wall time would break byte-identical reruns.
        v.as_object_mut().map(|o| o.remove("wall_seconds"));
        return Ok(pretty(v));
    }
    let n = r.scheme.n();
    let names = r.scheme.slot_names();
    let failed = r.diagnostics.iter().filter(|d| d.epsilon.is_none()).count();
    let mut s = format!(
        "{} order {p} free {} starts {} failed {failed} seed {seed}\n",
        r.scheme.name(),
        r.free_slot_names.join(","),
        r.diagnostics.len()
    );
    for (k, m) in r.minima.iter().enumerate() {
        s += &format!(
            "#{:<3} epsilon {} ordering {} hits {}\n",
            k + 1,
            sig(m.report.epsilon),
            ordering_text(n, &m.report.ordering_best),
            m.hits
        );
        for (name, v) in names.iter().zip(m.params.values()) {
            s += &format!("     {name} = {}\n", sig(*v));
        }
    }
    Ok(s)
}

fn groebner(scheme: Scheme, p: u32, system: bool, as_json: bool) -> Out {
    let cs = symbolic_log(&scheme, p)?;
    let r = analyze_freedom(&cs)?;
    if as_json {
        let mut v = r.to_json(cs.variables());
        let o = v.as_object_mut().expect("report is an object");
        o.insert("scheme".into(), json!(scheme.name()));
        o.insert("order".into(), json!(p));
        o.insert("variables".into(), json!(cs.variables()));
        o.insert("constraints_by_degree".into(), json!(cs.counts_by_degree()));
        o.insert("dropped_dependent".into(), json!(cs.dropped()));
        if system {
            o.insert("system".into(), json!(cs.to_text()));
        }
        return Ok(pretty(v));
    }
    let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
    let mut s = format!(
        "{} order {p}\nvariables: {}\n",
        scheme.name(),
        cs.variables().join(", ")
    );
    s += &format!(
        "constraints by degree: {:?} ({} dependent dropped)\n",
        cs.counts_by_degree(),
        cs.dropped()
    );
    s += &format!("free parameters: {}\n", opt(r.free_count));
    for set in &r.admissible_free_sets {
        s += &format!("admissible free set: {{{}}}\n", set.join(", "));
    }
    s += &format!(
        "suggested free slots: {{{}}}\n",
        r.suggested_free_slots.join(", ")
    );
    s += &format!("zero-dimensional: {}\n", r.zero_dimensional);
    s += &format!("complex solutions: {}\n", opt(r.solution_count));
    s += &format!("real solutions: {}\n", opt(r.real_solution_count));
    for sol in &r.real_solutions {
        let vals: Vec<String> = sol.iter().map(|x| sig(*x)).collect();
        s += &format!("  {}\n", vals.join(" "));
    }
    if system {
        s += &cs.to_text();
    }
    Ok(s)
}

fn partition_cmd(path: &str, strategy: Strategy, reduce: bool, dot: bool, as_json: bool) -> Out {
    let g = InteractionGraph::load(path).map_err(|e| match e {
        lts_core::Error::Io(_) | lts_core::Error::Parse(_) => {
            CliError::Usage(format!("{path}: {e}"))
        }
        other => CliError::Compute(other),
    })?;
    let (g, maps) = if reduce {
        reduce_to_nearest_neighbor(&g)?
    } else {
        (g, Vec::new())
    };
    let part = partition(&g, strategy)?;
    let (valid, violations) = validate_partition(&g, &part);
    if dot {
        return Ok(g.to_dot(Some(&part)));
    }
    if as_json {
        return Ok(pretty(json!({
            "graph": path, "sites": g.num_sites(), "interactions": g.num_interactions(),
            "coarse_graining": maps, "partition": part, "valid": valid,
            "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })));
    }
    let mut s = format!(
        "{path}: {} sites, {} interactions\n",
        g.num_sites(),
        g.num_interactions()
    );
    if reduce {
        s += &format!("coarse graining steps: {}\n", maps.len());
    }
    s += &part.to_text();
    s += &format!("valid {valid}\n");
    for v in violations {
        s += &format!("violation: {v}\n");
    }
    Ok(s)
}

#[allow(clippy::too_many_arguments)]
fn bench(
    src: &Source,
    order: Option<u32>,
    class: GeneratorClass,
    dim: usize,
    seed: u64,
    tmin: Option<f64>,
    tmax: Option<f64>,
    points: Option<usize>,
    as_json: bool,
) -> Out {
    let p = src.order_or(order)?;
    let (lo, hi, pts) = default_grid(p);
    let (lo, hi, pts) = (
        tmin.unwrap_or(lo),
        tmax.unwrap_or(hi),
        points.unwrap_or(pts),
    );
    if !(lo > 0.0 && hi > lo && pts >= MIN_WINDOW) {
        return Err(CliError::Usage(format!(
            "need 0 < tmin < tmax and points ≥ {MIN_WINDOW}, got {lo}, {hi}, {pts}"
        )));
    }
    let gens = build_generators(class, src.scheme.n(), dim, seed)?;
    let mut r = scaling_fit(&src.scheme, &src.values_f64(), &gens, lo, hi, pts)?;
    r.scheme = src.label.clone();
    Ok(if as_json {
        pretty(json!({"order": p, "expected_slope": p + 1, "report": r}))
    } else {
        r.to_csv()
    })
}

#[allow(clippy::too_many_arguments)]
fn compare(
    names: &[String],
    f: &Filter,
    budget: usize,
    total_time: f64,
    class: GeneratorClass,
    dim: usize,
    seed: u64,
    as_json: bool,
) -> Out {
    let sources = names
        .iter()
        .map(|n| resolve(n, f))
        .collect::<Result<Vec<_>, _>>()?;
    let n = sources[0].scheme.n();
    if let Some(bad) = sources.iter().find(|s| s.scheme.n() != n) {
        return Err(CliError::Usage(format!(
            "{} has n = {}, expected {n}",
            bad.label,
            bad.scheme.n()
        )));
    }
    let instances: Vec<SchemeInstance> = sources
        .iter()
        .map(|s| SchemeInstance::new(s.label.clone(), s.scheme.clone(), s.values_f64()))
        .collect();
    let gens = build_generators(class, n, dim, seed)?;
    let table = equal_cost_comparison(&instances, &gens, total_time, budget)?;
    Ok(if as_json {
        pretty(serde_json::to_value(&table).expect("table serializes"))
    } else {
        table.to_csv()
    })
}

fn run(cli: Cli) -> Out {
    let as_json = cli.json;
    match cli.command {
        Command::List {
            pick,
            order,
            compute,
        } => list(pick, order, compute, as_json),
        Command::Show {
            scheme,
            pick,
            order,
            digits,
            toml,
        } => show(
            &resolve(&scheme, &filter(pick, order))?,
            digits,
            toml,
            as_json,
        ),
        Command::Verify {
            scheme,
            pick,
            order,
            exact,
            tol,
        } => verify(
            &resolve(&scheme, &filter(pick, order))?,
            order,
            exact,
            tol,
            as_json,
        ),
        Command::Epsilon {
            scheme,
            pick,
            order,
            exact,
        } => epsilon_cmd(
            &resolve(&scheme, &filter(pick, order))?,
            order,
            exact,
            as_json,
        ),
        Command::Optimize {
            n,
            family,
            m,
            order,
            chart,
            starts,
            seed,
            free_slots,
            top,
        } => optimize(
            build(n, family, m, chart)?,
            order,
            starts,
            seed,
            free_slots,
            top,
            as_json,
        ),
        Command::Groebner {
            n,
            family,
            m,
            order,
            chart,
            system,
        } => groebner(build(n, family, m, chart)?, order, system, as_json),
        Command::Partition {
            graph,
            strategy,
            reduce,
            dot,
        } => partition_cmd(&graph, strategy, reduce, dot, as_json),
        Command::Bench {
            scheme,
            pick,
            order,
            class,
            dim,
            seed,
            tmin,
            tmax,
            points,
        } => bench(
            &resolve(&scheme, &filter(pick, order))?,
            order,
            class,
            dim,
            seed,
            tmin,
            tmax,
            points,
            as_json,
        ),
        Command::Compare {
            schemes,
            pick,
            order,
            budget,
            total_time,
            class,
            dim,
            seed,
        } => compare(
            &schemes,
            &filter(pick, order),
            budget,
            total_time,
            class,
            dim,
            seed,
            as_json,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
