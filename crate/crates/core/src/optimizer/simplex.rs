//! Nelder-Mead on a box-free domain; infeasible probes return `+inf`.

#[derive(Clone, Copy, Debug)]
pub struct SimplexOptions {
    pub initial_step: f64,
    /// Stop once the largest vertex distance from the best vertex is below
    /// this (max-norm).
    pub diameter_tol: f64,
    pub max_evals: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            initial_step: 0.05,
            diameter_tol: 1e-12,
            max_evals: 6000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

fn diameter(simplex: &[(Vec<f64>, f64)]) -> f64 {
    let best = &simplex[0].0;
    simplex[1..]
        .iter()
        .flat_map(|(x, _)| x.iter().zip(best).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max)
}

/// Minimizes `f` from `x0`. Standard coefficients (1, 2, 1/2, 1/2).
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    opts: SimplexOptions,
) -> SimplexResult {
    let dim = x0.len();
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if dim == 0 {
        let value = eval(x0, &mut evals);
        return SimplexResult {
            x: Vec::new(),
            value,
            evals,
            converged: true,
        };
    }
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), eval(x0, &mut evals)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }
    let sort = |s: &mut Vec<(Vec<f64>, f64)>| s.sort_by(|a, b| a.1.total_cmp(&b.1));
    sort(&mut simplex);
    let mut converged = false;
    while evals < opts.max_evals {
        if diameter(&simplex) <= opts.diameter_tol {
            converged = true;
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|(x, _)| x[j]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = along(1.0);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = eval(&xe, &mut evals);
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let x = along(0.5);
                let v = eval(&x, &mut evals);
                (x, v)
            } else {
                let x = along(-0.5);
                let v = eval(&x, &mut evals);
                (x, v)
            };
            if fc < worst.1.min(fr) {
                simplex[dim] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, v) in simplex[1..].iter_mut() {
                    for (xi, bi) in x.iter_mut().zip(&best) {
                        *xi = bi + 0.5 * (*xi - bi);
                    }
                    *v = eval(x, &mut evals);
                }
            }
        }
        sort(&mut simplex);
    }
    let (x, value) = simplex.swap_remove(0);
    SimplexResult {
        x,
        value,
        evals,
        converged,
    }
}

/// Repeats [`nelder_mead`] from the last best point with a fresh simplex
/// until a restart no longer improves the value. Restarts get simplices out of
/// the narrow valleys that kinked objectives produce.
pub fn nelder_mead_restarted(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    opts: SimplexOptions,
    max_restarts: usize,
) -> SimplexResult {
    let mut best = nelder_mead(&mut f, x0, opts);
    let mut step = opts.initial_step;
    for _ in 0..max_restarts {
        if !best.value.is_finite() || best.evals >= opts.max_evals {
            break;
        }
        step = (step * 0.1).max(1e-6);
        let budget = SimplexOptions {
            initial_step: step,
            max_evals: opts.max_evals - best.evals,
            ..opts
        };
        let next = nelder_mead(&mut f, &best.x, budget);
        let evals = best.evals + next.evals;
        let improved = next.value < best.value - 1e-15 * best.value.abs();
        if next.value < best.value {
            best = SimplexResult { evals, ..next };
        } else {
            best.evals = evals;
        }
        if !improved {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let r = nelder_mead(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
            SimplexOptions {
                initial_step: 0.1,
                diameter_tol: 1e-10,
                max_evals: 10_000,
            },
        );
        assert!(r.converged);
        assert!(
            (r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6,
            "{r:?}"
        );
    }

    #[test]
    fn kinked_one_dimensional() {
        let r = nelder_mead(
            |x| (x[0] - 0.3).abs() + 0.1 * x[0] * x[0],
            &[1.0],
            SimplexOptions::default(),
        );
        assert!(r.converged);
        assert!((r.x[0] - 0.3).abs() < 1e-10);
    }
}
