use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::params::ParamAssignment;
use super::template::Scheme;
use crate::error::{Error, Result};
use crate::free_algebra::{Alphabet, DenseSeries};
use crate::hall::{all_orderings, format_ordering, HallBasis, LieSeries};
use crate::scalar::{Rational, Scalar};

/// Relative width within which orderings count as tied for the minimum.
pub const TIE_TOLERANCE: f64 = 1e-9;

pub(crate) fn unit_alphabet(n: usize) -> Arc<Alphabet> {
    Arc::new(Alphabet::unit(n))
}

/// Default order-verification tolerance: exact zero for rationals, `1e-10`
/// for floats.
pub fn default_tolerance<S: Scalar>() -> f64 {
    if S::EXACT {
        0.0
    } else {
        1e-10
    }
}

/// `log Π exp(c_i g_i)` as a dense series truncated at `d`.
pub fn log_dense<S: Scalar>(scheme: &Scheme, slot_values: &[S], d: u32) -> Result<DenseSeries<S>> {
    if slot_values.len() != scheme.nu() {
        return Err(Error::InvalidParams(format!(
            "{} needs {} slot values",
            scheme.name(),
            scheme.nu()
        )));
    }
    DenseSeries::exp_product(scheme.n(), d, &scheme.factor_values(slot_values)).log()
}

/// Hall coordinates of `log U` for the given generator ordering.
pub fn log_scheme<S: Scalar>(
    scheme: &Scheme,
    params: &ParamAssignment<S>,
    d: u32,
    ordering: &[usize],
) -> Result<LieSeries<S>> {
    params.check_len(scheme)?;
    let z = log_dense(scheme, params.values(), d)?;
    let basis = HallBasis::cached(&unit_alphabet(scheme.n()), d, ordering)?;
    let mut coords = Vec::with_capacity(basis.len());
    for k in 1..=d {
        let c = basis.dense_coordinates_at(&z, k);
        let residual = basis.dense_residual_at(&z, k, &c);
        let scale = z.part(k).iter().map(Scalar::magnitude).fold(1.0, f64::max);
        let ok = if S::EXACT {
            residual == 0.0
        } else {
            residual <= 1e-8 * scale
        };
        if !ok {
            return Err(Error::NotLieElement {
                degree: k,
                residual,
            });
        }
        coords.extend(c);
    }
    LieSeries::new(basis, coords)
}

/// Max deviation per degree `1..=p`: `|c - 1|` on generators at degree 1,
/// `|c|` above.
fn order_residuals<S: Scalar>(
    scheme: &Scheme,
    z: &DenseSeries<S>,
    p: u32,
) -> Result<(Vec<f64>, bool)> {
    let ordering: Vec<usize> = (0..scheme.n()).collect();
    let basis = HallBasis::cached(&unit_alphabet(scheme.n()), z.max_degree(), &ordering)?;
    let mut out = Vec::with_capacity(p as usize);
    let mut all_zero = true;
    for k in 1..=p {
        let c = basis.dense_coordinates_at(z, k);
        let mut worst: f64 = 0.0;
        for x in c {
            let dev = if k == 1 { x - S::one() } else { x };
            all_zero &= dev.is_zero();
            worst = worst.max(dev.magnitude());
        }
        out.push(worst);
    }
    Ok((out, all_zero))
}

/// Checks that `log U = t H + O(t^{p+1})`. Returns the verdict and the
/// residual per degree `1..=p`. With `tol = 0` in exact mode the check is
/// exact equality.
pub fn verify_order<S: Scalar>(
    scheme: &Scheme,
    params: &ParamAssignment<S>,
    p: u32,
    tol: f64,
) -> Result<(bool, Vec<f64>)> {
    params.check_len(scheme)?;
    let z = log_dense(scheme, params.values(), p.max(1))?;
    let (res, all_zero) = order_residuals(scheme, &z, p)?;
    let ok = if S::EXACT && tol == 0.0 {
        all_zero
    } else {
        res.iter().all(|r| *r <= tol)
    };
    Ok((ok, res))
}

/// Degree-`p+1` coefficients for one generator ordering.
#[derive(Clone, Debug)]
pub struct OrderingError<S> {
    pub ordering: Vec<usize>,
    pub coeffs: Vec<(String, S)>,
    pub one_norm: f64,
}

/// Leading-error summary of an order-`p` scheme.
#[derive(Clone, Debug)]
pub struct ErrorReport<S> {
    pub p: u32,
    pub m: usize,
    /// `(m/p)^p · min_ordering Σ|c_i|`.
    pub epsilon: f64,
    /// The same value computed exactly when the backend is rational.
    pub epsilon_exact: Option<Rational>,
    pub ordering_best: Vec<usize>,
    /// Every ordering whose 1-norm is within [`TIE_TOLERANCE`] of the minimum.
    pub tied_orderings: Vec<Vec<usize>>,
    pub per_ordering: Vec<OrderingError<S>>,
    /// Residuals at degrees `1..=p` from the order check.
    pub order_residuals: Vec<f64>,
}

impl<S: Scalar> ErrorReport<S> {
    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        let per: Vec<Value> = self
            .per_ordering
            .iter()
            .map(|o| {
                json!({
                    "ordering": format_ordering(alphabet, &o.ordering),
                    "one_norm": o.one_norm,
                    "coefficients": o.coeffs.iter()
                        .map(|(l, c)| json!([l, c.as_f64()]))
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "p": self.p,
            "m": self.m,
            "epsilon": self.epsilon,
            "epsilon_exact": self.epsilon_exact.as_ref().map(crate::scalar::fraction_string),
            "ordering_best": format_ordering(alphabet, &self.ordering_best),
            "tied_orderings": self.tied_orderings.iter().map(|o| format_ordering(alphabet, o)).collect::<Vec<_>>(),
            "order_residuals": self.order_residuals,
            "per_ordering": per,
        })
    }
}

fn prefactor(m: usize, p: u32) -> f64 {
    (m as f64 / p as f64).powi(p as i32)
}

fn exact_prefactor(m: usize, p: u32) -> Rational {
    num_traits::pow(Rational::new(m.into(), p.into()), p as usize)
}

/// Error measure with the default tolerance for the backend.
pub fn epsilon<S: Scalar>(
    scheme: &Scheme,
    params: &ParamAssignment<S>,
    p: u32,
) -> Result<ErrorReport<S>> {
    epsilon_with_tolerance(scheme, params, p, default_tolerance::<S>())
}

pub fn epsilon_with_tolerance<S: Scalar>(
    scheme: &Scheme,
    params: &ParamAssignment<S>,
    p: u32,
    tol: f64,
) -> Result<ErrorReport<S>> {
    if p == 0 {
        return Err(Error::InvalidParams("order p must be at least 1".into()));
    }
    params.check_len(scheme)?;
    let d = p + 1;
    let z = log_dense(scheme, params.values(), d)?;
    let (residuals, all_zero) = order_residuals(scheme, &z, p)?;
    let ok = if S::EXACT && tol == 0.0 {
        all_zero
    } else {
        residuals.iter().all(|r| *r <= tol)
    };
    if !ok {
        let worst = residuals.iter().cloned().fold(0.0, f64::max);
        return Err(Error::OrderNotVerified(format!(
            "{} is not of order {p} (max residual {worst:e}, tolerance {tol:e})",
            scheme.name()
        )));
    }
    let alpha = unit_alphabet(scheme.n());
    let mut per_ordering = Vec::new();
    let mut exact_norms: Vec<Option<Rational>> = Vec::new();
    for ordering in all_orderings(scheme.n()) {
        let basis = HallBasis::cached(&alpha, d, &ordering)?;
        let c = basis.dense_coordinates_at(&z, d);
        let one_norm: f64 = c.iter().map(Scalar::magnitude).sum();
        let exact: Option<Rational> = c
            .iter()
            .map(|x| x.as_rational().map(|r| r.abs()))
            .try_fold(Rational::zero(), |acc, x| x.map(|x| acc + x));
        exact_norms.push(exact);
        let coeffs = basis
            .degree_range(d)
            .zip(c)
            .map(|(i, x)| (basis.render(i), x))
            .collect();
        per_ordering.push(OrderingError {
            ordering,
            coeffs,
            one_norm,
        });
    }
    let best = (0..per_ordering.len())
        .min_by(|&a, &b| {
            per_ordering[a]
                .one_norm
                .total_cmp(&per_ordering[b].one_norm)
        })
        .expect("at least one ordering");
    let min = per_ordering[best].one_norm;
    let tied_orderings = per_ordering
        .iter()
        .filter(|o| o.one_norm <= min + TIE_TOLERANCE * min.abs().max(f64::MIN_POSITIVE))
        .map(|o| o.ordering.clone())
        .collect();
    let epsilon_exact = exact_norms
        .into_iter()
        .collect::<Option<Vec<Rational>>>()
        .and_then(|v| v.into_iter().min())
        .map(|x| x * exact_prefactor(scheme.m(), p));
    Ok(ErrorReport {
        p,
        m: scheme.m(),
        epsilon: prefactor(scheme.m(), p) * min,
        epsilon_exact,
        ordering_best: per_ordering[best].ordering.clone(),
        tied_orderings,
        per_ordering,
        order_residuals: residuals,
    })
}

/// Float error measure without order verification, for optimizer inner
/// loops. Returns `(ε, index into all_orderings(n))`.
pub fn epsilon_value(scheme: &Scheme, slot_values: &[f64], p: u32) -> Result<(f64, usize)> {
    let d = p + 1;
    let z = log_dense(scheme, slot_values, d)?;
    let alpha = unit_alphabet(scheme.n());
    let mut best = (f64::INFINITY, 0);
    for (i, ordering) in all_orderings(scheme.n()).iter().enumerate() {
        let basis = HallBasis::cached(&alpha, d, ordering)?;
        let norm: f64 = basis
            .dense_coordinates_at(&z, d)
            .iter()
            .map(|x| x.abs())
            .sum();
        if norm < best.0 {
            best = (norm, i);
        }
    }
    Ok((prefactor(scheme.m(), p) * best.0, best.1))
}

/// The order conditions at degrees `2..=p` as a flat vector of Hall
/// coordinates (identity ordering). Even degrees are skipped for symmetric
/// families, where they vanish identically.
pub fn order_conditions<S: Scalar>(scheme: &Scheme, slot_values: &[S], p: u32) -> Result<Vec<S>> {
    let mut out = Vec::new();
    if p < 2 {
        return Ok(out);
    }
    let z = log_dense(scheme, slot_values, p)?;
    let ordering: Vec<usize> = (0..scheme.n()).collect();
    let basis = HallBasis::cached(&unit_alphabet(scheme.n()), p, &ordering)?;
    for k in 2..=p {
        if scheme.is_symmetric() && k % 2 == 0 {
            continue;
        }
        out.extend(basis.dense_coordinates_at(&z, k));
    }
    Ok(out)
}
