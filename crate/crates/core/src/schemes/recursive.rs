//! Leapfrog-product recursions: triple jump (`U(y t) U((1-2y) t) U(y t)`)
//! and the five-fold fractal variant.

use num_bigint::BigInt;
use num_traits::One;

use super::params::{ParamAssignment, Provenance};
use super::template::{Family, Scheme};
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Decimal digits kept for the irrational recursion constants.
pub const RECURSION_DIGITS: usize = 60;

/// `base^(1/k)` truncated to `digits` decimals.
pub fn root_approx(base: u32, k: u32, digits: usize) -> Rational {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let radicand = BigInt::from(base) * num_traits::pow(scale.clone(), k as usize);
    Rational::new(radicand.nth_root(k), scale)
}

/// `y_j = (2 - 2^{1/(2j+1)})^{-1}`.
pub fn yoshida_constant(j: u32) -> Rational {
    (Rational::from_integer(2.into()) - root_approx(2, 2 * j + 1, RECURSION_DIGITS)).recip()
}

/// `z_j = (4 - 4^{1/(2j+1)})^{-1}`.
pub fn suzuki_constant(j: u32) -> Rational {
    (Rational::from_integer(4.into()) - root_approx(4, 2 * j + 1, RECURSION_DIGITS)).recip()
}

fn leapfrog_weights(q: u32, fivefold: bool) -> Vec<Rational> {
    let mut w = vec![Rational::one()];
    for j in 1..q {
        let (outer, middle, repeat) = if fivefold {
            let z = suzuki_constant(j);
            let mid = Rational::one() - Rational::from_integer(4.into()) * &z;
            (z, mid, 2)
        } else {
            let y = yoshida_constant(j);
            let mid = Rational::one() - Rational::from_integer(2.into()) * &y;
            (y, mid, 1)
        };
        let mut next = Vec::with_capacity(w.len() * (2 * repeat + 1));
        for _ in 0..repeat {
            next.extend(w.iter().map(|x| x * &outer));
        }
        next.extend(w.iter().map(|x| x * &middle));
        for _ in 0..repeat {
            next.extend(w.iter().map(|x| x * &outer));
        }
        w = next;
    }
    w
}

/// Leapfrog weights of the triple-jump recursion at level `q`.
pub fn yoshida_weights(q: u32) -> Vec<Rational> {
    leapfrog_weights(q, false)
}

/// Leapfrog weights of the five-fold recursion at level `q`.
pub fn suzuki_weights(q: u32) -> Vec<Rational> {
    leapfrog_weights(q, true)
}

/// SL scheme whose leapfrog weights are `weights` (palindromic).
pub fn sl_from_weights(
    n: usize,
    weights: &[Rational],
    provenance: Provenance,
) -> Result<(Scheme, ParamAssignment<Rational>)> {
    let k = weights.len();
    if weights
        .iter()
        .zip(weights.iter().rev())
        .any(|(a, b)| a != b)
    {
        return Err(Error::InvalidParams(
            "leapfrog weights must be palindromic".into(),
        ));
    }
    let m = 2 * (n - 1) * k + 1;
    let scheme = Scheme::build(n, Family::SL, m)?;
    let free: Vec<Rational> = scheme
        .free_slots()
        .into_iter()
        .map(|i| weights[i].clone())
        .collect();
    let params = ParamAssignment::from_free(&scheme, &free, provenance)?;
    Ok((scheme, params))
}

fn check_level(q: u32) -> Result<()> {
    if q == 0 || q > 8 {
        return Err(Error::InvalidParams(format!(
            "recursion level must be in 1..=8, got {q}"
        )));
    }
    Ok(())
}

/// Order-`2q` triple-jump scheme; `m = 2·3^{q-1}+1` for `n = 2`, `4·3^{q-1}+1` for `n = 3`.
pub fn yoshida_recursive(n: usize, q: u32) -> Result<(Scheme, ParamAssignment<Rational>)> {
    check_level(q)?;
    sl_from_weights(
        n,
        &yoshida_weights(q),
        Provenance::Recursive(format!("yoshida q={q}")),
    )
}

/// Order-`2q` five-fold scheme; `m = 2·5^{q-1}+1` for `n = 2`, `4·5^{q-1}+1` for `n = 3`.
pub fn suzuki_recursive(n: usize, q: u32) -> Result<(Scheme, ParamAssignment<Rational>)> {
    check_level(q)?;
    sl_from_weights(
        n,
        &suzuki_weights(q),
        Provenance::Recursive(format!("suzuki q={q}")),
    )
}
