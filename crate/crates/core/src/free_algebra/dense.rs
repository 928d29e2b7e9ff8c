use std::sync::Arc;

use super::{Alphabet, NCSeries, Word};
use crate::error::{Error, Result};
use crate::scalar::{Const, Scalar};

/// Dense truncated series over `n` unit-degree generators.
///
/// `parts[k]` holds all `n^k` words of length `k`, indexed in base `n` with
/// the first letter most significant. This is the workhorse for products of
/// many single-generator exponentials, where the sparse map would be full
/// anyway.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseSeries<S> {
    n: usize,
    max_degree: u32,
    parts: Vec<Vec<S>>,
}

fn pow(n: usize, k: usize) -> usize {
    n.pow(k as u32)
}

impl<S: Scalar> DenseSeries<S> {
    pub fn zero(n: usize, max_degree: u32) -> Self {
        let parts = (0..=max_degree as usize)
            .map(|k| vec![S::zero(); pow(n, k)])
            .collect();
        DenseSeries {
            n,
            max_degree,
            parts,
        }
    }

    pub fn one(n: usize, max_degree: u32) -> Self {
        let mut s = Self::zero(n, max_degree);
        s.parts[0][0] = S::one();
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn part(&self, k: u32) -> &[S] {
        &self.parts[k as usize]
    }

    pub fn part_mut(&mut self, k: u32) -> &mut [S] {
        &mut self.parts[k as usize]
    }

    pub fn coeff(&self, w: Word) -> S {
        if w.len() > self.max_degree as usize {
            return S::zero();
        }
        self.parts[w.len()][w.dense_index(self.n)].clone()
    }

    /// Right-multiplies in place by `exp(c·g)` for generator `g`.
    pub fn mul_exp_generator(&mut self, g: usize, c: &S) {
        debug_assert!(g < self.n);
        let d = self.max_degree as usize;
        let n = self.n;
        // c^j / j! and the base-n index of g^j.
        let mut coefs: Vec<S> = Vec::with_capacity(d + 1);
        let mut tails: Vec<usize> = Vec::with_capacity(d + 1);
        coefs.push(S::one());
        tails.push(0);
        for j in 1..=d {
            let next = coefs[j - 1]
                .mul_ref(c)
                .scale(&Const::from_ratio(1, j as i64));
            coefs.push(next);
            tails.push(tails[j - 1] * n + g);
        }
        for k in (1..=d).rev() {
            let (lower, upper) = self.parts.split_at_mut(k);
            let target = &mut upper[0];
            for j in 1..=k {
                let src = &lower[k - j];
                let stride = pow(n, j);
                let tail = tails[j];
                let cj = &coefs[j];
                for (i, x) in src.iter().enumerate() {
                    if !x.is_zero() {
                        target[i * stride + tail].add_mul(x, cj);
                    }
                }
            }
        }
    }

    /// Ordered product `Π exp(c_i g_i)`.
    pub fn exp_product(n: usize, max_degree: u32, factors: &[(usize, S)]) -> Self {
        let mut s = Self::one(n, max_degree);
        for (g, c) in factors {
            s.mul_exp_generator(*g, c);
        }
        s
    }

    /// Truncated product, skipping degrees below the given lower bounds.
    fn mul_from(&self, other: &Self, self_min: usize, other_min: usize) -> Self {
        let d = self.max_degree as usize;
        let n = self.n;
        let mut out = Self::zero(n, self.max_degree);
        for a in self_min..=d {
            for b in other_min..=(d - a) {
                let stride = pow(n, b);
                let (left, right) = (&self.parts[a], &other.parts[b]);
                let target = &mut out.parts[a + b];
                for (i, x) in left.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let base = i * stride;
                    for (j, y) in right.iter().enumerate() {
                        if !y.is_zero() {
                            target[base + j].add_mul(x, y);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.max_degree != other.max_degree {
            return Err(Error::AlphabetMismatch);
        }
        Ok(self.mul_from(other, 0, 0))
    }

    /// `Σ (-1)^{k+1} (x-1)^k / k`; the result has zero constant term.
    pub fn log(&self) -> Result<Self> {
        if self.parts[0][0] != S::one() {
            return Err(Error::ConstantTermNotOne);
        }
        let mut y = self.clone();
        y.parts[0][0] = S::zero();
        let mut result = y.clone();
        let mut power = y.clone();
        for k in 2..=self.max_degree as usize {
            power = power.mul_from(&y, k - 1, 1);
            let c = Const::from_ratio(if k % 2 == 1 { 1 } else { -1 }, k as i64);
            for deg in k..=self.max_degree as usize {
                for (r, p) in result.parts[deg].iter_mut().zip(&power.parts[deg]) {
                    if !p.is_zero() {
                        r.add_scaled(p, &c);
                    }
                }
            }
        }
        Ok(result)
    }

    pub fn to_sparse(&self, alphabet: Arc<Alphabet>) -> Result<NCSeries<S>> {
        if alphabet.len() != self.n || !alphabet.is_unit() {
            return Err(Error::AlphabetMismatch);
        }
        let mut out = NCSeries::zero(alphabet, self.max_degree);
        for (k, part) in self.parts.iter().enumerate() {
            for (i, c) in part.iter().enumerate() {
                if !c.is_zero() {
                    out.add_term(Word::from_dense_index(i, self.n, k), c.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn from_sparse(s: &NCSeries<S>) -> Result<Self> {
        let alpha = s.alphabet();
        if !alpha.is_unit() {
            return Err(Error::InvalidAlphabet(
                "dense series need unit-degree generators".into(),
            ));
        }
        let mut out = Self::zero(alpha.len(), s.max_degree());
        for (w, c) in s.iter() {
            out.parts[w.len()][w.dense_index(alpha.len())] = c.clone();
        }
        Ok(out)
    }
}
