use rustc_hash::FxHashMap;

use crate::free_algebra::Word;
use crate::scalar::{Const, Rational, Scalar};

/// Exact elimination data for one degree of a Hall basis.
///
/// Column `c` is the word expansion `P_c` of the `c`-th element of that
/// degree. Columns are reduced in order against earlier pivots, giving vectors
/// `r_i = Σ_c T_ic P_c` with `r_i[p_i] = 1` and `r_i[p_j] = 0` for `j < i`.
/// A Lie element `s = Σ β_i r_i` is then recovered by forward substitution on
/// the pivot words alone.
pub(crate) struct Extractor {
    pivots: Vec<Word>,
    /// For pivot `i`: `(j, -r_j[p_i])` for `j < i`.
    lower: Vec<Vec<(usize, Const)>>,
    transform: Vec<Vec<(usize, Const)>>,
}

impl Extractor {
    pub(crate) fn build(columns: &[Vec<(Word, i64)>]) -> Extractor {
        let mut pivots: Vec<Word> = Vec::with_capacity(columns.len());
        let mut reduced: Vec<FxHashMap<Word, Rational>> = Vec::with_capacity(columns.len());
        let mut transforms: Vec<FxHashMap<usize, Rational>> = Vec::with_capacity(columns.len());
        for (c, col) in columns.iter().enumerate() {
            let mut v: FxHashMap<Word, Rational> = col
                .iter()
                .map(|(w, x)| (*w, Rational::from_integer((*x).into())))
                .collect();
            let mut t: FxHashMap<usize, Rational> = FxHashMap::default();
            t.insert(c, Rational::from_integer(1.into()));
            for (j, p) in pivots.iter().enumerate() {
                let Some(f) = v.get(p).cloned() else { continue };
                for (w, x) in &reduced[j] {
                    let e = v
                        .entry(*w)
                        .or_insert_with(|| Rational::from_integer(0.into()));
                    *e -= &f * x;
                }
                v.retain(|_, x| *x != Rational::from_integer(0.into()));
                for (cc, x) in &transforms[j] {
                    let e = t
                        .entry(*cc)
                        .or_insert_with(|| Rational::from_integer(0.into()));
                    *e -= &f * x;
                }
                t.retain(|_, x| *x != Rational::from_integer(0.into()));
            }
            let pivot = *v
                .keys()
                .min()
                .expect("Hall expansions are linearly independent");
            let scale = v[&pivot].recip();
            for x in v.values_mut() {
                *x *= &scale;
            }
            for x in t.values_mut() {
                *x *= &scale;
            }
            pivots.push(pivot);
            reduced.push(v);
            transforms.push(t);
        }
        let index: FxHashMap<Word, usize> =
            pivots.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        let mut lower: Vec<Vec<(usize, Const)>> = vec![Vec::new(); pivots.len()];
        for (j, r) in reduced.iter().enumerate() {
            for (w, x) in r {
                if let Some(&i) = index.get(w) {
                    if i > j {
                        lower[i].push((j, Const::new(-x.clone())));
                    }
                }
            }
        }
        for row in &mut lower {
            row.sort_by_key(|(j, _)| *j);
        }
        let transform = transforms
            .into_iter()
            .map(|t| {
                let mut v: Vec<(usize, Const)> =
                    t.into_iter().map(|(c, x)| (c, Const::new(x))).collect();
                v.sort_by_key(|(c, _)| *c);
                v
            })
            .collect();
        Extractor {
            pivots,
            lower,
            transform,
        }
    }

    /// Coordinates of the Lie element whose pivot-word coefficients are given
    /// by `get`.
    pub(crate) fn solve<S: Scalar>(&self, get: impl Fn(Word) -> S) -> Vec<S> {
        let mut betas: Vec<S> = Vec::with_capacity(self.pivots.len());
        for (i, p) in self.pivots.iter().enumerate() {
            let mut b = get(*p);
            for (j, c) in &self.lower[i] {
                b.add_scaled(&betas[*j], c);
            }
            betas.push(b);
        }
        let mut coords = vec![S::zero(); self.pivots.len()];
        for (beta, row) in betas.iter().zip(&self.transform) {
            if beta.is_zero() {
                continue;
            }
            for (c, t) in row {
                coords[*c].add_scaled(beta, t);
            }
        }
        coords
    }
}
