//! Hall bases of free Lie algebras over graded alphabets.
//!
//! Elements are ordered by degree first. Within one degree, generators come
//! before brackets (generators by the chosen permutation), and brackets
//! compare by left factor, then right factor. A bracket `[X,Y]` belongs to the
//! basis iff `X < Y` and, when `Y = [U,V]`, `U <= X`.

mod extract;

use std::fmt;
use std::ops::Range;
use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::free_algebra::{Alphabet, DenseSeries, NCSeries, Word};
use crate::scalar::{Rational, Scalar};

use extract::Extractor;

/// A Hall element as an owned commutator tree over generator ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HallTree {
    Leaf(usize),
    Bracket(Box<HallTree>, Box<HallTree>),
}

impl HallTree {
    pub fn bracket(left: HallTree, right: HallTree) -> HallTree {
        HallTree::Bracket(Box::new(left), Box::new(right))
    }

    pub fn degree(&self, alphabet: &Alphabet) -> u32 {
        match self {
            HallTree::Leaf(g) => alphabet.degree_of(*g),
            HallTree::Bracket(l, r) => l.degree(alphabet) + r.degree(alphabet),
        }
    }

    /// Fully parenthesised rendering such as `[A,[A,B]]`.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        match self {
            HallTree::Leaf(g) => alphabet.generator(*g).label.clone(),
            HallTree::Bracket(l, r) => format!("[{},{}]", l.render(alphabet), r.render(alphabet)),
        }
    }

    /// Parses the rendering produced by [`HallTree::render`].
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<HallTree> {
        fn parse_at(s: &[char], pos: &mut usize, alphabet: &Alphabet) -> Result<HallTree> {
            if *pos < s.len() && s[*pos] == '[' {
                *pos += 1;
                let left = parse_at(s, pos, alphabet)?;
                if *pos >= s.len() || s[*pos] != ',' {
                    return Err(Error::Parse("expected `,` in commutator".into()));
                }
                *pos += 1;
                let right = parse_at(s, pos, alphabet)?;
                if *pos >= s.len() || s[*pos] != ']' {
                    return Err(Error::Parse("expected `]` in commutator".into()));
                }
                *pos += 1;
                Ok(HallTree::bracket(left, right))
            } else {
                let start = *pos;
                while *pos < s.len() && !matches!(s[*pos], '[' | ']' | ',') {
                    *pos += 1;
                }
                let label: String = s[start..*pos].iter().collect();
                alphabet
                    .id_of(label.trim())
                    .map(HallTree::Leaf)
                    .ok_or_else(|| Error::Parse(format!("unknown generator `{label}`")))
            }
        }
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let tree = parse_at(&chars, &mut pos, alphabet)?;
        if pos != chars.len() {
            return Err(Error::Parse(format!("trailing input in `{text}`")));
        }
        Ok(tree)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf(usize),
    /// Indices of the left and right factor within the basis.
    Bracket(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HallNode {
    pub degree: u32,
    pub kind: NodeKind,
}

/// All Hall elements of degree `<= max_degree`, in increasing order.
pub struct HallBasis {
    alphabet: Arc<Alphabet>,
    max_degree: u32,
    ordering: Vec<usize>,
    nodes: Vec<HallNode>,
    by_degree: Vec<Range<usize>>,
    expansions: Vec<OnceLock<Vec<Vec<(Word, i64)>>>>,
    extractors: Vec<OnceLock<Extractor>>,
}

impl fmt::Debug for HallBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HallBasis")
            .field("generators", &self.alphabet.len())
            .field("max_degree", &self.max_degree)
            .field("ordering", &self.ordering)
            .field("len", &self.nodes.len())
            .finish()
    }
}

/// Checks that `ordering` lists every generator id exactly once.
pub fn validate_ordering(alphabet: &Alphabet, ordering: &[usize]) -> Result<()> {
    let mut seen = vec![false; alphabet.len()];
    if ordering.len() != alphabet.len() {
        return Err(Error::InvalidOrdering(format!(
            "ordering has {} entries for {} generators",
            ordering.len(),
            alphabet.len()
        )));
    }
    for &g in ordering {
        if g >= alphabet.len() || seen[g] {
            return Err(Error::InvalidOrdering(format!(
                "{ordering:?} is not a permutation"
            )));
        }
        seen[g] = true;
    }
    Ok(())
}

/// Parses an ordering like `"B<A"`, `"C<A<B"` or `"BAC"` into generator ids,
/// smallest first.
pub fn parse_ordering(alphabet: &Alphabet, text: &str) -> Result<Vec<usize>> {
    let labels: Vec<String> = if text.contains('<') {
        text.split('<').map(|s| s.trim().to_string()).collect()
    } else {
        text.trim().chars().map(|c| c.to_string()).collect()
    };
    let ids = labels
        .iter()
        .map(|l| {
            alphabet
                .id_of(l)
                .ok_or_else(|| Error::InvalidOrdering(format!("unknown generator `{l}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    validate_ordering(alphabet, &ids)?;
    Ok(ids)
}

/// Renders an ordering as `A<B<C`.
pub fn format_ordering(alphabet: &Alphabet, ordering: &[usize]) -> String {
    ordering
        .iter()
        .map(|&g| alphabet.generator(g).label.as_str())
        .collect::<Vec<_>>()
        .join("<")
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_orderings(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for g in 0..used.len() {
            if !used[g] {
                used[g] = true;
                prefix.push(g);
                rec(prefix, used, out);
                prefix.pop();
                used[g] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

impl HallBasis {
    pub fn new(alphabet: Arc<Alphabet>, max_degree: u32, ordering: &[usize]) -> Result<Self> {
        if max_degree == 0 {
            return Err(Error::InvalidAlphabet(
                "Hall basis needs max_degree >= 1".into(),
            ));
        }
        validate_ordering(&alphabet, ordering)?;
        let mut nodes: Vec<HallNode> = Vec::new();
        let mut by_degree: Vec<Range<usize>> = vec![0..0];
        for k in 1..=max_degree {
            let mut leaves: Vec<HallNode> = ordering
                .iter()
                .filter(|&&g| alphabet.degree_of(g) == k)
                .map(|&g| HallNode {
                    degree: k,
                    kind: NodeKind::Leaf(g),
                })
                .collect();
            let mut brackets: Vec<(usize, usize)> = Vec::new();
            for a in 1..k {
                let b = k - a;
                let xs = by_degree[a as usize].clone();
                for x in xs {
                    for y in by_degree[b as usize].clone() {
                        if x >= y {
                            continue;
                        }
                        if let NodeKind::Bracket(u, _) = nodes[y].kind {
                            if u > x {
                                continue;
                            }
                        }
                        brackets.push((x, y));
                    }
                }
            }
            brackets.sort_unstable();
            let start = nodes.len();
            nodes.append(&mut leaves);
            nodes.extend(brackets.into_iter().map(|(x, y)| HallNode {
                degree: k,
                kind: NodeKind::Bracket(x, y),
            }));
            by_degree.push(start..nodes.len());
        }
        let expansions = (0..=max_degree).map(|_| OnceLock::new()).collect();
        let extractors = (0..=max_degree).map(|_| OnceLock::new()).collect();
        Ok(HallBasis {
            alphabet,
            max_degree,
            ordering: ordering.to_vec(),
            nodes,
            by_degree,
            expansions,
            extractors,
        })
    }

    /// Shared, cached basis for the given alphabet, truncation and ordering.
    pub fn cached(
        alphabet: &Arc<Alphabet>,
        max_degree: u32,
        ordering: &[usize],
    ) -> Result<Arc<HallBasis>> {
        type Key = (Alphabet, u32, Vec<usize>);
        static CACHE: OnceLock<Mutex<FxHashMap<Key, Arc<HallBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(FxHashMap::default()));
        let key = ((**alphabet).clone(), max_degree, ordering.to_vec());
        if let Some(b) = cache.lock().expect("hall cache poisoned").get(&key) {
            return Ok(b.clone());
        }
        let basis = Arc::new(HallBasis::new(alphabet.clone(), max_degree, ordering)?);
        let mut guard = cache.lock().expect("hall cache poisoned");
        Ok(guard.entry(key).or_insert(basis).clone())
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn ordering(&self) -> &[usize] {
        &self.ordering
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[HallNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> HallNode {
        self.nodes[i]
    }

    /// Index range of the elements of degree `k`.
    pub fn degree_range(&self, k: u32) -> Range<usize> {
        if k == 0 || k > self.max_degree {
            return 0..0;
        }
        self.by_degree[k as usize].clone()
    }

    pub fn count(&self, k: u32) -> usize {
        self.degree_range(k).len()
    }

    pub fn counts(&self) -> Vec<usize> {
        (1..=self.max_degree).map(|k| self.count(k)).collect()
    }

    pub fn tree(&self, i: usize) -> HallTree {
        match self.nodes[i].kind {
            NodeKind::Leaf(g) => HallTree::Leaf(g),
            NodeKind::Bracket(l, r) => HallTree::bracket(self.tree(l), self.tree(r)),
        }
    }

    pub fn render(&self, i: usize) -> String {
        match self.nodes[i].kind {
            NodeKind::Leaf(g) => self.alphabet.generator(g).label.clone(),
            NodeKind::Bracket(l, r) => format!("[{},{}]", self.render(l), self.render(r)),
        }
    }

    /// Index of a tree in this basis, if it is a Hall element.
    pub fn index_of(&self, tree: &HallTree) -> Option<usize> {
        match tree {
            HallTree::Leaf(g) => {
                let k = self.alphabet.degree_of(*g);
                self.degree_range(k)
                    .find(|&i| self.nodes[i].kind == NodeKind::Leaf(*g))
            }
            HallTree::Bracket(l, r) => {
                let (li, ri) = (self.index_of(l)?, self.index_of(r)?);
                let k = self.nodes[li].degree + self.nodes[ri].degree;
                self.degree_range(k)
                    .find(|&i| self.nodes[i].kind == NodeKind::Bracket(li, ri))
            }
        }
    }

    /// One element per line, grouped by degree.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for k in 1..=self.max_degree {
            for i in self.degree_range(k) {
                out.push_str(&format!("{k}\t{}\n", self.render(i)));
            }
        }
        out
    }

    /// Word expansions (integer coefficients) of all elements of degree `k`,
    /// in basis order.
    pub fn expansions(&self, k: u32) -> &[Vec<(Word, i64)>] {
        if k == 0 || k > self.max_degree {
            return &[];
        }
        self.expansions[k as usize].get_or_init(|| {
            self.degree_range(k)
                .map(|i| {
                    let mut v: Vec<(Word, i64)> = self.expand_integer(i).into_iter().collect();
                    v.sort_unstable_by_key(|(w, _)| *w);
                    v
                })
                .collect()
        })
    }

    fn expand_integer(&self, i: usize) -> FxHashMap<Word, i64> {
        match self.nodes[i].kind {
            NodeKind::Leaf(g) => std::iter::once((Word::letter_word(g), 1)).collect(),
            NodeKind::Bracket(l, r) => {
                let x = self.expansion_of(l);
                let y = self.expansion_of(r);
                let mut out: FxHashMap<Word, i64> = FxHashMap::default();
                for (u, a) in x.iter() {
                    for (v, b) in y.iter() {
                        let uv = u.concat(*v).expect("Hall degree fits in a word");
                        let vu = v.concat(*u).expect("Hall degree fits in a word");
                        *out.entry(uv).or_insert(0) += a * b;
                        *out.entry(vu).or_insert(0) -= a * b;
                    }
                }
                out.retain(|_, c| *c != 0);
                out
            }
        }
    }

    fn expansion_of(&self, i: usize) -> &[(Word, i64)] {
        let k = self.nodes[i].degree;
        let local = i - self.degree_range(k).start;
        &self.expansions(k)[local]
    }

    /// Word series of basis element `i`.
    pub fn expand<S: Scalar>(&self, i: usize, max_degree: u32) -> Result<NCSeries<S>> {
        let degree = self.nodes[i].degree;
        if degree > max_degree {
            return Err(Error::DegreeExceedsTruncation { degree, max_degree });
        }
        Ok(NCSeries::from_terms(
            self.alphabet.clone(),
            max_degree,
            self.expansion_of(i)
                .iter()
                .map(|(w, c)| (*w, int_scalar::<S>(*c))),
        ))
    }

    fn extractor(&self, k: u32) -> &Extractor {
        self.extractors[k as usize].get_or_init(|| Extractor::build(self.expansions(k)))
    }

    /// Coordinates of the degree-`k` part of `s` together with the max-norm of
    /// the part not representable in the span of degree-`k` Hall elements.
    pub fn coordinates_at<S: Scalar>(&self, s: &NCSeries<S>, k: u32) -> (Vec<S>, f64) {
        let ex = self.extractor(k);
        let coords = ex.solve(|w| s.coeff(w));
        let mut rem: FxHashMap<Word, S> = s
            .iter()
            .filter(|(w, _)| self.alphabet.word_degree(*w) == k)
            .map(|(w, c)| (w, c.clone()))
            .collect();
        for (c, exp) in coords.iter().zip(self.expansions(k)) {
            if c.is_zero() {
                continue;
            }
            for (w, e) in exp {
                rem.entry(*w)
                    .or_insert_with(S::zero)
                    .sub_assign_ref(&c.mul_ref(&int_scalar::<S>(*e)));
            }
        }
        let residual = rem.values().map(Scalar::magnitude).fold(0.0, f64::max);
        (coords, residual)
    }

    /// Coordinates of the degree-`k` part of a dense series; no residual.
    pub fn dense_coordinates_at<S: Scalar>(&self, s: &DenseSeries<S>, k: u32) -> Vec<S> {
        let ex = self.extractor(k);
        let part = s.part(k);
        let n = self.alphabet.len();
        ex.solve(|w| part[w.dense_index(n)].clone())
    }

    /// Max-norm of `s_k - Σ coords_i · P_i` for the dense degree-`k` part.
    pub fn dense_residual_at<S: Scalar>(&self, s: &DenseSeries<S>, k: u32, coords: &[S]) -> f64 {
        let n = self.alphabet.len();
        let mut rem: Vec<S> = s.part(k).to_vec();
        for (c, exp) in coords.iter().zip(self.expansions(k)) {
            for (w, e) in exp {
                rem[w.dense_index(n)].sub_assign_ref(&c.mul_ref(&int_scalar::<S>(*e)));
            }
        }
        rem.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }
}

pub(crate) fn int_scalar<S: Scalar>(c: i64) -> S {
    S::from_const(&crate::scalar::Const::from_int(c))
}

/// A Lie element as coordinates over a Hall basis (aligned with its nodes).
#[derive(Clone)]
pub struct LieSeries<S> {
    basis: Arc<HallBasis>,
    coords: Vec<S>,
}

impl<S: Scalar> LieSeries<S> {
    pub fn new(basis: Arc<HallBasis>, coords: Vec<S>) -> Result<Self> {
        if coords.len() != basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a basis of {} elements",
                coords.len(),
                basis.len()
            )));
        }
        Ok(LieSeries { basis, coords })
    }

    pub fn basis(&self) -> &Arc<HallBasis> {
        &self.basis
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &S {
        &self.coords[i]
    }

    pub fn coord_of(&self, tree: &HallTree) -> Option<&S> {
        self.basis.index_of(tree).map(|i| &self.coords[i])
    }

    pub fn degree_coords(&self, k: u32) -> &[S] {
        &self.coords[self.basis.degree_range(k)]
    }

    /// Nonzero coordinates as `(rendered element, value)`.
    pub fn nonzero(&self) -> Vec<(String, S)> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.basis.render(i), c.clone()))
            .collect()
    }

    /// Word series `Σ c_i P_i`.
    pub fn to_series(&self) -> NCSeries<S> {
        let d = self.basis.max_degree();
        let mut out = NCSeries::zero(self.basis.alphabet().clone(), d);
        for k in 1..=d {
            let range = self.basis.degree_range(k);
            for (c, exp) in self.coords[range].iter().zip(self.basis.expansions(k)) {
                if c.is_zero() {
                    continue;
                }
                for (w, e) in exp {
                    out.add_term(*w, c.mul_ref(&int_scalar::<S>(*e)));
                }
            }
        }
        out
    }
}

/// Hall coordinates of `s` over `basis`, plus the max-norm residual of the
/// non-Lie remainder (including any constant term).
pub fn lie_coordinates<S: Scalar>(
    s: &NCSeries<S>,
    basis: &Arc<HallBasis>,
) -> Result<(LieSeries<S>, f64)> {
    if s.max_degree() > basis.max_degree() {
        return Err(Error::DegreeExceedsTruncation {
            degree: s.max_degree(),
            max_degree: basis.max_degree(),
        });
    }
    if **s.alphabet() != **basis.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let mut coords = vec![S::zero(); basis.len()];
    let mut residual = s.constant_term().magnitude();
    for k in 1..=s.max_degree() {
        let range = basis.degree_range(k);
        let (c, r) = basis.coordinates_at(s, k);
        for (slot, v) in coords[range].iter_mut().zip(c) {
            *slot = v;
        }
        residual = residual.max(r);
    }
    Ok((
        LieSeries {
            basis: basis.clone(),
            coords,
        },
        residual,
    ))
}

/// Like [`lie_coordinates`] but fails when the residual exceeds `tol`.
pub fn lie_coordinates_checked<S: Scalar>(
    s: &NCSeries<S>,
    basis: &Arc<HallBasis>,
    tol: f64,
) -> Result<LieSeries<S>> {
    let (lie, residual) = lie_coordinates(s, basis)?;
    if residual > tol {
        let degree = (1..=s.max_degree())
            .find(|&k| basis.coordinates_at(s, k).1 > tol)
            .unwrap_or(0);
        return Err(Error::NotLieElement { degree, residual });
    }
    Ok(lie)
}

/// Word expansion of an arbitrary commutator tree.
pub fn expand_hall(
    tree: &HallTree,
    alphabet: &Arc<Alphabet>,
    max_degree: u32,
) -> Result<NCSeries<Rational>> {
    let degree = tree.degree(alphabet);
    if degree > max_degree {
        return Err(Error::DegreeExceedsTruncation { degree, max_degree });
    }
    match tree {
        HallTree::Leaf(g) => NCSeries::from_generator(
            alphabet.clone(),
            *g,
            Rational::from_integer(1.into()),
            max_degree,
        ),
        HallTree::Bracket(l, r) => {
            let x = expand_hall(l, alphabet, max_degree)?;
            let y = expand_hall(r, alphabet, max_degree)?;
            x.commutator(&y)
        }
    }
}

fn mobius(mut n: u64) -> i128 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Dimension of the degree-`k` part of the free Lie algebra on `n` unit-degree
/// generators: `(1/k) Σ_{j|k} μ(j) n^{k/j}`.
pub fn witt_dimension(n: u64, k: u32) -> u128 {
    assert!(n >= 1 && k >= 1, "witt_dimension needs n >= 1 and k >= 1");
    let k64 = k as u64;
    let mut sum: i128 = 0;
    for j in 1..=k64 {
        if k64.is_multiple_of(j) {
            sum += mobius(j) * (n as i128).pow((k64 / j) as u32);
        }
    }
    (sum / k as i128) as u128
}

#[cfg(test)]
mod tests;
