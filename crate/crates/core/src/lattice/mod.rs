//! Interaction graphs of lattice models with finite-range interactions.
//!
//! Sites live on an integer grid; an interaction is the set of sites it acts
//! on. Coarse graining blocks sites into effective sites until only onsite and
//! nearest-neighbor terms remain, and [`partition`] splits the interactions
//! into at most three groups whose local operators have disjoint supports.

mod coarse;
mod io;
mod partition;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use coarse::{coarse_grain, reduce_to_nearest_neighbor, triangular_merge, CoarseMap};
pub use partition::{
    partition, validate_partition, Certificate, Operator, Partition, Strategy, Violation,
};

/// Coordinate conventions of the built-in lattices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    /// Sites `x`.
    Chain,
    /// Sites `(x, y)`.
    Square,
    /// Offset rows: odd rows are shifted right by half a spacing, so `(x, y)`
    /// touches `(x - 1, y ± 1)`, `(x, y ± 1)` for even `y` and `(x, y ± 1)`,
    /// `(x + 1, y ± 1)` for odd `y`.
    Triangular,
    /// Brick wall: horizontal bonds everywhere, a vertical bond above
    /// `(x, y)` iff `x + y` is even.
    Hexagonal,
    /// Triangular grid in axial coordinates (steps `(1,0)`, `(0,1)`, `(1,1)`)
    /// with the odd-odd points removed.
    Kagome,
    /// Sites on an integer grid with no further structure.
    Grid,
}

impl Geometry {
    pub const ALL: [Geometry; 6] = [
        Geometry::Chain,
        Geometry::Square,
        Geometry::Triangular,
        Geometry::Hexagonal,
        Geometry::Kagome,
        Geometry::Grid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Geometry::Chain => "chain",
            Geometry::Square => "square",
            Geometry::Triangular => "triangular",
            Geometry::Hexagonal => "hexagonal",
            Geometry::Kagome => "kagome",
            Geometry::Grid => "grid",
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Geometry::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown geometry `{s}`")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct InteractionGraph {
    dim: usize,
    geometry: Geometry,
    extent: Vec<i64>,
    periodic: Vec<bool>,
    sites: Vec<Vec<i64>>,
    interactions: Vec<Vec<usize>>,
    index: FxHashMap<Vec<i64>, usize>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawGraph {
    dim: usize,
    geometry: Geometry,
    extent: Vec<i64>,
    periodic: Vec<bool>,
    sites: Vec<Vec<i64>>,
    interactions: Vec<Vec<usize>>,
}

impl TryFrom<RawGraph> for InteractionGraph {
    type Error = Error;

    fn try_from(r: RawGraph) -> Result<Self> {
        InteractionGraph::new(
            r.dim,
            r.geometry,
            r.extent,
            r.periodic,
            r.sites,
            r.interactions,
        )
    }
}

impl From<InteractionGraph> for RawGraph {
    fn from(g: InteractionGraph) -> Self {
        RawGraph {
            dim: g.dim,
            geometry: g.geometry,
            extent: g.extent,
            periodic: g.periodic,
            sites: g.sites,
            interactions: g.interactions,
        }
    }
}

impl PartialEq for InteractionGraph {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.geometry == other.geometry
            && self.extent == other.extent
            && self.periodic == other.periodic
            && self.sites == other.sites
            && self.interactions == other.interactions
    }
}

impl InteractionGraph {
    /// Checks and builds a graph. Interaction members are sorted; site ids are
    /// positions in `sites`.
    pub fn new(
        dim: usize,
        geometry: Geometry,
        extent: Vec<i64>,
        periodic: Vec<bool>,
        sites: Vec<Vec<i64>>,
        mut interactions: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidGraph(format!(
                "dimension {dim} (1 or 2 supported)"
            )));
        }
        if (geometry == Geometry::Chain) != (dim == 1) && geometry != Geometry::Grid {
            return Err(Error::InvalidGraph(format!(
                "geometry {geometry} in dimension {dim}"
            )));
        }
        if extent.len() != dim || periodic.len() != dim {
            return Err(Error::InvalidGraph(
                "extent and periodic flags need one entry per dimension".into(),
            ));
        }
        if extent.iter().any(|&e| e < 1) {
            return Err(Error::InvalidGraph(format!("extent {extent:?}")));
        }
        let mut index = FxHashMap::default();
        for (id, c) in sites.iter().enumerate() {
            if c.len() != dim || c.iter().zip(&extent).any(|(&x, &e)| !(0..e).contains(&x)) {
                return Err(Error::InvalidGraph(format!(
                    "site {id} at {c:?} outside extent {extent:?}"
                )));
            }
            if index.insert(c.clone(), id).is_some() {
                return Err(Error::InvalidGraph(format!("two sites at {c:?}")));
            }
        }
        for (k, int) in interactions.iter_mut().enumerate() {
            int.sort_unstable();
            int.dedup();
            if int.is_empty() || int.iter().any(|&s| s >= sites.len()) {
                return Err(Error::InvalidGraph(format!(
                    "interaction {k} has invalid members"
                )));
            }
        }
        Ok(InteractionGraph {
            dim,
            geometry,
            extent,
            periodic,
            sites,
            interactions,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn extent(&self) -> &[i64] {
        &self.extent
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    pub fn sites(&self) -> &[Vec<i64>] {
        &self.sites
    }

    pub fn interactions(&self) -> &[Vec<usize>] {
        &self.interactions
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn num_interactions(&self) -> usize {
        self.interactions.len()
    }

    /// Site at `coords`, wrapping periodic directions.
    pub fn site_at(&self, coords: &[i64]) -> Option<usize> {
        let mut c = coords.to_vec();
        for d in 0..self.dim {
            if self.periodic[d] {
                c[d] = c[d].rem_euclid(self.extent[d]);
            }
        }
        self.index.get(&c).copied()
    }

    /// Per-direction distance between two sites (minimum image when periodic).
    pub fn separation(&self, a: usize, b: usize) -> Vec<i64> {
        (0..self.dim)
            .map(|d| {
                let delta = (self.sites[a][d] - self.sites[b][d]).abs();
                if self.periodic[d] {
                    delta.min(self.extent[d] - delta)
                } else {
                    delta
                }
            })
            .collect()
    }

    /// Per-direction range of an interaction: largest separation among its members.
    pub fn range(&self, interaction: usize) -> Vec<i64> {
        let members = &self.interactions[interaction];
        let mut r = vec![0; self.dim];
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                for (ri, s) in r.iter_mut().zip(self.separation(a, b)) {
                    *ri = (*ri).max(s);
                }
            }
        }
        r
    }

    pub fn max_range(&self) -> i64 {
        (0..self.interactions.len())
            .flat_map(|k| self.range(k))
            .max()
            .unwrap_or(0)
    }

    /// True for a chain with ranges ≤ 1 or a triangular lattice whose
    /// interactions are onsite terms and triangular bonds.
    pub fn is_nearest_neighbor(&self) -> bool {
        match self.geometry {
            Geometry::Chain => self.max_range() <= 1,
            Geometry::Triangular => self.interactions.iter().all(|int| {
                int.iter().enumerate().all(|(i, &a)| {
                    int[i + 1..]
                        .iter()
                        .all(|&b| self.triangular_neighbors(a, b))
                })
            }),
            _ => self.dim == 1 && self.max_range() <= 1,
        }
    }

    fn triangular_neighbors(&self, a: usize, b: usize) -> bool {
        let (pa, pb) = (&self.sites[a], &self.sites[b]);
        let dy = pb[1] - pa[1];
        let offsets: &[(i64, i64)] = match (dy.rem_euclid(2) == 0, pa[1].rem_euclid(2) == 0) {
            (true, _) => &[(1, 0), (-1, 0)],
            (false, true) => &[(-1, 1), (0, 1), (-1, -1), (0, -1)],
            (false, false) => &[(0, 1), (1, 1), (0, -1), (1, -1)],
        };
        offsets
            .iter()
            .any(|&(ox, oy)| self.site_at(&[pa[0] + ox, pa[1] + oy]) == Some(b))
    }

    fn from_bonds(
        geometry: Geometry,
        extent: Vec<i64>,
        periodic: Vec<bool>,
        sites: Vec<Vec<i64>>,
        onsite: bool,
        offsets: impl Fn(&[i64]) -> Vec<Vec<i64>>,
    ) -> Self {
        let dim = extent.len();
        let mut g = InteractionGraph::new(dim, geometry, extent, periodic, sites, Vec::new())
            .expect("built-in lattices are well formed");
        let mut bonds = BTreeSet::new();
        for (i, c) in g.sites.iter().enumerate() {
            for o in offsets(c) {
                let target: Vec<i64> = c.iter().zip(&o).map(|(a, b)| a + b).collect();
                if let Some(j) = g.site_at(&target) {
                    if i != j {
                        bonds.insert((i.min(j), i.max(j)));
                    }
                }
            }
        }
        if onsite {
            g.interactions.extend((0..g.sites.len()).map(|i| vec![i]));
        }
        g.interactions
            .extend(bonds.into_iter().map(|(i, j)| vec![i, j]));
        g
    }

    /// Chain of `len` sites with two-site terms up to distance `range`.
    pub fn chain(len: usize, range: usize, periodic: bool, onsite: bool) -> Self {
        let sites = (0..len as i64).map(|x| vec![x]).collect();
        InteractionGraph::from_bonds(
            Geometry::Chain,
            vec![len as i64],
            vec![periodic],
            sites,
            onsite,
            |_| (1..=range as i64).map(|d| vec![d]).collect(),
        )
    }

    /// Square lattice with two-site terms for all `|Δx|, |Δy| ≤ range`
    /// (diagonals included). `range` 1 without diagonals is [`Self::square`].
    pub fn square_range(lx: usize, ly: usize, range: usize, periodic: bool, onsite: bool) -> Self {
        let r = range as i64;
        let mut offsets = Vec::new();
        for dy in 0..=r {
            for dx in -r..=r {
                if dy > 0 || dx > 0 {
                    offsets.push(vec![dx, dy]);
                }
            }
        }
        InteractionGraph::from_bonds(
            Geometry::Square,
            vec![lx as i64, ly as i64],
            vec![periodic; 2],
            grid_sites(lx, ly),
            onsite,
            |_| offsets.clone(),
        )
    }

    /// Square lattice with nearest-neighbor bonds.
    pub fn square(lx: usize, ly: usize, periodic: bool, onsite: bool) -> Self {
        InteractionGraph::from_bonds(
            Geometry::Square,
            vec![lx as i64, ly as i64],
            vec![periodic; 2],
            grid_sites(lx, ly),
            onsite,
            |_| vec![vec![1, 0], vec![0, 1]],
        )
    }

    pub fn triangular(lx: usize, ly: usize, periodic: bool, onsite: bool) -> Self {
        InteractionGraph::from_bonds(
            Geometry::Triangular,
            vec![lx as i64, ly as i64],
            vec![periodic; 2],
            grid_sites(lx, ly),
            onsite,
            |c| {
                let shift = if c[1].rem_euclid(2) == 0 { -1 } else { 1 };
                vec![vec![1, 0], vec![0, 1], vec![shift, 1]]
            },
        )
    }

    pub fn hexagonal(lx: usize, ly: usize, periodic: bool, onsite: bool) -> Self {
        InteractionGraph::from_bonds(
            Geometry::Hexagonal,
            vec![lx as i64, ly as i64],
            vec![periodic; 2],
            grid_sites(lx, ly),
            onsite,
            |c| {
                if (c[0] + c[1]).rem_euclid(2) == 0 {
                    vec![vec![1, 0], vec![0, 1]]
                } else {
                    vec![vec![1, 0]]
                }
            },
        )
    }

    /// Kagomé lattice of `cx × cy` unit cells (three sites each).
    pub fn kagome(cx: usize, cy: usize, periodic: bool, onsite: bool) -> Self {
        let (lx, ly) = (2 * cx, 2 * cy);
        let sites = grid_sites(lx, ly)
            .into_iter()
            .filter(|c| c[0] % 2 == 0 || c[1] % 2 == 0)
            .collect();
        InteractionGraph::from_bonds(
            Geometry::Kagome,
            vec![lx as i64, ly as i64],
            vec![periodic; 2],
            sites,
            onsite,
            |_| vec![vec![1, 0], vec![0, 1], vec![1, 1]],
        )
    }
}

fn grid_sites(lx: usize, ly: usize) -> Vec<Vec<i64>> {
    let mut s = Vec::with_capacity(lx * ly);
    for y in 0..ly as i64 {
        for x in 0..lx as i64 {
            s.push(vec![x, y]);
        }
    }
    s
}
