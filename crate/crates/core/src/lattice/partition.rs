use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Geometry, InteractionGraph};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Pick from the geometry: bond parity, plaquettes, triangles or edges,
    /// falling back to [`Strategy::Greedy`].
    Auto,
    /// Chains with ranges ≤ 1: even bonds and odd bonds.
    BondParity,
    /// Chains with ranges ≤ 2: three-site operators on `{i, i+1, i+2}`,
    /// grouped by `i mod 3`.
    ChainTriples,
    /// Triangular lattice: up-plaquettes colored by three colors.
    TriangularPlaquettes,
    /// Square lattice: 2×2 plaquettes in two checkerboard groups.
    SquareFour,
    /// Square lattice: three-site corners in three groups.
    SquareThree,
    /// Hexagonal lattice: three edge classes.
    HexagonalEdges,
    /// Kagomé lattice: up triangles and down triangles.
    KagomeTriangles,
    /// Backtracking coloring of the conflict graph of interactions within
    /// the dimension's budget (2 in 1d, 3 in 2d).
    Greedy,
}

impl Strategy {
    pub const ALL: [Strategy; 9] = [
        Strategy::Auto,
        Strategy::BondParity,
        Strategy::ChainTriples,
        Strategy::TriangularPlaquettes,
        Strategy::SquareFour,
        Strategy::SquareThree,
        Strategy::HexagonalEdges,
        Strategy::KagomeTriangles,
        Strategy::Greedy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Auto => "auto",
            Strategy::BondParity => "bond-parity",
            Strategy::ChainTriples => "chain-triples",
            Strategy::TriangularPlaquettes => "triangular-plaquettes",
            Strategy::SquareFour => "square-four",
            Strategy::SquareThree => "square-three",
            Strategy::HexagonalEdges => "hexagonal-edges",
            Strategy::KagomeTriangles => "kagome-triangles",
            Strategy::Greedy => "greedy",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown partition strategy `{s}`")))
    }
}

/// A local operator: the sum of its interactions, acting on `support`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Operator {
    pub support: Vec<usize>,
    pub interactions: Vec<usize>,
}

/// Structure that forced a strategy past its budget, e.g. the sites of an
/// odd cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub message: String,
    pub sites: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub strategy: Strategy,
    /// Group k holds operators whose supports are pairwise disjoint.
    pub groups: Vec<Vec<Operator>>,
    /// Present when more groups than the dimension's budget were needed.
    pub certificate: Option<Certificate>,
}

impl Partition {
    pub fn n(&self) -> usize {
        self.groups.len()
    }

    /// Interaction indices of group `k`, sorted.
    pub fn group_interactions(&self, k: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.groups[k]
            .iter()
            .flat_map(|op| op.interactions.iter().copied())
            .collect();
        v.sort_unstable();
        v
    }

    pub fn supports(&self, k: usize) -> Vec<Vec<usize>> {
        self.groups[k].iter().map(|op| op.support.clone()).collect()
    }

    /// Largest operator support.
    pub fn max_support(&self) -> usize {
        self.groups
            .iter()
            .flatten()
            .map(|op| op.support.len())
            .max()
            .unwrap_or(0)
    }

    /// Group of each interaction.
    pub fn labels(&self, num_interactions: usize) -> Vec<Option<usize>> {
        let mut labels = vec![None; num_interactions];
        for (k, group) in self.groups.iter().enumerate() {
            for op in group {
                for &i in &op.interactions {
                    if i < num_interactions {
                        labels[i] = Some(k);
                    }
                }
            }
        }
        labels
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    UnknownInteraction {
        interaction: usize,
    },
    Missing {
        interaction: usize,
    },
    Repeated {
        interaction: usize,
        groups: Vec<usize>,
    },
    SupportTooSmall {
        group: usize,
        operator: usize,
        interaction: usize,
    },
    Overlap {
        group: usize,
        operators: (usize, usize),
        sites: Vec<usize>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownInteraction { interaction } => {
                write!(f, "interaction {interaction} does not exist")
            }
            Violation::Missing { interaction } => {
                write!(f, "interaction {interaction} is in no group")
            }
            Violation::Repeated {
                interaction,
                groups,
            } => {
                write!(
                    f,
                    "interaction {interaction} appears more than once (groups {groups:?})"
                )
            }
            Violation::SupportTooSmall {
                group,
                operator,
                interaction,
            } => {
                write!(
                    f,
                    "group {group} operator {operator} does not cover interaction {interaction}"
                )
            }
            Violation::Overlap {
                group,
                operators,
                sites,
            } => {
                write!(
                    f,
                    "group {group} operators {} and {} share sites {sites:?}",
                    operators.0, operators.1
                )
            }
        }
    }
}

/// Checks that groups are disjoint and exhaustive over the interactions and
/// that operator supports within a group do not overlap.
pub fn validate_partition(g: &InteractionGraph, part: &Partition) -> (bool, Vec<Violation>) {
    let mut violations = Vec::new();
    let mut seen: Vec<Vec<usize>> = vec![Vec::new(); g.num_interactions()];
    for (k, group) in part.groups.iter().enumerate() {
        let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
        for (o, op) in group.iter().enumerate() {
            for &i in &op.interactions {
                let Some(int) = g.interactions().get(i) else {
                    violations.push(Violation::UnknownInteraction { interaction: i });
                    continue;
                };
                seen[i].push(k);
                if !int.iter().all(|s| op.support.contains(s)) {
                    violations.push(Violation::SupportTooSmall {
                        group: k,
                        operator: o,
                        interaction: i,
                    });
                }
            }
            for &s in &op.support {
                if let Some(&prev) = owner.get(&s) {
                    let shared: Vec<usize> = op
                        .support
                        .iter()
                        .copied()
                        .filter(|x| group[prev].support.contains(x))
                        .collect();
                    let v = Violation::Overlap {
                        group: k,
                        operators: (prev, o),
                        sites: shared,
                    };
                    if !violations.contains(&v) {
                        violations.push(v);
                    }
                } else {
                    owner.insert(s, o);
                }
            }
        }
    }
    for (i, groups) in seen.into_iter().enumerate() {
        match groups.len() {
            0 => violations.push(Violation::Missing { interaction: i }),
            1 => {}
            _ => violations.push(Violation::Repeated {
                interaction: i,
                groups,
            }),
        }
    }
    (violations.is_empty(), violations)
}

/// Splits the interactions of `g` into groups of commuting local operators.
pub fn partition(g: &InteractionGraph, strategy: Strategy) -> Result<Partition> {
    let strategy = match strategy {
        Strategy::Auto => auto_strategy(g),
        s => s,
    };
    let require = |geometry: Geometry| -> Result<()> {
        if g.geometry() == geometry {
            Ok(())
        } else {
            Err(Error::InvalidGraph(format!(
                "strategy {strategy} needs a {geometry} graph, got {}",
                g.geometry()
            )))
        }
    };
    let mut part = match strategy {
        Strategy::Auto => unreachable!(),
        Strategy::BondParity => {
            require(Geometry::Chain)?;
            bond_parity(g)?
        }
        Strategy::ChainTriples => {
            require(Geometry::Chain)?;
            from_tiles(g, &chain_tiles(g, 3))?
        }
        Strategy::TriangularPlaquettes => {
            require(Geometry::Triangular)?;
            from_tiles(g, &triangular_tiles(g))?
        }
        Strategy::SquareFour => {
            require(Geometry::Square)?;
            from_tiles(g, &square_four_tiles(g))?
        }
        Strategy::SquareThree => {
            require(Geometry::Square)?;
            from_tiles(g, &square_three_tiles(g))?
        }
        Strategy::HexagonalEdges => {
            require(Geometry::Hexagonal)?;
            from_tiles(g, &hexagonal_tiles(g))?
        }
        Strategy::KagomeTriangles => {
            require(Geometry::Kagome)?;
            from_tiles(g, &kagome_tiles(g))?
        }
        Strategy::Greedy => greedy(g, if g.dim() == 1 { 2 } else { 3 })?,
    };
    part.strategy = strategy;
    Ok(part)
}

fn auto_strategy(g: &InteractionGraph) -> Strategy {
    let two_site_nn = || {
        g.interactions()
            .iter()
            .enumerate()
            .all(|(k, int)| int.len() <= 2 && g.range(k).iter().sum::<i64>() <= 1)
    };
    match g.geometry() {
        Geometry::Chain if g.max_range() <= 1 => Strategy::BondParity,
        Geometry::Chain if g.max_range() == 2 => Strategy::ChainTriples,
        Geometry::Triangular if g.is_nearest_neighbor() => Strategy::TriangularPlaquettes,
        Geometry::Square if two_site_nn() => Strategy::SquareFour,
        Geometry::Hexagonal => Strategy::HexagonalEdges,
        Geometry::Kagome => Strategy::KagomeTriangles,
        _ => Strategy::Greedy,
    }
}

/// Candidate operator support: a set of grid points and the group it
/// belongs to. Points outside the lattice are ignored.
struct Tile {
    group: usize,
    points: Vec<Vec<i64>>,
}

fn span(g: &InteractionGraph, d: usize, overhang: i64) -> std::ops::Range<i64> {
    if g.periodic()[d] {
        0..g.extent()[d]
    } else {
        -overhang..g.extent()[d]
    }
}

/// Assigns every interaction to the first tile (lowest group, then
/// generation order) that contains all its sites.
fn from_tiles(g: &InteractionGraph, tiles: &[Tile]) -> Result<Partition> {
    let ngroups = tiles.iter().map(|t| t.group + 1).max().unwrap_or(0);
    let sites: Vec<Vec<usize>> = tiles
        .iter()
        .map(|t| {
            let mut s: Vec<usize> = t.points.iter().filter_map(|p| g.site_at(p)).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let mut order: Vec<usize> = (0..tiles.len()).collect();
    order.sort_by_key(|&t| tiles[t].group);
    let mut by_site: Vec<Vec<usize>> = vec![Vec::new(); g.num_sites()];
    for &t in &order {
        for &s in &sites[t] {
            by_site[s].push(t);
        }
    }
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, int) in g.interactions().iter().enumerate() {
        let tile = by_site[int[0]]
            .iter()
            .copied()
            .find(|&t| int.iter().all(|s| sites[t].binary_search(s).is_ok()))
            .ok_or_else(|| Error::PartitionFailed {
                message: format!("interaction {i} fits no operator of this pattern"),
                certificate: int.clone(),
            })?;
        members.entry(tile).or_default().push(i);
    }
    let mut groups: Vec<Vec<Operator>> = vec![Vec::new(); ngroups];
    for (tile, interactions) in members {
        let support: BTreeSet<usize> = interactions
            .iter()
            .flat_map(|&i| g.interactions()[i].iter().copied())
            .collect();
        groups[tiles[tile].group].push(Operator {
            support: support.into_iter().collect(),
            interactions,
        });
    }
    groups.retain(|grp| !grp.is_empty());
    let part = Partition {
        strategy: Strategy::Auto,
        groups,
        certificate: None,
    };
    if let (false, violations) = validate_partition(g, &part) {
        let sites = violations
            .iter()
            .find_map(|v| match v {
                Violation::Overlap { sites, .. } => Some(sites.clone()),
                _ => None,
            })
            .unwrap_or_default();
        return Err(Error::PartitionFailed {
            message: format!(
                "pattern does not fit the boundary conditions: {}",
                violations[0]
            ),
            certificate: sites,
        });
    }
    Ok(part)
}

fn chain_tiles(g: &InteractionGraph, width: i64) -> Vec<Tile> {
    span(g, 0, width - 1)
        .map(|i| Tile {
            group: i.rem_euclid(width) as usize,
            points: (i..i + width).map(|x| vec![x]).collect(),
        })
        .collect()
}

fn bond_parity(g: &InteractionGraph) -> Result<Partition> {
    let len = g.extent()[0];
    if !(g.periodic()[0] && len % 2 == 1 && len > 1) {
        return from_tiles(g, &chain_tiles(g, 2));
    }
    // An odd ring has no proper 2-coloring of its bonds: the closing bond
    // gets a third group.
    let mut tiles = chain_tiles(g, 2);
    tiles.last_mut().expect("non-empty chain").group = 2;
    let mut part = from_tiles(g, &tiles)?;
    part.certificate = Some(Certificate {
        message: format!("periodic chain of odd length {len}: the bonds form an odd cycle"),
        sites: (0..g.num_sites()).collect(),
    });
    Ok(part)
}

fn grid_bases(g: &InteractionGraph) -> Vec<(i64, i64)> {
    let mut v = Vec::new();
    for y in span(g, 1, 1) {
        for x in span(g, 0, 1) {
            v.push((x, y));
        }
    }
    v
}

fn triangular_tiles(g: &InteractionGraph) -> Vec<Tile> {
    // Axial u = x + ceil(y/2) turns the offset rows into steps (1,0), (0,1),
    // (1,1); up-plaquettes {(u,v), (u+1,v), (u+1,v+1)} touch exactly when
    // their bases differ by a lattice step, and (u + v) mod 3 separates those.
    let ceil_half = |v: i64| (v + 1).div_euclid(2);
    grid_bases(g)
        .into_iter()
        .map(|(x, v)| {
            let u = x + ceil_half(v);
            let points = [(u, v), (u + 1, v), (u + 1, v + 1)]
                .iter()
                .map(|&(a, b)| vec![a - ceil_half(b), b])
                .collect();
            Tile {
                group: (u + v).rem_euclid(3) as usize,
                points,
            }
        })
        .collect()
}

fn square_four_tiles(g: &InteractionGraph) -> Vec<Tile> {
    grid_bases(g)
        .into_iter()
        .filter(|(x, y)| (x - y).rem_euclid(2) == 0)
        .map(|(x, y)| Tile {
            group: x.rem_euclid(2) as usize,
            points: vec![
                vec![x, y],
                vec![x + 1, y],
                vec![x, y + 1],
                vec![x + 1, y + 1],
            ],
        })
        .collect()
}

fn square_three_tiles(g: &InteractionGraph) -> Vec<Tile> {
    // Corners {(x,y), (x+1,y), (x,y+1)} hold the right and upper bond of
    // (x,y); corners overlap iff their bases differ by ±(1,0), ±(0,1) or
    // ±(1,-1), none of which preserves (x - y) mod 3.
    grid_bases(g)
        .into_iter()
        .map(|(x, y)| Tile {
            group: (x - y).rem_euclid(3) as usize,
            points: vec![vec![x, y], vec![x + 1, y], vec![x, y + 1]],
        })
        .collect()
}

fn hexagonal_tiles(g: &InteractionGraph) -> Vec<Tile> {
    let mut tiles = Vec::new();
    for (x, y) in grid_bases(g) {
        tiles.push(Tile {
            group: x.rem_euclid(2) as usize,
            points: vec![vec![x, y], vec![x + 1, y]],
        });
        if (x + y).rem_euclid(2) == 0 {
            tiles.push(Tile {
                group: 2,
                points: vec![vec![x, y], vec![x, y + 1]],
            });
        }
    }
    tiles
}

fn kagome_tiles(g: &InteractionGraph) -> Vec<Tile> {
    let mut tiles = Vec::new();
    for (u, v) in grid_bases(g) {
        match (u.rem_euclid(2), v.rem_euclid(2)) {
            (1, 0) => tiles.push(Tile {
                group: 0,
                points: vec![vec![u, v], vec![u + 1, v], vec![u + 1, v + 1]],
            }),
            (0, 1) => tiles.push(Tile {
                group: 1,
                points: vec![vec![u, v], vec![u, v + 1], vec![u + 1, v + 1]],
            }),
            _ => {}
        }
    }
    tiles
}

const BACKTRACK_LIMIT: usize = 200_000;

/// Colors the conflict graph of operators (distinct maximal supports; an
/// interaction inside another's support joins that operator) with at most
/// `budget` colors.
fn greedy(g: &InteractionGraph, budget: usize) -> Result<Partition> {
    let ints = g.interactions();
    let mut idx: Vec<usize> = (0..ints.len()).collect();
    idx.sort_by(|&a, &b| ints[b].len().cmp(&ints[a].len()).then(a.cmp(&b)));
    let mut ops: Vec<Operator> = Vec::new();
    let mut by_site: Vec<Vec<usize>> = vec![Vec::new(); g.num_sites()];
    for i in idx {
        let int = &ints[i];
        let host = by_site[int[0]]
            .iter()
            .copied()
            .find(|&o| int.iter().all(|s| ops[o].support.binary_search(s).is_ok()));
        match host {
            Some(o) => ops[o].interactions.push(i),
            None => {
                for &s in int {
                    by_site[s].push(ops.len());
                }
                ops.push(Operator {
                    support: int.clone(),
                    interactions: vec![i],
                });
            }
        }
    }
    for op in &mut ops {
        op.interactions.sort_unstable();
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ops.len()];
    for list in &by_site {
        for &a in list {
            for &b in list {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    let colors = if budget == 2 {
        two_color(&adj).map_err(|cycle| odd_cycle_error(&ops, &cycle))?
    } else {
        color(&adj, budget, &ops)?
    };
    let ngroups = colors.iter().map(|&c| c + 1).max().unwrap_or(0);
    let mut groups: Vec<Vec<Operator>> = vec![Vec::new(); ngroups];
    for (op, c) in ops.into_iter().zip(colors) {
        groups[c].push(op);
    }
    for grp in &mut groups {
        grp.sort_by(|a, b| a.support.cmp(&b.support));
    }
    Ok(Partition {
        strategy: Strategy::Greedy,
        groups,
        certificate: None,
    })
}

fn odd_cycle_error(ops: &[Operator], cycle: &[usize]) -> Error {
    let sites: BTreeSet<usize> = cycle
        .iter()
        .flat_map(|&o| ops[o].support.iter().copied())
        .collect();
    Error::PartitionFailed {
        message: format!("{} operators form an odd cycle of conflicts", cycle.len()),
        certificate: sites.into_iter().collect(),
    }
}

/// BFS 2-coloring; on failure returns an odd cycle of operators.
fn two_color(adj: &[BTreeSet<usize>]) -> std::result::Result<Vec<usize>, Vec<usize>> {
    let mut color = vec![usize::MAX; adj.len()];
    let mut parent = vec![usize::MAX; adj.len()];
    for root in 0..adj.len() {
        if color[root] != usize::MAX {
            continue;
        }
        color[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if color[w] == usize::MAX {
                    color[w] = 1 - color[v];
                    parent[w] = v;
                    queue.push_back(w);
                } else if color[w] == color[v] {
                    return Err(close_cycle(&parent, v, w));
                }
            }
        }
    }
    Ok(color)
}

fn close_cycle(parent: &[usize], a: usize, b: usize) -> Vec<usize> {
    let path = |mut v: usize| {
        let mut p = vec![v];
        while parent[v] != usize::MAX {
            v = parent[v];
            p.push(v);
        }
        p
    };
    let (pa, pb) = (path(a), path(b));
    let common = pa
        .iter()
        .find(|v| pb.contains(v))
        .copied()
        .expect("same BFS tree");
    let mut cycle: Vec<usize> = pa.iter().copied().take_while(|&v| v != common).collect();
    cycle.push(common);
    let tail: Vec<usize> = pb.iter().copied().take_while(|&v| v != common).collect();
    cycle.extend(tail.into_iter().rev());
    cycle
}

/// DSatur order with backtracking.
fn color(adj: &[BTreeSet<usize>], budget: usize, ops: &[Operator]) -> Result<Vec<usize>> {
    let n = adj.len();
    let mut colors = vec![usize::MAX; n];
    let mut steps = 0usize;
    let mut deepest = (0usize, 0usize);

    fn pick(adj: &[BTreeSet<usize>], colors: &[usize]) -> Option<usize> {
        (0..adj.len())
            .filter(|&v| colors[v] == usize::MAX)
            .max_by_key(|&v| {
                let sat: BTreeSet<usize> = adj[v]
                    .iter()
                    .map(|&w| colors[w])
                    .filter(|&c| c != usize::MAX)
                    .collect();
                (sat.len(), adj[v].len(), std::cmp::Reverse(v))
            })
    }

    fn search(
        adj: &[BTreeSet<usize>],
        colors: &mut Vec<usize>,
        budget: usize,
        depth: usize,
        steps: &mut usize,
        deepest: &mut (usize, usize),
    ) -> Option<bool> {
        let Some(v) = pick(adj, colors) else {
            return Some(true);
        };
        if depth >= deepest.0 {
            *deepest = (depth, v);
        }
        for c in 0..budget {
            *steps += 1;
            if *steps > BACKTRACK_LIMIT {
                return None;
            }
            if adj[v].iter().all(|&w| colors[w] != c) {
                colors[v] = c;
                match search(adj, colors, budget, depth + 1, steps, deepest) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => colors[v] = usize::MAX,
                }
            }
        }
        Some(false)
    }

    match search(adj, &mut colors, budget, 0, &mut steps, &mut deepest) {
        Some(true) => Ok(colors),
        outcome => {
            let v = deepest.1;
            let region: BTreeSet<usize> = std::iter::once(v)
                .chain(adj.get(v).into_iter().flatten().copied())
                .flat_map(|o| ops[o].support.iter().copied())
                .collect();
            let message = match outcome {
                None => format!("backtracking gave up after {BACKTRACK_LIMIT} steps"),
                _ => format!("conflict graph needs more than {budget} groups"),
            };
            Err(Error::PartitionFailed {
                message,
                certificate: region.into_iter().collect(),
            })
        }
    }
}
