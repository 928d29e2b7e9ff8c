use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::{Geometry, InteractionGraph};
use crate::error::{Error, Result};

/// Record of one coarse-graining step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoarseMap {
    /// Block size per direction; `[2, 1]` with `row_offset` for the final
    /// triangular merge.
    pub block: Vec<usize>,
    /// Old site → effective site.
    pub site_assignment: Vec<usize>,
    /// Old interaction → effective interaction. Interactions with equal
    /// effective support share an index.
    pub operator_lift: Vec<usize>,
    /// Effective site → old sites.
    pub blocks: Vec<Vec<usize>>,
    /// Odd rows pair sites `(2k+1, 2k+2)` instead of `(2k, 2k+1)`.
    pub row_offset: bool,
    /// Effective sites that absorbed a partial block at an open edge or a
    /// non-divisible periodic extent. The range law may fail across them.
    pub absorbed: Vec<usize>,
}

impl CoarseMap {
    pub fn is_identity(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
            && self
                .site_assignment
                .iter()
                .enumerate()
                .all(|(i, &s)| i == s)
    }
}

fn assemble(
    g: &InteractionGraph,
    geometry: Geometry,
    extent: Vec<i64>,
    new_coords: Vec<Vec<i64>>,
    partial: Vec<bool>,
    block: Vec<usize>,
    row_offset: bool,
) -> Result<(InteractionGraph, CoarseMap)> {
    // Effective sites ordered row by row.
    let mut distinct: Vec<Vec<i64>> = new_coords.clone();
    distinct.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    distinct.dedup();
    let id: FxHashMap<&Vec<i64>, usize> =
        distinct.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let site_assignment: Vec<usize> = new_coords.iter().map(|c| id[c]).collect();
    let mut blocks = vec![Vec::new(); distinct.len()];
    let mut absorbed = Vec::new();
    for (old, &new) in site_assignment.iter().enumerate() {
        blocks[new].push(old);
        if partial[old] && !absorbed.contains(&new) {
            absorbed.push(new);
        }
    }
    absorbed.sort_unstable();
    let mut lifted: FxHashMap<Vec<usize>, usize> = FxHashMap::default();
    let mut interactions = Vec::new();
    let mut operator_lift = Vec::with_capacity(g.num_interactions());
    for int in g.interactions() {
        let mut support: Vec<usize> = int.iter().map(|&s| site_assignment[s]).collect();
        support.sort_unstable();
        support.dedup();
        let k = *lifted.entry(support.clone()).or_insert_with(|| {
            interactions.push(support);
            interactions.len() - 1
        });
        operator_lift.push(k);
    }
    let graph = InteractionGraph::new(
        g.dim(),
        geometry,
        extent,
        g.periodic().to_vec(),
        distinct,
        interactions,
    )?;
    Ok((
        graph,
        CoarseMap {
            block,
            site_assignment,
            operator_lift,
            blocks,
            row_offset,
            absorbed,
        },
    ))
}

/// Blocks `block[d]` consecutive sites along each direction into one
/// effective site. When a block size does not divide the extent, the final
/// partial block joins its neighbor.
pub fn coarse_grain(
    g: &InteractionGraph,
    block: &[usize],
) -> Result<(InteractionGraph, CoarseMap)> {
    if block.len() != g.dim() {
        return Err(Error::DimensionMismatch(format!(
            "block {block:?} for a {}d graph",
            g.dim()
        )));
    }
    if block.contains(&0) {
        return Err(Error::InvalidGraph("block size 0".into()));
    }
    let counts: Vec<i64> = g
        .extent()
        .iter()
        .zip(block)
        .map(|(&e, &b)| (e / b as i64).max(1))
        .collect();
    let mut partial = vec![false; g.num_sites()];
    let new_coords: Vec<Vec<i64>> = g
        .sites()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            (0..g.dim())
                .map(|d| {
                    let b = block[d] as i64;
                    let x = c[d] / b;
                    if x >= counts[d] {
                        partial[i] = true;
                    }
                    x.min(counts[d] - 1)
                })
                .collect()
        })
        .collect();
    let geometry = if block.iter().all(|&b| b == 1) {
        g.geometry()
    } else if g.dim() == 1 {
        Geometry::Chain
    } else {
        Geometry::Grid
    };
    assemble(
        g,
        geometry,
        counts,
        new_coords,
        partial,
        block.to_vec(),
        false,
    )
}

/// Merges horizontal site pairs, offset by one in odd rows. Applied to a 2d
/// graph with ranges ≤ 1 (diagonals allowed) the result is a triangular
/// lattice in the offset-row convention of [`Geometry::Triangular`].
pub fn triangular_merge(g: &InteractionGraph) -> Result<(InteractionGraph, CoarseMap)> {
    if g.dim() != 2 {
        return Err(Error::DimensionMismatch(
            "triangular merge needs a 2d graph".into(),
        ));
    }
    if g.max_range() > 1 {
        return Err(Error::InvalidGraph(format!(
            "triangular merge needs ranges ≤ 1, found {}",
            g.max_range()
        )));
    }
    let lx = g.extent()[0];
    let wrap = g.periodic()[0] && lx % 2 == 0;
    let even_count = (lx / 2).max(1);
    let odd_count = if wrap { lx / 2 } else { ((lx - 1) / 2).max(1) };
    let mut partial = vec![false; g.num_sites()];
    let new_coords: Vec<Vec<i64>> = g
        .sites()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let (x, y) = (c[0], c[1]);
            let (raw, count) = if y % 2 == 0 {
                (x / 2, even_count)
            } else if wrap {
                ((x - 1).rem_euclid(lx) / 2, odd_count)
            } else {
                ((x - 1).max(0) / 2, odd_count)
            };
            let lone = y % 2 == 1 && !wrap && x == 0 && lx > 1;
            if raw >= count || lone {
                partial[i] = true;
            }
            vec![raw.min(count - 1), y]
        })
        .collect();
    if g.periodic()[0] && !wrap {
        partial.iter_mut().for_each(|p| *p = true);
    }
    let extent = vec![even_count.max(odd_count), g.extent()[1]];
    assemble(
        g,
        Geometry::Triangular,
        extent,
        new_coords,
        partial,
        vec![2, 1],
        true,
    )
}

/// Coarse grains until only onsite and nearest-neighbor terms remain. Chains
/// are halved until all ranges are ≤ 1. 2d graphs are blocked 2×2 until all
/// ranges are ≤ 1 and then merged pairwise into a triangular lattice.
pub fn reduce_to_nearest_neighbor(
    g: &InteractionGraph,
) -> Result<(InteractionGraph, Vec<CoarseMap>)> {
    let mut current = g.clone();
    let mut maps = Vec::new();
    if current.is_nearest_neighbor() {
        return Ok((current, maps));
    }
    let block = vec![2; g.dim()];
    while current.max_range() > 1 {
        let (next, map) = coarse_grain(&current, &block)?;
        current = next;
        maps.push(map);
    }
    if g.dim() == 2 {
        let (next, map) = triangular_merge(&current)?;
        current = next;
        maps.push(map);
    }
    Ok((current, maps))
}
