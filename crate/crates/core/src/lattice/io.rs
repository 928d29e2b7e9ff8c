//! Line-based graph files and DOT export.
//!
//! ```text
//! # comment
//! dim 1
//! geometry chain
//! extent 8
//! periodic false
//! site 0 0
//! site 1 1
//! interaction 0 1
//! ```
//!
//! `site <id> <coords...>` lines must list ids 0, 1, 2, ... in order.

use std::fmt::Write as _;

use super::{Geometry, InteractionGraph, Partition};
use crate::error::{Error, Result};

const GROUP_NAMES: [&str; 3] = ["A", "B", "C"];
const GROUP_COLORS: [&str; 3] = ["red", "blue", "darkgreen"];

fn group_name(k: usize) -> String {
    GROUP_NAMES
        .get(k)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("G{k}"))
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad number `{tok}`")))
}

impl InteractionGraph {
    pub fn parse(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut geometry = None;
        let mut extent = None;
        let mut periodic = None;
        let mut sites = Vec::new();
        let mut interactions = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            let mut toks = content.split_whitespace();
            let Some(key) = toks.next() else { continue };
            let rest: Vec<&str> = toks.collect();
            match key {
                "dim" => {
                    dim = Some(parse_num::<usize>(
                        rest.first().copied().unwrap_or(""),
                        line,
                    )?)
                }
                "geometry" => {
                    geometry = Some(rest.first().copied().unwrap_or("").parse::<Geometry>()?)
                }
                "extent" => {
                    extent = Some(
                        rest.iter()
                            .map(|t| parse_num(t, line))
                            .collect::<Result<Vec<i64>>>()?,
                    )
                }
                "periodic" => {
                    periodic = Some(
                        rest.iter()
                            .map(|t| match *t {
                                "true" | "1" => Ok(true),
                                "false" | "0" => Ok(false),
                                _ => Err(Error::Parse(format!("line {line}: bad flag `{t}`"))),
                            })
                            .collect::<Result<Vec<bool>>>()?,
                    )
                }
                "site" => {
                    let id: usize = parse_num(rest.first().copied().unwrap_or(""), line)?;
                    if id != sites.len() {
                        return Err(Error::Parse(format!(
                            "line {line}: expected site id {}, found {id}",
                            sites.len()
                        )));
                    }
                    sites.push(
                        rest[1..]
                            .iter()
                            .map(|t| parse_num(t, line))
                            .collect::<Result<Vec<i64>>>()?,
                    );
                }
                "interaction" => interactions.push(
                    rest.iter()
                        .map(|t| parse_num(t, line))
                        .collect::<Result<Vec<usize>>>()?,
                ),
                other => return Err(Error::Parse(format!("line {line}: unknown key `{other}`"))),
            }
        }
        let dim = dim.ok_or_else(|| Error::Parse("missing `dim`".into()))?;
        let geometry = geometry.unwrap_or(if dim == 1 {
            Geometry::Chain
        } else {
            Geometry::Grid
        });
        let extent = match extent {
            Some(e) => e,
            None => (0..dim)
                .map(|d| {
                    sites
                        .iter()
                        .map(|c: &Vec<i64>| c.get(d).copied().unwrap_or(0) + 1)
                        .max()
                        .unwrap_or(1)
                })
                .collect(),
        };
        let periodic = periodic.unwrap_or_else(|| vec![false; dim]);
        InteractionGraph::new(dim, geometry, extent, periodic, sites, interactions)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        InteractionGraph::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let join = |v: &[i64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut s = String::new();
        let _ = writeln!(s, "dim {}", self.dim());
        let _ = writeln!(s, "geometry {}", self.geometry());
        let _ = writeln!(s, "extent {}", join(self.extent()));
        let flags: Vec<&str> = self
            .periodic()
            .iter()
            .map(|&p| if p { "true" } else { "false" })
            .collect();
        let _ = writeln!(s, "periodic {}", flags.join(" "));
        for (i, c) in self.sites().iter().enumerate() {
            let _ = writeln!(s, "site {i} {}", join(c));
        }
        for int in self.interactions() {
            let ids: Vec<String> = int.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "interaction {}", ids.join(" "));
        }
        s
    }

    /// Graphviz rendering with sites pinned at their coordinates. Two-site
    /// interactions become edges, colored by group when a partition is given;
    /// larger interactions become hyperedge nodes.
    pub fn to_dot(&self, part: Option<&Partition>) -> String {
        let labels = part.map(|p| p.labels(self.num_interactions()));
        let mut s = String::from("graph interactions {\n  node [shape=circle, fontsize=10];\n");
        for (i, c) in self.sites().iter().enumerate() {
            let (x, y) = (c[0], c.get(1).copied().unwrap_or(0));
            let _ = writeln!(s, "  s{i} [label=\"{i}\", pos=\"{x},{y}!\"];");
        }
        for (k, int) in self.interactions().iter().enumerate() {
            let group = labels.as_ref().and_then(|l| l[k]);
            let style = match group {
                Some(g) => format!(
                    " [color={}, label=\"{}\"]",
                    GROUP_COLORS.get(g).copied().unwrap_or("black"),
                    group_name(g)
                ),
                None => String::new(),
            };
            match int.len() {
                1 => {
                    let _ = writeln!(s, "  s{0} -- s{0}{style};", int[0]);
                }
                2 => {
                    let _ = writeln!(s, "  s{} -- s{}{style};", int[0], int[1]);
                }
                _ => {
                    let _ = writeln!(s, "  h{k} [shape=point];");
                    for m in int {
                        let _ = writeln!(s, "  h{k} -- s{m}{style};");
                    }
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

impl Partition {
    /// One line per group: `A: {0 1} {2 3}` lists operator supports, then
    /// the interaction indices.
    pub fn to_text(&self) -> String {
        let mut s = format!("strategy {}\nn {}\n", self.strategy, self.n());
        for (k, group) in self.groups.iter().enumerate() {
            let supports: Vec<String> = group
                .iter()
                .map(|op| {
                    format!(
                        "{{{}}}",
                        op.support
                            .iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    )
                })
                .collect();
            let _ = writeln!(s, "{}: {}", group_name(k), supports.join(" "));
            let ints: Vec<String> = self
                .group_interactions(k)
                .iter()
                .map(|x| x.to_string())
                .collect();
            let _ = writeln!(s, "{} interactions: {}", group_name(k), ints.join(" "));
        }
        if let Some(c) = &self.certificate {
            let sites: Vec<String> = c.sites.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "certificate: {} (sites {})", c.message, sites.join(" "));
        }
        s
    }
}
