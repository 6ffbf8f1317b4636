//! Symbolic cell structure of the basilica Julia set.
//!
//! A cell is addressed by a word `h t_1 ... t_k` with `h ∈ {1,2,3,4}` and
//! `t_i ∈ {1,2,3}`. The four level-1 cells are the upper and lower halves of
//! the central circle (arcs `1`, `2`, joining `a` and `-a`) and the left and
//! right arms (loops `3` at `a`, `4` at `-a`). Every cell splits into two arc
//! children `α1`, `α2` and one loop child `α3`:
//!
//! * an arc `α = (v1, v2)` splits at a fresh midpoint `m` into `α1 = (v1, m)`,
//!   `α2 = (m, v2)` and the loop `α3` based at `m`;
//! * a loop based at `v` splits into `α1 = (v, w)`, `α2 = (w, v)` running around
//!   the circle through a fresh vertex `w`, and the loop `α3` based at `w`.
//!
//! The graph `G_n` has one edge per cell of level `n + 1`, so `|V_n| = 2·3^n`
//! and `G_0` is the two-vertex graph with two arcs and two loops.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;

/// Levels up to this value are built unless the caller raises the limit.
pub const DEFAULT_MAX_LEVEL: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Arc,
    Loop,
}

impl CellKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CellKind::Arc => "arc",
            CellKind::Loop => "loop",
        }
    }
}

/// Address of a cell: a head symbol in `1..=4` followed by tail symbols in `1..=3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellAddress {
    symbols: Vec<u8>,
}

impl CellAddress {
    pub fn new(head: u8, tail: &[u8]) -> Result<Self> {
        if !(1..=4).contains(&head) {
            return Err(Error::input(format!("cell head {head} not in 1..=4")));
        }
        if let Some(bad) = tail.iter().find(|s| !(1..=3).contains(*s)) {
            return Err(Error::input(format!("cell tail symbol {bad} not in 1..=3")));
        }
        let mut symbols = Vec::with_capacity(tail.len() + 1);
        symbols.push(head);
        symbols.extend_from_slice(tail);
        Ok(Self { symbols })
    }

    /// Builds an address from its full symbol string, e.g. `[1, 3, 2]`.
    pub fn from_symbols(symbols: &[u8]) -> Result<Self> {
        match symbols.split_first() {
            Some((&head, tail)) => Self::new(head, tail),
            None => Err(Error::input("empty cell address")),
        }
    }

    pub fn head(&self) -> u8 {
        self.symbols[0]
    }

    pub fn tail(&self) -> &[u8] {
        &self.symbols[1..]
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn level(&self) -> usize {
        self.symbols.len()
    }

    pub fn kind(&self) -> CellKind {
        let loop_kind = match self.tail().last() {
            None => matches!(self.head(), 3 | 4),
            Some(&last) => last == 3,
        };
        if loop_kind {
            CellKind::Loop
        } else {
            CellKind::Arc
        }
    }

    pub fn is_arc(&self) -> bool {
        self.kind() == CellKind::Arc
    }

    pub fn child(&self, j: u8) -> CellAddress {
        assert!((1..=3).contains(&j), "child symbol {j} not in 1..=3");
        let mut symbols = self.symbols.clone();
        symbols.push(j);
        CellAddress { symbols }
    }

    pub fn parent(&self) -> Option<CellAddress> {
        (self.level() > 1).then(|| CellAddress {
            symbols: self.symbols[..self.symbols.len() - 1].to_vec(),
        })
    }

    /// Position of this address in the lexicographic order of its level.
    pub fn index(&self) -> usize {
        self.tail()
            .iter()
            .fold(usize::from(self.head() - 1), |acc, &s| {
                acc * 3 + usize::from(s - 1)
            })
    }

    /// Inverse of [`CellAddress::index`].
    pub fn from_index(level: usize, index: usize) -> Result<Self> {
        if level == 0 || index >= cell_count(level) {
            return Err(Error::input(format!(
                "no cell with index {index} at level {level}"
            )));
        }
        let mut tail = vec![0u8; level - 1];
        let mut rest = index;
        for slot in tail.iter_mut().rev() {
            *slot = (rest % 3) as u8 + 1;
            rest /= 3;
        }
        Self::new(rest as u8 + 1, &tail)
    }

    /// All addresses of a level in lexicographic order.
    pub fn all(level: usize) -> impl Iterator<Item = CellAddress> {
        let count = if level == 0 { 0 } else { cell_count(level) };
        (0..count).map(move |i| CellAddress::from_index(level, i).expect("index in range"))
    }
}

impl fmt::Display for CellAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for CellAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .trim()
            .split(['.', ','])
            .map(|part| {
                part.trim()
                    .parse::<u8>()
                    .map_err(|_| Error::input(format!("bad address symbol {part:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_symbols(&symbols)
    }
}

impl Serialize for CellAddress {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CellAddress {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Number of cells of a level: `4·3^(level-1)`, and 1 for the whole set at level 0.
pub fn cell_count(level: usize) -> usize {
    if level == 0 {
        1
    } else {
        4 * 3usize.pow(level as u32 - 1)
    }
}

/// `|V_n| = 2·3^n`.
pub fn vertex_count(level: usize) -> usize {
    2 * 3usize.pow(level as u32)
}

/// The three children of a cell with their kinds: two arcs then the loop.
pub fn children(addr: &CellAddress) -> [(CellAddress, CellKind); 3] {
    [
        (addr.child(1), CellKind::Arc),
        (addr.child(2), CellKind::Arc),
        (addr.child(3), CellKind::Loop),
    ]
}

fn tau(j: u8) -> u8 {
    match j {
        1 => 1,
        2 => 2,
        _ => 4,
    }
}

/// Image of a cell under `P(z) = z² - 1`.
///
/// `(1,w)` and `(2,w)` map to `(3,w)`; `(3, j·w)` and `(4, j·w)` map to `(τ(j), w)`
/// with `τ = (1, 2, 4)`. The whole arms `(3)` and `(4)` are not in the domain.
pub fn address_dynamics(addr: &CellAddress) -> Result<CellAddress> {
    match addr.head() {
        1 | 2 => CellAddress::new(3, addr.tail()),
        _ => match addr.tail().split_first() {
            Some((&j, rest)) => CellAddress::new(tau(j), rest),
            None => Err(Error::domain(format!(
                "P-image of cell {addr} is not a single cell"
            ))),
        },
    }
}

/// Number of `P`-steps taking a cell to a level-1 cell, and that cell.
pub fn steps_to_top(addr: &CellAddress) -> (u32, CellAddress) {
    let mut current = addr.clone();
    let mut steps = 0;
    while current.level() > 1 {
        current = address_dynamics(&current).expect("level >= 2 is in the domain");
        steps += 1;
    }
    (steps, current)
}

/// Smallest `m` with `P^m(J_α) ∈ {J_(1), J_(2)}`.
pub fn m_exponent(addr: &CellAddress) -> Result<u32> {
    if !addr.is_arc() {
        return Err(Error::domain(format!(
            "m-exponent is only defined for arc cells, got loop {addr}"
        )));
    }
    let mut current = addr.clone();
    let mut m = 0;
    while current.level() > 1 || current.head() > 2 {
        current = address_dynamics(&current)?;
        m += 1;
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Arc(VertexId, VertexId),
    Loop(VertexId),
}

impl Boundary {
    pub fn vertices(&self) -> Vec<VertexId> {
        match *self {
            Boundary::Arc(u, v) => vec![u, v],
            Boundary::Loop(v) => vec![v],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub address: CellAddress,
    pub kind: CellKind,
    pub boundary: Boundary,
    /// Fresh vertex created when the cell is subdivided; `None` on the finest level.
    pub split: Option<VertexId>,
}

/// Cells of levels `1..=n+1` with the vertex registry of `V_n`.
///
/// Vertex ids are assigned breadth first: `0 = a`, `1 = -a`, then the split
/// vertex of the `i`-th cell of level `L` gets id `2·3^(L-1) + i`. Ids are
/// therefore identical across filtrations of different depth.
#[derive(Debug, Clone)]
pub struct Filtration {
    level: usize,
    levels: Vec<Vec<Cell>>,
}

impl Filtration {
    pub fn build(n: usize) -> Result<Self> {
        Self::build_with_limit(n, DEFAULT_MAX_LEVEL)
    }

    pub fn build_with_limit(n: usize, max_level: usize) -> Result<Self> {
        if n > max_level {
            return Err(Error::Capacity {
                what: "filtration level",
                requested: n,
                limit: max_level,
            });
        }
        let top = vec![
            Cell {
                address: CellAddress { symbols: vec![1] },
                kind: CellKind::Arc,
                boundary: Boundary::Arc(0, 1),
                split: None,
            },
            Cell {
                address: CellAddress { symbols: vec![2] },
                kind: CellKind::Arc,
                boundary: Boundary::Arc(0, 1),
                split: None,
            },
            Cell {
                address: CellAddress { symbols: vec![3] },
                kind: CellKind::Loop,
                boundary: Boundary::Loop(0),
                split: None,
            },
            Cell {
                address: CellAddress { symbols: vec![4] },
                kind: CellKind::Loop,
                boundary: Boundary::Loop(1),
                split: None,
            },
        ];
        let mut levels = vec![top];
        for level in 1..=n {
            let offset = vertex_count(level - 1);
            let parents = levels.last_mut().expect("nonempty");
            let mut next = Vec::with_capacity(parents.len() * 3);
            for (i, parent) in parents.iter_mut().enumerate() {
                let w = offset + i;
                parent.split = Some(w);
                let (first, second) = match parent.boundary {
                    Boundary::Arc(v1, v2) => (Boundary::Arc(v1, w), Boundary::Arc(w, v2)),
                    Boundary::Loop(v) => (Boundary::Arc(v, w), Boundary::Arc(w, v)),
                };
                for (j, boundary) in [(1, first), (2, second), (3, Boundary::Loop(w))] {
                    let address = parent.address.child(j);
                    next.push(Cell {
                        kind: address.kind(),
                        address,
                        boundary,
                        split: None,
                    });
                }
            }
            levels.push(next);
        }
        Ok(Self { level: n, levels })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// `|V_n|`.
    pub fn vertex_count(&self) -> usize {
        vertex_count(self.level)
    }

    /// Cells of a level in `1..=n+1`, in address order.
    pub fn cells(&self, level: usize) -> &[Cell] {
        assert!(
            (1..=self.level + 1).contains(&level),
            "level {level} outside 1..={}",
            self.level + 1
        );
        &self.levels[level - 1]
    }

    /// The cells of level `n + 1`, i.e. the edges of `G_n`.
    pub fn edge_cells(&self) -> &[Cell] {
        self.cells(self.level + 1)
    }

    pub fn cell(&self, addr: &CellAddress) -> Option<&Cell> {
        self.levels
            .get(addr.level().checked_sub(1)?)
            .map(|cells| &cells[addr.index()])
    }

    /// Level at which a vertex first appears in `V_k`.
    pub fn birth_level(v: VertexId) -> usize {
        let mut k = 0;
        while v >= vertex_count(k) {
            k += 1;
        }
        k
    }

    /// The multigraph `G_n`.
    pub fn graph(&self) -> Multigraph {
        let mut arcs = Vec::new();
        let mut loops = Vec::new();
        for cell in self.edge_cells() {
            match cell.boundary {
                Boundary::Arc(u, v) => arcs.push(ArcEdge {
                    u,
                    v,
                    address: cell.address.clone(),
                }),
                Boundary::Loop(v) => loops.push(LoopEdge {
                    vertex: v,
                    address: cell.address.clone(),
                }),
            }
        }
        Multigraph {
            level: self.level,
            vertex_count: self.vertex_count(),
            arcs,
            loops,
        }
    }

    /// Vertices of `G_n` lying in the cell `addr`: its boundary and every split
    /// vertex of the cell and its descendants.
    pub fn vertices_in(&self, addr: &CellAddress) -> Result<Vec<VertexId>> {
        let cell = self
            .cell(addr)
            .ok_or_else(|| Error::input(format!("cell {addr} not in filtration")))?;
        let mut out = cell.boundary.vertices();
        let mut frontier = vec![addr.index()];
        for level in addr.level()..=self.level {
            let cells = self.cells(level);
            let mut next = Vec::with_capacity(frontier.len() * 3);
            for &i in &frontier {
                out.extend(cells[i].split);
                next.extend((0..3).map(|j| 3 * i + j));
            }
            frontier = next;
        }
        Ok(out)
    }

    /// Pairs each vertex of `G_n` inside `addr` with the corresponding vertex of
    /// `reference` inside the top cell of the same kind (`(1)` for arcs, `(3)`
    /// for loops), matching `addr·w` with `(1)·w` or `(3)·w`.
    ///
    /// `reference` must have level `n - |addr| + 1`.
    pub fn cell_isomorphism(
        &self,
        addr: &CellAddress,
        reference: &Filtration,
    ) -> Result<Vec<(VertexId, VertexId)>> {
        let depth = self.level + 1 - addr.level();
        if reference.level != depth {
            return Err(Error::input(format!(
                "reference filtration has level {}, expected {depth}",
                reference.level
            )));
        }
        let top = match addr.kind() {
            CellKind::Arc => CellAddress { symbols: vec![1] },
            CellKind::Loop => CellAddress { symbols: vec![3] },
        };
        let source = self.cell(addr).expect("address within filtration");
        let target = reference.cell(&top).expect("top cell present");
        let mut pairs: Vec<_> = source
            .boundary
            .vertices()
            .into_iter()
            .zip(target.boundary.vertices())
            .collect();
        let mut frontier = vec![(addr.index(), top.index())];
        for offset in 0..=depth.saturating_sub(1) {
            let src_cells = self.cells(addr.level() + offset);
            let ref_cells = reference.cells(1 + offset);
            let mut next = Vec::with_capacity(frontier.len() * 3);
            for &(i, k) in &frontier {
                if let (Some(s), Some(r)) = (src_cells[i].split, ref_cells[k].split) {
                    pairs.push((s, r));
                }
                next.extend((0..3).map(|j| (3 * i + j, 3 * k + j)));
            }
            frontier = next;
        }
        Ok(pairs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArcEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub address: CellAddress,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopEdge {
    pub vertex: VertexId,
    pub address: CellAddress,
}

/// The multigraph `G_n`: one arc per arc-type `(n+1)`-cell, one loop per loop-type cell.
#[derive(Debug, Clone)]
pub struct Multigraph {
    pub level: usize,
    pub vertex_count: usize,
    pub arcs: Vec<ArcEdge>,
    pub loops: Vec<LoopEdge>,
}

impl Multigraph {
    /// Arc ends at each vertex plus twice the loops.
    pub fn degrees(&self) -> Vec<usize> {
        let mut degree = vec![0; self.vertex_count];
        for arc in &self.arcs {
            degree[arc.u] += 1;
            degree[arc.v] += 1;
        }
        for l in &self.loops {
            degree[l.vertex] += 2;
        }
        degree
    }

    pub fn arc_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.arcs
            .iter()
            .filter_map(|e| {
                if e.u == v {
                    Some(e.v)
                } else if e.v == v {
                    Some(e.u)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.arcs.len() + self.loops.len()
    }

    pub fn document(&self) -> GraphDocument {
        let mut edges: Vec<EdgeRecord> = self
            .arcs
            .iter()
            .map(|e| EdgeRecord {
                u: e.u,
                v: e.v,
                address: e.address.clone(),
                kind: CellKind::Arc,
            })
            .chain(self.loops.iter().map(|l| EdgeRecord {
                u: l.vertex,
                v: l.vertex,
                address: l.address.clone(),
                kind: CellKind::Loop,
            }))
            .collect();
        edges.sort_by(|a, b| a.address.cmp(&b.address));
        GraphDocument {
            level: self.level,
            vertices: (0..self.vertex_count).collect(),
            edges,
        }
    }
}

/// JSON form of `G_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub level: usize,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: VertexId,
    pub v: VertexId,
    pub address: CellAddress,
    pub kind: CellKind,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn addr(s: &str) -> CellAddress {
        s.parse().unwrap()
    }

    #[test]
    fn children_of_arc_and_loop_cells() {
        let kids = children(&addr("1"));
        assert_eq!(kids[0], (addr("1.1"), CellKind::Arc));
        assert_eq!(kids[1], (addr("1.2"), CellKind::Arc));
        assert_eq!(kids[2], (addr("1.3"), CellKind::Loop));

        let kids = children(&addr("3"));
        assert_eq!(
            kids.map(|(a, k)| (a.to_string(), k)),
            [
                ("3.1".to_string(), CellKind::Arc),
                ("3.2".to_string(), CellKind::Arc),
                ("3.3".to_string(), CellKind::Loop)
            ]
        );
        let kids = children(&addr("4.2"));
        assert_eq!(kids[2].0, addr("4.2.3"));
        assert_eq!(kids[0].1, CellKind::Arc);
    }

    #[test]
    fn kinds() {
        assert_eq!(addr("1").kind(), CellKind::Arc);
        assert_eq!(addr("3").kind(), CellKind::Loop);
        assert_eq!(addr("4").kind(), CellKind::Loop);
        assert_eq!(addr("3.1").kind(), CellKind::Arc);
        assert_eq!(addr("1.3").kind(), CellKind::Loop);
        assert_eq!(addr("2.3.2").kind(), CellKind::Arc);
    }

    #[test]
    fn rejects_bad_symbols() {
        assert!(CellAddress::new(5, &[]).is_err());
        assert!(CellAddress::new(1, &[4]).is_err());
        assert!("".parse::<CellAddress>().is_err());
        assert!("1.x".parse::<CellAddress>().is_err());
    }

    #[test]
    fn index_round_trip_and_count() {
        for level in 1..=5 {
            let all: Vec<_> = CellAddress::all(level).collect();
            assert_eq!(all.len(), 4 * 3usize.pow(level as u32 - 1));
            for (i, a) in all.iter().enumerate() {
                assert_eq!(a.index(), i);
            }
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn level_zero_graph() {
        let f = Filtration::build(0).unwrap();
        let g = f.graph();
        assert_eq!(g.vertex_count, 2);
        assert_eq!(g.arcs.len(), 2);
        assert_eq!(g.loops.len(), 2);
    }

    #[test]
    fn level_one_graph() {
        let f = Filtration::build(1).unwrap();
        let g = f.graph();
        assert_eq!(g.vertex_count, 6);
        let mut a_nbrs = g.arc_neighbors(0);
        a_nbrs.sort();
        assert_eq!(a_nbrs.len(), 4);
        assert!(!a_nbrs.contains(&0) && !a_nbrs.contains(&1));
        assert!(g.loops.iter().all(|l| l.vertex != 0 && l.vertex != 1));
        for v in 2..6 {
            assert_eq!(g.arc_neighbors(v).len(), 2);
            assert_eq!(g.loops.iter().filter(|l| l.vertex == v).count(), 1);
        }
        assert!(g.degrees().iter().all(|&d| d == 4));
    }

    #[test]
    fn level_three_counts() {
        let f = Filtration::build(3).unwrap();
        assert_eq!(f.vertex_count(), 54);
        assert_eq!(f.cells(3).len(), 36);
        assert_eq!(cell_count(3), 36);
        assert_eq!(f.graph().edge_count(), 108);
    }

    #[test]
    fn counts_and_regularity_up_to_eight() {
        let f = Filtration::build(8).unwrap();
        for level in 1..=9 {
            assert_eq!(f.cells(level).len(), cell_count(level));
        }
        assert_eq!(f.vertex_count(), 2 * 3usize.pow(8));
        let g = f.graph();
        let max_id = g
            .arcs
            .iter()
            .flat_map(|e| [e.u, e.v])
            .chain(g.loops.iter().map(|l| l.vertex))
            .max()
            .unwrap();
        assert_eq!(max_id + 1, f.vertex_count());
        assert!(g.degrees().iter().all(|&d| d == 4));
    }

    #[test]
    fn vertex_ids_are_stable_across_depths() {
        let deep = Filtration::build(6).unwrap();
        for n in 0..6 {
            let shallow = Filtration::build(n).unwrap();
            for level in 1..=n {
                for (a, b) in shallow.cells(level).iter().zip(deep.cells(level)) {
                    assert_eq!(a.boundary, b.boundary);
                    assert_eq!(a.split, b.split);
                }
            }
            for (a, b) in shallow.edge_cells().iter().zip(deep.cells(n + 1)) {
                assert_eq!(a.boundary, b.boundary);
            }
        }
    }

    #[test]
    fn capacity_limit() {
        assert!(matches!(
            Filtration::build(11),
            Err(Error::Capacity { requested: 11, .. })
        ));
        assert!(Filtration::build_with_limit(3, 2).is_err());
    }

    #[test]
    fn dynamics_examples() {
        assert_eq!(address_dynamics(&addr("3.1")).unwrap(), addr("1"));
        assert_eq!(address_dynamics(&addr("1.1")).unwrap(), addr("3.1"));
        assert_eq!(address_dynamics(&addr("1.3.1")).unwrap(), addr("3.3.1"));
        assert_eq!(address_dynamics(&addr("4.3.2")).unwrap(), addr("4.2"));
        assert_eq!(address_dynamics(&addr("1")).unwrap(), addr("3"));
        assert!(matches!(
            address_dynamics(&addr("3")),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            address_dynamics(&addr("4")),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn m_exponent_examples() {
        assert_eq!(m_exponent(&addr("1")).unwrap(), 0);
        assert_eq!(m_exponent(&addr("2")).unwrap(), 0);
        assert_eq!(m_exponent(&addr("1.1")).unwrap(), 2);
        assert_eq!(m_exponent(&addr("3.1")).unwrap(), 1);
        assert_eq!(m_exponent(&addr("1.3.1")).unwrap(), 3);
        assert!(matches!(m_exponent(&addr("1.3")), Err(Error::Domain(_))));
    }

    #[test]
    fn vertices_in_cell_and_isomorphism() {
        let f = Filtration::build(3).unwrap();
        let a = addr("1.3");
        let inside = f.vertices_in(&a).unwrap();
        // base, its own split and the splits of its three children
        assert_eq!(inside.len(), 5);
        let reference = Filtration::build(2).unwrap();
        let pairs = f.cell_isomorphism(&a, &reference).unwrap();
        assert_eq!(pairs.len(), 5);
        let mut ref_ids: Vec<_> = pairs.iter().map(|p| p.1).collect();
        ref_ids.sort();
        let mut expected = reference.vertices_in(&addr("3")).unwrap();
        expected.sort();
        assert_eq!(ref_ids, expected);
    }

    #[test]
    fn display_and_parse() {
        let a = CellAddress::new(1, &[3, 2]).unwrap();
        assert_eq!(a.to_string(), "1.3.2");
        assert_eq!("1.3.2".parse::<CellAddress>().unwrap(), a);
        assert_eq!(serde_json::to_string(&a).unwrap(), "\"1.3.2\"");
    }

    fn arc_address() -> impl Strategy<Value = CellAddress> {
        (1u8..=4, proptest::collection::vec(1u8..=3, 0..8))
            .prop_map(|(h, t)| CellAddress::new(h, &t).unwrap())
            .prop_filter("arc cells only", |a| a.is_arc())
    }

    proptest! {
        #[test]
        fn arc_children_add_two_to_m(a in arc_address()) {
            let m = m_exponent(&a).unwrap();
            prop_assert_eq!(m_exponent(&a.child(1)).unwrap(), m + 2);
            prop_assert_eq!(m_exponent(&a.child(2)).unwrap(), m + 2);
        }

        #[test]
        fn dynamics_preserves_arcs_below_top(a in arc_address()) {
            if a.level() >= 2 {
                prop_assert!(address_dynamics(&a).unwrap().is_arc());
            } else {
                prop_assert_eq!(address_dynamics(&a).unwrap(), addr("3"));
            }
        }
    }
}
