//! The graph-directed approximations `G′_n`.
//!
//! `G′_0` is one vertex `a` carrying an A-loop (the left piece `J_L`, mass 1/3)
//! and a B-loop (the right piece `J_R`, mass 2/3). One substitution step turns
//! every A-edge into a B-edge and replaces every B-edge `{u, v}` of mass `M` by a
//! fresh vertex `w`, A-edges `{u, w}`, `{w, v}` of mass `M/4` and a B-loop at `w`
//! of mass `M/2`. A-edges created in generation `g` have resistance
//! `r₁·(√2)^(1−g)`; relabelled B-edges keep theirs, which equals the series
//! resistance of the two A-edges that later replace them.
//!
//! Edges of `G′_(n+1)` are listed parent by parent in the order of `G′_n`, and
//! fresh vertices are numbered in the same order.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::SymMatrix;

pub type Mass = Ratio<i64>;

/// Deepest generation built.
pub const MAX_GENERATION: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Label {
    A,
    B,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::A => "A",
            Label::B => "B",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledEdge {
    pub u: usize,
    pub v: usize,
    pub label: Label,
    /// Generation in which the edge (or the A-edge it was relabelled from) was created.
    pub generation: usize,
    /// `None` on loops, which carry no resistance.
    pub resistance: Option<f64>,
    pub mass: Mass,
    /// Position in the substitution tree: `A` or `B` at the root, then one
    /// child symbol per split of a B-edge.
    pub address: String,
}

impl LabeledEdge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub generation: usize,
    pub vertex_count: usize,
    pub edges: Vec<LabeledEdge>,
    pub r1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountVector {
    pub a: u64,
    pub b: u64,
}

impl CountVector {
    pub fn next(self) -> Self {
        CountVector {
            a: 2 * self.b,
            b: self.a + self.b,
        }
    }
}

/// `G′_0` with `r₁ = 1/2`.
pub fn seed_graph() -> LabeledGraph {
    seed_graph_with(0.5)
}

pub fn seed_graph_with(r1: f64) -> LabeledGraph {
    LabeledGraph {
        generation: 0,
        vertex_count: 1,
        edges: vec![
            LabeledEdge {
                u: 0,
                v: 0,
                label: Label::A,
                generation: 0,
                resistance: None,
                mass: Mass::new(1, 3),
                address: "A".into(),
            },
            LabeledEdge {
                u: 0,
                v: 0,
                label: Label::B,
                generation: 0,
                resistance: None,
                mass: Mass::new(2, 3),
                address: "B".into(),
            },
        ],
        r1,
    }
}

/// `r_A(g) = r₁·(√2)^(1−g)`.
pub fn a_resistance(r1: f64, generation: usize) -> f64 {
    r1 * 2f64.powf((1.0 - generation as f64) / 2.0)
}

/// One substitution step.
pub fn substitute(g: &LabeledGraph) -> LabeledGraph {
    let generation = g.generation + 1;
    let r_a = a_resistance(g.r1, generation);
    let mut vertex_count = g.vertex_count;
    let mut edges = Vec::with_capacity(g.edges.len() * 2);
    for e in &g.edges {
        match e.label {
            Label::A => edges.push(LabeledEdge {
                label: Label::B,
                ..e.clone()
            }),
            Label::B => {
                let w = vertex_count;
                vertex_count += 1;
                let quarter = e.mass / 4;
                for (j, (u, v)) in [(e.u, w), (w, e.v)].into_iter().enumerate() {
                    edges.push(LabeledEdge {
                        u,
                        v,
                        label: Label::A,
                        generation,
                        resistance: Some(r_a),
                        mass: quarter,
                        address: format!("{}.{}", e.address, j + 1),
                    });
                }
                edges.push(LabeledEdge {
                    u: w,
                    v: w,
                    label: Label::B,
                    generation,
                    resistance: None,
                    mass: e.mass / 2,
                    address: format!("{}.3", e.address),
                });
            }
        }
    }
    LabeledGraph {
        generation,
        vertex_count,
        edges,
        r1: g.r1,
    }
}

/// `G′_n`.
pub fn generate(n: usize) -> Result<LabeledGraph> {
    generate_with(n, 0.5)
}

pub fn generate_with(n: usize, r1: f64) -> Result<LabeledGraph> {
    if n > MAX_GENERATION {
        return Err(Error::Capacity {
            what: "graph-directed generation",
            requested: n,
            limit: MAX_GENERATION,
        });
    }
    if !(r1 > 0.0 && r1.is_finite()) {
        return Err(Error::input(format!("r1 = {r1} must be positive")));
    }
    let mut g = seed_graph_with(r1);
    for _ in 0..n {
        g = substitute(&g);
    }
    Ok(g)
}

/// The A/B edge counts `(a_n, b_n)` predicted by the counting matrix.
pub fn predicted_counts(n: usize) -> CountVector {
    (0..n).fold(CountVector { a: 1, b: 1 }, |c, _| c.next())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountingMatrix {
    pub matrix: [[i64; 2]; 2],
    pub spectral_radius: i64,
    pub s: (i64, i64),
    pub spectral_dimension: (i64, i64),
}

/// `[[0, 2], [1, 1]]` with spectral radius 2, so `(2√2)^(−s)·2 = 1` gives `s = 2/3`.
pub fn counting_matrix() -> CountingMatrix {
    let matrix = [[0i64, 2], [1, 1]];
    let trace = matrix[0][0] + matrix[1][1];
    let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
    let disc = trace * trace - 4 * det;
    let root = integer_sqrt(disc).expect("discriminant is a perfect square");
    let spectral_radius = (trace + root) / 2;
    // ρ = 2^1 and the resistance scaling 2√2 = 2^(3/2), so s = 1 / (3/2).
    let exponent = log2_exponent(spectral_radius).expect("radius is a power of two");
    let s = Ratio::new(2 * exponent, 3);
    let ds = s * 2;
    CountingMatrix {
        matrix,
        spectral_radius,
        s: (*s.numer(), *s.denom()),
        spectral_dimension: (*ds.numer(), *ds.denom()),
    }
}

fn integer_sqrt(x: i64) -> Option<i64> {
    if x < 0 {
        return None;
    }
    let r = (x as f64).sqrt().round() as i64;
    (r * r == x).then_some(r)
}

fn log2_exponent(x: i64) -> Option<i64> {
    (x > 0 && x & (x - 1) == 0).then(|| x.trailing_zeros() as i64)
}

impl LabeledGraph {
    pub fn counts(&self) -> CountVector {
        let a = self.edges.iter().filter(|e| e.label == Label::A).count() as u64;
        CountVector {
            a,
            b: self.edges.len() as u64 - a,
        }
    }

    pub fn total_mass(&self) -> Mass {
        self.edges.iter().map(|e| e.mass).sum()
    }

    /// Arc ends plus twice the loops at each vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    /// Resistance Laplacian; loops contribute nothing.
    pub fn laplacian(&self) -> SymMatrix {
        let mut l = SymMatrix::zeros(self.vertex_count);
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            let c = 1.0 / e.resistance.expect("non-loop edges carry a resistance");
            l.add(e.u, e.u, c);
            l.add(e.v, e.v, c);
            l.add(e.u, e.v, -c);
        }
        l
    }

    /// Half of each incident arc's mass plus the full mass of each loop.
    pub fn lumped_masses(&self) -> Vec<Mass> {
        let mut m = vec![Mass::from_integer(0); self.vertex_count];
        for e in &self.edges {
            if e.is_loop() {
                m[e.u] += e.mass;
            } else {
                let half = e.mass / 2;
                m[e.u] += half;
                m[e.v] += half;
            }
        }
        m
    }

    pub fn document(&self) -> LabeledGraphDocument {
        LabeledGraphDocument {
            level: self.generation,
            vertices: (0..self.vertex_count).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| LabeledEdgeRecord {
                    u: e.u,
                    v: e.v,
                    address: e.address.clone(),
                    kind: if e.is_loop() { "loop" } else { "arc" },
                    label: e.label.as_str(),
                    mass: format!("{}/{}", e.mass.numer(), e.mass.denom()),
                    resistance: e.resistance,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&self.document())
            .map_err(|e| Error::input(format!("json: {e}")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LabeledGraphDocument {
    pub level: usize,
    pub vertices: Vec<usize>,
    pub edges: Vec<LabeledEdgeRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LabeledEdgeRecord {
    pub u: usize,
    pub v: usize,
    pub address: String,
    pub kind: &'static str,
    pub label: &'static str,
    pub mass: String,
    pub resistance: Option<f64>,
}
