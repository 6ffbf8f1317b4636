//! Resistance forms on the graphs `G_n`.
//!
//! A scheme assigns a resistance `r_α > 0` to every arc-type cell with
//! `r_α = r_(α1) + r_(α2)`. On `G_n` each arc edge (a level-`(n+1)` arc cell)
//! carries conductance `1/r_α`; loop edges carry none. From this come the
//! Laplacian, its traces onto coarser vertex sets, the effective resistance
//! `R`, the local resistance metric `S`, harmonic extension and energies.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::cells::{
    self, m_exponent, steps_to_top, Boundary, CellAddress, CellKind, Filtration, Multigraph,
    VertexId,
};
use crate::error::{Error, Result};
use crate::numerics::{schur, Cholesky, SymMatrix};

const ADDITIVITY_TOL: f64 = 1e-12;

/// Levels up to which cell S-diameters are computed exactly during validation.
pub const EXACT_DIAMETER_LEVEL: usize = 6;

/// A custom family of resistances.
///
/// `level_one` fixes `r_(1)`, `r_(2)`. An arc `α` gives `arc_split·r_α` to `α1`
/// and the remainder to `α2`. A loop `α` of level `L` gives
/// `loop_children·loop_decay^(L-1)` to its two arcs. `overrides` replaces the
/// value of any listed arc address; the additive remainder of an overridden
/// `α1` still flows to `α2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomRule {
    pub level_one: [f64; 2],
    pub arc_split: f64,
    pub loop_children: [f64; 2],
    pub loop_decay: f64,
    #[serde(default)]
    pub overrides: BTreeMap<CellAddress, f64>,
}

impl CustomRule {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("custom scheme: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ResistanceScheme {
    /// `r_α = 2^(-|α|)`.
    Dyadic,
    /// `r_α = 2^(-m(α)/2)·r₁`.
    Conformal {
        r1: f64,
    },
    Custom(CustomRule),
}

impl ResistanceScheme {
    pub fn conformal() -> Self {
        ResistanceScheme::Conformal { r1: 0.5 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ResistanceScheme::Dyadic => "dyadic",
            ResistanceScheme::Conformal { .. } => "conformal",
            ResistanceScheme::Custom(_) => "custom",
        }
    }

    /// Resistances of all cells of levels `1..=depth`, indexed by cell index;
    /// `None` marks loop cells.
    pub fn table(&self, depth: usize) -> ResistanceTable {
        let mut levels: Vec<Vec<Option<f64>>> = Vec::with_capacity(depth);
        for level in 1..=depth {
            let row = match self {
                ResistanceScheme::Dyadic => CellAddress::all(level)
                    .map(|a| a.is_arc().then(|| 0.5f64.powi(level as i32)))
                    .collect(),
                ResistanceScheme::Conformal { r1 } => CellAddress::all(level)
                    .map(|a| {
                        m_exponent(&a)
                            .ok()
                            .map(|m| r1 * 2f64.powf(-(m as f64) / 2.0))
                    })
                    .collect(),
                ResistanceScheme::Custom(rule) => {
                    if level == 1 {
                        vec![Some(rule.level_one[0]), Some(rule.level_one[1]), None, None]
                    } else {
                        let parents = &levels[level - 2];
                        let mut row = Vec::with_capacity(parents.len() * 3);
                        for (i, parent) in parents.iter().enumerate() {
                            let addr = CellAddress::from_index(level - 1, i).expect("in range");
                            let first_default = match parent {
                                Some(r) => rule.arc_split * r,
                                None => {
                                    rule.loop_children[0] * rule.loop_decay.powi(level as i32 - 2)
                                }
                            };
                            let first =
                                *rule.overrides.get(&addr.child(1)).unwrap_or(&first_default);
                            let second_default = match parent {
                                Some(r) => r - first,
                                None => {
                                    rule.loop_children[1] * rule.loop_decay.powi(level as i32 - 2)
                                }
                            };
                            let second = *rule
                                .overrides
                                .get(&addr.child(2))
                                .unwrap_or(&second_default);
                            row.extend([Some(first), Some(second), None]);
                        }
                        row
                    }
                }
            };
            levels.push(row);
        }
        ResistanceTable { levels }
    }

    /// `r_α` of a single arc cell.
    pub fn resistance(&self, addr: &CellAddress) -> Result<f64> {
        if !addr.is_arc() {
            return Err(Error::domain(format!(
                "loop cell {addr} carries no resistance"
            )));
        }
        match self {
            ResistanceScheme::Dyadic => Ok(0.5f64.powi(addr.level() as i32)),
            ResistanceScheme::Conformal { r1 } => {
                Ok(r1 * 2f64.powf(-(m_exponent(addr)? as f64) / 2.0))
            }
            ResistanceScheme::Custom(_) => Ok(self
                .table(addr.level())
                .get(addr)
                .expect("arc cell has a resistance")),
        }
    }
}

/// Per-level resistances produced by [`ResistanceScheme::table`].
#[derive(Debug, Clone)]
pub struct ResistanceTable {
    levels: Vec<Vec<Option<f64>>>,
}

impl ResistanceTable {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn get(&self, addr: &CellAddress) -> Option<f64> {
        self.levels
            .get(addr.level().checked_sub(1)?)
            .and_then(|row| row[addr.index()])
    }

    pub fn level(&self, level: usize) -> &[Option<f64>] {
        &self.levels[level - 1]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FailureKind {
    NonPositive {
        value: f64,
    },
    NotAdditive {
        parent: f64,
        children: f64,
    },
    NonDecaying {
        level: usize,
        max: f64,
        previous: f64,
    },
}

/// A violated admissibility condition.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationFailure {
    pub address: Option<CellAddress>,
    pub kind: FailureKind,
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.kind, &self.address) {
            (FailureKind::NonPositive { value }, Some(a)) => {
                write!(f, "resistance of {a} is {value}, must be positive")
            }
            (FailureKind::NotAdditive { parent, children }, Some(a)) => write!(
                f,
                "resistance of {a} is {parent} but its arc children sum to {children}"
            ),
            (
                FailureKind::NonDecaying {
                    level,
                    max,
                    previous,
                },
                _,
            ) => write!(
                f,
                "max resistance {max} at level {level} does not drop below {previous}"
            ),
            (kind, None) => write!(f, "{kind:?}"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub scheme: &'static str,
    pub levels: usize,
    /// `max r_α` over arc cells of each level `1..=levels`.
    pub max_resistance: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// Empirical verdict on `Σ_n max r_α < ∞`; `None` below three levels.
    pub summable: Option<bool>,
    /// Max over `k`-cells of the S-diameter of `V_levels ∩ J_α`, for `k = 1..=levels`.
    pub s_diameters: Option<Vec<f64>>,
}

/// Checks positivity, additivity and decay of the maximal resistance over levels `1..=n`.
pub fn validate(scheme: &ResistanceScheme, n: usize) -> Result<ValidationReport> {
    if n == 0 {
        return Err(Error::input("validation needs at least one level"));
    }
    check_levels(scheme, n)?;
    let table = scheme.table(n);
    let max_resistance: Vec<f64> = (1..=n)
        .map(|k| {
            table
                .level(k)
                .iter()
                .flatten()
                .fold(0.0, |a: f64, &b| a.max(b))
        })
        .collect();
    let partial_sums = max_resistance
        .iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    let summable = (n >= 3).then(|| {
        let rate = (max_resistance[n - 1] / max_resistance[n - 3]).sqrt();
        rate < 1.0
    });
    let s_diameters = if n <= EXACT_DIAMETER_LEVEL {
        Some(cell_s_diameters(scheme, n)?)
    } else {
        None
    };
    Ok(ValidationReport {
        scheme: scheme.name(),
        levels: n,
        max_resistance,
        partial_sums,
        summable,
        s_diameters,
    })
}

fn check_levels(scheme: &ResistanceScheme, n: usize) -> Result<()> {
    let table = scheme.table(n);
    let fail =
        |address: Option<CellAddress>, kind| Error::Validation(ValidationFailure { address, kind });
    let mut previous_max = f64::INFINITY;
    for level in 1..=n {
        let mut max: f64 = 0.0;
        for (i, r) in table.level(level).iter().enumerate() {
            if let Some(r) = *r {
                let addr = CellAddress::from_index(level, i).expect("in range");
                if !(r > 0.0) || !r.is_finite() {
                    return Err(fail(Some(addr), FailureKind::NonPositive { value: r }));
                }
                max = max.max(r);
                if level < n {
                    let c1 = table.level(level + 1)[3 * i].expect("arc child");
                    let c2 = table.level(level + 1)[3 * i + 1].expect("arc child");
                    if c1 > 0.0 && c2 > 0.0 && (c1 + c2 - r).abs() > ADDITIVITY_TOL * r {
                        return Err(fail(
                            Some(addr),
                            FailureKind::NotAdditive {
                                parent: r,
                                children: c1 + c2,
                            },
                        ));
                    }
                }
            }
        }
        if max >= previous_max {
            return Err(fail(
                None,
                FailureKind::NonDecaying {
                    level,
                    max,
                    previous: previous_max,
                },
            ));
        }
        previous_max = max;
    }
    Ok(())
}

fn cell_s_diameters(scheme: &ResistanceScheme, n: usize) -> Result<Vec<f64>> {
    let network = Network::new(scheme.clone(), n)?;
    let all: Vec<Vec<f64>> = (0..network.vertex_count())
        .map(|x| network.distances_from(x))
        .collect();
    let f = network.filtration();
    (1..=n)
        .map(|k| {
            let mut best: f64 = 0.0;
            for cell in f.cells(k) {
                let inside = f.vertices_in(&cell.address)?;
                for &x in &inside {
                    for &y in &inside {
                        best = best.max(all[x][y]);
                    }
                }
            }
            Ok(best)
        })
        .collect()
}

/// `G_n` with the resistances of a validated scheme.
#[derive(Debug, Clone)]
pub struct Network {
    scheme: ResistanceScheme,
    filtration: Filtration,
    graph: Multigraph,
    table: ResistanceTable,
    arc_resistance: Vec<f64>,
    adjacency: Vec<Vec<(VertexId, usize)>>,
}

impl Network {
    pub fn new(scheme: ResistanceScheme, n: usize) -> Result<Self> {
        let filtration = Filtration::build(n)?;
        Self::from_filtration(scheme, filtration)
    }

    pub fn from_filtration(scheme: ResistanceScheme, filtration: Filtration) -> Result<Self> {
        let n = filtration.level();
        check_levels(&scheme, n + 1)?;
        let table = scheme.table(n + 1);
        let graph = filtration.graph();
        let arc_resistance: Vec<f64> = graph
            .arcs
            .iter()
            .map(|e| table.get(&e.address).expect("arc resistance"))
            .collect();
        let mut adjacency = vec![Vec::with_capacity(4); graph.vertex_count];
        for (k, e) in graph.arcs.iter().enumerate() {
            adjacency[e.u].push((e.v, k));
            adjacency[e.v].push((e.u, k));
        }
        Ok(Self {
            scheme,
            filtration,
            graph,
            table,
            arc_resistance,
            adjacency,
        })
    }

    pub fn level(&self) -> usize {
        self.filtration.level()
    }

    pub fn scheme(&self) -> &ResistanceScheme {
        &self.scheme
    }

    pub fn filtration(&self) -> &Filtration {
        &self.filtration
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count
    }

    pub fn table(&self) -> &ResistanceTable {
        &self.table
    }

    /// Resistances aligned with `graph().arcs`.
    pub fn arc_resistances(&self) -> &[f64] {
        &self.arc_resistance
    }

    fn check_vertex(&self, x: VertexId) -> Result<()> {
        if x >= self.vertex_count() {
            return Err(Error::input(format!(
                "vertex {x} not in V_{} (size {})",
                self.level(),
                self.vertex_count()
            )));
        }
        Ok(())
    }

    fn check_function(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.vertex_count() {
            return Err(Error::input(format!(
                "function has {} values, V_{} has {}",
                f.len(),
                self.level(),
                self.vertex_count()
            )));
        }
        if f.iter().any(|x| !x.is_finite()) {
            return Err(Error::input("function values must be finite"));
        }
        Ok(())
    }

    /// Conductance Laplacian `Σ r^(-1)(u(x) − u(y))` as a matrix.
    pub fn laplacian(&self) -> SymMatrix {
        let mut l = SymMatrix::zeros(self.vertex_count());
        for (e, r) in self.graph.arcs.iter().zip(&self.arc_resistance) {
            let c = 1.0 / r;
            l.add(e.u, e.u, c);
            l.add(e.v, e.v, c);
            l.add(e.u, e.v, -c);
        }
        l
    }

    /// Factorization of the Laplacian grounded at vertex 0.
    pub fn resistance_solver(&self) -> Result<ResistanceSolver> {
        let l = self.laplacian();
        let rest: Vec<usize> = (1..self.vertex_count()).collect();
        let grounded = l.submatrix(&rest);
        Ok(ResistanceSolver {
            n: self.vertex_count(),
            chol: Cholesky::factor(&grounded)?,
            grounded,
        })
    }

    pub fn effective_resistance(&self, x: VertexId, y: VertexId) -> Result<f64> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if x == y {
            return Ok(0.0);
        }
        Ok(self.resistance_solver()?.resistance(x, y))
    }

    /// Geodesic distances from `x` over arc edges weighted by resistance.
    pub fn distances_from(&self, x: VertexId) -> Vec<f64> {
        self.shortest_paths(x).0
    }

    fn shortest_paths(&self, source: VertexId) -> (Vec<f64>, Vec<Option<usize>>) {
        let n = self.vertex_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut via = vec![None; n];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Frontier(0.0, source));
        while let Some(Frontier(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, k) in &self.adjacency[u] {
                let nd = d + self.arc_resistance[k];
                if nd < dist[v] {
                    dist[v] = nd;
                    via[v] = Some(k);
                    heap.push(Frontier(nd, v));
                }
            }
        }
        (dist, via)
    }

    /// `S(x, y)`.
    pub fn local_metric(&self, x: VertexId, y: VertexId) -> Result<f64> {
        Ok(self.geodesic(x, y)?.0)
    }

    /// `S(x, y)` with the arc edges (indices into `graph().arcs`) of one geodesic, from `x`.
    pub fn geodesic(&self, x: VertexId, y: VertexId) -> Result<(f64, Vec<usize>)> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        let (dist, via) = self.shortest_paths(x);
        let mut path = Vec::new();
        let mut at = y;
        while let Some(k) = via[at] {
            path.push(k);
            let e = &self.graph.arcs[k];
            at = if e.u == at { e.v } else { e.u };
        }
        path.reverse();
        Ok((dist[y], path))
    }

    pub fn energy(&self, f: &[f64]) -> Result<f64> {
        self.energy_pair(f, f)
    }

    /// The bilinear form `E_n(f, g)`.
    pub fn energy_pair(&self, f: &[f64], g: &[f64]) -> Result<f64> {
        self.check_function(f)?;
        self.check_function(g)?;
        Ok(self
            .graph
            .arcs
            .iter()
            .zip(&self.arc_resistance)
            .map(|(e, r)| (f[e.u] - f[e.v]) * (g[e.u] - g[e.v]) / r)
            .sum())
    }

    /// `∂f(x) = Σ_(y ~ x) r^(-1)(f(x) − f(y))` over arc neighbours in `G_n`.
    pub fn normal_derivative(&self, f: &[f64], x: VertexId) -> Result<f64> {
        self.check_function(f)?;
        self.check_vertex(x)?;
        Ok(self.adjacency[x]
            .iter()
            .map(|&(y, k)| (f[x] - f[y]) / self.arc_resistance[k])
            .sum())
    }

    /// Extends values on `V_m` to `V_n` cell by cell: an arc's midpoint takes
    /// `(r_(α2) f(v1) + r_(α1) f(v2)) / r_α`, a loop's new vertex takes its base value.
    pub fn harmonic_extension(&self, boundary: &[f64], m: usize) -> Result<Vec<f64>> {
        let n = self.level();
        if m > n {
            return Err(Error::input(format!(
                "boundary level {m} exceeds network level {n}"
            )));
        }
        if boundary.len() != cells::vertex_count(m) {
            return Err(Error::input(format!(
                "boundary data has {} values, V_{m} has {}",
                boundary.len(),
                cells::vertex_count(m)
            )));
        }
        if boundary.iter().any(|x| !x.is_finite()) {
            return Err(Error::input("boundary values must be finite"));
        }
        let mut f = vec![0.0; self.vertex_count()];
        f[..boundary.len()].copy_from_slice(boundary);
        for level in m + 1..=n {
            let children = self.table.level(level + 1);
            for (i, cell) in self.filtration.cells(level).iter().enumerate() {
                let w = cell.split.expect("cells below the finest level are split");
                f[w] = match cell.boundary {
                    Boundary::Arc(v1, v2) => {
                        let r1 = children[3 * i].expect("arc child");
                        let r2 = children[3 * i + 1].expect("arc child");
                        (r2 * f[v1] + r1 * f[v2]) / (r1 + r2)
                    }
                    Boundary::Loop(v) => f[v],
                };
            }
        }
        Ok(f)
    }

    /// Energy minimizer with prescribed values on `V_m`, by a grounded linear solve.
    pub fn harmonic_minimizer(&self, boundary: &[f64], m: usize) -> Result<Vec<f64>> {
        let nb = boundary.len();
        if m > self.level() || nb != cells::vertex_count(m) {
            return Err(Error::input("boundary data does not match V_m"));
        }
        let mut f = vec![0.0; self.vertex_count()];
        f[..nb].copy_from_slice(boundary);
        if nb == self.vertex_count() {
            return Ok(f);
        }
        let l = self.laplacian();
        let interior: Vec<usize> = (nb..self.vertex_count()).collect();
        let rhs: Vec<f64> = interior
            .iter()
            .map(|&i| -(0..nb).map(|b| l.get(i, b) * boundary[b]).sum::<f64>())
            .collect();
        let x = Cholesky::factor(&l.submatrix(&interior))?.solve(&rhs);
        f[nb..].copy_from_slice(&x);
        Ok(f)
    }

    pub fn resistance_csv(&self) -> Result<String> {
        let mut rows: Vec<(&CellAddress, f64)> = self
            .graph
            .arcs
            .iter()
            .zip(&self.arc_resistance)
            .map(|(e, &r)| (&e.address, r))
            .collect();
        rows.sort_by(|a, b| a.0.cmp(b.0));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["address", "resistance"])
            .map_err(csv_error)?;
        for (a, r) in rows {
            w.write_record([a.to_string(), format_float(r)])
                .map_err(csv_error)?;
        }
        finish_csv(w)
    }
}

#[derive(Debug, PartialEq)]
struct Frontier(f64, VertexId);

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Effective resistances from one factorization of the grounded Laplacian.
#[derive(Debug, Clone)]
pub struct ResistanceSolver {
    n: usize,
    chol: Cholesky,
    grounded: SymMatrix,
}

impl ResistanceSolver {
    pub fn resistance(&self, x: VertexId, y: VertexId) -> f64 {
        assert!(x < self.n && y < self.n, "vertex out of range");
        if x == y {
            return 0.0;
        }
        let mut b = vec![0.0; self.n - 1];
        if x > 0 {
            b[x - 1] += 1.0;
        }
        if y > 0 {
            b[y - 1] -= 1.0;
        }
        let phi = self.chol.solve_refined(&self.grounded, &b, 2);
        let at = |v: VertexId| if v == 0 { 0.0 } else { phi[v - 1] };
        at(x) - at(y)
    }
}

pub fn laplacian(scheme: &ResistanceScheme, n: usize) -> Result<SymMatrix> {
    Ok(Network::new(scheme.clone(), n)?.laplacian())
}

/// Schur complement of the level-`from` Laplacian onto `V_to`.
pub fn trace_form(scheme: &ResistanceScheme, from: usize, to: usize) -> Result<SymMatrix> {
    if to > from {
        return Err(Error::input(format!(
            "cannot trace level {from} onto finer level {to}"
        )));
    }
    let l = laplacian(scheme, from)?;
    let keep: Vec<usize> = (0..cells::vertex_count(to)).collect();
    schur(&l, &keep)
}

pub fn effective_resistance(
    scheme: &ResistanceScheme,
    n: usize,
    x: VertexId,
    y: VertexId,
) -> Result<f64> {
    Network::new(scheme.clone(), n)?.effective_resistance(x, y)
}

pub fn local_metric(scheme: &ResistanceScheme, n: usize, x: VertexId, y: VertexId) -> Result<f64> {
    Network::new(scheme.clone(), n)?.local_metric(x, y)
}

pub fn harmonic_extension(
    scheme: &ResistanceScheme,
    boundary: &[f64],
    m: usize,
    n: usize,
) -> Result<Vec<f64>> {
    Network::new(scheme.clone(), n)?.harmonic_extension(boundary, m)
}

pub fn energy(scheme: &ResistanceScheme, n: usize, f: &[f64]) -> Result<f64> {
    Network::new(scheme.clone(), n)?.energy(f)
}

pub fn normal_derivative(
    scheme: &ResistanceScheme,
    n: usize,
    f: &[f64],
    x: VertexId,
) -> Result<f64> {
    Network::new(scheme.clone(), n)?.normal_derivative(f, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureKind {
    Bernoulli,
    Balanced,
    LocalResistance,
}

impl MeasureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MeasureKind::Bernoulli => "bernoulli",
            MeasureKind::Balanced => "balanced",
            MeasureKind::LocalResistance => "local-resistance",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureValue {
    Exact(Ratio<i64>),
    Real(f64),
}

impl MeasureValue {
    pub fn to_f64(self) -> f64 {
        match self {
            MeasureValue::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            MeasureValue::Real(x) => x,
        }
    }
}

const MAX_EXACT_LEVEL: usize = 30;

/// `μ_B(J_α) = (4·3^(n−1))^(-1)`.
pub fn bernoulli(addr: &CellAddress) -> Result<Ratio<i64>> {
    if addr.level() > MAX_EXACT_LEVEL {
        return Err(Error::Capacity {
            what: "exact measure level",
            requested: addr.level(),
            limit: MAX_EXACT_LEVEL,
        });
    }
    Ok(Ratio::new(1, cells::cell_count(addr.level()) as i64))
}

/// `μ_P(J_α) = 2^(-k)·base`, `k` the number of `P`-steps to a level-1 cell.
pub fn balanced(addr: &CellAddress) -> Result<Ratio<i64>> {
    if addr.level() > MAX_EXACT_LEVEL {
        return Err(Error::Capacity {
            what: "exact measure level",
            requested: addr.level(),
            limit: MAX_EXACT_LEVEL,
        });
    }
    let (k, top) = steps_to_top(addr);
    let base = if top.head() <= 2 { 6 } else { 3 };
    Ok(Ratio::new(1, base << k))
}

/// `ν` of the spine of an arc cell: `r_α`.
pub fn nu_spine(scheme: &ResistanceScheme, addr: &CellAddress) -> Result<f64> {
    scheme.resistance(addr)
}

/// `ν` of the boundary circle of a loop cell: `r_(α1) + r_(α2)`.
pub fn nu_circle(scheme: &ResistanceScheme, addr: &CellAddress) -> Result<f64> {
    if addr.is_arc() {
        return Err(Error::domain(format!(
            "{addr} is an arc cell and bounds no circle"
        )));
    }
    Ok(scheme.resistance(&addr.child(1))? + scheme.resistance(&addr.child(2))?)
}

/// `ν` of the central circle `J_(1) ∪ J_(2)`.
pub fn nu_central_circle(scheme: &ResistanceScheme) -> Result<f64> {
    Ok(scheme.resistance(&CellAddress::new(1, &[])?)?
        + scheme.resistance(&CellAddress::new(2, &[])?)?)
}

pub fn measure(
    addr: &CellAddress,
    kind: MeasureKind,
    scheme: &ResistanceScheme,
) -> Result<MeasureValue> {
    match kind {
        MeasureKind::Bernoulli => bernoulli(addr).map(MeasureValue::Exact),
        MeasureKind::Balanced => balanced(addr).map(MeasureValue::Exact),
        MeasureKind::LocalResistance => match addr.kind() {
            CellKind::Arc => nu_spine(scheme, addr).map(MeasureValue::Real),
            CellKind::Loop => Err(Error::domain(format!(
                "local resistance measure of the loop cell {addr} is infinite; query its circle"
            ))),
        },
    }
}

/// CSV table `address,kind,value` over all cells of a level. Loop cells report
/// their circle under the local resistance measure.
pub fn measure_csv(level: usize, kind: MeasureKind, scheme: &ResistanceScheme) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["address", "kind", "value"])
        .map_err(csv_error)?;
    for addr in CellAddress::all(level) {
        let value = match (kind, addr.kind()) {
            (MeasureKind::LocalResistance, CellKind::Loop) => nu_circle(scheme, &addr)?,
            _ => measure(&addr, kind, scheme)?.to_f64(),
        };
        w.write_record([
            addr.to_string(),
            kind.as_str().to_string(),
            format_float(value),
        ])
        .map_err(csv_error)?;
    }
    finish_csv(w)
}

/// 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    Error::input(format!("csv: {e}"))
}

pub(crate) fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::input(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::input(format!("csv: {e}")))
}
