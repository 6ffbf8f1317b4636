//! Spectral decimation for the self-similar walks on `G_n`.
//!
//! A new vertex steps to each of its two arc neighbours with probability `p`.
//! A vertex born at an earlier level steps with probability `p` along each of
//! the two edges descending from the arc it split, and `(1 − 2p)/2` along each
//! of the two edges descending from its own loop. The points `a`, `−a` step
//! `q/2` along each central edge and `(1 − q)/2` into their arm. With
//! `M_0 = [[q, −q], [−q, q]]` the Laplacians `M_n = I − P_n` are spectrally
//! similar with `φ(z) = p/(2p − z)` and `R(z) = ((2p+1)/p)z − z²/p`, which gives
//!
//! `σ(M_n) = ⋃_(m<n) R^(−m){2p} ∪ R^(−n){0, 2q}`
//!
//! with multiplicity `2·3^(n−m−1)` on the first part and 1 on the second.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cells::{self, Boundary, Filtration, VertexId};
use crate::error::{Error, Result};
use crate::forms::{csv_error, finish_csv, format_float};
use crate::numerics::{schur_general, sym_eig, SymMatrix};

/// Deepest graph level for which atoms are enumerated.
pub const MAX_SPECTRUM_LEVEL: usize = 24;

const KERNEL_TOL: f64 = 1e-8;
const COLLISION_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecimationParams {
    p: f64,
    q: f64,
}

impl DecimationParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0 && p < 0.5) {
            return Err(Error::input(format!("p = {p} must lie in (0, 1/2)")));
        }
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::input(format!("q = {q} must lie in (0, 1)")));
        }
        Ok(Self { p, q })
    }

    /// The simple random walk on `G_n`.
    pub fn simple() -> Self {
        Self { p: 0.25, q: 0.5 }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The exceptional value `2p`.
    pub fn exceptional(&self) -> f64 {
        2.0 * self.p
    }
}

/// `R(z) = ((2p+1)/p)·z − z²/p`.
pub fn rmap(z: f64, p: f64) -> f64 {
    (2.0 * p + 1.0) / p * z - z * z / p
}

/// `φ(z) = p/(2p − z)`.
pub fn phi(z: f64, p: f64) -> f64 {
    p / (2.0 * p - z)
}

/// The two roots of `R(z) = w`, minus branch first.
pub fn preimages(w: f64, p: f64) -> Result<[f64; 2]> {
    let b = 2.0 * p + 1.0;
    let discriminant = b * b - 4.0 * p * w;
    if discriminant < 0.0 {
        return Err(Error::NoRealPreimage { w, discriminant });
    }
    let s = discriminant.sqrt();
    // The minus root via the product of roots avoids cancellation near w = 0.
    let plus = 0.5 * (b + s);
    Ok([p * w / plus, plus])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    Minus,
    Plus,
}

impl Branch {
    pub fn index(self) -> usize {
        match self {
            Branch::Minus => 0,
            Branch::Plus => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Branch::Minus => '-',
            Branch::Plus => '+',
        }
    }

    pub fn from_symbol(c: char) -> Result<Self> {
        match c {
            '-' => Ok(Branch::Minus),
            '+' => Ok(Branch::Plus),
            other => Err(Error::input(format!(
                "branch symbol {other:?} is neither '-' nor '+'"
            ))),
        }
    }
}

pub fn lineage_string(lineage: &[Branch]) -> String {
    lineage.iter().map(|b| b.symbol()).collect()
}

pub fn parse_lineage(s: &str) -> Result<Vec<Branch>> {
    s.chars().map(Branch::from_symbol).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Seed {
    Zero,
    TwoQ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Birth {
    /// `z ∈ R^(−m){2p}`.
    Exceptional { m: usize },
    /// `z ∈ R^(−n){0, 2q}`.
    Initial { seed: Seed },
}

/// One eigenvalue of `M_n` with its multiplicity and branch history.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumAtom {
    pub value: f64,
    pub multiplicity: usize,
    pub birth: Birth,
    /// Branches applied from the seed outwards; the last one produces `value`.
    pub lineage: Vec<Branch>,
}

impl SpectrumAtom {
    /// `m` for exceptional atoms, the lineage length for initial ones.
    pub fn depth(&self) -> usize {
        self.lineage.len()
    }

    pub fn birth_name(&self) -> &'static str {
        match self.birth {
            Birth::Exceptional { .. } => "exceptional",
            Birth::Initial { .. } => "initial",
        }
    }

    /// Values along the lineage, from the seed to `value`.
    pub fn trajectory(&self, params: &DecimationParams) -> Result<Vec<f64>> {
        let start = match self.birth {
            Birth::Exceptional { .. } => params.exceptional(),
            Birth::Initial { seed: Seed::Zero } => 0.0,
            Birth::Initial { seed: Seed::TwoQ } => 2.0 * params.q,
        };
        let mut out = Vec::with_capacity(self.lineage.len() + 1);
        out.push(start);
        for b in &self.lineage {
            let w = *out.last().expect("nonempty");
            out.push(preimages(w, params.p)?[b.index()]);
        }
        Ok(out)
    }
}

impl fmt::Display for SpectrumAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (x{}, {} m={} lineage '{}')",
            self.value,
            self.multiplicity,
            self.birth_name(),
            self.depth(),
            lineage_string(&self.lineage)
        )
    }
}

/// A branch dropped because its preimage is not real.
#[derive(Debug, Clone, PartialEq)]
pub struct PrunedBranch {
    pub birth: Birth,
    pub lineage: Vec<Branch>,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct GraphSpectrum {
    pub level: usize,
    pub params: DecimationParams,
    pub atoms: Vec<SpectrumAtom>,
    pub pruned: Vec<PrunedBranch>,
}

impl GraphSpectrum {
    pub fn total_multiplicity(&self) -> usize {
        self.atoms.iter().map(|a| a.multiplicity).sum()
    }

    /// Eigenvalues repeated by multiplicity, ascending.
    pub fn sorted_values(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .atoms
            .iter()
            .flat_map(|a| std::iter::repeat(a.value).take(a.multiplicity))
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }

    pub fn find(&self, exceptional: bool, lineage: &[Branch]) -> Option<&SpectrumAtom> {
        self.atoms.iter().find(|a| {
            matches!(a.birth, Birth::Exceptional { .. }) == exceptional && a.lineage == lineage
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let doc: Vec<AtomRecord> = self
            .atoms
            .iter()
            .map(|a| AtomRecord {
                z: a.value,
                mult: a.multiplicity,
                birth: a.birth_name(),
                m: a.depth(),
                lineage: lineage_string(&a.lineage),
            })
            .collect();
        serde_json::to_string_pretty(&doc).map_err(|e| Error::input(format!("json: {e}")))
    }
}

#[derive(Debug, Serialize)]
struct AtomRecord {
    z: f64,
    mult: usize,
    birth: &'static str,
    m: usize,
    lineage: String,
}

/// Every branch word of length `depth` applied to `start`, minus branches first.
fn branch_tree(
    start: f64,
    depth: usize,
    p: f64,
    birth: Birth,
    pruned: &mut Vec<PrunedBranch>,
) -> Vec<(f64, Vec<Branch>)> {
    let mut level = vec![(start, Vec::new())];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * 2);
        for (w, lineage) in level {
            match preimages(w, p) {
                Ok(roots) => {
                    for b in [Branch::Minus, Branch::Plus] {
                        let mut l = lineage.clone();
                        l.push(b);
                        next.push((roots[b.index()], l));
                    }
                }
                Err(_) => pruned.push(PrunedBranch {
                    birth,
                    lineage,
                    value: w,
                }),
            }
        }
        level = next;
    }
    level
}

/// Eigenvalues of `M_n` with multiplicities.
pub fn graph_spectrum(n: usize, params: &DecimationParams) -> Result<GraphSpectrum> {
    if n > MAX_SPECTRUM_LEVEL {
        return Err(Error::Capacity {
            what: "spectrum level",
            requested: n,
            limit: MAX_SPECTRUM_LEVEL,
        });
    }
    let p = params.p;
    let mut atoms = Vec::new();
    let mut pruned = Vec::new();
    for m in 0..n {
        let birth = Birth::Exceptional { m };
        let multiplicity = 2 * 3usize.pow((n - m - 1) as u32);
        for (value, lineage) in branch_tree(params.exceptional(), m, p, birth, &mut pruned) {
            atoms.push(SpectrumAtom {
                value,
                multiplicity,
                birth,
                lineage,
            });
        }
    }
    for (seed, start) in [(Seed::Zero, 0.0), (Seed::TwoQ, 2.0 * params.q)] {
        let birth = Birth::Initial { seed };
        for (value, lineage) in branch_tree(start, n, p, birth, &mut pruned) {
            atoms.push(SpectrumAtom {
                value,
                multiplicity: 1,
                birth,
                lineage,
            });
        }
    }
    Ok(GraphSpectrum {
        level: n,
        params: *params,
        atoms,
        pruned,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Central,
    Arm,
    Arc,
    Loop,
}

impl Side {
    fn weight(self, params: &DecimationParams) -> f64 {
        match self {
            Side::Central => params.q / 2.0,
            Side::Arm => (1.0 - params.q) / 2.0,
            Side::Arc => params.p,
            Side::Loop => (1.0 - 2.0 * params.p) / 2.0,
        }
    }
}

/// Arc edges of `G_n` with the side each endpoint sees them from.
fn sided_arcs(f: &Filtration) -> Vec<(VertexId, VertexId, Side, Side)> {
    let mut sides: Vec<Option<(Side, Side)>> = vec![
        Some((Side::Central, Side::Central)),
        Some((Side::Central, Side::Central)),
        None,
        None,
    ];
    for level in 1..=f.level() {
        let mut next = Vec::with_capacity(sides.len() * 3);
        for s in &sides {
            match s {
                Some((s1, s2)) => {
                    next.extend([Some((*s1, Side::Arc)), Some((Side::Arc, *s2)), None])
                }
                None => {
                    let base = if level == 1 { Side::Arm } else { Side::Loop };
                    next.extend([Some((base, Side::Arc)), Some((Side::Arc, base)), None]);
                }
            }
        }
        sides = next;
    }
    f.edge_cells()
        .iter()
        .zip(&sides)
        .filter_map(|(cell, s)| match (cell.boundary, s) {
            (Boundary::Arc(u, v), Some((su, sv))) => Some((u, v, *su, *sv)),
            _ => None,
        })
        .collect()
}

/// The walk Laplacian `M_n = I − P_n` on `V_n` (row-major, not symmetric).
#[derive(Debug, Clone)]
pub struct WalkMatrix {
    level: usize,
    order: usize,
    data: Vec<f64>,
    stationary: Vec<f64>,
}

impl WalkMatrix {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.data
            .chunks(self.order)
            .map(|r| r.iter().sum())
            .collect()
    }

    /// Reversing measure, normalized to total mass 1.
    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// `|V_(n−1)|`: the leading block of the partition. Zero at level 0.
    pub fn old_count(&self) -> usize {
        if self.level == 0 {
            0
        } else {
            cells::vertex_count(self.level - 1)
        }
    }

    /// Blocks `(A, B, C, D)` over `V_(n−1)` and `V_n ∖ V_(n−1)`, each row-major.
    pub fn blocks(&self) -> [Vec<f64>; 4] {
        let k = self.old_count();
        let n = self.order;
        let block = |rows: std::ops::Range<usize>, cols: std::ops::Range<usize>| {
            rows.flat_map(|i| cols.clone().map(move |j| (i, j)))
                .map(|(i, j)| self.get(i, j))
                .collect::<Vec<_>>()
        };
        [
            block(0..k, 0..k),
            block(0..k, k..n),
            block(k..n, 0..k),
            block(k..n, k..n),
        ]
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.data
            .chunks(self.order)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `‖(M − z)v‖₂`.
    pub fn residual(&self, v: &[f64], z: f64) -> f64 {
        self.apply(v)
            .iter()
            .zip(v)
            .map(|(mv, x)| (mv - z * x).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// `Π^(1/2) M Π^(−1/2)`, symmetric because the walk is reversible.
    pub fn symmetrized(&self) -> SymMatrix {
        let root: Vec<f64> = self.stationary.iter().map(|x| x.sqrt()).collect();
        SymMatrix::from_fn(self.order, |i, j| {
            if i == j {
                self.get(i, i)
            } else {
                0.5 * (root[i] / root[j] * self.get(i, j) + root[j] / root[i] * self.get(j, i))
            }
        })
    }

    /// `S_n(z) = A − z − B(D − z)^(−1)C`, row-major on `V_(n−1)`.
    pub fn schur_complement(&self, z: f64) -> Result<Vec<f64>> {
        schur_general(self.order, &self.data, self.old_count(), z)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        crate::numerics::sym_eigvals(&self.symmetrized())
    }
}

/// Builds `M_n` for the given walk parameters.
pub fn walk_matrix(n: usize, params: &DecimationParams) -> Result<WalkMatrix> {
    let f = Filtration::build(n)?;
    Ok(walk_matrix_on(&f, params))
}

pub fn walk_matrix_on(f: &Filtration, params: &DecimationParams) -> WalkMatrix {
    let order = f.vertex_count();
    let mut data = vec![0.0; order * order];
    let arcs = sided_arcs(f);
    for &(u, v, su, sv) in &arcs {
        let wu = su.weight(params);
        let wv = sv.weight(params);
        data[u * order + v] -= wu;
        data[v * order + u] -= wv;
        data[u * order + u] += wu;
        data[v * order + v] += wv;
    }
    // Reversing measure by detailed balance along a spanning tree.
    let mut stationary = vec![0.0; order];
    let mut adjacency: Vec<Vec<VertexId>> = vec![Vec::new(); order];
    for &(u, v, _, _) in &arcs {
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    stationary[0] = 1.0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut seen = vec![false; order];
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &adjacency[u] {
            if !seen[v] {
                seen[v] = true;
                stationary[v] = stationary[u] * data[u * order + v] / data[v * order + u];
                queue.push_back(v);
            }
        }
    }
    let total: f64 = stationary.iter().sum();
    for x in stationary.iter_mut() {
        *x /= total;
    }
    WalkMatrix {
        level: f.level(),
        order,
        data,
        stationary,
    }
}

/// Extends an eigenfunction of `M_(k−1)` to `M_k` at eigenvalue `z`.
fn extend(f: &Filtration, level: usize, values: &mut [f64], z: f64, p: f64) -> Result<()> {
    let denom = 2.0 * p - z;
    if denom.abs() < COLLISION_TOL {
        return Err(Error::ExceptionalCollision { value: z, level });
    }
    for cell in f.cells(level) {
        let w = cell.split.expect("split below the finest level");
        values[w] = match cell.boundary {
            Boundary::Arc(v1, v2) => p * (values[v1] + values[v2]) / denom,
            Boundary::Loop(v) => 2.0 * p * values[v] / denom,
        };
    }
    Ok(())
}

/// Extends a vector on `V_(level−1)` to `V_level` by the eigenvalue-`z` rule.
pub fn extend_eigenvector(
    f: &Filtration,
    level: usize,
    coarse: &[f64],
    z: f64,
    p: f64,
) -> Result<Vec<f64>> {
    if level == 0 || level > f.level() || coarse.len() != cells::vertex_count(level - 1) {
        return Err(Error::input(format!(
            "cannot extend {} values to level {level}",
            coarse.len()
        )));
    }
    let mut values = vec![0.0; cells::vertex_count(level)];
    values[..coarse.len()].copy_from_slice(coarse);
    extend(f, level, &mut values, z, p)?;
    Ok(values)
}

/// Eigenfunctions with eigenvalue 2p born at level `k ≥ 1`: they vanish on `V_(k−1)`.
fn born_basis(f: &Filtration, k: usize, params: &DecimationParams) -> Result<Vec<Vec<f64>>> {
    let old = cells::vertex_count(k - 1);
    let new = cells::vertex_count(k) - old;
    let sub = Filtration::build(k)?;
    let m = walk_matrix_on(&sub, params);
    // B: old rows against new columns. The kernel of BᵀB is the born eigenspace.
    let gram = SymMatrix::from_fn(new, |a, b| {
        (0..old)
            .map(|i| m.get(i, old + a) * m.get(i, old + b))
            .sum()
    });
    let eig = sym_eig(&gram)?;
    let scale = eig.values.last().copied().unwrap_or(1.0).max(1.0);
    let expected = 2 * 3usize.pow(k as u32 - 1);
    let kernel: Vec<usize> = (0..new)
        .filter(|&j| eig.values[j] <= KERNEL_TOL * scale)
        .collect();
    if kernel.len() != expected {
        return Err(Error::domain(format!(
            "born eigenspace at level {k} has dimension {}, expected {expected}",
            kernel.len()
        )));
    }
    Ok(kernel
        .into_iter()
        .map(|j| {
            let mut v = vec![0.0; f.vertex_count()];
            v[old..old + new].copy_from_slice(eig.vector(j));
            v
        })
        .collect())
}

/// A basis of the eigenspace of `M_n` belonging to `atom`, one unit vector per
/// multiplicity.
pub fn eigenfunction(
    atom: &SpectrumAtom,
    n: usize,
    params: &DecimationParams,
) -> Result<Vec<Vec<f64>>> {
    let f = Filtration::build(n)?;
    let trajectory = atom.trajectory(params)?;
    let (birth_level, mut basis) = match atom.birth {
        Birth::Initial { seed } => {
            if atom.lineage.len() != n {
                return Err(Error::input(format!(
                    "initial atom has lineage length {}, expected {n}",
                    atom.lineage.len()
                )));
            }
            let mut v = vec![0.0; f.vertex_count()];
            v[0] = 1.0;
            v[1] = if seed == Seed::Zero { 1.0 } else { -1.0 };
            (0, vec![v])
        }
        Birth::Exceptional { m } => {
            if m + 1 > n || atom.lineage.len() != m {
                return Err(Error::input(format!(
                    "exceptional atom with m = {m} does not belong to level {n}"
                )));
            }
            let k = n - m;
            (k, born_basis(&f, k, params)?)
        }
    };
    for (step, level) in (birth_level + 1..=n).enumerate() {
        for v in basis.iter_mut() {
            extend(&f, level, v, trajectory[step + 1], params.p)?;
        }
    }
    for v in basis.iter_mut() {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    Ok(basis)
}

pub fn eigenfunction_csv(values: &[f64]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["vertex_id", "value"]).map_err(csv_error)?;
    for (i, x) in values.iter().enumerate() {
        w.write_record([i.to_string(), format_float(*x)])
            .map_err(csv_error)?;
    }
    finish_csv(w)
}

/// One atom of the integrated density of states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdsAtom {
    pub z: f64,
    pub weight: f64,
    pub m: usize,
    pub lineage: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdsReport {
    pub atoms: Vec<IdsAtom>,
    /// `Σ_(m ≤ max_m) 2^m·2·3^(−m−1)`.
    pub partial_total: f64,
}

/// Atoms `κ({z}) = 2·3^(−m−1)` at every `z ∈ R^(−m){2p}`, `m ≤ max_m`.
pub fn ids(max_m: usize, params: &DecimationParams) -> Result<IdsReport> {
    if max_m >= MAX_SPECTRUM_LEVEL {
        return Err(Error::Capacity {
            what: "density-of-states depth",
            requested: max_m,
            limit: MAX_SPECTRUM_LEVEL - 1,
        });
    }
    let mut atoms = Vec::new();
    let mut pruned = Vec::new();
    for m in 0..=max_m {
        let weight = 2.0 * 3f64.powi(-(m as i32) - 1);
        for (z, lineage) in branch_tree(
            params.exceptional(),
            m,
            params.p,
            Birth::Exceptional { m },
            &mut pruned,
        ) {
            atoms.push(IdsAtom {
                z,
                weight,
                m,
                lineage: lineage_string(&lineage),
            });
        }
    }
    let partial_total = atoms.iter().map(|a| a.weight).sum();
    Ok(IdsReport {
        atoms,
        partial_total,
    })
}

/// Number of `eigenvalues` within `tol` of each atom, divided by `3^n`.
pub fn empirical_ids(eigenvalues: &[f64], n: usize, atoms: &[IdsAtom], tol: f64) -> Vec<f64> {
    let scale = 3f64.powi(n as i32);
    atoms
        .iter()
        .map(|a| {
            eigenvalues
                .iter()
                .filter(|x| (*x - a.z).abs() < tol)
                .count() as f64
                / scale
        })
        .collect()
}
