//! Registry of the library invariants, run by `basilica check`.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cells::{self, address_dynamics, m_exponent, CellAddress, CellKind, Filtration};
use crate::decimation::{
    eigenfunction, extend_eigenvector, graph_spectrum, phi, preimages, rmap, walk_matrix,
    walk_matrix_on, Birth, DecimationParams,
};
use crate::error::Result;
use crate::forms::{nu_spine, Network, ResistanceScheme};
use crate::geometry::{backward_orbit, left_piece_fraction, p_map};
use crate::graphdir::{self, a_resistance, Label};
use crate::numerics::{schur, sym_eig, sym_eigvals, SymMatrix};
use crate::spectra::{big_psi, dirichlet_boundary_defect, dirichlet_spectrum, psi};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn bound(value: f64, limit: f64, what: &str) -> Self {
        Outcome {
            passed: value < limit,
            detail: format!("{what} = {value:.3e} (limit {limit:.0e})"),
        }
    }

    fn exact(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Invariant {
    pub module: &'static str,
    pub name: &'static str,
    run: fn() -> Result<Outcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Invariant {
    /// Errors count as failures.
    pub fn run(&self) -> CheckResult {
        let (passed, detail) = match (self.run)() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        CheckResult {
            module: self.module,
            name: self.name,
            passed,
            detail,
        }
    }
}

/// Invariants per module; the registry must match these counts.
pub const EXPECTED_COUNTS: [(&str, usize); 7] = [
    ("cells", 5),
    ("graphdir", 4),
    ("numerics", 3),
    ("forms", 5),
    ("decimation", 5),
    ("spectra", 4),
    ("geometry", 3),
];

pub fn registry() -> Vec<Invariant> {
    macro_rules! inv {
        ($module:literal, $name:literal, $f:ident) => {
            Invariant {
                module: $module,
                name: $name,
                run: $f,
            }
        };
    }
    vec![
        inv!("cells", "cell-and-vertex-counts", cell_counts),
        inv!("cells", "degree-regularity", degree_regularity),
        inv!("cells", "m-exponent-of-arc-children", m_exponent_children),
        inv!("cells", "dynamics-preserves-arcs", dynamics_preserves_arcs),
        inv!("cells", "vertex-id-stability", vertex_id_stability),
        inv!("graphdir", "trace-compatibility", graphdir_traces),
        inv!(
            "graphdir",
            "resistance-scaling",
            graphdir_resistance_scaling
        ),
        inv!("graphdir", "mass-conservation", graphdir_mass),
        inv!("graphdir", "vertex-count-doubles", graphdir_doubling),
        inv!("numerics", "orthonormality", orthonormality),
        inv!("numerics", "trace-preservation", trace_preservation),
        inv!("numerics", "schur-transitivity", schur_transitivity),
        inv!("forms", "metric-comparison", metric_comparison),
        inv!(
            "forms",
            "resistance-trace-consistency",
            resistance_trace_consistency
        ),
        inv!("forms", "harmonic-minimality", harmonic_minimality),
        inv!("forms", "gauss-green", gauss_green),
        inv!("forms", "nu-additivity-along-geodesics", nu_geodesics),
        inv!("decimation", "oracle-equivalence", oracle_equivalence),
        inv!(
            "decimation",
            "multiplicity-conservation",
            multiplicity_conservation
        ),
        inv!("decimation", "spectral-similarity", spectral_similarity),
        inv!("decimation", "eigenspace-mapping", eigenspace_mapping),
        inv!("decimation", "eigenfunction-scaling", eigenfunction_scaling),
        inv!(
            "spectra",
            "linearizer-functional-equation",
            functional_equation
        ),
        inv!("spectra", "dirichlet-consistency", dirichlet_consistency),
        inv!("spectra", "mass-lumping", mass_lumping),
        inv!(
            "spectra",
            "renormalization-constant",
            renormalization_constant
        ),
        inv!("geometry", "dynamical-consistency", dynamical_consistency),
        inv!("geometry", "counting-oracle", counting_oracle),
        inv!("geometry", "orbit-symmetry", orbit_symmetry),
    ]
}

pub fn run_all() -> Vec<CheckResult> {
    registry().iter().map(Invariant::run).collect()
}

fn quarter() -> Result<DecimationParams> {
    DecimationParams::new(0.25, 0.25)
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn cell_counts() -> Result<Outcome> {
    for n in 0..=8 {
        let f = Filtration::build(n)?;
        if f.vertex_count() != 2 * 3usize.pow(n as u32) {
            return Ok(Outcome::exact(
                false,
                format!("|V_{n}| = {}", f.vertex_count()),
            ));
        }
        for level in 1..=n + 1 {
            if f.cells(level).len() != 4 * 3usize.pow(level as u32 - 1) {
                return Ok(Outcome::exact(
                    false,
                    format!("level {level} cell count at n = {n}"),
                ));
            }
        }
    }
    Ok(Outcome::exact(true, "n ≤ 8"))
}

fn degree_regularity() -> Result<Outcome> {
    for n in 1..=8 {
        let g = Filtration::build(n)?.graph();
        if let Some(v) = g.degrees().iter().position(|&d| d != 4) {
            return Ok(Outcome::exact(false, format!("vertex {v} of G_{n}")));
        }
    }
    Ok(Outcome::exact(true, "degree 4 for 1 ≤ n ≤ 8"))
}

fn m_exponent_children() -> Result<Outcome> {
    for level in 1..=6 {
        for a in CellAddress::all(level).filter(|a| a.is_arc()) {
            let m = m_exponent(&a)?;
            if m_exponent(&a.child(1))? != m + 2 || m_exponent(&a.child(2))? != m + 2 {
                return Ok(Outcome::exact(false, format!("children of {a}")));
            }
        }
    }
    Ok(Outcome::exact(true, "arc addresses of level ≤ 6"))
}

fn dynamics_preserves_arcs() -> Result<Outcome> {
    let three: CellAddress = "3".parse()?;
    for top in ["1", "2"] {
        if address_dynamics(&top.parse()?)? != three {
            return Ok(Outcome::exact(
                false,
                format!("({top}) does not map to (3)"),
            ));
        }
    }
    for level in 2..=6 {
        for a in CellAddress::all(level).filter(|a| a.is_arc()) {
            if address_dynamics(&a)?.kind() != CellKind::Arc {
                return Ok(Outcome::exact(false, format!("{a} maps to a loop")));
            }
        }
    }
    Ok(Outcome::exact(true, "levels 2..=6; (1),(2) ↦ (3)"))
}

fn vertex_id_stability() -> Result<Outcome> {
    for n in 0..8 {
        let (a, b) = (Filtration::build(n)?, Filtration::build(n + 1)?);
        for level in 1..=n + 1 {
            for (x, y) in a.cells(level).iter().zip(b.cells(level)) {
                if x.boundary != y.boundary || (level <= n && x.split != y.split) {
                    return Ok(Outcome::exact(
                        false,
                        format!("{} between n = {n} and {}", x.address, n + 1),
                    ));
                }
            }
        }
    }
    Ok(Outcome::exact(true, "n ≤ 8"))
}

fn graphdir_traces() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut g = graphdir::generate(1)?;
    for _ in 1..=8 {
        let next = graphdir::substitute(&g);
        let keep: Vec<usize> = (0..g.vertex_count).collect();
        worst = worst.max(schur(&next.laplacian(), &keep)?.max_abs_diff(&g.laplacian()));
        g = next;
    }
    Ok(Outcome::bound(worst, 1e-9, "max entry difference"))
}

fn graphdir_resistance_scaling() -> Result<Outcome> {
    let g = graphdir::generate(12)?;
    let r1 = g.r1;
    let exact = g
        .edges
        .iter()
        .filter(|e| e.label == Label::A)
        .all(|e| e.resistance == Some(r1 * 2f64.powf((1.0 - e.generation as f64) / 2.0)));
    let halving =
        (1..10).all(|k| (a_resistance(r1, k) / a_resistance(r1, k + 2) - 2.0).abs() < 1e-14);
    Ok(Outcome::exact(exact && halving, "A-edges of G′_12"))
}

fn graphdir_mass() -> Result<Outcome> {
    let mut g = graphdir::seed_graph();
    for n in 0..=16 {
        if g.total_mass() != Ratio::from_integer(1) {
            return Ok(Outcome::exact(
                false,
                format!("Σ mass = {} at n = {n}", g.total_mass()),
            ));
        }
        g = graphdir::substitute(&g);
    }
    Ok(Outcome::exact(true, "exact for n ≤ 16"))
}

fn graphdir_doubling() -> Result<Outcome> {
    let mut g = graphdir::generate(1)?;
    for n in 1..=16 {
        let next = graphdir::substitute(&g);
        if next.vertex_count != 2 * g.vertex_count {
            return Ok(Outcome::exact(false, format!("n = {n}")));
        }
        g = next;
    }
    Ok(Outcome::exact(true, "1 ≤ n ≤ 16"))
}

fn test_matrices() -> Result<Vec<SymMatrix>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut out: Vec<SymMatrix> = [5, 40, 120]
        .iter()
        .map(|&n| SymMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0)))
        .collect();
    out.push(walk_matrix(3, &quarter()?)?.symmetrized());
    out.push(crate::forms::laplacian(&ResistanceScheme::conformal(), 3)?);
    Ok(out)
}

fn orthonormality() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for m in test_matrices()? {
        let n = m.order();
        let eig = sym_eig(&m)?;
        let vs: Vec<&[f64]> = eig.vectors().collect();
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = vs[i].iter().zip(vs[j]).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs() / (1e-10 * n as f64));
            }
        }
    }
    Ok(Outcome::bound(worst, 1.0, "‖VᵀV − I‖ / (1e−10·n)"))
}

fn trace_preservation() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for m in test_matrices()? {
        let sum: f64 = sym_eigvals(&m)?.iter().sum();
        let scale = 1e-9 * m.order() as f64 * m.max_abs().max(f64::MIN_POSITIVE);
        worst = worst.max((sum - m.trace()).abs() / scale);
    }
    Ok(Outcome::bound(worst, 1.0, "|Σλ − tr| / (1e−9·n·‖M‖)"))
}

fn schur_transitivity() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for scheme in [ResistanceScheme::Dyadic, ResistanceScheme::conformal()] {
        let l = crate::forms::laplacian(&scheme, 4)?;
        let mid: Vec<usize> = (0..cells::vertex_count(3)).collect();
        let low: Vec<usize> = (0..cells::vertex_count(2)).collect();
        let stepwise = schur(&schur(&l, &mid)?, &low)?;
        worst = worst.max(stepwise.max_abs_diff(&schur(&l, &low)?));
    }
    Ok(Outcome::bound(worst, 1e-9, "max entry difference"))
}

fn metric_comparison() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut failures = 0;
    for scheme in [ResistanceScheme::Dyadic, ResistanceScheme::conformal()] {
        let net = Network::new(scheme, 6)?;
        let solver = net.resistance_solver()?;
        let n = net.vertex_count();
        for _ in 0..200 {
            let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let r = solver.resistance(x, y);
            let s = net.local_metric(x, y)?;
            if !(0.5 * s <= r + 1e-12 && r <= s + 1e-9) {
                failures += 1;
            }
        }
    }
    Ok(Outcome::exact(
        failures == 0,
        format!("{failures} of 400 pairs violate ½S ≤ R ≤ S"),
    ))
}

fn resistance_trace_consistency() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for scheme in [ResistanceScheme::Dyadic, ResistanceScheme::conformal()] {
        let coarse = Network::new(scheme.clone(), 3)?.resistance_solver()?;
        let fine = Network::new(scheme, 4)?.resistance_solver()?;
        let n = cells::vertex_count(3);
        for x in 0..n {
            for y in x + 1..n {
                worst = worst.max((coarse.resistance(x, y) - fine.resistance(x, y)).abs());
            }
        }
    }
    Ok(Outcome::bound(worst, 1e-9, "max |R_3 − R_4| on V_3"))
}

fn harmonic_minimality() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (m, n) = (1, 4);
    let mut violations = 0;
    for scheme in [ResistanceScheme::Dyadic, ResistanceScheme::conformal()] {
        let net = Network::new(scheme, n)?;
        let boundary: Vec<f64> = (0..cells::vertex_count(m))
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let h = net.harmonic_extension(&boundary, m)?;
        let eh = net.energy(&h)?;
        for _ in 0..50 {
            let mut g = h.clone();
            for x in g.iter_mut().skip(boundary.len()) {
                *x += rng.gen_range(-0.2..0.2);
            }
            if net.energy(&g)? < eh - 1e-12 {
                violations += 1;
            }
        }
    }
    Ok(Outcome::exact(
        violations == 0,
        format!("{violations} of 100 perturbations lower the energy"),
    ))
}

/// `E(f, g) = Σ_(x ∈ V_m) g(x)·∂f(x)` for `f` harmonic off `V_m`.
fn gauss_green() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst = 0.0f64;
    for scheme in [ResistanceScheme::Dyadic, ResistanceScheme::conformal()] {
        let net = Network::new(scheme, 5)?;
        for m in 0..=2 {
            let k = cells::vertex_count(m);
            let boundary: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let f = net.harmonic_extension(&boundary, m)?;
            let g: Vec<f64> = (0..net.vertex_count())
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            let lhs = net.energy_pair(&f, &g)?;
            let mut rhs = 0.0;
            for x in 0..k {
                rhs += g[x] * net.normal_derivative(&f, x)?;
            }
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(Outcome::bound(worst, 1e-9, "max residual"))
}

fn nu_geodesics() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let mut worst = 0.0f64;
    for scheme in [ResistanceScheme::Dyadic, ResistanceScheme::conformal()] {
        let net = Network::new(scheme, 5)?;
        for _ in 0..30 {
            let (x, y) = (
                rng.gen_range(0..net.vertex_count()),
                rng.gen_range(0..net.vertex_count()),
            );
            let (s, path) = net.geodesic(x, y)?;
            let mut nu = 0.0;
            for k in path {
                nu += nu_spine(net.scheme(), &net.graph().arcs[k].address)?;
            }
            worst = worst.max((s - nu).abs());
        }
    }
    Ok(Outcome::bound(worst, 1e-9, "max |S − ν-length|"))
}

fn oracle_equivalence() -> Result<Outcome> {
    let params = quarter()?;
    let mut worst = 0.0f64;
    for n in 1..=5 {
        let formula = graph_spectrum(n, &params)?.sorted_values();
        let oracle = walk_matrix(n, &params)?.eigenvalues()?;
        if formula.len() != oracle.len() {
            return Ok(Outcome::exact(false, format!("sizes differ at n = {n}")));
        }
        worst = worst.max(max_diff(&formula, &oracle));
    }
    Ok(Outcome::bound(worst, 1e-8, "max sorted difference, n ≤ 5"))
}

fn multiplicity_conservation() -> Result<Outcome> {
    for (p, q) in [
        (0.25, 0.25),
        (0.25, 0.5),
        (0.2, 0.7),
        (0.4, 0.3),
        (0.1, 0.9),
    ] {
        let params = DecimationParams::new(p, q)?;
        for n in 0..=10 {
            let total = graph_spectrum(n, &params)?.total_multiplicity();
            if total != cells::vertex_count(n) {
                return Ok(Outcome::exact(
                    false,
                    format!("p = {p}, q = {q}, n = {n}: {total}"),
                ));
            }
        }
    }
    Ok(Outcome::exact(true, "Σ mult = 2·3^n for n ≤ 10"))
}

fn spectral_similarity() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let params = quarter()?;
    let p = params.p();
    let mut worst = 0.0f64;
    for n in 1..=4 {
        let mn = walk_matrix(n, &params)?;
        let prev = walk_matrix(n - 1, &params)?;
        let k = prev.order();
        let mut tried = 0;
        while tried < 20 {
            let z: f64 = rng.gen_range(-0.5..2.0);
            // D is 2p on its diagonal with off-diagonal entries only between new vertices.
            let s = match mn.schur_complement(z) {
                Ok(s) if (z - 2.0 * p).abs() > 1e-3 => s,
                _ => continue,
            };
            tried += 1;
            for i in 0..k {
                for j in 0..k {
                    let delta = if i == j { rmap(z, p) } else { 0.0 };
                    let rhs = phi(z, p) * (prev.get(i, j) - delta);
                    worst = worst.max((s[i * k + j] - rhs).abs());
                }
            }
        }
    }
    Ok(Outcome::bound(
        worst,
        1e-8,
        "max |S_n(z) − φ(z)(M_(n−1) − R(z))|",
    ))
}

fn eigenspace_mapping() -> Result<Outcome> {
    let params = quarter()?;
    let p = params.p();
    let mut worst = 0.0f64;
    let mut rank_failures = 0;
    for n in 1..=4 {
        let f = Filtration::build(n)?;
        let prev = walk_matrix(n - 1, &params)?;
        let mn = walk_matrix_on(&f, &params);
        let eig = sym_eig(&prev.symmetrized())?;
        let root: Vec<f64> = prev.stationary().iter().map(|x| x.sqrt()).collect();
        let mut values = eig.values.clone();
        values.dedup_by(|a, b| (*a - *b).abs() < 1e-8);
        for y in values {
            let coarse: Vec<Vec<f64>> = (0..eig.order())
                .filter(|&j| (eig.values[j] - y).abs() < 1e-8)
                .map(|j| {
                    eig.vector(j)
                        .iter()
                        .zip(&root)
                        .map(|(u, r)| u / r)
                        .collect()
                })
                .collect();
            let Ok(roots) = preimages(y, p) else { continue };
            for z in roots {
                if (z - 2.0 * p).abs() < 1e-6 {
                    continue;
                }
                let lifted: Vec<Vec<f64>> = coarse
                    .iter()
                    .map(|v| extend_eigenvector(&f, n, v, z, p))
                    .collect::<Result<_>>()?;
                for v in &lifted {
                    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    worst = worst.max(mn.residual(v, z) / norm);
                }
                let gram = SymMatrix::from_fn(lifted.len(), |a, b| {
                    lifted[a].iter().zip(&lifted[b]).map(|(x, y)| x * y).sum()
                });
                let ev = sym_eigvals(&gram)?;
                let top = ev.last().copied().unwrap_or(0.0);
                if ev.first().copied().unwrap_or(0.0) <= 1e-10 * top {
                    rank_failures += 1;
                }
            }
        }
    }
    Ok(Outcome::exact(
        worst < 1e-8 && rank_failures == 0,
        format!("residual {worst:.3e}, {rank_failures} rank deficiencies"),
    ))
}

/// A basis vector born at level `m + 1`, restricted to an `m`-cell and carried
/// to the matching top cell of `G_(n−m+1)`, satisfies the eigen equation at
/// every interior vertex.
fn eigenfunction_scaling() -> Result<Outcome> {
    let params = quarter()?;
    let n = 3;
    let mut worst = 0.0f64;
    let f = Filtration::build(n)?;
    let spectrum = graph_spectrum(n, &params)?;
    for m in 1..=2 {
        let reference = Filtration::build(n - m + 1)?;
        let walk = walk_matrix_on(&reference, &params);
        for atom in spectrum
            .atoms
            .iter()
            .filter(|a| a.birth == Birth::Exceptional { m: n - m - 1 })
        {
            let basis = eigenfunction(atom, n, &params)?;
            for addr in CellAddress::all(m) {
                let pairs = f.cell_isomorphism(&addr, &reference)?;
                let boundary = f
                    .cell(&addr)
                    .expect("cell present")
                    .boundary
                    .vertices()
                    .len();
                for v in &basis {
                    let mut g = vec![0.0; reference.vertex_count()];
                    for &(s, r) in &pairs {
                        g[r] = v[s];
                    }
                    let mg = walk.apply(&g);
                    for &(_, r) in &pairs[boundary..] {
                        worst = worst.max((mg[r] - atom.value * g[r]).abs());
                    }
                }
            }
        }
    }
    Ok(Outcome::bound(worst, 1e-8, "max interior residual"))
}

fn functional_equation() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for i in 0..20 {
        let x = 1.5 * i as f64 / 19.0;
        worst = worst.max((big_psi(psi(x)?)? - big_psi(x)? / 6.0).abs());
    }
    Ok(Outcome::bound(worst, 1e-10, "max |Ψ(ψ(x)) − Ψ(x)/6|"))
}

fn dirichlet_consistency() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for atom in dirichlet_spectrum(3)? {
        worst = worst.max(dirichlet_boundary_defect(&atom)?);
    }
    Ok(Outcome::bound(worst, 1e-10, "max |u| on V_0"))
}

fn mass_lumping() -> Result<Outcome> {
    let mut g = graphdir::seed_graph();
    for n in 0..=14 {
        let total: Ratio<i64> = g.lumped_masses().into_iter().sum();
        if total != Ratio::from_integer(1) {
            return Ok(Outcome::exact(
                false,
                format!("Σ vertex mass = {total} at n = {n}"),
            ));
        }
        g = graphdir::substitute(&g);
    }
    Ok(Outcome::exact(true, "exact for n ≤ 14"))
}

/// Dyadic resistance Laplacian on `G_n` equals `4·2^(n+1)` times the simple walk Laplacian.
fn renormalization_constant() -> Result<Outcome> {
    for n in 0..=4 {
        let l = crate::forms::laplacian(&ResistanceScheme::Dyadic, n)?;
        let walk = walk_matrix(n, &DecimationParams::simple())?;
        let c = 4.0 * 2f64.powi(n as i32 + 1);
        for i in 0..l.order() {
            for j in 0..l.order() {
                if l.get(i, j) != c * walk.get(i, j) {
                    return Ok(Outcome::exact(
                        false,
                        format!("entry ({i}, {j}) at n = {n}"),
                    ));
                }
            }
        }
    }
    Ok(Outcome::exact(true, "exact for n ≤ 4"))
}

fn dynamical_consistency() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut prev = backward_orbit(0)?;
    for n in 1..=14 {
        let cur = backward_orbit(n)?;
        for (i, z) in cur.iter().enumerate() {
            worst = worst.max((p_map(*z) - prev[i / 2]).norm());
        }
        prev = cur;
    }
    Ok(Outcome::bound(worst, 1e-12, "max |P(z) − parent|"))
}

fn counting_oracle() -> Result<Outcome> {
    let f = left_piece_fraction(14)?;
    let rel = (f - 1.0 / 3.0).abs() * 3.0;
    Ok(Outcome::bound(
        rel,
        0.02,
        "relative error of μ_P(J_L) estimate",
    ))
}

fn orbit_symmetry() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for n in 1..=10 {
        let points = backward_orbit(n)?;
        let nearest = |w: num_complex::Complex64| {
            points
                .iter()
                .map(|z| (z - w).norm())
                .fold(f64::INFINITY, f64::min)
        };
        for z in points.iter().take(256) {
            worst = worst.max(nearest(-z)).max(nearest(z.conj()));
        }
    }
    Ok(Outcome::bound(
        worst,
        1e-10,
        "max distance to mirrored point",
    ))
}
