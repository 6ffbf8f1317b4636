//! Fractal spectra and spectral dimensions.
//!
//! With `p = 1/4` the decimation map is `R(z) = 6z − 4z²`, whose contracting
//! inverse branch `ψ(x) = (3 − √(9 − 4x))/4` fixes 0 with `ψ′(0) = 1/6`. The
//! linearizer `Ψ = lim 6^k·ψ^k` turns graph eigenvalues into eigenvalues of the
//! Dirichlet Laplacian on the Julia set.

use num_rational::Ratio;
use serde::Serialize;

use crate::decimation::{
    eigenfunction, graph_spectrum, lineage_string, Birth, Branch, DecimationParams, SpectrumAtom,
};
use crate::error::{Error, Result};
use crate::forms::{csv_error, finish_csv, format_float};
use crate::graphdir;
use crate::numerics::gen_eigvals;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 60;
/// Largest `G′_n` handed to the dense solver (2048 vertices).
pub const MAX_GRAPH_DIRECTED_LEVEL: usize = 11;
/// Deepest `n₀` enumerated.
pub const MAX_FRACTAL_LEVEL: usize = 16;
/// Eigenvalues, counted with multiplicity, required inside a fit window.
pub const MIN_FIT_ATOMS: u64 = 30;
/// Fractal eigenvalue `λ = FRACTAL_SCALE·6^(n₀)·Ψ(w)`.
pub const FRACTAL_SCALE: f64 = -8.0;

const P: f64 = 0.25;
const DOMAIN_MAX: f64 = 2.25;

/// `ψ(x) = (3 − √(9 − 4x))/4`, evaluated as `x/(3 + √(9 − 4x))`.
pub fn psi(x: f64) -> Result<f64> {
    check_domain(x)?;
    Ok(x / (3.0 + (9.0 - 4.0 * x).sqrt()))
}

/// The expanding inverse branch `(3 + √(9 − 4x))/4`.
pub fn psi_plus(x: f64) -> Result<f64> {
    check_domain(x)?;
    Ok((3.0 + (9.0 - 4.0 * x).sqrt()) / 4.0)
}

fn check_domain(x: f64) -> Result<()> {
    if (0.0..=DOMAIN_MAX).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain(format!("x = {x} outside [0, 9/4]")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearizerState {
    pub input: f64,
    pub iterations: usize,
    pub value: f64,
    pub converged: bool,
    pub tolerance: f64,
}

/// Iterates `Ψ_k = 6^k·ψ^k(x)` until `|Ψ_(k+1) − Ψ_k| ≤ tol·|Ψ_k|`.
pub fn linearizer_state(x: f64, tol: f64) -> Result<LinearizerState> {
    check_domain(x)?;
    if !(tol > 0.0) {
        return Err(Error::input(format!("tolerance {tol} must be positive")));
    }
    let mut y = x;
    let mut scale = 1.0;
    let mut value = x;
    for k in 1..=MAX_ITERATIONS {
        y = psi(y)?;
        scale *= 6.0;
        let next = scale * y;
        let done = (next - value).abs() <= tol * value.abs();
        value = next;
        if done {
            return Ok(LinearizerState {
                input: x,
                iterations: k,
                value,
                converged: true,
                tolerance: tol,
            });
        }
    }
    Ok(LinearizerState {
        input: x,
        iterations: MAX_ITERATIONS,
        value,
        converged: false,
        tolerance: tol,
    })
}

pub fn linearizer(x: f64, tol: f64) -> Result<f64> {
    let state = linearizer_state(x, tol)?;
    if state.converged {
        Ok(state.value)
    } else {
        Err(Error::NotConverged {
            iterations: state.iterations,
        })
    }
}

/// `Ψ` at the default tolerance.
pub fn big_psi(x: f64) -> Result<f64> {
    linearizer(x, DEFAULT_TOLERANCE)
}

/// `6^k·ψ^k(x)` for a fixed `k`.
pub fn linearizer_iterate(x: f64, k: usize) -> Result<f64> {
    let mut y = x;
    for _ in 0..k {
        y = psi(y)?;
    }
    Ok(6f64.powi(k as i32) * y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FractalKind {
    Dirichlet,
    /// Born from the `{0, 2q}` seeds; completeness is not established for these.
    NeumannCandidate,
}

impl FractalKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FractalKind::Dirichlet => "dirichlet",
            FractalKind::NeumannCandidate => "neumann-candidate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractalAtom {
    pub lambda: f64,
    pub n0: usize,
    pub m: usize,
    /// Branches applied from the seed outwards.
    pub branch: Vec<Branch>,
    pub multiplicity: u64,
    pub kind: FractalKind,
    /// The graph eigenvalue at level `n₀`.
    pub w: f64,
}

impl FractalAtom {
    /// `FRACTAL_SCALE·6^k·ψ^(k−n₀)(w)`, the graph eigenvalues renormalized at level `k`.
    pub fn renormalized_at(&self, k: usize) -> Result<f64> {
        if k < self.n0 {
            return Err(Error::input(format!("level {k} is below n0 = {}", self.n0)));
        }
        Ok(FRACTAL_SCALE * 6f64.powi(self.n0 as i32) * linearizer_iterate(self.w, k - self.n0)?)
    }
}

fn apply_word(start: f64, word: &[Branch]) -> Result<f64> {
    word.iter().try_fold(start, |w, b| match b {
        Branch::Minus => psi(w),
        Branch::Plus => psi_plus(w),
    })
}

fn words(len: usize) -> impl Iterator<Item = Vec<Branch>> {
    (0u64..1 << len).map(move |bits| {
        (0..len)
            .map(|i| {
                if bits >> (len - 1 - i) & 1 == 0 {
                    Branch::Minus
                } else {
                    Branch::Plus
                }
            })
            .collect()
    })
}

fn check_fractal_level(max_n0: usize) -> Result<()> {
    if max_n0 == 0 {
        return Err(Error::input("max_n0 must be at least 1"));
    }
    if max_n0 > MAX_FRACTAL_LEVEL {
        return Err(Error::Capacity {
            what: "fractal spectrum level",
            requested: max_n0,
            limit: MAX_FRACTAL_LEVEL,
        });
    }
    Ok(())
}

fn sort_atoms(atoms: &mut [FractalAtom]) {
    atoms.sort_by(|a, b| {
        a.lambda
            .abs()
            .total_cmp(&b.lambda.abs())
            .then(a.n0.cmp(&b.n0))
            .then(a.m.cmp(&b.m))
            .then(a.branch.cmp(&b.branch))
    });
}

/// All Dirichlet atoms with `n₀ ≤ max_n₀` and `m ≤ n₀ − 1`, sorted by `|λ|`.
pub fn dirichlet_spectrum(max_n0: usize) -> Result<Vec<FractalAtom>> {
    check_fractal_level(max_n0)?;
    let exceptional = 2.0 * P;
    let mut atoms = Vec::new();
    for n0 in 1..=max_n0 {
        for m in 0..n0 {
            let multiplicity = 2 * 3u64.pow((n0 - m - 1) as u32);
            for word in words(m) {
                let w = apply_word(exceptional, &word)?;
                let lambda = FRACTAL_SCALE * 6f64.powi(n0 as i32) * big_psi(w)?;
                atoms.push(FractalAtom {
                    lambda,
                    n0,
                    m,
                    branch: word,
                    multiplicity,
                    kind: FractalKind::Dirichlet,
                    w,
                });
            }
        }
    }
    sort_atoms(&mut atoms);
    Ok(atoms)
}

/// Limits of the initial-seed lineages: `n₀ = m` is the word length, the seed
/// is `0` or `2q`, and each atom is simple. The all-minus word from `0` gives
/// `λ = 0` and is emitted once, at `n₀ = 0`.
pub fn neumann_candidates(max_n0: usize, q: f64) -> Result<Vec<FractalAtom>> {
    check_fractal_level(max_n0)?;
    let seeds = [0.0, 2.0 * q];
    check_domain(seeds[1])?;
    let mut atoms = vec![FractalAtom {
        lambda: 0.0,
        n0: 0,
        m: 0,
        branch: Vec::new(),
        multiplicity: 1,
        kind: FractalKind::NeumannCandidate,
        w: 0.0,
    }];
    for n0 in 1..=max_n0 {
        for (s, &seed) in seeds.iter().enumerate() {
            for word in words(n0) {
                if s == 0 && word.iter().all(|b| *b == Branch::Minus) {
                    continue;
                }
                let w = apply_word(seed, &word)?;
                atoms.push(FractalAtom {
                    lambda: FRACTAL_SCALE * 6f64.powi(n0 as i32) * big_psi(w)?,
                    n0,
                    m: n0,
                    branch: word,
                    multiplicity: 1,
                    kind: FractalKind::NeumannCandidate,
                    w,
                });
            }
        }
    }
    sort_atoms(&mut atoms);
    Ok(atoms)
}

#[derive(Debug, Serialize)]
struct FractalRecord {
    lambda: f64,
    mult: u64,
    n0: usize,
    m: usize,
    branch: String,
    kind: &'static str,
}

pub fn fractal_json(atoms: &[FractalAtom]) -> Result<String> {
    let doc: Vec<FractalRecord> = atoms
        .iter()
        .map(|a| FractalRecord {
            lambda: a.lambda,
            mult: a.multiplicity,
            n0: a.n0,
            m: a.m,
            branch: lineage_string(&a.branch),
            kind: a.kind.as_str(),
        })
        .collect();
    serde_json::to_string_pretty(&doc).map_err(|e| Error::input(format!("json: {e}")))
}

/// Counting function `N(λ)` sampled at each distinct value, as `lambda,N` rows.
pub fn counting_csv(values: &[(f64, u64)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["lambda", "N"]).map_err(csv_error)?;
    for (lambda, n) in counting_function(values) {
        w.write_record([format_float(lambda), n.to_string()])
            .map_err(csv_error)?;
    }
    finish_csv(w)
}

/// `(|λ|, N(|λ|))` at every distinct `|λ|`, ascending.
pub fn counting_function(values: &[(f64, u64)]) -> Vec<(f64, u64)> {
    let mut sorted: Vec<(f64, u64)> = values.iter().map(|&(l, m)| (l.abs(), m)).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, u64)> = Vec::new();
    let mut total = 0;
    for (l, m) in sorted {
        total += m;
        match out.last_mut() {
            Some(last) if last.0 == l => last.1 = total,
            _ => out.push((l, total)),
        }
    }
    out
}

pub fn fractal_counting(atoms: &[FractalAtom]) -> Vec<(f64, u64)> {
    atoms.iter().map(|a| (a.lambda, a.multiplicity)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylFit {
    pub slope: f64,
    pub intercept: f64,
    pub samples: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

/// Least-squares slope of `log N` against `log λ` with one sample per
/// eigenvalue in `[λ_min, λ_max]`: the `i`-th smallest `|λ|`, counted with
/// multiplicity, contributes `(log |λ_i|, log i)`. Ranks include the values
/// below the window.
pub fn weyl_fit(values: &[(f64, u64)], lambda_min: f64, lambda_max: f64) -> Result<WeylFit> {
    if !(lambda_min > 0.0 && lambda_max > lambda_min) {
        return Err(Error::input(format!(
            "fit window [{lambda_min}, {lambda_max}] must be positive and nonempty"
        )));
    }
    let in_range: u64 = values
        .iter()
        .filter(|(l, _)| (lambda_min..=lambda_max).contains(&l.abs()))
        .map(|(_, m)| m)
        .sum();
    if in_range < MIN_FIT_ATOMS {
        return Err(Error::domain(format!(
            "{in_range} values in [{lambda_min}, {lambda_max}], need {MIN_FIT_ATOMS}"
        )));
    }
    let (mut k, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut distinct = 0;
    let mut below = 0u64;
    for (l, total) in counting_function(values) {
        if (lambda_min..=lambda_max).contains(&l) {
            let x = l.ln();
            distinct += 1;
            for rank in below + 1..=total {
                let y = (rank as f64).ln();
                k += 1.0;
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
            }
        }
        below = total;
    }
    let var = sxx - sx * sx / k;
    if distinct < 2 || var <= 0.0 {
        return Err(Error::domain("fit window holds a single distinct value"));
    }
    let slope = (sxy - sx * sy / k) / var;
    Ok(WeylFit {
        slope,
        intercept: (sy - slope * sx) / k,
        samples: k as usize,
        lambda_min,
        lambda_max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylReport {
    pub fit: WeylFit,
    /// `d_s/2` predicted for this case.
    pub expected: f64,
}

/// Window for the renormalized self-similar spectrum.
pub const SELF_SIMILAR_WINDOW: (f64, f64) = (1.0, 1296.0);

/// Weyl slope of the decimation spectrum of level `n` multiplied by `6^n`.
pub fn self_similar_weyl(n: usize, params: &DecimationParams) -> Result<WeylReport> {
    let spectrum = graph_spectrum(n, params)?;
    let scale = 6f64.powi(n as i32);
    let values: Vec<(f64, u64)> = spectrum
        .atoms
        .iter()
        .map(|a| (a.value * scale, a.multiplicity as u64))
        .collect();
    let (lo, hi) = SELF_SIMILAR_WINDOW;
    Ok(WeylReport {
        fit: weyl_fit(&values, lo, hi)?,
        expected: self_similar_ds() / 2.0,
    })
}

/// Eigenvalues of `L u = λ M u` on `G′_n`, ascending.
pub fn graphdirected_spectrum(n: usize) -> Result<Vec<f64>> {
    if n > MAX_GRAPH_DIRECTED_LEVEL {
        return Err(Error::Capacity {
            what: "graph-directed spectrum level",
            requested: n,
            limit: MAX_GRAPH_DIRECTED_LEVEL,
        });
    }
    let g = graphdir::generate(n)?;
    let masses: Vec<f64> = g
        .lumped_masses()
        .iter()
        .map(|m| *m.numer() as f64 / *m.denom() as f64)
        .collect();
    gen_eigvals(&g.laplacian(), &masses)
}

/// `[20, 20·(2√2)^7]`, above the lowest modes and below the lattice cutoff of `G′_11`.
pub fn graph_directed_window() -> (f64, f64) {
    (20.0, 20.0 * (2.0 * 2f64.sqrt()).powi(7))
}

pub fn graph_directed_weyl(n: usize) -> Result<WeylReport> {
    let eigs = graphdirected_spectrum(n)?;
    let values: Vec<(f64, u64)> = eigs.iter().map(|&l| (l, 1)).collect();
    let (lo, hi) = graph_directed_window();
    let (s, _) = symbolic_ds();
    Ok(WeylReport {
        fit: weyl_fit(&values, lo, hi)?,
        expected: *s.numer() as f64 / *s.denom() as f64,
    })
}

/// `λ_j(G′_(n+1)) / λ_j(G′_n)` for `j` in `js` (1-based, so `j = 1` is the zero mode).
pub fn eigenvalue_ratios(n: usize, js: &[usize]) -> Result<Vec<f64>> {
    let lower = graphdirected_spectrum(n)?;
    let upper = graphdirected_spectrum(n + 1)?;
    js.iter()
        .map(|&j| {
            if j == 0 || j > lower.len() {
                return Err(Error::input(format!("eigenvalue index {j} out of range")));
            }
            Ok(upper[j - 1] / lower[j - 1])
        })
        .collect()
}

/// `(s, d_s)` for the graph-directed case from base-2 exponents: the counting
/// radius is `2^1` and the eigenvalue scaling is mass `2^1` times resistance `2^(1/2)`.
pub fn symbolic_ds() -> (Ratio<i64>, Ratio<i64>) {
    let rho = graphdir::counting_matrix().spectral_radius;
    let rho_exp = Ratio::from_integer(rho.trailing_zeros() as i64);
    assert_eq!(
        1i64 << *rho_exp.numer(),
        rho,
        "counting radius must be a power of two"
    );
    let scaling_exp = Ratio::from_integer(1) + Ratio::new(1, 2);
    let s = rho_exp / scaling_exp;
    (s, s * 2)
}

/// `d_s = 2·log(ρ)/log(mass·resistance)`.
pub fn spectral_dimension(counting_radius: f64, mass_scaling: f64, resistance_scaling: f64) -> f64 {
    2.0 * counting_radius.ln() / (mass_scaling * resistance_scaling).ln()
}

/// Three cells per step, masses `1/3`, resistances `1/2`.
pub fn self_similar_ds() -> f64 {
    spectral_dimension(3.0, 3.0, 2.0)
}

/// Max `|u|` on `V_0` over the eigenfunctions of the level-`n₀` decimation atom
/// behind a Dirichlet atom, after checking that its lineage matches `w`.
pub fn dirichlet_boundary_defect(atom: &FractalAtom) -> Result<f64> {
    if atom.kind != FractalKind::Dirichlet {
        return Err(Error::input(
            "only Dirichlet atoms have a decimation counterpart",
        ));
    }
    let params = DecimationParams::new(P, P)?;
    let graph_atom = SpectrumAtom {
        value: atom.w,
        multiplicity: atom.multiplicity as usize,
        birth: Birth::Exceptional { m: atom.m },
        lineage: atom.branch.clone(),
    };
    let trajectory = graph_atom.trajectory(&params)?;
    let last = *trajectory.last().expect("nonempty");
    if (last - atom.w).abs() > 1e-12 {
        return Err(Error::domain(format!(
            "lineage ends at {last}, atom records {}",
            atom.w
        )));
    }
    let basis = eigenfunction(&graph_atom, atom.n0, &params)?;
    Ok(basis
        .iter()
        .flat_map(|v| v[..2].iter().map(|x| x.abs()))
        .fold(0.0, f64::max))
}
