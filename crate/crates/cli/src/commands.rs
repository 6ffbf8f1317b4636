use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use basilica_core::cells::Filtration;
use basilica_core::decimation::{self, parse_lineage, Birth, Seed};
use basilica_core::forms::{self, format_float, Network};
use basilica_core::{checks, geometry, graphdir, spectra, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{ConfigError, Format, RunConfig};
use crate::{BirthArg, Command, DimensionMode, GraphMode, OriginArg, SpectrumMode};

/// Levels up to which `resistance` lists every vertex pair.
const ALL_PAIRS_MAX_LEVEL: usize = 4;
const DEFAULT_SAMPLED_PAIRS: usize = 256;
pub const WORKERS_ENV: &str = "BASILICA_WORKERS";

pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<ConfigError>().is_some() {
        return 1;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Capacity { .. }) => 2,
        Some(Error::Singular { .. } | Error::NotConverged { .. }) => 3,
        _ => 1,
    }
}

pub fn run(command: &Command, cfg: &RunConfig) -> anyhow::Result<ExitCode> {
    let artifact = match command {
        Command::Graph { mode } => graph(*mode, cfg)?,
        Command::Spectrum { mode, neumann } => spectrum(*mode, *neumann, cfg)?,
        Command::Eigenfunction {
            index,
            birth,
            lineage,
            origin,
            component,
        } => eigenfunction(*index, *birth, lineage.as_deref(), *origin, *component, cfg)?,
        Command::Resistance { pairs } => resistance(*pairs, cfg)?,
        Command::Measure => {
            only(cfg, Format::Csv, "measure")?;
            forms::measure_csv(cfg.level(3), cfg.measure(), &cfg.scheme()?)?
        }
        Command::Dimension { mode } => dimension(*mode, cfg)?,
        Command::Julia => {
            only(cfg, Format::Csv, "julia")?;
            geometry::scatter_csv(&geometry::backward_orbit(cfg.level(10))?)?
        }
        Command::Check => {
            let (text, passed) = check(cfg)?;
            emit(cfg, &text)?;
            return Ok(if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            });
        }
    };
    emit(cfg, &artifact)?;
    Ok(ExitCode::SUCCESS)
}

fn emit(cfg: &RunConfig, text: &str) -> anyhow::Result<()> {
    let mut text = text.to_owned();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cfg.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| ConfigError {
                field: "output",
                message: format!("{}: {e}", path.display()),
            })
            .map_err(Into::into),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn only(cfg: &RunConfig, format: Format, command: &str) -> Result<(), ConfigError> {
    if cfg.format(format) != format {
        return Err(ConfigError {
            field: "format",
            message: format!("`{command}` only writes {format:?}").to_lowercase(),
        });
    }
    Ok(())
}

fn to_json(value: &impl Serialize) -> anyhow::Result<String> {
    serde_json::to_string_pretty(value).context("serializing output")
}

fn graph(mode: GraphMode, cfg: &RunConfig) -> anyhow::Result<String> {
    let n = cfg.level(2);
    Ok(match (mode, cfg.format(Format::Json)) {
        (GraphMode::Cells, Format::Json) => to_json(&Filtration::build(n)?.graph().document())?,
        (GraphMode::Cells, Format::Csv) => geometry::layout_cells(n)?.to_csv()?,
        (GraphMode::GraphDirected, Format::Json) => graphdir::generate(n)?.to_json()?,
        (GraphMode::GraphDirected, Format::Csv) => geometry::layout_graph_directed(n)?.to_csv()?,
    })
}

fn spectrum(mode: SpectrumMode, neumann: bool, cfg: &RunConfig) -> anyhow::Result<String> {
    let n = cfg.level(3);
    let format = cfg.format(Format::Json);
    if neumann && mode != SpectrumMode::Fractal {
        return Err(ConfigError {
            field: "neumann",
            message: "only applies to the fractal spectrum".into(),
        }
        .into());
    }
    match mode {
        SpectrumMode::Decimation => {
            let s = decimation::graph_spectrum(n, &cfg.params()?)?;
            match format {
                Format::Json => Ok(s.to_json()?),
                Format::Csv => {
                    let values: Vec<(f64, u64)> = s
                        .atoms
                        .iter()
                        .map(|a| (a.value, a.multiplicity as u64))
                        .collect();
                    Ok(spectra::counting_csv(&values)?)
                }
            }
        }
        SpectrumMode::GraphDirected => {
            let eigs = spectra::graphdirected_spectrum(n)?;
            match format {
                Format::Json => to_json(&json!({ "level": n, "eigenvalues": eigs })),
                Format::Csv => {
                    let values: Vec<(f64, u64)> = eigs.iter().map(|&l| (l, 1)).collect();
                    Ok(spectra::counting_csv(&values)?)
                }
            }
        }
        SpectrumMode::Fractal => {
            let mut atoms = spectra::dirichlet_spectrum(n)?;
            if neumann {
                atoms.extend(spectra::neumann_candidates(n, cfg.q.unwrap_or(0.5))?);
                atoms.sort_by(|a, b| a.lambda.abs().total_cmp(&b.lambda.abs()));
            }
            match format {
                Format::Json => Ok(spectra::fractal_json(&atoms)?),
                Format::Csv => Ok(spectra::counting_csv(&spectra::fractal_counting(&atoms))?),
            }
        }
    }
}

fn eigenfunction(
    index: Option<usize>,
    birth: Option<BirthArg>,
    lineage: Option<&str>,
    origin: Option<OriginArg>,
    component: usize,
    cfg: &RunConfig,
) -> anyhow::Result<String> {
    let n = cfg.level(3);
    let params = cfg.params()?;
    let spectrum = decimation::graph_spectrum(n, &params)?;
    let atom = match (index, birth, lineage) {
        (Some(i), _, _) => spectrum.atoms.get(i).ok_or_else(|| ConfigError {
            field: "index",
            message: format!(
                "{i} is past the {} atoms of level {n}",
                spectrum.atoms.len()
            ),
        })?,
        (None, Some(birth), Some(word)) => {
            let word = parse_lineage(word).map_err(|e| ConfigError {
                field: "lineage",
                message: e.to_string(),
            })?;
            let matches: Vec<_> = spectrum
                .atoms
                .iter()
                .filter(|a| a.lineage == word)
                .filter(|a| match (a.birth, birth) {
                    (Birth::Exceptional { .. }, BirthArg::Exceptional) => true,
                    (Birth::Initial { seed }, BirthArg::Initial) => match origin {
                        None => true,
                        Some(OriginArg::Zero) => seed == Seed::Zero,
                        Some(OriginArg::TwoQ) => seed == Seed::TwoQ,
                    },
                    _ => false,
                })
                .collect();
            match matches.as_slice() {
                [atom] => *atom,
                [] => bail!(ConfigError {
                    field: "lineage",
                    message: "no atom of this level has that birth and lineage".into(),
                }),
                _ => bail!(ConfigError {
                    field: "origin",
                    message: "several atoms match; choose the seed with --origin".into(),
                }),
            }
        }
        _ => bail!(ConfigError {
            field: "index",
            message: "select an atom with --index or with --birth and --lineage".into(),
        }),
    };
    let basis = decimation::eigenfunction(atom, n, &params)?;
    let values = basis.get(component).ok_or_else(|| ConfigError {
        field: "component",
        message: format!("eigenspace has dimension {}", basis.len()),
    })?;
    match cfg.format(Format::Csv) {
        Format::Csv => Ok(decimation::eigenfunction_csv(values)?),
        Format::Json => to_json(&json!({
            "level": n,
            "z": atom.value,
            "multiplicity": atom.multiplicity,
            "birth": atom.birth_name(),
            "lineage": decimation::lineage_string(&atom.lineage),
            "values": values,
        })),
    }
}

#[derive(Debug, Serialize)]
struct PairRow {
    x: usize,
    y: usize,
    #[serde(rename = "R")]
    r: f64,
    #[serde(rename = "S")]
    s: f64,
}

/// Pair `(x, y)` with `x < y` at position `t` of the row-major upper triangle.
fn pair_at(mut t: usize, n: usize) -> (usize, usize) {
    for x in 0..n {
        let row = n - 1 - x;
        if t < row {
            return (x, x + 1 + t);
        }
        t -= row;
    }
    unreachable!("pair index out of range")
}

fn resistance(pairs: Option<usize>, cfg: &RunConfig) -> anyhow::Result<String> {
    let n = cfg.level(2);
    let network = Network::new(cfg.scheme()?, n)?;
    let v = network.vertex_count();
    let total = v * (v - 1) / 2;
    let selected: Vec<(usize, usize)> = match pairs {
        None if n <= ALL_PAIRS_MAX_LEVEL => (0..total).map(|t| pair_at(t, v)).collect(),
        requested => {
            let k = requested.unwrap_or(DEFAULT_SAMPLED_PAIRS).min(total);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
            let mut idx = rand::seq::index::sample(&mut rng, total, k).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|t| pair_at(t, v)).collect()
        }
    };
    let solver = network.resistance_solver()?;
    let rows: Vec<PairRow> = selected
        .par_iter()
        .map(|&(x, y)| {
            Ok(PairRow {
                x,
                y,
                r: solver.resistance(x, y),
                s: network.local_metric(x, y)?,
            })
        })
        .collect::<Result<_, Error>>()?;
    match cfg.format(Format::Csv) {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut out = String::from("x,y,R,S\n");
            for row in &rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    row.x,
                    row.y,
                    format_float(row.r),
                    format_float(row.s)
                ));
            }
            Ok(out)
        }
    }
}

fn dimension(mode: DimensionMode, cfg: &RunConfig) -> anyhow::Result<String> {
    only(cfg, Format::Json, "dimension")?;
    let doc = match mode {
        DimensionMode::SelfSimilar => {
            let n = cfg.level(6);
            let report = spectra::self_similar_weyl(n, &cfg.params()?)?;
            let ds = spectra::self_similar_ds();
            json!({
                "mode": "self-similar",
                "level": n,
                "fit": report.fit,
                "expected_slope": report.expected,
                "s": ds / 2.0,
                "d_s": ds,
            })
        }
        DimensionMode::GraphDirected => {
            let n = cfg.level(spectra::MAX_GRAPH_DIRECTED_LEVEL);
            let report = spectra::graph_directed_weyl(n)?;
            let (s, ds) = spectra::symbolic_ds();
            json!({
                "mode": "graph-directed",
                "level": n,
                "fit": report.fit,
                "expected_slope": report.expected,
                "s": s.to_string(),
                "d_s": ds.to_string(),
            })
        }
    };
    to_json(&doc)
}

fn workers() -> anyhow::Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => Err(anyhow!(ConfigError {
                field: WORKERS_ENV,
                message: format!("`{v}` is not a positive integer"),
            })),
        },
        Err(_) => Ok(None),
    }
}

/// Runs the registry on a worker pool; results keep registry order.
fn check(cfg: &RunConfig) -> anyhow::Result<(String, bool)> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = workers()? {
        builder = builder.num_threads(k);
    }
    let pool = builder.build().context("starting worker pool")?;
    let registry = checks::registry();
    let results: Vec<checks::CheckResult> =
        pool.install(|| registry.par_iter().map(|inv| inv.run()).collect());
    let passed = results.iter().all(|r| r.passed);
    let text = match cfg.format(Format::Csv) {
        Format::Json => to_json(&results)?,
        Format::Csv => {
            let mut out = String::new();
            for r in &results {
                let verdict = if r.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!(
                    "{verdict} {}/{}  {}\n",
                    r.module, r.name, r.detail
                ));
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            out.push_str(&format!("{} checks, {failed} failed\n", results.len()));
            out
        }
    };
    Ok((text, passed))
}
