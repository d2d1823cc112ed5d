use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use srres_core::exactla::Matrix;
use srres_core::formats::{parse_complex, ReportFile};
use srres_core::mvss::{self, AugmentedCech, MvDecider};
use srres_core::torus::{self, CombinatorialDecider, SubtorusSpec};
use srres_core::transfer::{self, DgModuleFile, RetractionChoice};
use srres_core::{oracle, resolution, with_field, Field, FieldSpec, MomentAngle, SimplicialComplex, VertexSet};

#[derive(Parser)]
#[command(name = "srres", version, about = "Resolutions, higher operations and equivariant formality for Stanley-Reisner rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Complex file: {"m": .., "facets": [[..]]} or {"m": .., "nonfaces": [[..]]}
    file: PathBuf,
    /// Coefficient field: q or f<p>
    #[arg(long, default_value = "q")]
    field: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Multigraded Betti numbers.
    Betti(Common),
    /// The minimal free resolution.
    Resolution {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Nonzero blocks of the higher operations.
    Ops {
        #[command(flatten)]
        common: Common,
        /// Only operations with |I| at most this.
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Equivariant formality for a coordinate or general subtorus.
    Ef {
        #[command(flatten)]
        common: Common,
        /// Comma separated coordinates, e.g. 1,3
        #[arg(long, conflicts_with_all = ["torus", "all_coords"])]
        coords: Option<String>,
        /// JSON file {"rows": [[..]]} with the weight rows of a subtorus
        #[arg(long, conflicts_with = "all_coords")]
        torus: Option<PathBuf>,
        /// Every coordinate subtorus.
        #[arg(long)]
        all_coords: bool,
    },
    /// Cohomology of every full subcomplex.
    Hochster(Common),
    /// Mayer-Vietoris spectral sequence of the cover U_{I,J}.
    Mvss {
        #[command(flatten)]
        common: Common,
        #[arg(long = "I", value_name = "I")]
        i: String,
        /// Defaults to all vertices.
        #[arg(long = "J", value_name = "J")]
        j: Option<String>,
        /// Last page computed; defaults to the page where the sequence stops.
        #[arg(long)]
        pages: Option<usize>,
    },
    /// Checks the resolution against independent invariants.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Exponent bound for the sampled exactness check.
        #[arg(long = "box", default_value_t = 2)]
        bound: u32,
    },
    /// Higher operations of a dg module over an exterior algebra.
    GenericOps {
        /// dg module file with labels, degrees, d and operators
        file: PathBuf,
        #[arg(long, default_value = "q")]
        field: String,
    },
}

struct Outcome {
    results: Value,
    failed: bool,
}

impl Outcome {
    fn ok(results: Value) -> Self {
        Outcome { results, failed: false }
    }
}

fn main() -> ExitCode {
    srres_core::init_threads();
    // usage errors exit 1; 2 is reserved for failed checks
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run(cli, argv) {
        Ok(code) => code,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli, argv: Vec<String>) -> Result<ExitCode> {
    let (spec, outcome) = match &cli.command {
        Command::Resolution { common, format: Format::Text } => {
            let (spec, k) = load(common)?;
            let text = with_field!(spec, |f| {
                let ma = MomentAngle::new(&k, f);
                ma.model.render_text(&ma.field)
            });
            emit(&text)?;
            return Ok(ExitCode::SUCCESS);
        }
        Command::GenericOps { file, field } => {
            let spec: FieldSpec = field.parse()?;
            let text = read(file)?;
            let module = DgModuleFile::parse(&text).context("dg module file")?;
            (spec, with_field!(spec, |f| generic_ops(&module, &f)?))
        }
        cmd => {
            let common = match cmd {
                Command::Betti(c) | Command::Hochster(c) => c,
                Command::Resolution { common, .. }
                | Command::Ops { common, .. }
                | Command::Ef { common, .. }
                | Command::Mvss { common, .. }
                | Command::Verify { common, .. } => common,
                Command::GenericOps { .. } => unreachable!(),
            };
            let (spec, k) = load(common)?;
            (spec, with_field!(spec, |f| complex_command(cmd, &k, f)?))
        }
    };
    let report = ReportFile::new(argv, spec.to_string(), outcome.results);
    emit(&(report.to_pretty() + "\n"))?;
    Ok(if outcome.failed { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(c: &Common) -> Result<(FieldSpec, SimplicialComplex)> {
    let spec: FieldSpec = c.field.parse()?;
    let k = parse_complex(&read(&c.file)?).with_context(|| format!("complex file {}", c.file.display()))?;
    Ok((spec, k))
}

fn vertex_list(text: &str, m: usize) -> Result<VertexSet> {
    let mut s = VertexSet::EMPTY;
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let v: u32 = part.parse().with_context(|| format!("bad vertex '{part}'"))?;
        if v == 0 || v as usize > m {
            bail!("vertex {v} out of range 1..={m}");
        }
        s = s.with(v);
    }
    Ok(s)
}

fn matrix_json<F: Field>(m: &Matrix<F::Elem>, f: &F) -> Value {
    let rows: Vec<Vec<String>> = (0..m.rows()).map(|r| m.row(r).iter().map(|x| f.fmt_elem(x)).collect()).collect();
    json!(rows)
}

fn complex_command<F: Field>(cmd: &Command, k: &SimplicialComplex, f: F) -> Result<Outcome> {
    let ma = MomentAngle::new(k, f);
    let f = &ma.field;
    Ok(match cmd {
        Command::Betti(_) => {
            let b = ma.model.betti();
            let entries: Vec<Value> = b
                .entries
                .iter()
                .map(|(&(i, u), &n)| json!({"degree": i, "multidegree": u, "dim": n}))
                .collect();
            let graded: Vec<Value> =
                b.graded().iter().map(|(&(i, d), &n)| json!({"degree": i, "internal": d, "dim": n})).collect();
            Outcome::ok(json!({"m": k.m(), "totals": b.totals(), "graded": graded, "entries": entries}))
        }
        Command::Resolution { .. } => Outcome::ok(serde_json::to_value(ma.model.export(f))?),
        Command::Ops { max_size, .. } => {
            let mut ops = Vec::new();
            for (&index, blocks) in &ma.table.ops {
                if max_size.is_some_and(|s| index.len() > s) {
                    continue;
                }
                for b in blocks.iter().filter(|b| !b.matrix.is_zero(f)) {
                    ops.push(json!({
                        "index": index,
                        "source": b.source,
                        "degree": b.degree,
                        "target": b.source.minus(index),
                        "target_degree": b.target_degree(index),
                        "matrix": matrix_json(&b.matrix, f),
                    }));
                }
            }
            let nonzero: Vec<VertexSet> = ma.table.nonzero_indices(f);
            Outcome::ok(json!({"nonzero_indices": nonzero, "blocks": ops}))
        }
        Command::Ef { coords, torus, all_coords, .. } => ef(&ma, coords.as_deref(), torus.as_deref(), *all_coords)?,
        Command::Hochster(_) => {
            let mut strands = Vec::new();
            for u in VertexSet::full(k.m()).subsets_ordered() {
                let dims: Vec<Value> = (-1..u.len() as i32)
                    .filter_map(|p| {
                        let d = ma.hochster.dim(u, p);
                        (d > 0).then(|| json!({"degree": p, "dim": d, "representatives": matrix_json(&ma.hochster.simplicial_reps(u, p, f), f)}))
                    })
                    .collect();
                if !dims.is_empty() {
                    strands.push(json!({"subset": u, "cohomology": dims}));
                }
            }
            Outcome::ok(json!({"total_dims": ma.hochster.total_dims(), "strands": strands}))
        }
        Command::Mvss { i, j, pages, .. } => {
            let m = k.m();
            let coords = vertex_list(i, m)?;
            let jset = match j {
                Some(t) => vertex_list(t, m)?,
                None => VertexSet::full(m),
            };
            let r_max = pages.unwrap_or(coords.intersection(jset).len() + 1).max(1);
            let ac = AugmentedCech::build(k, coords, jset, f);
            if let Err(e) = ac.check(f) {
                bail!("double complex check failed: {e}");
            }
            let sp = mvss::pages(&ac, &ma.hochster, r_max, f);
            let report = mvss::check_against_operations(&ac, &sp, &ma.table, &ma.hochster, f);
            let degenerate = MvDecider::new(k, f).degenerates_for(coords, jset);
            let failed = report.status.is_fail();
            Outcome {
                results: json!({
                    "I": coords,
                    "J": jset,
                    "total_homology": ac.total_homology(f),
                    "degenerates_at_e1": degenerate,
                    "pages": sp.dump(f),
                    "operations_check": report,
                }),
                failed,
            }
        }
        Command::Verify { bound, .. } => {
            let v = resolution::verify(&ma.model, k, f, *bound);
            let betti = ma.model.betti();
            let hochster_ok = betti == resolution::BettiTable::from_hochster(&ma.hochster);
            let hilbert = oracle::hilbert_identity(k, &betti);
            let m2 = oracle::m2_compare(k, &betti, f);
            let failed = !v.passed() || !hochster_ok || hilbert.status.is_fail() || m2.status.is_fail();
            Outcome {
                results: json!({
                    "checks": v.checks(),
                    "betti_matches_hochster": hochster_ok,
                    "oracles": [hilbert, m2],
                }),
                failed,
            }
        }
        Command::GenericOps { .. } => unreachable!(),
    })
}

fn ef<F: Field>(ma: &MomentAngle<F>, coords: Option<&str>, torus: Option<&Path>, all: bool) -> Result<Outcome> {
    let (k, f) = (&ma.complex, &ma.field);
    if let Some(path) = torus {
        let spec = SubtorusSpec::parse(&read(path)?).context("subtorus file")?;
        let v = torus::ef_subtorus(ma, &spec)?;
        let failed = !v.verdict.formal;
        return Ok(Outcome { results: serde_json::to_value(v)?, failed });
    }
    let mut comb = CombinatorialDecider::new(k, f);
    let mut mv = MvDecider::new(k, f);
    let mut judge = |i: VertexSet| -> (Value, bool, bool) {
        let coordinate = torus::ef_coordinate(&ma.model, i, f);
        let combinatorial = comb.decide(i);
        let degenerate = mv.degenerates(i);
        let flag = k.is_flag().then(|| torus::ef_flag(k, i).ok()).flatten();
        let agree = coordinate.formal == combinatorial.formal
            && coordinate.formal == degenerate
            && flag.as_ref().is_none_or(|v| v.formal == coordinate.formal);
        let formal = coordinate.formal;
        let v = json!({
            "coordinates": i,
            "formal": formal,
            "coordinate": coordinate,
            "combinatorial": combinatorial,
            "degenerates_at_e1": degenerate,
            "flag": flag,
            "criteria_agree": agree,
        });
        (v, formal, agree)
    };
    if all {
        let mut lattice = Vec::new();
        let mut formal_sets = Vec::new();
        let mut agree_all = true;
        for i in VertexSet::full(k.m()).subsets_ordered() {
            let (v, formal, agree) = judge(i);
            agree_all &= agree;
            if formal {
                formal_sets.push(i);
            }
            lattice.push(v);
        }
        let maximal: Vec<VertexSet> = formal_sets
            .iter()
            .copied()
            .filter(|&a| !formal_sets.iter().any(|&b| b != a && a.is_subset(b)))
            .collect();
        return Ok(Outcome {
            results: json!({"maximal_formal": maximal, "criteria_agree": agree_all, "lattice": lattice}),
            failed: !agree_all,
        });
    }
    let Some(text) = coords else { bail!("one of --coords, --torus or --all-coords is required") };
    let i = vertex_list(text, k.m())?;
    let (v, formal, agree) = judge(i);
    Ok(Outcome { results: v, failed: !formal || !agree })
}

fn generic_ops<F: Field>(file: &DgModuleFile, f: &F) -> Result<Outcome> {
    let module = file.to_module(f)?;
    let ops = transfer::generic_operations(&module, RetractionChoice::Standard, f);
    let names: Vec<&str> = file.operators.iter().map(|o| o.name.as_str()).collect();
    let blocks: Vec<Value> = ops
        .blocks
        .iter()
        .filter(|b| !b.matrix.is_zero(f))
        .map(|b| {
            let word: String = b.index.iter().map(|&a| names[a]).collect();
            json!({"operator": word, "degree": b.degree, "matrix": matrix_json(&b.matrix, f)})
        })
        .collect();
    let dims: Vec<Value> = ops.cohomology_dims().iter().map(|&(d, n)| json!({"degree": d, "dim": n})).collect();
    Ok(Outcome::ok(json!({"cohomology": dims, "operations": blocks})))
}
