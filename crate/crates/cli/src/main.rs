use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use valence_core::dualfan::face_fan_type;
use valence_core::exactgeom::{approx, vec_strings};
use valence_core::parallelohedron::Tiling;
use valence_core::specfile::{load_dir, TilingSpec};
use valence_core::verify::{
    assemble_report, selected_faces, tiling_for, verify_face, Fault, Mode, Status, VerifyOptions,
};
use valence_core::Error;

const EXIT_INPUT: u8 = 2;
const EXIT_CROSS_CHECK: u8 = 3;
const EXIT_BOUND: u8 = 4;
const EXIT_CENSUS: u8 = 5;

#[derive(Parser)]
#[command(
    name = "valence",
    version,
    about = "Face valences of lattice Voronoi tilings, checked exactly"
)]
struct Cli {
    /// Write the machine-readable report (JSON) to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for the face sweep (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Voronoi,
    Skew,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Voronoi => Mode::Voronoi,
            ModeArg::Skew => Mode::Skew,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    DropTranslation,
}

#[derive(Subcommand)]
enum Command {
    /// Relevant vectors, f-vector and circumradius of the Voronoi cell.
    Cell { spec: PathBuf },
    /// Run every check on every face with codimension in the given range.
    Verify {
        spec: PathBuf,
        /// Codimension range `a..b` (inclusive) or a single value.
        #[arg(long)]
        k: Option<String>,
        #[arg(long, value_enum, default_value = "voronoi")]
        mode: ModeArg,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
    /// Fan types of all codimension-k faces over a directory of specs.
    Census {
        dir: PathBuf,
        #[arg(long)]
        k: usize,
        /// Exit with status 5 unless exactly this many types are found.
        #[arg(long)]
        expect_types: Option<usize>,
        #[arg(long, value_enum, default_value = "voronoi")]
        mode: ModeArg,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let input = e
                .downcast_ref::<Error>()
                .map_or(true, Error::is_input_error);
            ExitCode::from(if input { EXIT_INPUT } else { EXIT_CROSS_CHECK })
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .context("configuring the thread pool")?;
    }
    let out = cli.out.as_deref();
    match cli.command {
        Command::Cell { spec } => cmd_cell(&spec, out),
        Command::Verify {
            spec,
            k,
            mode,
            inject_fault,
        } => cmd_verify(&spec, k.as_deref(), mode.into(), inject_fault, out),
        Command::Census {
            dir,
            k,
            expect_types,
            mode,
        } => cmd_census(&dir, k, expect_types, mode.into(), out),
    }
}

fn write_report(out: Option<&Path>, value: &Value) -> anyhow::Result<()> {
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(value)?;
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn load(spec: &Path) -> anyhow::Result<TilingSpec> {
    Ok(TilingSpec::load(spec)?)
}

fn cmd_cell(spec: &Path, out: Option<&Path>) -> anyhow::Result<u8> {
    let spec = load(spec)?;
    let tiling = tiling_for(&spec, Mode::Voronoi)?;
    let f = tiling.faces.f_vector();
    println!("{}: dim {}", spec.name, spec.dim);
    println!("relevant vectors: {}", tiling.relevant.len());
    println!("f-vector: {f:?}");
    println!(
        "circumradius^2: {} (~{:.6})",
        tiling.circumradius2,
        approx(&tiling.circumradius2)
    );
    let report = json!({
        "name": spec.name,
        "dim": spec.dim,
        "relevant_vectors": tiling.relevant.vectors.iter().map(|v| v.to_vec()).collect::<Vec<_>>(),
        "relevant_norms2": tiling.relevant.norms2.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "f_vector": f,
        "vertices": tiling.cell.vertices().iter().map(|v| vec_strings(v)).collect::<Vec<_>>(),
        "circumradius2": { "exact": tiling.circumradius2.to_string(), "approx": approx(&tiling.circumradius2) },
    });
    write_report(out, &report)?;
    Ok(0)
}

fn parse_k_range(text: Option<&str>, dim: usize) -> anyhow::Result<(usize, usize)> {
    let Some(text) = text else {
        return Ok((1, dim));
    };
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (
            a.trim().parse::<usize>()?,
            b.trim().trim_start_matches('=').parse::<usize>()?,
        ),
        None => {
            let k = text.trim().parse::<usize>()?;
            (k, k)
        }
    };
    if a == 0 || a > b || b > dim {
        bail!(Error::InvalidInput(format!(
            "k range {text} outside 1..{dim}"
        )));
    }
    Ok((a, b))
}

fn cmd_verify(
    spec_path: &Path,
    k: Option<&str>,
    mode: Mode,
    fault: Option<FaultArg>,
    out: Option<&Path>,
) -> anyhow::Result<u8> {
    let spec = load(spec_path)?;
    let (k_min, k_max) = parse_k_range(k, spec.dim)
        .map_err(|e| anyhow!(Error::InvalidInput(format!("bad --k: {e}"))))?;
    let tiling = tiling_for(&spec, mode)?;
    let opts = VerifyOptions {
        k_min,
        k_max,
        mode,
        fault: fault.map(|f| match f {
            FaultArg::DropTranslation => Fault::DropTranslation,
        }),
    };
    tiling.check_face_to_face()?;
    let faces = selected_faces(&tiling, &opts);
    let records: Vec<_> = faces
        .par_iter()
        .map(|f| verify_face(&tiling, f, &opts))
        .collect();
    let report = assemble_report(&spec.name, &tiling, mode, records);
    let s = &report.summary;
    println!(
        "{} ({:?} mode): {} faces checked, k = {}..{}",
        spec.name, mode, s.faces_checked, k_min, k_max
    );
    for (k, v) in &s.max_valence {
        let types = s.census.get(k).map_or(0, Vec::len);
        println!(
            "  k = {k}: max valence {v} (bound {}), {types} fan type(s)",
            1usize << k
        );
    }
    for n in &s.noteworthy {
        println!("  {n}");
    }
    for v in &s.violations {
        println!(
            "  VIOLATION face {} [{:?}]: {}",
            v.face_id, v.kind, v.detail
        );
    }
    write_report(out, &serde_json::to_value(&report)?)?;
    Ok(match report.status() {
        Status::Ok => 0,
        Status::CrossCheckFailure => EXIT_CROSS_CHECK,
        Status::BoundViolation => EXIT_BOUND,
    })
}

fn cmd_census(
    dir: &Path,
    k: usize,
    expect: Option<usize>,
    mode: Mode,
    out: Option<&Path>,
) -> anyhow::Result<u8> {
    let specs = load_dir(dir)?;
    if specs.is_empty() {
        bail!(Error::InvalidInput(format!(
            "no spec files in {}",
            dir.display()
        )));
    }
    let tilings: Vec<(String, Tiling)> = specs
        .iter()
        .filter(|s| s.dim >= k)
        .map(|s| Ok((s.name.clone(), tiling_for(s, mode)?)))
        .collect::<valence_core::Result<_>>()?;
    let jobs: Vec<(usize, usize)> = tilings
        .iter()
        .enumerate()
        .flat_map(|(i, (_, t))| t.faces.faces_of_codim(k).map(move |f| (i, f.id)))
        .collect();
    let types = jobs
        .par_iter()
        .map(|&(i, id)| {
            let t = &tilings[i].1;
            face_fan_type(t, t.faces.get(id)).map(|r| (i, id, r))
        })
        .collect::<valence_core::Result<Vec<_>>>()?;
    // signature -> (cones, count, witnesses), first-seen order
    let mut table: BTreeMap<String, (usize, usize, usize, Vec<Value>)> = BTreeMap::new();
    for (n, (i, id, (sig, cones))) in types.into_iter().enumerate() {
        let entry = table
            .entry(sig.0.clone())
            .or_insert((n, cones, 0, Vec::new()));
        entry.2 += 1;
        entry.3.push(json!([tilings[i].0, id]));
    }
    let mut rows: Vec<_> = table.into_iter().collect();
    rows.sort_by_key(|(_, (first, ..))| *first);
    println!(
        "census k = {k} over {} tiling(s): {} type(s)",
        tilings.len(),
        rows.len()
    );
    let mut listed = Vec::new();
    for (sig, (_, cones, count, witnesses)) in &rows {
        let digest = valence_core::dualfan::Signature(sig.clone()).digest();
        let first = &witnesses[0];
        println!(
            "  {digest}  cones {cones:>2}  faces {count:>4}  e.g. {} face {}",
            first[0].as_str().unwrap_or(""),
            first[1]
        );
        listed.push(json!({
            "signature": digest,
            "canonical": sig,
            "cones": cones,
            "count": count,
            "witnesses": witnesses,
        }));
    }
    write_report(
        out,
        &json!({ "k": k, "mode": mode, "types": listed, "expected": expect }),
    )?;
    match expect {
        Some(n) if n != rows.len() => {
            println!("expected {n} type(s), found {}", rows.len());
            Ok(EXIT_CENSUS)
        }
        _ => Ok(0),
    }
}
