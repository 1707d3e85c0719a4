//! Argument parsing and subcommand dispatch.

use std::error::Error;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use depthcut::cutters::{run_strategy, Strategy};
use depthcut::depth::{build_graph, depth_order, find_simple_cycle};
use depthcut::geom::{apply_cuts, parse_scalar, validate_scene, Scene};
use depthcut::io::{cuts_from_json, cuts_to_json, cycle_to_json, scene_from_json, scene_to_json};
use depthcut::partition::PartitionParams;
use depthcut::scenes::{generate, GeneratorKind, GeneratorSpec};

use crate::bench::{
    fit_exponent, rows_to_csv, run_bench, scatter_svg, strategies_in, BenchConfig, DEFAULT_SEEDS,
    DEFAULT_SIZES,
};
use crate::render::render_svg;

pub const SEED_VAR: &str = "DEPTHCUT_SEED";

/// Success.
const OK: i32 = 0;
/// A well-formed input with a negative answer: cyclic, or not in general
/// position.
const NEGATIVE: i32 = 1;
/// Usage errors and malformed input.
const FAILURE: i32 = 2;

type Result<T> = std::result::Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(
    name = "depthcut",
    version,
    about = "Cut lines and segments in space so their depth relation becomes acyclic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check general position and print the validation report as JSON.
    Validate { scene: PathBuf },
    /// Generate a scene.
    Gen(GenArgs),
    /// Cut a scene and write the cut set.
    Cut {
        scene: PathBuf,
        #[command(flatten)]
        strategy: StrategyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Also check that the resulting pieces are acyclic.
        #[arg(long)]
        verify: bool,
    },
    /// Exit 0 iff the scene cut by the cut set admits a depth order.
    Verify { scene: PathBuf, cuts: PathBuf },
    /// Run a strategy × size × seed matrix on random scenes.
    Bench(BenchArgs),
    /// Draw the cut scene back to front as SVG.
    RenderSvg {
        scene: PathBuf,
        /// Cut set; the scene is drawn uncut when absent.
        cuts: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyName {
    Naive,
    Greedy,
    Partition,
    SegmentSensitive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    RandomLines,
    RandomSegments,
    GridLowerBound,
    GridPattern,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = Kind::RandomLines)]
    kind: Kind,
    /// Object count; grid side for the grid generators.
    #[arg(long, short = 'n', default_value_t = 10)]
    size: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Coordinate bound for random scenes, as "p/q".
    #[arg(long)]
    bound: Option<String>,
    /// Perturbation size for the lower-bound grid, as "p/q".
    #[arg(long)]
    epsilon: Option<String>,
    /// Maximum coordinate extent of a random segment, as "p/q".
    #[arg(long)]
    segment_length: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StrategyArgs {
    #[arg(long, value_enum, default_value_t = StrategyName::Partition)]
    strategy: StrategyName,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct ParamArgs {
    /// Planes per partition node.
    #[arg(long, default_value_t = 4)]
    degree: usize,
    #[arg(long, default_value_t = 8)]
    leaf_threshold: usize,
    /// Falls back to DEPTHCUT_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BenchArgs {
    /// Strategies to run; all that apply to the scene kind by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    strategy: Vec<StrategyName>,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SIZES)]
    sizes: Vec<usize>,
    /// Seeds per size, counting up from the base seed.
    #[arg(long, default_value_t = DEFAULT_SEEDS)]
    seeds: u64,
    #[command(flatten)]
    params: ParamArgs,
    /// Random segments instead of random lines.
    #[arg(long)]
    segments: bool,
    /// Worker threads; all cores by default.
    #[arg(long)]
    jobs: Option<usize>,
    /// Directory for bench.csv and bench.svg; otherwise `--format` goes to
    /// stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                return FAILURE;
            }
            let _ = stdout.write_all(text.as_bytes());
            return OK;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            FAILURE
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Validate { scene } => {
            let report = validate_scene(&read_scene(&scene)?);
            writeln!(stdout, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(if report.ok { OK } else { NEGATIVE })
        }
        Command::Gen(args) => {
            let scene = generate(&generator_spec(&args)?)?;
            emit(args.out.as_deref(), &scene_to_json(&scene), stdout)?;
            Ok(OK)
        }
        Command::Cut {
            scene,
            strategy,
            out,
            format,
            verify,
        } => cut(
            &scene,
            &strategy,
            out.as_deref(),
            format,
            verify,
            stdout,
            stderr,
        ),
        Command::Verify { scene, cuts } => {
            let scene = read_scene(&scene)?;
            let cuts = cuts_from_json(&read(&cuts)?)?;
            let pieces = apply_cuts(&scene, &cuts)?;
            let g = build_graph(&scene, &pieces)?;
            if depth_order(&g).is_some() {
                writeln!(stdout, "acyclic: {} pieces", pieces.len())?;
                return Ok(OK);
            }
            writeln!(stdout, "cyclic")?;
            if let Some(cycle) = find_simple_cycle(&g, &scene, &pieces) {
                writeln!(stdout, "{}", cycle_to_json(&cycle, &pieces))?;
            }
            Ok(NEGATIVE)
        }
        Command::Bench(args) => bench(&args, stdout, stderr),
        Command::RenderSvg { scene, cuts, out } => {
            let scene = read_scene(&scene)?;
            let cuts = match cuts {
                Some(path) => cuts_from_json(&read(&path)?)?,
                None => Default::default(),
            };
            emit(out.as_deref(), &render_svg(&scene, &cuts)?, stdout)?;
            Ok(OK)
        }
    }
}

fn cut(
    scene_path: &Path,
    args: &StrategyArgs,
    out: Option<&Path>,
    format: Format,
    verify: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let scene = read_scene(scene_path)?;
    let strategy = strategy(args.strategy, &args.params)?;
    let start = Instant::now();
    let cuts = run_strategy(&scene, &strategy)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let text = match format {
        Format::Json => cuts_to_json(&cuts),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for cut in cuts.to_vec() {
                w.serialize(cut)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Svg => render_svg(&scene, &cuts)?,
    };
    emit(out, &text, stdout)?;
    let pieces = apply_cuts(&scene, &cuts)?;
    write!(
        stderr,
        "{}: {} cuts, {} pieces, {ms:.1} ms",
        strategy.name(),
        cuts.len(),
        pieces.len()
    )?;
    if verify {
        let acyclic = depth_order(&build_graph(&scene, &pieces)?).is_some();
        writeln!(stderr, ", {}", if acyclic { "acyclic" } else { "CYCLIC" })?;
        return Ok(if acyclic { OK } else { NEGATIVE });
    }
    writeln!(stderr)?;
    Ok(OK)
}

fn bench(args: &BenchArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let base = seed(args.params.seed)?;
    let names = if !args.strategy.is_empty() {
        args.strategy.clone()
    } else if args.segments {
        vec![
            StrategyName::Naive,
            StrategyName::Greedy,
            StrategyName::Partition,
            StrategyName::SegmentSensitive,
        ]
    } else {
        vec![
            StrategyName::Naive,
            StrategyName::Greedy,
            StrategyName::Partition,
        ]
    };
    let config = BenchConfig {
        sizes: args.sizes.clone(),
        seeds: (base..base + args.seeds).collect(),
        strategies: names
            .iter()
            .map(|&s| strategy(s, &args.params))
            .collect::<Result<_>>()?,
        segments: args.segments,
    };
    let rows = match args.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()?
            .install(|| run_bench(&config)),
        None => run_bench(&config),
    }?;

    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("bench.csv"), rows_to_csv(&rows)?)?;
            fs::write(dir.join("bench.svg"), scatter_svg(&rows))?;
        }
        None => {
            let text = match args.format {
                Format::Csv => rows_to_csv(&rows)?,
                Format::Svg => scatter_svg(&rows),
                Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
            };
            stdout.write_all(text.as_bytes())?;
        }
    }
    for name in strategies_in(&rows) {
        match fit_exponent(&rows, name) {
            Some(e) => writeln!(
                stderr,
                "{name}: fitted exponent {e:.3} (reference 1.5 and 2.0)"
            )?,
            None => writeln!(stderr, "{name}: too few sizes to fit an exponent")?,
        }
    }
    let bad = rows.iter().filter(|r| !r.acyclic).count();
    if bad > 0 {
        writeln!(stderr, "{bad} rows left a depth cycle")?;
        return Ok(NEGATIVE);
    }
    Ok(OK)
}

fn strategy(name: StrategyName, p: &ParamArgs) -> Result<Strategy> {
    let params = PartitionParams {
        degree: p.degree,
        leaf_threshold: p.leaf_threshold,
        seed: seed(p.seed)?,
        ..PartitionParams::default()
    };
    params.check()?;
    Ok(match name {
        StrategyName::Naive => Strategy::Naive,
        StrategyName::Greedy => Strategy::Greedy,
        StrategyName::Partition => Strategy::Partition(params),
        StrategyName::SegmentSensitive => Strategy::SegmentSensitive(params),
    })
}

fn generator_spec(args: &GenArgs) -> Result<GeneratorSpec> {
    let kind = match args.kind {
        Kind::RandomLines => GeneratorKind::RandomLines,
        Kind::RandomSegments => GeneratorKind::RandomSegments,
        Kind::GridLowerBound => GeneratorKind::GridLowerBound,
        Kind::GridPattern => GeneratorKind::GridPattern,
    };
    let mut spec = GeneratorSpec::new(kind, args.size, seed(args.seed)?);
    if let Some(b) = &args.bound {
        spec.bound = parse_scalar(b)?;
    }
    if let Some(e) = &args.epsilon {
        spec.epsilon = parse_scalar(e)?;
    }
    spec.segment_length = args
        .segment_length
        .as_deref()
        .map(parse_scalar)
        .transpose()?;
    Ok(spec)
}

/// `--seed`, else `DEPTHCUT_SEED`, else 0.
fn seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_VAR) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| format!("{SEED_VAR} is not an unsigned integer: {raw:?}").into()),
        Err(_) => Ok(0),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn read_scene(path: &Path) -> Result<Scene> {
    scene_from_json(&read(path)?).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    let text = if text.ends_with('\n') {
        text.to_string()
    } else {
        format!("{text}\n")
    };
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()).into()),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}
