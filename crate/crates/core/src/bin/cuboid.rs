use std::fs::{File, OpenOptions};
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use cuboid_core::cuboid::{CuboidRecord, CuboidSource};
use cuboid_core::inverse::RecoveredRecord;
use cuboid_core::json::{parse_seed_lines, PointRecord};
use cuboid_core::search::{self, SearchJobFile};
use cuboid_core::{
    build_npc, recover, Cuboid, Curve, CurvePoint, Error, FactorBudget, InverseFamily, Parametrization, Rational,
    SolutionPair,
};

const APPROX_PLACES: usize = 20;

#[derive(Parser)]
#[command(
    name = "cuboid",
    version,
    about = "Congruent curve arithmetic and nearly-perfect cuboids"
)]
struct Cli {
    /// Print a human-readable table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Add a decimal rendering next to every non-integer rational.
    #[arg(long, global = true)]
    approx: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group law and reflections on y^2 = x^3 - N^2 x.
    Point {
        #[command(subcommand)]
        op: PointOp,
    },
    /// Build or check nearly-perfect cuboids.
    Npc {
        #[command(subcommand)]
        op: NpcOp,
    },
    /// Recover the congruent number and solution pairs behind a cuboid.
    Invert(InvertArgs),
    /// Run a search job and write JSONL records.
    Search(SearchArgs),
    /// Check the Kummer-surface identity for a solution pair.
    Kummer(KummerArgs),
}

#[derive(Args)]
struct PointArgs {
    #[arg(long = "N")]
    n: String,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, allow_hyphen_values = true)]
    y: String,
}

#[derive(Subcommand)]
enum PointOp {
    Add {
        #[command(flatten)]
        p: PointArgs,
        #[arg(long, allow_hyphen_values = true)]
        x2: String,
        #[arg(long, allow_hyphen_values = true)]
        y2: String,
    },
    Double {
        #[command(flatten)]
        p: PointArgs,
    },
    Mul {
        #[command(flatten)]
        p: PointArgs,
        #[arg(short, allow_hyphen_values = true)]
        k: i64,
    },
    Reflect1 {
        #[command(flatten)]
        p: PointArgs,
    },
    Reflect2 {
        #[command(flatten)]
        p: PointArgs,
    },
    Reflect3 {
        #[command(flatten)]
        p: PointArgs,
    },
    /// Exit 1 unless the point lies on the curve.
    Check {
        #[command(flatten)]
        p: PointArgs,
    },
}

#[derive(Subcommand)]
enum NpcOp {
    Generate {
        #[arg(long = "N")]
        n: String,
        #[arg(long = "X", allow_hyphen_values = true)]
        x: String,
        #[arg(long = "Z", allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value = "invariant")]
        param: String,
    },
    /// Check cuboid records (one JSON object per line) from FILE or stdin.
    Verify { file: Option<PathBuf> },
}

#[derive(Args)]
struct InvertArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long)]
    c: String,
    #[arg(long)]
    dac: String,
    #[arg(long)]
    dbc: String,
    #[arg(long)]
    ds: String,
    #[arg(long, default_value = "invariant")]
    family: String,
    /// Treat a, b, c and dac, dbc as unordered and find the labeling that verifies.
    #[arg(long)]
    classify: bool,
}

#[derive(Args)]
struct SearchArgs {
    job: PathBuf,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Continue an interrupted run in --out.
    #[arg(long, requires = "out")]
    resume: bool,
    /// Seed points (JSONL) used when the job lists none.
    #[arg(long)]
    seeds: Option<PathBuf>,
}

#[derive(Args)]
struct KummerArgs {
    #[arg(long = "N")]
    n: String,
    #[arg(long = "X", allow_hyphen_values = true)]
    x: String,
    #[arg(long = "Y", allow_hyphen_values = true)]
    y: String,
    #[arg(long = "Z", allow_hyphen_values = true)]
    z: String,
    #[arg(long = "W", allow_hyphen_values = true)]
    w: String,
}

enum Failure {
    Domain(String),
    Usage(String),
    Exhausted(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource_exhaustion() {
            Failure::Exhausted(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Exhausted(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Usage(m) | Failure::Exhausted(m) => m,
        }
    }
}

type CmdResult<T = ()> = std::result::Result<T, Failure>;

struct Output {
    pretty: bool,
    approx: bool,
}

impl Output {
    fn emit(&self, value: Value) -> CmdResult {
        let value = if self.approx { with_approx(value) } else { value };
        let mut out = io::stdout().lock();
        let res = if self.pretty {
            let mut rows = Vec::new();
            flatten("", &value, &mut rows);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            rows.iter().try_for_each(|(k, v)| writeln!(out, "{k:<width$}  {v}"))
        } else {
            writeln!(out, "{value}")
        };
        res.map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&join(k), v, rows)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&join(&i.to_string()), v, rows)),
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

/// Adds `"<key>_approx"` beside every string field holding a non-integer rational.
fn with_approx(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut out = Map::new();
            for (k, v) in m {
                let approx = match &v {
                    Value::String(s) => s
                        .parse::<Rational>()
                        .ok()
                        .filter(|r| !r.is_integer())
                        .map(|r| r.to_decimal_string(APPROX_PLACES)),
                    _ => None,
                };
                out.insert(k.clone(), with_approx(v));
                if let Some(a) = approx {
                    out.insert(format!("{k}_approx"), Value::String(a));
                }
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(with_approx).collect()),
        other => other,
    }
}

fn rational(name: &str, s: &str) -> CmdResult<Rational> {
    s.parse().map_err(|e: Error| Failure::Domain(format!("--{name}: {e}")))
}

fn curve(n: &str) -> CmdResult<Curve> {
    let n: num_bigint::BigInt = n
        .trim()
        .parse()
        .map_err(|_| Failure::Domain(format!("--N: {n:?} is not an integer")))?;
    Ok(Curve::new(n)?)
}

fn point(p: &PointArgs) -> CmdResult<CurvePoint> {
    let c = curve(&p.n)?;
    Ok(CurvePoint::new(c, rational("x", &p.x)?, rational("y", &p.y)?)?)
}

fn point_json(p: &CurvePoint) -> Value {
    serde_json::to_value(PointRecord::from_point(p)).expect("serializable")
}

fn cmd_point(op: PointOp, out: &Output) -> CmdResult {
    let result = match op {
        PointOp::Add { p, x2, y2 } => {
            let a = point(&p)?;
            let b = CurvePoint::new(a.curve().clone(), rational("x2", &x2)?, rational("y2", &y2)?)?;
            a.add(&b)?
        }
        PointOp::Double { p } => point(&p)?.double(),
        PointOp::Mul { p, k } => point(&p)?.mul(k),
        PointOp::Reflect1 { p } => point(&p)?.reflect_first()?,
        PointOp::Reflect2 { p } => point(&p)?.reflect_second()?,
        PointOp::Reflect3 { p } => point(&p)?.reflect_third()?,
        PointOp::Check { p } => {
            let c = curve(&p.n)?;
            let candidate = CurvePoint::affine_unchecked(c, rational("x", &p.x)?, rational("y", &p.y)?);
            let on = candidate.on_curve();
            let mut v = point_json(&candidate);
            v["on_curve"] = json!(on);
            v["trivial"] = json!(on && candidate.is_trivial());
            out.emit(v)?;
            return if on {
                Ok(())
            } else {
                Err(Failure::Domain("point is not on the curve".into()))
            };
        }
    };
    out.emit(point_json(&result))
}

fn open_input(file: Option<&Path>) -> CmdResult<String> {
    let mut text = String::new();
    match file {
        Some(path) => File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Usage(format!("stdin: {e}")))?,
    };
    Ok(text)
}

fn cmd_npc(op: NpcOp, out: &Output) -> CmdResult {
    match op {
        NpcOp::Generate { n, x, z, param } => {
            let c = curve(&n)?;
            let param: Parametrization = param.parse()?;
            let pair = SolutionPair::from_x(&c, &rational("X", &x)?, &rational("Z", &z)?)?;
            let cuboid = build_npc(&pair, param)?;
            let rec = CuboidRecord::from_cuboid(&cuboid, Some(CuboidSource::of(&pair, param)));
            out.emit(serde_json::to_value(rec).expect("serializable"))
        }
        NpcOp::Verify { file } => {
            let text = open_input(file.as_deref())?;
            let mut all_valid = true;
            let mut seen = 0;
            for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
                seen += 1;
                let rec: CuboidRecord =
                    serde_json::from_str(line).map_err(|e| Failure::Domain(format!("line {}: {e}", i + 1)))?;
                let cuboid = rec.to_cuboid()?;
                let failed = cuboid.verify();
                all_valid &= failed.is_empty();
                out.emit(json!({
                    "valid": failed.is_empty(),
                    "failed": failed,
                    "pc": failed.is_empty() && cuboid.pc_condition(),
                }))?;
            }
            if seen == 0 {
                return Err(Failure::Domain("no cuboid records in input".into()));
            }
            if all_valid {
                Ok(())
            } else {
                Err(Failure::Domain("cuboid relations do not hold".into()))
            }
        }
    }
}

fn cmd_invert(args: InvertArgs, out: &Output) -> CmdResult {
    let family: InverseFamily = args.family.parse()?;
    let v = [
        rational("a", &args.a)?,
        rational("b", &args.b)?,
        rational("c", &args.c)?,
        rational("dac", &args.dac)?,
        rational("dbc", &args.dbc)?,
        rational("ds", &args.ds)?,
    ];
    let [a, b, c, dac, dbc, ds] = v;
    let cuboid = if args.classify {
        Cuboid::classify([a, b, c], [dac, dbc], ds)?
    } else {
        Cuboid::new(a, b, c, dac, dbc, ds)?
    };
    let budget = FactorBudget::from_env()?;
    let rec = RecoveredRecord::from(&recover(&cuboid, family, &budget)?);
    out.emit(serde_json::to_value(rec).expect("serializable"))
}

fn cmd_search(args: SearchArgs) -> CmdResult {
    let text = open_input(Some(&args.job))?;
    let job_file: SearchJobFile =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", args.job.display())))?;
    let fallback = match &args.seeds {
        Some(path) => Some(parse_seed_lines(&open_input(Some(path))?)?),
        None => None,
    };
    let job = job_file.into_job(fallback)?;

    let io_err = |e: io::Error| Failure::Usage(format!("output: {e}"));
    let resume_key = match (&args.out, args.resume) {
        (Some(path), true) if path.exists() => {
            let (key, len) = search::resume_point(BufReader::new(File::open(path).map_err(io_err)?)).map_err(io_err)?;
            OpenOptions::new()
                .write(true)
                .open(path)
                .and_then(|f| f.set_len(len))
                .map_err(io_err)?;
            key
        }
        _ => None,
    };

    let records = search::run_search_after(&job, args.workers, resume_key.as_ref())?;
    for (n, seed, k, m_prev, m) in search::height_regressions(&records) {
        log::warn!("height decreased for N={n} seed {seed} k={k}: m={m_prev} -> m={m}");
    }
    match &args.out {
        Some(path) => {
            let f = OpenOptions::new()
                .create(true)
                .append(args.resume)
                .write(true)
                .truncate(!args.resume)
                .open(path)
                .map_err(io_err)?;
            search::write_jsonl(&records, io::BufWriter::new(f)).map_err(io_err)?;
        }
        None => search::write_jsonl(&records, io::stdout().lock()).map_err(io_err)?,
    }
    let pcs = records.iter().filter(|r| r.pc == Some(true)).count();
    log::info!("{} records written, {pcs} perfect", records.len());
    Ok(())
}

fn cmd_kummer(args: KummerArgs, out: &Output) -> CmdResult {
    let c = curve(&args.n)?;
    let p = CurvePoint::new(c.clone(), rational("X", &args.x)?, rational("Y", &args.y)?)?;
    let q = CurvePoint::new(c, rational("Z", &args.z)?, rational("W", &args.w)?)?;
    let pair = SolutionPair::new(p, q)?;
    let k = pair.kummer_map();
    let residual = k.residual();
    out.emit(json!({
        "N": pair.curve().n().to_string().parse::<serde_json::Number>().expect("integer"),
        "xi": k.xi,
        "zeta": k.zeta,
        "eta": k.eta,
        "residual": residual,
        "holds": residual.is_zero(),
    }))?;
    if residual.is_zero() {
        Ok(())
    } else {
        Err(Failure::Domain("Kummer identity fails".into()))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let out = Output {
        pretty: cli.pretty,
        approx: cli.approx,
    };
    let result = match cli.command {
        Command::Point { op } => cmd_point(op, &out),
        Command::Npc { op } => cmd_npc(op, &out),
        Command::Invert(args) => cmd_invert(args, &out),
        Command::Search(args) => cmd_search(args),
        Command::Kummer(args) => cmd_kummer(args, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
