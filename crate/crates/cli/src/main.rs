//! `cmparity` command-line front end.
//!
//! Exit status: 0 on success, 2 on usage or validation errors, 1 when an
//! internal invariant fails.

use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use cmparity::density::sig12;
use cmparity::{
    emit, enumerate_real_odd_cm, is_real_j, j_numeric, odd_isogeny, sample_complex, sample_even, sample_odd,
    t_representative, CanonicalForm, DensityConfig, DensityMode, EmitFormat, Error, QuadOrder, Rational,
    RatMatrix2, SquarefreeD, TPoint, TauExact, TraceLattice, UHPoint,
};
use num_bigint::BigInt;
use serde_json::{json, Value};

/// Environment variable fixing the worker thread count of density runs.
const THREADS_ENV: &str = "CMPARITY_THREADS";

#[derive(Parser)]
#[command(name = "cmparity", version, about = "Parity of CM points, odd isogenies and real CM j-invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order, parity and real-j locus of the CM point τ = root of aτ² + bτ + c.
    Classify {
        #[arg(long, value_name = "A,B,C", allow_hyphen_values = true)]
        tau: Triple,
        #[arg(long)]
        json: bool,
    },
    /// Discriminant and parity of the order Z + f·O_K of Q(√d).
    Order {
        #[arg(long, allow_hyphen_values = true)]
        d: BigInt,
        #[arg(long, default_value = "1")]
        f: BigInt,
        #[arg(long)]
        json: bool,
    },
    /// All real CM j-invariants of an odd discriminant.
    Enumerate {
        #[arg(long, allow_hyphen_values = true)]
        disc: BigInt,
        #[arg(long)]
        json: bool,
    },
    /// Odd-degree isogeny E_{M(τ)} → E_τ for M in GL2(Z_(2))+.
    Isogeny {
        /// Row-major entries, each an integer or a fraction p/q.
        #[arg(long, value_name = "A,B,C,D", allow_hyphen_values = true)]
        matrix: MatrixArg,
        #[arg(long, value_name = "A,B,C", allow_hyphen_values = true)]
        tau: Triple,
        #[arg(long)]
        json: bool,
    },
    /// Sample j over a parity-preserving family and write the samples.
    Density {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_name = "A,B,C", allow_hyphen_values = true)]
        base: Triple,
        #[arg(long = "max-denominator", value_name = "N")]
        max_denominator: u64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        #[arg(long = "bin-width", default_value_t = 100.0)]
        bin_width: f64,
    },
    /// Numerical j at a CM point or an arbitrary point x + iy.
    Jvalue {
        #[arg(long, value_name = "A,B,C", allow_hyphen_values = true, conflicts_with = "point")]
        tau: Option<Triple>,
        #[arg(long, value_name = "X,Y", allow_hyphen_values = true, required_unless_present = "tau")]
        point: Option<PointArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Odd,
    Even,
    Complex,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn split_fixed<T: FromStr, const N: usize>(s: &str) -> Result<[T; N], String>
where
    T::Err: Display,
{
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated values, got {}", parts.len()));
    }
    let parsed = parts
        .iter()
        .map(|p| p.parse::<T>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(parsed.try_into().unwrap_or_else(|_| unreachable!()))
}

#[derive(Clone)]
struct Triple([BigInt; 3]);

impl FromStr for Triple {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        split_fixed(s).map(Triple)
    }
}

impl Triple {
    fn tau(&self) -> Result<TauExact, Error> {
        let [a, b, c] = self.0.clone();
        TauExact::new(a, b, c)
    }
}

#[derive(Clone)]
struct MatrixArg([Rational; 4]);

impl FromStr for MatrixArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        split_fixed(s).map(MatrixArg)
    }
}

#[derive(Clone)]
struct PointArg([f64; 2]);

impl FromStr for PointArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        split_fixed(s).map(PointArg)
    }
}

/// Failure of a subcommand, carrying its exit status.
enum Failure {
    Validation(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn int_json(n: &BigInt) -> Value {
    serde_json::from_str(&n.to_string()).unwrap_or_else(|_| Value::String(n.to_string()))
}

fn float_json(x: f64) -> Value {
    serde_json::from_str(&sig12(x)).unwrap_or(Value::Null)
}

fn print_json(v: &Value) -> CmdResult {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(|e| Failure::Validation(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn print_pairs(pairs: &[(&str, String)]) {
    let line: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    println!("{}", line.join(" "));
}

fn pairs_json(pairs: &[(&str, Value)]) -> Value {
    Value::Object(pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect())
}

fn classify(triple: &Triple, as_json: bool) -> CmdResult {
    let tau = triple.tau()?;
    let order = tau.order()?;
    let (a, b, c) = tau.coefficients();
    let real = is_real_j(&tau);
    let rep: Option<TPoint> = real.then(|| t_representative(&tau)).transpose()?;
    if as_json {
        let mut fields = vec![
            ("a", int_json(&a)),
            ("b", int_json(&b)),
            ("c", int_json(&c)),
            ("parity", json!(tau.parity().as_str())),
            ("disc", int_json(&tau.discriminant())),
            ("d", int_json(order.radicand().value())),
            ("f", int_json(order.conductor())),
            ("real_j", json!(real)),
        ];
        if let Some(p) = rep {
            fields.push(("branch", json!(p.branch.as_str())));
            fields.push(("t", float_json(p.t)));
        }
        return print_json(&pairs_json(&fields));
    }
    let mut fields = vec![
        ("parity", tau.parity().to_string()),
        ("disc", tau.discriminant().to_string()),
        ("d", order.radicand().to_string()),
        ("f", order.conductor().to_string()),
        ("real_j", real.to_string()),
    ];
    if let Some(p) = rep {
        fields.push(("branch", p.branch.to_string()));
        fields.push(("t", sig12(p.t)));
    }
    print_pairs(&fields);
    Ok(())
}

fn order(d: BigInt, f: BigInt, as_json: bool) -> CmdResult {
    let order = QuadOrder::new(SquarefreeD::new(d)?, f)?;
    let trace = match order.trace_lattice() {
        TraceLattice::Integers => "Z",
        TraceLattice::EvenIntegers => "2Z",
    };
    let canonical = match order.canonical_generator() {
        CanonicalForm::HalfInteger(d) => format!("Z[(1+sqrt({d}))/2]"),
        CanonicalForm::Integer(d) => format!("Z[sqrt({d})]"),
    };
    let disc = order.discriminant();
    if as_json {
        return print_json(&json!({
            "d": int_json(order.radicand().value()),
            "f": int_json(order.conductor()),
            "disc": int_json(&disc),
            "parity": order.parity().as_str(),
            "trace_lattice": trace,
            "canonical": canonical,
        }));
    }
    print_pairs(&[
        ("d", order.radicand().to_string()),
        ("f", order.conductor().to_string()),
        ("disc", disc.to_string()),
        ("parity", order.parity().to_string()),
        ("trace_lattice", trace.into()),
        ("canonical", canonical),
    ]);
    Ok(())
}

fn enumerate(disc: BigInt, as_json: bool) -> CmdResult {
    let points = enumerate_real_odd_cm(&disc)?;
    if as_json {
        let entries: Vec<Value> = points
            .iter()
            .map(|p| {
                let (a, b, c) = p.tau.coefficients();
                json!({
                    "beta": int_json(&p.beta),
                    "a": int_json(&a),
                    "b": int_json(&b),
                    "c": int_json(&c),
                    "j": float_json(p.j_estimate),
                })
            })
            .collect();
        return print_json(&json!({
            "disc": int_json(&disc),
            "count": points.len(),
            "points": entries,
        }));
    }
    println!("disc={disc} count={}", points.len());
    for p in &points {
        print_pairs(&[
            ("beta", p.beta.to_string()),
            ("tau", p.tau.to_string()),
            ("j", sig12(p.j_estimate)),
        ]);
    }
    Ok(())
}

fn isogeny(matrix: &MatrixArg, triple: &Triple, as_json: bool) -> CmdResult {
    let [a, b, c, d] = matrix.0.clone();
    let m = RatMatrix2::new(a, b, c, d);
    let tau = triple.tau()?;
    let iso = odd_isogeny(&m, &tau)?;
    let image = cmparity::moebius(&m, &tau);
    if image.parity() != tau.parity() {
        return Err(Failure::Internal(format!(
            "parity transport violated: {} is {}, {} is {}",
            image,
            image.parity(),
            tau,
            tau.parity()
        )));
    }
    let (ia, ib, ic) = image.coefficients();
    if as_json {
        return print_json(&json!({
            "source": [int_json(&ia), int_json(&ib), int_json(&ic)],
            "target": [int_json(tau.a()), int_json(tau.b()), int_json(tau.c())],
            "degree": int_json(&iso.degree),
            "multiplier": iso.multiplier.to_string(),
            "source_disc": int_json(&image.discriminant()),
            "target_disc": int_json(&tau.discriminant()),
            "parity": tau.parity().as_str(),
        }));
    }
    print_pairs(&[
        ("source", image.to_string()),
        ("target", tau.to_string()),
        ("degree", iso.degree.to_string()),
        ("multiplier", format!("{:?}", iso.multiplier.to_string())),
        ("source_disc", image.discriminant().to_string()),
        ("target_disc", tau.discriminant().to_string()),
        ("parity", tau.parity().to_string()),
    ]);
    Ok(())
}

struct DensityArgs {
    mode: ModeArg,
    base: Triple,
    max_denominator: u64,
    out: PathBuf,
    format: FormatArg,
    seed: u64,
    draws: usize,
    bin_width: f64,
}

fn thread_count() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Validation(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

fn density(args: DensityArgs) -> CmdResult {
    let mode = match args.mode {
        ModeArg::Odd => DensityMode::OddReal,
        ModeArg::Even => DensityMode::EvenReal,
        ModeArg::Complex => DensityMode::Complex,
    };
    let mut cfg = DensityConfig::new(mode, args.base.tau()?, args.max_denominator);
    cfg.seed = args.seed;
    cfg.draws = args.draws;
    cfg.bin_width = args.bin_width;
    cfg.validate()?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Failure::Internal(e.to_string()))?;
    let threads = pool.current_num_threads();
    let report = pool.install(|| match mode {
        DensityMode::OddReal => sample_odd(&cfg),
        DensityMode::EvenReal => sample_even(&cfg),
        DensityMode::Complex => sample_complex(&cfg),
    })?;

    let file = File::create(&args.out)
        .map_err(|e| Failure::Validation(format!("cannot create {}: {e}", args.out.display())))?;
    let mut out = BufWriter::new(file);
    match args.format {
        FormatArg::Csv => emit(&report, EmitFormat::Csv, &mut out)?,
        FormatArg::Json => {
            let mut buf = Vec::new();
            emit(&report, EmitFormat::Json, &mut buf)?;
            let mut doc: Value = serde_json::from_slice(&buf).map_err(|e| Failure::Internal(e.to_string()))?;
            doc["threads"] = json!(threads);
            serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Failure::Internal(e.to_string()))?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    println!("mode={} threads={threads} {}", mode.as_str(), report.summary_line());
    Ok(())
}

fn jvalue(tau: Option<Triple>, point: Option<PointArg>) -> CmdResult {
    let p = match (tau, point) {
        (Some(t), _) => UHPoint::<f64>::from_tau(&t.tau()?),
        (None, Some(PointArg([x, y]))) => UHPoint::new(x, y)?,
        (None, None) => unreachable!("clap requires one of --tau, --point"),
    };
    let j = j_numeric(p);
    print_pairs(&[("re_j", sig12(j.re)), ("im_j", sig12(j.im))]);
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Classify { tau, json } => classify(&tau, json),
        Command::Order { d, f, json } => order(d, f, json),
        Command::Enumerate { disc, json } => enumerate(disc, json),
        Command::Isogeny { matrix, tau, json } => isogeny(&matrix, &tau, json),
        Command::Density {
            mode,
            base,
            max_denominator,
            out,
            format,
            seed,
            draws,
            bin_width,
        } => density(DensityArgs {
            mode,
            base,
            max_denominator,
            out,
            format,
            seed,
            draws,
            bin_width,
        }),
        Command::Jvalue { tau, point } => jvalue(tau, point),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
