//! Command-line driver: seeded, deterministic front end over the library
//! kernels. Output is buffered and written in one piece, so a failed run
//! never leaves partial records behind.
//!
//! Exit codes: 0 on success with all checks passing, 1 when any
//! verification or scan gate fails, 2 on usage errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use burgess_core::arith::{is_prime, primes_in};
use burgess_core::character::{build_character, gauss_sum};
use burgess_core::coeffs::{divisor_table, CoefficientStream, TauTable};
use burgess_core::expsums::{
    kloosterman, rational_char_sum, weil_scan, KloostermanQuery, QuadPoly, RationalCharSumSpec,
    WeilScanSummary,
};
use burgess_core::lscan::{
    burgess_scan, central_value_oracle, central_value_smoothed, log_spaced_primes,
    BurgessScanConfig,
};
use burgess_core::reductions::{offdiag_tail, run_all_suites, run_suite, IdentityTag};

const DEFAULT_SEED: u64 = 0xB00B5;

#[derive(Parser)]
#[command(
    name = "burgess",
    about = "Exponential-sum and character-sum laboratory",
    version
)]
struct Cli {
    /// Seed for every randomized suite; fixed default keeps runs reproducible.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Worker threads (defaults to the rayon heuristic).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format for record streams.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write output to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CoeffKindArg {
    Divisor,
    Tau,
}

#[derive(Subcommand)]
enum Command {
    /// Gauss sums of characters mod a prime.
    Gauss(GaussArgs),
    /// One (possibly twisted) Kloosterman sum.
    Kloosterman(KloostermanArgs),
    /// One complete rational character sum over F_M.
    Charsum(CharsumArgs),
    /// Ramanujan tau values (exact), cache-aware.
    Tau(TauArgs),
    /// Run the full identity-verification suites.
    Verify(VerifyArgs),
    /// Square-root cancellation scan over random quadratic pairs.
    ScanWeil(ScanWeilArgs),
    /// Exponent scan of twisted sums and central values over primes.
    ScanBurgess(ScanBurgessArgs),
    /// Central L-value of one character by one or both methods.
    Lvalue(LvalueArgs),
    /// Off-diagonal Bessel-tail bound for the negligibility criterion.
    OffdiagTail(OffdiagTailArgs),
}

#[derive(Args)]
struct GaussArgs {
    /// Prime modulus.
    #[arg(long)]
    q: u64,
    /// Character index, `quadratic`, or `all`.
    #[arg(long, default_value = "quadratic")]
    chi: String,
}

#[derive(Args)]
struct KloostermanArgs {
    #[arg(long)]
    a: i64,
    #[arg(long)]
    b: i64,
    #[arg(long)]
    c: u64,
    /// Twist character modulus (must divide c).
    #[arg(long)]
    psi_mod: Option<u64>,
    /// Twist character index.
    #[arg(long, default_value_t = 0)]
    psi_idx: u64,
}

#[derive(Args)]
struct CharsumArgs {
    /// Prime modulus M.
    #[arg(long)]
    m: u64,
    /// Character index (defaults to the quadratic character).
    #[arg(long)]
    chi: Option<u64>,
    /// Numerator coefficients c0,c1,c2.
    #[arg(long, value_delimiter = ',')]
    q1: Vec<i64>,
    /// Denominator coefficients c0,c1,c2.
    #[arg(long, value_delimiter = ',')]
    q2: Vec<i64>,
    /// Extra excluded points.
    #[arg(long, value_delimiter = ',')]
    exclude: Vec<u64>,
}

#[derive(Args)]
struct TauArgs {
    /// Largest index to compute.
    #[arg(long, default_value_t = 100)]
    n_max: usize,
    /// Emit Hecke-normalized values instead of raw integers.
    #[arg(long)]
    normalized: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Tuples per identity suite.
    #[arg(long, default_value_t = 100)]
    tuples: usize,
    /// Restrict to one identity tag.
    #[arg(long)]
    only: Option<String>,
}

#[derive(Args)]
struct ScanWeilArgs {
    /// Smallest prime modulus.
    #[arg(long, default_value_t = 5)]
    m_min: u64,
    /// Largest prime modulus.
    #[arg(long, default_value_t = 499)]
    m_max: u64,
    /// Random quadratic pairs per modulus.
    #[arg(long, default_value_t = 50)]
    trials: usize,
}

#[derive(Args)]
struct ScanBurgessArgs {
    #[arg(long, default_value_t = 100)]
    m_min: u64,
    #[arg(long, default_value_t = 20_000)]
    m_max: u64,
    /// Number of log-spaced primes to scan.
    #[arg(long, default_value_t = 60)]
    primes: usize,
    /// Characters sampled per prime (quadratic always included).
    #[arg(long, default_value_t = 3)]
    chars: usize,
    #[arg(long, value_enum, default_value_t = CoeffKindArg::Divisor)]
    kind: CoeffKindArg,
    /// Dyadic grid density (1 = ratio sqrt 2).
    #[arg(long, default_value_t = 1)]
    grid_density: u32,
}

#[derive(Args)]
struct LvalueArgs {
    /// Prime modulus M.
    #[arg(long)]
    m: u64,
    /// Character index or `quadratic`.
    #[arg(long, default_value = "quadratic")]
    chi: String,
    /// Also run the smoothed-sum route and report the disagreement.
    #[arg(long)]
    both: bool,
}

#[derive(Args)]
struct OffdiagTailArgs {
    /// Level parameter p (positive real; the criterion uses 2 ceil(L N / M)).
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 10_007)]
    m: u64,
    #[arg(long, default_value_t = 4)]
    big_l: u64,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, default_value_t = 100)]
    c_max: u64,
    #[arg(long, default_value_t = 11)]
    k: u32,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

struct Emitter {
    lines: Vec<String>,
}

impl Emitter {
    fn new() -> Self {
        Self { lines: Vec::new() }
    }

    fn line(&mut self, s: String) {
        self.lines.push(s);
    }

    fn flush(self, out: Option<&PathBuf>) -> std::io::Result<()> {
        let body = if self.lines.is_empty() {
            String::new()
        } else {
            self.lines.join("\n") + "\n"
        };
        match out {
            None => {
                std::io::stdout().write_all(body.as_bytes())?;
                std::io::stdout().flush()
            }
            Some(path) => std::fs::write(path, body),
        }
    }
}

fn complex_json(tagname: &str, z: Complex64, extra: serde_json::Value) -> String {
    let mut obj = serde_json::json!({
        "record": tagname,
        "re": z.re,
        "im": z.im,
        "abs": z.norm(),
    });
    if let (Some(map), Some(more)) = (obj.as_object_mut(), extra.as_object()) {
        for (k, v) in more {
            map.insert(k.clone(), v.clone());
        }
    }
    obj.to_string()
}

fn run(cli: &Cli, emit: &mut Emitter) -> Result<bool, String> {
    match &cli.command {
        Command::Gauss(args) => {
            if !is_prime(args.q) {
                return Err(format!("--q {} is not prime", args.q));
            }
            let indices: Vec<u64> = match args.chi.as_str() {
                "quadratic" => {
                    if args.q == 2 {
                        return Err("no quadratic character mod 2".into());
                    }
                    vec![(args.q - 1) / 2]
                }
                "all" => (0..args.q.saturating_sub(1)).collect(),
                s => vec![s
                    .parse::<u64>()
                    .map_err(|_| format!("bad --chi value: {s}"))?],
            };
            if cli.format == Format::Csv {
                emit.line("q,chi,re,im,abs".into());
            }
            for k in indices {
                let chi = build_character(args.q, k).map_err(|e| e.to_string())?;
                let g = gauss_sum(&chi);
                match cli.format {
                    Format::Json => emit.line(
                        serde_json::json!({
                            "record": "gauss_sum",
                            "q": args.q,
                            "chi": k,
                            "re": g.re,
                            "im": g.im,
                            "abs": g.abs(),
                            "primitive": chi.is_primitive(),
                        })
                        .to_string(),
                    ),
                    Format::Csv => {
                        emit.line(format!("{},{},{},{},{}", args.q, k, g.re, g.im, g.abs()))
                    }
                    Format::Tsv => {
                        emit.line(format!("{}\t{}\t{}\t{}\t{}", args.q, k, g.re, g.im, g.abs()))
                    }
                }
            }
            Ok(true)
        }
        Command::Kloosterman(args) => {
            if args.c == 0 {
                return Err("--c must be positive".into());
            }
            let query = match args.psi_mod {
                None => KloostermanQuery::untwisted(args.a, args.b, args.c),
                Some(p) => {
                    if args.c % p != 0 {
                        return Err(format!("twist modulus {p} does not divide c = {}", args.c));
                    }
                    let psi = build_character(p, args.psi_idx).map_err(|e| e.to_string())?;
                    KloostermanQuery::twisted(args.a, args.b, args.c, psi)
                }
            };
            let v = kloosterman(&query).map_err(|e| e.to_string())?;
            let ratio = v.norm() / (args.c as f64).sqrt();
            match cli.format {
                Format::Json => emit.line(complex_json(
                    "kloosterman",
                    v,
                    serde_json::json!({
                        "a": args.a, "b": args.b, "c": args.c,
                        "weil_ratio": ratio,
                    }),
                )),
                Format::Csv => {
                    emit.line("a,b,c,re,im,abs,weil_ratio".into());
                    emit.line(format!(
                        "{},{},{},{},{},{},{}",
                        args.a,
                        args.b,
                        args.c,
                        v.re,
                        v.im,
                        v.norm(),
                        ratio
                    ));
                }
                Format::Tsv => emit.line(format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    args.a,
                    args.b,
                    args.c,
                    v.re,
                    v.im,
                    v.norm(),
                    ratio
                )),
            }
            Ok(true)
        }
        Command::Charsum(args) => {
            if !is_prime(args.m) || args.m < 3 {
                return Err(format!("--m {} must be an odd prime", args.m));
            }
            if args.q1.len() != 3 || args.q2.len() != 3 {
                return Err("--q1 and --q2 each take exactly three coefficients c0,c1,c2".into());
            }
            let chi_index = args.chi.unwrap_or((args.m - 1) / 2);
            let chi = build_character(args.m, chi_index).map_err(|e| e.to_string())?;
            let q1 = QuadPoly::new(args.q1[0], args.q1[1], args.q1[2], args.m);
            let q2 = QuadPoly::new(args.q2[0], args.q2[1], args.q2[2], args.m);
            let spec =
                RationalCharSumSpec::new(chi, q1, q2, &args.exclude).map_err(|e| e.to_string())?;
            let v = rational_char_sum(&spec);
            let ratio = v.norm() / (args.m as f64).sqrt();
            match cli.format {
                Format::Json => emit.line(complex_json(
                    "rational_char_sum",
                    v,
                    serde_json::json!({
                        "M": args.m,
                        "chi": chi_index,
                        "ratio": ratio,
                        "degenerate": spec.degenerate,
                        "excluded": spec.excluded.iter().collect::<Vec<_>>(),
                    }),
                )),
                Format::Csv => {
                    emit.line("M,chi,re,im,abs,ratio,degenerate".into());
                    emit.line(format!(
                        "{},{},{},{},{},{},{}",
                        args.m,
                        chi_index,
                        v.re,
                        v.im,
                        v.norm(),
                        ratio,
                        spec.degenerate
                    ));
                }
                Format::Tsv => emit.line(format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    args.m,
                    chi_index,
                    v.re,
                    v.im,
                    v.norm(),
                    ratio,
                    spec.degenerate
                )),
            }
            Ok(true)
        }
        Command::Tau(args) => {
            if args.n_max == 0 {
                return Err("--n-max must be positive".into());
            }
            if args.n_max > 2_000_000 {
                return Err("--n-max capped at 2000000 for desk-scale runs".into());
            }
            let cache = std::env::var_os("BURGESS_TAU_CACHE").map(PathBuf::from);
            let table = TauTable::load_or_build(args.n_max, cache.as_deref())
                .map_err(|e| e.to_string())?;
            if cli.format == Format::Csv {
                emit.line(if args.normalized {
                    "n,lambda".into()
                } else {
                    "n,tau".into()
                });
            }
            let stream = if args.normalized {
                Some(table.normalized())
            } else {
                None
            };
            for n in 1..=args.n_max {
                match (&stream, cli.format) {
                    (Some(s), Format::Json) => emit.line(
                        serde_json::json!({"record": "tau", "n": n, "lambda": s.lambda(n)})
                            .to_string(),
                    ),
                    (Some(s), Format::Csv) => emit.line(format!("{n},{}", s.lambda(n))),
                    (Some(s), Format::Tsv) => emit.line(format!("{n}\t{}", s.lambda(n))),
                    (None, Format::Json) => emit.line(
                        serde_json::json!({"record": "tau", "n": n, "tau": table.tau(n).to_string()})
                            .to_string(),
                    ),
                    (None, Format::Csv) => emit.line(format!("{n},{}", table.tau(n))),
                    (None, Format::Tsv) => emit.line(format!("{n}\t{}", table.tau(n))),
                }
            }
            Ok(true)
        }
        Command::Verify(args) => {
            if args.tuples == 0 {
                return Err("--tuples must be positive".into());
            }
            let reports = match &args.only {
                None => run_all_suites(args.tuples, cli.seed).map_err(|e| e.to_string())?,
                Some(tag) => {
                    let tag = IdentityTag::parse(tag)
                        .ok_or_else(|| format!("unknown identity tag: {tag}"))?;
                    run_suite(tag, args.tuples, cli.seed).map_err(|e| e.to_string())?
                }
            };
            let all_pass = reports.iter().all(|r| r.pass);
            if cli.format == Format::Csv {
                emit.line(burgess_core::reductions::VerificationReport::csv_header().into());
            }
            for r in &reports {
                match cli.format {
                    Format::Json => emit.line(r.json_line()),
                    Format::Csv => emit.line(r.csv_row()),
                    Format::Tsv => emit.line(r.csv_row().replace(',', "\t")),
                }
            }
            Ok(all_pass)
        }
        Command::ScanWeil(args) => {
            if args.trials == 0 {
                return Err("--trials must be positive".into());
            }
            let ms = primes_in(args.m_min.max(5), args.m_max);
            if ms.is_empty() {
                return Err(format!(
                    "no primes in [{}, {}]",
                    args.m_min.max(5),
                    args.m_max
                ));
            }
            let summaries = weil_scan(&ms, args.trials, cli.seed).map_err(|e| e.to_string())?;
            let ok = summaries
                .iter()
                .all(|s| s.records.iter().all(|r| r.ratio <= 4.0));
            if cli.format == Format::Csv {
                emit.line(WeilScanSummary::csv_header().into());
            }
            for s in &summaries {
                match cli.format {
                    Format::Json => emit.line(s.json_line()),
                    Format::Csv => emit.line(s.csv_row()),
                    Format::Tsv => emit.line(s.csv_row().replace(',', "\t")),
                }
            }
            Ok(ok)
        }
        Command::ScanBurgess(args) => {
            if args.primes == 0 || args.chars == 0 {
                return Err("--primes and --chars must be positive".into());
            }
            if args.m_min < 5 || args.m_max <= args.m_min {
                return Err("need 5 <= m-min < m-max".into());
            }
            let primes = log_spaced_primes(args.m_min, args.m_max, args.primes);
            if primes.is_empty() {
                return Err(format!("no primes in [{}, {}]", args.m_min, args.m_max));
            }
            let need = (8.0 * (*primes.last().unwrap() as f64).powf(1.05)).ceil() as usize + 2;
            let stream: CoefficientStream = match args.kind {
                CoeffKindArg::Divisor => divisor_table(need),
                CoeffKindArg::Tau => {
                    let cache = std::env::var_os("BURGESS_TAU_CACHE").map(PathBuf::from);
                    TauTable::load_or_build(need, cache.as_deref())
                        .map_err(|e| e.to_string())?
                        .normalized()
                }
            };
            let cfg = BurgessScanConfig {
                primes,
                chars_per_modulus: args.chars,
                seed: cli.seed,
                grid_density: args.grid_density,
            };
            let report = burgess_scan(&cfg, &stream).map_err(|e| e.to_string())?;
            let ok = report.b_gate_ok && report.lambda_gate_ok;
            match cli.format {
                Format::Json => emit.line(report.json()),
                Format::Csv => {
                    emit.line(burgess_core::lscan::BurgessScanReport::csv_header().into());
                    for row in report.csv_rows() {
                        emit.line(row);
                    }
                }
                Format::Tsv => {
                    for row in report.tsv_rows() {
                        emit.line(row);
                    }
                }
            }
            Ok(ok)
        }
        Command::Lvalue(args) => {
            if !is_prime(args.m) || args.m < 3 {
                return Err(format!("--m {} must be an odd prime", args.m));
            }
            let chi_index = match args.chi.as_str() {
                "quadratic" => (args.m - 1) / 2,
                s => s
                    .parse::<u64>()
                    .map_err(|_| format!("bad --chi value: {s}"))?,
            };
            let oracle = central_value_oracle(args.m, chi_index).map_err(|e| e.to_string())?;
            let mut records = vec![oracle];
            let mut all_pass = true;
            if args.both {
                let smoothed =
                    central_value_smoothed(args.m, chi_index).map_err(|e| e.to_string())?;
                records.push(smoothed);
            }
            if cli.format == Format::Csv {
                emit.line(burgess_core::lscan::CentralValueRecord::csv_header().into());
            }
            for rec in &records {
                match cli.format {
                    Format::Json => emit.line(rec.json_line()),
                    Format::Csv => emit.line(rec.csv_row()),
                    Format::Tsv => emit.line(rec.csv_row().replace(',', "\t")),
                }
            }
            if args.both {
                let gap = (records[0].value() - records[1].value()).norm();
                all_pass = gap <= 1e-6;
                if cli.format == Format::Json {
                    emit.line(
                        serde_json::json!({
                            "record": "lvalue_agreement",
                            "M": args.m,
                            "chi": chi_index,
                            "abs_gap": gap,
                            "pass": all_pass,
                        })
                        .to_string(),
                    );
                }
            }
            Ok(all_pass)
        }
        Command::OffdiagTail(args) => {
            if args.p <= 0.0 {
                return Err("--p must be positive".into());
            }
            let n = args.n.unwrap_or(args.m);
            let bound = offdiag_tail(args.p, args.m, args.big_l, n, args.c_max, args.k);
            match cli.format {
                Format::Json => emit.line(
                    serde_json::json!({
                        "record": "offdiag_tail",
                        "p": args.p,
                        "M": args.m,
                        "L": args.big_l,
                        "N": n,
                        "c_max": args.c_max,
                        "k": args.k,
                        "bound": bound,
                        "negligible": bound < 1e-12,
                    })
                    .to_string(),
                ),
                Format::Csv => {
                    emit.line("p,M,L,N,c_max,k,bound,negligible".into());
                    emit.line(format!(
                        "{},{},{},{},{},{},{},{}",
                        args.p,
                        args.m,
                        args.big_l,
                        n,
                        args.c_max,
                        args.k,
                        bound,
                        bound < 1e-12
                    ));
                }
                Format::Tsv => emit.line(format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    args.p,
                    args.m,
                    args.big_l,
                    n,
                    args.c_max,
                    args.k,
                    bound,
                    bound < 1e-12
                )),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            return usage_error("--threads must be positive");
        }
    }
    let mut emit = Emitter::new();
    let outcome = match cli.threads {
        None => run(&cli, &mut emit),
        Some(t) => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
                Ok(pool) => pool,
                Err(e) => return usage_error(&format!("thread pool: {e}")),
            };
            pool.install(|| run(&cli, &mut emit))
        }
    };
    match outcome {
        Err(msg) => usage_error(&msg),
        Ok(all_pass) => {
            if let Err(e) = emit.flush(cli.out.as_ref()) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
