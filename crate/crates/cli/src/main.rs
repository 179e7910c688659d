use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jsdet::charmatrix::{build_char_matrix, CharMatrixSpec, Variant};
use jsdet::exactla::{det_exact, rank_kernel, IntMatrix};
use jsdet::finitefield::FieldCtx;
use jsdet::modarith::OddModulus;
use jsdet::polyalg::{Poly, Ring};
use jsdet::quadforms::{build_form_matrix, row_charsum, FormDetSpec, FormKind};
use jsdet::quintic::{
    ap_mod_formula, bivariate_quintic_sweep, quintic_sum_ap, theorem51_condition, QuinticSpec,
};
use jsdet::repcong::{cornacchia, lemma22_polycheck, lemma31_check};
use jsdet::verify::{run_suite_cached, to_jsonl, Cache, Summary, SuiteId, SuiteSpec, VerifyRecord};

/// Exact determinants with Jacobi-symbol entries and the character sums
/// behind them.
#[derive(Parser)]
#[command(name = "jsdet", version)]
struct Cli {
    /// Attach `elapsed_ms` to every record.
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lemma {
    #[value(name = "2.2")]
    L22,
    #[value(name = "3.1")]
    L31,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named suite and emit one record per parameter tuple.
    Verify {
        #[arg(long)]
        suite: SuiteId,
        /// Upper bound on the modulus, prime, or field order.
        #[arg(long)]
        max_n: Option<u64>,
        /// Explicit moduli, primes, or field orders, comma separated.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample count for the sampled suites.
        #[arg(long)]
        samples: Option<usize>,
        /// JSON-lines journal of earlier records to reuse and extend.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exact determinant of (c,d)_n or [c,d]_n.
    Det {
        #[arg(long, allow_hyphen_values = true)]
        c: i64,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value = "punctured")]
        kind: FormKind,
        /// Also write the matrix as a fixture file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Row sum of (j/n)((i^2 + cij + dj^2)/n) over j.
    Charsum {
        #[arg(long, allow_hyphen_values = true)]
        c: i64,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
        #[arg(long)]
        n: u64,
    },
    /// Determinant, rank, and kernel dimension of M(P) or M0(P) over F_q.
    Charmatrix {
        #[arg(long)]
        q: u64,
        /// Polynomial in `z` (or `x`), e.g. "z^2 + 5z + 5" or "[1,2]*z + 3".
        #[arg(long)]
        poly: String,
        #[arg(long, default_value = "M")]
        variant: Variant,
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Normalized representation p = x^2 + m y^2.
    Repr {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u64,
    },
    /// Binomial-sum congruences mod p^2.
    Congruence {
        #[arg(long, value_enum)]
        lemma: Lemma,
        #[arg(long)]
        p: u64,
    },
    /// Quintic sum A_p with its closed form mod p.
    Quintic {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, allow_hyphen_values = true)]
        c: i64,
        #[arg(long)]
        p: u64,
        /// Also check the point-count condition on y^2 = x^4 + x^2 + gamma.
        #[arg(long)]
        theorem51: bool,
    },
    /// Table of sum_x (x^5 + c1 x^3 y + c2 x y^2 / p) over y.
    Sweep {
        #[arg(long, allow_hyphen_values = true)]
        c1: i64,
        #[arg(long, allow_hyphen_values = true)]
        c2: i64,
        #[arg(long)]
        p: u64,
    },
    /// Exact determinant and rank of a matrix fixture file.
    Matrix {
        #[arg(long)]
        file: PathBuf,
    },
}

/// A failed check, as opposed to a usage or input error.
struct Failed;

type CmdResult = Result<std::result::Result<(), Failed>, jsdet::Error>;

fn emit(params: Value, value: Value, start: Instant, timings: bool) {
    let mut rec = json!({"params": params, "value": value});
    if timings {
        rec["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    println!("{rec}");
}

fn verdict(ok: bool) -> std::result::Result<(), Failed> {
    if ok {
        Ok(())
    } else {
        Err(Failed)
    }
}

fn write_matrix(path: &PathBuf, m: &IntMatrix) -> jsdet::Result<()> {
    Ok(fs::write(path, m.to_string())?)
}

fn matrix_report(m: &IntMatrix) -> jsdet::Result<Value> {
    let rank = rank_kernel(m);
    Ok(json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "det": det_exact(m)?.to_string(),
        "rank": rank.rank,
        "kernel_dim": rank.kernel_dim,
        "rank_method": rank.method,
    }))
}

fn csv_report(records: &[VerifyRecord]) -> jsdet::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| jsdet::Error::Io(e.to_string());
    w.write_record(["suite", "params", "verdict", "witness", "elapsed_ms"]).map_err(io)?;
    for r in records {
        let verdict = serde_json::to_value(r.verdict).expect("serializable");
        w.write_record([
            r.suite.as_str().to_string(),
            r.params.to_string(),
            verdict.as_str().unwrap_or_default().to_string(),
            r.witness.to_string(),
            r.elapsed_ms.map(|t| t.to_string()).unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| jsdet::Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn run(cli: Cli) -> CmdResult {
    let start = Instant::now();
    let timings = cli.timings;
    match cli.command {
        Command::Verify {
            suite,
            max_n,
            primes,
            seed,
            samples,
            cache,
            format,
            output,
        } => {
            let spec = SuiteSpec {
                suite,
                max_n,
                values: primes,
                seed,
                samples,
                timings,
            };
            let cache = cache.map(Cache::open).transpose()?;
            if let Some(c) = &cache {
                if c.corrupt_lines() > 0 {
                    eprintln!("warning: skipped {} corrupt cache lines", c.corrupt_lines());
                }
            }
            let outcome = run_suite_cached(&spec, cache.as_ref())?;
            let report = match format {
                Format::Json => to_jsonl(&outcome.records),
                Format::Csv => csv_report(&outcome.records)?,
            };
            match output {
                Some(path) => fs::write(path, report)?,
                None => std::io::stdout().write_all(report.as_bytes())?,
            }
            let s = Summary::of(&outcome.records);
            eprintln!(
                "{suite}: pass {} fail {} not-applicable {} (computed {}, cached {})",
                s.pass, s.fail, s.not_applicable, outcome.computed, outcome.cache_hits
            );
            Ok(verdict(s.fail == 0))
        }
        Command::Det { c, d, n, kind, dump } => {
            let spec = FormDetSpec::new(c, d, n, kind)?;
            let m = build_form_matrix(&spec);
            if let Some(path) = &dump {
                write_matrix(path, &m)?;
            }
            let det = det_exact(&m)?;
            emit(json!({"c": c, "d": d, "n": n, "kind": kind}), json!(det.to_string()), start, timings);
            Ok(Ok(()))
        }
        Command::Charsum { c, d, i, n } => {
            OddModulus::new(n)?;
            let v = row_charsum(c, d, i, n)?;
            emit(json!({"c": c, "d": d, "i": i, "n": n}), json!(v), start, timings);
            Ok(Ok(()))
        }
        Command::Charmatrix { q, poly, variant, dump } => {
            let ctx = FieldCtx::from_order(q)?;
            let p = Poly::parse(&poly, Ring::Field(ctx))?;
            let m = build_char_matrix(&CharMatrixSpec::new(p.clone(), variant)?);
            if let Some(path) = &dump {
                write_matrix(path, &m)?;
            }
            emit(
                json!({"q": q, "poly": p.to_string(), "variant": variant}),
                matrix_report(&m)?,
                start,
                timings,
            );
            Ok(Ok(()))
        }
        Command::Repr { p, m } => {
            let r = cornacchia(p, m)?;
            emit(json!({"p": p, "m": m}), json!(r), start, timings);
            Ok(Ok(()))
        }
        Command::Congruence { lemma, p } => {
            let (name, value, holds) = match lemma {
                Lemma::L22 => {
                    let v = lemma22_polycheck(p)?;
                    ("2.2", serde_json::to_value(&v).expect("serializable"), v.holds)
                }
                Lemma::L31 => {
                    let v = lemma31_check(p)?;
                    ("3.1", serde_json::to_value(&v).expect("serializable"), v.holds)
                }
            };
            emit(json!({"lemma": name, "p": p}), value, start, timings);
            Ok(verdict(holds))
        }
        Command::Quintic { a, b, c, p, theorem51 } => {
            let spec = QuinticSpec::new(a, b, c, p)?;
            let mut value = json!({
                "ap": quintic_sum_ap(&spec),
                "ap_mod_formula": ap_mod_formula(&spec)?,
            });
            let mut ok = true;
            if theorem51 {
                let v = theorem51_condition(&spec)?;
                ok = v.holds;
                value["theorem51"] = serde_json::to_value(&v).expect("serializable");
            }
            emit(json!({"a": a, "b": b, "c": c, "p": p}), value, start, timings);
            Ok(verdict(ok))
        }
        Command::Sweep { c1, c2, p } => {
            let table = bivariate_quintic_sweep(c1, c2, p)?;
            let all_zero = table.iter().all(|&v| v == 0);
            emit(
                json!({"c1": c1, "c2": c2, "p": p}),
                json!({"table": table, "all_zero": all_zero}),
                start,
                timings,
            );
            Ok(Ok(()))
        }
        Command::Matrix { file } => {
            let m: IntMatrix = fs::read_to_string(&file)?.parse()?;
            emit(json!({"file": file.display().to_string()}), matrix_report(&m)?, start, timings);
            Ok(Ok(()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failed)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
