use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qutrit_msd::classical::{parse_classical, TERNARY_CODE_HEADER};
use qutrit_msd::distill::{profile, DistillationProfile};
use qutrit_msd::enumerators::{
    complete_wenum, macwilliams, simple_wenum_css_fast, simple_wenum_naive, symbol_index, EnumeratorKind,
    WeightEnumerator, DEFAULT_MEM_CAP,
};
use qutrit_msd::oracle::{run_suite, OracleConfig};
use qutrit_msd::pipeline::{ingest, render_report, search, shorten_candidates, CodeInput, ReportFormat, ScreenOptions};
use qutrit_msd::stabilizer::{css_from_classical, parse_stabilizer, LocalRotation, StabilizerCode};
use qutrit_msd::{Error, Result};

#[derive(Parser)]
#[command(name = "qmsd", version, about = "Screen qutrit stabilizer codes for strange-state distillation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Naive,
    Fast,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Simple (or complete) weight enumerator of a code's stabilizer group.
    Wenum {
        code_file: PathBuf,
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[arg(long)]
        complete: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MEM_CAP)]
        mem_cap: u64,
    },
    /// MacWilliams transform between A(z) and B(z).
    Macwilliams {
        wenum_file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSS stabilizer code of a self-orthogonal ternary code.
    Css {
        code_file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shorten a stabilizer state to [[n-1,1]] codes.
    Shorten {
        stabilizer_file: PathBuf,
        /// 1-based coordinate; all coordinates when omitted.
        #[arg(long)]
        coord: Option<usize>,
        #[arg(long)]
        all_rotations: bool,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Distillation profile of one code or enumerator.
    Distill {
        #[arg(required_unless_present = "enumerator", conflicts_with = "enumerator")]
        code_file: Option<PathBuf>,
        #[arg(long)]
        enumerator: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        /// Exit with status 2 when the code does not distill.
        #[arg(long)]
        require_distill: bool,
    },
    /// Screen every code under a directory.
    Search {
        dir: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = DEFAULT_MEM_CAP)]
        mem_cap: u64,
        /// Treat inputs as stabilizer states and screen their shortenings.
        #[arg(long)]
        shorten: bool,
        /// Write zero wall times so reports are byte-reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Randomised dense-matrix checks of the enumerator formulas.
    Oracle {
        /// Qudit count or inclusive range such as 2..4.
        #[arg(long, default_value = "2..3")]
        n: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

enum Loaded {
    Classical(qutrit_msd::ClassicalTernaryCode),
    Quantum(StabilizerCode),
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn load_code(path: &Path) -> Result<Loaded> {
    let text = read(path)?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    if first == Some(TERNARY_CODE_HEADER) {
        parse_classical(&text).map(Loaded::Classical)
    } else {
        parse_stabilizer(&text).map(Loaded::Quantum)
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn complete_text(code: &StabilizerCode) -> Result<String> {
    let c = complete_wenum(code)?;
    let mut s = String::new();
    writeln!(s, "# exponents of y_uv in order 00 01 02 10 11 12 20 21 22, then coefficient").unwrap();
    writeln!(s, "n={} terms={}", c.n, c.terms.len()).unwrap();
    for (e, coef) in &c.terms {
        let exps: Vec<String> = (0..3u8)
            .flat_map(|u| (0..3u8).map(move |v| symbol_index(u, v)))
            .map(|i| e[i].to_string())
            .collect();
        writeln!(s, "{} {coef}", exps.join(" ")).unwrap();
    }
    Ok(s)
}

fn cmd_wenum(path: &Path, method: Option<Method>, complete: bool, out: Option<&Path>, mem_cap: u64) -> Result<()> {
    let loaded = load_code(path)?;
    let quantum = match &loaded {
        Loaded::Classical(c) => css_from_classical(c)?,
        Loaded::Quantum(q) => q.clone(),
    };
    if complete {
        return emit(&complete_text(&quantum)?, out);
    }
    let a = match (method, &loaded) {
        (Some(Method::Naive), _) | (None, Loaded::Quantum(_)) => simple_wenum_naive(&quantum)?,
        (Some(Method::Fast) | None, Loaded::Classical(c)) => simple_wenum_css_fast(c, mem_cap)?,
        (Some(Method::Fast), Loaded::Quantum(_)) => {
            return Err(Error::Unsupported("the fast path needs a classical (CSS) input".into()))
        }
    };
    emit(&a.to_text(), out)
}

fn cmd_macwilliams(path: &Path, out: Option<&Path>) -> Result<()> {
    let e = WeightEnumerator::parse(&read(path)?)?;
    let k = match e.kind {
        EnumeratorKind::A => e.k,
        EnumeratorKind::B => -e.k,
        other => return Err(Error::Unsupported(format!("MacWilliams of a {} enumerator", other.as_str()))),
    };
    emit(&macwilliams(&e, e.n, k)?.to_text(), out)
}

fn cmd_shorten(path: &Path, coord: Option<usize>, all_rotations: bool, out_dir: Option<&Path>) -> Result<()> {
    let state = match load_code(path)? {
        Loaded::Quantum(q) => q,
        Loaded::Classical(_) => return Err(Error::InvalidInput("shorten needs a STABILIZER-CODE file".into())),
    };
    let coords: Vec<usize> = match coord {
        Some(0) => return Err(Error::InvalidInput("coordinates are 1-based".into())),
        Some(c) => vec![c - 1],
        None => (0..state.n()).collect(),
    };
    let rotations = if all_rotations { LocalRotation::all() } else { vec![LocalRotation::identity()] };
    let mut produced = 0;
    for &c in &coords {
        for rot in &rotations {
            let code = match state.shorten(c, rot) {
                Ok(code) => code,
                Err(e @ Error::DegenerateShortening { .. }) => {
                    eprintln!("coordinate {}, rotation {}: {e}", c + 1, rot.index);
                    continue;
                }
                Err(e) => return Err(e),
            };
            produced += 1;
            match out_dir {
                Some(dir) => {
                    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
                    let p = dir.join(format!("{}.stab", code.id));
                    std::fs::write(&p, code.to_text()).map_err(|e| Error::io(&p, e))?;
                }
                None => print!("{}", code.to_text()),
            }
        }
    }
    if produced == 0 {
        return Err(Error::InvalidInput("no non-degenerate shortening".into()));
    }
    Ok(())
}

fn profile_text(id: &str, n: usize, p: &DistillationProfile) -> String {
    let mut s = String::new();
    writeln!(s, "code: {id}").unwrap();
    writeln!(s, "n: {n}").unwrap();
    writeln!(s, "map: {}", p.map).unwrap();
    writeln!(s, "B(-1/2): {}", p.b_at_minus_half).unwrap();
    writeln!(s, "fixed point condition: {}", p.conditions.fixed_point()).unwrap();
    writeln!(s, "first order condition: {}", p.conditions.first_order()).unwrap();
    writeln!(s, "second order condition: {}", p.conditions.second_order()).unwrap();
    match &p.exponent {
        Some(e) => writeln!(s, "noise exponent: {} (leading coefficient {})", e.delta, e.leading).unwrap(),
        None => writeln!(s, "noise exponent: undefined (pole at eps = 0)").unwrap(),
    }
    writeln!(s, "classification: {}", p.classification).unwrap();
    writeln!(s, "distills: {}", p.distills).unwrap();
    writeln!(s, "threshold: {}", p.threshold.decimal()).unwrap();
    writeln!(s, "success probability at eps = 0: {}", p.success_at_zero).unwrap();
    s
}

fn cmd_distill(code_file: Option<&Path>, enumerator: Option<&Path>, json: bool, require: bool) -> Result<ExitCode> {
    let (id, a) = match (code_file, enumerator) {
        (_, Some(p)) => {
            let a = WeightEnumerator::parse(&read(p)?)?;
            if a.kind != EnumeratorKind::A {
                return Err(Error::InvalidInput("--enumerator expects a kind=A file".into()));
            }
            (p.display().to_string(), a)
        }
        (Some(p), None) => match load_code(p)? {
            Loaded::Classical(c) => (c.id.clone(), simple_wenum_css_fast(&c, DEFAULT_MEM_CAP)?),
            Loaded::Quantum(q) => (q.id.clone(), simple_wenum_naive(&q)?),
        },
        (None, None) => return Err(Error::InvalidInput("need a code file or --enumerator".into())),
    };
    if a.k != 1 {
        return Err(Error::Unsupported(format!("distillation needs k = 1, got k = {}", a.k)));
    }
    let b = macwilliams(&a, a.n, a.k)?;
    let p = profile(&a, &b, a.n, a.k)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&p.record()).expect("profile serialises"));
    } else {
        print!("{}", profile_text(&id, a.n, &p));
    }
    Ok(if require && !p.distills { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    dir: &Path,
    report: Option<&Path>,
    format: Format,
    jobs: usize,
    mem_cap: u64,
    shorten: bool,
    no_timing: bool,
) -> Result<()> {
    let ingested = ingest(dir)?;
    for e in &ingested.errors {
        eprintln!("{}:{}: {}", e.source, e.line, e.message);
    }
    let codes: Vec<CodeInput> = if shorten {
        let states: Vec<StabilizerCode> = ingested
            .codes
            .into_iter()
            .filter_map(|c| match c {
                CodeInput::Quantum(q) if q.k() == 0 => Some(q),
                other => {
                    eprintln!("{}: not a stabilizer state, skipped", other.id());
                    None
                }
            })
            .collect();
        shorten_candidates(&states)?.into_iter().map(CodeInput::Quantum).collect()
    } else {
        ingested.codes
    };
    let options = ScreenOptions { mem_cap, timing: !no_timing };
    let mut result = search(&codes, jobs, &options)?;
    result.ingest_errors = ingested.errors;
    for f in &result.failures {
        eprintln!("{}: {}", f.id, f.message);
    }
    let fmt = match format {
        Format::Csv => ReportFormat::Csv,
        Format::Json => ReportFormat::Json,
    };
    emit(&render_report(&result, fmt), report)?;
    if let Some(r) = result.success_threshold_spearman {
        eprintln!("spearman(success, threshold) = {r:.4}");
    }
    eprintln!(
        "{} records, {} distinct enumerators, {} failures",
        result.records.len(),
        result.distinct_enumerators,
        result.failures.len()
    );
    Ok(())
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidInput(format!("bad qudit range {s:?}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        }
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            Ok((n, n))
        }
    }
}

fn cmd_oracle(n: &str, trials: usize, seed: u64, tol: f64) -> Result<ExitCode> {
    let (min_n, max_n) = parse_range(n)?;
    let report = run_suite(&OracleConfig { seed, trials, min_n, max_n, tol })?;
    println!(
        "{} trials, max residual {:.3e}, {} failures",
        report.trials.len(),
        report.max_residual,
        report.failures
    );
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Wenum { code_file, method, complete, out, mem_cap } => {
            cmd_wenum(&code_file, method, complete, out.as_deref(), mem_cap)?
        }
        Command::Macwilliams { wenum_file, out } => cmd_macwilliams(&wenum_file, out.as_deref())?,
        Command::Css { code_file, out } => {
            let c = parse_classical(&read(&code_file)?)?;
            emit(&css_from_classical(&c)?.to_text(), out.as_deref())?
        }
        Command::Shorten { stabilizer_file, coord, all_rotations, out_dir } => {
            cmd_shorten(&stabilizer_file, coord, all_rotations, out_dir.as_deref())?
        }
        Command::Distill { code_file, enumerator, json, require_distill } => {
            return cmd_distill(code_file.as_deref(), enumerator.as_deref(), json, require_distill)
        }
        Command::Search { dir, report, format, jobs, mem_cap, shorten, no_timing } => {
            cmd_search(&dir, report.as_deref(), format, jobs, mem_cap, shorten, no_timing)?
        }
        Command::Oracle { n, trials, seed, tol } => return cmd_oracle(&n, trials, seed, tol),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
