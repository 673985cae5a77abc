use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use braidcryst::braid::BraidWord;
use braidcryst::burau::{self, Representation};
use braidcryst::crystallography::CrystPresentation;
use braidcryst::finite_image::{FiniteMatrixGroup, GroupOptions, DEFAULT_GUARD};
use braidcryst::free_groups::{self, SubgroupGraph};
use braidcryst::rewriting::{self, AbelianizationContext, CosetContext, Mode};
use braidcryst::{formulas, verification, Error};

const EXIT_FAILED: u8 = 1;
const EXIT_MALFORMED: u8 = 3;
const EXIT_UNSUPPORTED: u8 = 4;
const EXIT_GUARD: u8 = 5;
const EXIT_NOT_IN_SUBGROUP: u8 = 6;
const EXIT_NOT_A_BASIS: u8 = 7;
const EXIT_IO: u8 = 8;

#[derive(Parser)]
#[command(name = "braidcryst")]
#[command(about = "Congruence subgroups of B3, their abelianizations and crystallographic quotients")]
#[command(version)]
struct Cli {
    /// Print a prose summary instead of JSON
    #[arg(long, global = true)]
    human: bool,

    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Level {
    /// Modulus m
    #[arg(long = "mod")]
    modulus: u64,

    /// full-kernel, center-quotient or subgroup-preimage
    #[arg(long, default_value = "full-kernel")]
    mode: String,

    /// Generators of S for subgroup-preimage mode, words separated by ';'
    #[arg(long)]
    generators: Option<String>,

    /// Cap on the number of enumerated elements or cosets
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Burau matrix of a braid at t = -1
    Burau {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Use the reduced representation
        #[arg(long)]
        reduced: bool,
        /// Reduce entries mod M
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Membership in the level-m congruence subgroup
    Member {
        #[arg(long)]
        word: String,
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Enumerate the finite image mod m
    Image {
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Pass to the quotient by the center
        #[arg(long)]
        quotient_center: bool,
        /// Expand BFS levels in parallel
        #[arg(long)]
        parallel: bool,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: usize,
    },
    /// Abelianization of a finite-index subgroup
    Abelianize {
        #[command(flatten)]
        level: Level,
    },
    /// Lattice coordinates of a subgroup element
    Class {
        #[arg(long)]
        word: String,
        #[command(flatten)]
        level: Level,
        /// Basis file, one braid word per line
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Holonomy action matrices of the generators
    Action {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Search for torsion in the extension
    Torsion {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Crystallographic and Bieberbach verdict
    Verdict {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        basis: Option<PathBuf>,
        /// Restrict holonomy to the subgroup generated by these words (';'-separated)
        #[arg(long)]
        subgroup: Option<String>,
    },
    /// Witt's formula for free Lie algebra ranks
    Witt {
        #[arg(long = "M")]
        m: u64,
        #[arg(long)]
        k: u64,
    },
    /// Hirsch length of the free nilpotent quotient, plus one
    Hirsch {
        #[arg(long = "M")]
        m: u64,
        #[arg(long)]
        k: u64,
    },
    /// Free rank 1 + (p-1)p(p+1)/12 at an odd prime level
    #[command(name = "rankM")]
    RankM {
        #[arg(long)]
        p: u64,
    },
    /// Stallings folding of a subgroup of a free group
    Fold {
        #[arg(long)]
        alphabet: usize,
        /// Generator file, one word per line as signed letters
        #[arg(long)]
        gens: PathBuf,
        /// Membership query (repeatable)
        #[arg(long)]
        contains: Vec<String>,
        /// Check against the kernel of F_k -> Z/m1 x ... x Z/mk (comma-separated moduli)
        #[arg(long)]
        kernel: Option<String>,
    },
    /// Run the full check suite
    VerifyPaper {
        /// Run criteria one after another
        #[arg(long)]
        serial: bool,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => EXIT_IO,
            Failure::Usage(_) => 2,
            Failure::Lib(e) => match e {
                Error::Parse { .. }
                | Error::GeneratorIndex { .. }
                | Error::PureIndex { .. }
                | Error::StrandMismatch { .. }
                | Error::WrongStrands { .. } => EXIT_MALFORMED,
                Error::OrderGuard { .. } => EXIT_GUARD,
                Error::NotInSubgroup { .. } => EXIT_NOT_IN_SUBGROUP,
                Error::NotABasis { .. } | Error::Dimension(_) => EXIT_NOT_A_BASIS,
                Error::Modulus(_)
                | Error::Unsupported(_)
                | Error::NotASubgroup(_)
                | Error::NoInvariantForm { .. } => EXIT_UNSUPPORTED,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(s) | Failure::Usage(s) => s.clone(),
        }
    }
}

/// Result of a command: JSON payload, prose summary, and whether every check
/// it ran passed.
struct Outcome {
    result: Value,
    summary: String,
    ok: bool,
    /// Prose for `--human` when it differs from `summary`.
    human: Option<String>,
}

fn outcome<T: Serialize>(result: &T, summary: String) -> Outcome {
    Outcome {
        result: serde_json::to_value(result).expect("serializable"),
        summary,
        ok: true,
        human: None,
    }
}

fn parse_words(spec: &str) -> Result<Vec<BraidWord>, Failure> {
    spec.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| BraidWord::parse(s, 3).map_err(Failure::from))
        .collect()
}

fn mode_of(level: &Level) -> Result<Mode, Failure> {
    match level.mode.as_str() {
        "subgroup-preimage" | "subgroup" => {
            let spec = level.generators.as_deref().ok_or_else(|| {
                Failure::Usage("subgroup-preimage mode needs --generators".into())
            })?;
            Ok(Mode::SubgroupPreimage(parse_words(spec)?))
        }
        other => Ok(other.parse::<Mode>()?),
    }
}

fn options(level: &Level) -> GroupOptions {
    GroupOptions {
        guard: level.guard,
        ..GroupOptions::default()
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_basis(path: Option<&PathBuf>) -> Result<Option<Vec<BraidWord>>, Failure> {
    path.map(|p| Ok(rewriting::parse_basis(&read(p)?)?)).transpose()
}

fn abelianization(level: &Level) -> Result<AbelianizationContext, Failure> {
    let ctx = CosetContext::build_with(level.modulus, mode_of(level)?, &options(level))?;
    Ok(AbelianizationContext::new(ctx))
}

fn presentation(level: &Level, basis: Option<&PathBuf>) -> Result<CrystPresentation, Failure> {
    let words = read_basis(basis)?;
    Ok(CrystPresentation::build_with(
        level.modulus,
        mode_of(level)?,
        &options(level),
        words.as_deref(),
    )?)
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn run(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Burau {
            word,
            n,
            reduced,
            modulus,
        } => {
            let w = BraidWord::parse(word, *n)?;
            let rep = if *reduced {
                Representation::Reduced
            } else {
                Representation::Unreduced
            };
            let exact = burau::image(rep, &w);
            let matrix = match modulus {
                Some(m) => {
                    if *m < 2 || *m > u32::MAX as u64 {
                        return Err(Error::Modulus(*m).into());
                    }
                    json!(exact.reduce_mod(*m as u32))
                }
                None => json!(exact),
            };
            let summary = format!("{rep:?} Burau image of [{w}] on {n} strands: {matrix}");
            Ok(Outcome {
                result: json!({
                    "word": w,
                    "strands": n,
                    "representation": rep,
                    "modulus": modulus,
                    "matrix": matrix,
                }),
                summary,
                ok: true,
                human: None,
            })
        }
        Command::Member { word, modulus, n } => {
            let w = BraidWord::parse(word, *n)?;
            let m = burau::membership(&w, *modulus)?;
            let summary = format!(
                "[{w}] {} the level-{modulus} congruence subgroup{}",
                if m.member { "lies in" } else { "is not in" },
                if m.extended_definition {
                    " (kernel of the unreduced representation)"
                } else {
                    ""
                }
            );
            Ok(outcome(&m, summary))
        }
        Command::Image {
            modulus,
            n,
            quotient_center,
            parallel,
            guard,
        } => {
            let opts = GroupOptions {
                guard: *guard,
                parallel: *parallel,
                ..GroupOptions::default()
            };
            let mut g = FiniteMatrixGroup::with_options(*n, *modulus, &opts)?;
            if *quotient_center {
                g = g.quotient_by_center()?;
            }
            let d = g.dump();
            let summary = format!(
                "order {}, center of order {}, element orders {:?}, matches {}",
                d.order, d.center_order, d.histogram, d.catalog
            );
            Ok(outcome(&d, summary))
        }
        Command::Abelianize { level } => {
            let a = abelianization(level)?;
            let s = a.summary();
            let summary = format!(
                "index {}, {} Schreier generators, H1 = Z^{}{}",
                s.index,
                s.schreier_generators,
                s.free_rank,
                s.invariant_factors
                    .iter()
                    .map(|t| format!(" + Z/{t}"))
                    .collect::<String>()
            );
            Ok(outcome(&s, summary))
        }
        Command::Class { word, level, basis } => {
            let w = BraidWord::parse(word, 3)?;
            let a = abelianization(level)?;
            let words = read_basis(basis.as_ref())?;
            let basis = match &words {
                Some(ws) => rewriting::Basis::Words(rewriting::change_basis(&a, ws)?),
                None => braidcryst::crystallography::default_basis(&a),
            };
            let coords = strings(&basis.coordinates(&a, &w)?);
            let summary = format!("class of [{w}] in the {} basis: ({})", basis.name(), coords.join(", "));
            Ok(Outcome {
                result: json!({ "word": w, "basis": basis.name(), "coordinates": coords }),
                summary,
                ok: true,
                human: None,
            })
        }
        Command::Action { level, basis } => {
            let p = presentation(level, basis.as_ref())?;
            let mut mats = Vec::new();
            let mut summary = format!("lattice rank {}, {} basis\n", p.dimension(), p.basis().name());
            for g in 1..=2 {
                let w = BraidWord::generator(g, 3, true)?;
                let m = p.action_of(&w);
                summary.push_str(&format!("theta(s{g}) = {:?}\n", m.to_string_rows()));
                mats.push(json!({ "generator": w, "matrix": m }));
            }
            Ok(Outcome {
                result: json!({
                    "dimension": p.dimension(),
                    "basis": p.basis().name(),
                    "actions": mats,
                }),
                summary: summary.trim_end().to_string(),
                ok: true,
                human: None,
            })
        }
        Command::Torsion { level, basis } => {
            let p = presentation(level, basis.as_ref())?;
            let t = p.torsion_test(None);
            let summary = if t.torsion_free {
                format!("torsion free ({} cosets checked)", t.checked)
            } else {
                let w = &t.witnesses[0];
                format!(
                    "{} cosets carry torsion; e.g. [{}] has order {}",
                    t.witnesses.len(),
                    w.word,
                    w.order
                )
            };
            Ok(outcome(&t, summary))
        }
        Command::Verdict {
            level,
            basis,
            subgroup,
        } => {
            let p = presentation(level, basis.as_ref())?;
            let v = match subgroup {
                Some(spec) => p.sub_extension(&parse_words(spec)?)?,
                None => p.verdict(),
            };
            let kind = if v.bieberbach {
                "Bieberbach"
            } else if v.crystallographic {
                "crystallographic (with torsion)"
            } else {
                "not crystallographic"
            };
            let mut summary = format!(
                "{kind}: dimension {}, holonomy of order {} ({})",
                v.dimension, v.holonomy_order, v.holonomy_group
            );
            if let Some(r) = &v.recommendation {
                summary.push_str(&format!("; {r}"));
            }
            Ok(outcome(&v, summary))
        }
        Command::Witt { m, k } => {
            if *m < 1 || *k < 1 {
                return Err(Error::Unsupported("witt needs M >= 1 and k >= 1".into()).into());
            }
            let r = formulas::witt_rank(*m, *k).to_string();
            Ok(Outcome {
                summary: format!("witt_rank({m}, {k}) = {r}"),
                result: json!({ "M": m, "k": k, "witt_rank": r }),
                ok: true,
                human: None,
            })
        }
        Command::Hirsch { m, k } => {
            if *m < 1 {
                return Err(Error::Unsupported("hirsch needs M >= 1".into()).into());
            }
            let h = formulas::hirsch_length(*m, *k)?.to_string();
            Ok(Outcome {
                summary: format!("hirsch_length({m}, {k}) = {h}"),
                result: json!({ "M": m, "k": k, "hirsch_length": h }),
                ok: true,
                human: None,
            })
        }
        Command::RankM { p } => {
            let r = formulas::rank_m(*p)?;
            Ok(Outcome {
                summary: format!("M({p}) = {r}"),
                result: json!({ "p": p, "M": r }),
                ok: true,
                human: None,
            })
        }
        Command::Fold {
            alphabet,
            gens,
            contains,
            kernel,
        } => fold(*alphabet, &read(gens)?, contains, kernel.as_deref()),
        Command::VerifyPaper { serial } => {
            let results = verification::run_all(!serial);
            let ok = results.iter().all(|r| r.passed);
            let mut summary = String::new();
            let mut human = String::new();
            let mut rows = Vec::new();
            for r in &results {
                let verdict = if r.passed { "PASS" } else { "FAIL" };
                summary.push_str(&format!("{:>2}  {verdict}  {}\n", r.id, r.title));
                human.push_str(&format!(
                    "{:>2}  {verdict}  {:<46} {:>6} ms (limit {} ms)\n",
                    r.id, r.title, r.elapsed_ms, r.limit_ms
                ));
                for c in &r.checks {
                    human.push_str(&format!(
                        "      {} {}: {}\n",
                        if c.passed { "ok  " } else { "FAIL" },
                        c.claim,
                        c.detail
                    ));
                }
                // Timings stay out of the JSON so that reports are reproducible.
                rows.push(json!({
                    "id": r.id,
                    "title": r.title,
                    "passed": r.passed,
                    "limit_ms": r.limit_ms,
                    "checks": r.checks,
                }));
            }
            Ok(Outcome {
                result: json!({ "criteria": rows, "all_passed": ok }),
                summary: summary.trim_end().to_string(),
                ok,
                human: Some(human.trim_end().to_string()),
            })
        }
    }
}

fn parse_free_word(line: &str, alphabet: usize) -> Result<Vec<i32>, Failure> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let a: i32 = t.parse().map_err(|_| {
                Failure::Lib(Error::Parse {
                    text: line.to_string(),
                    reason: format!("bad letter {t:?}"),
                })
            })?;
            if a == 0 || a.unsigned_abs() as usize > alphabet {
                return Err(Failure::Lib(Error::Parse {
                    text: line.to_string(),
                    reason: format!("letter {a} outside the alphabet of size {alphabet}"),
                }));
            }
            Ok(a)
        })
        .collect()
}

fn fold(alphabet: usize, text: &str, queries: &[String], kernel: Option<&str>) -> Result<Outcome, Failure> {
    if alphabet == 0 {
        return Err(Error::Unsupported("alphabet must be nonempty".into()).into());
    }
    let gens: Vec<Vec<i32>> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| parse_free_word(l, alphabet))
        .collect::<Result<_, _>>()?;
    let g = SubgroupGraph::build_and_fold(alphabet, &gens);
    let membership: Vec<Value> = queries
        .iter()
        .map(|q| {
            let w = parse_free_word(q, alphabet)?;
            Ok(json!({ "word": w, "member": g.contains(&w) }))
        })
        .collect::<Result<_, Failure>>()?;
    let verdict = match kernel {
        Some(spec) => {
            let moduli: Vec<u64> = spec
                .split(',')
                .map(|t| t.trim().parse::<u64>().ok().filter(|&m| m >= 1))
                .collect::<Option<_>>()
                .ok_or_else(|| Failure::Usage(format!("bad moduli {spec:?}")))?;
            if moduli.len() != alphabet {
                return Err(Failure::Usage("give one modulus per letter".into()));
            }
            Some(free_groups::kernel_check(alphabet, &gens, &moduli))
        }
        None => None,
    };
    let index = g
        .index()
        .map_or_else(|| "infinite".to_string(), |i| i.to_string());
    let mut summary = format!("rank {}, index {index}", g.rank());
    if let Some(v) = &verdict {
        summary.push_str(if v.certified {
            "; generates exactly the kernel"
        } else {
            "; does not generate the kernel"
        });
    }
    Ok(Outcome {
        result: json!({
            "graph": g.dump(),
            "membership": membership,
            "kernel_check": verdict,
        }),
        summary,
        ok: true,
        human: None,
    })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (result, status) = match run(&cli.command) {
        Ok(o) => {
            let status = if o.ok { 0 } else { EXIT_FAILED };
            (Ok(o), status)
        }
        Err(f) => {
            let code = f.code();
            (Err(f), code)
        }
    };
    let text = match &result {
        Ok(o) if cli.human => o.human.clone().unwrap_or_else(|| o.summary.clone()),
        Ok(o) => serde_json::to_string_pretty(&json!({
            "command": args,
            "result": o.result,
            "summary": o.summary,
            "status": status,
        }))
        .expect("serializable"),
        Err(f) => {
            eprintln!("error: {}", f.message());
            if cli.human {
                String::new()
            } else {
                serde_json::to_string_pretty(&json!({
                    "command": args,
                    "error": f.message(),
                    "status": status,
                }))
                .expect("serializable")
            }
        }
    };
    if !text.is_empty() {
        if let Err(f) = emit(&text, cli.out.as_ref()) {
            eprintln!("error: {}", f.message());
            return ExitCode::from(f.code());
        }
    }
    ExitCode::from(status)
}
