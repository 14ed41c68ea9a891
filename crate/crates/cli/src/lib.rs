//! The `heislab` command line.
//!
//! Exit codes: 0 holds or success, 1 violated, 2 inconclusive, 3 usage or
//! input error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use heislab::formula::{
    builtin, classify, parse, refute_universal, search_forall_exists, witness_existential, Builtin, Formula,
    FormulaClass, SearchOutcome,
};
use heislab::nilform::{discriminate_to_h, parse_word, DEFAULT_DISCRIMINATION_CAP};
use heislab::reprs::{
    adjoin_center, adjoin_y, appropriateness_check, big_powers_retraction, c_rank, extend_centralizer, fixtures,
    lame_check, lame_check_def1, nzct_check, parse_config, print_config, sigma_check, solve_s, solve_t, tau_check,
    Appropriateness, Method, Representation, Status, SystemSolution, Verdict,
};
use heislab::{parse_element, Generator, UT3Elem};
use serde_json::json;

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

const DEFAULT_BOUND: u32 = 2;
const DEFAULT_NZCT_BOUND: u32 = 3;
const DEFAULT_DEGREE_BOUND: u32 = 3;
const DEFAULT_MAX_BOUND: u32 = 6;

#[derive(Parser, Debug)]
#[command(
    name = "heislab",
    version,
    about = "Exact checks for subgroups of UT3 over residually-Z rings"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Representation config file, or the name of a bundled example.
    #[arg(long, global = true)]
    pub rep: Option<String>,
    #[arg(long, global = true)]
    pub json: bool,
    /// Ball radius for searches (coefficient bound for nzct).
    #[arg(long, global = true)]
    pub bound: Option<u32>,
    #[arg(long, global = true)]
    pub degree_bound: Option<u32>,
    /// Accepted for reproducible scripts; no verdict depends on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide a builtin or sentence, exactly when possible.
    Check {
        sentence: String,
    },
    /// Search the ball for a counterexample to a universal sentence.
    Refute {
        sentence: String,
    },
    /// Search the ball for a witness of an existential sentence.
    Witness {
        sentence: String,
    },
    Lame {
        /// Use the element-wise definition instead of the lattice conditions.
        #[arg(long)]
        def1: bool,
    },
    Tau,
    Sigma,
    Nzct,
    SolveS {
        #[arg(long)]
        z: String,
    },
    SolveT {
        #[arg(long)]
        z: String,
    },
    Crank,
    /// Free rank-one centralizer extension at a1 or a2.
    Extend {
        #[arg(long, value_enum)]
        at: At,
        #[arg(long, default_value = "theta")]
        name: String,
    },
    AdjoinY {
        #[arg(long)]
        z: String,
    },
    AdjoinCenter,
    /// Bounded check that the generator entries generate the ring.
    Appropriate,
    /// Retraction of a free 2-nilpotent group onto H keeping targets nontrivial.
    Discriminate {
        #[arg(long)]
        targets: PathBuf,
    },
    /// Smallest integer specialization keeping targets nontrivial.
    Bigpowers {
        #[arg(long)]
        targets: PathBuf,
        /// Indeterminate to specialize; defaults to the only one.
        #[arg(long)]
        var: Option<String>,
    },
    /// Print a bundled example and its verdicts.
    Example {
        name: String,
    },
    /// Echo the canonical form of a sentence or config.
    Parse {
        file: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum At {
    A1,
    A2,
}

/// What the process prints and returns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report {
            code: EXIT_HOLDS,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(message: impl std::fmt::Display) -> Self {
        Report {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

type Res<T> = Result<T, String>;

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Holds => EXIT_HOLDS,
        Status::Violated => EXIT_VIOLATED,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

pub fn run<I, T>(argv: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Report {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Report::ok(text)
            };
        }
    };
    execute(&cfg).unwrap_or_else(Report::usage)
}

fn max_bound() -> Res<u32> {
    match std::env::var("HEISLAB_MAX_BOUND") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("HEISLAB_MAX_BOUND is not a number: {s}")),
        Err(_) => Ok(DEFAULT_MAX_BOUND),
    }
}

fn bound_or(cfg: &RunConfig, default: u32) -> Res<u32> {
    let b = cfg.bound.unwrap_or(default);
    if b == 0 {
        return Err("--bound must be at least 1".into());
    }
    let max = max_bound()?;
    if b > max {
        return Err(format!("--bound {b} exceeds HEISLAB_MAX_BOUND = {max}"));
    }
    Ok(b)
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_rep(cfg: &RunConfig) -> Res<Representation> {
    let Some(spec) = &cfg.rep else {
        return Err("this command needs --rep <config>".into());
    };
    let path = Path::new(spec);
    if path.exists() {
        return parse_config(&read(path)?).map_err(|e| format!("{spec}: {e}"));
    }
    fixtures::by_name(spec).ok_or_else(|| format!("{spec}: no such file or bundled example"))
}

/// A builtin name, a file holding a sentence, or the sentence itself.
fn resolve_sentence(arg: &str) -> Res<(String, Option<Builtin>, Formula)> {
    if let Ok(b) = Builtin::from_str(arg) {
        return Ok((b.to_string(), Some(b), builtin(b)));
    }
    let path = Path::new(arg);
    let text = if path.is_file() { read(path)? } else { arg.to_string() };
    let f = parse(text.trim()).map_err(|e| format!("{arg}: {e}"))?;
    Ok(("formula".into(), None, f))
}

fn emit(cfg: &RunConfig, rep: &Representation, v: &Verdict) -> Report {
    let stdout = if cfg.json {
        format!("{}\n", v.to_json(rep.ring()))
    } else {
        v.to_text()
    };
    Report {
        code: exit_code(v.status),
        stdout,
        stderr: String::new(),
    }
}

fn emit_config(cfg: &RunConfig, rep: &Representation, warnings: &[String]) -> Report {
    let config = print_config(rep);
    if cfg.json {
        return Report::ok(format!("{}\n", json!({ "config": config, "warnings": warnings })));
    }
    let mut out = String::new();
    for w in warnings {
        out.push_str(&format!("# warning: {w}\n"));
    }
    out.push_str(&config);
    Report::ok(out)
}

fn execute(cfg: &RunConfig) -> Res<Report> {
    match &cfg.command {
        Command::Check { sentence } => {
            let rep = load_rep(cfg)?;
            let (name, b, f) = resolve_sentence(sentence)?;
            let v = match b.and_then(|b| exact(&rep, b, cfg)) {
                Some(v) => v?,
                None => search(&rep, &name, &f, bound_or(cfg, DEFAULT_BOUND)?, None)?,
            };
            Ok(emit(cfg, &rep, &v))
        }
        Command::Refute { sentence } => {
            let rep = load_rep(cfg)?;
            let (name, _, f) = resolve_sentence(sentence)?;
            let v = search(&rep, &name, &f, bound_or(cfg, DEFAULT_BOUND)?, Some(true))?;
            Ok(emit(cfg, &rep, &v))
        }
        Command::Witness { sentence } => {
            let rep = load_rep(cfg)?;
            let (name, _, f) = resolve_sentence(sentence)?;
            let v = search(&rep, &name, &f, bound_or(cfg, DEFAULT_BOUND)?, Some(false))?;
            Ok(emit(cfg, &rep, &v))
        }
        Command::Lame { def1 } => {
            let rep = load_rep(cfg)?;
            let v = if *def1 { lame_check_def1(&rep) } else { lame_check(&rep) };
            Ok(emit(cfg, &rep, &v))
        }
        Command::Tau => {
            let rep = load_rep(cfg)?;
            Ok(emit(cfg, &rep, &tau_check(&rep)))
        }
        Command::Sigma => {
            let rep = load_rep(cfg)?;
            Ok(emit(cfg, &rep, &sigma_check(&rep)))
        }
        Command::Nzct => {
            let rep = load_rep(cfg)?;
            let v = nzct_check(&rep, bound_or(cfg, DEFAULT_NZCT_BOUND)?);
            Ok(emit(cfg, &rep, &v))
        }
        Command::SolveS { z } | Command::SolveT { z } => {
            let rep = load_rep(cfg)?;
            let z = parse_target(&rep, z)?;
            let is_s = matches!(cfg.command, Command::SolveS { .. });
            let (check, var, sol) = if is_s {
                ("S", "y", solve_s(&rep, &z))
            } else {
                ("T", "x", solve_t(&rep, &z))
            };
            let v = match sol.map_err(|e| e.to_string())? {
                SystemSolution::Solvable { witness, exponents } => {
                    let exps: Vec<String> = exponents.iter().map(|e| e.to_string()).collect();
                    Verdict::new(check, Status::Holds, Method::ExactLattice)
                        .with_witness(var, witness)
                        .with_note(format!("generator exponents [{}]", exps.join(", ")))
                }
                SystemSolution::Unsolvable { reason } => {
                    Verdict::new(check, Status::Violated, Method::ExactLattice).with_note(reason)
                }
            };
            Ok(emit(cfg, &rep, &v))
        }
        Command::Crank => {
            let rep = load_rep(cfg)?;
            let lat = rep.lattices();
            let (r1, r2, c) = (lat.a1.rank(), lat.a2.rank(), c_rank(&rep));
            Ok(Report::ok(if cfg.json {
                format!("{}\n", json!({ "c_rank": c, "rank_a1": r1, "rank_a2": r2 }))
            } else {
                format!("c_rank = {c}\nrank A1 = {r1}\nrank A2 = {r2}\n")
            }))
        }
        Command::Extend { at, name } => {
            let rep = load_rep(cfg)?;
            let at = match at {
                At::A1 => Generator::A1,
                At::A2 => Generator::A2,
            };
            let e = extend_centralizer(&rep, at, name).map_err(|e| e.to_string())?;
            Ok(emit_config(cfg, &e, &[]))
        }
        Command::AdjoinY { z } => {
            let rep = load_rep(cfg)?;
            let z = parse_target(&rep, z)?;
            let (g1, warnings) = adjoin_y(&rep, &z).map_err(|e| e.to_string())?;
            Ok(emit_config(cfg, &g1, &warnings))
        }
        Command::AdjoinCenter => {
            let rep = load_rep(cfg)?;
            Ok(emit_config(cfg, &adjoin_center(&rep), &[]))
        }
        Command::Appropriate => {
            let rep = load_rep(cfg)?;
            let d = cfg.degree_bound.unwrap_or(DEFAULT_DEGREE_BOUND);
            let v = match appropriateness_check(&rep, d).map_err(|e| e.to_string())? {
                Appropriateness::Confirmed { degree } => {
                    Verdict::new("appropriate", Status::Holds, Method::ExactLattice)
                        .with_note(format!("every target is a sum of entry products of degree <= {degree}"))
                }
                Appropriateness::Refuted { reason } => {
                    Verdict::new("appropriate", Status::Violated, Method::ExactLattice).with_note(reason)
                }
                Appropriateness::Inconclusive { reason } => {
                    Verdict::new("appropriate", Status::Inconclusive, Method::BoundedSearch)
                        .with_bound(d)
                        .with_note(reason)
                }
            };
            Ok(emit(cfg, &rep, &v))
        }
        Command::Discriminate { targets } => discriminate(cfg, targets),
        Command::Bigpowers { targets, var } => bigpowers(cfg, targets, var.as_deref()),
        Command::Example { name } => example(cfg, name),
        Command::Parse { file } => parse_file(cfg, file),
    }
}

/// The exact procedure for a builtin, if there is one.
fn exact(rep: &Representation, b: Builtin, cfg: &RunConfig) -> Option<Res<Verdict>> {
    let name = b.to_string();
    let holds = |note: &str| Ok(Verdict::new(&name, Status::Holds, Method::ExactLattice).with_note(note));
    Some(match b {
        Builtin::Nzct | Builtin::Ct(1) => bound_or(cfg, DEFAULT_NZCT_BOUND).map(|bd| {
            let mut v = nzct_check(rep, bd);
            v.check = name.clone();
            v
        }),
        Builtin::Tau => Ok(tau_check(rep)),
        Builtin::Sigma => Ok(sigma_check(rep)),
        Builtin::Ct(0) => {
            let ring = rep.ring();
            let (a1, a2) = (UT3Elem::a1(ring), UT3Elem::a2(ring));
            let c = a2.commutator(&a1).expect("same ring");
            Ok(Verdict::new(&name, Status::Violated, Method::ExactLattice)
                .with_witness("x1", a1)
                .with_witness("x2", c)
                .with_witness("x3", a2)
                .with_note("[a2,a1] is a nontrivial central element and a1, a2 do not commute"))
        }
        Builtin::Ct(_) => holds("G is 2-nilpotent, so every commutator of weight >= 3 is trivial"),
        Builtin::CentralizerQi => {
            holds("an element commuting with a1 and a2 has zero (1,2) and (2,3) entries, so it is central")
        }
        Builtin::TorsionFreeQi(_) | Builtin::ZeroSqQi => {
            holds("x^k = (k*x12, k*x13 + binom(k,2)*x12*x23, k*x23) and the ring is torsion-free")
        }
    })
}

/// Bounded search by syntactic class. `force` selects refutation (`true`)
/// or witnessing (`false`) regardless of the class.
fn search(rep: &Representation, name: &str, f: &Formula, bound: u32, force: Option<bool>) -> Res<Verdict> {
    let env = rep.env();
    let class = classify(f).map_err(|e| e.to_string())?;
    let base = |status| Verdict::new(name, status, Method::BoundedSearch).with_bound(bound);
    let add = |mut v: Verdict, a: &[(String, UT3Elem)]| {
        for (n, g) in a {
            v = v.with_witness(n, g.clone());
        }
        v
    };
    let universal = matches!(
        class,
        FormulaClass::Identity | FormulaClass::QuasiIdentity | FormulaClass::Universal
    );
    let existential = matches!(class, FormulaClass::Existential | FormulaClass::Primitive);
    let refute = match force {
        Some(r) => r,
        None if universal => true,
        None if existential => false,
        None if class == FormulaClass::ForallExists => {
            return Ok(match search_forall_exists(f, &env, bound).map_err(|e| e.to_string())? {
                SearchOutcome::Found(a) => add(base(Status::Inconclusive), &a).with_note(format!(
                    "no existential witness within radius {bound} for this assignment; a larger ball may hold one"
                )),
                SearchOutcome::NoneWithinBound { ball_size, .. } => base(Status::Inconclusive).with_note(format!(
                    "every assignment from the {ball_size}-element ball has a witness; this proves nothing beyond it"
                )),
            });
        }
        None => return Err(format!("no procedure for {class} sentences")),
    };
    let outcome = if refute {
        refute_universal(f, &env, bound)
    } else {
        witness_existential(f, &env, bound)
    }
    .map_err(|e| e.to_string())?;
    Ok(match (refute, outcome) {
        (true, SearchOutcome::Found(a)) => {
            add(base(Status::Violated), &a).with_note(format!("counterexample within radius {bound}"))
        }
        (false, SearchOutcome::Found(a)) => {
            add(base(Status::Holds), &a).with_note(format!("witness within radius {bound}"))
        }
        (_, SearchOutcome::NoneWithinBound { ball_size, .. }) => base(Status::Inconclusive).with_note(format!(
            "ball of {ball_size} elements exhausted; this proves nothing beyond it"
        )),
    })
}

/// A central element, written either as a matrix or as its `e13` entry.
fn parse_target(rep: &Representation, text: &str) -> Res<UT3Elem> {
    let ring = rep.ring();
    if text.trim_start().starts_with('{') {
        UT3Elem::parse(ring, text).map_err(|e| format!("--z: {e}"))
    } else {
        parse_element(ring, text)
            .map(UT3Elem::central)
            .map_err(|e| format!("--z: {e}"))
    }
}

fn target_lines(path: &Path) -> Res<Vec<String>> {
    Ok(read(path)?
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
        .filter(|l| !l.is_empty())
        .collect())
}

/// Largest `k` among the letters `a<k>` of a word.
fn word_rank(text: &str) -> usize {
    let b = text.as_bytes();
    let mut n = 0;
    let mut i = 0;
    while i < b.len() {
        let starts = b[i] == b'a' && (i == 0 || !b[i - 1].is_ascii_alphanumeric());
        if starts {
            let digits: String = text[i + 1..].chars().take_while(char::is_ascii_digit).collect();
            if let Ok(k) = digits.parse::<usize>() {
                n = n.max(k);
            }
            i += 1 + digits.len();
        } else {
            i += 1;
        }
    }
    n
}

fn discriminate(cfg: &RunConfig, path: &Path) -> Res<Report> {
    let lines = target_lines(path)?;
    let n = lines.iter().map(|l| word_rank(l)).max().unwrap_or(0).max(2);
    let targets = lines
        .iter()
        .map(|l| parse_word(n, l).map_err(|e| format!("{l}: {e}")))
        .collect::<Res<Vec<_>>>()?;
    match discriminate_to_h(n, &targets, DEFAULT_DISCRIMINATION_CAP) {
        Ok(d) => {
            let images = d.describe();
            let cert: Vec<(String, String)> = d
                .certificate
                .iter()
                .map(|(t, g)| (t.to_string(), g.to_string()))
                .collect();
            Ok(Report::ok(if cfg.json {
                let cert: Vec<_> = cert.iter().map(|(t, g)| json!({ "target": t, "image": g })).collect();
                format!(
                    "{}\n",
                    json!({ "status": "holds", "images": images, "certificate": cert })
                )
            } else {
                let mut out = String::from("HOLDS retraction onto H\n");
                for i in images {
                    out.push_str(&format!("  {i}\n"));
                }
                out.push_str("certificate:\n");
                for (t, g) in cert {
                    out.push_str(&format!("  {t} -> {g}\n"));
                }
                out
            }))
        }
        Err(heislab::nilform::NilError::Exhausted { bound }) => Ok(Report {
            code: EXIT_INCONCLUSIVE,
            stdout: if cfg.json {
                format!("{}\n", json!({ "status": "inconclusive", "bound": bound }))
            } else {
                format!("INCONCLUSIVE no retraction with exponents up to {bound}\n")
            },
            stderr: String::new(),
        }),
        Err(e) => Err(e.to_string()),
    }
}

fn bigpowers(cfg: &RunConfig, path: &Path, var: Option<&str>) -> Res<Report> {
    let rep = load_rep(cfg)?;
    let ring = rep.ring();
    let name = match var {
        Some(v) => v.to_string(),
        None => {
            let mut all: Vec<&String> = ring.components().iter().flatten().collect();
            all.sort();
            all.dedup();
            match all.as_slice() {
                [one] => one.to_string(),
                _ => return Err("the ring has no single indeterminate; pass --var".into()),
            }
        }
    };
    let targets = target_lines(path)?
        .iter()
        .map(|l| UT3Elem::parse(ring, l).map_err(|e| format!("{l}: {e}")))
        .collect::<Res<Vec<_>>>()?;
    let bp = big_powers_retraction(&rep, &name, &targets).map_err(|e| e.to_string())?;
    Ok(Report::ok(if cfg.json {
        let cert: Vec<_> = bp
            .certificate
            .iter()
            .map(|(t, g)| json!({ "target": t.to_string(), "image": g.to_string() }))
            .collect();
        format!(
            "{}\n",
            json!({ "var": name, "n": bp.n.to_string(), "certificate": cert })
        )
    } else {
        let mut out = format!("{name} -> {}\ncertificate:\n", bp.n);
        for (t, g) in &bp.certificate {
            out.push_str(&format!("  {t} -> {g}\n"));
        }
        out
    }))
}

fn example(cfg: &RunConfig, name: &str) -> Res<Report> {
    let source = fixtures::source(name)
        .ok_or_else(|| format!("unknown example `{name}`; try one of {}", fixtures::NAMES.join(", ")))?;
    let rep = parse_config(source).map_err(|e| e.to_string())?;
    let verdicts = [
        lame_check(&rep),
        tau_check(&rep),
        sigma_check(&rep),
        nzct_check(&rep, DEFAULT_NZCT_BOUND),
    ];
    let code = exit_code(verdicts[0].status);
    let c = c_rank(&rep);
    let stdout = if cfg.json {
        let records: Vec<_> = verdicts.iter().map(|v| v.record(rep.ring())).collect();
        format!(
            "{}\n",
            json!({ "name": name, "config": print_config(&rep), "verdicts": records, "c_rank": c })
        )
    } else {
        let mut out = source.to_string();
        for v in &verdicts {
            out.push('\n');
            out.push_str(&v.to_text());
        }
        out.push_str(&format!("\nc_rank = {c}\n"));
        out
    };
    Ok(Report {
        code,
        stdout,
        stderr: String::new(),
    })
}

fn parse_file(cfg: &RunConfig, arg: &str) -> Res<Report> {
    let path = Path::new(arg);
    let text = if path.is_file() { read(path)? } else { arg.to_string() };
    let formula_err = match parse(text.trim()) {
        Ok(f) => {
            let class = classify(&f).map_err(|e| e.to_string())?;
            return Ok(Report::ok(if cfg.json {
                format!("{}\n", json!({ "formula": f.to_string(), "class": class }))
            } else {
                format!("{f}\nclass: {class}\n")
            }));
        }
        Err(e) => e,
    };
    match parse_config(&text) {
        Ok(rep) => Ok(emit_config(cfg, &rep, &[])),
        Err(config_err) => Err(format!(
            "{arg}: not a sentence ({formula_err}) and not a config ({config_err})"
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_of_words() {
        assert_eq!(word_rank("[a3,a1]^2 a2"), 3);
        assert_eq!(word_rank("a12"), 12);
        assert_eq!(word_rank("1"), 0);
    }

    #[test]
    fn bounds_are_capped() {
        let cfg = RunConfig::try_parse_from(["heislab", "tau", "--bound", "100"]).unwrap();
        assert!(bound_or(&cfg, 2).is_err());
        let cfg = RunConfig::try_parse_from(["heislab", "tau", "--bound", "0"]).unwrap();
        assert!(bound_or(&cfg, 2).is_err());
        let cfg = RunConfig::try_parse_from(["heislab", "tau"]).unwrap();
        assert_eq!(bound_or(&cfg, 2), Ok(2));
    }

    #[test]
    fn usage_errors_exit_3() {
        assert_eq!(run(["heislab", "frobnicate"]).code, EXIT_USAGE);
        assert_eq!(run(["heislab", "tau"]).code, EXIT_USAGE);
        assert_eq!(run(["heislab", "--help"]).code, EXIT_HOLDS);
    }
}
