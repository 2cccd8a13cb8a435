//! Command-line front end. [`run`] parses arguments, dispatches to a
//! subcommand and returns the process exit code: 0 on success, 1 on a
//! negative verdict, 2 on errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use crate::boffa::{Family, PiReading, RecipeError, Recipes};
use crate::formula::{parse_formula, AxiomId, RelSym, Var};
use crate::hfset::{ack_decode, ack_encode, HfSet};
use crate::search::{cantor_check, find_model, Requirement, SearchMode, SearchOutcome, SearchSpec};
use crate::stratification::stratify;
use crate::structure::{
    check_axiom, check_extensionality, eval_with, load_structure, AxiomReport, EvalOptions,
    ExtScope, FMode, MembershipStructure,
};

#[derive(Parser, Debug)]
#[command(
    name = "nfbench",
    version,
    about = "Stratification, recoded membership and witness recipes"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Lines,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Scope {
    All,
    Sets,
}

impl From<Scope> for ExtScope {
    fn from(s: Scope) -> ExtScope {
        match s {
            Scope::All => ExtScope::All,
            Scope::Sets => ExtScope::SetsOnly,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Element,
    Set,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a formula is stratified.
    Stratify { formula: PathBuf },
    /// Evaluate a formula over a structure.
    Eval {
        structure: PathBuf,
        formula: PathBuf,
        /// Free-variable assignment `var=id`.
        #[arg(long = "assign", value_name = "VAR=ID")]
        assign: Vec<String>,
        /// Relation that `mem` atoms are read as.
        #[arg(long, default_value = "mem", value_parser = parse_rel)]
        mem_as: RelSym,
    },
    /// Check the five axioms and extensionality.
    Axioms {
        structure: PathBuf,
        #[arg(long, default_value = "mem", value_parser = parse_rel)]
        flavor: RelSym,
        #[arg(long, value_enum, default_value_t = Scope::All)]
        ext: Scope,
    },
    /// Run a witness recipe and print its trace.
    Witness {
        structure: PathBuf,
        #[arg(long, value_parser = parse_axiom)]
        axiom: AxiomId,
        /// Input element ids, in the order of the axiom's universal prefix.
        #[arg(long, num_args = 0..)]
        inputs: Vec<String>,
        #[arg(long, default_value = "automorphism", value_parser = parse_family)]
        family: Family,
        #[arg(long, default_value = "pairwise", value_parser = parse_reading)]
        reading: PiReading,
    },
    /// Search small structures for a model of the listed axioms.
    Search {
        #[arg(long)]
        size: usize,
        #[arg(long, value_enum, default_value_t = Mode::Set)]
        mode: Mode,
        /// Comma-separated axiom ids; EXTENSIONALITY uses --ext.
        #[arg(long, value_delimiter = ',', value_parser = parse_axiom)]
        axioms: Vec<AxiomId>,
        #[arg(long, value_parser = parse_rel)]
        flavor: Option<RelSym>,
        #[arg(long, value_enum, default_value_t = Scope::Sets)]
        ext: Scope,
        #[arg(long)]
        total: bool,
        #[arg(long)]
        injective: bool,
        /// Keep one structure per isomorphism class.
        #[arg(long)]
        canonical: bool,
        /// Draw this many random samples instead of enumerating.
        #[arg(long)]
        random: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = crate::search::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Confirm that no map D -> P(D) is onto for small D.
    Cantor {
        #[arg(long, default_value_t = 3)]
        max_n: usize,
    },
    /// Replace one membership symbol by another, optionally guarding quantifiers.
    Translate {
        formula: PathBuf,
        #[arg(long, default_value = "mem", value_parser = parse_rel)]
        from: RelSym,
        #[arg(long, value_parser = parse_rel)]
        to: RelSym,
        #[arg(long)]
        guard: Option<String>,
    },
    /// Convert between brace notation and Ackermann codes.
    Encode {
        #[arg(required_unless_present = "code", conflicts_with = "code")]
        set: Option<String>,
        #[arg(long)]
        code: Option<BigUint>,
    },
}

fn parse_rel(s: &str) -> Result<RelSym, String> {
    RelSym::from_keyword(s).ok_or_else(|| format!("unknown relation `{s}`"))
}

fn parse_axiom(s: &str) -> Result<AxiomId, String> {
    s.parse::<AxiomId>().map_err(|e| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

fn parse_reading(s: &str) -> Result<PiReading, String> {
    s.parse()
}

/// Error carrying exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

/// Runs the command line `args` (program name first), writing the report to
/// `out` and diagnostics to `err`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let mut buf = String::new();
    let result = dispatch(&cli, &mut buf);
    let _ = out.write_all(buf.as_bytes());
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn structure(path: &Path) -> Result<MembershipStructure, Failure> {
    load_structure(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn element(m: &MembershipStructure, id: &str) -> Result<usize, Failure> {
    m.lookup(id)
        .ok_or_else(|| Failure(format!("unknown element `{id}`")))
}

fn dispatch(cli: &Cli, out: &mut String) -> Outcome {
    let lines = cli.format == Format::Lines;
    match &cli.command {
        Command::Stratify { formula } => {
            let phi = parse_formula(&read(formula)?)?;
            match stratify(&phi) {
                Ok(t) => {
                    if lines {
                        out.push_str("verdict=stratified\n");
                        for (v, l) in &t.levels {
                            out.push_str(&format!("var={v} level={l}\n"));
                        }
                    } else {
                        out.push_str(&format!("stratified: {t}\n"));
                    }
                    Ok(true)
                }
                Err(fail) => {
                    if lines {
                        out.push_str(&format!("verdict=unstratified offset={}\n", fail.offset()));
                        for s in &fail.cycle {
                            out.push_str(&format!(
                                "atom={} left={} right={} forward={}\n",
                                s.rel, s.left, s.right, s.forward
                            ));
                        }
                    } else {
                        out.push_str(&format!("unstratified: cycle {fail}\n"));
                    }
                    Ok(false)
                }
            }
        }
        Command::Eval {
            structure: sp,
            formula,
            assign,
            mem_as,
        } => {
            let m = structure(sp)?;
            let phi = parse_formula(&read(formula)?)?;
            let mut assignment = BTreeMap::new();
            for a in assign {
                let (v, id) = a
                    .split_once('=')
                    .ok_or_else(|| Failure(format!("bad assignment `{a}`, expected var=id")))?;
                assignment.insert(Var::new(v.trim()), element(&m, id.trim())?);
            }
            let opts = EvalOptions {
                mem_as: *mem_as,
                quantifier_domain: None,
            };
            let value = eval_with(&m, &phi, &assignment, &opts)?;
            if lines {
                out.push_str(&format!("value={value}\n"));
            } else {
                out.push_str(&format!("{value}\n"));
            }
            Ok(value)
        }
        Command::Axioms {
            structure: sp,
            flavor,
            ext,
        } => {
            let m = structure(sp)?;
            let mut all = true;
            for id in AxiomId::FIN_SF {
                let r = check_axiom(&m, id, *flavor)?;
                all &= r.holds();
                out.push_str(&render_report(&m, &r, lines));
            }
            let r = check_extensionality(&m, *flavor, (*ext).into())?;
            all &= r.holds();
            out.push_str(&render_report(&m, &r, lines));
            Ok(all)
        }
        Command::Witness {
            structure: sp,
            axiom,
            inputs,
            family,
            reading,
        } => {
            let m = structure(sp)?;
            let ids = inputs
                .iter()
                .map(|i| element(&m, i))
                .collect::<Result<Vec<_>, _>>()?;
            let recipes = Recipes::new(&m, *family)?;
            match recipes.witness(*axiom, &ids, *reading) {
                Ok(w) => {
                    if lines {
                        for s in &w.trace {
                            out.push_str(&format!(
                                "step={} object={}\n",
                                s.label,
                                s.object.render(&m)
                            ));
                        }
                        out.push_str(&format!(
                            "witness={} validated={}\n",
                            m.name(w.witness),
                            w.validated
                        ));
                    } else {
                        out.push_str(&format!("{} witness ({:?} family)\n", axiom, family));
                        out.push_str(&w.report(&m));
                    }
                    Ok(w.validated)
                }
                Err(fail)
                    if fail.error.is_coding_gap()
                        || matches!(fail.error, RecipeError::AmbiguousCode { .. }) =>
                {
                    if !lines {
                        out.push_str(&format!("{} witness ({:?} family)\n", axiom, family));
                    }
                    for s in &fail.trace {
                        if lines {
                            out.push_str(&format!(
                                "step={} object={}\n",
                                s.label,
                                s.object.render(&m)
                            ));
                        } else {
                            out.push_str(&format!("{}: {}\n", s.label, s.object.render(&m)));
                        }
                    }
                    if lines {
                        out.push_str(&format!("failed_step={} error={}\n", fail.step, fail.error));
                    } else {
                        out.push_str(&format!("failed at {fail}\n"));
                    }
                    Ok(false)
                }
                Err(fail) => Err(fail.into()),
            }
        }
        Command::Search {
            size,
            mode,
            axioms,
            flavor,
            ext,
            total,
            injective,
            canonical,
            random,
            seed,
            budget,
        } => {
            let f_mode = match mode {
                Mode::Element => FMode::Element,
                Mode::Set => FMode::SetValued,
            };
            let flavor = flavor.unwrap_or(match f_mode {
                FMode::Element => RelSym::MemPrime,
                FMode::SetValued => RelSym::MemF,
            });
            let mut spec = SearchSpec::new(*size, f_mode)
                .total(*total)
                .injective(*injective);
            spec.budget = *budget;
            spec.canonical_only = *canonical;
            if let Some(samples) = random {
                spec.mode = SearchMode::Random {
                    seed: *seed,
                    samples: *samples,
                };
            }
            for &id in axioms {
                let req = match id {
                    AxiomId::Extensionality => Requirement::Extensionality((*ext).into()),
                    id => Requirement::Axiom(id),
                };
                spec = spec.require(req, flavor);
            }
            let outcome = find_model(&spec)?;
            if lines {
                match &outcome {
                    SearchOutcome::Found { model, examined } => {
                        out.push_str(&format!("verdict=FOUND examined={examined}\n"));
                        for l in model.to_text().lines() {
                            out.push_str(&format!("line={l}\n"));
                        }
                    }
                    SearchOutcome::Exhausted { examined } => {
                        out.push_str(&format!("verdict=EXHAUSTED examined={examined}\n"));
                    }
                }
            } else {
                out.push_str(&outcome.to_text());
            }
            Ok(outcome.model().is_some())
        }
        Command::Cantor { max_n } => {
            if !(1..=crate::search::MAX_SET_VALUED_SIZE).contains(max_n) {
                return Err(Failure("--max-n must lie in 1..=4".into()));
            }
            let rows = cantor_check(*max_n);
            for r in &rows {
                if lines {
                    out.push_str(&format!(
                        "n={} maps={} surjections={} min_missing={} diagonal_missed={}\n",
                        r.n, r.maps, r.surjections, r.min_missing, r.diagonal_missed
                    ));
                } else {
                    out.push_str(&format!(
                        "n={}: {} maps, {} onto P(D), at least {} of {} subsets missed, diagonal missed by {}\n",
                        r.n,
                        r.maps,
                        r.surjections,
                        r.min_missing,
                        1u64 << r.n,
                        r.diagonal_missed
                    ));
                }
            }
            Ok(rows.iter().all(|r| r.surjections == 0))
        }
        Command::Translate {
            formula,
            from,
            to,
            guard,
        } => {
            let phi = parse_formula(&read(formula)?)?;
            let translated = crate::formula::recode_translate(&phi, *from, *to, guard.as_deref())?;
            if lines {
                out.push_str(&format!("formula={translated}\n"));
            } else {
                out.push_str(&format!("{translated}\n"));
            }
            Ok(true)
        }
        Command::Encode { set, code } => {
            match (set, code) {
                (Some(text), _) => {
                    let s: HfSet = text.parse()?;
                    let c = ack_encode(&s)?;
                    if lines {
                        out.push_str(&format!("set={s} code={c}\n"));
                    } else {
                        out.push_str(&format!("{c}\n"));
                    }
                }
                (None, Some(c)) => {
                    let s = ack_decode(c);
                    if lines {
                        out.push_str(&format!("code={c} set={s}\n"));
                    } else {
                        out.push_str(&format!("{s}\n"));
                    }
                }
                (None, None) => unreachable!("clap requires one of them"),
            }
            Ok(true)
        }
    }
}

fn render_report(m: &MembershipStructure, r: &AxiomReport, lines: bool) -> String {
    let tuple = |t: &[usize]| t.iter().map(|&e| m.name(e)).collect::<Vec<_>>().join(",");
    if lines {
        let mut s = format!(
            "axiom={} flavor={} verdict={}",
            r.axiom, r.flavor, r.verdict
        );
        match &r.counterexample {
            Some(cx) => s.push_str(&format!(" counterexample=({})", tuple(cx))),
            None => s.push_str(" counterexample=-"),
        }
        let ws: Vec<String> = r
            .witnesses
            .iter()
            .map(|(t, w)| format!("{}:{}", tuple(t), m.name(*w)))
            .collect();
        s.push_str(&format!(
            " witnesses={}\n",
            if ws.is_empty() {
                "-".into()
            } else {
                ws.join(";")
            }
        ));
        s
    } else {
        let mut s = format!("{} [{}]: {}", r.axiom, r.flavor, r.verdict);
        if let Some(cx) = &r.counterexample {
            s.push_str(&format!(", counterexample ({})", tuple(cx)));
        } else if !r.witnesses.is_empty() {
            let ws: Vec<String> = r
                .witnesses
                .iter()
                .map(|(t, w)| {
                    if t.is_empty() {
                        m.name(*w).to_owned()
                    } else {
                        format!("{} -> {}", tuple(t), m.name(*w))
                    }
                })
                .collect();
            s.push_str(&format!(", witnesses {}", ws.join("; ")));
        }
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("nfbench").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn encode_both_ways() {
        assert_eq!(
            run_str(&["encode", "{{},{{}}}"]),
            (0, "3\n".into(), String::new())
        );
        assert_eq!(run_str(&["encode", "--code", "3"]).1, "{{},{{}}}\n");
        assert_eq!(
            run_str(&["--format", "lines", "encode", "{}"]).1,
            "set={} code=0\n"
        );
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&[]).0, 2);
        assert_eq!(run_str(&["encode", "{"]).0, 2);
        assert_eq!(run_str(&["stratify", "/nonexistent/file"]).0, 2);
        assert_eq!(run_str(&["cantor", "--max-n", "9"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn cantor_exit_zero() {
        let (code, out, _) = run_str(&["--format", "lines", "cantor", "--max-n", "2"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "n=1 maps=2 surjections=0 min_missing=1 diagonal_missed=2\n\
             n=2 maps=16 surjections=0 min_missing=2 diagonal_missed=16\n"
        );
    }

    #[test]
    fn search_exhausted_exits_one() {
        let (code, out, _) = run_str(&[
            "search",
            "--size",
            "1",
            "--total",
            "--axioms",
            "U_INTERSECTION,COMPLEMENTS",
        ]);
        assert_eq!(code, 1);
        assert_eq!(out, "# verdict: EXHAUSTED after 2 structures\n");
    }
}
