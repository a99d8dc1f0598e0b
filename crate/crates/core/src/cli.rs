//! The `popmatch` command line. Exit codes: 0 when a popular matching was
//! found (or the given one is popular), 1 when none exists (or it is not
//! popular), 2 on any error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::format;
use crate::gen::{self, RandomSpec};
use crate::instance::{Instance, Matching, PostId};
use crate::oracle::{self, Guard};
use crate::reduction::{self, DecideOptions};
use crate::solver::{self, Outcome, PostClass};
use crate::verifier;

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Human,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(name = "popmatch", version, about = "Popular matchings with one-sided ties")]
pub struct Cli {
    /// Output style; `tsv` is stable and meant for scripts.
    #[arg(long, value_enum, default_value_t, global = true)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find a popular matching (single-tie posts only).
    Solve {
        instance: PathBuf,
        /// Print the classes demoted in every round.
        #[arg(long)]
        trace: bool,
        /// Also write the matching to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check whether a matching is popular.
    Verify { instance: PathBuf, matching: PathBuf },
    /// Compute the unpopularity margin of a matching.
    Margin { instance: PathBuf, matching: PathBuf },
    /// List every popular matching by exhaustive search.
    Oracle {
        instance: PathBuf,
        /// Lift the 8x8 size limit.
        #[arg(long)]
        guard_override: bool,
    },
    /// Build the gadget instance of a (2,2)-E3 DIMACS formula.
    Reduce {
        cnf: PathBuf,
        /// Instance file to write.
        #[arg(long)]
        out: PathBuf,
        /// Vertex name index; defaults to `<out>.index`.
        #[arg(long)]
        index: Option<PathBuf>,
        /// Also decide whether the instance has a popular matching.
        #[arg(long)]
        decide: bool,
        /// Lift the 10^6 candidate limit of --decide.
        #[arg(long)]
        guard_override: bool,
    },
    /// Write a generated instance (or formula, for `cnf`).
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        /// Fixture name for `--family fixture`.
        #[arg(long)]
        name: Option<String>,
        /// Size parameter of the tight family, variable count for `cnf`.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 5)]
        applicants: usize,
        #[arg(long, default_value_t = 5)]
        posts: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 1.0)]
        tie_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Destination file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Fixture,
    Tight,
    Random,
    Cnf,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_ERROR;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_FOUND;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Parameter(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)
        .map_err(|e| Error::Parameter(format!("cannot write {}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance> {
    format::parse_instance(&read(path)?)
}

fn io(e: std::io::Error) -> Error {
    Error::Parameter(format!("write failed: {e}"))
}

fn join(posts: &[PostId]) -> String {
    posts
        .iter()
        .map(|b| b.0.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let tsv = cli.format == OutputFormat::Tsv;
    match &cli.command {
        Command::Solve {
            instance,
            trace,
            output,
        } => {
            let inst = load_instance(instance)?;
            let sol = solver::solve_detailed(&inst)?;
            print_solution(out, tsv, &sol, *trace).map_err(io)?;
            match &sol.outcome {
                Outcome::Popular(m) => {
                    if let Some(path) = output {
                        write_file(path, &format::serialize_matching(m))?;
                    }
                    Ok(EXIT_FOUND)
                }
                Outcome::NoPopularMatching => Ok(EXIT_NOT_FOUND),
            }
        }
        Command::Verify { instance, matching } | Command::Margin { instance, matching } => {
            let inst = load_instance(instance)?;
            let m = format::parse_matching(&read(matching)?, &inst)?;
            let rep = verifier::margin(&inst, &m)?;
            if tsv {
                writeln!(out, "margin\t{}", rep.margin).map_err(io)?;
                writeln!(out, "popular\t{}", rep.margin == 0).map_err(io)?;
                if rep.margin > 0 {
                    for (a, b) in rep.witness.pairs() {
                        writeln!(out, "witness\t{}\t{}", a.0, b.0).map_err(io)?;
                    }
                }
            } else {
                let verdict = if rep.margin == 0 { "popular" } else { "not popular" };
                writeln!(out, "margin {}: {verdict}", rep.margin).map_err(io)?;
                if rep.margin > 0 {
                    writeln!(out, "more popular matching: {}", rep.witness).map_err(io)?;
                }
            }
            Ok(if rep.margin == 0 { EXIT_FOUND } else { EXIT_NOT_FOUND })
        }
        Command::Oracle {
            instance,
            guard_override,
        } => {
            let inst = load_instance(instance)?;
            let guard = if *guard_override {
                Guard::unlimited()
            } else {
                Guard::default()
            };
            let set = oracle::popular_set_guarded(&inst, guard)?;
            print_popular_set(out, tsv, &set).map_err(io)?;
            Ok(if set.is_empty() { EXIT_NOT_FOUND } else { EXIT_FOUND })
        }
        Command::Reduce {
            cnf,
            out: inst_path,
            index,
            decide,
            guard_override,
        } => {
            let formula = reduction::validate_cnf(&reduction::parse_dimacs(&read(cnf)?)?)?;
            let (inst, idx) = reduction::build_instance(&formula);
            write_file(inst_path, &format::serialize_instance(&inst))?;
            let index_path = index.clone().unwrap_or_else(|| {
                let mut p = inst_path.clone().into_os_string();
                p.push(".index");
                PathBuf::from(p)
            });
            write_file(&index_path, &idx.sidecar())?;
            if tsv {
                writeln!(out, "applicants\t{}", inst.num_applicants()).map_err(io)?;
                writeln!(out, "posts\t{}", inst.num_posts()).map_err(io)?;
            } else {
                writeln!(
                    out,
                    "wrote {} ({} applicants, {} posts) and {}",
                    inst_path.display(),
                    inst.num_applicants(),
                    inst.num_posts(),
                    index_path.display()
                )
                .map_err(io)?;
            }
            if !*decide {
                return Ok(EXIT_FOUND);
            }
            let opts = DecideOptions {
                max_candidates: if *guard_override { u64::MAX } else { 1_000_000 },
                ..DecideOptions::default()
            };
            let d = reduction::decide_reduced_with(&inst, &idx, opts)?;
            let labels = idx.labels();
            match &d.outcome {
                Outcome::Popular(m) => {
                    if tsv {
                        writeln!(out, "status\tPOPULAR").map_err(io)?;
                        for (a, b) in m.pairs() {
                            writeln!(out, "pair\t{}\t{}", a.0, b.0).map_err(io)?;
                        }
                    } else {
                        writeln!(out, "popular matching:").map_err(io)?;
                        for (a, b) in m.pairs() {
                            writeln!(out, "  {} {}", labels.applicant(a), labels.post(b))
                                .map_err(io)?;
                        }
                    }
                }
                Outcome::NoPopularMatching => {
                    writeln!(out, "{}", if tsv { "status\tNO_POPULAR_MATCHING" } else { "NO_POPULAR_MATCHING" })
                        .map_err(io)?;
                }
            }
            if tsv {
                writeln!(out, "verified\t{}", d.stats.verified).map_err(io)?;
            } else {
                writeln!(
                    out,
                    "{} of {} candidates verified",
                    d.stats.verified, d.stats.candidates
                )
                .map_err(io)?;
            }
            Ok(if d.outcome.is_popular() { EXIT_FOUND } else { EXIT_NOT_FOUND })
        }
        Command::Gen {
            family,
            name,
            n,
            applicants,
            posts,
            density,
            tie_fraction,
            seed,
            out: path,
        } => {
            let need_n = || n.ok_or_else(|| Error::Parameter("--n is required".into()));
            let text = match family {
                Family::Fixture => {
                    let name = name
                        .as_deref()
                        .ok_or_else(|| Error::Parameter("--name is required".into()))?;
                    format::serialize_instance(&gen::fixture(name)?.instance)
                }
                Family::Tight => format::serialize_instance(&gen::tight_family(need_n()?)?.instance),
                Family::Random => format::serialize_instance(&gen::random_instance(
                    *seed,
                    RandomSpec {
                        num_applicants: *applicants,
                        num_posts: *posts,
                        density: *density,
                        tie_fraction: *tie_fraction,
                    },
                )?),
                Family::Cnf => {
                    reduction::to_dimacs(&reduction::random_cnf22e3(*seed, need_n()?)?.to_cnf())
                }
            };
            match path {
                Some(p) => write_file(p, &text)?,
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
            Ok(EXIT_FOUND)
        }
    }
}

fn print_solution(
    out: &mut dyn Write,
    tsv: bool,
    sol: &solver::Solution,
    trace: bool,
) -> std::io::Result<()> {
    let p = &sol.partition;
    if tsv {
        match &sol.outcome {
            Outcome::Popular(m) => {
                writeln!(out, "status\tPOPULAR")?;
                for (a, b) in m.pairs() {
                    writeln!(out, "pair\t{}\t{}", a.0, b.0)?;
                }
            }
            Outcome::NoPopularMatching => writeln!(out, "status\tNO_POPULAR_MATCHING")?,
        }
        for class in [PostClass::X, PostClass::Y, PostClass::Z] {
            writeln!(out, "partition\t{class}\t{}", join(&p.posts_in(class)))?;
        }
        writeln!(out, "iterations\t{}", sol.trace.iteration_count())?;
        if trace {
            for (k, it) in sol.trace.iterations.iter().enumerate() {
                writeln!(out, "iter\t{}\t{}\t{}", k + 1, join(&it.x_to_y), join(&it.y_to_z))?;
            }
            writeln!(out, "work\t{}", sol.trace.work)?;
        }
    } else {
        match &sol.outcome {
            Outcome::Popular(m) => writeln!(out, "popular matching: {m}")?,
            Outcome::NoPopularMatching => writeln!(out, "NO_POPULAR_MATCHING")?,
        }
        let show = |class| {
            let names: Vec<String> = p.posts_in(class).iter().map(|b| b.to_string()).collect();
            format!("{{{}}}", names.join(", "))
        };
        writeln!(
            out,
            "X = {}  Y = {}  Z = {}",
            show(PostClass::X),
            show(PostClass::Y),
            show(PostClass::Z)
        )?;
        writeln!(out, "iterations: {}", sol.trace.iteration_count())?;
        if trace {
            for (k, it) in sol.trace.iterations.iter().enumerate() {
                let names = |v: &[PostId]| {
                    v.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", ")
                };
                writeln!(
                    out,
                    "  round {}: X->Y {{{}}}  Y->Z {{{}}}",
                    k + 1,
                    names(&it.x_to_y),
                    names(&it.y_to_z)
                )?;
            }
            writeln!(out, "work: {}", sol.trace.work)?;
        }
    }
    Ok(())
}

fn print_popular_set(out: &mut dyn Write, tsv: bool, set: &[Matching]) -> std::io::Result<()> {
    if set.is_empty() {
        return writeln!(out, "none");
    }
    if tsv {
        for (i, m) in set.iter().enumerate() {
            writeln!(out, "matching\t{i}")?;
            for (a, b) in m.pairs() {
                writeln!(out, "pair\t{}\t{}", a.0, b.0)?;
            }
        }
    } else {
        writeln!(out, "{} popular matching(s):", set.len())?;
        for m in set {
            writeln!(out, "  {m}")?;
        }
    }
    Ok(())
}
