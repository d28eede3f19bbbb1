//! Command-line front end. [`run`] is the whole program; `main` only wires
//! it to the process streams.

pub mod error;
pub mod file;
pub mod trace;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ef1reform::generators::{
    random_allocation, random_instance_with, reduce, reduce_identical_constant, seeded_rng,
    Reduction,
};
use ef1reform::model::{replay, Distance, Instance};
use ef1reform::optimal::optimal_exchanges;
use ef1reform::oracle::{
    beneficial_reachable_ef1, exists_ef1_bruteforce, min_exchanges_bfs, OracleBudget,
};
use ef1reform::reformability::{reformable_with_method, SolveOptions};
use ef1reform::weak_ef1::{algorithm_a, verify_trace};
use ef1reform::worst_case::{
    construct_ef1_within_bound, general_bounds, idenbin_bounds, upper_bound_formula,
};
use ef1reform::{is_ef1, is_weak_ef1, Allocation, SizeVector, UtilityClass};

use crate::error::{CliError, Result};
use crate::file::{load_instance, parse_file, read_text, InstanceFile, Loaded};
use crate::trace::{format_trace, parse_trace};

#[derive(Debug, Parser)]
#[command(
    name = "ef1reform",
    version,
    about = "Reform allocations of indivisible goods into EF1 allocations by exchanges"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Instance file (ef1reform/1).
    #[arg(long, global = true)]
    instance: Option<PathBuf>,

    /// Size vector as comma-separated bundle sizes; overrides the file.
    #[arg(long, global = true, value_name = "CSV")]
    size_vector: Option<String>,

    /// Maximum number of states any search may visit.
    #[arg(long, global = true)]
    budget: Option<usize>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Use the brute-force paths only.
    #[arg(long, global = true)]
    oracle: bool,

    /// Report whose exchange lines are applied before checking (check only).
    #[arg(long, global = true, value_name = "TRACE")]
    replay: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    General,
    IdenticalBinary,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// EF1 and weak-EF1 verdicts for the allocation.
    Check,
    /// Whether some EF1 allocation has the size vector.
    Reformable,
    /// Minimum number of exchanges to reach EF1, with a witness.
    Optimal,
    /// Worst-case exchange bounds for s-balanced allocations.
    Bound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u64,
        #[arg(long, value_enum, default_value = "general")]
        family: Family,
    },
    /// An EF1 allocation within the worst-case bound of an s-balanced start.
    Construct,
    /// Run the weak-EF1 exchange algorithm on identical utilities.
    Weakef1,
    /// Whether EF1 is reachable by beneficial exchanges only.
    Beneficial,
    /// Build a fair-division instance from a source problem file.
    Reduce {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: String,
        /// Agents for the identical-constant target (default 3).
        #[arg(long)]
        agents: Option<usize>,
    },
    /// Seeded random instance, with a random allocation if a size vector
    /// is given.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "general")]
        class: String,
        #[arg(long, default_value_t = 5)]
        max_u: u64,
    },
    /// Brute-force existence and BFS distance, for cross-checking.
    Oracle,
}

const MAX_BOUND_GOODS: u64 = 1_000_000;
const MAX_GENERATED_GOODS: usize = 1_000_000;

/// Runs the program on `args` (program name first). The report goes to
/// `out`, diagnostics and timing to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                2
            } else {
                let _ = write!(out, "{rendered}");
                0
            };
        }
    };
    let started = Instant::now();
    match execute(&cli) {
        Ok(report) => {
            if out.write_all(report.as_bytes()).is_err() {
                return 2;
            }
            let _ = writeln!(err, "time: {:.3} ms", started.elapsed().as_secs_f64() * 1e3);
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_csv(s: &str) -> Result<SizeVector> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(SizeVector)
        .map_err(|_| {
            usage(format!(
                "--size-vector: `{s}` is not a comma-separated list of sizes"
            ))
        })
}

impl Cli {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            budget: self.budget.map(OracleBudget::new).unwrap_or_default(),
            force_oracle: self.oracle,
        }
    }

    fn loaded(&self) -> Result<Loaded> {
        let path = self
            .instance
            .as_deref()
            .ok_or_else(|| usage("--instance is required"))?;
        load_instance(path)
    }

    /// The flag, else the file's size vector, else the allocation's.
    fn size_vector(&self, l: &Loaded) -> Result<SizeVector> {
        if let Some(csv) = &self.size_vector {
            let sv = parse_csv(csv)?;
            sv.check_for(&l.instance)?;
            return Ok(sv);
        }
        l.size_vector
            .clone()
            .or_else(|| l.allocation.as_ref().map(Allocation::size_vector))
            .ok_or_else(|| usage("no size vector: pass --size-vector or give one in the file"))
    }
}

fn allocation(l: &Loaded) -> Result<&Allocation> {
    l.allocation
        .as_ref()
        .ok_or_else(|| usage("the instance file has no allocation"))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

fn weak_verdict(inst: &Instance<u64>, a: &Allocation) -> &'static str {
    if inst.is_identical() {
        yes_no(is_weak_ef1(inst, a))
    } else {
        "n/a"
    }
}

fn execute(cli: &Cli) -> Result<String> {
    if cli.replay.is_some() && !matches!(cli.command, Command::Check) {
        return Err(usage("--replay only applies to check"));
    }
    let mut lines: Vec<String> = Vec::new();
    match &cli.command {
        Command::Check => {
            let l = cli.loaded()?;
            let mut a = allocation(&l)?.clone();
            let mut replayed = None;
            if let Some(path) = &cli.replay {
                let trace = parse_trace(path, &read_text(path)?)?;
                a = replay(&a, &trace)?;
                replayed = Some(trace.len());
            }
            lines.push(yes_no(is_ef1(&l.instance, &a)).into());
            lines.push(format!("weak-ef1: {}", weak_verdict(&l.instance, &a)));
            if let Some(k) = replayed {
                lines.push(format!("replayed: {k} exchanges"));
            }
            lines.push(format!("allocation: {a}"));
        }
        Command::Reformable => {
            let l = cli.loaded()?;
            let sv = cli.size_vector(&l)?;
            let (ans, method) = reformable_with_method(&l.instance, &sv, &cli.options())?;
            lines.push(yes_no(ans).into());
            lines.push(format!("method: {}", method.tag()));
            lines.push(format!("size-vector: {sv}"));
        }
        Command::Optimal => {
            let l = cli.loaded()?;
            let res = optimal_exchanges(&l.instance, allocation(&l)?, &cli.options())?;
            lines.push(res.distance.to_string());
            lines.push(format!("method: {}", res.method.tag()));
            lines.extend(format_trace(res.trace.as_deref().unwrap_or_default()));
        }
        Command::Bound { n, s, family } => {
            if *n < 2 || *s < 1 {
                return Err(usage("bound needs --n >= 2 and --s >= 1"));
            }
            if n.saturating_mul(*s) > MAX_BOUND_GOODS {
                return Err(usage(format!("bound supports n*s up to {MAX_BOUND_GOODS}")));
            }
            let r = match family {
                Family::General => general_bounds(*n, *s),
                Family::IdenticalBinary => idenbin_bounds(*n, *s),
            };
            lines.push(r.upper.to_string());
            lines.push(format!("lower: {}", r.lower));
            lines.push(format!("upper: {}", r.upper));
            if let Some(a) = r.achieved {
                lines.push(format!("achieved: {a}"));
            }
            lines.push(format!("family: {}", r.family));
        }
        Command::Construct => {
            let l = cli.loaded()?;
            let start = allocation(&l)?;
            let c = construct_ef1_within_bound(&l.instance, start)?;
            let (n, s) = (start.num_agents() as u64, start.bundle(0).len() as u64);
            lines.push(c.count.to_string());
            lines.push(format!("upper-bound: {}", upper_bound_formula(n, s)));
            lines.push(format!("target: {}", c.target));
            lines.extend(format_trace(&c.trace));
        }
        Command::Weakef1 => {
            let l = cli.loaded()?;
            let (end, rounds) = algorithm_a(&l.instance, allocation(&l)?)?;
            let violations = verify_trace(&rounds)?;
            lines.push(rounds.len().to_string());
            lines.push(format!(
                "violations: {}",
                if violations.is_empty() {
                    "none".to_string()
                } else {
                    violations.join(", ")
                }
            ));
            lines.push(format!("final: {end}"));
            let steps: Vec<_> = rounds.iter().map(|r| r.exchange()).collect();
            lines.extend(format_trace(&steps));
        }
        Command::Beneficial => {
            let l = cli.loaded()?;
            let res = beneficial_reachable_ef1(&l.instance, allocation(&l)?, cli.options().budget)?;
            lines.push(yes_no(res.reachable).into());
            lines.extend(format_trace(res.trace.as_deref().unwrap_or_default()));
        }
        Command::Reduce {
            source,
            target,
            agents,
        } => {
            let file = parse_file(source, &read_text(source)?)?;
            let src = file.source.ok_or_else(|| CliError::Field {
                path: source.clone(),
                field: "source".into(),
                msg: "missing".into(),
            })?;
            let target: Reduction = target.parse()?;
            let red = match (target, agents) {
                (Reduction::IdenticalConstant, Some(n)) => reduce_identical_constant(&src, *n)?,
                (_, Some(_)) => return Err(usage("--agents only applies to identical-constant")),
                _ => reduce(&src, target)?,
            };
            let mut out = InstanceFile::from_parts(
                &red.instance,
                red.initial_allocation.as_ref(),
                Some(&red.size_vector),
            );
            out.source = Some(src);
            out.target = Some(target.tag().into());
            out.budget_k = red.budget_k;
            return Ok(out.to_canonical());
        }
        Command::Generate { n, m, class, max_u } => {
            let class: UtilityClass = class.parse()?;
            if *n < 2 || n.saturating_mul(*m) > MAX_GENERATED_GOODS {
                return Err(usage(format!(
                    "generate needs --n >= 2 and n*m up to {MAX_GENERATED_GOODS}"
                )));
            }
            let mut rng = seeded_rng(cli.seed.unwrap_or(0));
            let inst = random_instance_with(&mut rng, *n, *m, class, *max_u)?;
            let sv = cli.size_vector.as_deref().map(parse_csv).transpose()?;
            if let Some(sv) = &sv {
                sv.check_for(&inst)?;
            }
            let alloc = sv.as_ref().map(|sv| random_allocation(&mut rng, sv));
            return Ok(InstanceFile::from_parts(&inst, alloc.as_ref(), sv.as_ref()).to_canonical());
        }
        Command::Oracle => {
            let l = cli.loaded()?;
            let sv = cli.size_vector(&l)?;
            let budget = cli.options().budget;
            lines.push(yes_no(exists_ef1_bruteforce(&l.instance, &sv, budget)?).into());
            if let Some(a) = &l.allocation {
                if a.size_vector() == sv {
                    let res = min_exchanges_bfs(&l.instance, a, budget)?;
                    lines.push(format!("min-exchanges: {}", res.distance));
                    if res.distance != Distance::Infinite {
                        lines.extend(format_trace(res.trace.as_deref().unwrap_or_default()));
                    }
                }
            }
        }
    }
    let mut report = lines.join("\n");
    report.push('\n');
    Ok(report)
}
