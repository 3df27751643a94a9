use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use galembed::job::{execute, execute_batch, Command, JobSpec, Outcome, EXIT_INVALID};

#[derive(Parser)]
#[command(name = "galembed", version, about = "Solve and verify Galois embedding problems")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct ArenaArgs {
    /// Arena variant: R (radical) or C (constant-field extension).
    #[arg(long)]
    arena: String,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long)]
    gamma: String,
    #[arg(long)]
    i: usize,
    #[arg(long)]
    j: usize,
    #[arg(long, default_value = "split")]
    kind: String,
    /// Element of the base field multiplying the first tower generator.
    #[arg(long)]
    f: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock timings (makes reports nondeterministic).
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide an embedding problem and build its radical tower.
    Solve {
        #[command(flatten)]
        arena: ArenaArgs,
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check a proposed solution.
    Verify {
        #[command(flatten)]
        arena: ArenaArgs,
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        beta: String,
        /// Tower generators; defaults to β, ρβ, ….
        #[arg(long, value_delimiter = ',')]
        tower: Option<Vec<String>>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Invariants of the group B_{i,e}.
    Group {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        e: i64,
        #[arg(long)]
        profile: bool,
        /// Test isomorphism with B_{I,E}.
        #[arg(long, num_args = 2, value_names = ["I", "E"], allow_hyphen_values = true)]
        iso_with: Option<Vec<i64>>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Decompose the module generated by classes into cyclic blocks.
    Decompose {
        #[command(flatten)]
        arena: ArenaArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        classes: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve over the cyclotomic lift of F_{q0} and project to the ε-eigenspace.
    Descend {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q0: u64,
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve N(ω) = b for b in the base field.
    Norm {
        #[command(flatten)]
        arena: ArenaArgs,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Split verdicts of E_{i,1}(γ) for every i.
    Chain {
        #[command(flatten)]
        arena: ArenaArgs,
        #[arg(long)]
        gamma: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run one JSON job per line of a file.
    Batch {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn with_arena(job: &mut JobSpec, a: ArenaArgs) {
    job.arena = Some(a.arena);
    job.p = Some(a.p);
    job.q = Some(a.q);
}

fn with_problem(job: &mut JobSpec, pr: ProblemArgs) {
    job.gamma = Some(pr.gamma);
    job.i = Some(pr.i);
    job.j = Some(pr.j);
    job.kind = Some(pr.kind);
    job.f = pr.f;
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn job_from(cmd: Cmd) -> (JobSpec, OutputArgs) {
    let mut job = JobSpec::default();
    let output = match cmd {
        Cmd::Solve { arena, problem, output } => {
            job.command = Some(Command::Solve);
            with_arena(&mut job, arena);
            with_problem(&mut job, problem);
            output
        }
        Cmd::Verify { arena, problem, beta, tower, output } => {
            job.command = Some(Command::Verify);
            with_arena(&mut job, arena);
            with_problem(&mut job, problem);
            job.beta = Some(beta);
            job.tower = tower;
            output
        }
        Cmd::Group { p, i, e, profile, iso_with, output } => {
            job.command = Some(Command::Group);
            job.p = Some(p);
            job.i = Some(i);
            job.e = Some(e);
            job.profile = profile;
            job.iso_with = iso_with.map(|v| (v[0].max(0) as usize, v[1]));
            output
        }
        Cmd::Decompose { arena, classes, output } => {
            job.command = Some(Command::Decompose);
            with_arena(&mut job, arena);
            job.classes = Some(classes);
            output
        }
        Cmd::Descend { p, q0, problem, output } => {
            job.command = Some(Command::Descend);
            job.p = Some(p);
            job.q0 = Some(q0);
            with_problem(&mut job, problem);
            output
        }
        Cmd::Norm { arena, b, output } => {
            job.command = Some(Command::Norm);
            with_arena(&mut job, arena);
            job.b = Some(b);
            output
        }
        Cmd::Chain { arena, gamma, output } => {
            job.command = Some(Command::Chain);
            with_arena(&mut job, arena);
            job.gamma = Some(gamma);
            output
        }
        Cmd::Batch { .. } => unreachable!("batch is handled separately"),
    };
    job.timings = output.timings;
    (job, output)
}

fn run() -> Result<i32, String> {
    if let Ok(v) = std::env::var("GALEMBED_SEEDLESS") {
        if v != "1" {
            return Err(format!(
                "GALEMBED_SEEDLESS={v}: only the deterministic factorization path exists"
            ));
        }
    }
    let cli = Cli::parse();
    if let Cmd::Batch { file, out } = cli.command {
        let text = std::fs::read_to_string(&file)
            .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
        let outcomes: Vec<Outcome> = execute_batch(&text);
        let lines: Vec<String> = outcomes
            .iter()
            .map(|o| serde_json::to_string(&o.report).expect("reports serialize"))
            .collect();
        emit(&lines.join("\n"), out.as_ref())?;
        return Ok(0);
    }
    let (job, output) = job_from(cli.command);
    let outcome = execute(&job);
    emit(&outcome.render(), output.out.as_ref())?;
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID as u8)
        }
    }
}
