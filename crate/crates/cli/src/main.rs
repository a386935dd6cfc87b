use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latidem::io::{parse_lattice_file, render_text, FormalSumDocument};
use latidem::verify::{
    default_corpus, run_suite, CheckKind, CheckReport, Limits, Status, SuiteOptions, Target,
};
use latidem::{
    idempotent_direct, idempotent_original, mu_chain_infinity, mu_chain_infinity_oracle, Chain,
    ChainFamilyKind, Descriptor, Error, GenerateOptions, Lattice, RingSpec,
};

#[derive(Parser)]
#[command(
    name = "latidem",
    version,
    about = "Central idempotents of finite lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size, bounds, height and chain family counts
    Info {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compute the idempotent e_T^tot
    Idempotent {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
        /// Skip chains with a non-complemented step
        #[arg(long)]
        crapo: bool,
        #[arg(long, default_value = "int")]
        ring: RingSpec,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run verification checks
    Verify(VerifyArgs),
    /// Möbius values: μ(x,y), or μ(A,∞) with --chain
    Mobius {
        #[command(flatten)]
        input: InputArgs,
        #[arg(required_unless_present = "chain", requires = "y")]
        x: Option<String>,
        y: Option<String>,
        #[arg(long, value_delimiter = ',', conflicts_with = "x")]
        chain: Option<Vec<String>>,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Lattice file, or a generator such as `boolean:3` or `product:chain:1,chain:2`
    input: String,
    /// Allow generators beyond the default size caps
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Lattice files or generators
    inputs: Vec<String>,
    #[arg(long, value_enum)]
    corpus: Option<Corpus>,
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<CheckKind>>,
    #[arg(long = "ring", value_delimiter = ',', default_value = "int")]
    rings: Vec<RingSpec>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Endomorphisms drawn in sampled mode
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// Largest |T|^|J(T)| swept exhaustively
    #[arg(long)]
    max_endos: Option<u64>,
    #[arg(long)]
    max_irreducibles: Option<usize>,
    #[arg(long)]
    max_chain_poset: Option<usize>,
    #[arg(long)]
    allow_large: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Record wall time per report
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Direct,
    Original,
}

#[derive(Clone, Copy, ValueEnum)]
enum Corpus {
    Default,
}

fn load(input: &str, allow_large: bool) -> Result<Target, Error> {
    if Path::new(input).is_file() {
        let text = std::fs::read_to_string(input).map_err(|e| Error::Parse {
            line: 0,
            message: format!("{input}: {e}"),
        })?;
        return Ok(Target::new(input, parse_lattice_file(&text)?));
    }
    let descriptor: Descriptor = input.parse()?;
    let lattice = descriptor.generate_with(GenerateOptions { allow_large })?;
    Ok(Target::new(descriptor.to_string(), lattice))
}

fn info(lattice: &Lattice, format: Format) -> Result<String, Error> {
    let sizes = |kind| -> Vec<usize> {
        (0..=lattice.height())
            .map(|n| lattice.chain_family(kind, Some(n)).len())
            .collect()
    };
    let (a, b, z) = (
        sizes(ChainFamilyKind::A),
        sizes(ChainFamilyKind::B),
        sizes(ChainFamilyKind::Z),
    );
    let complemented = lattice.is_complemented_interval(lattice.bottom(), lattice.top())?;
    Ok(match format {
        Format::Json => {
            let value = serde_json::json!({
                "elements": lattice.len(),
                "bottom": lattice.name(lattice.bottom()),
                "top": lattice.name(lattice.top()),
                "height": lattice.height(),
                "a_sizes": a,
                "b_sizes": b,
                "z_sizes": z,
                "complemented": complemented,
                "fingerprint": lattice.fingerprint(),
            });
            format!("{}\n", serde_json::to_string_pretty(&value).expect("json"))
        }
        Format::Text => {
            let mut out = format!(
                "elements {}\nbottom {}\ntop {}\nheight {}\ncomplemented {}\n",
                lattice.len(),
                lattice.name(lattice.bottom()),
                lattice.name(lattice.top()),
                lattice.height(),
                if complemented { "yes" } else { "no" },
            );
            out.push_str("n\t|A_n|\t|B_n|\t|Z_n|\n");
            for n in 0..a.len() {
                out.push_str(&format!("{n}\t{}\t{}\t{}\n", a[n], b[n], z[n]));
            }
            out
        }
    })
}

fn mobius(
    lattice: &Lattice,
    x: Option<String>,
    y: Option<String>,
    chain: Option<Vec<String>>,
) -> Result<String, Error> {
    if let Some(labels) = chain {
        let chain = Chain::from_labels(lattice.poset(), &labels)?;
        if !lattice.is_in_family(&chain, ChainFamilyKind::A) {
            return Err(Error::ChainNotInA);
        }
        let product = mu_chain_infinity(lattice, &chain)?;
        let limit = Limits::from_env().max_chain_poset;
        let oracle = match mu_chain_infinity_oracle(lattice, &chain, limit) {
            Ok(v) => v.to_string(),
            Err(Error::FeasibilityLimit(reason)) => format!("skipped ({reason})"),
            Err(e) => return Err(e),
        };
        return Ok(format!("product {product}\noracle {oracle}\n"));
    }
    let (x, y) = (x.expect("clap"), y.expect("clap"));
    let value = lattice.mobius(lattice.index_of(&x)?, lattice.index_of(&y)?)?;
    Ok(format!("{value}\n"))
}

fn describe(report: &CheckReport) -> String {
    let status = match &report.status {
        Status::Pass => "PASS".to_owned(),
        Status::Fail => "FAIL".to_owned(),
        Status::Skipped(reason) => format!("SKIP ({reason})"),
    };
    let ring = report.ring.map(|r| format!(" [{r}]")).unwrap_or_default();
    let mut line = format!("{status} {} {}{ring}", report.check, report.lattice);
    if let Some(w) = &report.counterexample {
        line.push_str(&format!(" {}", serde_json::to_string(w).expect("json")));
    }
    line
}

fn verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let mut targets = Vec::new();
    if args.corpus.is_some() {
        for d in default_corpus() {
            targets.push(Target::from_descriptor(&d)?);
        }
    }
    for input in &args.inputs {
        targets.push(load(input, args.allow_large)?);
    }
    let mut limits = Limits::from_env();
    limits.max_assignments = args.max_endos.unwrap_or(limits.max_assignments);
    limits.max_irreducibles = args.max_irreducibles.unwrap_or(limits.max_irreducibles);
    limits.max_chain_poset = args.max_chain_poset.unwrap_or(limits.max_chain_poset);
    let options = SuiteOptions {
        limits,
        seed: args.seed,
        sample_count: args.samples,
        record_timings: args.timings,
    };
    let checks = args.checks.unwrap_or_else(|| CheckKind::ALL.to_vec());
    let reports = run_suite(&targets, &args.rings, &checks, &options);
    for r in &reports {
        match args.format {
            Format::Json => println!("{}", serde_json::to_string(r).expect("json")),
            Format::Text => println!("{}", describe(r)),
        }
    }
    Ok(if reports.iter().any(CheckReport::failed) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let output = match cli.command {
        Command::Verify(args) => return verify(args),
        Command::Info { input, format } => {
            info(&load(&input.input, input.allow_large)?.lattice, format)?
        }
        Command::Idempotent {
            input,
            method,
            crapo,
            ring,
            format,
        } => {
            let lattice: Arc<Lattice> = load(&input.input, input.allow_large)?.lattice;
            let e = match method {
                Method::Direct => idempotent_direct(&lattice, ring, crapo),
                Method::Original => idempotent_original(&lattice, ring),
            };
            match format {
                Format::Text => render_text(&e),
                Format::Json => format!("{}\n", FormalSumDocument::from_sum(&e).to_json()),
            }
        }
        Command::Mobius { input, x, y, chain } => {
            mobius(&load(&input.input, input.allow_large)?.lattice, x, y, chain)?
        }
    };
    print!("{output}");
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    run(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
