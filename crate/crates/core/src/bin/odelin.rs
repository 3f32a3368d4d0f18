use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use odelin::corpus::run_corpus;
use odelin::report::{run_pipeline, Mode, Options, Report};

#[derive(Parser)]
#[command(
    name = "odelin",
    version,
    about = "Linearization of y'' = f(x, y, y') cubic in y'"
)]
struct Cli {
    /// Sampling seed, hexadecimal.
    #[arg(long, global = true, default_value = "C0FFEE", value_parser = parse_hex)]
    seed: u64,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// RK4 steps over the unit comparison interval.
    #[arg(long, global = true, default_value_t = 1000)]
    steps: usize,
    /// Symbolic parameters, comma separated.
    #[arg(long = "param", global = true, value_delimiter = ',')]
    params: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Aux {
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
}

#[derive(Args, Clone, Default)]
struct Pipeline {
    #[command(flatten)]
    aux: Aux,
    /// Ansatz ladder: `default`, `poly:D`, `inv-y:K:D`, `basis:e1;e2;...`, joined by `,`.
    #[arg(long)]
    ansatz: Option<String>,
    /// Solution of the third-order auxiliary ODE.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["h1", "h2"])]
    g: Option<String>,
    /// Basis of the second-order auxiliary ODE.
    #[arg(long, allow_hyphen_values = true, requires = "h2")]
    h1: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "h1")]
    h2: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Lie-Tresse test only.
    Check { equation: String },
    /// Check a candidate (w, z) against the Lie conditions.
    LieVerify {
        equation: String,
        #[command(flatten)]
        aux: Aux,
    },
    /// Check a candidate lambda for the canonical pair.
    LambdaVerify {
        equation: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Check a candidate point transformation.
    TransformVerify {
        equation: String,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
        #[command(flatten)]
        aux: Aux,
    },
    /// Find a linearizing transformation.
    Linearize {
        equation: String,
        #[command(flatten)]
        pipeline: Pipeline,
    },
    /// Linearize, then build and verify the general solution.
    Solve {
        equation: String,
        #[command(flatten)]
        pipeline: Pipeline,
    },
    /// Run every `*.toml` case of a directory.
    Corpus { dir: PathBuf },
}

fn parse_hex(s: &str) -> Result<u64, String> {
    let digits = s.trim_start_matches("0x").trim_start_matches("0X");
    u64::from_str_radix(digits, 16).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut opts = Options {
        seed: cli.seed,
        params: cli.params.clone(),
        steps: cli.steps,
        ..Options::default()
    };
    let (equation, mode) = match cli.command {
        Command::Corpus { dir } => return corpus(&cli.json, &dir, cli.seed, cli.steps),
        Command::Check { equation } => (equation, Mode::Check),
        Command::LieVerify { equation, aux } => {
            (opts.w, opts.z) = (aux.w, aux.z);
            (equation, Mode::LieVerify)
        }
        Command::LambdaVerify { equation, lambda } => (equation, Mode::LambdaVerify { lambda }),
        Command::TransformVerify {
            equation,
            phi,
            psi,
            aux,
        } => {
            (opts.w, opts.z) = (aux.w, aux.z);
            (equation, Mode::TransformVerify { phi, psi })
        }
        Command::Linearize { equation, pipeline } => {
            apply(&mut opts, pipeline);
            (equation, Mode::Linearize)
        }
        Command::Solve { equation, pipeline } => {
            apply(&mut opts, pipeline);
            (equation, Mode::Solve)
        }
    };
    opts.mode = mode;
    let report = run_pipeline(&equation, &opts);
    print_summary(&report);
    if let Err(e) = write_json(&cli.json, &report.to_json()) {
        eprintln!("error: {e}");
        return ExitCode::from(3);
    }
    ExitCode::from(report.exit_code() as u8)
}

fn apply(opts: &mut Options, p: Pipeline) {
    opts.w = p.aux.w;
    opts.z = p.aux.z;
    opts.ansatz = p.ansatz;
    opts.g = p.g;
    opts.h = p.h1.zip(p.h2);
}

fn write_json(path: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) if p.as_os_str() == "-" => {
            println!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, format!("{text}\n")),
        None => Ok(()),
    }
}

fn print_summary(r: &Report) {
    let s = &r.status;
    println!("equation: {}", r.input);
    if let Some(c) = &r.extracted {
        println!(
            "  F3 = {}, F2 = {}, F1 = {}, F = {}",
            c.f3, c.f2, c.f1, c.f0
        );
    }
    if let Some(lt) = &r.lie_tresse {
        println!(
            "  lie-tresse: [{}, {}] -> {}",
            lt.first.residual,
            lt.second.residual,
            if lt.linearizable {
                "linearizable"
            } else {
                "not linearizable"
            }
        );
    }
    if let Some(a) = &r.aux {
        println!("  (w, z) = ({}, {}) [{:?}]", a.w, a.z, a.provenance);
    }
    if let Some(l) = &r.lambda {
        println!(
            "  lambda = {}  (determining residual {})",
            l.lambda, l.determining.residual
        );
    }
    if let Some(t) = &r.transform {
        println!("  phi = {}", t.phi);
        println!("  psi = {}", t.psi);
        println!("  jacobian = {}  verified: {}", t.jacobian, t.verified);
    }
    if let Some(g) = &r.general_solution {
        println!("  general solution: {}", g.implicit);
        if let Some(e) = &g.explicit {
            println!("                    {e}");
        }
        println!("  solution verified: {} ({})", g.verified, g.mode);
    }
    if let Some(n) = &r.numeric {
        if let Some(rk) = &n.rk4 {
            println!("  rk4 max deviation: {:.3e}", rk.result.max_deviation);
        }
    }
    for e in &r.numeric_only_zero {
        println!("  numeric-only zero: {e}");
    }
    print!(
        "status: {:?} (exit {}) at stage {}",
        s.verdict, s.exit_code, s.stage
    );
    match &s.message {
        Some(m) => println!(": {m}"),
        None => println!(),
    }
}

fn corpus(json: &Option<PathBuf>, dir: &std::path::Path, seed: u64, steps: usize) -> ExitCode {
    let entries = match run_corpus(dir, seed, steps) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    let mut ok = true;
    for e in &entries {
        let verdict = e
            .report
            .as_ref()
            .map(|r| format!("{:?}", r.status.verdict))
            .unwrap_or_default();
        println!(
            "{} {:<28} exit {} (expected {}) {}{}",
            if e.passed { "PASS" } else { "FAIL" },
            e.file,
            e.exit_code,
            e.expected_exit,
            verdict,
            e.error
                .as_deref()
                .map(|m| format!(": {m}"))
                .unwrap_or_default()
        );
        ok &= e.passed;
    }
    let text = serde_json::to_string_pretty(&entries).expect("corpus serializes");
    if let Err(e) = write_json(json, &text) {
        eprintln!("error: {e}");
        return ExitCode::from(3);
    }
    ExitCode::from(if ok { 0 } else { 4 })
}
