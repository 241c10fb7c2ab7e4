use clap::{Parser, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use subhardy::cli::{self, Command, RunConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CommandArg {
    Basis,
    Check,
    Wold,
    WoldMulti,
    Debranges,
    Gallery,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::Basis => Command::Basis,
            CommandArg::Check => Command::Check,
            CommandArg::Wold => Command::Wold,
            CommandArg::WoldMulti => Command::WoldMulti,
            CommandArg::Debranges => Command::Debranges,
            CommandArg::Gallery => Command::Gallery,
        }
    }
}

/// Blaschke products, near-isometry certificates and Wold-type
/// decompositions on truncated Hardy spaces. Reports are JSON.
///
/// Exit status: 0 all verdicts pass, 1 a verdict fails, 2 usage or parse error.
#[derive(Debug, Parser)]
#[command(name = "subhardy", version)]
struct Args {
    command: CommandArg,
    /// JSON input file; stdin when omitted. `gallery` takes no input.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = cli::DEFAULT_TOL)]
    tol: f64,
    /// Truncation degree for `basis` [default: enough for a 1e-10 tail].
    #[arg(long)]
    cap: Option<usize>,
    /// Largest power in the range-containment test.
    #[arg(long, default_value_t = subhardy::operator::DEFAULT_K_MAX)]
    k_max: usize,
    /// Largest `m` in `basis` [default: 10]; number of layers in `wold` [default: window dimension].
    #[arg(long)]
    m_max: Option<usize>,
    /// Largest power used for intersections of ranges [default: window dimension].
    #[arg(long)]
    power_cap: Option<usize>,
    /// Number of operators used by `wold-multi` [default: all].
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = subhardy::debranges::DEFAULT_SEED)]
    seed: u64,
    /// Lattice size for `gallery`.
    #[arg(long = "N", default_value_t = cli::DEFAULT_GALLERY_N)]
    n: i64,
    /// Weighted-shift dimension for `gallery`.
    #[arg(long, default_value_t = cli::DEFAULT_GALLERY_D)]
    d: usize,
}

impl From<Args> for RunConfig {
    fn from(a: Args) -> Self {
        RunConfig {
            command: a.command.into(),
            tol: a.tol,
            cap: a.cap,
            k_max: a.k_max,
            m_max: a.m_max,
            power_cap: a.power_cap,
            m: a.m,
            seed: a.seed,
            n: a.n,
            d: a.d,
            input_path: a.input,
            output_path: a.output,
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let config = RunConfig::from(args);
    let code = cli::run(
        &config,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
