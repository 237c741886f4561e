//! The `inversion` command line.
//!
//! Exit codes: 0 success or affirmative answer, 1 definite negative answer,
//! 2 input or usage error, 3 a size guard was exceeded.

use std::fs;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand};

use crate::bounds::{self, BoundReport, Sampling};
use crate::constructions;
use crate::digraph::{is_decycling, Digraph, InversionFamily};
use crate::error::Error;
use crate::exact::{self, Bounded, Limits, SearchOptions};
use crate::f2::BitMatrix;
use crate::fpt;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "inversion", version, about = "Inversion numbers of oriented graphs and tournaments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Guards {
    /// Run even when an input exceeds the default size guards
    #[arg(long)]
    accept_long_runtimes: bool,
}

impl Guards {
    fn limits(&self) -> Limits {
        Limits {
            accept_long_runtimes: self.accept_long_runtimes,
            ..Limits::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact inversion number with a witness family
    Solve {
        /// Digraph file, or - for stdin
        file: String,
        #[arg(long)]
        max_k: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        no_symmetry_prune: bool,
        /// Also write the witness family here (- for stdout)
        #[arg(long)]
        family_out: Option<String>,
    },
    /// Decide k-invertibility of a tournament by iterative compression
    Fpt {
        file: String,
        #[arg(short)]
        k: usize,
    },
    /// Check whether a family decycles a digraph
    Check {
        file: String,
        #[arg(long)]
        family: String,
    },
    /// Print a named construction
    Construct {
        #[command(subcommand)]
        which: Construction,
    },
    /// Inversion distance between two tournaments
    Distance {
        first: String,
        second: String,
        #[arg(long)]
        max_k: usize,
    },
    /// Minimum vertex set meeting every cycle
    Tau {
        file: String,
        #[command(flatten)]
        guards: Guards,
    },
    /// Minimum edge set meeting every cycle
    TauPrime {
        file: String,
        #[command(flatten)]
        guards: Guards,
    },
    /// Lower and upper bounds on the maximum inversion number of n-vertex tournaments
    Bounds { n: usize },
    /// Rank over F2 of a matrix, or of the certificate of a digraph and family
    Rank {
        /// Matrix file, or a digraph file when --certificate is given
        file: String,
        #[arg(long)]
        certificate: Option<String>,
    },
    /// Seeded experiments, written as CSV
    Experiment {
        #[command(subcommand)]
        which: Experiment,
    },
}

#[derive(Subcommand, Debug)]
enum Construction {
    C3,
    Transitive { n: usize },
    /// k-join of the digraphs in the given files
    Kjoin {
        #[arg(required = true)]
        files: Vec<String>,
    },
    Dijoin { left: String, right: String },
    V5,
    #[command(name = "ce-r")]
    CeR,
    Qn { n: usize },
    Tau { k: usize, n: usize },
    /// Uniformly random tournament
    Random {
        n: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct ExperimentOpts {
    /// Base seed; trial t uses seed ^ t
    #[arg(long)]
    seed: Option<u64>,
    /// Enumerate the whole space instead of sampling
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl ExperimentOpts {
    fn sampling(&self, trials: u64) -> Result<Sampling, Failure> {
        if self.exhaustive {
            return Ok(Sampling::Exhaustive);
        }
        let seed = self
            .seed
            .ok_or_else(|| Failure::Usage("--seed is required unless --exhaustive is given".into()))?;
        Ok(Sampling::Random { trials, seed })
    }
}

#[derive(Subcommand, Debug)]
enum Experiment {
    /// Fraction of random symmetric n x n matrices with rank at most n - s
    RankTail {
        n: usize,
        s: usize,
        trials: u64,
        #[command(flatten)]
        opts: ExperimentOpts,
    },
    /// Fraction of random n-vertex tournaments with inversion number at most k
    RandomInv {
        n: usize,
        k: usize,
        trials: u64,
        #[command(flatten)]
        opts: ExperimentOpts,
    },
}

enum Failure {
    Lib(Error),
    Io(String, std::io::Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Lib(Error::GuardExceeded { .. }) => EXIT_GUARD,
            _ => EXIT_INPUT,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(path, e) => format!("{path}: {e}"),
            Failure::Usage(m) => m.clone(),
        }
    }
}

fn display_path(path: &str) -> &str {
    if path == "-" {
        "<stdin>"
    } else {
        path
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, path: &str) -> Result<String, Failure> {
        if path == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io("<stdin>".into(), e))?;
            Ok(s)
        } else {
            fs::read_to_string(path).map_err(|e| Failure::Io(path.into(), e))
        }
    }

    fn digraph(&mut self, path: &str) -> Result<Digraph, Failure> {
        let text = self.read(path)?;
        Digraph::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", display_path(path))))
    }

    fn family(&mut self, path: &str) -> Result<InversionFamily, Failure> {
        let text = self.read(path)?;
        InversionFamily::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", display_path(path))))
    }

    fn print(&mut self, s: &str) -> Result<(), Failure> {
        self.stdout
            .write_all(s.as_bytes())
            .map_err(|e| Failure::Io("<stdout>".into(), e))
    }

    fn write_to(&mut self, path: &str, s: &str) -> Result<(), Failure> {
        if path == "-" {
            self.print(s)
        } else {
            fs::write(path, s).map_err(|e| Failure::Io(path.into(), e))
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_INPUT
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let mut io = Io { stdin, stdout };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}

fn print_bounded(io: &mut Io<'_>, name: &str, result: &Bounded, family_out: Option<&str>) -> Result<i32, Failure> {
    match result {
        Bounded::Found { k, family } => {
            io.print(&format!("{name} = {k}\n"))?;
            io.print(&family.to_text())?;
            if let Some(path) = family_out {
                io.write_to(path, &family.to_text())?;
            }
            Ok(EXIT_OK)
        }
        Bounded::ExceedsMax(max) => {
            io.print(&format!("{name} > {max}\n"))?;
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn order_line(order: &[usize]) -> String {
    let items: Vec<String> = order.iter().map(|v| v.to_string()).collect();
    format!("order: {}\n", items.join(" "))
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Result<i32, Failure> {
    match command {
        Command::Solve {
            file,
            max_k,
            threads,
            no_symmetry_prune,
            family_out,
        } => {
            let d = io.digraph(&file)?;
            let opts = SearchOptions {
                prune_symmetry: !no_symmetry_prune,
                threads,
            };
            let result = exact::inversion_number(&d, max_k, opts)?;
            print_bounded(io, "inv", &result, family_out.as_deref())
        }
        Command::Fpt { file, k } => {
            let t = io.digraph(&file)?;
            match fpt::fpt_inversion(&t, k)? {
                Some((family, order)) => {
                    io.print(&format!("inv <= {k}\n"))?;
                    io.print(&order_line(order.as_slice()))?;
                    io.print(&family.to_text())?;
                    Ok(EXIT_OK)
                }
                None => {
                    io.print(&format!("inv > {k}\n"))?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Check { file, family } => {
            let d = io.digraph(&file)?;
            let f = io.family(&family)?;
            if is_decycling(&d, &f)? {
                io.print("decycling\n")?;
                Ok(EXIT_OK)
            } else {
                io.print("not decycling\n")?;
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::Construct { which } => {
            let d = match which {
                Construction::C3 => constructions::c3(),
                Construction::Transitive { n } => constructions::transitive(n),
                Construction::Kjoin { files } => {
                    let parts = files.iter().map(|f| io.digraph(f)).collect::<Result<Vec<_>, _>>()?;
                    constructions::kjoin(&parts)?
                }
                Construction::Dijoin { left, right } => {
                    let l = io.digraph(&left)?;
                    let r = io.digraph(&right)?;
                    constructions::dijoin(&l, &r)
                }
                Construction::V5 => constructions::v5(),
                Construction::CeR => constructions::counterexample_r(),
                Construction::Qn { n } => constructions::qn(n),
                Construction::Tau { k, n } => constructions::tau_construction(k, n)?,
                Construction::Random { n, seed } => constructions::random_tournament(n, seed),
            };
            io.print(&d.to_text())?;
            Ok(EXIT_OK)
        }
        Command::Distance { first, second, max_k } => {
            let a = io.digraph(&first)?;
            let b = io.digraph(&second)?;
            let result = exact::inversion_distance(&a, &b, max_k, SearchOptions::default())?;
            print_bounded(io, "distance", &result, None)
        }
        Command::Tau { file, guards } => {
            let d = io.digraph(&file)?;
            let (t, set) = exact::tau(&d, guards.limits())?;
            let items: Vec<String> = set.iter().map(|v| v.to_string()).collect();
            io.print(&format!("tau = {t}\n{}\n", items.join(" ")))?;
            Ok(EXIT_OK)
        }
        Command::TauPrime { file, guards } => {
            let d = io.digraph(&file)?;
            let (t, edges) = exact::tau_prime(&d, guards.limits())?;
            let mut out = format!("tau' = {t}\n");
            for (u, v) in edges {
                out.push_str(&format!("{u} {v}\n"));
            }
            io.print(&out)?;
            Ok(EXIT_OK)
        }
        Command::Bounds { n } => {
            io.print(&BoundReport::new(n).to_string())?;
            Ok(EXIT_OK)
        }
        Command::Rank { file, certificate } => {
            match certificate {
                Some(fam) => {
                    let d = io.digraph(&file)?;
                    let f = io.family(&fam)?;
                    let (s, r) = bounds::rank_certificate(&d, &f)?;
                    io.print(&format!("rank = {r}\n"))?;
                    io.print(&s.to_text())?;
                }
                None => {
                    let text = io.read(&file)?;
                    let m = BitMatrix::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", display_path(&file))))?;
                    io.print(&format!("rank = {}\n", m.rank()))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Experiment { which } => {
            let row = match which {
                Experiment::RankTail { n, s, trials, opts } => {
                    bounds::rank_tail_experiment(n, s, opts.sampling(trials)?, opts.threads)?
                }
                Experiment::RandomInv { n, k, trials, opts } => {
                    bounds::random_inv_experiment(n, k, opts.sampling(trials)?, opts.threads)?
                }
            };
            let mut buf = Vec::new();
            bounds::write_csv(&[row], &mut buf).map_err(|e| Failure::Io("<csv>".into(), e))?;
            io.print(&String::from_utf8(buf).expect("csv output is UTF-8"))?;
            Ok(EXIT_OK)
        }
    }
}
