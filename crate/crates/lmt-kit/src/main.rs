//! `lmt-kit`: checks, provers and constructions of `lmt-core` on files.

mod cmd;
mod dot;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{Failure, Report};

#[derive(Parser, Debug)]
#[command(name = "lmt-kit", version, about = "Finite checks for layered monoidal theories")]
struct Cli {
    #[command(flatten)]
    cfg: RunConfig,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

/// Global settings shared by every command.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Seed for corpus generation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Prover node limit; falls back to LMT_DEFAULT_BUDGET, then a per-command default.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Enumeration bound (term size, fragment size).
    #[arg(long, global = true)]
    pub bound: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Longest zigzag word explored by deflation commands.
    #[arg(long, global = true, default_value_t = 4)]
    pub len: usize,
    /// Largest 2-cell expression explored by deflation commands.
    #[arg(long, global = true, default_value_t = 12)]
    pub cellsize: usize,
}

impl RunConfig {
    pub fn budget_or(&self, default: usize) -> Result<usize, Failure> {
        if let Some(b) = self.budget {
            return Ok(b);
        }
        match std::env::var("LMT_DEFAULT_BUDGET") {
            Ok(v) => v.trim().parse().map_err(|_| Failure::Input(format!("LMT_DEFAULT_BUDGET is not a number: `{v}`"))),
            Err(_) => Ok(default),
        }
    }

    pub fn bound_or(&self, default: usize) -> usize {
        self.bound.unwrap_or(default)
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Opfibrations, fibrations and the Grothendieck construction.
    #[command(subcommand)]
    Fib(FibCmd),
    /// Profunctors and coends.
    #[command(subcommand)]
    Prof(ProfCmd),
    /// Displayed categories and collages.
    #[command(subcommand)]
    Disp(DispCmd),
    /// Monoidal theories.
    #[command(subcommand)]
    Mth(MthCmd),
    /// Layered theories.
    #[command(subcommand)]
    Lmt(LmtCmd),
    /// Indexed monoids and im-opfibrations.
    #[command(subcommand)]
    Imon(ImonCmd),
    /// Deflations built from split opfibrations.
    #[command(subcommand)]
    Defl(DeflCmd),
    /// The zigzag 2-category of a finite base.
    #[command(subcommand)]
    Zg(ZgCmd),
    /// Writes a seeded random corpus of `.fc` or `.fun` files.
    Corpus(CorpusArgs),
}

#[derive(Subcommand, Debug)]
pub enum FibCmd {
    /// Is the functor an opfibration.
    CheckOp { file: PathBuf },
    /// Is the functor a fibration.
    CheckFib { file: PathBuf },
    /// Grothendieck construction of the indexed category of a split opfibration.
    Grothendieck { file: PathBuf },
    /// Opfibration to indexed category and back, up to isomorphism.
    Roundtrip { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum ProfCmd {
    /// Coend composite of the refine embeddings of two composable functors.
    Compose { first: PathBuf, second: PathBuf },
    /// The refine/coarsen adjunction of a functor.
    Adjunction { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum DispCmd {
    /// Collage of the displayed category of a functor.
    Collage { file: PathBuf },
    /// Factorisation lifting and laxators.
    Conduche {
        file: PathBuf,
        /// Also check the split laws of the chosen factorisations.
        #[arg(long)]
        split: bool,
    },
    /// Whether the displayed category factors through refine.
    FactorRefine { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum MthCmd {
    /// Proves each `lhs = rhs` goal of an `.eq` file.
    Prove { theory: PathBuf, goals: PathBuf },
    /// Structural normal form of a term.
    Nf { theory: PathBuf, term: String },
    /// Classes of a hom-set among terms up to `--bound`.
    Enumerate {
        theory: PathBuf,
        /// Domain colours, space separated.
        #[arg(long, default_value = "")]
        dom: String,
        /// Codomain colours, space separated.
        #[arg(long, default_value = "")]
        cod: String,
    },
    /// Checks a model in the chosen products of a finite category.
    CheckModel {
        theory: PathBuf,
        category: PathBuf,
        /// `colour=object`, once per colour.
        #[arg(long = "colour")]
        colours: Vec<String>,
        /// `generator=morphism`, once per generator.
        #[arg(long = "gen")]
        gens: Vec<String>,
    },
    /// Replays a trace saved from `mth prove --format json`.
    CheckTrace { theory: PathBuf, trace: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum LmtCmd {
    /// Parses a theory, or typechecks a term against it.
    Typecheck { theory: PathBuf, term: Option<String> },
    /// Proves `lhs = rhs` goals between 1-terms, one per line.
    Prove1 { theory: PathBuf, goals: PathBuf },
    /// Proves `lhs = rhs` goals between 2-terms, one per line.
    Prove2 { theory: PathBuf, goals: PathBuf },
    /// Structural schema families in force.
    Schemas {
        theory: PathBuf,
        /// Print the statement of every family.
        #[arg(long)]
        dump: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum ImonCmd {
    /// Fox's theorem on every symmetric monoidal structure of a category.
    Fox { file: PathBuf },
    /// Is the functor an im-opfibration.
    Check { file: PathBuf },
    /// Hom-set classes of the free indexed monoid fragment.
    Fim { file: PathBuf },
    /// Presented total theory of a componentwise monoid.
    Mon2im {
        base: PathBuf,
        /// One-object category read as a commutative monoid; trivial if absent.
        #[arg(long)]
        monoid: Option<PathBuf>,
    },
    /// Monoid data read back from the presented theory.
    Im2mon {
        base: PathBuf,
        #[arg(long)]
        monoid: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum DeflCmd {
    /// The deflation of a split opfibration: 1-cells in the fragment.
    Build {
        #[arg(long = "from-opfib")]
        from_opfib: PathBuf,
    },
    /// Deflation axioms on the fragment.
    Check { file: PathBuf },
    /// Unique lifting for every in-bound pair.
    UniqueLift { file: PathBuf },
    /// The star restriction, or the circ restriction with `--circ`.
    Restrict {
        file: PathBuf,
        #[arg(long)]
        circ: bool,
    },
    /// Indexed category read back from a minimal deflation.
    Extract { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum ZgCmd {
    /// Normal form of a zigzag word such as `f g~ h`.
    Normalize { base: PathBuf, word: String },
    /// Equality of two 2-cell expressions.
    Prove { base: PathBuf, lhs: String, rhs: String },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CorpusKind {
    Categories,
    Functors,
    Opfibrations,
    SplitOpfibrations,
    Conduche,
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    #[arg(long, value_enum, default_value_t = CorpusKind::Categories)]
    pub kind: CorpusKind,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 3)]
    pub max_objects: usize,
    /// Including identities.
    #[arg(long, default_value_t = 6)]
    pub max_morphisms: usize,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let cfg = &cli.cfg;
    match &cli.cmd {
        Cmd::Fib(c) => cmd::fib(c, cfg),
        Cmd::Prof(c) => cmd::prof(c, cfg),
        Cmd::Disp(c) => cmd::disp(c, cfg),
        Cmd::Mth(c) => cmd::mth(c, cfg),
        Cmd::Lmt(c) => cmd::lmt(c, cfg),
        Cmd::Imon(c) => cmd::imon(c, cfg),
        Cmd::Defl(c) => cmd::defl(c, cfg),
        Cmd::Zg(c) => cmd::zg(c, cfg),
        Cmd::Corpus(a) => cmd::corpus(a, cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 3,
                _ => 2,
            });
        }
    };
    match run(&cli) {
        Ok(rep) => match rep.render(cli.cfg.format) {
            Ok(out) => {
                print!("{out}");
                ExitCode::from(rep.exit_code())
            }
            Err(f) => {
                eprintln!("error: {f}");
                ExitCode::from(f.code())
            }
        },
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
