//! `forest-hopf`: products, coproducts, antipodes and law checks for the
//! Connes-Kreimer and free Rota-Baxter algebras on planar forests.
//!
//! Exit codes: 0 success, 1 check failures, 2 usage or parse error,
//! 3 domain error, 4 unsupported weight.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use forest_hopf::{Alphabet, Weight};

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "forest-hopf", version, about)]
struct Cli {
    /// Comma-separated decoration alphabet.
    #[arg(long, global = true, default_value = "a,b", value_parser = parse_alphabet)]
    alphabet: Alphabet,

    /// Weight λ: `L` keeps it symbolic, a rational fixes it.
    #[arg(long, global = true, value_parser = parse_weight)]
    weight: Option<Weight>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Vertex bound for `check` and `enumerate`.
    #[arg(long, global = true, default_value_t = 5)]
    max_vertices: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algebra {
    /// Connes-Kreimer: concatenation and the cocycle coproduct.
    Ck,
    /// Free Rota-Baxter: diamond product and the transported coproduct.
    Rb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    /// Bracketed word to forest.
    #[value(alias = "forward")]
    ToForest,
    /// Leaf-decorated forest to bracketed word.
    #[value(alias = "inverse")]
    ToWord,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Forests,
    Rbf,
}

/// Expressions are given inline, as `@path`, or as `-` for stdin. A
/// leading `{` selects the JSON encoding.
#[derive(Subcommand, Debug)]
enum Command {
    /// Canonicalize a linear combination.
    Parse { expr: String },
    /// Multiply two linear combinations.
    Mul {
        #[arg(long, value_enum, default_value_t = Algebra::Ck)]
        algebra: Algebra,
        left: String,
        right: String,
    },
    /// Coproduct.
    Coprod {
        #[arg(long, value_enum, default_value_t = Algebra::Ck)]
        algebra: Algebra,
        expr: String,
    },
    /// Antipode (the rb algebra requires --weight 0).
    Antipode {
        #[arg(long, value_enum, default_value_t = Algebra::Ck)]
        algebra: Algebra,
        expr: String,
    },
    /// Project leaf-decorated forests onto Rota-Baxter forests.
    Phi { expr: String },
    /// Convert between bracketed words and forests.
    Theta {
        #[arg(value_enum)]
        direction: Direction,
        expr: String,
    },
    /// Run a law-checking suite, or `all`.
    Check { suite: String },
    /// List a basis up to --max-vertices.
    Enumerate {
        #[arg(value_enum)]
        kind: Kind,
    },
}

fn parse_alphabet(s: &str) -> Result<Alphabet, String> {
    s.parse().map_err(|e: forest_hopf::Error| e.to_string())
}

fn parse_weight(s: &str) -> Result<Weight, String> {
    s.parse().map_err(|e: forest_hopf::Error| e.to_string())
}

pub struct Config {
    pub alphabet: Alphabet,
    pub weight: Option<Weight>,
    pub format: Format,
    pub max_vertices: usize,
}

impl Config {
    pub fn output_weight(&self) -> Weight {
        self.weight.clone().unwrap_or_default()
    }
}

fn configure_threads() {
    let Ok(v) = std::env::var("FOREST_HOPF_THREADS") else {
        return;
    };
    if let Ok(n) = v.trim().parse::<usize>() {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let cfg = Config {
        alphabet: cli.alphabet,
        weight: cli.weight,
        format: cli.format,
        max_vertices: cli.max_vertices,
    };
    let result = match cli.command {
        Command::Parse { expr } => commands::parse(&expr, &cfg),
        Command::Mul {
            algebra,
            left,
            right,
        } => commands::mul(algebra, &left, &right, &cfg),
        Command::Coprod { algebra, expr } => commands::coprod(algebra, &expr, &cfg),
        Command::Antipode { algebra, expr } => commands::antipode(algebra, &expr, &cfg),
        Command::Phi { expr } => commands::phi(&expr, &cfg),
        Command::Theta { direction, expr } => commands::theta(direction, &expr, &cfg),
        Command::Check { suite } => commands::check(&suite, &cfg),
        Command::Enumerate { kind } => commands::enumerate(kind, &cfg),
    };
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl From<forest_hopf::Error> for CliError {
    fn from(e: forest_hopf::Error) -> Self {
        CliError::Core(e)
    }
}
