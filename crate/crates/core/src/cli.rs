//! Command-line front end.
//!
//! Exit codes: 0 success or `Irreducible`, 1 `Reducible`, 2 parse or
//! configuration error, 3 `NotDecomposable` or `PreconditionFailed`,
//! 4 budget exceeded.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::automaton::{self, AutomatonError, ExportFormat};
use crate::field::{FqCtx, FqElem};
use crate::irreducibility::{
    chain_irreducible, enumerate_level_with, full_decompose, DecompositionTester,
    DecompositionVerdict, IrrError,
};
use crate::monoid::{Alphabet, Freedom, MonoidError, Word};
use crate::padic::{self, LocalVerdict};
use crate::poly::FqPoly;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REDUCIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "quadcomp",
    version,
    about = "Irreducible compositions of monic quadratics over F_q"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Field order, an odd prime power.
    #[arg(long, global = true, conflicts_with = "p")]
    pub q: Option<u64>,
    /// Field characteristic; combine with --k for extension fields.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    #[arg(long, global = true, default_value_t = 1)]
    pub k: u32,
    /// Letters as "a=<elem> b=<elem>" separated by ';', or "maximal" for all x^2 - b.
    #[arg(long, global = true, conflicts_with = "alphabet_file")]
    pub alphabet: Option<String>,
    /// File holding alphabet letters, one per line.
    #[arg(long, global = true)]
    pub alphabet_file: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Upper bound on words or polynomials a command may produce or visit.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    /// Display words innermost letter first.
    #[arg(long, global = true)]
    pub innermost_first: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Dot,
    Json,
}

impl From<Format> for ExportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ExportFormat::Text,
            Format::Dot => ExportFormat::Dot,
            Format::Json => ExportFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    N,
    M,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the interim automaton and the partial DFA.
    Build {
        #[arg(long, value_enum, default_value_t = Emit::M)]
        emit: Emit,
        /// Drop interim states unreachable from the start state.
        #[arg(long)]
        trim: bool,
        /// Minimize the partial DFA before printing.
        #[arg(long)]
        minimize: bool,
    },
    /// Decide irreducibility of a word or of a polynomial.
    Test {
        /// A word such as "ggf", or comma-separated coefficients, lowest degree first.
        input: String,
        #[arg(long, conflicts_with = "poly")]
        word: bool,
        #[arg(long)]
        poly: bool,
    },
    /// List irreducible compositions of length n.
    Enumerate {
        #[arg(short = 'n')]
        n: usize,
        /// Print accepted words instead of polynomials.
        #[arg(long)]
        words: bool,
        /// Append "shift=<a> word=<w>" to each polynomial.
        #[arg(long)]
        annotate: bool,
    },
    /// Count irreducible compositions of length n.
    Count {
        #[arg(short = 'n')]
        n: usize,
        /// Print only the number of accepted words.
        #[arg(long)]
        words: bool,
    },
    /// Report whether the alphabet generates a free monoid.
    Freedom {
        /// Also search for colliding words up to this length.
        #[arg(long)]
        search: Option<usize>,
    },
    /// Decide irreducibility of a chain of p-adic quadratics.
    Local {
        /// Letters "a=<int> b=<int>" separated by ';'; each may override p= and N=.
        #[arg(long)]
        chain: String,
        #[arg(long = "precision", default_value_t = padic::DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Write an irreducible composition as a shifted word over the maximal alphabet.
    Canonicalize { poly: String },
    /// Peel a polynomial into monic quadratics x^2 - a_i and a linear factor.
    Decompose { poly: String },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

impl From<MonoidError> for Failure {
    fn from(e: MonoidError) -> Self {
        let code = match e {
            MonoidError::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<AutomatonError> for Failure {
    fn from(e: AutomatonError) -> Self {
        let code = match e {
            AutomatonError::CountOverflow => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<IrrError> for Failure {
    fn from(e: IrrError) -> Self {
        match e {
            IrrError::Monoid(m) => m.into(),
            IrrError::Automaton(a) => a.into(),
            IrrError::NotDecomposable { .. } => Failure {
                code: EXIT_UNDECIDED,
                message: e.to_string(),
            },
            _ => Failure::usage(e),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the CLI on `args` (program name first), writing to `out` and `err`.
/// Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut buf = Vec::new();
    match dispatch(&cli, &mut buf, err) {
        Ok(code) => {
            let _ = out.write_all(&buf);
            code
        }
        Err(f) => {
            // Nothing a failing command printed is kept, so no verdict ever
            // accompanies a parse or configuration error.
            if f.code != EXIT_USAGE {
                let _ = out.write_all(&buf);
            }
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>, err: &mut dyn Write) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Build {
            emit,
            trim,
            minimize,
        } => cmd_build(g, *emit, *trim, *minimize, out),
        Command::Test { input, word, poly } => cmd_test(g, input, *word, *poly, out),
        Command::Enumerate { n, words, annotate } => {
            cmd_enumerate(g, *n, *words, *annotate, out, err)
        }
        Command::Count { n, words } => cmd_count(g, *n, *words, out),
        Command::Freedom { search } => cmd_freedom(g, *search, out),
        Command::Local { chain, precision } => cmd_local(g, chain, *precision, out),
        Command::Canonicalize { poly } => cmd_canonicalize(g, poly, out),
        Command::Decompose { poly } => cmd_decompose(g, poly, out),
    }
}

fn field(g: &GlobalOpts) -> Result<Arc<FqCtx>, Failure> {
    let ctx = match (g.q, g.p) {
        (Some(q), _) => FqCtx::with_order(q),
        (None, Some(p)) => FqCtx::new(p, g.k),
        (None, None) => return Err(Failure::usage("no field given; pass --q or --p")),
    };
    ctx.map_err(Failure::usage)
}

fn alphabet(g: &GlobalOpts, ctx: &Arc<FqCtx>) -> Result<Alphabet, Failure> {
    let text = match (&g.alphabet, &g.alphabet_file) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) => fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => "maximal".to_string(),
    };
    if text.trim() == "maximal" {
        return Ok(Alphabet::maximal(ctx));
    }
    Ok(Alphabet::parse(ctx, &text)?)
}

fn is_maximal(s: &Alphabet) -> bool {
    s.letters() == Alphabet::maximal(s.ctx()).letters()
}

fn show_word(g: &GlobalOpts, s: &Alphabet, w: &Word) -> String {
    if g.innermost_first {
        let mut r = w.letters().to_vec();
        r.reverse();
        s.format_word(&Word(r))
    } else {
        s.format_word(w)
    }
}

fn parse_poly(ctx: &Arc<FqCtx>, s: &str) -> Result<FqPoly, Failure> {
    FqPoly::parse(ctx, s).map_err(Failure::usage)
}

fn cmd_build(g: &GlobalOpts, emit: Emit, trim: bool, minimize: bool, out: &mut Vec<u8>) -> Outcome {
    let ctx = field(g)?;
    let s = alphabet(g, &ctx)?;
    let (n, mut m) = automaton::build(&s)?;
    if minimize {
        m = m.minimize();
    }
    let format = ExportFormat::from(g.format);
    let n_text = || n.export(format, trim);
    let m_text = || m.export(format);
    let text = match emit {
        Emit::N => n_text(),
        Emit::M => m_text(),
        Emit::Both if g.format == Format::Json => {
            format!("[\n{},\n{}]\n", n_text().trim_end(), m_text().trim_end())
        }
        Emit::Both => format!("{}\n{}", n_text(), m_text()),
    };
    let _ = out.write_all(text.as_bytes());
    Ok(EXIT_OK)
}

fn cmd_test(g: &GlobalOpts, input: &str, word: bool, poly: bool, out: &mut Vec<u8>) -> Outcome {
    let ctx = field(g)?;
    let s = alphabet(g, &ctx)?;
    let as_word = if poly {
        None
    } else {
        match s.parse_word(input) {
            Ok(w) => Some(w),
            Err(e) if word => return Err(e.into()),
            Err(_) => None,
        }
    };
    if let Some(w) = as_word {
        if w.is_empty() {
            let _ = writeln!(out, "Irreducible");
            return Ok(EXIT_OK);
        }
        let report = chain_irreducible(&w, &s)?;
        return Ok(match report.first_failure {
            None => {
                let _ = writeln!(out, "Irreducible");
                EXIT_OK
            }
            Some(i) => {
                let _ = writeln!(out, "Reducible({i})");
                EXIT_REDUCIBLE
            }
        });
    }
    let f = parse_poly(&ctx, input)?;
    let verdict = DecompositionTester::new(&ctx).test(&f)?;
    let _ = writeln!(out, "{verdict}");
    Ok(match verdict {
        DecompositionVerdict::Irreducible => EXIT_OK,
        DecompositionVerdict::Reducible { .. } => EXIT_REDUCIBLE,
        DecompositionVerdict::NotDecomposable { .. } => EXIT_UNDECIDED,
    })
}

fn over_budget(needed: u128, budget: u128) -> Failure {
    Failure {
        code: EXIT_BUDGET,
        message: format!("enumeration would print {needed} lines, over the budget of {budget}"),
    }
}

fn cmd_enumerate(
    g: &GlobalOpts,
    n: usize,
    words: bool,
    annotate: bool,
    out: &mut Vec<u8>,
    err: &mut dyn Write,
) -> Outcome {
    let ctx = field(g)?;
    let s = alphabet(g, &ctx)?;
    let (_, m) = automaton::build(&s)?;
    let count = m.count_accepted(n)?;
    let shifts = is_maximal(&s) && n >= 1 && !words;
    let total = if shifts {
        count.saturating_mul(ctx.order() as u128)
    } else {
        count
    };
    if total > g.budget {
        return Err(over_budget(total, g.budget));
    }
    let level = enumerate_level_with(&m, n);
    if words {
        for w in level.words() {
            let _ = writeln!(out, "{}", show_word(g, &s, w));
        }
        return Ok(EXIT_OK);
    }
    if let Freedom::Unknown = s.freedom_certificate() {
        let _ = writeln!(
            err,
            "warning: freedom of the alphabet is not certified; polynomials may repeat"
        );
    }
    let shift_list: Vec<FqElem> = if shifts {
        ctx.elements().collect()
    } else {
        vec![FqElem::ZERO]
    };
    for &a in &shift_list {
        for w in level.words() {
            let f = s.pi_from(w, FqPoly::linear(&ctx, a));
            if annotate {
                let _ = writeln!(
                    out,
                    "{} shift={} word={}",
                    f.to_coeff_string(),
                    ctx.format(a),
                    show_word(g, &s, w)
                );
            } else {
                let _ = writeln!(out, "{}", f.to_coeff_string());
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_count(g: &GlobalOpts, n: usize, words: bool, out: &mut Vec<u8>) -> Outcome {
    let ctx = field(g)?;
    let s = alphabet(g, &ctx)?;
    let (_, m) = automaton::build(&s)?;
    let count = m.count_accepted(n)?;
    if words {
        let _ = writeln!(out, "{count}");
        return Ok(EXIT_OK);
    }
    let _ = writeln!(out, "words: {count}");
    if is_maximal(&s) && n >= 1 {
        let polys = count
            .checked_mul(ctx.order() as u128)
            .ok_or(AutomatonError::CountOverflow)?;
        let _ = writeln!(out, "polynomials: {polys}");
    }
    Ok(EXIT_OK)
}

fn cmd_freedom(g: &GlobalOpts, search: Option<usize>, out: &mut Vec<u8>) -> Outcome {
    let ctx = field(g)?;
    let s = alphabet(g, &ctx)?;
    let _ = writeln!(out, "{}", s.freedom_certificate());
    if let Some(len) = search {
        match s.collision_search(len, g.budget)? {
            Some((u, v)) => {
                let _ = writeln!(
                    out,
                    "collision: {} = {}",
                    show_word(g, &s, &u),
                    show_word(g, &s, &v)
                );
            }
            None => {
                let _ = writeln!(out, "no collision up to length {len}");
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_local(g: &GlobalOpts, chain: &str, precision: u32, out: &mut Vec<u8>) -> Outcome {
    let chain = padic::parse_chain(chain, g.p, precision).map_err(Failure::usage)?;
    let verdict = padic::local_irreducible(&chain).map_err(Failure::usage)?;
    let _ = writeln!(out, "{verdict}");
    Ok(match verdict {
        LocalVerdict::Irreducible => EXIT_OK,
        LocalVerdict::Reducible => EXIT_REDUCIBLE,
        LocalVerdict::PreconditionFailed => EXIT_UNDECIDED,
    })
}

fn cmd_canonicalize(g: &GlobalOpts, poly: &str, out: &mut Vec<u8>) -> Outcome {
    let ctx = field(g)?;
    let f = parse_poly(&ctx, poly)?;
    let tester = DecompositionTester::new(&ctx);
    match tester.canonicalize(&f) {
        Ok((a, w)) => {
            let _ = writeln!(
                out,
                "shift={} word={}",
                ctx.format(a),
                show_word(g, tester.alphabet(), &w)
            );
            Ok(EXIT_OK)
        }
        Err(IrrError::NotIrreducible) => {
            let _ = writeln!(out, "Reducible");
            Ok(EXIT_REDUCIBLE)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_decompose(g: &GlobalOpts, poly: &str, out: &mut Vec<u8>) -> Outcome {
    let ctx = field(g)?;
    let f = parse_poly(&ctx, poly)?;
    let chain = full_decompose(&f)?;
    let a: Vec<String> = chain.a_values.iter().map(|&a| ctx.format(a)).collect();
    let _ = writeln!(out, "a=[{}] b={}", a.join(","), ctx.format(chain.b));
    Ok(EXIT_OK)
}
