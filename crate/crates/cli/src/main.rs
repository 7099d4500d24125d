//! Command-line front end for the symbolic kernel: single computations
//! (normal forms, quantum determinants and minors, Hopf structure maps, the
//! dual pairing, functional evaluation) and the named verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse error, 3 domain
//! error. Output is deterministic: identical invocations with identical
//! seeds produce byte-identical output.

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use oqsl_core::coeff::{rat_int, CoeffError, LaurentPoly, QhatFrac, Rat};
use oqsl_core::ncalg::{
    expr_to_ncpoly, ncpoly_to_json, parse_expr, tensor_to_json, AlgError, AlgebraSpec, NCPoly,
    ParseError,
};
use oqsl_core::qcoord::{
    antipode_gen, comult, counit, qdet, qminor, resolve_antipode_convention, Convention,
};
use oqsl_core::uqrep::{functional_eval, pair, uq_from_expr, PairStrategy, UqVariant};
use oqsl_core::verify::{run_all, run_suite, Report, VerifyConfig};

// ---- Argument surface ----

#[derive(Parser)]
#[command(
    name = "oqsl",
    version,
    about = "Exact computations in quantized coordinate rings and U_q(sl_{n+1})",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Flags shared by every subcommand. `size` is the matrix size N of the
/// coordinate rings; the enveloping-algebra rank is N - 1.
#[derive(Args)]
struct Common {
    /// Matrix size N (>= 2); guarded at 6 unless --force is given
    #[arg(long, default_value_t = 3)]
    size: u8,

    /// Specialize q to a rational p/r after computing (0 and +-1 rejected)
    #[arg(long)]
    q: Option<String>,

    /// Word-length cap for pairing and functional verification spans
    #[arg(long, default_value_t = 4)]
    max_len: usize,

    /// Seed for the randomized verification cases
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Allow sizes above 6 (quantum determinants have N! terms)
    #[arg(long)]
    force: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algebra {
    Qm,
    #[value(name = "borel+")]
    BorelPlus,
    #[value(name = "borel-")]
    BorelMinus,
    Torus,
}

impl Algebra {
    fn spec(self, size: u8) -> AlgebraSpec {
        match self {
            Algebra::Qm => AlgebraSpec::QMatrix(size),
            Algebra::BorelPlus => AlgebraSpec::BorelPlus(size),
            Algebra::BorelMinus => AlgebraSpec::BorelMinus(size),
            Algebra::Torus => AlgebraSpec::Torus(size),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    MinusQ,
    PlainQ,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Oqm,
    Unipotent,
    Hopf,
    Coinv,
    Smash,
    Xijmap,
    Pairing,
    Phi,
    Psi,
    Gram,
    All,
}

impl SuiteArg {
    fn name(self) -> &'static str {
        match self {
            SuiteArg::Oqm => "oqm",
            SuiteArg::Unipotent => "unipotent",
            SuiteArg::Hopf => "hopf",
            SuiteArg::Coinv => "coinv",
            SuiteArg::Smash => "smash",
            SuiteArg::Xijmap => "xijmap",
            SuiteArg::Pairing => "pairing",
            SuiteArg::Phi => "phi",
            SuiteArg::Psi => "psi",
            SuiteArg::Gram => "gram",
            SuiteArg::All => "all",
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduce an expression to its canonical normal form
    Nf {
        /// Algebra the expression lives in
        #[arg(long, value_enum, default_value_t = Algebra::Qm)]
        algebra: Algebra,
        /// Expression, e.g. "X[2,2]*X[1,1]" or "Y[1]*Y[2]^-1"
        expr: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print the quantum determinant of the full N x N matrix
    Qdet {
        #[command(flatten)]
        common: Common,
    },
    /// Print the quantum minor on the given rows and columns
    Minor {
        /// Comma-separated row indices, e.g. 1,2
        #[arg(long)]
        rows: String,
        /// Comma-separated column indices, e.g. 1,2
        #[arg(long)]
        cols: String,
        #[command(flatten)]
        common: Common,
    },
    /// Apply the comultiplication and print the tensor
    Delta {
        #[arg(long, value_enum, default_value_t = Algebra::Qm)]
        algebra: Algebra,
        expr: String,
        #[command(flatten)]
        common: Common,
    },
    /// Apply the counit and print the resulting coefficient
    Counit {
        #[arg(long, value_enum, default_value_t = Algebra::Qm)]
        algebra: Algebra,
        expr: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print the antipode of the matrix generator X[row,col]
    Antipode {
        #[arg(long)]
        row: u8,
        #[arg(long)]
        col: u8,
        /// Sign base of the cofactor prefactor; defaults to the convention
        /// that satisfies the antipode axiom
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the dual pairing of an F-side and an E-side expression
    Pair {
        /// F-side expression, e.g. "F[1]" or "K{1,0}*F[2]"
        #[arg(long)]
        left: String,
        /// E-side expression, e.g. "E[1]" or "Ka{1,0}*E[1]*E[2]"
        #[arg(long)]
        right: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a matrix-coefficient functional on an E-side element
    Eval {
        /// Algebra of the functional expression (diagonal inverses need borel+)
        #[arg(long, value_enum, default_value_t = Algebra::BorelPlus)]
        algebra: Algebra,
        /// Functional expression, e.g. "X[1,2]" or "X[1,1]^-1*X[1,2]"
        functional: String,
        /// E-side argument, e.g. "Ka{1,0}*E[1]"
        #[arg(long)]
        on: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run a named verification suite (or all of them) and report
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[command(flatten)]
        common: Common,
    },
}

// ---- Failure mapping ----

/// CLI-level failure carrying its exit code. Verification failures do not
/// pass through here: reports print on stdout and only the code changes.
enum Failure {
    Parse(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> ExitCode {
        match self {
            Failure::Parse(_) => ExitCode::from(2),
            Failure::Domain(_) => ExitCode::from(3),
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Domain(m) => m,
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e.to_string())
    }
}

impl From<AlgError> for Failure {
    fn from(e: AlgError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<CoeffError> for Failure {
    fn from(e: CoeffError) -> Self {
        Failure::Domain(e.to_string())
    }
}

// ---- Shared helpers ----

fn guard(common: &Common) -> Result<(), Failure> {
    if common.size < 2 {
        return Err(Failure::Domain("size must be at least 2".into()));
    }
    if common.size > 6 && !common.force {
        return Err(Failure::Domain(format!(
            "size {} exceeds the guard at 6 (the quantum determinant has N! terms); \
             pass --force to proceed",
            common.size
        )));
    }
    if common.max_len == 0 {
        return Err(Failure::Domain("max-len must be at least 1".into()));
    }
    Ok(())
}

/// Parse --q as an exact rational, rejecting 0 and the rational roots of
/// unity up front so every command reports the same message.
fn parse_q(common: &Common) -> Result<Option<Rat>, Failure> {
    let Some(text) = &common.q else {
        return Ok(None);
    };
    let v = Rat::from_str(text)
        .map_err(|e| Failure::Parse(format!("invalid rational for --q: {}", e)))?;
    if v == rat_int(0) || v == rat_int(1) || v == rat_int(-1) {
        return Err(Failure::Domain(
            "q must not be 0, 1, or -1 (specialization requires q not a root of unity)".into(),
        ));
    }
    Ok(Some(v))
}

fn reject_q(common: &Common, what: &str) -> Result<(), Failure> {
    if common.q.is_some() {
        return Err(Failure::Domain(format!(
            "--q does not apply to {}; results stay symbolic in q",
            what
        )));
    }
    Ok(())
}

fn parse_index_list(text: &str, what: &str) -> Result<Vec<u8>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u8>()
                .map_err(|_| Failure::Parse(format!("invalid {} list: {:?}", what, text)))
        })
        .collect()
}

fn emit_poly(p: &NCPoly, common: &Common) -> Result<(), Failure> {
    let shown = match parse_q(common)? {
        Some(qv) => p.specialize(&qv)?,
        None => p.clone(),
    };
    match common.format {
        Format::Text => println!("{}", shown),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&ncpoly_to_json(&shown)).expect("serializable")
        ),
    }
    Ok(())
}

fn emit_scalar(c: &LaurentPoly, common: &Common) -> Result<(), Failure> {
    let text = match parse_q(common)? {
        Some(qv) => c.eval_specialized(&qv)?.to_string(),
        None => c.canonical_text(),
    };
    match common.format {
        Format::Text => println!("{}", text),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({ "value": text }))
                .expect("serializable")
        ),
    }
    Ok(())
}

/// Print a pairing value: symbolically in the qhat^-k form, or as an exact
/// rational when q is specialized.
fn emit_pairing(v: &QhatFrac, common: &Common) -> Result<(), Failure> {
    let text = match parse_q(common)? {
        Some(qv) => {
            let v = v.normalize();
            let num = v.num.eval_specialized(&qv)?;
            let qhat = qv.clone() - qv.recip();
            let mut den = rat_int(1);
            for _ in 0..v.pow {
                den *= qhat.clone();
            }
            (num / den).to_string()
        }
        None => v.to_string(),
    };
    match common.format {
        Format::Text => println!("{}", text),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({ "value": text }))
                .expect("serializable")
        ),
    }
    Ok(())
}

fn parse_in(algebra: Algebra, size: u8, text: &str) -> Result<NCPoly, Failure> {
    let expr = parse_expr(text)?;
    Ok(expr_to_ncpoly(&expr, algebra.spec(size))?)
}

fn parse_uq(text: &str, n: u8, variant: UqVariant) -> Result<oqsl_core::uqrep::UqElement, Failure> {
    let expr = parse_expr(text)?;
    Ok(uq_from_expr(&expr, n, variant)?)
}

// ---- Command bodies ----

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.cmd {
        Cmd::Nf {
            algebra,
            expr,
            common,
        } => {
            guard(&common)?;
            let p = parse_in(algebra, common.size, &expr)?.normal_form()?;
            emit_poly(&p, &common)?;
        }
        Cmd::Qdet { common } => {
            guard(&common)?;
            emit_poly(&qdet(common.size), &common)?;
        }
        Cmd::Minor { rows, cols, common } => {
            guard(&common)?;
            let rows = parse_index_list(&rows, "row")?;
            let cols = parse_index_list(&cols, "column")?;
            let p = qminor(common.size, &rows, &cols)?;
            emit_poly(&p, &common)?;
        }
        Cmd::Delta {
            algebra,
            expr,
            common,
        } => {
            guard(&common)?;
            reject_q(&common, "tensor output")?;
            let t = comult(&parse_in(algebra, common.size, &expr)?)?;
            match common.format {
                Format::Text => println!("{}", t),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&tensor_to_json(&t)).expect("serializable")
                ),
            }
        }
        Cmd::Counit {
            algebra,
            expr,
            common,
        } => {
            guard(&common)?;
            let c = counit(&parse_in(algebra, common.size, &expr)?)?;
            emit_scalar(&c, &common)?;
        }
        Cmd::Antipode {
            row,
            col,
            convention,
            common,
        } => {
            guard(&common)?;
            let conv = match convention {
                Some(ConventionArg::MinusQ) => Convention::MinusQ,
                Some(ConventionArg::PlainQ) => Convention::PlainQ,
                None => resolve_antipode_convention(),
            };
            let p = antipode_gen(common.size, row, col, conv)?;
            emit_poly(&p, &common)?;
        }
        Cmd::Pair {
            left,
            right,
            common,
        } => {
            guard(&common)?;
            let n = common.size - 1;
            let y = parse_uq(&left, n, UqVariant::Leq0Check)?;
            let x = parse_uq(&right, n, UqVariant::Geq0)?;
            let v = pair(&y, &x, PairStrategy::PeelSecondArg)?;
            emit_pairing(&v, &common)?;
        }
        Cmd::Eval {
            algebra,
            functional,
            on,
            common,
        } => {
            guard(&common)?;
            match algebra {
                Algebra::Qm | Algebra::BorelPlus => {}
                _ => {
                    return Err(Failure::Domain(
                        "functionals live in qm or borel+".into(),
                    ))
                }
            }
            let x = parse_in(algebra, common.size, &functional)?;
            let u = parse_uq(&on, common.size - 1, UqVariant::Geq0)?;
            let c = functional_eval(&x, &u)?;
            emit_scalar(&c, &common)?;
        }
        Cmd::Verify { suite, common } => {
            guard(&common)?;
            reject_q(&common, "verification suites")?;
            let cfg = VerifyConfig {
                size: common.size,
                max_len: common.max_len,
                seed: common.seed,
            };
            let reports: Vec<Report> = match suite {
                SuiteArg::All => run_all(&cfg)?,
                one => vec![run_suite(one.name(), &cfg)?],
            };
            match common.format {
                Format::Text => {
                    let joined: Vec<String> = reports.iter().map(|r| r.to_text()).collect();
                    print!("{}", joined.join("\n"));
                }
                Format::Json => {
                    let value = if reports.len() == 1 {
                        reports[0].to_json()
                    } else {
                        serde_json::Value::Array(reports.iter().map(|r| r.to_json()).collect())
                    };
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&value).expect("serializable")
                    );
                }
            }
            if reports.iter().any(|r| !r.passed()) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}
