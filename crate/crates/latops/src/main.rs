//! Command-line front end for the lattice operator library.
//!
//! Exit codes: 0 when every requested check passes, 1 for mathematical
//! failures or irregular inputs, 2 for usage errors. JSON output is
//! byte-stable for fixed inputs.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use latops::ddops::{Op, OperatorTables};
use latops::families::{AwParams, MeixnerParams, Thm1Params, Thm2Params};
use latops::functionals::{pearson_moments, PearsonData};
use latops::report::{Report, Status};
use latops::scalar::Rational;
use latops::verify;
use latops::{Lattice, Poly, Scalar};

#[derive(Parser)]
#[command(name = "latops", version, about = "Exact divided-difference calculus on nonuniform lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OpKind {
    Dx,
    Sx,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Add a decimal rendering column (human reading only; table/csv)
    #[arg(long)]
    approx: bool,
}

/// Lattice selection: either the q-quadratic flags (--Q, --c1, --c2, --c3)
/// or the quadratic flags (--beta, --c5, --c6).
#[derive(Args)]
struct LatticeArgs {
    /// Q = q^{1/2} of a q-quadratic lattice (positive rational, != 1)
    #[arg(long = "Q")]
    q_half: Option<String>,
    #[arg(long)]
    c1: Option<String>,
    #[arg(long)]
    c2: Option<String>,
    #[arg(long)]
    c3: Option<String>,
    /// Curvature beta = c4/4 of a quadratic lattice
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    c5: Option<String>,
    #[arg(long)]
    c6: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Show lattice parameters and structure sequences
    LatticeInfo {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Largest sequence index to display
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Apply D_x or S_x to a polynomial (ascending coefficients)
    OpApply {
        #[arg(long, value_enum)]
        op: OpKind,
        /// Coefficients "c0,c1,..." in the scalar grammar
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Recurrence coefficients of a closed-form family
    Family {
        #[command(subcommand)]
        which: FamilyCommand,
    },
    /// Solve D_x(phi u) = S_x(psi u) for truncated moments
    PearsonSolve {
        /// phi as "a,b,c" (descending: a z^2 + b z + c)
        #[arg(long)]
        phi: String,
        /// psi as "d,e" (descending: d z + e)
        #[arg(long)]
        psi: String,
        /// Number of moments beyond m_0
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run a verification suite
    Verify {
        #[command(subcommand)]
        which: VerifyCommand,
    },
    /// Run every invariant suite on built-in sample data
    Selftest {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// Monic Askey-Wilson recurrence coefficients
    Aw {
        #[arg(long)]
        a1: String,
        #[arg(long)]
        a2: String,
        #[arg(long)]
        a3: String,
        #[arg(long)]
        a4: String,
        #[arg(long = "Q")]
        q_half: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Meixner polynomials of the second kind
    Meixner2 {
        #[arg(long)]
        b1: String,
        #[arg(long)]
        b2: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// q-lattice solution family of the characterization equation
    Thm1 {
        #[arg(long = "Q")]
        q_half: String,
        #[arg(long)]
        c1: String,
        #[arg(long)]
        c2: String,
        #[arg(long)]
        c3: String,
        /// Free parameter a (r = a^2)
        #[arg(long)]
        a: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Linear-lattice solution family of the characterization equation
    Thm2 {
        #[arg(long)]
        c5: String,
        #[arg(long, default_value = "0")]
        c6: String,
        #[arg(long)]
        b0: String,
        #[arg(long = "C1")]
        c1_val: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Cross-validate the q-lattice solution family by four routes
    Thm1 {
        #[arg(long = "Q")]
        q_half: String,
        #[arg(long)]
        c1: String,
        #[arg(long)]
        c2: String,
        #[arg(long)]
        c3: String,
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cross-validate the linear-lattice solution family by four routes
    Thm2 {
        #[arg(long)]
        c5: String,
        #[arg(long, default_value = "0")]
        c6: String,
        #[arg(long)]
        b0: String,
        #[arg(long = "C1")]
        c1_val: String,
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Witness that beta != 0 admits no solution family
    Nonexistence {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        c5: String,
        #[arg(long, default_value = "0")]
        c6: String,
        #[arg(long)]
        b0: String,
        #[arg(long = "C1", default_value = "1")]
        c1_val: String,
        #[arg(long, default_value_t = 10)]
        n: i64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Witness that B_0 != c3 is forced out on q-lattices
    Bzero {
        #[arg(long = "Q")]
        q_half: String,
        #[arg(long)]
        c1: String,
        #[arg(long)]
        c2: String,
        #[arg(long)]
        c3: String,
        #[arg(long)]
        b0: String,
        #[arg(long, default_value_t = 10)]
        n: i64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Randomized product-rule and functional identity suite
    Identities {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

enum CliError {
    Usage(String),
    Math(String),
}

impl From<latops::Error> for CliError {
    fn from(e: latops::Error) -> Self {
        CliError::Math(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn parse_scalar_flag(name: &str, text: &str) -> CliResult<Scalar> {
    Scalar::parse(text).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

fn parse_rational_flag(name: &str, text: &str) -> CliResult<Rational> {
    let s = parse_scalar_flag(name, text)?;
    if !s.is_rational() {
        return Err(CliError::Usage(format!("--{name} must be rational")));
    }
    Ok(s.re)
}

fn parse_poly_list(name: &str, text: &str, ascending: bool) -> CliResult<Poly> {
    let mut coeffs: Vec<Scalar> = text
        .split(',')
        .map(|t| parse_scalar_flag(name, t.trim()))
        .collect::<CliResult<_>>()?;
    if !ascending {
        coeffs.reverse();
    }
    Ok(Poly::new(coeffs))
}

fn max_degree_cap() -> usize {
    std::env::var("LATOPS_MAX_DEGREE")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(100)
}

fn check_degree(n: usize) -> CliResult<()> {
    let cap = max_degree_cap();
    if n > cap {
        return Err(CliError::Usage(format!(
            "--n {n} exceeds LATOPS_MAX_DEGREE ({cap})"
        )));
    }
    Ok(())
}

impl LatticeArgs {
    fn build(&self) -> CliResult<Lattice> {
        let q_side = self.q_half.is_some();
        let quad_side = self.beta.is_some() || self.c5.is_some();
        match (q_side, quad_side) {
            (true, true) => Err(CliError::Usage(
                "choose either the q-quadratic flags (--Q/--c1/--c2/--c3) or the quadratic flags (--beta/--c5/--c6)".into(),
            )),
            (false, false) => Err(CliError::Usage(
                "a lattice is required: pass --Q/--c1/--c2/--c3 or --beta/--c5/--c6".into(),
            )),
            (true, false) => {
                let q_half = parse_rational_flag("Q", self.q_half.as_deref().unwrap())?;
                let c1 = parse_scalar_flag("c1", self.c1.as_deref().unwrap_or("1"))?;
                let c2 = parse_scalar_flag("c2", self.c2.as_deref().unwrap_or("1"))?;
                let c3 = parse_scalar_flag("c3", self.c3.as_deref().unwrap_or("0"))?;
                Ok(Lattice::q_quadratic(q_half, c1, c2, c3)?)
            }
            (false, true) => {
                let beta = parse_scalar_flag("beta", self.beta.as_deref().unwrap_or("0"))?;
                let c5 = parse_scalar_flag("c5", self.c5.as_deref().unwrap_or("0"))?;
                let c6 = parse_scalar_flag("c6", self.c6.as_deref().unwrap_or("0"))?;
                Ok(Lattice::quadratic(beta, c5, c6)?)
            }
        }
    }
}

fn scalar_cell(s: &Scalar, approx: bool) -> String {
    if approx {
        format!("{s} ({})", s.to_approx_string())
    } else {
        s.to_string()
    }
}

/// Rows of (n, B_n, C_{n+1}) in the requested format.
fn emit_coefficient_rows(
    subject: &str,
    rows: &[(i64, Scalar, Scalar)],
    out: &OutputArgs,
) -> String {
    match out.format {
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(n, b, c)| {
                    json!({"n": n, "B": b.to_string(), "C_next": c.to_string()})
                })
                .collect();
            serde_json::to_string(&json!({"subject": subject, "rows": rows}))
                .expect("serializable")
        }
        Format::Csv => {
            let mut s = String::from("n,B_n,C_n+1\n");
            for (n, b, c) in rows {
                s.push_str(&format!("{n},{b},{c}\n"));
            }
            s.trim_end().to_string()
        }
        Format::Table => {
            let mut s = format!("{subject}\n{:>4}  {:<24}  {:<24}\n", "n", "B_n", "C_n+1");
            for (n, b, c) in rows {
                s.push_str(&format!(
                    "{n:>4}  {:<24}  {:<24}\n",
                    scalar_cell(b, out.approx),
                    scalar_cell(c, out.approx)
                ));
            }
            s.trim_end().to_string()
        }
    }
}

fn emit_report(report: &Report, out: &OutputArgs) -> String {
    match out.format {
        Format::Json => {
            serde_json::to_string(&report.to_json()).expect("serializable")
        }
        Format::Csv => {
            let mut s = String::from("name,range_lo,range_hi,status,witness_n,lhs,rhs\n");
            for c in report.sorted_checks() {
                let status = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "fail",
                };
                let (wn, wl, wr) = match &c.witness {
                    Some(w) => (w.n.to_string(), w.lhs.clone(), w.rhs.clone()),
                    None => (String::new(), String::new(), String::new()),
                };
                s.push_str(&format!(
                    "{},{},{},{status},{wn},{wl},{wr}\n",
                    c.name, c.range.0, c.range.1
                ));
            }
            s.trim_end().to_string()
        }
        Format::Table => {
            let mut s = format!("subject: {}\n", report.subject);
            for (k, v) in &report.meta {
                s.push_str(&format!("{k} = {v}\n"));
            }
            for c in report.sorted_checks() {
                let status = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                };
                s.push_str(&format!(
                    "[{status}] {} (n = {}..{})",
                    c.name, c.range.0, c.range.1
                ));
                if let Some(w) = &c.witness {
                    s.push_str(&format!("  witness n={}: {} vs {}", w.n, w.lhs, w.rhs));
                }
                s.push('\n');
            }
            s.trim_end().to_string()
        }
    }
}

/// (printed output, overall pass flag)
fn run(cli: Cli) -> CliResult<(String, bool)> {
    match cli.command {
        Command::LatticeInfo { lattice, n, out } => {
            check_degree(n)?;
            let l = lattice.build()?;
            let rows: Vec<_> = (0..=n as i64).map(|k| l.seq(k)).collect();
            let text = match out.format {
                Format::Json => {
                    let seq: Vec<Value> = rows
                        .iter()
                        .map(|s| {
                            json!({
                                "n": s.n,
                                "alpha_n": s.alpha_n.to_string(),
                                "beta_n": s.beta_n.to_string(),
                                "gamma_n": s.gamma_n.to_string(),
                            })
                        })
                        .collect();
                    serde_json::to_string(&json!({
                        "lattice": l.to_json(),
                        "alpha": l.alpha().to_string(),
                        "beta": l.beta().to_string(),
                        "seq": seq,
                    }))
                    .expect("serializable")
                }
                Format::Csv => {
                    let mut s = String::from("n,alpha_n,beta_n,gamma_n\n");
                    for r in &rows {
                        s.push_str(&format!(
                            "{},{},{},{}\n",
                            r.n, r.alpha_n, r.beta_n, r.gamma_n
                        ));
                    }
                    s.trim_end().to_string()
                }
                Format::Table => {
                    let mut s = format!(
                        "lattice: {}\nalpha = {}, beta = {}\n{:>4}  {:<20}  {:<20}  {:<20}\n",
                        serde_json::to_string(&l.to_json()).expect("serializable"),
                        l.alpha(),
                        l.beta(),
                        "n",
                        "alpha_n",
                        "beta_n",
                        "gamma_n"
                    );
                    for r in &rows {
                        s.push_str(&format!(
                            "{:>4}  {:<20}  {:<20}  {:<20}\n",
                            r.n,
                            scalar_cell(&r.alpha_n, out.approx),
                            scalar_cell(&r.beta_n, out.approx),
                            scalar_cell(&r.gamma_n, out.approx)
                        ));
                    }
                    s.trim_end().to_string()
                }
            };
            Ok((text, true))
        }
        Command::OpApply {
            op,
            poly,
            lattice,
            out,
        } => {
            let l = lattice.build()?;
            let p = parse_poly_list("poly", &poly, true)?;
            let deg = p.degree().unwrap_or(0);
            check_degree(deg)?;
            let tables = OperatorTables::build(&l, deg);
            let image = tables.apply(
                match op {
                    OpKind::Dx => Op::Dx,
                    OpKind::Sx => Op::Sx,
                },
                &p,
            )?;
            let coeffs: Vec<String> = image.coeffs().iter().map(|c| c.to_string()).collect();
            let text = match out.format {
                Format::Json => serde_json::to_string(&json!({
                    "op": match op { OpKind::Dx => "dx", OpKind::Sx => "sx" },
                    "coeffs": coeffs,
                }))
                .expect("serializable"),
                Format::Csv => {
                    let mut s = String::from("k,coeff\n");
                    for (k, c) in coeffs.iter().enumerate() {
                        s.push_str(&format!("{k},{c}\n"));
                    }
                    s.trim_end().to_string()
                }
                Format::Table => format!("{image:?}"),
            };
            Ok((text, true))
        }
        Command::Family { which } => run_family(which),
        Command::PearsonSolve {
            phi,
            psi,
            n,
            lattice,
            out,
        } => {
            check_degree(n)?;
            let l = lattice.build()?;
            let phi = parse_poly_list("phi", &phi, false)?;
            let psi = parse_poly_list("psi", &psi, false)?;
            let pd = PearsonData::new(phi, psi)?;
            let tables = OperatorTables::build(&l, n + 1);
            let u = pearson_moments(&pd, &tables, n)?;
            let moments: Vec<String> = u.moments().iter().map(|m| m.to_string()).collect();
            let text = match out.format {
                Format::Json => serde_json::to_string(&json!({"moments": moments}))
                    .expect("serializable"),
                Format::Csv => {
                    let mut s = String::from("k,m_k\n");
                    for (k, m) in moments.iter().enumerate() {
                        s.push_str(&format!("{k},{m}\n"));
                    }
                    s.trim_end().to_string()
                }
                Format::Table => {
                    let mut s = format!("{:>4}  {:<24}\n", "k", "m_k");
                    for (k, m) in u.moments().iter().enumerate() {
                        s.push_str(&format!("{k:>4}  {:<24}\n", scalar_cell(m, out.approx)));
                    }
                    s.trim_end().to_string()
                }
            };
            Ok((text, true))
        }
        Command::Verify { which } => run_verify(which),
        Command::Selftest { n, seed, out } => {
            check_degree(n)?;
            let report = verify::selftest(n, seed);
            let passed = report.passed();
            Ok((emit_report(&report, &out), passed))
        }
    }
}

fn collect_rows(
    mut coeffs: impl FnMut(i64) -> latops::Result<(Scalar, Scalar)>,
    n: usize,
) -> CliResult<Vec<(i64, Scalar, Scalar)>> {
    let mut rows = Vec::with_capacity(n + 1);
    for k in 0..=n as i64 {
        let (b, c) = coeffs(k)?;
        rows.push((k, b, c));
    }
    Ok(rows)
}

fn run_family(which: FamilyCommand) -> CliResult<(String, bool)> {
    match which {
        FamilyCommand::Aw {
            a1,
            a2,
            a3,
            a4,
            q_half,
            n,
            out,
        } => {
            check_degree(n)?;
            let p = AwParams::new(
                parse_scalar_flag("a1", &a1)?,
                parse_scalar_flag("a2", &a2)?,
                parse_scalar_flag("a3", &a3)?,
                parse_scalar_flag("a4", &a4)?,
                parse_rational_flag("Q", &q_half)?,
            )?;
            let rows = collect_rows(|k| p.coeffs(k), n)?;
            Ok((emit_coefficient_rows("askey-wilson", &rows, &out), true))
        }
        FamilyCommand::Meixner2 { b1, b2, n, out } => {
            check_degree(n)?;
            let p = MeixnerParams::new(
                parse_scalar_flag("b1", &b1)?,
                parse_scalar_flag("b2", &b2)?,
            )?;
            let rows = collect_rows(|k| Ok(p.coeffs(k)), n)?;
            Ok((emit_coefficient_rows("meixner2", &rows, &out), true))
        }
        FamilyCommand::Thm1 {
            q_half,
            c1,
            c2,
            c3,
            a,
            n,
            out,
        } => {
            check_degree(n)?;
            let lattice = Lattice::q_quadratic(
                parse_rational_flag("Q", &q_half)?,
                parse_scalar_flag("c1", &c1)?,
                parse_scalar_flag("c2", &c2)?,
                parse_scalar_flag("c3", &c3)?,
            )?;
            let p = Thm1Params::new(lattice, parse_scalar_flag("a", &a)?)?;
            let rows = collect_rows(|k| p.coeffs(k), n)?;
            Ok((emit_coefficient_rows("thm1-family", &rows, &out), true))
        }
        FamilyCommand::Thm2 {
            c5,
            c6,
            b0,
            c1_val,
            n,
            out,
        } => {
            check_degree(n)?;
            let lattice = Lattice::linear(
                parse_scalar_flag("c5", &c5)?,
                parse_scalar_flag("c6", &c6)?,
            )?;
            let p = Thm2Params::new(
                lattice,
                parse_scalar_flag("b0", &b0)?,
                parse_scalar_flag("C1", &c1_val)?,
            )?;
            let rows = collect_rows(|k| p.coeffs(k), n)?;
            Ok((emit_coefficient_rows("thm2-family", &rows, &out), true))
        }
    }
}

fn run_verify(which: VerifyCommand) -> CliResult<(String, bool)> {
    match which {
        VerifyCommand::Thm1 {
            q_half,
            c1,
            c2,
            c3,
            a,
            n,
            out,
        } => {
            check_degree(n)?;
            let lattice = Lattice::q_quadratic(
                parse_rational_flag("Q", &q_half)?,
                parse_scalar_flag("c1", &c1)?,
                parse_scalar_flag("c2", &c2)?,
                parse_scalar_flag("c3", &c3)?,
            )?;
            let p = Thm1Params::new(lattice, parse_scalar_flag("a", &a)?)?;
            let report = verify::cross_validate_thm1(&p, n);
            let passed = report.passed();
            Ok((emit_report(&report, &out), passed))
        }
        VerifyCommand::Thm2 {
            c5,
            c6,
            b0,
            c1_val,
            n,
            out,
        } => {
            check_degree(n)?;
            let lattice = Lattice::linear(
                parse_scalar_flag("c5", &c5)?,
                parse_scalar_flag("c6", &c6)?,
            )?;
            let p = Thm2Params::new(
                lattice,
                parse_scalar_flag("b0", &b0)?,
                parse_scalar_flag("C1", &c1_val)?,
            )?;
            let report = verify::cross_validate_thm2(&p, n);
            let passed = report.passed();
            Ok((emit_report(&report, &out), passed))
        }
        VerifyCommand::Nonexistence {
            beta,
            c5,
            c6,
            b0,
            c1_val,
            n,
            out,
        } => {
            check_degree(n.unsigned_abs() as usize)?;
            let lattice = Lattice::quadratic(
                parse_scalar_flag("beta", &beta)?,
                parse_scalar_flag("c5", &c5)?,
                parse_scalar_flag("c6", &c6)?,
            )?;
            let report = verify::nonexistence_quadratic(
                &lattice,
                &parse_scalar_flag("b0", &b0)?,
                &parse_scalar_flag("C1", &c1_val)?,
                n,
            )?;
            let passed = report.passed();
            Ok((emit_report(&report, &out), passed))
        }
        VerifyCommand::Bzero {
            q_half,
            c1,
            c2,
            c3,
            b0,
            n,
            out,
        } => {
            check_degree(n.unsigned_abs() as usize)?;
            let lattice = Lattice::q_quadratic(
                parse_rational_flag("Q", &q_half)?,
                parse_scalar_flag("c1", &c1)?,
                parse_scalar_flag("c2", &c2)?,
                parse_scalar_flag("c3", &c3)?,
            )?;
            let report =
                verify::bzero_forcing_qlattice(&lattice, &parse_scalar_flag("b0", &b0)?, n)?;
            let passed = report.passed();
            Ok((emit_report(&report, &out), passed))
        }
        VerifyCommand::Identities {
            lattice,
            trials,
            seed,
            out,
        } => {
            let l = lattice.build()?;
            let report = verify::identity_suite(&l, trials, seed);
            let passed = report.passed();
            Ok((emit_report(&report, &out), passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format_json = wants_json(&cli.command);
    match run(cli) {
        Ok((text, passed)) => {
            println!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Math(msg)) => {
            if format_json {
                println!(
                    "{}",
                    serde_json::to_string(&json!({"error": msg})).expect("serializable")
                );
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
    }
}

fn output_args(command: &Command) -> Option<&OutputArgs> {
    match command {
        Command::LatticeInfo { out, .. }
        | Command::OpApply { out, .. }
        | Command::PearsonSolve { out, .. }
        | Command::Selftest { out, .. } => Some(out),
        Command::Family { which } => Some(match which {
            FamilyCommand::Aw { out, .. }
            | FamilyCommand::Meixner2 { out, .. }
            | FamilyCommand::Thm1 { out, .. }
            | FamilyCommand::Thm2 { out, .. } => out,
        }),
        Command::Verify { which } => Some(match which {
            VerifyCommand::Thm1 { out, .. }
            | VerifyCommand::Thm2 { out, .. }
            | VerifyCommand::Nonexistence { out, .. }
            | VerifyCommand::Bzero { out, .. }
            | VerifyCommand::Identities { out, .. } => out,
        }),
    }
}

fn wants_json(command: &Command) -> bool {
    output_args(command).is_some_and(|o| o.format == Format::Json)
}
