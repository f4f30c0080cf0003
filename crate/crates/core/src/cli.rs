//! The `freefield` command line.
//!
//! Every subcommand prints plain text by default and a single JSON document
//! with `--json`. Exit status is 0 on success, 1 when a verification comes
//! out false or a solve has no solution, and 2 for bad input.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{Algebra, FreeAlgebraSpec};
use crate::commutant::{extract_lattice_unit, omega_name, Charge, DiagonalAction, UnitExtraction};
use crate::error::{Error, Result};
use crate::expr::Context;
use crate::linalg::ActionMatrix;
use crate::ope::{circle, conformal_vector, ope_singular, verify_virasoro};
use crate::scalar::Scalar;
use crate::state::State;
use crate::transvect::{star_extract_unit, star_extract_lattice_unit, star_k, star_k_weyl, transvectant};
use crate::w3::{build_bc_lw, build_heis_lw, build_ls_ws, highest_weight_data, w3_ope_table};
use crate::zhu::{cokernel_probe, zhu_image};

#[derive(Parser, Debug)]
#[command(name = "freefield", version, about = "Exact vertex-algebra computations in free field algebras")]
struct Cli {
    /// Algebra description (JSON). Defaults to βγ on as many pairs as the action has columns.
    #[arg(long, global = true, value_name = "PATH")]
    algebra: Option<PathBuf>,
    /// Action matrix (JSON). Defaults to the single row of ones.
    #[arg(long, global = true, value_name = "PATH")]
    action: Option<PathBuf>,
    /// Comma separated α, one entry per βγ pair (default ½ each).
    #[arg(long, global = true, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Comma separated λ for the B' conformal vector (default zeros).
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Singular part of the OPE of two states.
    Ope { a: String, b: String },
    /// The n-th product a ∘ₙ b.
    Nprod {
        a: String,
        b: String,
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// Verify a named structure.
    Check {
        what: CheckWhat,
        #[arg(long, value_enum, default_value_t = Realization::Bg)]
        realization: Realization,
    },
    /// Commutant of the diagonal action.
    Commutant {
        #[command(subcommand)]
        command: CommutantCommand,
    },
    /// Decide whether a state is invariant under the action.
    Invariant { expr: String },
    /// Invariant correction of :theta^N: for one pair.
    QuantumCorrect { n: u32 },
    /// Image of a state in the Weyl algebra under the Zhu map.
    Zhu { expr: String },
    /// Codimension of the Zhu image up to a degree.
    Cokernel {
        #[arg(long)]
        degree: u32,
    },
    /// The product *_k on states or on the Weyl algebra.
    Star {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = Side::Vertex)]
        side: Side,
    },
    /// Transvectant [p, q]_k of polynomials in x1.., xp1...
    Transvect {
        #[arg(long)]
        k: u32,
        p: String,
        q: String,
    },
    /// Find the lattice unit of a level-zero element.
    ExtractUnit {
        expr: String,
        #[arg(long, value_enum, default_value_t = Side::Vertex)]
        side: Side,
        /// Skip the orthogonality check against the action.
        #[arg(long)]
        free: bool,
    },
    /// Run the built-in verification suite.
    Selftest {
        /// Only these check numbers (comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Subcommand, Debug)]
enum CommutantCommand {
    /// Named generators.
    Gens,
    /// Basis of a weight and charge space of invariants.
    Basis {
        /// α*-weight, a half integer.
        #[arg(long)]
        weight: String,
        /// Total βγ charge, or a comma separated list with one entry per pair.
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        charge: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckWhat {
    Virasoro,
    W3,
    HighestWeights,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Realization {
    Bg,
    Heis,
    Bc,
    Lalpha,
    Bprime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Side {
    Vertex,
    Weyl,
}

/// What a subcommand produced.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, ok: true }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let json = cli.json;
    match execute(&cli) {
        Ok(r) => {
            let _ = if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r.json).unwrap_or_default())
            } else {
                write!(out, "{}", r.text)
            };
            if r.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            if json {
                let _ = writeln!(out, "{}", json!({ "error": e.to_string() }));
            }
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::NoSolution(_) => 1,
                _ => 2,
            }
        }
    }
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn scalar_list(text: &str) -> Result<Vec<Scalar>> {
    text.split(',').map(|s| s.trim().parse()).collect()
}

/// The algebra, the action when one makes sense, and the expression context.
struct Setup {
    alg: Algebra,
    action: Option<DiagonalAction>,
    ctx: Context,
}

impl Setup {
    fn action(&self) -> Result<&DiagonalAction> {
        self.action
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("this command needs an algebra made only of βγ pairs".into()))
    }

    fn alpha(&self) -> Vec<Scalar> {
        self.ctx.alpha_or_default()
    }
}

fn setup(cli: &Cli, fallback: Option<Algebra>) -> Result<Setup> {
    let matrix = cli.action.as_deref().map(ActionMatrix::from_path).transpose()?;
    let alg = match (&cli.algebra, &matrix, fallback) {
        (Some(p), _, _) => FreeAlgebraSpec::from_path(p)?,
        (None, Some(m), _) => FreeAlgebraSpec::beta_gamma(m.n()),
        (None, None, Some(a)) => a,
        (None, None, None) => FreeAlgebraSpec::beta_gamma(1),
    };
    let action = match matrix {
        Some(m) => Some(DiagonalAction::with_algebra(alg.clone(), m)?),
        None if alg.is_pure_beta_gamma() && alg.bg_pairs() > 0 => {
            let ones = vec![vec![Scalar::one(); alg.bg_pairs()]];
            Some(DiagonalAction::with_algebra(alg.clone(), ActionMatrix::new(ones)?)?)
        }
        None => None,
    };
    let mut ctx = match &action {
        Some(a) => Context::for_action(a),
        None => Context::new(&alg),
    };
    if let Some(a) = &cli.alpha {
        ctx = ctx.with_alpha(scalar_list(a)?)?;
    }
    Ok(Setup { alg, action, ctx })
}

fn state_json(s: &State) -> Value {
    serde_json::to_value(s.to_json_value()).unwrap_or(Value::Null)
}

fn unit_report(u: &UnitExtraction) -> Report {
    Report::ok(
        format!("unit {} at d = {} with scale {}\n", omega_name(&u.l), u.d, u.scale),
        json!({ "l": u.l, "d": u.d, "scale": u.scale, "unit": omega_name(&u.l) }),
    )
}

fn execute(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Ope { a, b } => {
            let s = setup(cli, None)?;
            let (a, b) = (s.ctx.state(a)?, s.ctx.state(b)?);
            let table = ope_singular(&a, &b)?;
            let mut text = String::new();
            for (n, v) in &table {
                text.push_str(&format!("(z-w)^-{}: {}\n", n + 1, v));
            }
            if table.is_empty() {
                text.push_str("regular\n");
            }
            let rows: Vec<Value> = table
                .iter()
                .map(|(n, v)| json!({ "n": n, "text": v.to_string(), "state": state_json(v) }))
                .collect();
            Ok(Report::ok(text, json!({ "poles": rows })))
        }
        Command::Nprod { a, b, n } => {
            let s = setup(cli, None)?;
            let v = circle(&s.ctx.state(a)?, &s.ctx.state(b)?, *n)?;
            Ok(Report::ok(format!("{v}\n"), json!({ "n": n, "text": v.to_string(), "state": state_json(&v) })))
        }
        Command::Check { what, realization } => check(cli, *what, *realization),
        Command::Commutant { command } => {
            let s = setup(cli, None)?;
            let act = s.action()?;
            match command {
                CommutantCommand::Gens => {
                    let gens = act.generator_set()?;
                    let text: String = gens.iter().map(|g| format!("{} = {}\n", g.name, g.state)).collect();
                    let rows: Vec<Value> = gens
                        .iter()
                        .map(|g| json!({ "name": g.name, "text": g.state.to_string(), "state": state_json(&g.state) }))
                        .collect();
                    Ok(Report::ok(text, json!({ "generators": rows })))
                }
                CommutantCommand::Basis { weight, charge } => {
                    let w: Scalar = weight.parse()?;
                    let twice = (&w * &Scalar::from_int(2))
                        .to_i64()
                        .filter(|t| *t >= 0)
                        .ok_or_else(|| Error::InvalidInput(format!("weight {w} is not a nonnegative half integer")))?;
                    let parts: Vec<i64> = charge
                        .split(',')
                        .map(|p| p.trim().parse::<i64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|e| Error::InvalidInput(format!("bad charge {charge:?}: {e}")))?;
                    let charge = if parts.len() == 1 { Charge::Total(parts[0]) } else { Charge::PerPair(parts) };
                    let basis = act.graded_commutant_basis(twice as u32, &charge)?;
                    let mut text = format!("dimension {}\n", basis.len());
                    for b in &basis {
                        text.push_str(&format!("{b}\n"));
                    }
                    let rows: Vec<Value> = basis.iter().map(|b| json!({ "text": b.to_string(), "state": state_json(b) })).collect();
                    Ok(Report::ok(text, json!({ "dimension": basis.len(), "basis": rows })))
                }
            }
        }
        Command::Invariant { expr } => {
            let s = setup(cli, None)?;
            let u = s.ctx.state(expr)?;
            match s.action()?.obstruction(&u)? {
                None => Ok(Report::ok("invariant\n".into(), json!({ "invariant": true }))),
                Some((row, n)) => Ok(Report {
                    text: format!("not invariant: fails at pole order {n} (theta[{}] circ {n} u is nonzero)\n", row + 1),
                    json: json!({ "invariant": false, "row": row + 1, "pole_order": n }),
                    ok: false,
                }),
            }
        }
        Command::QuantumCorrect { n } => {
            let s = setup(cli, None)?;
            let u = s.action()?.quantum_correct(*n)?;
            Ok(Report::ok(format!("{u}\n"), json!({ "k": n, "text": u.to_string(), "state": state_json(&u) })))
        }
        Command::Zhu { expr } => {
            let s = setup(cli, None)?;
            let w = zhu_image(&s.ctx.state(expr)?, &s.alpha())?;
            let euler = w.to_euler_poly().map(|p| p.to_string());
            let mut text = format!("{w}\n");
            if let Some(e) = &euler {
                text.push_str(&format!("= {e}\n"));
            }
            Ok(Report::ok(text, json!({ "text": w.to_string(), "weyl": w.to_json_value(), "euler": euler })))
        }
        Command::Cokernel { degree } => {
            let s = setup(cli, None)?;
            let r = cokernel_probe(s.action()?, &s.alpha(), *degree)?;
            let reps: Vec<String> = r.representatives.iter().map(|p| p.to_string()).collect();
            let text = format!(
                "degree <= {}: ambient {}, image {}, codimension {}\ncomplement: {}\ncurrents fill the gap: {}\n",
                r.degree,
                r.ambient_dim,
                r.image_dim,
                r.codim,
                if reps.is_empty() { "none".to_string() } else { reps.join(", ") },
                r.theta_covers
            );
            Ok(Report::ok(
                text,
                json!({
                    "degree": r.degree, "ambient_dim": r.ambient_dim, "image_dim": r.image_dim,
                    "codim": r.codim, "representatives": reps, "theta_covers": r.theta_covers,
                }),
            ))
        }
        Command::Star { k, a, b, side } => {
            let s = setup(cli, None)?;
            match side {
                Side::Vertex => {
                    let v = star_k(&s.ctx.state(a)?, &s.ctx.state(b)?, *k)?;
                    Ok(Report::ok(format!("{v}\n"), json!({ "text": v.to_string(), "state": state_json(&v) })))
                }
                Side::Weyl => {
                    let v = star_k_weyl(&s.ctx.weyl(a)?, &s.ctx.weyl(b)?, *k)?;
                    Ok(Report::ok(format!("{v}\n"), json!({ "text": v.to_string(), "weyl": v.to_json_value() })))
                }
            }
        }
        Command::Transvect { k, p, q } => {
            let s = setup(cli, None)?;
            let v = transvectant(&s.ctx.poly(p)?, &s.ctx.poly(q)?, *k)?;
            Ok(Report::ok(format!("{v}\n"), json!({ "text": v.to_string(), "poly": v.to_json_value() })))
        }
        Command::ExtractUnit { expr, side, free } => {
            let s = setup(cli, None)?;
            let unit = match (side, free) {
                (Side::Vertex, false) => s.action()?.extract_unit(&s.ctx.state(expr)?)?,
                (Side::Vertex, true) => extract_lattice_unit(&s.ctx.state(expr)?)?,
                (Side::Weyl, false) => star_extract_unit(s.action()?.matrix(), &s.ctx.weyl(expr)?)?,
                (Side::Weyl, true) => star_extract_lattice_unit(&s.ctx.weyl(expr)?)?,
            };
            Ok(unit_report(&unit))
        }
        Command::Selftest { only } => {
            let results = crate::selftest::run(only);
            let passed = results.iter().all(|r| r.passed);
            let text: String = results
                .iter()
                .map(|r| format!("{} {:>2} {}: {}\n", if r.passed { "PASS" } else { "FAIL" }, r.id, r.title, r.detail))
                .collect();
            Ok(Report { text, json: json!({ "passed": passed, "checks": results }), ok: passed })
        }
    }
}

fn check(cli: &Cli, what: CheckWhat, realization: Realization) -> Result<Report> {
    let fallback = match realization {
        Realization::Heis => FreeAlgebraSpec::heisenberg(vec![Scalar::one()]),
        Realization::Bc => FreeAlgebraSpec::bc(1),
        _ => FreeAlgebraSpec::beta_gamma(1),
    };
    let s = setup(cli, Some(fallback))?;
    let build = |alg: &Algebra| match realization {
        Realization::Bg => build_ls_ws(alg, 0),
        Realization::Heis => build_heis_lw(alg, 0),
        Realization::Bc => build_bc_lw(alg, 0),
        _ => Err(Error::InvalidInput("W3 is checked on the bg, heis and bc realizations".into())),
    };
    match what {
        CheckWhat::Virasoro => {
            let (l, c) = match realization {
                Realization::Lalpha => conformal_vector(&s.alg, &s.alpha())?,
                Realization::Bprime => {
                    let lambda = cli.lambda.as_deref().map(scalar_list).transpose()?.unwrap_or_default();
                    let cs = s.action()?.conformal_b_prime(&lambda)?;
                    (cs.state, cs.central_charge)
                }
                _ => (build(&s.alg)?.0, Scalar::from_int(-2)),
            };
            let ok = verify_virasoro(&l, &c)?;
            Ok(Report {
                text: format!("L = {l}\nVirasoro at c = {c}: {}\n", if ok { "holds" } else { "fails" }),
                json: json!({ "verified": ok, "central_charge": c, "text": l.to_string(), "state": state_json(&l) }),
                ok,
            })
        }
        CheckWhat::W3 => {
            let (l, w) = build(&s.alg)?;
            let table = w3_ope_table(&l, &w)?;
            let ok = table.iter().all(|r| r.holds());
            let mut text = String::new();
            for r in &table {
                text.push_str(&format!("{:<5} {}\n", if r.holds() { "ok" } else { "FAIL" }, r.label));
                if !r.holds() {
                    text.push_str(&format!("      expected {}\n      got      {}\n", r.expected, r.actual));
                }
            }
            text.push_str(&format!("W3 at c = -2: {}\n", if ok { "holds" } else { "fails" }));
            let rows: Vec<Value> = table
                .iter()
                .map(|r| json!({ "label": r.label, "holds": r.holds(), "expected": r.expected.to_string(), "actual": r.actual.to_string() }))
                .collect();
            Ok(Report { text, json: json!({ "verified": ok, "rows": rows }), ok })
        }
        CheckWhat::HighestWeights => {
            let mut text = String::new();
            let mut rows = Vec::new();
            let mut ok = true;
            for d in -4..=4 {
                let h = highest_weight_data(d)?;
                ok &= h.verified;
                text.push_str(&format!("d = {:>2}: t = {}, w = {}, {}\n", d, h.t, h.w, if h.verified { "ok" } else { "FAIL" }));
                rows.push(json!({ "d": d, "alpha": h.alpha, "t": h.t, "w": h.w, "verified": h.verified }));
            }
            Ok(Report { text, json: json!({ "verified": ok, "rows": rows }), ok })
        }
    }
}
