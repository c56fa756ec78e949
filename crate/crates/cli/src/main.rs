//! `symtrace`: generation, transport and verification of trace-function
//! annihilators from the command line.
//!
//! Exit codes: 0 when every check passes, 2 for a semantic negative (a
//! failed check or a non-member), 1 for usage and internal errors.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use symtrace_core::annihilators::{GenId, GeneratorSet};
use symtrace_core::charvar::{
    check_z_points, decompose_in_minors, eta, l_sigma, minor, minors, recombine_minors, sample_z_points, vanishes_on_z,
};
use symtrace_core::golden::{golden_check, golden_dir};
use symtrace_core::json::{parse_poly, parse_weyl, poly_to_value, to_pretty, Document, PolyJson};
use symtrace_core::membership::{reduce_modulo_system, verify_certificate, CertificateJson, Verdict};
use symtrace_core::numerics::{
    fd_annihilation_check, poly_roots, rel_err, root_sum, trace_contour, Complex64, QuadratureSpec, TestFn,
    DEFAULT_STEP,
};
use symtrace_core::report::RunReport;
use symtrace_core::space::VarSpace;
use symtrace_core::suites::{run_suite, Suite};
use symtrace_core::symfun::NewtonFamily;
use symtrace_core::transport::{elementary_symmetric_op, xi_transport, SymmetricOperator};
use symtrace_core::{Error, Exec};

const SEED_ENV: &str = "SYMTRACE_SEED";
const ROOT_SUM_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "symtrace",
    version,
    about = "Annihilators of trace functions in elementary symmetric coordinates"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Treat mismatches with published displays as failures.
    #[arg(long, global = true)]
    strict_paper: bool,
    /// Seed for sampling; SYMTRACE_SEED takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Run batch checks on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Newton,
    Dnewton,
    Pnewton,
}

#[derive(Subcommand)]
enum Command {
    /// Print Newton, derived Newton or primitive Newton polynomials.
    Gen {
        #[arg(long)]
        family: FamilyArg,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max_m: usize,
    },
    /// Transport a symmetric operator in x to sigma coordinates.
    Xi {
        #[arg(long)]
        k: usize,
        /// `S<h>` for an elementary symmetric operator, or a JSON file.
        #[arg(long)]
        op: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        suite: String,
        #[arg(long)]
        max_m: Option<usize>,
    },
    /// Characteristic variety: sampling, symbol checks, minor decomposition.
    Charvar(CharvarArgs),
    /// Decide membership in the annihilator ideal and print a certificate.
    Member {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        newton_bound: Option<usize>,
    },
    /// Contour-integral and finite-difference cross-checks at a point.
    Numcheck {
        #[arg(long)]
        k: usize,
        /// Comma-separated real coordinates `a1,...,ak`.
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[arg(long, default_value = "exp")]
        f: String,
        #[arg(long, requires = "nodes")]
        radius: Option<f64>,
        #[arg(long, requires = "radius")]
        nodes: Option<usize>,
    },
    /// Re-derive the stored reference formulas.
    Golden {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CharvarArgs {
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    mode: CharvarMode,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CharvarMode {
    /// Sample this many points of Z.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long)]
    check_symbols: bool,
    /// Decompose a polynomial from a JSON file in the minors.
    #[arg(long)]
    decompose: Option<PathBuf>,
}

/// Result of a subcommand: what to print and the exit status.
struct Outcome {
    json: Value,
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Outcome { json, text, code: 0 }
    }

    fn report(mut r: RunReport, strict: bool) -> Self {
        let code = r.finish(strict) as u8;
        Outcome {
            json: serde_json::to_value(&r).expect("serializable"),
            text: r.to_text(),
            code,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => format!("{}\n", to_pretty(&out.json)),
                Format::Text => out.text,
            };
            match io::stdout().lock().write_all(body.as_bytes()) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                    eprintln!("symtrace: {e}");
                    ExitCode::from(1)
                }
                _ => ExitCode::from(out.code),
            }
        }
        Err(e) => {
            eprintln!("symtrace: {e}");
            ExitCode::from(1)
        }
    }
}

fn seed(cli: &Cli) -> Result<u64, Error> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(cli.seed),
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    match &cli.command {
        Command::Gen { family, k, max_m } => gen(*family, *k, *max_m),
        Command::Xi { k, op } => xi(*k, op),
        Command::Verify { k, suite, max_m } => {
            let suite: Suite = suite.parse()?;
            Ok(Outcome::report(run_suite(suite, *k, *max_m, exec)?, cli.strict_paper))
        }
        Command::Charvar(args) => charvar(args, seed(cli)?, cli.strict_paper),
        Command::Member { k, op, newton_bound } => member(*k, op, *newton_bound),
        Command::Numcheck {
            k,
            sigma,
            f,
            radius,
            nodes,
        } => numcheck(*k, sigma, f, *radius, *nodes),
        Command::Golden { dir } => {
            let dir = dir.clone().unwrap_or_else(golden_dir);
            Ok(Outcome::report(golden_check(&dir), cli.strict_paper))
        }
    }
}

fn gen(family: FamilyArg, k: usize, max_m: usize) -> Result<Outcome, Error> {
    if k < 1 {
        return Err(Error::OutOfRange("k must be at least 1".into()));
    }
    let fam = NewtonFamily::new(k);
    let (name, members): (&str, Vec<(i64, _)>) = match family {
        FamilyArg::Newton => ("newton", (0..=max_m).map(|m| (m as i64, fam.newton(m))).collect()),
        FamilyArg::Dnewton => (
            "dnewton",
            (1 - k as i64..=max_m as i64)
                .map(|m| fam.dnewton(m).map(|p| (m, p)))
                .collect::<Result<_, _>>()?,
        ),
        FamilyArg::Pnewton => (
            "pnewton",
            (1..=max_m)
                .map(|m| fam.pnewton(m).map(|p| (m as i64, p)))
                .collect::<Result<_, _>>()?,
        ),
    };
    let prefix = match family {
        FamilyArg::Newton => "N",
        FamilyArg::Dnewton => "DN",
        FamilyArg::Pnewton => "PN",
    };
    let text = members.iter().map(|(m, p)| format!("{prefix}_{m} = {p}\n")).collect();
    let json = json!({
        "schema": symtrace_core::json::SCHEMA,
        "kind": "family",
        "family": name,
        "k": k,
        "members": members.iter().map(|(m, p)| json!({"m": m, "poly": PolyJson::from(p)})).collect::<Vec<_>>(),
    });
    Ok(Outcome::ok(json, text))
}

fn xi(k: usize, op: &str) -> Result<Outcome, Error> {
    let (name, sym) = match op.strip_prefix('S').and_then(|h| h.parse::<usize>().ok()) {
        Some(h) => (format!("Sigma{h}, k={k}"), elementary_symmetric_op(k, h)?),
        None => {
            let parsed = parse_weyl(&read(&PathBuf::from(op))?)?;
            if parsed.space() != VarSpace::X(k) {
                return Err(Error::SpaceMismatch(parsed.space(), VarSpace::X(k)));
            }
            (format!("xi({op})"), SymmetricOperator::new(parsed)?)
        }
    };
    let q = xi_transport(&sym)?;
    let doc = Document::weyl(Some(&name), &q);
    Ok(Outcome::ok(
        serde_json::to_value(&doc).expect("serializable"),
        format!("{q}\n"),
    ))
}

fn charvar(args: &CharvarArgs, seed: u64, strict: bool) -> Result<Outcome, Error> {
    let k = args.k;
    if let Some(n) = args.mode.sample {
        let points = sample_z_points(k, seed, n)?;
        let stats = check_z_points(k, &points)?;
        let ok = [stats.minors_vanish, stats.l_nonzero, stats.progression, stats.root]
            .iter()
            .all(|&c| c == n);
        let text = format!(
            "samples {}\nminors vanish {}\nl nonzero {}\ngeometric progression {}\nroot of P {}\ngeneric {}\n",
            stats.samples, stats.minors_vanish, stats.l_nonzero, stats.progression, stats.root, stats.generic
        );
        let json = json!({ "k": k, "seed": seed, "stats": stats, "points": points });
        return Ok(Outcome {
            json,
            text,
            code: if ok { 0 } else { 2 },
        });
    }
    if args.mode.check_symbols {
        return Ok(Outcome::report(check_symbols(k)?, strict));
    }
    let path = args.mode.decompose.as_ref().expect("clap enforces one mode");
    let f = parse_poly(&read(path)?)?;
    if f.space() != VarSpace::Mixed(k) {
        return Err(Error::SpaceMismatch(f.space(), VarSpace::Mixed(k)));
    }
    match decompose_in_minors(&f) {
        Ok(coeffs) => {
            let recombines = recombine_minors(k, &coeffs)? == f;
            let text = coeffs.iter().map(|((i, j), c)| format!("m({i},{j}): {c}\n")).collect();
            let json = json!({
                "k": k,
                "on_variety": true,
                "recombines": recombines,
                "coefficients": coeffs.iter().map(|((i, j), c)| json!({"minor": [i, j], "coeff": poly_to_value(c)})).collect::<Vec<_>>(),
            });
            Ok(Outcome {
                json,
                text,
                code: if recombines { 0 } else { 2 },
            })
        }
        Err(Error::NotOnVariety) => Ok(Outcome {
            json: json!({"k": k, "on_variety": false}),
            text: "not on the variety\n".into(),
            code: 2,
        }),
        Err(e) => Err(e),
    }
}

/// Each generator's symbol against its minor, and `vanishes_on_z` on each minor.
fn check_symbols(k: usize) -> Result<RunReport, Error> {
    let mut r = RunReport::new("symbols", Some(k));
    for (id, op) in GeneratorSet::system(k)?.gens {
        let sym = op.symbol()?;
        let (ok, what) = match id {
            GenId::T(m) => {
                let expect = &(&eta(k, 1) * &eta(k, m - 1)) + &(&l_sigma(k) * &eta(k, m));
                (sym == expect && sym == minor(k, 1, m)?, format!("= m(1,{m})"))
            }
            GenId::A(p, q) => (sym == -minor(k, p + 1, q)?, format!("= -m({},{q})", p + 1)),
            _ => unreachable!("system holds only A and T"),
        };
        r.check(format!("symbol {id} {what}"), ok, "");
    }
    for (id, m) in minors(k)?.minors {
        r.check(format!("m({},{}) vanishes on Z", id.0, id.1), vanishes_on_z(&m)?, "");
    }
    Ok(r)
}

fn member(k: usize, path: &PathBuf, bound: Option<usize>) -> Result<Outcome, Error> {
    let op = parse_weyl(&read(path)?)?;
    if op.space() != VarSpace::Sigma(k) {
        return Err(Error::SpaceMismatch(op.space(), VarSpace::Sigma(k)));
    }
    let res = reduce_modulo_system(&op, bound)?;
    match &res.verdict {
        Verdict::Member => {
            let verified = verify_certificate(&op, &res.certificate)?;
            let mut text = String::from("member\n");
            for (id, c) in &res.certificate.entries {
                text.push_str(&format!("({c}) * {id}\n"));
            }
            let json = json!({
                "verdict": "member",
                "verified": verified,
                "orders": res.orders,
                "certificate": CertificateJson::from(&res.certificate),
            });
            Ok(Outcome {
                json,
                text,
                code: if verified { 0 } else { 1 },
            })
        }
        Verdict::NonMember { index, image } => {
            let json = json!({ "verdict": "non-member", "newton_index": index, "image": poly_to_value(image) });
            Ok(Outcome {
                json,
                text: format!("non-member: image of N_{index} is {image}\n"),
                code: 2,
            })
        }
    }
}

fn numcheck(k: usize, sigma: &str, f: &str, radius: Option<f64>, nodes: Option<usize>) -> Result<Outcome, Error> {
    let re: Vec<f64> = sigma
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad coordinate {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    if re.len() != k {
        return Err(Error::OutOfRange(format!(
            "--sigma has {} entries, expected {k}",
            re.len()
        )));
    }
    let s: Vec<Complex64> = re.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let tf: TestFn = f.parse()?;
    let spec = match (radius, nodes) {
        (Some(radius), Some(nodes)) => QuadratureSpec { radius, nodes },
        _ => QuadratureSpec::auto(&s),
    };
    let tv = trace_contour(&tf, &s, &spec)?;
    let roots = poly_roots(&s)?;
    let direct = root_sum(&tf, &roots);
    let root_err = rel_err(tv.value, direct);
    let mut fd = Vec::new();
    let mut fd_ok = true;
    if k >= 2 {
        for (id, op) in GeneratorSet::system(k)?.gens {
            match fd_annihilation_check(&op, &tf, &re, DEFAULT_STEP) {
                Ok(r) => {
                    fd_ok &= r.pass;
                    fd.push(json!({"generator": id, "report": r}));
                }
                Err(e) => {
                    fd_ok = false;
                    fd.push(json!({"generator": id, "error": e.to_string()}));
                }
            }
        }
    }
    let pass = root_err <= ROOT_SUM_TOL && fd_ok;
    let json = json!({
        "value": tv.value,
        "diagnostics": {
            "radius": spec.radius,
            "nodes": spec.nodes,
            "log_derivative_form": tv.log_derivative_form,
            "form_difference": tv.difference,
            "roots": roots,
        },
        "residuals": {
            "root_sum": direct,
            "root_sum_rel_err": root_err,
            "finite_differences": fd,
        },
        "pass": pass,
    });
    let text = format!(
        "value {} {:+e}i\nform difference {:e}\nroot-sum relative error {:e}\nfinite differences {}\n",
        tv.value.re,
        tv.value.im,
        tv.difference,
        root_err,
        if fd_ok { "pass" } else { "fail" }
    );
    Ok(Outcome {
        json,
        text,
        code: if pass { 0 } else { 2 },
    })
}
