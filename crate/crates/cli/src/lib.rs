//! File formats and the `polysphere` command-line tool.
//!
//! Exit codes: 0 on success, 1 when a check ran and came out false (not a
//! design, bound not certified), 2 on usage or input errors.

pub mod formats;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use polysphere_core::designs::{self, Mode, Value as PointValue};
use polysphere_core::gram::{build_form, inner_product};
use polysphere_core::heights::{subspace_degree, subspace_height};
use polysphere_core::moments::{
    moment_gamma_oracle, monte_carlo_moment, normalized_monomial_moment,
};
use polysphere_core::orthogonalizer::{
    orthogonal_basis_capped, orthogonal_basis_sphere_capped, siegel_basis_capped,
    verify_certificate,
};
use polysphere_core::{dimension, linalg::DEFAULT_SEARCH_CAP, MultiIndex, Polynomial};
use serde_json::{json, Value};

use formats::{FormatError, SubspaceDoc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "polysphere",
    version,
    about = "Exact sphere inner products, orthogonal integer bases and spherical designs"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of monomials of degree at most M in N variables.
    Dim(DimArgs),
    /// Normalized sphere moment of x^eps.
    Moment(MomentArgs),
    /// Gram matrix of the sphere inner product on the lex monomial basis.
    Gram(GramArgs),
    /// Sphere inner product of two polynomials.
    Inner(InnerArgs),
    /// Squared height of a subspace.
    Height(SubspaceArgs),
    /// Small-height integer basis of a subspace.
    Siegel(SiegelArgs),
    /// Orthogonal integer basis with a height certificate.
    Orthogonalize(OrthogonalizeArgs),
    /// Check the spherical design criterion.
    DesignCheck(DesignArgs),
    /// Normalized integral of a polynomial over the sphere.
    Integrate(IntegrateArgs),
}

#[derive(Args, Debug)]
struct DimArgs {
    #[arg(long = "M")]
    m: u32,
    #[arg(long = "N")]
    n: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Oracle {
    /// Closed form.
    Exact,
    /// Gamma-function expression.
    Gamma,
    /// Monte Carlo estimate.
    Mc,
}

#[derive(Args, Debug)]
struct MomentArgs {
    /// Exponents, comma separated, e.g. 2,0,0.
    #[arg(long, value_delimiter = ',', required = true)]
    eps: Vec<u32>,
    #[arg(long = "N")]
    n: usize,
    #[arg(long, value_enum, default_value_t = Oracle::Exact)]
    oracle: Oracle,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Required for --oracle mc in json mode.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct GramArgs {
    #[arg(long = "M")]
    m: u32,
    #[arg(long = "N")]
    n: usize,
    /// Also write the JSON matrix to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct InnerArgs {
    /// Polynomial JSON file, or the JSON document itself.
    #[arg(long)]
    f: String,
    #[arg(long)]
    g: String,
}

#[derive(Args, Debug)]
struct SubspaceArgs {
    #[arg(long)]
    subspace: PathBuf,
}

#[derive(Args, Debug)]
struct SiegelArgs {
    #[arg(long)]
    subspace: PathBuf,
    /// Limit on search-box nodes for the enumeration fallback.
    #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
    cap: u64,
}

#[derive(Args, Debug)]
struct OrthogonalizeArgs {
    #[arg(long)]
    subspace: PathBuf,
    /// `sphere`, or a JSON file holding a symmetric form matrix.
    #[arg(long, default_value = "sphere")]
    form: String,
    /// Also write the certificate to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
    cap: u64,
}

#[derive(Args, Debug)]
struct DesignArgs {
    #[arg(long)]
    points: PathBuf,
    #[arg(long = "M")]
    m: u32,
    /// Absolute tolerance per residual (float point sets only).
    #[arg(long, default_value_t = designs::DEFAULT_DESIGN_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct IntegrateArgs {
    /// Polynomial JSON file, or the JSON document itself.
    #[arg(long)]
    poly: String,
}

struct Outcome {
    config: Value,
    result: Value,
    human: String,
    code: i32,
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let (name, outcome) = match dispatch(&cli) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let written = match cli.format {
        Format::Json => {
            let doc = json!({"command": name, "config": outcome.config, "result": outcome.result});
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )
        }
        Format::Human => write!(out, "{}", outcome.human),
    };
    if written.is_err() {
        return EXIT_INPUT;
    }
    outcome.code
}

fn dispatch(cli: &Cli) -> Result<(&'static str, Outcome), FormatError> {
    let json = cli.format == Format::Json;
    Ok(match &cli.command {
        Command::Dim(a) => ("dim", dim(a)?),
        Command::Moment(a) => ("moment", moment(a, json)?),
        Command::Gram(a) => ("gram", gram(a)?),
        Command::Inner(a) => ("inner", inner(a)?),
        Command::Height(a) => ("height", height(a)?),
        Command::Siegel(a) => ("siegel", siegel(a)?),
        Command::Orthogonalize(a) => ("orthogonalize", orthogonalize(a)?),
        Command::DesignCheck(a) => ("design-check", design_check(a)?),
        Command::Integrate(a) => ("integrate", integrate(a)?),
    })
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path)
        .map_err(|e| FormatError(format!("cannot read {}: {e}", path.display())))
}

fn write_json(path: &Path, v: &Value) -> Result<(), FormatError> {
    let text = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    fs::write(path, text).map_err(|e| FormatError(format!("cannot write {}: {e}", path.display())))
}

fn polynomial_arg(arg: &str) -> Result<Polynomial, FormatError> {
    if arg.trim_start().starts_with('{') {
        formats::parse_polynomial(arg)
    } else {
        formats::parse_polynomial(&read(Path::new(arg))?)
    }
}

fn path_json(p: &Path) -> Value {
    json!(p.display().to_string())
}

fn dim(a: &DimArgs) -> Result<Outcome, FormatError> {
    let l = dimension(a.m, a.n)?;
    Ok(Outcome {
        config: json!({"M": a.m, "N": a.n}),
        result: json!({"L": l.to_string()}),
        human: format!("{l}\n"),
        code: EXIT_OK,
    })
}

fn moment(a: &MomentArgs, json_mode: bool) -> Result<Outcome, FormatError> {
    let eps = MultiIndex::new(a.eps.clone());
    let mut config =
        json!({"eps": a.eps, "N": a.n, "oracle": format!("{:?}", a.oracle).to_lowercase()});
    let exact = normalized_monomial_moment(&eps, a.n)?;
    match a.oracle {
        Oracle::Exact | Oracle::Gamma => {
            let v = if a.oracle == Oracle::Gamma {
                moment_gamma_oracle(&eps, a.n)?
            } else {
                exact
            };
            Ok(Outcome {
                config,
                result: json!({"value": v.to_string()}),
                human: format!("{v}\n"),
                code: EXIT_OK,
            })
        }
        Oracle::Mc => {
            let seed = match (a.seed, json_mode) {
                (Some(s), _) => s,
                (None, true) => {
                    return Err(FormatError(
                        "--oracle mc needs an explicit --seed in json mode".into(),
                    ))
                }
                (None, false) => 0,
            };
            if a.samples < 2 {
                return Err(FormatError("--samples must be at least 2".into()));
            }
            config["samples"] = json!(a.samples);
            config["seed"] = json!(seed);
            let est = monte_carlo_moment(&eps, a.n, a.samples, seed)?;
            Ok(Outcome {
                config,
                result: json!({"mean": est.mean, "std_error": est.std_error, "samples": est.samples, "exact": exact.to_string()}),
                human: format!(
                    "{} ± {} ({} samples, seed {seed}; exact {exact})\n",
                    est.mean, est.std_error, est.samples
                ),
                code: EXIT_OK,
            })
        }
    }
}

fn gram(a: &GramArgs) -> Result<Outcome, FormatError> {
    let form = build_form(a.m, a.n)?;
    let doc = formats::gram_json(&form);
    if let Some(p) = &a.out {
        write_json(p, &doc)?;
    }
    let mut human = format!(
        "L = {} (M = {}, N = {}, lex order), nonzero entries i <= j:\n",
        form.len(),
        a.m,
        a.n
    );
    for (i, j, v) in form.upper_entries() {
        human.push_str(&format!(
            "{i} {j} {} {} {v}\n",
            form.basis().indices()[i],
            form.basis().indices()[j]
        ));
    }
    Ok(Outcome {
        config: json!({"M": a.m, "N": a.n, "out": a.out.as_deref().map(path_json)}),
        result: doc,
        human,
        code: EXIT_OK,
    })
}

fn inner(a: &InnerArgs) -> Result<Outcome, FormatError> {
    let f = polynomial_arg(&a.f)?;
    let g = polynomial_arg(&a.g)?;
    if f.vars() != g.vars() {
        return Err(FormatError(format!(
            "polynomials live in {} and {} variables",
            f.vars(),
            g.vars()
        )));
    }
    let degree = f.degree().max(g.degree());
    let form = build_form(degree, f.vars())?;
    let v = inner_product(&f, &g, &form)?;
    Ok(Outcome {
        config: json!({"f": formats::polynomial_json(&f), "g": formats::polynomial_json(&g)}),
        result: json!({"value": v.to_string(), "M": degree}),
        human: format!("{v}\n"),
        code: EXIT_OK,
    })
}

fn height(a: &SubspaceArgs) -> Result<Outcome, FormatError> {
    let doc = formats::parse_subspace(&read(&a.subspace)?)?;
    let h = subspace_height(doc.space())?;
    let mut result = json!({"dim": doc.space().dim(), "height_sq": h.to_string()});
    let mut human = format!("H(V)^2 = {h}\nH(V) ≈ {}\n", h.height_f64());
    if let SubspaceDoc::Polynomials(p) = &doc {
        let d = subspace_degree(p)?;
        result["degree"] = json!(d);
        human.push_str(&format!("degree {d}\n"));
    }
    Ok(Outcome {
        config: json!({"subspace": path_json(&a.subspace)}),
        result,
        human,
        code: EXIT_OK,
    })
}

fn siegel(a: &SiegelArgs) -> Result<Outcome, FormatError> {
    let doc = formats::parse_subspace(&read(&a.subspace)?)?;
    let s = siegel_basis_capped(doc.space(), a.cap)?;
    let certified = s.certified() && s.bound_holds();
    let mut human = String::new();
    match doc.ambient() {
        Some(b) => {
            for g in &s.vectors {
                let coeffs: Vec<_> = g
                    .iter()
                    .cloned()
                    .map(polysphere_core::Rational::from_integer)
                    .collect();
                human.push_str(&format!("{}\n", Polynomial::from_coefficients(b, &coeffs)?));
            }
        }
        None => {
            for g in &s.vectors {
                human.push_str(&format!(
                    "{}\n",
                    g.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                ));
            }
        }
    }
    human.push_str(&format!(
        "prod H^2 = {} <= H(V)^2 = {}: {}\n",
        s.product_sq(),
        s.subspace_height,
        if certified {
            "certified"
        } else {
            "NOT certified"
        }
    ));
    Ok(Outcome {
        config: json!({"subspace": path_json(&a.subspace), "cap": a.cap}),
        result: formats::siegel_json(&s, doc.ambient()),
        human,
        code: if certified { EXIT_OK } else { EXIT_FALSE },
    })
}

fn orthogonalize(a: &OrthogonalizeArgs) -> Result<Outcome, FormatError> {
    let doc = formats::parse_subspace(&read(&a.subspace)?)?;
    let (cert, ambient, space, form) = if a.form == "sphere" {
        let SubspaceDoc::Polynomials(p) = &doc else {
            return Err(FormatError(
                "--form sphere needs a subspace given by polynomials".into(),
            ));
        };
        let out = orthogonal_basis_sphere_capped(p, a.cap)?;
        let t = p.truncated()?;
        let form = build_form(out.ambient.degree(), out.ambient.vars())?.to_dense();
        (out.certificate, Some(out.ambient), t.space().clone(), form)
    } else {
        let form = formats::parse_form_matrix(&read(Path::new(&a.form))?)?;
        let cert = orthogonal_basis_capped(doc.space(), &form, a.cap)?;
        (cert, doc.ambient().cloned(), doc.space().clone(), form)
    };
    let report = verify_certificate(&cert, &space, &form);
    let certificate = formats::certificate_json(&cert, ambient.as_ref());
    if let Some(p) = &a.out {
        write_json(p, &certificate)?;
    }
    let ok = report.passed() && cert.siegel_certified;
    let mut human = String::new();
    match &ambient {
        Some(b) => {
            for g in &cert.vectors {
                let coeffs: Vec<_> = g
                    .iter()
                    .cloned()
                    .map(polysphere_core::Rational::from_integer)
                    .collect();
                human.push_str(&format!("{}\n", Polynomial::from_coefficients(b, &coeffs)?));
            }
        }
        None => {
            for g in &cert.vectors {
                human.push_str(&format!(
                    "{}\n",
                    g.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                ));
            }
        }
    }
    human.push_str(&format!(
        "prod H^2 = {}, bound = {}, radical dim {}\n{}\n",
        cert.product_sq,
        cert.squared_bound,
        cert.radical_dim,
        if ok { "certified" } else { "NOT certified" }
    ));
    if !report.passed() {
        human.push_str(&format!("failed checks: {:?}\n", report.failures()));
    }
    Ok(Outcome {
        config: json!({
            "subspace": path_json(&a.subspace),
            "form": a.form,
            "out": a.out.as_deref().map(path_json),
            "cap": a.cap,
        }),
        result: json!({"certificate": certificate, "checks": formats::report_json(&report), "certified": ok}),
        human,
        code: if ok { EXIT_OK } else { EXIT_FALSE },
    })
}

fn point_value_json(v: &PointValue) -> Value {
    match v {
        PointValue::Exact(q) => json!(q.to_string()),
        PointValue::Float(x) => json!(x),
    }
}

fn design_check(a: &DesignArgs) -> Result<Outcome, FormatError> {
    let s = formats::parse_points(&read(&a.points)?)?;
    let r = designs::design_check(&s, a.m, a.tol)?;
    let failing: Vec<Value> = r.failing.iter().map(formats::multi_index_json).collect();
    let residuals: Vec<Value> = r
        .residuals
        .iter()
        .map(|(m, v)| json!({"m": m.exponents(), "r": point_value_json(v)}))
        .collect();
    let mut config = json!({"points": path_json(&a.points), "M": a.m});
    if s.mode() == Mode::Float {
        config["tol"] = json!(a.tol);
    }
    let mut human = format!(
        "{} points, {} mode: {} a spherical {}-design (max |residual| {})\n",
        s.len(),
        s.mode(),
        if r.is_design { "is" } else { "is NOT" },
        a.m,
        r.max_abs_residual
    );
    for (m, v) in r.residuals.iter().filter(|(m, _)| r.failing.contains(m)) {
        human.push_str(&format!("  fails at {m}: residual {v}\n"));
    }
    Ok(Outcome {
        config,
        result: json!({
            "N": s.vars(),
            "k": s.len(),
            "mode": s.mode().to_string(),
            "is_design": r.is_design,
            "failing": failing,
            "max_abs_residual": point_value_json(&r.max_abs_residual),
            "residuals": residuals,
        }),
        human,
        code: if r.is_design { EXIT_OK } else { EXIT_FALSE },
    })
}

fn integrate(a: &IntegrateArgs) -> Result<Outcome, FormatError> {
    let f = polynomial_arg(&a.poly)?;
    let v = designs::integrate_over_sphere(&f)?;
    Ok(Outcome {
        config: json!({"poly": formats::polynomial_json(&f)}),
        result: json!({"value": v.to_string()}),
        human: format!("{v}\n"),
        code: EXIT_OK,
    })
}
