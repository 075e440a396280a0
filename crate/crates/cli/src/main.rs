mod args;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use holodom::acceptance;
use holodom::covering_domination::{identity_check, CuspCurve};
use holodom::double_section_flows::{auto_section, verify_section_avoids, DominatingMapG, RiccatiField};
use holodom::entire_expr::EntireExpr;
use holodom::flow_oracle::{integrate, IntegrationSpec};
use holodom::gap_constructor::{construct_gap, verify_gap_in};
use holodom::graph_complement_flows::{DominatingMapF, VerticalFieldZu};
use holodom::sampling::SampleSpec;
use holodom::tangent_catalog::{
    closed_flow_family, eigenratio, instantiate_family, oracle_flow, tangency_check, Curve, FamilySpec, PlaneField,
};
use serde::Deserialize;
use serde_json::{json, Value};

use args::{Cx, Problem};

#[derive(Parser)]
#[command(name = "holodom", version, about = "Dominating maps from complete holomorphic vector fields")]
struct Cli {
    /// JSON problem file supplying defaults for s, u, double_section,
    /// family, covering and samples.
    #[arg(long, global = true)]
    problem: Option<PathBuf>,
    /// Seed for every sampled check; HOLODOM_SEED takes precedence.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

/// The graph complement data `s` and `u`.
#[derive(Args)]
struct GraphArgs {
    /// Rational function, e.g. '{"num":[[1,0]],"den":[[0,0],[1,0]]}'.
    #[arg(long)]
    s: Option<String>,
    /// Entire exponent u, as an expression or a coefficient list.
    #[arg(long)]
    u: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Tangency,
    Eigenratio,
    Flow,
}

#[derive(Subcommand)]
enum Cmd {
    /// Gap certificate for s, with its verification report.
    Gap {
        #[command(flatten)]
        g: GraphArgs,
        /// Number of verification samples.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Evaluates f^u(z, t); u defaults to -g1.
    Map {
        #[command(flatten)]
        g: GraphArgs,
        #[arg(long, value_name = "Z,T")]
        eval: String,
    },
    /// A time t with f^u(z, t) = (z, w); u defaults to -g1.
    Preimage {
        #[command(flatten)]
        g: GraphArgs,
        #[arg(long, value_name = "Z,W")]
        target: String,
    },
    /// Samples a trajectory of Z^u as CSV.
    Trajectory {
        #[command(flatten)]
        g: GraphArgs,
        #[arg(long)]
        z: String,
        #[arg(long)]
        w: String,
        #[arg(long)]
        tmax: String,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Output file; without it the CSV goes to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numerical flow of a plane field along a polyline in complex time.
    Flow {
        /// A plane field {"p": [...], "q": [...]} or a family entry.
        #[arg(long)]
        field: String,
        #[arg(long, value_name = "Z;W")]
        start: String,
        /// Waypoints `re,im;re,im;...`, starting after t = 0.
        #[arg(long)]
        path: String,
        #[arg(long)]
        rtol: Option<f64>,
        #[arg(long)]
        atol: Option<f64>,
    },
    /// Fiber type of Z^u over z, with the period when it exists.
    Classify {
        #[command(flatten)]
        g: GraphArgs,
        #[arg(long)]
        z: String,
    },
    /// Riccati flows for a double section {a w^2 + b w + c = 0}.
    DoubleSection {
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        u: Option<String>,
        /// "inf" or a rational function; defaults to inf when a is a
        /// nonzero constant.
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long, value_name = "Z,T", conflicts_with = "verify")]
        eval: Option<String>,
        #[arg(long)]
        verify: bool,
    },
    /// Checks on an entry of the vector field catalog.
    Tangent {
        #[arg(long)]
        family: Option<String>,
        #[arg(long, value_enum)]
        check: Check,
        /// Curve for the tangency check, when the family has no default.
        #[arg(long)]
        curve: Option<String>,
        /// Zero of the field for the eigenratio; defaults to the designated one.
        #[arg(long, value_name = "Z;W")]
        at: Option<String>,
        #[arg(long, value_name = "Z;W")]
        start: Option<String>,
        #[arg(long)]
        t: Option<String>,
    },
    /// The covering map onto the complement of a cusp and the axes.
    Covering {
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long, value_name = "Z;T", group = "op")]
        eval: Option<String>,
        #[arg(long, value_name = "X;Y", group = "op")]
        member: Option<String>,
        #[arg(long, value_name = "X;Y", group = "op")]
        preimage: Option<String>,
        #[arg(long, group = "op")]
        identity: bool,
    },
    /// Runs the acceptance suites.
    Verify {
        #[arg(long, conflicts_with = "criterion")]
        all: bool,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
        criterion: Option<u8>,
    },
}

/// A report and whether it counts as a pass.
struct Outcome {
    report: Value,
    pass: bool,
}

fn ok(report: Value) -> Result<Outcome> {
    Ok(Outcome { report, pass: true })
}

fn cx_json(z: Cx) -> Value {
    json!([z.re, z.im])
}

fn pair(s: &str) -> Result<(Cx, Cx)> {
    match args::complex_list(s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => bail!("expected two complex numbers `re,im;re,im`, got {s:?}"),
    }
}

fn seed(cli: Option<u64>) -> Result<u64> {
    match std::env::var("HOLODOM_SEED") {
        Ok(v) => v.trim().parse().with_context(|| format!("HOLODOM_SEED={v:?} is not an integer")),
        Err(_) => Ok(cli.unwrap_or(0)),
    }
}

fn samples(problem: &Problem, seed: u64, count: Option<usize>) -> SampleSpec<f64> {
    let mut spec = problem.samples.unwrap_or_else(|| SampleSpec::new(1000, seed));
    spec.seed = seed;
    if let Some(n) = count {
        spec.count = n;
    }
    spec
}

fn graph_data(g: &GraphArgs, problem: &Problem) -> Result<(holodom::complex_poly::RationalFn<f64>, Option<EntireExpr<f64>>)> {
    let s = args::pick(g.s.as_deref().map(args::rational).transpose()?, problem.s.clone(), "--s")?;
    let u = g.u.as_deref().map(args::expr).transpose()?.or_else(|| problem.u.clone());
    Ok((s, u))
}

fn dominating_map(g: &GraphArgs, problem: &Problem) -> Result<DominatingMapF<f64>> {
    let (s, u) = graph_data(g, problem)?;
    let cert = construct_gap(&s)?;
    Ok(match u {
        Some(u) => DominatingMapF::new(cert, u),
        None => DominatingMapF::with_u_minus_g1(cert),
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FieldArg {
    Plane(PlaneField<f64>),
    Family(FamilySpec<f64>),
}

fn default_curve(spec: &FamilySpec<f64>) -> Option<Curve<f64>> {
    match spec {
        FamilySpec::Iii { k, .. } | FamilySpec::Iv { k, .. } => Some(Curve::InverseMonomial { k: *k }),
        FamilySpec::Prop7 { r, s } => Some(Curve::Cusp { r: *r, s: *s, a: Cx::new(1.0, 0.0) }),
        FamilySpec::Suzuki2 { s, .. } => Some(Curve::Graph { s: s.clone() }),
        _ => None,
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<Outcome> {
    let problem = Problem::load(cli.problem.as_deref())?;
    let seed = seed(cli.seed)?;
    match cli.cmd {
        Cmd::Gap { g, samples: n } => {
            let (s, _) = graph_data(&g, &problem)?;
            let cert = construct_gap(&s)?;
            let report = verify_gap_in(&cert, &samples(&problem, seed, n))?;
            let pass = report.pass;
            Ok(Outcome { report: json!({ "certificate": cert, "report": report }), pass })
        }
        Cmd::Map { g, eval } => {
            let f = dominating_map(&g, &problem)?;
            let (z, t) = pair(&eval)?;
            let (z1, w1) = f.eval(z, t);
            ok(json!({ "z": cx_json(z1), "w": cx_json(w1), "jacobian": cx_json(f.jacobian(z, t)) }))
        }
        Cmd::Preimage { g, target } => {
            let f = dominating_map(&g, &problem)?;
            let (z, w) = pair(&target)?;
            let t = f.preimage(z, w)?;
            let (_, w1) = f.eval(z, t);
            ok(json!({ "t": cx_json(t), "residual": (w1 - w).norm() }))
        }
        Cmd::Trajectory { g, z, w, tmax, steps, out: path } => {
            let (s, u) = graph_data(&g, &problem)?;
            let field = VerticalFieldZu::new(s, u.unwrap_or_else(EntireExpr::zero));
            let rows = field.trajectory(args::complex(&z)?, args::complex(&w)?, args::complex(&tmax)?, steps);
            let mut csv = String::from("t_re,t_im,z_re,z_im,w_re,w_im\n");
            for (t, z, w) in &rows {
                csv.push_str(&format!("{},{},{},{},{},{}\n", t.re, t.im, z.re, z.im, w.re, w.im));
            }
            match path {
                Some(p) => {
                    std::fs::write(&p, csv).with_context(|| format!("cannot write {}", p.display()))?;
                    ok(json!({ "rows": rows.len(), "out": p.display().to_string() }))
                }
                None => {
                    out.write_all(csv.as_bytes())?;
                    Ok(Outcome { report: Value::Null, pass: true })
                }
            }
        }
        Cmd::Flow { field, start, path, rtol, atol } => {
            let x = match args::json::<FieldArg>(&field)? {
                FieldArg::Plane(p) => p,
                FieldArg::Family(f) => instantiate_family(&f)?,
            };
            let p0 = pair(&start)?;
            let mut spec = IntegrationSpec::along(&args::complex_list(&path)?);
            let defaults = IntegrationSpec::<f64>::default();
            spec = spec.with_tolerances(rtol.unwrap_or(defaults.rtol), atol.unwrap_or(defaults.atol));
            let r = integrate(|z, w| x.eval(z, w), p0, &spec)?;
            ok(json!({
                "z": cx_json(r.end.0),
                "w": cx_json(r.end.1),
                "steps": r.steps,
                "error_estimate": r.error_estimate,
            }))
        }
        Cmd::Classify { g, z } => {
            let (s, u) = graph_data(&g, &problem)?;
            let field = VerticalFieldZu::new(s, u.unwrap_or_else(EntireExpr::zero));
            let z = args::complex(&z)?;
            let period = field.period(z).ok().map(cx_json);
            ok(json!({ "fiber": field.classify(z), "period": period }))
        }
        Cmd::DoubleSection { a, b, c, u, sigma, eval, verify } => {
            let spec = samples(&problem, seed, None);
            let from_file = problem.double_section;
            let d = match (a, b, c) {
                (Some(a), Some(b), Some(c)) => {
                    holodom::double_section_flows::DoubleSection::new(args::expr(&a)?, args::expr(&b)?, args::expr(&c)?)?
                }
                (None, None, None) => match &from_file {
                    Some(f) => f.d.clone(),
                    None => bail!("missing --a, --b, --c: pass them or a double_section in --problem"),
                },
                _ => bail!("--a, --b and --c go together"),
            };
            let u = match u {
                Some(u) => args::expr(&u)?,
                None => from_file.as_ref().and_then(|f| f.u.clone()).unwrap_or_else(EntireExpr::zero),
            };
            let sigma = match sigma {
                Some(s) => args::section(&s)?,
                None => match from_file.and_then(|f| f.sigma).or_else(|| auto_section(&d)) {
                    Some(s) => s,
                    None => bail!("no section given and a is not a nonzero constant; pass --sigma"),
                },
            };
            if verify {
                let rep = verify_section_avoids(&sigma, &d, &spec);
                let pass = rep.pass;
                return Ok(Outcome { report: json!({ "section": sigma, "report": rep }), pass });
            }
            let Some(eval) = eval else { bail!("pass --eval z;t or --verify") };
            let (z, t) = pair(&eval)?;
            let g = DominatingMapG::new(RiccatiField::new(u, d), sigma, &spec)?;
            ok(json!({ "z": cx_json(z), "w": g.eval(z, t)? }))
        }
        Cmd::Tangent { family, check, curve, at, start, t } => {
            let spec = args::pick(family.as_deref().map(args::json).transpose()?, problem.family.clone(), "--family")?;
            let x = instantiate_family(&spec)?;
            match check {
                Check::Tangency => {
                    let curve = match curve {
                        Some(c) => args::json(&c)?,
                        None => match default_curve(&spec) {
                            Some(c) => c,
                            None => bail!("family {} has no default curve; pass --curve", spec.name()),
                        },
                    };
                    let rep = tangency_check(&x, &curve, &samples(&problem, seed, Some(200)));
                    let pass = rep.pass;
                    Ok(Outcome { report: json!({ "family": spec.name(), "curve": curve, "report": rep }), pass })
                }
                Check::Eigenratio => {
                    let p = match at {
                        Some(a) => pair(&a)?,
                        None => match spec.designated_zero() {
                            Some(p) => p,
                            None => bail!("family {} has no designated zero; pass --at", spec.name()),
                        },
                    };
                    ok(json!({ "family": spec.name(), "at": [cx_json(p.0), cx_json(p.1)], "report": eigenratio(&x, p)? }))
                }
                Check::Flow => {
                    let p = pair(start.as_deref().context("--check flow needs --start z;w")?)?;
                    let t = args::complex(t.as_deref().context("--check flow needs --t")?)?;
                    let numeric = oracle_flow(&x, t, p)?;
                    let closed = closed_flow_family(&spec, t, p).ok();
                    let gap = closed.map(|c| (c.0 - numeric.0).norm().max((c.1 - numeric.1).norm()));
                    ok(json!({
                        "family": spec.name(),
                        "oracle": [cx_json(numeric.0), cx_json(numeric.1)],
                        "closed_form": closed.map(|c| json!([cx_json(c.0), cx_json(c.1)])),
                        "difference": gap,
                    }))
                }
            }
        }
        Cmd::Covering { r, s, a, eval, member, preimage, identity } => {
            let file = problem.covering;
            let r = args::pick(r, file.map(|c| c.r), "--r")?;
            let s = args::pick(s, file.map(|c| c.s), "--s")?;
            let a = args::pick(a.as_deref().map(args::complex).transpose()?, file.map(|c| c.a), "--a")?;
            let curve = CuspCurve::new(r, s, a)?;
            if identity {
                let rep = identity_check(&curve);
                let pass = rep.pass;
                return Ok(Outcome { report: json!({ "result": if pass { "pass" } else { "fail" }, "report": rep }), pass });
            }
            if let Some(e) = eval {
                let (z, t) = pair(&e)?;
                let (x, y) = curve.big_gamma(z, t);
                return ok(json!({ "x": cx_json(x), "y": cx_json(y) }));
            }
            if let Some(m) = member {
                let (x, y) = pair(&m)?;
                return ok(json!({ "member": curve.membership(x, y) }));
            }
            if let Some(p) = preimage {
                let (x, y) = pair(&p)?;
                let (z, t) = curve.big_gamma_preimage(x, y)?;
                return ok(json!({ "z": cx_json(z), "t": cx_json(t) }));
            }
            bail!("pass one of --eval, --member, --preimage, --identity")
        }
        Cmd::Verify { all, criterion } => {
            let reports = match (all, criterion) {
                (_, Some(id)) => acceptance::run(id, seed).into_iter().collect(),
                (true, None) => acceptance::run_all(seed),
                (false, None) => bail!("pass --all or --criterion N"),
            };
            let pass = reports.iter().all(|r| r.pass);
            let lines: Vec<String> = reports.iter().map(|r| r.line()).collect();
            Ok(Outcome { report: json!({ "seed": seed, "pass": pass, "summary": lines, "criteria": reports }), pass })
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<holodom::Error>() {
        Some(e) if e.is_numerical() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(outcome) => {
            if !outcome.report.is_null() {
                let text = serde_json::to_string(&outcome.report).expect("reports serialize");
                let _ = writeln!(stdout, "{text}");
            }
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
