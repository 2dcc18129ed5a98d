//! `zerodyn`: command-line experiments on the zeros of `φ(D)^m f`.
//!
//! A failed verification or search exits with 1. Bad input exits with 2.

mod config;
mod input;
mod report;

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rug::Rational;
use serde::Serialize;
use serde_json::{json, Value};

use zerodyn::construct::{self, StagePlan, DEFAULT_MAX_HALVINGS};
use zerodyn::dynamics::{self, ols_slope};
use zerodyn::limits;
use zerodyn::poly::{apply_operator, iterate_trajectory};
use zerodyn::roots::{self, RootRecord};
use zerodyn::series::{classify, polya_lp_test, LpVerdict, OperatorForm};
use zerodyn::{Error, Poly, PowerSeries, Result};

use config::RunConfig;
use input::{parse_m_list, parse_poly, parse_q, SeriesSpec};
use report::{emit, Report};

#[derive(Parser)]
#[command(name = "zerodyn", version, about = "Zeros of iterated differential operators of infinite order")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CountOp {
    Nonreal,
}

#[derive(Subcommand)]
enum Command {
    /// Classify φ and report its invariants (p, α, β)
    Classify {
        #[arg(long)]
        series: String,
    },
    /// Scan Z_C(φ(D)x^d) for d ≤ d_max to certify that φ is not Laguerre-Pólya
    LpTest {
        #[arg(long)]
        series: String,
        /// Defaults to the configured degree cap
        #[arg(long)]
        d_max: Option<usize>,
    },
    /// Apply φ(D) once
    Apply {
        #[arg(long)]
        series: String,
        #[arg(long)]
        poly: String,
    },
    /// Apply φ(D) m times
    Iterate {
        #[arg(long)]
        series: String,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, value_enum)]
        op_count: Option<CountOp>,
        /// Report every iterate from m = 0
        #[arg(long)]
        trajectory: bool,
    },
    /// Roots of a polynomial, or of φ(D)^m f when a series is given
    Zeros {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        series: Option<String>,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Find where the all-real-simple regime (or persistent nonreal zeros) begins
    Onset {
        #[arg(long)]
        series: String,
        #[arg(long)]
        poly: String,
    },
    /// Sup-norm distance between f_m and exp(βD^p)x^d
    Converge {
        #[arg(long)]
        series: String,
        #[arg(long)]
        poly: String,
        /// `1,2,5`, `a:b` or `a:b:step`; defaults to 1:m_max
        #[arg(long)]
        m: Option<String>,
    },
    /// Operator distance ‖exp(−m^{1−1/p}αD)φ(m^{−1/p}D)^m − exp(βD^p)‖ on degree ≤ d
    Discrepancy {
        #[arg(long)]
        series: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: Option<String>,
    },
    /// Containment of the pulled-back zeros near γ·Z(exp(−D^p)x^d)
    Attractor {
        #[arg(long)]
        series: String,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        m: Option<String>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
    /// exp(βD^p)x^d
    LimitPoly {
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        roots: bool,
    },
    /// Physicists' Hermite polynomial H_d
    Hermite {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        roots: bool,
    },
    /// Jensen polynomial J_(p,q) of E_p, or of a given series
    Jensen {
        #[arg(long, required_unless_present = "series")]
        p: Option<usize>,
        #[arg(long)]
        q: usize,
        #[arg(long, conflicts_with = "p")]
        series: Option<String>,
        #[arg(long)]
        roots: bool,
    },
    /// Build a finite stage f_N of the counterexample product
    Construct {
        #[arg(long)]
        series: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "1")]
        gamma0: String,
        #[arg(long, default_value_t = DEFAULT_MAX_HALVINGS)]
        max_halvings: usize,
        /// Continue from a saved plan
        #[arg(long)]
        resume: Option<String>,
        /// Also verify the finished plan for m = 1..=M
        #[arg(long)]
        verify: Option<usize>,
    },
    /// Recheck a saved plan from scratch
    VerifyConstruct {
        #[arg(long)]
        series: String,
        #[arg(long)]
        plan: String,
        /// Defaults to every fixed stage
        #[arg(long)]
        n: Option<usize>,
        /// Defaults to N
        #[arg(long)]
        m: Option<usize>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(msg) = cli.config.validate() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(&cli.config, &cli.command) {
        Ok(report) => match emit(&cli.config, &report) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write report: {e}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::VerificationFailed(_)
        | Error::NoConvergence { .. }
        | Error::WitnessNotFound { .. }
        | Error::NoNonrealZero { .. }
        | Error::GammaSearchExhausted { .. } => 1,
        _ => 2,
    }
}

fn series(arg: &str, order: usize) -> Result<PowerSeries> {
    SeriesSpec::parse(arg)?.resolve(order)
}

fn degree(f: &Poly) -> usize {
    f.degree().unwrap_or(0)
}

fn default_ms(cfg: &RunConfig, arg: &Option<String>) -> Result<Vec<usize>> {
    match arg {
        Some(s) => parse_m_list(s),
        None => Ok((1..=cfg.m_max).collect()),
    }
}

fn q_str(q: &Rational) -> String {
    q.to_string()
}

fn coeff_strings(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(q_str).collect()
}

fn root_rows(rs: &[RootRecord]) -> Vec<Vec<String>> {
    rs.iter()
        .map(|r| vec![r.re.to_string(), r.im.to_string(), r.multiplicity.to_string(), format!("{:e}", r.residual)])
        .collect()
}

const ROOT_COLUMNS: [&str; 4] = ["re", "im", "multiplicity", "residual"];

#[derive(Serialize)]
struct PolyOut {
    poly: String,
    coefficients: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    roots: Option<Vec<RootRecord>>,
}

fn poly_report(command: &'static str, p: &Poly, with_roots: bool, cfg: &RunConfig) -> Result<Report> {
    let roots = if with_roots {
        Some(roots::find_roots_exact(p, &cfg.roots())?.records())
    } else {
        None
    };
    let report = Report::new(
        command,
        PolyOut {
            poly: p.to_string(),
            coefficients: coeff_strings(p),
            roots: roots.clone(),
        },
    );
    Ok(match roots {
        Some(rs) => report.table(ROOT_COLUMNS.to_vec(), root_rows(&rs)),
        None => report.table(
            vec!["k", "coefficient"],
            p.coeffs().iter().enumerate().map(|(k, c)| vec![k.to_string(), q_str(c)]).collect(),
        ),
    })
}

fn read_plan(path: &str) -> Result<StagePlan> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read `{path}`: {e}")))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("`{path}`: {e}")))?;
    // a bare plan works, and so does a saved construct report
    let mut node = &doc;
    if let Some(r) = node.get("result") {
        node = r;
    }
    if let Some(p) = node.get("plan") {
        node = p;
    }
    serde_json::from_value(node.clone()).map_err(|e| Error::Parse(format!("`{path}` is not a stage plan: {e}")))
}

fn run(cfg: &RunConfig, command: &Command) -> Result<Report> {
    let rc = cfg.roots();
    match command {
        Command::Classify { series: s } => {
            let phi = series(s, 0)?;
            let cls = classify(&phi)?;
            let row = match &cls.form {
                OperatorForm::General { p, alpha, beta } => {
                    vec!["General".into(), p.to_string(), q_str(alpha), q_str(beta), String::new()]
                }
                OperatorForm::ZeroConstant { mu } => {
                    vec!["ZeroConstant".into(), String::new(), String::new(), String::new(), mu.to_string()]
                }
                OperatorForm::PureExponentialUpToTruncation { gamma, .. } => vec![
                    "PureExponentialUpToTruncation".into(),
                    String::new(),
                    q_str(gamma),
                    String::new(),
                    String::new(),
                ],
            };
            Ok(Report::new("classify", &cls).table(vec!["form", "p", "alpha", "beta", "mu"], vec![row]))
        }
        Command::LpTest { series: s, d_max } => {
            let d_max = d_max.unwrap_or(cfg.d_cap);
            let phi = series(s, d_max)?;
            let res = polya_lp_test(&phi, d_max)?;
            let rows = res.trace.iter().map(|(d, z)| vec![d.to_string(), z.to_string()]).collect();
            if let LpVerdict::CertifiedNotLP { witness } = res.verdict {
                log::info!("first witness at degree {witness}");
            }
            Ok(Report::new("lp-test", &res).table(vec!["d", "nonreal"], rows))
        }
        Command::Apply { series: s, poly } => {
            let f = parse_poly(poly)?;
            let phi = series(s, degree(&f))?;
            let g = apply_operator(&phi, &f)?;
            poly_report("apply", &g, false, cfg)
        }
        Command::Iterate {
            series: s,
            poly,
            m,
            op_count,
            trajectory,
        } => {
            let f = parse_poly(poly)?;
            let phi = series(s, degree(&f))?;
            let traj = iterate_trajectory(&phi, &f, *m)?;
            let count = |g: &Poly| -> Result<Option<usize>> {
                match op_count {
                    Some(CountOp::Nonreal) if g.degree().unwrap_or(0) >= 1 => {
                        Ok(Some(roots::count_nonreal(g, &rc)?.nonreal_count))
                    }
                    Some(CountOp::Nonreal) => Ok(Some(0)),
                    None => Ok(None),
                }
            };
            let mut steps = Vec::new();
            let range = if *trajectory { 0..traj.len() } else { *m..*m + 1 };
            for k in range {
                let g = &traj[k];
                steps.push((k, g, count(g)?));
            }
            let rows = steps
                .iter()
                .map(|(k, g, n)| vec![k.to_string(), g.to_string(), n.map(|n| n.to_string()).unwrap_or_default()])
                .collect();
            let (_, last, last_count) = steps.last().expect("at least one step");
            let mut result = json!({
                "m": m,
                "poly": last.to_string(),
                "coefficients": coeff_strings(last),
            });
            if let Some(n) = last_count {
                result["nonreal"] = json!(n);
            }
            if *trajectory {
                result["trajectory"] = steps
                    .iter()
                    .map(|(k, g, n)| json!({"m": k, "poly": g.to_string(), "nonreal": n}))
                    .collect();
            }
            Ok(Report::new("iterate", result).table(vec!["m", "poly", "nonreal"], rows))
        }
        Command::Zeros { poly, series: s, m } => {
            let f = parse_poly(poly)?;
            let g = match s {
                Some(s) => {
                    let phi = series(s, degree(&f))?;
                    zerodyn::poly::iterate_operator(&phi, &f, *m)?
                }
                None => f,
            };
            let rs = roots::find_roots_exact(&g, &rc)?;
            let count = roots::count_nonreal(&g, &rc)?;
            let records = rs.records();
            let result = json!({
                "poly": g.to_string(),
                "degree": degree(&g),
                "count": count,
                "max_residual": rs.max_residual(),
                "roots": records,
            });
            Ok(Report::new("zeros", result).table(ROOT_COLUMNS.to_vec(), root_rows(&records)))
        }
        Command::Onset { series: s, poly } => {
            let f = parse_poly(poly)?;
            let phi = series(s, degree(&f).max(2))?;
            let r = dynamics::onset_scan(&phi, &f, cfg.m_max, &rc)?;
            let rows = r
                .trace
                .iter()
                .map(|t| vec![t.m.to_string(), t.nonreal_count.to_string(), t.all_real_simple.to_string()])
                .collect();
            Ok(Report::new("onset", &r).table(vec!["m", "nonreal", "all_real_simple"], rows))
        }
        Command::Converge { series: s, poly, m } => {
            let f = parse_poly(poly)?;
            let phi = series(s, degree(&f))?;
            let ms = default_ms(cfg, m)?;
            let r = dynamics::convergence_experiment(&phi, &f, &ms, cfg.precision)?;
            let rows = r
                .samples
                .iter()
                .map(|s| {
                    vec![
                        s.m.to_string(),
                        s.sup_norm_error.to_string(),
                        s.exact_error.as_ref().map(q_str).unwrap_or_default(),
                    ]
                })
                .collect();
            let mut result = serde_json::to_value(&r).expect("serializable");
            result["rate_bound_validates"] = json!(r.rate_bound_validates());
            result["limit_poly_text"] = json!(r.limit_poly.to_string());
            Ok(Report::new("converge", result).table(vec!["m", "error", "exact_error"], rows))
        }
        Command::Discrepancy { series: s, d, m } => {
            let phi = series(s, *d)?;
            let cls = classify(&phi)?;
            let (p, alpha, beta) = cls.general().ok_or(Error::NotGeneralForm)?;
            let ms = default_ms(cfg, m)?;
            let mut samples = Vec::with_capacity(ms.len());
            for &mm in &ms {
                let v = dynamics::operator_discrepancy(&cls, &phi, *d, mm, cfg.precision)?;
                samples.push((mm, v));
            }
            let points: Vec<(f64, f64)> = samples
                .iter()
                .filter(|(_, v)| v.value > 0.0)
                .map(|(mm, v)| ((*mm as f64).ln(), v.value.ln()))
                .collect();
            let rows = samples
                .iter()
                .map(|(mm, v)| vec![mm.to_string(), v.value.to_string(), v.exact.as_ref().map(q_str).unwrap_or_default()])
                .collect();
            let result = json!({
                "p": p,
                "alpha": q_str(alpha),
                "beta": q_str(beta),
                "d": d,
                "samples": samples.iter().map(|(mm, v)| json!({"m": mm, "value": v.value, "exact": v.exact.as_ref().map(q_str)})).collect::<Vec<_>>(),
                "fitted_slope": ols_slope(&points),
            });
            Ok(Report::new("discrepancy", result).table(vec!["m", "value", "exact"], rows))
        }
        Command::Attractor {
            series: s,
            poly,
            m,
            epsilon,
        } => {
            let f = parse_poly(poly)?;
            let phi = series(s, degree(&f))?;
            let ms = default_ms(cfg, m)?;
            let r = dynamics::attractor_experiment(&phi, &f, &ms, *epsilon, &rc)?;
            let rows = r
                .steps
                .iter()
                .map(|t| {
                    vec![
                        t.m.to_string(),
                        t.containment_epsilon_needed.to_string(),
                        t.max_scaled_star_distance.to_string(),
                        t.contained.to_string(),
                        t.multiplicity_match.to_string(),
                        t.all_simple.map(|b| b.to_string()).unwrap_or_default(),
                    ]
                })
                .collect();
            Ok(Report::new("attractor", &r).table(
                vec!["m", "epsilon_needed", "star_distance", "contained", "multiplicity_match", "all_simple"],
                rows,
            ))
        }
        Command::LimitPoly { beta, p, d, roots } => {
            if *p == 0 {
                return Err(Error::InvalidInput("p must be positive".into()));
            }
            let b = parse_q(beta)?;
            poly_report("limit-poly", &limits::exp_dp_monomial(&b, *p, *d), *roots, cfg)
        }
        Command::Hermite { d, roots } => poly_report("hermite", &limits::hermite(*d), *roots, cfg),
        Command::Jensen { p, q, series: s, roots } => {
            let j = match (p, s) {
                (_, Some(s)) => limits::jensen(&series(s, *q)?, *q)?,
                (Some(p), None) if *p > 0 => limits::jensen_ml(*p, *q),
                _ => return Err(Error::InvalidInput("p must be positive".into())),
            };
            poly_report("jensen", &j, *roots, cfg)
        }
        Command::Construct {
            series: s,
            n,
            gamma0,
            max_halvings,
            resume,
            verify,
        } => {
            let phi = series(s, cfg.d_cap)?;
            let gamma0 = parse_q(gamma0)?;
            let plan = match resume {
                Some(path) => {
                    let mut plan = read_plan(path)?;
                    construct::resume(&phi, &mut plan, &gamma0, *max_halvings, &rc)?;
                    plan
                }
                None => construct::construct(&phi, *n, &gamma0, cfg.d_cap, *max_halvings, &rc)?,
            };
            let verification = match verify {
                Some(mm) => Some(construct::verify_counterexample(&phi, &plan, plan.gammas.len(), *mm, &rc)?),
                None => None,
            };
            let rows = plan_rows(&plan);
            Ok(Report::new("construct", json!({"plan": plan, "verification": verification}))
                .table(vec!["m", "k", "degree", "gamma", "a_re", "a_im", "radius"], rows))
        }
        Command::VerifyConstruct { series: s, plan, n, m } => {
            let phi = series(s, cfg.d_cap)?;
            let plan = read_plan(plan)?;
            let n = n.unwrap_or(plan.gammas.len());
            let m = m.unwrap_or(n);
            let r = construct::verify_counterexample(&phi, &plan, n, m, &rc)?;
            let rows = r
                .disks
                .iter()
                .map(|w| {
                    vec![
                        w.m.to_string(),
                        w.k.to_string(),
                        w.center.real().to_f64().to_string(),
                        w.center.imag().to_f64().to_string(),
                        w.radius.to_string(),
                        w.zeros_inside.to_string(),
                    ]
                })
                .collect();
            Ok(Report::new("verify-construct", &r)
                .table(vec!["m", "k", "center_re", "center_im", "radius", "zeros_inside"], rows))
        }
    }
}

fn plan_rows(plan: &StagePlan) -> Vec<Vec<String>> {
    plan.targets
        .iter()
        .map(|t| {
            vec![
                t.m.to_string(),
                t.k.to_string(),
                plan.degrees.get(t.k - 1).map(|d| d.to_string()).unwrap_or_default(),
                plan.gammas.get(t.k - 1).map(q_str).unwrap_or_default(),
                t.a.real().to_f64().to_string(),
                t.a.imag().to_f64().to_string(),
                t.radius.to_string(),
            ]
        })
        .collect()
}
