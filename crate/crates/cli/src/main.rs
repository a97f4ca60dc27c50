use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use latpoly::campaign::{run_campaign, Campaign, CampaignOptions};
use latpoly::counting::{brute_force, count, count_cross};
use latpoly::diophantine::{log_checkpoints, product_sum_table, schmidt_check};
use latpoly::ehrhart::{coefficient_td_minus_2_formula, dedekind_sum, ehrhart_by_interpolation};
use latpoly::fit::fit_exponent;
use latpoly::fourier::{ft_closed_form, ft_contour, ft_direct_oracle, ft_residues, Method};
use latpoly::mainterm::{build_p, build_q, even_exponent_view};
use latpoly::poisson::{cesaro_mean, error_series};
use latpoly::polytope::{AxisLengths, CrossPolytope, GeneralSimplex, Polytope};
use latpoly::scalar::{AlgebraicScalar, Rational, DEFAULT_PRECISION_BITS, PRECISION_CAP};
use latpoly::sweep::{scan_discrepancy, write_csv, SweepConfig};
use latpoly::Error;

const PRECISION_ENV: &str = "LATPOLY_PRECISION_BITS";

#[derive(Parser)]
#[command(name = "latpoly", version, about = "Exact lattice-point counts in dilated algebraic polytopes")]
struct Cli {
    /// Working precision in bits; overrides LATPOLY_PRECISION_BITS.
    #[arg(long, global = true)]
    bits: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count lattice points of `t P`.
    Count {
        #[arg(long)]
        polytope: String,
        #[arg(long)]
        t: String,
        /// Enumerate a bounding box instead of the recursive count.
        #[arg(long)]
        brute_force: bool,
    },
    /// Main-term polynomial of a cross-polytope (p) or corner simplex (q).
    Poly {
        #[arg(long)]
        polytope: String,
        /// Decimal places for the numeric coefficients.
        #[arg(long, default_value_t = 30)]
        digits: usize,
        /// Also evaluate at this dilation.
        #[arg(long)]
        t: Option<String>,
    },
    /// Fourier transform of the indicator of `t S` at a rational frequency.
    Fourier {
        /// `general d=.. v=[..]` or a corner `simplex d=.. a=[..]`.
        #[arg(long)]
        simplex: String,
        /// Comma-separated rational frequency.
        #[arg(long)]
        y: String,
        #[arg(long)]
        t: String,
        /// closed-form, residues, contour or direct-oracle.
        #[arg(long, default_value = "residues")]
        method: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Cesaro means and error series of a cross-polytope, as CSV.
    Cesaro {
        /// Comma-separated axis lengths.
        #[arg(long)]
        axes: String,
        #[arg(long)]
        t: String,
        /// Comma-separated list of N.
        #[arg(long, default_value = "16,32,64,128,256,512,1024")]
        n: String,
    },
    /// Reciprocal product sums over `||m alpha_k||`, as CSV.
    Dioph {
        /// Comma-separated alphas.
        #[arg(long)]
        alphas: String,
        #[arg(long, default_value_t = 1_000_000)]
        m_max: u64,
        #[arg(long, default_value_t = 40)]
        checkpoints: usize,
        /// Write the fit summary here instead of stderr.
        #[arg(long)]
        fit: Option<PathBuf>,
        /// Also run the running-minimum scan.
        #[arg(long)]
        schmidt: bool,
    },
    /// Ehrhart polynomial of an integer corner simplex.
    Ehrhart {
        /// Comma-separated positive integers.
        #[arg(long)]
        axes: String,
    },
    /// Dedekind sum s(a, b).
    Dedekind {
        #[arg(allow_hyphen_values = true)]
        a: i64,
        b: u64,
    },
    /// Discrepancy sweep driven by a TOML config.
    Sweep {
        config: PathBuf,
        /// Fraction of the log-t range used for the exponent fit.
        #[arg(long, default_value_t = 1.0)]
        window: f64,
    },
    /// Run an acceptance campaign (or `all`) and write its artifacts.
    Report {
        campaign: String,
        #[arg(long, default_value = "reports")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Bad input exits 2, a failed acceptance criterion exits 1.
enum Failure {
    Config(String),
    Criteria,
    /// The reader of stdout went away, e.g. `| head`.
    ClosedPipe,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            Failure::ClosedPipe
        } else {
            Failure::Config(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

fn config_err(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn precision(flag: Option<u32>) -> Result<u32, Failure> {
    let bits = match flag {
        Some(b) => b,
        None => match std::env::var(PRECISION_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| config_err(format!("{PRECISION_ENV}: '{v}' is not a bit count")))?,
            Err(_) => DEFAULT_PRECISION_BITS,
        },
    };
    if !(32..=PRECISION_CAP).contains(&bits) {
        return Err(config_err(format!("precision must be between 32 and {PRECISION_CAP} bits, got {bits}")));
    }
    Ok(bits)
}

/// Splits on commas outside parentheses, so `root(1, 0, -2; 1, 2)` stays whole.
fn split_list(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.retain(|x| !x.is_empty());
    out
}

fn scalars(s: &str) -> Result<Vec<AlgebraicScalar>, Failure> {
    split_list(s).into_iter().map(|x| x.parse().map_err(Failure::from)).collect()
}

fn print_json(v: &impl serde::Serialize) -> Outcome {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(|e| match e.io_error_kind() {
        Some(io::ErrorKind::BrokenPipe) => Failure::ClosedPipe,
        _ => config_err(e.to_string()),
    })?;
    writeln!(out)?;
    Ok(())
}

fn cmd_count(polytope: &str, t: &str, brute: bool) -> Outcome {
    let p: Polytope = polytope.parse()?;
    let t: AlgebraicScalar = t.parse()?;
    let r = if brute { brute_force(&p, &t)? } else { count(&p, &t)? };
    print_json(&r)
}

fn cmd_poly(polytope: &str, digits: usize, t: Option<&str>, bits: u32) -> Outcome {
    let poly = match polytope.parse::<Polytope>()? {
        Polytope::Cross(c) => build_p(&c.axes),
        Polytope::Simplex(s) => build_q(&s.axes),
        _ => return Err(config_err("poly needs a cross-polytope or a corner simplex")),
    };
    let mut coefficients = Vec::new();
    for (k, (sym, num)) in poly.symbolic.iter().zip(&poly.numeric).enumerate() {
        let symbolic: serde_json::Map<String, Value> = even_exponent_view(sym)
            .into_iter()
            .map(|(e, c)| {
                let key = e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                (key, Value::String(c.to_string()))
            })
            .collect();
        coefficients.push(json!({ "k": k, "symbolic": symbolic, "decimal": num.decimal(bits, digits)? }));
    }
    let mut out = json!({ "kind": poly.kind, "d": poly.dim(), "coefficients": coefficients });
    if let Some(t) = t {
        let t: AlgebraicScalar = t.parse()?;
        out["value"] = json!({ "t": t.to_string(), "decimal": poly.evaluate(&t, bits)?.value.decimal(bits, digits)? });
    }
    print_json(&out)
}

fn rationals(s: &str) -> Result<Vec<Rational>, Failure> {
    scalars(s)?
        .into_iter()
        .map(|x| x.as_rational().cloned().ok_or_else(|| config_err(format!("frequency entry {x} is not rational"))))
        .collect()
}

fn cmd_fourier(simplex: &str, y: &str, t: &str, method: &str, tol: f64) -> Outcome {
    let s: GeneralSimplex = match simplex.parse::<Polytope>()? {
        Polytope::General(g) => g,
        Polytope::Simplex(c) => c.to_general(),
        _ => return Err(config_err("fourier needs a general or corner simplex")),
    };
    let y = rationals(y)?;
    let t: AlgebraicScalar = t.parse()?;
    let v = match method.parse::<Method>()? {
        Method::ClosedForm => ft_closed_form(&s, &y, &t)?,
        Method::Residues => ft_residues(&s, &y, &t)?,
        Method::Contour => ft_contour(&s, &y, &t, 64, tol)?,
        Method::DirectOracle => ft_direct_oracle(&s, &y, &t, tol)?,
    };
    print_json(&json!({ "re": v.re, "im": v.im, "method": method, "error_bound": v.error_bound }))
}

fn cmd_cesaro(axes: &str, t: &str, ns: &str, bits: u32) -> Outcome {
    let axes = AxisLengths::new(scalars(axes)?)?;
    let t: AlgebraicScalar = t.parse()?;
    let ns: Vec<u64> = split_list(ns)
        .into_iter()
        .map(|x| x.parse().map_err(|_| config_err(format!("bad N '{x}'"))))
        .collect::<Result<_, _>>()?;
    let p = CrossPolytope::new(axes.clone());
    let cnt = count_cross(&p, &t)?.count_u128().ok_or_else(|| config_err("count exceeds 128 bits"))? as f64;
    let main = build_p(&axes).evaluate(&t, bits)?.mid();
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(["n", "ces", "count", "e_n", "gap", "residual"]).map_err(|e| config_err(e.to_string()))?;
    for n in ns {
        let ces = cesaro_mean(&p, &t, n)?.value;
        let e = error_series(&axes, &t, n)?.value;
        w.serialize((n, ces, cnt, e, ces - cnt, cnt - main - e)).map_err(|e| config_err(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_dioph(alphas: &str, m_max: u64, checkpoints: usize, fit: Option<&Path>, schmidt: bool) -> Outcome {
    let a = scalars(alphas)?;
    let table = product_sum_table(&a, m_max, &log_checkpoints(1, m_max, checkpoints))?;
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(["m", "s", "l_m"]).map_err(|e| config_err(e.to_string()))?;
    for r in &table.rows {
        w.serialize((r.m, r.s, r.l_m)).map_err(|e| config_err(e.to_string()))?;
    }
    w.flush()?;
    let mut summary = json!({
        "alphas": table.alphas,
        "gamma": { "slope": table.fit.slope, "ci_low": table.fit.ci_low, "ci_high": table.fit.ci_high, "n": table.fit.n },
        "dirichlet_constant": table.dirichlet_constant,
    });
    if schmidt {
        summary["schmidt"] = serde_json::to_value(schmidt_check(&a, m_max)?).expect("serializable");
    }
    let text = serde_json::to_string_pretty(&summary).expect("serializable");
    match fit {
        Some(path) => fs::write(path, text + "\n")?,
        None => eprintln!("{text}"),
    }
    Ok(())
}

fn cmd_ehrhart(axes: &str) -> Outcome {
    let a: Vec<u64> = split_list(axes)
        .into_iter()
        .map(|x| x.parse().map_err(|_| config_err(format!("axis '{x}' is not a positive integer"))))
        .collect::<Result<_, _>>()?;
    let poly = ehrhart_by_interpolation(&a)?;
    let d = a.len();
    let mut out = json!({ "axes": a, "coefficients": poly });
    if d >= 2 {
        let formula = coefficient_td_minus_2_formula(&a)?;
        let interpolated = &poly.coefficients[d - 2];
        out["formula_td_minus_2"] = json!(formula.to_string());
        out["interpolated_td_minus_2"] = json!(interpolated.to_string());
        out["match"] = json!(&formula == interpolated);
    }
    print_json(&out)
}

fn cmd_dedekind(a: i64, b: u64) -> Outcome {
    let s = dedekind_sum(a, b)?;
    print_json(&json!({ "a": s.a, "b": s.b, "value": s.value.to_string() }))
}

fn cmd_sweep(path: &Path, window: f64, bits_flag: Option<u32>) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    let mut cfg = SweepConfig::from_toml(&text)?;
    if cfg.precision_bits.is_none() || bits_flag.is_some() {
        cfg.precision_bits = Some(precision(bits_flag)?);
    }
    precision(cfg.precision_bits)?;
    let p = cfg.parsed_polytope()?;
    if cfg.cesaro_n.is_some() && !matches!(p, Polytope::Cross(_)) {
        return Err(config_err("cesaro_n needs a cross-polytope"));
    }
    let recs = scan_discrepancy(&cfg)?;
    match &cfg.output {
        Some(out) => write_csv(&recs, fs::File::create(out)?)?,
        None => write_csv(&recs, io::stdout().lock())?,
    }
    if let (Some(n), Polytope::Cross(c)) = (cfg.cesaro_n, &p) {
        let mut buf = Vec::new();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(["t", "n", "ces", "count", "gap"]).map_err(|e| config_err(e.to_string()))?;
            for r in &recs {
                let t = latpoly::scalar::AlgebraicScalar::rational(
                    latpoly::scalar::expr::rational_from_decimal_str(&format!("{:.6}", r.t))
                        .ok_or_else(|| config_err("bad grid point"))?,
                );
                let ces = cesaro_mean(c, &t, n)?.value;
                w.serialize((r.t, n, ces, r.count, ces - r.count as f64)).map_err(|e| config_err(e.to_string()))?;
            }
            w.flush()?;
        }
        match &cfg.output {
            Some(out) => fs::write(out.with_extension("cesaro.csv"), buf)?,
            None => io::stdout().lock().write_all(&buf)?,
        }
    }
    match fit_exponent(&recs, window) {
        Ok(f) => eprintln!("{}", json!({ "slope": f.slope, "ci_low": f.ci_low, "ci_high": f.ci_high, "n": f.n })),
        Err(e) => eprintln!("no exponent fit: {e}"),
    }
    Ok(())
}

fn cmd_report(which: &str, out: &Path, seed: Option<u64>, bits: u32) -> Outcome {
    let campaigns: Vec<Campaign> = if which == "all" { Campaign::ALL.to_vec() } else { vec![which.parse()?] };
    let mut opts = CampaignOptions { bits, ..CampaignOptions::default() };
    if let Some(s) = seed {
        opts.seed = s;
    }
    let mut all_passed = true;
    for c in campaigns {
        let outcome = run_campaign(c, &opts);
        let dir = out.join(c.name());
        fs::create_dir_all(&dir)?;
        for a in &outcome.artifacts {
            fs::write(dir.join(&a.name), &a.contents)?;
        }
        let summary = outcome.summary();
        fs::write(dir.join("summary.txt"), &summary)?;
        print!("{summary}");
        all_passed &= outcome.passed();
    }
    if all_passed {
        Ok(())
    } else {
        Err(Failure::Criteria)
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Count { polytope, t, brute_force } => cmd_count(&polytope, &t, brute_force),
        Command::Poly { polytope, digits, t } => cmd_poly(&polytope, digits, t.as_deref(), precision(cli.bits)?),
        Command::Fourier { simplex, y, t, method, tol } => cmd_fourier(&simplex, &y, &t, &method, tol),
        Command::Cesaro { axes, t, n } => cmd_cesaro(&axes, &t, &n, precision(cli.bits)?),
        Command::Dioph { alphas, m_max, checkpoints, fit, schmidt } => {
            cmd_dioph(&alphas, m_max, checkpoints, fit.as_deref(), schmidt)
        }
        Command::Ehrhart { axes } => cmd_ehrhart(&axes),
        Command::Dedekind { a, b } => cmd_dedekind(a, b),
        Command::Sweep { config, window } => cmd_sweep(&config, window, cli.bits),
        Command::Report { campaign, out, seed } => cmd_report(&campaign, &out, seed, precision(cli.bits)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) | Err(Failure::ClosedPipe) => ExitCode::SUCCESS,
        Err(Failure::Criteria) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
