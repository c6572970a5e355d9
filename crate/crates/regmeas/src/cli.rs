use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use regmeas_core::dilation::{self, ClosedForm, Route};
use regmeas_core::measure::{self, Interval};
use regmeas_core::rational::{format_rational, frac, to_f64};
use regmeas_core::spectral::{self, JsrBounds};
use regmeas_core::{sums, Error, HypothesisKind, LinearRepresentation, QMatrix, Rational, BUILTIN_NAMES};
use serde_json::{json, Value};

use crate::output::{num, num_json, write_json, Format, Table};
use crate::{repfile, AppError};

#[derive(Debug, Parser)]
#[command(name = "regmeas", version, about = "Measures and distribution functions of k-regular sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Built-in representation (see `regmeas builtin --list`)
    #[arg(long, value_name = "NAME")]
    pub builtin: Option<String>,
    /// Representation JSON file
    #[arg(long, value_name = "PATH")]
    pub rep: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write results here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Transposed,
    Direct,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Transposed => Route::Transposed,
            RouteArg::Direct => Route::Direct,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of f(m) and the state vector for m in a range
    Eval {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 0)]
        from: u64,
        /// Last index, inclusive
        #[arg(long, default_value_t = 31)]
        to: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Fundamental-region sums Sigma(n)
    Sums {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 12)]
        levels: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Spectrum, primitivity, joint spectral radius and Hölder interval as JSON
    Diagnose {
        #[command(flatten)]
        source: Source,
        /// Product length for the joint spectral radius bounds
        #[arg(long)]
        jsr_depth: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Weights of the level-n approximant measures
    Measure {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 4)]
        level: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Distribution function on the grid j/G, empirical and/or closed form
    Cdf {
        #[command(flatten)]
        source: Source,
        /// Empirical distribution at this level (default 14 without --closed-form)
        #[arg(long)]
        level: Option<u32>,
        /// Evaluate the closed form from the dilation equation
        #[arg(long)]
        closed_form: bool,
        /// Dilation grid depth D
        #[arg(long, default_value_t = 12)]
        depth: u32,
        /// Number of grid intervals G
        #[arg(long, default_value_t = 64)]
        grid: u64,
        /// Count [0, x) instead of [0, x] in the empirical distribution
        #[arg(long)]
        half_open: bool,
        #[arg(long, value_enum, default_value_t = RouteArg::Transposed)]
        route: RouteArg,
        /// Jordan data JSON overriding the automatic computation
        #[arg(long, value_name = "PATH")]
        jordan: Option<PathBuf>,
        #[arg(long, default_value_t = dilation::DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Fourier coefficients, empirical at level n and as an infinite product
    Fourier {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        t_from: i64,
        #[arg(long, default_value_t = 8, allow_negative_numbers = true)]
        t_to: i64,
        #[arg(long, default_value_t = 14)]
        level: u32,
        /// Truncation N of the matrix product
        #[arg(long, default_value_t = 30)]
        truncation: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Exact masses of [a, b) across levels
    Scan {
        #[command(flatten)]
        source: Source,
        /// Endpoints as integers or p/q
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
        interval: Vec<String>,
        /// Last level
        #[arg(long)]
        levels: u32,
        #[arg(long, default_value_t = 1)]
        from: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Representation of the same sequence in base k^j
    Lift {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 2)]
        power: u32,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Conjugate by T; rows separated by ';', entries by ','
    Conjugate {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_name = "ROWS", allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// List built-in representations or emit one as JSON
    Builtin {
        #[arg(long, conflicts_with = "emit")]
        list: bool,
        #[arg(long, value_name = "NAME")]
        emit: Option<String>,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

pub enum Body {
    Table(Table),
    Json(Value),
    Text(String),
}

/// Result of a command before it is written out.
pub struct Outcome {
    pub body: Body,
    /// Informational lines for stderr.
    pub notes: Vec<String>,
    /// A hypothesis failure reported after the body.
    pub violation: Option<AppError>,
}

impl Outcome {
    fn new(body: Body) -> Self {
        Outcome {
            body,
            notes: Vec::new(),
            violation: None,
        }
    }
}

fn load(source: &Source) -> Result<LinearRepresentation, AppError> {
    match (&source.builtin, &source.rep) {
        (Some(name), None) => Ok(regmeas_core::builtin(name)?),
        (None, Some(path)) => repfile::read_rep(path),
        _ => Err(AppError::Usage("give exactly one of --builtin or --rep".into())),
    }
}

fn exact_arg(s: &str, what: &str) -> Result<Rational, AppError> {
    if s.contains(['.', 'e', 'E']) {
        return Err(AppError::Usage(format!("{what} {s:?}: floats are refused here, use p/q")));
    }
    regmeas_core::parse_rational(s).map_err(|e| AppError::Usage(format!("{what}: {e}")))
}

fn parse_matrix(text: &str) -> Result<QMatrix, AppError> {
    let rows = text
        .split(';')
        .map(|row| row.split(',').map(|e| exact_arg(e, "matrix entry")).collect())
        .collect::<Result<Vec<Vec<Rational>>, _>>()?;
    QMatrix::from_rows(rows).map_err(|e| AppError::Usage(e.to_string()))
}

fn check_count(what: &str, count: u64, limit: u64) -> Result<(), AppError> {
    if count > limit {
        return Err(AppError::Usage(format!("{what} = {count} exceeds {limit}")));
    }
    Ok(())
}

fn component_names(prefix: &str, d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("{prefix}_{i}")).collect()
}

fn eval(rep: &LinearRepresentation, from: u64, to: u64) -> Result<Table, AppError> {
    if to < from {
        return Err(AppError::Usage("--to is below --from".into()));
    }
    check_count("range length", to - from + 1, 1 << 20)?;
    let mut header = vec!["m".to_string(), "f".to_string()];
    header.extend(component_names("state", rep.dim()));
    let rows: Vec<Vec<String>> = (from..=to)
        .into_par_iter()
        .map(|m| {
            let state = rep.state_vector(m);
            let f = regmeas_core::matrix::dot(rep.selector(), &state);
            let mut row = vec![m.to_string(), format_rational(&f)];
            row.extend(state.iter().map(format_rational));
            row
        })
        .collect();
    Ok(Table { header, rows })
}

fn sums_table(rep: &LinearRepresentation, levels: u32) -> Result<Table, AppError> {
    check_count("levels", levels as u64, 1 << 16)?;
    let mut t = Table::new(std::iter::once("n".to_string()).chain(component_names("Sigma", rep.dim())));
    for s in sums::sigma_sequence(rep, levels) {
        let mut row = vec![s.level.to_string()];
        row.extend(s.values.iter().map(format_rational));
        t.push(row);
    }
    Ok(t)
}

fn jsr_json(j: &JsrBounds) -> Value {
    json!({
        "lower": num_json(j.lower),
        "upper": num_json(j.upper),
        "depth": j.depth,
        "exact": j.exact.map(num_json),
        "history": j.history.iter().map(|(l, u)| json!([num_json(*l), num_json(*u)])).collect::<Vec<_>>(),
    })
}

fn violation_json(e: &AppError) -> Value {
    let d = e.diagnostic();
    json!({"code": d["error"], "description": d["description"], "detail": d["detail"]})
}

fn diagnose(rep: &LinearRepresentation, depth: Option<u32>) -> Result<Outcome, AppError> {
    let depth = depth.unwrap_or_else(|| dilation::default_jsr_depth(rep.base()));
    let report = spectral::spectrum_report(rep)?;
    let mut violations: Vec<AppError> = Vec::new();
    if !report.dominant_unique {
        violations.push(
            Error::Hypothesis {
                kind: HypothesisKind::NonUniqueDominant,
                detail: format!("several eigenvalues of B have modulus {}", report.rho),
            }
            .into(),
        );
    }
    let (holder, jsr) = match spectral::holder_bound(rep, depth) {
        Ok(h) => {
            let jsr = h.jsr.clone();
            let v = json!({
                "alpha_lower": num_json(h.alpha_lower),
                "alpha_upper": num_json(h.alpha_upper),
                "rho": num_json(h.rho),
            });
            (v, jsr)
        }
        Err(e @ Error::Hypothesis { .. }) => {
            if !matches!(&e, Error::Hypothesis { kind: HypothesisKind::NonUniqueDominant, .. })
                || report.dominant_unique
            {
                violations.push(e.into());
            }
            (Value::Null, spectral::jsr_bounds(rep.digit_matrices(), depth)?)
        }
        Err(e) => return Err(e.into()),
    };
    let spectrum = json!({
        "eigenvalues": report
            .eigenvalues
            .iter()
            .map(|z| json!({"re": num_json(z.re), "im": num_json(z.im)}))
            .collect::<Vec<_>>(),
        "rho": num_json(report.rho),
        "dominant_unique": report.dominant_unique,
        "subdominant_modulus": num_json(report.subdominant_modulus),
        "positivity_power": report.positivity_power,
        "notes": report.notes,
    });
    let primitivity = json!({
        "primitive": report.primitivity.primitive,
        "nonnegativity": report.primitivity.nonnegativity.label(),
        "reasons": report.primitivity.reasons,
    });
    let body = json!({
        "name": rep.name(),
        "k": rep.base(),
        "dim": rep.dim(),
        "spectrum": spectrum,
        "primitivity": primitivity,
        "jsr": jsr_json(&jsr),
        "holder": holder,
        "hypotheses": violations.iter().map(violation_json).collect::<Vec<_>>(),
    });
    let mut outcome = Outcome::new(Body::Json(body));
    outcome.violation = violations.into_iter().next();
    Ok(outcome)
}

fn measure_table(rep: &LinearRepresentation, level: u32) -> Result<Table, AppError> {
    let k = rep.base() as u64;
    let points = k
        .checked_pow(level)
        .and_then(|p| p.checked_mul(k - 1))
        .unwrap_or(u64::MAX);
    check_count("support size k^n (k - 1)", points, 1 << 20)?;
    let mu = measure::approximant(rep, level)?;
    let mut header = vec!["m".to_string(), "x".to_string()];
    header.extend(component_names("mu", rep.dim()));
    let mut t = Table::new(header);
    let first = &mu.components[0];
    for m in 0..first.len() {
        let mut row = vec![m.to_string(), format_rational(&first.point(m))];
        row.extend(mu.components.iter().map(|c| format_rational(&c.weights[m])));
        t.push(row);
    }
    Ok(t)
}

struct CdfArgs<'a> {
    level: Option<u32>,
    closed_form: bool,
    depth: u32,
    grid: u64,
    half_open: bool,
    route: Route,
    jordan: Option<&'a PathBuf>,
    tol: f64,
}

fn cdf(rep: &LinearRepresentation, a: CdfArgs<'_>) -> Result<Outcome, AppError> {
    if a.grid == 0 {
        return Err(AppError::Usage("--grid must be positive".into()));
    }
    check_count("grid", a.grid, 1 << 20)?;
    let level = match (a.level, a.closed_form) {
        (None, false) => Some(14),
        (l, _) => l,
    };
    if let Some(n) = level {
        check_count("level", n as u64, 4096)?;
    }
    let conv = if a.half_open { Interval::HalfOpen } else { Interval::Closed };
    let closed = if a.closed_form {
        let jordan = match a.jordan {
            Some(path) => Some(repfile::read_jordan(path, rep.dim())?),
            None => None,
        };
        let cf = ClosedForm::build(rep, a.route, a.depth, a.tol, jordan)?;
        cf.ell()?;
        Some(cf)
    } else {
        None
    };
    let g = a.grid;
    let rows: Vec<(f64, Option<f64>, Option<f64>)> = (0..=g)
        .into_par_iter()
        .map(|j| -> Result<_, AppError> {
            let x = frac(j as i64, g as i64);
            let emp = match level {
                Some(n) => Some(to_f64(&measure::empirical_cdf_selected(rep, n, &x, conv)?)),
                None => None,
            };
            let cl = match &closed {
                Some(cf) => Some(cf.cdf(to_f64(&x))?),
                None => None,
            };
            Ok((to_f64(&x), emp, cl))
        })
        .collect::<Result<_, _>>()?;
    let mut header = vec!["x".to_string()];
    if let Some(n) = level {
        header.push(format!("empirical_n{n}"));
    }
    if closed.is_some() {
        header.push(format!("closed_form_d{}", a.depth));
    }
    let mut t = Table::new(header);
    let mut dev: f64 = 0.0;
    for (x, emp, cl) in &rows {
        let mut row = vec![num(*x)];
        row.extend(emp.map(num));
        row.extend(cl.map(num));
        if let (Some(e), Some(c)) = (emp, cl) {
            dev = dev.max((e - c).abs());
        }
        t.push(row);
    }
    let mut outcome = Outcome::new(Body::Table(t));
    if level.is_some() && closed.is_some() {
        outcome.notes.push(format!("max_deviation,{}", num(dev)));
    }
    Ok(outcome)
}

fn fourier(
    rep: &LinearRepresentation,
    t_from: i64,
    t_to: i64,
    level: u32,
    truncation: u32,
) -> Result<Outcome, AppError> {
    if t_to < t_from {
        return Err(AppError::Usage("--t-to is below --t-from".into()));
    }
    check_count("t range", (t_to - t_from) as u64 + 1, 4096)?;
    let k = rep.base() as u64;
    let points = k.checked_pow(level).map_or(u64::MAX, |p| p * (k - 1));
    check_count("support size k^n (k - 1)", points, 1 << 22)?;
    let mu = measure::approximant(rep, level)?;
    // Per t: (empirical re, im, product re, im) for each component.
    type Row = (f64, f64, f64, f64);
    let per_t: Vec<(i64, Vec<Row>)> = (t_from..=t_to)
        .into_par_iter()
        .map(|t| -> Result<_, AppError> {
            let prod = measure::fourier_product(rep, t as f64, truncation)?;
            let rows = mu
                .components
                .iter()
                .zip(&prod.values)
                .map(|(c, p)| {
                    let e = measure::fourier_empirical(c, t);
                    (e.re, e.im, p.re, p.im)
                })
                .collect();
            Ok((t, rows))
        })
        .collect::<Result<_, _>>()?;
    let mut table = Table::new([
        "t",
        "component",
        "empirical_re",
        "empirical_im",
        "product_re",
        "product_im",
    ]);
    let mut spread: f64 = 0.0;
    for (t, rows) in &per_t {
        for (i, (er, ei, pr, pi)) in rows.iter().enumerate() {
            table.push(vec![t.to_string(), (i + 1).to_string(), num(*er), num(*ei), num(*pr), num(*pi)]);
            let (r0, i0) = (rows[0].2, rows[0].3);
            spread = spread.max((pr - r0).hypot(pi - i0));
        }
    }
    let mut outcome = Outcome::new(Body::Table(table));
    if spread > measure::UNIQUENESS_TOL {
        outcome.notes.push(format!(
            "note: product components differ by up to {}; the limit may not be a rank-one projector",
            num(spread)
        ));
    }
    Ok(outcome)
}

fn scan(rep: &LinearRepresentation, interval: &[String], from: u32, levels: u32) -> Result<Table, AppError> {
    let [a, b] = interval else {
        return Err(AppError::Usage("--interval takes two endpoints".into()));
    };
    let a = exact_arg(a, "interval endpoint")?;
    let b = exact_arg(b, "interval endpoint")?;
    if from > levels {
        return Err(AppError::Usage("--from is above --levels".into()));
    }
    check_count("levels", levels as u64, 1 << 20)?;
    let series = measure::scan_interval(rep, &a, &b, from, levels)?;
    let mut t = Table::new(["n", "mass"]);
    for p in &series.points {
        let mass = p
            .mass
            .as_ref()
            .map_or_else(|| "undefined".to_string(), |m| format_rational(&m.reduced()));
        t.push(vec![p.level.to_string(), mass]);
    }
    Ok(t)
}

fn rep_body(rep: &LinearRepresentation) -> Body {
    Body::Text(repfile::rep_to_json(rep))
}

pub fn execute(cli: &Cli) -> Result<Outcome, AppError> {
    Ok(match &cli.command {
        Command::Eval { source, from, to, .. } => Outcome::new(Body::Table(eval(&load(source)?, *from, *to)?)),
        Command::Sums { source, levels, .. } => Outcome::new(Body::Table(sums_table(&load(source)?, *levels)?)),
        Command::Diagnose { source, jsr_depth, .. } => diagnose(&load(source)?, *jsr_depth)?,
        Command::Measure { source, level, .. } => Outcome::new(Body::Table(measure_table(&load(source)?, *level)?)),
        Command::Cdf {
            source,
            level,
            closed_form,
            depth,
            grid,
            half_open,
            route,
            jordan,
            tol,
            ..
        } => cdf(
            &load(source)?,
            CdfArgs {
                level: *level,
                closed_form: *closed_form,
                depth: *depth,
                grid: *grid,
                half_open: *half_open,
                route: (*route).into(),
                jordan: jordan.as_ref(),
                tol: *tol,
            },
        )?,
        Command::Fourier {
            source,
            t_from,
            t_to,
            level,
            truncation,
            ..
        } => fourier(&load(source)?, *t_from, *t_to, *level, *truncation)?,
        Command::Scan {
            source,
            interval,
            levels,
            from,
            ..
        } => Outcome::new(Body::Table(scan(&load(source)?, interval, *from, *levels)?)),
        Command::Lift { source, power, .. } => {
            let rep = load(source)?;
            let mut outcome = Outcome::new(rep_body(&rep.lift_base(*power)?));
            if rep.digit_matrix(0).mul_vec(rep.terminal()) != rep.terminal() {
                outcome
                    .notes
                    .push("warning: B_0 w != w, so the lifted representation need not reproduce f".into());
            }
            outcome
        }
        Command::Conjugate { source, matrix, .. } => {
            let t = parse_matrix(matrix)?;
            Outcome::new(rep_body(&load(source)?.conjugate(&t)?))
        }
        Command::Builtin { list, emit, .. } => match (list, emit) {
            (_, Some(name)) => Outcome::new(rep_body(&regmeas_core::builtin(name)?)),
            (true, None) => {
                let mut t = Table::new(["name"]);
                for name in BUILTIN_NAMES {
                    t.push(vec![name.to_string()]);
                }
                Outcome::new(Body::Table(t))
            }
            (false, None) => return Err(AppError::Usage("builtin needs --list or --emit NAME".into())),
        },
    })
}

fn destination(cli: &Cli) -> (Option<&PathBuf>, Format) {
    match &cli.command {
        Command::Eval { output, .. }
        | Command::Sums { output, .. }
        | Command::Diagnose { output, .. }
        | Command::Measure { output, .. }
        | Command::Cdf { output, .. }
        | Command::Fourier { output, .. }
        | Command::Scan { output, .. } => (output.output.as_ref(), output.format),
        Command::Lift { output, .. } | Command::Conjugate { output, .. } | Command::Builtin { output, .. } => {
            (output.as_ref(), Format::Csv)
        }
    }
}

/// Write the body to `--output` or `out`.
pub fn emit(cli: &Cli, outcome: &Outcome, out: &mut dyn Write) -> Result<(), AppError> {
    let (path, format) = destination(cli);
    let mut buf = Vec::new();
    match &outcome.body {
        Body::Table(t) => t.write(format, &mut buf)?,
        Body::Json(v) => write_json(v, &mut buf)?,
        Body::Text(s) => buf.extend_from_slice(s.as_bytes()),
    }
    match path {
        Some(p) => std::fs::write(p, &buf)?,
        None => out.write_all(&buf)?,
    }
    Ok(())
}
