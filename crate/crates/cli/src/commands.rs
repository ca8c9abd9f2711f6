//! Subcommand implementations. Every command writes CSV files into the
//! configured output directory and returns an exit status.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use plap::io::{field_to_string, report_to_string};
use plap::operators::{infinity_laplacian_at, StandardDifferences};
use plap::reference::{
    circle_correction, exact_solution, fit_rate, parse_field, sphere_consistency_oracle,
    stated_correction, Quadratic, Smooth2D,
};
use plap::solvers::{contraction_rate_model, explicit_solve_with, semi_implicit_solve_with};
use plap::{
    solve, BoundaryData, Exponent, Grid2D, GridFunction, Method, Problem, SolveReport,
    SolverConfig, Stencil, Termination,
};
use rayon::prelude::*;

use crate::config::{Command, ExperimentConfig};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Converged,
    MaxIterations,
    Diverged,
    Failure,
    ConfigError,
}

impl Status {
    pub fn code(&self) -> i32 {
        match self {
            Status::Converged => 0,
            Status::Failure => 1,
            Status::ConfigError => 2,
            Status::Diverged => 3,
            Status::MaxIterations => 4,
        }
    }

    fn from_termination(t: Termination) -> Self {
        match t {
            Termination::Converged => Status::Converged,
            Termination::MaxIterations => Status::MaxIterations,
            Termination::Diverged => Status::Diverged,
        }
    }
}

pub fn execute(config: &ExperimentConfig) -> Result<Status, CliError> {
    std::fs::create_dir_all(&config.output).map_err(|e| CliError::Io {
        path: config.output.clone(),
        source: e,
    })?;
    match config.command {
        Command::Solve => run_solve(config),
        Command::Sweep => run_sweep(config),
        Command::Consistency => run_consistency(config),
        Command::FailureDemo => run_failure_demo(config),
        Command::ContractionModel => run_contraction_model(config),
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn out(config: &ExperimentConfig, stem: &str, suffix: &str) -> PathBuf {
    config.output.join(format!("{stem}_{suffix}.csv"))
}

/// File-name-safe version of a field spec.
fn tag(spec: &str) -> String {
    spec.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn grid(config: &ExperimentConfig, n: usize) -> Result<Grid2D, CliError> {
    Ok(Grid2D::new(config.bounds, n)?)
}

struct Job {
    method: Method,
    boundary: String,
    exact: Option<String>,
    stencil: usize,
    exponent: Exponent,
    n: usize,
}

impl Job {
    fn stem(&self, name: &str) -> String {
        format!(
            "{name}_{}_{}_s{}_p{}_n{}",
            self.method,
            tag(&self.boundary),
            self.stencil,
            self.exponent,
            self.n
        )
    }
}

fn build_problem(
    config: &ExperimentConfig,
    job: &Job,
) -> Result<(Problem, Option<GridFunction>), CliError> {
    let g = grid(config, job.n)?;
    let boundary = parse_field(&job.boundary)?;
    let rhs = parse_field(&config.rhs)?.sample(g)?;
    let problem = Problem::new(
        g,
        Stencil::from_points(job.stencil)?,
        job.exponent,
        boundary.boundary_data(),
    )
    .with_rhs(rhs)?;
    let exact = job
        .exact
        .as_deref()
        .map(|e| exact_solution(e).and_then(|e| e.sample(g)))
        .transpose()?;
    Ok((problem, exact))
}

fn solver_config(config: &ExperimentConfig, method: Method) -> SolverConfig {
    let mut c = SolverConfig::new(method)
        .tol(config.tol)
        .max_iters(config.max_iters);
    if let Some(rho) = config.rho {
        c = c.rho(rho);
    }
    c
}

fn run_job(config: &ExperimentConfig, job: &Job) -> Result<(GridFunction, SolveReport), CliError> {
    let (problem, exact) = build_problem(config, job)?;
    Ok(solve(
        &problem,
        &solver_config(config, job.method),
        exact.as_ref(),
    )?)
}

fn run_solve(config: &ExperimentConfig) -> Result<Status, CliError> {
    let job = Job {
        method: config.methods[0],
        boundary: config.boundary[0].clone(),
        exact: config.exact[0].clone(),
        stencil: config.stencils[0],
        exponent: config.exponents[0],
        n: config.n[0],
    };
    let (u, report) = run_job(config, &job)?;
    write_text(&out(config, &config.name, "field"), &field_to_string(&u))?;
    write_text(
        &out(config, &config.name, "report"),
        &report_to_string(&report),
    )?;
    println!(
        "{} p={} n={} stencil={}: {:?} after {} iterations, change {:.3e}{}",
        job.method,
        job.exponent,
        job.n,
        job.stencil,
        report.termination,
        report.iterations,
        report.final_delta().unwrap_or(0.0),
        report
            .final_error()
            .map(|e| format!(", error {e:.3e}"))
            .unwrap_or_default()
    );
    Ok(Status::from_termination(report.termination))
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub const SWEEP_COLUMNS: &str =
    "method,boundary,stencil,p,alpha,n,iterations,termination,final_delta,final_residual,final_error,mu";

fn run_sweep(config: &ExperimentConfig) -> Result<Status, CliError> {
    let mut jobs = Vec::new();
    for &method in &config.methods {
        for (boundary, exact) in config.boundary.iter().zip(&config.exact) {
            for &stencil in &config.stencils {
                for &exponent in &config.exponents {
                    for &n in &config.n {
                        jobs.push(Job {
                            method,
                            boundary: boundary.clone(),
                            exact: exact.clone(),
                            stencil,
                            exponent,
                            n,
                        });
                    }
                }
            }
        }
    }
    log::info!("sweep: {} solves", jobs.len());
    let results: Vec<Result<SolveReport, CliError>> = jobs
        .par_iter()
        .map(|job| {
            let (u, report) = run_job(config, job)?;
            let stem = job.stem(&config.name);
            if config.write_fields {
                write_text(&out(config, &stem, "field"), &field_to_string(&u))?;
            }
            write_text(&out(config, &stem, "report"), &report_to_string(&report))?;
            Ok(report)
        })
        .collect();

    let mut summary = format!("{SWEEP_COLUMNS}\n");
    let mut status = Status::Converged;
    for (job, result) in jobs.iter().zip(results) {
        let report = result?;
        status = status.max(Status::from_termination(report.termination));
        let mu = fit_rate(&report, job.exponent.alpha()).ok().map(|f| f.mu);
        let _ = writeln!(
            summary,
            "{},{},{},{},{},{},{},{:?},{},{},{},{}",
            job.method,
            job.boundary.replace(',', ";"),
            job.stencil,
            job.exponent,
            job.exponent.alpha(),
            job.n,
            report.iterations,
            report.termination,
            opt(report.final_delta()),
            opt(report.residual.last().copied()),
            opt(report.final_error()),
            opt(mu)
        );
        println!(
            "{} {} s{} p={} n={}: {:?} after {} iterations{}",
            job.method,
            job.boundary,
            job.stencil,
            job.exponent,
            job.n,
            report.termination,
            report.iterations,
            mu.map(|m| format!(", mu = {m:.4}")).unwrap_or_default()
        );
    }
    write_text(&out(config, &config.name, "summary"), &summary)?;
    Ok(status)
}

/// `x + xy`, the field used by the consistency study.
const STUDY_FIELD: Quadratic = Quadratic {
    linear: [1.0, 0.0],
    hessian: [[0.0, 1.0], [1.0, 0.0]],
};

fn run_consistency(config: &ExperimentConfig) -> Result<Status, CliError> {
    let u = |x: f64, y: f64| STUDY_FIELD.value(x, y);
    let data = BoundaryData::new(u);
    let mut table = String::from("stencil,n,h,x,y,value,exact,error\n");
    for &points in &config.stencils {
        let stencil = Stencil::from_points(points)?;
        for &n in &config.n {
            let g = grid(config, n)?;
            let (i, j) = g.nearest_node(config.point.0, config.point.1);
            if !g.is_interior(i, j) {
                return Err(CliError::config(
                    "point",
                    format!("no interior node near the point for n = {n}"),
                ));
            }
            let (x, y) = g.coords(i, j);
            let f = GridFunction::sample(g, u)?;
            let value = infinity_laplacian_at(&f, &stencil, &data, i, j)?.value;
            let exact = STUDY_FIELD.infinity_laplacian(x, y);
            let _ = writeln!(
                table,
                "{points},{n},{},{x},{y},{value},{exact},{}",
                g.h(),
                (value - exact).abs()
            );
        }
    }
    write_text(&out(config, &config.name, "operator"), &table)?;

    let (ox, oy) = config.oracle_point;
    let stated = stated_correction(&STUDY_FIELD, ox, oy);
    let circle = circle_correction(&STUDY_FIELD, ox, oy);
    let mut oracle =
        String::from("eps,value,correction_estimate,stated_correction,circle_correction\n");
    for &eps in &config.eps {
        let est = sphere_consistency_oracle(&STUDY_FIELD, (ox, oy), eps, config.samples)?;
        let _ = writeln!(
            oracle,
            "{eps},{},{},{stated},{circle}",
            est.value, est.correction_estimate
        );
    }
    write_text(&out(config, &config.name, "oracle"), &oracle)?;
    print!("{table}{oracle}");
    Ok(Status::Converged)
}

fn run_failure_demo(config: &ExperimentConfig) -> Result<Status, CliError> {
    let n = config.n[0];
    let g = grid(config, n)?;
    let boundary = parse_field(&config.boundary[0])?;
    let rhs = parse_field(&config.rhs)?.sample(g)?;
    let problem = Problem::new(
        g,
        Stencil::new(1)?,
        Exponent::INFINITY,
        boundary.boundary_data(),
    )
    .with_rhs(rhs)?;
    let h_reg = config.h_reg.unwrap_or(g.h());
    let scheme = StandardDifferences { h_reg };
    let method = config.methods[0];
    let solver = solver_config(config, method);
    let (u, report) = match method {
        Method::Explicit => explicit_solve_with(&problem, &scheme, &solver, None)?,
        Method::SemiImplicit => semi_implicit_solve_with(&problem, &scheme, &solver, None)?,
    };
    write_text(&out(config, &config.name, "field"), &field_to_string(&u))?;
    write_text(
        &out(config, &config.name, "report"),
        &report_to_string(&report),
    )?;

    let b = config.bounds;
    let (cx, cy) = ((b.xmin + b.xmax) / 2.0, (b.ymin + b.ymax) / 2.0);
    let quarter = (b.xmax - b.xmin) / 4.0;
    let cone = exact_solution("cone_diff")?;
    let aronsson = exact_solution("aronsson")?;
    let (mut d_cone, mut d_aronsson) = (0.0f64, 0.0f64);
    for (i, j) in g.interior_nodes() {
        let (x, y) = g.coords(i, j);
        if (x - cx).abs() <= quarter && (y - cy).abs() <= quarter {
            d_cone = d_cone.max((u.at(i, j) - cone.eval(x, y)).abs());
            d_aronsson = d_aronsson.max((u.at(i, j) - aronsson.eval(x, y)).abs());
        }
    }
    let mut summary = String::from("quantity,value\n");
    let _ = writeln!(summary, "n,{n}");
    let _ = writeln!(summary, "h_reg,{h_reg}");
    let _ = writeln!(summary, "method,{method}");
    let _ = writeln!(summary, "iterations,{}", report.iterations);
    let _ = writeln!(summary, "termination,{:?}", report.termination);
    let _ = writeln!(summary, "distance_to_cone_diff,{d_cone}");
    let _ = writeln!(summary, "distance_to_aronsson,{d_aronsson}");
    write_text(&out(config, &config.name, "summary"), &summary)?;
    print!("{summary}");
    Ok(Status::from_termination(report.termination))
}

fn run_contraction_model(config: &ExperimentConfig) -> Result<Status, CliError> {
    let mut table = String::from("n,rate,gap\n");
    for &n in &config.n {
        let rate = contraction_rate_model(n)?;
        let _ = writeln!(table, "{n},{rate},{}", 1.0 - rate);
    }
    write_text(&out(config, &config.name, "rates"), &table)?;
    print!("{table}");
    Ok(Status::Converged)
}
