//! Iterative solvers for `α Δ^h u + β Δ∞^h u = g`.
//!
//! Both methods start from the discrete `p = 2` solution (`Δ^h u0 = 2 g`) and
//! stop once the max-norm change between successive iterates drops to `tol`.
//! Residual histories record the residual of the iterate entering each step.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{max_norm_diff, Grid2D, GridFunction};
use crate::operators::{laplacian_5pt_into, residual, InfinityScheme, WideStencil};
use crate::poisson::PoissonSolver;
use crate::problem::{Exponent, Problem};
use crate::stencil::Stencil;

/// The semi-implicit iteration is abandoned once the successive change grows
/// to this multiple of its smallest value so far.
pub const DIVERGENCE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Explicit,
    SemiImplicit,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Explicit => "explicit",
            Method::SemiImplicit => "semi-implicit",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit" => Ok(Method::Explicit),
            "semi-implicit" | "semi_implicit" | "semiimplicit" => Ok(Method::SemiImplicit),
            other => Err(Error::InvalidConfig(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    /// Stop once `max |u^{k+1} - u^k| <= tol`.
    pub tol: f64,
    pub max_iters: usize,
    /// Explicit step; defaults to [`cfl_step`].
    pub rho_override: Option<f64>,
}

impl SolverConfig {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            tol: 1e-6,
            max_iters: 1000,
            rho_override: None,
        }
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn rho(mut self, rho: f64) -> Self {
        self.rho_override = Some(rho);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if let Some(rho) = self.rho_override {
            if !(rho > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "rho must be positive, got {rho}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxIterations,
    /// Divergence guard tripped or the iterate stopped being finite.
    Diverged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub method: Method,
    pub iterations: usize,
    /// `max |u^{k} - u^{k-1}|` for `k = 1..=iterations`.
    pub delta: Vec<f64>,
    /// Residual max-norm of the iterate entering step `k`.
    pub residual: Vec<f64>,
    /// Max interior error of `u^k` against a supplied exact solution.
    pub error: Option<Vec<f64>>,
    /// Error of the initial iterate, when an exact solution was supplied.
    pub initial_error: Option<f64>,
    pub termination: Termination,
}

impl SolveReport {
    fn new(method: Method, track_error: bool) -> Self {
        Self {
            method,
            iterations: 0,
            delta: Vec::new(),
            residual: Vec::new(),
            error: track_error.then(Vec::new),
            initial_error: None,
            termination: Termination::MaxIterations,
        }
    }

    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    pub fn final_delta(&self) -> Option<f64> {
        self.delta.last().copied()
    }

    pub fn final_error(&self) -> Option<f64> {
        self.error.as_ref().and_then(|e| e.last().copied())
    }

    /// Error after `k` iterations (`k = 0` is the initial iterate).
    pub fn error_at(&self, k: usize) -> Option<f64> {
        if k == 0 {
            self.initial_error
        } else {
            self.error.as_ref().and_then(|e| e.get(k - 1).copied())
        }
    }
}

/// Largest explicit step keeping the update monotone:
/// `1 / (4α/h² + 2β/h_min²)` with `h_min` the shortest arm.
pub fn cfl_step(p: Exponent, stencil: &Stencil, grid: &Grid2D) -> f64 {
    let h = grid.h();
    let h_min = stencil.min_norm() * h;
    1.0 / (4.0 * p.alpha() / (h * h) + 2.0 * p.beta() / (h_min * h_min))
}

fn explicit_step_bound(problem: &Problem, scheme: &dyn InfinityScheme) -> f64 {
    let h = problem.grid.h();
    1.0 / (4.0 * problem.exponent.alpha() / (h * h)
        + problem.exponent.beta() * scheme.center_weight_bound(h))
}

/// Discrete `p = 2` solution used to start both iterations.
pub fn initial_iterate(problem: &Problem, poisson: &PoissonSolver) -> Result<GridFunction> {
    let mut f = problem.rhs.clone();
    f.values_mut().iter_mut().for_each(|v| *v *= -2.0);
    poisson.solve(&f, &problem.boundary)
}

/// Forward-Euler fixed point `u ← u + ρ (Δ_p^h u − g)` with the wide-stencil
/// scheme.
pub fn explicit_solve(
    problem: &Problem,
    config: &SolverConfig,
    exact: Option<&GridFunction>,
) -> Result<(GridFunction, SolveReport)> {
    let scheme = WideStencil {
        stencil: &problem.stencil,
        boundary: &problem.boundary,
    };
    explicit_solve_with(problem, &scheme, config, exact)
}

pub fn explicit_solve_with(
    problem: &Problem,
    scheme: &dyn InfinityScheme,
    config: &SolverConfig,
    exact: Option<&GridFunction>,
) -> Result<(GridFunction, SolveReport)> {
    config.validate()?;
    let grid = problem.grid;
    let bound = explicit_step_bound(problem, scheme);
    let rho = config.rho_override.unwrap_or(bound);
    if rho > bound * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { rho, bound });
    }
    let poisson = PoissonSolver::prepare(grid)?;
    let mut u = initial_iterate(problem, &poisson)?;
    let (alpha, beta) = (problem.exponent.alpha(), problem.exponent.beta());

    let mut report = SolveReport::new(Method::Explicit, exact.is_some());
    if let Some(e) = exact {
        report.initial_error = Some(max_norm_diff(&u, e, true)?);
    }
    let mut inf = GridFunction::zeros(grid);
    let mut lap = GridFunction::zeros(grid);
    for _ in 0..config.max_iters {
        if beta != 0.0 {
            scheme.apply_into(&u, &mut inf);
        }
        if alpha != 0.0 {
            laplacian_5pt_into(&u, &mut lap);
        }
        let mut worst: f64 = 0.0;
        for (i, j) in grid.interior_nodes() {
            let k = grid.index(i, j);
            let r = alpha * lap.values()[k] + beta * inf.values()[k] - problem.rhs.values()[k];
            worst = worst.max(r.abs());
            u.values_mut()[k] += rho * r;
        }
        let delta = rho * worst;
        record(&mut report, delta, worst, &u, exact)?;
        if !delta.is_finite() {
            report.termination = Termination::Diverged;
            break;
        }
        if delta <= config.tol {
            report.termination = Termination::Converged;
            break;
        }
    }
    log::info!(
        "explicit solve on {grid}: {:?} after {} iterations (rho = {rho:e})",
        report.termination,
        report.iterations
    );
    Ok((u, report))
}

/// Semi-implicit iteration: solve `-Δ^h u^{k+1} = β (2 Δ∞^h u^k − Δ^h u^k) − 2g`
/// with `β = 1 − 2/p`. Fixed points satisfy `α Δ^h u + β Δ∞^h u = g`.
pub fn semi_implicit_solve(
    problem: &Problem,
    config: &SolverConfig,
    exact: Option<&GridFunction>,
) -> Result<(GridFunction, SolveReport)> {
    let scheme = WideStencil {
        stencil: &problem.stencil,
        boundary: &problem.boundary,
    };
    semi_implicit_solve_with(problem, &scheme, config, exact)
}

pub fn semi_implicit_solve_with(
    problem: &Problem,
    scheme: &dyn InfinityScheme,
    config: &SolverConfig,
    exact: Option<&GridFunction>,
) -> Result<(GridFunction, SolveReport)> {
    config.validate()?;
    let grid = problem.grid;
    let poisson = PoissonSolver::prepare(grid)?;
    let mut u = initial_iterate(problem, &poisson)?;
    let (alpha, beta) = (problem.exponent.alpha(), problem.exponent.beta());

    let mut report = SolveReport::new(Method::SemiImplicit, exact.is_some());
    if let Some(e) = exact {
        report.initial_error = Some(max_norm_diff(&u, e, true)?);
    }
    let mut inf = GridFunction::zeros(grid);
    let mut lap = GridFunction::zeros(grid);
    let mut rhs = GridFunction::zeros(grid);
    let mut smallest = f64::INFINITY;
    for _ in 0..config.max_iters {
        if beta != 0.0 {
            scheme.apply_into(&u, &mut inf);
        }
        laplacian_5pt_into(&u, &mut lap);
        let mut worst: f64 = 0.0;
        for (i, j) in grid.interior_nodes() {
            let k = grid.index(i, j);
            let (a, l, g) = (inf.values()[k], lap.values()[k], problem.rhs.values()[k]);
            worst = worst.max((alpha * l + beta * a - g).abs());
            rhs.values_mut()[k] = beta * (2.0 * a - l) - 2.0 * g;
        }
        let mut next = u.clone();
        poisson.solve_in_place(&rhs, &mut next)?;
        let delta = max_norm_diff(&next, &u, true)?;
        u = next;
        record(&mut report, delta, worst, &u, exact)?;
        if !delta.is_finite() {
            report.termination = Termination::Diverged;
            break;
        }
        if delta <= config.tol {
            report.termination = Termination::Converged;
            break;
        }
        smallest = smallest.min(delta);
        if delta > DIVERGENCE_FACTOR * smallest {
            log::warn!(
                "semi-implicit iteration diverging: change {delta:e} vs minimum {smallest:e}"
            );
            report.termination = Termination::Diverged;
            break;
        }
    }
    log::info!(
        "semi-implicit solve on {grid}: {:?} after {} iterations",
        report.termination,
        report.iterations
    );
    Ok((u, report))
}

pub fn solve(
    problem: &Problem,
    config: &SolverConfig,
    exact: Option<&GridFunction>,
) -> Result<(GridFunction, SolveReport)> {
    match config.method {
        Method::Explicit => explicit_solve(problem, config, exact),
        Method::SemiImplicit => semi_implicit_solve(problem, config, exact),
    }
}

fn record(
    report: &mut SolveReport,
    delta: f64,
    residual: f64,
    u: &GridFunction,
    exact: Option<&GridFunction>,
) -> Result<()> {
    report.iterations += 1;
    report.delta.push(delta);
    report.residual.push(residual);
    if let (Some(errors), Some(e)) = (report.error.as_mut(), exact) {
        errors.push(max_norm_diff(u, e, true)?);
    }
    Ok(())
}

/// Max-norm residual `|Δ_p^h u − g|` over interior nodes.
pub fn fixed_point_check(u: &GridFunction, problem: &Problem) -> Result<f64> {
    Ok(residual(u, problem)?.interior_max_abs())
}

/// Contraction factor of the linear model `(M + N)^{-1}(M − N)` with `M`, `N`
/// the 1D Dirichlet second differences in x and y on an `n`-node grid:
/// `max_{i,j} |μ_i − μ_j| / (μ_i + μ_j)`.
pub fn contraction_rate_model(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::TooFewNodes(n));
    }
    // h cancels in the ratio; the extremes come from the smallest and largest
    // eigenvalues.
    let cells = (n - 1) as f64;
    let mu = |k: usize| 2.0 - 2.0 * (k as f64 * PI / cells).cos();
    let (lo, hi) = (mu(1), mu(n - 2));
    Ok((hi - lo) / (hi + lo))
}
