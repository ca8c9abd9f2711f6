//! Closed-form test solutions, a brute-force circle oracle for Δ∞ and
//! exponential rate fitting for convergence histories.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{BoundaryData, Grid2D, GridFunction};
use crate::problem::Exponent;
use crate::solvers::SolveReport;

/// Gradients smaller than this are treated as vanishing.
pub const GRADIENT_FLOOR: f64 = 1e-8;
pub const MIN_CIRCLE_SAMPLES: usize = 10_000;
pub const DEFAULT_CIRCLE_SAMPLES: usize = 100_000;

/// A function with known first and second derivatives.
pub trait Smooth2D {
    fn value(&self, x: f64, y: f64) -> f64;
    fn gradient(&self, x: f64, y: f64) -> [f64; 2];
    fn hessian(&self, x: f64, y: f64) -> [[f64; 2]; 2];

    /// `p̂ᵀ Q p̂` for `p = ∇u`, `Q = D²u`. Undefined (NaN) where `∇u = 0`.
    fn infinity_laplacian(&self, x: f64, y: f64) -> f64 {
        let (g, q) = (self.gradient(x, y), self.hessian(x, y));
        let (pn, _) = frame(g);
        quad(q, pn, pn)
    }

    fn laplacian(&self, x: f64, y: f64) -> f64 {
        let q = self.hessian(x, y);
        q[0][0] + q[1][1]
    }

    /// `Δ₁ u = Δu − Δ∞u = p̂⊥ᵀ Q p̂⊥`.
    fn one_laplacian(&self, x: f64, y: f64) -> f64 {
        let (g, q) = (self.gradient(x, y), self.hessian(x, y));
        let (_, perp) = frame(g);
        quad(q, perp, perp)
    }
}

/// Unit gradient direction and its counter-clockwise normal.
fn frame(g: [f64; 2]) -> ([f64; 2], [f64; 2]) {
    let r = g[0].hypot(g[1]);
    let p = [g[0] / r, g[1] / r];
    (p, [-p[1], p[0]])
}

fn quad(q: [[f64; 2]; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * (q[0][0] * b[0] + q[0][1] * b[1]) + a[1] * (q[1][0] * b[0] + q[1][1] * b[1])
}

/// `pᵀx + ½ xᵀQx` about the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    pub linear: [f64; 2],
    pub hessian: [[f64; 2]; 2],
}

impl Smooth2D for Quadratic {
    fn value(&self, x: f64, y: f64) -> f64 {
        let q = self.hessian;
        self.linear[0] * x
            + self.linear[1] * y
            + 0.5 * (q[0][0] * x * x + 2.0 * q[0][1] * x * y + q[1][1] * y * y)
    }

    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        let q = self.hessian;
        [
            self.linear[0] + q[0][0] * x + q[0][1] * y,
            self.linear[1] + q[1][0] * x + q[1][1] * y,
        ]
    }

    fn hessian(&self, _: f64, _: f64) -> [[f64; 2]; 2] {
        self.hessian
    }
}

/// Lateral drift `c = −(p̂⊥ᵀ Q p̂)/|p|` of the extremal circle points away
/// from `±p̂`.
pub fn drift_coefficient<U: Smooth2D + ?Sized>(u: &U, x: f64, y: f64) -> f64 {
    let (g, q) = (u.gradient(x, y), u.hessian(x, y));
    let (pn, perp) = frame(g);
    -quad(q, perp, pn) / g[0].hypot(g[1])
}

/// `c² Δ₁u`, the second-order correction as stated for the circle average.
pub fn stated_correction<U: Smooth2D + ?Sized>(u: &U, x: f64, y: f64) -> f64 {
    drift_coefficient(u, x, y).powi(2) * u.one_laplacian(x, y)
}

/// `c² (Δ₁u − Δ∞u)`, the second-order term of `min + max` over the circle
/// for quadratics. Agrees with [`stated_correction`] where `Δ∞u = 0`.
pub fn circle_correction<U: Smooth2D + ?Sized>(u: &U, x: f64, y: f64) -> f64 {
    drift_coefficient(u, x, y).powi(2) * (u.one_laplacian(x, y) - u.infinity_laplacian(x, y))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleEstimate {
    /// `min + max` of `(u(y) − u(x))/ε²` over the sampled circle.
    pub value: f64,
    /// `(value − Δ∞u(x))/ε²`.
    pub correction_estimate: f64,
}

/// Samples `m` equally spaced points on the circle of radius `eps` about
/// `(x, y)` and returns `min + max` of the normalized differences.
pub fn sphere_consistency_oracle<U: Smooth2D + ?Sized>(
    u: &U,
    (x, y): (f64, f64),
    eps: f64,
    m: usize,
) -> Result<CircleEstimate> {
    if m < MIN_CIRCLE_SAMPLES {
        return Err(Error::TooFewSamples(m));
    }
    let g = u.gradient(x, y);
    let gn = g[0].hypot(g[1]);
    if gn < GRADIENT_FLOOR {
        return Err(Error::VanishingGradient(gn));
    }
    let center = u.value(x, y);
    let scale = 1.0 / (eps * eps);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..m {
        let theta = 2.0 * PI * k as f64 / m as f64;
        let q = (u.value(x + eps * theta.cos(), y + eps * theta.sin()) - center) * scale;
        lo = lo.min(q);
        hi = hi.max(q);
    }
    let value = lo + hi;
    Ok(CircleEstimate {
        value,
        correction_estimate: (value - u.infinity_laplacian(x, y)) * scale,
    })
}

/// Named closed-form fields used as exact solutions and boundary data.
#[derive(Clone, Copy)]
pub struct ExactSolution {
    pub name: &'static str,
    value: fn(f64, f64) -> f64,
    gradient: fn(f64, f64) -> [f64; 2],
    hessian: fn(f64, f64) -> [[f64; 2]; 2],
}

impl std::fmt::Debug for ExactSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExactSolution")
            .field("name", &self.name)
            .finish()
    }
}

pub const EXACT_SOLUTION_NAMES: [&str; 4] = ["harmonic_saddle", "aronsson", "cone_diff", "affine"];

fn pow43(t: f64) -> f64 {
    t.abs().powf(4.0 / 3.0)
}

/// Derivative of `|t|^{4/3}`.
fn dpow43(t: f64) -> f64 {
    4.0 / 3.0 * t.signum() * t.abs().cbrt()
}

/// Second derivative of `|t|^{4/3}`; infinite at 0.
fn ddpow43(t: f64) -> f64 {
    4.0 / 9.0 / t.abs().cbrt().powi(2)
}

const HARMONIC_SADDLE: ExactSolution = ExactSolution {
    name: "harmonic_saddle",
    value: |x, y| x * x - y * y,
    gradient: |x, y| [2.0 * x, -2.0 * y],
    hessian: |_, _| [[2.0, 0.0], [0.0, -2.0]],
};

const ARONSSON: ExactSolution = ExactSolution {
    name: "aronsson",
    value: |x, y| pow43(x) - pow43(y),
    gradient: |x, y| [dpow43(x), -dpow43(y)],
    hessian: |x, y| [[ddpow43(x), 0.0], [0.0, -ddpow43(y)]],
};

const CONE_DIFF: ExactSolution = ExactSolution {
    name: "cone_diff",
    value: |x, y| x.abs() - y.abs(),
    gradient: |x, y| [x.signum(), -y.signum()],
    hessian: |_, _| [[0.0, 0.0], [0.0, 0.0]],
};

const AFFINE: ExactSolution = ExactSolution {
    name: "affine",
    value: |x, y| 3.0 * x + 2.0 * y,
    gradient: |_, _| [3.0, 2.0],
    hessian: |_, _| [[0.0, 0.0], [0.0, 0.0]],
};

/// Looks up `harmonic_saddle` (`x² − y²`), `aronsson` (`|x|^{4/3} − |y|^{4/3}`),
/// `cone_diff` (`|x| − |y|`) or `affine` (`3x + 2y`).
pub fn exact_solution(name: &str) -> Result<ExactSolution> {
    match name {
        "harmonic_saddle" => Ok(HARMONIC_SADDLE),
        "aronsson" => Ok(ARONSSON),
        "cone_diff" => Ok(CONE_DIFF),
        "affine" => Ok(AFFINE),
        other => Err(Error::UnknownSolution(other.to_string())),
    }
}

impl ExactSolution {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.value)(x, y)
    }

    pub fn sample(&self, grid: Grid2D) -> Result<GridFunction> {
        GridFunction::sample(grid, self.value)
    }

    pub fn boundary_data(&self) -> BoundaryData {
        BoundaryData::new(self.value)
    }

    /// Right-hand side `g = α Δu + β Δ∞u` this field solves for exponent `p`,
    /// taken as 0 where the gradient vanishes or derivatives blow up.
    pub fn rhs(&self, p: Exponent) -> impl Fn(f64, f64) -> f64 + '_ {
        let (alpha, beta) = (p.alpha(), p.beta());
        move |x, y| {
            let lap = if alpha == 0.0 {
                0.0
            } else {
                alpha * self.laplacian(x, y)
            };
            let g = self.gradient(x, y);
            let inf = if beta == 0.0 || g[0].hypot(g[1]) < GRADIENT_FLOOR {
                0.0
            } else {
                beta * self.infinity_laplacian(x, y)
            };
            let v = lap + inf;
            if v.is_finite() {
                v
            } else {
                0.0
            }
        }
    }
}

impl Smooth2D for ExactSolution {
    fn value(&self, x: f64, y: f64) -> f64 {
        (self.value)(x, y)
    }

    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        (self.gradient)(x, y)
    }

    fn hessian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        (self.hessian)(x, y)
    }
}

/// A named scalar field `(x, y) -> value` used for boundary data and
/// right-hand sides.
#[derive(Clone)]
pub struct NamedField {
    pub spec: String,
    f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for NamedField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NamedField")
            .field("spec", &self.spec)
            .finish()
    }
}

impl NamedField {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.f)(x, y)
    }

    pub fn boundary_data(&self) -> BoundaryData {
        let f = Arc::clone(&self.f);
        BoundaryData::new(move |x, y| f(x, y))
    }

    pub fn sample(&self, grid: Grid2D) -> Result<GridFunction> {
        GridFunction::sample(grid, |x, y| self.eval(x, y))
    }
}

/// Parses `name` or `name:key=value,...`. Besides the exact solutions:
/// `zero`, `const:c=<v>`, and `cone_plus_linear:c=<v>` for
/// `|x| − |y| + c (3x + 2y)/√14`.
pub fn parse_field(spec: &str) -> Result<NamedField> {
    let spec = spec.trim();
    let (name, params) = match spec.split_once(':') {
        Some((n, p)) => (n.trim(), p),
        None => (spec, ""),
    };
    let mut c = None;
    for kv in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value in '{spec}', got '{kv}'")))?;
        match k.trim() {
            "c" => {
                c = Some(
                    v.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad value for c in '{spec}': {e}")))?,
                )
            }
            other => {
                return Err(Error::Parse(format!(
                    "unknown parameter '{other}' in '{spec}'"
                )))
            }
        }
    }
    let f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync> = match name {
        "zero" => Arc::new(|_, _| 0.0),
        "const" => {
            let c = c.ok_or_else(|| Error::Parse(format!("'{spec}' needs c=<value>")))?;
            Arc::new(move |_, _| c)
        }
        "cone_plus_linear" => {
            let c = c.unwrap_or(0.0);
            let scale = c / (SQRT_2 * 7f64.sqrt());
            Arc::new(move |x: f64, y: f64| x.abs() - y.abs() + scale * (3.0 * x + 2.0 * y))
        }
        other => {
            if c.is_some() {
                return Err(Error::Parse(format!("'{other}' takes no parameters")));
            }
            let e = exact_solution(other)?;
            Arc::new(move |x, y| e.eval(x, y))
        }
    };
    Ok(NamedField {
        spec: spec.to_string(),
        f,
    })
}

/// Exponential decay fit `error ≈ C · 10^{μ N}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub alpha: f64,
    pub mu: f64,
    pub intercept: f64,
    /// Root-mean-square deviation of `log10(error)` from the fitted line.
    pub rms_residual: f64,
    /// First and last iteration used.
    pub first: usize,
    pub last: usize,
}

/// Fits the error history of `report`, or its successive-change history when
/// no exact solution was tracked.
pub fn fit_rate(report: &SolveReport, alpha: f64) -> Result<RateFit> {
    fit_rate_sequence(report.error.as_deref().unwrap_or(&report.delta), alpha)
}

/// `history[k]` is the error after iteration `k + 1`. Iterations 1 and
/// everything after the history first drops below ten times its final floor
/// are excluded; at least five points must remain.
pub fn fit_rate_sequence(history: &[f64], alpha: f64) -> Result<RateFit> {
    let floor = history.iter().copied().fold(f64::INFINITY, f64::min);
    if !(floor > 0.0) || !floor.is_finite() {
        return Err(Error::NoExponentialRegime);
    }
    let cutoff = 10.0 * floor;
    let end = history
        .iter()
        .position(|&e| e < cutoff)
        .unwrap_or(history.len() - 1);
    if end < 1 {
        return Err(Error::NoExponentialRegime);
    }
    let points: Vec<(f64, f64)> = (1..=end)
        .map(|k| ((k + 1) as f64, history[k].log10()))
        .collect();
    if points.len() < 5 {
        return Err(Error::NoExponentialRegime);
    }
    let (mu, intercept) = fit_line(&points);
    let rms = (points
        .iter()
        .map(|(x, y)| (y - (mu * x + intercept)).powi(2))
        .sum::<f64>()
        / points.len() as f64)
        .sqrt();
    Ok(RateFit {
        alpha,
        mu,
        intercept,
        rms_residual: rms,
        first: 2,
        last: end + 1,
    })
}

/// Least-squares line `y = slope x + intercept`.
pub fn fit_line(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Bounds;
    use crate::operators::{infinity_laplacian, laplacian_5pt};
    use crate::stencil::Stencil;
    use approx::assert_relative_eq;

    fn quadratic(linear: [f64; 2], hessian: [[f64; 2]; 2]) -> Quadratic {
        Quadratic { linear, hessian }
    }

    #[test]
    fn registry() {
        for name in EXACT_SOLUTION_NAMES {
            assert_eq!(exact_solution(name).unwrap().name, name);
        }
        assert!(matches!(
            exact_solution("bogus"),
            Err(Error::UnknownSolution(_))
        ));
        assert_eq!(exact_solution("aronsson").unwrap().eval(1.0, 0.0), 1.0);
        assert_eq!(exact_solution("aronsson").unwrap().eval(0.0, -1.0), -1.0);
    }

    #[test]
    fn discrete_checks_on_registered_fields() {
        let g = Grid2D::new(Bounds::square(-1.0, 1.0), 21).unwrap();
        let saddle = exact_solution("harmonic_saddle")
            .unwrap()
            .sample(g)
            .unwrap();
        assert!(laplacian_5pt(&saddle).max_abs() < 1e-10);
        let affine = exact_solution("affine").unwrap();
        let v = infinity_laplacian(
            &affine.sample(g).unwrap(),
            &Stencil::new(3).unwrap(),
            &affine.boundary_data(),
        );
        assert!(v.max_abs() < 1e-10);
    }

    #[test]
    fn oracle_on_affine_is_zero() {
        let u = quadratic([0.3, -1.2], [[0.0; 2]; 2]);
        for eps in [0.5, 0.1, 0.01] {
            let est = sphere_consistency_oracle(&u, (0.2, 0.7), eps, 20_000).unwrap();
            assert!(est.value.abs() < 1e-9, "{}", est.value);
        }
    }

    #[test]
    fn oracle_x_plus_x_squared() {
        let u = quadratic([1.0, 0.0], [[2.0, 0.0], [0.0, 0.0]]);
        assert_eq!(drift_coefficient(&u, 0.0, 0.0), 0.0);
        let est = sphere_consistency_oracle(&u, (0.0, 0.0), 0.1, DEFAULT_CIRCLE_SAMPLES).unwrap();
        assert_relative_eq!(est.value, 2.0, epsilon = 1e-10);
        assert!(est.correction_estimate.abs() < 1e-7);
    }

    #[test]
    fn oracle_x_plus_xy_has_unit_drift() {
        let u = quadratic([1.0, 0.0], [[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(drift_coefficient(&u, 0.0, 0.0), -1.0);
        // Δ₁u = 0 here, so the correction vanishes identically
        assert_eq!(stated_correction(&u, 0.0, 0.0), 0.0);
        for eps in [0.2, 0.1, 0.05] {
            let est =
                sphere_consistency_oracle(&u, (0.0, 0.0), eps, DEFAULT_CIRCLE_SAMPLES).unwrap();
            assert!(
                est.correction_estimate.abs() < 1e-6,
                "{eps}: {}",
                est.correction_estimate
            );
        }
    }

    #[test]
    fn oracle_converges_to_correction() {
        // x + xy + y²/2: Δ∞ = 0, Δ₁ = 1, c = -1
        let u = quadratic([1.0, 0.0], [[0.0, 1.0], [1.0, 1.0]]);
        assert_eq!(stated_correction(&u, 0.0, 0.0), 1.0);
        let mut prev_gap = f64::INFINITY;
        for eps in [0.2, 0.1, 0.05] {
            let est =
                sphere_consistency_oracle(&u, (0.0, 0.0), eps, DEFAULT_CIRCLE_SAMPLES).unwrap();
            let gap = (est.correction_estimate - 1.0).abs();
            assert!(gap < prev_gap);
            prev_gap = gap;
        }
        assert!(prev_gap < 0.01);
    }

    #[test]
    fn circle_correction_includes_infinity_term() {
        // with Δ∞u = 1 ≠ 0 the estimate follows c²(Δ₁ − Δ∞), not c² Δ₁
        let u = quadratic([1.0, 0.0], [[1.0, 1.0], [1.0, 2.0]]);
        assert_eq!(stated_correction(&u, 0.0, 0.0), 2.0);
        assert_eq!(circle_correction(&u, 0.0, 0.0), 1.0);
        let est = sphere_consistency_oracle(&u, (0.0, 0.0), 0.02, DEFAULT_CIRCLE_SAMPLES).unwrap();
        assert_relative_eq!(est.correction_estimate, 1.0, max_relative = 0.01);
    }

    #[test]
    fn oracle_rejects_bad_input() {
        let flat = quadratic([0.0, 0.0], [[1.0, 0.0], [0.0, 1.0]]);
        assert!(matches!(
            sphere_consistency_oracle(&flat, (0.0, 0.0), 0.1, 20_000),
            Err(Error::VanishingGradient(_))
        ));
        let u = quadratic([1.0, 0.0], [[0.0; 2]; 2]);
        assert!(matches!(
            sphere_consistency_oracle(&u, (0.0, 0.0), 0.1, 100),
            Err(Error::TooFewSamples(100))
        ));
    }

    #[test]
    fn aronsson_is_infinity_harmonic_off_axes() {
        let a = exact_solution("aronsson").unwrap();
        for (x, y) in [(0.5, 0.3), (-0.7, 0.4), (0.2, -0.9)] {
            assert!(a.infinity_laplacian(x, y).abs() < 1e-12);
            let est = sphere_consistency_oracle(&a, (x, y), 0.05, DEFAULT_CIRCLE_SAMPLES).unwrap();
            assert!(est.value.abs() < 0.05, "({x},{y}): {}", est.value);
        }
        let saddle = exact_solution("harmonic_saddle").unwrap();
        let est =
            sphere_consistency_oracle(&saddle, (0.5, 0.2), 0.02, DEFAULT_CIRCLE_SAMPLES).unwrap();
        assert_relative_eq!(
            est.value,
            saddle.infinity_laplacian(0.5, 0.2),
            epsilon = 1e-2
        );
    }

    #[test]
    fn rhs_for_exponents() {
        let saddle = exact_solution("harmonic_saddle").unwrap();
        let g2 = saddle.rhs(Exponent::new(2.0).unwrap());
        assert_eq!(g2(0.3, 0.4), 0.0);
        let ginf = saddle.rhs(Exponent::INFINITY);
        assert_relative_eq!(ginf(1.0, 0.0), 2.0);
        assert_eq!(ginf(0.0, 0.0), 0.0);
        let aronsson = exact_solution("aronsson").unwrap();
        assert!(aronsson.rhs(Exponent::INFINITY)(0.3, 0.6).abs() < 1e-12);
    }

    #[test]
    fn field_specs() {
        let f = parse_field("cone_plus_linear:c=0.125").unwrap();
        let expect = 0.5 - 0.25 + 0.125 * (1.5 + 0.5) / 14f64.sqrt();
        assert_relative_eq!(f.eval(0.5, 0.25), expect, epsilon = 1e-15);
        assert_eq!(
            parse_field("cone_plus_linear").unwrap().eval(-0.5, 0.25),
            0.25
        );
        assert_eq!(parse_field("const:c=2").unwrap().eval(9.0, 9.0), 2.0);
        assert_eq!(parse_field("aronsson").unwrap().eval(1.0, 1.0), 0.0);
        assert!(parse_field("const").is_err());
        assert!(parse_field("aronsson:c=1").is_err());
        assert!(parse_field("cone_plus_linear:d=1").is_err());
        assert!(parse_field("nope").is_err());
    }

    #[test]
    fn synthetic_rate() {
        let history: Vec<f64> = (1..=30).map(|n| 10f64.powf(-0.5 * n as f64)).collect();
        let fit = fit_rate_sequence(&history, 0.25).unwrap();
        assert_relative_eq!(fit.mu, -0.5, epsilon = 1e-6);
        let scaled: Vec<f64> = history.iter().map(|e| 37.0 * e).collect();
        assert_relative_eq!(
            fit_rate_sequence(&scaled, 0.25).unwrap().mu,
            fit.mu,
            epsilon = 1e-9
        );
    }

    #[test]
    fn rate_fit_floor_cases() {
        // immediate convergence (p = 2)
        assert!(matches!(
            fit_rate_sequence(&[0.0], 0.5),
            Err(Error::NoExponentialRegime)
        ));
        assert!(matches!(
            fit_rate_sequence(&[1e-3, 1e-16, 1e-16], 0.5),
            Err(Error::NoExponentialRegime)
        ));
        // decay followed by a plateau: plateau excluded
        let mut h: Vec<f64> = (1..=20).map(|n| 10f64.powf(-0.2 * n as f64)).collect();
        h.extend(std::iter::repeat(1e-4).take(30));
        let fit = fit_rate_sequence(&h, 0.1).unwrap();
        assert_relative_eq!(fit.mu, -0.2, epsilon = 1e-9);
        assert!(fit.last <= 20);
    }

    #[test]
    fn line_fit() {
        let pts: Vec<(f64, f64)> = (0..10).map(|k| (k as f64, 3.0 - 0.87 * k as f64)).collect();
        let (s, b) = fit_line(&pts);
        assert_relative_eq!(s, -0.87, epsilon = 1e-12);
        assert_relative_eq!(b, 3.0, epsilon = 1e-12);
    }
}
