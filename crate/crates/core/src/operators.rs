//! Discrete operators on interior nodes. All operators return Δ-type values
//! (no sign flip) and leave boundary entries of their output at zero.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{BoundaryData, Grid2D, GridFunction};
use crate::problem::{Exponent, Problem};
use crate::stencil::{self, BoundaryRule, Direction, Stencil};

/// Value of the wide-stencil Δ∞ at one node together with the arms that
/// attained the max and the min.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorEval {
    pub value: f64,
    /// Direction index of the maximizing arm.
    pub max_arm: usize,
    /// Direction index of the minimizing arm.
    pub min_arm: usize,
}

/// Per-direction data for arms that land on grid nodes.
struct FastArms {
    offsets: Vec<isize>,
    inv_len2: Vec<f64>,
    reach: usize,
}

impl FastArms {
    fn new(grid: &Grid2D, stencil: &Stencil) -> Self {
        let n = grid.n() as isize;
        let h = grid.h();
        let offsets = stencil
            .directions()
            .iter()
            .map(|d| d.dy as isize * n + d.dx as isize)
            .collect();
        let inv_len2 = stencil
            .directions()
            .iter()
            .map(|d| 1.0 / (d.norm() * h).powi(2))
            .collect();
        Self {
            offsets,
            inv_len2,
            reach: stencil.reach(),
        }
    }

    #[inline]
    fn covers(&self, n: usize, i: usize, j: usize) -> bool {
        let r = self.reach;
        i >= r && j >= r && i + r < n && j + r < n
    }

    #[inline]
    fn eval(&self, u: &[f64], k: usize) -> OperatorEval {
        let center = u[k];
        let mut best = (f64::NEG_INFINITY, 0);
        let mut worst = (f64::INFINITY, 0);
        for (a, (&off, &w)) in self.offsets.iter().zip(&self.inv_len2).enumerate() {
            let q = (u[(k as isize + off) as usize] - center) * w;
            if q > best.0 {
                best = (q, a);
            }
            if q < worst.0 {
                worst = (q, a);
            }
        }
        OperatorEval {
            value: best.0 + worst.0,
            max_arm: best.1,
            min_arm: worst.1,
        }
    }
}

fn eval_near_boundary(
    u: &GridFunction,
    stencil: &Stencil,
    data: &BoundaryData,
    i: usize,
    j: usize,
) -> OperatorEval {
    let grid = u.grid();
    let center = u.at(i, j);
    let symmetric = stencil.boundary_rule() == BoundaryRule::SymmetricPairs;
    let mut best = (f64::NEG_INFINITY, 0);
    let mut worst = (f64::INFINITY, 0);
    for (a, d) in stencil.directions().iter().enumerate() {
        if symmetric
            && !(stencil::lands_on_grid(grid, i, j, *d)
                && stencil::lands_on_grid(grid, i, j, Direction::new(-d.dx, -d.dy)))
        {
            continue;
        }
        let arm = stencil::arm(grid, i, j, a, *d);
        let q = (arm.endpoint_value(u, data) - center) / (arm.length * arm.length);
        if q > best.0 {
            best = (q, a);
        }
        if q < worst.0 {
            worst = (q, a);
        }
    }
    OperatorEval {
        value: best.0 + worst.0,
        max_arm: best.1,
        min_arm: worst.1,
    }
}

/// Wide-stencil Δ∞ at a single interior node. Ties go to the lowest
/// direction index.
pub fn infinity_laplacian_at(
    u: &GridFunction,
    stencil: &Stencil,
    data: &BoundaryData,
    i: usize,
    j: usize,
) -> Result<OperatorEval> {
    let grid = u.grid();
    if !grid.is_interior(i, j) {
        return Err(Error::NotInterior { i, j });
    }
    Ok(eval_near_boundary(u, stencil, data, i, j))
}

/// Wide-stencil Δ∞ written into `out` at every interior node.
pub fn infinity_laplacian_into(
    u: &GridFunction,
    stencil: &Stencil,
    data: &BoundaryData,
    out: &mut GridFunction,
) {
    let grid = *u.grid();
    debug_assert_eq!(out.grid(), &grid);
    let n = grid.n();
    let fast = FastArms::new(&grid, stencil);
    let values = u.values();
    out.values_mut()
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(j, row)| {
            if j == 0 || j == n - 1 {
                row.fill(0.0);
                return;
            }
            row[0] = 0.0;
            row[n - 1] = 0.0;
            for i in 1..n - 1 {
                row[i] = if fast.covers(n, i, j) {
                    fast.eval(values, j * n + i).value
                } else {
                    eval_near_boundary(u, stencil, data, i, j).value
                };
            }
        });
}

pub fn infinity_laplacian(
    u: &GridFunction,
    stencil: &Stencil,
    data: &BoundaryData,
) -> GridFunction {
    let mut out = GridFunction::zeros(*u.grid());
    infinity_laplacian_into(u, stencil, data, &mut out);
    out
}

/// Five-point Laplacian. Neighbors on the edge are read from `u`'s own
/// boundary nodes.
pub fn laplacian_5pt_into(u: &GridFunction, out: &mut GridFunction) {
    let grid = *u.grid();
    let n = grid.n();
    let inv_h2 = 1.0 / (grid.h() * grid.h());
    let v = u.values();
    out.values_mut()
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(j, row)| {
            if j == 0 || j == n - 1 {
                row.fill(0.0);
                return;
            }
            row[0] = 0.0;
            row[n - 1] = 0.0;
            for i in 1..n - 1 {
                let k = j * n + i;
                row[i] = (v[k + 1] + v[k - 1] + v[k + n] + v[k - n] - 4.0 * v[k]) * inv_h2;
            }
        });
}

pub fn laplacian_5pt(u: &GridFunction) -> GridFunction {
    let mut out = GridFunction::zeros(*u.grid());
    laplacian_5pt_into(u, &mut out);
    out
}

/// `Δ_p^h = α Δ^h + β Δ∞^h`. Terms with a zero weight are skipped, so
/// `p = 2` and `p = inf` reproduce the pure operators exactly.
pub fn p_laplacian(
    u: &GridFunction,
    stencil: &Stencil,
    p: Exponent,
    data: &BoundaryData,
) -> GridFunction {
    let (alpha, beta) = (p.alpha(), p.beta());
    let mut out = GridFunction::zeros(*u.grid());
    if beta == 0.0 {
        laplacian_5pt_into(u, &mut out);
        out.values_mut().iter_mut().for_each(|v| *v *= alpha);
        return out;
    }
    infinity_laplacian_into(u, stencil, data, &mut out);
    if alpha == 0.0 {
        if beta != 1.0 {
            out.values_mut().iter_mut().for_each(|v| *v *= beta);
        }
        return out;
    }
    let lap = laplacian_5pt(u);
    for (o, l) in out.values_mut().iter_mut().zip(lap.values()) {
        *o = alpha * l + beta * *o;
    }
    out
}

/// Centered-difference Δ∞ with the gradient norm regularized to
/// `max(h_reg^2, |∇u|^2)`. Consistent but not monotone.
pub fn standard_fd_infinity_laplacian_into(u: &GridFunction, h_reg: f64, out: &mut GridFunction) {
    let grid = *u.grid();
    let n = grid.n();
    let h = grid.h();
    let (inv_2h, inv_h2, inv_4h2) = (0.5 / h, 1.0 / (h * h), 0.25 / (h * h));
    let reg = h_reg * h_reg;
    let v = u.values();
    out.values_mut()
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(j, row)| {
            if j == 0 || j == n - 1 {
                row.fill(0.0);
                return;
            }
            row[0] = 0.0;
            row[n - 1] = 0.0;
            for i in 1..n - 1 {
                let k = j * n + i;
                let (e, w, nn, s) = (v[k + 1], v[k - 1], v[k + n], v[k - n]);
                let c = v[k];
                let ux = (e - w) * inv_2h;
                let uy = (nn - s) * inv_2h;
                let uxx = (e - 2.0 * c + w) * inv_h2;
                let uyy = (nn - 2.0 * c + s) * inv_h2;
                let uxy = ((v[k + n + 1] + v[k - n - 1]) - (v[k + n - 1] + v[k - n + 1])) * inv_4h2;
                let num = ux * ux * uxx + 2.0 * ux * uy * uxy + uy * uy * uyy;
                row[i] = num / reg.max(ux * ux + uy * uy);
            }
        });
}

pub fn standard_fd_infinity_laplacian(u: &GridFunction, h_reg: f64) -> GridFunction {
    let mut out = GridFunction::zeros(*u.grid());
    standard_fd_infinity_laplacian_into(u, h_reg, &mut out);
    out
}

/// Boundary nodes further than this from the Dirichlet data trigger a warning.
const BOUNDARY_MISMATCH_WARN: f64 = 1e-8;

/// `Δ_p^h u - g` on interior nodes.
pub fn residual(u: &GridFunction, problem: &Problem) -> Result<GridFunction> {
    u.ensure_compatible(&problem.rhs)?;
    let grid = u.grid();
    let mismatch = grid
        .boundary_nodes()
        .map(|(i, j)| {
            let (x, y) = grid.coords(i, j);
            (u.at(i, j) - problem.boundary.eval(x, y)).abs()
        })
        .fold(0.0, f64::max);
    if mismatch > BOUNDARY_MISMATCH_WARN {
        log::warn!("boundary values differ from the Dirichlet data by {mismatch:e}");
    }
    let mut r = p_laplacian(u, &problem.stencil, problem.exponent, &problem.boundary);
    for (i, j) in grid.interior_nodes() {
        r[(i, j)] -= problem.rhs.at(i, j);
    }
    Ok(r)
}

/// A discretization of Δ∞ that the solvers can iterate on.
pub trait InfinityScheme: Sync {
    fn apply_into(&self, u: &GridFunction, out: &mut GridFunction);

    /// Upper bound on the coefficient of `u(x)` in the scheme at `x`; its
    /// inverse is the largest stable explicit step.
    fn center_weight_bound(&self, h: f64) -> f64;
}

/// The monotone wide-stencil scheme.
#[derive(Debug, Clone)]
pub struct WideStencil<'a> {
    pub stencil: &'a Stencil,
    pub boundary: &'a BoundaryData,
}

impl InfinityScheme for WideStencil<'_> {
    fn apply_into(&self, u: &GridFunction, out: &mut GridFunction) {
        infinity_laplacian_into(u, self.stencil, self.boundary, out);
    }

    fn center_weight_bound(&self, h: f64) -> f64 {
        // Shortest arm is an axis arm of length h; truncation never makes an
        // arm shorter than that.
        2.0 / (self.stencil.min_norm() * h).powi(2)
    }
}

/// Standard centered differences with gradient regularization `h_reg`.
#[derive(Debug, Clone, Copy)]
pub struct StandardDifferences {
    pub h_reg: f64,
}

impl InfinityScheme for StandardDifferences {
    fn apply_into(&self, u: &GridFunction, out: &mut GridFunction) {
        standard_fd_infinity_laplacian_into(u, self.h_reg, out);
    }

    fn center_weight_bound(&self, h: f64) -> f64 {
        2.0 / (h * h)
    }
}
