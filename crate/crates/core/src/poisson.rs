//! Direct solver for the discrete Dirichlet problem `-Δ^h w = f` on the grid
//! interior, diagonalized by the type-I discrete sine transform.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{BoundaryData, Grid2D, GridFunction};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Refinement passes attempted before a solve is reported as failed.
const MAX_REFINEMENTS: usize = 3;

/// Working memory beyond which `prepare` refuses the grid.
const MAX_WORKSPACE_BYTES: usize = 8 << 30;

#[derive(Clone)]
pub struct PoissonSolver {
    grid: Grid2D,
    /// Interior nodes per side.
    m: usize,
    fft: Arc<dyn Fft<f64>>,
    /// `λ_k + λ_l` for every mode pair, row-major.
    denominators: Vec<f64>,
    tolerance: f64,
}

impl std::fmt::Debug for PoissonSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PoissonSolver")
            .field("grid", &self.grid)
            .field("tolerance", &self.tolerance)
            .finish_non_exhaustive()
    }
}

impl PoissonSolver {
    pub fn prepare(grid: Grid2D) -> Result<Self> {
        let m = grid.n() - 2;
        let bytes = m
            .checked_mul(2 * (m + 1))
            .and_then(|c| c.checked_mul(std::mem::size_of::<Complex<f64>>()))
            .filter(|&b| b <= MAX_WORKSPACE_BYTES)
            .ok_or(Error::GridTooLarge {
                nodes: grid.n(),
                bytes: m.saturating_mul(m).saturating_mul(32),
            })?;
        log::debug!("preparing sine-transform Poisson solver for {grid} ({bytes} bytes workspace)");
        let fft = FftPlanner::new().plan_fft_forward(2 * (m + 1));
        let h2 = grid.h() * grid.h();
        let eig: Vec<f64> = (1..=m)
            .map(|k| {
                let s = (k as f64 * PI / (2 * (m + 1)) as f64).sin();
                4.0 * s * s / h2
            })
            .collect();
        let denominators = eig
            .iter()
            .flat_map(|a| eig.iter().map(move |b| a + b))
            .collect();
        Ok(Self {
            grid,
            m,
            fft,
            denominators,
            tolerance: DEFAULT_TOLERANCE,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Solves `-Δ^h w = f` at interior nodes with `w = data` on the boundary.
    /// Only interior entries of `f` are read. The result satisfies
    /// `max |-Δ^h w - f| <= tol * (max |f| + 1)` or an error is returned.
    pub fn solve(&self, f: &GridFunction, data: &BoundaryData) -> Result<GridFunction> {
        let mut w = GridFunction::from_boundary(self.grid, data);
        self.solve_in_place(f, &mut w)?;
        Ok(w)
    }

    /// As [`solve`](Self::solve) but keeps the boundary values already in `w`.
    pub fn solve_in_place(&self, f: &GridFunction, w: &mut GridFunction) -> Result<()> {
        f.ensure_compatible(w)?;
        let n = self.grid.n();
        let m = self.m;
        let inv_h2 = 1.0 / (self.grid.h() * self.grid.h());
        let bound = self.tolerance * (f.interior_max_abs() + 1.0);

        // Interior right-hand side with the boundary values folded in.
        let mut rhs = vec![0.0; m * m];
        let wv = w.values();
        for j in 1..n - 1 {
            for i in 1..n - 1 {
                let mut b = f.at(i, j);
                if i == 1 {
                    b += wv[j * n] * inv_h2;
                }
                if i == n - 2 {
                    b += wv[j * n + n - 1] * inv_h2;
                }
                if j == 1 {
                    b += wv[i] * inv_h2;
                }
                if j == n - 2 {
                    b += wv[(n - 1) * n + i] * inv_h2;
                }
                rhs[(j - 1) * m + (i - 1)] = b;
            }
        }

        let mut interior = self.apply_inverse(&rhs);
        let mut residual = f64::INFINITY;
        for pass in 0..=MAX_REFINEMENTS {
            scatter(&interior, w, m);
            residual = self.residual_into(f, w, &mut rhs);
            if residual <= bound {
                if pass > 0 {
                    log::debug!("poisson solve needed {pass} refinement pass(es)");
                }
                return Ok(());
            }
            let correction = self.apply_inverse(&rhs);
            interior
                .iter_mut()
                .zip(&correction)
                .for_each(|(u, c)| *u += c);
        }
        Err(Error::PoissonNotConverged {
            residual,
            tolerance: bound,
        })
    }

    /// Writes `f + Δ^h w` (the residual of `-Δ^h w = f`) into `out` and
    /// returns its max norm.
    fn residual_into(&self, f: &GridFunction, w: &GridFunction, out: &mut [f64]) -> f64 {
        let n = self.grid.n();
        let m = self.m;
        let inv_h2 = 1.0 / (self.grid.h() * self.grid.h());
        let v = w.values();
        let fv = f.values();
        out.par_chunks_mut(m)
            .enumerate()
            .map(|(jj, row)| {
                let j = jj + 1;
                let mut worst: f64 = 0.0;
                for (ii, r) in row.iter_mut().enumerate() {
                    let k = j * n + ii + 1;
                    let lap = (v[k + 1] + v[k - 1] + v[k + n] + v[k - n] - 4.0 * v[k]) * inv_h2;
                    *r = fv[k] + lap;
                    worst = worst.max(r.abs());
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }

    /// `(-Δ^h)^{-1}` on interior values with zero boundary data.
    fn apply_inverse(&self, rhs: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut a = rhs.to_vec();
        self.dst_rows(&mut a);
        transpose(&mut a, m);
        self.dst_rows(&mut a);
        a.iter_mut()
            .zip(&self.denominators)
            .for_each(|(v, d)| *v /= d);
        self.dst_rows(&mut a);
        transpose(&mut a, m);
        self.dst_rows(&mut a);
        let scale = (2.0 / (m + 1) as f64).powi(2);
        a.iter_mut().for_each(|v| *v *= scale);
        a
    }

    /// Unnormalized DST-I of every length-`m` row:
    /// `X_k = Σ_j x_j sin(π j k / (m + 1))`, through an odd extension of
    /// length `2(m + 1)`.
    fn dst_rows(&self, data: &mut [f64]) {
        let m = self.m;
        let len = 2 * (m + 1);
        let fft = &self.fft;
        data.par_chunks_mut(m).for_each_init(
            || {
                (
                    vec![Complex::new(0.0, 0.0); len],
                    vec![Complex::new(0.0, 0.0); fft.get_inplace_scratch_len()],
                )
            },
            |(buf, scratch), row| {
                buf[0] = Complex::new(0.0, 0.0);
                buf[m + 1] = Complex::new(0.0, 0.0);
                for (j, &x) in row.iter().enumerate() {
                    buf[j + 1] = Complex::new(x, 0.0);
                    buf[len - 1 - j] = Complex::new(-x, 0.0);
                }
                fft.process_with_scratch(buf, scratch);
                for (k, x) in row.iter_mut().enumerate() {
                    *x = -0.5 * buf[k + 1].im;
                }
            },
        );
    }
}

fn scatter(interior: &[f64], w: &mut GridFunction, m: usize) {
    let n = m + 2;
    let values = w.values_mut();
    for (jj, row) in interior.chunks(m).enumerate() {
        let start = (jj + 1) * n + 1;
        values[start..start + m].copy_from_slice(row);
    }
}

fn transpose(a: &mut [f64], m: usize) {
    for r in 0..m {
        for c in r + 1..m {
            a.swap(r * m + c, c * m + r);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Bounds;
    use crate::operators::laplacian_5pt;
    use approx::assert_relative_eq;

    fn grid(n: usize) -> Grid2D {
        Grid2D::new(Bounds::square(-1.0, 1.0), n).unwrap()
    }

    fn sample(g: Grid2D, f: impl Fn(f64, f64) -> f64) -> GridFunction {
        GridFunction::sample(g, f).unwrap()
    }

    /// Dense Gaussian elimination on the interior system; an independent
    /// route to the same discrete solution.
    fn dense_solve(g: Grid2D, f: &GridFunction, data: &BoundaryData) -> GridFunction {
        let n = g.n();
        let m = n - 2;
        let size = m * m;
        let inv_h2 = 1.0 / (g.h() * g.h());
        let mut a = vec![vec![0.0; size + 1]; size];
        let w0 = GridFunction::from_boundary(g, data);
        for j in 1..n - 1 {
            for i in 1..n - 1 {
                let row = (j - 1) * m + (i - 1);
                a[row][row] = 4.0 * inv_h2;
                a[row][size] = f.at(i, j);
                for (ni, nj) in [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)] {
                    if g.is_boundary(ni, nj) {
                        a[row][size] += w0.at(ni, nj) * inv_h2;
                    } else {
                        a[row][(nj - 1) * m + (ni - 1)] = -inv_h2;
                    }
                }
            }
        }
        for col in 0..size {
            let pivot = (col..size)
                .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                .unwrap();
            a.swap(col, pivot);
            for row in 0..size {
                if row != col {
                    let factor = a[row][col] / a[col][col];
                    if factor != 0.0 {
                        for k in col..=size {
                            a[row][k] -= factor * a[col][k];
                        }
                    }
                }
            }
        }
        let mut w = w0;
        for j in 1..n - 1 {
            for i in 1..n - 1 {
                let row = (j - 1) * m + (i - 1);
                w[(i, j)] = a[row][size] / a[row][row];
            }
        }
        w
    }

    #[test]
    fn single_unknown() {
        let g = Grid2D::new(Bounds::square(0.0, 1.0), 3).unwrap();
        let solver = PoissonSolver::prepare(g).unwrap();
        let w = solver
            .solve(
                &GridFunction::constant(g, 1.0),
                &BoundaryData::new(|_, _| 2.0),
            )
            .unwrap();
        // 4 (w - 2) / h^2 = 1
        assert_relative_eq!(w.at(1, 1), 2.0 + 0.25 / 4.0, epsilon = 1e-14);
    }

    #[test]
    fn harmonic_affine_reproduced() {
        let g = grid(33);
        let f = |x: f64, y: f64| 3.0 * x + 2.0 * y - 1.0;
        let w = PoissonSolver::prepare(g)
            .unwrap()
            .solve(&GridFunction::zeros(g), &BoundaryData::new(f))
            .unwrap();
        assert!(crate::grid::max_norm_diff(&w, &sample(g, f), false).unwrap() < 1e-12);
    }

    #[test]
    fn quadratics_reproduced() {
        let g = grid(41);
        let solver = PoissonSolver::prepare(g).unwrap();
        let bowl = |x: f64, y: f64| x * x + y * y;
        let w = solver
            .solve(&GridFunction::constant(g, -4.0), &BoundaryData::new(bowl))
            .unwrap();
        assert!(crate::grid::max_norm_diff(&w, &sample(g, bowl), false).unwrap() < 1e-12);
        let saddle = |x: f64, y: f64| x * x - y * y;
        let w = solver
            .solve(&GridFunction::zeros(g), &BoundaryData::new(saddle))
            .unwrap();
        assert!(crate::grid::max_norm_diff(&w, &sample(g, saddle), false).unwrap() < 1e-12);
    }

    #[test]
    fn agrees_with_dense_elimination() {
        let g = grid(12);
        let f = sample(g, |x, y| (3.0 * x).sin() * y + x.abs());
        let data = BoundaryData::new(|x, y| x * y + (y - x).exp());
        let w = PoissonSolver::prepare(g).unwrap().solve(&f, &data).unwrap();
        let reference = dense_solve(g, &f, &data);
        assert!(crate::grid::max_norm_diff(&w, &reference, false).unwrap() < 1e-12);
    }

    #[test]
    fn residual_contract() {
        for n in [17, 64, 129, 257] {
            let g = grid(n);
            let f = sample(g, |x, y| 50.0 * (x * y).cos() - 30.0 * x.abs());
            let data = BoundaryData::new(|x, y| x.abs().powf(4.0 / 3.0) - y.abs().powf(4.0 / 3.0));
            let solver = PoissonSolver::prepare(g).unwrap();
            let w = solver.solve(&f, &data).unwrap();
            let lap = laplacian_5pt(&w);
            let r = g
                .interior_nodes()
                .map(|(i, j)| (lap.at(i, j) + f.at(i, j)).abs())
                .fold(0.0, f64::max);
            assert!(
                r <= solver.tolerance() * (f.interior_max_abs() + 1.0),
                "n = {n}: {r:e}"
            );
        }
    }

    #[test]
    fn deterministic_across_preparations() {
        let g = grid(65);
        let f = sample(g, |x, y| (x - y).sin());
        let data = BoundaryData::new(|x, _| x);
        let a = PoissonSolver::prepare(g).unwrap().solve(&f, &data).unwrap();
        let b = PoissonSolver::prepare(g).unwrap().solve(&f, &data).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn maximum_principle_and_linearity() {
        let g = grid(31);
        let solver = PoissonSolver::prepare(g).unwrap();
        let data = BoundaryData::new(|x, y| (4.0 * x).sin() + y * y * y);
        let w = solver.solve(&GridFunction::zeros(g), &data).unwrap();
        let edge: Vec<f64> = g.boundary_nodes().map(|(i, j)| w.at(i, j)).collect();
        let lo = edge.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = edge.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for (i, j) in g.interior_nodes() {
            assert!(w.at(i, j) >= lo - 1e-12 && w.at(i, j) <= hi + 1e-12);
        }

        let zero = BoundaryData::zero();
        let f1 = sample(g, |x, y| x * y);
        let f2 = sample(g, |x, y| (x + y).cos());
        let combo = sample(g, |x, y| 2.0 * x * y - 3.0 * (x + y).cos());
        let w1 = solver.solve(&f1, &zero).unwrap();
        let w2 = solver.solve(&f2, &zero).unwrap();
        let w12 = solver.solve(&combo, &zero).unwrap();
        for k in 0..g.len() {
            let expect = 2.0 * w1.values()[k] - 3.0 * w2.values()[k];
            assert!((w12.values()[k] - expect).abs() < 1e-12);
        }
    }
}
