//! Uniform square-celled Cartesian grids and the scalar fields that live on them.
//!
//! Values are stored row-major with rows indexed by the y-index: node `(i, j)`
//! (x-index `i`, y-index `j`) lives at `j * n + i` and sits at
//! `(xmin + i h, ymin + j h)`.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Relative slack allowed when checking that x and y spacings agree.
const SQUARE_CELL_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Bounds {
    pub const fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Self {
        Self {
            xmin,
            xmax,
            ymin,
            ymax,
        }
    }

    /// The square `[lo, hi]^2`.
    pub const fn square(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
    n: usize,
    h: f64,
}

impl Grid2D {
    /// Builds an `n x n` node grid over `bounds`. Cells must be square.
    pub fn new(bounds: Bounds, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewNodes(n));
        }
        let Bounds {
            xmin,
            xmax,
            ymin,
            ymax,
        } = bounds;
        for (min, max) in [(xmin, xmax), (ymin, ymax)] {
            if !(min.is_finite() && max.is_finite() && max > min) {
                return Err(Error::EmptyInterval { min, max });
            }
        }
        let cells = (n - 1) as f64;
        let hx = (xmax - xmin) / cells;
        let hy = (ymax - ymin) / cells;
        if (hx - hy).abs() > SQUARE_CELL_RTOL * hx.max(hy) {
            return Err(Error::NonSquareCells { hx, hy });
        }
        Ok(Self {
            xmin,
            xmax,
            ymin,
            ymax,
            n,
            h: hx,
        })
    }

    pub fn bounds(&self) -> Bounds {
        Bounds::new(self.xmin, self.xmax, self.ymin, self.ymax)
    }

    /// Nodes per side, boundary included.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn h(&self) -> f64 {
        self.h
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        j * self.n + i
    }

    #[inline]
    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x(i), self.y(j))
    }

    /// Node abscissa. Computed as a weighted sum of the endpoints so grids
    /// symmetric about zero have exactly mirrored coordinates.
    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        lerp(self.xmin, self.xmax, i, self.n - 1)
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        lerp(self.ymin, self.ymax, j, self.n - 1)
    }

    /// Index of the node closest to `(x, y)`, clamped to the grid.
    pub fn nearest_node(&self, x: f64, y: f64) -> (usize, usize) {
        let last = (self.n - 1) as f64;
        let i = ((x - self.xmin) / self.h).round().clamp(0.0, last);
        let j = ((y - self.ymin) / self.h).round().clamp(0.0, last);
        (i as usize, j as usize)
    }

    #[inline]
    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.n - 1 || j == self.n - 1
    }

    #[inline]
    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && !self.is_boundary(i, j)
    }

    pub fn interior_count(&self) -> usize {
        (self.n - 2) * (self.n - 2)
    }

    /// Interior nodes in storage order.
    pub fn interior_nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (1..n - 1).flat_map(move |j| (1..n - 1).map(move |i| (i, j)))
    }

    /// Boundary nodes in storage order.
    pub fn boundary_nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |j| (0..n).map(move |i| (i, j)))
            .filter(move |&(i, j)| self.is_boundary(i, j))
    }

    /// Whether `(x, y)` lies in the closed rectangle.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.xmin && x <= self.xmax && y >= self.ymin && y <= self.ymax
    }
}

impl fmt::Display for Grid2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]x[{}, {}] n={} h={}",
            self.xmin, self.xmax, self.ymin, self.ymax, self.n, self.h
        )
    }
}

#[inline]
fn lerp(lo: f64, hi: f64, k: usize, cells: usize) -> f64 {
    (lo * (cells - k) as f64 + hi * k as f64) / cells as f64
}

/// Dirichlet data: a function evaluable anywhere on the closed domain, since
/// truncated stencil arms land on the boundary between nodes.
#[derive(Clone)]
pub struct BoundaryData {
    f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl BoundaryData {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self { f: Arc::new(f) }
    }

    pub fn zero() -> Self {
        Self::new(|_, _| 0.0)
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.f)(x, y)
    }
}

impl fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BoundaryData(..)")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid2D,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(grid: Grid2D) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid2D, value: f64) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
        }
    }

    /// Wraps raw row-major values. Every value must be finite.
    pub fn from_values(grid: Grid2D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Parse(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                i: k % grid.n(),
                j: k / grid.n(),
                value: values[k],
            });
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every node.
    pub fn sample<F: Fn(f64, f64) -> f64>(grid: Grid2D, f: F) -> Result<Self> {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..n {
            for i in 0..n {
                let (x, y) = grid.coords(i, j);
                let value = f(x, y);
                if !value.is_finite() {
                    return Err(Error::NonFinite { i, j, value });
                }
                values.push(value);
            }
        }
        Ok(Self { grid, values })
    }

    /// Zero inside, `data` on the boundary nodes.
    pub fn from_boundary(grid: Grid2D, data: &BoundaryData) -> Self {
        let mut u = Self::zeros(grid);
        u.pin_boundary(data);
        u
    }

    /// Overwrites boundary nodes with the Dirichlet data.
    pub fn pin_boundary(&mut self, data: &BoundaryData) {
        let grid = self.grid;
        let n = grid.n();
        for k in 0..n {
            for (i, j) in [(k, 0), (k, n - 1), (0, k), (n - 1, k)] {
                let (x, y) = grid.coords(i, j);
                self.values[grid.index(i, j)] = data.eval(x, y);
            }
        }
    }

    #[inline]
    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn ensure_compatible(&self, other: &GridFunction) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::IncompatibleGrids)
        }
    }

    /// Largest absolute value over interior nodes.
    pub fn interior_max_abs(&self) -> f64 {
        self.grid
            .interior_nodes()
            .map(|(i, j)| self.at(i, j).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Index<(usize, usize)> for GridFunction {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.values[self.grid.index(i, j)]
    }
}

impl IndexMut<(usize, usize)> for GridFunction {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        let k = self.grid.index(i, j);
        &mut self.values[k]
    }
}

/// Max-norm distance between two fields on the same grid, optionally ignoring
/// boundary nodes.
pub fn max_norm_diff(a: &GridFunction, b: &GridFunction, interior_only: bool) -> Result<f64> {
    a.ensure_compatible(b)?;
    let grid = a.grid();
    let diff = if interior_only {
        grid.interior_nodes()
            .map(|(i, j)| (a.at(i, j) - b.at(i, j)).abs())
            .fold(0.0, f64::max)
    } else {
        a.values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    };
    Ok(diff)
}
