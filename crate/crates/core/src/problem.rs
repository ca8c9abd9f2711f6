use std::fmt;

use crate::error::{Error, Result};
use crate::grid::{BoundaryData, Grid2D, GridFunction};
use crate::stencil::Stencil;

/// Exponent `p` of the game-theoretic p-Laplacian, restricted to `[2, inf]`
/// where `Δ_p = α Δ + β Δ∞` with `α = 1/p`, `β = (p - 2)/p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(f64);

impl Exponent {
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 2.0 {
            return Err(Error::ExponentOutOfRange(p));
        }
        Ok(Self(p))
    }

    /// Inverse of [`Exponent::alpha`]; `alpha = 0` gives `p = inf`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&alpha) {
            return Err(Error::ExponentOutOfRange(1.0 / alpha));
        }
        if alpha == 0.0 {
            Ok(Self::INFINITY)
        } else {
            Self::new(1.0 / alpha)
        }
    }

    pub fn p(&self) -> f64 {
        self.0
    }

    pub fn alpha(&self) -> f64 {
        if self.0.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    pub fn beta(&self) -> f64 {
        if self.0.is_infinite() {
            1.0
        } else {
            (self.0 - 2.0) / self.0
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Dirichlet problem `Δ_p u = g` in the grid interior, `u = data` on the edge.
#[derive(Debug, Clone)]
pub struct Problem {
    pub grid: Grid2D,
    pub stencil: Stencil,
    pub exponent: Exponent,
    pub rhs: GridFunction,
    pub boundary: BoundaryData,
}

impl Problem {
    /// Homogeneous problem (`g = 0`).
    pub fn new(grid: Grid2D, stencil: Stencil, exponent: Exponent, boundary: BoundaryData) -> Self {
        Self {
            grid,
            stencil,
            exponent,
            rhs: GridFunction::zeros(grid),
            boundary,
        }
    }

    pub fn with_rhs(mut self, rhs: GridFunction) -> Result<Self> {
        self.rhs.ensure_compatible(&rhs)?;
        self.rhs = rhs;
        Ok(self)
    }

    pub fn with_exponent(mut self, exponent: Exponent) -> Self {
        self.exponent = exponent;
        self
    }
}
