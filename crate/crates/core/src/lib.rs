//! Monotone wide-stencil finite differences for the normalized infinity
//! Laplacian and the game-theoretic p-Laplacian on rectangles, with explicit
//! and semi-implicit iterative solvers.

pub mod error;
pub mod grid;
pub mod io;
pub mod operators;
pub mod poisson;
pub mod problem;
pub mod reference;
pub mod solvers;
pub mod stencil;

pub use error::{Error, Result};
pub use grid::{max_norm_diff, BoundaryData, Bounds, Grid2D, GridFunction};
pub use operators::{
    infinity_laplacian, laplacian_5pt, p_laplacian, residual, standard_fd_infinity_laplacian,
    OperatorEval,
};
pub use poisson::PoissonSolver;
pub use problem::{Exponent, Problem};
pub use reference::{exact_solution, fit_rate, parse_field, ExactSolution, RateFit};
pub use solvers::{solve, Method, SolveReport, SolverConfig, Termination};
pub use stencil::{arms_at, BoundaryRule, Stencil};
