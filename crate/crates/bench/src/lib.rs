//! Shared fixtures for the benchmarks.

use plap::{exact_solution, Bounds, Exponent, Grid2D, GridFunction, Problem, Stencil};

pub fn square(n: usize) -> Grid2D {
    Grid2D::new(Bounds::square(-1.0, 1.0), n).expect("valid grid")
}

/// Aronsson boundary data on `[-1, 1]^2`.
pub fn aronsson_problem(n: usize, p: Exponent, level: usize) -> Problem {
    let a = exact_solution("aronsson").expect("registered");
    Problem::new(
        square(n),
        Stencil::new(level).expect("valid level"),
        p,
        a.boundary_data(),
    )
}

/// A rough field to feed the operators.
pub fn test_field(n: usize) -> GridFunction {
    GridFunction::sample(square(n), |x, y| (3.0 * x).sin() * (2.0 * y).cos() + x * y)
        .expect("finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures() {
        assert_eq!(test_field(9).grid().n(), 9);
        assert_eq!(aronsson_problem(9, Exponent::INFINITY, 3).stencil.len(), 16);
    }
}
