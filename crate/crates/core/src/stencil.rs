//! Symmetric wide stencils (5, 9 and 17 point) and their boundary-truncated
//! arms.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{BoundaryData, Grid2D, GridFunction};

/// Integer direction offsets, grouped so each level extends the previous one.
const AXES: [(i32, i32); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
const DIAGONALS: [(i32, i32); 4] = [(1, 1), (-1, 1), (-1, -1), (1, -1)];
const KNIGHTS: [(i32, i32); 8] = [
    (2, 1),
    (1, 2),
    (-1, 2),
    (-2, 1),
    (-2, -1),
    (-1, -2),
    (1, -2),
    (2, -1),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Direction {
    pub dx: i32,
    pub dy: i32,
}

impl Direction {
    pub const fn new(dx: i32, dy: i32) -> Self {
        Self { dx, dy }
    }

    /// Euclidean length in index units.
    #[inline]
    pub fn norm(&self) -> f64 {
        f64::from(self.dx).hypot(f64::from(self.dy))
    }

    pub fn unit(&self) -> (f64, f64) {
        let r = self.norm();
        (f64::from(self.dx) / r, f64::from(self.dy) / r)
    }

    pub fn angle(&self) -> f64 {
        f64::from(self.dy).atan2(f64::from(self.dx))
    }
}

/// How the operator treats directions whose arm would leave the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryRule {
    /// Drop the direction together with its opposite, so the arms in use stay
    /// symmetric with equal lengths and affine data is reproduced exactly.
    #[default]
    SymmetricPairs,
    /// Shorten the arm to its boundary crossing and read the Dirichlet data
    /// there. Still monotone, but the first-order terms of a shortened arm
    /// and its full-length opposite no longer cancel.
    Truncate,
}

/// A fixed set of grid directions closed under negation.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    level: usize,
    directions: Vec<Direction>,
    dtheta: f64,
    rule: BoundaryRule,
}

impl Stencil {
    /// Level 1, 2 and 3 give the 5, 9 and 17 point schemes.
    pub fn new(level: usize) -> Result<Self> {
        let groups: &[&[(i32, i32)]] = match level {
            1 => &[&AXES],
            2 => &[&AXES, &DIAGONALS],
            3 => &[&AXES, &DIAGONALS, &KNIGHTS],
            _ => return Err(Error::UnsupportedStencil(level)),
        };
        let directions: Vec<Direction> = groups
            .iter()
            .flat_map(|g| g.iter())
            .map(|&(dx, dy)| Direction::new(dx, dy))
            .collect();
        let dtheta = directional_resolution(&directions)?;
        Ok(Self {
            level,
            directions,
            dtheta,
            rule: BoundaryRule::default(),
        })
    }

    pub fn with_boundary_rule(mut self, rule: BoundaryRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn boundary_rule(&self) -> BoundaryRule {
        self.rule
    }

    /// Maps a point count (5, 9, 17) to its stencil.
    pub fn from_points(points: usize) -> Result<Self> {
        match points {
            5 => Self::new(1),
            9 => Self::new(2),
            17 => Self::new(3),
            other => Err(Error::InvalidConfig(format!(
                "stencil must have 5, 9 or 17 points, got {other}"
            ))),
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Number of grid points including the center.
    pub fn points(&self) -> usize {
        self.directions.len() + 1
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn dtheta(&self) -> f64 {
        self.dtheta
    }

    /// Longest direction in index units (1, sqrt 2, sqrt 5).
    pub fn max_norm(&self) -> f64 {
        self.directions
            .iter()
            .map(Direction::norm)
            .fold(0.0, f64::max)
    }

    pub fn min_norm(&self) -> f64 {
        self.directions
            .iter()
            .map(Direction::norm)
            .fold(f64::INFINITY, f64::min)
    }

    /// Spatial resolution on a grid of spacing `h`.
    pub fn h_max(&self, h: f64) -> f64 {
        self.max_norm() * h
    }

    /// How many nodes away from the edge an arm can reach.
    pub fn reach(&self) -> usize {
        self.directions
            .iter()
            .map(|d| d.dx.unsigned_abs().max(d.dy.unsigned_abs()))
            .max()
            .unwrap_or(0) as usize
    }
}

/// Worst-case chord distance from a unit vector to the nearest normalized
/// direction. The extremal vector bisects the widest angular gap, giving
/// `2 sin(gap / 4)`.
pub fn directional_resolution(directions: &[Direction]) -> Result<f64> {
    if directions.is_empty() {
        return Err(Error::EmptyStencil);
    }
    let mut angles: Vec<f64> = directions.iter().map(Direction::angle).collect();
    angles.sort_by(f64::total_cmp);
    let wrap = angles[0] + 2.0 * PI - angles[angles.len() - 1];
    let gap = angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
    Ok(2.0 * (gap / 4.0).sin())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    /// Arm ends on the grid node `(i, j)`.
    Node(usize, usize),
    /// Arm was cut short at a point on the domain boundary.
    Boundary { x: f64, y: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arm {
    pub direction: usize,
    /// Physical displacement from the center node to the endpoint.
    pub offset: (f64, f64),
    pub endpoint: Endpoint,
    pub length: f64,
}

impl Arm {
    pub fn is_truncated(&self) -> bool {
        matches!(self.endpoint, Endpoint::Boundary { .. })
    }

    /// Value of `u` at the arm's endpoint, reading Dirichlet data for
    /// truncated arms.
    #[inline]
    pub fn endpoint_value(&self, u: &GridFunction, data: &BoundaryData) -> f64 {
        match self.endpoint {
            Endpoint::Node(i, j) => u.at(i, j),
            Endpoint::Boundary { x, y } => data.eval(x, y),
        }
    }
}

pub type NodeArms = Vec<Arm>;

/// One arm per stencil direction at interior node `(i, j)`. Arms that would
/// leave the closed domain are shortened to their boundary crossing.
pub fn arms_at(grid: &Grid2D, stencil: &Stencil, i: usize, j: usize) -> Result<NodeArms> {
    if !grid.is_interior(i, j) {
        return Err(Error::NotInterior { i, j });
    }
    Ok(stencil
        .directions()
        .iter()
        .enumerate()
        .map(|(k, d)| arm(grid, i, j, k, *d))
        .collect())
}

/// Whether `(i, j) + d` is a grid node.
#[inline]
pub(crate) fn lands_on_grid(grid: &Grid2D, i: usize, j: usize, d: Direction) -> bool {
    let last = (grid.n() - 1) as i64;
    let ti = i as i64 + i64::from(d.dx);
    let tj = j as i64 + i64::from(d.dy);
    (0..=last).contains(&ti) && (0..=last).contains(&tj)
}

pub(crate) fn arm(grid: &Grid2D, i: usize, j: usize, direction: usize, d: Direction) -> Arm {
    let h = grid.h();
    let last = (grid.n() - 1) as i64;
    let ti = i as i64 + i64::from(d.dx);
    let tj = j as i64 + i64::from(d.dy);
    if lands_on_grid(grid, i, j, d) {
        return Arm {
            direction,
            offset: (f64::from(d.dx) * h, f64::from(d.dy) * h),
            endpoint: Endpoint::Node(ti as usize, tj as usize),
            length: d.norm() * h,
        };
    }
    // Largest t with node + t*d inside, measured in index units so the
    // crossing lands exactly on the edge line.
    let room = |pos: usize, step: i32| -> f64 {
        match step.signum() {
            1 => (last - pos as i64) as f64 / f64::from(step),
            -1 => pos as f64 / f64::from(-step),
            _ => f64::INFINITY,
        }
    };
    let t = room(i, d.dx).min(room(j, d.dy)).min(1.0);
    let bounds = grid.bounds();
    let (x0, y0) = grid.coords(i, j);
    let snap = |v: f64, lo: f64, hi: f64| v.clamp(lo, hi);
    let mut x = snap(x0 + t * f64::from(d.dx) * h, bounds.xmin, bounds.xmax);
    let mut y = snap(y0 + t * f64::from(d.dy) * h, bounds.ymin, bounds.ymax);
    // Put the endpoint exactly on whichever edge stopped it.
    if ti < 0 {
        x = bounds.xmin;
    } else if ti > last {
        x = bounds.xmax;
    }
    if tj < 0 {
        y = bounds.ymin;
    } else if tj > last {
        y = bounds.ymax;
    }
    Arm {
        direction,
        offset: (x - x0, y - y0),
        endpoint: Endpoint::Boundary { x, y },
        length: t * d.norm() * h,
    }
}
