//! 1D grids and trapezoid quadrature.

use crate::{Error, Result};

/// How the grid points are spaced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    /// Equidistant points.
    Uniform,
    /// Points equidistant in `ln r`; used for radial problems whose
    /// solutions vary like `ln r`. Excludes the origin by construction.
    LogRadial,
}

impl GridKind {
    pub(crate) fn name(self) -> &'static str {
        match self {
            GridKind::Uniform => "uniform",
            GridKind::LogRadial => "log-radial",
        }
    }
}

/// A strictly increasing 1D grid with positive spacings.
///
/// Log-radial grids exclude r = 0: the first point must be positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    points: Vec<f64>,
    kind: GridKind,
}

impl Grid1D {
    /// Uniform grid of `n` points covering `[a, b]` inclusive.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid {
                reason: format!("need at least 2 points, got {n}"),
            });
        }
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidGrid {
                reason: format!("interval [{a}, {b}] is not a finite increasing range"),
            });
        }
        let dx = (b - a) / (n - 1) as f64;
        let points = (0..n)
            .map(|i| {
                if i + 1 == n {
                    b
                } else {
                    a + dx * i as f64
                }
            })
            .collect();
        Ok(Grid1D {
            points,
            kind: GridKind::Uniform,
        })
    }

    /// Logarithmic radial grid over `[r_min, r_max]` with at least
    /// `points_per_decade` points per factor of 10.
    pub fn log_radial(r_min: f64, r_max: f64, points_per_decade: usize) -> Result<Self> {
        if !(r_min > 0.0) {
            return Err(Error::InvalidGrid {
                reason: format!("log-radial grid must exclude 0; r_min = {r_min}"),
            });
        }
        if !(r_max > r_min) {
            return Err(Error::InvalidGrid {
                reason: format!("need r_max > r_min, got [{r_min}, {r_max}]"),
            });
        }
        if points_per_decade == 0 {
            return Err(Error::InvalidGrid {
                reason: "points_per_decade must be at least 1".into(),
            });
        }
        let decades = (r_max / r_min).log10();
        let n = ((decades * points_per_decade as f64).ceil() as usize).max(1) + 1;
        let t0 = r_min.ln();
        let t1 = r_max.ln();
        let dt = (t1 - t0) / (n - 1) as f64;
        let points = (0..n)
            .map(|i| {
                if i + 1 == n {
                    r_max
                } else {
                    (t0 + dt * i as f64).exp()
                }
            })
            .collect();
        Self::from_points(points, GridKind::LogRadial)
    }

    /// Build from explicit points, validating the invariants.
    pub fn from_points(points: Vec<f64>, kind: GridKind) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidGrid {
                reason: format!("need at least 2 points, got {}", points.len()),
            });
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid {
                reason: "non-finite grid point".into(),
            });
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid {
                reason: "points must be strictly increasing".into(),
            });
        }
        if kind == GridKind::LogRadial && points[0] <= 0.0 {
            return Err(Error::InvalidGrid {
                reason: format!("log-radial grid must exclude 0; first point = {}", points[0]),
            });
        }
        Ok(Grid1D { points, kind })
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // at least two points by construction
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// Width of interval `i` (between points `i` and `i+1`).
    pub fn spacing(&self, i: usize) -> f64 {
        self.points[i + 1] - self.points[i]
    }

    /// The common spacing if the grid is uniform.
    pub fn uniform_spacing(&self) -> Option<f64> {
        match self.kind {
            GridKind::Uniform => Some(self.spacing(0)),
            GridKind::LogRadial => None,
        }
    }

    /// Trapezoid quadrature weights (one per point).
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let n = self.len();
        let mut w = vec![0.0; n];
        for i in 0..n - 1 {
            let half = 0.5 * self.spacing(i);
            w[i] += half;
            w[i + 1] += half;
        }
        w
    }

    /// Trapezoid quadrature of point values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.len(), "value array does not match grid");
        let mut sum = 0.0;
        for i in 0..self.len() - 1 {
            sum += 0.5 * self.spacing(i) * (values[i] + values[i + 1]);
        }
        sum
    }
}
