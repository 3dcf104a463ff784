//! Graded tensor grids on `I' × [0, π/2]` and fields sampled on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ReducedGeometry;
use crate::hopf::ReducedField;
use crate::scalar::Real;
use crate::spline::TensorSpline;

/// Grid resolution, expressed relative to `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Cells per `ε` at the clustered ends (first cell `ε / cells_per_eps`).
    pub cells_per_eps: f64,
    /// Geometric growth ratio of consecutive cells.
    pub growth: f64,
    /// Largest cell in units of `ε` (in `s`, and in `f(s_min)·t` for `t`).
    pub max_cell: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            cells_per_eps: 20.0,
            growth: 1.05,
            max_cell: 2.0,
        }
    }
}

impl GridSpec {
    /// Roughly doubles the node count along each axis.
    pub fn refined(&self) -> Self {
        Self {
            cells_per_eps: self.cells_per_eps * 2.0,
            growth: self.growth.sqrt(),
            max_cell: self.max_cell / 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cells_per_eps >= 10.0) {
            return Err(Error::config(format!(
                "at least 10 cells per ε are required near the boundary, got {}",
                self.cells_per_eps
            )));
        }
        if !(self.growth >= 1.0 && self.growth < 2.0) || !(self.max_cell > 0.0) {
            return Err(Error::config(
                "grid growth must lie in [1, 2) and max_cell must be positive",
            ));
        }
        Ok(())
    }

    /// `s`-nodes clustered towards both ends of `I'`.
    pub fn s_nodes<T: Real>(&self, geom: &ReducedGeometry<T>, eps: T) -> Result<Vec<T>> {
        self.validate()?;
        let first = eps / T::lit(self.cells_per_eps);
        let cap = eps * T::lit(self.max_cell);
        let half = graded_cells(geom.length() * T::lit(0.5), first, T::lit(self.growth), cap);
        let mut nodes = vec![geom.s_min];
        let mut x = geom.s_min;
        for &h in &half {
            x = x + h;
            nodes.push(x);
        }
        for &h in half.iter().rev() {
            x = x + h;
            nodes.push(x);
        }
        let last = nodes.len() - 1;
        nodes[last] = geom.s_max;
        Ok(nodes)
    }

    /// `t`-nodes on `[0, π/2]`, clustered at the pole `t = 0` so that the
    /// boundary arc length `f(s_max)·t` of the first cell is `ε / cells_per_eps`.
    /// The cap on the cell size is measured as arc length on the inner boundary.
    pub fn t_nodes<T: Real>(&self, geom: &ReducedGeometry<T>, eps: T) -> Result<Vec<T>> {
        self.validate()?;
        let scale = geom.warp(geom.s_max);
        let first = eps / (T::lit(self.cells_per_eps) * scale);
        let cap = (eps * T::lit(self.max_cell) / geom.warp(geom.s_min)).min(T::lit(0.05));
        let cells = graded_cells(T::FRAC_PI_2(), first, T::lit(self.growth), cap);
        let mut nodes = vec![T::zero()];
        let mut x = T::zero();
        for &h in &cells {
            x = x + h;
            nodes.push(x);
        }
        let last = nodes.len() - 1;
        nodes[last] = T::FRAC_PI_2();
        Ok(nodes)
    }
}

/// Cell widths starting at `first`, growing geometrically up to `cap`, that
/// exactly tile `[0, length]`.
fn graded_cells<T: Real>(length: T, first: T, growth: T, cap: T) -> Vec<T> {
    let mut cells = Vec::new();
    let mut h = first.min(cap);
    let mut total = T::zero();
    while total + h < length {
        cells.push(h);
        total = total + h;
        h = (h * growth).min(cap);
    }
    // Stretch the cells so they sum to `length`.
    let rest = length - total;
    if rest > h * T::lit(0.5) || cells.is_empty() {
        cells.push(rest);
    } else {
        let k = length / total;
        for c in cells.iter_mut() {
            *c = *c * k;
        }
    }
    cells
}

/// Axisymmetric field `v(s, t)` on a tensor grid, stored row-major in `s`
/// (`values[i * n_t + j]` at `(s_i, t_j)`).
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField<T> {
    pub s: Vec<T>,
    pub t: Vec<T>,
    pub values: Vec<T>,
    /// Volume density `f(s)^{2N} · |S^{2N−1}| sin^{2N−1}t cos t` per node.
    pub volume: Vec<T>,
    /// Inverse metric factor `f(s)^{−2}` of the `t`-direction per `s`-node.
    pub inv_metric_t: Vec<T>,
}

impl<T: Real> SolutionField<T> {
    pub fn new(s: Vec<T>, t: Vec<T>, values: Vec<T>, geom: &ReducedGeometry<T>) -> Result<Self> {
        if s.len() < 3 || t.len() < 3 {
            return Err(Error::config("grid needs at least three points per axis"));
        }
        if s.windows(2).any(|w| w[1] <= w[0]) || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("grid nodes must be strictly increasing"));
        }
        if values.len() != s.len() * t.len() {
            return Err(Error::config("value count does not match the grid"));
        }
        let volume = s
            .iter()
            .flat_map(|&si| t.iter().map(move |&tj| geom.volume_density(si, tj)))
            .collect();
        let inv_metric_t = s.iter().map(|&si| geom.warp(si).powi(-2)).collect();
        Ok(Self {
            s,
            t,
            values,
            volume,
            inv_metric_t,
        })
    }

    /// Field on the same grid with new values.
    pub fn with_values(&self, values: Vec<T>) -> Self {
        assert_eq!(values.len(), self.values.len());
        Self { values, ..self.clone() }
    }

    pub fn n_s(&self) -> usize {
        self.s.len()
    }

    pub fn n_t(&self) -> usize {
        self.t.len()
    }

    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[i * self.t.len() + j]
    }

    /// Cubic interpolant with zero normal slopes on all four edges,
    /// matching the Neumann and pole-regularity conditions.
    pub fn interpolant(&self) -> Result<FieldInterpolant<T>> {
        Ok(FieldInterpolant {
            spline: TensorSpline::new(self.s.clone(), self.t.clone(), self.values.clone())?,
            s_range: (self.s[0], *self.s.last().unwrap()),
        })
    }
}

/// Smooth evaluation of a [`SolutionField`] off the grid. Polar angles
/// outside `[0, π/2]` are reflected through the poles.
#[derive(Debug, Clone)]
pub struct FieldInterpolant<T> {
    spline: TensorSpline<T>,
    s_range: (T, T),
}

impl<T: Real> ReducedField<T> for FieldInterpolant<T> {
    fn value(&self, s: T, t: T) -> T {
        let t = t.abs();
        let t = if t > T::FRAC_PI_2() { T::PI() - t } else { t };
        let s = s.max(self.s_range.0).min(self.s_range.1);
        self.spline.eval(s, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ProblemParams;

    fn geom() -> ReducedGeometry<f64> {
        ReducedGeometry::new(&ProblemParams::new(1, 1.0, 2.0, 0.0, 0.05, 2.0).unwrap()).unwrap()
    }

    #[test]
    fn graded_s_grid_is_clustered_and_tiles_interval() {
        let g = geom();
        let spec = GridSpec::default();
        let s = spec.s_nodes(&g, 0.05).unwrap();
        assert_eq!(s[0], 2.0);
        assert_eq!(*s.last().unwrap(), 8.0);
        let first = s[1] - s[0];
        let last = s[s.len() - 1] - s[s.len() - 2];
        assert!(first <= 0.05 / 10.0 && last <= 0.05 / 10.0, "{first} {last}");
        assert!(s.windows(2).all(|w| w[1] > w[0]));
        let fine = spec.refined().s_nodes(&g, 0.05).unwrap();
        let ratio = fine.len() as f64 / s.len() as f64;
        assert!((1.6..2.6).contains(&ratio), "{ratio}");
    }

    #[test]
    fn t_grid_reaches_both_poles() {
        let g = geom();
        let t = GridSpec::default().t_nodes(&g, 0.05).unwrap();
        assert_eq!(t[0], 0.0);
        assert_eq!(*t.last().unwrap(), std::f64::consts::FRAC_PI_2);
        assert!(t[1] * g.warp(g.s_max) <= 0.05 / 10.0);
    }

    #[test]
    fn rejects_degenerate_grids() {
        let g = geom();
        assert!(SolutionField::new(vec![2.0, 8.0], vec![0.0, 1.0, 1.5], vec![0.0; 6], &g).is_err());
        let coarse = GridSpec {
            cells_per_eps: 4.0,
            ..GridSpec::default()
        };
        assert!(coarse.s_nodes(&g, 0.05).is_err());
    }
}
