use crate::error::{Error, Result};
use crate::numeric::{golden_section_min, logspace};

/// Hölder exponents tried by the generic delay bounds.
pub const DEFAULT_HOLDER_GRID: [f64; 5] = [1.1, 1.5, 2.0, 3.0, 5.0];

/// Log-spaced search grid for the Chernoff parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for ThetaGrid {
    fn default() -> Self {
        Self {
            min: 1e-4,
            max: 50.0,
            points: 200,
        }
    }
}

impl ThetaGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.min > 0.0 && self.max > self.min && self.max.is_finite()) || self.points < 2 {
            return Err(Error::domain(format!("invalid θ grid {self:?}")));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        logspace(self.min, self.max, self.points)
    }
}

/// Minimises `objective` over `θ`: grid search on `grid`, then golden-section
/// refinement between the neighbours of the best grid point. Returns
/// `(θ*, objective(θ*))`. Grid points where the objective errors or is NaN
/// are infeasible.
pub fn optimize_theta<F>(mut objective: F, grid: &ThetaGrid) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    grid.validate()?;
    let thetas = grid.values();
    let mut eval = |th: f64| match objective(th) {
        Ok(v) if !v.is_nan() => Some(v),
        _ => None,
    };
    let values: Vec<Option<f64>> = thetas.iter().map(|&th| eval(th)).collect();
    let (best, best_value) = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .fold(None, |acc: Option<(usize, f64)>, (i, v)| match acc {
            Some((_, bv)) if bv <= v => acc,
            _ => Some((i, v)),
        })
        .ok_or_else(|| Error::domain("bound is infeasible on the whole θ grid"))?;
    if !best_value.is_finite() {
        return Ok((thetas[best], best_value));
    }
    let lo = thetas[best.saturating_sub(1)];
    let hi = thetas[(best + 1).min(thetas.len() - 1)];
    let (th, v) = golden_section_min(|th| eval(th).unwrap_or(f64::INFINITY), lo, hi, 1e-10 * hi);
    if v < best_value {
        Ok((th, v))
    } else {
        Ok((thetas[best], best_value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decreasing_objective_hits_upper_endpoint() {
        let grid = ThetaGrid::default();
        let (th, v) = optimize_theta(|th| Ok(-th), &grid).unwrap();
        assert_eq!(th, grid.max);
        assert_eq!(v, -grid.max);
    }

    #[test]
    fn convex_objective_interior_minimum_beats_dense_grid() {
        let f = |th: f64| (th - 1.7).powi(2) * 3.0 - 0.25 * th;
        let (th, v) = optimize_theta(|th| Ok(f(th)), &ThetaGrid::default()).unwrap();
        let dense = (0..=2_000_000)
            .map(|i| f(1e-4 + i as f64 * 50.0 / 2_000_000.0))
            .fold(f64::INFINITY, f64::min);
        assert!(v <= dense + 1e-12);
        assert!((th - (1.7 + 0.25 / 6.0)).abs() < 1e-6);
    }

    #[test]
    fn constant_objective_is_unchanged() {
        let (th, v) = optimize_theta(|_| Ok(0.5), &ThetaGrid::default()).unwrap();
        assert_eq!(v, 0.5);
        assert!(ThetaGrid::default().values().contains(&th));
    }

    #[test]
    fn infeasible_grid_is_an_error() {
        assert!(optimize_theta(|_| Err(Error::domain("x")), &ThetaGrid::default()).is_err());
        let bad = ThetaGrid { min: 1.0, max: 0.5, points: 10 };
        assert!(optimize_theta(Ok, &bad).is_err());
    }
}
