use crate::error::{CnlsError, Result};
use crate::grid::RadialGrid;
use std::sync::Arc;

/// One radial function sampled at the interior nodes of a [`RadialGrid`].
///
/// The field is extended by even reflection at `r = 0` and by zero at
/// `r = r_max`; all integrals and the Laplacian inherit those conventions
/// from the grid.
#[derive(Debug, Clone)]
pub struct RadialField {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

impl RadialField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(CnlsError::InvalidGrid(format!(
                "field length {} does not match grid n = {}",
                values.len(),
                grid.n()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CnlsError::DegenerateState("non-finite field value".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<RadialGrid>) -> Self {
        let n = grid.n();
        Self { grid, values: vec![0.0; n] }
    }

    pub fn from_fn(grid: Arc<RadialGrid>, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn same_grid(&self, other: &RadialField) -> bool {
        self.grid.same_layout(other.grid())
    }

    fn check_grid(&self, other: &RadialField) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(CnlsError::GridMismatch)
        }
    }

    /// `∫_{R^3} f²`
    pub fn mass(&self) -> f64 {
        self.grid.inner_w(&self.values, &self.values)
    }

    /// `∫_{R^3} |∇f|²` via the grid's Dirichlet form.
    pub fn dirichlet_energy(&self) -> f64 {
        self.grid.stiffness_form(&self.values, &self.values)
    }

    /// `∫_{R^3} f⁴`
    pub fn lp4(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        self.grid.inner_w(&sq, &sq)
    }

    /// `∫_{R^3} f g`
    pub fn inner_l2(&self, other: &RadialField) -> Result<f64> {
        self.check_grid(other)?;
        Ok(self.grid.inner_w(&self.values, other.values()))
    }

    /// `∫_{R^3} f² g²`
    pub fn mixed_quartic(&self, other: &RadialField) -> Result<f64> {
        self.check_grid(other)?;
        Ok(self
            .grid
            .weights()
            .iter()
            .zip(self.values.iter().zip(other.values()))
            .map(|(w, (a, b))| w * a * a * b * b)
            .sum())
    }

    /// H¹ inner product `a(f,g) + ⟨f,g⟩_w`.
    pub fn inner_h1(&self, other: &RadialField) -> Result<f64> {
        self.check_grid(other)?;
        Ok(self.grid.stiffness_form(&self.values, other.values())
            + self.grid.inner_w(&self.values, other.values()))
    }

    pub fn norm_h1_sq(&self) -> f64 {
        self.dirichlet_energy() + self.mass()
    }

    /// Pointwise Laplacian `Δf = f'' + (2/r) f'` with the grid's boundary
    /// conventions (even extension at the origin, zero past `r_max`).
    pub fn laplacian(&self) -> Result<RadialField> {
        if self.grid.n() < 3 {
            return Err(CnlsError::InvalidGrid("laplacian needs n >= 3".into()));
        }
        let vals = self.grid.laplacian_values(&self.values);
        Ok(Self { grid: self.grid.clone(), values: vals })
    }

    /// Dilation `(s ⋆ f)(r) = e^{3s/2} f(e^s r)`, resampled on the same grid
    /// by monotone cubic interpolation; values past `r_max` are treated as 0.
    pub fn dilate(&self, s: f64) -> RadialField {
        if s == 0.0 {
            return self.clone();
        }
        let interp = Pchip::build(&self.grid, &self.values);
        let scale = (1.5 * s).exp();
        let es = s.exp();
        let values = self
            .grid
            .nodes()
            .iter()
            .map(|&r| scale * interp.eval(es * r))
            .collect();
        Self { grid: self.grid.clone(), values }
    }

    /// In-place axpy: `self += c * other`.
    pub fn axpy(&mut self, c: f64, other: &RadialField) {
        for (a, b) in self.values.iter_mut().zip(other.values()) {
            *a += c * b;
        }
    }

    pub fn scale(&mut self, c: f64) {
        for a in self.values.iter_mut() {
            *a *= c;
        }
    }

    /// Rescale so that `mass() == target` (target in mass units, i.e. a²).
    pub fn rescale_mass(&mut self, target: f64) -> Result<()> {
        let m = self.mass();
        if m <= 0.0 || !m.is_finite() {
            return Err(CnlsError::DegenerateState(
                "cannot normalize a zero component".into(),
            ));
        }
        self.scale((target / m).sqrt());
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Monotone cubic (Fritsch-Carlson type) interpolant on the augmented node
/// set {0, r_1, ..., r_n, r_max} with the field's boundary conventions.
struct Pchip {
    h: f64,
    r_max: f64,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl Pchip {
    fn build(grid: &RadialGrid, values: &[f64]) -> Self {
        let n = grid.n();
        let h = grid.h();
        // augmented samples: y[0] = f(0) from the even-quadratic extension,
        // y[n+1] = 0 at r_max
        let mut y = Vec::with_capacity(n + 2);
        y.push((4.0 * values[0] - values[1]) / 3.0);
        y.extend_from_slice(values);
        y.push(0.0);

        let m = y.len();
        let mut secant = vec![0.0; m - 1];
        for k in 0..m - 1 {
            secant[k] = (y[k + 1] - y[k]) / h;
        }
        let mut slope = vec![0.0; m];
        for k in 1..m - 1 {
            let (d0, d1) = (secant[k - 1], secant[k]);
            slope[k] = if d0 * d1 <= 0.0 {
                0.0
            } else {
                2.0 * d0 * d1 / (d0 + d1)
            };
        }
        slope[0] = clip_end(1.5 * secant[0] - 0.5 * slope[1], secant[0]);
        slope[m - 1] = clip_end(1.5 * secant[m - 2] - 0.5 * slope[m - 2], secant[m - 2]);
        Self { h, r_max: grid.r_max(), y, slope }
    }

    fn eval(&self, x: f64) -> f64 {
        if x >= self.r_max {
            return 0.0;
        }
        let x = x.max(0.0);
        let m = self.y.len();
        let k = ((x / self.h) as usize).min(m - 2);
        let t = (x - k as f64 * self.h) / self.h;
        let (y0, y1) = (self.y[k], self.y[k + 1]);
        let (m0, m1) = (self.slope[k] * self.h, self.slope[k + 1] * self.h);
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2)
    }
}

fn clip_end(m: f64, d: f64) -> f64 {
    if m * d <= 0.0 {
        0.0
    } else if m.abs() > 3.0 * d.abs() {
        3.0 * d
    } else {
        m
    }
}
