//! Natural cubic spline with analytic first and second derivatives.

use crate::error::{GeomError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the nodes.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(GeomError::Shape {
                expected: x.len(),
                got: y.len(),
            });
        }
        if x.len() < 4 {
            return Err(GeomError::Invariant(format!(
                "sampled profile needs at least 4 nodes, got {}",
                x.len()
            )));
        }
        if let Some(w) = x.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(GeomError::Invariant(format!(
                "sample grid must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(GeomError::Domain("sample values must be finite".into()));
        }
        let m = natural_second_derivatives(&x, &y);
        Ok(Self { x, y, m })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    fn interval(&self, t: f64) -> usize {
        let last = self.x.len() - 2;
        self.x
            .partition_point(|&xi| xi <= t)
            .saturating_sub(1)
            .min(last)
    }

    /// `(value, first derivative, second derivative)` at `t`.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        let i = self.interval(t);
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let h = x1 - x0;
        let a = x1 - t;
        let b = t - x0;
        let value = m0 * a.powi(3) / (6.0 * h)
            + m1 * b.powi(3) / (6.0 * h)
            + (y0 / h - m0 * h / 6.0) * a
            + (y1 / h - m1 * h / 6.0) * b;
        let d1 =
            -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) + (y1 - y0) / h - (m1 - m0) * h / 6.0;
        let d2 = (m0 * a + m1 * b) / h;
        (value, d1, d2)
    }
}

/// Thomas algorithm for the natural end conditions `M_0 = M_{n-1} = 0`.
fn natural_second_derivatives(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    let inner = n - 2;
    let mut diag = vec![0.0; inner];
    let mut upper = vec![0.0; inner];
    let mut rhs = vec![0.0; inner];
    for k in 0..inner {
        let i = k + 1;
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        diag[k] = 2.0 * (h0 + h1);
        upper[k] = h1;
        rhs[k] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
    }
    for k in 1..inner {
        let lower = x[k + 1] - x[k];
        let w = lower / diag[k - 1];
        diag[k] -= w * upper[k - 1];
        rhs[k] -= w * rhs[k - 1];
    }
    for k in (0..inner).rev() {
        let next = if k + 1 < inner { m[k + 2] } else { 0.0 };
        m[k + 1] = (rhs[k] - upper[k] * next) / diag[k];
    }
    m
}
