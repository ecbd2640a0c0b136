use crate::error::{Error, Result};

/// Natural cubic spline (zero second derivative at both ends).
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalCubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl NaturalCubicSpline {
    /// Fits the spline through `(xs[i], ys[i])`; `xs` must be strictly
    /// increasing with at least two knots.
    pub fn fit(xs: &[f64], ys: &[f64]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Shape(format!(
                "{} knot positions but {} values",
                xs.len(),
                ys.len()
            )));
        }
        let n = xs.len();
        if n < 2 {
            return Err(Error::Validation(format!("spline needs ≥ 2 knots, got {n}")));
        }
        if xs.iter().chain(ys).any(|v| !v.is_finite()) {
            return Err(Error::Validation("non-finite spline knot".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Validation("spline knots must be strictly increasing".into()));
        }

        let mut second = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior equations
            // h_{i-1} M_{i-1} + 2(h_{i-1} + h_i) M_i + h_i M_{i+1} = r_i.
            let m = n - 2;
            let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
            let slope: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
            let mut c_prime = vec![0.0; m];
            let mut d_prime = vec![0.0; m];
            for k in 0..m {
                let i = k + 1;
                let sub = h[i - 1];
                let diag = 2.0 * (h[i - 1] + h[i]);
                let sup = h[i];
                let rhs = 6.0 * (slope[i] - slope[i - 1]);
                if k == 0 {
                    c_prime[k] = sup / diag;
                    d_prime[k] = rhs / diag;
                } else {
                    let denom = diag - sub * c_prime[k - 1];
                    c_prime[k] = sup / denom;
                    d_prime[k] = (rhs - sub * d_prime[k - 1]) / denom;
                }
            }
            second[m] = d_prime[m - 1];
            for k in (0..m - 1).rev() {
                second[k + 1] = d_prime[k] - c_prime[k] * second[k + 2];
            }
        }
        Ok(Self {
            knots: xs.to_vec(),
            values: ys.to_vec(),
            second,
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Second derivatives at the knots.
    pub fn second_derivatives(&self) -> &[f64] {
        &self.second
    }

    /// Per-segment `[a, b, c, d]` with
    /// `s(x) = a + b·dx + c·dx² + d·dx³`, `dx = x − x_i`.
    pub fn coefficients(&self) -> Vec<[f64; 4]> {
        (0..self.knots.len() - 1).map(|i| self.segment(i)).collect()
    }

    fn segment(&self, i: usize) -> [f64; 4] {
        let h = self.knots[i + 1] - self.knots[i];
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        [
            y0,
            (y1 - y0) / h - h * (2.0 * m0 + m1) / 6.0,
            m0 / 2.0,
            (m1 - m0) / (6.0 * h),
        ]
    }

    /// Evaluates the spline; outside the knot span the end cubics are
    /// extended.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.knots.len();
        if x == self.knots[n - 1] {
            return self.values[n - 1];
        }
        let i = match self.knots.partition_point(|&k| k <= x) {
            0 => 0,
            p => (p - 1).min(n - 2),
        };
        let [a, b, c, d] = self.segment(i);
        let dx = x - self.knots[i];
        a + dx * (b + dx * (c + dx * d))
    }
}
