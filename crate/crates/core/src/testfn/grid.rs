use num_complex::Complex64;

/// Samples of a function on a uniform grid of the log axis, interpolated by
/// a natural cubic spline and multiplied by `e^{weight·x}`. Zero outside the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LogGrid {
    start: f64,
    step: f64,
    values: Vec<Complex64>,
    second: Vec<Complex64>,
    weight: f64,
}

impl LogGrid {
    /// Build the spline through `values` at `start + i·step`.
    pub fn new(start: f64, step: f64, values: Vec<Complex64>) -> Self {
        let second = natural_spline_moments(&values, step);
        Self {
            start,
            step,
            values,
            second,
            weight: 0.0,
        }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn end(&self) -> f64 {
        self.start + self.step * (self.values.len() - 1) as f64
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support(&self) -> (f64, f64) {
        (self.start, self.end())
    }

    fn locate(&self, x: f64) -> Option<(usize, f64)> {
        let cells = self.values.len().checked_sub(1)?;
        if cells == 0 || x < self.start || x > self.end() {
            return None;
        }
        let pos = (x - self.start) / self.step;
        let i = (pos.floor() as usize).min(cells - 1);
        Some((i, pos - i as f64))
    }

    /// Spline value and its first two derivatives (without the weight).
    fn spline(&self, x: f64) -> [Complex64; 3] {
        let zero = Complex64::new(0.0, 0.0);
        let Some((i, t)) = self.locate(x) else {
            return [zero; 3];
        };
        let h = self.step;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let u = 1.0 - t;
        let s = y0 * u + y1 * t + (m0 * (u * u * u - u) + m1 * (t * t * t - t)) * (h * h / 6.0);
        let ds = (y1 - y0) / h + (m1 * (3.0 * t * t - 1.0) - m0 * (3.0 * u * u - 1.0)) * (h / 6.0);
        let dds = m0 * u + m1 * t;
        [s, ds, dds]
    }

    pub fn value(&self, x: f64) -> Complex64 {
        self.spline(x)[0] * (self.weight * x).exp()
    }

    /// Derivative of order `n <= 2` of the weighted spline; `None` above that.
    pub fn derivative(&self, x: f64, n: usize) -> Option<Complex64> {
        let [s, ds, dds] = self.spline(x);
        let a = self.weight;
        let e = (a * x).exp();
        match n {
            0 => Some(s * e),
            1 => Some((s * a + ds) * e),
            2 => Some((s * (a * a) + ds * (2.0 * a) + dds) * e),
            _ => None,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        let mut second = self.second.clone();
        second.reverse();
        Self {
            start: -self.end(),
            step: self.step,
            values,
            second,
            weight: -1.0 - self.weight,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| v.conj()).collect(),
            second: self.second.iter().map(|v| v.conj()).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * a).collect(),
            second: self.second.iter().map(|v| v * a).collect(),
            ..self.clone()
        }
    }

    /// Cell edges of the grid.
    pub fn breakpoints(&self) -> Vec<f64> {
        (0..self.values.len())
            .map(|i| self.start + self.step * i as f64)
            .collect()
    }
}

fn natural_spline_moments(values: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = values.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut m = vec![zero; n];
    if n < 3 {
        return m;
    }
    // tridiagonal system for the interior moments: M_{i-1} + 4 M_i + M_{i+1} = rhs_i
    let k = n - 2;
    let mut c = vec![0.0; k];
    let mut d = vec![zero; k];
    for i in 0..k {
        let rhs = (values[i] - values[i + 1] * 2.0 + values[i + 2]) * (6.0 / (h * h));
        if i == 0 {
            c[0] = 1.0 / 4.0;
            d[0] = rhs / 4.0;
        } else {
            let denom = 4.0 - c[i - 1];
            c[i] = 1.0 / denom;
            d[i] = (rhs - d[i - 1]) / denom;
        }
    }
    for i in (0..k).rev() {
        let next = if i + 1 < k { m[i + 2] } else { zero };
        m[i + 1] = d[i] - next * c[i];
    }
    m
}
