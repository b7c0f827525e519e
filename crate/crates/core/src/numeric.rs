//! Small numerical kernels shared by the model modules: compensated
//! accumulation, parabolic peak refinement, uniform grids and least squares.

/// Neumaier's variant of Kahan summation.
///
/// Terms are accumulated in the order they are added; callers that need
/// bitwise reproducibility feed terms in a fixed order (ascending mode index
/// everywhere in this crate) and never split the sum across threads.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut acc = NeumaierSum::new();
    acc.extend(terms);
    acc.value()
}

/// Vertex of the parabola through three equally spaced samples centred on
/// `x_mid`. Returns `(x_peak, y_peak)`; the offset is clamped to half a step
/// so the refined abscissa never leaves the bracket.
pub fn parabolic_peak(x_mid: f64, step: f64, y_prev: f64, y_mid: f64, y_next: f64) -> (f64, f64) {
    let curvature = y_prev - 2.0 * y_mid + y_next;
    if curvature >= 0.0 || !curvature.is_finite() {
        return (x_mid, y_mid);
    }
    let offset = (0.5 * (y_prev - y_next) / curvature).clamp(-0.5, 0.5);
    let y = y_mid - 0.25 * (y_prev - y_next) * offset;
    (x_mid + offset * step, y.max(y_mid))
}

/// `{start, start + step, ...}` up to and including `stop` (with a relative
/// slack of 1e-9 steps). Points are `start + i * step`, never accumulated.
pub fn uniform_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    if step.is_nan() || step <= 0.0 || stop.is_nan() || start.is_nan() || stop < start {
        return Vec::new();
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| start + i as f64 * step).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y = slope * x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mean_x = compensated_sum(xs.iter().copied()) / nf;
    let mean_y = compensated_sum(ys.iter().copied()) / nf;
    let sxx = compensated_sum(xs.iter().map(|x| (x - mean_x).powi(2)));
    let sxy = compensated_sum(xs.iter().zip(ys).map(|(x, y)| (x - mean_x) * (y - mean_y)));
    let syy = compensated_sum(ys.iter().map(|y| (y - mean_y).powi(2)));
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Mean and population standard deviation.
pub fn mean_and_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = compensated_sum(values.iter().copied()) / n;
    let var = compensated_sum(values.iter().map(|v| (v - mean).powi(2))) / n;
    (mean, var.sqrt())
}
