//! Monotone cubic (Fritsch-Carlson) interpolation along skeleton arcs.
//!
//! Shape preservation matters here: an overshooting interpolant would feed
//! boundary data above the data range into the Poisson integral and falsely
//! break the maximum principle.

/// Piecewise-cubic Hermite interpolant on a uniform angular grid.
#[derive(Debug, Clone)]
pub struct ArcInterpolant {
    start: f64,
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
    /// Periodic wrap width for closed arcs (full circles); zero otherwise.
    period: f64,
}

fn fc_slope(s_prev: f64, s_next: f64) -> f64 {
    if s_prev * s_next > 0.0 {
        2.0 * s_prev * s_next / (s_prev + s_next)
    } else {
        0.0
    }
}

fn fc_end_slope(s0: f64, s1: f64) -> f64 {
    let d = 0.5 * (3.0 * s0 - s1);
    if d * s0 <= 0.0 {
        0.0
    } else if s0 * s1 < 0.0 && d.abs() > 3.0 * s0.abs() {
        3.0 * s0
    } else {
        d
    }
}

impl ArcInterpolant {
    /// Open arc: `values[i]` at angle `start + i * step`.
    pub fn open(start: f64, step: f64, values: Vec<f64>) -> Self {
        let n = values.len();
        assert!(n >= 2, "need at least two samples");
        let secants: Vec<f64> = (0..n - 1)
            .map(|i| (values[i + 1] - values[i]) / step)
            .collect();
        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes[0] = secants[0];
            slopes[1] = secants[0];
        } else {
            slopes[0] = fc_end_slope(secants[0], secants[1]);
            slopes[n - 1] = fc_end_slope(secants[n - 2], secants[n - 3]);
            for i in 1..n - 1 {
                slopes[i] = fc_slope(secants[i - 1], secants[i]);
            }
        }
        Self {
            start,
            step,
            values,
            slopes,
            period: 0.0,
        }
    }

    /// Closed arc sampled at `n` equispaced angles covering `period`.
    pub fn closed(start: f64, period: f64, values: Vec<f64>) -> Self {
        let n = values.len();
        assert!(n >= 3, "need at least three samples on a closed arc");
        let step = period / n as f64;
        let secant = |i: usize| (values[(i + 1) % n] - values[i]) / step;
        let slopes: Vec<f64> = (0..n)
            .map(|i| fc_slope(secant((i + n - 1) % n), secant(i)))
            .collect();
        Self {
            start,
            step,
            values,
            slopes,
            period,
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let n = self.values.len();
        let (i, t, y0, y1, d0, d1) = if self.period > 0.0 {
            let mut off = (theta - self.start) % self.period;
            if off < 0.0 {
                off += self.period;
            }
            let i = ((off / self.step) as usize).min(n - 1);
            let t = (off - i as f64 * self.step) / self.step;
            let ip = (i + 1) % n;
            (i, t, self.values[i], self.values[ip], self.slopes[i], self.slopes[ip])
        } else {
            // Map into the arc's angular frame; angles may arrive shifted by
            // 2π or sit just outside the span from rounding, in which case
            // they snap to the nearer end.
            let span = self.step * (n - 1) as f64;
            let mut off = crate::angles::normalize(theta - self.start);
            if off > span {
                off = if off - span <= std::f64::consts::TAU - off {
                    span
                } else {
                    0.0
                };
            }
            let i = ((off / self.step) as usize).min(n - 2);
            let t = ((off - i as f64 * self.step) / self.step).clamp(0.0, 1.0);
            (i, t, self.values[i], self.values[i + 1], self.slopes[i], self.slopes[i + 1])
        };
        let _ = i;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        y0 * h00 + self.step * d0 * h10 + y1 * h01 + self.step * d1 * h11
    }
}
