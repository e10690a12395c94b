//! Monotone piecewise-cubic (Fritsch–Carlson / PCHIP) interpolation on the
//! staggered nodes of a [`RadialGrid`](crate::grid::RadialGrid).
//!
//! Profiles are even in `r`, so the interval `[0, r_0]` is handled by
//! reflection; past the Dirichlet ghost node the interpolant is zero.

use alloc::vec::Vec;

use crate::field::RealField;

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x0: f64,
    h: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    /// Nodes `x_j = x0 + j h`. The ghost value 0 is appended at the end.
    pub fn new(x0: f64, h: f64, samples: &[f64]) -> Self {
        let mut values = Vec::with_capacity(samples.len() + 1);
        values.extend_from_slice(samples);
        values.push(0.0);
        let n = values.len();
        let secants: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]) / h).collect();
        let mut slopes = alloc::vec![0.0; n];
        // mirror secant at the origin is zero, so the first slope is zero too
        for k in 1..n - 1 {
            let (a, b) = (secants[k - 1], secants[k]);
            slopes[k] = if a * b <= 0.0 {
                0.0
            } else {
                2.0 / (1.0 / a + 1.0 / b)
            };
        }
        if n >= 3 {
            let (a, b) = (secants[n - 2], secants[n - 3]);
            let mut d = (3.0 * a - b) / 2.0;
            if d * a <= 0.0 {
                d = 0.0;
            } else if a * b <= 0.0 && libm::fabs(d) > libm::fabs(3.0 * a) {
                d = 3.0 * a;
            }
            slopes[n - 1] = d;
        }
        MonotoneCubic {
            x0,
            h,
            values,
            slopes,
        }
    }

    pub fn for_field(f: &RealField) -> Self {
        Self::new(f.grid().nodes()[0], f.grid().dr(), f.values())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x = libm::fabs(x);
        if x <= self.x0 {
            return self.values[0];
        }
        let s = (x - self.x0) / self.h;
        let last = self.values.len() - 1;
        if s >= last as f64 {
            return if s == last as f64 {
                self.values[last]
            } else {
                0.0
            };
        }
        let k = s as usize;
        let t = s - k as f64;
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (d0, d1) = (self.slopes[k] * self.h, self.slopes[k + 1] * self.h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * d1
    }
}
