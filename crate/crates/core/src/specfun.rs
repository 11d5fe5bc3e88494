//! Special functions: integer-order Bessel J and x*coth(x).
//!
//! The photo-assisted sums need J_n(z) for every order up to the truncation
//! limit at once, so the series is generated in one pass with Miller's
//! downward recurrence normalized by `J_0 + 2*sum_k J_{2k} = 1`. Upward
//! recurrence is unstable for n > z and unusable here.

use crate::error::{Error, Result};

/// Largest |z| the Miller recurrence is validated for.
pub const MAX_BESSEL_ARG: f64 = 1e4;

/// Arguments below this are indistinguishable from zero at the accuracy
/// target; the series degenerates to `J_0 = 1`, all higher orders 0.
const NEGLIGIBLE_ARG: f64 = 1e-12;

/// Magnitude at which the unnormalized downward recurrence is rescaled to
/// avoid overflow.
const RESCALE_THRESHOLD: f64 = 1e250;

/// Bessel functions J_0(z) ... J_max(z) at a fixed argument.
///
/// Negative orders are served through `J_{-n}(z) = (-1)^n J_n(z)`.
#[derive(Debug, Clone)]
pub struct BesselSeries {
    argument: f64,
    values: Vec<f64>,
}

impl BesselSeries {
    pub fn argument(&self) -> f64 {
        self.argument
    }

    pub fn max_order(&self) -> usize {
        self.values.len() - 1
    }

    /// J_order(argument). Panics if |order| exceeds `max_order`.
    pub fn get(&self, order: i32) -> f64 {
        let n = order.unsigned_abs() as usize;
        assert!(
            n <= self.max_order(),
            "order {order} outside materialized range 0..={}",
            self.max_order()
        );
        let v = self.values[n];
        if order < 0 && order % 2 != 0 {
            -v
        } else {
            v
        }
    }
}

/// All J_n(z) for n = 0..=max_order.
///
/// Errors when |z| is outside [`MAX_BESSEL_ARG`] or not finite.
pub fn bessel_j_all(z: f64, max_order: usize) -> Result<BesselSeries> {
    if !z.is_finite() || z.abs() > MAX_BESSEL_ARG {
        return Err(Error::BesselRange {
            argument: z,
            limit: MAX_BESSEL_ARG,
        });
    }
    let mut values = miller_series(z.abs(), max_order);
    if z < 0.0 {
        for (n, v) in values.iter_mut().enumerate() {
            if n % 2 != 0 {
                *v = -*v;
            }
        }
    }
    Ok(BesselSeries {
        argument: z,
        values,
    })
}

/// Single J_n(z); negative n handled by symmetry.
pub fn bessel_j(order: i32, z: f64) -> Result<f64> {
    let series = bessel_j_all(z, order.unsigned_abs() as usize)?;
    Ok(series.get(order))
}

/// Miller downward recurrence for non-negative z, returning orders
/// 0..=max_order.
///
/// The recurrence must start deep inside the evanescent region n > z, where
/// J_n(z) ~ Ai-function decay over a transition layer of width (z/2)^(1/3).
/// 14 layer widths push the seed error below 1e-14; the flat 40 dominates
/// for small z.
fn miller_series(z: f64, max_order: usize) -> Vec<f64> {
    if z < NEGLIGIBLE_ARG {
        let mut values = vec![0.0; max_order + 1];
        values[0] = 1.0;
        return values;
    }
    let margin = 40 + (14.0 * (z / 2.0).cbrt()).ceil() as usize;
    let start = max_order.max(z.ceil() as usize) + margin;
    let mut work = vec![0.0_f64; start + 2];
    work[start + 1] = 0.0;
    work[start] = 1e-30;
    for k in (1..=start).rev() {
        work[k - 1] = (2.0 * k as f64 / z) * work[k] - work[k + 1];
        if work[k - 1].abs() > RESCALE_THRESHOLD {
            for v in work[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let mut norm = work[0];
    let mut m = 2;
    while m <= start {
        norm += 2.0 * work[m];
        m += 2;
    }
    work.truncate(max_order + 1);
    for v in work.iter_mut() {
        *v /= norm;
    }
    work
}

/// x*coth(x): even, >= 1, equal to 1 at x = 0.
///
/// Below |x| = 1e-2 the Laurent series 1 + x^2/3 - x^4/45 + 2x^6/945 is
/// used; the first omitted term is ~1e-17 there, so the branch switch is
/// seamless at double precision.
pub fn x_coth_x(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-2 {
        let x2 = x * x;
        1.0 + x2 / 3.0 - x2 * x2 / 45.0 + 2.0 * x2 * x2 * x2 / 945.0
    } else {
        ax / ax.tanh()
    }
}
