//! Uniformly sampled time series plus the small set of sample-wise tools
//! (moving average, RMS, add/subtract) everything downstream leans on.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MODULE: &str = "signal";

/// Physical unit tag carried by a series. Purely descriptive except that
/// sample-wise combination refuses to mix units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalUnit {
    /// m/s^2
    Accel,
    /// rad
    Angle,
    /// m
    Displacement,
    Dimensionless,
}

impl fmt::Display for SignalUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SignalUnit::Accel => "m/s^2",
            SignalUnit::Angle => "rad",
            SignalUnit::Displacement => "m",
            SignalUnit::Dimensionless => "-",
        };
        f.write_str(s)
    }
}

/// Uniformly sampled scalar signal.
///
/// `warmup` counts leading *and* trailing samples that are filter-edge
/// artifacts; metrics skip them. Invariants: dt > 0, samples finite,
/// warmup <= len/2.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T: Scalar> {
    dt: f64,
    t0: f64,
    values: Vec<T>,
    unit: SignalUnit,
    warmup: usize,
}

impl<T: Scalar> TimeSeries<T> {
    pub fn new(dt: f64, t0: f64, values: Vec<T>, unit: SignalUnit) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::invalid(MODULE, format!("dt must be positive, got {dt}")));
        }
        if !t0.is_finite() {
            return Err(Error::invalid(MODULE, format!("t0 must be finite, got {t0}")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(
                MODULE,
                format!("non-finite sample at index {i}"),
            ));
        }
        Ok(TimeSeries {
            dt,
            t0,
            values,
            unit,
            warmup: 0,
        })
    }

    pub fn with_warmup(mut self, warmup: usize) -> Result<Self> {
        if warmup > self.values.len() / 2 {
            return Err(Error::invalid(
                MODULE,
                format!(
                    "warmup {} exceeds half the length {}",
                    warmup,
                    self.values.len()
                ),
            ));
        }
        self.warmup = warmup;
        Ok(self)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn sample_rate_hz(&self) -> f64 {
        1.0 / self.dt
    }

    pub fn unit(&self) -> SignalUnit {
        self.unit
    }

    pub fn warmup(&self) -> usize {
        self.warmup
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn time_at(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    /// Samples with the warmup edges stripped.
    pub fn interior(&self) -> &[T] {
        &self.values[self.warmup..self.values.len() - self.warmup]
    }

    /// Same clock and shape; required before any sample-wise combination.
    pub fn is_aligned_with(&self, other: &Self) -> bool {
        self.dt == other.dt
            && self.t0 == other.t0
            && self.values.len() == other.values.len()
            && self.unit == other.unit
    }

    pub(crate) fn ensure_aligned(&self, other: &Self, module: &'static str) -> Result<()> {
        if self.is_aligned_with(other) {
            return Ok(());
        }
        Err(Error::misaligned(
            module,
            format!(
                "(dt {} vs {}, t0 {} vs {}, len {} vs {}, unit {} vs {})",
                self.dt,
                other.dt,
                self.t0,
                other.t0,
                self.values.len(),
                other.values.len(),
                self.unit,
                other.unit
            ),
        ))
    }

    /// Rebuild with the same clock, new samples. Internal: callers guarantee
    /// finite values and warmup <= len/2.
    pub(crate) fn same_clock(&self, values: Vec<T>, unit: SignalUnit, warmup: usize) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        TimeSeries {
            dt: self.dt,
            t0: self.t0,
            values,
            unit,
            warmup,
        }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Result<Self> {
        let mapped: Vec<T> = self.values.iter().map(|&v| f(v)).collect();
        Self::new(self.dt, self.t0, mapped, self.unit)?.with_warmup(self.warmup)
    }
}

/// Simple moving average. Centered mode averages the n samples nearest each
/// index (zero phase lag, left-heavy window when n is even); causal mode
/// averages indices i..i+n-1. Edges fall back to the truncated available
/// window and are flagged via warmup. Length preserved.
pub fn sma_filter<T: Scalar>(ts: &TimeSeries<T>, n: usize, centered: bool) -> Result<TimeSeries<T>> {
    let len = ts.len();
    if n < 1 || n > len {
        return Err(Error::invalid(
            MODULE,
            format!("SMA window {n} out of range 1..={len}"),
        ));
    }
    // prefix sums in f64 so the f32 path does not lose the window mean
    let mut prefix = Vec::with_capacity(len + 1);
    let mut acc = 0.0f64;
    prefix.push(0.0);
    for v in ts.values() {
        acc += v.as_f64();
        prefix.push(acc);
    }
    let half = if centered { n / 2 } else { 0 };
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let lo = i.saturating_sub(half);
        let hi = (i + (n - half)).min(len);
        out.push(T::of((prefix[hi] - prefix[lo]) / (hi - lo) as f64));
    }
    let affected = if centered {
        half // trailing edge affects n-half-1 <= half samples
    } else {
        n - 1
    };
    let warmup = ts.warmup.max(affected).min(len / 2);
    Ok(ts.same_clock(out, ts.unit, warmup))
}

/// Root mean square of the samples, optionally skipping the warmup edges.
pub fn rms<T: Scalar>(ts: &TimeSeries<T>, exclude_warmup: bool) -> Result<T> {
    let slice = if exclude_warmup {
        ts.interior()
    } else {
        ts.values()
    };
    if slice.is_empty() {
        return Err(Error::invalid(MODULE, "RMS of an empty inclusion set"));
    }
    let sum_sq: f64 = slice.iter().map(|v| v.as_f64() * v.as_f64()).sum();
    Ok(T::of((sum_sq / slice.len() as f64).sqrt()))
}

/// Sample-wise a - b. Inputs must be aligned; warmup propagates as the max.
pub fn subtract<T: Scalar>(a: &TimeSeries<T>, b: &TimeSeries<T>) -> Result<TimeSeries<T>> {
    a.ensure_aligned(b, MODULE)?;
    let values = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(&x, &y)| x - y)
        .collect();
    Ok(a.same_clock(values, a.unit, a.warmup.max(b.warmup)))
}

/// Sample-wise a + b with the same rules as [`subtract`].
pub fn add<T: Scalar>(a: &TimeSeries<T>, b: &TimeSeries<T>) -> Result<TimeSeries<T>> {
    a.ensure_aligned(b, MODULE)?;
    let values = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(&x, &y)| x + y)
        .collect();
    Ok(a.same_clock(values, a.unit, a.warmup.max(b.warmup)))
}
