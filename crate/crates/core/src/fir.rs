//! Regularized FIR reconstruction of dynamic displacement from measured
//! acceleration.
//!
//! The filter is the center row of the Tikhonov-regularized least-squares
//! solution that inverts the second-difference operator over a sliding
//! window of 2k+3 displacement samples:
//!
//!   C = (L^T L + lambda^2 I)^-1 L^T L_a,   L = L_a L_c
//!
//! with L_c the (2k+1) x (2k+3) second-difference matrix and L_a a diagonal
//! weighting of order 2k+1. Applying the center row to an acceleration
//! window and scaling by dt^2 yields one sample of zero-mean dynamic
//! displacement; sliding it over the record is plain FIR filtering.
//!
//! Two implementation notes that are easy to trip over:
//!
//! * Exploiting symmetry of the normal matrix, the center row is obtained
//!   from a single solve: A z = e_center with A = L_c^T L_a^2 L_c +
//!   lambda^2 I, then taps = L_a^2 L_c z. A is pentadiagonal and SPD.
//! * The raw center row does not have zero DC gain. The free boundaries of
//!   the window admit exact quadratic interpolants of a constant
//!   acceleration, and at the calibrated lambda (see [`optimal_lambda`])
//!   those modes are barely damped, so a constant input leaks through at
//!   O(1). We subtract a Hann-shaped correction whose weights sum to
//!   exactly the raw coefficient sum, forcing the 0 Hz gain to zero without
//!   disturbing the passband (a uniform subtraction would ripple it by
//!   several percent at small k). The corrected taps are then symmetrized
//!   to scrub solver roundoff.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cholesky_solve, Mat};
use crate::scalar::Scalar;
use crate::series::{SignalUnit, TimeSeries};

const MODULE: &str = "fir";

/// Diagonal weighting L_a applied to the second-difference rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    #[default]
    Identity,
    /// Raised-cosine taper over the 2k+1 rows; de-emphasizes window edges.
    Hanning,
}

impl Weighting {
    fn diagonal(self, k: usize) -> Vec<f64> {
        let n = 2 * k + 1;
        match self {
            Weighting::Identity => vec![1.0; n],
            Weighting::Hanning => (0..n)
                .map(|i| {
                    let s = (std::f64::consts::PI * i as f64 / (2 * k) as f64).sin();
                    s * s
                })
                .collect(),
        }
    }
}

/// Parameters for [`build_fir`]. `k` is the window half-length: the filter
/// sees 2k+3 acceleration samples per output sample.
#[derive(Debug, Clone, PartialEq)]
pub struct FirConfig {
    pub k: usize,
    pub dt: f64,
    /// Regularization factor; defaults to [`optimal_lambda`] of the window
    /// point count 2k+3.
    pub lambda_override: Option<f64>,
    pub weighting: Weighting,
    /// Slowest dynamic period (s) the window must span; drives k selection
    /// in [`FirConfig::for_period`].
    pub target_period: Option<f64>,
}

impl FirConfig {
    pub fn with_k(k: usize, dt: f64) -> Self {
        FirConfig {
            k,
            dt,
            lambda_override: None,
            weighting: Weighting::Identity,
            target_period: None,
        }
    }

    /// Smallest k whose window spans two periods: (2k+3) dt >= 2 T.
    pub fn for_period(period_s: f64, dt: f64) -> Self {
        let needed = 2.0 * period_s / dt;
        let k = (((needed - 3.0) / 2.0).ceil() as i64).max(1) as usize;
        FirConfig {
            target_period: Some(period_s),
            ..FirConfig::with_k(k, dt)
        }
    }

    /// Default window: spans two periods of the 0.5 Hz band edge (T = 2 s).
    pub fn default_for(dt: f64) -> Self {
        FirConfig::for_period(2.0, dt)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::invalid(MODULE, "k must be >= 1"));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::invalid(MODULE, format!("dt must be positive, got {}", self.dt)));
        }
        if let Some(l) = self.lambda_override {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::invalid(MODULE, format!("lambda must be positive, got {l}")));
            }
        }
        if let Some(t) = self.target_period {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::invalid(MODULE, format!("target period must be positive, got {t}")));
            }
        }
        Ok(())
    }
}

/// Built displacement-reconstruction filter: 2k+3 symmetric taps with zero
/// coefficient sum. Immutable once built; cheap to share.
#[derive(Debug, Clone)]
pub struct FirFilter<T: Scalar> {
    coeffs: Vec<T>,
    k: usize,
    dt: f64,
    lambda_used: f64,
}

impl<T: Scalar> FirFilter<T> {
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn lambda_used(&self) -> f64 {
        self.lambda_used
    }

    /// Discrete magnitude response |sum_j c_j e^{-i w j dt}| / dt^2 ... the
    /// dt^2 application factor included, i.e. meters out per unit input
    /// acceleration amplitude at frequency f_hz.
    pub fn response_at(&self, f_hz: f64) -> f64 {
        let w = 2.0 * std::f64::consts::PI * f_hz * self.dt;
        let center = (self.coeffs.len() - 1) as f64 / 2.0;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            let phase = w * (j as f64 - center);
            re += c.as_f64() * phase.cos();
            im += c.as_f64() * phase.sin();
        }
        (re * re + im * im).sqrt() * self.dt * self.dt
    }
}

/// The (2k+1) x (2k+3) second-difference operator: row i holds (1, -2, 1)
/// at columns (i, i+1, i+2). The dt^2 factor is carried separately.
pub fn second_difference_matrix<T: Scalar>(k: usize) -> Result<Mat<T>> {
    if k < 1 {
        return Err(Error::invalid(MODULE, "k must be >= 1"));
    }
    let rows = 2 * k + 1;
    let mut m = Mat::zeros(rows, rows + 2);
    for i in 0..rows {
        m[(i, i)] = T::one();
        m[(i, i + 1)] = T::of(-2.0);
        m[(i, i + 2)] = T::one();
    }
    Ok(m)
}

/// Calibrated regularization factor 46.81 N^-1.95 for an N-point window.
pub fn optimal_lambda(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::invalid(MODULE, format!("window point count {n} must be >= 3")));
    }
    Ok(46.81 * (n as f64).powf(-1.95))
}

/// Build the displacement-reconstruction filter for the given window.
///
/// Construction always runs in f64 regardless of `T`: the normal system's
/// conditioning scales like 1/lambda^2 and would shred f32. The finished
/// taps are down-converted.
pub fn build_fir<T: Scalar>(cfg: &FirConfig) -> Result<FirFilter<T>> {
    cfg.validate()?;
    let k = cfg.k;
    let n_rows = 2 * k + 1;
    let n_win = 2 * k + 3;
    let lambda = match cfg.lambda_override {
        Some(l) => l,
        None => optimal_lambda(n_win)?,
    };

    // A = L_c^T L_a^2 L_c + lambda^2 I, assembled from the 3-point stencil
    let w = cfg.weighting.diagonal(k);
    let mut a = Mat::<f64>::zeros(n_win, n_win);
    let stencil = [1.0, -2.0, 1.0];
    for r in 0..n_rows {
        let w2 = w[r] * w[r];
        for (di, &si) in stencil.iter().enumerate() {
            for (dj, &sj) in stencil.iter().enumerate() {
                a[(r + di, r + dj)] += w2 * si * sj;
            }
        }
    }
    a.add_diagonal(lambda * lambda);

    let chol = a.cholesky().map_err(|_| {
        Error::numeric(
            MODULE,
            format!("normal system not positive definite (k = {k}, lambda = {lambda})"),
        )
    })?;
    let mut e_center = vec![0.0f64; n_win];
    e_center[k + 1] = 1.0;
    let z = cholesky_solve(&chol, &e_center);

    // center row of (A^-1 L_c^T L_a^2)^T restricted to its 2k+1 support
    let mut raw = vec![0.0f64; n_rows];
    for i in 0..n_rows {
        raw[i] = w[i] * w[i] * (z[i] - 2.0 * z[i + 1] + z[i + 2]);
    }

    let mut c = vec![0.0f64; n_win];
    c[1..1 + n_rows].copy_from_slice(&raw);

    // Hann-shaped DC removal: the weights sum to exactly k+1, so the
    // corrected taps sum to zero in exact arithmetic.
    let dc = raw.iter().sum::<f64>() / (k + 1) as f64;
    for (j, cj) in c.iter_mut().enumerate() {
        let s = (std::f64::consts::PI * j as f64 / (2 * k + 2) as f64).sin();
        *cj -= dc * s * s;
    }

    // the exact solution is symmetric; halve the solver roundoff
    for j in 0..n_win / 2 {
        let avg = 0.5 * (c[j] + c[n_win - 1 - j]);
        c[j] = avg;
        c[n_win - 1 - j] = avg;
    }

    Ok(FirFilter {
        coeffs: c.into_iter().map(T::of).collect(),
        k,
        dt: cfg.dt,
        lambda_used: lambda,
    })
}

/// Apply the filter: convolve acceleration with the taps and scale by dt^2.
/// Output has the input's length; the first and last k+1 samples are zeroed
/// and flagged as warmup.
pub fn estimate_dynamic<T: Scalar>(
    accel: &TimeSeries<T>,
    filter: &FirFilter<T>,
) -> Result<TimeSeries<T>> {
    let rel = (accel.dt() - filter.dt).abs() / filter.dt;
    if rel > 1e-9 {
        return Err(Error::invalid(
            MODULE,
            format!(
                "sample interval mismatch: series dt {} vs filter dt {}",
                accel.dt(),
                filter.dt
            ),
        ));
    }
    let n = accel.len();
    let taps = filter.coeffs.len(); // 2k+3
    if n < taps {
        return Err(Error::invalid(
            MODULE,
            format!("input length {n} shorter than filter window {taps}"),
        ));
    }
    let k = filter.k;
    let dt2 = T::of(filter.dt * filter.dt);
    let x = accel.values();
    let mut out = vec![T::zero(); n];
    for (i, o) in out.iter_mut().enumerate().take(n - k - 1).skip(k + 1) {
        let base = i - (k + 1);
        let mut acc = T::zero();
        for (j, &cj) in filter.coeffs.iter().enumerate() {
            acc += cj * x[base + j];
        }
        *o = acc * dt2;
    }
    let warmup = accel.warmup().max(k + 1).min(n / 2);
    TimeSeries::new(accel.dt(), accel.t0(), out, SignalUnit::Displacement)?.with_warmup(warmup)
}
