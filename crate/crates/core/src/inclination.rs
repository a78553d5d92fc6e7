//! Inclination angles from two-axis accelerometer channels.
//!
//! With the x axis along the motion direction and the y axis along gravity
//! at rest, a tilt theta projects gravity as ax = g sin(theta),
//! ay = g cos(theta). The ratio form atan2(ax, ay) recovers theta without
//! knowing g or the sensor scale. Smoothing the per-sample angle with a
//! moving average whose -3 dB point sits at the band edge (default 0.5 Hz)
//! separates the pseudo-static component from vibration.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{sma_filter, SignalUnit, TimeSeries};

const MODULE: &str = "inclination";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensorLocation {
    Top,
    Bottom,
}

impl std::fmt::Display for SensorLocation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SensorLocation::Top => "top",
            SensorLocation::Bottom => "bottom",
        })
    }
}

/// One two-axis accelerometer: ax along the motion axis, ay along gravity
/// at rest. Channels must be aligned.
#[derive(Debug, Clone)]
pub struct ChannelPair<T: Scalar> {
    pub ax: TimeSeries<T>,
    pub ay: TimeSeries<T>,
    pub location: SensorLocation,
}

impl<T: Scalar> ChannelPair<T> {
    pub fn new(ax: TimeSeries<T>, ay: TimeSeries<T>, location: SensorLocation) -> Result<Self> {
        ax.ensure_aligned(&ay, MODULE)?;
        if ax.unit() != SignalUnit::Accel {
            return Err(Error::invalid(
                MODULE,
                format!("channel pair expects acceleration, got {}", ax.unit()),
            ));
        }
        Ok(ChannelPair { ax, ay, location })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InclinationConfig {
    /// m/s^2
    pub g: f64,
    /// Pseudo-static band edge (Hz); the SMA's -3 dB point lands here.
    pub cutoff_hz: f64,
}

impl Default for InclinationConfig {
    fn default() -> Self {
        InclinationConfig {
            g: crate::STANDARD_GRAVITY,
            cutoff_hz: 0.5,
        }
    }
}

impl InclinationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.g > 0.0) || !self.g.is_finite() {
            return Err(Error::invalid(MODULE, format!("g must be positive, got {}", self.g)));
        }
        if !(self.cutoff_hz > 0.0) || !self.cutoff_hz.is_finite() {
            return Err(Error::invalid(
                MODULE,
                format!("cutoff must be positive, got {} Hz", self.cutoff_hz),
            ));
        }
        Ok(())
    }
}

/// SMA window length placing the -3 dB point at `cutoff_hz`:
/// n = round(0.443 fs / fc).
pub fn sma_window(sample_rate_hz: f64, cutoff_hz: f64) -> usize {
    ((0.443 * sample_rate_hz / cutoff_hz).round() as usize).max(1)
}

/// Tilt angle from one sample pair: theta = atan2(ax, ay), scale-invariant
/// in (ax, ay). Restricted to (-pi/2, pi/2) while ay > 0.
pub fn angle_from_axes<T: Scalar>(ax: T, ay: T) -> Result<T> {
    if ax == T::zero() && ay == T::zero() {
        return Err(Error::invalid(
            MODULE,
            "undefined orientation: ax = ay = 0",
        ));
    }
    Ok(ax.atan2(ay))
}

/// Per-sample total inclination angle of a channel pair.
pub fn angle_series<T: Scalar>(pair: &ChannelPair<T>) -> Result<TimeSeries<T>> {
    let ax = pair.ax.values();
    let ay = pair.ay.values();
    let mut out = Vec::with_capacity(ax.len());
    for i in 0..ax.len() {
        if ax[i] == T::zero() && ay[i] == T::zero() {
            return Err(Error::UndefinedOrientation { index: i });
        }
        out.push(ax[i].atan2(ay[i]));
    }
    let warmup = pair.ax.warmup().max(pair.ay.warmup());
    TimeSeries::new(pair.ax.dt(), pair.ax.t0(), out, SignalUnit::Angle)?.with_warmup(warmup)
}

/// Pseudo-static component of a total-angle series: moving average with the
/// window from [`sma_window`], centered.
pub fn pseudo_static_angle<T: Scalar>(
    theta_t: &TimeSeries<T>,
    cfg: &InclinationConfig,
) -> Result<TimeSeries<T>> {
    pseudo_static_angle_with(theta_t, cfg, true)
}

/// As [`pseudo_static_angle`] but with selectable SMA mode (causal replays
/// the published filter exactly; it lags by half a window).
pub fn pseudo_static_angle_with<T: Scalar>(
    theta_t: &TimeSeries<T>,
    cfg: &InclinationConfig,
    centered: bool,
) -> Result<TimeSeries<T>> {
    cfg.validate()?;
    let fs = theta_t.sample_rate_hz();
    if cfg.cutoff_hz >= 0.5 * fs {
        return Err(Error::invalid(
            MODULE,
            format!("cutoff {} Hz at or above Nyquist ({} Hz)", cfg.cutoff_hz, 0.5 * fs),
        ));
    }
    let n = sma_window(fs, cfg.cutoff_hz);
    if n > theta_t.len() {
        return Err(Error::invalid(
            MODULE,
            format!(
                "SMA window {} exceeds series length {}; record longer or raise cutoff_hz",
                n,
                theta_t.len()
            ),
        ));
    }
    sma_filter(theta_t, n, centered)
}

/// Minimum accelerometer resolution (m/s^2) needed to tell a tilt of
/// N_angle from N_angle + P_angle: g (sin(N + P) - sin N).
pub fn required_resolution<T: Scalar>(n_angle: T, p_angle: T, g: T) -> Result<T> {
    if p_angle <= T::zero() {
        return Err(Error::invalid(
            MODULE,
            format!("angle increment must be positive, got {p_angle}"),
        ));
    }
    Ok(g * ((n_angle + p_angle).sin() - n_angle.sin()))
}
