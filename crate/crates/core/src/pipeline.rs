//! End-to-end estimation: record in, fused displacement estimate out.
//!
//! The chain is fixed: low-pass the top x-channel and subtract the trend
//! (keeps the gravity leak g*sin(theta1) out of the reconstruction band),
//! reconstruct the dynamic displacement with the regularized difference
//! filter, average the inclination angles, map angles to pseudo-static
//! deflection through the pile relations, and sum the parts.

use crate::beam::{delta_1dof_series, delta_2dof_series};
use crate::error::Result;
use crate::fir::{build_fir, estimate_dynamic, FirConfig};
use crate::fusion::{compare_methods, EstimationResult};
use crate::inclination::{
    angle_series, pseudo_static_angle_with, sma_window, InclinationConfig,
};
use crate::scalar::Scalar;
use crate::series::{sma_filter, subtract};
use crate::synth::SensorEventRecord;

/// Moving-average placement. Centered has zero phase lag; causal matches
/// hardware that can only look backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SmaMode {
    #[default]
    Centered,
    Causal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineOptions {
    pub sma_mode: SmaMode,
    /// Subtract the moving average from the top x-channel before the
    /// dynamic reconstruction. Without this the slow gravity-projection
    /// component bleeds through the filter's low-frequency tail and shows
    /// up as a phantom drift of several millimetres.
    pub precondition: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            sma_mode: SmaMode::Centered,
            precondition: true,
        }
    }
}

impl PipelineOptions {
    /// The original processing chain: causal averaging, raw accelerations
    /// into the filter.
    pub fn strict_paper() -> Self {
        PipelineOptions {
            sma_mode: SmaMode::Causal,
            precondition: false,
        }
    }
}

pub fn run_pipeline<T: Scalar>(
    record: &SensorEventRecord<T>,
    fir_cfg: &FirConfig,
    incl_cfg: &InclinationConfig,
) -> Result<EstimationResult<T>> {
    run_pipeline_with(record, fir_cfg, incl_cfg, &PipelineOptions::default())
}

pub fn run_pipeline_with<T: Scalar>(
    record: &SensorEventRecord<T>,
    fir_cfg: &FirConfig,
    incl_cfg: &InclinationConfig,
    opts: &PipelineOptions,
) -> Result<EstimationResult<T>> {
    incl_cfg.validate()?;
    let centered = opts.sma_mode == SmaMode::Centered;
    let n_sma = sma_window(record.sample_rate_hz, incl_cfg.cutoff_hz);

    // dynamic part from the top x-channel
    let ax_top = &record.top.ax;
    let dyn_input = if opts.precondition {
        let trend = sma_filter(ax_top, n_sma, centered)?;
        subtract(ax_top, &trend)?
    } else {
        ax_top.clone()
    };
    let filter = build_fir::<T>(fir_cfg)?;
    let dynamic = estimate_dynamic(&dyn_input, &filter)?;

    // pseudo-static part from the averaged inclination angles
    let theta1_raw = angle_series(&record.top)?;
    let theta2_raw = angle_series(&record.bottom)?;
    let theta1 = pseudo_static_angle_with(&theta1_raw, incl_cfg, centered)?;
    let theta2 = pseudo_static_angle_with(&theta2_raw, incl_cfg, centered)?;

    let pseudo_1dof = delta_1dof_series(&theta1, record.geometry.l_cantilever)?;
    let pseudo_2dof = delta_2dof_series(&theta1, &theta2, record.geometry.m)?;

    let mut result = EstimationResult::assemble(
        dynamic,
        pseudo_1dof,
        pseudo_2dof,
        record.reference.clone(),
    )?;
    if result.reference.is_some() {
        result.scores = Some(compare_methods(&result, "")?);
    }
    Ok(result)
}
