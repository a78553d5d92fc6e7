//! Reference-free displacement estimation for pile-like structures.
//!
//! Two two-axis accelerometers, one near the pile head and one at ground
//! level, are enough to estimate the total transverse displacement at the
//! top without any fixed reference point. The trick is splitting the
//! motion by frequency:
//!
//! * the slow, pseudo-static part rides on gravity: each sensor's axis
//!   pair gives an inclination angle, and a beam model maps the two
//!   angles to a deflection ([`beam`], [`inclination`]);
//! * the fast, dynamic part is double-integrated from acceleration with a
//!   regularized FIR filter that stays finite where naive integration
//!   drifts ([`fir`]);
//! * the sum is the total estimate, scored against a reference when one
//!   exists ([`fusion`]).
//!
//! [`synth`] generates train-crossing events with exact ground truth, and
//! [`pipeline`] chains the whole thing end to end. Everything numeric is
//! generic over [`Scalar`] (`f32` or `f64`); the `*64`/`*32` aliases at
//! the crate root pick a concrete width.

// `!(x > 0.0)` guards are deliberate: unlike `x <= 0.0` they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beam;
pub mod error;
pub mod fir;
pub mod fusion;
pub mod inclination;
pub mod io;
pub mod linalg;
pub mod pipeline;
pub mod scalar;
pub mod series;
pub mod synth;

/// Standard gravity, m/s^2.
pub const STANDARD_GRAVITY: f64 = 9.80665;

pub use beam::{
    delta_1dof, delta_1dof_series, delta_2dof, delta_2dof_series, fixity_ratio,
    forward_cantilever, forward_pile, BeamSection, Fixity, PileGeometry,
};
pub use error::{Error, Result};
pub use fir::{
    build_fir, estimate_dynamic, optimal_lambda, second_difference_matrix, FirConfig, FirFilter,
    Weighting,
};
pub use fusion::{
    compare_methods, peak_error, peak_error_signed, pseudo_component_scores, rms_error,
    total_displacement, EstimationResult, ScoreRow,
};
pub use inclination::{
    angle_from_axes, angle_series, pseudo_static_angle, pseudo_static_angle_with,
    required_resolution, sma_window, ChannelPair, InclinationConfig, SensorLocation,
};
pub use io::{
    atomic_write_text, read_displacement_column, read_event, write_displacements, write_event,
};
pub use pipeline::{run_pipeline, run_pipeline_with, PipelineOptions, SmaMode};
pub use scalar::Scalar;
pub use series::{add, rms, sma_filter, subtract, SignalUnit, TimeSeries};
pub use synth::{
    builtin_catalog, generate_event, generate_event_opts, DynamicSpec, GenOptions,
    GenerationReport, GroundTruth, ProfileShape, SensorEventRecord, TrainEventSpec,
};

pub type TimeSeries64 = TimeSeries<f64>;
pub type TimeSeries32 = TimeSeries<f32>;
pub type FirFilter64 = FirFilter<f64>;
pub type FirFilter32 = FirFilter<f32>;
pub type ChannelPair64 = ChannelPair<f64>;
pub type ChannelPair32 = ChannelPair<f32>;
pub type PileGeometry64 = PileGeometry<f64>;
pub type PileGeometry32 = PileGeometry<f32>;
pub type BeamSection64 = BeamSection<f64>;
pub type BeamSection32 = BeamSection<f32>;
pub type SensorEventRecord64 = SensorEventRecord<f64>;
pub type SensorEventRecord32 = SensorEventRecord<f32>;
pub type EstimationResult64 = EstimationResult<f64>;
pub type EstimationResult32 = EstimationResult<f32>;
