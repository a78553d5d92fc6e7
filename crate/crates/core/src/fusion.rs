//! Superposition of the dynamic and pseudo-static estimates and the two
//! error indexes used to score them against a reference.
//!
//! E1 compares absolute peaks, E2 compares RMS of the residual to RMS of
//! the reference. Both are reported as nonnegative fractions; warmup edges
//! are excluded on both sides.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{add, sma_filter, TimeSeries};

const MODULE: &str = "fusion";

/// One comparison row: peak and RMS error for each model, as fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub event_id: String,
    pub e1_1dof: f64,
    pub e1_2dof: f64,
    pub e2_1dof: f64,
    pub e2_2dof: f64,
}

impl ScoreRow {
    pub const CSV_HEADER: &'static str = "event,E1_1DOF,E1_2DOF,E2_1DOF,E2_2DOF";

    /// One CSV line, percentages at one decimal.
    pub fn csv_line(&self) -> String {
        format!(
            "{},{:.1},{:.1},{:.1},{:.1}",
            self.event_id,
            self.e1_1dof * 100.0,
            self.e1_2dof * 100.0,
            self.e2_1dof * 100.0,
            self.e2_2dof * 100.0
        )
    }
}

/// Full output of one pipeline run. `total_*` are built as dynamic +
/// pseudo_* by [`EstimationResult::assemble`]; scores are present when a
/// reference is.
#[derive(Debug, Clone)]
pub struct EstimationResult<T: Scalar> {
    pub dynamic: TimeSeries<T>,
    pub pseudo_1dof: TimeSeries<T>,
    pub pseudo_2dof: TimeSeries<T>,
    pub total_1dof: TimeSeries<T>,
    pub total_2dof: TimeSeries<T>,
    pub reference: Option<TimeSeries<T>>,
    pub scores: Option<ScoreRow>,
}

impl<T: Scalar> EstimationResult<T> {
    /// Build the totals from components; scores stay empty until
    /// [`compare_methods`] fills them.
    pub fn assemble(
        dynamic: TimeSeries<T>,
        pseudo_1dof: TimeSeries<T>,
        pseudo_2dof: TimeSeries<T>,
        reference: Option<TimeSeries<T>>,
    ) -> Result<Self> {
        let total_1dof = total_displacement(&dynamic, &pseudo_1dof)?;
        let total_2dof = total_displacement(&dynamic, &pseudo_2dof)?;
        if let Some(r) = &reference {
            dynamic.ensure_aligned(r, MODULE)?;
        }
        Ok(EstimationResult {
            dynamic,
            pseudo_1dof,
            pseudo_2dof,
            total_1dof,
            total_2dof,
            reference,
            scores: None,
        })
    }
}

/// Total displacement: sample-wise dynamic + pseudo-static.
pub fn total_displacement<T: Scalar>(
    dynamic: &TimeSeries<T>,
    pseudo: &TimeSeries<T>,
) -> Result<TimeSeries<T>> {
    add(dynamic, pseudo)
}

fn scored_slices<'a, T: Scalar>(
    est: &'a TimeSeries<T>,
    meas: &'a TimeSeries<T>,
) -> Result<(&'a [T], &'a [T])> {
    est.ensure_aligned(meas, MODULE)?;
    let w = est.warmup().max(meas.warmup());
    let n = est.len();
    if 2 * w >= n {
        return Err(Error::UndefinedMetric {
            message: format!("warmup {w} leaves no samples of {n} to score"),
        });
    }
    Ok((&est.values()[w..n - w], &meas.values()[w..n - w]))
}

fn peak<T: Scalar>(xs: &[T]) -> f64 {
    xs.iter().fold(0.0f64, |acc, x| acc.max(x.as_f64().abs()))
}

/// E1: relative error of absolute peaks, |max|est| - max|meas|| / max|meas|.
/// Reported as an absolute value; see [`peak_error_signed`] for the sign.
pub fn peak_error<T: Scalar>(est: &TimeSeries<T>, meas: &TimeSeries<T>) -> Result<f64> {
    peak_error_signed(est, meas).map(f64::abs)
}

/// E1 with the sign kept: negative means the estimate under-peaks.
pub fn peak_error_signed<T: Scalar>(est: &TimeSeries<T>, meas: &TimeSeries<T>) -> Result<f64> {
    let (e, m) = scored_slices(est, meas)?;
    let pm = peak(m);
    if pm == 0.0 {
        return Err(Error::UndefinedMetric {
            message: "reference peak is zero".into(),
        });
    }
    Ok((peak(e) - pm) / pm)
}

/// E2: rms(est - meas) / rms(meas) over the scored region.
pub fn rms_error<T: Scalar>(est: &TimeSeries<T>, meas: &TimeSeries<T>) -> Result<f64> {
    let (e, m) = scored_slices(est, meas)?;
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for (x, y) in e.iter().zip(m) {
        let d = x.as_f64() - y.as_f64();
        num += d * d;
        den += y.as_f64() * y.as_f64();
    }
    if den == 0.0 {
        return Err(Error::UndefinedMetric {
            message: "reference RMS is zero".into(),
        });
    }
    Ok((num / den).sqrt())
}

/// Score both totals against the reference and fill a [`ScoreRow`].
pub fn compare_methods<T: Scalar>(
    result: &EstimationResult<T>,
    event_id: impl Into<String>,
) -> Result<ScoreRow> {
    let reference = result.reference.as_ref().ok_or_else(|| {
        Error::invalid(MODULE, "compare_methods needs a reference displacement")
    })?;
    Ok(ScoreRow {
        event_id: event_id.into(),
        e1_1dof: peak_error(&result.total_1dof, reference)?,
        e1_2dof: peak_error(&result.total_2dof, reference)?,
        e2_1dof: rms_error(&result.total_1dof, reference)?,
        e2_2dof: rms_error(&result.total_2dof, reference)?,
    })
}

/// Pseudo-static-only diagnostic: E2 of each pseudo-static estimate against
/// the reference's own pseudo-static part, extracted with an n-sample
/// centered SMA (the same correction applied to the wired sensor in the
/// source experiment). Returns (e2_pseudo_1dof, e2_pseudo_2dof).
pub fn pseudo_component_scores<T: Scalar>(
    result: &EstimationResult<T>,
    n_sma: usize,
) -> Result<(f64, f64)> {
    let reference = result.reference.as_ref().ok_or_else(|| {
        Error::invalid(MODULE, "pseudo-static diagnostic needs a reference")
    })?;
    let ref_pseudo = sma_filter(reference, n_sma, true)?;
    Ok((
        rms_error(&result.pseudo_1dof, &ref_pseudo)?,
        rms_error(&result.pseudo_2dof, &ref_pseudo)?,
    ))
}
