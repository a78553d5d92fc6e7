//! Euler-Bernoulli pile relations between tip load, rotations, and
//! transverse deflection.
//!
//! Two estimation models share these formulas. The 1DOF model treats the
//! pile as a fixed-base cantilever of length L and needs only the top
//! rotation. The 2DOF model admits a flexible support: a pile of
//! above-ground length m and embedded length h, lam = m/h, rotating at both
//! levels. Both invert to displacement from rotations alone; P, E, I cancel,
//! which is the whole point (no foundation model required).
//!
//! Sign convention: a positive tip load deflects in the positive direction
//! and rotates both levels negative.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{SignalUnit, TimeSeries};

const MODULE: &str = "beam";

/// Geometry of one pile: above-ground length m, optional embedded length h
/// (only the forward model needs it), and the cantilever length used by the
/// 1DOF estimate (defaults to m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PileGeometry<T: Scalar> {
    pub m: T,
    pub h: Option<T>,
    pub l_cantilever: T,
}

impl<T: Scalar> PileGeometry<T> {
    pub fn new(m: T, h: Option<T>) -> Result<Self> {
        if !(m > T::zero()) {
            return Err(Error::invalid(MODULE, format!("above-ground length m must be positive, got {m}")));
        }
        if let Some(h) = h {
            if !(h > T::zero()) {
                return Err(Error::invalid(MODULE, format!("embedded length h must be positive, got {h}")));
            }
        }
        Ok(PileGeometry {
            m,
            h,
            l_cantilever: m,
        })
    }

    pub fn with_cantilever_len(mut self, l: T) -> Result<Self> {
        if !(l > T::zero()) {
            return Err(Error::invalid(MODULE, format!("cantilever length must be positive, got {l}")));
        }
        self.l_cantilever = l;
        Ok(self)
    }

    /// Length ratio lam = m/h.
    pub fn lambda_len(&self) -> Option<T> {
        self.h.map(|h| self.m / h)
    }
}

/// Elastic section under a lateral tip load.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSection<T: Scalar> {
    /// Young's modulus, Pa
    pub e: T,
    /// Second moment of area, m^4
    pub i: T,
    /// Lateral load, N (any sign)
    pub p: T,
}

impl<T: Scalar> BeamSection<T> {
    pub fn new(e: T, i: T, p: T) -> Result<Self> {
        if !(e > T::zero()) {
            return Err(Error::invalid(MODULE, format!("Young's modulus must be positive, got {e}")));
        }
        if !(i > T::zero()) {
            return Err(Error::invalid(MODULE, format!("second moment must be positive, got {i}")));
        }
        Ok(BeamSection { e, i, p })
    }
}

/// 1DOF pseudo-static displacement from the top rotation of a fixed-base
/// cantilever: delta_p = -(2/3) theta1 L.
pub fn delta_1dof<T: Scalar>(theta1: T, l: T) -> Result<T> {
    if !(l > T::zero()) {
        return Err(Error::invalid(MODULE, format!("cantilever length must be positive, got {l}")));
    }
    Ok(-(T::of(2.0) * theta1 * l) / T::of(3.0))
}

/// 2DOF pseudo-static displacement from both rotations:
/// delta_p = -(2/3) theta1 m - (1/3) theta2 m. Independent of E, I, P, h.
pub fn delta_2dof<T: Scalar>(theta1: T, theta2: T, m: T) -> Result<T> {
    if !(m > T::zero()) {
        return Err(Error::invalid(MODULE, format!("above-ground length must be positive, got {m}")));
    }
    Ok(-((T::of(2.0) * theta1 + theta2) * m) / T::of(3.0))
}

pub fn delta_1dof_series<T: Scalar>(theta1: &TimeSeries<T>, l: T) -> Result<TimeSeries<T>> {
    if !(l > T::zero()) {
        return Err(Error::invalid(MODULE, format!("cantilever length must be positive, got {l}")));
    }
    let vals = theta1
        .values()
        .iter()
        .map(|&t| -(T::of(2.0) * t * l) / T::of(3.0))
        .collect();
    TimeSeries::new(theta1.dt(), theta1.t0(), vals, SignalUnit::Displacement)?
        .with_warmup(theta1.warmup())
}

pub fn delta_2dof_series<T: Scalar>(
    theta1: &TimeSeries<T>,
    theta2: &TimeSeries<T>,
    m: T,
) -> Result<TimeSeries<T>> {
    if !(m > T::zero()) {
        return Err(Error::invalid(MODULE, format!("above-ground length must be positive, got {m}")));
    }
    theta1.ensure_aligned(theta2, MODULE)?;
    let vals = theta1
        .values()
        .iter()
        .zip(theta2.values())
        .map(|(&t1, &t2)| -((T::of(2.0) * t1 + t2) * m) / T::of(3.0))
        .collect();
    TimeSeries::new(theta1.dt(), theta1.t0(), vals, SignalUnit::Displacement)?
        .with_warmup(theta1.warmup().max(theta2.warmup()))
}

/// Forward cantilever under tip load: (delta_p, theta1) =
/// (P L^3 / 3EI, -P L^2 / 2EI).
pub fn forward_cantilever<T: Scalar>(section: &BeamSection<T>, l: T) -> Result<(T, T)> {
    if !(section.e > T::zero() && section.i > T::zero()) {
        return Err(Error::invalid(MODULE, "section moduli must be positive"));
    }
    if !(l > T::zero()) {
        return Err(Error::invalid(MODULE, format!("cantilever length must be positive, got {l}")));
    }
    let ei = section.e * section.i;
    let delta = (section.p * l * l * l) / (T::of(3.0) * ei);
    let theta = -(section.p * l * l) / (T::of(2.0) * ei);
    Ok((delta, theta))
}

/// Forward partially fixed pile, lam = m/h:
/// delta_p = P m^2 h (1+lam) / 3EI,
/// theta1 = -P m h (2+3 lam) / 6EI,
/// theta2 = -P m h / 3EI.
pub fn forward_pile<T: Scalar>(
    section: &BeamSection<T>,
    geom: &PileGeometry<T>,
) -> Result<(T, T, T)> {
    let h = geom.h.ok_or_else(|| Error::MissingGeometry {
        message: "forward pile model needs the embedded length".into(),
    })?;
    if !(section.e > T::zero() && section.i > T::zero()) {
        return Err(Error::invalid(MODULE, "section moduli must be positive"));
    }
    if !(geom.m > T::zero() && h > T::zero()) {
        return Err(Error::invalid(MODULE, "pile lengths must be positive"));
    }
    let (m, p) = (geom.m, section.p);
    let lam = m / h;
    let ei = section.e * section.i;
    let delta = (p * m * m * h * (T::one() + lam)) / (T::of(3.0) * ei);
    let theta1 = -(p * m * h * (T::of(2.0) + T::of(3.0) * lam)) / (T::of(6.0) * ei);
    let theta2 = -(p * m * h) / (T::of(3.0) * ei);
    Ok((delta, theta1, theta2))
}

/// Degree of fixity inferred from a rotation pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fixity<T: Scalar> {
    /// lam = m/h recovered as (2/3)(theta1/theta2 - 1).
    Ratio(T),
    /// theta2 is negligible against theta1: base behaves fixed (h -> 0).
    FullyFixed,
}

/// Invert the rotation pair to the length ratio. Rotations of one common
/// sign only; a vanishing theta2 reports [`Fixity::FullyFixed`] rather than
/// an unbounded ratio.
pub fn fixity_ratio<T: Scalar>(theta1: T, theta2: T) -> Result<Fixity<T>> {
    if theta1 == T::zero() && theta2 == T::zero() {
        return Err(Error::invalid(
            MODULE,
            "both rotations zero: fixity undetermined",
        ));
    }
    if theta2.abs() < T::of(1e-9) * theta1.abs() {
        return Ok(Fixity::FullyFixed);
    }
    if theta1 == T::zero() || (theta1 > T::zero()) != (theta2 > T::zero()) {
        return Err(Error::ModelViolation {
            message: format!(
                "rotations disagree in sign (theta1 = {theta1}, theta2 = {theta2}); outside the single-load regime"
            ),
        });
    }
    Ok(Fixity::Ratio(
        (T::of(2.0) * (theta1 / theta2 - T::one())) / T::of(3.0),
    ))
}
