//! Flat JSON run configuration. Every key is optional; the defaults match
//! the lab setup the synthetic catalog was tuned against (0.447 m pile
//! segment, 256 Hz sampling, 0.5 Hz pseudo-static band).

use std::fs;
use std::path::Path;

use pilesway_core::{
    BeamSection, Error, FirConfig, GenOptions, InclinationConfig, PileGeometry, Result, Weighting,
    STANDARD_GRAVITY,
};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Sensor spacing: above-ground distance between the two pairs (m).
    pub m: f64,
    /// Below-ground embedded length (m); unset disables the forward model.
    pub h: Option<f64>,
    /// Cantilever length for the 1DOF formula (m); defaults to `m`.
    pub l: Option<f64>,

    /// Filter half-width; unset derives it from `target_period_s`.
    pub k: Option<usize>,
    pub lambda: Option<f64>,
    pub weighting: WeightingName,
    pub target_period_s: f64,

    pub g: f64,
    pub cutoff_hz: f64,

    /// Sampling rate for generated events (estimation reads it from the file).
    pub sample_rate_hz: f64,
    /// Overrides every catalog event's accelerometer noise when set (m/s^2).
    pub noise_sigma: Option<f64>,
    pub lvdt_sigma: f64,
    /// Simulate with theta2 = 0 (pile clamped at the lower sensor).
    pub fully_fixed: bool,
    /// Fraction of the top inertial signal leaked into the bottom channel.
    pub bottom_inertial_fraction: f64,

    /// Young's modulus (Pa), second moment (m^4), lateral load (N) for the
    /// forward model behind `simulate` and `bench`.
    pub section_e: f64,
    pub section_i: f64,
    pub section_p: f64,

    pub out_dir: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightingName {
    Identity,
    Hanning,
}

impl From<WeightingName> for Weighting {
    fn from(w: WeightingName) -> Weighting {
        match w {
            WeightingName::Identity => Weighting::Identity,
            WeightingName::Hanning => Weighting::Hanning,
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            m: 0.447,
            h: Some(0.447),
            l: None,
            k: None,
            lambda: None,
            weighting: WeightingName::Identity,
            target_period_s: 2.0,
            g: STANDARD_GRAVITY,
            cutoff_hz: 0.5,
            sample_rate_hz: 256.0,
            noise_sigma: None,
            lvdt_sigma: 2e-5,
            fully_fixed: false,
            bottom_inertial_fraction: 0.0,
            section_e: 1e9,
            section_i: 1e-5,
            section_p: 1e3,
            out_dir: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::format(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::format(format!("{}: {e}", path.display())))
    }

    pub fn geometry(&self) -> Result<PileGeometry<f64>> {
        let g = PileGeometry::new(self.m, self.h)?;
        match self.l {
            Some(l) => g.with_cantilever_len(l),
            None => Ok(g),
        }
    }

    pub fn section(&self) -> Result<BeamSection<f64>> {
        BeamSection::new(self.section_e, self.section_i, self.section_p)
    }

    pub fn fir_config(&self, dt: f64) -> FirConfig {
        let mut cfg = match self.k {
            Some(k) => FirConfig::with_k(k, dt),
            None => FirConfig::for_period(self.target_period_s, dt),
        };
        cfg.lambda_override = self.lambda;
        cfg.weighting = self.weighting.into();
        cfg
    }

    pub fn incl_config(&self) -> InclinationConfig {
        InclinationConfig {
            g: self.g,
            cutoff_hz: self.cutoff_hz,
        }
    }

    pub fn gen_options(&self) -> GenOptions {
        GenOptions {
            g: self.g,
            lvdt_sigma: self.lvdt_sigma,
            fully_fixed: self.fully_fixed,
            bottom_inertial_fraction: self.bottom_inertial_fraction,
        }
    }
}
