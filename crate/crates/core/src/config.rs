//! Radar system configuration and derived quantities.
//!
//! `RadarConfig` holds the immutable radar/system parameters shared by every
//! processing stage. Defaults match a 77 GHz FMCW sensor with 4 GHz sweep
//! bandwidth, 64 chirps per frame, 128 samples per chirp, four receive
//! antennas, and a 10 ms frame time (100 Hz slow-time rate).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Immutable radar and acquisition parameters.
///
/// All processing stages read from a shared `RadarConfig`; none mutate it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadarConfig {
    /// Carrier center frequency in Hz.
    pub center_frequency_hz: f64,
    /// Frequency sweep bandwidth in Hz.
    pub bandwidth_hz: f64,
    /// Duration of one chirp in seconds.
    pub chirp_duration_s: f64,
    /// ADC sample rate in samples per second.
    pub sample_rate_sps: f64,
    /// Number of frames in a capture.
    pub num_frames: usize,
    /// Number of receive antennas.
    pub num_rx: usize,
    /// Chirps per frame (slow-time samples within a frame).
    pub chirps_per_frame: usize,
    /// ADC samples per chirp (fast-time samples).
    pub samples_per_chirp: usize,
    /// Frame repetition time in seconds.
    pub frame_time_s: f64,
    /// Range FFT size after zero-padding; power of two, >= samples_per_chirp.
    pub range_fft_size: usize,
    /// Receive element pitch in units of the carrier wavelength.
    pub antenna_spacing_wavelengths: f64,
}

impl Default for RadarConfig {
    fn default() -> Self {
        Self {
            center_frequency_hz: 77.0e9,
            bandwidth_hz: 4.0e9,
            chirp_duration_s: 40.0e-6,
            sample_rate_sps: 3.6e6,
            num_frames: 1000,
            num_rx: 4,
            chirps_per_frame: 64,
            samples_per_chirp: 128,
            frame_time_s: 10.0e-3,
            range_fft_size: 256,
            antenna_spacing_wavelengths: 0.5,
        }
    }
}

/// Quantities derived from a [`RadarConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedQuantities {
    /// Carrier wavelength in meters.
    pub wavelength_m: f64,
    /// Chirp slope bandwidth/chirp_duration in Hz/s.
    pub chirp_rate_hz_per_s: f64,
    /// Range resolution c/(2B) in meters.
    pub range_resolution_m: f64,
    /// Range spacing of one FFT bin in meters.
    pub range_bin_spacing_m: f64,
    /// Doppler spacing of one FFT bin in Hz (back-to-back chirps assumed).
    pub doppler_bin_spacing_hz: f64,
    /// Slow-time (frame) rate in Hz.
    pub slow_time_rate_hz: f64,
}

/// Compute the derived radar quantities for a validated configuration.
pub fn derive_quantities(config: &RadarConfig) -> Result<DerivedQuantities> {
    config.validate()?;
    let chirp_rate = config.bandwidth_hz / config.chirp_duration_s;
    Ok(DerivedQuantities {
        wavelength_m: SPEED_OF_LIGHT / config.center_frequency_hz,
        chirp_rate_hz_per_s: chirp_rate,
        range_resolution_m: SPEED_OF_LIGHT / (2.0 * config.bandwidth_hz),
        range_bin_spacing_m: SPEED_OF_LIGHT * config.sample_rate_sps
            / (2.0 * chirp_rate * config.range_fft_size as f64),
        doppler_bin_spacing_hz: 1.0
            / (config.chirps_per_frame as f64 * config.chirp_duration_s),
        slow_time_rate_hz: 1.0 / config.frame_time_s,
    })
}

impl RadarConfig {
    /// Check the structural invariants; all counts >= 1, all real
    /// parameters > 0, range FFT size a power of two not smaller than the
    /// chirp length.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("center_frequency_hz", self.center_frequency_hz),
            ("bandwidth_hz", self.bandwidth_hz),
            ("chirp_duration_s", self.chirp_duration_s),
            ("sample_rate_sps", self.sample_rate_sps),
            ("frame_time_s", self.frame_time_s),
            ("antenna_spacing_wavelengths", self.antenna_spacing_wavelengths),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::config(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        let counts = [
            ("num_frames", self.num_frames),
            ("num_rx", self.num_rx),
            ("chirps_per_frame", self.chirps_per_frame),
            ("samples_per_chirp", self.samples_per_chirp),
            ("range_fft_size", self.range_fft_size),
        ];
        for (name, v) in counts {
            if v < 1 {
                return Err(Error::config(format!("{name} must be >= 1")));
            }
        }
        if self.range_fft_size < self.samples_per_chirp {
            return Err(Error::config(format!(
                "range_fft_size {} < samples_per_chirp {}",
                self.range_fft_size, self.samples_per_chirp
            )));
        }
        if !self.range_fft_size.is_power_of_two() {
            return Err(Error::config(format!(
                "range_fft_size {} is not a power of two",
                self.range_fft_size
            )));
        }
        Ok(())
    }

    /// Quantities derived from this configuration.
    pub fn derived(&self) -> Result<DerivedQuantities> {
        derive_quantities(self)
    }

    /// Number of complex samples in one frame.
    pub fn samples_per_frame(&self) -> usize {
        self.num_rx * self.chirps_per_frame * self.samples_per_chirp
    }

    /// Load a configuration from a TOML file. Missing keys fall back to the
    /// defaults; unknown keys are rejected.
    pub fn from_toml_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
            Error::config(format!("cannot read {}: {e}", path.as_ref().display()))
        })?;
        Self::from_toml_str(&text)
    }

    /// Parse a configuration from TOML text.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RadarConfig =
            toml::from_str(text).map_err(|e| Error::config(format!("config parse: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Serialize to TOML text.
    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("RadarConfig serializes to TOML")
    }

    /// FNV-1a hash over the fields that determine the raw-capture geometry
    /// and physics (processing knobs like the FFT size are excluded, so
    /// re-processing a capture with a different FFT size still matches its
    /// sidecar).
    pub fn capture_hash(&self) -> u64 {
        let canon = format!(
            "fc={:.6e};bw={:.6e};tc={:.6e};fs={:.6e};nf={};nrx={};nc={};ns={};ft={:.6e}",
            self.center_frequency_hz,
            self.bandwidth_hz,
            self.chirp_duration_s,
            self.sample_rate_sps,
            self.num_frames,
            self.num_rx,
            self.chirps_per_frame,
            self.samples_per_chirp,
            self.frame_time_s,
        );
        fnv1a64(canon.as_bytes())
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
