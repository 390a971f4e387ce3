//! Range-Doppler processing: windowed range FFT with zero-padding, windowed
//! Doppler FFT across chirps, and a centered (FFT-shifted) Doppler axis.
//!
//! Two entry points exist for the same math:
//! - the whole-capture operations [`range_fft`] / [`doppler_fft`] working on
//!   in-memory cubes, and
//! - [`RdProcessor::process_frame`] producing one [`RdFrame`] at a time for
//!   the streaming pipeline, plus [`SelectiveRd`] which evaluates only a few
//!   range bins of interest (used when re-streaming a capture to extract
//!   energy along known trajectories).

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::config::RadarConfig;
use crate::cube::{DataCube, FrameData};
use crate::error::{Error, Result};

/// Symmetric Hanning window, `w[n] = 0.5*(1 - cos(2*pi*n/(N-1)))`, endpoints
/// zero. `N = 1` degenerates to `[1.0]`.
pub fn hanning(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    (0..n)
        .map(|i| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64).cos()))
        .collect()
}

/// Cyclic shift that moves bin 0 to index `n/2`, centering zero frequency.
pub fn fftshift(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (k, &v) in x.iter().enumerate() {
        out[(k + n / 2) % n] = v;
    }
    out
}

/// Complex range profiles `[frame][rx][chirp][range_bin]`.
#[derive(Debug, Clone)]
pub struct RangeProfileStack {
    pub config: RadarConfig,
    pub data: Vec<Complex64>,
}

impl RangeProfileStack {
    #[inline]
    pub fn index(&self, frame: usize, rx: usize, chirp: usize, bin: usize) -> usize {
        ((frame * self.config.num_rx + rx) * self.config.chirps_per_frame + chirp)
            * self.config.range_fft_size
            + bin
    }

    pub fn profile(&self, frame: usize, rx: usize, chirp: usize) -> &[Complex64] {
        let s = self.index(frame, rx, chirp, 0);
        &self.data[s..s + self.config.range_fft_size]
    }
}

/// One frame of range-Doppler maps, `[rx][doppler][range]`, Doppler centered.
#[derive(Debug, Clone)]
pub struct RdFrame {
    pub num_rx: usize,
    pub doppler_bins: usize,
    pub range_bins: usize,
    pub data: Vec<Complex64>,
}

impl RdFrame {
    #[inline]
    pub fn index(&self, rx: usize, doppler: usize, range: usize) -> usize {
        (rx * self.doppler_bins + doppler) * self.range_bins + range
    }

    #[inline]
    pub fn value(&self, rx: usize, doppler: usize, range: usize) -> Complex64 {
        self.data[self.index(rx, doppler, range)]
    }

    /// Magnitude-squared map summed over antennas (non-coherent integration),
    /// `[doppler][range]` row-major.
    pub fn power_map(&self) -> Vec<f64> {
        let mut map = vec![0.0; self.doppler_bins * self.range_bins];
        for rx in 0..self.num_rx {
            let base = rx * self.doppler_bins * self.range_bins;
            for (m, v) in map.iter_mut().zip(&self.data[base..base + map.len()]) {
                *m += v.norm_sqr();
            }
        }
        map
    }

    /// Antenna snapshot vector at one cell.
    pub fn snapshot(&self, doppler: usize, range: usize) -> Vec<Complex64> {
        (0..self.num_rx).map(|rx| self.value(rx, doppler, range)).collect()
    }
}

/// Range-Doppler maps for a whole capture.
#[derive(Debug, Clone)]
pub struct RangeDopplerStack {
    pub config: RadarConfig,
    pub frames: Vec<RdFrame>,
}

impl RangeDopplerStack {
    pub fn frame(&self, f: usize) -> &RdFrame {
        &self.frames[f]
    }

    /// Zero-Doppler row index after the shift.
    pub fn center_doppler(&self) -> usize {
        self.config.chirps_per_frame / 2
    }
}

/// Planned FFTs plus window tables for one configuration.
pub struct RdProcessor {
    config: RadarConfig,
    fft_range: Arc<dyn Fft<f64>>,
    fft_doppler: Arc<dyn Fft<f64>>,
    window_fast: Vec<f64>,
    window_slow: Vec<f64>,
}

impl RdProcessor {
    pub fn new(config: &RadarConfig) -> Result<Self> {
        config.validate()?;
        let mut planner = FftPlanner::new();
        Ok(Self {
            config: config.clone(),
            fft_range: planner.plan_fft_forward(config.range_fft_size),
            fft_doppler: planner.plan_fft_forward(config.chirps_per_frame),
            window_fast: hanning(config.samples_per_chirp),
            window_slow: hanning(config.chirps_per_frame),
        })
    }

    pub fn config(&self) -> &RadarConfig {
        &self.config
    }

    /// Range FFT of one chirp: window, zero-pad, unnormalized forward FFT.
    pub fn range_fft_chirp(&self, samples: &[Complex64], out: &mut [Complex64], scratch: &mut [Complex64]) {
        debug_assert_eq!(samples.len(), self.config.samples_per_chirp);
        debug_assert_eq!(out.len(), self.config.range_fft_size);
        for v in out.iter_mut() {
            *v = Complex64::new(0.0, 0.0);
        }
        for (o, (s, w)) in out.iter_mut().zip(samples.iter().zip(&self.window_fast)) {
            *o = s * w;
        }
        self.fft_range.process_with_scratch(out, scratch);
    }

    /// Full range-Doppler processing of one frame.
    pub fn process_frame(&self, frame: &FrameData) -> RdFrame {
        let nrx = self.config.num_rx;
        let nc = self.config.chirps_per_frame;
        let nfft = self.config.range_fft_size;
        let mut scratch =
            vec![
                Complex64::new(0.0, 0.0);
                self.fft_range.get_inplace_scratch_len().max(self.fft_doppler.get_inplace_scratch_len())
            ];
        let mut rd = RdFrame {
            num_rx: nrx,
            doppler_bins: nc,
            range_bins: nfft,
            data: vec![Complex64::new(0.0, 0.0); nrx * nc * nfft],
        };
        // Range FFT per chirp into a [chirp][range] workspace per antenna,
        // then Doppler FFT down each range column with the shift applied on
        // write-out.
        let mut profiles = vec![Complex64::new(0.0, 0.0); nc * nfft];
        let mut column = vec![Complex64::new(0.0, 0.0); nc];
        for rx in 0..nrx {
            for c in 0..nc {
                let row = &mut profiles[c * nfft..(c + 1) * nfft];
                for v in row.iter_mut() {
                    *v = Complex64::new(0.0, 0.0);
                }
                for (o, (s, w)) in
                    row.iter_mut().zip(frame.chirp(rx, c).iter().zip(&self.window_fast))
                {
                    *o = s * w;
                }
                self.fft_range.process_with_scratch(row, &mut scratch);
            }
            for r in 0..nfft {
                for c in 0..nc {
                    column[c] = profiles[c * nfft + r] * self.window_slow[c];
                }
                self.fft_doppler.process_with_scratch(&mut column, &mut scratch);
                for (k, &v) in column.iter().enumerate() {
                    let d = (k + nc / 2) % nc;
                    rd.data[rd.index(rx, d, r)] = v;
                }
            }
        }
        rd
    }
}

/// Windowed range FFT with zero-padding for every (frame, rx, chirp). The
/// output stays complex; no magnitude is taken.
pub fn range_fft(cube: &DataCube) -> Result<RangeProfileStack> {
    cube.config.validate()?;
    let proc = RdProcessor::new(&cube.config)?;
    let cfg = &cube.config;
    let mut stack = RangeProfileStack {
        config: cfg.clone(),
        data: vec![
            Complex64::new(0.0, 0.0);
            cfg.num_frames * cfg.num_rx * cfg.chirps_per_frame * cfg.range_fft_size
        ],
    };
    let mut scratch = vec![Complex64::new(0.0, 0.0); proc.fft_range.get_inplace_scratch_len()];
    for f in 0..cfg.num_frames {
        let fd = cube.frame_data(f);
        for rx in 0..cfg.num_rx {
            for c in 0..cfg.chirps_per_frame {
                let s = stack.index(f, rx, c, 0);
                let out = &mut stack.data[s..s + cfg.range_fft_size];
                // Inline to reuse stack storage directly.
                for v in out.iter_mut() {
                    *v = Complex64::new(0.0, 0.0);
                }
                for (o, (x, w)) in
                    out.iter_mut().zip(fd.chirp(rx, c).iter().zip(&proc.window_fast))
                {
                    *o = x * w;
                }
                proc.fft_range.process_with_scratch(out, &mut scratch);
            }
        }
    }
    Ok(stack)
}

/// Windowed Doppler FFT along the chirp axis with the zero-Doppler bin
/// centered by an FFT shift.
pub fn doppler_fft(profiles: &RangeProfileStack) -> Result<RangeDopplerStack> {
    let cfg = profiles.config.clone();
    let nc = cfg.chirps_per_frame;
    let nfft = cfg.range_fft_size;
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(nc);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let window = hanning(nc);
    let mut frames = Vec::with_capacity(cfg.num_frames);
    let mut column = vec![Complex64::new(0.0, 0.0); nc];
    for f in 0..cfg.num_frames {
        let mut rd = RdFrame {
            num_rx: cfg.num_rx,
            doppler_bins: nc,
            range_bins: nfft,
            data: vec![Complex64::new(0.0, 0.0); cfg.num_rx * nc * nfft],
        };
        for rx in 0..cfg.num_rx {
            for r in 0..nfft {
                for c in 0..nc {
                    column[c] = profiles.data[profiles.index(f, rx, c, r)] * window[c];
                }
                fft.process_with_scratch(&mut column, &mut scratch);
                for (k, &v) in column.iter().enumerate() {
                    let d = (k + nc / 2) % nc;
                    rd.data[rd.index(rx, d, r)] = v;
                }
            }
        }
        frames.push(rd);
    }
    Ok(RangeDopplerStack { config: cfg, frames })
}

/// Range-Doppler values for a small set of range bins only.
///
/// Precomputes windowed DFT twiddles per requested bin so the per-frame cost
/// is `O(num_rx * chirps * bins * samples)` instead of a full FFT map. Used
/// by the extraction pass, which only needs narrow windows around tracked
/// targets.
pub struct SelectiveRd {
    config: RadarConfig,
    bins: Vec<usize>,
    twiddles: Vec<Vec<Complex64>>,
    fft_doppler: Arc<dyn Fft<f64>>,
    window_slow: Vec<f64>,
}

/// Output of [`SelectiveRd::process_frame`]: `[rx][doppler][selected bin]`.
#[derive(Debug, Clone)]
pub struct RdCellsFrame {
    pub range_bins: Vec<usize>,
    pub num_rx: usize,
    pub doppler_bins: usize,
    pub data: Vec<Complex64>,
}

impl RdCellsFrame {
    pub fn bin_index(&self, range_bin: usize) -> Option<usize> {
        self.range_bins.binary_search(&range_bin).ok()
    }

    #[inline]
    pub fn value_at(&self, rx: usize, doppler: usize, bin_index: usize) -> Complex64 {
        self.data[(rx * self.doppler_bins + doppler) * self.range_bins.len() + bin_index]
    }
}

impl SelectiveRd {
    pub fn new(config: &RadarConfig, mut range_bins: Vec<usize>) -> Result<Self> {
        config.validate()?;
        range_bins.sort_unstable();
        range_bins.dedup();
        if range_bins.iter().any(|&b| b >= config.range_fft_size) {
            return Err(Error::data("selected range bin outside FFT size".to_string()));
        }
        let window = hanning(config.samples_per_chirp);
        let nfft = config.range_fft_size as f64;
        let twiddles = range_bins
            .iter()
            .map(|&k| {
                (0..config.samples_per_chirp)
                    .map(|n| {
                        let ph = -2.0 * std::f64::consts::PI * (k as f64) * (n as f64) / nfft;
                        Complex64::new(ph.cos(), ph.sin()) * window[n]
                    })
                    .collect()
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            config: config.clone(),
            bins: range_bins,
            twiddles,
            fft_doppler: planner.plan_fft_forward(config.chirps_per_frame),
            window_slow: hanning(config.chirps_per_frame),
        })
    }

    pub fn process_frame(&self, frame: &FrameData) -> RdCellsFrame {
        let nrx = self.config.num_rx;
        let nc = self.config.chirps_per_frame;
        let nb = self.bins.len();
        let mut out = RdCellsFrame {
            range_bins: self.bins.clone(),
            num_rx: nrx,
            doppler_bins: nc,
            data: vec![Complex64::new(0.0, 0.0); nrx * nc * nb],
        };
        let mut scratch =
            vec![Complex64::new(0.0, 0.0); self.fft_doppler.get_inplace_scratch_len()];
        let mut column = vec![Complex64::new(0.0, 0.0); nc];
        for rx in 0..nrx {
            for (bi, tw) in self.twiddles.iter().enumerate() {
                for c in 0..nc {
                    let samples = frame.chirp(rx, c);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (s, t) in samples.iter().zip(tw) {
                        acc += s * t;
                    }
                    column[c] = acc * self.window_slow[c];
                }
                self.fft_doppler.process_with_scratch(&mut column, &mut scratch);
                for (k, &v) in column.iter().enumerate() {
                    let d = (k + nc / 2) % nc;
                    out.data[(rx * nc + d) * nb + bi] = v;
                }
            }
        }
        out
    }
}

/// Write one frame's antenna-summed magnitude map as CSV (`doppler_bin` rows,
/// `range_bin` columns) for external plotting.
pub fn dump_rd_frame_csv(rd: &RdFrame, path: impl AsRef<std::path::Path>) -> Result<()> {
    let map = rd.power_map();
    let mut text = String::new();
    for d in 0..rd.doppler_bins {
        let row: Vec<String> = (0..rd.range_bins)
            .map(|r| format!("{:.6e}", map[d * rd.range_bins + r].sqrt()))
            .collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RadarConfig;

    fn test_config(frames: usize) -> RadarConfig {
        RadarConfig {
            num_frames: frames,
            num_rx: 2,
            chirps_per_frame: 16,
            samples_per_chirp: 128,
            range_fft_size: 256,
            ..RadarConfig::default()
        }
    }

    #[test]
    fn hanning_is_symmetric_and_zero_ended() {
        for n in [2, 5, 64, 128] {
            let w = hanning(n);
            assert_eq!(w[0], 0.0);
            assert_eq!(w[n - 1], 0.0);
            for i in 0..n {
                assert!((w[i] - w[n - 1 - i]).abs() < 1e-15);
            }
        }
        assert_eq!(hanning(1), vec![1.0]);
    }

    #[test]
    fn dc_input_bin0_is_window_sum() {
        let cfg = test_config(1);
        let mut cube = DataCube::zeros(cfg.clone());
        for s in cube.samples.iter_mut() {
            *s = Complex64::new(1.0, 0.0);
        }
        let profiles = range_fft(&cube).unwrap();
        let w: f64 = hanning(cfg.samples_per_chirp).iter().sum();
        let bin0 = profiles.profile(0, 0, 0)[0];
        assert!((bin0.re - w).abs() < 1e-9);
        assert!(bin0.im.abs() < 1e-9);
    }

    #[test]
    fn tone_peaks_at_expected_bin() {
        let cfg = test_config(1);
        let mut cube = DataCube::zeros(cfg.clone());
        // Beat tone at 40 FFT bins: f = 40 * fs / N_fft.
        let k = 40usize;
        for rx in 0..cfg.num_rx {
            for c in 0..cfg.chirps_per_frame {
                for n in 0..cfg.samples_per_chirp {
                    let ph = 2.0 * std::f64::consts::PI * k as f64 * n as f64
                        / cfg.range_fft_size as f64;
                    cube.set(0, rx, c, n, Complex64::new(ph.cos(), ph.sin()));
                }
            }
        }
        let profiles = range_fft(&cube).unwrap();
        let p = profiles.profile(0, 1, 3);
        let peak = (0..cfg.range_fft_size)
            .max_by(|&a, &b| p[a].norm().partial_cmp(&p[b].norm()).unwrap())
            .unwrap();
        assert_eq!(peak, k);
    }

    #[test]
    fn parseval_on_windowed_chirp() {
        let cfg = test_config(1);
        let mut cube = DataCube::zeros(cfg.clone());
        // Deterministic pseudo-random content.
        for (i, s) in cube.samples.iter_mut().enumerate() {
            let x = ((i * 2654435761) % 1000) as f64 / 1000.0 - 0.5;
            let y = ((i * 40503) % 997) as f64 / 997.0 - 0.5;
            *s = Complex64::new(x, y);
        }
        let profiles = range_fft(&cube).unwrap();
        let w = hanning(cfg.samples_per_chirp);
        let fd = cube.frame_data(0);
        let time: f64 = fd
            .chirp(0, 0)
            .iter()
            .zip(&w)
            .map(|(s, wi)| (s * wi).norm_sqr())
            .sum();
        let freq: f64 = profiles.profile(0, 0, 0).iter().map(|v| v.norm_sqr()).sum::<f64>()
            / cfg.range_fft_size as f64;
        assert!((time - freq).abs() < 1e-9 * time.max(1.0));
    }

    #[test]
    fn chirp_constant_peaks_at_center_doppler() {
        let cfg = test_config(1);
        let mut cube = DataCube::zeros(cfg.clone());
        for s in cube.samples.iter_mut() {
            *s = Complex64::new(0.3, -0.7);
        }
        let rd = doppler_fft(&range_fft(&cube).unwrap()).unwrap();
        let center = cfg.chirps_per_frame / 2;
        let frame = rd.frame(0);
        // Pick the strongest range bin, then check the Doppler argmax there.
        let map = frame.power_map();
        let (mut best_d, mut best_r, mut best) = (0, 0, f64::MIN);
        for d in 0..frame.doppler_bins {
            for r in 0..frame.range_bins {
                let v = map[d * frame.range_bins + r];
                if v > best {
                    best = v;
                    best_d = d;
                    best_r = r;
                }
            }
        }
        assert_eq!(best_d, center);
        assert_eq!(best_r, 0);
    }

    #[test]
    fn per_chirp_phase_rotation_moves_one_bin_above_center() {
        let cfg = test_config(1);
        let mut cube = DataCube::zeros(cfg.clone());
        let nc = cfg.chirps_per_frame as f64;
        for rx in 0..cfg.num_rx {
            for c in 0..cfg.chirps_per_frame {
                let ph = 2.0 * std::f64::consts::PI * c as f64 / nc;
                let v = Complex64::new(ph.cos(), ph.sin());
                for n in 0..cfg.samples_per_chirp {
                    cube.set(0, rx, c, n, v);
                }
            }
        }
        let rd = doppler_fft(&range_fft(&cube).unwrap()).unwrap();
        let frame = rd.frame(0);
        let center = cfg.chirps_per_frame / 2;
        let col: Vec<f64> =
            (0..frame.doppler_bins).map(|d| frame.value(0, d, 0).norm()).collect();
        let peak = (0..col.len())
            .max_by(|&a, &b| col[a].partial_cmp(&col[b]).unwrap())
            .unwrap();
        assert_eq!(peak, center + 1);
    }

    #[test]
    fn fftshift_is_energy_preserving_permutation() {
        let x: Vec<Complex64> =
            (0..16).map(|i| Complex64::new(i as f64, -(i as f64) * 0.5)).collect();
        let y = fftshift(&x);
        let ex: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        let ey: f64 = y.iter().map(|v| v.norm_sqr()).sum();
        assert!((ex - ey).abs() < 1e-12);
        assert_eq!(y[8], x[0]);
    }

    #[test]
    fn processor_frame_matches_stack_path() {
        let cfg = test_config(2);
        let mut cube = DataCube::zeros(cfg.clone());
        for (i, s) in cube.samples.iter_mut().enumerate() {
            let x = ((i * 263) % 541) as f64 / 541.0 - 0.5;
            *s = Complex64::new(x, 0.25 - x);
        }
        let stack = doppler_fft(&range_fft(&cube).unwrap()).unwrap();
        let proc = RdProcessor::new(&cfg).unwrap();
        for f in 0..cfg.num_frames {
            let frame = proc.process_frame(&cube.frame_data(f));
            let want = stack.frame(f);
            assert_eq!(frame.data.len(), want.data.len());
            for (a, b) in frame.data.iter().zip(&want.data) {
                assert!((a - b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn selective_matches_full_map() {
        let cfg = test_config(1);
        let mut cube = DataCube::zeros(cfg.clone());
        for (i, s) in cube.samples.iter_mut().enumerate() {
            let x = ((i * 2654435761) % 1000) as f64 / 1000.0 - 0.5;
            *s = Complex64::new(x, x * 0.5 + 0.1);
        }
        let proc = RdProcessor::new(&cfg).unwrap();
        let fd = cube.frame_data(0);
        let full = proc.process_frame(&fd);
        let bins = vec![0usize, 17, 100, 255];
        let sel = SelectiveRd::new(&cfg, bins.clone()).unwrap();
        let cells = sel.process_frame(&fd);
        for (bi, &r) in bins.iter().enumerate() {
            for rx in 0..cfg.num_rx {
                for d in 0..cfg.chirps_per_frame {
                    let a = cells.value_at(rx, d, bi);
                    let b = full.value(rx, d, r);
                    assert!((a - b).norm() < 1e-8, "cells mismatch at rx={rx} d={d} r={r}");
                }
            }
        }
    }

    #[test]
    fn full_map_is_linear_in_input() {
        let cfg = test_config(1);
        let mut a = DataCube::zeros(cfg.clone());
        let mut b = DataCube::zeros(cfg.clone());
        for (i, (x, y)) in a.samples.iter_mut().zip(b.samples.iter_mut()).enumerate() {
            *x = Complex64::new((i % 13) as f64 - 6.0, (i % 7) as f64);
            *y = Complex64::new((i % 5) as f64, 3.0 - (i % 11) as f64);
        }
        let mut sum = DataCube::zeros(cfg.clone());
        for (s, (x, y)) in sum.samples.iter_mut().zip(a.samples.iter().zip(&b.samples)) {
            *s = 2.0 * x + 0.5 * y;
        }
        let rd_a = doppler_fft(&range_fft(&a).unwrap()).unwrap();
        let rd_b = doppler_fft(&range_fft(&b).unwrap()).unwrap();
        let rd_sum = doppler_fft(&range_fft(&sum).unwrap()).unwrap();
        for ((va, vb), vs) in rd_a.frames[0]
            .data
            .iter()
            .zip(&rd_b.frames[0].data)
            .zip(&rd_sum.frames[0].data)
        {
            assert!((2.0 * va + 0.5 * vb - vs).norm() < 1e-9);
        }
    }
}
