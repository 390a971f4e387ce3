//! Raw data containers: complex samples, per-frame blocks, and full captures.
//!
//! A capture is logically a 4-D tensor indexed `[frame][rx][chirp][sample]`.
//! `DataCube` stores an entire capture in memory; `FrameData` is the one-frame
//! unit the streaming pipeline works with (a full-length capture at the
//! default geometry is several GB, so processing never requires the whole
//! cube to be resident).

use num_complex::Complex64;

use crate::config::RadarConfig;
use crate::error::{Error, Result};

/// One complex I/Q sample; the real part is I, the imaginary part Q.
pub type ComplexSample = Complex64;

/// The samples of a single frame, indexed `[rx][chirp][sample]`.
#[derive(Debug, Clone)]
pub struct FrameData {
    pub num_rx: usize,
    pub chirps_per_frame: usize,
    pub samples_per_chirp: usize,
    pub data: Vec<ComplexSample>,
}

impl FrameData {
    pub fn zeros(num_rx: usize, chirps: usize, samples: usize) -> Self {
        Self {
            num_rx,
            chirps_per_frame: chirps,
            samples_per_chirp: samples,
            data: vec![Complex64::new(0.0, 0.0); num_rx * chirps * samples],
        }
    }

    #[inline]
    pub fn index(&self, rx: usize, chirp: usize, sample: usize) -> usize {
        (rx * self.chirps_per_frame + chirp) * self.samples_per_chirp + sample
    }

    #[inline]
    pub fn get(&self, rx: usize, chirp: usize, sample: usize) -> ComplexSample {
        self.data[self.index(rx, chirp, sample)]
    }

    /// Samples of one chirp as a contiguous slice.
    #[inline]
    pub fn chirp(&self, rx: usize, chirp: usize) -> &[ComplexSample] {
        let start = self.index(rx, chirp, 0);
        &self.data[start..start + self.samples_per_chirp]
    }

    pub fn chirp_mut(&mut self, rx: usize, chirp: usize) -> &mut [ComplexSample] {
        let start = self.index(rx, chirp, 0);
        &mut self.data[start..start + self.samples_per_chirp]
    }
}

/// A full raw capture held in memory.
#[derive(Debug, Clone)]
pub struct DataCube {
    pub config: RadarConfig,
    /// Row-major `[frame][rx][chirp][sample]`.
    pub samples: Vec<ComplexSample>,
}

impl DataCube {
    /// Allocate an all-zero cube matching `config`.
    pub fn zeros(config: RadarConfig) -> Self {
        let n = config.num_frames * config.samples_per_frame();
        Self { config, samples: vec![Complex64::new(0.0, 0.0); n] }
    }

    #[inline]
    pub fn index(&self, frame: usize, rx: usize, chirp: usize, sample: usize) -> usize {
        ((frame * self.config.num_rx + rx) * self.config.chirps_per_frame + chirp)
            * self.config.samples_per_chirp
            + sample
    }

    #[inline]
    pub fn get(&self, frame: usize, rx: usize, chirp: usize, sample: usize) -> ComplexSample {
        self.samples[self.index(frame, rx, chirp, sample)]
    }

    pub fn set(&mut self, frame: usize, rx: usize, chirp: usize, sample: usize, v: ComplexSample) {
        let i = self.index(frame, rx, chirp, sample);
        self.samples[i] = v;
    }

    /// Copy one frame out of the cube.
    pub fn frame_data(&self, frame: usize) -> FrameData {
        let per = self.config.samples_per_frame();
        let start = frame * per;
        FrameData {
            num_rx: self.config.num_rx,
            chirps_per_frame: self.config.chirps_per_frame,
            samples_per_chirp: self.config.samples_per_chirp,
            data: self.samples[start..start + per].to_vec(),
        }
    }
}

/// Check that a cube's dimensions match its configuration and that every
/// sample is finite. Returns the cube unchanged on success.
pub fn validate_cube(cube: DataCube) -> Result<DataCube> {
    cube.config.validate()?;
    let expect = cube.config.num_frames * cube.config.samples_per_frame();
    if cube.samples.len() != expect {
        return Err(Error::data(format!(
            "cube has {} samples, config implies {expect}",
            cube.samples.len()
        )));
    }
    for (i, s) in cube.samples.iter().enumerate() {
        if !s.re.is_finite() || !s.im.is_finite() {
            return Err(Error::data(format!("non-finite sample at flat index {i}")));
        }
    }
    Ok(cube)
}

/// Anything that can produce raw frames on demand: an in-memory cube, the
/// scene simulator, or a raw-capture file reader.
///
/// `frame` is required to be pure (same index, same data), which lets the
/// pipeline re-stream a source for its second pass and process frames in
/// parallel.
pub trait FrameSource: Sync {
    fn config(&self) -> &RadarConfig;
    fn num_frames(&self) -> usize {
        self.config().num_frames
    }
    fn frame(&self, frame: usize) -> Result<FrameData>;

    /// Materialize the whole capture. Intended for small test captures.
    fn to_cube(&self) -> Result<DataCube> {
        let config = self.config().clone();
        let mut cube = DataCube::zeros(config);
        let per = cube.config.samples_per_frame();
        for f in 0..self.num_frames() {
            let fd = self.frame(f)?;
            cube.samples[f * per..(f + 1) * per].copy_from_slice(&fd.data);
        }
        Ok(cube)
    }
}

impl FrameSource for DataCube {
    fn config(&self) -> &RadarConfig {
        &self.config
    }

    fn frame(&self, frame: usize) -> Result<FrameData> {
        if frame >= self.config.num_frames {
            return Err(Error::data(format!(
                "frame {frame} out of range ({} frames)",
                self.config.num_frames
            )));
        }
        Ok(self.frame_data(frame))
    }
}
