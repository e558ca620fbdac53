use std::collections::BTreeMap;
use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SAMPLE_INTERVAL: f64 = 0.020;
pub const DEFAULT_FRAME_RATE: f64 = 30.0;

/// Anything carrying a timestamp in seconds.
pub trait Timestamped {
    fn timestamp(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionSample {
    pub t: f64,
    /// m/s², including gravity.
    pub accel: [f64; 3],
    /// rad/s.
    pub gyro: [f64; 3],
}

impl Timestamped for MotionSample {
    fn timestamp(&self) -> f64 {
        self.t
    }
}

fn check_increasing<T: Timestamped>(items: &[T], what: &str) -> Result<()> {
    for (i, pair) in items.windows(2).enumerate() {
        if pair[1].timestamp() <= pair[0].timestamp() {
            return Err(Error::InvalidTrace(format!(
                "{what} timestamps must be strictly increasing (index {})",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Time-ordered inertial samples from one device.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionTrace {
    samples: Vec<MotionSample>,
    nominal_interval: f64,
}

impl MotionTrace {
    pub fn new(samples: Vec<MotionSample>, nominal_interval: f64) -> Result<Self> {
        if !(nominal_interval.is_finite() && nominal_interval > 0.0) {
            return Err(Error::InvalidTrace(format!(
                "sample interval must be positive, got {nominal_interval}"
            )));
        }
        for (i, s) in samples.iter().enumerate() {
            let finite = s.t.is_finite()
                && s.accel.iter().all(|v| v.is_finite())
                && s.gyro.iter().all(|v| v.is_finite());
            if !finite {
                return Err(Error::InvalidTrace(format!("non-finite value in sample {i}")));
            }
        }
        check_increasing(&samples, "sample")?;
        Ok(MotionTrace {
            samples,
            nominal_interval,
        })
    }

    pub fn samples(&self) -> &[MotionSample] {
        &self.samples
    }

    pub fn nominal_interval(&self) -> f64 {
        self.nominal_interval
    }

    pub fn start(&self) -> Option<f64> {
        self.samples.first().map(|s| s.t)
    }

    /// Covered span: last minus first timestamp plus one sample interval.
    pub fn duration(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.t - a.t + self.nominal_interval,
            _ => 0.0,
        }
    }

    /// Same samples with every timestamp moved by `offset` seconds.
    pub fn shifted(&self, offset: f64) -> MotionTrace {
        MotionTrace {
            samples: self
                .samples
                .iter()
                .map(|s| MotionSample { t: s.t + offset, ..*s })
                .collect(),
            nominal_interval: self.nominal_interval,
        }
    }

    /// Reads `ts,ax,ay,az,gx,gy,gz` CSV with a header row.
    pub fn read_csv<R: Read>(reader: R, nominal_interval: f64) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let expected = ["ts", "ax", "ay", "az", "gx", "gy", "gz"];
        let headers = rdr.headers()?.clone();
        if headers.len() != expected.len() || headers.iter().zip(expected).any(|(h, e)| h != e) {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header `{}`", expected.join(",")),
            });
        }
        let mut samples = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record?;
            let line = i + 2;
            if record.len() != expected.len() {
                return Err(Error::Parse {
                    line,
                    message: format!("expected 7 fields, found {}", record.len()),
                });
            }
            let mut v = [0.0; 7];
            for (slot, field) in v.iter_mut().zip(record.iter()) {
                *slot = field.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("invalid number `{field}`"),
                })?;
            }
            samples.push(MotionSample {
                t: v[0],
                accel: [v[1], v[2], v[3]],
                gyro: [v[4], v[5], v[6]],
            });
        }
        Self::new(samples, nominal_interval)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["ts", "ax", "ay", "az", "gx", "gy", "gz"])?;
        for s in &self.samples {
            let row = [
                s.t, s.accel[0], s.accel[1], s.accel[2], s.gyro[0], s.gyro[1], s.gyro[2],
            ];
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Canonical body keypoint names, grouped by body region.
pub mod keypoints {
    pub const HEAD: [&str; 5] = ["nose", "left_eye", "right_eye", "left_ear", "right_ear"];
    pub const UPPER: [&str; 4] = ["left_shoulder", "right_shoulder", "left_elbow", "right_elbow"];
    pub const HANDS: [&str; 2] = ["left_wrist", "right_wrist"];
    pub const HIPS: [&str; 2] = ["left_hip", "right_hip"];
    pub const LEGS: [&str; 4] = ["left_knee", "right_knee", "left_ankle", "right_ankle"];

    pub const GROUPS: [&[&str]; 5] = [&HEAD, &UPPER, &HANDS, &HIPS, &LEGS];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeypointFrame {
    #[serde(rename = "ts")]
    pub t: f64,
    /// Pixel coordinates; `None` when the keypoint was not detected.
    #[serde(rename = "kp")]
    pub keypoints: BTreeMap<String, Option<[f64; 2]>>,
}

impl KeypointFrame {
    pub fn get(&self, name: &str) -> Option<[f64; 2]> {
        self.keypoints.get(name).copied().flatten()
    }
}

impl Timestamped for KeypointFrame {
    fn timestamp(&self) -> f64 {
        self.t
    }
}

/// Time-ordered 2-D body keypoints of one observed avatar.
#[derive(Debug, Clone, PartialEq)]
pub struct KeypointTrace {
    frames: Vec<KeypointFrame>,
    frame_rate: f64,
}

impl KeypointTrace {
    pub fn new(frames: Vec<KeypointFrame>, frame_rate: f64) -> Result<Self> {
        if !(frame_rate.is_finite() && frame_rate > 0.0) {
            return Err(Error::InvalidTrace(format!(
                "frame rate must be positive, got {frame_rate}"
            )));
        }
        for (i, f) in frames.iter().enumerate() {
            let finite = f.t.is_finite()
                && f.keypoints
                    .values()
                    .all(|p| p.is_none_or(|[x, y]| x.is_finite() && y.is_finite()));
            if !finite {
                return Err(Error::InvalidTrace(format!("non-finite value in frame {i}")));
            }
        }
        check_increasing(&frames, "frame")?;
        Ok(KeypointTrace { frames, frame_rate })
    }

    pub fn frames(&self) -> &[KeypointFrame] {
        &self.frames
    }

    pub fn frame_rate(&self) -> f64 {
        self.frame_rate
    }

    pub fn frame_interval(&self) -> f64 {
        1.0 / self.frame_rate
    }

    pub fn duration(&self) -> f64 {
        match (self.frames.first(), self.frames.last()) {
            (Some(a), Some(b)) => b.t - a.t + self.frame_interval(),
            _ => 0.0,
        }
    }

    /// One frame per line: `{"ts": s, "kp": {name: [x, y] | null}}`.
    pub fn read_jsonl<R: BufRead>(reader: R, frame_rate: f64) -> Result<Self> {
        let mut frames = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let frame: KeypointFrame = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            frames.push(frame);
        }
        Self::new(frames, frame_rate)
    }

    pub fn write_jsonl<W: Write>(&self, mut writer: W) -> Result<()> {
        for f in &self.frames {
            serde_json::to_writer(&mut writer, f)?;
            writer.write_all(b"\n")?;
        }
        writer.flush()?;
        Ok(())
    }
}
