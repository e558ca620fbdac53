//! Shared domain vocabulary: activity labels, sensor positions, magnitude
//! sequences and the activity-vector series both observation channels are
//! reduced to.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Format version of the series / dataset JSON schema.
pub const SERIES_FORMAT_VERSION: &str = "avs-json/1";

/// Key used for the single magnitude sequence of a motion-channel series.
pub const MOTION_MAGNITUDE_KEY: &str = "motion";

/// Classified activity of one time window.
///
/// The integer codes are part of the on-disk format and of wildcard-index
/// keys; they must never be reassigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum ActivityLabel {
    Idle = 0,
    BodyRotation = 1,
    HeadRotation = 2,
    HandMovement = 3,
    Walking = 4,
    Bending = 5,
    Jumping = 6,
    Other = 7,
}

impl ActivityLabel {
    pub const COUNT: usize = 8;

    pub const ALL: [ActivityLabel; 8] = [
        ActivityLabel::Idle,
        ActivityLabel::BodyRotation,
        ActivityLabel::HeadRotation,
        ActivityLabel::HandMovement,
        ActivityLabel::Walking,
        ActivityLabel::Bending,
        ActivityLabel::Jumping,
        ActivityLabel::Other,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: i64) -> Result<Self> {
        usize::try_from(code)
            .ok()
            .and_then(|c| Self::ALL.get(c).copied())
            .ok_or(Error::InvalidLabelCode(code))
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            ActivityLabel::Idle => "idle",
            ActivityLabel::BodyRotation => "body_rotation",
            ActivityLabel::HeadRotation => "head_rotation",
            ActivityLabel::HandMovement => "hand_movement",
            ActivityLabel::Walking => "walking",
            ActivityLabel::Bending => "bending",
            ActivityLabel::Jumping => "jumping",
            ActivityLabel::Other => "other",
        }
    }
}

/// Returns the label whose stable code equals `code`.
pub fn label_from_code(code: i64) -> Result<ActivityLabel> {
    ActivityLabel::from_code(code)
}

impl fmt::Display for ActivityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ActivityLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(code) = s.parse::<i64>() {
            return Self::from_code(code);
        }
        Self::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::config("label", format!("unknown activity `{s}`")))
    }
}

impl Serialize for ActivityLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.code())
    }
}

impl<'de> Deserialize<'de> for ActivityLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let code = i64::deserialize(d)?;
        ActivityLabel::from_code(code).map_err(serde::de::Error::custom)
    }
}

/// On-body placement whose visual proxy region yields a magnitude sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SensorPosition {
    LeftFrontPocket,
    RightFrontPocket,
    LeftBackPocket,
    RightBackPocket,
    LeftWrist,
    RightWrist,
}

impl SensorPosition {
    pub const COUNT: usize = 6;

    pub const ALL: [SensorPosition; 6] = [
        SensorPosition::LeftFrontPocket,
        SensorPosition::RightFrontPocket,
        SensorPosition::LeftBackPocket,
        SensorPosition::RightBackPocket,
        SensorPosition::LeftWrist,
        SensorPosition::RightWrist,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            SensorPosition::LeftFrontPocket => "left_front_pocket",
            SensorPosition::RightFrontPocket => "right_front_pocket",
            SensorPosition::LeftBackPocket => "left_back_pocket",
            SensorPosition::RightBackPocket => "right_back_pocket",
            SensorPosition::LeftWrist => "left_wrist",
            SensorPosition::RightWrist => "right_wrist",
        }
    }
}

impl fmt::Display for SensorPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SensorPosition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPosition(s.to_string()))
    }
}

impl Serialize for SensorPosition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for SensorPosition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Magnitude of one window. `Unobservable` is an explicit tag, never a
/// sentinel number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Magnitude {
    Observed(f64),
    Unobservable,
}

impl Magnitude {
    pub fn observed(self) -> Option<f64> {
        match self {
            Magnitude::Observed(v) => Some(v),
            Magnitude::Unobservable => None,
        }
    }

    pub fn is_observed(self) -> bool {
        matches!(self, Magnitude::Observed(_))
    }
}

impl From<Option<f64>> for Magnitude {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Magnitude::Unobservable, Magnitude::Observed)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MagnitudeSeq(Vec<Magnitude>);

impl MagnitudeSeq {
    pub fn new(values: Vec<Magnitude>) -> Result<Self> {
        for (i, m) in values.iter().enumerate() {
            if let Magnitude::Observed(v) = m {
                if !v.is_finite() || *v < 0.0 {
                    return Err(Error::InvalidSeries(format!(
                        "magnitude at window {i} must be finite and non-negative, got {v}"
                    )));
                }
            }
        }
        Ok(MagnitudeSeq(values))
    }

    pub fn from_observed(values: Vec<f64>) -> Result<Self> {
        Self::new(values.into_iter().map(Magnitude::Observed).collect())
    }

    pub fn unobservable(n: usize) -> Self {
        MagnitudeSeq(vec![Magnitude::Unobservable; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Magnitude] {
        &self.0
    }

    pub fn observed_count(&self) -> usize {
        self.0.iter().filter(|m| m.is_observed()).count()
    }

    fn to_wire(&self) -> Vec<Option<f64>> {
        self.0.iter().map(|m| m.observed()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Motion,
    Visual,
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::Motion => "motion",
            Channel::Visual => "visual",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Magnitudes {
    /// One sequence; the device position is unknown to the observer.
    Motion(MagnitudeSeq),
    /// One sequence per [`SensorPosition`], indexed by `SensorPosition::index`.
    Visual(Box<[MagnitudeSeq; SensorPosition::COUNT]>),
}

/// A sequence of classified activity windows with paired magnitudes, built
/// from one observation channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityVectorSeries {
    source_id: String,
    window_seconds: f64,
    activities: Vec<ActivityLabel>,
    magnitudes: Magnitudes,
}

impl ActivityVectorSeries {
    pub fn motion(
        source_id: impl Into<String>,
        window_seconds: f64,
        activities: Vec<ActivityLabel>,
        magnitudes: Vec<f64>,
    ) -> Result<Self> {
        let seq = MagnitudeSeq::from_observed(magnitudes)?;
        Self::new(
            source_id.into(),
            window_seconds,
            activities,
            Magnitudes::Motion(seq),
        )
    }

    pub fn visual(
        source_id: impl Into<String>,
        window_seconds: f64,
        activities: Vec<ActivityLabel>,
        magnitudes: [MagnitudeSeq; SensorPosition::COUNT],
    ) -> Result<Self> {
        Self::new(
            source_id.into(),
            window_seconds,
            activities,
            Magnitudes::Visual(Box::new(magnitudes)),
        )
    }

    fn new(
        source_id: String,
        window_seconds: f64,
        activities: Vec<ActivityLabel>,
        magnitudes: Magnitudes,
    ) -> Result<Self> {
        if !(window_seconds.is_finite() && window_seconds > 0.0) {
            return Err(Error::InvalidSeries(format!(
                "window length must be positive, got {window_seconds}"
            )));
        }
        let n = activities.len();
        match &magnitudes {
            Magnitudes::Motion(seq) => {
                if seq.len() != n {
                    return Err(Error::LengthMismatch {
                        expected: n,
                        found: seq.len(),
                    });
                }
                if seq.observed_count() != n {
                    return Err(Error::InvalidSeries(
                        "motion magnitudes cannot be unobservable".into(),
                    ));
                }
            }
            Magnitudes::Visual(seqs) => {
                if let Some(bad) = seqs.iter().find(|s| s.len() != n) {
                    return Err(Error::LengthMismatch {
                        expected: n,
                        found: bad.len(),
                    });
                }
            }
        }
        Ok(ActivityVectorSeries {
            source_id,
            window_seconds,
            activities,
            magnitudes,
        })
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    pub fn window_seconds(&self) -> f64 {
        self.window_seconds
    }

    pub fn activities(&self) -> &[ActivityLabel] {
        &self.activities
    }

    pub fn magnitudes(&self) -> &Magnitudes {
        &self.magnitudes
    }

    pub fn channel(&self) -> Channel {
        match self.magnitudes {
            Magnitudes::Motion(_) => Channel::Motion,
            Magnitudes::Visual(_) => Channel::Visual,
        }
    }

    /// Number of windows `n`.
    pub fn len(&self) -> usize {
        self.activities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.activities.is_empty()
    }

    /// Motion magnitudes as plain numbers; `None` for visual series.
    pub fn motion_magnitudes(&self) -> Option<Vec<f64>> {
        match &self.magnitudes {
            Magnitudes::Motion(seq) => Some(seq.values().iter().filter_map(|m| m.observed()).collect()),
            Magnitudes::Visual(_) => None,
        }
    }

    pub fn position_magnitudes(&self, position: SensorPosition) -> Option<&MagnitudeSeq> {
        match &self.magnitudes {
            Magnitudes::Visual(seqs) => Some(&seqs[position.index()]),
            Magnitudes::Motion(_) => None,
        }
    }

    /// Copy of windows `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        let cut = |s: &MagnitudeSeq| MagnitudeSeq(s.0[start..end].to_vec());
        let magnitudes = match &self.magnitudes {
            Magnitudes::Motion(seq) => Magnitudes::Motion(cut(seq)),
            Magnitudes::Visual(seqs) => {
                Magnitudes::Visual(Box::new(std::array::from_fn(|i| cut(&seqs[i]))))
            }
        };
        ActivityVectorSeries {
            source_id: self.source_id.clone(),
            window_seconds: self.window_seconds,
            activities: self.activities[start..end].to_vec(),
            magnitudes,
        }
    }

    /// Same series under a different identifier.
    pub fn with_source_id(mut self, source_id: impl Into<String>) -> Self {
        self.source_id = source_id.into();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("series serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: SeriesWire = serde_json::from_str(s)?;
        Self::from_wire(wire)
    }

    fn to_wire(&self) -> SeriesWire {
        let mut magnitudes = IndexMap::new();
        match &self.magnitudes {
            Magnitudes::Motion(seq) => {
                magnitudes.insert(MOTION_MAGNITUDE_KEY.to_string(), seq.to_wire());
            }
            Magnitudes::Visual(seqs) => {
                for p in SensorPosition::ALL {
                    magnitudes.insert(p.name().to_string(), seqs[p.index()].to_wire());
                }
            }
        }
        SeriesWire {
            source_id: self.source_id.clone(),
            channel: self.channel(),
            w: self.window_seconds,
            activities: self.activities.clone(),
            magnitudes,
        }
    }

    fn from_wire(wire: SeriesWire) -> Result<Self> {
        let SeriesWire {
            source_id,
            channel,
            w,
            activities,
            mut magnitudes,
        } = wire;
        let magnitudes = match channel {
            Channel::Motion => {
                let seq = magnitudes.swap_remove(MOTION_MAGNITUDE_KEY).ok_or_else(|| {
                    Error::InvalidSeries(format!(
                        "motion series requires a `{MOTION_MAGNITUDE_KEY}` magnitude sequence"
                    ))
                })?;
                if let Some(extra) = magnitudes.keys().next() {
                    return Err(Error::InvalidSeries(format!(
                        "unexpected magnitude key `{extra}` in motion series"
                    )));
                }
                Magnitudes::Motion(MagnitudeSeq::new(
                    seq.into_iter().map(Magnitude::from).collect(),
                )?)
            }
            Channel::Visual => {
                let mut seqs: [Option<MagnitudeSeq>; SensorPosition::COUNT] = Default::default();
                for (key, values) in magnitudes {
                    let p: SensorPosition = key.parse()?;
                    if seqs[p.index()].is_some() {
                        return Err(Error::InvalidSeries(format!("duplicate position `{key}`")));
                    }
                    seqs[p.index()] = Some(MagnitudeSeq::new(
                        values.into_iter().map(Magnitude::from).collect(),
                    )?);
                }
                let mut out: [MagnitudeSeq; SensorPosition::COUNT] = Default::default();
                for p in SensorPosition::ALL {
                    out[p.index()] = seqs[p.index()].take().ok_or_else(|| {
                        Error::InvalidSeries(format!("missing position `{}`", p.name()))
                    })?;
                }
                Magnitudes::Visual(Box::new(out))
            }
        };
        Self::new(source_id, w, activities, magnitudes)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesWire {
    source_id: String,
    channel: Channel,
    w: f64,
    activities: Vec<ActivityLabel>,
    magnitudes: IndexMap<String, Vec<Option<f64>>>,
}

/// A validated, immutable collection of series from one channel
/// (`M` for motion, `V` for visual).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    channel: Channel,
    series: Vec<ActivityVectorSeries>,
}

impl Dataset {
    pub fn new(channel: Channel, series: Vec<ActivityVectorSeries>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(series.len());
        for s in &series {
            if s.channel() != channel {
                return Err(Error::InvalidDataset(format!(
                    "series `{}` is {} but the dataset is {channel}",
                    s.source_id(),
                    s.channel()
                )));
            }
            if !seen.insert(s.source_id()) {
                return Err(Error::InvalidDataset(format!(
                    "duplicate source id `{}`",
                    s.source_id()
                )));
            }
        }
        if let Some(first) = series.first() {
            let w = first.window_seconds();
            if let Some(odd) = series.iter().find(|s| s.window_seconds() != w) {
                return Err(Error::InvalidDataset(format!(
                    "series `{}` uses w={} but the dataset uses w={w}",
                    odd.source_id(),
                    odd.window_seconds()
                )));
            }
        }
        Ok(Dataset { channel, series })
    }

    pub fn motion(series: Vec<ActivityVectorSeries>) -> Result<Self> {
        Self::new(Channel::Motion, series)
    }

    pub fn visual(series: Vec<ActivityVectorSeries>) -> Result<Self> {
        Self::new(Channel::Visual, series)
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    pub fn series(&self) -> &[ActivityVectorSeries] {
        &self.series
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn window_seconds(&self) -> Option<f64> {
        self.series.first().map(|s| s.window_seconds())
    }

    /// Common sequence length, if every series has the same one.
    pub fn uniform_len(&self) -> Option<usize> {
        let n = self.series.first()?.len();
        self.series.iter().all(|s| s.len() == n).then_some(n)
    }

    pub fn read_jsonl<R: BufRead>(channel: Channel, reader: R) -> Result<Self> {
        let series = read_series_jsonl(reader)?;
        Self::new(channel, series)
    }

    pub fn write_jsonl<W: Write>(&self, writer: W) -> Result<()> {
        write_series_jsonl(writer, &self.series)
    }
}

/// Parses one series per non-blank line; errors carry the 1-based line number.
pub fn read_series_jsonl<R: BufRead>(reader: R) -> Result<Vec<ActivityVectorSeries>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let series = ActivityVectorSeries::from_json(&line).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(series);
    }
    Ok(out)
}

pub fn write_series_jsonl<W: Write>(mut writer: W, series: &[ActivityVectorSeries]) -> Result<()> {
    for s in series {
        writer.write_all(s.to_json().as_bytes())?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn visual_fixture() -> ActivityVectorSeries {
        use ActivityLabel::*;
        let acts = vec![Idle, Walking, Jumping];
        let mut mags: [MagnitudeSeq; 6] = Default::default();
        for (i, m) in mags.iter_mut().enumerate() {
            *m = MagnitudeSeq::new(vec![
                Magnitude::Observed(i as f64),
                Magnitude::Unobservable,
                Magnitude::Observed(0.5),
            ])
            .unwrap();
        }
        ActivityVectorSeries::visual("avatar-1", 1.0, acts, mags).unwrap()
    }

    #[test]
    fn label_codes() {
        assert_eq!(label_from_code(0).unwrap(), ActivityLabel::Idle);
        assert_eq!(label_from_code(7).unwrap(), ActivityLabel::Other);
        assert!(matches!(label_from_code(8), Err(Error::InvalidLabelCode(8))));
        assert!(matches!(label_from_code(-1), Err(Error::InvalidLabelCode(-1))));
        for (i, l) in ActivityLabel::ALL.iter().enumerate() {
            assert_eq!(l.code() as usize, i);
            assert_eq!(label_from_code(i as i64).unwrap(), *l);
        }
    }

    #[test]
    fn series_length() {
        let s = ActivityVectorSeries::motion("m", 1.0, vec![ActivityLabel::Idle; 10], vec![0.0; 10])
            .unwrap();
        assert_eq!(s.len(), 10);
        let e = ActivityVectorSeries::motion("m", 1.0, vec![], vec![]).unwrap();
        assert_eq!(e.len(), 0);
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            ActivityVectorSeries::motion("m", 1.0, vec![ActivityLabel::Idle; 3], vec![0.0; 2]),
            Err(Error::LengthMismatch { expected: 3, found: 2 })
        ));
        assert!(ActivityVectorSeries::motion("m", 0.0, vec![], vec![]).is_err());
        assert!(ActivityVectorSeries::motion("m", 1.0, vec![ActivityLabel::Idle], vec![-1.0]).is_err());
        assert!(ActivityVectorSeries::motion("m", 1.0, vec![ActivityLabel::Idle], vec![f64::NAN]).is_err());
    }

    #[test]
    fn golden_serialized_forms() {
        let m = ActivityVectorSeries::motion(
            "id-7",
            1.0,
            vec![ActivityLabel::Idle, ActivityLabel::Walking, ActivityLabel::Other],
            vec![0.0, 2.5, 1.25],
        )
        .unwrap();
        assert_eq!(
            m.to_json(),
            r#"{"source_id":"id-7","channel":"motion","w":1.0,"activities":[0,4,7],"magnitudes":{"motion":[0.0,2.5,1.25]}}"#
        );
        let v = visual_fixture();
        assert_eq!(
            v.to_json(),
            concat!(
                r#"{"source_id":"avatar-1","channel":"visual","w":1.0,"activities":[0,4,6],"magnitudes":{"#,
                r#""left_front_pocket":[0.0,null,0.5],"right_front_pocket":[1.0,null,0.5],"#,
                r#""left_back_pocket":[2.0,null,0.5],"right_back_pocket":[3.0,null,0.5],"#,
                r#""left_wrist":[4.0,null,0.5],"right_wrist":[5.0,null,0.5]}}"#
            )
        );
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let v = visual_fixture();
        let back = ActivityVectorSeries::from_json(&v.to_json()).unwrap();
        assert_eq!(back, v);
        assert_eq!(back.to_json(), v.to_json());
    }

    #[test]
    fn json_rejects_malformed_series() {
        let bad = [
            r#"{"source_id":"a","channel":"motion","w":1.0,"activities":[0,9],"magnitudes":{"motion":[0.0,1.0]}}"#,
            r#"{"source_id":"a","channel":"motion","w":1.0,"activities":[0],"magnitudes":{"motion":[null]}}"#,
            r#"{"source_id":"a","channel":"motion","w":1.0,"activities":[0],"magnitudes":{"motion":[1.0,2.0]}}"#,
            r#"{"source_id":"a","channel":"visual","w":1.0,"activities":[0],"magnitudes":{"left_wrist":[1.0]}}"#,
            r#"{"source_id":"a","channel":"motion","w":-1.0,"activities":[],"magnitudes":{"motion":[]}}"#,
            r#"{"source_id":"a","channel":"motion","w":1.0,"activities":[],"magnitudes":{"motion":[]},"x":1}"#,
        ];
        for b in bad {
            assert!(ActivityVectorSeries::from_json(b).is_err(), "{b}");
        }
    }

    #[test]
    fn dataset_invariants() {
        let a = ActivityVectorSeries::motion("a", 1.0, vec![ActivityLabel::Idle], vec![0.0]).unwrap();
        let b = ActivityVectorSeries::motion("b", 2.0, vec![ActivityLabel::Idle], vec![0.0]).unwrap();
        assert!(Dataset::motion(vec![a.clone(), a.clone()]).is_err());
        assert!(Dataset::motion(vec![a.clone(), b]).is_err());
        assert!(Dataset::visual(vec![a.clone()]).is_err());
        let ok = Dataset::motion(vec![a]).unwrap();
        assert_eq!(ok.window_seconds(), Some(1.0));
    }

    #[test]
    fn jsonl_reports_line_numbers() {
        let text = format!("{}\n\nnot json\n", visual_fixture().to_json());
        match read_series_jsonl(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn slicing_keeps_lengths_consistent() {
        let v = visual_fixture().slice(1, 3);
        assert_eq!(v.len(), 2);
        for p in SensorPosition::ALL {
            assert_eq!(v.position_magnitudes(p).unwrap().len(), 2);
        }
    }
}
