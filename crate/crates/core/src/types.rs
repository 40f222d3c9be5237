//! Domain values shared across the pipeline.
//!
//! Time is always real-valued seconds. Cluster ids are dense integers;
//! string speaker names only appear on [`Annotation`]s.

use crate::error::{Error, Result};
use crate::numerics::Matrix;

/// Half-open time span `[start, end)` in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeInterval {
    start: f64,
    end: f64,
}

impl TimeInterval {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !start.is_finite() || !end.is_finite() {
            return Err(Error::invalid(format!(
                "non-finite interval [{start}, {end}]"
            )));
        }
        if start < 0.0 {
            return Err(Error::invalid(format!("negative start time {start}")));
        }
        if end <= start {
            return Err(Error::invalid(format!(
                "interval end {end} must exceed start {start}"
            )));
        }
        Ok(Self { start, end })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.start + self.end)
    }

    /// Half-open membership test.
    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t < self.end
    }

    pub fn overlaps(&self, other: &TimeInterval) -> bool {
        self.start < other.end && other.start < self.end
    }
}

/// Union of possibly overlapping or touching intervals, sorted by start.
pub fn union_intervals(mut intervals: Vec<TimeInterval>) -> Vec<TimeInterval> {
    intervals.sort_by(|a, b| a.start.total_cmp(&b.start));
    let mut out: Vec<TimeInterval> = Vec::with_capacity(intervals.len());
    for iv in intervals {
        match out.last_mut() {
            Some(last) if iv.start <= last.end => last.end = last.end.max(iv.end),
            _ => out.push(iv),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub interval: TimeInterval,
    pub speaker: Option<String>,
}

impl Segment {
    pub fn labeled(interval: TimeInterval, speaker: impl Into<String>) -> Result<Self> {
        let speaker = speaker.into();
        if speaker.is_empty() {
            return Err(Error::invalid("empty speaker label"));
        }
        Ok(Self {
            interval,
            speaker: Some(speaker),
        })
    }

    pub fn unlabeled(interval: TimeInterval) -> Self {
        Self {
            interval,
            speaker: None,
        }
    }

    /// Label of a segment stored in an [`Annotation`]; always present there.
    pub fn speaker(&self) -> &str {
        self.speaker.as_deref().unwrap_or("")
    }
}

/// Speaker-labeled timeline of one recording.
#[derive(Debug, Clone, PartialEq)]
pub struct Annotation {
    pub recording_id: String,
    segments: Vec<Segment>,
}

impl Annotation {
    /// Builds an annotation, sorting segments by start time (stable).
    pub fn new(recording_id: impl Into<String>, mut segments: Vec<Segment>) -> Result<Self> {
        if let Some(bad) = segments
            .iter()
            .position(|s| s.speaker.as_deref().is_none_or(str::is_empty))
        {
            return Err(Error::invalid(format!(
                "segment {bad} has no speaker label"
            )));
        }
        segments.sort_by(|a, b| a.interval.start.total_cmp(&b.interval.start));
        Ok(Self {
            recording_id: recording_id.into(),
            segments,
        })
    }

    pub fn empty(recording_id: impl Into<String>) -> Self {
        Self {
            recording_id: recording_id.into(),
            segments: Vec::new(),
        }
    }

    /// Hypothesis annotation from cluster ids. Ids are renamed `spk0`, `spk1`, …
    /// in order of first appearance, and touching segments with the same label
    /// are merged.
    pub fn from_cluster_labels(
        recording_id: impl Into<String>,
        intervals: &[TimeInterval],
        labels: &[usize],
    ) -> Result<Self> {
        if intervals.len() != labels.len() {
            return Err(Error::invalid(format!(
                "{} intervals but {} labels",
                intervals.len(),
                labels.len()
            )));
        }
        let mut order: Vec<(TimeInterval, usize)> = intervals
            .iter()
            .copied()
            .zip(labels.iter().copied())
            .collect();
        order.sort_by(|a, b| a.0.start.total_cmp(&b.0.start));

        let mut names: Vec<Option<usize>> = Vec::new();
        let mut next = 0usize;
        let mut segments: Vec<Segment> = Vec::new();
        let mut last: Option<(usize, usize)> = None; // (segment index, dense name)
        for (iv, label) in order {
            if label >= names.len() {
                names.resize(label + 1, None);
            }
            let name = *names[label].get_or_insert_with(|| {
                next += 1;
                next - 1
            });
            match last {
                Some((idx, prev))
                    if prev == name && (iv.start - segments[idx].interval.end).abs() < 1e-9 =>
                {
                    segments[idx].interval.end = iv.end.max(segments[idx].interval.end);
                }
                _ => {
                    segments.push(Segment::labeled(iv, format!("spk{name}"))?);
                    last = Some((segments.len() - 1, name));
                }
            }
        }
        Annotation::new(recording_id, segments)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Distinct speaker labels in first-appearance order.
    pub fn speakers(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for s in &self.segments {
            if !out.iter().any(|x| x == s.speaker()) {
                out.push(s.speaker().to_string());
            }
        }
        out
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.interval.duration()).sum()
    }
}

/// A real embedding vector of fixed dimension with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector(Vec<f64>);

impl EmbeddingVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("embedding dimension must be >= 1"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite embedding entry at {i}")));
        }
        Ok(Self(values))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Unit-norm copy. Fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::invalid("cannot normalize a zero vector"));
        }
        Ok(Self(self.0.iter().map(|v| v / n).collect()))
    }
}

impl From<EmbeddingVector> for Vec<f64> {
    fn from(e: EmbeddingVector) -> Self {
        e.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentEmbedding {
    pub interval: TimeInterval,
    pub embedding: EmbeddingVector,
}

/// Square affinity matrix over segments.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinityMatrix(Matrix);

impl AffinityMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::invalid(format!(
                "affinity must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if m.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("affinity has non-finite entries"));
        }
        Ok(Self(m))
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }
}

/// Dense cluster assignment: every id in `0..k` is used at least once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusteringResult {
    labels: Vec<usize>,
    k: usize,
}

impl ClusteringResult {
    /// Relabels ids densely by first appearance, so the result is canonical.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map: Vec<Option<usize>> = Vec::new();
        let mut k = 0;
        let labels = labels
            .iter()
            .map(|&l| {
                if l >= map.len() {
                    map.resize(l + 1, None);
                }
                *map[l].get_or_insert_with(|| {
                    k += 1;
                    k - 1
                })
            })
            .collect();
        Self { labels, k }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}
