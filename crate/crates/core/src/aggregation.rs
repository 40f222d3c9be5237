//! From window-level embeddings to one embedding per short speech segment.

use crate::error::{Error, Result};
use crate::types::{union_intervals, EmbeddingVector, SegmentEmbedding, TimeInterval};

/// Pieces shorter than this are merged into the previous piece of their region.
pub const MIN_SEGMENT_LEN: f64 = 0.01;

pub const DEFAULT_MAX_SEGMENT_LEN: f64 = 0.4;

/// Speech region reported by an upstream VAD.
pub type SpeechRegion = TimeInterval;

/// Embedding of one sliding window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowEmbedding {
    pub interval: TimeInterval,
    pub embedding: EmbeddingVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregated {
    pub segments: Vec<SegmentEmbedding>,
    /// Segments that contained no window center and were left out.
    pub dropped: usize,
}

/// Splits each region left to right into `max_len` pieces; the remainder forms
/// a last piece, or is merged into the previous one when shorter than
/// [`MIN_SEGMENT_LEN`]. Overlapping regions are united first.
pub fn segmentize(regions: &[SpeechRegion], max_len: f64) -> Result<Vec<TimeInterval>> {
    if !(max_len.is_finite() && max_len > 0.0) {
        return Err(Error::invalid(format!(
            "max segment length must be > 0, got {max_len}"
        )));
    }
    let mut out = Vec::new();
    for region in union_intervals(regions.to_vec()) {
        let (start, end) = (region.start(), region.end());
        let full = ((end - start) / max_len + 1e-9).floor() as usize;
        let mut pieces: Vec<(f64, f64)> = (0..full)
            .map(|i| (start + i as f64 * max_len, start + (i + 1) as f64 * max_len))
            .collect();
        let tail_start = pieces.last().map_or(start, |p| p.1);
        if end - tail_start >= MIN_SEGMENT_LEN {
            pieces.push((tail_start, end));
        } else if let Some(last) = pieces.last_mut() {
            last.1 = end;
        }
        for (s, e) in pieces {
            out.push(TimeInterval::new(s, e)?);
        }
    }
    Ok(out)
}

/// Union of window extents, used when no speech regions are supplied.
pub fn regions_from_windows(windows: &[WindowEmbedding]) -> Vec<SpeechRegion> {
    union_intervals(windows.iter().map(|w| w.interval).collect())
}

/// A window belongs to the segment containing its center (half-open). Member
/// vectors are L2-normalized and averaged without re-normalization.
pub fn aggregate(windows: &[WindowEmbedding], segments: &[TimeInterval]) -> Result<Aggregated> {
    let dim = windows.first().map_or(0, |w| w.embedding.dim());
    let mut sorted: Vec<TimeInterval> = segments.to_vec();
    sorted.sort_by(|a, b| a.start().total_cmp(&b.start()));

    let mut sums = vec![vec![0.0; dim]; sorted.len()];
    let mut counts = vec![0usize; sorted.len()];
    for (i, w) in windows.iter().enumerate() {
        if w.embedding.dim() != dim {
            return Err(Error::invalid(format!(
                "window {i} has dimension {}, expected {dim}",
                w.embedding.dim()
            )));
        }
        let c = w.interval.center();
        let idx = sorted.partition_point(|s| s.start() <= c);
        if idx == 0 || !sorted[idx - 1].contains(c) {
            continue;
        }
        let unit = w
            .embedding
            .normalized()
            .map_err(|_| Error::invalid(format!("window {i} has a zero embedding")))?;
        for (s, v) in sums[idx - 1].iter_mut().zip(unit.as_slice()) {
            *s += v;
        }
        counts[idx - 1] += 1;
    }

    let mut out = Vec::new();
    let mut dropped = 0;
    for ((interval, sum), count) in sorted.into_iter().zip(sums).zip(counts) {
        if count == 0 {
            dropped += 1;
            continue;
        }
        let mean = sum.into_iter().map(|v| v / count as f64).collect();
        out.push(SegmentEmbedding {
            interval,
            embedding: EmbeddingVector::new(mean)?,
        });
    }
    if out.is_empty() {
        return Err(Error::invalid("no segment contains any window"));
    }
    Ok(Aggregated {
        segments: out,
        dropped,
    })
}
