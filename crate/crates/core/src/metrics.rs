//! Diarization error rate.
//!
//! Times are snapped to a 1e-7 s integer grid and all durations are summed
//! as integers, so reports are bit-reproducible and boundary instants are
//! never counted twice.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{optimal_assignment, Matrix};
use crate::types::{Annotation, TimeInterval};

const TICKS_PER_SECOND: f64 = 1e7;

pub const DEFAULT_COLLAR: f64 = 0.25;

fn to_ticks(t: f64) -> i64 {
    (t * TICKS_PER_SECOND).round() as i64
}

fn to_seconds(ticks: i64) -> f64 {
    ticks as f64 / TICKS_PER_SECOND
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalOptions {
    /// Half-width in seconds of the unscored zone around each reference boundary.
    pub collar: f64,
    /// Skip time where two or more reference speakers talk at once.
    pub exclude_overlap: bool,
    /// Explicit scoring map; otherwise the span of the reference is scored.
    pub uem: Option<Vec<TimeInterval>>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            collar: DEFAULT_COLLAR,
            exclude_overlap: true,
            uem: None,
        }
    }
}

impl EvalOptions {
    pub fn with_collar(collar: f64) -> Self {
        Self {
            collar,
            ..Self::default()
        }
    }
}

/// False alarm, miss and confusion, in seconds and as percentages of the
/// scored reference speech.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerReport {
    pub fa_seconds: f64,
    pub miss_seconds: f64,
    pub confusion_seconds: f64,
    pub ref_speech_seconds: f64,
    pub fa: f64,
    pub miss: f64,
    pub confusion: f64,
    pub total: f64,
}

impl DerReport {
    pub fn from_seconds(fa: f64, miss: f64, confusion: f64, ref_speech: f64) -> Self {
        let pct = |x: f64| {
            if ref_speech > 0.0 {
                x / ref_speech * 100.0
            } else {
                0.0
            }
        };
        let (fa_p, miss_p, conf_p) = (pct(fa), pct(miss), pct(confusion));
        Self {
            fa_seconds: fa,
            miss_seconds: miss,
            confusion_seconds: confusion,
            ref_speech_seconds: ref_speech,
            fa: fa_p,
            miss: miss_p,
            confusion: conf_p,
            total: fa_p + miss_p + conf_p,
        }
    }

    /// Corpus aggregate: seconds are pooled, then rates recomputed.
    pub fn pooled<'a>(reports: impl IntoIterator<Item = &'a DerReport>) -> Self {
        let (mut fa, mut miss, mut conf, mut total) = (0.0, 0.0, 0.0, 0.0);
        for r in reports {
            fa += r.fa_seconds;
            miss += r.miss_seconds;
            conf += r.confusion_seconds;
            total += r.ref_speech_seconds;
        }
        Self::from_seconds(fa, miss, conf, total)
    }

    /// `key=value` lines, one per field.
    pub fn to_key_values(&self) -> String {
        format!(
            "fa_seconds={:.6}\nmiss_seconds={:.6}\nconfusion_seconds={:.6}\nref_speech_seconds={:.6}\n\
             fa={:.4}\nmiss={:.4}\nconfusion={:.4}\ntotal={:.4}\n",
            self.fa_seconds,
            self.miss_seconds,
            self.confusion_seconds,
            self.ref_speech_seconds,
            self.fa,
            self.miss,
            self.confusion,
            self.total
        )
    }
}

impl fmt::Display for DerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Confusion {:.2}%  FA {:.2}%  Miss {:.2}%  Total {:.2}%",
            self.confusion, self.fa, self.miss, self.total
        )
    }
}

/// One-to-one reference → hypothesis speaker mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeakerMapping {
    pub pairs: Vec<(String, String)>,
    pub matched_seconds: f64,
}

impl SpeakerMapping {
    pub fn hyp_for(&self, reference: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(r, _)| r == reference)
            .map(|(_, h)| h.as_str())
    }
}

/// Maximum-total-overlap mapping. `overlap[r][h]` is the co-active time of
/// reference label `r` and hypothesis label `h`. Pairs with no overlap are
/// left out.
pub fn map_speakers(
    ref_labels: &[String],
    hyp_labels: &[String],
    overlap: &Matrix,
) -> SpeakerMapping {
    mapping_from_pairs(
        ref_labels,
        hyp_labels,
        overlap,
        &optimal_assignment(overlap, true),
    )
}

fn mapping_from_pairs(
    ref_labels: &[String],
    hyp_labels: &[String],
    overlap: &Matrix,
    pairs: &[(usize, usize)],
) -> SpeakerMapping {
    let mut out = Vec::new();
    let mut matched = 0.0;
    for &(r, h) in pairs {
        if overlap[(r, h)] > 0.0 {
            matched += overlap[(r, h)];
            out.push((ref_labels[r].clone(), hyp_labels[h].clone()));
        }
    }
    SpeakerMapping {
        pairs: out,
        matched_seconds: matched,
    }
}

type Span = (i64, i64);

fn union_spans(mut spans: Vec<Span>) -> Vec<Span> {
    spans.retain(|s| s.1 > s.0);
    spans.sort_unstable();
    let mut out: Vec<Span> = Vec::with_capacity(spans.len());
    for s in spans {
        match out.last_mut() {
            Some(last) if s.0 <= last.1 => last.1 = last.1.max(s.1),
            _ => out.push(s),
        }
    }
    out
}

/// `a \ b` for sorted disjoint span lists.
fn subtract_spans(a: &[Span], b: &[Span]) -> Vec<Span> {
    let mut out = Vec::new();
    let mut j = 0;
    for &(mut s, e) in a {
        while j < b.len() && b[j].1 <= s {
            j += 1;
        }
        let mut k = j;
        while k < b.len() && b[k].0 < e {
            if b[k].0 > s {
                out.push((s, b[k].0));
            }
            s = s.max(b[k].1);
            if s >= e {
                break;
            }
            k += 1;
        }
        if s < e {
            out.push((s, e));
        }
    }
    out
}

/// Per-speaker unions of an annotation, keyed by label in first-appearance order.
fn speaker_spans(ann: &Annotation) -> (Vec<String>, Vec<Vec<Span>>) {
    let labels = ann.speakers();
    let mut spans = vec![Vec::new(); labels.len()];
    for s in ann.segments() {
        let idx = labels
            .iter()
            .position(|l| l == s.speaker())
            .expect("label listed");
        spans[idx].push((to_ticks(s.interval.start()), to_ticks(s.interval.end())));
    }
    (labels, spans.into_iter().map(union_spans).collect())
}

/// Spans where at least two of the given per-speaker span lists are active.
fn multi_active(per_speaker: &[Vec<Span>]) -> Vec<Span> {
    let mut events: Vec<(i64, i32)> = Vec::new();
    for spans in per_speaker {
        for &(s, e) in spans {
            events.push((s, 1));
            events.push((e, -1));
        }
    }
    events.sort_unstable();
    let mut out = Vec::new();
    let mut active = 0;
    let mut open = None;
    for (t, d) in events {
        active += d;
        match (active >= 2, open) {
            (true, None) => open = Some(t),
            (false, Some(s)) => {
                out.push((s, t));
                open = None;
            }
            _ => {}
        }
    }
    union_spans(out)
}

fn scoring_spans(reference: &Annotation, opts: &EvalOptions) -> Result<Vec<Span>> {
    if reference.is_empty() {
        return Err(Error::invalid(format!(
            "reference for {} has no segments",
            reference.recording_id
        )));
    }
    if !(opts.collar.is_finite() && opts.collar >= 0.0) {
        return Err(Error::invalid(format!(
            "collar must be >= 0, got {}",
            opts.collar
        )));
    }
    let base = match &opts.uem {
        Some(uem) => union_spans(
            uem.iter()
                .map(|iv| (to_ticks(iv.start()), to_ticks(iv.end())))
                .collect(),
        ),
        None => {
            let first = reference
                .segments()
                .iter()
                .map(|s| s.interval.start())
                .fold(f64::INFINITY, f64::min);
            let last = reference
                .segments()
                .iter()
                .map(|s| s.interval.end())
                .fold(f64::NEG_INFINITY, f64::max);
            vec![(to_ticks(first), to_ticks(last))]
        }
    };
    let (_, per_speaker) = speaker_spans(reference);
    let mut excluded = Vec::new();
    let c = to_ticks(opts.collar);
    if c > 0 {
        for spans in &per_speaker {
            for &(s, e) in spans {
                excluded.push((s - c, s + c));
                excluded.push((e - c, e + c));
            }
        }
    }
    if opts.exclude_overlap {
        excluded.extend(multi_active(&per_speaker));
    }
    Ok(subtract_spans(&base, &union_spans(excluded)))
}

/// Scored time: UEM (or reference span) minus collars and, optionally,
/// overlapped reference speech.
pub fn scoring_region(reference: &Annotation, opts: &EvalOptions) -> Result<Vec<TimeInterval>> {
    scoring_spans(reference, opts)?
        .into_iter()
        .map(|(s, e)| TimeInterval::new(to_seconds(s).max(0.0), to_seconds(e)))
        .collect()
}

/// Elementary piece of the scored timeline with constant speaker sets.
struct Piece {
    ticks: i64,
    refs: Vec<usize>,
    hyps: Vec<usize>,
}

fn active_sets(region: &[Span], reference: &[Vec<Span>], hypothesis: &[Vec<Span>]) -> Vec<Piece> {
    // events: (tick, side, speaker, delta); side 0 = region, 1 = ref, 2 = hyp
    let mut events: Vec<(i64, u8, usize, i32)> = Vec::new();
    for &(s, e) in region {
        events.push((s, 0, 0, 1));
        events.push((e, 0, 0, -1));
    }
    for (side, lists) in [(1u8, reference), (2u8, hypothesis)] {
        for (spk, spans) in lists.iter().enumerate() {
            for &(s, e) in spans {
                events.push((s, side, spk, 1));
                events.push((e, side, spk, -1));
            }
        }
    }
    events.sort_unstable();

    let mut in_region = 0;
    let mut ref_count = vec![0i32; reference.len()];
    let mut hyp_count = vec![0i32; hypothesis.len()];
    let mut pieces = Vec::new();
    let mut i = 0;
    while i < events.len() {
        let t = events[i].0;
        while i < events.len() && events[i].0 == t {
            let (_, side, spk, d) = events[i];
            match side {
                0 => in_region += d,
                1 => ref_count[spk] += d,
                _ => hyp_count[spk] += d,
            }
            i += 1;
        }
        if i == events.len() {
            break;
        }
        let next = events[i].0;
        if in_region > 0 && next > t {
            pieces.push(Piece {
                ticks: next - t,
                refs: (0..reference.len()).filter(|&r| ref_count[r] > 0).collect(),
                hyps: (0..hypothesis.len())
                    .filter(|&h| hyp_count[h] > 0)
                    .collect(),
            });
        }
    }
    pieces
}

/// DER of `hypothesis` against `reference` under `opts`.
pub fn der(
    reference: &Annotation,
    hypothesis: &Annotation,
    opts: &EvalOptions,
) -> Result<DerReport> {
    der_with_mapping(reference, hypothesis, opts).map(|(r, _)| r)
}

pub fn der_with_mapping(
    reference: &Annotation,
    hypothesis: &Annotation,
    opts: &EvalOptions,
) -> Result<(DerReport, SpeakerMapping)> {
    if reference.recording_id != hypothesis.recording_id {
        return Err(Error::invalid(format!(
            "recording ids differ: {} vs {}",
            reference.recording_id, hypothesis.recording_id
        )));
    }
    let region = scoring_spans(reference, opts)?;
    if region.is_empty() {
        return Err(Error::invalid(format!(
            "empty scoring region for {}",
            reference.recording_id
        )));
    }
    let (ref_labels, ref_spans) = speaker_spans(reference);
    let (hyp_labels, hyp_spans) = speaker_spans(hypothesis);
    let pieces = active_sets(&region, &ref_spans, &hyp_spans);

    let mut overlap_ticks = vec![vec![0i64; hyp_labels.len()]; ref_labels.len()];
    for p in &pieces {
        for &r in &p.refs {
            for &h in &p.hyps {
                overlap_ticks[r][h] += p.ticks;
            }
        }
    }
    let overlap = Matrix::from_fn(ref_labels.len(), hyp_labels.len(), |r, h| {
        to_seconds(overlap_ticks[r][h])
    });
    let pairs = optimal_assignment(&overlap, true);
    let mapping = mapping_from_pairs(&ref_labels, &hyp_labels, &overlap, &pairs);
    let mut mapped: Vec<Option<usize>> = vec![None; ref_labels.len()];
    for &(r, h) in &pairs {
        if overlap_ticks[r][h] > 0 {
            mapped[r] = Some(h);
        }
    }

    let (mut fa, mut miss, mut conf, mut speech) = (0i64, 0i64, 0i64, 0i64);
    for p in &pieces {
        let (nr, nh) = (p.refs.len() as i64, p.hyps.len() as i64);
        let correct = p
            .refs
            .iter()
            .filter(|&&r| mapped[r].is_some_and(|h| p.hyps.contains(&h)))
            .count() as i64;
        speech += p.ticks * nr;
        miss += p.ticks * (nr - nh).max(0);
        fa += p.ticks * (nh - nr).max(0);
        conf += p.ticks * (nr.min(nh) - correct);
    }
    if speech == 0 {
        return Err(Error::invalid(format!(
            "no reference speech inside the scoring region of {}",
            reference.recording_id
        )));
    }
    let report = DerReport::from_seconds(
        to_seconds(fa),
        to_seconds(miss),
        to_seconds(conf),
        to_seconds(speech),
    );
    Ok((report, mapping))
}

/// Scores every reference recording; a missing hypothesis counts as all miss.
/// Returns per-recording reports sorted by id and the names of recordings
/// that had no hypothesis.
pub fn der_corpus(
    references: &[Annotation],
    hypotheses: &[Annotation],
    opts: &EvalOptions,
    uem: Option<&BTreeMap<String, Vec<TimeInterval>>>,
) -> Result<(BTreeMap<String, DerReport>, Vec<String>)> {
    let mut reports = BTreeMap::new();
    let mut missing = Vec::new();
    for reference in references {
        let id = &reference.recording_id;
        let hyp = match hypotheses.iter().find(|h| &h.recording_id == id) {
            Some(h) => h.clone(),
            None => {
                missing.push(id.clone());
                Annotation::empty(id.clone())
            }
        };
        let mut o = opts.clone();
        if let Some(map) = uem {
            if let Some(region) = map.get(id) {
                o.uem = Some(region.clone());
            }
        }
        reports.insert(id.clone(), der(reference, &hyp, &o)?);
    }
    Ok((reports, missing))
}
