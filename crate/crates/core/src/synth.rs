//! Seeded synthetic conversations with planted speaker directions.
//!
//! A scenario draws a speaker-turn sequence, a mean direction per speaker, and
//! window embeddings scattered around each speaker's mean. Everything derives
//! from one seed, so identical scenarios give identical output.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, StandardNormal};

use crate::aggregation::{SpeechRegion, WindowEmbedding};
use crate::error::{Error, Result};
use crate::types::{Annotation, EmbeddingVector, Segment, TimeInterval};

pub const WINDOW_LEN: f64 = 0.24;
pub const WINDOW_STEP: f64 = 0.12;
/// Silences between turns are uniform on `[0, MAX_SILENCE)`.
pub const MAX_SILENCE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Mutually orthogonal speaker directions.
    Separated,
    /// Separated geometry; speaker 0 holds most of the turns.
    Imbalanced,
    /// Two groups of speakers; speakers sit close to their group direction.
    Hierarchical,
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "separated" => Ok(Self::Separated),
            "imbalanced" => Ok(Self::Imbalanced),
            "hierarchical" => Ok(Self::Hierarchical),
            other => Err(Error::invalid(format!("unknown scenario {other:?}"))),
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Separated => "separated",
            Self::Imbalanced => "imbalanced",
            Self::Hierarchical => "hierarchical",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthScenario {
    pub recording_id: String,
    pub n_speakers: usize,
    /// Seconds.
    pub duration: f64,
    pub dim: usize,
    pub kind: ScenarioKind,
    /// Target mean angle (degrees) between a window vector and its speaker mean.
    pub within_noise_deg: f64,
    /// Mean turn length in seconds.
    pub turn_mean: f64,
    /// Probability that a turn belongs to speaker 0 (imbalanced only).
    pub imbalance_ratio: f64,
    /// Angle between the two group directions (hierarchical only).
    pub group_angle_deg: f64,
    /// Offset of each speaker from its group direction (hierarchical only).
    pub speaker_angle_deg: f64,
    pub seed: u64,
}

impl Default for SynthScenario {
    fn default() -> Self {
        Self {
            recording_id: "synth".into(),
            n_speakers: 2,
            duration: 120.0,
            dim: 16,
            kind: ScenarioKind::Separated,
            within_noise_deg: 5.0,
            turn_mean: 3.0,
            imbalance_ratio: 0.8,
            group_angle_deg: 70.0,
            speaker_angle_deg: 25.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub reference: Annotation,
    pub windows: Vec<WindowEmbedding>,
    pub regions: Vec<SpeechRegion>,
    /// Planted unit mean direction per speaker; index `i` is label `S{i}`.
    pub speaker_means: Vec<Vec<f64>>,
    /// Planted speaker index of every window.
    pub window_speakers: Vec<usize>,
}

pub fn speaker_label(i: usize) -> String {
    format!("S{i}")
}

fn validate(s: &SynthScenario) -> Result<()> {
    if s.n_speakers == 0 {
        return Err(Error::invalid("n_speakers must be >= 1"));
    }
    if !(s.duration.is_finite() && s.duration > 0.0) {
        return Err(Error::invalid(format!(
            "duration must be > 0, got {}",
            s.duration
        )));
    }
    if s.dim == 0 {
        return Err(Error::invalid("dim must be >= 1"));
    }
    if !(s.within_noise_deg >= 0.0 && s.within_noise_deg < 90.0) {
        return Err(Error::invalid(format!(
            "noise angle {} outside [0, 90)",
            s.within_noise_deg
        )));
    }
    if s.turn_mean.is_nan() || s.turn_mean <= 0.0 {
        return Err(Error::invalid("turn_mean must be > 0"));
    }
    if s.kind == ScenarioKind::Imbalanced && !(s.imbalance_ratio > 0.0 && s.imbalance_ratio < 1.0) {
        return Err(Error::invalid(format!(
            "imbalance ratio {} outside (0, 1)",
            s.imbalance_ratio
        )));
    }
    if s.kind == ScenarioKind::Hierarchical {
        for (name, a) in [
            ("group", s.group_angle_deg),
            ("speaker", s.speaker_angle_deg),
        ] {
            if !(a > 0.0 && a <= 90.0) {
                return Err(Error::invalid(format!("{name} angle {a} outside (0, 90]")));
            }
        }
    }
    Ok(())
}

/// `dim` random orthonormal vectors (Gram–Schmidt on Gaussian draws).
fn random_basis(dim: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(count);
    while basis.len() < count {
        let mut v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        for b in &basis {
            let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            basis.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    basis
}

fn speaker_means(s: &SynthScenario, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<f64>>> {
    match s.kind {
        ScenarioKind::Separated | ScenarioKind::Imbalanced => {
            if s.n_speakers > s.dim {
                return Err(Error::invalid(format!(
                    "{} orthogonal speakers do not fit in dimension {}",
                    s.n_speakers, s.dim
                )));
            }
            Ok(random_basis(s.dim, s.n_speakers, rng))
        }
        ScenarioKind::Hierarchical => {
            // speaker i joins group i % 2; within a group speakers use their own
            // orthogonal axis pair (+/-) around the group direction
            let largest_group = s.n_speakers.div_ceil(2);
            let axes_per_group = largest_group.div_ceil(2);
            let needed = 2 + 2 * axes_per_group;
            if needed > s.dim {
                return Err(Error::invalid(format!(
                    "hierarchical geometry for {} speakers needs dimension >= {needed}, got {}",
                    s.n_speakers, s.dim
                )));
            }
            let basis = random_basis(s.dim, needed, rng);
            let g = s.group_angle_deg.to_radians();
            let groups = [
                basis[0].clone(),
                basis[0]
                    .iter()
                    .zip(&basis[1])
                    .map(|(a, b)| g.cos() * a + g.sin() * b)
                    .collect::<Vec<f64>>(),
            ];
            let a = s.speaker_angle_deg.to_radians();
            Ok((0..s.n_speakers)
                .map(|i| {
                    let group = i % 2;
                    let member = i / 2;
                    let axis = &basis[2 + group * axes_per_group + member / 2];
                    let sign = if member % 2 == 0 { 1.0 } else { -1.0 };
                    let v: Vec<f64> = groups[group]
                        .iter()
                        .zip(axis)
                        .map(|(c, w)| a.cos() * c + sign * a.sin() * w)
                        .collect();
                    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    v.into_iter().map(|x| x / n).collect()
                })
                .collect())
        }
    }
}

/// `E[χ_m]` for `m ≥ 1` degrees of freedom.
fn chi_mean(m: usize) -> f64 {
    // r(m) = Γ((m+1)/2) / Γ(m/2), r(m+2) = r(m)·(m+1)/m
    let pi = std::f64::consts::PI;
    let mut r = if m % 2 == 1 {
        1.0 / pi.sqrt()
    } else {
        pi.sqrt() / 2.0
    };
    let mut k = if m % 2 == 1 { 1 } else { 2 };
    while k < m {
        r *= (k + 1) as f64 / k as f64;
        k += 2;
    }
    std::f64::consts::SQRT_2 * r
}

/// Tangent-plane Gaussian of scale `scale`, added to `mean`, then normalized.
fn perturb(mean: &[f64], scale: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut g: Vec<f64> = mean
        .iter()
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            scale * z
        })
        .collect();
    let d: f64 = g.iter().zip(mean).map(|(x, m)| x * m).sum();
    g.iter_mut().zip(mean).for_each(|(x, m)| *x -= d * m);
    let v: Vec<f64> = mean.iter().zip(&g).map(|(m, x)| m + x).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

struct Turn {
    start: f64,
    end: f64,
    speaker: usize,
}

fn draw_turns(s: &SynthScenario, rng: &mut ChaCha8Rng) -> Result<Vec<Turn>> {
    // shifted exponential: every turn holds at least one window, mean stays turn_mean
    let min_len = WINDOW_LEN.min(s.turn_mean * 0.5);
    let tail = Exp::new(1.0 / (s.turn_mean - min_len))
        .map_err(|e| Error::invalid(format!("turn length distribution: {e}")))?;
    let n = s.n_speakers;
    let mut turns = Vec::new();
    let mut t = 0.0;
    let mut prev: Option<usize> = None;
    while t < s.duration {
        let speaker = match (s.kind, prev) {
            _ if n == 1 => 0,
            (ScenarioKind::Imbalanced, _) => {
                if rng.random::<f64>() < s.imbalance_ratio {
                    0
                } else {
                    1 + rng.random_range(0..n - 1)
                }
            }
            (_, None) => rng.random_range(0..n),
            (_, Some(p)) => {
                let k = rng.random_range(0..n - 1);
                if k >= p {
                    k + 1
                } else {
                    k
                }
            }
        };
        let len = min_len + tail.sample(rng);
        let end = (t + len).min(s.duration);
        if end - t < WINDOW_LEN {
            break;
        }
        turns.push(Turn {
            start: t,
            end,
            speaker,
        });
        prev = Some(speaker);
        t = end + rng.random::<f64>() * MAX_SILENCE;
    }
    if turns.is_empty() {
        return Err(Error::invalid(format!(
            "duration {} too short for a single window",
            s.duration
        )));
    }
    Ok(turns)
}

pub fn generate(s: &SynthScenario) -> Result<SynthOutput> {
    validate(s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let means = speaker_means(s, &mut rng)?;
    let turns = draw_turns(s, &mut rng)?;

    let scale = if s.within_noise_deg > 0.0 && s.dim > 1 {
        s.within_noise_deg.to_radians().tan() / chi_mean(s.dim - 1)
    } else {
        0.0
    };

    let mut segments = Vec::with_capacity(turns.len());
    let mut regions = Vec::with_capacity(turns.len());
    let mut windows = Vec::new();
    let mut window_speakers = Vec::new();
    for turn in &turns {
        let iv = TimeInterval::new(turn.start, turn.end)?;
        segments.push(Segment::labeled(iv, speaker_label(turn.speaker))?);
        regions.push(iv);
        let mut j = 0usize;
        loop {
            let ws = turn.start + j as f64 * WINDOW_STEP;
            let we = ws + WINDOW_LEN;
            if we > turn.end + 1e-12 {
                break;
            }
            let mean = &means[turn.speaker];
            let v = if scale > 0.0 {
                perturb(mean, scale, &mut rng)
            } else {
                mean.clone()
            };
            windows.push(WindowEmbedding {
                interval: TimeInterval::new(ws, we.min(turn.end))?,
                embedding: EmbeddingVector::new(v)?,
            });
            window_speakers.push(turn.speaker);
            j += 1;
        }
    }
    Ok(SynthOutput {
        reference: Annotation::new(s.recording_id.clone(), segments)?,
        windows,
        regions,
        speaker_means: means,
        window_speakers,
    })
}

/// Angle in degrees between two nonzero vectors.
pub fn angle_deg(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    (dot / (na * nb)).clamp(-1.0, 1.0).acos().to_degrees()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeakerStats {
    pub speaker: String,
    pub windows: usize,
    /// Unit empirical mean direction.
    pub mean_direction: Vec<f64>,
    /// Mean angle (degrees) of member windows to `mean_direction`.
    pub spread_deg: f64,
}

/// Per-speaker empirical direction and angular spread, attributing each
/// window to the reference segment containing its center. Speakers are listed
/// in first-appearance order; windows outside every segment are ignored.
pub fn angular_stats(windows: &[WindowEmbedding], reference: &Annotation) -> Vec<SpeakerStats> {
    let labels = reference.speakers();
    let dim = windows.first().map_or(0, |w| w.embedding.dim());
    let mut members: Vec<Vec<Vec<f64>>> = vec![Vec::new(); labels.len()];
    for w in windows {
        let c = w.interval.center();
        if let Some(seg) = reference.segments().iter().find(|s| s.interval.contains(c)) {
            let idx = labels
                .iter()
                .position(|l| l == seg.speaker())
                .expect("listed");
            if let Ok(u) = w.embedding.normalized() {
                members[idx].push(u.into_inner());
            }
        }
    }
    labels
        .into_iter()
        .zip(members)
        .map(|(speaker, vs)| {
            let mut sum = vec![0.0; dim];
            for v in &vs {
                sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
            }
            let n = sum.iter().map(|x| x * x).sum::<f64>().sqrt();
            let mean_direction: Vec<f64> = if n > 0.0 {
                sum.iter().map(|x| x / n).collect()
            } else {
                sum
            };
            let spread_deg = if vs.is_empty() || n == 0.0 {
                0.0
            } else {
                vs.iter()
                    .map(|v| angle_deg(v, &mean_direction))
                    .sum::<f64>()
                    / vs.len() as f64
            };
            SpeakerStats {
                speaker,
                windows: vs.len(),
                mean_direction,
                spread_deg,
            }
        })
        .collect()
}
