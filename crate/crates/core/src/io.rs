//! Text and image formats: RTTM, UEM, embedding CSV, speech-region CSV and
//! binary PGM heatmaps.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::aggregation::{SpeechRegion, WindowEmbedding};
use crate::error::{Error, Result};
use crate::numerics::Matrix;
use crate::types::{union_intervals, Annotation, EmbeddingVector, Segment, TimeInterval};

/// One `SPEAKER` line of an RTTM file.
#[derive(Debug, Clone, PartialEq)]
pub struct RttmLine {
    pub file: String,
    pub channel: String,
    pub tbeg: f64,
    pub tdur: f64,
    pub name: String,
}

impl RttmLine {
    pub fn parse(line: &str, line_no: usize) -> Result<Option<Self>> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.first() != Some(&"SPEAKER") {
            return Ok(None);
        }
        if fields.len() < 8 {
            return Err(Error::parse(
                line_no,
                format!(
                    "SPEAKER line needs at least 8 fields, found {}",
                    fields.len()
                ),
            ));
        }
        let tbeg = parse_finite(fields[3], "tbeg", line_no)?;
        let tdur = parse_finite(fields[4], "tdur", line_no)?;
        if tdur <= 0.0 {
            return Err(Error::parse(
                line_no,
                format!("tdur must be > 0, got {tdur}"),
            ));
        }
        if tbeg < 0.0 {
            return Err(Error::parse(
                line_no,
                format!("tbeg must be >= 0, got {tbeg}"),
            ));
        }
        Ok(Some(Self {
            file: fields[1].to_string(),
            channel: fields[2].to_string(),
            tbeg,
            tdur,
            name: fields[7].to_string(),
        }))
    }
}

fn parse_finite(field: &str, what: &str, line_no: usize) -> Result<f64> {
    let v: f64 = field
        .parse()
        .map_err(|_| Error::parse(line_no, format!("{what} is not a number: {field:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(
            line_no,
            format!("{what} is not finite: {field:?}"),
        ));
    }
    Ok(v)
}

/// One annotation per file id, ordered by id. Channels are merged.
pub fn parse_rttm(text: &str) -> Result<Vec<Annotation>> {
    let mut by_file: BTreeMap<String, Vec<Segment>> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let Some(r) = RttmLine::parse(line, i + 1)? else {
            continue;
        };
        let iv = TimeInterval::new(r.tbeg, r.tbeg + r.tdur)
            .map_err(|e| Error::parse(i + 1, e.to_string()))?;
        let seg = Segment::labeled(iv, r.name).map_err(|e| Error::parse(i + 1, e.to_string()))?;
        by_file.entry(r.file).or_default().push(seg);
    }
    by_file
        .into_iter()
        .map(|(id, segs)| Annotation::new(id, segs))
        .collect()
}

pub fn write_rttm(annotation: &Annotation) -> String {
    let mut out = String::new();
    for s in annotation.segments() {
        let _ = writeln!(
            out,
            "SPEAKER {} 1 {:.6} {:.6} <NA> <NA> {} <NA> <NA>",
            annotation.recording_id,
            s.interval.start(),
            s.interval.duration(),
            s.speaker()
        );
    }
    out
}

/// Lines `file channel start end`; intervals are merged per file.
pub fn parse_uem(text: &str) -> Result<BTreeMap<String, Vec<TimeInterval>>> {
    let mut raw: BTreeMap<String, Vec<TimeInterval>> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with(';') || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::parse(
                line_no,
                format!("UEM line needs 4 fields, found {}", fields.len()),
            ));
        }
        let start = parse_finite(fields[2], "start", line_no)?;
        let end = parse_finite(fields[3], "end", line_no)?;
        if start >= end {
            return Err(Error::parse(line_no, format!("start {start} >= end {end}")));
        }
        let iv = TimeInterval::new(start, end).map_err(|e| Error::parse(line_no, e.to_string()))?;
        raw.entry(fields[0].to_string()).or_default().push(iv);
    }
    Ok(raw
        .into_iter()
        .map(|(k, v)| (k, union_intervals(v)))
        .collect())
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => Error::parse(
            line,
            format!("row has {len} fields, expected {expected_len}"),
        ),
        other => Error::parse(line, format!("{other:?}")),
    }
}

/// Header `start,end,v0,...,v{D-1}`; the dimension comes from the header.
pub fn read_embeddings_csv(text: &str) -> Result<Vec<WindowEmbedding>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(csv_error)?.clone();
    if header.len() < 3 || &header[0] != "start" || &header[1] != "end" {
        return Err(Error::parse(
            1,
            "header must be start,end,v0,...".to_string(),
        ));
    }
    for (j, name) in header.iter().skip(2).enumerate() {
        if name != format!("v{j}") {
            return Err(Error::parse(
                1,
                format!("column {} should be v{j}, found {name:?}", j + 2),
            ));
        }
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let values: Vec<f64> = record
            .iter()
            .enumerate()
            .map(|(j, f)| parse_finite(f, &format!("field {}", j + 1), line))
            .collect::<Result<_>>()?;
        let interval = TimeInterval::new(values[0], values[1])
            .map_err(|e| Error::parse(line, e.to_string()))?;
        let embedding = EmbeddingVector::new(values[2..].to_vec())
            .map_err(|e| Error::parse(line, e.to_string()))?;
        out.push(WindowEmbedding {
            interval,
            embedding,
        });
    }
    Ok(out)
}

/// Values use the shortest representation that parses back to the same `f64`.
pub fn write_embeddings_csv(windows: &[WindowEmbedding]) -> Result<String> {
    let dim = windows.first().map_or(0, |w| w.embedding.dim());
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["start".to_string(), "end".to_string()];
    header.extend((0..dim).map(|j| format!("v{j}")));
    writer.write_record(&header).map_err(csv_error)?;
    for (i, w) in windows.iter().enumerate() {
        if w.embedding.dim() != dim {
            return Err(Error::invalid(format!(
                "window {i} has dimension {}, expected {dim}",
                w.embedding.dim()
            )));
        }
        let mut row = vec![w.interval.start().to_string(), w.interval.end().to_string()];
        row.extend(w.embedding.as_slice().iter().map(|v| v.to_string()));
        writer.write_record(&row).map_err(csv_error)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Rows `start,end`; a leading `start,end` header is optional.
pub fn read_regions_csv(text: &str) -> Result<Vec<SpeechRegion>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(i + 1, |p| p.line() as usize);
        if i == 0 && record.iter().collect::<Vec<_>>() == ["start", "end"] {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::parse(
                line,
                format!("row has {} fields, expected 2", record.len()),
            ));
        }
        let start = parse_finite(&record[0], "start", line)?;
        let end = parse_finite(&record[1], "end", line)?;
        out.push(TimeInterval::new(start, end).map_err(|e| Error::parse(line, e.to_string()))?);
    }
    Ok(out)
}

pub fn write_regions_csv(regions: &[SpeechRegion]) -> String {
    let mut out = String::from("start,end\n");
    for r in regions {
        let _ = writeln!(out, "{},{}", r.start(), r.end());
    }
    out
}

/// Binary P5 bytes, one pixel per entry, `[min, max]` mapped affinely onto
/// `[0, 255]` with rounding. A constant matrix maps to 128.
pub fn encode_pgm(m: &Matrix) -> Result<Vec<u8>> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::invalid("cannot render an empty matrix"));
    }
    if m.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    let (lo, hi) = m
        .as_slice()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let mut out = format!("P5\n{} {}\n255\n", m.cols(), m.rows()).into_bytes();
    out.extend(m.as_slice().iter().map(|&v| {
        if hi > lo {
            ((v - lo) / (hi - lo) * 255.0).round().clamp(0.0, 255.0) as u8
        } else {
            128
        }
    }));
    Ok(out)
}

pub fn write_pgm_heatmap(m: &Matrix, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_pgm(m)?)?;
    Ok(())
}
