//! Scores a hand-written hypothesis under different evaluation conventions.

use diarkit::metrics::{der_with_mapping, scoring_region, EvalOptions};
use diarkit::{Annotation, Segment, TimeInterval};

fn annotation(segments: &[(f64, f64, &str)]) -> diarkit::Result<Annotation> {
    let segments = segments
        .iter()
        .map(|&(s, e, who)| Segment::labeled(TimeInterval::new(s, e)?, who))
        .collect::<diarkit::Result<Vec<_>>>()?;
    Annotation::new("meeting", segments)
}

fn main() -> diarkit::Result<()> {
    let reference = annotation(&[(0.0, 4.0, "alice"), (3.5, 8.0, "bob"), (8.5, 12.0, "alice")])?;
    let hypothesis = annotation(&[(0.0, 3.8, "spk0"), (3.8, 9.0, "spk1"), (9.0, 12.0, "spk1")])?;

    let cases = [
        (
            "no collar, overlap scored",
            EvalOptions {
                collar: 0.0,
                exclude_overlap: false,
                uem: None,
            },
        ),
        ("no collar", EvalOptions::with_collar(0.0)),
        ("250 ms collar", EvalOptions::default()),
        (
            "collar + first 6 s only",
            EvalOptions {
                uem: Some(vec![TimeInterval::new(0.0, 6.0)?]),
                ..EvalOptions::default()
            },
        ),
    ];
    for (name, opts) in cases {
        let (report, mapping) = der_with_mapping(&reference, &hypothesis, &opts)?;
        let scored: f64 = scoring_region(&reference, &opts)?
            .iter()
            .map(|iv| iv.duration())
            .sum();
        println!("{name}: scored {scored:.2} s, mapping {:?}", mapping.pairs);
        print!("{}", report.to_key_values());
        println!();
    }
    Ok(())
}
