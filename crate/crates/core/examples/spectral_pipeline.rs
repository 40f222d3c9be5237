//! End-to-end spectral diarization of a synthetic recording, scored with DER.
//!
//! Run with `cargo run --release --example spectral_pipeline -- [speakers] [seed]`.

use diarkit::metrics::{der, EvalOptions};
use diarkit::pipeline::{diarize, DiarizeConfig};
use diarkit::synth::{generate, SynthScenario};

fn main() -> diarkit::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_speakers = args.next().map_or(3, |a| a.parse().expect("speakers"));
    let seed = args.next().map_or(7, |a| a.parse().expect("seed"));

    let scenario = SynthScenario {
        n_speakers,
        duration: 90.0,
        seed,
        ..SynthScenario::default()
    };
    let data = generate(&scenario)?;
    println!(
        "{} windows of dim {}, {} reference speakers",
        data.windows.len(),
        scenario.dim,
        data.reference.speakers().len()
    );

    for (label, sigma) in [("defaults", None), ("no blur", Some(0.0))] {
        let mut cfg = DiarizeConfig::default().seeded(seed);
        if let Some(s) = sigma {
            cfg.spectral.sigma = s;
        }
        let out = diarize(
            &scenario.recording_id,
            &data.windows,
            Some(&data.regions),
            &cfg,
        )?;
        let report = der(&data.reference, &out.annotation, &EvalOptions::default())?;
        println!(
            "{label:>9}: {} segments -> {} speakers, DER {:.2}% (fa {:.2}, miss {:.2}, confusion {:.2})",
            out.segments.len(),
            out.clustering.k(),
            report.total,
            report.fa,
            report.miss,
            report.confusion
        );
    }
    Ok(())
}
