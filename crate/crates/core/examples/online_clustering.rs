//! Streams windows through the naive online clusterer at several thresholds.

use diarkit::clustering::{cluster_stream, NaiveOnlineClusterer, OnlineClusterer};
use diarkit::synth::{generate, ScenarioKind, SynthScenario};

fn main() -> diarkit::Result<()> {
    let data = generate(&SynthScenario {
        kind: ScenarioKind::Hierarchical,
        n_speakers: 4,
        duration: 60.0,
        within_noise_deg: 8.0,
        seed: 5,
        ..SynthScenario::default()
    })?;
    let embeddings: Vec<_> = data.windows.iter().map(|w| w.embedding.clone()).collect();

    for threshold in [0.2, 0.5, 0.7, 0.9, 0.98] {
        let labels = cluster_stream(&mut NaiveOnlineClusterer::new(threshold)?, &embeddings)?;
        println!("threshold {threshold:.2}: {} clusters", labels.k());
    }

    // labels are final as soon as they are emitted
    let mut clusterer = NaiveOnlineClusterer::new(0.7)?;
    let first: Vec<usize> = embeddings
        .iter()
        .take(12)
        .map(|e| clusterer.push(e))
        .collect::<diarkit::Result<_>>()?;
    println!("first labels at 0.70: {first:?}");
    println!("truth:                {:?}", &data.window_speakers[..12]);
    Ok(())
}
