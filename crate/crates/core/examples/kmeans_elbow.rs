//! Prints the MSCD curve of spherical k-means and the elbow it implies.

use diarkit::clustering::{estimate_k_elbow, kmeans, mscd_curve, KMeansParams};
use diarkit::synth::{generate, SynthScenario};

fn main() -> diarkit::Result<()> {
    let data = generate(&SynthScenario {
        n_speakers: 4,
        duration: 40.0,
        within_noise_deg: 10.0,
        seed: 11,
        ..SynthScenario::default()
    })?;
    let embeddings: Vec<_> = data.windows.iter().map(|w| w.embedding.clone()).collect();
    let params = KMeansParams::default();

    let curve = mscd_curve(&embeddings, 8, &params)?;
    println!("k  MSCD       drop");
    for (i, v) in curve.iter().enumerate() {
        let drop = if i == 0 {
            String::new()
        } else {
            format!("{:.6}", curve[i - 1] - v)
        };
        println!("{:<2} {v:.6}  {drop}", i + 1);
    }
    let k = estimate_k_elbow(&embeddings, 2, 8, &params)?;
    println!(
        "elbow: k = {k} (planted {})",
        data.reference.speakers().len()
    );

    let labels = kmeans(
        &embeddings,
        &KMeansParams {
            k: Some(k),
            ..params
        },
    )?;
    let mut sizes = vec![0usize; labels.k()];
    for &l in labels.labels() {
        sizes[l] += 1;
    }
    println!("cluster sizes: {sizes:?}");
    Ok(())
}
