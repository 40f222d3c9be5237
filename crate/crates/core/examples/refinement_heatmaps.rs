//! Writes the raw affinity matrix and each refinement stage as PGM heatmaps.
//!
//! Run with `cargo run --release --example refinement_heatmaps -- [out_dir]`.

use std::path::PathBuf;

use diarkit::clustering::{spectral_cluster_traced, SpectralParams};
use diarkit::io::write_pgm_heatmap;
use diarkit::synth::{generate, SynthScenario};

fn main() -> diarkit::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("diarkit_stages"));
    std::fs::create_dir_all(&dir)?;

    let data = generate(&SynthScenario {
        n_speakers: 3,
        duration: 30.0,
        within_noise_deg: 12.0,
        seed: 2,
        ..SynthScenario::default()
    })?;
    // windows ordered by speaker make the block structure visible
    let mut order: Vec<usize> = (0..data.windows.len()).collect();
    order.sort_by_key(|&i| data.window_speakers[i]);
    let embeddings: Vec<_> = order
        .iter()
        .map(|&i| data.windows[i].embedding.clone())
        .collect();

    let out = spectral_cluster_traced(&embeddings, &SpectralParams::default())?;
    for (i, (name, m)) in out.stages.iter().flatten().enumerate() {
        let path = dir.join(format!("stage_{i}_{name}.pgm"));
        write_pgm_heatmap(m, &path)?;
        println!(
            "{:<10} {}x{} -> {}",
            name,
            m.rows(),
            m.cols(),
            path.display()
        );
    }
    let top: Vec<String> = out
        .eigenvalues
        .iter()
        .take(6)
        .map(|v| format!("{v:.3}"))
        .collect();
    println!("leading eigenvalues: {}", top.join(" "));
    println!("estimated speakers: {}", out.k);
    Ok(())
}
