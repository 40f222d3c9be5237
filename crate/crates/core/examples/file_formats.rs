//! Round-trips the on-disk formats: embeddings CSV, speech regions CSV,
//! RTTM and UEM.

use diarkit::io::{
    parse_rttm, parse_uem, read_embeddings_csv, read_regions_csv, write_embeddings_csv,
    write_regions_csv, write_rttm,
};
use diarkit::synth::{generate, SynthScenario};

fn main() -> diarkit::Result<()> {
    let data = generate(&SynthScenario {
        recording_id: "demo".into(),
        duration: 5.0,
        dim: 4,
        ..SynthScenario::default()
    })?;

    let csv = write_embeddings_csv(&data.windows)?;
    println!("embeddings CSV ({} rows):", data.windows.len());
    for line in csv.lines().take(3) {
        println!("  {line}");
    }
    assert_eq!(read_embeddings_csv(&csv)?, data.windows);

    let regions = write_regions_csv(&data.regions);
    println!(
        "regions CSV:\n  {}",
        regions.trim_end().replace('\n', "\n  ")
    );
    assert_eq!(read_regions_csv(&regions)?, data.regions);

    let rttm = write_rttm(&data.reference);
    println!("RTTM:\n  {}", rttm.trim_end().replace('\n', "\n  "));
    let parsed = parse_rttm(&rttm)?;
    assert_eq!(write_rttm(&parsed[0]), rttm);

    let uem = parse_uem(";; scored part\ndemo 1 0.0 2.5\ndemo 1 2.0 4.0\n")?;
    println!("UEM for demo: {:?}", uem["demo"]);
    Ok(())
}
