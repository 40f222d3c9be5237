//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`). The exit status is success
//! unless `DIARKIT_ACCEPTANCE_STRICT=1` is set and at least one criterion
//! fails, so a failing criterion is reported without hiding the rest of the
//! test suite.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::{Duration, Instant};

use diarkit::cli::run_with;
use diarkit::clustering::{
    estimate_k_eigengap, refine_chain, refine_diffuse, refine_row_max_normalize, refine_symmetrize,
    refine_threshold, spectral_cluster, SpectralParams,
};
use diarkit::metrics::{der, map_speakers, EvalOptions};
use diarkit::numerics::{eigh, Matrix};
use diarkit::pipeline::{diarize, Algorithm, DiarizeConfig};
use diarkit::synth::{generate, ScenarioKind, SynthOutput, SynthScenario};
use diarkit::{AffinityMatrix, Annotation, EmbeddingVector, Error, Segment, TimeInterval};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Refinement settings chosen on dev seeds 1000..1020 (disjoint from every
/// seed used below): blur off, default percentile.
fn tuned_spectral(seed: u64) -> DiarizeConfig {
    let mut c = DiarizeConfig::with_algorithm(Algorithm::Spectral).seeded(seed);
    c.spectral.sigma = 0.0;
    c
}

fn kmeans_elbow(seed: u64) -> DiarizeConfig {
    DiarizeConfig::with_algorithm(Algorithm::KMeans).seeded(seed)
}

fn naive_online() -> DiarizeConfig {
    DiarizeConfig::with_algorithm(Algorithm::Naive)
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn criterion(name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let o = f();
    let elapsed = t.elapsed();
    let in_time = elapsed < limit;
    let pass = o.pass && in_time;
    println!(
        "{} {name}: {} [{:.2}s, limit {:.0}s{}]",
        if pass { "PASS" } else { "FAIL" },
        o.detail,
        elapsed.as_secs_f64(),
        limit.as_secs_f64(),
        if in_time { "" } else { ", too slow" }
    );
    pass
}

fn close(a: &Matrix, rows: &[&[f64]], tol: f64) -> bool {
    let b = Matrix::from_rows(rows).unwrap();
    a.rows() == b.rows() && a.cols() == b.cols() && a.max_abs_diff(&b) <= tol
}

fn refinement_suite() -> Outcome {
    const TOL: f64 = 1e-12;
    let m = |rows: &[&[f64]]| Matrix::from_rows(rows).unwrap();
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };

    let row = m(&[&[0.9, 0.5, 0.1]]);
    check(
        "threshold soft",
        close(
            &refine_threshold(&row, 50.0, 0.01).unwrap(),
            &[&[0.9, 0.5, 0.001]],
            TOL,
        ),
    );
    check(
        "threshold hard",
        close(
            &refine_threshold(&row, 50.0, 0.0).unwrap(),
            &[&[0.9, 0.5, 0.0]],
            TOL,
        ),
    );
    let constant = m(&[&[0.3, 0.3, 0.3, 0.3]]);
    check(
        "threshold constant",
        [1.0, 37.5, 50.0, 99.0]
            .iter()
            .all(|&p| refine_threshold(&constant, p, 0.01).unwrap() == constant),
    );

    let sym = m(&[&[1.0, 0.2], &[0.2, 3.0]]);
    check("symmetrize symmetric", refine_symmetrize(&sym) == sym);
    let asym = m(&[&[0.0, 1.0], &[0.2, 0.0]]);
    let once = refine_symmetrize(&asym);
    check(
        "symmetrize example",
        close(&once, &[&[0.0, 1.0], &[1.0, 0.0]], TOL),
    );
    check("symmetrize idempotent", refine_symmetrize(&once) == once);

    check(
        "diffuse identity",
        refine_diffuse(&Matrix::identity(3)) == Matrix::identity(3),
    );
    let d = refine_diffuse(&m(&[&[1.0, 0.5], &[0.5, 1.0]]));
    check(
        "diffuse example",
        close(&d, &[&[1.25, 1.0], &[1.0, 1.25]], TOL),
    );
    let psd = eigh(&refine_diffuse(&m(&[
        &[0.3, -1.0, 0.2],
        &[0.7, 0.1, -0.4],
        &[0.0, 0.5, 0.9],
    ])))
    .unwrap();
    check("diffuse psd", psd.values.iter().all(|&v| v >= -TOL));

    let n = refine_row_max_normalize(&m(&[&[1.25, 1.0], &[1.0, 1.25]])).unwrap();
    check(
        "normalize example",
        close(&n, &[&[1.0, 0.8], &[0.8, 1.0]], TOL),
    );
    check(
        "normalize idempotent",
        refine_row_max_normalize(&n).unwrap() == n,
    );
    let n2 = refine_row_max_normalize(&m(&[&[2.0, 4.0], &[0.5, 0.25]])).unwrap();
    check(
        "normalize per row",
        close(&n2, &[&[0.5, 1.0], &[1.0, 0.5]], TOL),
    );
    check(
        "normalize degenerate",
        matches!(
            refine_row_max_normalize(&m(&[&[1.0, 0.0], &[0.0, -1.0]])),
            Err(Error::DegenerateAffinity { row: 1, .. })
        ),
    );

    let block: &[&[f64]] = &[
        &[1.0, 1.0, 0.0, 0.0],
        &[1.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 1.0],
        &[0.0, 0.0, 1.0, 1.0],
    ];
    let params = SpectralParams {
        sigma: 0.0,
        p_percentile: 50.0,
        soft_multiplier: 0.0,
        ..SpectralParams::default()
    };
    let chain = refine_chain(&AffinityMatrix::new(m(block)).unwrap(), &params).unwrap();
    check("block chain", close(&chain, block, TOL));

    if failures.is_empty() {
        outcome(
            true,
            "all refinement examples and the block chain match at 1e-12",
        )
    } else {
        outcome(false, format!("mismatches: {}", failures.join(", ")))
    }
}

fn eigen_suite() -> Outcome {
    const TOL: f64 = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst_rec: f64 = 0.0;
    let mut worst_orth: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(2..=50);
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = rng.random_range(-1.0..1.0);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        let d = eigh(&a).unwrap();
        let v = &d.vectors;
        // A v_j = λ_j v_j, column by column
        let av = a.matmul(v).unwrap();
        for i in 0..n {
            for j in 0..n {
                worst_rec = worst_rec.max((av[(i, j)] - d.values[j] * v[(i, j)]).abs());
            }
        }
        let vtv = v.transpose().matmul(v).unwrap();
        worst_orth = worst_orth.max(vtv.max_abs_diff(&Matrix::identity(n)));
    }
    let block = Matrix::from_rows(&[
        [1.0, 1.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 1.0],
        [0.0, 0.0, 1.0, 1.0],
    ])
    .unwrap();
    let k = estimate_k_eigengap(&eigh(&block).unwrap().values, 1, 3, 1e-10).unwrap();
    outcome(
        worst_rec <= TOL && worst_orth <= TOL && k == 2,
        format!("200 matrices: max |Av-λv| {worst_rec:.2e}, max |VᵀV-I| {worst_orth:.2e}; block eigen-gap k={k}"),
    )
}

/// Random labeled timeline on a 10 ms grid (times in integer centiseconds).
fn random_cs_annotation(
    rng: &mut ChaCha8Rng,
    speakers: usize,
    max_segs: usize,
) -> Vec<(i64, i64, usize)> {
    let count = rng.random_range(1..=max_segs);
    (0..count)
        .map(|_| {
            let s = rng.random_range(0..2000i64);
            let len = rng.random_range(1..400i64);
            (s, s + len, rng.random_range(0..speakers))
        })
        .collect()
}

fn to_annotation(id: &str, prefix: &str, segs: &[(i64, i64, usize)]) -> Annotation {
    Annotation::new(
        id,
        segs.iter()
            .map(|&(s, e, k)| {
                Segment::labeled(
                    TimeInterval::new(s as f64 / 100.0, e as f64 / 100.0).unwrap(),
                    format!("{prefix}{k}"),
                )
                .unwrap()
            })
            .collect(),
    )
    .unwrap()
}

fn permutations_max(w: &[Vec<i64>]) -> i64 {
    // best injective partial map of rows into columns
    fn go(w: &[Vec<i64>], r: usize, used: &mut Vec<bool>) -> i64 {
        if r == w.len() {
            return 0;
        }
        let mut best = go(w, r + 1, used);
        for h in 0..used.len() {
            if !used[h] {
                used[h] = true;
                best = best.max(w[r][h] + go(w, r + 1, used));
                used[h] = false;
            }
        }
        best
    }
    let cols = w.first().map_or(0, |r| r.len());
    go(w, 0, &mut vec![false; cols])
}

struct OracleDer {
    fa: i64,
    miss: i64,
    conf: i64,
    speech: i64,
}

/// Cell-by-cell integration over 10 ms cells.
fn oracle_der(
    refs: &[(i64, i64, usize)],
    hyps: &[(i64, i64, usize)],
    n_ref: usize,
    n_hyp: usize,
    collar_cs: i64,
    exclude_overlap: bool,
    uem: Option<&[(i64, i64)]>,
) -> OracleDer {
    let horizon = 3000usize;
    let mut ref_on = vec![vec![false; horizon]; n_ref];
    let mut hyp_on = vec![vec![false; horizon]; n_hyp];
    for &(s, e, k) in refs {
        for c in s..e {
            ref_on[k][c as usize] = true;
        }
    }
    for &(s, e, k) in hyps {
        for c in s..e {
            hyp_on[k][c as usize] = true;
        }
    }
    let first = refs.iter().map(|r| r.0).min().unwrap();
    let last = refs.iter().map(|r| r.1).max().unwrap();
    let mut scored = vec![false; horizon];
    for (c, slot) in scored.iter_mut().enumerate() {
        let c = c as i64;
        *slot = match uem {
            Some(u) => u.iter().any(|&(s, e)| s <= c && c < e),
            None => first <= c && c < last,
        };
    }
    // speaker-wise boundaries: cell edges where a speaker switches on or off
    for spk in &ref_on {
        for b in 0..=horizon {
            let before = b > 0 && spk[b - 1];
            let after = b < horizon && spk[b];
            if before != after {
                let lo = (b as i64 - collar_cs).max(0);
                let hi = (b as i64 + collar_cs).min(horizon as i64);
                for c in lo..hi {
                    scored[c as usize] = false;
                }
            }
        }
    }
    if exclude_overlap {
        for c in 0..horizon {
            if ref_on.iter().filter(|s| s[c]).count() >= 2 {
                scored[c] = false;
            }
        }
    }
    let mut w = vec![vec![0i64; n_hyp]; n_ref];
    let (mut fa, mut miss, mut both, mut speech) = (0, 0, 0, 0);
    for c in (0..horizon).filter(|&c| scored[c]) {
        let nr = ref_on.iter().filter(|s| s[c]).count() as i64;
        let nh = hyp_on.iter().filter(|s| s[c]).count() as i64;
        speech += nr;
        fa += (nh - nr).max(0);
        miss += (nr - nh).max(0);
        both += nr.min(nh);
        for r in 0..n_ref {
            for h in 0..n_hyp {
                if ref_on[r][c] && hyp_on[h][c] {
                    w[r][h] += 1;
                }
            }
        }
    }
    let correct = permutations_max(&w);
    OracleDer {
        fa,
        miss,
        conf: both - correct,
        speech,
    }
}

fn der_oracle_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    let mut mapping_mismatch = 0;
    let mut unique_checked = 0;
    let mut scored_cases = 0;
    let mut error_mismatch = 0;

    // speaker mapping on integer weights, so totals compare exactly
    for _ in 0..200 {
        let nr = rng.random_range(1..=4);
        let nh = rng.random_range(1..=5);
        let w: Vec<Vec<i64>> = (0..nr)
            .map(|_| {
                (0..nh)
                    .map(|_| {
                        if rng.random_bool(0.3) {
                            0
                        } else {
                            rng.random_range(0..50)
                        }
                    })
                    .collect()
            })
            .collect();
        let m = Matrix::from_fn(nr, nh, |r, h| w[r][h] as f64);
        let rl: Vec<String> = (0..nr).map(|i| format!("r{i}")).collect();
        let hl: Vec<String> = (0..nh).map(|i| format!("h{i}")).collect();
        let got = map_speakers(&rl, &hl, &m);
        let best = permutations_max(&w);
        if got.matched_seconds != best as f64 {
            mapping_mismatch += 1;
            continue;
        }
        // all optimal maps, restricted to positive pairs
        let mut optima = BTreeSet::new();
        type Partial = (usize, Vec<(usize, usize)>, i64, Vec<bool>);
        let mut stack: Vec<Partial> = vec![(0, vec![], 0, vec![false; nh])];
        while let Some((r, pairs, total, used)) = stack.pop() {
            if r == nr {
                if total == best {
                    let mut p: Vec<_> = pairs.into_iter().filter(|&(a, b)| w[a][b] > 0).collect();
                    p.sort();
                    optima.insert(p);
                }
                continue;
            }
            stack.push((r + 1, pairs.clone(), total, used.clone()));
            for h in 0..nh {
                if !used[h] {
                    let mut u = used.clone();
                    u[h] = true;
                    let mut p = pairs.clone();
                    p.push((r, h));
                    stack.push((r + 1, p, total + w[r][h], u));
                }
            }
        }
        let got_pairs: Vec<(usize, usize)> = got
            .pairs
            .iter()
            .map(|(r, h)| (r[1..].parse().unwrap(), h[1..].parse().unwrap()))
            .collect();
        let mut sorted = got_pairs.clone();
        sorted.sort();
        if !optima.contains(&sorted) {
            mapping_mismatch += 1;
        }
        if optima.len() == 1 {
            unique_checked += 1;
        }
    }

    // DER against the cell integrator
    for case in 0..200 {
        let nr = rng.random_range(1..=4);
        let nh = rng.random_range(1..=5);
        let refs = random_cs_annotation(&mut rng, nr, 20);
        let hyps = random_cs_annotation(&mut rng, nh, 20);
        let collar_cs = [0, 10, 25][case % 3];
        let exclude = rng.random_bool(0.5);
        let uem: Option<Vec<(i64, i64)>> = if rng.random_bool(0.3) {
            let s = rng.random_range(0..1000);
            Some(vec![(s, s + rng.random_range(100..1500))])
        } else {
            None
        };
        let reference = to_annotation("rec", "R", &refs);
        let hypothesis = to_annotation("rec", "H", &hyps);
        let opts = EvalOptions {
            collar: collar_cs as f64 / 100.0,
            exclude_overlap: exclude,
            uem: uem.as_ref().map(|u| {
                u.iter()
                    .map(|&(s, e)| TimeInterval::new(s as f64 / 100.0, e as f64 / 100.0).unwrap())
                    .collect()
            }),
        };
        // relabel ref/hyp to dense first-appearance ids for the oracle
        let dense = |segs: &[(i64, i64, usize)]| -> (Vec<(i64, i64, usize)>, usize) {
            let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
            let out = segs
                .iter()
                .map(|&(s, e, k)| {
                    let n = ids.len();
                    (s, e, *ids.entry(k).or_insert(n))
                })
                .collect();
            (out, ids.len())
        };
        let (refs_d, nr_d) = dense(&refs);
        let (hyps_d, nh_d) = dense(&hyps);
        let want = oracle_der(
            &refs_d,
            &hyps_d,
            nr_d,
            nh_d,
            collar_cs,
            exclude,
            uem.as_deref(),
        );
        match der(&reference, &hypothesis, &opts) {
            Ok(r) if want.speech > 0 => {
                scored_cases += 1;
                let cs = |x: i64| x as f64 / 100.0;
                for (g, w) in [
                    (r.fa_seconds, cs(want.fa)),
                    (r.miss_seconds, cs(want.miss)),
                    (r.confusion_seconds, cs(want.conf)),
                    (r.ref_speech_seconds, cs(want.speech)),
                ] {
                    worst = worst.max((g - w).abs());
                }
            }
            Err(_) if want.speech == 0 => {}
            _ => error_mismatch += 1,
        }
    }
    outcome(
        mapping_mismatch == 0 && error_mismatch == 0 && worst <= 1e-9,
        format!(
            "mapping: 200 cases, {mapping_mismatch} off brute force ({unique_checked} with a unique optimum); \
             der: {scored_cases} scored cases, max deviation {worst:.2e} s, {error_mismatch} error mismatches"
        ),
    )
}

fn scenario(kind: ScenarioKind, n: usize, noise: f64, seed: u64) -> SynthOutput {
    generate(&SynthScenario {
        kind,
        n_speakers: n,
        within_noise_deg: noise,
        duration: 120.0,
        seed,
        ..SynthScenario::default()
    })
    .unwrap()
}

fn der_of(s: &SynthOutput, config: &DiarizeConfig) -> (f64, f64, usize) {
    let d = diarize("synth", &s.windows, Some(&s.regions), config).unwrap();
    let r = der(&s.reference, &d.annotation, &EvalOptions::with_collar(0.0)).unwrap();
    (r.total, r.confusion, d.clustering.k())
}

fn planted_recovery() -> Outcome {
    let mut recovered = 0;
    let mut worst_conf: f64 = 0.0;
    let mut missed = Vec::new();
    for seed in 0..100u64 {
        let n = 2 + (seed % 3) as usize;
        let s = scenario(ScenarioKind::Separated, n, 5.0, seed);
        let (_, conf, k) = der_of(&s, &tuned_spectral(seed));
        if k == n {
            recovered += 1;
            worst_conf = worst_conf.max(conf);
        } else {
            missed.push(format!("seed {seed}: {n}→{k}"));
        }
    }
    outcome(
        recovered >= 95 && worst_conf < 2.0,
        format!(
            "k recovered in {recovered}/100 seeds (need 95), worst confusion on recovered {worst_conf:.3}% (need < 2%); missed: {}",
            if missed.is_empty() { "none".into() } else { missed.join(", ") }
        ),
    )
}

fn ordering() -> Outcome {
    let mean = |kind, n, noise, seeds: std::ops::Range<u64>, cfg: &dyn Fn(u64) -> DiarizeConfig| {
        let count = seeds.end - seeds.start;
        seeds
            .map(|seed| der_of(&scenario(kind, n, noise, seed), &cfg(seed)).0)
            .sum::<f64>()
            / count as f64
    };
    let hs = mean(ScenarioKind::Hierarchical, 4, 8.0, 0..50, &tuned_spectral);
    let hk = mean(ScenarioKind::Hierarchical, 4, 8.0, 0..50, &kmeans_elbow);
    let is = mean(ScenarioKind::Imbalanced, 3, 5.0, 0..50, &tuned_spectral);
    let ik = mean(ScenarioKind::Imbalanced, 3, 5.0, 0..50, &kmeans_elbow);
    outcome(
        hs < hk && is < ik,
        format!(
            "hierarchical (4 spk, 25°/70°, 8° noise, 50 seeds): spectral {hs:.3}% vs k-means {hk:.3}%; \
             imbalanced (3 spk, ratio 0.8, 5° noise, 50 seeds): spectral {is:.3}% vs k-means {ik:.3}%"
        ),
    )
}

fn online_vs_offline() -> Outcome {
    let (mut online, mut offline) = (0.0, 0.0);
    for seed in 0..100u64 {
        let s = scenario(ScenarioKind::Separated, 2 + (seed % 3) as usize, 5.0, seed);
        online += der_of(&s, &naive_online()).0;
        offline += der_of(&s, &tuned_spectral(seed)).0;
    }
    let (online, offline) = (online / 100.0, offline / 100.0);
    outcome(
        online >= offline,
        format!("separated suite, 100 seeds: naive online mean DER {online:.4}% vs spectral {offline:.4}%"),
    )
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["diarkit"];
    full.extend_from_slice(args);
    let code = run_with(full, &mut out, &mut err);
    (code, out)
}

/// Runs every subcommand in `dir` and returns the bytes of every output.
fn cli_outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let mut outputs = Vec::new();
    let mut record = |name: &str, code: i32, stdout: Vec<u8>| {
        assert_eq!(code, 0, "{name} failed");
        outputs.push((format!("{name}:stdout"), stdout));
    };
    for (rec, seed, kind) in [("dev0", "3", "separated"), ("dev1", "4", "hierarchical")] {
        let (code, out) = run_cli(&[
            "synth",
            "--speakers",
            "4",
            "--duration",
            "60",
            "--scenario",
            kind,
            "--seed",
            seed,
            "--recording-id",
            rec,
            "--out-embeddings",
            &p(&format!("{rec}.csv")),
            "--out-reference",
            &p(&format!("{rec}.ref.rttm")),
            "--out-regions",
            &p(&format!("{rec}.regions.csv")),
        ]);
        record(&format!("synth {rec}"), code, out);
    }
    for alg in ["spectral", "kmeans", "naive"] {
        let (emb, regions) = (p("dev0.csv"), p("dev0.regions.csv"));
        let mut args = vec![
            "diarize",
            "--embeddings",
            &emb,
            "--regions",
            &regions,
            "--algorithm",
            alg,
            "--seed",
            "5",
            "--sigma",
            "0",
        ];
        let out = p(&format!("dev0.{alg}.rttm"));
        let prefix = p("stages");
        args.extend(["--out", &out]);
        if alg == "spectral" {
            args.extend(["--dump-stages", &prefix]);
        }
        let (code, stdout) = run_cli(&args);
        record(&format!("diarize {alg}"), code, stdout);
    }
    let (code, out) = run_cli(&[
        "diarize",
        "--embeddings",
        &p("dev1.csv"),
        "--out",
        &p("dev1.spectral.rttm"),
        "--seed",
        "5",
    ]);
    record("diarize dev1", code, out);
    std::fs::write(
        dir.join("ref.rttm"),
        [
            std::fs::read(dir.join("dev0.ref.rttm")).unwrap(),
            std::fs::read(dir.join("dev1.ref.rttm")).unwrap(),
        ]
        .concat(),
    )
    .unwrap();
    std::fs::write(
        dir.join("hyp.rttm"),
        [
            std::fs::read(dir.join("dev0.spectral.rttm")).unwrap(),
            std::fs::read(dir.join("dev1.spectral.rttm")).unwrap(),
        ]
        .concat(),
    )
    .unwrap();
    let (code, out) = run_cli(&[
        "evaluate",
        "--reference",
        &p("ref.rttm"),
        "--hypothesis",
        &p("hyp.rttm"),
    ]);
    record("evaluate", code, out);
    std::fs::write(
        dir.join("list.txt"),
        "dev0 dev0.csv dev0.regions.csv\ndev1 dev1.csv dev1.regions.csv\n",
    )
    .unwrap();
    for (param, grid) in [
        ("p-percentile", "80:95:5"),
        ("sigma", "0:1:0.5"),
        ("threshold", "0.3:0.7:0.2"),
    ] {
        let (code, out) = run_cli(&[
            "sweep",
            "--embeddings-list",
            &p("list.txt"),
            "--reference",
            &p("ref.rttm"),
            "--param",
            param,
            "--grid",
            grid,
            "--seed",
            "2",
        ]);
        record(&format!("sweep {param}"), code, out);
    }
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    for f in files {
        outputs.push((
            f.file_name().unwrap().to_string_lossy().into_owned(),
            std::fs::read(&f).unwrap(),
        ));
    }
    outputs
}

fn determinism() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let normalize = |root: &Path, outs: Vec<(String, Vec<u8>)>| -> Vec<(String, Vec<u8>)> {
        // stdout mentions no paths except via diagnostics; strip the temp root anyway
        let root = root.to_string_lossy().into_owned();
        outs.into_iter()
            .map(|(k, v)| {
                (
                    k,
                    String::from_utf8_lossy(&v)
                        .replace(&root, "<dir>")
                        .into_bytes(),
                )
            })
            .collect()
    };
    let oa = normalize(a.path(), cli_outputs(a.path()));
    let ob = normalize(b.path(), cli_outputs(b.path()));
    let stages = oa.iter().filter(|(k, _)| k.ends_with(".pgm")).count();
    let differing: Vec<&str> = oa
        .iter()
        .zip(&ob)
        .filter(|(x, y)| x != y)
        .map(|(x, _)| x.0.as_str())
        .collect();
    outcome(
        oa.len() == ob.len() && differing.is_empty() && stages == 6,
        format!(
            "synth, diarize (3 algorithms), evaluate, sweep (3 params): {} outputs compared, {} differ{}; {stages} stage images",
            oa.len(),
            differing.len(),
            if differing.is_empty() { String::new() } else { format!(" ({})", differing.join(", ")) }
        ),
    )
}

fn peak_rss_mb() -> Option<f64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: f64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb / 1024.0)
}

fn scale_smoke() -> Outcome {
    let s = generate(&SynthScenario {
        n_speakers: 4,
        duration: 480.0,
        seed: 99,
        ..SynthScenario::default()
    })
    .unwrap();
    let pieces = diarkit::aggregation::segmentize(&s.regions, 0.4).unwrap();
    let agg = diarkit::aggregation::aggregate(&s.windows, &pieces).unwrap();
    let emb: Vec<EmbeddingVector> = agg
        .segments
        .into_iter()
        .take(1000)
        .map(|x| x.embedding)
        .collect();
    let n = emb.len();
    let t = Instant::now();
    let out = spectral_cluster(&emb, &SpectralParams::default());
    let secs = t.elapsed().as_secs_f64();
    let rss = peak_rss_mb();
    let ok_mem = rss.is_some_and(|m| m < 1024.0);
    match out {
        Ok(o) => outcome(
            n == 1000 && secs < 30.0 && ok_mem,
            format!(
                "{n} segments clustered into k={} in {secs:.2}s, peak RSS {}",
                o.k,
                rss.map_or("unknown".into(), |m| format!("{m:.0} MB"))
            ),
        ),
        Err(e) => outcome(false, format!("spectral_cluster failed: {e}")),
    }
}

fn main() {
    println!("acceptance criteria");
    let results = [
        criterion(
            "refinement-chain unit suite",
            Duration::from_secs(1),
            refinement_suite,
        ),
        criterion("eigen suite", Duration::from_secs(10), eigen_suite),
        criterion(
            "DER oracle equivalence",
            Duration::from_secs(30),
            der_oracle_suite,
        ),
        criterion(
            "planted recovery",
            Duration::from_secs(120),
            planted_recovery,
        ),
        criterion(
            "hierarchical and imbalanced ordering",
            Duration::from_secs(300),
            ordering,
        ),
        criterion(
            "online vs offline ordering",
            Duration::from_secs(120),
            online_vs_offline,
        ),
        criterion("CLI determinism", Duration::from_secs(300), determinism),
        criterion("scale smoke test", Duration::from_secs(30), scale_smoke),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    let strict = std::env::var("DIARKIT_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if strict && passed < results.len() {
        std::process::exit(1);
    }
}
