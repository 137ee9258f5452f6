//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test --test acceptance -- --nocapture`.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use revmark::iwt::{decompose_2d, reconstruct_2d, Mat, Subbands};
use revmark::overhead::{decode_overhead, encode_overhead, Bitstream};
use revmark::pipeline::{self, EmbedConfig};
use revmark::spatial::BookKeeping;
use revmark::{layer2, save_image, BitMatrix, Error, GrayImage, ScrambleKey};

fn report(criterion: &str, pass: bool) {
    println!("criterion {criterion}: {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion} failed");
}

fn logo_51x51(rng: &mut StdRng) -> BitMatrix {
    let bits = (0..51 * 51).map(|_| rng.gen_range(0..=1u8)).collect();
    BitMatrix::new(51, 51, bits)
}

/// Smooth synthetic stand-in for a natural photograph: low-frequency
/// structure plus small-amplitude sensor-like noise.
fn natural_image(w: usize, h: usize, rng: &mut StdRng) -> GrayImage {
    let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let pixels = (0..w * h)
        .map(|idx| {
            let (r, c) = ((idx / w) as f64, (idx % w) as f64);
            let base = 128.0
                + 45.0 * (r * 0.05 + phase).sin()
                + 35.0 * (c * 0.04).cos()
                + 15.0 * ((r + c) * 0.013).sin();
            let noise = rng.gen_range(-2i32..=2);
            (base as i32 + noise).clamp(0, 255) as u8
        })
        .collect();
    GrayImage::new(w, h, pixels)
}

#[test]
fn criterion_1_perfect_reconstruction() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1);
    let mut ok = true;
    for _ in 0..1000 {
        let rows = rng.gen_range(1..=64) * 2;
        let cols = rng.gen_range(1..=64) * 2;
        let data = (0..rows * cols).map(|_| rng.gen_range(-1024..=1024)).collect();
        let mat = Mat::new(rows, cols, data);
        let sb = decompose_2d(&mat).unwrap();
        if reconstruct_2d(&sb).unwrap() != mat {
            ok = false;
            break;
        }
    }
    let elapsed = start.elapsed();
    report(
        "1 (perfect reconstruction, 1000 matrices)",
        ok && elapsed.as_secs_f64() < 10.0,
    );
}

#[test]
fn criterion_2_full_reversibility() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(2);
    let logo = logo_51x51(&mut rng);

    let mut corpus: Vec<GrayImage> = vec![
        natural_image(256, 256, &mut rng),
        natural_image(256, 256, &mut rng),
        natural_image(136, 137, &mut rng),
        natural_image(131, 90, &mut rng),
        natural_image(98, 130, &mut rng),
        natural_image(130, 130, &mut rng),
    ];
    // Mild full-frame noise.
    let noisy = GrayImage::new(
        256,
        256,
        (0..256 * 256).map(|_| rng.gen_range(126..=130)).collect(),
    );
    corpus.push(noisy);
    // Saturated 0/255 regions.
    let mut saturated = natural_image(256, 256, &mut rng);
    for r in 0..8 {
        for c in 0..8 {
            saturated.set(r, c, 0);
            saturated.set(r + 20, c + 20, 255);
        }
    }
    corpus.push(saturated);
    // Full-range random noise; embed is allowed to fail on this one.
    let wild = GrayImage::new(256, 256, (0..256 * 256).map(|_| rng.gen()).collect());
    corpus.push(wild);

    let cfg = EmbedConfig::new(ScrambleKey(0xC0FFEE));
    let mut attempted = 0;
    let mut ok = true;
    for img in &corpus {
        match pipeline::embed(img, &logo, &cfg) {
            Ok((wm, _)) => {
                attempted += 1;
                let recovered = pipeline::recover(&wm, &logo, &cfg).unwrap();
                if &recovered != img {
                    ok = false;
                }
            }
            Err(Error::InsufficientCapacity { .. }) => {}
            Err(e) => panic!("unexpected embed error: {e}"),
        }
    }
    let elapsed = start.elapsed();
    report(
        "2 (full reversibility over corpus)",
        ok && attempted >= 8 && elapsed.as_secs_f64() < 30.0,
    );
}

#[test]
fn criterion_3_quality_ballpark() {
    let mut rng = StdRng::seed_from_u64(3);
    let logo = logo_51x51(&mut rng);
    let cfg = EmbedConfig::new(ScrambleKey(7));
    let mut ok = true;
    for _ in 0..2 {
        let img = natural_image(256, 256, &mut rng);
        let (_, q) = pipeline::embed(&img, &logo, &cfg).unwrap();
        let psnr = q.psnr.unwrap_or(f64::INFINITY);
        println!("  watermarked PSNR: {psnr:.2} dB (MSE {:.4})", q.mse);
        if psnr < 48.0 {
            ok = false;
        }
    }
    report("3 (watermarked PSNR >= 48 dB)", ok);
}

#[test]
fn criterion_4_fragility_and_localization() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(4);
    let logo = logo_51x51(&mut rng);
    let cfg = EmbedConfig::new(ScrambleKey(1234));
    let img = natural_image(256, 256, &mut rng);
    let (wm, _) = pipeline::embed(&img, &logo, &cfg).unwrap();

    let mut not_authentic = 0;
    let mut block_flagged = 0;
    let mut localized = 0;
    let trials = 100;
    let mut done = 0;
    while done < trials {
        // Full parity blocks only: 51x51 blocks cover rows/cols 0..255.
        let r = rng.gen_range(0..255);
        let c = rng.gen_range(0..255);
        if wm.get(r, c) == 255 {
            continue;
        }
        done += 1;
        let mut tampered = wm.clone();
        tampered.set(r, c, tampered.get(r, c) + 1);
        let outcome = pipeline::verify(&tampered, &logo, &cfg).unwrap();
        if !outcome.report.authentic {
            not_authentic += 1;
        }
        let (bi, bj) = (r / 5, c / 5);
        if outcome.report.tamper_blocks.iter().any(|&(i, j)| (i, j) == (bi, bj)) {
            block_flagged += 1;
        }
        if outcome
            .report
            .tamper_blocks
            .iter()
            .all(|&(i, j)| i.abs_diff(bi) <= 2 && j.abs_diff(bj) <= 2)
        {
            localized += 1;
        }
    }
    let elapsed = start.elapsed();
    println!(
        "  not-authentic {not_authentic}/{trials}, tampered block flagged \
         {block_flagged}/{trials}, flags within Chebyshev 2: {localized}/{trials}"
    );
    report(
        "4 (fragility + localization, 100 single-pixel tampers)",
        not_authentic == trials
            && block_flagged == trials
            && localized == trials
            && elapsed.as_secs_f64() < 60.0,
    );
}

fn random_bands(rng: &mut StdRng) -> Subbands {
    let rows = rng.gen_range(4..16);
    let cols = rng.gen_range(8..32);
    let gen = |rng: &mut StdRng| {
        Mat::new(rows, cols, (0..rows * cols).map(|_| rng.gen_range(-3..=3)).collect())
    };
    Subbands { ll: gen(rng), hl: gen(rng), lh: gen(rng), hh: gen(rng) }
}

#[test]
fn criterion_5_layer2_codec_oracle() {
    let mut rng = StdRng::seed_from_u64(5);
    let mut ok = true;
    let mut exercised = 0;
    while exercised < 500 {
        let bands = random_bands(&mut rng);
        let emptied = layer2::empty_bins(&bands);
        let cap = layer2::capacity(&emptied);
        if cap < 33 {
            continue;
        }
        exercised += 1;
        let payload_len = rng.gen_range(0..=cap - 32);
        let mut payload = Bitstream::default();
        payload.push_bits(payload_len as u64, 32);
        for _ in 0..payload_len {
            payload.push(rng.gen_range(0..=1));
        }
        let embedded = layer2::embed_bits(&emptied, &payload).unwrap();
        if layer2::extract_bits(&embedded).unwrap() != payload
            || layer2::recover_bands(&embedded) != bands
        {
            ok = false;
            break;
        }
    }
    report("5 (layer-2 codec oracle, 500 band/payload pairs)", ok);
}

#[test]
fn criterion_6_overhead_wire_format() {
    let mut rng = StdRng::seed_from_u64(6);
    let mut ok = true;
    for _ in 0..1000 {
        let bk = BookKeeping {
            threshold: rng.gen_range(1..=63),
            shifted: (0..rng.gen_range(0..30)).map(|_| (rng.gen(), rng.gen())).collect(),
        };
        let rows = rng.gen_range(1..20);
        let cols = rng.gen_range(1..20);
        let lmap =
            BitMatrix::new(rows, cols, (0..rows * cols).map(|_| rng.gen_range(0..=1)).collect());
        let stream = encode_overhead(&bk, &lmap).unwrap();
        let (bk2, lmap2) = decode_overhead(&stream, rows, cols).unwrap();
        if bk2 != bk || lmap2 != lmap {
            ok = false;
            break;
        }
    }

    // Golden byte dump of the worked 45-bit example, padded to bytes.
    let bk = BookKeeping { threshold: 2, shifted: vec![] };
    let stream = encode_overhead(&bk, &BitMatrix::zeros(2, 2)).unwrap();
    let golden = std::fs::read(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/overhead_golden.bin"
    ))
    .unwrap();
    let golden_ok = stream.to_bytes() == golden;

    report("6 (overhead wire format + golden bitstream)", ok && golden_ok);
}

#[test]
fn criterion_7_capacity_failure() {
    let img = GrayImage::filled(256, 256, 128);
    // An all-zero watermark plane leaves the constant image untouched, so
    // every detail coefficient is zero and the +/-1 bins are empty.
    let logo = BitMatrix::zeros(51, 51);
    let cfg = EmbedConfig::new(ScrambleKey(9));
    let pass = match pipeline::embed(&img, &logo, &cfg) {
        Err(Error::InsufficientCapacity { capacity, .. }) => capacity == 0,
        _ => false,
    };
    report("7 (constant image reports capacity 0)", pass);
}

#[test]
fn criterion_8_determinism() {
    let mut rng = StdRng::seed_from_u64(8);
    let logo = logo_51x51(&mut rng);
    let img = natural_image(256, 256, &mut rng);
    let cfg = EmbedConfig::new(ScrambleKey(0xABCD));
    let (a, _) = pipeline::embed(&img, &logo, &cfg).unwrap();
    let (b, _) = pipeline::embed(&img, &logo, &cfg).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let pa = dir.path().join("a.pgm");
    let pb = dir.path().join("b.pgm");
    save_image(&a, &pa).unwrap();
    save_image(&b, &pb).unwrap();
    let pass = std::fs::read(pa).unwrap() == std::fs::read(pb).unwrap();
    report("8 (byte-identical repeated embeds)", pass);
}
