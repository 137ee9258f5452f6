//! Command-line front end over the watermarking library.
//!
//! Exit codes: 0 success/authentic, 2 not authentic, 3 recovery refused,
//! 1 any other error (the error name is printed on stderr).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use revmark::pipeline::{self, EmbedConfig, VerifyOutcome};
use revmark::{load_image, load_logo, save_image, Error, GrayImage, ScrambleKey};

#[derive(Parser)]
#[command(name = "revmark", version, about = "Reversible image authentication watermarking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
struct CommonOpts {
    /// Input PGM image
    #[arg(long = "in")]
    input: PathBuf,
    /// Binary logo (PBM P4, or PGM P5 thresholded at 128)
    #[arg(long)]
    logo: PathBuf,
    /// Scrambling key, decimal or 0x-hex
    #[arg(long, env = "REVMARK_KEY", value_parser = parse_key)]
    key: u64,
    /// Parity block size (odd, >= 3)
    #[arg(long, default_value_t = 5)]
    block_size: usize,
    /// Initial shifting threshold
    #[arg(long, default_value_t = 4)]
    threshold: u8,
    /// Report format
    #[arg(long, value_enum, default_value = "text")]
    report: ReportFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Embed the watermark and write the watermarked image
    Embed {
        #[command(flatten)]
        common: CommonOpts,
        /// Output path for the watermarked PGM
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify authenticity of a watermarked image
    Verify {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Verify and write tamper-map images
    Localize {
        #[command(flatten)]
        common: CommonOpts,
        /// One-pixel-per-block tamper map PGM
        #[arg(long)]
        map_out: PathBuf,
        /// Full-size overlay PGM (flagged blocks painted white)
        #[arg(long)]
        overlay_out: Option<PathBuf>,
    },
    /// Recover the original image from an authentic watermarked image
    Recover {
        #[command(flatten)]
        common: CommonOpts,
        /// Output path for the recovered PGM
        #[arg(long)]
        out: PathBuf,
    },
    /// Print PSNR/MSE between two images
    Metrics {
        /// Reference image
        #[arg(long = "ref")]
        reference: PathBuf,
        /// Image under test
        #[arg(long = "test")]
        test: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        report: ReportFormat,
    },
}

fn parse_key(s: &str) -> Result<u64, String> {
    let parsed = if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        s.parse()
    };
    parsed.map_err(|_| format!("key must be a 64-bit decimal or 0x-hex integer, got {s:?}"))
}

fn config_of(common: &CommonOpts) -> EmbedConfig {
    EmbedConfig {
        block_size: common.block_size,
        initial_threshold: common.threshold,
        max_threshold: 63,
        key: ScrambleKey(common.key),
    }
}

fn print_quality(report: &revmark::QualityReport, format: ReportFormat) {
    match format {
        ReportFormat::Text => match report.psnr {
            Some(p) => println!("PSNR: {p:.4} dB  MSE: {:.4}", report.mse),
            None => println!("PSNR: inf dB  MSE: 0"),
        },
        ReportFormat::Json => {
            println!("{}", json!({ "psnr": report.psnr, "mse": report.mse }));
        }
    }
}

fn print_verification(outcome: &VerifyOutcome, format: ReportFormat) {
    let r = &outcome.report;
    match format {
        ReportFormat::Text => {
            if r.authentic {
                println!("authentic");
            } else {
                println!(
                    "NOT authentic: {} block mismatch(es), overhead {}",
                    r.mismatch_count,
                    if r.extraction_healthy { "decoded" } else { "unreadable" }
                );
                for &(i, j) in &r.tamper_blocks {
                    println!("tampered block: ({i}, {j})");
                }
            }
        }
        ReportFormat::Json => println!("{}", serde_json::to_string(r).expect("report serializes")),
    }
}

fn tamper_map_image(outcome: &VerifyOutcome) -> GrayImage {
    let map = &outcome.report.tamper_map;
    let pixels = (0..map.rows() * map.cols())
        .map(|idx| map.bits()[idx] * 255)
        .collect();
    GrayImage::new(map.cols(), map.rows(), pixels)
}

fn overlay_image(watermarked: &GrayImage, outcome: &VerifyOutcome, m: usize) -> GrayImage {
    let mut out = watermarked.clone();
    for &(i, j) in &outcome.report.tamper_blocks {
        for r in 0..m {
            for c in 0..m {
                out.set(i * m + r, j * m + c, 255);
            }
        }
    }
    out
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Embed { common, out } => {
            let img = load_image(&common.input)?;
            let logo = load_logo(&common.logo)?;
            let (watermarked, quality) = pipeline::embed(&img, &logo, &config_of(&common))?;
            save_image(&watermarked, &out)?;
            print_quality(&quality, common.report);
            Ok(0)
        }
        Command::Verify { common } => {
            let img = load_image(&common.input)?;
            let logo = load_logo(&common.logo)?;
            let outcome = pipeline::verify(&img, &logo, &config_of(&common))?;
            print_verification(&outcome, common.report);
            Ok(if outcome.report.authentic { 0 } else { 2 })
        }
        Command::Localize { common, map_out, overlay_out } => {
            let img = load_image(&common.input)?;
            let logo = load_logo(&common.logo)?;
            let outcome = pipeline::verify(&img, &logo, &config_of(&common))?;
            save_image(&tamper_map_image(&outcome), &map_out)?;
            if let Some(path) = overlay_out {
                save_image(&overlay_image(&img, &outcome, common.block_size), &path)?;
            }
            print_verification(&outcome, common.report);
            Ok(if outcome.report.authentic { 0 } else { 2 })
        }
        Command::Recover { common, out } => {
            let img = load_image(&common.input)?;
            let logo = load_logo(&common.logo)?;
            match pipeline::recover(&img, &logo, &config_of(&common)) {
                Ok(recovered) => {
                    save_image(&recovered, &out)?;
                    println!("recovered");
                    Ok(0)
                }
                Err(Error::NotAuthentic) => {
                    eprintln!("{}", Error::NotAuthentic);
                    Ok(3)
                }
                Err(e) => Err(e),
            }
        }
        Command::Metrics { reference, test, report } => {
            let a = load_image(&reference)?;
            let b = load_image(&test)?;
            print_quality(&revmark::psnr(&a, &b)?, report);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}
