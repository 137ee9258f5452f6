//! End-to-end sender and receiver orchestration.
//!
//! Sender: narrow range → parity layer over the full image → integer Haar
//! on the largest even-dimension top-left region → overhead payload into
//! the detail-band difference histograms → inverse transform. If any
//! reconstructed pixel escapes [0,255] the shifting threshold is bumped
//! and the whole embed repeats.
//!
//! Receiver: payload extraction and band recovery first, then parity
//! verification, then LSB restoration, then range restoration.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::image::{self, BitMatrix, GrayImage, QualityReport};
use crate::iwt::{decompose_2d, reconstruct_2d, Mat};
use crate::layer2;
use crate::overhead::{decode_overhead, encode_overhead};
use crate::spatial::{
    self, BookKeeping, ScrambleKey,
};

#[derive(Debug, Clone, Copy)]
pub struct EmbedConfig {
    pub block_size: usize,
    pub initial_threshold: u8,
    pub max_threshold: u8,
    pub key: ScrambleKey,
}

impl EmbedConfig {
    pub fn new(key: ScrambleKey) -> Self {
        EmbedConfig { block_size: 5, initial_threshold: 4, max_threshold: 63, key }
    }

    fn validate(&self) -> Result<()> {
        if self.block_size < 3 || self.block_size.is_multiple_of(2) {
            return Err(Error::GridMismatch(self.block_size, self.block_size, 0, 0));
        }
        if self.initial_threshold == 0
            || self.initial_threshold > self.max_threshold
            || self.max_threshold > 63
        {
            return Err(Error::ThresholdOutOfRange(i32::from(self.initial_threshold)));
        }
        Ok(())
    }
}

/// Outcome of verification: authenticity plus per-block tamper flags.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub authentic: bool,
    pub mismatch_count: usize,
    pub extraction_healthy: bool,
    pub tamper_blocks: Vec<(usize, usize)>,
    #[serde(skip)]
    pub tamper_map: BitMatrix,
}

/// Everything `verify` learns, for reuse by `recover` and the CLI.
pub struct VerifyOutcome {
    pub report: VerificationReport,
    pub layer1_image: GrayImage,
    pub overhead: Option<(BookKeeping, BitMatrix)>,
}

fn even_region_to_mat(img: &GrayImage) -> Mat {
    let rows = img.height() & !1;
    let cols = img.width() & !1;
    let mut mat = Mat::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            mat.set(r, c, i32::from(img.get(r, c)));
        }
    }
    mat
}

/// Writes `mat` over the top-left region of `base`; trailing odd row or
/// column keeps `base`'s pixels. Fails the range check on any escape
/// from [0, 255].
fn reassemble(base: &GrayImage, mat: &Mat) -> Option<GrayImage> {
    let mut out = base.clone();
    for r in 0..mat.rows() {
        for c in 0..mat.cols() {
            let v = mat.get(r, c);
            if !(0..=255).contains(&v) {
                return None;
            }
            out.set(r, c, v as u8);
        }
    }
    Some(out)
}

/// Like [`reassemble`] but clamps out-of-range values, for best-effort
/// verification of tampered inputs.
fn reassemble_clamped(base: &GrayImage, mat: &Mat) -> GrayImage {
    let mut out = base.clone();
    for r in 0..mat.rows() {
        for c in 0..mat.cols() {
            out.set(r, c, mat.get(r, c).clamp(0, 255) as u8);
        }
    }
    out
}

/// Embeds both watermark layers, retrying with a larger shifting
/// threshold whenever the inverse transform overflows a pixel.
pub fn embed(
    original: &GrayImage,
    logo: &BitMatrix,
    cfg: &EmbedConfig,
) -> Result<(GrayImage, QualityReport)> {
    cfg.validate()?;
    let m = cfg.block_size;
    if original.width() < 2 * m || original.height() < 2 * m {
        return Err(Error::ImageTooSmall(original.width(), original.height(), 2 * m));
    }
    let grid_rows = original.height() / m;
    let grid_cols = original.width() / m;
    let plane = spatial::scramble_plane(&spatial::tile_logo(logo, grid_rows, grid_cols)?, cfg.key);

    for s in cfg.initial_threshold..=cfg.max_threshold {
        let (narrowed, bk) = spatial::narrow_range(original, s)?;
        let (layer1, lmap) = spatial::embed_layer1(&narrowed, &plane, m)?;
        let bands = decompose_2d(&even_region_to_mat(&layer1))?;
        let payload = encode_overhead(&bk, &lmap)?;
        let embedded = layer2::embed_bits(&layer2::empty_bins(&bands), &payload)?;
        let mat = reconstruct_2d(&embedded)?;
        match reassemble(&layer1, &mat) {
            Some(watermarked) => {
                let report = image::psnr(original, &watermarked)?;
                return Ok((watermarked, report));
            }
            None => continue, // overflow: bump S and redo everything
        }
    }
    Err(Error::OverflowUnrecoverable(i32::from(cfg.max_threshold)))
}

/// Extracts the payload, recovers the layer-1 image, and checks every
/// block's parity against the expected scrambled watermark. Overhead
/// decode failures downgrade to `extraction_healthy = false` so tamper
/// localization still runs.
pub fn verify(
    watermarked: &GrayImage,
    logo: &BitMatrix,
    cfg: &EmbedConfig,
) -> Result<VerifyOutcome> {
    cfg.validate()?;
    let m = cfg.block_size;
    if watermarked.width() < 2 * m || watermarked.height() < 2 * m {
        return Err(Error::ImageTooSmall(watermarked.width(), watermarked.height(), 2 * m));
    }
    let grid_rows = watermarked.height() / m;
    let grid_cols = watermarked.width() / m;

    let bands = decompose_2d(&even_region_to_mat(watermarked))?;
    let payload = layer2::extract_bits(&bands);
    let recovered = layer2::recover_bands(&bands);
    let mat = reconstruct_2d(&recovered)?;
    let layer1 = reassemble_clamped(watermarked, &mat);

    let overhead = payload
        .ok()
        .and_then(|stream| decode_overhead(&stream, grid_rows, grid_cols).ok());
    let extraction_healthy = overhead.is_some();

    let extracted = spatial::extract_plane(&layer1, m)?;
    let expected = spatial::scramble_plane(&spatial::tile_logo(logo, grid_rows, grid_cols)?, cfg.key);
    let mut tamper_map = BitMatrix::zeros(grid_rows, grid_cols);
    let mut tamper_blocks = Vec::new();
    for i in 0..grid_rows {
        for j in 0..grid_cols {
            if extracted.get(i, j) != expected.get(i, j) {
                tamper_map.set(i, j, 1);
                tamper_blocks.push((i, j));
            }
        }
    }
    let mismatch_count = tamper_blocks.len();
    let report = VerificationReport {
        authentic: mismatch_count == 0 && extraction_healthy,
        mismatch_count,
        extraction_healthy,
        tamper_blocks,
        tamper_map,
    };
    Ok(VerifyOutcome { report, layer1_image: layer1, overhead })
}

/// Restores the original image bit-exactly. Refuses when verification
/// fails.
pub fn recover(
    watermarked: &GrayImage,
    logo: &BitMatrix,
    cfg: &EmbedConfig,
) -> Result<GrayImage> {
    let outcome = verify(watermarked, logo, cfg)?;
    recover_from(&outcome, cfg)
}

/// Recovery step on an already-verified outcome.
pub fn recover_from(outcome: &VerifyOutcome, cfg: &EmbedConfig) -> Result<GrayImage> {
    if !outcome.report.authentic {
        return Err(Error::NotAuthentic);
    }
    let (bk, lmap) = outcome.overhead.as_ref().expect("authentic implies decoded overhead");
    let narrowed = spatial::restore_lsbs(&outcome.layer1_image, lmap, cfg.block_size)?;
    spatial::restore_range(&narrowed, bk)
}
