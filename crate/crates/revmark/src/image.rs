//! 8-bit grayscale images, binary PGM/PBM file I/O and quality metrics.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Row-major 8-bit grayscale raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Self {
        assert_eq!(pixels.len(), width * height, "pixel count must match dimensions");
        GrayImage { width, height, pixels }
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        GrayImage { width, height, pixels: vec![value; width * height] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.pixels[row * self.width + col] = value;
    }
}

/// Binary bit grid, one bit per m×m block. Used for both the watermark
/// plane and the location map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<u8>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize, bits: Vec<u8>) -> Self {
        assert_eq!(bits.len(), rows * cols);
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BitMatrix { rows, cols, bits }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { rows, cols, bits: vec![0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.bits[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, bit: u8) {
        debug_assert!(bit <= 1);
        self.bits[row * self.cols + col] = bit;
    }
}

/// MSE/PSNR pair. `psnr` is `None` when the images are identical (the
/// "infinite" sentinel).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub mse: f64,
    pub psnr: Option<f64>,
}

fn read_token(reader: &mut impl Read) -> Result<Vec<u8>> {
    // PNM tokens are separated by whitespace; '#' starts a comment to end of line.
    let mut token = Vec::new();
    let mut byte = [0u8; 1];
    let mut in_comment = false;
    loop {
        if reader.read(&mut byte)? == 0 {
            if token.is_empty() {
                return Err(Error::MalformedFile("unexpected end of header".into()));
            }
            return Ok(token);
        }
        let b = byte[0];
        if in_comment {
            if b == b'\n' {
                in_comment = false;
            }
            continue;
        }
        match b {
            b'#' if token.is_empty() => in_comment = true,
            b' ' | b'\t' | b'\r' | b'\n' => {
                if !token.is_empty() {
                    return Ok(token);
                }
            }
            _ => token.push(b),
        }
    }
}

fn parse_dim(token: &[u8]) -> Result<usize> {
    std::str::from_utf8(token)
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| Error::MalformedFile("non-numeric header field".into()))
}

/// Loads a binary PGM (P5, maxval 255).
pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let mut reader = BufReader::new(File::open(path.as_ref())?);
    let magic = read_token(&mut reader)?;
    if magic != b"P5" {
        return Err(Error::MalformedFile("bad magic, expected P5".into()));
    }
    let width = parse_dim(&read_token(&mut reader)?)?;
    let height = parse_dim(&read_token(&mut reader)?)?;
    let maxval = parse_dim(&read_token(&mut reader)?)?;
    if maxval != 255 {
        return Err(Error::MalformedFile(format!("maxval {maxval}, expected 255")));
    }
    if width == 0 || height == 0 {
        return Err(Error::MalformedFile("zero dimension".into()));
    }
    let mut pixels = vec![0u8; width * height];
    reader
        .read_exact(&mut pixels)
        .map_err(|_| Error::MalformedFile("truncated pixel payload".into()))?;
    Ok(GrayImage::new(width, height, pixels))
}

/// Writes `img` as canonical binary PGM: `P5\n<w> <h>\n255\n` + raw bytes.
pub fn save_image(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let mut writer = BufWriter::new(File::create(path.as_ref())?);
    write!(writer, "P5\n{} {}\n255\n", img.width(), img.height())?;
    writer.write_all(img.pixels())?;
    writer.flush()?;
    Ok(())
}

/// Loads a binary logo: PBM (P4) bits taken directly, or PGM (P5)
/// thresholded at 128 (pixel < 128 maps to bit 1, treating dark as ink).
pub fn load_logo(path: impl AsRef<Path>) -> Result<BitMatrix> {
    let mut reader = BufReader::new(File::open(path.as_ref())?);
    let magic = read_token(&mut reader)?;
    match magic.as_slice() {
        b"P4" => {
            let width = parse_dim(&read_token(&mut reader)?)?;
            let height = parse_dim(&read_token(&mut reader)?)?;
            if width == 0 || height == 0 {
                return Err(Error::MalformedFile("zero dimension".into()));
            }
            let row_bytes = width.div_ceil(8);
            let mut packed = vec![0u8; row_bytes * height];
            reader
                .read_exact(&mut packed)
                .map_err(|_| Error::MalformedFile("truncated PBM payload".into()))?;
            let mut bits = Vec::with_capacity(width * height);
            for r in 0..height {
                for c in 0..width {
                    let byte = packed[r * row_bytes + c / 8];
                    bits.push((byte >> (7 - c % 8)) & 1);
                }
            }
            Ok(BitMatrix::new(height, width, bits))
        }
        b"P5" => {
            drop(reader);
            let img = load_image(path)?;
            let bits = img.pixels().iter().map(|&p| u8::from(p < 128)).collect();
            Ok(BitMatrix::new(img.height(), img.width(), bits))
        }
        _ => Err(Error::MalformedFile("logo must be P4 or P5".into())),
    }
}

/// Mean squared error over all pixels.
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::DimensionMismatch(a.width(), a.height(), b.width(), b.height()));
    }
    let sum: f64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = i32::from(x) - i32::from(y);
            f64::from(d * d)
        })
        .sum();
    Ok(sum / (a.width() * a.height()) as f64)
}

/// PSNR with peak 255: `10·log10(255² / mse)`.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<QualityReport> {
    let mse = mse(a, b)?;
    let psnr = if mse == 0.0 { None } else { Some(10.0 * (255.0f64 * 255.0 / mse).log10()) };
    Ok(QualityReport { mse, psnr })
}
