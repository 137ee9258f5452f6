//! Spatial-domain layer: range narrowing, watermark plane generation and
//! keyed scrambling, and the per-block parity LSB embed/extract/restore.

use crate::error::{Error, Result};
use crate::image::{BitMatrix, GrayImage};

/// Shifting threshold plus the raster-ordered coordinates of every pixel
/// moved away from the [0,255] extremes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BookKeeping {
    pub threshold: u8,
    pub shifted: Vec<(u16, u16)>,
}

/// 64-bit scrambling key shared between sender and receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScrambleKey(pub u64);

/// Shifts pixels in [0,S] up and [255−S,255] down by S, recording each
/// shifted coordinate in raster order. Output range is within [S, 255−S].
pub fn narrow_range(img: &GrayImage, s: u8) -> Result<(GrayImage, BookKeeping)> {
    if s == 0 || s > 63 {
        return Err(Error::ThresholdOutOfRange(i32::from(s)));
    }
    let mut out = img.clone();
    let mut shifted = Vec::new();
    for row in 0..img.height() {
        for col in 0..img.width() {
            let x = img.get(row, col);
            if x <= s {
                out.set(row, col, x + s);
            } else if x >= 255 - s {
                out.set(row, col, x - s);
            } else {
                continue;
            }
            if row > usize::from(u16::MAX) || col > usize::from(u16::MAX) {
                return Err(Error::CoordinateOverflow(row, col));
            }
            shifted.push((row as u16, col as u16));
        }
    }
    Ok((out, BookKeeping { threshold: s, shifted }))
}

/// Undoes [`narrow_range`] on the LSB-restored image: each recorded pixel
/// moves back by S, with the direction inferred from its current value
/// band. A recorded value in neither band signals corruption.
pub fn restore_range(img: &GrayImage, bk: &BookKeeping) -> Result<GrayImage> {
    let s = bk.threshold;
    if s == 0 || s > 63 {
        return Err(Error::ThresholdOutOfRange(i32::from(s)));
    }
    let mut out = img.clone();
    for &(row, col) in &bk.shifted {
        let (row, col) = (usize::from(row), usize::from(col));
        if row >= img.height() || col >= img.width() {
            return Err(Error::MalformedOverhead(format!(
                "shifted coordinate ({row}, {col}) outside image"
            )));
        }
        let v = out.get(row, col);
        if v <= 2 * s {
            out.set(row, col, v - s);
        } else if v >= 255 - 2 * s {
            out.set(row, col, v + s);
        } else {
            return Err(Error::AmbiguousShiftDirection { row, col, value: v });
        }
    }
    Ok(out)
}

/// Replicates the logo across the block grid: `plane(i,j) = logo(i mod lr, j mod lc)`.
pub fn tile_logo(logo: &BitMatrix, grid_rows: usize, grid_cols: usize) -> Result<BitMatrix> {
    if logo.rows() == 0 || logo.cols() == 0 {
        return Err(Error::EmptyLogo);
    }
    let mut plane = BitMatrix::zeros(grid_rows, grid_cols);
    for i in 0..grid_rows {
        for j in 0..grid_cols {
            plane.set(i, j, logo.get(i % logo.rows(), j % logo.cols()));
        }
    }
    Ok(plane)
}

/// Splitmix64 step: returns the advanced state and the mixed output word.
pub fn prng_next(state: u64) -> (u64, u64) {
    let state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (state, z)
}

/// Fisher–Yates swap schedule for n elements under `key`: at step i
/// (from n−1 down to 1), swap index i with `word mod (i+1)`.
fn swap_schedule(n: usize, key: ScrambleKey) -> Vec<(usize, usize)> {
    let mut state = key.0;
    let mut swaps = Vec::with_capacity(n.saturating_sub(1));
    for i in (1..n).rev() {
        let (next, word) = prng_next(state);
        state = next;
        swaps.push((i, (word % (i as u64 + 1)) as usize));
    }
    swaps
}

fn flatten_column_major(plane: &BitMatrix) -> Vec<u8> {
    let mut flat = Vec::with_capacity(plane.rows() * plane.cols());
    for j in 0..plane.cols() {
        for i in 0..plane.rows() {
            flat.push(plane.get(i, j));
        }
    }
    flat
}

fn reshape_column_major(flat: &[u8], rows: usize, cols: usize) -> BitMatrix {
    let mut plane = BitMatrix::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            plane.set(i, j, flat[j * rows + i]);
        }
    }
    plane
}

/// Keyed bijective scramble: column-major flatten, Fisher–Yates, reshape.
pub fn scramble_plane(plane: &BitMatrix, key: ScrambleKey) -> BitMatrix {
    let mut flat = flatten_column_major(plane);
    for (i, j) in swap_schedule(flat.len(), key) {
        flat.swap(i, j);
    }
    reshape_column_major(&flat, plane.rows(), plane.cols())
}

/// Exact inverse of [`scramble_plane`] under the same key.
pub fn unscramble_plane(plane: &BitMatrix, key: ScrambleKey) -> BitMatrix {
    let mut flat = flatten_column_major(plane);
    for (i, j) in swap_schedule(flat.len(), key).into_iter().rev() {
        flat.swap(i, j);
    }
    reshape_column_major(&flat, plane.rows(), plane.cols())
}

fn check_block_size(m: usize) -> Result<()> {
    // Even m has no unique centre pixel.
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::GridMismatch(m, m, 0, 0));
    }
    Ok(())
}

fn block_parity(img: &GrayImage, block_row: usize, block_col: usize, m: usize) -> u8 {
    let mut sum = 0u32;
    for r in 0..m {
        for c in 0..m {
            sum += u32::from(img.get(block_row * m + r, block_col * m + c));
        }
    }
    (sum % 2) as u8
}

/// Embeds one watermark bit per full m×m block by incrementing the centre
/// pixel when the block's sum parity disagrees with the watermark bit.
/// Partial edge blocks carry no bit and are never touched. Requires the
/// narrowed range so the +1 cannot overflow.
pub fn embed_layer1(
    img: &GrayImage,
    plane: &BitMatrix,
    m: usize,
) -> Result<(GrayImage, BitMatrix)> {
    check_block_size(m)?;
    let grid_rows = img.height() / m;
    let grid_cols = img.width() / m;
    if plane.rows() != grid_rows || plane.cols() != grid_cols {
        return Err(Error::GridMismatch(grid_rows, grid_cols, plane.rows(), plane.cols()));
    }
    let mut out = img.clone();
    let mut lmap = BitMatrix::zeros(grid_rows, grid_cols);
    for i in 0..grid_rows {
        for j in 0..grid_cols {
            let parity = block_parity(img, i, j, m);
            let inc = parity ^ plane.get(i, j);
            if inc == 1 {
                let (cr, cc) = (i * m + m / 2, j * m + m / 2);
                out.set(cr, cc, out.get(cr, cc) + 1);
            }
            lmap.set(i, j, inc);
        }
    }
    Ok((out, lmap))
}

/// Reads back one bit per full block as the block's pixel-sum parity.
pub fn extract_plane(img: &GrayImage, m: usize) -> Result<BitMatrix> {
    check_block_size(m)?;
    let grid_rows = img.height() / m;
    let grid_cols = img.width() / m;
    let mut plane = BitMatrix::zeros(grid_rows, grid_cols);
    for i in 0..grid_rows {
        for j in 0..grid_cols {
            plane.set(i, j, block_parity(img, i, j, m));
        }
    }
    Ok(plane)
}

/// Undoes the layer-1 centre increments identified by the location map.
pub fn restore_lsbs(img: &GrayImage, lmap: &BitMatrix, m: usize) -> Result<GrayImage> {
    check_block_size(m)?;
    let grid_rows = img.height() / m;
    let grid_cols = img.width() / m;
    if lmap.rows() != grid_rows || lmap.cols() != grid_cols {
        return Err(Error::GridMismatch(grid_rows, grid_cols, lmap.rows(), lmap.cols()));
    }
    let mut out = img.clone();
    for i in 0..grid_rows {
        for j in 0..grid_cols {
            if lmap.get(i, j) == 1 {
                let (cr, cc) = (i * m + m / 2, j * m + m / 2);
                let v = out.get(cr, cc);
                if v == 0 {
                    return Err(Error::CentreUnderflow(i, j));
                }
                out.set(cr, cc, v - 1);
            }
        }
    }
    Ok(out)
}
