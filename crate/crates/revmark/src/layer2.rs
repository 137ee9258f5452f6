//! Reversible payload embedding in the difference histograms of the
//! HH/HL/LH sub-bands.
//!
//! Sub-band columns pair as (2j, 2j+1); the coefficient at 2j+1 is the
//! one modified, and the difference is `band(i,2j+1) − band(i,2j)`. Bins
//! ±2 are emptied outward, then differences of ±1 carry one payload bit
//! each (bit 1 pushes them to ±2). Recovery is a single pass that undoes
//! both moves at once. Scan order is HH, then HL, then LH, row-major.

use crate::error::{Error, Result};
use crate::iwt::{Mat, Subbands};
use crate::overhead::Bitstream;

/// Per-row differences between paired sub-band columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffImage {
    pub values: Mat,
}

/// Builds the difference image of one band. An odd final column is left
/// unpaired and excluded.
pub fn difference_image(band: &Mat) -> DiffImage {
    let pairs = band.cols() / 2;
    let mut values = Mat::zeros(band.rows(), pairs);
    for i in 0..band.rows() {
        for j in 0..pairs {
            values.set(i, j, band.get(i, 2 * j + 1) - band.get(i, 2 * j));
        }
    }
    DiffImage { values }
}

fn diff_at(band: &Mat, i: usize, j: usize) -> i32 {
    band.get(i, 2 * j + 1) - band.get(i, 2 * j)
}

fn bump(band: &mut Mat, i: usize, j: usize, delta: i32) {
    let c = 2 * j + 1;
    band.set(i, c, band.get(i, c) + delta);
}

fn for_each_band<F: FnMut(&mut Mat)>(sb: &mut Subbands, mut f: F) {
    f(&mut sb.hh);
    f(&mut sb.hl);
    f(&mut sb.lh);
}

/// Empties the ±2 difference bins: diffs ≥ 2 move outward by +1 on the
/// paired coefficient, diffs ≤ −2 by −1. LL and unpaired columns are
/// never touched.
pub fn empty_bins(bands: &Subbands) -> Subbands {
    let mut out = bands.clone();
    for_each_band(&mut out, |band| {
        for i in 0..band.rows() {
            for j in 0..band.cols() / 2 {
                let d = diff_at(band, i, j);
                if d >= 2 {
                    bump(band, i, j, 1);
                } else if d <= -2 {
                    bump(band, i, j, -1);
                }
            }
        }
    });
    out
}

/// Number of payload bits the bands can carry: diffs equal to ±1.
pub fn capacity(bands: &Subbands) -> usize {
    let mut n = 0;
    for band in [&bands.hh, &bands.hl, &bands.lh] {
        for i in 0..band.rows() {
            for j in 0..band.cols() / 2 {
                if diff_at(band, i, j).abs() == 1 {
                    n += 1;
                }
            }
        }
    }
    n
}

/// Embeds the payload into bin-emptied bands: each ±1 diff consumes one
/// bit in scan order; bit 1 pushes it to ±2, bit 0 leaves it.
pub fn embed_bits(bands: &Subbands, payload: &Bitstream) -> Result<Subbands> {
    let cap = capacity(bands);
    if cap < payload.len() {
        return Err(Error::InsufficientCapacity { capacity: cap, required: payload.len() });
    }
    let mut out = bands.clone();
    let mut next = 0;
    for_each_band(&mut out, |band| {
        for i in 0..band.rows() {
            for j in 0..band.cols() / 2 {
                if next >= payload.len() {
                    return;
                }
                let d = diff_at(band, i, j);
                if d == 1 || d == -1 {
                    if payload.bits[next] == 1 {
                        bump(band, i, j, d.signum());
                    }
                    next += 1;
                }
            }
        }
    });
    Ok(out)
}

/// Reads back the payload: ±1 diffs yield 0, ±2 yield 1, everything else
/// is skipped. The first 32 bits declare how many more bits follow;
/// scanning stops as soon as that many are collected.
pub fn extract_bits(bands: &Subbands) -> Result<Bitstream> {
    let mut stream = Bitstream::default();
    let mut declared: Option<usize> = None;
    'scan: for band in [&bands.hh, &bands.hl, &bands.lh] {
        for i in 0..band.rows() {
            for j in 0..band.cols() / 2 {
                if let Some(total) = declared {
                    if stream.len() >= 32 + total {
                        break 'scan;
                    }
                }
                let d = diff_at(band, i, j).abs();
                if d == 1 {
                    stream.push(0);
                } else if d == 2 {
                    stream.push(1);
                }
                if declared.is_none() && stream.len() == 32 {
                    let mut total = 0usize;
                    for &b in &stream.bits {
                        total = (total << 1) | usize::from(b);
                    }
                    declared = Some(total);
                }
            }
        }
    }
    match declared {
        Some(total) if stream.len() >= 32 + total => {
            stream.bits.truncate(32 + total);
            Ok(stream)
        }
        Some(total) => Err(Error::MalformedOverhead(format!(
            "bands ended after {} of {} declared payload bits",
            stream.len() - 32,
            total
        ))),
        None => Err(Error::MalformedOverhead("bands carry fewer than 32 bits".into())),
    }
}

/// Single recovery pass over every paired position: |d| ≥ 2 moves the
/// paired coefficient back toward zero, simultaneously removing the
/// payload and undoing the bin emptying.
pub fn recover_bands(bands: &Subbands) -> Subbands {
    let mut out = bands.clone();
    for_each_band(&mut out, |band| {
        for i in 0..band.rows() {
            for j in 0..band.cols() / 2 {
                let d = diff_at(band, i, j);
                if d >= 2 {
                    bump(band, i, j, -1);
                } else if d <= -2 {
                    bump(band, i, j, 1);
                }
            }
        }
    });
    out
}
