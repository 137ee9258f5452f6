//! Integer-to-integer lifting Haar transform.
//!
//! The pair transform is `detail = odd − even`, `approx = even + floor(detail/2)`
//! with floor toward negative infinity, which makes the inverse exact for
//! negative details too. One 2D level: rows then columns forward, columns
//! then rows inverse.

use crate::error::{Error, Result};

/// Signed integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<i32>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<i32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[i32] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> i32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i32) {
        self.data[r * self.cols + c] = v;
    }
}

/// First-level sub-bands. All four share the same dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subbands {
    pub ll: Mat,
    pub hl: Mat,
    pub lh: Mat,
    pub hh: Mat,
}

impl Subbands {
    pub fn rows(&self) -> usize {
        self.ll.rows()
    }

    pub fn cols(&self) -> usize {
        self.ll.cols()
    }
}

/// One forward lifting Haar pass over an even-length sequence.
pub fn haar_forward_1d(seq: &[i32]) -> Result<(Vec<i32>, Vec<i32>)> {
    if !seq.len().is_multiple_of(2) {
        return Err(Error::OddLength(seq.len()));
    }
    let half = seq.len() / 2;
    let mut approx = Vec::with_capacity(half);
    let mut detail = Vec::with_capacity(half);
    for pair in seq.chunks_exact(2) {
        let (even, odd) = (pair[0], pair[1]);
        let d = odd - even;
        approx.push(even + d.div_euclid(2));
        detail.push(d);
    }
    Ok((approx, detail))
}

/// Exact inverse of [`haar_forward_1d`].
pub fn haar_inverse_1d(approx: &[i32], detail: &[i32]) -> Result<Vec<i32>> {
    if approx.len() != detail.len() {
        return Err(Error::LengthMismatch(approx.len(), detail.len()));
    }
    let mut out = Vec::with_capacity(approx.len() * 2);
    for (&s, &d) in approx.iter().zip(detail) {
        let even = s - d.div_euclid(2);
        out.push(even);
        out.push(even + d);
    }
    Ok(out)
}

/// Single-level 2D decomposition: forward pass on every row (low half
/// left, high half right), then on every column of each half.
pub fn decompose_2d(mat: &Mat) -> Result<Subbands> {
    let (rows, cols) = (mat.rows(), mat.cols());
    if rows % 2 != 0 || cols % 2 != 0 {
        return Err(Error::OddDimensions(rows, cols));
    }
    let (hr, hc) = (rows / 2, cols / 2);

    // Row pass: low | high halves per row.
    let mut low = Mat::zeros(rows, hc);
    let mut high = Mat::zeros(rows, hc);
    for r in 0..rows {
        let row: Vec<i32> = (0..cols).map(|c| mat.get(r, c)).collect();
        let (approx, detail) = haar_forward_1d(&row)?;
        for c in 0..hc {
            low.set(r, c, approx[c]);
            high.set(r, c, detail[c]);
        }
    }

    // Column pass on each half.
    let mut ll = Mat::zeros(hr, hc);
    let mut lh = Mat::zeros(hr, hc);
    let mut hl = Mat::zeros(hr, hc);
    let mut hh = Mat::zeros(hr, hc);
    for c in 0..hc {
        let col: Vec<i32> = (0..rows).map(|r| low.get(r, c)).collect();
        let (approx, detail) = haar_forward_1d(&col)?;
        for r in 0..hr {
            ll.set(r, c, approx[r]);
            lh.set(r, c, detail[r]);
        }
        let col: Vec<i32> = (0..rows).map(|r| high.get(r, c)).collect();
        let (approx, detail) = haar_forward_1d(&col)?;
        for r in 0..hr {
            hl.set(r, c, approx[r]);
            hh.set(r, c, detail[r]);
        }
    }
    Ok(Subbands { ll, hl, lh, hh })
}

/// Exact inverse of [`decompose_2d`]: column inverse passes, then row
/// inverse passes. Output values may transiently leave [0, 255]; the
/// caller range-checks.
pub fn reconstruct_2d(sb: &Subbands) -> Result<Mat> {
    let (hr, hc) = (sb.ll.rows(), sb.ll.cols());
    for band in [&sb.hl, &sb.lh, &sb.hh] {
        if band.rows() != hr || band.cols() != hc {
            return Err(Error::DimensionMismatch(hr, hc, band.rows(), band.cols()));
        }
    }
    let (rows, cols) = (hr * 2, hc * 2);

    let mut low = Mat::zeros(rows, hc);
    let mut high = Mat::zeros(rows, hc);
    for c in 0..hc {
        let approx: Vec<i32> = (0..hr).map(|r| sb.ll.get(r, c)).collect();
        let detail: Vec<i32> = (0..hr).map(|r| sb.lh.get(r, c)).collect();
        let col = haar_inverse_1d(&approx, &detail)?;
        for (r, v) in col.into_iter().enumerate() {
            low.set(r, c, v);
        }
        let approx: Vec<i32> = (0..hr).map(|r| sb.hl.get(r, c)).collect();
        let detail: Vec<i32> = (0..hr).map(|r| sb.hh.get(r, c)).collect();
        let col = haar_inverse_1d(&approx, &detail)?;
        for (r, v) in col.into_iter().enumerate() {
            high.set(r, c, v);
        }
    }

    let mut out = Mat::zeros(rows, cols);
    for r in 0..rows {
        let approx: Vec<i32> = (0..hc).map(|c| low.get(r, c)).collect();
        let detail: Vec<i32> = (0..hc).map(|c| high.get(r, c)).collect();
        let row = haar_inverse_1d(&approx, &detail)?;
        for (c, v) in row.into_iter().enumerate() {
            out.set(r, c, v);
        }
    }
    Ok(out)
}
