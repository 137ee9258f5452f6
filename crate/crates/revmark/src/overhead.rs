//! Overhead payload wire format.
//!
//! Layout (every field MSB-first):
//!
//! ```text
//! length : 32 bits   number of bits that follow
//! S      : 8 bits    shifting threshold
//! p      : 32 bits   shifted-pixel count
//! p × (row: 16 bits, col: 16 bits)
//! flag   : 1 bit     0 = raw location map, 1 = RLE
//! L      : location-map bits, column-major
//! ```
//!
//! RLE runs are (bit: 1, runLength−1: 8); runs longer than 256 are split.
//! The flag picks whichever of raw/RLE is shorter, so the stream is never
//! more than one bit longer than raw.

use crate::error::{Error, Result};
use crate::image::BitMatrix;
use crate::spatial::BookKeeping;

/// Ordered bit sequence, one byte per bit (values 0/1).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bitstream {
    pub bits: Vec<u8>,
}

impl Bitstream {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        self.bits.push(bit);
    }

    pub fn push_bits(&mut self, value: u64, width: usize) {
        for i in (0..width).rev() {
            self.bits.push(((value >> i) & 1) as u8);
        }
    }

    /// Packs into bytes MSB-first, zero-padding the final byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.bits.len().div_ceil(8)];
        for (i, &b) in self.bits.iter().enumerate() {
            out[i / 8] |= b << (7 - i % 8);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Self {
        let bits = bytes
            .iter()
            .flat_map(|&byte| (0..8).rev().map(move |i| (byte >> i) & 1))
            .collect();
        Bitstream { bits }
    }
}

/// Cursor over a bitstream for decoding.
struct BitReader<'a> {
    bits: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    fn new(bits: &'a [u8]) -> Self {
        BitReader { bits, pos: 0 }
    }

    fn read_bit(&mut self) -> Result<u8> {
        let b = *self
            .bits
            .get(self.pos)
            .ok_or_else(|| Error::MalformedOverhead("truncated stream".into()))?;
        self.pos += 1;
        Ok(b)
    }

    fn read_bits(&mut self, width: usize) -> Result<u64> {
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | u64::from(self.read_bit()?);
        }
        Ok(v)
    }
}

/// Run-length encodes a bit sequence as (bit, runLength−1: 8) units.
pub fn rle_encode(bits: &[u8]) -> Vec<u8> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < bits.len() {
        let value = bits[i];
        let mut run = 1;
        while i + run < bits.len() && bits[i + run] == value && run < 256 {
            run += 1;
        }
        out.push(value);
        for shift in (0..8).rev() {
            out.push(((run - 1) >> shift) as u8 & 1);
        }
        i += run;
    }
    out
}

/// Decodes RLE back to exactly `expected_len` bits.
pub fn rle_decode(bits: &[u8], expected_len: usize) -> Result<Vec<u8>> {
    let mut reader = BitReader::new(bits);
    let mut out = Vec::with_capacity(expected_len);
    while out.len() < expected_len {
        let value = reader.read_bit()?;
        let run = reader.read_bits(8)? as usize + 1;
        if out.len() + run > expected_len {
            return Err(Error::MalformedOverhead("RLE run overshoots expected length".into()));
        }
        out.extend(std::iter::repeat_n(value, run));
    }
    if reader.pos != bits.len() {
        return Err(Error::MalformedOverhead("trailing RLE garbage".into()));
    }
    Ok(out)
}

fn lmap_column_major(lmap: &BitMatrix) -> Vec<u8> {
    let mut flat = Vec::with_capacity(lmap.rows() * lmap.cols());
    for j in 0..lmap.cols() {
        for i in 0..lmap.rows() {
            flat.push(lmap.get(i, j));
        }
    }
    flat
}

/// Serializes book-keeping data and location map into the wire format.
pub fn encode_overhead(bk: &BookKeeping, lmap: &BitMatrix) -> Result<Bitstream> {
    if bk.threshold == 0 || bk.threshold > 63 {
        return Err(Error::ThresholdOutOfRange(i32::from(bk.threshold)));
    }
    if bk.shifted.len() > u32::MAX as usize {
        return Err(Error::CoordinateOverflow(bk.shifted.len(), 0));
    }
    let mut body = Bitstream::default();
    body.push_bits(u64::from(bk.threshold), 8);
    body.push_bits(bk.shifted.len() as u64, 32);
    for &(r, c) in &bk.shifted {
        body.push_bits(u64::from(r), 16);
        body.push_bits(u64::from(c), 16);
    }
    let raw = lmap_column_major(lmap);
    let rle = rle_encode(&raw);
    if rle.len() < raw.len() {
        body.push(1);
        body.bits.extend_from_slice(&rle);
    } else {
        body.push(0);
        body.bits.extend_from_slice(&raw);
    }

    let mut out = Bitstream::default();
    out.push_bits(body.len() as u64, 32);
    out.bits.extend_from_slice(&body.bits);
    Ok(out)
}

/// Exact inverse of [`encode_overhead`]; the location-map grid shape is
/// known to the receiver from the image size and block size.
pub fn decode_overhead(
    stream: &Bitstream,
    grid_rows: usize,
    grid_cols: usize,
) -> Result<(BookKeeping, BitMatrix)> {
    let mut reader = BitReader::new(&stream.bits);
    let length = reader.read_bits(32)? as usize;
    if stream.bits.len() < 32 + length {
        return Err(Error::MalformedOverhead(format!(
            "declared {length} payload bits, only {} present",
            stream.bits.len().saturating_sub(32)
        )));
    }
    let threshold = reader.read_bits(8)? as u8;
    if threshold == 0 || threshold > 63 {
        return Err(Error::MalformedOverhead(format!("threshold {threshold} out of range")));
    }
    let count = reader.read_bits(32)? as usize;
    // Bound check before allocating: each coordinate pair costs 32 bits.
    if length < 8 + 32 + count.saturating_mul(32) + 1 {
        return Err(Error::MalformedOverhead("coordinate list exceeds declared length".into()));
    }
    let mut shifted = Vec::with_capacity(count);
    for _ in 0..count {
        let r = reader.read_bits(16)? as u16;
        let c = reader.read_bits(16)? as u16;
        shifted.push((r, c));
    }
    let flag = reader.read_bit()?;
    let expected = grid_rows * grid_cols;
    let consumed_so_far = reader.pos - 32;
    let remaining = length - consumed_so_far;
    let flat = if flag == 1 {
        let rle_bits = &stream.bits[reader.pos..reader.pos + remaining];
        reader.pos += remaining;
        rle_decode(rle_bits, expected)?
    } else {
        if remaining != expected {
            return Err(Error::MalformedOverhead(format!(
                "raw location map has {remaining} bits, expected {expected}"
            )));
        }
        let flat = stream.bits[reader.pos..reader.pos + expected].to_vec();
        reader.pos += expected;
        flat
    };
    if reader.pos != 32 + length {
        return Err(Error::MalformedOverhead("trailing garbage within declared length".into()));
    }
    let mut lmap = BitMatrix::zeros(grid_rows, grid_cols);
    for j in 0..grid_cols {
        for i in 0..grid_rows {
            lmap.set(i, j, flat[j * grid_rows + i]);
        }
    }
    Ok((BookKeeping { threshold, shifted }, lmap))
}
