//! Two-layer reversible image authentication watermarking.
//!
//! Layer 1 is a fragile parity watermark in the spatial domain: every
//! m×m block carries one bit of a keyed, scrambled logo plane, embedded
//! by nudging the block's centre pixel so the pixel-sum parity matches.
//! Any single-pixel change flips its block's bit, which both detects and
//! localizes tampering.
//!
//! Layer 2 makes the scheme reversible: the side information needed to
//! undo layer 1 (shifted-pixel book-keeping plus the centre-LSB location
//! map) is embedded by histogram shifting in the difference images of
//! the first-level integer Haar detail sub-bands. When the image checks
//! out authentic, the original is restored bit-exactly.

pub mod error;
pub mod image;
pub mod iwt;
pub mod layer2;
pub mod overhead;
pub mod pipeline;
pub mod spatial;

pub use error::{Error, Result};
pub use image::{load_image, load_logo, mse, psnr, save_image, BitMatrix, GrayImage, QualityReport};
pub use pipeline::{embed, recover, verify, EmbedConfig, VerificationReport};
pub use spatial::ScrambleKey;
