//! Bit-exact helper-data artifact format.
//!
//! ```text
//! offset  size  field
//!   0      4    magic "PUFH"
//!   4      1    version (0x01)
//!   5      1    code id (0x01 = Golay24 + repetition)
//!   6      1    repetitions
//!   7      1    code offset length in bytes
//!   8      1    hash id (0x01 = SHA-256)
//!   9      4    SRAM start offset in bits, little-endian
//!  13      4    SRAM length in bits, little-endian
//!  17      N    helper payload, ceil(sram_len_bits / 8) bytes, LSB-first
//!  17+N    4    CRC-32 (IEEE) over bytes [0, 17+N), little-endian
//! ```
//!
//! Validation order on read: size, magic, version, ids, parameters,
//! redundant length field, then checksum — so a truncated file reports a
//! length problem rather than a checksum one.

use thiserror::Error;

use crate::bits::BitVec;

use super::FuzzyConfig;

pub const MAGIC: [u8; 4] = *b"PUFH";
pub const VERSION: u8 = 0x01;
pub const CODE_GOLAY24_REPETITION: u8 = 0x01;
pub const HEADER_LEN: usize = 17;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HelperFormatError {
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported version {0:#04x}")]
    UnsupportedVersion(u8),
    #[error("unsupported code id {0:#04x}")]
    UnsupportedCode(u8),
    #[error("unsupported hash id {0:#04x}")]
    UnsupportedHash(u8),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("length mismatch: {0}")]
    Length(String),
    #[error("checksum mismatch")]
    Checksum,
}

/// Public reconstruction data: the extractor parameters plus the XOR mask
/// over the SRAM segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HelperData {
    pub config: FuzzyConfig,
    pub helper_bits: BitVec,
}

impl HelperData {
    /// CRC-32 integrity value of the serialized artifact.
    pub fn checksum(&self) -> u32 {
        let bytes = self.serialize();
        let n = bytes.len();
        u32::from_le_bytes(bytes[n - 4..].try_into().unwrap())
    }

    pub fn serialize(&self) -> Vec<u8> {
        let c = &self.config;
        let mut out = Vec::with_capacity(HEADER_LEN + self.helper_bits.as_bytes().len() + 4);
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(CODE_GOLAY24_REPETITION);
        out.push(c.repetitions().get() as u8);
        out.push(c.offset_len_bytes());
        out.push(c.hash_id() as u8);
        out.extend_from_slice(&(c.sram_offset_bits() as u32).to_le_bytes());
        out.extend_from_slice(&(c.sram_len_bits() as u32).to_le_bytes());
        out.extend_from_slice(self.helper_bits.as_bytes());
        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_le_bytes());
        out
    }

    pub fn deserialize(bytes: &[u8]) -> Result<HelperData, HelperFormatError> {
        if bytes.len() < HEADER_LEN + 4 {
            return Err(HelperFormatError::Length(format!(
                "{} bytes is below the minimum artifact size",
                bytes.len()
            )));
        }
        if bytes[0..4] != MAGIC {
            return Err(HelperFormatError::BadMagic);
        }
        if bytes[4] != VERSION {
            return Err(HelperFormatError::UnsupportedVersion(bytes[4]));
        }
        if bytes[5] != CODE_GOLAY24_REPETITION {
            return Err(HelperFormatError::UnsupportedCode(bytes[5]));
        }
        let repetitions = bytes[6];
        let offset_len = bytes[7];
        let hash_id = bytes[8];
        let sram_offset = u32::from_le_bytes(bytes[9..13].try_into().unwrap());
        let sram_len = u32::from_le_bytes(bytes[13..17].try_into().unwrap());

        let config = FuzzyConfig::from_wire(offset_len, repetitions, hash_id, sram_offset as u64)?;
        if sram_len as u64 != config.sram_len_bits() {
            return Err(HelperFormatError::Length(format!(
                "header says {sram_len} SRAM bits, parameters imply {}",
                config.sram_len_bits()
            )));
        }
        let payload_len = (config.sram_len_bits() as usize).div_ceil(8);
        let expected = HEADER_LEN + payload_len + 4;
        if bytes.len() != expected {
            return Err(HelperFormatError::Length(format!(
                "artifact is {} bytes, expected {expected}",
                bytes.len()
            )));
        }
        let crc = u32::from_le_bytes(bytes[expected - 4..].try_into().unwrap());
        if crc != crc32fast::hash(&bytes[..expected - 4]) {
            return Err(HelperFormatError::Checksum);
        }
        let payload = bytes[HEADER_LEN..HEADER_LEN + payload_len].to_vec();
        Ok(HelperData {
            config,
            helper_bits: BitVec::from_bits(payload, sram_len as usize),
        })
    }
}
