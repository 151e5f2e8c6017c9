//! Code-offset fuzzy extractor: enrollment and reconstruction of
//! device-unique keys.
//!
//! Enrollment draws a random code offset, encodes it with the
//! Golay/repetition concatenation and stores `helper = reference XOR
//! encoding`; the offset itself is never kept. The key is a hash over the
//! raw reference segment, so two enrollments of one device agree on the
//! key while their helper data differ. Reconstruction decodes
//! `readout XOR helper`, re-encodes the corrected offset, recovers the
//! reference and hashes it again.

mod files;
mod helper;
mod offsets;

pub use files::{enroll_external, render_c_array};
pub use helper::{HelperData, HelperFormatError, CODE_GOLAY24_REPETITION, MAGIC, VERSION};
pub use offsets::{FixedOffsets, HashStreamOffsets, OffsetSource, OffsetsExhausted};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analysis::{remaining_entropy, BiasSpec, LeakageMode};
use crate::bits::BitVec;
use crate::ecc::{concat_decode, concat_encode, ConcatOutcome, Repetition};

/// Key-derivation hash selector. Only the 32-byte default is defined in
/// format version 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[repr(u8)]
pub enum HashId {
    Sha256 = 0x01,
}

impl TryFrom<u8> for HashId {
    type Error = HelperFormatError;
    fn try_from(v: u8) -> Result<Self, HelperFormatError> {
        match v {
            0x01 => Ok(HashId::Sha256),
            other => Err(HelperFormatError::UnsupportedHash(other)),
        }
    }
}

/// Extractor parameters. The SRAM segment length is derived:
/// `offset_len_bytes * 8 * 2 * repetitions` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FuzzyConfig {
    offset_len_bytes: u8,
    repetitions: Repetition,
    hash_id: HashId,
    sram_offset_bits: u64,
}

impl FuzzyConfig {
    pub fn new(
        offset_len_bytes: u8,
        repetitions: Repetition,
        hash_id: HashId,
        sram_offset_bits: u64,
    ) -> Result<Self, HelperFormatError> {
        if !(9..=24).contains(&offset_len_bytes) || (offset_len_bytes as usize * 8) % 12 != 0 {
            return Err(HelperFormatError::BadParams(format!(
                "offset length {offset_len_bytes} B must lie in 9..=24 with bits divisible by 12"
            )));
        }
        Ok(FuzzyConfig {
            offset_len_bytes,
            repetitions,
            hash_id,
            sram_offset_bits,
        })
    }

    pub(crate) fn from_wire(
        offset_len_bytes: u8,
        repetitions: u8,
        hash_id: u8,
        sram_offset_bits: u64,
    ) -> Result<Self, HelperFormatError> {
        let repetitions = Repetition::new(repetitions)
            .map_err(|e| HelperFormatError::BadParams(e.to_string()))?;
        let hash_id = HashId::try_from(hash_id)?;
        FuzzyConfig::new(offset_len_bytes, repetitions, hash_id, sram_offset_bits)
    }

    pub fn offset_len_bytes(&self) -> u8 {
        self.offset_len_bytes
    }

    pub fn offset_bits(&self) -> usize {
        self.offset_len_bytes as usize * 8
    }

    /// Number of Golay blocks.
    pub fn blocks(&self) -> usize {
        self.offset_bits() / 12
    }

    pub fn repetitions(&self) -> Repetition {
        self.repetitions
    }

    pub fn hash_id(&self) -> HashId {
        self.hash_id
    }

    pub fn sram_offset_bits(&self) -> u64 {
        self.sram_offset_bits
    }

    pub fn sram_len_bits(&self) -> u64 {
        self.offset_len_bytes as u64 * 8 * 2 * self.repetitions.get() as u64
    }

    /// The SRAM region this config reads.
    pub fn segment_of(&self, readout: &BitVec) -> Result<BitVec, ReconstructError> {
        let start = self.sram_offset_bits as usize;
        let len = self.sram_len_bits() as usize;
        if start + len > readout.len() {
            return Err(ReconstructError::LengthMismatch {
                got: readout.len(),
                want: start + len,
            });
        }
        Ok(readout.slice(start, len))
    }
}

/// A derived key annotated with the decomposed-mode remaining entropy at
/// the segment's own empirical bias.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedKey {
    pub key_bytes: [u8; 32],
    pub remaining_entropy_bits: f64,
}

impl DerivedKey {
    pub fn hex(&self) -> String {
        hex::encode(self.key_bytes)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnrollError {
    #[error("reference segment of {got} bits, config needs {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error(transparent)]
    Offsets(#[from] OffsetsExhausted),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReconstructError {
    /// Too many bit errors in a Golay block; the key cannot be recovered.
    #[error("uncorrectable errors in block {block}")]
    Uncorrectable { block: usize },
    #[error("readout segment of {got} bits, helper needs {want}")]
    LengthMismatch { got: usize, want: usize },
    /// Tampered or damaged helper artifact (propagated from deserialize).
    #[error(transparent)]
    CorruptHelper(#[from] HelperFormatError),
}

fn derive_key(config: &FuzzyConfig, reference: &BitVec) -> DerivedKey {
    let key_bytes: [u8; 32] = match config.hash_id {
        HashId::Sha256 => Sha256::digest(reference.as_bytes()).into(),
    };
    let ones = reference.count_ones() as f64 / reference.len() as f64;
    let p1 = ones.clamp(1e-9, 1.0 - 1e-9);
    let remaining = remaining_entropy(config, &BiasSpec::new(p1).unwrap(), LeakageMode::Decomposed)
        .expect("valid config and bias");
    DerivedKey {
        key_bytes,
        remaining_entropy_bits: remaining,
    }
}

/// Enrollment: consumes one random offset, emits public helper data and
/// the derived key. The offset is dropped, never stored.
pub fn enroll(
    reference: &BitVec,
    config: &FuzzyConfig,
    offset_source: &mut dyn OffsetSource,
) -> Result<(HelperData, DerivedKey), EnrollError> {
    let want = config.sram_len_bits() as usize;
    if reference.len() != want {
        return Err(EnrollError::LengthMismatch {
            got: reference.len(),
            want,
        });
    }
    let offset = offset_source.next_offset(config.offset_bits())?;
    let encoded = concat_encode(&offset, config.repetitions()).expect("offset length validated");
    let helper_bits = reference.xor(&encoded);
    let key = derive_key(config, reference);
    Ok((
        HelperData {
            config: *config,
            helper_bits,
        },
        key,
    ))
}

/// Reconstruction: decodes `readout XOR helper`, re-encodes the corrected
/// offset and hashes the recovered reference. Returns the enrollment key
/// whenever every block stays within the correction budget.
pub fn reconstruct(
    readout_segment: &BitVec,
    helper: &HelperData,
) -> Result<DerivedKey, ReconstructError> {
    let want = helper.config.sram_len_bits() as usize;
    if readout_segment.len() != want {
        return Err(ReconstructError::LengthMismatch {
            got: readout_segment.len(),
            want,
        });
    }
    let noisy_code = readout_segment.xor(&helper.helper_bits);
    match concat_decode(&noisy_code, helper.config.repetitions())
        .expect("lengths validated by construction")
    {
        ConcatOutcome::Uncorrectable { block } => Err(ReconstructError::Uncorrectable { block }),
        ConcatOutcome::Decoded(d) => {
            let encoded = concat_encode(&d.offset, helper.config.repetitions())
                .expect("decoded offset has valid length");
            let reference = helper.helper_bits.xor(&encoded);
            Ok(derive_key(&helper.config, &reference))
        }
    }
}
