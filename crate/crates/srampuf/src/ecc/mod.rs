//! Error correction for the fuzzy extractor: extended Golay [24,12,8],
//! odd repetition, and their concatenation.
//!
//! The concatenated code encodes each 12-bit chunk of the offset with the
//! Golay code and then repeats every encoded bit `r` consecutive times, so
//! `|concat_encode(x, r)| == |x| * 2 * r`.

mod golay;
mod repetition;

pub use golay::{golay_decode, golay_encode, Corrected, PARITY};
pub use repetition::{rep_decode, rep_encode, EccError, Repetition};

use crate::bits::BitVec;

pub const GOLAY_DATA_BITS: usize = 12;
pub const GOLAY_CODE_BITS: usize = 24;

/// Golay-then-repetition encoding of an offset whose length is a multiple
/// of 12 bits.
pub fn concat_encode(offset: &BitVec, r: Repetition) -> Result<BitVec, EccError> {
    if offset.len() % GOLAY_DATA_BITS != 0 {
        return Err(EccError::BadLength {
            len: offset.len(),
            divisor: GOLAY_DATA_BITS,
        });
    }
    let blocks = offset.len() / GOLAY_DATA_BITS;
    let mut code = BitVec::zeros(blocks * GOLAY_CODE_BITS);
    for b in 0..blocks {
        let mut data = 0u16;
        for i in 0..GOLAY_DATA_BITS {
            if offset.get(b * GOLAY_DATA_BITS + i) {
                data |= 1 << i;
            }
        }
        let word = golay_encode(data);
        for i in 0..GOLAY_CODE_BITS {
            if (word >> i) & 1 == 1 {
                code.set(b * GOLAY_CODE_BITS + i, true);
            }
        }
    }
    Ok(rep_encode(&code, r))
}

/// Successful concatenated decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcatDecoded {
    pub offset: BitVec,
    /// Bits corrected across both stages: minority votes in the repetition
    /// groups plus Golay-corrected bits.
    pub total_corrected: usize,
}

/// Outcome of a concatenated decode. `Uncorrectable` is a value, not an
/// error: it reports which Golay block exceeded the correction budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConcatOutcome {
    Decoded(ConcatDecoded),
    Uncorrectable { block: usize },
}

/// Majority-decodes repetition groups, then Golay-decodes each 24-bit block.
pub fn concat_decode(bits: &BitVec, r: Repetition) -> Result<ConcatOutcome, EccError> {
    let block_len = GOLAY_CODE_BITS * r.get();
    if bits.len() % block_len != 0 {
        return Err(EccError::BadLength {
            len: bits.len(),
            divisor: block_len,
        });
    }
    let (code, rep_corrected) = rep_decode(bits, r)?;
    let blocks = code.len() / GOLAY_CODE_BITS;
    let mut offset = BitVec::zeros(blocks * GOLAY_DATA_BITS);
    let mut total = rep_corrected;
    for b in 0..blocks {
        let mut word = 0u32;
        for i in 0..GOLAY_CODE_BITS {
            if code.get(b * GOLAY_CODE_BITS + i) {
                word |= 1 << i;
            }
        }
        match golay_decode(word) {
            Some(c) => {
                total += c.errors_corrected as usize;
                for i in 0..GOLAY_DATA_BITS {
                    if (c.data >> i) & 1 == 1 {
                        offset.set(b * GOLAY_DATA_BITS + i, true);
                    }
                }
            }
            None => return Ok(ConcatOutcome::Uncorrectable { block: b }),
        }
    }
    Ok(ConcatOutcome::Decoded(ConcatDecoded {
        offset,
        total_corrected: total,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_bits(len: usize, seed: u64) -> BitVec {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..len).map(|_| rng.gen::<bool>()).collect()
    }

    #[test]
    fn nine_byte_offset_with_r1_encodes_to_144_bits() {
        let r1 = Repetition::new(1).unwrap();
        let offset = random_bits(72, 1);
        assert_eq!(concat_encode(&offset, r1).unwrap().len(), 144);
    }

    #[test]
    fn twenty_four_byte_offset_with_r5_encodes_to_1920_bits() {
        let r5 = Repetition::new(5).unwrap();
        let offset = random_bits(192, 2);
        assert_eq!(concat_encode(&offset, r5).unwrap().len(), 1920);
    }

    #[test]
    fn noiseless_round_trip() {
        for (seed, r) in [(3u64, 1u8), (4, 3), (5, 5), (6, 13)] {
            let r = Repetition::new(r).unwrap();
            let offset = random_bits(96, seed);
            let encoded = concat_encode(&offset, r).unwrap();
            match concat_decode(&encoded, r).unwrap() {
                ConcatOutcome::Decoded(d) => {
                    assert_eq!(d.offset, offset);
                    assert_eq!(d.total_corrected, 0);
                }
                ConcatOutcome::Uncorrectable { .. } => panic!("noiseless decode failed"),
            }
        }
    }

    #[test]
    fn corrects_within_budget_and_counts_both_stages() {
        let r3 = Repetition::new(3).unwrap();
        let offset = random_bits(24, 7);
        let mut encoded = concat_encode(&offset, r3).unwrap();
        // one minority flip in group 0 (repaired by the vote), and a full
        // group flip in group 5 that survives the vote and becomes one
        // Golay-corrected bit
        encoded.set(0, !encoded.get(0));
        for j in 0..3 {
            let i = 5 * 3 + j;
            encoded.set(i, !encoded.get(i));
        }
        match concat_decode(&encoded, r3).unwrap() {
            ConcatOutcome::Decoded(d) => {
                assert_eq!(d.offset, offset);
                assert_eq!(d.total_corrected, 1 + 1);
            }
            ConcatOutcome::Uncorrectable { .. } => panic!("within-budget decode failed"),
        }
    }

    #[test]
    fn four_group_errors_in_a_block_are_uncorrectable() {
        let r1 = Repetition::new(1).unwrap();
        let offset = random_bits(24, 8);
        let mut encoded = concat_encode(&offset, r1).unwrap();
        for i in [24, 25, 26, 27] {
            encoded.set(i, !encoded.get(i));
        }
        assert_eq!(
            concat_decode(&encoded, r1).unwrap(),
            ConcatOutcome::Uncorrectable { block: 1 }
        );
    }

    #[test]
    fn bad_lengths_are_rejected() {
        let r3 = Repetition::new(3).unwrap();
        assert!(concat_encode(&random_bits(10, 9), r3).is_err());
        assert!(concat_decode(&random_bits(100, 10), r3).is_err());
    }
}
