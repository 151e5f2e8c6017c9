//! Extended binary Golay code [24, 12, 8] in systematic form.
//!
//! A code word keeps its data in bits 0..12 and parity in bits 12..24
//! (LSB-first, matching the crate bit layout). The generator is committed
//! below as a constant; the weight-enumerator test pins it so independent
//! builds of this code agree bit for bit.
//!
//! Decoding is bounded-distance via a syndrome table: every error pattern
//! of weight <= 3 is corrected with its exact weight reported, and every
//! word at distance >= 4 from all code words is reported uncorrectable,
//! never silently miscorrected.

use std::sync::OnceLock;

/// Parity rows of the systematic generator: the parity half of the code
/// word is the XOR of `PARITY[i]` over all set data bits `i`.
pub const PARITY: [u16; 12] = [
    0x9F1, 0x4FA, 0x27D, 0x93E, 0xC9D, 0xE4E, 0xF25, 0xF92, 0x7C9, 0x3E6, 0x557, 0xAAB,
];

const UNCORRECTABLE: u32 = u32::MAX;

struct Tables {
    /// parity word for every 12-bit data value
    parity_of: Vec<u16>,
    /// syndrome -> error pattern of weight <= 3, or UNCORRECTABLE
    error_of: Vec<u32>,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut parity_of = vec![0u16; 4096];
        for data in 0..4096u32 {
            let mut p = 0u16;
            for (i, row) in PARITY.iter().enumerate() {
                if (data >> i) & 1 == 1 {
                    p ^= row;
                }
            }
            parity_of[data as usize] = p;
        }

        let syndrome = |word: u32| -> u16 { (word >> 12) as u16 ^ parity_of[(word & 0xFFF) as usize] };

        let mut error_of = vec![UNCORRECTABLE; 4096];
        error_of[0] = 0;
        for i in 0..24 {
            let e = 1u32 << i;
            error_of[syndrome(e) as usize] = e;
        }
        for i in 0..24 {
            for j in i + 1..24 {
                let e = (1u32 << i) | (1 << j);
                error_of[syndrome(e) as usize] = e;
            }
        }
        for i in 0..24 {
            for j in i + 1..24 {
                for k in j + 1..24 {
                    let e = (1u32 << i) | (1 << j) | (1 << k);
                    let s = syndrome(e) as usize;
                    debug_assert_eq!(error_of[s], UNCORRECTABLE, "syndrome collision");
                    error_of[s] = e;
                }
            }
        }
        debug_assert_eq!(
            error_of.iter().filter(|&&e| e != UNCORRECTABLE).count(),
            2325
        );
        Tables {
            parity_of,
            error_of,
        }
    })
}

/// Encodes 12 data bits (low bits of `data`) into a 24-bit code word.
///
/// The map is linear over XOR: `encode(a ^ b) == encode(a) ^ encode(b)`.
pub fn golay_encode(data: u16) -> u32 {
    assert!(data < 1 << 12, "data exceeds 12 bits");
    let t = tables();
    (data as u32) | ((t.parity_of[data as usize] as u32) << 12)
}

/// Successful decode: recovered data plus the number of bits corrected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corrected {
    pub data: u16,
    pub errors_corrected: u8,
}

/// Bounded-distance decode of a 24-bit word.
///
/// Returns `Some` with the exact error count when the word lies within
/// Hamming distance 3 of a code word, `None` (uncorrectable) otherwise.
pub fn golay_decode(word: u32) -> Option<Corrected> {
    assert!(word < 1 << 24, "word exceeds 24 bits");
    let t = tables();
    let s = (word >> 12) as u16 ^ t.parity_of[(word & 0xFFF) as usize];
    let e = t.error_of[s as usize];
    if e == UNCORRECTABLE {
        return None;
    }
    Some(Corrected {
        data: ((word ^ e) & 0xFFF) as u16,
        errors_corrected: e.count_ones() as u8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn zero_maps_to_zero() {
        assert_eq!(golay_encode(0), 0);
    }

    #[test]
    fn linearity_over_sampled_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let a: u16 = rng.gen_range(0..4096);
            let b: u16 = rng.gen_range(0..4096);
            assert_eq!(golay_encode(a) ^ golay_encode(b), golay_encode(a ^ b));
        }
    }

    /// Exhaustive weight enumerator: (1, 759, 2576, 759, 1) at weights
    /// (0, 8, 12, 16, 24). This implies minimum distance 8 by linearity.
    #[test]
    fn weight_enumerator() {
        let mut counts = [0usize; 25];
        for d in 0..4096u16 {
            counts[golay_encode(d).count_ones() as usize] += 1;
        }
        let mut expected = [0usize; 25];
        expected[0] = 1;
        expected[8] = 759;
        expected[12] = 2576;
        expected[16] = 759;
        expected[24] = 1;
        assert_eq!(counts, expected);
    }

    #[test]
    fn round_trip_all_data_words() {
        for d in 0..4096u16 {
            assert_eq!(
                golay_decode(golay_encode(d)),
                Some(Corrected {
                    data: d,
                    errors_corrected: 0
                })
            );
        }
    }

    #[test]
    fn corrects_sampled_errors_up_to_weight_three() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..2000 {
            let d: u16 = rng.gen_range(0..4096);
            let w = rng.gen_range(1..=3);
            let mut e = 0u32;
            while e.count_ones() < w {
                e |= 1 << rng.gen_range(0..24);
            }
            let got = golay_decode(golay_encode(d) ^ e);
            assert_eq!(
                got,
                Some(Corrected {
                    data: d,
                    errors_corrected: w as u8
                })
            );
        }
    }

    #[test]
    fn weight_four_errors_are_detected() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let d: u16 = rng.gen_range(0..4096);
            let mut e = 0u32;
            while e.count_ones() < 4 {
                e |= 1 << rng.gen_range(0..24);
            }
            assert_eq!(golay_decode(golay_encode(d) ^ e), None);
        }
    }
}
