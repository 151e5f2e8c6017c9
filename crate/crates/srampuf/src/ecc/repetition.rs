//! Odd-length repetition code with majority decoding.

use thiserror::Error;

use crate::bits::BitVec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EccError {
    #[error("repetition count {0} must be odd and within 1..=13")]
    BadRepetition(u8),
    #[error("length {len} is not divisible by {divisor}")]
    BadLength { len: usize, divisor: usize },
}

/// Repetition count, restricted to the odd values 1..=13 so majority
/// votes can never tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Repetition(u8);

impl Repetition {
    pub fn new(r: u8) -> Result<Self, EccError> {
        if r % 2 == 1 && (1..=13).contains(&r) {
            Ok(Repetition(r))
        } else {
            Err(EccError::BadRepetition(r))
        }
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }
}

impl TryFrom<u8> for Repetition {
    type Error = EccError;
    fn try_from(r: u8) -> Result<Self, EccError> {
        Repetition::new(r)
    }
}

impl From<Repetition> for u8 {
    fn from(r: Repetition) -> u8 {
        r.0
    }
}

/// Repeats every input bit `r` consecutive times (b0 b0 b0 b1 b1 b1 ...).
pub fn rep_encode(bits: &BitVec, r: Repetition) -> BitVec {
    let r = r.get();
    let mut out = BitVec::zeros(bits.len() * r);
    for (i, b) in bits.iter().enumerate() {
        if b {
            for j in 0..r {
                out.set(i * r + j, true);
            }
        }
    }
    out
}

/// Majority-decodes consecutive `r`-groups. Returns the decoded bits and
/// the number of minority bits that were voted away.
pub fn rep_decode(bits: &BitVec, r: Repetition) -> Result<(BitVec, usize), EccError> {
    let r = r.get();
    if bits.len() % r != 0 {
        return Err(EccError::BadLength {
            len: bits.len(),
            divisor: r,
        });
    }
    let mut out = BitVec::zeros(bits.len() / r);
    let mut flipped = 0;
    for g in 0..out.len() {
        let ones = (0..r).filter(|&j| bits.get(g * r + j)).count();
        let majority = ones * 2 > r;
        out.set(g, majority);
        flipped += if majority { r - ones } else { ones };
    }
    Ok((out, flipped))
}
