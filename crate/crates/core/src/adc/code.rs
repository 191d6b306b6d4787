use std::fmt;

use serde::{Deserialize, Serialize};

pub const N_LEVELS: usize = 7;

/// Seven comparator outputs, index 0 = lowest threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ThermometerCode {
    pub bits: [bool; N_LEVELS],
}

/// Binary output of the priority encoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryCode {
    pub value: u8,
    /// The thermometer code had a 1 above a 0.
    pub bubble: bool,
}

impl ThermometerCode {
    /// Well-formed code with the lowest `level` bits set.
    pub fn from_level(level: usize) -> Self {
        let mut bits = [false; N_LEVELS];
        for b in bits.iter_mut().take(level) {
            *b = true;
        }
        Self { bits }
    }

    pub fn from_index_mask(mask: u8) -> Self {
        let mut bits = [false; N_LEVELS];
        for (k, b) in bits.iter_mut().enumerate() {
            *b = mask >> k & 1 == 1;
        }
        Self { bits }
    }

    pub fn popcount(&self) -> u8 {
        self.bits.iter().filter(|&&b| b).count() as u8
    }

    pub fn is_well_formed(&self) -> bool {
        self.bits.windows(2).all(|w| w[0] || !w[1])
    }
}

/// Priority encoder: index of the highest set bit plus one. Equals the popcount for
/// well-formed codes; bubbles are flagged rather than repaired.
pub fn thermometer_to_binary(code: &ThermometerCode) -> BinaryCode {
    let value = code.bits.iter().rposition(|&b| b).map_or(0, |k| k + 1) as u8;
    BinaryCode { value, bubble: !code.is_well_formed() }
}

/// Highest threshold first, as the code is usually drawn.
impl fmt::Display for ThermometerCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.bits.iter().rev() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for ThermometerCode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() != N_LEVELS {
            return Err(format!("expected {N_LEVELS} bits, got {:?}", s));
        }
        let mut bits = [false; N_LEVELS];
        for (k, c) in s.chars().rev().enumerate() {
            bits[k] = match c {
                '0' => false,
                '1' => true,
                _ => return Err(format!("invalid bit {c:?}")),
            };
        }
        Ok(Self { bits })
    }
}
