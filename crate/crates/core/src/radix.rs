//! Fixed-width numerals in a per-position (possibly mixed) radix.

use std::fmt;

use thiserror::Error;

/// Characters used for digit values, lowest first.
pub const DIGIT_CHARS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RadixError {
    #[error("a numeral needs at least one digit")]
    Empty,
    #[error("radix {radix} at digit {digit} must be at least 2")]
    RadixTooSmall { digit: usize, radix: u32 },
    #[error("capacity of the radix system overflows 128 bits")]
    CapacityOverflow,
    #[error("numeral has {got} digits, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("digit {value} at position {digit} is invalid for radix {radix}")]
    DigitOutOfRange {
        digit: usize,
        value: u32,
        radix: u32,
    },
    #[error("value {value} exceeds capacity {capacity}")]
    ValueTooLarge { value: u128, capacity: u128 },
}

/// Little-endian digit vector; `digits()[0]` is the least significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Numeral {
    digits: Vec<u32>,
}

impl Numeral {
    pub fn from_digits(digits: Vec<u32>) -> Self {
        Numeral { digits }
    }

    /// Build from most-significant-first digits, as they are written.
    pub fn from_written(mut digits: Vec<u32>) -> Self {
        digits.reverse();
        Numeral { digits }
    }

    pub fn zero(len: usize) -> Self {
        Numeral {
            digits: vec![0; len],
        }
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }
}

/// The radix of every digit position, least significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadixSystem {
    radices: Vec<u32>,
    capacity: u128,
}

impl RadixSystem {
    pub fn new(radices: Vec<u32>) -> Result<Self, RadixError> {
        if radices.is_empty() {
            return Err(RadixError::Empty);
        }
        let mut capacity: u128 = 1;
        for (digit, &radix) in radices.iter().enumerate() {
            if radix < 2 {
                return Err(RadixError::RadixTooSmall { digit, radix });
            }
            capacity = capacity
                .checked_mul(u128::from(radix))
                .ok_or(RadixError::CapacityOverflow)?;
        }
        Ok(RadixSystem { radices, capacity })
    }

    pub fn uniform(radix: u32, n_digits: usize) -> Result<Self, RadixError> {
        Self::new(vec![radix; n_digits])
    }

    pub fn radices(&self) -> &[u32] {
        &self.radices
    }

    pub fn len(&self) -> usize {
        self.radices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radices.is_empty()
    }

    /// Number of distinct representable values.
    pub fn capacity(&self) -> u128 {
        self.capacity
    }

    pub fn check(&self, n: &Numeral) -> Result<(), RadixError> {
        if n.len() != self.len() {
            return Err(RadixError::WrongLength {
                expected: self.len(),
                got: n.len(),
            });
        }
        for (digit, (&value, &radix)) in n.digits.iter().zip(&self.radices).enumerate() {
            if value >= radix {
                return Err(RadixError::DigitOutOfRange {
                    digit,
                    value,
                    radix,
                });
            }
        }
        Ok(())
    }

    pub fn value(&self, n: &Numeral) -> Result<u128, RadixError> {
        self.check(n)?;
        Ok(n.digits
            .iter()
            .zip(&self.radices)
            .rev()
            .fold(0u128, |acc, (&d, &r)| acc * u128::from(r) + u128::from(d)))
    }

    pub fn from_value(&self, value: u128) -> Result<Numeral, RadixError> {
        if value >= self.capacity {
            return Err(RadixError::ValueTooLarge {
                value,
                capacity: self.capacity,
            });
        }
        Ok(self.wrap(value))
    }

    /// Numeral for `value mod capacity`.
    pub fn wrap(&self, value: u128) -> Numeral {
        let mut rest = value % self.capacity;
        let digits = self
            .radices
            .iter()
            .map(|&r| {
                let d = (rest % u128::from(r)) as u32;
                rest /= u128::from(r);
                d
            })
            .collect();
        Numeral { digits }
    }

    /// Diminished-radix complement: each digit `d` becomes `radix - 1 - d`.
    /// For base 10 this is the nine's complement.
    pub fn complement(&self, n: &Numeral) -> Result<Numeral, RadixError> {
        self.check(n)?;
        Ok(Numeral {
            digits: n
                .digits
                .iter()
                .zip(&self.radices)
                .map(|(&d, &r)| r - 1 - d)
                .collect(),
        })
    }

    /// Radix complement, `capacity - value` taken modulo the capacity.
    pub fn radix_complement(&self, n: &Numeral) -> Result<Numeral, RadixError> {
        let v = self.value(n)?;
        Ok(self.wrap(self.capacity - v))
    }

    /// Most-significant-first text, zero padded to the full width.
    pub fn format(&self, n: &Numeral) -> Result<String, RadixError> {
        self.check(n)?;
        Ok(Written(n).to_string())
    }
}

struct Written<'a>(&'a Numeral);

impl fmt::Display for Written<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in self.0.digits.iter().rev() {
            let c = DIGIT_CHARS
                .get(d as usize)
                .map(|&b| b as char)
                .unwrap_or('?');
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Numeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Written(self).fmt(f)
    }
}

/// Digit value of a character, accepting either letter case.
pub fn digit_value(c: char) -> Option<u32> {
    c.to_digit(36)
}
