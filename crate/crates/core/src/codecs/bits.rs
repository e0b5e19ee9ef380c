use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// A finite binary string. The empty string is allowed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn push(&mut self, b: bool) {
        self.bits.push(b);
    }

    pub fn extend(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn concat(mut self, other: &BitString) -> BitString {
        self.extend(other);
        self
    }

    /// Appends `value` as exactly `width` bits, most significant first.
    pub fn push_uint(&mut self, value: u64, width: usize) {
        debug_assert!(width >= 64 || value >> width == 0, "{value} needs more than {width} bits");
        for i in (0..width).rev() {
            self.bits.push(i < 64 && (value >> i) & 1 == 1);
        }
    }

    /// Appends a big integer as exactly `width` bits, most significant first.
    pub fn push_biguint(&mut self, value: &BigUint, width: usize) {
        debug_assert!(value.bits() as usize <= width);
        for i in (0..width as u64).rev() {
            self.bits.push(value.bit(i));
        }
    }

    pub fn truncated(&self, len: usize) -> BitString {
        BitString {
            bits: self.bits[..len.min(self.bits.len())].to_vec(),
        }
    }

    /// `<bit length>:<hex>`, bits packed most significant first, the final
    /// nibble padded with zero bits.
    pub fn to_hex(&self) -> String {
        let mut s = format!("{}:", self.bits.len());
        for chunk in self.bits.chunks(4) {
            let mut v = 0u8;
            for (i, &b) in chunk.iter().enumerate() {
                if b {
                    v |= 8 >> i;
                }
            }
            s.push(char::from_digit(v as u32, 16).unwrap());
        }
        s
    }

    pub fn from_hex(s: &str) -> Result<BitString> {
        let bad = |m: &str| Error::OutOfRange(format!("bad bit-string serialization: {m}"));
        let (len, hex) = s.trim().split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let len: usize = len.parse().map_err(|_| bad("bit length is not a number"))?;
        if hex.len() != len.div_ceil(4) {
            return Err(bad("hex digit count does not match bit length"));
        }
        let mut bits = Vec::with_capacity(len);
        for c in hex.chars() {
            if c.is_ascii_uppercase() {
                return Err(bad("hex digits must be lowercase"));
            }
            let v = c.to_digit(16).ok_or_else(|| bad("non-hex digit"))?;
            for i in (0..4).rev() {
                bits.push((v >> i) & 1 == 1);
            }
        }
        if bits[len..].iter().any(|&b| b) {
            return Err(bad("padding bits must be zero"));
        }
        bits.truncate(len);
        Ok(BitString { bits })
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Parses a literal string of `0`/`1` characters.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::OutOfRange(format!("'{c}' is not a bit"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(|bits| BitString { bits })
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        BitString { bits }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

/// Cursor over a bit string that tracks its position for diagnostics.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(s: &'a BitString) -> Self {
        BitReader {
            bits: &s.bits,
            pos: 0,
        }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        let b = *self
            .bits
            .get(self.pos)
            .ok_or_else(|| Error::decode(self.pos, "unexpected end of stream"))?;
        self.pos += 1;
        Ok(b)
    }

    pub fn read_bits(&mut self, n: usize) -> Result<BitString> {
        if self.remaining() < n {
            return Err(Error::decode(
                self.pos,
                format!("need {n} bits, {} left", self.remaining()),
            ));
        }
        let out = self.bits[self.pos..self.pos + n].to_vec();
        self.pos += n;
        Ok(BitString { bits: out })
    }

    pub fn read_uint(&mut self, width: usize) -> Result<u64> {
        if width > 64 {
            return Err(Error::decode(self.pos, format!("field width {width} exceeds 64")));
        }
        let mut v = 0u64;
        for b in self.read_bits(width)?.bits {
            v = (v << 1) | b as u64;
        }
        Ok(v)
    }

    pub fn read_biguint(&mut self, width: usize) -> Result<BigUint> {
        let bits = self.read_bits(width)?;
        let mut v = BigUint::zero();
        for (i, &b) in bits.bits.iter().rev().enumerate() {
            if b {
                v.set_bit(i as u64, true);
            }
        }
        Ok(v)
    }

    pub fn rest(&mut self) -> BitString {
        let out = self.bits[self.pos..].to_vec();
        self.pos = self.bits.len();
        BitString { bits: out }
    }

    /// Errors unless every bit has been consumed.
    pub fn finish(&self) -> Result<()> {
        if self.remaining() != 0 {
            return Err(Error::decode(
                self.pos,
                format!("{} trailing bits", self.remaining()),
            ));
        }
        Ok(())
    }
}
