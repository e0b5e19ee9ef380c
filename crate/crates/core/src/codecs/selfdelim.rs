//! Self-delimiting codes over binary strings.
//!
//! Naturals and strings are identified in length-then-lexicographic order:
//! `0 <-> ""`, `1 <-> "0"`, `2 <-> "1"`, `3 <-> "00"`, ... so `m` maps to the
//! binary expansion of `m + 1` with its leading one removed.

use super::bits::{BitReader, BitString};
use crate::error::{Error, Result};

pub fn nat_to_string(m: u64) -> BitString {
    let v = m as u128 + 1;
    let width = 127 - v.leading_zeros() as usize;
    let mut s = BitString::new();
    for i in (0..width).rev() {
        s.push((v >> i) & 1 == 1);
    }
    s
}

pub fn string_to_nat(s: &BitString) -> Result<u64> {
    let overflow = || Error::OutOfRange(format!("string of length {} exceeds the u64 range", s.len()));
    if s.len() > 64 {
        return Err(overflow());
    }
    let mut v = 1u128;
    for &b in s.bits() {
        v = (v << 1) | b as u128;
    }
    u64::try_from(v - 1).map_err(|_| overflow())
}

/// Length of `nat_to_string(m)`: `floor(log2(m + 1))`.
pub fn nat_len(m: u64) -> usize {
    127 - (m as u128 + 1).leading_zeros() as usize
}

/// `1^l(x) 0 x`.
pub fn sd_bar(x: &BitString) -> BitString {
    let mut s = BitString::new();
    for _ in 0..x.len() {
        s.push(true);
    }
    s.push(false);
    s.extend(x);
    s
}

pub fn sd_unbar(r: &mut BitReader<'_>) -> Result<BitString> {
    let mut n = 0usize;
    while r.read_bit()? {
        n += 1;
    }
    r.read_bits(n)
}

/// `bar(l(x)) x`, of length `l(x) + 2 floor(log2(l(x)+1)) + 1`.
pub fn sd_prime(x: &BitString) -> BitString {
    sd_bar(&nat_to_string(x.len() as u64)).concat(x)
}

pub fn sd_prime_decode(r: &mut BitReader<'_>) -> Result<BitString> {
    let start = r.position();
    let len_code = sd_unbar(r)?;
    let len = string_to_nat(&len_code).map_err(|_| Error::decode(start, "length prefix overflows"))?;
    if len as usize > r.remaining() {
        return Err(Error::decode(
            r.position(),
            format!("announced payload of {len} bits, {} left", r.remaining()),
        ));
    }
    r.read_bits(len as usize)
}

pub fn sd_prime_len(payload_len: usize) -> usize {
    payload_len + 2 * nat_len(payload_len as u64) + 1
}

/// Self-delimiting natural number: `sd_prime(nat_to_string(m))`.
pub fn encode_nat(m: u64) -> BitString {
    sd_prime(&nat_to_string(m))
}

pub fn decode_nat(r: &mut BitReader<'_>) -> Result<u64> {
    let pos = r.position();
    let s = sd_prime_decode(r)?;
    string_to_nat(&s).map_err(|_| Error::decode(pos, "natural number overflows u64"))
}

pub fn encoded_nat_len(m: u64) -> usize {
    sd_prime_len(nat_len(m))
}

/// `<x, y> = x' y`; the decoder takes everything after `x'` as `y`.
pub fn pair(x: &BitString, y: &BitString) -> BitString {
    sd_prime(x).concat(y)
}

pub fn unpair(s: &BitString) -> Result<(BitString, BitString)> {
    let mut r = BitReader::new(s);
    let x = sd_prime_decode(&mut r)?;
    Ok((x, r.rest()))
}
