//! Finite binary strings, the second sort of the language.
//!
//! A [`BitStr`] is a finite set of bit positions. Bit 0 is the least
//! significant bit and the length `|X|` is one more than the highest set
//! position (0 for the empty string), so a string never carries leading
//! zeros. The representation is a dense vector of 64-bit words whose last
//! word is nonzero, which makes equality and hashing word-wise.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

const WORD: usize = 64;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitStr {
    words: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitStrParseError {
    #[error("bit-string literal must start with `0b`")]
    MissingPrefix,
    #[error("bit-string literal has no digits")]
    Empty,
    #[error("invalid digit {0:?} in bit-string literal")]
    BadDigit(char),
}

impl BitStr {
    pub fn empty() -> Self {
        BitStr { words: Vec::new() }
    }

    /// The string whose set positions are exactly `positions`.
    pub fn from_positions<I: IntoIterator<Item = usize>>(positions: I) -> Self {
        let mut s = BitStr::empty();
        for p in positions {
            s.set(p, true);
        }
        s
    }

    pub fn from_u64(value: u64) -> Self {
        let mut s = BitStr { words: vec![value] };
        s.normalize();
        s
    }

    /// Overwrites `self` with `value`, reusing its storage.
    pub fn assign_u64(&mut self, value: u64) {
        self.words.clear();
        if value != 0 {
            self.words.push(value);
        }
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut s = BitStr { words };
        s.normalize();
        s
    }

    pub fn from_natural(value: &BigUint) -> Self {
        BitStr::from_words(value.to_u64_digits())
    }

    /// The numeric value `sum 2^i` over set positions.
    pub fn to_natural(&self) -> BigUint {
        let mut digits = Vec::with_capacity(self.words.len() * 2);
        for w in &self.words {
            digits.push(*w as u32);
            digits.push((*w >> 32) as u32);
        }
        BigUint::new(digits)
    }

    /// The numeric value if it fits in 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// `|X|`: one more than the highest set position.
    pub fn len(&self) -> usize {
        match self.words.last() {
            None => 0,
            Some(w) => (self.words.len() - 1) * WORD + (WORD - w.leading_zeros() as usize),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// `X(i)`.
    pub fn bit(&self, i: usize) -> bool {
        let (w, b) = (i / WORD, i % WORD);
        self.words.get(w).is_some_and(|word| word >> b & 1 == 1)
    }

    /// `X(i)` for an index that may not fit in `usize`.
    pub fn bit_u64(&self, i: u64) -> bool {
        usize::try_from(i).is_ok_and(|i| self.bit(i))
    }

    pub fn set(&mut self, i: usize, value: bool) {
        let (w, b) = (i / WORD, i % WORD);
        if value {
            if self.words.len() <= w {
                self.words.resize(w + 1, 0);
            }
            self.words[w] |= 1 << b;
        } else if w < self.words.len() {
            self.words[w] &= !(1 << b);
            self.normalize();
        }
    }

    pub fn with_bit(mut self, i: usize) -> Self {
        self.set(i, true);
        self
    }

    /// Set positions in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + b)
            })
        })
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of set positions strictly below `x`.
    pub fn count_ones_below(&self, x: usize) -> usize {
        self.clip(x).count_ones()
    }

    /// `X` restricted to positions `< x`.
    pub fn clip(&self, x: usize) -> BitStr {
        if self.len() <= x {
            return self.clone();
        }
        let full = x / WORD;
        let mut words = self.words[..full].to_vec();
        let rem = x % WORD;
        if rem > 0 {
            words.push(self.words[full] & ((1u64 << rem) - 1));
        }
        BitStr::from_words(words)
    }

    /// Positions `from .. from + count` re-based to start at 0.
    pub fn slice(&self, from: usize, count: usize) -> BitStr {
        if count == 0 || from >= self.len() {
            return BitStr::empty();
        }
        let shifted = self.shr(from);
        shifted.clip(count)
    }

    /// Shift every position down by `k`, dropping those below `k`.
    pub fn shr(&self, k: usize) -> BitStr {
        let (wshift, bshift) = (k / WORD, k % WORD);
        if wshift >= self.words.len() {
            return BitStr::empty();
        }
        let src = &self.words[wshift..];
        let mut out = Vec::with_capacity(src.len());
        for i in 0..src.len() {
            let lo = src[i] >> bshift;
            let hi = if bshift > 0 && i + 1 < src.len() {
                src[i + 1] << (WORD - bshift)
            } else {
                0
            };
            out.push(lo | hi);
        }
        BitStr::from_words(out)
    }

    /// Shift every position up by `k`.
    pub fn shl(&self, k: usize) -> BitStr {
        if self.is_empty() {
            return BitStr::empty();
        }
        let (wshift, bshift) = (k / WORD, k % WORD);
        let mut out = vec![0u64; wshift];
        let mut carry = 0u64;
        for &w in &self.words {
            out.push((w << bshift) | carry);
            carry = if bshift > 0 { w >> (WORD - bshift) } else { 0 };
        }
        out.push(carry);
        BitStr::from_words(out)
    }

    /// Bitwise union.
    pub fn or(&self, other: &BitStr) -> BitStr {
        let n = self.words.len().max(other.words.len());
        let words = (0..n)
            .map(|i| self.words.get(i).copied().unwrap_or(0) | other.words.get(i).copied().unwrap_or(0))
            .collect();
        BitStr::from_words(words)
    }

    pub fn is_subset(&self, other: &BitStr) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    /// Lowest position set in `self` but not in `other`.
    pub fn first_missing_from(&self, other: &BitStr) -> Option<usize> {
        self.words.iter().enumerate().find_map(|(i, w)| {
            let d = w & !other.words.get(i).copied().unwrap_or(0);
            (d != 0).then(|| i * WORD + d.trailing_zeros() as usize)
        })
    }

    /// The string of `len` ones.
    pub fn ones_below(len: usize) -> BitStr {
        let mut words = vec![u64::MAX; len / WORD];
        if len % WORD > 0 {
            words.push((1u64 << (len % WORD)) - 1);
        }
        BitStr::from_words(words)
    }

    /// Numeric sum.
    pub fn add(&self, other: &BitStr) -> BitStr {
        let n = self.words.len().max(other.words.len());
        let mut out = Vec::with_capacity(n + 1);
        let mut carry = false;
        for i in 0..n {
            let a = self.words.get(i).copied().unwrap_or(0);
            let b = other.words.get(i).copied().unwrap_or(0);
            let (s1, c1) = a.overflowing_add(b);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            out.push(s2);
            carry = c1 || c2;
        }
        out.push(carry as u64);
        BitStr::from_words(out)
    }

    /// Numeric difference, or the empty string when `other >= self`.
    pub fn monus(&self, other: &BitStr) -> BitStr {
        if *other >= *self {
            return BitStr::empty();
        }
        let mut out = Vec::with_capacity(self.words.len());
        let mut borrow = false;
        for (i, &a) in self.words.iter().enumerate() {
            let b = other.words.get(i).copied().unwrap_or(0);
            let (d1, b1) = a.overflowing_sub(b);
            let (d2, b2) = d1.overflowing_sub(borrow as u64);
            out.push(d2);
            borrow = b1 || b2;
        }
        BitStr::from_words(out)
    }

    /// Lowercase hexadecimal of the numeric value, `"0"` for the empty string.
    pub fn to_hex(&self) -> String {
        match self.words.split_last() {
            None => "0".to_string(),
            Some((top, rest)) => {
                let mut s = format!("{top:x}");
                for w in rest.iter().rev() {
                    s.push_str(&format!("{w:016x}"));
                }
                s
            }
        }
    }

    pub fn from_hex(text: &str) -> Option<BitStr> {
        if text.is_empty() || !text.bytes().all(|b| b.is_ascii_hexdigit()) {
            return None;
        }
        let mut words = Vec::new();
        let mut end = text.len();
        while end > 0 {
            let start = end.saturating_sub(16);
            words.push(u64::from_str_radix(&text[start..end], 16).ok()?);
            end = start;
        }
        Some(BitStr::from_words(words))
    }

    /// Every string of length at most `max_len`, in increasing numeric order.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = BitStr> {
        assert!(max_len < 64, "enumeration width {max_len} too large");
        (0..1u64 << max_len).map(BitStr::from_u64)
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl Ord for BitStr {
    /// Numeric order, which is the string order `X < Y` on canonical strings.
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for BitStr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitStr {
    /// MSB-first literal, `0b0` for the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("0b")?;
        let n = self.len();
        if n == 0 {
            return f.write_str("0");
        }
        for i in (0..n).rev() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BitStr {
    type Err = BitStrParseError;

    /// Parses an MSB-first literal such as `0b101`; leading zeros are dropped.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let digits = text.strip_prefix("0b").ok_or(BitStrParseError::MissingPrefix)?;
        if digits.is_empty() {
            return Err(BitStrParseError::Empty);
        }
        let n = digits.len();
        let mut s = BitStr::empty();
        for (k, c) in digits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => s.set(n - 1 - k, true),
                other => return Err(BitStrParseError::BadDigit(other)),
            }
        }
        Ok(s)
    }
}

/// A finite set of strings (a third-order object), used for visited-state
/// sets and as the counting domain of `numones`.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct HyperStr {
    members: BTreeSet<BitStr>,
}

impl HyperStr {
    pub fn new() -> Self {
        HyperStr::default()
    }

    /// `𝒳(Y)`.
    pub fn contains(&self, s: &BitStr) -> bool {
        self.members.contains(s)
    }

    pub fn insert(&mut self, s: BitStr) -> bool {
        self.members.insert(s)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in increasing string order.
    pub fn iter(&self) -> impl Iterator<Item = &BitStr> {
        self.members.iter()
    }
}

impl FromIterator<BitStr> for HyperStr {
    fn from_iter<I: IntoIterator<Item = BitStr>>(iter: I) -> Self {
        HyperStr { members: iter.into_iter().collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> BitStr {
        s.parse().unwrap()
    }

    #[test]
    fn literal_layout_is_msb_first() {
        let x = b("0b101");
        assert_eq!(x.len(), 3);
        assert_eq!(x.ones().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(x.to_string(), "0b101");
        assert_eq!(BitStr::empty().to_string(), "0b0");
        assert_eq!(b("0b0"), BitStr::empty());
        assert_eq!(b("0b00110"), b("0b110"));
    }

    #[test]
    fn literal_errors() {
        assert_eq!("101".parse::<BitStr>(), Err(BitStrParseError::MissingPrefix));
        assert_eq!("0b".parse::<BitStr>(), Err(BitStrParseError::Empty));
        assert_eq!("0b12".parse::<BitStr>(), Err(BitStrParseError::BadDigit('2')));
    }

    #[test]
    fn clearing_the_top_bit_shrinks_length() {
        let mut x = BitStr::from_positions([3, 70]);
        assert_eq!(x.len(), 71);
        x.set(70, false);
        assert_eq!(x.len(), 4);
        assert_eq!(x.words().len(), 1);
    }

    #[test]
    fn clip_slice_and_shifts() {
        let x = BitStr::from_positions([1, 5, 64, 100]);
        assert_eq!(x.clip(65), BitStr::from_positions([1, 5, 64]));
        assert_eq!(x.clip(0), BitStr::empty());
        assert_eq!(x.slice(5, 60), BitStr::from_positions([0, 59]));
        assert_eq!(x.shr(1).shl(1), x);
        assert_eq!(x.shr(2).shl(2), BitStr::from_positions([5, 64, 100]));
        assert_eq!(x.shl(3), BitStr::from_positions([4, 8, 67, 103]));
        assert_eq!(x.shr(200), BitStr::empty());
    }

    #[test]
    fn order_is_numeric() {
        let mut v: Vec<BitStr> = (0..300u64).rev().map(BitStr::from_u64).collect();
        v.sort();
        assert!(v.iter().zip(0u64..).all(|(s, n)| s.to_u64() == Some(n)));
        assert!(BitStr::from_positions([64]) > BitStr::from_u64(u64::MAX));
    }

    #[test]
    fn natural_and_hex_round_trip() {
        let x = BitStr::from_positions([0, 63, 64, 129]);
        assert_eq!(BitStr::from_natural(&x.to_natural()), x);
        assert_eq!(BitStr::from_hex(&x.to_hex()), Some(x));
        assert_eq!(BitStr::empty().to_hex(), "0");
        assert_eq!(BitStr::from_hex("0"), Some(BitStr::empty()));
        assert_eq!(BitStr::from_hex("0g"), None);
    }

    #[test]
    fn subset_and_missing() {
        let a = BitStr::from_positions([1, 3]);
        let c = BitStr::from_positions([1, 2, 3]);
        assert!(a.is_subset(&c));
        assert!(!c.is_subset(&a));
        assert_eq!(c.first_missing_from(&a), Some(2));
        assert_eq!(a.first_missing_from(&c), None);
    }

    #[test]
    fn arithmetic_matches_bignum() {
        let vals = [0u128, 1, 2, 3, 0xffff_ffff_ffff_ffff, 1 << 64, (1 << 64) + 5, u128::MAX >> 1];
        for &a in &vals {
            for &c in &vals {
                let (x, y) = (BitStr::from_natural(&BigUint::from(a)), BitStr::from_natural(&BigUint::from(c)));
                assert_eq!(x.add(&y).to_natural(), BigUint::from(a) + BigUint::from(c));
                assert_eq!(x.monus(&y).to_natural(), BigUint::from(a.saturating_sub(c)));
            }
        }
        assert_eq!(BitStr::ones_below(3), b("0b111"));
        assert_eq!(BitStr::ones_below(64).len(), 64);
        assert_eq!(BitStr::ones_below(0), BitStr::empty());
    }
}
