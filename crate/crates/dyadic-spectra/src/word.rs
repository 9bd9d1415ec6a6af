//! Finite binary words with 1-indexed positions.
//!
//! Words are bit-packed. Two interchange formats are supported:
//! ASCII strings of '0'/'1' for small words, and a packed binary format for
//! large ones: an 8-byte little-endian length header followed by
//! `ceil(n / 8)` bytes, position `8*i + j + 1` stored in bit `j`
//! (least-significant first) of byte `i`.

use std::io::{Read, Write};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum WordError {
    #[error("invalid character {0:?} in ASCII word (expected '0' or '1')")]
    InvalidAscii(char),
    #[error("packed word truncated: expected {expected} payload bytes, got {got}")]
    Truncated { expected: usize, got: usize },
    #[error("packed word has nonzero padding bits past the declared length")]
    DirtyPadding,
    #[error("packed word length {0} exceeds the supported maximum")]
    TooLong(u64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Hard cap on deserialized word length (2^34 bits = 2 GiB) to keep a
/// corrupt header from attempting an absurd allocation.
const MAX_PACKED_LEN: u64 = 1 << 34;

/// A finite 0/1 word; positions are 1-indexed to match the usual indexing
/// of sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    len: usize,
    limbs: Vec<u64>,
}

impl Word {
    pub fn empty() -> Self {
        Word {
            len: 0,
            limbs: Vec::new(),
        }
    }

    pub fn with_capacity(bits: usize) -> Self {
        Word {
            len: 0,
            limbs: Vec::with_capacity(bits.div_ceil(64)),
        }
    }

    /// Word of `len` zeros.
    pub fn zeros(len: usize) -> Self {
        Word {
            len,
            limbs: vec![0; len.div_ceil(64)],
        }
    }

    /// Word of `len` ones.
    pub fn ones_word(len: usize) -> Self {
        let mut w = Word {
            len,
            limbs: vec![u64::MAX; len.div_ceil(64)],
        };
        w.mask_tail();
        w
    }

    /// Build from a closure over 1-indexed positions.
    pub fn from_fn(len: usize, mut bit: impl FnMut(usize) -> bool) -> Self {
        let mut w = Word::with_capacity(len);
        for pos in 1..=len {
            w.push(bit(pos));
        }
        w
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        let idx = self.len;
        if idx.is_multiple_of(64) {
            self.limbs.push(0);
        }
        if bit {
            self.limbs[idx / 64] |= 1u64 << (idx % 64);
        }
        self.len += 1;
    }

    /// Set the bit at 1-indexed `position`.
    ///
    /// Panics if `position` is 0 or past the end.
    #[inline]
    pub fn set(&mut self, position: usize, value: bool) {
        assert!(
            position >= 1 && position <= self.len,
            "position {position} out of 1..={}",
            self.len
        );
        let idx = position - 1;
        let mask = 1u64 << (idx % 64);
        if value {
            self.limbs[idx / 64] |= mask;
        } else {
            self.limbs[idx / 64] &= !mask;
        }
    }

    /// Bit at 1-indexed `position`.
    ///
    /// Panics if `position` is 0 or past the end.
    #[inline]
    pub fn bit(&self, position: usize) -> bool {
        assert!(
            position >= 1 && position <= self.len,
            "position {position} out of 1..={}",
            self.len
        );
        let idx = position - 1;
        (self.limbs[idx / 64] >> (idx % 64)) & 1 == 1
    }

    #[inline]
    pub fn bit_u8(&self, position: usize) -> u8 {
        u8::from(self.bit(position))
    }

    /// Number of ones.
    pub fn count_ones(&self) -> u64 {
        self.limbs.iter().map(|l| u64::from(l.count_ones())).sum()
    }

    /// Number of in-range dyadic pairs equal to (1,1): positions `k` with
    /// `2k <= len` and bits at `k` and `2k` both set.
    pub fn pair_count(&self) -> u64 {
        self.pair_count_prefix(self.len)
    }

    /// Like [`Word::pair_count`] but restricted to the prefix of length
    /// `prefix_len`.
    pub fn pair_count_prefix(&self, prefix_len: usize) -> u64 {
        assert!(prefix_len <= self.len);
        let mut count = 0u64;
        for k in 1..=prefix_len / 2 {
            if self.bit(k) && self.bit(2 * k) {
                count += 1;
            }
        }
        count
    }

    /// Ones in the prefix of length `prefix_len`.
    pub fn count_ones_prefix(&self, prefix_len: usize) -> u64 {
        assert!(prefix_len <= self.len);
        let full = prefix_len / 64;
        let mut count: u64 = self.limbs[..full]
            .iter()
            .map(|l| u64::from(l.count_ones()))
            .sum();
        let rem = prefix_len % 64;
        if rem > 0 {
            let mask = (1u64 << rem) - 1;
            count += u64::from((self.limbs[full] & mask).count_ones());
        }
        count
    }

    /// Truncate to the first `new_len` bits.
    pub fn truncate(&mut self, new_len: usize) {
        assert!(new_len <= self.len);
        self.len = new_len;
        self.limbs.truncate(new_len.div_ceil(64));
        self.mask_tail();
    }

    /// Prefix copy of length `prefix_len`.
    pub fn prefix(&self, prefix_len: usize) -> Word {
        let mut w = self.clone();
        w.truncate(prefix_len);
        w
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem > 0 {
            if let Some(last) = self.limbs.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len).map(move |pos| self.bit(pos))
    }

    /// ASCII form, position 1 first.
    pub fn to_ascii(&self) -> String {
        self.iter_bits()
            .map(|b| if b { '1' } else { '0' })
            .collect()
    }

    /// Parse an ASCII word; whitespace (including newlines) is ignored so
    /// files may be line-wrapped.
    pub fn parse_ascii(text: &str) -> Result<Self, WordError> {
        let mut w = Word::with_capacity(text.len());
        for c in text.chars() {
            match c {
                '0' => w.push(false),
                '1' => w.push(true),
                c if c.is_whitespace() => {}
                c => return Err(WordError::InvalidAscii(c)),
            }
        }
        Ok(w)
    }

    /// Write the packed binary form: u64 little-endian length, then
    /// `ceil(len / 8)` bytes, LSB-first within each byte.
    pub fn write_packed<W: Write>(&self, mut out: W) -> Result<(), WordError> {
        out.write_all(&(self.len as u64).to_le_bytes())?;
        let mut bytes = vec![0u8; self.len.div_ceil(8)];
        for idx in 0..self.len {
            if (self.limbs[idx / 64] >> (idx % 64)) & 1 == 1 {
                bytes[idx / 8] |= 1 << (idx % 8);
            }
        }
        out.write_all(&bytes)?;
        Ok(())
    }

    /// Read the packed binary form written by [`Word::write_packed`].
    pub fn read_packed<R: Read>(mut input: R) -> Result<Self, WordError> {
        let mut header = [0u8; 8];
        input.read_exact(&mut header)?;
        let len = u64::from_le_bytes(header);
        if len > MAX_PACKED_LEN {
            return Err(WordError::TooLong(len));
        }
        let len = len as usize;
        let expected = len.div_ceil(8);
        let mut bytes = vec![0u8; expected];
        let mut got = 0;
        while got < expected {
            match input.read(&mut bytes[got..])? {
                0 => return Err(WordError::Truncated { expected, got }),
                k => got += k,
            }
        }
        let rem = len % 8;
        if rem > 0 && bytes[expected - 1] >> rem != 0 {
            return Err(WordError::DirtyPadding);
        }
        let mut w = Word {
            len,
            limbs: vec![0; len.div_ceil(64)],
        };
        for (i, &byte) in bytes.iter().enumerate() {
            w.limbs[i / 8] |= u64::from(byte) << (8 * (i % 8));
        }
        Ok(w)
    }
}

impl FromIterator<bool> for Word {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut w = Word::empty();
        for b in iter {
            w.push(b);
        }
        w
    }
}
