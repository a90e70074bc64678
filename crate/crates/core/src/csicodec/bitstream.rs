//! MSB-first bit packing. The final byte is zero-padded.

use crate::error::{Error, Result};

#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    bytes: Vec<u8>,
    n_bits: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_bit(&mut self, bit: bool) {
        if self.n_bits.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            let last = self.bytes.len() - 1;
            self.bytes[last] |= 0x80 >> (self.n_bits % 8);
        }
        self.n_bits += 1;
    }

    /// Writes the low `width` bits of `value`, most significant first.
    pub fn push_bits(&mut self, value: u32, width: u8) {
        for i in (0..width).rev() {
            self.push_bit((value >> i) & 1 == 1);
        }
    }

    pub fn len(&self) -> usize {
        self.n_bits
    }

    pub fn is_empty(&self) -> bool {
        self.n_bits == 0
    }

    pub fn finish(self) -> (Vec<u8>, usize) {
        (self.bytes, self.n_bits)
    }
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    n_bits: usize,
    pos: usize,
}

impl<'a> BitReader<'a> {
    /// Reads `n_bits` from `bytes`; padding bits past `n_bits` must be zero.
    pub fn new(bytes: &'a [u8], n_bits: usize) -> Result<Self> {
        if bytes.len() != n_bits.div_ceil(8) {
            return Err(Error::Decode {
                offset: n_bits.min(bytes.len() * 8),
                reason: "byte length does not match bit length",
            });
        }
        if !n_bits.is_multiple_of(8) {
            let pad_mask = 0xFFu8 >> (n_bits % 8);
            if bytes[bytes.len() - 1] & pad_mask != 0 {
                return Err(Error::Decode {
                    offset: n_bits,
                    reason: "non-zero padding",
                });
            }
        }
        Ok(Self { bytes, n_bits, pos: 0 })
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.n_bits - self.pos
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        if self.pos >= self.n_bits {
            return Err(Error::Decode {
                offset: self.pos,
                reason: "truncated stream",
            });
        }
        let bit = self.bytes[self.pos / 8] & (0x80 >> (self.pos % 8)) != 0;
        self.pos += 1;
        Ok(bit)
    }

    pub fn read_bits(&mut self, width: u8) -> Result<u32> {
        if self.remaining() < width as usize {
            return Err(Error::Decode {
                offset: self.pos,
                reason: "truncated stream",
            });
        }
        let mut v = 0;
        for _ in 0..width {
            v = (v << 1) | self.read_bit()? as u32;
        }
        Ok(v)
    }
}
