//! Packed coordinate vectors over GF(q), q <= 9.
//!
//! A vector of length N <= 32 is stored in a `u128`, 4 bits per symbol,
//! coordinate 0 in the least significant nibble. In characteristic 2 the
//! nibble encoding of an element is its coefficient vector over GF(2), so
//! vector addition is a plain XOR; odd characteristic falls back to a
//! per-symbol loop, which only occurs at the small lengths used for the
//! odd-q and Hermitian families.

use crate::field::{Field, FormKind};

/// Hard upper bound on code length.
pub const MAX_LEN: usize = 32;

const LO_NIBBLES: u128 = 0x1111_1111_1111_1111_1111_1111_1111_1111;

/// A packed row vector. Comparison/order is on the raw words (deterministic
/// but not coordinate-lexicographic; canonical tie-breaking builds its own
/// keys).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PackedVec(pub(crate) u128);

impl std::fmt::Debug for PackedVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PackedVec({:032x})", self.0)
    }
}

impl PackedVec {
    #[inline]
    pub fn zero() -> Self {
        PackedVec(0)
    }

    pub fn from_symbols(symbols: &[u8]) -> Self {
        assert!(symbols.len() <= MAX_LEN);
        let mut v = 0u128;
        for (i, &s) in symbols.iter().enumerate() {
            debug_assert!(s < 16);
            v |= (s as u128) << (4 * i);
        }
        PackedVec(v)
    }

    pub fn to_symbols(self, len: usize) -> Vec<u8> {
        (0..len).map(|i| self.get(i)).collect()
    }

    #[inline]
    pub fn get(self, i: usize) -> u8 {
        ((self.0 >> (4 * i)) & 0xf) as u8
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: u8) {
        debug_assert!(v < 16);
        self.0 = (self.0 & !(0xfu128 << (4 * i))) | ((v as u128) << (4 * i));
    }

    #[inline]
    pub fn with(mut self, i: usize, v: u8) -> Self {
        self.set(i, v);
        self
    }

    #[inline]
    fn len_mask(len: usize) -> u128 {
        if len >= MAX_LEN {
            u128::MAX
        } else {
            (1u128 << (4 * len)) - 1
        }
    }

    #[inline]
    pub fn is_zero(self, len: usize) -> bool {
        self.0 & Self::len_mask(len) == 0
    }

    /// Bit i set iff coordinate i is nonzero.
    #[inline]
    pub fn support_mask(self, len: usize) -> u32 {
        let x = self.0 & Self::len_mask(len);
        let m = (x | x >> 1 | x >> 2 | x >> 3) & LO_NIBBLES;
        let mut out = 0u32;
        let lo = m as u64;
        let hi = (m >> 64) as u64;
        for i in 0..16 {
            out |= (((lo >> (4 * i)) & 1) as u32) << i;
            out |= (((hi >> (4 * i)) & 1) as u32) << (16 + i);
        }
        out
    }

    /// Hamming weight (number of nonzero coordinates).
    #[inline]
    pub fn weight(self, len: usize) -> u32 {
        let x = self.0 & Self::len_mask(len);
        let m = (x | x >> 1 | x >> 2 | x >> 3) & LO_NIBBLES;
        m.count_ones()
    }
}

impl Field {
    #[inline]
    pub fn add_vec(&self, a: PackedVec, b: PackedVec, len: usize) -> PackedVec {
        if self.characteristic() == 2 {
            PackedVec(a.0 ^ b.0)
        } else {
            let mut out = a;
            for i in 0..len {
                out.set(i, self.add(a.get(i), b.get(i)));
            }
            out
        }
    }

    #[inline]
    pub fn sub_vec(&self, a: PackedVec, b: PackedVec, len: usize) -> PackedVec {
        if self.characteristic() == 2 {
            PackedVec(a.0 ^ b.0)
        } else {
            let mut out = a;
            for i in 0..len {
                out.set(i, self.sub(a.get(i), b.get(i)));
            }
            out
        }
    }

    pub fn scale_vec(&self, scalar: u8, a: PackedVec, len: usize) -> PackedVec {
        match scalar {
            0 => PackedVec::zero(),
            1 => a,
            _ => {
                let mut out = PackedVec::zero();
                for i in 0..len {
                    out.set(i, self.mul(scalar, a.get(i)));
                }
                out
            }
        }
    }

    pub fn conj_vec(&self, a: PackedVec, len: usize) -> PackedVec {
        let mut out = PackedVec::zero();
        for i in 0..len {
            out.set(i, self.conj(a.get(i)));
        }
        out
    }

    /// The form b(x, y) = sum x_i conj(y_i); conj is the identity in the
    /// Euclidean case.
    pub fn form(&self, x: PackedVec, y: PackedVec, len: usize, kind: FormKind) -> u8 {
        if self.q() == 2 {
            let m = (x.0 & y.0 & LO_NIBBLES) & PackedVec::len_mask(len);
            return (m.count_ones() & 1) as u8;
        }
        let mut acc = 0u8;
        for i in 0..len {
            acc = self.add(acc, self.mul(x.get(i), self.conj_for(y.get(i), kind)));
        }
        acc
    }

    /// Euclidean dot product on coefficient vectors (used by the linear
    /// algebra kernels, independent of the duality form).
    #[inline]
    pub fn dot(&self, x: PackedVec, y: PackedVec, len: usize) -> u8 {
        self.form(x, y, len, FormKind::Euclidean)
    }
}
