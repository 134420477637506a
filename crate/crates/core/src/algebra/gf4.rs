//! The field with four elements.
//!
//! Elements are stored as 2-bit polynomial residues modulo `η² + η + 1`:
//! bit 1 is the coefficient of `η`, bit 0 the constant term. Hence
//!
//! | code | element |
//! |------|---------|
//! | 0    | 0       |
//! | 1    | 1       |
//! | 2    | η       |
//! | 3    | η² = η + 1 |
//!
//! Addition is XOR of codes, so packed vectors of GF(4) coordinates add with
//! a single XOR.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign};

use serde::{Deserialize, Serialize};

// log_η of codes 1, 2, 3; index 0 unused.
const LOG: [u8; 4] = [0, 0, 1, 2];
const EXP: [u8; 3] = [1, 2, 3];

const MUL: [[u8; 4]; 4] = {
    let mut t = [[0u8; 4]; 4];
    let mut x = 1;
    while x < 4 {
        let mut y = 1;
        while y < 4 {
            t[x][y] = EXP[((LOG[x] + LOG[y]) % 3) as usize];
            y += 1;
        }
        x += 1;
    }
    t
};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gf4(u8);

impl Gf4 {
    pub const ZERO: Gf4 = Gf4(0);
    pub const ONE: Gf4 = Gf4(1);
    pub const ETA: Gf4 = Gf4(2);
    pub const ETA2: Gf4 = Gf4(3);

    /// All four elements in code order.
    pub const ALL: [Gf4; 4] = [Gf4(0), Gf4(1), Gf4(2), Gf4(3)];

    pub const fn from_code(code: u8) -> Gf4 {
        Gf4(code & 3)
    }

    pub const fn code(self) -> u8 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Frobenius map `x ↦ x²`; swaps `η` and `η²`.
    pub const fn square(self) -> Gf4 {
        match self.0 {
            2 => Gf4(3),
            3 => Gf4(2),
            c => Gf4(c),
        }
    }

    pub const fn mul_const(self, other: Gf4) -> Gf4 {
        Gf4(MUL[self.0 as usize][other.0 as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(self) -> Option<Gf4> {
        match self.0 {
            0 => None,
            c => Some(Gf4(EXP[((3 - LOG[c as usize]) % 3) as usize])),
        }
    }

    /// `η^n` for any integer exponent.
    pub fn eta_pow(n: i64) -> Gf4 {
        Gf4(EXP[n.rem_euclid(3) as usize])
    }
}

// addition in characteristic 2 is xor
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for Gf4 {
    type Output = Gf4;
    fn add(self, rhs: Gf4) -> Gf4 {
        Gf4(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for Gf4 {
    fn add_assign(&mut self, rhs: Gf4) {
        self.0 ^= rhs.0;
    }
}

impl Mul for Gf4 {
    type Output = Gf4;
    fn mul(self, rhs: Gf4) -> Gf4 {
        self.mul_const(rhs)
    }
}

impl MulAssign for Gf4 {
    fn mul_assign(&mut self, rhs: Gf4) {
        *self = *self * rhs;
    }
}

impl fmt::Display for Gf4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.0 {
            0 => "0",
            1 => "1",
            2 => "η",
            _ => "η²",
        };
        f.write_str(s)
    }
}

impl fmt::Debug for Gf4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Packed vectors of GF(4) coordinates, 2 bits per slot, slot `i` at bits
/// `2i..2i+2`.
pub(crate) mod packed {
    use super::Gf4;

    #[inline]
    pub fn get(word: u32, i: usize) -> Gf4 {
        Gf4::from_code(((word >> (2 * i)) & 3) as u8)
    }

    #[inline]
    pub fn set(word: u32, i: usize, x: Gf4) -> u32 {
        (word & !(3 << (2 * i))) | ((x.code() as u32) << (2 * i))
    }

    /// Multiply every slot by `x`.
    pub fn scale(word: u32, len: usize, x: Gf4) -> u32 {
        (0..len).fold(0, |acc, i| set(acc, i, get(word, i) * x))
    }

    /// Frobenius on every slot.
    pub fn square(word: u32, len: usize) -> u32 {
        // Frobenius swaps codes 2 and 3: flip bit 0 wherever bit 1 is set.
        let mask = (1u64 << (2 * len)) as u32;
        let mask = mask.wrapping_sub(1);
        let hi = (word >> 1) & 0x5555_5555 & mask;
        word ^ hi
    }

    /// `Σ x_i y_i`.
    pub fn dot(x: u32, y: u32, len: usize) -> Gf4 {
        (0..len).fold(Gf4::ZERO, |acc, i| acc + get(x, i) * get(y, i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_examples() {
        assert_eq!(Gf4::ETA * Gf4::ETA, Gf4::ETA2);
        assert_eq!(Gf4::ETA * Gf4::ETA2, Gf4::ONE);
        assert_eq!(Gf4::ZERO * Gf4::ETA, Gf4::ZERO);
    }

    #[test]
    fn eta_generates_multiplicative_group() {
        let powers: Vec<_> = (0..3).map(Gf4::eta_pow).collect();
        assert_eq!(powers, vec![Gf4::ONE, Gf4::ETA, Gf4::ETA2]);
        assert_eq!(Gf4::eta_pow(3), Gf4::ONE);
        // η² = η + 1
        assert_eq!(Gf4::ETA * Gf4::ETA, Gf4::ETA + Gf4::ONE);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for x in Gf4::ALL {
            assert_eq!(x.square(), x * x);
            assert_eq!(x.square().square(), x);
            assert_eq!(x + x, Gf4::ZERO);
            if let Some(inv) = x.inverse() {
                assert_eq!(x * inv, Gf4::ONE);
            }
            for y in Gf4::ALL {
                assert_eq!(x * y, y * x);
                assert_eq!((x + y).square(), x.square() + y.square());
                for z in Gf4::ALL {
                    assert_eq!((x * y) * z, x * (y * z));
                    assert_eq!(x * (y + z), x * y + x * z);
                }
            }
        }
    }

    #[test]
    fn packed_ops_match_scalar() {
        for word in 0u32..256 {
            let sq = packed::square(word, 4);
            let sc = packed::scale(word, 4, Gf4::ETA);
            for i in 0..4 {
                assert_eq!(packed::get(sq, i), packed::get(word, i).square());
                assert_eq!(packed::get(sc, i), packed::get(word, i) * Gf4::ETA);
            }
        }
        assert_eq!(packed::dot(0b0110, 0b1011, 2), Gf4::ETA * Gf4::ETA2 + Gf4::ONE * Gf4::ETA);
    }
}
