use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::gf4::packed;
use crate::algebra::Gf4;

/// Maximum number of rank-2 factors, so that element indices fit in 64 bits.
pub const MAX_FACTORS: usize = 15;

/// Element of `Q`: one GF(4) triple `(a_i, b_i, c_i)` per rank-2 factor,
/// multiplied by `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')` factorwise.
///
/// All factors share one centre, so the canonical form keeps the central
/// coordinate only on factor 1 (`c_i = 0` for `i ≥ 2`). Internally the `a`
/// and `b` coordinates are packed two bits per factor.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QElement {
    k: u8,
    a: u32,
    b: u32,
    c: Gf4,
}

pub type Triple = [Gf4; 3];

impl QElement {
    pub fn identity(k: usize) -> QElement {
        assert!((1..=MAX_FACTORS).contains(&k), "factor count {k} out of range");
        QElement { k: k as u8, a: 0, b: 0, c: Gf4::ZERO }
    }

    /// Central element `(0,0,z)`.
    pub fn central(k: usize, z: Gf4) -> QElement {
        QElement { c: z, ..Self::identity(k) }
    }

    /// From one triple per factor; central parts of all factors are summed
    /// into factor 1.
    pub fn from_triples(triples: &[Triple]) -> QElement {
        let mut x = Self::identity(triples.len());
        for (i, t) in triples.iter().enumerate() {
            x.a = packed::set(x.a, i, t[0]);
            x.b = packed::set(x.b, i, t[1]);
            x.c += t[2];
        }
        x
    }

    pub fn from_codes(codes: &[[u8; 3]]) -> QElement {
        let triples: Vec<Triple> =
            codes.iter().map(|t| [Gf4::from_code(t[0]), Gf4::from_code(t[1]), Gf4::from_code(t[2])]).collect();
        Self::from_triples(&triples)
    }

    pub(crate) fn from_parts(k: usize, a: u32, b: u32, c: Gf4) -> QElement {
        QElement { k: k as u8, a, b, c }
    }

    pub fn factor_count(&self) -> usize {
        self.k as usize
    }

    pub fn a(&self, i: usize) -> Gf4 {
        packed::get(self.a, i)
    }

    pub fn b(&self, i: usize) -> Gf4 {
        packed::get(self.b, i)
    }

    /// The shared central coordinate.
    pub fn c(&self) -> Gf4 {
        self.c
    }

    pub(crate) fn a_word(&self) -> u32 {
        self.a
    }

    pub(crate) fn b_word(&self) -> u32 {
        self.b
    }

    pub fn triples(&self) -> Vec<Triple> {
        (0..self.factor_count()).map(|i| [self.a(i), self.b(i), if i == 0 { self.c } else { Gf4::ZERO }]).collect()
    }

    pub fn codes(&self) -> Vec<[u8; 3]> {
        self.triples().iter().map(|t| [t[0].code(), t[1].code(), t[2].code()]).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.a == 0 && self.b == 0 && self.c.is_zero()
    }

    pub fn is_central(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Image in `Q/Z` as a GF(2) vector of `4k` bits: the `a` word, then the
    /// `b` word.
    pub fn bar(&self) -> u64 {
        self.a as u64 | ((self.b as u64) << (2 * self.k))
    }

    /// Dense index in `0..|Q|`.
    pub fn index(&self) -> usize {
        let k = self.k as usize;
        self.a as usize | (self.b as usize) << (2 * k) | (self.c.code() as usize) << (4 * k)
    }

    pub fn from_index(k: usize, index: usize) -> QElement {
        let mask = (1usize << (2 * k)) - 1;
        QElement {
            k: k as u8,
            a: (index & mask) as u32,
            b: ((index >> (2 * k)) & mask) as u32,
            c: Gf4::from_code((index >> (4 * k)) as u8),
        }
    }

    /// Lift of a `Q/Z` vector with central coordinate 0.
    pub fn from_bar(k: usize, bar: u64) -> QElement {
        let mask = (1u64 << (2 * k)) - 1;
        QElement { k: k as u8, a: (bar & mask) as u32, b: ((bar >> (2 * k)) & mask) as u32, c: Gf4::ZERO }
    }

    pub fn order_of_q(k: usize) -> usize {
        1 << (4 * k + 2)
    }

    pub fn random<R: Rng>(k: usize, rng: &mut R) -> QElement {
        Self::from_index(k, rng.gen_range(0..Self::order_of_q(k)))
    }

    #[inline]
    pub fn mul(&self, other: &QElement) -> QElement {
        debug_assert_eq!(self.k, other.k);
        let k = self.k as usize;
        QElement {
            k: self.k,
            a: self.a ^ other.a,
            b: self.b ^ other.b,
            c: self.c + other.c + packed::dot(self.a, other.b, k),
        }
    }

    /// `(a,b,c)⁻¹ = (a, b, c + ab)` factorwise.
    pub fn inverse(&self) -> QElement {
        QElement { c: self.c + packed::dot(self.a, self.b, self.k as usize), ..*self }
    }

    pub fn square(&self) -> QElement {
        Self::central(self.k as usize, packed::dot(self.a, self.b, self.k as usize))
    }

    pub fn pow(&self, n: u32) -> QElement {
        (0..n).fold(Self::identity(self.k as usize), |acc, _| acc.mul(self))
    }

    /// Central coordinate of `x⁻¹y⁻¹xy`.
    pub fn commutator(&self, other: &QElement) -> Gf4 {
        let k = self.k as usize;
        packed::dot(self.a, other.b, k) + packed::dot(other.a, self.b, k)
    }

    /// Conjugate `g⁻¹ x g`.
    pub fn conjugate_by(&self, g: &QElement) -> QElement {
        g.inverse().mul(self).mul(g)
    }

    fn sort_key(&self) -> u128 {
        let mut key = 0u128;
        for (i, t) in self.triples().iter().enumerate() {
            key = (key << 4) | ((t[0].code() as u128) << 2) | t[1].code() as u128;
            if i == 0 {
                key = (key << 2) | t[2].code() as u128;
            }
        }
        key
    }
}

impl PartialOrd for QElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the canonical triple list.
impl Ord for QElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.k.cmp(&other.k).then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl fmt::Display for QElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.triples() {
            write!(f, "({},{},{})", t[0], t[1], t[2])?;
        }
        Ok(())
    }
}

impl fmt::Debug for QElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Named elements of the centre `Z = {1, a, b, c}`, encoded as
/// `a = (0,0,1)`, `b = (0,0,η²)`, `c = ab = (0,0,η)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZLetter {
    #[serde(rename = "1")]
    One,
    A,
    B,
    C,
}

impl ZLetter {
    pub fn value(self) -> Gf4 {
        match self {
            ZLetter::One => Gf4::ZERO,
            ZLetter::A => Gf4::ONE,
            ZLetter::B => Gf4::ETA2,
            ZLetter::C => Gf4::ETA,
        }
    }

    pub fn of(z: Gf4) -> ZLetter {
        match z.code() {
            0 => ZLetter::One,
            1 => ZLetter::A,
            3 => ZLetter::B,
            _ => ZLetter::C,
        }
    }
}

impl fmt::Display for ZLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ZLetter::One => "1",
            ZLetter::A => "a",
            ZLetter::B => "b",
            ZLetter::C => "c",
        };
        f.write_str(s)
    }
}

/// Element `t^flip s^rot` of `L ≅ S3`, with `s³ = t² = (st)² = e`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct LElement {
    flip: bool,
    rot: u8,
}

impl LElement {
    pub const E: LElement = LElement { flip: false, rot: 0 };
    pub const S: LElement = LElement { flip: false, rot: 1 };
    pub const S2: LElement = LElement { flip: false, rot: 2 };
    pub const T: LElement = LElement { flip: true, rot: 0 };
    pub const TS: LElement = LElement { flip: true, rot: 1 };
    pub const TS2: LElement = LElement { flip: true, rot: 2 };

    pub const ALL: [LElement; 6] = [Self::E, Self::S, Self::S2, Self::T, Self::TS, Self::TS2];

    pub fn new(flip: bool, rot: u8) -> LElement {
        LElement { flip, rot: rot % 3 }
    }

    pub fn flip(&self) -> bool {
        self.flip
    }

    pub fn rot(&self) -> u8 {
        self.rot
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::E
    }

    // s^i t = t s^{-i}
    pub fn mul(&self, other: &LElement) -> LElement {
        let carried = if other.flip { (3 - self.rot) % 3 } else { self.rot };
        LElement::new(self.flip ^ other.flip, carried + other.rot)
    }

    pub fn inverse(&self) -> LElement {
        if self.flip {
            *self
        } else {
            LElement::new(false, 3 - self.rot)
        }
    }

    pub fn order(&self) -> u32 {
        match (self.flip, self.rot) {
            (false, 0) => 1,
            (false, _) => 3,
            (true, _) => 2,
        }
    }

    pub fn word(&self) -> &'static str {
        match (self.flip, self.rot) {
            (false, 0) => "e",
            (false, 1) => "s",
            (false, _) => "s2",
            (true, 0) => "t",
            (true, 1) => "ts",
            (true, _) => "ts2",
        }
    }
}

impl fmt::Display for LElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.word())
    }
}

/// Element `q·l` of `G = Q:L`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupElement {
    pub q: QElement,
    pub l: LElement,
}

impl GroupElement {
    pub fn new(q: QElement, l: LElement) -> Self {
        GroupElement { q, l }
    }

    pub fn from_q(q: QElement) -> Self {
        GroupElement { q, l: LElement::E }
    }

    pub fn from_l(k: usize, l: LElement) -> Self {
        GroupElement { q: QElement::identity(k), l }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·{}", self.q, self.l)
    }
}
