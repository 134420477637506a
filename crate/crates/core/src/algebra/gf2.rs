//! Bit vectors over GF(2) and the small amount of linear algebra the rest of
//! the crate needs (rank, coordinates in a basis, random invertible matrices).

use std::fmt;
use std::ops::{Add, AddAssign};

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Maximum supported dimension.
pub const MAX_DIM: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gf2Vector {
    bits: u64,
    dim: u8,
}

impl Gf2Vector {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        Gf2Vector { bits: 0, dim: dim as u8 }
    }

    /// Build from a bit mask; bits at positions `>= dim` must be clear.
    pub fn from_bits(bits: u64, dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        debug_assert!(dim == 64 || bits >> dim == 0, "bits outside dimension");
        Gf2Vector { bits, dim: dim as u8 }
    }

    pub fn basis(i: usize, dim: usize) -> Self {
        assert!(i < dim);
        Self::from_bits(1 << i, dim)
    }

    pub fn from_coords(coords: &[bool]) -> Self {
        let bits = coords.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i));
        Self::from_bits(bits, coords.len())
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn dim(self) -> usize {
        self.dim as usize
    }

    pub fn get(self, i: usize) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn coords(self) -> Vec<u8> {
        (0..self.dim()).map(|i| self.get(i) as u8).collect()
    }

    /// Every vector of the space `GF(2)^dim`, zero first.
    pub fn all(dim: usize) -> impl Iterator<Item = Gf2Vector> {
        assert!(dim < 64);
        (0..1u64 << dim).map(move |b| Gf2Vector::from_bits(b, dim))
    }
}

impl Add for Gf2Vector {
    type Output = Gf2Vector;
    fn add(self, rhs: Gf2Vector) -> Gf2Vector {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Gf2Vector { bits: self.bits ^ rhs.bits, dim: self.dim }
    }
}

impl AddAssign for Gf2Vector {
    fn add_assign(&mut self, rhs: Gf2Vector) {
        *self = *self + rhs;
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim() {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, "]")
    }
}

#[inline]
pub(crate) fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

/// Row-reduced view of a list of vectors, able to express any vector of their
/// span as a combination of the originals.
///
/// `coords` returns a mask over the *input* list, bit `i` meaning the `i`-th
/// input vector takes part.
#[derive(Clone, Debug)]
pub struct Gf2Solver {
    // (pivot bit, reduced row, combination of inputs producing the row)
    rows: Vec<(u32, u64, u64)>,
    inputs: usize,
}

impl Gf2Solver {
    pub fn new(vectors: &[u64]) -> Self {
        assert!(vectors.len() <= 64);
        let mut rows: Vec<(u32, u64, u64)> = Vec::new();
        for (i, &v) in vectors.iter().enumerate() {
            let (mut r, mut c) = (v, 1u64 << i);
            for &(p, row, comb) in &rows {
                if (r >> p) & 1 == 1 {
                    r ^= row;
                    c ^= comb;
                }
            }
            if r != 0 {
                let p = 63 - r.leading_zeros();
                // keep earlier rows reduced at the new pivot
                for (_, row, comb) in rows.iter_mut() {
                    if (*row >> p) & 1 == 1 {
                        *row ^= r;
                        *comb ^= c;
                    }
                }
                rows.push((p, r, c));
            }
        }
        Gf2Solver { rows, inputs: vectors.len() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_independent(&self) -> bool {
        self.rows.len() == self.inputs
    }

    /// Combination of the input vectors summing to `v`, or `None` if `v` is
    /// outside their span.
    pub fn coords(&self, v: u64) -> Option<u64> {
        let (mut r, mut c) = (v, 0u64);
        for &(p, row, comb) in &self.rows {
            if (r >> p) & 1 == 1 {
                r ^= row;
                c ^= comb;
            }
        }
        (r == 0).then_some(c)
    }

    pub fn contains(&self, v: u64) -> bool {
        self.coords(v).is_some()
    }
}

/// Rank of a list of vectors.
pub fn rank(vectors: &[u64]) -> usize {
    Gf2Solver::new(vectors).rank()
}

/// A uniformly random invertible `dim × dim` matrix, returned as rows.
pub fn random_invertible<R: Rng>(dim: usize, rng: &mut R) -> Vec<u64> {
    let mask = if dim == 64 { u64::MAX } else { (1u64 << dim) - 1 };
    loop {
        let rows: Vec<u64> = (0..dim).map(|_| rng.gen::<u64>() & mask).collect();
        if rank(&rows) == dim {
            return rows;
        }
    }
}
