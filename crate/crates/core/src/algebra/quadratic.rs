//! Quadratic forms over GF(2) given by a Gram matrix of the polar form and
//! the form's values on a basis.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use super::gf2::{parity, Gf2Solver, Gf2Vector};
use super::AlgebraError;

/// Largest dimension handled by the enumerative routines.
pub const ENUMERATION_LIMIT: usize = 24;

/// Type of a nondegenerate quadratic form (equivalently of a biextraspecial
/// group): `+` for maximal Witt index, `-` otherwise.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    /// `+1` or `-1`.
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct QuadraticSpace {
    dim: usize,
    /// Row `i` has bit `j` set iff `β(e_i, e_j) = 1`.
    gram: Vec<u64>,
    /// Bit `i` is `q(e_i)`.
    qvals: u64,
}

impl QuadraticSpace {
    pub fn new(gram: Vec<u64>, qvals: u64) -> Result<Self, AlgebraError> {
        let dim = gram.len();
        if dim > 63 {
            return Err(AlgebraError::TooLarge { dim, limit: 63 });
        }
        let mask = (1u64 << dim) - 1;
        for (i, &row) in gram.iter().enumerate() {
            if row & !mask != 0 || qvals & !mask != 0 {
                return Err(AlgebraError::DimensionMismatch {
                    expected: dim,
                    found: 64 - row.leading_zeros() as usize,
                });
            }
            if (row >> i) & 1 == 1 {
                return Err(AlgebraError::NotAlternating { row: i, col: i });
            }
            for (j, &other) in gram.iter().enumerate() {
                if ((row >> j) & 1) != ((other >> i) & 1) {
                    return Err(AlgebraError::NotAlternating { row: i, col: j });
                }
            }
        }
        Ok(QuadraticSpace { dim, gram, qvals })
    }

    /// Build from the polar form and the values on basis vectors.
    pub fn from_fn(
        dim: usize,
        beta: impl Fn(usize, usize) -> bool,
        q: impl Fn(usize) -> bool,
    ) -> Result<Self, AlgebraError> {
        let gram = (0..dim).map(|i| (0..dim).filter(|&j| beta(i, j)).fold(0u64, |r, j| r | (1 << j))).collect();
        let qvals = (0..dim).filter(|&i| q(i)).fold(0u64, |r, i| r | (1 << i));
        Self::new(gram, qvals)
    }

    /// Orthogonal sum of `n` hyperbolic planes (and one anisotropic plane
    /// if `sign` is `-`), in the order the summands are listed.
    pub fn standard(rank: usize, sign: Sign) -> Result<Self, AlgebraError> {
        if rank == 0 || rank % 2 == 1 {
            return Err(AlgebraError::OddDimension(rank));
        }
        let anis = rank - 2;
        Self::from_fn(rank, |i, j| i / 2 == j / 2 && i != j, |i| sign == Sign::Minus && i >= anis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &[u64] {
        &self.gram
    }

    pub fn qvals(&self) -> u64 {
        self.qvals
    }

    /// Gram matrix as nested rows of 0/1.
    pub fn gram_rows(&self) -> Vec<Vec<u8>> {
        self.gram.iter().map(|&row| (0..self.dim).map(|j| ((row >> j) & 1) as u8).collect()).collect()
    }

    fn check(&self, v: Gf2Vector) -> Result<(), AlgebraError> {
        if v.dim() != self.dim {
            return Err(AlgebraError::DimensionMismatch { expected: self.dim, found: v.dim() });
        }
        Ok(())
    }

    /// `q(v)`, extended from the basis values by `q(u+v) = q(u) + q(v) + β(u,v)`.
    pub fn eval_q(&self, v: Gf2Vector) -> Result<bool, AlgebraError> {
        self.check(v)?;
        Ok(self.q_bits(v.bits()))
    }

    pub fn beta(&self, u: Gf2Vector, v: Gf2Vector) -> Result<bool, AlgebraError> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.beta_bits(u.bits(), v.bits()))
    }

    pub(crate) fn q_bits(&self, v: u64) -> bool {
        let mut acc = parity(v & self.qvals);
        let mut rest = v;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            // pairs (i, j) with j < i
            acc ^= parity(self.gram[i] & v & ((1u64 << i) - 1));
        }
        acc
    }

    pub(crate) fn beta_bits(&self, u: u64, v: u64) -> bool {
        let mut acc = false;
        let mut rest = u;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc ^= parity(self.gram[i] & v);
        }
        acc
    }

    pub fn is_nondegenerate(&self) -> bool {
        Gf2Solver::new(&self.gram).rank() == self.dim
    }

    fn require_enumerable(&self) -> Result<(), AlgebraError> {
        if self.dim > ENUMERATION_LIMIT {
            return Err(AlgebraError::TooLarge { dim: self.dim, limit: ENUMERATION_LIMIT });
        }
        Ok(())
    }

    /// Number of nonzero vectors with `q(v) = 0`.
    pub fn singular_count(&self) -> Result<u64, AlgebraError> {
        self.require_enumerable()?;
        Ok((1..1u64 << self.dim).filter(|&v| !self.q_bits(v)).count() as u64)
    }

    /// Classify by counting nonzero singular vectors:
    /// `2^{n-1} + ε 2^{n/2-1} - 1` of them for type `ε`.
    pub fn form_type(&self) -> Result<Sign, AlgebraError> {
        if self.dim == 0 || self.dim % 2 == 1 {
            return Err(AlgebraError::OddDimension(self.dim));
        }
        if !self.is_nondegenerate() {
            return Err(AlgebraError::Degenerate);
        }
        let count = self.singular_count()?;
        let n = self.dim as u32;
        let base = 1u64 << (n - 1);
        let half = 1u64 << (n / 2 - 1);
        if count == base + half - 1 {
            Ok(Sign::Plus)
        } else if count == base - half - 1 {
            Ok(Sign::Minus)
        } else {
            Err(AlgebraError::NotQuadratic { singular: count })
        }
    }

    /// The form restricted to the span of `basis` (given in the ambient
    /// coordinates), in the coordinates of that basis.
    pub fn restrict(&self, basis: &[u64]) -> Result<QuadraticSpace, AlgebraError> {
        if !Gf2Solver::new(basis).is_independent() {
            return Err(AlgebraError::Dependent);
        }
        QuadraticSpace::from_fn(basis.len(), |i, j| self.beta_bits(basis[i], basis[j]), |i| self.q_bits(basis[i]))
    }

    /// Orthogonal complement of the span of `vs` inside the span of `within`.
    fn perp_within(&self, within: &[u64], vs: &[u64]) -> Vec<u64> {
        // Solve β(w, v_k) = 0 for all k over combinations of `within`.
        let d = within.len();
        let constraints: Vec<u64> =
            vs.iter().map(|&v| (0..d).filter(|&i| self.beta_bits(within[i], v)).fold(0, |r, i| r | (1 << i))).collect();
        kernel_of(&constraints, d).into_iter().map(|comb| combine(within, comb)).collect()
    }

    /// Greedy decomposition into pairwise orthogonal nondegenerate planes:
    /// hyperbolic planes first, then at most one anisotropic plane.
    pub fn orthogonal_decompose(&self) -> Result<Vec<Plane>, AlgebraError> {
        if self.dim % 2 == 1 {
            return Err(AlgebraError::OddDimension(self.dim));
        }
        if !self.is_nondegenerate() {
            return Err(AlgebraError::Degenerate);
        }
        self.require_enumerable()?;
        let mut remaining: Vec<u64> = (0..self.dim).map(|i| 1u64 << i).collect();
        let mut planes = Vec::new();
        while !remaining.is_empty() {
            let d = remaining.len();
            let v = (1..1u64 << d).map(|c| combine(&remaining, c)).find(|&v| !self.q_bits(v)).unwrap_or(remaining[0]);
            let mut w = *remaining.iter().find(|&&u| self.beta_bits(v, u)).ok_or(AlgebraError::Degenerate)?;
            if !self.q_bits(v) && self.q_bits(w) {
                w ^= v;
            }
            planes.push(Plane::new(self, v, w)?);
            remaining = self.perp_within(&remaining, &[v, w]);
        }
        Ok(planes)
    }

    /// Every decomposition into pairwise orthogonal nondegenerate planes, each
    /// listed once (as an unordered collection, presented in discovery order).
    pub fn all_orthogonal_decompositions(&self) -> Result<Vec<Vec<Plane>>, AlgebraError> {
        if self.dim % 2 == 1 {
            return Err(AlgebraError::OddDimension(self.dim));
        }
        if !self.is_nondegenerate() {
            return Err(AlgebraError::Degenerate);
        }
        if self.dim > 8 {
            return Err(AlgebraError::TooLarge { dim: self.dim, limit: 8 });
        }
        let mut out = Vec::new();
        let all: Vec<u64> = (0..self.dim).map(|i| 1u64 << i).collect();
        self.decompositions_rec(&all, &mut Vec::new(), &mut out)?;
        Ok(out)
    }

    fn decompositions_rec(
        &self,
        within: &[u64],
        prefix: &mut Vec<Plane>,
        out: &mut Vec<Vec<Plane>>,
    ) -> Result<(), AlgebraError> {
        if within.is_empty() {
            out.push(prefix.clone());
            return Ok(());
        }
        // The plane containing within[0] is unique in any decomposition.
        let w0 = within[0];
        let mut seen = Vec::new();
        for c in 1..1u64 << within.len() {
            let v = combine(within, c);
            if !self.beta_bits(w0, v) {
                continue;
            }
            let key = v.min(v ^ w0);
            if seen.contains(&key) {
                continue;
            }
            seen.push(key);
            let plane = Plane::new(self, w0, v)?;
            let rest = self.perp_within(within, &[w0, v]);
            prefix.push(plane);
            self.decompositions_rec(&rest, prefix, out)?;
            prefix.pop();
        }
        Ok(())
    }

    /// All isometries, as images of the standard basis vectors, found by
    /// backtracking on `q` values and pairwise `β` values.
    pub fn isometries(&self) -> Result<Vec<Vec<u64>>, AlgebraError> {
        if self.dim > 8 {
            return Err(AlgebraError::TooLarge { dim: self.dim, limit: 8 });
        }
        let mut out = Vec::new();
        let mut images = Vec::with_capacity(self.dim);
        self.isometries_rec(&mut images, &mut out);
        Ok(out)
    }

    fn isometries_rec(&self, images: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let i = images.len();
        if i == self.dim {
            out.push(images.clone());
            return;
        }
        let qi = (self.qvals >> i) & 1 == 1;
        for v in 1..1u64 << self.dim {
            if self.q_bits(v) != qi {
                continue;
            }
            if (0..i).any(|j| self.beta_bits(images[j], v) != ((self.gram[i] >> j) & 1 == 1)) {
                continue;
            }
            images.push(v);
            if Gf2Solver::new(images).is_independent() {
                self.isometries_rec(images, out);
            }
            images.pop();
        }
    }

    /// Orthogonal reflections `u ↦ u + β(u,v) v` for every nonsingular `v`,
    /// as images of the standard basis.
    pub fn reflections(&self) -> Vec<Vec<u64>> {
        (1..1u64 << self.dim)
            .filter(|&v| self.q_bits(v))
            .map(|v| {
                (0..self.dim)
                    .map(|i| {
                        let e = 1u64 << i;
                        if self.beta_bits(e, v) {
                            e ^ v
                        } else {
                            e
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Whether the linear map sending `e_i` to `images[i]` preserves `q`.
    pub fn preserves(&self, images: &[u64]) -> bool {
        images.len() == self.dim
            && Gf2Solver::new(images).is_independent()
            && (0..1u64 << self.dim).all(|v| self.q_bits(v) == self.q_bits(apply_linear(images, v)))
    }
}

/// Image of `v` under the linear map `e_i ↦ images[i]`.
pub fn apply_linear(images: &[u64], v: u64) -> u64 {
    combine(images, v)
}

/// `Σ_{i ∈ mask} vs[i]`.
pub(crate) fn combine(vs: &[u64], mask: u64) -> u64 {
    let mut acc = 0;
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        acc ^= vs[i];
    }
    acc
}

/// Basis of `{x ∈ GF(2)^d : parity(c & x) = 0 for every constraint c}`.
fn kernel_of(constraints: &[u64], d: usize) -> Vec<u64> {
    // reduced row echelon form of the constraint rows
    let mut rows: Vec<(u32, u64)> = Vec::new();
    for &c in constraints {
        let mut r = c;
        for &(p, row) in &rows {
            if (r >> p) & 1 == 1 {
                r ^= row;
            }
        }
        if r != 0 {
            let p = r.trailing_zeros();
            for (_, row) in rows.iter_mut() {
                if (*row >> p) & 1 == 1 {
                    *row ^= r;
                }
            }
            rows.push((p, r));
        }
    }
    let pivots: u64 = rows.iter().fold(0, |acc, &(p, _)| acc | (1 << p));
    (0..d)
        .filter(|&f| (pivots >> f) & 1 == 0)
        .map(|f| {
            let mut x = 1u64 << f;
            for &(p, row) in &rows {
                if (row >> f) & 1 == 1 {
                    x |= 1 << p;
                }
            }
            x
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaneKind {
    Hyperbolic,
    Anisotropic,
}

impl PlaneKind {
    pub fn sign(self) -> Sign {
        match self {
            PlaneKind::Hyperbolic => Sign::Plus,
            PlaneKind::Anisotropic => Sign::Minus,
        }
    }
}

/// A nondegenerate 2-dimensional subspace with its canonical basis
/// `(e, f)`, `β(e, f) = 1`: the two singular vectors of a hyperbolic plane, or
/// the two smallest nonzero vectors of an anisotropic one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Plane {
    pub e: u64,
    pub f: u64,
    pub kind: PlaneKind,
}

impl Plane {
    pub fn new(space: &QuadraticSpace, u: u64, v: u64) -> Result<Plane, AlgebraError> {
        if !space.beta_bits(u, v) {
            return Err(AlgebraError::Degenerate);
        }
        let mut nonzero = [u, v, u ^ v];
        nonzero.sort_unstable();
        let singular: Vec<u64> = nonzero.iter().copied().filter(|&x| !space.q_bits(x)).collect();
        Ok(match singular.len() {
            2 => Plane { e: singular[0], f: singular[1], kind: PlaneKind::Hyperbolic },
            0 => Plane { e: nonzero[0], f: nonzero[1], kind: PlaneKind::Anisotropic },
            // a nondegenerate plane has 0 or 2 singular nonzero vectors
            _ => return Err(AlgebraError::NotQuadratic { singular: singular.len() as u64 }),
        })
    }

    /// The three nonzero vectors, sorted.
    pub fn vectors(&self) -> [u64; 3] {
        let mut v = [self.e, self.f, self.e ^ self.f];
        v.sort_unstable();
        v
    }

    pub fn contains(&self, v: u64) -> bool {
        v == 0 || self.vectors().contains(&v)
    }
}

/// `|O^ε_{2n}(2)| = 2 · 2^{n(n-1)} (2^n - ε) Π_{i=1}^{n-1} (2^{2i} - 1)`.
pub fn orthogonal_group_order(dim: usize, sign: Sign) -> Option<u128> {
    if dim == 0 || dim % 2 == 1 || dim > 20 {
        return None;
    }
    let n = (dim / 2) as u32;
    let mut order: u128 = 2 * (1u128 << (n * (n - 1)));
    order *= ((1i128 << n) - sign.value() as i128) as u128;
    for i in 1..n {
        order *= (1u128 << (2 * i)) - 1;
    }
    Some(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gf2::random_invertible;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hyperbolic() -> QuadraticSpace {
        QuadraticSpace::new(vec![0b10, 0b01], 0b00).unwrap()
    }

    fn anisotropic() -> QuadraticSpace {
        QuadraticSpace::new(vec![0b10, 0b01], 0b11).unwrap()
    }

    fn v(bits: u64, dim: usize) -> Gf2Vector {
        Gf2Vector::from_bits(bits, dim)
    }

    // brute-force polarization oracle: q(u+v) + q(u) + q(v)
    fn polar(space: &QuadraticSpace, u: u64, w: u64) -> bool {
        space.q_bits(u ^ w) ^ space.q_bits(u) ^ space.q_bits(w)
    }

    #[test]
    fn eval_q_examples() {
        let h = hyperbolic();
        assert!(!h.eval_q(v(0, 2)).unwrap());
        assert!(!h.eval_q(v(0b01, 2)).unwrap());
        assert!(h.eval_q(v(0b11, 2)).unwrap());
        assert!(matches!(h.eval_q(v(0, 3)), Err(AlgebraError::DimensionMismatch { expected: 2, found: 3 })));
    }

    #[test]
    fn form_type_examples() {
        assert_eq!(hyperbolic().form_type().unwrap(), Sign::Plus);
        assert_eq!(anisotropic().form_type().unwrap(), Sign::Minus);
        let two_h = QuadraticSpace::standard(4, Sign::Plus).unwrap();
        assert_eq!(two_h.singular_count().unwrap(), 9);
        assert_eq!(two_h.form_type().unwrap(), Sign::Plus);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(QuadraticSpace::new(vec![0b11, 0b01], 0), Err(AlgebraError::NotAlternating { .. })));
        assert!(matches!(QuadraticSpace::new(vec![0b10, 0b00], 0), Err(AlgebraError::NotAlternating { .. })));
        let degenerate = QuadraticSpace::new(vec![0, 0], 0).unwrap();
        assert!(matches!(degenerate.form_type(), Err(AlgebraError::Degenerate)));
        assert!(matches!(degenerate.orthogonal_decompose(), Err(AlgebraError::Degenerate)));
    }

    #[test]
    fn polarization_exhaustive() {
        for dim in [2, 4, 6, 8] {
            for sign in [Sign::Plus, Sign::Minus] {
                let s = QuadraticSpace::standard(dim, sign).unwrap();
                for u in 0..1u64 << dim {
                    for w in 0..1u64 << dim {
                        assert_eq!(polar(&s, u, w), s.beta_bits(u, w));
                    }
                }
            }
        }
    }

    #[test]
    fn type_invariant_under_basis_change() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for dim in [2, 4, 6, 8] {
            for sign in [Sign::Plus, Sign::Minus] {
                let s = QuadraticSpace::standard(dim, sign).unwrap();
                for _ in 0..10 {
                    let m = random_invertible(dim, &mut rng);
                    let t = s.restrict(&m).unwrap();
                    assert_eq!(t.form_type().unwrap(), sign);
                }
            }
        }
    }

    fn check_decomposition(s: &QuadraticSpace, planes: &[Plane]) {
        assert_eq!(planes.len() * 2, s.dim());
        let mut span = Vec::new();
        for (i, p) in planes.iter().enumerate() {
            assert!(s.beta_bits(p.e, p.f));
            for other in &planes[i + 1..] {
                for x in [p.e, p.f] {
                    for y in [other.e, other.f] {
                        assert!(!s.beta_bits(x, y));
                    }
                }
            }
            span.extend([p.e, p.f]);
        }
        assert!(Gf2Solver::new(&span).is_independent());
        let product = planes.iter().fold(Sign::Plus, |acc, p| acc * p.kind.sign());
        assert_eq!(product, s.form_type().unwrap());
    }

    #[test]
    fn decompose_examples() {
        let h = hyperbolic();
        let p = h.orthogonal_decompose().unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].kind, PlaneKind::Hyperbolic);

        let plus = QuadraticSpace::standard(4, Sign::Plus).unwrap();
        let p = plus.orthogonal_decompose().unwrap();
        assert!(p.iter().all(|x| x.kind == PlaneKind::Hyperbolic));
        check_decomposition(&plus, &p);

        let minus = QuadraticSpace::standard(4, Sign::Minus).unwrap();
        let p = minus.orthogonal_decompose().unwrap();
        assert_eq!(p[0].kind, PlaneKind::Hyperbolic);
        assert_eq!(p[1].kind, PlaneKind::Anisotropic);
        assert!(p[1].vectors().iter().all(|&x| minus.q_bits(x)));
        check_decomposition(&minus, &p);
    }

    #[test]
    fn decompose_after_basis_change() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in [2, 4, 6, 8] {
            for sign in [Sign::Plus, Sign::Minus] {
                let s = QuadraticSpace::standard(dim, sign).unwrap();
                let t = s.restrict(&random_invertible(dim, &mut rng)).unwrap();
                let planes = t.orthogonal_decompose().unwrap();
                check_decomposition(&t, &planes);
                let anis = planes.iter().filter(|p| p.kind == PlaneKind::Anisotropic).count();
                assert_eq!(anis, (sign == Sign::Minus) as usize);
                assert!(planes[..planes.len() - 1].iter().all(|p| p.kind == PlaneKind::Hyperbolic));
            }
        }
    }

    #[test]
    fn all_decompositions_are_valid_and_distinct() {
        for sign in [Sign::Plus, Sign::Minus] {
            let s = QuadraticSpace::standard(4, sign).unwrap();
            let all = s.all_orthogonal_decompositions().unwrap();
            // one decomposition per nondegenerate plane through e_0: 8 partners
            // v with β(e_0, v) = 1, paired as {v, v + e_0}
            assert_eq!(all.len(), 4);
            for d in &all {
                check_decomposition(&s, d);
            }
        }
    }

    #[test]
    fn orthogonal_group_orders() {
        // enumeration oracle against the closed formula
        for (dim, sign, expected) in
            [(2, Sign::Plus, 2u128), (2, Sign::Minus, 6), (4, Sign::Plus, 72), (4, Sign::Minus, 120)]
        {
            let s = QuadraticSpace::standard(dim, sign).unwrap();
            let isos = s.isometries().unwrap();
            assert_eq!(isos.len() as u128, expected);
            assert_eq!(orthogonal_group_order(dim, sign), Some(expected));
            assert!(isos.iter().all(|m| s.preserves(m)));
        }
        assert_eq!(orthogonal_group_order(6, Sign::Plus), Some(40320));
        assert_eq!(orthogonal_group_order(6, Sign::Minus), Some(51840));
    }

    #[test]
    fn reflections_are_isometries() {
        for sign in [Sign::Plus, Sign::Minus] {
            let s = QuadraticSpace::standard(4, sign).unwrap();
            for r in s.reflections() {
                assert!(s.preserves(&r));
            }
        }
    }
}
