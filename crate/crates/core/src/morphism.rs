//! Maps of `Q` that fix the centre pointwise, stored by the images of the
//! standard generators.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::gf4::packed;
use crate::algebra::Gf2Solver;
use crate::groupmodel::{standard_generators, Group, GroupElement, LElement, QElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("source elements do not form a basis of Q/Z")]
    NotBasis,
    #[error("images do not generate Q")]
    NotBijective,
    #[error("relation fails: {0}")]
    NotHomomorphism(String),
    #[error("map does not commute with {0}")]
    NotEquivariant(String),
    #[error("factor counts differ: {0} and {1}")]
    FactorMismatch(usize, usize),
}

/// A map `Q → Q` that is the identity on `Z`, given by the images of the
/// standard generators `e_0, …, e_{4k-1}`.
///
/// Evaluation writes `x = e_{j₁}⋯e_{j_r}·z` with `j₁ < … < j_r` and `z`
/// central and returns `φ(e_{j₁})⋯φ(e_{j_r})·z`. This is a homomorphism
/// exactly when the images satisfy the squares and commutators of the
/// generators, which is what [`QMap::check_homomorphism`] tests.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMap {
    images: Vec<QElement>,
}

impl QMap {
    pub fn identity(k: usize) -> QMap {
        QMap { images: standard_generators(k) }
    }

    /// The map with `e_j ↦ images[j]`; not checked.
    pub fn from_standard_images(images: Vec<QElement>) -> QMap {
        QMap { images }
    }

    /// The map sending each `sources[i]` to `images[i]`, extended through
    /// the ordered product. `sources` must be a basis of `Q/Z`.
    pub fn from_generator_images(sources: &[QElement], images: &[QElement]) -> Result<QMap, MorphismError> {
        let k = sources.first().map_or(0, QElement::factor_count);
        if sources.len() != 4 * k || images.len() != sources.len() {
            return Err(MorphismError::NotBasis);
        }
        if let Some(x) = images.iter().find(|x| x.factor_count() != k) {
            return Err(MorphismError::FactorMismatch(k, x.factor_count()));
        }
        let bars: Vec<u64> = sources.iter().map(QElement::bar).collect();
        let solver = Gf2Solver::new(&bars);
        if !solver.is_independent() {
            return Err(MorphismError::NotBasis);
        }
        let out = standard_generators(k)
            .into_iter()
            .map(|e| {
                let mask = solver.coords(e.bar()).expect("basis spans");
                let (mut src, mut img) = (QElement::identity(k), QElement::identity(k));
                for i in (0..sources.len()).filter(|i| mask >> i & 1 == 1) {
                    src = src.mul(&sources[i]);
                    img = img.mul(&images[i]);
                }
                // e = src·z with z central
                let z = src.inverse().mul(&e);
                img.mul(&z)
            })
            .collect();
        Ok(QMap { images: out })
    }

    pub fn factor_count(&self) -> usize {
        self.images.len() / 4
    }

    pub fn images(&self) -> &[QElement] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: &QElement) -> QElement {
        let k = self.factor_count();
        let z = QElement::central(k, x.c() + packed::dot(x.a_word(), x.b_word(), k));
        let mut bar = x.bar();
        let mut prod = QElement::identity(k);
        while bar != 0 {
            prod = prod.mul(&self.images[bar.trailing_zeros() as usize]);
            bar &= bar - 1;
        }
        prod.mul(&z)
    }

    pub fn apply_g(&self, g: &GroupElement) -> GroupElement {
        GroupElement::new(self.apply(&g.q), g.l)
    }

    /// `x ↦ other(self(x))`.
    pub fn then(&self, other: &QMap) -> QMap {
        QMap { images: self.images.iter().map(|x| other.apply(x)).collect() }
    }

    pub fn inverse(&self) -> Result<QMap, MorphismError> {
        let k = self.factor_count();
        QMap::from_generator_images(&self.images, &standard_generators(k)).map_err(|e| match e {
            MorphismError::NotBasis => MorphismError::NotBijective,
            e => e,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images == standard_generators(self.factor_count())
    }

    /// Images of the generators are independent modulo `Z`.
    pub fn check_bijective(&self) -> Result<(), MorphismError> {
        let bars: Vec<u64> = self.images.iter().map(QElement::bar).collect();
        if Gf2Solver::new(&bars).is_independent() {
            Ok(())
        } else {
            Err(MorphismError::NotBijective)
        }
    }

    /// The images satisfy every square and commutator relation of the
    /// generators. Since `Q` has class 2 with `Q' = Φ(Q) = Z`, these
    /// relations together with the centrality of `Z` present `Q`.
    pub fn check_homomorphism(&self) -> Result<(), MorphismError> {
        let k = self.factor_count();
        let gens = standard_generators(k);
        for (j, (e, x)) in gens.iter().zip(&self.images).enumerate() {
            if e.square() != x.square() {
                return Err(MorphismError::NotHomomorphism(format!("square of e_{j}")));
            }
            for (l, (f, y)) in gens.iter().zip(&self.images).enumerate().skip(j + 1) {
                if e.commutator(f) != x.commutator(y) {
                    return Err(MorphismError::NotHomomorphism(format!("[e_{j}, e_{l}]")));
                }
            }
        }
        Ok(())
    }

    /// `φ(x^l) = φ(x)^l` for `l ∈ {s, τ}`, with the action of `source` on
    /// the left and of `target` on the right.
    pub fn check_equivariant(&self, source: &Group, target: &Group) -> Result<(), MorphismError> {
        let k = self.factor_count();
        if source.k() != k || target.k() != k {
            return Err(MorphismError::FactorMismatch(source.k(), target.k()));
        }
        for (j, (e, x)) in standard_generators(k).iter().zip(&self.images).enumerate() {
            if self.apply(&source.s_act(e)) != target.s_act(x) {
                return Err(MorphismError::NotEquivariant(format!("s on e_{j}")));
            }
            if self.apply(&source.tau_act(e)) != target.tau_act(x) {
                return Err(MorphismError::NotEquivariant(format!("t on e_{j}")));
            }
        }
        Ok(())
    }

    /// Bijective homomorphism commuting with `L`, so that
    /// `(q, l) ↦ (φ(q), l)` is an isomorphism `source → target`.
    pub fn check_isomorphism(&self, source: &Group, target: &Group) -> Result<(), MorphismError> {
        self.check_bijective()?;
        self.check_homomorphism()?;
        self.check_equivariant(source, target)
    }

    /// `Φ(gh) = Φ(g)Φ(h)` on every pair of `G` (when `pairs` is `None`) or
    /// on `pairs` seeded random pairs.
    pub fn check_on_pairs(
        &self,
        source: &Group,
        target: &Group,
        pairs: Option<usize>,
        seed: u64,
    ) -> Result<usize, MorphismError> {
        let check = |g: &GroupElement, h: &GroupElement| -> Result<(), MorphismError> {
            let lhs = self.apply_g(&source.g_mul(g, h));
            let rhs = target.g_mul(&self.apply_g(g), &self.apply_g(h));
            if lhs == rhs {
                Ok(())
            } else {
                Err(MorphismError::NotHomomorphism(format!("product {g} * {h}")))
            }
        };
        match pairs {
            None => {
                let all: Vec<GroupElement> = source.elements().collect();
                for g in &all {
                    for h in &all {
                        check(g, h)?;
                    }
                }
                Ok(all.len() * all.len())
            }
            Some(n) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let k = source.k();
                let mut random = || {
                    use rand::Rng;
                    let l = LElement::ALL[rng.gen_range(0..6)];
                    GroupElement::new(QElement::random(k, &mut rng), l)
                };
                for _ in 0..n {
                    let (g, h) = (random(), random());
                    check(&g, &h)?;
                }
                Ok(n)
            }
        }
    }
}

impl fmt::Debug for QMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.images.iter()).finish()
    }
}

/// Serialized form: the image of each standard generator as a list of
/// triples of GF(4) codes.
impl Serialize for QMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let codes: Vec<Vec<[u8; 3]>> = self.images.iter().map(QElement::codes).collect();
        codes.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let codes: Vec<Vec<[u8; 3]>> = Vec::deserialize(d)?;
        let k = codes.first().map_or(0, Vec::len);
        if k == 0 || codes.len() != 4 * k || codes.iter().any(|c| c.len() != k || c.iter().flatten().any(|&v| v > 3)) {
            return Err(serde::de::Error::custom("expected 4k images with k triples each"));
        }
        Ok(QMap { images: codes.iter().map(|c| QElement::from_codes(c)).collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Sign;
    use crate::groupmodel::GroupDescriptor;

    fn group(rank: usize, sign: Sign) -> Group {
        Group::construct(&GroupDescriptor::new(rank, sign).unwrap())
    }

    #[test]
    fn identity_and_evaluation() {
        let id = QMap::identity(2);
        for i in (0..4096).step_by(13) {
            let x = QElement::from_index(2, i);
            assert_eq!(id.apply(&x), x);
        }
        assert!(id.is_identity());
    }

    #[test]
    fn inner_automorphisms_are_qmaps() {
        let g = group(4, Sign::Plus);
        let r = QElement::from_codes(&[[1, 2, 0], [3, 0, 0]]);
        let gens = g.q_generators();
        let imgs: Vec<_> = gens.iter().map(|x| x.conjugate_by(&r)).collect();
        let f = QMap::from_generator_images(&gens, &imgs).unwrap();
        f.check_homomorphism().unwrap();
        f.check_bijective().unwrap();
        for x in g.q_elements().step_by(7) {
            assert_eq!(f.apply(&x), x.conjugate_by(&r));
        }
    }

    #[test]
    fn s_moves_the_centre_so_fails_the_relations() {
        // s moves Z, so as a Z-fixing map it breaks the square relations
        let g = group(2, Sign::Plus);
        let gens = g.q_generators();
        let imgs: Vec<_> = gens.iter().map(|x| g.s_act(x)).collect();
        let f = QMap::from_generator_images(&gens, &imgs).unwrap();
        assert!(f.check_homomorphism().is_err());
    }

    #[test]
    fn composition_and_inverse() {
        let g = group(4, Sign::Minus);
        let a = QElement::from_codes(&[[1, 0, 0], [0, 2, 0]]);
        let b = QElement::from_codes(&[[0, 3, 0], [1, 1, 0]]);
        let gens = g.q_generators();
        let fa =
            QMap::from_generator_images(&gens, &gens.iter().map(|x| x.conjugate_by(&a)).collect::<Vec<_>>()).unwrap();
        let fb =
            QMap::from_generator_images(&gens, &gens.iter().map(|x| x.conjugate_by(&b)).collect::<Vec<_>>()).unwrap();
        let fab = fa.then(&fb);
        for x in g.q_elements().step_by(11) {
            assert_eq!(fab.apply(&x), x.conjugate_by(&a.mul(&b)));
        }
        let inv = fab.inverse().unwrap();
        assert!(fab.then(&inv).is_identity());
        assert!(inv.then(&fab).is_identity());
    }

    #[test]
    fn non_basis_rejected() {
        let gens = standard_generators(1);
        let mut src = gens.clone();
        src[3] = src[0];
        assert_eq!(QMap::from_generator_images(&src, &gens), Err(MorphismError::NotBasis));
        let mut imgs = gens.clone();
        imgs[1] = imgs[0];
        assert_eq!(QMap::from_standard_images(imgs).check_bijective(), Err(MorphismError::NotBijective));
    }

    #[test]
    fn homomorphism_check_agrees_with_exhaustive_products() {
        // every assignment of images in B(2) that passes the relation check is
        // multiplicative on all 64² pairs, and conversely
        let all: Vec<QElement> = (0..64).map(|i| QElement::from_index(1, i)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        use rand::seq::SliceRandom;
        let mut passing = 0;
        for trial in 0..3000 {
            let imgs: Vec<_> = if trial % 2 == 0 {
                (0..4).map(|_| *all.choose(&mut rng).unwrap()).collect()
            } else {
                // inner automorphism twisted by a random central character
                let r = *all.choose(&mut rng).unwrap();
                standard_generators(1)
                    .iter()
                    .map(|e| {
                        e.conjugate_by(&r)
                            .mul(&QElement::central(1, *crate::algebra::Gf4::ALL.choose(&mut rng).unwrap()))
                    })
                    .collect()
            };
            let f = QMap::from_standard_images(imgs);
            let exhaustive = all.iter().all(|x| all.iter().all(|y| f.apply(&x.mul(y)) == f.apply(x).mul(&f.apply(y))));
            assert_eq!(f.check_homomorphism().is_ok(), exhaustive);
            passing += exhaustive as usize;
        }
        assert!(passing >= 1500);
    }

    #[test]
    fn identity_is_equivariant_only_between_equal_actions() {
        let (p, m) = (group(2, Sign::Plus), group(2, Sign::Minus));
        let id = QMap::identity(1);
        id.check_isomorphism(&p, &p).unwrap();
        assert!(matches!(id.check_equivariant(&p, &m), Err(MorphismError::NotEquivariant(_))));
        assert_eq!(id.check_on_pairs(&p, &p, None, 0), Ok(384 * 384));
    }

    #[test]
    fn serde_roundtrip() {
        let g = group(4, Sign::Plus);
        let r = QElement::from_codes(&[[1, 2, 0], [3, 0, 0]]);
        let gens = g.q_generators();
        let f =
            QMap::from_generator_images(&gens, &gens.iter().map(|x| x.conjugate_by(&r)).collect::<Vec<_>>()).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<QMap>(&json).unwrap(), f);
    }
}
