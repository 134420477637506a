//! Dents: the `L`-invariant subgroups `Z < D < Q` with `D/Z` a natural
//! module, and the orthogonal space they form.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Gf2Solver, Gf4, QuadraticSpace, Sign};
use crate::groupmodel::{Group, QElement, ZLetter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DentError {
    #[error("found {found} dents, expected {expected}")]
    Count { expected: usize, found: usize },
    #[error("coset of {0} does not contain exactly two involution-fixed elements")]
    Representative(String),
    #[error("dents {0} and {1} commute, commutator table is undefined")]
    Commuting(usize, usize),
    #[error("commutator table of dents {0} and {1} is {2}")]
    Table(usize, usize, String),
    #[error("element is not a dent representative")]
    NotADent,
    #[error("rank {0} is too large to enumerate dents")]
    TooLarge(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DentKind {
    /// `D ≅ 2⁴`.
    Singular,
    /// `D ≅ 4²`.
    Nonsingular,
}

impl DentKind {
    pub fn q(self) -> bool {
        self == DentKind::Nonsingular
    }
}

impl fmt::Display for DentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DentKind::Singular => "singular",
            DentKind::Nonsingular => "nonsingular",
        })
    }
}

/// A dent `D = ⟨x, y, Z⟩` with standard basis `x = x^τ`, `y = x^s`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Dent {
    /// Coordinates in the dent basis, as a bit mask; never zero.
    pub coords: u64,
    pub x: QElement,
    pub y: QElement,
    pub kind: DentKind,
}

impl Dent {
    /// Position in [`DentSpace::dents`].
    pub fn index(&self) -> usize {
        self.coords as usize - 1
    }

    pub fn is_singular(&self) -> bool {
        self.kind == DentKind::Singular
    }

    /// All 16 elements, sorted.
    pub fn elements(&self) -> Vec<QElement> {
        let k = self.x.factor_count();
        let mut out = Vec::with_capacity(16);
        for (i, j) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let base = self.x.pow(i).mul(&self.y.pow(j));
            out.extend(Gf4::ALL.iter().map(|&z| base.mul(&QElement::central(k, z))));
        }
        out.sort();
        out
    }

    /// `q ∈ D`.
    pub fn contains(&self, q: &QElement) -> bool {
        let b = q.bar();
        b == 0 || b == self.x.bar() || b == self.y.bar() || b == self.x.bar() ^ self.y.bar()
    }

    /// The unique nontrivial automorphism of `D` commuting with `L` and
    /// fixing `Z`: `x ↦ ax`, `y ↦ by`. For a nonsingular dent `x² = a`, so
    /// this is `x ↦ x⁻¹`, `y ↦ y⁻¹`.
    pub fn unique_auto(&self, q: &QElement) -> Option<QElement> {
        let k = self.x.factor_count();
        let b = q.bar();
        let (i, j) = if b == 0 {
            (false, false)
        } else if b == self.x.bar() {
            (true, false)
        } else if b == self.y.bar() {
            (false, true)
        } else if b == self.x.bar() ^ self.y.bar() {
            (true, true)
        } else {
            return None;
        };
        let mut z = Gf4::ZERO;
        if i {
            z += ZLetter::A.value();
        }
        if j {
            z += ZLetter::B.value();
        }
        Some(q.mul(&QElement::central(k, z)))
    }
}

/// One line of the dent table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DentRecord {
    pub index: usize,
    pub representative: Vec<[u8; 3]>,
    pub kind: DentKind,
    pub q: u8,
    pub coordinates: Vec<u8>,
}

/// Largest rank for which all `2^m − 1` dents are materialised.
pub const MAX_DENT_RANK: usize = 20;

/// All dents of a group with the basis, forms and type of the dent space.
///
/// The basis has two dents per rank-2 factor. On a plus factor they are
/// `⟨(1,0,·)⟩` and `⟨(0,1,·)⟩`; on a minus factor `⟨(η²,η,·)⟩` and
/// `⟨(η,η²,·)⟩`. The dent with coordinate mask `c` is `dents[c - 1]`.
#[derive(Clone, Debug)]
pub struct DentSpace {
    group: Group,
    basis: Vec<u64>,
    solver: Gf2Solver,
    dents: Vec<Dent>,
    space: QuadraticSpace,
}

impl DentSpace {
    pub fn new(group: &Group) -> Result<DentSpace, DentError> {
        let k = group.k();
        let m = group.rank();
        if m > MAX_DENT_RANK {
            return Err(DentError::TooLarge(m));
        }

        // dimension of the involution-fixed subspace of Q/Z
        let dim = 4 * k;
        let tau_plus_one: Vec<u64> = (0..dim)
            .map(|i| {
                let e = QElement::from_bar(k, 1 << i);
                group.tau_act(&e).bar() ^ e.bar()
            })
            .collect();
        let fixed = dim - crate::algebra::gf2::rank(&tau_plus_one);
        if fixed != m {
            return Err(DentError::Count { expected: (1 << m) - 1, found: (1usize << fixed) - 1 });
        }

        let mut basis = Vec::with_capacity(m);
        for i in 0..k {
            let mut cands: Vec<(Gf4, Gf4)> = Vec::new();
            for a in Gf4::ALL {
                for b in Gf4::ALL {
                    if (a, b) == (Gf4::ZERO, Gf4::ZERO) || (a, b) == (Gf4::ONE, Gf4::ONE) {
                        continue;
                    }
                    let mut t = vec![[Gf4::ZERO; 3]; k];
                    t[i] = [a, b, Gf4::ZERO];
                    let x = QElement::from_triples(&t);
                    if group.tau_act(&x).bar() == x.bar() {
                        cands.push((a, b));
                    }
                }
            }
            if cands.len() != 2 {
                return Err(DentError::Count { expected: 3, found: cands.len() + 1 });
            }
            cands.sort_by_key(|&(a, b)| (b, a));
            for (a, b) in cands {
                let mut t = vec![[Gf4::ZERO; 3]; k];
                t[i] = [a, b, Gf4::ZERO];
                basis.push(QElement::from_triples(&t).bar());
            }
        }
        let solver = Gf2Solver::new(&basis);

        let mut dents = Vec::with_capacity((1 << m) - 1);
        for coords in 1u64..1 << m {
            let bar = (0..m).filter(|i| coords >> i & 1 == 1).fold(0, |acc, i| acc ^ basis[i]);
            dents.push(Self::dent_from_bar(group, bar, coords)?);
        }

        let gram: Vec<u64> = (0..m)
            .map(|i| {
                (0..m).fold(0u64, |acc, j| {
                    acc | ((Self::commute_bit(&dents[(1 << i) - 1], &dents[(1 << j) - 1]) as u64) << j)
                })
            })
            .collect();
        let qvals = (0..m).fold(0u64, |acc, i| acc | ((dents[(1 << i) - 1].kind.q() as u64) << i));
        let space = QuadraticSpace::new(gram, qvals)?;
        Ok(DentSpace { group: group.clone(), basis, solver, dents, space })
    }

    fn dent_from_bar(group: &Group, bar: u64, coords: u64) -> Result<Dent, DentError> {
        let k = group.k();
        let lift = QElement::from_bar(k, bar);
        let mut fixed: Vec<QElement> =
            Gf4::ALL.iter().map(|&z| lift.mul(&QElement::central(k, z))).filter(|x| group.tau_act(x) == *x).collect();
        if fixed.len() != 2 {
            return Err(DentError::Representative(lift.to_string()));
        }
        fixed.sort();
        let x = fixed[0];
        let kind = if x.square().is_identity() { DentKind::Singular } else { DentKind::Nonsingular };
        Ok(Dent { coords, x, y: group.s_act(&x), kind })
    }

    fn commute_bit(d: &Dent, e: &Dent) -> bool {
        [(d.x, e.x), (d.x, e.y), (d.y, e.x), (d.y, e.y)].iter().any(|(u, v)| !u.commutator(v).is_zero())
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dents(&self) -> &[Dent] {
        &self.dents
    }

    /// The basis dents, in coordinate order.
    pub fn basis(&self) -> Vec<Dent> {
        (0..self.rank()).map(|i| self.dents[(1 << i) - 1]).collect()
    }

    pub fn dent(&self, coords: u64) -> Option<&Dent> {
        coords.checked_sub(1).and_then(|i| self.dents.get(i as usize))
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    /// Coordinates of the dent containing `q`, if `q` lies in a dent: its
    /// image in `Q/Z` must be a sum of basis dent vectors and their
    /// `s`-images. Returns 0 for central `q`.
    pub fn coords_of(&self, q: &QElement) -> Option<u64> {
        let bar = q.bar();
        if bar == 0 {
            return Some(0);
        }
        let s = |b: u64| self.group.s_act(&QElement::from_bar(self.group.k(), b)).bar();
        // bar is v, v^s or v + v^s for the fixed vector v of its dent
        let v = if self.group.tau_act(q).bar() == bar {
            bar
        } else {
            let (b1, b2) = (s(bar), s(s(bar)));
            [b1, b2].into_iter().find(|&b| self.group.tau_act(&QElement::from_bar(self.group.k(), b)).bar() == b)?
        };
        let c = self.solver.coords(v)?;
        self.dent(c).filter(|d| d.contains(q)).map(|d| d.coords)
    }

    /// The dent containing `q ∉ Z`.
    pub fn dent_of(&self, q: &QElement) -> Option<&Dent> {
        self.coords_of(q).and_then(|c| self.dent(c))
    }

    /// `D₁ + D₂`, computed from the product of the involution-fixed
    /// representatives; `None` is the formal zero.
    pub fn add(&self, d1: &Dent, d2: &Dent) -> Option<&Dent> {
        let c = self.solver.coords(d1.x.mul(&d2.x).bar()).expect("fixed vectors lie in the span");
        self.dent(c)
    }

    pub fn beta(&self, d1: &Dent, d2: &Dent) -> bool {
        Self::commute_bit(d1, d2)
    }

    pub fn qform(&self, d: Option<&Dent>) -> bool {
        d.is_some_and(|d| d.kind.q())
    }

    /// `([x₁,x₂], [x₁,y₂], [y₁,x₂], [y₁,y₂])` as letters of `Z`, which must
    /// be `(a, c, c, b)` for non-commuting dents.
    pub fn commutator_table(&self, d1: &Dent, d2: &Dent) -> Result<[ZLetter; 4], DentError> {
        if !self.beta(d1, d2) {
            return Err(DentError::Commuting(d1.index(), d2.index()));
        }
        let t = [
            ZLetter::of(d1.x.commutator(&d2.x)),
            ZLetter::of(d1.x.commutator(&d2.y)),
            ZLetter::of(d1.y.commutator(&d2.x)),
            ZLetter::of(d1.y.commutator(&d2.y)),
        ];
        if t != [ZLetter::A, ZLetter::C, ZLetter::C, ZLetter::B] {
            let s: Vec<String> = t.iter().map(ToString::to_string).collect();
            return Err(DentError::Table(d1.index(), d2.index(), s.join(",")));
        }
        Ok(t)
    }

    pub fn singular_count(&self) -> usize {
        self.dents.iter().filter(|d| d.is_singular()).count()
    }

    /// `(m, ε)`.
    pub fn group_type(&self) -> Result<(usize, Sign), DentError> {
        Ok((self.rank(), self.space.form_type()?))
    }

    pub fn records(&self) -> Vec<DentRecord> {
        let m = self.rank();
        self.dents
            .iter()
            .map(|d| DentRecord {
                index: d.index(),
                representative: d.x.codes(),
                kind: d.kind,
                q: d.kind.q() as u8,
                coordinates: (0..m).map(|i| (d.coords >> i & 1) as u8).collect(),
            })
            .collect()
    }
}

pub fn enumerate_dents(group: &Group) -> Result<DentSpace, DentError> {
    DentSpace::new(group)
}

pub fn group_type(group: &Group) -> Result<(usize, Sign), DentError> {
    DentSpace::new(group)?.group_type()
}
