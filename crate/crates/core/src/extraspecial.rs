//! The centraliser `R_t = C_Q(τ)`, an extraspecial group of order
//! `2^{m+1}`, and the isometry `Ψ` from the dent space onto `R_t/⟨a⟩`.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::algebra::{AlgebraError, Gf2Solver, Gf4, Plane, QuadraticSpace, Sign};
use crate::dentspace::{Dent, DentSpace};
use crate::groupmodel::{Group, QElement, ZLetter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtraspecialError {
    #[error("R_t has order {found}, expected {expected}")]
    Order { expected: usize, found: usize },
    #[error("extraspecial axiom fails: {0}")]
    Axiom(String),
    #[error("Psi is not an isometry: {0}")]
    Isometry(String),
    #[error("rank {0} is too large to list R_t")]
    TooLarge(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Largest rank for which `R_t` is listed element by element.
pub const MAX_RT_RANK: usize = 20;

#[derive(Clone, Debug)]
pub struct ExtraspecialSubgroup {
    group: Group,
    elements: Vec<QElement>,
    /// Lifts of a basis of `R̄ = R_t/⟨a⟩`.
    basis: Vec<QElement>,
    solver: Gf2Solver,
    space: QuadraticSpace,
}

impl ExtraspecialSubgroup {
    /// The involution-fixed elements of `Q`. Each fixed vector of `Q/Z` has
    /// exactly two fixed lifts, so `R_t` is built as products of fixed lifts
    /// of a basis of `C_{Q/Z}(τ)` times `⟨a⟩`.
    pub fn new(group: &Group) -> Result<ExtraspecialSubgroup, ExtraspecialError> {
        let k = group.k();
        let m = group.rank();
        if m > MAX_RT_RANK {
            return Err(ExtraspecialError::TooLarge(m));
        }
        let a = group.central(ZLetter::A.value());

        // fixed vectors of τ on Q/Z, one fixed lift each
        let dim = 4 * k;
        let mut basis: Vec<QElement> = Vec::new();
        let mut bars: Vec<u64> = Vec::new();
        for v in fixed_space_basis(group, dim) {
            let lift = QElement::from_bar(k, v);
            let mut lifts: Vec<QElement> = Gf4::ALL
                .iter()
                .map(|&z| lift.mul(&QElement::central(k, z)))
                .filter(|x| group.tau_act(x) == *x)
                .collect();
            if lifts.len() != 2 {
                return Err(ExtraspecialError::Axiom(format!("coset of {lift} has {} fixed elements", lifts.len())));
            }
            lifts.sort();
            basis.push(lifts[0]);
            bars.push(v);
        }
        if basis.len() != m {
            return Err(ExtraspecialError::Order { expected: 1 << (m + 1), found: 1 << (basis.len() + 1) });
        }
        let solver = Gf2Solver::new(&bars);

        let mut elements = Vec::with_capacity(1 << (m + 1));
        for mask in 0u64..1 << m {
            let x = ordered_product(&basis, mask, k);
            elements.push(x);
            elements.push(x.mul(&a));
        }
        elements.sort();

        let gram: Vec<u64> = basis
            .iter()
            .map(|x| {
                basis.iter().enumerate().fold(0u64, |acc, (j, y)| acc | ((!x.commutator(y).is_zero() as u64) << j))
            })
            .collect();
        let qvals = basis.iter().enumerate().fold(0u64, |acc, (i, x)| acc | ((!x.square().is_identity() as u64) << i));
        let space = QuadraticSpace::new(gram, qvals)?;
        Ok(ExtraspecialSubgroup { group: group.clone(), elements, basis, solver, space })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Sorted.
    pub fn elements(&self) -> &[QElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &QElement) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// Lifts of the basis of `R̄`; these generate `R_t`.
    pub fn generators(&self) -> &[QElement] {
        &self.basis
    }

    /// `(R̄, q_t)` with `q_t(x̄) = x²` and `β_t(x̄, ȳ) = [x, y]`.
    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// `Z(R_t)`, computed as the elements commuting with every generator.
    pub fn center(&self) -> Vec<QElement> {
        self.elements.iter().filter(|x| self.basis.iter().all(|y| x.commutator(y).is_zero())).copied().collect()
    }

    /// Coordinates of `x̄` in `R̄`.
    pub fn quotient_coords(&self, x: &QElement) -> Option<u64> {
        if !self.contains(x) {
            return None;
        }
        self.solver.coords(x.bar())
    }

    /// The element `∏ basis[i]` over the set bits of `coords`.
    pub fn lift(&self, coords: u64) -> QElement {
        ordered_product(&self.basis, coords, self.group.k())
    }

    pub fn order_histogram(&self) -> BTreeMap<u32, usize> {
        let mut h = BTreeMap::new();
        for x in &self.elements {
            let order = if x.is_identity() {
                1
            } else if x.square().is_identity() {
                2
            } else {
                4
            };
            *h.entry(order).or_insert(0) += 1;
        }
        h
    }

    pub fn form_type(&self) -> Result<Sign, ExtraspecialError> {
        Ok(self.space.form_type()?)
    }

    /// `|Z(R_t)| = 2`, `R_t/Z(R_t)` elementary abelian and
    /// `[R_t, R_t] = Z(R_t) = ⟨a⟩`.
    pub fn verify(&self) -> Result<(), ExtraspecialError> {
        let m = self.rank();
        if self.order() != 1 << (m + 1) {
            return Err(ExtraspecialError::Order { expected: 1 << (m + 1), found: self.order() });
        }
        let k = self.group.k();
        let a = self.group.central(ZLetter::A.value());
        let center = self.center();
        if center != vec![QElement::identity(k), a] {
            return Err(ExtraspecialError::Axiom(format!("centre has order {}", center.len())));
        }
        if let Some(x) = self.elements.iter().find(|x| !center.contains(&x.square())) {
            return Err(ExtraspecialError::Axiom(format!("{x} squares outside the centre")));
        }
        let has_a =
            self.basis.iter().any(|x| self.basis.iter().any(|y| x.mul(y).mul(&x.inverse()).mul(&y.inverse()) == a));
        if !has_a {
            return Err(ExtraspecialError::Axiom("R_t is abelian".into()));
        }
        if let Some(x) = self.elements.iter().find(|x| self.group.tau_act(x) != **x) {
            return Err(ExtraspecialError::Axiom(format!("{x} is not fixed")));
        }
        if !self.space.is_nondegenerate() {
            return Err(ExtraspecialError::Axiom("commutator form is degenerate".into()));
        }
        Ok(())
    }

    /// `D ∩ R_t = {1, a, x, ax}`.
    pub fn dent_intersection(&self, d: &Dent) -> Vec<QElement> {
        let mut out: Vec<QElement> = d.elements().into_iter().filter(|x| self.contains(x)).collect();
        out.sort();
        out
    }

    /// `Ψ(D) = Z_t x` as coordinates in `R̄`; `Ψ(0) = 0`.
    pub fn psi(&self, d: Option<&Dent>) -> u64 {
        d.map_or(0, |d| self.quotient_coords(&d.x).expect("dent representatives are fixed"))
    }

    /// Ψ is bijective, additive and carries `q` to `q_t`.
    pub fn verify_psi(&self, dents: &DentSpace) -> Result<(), ExtraspecialError> {
        let err = |s: String| Err(ExtraspecialError::Isometry(s));
        let mut seen = HashSet::new();
        for d in dents.dents() {
            let v = self.psi(Some(d));
            if v == 0 || !seen.insert(v) {
                return err(format!("dent {} maps to a repeated or zero vector", d.index()));
            }
            if self.space.q_bits(v) != d.kind.q() {
                return err(format!("q_t differs from q on dent {}", d.index()));
            }
            for e in dents.dents() {
                let sum = self.psi(dents.add(d, e));
                if sum != v ^ self.psi(Some(e)) {
                    return err(format!("not additive on dents {}, {}", d.index(), e.index()));
                }
                if self.space.beta_bits(v, self.psi(Some(e))) != dents.beta(d, e) {
                    return err(format!("beta differs on dents {}, {}", d.index(), e.index()));
                }
            }
        }
        if seen.len() + 1 != 1 << self.rank() {
            return err("not surjective".into());
        }
        Ok(())
    }

    /// The subgroups `⟨a, Ψ(D)⟩` for the dents `D` of each plane.
    pub fn central_factors(&self, dents: &DentSpace, planes: &[Plane]) -> Vec<Vec<QElement>> {
        let k = self.group.k();
        let a = self.group.central(ZLetter::A.value());
        planes
            .iter()
            .map(|p| {
                let mut f = vec![QElement::identity(k), a];
                for c in p.vectors() {
                    let x = dents.dent(c).expect("plane vectors are dents").x;
                    f.push(x);
                    f.push(x.mul(&a));
                }
                f.sort();
                f
            })
            .collect()
    }
}

/// `R_t ∩ R_t^s = 1` and every element of `Q` is uniquely `r·u^s` with
/// `r, u ∈ R_t`. The two factors do not commute.
pub fn direct_factorization_check(r: &ExtraspecialSubgroup) -> bool {
    let g = r.group();
    let rs: Vec<QElement> = r.elements().iter().map(|x| g.s_act(x)).collect();
    let meet = rs.iter().filter(|x| r.contains(x)).count();
    if meet != 1 || r.order() * rs.len() != g.q_order() {
        return false;
    }
    let mut products = HashSet::with_capacity(g.q_order());
    for x in r.elements() {
        for y in &rs {
            if !products.insert(x.mul(y)) {
                return false;
            }
        }
    }
    products.len() == g.q_order()
}

pub fn centralizer_rt(group: &Group) -> Result<ExtraspecialSubgroup, ExtraspecialError> {
    let r = ExtraspecialSubgroup::new(group)?;
    r.verify()?;
    Ok(r)
}

fn ordered_product(basis: &[QElement], mask: u64, k: usize) -> QElement {
    basis.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(QElement::identity(k), |acc, (_, x)| acc.mul(x))
}

/// Echelon basis of the fixed space of `τ` on `Q/Z`, smallest vectors
/// first.
fn fixed_space_basis(group: &Group, dim: usize) -> Vec<u64> {
    let k = group.k();
    let rows: Vec<u64> = (0..dim)
        .map(|i| {
            let e = QElement::from_bar(k, 1 << i);
            group.tau_act(&e).bar() ^ e.bar()
        })
        .collect();
    // kernel of v ↦ Σ v_i rows[i]
    let mut cols: Vec<(u64, u64)> = rows.iter().enumerate().map(|(i, &r)| (r, 1u64 << i)).collect();
    let mut kernel = Vec::new();
    let mut pivots: Vec<(u64, u64)> = Vec::new();
    for (mut r, mut c) in cols.drain(..) {
        for &(pr, pc) in &pivots {
            let p = 63 - pr.leading_zeros();
            if r >> p & 1 == 1 {
                r ^= pr;
                c ^= pc;
            }
        }
        if r == 0 {
            kernel.push(c);
        } else {
            pivots.push((r, c));
        }
    }
    // reduce the kernel vectors against each other, lowest bits leading
    let mut basis: Vec<u64> = Vec::new();
    for mut v in kernel {
        for &b in &basis {
            if v >> b.trailing_zeros() & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            for b in basis.iter_mut() {
                if *b >> v.trailing_zeros() & 1 == 1 {
                    *b ^= v;
                }
            }
            basis.push(v);
        }
    }
    basis.sort();
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupmodel::GroupDescriptor;

    fn group(rank: usize, sign: Sign) -> Group {
        Group::construct(&GroupDescriptor::new(rank, sign).unwrap())
    }

    #[test]
    fn matches_brute_force_fixed_points() {
        for rank in [2, 4] {
            for sign in [Sign::Plus, Sign::Minus] {
                let g = group(rank, sign);
                let r = centralizer_rt(&g).unwrap();
                let mut brute: Vec<QElement> = g.q_elements().filter(|x| g.tau_act(x) == *x).collect();
                brute.sort();
                assert_eq!(r.elements(), &brute[..]);
                assert_eq!(r.order(), 1 << (rank + 1));
            }
        }
    }

    #[test]
    fn rank_two_histograms() {
        let h = |sign| centralizer_rt(&group(2, sign)).unwrap().order_histogram();
        assert_eq!(h(Sign::Plus), BTreeMap::from([(1, 1), (2, 5), (4, 2)]));
        assert_eq!(h(Sign::Minus), BTreeMap::from([(1, 1), (2, 1), (4, 6)]));
    }

    #[test]
    fn factorization() {
        for (rank, sign) in [(2, Sign::Plus), (2, Sign::Minus), (4, Sign::Minus)] {
            assert!(direct_factorization_check(&centralizer_rt(&group(rank, sign)).unwrap()));
        }
    }

    #[test]
    fn dent_intersections() {
        let g = group(2, Sign::Plus);
        let r = centralizer_rt(&g).unwrap();
        let dents = DentSpace::new(&g).unwrap();
        for d in dents.dents() {
            let meet = r.dent_intersection(d);
            assert_eq!(meet.len(), 4);
            let cyclic = meet.iter().any(|x| !x.square().is_identity());
            assert_eq!(cyclic, !d.is_singular());
        }
    }

    #[test]
    fn psi_is_an_isometry() {
        for rank in [2, 4, 6] {
            for sign in [Sign::Plus, Sign::Minus] {
                let g = group(rank, sign);
                let r = centralizer_rt(&g).unwrap();
                let dents = DentSpace::new(&g).unwrap();
                r.verify_psi(&dents).unwrap();
                assert_eq!(r.psi(None), 0);
                assert_eq!(r.form_type().unwrap(), sign);
            }
        }
    }

    #[test]
    fn central_factors_from_a_decomposition() {
        let g = group(4, Sign::Minus);
        let r = centralizer_rt(&g).unwrap();
        let dents = DentSpace::new(&g).unwrap();
        let planes = dents.space().orthogonal_decompose().unwrap();
        let f = r.central_factors(&dents, &planes);
        let a = g.central(ZLetter::A.value());
        for x in &f[0] {
            for y in &f[1] {
                assert_eq!(x.mul(y), y.mul(x));
            }
        }
        let meet: Vec<_> = f[0].iter().filter(|x| f[1].contains(x)).collect();
        assert_eq!(meet, vec![&QElement::identity(2), &a]);
        let mut generated: Vec<QElement> = f[0].iter().flat_map(|x| f[1].iter().map(move |y| x.mul(y))).collect();
        generated.sort();
        generated.dedup();
        assert_eq!(generated, r.elements());
    }
}
