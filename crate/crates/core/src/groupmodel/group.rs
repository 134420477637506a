use std::fmt;

use super::descriptor::{Flavor, GroupDescriptor};
use super::element::{GroupElement, LElement, QElement, MAX_FACTORS};
use super::GroupError;
use crate::algebra::gf4::packed;
use crate::algebra::{Gf4, Sign};

/// A concrete group `Q:L` with one rank-2 factor per flavor.
///
/// `s` acts on every factor by `(a,b,c) ↦ (ηa, ηb, η²c)`. The involution
/// `τ` of `L` acts on plus factors by the Frobenius map
/// `(a,b,c) ↦ (a², b², c²)` and on minus factors by
/// `(a,b,c) ↦ (b², a², (ab+c)²)`, which is `t′` conjugated by `s⁻¹`
/// (see [`t_prime_rank2`]). Both involutions act on the shared centre as
/// `z ↦ z²`, so `τ` is well defined on the central product and fixes
/// `a = (0,0,1)`.
///
/// `L` acts on the right, `x^{l₁l₂} = (x^{l₁})^{l₂}`, and
/// `(q₁,l₁)(q₂,l₂) = (q₁·q₂^{l₁⁻¹}, l₁l₂)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Group {
    flavors: Vec<Flavor>,
    minus_mask: u32,
}

impl Group {
    pub fn construct(d: &GroupDescriptor) -> Group {
        Self::from_flavors(d.flavors()).expect("canonical descriptor is valid")
    }

    /// Any flavor list; minus factors are moved after plus factors.
    pub fn from_flavors(mut flavors: Vec<Flavor>) -> Result<Group, GroupError> {
        if flavors.is_empty() {
            return Err(GroupError::OddRank(0));
        }
        if flavors.len() > MAX_FACTORS {
            return Err(GroupError::TooLarge { rank: 2 * flavors.len(), limit: 2 * MAX_FACTORS });
        }
        flavors.sort();
        let minus_mask =
            flavors.iter().enumerate().filter(|(_, &f)| f == Flavor::Minus).fold(0u32, |m, (i, _)| m | (3 << (2 * i)));
        Ok(Group { flavors, minus_mask })
    }

    pub fn flavors(&self) -> &[Flavor] {
        &self.flavors
    }

    /// Number of rank-2 factors.
    pub fn k(&self) -> usize {
        self.flavors.len()
    }

    pub fn rank(&self) -> usize {
        2 * self.k()
    }

    /// Product of the factor types.
    pub fn flavor_sign(&self) -> Sign {
        self.flavors.iter().fold(Sign::Plus, |acc, f| acc * f.sign())
    }

    /// The canonical descriptor, when the layout has at most one minus
    /// factor.
    pub fn descriptor(&self) -> Option<GroupDescriptor> {
        GroupDescriptor::from_flavors(&self.flavors).ok()
    }

    pub fn q_order(&self) -> usize {
        QElement::order_of_q(self.k())
    }

    pub fn order(&self) -> usize {
        6 * self.q_order()
    }

    pub fn q_identity(&self) -> QElement {
        QElement::identity(self.k())
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::from_l(self.k(), LElement::E)
    }

    pub fn central(&self, z: Gf4) -> QElement {
        QElement::central(self.k(), z)
    }

    pub fn q_elements(&self) -> impl Iterator<Item = QElement> + '_ {
        let k = self.k();
        (0..self.q_order()).map(move |i| QElement::from_index(k, i))
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        LElement::ALL.into_iter().flat_map(move |l| self.q_elements().map(move |q| GroupElement::new(q, l)))
    }

    /// The standard generators of `Q` modulo `Z`: generator `j` lifts the
    /// unit vector `e_j` of `Q/Z`, that is `a = 1` or `a = η` in one factor
    /// for `j < 2k` and `b = 1` or `b = η` for `j ≥ 2k`.
    pub fn q_generators(&self) -> Vec<QElement> {
        standard_generators(self.k())
    }

    pub fn check_element(&self, x: &QElement) -> Result<(), GroupError> {
        if x.factor_count() != self.k() {
            return Err(GroupError::DescriptorMismatch { expected: self.k(), found: x.factor_count() });
        }
        Ok(())
    }

    pub fn q_mul(&self, x: &QElement, y: &QElement) -> Result<QElement, GroupError> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(x.mul(y))
    }

    pub fn q_inverse(&self, x: &QElement) -> QElement {
        x.inverse()
    }

    /// `x^s`.
    pub fn s_act(&self, x: &QElement) -> QElement {
        let k = self.k();
        QElement::from_parts(
            k,
            packed::scale(x.a_word(), k, Gf4::ETA),
            packed::scale(x.b_word(), k, Gf4::ETA),
            x.c() * Gf4::ETA2,
        )
    }

    /// `x^τ`.
    pub fn tau_act(&self, x: &QElement) -> QElement {
        let k = self.k();
        let m = self.minus_mask;
        let (a, b) = (x.a_word(), x.b_word());
        let a2 = (a & !m) | (b & m);
        let b2 = (b & !m) | (a & m);
        let c = x.c() + packed::dot(a & m, b & m, k);
        QElement::from_parts(k, packed::square(a2, k), packed::square(b2, k), c.square())
    }

    /// `x^l`.
    pub fn l_act(&self, l: &LElement, x: &QElement) -> QElement {
        let mut y = if l.flip() { self.tau_act(x) } else { *x };
        for _ in 0..l.rot() {
            y = self.s_act(&y);
        }
        y
    }

    pub fn g_mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let moved = self.l_act(&g.l.inverse(), &h.q);
        GroupElement::new(g.q.mul(&moved), g.l.mul(&h.l))
    }

    pub fn g_mul_checked(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_element(&g.q)?;
        self.check_element(&h.q)?;
        Ok(self.g_mul(g, h))
    }

    pub fn g_inverse(&self, g: &GroupElement) -> GroupElement {
        GroupElement::new(self.l_act(&g.l, &g.q.inverse()), g.l.inverse())
    }

    /// `h⁻¹ g h`.
    pub fn g_conjugate(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        self.g_mul(&self.g_mul(&self.g_inverse(h), g), h)
    }

    pub fn g_pow(&self, g: &GroupElement, n: u32) -> GroupElement {
        (0..n).fold(self.identity(), |acc, _| self.g_mul(&acc, g))
    }

    /// Least `n ≥ 1` with `gⁿ = 1`.
    pub fn element_order(&self, g: &GroupElement) -> u32 {
        let e = self.identity();
        let mut x = *g;
        let mut n = 1;
        while x != e {
            x = self.g_mul(&x, g);
            n += 1;
        }
        n
    }

    /// The canonical complement `{(1, l)}`.
    pub fn canonical_complement(&self) -> Vec<GroupElement> {
        LElement::ALL.iter().map(|&l| GroupElement::from_l(self.k(), l)).collect()
    }

    /// Index of a group element in `0..|G|`.
    pub fn g_index(&self, g: &GroupElement) -> usize {
        let li = LElement::ALL.iter().position(|l| *l == g.l).unwrap_or(0);
        li * self.q_order() + g.q.index()
    }

    pub fn g_from_index(&self, i: usize) -> GroupElement {
        let n = self.q_order();
        GroupElement::new(QElement::from_index(self.k(), i % n), LElement::ALL[i / n])
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(d) = self.descriptor() {
            return write!(f, "{d}");
        }
        let parts: Vec<String> = self.flavors.iter().map(|fl| format!("B{}(2)", fl.sign())).collect();
        f.write_str(&parts.join(" * "))
    }
}

pub fn standard_generators(k: usize) -> Vec<QElement> {
    (0..4 * k).map(|j| QElement::from_bar(k, 1 << j)).collect()
}

/// The involution `(a,b,c) ↦ (η²b², η²a², η(ab+c)²)` of a single factor,
/// which together with `s` generates the same subgroup of `Aut(Q)` as the
/// minus-factor `τ`. It acts on the centre as `z ↦ ηz²` and so fixes
/// `b` rather than `a`.
pub fn t_prime_rank2(x: &QElement) -> QElement {
    assert_eq!(x.factor_count(), 1, "defined on a single factor");
    let (a, b, c) = (x.a(0), x.b(0), x.c());
    QElement::from_triples(&[[Gf4::ETA2 * b.square(), Gf4::ETA2 * a.square(), Gf4::ETA * (a * b + c).square()]])
}
