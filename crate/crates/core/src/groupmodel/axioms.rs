use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::element::{GroupElement, LElement, QElement, ZLetter};
use super::group::Group;
use crate::algebra::gf2::rank;

/// Single-element checks run over all of `Q` up to this order.
const EXHAUSTIVE_ELEMENTS: usize = 1 << 18;
/// Pair checks run over all of `Q × Q` up to this many pairs.
const EXHAUSTIVE_PAIRS: usize = 1 << 20;
const DEFAULT_SAMPLES: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub group: String,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn check(name: &str, witness: Option<String>) -> AxiomCheck {
    AxiomCheck { name: name.to_string(), passed: witness.is_none(), witness }
}

/// Elements to test single-element properties on: all of `Q` when small,
/// otherwise generators plus a seeded sample.
fn test_elements(g: &Group, rng: &mut ChaCha8Rng, samples: usize) -> Vec<QElement> {
    if g.q_order() <= EXHAUSTIVE_ELEMENTS {
        return g.q_elements().collect();
    }
    let mut xs = g.q_generators();
    xs.extend((0..samples).map(|_| QElement::random(g.k(), rng)));
    xs
}

fn test_pairs(g: &Group, rng: &mut ChaCha8Rng, samples: usize) -> Vec<(QElement, QElement)> {
    if g.q_order() * g.q_order() <= EXHAUSTIVE_PAIRS {
        let all: Vec<_> = g.q_elements().collect();
        return all.iter().flat_map(|x| all.iter().map(move |y| (*x, *y))).collect();
    }
    let gens = g.q_generators();
    let mut pairs: Vec<_> = gens.iter().flat_map(|x| gens.iter().map(move |y| (*x, *y))).collect();
    pairs.extend((0..samples).map(|_| (QElement::random(g.k(), rng), QElement::random(g.k(), rng))));
    pairs
}

pub fn verify_axioms(g: &Group) -> AxiomReport {
    verify_axioms_with(g, 0, DEFAULT_SAMPLES)
}

/// Check the defining properties of a biextraspecial group on `g`.
///
/// Properties of single elements are checked exhaustively for
/// `|Q| ≤ 2^18`, properties of pairs for `|Q|² ≤ 2^20`; larger groups are
/// checked on generators plus `samples` seeded random elements or pairs.
pub fn verify_axioms_with(g: &Group, seed: u64, samples: usize) -> AxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = g.k();
    let dim = 4 * k;
    let gens = g.q_generators();
    let mut checks = Vec::new();

    // Z(Q) = Z: the GF(2) form given by bit 0 of the commutator has the
    // same radical as the GF(4)-valued commutator pairing.
    let rows: Vec<u64> = gens
        .iter()
        .map(|x| gens.iter().enumerate().fold(0u64, |acc, (j, y)| acc | (((x.commutator(y).code() & 1) as u64) << j)))
        .collect();
    checks.push(check(
        "centre has order 4",
        (rank(&rows) != dim).then(|| {
            let central = (1u64..1 << dim.min(20))
                .map(|bar| QElement::from_bar(k, bar))
                .find(|x| gens.iter().all(|y| x.commutator(y).is_zero()));
            match central {
                Some(x) => format!("{x} is central"),
                None => "commutator pairing is degenerate".to_string(),
            }
        }),
    ));

    let z = |l: ZLetter| g.central(l.value());
    let natural = [
        (g.s_act(&z(ZLetter::A)), z(ZLetter::B), "a^s"),
        (g.s_act(&z(ZLetter::B)), z(ZLetter::C), "b^s"),
        (g.s_act(&z(ZLetter::C)), z(ZLetter::A), "c^s"),
        (g.tau_act(&z(ZLetter::A)), z(ZLetter::A), "a^t"),
        (g.tau_act(&z(ZLetter::B)), z(ZLetter::C), "b^t"),
    ];
    checks.push(check(
        "centre is the natural module",
        natural
            .iter()
            .find(|(got, want, _)| got != want)
            .map(|(got, want, name)| format!("{name} = {got}, expected {want}")),
    ));

    let comm_span: BTreeSet<u64> =
        gens.iter().flat_map(|x| gens.iter().map(move |y| x.commutator(y).code() as u64)).collect();
    let square_span: BTreeSet<u64> =
        gens.iter().flat_map(|x| gens.iter().map(move |y| x.mul(y).square().c().code() as u64)).collect();
    let (comm_span, square_span): (Vec<u64>, Vec<u64>) =
        (comm_span.into_iter().collect(), square_span.into_iter().collect());
    checks.push(check(
        "commutators and squares generate the centre",
        if rank(&comm_span) != 2 {
            Some("commutator subgroup is smaller than Z".into())
        } else if rank(&square_span) != 2 {
            Some("squares generate less than Z".into())
        } else {
            None
        },
    ));

    let elements = test_elements(g, &mut rng, samples);
    checks.push(check(
        "quotient by the centre is elementary abelian",
        elements.iter().find(|x| !x.square().is_central()).map(|x| format!("{x} squares outside Z")),
    ));

    checks.push(check(
        "s acts fixed-point-freely",
        elements.iter().find(|x| !x.is_identity() && g.s_act(x) == **x).map(|x| format!("{x} is fixed by s")),
    ));

    // τ is linear on Q/Z; the fixed space must have dimension m.
    let tau_plus_one: Vec<u64> = (0..dim)
        .map(|i| {
            let e = QElement::from_bar(k, 1 << i);
            g.tau_act(&e).bar() ^ e.bar()
        })
        .collect();
    let fixed_dim = dim - rank(&tau_plus_one);
    checks.push(check(
        "involution centralises a subspace of dimension m",
        (fixed_dim != g.rank()).then(|| format!("fixed space has dimension {fixed_dim}")),
    ));

    let relation = |x: &QElement| -> Option<&'static str> {
        let s3 = g.s_act(&g.s_act(&g.s_act(x)));
        let t2 = g.tau_act(&g.tau_act(x));
        let st = g.tau_act(&g.s_act(x));
        let st2 = g.tau_act(&g.s_act(&st));
        if s3 != *x {
            Some("s^3")
        } else if t2 != *x {
            Some("t^2")
        } else if st2 != *x {
            Some("(st)^2")
        } else {
            None
        }
    };
    checks.push(check(
        "L relations hold on Q",
        elements.iter().find_map(|x| relation(x).map(|r| format!("{r} moves {x}"))),
    ));

    let pairs = test_pairs(g, &mut rng, samples);
    let broken = pairs.iter().find_map(|(x, y)| {
        [LElement::S, LElement::T].into_iter().find_map(|l| {
            (g.l_act(&l, &x.mul(y)) != g.l_act(&l, x).mul(&g.l_act(&l, y))).then(|| format!("{l} on {x} * {y}"))
        })
    });
    checks.push(check("L acts by automorphisms", broken));

    let complement = find_complement(g, None);
    checks.push(check(
        "complement to Q",
        match &complement {
            Some(c) if c.len() == 6 && c.iter().filter(|h| h.l.is_identity()).count() == 1 => None,
            Some(c) => Some(format!("normaliser has order {}", c.len())),
            None => Some("no complement found".into()),
        },
    ));

    AxiomReport { group: g.to_string(), checks }
}

/// `N_G(S)` for the Sylow 3-subgroup `S = ⟨sylow⟩`, by default `⟨(1, s)⟩`.
///
/// `N_G(S) ∩ Q = C_Q(S)` is trivial because `s` acts fixed-point-freely, so
/// the normaliser is a complement to `Q`; it is found by searching the
/// cosets `Q·l` with `l` an involution. Returns `None` if `sylow` does not
/// have order 3 or no normalising involution exists.
pub fn find_complement(g: &Group, sylow: Option<GroupElement>) -> Option<Vec<GroupElement>> {
    let x = sylow.unwrap_or_else(|| GroupElement::from_l(g.k(), LElement::S));
    if g.element_order(&x) != 3 {
        return None;
    }
    let x2 = g.g_mul(&x, &x);
    let h = [LElement::T, LElement::TS, LElement::TS2]
        .into_iter()
        .find_map(|l| g.q_elements().map(|q| GroupElement::new(q, l)).find(|h| g.g_conjugate(&x, h) == x2))?;
    let e = g.identity();
    let mut out = vec![e, x, x2, h, g.g_mul(&x, &h), g.g_mul(&x2, &h)];
    out.sort();
    Some(out)
}

/// Is `set` closed under multiplication?
pub fn is_closed(g: &Group, set: &[GroupElement]) -> bool {
    set.iter().all(|a| set.iter().all(|b| set.contains(&g.g_mul(a, b))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Sign;
    use crate::groupmodel::{Flavor, GroupDescriptor};

    fn canonical(rank: usize, sign: Sign) -> Group {
        Group::construct(&GroupDescriptor::new(rank, sign).unwrap())
    }

    #[test]
    fn canonical_groups_pass() {
        for rank in [2, 4, 6] {
            for sign in [Sign::Plus, Sign::Minus] {
                let g = canonical(rank, sign);
                let r = verify_axioms(&g);
                assert!(r.passed(), "{g}: {:?}", r.failures().collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn mixed_layouts_pass() {
        use Flavor::*;
        for f in [vec![Minus, Minus], vec![Minus, Minus, Minus], vec![Plus, Minus, Minus]] {
            let g = Group::from_flavors(f).unwrap();
            assert!(verify_axioms(&g).passed(), "{g}");
        }
    }

    #[test]
    fn canonical_complement_is_found() {
        let g = canonical(2, Sign::Plus);
        let mut want = g.canonical_complement();
        want.sort();
        assert_eq!(find_complement(&g, None).unwrap(), want);
        assert!(is_closed(&g, &want));
    }

    #[test]
    fn conjugated_complement() {
        let g = canonical(2, Sign::Minus);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let q = GroupElement::from_q(QElement::random(1, &mut rng));
            let x = g.g_conjugate(&GroupElement::from_l(1, LElement::S), &q);
            let c = find_complement(&g, Some(x)).unwrap();
            let mut want: Vec<_> = g.canonical_complement().iter().map(|l| g.g_conjugate(l, &q)).collect();
            want.sort();
            assert_eq!(c, want);
            assert!(is_closed(&g, &c));
            assert_eq!(c.iter().filter(|h| h.l.is_identity()).count(), 1);
        }
    }

    #[test]
    fn canonical_complement_is_s3_at_every_rank() {
        for rank in [2, 4, 6, 8] {
            let g = canonical(rank, Sign::Minus);
            let c = g.canonical_complement();
            assert!(is_closed(&g, &c));
            let orders: Vec<u32> = c.iter().map(|h| g.element_order(h)).collect();
            assert_eq!(orders, vec![1, 3, 3, 2, 2, 2]);
        }
    }

    #[test]
    fn sylow_must_have_order_three() {
        let g = canonical(2, Sign::Plus);
        assert!(find_complement(&g, Some(g.identity())).is_none());
    }
}
