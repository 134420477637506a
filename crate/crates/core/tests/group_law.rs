//! Group law of `Q` and `G = Q:L`: exhaustive at rank 2, sampled above.

use biextra_core::algebra::Sign;
use biextra_core::groupmodel::{Flavor, Group, GroupDescriptor, GroupElement, LElement, QElement};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn group(rank: usize, sign: Sign) -> Group {
    Group::construct(&GroupDescriptor::new(rank, sign).unwrap())
}

fn random_g(k: usize, rng: &mut ChaCha8Rng) -> GroupElement {
    GroupElement::new(QElement::random(k, rng), LElement::ALL[rng.gen_range(0..6)])
}

#[test]
fn q_associative_exhaustive_rank_two() {
    let g = group(2, Sign::Plus);
    let all: Vec<QElement> = g.q_elements().collect();
    for x in &all {
        for y in &all {
            let xy = x.mul(y);
            for z in &all {
                assert_eq!(xy.mul(z), x.mul(&y.mul(z)));
            }
        }
    }
}

#[test]
fn g_associative_exhaustive_rank_two() {
    for sign in [Sign::Plus, Sign::Minus] {
        let g = group(2, sign);
        let all: Vec<GroupElement> = g.elements().collect();
        assert_eq!(all.len(), 384);
        for x in &all {
            for y in &all {
                let xy = g.g_mul(x, y);
                for z in &all {
                    assert_eq!(g.g_mul(&xy, z), g.g_mul(x, &g.g_mul(y, z)), "{g}");
                }
            }
        }
    }
}

#[test]
fn associativity_sampled_ranks_four_and_six() {
    for rank in [4, 6] {
        for sign in [Sign::Plus, Sign::Minus] {
            let g = group(rank, sign);
            let mut rng = ChaCha8Rng::seed_from_u64(rank as u64);
            for _ in 0..100_000 {
                let (x, y, z) = (random_g(g.k(), &mut rng), random_g(g.k(), &mut rng), random_g(g.k(), &mut rng));
                assert_eq!(g.g_mul(&g.g_mul(&x, &y), &z), g.g_mul(&x, &g.g_mul(&y, &z)), "{g}");
            }
        }
    }
}

#[test]
fn q_identical_across_types() {
    for rank in [2, 4, 6] {
        let (p, m) = (group(rank, Sign::Plus), group(rank, Sign::Minus));
        assert!(p.q_elements().eq(m.q_elements()));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100_000 {
            let (x, y) = (QElement::random(p.k(), &mut rng), QElement::random(p.k(), &mut rng));
            assert_eq!(p.q_mul(&x, &y).unwrap(), m.q_mul(&x, &y).unwrap());
        }
    }
}

#[test]
fn conjugation_matches_the_action() {
    // (1, l)^-1 (q, 1) (1, l) = (q^l, 1)
    for g in [group(4, Sign::Plus), group(4, Sign::Minus)] {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let q = QElement::random(g.k(), &mut rng);
            for l in LElement::ALL {
                let h = GroupElement::from_l(g.k(), l);
                assert_eq!(g.g_conjugate(&GroupElement::from_q(q), &h), GroupElement::from_q(g.l_act(&l, &q)));
            }
        }
    }
}

fn flavors() -> impl Strategy<Value = Vec<Flavor>> {
    prop::collection::vec(prop_oneof![Just(Flavor::Plus), Just(Flavor::Minus)], 1..=4)
}

fn q_element(k: usize) -> impl Strategy<Value = QElement> {
    any::<u64>().prop_map(move |seed| QElement::random(k, &mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #[test]
    fn l_acts_by_automorphisms(fl in flavors(), seeds in any::<(u64, u64)>(), li in 0usize..6) {
        let g = Group::from_flavors(fl).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seeds.0 ^ seeds.1);
        let (x, y) = (QElement::random(g.k(), &mut rng), QElement::random(g.k(), &mut rng));
        let l = LElement::ALL[li];
        prop_assert_eq!(g.l_act(&l, &x.mul(&y)), g.l_act(&l, &x).mul(&g.l_act(&l, &y)));
    }

    #[test]
    fn l_action_is_a_right_action(fl in flavors(), seed in any::<u64>(), i in 0usize..6, j in 0usize..6) {
        let g = Group::from_flavors(fl).unwrap();
        let x = QElement::random(g.k(), &mut ChaCha8Rng::seed_from_u64(seed));
        let (l1, l2) = (LElement::ALL[i], LElement::ALL[j]);
        prop_assert_eq!(g.l_act(&l2, &g.l_act(&l1, &x)), g.l_act(&l1.mul(&l2), &x));
    }

    #[test]
    fn squares_and_commutators_are_central(x in q_element(3), y in q_element(3)) {
        prop_assert!(x.square().is_central());
        prop_assert!(x.mul(&y).mul(&x.inverse()).mul(&y.inverse()).is_central());
        prop_assert_eq!(x.mul(&x.inverse()), QElement::identity(3));
    }

    #[test]
    fn index_round_trip(x in q_element(3)) {
        prop_assert_eq!(QElement::from_index(3, x.index()), x);
    }

    #[test]
    fn element_orders_divide_twelve(seed in any::<u64>()) {
        let g = group(6, Sign::Minus);
        let x = random_g(g.k(), &mut ChaCha8Rng::seed_from_u64(seed));
        let n = g.element_order(&x);
        prop_assert!(12 % n == 0 || n == 8, "order {}", n);
        prop_assert_eq!(g.g_pow(&x, n), g.identity());
    }
}
