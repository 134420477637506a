//! Composition, classification and the automorphism calculus across modules.

use biextra_core::algebra::quadratic::apply_linear;
use biextra_core::algebra::{orthogonal_group_order, Sign};
use biextra_core::aut::{compute_out, dent_map, dual_functional, phi_i, realize_orthogonal};
use biextra_core::compose::{build_isomorphism, compose, compose_all, dent_space_isometry_check};
use biextra_core::dentspace::DentSpace;
use biextra_core::groupmodel::{Flavor, Group, GroupDescriptor};

fn canonical(rank: usize, sign: Sign) -> Group {
    Group::construct(&GroupDescriptor::new(rank, sign).unwrap())
}

fn single(f: Flavor) -> Group {
    Group::from_flavors(vec![f]).unwrap()
}

/// Every flavor sequence of length `len`.
fn sequences(len: usize) -> Vec<Vec<Flavor>> {
    (0..1u32 << len)
        .map(|bits| (0..len).map(|i| if bits >> i & 1 == 1 { Flavor::Minus } else { Flavor::Plus }).collect())
        .collect()
}

#[test]
fn type_is_the_product_of_factor_types() {
    for len in 1..=3 {
        for seq in sequences(len) {
            let singles: Vec<Group> = seq.iter().map(|&f| single(f)).collect();
            let refs: Vec<&Group> = singles.iter().collect();
            let c = compose_all(&refs).unwrap();
            let product = seq.iter().fold(Sign::Plus, |acc, f| acc * f.sign());
            let ds = DentSpace::new(&c.group).unwrap();
            assert_eq!(ds.group_type().unwrap(), (2 * len, product), "{seq:?}");
            dent_space_isometry_check(&c, &refs).unwrap();
            let cert = build_isomorphism(&c.group, &canonical(2 * len, product), 0).unwrap();
            assert!(cert.verified, "{seq:?}");
        }
    }
}

#[test]
fn type_multiplication_for_mixed_rank_inputs() {
    let groups: Vec<Group> = [(2, Sign::Plus), (2, Sign::Minus), (4, Sign::Plus), (4, Sign::Minus)]
        .into_iter()
        .map(|(m, s)| canonical(m, s))
        .collect();
    for g in &groups {
        for h in &groups {
            if g.rank() + h.rank() > 6 {
                continue;
            }
            let c = compose(g, h).unwrap();
            let tg = DentSpace::new(g).unwrap().group_type().unwrap().1;
            let th = DentSpace::new(h).unwrap().group_type().unwrap().1;
            let tc = DentSpace::new(&c.group).unwrap().group_type().unwrap();
            assert_eq!(tc, (g.rank() + h.rank(), tg * th), "{g} * {h}");
            dent_space_isometry_check(&c, &[g, h]).unwrap();
        }
    }
}

#[test]
fn star_is_commutative_up_to_certified_isomorphism() {
    let groups = [canonical(2, Sign::Plus), canonical(2, Sign::Minus), canonical(4, Sign::Minus)];
    for g in &groups {
        for h in &groups {
            if g.rank() + h.rank() > 6 {
                continue;
            }
            let (gh, hg) = (compose(g, h).unwrap(), compose(h, g).unwrap());
            let cert = build_isomorphism(&gh.group, &hg.group, 3).unwrap();
            assert!(cert.verified, "{g} * {h}");
        }
    }
}

#[test]
fn star_is_associative_up_to_certified_isomorphism() {
    for seq in sequences(3) {
        let [a, b, c] = [single(seq[0]), single(seq[1]), single(seq[2])];
        let left = compose(&compose(&a, &b).unwrap().group, &c).unwrap();
        let right = compose(&a, &compose(&b, &c).unwrap().group).unwrap();
        let cert = build_isomorphism(&left.group, &right.group, 4).unwrap();
        assert!(cert.verified, "{seq:?}");
    }
}

#[test]
fn different_types_are_not_isomorphic() {
    for m in [2, 4, 6] {
        assert!(build_isomorphism(&canonical(m, Sign::Plus), &canonical(m, Sign::Minus), 0).is_err());
    }
}

#[test]
fn kernel_is_the_dual_of_the_dent_space() {
    for sign in [Sign::Plus, Sign::Minus] {
        let g = canonical(2, sign);
        let ds = DentSpace::new(&g).unwrap();
        let out = compute_out(&g).unwrap();
        assert_eq!(out.kernel.len(), 4);
        let omega: Vec<u64> = out.kernel.iter().map(|k| dual_functional(k, &ds).unwrap()).collect();
        let mut sorted = omega.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
        for (i, a) in out.kernel.iter().enumerate() {
            assert_eq!(omega[i] == 0, a.is_identity());
            for (j, b) in out.kernel.iter().enumerate() {
                assert_eq!(dual_functional(&a.then(b), &ds).unwrap(), omega[i] ^ omega[j]);
            }
        }
        let (p0, p1) = (phi_i(&ds, 0).unwrap(), phi_i(&ds, 1).unwrap());
        assert_eq!(dual_functional(&p0, &ds).unwrap(), 0b01);
        assert_eq!(dual_functional(&p1, &ds).unwrap(), 0b10);
        // Φ₁Φ₂ is nontrivial but fixes D₁ + D₂ pointwise; Φ₁ alone does not
        let both = p0.then(&p1);
        let d3 = ds.dent(0b11).unwrap();
        assert!(!both.is_identity());
        assert!(d3.elements().iter().all(|x| both.apply(x) == *x));
        assert!(d3.elements().iter().any(|x| p0.apply(x) != *x));
    }
}

#[test]
fn every_isometry_is_realised() {
    for m in [2, 4] {
        for sign in [Sign::Plus, Sign::Minus] {
            let g = canonical(m, sign);
            let ds = DentSpace::new(&g).unwrap();
            let isos = ds.space().isometries().unwrap();
            assert_eq!(isos.len() as u128, orthogonal_group_order(m, sign).unwrap());
            for iso in &isos {
                let phi = realize_orthogonal(&ds, iso).unwrap();
                phi.check_isomorphism(&g, &g).unwrap();
                assert_eq!(&dent_map(&phi, &ds).unwrap(), iso);
                for d in ds.dents() {
                    let image = apply_linear(iso, d.coords);
                    assert_eq!(ds.coords_of(&phi.apply(&d.x)), Some(image), "{g}");
                    assert_eq!(ds.coords_of(&phi.apply(&d.y)), Some(image), "{g}");
                }
            }
        }
    }
}
