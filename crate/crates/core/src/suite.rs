//! The invariant checks of every module, run for both types at one rank.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{PlaneKind, Sign};
use crate::aut::{compute_out, dual_functional, phi_i, realize_orthogonal, MAX_AUT_RANK};
use crate::compose::{build_isomorphism, compose_all, dent_space_isometry_check, fingerprint, recompose};
use crate::dentspace::DentSpace;
use crate::extraspecial::{centralizer_rt, direct_factorization_check};
use crate::groupmodel::{
    is_closed, verify_axioms, Flavor, Group, GroupDescriptor, GroupElement, LElement, QElement, ZLetter,
};

/// Largest rank the suite accepts.
pub const MAX_SUITE_RANK: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionResult {
    pub name: String,
    pub group: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub rank: usize,
    pub seed: u64,
    pub sections: Vec<SectionResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(|s| !matches!(s.outcome, Outcome::Fail(_)))
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sections {
            let status = match &s.outcome {
                Outcome::Pass => "pass".to_string(),
                Outcome::Fail(why) => format!("FAIL: {why}"),
                Outcome::Skipped(why) => format!("skipped: {why}"),
            };
            writeln!(f, "{:<8} {:<28} {status}", s.group, s.name)?;
        }
        let failed = self.sections.iter().filter(|s| matches!(s.outcome, Outcome::Fail(_))).count();
        write!(f, "{} sections, {failed} failed", self.sections.len())
    }
}

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Run every section for `B+(rank)` and `B-(rank)`.
pub fn verify_suite(rank: usize, seed: u64) -> Result<SuiteReport, String> {
    if rank == 0 || rank % 2 == 1 || rank > MAX_SUITE_RANK {
        return Err(format!("rank must be even and at most {MAX_SUITE_RANK}, got {rank}"));
    }
    let mut sections = Vec::new();
    let groups: Vec<Group> = [Sign::Plus, Sign::Minus]
        .into_iter()
        .map(|s| Group::construct(&GroupDescriptor::new(rank, s).expect("valid rank")))
        .collect();

    let mut run = |name: &str, group: &str, f: &mut dyn FnMut() -> Result<Outcome, String>| {
        let outcome = f().unwrap_or_else(Outcome::Fail);
        sections.push(SectionResult { name: name.to_string(), group: group.to_string(), outcome });
    };
    let pass = |c: Check| c.map(|_| Outcome::Pass);

    for g in &groups {
        let label = g.to_string();
        let sign = g.descriptor().expect("canonical").sign();
        run("axioms", &label, &mut || {
            let r = verify_axioms(g);
            pass(ensure(r.passed(), || {
                r.failures()
                    .map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()))
                    .collect::<Vec<_>>()
                    .join("; ")
            }))
        });
        run("group law", &label, &mut || pass(group_law(g, seed)));
        run("dents", &label, &mut || pass(dent_checks(g, sign)));
        run("extraspecial", &label, &mut || pass(extraspecial_checks(g, sign)));
        run("decomposition", &label, &mut || pass(decomposition_checks(g, seed)));
        run("automorphisms", &label, &mut || {
            if rank > MAX_AUT_RANK {
                return Ok(Outcome::Skipped("size limit".into()));
            }
            pass(aut_checks(g))
        });
    }

    run("same Q", "both", &mut || {
        let (p, m) = (&groups[0], &groups[1]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        pass(ensure(p.q_elements().eq(m.q_elements()), || "element sets differ".into()).and_then(|_| {
            let bad = (0..10_000).find(|_| {
                let (x, y) = (QElement::random(p.k(), &mut rng), QElement::random(p.k(), &mut rng));
                p.q_mul(&x, &y) != m.q_mul(&x, &y)
            });
            ensure(bad.is_none(), || "products differ".into())
        }))
    });
    run("type multiplication", "both", &mut || pass(type_multiplication(rank)));
    run("fingerprints", "both", &mut || {
        let count = |g: &Group| DentSpace::new(g).map(|d| d.singular_count()).map_err(|e| e.to_string());
        let (a, b) = (count(&groups[0])?, count(&groups[1])?);
        if rank <= 4 {
            let (fa, fb) = (
                fingerprint(&groups[0]).map_err(|e| e.to_string())?,
                fingerprint(&groups[1]).map_err(|e| e.to_string())?,
            );
            ensure(fa != fb && fa.q_order_histogram == fb.q_order_histogram, || "fingerprints do not separate".into())?;
        }
        pass(ensure(a != b, || format!("singular counts agree: {a}")))
    });
    run("classification", "both", &mut || {
        let cert = build_isomorphism(&groups[0], &groups[1], seed);
        ensure(cert.is_err(), || "isomorphism between different types".into())?;
        if rank < 4 {
            return Ok(Outcome::Pass);
        }
        // B-(2) * B-(2) * B+(rank-4) against B+(rank)
        let mut flavors = vec![Flavor::Minus, Flavor::Minus];
        flavors.extend(std::iter::repeat_n(Flavor::Plus, rank / 2 - 2));
        let h = Group::from_flavors(flavors).map_err(|e| e.to_string())?;
        let cert = build_isomorphism(&h, &groups[0], seed).map_err(|e| e.to_string())?;
        pass(ensure(cert.verified, || "certificate not verified".into()))
    });

    Ok(SuiteReport { rank, seed, sections })
}

fn group_law(g: &Group, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = g.k();
    let mut random = || GroupElement::new(QElement::random(k, &mut rng), LElement::ALL[rng.gen_range(0..6)]);
    for _ in 0..20_000 {
        let (x, y, z) = (random(), random(), random());
        ensure(g.g_mul(&g.g_mul(&x, &y), &z) == g.g_mul(&x, &g.g_mul(&y, &z)), || format!("({x})({y})({z})"))?;
        ensure(g.g_mul(&x, &g.g_inverse(&x)) == g.identity(), || format!("inverse of {x}"))?;
        ensure(x.q.square().is_central(), || format!("square of {}", x.q))?;
    }
    ensure(is_closed(g, &g.canonical_complement()), || "L is not closed".into())
}

fn dent_checks(g: &Group, sign: Sign) -> Check {
    let ds = DentSpace::new(g).map_err(|e| e.to_string())?;
    let m = g.rank();
    let dents = ds.dents();
    ensure(dents.len() == (1 << m) - 1, || format!("{} dents", dents.len()))?;
    ensure(ds.group_type().map_err(|e| e.to_string())? == (m, sign), || "wrong type".into())?;
    ensure(ds.space().is_nondegenerate(), || "beta is degenerate".into())?;
    for d in dents {
        ensure(!ds.beta(d, d), || format!("beta({0},{0}) = 1", d.index()))?;
        for e in dents {
            let sum = ds.add(d, e);
            ensure(sum.map_or(0, |s| s.coords) == d.coords ^ e.coords, || "addition".into())?;
            let polar = ds.qform(sum) ^ ds.qform(Some(d)) ^ ds.qform(Some(e));
            ensure(polar == ds.beta(d, e), || format!("polarization at {}, {}", d.index(), e.index()))?;
            if m <= 4 && ds.beta(d, e) {
                ds.commutator_table(d, e).map_err(|x| x.to_string())?;
            }
            if let Some(f) = sum {
                // each triple {D, E, D+E}: 1 or 3 commute with a given dent,
                // and the singular count has the parity forced by β(D, E)
                let singular = [d, e, f].iter().filter(|x| x.is_singular()).count();
                let ok = if ds.beta(d, e) { singular % 2 == 0 } else { singular % 2 == 1 };
                ensure(ok, || format!("singular count {singular} in triple {}, {}", d.index(), e.index()))?;
                if m <= 4 {
                    for h in dents {
                        let n = [d, e, f].iter().filter(|x| !ds.beta(x, h)).count();
                        ensure(n == 1 || n == 3, || "commuting count".into())?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn extraspecial_checks(g: &Group, sign: Sign) -> Check {
    let r = centralizer_rt(g).map_err(|e| e.to_string())?;
    let ds = DentSpace::new(g).map_err(|e| e.to_string())?;
    ensure(r.order() == 1 << (g.rank() + 1), || format!("|R_t| = {}", r.order()))?;
    ensure(r.center().len() == 2, || "centre of R_t".into())?;
    r.verify_psi(&ds).map_err(|e| e.to_string())?;
    ensure(r.form_type().map_err(|e| e.to_string())? == sign, || "type of R_t".into())?;
    ensure(direct_factorization_check(&r), || "Q is not R_t R_t^s".into())?;
    for d in ds.dents() {
        ensure(r.dent_intersection(d).len() == 4, || format!("dent {} meets R_t badly", d.index()))?;
    }
    Ok(())
}

fn decomposition_checks(g: &Group, seed: u64) -> Check {
    let ds = DentSpace::new(g).map_err(|e| e.to_string())?;
    let decomps = if g.rank() <= 4 {
        ds.space().all_orthogonal_decompositions().map_err(|e| e.to_string())?
    } else {
        vec![ds.space().orthogonal_decompose().map_err(|e| e.to_string())?]
    };
    for planes in &decomps {
        let cert = recompose(&ds, planes, seed).map_err(|e| e.to_string())?;
        ensure(cert.verified, || "round trip not verified".into())?;
    }
    let greedy = ds.space().orthogonal_decompose().map_err(|e| e.to_string())?;
    let last_anisotropic = greedy.last().map(|p| p.kind == PlaneKind::Anisotropic);
    let sign = ds.group_type().map_err(|e| e.to_string())?.1;
    ensure(last_anisotropic == Some(sign == Sign::Minus), || "greedy decomposition shape".into())
}

fn type_multiplication(rank: usize) -> Check {
    // every multiset of rank-2 flavors together with every split into two
    // composed groups
    let k = rank / 2;
    for minus in 0..=k {
        let flavors: Vec<Flavor> =
            std::iter::repeat_n(Flavor::Plus, k - minus).chain(std::iter::repeat_n(Flavor::Minus, minus)).collect();
        let singles: Vec<Group> = flavors.iter().map(|&f| Group::from_flavors(vec![f]).expect("one factor")).collect();
        let refs: Vec<&Group> = singles.iter().collect();
        let c = compose_all(&refs).map_err(|e| e.to_string())?;
        let (m, eps) = DentSpace::new(&c.group).and_then(|d| d.group_type()).map_err(|e| e.to_string())?;
        let product = flavors.iter().fold(Sign::Plus, |acc, f| acc * f.sign());
        ensure(m == rank && eps == product, || format!("{} has type {eps}", c.group))?;
        dent_space_isometry_check(&c, &refs).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn aut_checks(g: &Group) -> Check {
    let out = compute_out(g).map_err(|e| e.to_string())?;
    let ds = DentSpace::new(g).map_err(|e| e.to_string())?;
    let m = g.rank();
    let r = out.report;
    ensure(r.total_order == r.kernel_order * r.image_order, || "orders do not multiply".into())?;
    ensure(out.complement.is_some(), || "no complement".into())?;
    // kernel ≅ dual space, Φ_i ↦ ω_i
    let mut functionals = std::collections::HashMap::new();
    for k in &out.kernel {
        functionals.insert(dual_functional(k, &ds).map_err(|e| e.to_string())?, k.clone());
    }
    ensure(functionals.len() == 1 << m, || "kernel is not the dual".into())?;
    for i in 0..m {
        let p = phi_i(&ds, i).map_err(|e| e.to_string())?;
        ensure(dual_functional(&p, &ds).map_err(|e| e.to_string())? == 1 << i, || format!("Phi_{i}"))?;
    }
    for (wa, a) in &functionals {
        for (wb, b) in &functionals {
            let ab = dual_functional(&a.then(b), &ds).map_err(|e| e.to_string())?;
            ensure(ab == wa ^ wb, || "functional map is not additive".into())?;
        }
    }
    for iso in &out.image {
        realize_orthogonal(&ds, iso).map_err(|e| e.to_string())?;
    }
    let a = g.central(ZLetter::A.value());
    ensure(out.c.iter().all(|p| p.apply(&a) == a), || "C moves a".into())
}
