//! `Out(G) ≅ C = C_{Aut(G)}(L) ≅ Aut(R_t)`: enumeration through `Aut(R_t)`,
//! the kernel of the action on dents, the induced orthogonal group and the
//! split question.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::quadratic::apply_linear;
use crate::algebra::{orthogonal_group_order, Gf2Solver, Sign};
use crate::dentspace::{DentError, DentSpace};
use crate::extraspecial::{centralizer_rt, ExtraspecialError, ExtraspecialSubgroup};
use crate::groupmodel::{Group, GroupElement, LElement, QElement, ZLetter};
use crate::morphism::{MorphismError, QMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error("rank {rank} exceeds the automorphism limit {limit}")]
    TooLarge { rank: usize, limit: usize },
    #[error("structure check failed: {0}")]
    Structure(String),
    #[error("automorphism check failed: {0}")]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Dent(#[from] DentError),
    #[error(transparent)]
    Extraspecial(#[from] ExtraspecialError),
}

/// Largest rank for which `C` is enumerated.
pub const MAX_AUT_RANK: usize = 4;

fn structure<T>(s: impl Into<String>) -> Result<T, AutError> {
    Err(AutError::Structure(s.into()))
}

/// An automorphism of `R_t`, given by the images of
/// [`ExtraspecialSubgroup::generators`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RtAutomorphism {
    pub images: Vec<QElement>,
}

impl RtAutomorphism {
    pub fn identity(r: &ExtraspecialSubgroup) -> Self {
        RtAutomorphism { images: r.generators().to_vec() }
    }

    pub fn apply(&self, r: &ExtraspecialSubgroup, x: &QElement) -> Option<QElement> {
        let coords = r.quotient_coords(x)?;
        let base = r.lift(coords);
        let z = base.inverse().mul(x);
        let k = x.factor_count();
        let img = self
            .images
            .iter()
            .enumerate()
            .filter(|(i, _)| coords >> i & 1 == 1)
            .fold(QElement::identity(k), |acc, (_, y)| acc.mul(y));
        Some(img.mul(&z))
    }
}

/// All automorphisms of `R_t`, by backtracking over images of the
/// generators that keep squares (`q_t`) and then commutators (`β_t`) and
/// stay independent modulo the centre.
pub fn aut_extraspecial(r: &ExtraspecialSubgroup) -> Result<Vec<RtAutomorphism>, AutError> {
    aut_extraspecial_with_limit(r, MAX_AUT_RANK)
}

pub fn aut_extraspecial_with_limit(r: &ExtraspecialSubgroup, limit: usize) -> Result<Vec<RtAutomorphism>, AutError> {
    if r.rank() > limit {
        return Err(AutError::TooLarge { rank: r.rank(), limit });
    }
    let gens = r.generators();
    let candidates: Vec<QElement> = r.elements().iter().filter(|x| !x.is_central()).copied().collect();
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(gens.len());
    search(gens, &candidates, &mut images, &mut out);
    Ok(out)
}

fn search(gens: &[QElement], candidates: &[QElement], images: &mut Vec<QElement>, out: &mut Vec<RtAutomorphism>) {
    let i = images.len();
    if i == gens.len() {
        out.push(RtAutomorphism { images: images.clone() });
        return;
    }
    let square = gens[i].square();
    for y in candidates {
        if y.square() != square {
            continue;
        }
        if (0..i).any(|j| y.commutator(&images[j]) != gens[i].commutator(&gens[j])) {
            continue;
        }
        images.push(*y);
        let bars: Vec<u64> = images.iter().map(QElement::bar).collect();
        if Gf2Solver::new(&bars).is_independent() {
            search(gens, candidates, images, out);
        }
        images.pop();
    }
}

/// The automorphism of `G` centralising `L` that restricts to `α`: `r ↦ α(r)`
/// and `r^s ↦ α(r)^s` on `R_t` and `R_t^s`, the identity on `L`.
pub fn lift_to_g(alpha: &RtAutomorphism, r: &ExtraspecialSubgroup) -> Result<QMap, AutError> {
    let g = r.group();
    let mut src = Vec::with_capacity(2 * r.rank());
    let mut img = Vec::with_capacity(2 * r.rank());
    for (x, y) in r.generators().iter().zip(&alpha.images) {
        src.extend([*x, g.s_act(x)]);
        img.extend([*y, g.s_act(y)]);
    }
    let phi = QMap::from_generator_images(&src, &img)?;
    phi.check_isomorphism(g, g)?;
    Ok(phi)
}

/// Restriction of an automorphism centralising `L` to `R_t`.
pub fn restrict(phi: &QMap, r: &ExtraspecialSubgroup) -> Result<RtAutomorphism, AutError> {
    let images: Vec<QElement> = r.generators().iter().map(|x| phi.apply(x)).collect();
    if let Some(y) = images.iter().find(|y| !r.contains(y)) {
        return structure(format!("{y} is outside R_t"));
    }
    Ok(RtAutomorphism { images })
}

/// The linear map induced on the dent space, as images of the basis
/// coordinates.
pub fn dent_map(phi: &QMap, dents: &DentSpace) -> Result<Vec<u64>, AutError> {
    dents
        .basis()
        .iter()
        .map(|d| match dents.coords_of(&phi.apply(&d.x)) {
            Some(c) if c != 0 => Ok(c),
            _ => structure(format!("image of dent {} is not a dent", d.index())),
        })
        .collect()
}

/// `Φ_i`: the unique automorphism of basis dent `D_i` on `D_i`, the
/// identity on every other basis dent and on `L`.
pub fn phi_i(dents: &DentSpace, i: usize) -> Result<QMap, AutError> {
    let g = dents.group();
    let basis = dents.basis();
    if i >= basis.len() {
        return structure(format!("no basis dent {i}"));
    }
    let mut src = Vec::new();
    let mut img = Vec::new();
    for (j, d) in basis.iter().enumerate() {
        src.extend([d.x, d.y]);
        if j == i {
            img.extend([d.unique_auto(&d.x).unwrap(), d.unique_auto(&d.y).unwrap()]);
        } else {
            img.extend([d.x, d.y]);
        }
    }
    let phi = QMap::from_generator_images(&src, &img)?;
    phi.check_isomorphism(g, g)?;
    Ok(phi)
}

/// For `α` acting trivially on dents, the functional `α̂` with
/// `α̂(D) = 1` iff `α` is nontrivial on `D`, as a mask over basis
/// coordinates. Checks `α(x_D) = x_D a^{α̂(D)}` on every dent, which makes
/// `α̂` linear.
pub fn dual_functional(alpha: &QMap, dents: &DentSpace) -> Result<u64, AutError> {
    let a = dents.group().central(ZLetter::A.value());
    let mut omega = 0u64;
    for (i, d) in dents.basis().iter().enumerate() {
        let y = alpha.apply(&d.x);
        if y == d.x.mul(&a) {
            omega |= 1 << i;
        } else if y != d.x {
            return structure(format!("map moves basis dent {i}"));
        }
    }
    for d in dents.dents() {
        let bit = (omega & d.coords).count_ones() % 2 == 1;
        let want = if bit { d.x.mul(&a) } else { d.x };
        if alpha.apply(&d.x) != want || alpha.apply(&d.y) != if bit { d.unique_auto(&d.y).unwrap() } else { d.y } {
            return structure(format!("functional is not linear at dent {}", d.index()));
        }
    }
    Ok(omega)
}

/// The automorphism realising an isometry of the dent space, built by
/// sending the standard basis of each basis dent to that of its image.
pub fn realize_orthogonal(dents: &DentSpace, images: &[u64]) -> Result<QMap, AutError> {
    let g = dents.group();
    if !dents.space().preserves(images) {
        return structure("map is not an isometry");
    }
    let mut src = Vec::new();
    let mut img = Vec::new();
    for (d, &c) in dents.basis().iter().zip(images) {
        let e = dents.dent(c).expect("nonzero image");
        src.extend([d.x, d.y]);
        img.extend([e.x, e.y]);
    }
    let phi = QMap::from_generator_images(&src, &img)?;
    phi.check_isomorphism(g, g)?;
    if dent_map(&phi, dents)? != images {
        return structure("realised map induces a different isometry");
    }
    Ok(phi)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Split {
    Yes,
    No,
    CitedNotComputed,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Yes => "yes",
            Split::No => "no",
            Split::CitedNotComputed => "cited-not-computed",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OutReport {
    pub m: usize,
    pub eps: Sign,
    pub kernel_order: u64,
    pub image_order: u64,
    pub total_order: u64,
    pub split: Split,
}

impl fmt::Display for OutReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kernel={} image={} total={} split={}",
            self.kernel_order, self.image_order, self.total_order, self.split
        )
    }
}

/// Everything computed on the way to an [`OutReport`].
#[derive(Clone, Debug)]
pub struct OutStructure {
    pub report: OutReport,
    /// `C`, as maps of `Q` (each acts as the identity on `L`).
    pub c: Vec<QMap>,
    /// Induced dent-space map of each element of `c`.
    pub dent_maps: Vec<Vec<u64>>,
    pub kernel: Vec<QMap>,
    /// The induced orthogonal group, sorted.
    pub image: Vec<Vec<u64>>,
    /// A complement to the kernel, when one exists.
    pub complement: Option<Vec<QMap>>,
}

/// Compute `C` and its structure for `m ≤ 4`.
pub fn compute_out(g: &Group) -> Result<OutStructure, AutError> {
    let m = g.rank();
    if m > MAX_AUT_RANK {
        return Err(AutError::TooLarge { rank: m, limit: MAX_AUT_RANK });
    }
    let dents = DentSpace::new(g)?;
    let eps = dents.group_type()?.1;
    let r = centralizer_rt(g)?;
    let autos = aut_extraspecial(&r)?;

    let mut c = Vec::with_capacity(autos.len());
    let mut dent_maps = Vec::with_capacity(autos.len());
    for alpha in &autos {
        let phi = lift_to_g(alpha, &r)?;
        if &restrict(&phi, &r)? != alpha {
            return structure("restriction of a lift differs from the original");
        }
        let dm = dent_map(&phi, &dents)?;
        if !dents.space().preserves(&dm) {
            return structure("induced map does not preserve q");
        }
        for d in dents.dents() {
            if dents.coords_of(&phi.apply(&d.x)) != Some(apply_linear(&dm, d.coords)) {
                return structure(format!("induced map is not additive at dent {}", d.index()));
            }
        }
        c.push(phi);
        dent_maps.push(dm);
    }
    if c.iter().collect::<HashSet<_>>().len() != c.len() {
        return structure("distinct automorphisms of R_t lift to the same map");
    }

    let identity: Vec<u64> = (0..m).map(|i| 1u64 << i).collect();
    let kernel: Vec<QMap> = c.iter().zip(&dent_maps).filter(|(_, d)| **d == identity).map(|(p, _)| p.clone()).collect();
    if kernel.len() != 1 << m {
        return structure(format!("kernel has order {}, expected {}", kernel.len(), 1 << m));
    }
    let phis: Vec<QMap> = (0..m).map(|i| phi_i(&dents, i)).collect::<Result<_, _>>()?;
    let spanned: HashSet<QMap> = (0u64..1 << m)
        .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).fold(QMap::identity(g.k()), |acc, i| acc.then(&phis[i])))
        .collect();
    if spanned != kernel.iter().cloned().collect() {
        return structure("kernel is not generated by the maps Phi_i");
    }

    let image: BTreeSet<Vec<u64>> = dent_maps.iter().cloned().collect();
    let expected = orthogonal_group_order(m, eps).expect("small rank") as usize;
    if image.len() != expected {
        return structure(format!("image has order {}, expected {expected}", image.len()));
    }
    if let Some(refl) = dents.space().reflections().into_iter().find(|r| !image.contains(r)) {
        return structure(format!("reflection {refl:?} is not induced"));
    }
    let image: Vec<Vec<u64>> = image.into_iter().collect();

    let complement = find_split(&c, &dent_maps, &kernel, &image);
    let report = OutReport {
        m,
        eps,
        kernel_order: kernel.len() as u64,
        image_order: image.len() as u64,
        total_order: c.len() as u64,
        split: if complement.is_some() { Split::Yes } else { Split::No },
    };
    Ok(OutStructure { report, c, dent_maps, kernel, image, complement })
}

/// The report for any rank: computed for `m ≤ 4`, otherwise from the order
/// formulas with the split flag marked as cited.
pub fn out_structure(g: &Group) -> Result<OutReport, AutError> {
    if g.rank() <= MAX_AUT_RANK {
        return Ok(compute_out(g)?.report);
    }
    let m = g.rank();
    let eps = DentSpace::new(g)?.group_type()?.1;
    let image = orthogonal_group_order(m, eps).ok_or(AutError::TooLarge { rank: m, limit: 20 })? as u64;
    let kernel = 1u64 << m;
    Ok(OutReport {
        m,
        eps,
        kernel_order: kernel,
        image_order: image,
        total_order: kernel * image,
        split: Split::CitedNotComputed,
    })
}

fn compose_linear(first: &[u64], second: &[u64]) -> Vec<u64> {
    first.iter().map(|&v| apply_linear(second, v)).collect()
}

/// Closure of `gens` under composition, or `None` once it exceeds `cap`.
fn closure<T: Clone + Eq + std::hash::Hash>(gens: &[T], mul: impl Fn(&T, &T) -> T, cap: usize) -> Option<Vec<T>> {
    let mut seen: HashSet<T> = gens.iter().cloned().collect();
    let mut order: Vec<T> = seen.iter().cloned().collect();
    let mut queue: VecDeque<T> = order.iter().cloned().collect();
    while let Some(x) = queue.pop_front() {
        for gen in gens {
            let y = mul(&x, gen);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return None;
                }
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Some(order)
}

/// A small generating set of the orthogonal group `image`: a generating
/// pair if one exists, otherwise a greedy set.
fn generating_set(image: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = image.len();
    let mul = |a: &Vec<u64>, b: &Vec<u64>| compose_linear(a, b);
    for i in 0..n {
        for j in i..n {
            let gens = vec![image[i].clone(), image[j].clone()];
            if closure(&gens, mul, n).is_some_and(|c| c.len() == n) {
                return gens;
            }
        }
    }
    let mut gens: Vec<Vec<u64>> = Vec::new();
    let mut span: HashSet<Vec<u64>> = HashSet::new();
    for x in image {
        if !span.contains(x) {
            gens.push(x.clone());
            span = closure(&gens, mul, n).expect("subgroup").into_iter().collect();
        }
        if span.len() == n {
            break;
        }
    }
    gens
}

/// Search for a complement to the kernel in `C`.
///
/// Any complement contains an element `c_j k_j` over each generator `o_j`
/// of the image, for fixed preimages `c_j` and some kernel elements `k_j`,
/// and is generated by them. Running over every choice of the `k_j`
/// therefore decides whether a complement exists. A candidate generates a
/// complement exactly when its closure has the order of the image.
pub fn find_split(c: &[QMap], dent_maps: &[Vec<u64>], kernel: &[QMap], image: &[Vec<u64>]) -> Option<Vec<QMap>> {
    let gens = generating_set(image);
    let preimage: HashMap<&Vec<u64>, &QMap> = dent_maps.iter().zip(c).collect();
    let lifts: Vec<&QMap> = gens.iter().map(|o| preimage[o]).collect();
    let n = image.len();
    let r = gens.len();
    let total = kernel.len().pow(r as u32);
    for choice in 0..total {
        let mut rest = choice;
        let hs: Vec<QMap> = lifts
            .iter()
            .map(|l| {
                let k = &kernel[rest % kernel.len()];
                rest /= kernel.len();
                l.then(k)
            })
            .collect();
        if let Some(h) = closure(&hs, |a, b| a.then(b), n) {
            if h.len() == n {
                return Some(h);
            }
        }
    }
    None
}

/// Result of enumerating `Aut(G)` directly on the multiplication table.
#[derive(Clone, Debug)]
pub struct BruteAut {
    pub aut_order: usize,
    /// Automorphisms fixing the generators `(1, s)` and `(1, t)` of `L`.
    pub c_order: usize,
    /// No nontrivial element of `G` centralises `L`.
    pub inner_meets_c_trivially: bool,
    /// The maps counted in `c_order`, restricted to `Q`.
    pub c_on_q: Vec<Vec<QElement>>,
}

/// Largest group order for the brute-force oracle.
pub const BRUTE_LIMIT: usize = 384;

/// Enumerate `Aut(G)` for `|G| ≤ 384` by trying every image of a generating
/// triple `(s, t, x)` that matches orders of short words, and checking
/// every Cayley-graph edge `φ(e·g) = φ(e)·φ(g)`.
pub fn brute_aut_oracle(g: &Group) -> Result<BruteAut, AutError> {
    let n = g.order();
    if n > BRUTE_LIMIT {
        return Err(AutError::TooLarge { rank: g.rank(), limit: 2 });
    }
    let elements: Vec<GroupElement> = (0..n).map(|i| g.g_from_index(i)).collect();
    let mut table = vec![0u16; n * n];
    for (i, x) in elements.iter().enumerate() {
        for (j, y) in elements.iter().enumerate() {
            table[i * n + j] = g.g_index(&g.g_mul(x, y)) as u16;
        }
    }
    let mul = |i: usize, j: usize| table[i * n + j] as usize;
    let id = g.g_index(&g.identity());
    let order = |i: usize| {
        let (mut x, mut k) = (i, 1);
        while x != id {
            x = mul(x, i);
            k += 1;
        }
        k
    };
    let orders: Vec<usize> = (0..n).map(order).collect();

    let s = g.g_index(&GroupElement::from_l(g.k(), LElement::S));
    let t = g.g_index(&GroupElement::from_l(g.k(), LElement::T));
    let closure_size = |gens: &[usize]| {
        let mut seen = vec![false; n];
        seen[id] = true;
        let mut queue = vec![id];
        let mut count = 1;
        while let Some(x) = queue.pop() {
            for &gen in gens {
                let y = mul(x, gen);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push(y);
                }
            }
        }
        count
    };
    let x = (0..n)
        .find(|&x| closure_size(&[s, t, x]) == n)
        .ok_or_else(|| AutError::Structure("no generating triple".into()))?;
    let gens = [s, t, x];

    // spanning tree of the Cayley graph
    let mut parent = vec![(usize::MAX, 0usize); n];
    let mut bfs = vec![id];
    parent[id] = (id, 0);
    let mut head = 0;
    while head < bfs.len() {
        let e = bfs[head];
        head += 1;
        for (j, &gen) in gens.iter().enumerate() {
            let y = mul(e, gen);
            if parent[y].0 == usize::MAX {
                parent[y] = (e, j);
                bfs.push(y);
            }
        }
    }

    let words = |a: usize, b: usize, c: usize| -> [usize; 6] {
        [
            orders[c],
            orders[mul(a, c)],
            orders[mul(b, c)],
            orders[mul(mul(a, b), c)],
            orders[mul(mul(a, a), c)],
            orders[mul(mul(a, c), b)],
        ]
    };
    let target = words(s, t, x);

    let mut aut_order = 0;
    let mut c_on_q = Vec::new();
    let mut phi = vec![0usize; n];
    let mut used = vec![false; n];
    for s2 in (0..n).filter(|&i| orders[i] == 3) {
        for t2 in (0..n).filter(|&i| orders[i] == 2 && orders[mul(s2, i)] == 2) {
            for x2 in (0..n).filter(|&i| words(s2, t2, i) == target) {
                let imgs = [s2, t2, x2];
                phi[id] = id;
                for &e in &bfs[1..] {
                    let (p, j) = parent[e];
                    phi[e] = mul(phi[p], imgs[j]);
                }
                used.iter_mut().for_each(|u| *u = false);
                let injective = phi.iter().all(|&y| !std::mem::replace(&mut used[y], true));
                let edges = injective
                    && (0..n).all(|e| gens.iter().zip(&imgs).all(|(&gen, &img)| phi[mul(e, gen)] == mul(phi[e], img)));
                if edges {
                    aut_order += 1;
                    if s2 == s && t2 == t {
                        c_on_q.push(
                            g.q_elements().map(|q| elements[phi[g.g_index(&GroupElement::from_q(q))]].q).collect(),
                        );
                    }
                }
            }
        }
    }
    let centraliser = (0..n).filter(|&e| mul(e, s) == mul(s, e) && mul(e, t) == mul(t, e)).count();
    Ok(BruteAut { aut_order, c_order: c_on_q.len(), inner_meets_c_trivially: centraliser == 1, c_on_q })
}
