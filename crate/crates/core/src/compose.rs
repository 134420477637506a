//! Composition `G₁ ★ G₂`, decomposition along orthogonal planes of the dent
//! space, isomorphism certificates and fingerprints.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Plane, PlaneKind, Sign};
use crate::dentspace::{DentError, DentSpace};
use crate::groupmodel::{Flavor, Group, GroupError, QElement};
use crate::morphism::{MorphismError, QMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComposeError {
    #[error("types differ: {source_type} and {target_type}, no isomorphism exists")]
    TypeMismatch { source_type: String, target_type: String },
    #[error("isomorphism check failed: {0}")]
    Verification(#[from] MorphismError),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("dent spaces of the composite and its factors do not match: {0}")]
    NotIsometric(String),
    #[error(transparent)]
    Dent(#[from] DentError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Number of random pairs used to check a certificate beyond rank 2.
pub const SAMPLED_PAIRS: usize = 100_000;

/// A composite group together with the factor slots each input occupies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composite {
    pub group: Group,
    /// `provenance[i][j]` is the slot of factor `j` of input `i`.
    pub provenance: Vec<Vec<usize>>,
}

impl Composite {
    /// Image of an element of input `i` in the composite; the centres are
    /// identified.
    pub fn embed(&self, input: usize, x: &QElement) -> QElement {
        let slots = &self.provenance[input];
        let mut t = vec![[crate::algebra::Gf4::ZERO; 3]; self.group.k()];
        for (j, &slot) in slots.iter().enumerate() {
            t[slot] = [x.a(j), x.b(j), crate::algebra::Gf4::ZERO];
        }
        t[0][2] = x.c();
        QElement::from_triples(&t)
    }
}

/// `G₁ ★ ⋯ ★ G_n`: factor lists are concatenated, then minus factors are
/// moved last by a stable sort. A composite may carry several minus
/// factors; its canonical name comes from its type.
pub fn compose_all(groups: &[&Group]) -> Result<Composite, ComposeError> {
    let mut tagged: Vec<(Flavor, usize, usize)> = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        tagged.extend(g.flavors().iter().enumerate().map(|(j, &f)| (f, i, j)));
    }
    tagged.sort_by_key(|t| t.0);
    let group = Group::from_flavors(tagged.iter().map(|t| t.0).collect())?;
    let mut provenance: Vec<Vec<usize>> = groups.iter().map(|g| vec![0; g.k()]).collect();
    for (slot, &(_, i, j)) in tagged.iter().enumerate() {
        provenance[i][j] = slot;
    }
    Ok(Composite { group, provenance })
}

pub fn compose(g1: &Group, g2: &Group) -> Result<Composite, ComposeError> {
    compose_all(&[g1, g2])
}

/// The map `λD̂ + μÊ ↦ (λD, μE)` between the dent space of `G₁ ★ G₂` and
/// the orthogonal sum of the factors' dent spaces is an isometry.
pub fn dent_space_isometry_check(c: &Composite, inputs: &[&Group]) -> Result<(), ComposeError> {
    let composite = DentSpace::new(&c.group)?;
    let spaces: Vec<DentSpace> = inputs.iter().map(|g| DentSpace::new(g)).collect::<Result<_, _>>()?;
    let err = |s: String| Err(ComposeError::NotIsometric(s));

    // induced dents D̂ keep their kind
    let mut hats: Vec<Vec<u64>> = Vec::new();
    for (i, s) in spaces.iter().enumerate() {
        let mut row = vec![0u64];
        for d in s.dents() {
            let Some(h) = composite.dent_of(&c.embed(i, &d.x)) else {
                return err(format!("image of dent {} of factor {i} is not a dent", d.index()));
            };
            if h.kind != d.kind {
                return err(format!("dent {} of factor {i} changes kind", d.index()));
            }
            row.push(h.coords);
        }
        hats.push(row);
    }
    // cross pairs commute
    for (i, si) in spaces.iter().enumerate() {
        for (j, sj) in spaces.iter().enumerate().skip(i + 1) {
            for d in si.dents() {
                for e in sj.dents() {
                    let (u, v) = (hats[i][d.coords as usize], hats[j][e.coords as usize]);
                    if composite.space().beta_bits(u, v) {
                        return err(format!(
                            "dents {} and {} of factors {i}, {j} do not commute",
                            d.index(),
                            e.index()
                        ));
                    }
                }
            }
        }
    }
    // every combination is a dent with the summed q value
    let dims: Vec<usize> = spaces.iter().map(DentSpace::rank).collect();
    let total: usize = dims.iter().sum();
    if total != composite.rank() {
        return err(format!("rank {} is not {total}", composite.rank()));
    }
    let mut seen = vec![false; 1 << total];
    for combo in 0u64..1 << total {
        let mut shift = 0;
        let (mut v, mut q) = (0u64, false);
        for (i, s) in spaces.iter().enumerate() {
            let part = (combo >> shift) & ((1 << dims[i]) - 1);
            shift += dims[i];
            v ^= hats[i][part as usize];
            q ^= s.qform(s.dent(part));
        }
        if seen[v as usize] {
            return err("map is not injective".into());
        }
        seen[v as usize] = true;
        if composite.qform(composite.dent(v)) != q {
            return err(format!("q differs on combination {combo:b}"));
        }
    }
    Ok(())
}

/// A rank-2 piece `Q_i = ⟨D : D ∈ U_i⟩` of a decomposition.
#[derive(Clone, Debug)]
pub struct Piece {
    pub plane: Plane,
    pub sign: Sign,
    /// `x_e, y_e, x_f, y_f` for the canonical plane basis `(e, f)`.
    pub generators: [QElement; 4],
}

/// Split `G` along pairwise orthogonal nondegenerate planes spanning its
/// dent space and check the pieces: each has centre `Z`, is `L`-invariant,
/// pieces commute pairwise, and together they generate `Q`.
pub fn decompose(dents: &DentSpace, planes: &[Plane]) -> Result<Vec<Piece>, ComposeError> {
    let space = dents.space();
    let g = dents.group();
    let bad = |s: String| Err(ComposeError::InvalidDecomposition(s));
    if 2 * planes.len() != dents.rank() {
        return bad(format!("{} planes for rank {}", planes.len(), dents.rank()));
    }
    for (i, p) in planes.iter().enumerate() {
        if !space.beta_bits(p.e, p.f) {
            return bad(format!("plane {i} is degenerate"));
        }
        for q in &planes[i + 1..] {
            if p.vectors().iter().any(|&u| q.vectors().iter().any(|&v| space.beta_bits(u, v))) {
                return bad(format!("plane {i} is not orthogonal to a later plane"));
            }
        }
    }
    let pieces: Vec<Piece> = planes
        .iter()
        .map(|p| {
            let (e, f) = plane_basis(dents, p);
            let (de, df) = (dents.dent(e).unwrap(), dents.dent(f).unwrap());
            Piece { plane: *p, sign: p.kind.sign(), generators: [de.x, de.y, df.x, df.y] }
        })
        .collect();

    let bars: Vec<u64> = pieces.iter().flat_map(|p| p.generators.iter().map(QElement::bar)).collect();
    if crate::algebra::gf2::rank(&bars) != 4 * g.k() {
        return bad("pieces do not generate Q".into());
    }
    for (i, p) in pieces.iter().enumerate() {
        let span = crate::algebra::Gf2Solver::new(&p.generators.iter().map(QElement::bar).collect::<Vec<_>>());
        for x in &p.generators {
            if !span.contains(g.s_act(x).bar()) || !span.contains(g.tau_act(x).bar()) {
                return bad(format!("piece {i} is not L-invariant"));
            }
        }
        let nondegenerate = p.generators.iter().all(|x| p.generators.iter().any(|y| !x.commutator(y).is_zero()));
        if !nondegenerate {
            return bad(format!("piece {i} has centre larger than Z"));
        }
        for q in &pieces[i + 1..] {
            if p.generators.iter().any(|x| q.generators.iter().any(|y| !x.commutator(y).is_zero())) {
                return bad(format!("piece {i} does not commute with a later piece"));
            }
        }
        // three dents in the piece; two singular means type +
        let singular = p.plane.vectors().iter().filter(|&&v| !space.q_bits(v)).count();
        let expected = if p.sign == Sign::Plus { 2 } else { 0 };
        if singular != expected {
            return bad(format!("piece {i} has {singular} singular dents"));
        }
    }
    Ok(pieces)
}

/// Canonical basis of a plane: its two singular vectors when hyperbolic,
/// otherwise its two smallest vectors.
fn plane_basis(dents: &DentSpace, p: &Plane) -> (u64, u64) {
    let mut v = p.vectors();
    v.sort();
    match p.kind {
        PlaneKind::Hyperbolic => {
            let s: Vec<u64> = v.iter().copied().filter(|&u| !dents.space().q_bits(u)).collect();
            (s[0], s[1])
        }
        PlaneKind::Anisotropic => (v[0], v[1]),
    }
}

/// The planes formed by the two basis dents of each factor.
pub fn factor_planes(dents: &DentSpace) -> Result<Vec<Plane>, ComposeError> {
    (0..dents.rank() / 2).map(|i| Ok(Plane::new(dents.space(), 1 << (2 * i), 1 << (2 * i + 1))?)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsomorphismCertificate {
    pub source: String,
    pub target: String,
    pub source_flavors: Vec<Flavor>,
    pub target_flavors: Vec<Flavor>,
    /// `(source dent index, target dent index)` for every dent.
    pub dent_matching: Vec<(usize, usize)>,
    /// Images of the standard generators of `Q`.
    pub generator_images: QMap,
    /// Number of products `Φ(gh) = Φ(g)Φ(h)` checked.
    pub checked_pairs: usize,
    pub verified: bool,
}

/// Map the canonical basis dents of each source plane onto those of the
/// matching target plane, and verify the result.
pub fn certificate_from_planes(
    source: &DentSpace,
    source_planes: &[Plane],
    target: &DentSpace,
    target_planes: &[Plane],
    seed: u64,
) -> Result<IsomorphismCertificate, ComposeError> {
    let (g, h) = (source.group(), target.group());
    if source_planes.len() != target_planes.len() || g.k() != h.k() {
        return Err(ComposeError::TypeMismatch { source_type: g.to_string(), target_type: h.to_string() });
    }
    let (mut src, mut img) = (Vec::new(), Vec::new());
    for (p, q) in source_planes.iter().zip(target_planes) {
        if p.kind != q.kind {
            return Err(ComposeError::InvalidDecomposition("plane kinds do not match".into()));
        }
        let (e, f) = plane_basis(source, p);
        let (e2, f2) = plane_basis(target, q);
        for (u, v) in [(e, e2), (f, f2)] {
            let (du, dv) = (source.dent(u).unwrap(), target.dent(v).unwrap());
            src.extend([du.x, du.y]);
            img.extend([dv.x, dv.y]);
        }
    }
    let phi = QMap::from_generator_images(&src, &img)?;
    phi.check_isomorphism(g, h)?;
    let pairs = if g.rank() == 2 { None } else { Some(SAMPLED_PAIRS) };
    let checked_pairs = phi.check_on_pairs(g, h, pairs, seed)?;

    let mut dent_matching = Vec::with_capacity(source.dents().len());
    for d in source.dents() {
        let Some(e) = target.dent_of(&phi.apply(&d.x)) else {
            return Err(ComposeError::Verification(MorphismError::NotEquivariant(format!(
                "image of dent {} is not a dent",
                d.index()
            ))));
        };
        if e.kind != d.kind {
            return Err(ComposeError::Verification(MorphismError::NotEquivariant(format!(
                "dent {} changes kind",
                d.index()
            ))));
        }
        dent_matching.push((d.index(), e.index()));
    }
    Ok(IsomorphismCertificate {
        source: g.to_string(),
        target: h.to_string(),
        source_flavors: g.flavors().to_vec(),
        target_flavors: h.flavors().to_vec(),
        dent_matching,
        generator_images: phi,
        checked_pairs,
        verified: true,
    })
}

/// An isomorphism `G → G′` that is the identity on `L`, built by matching
/// orthogonal decompositions of the two dent spaces.
pub fn build_isomorphism(g: &Group, h: &Group, seed: u64) -> Result<IsomorphismCertificate, ComposeError> {
    let (dg, dh) = (DentSpace::new(g)?, DentSpace::new(h)?);
    let (tg, th) = (dg.group_type()?, dh.group_type()?);
    if tg != th {
        return Err(ComposeError::TypeMismatch {
            source_type: format!("({}, {})", tg.0, tg.1),
            target_type: format!("({}, {})", th.0, th.1),
        });
    }
    let (pg, ph) = (dg.space().orthogonal_decompose()?, dh.space().orthogonal_decompose()?);
    certificate_from_planes(&dg, &pg, &dh, &ph, seed)
}

/// Compose standard rank-2 groups of the pieces' types and certify that
/// the result is isomorphic to the decomposed group.
pub fn recompose(dents: &DentSpace, planes: &[Plane], seed: u64) -> Result<IsomorphismCertificate, ComposeError> {
    let pieces = decompose(dents, planes)?;
    let singles: Vec<Group> = pieces
        .iter()
        .map(|p| Group::from_flavors(vec![if p.sign == Sign::Plus { Flavor::Plus } else { Flavor::Minus }]))
        .collect::<Result<_, _>>()?;
    let refs: Vec<&Group> = singles.iter().collect();
    let composite = compose_all(&refs)?;
    let cd = DentSpace::new(&composite.group)?;
    let fp = factor_planes(&cd)?;
    // plane of piece i sits in the slot chosen by composition
    let source_planes: Vec<Plane> = composite.provenance.iter().map(|slots| fp[slots[0]]).collect();
    certificate_from_planes(&cd, &source_planes, dents, planes, seed)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: u64,
    pub rank: usize,
    pub sign: Sign,
    pub singular_dents: usize,
    /// Element orders over all of `G`.
    pub order_histogram: BTreeMap<u32, u64>,
    /// Element orders over `Q`.
    pub q_order_histogram: BTreeMap<u32, u64>,
}

pub fn fingerprint(g: &Group) -> Result<Fingerprint, ComposeError> {
    let dents = DentSpace::new(g)?;
    let (rank, sign) = dents.group_type()?;
    let mut order_histogram = BTreeMap::new();
    let mut q_order_histogram = BTreeMap::new();
    for x in g.elements() {
        let n = g.element_order(&x);
        *order_histogram.entry(n).or_insert(0) += 1;
        if x.l.is_identity() {
            *q_order_histogram.entry(n).or_insert(0) += 1;
        }
    }
    Ok(Fingerprint {
        order: g.order() as u64,
        rank,
        sign,
        singular_dents: dents.singular_count(),
        order_histogram,
        q_order_histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupmodel::GroupDescriptor;

    fn group(rank: usize, sign: Sign) -> Group {
        Group::construct(&GroupDescriptor::new(rank, sign).unwrap())
    }

    #[test]
    fn composition_types() {
        let (p, m) = (group(2, Sign::Plus), group(2, Sign::Minus));
        let t = |c: Composite| DentSpace::new(&c.group).unwrap().group_type().unwrap();
        assert_eq!(t(compose(&p, &p).unwrap()), (4, Sign::Plus));
        assert_eq!(t(compose(&p, &m).unwrap()), (4, Sign::Minus));
        assert_eq!(t(compose(&m, &m).unwrap()), (4, Sign::Plus));
        assert_eq!(compose(&p, &p).unwrap().group, group(4, Sign::Plus));
    }

    #[test]
    fn provenance_moves_minus_last() {
        let (p, m) = (group(2, Sign::Plus), group(2, Sign::Minus));
        let c = compose_all(&[&m, &p, &m]).unwrap();
        assert_eq!(c.provenance, vec![vec![1], vec![0], vec![2]]);
        let x = QElement::from_codes(&[[1, 2, 3]]);
        assert_eq!(c.embed(0, &x), QElement::from_codes(&[[0, 0, 3], [1, 2, 0], [0, 0, 0]]));
    }

    #[test]
    fn embeddings_are_equivariant_homomorphisms() {
        let (p, m) = (group(2, Sign::Plus), group(2, Sign::Minus));
        let c = compose(&m, &p).unwrap();
        for (i, g) in [&m, &p].into_iter().enumerate() {
            for x in g.q_elements() {
                assert_eq!(c.embed(i, &g.s_act(&x)), c.group.s_act(&c.embed(i, &x)));
                assert_eq!(c.embed(i, &g.tau_act(&x)), c.group.tau_act(&c.embed(i, &x)));
                for y in g.q_elements().step_by(5) {
                    assert_eq!(c.embed(i, &x.mul(&y)), c.embed(i, &x).mul(&c.embed(i, &y)));
                }
            }
        }
    }

    #[test]
    fn isometry_check_for_compositions() {
        let (p, m) = (group(2, Sign::Plus), group(2, Sign::Minus));
        for (a, b) in [(&p, &p), (&p, &m), (&m, &p), (&m, &m)] {
            let c = compose(a, b).unwrap();
            dent_space_isometry_check(&c, &[a, b]).unwrap();
        }
        let c = compose(&m, &group(4, Sign::Minus)).unwrap();
        dent_space_isometry_check(&c, &[&m, &group(4, Sign::Minus)]).unwrap();
    }

    #[test]
    fn certificates() {
        let (p, m) = (group(2, Sign::Plus), group(2, Sign::Minus));
        let cert = build_isomorphism(&p, &p, 0).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.checked_pairs, 384 * 384);
        assert!(matches!(build_isomorphism(&p, &m, 0), Err(ComposeError::TypeMismatch { .. })));
        let mm = compose(&m, &m).unwrap().group;
        let pp = compose(&p, &p).unwrap().group;
        let cert = build_isomorphism(&mm, &pp, 0).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.dent_matching.len(), 15);
        let json = serde_json::to_string(&cert).unwrap();
        assert_eq!(serde_json::from_str::<IsomorphismCertificate>(&json).unwrap(), cert);
    }

    #[test]
    fn decomposition_round_trip_all_decompositions_rank4() {
        for sign in [Sign::Plus, Sign::Minus] {
            let g = group(4, sign);
            let dents = DentSpace::new(&g).unwrap();
            for planes in dents.space().all_orthogonal_decompositions().unwrap() {
                let pieces = decompose(&dents, &planes).unwrap();
                let product = pieces.iter().fold(Sign::Plus, |acc, p| acc * p.sign);
                assert_eq!(product, sign);
                assert!(recompose(&dents, &planes, 1).unwrap().verified);
            }
        }
    }

    #[test]
    fn invalid_decomposition_rejected() {
        let g = group(4, Sign::Plus);
        let dents = DentSpace::new(&g).unwrap();
        let planes = dents.space().orthogonal_decompose().unwrap();
        assert!(decompose(&dents, &planes[..1]).is_err());
        let twice = [planes[0], planes[0]];
        assert!(matches!(decompose(&dents, &twice), Err(ComposeError::InvalidDecomposition(_))));
    }

    #[test]
    fn fingerprints_rank_two() {
        let (fp, fm) = (fingerprint(&group(2, Sign::Plus)).unwrap(), fingerprint(&group(2, Sign::Minus)).unwrap());
        assert_eq!(fp.singular_dents, 2);
        assert_eq!(fm.singular_dents, 0);
        assert_eq!(fp.q_order_histogram, fm.q_order_histogram);
        assert_eq!(fp.order, 384);
        assert_eq!(fp.order_histogram.values().sum::<u64>(), 384);
    }
}
