//! Complete multipartite digraphs with the parity property.
//!
//! A digraph is complete multipartite when ⊥ is an equivalence relation; its
//! classes are the maximal antichains. The parity property asks that any two
//! element pairs drawn from two antichains span an even number of forward
//! edges. Between two antichains the edges are then governed by one subset on
//! each side: x -> y exactly when x ∈ R ⟺ y ∈ S. The pair (R, S) is unique
//! up to complementing both sides at once; canonically the earliest-created
//! element of the source antichain lies in R.

use crate::error::Error;
use crate::structures::{Digraph, EdgeState, VertexId};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A maximal antichain, tagged with its earliest-created element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Antichain {
    pub founder: VertexId,
    pub members: Vec<VertexId>,
}

/// The ⊥-classes of a digraph, or an error when ⊥ is not an equivalence.
pub fn maximal_antichains(g: &Digraph) -> Result<Vec<Antichain>, Error> {
    let n = g.n();
    let mut class_of: Vec<Option<usize>> = vec![None; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if class_of[i].is_some() {
            continue;
        }
        let idx = classes.len();
        let mut members = vec![i];
        class_of[i] = Some(idx);
        for j in (i + 1)..n {
            if class_of[j].is_none() && g.edge_state_pos(i, j) == EdgeState::Incomparable {
                class_of[j] = Some(idx);
                members.push(j);
            }
        }
        classes.push(members);
    }
    // equivalence check: ⊥ must hold exactly within classes
    for i in 0..n {
        for j in (i + 1)..n {
            let same = class_of[i] == class_of[j];
            let perp = g.edge_state_pos(i, j) == EdgeState::Incomparable;
            if same != perp {
                return Err(Error::NotMultipartite(format!(
                    "vertices {} and {} are {} but their ⊥-classes {}",
                    g.id_at(i),
                    g.id_at(j),
                    if perp { "incomparable" } else { "comparable" },
                    if same { "coincide" } else { "differ" },
                )));
            }
        }
    }
    Ok(classes
        .into_iter()
        .map(|members| Antichain {
            founder: g.id_at(members[0]),
            members: members.into_iter().map(|i| g.id_at(i)).collect(),
        })
        .collect())
}

/// Digraph together with its cached antichain partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultipartiteDigraph {
    g: Digraph,
    antichains: Vec<Antichain>,
    class_of: Vec<usize>, // position -> antichain index
}

impl MultipartiteDigraph {
    pub fn new(g: Digraph) -> Result<Self, Error> {
        let antichains = maximal_antichains(&g)?;
        let mut class_of = vec![0usize; g.n()];
        for (idx, a) in antichains.iter().enumerate() {
            for &v in &a.members {
                class_of[g.position(v).unwrap()] = idx;
            }
        }
        Ok(MultipartiteDigraph {
            g,
            antichains,
            class_of,
        })
    }

    pub fn digraph(&self) -> &Digraph {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn antichains(&self) -> &[Antichain] {
        &self.antichains
    }

    pub fn class_index(&self, v: VertexId) -> Result<usize, Error> {
        let i = self.g.position(v).ok_or(Error::UnknownVertex(v))?;
        Ok(self.class_of[i])
    }

    pub fn class_index_of_pos(&self, i: usize) -> usize {
        self.class_of[i]
    }
}

/// Exhaustive parity check over all antichain pairs and element pairs.
pub fn has_parity_property(g: &Digraph) -> Result<bool, Error> {
    let mp = MultipartiteDigraph::new(g.clone())?;
    Ok(parity_violation_quartic(&mp).is_none())
}

/// First violating tuple (a, a', b, b'), if any, by direct pair counting.
pub fn parity_violation_quartic(
    mp: &MultipartiteDigraph,
) -> Option<(VertexId, VertexId, VertexId, VertexId)> {
    let g = &mp.g;
    let classes = &mp.antichains;
    for (ai, a) in classes.iter().enumerate() {
        for b in classes.iter().skip(ai + 1) {
            for (x1, &a1) in a.members.iter().enumerate() {
                for &a2 in a.members.iter().skip(x1 + 1) {
                    for (y1, &b1) in b.members.iter().enumerate() {
                        for &b2 in b.members.iter().skip(y1 + 1) {
                            let count = [(a1, b1), (a1, b2), (a2, b1), (a2, b2)]
                                .iter()
                                .filter(|&&(u, v)| g.arc(u, v).unwrap())
                                .count();
                            if count % 2 != 0 {
                                return Some((a1, a2, b1, b2));
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Parity check through the decomposition route: every antichain pair must
/// admit an (R, S) pair reproducing all of its edges. Equivalent to the
/// quartic count (and property-tested against it), quadratic per pair.
pub fn has_parity_property_fast(mp: &MultipartiteDigraph) -> bool {
    let k = mp.antichains.len();
    for a in 0..k {
        for b in (a + 1)..k {
            if decompose_pair(mp, a, b).is_err() {
                return false;
            }
        }
    }
    true
}

/// The Lemma-style splitting of two antichains: subsets R ⊆ A, S ⊆ B with
/// x -> y ⟺ (x ∈ R ⟺ y ∈ S), canonicalized so the founder of A lies in R.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsDecomposition {
    #[serde(rename = "A")]
    pub a: VertexId,
    #[serde(rename = "B")]
    pub b: VertexId,
    #[serde(rename = "R")]
    pub r: BTreeSet<VertexId>,
    #[serde(rename = "S")]
    pub s: BTreeSet<VertexId>,
}

/// Decomposes the antichains containing `a` and `b`.
pub fn rs_decomposition(
    mp: &MultipartiteDigraph,
    a: VertexId,
    b: VertexId,
) -> Result<RsDecomposition, Error> {
    let ai = mp.class_index(a)?;
    let bi = mp.class_index(b)?;
    if ai == bi {
        return Err(Error::InvalidInput(
            "decomposition requires two distinct maximal antichains".into(),
        ));
    }
    decompose_pair(mp, ai, bi)
}

/// Memo cache for decompositions, keyed by antichain index pair. The stage
/// builders query the same pairs for every type they classify.
pub type DecompositionCache = BTreeMap<(usize, usize), RsDecomposition>;

pub fn decompose_pair_cached(
    mp: &MultipartiteDigraph,
    cache: &mut DecompositionCache,
    a: usize,
    b: usize,
) -> Result<RsDecomposition, Error> {
    if let Some(d) = cache.get(&(a, b)) {
        return Ok(d.clone());
    }
    let d = decompose_pair(mp, a, b)?;
    cache.insert((a, b), d.clone());
    Ok(d)
}

fn decompose_pair(mp: &MultipartiteDigraph, ai: usize, bi: usize) -> Result<RsDecomposition, Error> {
    let g = &mp.g;
    let a_members = &mp.antichains[ai].members;
    let b_members = &mp.antichains[bi].members;
    let forward = a_members.iter().find_map(|&x| {
        b_members
            .iter()
            .find(|&&y| g.arc(x, y).unwrap())
            .map(|&y| (x, y))
    });
    let (mut r, mut s): (BTreeSet<VertexId>, BTreeSet<VertexId>) = match forward {
        Some((x0, y0)) => {
            let r = a_members
                .iter()
                .copied()
                .filter(|&x| g.arc(x, y0).unwrap())
                .collect();
            let s = b_members
                .iter()
                .copied()
                .filter(|&y| g.arc(x0, y).unwrap())
                .collect();
            (r, s)
        }
        None => {
            // every edge points B -> A; then R = A, S = ∅ fits the predicate.
            // A pair with no edge either way would mean ⊥ across antichains,
            // which the partition already excludes.
            let backward = a_members.iter().any(|&x| {
                b_members.iter().any(|&y| g.arc(y, x).unwrap())
            });
            if !backward {
                return Err(Error::NotMultipartite(
                    "antichain pair with no edges in either direction".into(),
                ));
            }
            (
                a_members.iter().copied().collect(),
                BTreeSet::new(),
            )
        }
    };
    let founder = mp.antichains[ai].founder;
    if !r.contains(&founder) {
        r = a_members.iter().copied().filter(|v| !r.contains(v)).collect();
        s = b_members.iter().copied().filter(|v| !s.contains(v)).collect();
    }
    // the decomposition must reproduce every cross edge
    for &x in a_members {
        for &y in b_members {
            let predicted = r.contains(&x) == s.contains(&y);
            if g.arc(x, y).unwrap() != predicted {
                return Err(Error::ParityViolation(format!(
                    "edge between {x} and {y} contradicts any (R,S) decomposition"
                )));
            }
        }
    }
    Ok(RsDecomposition {
        a: founder,
        b: mp.antichains[bi].founder,
        r,
        s,
    })
}

// ---------------------------------------------------------------------------
// One-point types
// ---------------------------------------------------------------------------

/// Quantifier-free one-point type: the demanded state of the fresh point x
/// toward each parameter (Out = x->s, In = s->x, Incomparable = x⊥s).
pub type MpType = BTreeMap<VertexId, EdgeState>;

/// Classification of an admissible type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MpTypeClass {
    /// x joins the antichain holding its ⊥-parameters; per other antichain it
    /// behaves as a member of the R side (false) or the complement (true).
    Class1 {
        antichain: usize,
        complement_side: BTreeMap<usize, bool>,
    },
    /// x founds a singleton antichain.
    Class2,
}

impl MpTypeClass {
    pub fn is_class1(&self) -> bool {
        matches!(self, MpTypeClass::Class1 { .. })
    }
}

/// Classifies a type, returning `None` when it cannot be realized inside the
/// parity class.
pub fn classify_mp_type(
    mp: &MultipartiteDigraph,
    t: &MpType,
) -> Result<Option<MpTypeClass>, Error> {
    classify_mp_type_cached(mp, &mut DecompositionCache::new(), t)
}

pub fn classify_mp_type_cached(
    mp: &MultipartiteDigraph,
    cache: &mut DecompositionCache,
    t: &MpType,
) -> Result<Option<MpTypeClass>, Error> {
    for &v in t.keys() {
        if mp.digraph().position(v).is_none() {
            return Err(Error::UnknownVertex(v));
        }
    }
    let perp: Vec<VertexId> = t
        .iter()
        .filter(|&(_, &d)| d == EdgeState::Incomparable)
        .map(|(&v, _)| v)
        .collect();
    if perp.is_empty() {
        // a singleton antichain is parity-free: both quantified pairs need
        // two distinct elements, so any in/out pattern is fine
        return Ok(Some(MpTypeClass::Class2));
    }
    let home = mp.class_index(perp[0])?;
    for &v in &perp[1..] {
        if mp.class_index(v)? != home {
            return Ok(None); // ⊥ would stop being an equivalence
        }
    }
    let mut complement_side = BTreeMap::new();
    let mut demands_by_class: BTreeMap<usize, Vec<(VertexId, EdgeState)>> = BTreeMap::new();
    for (&v, &d) in t {
        let c = mp.class_index(v)?;
        if c == home {
            if d != EdgeState::Incomparable {
                return Ok(None); // forced ⊥ by the equivalence, contradiction
            }
        } else {
            debug_assert_ne!(d, EdgeState::Incomparable);
            demands_by_class.entry(c).or_default().push((v, d));
        }
    }
    for (c, demands) in demands_by_class {
        let dec = decompose_pair_cached(mp, cache, home, c)?;
        let as_r = demands.iter().all(|&(y, d)| {
            let predicted = if dec.s.contains(&y) {
                EdgeState::Out
            } else {
                EdgeState::In
            };
            d == predicted
        });
        let as_rc = demands.iter().all(|&(y, d)| {
            let predicted = if dec.s.contains(&y) {
                EdgeState::In
            } else {
                EdgeState::Out
            };
            d == predicted
        });
        match (as_r, as_rc) {
            (true, _) => {
                complement_side.insert(c, false);
            }
            (false, true) => {
                complement_side.insert(c, true);
            }
            (false, false) => return Ok(None),
        }
    }
    Ok(Some(MpTypeClass::Class1 {
        antichain: home,
        complement_side,
    }))
}

pub fn is_admissible_mp_type(mp: &MultipartiteDigraph, t: &MpType) -> Result<bool, Error> {
    Ok(classify_mp_type(mp, t)?.is_some())
}

/// Full edge pattern of the fresh point toward every existing position,
/// following the defaults: a Class 1 point joins the R side of every
/// untouched antichain; a Class 2 point sends an arc to every old vertex
/// unless its type forces the reverse.
pub fn type_edge_pattern(
    mp: &MultipartiteDigraph,
    t: &MpType,
    class: &MpTypeClass,
) -> Result<Vec<EdgeState>, Error> {
    type_edge_pattern_cached(mp, &mut DecompositionCache::new(), t, class)
}

pub fn type_edge_pattern_cached(
    mp: &MultipartiteDigraph,
    cache: &mut DecompositionCache,
    t: &MpType,
    class: &MpTypeClass,
) -> Result<Vec<EdgeState>, Error> {
    let g = mp.digraph();
    let n = g.n();
    let mut pattern = vec![EdgeState::Out; n];
    match class {
        MpTypeClass::Class2 => {
            for (&v, &d) in t {
                pattern[g.position(v).ok_or(Error::UnknownVertex(v))?] = d;
            }
        }
        MpTypeClass::Class1 {
            antichain,
            complement_side,
        } => {
            let mut side_in_s: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
            for (idx, _) in mp.antichains.iter().enumerate() {
                if idx != *antichain {
                    let dec = decompose_pair_cached(mp, cache, *antichain, idx)?;
                    side_in_s.insert(idx, dec.s);
                }
            }
            for i in 0..n {
                let c = mp.class_of[i];
                if c == *antichain {
                    pattern[i] = EdgeState::Incomparable;
                } else {
                    let complement = complement_side.get(&c).copied().unwrap_or(false);
                    let in_s = side_in_s[&c].contains(&g.id_at(i));
                    pattern[i] = if in_s != complement {
                        EdgeState::Out
                    } else {
                        EdgeState::In
                    };
                }
            }
            // demanded edges must already agree with the membership pattern
            for (&v, &d) in t {
                debug_assert_eq!(pattern[g.position(v).unwrap()], d);
            }
        }
    }
    Ok(pattern)
}

/// Adds one fresh vertex realizing the type; unconstrained edges follow the
/// class defaults. The result stays in the parity class.
pub fn realize_mp_type(
    mp: &MultipartiteDigraph,
    t: &MpType,
) -> Result<MultipartiteDigraph, Error> {
    let class = classify_mp_type(mp, t)?.ok_or(Error::InadmissibleType)?;
    let pattern = type_edge_pattern(mp, t, &class)?;
    let g = mp.digraph();
    let fresh = g.ids().last().map_or(0, |&v| v + 1);
    let mut ids = g.ids().to_vec();
    ids.push(fresh);
    let n = g.n();
    let mut out = Digraph::new(ids)?;
    for i in 0..n {
        for j in 0..n {
            if g.arc_pos(i, j) {
                out.set_arc_pos(i, j, true);
            }
        }
    }
    for (i, state) in pattern.iter().enumerate() {
        match state {
            EdgeState::Out => out.set_arc_pos(n, i, true),
            EdgeState::In => out.set_arc_pos(i, n, true),
            EdgeState::Incomparable => {}
        }
    }
    MultipartiteDigraph::new(out)
}

// ---------------------------------------------------------------------------
// Random parity graphs
// ---------------------------------------------------------------------------

/// Random graph in the parity class, generated from random (R, S) choices
/// per antichain pair. Returns the graph and the generating data.
pub fn random_parity_graph<R: Rng>(
    rng: &mut R,
    max_antichains: usize,
    max_size: usize,
) -> (MultipartiteDigraph, Vec<(usize, usize, BTreeSet<VertexId>, BTreeSet<VertexId>)>) {
    let k = rng.gen_range(1..=max_antichains.max(1));
    let sizes: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=max_size.max(1))).collect();
    let mut members: Vec<Vec<VertexId>> = Vec::new();
    let mut next = 0 as VertexId;
    for &s in &sizes {
        members.push((next..next + s as VertexId).collect());
        next += s as VertexId;
    }
    let mut g = Digraph::new((0..next).collect()).unwrap();
    let mut data = Vec::new();
    for a in 0..k {
        for b in (a + 1)..k {
            let r: BTreeSet<VertexId> = members[a]
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            let s: BTreeSet<VertexId> = members[b]
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            for &x in &members[a] {
                for &y in &members[b] {
                    let forward = r.contains(&x) == s.contains(&y);
                    let (i, j) = (g.position(x).unwrap(), g.position(y).unwrap());
                    if forward {
                        g.set_arc_pos(i, j, true);
                    } else {
                        g.set_arc_pos(j, i, true);
                    }
                }
            }
            data.push((a, b, r, s));
        }
    }
    (
        MultipartiteDigraph::new(g).expect("generated graph is multipartite"),
        data,
    )
}

#[cfg(test)]
pub(crate) mod oracle {
    use super::*;

    /// Admissibility oracle: try all one-point extensions of the graph and
    /// report whether any valid class member realizes the demands.
    pub fn admissible_by_extension_search(mp: &MultipartiteDigraph, t: &MpType) -> bool {
        let g = mp.digraph();
        let n = g.n();
        let fresh = g.ids().last().map_or(0, |&v| v + 1);
        'assignment: for code in 0..3usize.pow(n as u32) {
            let mut k = code;
            let mut states = Vec::with_capacity(n);
            for _ in 0..n {
                states.push(match k % 3 {
                    0 => EdgeState::Out,
                    1 => EdgeState::In,
                    _ => EdgeState::Incomparable,
                });
                k /= 3;
            }
            for (&v, &d) in t {
                if states[g.position(v).unwrap()] != d {
                    continue 'assignment;
                }
            }
            let mut ids = g.ids().to_vec();
            ids.push(fresh);
            let mut ext = Digraph::new(ids).unwrap();
            for i in 0..n {
                for j in 0..n {
                    if g.arc_pos(i, j) {
                        ext.set_arc_pos(i, j, true);
                    }
                }
            }
            for (i, s) in states.iter().enumerate() {
                match s {
                    EdgeState::Out => ext.set_arc_pos(n, i, true),
                    EdgeState::In => ext.set_arc_pos(i, n, true),
                    EdgeState::Incomparable => {}
                }
            }
            if let Ok(empty) = MultipartiteDigraph::new(ext) {
                if parity_violation_quartic(&empty).is_none() {
                    return true;
                }
            }
        }
        false
    }
}
