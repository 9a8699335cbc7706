//! Finite relational structures: digraphs, strict partial orders, colored
//! partial orders, linear orders, and vertex maps between them.
//!
//! Vertex ids are opaque integers assigned in creation order; creation order
//! is the tie-breaker wherever a construction asks for an "earliest" witness.
//! Structures are treated as immutable values once built: every operation
//! that grows a structure returns a new one.

pub mod bitmat;
mod dot;
mod json;

pub use dot::{digraph_dot, digraph_dot_with, poset_hasse_dot};
pub use json::AnyStructure;

use crate::error::Error;
use bitmat::BitMatrix;
use std::collections::BTreeMap;

pub type VertexId = u32;

/// State of an ordered vertex pair in a digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeState {
    /// u -> v
    Out,
    /// v -> u
    In,
    /// u ⊥ v
    Incomparable,
}

impl EdgeState {
    pub fn reversed(self) -> EdgeState {
        match self {
            EdgeState::Out => EdgeState::In,
            EdgeState::In => EdgeState::Out,
            EdgeState::Incomparable => EdgeState::Incomparable,
        }
    }
}

/// A violated structure axiom together with a witnessing tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SelfRelated { v: VertexId },
    Antisymmetry { u: VertexId, v: VertexId },
    Transitivity { u: VertexId, v: VertexId, w: VertexId },
    BothDirections { u: VertexId, v: VertexId },
    ColorOutOfRange { v: VertexId, color: u8 },
    NotTotal { u: VertexId, v: VertexId },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::SelfRelated { v } => write!(f, "vertex {v} related to itself"),
            Violation::Antisymmetry { u, v } => write!(f, "antisymmetry fails on ({u},{v})"),
            Violation::Transitivity { u, v, w } => {
                write!(f, "transitivity fails on ({u},{v},{w})")
            }
            Violation::BothDirections { u, v } => {
                write!(f, "both {u}->{v} and {v}->{u} present")
            }
            Violation::ColorOutOfRange { v, color } => {
                write!(f, "vertex {v} has color {color} outside 0..3")
            }
            Violation::NotTotal { u, v } => write!(f, "({u},{v}) incomparable in a linear order"),
        }
    }
}

/// Outcome of a validation pass. Violations are data, not failures.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.pass() {
            write!(f, "pass")
        } else {
            write!(f, "fail:")?;
            for v in &self.violations {
                write!(f, " [{v}]")?;
            }
            Ok(())
        }
    }
}

fn check_ids_sorted(ids: &[VertexId]) -> Result<(), Error> {
    if ids.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "vertex ids must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Common access surface for the brute-force oracles: a structure is a list
/// of vertices, a code per ordered pair, and a code per vertex.
pub trait Relational {
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn ids(&self) -> &[VertexId];
    /// Relation profile of the ordered pair of positions (i, j), i != j.
    fn pair_code(&self, i: usize, j: usize) -> u8;
    /// Unary profile (color) of position i.
    fn vertex_code(&self, _i: usize) -> u32 {
        0
    }
    fn position(&self, v: VertexId) -> Option<usize> {
        self.ids().binary_search(&v).ok()
    }
}

// ---------------------------------------------------------------------------
// Digraph
// ---------------------------------------------------------------------------

/// Finite oriented simple graph: each unordered pair of distinct vertices is
/// in exactly one of the states u->v, v->u, u⊥v.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    ids: Vec<VertexId>,
    arcs: BitMatrix,
}

impl Digraph {
    pub fn new(ids: Vec<VertexId>) -> Result<Self, Error> {
        check_ids_sorted(&ids)?;
        let n = ids.len();
        Ok(Digraph {
            ids,
            arcs: BitMatrix::new(n),
        })
    }

    pub fn from_arcs(ids: Vec<VertexId>, arcs: &[(VertexId, VertexId)]) -> Result<Self, Error> {
        let mut g = Digraph::new(ids)?;
        for &(u, v) in arcs {
            let i = g.position(u).ok_or(Error::UnknownVertex(u))?;
            let j = g.position(v).ok_or(Error::UnknownVertex(v))?;
            g.arcs.set(i, j, true);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }

    pub fn id_at(&self, i: usize) -> VertexId {
        self.ids[i]
    }

    pub fn arc_pos(&self, i: usize, j: usize) -> bool {
        self.arcs.get(i, j)
    }

    pub fn set_arc_pos(&mut self, i: usize, j: usize, value: bool) {
        self.arcs.set(i, j, value);
    }

    pub fn arc(&self, u: VertexId, v: VertexId) -> Result<bool, Error> {
        let i = self.position(u).ok_or(Error::UnknownVertex(u))?;
        let j = self.position(v).ok_or(Error::UnknownVertex(v))?;
        Ok(self.arcs.get(i, j))
    }

    pub fn edge_state_pos(&self, i: usize, j: usize) -> EdgeState {
        if self.arcs.get(i, j) {
            EdgeState::Out
        } else if self.arcs.get(j, i) {
            EdgeState::In
        } else {
            EdgeState::Incomparable
        }
    }

    pub fn edge_state(&self, u: VertexId, v: VertexId) -> Result<EdgeState, Error> {
        let i = self.position(u).ok_or(Error::UnknownVertex(u))?;
        let j = self.position(v).ok_or(Error::UnknownVertex(v))?;
        Ok(self.edge_state_pos(i, j))
    }

    pub fn arcs_iter(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n()).flat_map(move |i| {
            self.arcs
                .row_ones(i)
                .map(move |j| (self.ids[i], self.ids[j]))
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for i in 0..self.n() {
            if self.arcs.get(i, i) {
                report.violations.push(Violation::SelfRelated { v: self.ids[i] });
            }
            for j in (i + 1)..self.n() {
                if self.arcs.get(i, j) && self.arcs.get(j, i) {
                    report.violations.push(Violation::BothDirections {
                        u: self.ids[i],
                        v: self.ids[j],
                    });
                }
            }
        }
        report
    }

    pub fn induced(&self, subset: &[VertexId]) -> Result<Digraph, Error> {
        let positions = subset_positions(&self.ids, subset)?;
        Ok(Digraph {
            ids: positions.iter().map(|&i| self.ids[i]).collect(),
            arcs: self.arcs.restrict(&positions),
        })
    }
}

impl Relational for Digraph {
    fn len(&self) -> usize {
        self.n()
    }
    fn ids(&self) -> &[VertexId] {
        &self.ids
    }
    fn pair_code(&self, i: usize, j: usize) -> u8 {
        match self.edge_state_pos(i, j) {
            EdgeState::Incomparable => 0,
            EdgeState::Out => 1,
            EdgeState::In => 2,
        }
    }
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Digraph(n={}, arcs=[", self.n())?;
        for (k, (u, v)) in self.arcs_iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}->{v}")?;
        }
        write!(f, "])")
    }
}

// ---------------------------------------------------------------------------
// Poset
// ---------------------------------------------------------------------------

/// Finite strict partial order. Incomparability is implicit: u ⊥ v holds
/// when neither u < v nor v < u.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    ids: Vec<VertexId>,
    lt: BitMatrix,
}

impl Poset {
    pub fn new(ids: Vec<VertexId>) -> Result<Self, Error> {
        check_ids_sorted(&ids)?;
        let n = ids.len();
        Ok(Poset {
            ids,
            lt: BitMatrix::new(n),
        })
    }

    /// Builds from explicit `<` pairs without closing; validation reports
    /// any missing transitive pairs.
    pub fn from_relations(ids: Vec<VertexId>, lt: &[(VertexId, VertexId)]) -> Result<Self, Error> {
        let mut p = Poset::new(ids)?;
        for &(u, v) in lt {
            let i = p.position(u).ok_or(Error::UnknownVertex(u))?;
            let j = p.position(v).ok_or(Error::UnknownVertex(v))?;
            p.lt.set(i, j, true);
        }
        Ok(p)
    }

    pub fn from_matrix(ids: Vec<VertexId>, lt: BitMatrix) -> Result<Self, Error> {
        check_ids_sorted(&ids)?;
        if lt.n() != ids.len() {
            return Err(Error::InvalidInput("relation matrix size mismatch".into()));
        }
        Ok(Poset { ids, lt })
    }

    /// Chain v0 < v1 < ... < v(n-1) on ids 0..n.
    pub fn chain(n: usize) -> Poset {
        let mut p = Poset::new((0..n as VertexId).collect()).unwrap();
        for i in 0..n {
            for j in (i + 1)..n {
                p.lt.set(i, j, true);
            }
        }
        p
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::new((0..n as VertexId).collect()).unwrap()
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id_at(&self, i: usize) -> VertexId {
        self.ids[i]
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }

    pub fn lt_pos(&self, i: usize, j: usize) -> bool {
        self.lt.get(i, j)
    }

    pub fn lt(&self, u: VertexId, v: VertexId) -> Result<bool, Error> {
        let i = self.position(u).ok_or(Error::UnknownVertex(u))?;
        let j = self.position(v).ok_or(Error::UnknownVertex(v))?;
        Ok(self.lt.get(i, j))
    }

    pub fn incomparable_pos(&self, i: usize, j: usize) -> bool {
        i != j && !self.lt.get(i, j) && !self.lt.get(j, i)
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.lt
    }

    pub fn relations_iter(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n()).flat_map(move |i| {
            self.lt
                .row_ones(i)
                .map(move |j| (self.ids[i], self.ids[j]))
        })
    }

    pub fn relation_count(&self) -> usize {
        self.lt.count_ones()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.n();
        for i in 0..n {
            if self.lt.get(i, i) {
                report.violations.push(Violation::SelfRelated { v: self.ids[i] });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.lt.get(i, j) && self.lt.get(j, i) {
                    report.violations.push(Violation::Antisymmetry {
                        u: self.ids[i],
                        v: self.ids[j],
                    });
                }
            }
        }
        // i < j and j < k but not i < k
        for i in 0..n {
            for j in self.lt.row_ones(i).collect::<Vec<_>>() {
                if i == j {
                    continue;
                }
                for k in self.lt.row_ones(j).collect::<Vec<_>>() {
                    if k != i && k != j && !self.lt.get(i, k) {
                        report.violations.push(Violation::Transitivity {
                            u: self.ids[i],
                            v: self.ids[j],
                            w: self.ids[k],
                        });
                    }
                }
            }
        }
        report
    }

    pub fn induced(&self, subset: &[VertexId]) -> Result<Poset, Error> {
        let positions = subset_positions(&self.ids, subset)?;
        Ok(Poset {
            ids: positions.iter().map(|&i| self.ids[i]).collect(),
            lt: self.lt.restrict(&positions),
        })
    }

    /// Transitive closure in place (Warshall over bit rows).
    pub fn close_transitively(&mut self) {
        let n = self.n();
        for k in 0..n {
            for i in 0..n {
                if self.lt.get(i, k) {
                    let krow = self.lt.row(k).to_vec();
                    bitmat::union_into(self.lt.row_mut(i), &krow);
                }
            }
        }
    }
}

impl Relational for Poset {
    fn len(&self) -> usize {
        self.n()
    }
    fn ids(&self) -> &[VertexId] {
        &self.ids
    }
    fn pair_code(&self, i: usize, j: usize) -> u8 {
        if self.lt.get(i, j) {
            1
        } else if self.lt.get(j, i) {
            2
        } else {
            0
        }
    }
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poset(n={}, lt=[", self.n())?;
        for (k, (u, v)) in self.relations_iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}<{v}")?;
        }
        write!(f, "])")
    }
}

// ---------------------------------------------------------------------------
// ColoredPoset
// ---------------------------------------------------------------------------

/// Poset with a total color map into {0,1,2}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColoredPoset {
    pub poset: Poset,
    colors: Vec<u8>,
}

impl ColoredPoset {
    pub fn new(poset: Poset, colors: Vec<u8>) -> Result<Self, Error> {
        if colors.len() != poset.n() {
            return Err(Error::InvalidInput(
                "color map must cover every vertex".into(),
            ));
        }
        Ok(ColoredPoset { poset, colors })
    }

    pub fn monochromatic(poset: Poset, color: u8) -> Self {
        let colors = vec![color; poset.n()];
        ColoredPoset { poset, colors }
    }

    pub fn n(&self) -> usize {
        self.poset.n()
    }

    pub fn ids(&self) -> &[VertexId] {
        self.poset.ids()
    }

    pub fn color_pos(&self, i: usize) -> u8 {
        self.colors[i]
    }

    pub fn color(&self, v: VertexId) -> Result<u8, Error> {
        let i = self.poset.position(v).ok_or(Error::UnknownVertex(v))?;
        Ok(self.colors[i])
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = self.poset.validate();
        for (i, &c) in self.colors.iter().enumerate() {
            if c > 2 {
                report.violations.push(Violation::ColorOutOfRange {
                    v: self.poset.id_at(i),
                    color: c,
                });
            }
        }
        report
    }

    pub fn induced(&self, subset: &[VertexId]) -> Result<ColoredPoset, Error> {
        let positions = subset_positions(self.poset.ids(), subset)?;
        let colors = positions.iter().map(|&i| self.colors[i]).collect();
        Ok(ColoredPoset {
            poset: self.poset.induced(subset)?,
            colors,
        })
    }
}

impl Relational for ColoredPoset {
    fn len(&self) -> usize {
        self.n()
    }
    fn ids(&self) -> &[VertexId] {
        self.poset.ids()
    }
    fn pair_code(&self, i: usize, j: usize) -> u8 {
        self.poset.pair_code(i, j)
    }
    fn vertex_code(&self, i: usize) -> u32 {
        self.colors[i] as u32
    }
}

// ---------------------------------------------------------------------------
// LinearOrder
// ---------------------------------------------------------------------------

/// Poset whose order is total on distinct pairs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearOrder {
    poset: Poset,
}

impl LinearOrder {
    pub fn new(poset: Poset) -> Result<Self, Error> {
        let lo = LinearOrder { poset };
        let report = lo.validate();
        if !report.pass() {
            return Err(Error::InvalidStructure(report));
        }
        Ok(lo)
    }

    /// 0 < 1 < ... < n-1.
    pub fn ascending(n: usize) -> LinearOrder {
        LinearOrder {
            poset: Poset::chain(n),
        }
    }

    pub fn n(&self) -> usize {
        self.poset.n()
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn ids(&self) -> &[VertexId] {
        self.poset.ids()
    }

    pub fn lt(&self, u: VertexId, v: VertexId) -> Result<bool, Error> {
        self.poset.lt(u, v)
    }

    /// Vertices sorted ascending by the order.
    pub fn sorted(&self) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = self.poset.ids().to_vec();
        vs.sort_by_key(|&v| {
            let i = self.poset.position(v).unwrap();
            self.poset.matrix().row_ones(i).count()
        });
        vs.reverse();
        vs
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = self.poset.validate();
        for i in 0..self.poset.n() {
            for j in (i + 1)..self.poset.n() {
                if self.poset.incomparable_pos(i, j) {
                    report.violations.push(Violation::NotTotal {
                        u: self.poset.id_at(i),
                        v: self.poset.id_at(j),
                    });
                }
            }
        }
        report
    }
}

impl Relational for LinearOrder {
    fn len(&self) -> usize {
        self.n()
    }
    fn ids(&self) -> &[VertexId] {
        self.poset.ids()
    }
    fn pair_code(&self, i: usize, j: usize) -> u8 {
        self.poset.pair_code(i, j)
    }
}

// ---------------------------------------------------------------------------
// Vertex maps
// ---------------------------------------------------------------------------

/// Partial injective map on vertex ids. Total bijections double as
/// permutations; staged automorphisms stay partial at truncation boundaries.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct VertexMap {
    map: BTreeMap<VertexId, VertexId>,
}

impl VertexMap {
    pub fn new() -> Self {
        VertexMap::default()
    }

    pub fn identity(ids: &[VertexId]) -> Self {
        VertexMap {
            map: ids.iter().map(|&v| (v, v)).collect(),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        VertexMap {
            map: pairs.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, from: VertexId, to: VertexId) {
        self.map.insert(from, to);
    }

    pub fn get(&self, v: VertexId) -> Option<VertexId> {
        self.map.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.map.iter().map(|(&a, &b)| (a, b))
    }

    pub fn domain(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.map.keys().copied()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.map.values().all(|v| seen.insert(*v))
    }

    /// Image of a set, defined only if every element is in the domain.
    pub fn image_of_set(&self, set: &[VertexId]) -> Option<Vec<VertexId>> {
        let mut out = Vec::with_capacity(set.len());
        for &v in set {
            out.push(self.get(v)?);
        }
        out.sort_unstable();
        Some(out)
    }

    pub fn inverse(&self) -> Result<VertexMap, Error> {
        if !self.is_injective() {
            return Err(Error::InvalidInput("map is not injective".into()));
        }
        Ok(VertexMap {
            map: self.map.iter().map(|(&a, &b)| (b, a)).collect(),
        })
    }

    /// self ∘ other where other applies first; defined where both are.
    pub fn compose(&self, other: &VertexMap) -> VertexMap {
        let mut map = BTreeMap::new();
        for (a, b) in other.iter() {
            if let Some(c) = self.get(b) {
                map.insert(a, c);
            }
        }
        VertexMap { map }
    }

    /// Orbit of v under repeated application, stopping at the first
    /// repetition or the first undefined image.
    pub fn orbit(&self, v: VertexId) -> Vec<VertexId> {
        let mut orbit = vec![v];
        let mut cur = v;
        while let Some(next) = self.get(cur) {
            if orbit.contains(&next) {
                break;
            }
            orbit.push(next);
            cur = next;
        }
        orbit
    }
}

/// True iff `map` is a total bijection of `s`'s vertices preserving every
/// relation (and color where present) in both directions.
pub fn is_automorphism<S: Relational>(s: &S, map: &VertexMap) -> Result<bool, Error> {
    let n = s.len();
    if map.len() != n {
        return Err(Error::DomainMismatch);
    }
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    for &v in s.ids() {
        let w = map.get(v).ok_or(Error::DomainMismatch)?;
        perm.push(s.position(w).ok_or(Error::DomainMismatch)?);
    }
    let mut seen = vec![false; n];
    for &p in &perm {
        if seen[p] {
            return Err(Error::DomainMismatch);
        }
        seen[p] = true;
    }
    Ok(preserves_relations(s, &perm))
}

/// Relation preservation on the defined sub-square of a partial injective map.
pub fn is_partial_automorphism<S: Relational>(s: &S, map: &VertexMap) -> Result<bool, Error> {
    if !map.is_injective() {
        return Ok(false);
    }
    let mut dom: Vec<(usize, usize)> = Vec::with_capacity(map.len());
    for (v, w) in map.iter() {
        let i = s.position(v).ok_or(Error::DomainMismatch)?;
        let j = s.position(w).ok_or(Error::DomainMismatch)?;
        dom.push((i, j));
    }
    for &(i, pi) in &dom {
        if s.vertex_code(i) != s.vertex_code(pi) {
            return Ok(false);
        }
        for &(j, pj) in &dom {
            if i != j && s.pair_code(i, j) != s.pair_code(pi, pj) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn preserves_relations<S: Relational>(s: &S, perm: &[usize]) -> bool {
    let n = s.len();
    for i in 0..n {
        if s.vertex_code(i) != s.vertex_code(perm[i]) {
            return false;
        }
        for j in 0..n {
            if i != j && s.pair_code(i, j) != s.pair_code(perm[i], perm[j]) {
                return false;
            }
        }
    }
    true
}

fn subset_positions(ids: &[VertexId], subset: &[VertexId]) -> Result<Vec<usize>, Error> {
    let mut subset: Vec<VertexId> = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    subset
        .iter()
        .map(|&v| ids.binary_search(&v).map_err(|_| Error::UnknownVertex(v)))
        .collect()
}
