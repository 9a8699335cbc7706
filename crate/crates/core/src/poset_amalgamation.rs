//! Strong amalgamation for partial orders.
//!
//! Any family of one-point extensions of a poset P merges into a single
//! partial order by one closure step: relate a_i < a_j exactly when some
//! p in P has a_i < p < a_j (endpoints included via equality). The merge
//! adds no relation between elements of P, so every stage of the staged
//! constructions restricts exactly to the stage before it.

use crate::error::Error;
use crate::structures::bitmat::{self, BitMatrix};
use crate::structures::{Poset, VertexId, VertexMap};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// One-point constraint over a host poset: demanded below < x < above, x ⊥ incomp.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PosetConstraint {
    pub below: BTreeSet<VertexId>,
    pub above: BTreeSet<VertexId>,
    pub incomp: BTreeSet<VertexId>,
}

impl PosetConstraint {
    pub fn new(
        below: impl IntoIterator<Item = VertexId>,
        above: impl IntoIterator<Item = VertexId>,
        incomp: impl IntoIterator<Item = VertexId>,
    ) -> Result<Self, Error> {
        let c = PosetConstraint {
            below: below.into_iter().collect(),
            above: above.into_iter().collect(),
            incomp: incomp.into_iter().collect(),
        };
        if c.below.intersection(&c.above).next().is_some()
            || c.below.intersection(&c.incomp).next().is_some()
            || c.above.intersection(&c.incomp).next().is_some()
        {
            return Err(Error::InvalidInput(
                "constraint sets must be pairwise disjoint".into(),
            ));
        }
        Ok(c)
    }

    /// Realizes a point incomparable to everything.
    pub fn empty() -> Self {
        PosetConstraint {
            below: BTreeSet::new(),
            above: BTreeSet::new(),
            incomp: BTreeSet::new(),
        }
    }

    pub fn params(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.below
            .iter()
            .chain(self.above.iter())
            .chain(self.incomp.iter())
            .copied()
    }

    pub fn param_count(&self) -> usize {
        self.below.len() + self.above.len() + self.incomp.len()
    }

    /// Image under a partial map; `None` when any parameter is undefined.
    pub fn apply_map(&self, map: &VertexMap) -> Option<PosetConstraint> {
        let image = |set: &BTreeSet<VertexId>| -> Option<BTreeSet<VertexId>> {
            set.iter().map(|&v| map.get(v)).collect()
        };
        Some(PosetConstraint {
            below: image(&self.below)?,
            above: image(&self.above)?,
            incomp: image(&self.incomp)?,
        })
    }
}

/// Per-extension data in host positions: the fresh id plus the strict
/// down-set and up-set of the fresh point.
struct ExtensionSets {
    fresh: VertexId,
    down: Vec<u64>,
    up: Vec<u64>,
}

fn extension_sets(base: &Poset, ext: &Poset) -> Result<ExtensionSets, Error> {
    if ext.n() != base.n() + 1 {
        return Err(Error::InvalidExtension(format!(
            "expected {} vertices, got {}",
            base.n() + 1,
            ext.n()
        )));
    }
    let mut fresh = None;
    for &v in ext.ids() {
        if base.position(v).is_none() {
            if fresh.is_some() {
                return Err(Error::InvalidExtension(
                    "more than one fresh vertex".into(),
                ));
            }
            fresh = Some(v);
        }
    }
    let fresh = fresh.ok_or_else(|| Error::InvalidExtension("no fresh vertex".into()))?;
    if !ext.validate().pass() {
        return Err(Error::InvalidExtension(format!(
            "extension with fresh vertex {fresh} is not a partial order"
        )));
    }
    if &ext.induced(base.ids())? != base {
        return Err(Error::InvalidExtension(format!(
            "extension with fresh vertex {fresh} does not restrict to the base"
        )));
    }
    let words = bitmat::words_for(base.n());
    let mut down = vec![0u64; words];
    let mut up = vec![0u64; words];
    let fx = ext.position(fresh).unwrap();
    for (bi, &v) in base.ids().iter().enumerate() {
        let ei = ext.position(v).unwrap();
        if ext.lt_pos(ei, fx) {
            bitmat::bit_set(&mut down, bi);
        }
        if ext.lt_pos(fx, ei) {
            bitmat::bit_set(&mut up, bi);
        }
    }
    Ok(ExtensionSets { fresh, down, up })
}

/// Merges one-point extensions of `base` into one poset via the one-step
/// closure. The result restricts exactly to `base`.
pub fn transitive_closure_amalgam(base: &Poset, extensions: &[Poset]) -> Result<Poset, Error> {
    let sets = extensions
        .iter()
        .map(|e| extension_sets(base, e))
        .collect::<Result<Vec<_>, _>>()?;
    let mut fresh_ids: Vec<VertexId> = sets.iter().map(|s| s.fresh).collect();
    fresh_ids.sort_unstable();
    if fresh_ids.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidExtension(
            "fresh vertices must be pairwise distinct".into(),
        ));
    }
    let result = amalgam_from_sets(base, &sets);
    debug_assert!(result.validate().pass());
    Ok(result)
}

fn amalgam_from_sets(base: &Poset, sets: &[ExtensionSets]) -> Poset {
    let nb = base.n();
    let mut ids: Vec<VertexId> = base.ids().to_vec();
    ids.extend(sets.iter().map(|s| s.fresh));
    ids.sort_unstable();
    let n = ids.len();
    let base_pos: Vec<usize> = base
        .ids()
        .iter()
        .map(|v| ids.binary_search(v).unwrap())
        .collect();
    let ext_pos: Vec<usize> = sets
        .iter()
        .map(|s| ids.binary_search(&s.fresh).unwrap())
        .collect();
    let mut lt = BitMatrix::new(n);
    for i in 0..nb {
        for j in base.matrix().row_ones(i).collect::<Vec<_>>() {
            lt.set(base_pos[i], base_pos[j], true);
        }
    }
    for (e, s) in sets.iter().enumerate() {
        for bi in bitmat::ones(&s.down).collect::<Vec<_>>() {
            lt.set(base_pos[bi], ext_pos[e], true);
        }
        for bi in bitmat::ones(&s.up).collect::<Vec<_>>() {
            lt.set(ext_pos[e], base_pos[bi], true);
        }
    }
    // one closure step: a_i < a_j whenever some p has a_i <= p <= a_j
    for (i, si) in sets.iter().enumerate() {
        for (j, sj) in sets.iter().enumerate() {
            if i != j && bitmat::intersects(&si.up, &sj.down) {
                lt.set(ext_pos[i], ext_pos[j], true);
            }
        }
    }
    Poset::from_matrix(ids, lt).unwrap()
}

/// Strict down-set and up-set the fresh point would acquire, or `None` when
/// the constraint cannot be realized. Positions are relative to `base`.
pub fn constraint_closure_sets(
    base: &Poset,
    c: &PosetConstraint,
) -> Result<Option<(Vec<u64>, Vec<u64>)>, Error> {
    let gt = base.matrix().transposed();
    let resolve = |set: &BTreeSet<VertexId>| -> Result<Vec<usize>, Error> {
        set.iter()
            .map(|&v| base.position(v).ok_or(Error::UnknownVertex(v)))
            .collect()
    };
    let below_pos = resolve(&c.below)?;
    let above_pos = resolve(&c.above)?;
    let incomp_pos = resolve(&c.incomp)?;
    Ok(closure_sets_pos(
        base,
        &gt,
        &below_pos,
        &above_pos,
        &incomp_pos,
    ))
}

/// Position-level closure computation. `gt` must be the transposed relation
/// matrix of `base`; callers enumerating many constraints hoist it.
pub(crate) fn closure_sets_pos(
    base: &Poset,
    gt: &BitMatrix,
    below_pos: &[usize],
    above_pos: &[usize],
    incomp_pos: &[usize],
) -> Option<(Vec<u64>, Vec<u64>)> {
    // every demanded below must sit under every demanded above
    for &a in below_pos {
        for &b in above_pos {
            if !base.lt_pos(a, b) {
                return None;
            }
        }
    }
    let words = bitmat::words_for(base.n());
    let mut down = vec![0u64; words];
    let mut up = vec![0u64; words];
    for &a in below_pos {
        bitmat::bit_set(&mut down, a);
        bitmat::union_into(&mut down, gt.row(a));
    }
    for &b in above_pos {
        bitmat::bit_set(&mut up, b);
        bitmat::union_into(&mut up, base.matrix().row(b));
    }
    // x must stay incomparable to the incomp parameters
    for &ci in incomp_pos {
        if bitmat::bit_get(&down, ci) || bitmat::bit_get(&up, ci) {
            return None;
        }
    }
    debug_assert!(!bitmat::intersects(&down, &up));
    Some((down, up))
}

/// Decision procedure: build the candidate one-point extension, check it is
/// a partial order restricting to `base`, and that the demanded
/// incomparabilities survive the closure.
pub fn is_admissible_constraint(base: &Poset, c: &PosetConstraint) -> Result<bool, Error> {
    match constraint_closure_sets(base, c)? {
        None => Ok(false),
        Some((down, up)) => {
            // cross-check against the slow path in debug builds
            if cfg!(debug_assertions) {
                let ext = build_extension(base, &down, &up);
                debug_assert!(ext.validate().pass());
                debug_assert_eq!(&ext.induced(base.ids()).unwrap(), base);
            }
            let _ = (down, up);
            Ok(true)
        }
    }
}

fn fresh_id(base: &Poset) -> VertexId {
    base.ids().last().map_or(0, |&v| v + 1)
}

fn build_extension(base: &Poset, down: &[u64], up: &[u64]) -> Poset {
    let x = fresh_id(base);
    let nb = base.n();
    let mut ids = base.ids().to_vec();
    ids.push(x);
    let mut lt = BitMatrix::new(nb + 1);
    for i in 0..nb {
        for j in base.matrix().row_ones(i).collect::<Vec<_>>() {
            lt.set(i, j, true);
        }
    }
    for i in bitmat::ones(down).collect::<Vec<_>>() {
        lt.set(i, nb, true);
    }
    for i in bitmat::ones(up).collect::<Vec<_>>() {
        lt.set(nb, i, true);
    }
    Poset::from_matrix(ids, lt).unwrap()
}

/// Adds one fresh vertex realizing the constraint with exactly the demanded
/// relations and their transitive consequences.
pub fn realize_constraint(base: &Poset, c: &PosetConstraint) -> Result<Poset, Error> {
    match constraint_closure_sets(base, c)? {
        None => Err(Error::InadmissibleConstraint),
        Some((down, up)) => Ok(build_extension(base, &down, &up)),
    }
}

#[cfg(test)]
pub(crate) mod oracle {
    use super::*;

    /// Independent closure oracle: union all relations, then close
    /// transitively until fixpoint, then check the axioms.
    pub fn closure_fixpoint_amalgam(base: &Poset, extensions: &[Poset]) -> Option<Poset> {
        let mut ids: Vec<VertexId> = base.ids().to_vec();
        for e in extensions {
            for &v in e.ids() {
                if !ids.contains(&v) {
                    ids.push(v);
                }
            }
        }
        ids.sort_unstable();
        let mut lt = BitMatrix::new(ids.len());
        let mut relate = |u: VertexId, v: VertexId, lt: &mut BitMatrix| {
            let i = ids.binary_search(&u).unwrap();
            let j = ids.binary_search(&v).unwrap();
            lt.set(i, j, true);
        };
        for (u, v) in base.relations_iter() {
            relate(u, v, &mut lt);
        }
        for e in extensions {
            for (u, v) in e.relations_iter() {
                relate(u, v, &mut lt);
            }
        }
        let mut p = Poset::from_matrix(ids, lt).unwrap();
        loop {
            let before = p.relation_count();
            p.close_transitively();
            if p.relation_count() == before {
                break;
            }
        }
        if p.validate().pass() {
            Some(p)
        } else {
            None
        }
    }

    /// Admissibility oracle: try every completion of the fresh point's
    /// relations to the host and ask whether any valid one obeys the demands.
    pub fn admissible_by_enumeration(base: &Poset, c: &PosetConstraint) -> bool {
        let n = base.n();
        let x = fresh_id(base);
        let total = 3usize.pow(n as u32);
        'assignment: for code in 0..total {
            let mut rel = Vec::with_capacity(n);
            let mut k = code;
            for _ in 0..n {
                rel.push(k % 3);
                k /= 3;
            }
            for (i, &v) in base.ids().iter().enumerate() {
                let want = if c.below.contains(&v) {
                    Some(1) // v < x
                } else if c.above.contains(&v) {
                    Some(2) // x < v
                } else if c.incomp.contains(&v) {
                    Some(0)
                } else {
                    None
                };
                if let Some(w) = want {
                    if rel[i] != w {
                        continue 'assignment;
                    }
                }
            }
            let mut ids = base.ids().to_vec();
            ids.push(x);
            ids.sort_unstable();
            let xp = ids.binary_search(&x).unwrap();
            let mut lt = BitMatrix::new(n + 1);
            for (u, v) in base.relations_iter() {
                let i = ids.binary_search(&u).unwrap();
                let j = ids.binary_search(&v).unwrap();
                lt.set(i, j, true);
            }
            for (i, &v) in base.ids().iter().enumerate() {
                let vp = ids.binary_search(&v).unwrap();
                match rel[i] {
                    1 => lt.set(vp, xp, true),
                    2 => lt.set(xp, vp, true),
                    _ => {}
                }
            }
            let p = Poset::from_matrix(ids, lt).unwrap();
            if p.validate().pass() {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{random_one_point_extension, random_poset};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn single(base: &Poset, fresh: VertexId, below: &[VertexId], above: &[VertexId]) -> Poset {
        let c = PosetConstraint::new(below.iter().copied(), above.iter().copied(), []).unwrap();
        let (down, up) = constraint_closure_sets(base, &c).unwrap().unwrap();
        let _ = fresh;
        build_extension(base, &down, &up)
    }

    #[test]
    fn mediated_pair_is_forced() {
        // P = {p}; a0 < p in one extension, p < a1 in the other => a0 < a1
        let base = Poset::antichain(1);
        let e0 = Poset::from_relations(vec![0, 1], &[(1, 0)]).unwrap(); // a0=1, a0 < p
        let e1 = Poset::from_relations(vec![0, 2], &[(0, 2)]).unwrap(); // a1=2, p < a1
        let amalgam = transitive_closure_amalgam(&base, &[e0, e1]).unwrap();
        assert!(amalgam.lt(1, 2).unwrap());
        assert!(!amalgam.lt(2, 1).unwrap());
    }

    #[test]
    fn unmediated_pair_stays_incomparable() {
        let base = Poset::antichain(1);
        let e0 = Poset::from_relations(vec![0, 1], &[]).unwrap();
        let e1 = Poset::from_relations(vec![0, 2], &[]).unwrap();
        let amalgam = transitive_closure_amalgam(&base, &[e0, e1]).unwrap();
        assert!(!amalgam.lt(1, 2).unwrap());
        assert!(!amalgam.lt(2, 1).unwrap());
    }

    #[test]
    fn rejects_invalid_extension() {
        let base = Poset::chain(2);
        // claims 1 < 0, contradicting the base
        let bad = Poset::from_relations(vec![0, 1, 2], &[(1, 0), (0, 2)]).unwrap();
        assert!(matches!(
            transitive_closure_amalgam(&base, &[bad]),
            Err(Error::InvalidExtension(_))
        ));
        let two_fresh = Poset::from_relations(vec![0, 1, 2, 3], &[(0, 1)]).unwrap();
        assert!(transitive_closure_amalgam(&base, &[two_fresh]).is_err());
    }

    #[test]
    fn rejects_duplicate_fresh_vertex() {
        let base = Poset::antichain(1);
        let e = Poset::from_relations(vec![0, 1], &[]).unwrap();
        assert!(matches!(
            transitive_closure_amalgam(&base, &[e.clone(), e]),
            Err(Error::InvalidExtension(_))
        ));
    }

    #[test]
    fn random_amalgams_match_fixpoint_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..300 {
            let n = rng.gen_range(0..=6);
            let base = random_poset(&mut rng, n, 0.4);
            let k = rng.gen_range(1..=4);
            let exts: Vec<Poset> = (0..k)
                .map(|i| random_one_point_extension(&mut rng, &base, (n + 10 + i) as VertexId))
                .collect();
            let amalgam = transitive_closure_amalgam(&base, &exts).unwrap();
            assert!(amalgam.validate().pass());
            assert_eq!(&amalgam.induced(base.ids()).unwrap(), &base);
            let oracle = oracle::closure_fixpoint_amalgam(&base, &exts)
                .expect("oracle closure must produce a poset");
            assert_eq!(amalgam, oracle, "one-step closure differs from fixpoint");
        }
    }

    #[test]
    fn one_step_suffices() {
        // re-closing the one-step result finds nothing new
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.gen_range(0..=5);
            let base = random_poset(&mut rng, n, 0.5);
            let exts: Vec<Poset> = (0..3)
                .map(|i| random_one_point_extension(&mut rng, &base, (n + 20 + i) as VertexId))
                .collect();
            let amalgam = transitive_closure_amalgam(&base, &exts).unwrap();
            let mut reclosed = amalgam.clone();
            reclosed.close_transitively();
            assert_eq!(amalgam, reclosed);
        }
    }

    #[test]
    fn antisymmetry_exhaustive_small() {
        // all posets with up to 3 points, all pairs of one-point extensions
        for n in 0..=3usize {
            for base in crate::analysis::enumerate_posets(n).unwrap() {
                let exts = all_one_point_extensions(&base, n as VertexId + 10);
                let more = all_one_point_extensions(&base, n as VertexId + 50);
                for e1 in &exts {
                    for e2 in &more {
                        let amalgam =
                            transitive_closure_amalgam(&base, &[e1.clone(), e2.clone()]).unwrap();
                        let report = amalgam.validate();
                        assert!(report.pass(), "violation: {report}");
                    }
                }
            }
        }
    }

    fn all_one_point_extensions(base: &Poset, fresh: VertexId) -> Vec<Poset> {
        let n = base.n();
        let mut out = Vec::new();
        for code in 0..3usize.pow(n as u32) {
            let mut k = code;
            let mut below = Vec::new();
            let mut above = Vec::new();
            for &v in base.ids() {
                match k % 3 {
                    1 => below.push(v),
                    2 => above.push(v),
                    _ => {}
                }
                k /= 3;
            }
            let c = PosetConstraint::new(below, above, []).unwrap();
            if let Some((down, up)) = constraint_closure_sets(base, &c).unwrap() {
                // keep only exact assignments (closure may add more)
                let ext = {
                    let mut ids = base.ids().to_vec();
                    ids.push(fresh);
                    ids.sort_unstable();
                    let xp = ids.binary_search(&fresh).unwrap();
                    let mut lt = BitMatrix::new(n + 1);
                    for (u, v) in base.relations_iter() {
                        let i = ids.binary_search(&u).unwrap();
                        let j = ids.binary_search(&v).unwrap();
                        lt.set(i, j, true);
                    }
                    for i in bitmat::ones(&down).collect::<Vec<_>>() {
                        let vp = ids.binary_search(&base.id_at(i)).unwrap();
                        lt.set(vp, xp, true);
                    }
                    for i in bitmat::ones(&up).collect::<Vec<_>>() {
                        let vp = ids.binary_search(&base.id_at(i)).unwrap();
                        lt.set(xp, vp, true);
                    }
                    Poset::from_matrix(ids, lt).unwrap()
                };
                if ext.validate().pass() && !out.contains(&ext) {
                    out.push(ext);
                }
            }
        }
        out
    }

    #[test]
    fn admissibility_examples() {
        let chain = Poset::chain(2);
        let between = PosetConstraint::new([0], [1], []).unwrap();
        assert!(is_admissible_constraint(&chain, &between).unwrap());
        let reversed = PosetConstraint::new([1], [0], []).unwrap();
        assert!(!is_admissible_constraint(&chain, &reversed).unwrap());
        let above_incomp = PosetConstraint::new([0], [], [1]).unwrap();
        assert!(is_admissible_constraint(&chain, &above_incomp).unwrap());
    }

    #[test]
    fn admissibility_matches_enumeration_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let base = random_poset(&mut rng, n, 0.5);
            // random disjoint role assignment
            let mut below = Vec::new();
            let mut above = Vec::new();
            let mut incomp = Vec::new();
            for &v in base.ids() {
                match rng.gen_range(0..5) {
                    0 => below.push(v),
                    1 => above.push(v),
                    2 => incomp.push(v),
                    _ => {}
                }
            }
            let c = PosetConstraint::new(below, above, incomp).unwrap();
            assert_eq!(
                is_admissible_constraint(&base, &c).unwrap(),
                oracle::admissible_by_enumeration(&base, &c),
                "admissibility mismatch on {base:?} with {c:?}"
            );
        }
    }

    #[test]
    fn realize_examples() {
        // antichain {a,b}: a < x, x ⊥ b
        let base = Poset::antichain(2);
        let c = PosetConstraint::new([0], [], [1]).unwrap();
        let p = realize_constraint(&base, &c).unwrap();
        let x = 2;
        assert!(p.lt(0, x).unwrap());
        assert!(!p.lt(1, x).unwrap() && !p.lt(x, 1).unwrap());

        // chain a<b<c: a < x < c, x ⊥ b
        let base = Poset::chain(3);
        let c = PosetConstraint::new([0], [2], [1]).unwrap();
        let p = realize_constraint(&base, &c).unwrap();
        assert!(p.validate().pass());
        let x = 3;
        assert!(p.lt(0, x).unwrap() && p.lt(x, 2).unwrap());
        assert!(!p.lt(1, x).unwrap() && !p.lt(x, 1).unwrap());

        // chain a<b: a < x < b gives the 3-chain
        let base = Poset::chain(2);
        let c = PosetConstraint::new([0], [1], []).unwrap();
        let p = realize_constraint(&base, &c).unwrap();
        assert!(p.lt(0, 2).unwrap() && p.lt(2, 1).unwrap());
    }

    #[test]
    fn realize_rejects_inadmissible() {
        let chain = Poset::chain(2);
        let c = PosetConstraint::new([1], [0], []).unwrap();
        assert!(matches!(
            realize_constraint(&chain, &c),
            Err(Error::InadmissibleConstraint)
        ));
    }

    #[test]
    fn empty_constraint_realizes_isolated_point() {
        let base = Poset::chain(3);
        let p = realize_constraint(&base, &PosetConstraint::empty()).unwrap();
        let x = 3;
        for &v in base.ids() {
            assert!(!p.lt(v, x).unwrap() && !p.lt(x, v).unwrap());
        }
    }

    #[test]
    fn realization_is_minimal() {
        // dropping any forced (non-demanded) pair and re-closing restores it
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.gen_range(1..=5);
            let base = random_poset(&mut rng, n, 0.5);
            let mut below = Vec::new();
            let mut above = Vec::new();
            for &v in base.ids() {
                match rng.gen_range(0..4) {
                    0 => below.push(v),
                    1 => above.push(v),
                    _ => {}
                }
            }
            let c = match PosetConstraint::new(below, above, []) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let realized = match realize_constraint(&base, &c) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let x = fresh_id(&base);
            let xp = realized.position(x).unwrap();
            for i in 0..realized.n() {
                if i == xp {
                    continue;
                }
                let v = realized.id_at(i);
                let demanded = c.below.contains(&v) || c.above.contains(&v);
                if demanded {
                    continue;
                }
                for (a, b) in [(i, xp), (xp, i)] {
                    if realized.lt_pos(a, b) {
                        let mut lt = realized.matrix().clone();
                        lt.set(a, b, false);
                        let mut q = Poset::from_matrix(realized.ids().to_vec(), lt).unwrap();
                        q.close_transitively();
                        assert_eq!(q, realized, "forced pair was not forced");
                    }
                }
            }
        }
    }

    #[test]
    fn constraint_serialization_shape() {
        let c = PosetConstraint::new([1], [2, 3], [5]).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"below":[1],"above":[2,3],"incomp":[5]}"#);
        let back: PosetConstraint = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
