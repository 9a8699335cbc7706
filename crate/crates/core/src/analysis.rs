//! Brute-force oracles: isomorphism and conjugacy search by backtracking,
//! exhaustive poset enumeration up to isomorphism, and seeded random
//! structure generation for the randomized suites.
//!
//! Correctness is anchored to the backtracking searches; the relation-profile
//! invariants only prune and bucket, they never decide.

use crate::error::Error;
use crate::structures::{Relational, VertexId, VertexMap};
use crate::structures::bitmat::BitMatrix;
use crate::structures::Poset;
use rand::Rng;
use std::collections::BTreeMap;

/// Default cap on |s| for the backtracking oracles.
pub const DEFAULT_SIZE_BOUND: usize = 10;

/// Relation profile of one vertex: its unary code plus, for every pair code,
/// how many other vertices it relates to with that code.
fn profile<S: Relational>(s: &S, i: usize) -> (u32, BTreeMap<u8, usize>) {
    let mut counts = BTreeMap::new();
    for j in 0..s.len() {
        if j != i {
            *counts.entry(s.pair_code(i, j)).or_insert(0) += 1;
        }
    }
    (s.vertex_code(i), counts)
}

fn profiles<S: Relational>(s: &S) -> Vec<(u32, BTreeMap<u8, usize>)> {
    (0..s.len()).map(|i| profile(s, i)).collect()
}

pub fn brute_force_isomorphism<A: Relational, B: Relational>(
    a: &A,
    b: &B,
) -> Result<Option<VertexMap>, Error> {
    brute_force_isomorphism_bounded(a, b, DEFAULT_SIZE_BOUND)
}

/// Backtracking isomorphism search with profile pruning. Returns a witness
/// map on vertex ids, or `None`.
pub fn brute_force_isomorphism_bounded<A: Relational, B: Relational>(
    a: &A,
    b: &B,
    bound: usize,
) -> Result<Option<VertexMap>, Error> {
    if a.len() > bound || b.len() > bound {
        return Err(Error::SizeBound(format!(
            "isomorphism oracle limited to {bound} vertices, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() != b.len() {
        return Ok(None);
    }
    let pa = profiles(a);
    let pb = profiles(b);
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return Ok(None);
    }
    let n = a.len();
    let mut map_ab: Vec<Option<usize>> = vec![None; n];
    let mut used_b = vec![false; n];
    if !extend_iso(a, b, &pa, &pb, &mut map_ab, &mut used_b, 0) {
        return Ok(None);
    }
    Ok(Some(VertexMap::from_pairs((0..n).map(|i| {
        (a.ids()[i], b.ids()[map_ab[i].unwrap()])
    }))))
}

fn extend_iso<A: Relational, B: Relational>(
    a: &A,
    b: &B,
    pa: &[(u32, BTreeMap<u8, usize>)],
    pb: &[(u32, BTreeMap<u8, usize>)],
    map_ab: &mut Vec<Option<usize>>,
    used_b: &mut Vec<bool>,
    i: usize,
) -> bool {
    let n = a.len();
    if i == n {
        return true;
    }
    'cand: for j in 0..n {
        if used_b[j] || pa[i] != pb[j] {
            continue;
        }
        for k in 0..i {
            let jk = map_ab[k].unwrap();
            if a.pair_code(i, k) != b.pair_code(j, jk) || a.pair_code(k, i) != b.pair_code(jk, j) {
                continue 'cand;
            }
        }
        map_ab[i] = Some(j);
        used_b[j] = true;
        if extend_iso(a, b, pa, pb, map_ab, used_b, i + 1) {
            return true;
        }
        map_ab[i] = None;
        used_b[j] = false;
    }
    false
}

pub fn brute_force_conjugacy<A: Relational, B: Relational>(
    a: &A,
    phi_a: &VertexMap,
    b: &B,
    phi_b: &VertexMap,
) -> Result<Option<VertexMap>, Error> {
    brute_force_conjugacy_bounded(a, phi_a, b, phi_b, DEFAULT_SIZE_BOUND)
}

/// Searches for an isomorphism α with α∘φ_a = φ_b∘α.
///
/// φ may be partial (truncation boundaries); α must then carry dom(φ_a) onto
/// dom(φ_b) and satisfy the conjugation equation wherever φ_a is defined.
pub fn brute_force_conjugacy_bounded<A: Relational, B: Relational>(
    a: &A,
    phi_a: &VertexMap,
    b: &B,
    phi_b: &VertexMap,
    bound: usize,
) -> Result<Option<VertexMap>, Error> {
    if a.len() > bound || b.len() > bound {
        return Err(Error::SizeBound(format!(
            "conjugacy oracle limited to {bound} vertices, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    for (s, phi, label) in [(true, phi_a, "first"), (false, phi_b, "second")] {
        let ok = if s {
            crate::structures::is_partial_automorphism(a, phi)?
        } else {
            crate::structures::is_partial_automorphism(b, phi)?
        };
        if !ok {
            return Err(Error::NotIsomorphism(format!(
                "{label} map is not a (partial) automorphism of its structure"
            )));
        }
    }
    if a.len() != b.len() || phi_a.len() != phi_b.len() {
        return Ok(None);
    }
    let n = a.len();
    // positional images, None where undefined
    let fa = positional_map(a, phi_a)?;
    let fb = positional_map(b, phi_b)?;
    let pa = profiles(a);
    let pb = profiles(b);
    let mut map_ab = vec![None; n];
    let mut map_ba = vec![None; n];
    if !extend_conj(a, b, &fa, &fb, &pa, &pb, &mut map_ab, &mut map_ba) {
        return Ok(None);
    }
    Ok(Some(VertexMap::from_pairs((0..n).map(|i| {
        (a.ids()[i], b.ids()[map_ab[i].unwrap()])
    }))))
}

fn positional_map<S: Relational>(s: &S, phi: &VertexMap) -> Result<Vec<Option<usize>>, Error> {
    let mut out = vec![None; s.len()];
    for (v, w) in phi.iter() {
        let i = s.position(v).ok_or(Error::DomainMismatch)?;
        let j = s.position(w).ok_or(Error::DomainMismatch)?;
        out[i] = Some(j);
    }
    Ok(out)
}

fn extend_conj<A: Relational, B: Relational>(
    a: &A,
    b: &B,
    fa: &[Option<usize>],
    fb: &[Option<usize>],
    pa: &[(u32, BTreeMap<u8, usize>)],
    pb: &[(u32, BTreeMap<u8, usize>)],
    map_ab: &mut Vec<Option<usize>>,
    map_ba: &mut Vec<Option<usize>>,
) -> bool {
    let n = a.len();
    let i = match (0..n).find(|&i| map_ab[i].is_none()) {
        Some(i) => i,
        None => return true,
    };
    'cand: for j in 0..n {
        if map_ba[j].is_some() || pa[i] != pb[j] {
            continue;
        }
        // propagate the conjugation equation along φ-chains from (i, j)
        let mut chosen: Vec<(usize, usize)> = Vec::new();
        let mut queue = vec![(i, j)];
        let mut ok = true;
        while let Some((x, y)) = queue.pop() {
            match map_ab[x] {
                Some(y0) => {
                    if y0 != y {
                        ok = false;
                        break;
                    }
                    continue;
                }
                None => {
                    if map_ba[y].is_some() || pa[x] != pb[y] {
                        ok = false;
                        break;
                    }
                    // must respect definedness of φ on both sides
                    if fa[x].is_some() != fb[y].is_some() {
                        ok = false;
                        break;
                    }
                    // relations against everything already mapped
                    for k in 0..n {
                        if let Some(mk) = map_ab[k] {
                            if k != x
                                && (a.pair_code(x, k) != b.pair_code(y, mk)
                                    || a.pair_code(k, x) != b.pair_code(mk, y))
                            {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if !ok {
                        break;
                    }
                    map_ab[x] = Some(y);
                    map_ba[y] = Some(x);
                    chosen.push((x, y));
                    if let (Some(fx), Some(fy)) = (fa[x], fb[y]) {
                        queue.push((fx, fy));
                    }
                }
            }
        }
        if ok && extend_conj(a, b, fa, fb, pa, pb, map_ab, map_ba) {
            return true;
        }
        for (x, y) in chosen {
            map_ab[x] = None;
            map_ba[y] = None;
        }
        if !ok {
            continue 'cand;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Poset enumeration
// ---------------------------------------------------------------------------

pub const ENUMERATION_BOUND: usize = 6;

/// All posets on n points up to isomorphism, n <= 6.
///
/// Labeled posets are generated column by column (each new vertex against all
/// earlier ones, each pair in one of the states <, >, ⊥) with transitivity
/// pruning per completed column, then deduplicated through the isomorphism
/// oracle. Profile buckets keep the pairwise comparisons down; the oracle
/// alone decides equivalence.
pub fn enumerate_posets(n: usize) -> Result<Vec<Poset>, Error> {
    if n > ENUMERATION_BOUND {
        return Err(Error::SizeBound(format!(
            "poset enumeration limited to {ENUMERATION_BOUND} points, got {n}"
        )));
    }
    let mut reps: BTreeMap<Vec<(u32, Vec<(u8, usize)>)>, Vec<Poset>> = BTreeMap::new();
    let mut count = 0usize;
    for_each_labeled_poset(n, &mut |lt| {
        count += 1;
        let p = Poset::from_matrix((0..n as VertexId).collect(), lt.clone()).unwrap();
        let mut key: Vec<(u32, Vec<(u8, usize)>)> = (0..n)
            .map(|i| {
                let (c, counts) = profile(&p, i);
                (c, counts.into_iter().collect())
            })
            .collect();
        key.sort();
        let bucket = reps.entry(key).or_default();
        let known = bucket
            .iter()
            .any(|q| brute_force_isomorphism(q, &p).unwrap().is_some());
        if !known {
            bucket.push(p);
        }
    });
    let _ = count;
    let mut out: Vec<Poset> = reps.into_values().flatten().collect();
    out.sort_by_key(|p| (p.relation_count(), encode(p)));
    Ok(out)
}

fn encode(p: &Poset) -> Vec<(VertexId, VertexId)> {
    p.relations_iter().collect()
}

/// Visits every labeled poset on 0..n exactly once.
pub fn for_each_labeled_poset(n: usize, visit: &mut impl FnMut(&BitMatrix)) {
    let mut lt = BitMatrix::new(n);
    column_dfs(n, 1, &mut lt, visit);
}

fn column_dfs(n: usize, j: usize, lt: &mut BitMatrix, visit: &mut impl FnMut(&BitMatrix)) {
    if j >= n {
        if n == 0 || j == n.max(1) {
            visit(lt);
        }
        return;
    }
    fill_column(n, j, 0, lt, visit);
}

fn fill_column(n: usize, j: usize, i: usize, lt: &mut BitMatrix, visit: &mut impl FnMut(&BitMatrix)) {
    if i == j {
        if column_consistent(j, lt) {
            column_dfs(n, j + 1, lt, visit);
        }
        return;
    }
    // i ⊥ j
    fill_column(n, j, i + 1, lt, visit);
    // i < j
    lt.set(i, j, true);
    fill_column(n, j, i + 1, lt, visit);
    lt.set(i, j, false);
    // j < i
    lt.set(j, i, true);
    fill_column(n, j, i + 1, lt, visit);
    lt.set(j, i, false);
}

/// Transitivity of every triple inside 0..=j that involves j.
fn column_consistent(j: usize, lt: &BitMatrix) -> bool {
    for a in 0..j {
        for b in 0..j {
            if a == b {
                continue;
            }
            if lt.get(a, b) && lt.get(b, j) && !lt.get(a, j) {
                return false;
            }
            if lt.get(a, j) && lt.get(j, b) && !lt.get(a, b) {
                return false;
            }
            if lt.get(j, a) && lt.get(a, b) && !lt.get(j, b) {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Random structures
// ---------------------------------------------------------------------------

/// Random poset: vertices get random heights, each respecting pair is
/// related with probability `p`, then the result is closed transitively.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, p: f64) -> Poset {
    let heights: Vec<u32> = (0..n).map(|_| rng.gen_range(0..n.max(1) as u32)).collect();
    let mut poset = Poset::antichain(n);
    let mut lt = BitMatrix::new(n);
    for i in 0..n {
        for j in 0..n {
            if heights[i] < heights[j] && rng.gen_bool(p) {
                lt.set(i, j, true);
            }
        }
    }
    poset = Poset::from_matrix(poset.ids().to_vec(), lt).unwrap();
    poset.close_transitively();
    poset
}

/// One-point extension of `p`: a fresh vertex whose strict down-set and
/// up-set are sampled and rejected until they are order-consistent, so the
/// extension never touches relations inside `p`.
pub fn random_one_point_extension<R: Rng>(rng: &mut R, p: &Poset, fresh: VertexId) -> Poset {
    assert!(p.ids().binary_search(&fresh).is_err());
    let n = p.n();
    let (down, up) = loop {
        let seed_down: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
        let seed_up: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
        let down: Vec<usize> = (0..n)
            .filter(|&v| seed_down.iter().any(|&s| v == s || p.lt_pos(v, s)))
            .collect();
        let up: Vec<usize> = (0..n)
            .filter(|&v| seed_up.iter().any(|&s| v == s || p.lt_pos(s, v)))
            .collect();
        let consistent = down.iter().all(|&d| {
            up.iter().all(|&u| d != u && p.lt_pos(d, u))
        });
        if consistent {
            break (down, up);
        }
    };
    let mut ids = p.ids().to_vec();
    ids.push(fresh);
    ids.sort_unstable();
    let fresh_pos = ids.binary_search(&fresh).unwrap();
    let remap: Vec<usize> = p
        .ids()
        .iter()
        .map(|v| ids.binary_search(v).unwrap())
        .collect();
    let mut lt = BitMatrix::new(n + 1);
    for i in 0..n {
        for j in 0..n {
            if p.lt_pos(i, j) {
                lt.set(remap[i], remap[j], true);
            }
        }
    }
    for &d in &down {
        lt.set(remap[d], fresh_pos, true);
    }
    for &u in &up {
        lt.set(fresh_pos, remap[u], true);
    }
    Poset::from_matrix(ids, lt).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::Digraph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chains_are_isomorphic() {
        let a = Poset::chain(3);
        let b = Poset::from_relations(vec![5, 6, 9], &[(9, 6), (6, 5), (9, 5)]).unwrap();
        let iso = brute_force_isomorphism(&a, &b).unwrap().unwrap();
        assert_eq!(iso.get(0), Some(9));
        assert_eq!(iso.get(2), Some(5));
    }

    #[test]
    fn chain_vs_antichain() {
        assert!(brute_force_isomorphism(&Poset::chain(3), &Poset::antichain(3))
            .unwrap()
            .is_none());
    }

    #[test]
    fn size_bound_enforced() {
        let a = Poset::antichain(11);
        assert!(matches!(
            brute_force_isomorphism(&a, &a),
            Err(Error::SizeBound(_))
        ));
    }

    #[test]
    fn conjugacy_identity_vs_identity() {
        let a = Poset::chain(3);
        let id = VertexMap::identity(a.ids());
        let alpha = brute_force_conjugacy(&a, &id, &a, &id).unwrap();
        assert!(alpha.is_some());
    }

    #[test]
    fn rotation_not_conjugate_to_identity() {
        let g = Digraph::from_arcs(vec![0, 1, 2], &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let rot = VertexMap::from_pairs([(0, 1), (1, 2), (2, 0)]);
        let id = VertexMap::identity(g.ids());
        assert!(brute_force_conjugacy(&g, &rot, &g, &id).unwrap().is_none());
        // but conjugate to itself
        assert!(brute_force_conjugacy(&g, &rot, &g, &rot).unwrap().is_some());
    }

    #[test]
    fn conjugacy_rejects_non_automorphism() {
        let p = Poset::chain(2);
        let swap = VertexMap::from_pairs([(0, 1), (1, 0)]);
        assert!(matches!(
            brute_force_conjugacy(&p, &swap, &p, &swap),
            Err(Error::NotIsomorphism(_))
        ));
    }

    #[test]
    fn conjugate_pairs_are_isomorphic() {
        // conjugacy success implies isomorphism success
        let g = Digraph::from_arcs(vec![0, 1, 2], &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let rot = VertexMap::from_pairs([(0, 1), (1, 2), (2, 0)]);
        if brute_force_conjugacy(&g, &rot, &g, &rot).unwrap().is_some() {
            assert!(brute_force_isomorphism(&g, &g).unwrap().is_some());
        }
    }

    #[test]
    fn enumerate_small_counts() {
        assert_eq!(enumerate_posets(1).unwrap().len(), 1);
        assert_eq!(enumerate_posets(2).unwrap().len(), 2);
        assert_eq!(enumerate_posets(3).unwrap().len(), 5);
        assert_eq!(enumerate_posets(4).unwrap().len(), 16);
    }

    #[test]
    fn enumerate_matches_matrix_oracle() {
        // independent oracle: all 3^C(n,2) assignments, axiom filter, iso dedup
        for n in 0..=4usize {
            let mut classes: Vec<Poset> = Vec::new();
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                .collect();
            let total = 3usize.pow(pairs.len() as u32);
            for code in 0..total {
                let mut c = code;
                let mut lt = BitMatrix::new(n);
                for &(i, j) in &pairs {
                    match c % 3 {
                        1 => lt.set(i, j, true),
                        2 => lt.set(j, i, true),
                        _ => {}
                    }
                    c /= 3;
                }
                let p = Poset::from_matrix((0..n as VertexId).collect(), lt).unwrap();
                if !p.validate().pass() {
                    continue;
                }
                if !classes
                    .iter()
                    .any(|q| brute_force_isomorphism(q, &p).unwrap().is_some())
                {
                    classes.push(p);
                }
            }
            assert_eq!(
                enumerate_posets(n).unwrap().len(),
                classes.len(),
                "count mismatch at n={n}"
            );
        }
    }

    #[test]
    fn enumerated_posets_are_valid_and_distinct() {
        let ps = enumerate_posets(4).unwrap();
        for p in &ps {
            assert!(p.validate().pass());
        }
        for (i, p) in ps.iter().enumerate() {
            for q in ps.iter().skip(i + 1) {
                assert!(brute_force_isomorphism(p, q).unwrap().is_none());
            }
        }
    }

    #[test]
    fn random_posets_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(0..7);
            let p = random_poset(&mut rng, n, 0.4);
            assert!(p.validate().pass());
        }
    }

    #[test]
    fn random_extension_is_one_point_extension() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..6);
            let p = random_poset(&mut rng, n, 0.4);
            let fresh = n as VertexId + 10;
            let q = random_one_point_extension(&mut rng, &p, fresh);
            assert!(q.validate().pass());
            assert_eq!(q.n(), p.n() + 1);
            assert_eq!(&q.induced(p.ids()).unwrap(), &p);
        }
    }
}
