//! Finite posets: construction, order queries, Möbius function, rank
//! structure, and canonical forms for isomorphism testing.
//!
//! A [`Poset`] stores the full order relation as two dense bit matrices (one
//! row per element for the up-set and the down-set), plus the Hasse diagram
//! (cover relation) derived once at construction time.  All query methods are
//! O(1) or O(n/64) afterwards.

use crate::bits::Bits;
use std::collections::HashMap;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PosetError {
    #[error("element index {index} out of range for poset of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("self-loop at element {0}")]
    SelfLoop(usize),
    #[error("relation contains a cycle through elements {0:?}")]
    Cycle(Vec<usize>),
    #[error("elements {0} and {1} are incomparable")]
    NotComparable(usize, usize),
    #[error("invalid linear extension: {0}")]
    InvalidExtension(String),
    #[error("invalid block constraint: {0}")]
    InvalidBlocks(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

/// A finite partially ordered set on elements `0..n`.
pub struct Poset {
    n: usize,
    covers: Vec<(usize, usize)>,
    up_covers: Vec<Vec<usize>>,
    down_covers: Vec<Vec<usize>>,
    /// `up[x]` is the set `{y : x <= y}` (includes `x`).
    up: Vec<Bits>,
    /// `down[x]` is the set `{y : y <= x}` (includes `x`).
    down: Vec<Bits>,
    names: Option<Vec<String>>,
    mobius_cache: OnceLock<Vec<i64>>,
}

impl Clone for Poset {
    fn clone(&self) -> Self {
        Poset {
            n: self.n,
            covers: self.covers.clone(),
            up_covers: self.up_covers.clone(),
            down_covers: self.down_covers.clone(),
            up: self.up.clone(),
            down: self.down.clone(),
            names: self.names.clone(),
            mobius_cache: OnceLock::new(),
        }
    }
}

impl Poset {
    /// Builds a poset from strict relation pairs `(a, b)` meaning `a < b`.
    ///
    /// The pairs may be any acyclic relation, not necessarily reduced; the
    /// reflexive-transitive closure is computed and the stored cover relation
    /// is the transitive reduction.  Self-loops and cycles are rejected, the
    /// latter with a witness cycle in the error.
    pub fn from_covers(n: usize, relations: &[(usize, usize)]) -> Result<Poset, PosetError> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in relations {
            for ix in [a, b] {
                if ix >= n {
                    return Err(PosetError::IndexOutOfRange { index: ix, n });
                }
            }
            if a == b {
                return Err(PosetError::SelfLoop(a));
            }
            adj[a].push(b);
        }
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
        }

        // Kahn topological sort; leftover nodes witness a cycle.
        let mut indeg = vec![0usize; n];
        for row in &adj {
            for &b in row {
                indeg[b] += 1;
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = queue.pop() {
            topo.push(v);
            for &b in &adj[v] {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    queue.push(b);
                }
            }
        }
        if topo.len() != n {
            return Err(PosetError::Cycle(witness_cycle(&adj, &indeg)));
        }

        // Closure in reverse topological order: up[x] = {x} ∪ ⋃ up[succ].
        let mut up: Vec<Bits> = (0..n)
            .map(|x| Bits::from_elems(n, [x]))
            .collect();
        for &v in topo.iter().rev() {
            let mut acc = up[v].clone();
            for &b in &adj[v] {
                let succ = up[b].clone();
                acc.union_with(&succ);
            }
            up[v] = acc;
        }
        let mut down: Vec<Bits> = vec![Bits::new(n); n];
        for x in 0..n {
            for y in up[x].iter() {
                down[y].insert(x);
            }
        }

        // Transitive reduction: (a, b) is a cover iff the interval [a, b]
        // contains exactly a and b.
        let mut covers = Vec::new();
        for a in 0..n {
            for b in up[a].iter() {
                if b != a && up[a].intersection(&down[b]).count() == 2 {
                    covers.push((a, b));
                }
            }
        }
        covers.sort_unstable();
        let mut up_covers: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut down_covers: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &covers {
            up_covers[a].push(b);
            down_covers[b].push(a);
        }

        Ok(Poset {
            n,
            covers,
            up_covers,
            down_covers,
            up,
            down,
            names: None,
            mobius_cache: OnceLock::new(),
        })
    }

    /// Attaches display names to the elements.
    pub fn with_names(mut self, names: Vec<String>) -> Result<Poset, PosetError> {
        if names.len() != self.n {
            return Err(PosetError::InvalidInput(format!(
                "got {} names for {} elements",
                names.len(),
                self.n
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display name of an element (its index if no names were set).
    pub fn name(&self, x: usize) -> String {
        match &self.names {
            Some(ns) => ns[x].clone(),
            None => x.to_string(),
        }
    }

    fn check_index(&self, x: usize) -> Result<(), PosetError> {
        if x < self.n {
            Ok(())
        } else {
            Err(PosetError::IndexOutOfRange { index: x, n: self.n })
        }
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Cover pairs `(a, b)` with `a` covered by `b`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Whether `y` covers `x`.
    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        self.up_covers[x].contains(&y)
    }

    pub fn up_covers(&self, x: usize) -> &[usize] {
        &self.up_covers[x]
    }

    pub fn down_covers(&self, x: usize) -> &[usize] {
        &self.down_covers[x]
    }

    /// The up-set `{y : x <= y}` as a bit set.
    pub fn up_set(&self, x: usize) -> &Bits {
        &self.up[x]
    }

    /// The down-set `{y : y <= x}` as a bit set.
    pub fn down_set(&self, x: usize) -> &Bits {
        &self.down[x]
    }

    /// Union of the up-sets of the given elements.
    pub fn up_set_of<I: IntoIterator<Item = usize>>(&self, elems: I) -> Bits {
        let mut acc = Bits::new(self.n);
        for x in elems {
            acc.union_with(&self.up[x]);
        }
        acc
    }

    /// Union of the down-sets of the given elements.
    pub fn down_set_of<I: IntoIterator<Item = usize>>(&self, elems: I) -> Bits {
        let mut acc = Bits::new(self.n);
        for x in elems {
            acc.union_with(&self.down[x]);
        }
        acc
    }

    pub fn minimals(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.down_covers[x].is_empty()).collect()
    }

    pub fn maximals(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.up_covers[x].is_empty()).collect()
    }

    /// The unique minimum, if one exists.
    pub fn minimum(&self) -> Option<usize> {
        let mins = self.minimals();
        match mins.as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    /// The unique maximum, if one exists.
    pub fn maximum(&self) -> Option<usize> {
        let maxs = self.maximals();
        match maxs.as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    /// True iff the poset has both a unique minimum and a unique maximum.
    pub fn is_bounded(&self) -> bool {
        self.n > 0 && self.minimum().is_some() && self.maximum().is_some()
    }

    /// Connectivity of the comparability graph.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = Bits::new(self.n);
        let mut stack = vec![0usize];
        seen.insert(0);
        while let Some(v) = stack.pop() {
            for &w in self.up_covers[v].iter().chain(self.down_covers[v].iter()) {
                if !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen.count() == self.n
    }

    /// The dual poset (order reversed); element indices are unchanged.
    pub fn dual(&self) -> Poset {
        let mut covers: Vec<(usize, usize)> = self.covers.iter().map(|&(a, b)| (b, a)).collect();
        covers.sort_unstable();
        let mut up_covers = vec![Vec::new(); self.n];
        let mut down_covers = vec![Vec::new(); self.n];
        for &(a, b) in &covers {
            up_covers[a].push(b);
            down_covers[b].push(a);
        }
        Poset {
            n: self.n,
            covers,
            up_covers,
            down_covers,
            up: self.down.clone(),
            down: self.up.clone(),
            names: self.names.clone(),
            mobius_cache: OnceLock::new(),
        }
    }

    /// Induced subposet on the given elements (deduplicated and sorted).
    ///
    /// Returns the subposet and the map from new indices to old ones.
    pub fn induced(&self, elems: &[usize]) -> Result<(Poset, Vec<usize>), PosetError> {
        let mut map: Vec<usize> = elems.to_vec();
        map.sort_unstable();
        map.dedup();
        for &x in &map {
            self.check_index(x)?;
        }
        let index_of: HashMap<usize, usize> =
            map.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut rels = Vec::new();
        for (i, &x) in map.iter().enumerate() {
            for y in self.up[x].iter() {
                if y != x {
                    if let Some(&j) = index_of.get(&y) {
                        rels.push((i, j));
                    }
                }
            }
        }
        let mut sub = Poset::from_covers(map.len(), &rels)?;
        if let Some(ns) = &self.names {
            sub = sub.with_names(map.iter().map(|&x| ns[x].clone()).collect())?;
        }
        Ok((sub, map))
    }

    /// The closed interval `[x, y]` as an induced subposet, with the map from
    /// new indices to old ones.  Requires `x <= y`.
    pub fn interval(&self, x: usize, y: usize) -> Result<(Poset, Vec<usize>), PosetError> {
        self.check_index(x)?;
        self.check_index(y)?;
        if !self.leq(x, y) {
            return Err(PosetError::NotComparable(x, y));
        }
        let elems = self.up[x].intersection(&self.down[y]).to_vec();
        self.induced(&elems)
    }

    /// Möbius function value `mu(x, y)`; zero when `x <= y` fails.
    pub fn mobius(&self, x: usize, y: usize) -> i64 {
        self.mobius_matrix()[x * self.n + y]
    }

    /// The full Möbius matrix, row-major: entry `(x, y)` is `mu(x, y)`.
    ///
    /// Computed once per poset by the defining recursion
    /// `mu(x, x) = 1`, `mu(x, y) = -sum_{x <= z < y} mu(x, z)`.
    pub fn mobius_matrix(&self) -> &[i64] {
        self.mobius_cache.get_or_init(|| {
            let n = self.n;
            let order = topo_order(self);
            let mut mu = vec![0i64; n * n];
            for x in 0..n {
                mu[x * n + x] = 1;
                for &y in &order {
                    if y != x && self.lt(x, y) {
                        let mut s: i64 = 0;
                        for z in self.up[x].intersection(&self.down[y]).iter() {
                            if z != y {
                                s = s
                                    .checked_add(mu[x * n + z])
                                    .expect("Mobius value overflow");
                            }
                        }
                        mu[x * n + y] = -s;
                    }
                }
            }
            mu
        })
    }

    /// Rank function, if the poset is graded: every cover increases the rank
    /// by exactly one, with the minimum of each connected component at rank 0.
    pub fn rank_function(&self) -> Option<Vec<usize>> {
        let n = self.n;
        let mut rank = vec![i64::MIN; n];
        let mut comp = vec![usize::MAX; n];
        let mut ncomp = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let cid = ncomp;
            ncomp += 1;
            comp[start] = cid;
            rank[start] = 0;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &self.up_covers[v] {
                    let r = rank[v] + 1;
                    if comp[w] == usize::MAX {
                        comp[w] = cid;
                        rank[w] = r;
                        stack.push(w);
                    } else if rank[w] != r {
                        return None;
                    }
                }
                for &w in &self.down_covers[v] {
                    let r = rank[v] - 1;
                    if comp[w] == usize::MAX {
                        comp[w] = cid;
                        rank[w] = r;
                        stack.push(w);
                    } else if rank[w] != r {
                        return None;
                    }
                }
            }
        }
        // Pin each component's minimum rank to 0.
        let mut min_rank = vec![i64::MAX; ncomp];
        for x in 0..n {
            min_rank[comp[x]] = min_rank[comp[x]].min(rank[x]);
        }
        Some(
            (0..n)
                .map(|x| (rank[x] - min_rank[comp[x]]) as usize)
                .collect(),
        )
    }

    pub fn is_graded(&self) -> bool {
        self.rank_function().is_some()
    }

    /// True iff the poset is graded and every interval `[x, y]` satisfies
    /// `mu(x, y) = (-1)^(rk y - rk x)`.
    pub fn is_eulerian(&self) -> bool {
        let Some(rk) = self.rank_function() else {
            return false;
        };
        let mu = self.mobius_matrix();
        for x in 0..self.n {
            for y in self.up[x].iter() {
                let sign = if (rk[y] - rk[x]) % 2 == 0 { 1 } else { -1 };
                if mu[x * self.n + y] != sign {
                    return false;
                }
            }
        }
        true
    }

    /// Canonical isomorphism key: two posets have equal keys iff they are
    /// isomorphic.  Intended for small posets (capacity-limited), where the
    /// residual search after invariant refinement stays tiny.
    pub fn canonical_key(&self) -> Result<CanonKey, PosetError> {
        if self.n > 10 {
            return Err(PosetError::Capacity(format!(
                "canonical form supported up to 10 elements, got {}",
                self.n
            )));
        }
        Ok(canonical_key_impl(self))
    }

    /// Isomorphism test via canonical keys.
    pub fn is_isomorphic(&self, other: &Poset) -> Result<bool, PosetError> {
        Ok(self.canonical_key()? == other.canonical_key()?)
    }
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poset(n={}, covers={:?})", self.n, self.covers)
    }
}

/// Some topological order of the elements (not necessarily the canonical
/// first linear extension; used internally where any order works).
fn topo_order(p: &Poset) -> Vec<usize> {
    let mut order: Vec<usize> = (0..p.n()).collect();
    order.sort_by_key(|&x| p.down_set(x).count());
    order
}

fn witness_cycle(adj: &[Vec<usize>], indeg: &[usize]) -> Vec<usize> {
    // All remaining nodes with positive in-degree lie on or above a cycle;
    // walk successors restricted to that set until a repeat.
    let n = adj.len();
    let alive: Vec<bool> = (0..n).map(|v| indeg[v] > 0).collect();
    let start = (0..n).find(|&v| alive[v]).expect("cycle exists");
    let mut seen_at = vec![usize::MAX; n];
    let mut path = vec![start];
    seen_at[start] = 0;
    loop {
        let v = *path.last().unwrap();
        let next = adj[v]
            .iter()
            .copied()
            .find(|&w| alive[w])
            .expect("alive node has alive successor");
        if seen_at[next] != usize::MAX {
            return path[seen_at[next]..].to_vec();
        }
        seen_at[next] = path.len();
        path.push(next);
    }
}

/// Opaque canonical form key; equal keys mean isomorphic posets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonKey(Vec<u64>);

fn canonical_key_impl(p: &Poset) -> CanonKey {
    let n = p.n();
    if n == 0 {
        return CanonKey(vec![0]);
    }

    // Iterated invariant refinement.  The signature of an element combines its
    // current color with the multiset of (relation kind, color) pairs over all
    // other elements, which is isomorphism-invariant by construction.
    let mut color: Vec<u32> = {
        let sigs: Vec<_> = (0..n)
            .map(|x| {
                (
                    p.down_set(x).count(),
                    p.up_set(x).count(),
                    p.down_covers(x).len(),
                    p.up_covers(x).len(),
                )
            })
            .collect();
        rank_of(&sigs)
    };
    loop {
        let sigs: Vec<_> = (0..n)
            .map(|x| {
                let mut rel: Vec<(u8, u32)> = (0..n)
                    .filter(|&y| y != x)
                    .map(|y| {
                        let kind = if p.lt(x, y) {
                            0u8
                        } else if p.lt(y, x) {
                            1
                        } else {
                            2
                        };
                        (kind, color[y])
                    })
                    .collect();
                rel.sort_unstable();
                (color[x], rel)
            })
            .collect();
        let next = rank_of(&sigs);
        if next == color {
            break;
        }
        color = next;
    }

    // Group elements by color (classes are ordered canonically by color rank)
    // and minimize the relation matrix over all class-respecting orderings.
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let ncolors = color.iter().max().map_or(0, |&c| c as usize + 1);
    for c in 0..ncolors {
        classes.push((0..n).filter(|&x| color[x] as usize == c).collect());
    }

    let words = n.div_ceil(64);
    let mut best: Option<Vec<u64>> = None;
    let mut arrangement: Vec<usize> = Vec::with_capacity(n);
    minimize_over_classes(p, &classes, 0, &mut arrangement, &mut best, words);
    let mut key = vec![n as u64];
    key.extend(classes.iter().map(|c| c.len() as u64));
    key.extend(best.expect("at least one arrangement"));
    CanonKey(key)
}

fn rank_of<T: Ord + Clone>(sigs: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    sigs.iter()
        .map(|s| sorted.binary_search(s).unwrap() as u32)
        .collect()
}

fn minimize_over_classes(
    p: &Poset,
    classes: &[Vec<usize>],
    ci: usize,
    arrangement: &mut Vec<usize>,
    best: &mut Option<Vec<u64>>,
    words: usize,
) {
    if ci == classes.len() {
        // Row i holds the relation bits of arrangement[i] against the
        // arrangement, packed 64 per word.
        let mut bits = vec![0u64; words * arrangement.len()];
        for (i, &x) in arrangement.iter().enumerate() {
            for (j, &y) in arrangement.iter().enumerate() {
                if p.leq(x, y) {
                    bits[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        if best.as_ref().is_none_or(|b| bits < *b) {
            *best = Some(bits);
        }
        return;
    }
    let mut members = classes[ci].clone();
    permute_each(&mut members, 0, &mut |perm| {
        arrangement.extend_from_slice(perm);
        minimize_over_classes(p, classes, ci + 1, arrangement, best, words);
        arrangement.truncate(arrangement.len() - perm.len());
    });
}

fn permute_each(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute_each(v, k + 1, f);
        v.swap(k, i);
    }
}

#[cfg(test)]
pub(crate) mod test_fixtures {
    use super::*;

    /// Five-element poset with covers 0<1, 0<2, 1<3, 2<3, 3<4
    /// (a diamond with an extra top).
    pub fn r5() -> Poset {
        Poset::from_covers(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]).unwrap()
    }

    pub fn chain(n: usize) -> Poset {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_covers(n, &covers).unwrap()
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::from_covers(n, &[]).unwrap()
    }

    /// The pentagon: 0 < 1 < 2 < 4 and 0 < 3 < 4.
    pub fn n5() -> Poset {
        Poset::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap()
    }

    /// The diamond with three atoms: 0 below 1, 2, 3, all below 4.
    pub fn m3() -> Poset {
        Poset::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_fixtures::*;
    use super::*;

    #[test]
    fn closure_and_reduction() {
        // Feed a non-reduced relation; the implied pair (0, 3) must not
        // survive as a cover.
        let p = Poset::from_covers(4, &[(0, 1), (1, 3), (0, 3), (0, 2), (2, 3)]).unwrap();
        assert_eq!(p.covers(), &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert!(p.leq(0, 3));
        assert!(!p.leq(1, 2));
    }

    #[test]
    fn rejects_cycles_and_loops() {
        let err = Poset::from_covers(3, &[(0, 1), (1, 2), (2, 0)]).unwrap_err();
        match err {
            PosetError::Cycle(w) => {
                assert!(w.len() >= 2);
            }
            other => panic!("expected cycle error, got {other}"),
        }
        assert!(matches!(
            Poset::from_covers(2, &[(1, 1)]),
            Err(PosetError::SelfLoop(1))
        ));
        assert!(matches!(
            Poset::from_covers(2, &[(0, 5)]),
            Err(PosetError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn r5_order_queries() {
        let p = r5();
        assert_eq!(p.down_set(3).to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(p.up_set(1).to_vec(), vec![1, 3, 4]);
        assert_eq!(p.minimals(), vec![0]);
        assert_eq!(p.maximals(), vec![4]);
        assert!(p.is_bounded());
        assert!(p.is_connected());
        let (iv, map) = p.interval(0, 3).unwrap();
        assert_eq!(iv.n(), 4);
        assert_eq!(map, vec![0, 1, 2, 3]);
        // the interval [0,3] is a diamond: two incomparable middle elements
        assert!(!iv.leq(1, 2) && !iv.leq(2, 1));
        let (iv2, map2) = p.interval(1, 4).unwrap();
        assert_eq!(map2, vec![1, 3, 4]);
        assert!(iv2.leq(0, 2));
        assert!(matches!(
            p.interval(1, 2),
            Err(PosetError::NotComparable(1, 2))
        ));
    }

    #[test]
    fn r5_mobius_and_ranks() {
        let p = r5();
        assert_eq!(p.mobius(0, 0), 1);
        assert_eq!(p.mobius(0, 1), -1);
        assert_eq!(p.mobius(0, 3), 1);
        assert_eq!(p.mobius(0, 4), 0);
        assert_eq!(p.mobius(1, 0), 0);
        assert_eq!(p.rank_function(), Some(vec![0, 1, 1, 2, 3]));
        assert!(p.is_graded());
    }

    #[test]
    fn mobius_defining_recursion_on_random_posets() {
        // sum_{x <= z <= y} mu(x, z) = [x == y] on every interval.
        for seed in 0..20u64 {
            let p = random_poset(7, seed);
            let n = p.n();
            for x in 0..n {
                for y in 0..n {
                    if p.leq(x, y) {
                        let s: i64 = p
                            .up_set(x)
                            .intersection(p.down_set(y))
                            .iter()
                            .map(|z| p.mobius(x, z))
                            .sum();
                        assert_eq!(s, i64::from(x == y));
                    }
                }
            }
        }
    }

    pub(crate) fn random_poset(n: usize, seed: u64) -> Poset {
        // Deterministic pseudo-random relation compatible with index order.
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut rels = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                if state % 3 == 0 {
                    rels.push((a, b));
                }
            }
        }
        Poset::from_covers(n, &rels).unwrap()
    }

    #[test]
    fn pentagon_is_not_graded() {
        assert!(!n5().is_graded());
        assert!(!n5().is_eulerian());
    }

    #[test]
    fn chains_and_antichains() {
        let c = chain(3);
        assert!(c.is_graded());
        assert!(!c.is_eulerian()); // mu(0, 2) = 0
        let a = antichain(2);
        assert!(!a.is_connected());
        assert!(!a.is_bounded());
        assert!(a.is_eulerian()); // trivially: only singleton intervals
    }

    #[test]
    fn dual_swaps_everything() {
        let p = r5();
        let d = p.dual();
        assert_eq!(d.covers(), &[(1, 0), (2, 0), (3, 1), (3, 2), (4, 3)]);
        assert!(d.leq(4, 0));
        assert!(!d.leq(0, 4));
        assert_eq!(d.minimals(), vec![4]);
        // Dual of dual is the original.
        let dd = d.dual();
        assert_eq!(dd.covers(), p.covers());
    }

    #[test]
    fn canonical_keys_distinguish_and_unify() {
        // chain(3) relabeled two ways: same key.
        let c1 = Poset::from_covers(3, &[(0, 1), (1, 2)]).unwrap();
        let c2 = Poset::from_covers(3, &[(2, 0), (0, 1)]).unwrap();
        assert_eq!(c1.canonical_key().unwrap(), c2.canonical_key().unwrap());
        // chain(3) vs the V poset (one min below two maxes): different keys.
        let v = Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        assert_ne!(c1.canonical_key().unwrap(), v.canonical_key().unwrap());
        // V vs its dual (lambda): different keys.
        assert_ne!(
            v.canonical_key().unwrap(),
            v.dual().canonical_key().unwrap()
        );
    }

    #[test]
    fn canonical_keys_count_unlabeled_posets_on_four_elements() {
        // Enumerate all relations compatible with index order and dedup.
        use std::collections::BTreeSet;
        let mut keys = BTreeSet::new();
        let pairs: Vec<(usize, usize)> = (0..4)
            .flat_map(|a| (a + 1..4).map(move |b| (a, b)))
            .collect();
        for mask in 0..1u32 << pairs.len() {
            let rels: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let p = Poset::from_covers(4, &rels).unwrap();
            keys.insert(p.canonical_key().unwrap());
        }
        assert_eq!(keys.len(), 16);
    }
}
