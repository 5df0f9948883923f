//! Linear extensions and bijections on poset elements.
//!
//! A [`LinearExtension`] assigns each element a position `0..n` such that the
//! order is respected.  Enumeration is deterministic (backtracking over the
//! currently minimal elements in ascending index order), counting is exact via
//! a memoized down-set recursion, and uniform sampling draws from the same
//! counts so that every extension has equal probability.

use crate::bits::Bits;
use crate::poset::{Poset, PosetError};
use rand::Rng;
use std::collections::HashMap;

/// A linear extension of a poset, stored both as positions and as the element
/// sequence.  Positions are 0-based.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearExtension {
    /// `pos[x]` is the position of element `x`.
    pos: Vec<usize>,
    /// `ord[k]` is the element at position `k`.
    ord: Vec<usize>,
}

impl LinearExtension {
    /// Validates that `pos` is a bijection onto `0..n` that respects the
    /// order of `p`.
    pub fn new(p: &Poset, pos: Vec<usize>) -> Result<LinearExtension, PosetError> {
        let n = p.n();
        if pos.len() != n {
            return Err(PosetError::InvalidExtension(format!(
                "got {} positions for {} elements",
                pos.len(),
                n
            )));
        }
        let mut ord = vec![usize::MAX; n];
        for (x, &k) in pos.iter().enumerate() {
            if k >= n {
                return Err(PosetError::InvalidExtension(format!(
                    "position {k} out of range"
                )));
            }
            if ord[k] != usize::MAX {
                return Err(PosetError::InvalidExtension(format!(
                    "elements {} and {x} share position {k}",
                    ord[k]
                )));
            }
            ord[k] = x;
        }
        for &(a, b) in p.covers() {
            if pos[a] > pos[b] {
                return Err(PosetError::InvalidExtension(format!(
                    "element {a} precedes {b} in the order but not in the extension"
                )));
            }
        }
        Ok(LinearExtension { pos, ord })
    }

    /// Builds an extension from the element sequence (position `k` holds
    /// `ord[k]`).
    pub fn from_order(p: &Poset, ord: &[usize]) -> Result<LinearExtension, PosetError> {
        let n = p.n();
        if ord.len() != n {
            return Err(PosetError::InvalidExtension(format!(
                "got {} elements for a poset of size {}",
                ord.len(),
                n
            )));
        }
        let mut pos = vec![usize::MAX; n];
        for (k, &x) in ord.iter().enumerate() {
            if x >= n {
                return Err(PosetError::IndexOutOfRange { index: x, n });
            }
            if pos[x] != usize::MAX {
                return Err(PosetError::InvalidExtension(format!(
                    "element {x} appears twice"
                )));
            }
            pos[x] = k;
        }
        LinearExtension::new(p, pos)
    }

    pub fn n(&self) -> usize {
        self.pos.len()
    }

    /// Position of element `x`.
    pub fn position(&self, x: usize) -> usize {
        self.pos[x]
    }

    /// Element at position `k`.
    pub fn element(&self, k: usize) -> usize {
        self.ord[k]
    }

    pub fn positions(&self) -> &[usize] {
        &self.pos
    }

    pub fn order(&self) -> &[usize] {
        &self.ord
    }

    /// The reversed sequence, which is a linear extension of the dual poset.
    pub fn reversed(&self) -> LinearExtension {
        let n = self.n();
        LinearExtension {
            pos: self.pos.iter().map(|&k| n - 1 - k).collect(),
            ord: self.ord.iter().rev().copied().collect(),
        }
    }
}

/// A bijection on poset elements, stored as the image array.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ElementBijection {
    image: Vec<usize>,
}

impl ElementBijection {
    pub fn new(image: Vec<usize>) -> Result<ElementBijection, PosetError> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &y in &image {
            if y >= n {
                return Err(PosetError::IndexOutOfRange { index: y, n });
            }
            if seen[y] {
                return Err(PosetError::InvalidInput(format!(
                    "image {y} repeated; not a bijection"
                )));
            }
            seen[y] = true;
        }
        Ok(ElementBijection { image })
    }

    pub fn identity(n: usize) -> ElementBijection {
        ElementBijection {
            image: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> ElementBijection {
        let mut inv = vec![0; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        ElementBijection { image: inv }
    }

    /// Composition `self . other`: applies `other` first.
    pub fn compose(&self, other: &ElementBijection) -> ElementBijection {
        assert_eq!(self.n(), other.n());
        ElementBijection {
            image: other.image.iter().map(|&y| self.image[y]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn is_involution(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| self.image[y] == x)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        self.image
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x == y)
            .map(|(x, _)| x)
            .collect()
    }

    /// Cycle decomposition; each orbit starts at its smallest element and
    /// orbits are sorted by that element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut cur = self.image[start];
            while cur != start {
                seen[cur] = true;
                orbit.push(cur);
                cur = self.image[cur];
            }
            orbits.push(orbit);
        }
        orbits
    }
}

impl Poset {
    /// The first linear extension in the deterministic enumeration order:
    /// repeatedly take the smallest-index minimal element.
    pub fn first_extension(&self) -> LinearExtension {
        self.linear_extensions()
            .next()
            .expect("a finite poset has at least one linear extension")
    }

    /// Deterministic iterator over all linear extensions: backtracking over
    /// the currently minimal elements in ascending index order.
    pub fn linear_extensions(&self) -> LinearExtensionIter<'_> {
        LinearExtensionIter::new(self)
    }

    /// Exact number of linear extensions, via the memoized recursion over
    /// down-sets.  Supported for `n <= 64`; counts that do not fit in `u128`
    /// report capacity errors.
    pub fn count_linear_extensions(&self) -> Result<u128, PosetError> {
        let mut counter = ExtensionCounter::new(self)?;
        counter.count(placed_mask_empty())
    }

    /// Draws a uniformly random linear extension using exact counts as
    /// transition weights.
    pub fn sample_extension_uniform<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> Result<LinearExtension, PosetError> {
        let n = self.n();
        let mut counter = ExtensionCounter::new(self)?;
        let mut placed: u64 = placed_mask_empty();
        let mut ord = Vec::with_capacity(n);
        for _ in 0..n {
            let total = counter.count(placed)?;
            debug_assert!(total > 0);
            let mut draw = rng.random_range(0..total);
            let mins = counter.minimals_after(placed);
            let mut chosen = None;
            for x in mins {
                let c = counter.count(placed | 1 << x)?;
                if draw < c {
                    chosen = Some(x);
                    break;
                }
                draw -= c;
            }
            let x = chosen.expect("weights sum to total");
            ord.push(x);
            placed |= 1 << x;
        }
        LinearExtension::from_order(self, &ord)
    }

    /// Draws a random linear extension by repeatedly picking one of the
    /// currently minimal elements uniformly.  Fast but not uniform over
    /// extensions.
    pub fn sample_extension_greedy<R: Rng + ?Sized>(&self, rng: &mut R) -> LinearExtension {
        let n = self.n();
        let mut remaining_indeg: Vec<usize> = (0..n).map(|x| self.down_covers(x).len()).collect();
        let mut avail: Vec<usize> = (0..n).filter(|&x| remaining_indeg[x] == 0).collect();
        let mut ord = Vec::with_capacity(n);
        while !avail.is_empty() {
            let k = rng.random_range(0..avail.len());
            let x = avail.swap_remove(k);
            ord.push(x);
            for &y in self.up_covers(x) {
                remaining_indeg[y] -= 1;
                if remaining_indeg[y] == 0 {
                    avail.push(y);
                }
            }
        }
        LinearExtension::from_order(self, &ord).expect("greedy order is an extension")
    }
}

fn placed_mask_empty() -> u64 {
    0
}

/// Memoized extension counting over down-set bit masks.
struct ExtensionCounter<'a> {
    p: &'a Poset,
    memo: HashMap<u64, u128>,
}

impl<'a> ExtensionCounter<'a> {
    fn new(p: &'a Poset) -> Result<Self, PosetError> {
        if p.n() > 64 {
            return Err(PosetError::Capacity(format!(
                "extension counting supported up to 64 elements, got {}",
                p.n()
            )));
        }
        Ok(ExtensionCounter {
            p,
            memo: HashMap::new(),
        })
    }

    fn minimals_after(&self, placed: u64) -> Vec<usize> {
        (0..self.p.n())
            .filter(|&x| {
                placed >> x & 1 == 0
                    && self
                        .p
                        .down_covers(x)
                        .iter()
                        .all(|&d| placed >> d & 1 == 1)
            })
            .collect()
    }

    fn count(&mut self, placed: u64) -> Result<u128, PosetError> {
        if placed.count_ones() as usize == self.p.n() {
            return Ok(1);
        }
        if let Some(&c) = self.memo.get(&placed) {
            return Ok(c);
        }
        let mut total: u128 = 0;
        for x in self.minimals_after(placed) {
            let sub = self.count(placed | 1 << x)?;
            total = total.checked_add(sub).ok_or_else(|| {
                PosetError::Capacity("extension count exceeds u128".into())
            })?;
        }
        self.memo.insert(placed, total);
        Ok(total)
    }
}

/// Backtracking enumerator; see [`Poset::linear_extensions`].
pub struct LinearExtensionIter<'a> {
    p: &'a Poset,
    indeg: Vec<usize>,
    placed: Bits,
    prefix: Vec<usize>,
    frames: Vec<Frame>,
    state: IterState,
}

enum IterState {
    Fresh,
    Yielded,
    Done,
}

struct Frame {
    cands: Vec<usize>,
    next: usize,
}

impl<'a> LinearExtensionIter<'a> {
    fn new(p: &'a Poset) -> Self {
        LinearExtensionIter {
            p,
            indeg: (0..p.n()).map(|x| p.down_covers(x).len()).collect(),
            placed: Bits::new(p.n()),
            prefix: Vec::with_capacity(p.n()),
            frames: Vec::with_capacity(p.n() + 1),
            state: IterState::Fresh,
        }
    }

    fn current_minimals(&self) -> Vec<usize> {
        (0..self.p.n())
            .filter(|&x| !self.placed.contains(x) && self.indeg[x] == 0)
            .collect()
    }

    fn place(&mut self, x: usize) {
        self.placed.insert(x);
        self.prefix.push(x);
        for &y in self.p.up_covers(x) {
            self.indeg[y] -= 1;
        }
    }

    fn unplace(&mut self) {
        let x = self.prefix.pop().expect("nonempty prefix");
        self.placed.remove(x);
        for &y in self.p.up_covers(x) {
            self.indeg[y] += 1;
        }
    }
}

impl<'a> Iterator for LinearExtensionIter<'a> {
    type Item = LinearExtension;

    fn next(&mut self) -> Option<LinearExtension> {
        match self.state {
            IterState::Done => return None,
            IterState::Fresh => {
                self.state = IterState::Yielded;
                if self.p.n() == 0 {
                    self.state = IterState::Done;
                    return Some(LinearExtension {
                        pos: vec![],
                        ord: vec![],
                    });
                }
                self.frames.push(Frame {
                    cands: self.current_minimals(),
                    next: 0,
                });
            }
            IterState::Yielded => {
                // Resume after a full extension: undo its last placement.
                self.unplace();
            }
        }
        loop {
            let Some(frame) = self.frames.last_mut() else {
                self.state = IterState::Done;
                return None;
            };
            if frame.next < frame.cands.len() {
                let x = frame.cands[frame.next];
                frame.next += 1;
                self.place(x);
                if self.prefix.len() == self.p.n() {
                    let ext = LinearExtension::from_order(self.p, &self.prefix)
                        .expect("backtracking produces valid extensions");
                    return Some(ext);
                }
                self.frames.push(Frame {
                    cands: self.current_minimals(),
                    next: 0,
                });
            } else {
                self.frames.pop();
                if self.frames.is_empty() {
                    self.state = IterState::Done;
                    return None;
                }
                self.unplace();
            }
        }
    }
}

/// One block of a block-constrained extension: a set of elements, optionally
/// with a designated element placed last within the block.
#[derive(Clone, Debug)]
pub struct ExtensionBlock {
    pub elements: Vec<usize>,
    pub last: Option<usize>,
}

/// Builds a linear extension laid out block by block.
///
/// The blocks must partition the ground set, every prefix union must be
/// downward closed, and each designated-last element must be maximal within
/// its prefix union.  Within a block the elements are ordered by the
/// deterministic greedy rule (smallest available index first), with the
/// designated element held back until the end of its block.
pub fn extension_from_blocks(
    p: &Poset,
    blocks: &[ExtensionBlock],
) -> Result<LinearExtension, PosetError> {
    let n = p.n();
    let mut seen = Bits::new(n);
    for (bi, block) in blocks.iter().enumerate() {
        for &x in &block.elements {
            if x >= n {
                return Err(PosetError::IndexOutOfRange { index: x, n });
            }
            if seen.contains(x) {
                return Err(PosetError::InvalidBlocks(format!(
                    "element {x} appears in more than one block"
                )));
            }
            seen.insert(x);
        }
        if let Some(last) = block.last {
            if !block.elements.contains(&last) {
                return Err(PosetError::InvalidBlocks(format!(
                    "designated element {last} is not in block {bi}"
                )));
            }
        }
    }
    if seen.count() != n {
        return Err(PosetError::InvalidBlocks(
            "blocks do not cover the ground set".into(),
        ));
    }

    let mut prefix_union = Bits::new(n);
    let mut ord: Vec<usize> = Vec::with_capacity(n);
    for (bi, block) in blocks.iter().enumerate() {
        prefix_union.union_with(&Bits::from_elems(n, block.elements.iter().copied()));
        // Downward closure check: every element below a member of the prefix
        // union must itself be in the prefix union.
        for x in prefix_union.clone().iter() {
            if !p.down_set(x).is_subset_of(&prefix_union) {
                return Err(PosetError::InvalidBlocks(format!(
                    "prefix union through block {bi} is not downward closed at element {x}"
                )));
            }
        }
        if let Some(last) = block.last {
            for y in prefix_union.iter() {
                if p.lt(last, y) {
                    return Err(PosetError::InvalidBlocks(format!(
                        "designated element {last} is below {y} within its prefix union"
                    )));
                }
            }
        }
        // Greedy topological order of the block, holding the designated
        // element back until the end.  All lower covers of a block member lie
        // in the prefix union (it is downward closed), so an element is
        // placeable once its lower covers are placed.
        let mut members: Vec<usize> = block.elements.clone();
        members.sort_unstable();
        let mut placed = Bits::from_elems(n, ord.iter().copied());
        let mut remaining = members.len();
        while remaining > 0 {
            let pick = members.iter().copied().find(|&x| {
                !placed.contains(x)
                    && Some(x) != block.last
                    && p.down_covers(x).iter().all(|&d| placed.contains(d))
            });
            let x = match pick {
                Some(x) => x,
                None => {
                    // Only the designated element remains placeable.
                    let last = block.last.ok_or_else(|| {
                        PosetError::InvalidBlocks(format!(
                            "block {bi} has no placeable element; constraints are inconsistent"
                        ))
                    })?;
                    if placed.contains(last) || remaining != 1 {
                        return Err(PosetError::InvalidBlocks(format!(
                            "block {bi} cannot be linearized with {last} last"
                        )));
                    }
                    last
                }
            };
            placed.insert(x);
            ord.push(x);
            remaining -= 1;
        }
    }
    LinearExtension::from_order(p, &ord)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::test_fixtures::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    #[test]
    fn validates_extensions() {
        let p = r5();
        assert!(LinearExtension::new(&p, vec![0, 1, 2, 3, 4]).is_ok());
        assert!(LinearExtension::new(&p, vec![0, 2, 1, 3, 4]).is_ok());
        // element 3 before its lower cover 1
        assert!(LinearExtension::new(&p, vec![0, 3, 1, 2, 4]).is_err());
        // not a bijection
        assert!(LinearExtension::new(&p, vec![0, 1, 1, 3, 4]).is_err());
        assert!(LinearExtension::new(&p, vec![0, 1, 2, 3]).is_err());
    }

    #[test]
    fn r5_has_two_extensions() {
        let p = r5();
        let exts: Vec<_> = p.linear_extensions().collect();
        assert_eq!(exts.len(), 2);
        assert_eq!(exts[0].order(), &[0, 1, 2, 3, 4]);
        assert_eq!(exts[1].order(), &[0, 2, 1, 3, 4]);
        assert_eq!(p.count_linear_extensions().unwrap(), 2);
        assert_eq!(p.first_extension().order(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn enumeration_matches_brute_force_filter() {
        // Compare against filtering all permutations, on a handful of posets.
        for (n, rels) in [
            (4, vec![(0, 1), (0, 2)]),
            (4, vec![]),
            (5, vec![(0, 1), (1, 2), (0, 3), (3, 4)]),
            (5, vec![(0, 4), (1, 4), (2, 4), (3, 4)]),
        ] {
            let p = Poset::from_covers(n, &rels).unwrap();
            let listed: BTreeSet<Vec<usize>> = p
                .linear_extensions()
                .map(|e| e.order().to_vec())
                .collect();
            let brute: BTreeSet<Vec<usize>> = permutations(n)
                .into_iter()
                .filter(|perm| {
                    let mut pos = vec![0; n];
                    for (k, &x) in perm.iter().enumerate() {
                        pos[x] = k;
                    }
                    rels.iter().all(|&(a, b)| pos[a] < pos[b])
                })
                .collect();
            assert_eq!(listed, brute);
            assert_eq!(
                p.count_linear_extensions().unwrap(),
                brute.len() as u128
            );
        }
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut v: Vec<usize> = (0..n).collect();
        fn rec(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
            if k == v.len() {
                out.push(v.clone());
                return;
            }
            for i in k..v.len() {
                v.swap(k, i);
                rec(v, k + 1, out);
                v.swap(k, i);
            }
        }
        rec(&mut v, 0, &mut out);
        out
    }

    #[test]
    fn antichain_counts_factorially() {
        assert_eq!(antichain(6).count_linear_extensions().unwrap(), 720);
        assert_eq!(chain(6).count_linear_extensions().unwrap(), 1);
    }

    #[test]
    fn uniform_sampler_hits_every_extension() {
        let p = Poset::from_covers(4, &[(0, 1), (0, 2)]).unwrap();
        let all: BTreeSet<Vec<usize>> = p
            .linear_extensions()
            .map(|e| e.order().to_vec())
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen = BTreeSet::new();
        let mut histogram: std::collections::HashMap<Vec<usize>, usize> = Default::default();
        for _ in 0..3000 {
            let e = p.sample_extension_uniform(&mut rng).unwrap();
            assert!(all.contains(e.order()));
            *histogram.entry(e.order().to_vec()).or_default() += 1;
            seen.insert(e.order().to_vec());
        }
        assert_eq!(seen, all);
        // Uniformity sanity check: each of the extensions should get roughly
        // 3000 / |all| draws; allow a wide tolerance.
        let expected = 3000 / all.len();
        for (_, &c) in &histogram {
            assert!(c > expected / 2 && c < expected * 2);
        }
    }

    #[test]
    fn greedy_sampler_is_valid() {
        let p = r5();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let e = p.sample_extension_greedy(&mut rng);
            assert!(LinearExtension::new(&p, e.positions().to_vec()).is_ok());
        }
    }

    #[test]
    fn reversal_extends_the_dual() {
        let p = r5();
        let d = p.dual();
        for e in p.linear_extensions() {
            let r = e.reversed();
            assert!(LinearExtension::new(&d, r.positions().to_vec()).is_ok());
        }
    }

    #[test]
    fn bijection_ops() {
        let b = ElementBijection::new(vec![4, 2, 1, 0, 3]).unwrap();
        assert_eq!(b.apply(0), 4);
        assert_eq!(b.inverse().apply(4), 0);
        assert!(b.compose(&b.inverse()).is_identity());
        assert!(!b.is_involution());
        assert_eq!(b.orbits(), vec![vec![0, 4, 3], vec![1, 2]]);
        assert_eq!(b.fixed_points(), Vec::<usize>::new());
        assert!(ElementBijection::new(vec![0, 0]).is_err());
        let inv = ElementBijection::new(vec![1, 0, 2]).unwrap();
        assert!(inv.is_involution());
        assert_eq!(inv.fixed_points(), vec![2]);
    }

    #[test]
    fn blocks_basic() {
        let p = r5();
        // Down-set of 3 with 3 last, then the rest.
        let ext = extension_from_blocks(
            &p,
            &[
                ExtensionBlock {
                    elements: vec![0, 1, 2, 3],
                    last: Some(3),
                },
                ExtensionBlock {
                    elements: vec![4],
                    last: None,
                },
            ],
        )
        .unwrap();
        assert_eq!(ext.order(), &[0, 1, 2, 3, 4]);
        assert_eq!(ext.position(3), 3);

        // Prefix union not downward closed: {1} alone.
        let err = extension_from_blocks(
            &p,
            &[
                ExtensionBlock {
                    elements: vec![1],
                    last: None,
                },
                ExtensionBlock {
                    elements: vec![0, 2, 3, 4],
                    last: None,
                },
            ],
        );
        assert!(matches!(err, Err(PosetError::InvalidBlocks(_))));

        // Designated element not maximal in the prefix union.
        let err = extension_from_blocks(
            &p,
            &[
                ExtensionBlock {
                    elements: vec![0, 1, 2, 3],
                    last: Some(1),
                },
                ExtensionBlock {
                    elements: vec![4],
                    last: None,
                },
            ],
        );
        assert!(matches!(err, Err(PosetError::InvalidBlocks(_))));
    }

    #[test]
    fn blocks_respect_designated_last() {
        // Antichain: any block layout works; designated element goes last.
        let p = antichain(4);
        let ext = extension_from_blocks(
            &p,
            &[
                ExtensionBlock {
                    elements: vec![2, 0, 3],
                    last: Some(0),
                },
                ExtensionBlock {
                    elements: vec![1],
                    last: Some(1),
                },
            ],
        )
        .unwrap();
        assert_eq!(ext.order(), &[2, 3, 0, 1]);
    }
}
