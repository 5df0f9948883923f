//! Dense fixed-universe bit sets.
//!
//! Order relations, down-sets, and cut systems are all subsets of a fixed
//! ground set `{0, .., n-1}`, so a small dense bit set is used everywhere
//! instead of hash sets.  Unused high bits of the last word are kept at zero,
//! which makes `Eq`, `Ord`, and `Hash` structural.

const WORD: usize = 64;

/// A subset of `{0, .., n-1}` backed by `u64` words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    n: usize,
    words: Vec<u64>,
}

impl Bits {
    /// Empty subset of a universe of size `n`.
    pub fn new(n: usize) -> Self {
        Bits {
            n,
            words: vec![0; n.div_ceil(WORD)],
        }
    }

    /// Full subset `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut b = Bits::new(n);
        for w in &mut b.words {
            *w = u64::MAX;
        }
        b.trim();
        b
    }

    /// Builds a subset from an iterator of element indices.
    pub fn from_elems<I: IntoIterator<Item = usize>>(n: usize, elems: I) -> Self {
        let mut b = Bits::new(n);
        for e in elems {
            b.insert(e);
        }
        b
    }

    fn trim(&mut self) {
        let extra = self.words.len() * WORD - self.n;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX >> extra;
            }
        }
    }

    /// Size of the universe (not the subset).
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.n);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.n);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.n);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &Bits) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Bits) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &Bits) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &Bits) -> Bits {
        let mut r = self.clone();
        r.union_with(other);
        r
    }

    pub fn intersection(&self, other: &Bits) -> Bits {
        let mut r = self.clone();
        r.intersect_with(other);
        r
    }

    pub fn difference(&self, other: &Bits) -> Bits {
        let mut r = self.clone();
        r.difference_with(other);
        r
    }

    pub fn is_subset_of(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Iterates the elements in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Smallest element, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Raw words, for use as a compact hash/sort key.
    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl std::fmt::Debug for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut a = Bits::new(130);
        a.insert(0);
        a.insert(64);
        a.insert(129);
        assert!(a.contains(64));
        assert!(!a.contains(63));
        assert_eq!(a.count(), 3);
        assert_eq!(a.to_vec(), vec![0, 64, 129]);
        a.remove(64);
        assert_eq!(a.to_vec(), vec![0, 129]);
    }

    #[test]
    fn set_algebra() {
        let a = Bits::from_elems(10, [1, 3, 5]);
        let b = Bits::from_elems(10, [3, 5, 7]);
        assert_eq!(a.intersection(&b).to_vec(), vec![3, 5]);
        assert_eq!(a.union(&b).to_vec(), vec![1, 3, 5, 7]);
        assert_eq!(a.difference(&b).to_vec(), vec![1]);
        assert!(Bits::from_elems(10, [3]).is_subset_of(&a));
        assert!(!a.is_subset_of(&b));
        assert!(a.is_disjoint_from(&Bits::from_elems(10, [0, 2])));
    }

    #[test]
    fn full_has_no_stray_bits() {
        let f = Bits::full(70);
        assert_eq!(f.count(), 70);
        assert_eq!(f, Bits::from_elems(70, 0..70));
    }
}
