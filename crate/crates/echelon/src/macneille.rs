//! Dedekind–MacNeille completion of a finite poset: the smallest lattice
//! containing the poset as a subposet, built from cuts.
//!
//! A *cut* is a subset `A` with `A = (Aᵘ)ˡ`, where `Aᵘ` is the set of upper
//! bounds of `A` and `Xˡ` the set of lower bounds of `X`.  The map
//! `X ↦ (Xᵘ)ˡ` is a closure operator; its closed sets ordered by inclusion
//! form the completion, and `x ↦ ↓x` embeds the original poset.

use crate::bits::Bits;
use crate::lattice::{Lattice, LatticeError};
use crate::poset::{Poset, PosetError};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MacNeilleError {
    #[error("structural invariant violated: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// The MacNeille completion of a poset, together with the order embedding.
///
/// Immutable after construction; all operations are read-only.
#[derive(Debug, Clone)]
pub struct Completion {
    lattice: Lattice,
    embed: Vec<usize>,
    cuts: Vec<Bits>,
}

impl Completion {
    /// The completion as a lattice.
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// The embedding, indexed by original element.
    pub fn embed(&self) -> &[usize] {
        &self.embed
    }

    /// The image of an original element in the completion.
    pub fn embed_of(&self, x: usize) -> usize {
        self.embed[x]
    }

    /// The cut realizing a completion element, as a subset of the original
    /// poset.
    pub fn cut(&self, i: usize) -> &Bits {
        &self.cuts[i]
    }

    /// All cuts, indexed by completion element.
    pub fn cuts(&self) -> &[Bits] {
        &self.cuts
    }

    /// Whether the embedding is onto, i.e. the input was already a lattice.
    pub fn is_bijective(&self) -> bool {
        self.embed.len() == self.lattice.n()
    }
}

/// `(Xᵘ)ˡ`: lower bounds of the upper bounds of `X`.
fn close(p: &Poset, x: &Bits) -> Bits {
    let n = p.n();
    let mut upper = Bits::full(n);
    for e in x.iter() {
        upper.intersect_with(p.up_set(e));
    }
    let mut lower = Bits::full(n);
    for u in upper.iter() {
        lower.intersect_with(p.down_set(u));
    }
    lower
}

/// All cuts of the poset, enumerated by lectic closure iteration and
/// returned sorted by (cardinality, content) — a topological order for
/// inclusion.
fn enumerate_cuts(p: &Poset) -> Vec<Bits> {
    let n = p.n();
    let mut cuts = Vec::new();
    let mut a = close(p, &Bits::new(n));
    loop {
        cuts.push(a.clone());
        // Next closed set in lectic order: try to add the largest absent
        // element whose closure introduces nothing smaller.
        let mut prefix = a.clone();
        let mut next = None;
        for i in (0..n).rev() {
            if prefix.contains(i) {
                prefix.remove(i);
                continue;
            }
            let mut seed = prefix.clone();
            seed.insert(i);
            let b = close(p, &seed);
            if b.iter().take_while(|&e| e < i).all(|e| prefix.contains(e)) {
                next = Some(b);
                break;
            }
        }
        match next {
            Some(b) => a = b,
            None => break,
        }
    }
    cuts.sort_by_key(|c| (c.count(), c.to_vec()));
    cuts
}

/// Computes the MacNeille completion and verifies on return that the
/// embedding is injective, order-preserving, and order-reflecting, and that
/// every completion element is both a join and a meet of embedded elements.
pub fn macneille_completion(p: &Poset) -> Result<Completion, MacNeilleError> {
    let n = p.n();
    let cuts = enumerate_cuts(p);
    let m = cuts.len();

    let mut relation = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i != j && cuts[i].is_subset_of(&cuts[j]) {
                relation.push((i, j));
            }
        }
    }
    let lattice = Lattice::new(Poset::from_covers(m, &relation)?).map_err(|e| {
        MacNeilleError::Inconsistent(format!("cuts under inclusion do not form a lattice: {e}"))
    })?;

    let index: HashMap<&Bits, usize> = cuts.iter().zip(0..).collect();
    let mut embed = Vec::with_capacity(n);
    for x in 0..n {
        let principal = p.down_set(x);
        let i = index.get(principal).copied().ok_or_else(|| {
            MacNeilleError::Inconsistent(format!("the principal down-set of {x} is not a cut"))
        })?;
        embed.push(i);
    }

    for x in 0..n {
        for y in 0..n {
            if p.leq(x, y) != lattice.poset().leq(embed[x], embed[y]) {
                return Err(MacNeilleError::Inconsistent(format!(
                    "embedding does not reflect the order on the pair ({x}, {y})"
                )));
            }
        }
    }
    for (i, cut) in cuts.iter().enumerate() {
        let join = lattice.join_of(cut.iter().map(|x| embed[x]));
        if join != i {
            return Err(MacNeilleError::Inconsistent(format!(
                "cut {i} is not the join of its embedded members"
            )));
        }
        let mut upper = Bits::full(n);
        for e in cut.iter() {
            upper.intersect_with(p.up_set(e));
        }
        let meet = lattice.meet_of(upper.iter().map(|u| embed[u]));
        if meet != i {
            return Err(MacNeilleError::Inconsistent(format!(
                "cut {i} is not the meet of the embedded upper bounds"
            )));
        }
    }

    Ok(Completion {
        lattice,
        embed,
        cuts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::test_fixtures::{antichain, chain, m3, n5, r5};

    #[test]
    fn completing_a_lattice_changes_nothing() {
        for p in [chain(1), chain(4), n5(), m3(), r5()] {
            let c = macneille_completion(&p).unwrap();
            assert!(c.is_bijective());
            assert!(c.lattice().poset().is_isomorphic(&p).unwrap());
            // On a lattice the embedding is an isomorphism onto the
            // completion, so it maps bottom to bottom and top to top.
            let minimum = p.minimum().unwrap();
            assert_eq!(c.embed_of(minimum), c.lattice().bottom());
        }
    }

    #[test]
    fn two_element_antichain_completes_to_the_diamond() {
        let p = antichain(2);
        let c = macneille_completion(&p).unwrap();
        assert_eq!(c.lattice().n(), 4);
        assert_eq!(c.cut(0).to_vec(), Vec::<usize>::new());
        assert_eq!(c.cut(3).to_vec(), vec![0, 1]);
        assert_eq!(c.embed(), &[1, 2]);
        assert!(!c.lattice().poset().leq(1, 2));
        assert!(!c.lattice().poset().leq(2, 1));
    }

    #[test]
    fn bruhat_order_on_three_letters_completes_to_a_distributive_lattice() {
        // Permutations 123, 132, 213, 231, 312, 321: the three-element
        // Bruhat order, which is not a lattice (132 and 213 have two minimal
        // upper bounds).  One cut is inserted between the two levels.
        let p = Poset::from_covers(
            6,
            &[
                (0, 1),
                (0, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 5),
                (4, 5),
            ],
        )
        .unwrap();
        let c = macneille_completion(&p).unwrap();
        assert_eq!(c.lattice().n(), 7);
        assert!(c.lattice().is_distributive());
        // The new element is the cut {123, 132, 213}.
        let added: Vec<&Bits> = c
            .cuts()
            .iter()
            .filter(|cut| (0..p.n()).all(|x| c.cut(c.embed_of(x)) != *cut))
            .collect();
        assert_eq!(added.len(), 1);
        assert_eq!(added[0].to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn zigzag_gains_a_bottom_and_a_top() {
        // The fence 0 < 2, 1 < 2, 1 < 3 has neither a minimum nor a maximum
        // and one genuinely new cut never appears: its six cuts are ∅, {0},
        // {1}, {1,3}, {0,1,2}, and the whole set.
        let p = Poset::from_covers(4, &[(0, 2), (1, 2), (1, 3)]).unwrap();
        let c = macneille_completion(&p).unwrap();
        assert_eq!(c.lattice().n(), 6);
        let cut_sets: Vec<Vec<usize>> = c.cuts().iter().map(|b| b.to_vec()).collect();
        assert_eq!(
            cut_sets,
            vec![
                vec![],
                vec![0],
                vec![1],
                vec![1, 3],
                vec![0, 1, 2],
                vec![0, 1, 2, 3]
            ]
        );
    }

    #[test]
    fn completion_is_idempotent() {
        for p in [
            antichain(3),
            Poset::from_covers(4, &[(0, 2), (1, 2), (1, 3)]).unwrap(),
            Poset::from_covers(5, &[(0, 2), (0, 3), (1, 3), (1, 4)]).unwrap(),
        ] {
            let once = macneille_completion(&p).unwrap();
            let twice = macneille_completion(once.lattice().poset()).unwrap();
            assert!(twice.is_bijective());
            assert!(twice
                .lattice()
                .poset()
                .is_isomorphic(once.lattice().poset())
                .unwrap());
        }
    }

    #[test]
    fn completion_is_never_larger_than_the_boolean_bound() {
        // Crude minimality proxy: the completion embeds into the lattice of
        // down-sets generated by joins of at most |P| principal cuts, so it
        // can never exceed 2^|P| elements; check the much finer bound that
        // the antichain on n elements completes to exactly n + 2 cuts.
        for n in 2..=5 {
            let c = macneille_completion(&antichain(n)).unwrap();
            assert_eq!(c.lattice().n(), n + 2);
        }
    }
}
