//! Lattice structure over a finite poset: meet/join tables, irreducibles,
//! the pop-stack operator and Υ-sets, distributivity and semidistributivity
//! tests, the canonical join labeling, and the rowmotion operators.

use crate::bits::Bits;
use crate::extension::{ElementBijection, LinearExtension};
use crate::poset::{Poset, PosetError};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("elements {x} and {y} have no meet")]
    NoMeet { x: usize, y: usize },
    #[error("elements {x} and {y} have no join")]
    NoJoin { x: usize, y: usize },
    #[error("the set {{z : z ∨ {x} = {y}}} has no minimum; lattice is not semidistributive")]
    NoCanonicalLabel { x: usize, y: usize },
    #[error("operation requires a distributive lattice")]
    NotDistributive,
    #[error("label-set matching is not a bijection; input is not semidistributive")]
    LabelMatchingFailed,
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// A finite lattice: a poset together with total meet and join tables.
#[derive(Debug, Clone)]
pub struct Lattice {
    poset: Poset,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
    join_irreducibles: Vec<usize>,
    meet_irreducibles: Vec<usize>,
}

impl Lattice {
    /// Builds the meet and join tables, failing with the offending pair if
    /// some meet or join does not exist.
    pub fn new(poset: Poset) -> Result<Lattice, LatticeError> {
        let n = poset.n();
        if n == 0 {
            return Err(LatticeError::Poset(PosetError::InvalidInput(
                "a lattice must be nonempty".into(),
            )));
        }
        let mut meet = vec![0usize; n * n];
        let mut join = vec![0usize; n * n];
        for x in 0..n {
            for y in x..n {
                let lower = poset.down_set(x).intersection(poset.down_set(y));
                let m = unique_maximum(&poset, &lower, true)
                    .ok_or(LatticeError::NoMeet { x, y })?;
                let upper = poset.up_set(x).intersection(poset.up_set(y));
                let j = unique_maximum(&poset, &upper, false)
                    .ok_or(LatticeError::NoJoin { x, y })?;
                meet[x * n + y] = m;
                meet[y * n + x] = m;
                join[x * n + y] = j;
                join[y * n + x] = j;
            }
        }
        let bottom = poset
            .minimum()
            .expect("all pairwise meets exist, so there is a minimum");
        let top = poset
            .maximum()
            .expect("all pairwise joins exist, so there is a maximum");
        let join_irreducibles = (0..n).filter(|&x| poset.down_covers(x).len() == 1).collect();
        let meet_irreducibles = (0..n).filter(|&x| poset.up_covers(x).len() == 1).collect();
        Ok(Lattice {
            poset,
            meet,
            join,
            bottom,
            top,
            join_irreducibles,
            meet_irreducibles,
        })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn n(&self) -> usize {
        self.poset.n()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.n() + y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.n() + y]
    }

    /// Meet of a set of elements; the empty meet is the top.
    pub fn meet_of(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join of a set of elements; the empty join is the bottom.
    pub fn join_of(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Elements covering exactly one element.
    pub fn join_irreducibles(&self) -> &[usize] {
        &self.join_irreducibles
    }

    /// Elements covered by exactly one element.
    pub fn meet_irreducibles(&self) -> &[usize] {
        &self.meet_irreducibles
    }

    /// The unique element covered by a join-irreducible.
    pub fn ji_lower(&self, j: usize) -> usize {
        debug_assert_eq!(self.poset.down_covers(j).len(), 1);
        self.poset.down_covers(j)[0]
    }

    /// The unique element covering a meet-irreducible.
    pub fn mi_upper(&self, m: usize) -> usize {
        debug_assert_eq!(self.poset.up_covers(m).len(), 1);
        self.poset.up_covers(m)[0]
    }

    /// Pop-stack: the meet of `x` with all its lower covers.
    pub fn popdown(&self, x: usize) -> usize {
        self.meet_of(std::iter::once(x).chain(self.poset.down_covers(x).iter().copied()))
    }

    /// Dual pop-stack: the join of `x` with all its upper covers.
    pub fn popup(&self, x: usize) -> usize {
        self.join_of(std::iter::once(x).chain(self.poset.up_covers(x).iter().copied()))
    }

    /// `Υ(x) = {z : z ∧ x = popdown(x)}`, in element order.
    pub fn upsilon(&self, x: usize) -> Vec<usize> {
        let pd = self.popdown(x);
        (0..self.n()).filter(|&z| self.meet(z, x) == pd).collect()
    }

    /// The maximal elements of `Υ(x)`.
    pub fn upsilon_maxima(&self, x: usize) -> Vec<usize> {
        let ups = Bits::from_elems(self.n(), self.upsilon(x).iter().copied());
        maxima(&self.poset, &ups)
    }

    /// The σ-latest element of `Υ(x)`.
    pub fn max_extension_upsilon(&self, sigma: &LinearExtension, x: usize) -> usize {
        self.upsilon(x)
            .into_iter()
            .max_by_key(|&z| sigma.position(z))
            .expect("Υ(x) always contains popdown(x)")
    }

    /// Meet-semidistributivity by the definition: for every pair `x ≤ y`,
    /// the set `{z : z ∧ y = x}` has a maximum.
    ///
    /// Independently evaluates the irreducible criterion — `Υ(j)` has a
    /// maximum for every join-irreducible `j` — and asserts the two agree.
    pub fn is_meet_semidistributive(&self) -> bool {
        let n = self.n();
        let direct = (0..n).all(|x| {
            (0..n).filter(|&y| self.poset.leq(x, y)).all(|y| {
                let set =
                    Bits::from_elems(n, (0..n).filter(|&z| self.meet(z, y) == x));
                maxima(&self.poset, &set).len() == 1
            })
        });
        let via_irreducibles = self
            .join_irreducibles
            .iter()
            .all(|&j| self.upsilon_maxima(j).len() == 1);
        assert_eq!(
            direct, via_irreducibles,
            "semidistributivity criteria disagree"
        );
        direct
    }

    pub fn is_join_semidistributive(&self) -> bool {
        self.dual().is_meet_semidistributive()
    }

    pub fn is_semidistributive(&self) -> bool {
        self.is_meet_semidistributive() && self.is_join_semidistributive()
    }

    /// Distributivity via the triple law `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)`.
    pub fn is_distributive(&self) -> bool {
        let n = self.n();
        (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z))
                })
            })
        })
    }

    /// Modularity: `a ∨ (x ∧ b) = (a ∨ x) ∧ b` whenever `a ≤ b`.
    pub fn is_modular(&self) -> bool {
        let n = self.n();
        (0..n).all(|a| {
            (0..n).filter(|&b| self.poset.leq(a, b)).all(|b| {
                (0..n).all(|x| self.join(a, self.meet(x, b)) == self.meet(self.join(a, x), b))
            })
        })
    }

    /// The canonical label of the cover `x ⋖ y`: the minimum of
    /// `{z : z ∨ x = y}`.  Fails when that set has no minimum (which cannot
    /// happen in a semidistributive lattice); the minimum is always
    /// join-irreducible.
    pub fn canonical_edge_label(&self, x: usize, y: usize) -> Result<usize, LatticeError> {
        debug_assert!(self.poset.is_cover(x, y), "canonical labels live on covers");
        let set = Bits::from_elems(self.n(), (0..self.n()).filter(|&z| self.join(z, x) == y));
        let mins = minima(&self.poset, &set);
        match mins.as_slice() {
            [j] => {
                debug_assert_eq!(
                    self.poset.down_covers(*j).len(),
                    1,
                    "canonical labels are join-irreducible"
                );
                Ok(*j)
            }
            _ => Err(LatticeError::NoCanonicalLabel { x, y }),
        }
    }

    /// Downward and upward label sets of every element.
    pub fn label_sets(&self) -> Result<LabelSets, LatticeError> {
        let n = self.n();
        let mut down = vec![Vec::new(); n];
        let mut up = vec![Vec::new(); n];
        for y in 0..n {
            for &x in self.poset.down_covers(y) {
                let j = self.canonical_edge_label(x, y)?;
                down[y].push(j);
                up[x].push(j);
            }
        }
        for v in down.iter_mut().chain(up.iter_mut()) {
            v.sort_unstable();
        }
        Ok(LabelSets { down, up })
    }

    /// Rowmotion on a semidistributive lattice: the unique bijection with
    /// `U(Row(w)) = D(w)`.
    ///
    /// Built by matching label sets, then cross-checked against the
    /// characterization of `Row(w)` as the unique maximal element of `Υ(w)`.
    pub fn barnard_rowmotion(&self) -> Result<ElementBijection, LatticeError> {
        let labels = self.label_sets()?;
        let by_up: HashMap<&[usize], usize> = (0..self.n())
            .map(|w| (labels.up[w].as_slice(), w))
            .collect();
        if by_up.len() != self.n() {
            return Err(LatticeError::LabelMatchingFailed);
        }
        let mut image = Vec::with_capacity(self.n());
        for w in 0..self.n() {
            let Some(&r) = by_up.get(labels.down[w].as_slice()) else {
                return Err(LatticeError::LabelMatchingFailed);
            };
            image.push(r);
        }
        let row = ElementBijection::new(image).map_err(|_| LatticeError::LabelMatchingFailed)?;
        for w in 0..self.n() {
            let maxima = self.upsilon_maxima(w);
            if maxima != [row.apply(w)] {
                return Err(LatticeError::LabelMatchingFailed);
            }
        }
        Ok(row)
    }

    /// Rowmotion on a distributive lattice through its Birkhoff
    /// representation: an element corresponds to the down-set `I` of
    /// join-irreducibles below it, and its image corresponds to
    /// `J ∖ ∇(max I)` inside the subposet `J` of join-irreducibles.
    pub fn birkhoff_rowmotion(&self) -> Result<ElementBijection, LatticeError> {
        if !self.is_distributive() {
            return Err(LatticeError::NotDistributive);
        }
        let n = self.n();
        let j_set = Bits::from_elems(n, self.join_irreducibles.iter().copied());
        let mut image = Vec::with_capacity(n);
        for w in 0..n {
            // The ideal of w inside the subposet of join-irreducibles.
            let ideal = self.poset.down_set(w).intersection(&j_set);
            let top_antichain = maxima(&self.poset, &ideal);
            let mut keep = j_set.clone();
            for m in top_antichain {
                keep.difference_with(&self.poset.up_set(m).intersection(&j_set));
            }
            let next = self.join_of(keep.iter());
            debug_assert_eq!(
                self.poset.down_set(next).intersection(&j_set),
                keep,
                "the image's ideal must be the constructed set"
            );
            image.push(next);
        }
        Ok(ElementBijection::new(image)
            .expect("rowmotion on a distributive lattice is a bijection"))
    }

    /// For each `k`, the pair (number of elements with `k` upper covers,
    /// number of elements with `k` lower covers).
    pub fn dilworth_profile(&self) -> BTreeMap<usize, (usize, usize)> {
        let mut profile: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for x in 0..self.n() {
            profile.entry(self.poset.up_covers(x).len()).or_default().0 += 1;
            profile.entry(self.poset.down_covers(x).len()).or_default().1 += 1;
        }
        profile
    }

    /// The dual lattice (meets and joins swapped).
    pub fn dual(&self) -> Lattice {
        Lattice {
            poset: self.poset.dual(),
            meet: self.join.clone(),
            join: self.meet.clone(),
            bottom: self.top,
            top: self.bottom,
            join_irreducibles: self.meet_irreducibles.clone(),
            meet_irreducibles: self.join_irreducibles.clone(),
        }
    }
}

/// Downward and upward label sets (`D` and `U`), indexed by element, each
/// sorted.
#[derive(Debug, Clone)]
pub struct LabelSets {
    pub down: Vec<Vec<usize>>,
    pub up: Vec<Vec<usize>>,
}

/// The maximal elements of a subset.
fn maxima(p: &Poset, set: &Bits) -> Vec<usize> {
    set.iter()
        .filter(|&z| {
            let above = p.up_set(z).intersection(set);
            above.count() == 1
        })
        .collect()
}

/// The minimal elements of a subset.
fn minima(p: &Poset, set: &Bits) -> Vec<usize> {
    set.iter()
        .filter(|&z| {
            let below = p.down_set(z).intersection(set);
            below.count() == 1
        })
        .collect()
}

/// The maximum of a subset if it exists: its unique maximal element (for
/// `lower = true`) or unique minimal element (for `lower = false`, giving
/// the minimum, used for joins from above).
fn unique_maximum(p: &Poset, set: &Bits, lower: bool) -> Option<usize> {
    let candidates = if lower { maxima(p, set) } else { minima(p, set) };
    match candidates.as_slice() {
        [z] => Some(*z),
        _ => None,
    }
}
