//! Trim lattices: recognition, the maximum-length chain machinery
//! (`u_i`, `j_i`, `m_i`, κ), the γ edge labeling, the Galois graph, words and
//! vertebral linear extensions, trim rowmotion, and restriction to intervals.
//!
//! A finite lattice with `k = |𝒥| = |ℳ|` is *extremal* if it has a chain of
//! cardinality `k + 1`, and *trim* if it is extremal and some maximal chain
//! consists of left-modular elements.  Trim lattices need not be graded or
//! semidistributive, but they carry a canonical edge labeling by
//! join-irreducibles that supports a well-behaved rowmotion.

use crate::extension::{ElementBijection, LinearExtension};
use crate::lattice::{Lattice, LatticeError};
use crate::poset::PosetError;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrimError {
    #[error("({x}, {y}) is not a cover relation of the lattice")]
    NotACover { x: usize, y: usize },
    #[error("{v} ≤ {w} is required for an interval")]
    NotAnInterval { v: usize, w: usize },
    #[error("not a trim lattice: {0}")]
    NotTrim(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("structural invariant violated: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// The chain machinery of a trim lattice for one fixed maximum-length chain
/// `0̂ = u_0 ⋖ u_1 ⋖ … ⋖ u_k = 1̂`.
///
/// Holds the join-irreducible sequence `j_i` (with `j_i ∨ u_{i−1} = u_i`),
/// the meet-irreducible sequence `m_i` (with `m_i ∧ u_i = u_{i−1}`), the
/// bijection `κ(j_i) = m_i`, the edge labeling
/// `γ(x ⋖ y) = min{i : u_i ∨ x ≥ y}`, the Galois graph arcs, and the word
/// `w(u)` of every element (the sorted γ-labels of its up-edges followed by
/// the sentinel letter `k + 1`).
///
/// Immutable after construction; all operations are read-only.  A `TrimData`
/// is only meaningful together with the lattice it was built from.
#[derive(Debug, Clone)]
pub struct TrimData {
    chain: Vec<usize>,
    ji_seq: Vec<usize>,
    mi_seq: Vec<usize>,
    kappa: BTreeMap<usize, usize>,
    gamma: BTreeMap<(usize, usize), usize>,
    galois_arcs: Vec<(usize, usize)>,
    words: Vec<Vec<usize>>,
}

impl TrimData {
    /// Builds the chain machinery from a given maximum-length chain.
    ///
    /// The chain must be saturated from `0̂` to `1̂` and have cardinality
    /// `k + 1` with `k = |𝒥| = |ℳ|`; uniqueness of each `j_i` and `m_i`, the
    /// meet/join-irreducibility of the labels, acyclicity of the Galois
    /// graph, and injectivity of the word map are all verified and reported
    /// as [`TrimError::Inconsistent`] if violated.
    pub fn from_chain(l: &Lattice, chain: &[usize]) -> Result<TrimData, TrimError> {
        let ji = l.join_irreducibles();
        let mi = l.meet_irreducibles();
        if ji.len() != mi.len() {
            return Err(TrimError::NotTrim(format!(
                "lattice is not extremal: {} join-irreducibles but {} meet-irreducibles",
                ji.len(),
                mi.len()
            )));
        }
        let k = ji.len();
        if chain.len() != k + 1 {
            return Err(TrimError::InvalidChain(format!(
                "chain has cardinality {}, expected {}",
                chain.len(),
                k + 1
            )));
        }
        if chain[0] != l.bottom() || chain[k] != l.top() {
            return Err(TrimError::InvalidChain(
                "chain must run from the bottom element to the top element".into(),
            ));
        }
        for pair in chain.windows(2) {
            if !l.poset().is_cover(pair[0], pair[1]) {
                return Err(TrimError::InvalidChain(format!(
                    "{} ⋖ {} is not a cover relation",
                    pair[0], pair[1]
                )));
            }
        }

        // j_i is the unique join-irreducible with j_i ∨ u_{i−1} = u_i, and
        // m_i the unique meet-irreducible with m_i ∧ u_i = u_{i−1}.
        let mut ji_seq = Vec::with_capacity(k);
        let mut mi_seq = Vec::with_capacity(k);
        for i in 1..=k {
            let js: Vec<usize> = ji
                .iter()
                .copied()
                .filter(|&j| l.join(j, chain[i - 1]) == chain[i])
                .collect();
            if js.len() != 1 {
                return Err(TrimError::Inconsistent(format!(
                    "expected a unique join-irreducible j with j ∨ {} = {}, found {:?}",
                    chain[i - 1],
                    chain[i],
                    js
                )));
            }
            let ms: Vec<usize> = mi
                .iter()
                .copied()
                .filter(|&m| l.meet(m, chain[i]) == chain[i - 1])
                .collect();
            if ms.len() != 1 {
                return Err(TrimError::Inconsistent(format!(
                    "expected a unique meet-irreducible m with m ∧ {} = {}, found {:?}",
                    chain[i],
                    chain[i - 1],
                    ms
                )));
            }
            ji_seq.push(js[0]);
            mi_seq.push(ms[0]);
        }
        let kappa: BTreeMap<usize, usize> =
            ji_seq.iter().copied().zip(mi_seq.iter().copied()).collect();
        if kappa.len() != k {
            return Err(TrimError::Inconsistent(
                "the sequence j_1, …, j_k has a repeated element".into(),
            ));
        }

        // γ(x ⋖ y) = min{i ∈ [k] : u_i ∨ x ≥ y}; u_k = 1̂ always qualifies.
        let mut gamma = BTreeMap::new();
        for &(x, y) in l.poset().covers() {
            let g = (1..=k)
                .find(|&i| l.poset().leq(y, l.join(chain[i], x)))
                .ok_or_else(|| {
                    TrimError::Inconsistent(format!("no chain index labels the edge {x} ⋖ {y}"))
                })?;
            gamma.insert((x, y), g);
        }

        // Galois arcs j → j′ iff j ≠ j′ and j ≰ κ(j′); must be acyclic.
        let mut galois_arcs = Vec::new();
        for &j in ji {
            for &j2 in ji {
                if j != j2 && !l.poset().leq(j, kappa[&j2]) {
                    galois_arcs.push((j, j2));
                }
            }
        }
        galois_arcs.sort_unstable();
        if !is_acyclic(ji, &galois_arcs) {
            return Err(TrimError::Inconsistent(
                "the Galois graph contains a directed cycle".into(),
            ));
        }

        // w(u): γ-labels of up-edges in increasing order, then the sentinel.
        let n = l.n();
        let mut words = Vec::with_capacity(n);
        for u in 0..n {
            let mut w: Vec<usize> = l
                .poset()
                .up_covers(u)
                .iter()
                .map(|&y| gamma[&(u, y)])
                .collect();
            w.sort_unstable();
            w.push(k + 1);
            if w.windows(2).any(|p| p[0] >= p[1]) {
                return Err(TrimError::Inconsistent(format!(
                    "the word of element {u} is not strictly increasing: {w:?}"
                )));
            }
            words.push(w);
        }
        let mut sorted_words = words.clone();
        sorted_words.sort();
        if sorted_words.windows(2).any(|p| p[0] == p[1]) {
            return Err(TrimError::Inconsistent(
                "two elements share the same word".into(),
            ));
        }

        let data = TrimData {
            chain: chain.to_vec(),
            ji_seq,
            mi_seq,
            kappa,
            gamma,
            galois_arcs,
            words,
        };

        // Cross-check κ against its other characterization: rowmotion
        // restricted to the join-irreducibles.  (`trim_rowmotion` performs
        // that comparison internally.)
        #[cfg(debug_assertions)]
        data.trim_rowmotion(l)?;

        Ok(data)
    }

    /// The chain `u_0, …, u_k`.
    pub fn chain(&self) -> &[usize] {
        &self.chain
    }

    /// `k = |𝒥| = |ℳ|`, the length of the chain.
    pub fn k(&self) -> usize {
        self.chain.len() - 1
    }

    /// The join-irreducibles `j_1, …, j_k` along the chain.
    pub fn ji_seq(&self) -> &[usize] {
        &self.ji_seq
    }

    /// The meet-irreducibles `m_1, …, m_k` along the chain.
    pub fn mi_seq(&self) -> &[usize] {
        &self.mi_seq
    }

    /// The bijection `κ : 𝒥 → ℳ`, `κ(j_i) = m_i`.
    pub fn kappa(&self) -> &BTreeMap<usize, usize> {
        &self.kappa
    }

    /// `κ(j)`, or `None` if `j` is not join-irreducible.
    pub fn kappa_of(&self, j: usize) -> Option<usize> {
        self.kappa.get(&j).copied()
    }

    /// `γ(x ⋖ y) = min{i ∈ [k] : u_i ∨ x ≥ y}` for a cover edge.
    pub fn gamma_label(&self, x: usize, y: usize) -> Result<usize, TrimError> {
        self.gamma
            .get(&(x, y))
            .copied()
            .ok_or(TrimError::NotACover { x, y })
    }

    /// The join-irreducible label `jj_{x,y} = j_{γ(x ⋖ y)}` of a cover edge.
    pub fn edge_label(&self, x: usize, y: usize) -> Result<usize, TrimError> {
        Ok(self.ji_seq[self.gamma_label(x, y)? - 1])
    }

    /// The arcs of the Galois graph on `𝒥`, sorted.
    pub fn galois_arcs(&self) -> &[(usize, usize)] {
        &self.galois_arcs
    }

    /// The number of independent sets of the Galois graph (arcs in either
    /// direction forbidden).  Both the down-label and up-label maps are
    /// bijections from the lattice onto these sets, so the count equals the
    /// number of lattice elements.
    pub fn galois_independent_set_count(&self) -> u128 {
        let verts = &self.ji_seq;
        let k = verts.len();
        assert!(k < 64, "independent-set enumeration is desk-scale only");
        let index: HashMap<usize, usize> = verts.iter().copied().zip(0..).collect();
        let mut adj = vec![0u64; k];
        for &(a, b) in &self.galois_arcs {
            adj[index[&a]] |= 1 << index[&b];
            adj[index[&b]] |= 1 << index[&a];
        }
        let mut count = 0u128;
        for mask in 0..(1u64 << k) {
            if (0..k).all(|v| mask & (1 << v) == 0 || mask & adj[v] == 0) {
                count += 1;
            }
        }
        count
    }

    /// The word `w(x)` over the alphabet `[k + 1]`.
    pub fn word(&self, x: usize) -> &[usize] {
        &self.words[x]
    }

    /// All words, indexed by element.
    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    /// `𝒟(u)`: the join-irreducible labels of the down-edges of `u`, sorted.
    pub fn down_label_set(&self, l: &Lattice, u: usize) -> Vec<usize> {
        let mut d: Vec<usize> = l
            .poset()
            .down_covers(u)
            .iter()
            .map(|&x| self.ji_seq[self.gamma[&(x, u)] - 1])
            .collect();
        d.sort_unstable();
        d
    }

    /// `𝒰(u)`: the join-irreducible labels of the up-edges of `u`, sorted.
    pub fn up_label_set(&self, l: &Lattice, u: usize) -> Vec<usize> {
        let mut s: Vec<usize> = l
            .poset()
            .up_covers(u)
            .iter()
            .map(|&y| self.ji_seq[self.gamma[&(u, y)] - 1])
            .collect();
        s.sort_unstable();
        s
    }

    /// The vertebral linear extension `σ_C`: elements sorted by the
    /// lexicographic order on their words.
    ///
    /// The word map is injective, so the order is total; that it is a linear
    /// extension of the lattice order is verified on return.
    pub fn vertebral_extension(&self, l: &Lattice) -> Result<LinearExtension, TrimError> {
        let mut order: Vec<usize> = (0..l.n()).collect();
        order.sort_by(|&a, &b| self.words[a].cmp(&self.words[b]));
        LinearExtension::from_order(l.poset(), &order).map_err(|_| {
            TrimError::Inconsistent(
                "lexicographic order on words is not a linear extension".into(),
            )
        })
    }

    /// Rowmotion on a trim lattice: the unique bijection `Row` with
    /// `𝒰(Row(x)) = 𝒟(x)` for all `x`.
    ///
    /// Verifies that the matching is a bijection, that
    /// `Row(x) ∈ max Υ(x)` for every `x`, and that `Row` restricted to the
    /// join-irreducibles equals `κ`.
    pub fn trim_rowmotion(&self, l: &Lattice) -> Result<ElementBijection, TrimError> {
        let n = l.n();
        let k = self.k();
        // Match on γ-index words: the word of `u` already encodes 𝒰(u), and
        // the down-set analogue is built the same way.
        let by_word: HashMap<&[usize], usize> =
            (0..n).map(|u| (self.words[u].as_slice(), u)).collect();
        let mut image = Vec::with_capacity(n);
        for x in 0..n {
            let mut d: Vec<usize> = l
                .poset()
                .down_covers(x)
                .iter()
                .map(|&w| self.gamma[&(w, x)])
                .collect();
            d.sort_unstable();
            if d.windows(2).any(|p| p[0] == p[1]) {
                return Err(TrimError::Inconsistent(format!(
                    "down-edges of element {x} carry a repeated label"
                )));
            }
            d.push(k + 1);
            let y = *by_word.get(d.as_slice()).ok_or_else(|| {
                TrimError::Inconsistent(format!(
                    "no element has up-label set matching the down-label set of {x}"
                ))
            })?;
            image.push(y);
        }
        let row = ElementBijection::new(image)
            .map_err(|_| TrimError::Inconsistent("label matching is not a bijection".into()))?;
        for x in 0..n {
            if !l.upsilon_maxima(x).contains(&row.apply(x)) {
                return Err(TrimError::Inconsistent(format!(
                    "rowmotion image of {x} is not a maximal element of Υ({x})"
                )));
            }
        }
        for (&j, &m) in &self.kappa {
            if row.apply(j) != m {
                return Err(TrimError::Inconsistent(format!(
                    "rowmotion sends join-irreducible {j} to {} but κ({j}) = {m}",
                    row.apply(j)
                )));
            }
        }
        Ok(row)
    }
}

/// The elements `x` satisfying the left-modularity law
/// `(y ∨ x) ∧ z = y ∨ (x ∧ z)` for all `y ≤ z`.
pub fn left_modular_elements(l: &Lattice) -> Vec<usize> {
    let n = l.n();
    (0..n)
        .filter(|&x| {
            (0..n).all(|y| {
                (0..n)
                    .filter(|&z| l.poset().leq(y, z))
                    .all(|z| l.meet(l.join(y, x), z) == l.join(y, l.meet(x, z)))
            })
        })
        .collect()
}

/// Tests trimness and, on success, builds the canonical chain machinery.
///
/// Extremality is checked by a longest-chain computation against
/// `|𝒥| = |ℳ|`; left-modularity by searching for a saturated `0̂`–`1̂` chain
/// inside the left-modular element set.  The canonical chain is the
/// lexicographically least maximum-length left-modular chain (least element
/// index at each step from the bottom).
pub fn trim_data(l: &Lattice) -> Result<Option<TrimData>, TrimError> {
    let n = l.n();
    let k = l.join_irreducibles().len();
    if l.meet_irreducibles().len() != k {
        return Ok(None);
    }

    // Longest chain ending at each element, walking a linear extension so
    // that lower covers are always processed first.
    let ext = l.poset().first_extension();
    let mut card = vec![0usize; n];
    for idx in 0..n {
        let x = ext.element(idx);
        card[x] = 1 + l
            .poset()
            .down_covers(x)
            .iter()
            .map(|&d| card[d])
            .max()
            .unwrap_or(0);
    }
    if card[l.top()] != k + 1 {
        return Ok(None);
    }

    // Longest saturated chain from each left-modular element up to the top,
    // moving only through left-modular elements; 0 marks "top unreachable".
    let lm = left_modular_elements(l);
    let is_lm: Vec<bool> = {
        let mut v = vec![false; n];
        for &x in &lm {
            v[x] = true;
        }
        v
    };
    let mut reach = vec![0usize; n];
    for idx in (0..n).rev() {
        let x = ext.element(idx);
        if !is_lm[x] {
            continue;
        }
        if x == l.top() {
            reach[x] = 1;
            continue;
        }
        let best = l
            .poset()
            .up_covers(x)
            .iter()
            .filter(|&&y| is_lm[y] && reach[y] > 0)
            .map(|&y| reach[y])
            .max()
            .unwrap_or(0);
        if best > 0 {
            reach[x] = 1 + best;
        }
    }
    if reach[l.bottom()] == 0 {
        return Ok(None);
    }
    if reach[l.bottom()] != k + 1 {
        return Err(TrimError::Inconsistent(
            "extremal lattice has a left-modular maximal chain but none of maximum length".into(),
        ));
    }

    let mut chain = vec![l.bottom()];
    for i in 1..=k {
        let cur = *chain.last().expect("chain starts nonempty");
        let next = l
            .poset()
            .up_covers(cur)
            .iter()
            .copied()
            .filter(|&y| is_lm[y] && reach[y] == k + 1 - i)
            .min()
            .expect("reach guarantees the chain can be completed");
        chain.push(next);
    }
    TrimData::from_chain(l, &chain).map(Some)
}

/// Whether the lattice is trim (extremal and left modular).
pub fn is_trim(l: &Lattice) -> Result<bool, TrimError> {
    trim_data(l).map(|d| d.is_some())
}

/// All maximum-length chains `0̂ = u_0 ⋖ … ⋖ u_k = 1̂`, in lexicographic
/// order by element index.
pub fn maximum_length_chains(l: &Lattice) -> Vec<Vec<usize>> {
    let n = l.n();
    let ext = l.poset().first_extension();
    // Longest saturated chain from each element up to the top.
    let mut reach = vec![0usize; n];
    for idx in (0..n).rev() {
        let x = ext.element(idx);
        reach[x] = 1 + l
            .poset()
            .up_covers(x)
            .iter()
            .map(|&y| reach[y])
            .max()
            .unwrap_or(0);
    }
    let longest = reach[l.bottom()];
    let mut chains = Vec::new();
    let mut cur = vec![l.bottom()];
    collect_chains(l, &reach, longest, &mut cur, &mut chains);
    chains
}

fn collect_chains(
    l: &Lattice,
    reach: &[usize],
    longest: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let x = *cur.last().expect("chain is never empty");
    if cur.len() == longest {
        if x == l.top() {
            out.push(cur.clone());
        }
        return;
    }
    for &y in l.poset().up_covers(x) {
        if reach[y] == longest - cur.len() {
            cur.push(y);
            collect_chains(l, reach, longest, cur, out);
            cur.pop();
        }
    }
}

/// The restriction of the chain machinery to an interval `[v, w]`.
pub struct IntervalRestriction {
    /// The interval as a lattice in its own right.
    pub lattice: Lattice,
    /// Map from interval element indices to elements of the ambient lattice.
    pub elements: Vec<usize>,
    /// Trim data for the interval, built from the restricted chain
    /// `C′ = {(v ∨ u) ∧ w : u ∈ C}`.
    pub data: TrimData,
}

/// Restricts a trim lattice to the interval `[v, w]` along the chain
/// `C′ = {(v ∨ u) ∧ w : u ∈ C}`.
///
/// Verifies that `C′` is a maximum-length chain of the interval and that the
/// relabeling law `γ_{C′}(x ⋖ y) = φ(γ_C(x ⋖ y))` holds on every cover edge
/// of the interval, where `φ` is the unique order-preserving bijection from
/// the set of ambient γ-labels occurring in the interval onto `[k′]`.
pub fn interval_trim_restriction(
    l: &Lattice,
    data: &TrimData,
    v: usize,
    w: usize,
) -> Result<IntervalRestriction, TrimError> {
    if !l.poset().leq(v, w) {
        return Err(TrimError::NotAnInterval { v, w });
    }
    // (v ∨ u) ∧ w is weakly increasing along the chain, so consecutive
    // deduplication recovers the set C′ in chain order.
    let mut cprime: Vec<usize> = data
        .chain()
        .iter()
        .map(|&u| l.meet(l.join(v, u), w))
        .collect();
    cprime.dedup();

    let (sub_poset, elements) = l.poset().interval(v, w)?;
    let sub = Lattice::new(sub_poset)?;
    let to_sub: HashMap<usize, usize> = elements.iter().copied().zip(0..).collect();
    let chain_sub: Vec<usize> = cprime.iter().map(|&x| to_sub[&x]).collect();
    let sub_data = TrimData::from_chain(&sub, &chain_sub).map_err(|e| {
        TrimError::Inconsistent(format!(
            "restricted chain is not a maximum-length chain of the interval: {e}"
        ))
    })?;
    let k_sub = sub_data.k();

    // Ambient γ-labels on the interval's edges, and the order-preserving
    // relabeling φ onto [k′].
    let mut ambient: Vec<usize> = sub
        .poset()
        .covers()
        .iter()
        .map(|&(x, y)| data.gamma[&(elements[x], elements[y])])
        .collect();
    ambient.sort_unstable();
    ambient.dedup();
    if ambient.len() != k_sub {
        return Err(TrimError::Inconsistent(format!(
            "{} distinct ambient labels occur in the interval, expected {}",
            ambient.len(),
            k_sub
        )));
    }
    for &(x, y) in sub.poset().covers() {
        let g_ambient = data.gamma[&(elements[x], elements[y])];
        let phi = ambient
            .binary_search(&g_ambient)
            .expect("labels collected from these exact edges")
            + 1;
        let g_sub = sub_data.gamma[&(x, y)];
        if g_sub != phi {
            return Err(TrimError::Inconsistent(format!(
                "edge {} ⋖ {} relabels to {} but φ({}) = {}",
                elements[x], elements[y], g_sub, g_ambient, phi
            )));
        }
    }

    Ok(IntervalRestriction {
        lattice: sub,
        elements,
        data: sub_data,
    })
}

fn is_acyclic(vertices: &[usize], arcs: &[(usize, usize)]) -> bool {
    let index: HashMap<usize, usize> = vertices.iter().copied().zip(0..).collect();
    let k = vertices.len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut indeg = vec![0usize; k];
    for &(a, b) in arcs {
        out[index[&a]].push(index[&b]);
        indeg[index[&b]] += 1;
    }
    let mut queue: Vec<usize> = (0..k).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &t in &out[v] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                queue.push(t);
            }
        }
    }
    seen == k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::echelon::echelonmotion;
    use crate::poset::test_fixtures::{chain, m3, n5, r5};
    use crate::poset::Poset;

    fn lattice(p: Poset) -> Lattice {
        Lattice::new(p).expect("test fixture is a lattice")
    }

    fn b2() -> Poset {
        Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn hexagon() -> Poset {
        Poset::from_covers(6, &[(0, 1), (0, 2), (1, 3), (2, 4), (3, 5), (4, 5)]).unwrap()
    }

    #[test]
    fn pentagon_trim_data_matches_hand_computation() {
        let l = lattice(n5());
        let data = trim_data(&l).unwrap().expect("the pentagon is trim");
        assert_eq!(data.chain(), &[0, 1, 2, 4]);
        assert_eq!(data.k(), 3);
        assert_eq!(data.ji_seq(), &[1, 2, 3]);
        assert_eq!(data.mi_seq(), &[3, 1, 2]);
        assert_eq!(data.kappa_of(1), Some(3));
        assert_eq!(data.kappa_of(2), Some(1));
        assert_eq!(data.kappa_of(3), Some(2));
        assert_eq!(data.kappa_of(0), None);
        assert_eq!(data.gamma_label(0, 1).unwrap(), 1);
        assert_eq!(data.gamma_label(1, 2).unwrap(), 2);
        assert_eq!(data.gamma_label(2, 4).unwrap(), 3);
        assert_eq!(data.gamma_label(0, 3).unwrap(), 3);
        assert_eq!(data.gamma_label(3, 4).unwrap(), 1);
        assert!(matches!(
            data.gamma_label(0, 4),
            Err(TrimError::NotACover { x: 0, y: 4 })
        ));
        assert_eq!(data.edge_label(0, 3).unwrap(), 3);
        assert_eq!(data.galois_arcs(), &[(2, 1), (3, 2)]);
        assert_eq!(data.galois_independent_set_count(), 5);
        assert_eq!(
            data.words(),
            &[
                vec![1, 3, 4],
                vec![2, 4],
                vec![3, 4],
                vec![1, 4],
                vec![4]
            ]
        );
    }

    #[test]
    fn recognizes_trim_and_non_trim_lattices() {
        // The diamond M3 is not extremal: three irreducibles of each kind,
        // but its longest chain has cardinality three.
        assert!(!is_trim(&lattice(m3())).unwrap());
        // The hexagon is semidistributive but not extremal.
        assert!(!is_trim(&lattice(hexagon())).unwrap());
        // Distributive lattices are trim.
        assert!(is_trim(&lattice(r5())).unwrap());
        assert!(is_trim(&lattice(b2())).unwrap());
        assert!(is_trim(&lattice(chain(1))).unwrap());
        assert!(is_trim(&lattice(chain(5))).unwrap());
    }

    #[test]
    fn pentagon_left_modular_elements_exclude_the_short_side() {
        let l = lattice(n5());
        assert_eq!(left_modular_elements(&l), vec![0, 1, 2, 4]);
    }

    #[test]
    fn canonical_chain_is_lexicographically_least() {
        let l = lattice(r5());
        let data = trim_data(&l).unwrap().unwrap();
        assert_eq!(data.chain(), &[0, 1, 3, 4]);
        assert_eq!(data.ji_seq(), &[1, 2, 4]);
        assert_eq!(data.mi_seq(), &[2, 1, 3]);
        assert_eq!(
            maximum_length_chains(&l),
            vec![vec![0, 1, 3, 4], vec![0, 2, 3, 4]]
        );
        assert_eq!(maximum_length_chains(&lattice(n5())), vec![vec![0, 1, 2, 4]]);
    }

    #[test]
    fn chain_lattices_have_transitive_galois_graphs() {
        let l = lattice(chain(4));
        let data = trim_data(&l).unwrap().unwrap();
        assert_eq!(data.chain(), &[0, 1, 2, 3]);
        for i in 1..=3 {
            assert_eq!(data.gamma_label(i - 1, i).unwrap(), i);
            assert_eq!(data.kappa_of(i), Some(i - 1));
        }
        // j_a ≰ κ(j_b) = u_{b−1} exactly when a > b, so arcs point from
        // later chain labels to earlier ones and independent sets are the
        // singletons together with the empty set.
        assert_eq!(data.galois_arcs(), &[(2, 1), (3, 1), (3, 2)]);
        assert_eq!(data.galois_independent_set_count(), 4);
        let row = data.trim_rowmotion(&l).unwrap();
        assert_eq!(row.images(), &[3, 0, 1, 2]);
    }

    #[test]
    fn vertebral_extensions_sort_elements_by_word() {
        let l = lattice(n5());
        let data = trim_data(&l).unwrap().unwrap();
        let sigma = data.vertebral_extension(&l).unwrap();
        assert_eq!(sigma.order(), &[0, 3, 1, 2, 4]);

        let l = lattice(r5());
        let data = trim_data(&l).unwrap().unwrap();
        let sigma = data.vertebral_extension(&l).unwrap();
        assert_eq!(sigma.order(), &[0, 2, 1, 3, 4]);

        let l = lattice(chain(4));
        let data = trim_data(&l).unwrap().unwrap();
        assert_eq!(data.vertebral_extension(&l).unwrap().order(), &[0, 1, 2, 3]);
    }

    #[test]
    fn trim_rowmotion_matches_hand_computations() {
        let l = lattice(n5());
        let data = trim_data(&l).unwrap().unwrap();
        let row = data.trim_rowmotion(&l).unwrap();
        assert_eq!(row.images(), &[4, 3, 1, 2, 0]);
        assert_eq!(
            row.images(),
            l.barnard_rowmotion().unwrap().images(),
            "the pentagon is semidistributive, so the two rowmotions agree"
        );

        let l = lattice(r5());
        let data = trim_data(&l).unwrap().unwrap();
        assert_eq!(data.trim_rowmotion(&l).unwrap().images(), &[4, 2, 1, 0, 3]);

        let l = lattice(b2());
        let data = trim_data(&l).unwrap().unwrap();
        assert_eq!(data.trim_rowmotion(&l).unwrap().images(), &[3, 2, 1, 0]);
    }

    #[test]
    fn echelonmotion_along_any_vertebral_extension_is_rowmotion() {
        for p in [n5(), r5(), chain(5), b2()] {
            let l = lattice(p);
            for chain in maximum_length_chains(&l) {
                let data = TrimData::from_chain(&l, &chain).unwrap();
                let sigma = data.vertebral_extension(&l).unwrap();
                let ech = echelonmotion(l.poset(), &sigma).unwrap();
                let row = data.trim_rowmotion(&l).unwrap();
                assert_eq!(ech.images(), row.images(), "chain {chain:?}");
            }
        }
    }

    #[test]
    fn label_sets_generate_elements_and_index_independent_sets() {
        for p in [n5(), r5(), chain(5), b2()] {
            let l = lattice(p);
            let data = trim_data(&l).unwrap().unwrap();
            assert_eq!(data.galois_independent_set_count(), l.n() as u128);
            let forbidden: std::collections::HashSet<(usize, usize)> =
                data.galois_arcs().iter().copied().collect();
            for x in 0..l.n() {
                let d = data.down_label_set(&l, x);
                let u = data.up_label_set(&l, x);
                // Every element is the join of its down labels and the meet
                // of κ applied to its up labels.
                assert_eq!(l.join_of(d.iter().copied()), x);
                assert_eq!(
                    l.meet_of(u.iter().map(|&j| data.kappa_of(j).unwrap())),
                    x
                );
                for s in [&d, &u] {
                    for &a in s {
                        for &b in s {
                            assert!(!forbidden.contains(&(a, b)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn interval_restriction_recovers_sub_chain_machinery() {
        let l = lattice(n5());
        let data = trim_data(&l).unwrap().unwrap();

        // [a, 1̂] is a three-element chain.
        let r = interval_trim_restriction(&l, &data, 1, 4).unwrap();
        assert_eq!(r.elements, vec![1, 2, 4]);
        assert_eq!(r.data.chain(), &[0, 1, 2]);
        assert_eq!(r.data.k(), 2);

        // A singleton interval.
        let r = interval_trim_restriction(&l, &data, 3, 3).unwrap();
        assert_eq!(r.lattice.n(), 1);
        assert_eq!(r.data.chain(), &[0]);
        assert_eq!(r.data.words(), &[vec![1]]);

        // The lower diamond of the distributive five-element lattice; the
        // relabeling law is checked internally on all four edges.
        let l = lattice(r5());
        let data = trim_data(&l).unwrap().unwrap();
        let r = interval_trim_restriction(&l, &data, 0, 3).unwrap();
        assert_eq!(r.elements, vec![0, 1, 2, 3]);
        assert_eq!(r.data.chain(), &[0, 1, 3]);
        assert_eq!(r.data.kappa_of(1), Some(2));
        assert_eq!(r.data.kappa_of(2), Some(1));

        assert!(matches!(
            interval_trim_restriction(&l, &data, 1, 2),
            Err(TrimError::NotAnInterval { v: 1, w: 2 })
        ));
    }

    #[test]
    fn restricting_to_an_upper_interval_reindexes_the_vertebral_extension() {
        // σ_{C′} = ψ ∘ σ_C on [v, 1̂], with ψ the order-preserving
        // re-indexing of the surviving positions.
        for p in [n5(), r5()] {
            let l = lattice(p);
            let data = trim_data(&l).unwrap().unwrap();
            let sigma = data.vertebral_extension(&l).unwrap();
            for v in 0..l.n() {
                let r = interval_trim_restriction(&l, &data, v, l.top()).unwrap();
                let sub_sigma = r.data.vertebral_extension(&r.lattice).unwrap();
                let mut surviving: Vec<usize> =
                    r.elements.iter().map(|&x| sigma.position(x)).collect();
                surviving.sort_unstable();
                for (sub_x, &x) in r.elements.iter().enumerate() {
                    let psi = surviving
                        .binary_search(&sigma.position(x))
                        .expect("position collected above");
                    assert_eq!(sub_sigma.position(sub_x), psi);
                }
            }
        }
    }

    #[test]
    fn from_chain_rejects_invalid_chains() {
        let l = lattice(n5());
        assert!(matches!(
            TrimData::from_chain(&l, &[0, 3, 4]),
            Err(TrimError::InvalidChain(_))
        ));
        assert!(matches!(
            TrimData::from_chain(&l, &[0, 1, 3, 4]),
            Err(TrimError::InvalidChain(_))
        ));
        let m3 = lattice(m3());
        assert!(matches!(
            TrimData::from_chain(&m3, &[0, 1, 4]),
            Err(TrimError::InvalidChain(_))
        ));
    }
}
