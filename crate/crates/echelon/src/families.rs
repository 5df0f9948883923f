//! Generators for the poset and lattice families used by the experiment
//! suites: chains, antichains, Boolean lattices, ideal lattices, Bruhat and
//! weak orders on the symmetric group, Tamari lattices, grids, polygon face
//! lattices, subspace lattices, and exhaustive small-poset enumeration with
//! canonical-form deduplication.

use crate::lattice::{Lattice, LatticeError};
use crate::poset::{CanonKey, Poset, PosetError};
use std::collections::{HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("unknown family \"{0}\"")]
    Unknown(String),
    #[error("malformed family spec: {0}")]
    Parse(String),
    #[error("parameter out of supported range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The chain with `n` elements, `0 < 1 < … < n−1`.
pub fn chain(n: usize) -> Result<Poset, FamilyError> {
    require(n >= 1, "chain needs n ≥ 1")?;
    let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Ok(Poset::from_covers(n, &covers)?)
}

/// The antichain with `n` pairwise-incomparable elements.
pub fn antichain(n: usize) -> Result<Poset, FamilyError> {
    require(n >= 1, "antichain needs n ≥ 1")?;
    Ok(Poset::from_covers(n, &[])?)
}

/// The Boolean lattice of subsets of an `n`-set; element `i` is the subset
/// with bitmask `i`.
pub fn boolean(n: usize) -> Result<Poset, FamilyError> {
    require(n <= 16, "boolean supported up to n = 16")?;
    let size = 1usize << n;
    let mut covers = Vec::new();
    for mask in 0..size {
        for b in 0..n {
            if mask & (1 << b) == 0 {
                covers.push((mask, mask | (1 << b)));
            }
        }
    }
    Ok(Poset::from_covers(size, &covers)?)
}

/// The diamond with three atoms (the smallest non-distributive modular
/// lattice).
pub fn m3() -> Poset {
    Poset::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
        .expect("fixed cover list is valid")
}

/// The pentagon (the smallest non-modular lattice).
pub fn n5() -> Poset {
    Poset::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
        .expect("fixed cover list is valid")
}

/// The five-element distributive lattice used as the running worked
/// example: a diamond with an extra top element.
pub fn r5_example() -> Poset {
    Poset::from_covers(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)])
        .expect("fixed cover list is valid")
        .with_names(vec!["e1".into(), "e2".into(), "e3".into(), "e4".into(), "e5".into()])
        .expect("five names for five elements")
}

/// The grid `chain(a) × chain(b)`; element `(i, j)` has index `i·b + j`.
pub fn product_of_chains(a: usize, b: usize) -> Result<Poset, FamilyError> {
    require(a >= 1 && b >= 1, "product_of_chains needs a, b ≥ 1")?;
    let mut covers = Vec::new();
    for i in 0..a {
        for j in 0..b {
            if i + 1 < a {
                covers.push((i * b + j, (i + 1) * b + j));
            }
            if j + 1 < b {
                covers.push((i * b + j, i * b + j + 1));
            }
        }
    }
    Ok(Poset::from_covers(a * b, &covers)?)
}

/// The lattice of order ideals (down-sets) of `q`, ordered by inclusion —
/// the fundamental distributive lattice `J(q)`.
pub fn j_of_poset(q: &Poset) -> Result<Poset, FamilyError> {
    let n = q.n();
    require(n <= 16, "j_of_poset supported up to |Q| = 16")?;
    let mut ideals: Vec<u32> = (0u32..1 << n)
        .filter(|&mask| {
            q.covers()
                .iter()
                .all(|&(a, b)| mask & (1 << b) == 0 || mask & (1 << a) != 0)
        })
        .collect();
    ideals.sort_by_key(|&m| (m.count_ones(), m));
    let mut relation = Vec::new();
    for (i, &mi) in ideals.iter().enumerate() {
        for (j, &mj) in ideals.iter().enumerate() {
            if i != j && mi & mj == mi {
                relation.push((i, j));
            }
        }
    }
    Ok(Poset::from_covers(ideals.len(), &relation)?)
}

/// The face lattice of a convex `n`-gon: the empty face, `n` vertices, `n`
/// edges, and the polygon itself.
pub fn face_lattice_polygon(n: usize) -> Result<Poset, FamilyError> {
    require((3..=64).contains(&n), "face_lattice_polygon needs 3 ≤ n ≤ 64")?;
    // 0 is the empty face, 1..=n the vertices, n+1..=2n the edges (edge i
    // joining vertices i and i mod n + 1), 2n+1 the whole polygon.
    let mut covers = Vec::new();
    for v in 1..=n {
        covers.push((0, v));
    }
    for e in 1..=n {
        covers.push((e, n + e));
        covers.push((e % n + 1, n + e));
        covers.push((n + e, 2 * n + 1));
    }
    Ok(Poset::from_covers(2 * n + 2, &covers)?)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    // In lexicographic order of one-line notation.
    let mut all = Vec::new();
    let mut current = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], all: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            all.push(current.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                current.push(v);
                rec(n, current, used, all);
                current.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut all);
    all
}

fn one_line_name(perm: &[usize]) -> String {
    perm.iter().map(|&v| (v + 1).to_string()).collect()
}

/// The strong Bruhat order on the symmetric group `S_n`.  Elements are
/// indexed in lexicographic order of one-line notation (which is a linear
/// extension, since each cover increases the one-line word) and named by
/// their one-line notation.
pub fn bruhat_symmetric(n: usize) -> Result<Poset, FamilyError> {
    require((1..=6).contains(&n), "bruhat_symmetric supported for 1 ≤ n ≤ 6")?;
    let perms = permutations(n);
    let index: HashMap<&[usize], usize> =
        perms.iter().map(|p| p.as_slice()).zip(0..).collect();
    let mut covers = Vec::new();
    for (u_idx, u) in perms.iter().enumerate() {
        // u ⋖ u·t_{ij} when u_i < u_j and nothing in between is intermediate.
        for i in 0..n {
            for j in (i + 1)..n {
                if u[i] < u[j] && (i + 1..j).all(|k| !(u[i] < u[k] && u[k] < u[j])) {
                    let mut w = u.clone();
                    w.swap(i, j);
                    covers.push((u_idx, index[w.as_slice()]));
                }
            }
        }
    }
    let names = perms.iter().map(|p| one_line_name(p)).collect();
    Ok(Poset::from_covers(perms.len(), &covers)?.with_names(names)?)
}

/// The right weak order on `S_n`: covers swap an adjacent ascent.  Indexed
/// and named as in [`bruhat_symmetric`].
pub fn weak_order_symmetric(n: usize) -> Result<Poset, FamilyError> {
    require((1..=5).contains(&n), "weak_order_symmetric supported for 1 ≤ n ≤ 5")?;
    let perms = permutations(n);
    let index: HashMap<&[usize], usize> =
        perms.iter().map(|p| p.as_slice()).zip(0..).collect();
    let mut covers = Vec::new();
    for (u_idx, u) in perms.iter().enumerate() {
        for i in 0..n.saturating_sub(1) {
            if u[i] < u[i + 1] {
                let mut w = u.clone();
                w.swap(i, i + 1);
                covers.push((u_idx, index[w.as_slice()]));
            }
        }
    }
    let names = perms.iter().map(|p| one_line_name(p)).collect();
    Ok(Poset::from_covers(perms.len(), &covers)?.with_names(names)?)
}

/// The element of a named poset (e.g. a permutation in one-line notation
/// for the Bruhat and weak orders) with the given name.
pub fn element_named(p: &Poset, name: &str) -> Option<usize> {
    p.names()?.iter().position(|s| s == name)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Tree {
    Leaf,
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    fn encode(&self, out: &mut String) {
        match self {
            Tree::Leaf => out.push('x'),
            Tree::Node(l, r) => {
                out.push('(');
                l.encode(out);
                r.encode(out);
                out.push(')');
            }
        }
    }

    /// All trees obtained by one right rotation somewhere:
    /// `Node(Node(A, B), C) → Node(A, Node(B, C))`.
    fn rotations(&self) -> Vec<Tree> {
        let mut out = Vec::new();
        if let Tree::Node(l, r) = self {
            if let Tree::Node(a, b) = l.as_ref() {
                out.push(Tree::Node(
                    a.clone(),
                    Box::new(Tree::Node(b.clone(), Box::new(r.as_ref().clone()))),
                ));
            }
            for l2 in l.rotations() {
                out.push(Tree::Node(Box::new(l2), r.clone()));
            }
            for r2 in r.rotations() {
                out.push(Tree::Node(l.clone(), Box::new(r2)));
            }
        }
        out
    }
}

fn all_trees(k: usize) -> Vec<Tree> {
    if k == 0 {
        return vec![Tree::Leaf];
    }
    let mut out = Vec::new();
    for i in 0..k {
        for l in all_trees(i) {
            for r in all_trees(k - 1 - i) {
                out.push(Tree::Node(Box::new(l.clone()), Box::new(r)));
            }
        }
    }
    out
}

/// The Tamari lattice on binary trees with `n` internal nodes
/// (`Catalan(n)` elements), ordered by right rotation.  Elements are named
/// by their bracketing and indexed in lexicographic order of that encoding.
pub fn tamari(n: usize) -> Result<Poset, FamilyError> {
    require((1..=6).contains(&n), "tamari supported for 1 ≤ n ≤ 6")?;
    let mut trees = all_trees(n);
    trees.sort();
    let names: Vec<String> = trees
        .iter()
        .map(|t| {
            let mut s = String::new();
            t.encode(&mut s);
            s
        })
        .collect();
    let index: HashMap<&Tree, usize> = trees.iter().zip(0..).collect();
    let mut covers = Vec::new();
    for (i, t) in trees.iter().enumerate() {
        for rotated in t.rotations() {
            covers.push((i, index[&rotated]));
        }
    }
    Ok(Poset::from_covers(trees.len(), &covers)?.with_names(names)?)
}

/// The lattice of linear subspaces of the vector space `F_q^d`, ordered by
/// inclusion (a modular lattice).
pub fn subspace_lattice(q: usize, d: usize) -> Result<Poset, FamilyError> {
    require(q == 2 || q == 3, "subspace_lattice supports q ∈ {2, 3}")?;
    require((1..=3).contains(&d), "subspace_lattice supports 1 ≤ d ≤ 3")?;
    let size = q.pow(d as u32);
    let add = |a: usize, b: usize| -> usize {
        let (mut a, mut b, mut out, mut place) = (a, b, 0usize, 1usize);
        for _ in 0..d {
            out += (a % q + b % q) % q * place;
            a /= q;
            b /= q;
            place *= q;
        }
        out
    };
    let span = |gens: &[usize]| -> u32 {
        let mut members = vec![false; size];
        members[0] = true;
        let mut worklist: Vec<usize> = vec![0];
        for &g in gens {
            if !members[g] {
                members[g] = true;
                worklist.push(g);
            }
        }
        while let Some(v) = worklist.pop() {
            let sums: Vec<usize> = (0..size)
                .filter(|&w| members[w])
                .map(|w| add(v, w))
                .collect();
            for s in sums {
                if !members[s] {
                    members[s] = true;
                    worklist.push(s);
                }
            }
        }
        (0..size).filter(|&v| members[v]).fold(0u32, |m, v| m | 1 << v)
    };

    // Breadth-first closure: every subspace is reachable from {0} by
    // repeatedly adjoining one vector.
    let mut seen: HashSet<u32> = HashSet::new();
    let mut queue = vec![span(&[])];
    seen.insert(queue[0]);
    while let Some(s) = queue.pop() {
        for v in 1..size {
            if s & (1 << v) == 0 {
                let gens: Vec<usize> = (0..size)
                    .filter(|&w| s & (1 << w) != 0)
                    .chain(std::iter::once(v))
                    .collect();
                let bigger = span(&gens);
                if seen.insert(bigger) {
                    queue.push(bigger);
                }
            }
        }
    }
    let mut subspaces: Vec<u32> = seen.into_iter().collect();
    subspaces.sort_by_key(|&m| (m.count_ones(), m));
    let mut relation = Vec::new();
    for (i, &si) in subspaces.iter().enumerate() {
        for (j, &sj) in subspaces.iter().enumerate() {
            if i != j && si & sj == si {
                relation.push((i, j));
            }
        }
    }
    Ok(Poset::from_covers(subspaces.len(), &relation)?)
}

/// All posets on `n` unlabeled elements (one representative per isomorphism
/// class), enumerated as transitive strict orders compatible with the
/// natural order and deduplicated by canonical form.  Counts for
/// `n = 1, …, 6`: 1, 2, 5, 16, 63, 318.
pub fn all_posets(n: usize) -> Result<Vec<Poset>, FamilyError> {
    require((1..=6).contains(&n), "all_posets supported for 1 ≤ n ≤ 6")?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut seen: HashSet<CanonKey> = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        // Relation rows as bitmasks for the transitivity check.
        let mut row = vec![0u8; n];
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask & (1 << b) != 0 {
                row[i] |= 1 << j;
            }
        }
        let transitive = (0..n).all(|i| {
            (0..n)
                .filter(|&j| row[i] & (1 << j) != 0)
                .all(|j| row[j] & !row[i] == 0)
        });
        if !transitive {
            continue;
        }
        let covers: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(b, _)| mask & (1 << b) != 0)
            .map(|(_, &pr)| pr)
            .collect();
        let p = Poset::from_covers(n, &covers)?;
        if seen.insert(p.canonical_key()?) {
            out.push(p);
        }
    }
    Ok(out)
}

/// The connected members of [`all_posets`].
pub fn connected_posets(n: usize) -> Result<Vec<Poset>, FamilyError> {
    Ok(all_posets(n)?.into_iter().filter(|p| p.is_connected()).collect())
}

/// Adds a new global bottom and top around a poset; the inner elements keep
/// their relative order and are shifted up by one.
pub fn with_bounds(inner: &Poset) -> Result<Poset, FamilyError> {
    let n = inner.n();
    let mut covers: Vec<(usize, usize)> = inner
        .covers()
        .iter()
        .map(|&(a, b)| (a + 1, b + 1))
        .collect();
    for m in inner.minimals() {
        covers.push((0, m + 1));
    }
    for m in inner.maximals() {
        covers.push((m + 1, n + 1));
    }
    Ok(Poset::from_covers(n + 2, &covers)?)
}

/// All lattices on `n` unlabeled elements, one per isomorphism class.
/// Every lattice with at least three elements is its inner poset (strip the
/// bottom and top) re-bounded, so the enumeration runs over `all_posets(n−2)`
/// and keeps the bounded posets whose meets and joins all exist.  Counts for
/// `n = 1, …, 8`: 1, 1, 1, 2, 5, 15, 53, 222.
pub fn all_lattices(n: usize) -> Result<Vec<Lattice>, FamilyError> {
    require((1..=8).contains(&n), "all_lattices supported for 1 ≤ n ≤ 8")?;
    if n <= 2 {
        return Ok(vec![Lattice::new(chain(n)?)?]);
    }
    let mut out = Vec::new();
    for inner in all_posets(n - 2)? {
        if let Ok(l) = Lattice::new(with_bounds(&inner)?) {
            out.push(l);
        }
    }
    Ok(out)
}

/// Parses a family spec such as `chain(5)`, `m3`,
/// `product_of_chains(2,3)`, `j_of_poset(chain(4))`, or `all_posets(5)`.
/// Single families yield one poset; the `all_posets`, `connected_posets`,
/// and `all_lattices` streams yield one per isomorphism class, and
/// `j_of_poset` maps over every poset its nested spec yields.
pub fn generate(spec: &str) -> Result<Vec<Poset>, FamilyError> {
    let spec = spec.trim();
    let (name, args) = match spec.find('(') {
        None => (spec, None),
        Some(open) => {
            if !spec.ends_with(')') {
                return Err(FamilyError::Parse(format!(
                    "missing closing parenthesis in \"{spec}\""
                )));
            }
            (&spec[..open], Some(&spec[open + 1..spec.len() - 1]))
        }
    };
    let ints = |args: Option<&str>, want: usize| -> Result<Vec<usize>, FamilyError> {
        let raw = args.unwrap_or("");
        let parts: Vec<&str> = if raw.trim().is_empty() {
            Vec::new()
        } else {
            raw.split(',').collect()
        };
        if parts.len() != want {
            return Err(FamilyError::Parse(format!(
                "family \"{name}\" takes {want} integer parameter(s), got {}",
                parts.len()
            )));
        }
        parts
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| FamilyError::Parse(format!("\"{s}\" is not an integer")))
            })
            .collect()
    };
    match name {
        "chain" => Ok(vec![chain(ints(args, 1)?[0])?]),
        "antichain" => Ok(vec![antichain(ints(args, 1)?[0])?]),
        "boolean" => Ok(vec![boolean(ints(args, 1)?[0])?]),
        "m3" => {
            ints(args, 0)?;
            Ok(vec![m3()])
        }
        "n5" => {
            ints(args, 0)?;
            Ok(vec![n5()])
        }
        "r5_example" => {
            ints(args, 0)?;
            Ok(vec![r5_example()])
        }
        "product_of_chains" => {
            let v = ints(args, 2)?;
            Ok(vec![product_of_chains(v[0], v[1])?])
        }
        "bruhat_symmetric" => Ok(vec![bruhat_symmetric(ints(args, 1)?[0])?]),
        "weak_order_symmetric" => Ok(vec![weak_order_symmetric(ints(args, 1)?[0])?]),
        "tamari" => Ok(vec![tamari(ints(args, 1)?[0])?]),
        "face_lattice_polygon" => Ok(vec![face_lattice_polygon(ints(args, 1)?[0])?]),
        "subspace_lattice" => {
            let v = ints(args, 2)?;
            Ok(vec![subspace_lattice(v[0], v[1])?])
        }
        "j_of_poset" => {
            let inner = args.ok_or_else(|| {
                FamilyError::Parse("j_of_poset takes a nested family spec".into())
            })?;
            generate(inner)?
                .iter()
                .map(j_of_poset)
                .collect::<Result<Vec<_>, _>>()
        }
        "all_posets" => all_posets(ints(args, 1)?[0]),
        "connected_posets" => connected_posets(ints(args, 1)?[0]),
        "all_lattices" => Ok(all_lattices(ints(args, 1)?[0])?
            .into_iter()
            .map(|l| l.poset().clone())
            .collect()),
        other => Err(FamilyError::Unknown(other.to_string())),
    }
}

fn require(cond: bool, msg: &str) -> Result<(), FamilyError> {
    if cond {
        Ok(())
    } else {
        Err(FamilyError::OutOfRange(msg.to_string()))
    }
}
