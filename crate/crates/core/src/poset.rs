//! Finite posets of primes and their specialization-closed subsets.
//!
//! A [`PrimePoset`] is the combinatorial shadow of `Spec(R)`: elements are
//! opaque prime labels and `p <= q` means `p ⊆ q`, i.e. `q` is a
//! specialization of `p`. Elements are kept sorted by label, so every set
//! operation and every listing is byte-stable.
//!
//! Sets of primes are bitmasks ([`PrimeSet`]) indexed by position in the
//! sorted label list, which caps posets at 64 elements.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::limits::Limits;

/// Maximum number of elements a poset may have.
pub const MAX_ELEMENTS: usize = 64;

/// Label of a prime ideal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PrimeId(pub String);

impl PrimeId {
    pub fn new(label: impl Into<String>) -> Self {
        PrimeId(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PrimeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PrimeId {
    fn from(s: &str) -> Self {
        PrimeId(s.to_owned())
    }
}

/// A set of poset elements, as a bitmask over element indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PrimeSet(pub u64);

impl PrimeSet {
    pub const EMPTY: PrimeSet = PrimeSet(0);

    pub fn singleton(i: usize) -> Self {
        PrimeSet(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(self, other: PrimeSet) -> PrimeSet {
        PrimeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: PrimeSet) -> PrimeSet {
        PrimeSet(self.0 & other.0)
    }

    pub fn difference(self, other: PrimeSet) -> PrimeSet {
        PrimeSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: PrimeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Element indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

/// Which way [`PrimePoset::is_stable_within`] closes a set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Specialization,
    Generalization,
}

/// A finite partial order on prime labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePoset {
    labels: Vec<PrimeId>,
    /// `up[i]`: all `j` with `i <= j` (reflexive).
    up: Vec<u64>,
    /// `down[i]`: all `j` with `j <= i` (reflexive).
    down: Vec<u64>,
    residues: BTreeMap<PrimeId, String>,
}

impl PrimePoset {
    /// Builds a poset from labels and cover pairs `(lower, upper)`.
    ///
    /// The order is the reflexive-transitive closure of the covers; a cycle
    /// (which would break antisymmetry) is rejected.
    pub fn new<S: AsRef<str>>(
        elements: &[S],
        covers: &[(S, S)],
        residues: BTreeMap<PrimeId, String>,
    ) -> Result<Self> {
        let mut labels: Vec<PrimeId> = elements.iter().map(|s| PrimeId::new(s.as_ref())).collect();
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return input("duplicate prime label");
        }
        if labels.len() > MAX_ELEMENTS {
            return input(format!("posets are limited to {MAX_ELEMENTS} elements"));
        }
        let find = |s: &str| {
            labels
                .binary_search_by(|l| l.as_str().cmp(s))
                .map_err(|_| Error::Input(format!("unknown prime label {s:?}")))
        };
        let n = labels.len();
        let mut rel = vec![0u64; n];
        for (i, r) in rel.iter_mut().enumerate() {
            *r = 1 << i;
        }
        for (lo, hi) in covers {
            let (a, b) = (find(lo.as_ref())?, find(hi.as_ref())?);
            rel[a] |= 1 << b;
        }
        for label in residues.keys() {
            find(label.as_str())?;
        }
        let up = transitive_closure(rel);
        Self::from_up(labels, up, residues)
    }

    /// Builds a poset from already sorted labels and a reflexive, transitive
    /// up-relation. Checks all three order axioms.
    pub(crate) fn from_up(
        labels: Vec<PrimeId>,
        up: Vec<u64>,
        residues: BTreeMap<PrimeId, String>,
    ) -> Result<Self> {
        let n = labels.len();
        debug_assert!(labels.windows(2).all(|w| w[0] < w[1]));
        for i in 0..n {
            if up[i] >> i & 1 == 0 {
                return input("order relation is not reflexive");
            }
            for j in PrimeSet(up[i]).iter() {
                if j != i && up[j] >> i & 1 == 1 {
                    return input(format!(
                        "order relation is not antisymmetric: {} and {} are mutually related",
                        labels[i], labels[j]
                    ));
                }
                if up[j] & !up[i] != 0 {
                    return input("order relation is not transitive");
                }
            }
        }
        let mut down = vec![0u64; n];
        for i in 0..n {
            for j in PrimeSet(up[i]).iter() {
                down[j] |= 1 << i;
            }
        }
        Ok(PrimePoset {
            labels,
            up,
            down,
            residues,
        })
    }

    /// An antichain on the given labels.
    pub fn discrete<S: AsRef<str>>(elements: &[S]) -> Result<Self> {
        Self::new(elements, &[], BTreeMap::new())
    }

    /// A chain `elements[0] < elements[1] < ...`.
    pub fn chain<S: AsRef<str>>(elements: &[S]) -> Result<Self> {
        let covers: Vec<(&str, &str)> = elements
            .windows(2)
            .map(|w| (w[0].as_ref(), w[1].as_ref()))
            .collect();
        let names: Vec<&str> = elements.iter().map(|s| s.as_ref()).collect();
        Self::new(&names, &covers, BTreeMap::new())
    }

    /// Disjoint union; labels of part `i` are prefixed with `"{i}:"`.
    pub fn disjoint_union(parts: &[PrimePoset]) -> Result<Self> {
        let mut elements = Vec::new();
        let mut covers = Vec::new();
        let mut residues = BTreeMap::new();
        for (k, part) in parts.iter().enumerate() {
            let name = |i: usize| format!("{k}:{}", part.labels[i]);
            for i in 0..part.len() {
                elements.push(name(i));
            }
            for (a, b) in part.cover_indices() {
                covers.push((name(a), name(b)));
            }
            for (p, r) in &part.residues {
                residues.insert(PrimeId(format!("{k}:{p}")), r.clone());
            }
        }
        Self::new(&elements, &covers, residues)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[PrimeId] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &PrimeId {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    pub fn residues(&self) -> &BTreeMap<PrimeId, String> {
        &self.residues
    }

    pub fn residue(&self, label: &str) -> Option<&str> {
        self.residues.get(&PrimeId::from(label)).map(String::as_str)
    }

    /// `p <= q`, by index.
    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.up[p] >> q & 1 == 1
    }

    /// Everything at or above `p`.
    pub fn up_of(&self, p: usize) -> PrimeSet {
        PrimeSet(self.up[p])
    }

    /// Everything at or below `p`; as primes, `Spec(R_p)`.
    pub fn down_of(&self, p: usize) -> PrimeSet {
        PrimeSet(self.down[p])
    }

    pub fn full(&self) -> PrimeSet {
        if self.len() == 64 {
            PrimeSet(u64::MAX)
        } else {
            PrimeSet((1u64 << self.len()) - 1)
        }
    }

    pub fn set_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<PrimeSet> {
        let mut set = PrimeSet::EMPTY;
        for l in labels {
            let i = self
                .index_of(l.as_ref())
                .ok_or_else(|| Error::Input(format!("unknown prime label {:?}", l.as_ref())))?;
            set.insert(i);
        }
        Ok(set)
    }

    pub fn labels_of(&self, set: PrimeSet) -> Vec<PrimeId> {
        set.iter().map(|i| self.labels[i].clone()).collect()
    }

    /// `{a, b}` rendering used in reports.
    pub fn format_set(&self, set: PrimeSet) -> String {
        let names: Vec<&str> = set.iter().map(|i| self.labels[i].as_str()).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// Hasse diagram edges `(lower, upper)` in index order.
    pub fn cover_indices(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            let strict_up = self.up[i] & !(1 << i);
            for j in PrimeSet(strict_up).iter() {
                // j covers i iff nothing strictly between
                let between = strict_up & self.down[j] & !(1 << j);
                if between == 0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn covers(&self) -> Vec<(PrimeId, PrimeId)> {
        self.cover_indices()
            .into_iter()
            .map(|(a, b)| (self.labels[a].clone(), self.labels[b].clone()))
            .collect()
    }

    pub fn is_up_closed(&self, set: PrimeSet) -> bool {
        set.iter().all(|i| PrimeSet(self.up[i]).is_subset(set))
    }

    pub fn is_down_closed(&self, set: PrimeSet) -> bool {
        set.iter().all(|i| PrimeSet(self.down[i]).is_subset(set))
    }

    /// Smallest up-closed superset of `seed`.
    pub fn closure_up(&self, seed: PrimeSet) -> PrimeSet {
        seed.iter().fold(PrimeSet::EMPTY, |acc, i| acc.union(self.up_of(i)))
    }

    /// Smallest down-closed superset of `seed`.
    pub fn closure_down(&self, seed: PrimeSet) -> PrimeSet {
        seed.iter().fold(PrimeSet::EMPTY, |acc, i| acc.union(self.down_of(i)))
    }

    /// Elements with no strict predecessor.
    pub fn minimal_primes(&self) -> PrimeSet {
        let mut out = PrimeSet::EMPTY;
        for i in 0..self.len() {
            if self.down[i] == 1 << i {
                out.insert(i);
            }
        }
        out
    }

    pub fn maximal_primes(&self) -> PrimeSet {
        let mut out = PrimeSet::EMPTY;
        for i in 0..self.len() {
            if self.up[i] == 1 << i {
                out.insert(i);
            }
        }
        out
    }

    /// Connected components of the comparability graph restricted to `within`,
    /// ordered by smallest member label.
    pub fn components_within(&self, within: PrimeSet) -> Vec<PrimeSet> {
        let mut remaining = within;
        let mut out = Vec::new();
        while let Some(start) = remaining.iter().next() {
            let mut comp = PrimeSet::singleton(start);
            loop {
                let grown = comp.iter().fold(comp, |acc, i| {
                    acc.union(PrimeSet(self.up[i] | self.down[i]).intersection(within))
                });
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            remaining = remaining.difference(comp);
            out.push(comp);
        }
        out
    }

    /// Connected components of the whole poset.
    pub fn connected_components(&self) -> Vec<PrimeSet> {
        self.components_within(self.full())
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// Restriction of the order to `keep`.
    pub fn induced_subposet(&self, keep: PrimeSet) -> Result<PrimePoset> {
        if !keep.is_subset(self.full()) {
            return input("subset mentions elements outside the poset");
        }
        let idx: Vec<usize> = keep.iter().collect();
        let labels: Vec<PrimeId> = idx.iter().map(|&i| self.labels[i].clone()).collect();
        let up = idx
            .iter()
            .map(|&i| {
                idx.iter()
                    .enumerate()
                    .filter(|&(_, &j)| self.leq(i, j))
                    .fold(0u64, |acc, (k, _)| acc | 1 << k)
            })
            .collect();
        let residues = self
            .residues
            .iter()
            .filter(|(p, _)| labels.binary_search(p).is_ok())
            .map(|(p, r)| (p.clone(), r.clone()))
            .collect();
        PrimePoset::from_up(labels, up, residues)
    }

    /// Maps a set of `self` into a subposet that contains it, by label.
    pub fn transport(&self, set: PrimeSet, target: &PrimePoset) -> Result<PrimeSet> {
        let names: Vec<&str> = set.iter().map(|i| self.labels[i].as_str()).collect();
        target.set_from_labels(&names)
    }

    /// Whether `s` is stable under specialization (or generalization) within `w`.
    pub fn is_stable_within(&self, s: PrimeSet, w: PrimeSet, direction: Direction) -> Result<bool> {
        if !s.is_subset(w) {
            return input("S must be a subset of W");
        }
        if !w.is_subset(self.full()) {
            return input("W mentions elements outside the poset");
        }
        let ok = s.iter().all(|p| {
            let related = match direction {
                Direction::Specialization => self.up_of(p),
                Direction::Generalization => self.down_of(p),
            };
            related.intersection(w).is_subset(s)
        });
        Ok(ok)
    }

    /// All up-closed subsets, sorted by cardinality and then lexicographically
    /// on member labels.
    pub fn enumerate_sp_subsets(&self, limits: &Limits) -> Result<Vec<PrimeSet>> {
        if self.len() > limits.max_upset_elements {
            return Err(Error::Resource(format!(
                "up-set enumeration is limited to {} elements (poset has {})",
                limits.max_upset_elements,
                self.len()
            )));
        }
        // tops first, so that everything strictly above an element is decided before it
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.down[i].count_ones()));
        let mut out = Vec::new();
        self.upsets_rec(&order, 0, PrimeSet::EMPTY, &mut out);
        out.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.iter().collect::<Vec<_>>().cmp(&b.iter().collect::<Vec<_>>()))
        });
        Ok(out)
    }

    fn upsets_rec(&self, order: &[usize], k: usize, current: PrimeSet, out: &mut Vec<PrimeSet>) {
        if k == order.len() {
            out.push(current);
            return;
        }
        let x = order[k];
        self.upsets_rec(order, k + 1, current, out);
        if self.up_of(x).difference(PrimeSet::singleton(x)).is_subset(current) {
            let mut with = current;
            with.insert(x);
            self.upsets_rec(order, k + 1, with, out);
        }
    }
}

fn transitive_closure(mut rel: Vec<u64>) -> Vec<u64> {
    let n = rel.len();
    // Warshall on bit rows
    for k in 0..n {
        for i in 0..n {
            if rel[i] >> k & 1 == 1 {
                rel[i] |= rel[k];
            }
        }
    }
    rel
}

/// A specialization-closed subset of a poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpSubset {
    poset: Arc<PrimePoset>,
    set: PrimeSet,
}

impl SpSubset {
    pub fn new(poset: Arc<PrimePoset>, set: PrimeSet) -> Result<Self> {
        if !set.is_subset(poset.full()) {
            return input("set mentions elements outside the poset");
        }
        if !poset.is_up_closed(set) {
            return input(format!(
                "{} is not stable under specialization",
                poset.format_set(set)
            ));
        }
        Ok(SpSubset { poset, set })
    }

    pub fn from_labels<S: AsRef<str>>(poset: Arc<PrimePoset>, labels: &[S]) -> Result<Self> {
        let set = poset.set_from_labels(labels)?;
        Self::new(poset, set)
    }

    pub fn empty(poset: Arc<PrimePoset>) -> Self {
        SpSubset {
            poset,
            set: PrimeSet::EMPTY,
        }
    }

    pub fn full(poset: Arc<PrimePoset>) -> Self {
        let set = poset.full();
        SpSubset { poset, set }
    }

    pub fn poset(&self) -> &Arc<PrimePoset> {
        &self.poset
    }

    pub fn set(&self) -> PrimeSet {
        self.set
    }

    pub fn labels(&self) -> Vec<PrimeId> {
        self.poset.labels_of(self.set)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.poset.index_of(label).is_some_and(|i| self.set.contains(i))
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.set == self.poset.full()
    }
}

impl fmt::Display for SpSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.poset.format_set(self.set))
    }
}

/// Smallest specialization-closed superset of `seed`.
pub fn closure_up<S: AsRef<str>>(poset: &Arc<PrimePoset>, seed: &[S]) -> Result<SpSubset> {
    let seed = poset.set_from_labels(seed)?;
    Ok(SpSubset {
        poset: Arc::clone(poset),
        set: poset.closure_up(seed),
    })
}

/// All isomorphism types of posets on `n` elements, labelled `a, b, c, ...`.
///
/// Each type is produced once, from its lexicographically least naturally
/// labelled relation. Supports `n <= 6`.
pub fn posets_up_to_iso(n: usize) -> Result<Vec<PrimePoset>> {
    if n > 6 {
        return Err(Error::Resource("isomorphism-type generation is limited to 6 elements".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << pairs.len()) {
        let mut rel: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if bits >> k & 1 == 1 {
                rel[i] |= 1 << j;
            }
        }
        if transitive_closure(rel.clone()) != rel {
            continue;
        }
        let key = perms
            .iter()
            .map(|p| relation_key(&rel, p))
            .min()
            .unwrap_or(0);
        if seen.insert(key) {
            let labels: Vec<PrimeId> = (0..n)
                .map(|i| PrimeId(((b'a' + i as u8) as char).to_string()))
                .collect();
            out.push(PrimePoset::from_up(labels, rel, BTreeMap::new())?);
        }
    }
    Ok(out)
}

/// Connected isomorphism types on `n` elements.
pub fn connected_posets_up_to_iso(n: usize) -> Result<Vec<PrimePoset>> {
    Ok(posets_up_to_iso(n)?
        .into_iter()
        .filter(PrimePoset::is_connected)
        .collect())
}

fn relation_key(rel: &[u64], perm: &[usize]) -> u64 {
    let n = rel.len();
    let mut key = 0u64;
    for i in 0..n {
        for j in 0..n {
            if rel[i] >> j & 1 == 1 {
                key |= 1 << (perm[i] * n + perm[j]);
            }
        }
    }
    key
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}
