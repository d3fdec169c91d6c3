//! Filtrations by supports: decreasing `ℤ`-indexed families of
//! specialization-closed subsets.
//!
//! On a finite poset every such family has finitely many jumps, so it is
//! stored exactly as a list of `(threshold, value)` steps followed by a tail.
//! `φ(i)` is the value of the first step whose threshold is `>= i`, and the
//! tail beyond the last threshold. Values strictly decrease along the list
//! and every value strictly contains the tail, so two filtrations are equal
//! as maps `ℤ → P(Spec)` exactly when their representations are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{input, Error, Result};
use crate::limits::Limits;
use crate::poset::{PrimeId, PrimePoset, PrimeSet, SpSubset};

/// `sup { i : p ∈ φ(i) }`, with both infinities allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Level {
    pub fn finite(self) -> Option<i64> {
        match self {
            Level::Finite(m) => Some(m),
            _ => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::NegInf => f.write_str("-inf"),
            Level::Finite(m) => write!(f, "{m}"),
            Level::PosInf => f.write_str("+inf"),
        }
    }
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Level::Finite(m) => s.serialize_i64(*m),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

/// Shape flags of a filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiltrationShape {
    pub is_constant: bool,
    pub is_eventually_trivial: bool,
    pub is_left_bounded: bool,
    /// `⋂ φ(i) = ∅`.
    pub is_nondegenerate: bool,
    /// Exactly one jump, from the whole spectrum down to the tail.
    pub is_two_step: bool,
    /// `m` with `φ(i) = Spec` for `i <= m` and `φ(i) = ∅` for `i > m`.
    pub canonical_shift: Option<i64>,
    /// `min{i : φ(i) = ∅} − min{i : φ(i) ⊋ φ(i+1)}`.
    pub length: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpFiltration {
    poset: Arc<PrimePoset>,
    steps: Vec<(i64, PrimeSet)>,
    tail: PrimeSet,
}

impl SpFiltration {
    /// Builds a filtration from `(threshold, value)` pairs; the last value is
    /// also used for every index past the last threshold.
    pub fn new(poset: Arc<PrimePoset>, steps: &[(i64, PrimeSet)]) -> Result<Self> {
        let Some(&(_, last)) = steps.last() else {
            return input("a filtration needs at least one step");
        };
        Self::with_tail(poset, steps, last)
    }

    /// Builds a filtration from explicit steps and an explicit tail.
    pub fn with_tail(poset: Arc<PrimePoset>, steps: &[(i64, PrimeSet)], tail: PrimeSet) -> Result<Self> {
        if steps.windows(2).any(|w| w[0].0 >= w[1].0) {
            return input("thresholds must be strictly increasing");
        }
        let full = poset.full();
        for &(_, v) in steps.iter().chain(std::iter::once(&(0, tail))) {
            if !v.is_subset(full) {
                return input("value mentions elements outside the poset");
            }
            if !poset.is_up_closed(v) {
                return input(format!(
                    "value {} is not stable under specialization",
                    poset.format_set(v)
                ));
            }
        }
        let values: Vec<PrimeSet> = steps.iter().map(|s| s.1).chain(std::iter::once(tail)).collect();
        if let Some(w) = values.windows(2).find(|w| !w[1].is_subset(w[0])) {
            return input(format!(
                "values must decrease: {} is followed by {}",
                poset.format_set(w[0]),
                poset.format_set(w[1])
            ));
        }
        Ok(Self::canonical(poset, steps.to_vec(), tail))
    }

    /// Merges equal neighbours; inputs must already be decreasing.
    fn canonical(poset: Arc<PrimePoset>, steps: Vec<(i64, PrimeSet)>, tail: PrimeSet) -> Self {
        let mut kept: Vec<(i64, PrimeSet)> = Vec::with_capacity(steps.len());
        let mut next = tail;
        for &(t, v) in steps.iter().rev() {
            if v != next {
                kept.push((t, v));
                next = v;
            }
        }
        kept.reverse();
        SpFiltration {
            poset,
            steps: kept,
            tail,
        }
    }

    pub fn constant(poset: Arc<PrimePoset>, value: PrimeSet) -> Result<Self> {
        Self::with_tail(poset, &[], value)
    }

    /// `φ(i) = Spec` for `i <= m`, `∅` after.
    pub fn canonical_at(poset: Arc<PrimePoset>, m: i64) -> Self {
        let full = poset.full();
        Self::canonical(poset, vec![(m, full)], PrimeSet::EMPTY)
    }

    pub fn poset(&self) -> &Arc<PrimePoset> {
        &self.poset
    }

    /// Canonical `(threshold, value)` steps, tail excluded.
    pub fn steps(&self) -> &[(i64, PrimeSet)] {
        &self.steps
    }

    pub fn tail_set(&self) -> PrimeSet {
        self.tail
    }

    /// Value for all sufficiently negative indices.
    pub fn head_set(&self) -> PrimeSet {
        self.steps.first().map_or(self.tail, |s| s.1)
    }

    pub fn set_at(&self, i: i64) -> PrimeSet {
        self.steps
            .iter()
            .find(|&&(t, _)| i <= t)
            .map_or(self.tail, |s| s.1)
    }

    pub fn value_at(&self, i: i64) -> SpSubset {
        SpSubset::new(Arc::clone(&self.poset), self.set_at(i)).expect("values are up-closed")
    }

    /// `⋂ φ(i)`.
    pub fn tail_intersection(&self) -> SpSubset {
        SpSubset::new(Arc::clone(&self.poset), self.tail).expect("tail is up-closed")
    }

    /// All `i` with `φ(i) ⊋ φ(i+1)`, increasing.
    ///
    /// Every value of the canonical form strictly contains the tail, so these
    /// are also exactly the jumps at which `φ(i)` differs from `⋂ φ`.
    pub fn jumps(&self) -> Vec<i64> {
        self.steps.iter().map(|s| s.0).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.steps.is_empty()
    }

    /// `φ'(i) = φ(i − s)`.
    pub fn shift(&self, s: i64) -> Self {
        SpFiltration {
            poset: Arc::clone(&self.poset),
            steps: self.steps.iter().map(|&(t, v)| (t + s, v)).collect(),
            tail: self.tail,
        }
    }

    /// Pointwise intersection with `keep`, carried over to the induced subposet.
    pub fn restrict_to(&self, keep: PrimeSet) -> Result<Self> {
        let sub = Arc::new(self.poset.induced_subposet(keep)?);
        let carry = |v: PrimeSet| self.poset.transport(v.intersection(keep), &sub);
        let steps = self
            .steps
            .iter()
            .map(|&(t, v)| Ok((t, carry(v)?)))
            .collect::<Result<Vec<_>>>()?;
        let tail = carry(self.tail)?;
        Ok(Self::canonical(sub, steps, tail))
    }

    /// `φ_p(i) = φ(i) ∩ Spec(R_p)`, on the subposet of primes below `p`.
    pub fn localize(&self, p: &str) -> Result<Self> {
        let i = self
            .poset
            .index_of(p)
            .ok_or_else(|| Error::Input(format!("unknown prime label {p:?}")))?;
        self.restrict_to(self.poset.down_of(i))
    }

    /// `φ(j)` for `j <= k`, `∅` for `j > k`.
    pub fn truncate_leq(&self, k: i64) -> Self {
        let mut steps: Vec<(i64, PrimeSet)> =
            self.steps.iter().copied().filter(|&(t, _)| t < k).collect();
        steps.push((k, self.set_at(k)));
        Self::canonical(Arc::clone(&self.poset), steps, PrimeSet::EMPTY)
    }

    /// Restriction to one connected component of the poset.
    pub fn restrict_to_component(&self, component: PrimeSet) -> Result<Self> {
        if !self.poset.connected_components().contains(&component) {
            return input(format!(
                "{} is not a connected component",
                self.poset.format_set(component)
            ));
        }
        self.restrict_to(component)
    }

    pub fn classify_shape(&self) -> FiltrationShape {
        let full = self.poset.full();
        let is_constant = self.steps.is_empty();
        let is_eventually_trivial = self.tail.is_empty();
        let is_two_step = self.steps.len() == 1 && self.steps[0].1 == full;
        let canonical_shift = if is_two_step && is_eventually_trivial {
            Some(self.steps[0].0)
        } else {
            None
        };
        let length = match (self.steps.first(), self.steps.last()) {
            (Some(first), Some(last)) if is_eventually_trivial => Some(last.0 + 1 - first.0),
            _ => None,
        };
        FiltrationShape {
            is_constant,
            is_eventually_trivial,
            is_left_bounded: true,
            is_nondegenerate: is_eventually_trivial,
            is_two_step,
            canonical_shift,
            length,
        }
    }

    /// Level of element `p` (by index).
    pub fn level_of(&self, p: usize) -> Level {
        if self.tail.contains(p) {
            return Level::PosInf;
        }
        match self.steps.iter().rev().find(|s| s.1.contains(p)) {
            Some(&(t, _)) => Level::Finite(t),
            None => Level::NegInf,
        }
    }

    /// Levels of all elements, by index.
    pub fn levels(&self) -> Vec<Level> {
        (0..self.poset.len()).map(|p| self.level_of(p)).collect()
    }

    pub fn level_function(&self) -> BTreeMap<PrimeId, Level> {
        (0..self.poset.len())
            .map(|p| (self.poset.label(p).clone(), self.level_of(p)))
            .collect()
    }
}

impl fmt::Display for SpFiltration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut prev: Option<i64> = None;
        for &(t, v) in &self.steps {
            let range = match prev {
                None => format!("i <= {t}"),
                Some(p) if p + 1 == t => format!("i = {t}"),
                Some(p) => format!("{} <= i <= {t}", p + 1),
            };
            write!(f, "{range}: {}; ", self.poset.format_set(v))?;
            prev = Some(t);
        }
        match prev {
            None => write!(f, "all i: {}", self.poset.format_set(self.tail)),
            Some(p) => write!(f, "i > {p}: {}", self.poset.format_set(self.tail)),
        }
    }
}

/// Every filtration whose jumps lie in `[lo, hi]`, each exactly once.
///
/// Filtrations correspond to weakly decreasing chains `A_lo ⊇ ... ⊇ A_hi` of
/// up-sets; chains are visited in lexicographic order of their up-set
/// indices (indices as in [`PrimePoset::enumerate_sp_subsets`]).
pub fn enumerate_filtrations(
    poset: &Arc<PrimePoset>,
    lo: i64,
    hi: i64,
    limits: &Limits,
) -> Result<FiltrationIter> {
    if hi < lo {
        return input(format!("empty window {lo}:{hi}"));
    }
    if hi - lo > limits.max_window_width {
        return Err(Error::Resource(format!(
            "window width {} exceeds the limit {}",
            hi - lo,
            limits.max_window_width
        )));
    }
    if poset.len() > limits.max_filtration_elements {
        return Err(Error::Resource(format!(
            "filtration enumeration is limited to {} elements (poset has {})",
            limits.max_filtration_elements,
            poset.len()
        )));
    }
    let upsets = poset.enumerate_sp_subsets(limits)?;
    let contains: Vec<Vec<bool>> = upsets
        .iter()
        .map(|a| upsets.iter().map(|b| b.is_subset(*a)).collect())
        .collect();
    let len = (hi - lo + 1) as usize;
    Ok(FiltrationIter {
        poset: Arc::clone(poset),
        upsets,
        contains,
        lo,
        idx: vec![0; len],
        started: false,
        done: false,
    })
}

pub struct FiltrationIter {
    poset: Arc<PrimePoset>,
    upsets: Vec<PrimeSet>,
    contains: Vec<Vec<bool>>,
    lo: i64,
    idx: Vec<usize>,
    started: bool,
    done: bool,
}

impl FiltrationIter {
    fn advance(&mut self) -> bool {
        for pos in (0..self.idx.len()).rev() {
            let start = self.idx[pos] + 1;
            let candidate = (start..self.upsets.len())
                .find(|&b| pos == 0 || self.contains[self.idx[pos - 1]][b]);
            if let Some(b) = candidate {
                self.idx[pos] = b;
                // index 0 is the empty up-set, below everything
                for later in &mut self.idx[pos + 1..] {
                    *later = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for FiltrationIter {
    type Item = SpFiltration;

    fn next(&mut self) -> Option<SpFiltration> {
        if self.done {
            return None;
        }
        if self.started {
            if !self.advance() {
                self.done = true;
                return None;
            }
        } else {
            self.started = true;
        }
        let steps: Vec<(i64, PrimeSet)> = self
            .idx
            .iter()
            .enumerate()
            .map(|(k, &u)| (self.lo + k as i64, self.upsets[u]))
            .collect();
        let tail = steps.last().expect("window is nonempty").1;
        Some(SpFiltration::canonical(Arc::clone(&self.poset), steps, tail))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn v_poset() -> Arc<PrimePoset> {
        Arc::new(
            PrimePoset::new(&["p1", "p2", "m"], &[("p1", "m"), ("p2", "m")], BTreeMap::new()).unwrap(),
        )
    }

    fn set(p: &PrimePoset, labels: &[&str]) -> PrimeSet {
        p.set_from_labels(labels).unwrap()
    }

    /// The r = 2 reduced-ring filtration on the V-poset.
    fn two_minimal() -> SpFiltration {
        let p = v_poset();
        let steps = [
            (-2, set(&p, &["m", "p1", "p2"])),
            (-1, set(&p, &["m", "p1"])),
            (0, set(&p, &["m"])),
        ];
        SpFiltration::new(p, &steps).unwrap()
    }

    #[test]
    fn canonical_shift_shape() {
        let chain = Arc::new(PrimePoset::chain(&["p0", "m"]).unwrap());
        let full = chain.full();
        let f = SpFiltration::new(Arc::clone(&chain), &[(0, full), (1, PrimeSet::EMPTY)]).unwrap();
        assert_eq!(f, SpFiltration::canonical_at(chain, 0));
        let s = f.classify_shape();
        assert!(s.is_two_step && s.is_nondegenerate && s.is_eventually_trivial);
        assert_eq!(s.canonical_shift, Some(0));
        assert_eq!(s.length, Some(1));
    }

    #[test]
    fn merges_equal_steps_and_rejects_increase() {
        let chain = Arc::new(PrimePoset::chain(&["p0", "m"]).unwrap());
        let full = chain.full();
        let m = set(&chain, &["m"]);
        let f = SpFiltration::new(Arc::clone(&chain), &[(0, full), (1, full), (2, m)]).unwrap();
        assert_eq!(f.steps(), &[(1, full)]);
        let err = SpFiltration::new(Arc::clone(&chain), &[(0, m), (1, full)]);
        assert!(matches!(err, Err(Error::Input(_))));
        let p0 = set(&chain, &["p0"]);
        assert!(SpFiltration::new(Arc::clone(&chain), &[(0, p0)]).is_err());
        assert!(SpFiltration::new(chain, &[(1, full), (1, m)]).is_err());
    }

    #[test]
    fn values_of_two_minimal_example() {
        let f = two_minimal();
        let p = f.poset().clone();
        assert_eq!(f.set_at(0), set(&p, &["m"]));
        assert_eq!(f.set_at(7), set(&p, &["m"]));
        assert_eq!(f.set_at(-1), set(&p, &["m", "p1"]));
        assert_eq!(f.set_at(-5), p.full());
        assert_eq!(f.tail_intersection().set(), set(&p, &["m"]));
        assert_eq!(f.jumps(), vec![-2, -1]);
        let s = f.classify_shape();
        assert!(!s.is_eventually_trivial && !s.is_nondegenerate && !s.is_two_step);
        let lv = f.level_function();
        assert_eq!(lv[&PrimeId::from("m")], Level::PosInf);
        assert_eq!(lv[&PrimeId::from("p1")], Level::Finite(-1));
        assert_eq!(lv[&PrimeId::from("p2")], Level::Finite(-2));
    }

    #[test]
    fn constant_filtrations() {
        let p = v_poset();
        let z = set(&p, &["m"]);
        let c = SpFiltration::constant(Arc::clone(&p), z).unwrap();
        assert!(c.jumps().is_empty());
        assert_eq!(c.tail_intersection().set(), z);
        let e = SpFiltration::constant(Arc::clone(&p), PrimeSet::EMPTY).unwrap();
        let s = e.classify_shape();
        assert!(s.is_constant && s.is_eventually_trivial);
        assert!(e.levels().iter().all(|&l| l == Level::NegInf));
        let loc = c.localize("p1").unwrap();
        assert!(loc.is_constant());
        let comp = p.full();
        assert!(c.restrict_to_component(comp).unwrap().is_constant());
    }

    #[test]
    fn localize_two_minimal() {
        let f = two_minimal();
        let loc = f.localize("p1").unwrap();
        assert_eq!(loc.poset().len(), 1);
        assert_eq!(loc.set_at(-1), loc.poset().full());
        assert_eq!(loc.set_at(0), PrimeSet::EMPTY);
        assert_eq!(loc.classify_shape().canonical_shift, Some(-1));
        assert!(f.localize("zz").is_err());
        // minimal prime: one-point poset
        assert_eq!(f.localize("p2").unwrap().poset().len(), 1);
    }

    #[test]
    fn truncations() {
        let chain = Arc::new(PrimePoset::chain(&["p0", "m"]).unwrap());
        let c = SpFiltration::canonical_at(Arc::clone(&chain), 2);
        assert_eq!(c.truncate_leq(5), c);
        assert_eq!(c.truncate_leq(2), c);
        let z = set(&chain, &["m"]);
        let k = SpFiltration::constant(Arc::clone(&chain), z).unwrap().truncate_leq(0);
        assert_eq!(k.steps(), &[(0, z)]);
        assert!(k.classify_shape().is_eventually_trivial);
        let f = two_minimal();
        let t = f.truncate_leq(-2);
        assert_eq!(t.steps(), &[(-2, f.poset().full())]);
        assert_eq!(t.set_at(-1), PrimeSet::EMPTY);
    }

    #[test]
    fn component_restriction() {
        let p = Arc::new(PrimePoset::discrete(&["(2)", "(3)"]).unwrap());
        let f = SpFiltration::new(
            Arc::clone(&p),
            &[(0, p.full()), (1, set(&p, &["(2)"])), (2, PrimeSet::EMPTY)],
        )
        .unwrap();
        let three = set(&p, &["(3)"]);
        let r = f.restrict_to_component(three).unwrap();
        let s = r.classify_shape();
        assert!(s.is_eventually_trivial);
        assert_eq!(s.length, Some(1));
        assert_eq!(s.canonical_shift, Some(0));
        assert!(f.restrict_to_component(p.full()).is_err());
    }

    fn brute_chain_count(p: &PrimePoset, points: usize) -> usize {
        let ups = p.enumerate_sp_subsets(&Limits::default()).unwrap();
        let mut count = 0;
        let total = ups.len().pow(points as u32);
        for code in 0..total {
            let mut c = code;
            let chain: Vec<PrimeSet> = (0..points)
                .map(|_| {
                    let u = ups[c % ups.len()];
                    c /= ups.len();
                    u
                })
                .collect();
            if chain.windows(2).all(|w| w[1].is_subset(w[0])) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn enumeration_counts() {
        let chain = Arc::new(PrimePoset::chain(&["p0", "m"]).unwrap());
        assert_eq!(enumerate_filtrations(&chain, 0, 1, &Limits::default()).unwrap().count(), 6);
        let one = Arc::new(PrimePoset::discrete(&["p"]).unwrap());
        assert_eq!(enumerate_filtrations(&one, 0, 0, &Limits::default()).unwrap().count(), 2);
        let anti = Arc::new(PrimePoset::discrete(&["a", "b"]).unwrap());
        let all: Vec<_> = enumerate_filtrations(&anti, 0, 0, &Limits::default()).unwrap().collect();
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(SpFiltration::is_constant));
        let v = v_poset();
        for w in 0..4 {
            let got: Vec<_> = enumerate_filtrations(&v, -1, -1 + w, &Limits::default())
                .unwrap()
                .collect();
            assert_eq!(got.len(), brute_chain_count(&v, w as usize + 1));
            for (i, a) in got.iter().enumerate() {
                assert!(got[i + 1..].iter().all(|b| b != a));
            }
        }
    }

    #[test]
    fn enumeration_guards() {
        let chain = Arc::new(PrimePoset::chain(&["p0", "m"]).unwrap());
        assert!(matches!(
            enumerate_filtrations(&chain, 0, 9, &Limits::default()),
            Err(Error::Resource(_))
        ));
        assert!(enumerate_filtrations(&chain, 0, 9, &Limits::unbounded()).is_ok());
        let names: Vec<String> = (0..9).map(|i| format!("x{i}")).collect();
        let big = Arc::new(PrimePoset::discrete(&names).unwrap());
        assert!(matches!(
            enumerate_filtrations(&big, 0, 1, &Limits::default()),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn display_is_readable() {
        let f = two_minimal();
        assert_eq!(
            f.to_string(),
            "i <= -2: {m, p1, p2}; i = -1: {m, p1}; i > -1: {m}"
        );
    }
}
