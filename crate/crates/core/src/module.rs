//! Finitely generated modules over `ℤ` and `ℤ/n`, given by presentations.
//!
//! Everything is normalized through the Smith normal form: a module is kept
//! together with its invariant factors, and support, torsion parts and Ext
//! groups are read off the cyclic decomposition.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{input, Error, Result};
use crate::filtration::SpFiltration;
use crate::matrix::{smith_normal_form, Matrix};
use crate::poset::{PrimeId, PrimePoset, SpSubset};
use crate::ring::{DedekindBase, RingSpec, GENERIC_POINT};

/// Base ring of a module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    #[serde(rename = "Z")]
    Integers,
    Zmod(u64),
}

impl Base {
    pub fn zmod(n: u64) -> Result<Self> {
        if n < 2 {
            return input(format!("Z/n needs n >= 2 (got {n})"));
        }
        Ok(Base::Zmod(n))
    }

    /// The base ring of `ring`, if modules over it are supported.
    pub fn of_ring(ring: &RingSpec) -> Option<Base> {
        match ring {
            RingSpec::ZmodN { n, .. } => Some(Base::Zmod(*n)),
            RingSpec::DedekindMarked {
                base: DedekindBase::Integers,
                ..
            } => Some(Base::Integers),
            _ => None,
        }
    }

    /// `R/p` for a prime label of the base's spectrum.
    pub fn residue_module(self, label: &str) -> Result<FgModule> {
        match (self, parse_prime_label(label)?) {
            (Base::Integers, PrimeLabel::Generic) => Ok(FgModule::free(self, 1)),
            (Base::Zmod(_), PrimeLabel::Generic) => input(format!("{label} is not a prime of {self}")),
            (Base::Zmod(n), PrimeLabel::Maximal(p)) if n % p != 0 => {
                input(format!("{label} is not a prime of {self}"))
            }
            (_, PrimeLabel::Maximal(p)) => FgModule::from_cyclics(self, &[p]),
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Integers => f.write_str("Z"),
            Base::Zmod(n) => write!(f, "Z/{n}"),
        }
    }
}

enum PrimeLabel {
    Generic,
    Maximal(u64),
}

fn parse_prime_label(label: &str) -> Result<PrimeLabel> {
    if label == GENERIC_POINT {
        return Ok(PrimeLabel::Generic);
    }
    label
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .and_then(|s| s.parse::<u64>().ok())
        .filter(|&p| arith::is_prime(p))
        .map(PrimeLabel::Maximal)
        .ok_or_else(|| Error::Input(format!("{label:?} is not an integer prime label such as \"(2)\"")))
}

fn prime_label(p: u64) -> String {
    format!("({p})")
}

/// Cokernel of a presentation matrix (generators × relations).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgModule {
    base: Base,
    presentation: Matrix,
    /// Invariant factors `d₁ | d₂ | ⋯`, units dropped; `0` marks a free summand.
    factors: Vec<u64>,
}

impl FgModule {
    pub fn new(base: Base, presentation: Matrix) -> Result<Self> {
        let mut presentation = presentation;
        if let Base::Zmod(n) = base {
            if n < 2 {
                return input(format!("Z/n needs n >= 2 (got {n})"));
            }
            for i in 0..presentation.rows() {
                for j in 0..presentation.cols() {
                    let v = presentation.get(i, j).rem_euclid(n as i128);
                    presentation.set(i, j, v);
                }
            }
        }
        let factors = invariant_factors(base, &presentation)?;
        Ok(FgModule {
            base,
            presentation,
            factors,
        })
    }

    /// From row-major generator rows; all rows must have the same length.
    pub fn from_rows(base: Base, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let m = Matrix::from_rows(rows, cols)
            .ok_or_else(|| Error::Input("presentation rows have different lengths".into()))?;
        Self::new(base, m)
    }

    /// `⊕ base/(d)`; `d = 0` is a free summand (over `ℤ` only).
    pub fn from_cyclics(base: Base, orders: &[u64]) -> Result<Self> {
        for &d in orders {
            match base {
                Base::Integers => {}
                Base::Zmod(n) if d != 0 && n % d == 0 => {}
                Base::Zmod(n) => return input(format!("Z/{d} is not a module over Z/{n}")),
            }
        }
        let diag: Vec<i128> = orders.iter().map(|&d| i128::from(d)).collect();
        Self::new(base, Matrix::diagonal(orders.len(), orders.len(), &diag))
    }

    pub fn zero(base: Base) -> Self {
        Self::new(base, Matrix::zeros(0, 0)).expect("zero module")
    }

    /// `base^rank`.
    pub fn free(base: Base, rank: usize) -> Self {
        let d = match base {
            Base::Integers => 0,
            Base::Zmod(n) => n,
        };
        Self::from_cyclics(base, &vec![d; rank]).expect("free module")
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn presentation(&self) -> &Matrix {
        &self.presentation
    }

    /// Invariant factors `d₁ | d₂ | ⋯` (units dropped, `0` for free summands).
    pub fn decompose(&self) -> &[u64] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|&&d| d == 0).count()
    }

    /// Number of elements, `None` when infinite.
    pub fn cardinality(&self) -> Option<u128> {
        self.factors
            .iter()
            .try_fold(1u128, |acc, &d| (d != 0).then(|| acc * d as u128))
    }

    /// Multiset of prime powers `(p, a)` of the torsion summands.
    pub fn primary_parts(&self) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = self
            .factors
            .iter()
            .filter(|&&d| d != 0)
            .flat_map(|&d| arith::factorize(d))
            .collect();
        out.sort_unstable();
        out
    }

    fn torsion_primes(&self) -> BTreeSet<u64> {
        self.primary_parts().into_iter().map(|(p, _)| p).collect()
    }

    pub fn is_isomorphic(&self, other: &FgModule) -> bool {
        self.base == other.base && self.factors == other.factors
    }

    pub fn direct_sum(&self, other: &FgModule) -> Result<FgModule> {
        if self.base != other.base {
            return input(format!("cannot add a {}-module to a {}-module", self.base, other.base));
        }
        let (a, b) = (&self.presentation, &other.presentation);
        let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                m.set(i, j, a.get(i, j));
            }
        }
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                m.set(a.rows() + i, a.cols() + j, b.get(i, j));
            }
        }
        FgModule::new(self.base, m)
    }

    /// Prime labels that must be present in an ambient spectrum.
    fn check_labels(&self, ambient: &PrimePoset, labels: &[String]) -> Result<()> {
        for l in labels {
            if ambient.index_of(l).is_none() {
                return input(format!(
                    "prime {l} is needed for {self} but is not in the spectrum (mark it)"
                ));
            }
        }
        Ok(())
    }

    fn associated_labels(&self) -> Vec<String> {
        let mut labels = Vec::new();
        if self.base == Base::Integers && self.free_rank() > 0 {
            labels.push(GENERIC_POINT.to_string());
        }
        labels.extend(self.torsion_primes().into_iter().map(prime_label));
        labels
    }

    /// `Supp(M)` inside the spectrum of the base.
    pub fn support(&self, ambient: &Arc<PrimePoset>) -> Result<SpSubset> {
        let labels = self.associated_labels();
        self.check_labels(ambient, &labels)?;
        crate::poset::closure_up(ambient, &labels)
    }

    /// `Ass(M)`.
    pub fn associated_primes(&self, ambient: &PrimePoset) -> Result<BTreeSet<PrimeId>> {
        let labels = self.associated_labels();
        self.check_labels(ambient, &labels)?;
        Ok(labels.into_iter().map(PrimeId).collect())
    }

    /// `Supp(M) ⊆ Z`.
    pub fn is_torsion_member(&self, z: &SpSubset) -> Result<bool> {
        Ok(self.support(z.poset())?.set().is_subset(z.set()))
    }

    /// `Γ_Z(M)`, the largest submodule supported in `Z`, and `M/Γ_Z(M)`.
    pub fn torsion_radical(&self, z: &SpSubset) -> Result<TorsionSplit> {
        self.support(z.poset())?;
        let everything = z.contains(GENERIC_POINT);
        let in_z = |p: u64| everything || z.contains(&prime_label(p));
        let mut torsion = Vec::new();
        let mut quotient = Vec::new();
        let mut embedding = Vec::new();
        for (i, &d) in self.factors.iter().enumerate() {
            if d == 0 {
                if everything {
                    torsion.push(0);
                    embedding.push((i, 1));
                } else {
                    quotient.push(0);
                }
                continue;
            }
            let dz: u64 = arith::factorize(d)
                .into_iter()
                .filter(|&(p, _)| in_z(p))
                .map(|(p, a)| p.pow(a))
                .product();
            if dz > 1 {
                torsion.push(dz);
                embedding.push((i, d / dz));
            }
            if d / dz > 1 {
                quotient.push(d / dz);
            }
        }
        Ok(TorsionSplit {
            torsion: FgModule::from_cyclics(self.base, &torsion)?,
            quotient: FgModule::from_cyclics(self.base, &quotient)?,
            embedding,
        })
    }
}

impl fmt::Display for FgModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&d| match (d, self.base) {
                (0, _) => "Z".to_string(),
                (d, _) => format!("Z/{d}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

fn invariant_factors(base: Base, presentation: &Matrix) -> Result<Vec<u64>> {
    if let Some(f) = diagonal_invariant_factors(base, presentation) {
        return Ok(f);
    }
    let g = presentation.rows();
    let a = match base {
        Base::Integers => presentation.clone(),
        Base::Zmod(n) => {
            let n_id = Matrix::diagonal(g, g, &vec![n as i128; g]);
            presentation.hconcat(&n_id)
        }
    };
    let diag = smith_normal_form(&a).diagonal();
    let mut factors = Vec::with_capacity(g);
    for i in 0..g {
        let d = diag.get(i).cloned().unwrap_or_default();
        let d = u64::try_from(&d).map_err(|_| Error::Resource(format!("invariant factor {d} overflows")))?;
        if d != 1 {
            factors.push(d);
        }
    }
    Ok(factors)
}

/// Square diagonal presentations with nonnegative entries: regroup the
/// prime powers of the entries (elementary divisors) into invariant factors.
fn diagonal_invariant_factors(base: Base, presentation: &Matrix) -> Option<Vec<u64>> {
    let g = presentation.rows();
    if presentation.cols() != g {
        return None;
    }
    let mut orders = Vec::with_capacity(g);
    for i in 0..g {
        for j in 0..g {
            let v = presentation.get(i, j);
            if (i == j && v < 0) || (i != j && v != 0) {
                return None;
            }
        }
        let d = u64::try_from(presentation.get(i, i)).ok()?;
        orders.push(match base {
            Base::Integers => d,
            Base::Zmod(n) if d == 0 => n,
            Base::Zmod(n) => arith::gcd(d, n),
        });
    }
    let free = orders.iter().filter(|&&d| d == 0).count();
    let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &d in orders.iter().filter(|&&d| d > 1) {
        for (p, a) in arith::factorize(d) {
            by_prime.entry(p).or_default().push(a);
        }
    }
    let torsion_count = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut torsion = vec![1u64; torsion_count];
    for (p, mut exps) in by_prime {
        // largest exponents go to the last invariant factor
        exps.sort_unstable();
        let offset = torsion_count - exps.len();
        for (k, a) in exps.into_iter().enumerate() {
            torsion[offset + k] = torsion[offset + k].checked_mul(p.checked_pow(a)?)?;
        }
    }
    torsion.extend(std::iter::repeat_n(0, free));
    Some(torsion)
}

/// Result of splitting off the `Z`-torsion part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionSplit {
    pub torsion: FgModule,
    pub quotient: FgModule,
    /// `(i, c)`: a torsion summand maps into the `i`-th invariant-factor
    /// summand of `M` as multiplication by `c`.
    pub embedding: Vec<(usize, u64)>,
}

/// `Ext^i(M, N)` as a module over the common base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtResult {
    pub degree: u32,
    pub value: FgModule,
    pub is_zero: bool,
}

/// `Ext^i(M, N)`.
///
/// Over `ℤ` the closed forms for cyclic groups apply (global dimension 1).
/// Over `ℤ/n` each prime-power factor `ℤ/p^a` is treated separately: the
/// minimal resolution of `ℤ/p^s` is periodic, alternating multiplication by
/// `p^s` and `p^{a-s}`, so `Hom` into `ℤ/p^t` is a periodic complex of cyclic
/// groups whose homology has the exponents computed below.
pub fn ext(i: u32, m: &FgModule, n: &FgModule) -> Result<ExtResult> {
    if m.base != n.base {
        return input(format!("Ext between a {}-module and a {}-module", m.base, n.base));
    }
    let mut orders = Vec::new();
    match m.base {
        Base::Integers => {
            for &a in &m.factors {
                for &b in &n.factors {
                    let d = match (i, a, b) {
                        (0, 0, b) => Some(b),
                        (0, _, 0) => None,
                        (0, a, b) => Some(arith::gcd(a, b)),
                        (1, 0, _) => None,
                        (1, a, 0) => Some(a),
                        (1, a, b) => Some(arith::gcd(a, b)),
                        _ => None,
                    };
                    orders.extend(d.filter(|&d| d != 1));
                }
            }
        }
        Base::Zmod(modulus) => {
            let mp = m.primary_parts();
            let np = n.primary_parts();
            for &(p, s) in &mp {
                let (a, _) = arith::split_prime(modulus, p);
                for &(_, t) in np.iter().filter(|(q, _)| *q == p) {
                    let e = ext_exponent_prime_power(i, a, s, t);
                    if e > 0 {
                        orders.push(p.pow(e));
                    }
                }
            }
        }
    }
    let value = FgModule::from_cyclics(m.base, &orders)?;
    Ok(ExtResult {
        degree: i,
        is_zero: value.is_zero(),
        value,
    })
}

/// Exponent `e` with `Ext^i_{ℤ/p^a}(ℤ/p^s, ℤ/p^t) ≅ ℤ/p^e`, `1 <= s, t <= a`.
///
/// The Hom complex is `N →(p^s) N →(p^{a-s}) N →(p^s) ⋯` with `N = ℤ/p^t`;
/// on `ℤ/p^t`, multiplication by `p^c` has kernel of exponent `min(c, t)` and
/// image of exponent `max(t - c, 0)`.
pub fn ext_exponent_prime_power(i: u32, a: u32, s: u32, t: u32) -> u32 {
    let ker = |c: u32| c.min(t);
    let im = |c: u32| t.saturating_sub(c);
    match i {
        0 => ker(s),
        i if i % 2 == 1 => ker(a - s) - im(s),
        _ => ker(s) - im(a - s),
    }
}

/// All torsion modules over `base` whose primes lie in `primes` and whose
/// cardinality is at most `bound`, ordered by cardinality then factors.
/// Over `ℤ/n`, exponents are capped by those of `n`.
pub fn module_catalog(base: Base, primes: &[u64], bound: u128) -> Result<Vec<FgModule>> {
    let mut per_prime: Vec<(u64, Vec<Vec<u32>>)> = Vec::new();
    for &p in primes {
        if !arith::is_prime(p) {
            return input(format!("{p} is not prime"));
        }
        let cap = match base {
            Base::Integers => u32::MAX,
            Base::Zmod(n) => {
                let (a, _) = arith::split_prime(n, p);
                if a == 0 {
                    return input(format!("{p} does not divide {n}"));
                }
                a
            }
        };
        let mut budget = 0u32;
        while (p as u128).checked_pow(budget + 1).is_some_and(|v| v <= bound) {
            budget += 1;
        }
        let mut parts = Vec::new();
        exponent_partitions(budget, cap.min(budget), &mut Vec::new(), &mut parts);
        per_prime.push((p, parts));
    }
    let mut combos: Vec<(u128, Vec<u64>)> = vec![(1, Vec::new())];
    for (p, parts) in &per_prime {
        let mut next = Vec::new();
        for (size, cyclics) in &combos {
            for part in parts {
                let extra = part.iter().try_fold(1u128, |acc, &e| acc.checked_mul((*p as u128).pow(e)));
                let Some(total) = extra.and_then(|x| x.checked_mul(*size)) else {
                    continue;
                };
                if total <= bound {
                    let mut c = cyclics.clone();
                    c.extend(part.iter().map(|&e| p.pow(e)));
                    next.push((total, c));
                }
            }
        }
        combos = next;
    }
    let mut out = combos
        .into_iter()
        .map(|(_, c)| FgModule::from_cyclics(base, &c))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.cardinality().cmp(&b.cardinality()).then_with(|| a.factors.cmp(&b.factors)));
    Ok(out)
}

/// Non-increasing exponent lists with parts `<= cap` and sum `<= budget`.
fn exponent_partitions(budget: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    out.push(cur.clone());
    for e in (1..=cap.min(budget)).rev() {
        cur.push(e);
        exponent_partitions(budget - e, e, cur, out);
        cur.pop();
    }
}

fn z_primes(z: &SpSubset) -> Result<Vec<u64>> {
    z.labels()
        .iter()
        .map(|l| match parse_prime_label(l.as_str())? {
            PrimeLabel::Maximal(p) => Ok(p),
            PrimeLabel::Generic => Err(Error::Precondition(
                "Z contains the generic point; only finite sets of maximal ideals are catalogued".into(),
            )),
        })
        .collect()
}

/// Outcome of comparing the two Ext-vanishing conditions on `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma31Outcome {
    pub holds: bool,
    /// `Ext^i(T, M) = 0` for every catalogued `T` supported in `Z`.
    pub torsion_side: bool,
    /// `Ext^i(R/p, M) = 0` for every `p ∈ Z`.
    pub prime_side: bool,
    pub torsion_modules_checked: usize,
    pub counterexample: Option<FgModule>,
}

/// Checks that `Ext^i(T, M)` vanishes on all of `T_Z` exactly when it
/// vanishes on the cyclic modules `R/p`, `p ∈ Z`, using the catalog of
/// torsion modules of cardinality at most `bound`.
pub fn verify_lemma31(ring: &RingSpec, z: &SpSubset, i: u32, m: &FgModule, bound: u128) -> Result<Lemma31Outcome> {
    let base = Base::of_ring(ring)
        .ok_or_else(|| Error::Precondition(format!("no module catalog over {}", ring.name())))?;
    if m.base != base {
        return input(format!("{m} is a {}-module, the ring is {}", m.base, ring.name()));
    }
    if **z.poset() != ring.spectrum() {
        return input("Z is not a subset of the ring's spectrum");
    }
    let primes = z_primes(z)?;
    let catalog = module_catalog(base, &primes, bound)?;
    let mut torsion_failure = None;
    for t in &catalog {
        if !ext(i, t, m)?.is_zero {
            torsion_failure = Some(t.clone());
            break;
        }
    }
    let mut prime_failure = None;
    for &p in &primes {
        let rp = FgModule::from_cyclics(base, &[p])?;
        if !ext(i, &rp, m)?.is_zero {
            prime_failure = Some(rp);
            break;
        }
    }
    let torsion_side = torsion_failure.is_none();
    let prime_side = prime_failure.is_none();
    let holds = torsion_side == prime_side;
    Ok(Lemma31Outcome {
        holds,
        torsion_side,
        prime_side,
        torsion_modules_checked: catalog.len(),
        counterexample: if holds { None } else { torsion_failure.or(prime_failure) },
    })
}

/// A violated vanishing condition `Ext^{k-1}(R/p, Y) ≠ 0` with `p ∈ φ(m+k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TfCertificate {
    pub k: u32,
    pub prime: PrimeId,
    pub ext: FgModule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TfMembership {
    pub verdict: bool,
    pub certificates: Vec<TfCertificate>,
}

/// Whether the stalk complex `Y[-m]` lies in the heart, for `Y` with support
/// in `φ(m)`: `Ext^{k-1}(R/p, Y) = 0` for all `k >= 1` and `p ∈ φ(m+k)`.
///
/// Checking `k ∈ {1, 2, 3}` decides every `k`: over `ℤ`, `Ext^{>=2}` vanishes;
/// over `ℤ/n`, `Ext^j ≅ Ext^{j+2}` for `j >= 1`, and `φ(m+k+2) ⊆ φ(m+k)`, so
/// each condition for `k >= 4` repeats one already imposed for `k - 2`.
pub fn tf_membership(y: &FgModule, m: i64, phi: &SpFiltration) -> Result<TfMembership> {
    tf_membership_up_to(y, m, phi, 3)
}

/// The same test with the vanishing conditions checked literally for
/// `1 <= k <= k_max`.
pub fn tf_membership_up_to(y: &FgModule, m: i64, phi: &SpFiltration, k_max: u32) -> Result<TfMembership> {
    let poset = phi.poset();
    let supp = y.support(poset)?;
    if !supp.set().is_subset(phi.set_at(m)) {
        return Err(Error::Precondition(format!(
            "support {} of {y} is not contained in phi({m}) = {}",
            supp,
            poset.format_set(phi.set_at(m))
        )));
    }
    let mut certificates = Vec::new();
    for k in 1..=k_max {
        let level = phi.set_at(m.saturating_add(i64::from(k)));
        for p in poset.labels_of(level) {
            let rp = y.base.residue_module(p.as_str())?;
            let e = ext(k - 1, &rp, y)?;
            if !e.is_zero {
                certificates.push(TfCertificate {
                    k,
                    prime: p,
                    ext: e.value,
                });
            }
        }
    }
    Ok(TfMembership {
        verdict: certificates.is_empty(),
        certificates,
    })
}

/// The spectrum of a base, with the given integer primes marked over `ℤ`.
pub fn base_spectrum(base: Base, marked: &[u64]) -> Result<Arc<PrimePoset>> {
    let ring = match base {
        Base::Integers => RingSpec::dedekind_integers(marked)?,
        Base::Zmod(n) => RingSpec::zmod(n)?,
    };
    Ok(Arc::new(ring.spectrum()))
}

/// Convenience: the set of labels of an sp-subset of a base spectrum.
pub fn sp_subset<S: AsRef<str>>(ambient: &Arc<PrimePoset>, labels: &[S]) -> Result<SpSubset> {
    SpSubset::from_labels(Arc::clone(ambient), labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::PrimeSet;

    #[test]
    fn diagonal_shortcut_matches_smith_form() {
        let cases: [(Base, &[u64]); 6] = [
            (Base::Integers, &[4, 6, 0, 9]),
            (Base::Integers, &[12, 18, 1]),
            (Base::Zmod(12), &[2, 6, 4, 12]),
            (Base::Zmod(8), &[2, 2, 4]),
            (Base::Zmod(36), &[6, 4, 9, 3]),
            (Base::Integers, &[0, 0, 5]),
        ];
        for (base, orders) in cases {
            let k = orders.len();
            let diag: Vec<i128> = orders.iter().map(|&d| i128::from(d)).collect();
            // an extra zero relation column forces the general path
            let general = Matrix::diagonal(k, k, &diag).hconcat(&Matrix::zeros(k, 1));
            let slow = FgModule::new(base, general).unwrap();
            let fast = FgModule::from_cyclics(base, orders).unwrap();
            assert_eq!(fast.decompose(), slow.decompose(), "{orders:?} over {base}");
        }
    }

    fn z(orders: &[u64]) -> FgModule {
        FgModule::from_cyclics(Base::Integers, orders).unwrap()
    }

    fn zn(n: u64, orders: &[u64]) -> FgModule {
        FgModule::from_cyclics(Base::Zmod(n), orders).unwrap()
    }

    #[test]
    fn decompositions() {
        let m = FgModule::from_rows(Base::Integers, &[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(m.decompose(), &[6]);
        let free = FgModule::from_rows(Base::Integers, &[vec![0], vec![0]]).unwrap();
        assert_eq!(free.decompose(), &[0, 0]);
        let m = FgModule::from_rows(Base::Zmod(12), &[vec![2]]).unwrap();
        assert_eq!(m.decompose(), &[2]);
        assert_eq!(zn(12, &[4, 3]).decompose(), &[12]);
        assert_eq!(zn(12, &[4, 3]).to_string(), "Z/12");
        assert_eq!(z(&[12, 0]).to_string(), "Z/12 + Z");
        assert!(FgModule::from_cyclics(Base::Zmod(12), &[5]).is_err());
        assert!(FgModule::zero(Base::Integers).is_zero());
    }

    #[test]
    fn supports_and_associated_primes() {
        let amb = base_spectrum(Base::Integers, &[2, 3]).unwrap();
        let m = z(&[12, 0]);
        assert!(m.support(&amb).unwrap().is_full());
        assert_eq!(z(&[12]).support(&amb).unwrap().to_string(), "{(2), (3)}");
        assert!(FgModule::zero(Base::Integers).support(&amb).unwrap().is_empty());
        let ass: Vec<String> = m.associated_primes(&amb).unwrap().into_iter().map(|p| p.0).collect();
        assert_eq!(ass, vec!["(0)", "(2)", "(3)"]);
        let err = z(&[5]).support(&amb).unwrap_err();
        assert!(err.to_string().contains("(5)"));
    }

    #[test]
    fn torsion_radicals() {
        let amb = base_spectrum(Base::Integers, &[2, 3]).unwrap();
        let m = z(&[12, 0]);
        let split = m.torsion_radical(&sp_subset(&amb, &["(2)"]).unwrap()).unwrap();
        assert_eq!(split.torsion.decompose(), &[4]);
        assert_eq!(split.quotient.decompose(), &[3, 0]);
        assert_eq!(split.embedding, vec![(0, 3)]);
        let none = m.torsion_radical(&SpSubset::empty(Arc::clone(&amb))).unwrap();
        assert!(none.torsion.is_zero());
        assert!(none.quotient.is_isomorphic(&m));
        let all = m.torsion_radical(&SpSubset::full(Arc::clone(&amb))).unwrap();
        assert!(all.torsion.is_isomorphic(&m));
        assert!(all.quotient.is_zero());
    }

    #[test]
    fn ext_values() {
        assert_eq!(ext(1, &z(&[4]), &z(&[0])).unwrap().value.decompose(), &[4]);
        assert!(ext(2, &z(&[4]), &z(&[0])).unwrap().is_zero);
        assert_eq!(ext(0, &z(&[0]), &z(&[6])).unwrap().value.decompose(), &[6]);
        assert_eq!(ext(1, &zn(4, &[2]), &zn(4, &[2])).unwrap().value.decompose(), &[2]);
        assert!(ext(1, &zn(4, &[4]), &zn(4, &[2])).unwrap().is_zero);
        assert!(ext(1, &z(&[4]), &zn(4, &[2])).is_err());
        // Z/12 = Z/4 x Z/3 splits Ext by primes
        let e = ext(1, &zn(12, &[6]), &zn(12, &[6])).unwrap();
        assert_eq!(e.value.decompose(), &[2]);
    }

    #[test]
    fn catalogs() {
        let c = module_catalog(Base::Zmod(8), &[2], 8).unwrap();
        let names: Vec<String> = c.iter().map(ToString::to_string).collect();
        assert_eq!(names, vec!["0", "Z/2", "Z/2 + Z/2", "Z/4", "Z/2 + Z/2 + Z/2", "Z/2 + Z/4", "Z/8"]);
        let c = module_catalog(Base::Zmod(12), &[2, 3], 12).unwrap();
        assert!(c.iter().all(|m| m.cardinality().unwrap() <= 12));
        assert_eq!(c.len(), 11);
        assert!(module_catalog(Base::Zmod(8), &[3], 8).is_err());
    }

    #[test]
    fn lemma31_examples() {
        let r8 = RingSpec::zmod(8).unwrap();
        let amb = Arc::new(r8.spectrum());
        let zset = sp_subset(&amb, &["(2)"]).unwrap();
        let out = verify_lemma31(&r8, &zset, 1, &zn(8, &[2]), 512).unwrap();
        assert!(out.holds);
        let rz = RingSpec::dedekind_integers(&[2, 3]).unwrap();
        let amb = Arc::new(rz.spectrum());
        let zset = sp_subset(&amb, &["(2)", "(3)"]).unwrap();
        let out = verify_lemma31(&rz, &zset, 1, &z(&[0]), 64).unwrap();
        assert!(out.holds);
        assert!(!out.torsion_side && !out.prime_side);
        let out = verify_lemma31(&rz, &SpSubset::empty(amb), 1, &z(&[0]), 64).unwrap();
        assert!(out.holds && out.torsion_side);
    }

    #[test]
    fn stalks_in_the_heart() {
        let amb = base_spectrum(Base::Zmod(8), &[]).unwrap();
        let full = amb.full();
        let phi = SpFiltration::new(Arc::clone(&amb), &[(0, full), (1, PrimeSet::EMPTY)]).unwrap();
        let y = zn(8, &[2]);
        assert!(tf_membership(&y, 0, &phi).unwrap().verdict);
        let r = tf_membership(&y, -1, &phi).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.certificates[0].k, 1);
        assert!(tf_membership(&FgModule::zero(Base::Zmod(8)), 5, &phi).unwrap().verdict);
        assert!(matches!(tf_membership(&y, 1, &phi), Err(Error::Precondition(_))));
    }
}
