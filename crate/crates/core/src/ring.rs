//! Concrete ring families, their spectra, idempotents and rings of fractions.
//!
//! Perfectness of a specialization-closed subset is decided by rules that
//! hold for each family; anything the rules do not cover is reported as
//! unknown rather than guessed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{self, Field, Poly, PrimeField, Rationals};
use crate::error::{input, Error, Result};
use crate::poset::{PrimeId, PrimePoset, PrimeSet, SpSubset};

/// Coefficient field of a polynomial base ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// `𝔽_p`.
    Fp(u64),
    Q,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Fp(p) => write!(f, "F_{p}"),
            FieldSpec::Q => f.write_str("Q"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "Q" {
            return Ok(FieldSpec::Q);
        }
        let p: u64 = s
            .strip_prefix("F_")
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| Error::Input(format!("unknown field {s:?} (expected \"Q\" or \"F_p\")")))?;
        if !arith::is_prime(p) {
            return input(format!("F_{p}: {p} is not prime"));
        }
        Ok(FieldSpec::Fp(p))
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A monic irreducible polynomial over a [`FieldSpec`], kept as rendered text
/// plus its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreduciblePoly {
    pub field: FieldSpec,
    /// Coefficients as supplied, low degree first.
    pub coeffs: Vec<i64>,
    pub degree: usize,
    /// Monic form, e.g. `x^2+x+1`.
    pub text: String,
}

impl IrreduciblePoly {
    pub fn new(field: FieldSpec, coeffs: &[i64]) -> Result<Self> {
        let (degree, text) = match field {
            FieldSpec::Fp(p) => {
                let poly = Poly::from_i64(PrimeField(p), coeffs).monic();
                let degree = poly.degree().unwrap_or(0);
                if degree == 0 {
                    return input("irreducible factors must have positive degree");
                }
                if arith::is_irreducible_mod_p(&poly) == Some(false) {
                    return input(format!("{} is reducible over F_{p}", poly.render()));
                }
                (degree, poly.render())
            }
            FieldSpec::Q => {
                // irreducibility over Q is taken on trust
                let poly = Poly::from_i64(Rationals, coeffs).monic();
                let degree = poly.degree().unwrap_or(0);
                if degree == 0 {
                    return input("irreducible factors must have positive degree");
                }
                (degree, poly.render())
            }
        };
        Ok(IrreduciblePoly {
            field,
            coeffs: coeffs.to_vec(),
            degree,
            text,
        })
    }

    pub fn label(&self) -> String {
        format!("({})", self.text)
    }

    /// `k[x]/(g)`, named as a finite field when possible.
    pub fn residue_field(&self) -> String {
        match (self.field, self.degree) {
            (field, 1) => field.to_string(),
            (FieldSpec::Fp(p), d) => match p.checked_pow(d as u32) {
                Some(q) => format!("F_{q}"),
                None => format!("F_{p}^{d}"),
            },
            (FieldSpec::Q, _) => format!("Q[x]/({})", self.text),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DedekindBase {
    Integers,
    PolyOverField(FieldSpec),
}

/// A marked maximal ideal of a Dedekind base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MarkedPrime {
    Integer(u64),
    Poly(IrreduciblePoly),
}

impl MarkedPrime {
    pub fn label(&self) -> String {
        match self {
            MarkedPrime::Integer(p) => format!("({p})"),
            MarkedPrime::Poly(g) => g.label(),
        }
    }

    fn generator(&self) -> String {
        match self {
            MarkedPrime::Integer(p) => p.to_string(),
            MarkedPrime::Poly(g) => format!("({})", g.text),
        }
    }

    fn residue_field(&self) -> String {
        match self {
            MarkedPrime::Integer(p) => format!("F_{p}"),
            MarkedPrime::Poly(g) => g.residue_field(),
        }
    }
}

/// Label of the generic point of a Dedekind domain.
pub const GENERIC_POINT: &str = "(0)";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingSpec {
    /// `ℤ/n`, with its verified factorization.
    ZmodN { n: u64, factorization: Vec<(u64, u32)> },
    /// `ℤ` or `k[x]`, seen through the generic point and finitely many maximals.
    DedekindMarked {
        base: DedekindBase,
        marked: Vec<MarkedPrime>,
    },
    /// `k[x]/(f)` with `f = ∏ g_i^{e_i}`.
    PolyQuotient {
        field: FieldSpec,
        factors: Vec<(IrreduciblePoly, u32)>,
    },
    Product(Vec<RingSpec>),
    /// A ring known only through its spectrum and declared facts.
    AbstractPoset {
        poset: Arc<PrimePoset>,
        perfect: Vec<PrimeSet>,
        reduced: bool,
    },
}

impl RingSpec {
    pub fn zmod(n: u64) -> Result<Self> {
        if n < 2 {
            return input(format!("Z/n needs n >= 2 (got {n})"));
        }
        let factorization = arith::factorize(n);
        let back: u64 = factorization.iter().map(|&(p, a)| p.pow(a)).product();
        if back != n {
            return input(format!("factorization of {n} does not multiply back"));
        }
        Ok(RingSpec::ZmodN { n, factorization })
    }

    pub fn dedekind_integers(marked: &[u64]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &p in marked {
            if !arith::is_prime(p) {
                return input(format!("marked generator {p} is not prime"));
            }
            if !seen.insert(p) {
                return input(format!("prime {p} marked twice"));
            }
        }
        Ok(RingSpec::DedekindMarked {
            base: DedekindBase::Integers,
            marked: marked.iter().map(|&p| MarkedPrime::Integer(p)).collect(),
        })
    }

    pub fn dedekind_poly(field: FieldSpec, marked: &[Vec<i64>]) -> Result<Self> {
        let mut polys = Vec::new();
        let mut seen = BTreeSet::new();
        for coeffs in marked {
            let g = IrreduciblePoly::new(field, coeffs)?;
            if !seen.insert(g.text.clone()) {
                return input(format!("prime {} marked twice", g.label()));
            }
            polys.push(MarkedPrime::Poly(g));
        }
        Ok(RingSpec::DedekindMarked {
            base: DedekindBase::PolyOverField(field),
            marked: polys,
        })
    }

    pub fn poly_quotient(field: FieldSpec, factors: &[(Vec<i64>, u32)]) -> Result<Self> {
        if factors.is_empty() {
            return input("k[x]/(f) needs a nonconstant f");
        }
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for (coeffs, e) in factors {
            if *e == 0 {
                return input("factor exponents must be positive");
            }
            let g = IrreduciblePoly::new(field, coeffs)?;
            if !seen.insert(g.text.clone()) {
                return input(format!("factor {} listed twice", g.label()));
            }
            out.push((g, *e));
        }
        Ok(RingSpec::PolyQuotient {
            field,
            factors: out,
        })
    }

    pub fn product(factors: Vec<RingSpec>) -> Result<Self> {
        if factors.is_empty() {
            return input("a product ring needs at least one factor");
        }
        Ok(RingSpec::Product(factors))
    }

    /// A ring given by a poset; `perfect` lists sp-subsets known to be perfect.
    pub fn abstract_poset(poset: Arc<PrimePoset>, perfect: Vec<PrimeSet>, reduced: bool) -> Result<Self> {
        for &z in &perfect {
            if !z.is_subset(poset.full()) || !poset.is_up_closed(z) {
                return input(format!(
                    "declared perfect subset {} is not stable under specialization",
                    poset.format_set(z)
                ));
            }
        }
        Ok(RingSpec::AbstractPoset {
            poset,
            perfect,
            reduced,
        })
    }

    /// Short name, e.g. `Z/12`, `Z`, `F_2[x]/(x+1)^2`.
    pub fn name(&self) -> String {
        match self {
            RingSpec::ZmodN { n, .. } => format!("Z/{n}"),
            RingSpec::DedekindMarked { base, .. } => base_name(base),
            RingSpec::PolyQuotient { field, factors } => {
                let f: Vec<String> = factors.iter().map(|(g, e)| power_text(&g.text, *e)).collect();
                format!("{field}[x]/{}", f.join(""))
            }
            RingSpec::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|r| format!("({})", r.name())).collect();
                parts.join(" x ")
            }
            RingSpec::AbstractPoset { .. } => "R".into(),
        }
    }

    /// `Spec(R)` as a poset (for Dedekind bases: the marked sub-spectrum).
    pub fn spectrum(&self) -> PrimePoset {
        self.try_spectrum().expect("ring specs are validated on construction")
    }

    fn try_spectrum(&self) -> Result<PrimePoset> {
        match self {
            RingSpec::ZmodN { factorization, .. } => {
                let labels: Vec<String> = factorization.iter().map(|(p, _)| format!("({p})")).collect();
                let residues = factorization
                    .iter()
                    .map(|(p, _)| (PrimeId(format!("({p})")), format!("F_{p}")))
                    .collect();
                PrimePoset::new(&labels, &[], residues)
            }
            RingSpec::DedekindMarked { base, marked } => {
                let mut labels = vec![GENERIC_POINT.to_string()];
                let mut covers = Vec::new();
                let mut residues = BTreeMap::new();
                residues.insert(PrimeId::from(GENERIC_POINT), generic_residue(base));
                for m in marked {
                    labels.push(m.label());
                    covers.push((GENERIC_POINT.to_string(), m.label()));
                    residues.insert(PrimeId(m.label()), m.residue_field());
                }
                PrimePoset::new(&labels, &covers, residues)
            }
            RingSpec::PolyQuotient { factors, .. } => {
                let labels: Vec<String> = factors.iter().map(|(g, _)| g.label()).collect();
                let residues = factors
                    .iter()
                    .map(|(g, _)| (PrimeId(g.label()), g.residue_field()))
                    .collect();
                PrimePoset::new(&labels, &[], residues)
            }
            RingSpec::Product(fs) => {
                let parts = fs.iter().map(RingSpec::try_spectrum).collect::<Result<Vec<_>>>()?;
                PrimePoset::disjoint_union(&parts)
            }
            RingSpec::AbstractPoset { poset, .. } => Ok(PrimePoset::clone(poset)),
        }
    }

    /// Residue field at a prime, as text.
    pub fn residue_field(&self, p: &str) -> Result<String> {
        let spec = self.spectrum();
        if spec.index_of(p).is_none() {
            return input(format!("unknown prime label {p:?}"));
        }
        Ok(spec
            .residue(p)
            .map_or_else(|| format!("k({p})"), str::to_owned))
    }

    /// One primitive idempotent per connected component of the spectrum.
    pub fn connected_idempotents(&self) -> Vec<(PrimeSet, String)> {
        let spec = self.spectrum();
        let by_labels = self.idempotent_texts();
        spec.connected_components()
            .into_iter()
            .map(|c| {
                let key: Vec<String> = spec.labels_of(c).into_iter().map(|l| l.0).collect();
                let text = by_labels
                    .iter()
                    .find(|(labels, _)| *labels == key)
                    .map(|(_, t)| t.clone())
                    .unwrap_or_else(|| format!("e{}", spec.format_set(c)));
                (c, text)
            })
            .collect()
    }

    /// `(sorted labels of a component, idempotent text)`.
    fn idempotent_texts(&self) -> Vec<(Vec<String>, String)> {
        match self {
            RingSpec::ZmodN { n, factorization } => factorization
                .iter()
                .map(|&(p, a)| {
                    let e = arith::crt_idempotent(*n, p.pow(a));
                    let text = if factorization.len() == 1 {
                        "1".to_string()
                    } else {
                        format!("{e} mod {n}")
                    };
                    (vec![format!("({p})")], text)
                })
                .collect(),
            RingSpec::DedekindMarked { marked, .. } => {
                let mut labels: Vec<String> = marked.iter().map(MarkedPrime::label).collect();
                labels.push(GENERIC_POINT.into());
                labels.sort();
                vec![(labels, "1".into())]
            }
            RingSpec::PolyQuotient { field, factors } => {
                if factors.len() == 1 {
                    return vec![(vec![factors[0].0.label()], "1".into())];
                }
                factors
                    .iter()
                    .map(|(g, _)| (vec![g.label()], poly_idempotent(*field, factors, g)))
                    .collect()
            }
            RingSpec::Product(fs) => {
                let k = fs.len();
                let mut out = Vec::new();
                for (i, f) in fs.iter().enumerate() {
                    for (labels, text) in f.idempotent_texts() {
                        let labels = labels.into_iter().map(|l| format!("{i}:{l}")).collect();
                        let tuple: Vec<String> = (0..k)
                            .map(|j| if j == i { text.clone() } else { "0".into() })
                            .collect();
                        out.push((labels, format!("({})", tuple.join(", "))));
                    }
                }
                out
            }
            RingSpec::AbstractPoset { .. } => Vec::new(),
        }
    }

    fn check_spectrum(&self, z: &SpSubset) -> Result<PrimePoset> {
        let spec = self.spectrum();
        if **z.poset() != spec {
            return input(format!(
                "subset is taken in a poset that is not the spectrum of {}",
                self.name()
            ));
        }
        Ok(spec)
    }

    /// Decides whether `z` is a perfect sp-subset.
    pub fn is_perfect(&self, z: &SpSubset) -> Result<Perfectness> {
        let spec = self.check_spectrum(z)?;
        Ok(self.perfect_on(&spec, z.set()))
    }

    fn perfect_on(&self, spec: &PrimePoset, z: PrimeSet) -> Perfectness {
        let over: Vec<PrimeId> = spec.labels_of(spec.full().difference(z));
        let yes = |kind: LocalizationKind| {
            Perfectness::Yes(LocalizationDescription {
                kind,
                flat: Flatness::Yes,
                over: over.clone(),
            })
        };
        if z == spec.full() {
            return yes(LocalizationKind::ZeroRing);
        }
        if z.is_empty() {
            return yes(LocalizationKind::Whole(self.name()));
        }
        match self {
            RingSpec::ZmodN { factorization, .. } => {
                let locals = factorization
                    .iter()
                    .filter(|(p, _)| !z.contains(spec.index_of(&format!("({p})")).expect("label")))
                    .map(|&(p, a)| (PrimeId(format!("({p})")), format!("Z/{}", p.pow(a))))
                    .collect();
                yes(LocalizationKind::ProductOfLocals(locals))
            }
            RingSpec::PolyQuotient { field, factors } => {
                let locals = factors
                    .iter()
                    .filter(|(g, _)| !z.contains(spec.index_of(&g.label()).expect("label")))
                    .map(|(g, e)| (PrimeId(g.label()), format!("{field}[x]/{}", power_text(&g.text, *e))))
                    .collect();
                yes(LocalizationKind::ProductOfLocals(locals))
            }
            RingSpec::DedekindMarked { base, marked } => {
                // z misses the generic point here, otherwise it would be everything
                let inverted = marked
                    .iter()
                    .filter(|m| z.contains(spec.index_of(&m.label()).expect("label")))
                    .map(MarkedPrime::generator)
                    .collect();
                yes(LocalizationKind::LocalizedDedekind {
                    base: base_name(base),
                    inverted,
                })
            }
            RingSpec::AbstractPoset {
                poset,
                perfect,
                reduced,
            } => {
                let minimal = poset.minimal_primes();
                for c in poset.connected_components() {
                    let part = z.intersection(c);
                    let known = part.is_empty()
                        || part == c
                        || (*reduced && part == c.difference(minimal))
                        || perfect.iter().any(|d| d.intersection(c) == part);
                    if !known {
                        return Perfectness::Unknown(format!(
                            "perfectness of {} is not declared for the component {}",
                            poset.format_set(part),
                            poset.format_set(c)
                        ));
                    }
                }
                if *reduced && z == poset.full().difference(minimal) {
                    yes(LocalizationKind::ProductOfResidueFields(poset.labels_of(minimal)))
                } else {
                    yes(LocalizationKind::Symbolic("R_Z".into()))
                }
            }
            RingSpec::Product(fs) => {
                let mut parts = Vec::new();
                let mut unknown = None;
                for (i, f) in fs.iter().enumerate() {
                    let sub = f.spectrum();
                    let prefix = format!("{i}:");
                    let mut local = PrimeSet::EMPTY;
                    for j in z.iter() {
                        if let Some(l) = spec.label(j).as_str().strip_prefix(&prefix) {
                            local.insert(sub.index_of(l).expect("product labels"));
                        }
                    }
                    match f.perfect_on(&sub, local) {
                        Perfectness::Yes(d) => parts.push(d.relabel(&prefix)),
                        Perfectness::No(w) => return Perfectness::No(format!("factor {i}: {w}")),
                        Perfectness::Unknown(w) => {
                            unknown.get_or_insert(format!("factor {i}: {w}"));
                        }
                    }
                }
                match unknown {
                    Some(w) => Perfectness::Unknown(w),
                    None => yes(LocalizationKind::Product(parts)),
                }
            }
        }
    }

    /// Description of `R_Z`; symbolic with unknown flatness when the rules
    /// cannot certify `Z`.
    pub fn fraction_ring_description(&self, z: &SpSubset) -> Result<LocalizationDescription> {
        let spec = self.check_spectrum(z)?;
        let over = spec.labels_of(spec.full().difference(z.set()));
        Ok(match self.perfect_on(&spec, z.set()) {
            Perfectness::Yes(d) => d,
            Perfectness::No(_) => LocalizationDescription {
                kind: LocalizationKind::Symbolic("R_Z".into()),
                flat: Flatness::No,
                over,
            },
            Perfectness::Unknown(_) => LocalizationDescription {
                kind: LocalizationKind::Symbolic("R_Z".into()),
                flat: Flatness::Unknown,
                over,
            },
        })
    }
}

fn base_name(base: &DedekindBase) -> String {
    match base {
        DedekindBase::Integers => "Z".into(),
        DedekindBase::PolyOverField(k) => format!("{k}[x]"),
    }
}

fn generic_residue(base: &DedekindBase) -> String {
    match base {
        DedekindBase::Integers => "Q".into(),
        DedekindBase::PolyOverField(k) => format!("{k}(x)"),
    }
}

fn power_text(g: &str, e: u32) -> String {
    if e == 1 {
        format!("({g})")
    } else {
        format!("({g})^{e}")
    }
}

fn poly_idempotent(field: FieldSpec, factors: &[(IrreduciblePoly, u32)], which: &IrreduciblePoly) -> String {
    fn go<F: Field>(field: F, factors: &[(IrreduciblePoly, u32)], which: &IrreduciblePoly) -> String {
        let power = |g: &IrreduciblePoly, e: u32| Poly::from_i64(field.clone(), &g.coeffs).monic().pow(e);
        let f = factors
            .iter()
            .fold(Poly::constant(field.clone(), field.one()), |acc, (g, e)| acc.mul(&power(g, *e)));
        let (g, e) = factors.iter().find(|(g, _)| g == which).expect("factor");
        let q = power(g, *e);
        match Poly::crt_idempotent(&f, &q) {
            Some(idem) => format!("{} mod ({})", idem.render(), f.render()),
            None => format!("e{}", which.label()),
        }
    }
    match field {
        FieldSpec::Fp(p) => go(PrimeField(p), factors, which),
        FieldSpec::Q => go(Rationals, factors, which),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flatness {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalizationKind {
    ZeroRing,
    /// `Z = ∅`: the ring itself.
    Whole(String),
    /// `∏ R_p` over the primes outside `Z`, each with its local ring.
    ProductOfLocals(Vec<(PrimeId, String)>),
    ProductOfResidueFields(Vec<PrimeId>),
    /// The base with the generators of the listed maximals inverted.
    LocalizedDedekind { base: String, inverted: Vec<String> },
    Symbolic(String),
    /// Factorwise description over a product ring.
    Product(Vec<LocalizationDescription>),
}

/// What is known about `R_Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizationDescription {
    pub kind: LocalizationKind,
    pub flat: Flatness,
    /// Labels of the primes outside `Z`.
    pub over: Vec<PrimeId>,
}

impl LocalizationDescription {
    pub fn is_zero(&self) -> bool {
        match &self.kind {
            LocalizationKind::ZeroRing => true,
            LocalizationKind::ProductOfLocals(v) => v.is_empty(),
            LocalizationKind::ProductOfResidueFields(v) => v.is_empty(),
            LocalizationKind::Product(v) => v.iter().all(LocalizationDescription::is_zero),
            _ => false,
        }
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        match &self.kind {
            LocalizationKind::ZeroRing => "0".into(),
            LocalizationKind::Whole(name) => name.clone(),
            LocalizationKind::ProductOfLocals(v) => {
                v.iter().map(|(_, d)| d.as_str()).collect::<Vec<_>>().join(" x ")
            }
            LocalizationKind::ProductOfResidueFields(v) => v
                .iter()
                .map(|p| format!("k({p})"))
                .collect::<Vec<_>>()
                .join(" x "),
            LocalizationKind::LocalizedDedekind { base, inverted } => {
                if inverted.is_empty() {
                    base.clone()
                } else {
                    let inv: Vec<String> = inverted.iter().map(|g| format!("1/{g}")).collect();
                    format!("{base}[{}]", inv.join(", "))
                }
            }
            LocalizationKind::Symbolic(s) => s.clone(),
            LocalizationKind::Product(parts) => parts
                .iter()
                .filter(|d| !d.is_zero())
                .map(|d| {
                    let r = d.render();
                    if r.contains(" x ") && parts.len() > 1 {
                        format!("({r})")
                    } else {
                        r
                    }
                })
                .collect::<Vec<_>>()
                .join(" x "),
        }
    }

    fn relabel(mut self, prefix: &str) -> Self {
        let pre = |p: &PrimeId| PrimeId(format!("{prefix}{p}"));
        self.over = self.over.iter().map(pre).collect();
        self.kind = match self.kind {
            LocalizationKind::ProductOfLocals(v) => {
                LocalizationKind::ProductOfLocals(v.into_iter().map(|(p, d)| (pre(&p), d)).collect())
            }
            LocalizationKind::ProductOfResidueFields(v) => {
                LocalizationKind::ProductOfResidueFields(v.iter().map(pre).collect())
            }
            LocalizationKind::Product(v) => {
                LocalizationKind::Product(v.into_iter().map(|d| d.relabel(prefix)).collect())
            }
            other => other,
        };
        self
    }

    /// The factor of `R_Z` living over the primes in `piece` (a union of
    /// connected components of `Spec ∖ Z`).
    pub fn select(&self, piece: &BTreeSet<PrimeId>) -> LocalizationDescription {
        let over: Vec<PrimeId> = self.over.iter().filter(|p| piece.contains(*p)).cloned().collect();
        let kind = match &self.kind {
            LocalizationKind::ProductOfLocals(v) => LocalizationKind::ProductOfLocals(
                v.iter().filter(|(p, _)| piece.contains(p)).cloned().collect(),
            ),
            LocalizationKind::ProductOfResidueFields(v) => {
                LocalizationKind::ProductOfResidueFields(v.iter().filter(|p| piece.contains(*p)).cloned().collect())
            }
            LocalizationKind::Product(parts) => {
                LocalizationKind::Product(parts.iter().map(|d| d.select(piece)).filter(|d| !d.is_zero()).collect())
            }
            LocalizationKind::ZeroRing => LocalizationKind::ZeroRing,
            _ if over.is_empty() => LocalizationKind::ZeroRing,
            _ if over.len() == self.over.len() => self.kind.clone(),
            _ => {
                let names: Vec<&str> = over.iter().map(PrimeId::as_str).collect();
                LocalizationKind::Symbolic(format!("{} e{{{}}}", self.render(), names.join(", ")))
            }
        };
        LocalizationDescription {
            kind,
            flat: self.flat,
            over,
        }
    }
}

impl fmt::Display for LocalizationDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Outcome of the perfectness rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Perfectness {
    Yes(LocalizationDescription),
    No(String),
    Unknown(String),
}

impl Perfectness {
    pub fn is_yes(&self) -> bool {
        matches!(self, Perfectness::Yes(_))
    }
}
