//! Decision procedures for hearts of compactly generated t-structures.
//!
//! On a finite spectrum every filtration by supports is left bounded, so the
//! heart is always a Grothendieck category. It is a module category exactly
//! when, with `Z = ⋂ φ(i)`, the level function is constant on every
//! connected component of `Spec ∖ Z` and `Z` is perfect; the category is then
//! `A-Mod` for `A` the product of the factors of `R_Z` over the finite-level
//! pieces. Components of the spectrum on which `φ` is constant carry the zero
//! heart and impose nothing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{input, Result};
use crate::filtration::{Level, SpFiltration};
use crate::module::{tf_membership, FgModule, TfCertificate};
use crate::poset::{PrimeId, PrimePoset, PrimeSet, SpSubset};
use crate::ring::{Flatness, LocalizationDescription, LocalizationKind, Perfectness, RingSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Verdict {
    /// `φ` constant and nonempty: the aisle is a triangulated subcategory.
    #[serde(rename = "degenerate")]
    Degenerate,
    /// `φ ≡ ∅`.
    #[serde(rename = "zero")]
    ZeroAisle,
    /// Grothendieck, module question not decided (fast paths only).
    #[serde(rename = "grothendieck")]
    GrothendieckOnly,
    #[serde(rename = "module")]
    ModuleCategory,
    #[serde(rename = "not_module")]
    NotModule,
    /// Module category if and only if an undecided perfectness holds.
    #[serde(rename = "conditional")]
    Conditional,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Degenerate => "degenerate",
            Verdict::ZeroAisle => "zero",
            Verdict::GrothendieckOnly => "grothendieck",
            Verdict::ModuleCategory => "module",
            Verdict::NotModule => "not_module",
            Verdict::Conditional => "conditional",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why a heart is not (or not known to be) a module category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `lower ≤ upper` inside one component of `Spec ∖ Z` with different levels.
    LevelJump {
        lower: PrimeId,
        upper: PrimeId,
        lower_level: Level,
        upper_level: Level,
    },
    NotPerfect { z: Vec<PrimeId>, reason: String },
    PerfectnessUnknown { z: Vec<PrimeId>, reason: String },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |z: &[PrimeId]| {
            let names: Vec<&str> = z.iter().map(PrimeId::as_str).collect();
            format!("{{{}}}", names.join(", "))
        };
        match self {
            Witness::LevelJump {
                lower,
                upper,
                lower_level,
                upper_level,
            } => write!(
                f,
                "{lower} <= {upper} lie in one component of Spec \\ Z but have levels {lower_level} and {upper_level}"
            ),
            Witness::NotPerfect { z, reason } => write!(f, "Z = {} is not perfect: {reason}", set(z)),
            Witness::PerfectnessUnknown { z, reason } => {
                write!(f, "module category iff Z = {} is perfect, which is undecided: {reason}", set(z))
            }
        }
    }
}

/// A piece `C_k` of `Spec ∖ Z` with its level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub component: Vec<PrimeId>,
    pub level: Level,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeartClassification {
    pub verdict: Verdict,
    pub grothendieck: bool,
    pub reason: String,
    pub z: SpSubset,
    pub jumps: Vec<i64>,
    /// Pieces of `Spec ∖ Z` by level, increasing; a `-inf` piece comes first.
    pub pieces: Vec<Piece>,
    pub ring_a: Option<LocalizationDescription>,
    pub heart: Option<String>,
    pub witness: Option<Witness>,
}

impl HeartClassification {
    /// Number of finite-level pieces.
    pub fn t(&self) -> usize {
        self.pieces.iter().filter(|p| p.level.finite().is_some()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrothendieckVerdict {
    pub is_grothendieck: bool,
    /// `Degenerate` or `ZeroAisle` for constant filtrations.
    pub note: Option<Verdict>,
    pub reason: String,
}

/// Every filtration on a finite spectrum is left bounded, and hearts of
/// left bounded filtrations are Grothendieck categories.
pub fn grothendieck_verdict(phi: &SpFiltration) -> GrothendieckVerdict {
    let shape = phi.classify_shape();
    let note = constant_verdict(phi);
    let reason = match note {
        Some(Verdict::ZeroAisle) => "zero aisle (phi is empty everywhere); the heart is 0".to_string(),
        Some(_) => "degenerate: phi is constant, so U = U[-1] and the heart is 0".to_string(),
        None if shape.is_left_bounded => {
            "left bounded filtration on a finite spectrum: the heart is a Grothendieck category".to_string()
        }
        None => "not left bounded".to_string(),
    };
    GrothendieckVerdict {
        is_grothendieck: shape.is_left_bounded,
        note,
        reason,
    }
}

fn constant_verdict(phi: &SpFiltration) -> Option<Verdict> {
    if !phi.is_constant() {
        None
    } else if phi.tail_set().is_empty() {
        Some(Verdict::ZeroAisle)
    } else {
        Some(Verdict::Degenerate)
    }
}

/// Same elements and order (residue annotations are ignored).
fn same_order(a: &PrimePoset, b: &PrimePoset) -> bool {
    a.labels() == b.labels() && (0..a.len()).all(|i| a.up_of(i) == b.up_of(i))
}

/// The ring's spectrum, checked against the filtration's poset.
fn ring_spectrum(ring: &RingSpec, phi: &SpFiltration) -> Result<Arc<PrimePoset>> {
    let spec = ring.spectrum();
    if !same_order(&spec, phi.poset()) {
        return input(format!(
            "the filtration lives on {} but Spec({}) is {}",
            phi.poset().format_set(phi.poset().full()),
            ring.name(),
            spec.format_set(spec.full())
        ));
    }
    Ok(Arc::new(spec))
}

/// A comparable pair with different levels inside `within`, if any.
fn level_jump(poset: &PrimePoset, levels: &[Level], within: PrimeSet) -> Option<Witness> {
    for (p, q) in poset.cover_indices() {
        if within.contains(p) && within.contains(q) && levels[p] != levels[q] {
            return Some(Witness::LevelJump {
                lower: poset.label(p).clone(),
                upper: poset.label(q).clone(),
                lower_level: levels[p],
                upper_level: levels[q],
            });
        }
    }
    None
}

fn base_classification(phi: &SpFiltration, verdict: Verdict) -> HeartClassification {
    let g = grothendieck_verdict(phi);
    HeartClassification {
        verdict,
        grothendieck: g.is_grothendieck,
        reason: g.reason,
        z: phi.tail_intersection(),
        jumps: phi.jumps(),
        pieces: Vec::new(),
        ring_a: None,
        heart: None,
        witness: None,
    }
}

/// Decides whether the heart of `φ` is a module category over `ring`.
pub fn module_verdict(ring: &RingSpec, phi: &SpFiltration) -> Result<HeartClassification> {
    let spec = ring_spectrum(ring, phi)?;
    if let Some(v) = constant_verdict(phi) {
        return Ok(base_classification(phi, v));
    }
    let poset = phi.poset();
    let z = phi.tail_set();
    let levels = phi.levels();
    let mut out = base_classification(phi, Verdict::ModuleCategory);

    // Level constancy on every component of Spec ∖ Z; cover pairs suffice
    // because a component is connected through covers inside it.
    let outside = poset.full().difference(z);
    let components = poset.components_within(outside);
    for &c in &components {
        if let Some(w) = level_jump(poset, &levels, c) {
            out.verdict = Verdict::NotModule;
            out.witness = Some(w);
            return Ok(out);
        }
    }

    // Perfectness, ignoring components of Spec on which φ is constant.
    let mut masked = z;
    let mut live = Vec::new();
    for k in poset.connected_components() {
        let first = phi.head_set().intersection(k);
        if first == z.intersection(k) {
            masked = masked.union(k);
        } else {
            live.push(k);
        }
    }
    let z_labels = poset.labels_of(z);
    let masked_sub = SpSubset::new(Arc::clone(&spec), masked)?;
    let desc = match ring.is_perfect(&masked_sub)? {
        Perfectness::Yes(d) => d,
        Perfectness::No(reason) => {
            out.verdict = Verdict::NotModule;
            out.witness = Some(Witness::NotPerfect { z: z_labels, reason });
            return Ok(out);
        }
        Perfectness::Unknown(reason) => {
            out.verdict = Verdict::Conditional;
            out.witness = Some(Witness::PerfectnessUnknown { z: z_labels, reason });
            out.pieces = pieces(poset, &levels, &components);
            return Ok(out);
        }
    };

    out.pieces = pieces(poset, &levels, &components);
    let parts: Vec<LocalizationDescription> = out
        .pieces
        .iter()
        .filter(|p| p.level.finite().is_some())
        .map(|p| desc.select(&p.component.iter().cloned().collect::<BTreeSet<_>>()))
        .collect();
    let over = parts.iter().flat_map(|d| d.over.clone()).collect();
    let ring_a = if parts.len() == 1 {
        parts.into_iter().next().expect("one part")
    } else {
        LocalizationDescription {
            kind: LocalizationKind::Product(parts),
            flat: Flatness::Yes,
            over,
        }
    };
    out.heart = Some(heart_text(&ring_a));
    out.ring_a = Some(ring_a);
    Ok(out)
}

fn heart_text(a: &LocalizationDescription) -> String {
    let r = a.render();
    if r.contains(' ') {
        format!("({r})-Mod")
    } else {
        format!("{r}-Mod")
    }
}

/// Groups the components of `Spec ∖ Z` by their (constant) level.
fn pieces(poset: &PrimePoset, levels: &[Level], components: &[PrimeSet]) -> Vec<Piece> {
    let mut by_level: BTreeMap<Level, PrimeSet> = BTreeMap::new();
    for &c in components {
        let Some(i) = c.iter().next() else { continue };
        let entry = by_level.entry(levels[i]).or_insert(PrimeSet::EMPTY);
        *entry = entry.union(c);
    }
    by_level
        .into_iter()
        .map(|(level, set)| Piece {
            component: poset.labels_of(set),
            level,
        })
        .collect()
}

/// A verdict reached by one of the shortcuts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastpathVerdict {
    pub verdict: Verdict,
    /// The shift `m` of a two-step filtration.
    pub shift: Option<i64>,
    pub ring_a: Option<LocalizationDescription>,
    pub witness: Option<Witness>,
    pub rule: &'static str,
}

/// Connected spectrum, `⋂ φ = ∅`: module category iff `φ` is the standard
/// t-structure shifted to some `m`, with heart `R-Mod`.
pub fn left_nondegenerate_fastpath(phi: &SpFiltration) -> Option<FastpathVerdict> {
    let poset = phi.poset();
    if !poset.is_connected() || !phi.tail_set().is_empty() || phi.is_constant() {
        return None;
    }
    let rule = "left nondegenerate on a connected spectrum";
    Some(match phi.classify_shape().canonical_shift {
        Some(m) => FastpathVerdict {
            verdict: Verdict::ModuleCategory,
            shift: Some(m),
            ring_a: None,
            witness: None,
            rule,
        },
        None => FastpathVerdict {
            verdict: Verdict::NotModule,
            shift: None,
            ring_a: None,
            witness: level_jump(poset, &phi.levels(), poset.full()),
            rule,
        },
    })
}

/// Unique minimal prime: module category iff `φ` is two-step
/// (`Spec` up to `m`, `Z` after) with `Z` perfect; the heart is `R_Z-Mod`.
pub fn irreducible_fastpath(ring: &RingSpec, phi: &SpFiltration) -> Result<Option<FastpathVerdict>> {
    let spec = ring_spectrum(ring, phi)?;
    let poset = phi.poset();
    if poset.minimal_primes().len() != 1 || phi.is_constant() {
        return Ok(None);
    }
    let rule = "unique minimal prime";
    let shape = phi.classify_shape();
    if !shape.is_two_step {
        let outside = poset.full().difference(phi.tail_set());
        return Ok(Some(FastpathVerdict {
            verdict: Verdict::NotModule,
            shift: None,
            ring_a: None,
            witness: level_jump(poset, &phi.levels(), outside),
            rule,
        }));
    }
    let m = phi.jumps()[0];
    let z = SpSubset::new(spec, phi.tail_set())?;
    let labels = z.labels();
    Ok(Some(match ring.is_perfect(&z)? {
        Perfectness::Yes(d) => FastpathVerdict {
            verdict: Verdict::ModuleCategory,
            shift: Some(m),
            ring_a: Some(d),
            witness: None,
            rule,
        },
        Perfectness::No(reason) => FastpathVerdict {
            verdict: Verdict::NotModule,
            shift: Some(m),
            ring_a: None,
            witness: Some(Witness::NotPerfect { z: labels, reason }),
            rule,
        },
        Perfectness::Unknown(reason) => FastpathVerdict {
            verdict: Verdict::Conditional,
            shift: Some(m),
            ring_a: None,
            witness: Some(Witness::PerfectnessUnknown { z: labels, reason }),
            rule,
        },
    }))
}

/// Classification using only the shortcuts; when none applies the verdict
/// is `GrothendieckOnly`.
pub fn classify_fastpaths(ring: &RingSpec, phi: &SpFiltration) -> Result<HeartClassification> {
    ring_spectrum(ring, phi)?;
    if let Some(v) = constant_verdict(phi) {
        return Ok(base_classification(phi, v));
    }
    let fast = match left_nondegenerate_fastpath(phi) {
        Some(f) => Some(f),
        None => irreducible_fastpath(ring, phi)?,
    };
    let mut out = base_classification(phi, Verdict::GrothendieckOnly);
    if let Some(f) = fast {
        out.verdict = f.verdict;
        out.witness = f.witness;
        out.reason = format!("{} ({})", out.reason, f.rule);
        if f.verdict == Verdict::ModuleCategory {
            let a = match f.ring_a {
                Some(a) => a,
                None => LocalizationDescription {
                    kind: LocalizationKind::Whole(ring.name()),
                    flat: Flatness::Yes,
                    over: phi.poset().labels().to_vec(),
                },
            };
            let outside = phi.poset().full().difference(phi.tail_set());
            out.pieces = vec![Piece {
                component: phi.poset().labels_of(outside),
                level: Level::Finite(f.shift.expect("module verdicts carry the shift")),
            }];
            out.heart = Some(heart_text(&a));
            out.ring_a = Some(a);
        }
    }
    Ok(out)
}

/// For two-step filtrations (`Spec` up to `m`, `Z` after): the heart as a
/// quotient of `R-Mod`.
pub fn quotient_heart_description(phi: &SpFiltration) -> Option<String> {
    if !phi.classify_shape().is_two_step {
        return None;
    }
    let m = phi.jumps()[0];
    let poset = phi.poset();
    let z = phi.tail_set();
    Some(if z.is_empty() {
        format!("heart ≃ R-Mod (stalks in degree {m})")
    } else {
        format!(
            "heart ≃ R-Mod/T_Z (Giraud subcategory of Z-closed modules), Z = {}, stalks in degree {m}; a module category iff Z is perfect",
            poset.format_set(z)
        )
    })
}

/// Homology of a complex, one entry per nonzero degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomologyEntry {
    Module(FgModule),
    Support(SpSubset),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComplexDescriptor {
    entries: BTreeMap<i64, HomologyEntry>,
}

impl ComplexDescriptor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, degree: i64, entry: HomologyEntry) -> Result<()> {
        if self.entries.contains_key(&degree) {
            return input(format!("degree {degree} is listed twice"));
        }
        self.entries.insert(degree, entry);
        Ok(())
    }

    pub fn entries(&self) -> &BTreeMap<i64, HomologyEntry> {
        &self.entries
    }

    /// `H^{i+s}` of the result is `H^i` of `self`.
    pub fn shift(&self, s: i64) -> Self {
        ComplexDescriptor {
            entries: self.entries.iter().map(|(&d, e)| (d + s, e.clone())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AisleMembership {
    pub member: bool,
    /// `(degree, primes of the support outside φ(degree))`.
    pub violations: Vec<(i64, Vec<PrimeId>)>,
}

/// `X ∈ U_φ` iff `Supp H^i(X) ⊆ φ(i)` for every `i`.
pub fn aisle_membership(x: &ComplexDescriptor, phi: &SpFiltration) -> Result<AisleMembership> {
    let poset = phi.poset();
    let mut violations = Vec::new();
    for (&degree, entry) in &x.entries {
        let supp = match entry {
            HomologyEntry::Module(m) => m.support(poset)?.set(),
            HomologyEntry::Support(s) => {
                if !same_order(s.poset(), poset) {
                    return input(format!("support at degree {degree} is not in the filtration's poset"));
                }
                s.set()
            }
        };
        let extra = supp.difference(phi.set_at(degree));
        if !extra.is_empty() {
            violations.push((degree, poset.labels_of(extra)));
        }
    }
    Ok(AisleMembership {
        member: violations.is_empty(),
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StalkReport {
    pub m: i64,
    pub module: String,
    pub in_heart: bool,
    pub certificates: Vec<TfCertificate>,
    pub text: String,
}

/// Whether `Y[-m]` lies in the heart of `φ`.
pub fn stalk_tf_report(phi: &SpFiltration, m: i64, y: &FgModule) -> Result<StalkReport> {
    let r = tf_membership(y, m, phi)?;
    let yes = if r.verdict { "yes" } else { "no" };
    let mut text = format!("({y})[{}] lies in the heart: {yes}", -m);
    for c in &r.certificates {
        text.push_str(&format!("\n  Ext^{}(R/{}, Y) = {} with {} in phi({})", c.k - 1, c.prime, c.ext, c.prime, m + i64::from(c.k)));
    }
    Ok(StalkReport {
        m,
        module: y.to_string(),
        in_heart: r.verdict,
        certificates: r.certificates,
        text,
    })
}
