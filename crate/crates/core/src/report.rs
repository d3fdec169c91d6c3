//! Deterministic reports for spectra, classifications and censuses.
//!
//! Every report is a plain serde structure; JSON is produced through
//! `serde_json::Value`, whose maps keep keys sorted, so re-serializing
//! parsed output is byte-identical.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::classifier::{
    aisle_membership, classify_fastpaths, module_verdict, quotient_heart_description, stalk_tf_report,
    HeartClassification, Verdict,
};
use crate::doc::{FiltrationEntry, JobDoc};
use crate::error::{Error, Result};
use crate::filtration::{enumerate_filtrations, Level, SpFiltration};
use crate::limits::Limits;
use crate::module::FgModule;
use crate::poset::{PrimeId, PrimePoset};
use crate::ring::RingSpec;
use crate::verify::{run_suite, SuiteReport, DEFAULT_SEED};

/// Pretty JSON with sorted keys.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let value = serde_json::to_value(report).expect("reports serialize to JSON");
    serde_json::to_string_pretty(&value).expect("JSON values render")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub primes: Vec<PrimeId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idempotent: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub ring: String,
    pub elements: Vec<PrimeId>,
    pub covers: Vec<(PrimeId, PrimeId)>,
    pub components: Vec<ComponentReport>,
    pub minimal: Vec<PrimeId>,
    pub maximal: Vec<PrimeId>,
    pub residues: BTreeMap<PrimeId, String>,
}

pub fn spectrum_report(ring: &RingSpec) -> SpectrumReport {
    let spec = ring.spectrum();
    let idempotents = ring.connected_idempotents();
    let components = spec
        .connected_components()
        .into_iter()
        .map(|c| ComponentReport {
            primes: spec.labels_of(c),
            idempotent: idempotents.iter().find(|(s, _)| *s == c).map(|(_, t)| t.clone()),
        })
        .collect();
    SpectrumReport {
        ring: ring.name(),
        elements: spec.labels().to_vec(),
        covers: spec.covers(),
        components,
        minimal: spec.labels_of(spec.minimal_primes()),
        maximal: spec.labels_of(spec.maximal_primes()),
        residues: spec.residues().clone(),
    }
}

fn names(ids: &[PrimeId]) -> String {
    let v: Vec<&str> = ids.iter().map(PrimeId::as_str).collect();
    format!("{{{}}}", v.join(", "))
}

impl SpectrumReport {
    pub fn render_text(&self) -> String {
        let mut out = format!("ring: {}\n", self.ring);
        out.push_str(&format!("elements: {}\n", names(&self.elements)));
        let covers: Vec<String> = self.covers.iter().map(|(a, b)| format!("{a} < {b}")).collect();
        out.push_str(&format!("covers: {}\n", if covers.is_empty() { "none".into() } else { covers.join(", ") }));
        out.push_str(&format!("components: {}\n", self.components.len()));
        for c in &self.components {
            match &c.idempotent {
                Some(e) => out.push_str(&format!("  {} (idempotent {e})\n", names(&c.primes))),
                None => out.push_str(&format!("  {}\n", names(&c.primes))),
            }
        }
        out.push_str(&format!("minimal primes: {}\n", names(&self.minimal)));
        out.push_str(&format!("maximal primes: {}\n", names(&self.maximal)));
        if !self.residues.is_empty() {
            let r: Vec<String> = self.residues.iter().map(|(p, k)| format!("k({p}) = {k}")).collect();
            out.push_str(&format!("residue fields: {}\n", r.join(", ")));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PieceReport {
    pub component: Vec<PrimeId>,
    pub m: Level,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AisleReport {
    pub complex: String,
    pub member: bool,
    /// `(degree, primes of the support outside φ(degree))`.
    pub violations: Vec<(i64, Vec<PrimeId>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StalkEntry {
    pub m: i64,
    pub module: String,
    pub in_heart: bool,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub filtration: String,
    pub verdict: Verdict,
    pub grothendieck: bool,
    pub reason: String,
    #[serde(rename = "Z")]
    pub z: Vec<PrimeId>,
    pub jumps: Vec<i64>,
    pub pieces: Vec<PieceReport>,
    #[serde(rename = "ring_A", skip_serializing_if = "Option::is_none")]
    pub ring_a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heart: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub aisle: Vec<AisleReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub stalks: Vec<StalkEntry>,
}

impl ClassificationReport {
    pub fn from_classification(name: Option<String>, phi: &SpFiltration, c: &HeartClassification) -> Self {
        ClassificationReport {
            name,
            filtration: phi.to_string(),
            verdict: c.verdict,
            grothendieck: c.grothendieck,
            reason: c.reason.clone(),
            z: c.z.labels(),
            jumps: c.jumps.clone(),
            pieces: c
                .pieces
                .iter()
                .map(|p| PieceReport {
                    component: p.component.clone(),
                    m: p.level,
                })
                .collect(),
            ring_a: c.ring_a.as_ref().map(|a| a.render()),
            heart: c.heart.clone(),
            witness: c.witness.as_ref().map(ToString::to_string),
            quotient: quotient_heart_description(phi),
            aisle: Vec::new(),
            stalks: Vec::new(),
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = match &self.name {
            Some(n) => format!("filtration {n}: {}\n", self.filtration),
            None => format!("filtration: {}\n", self.filtration),
        };
        out.push_str(&format!("  verdict: {}\n", self.verdict));
        out.push_str(&format!("  grothendieck: {} ({})\n", self.grothendieck, self.reason));
        out.push_str(&format!("  Z: {}\n", names(&self.z)));
        let jumps: Vec<String> = self.jumps.iter().map(i64::to_string).collect();
        out.push_str(&format!("  jumps: [{}]\n", jumps.join(", ")));
        if !self.pieces.is_empty() {
            let p: Vec<String> = self.pieces.iter().map(|p| format!("{} at {}", names(&p.component), p.m)).collect();
            out.push_str(&format!("  pieces: {}\n", p.join("; ")));
        }
        if let Some(a) = &self.ring_a {
            out.push_str(&format!("  ring_A: {a}\n"));
        }
        if let Some(h) = &self.heart {
            out.push_str(&format!("  heart: {h}\n"));
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!("  witness: {w}\n"));
        }
        if let Some(q) = &self.quotient {
            out.push_str(&format!("  {q}\n"));
        }
        for a in &self.aisle {
            let yes = if a.member { "yes" } else { "no" };
            out.push_str(&format!("  complex {} in aisle: {yes}", a.complex));
            for (d, ps) in &a.violations {
                out.push_str(&format!("; H^{d} supported at {} outside phi({d})", names(ps)));
            }
            out.push('\n');
        }
        for s in &self.stalks {
            for line in s.text.lines() {
                out.push_str(&format!("  {line}\n"));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub fastpaths_only: bool,
}

pub fn classify(ring: &RingSpec, phi: &SpFiltration, opts: ClassifyOptions) -> Result<HeartClassification> {
    if opts.fastpaths_only {
        classify_fastpaths(ring, phi)
    } else {
        module_verdict(ring, phi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JobReport {
    pub ring: String,
    pub classifications: Vec<ClassificationReport>,
    /// Suites listed under `verifications`, run with [`DEFAULT_SEED`].
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verifications: Vec<SuiteReport>,
}

impl JobReport {
    pub fn has_conditional(&self) -> bool {
        self.classifications.iter().any(|c| c.verdict == Verdict::Conditional)
    }

    pub fn all_verifications_passed(&self) -> bool {
        self.verifications.iter().all(|v| v.passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("ring: {}\n", self.ring);
        for c in &self.classifications {
            out.push_str(&c.render_text());
        }
        for v in &self.verifications {
            out.push_str(&v.render_text());
        }
        out
    }
}

/// Stalk `Y[-m]` against `φ`; modules outside `T_m` are not in the aisle.
fn stalk_entry(phi: &SpFiltration, m: i64, y: &FgModule) -> Result<StalkEntry> {
    let supp = y.support(phi.poset())?;
    if !supp.set().is_subset(phi.set_at(m)) {
        return Ok(StalkEntry {
            m,
            module: y.to_string(),
            in_heart: false,
            text: format!(
                "({y})[{}] lies in the heart: no (support {} not inside phi({m}))",
                -m,
                phi.poset().format_set(supp.set())
            ),
        });
    }
    let r = stalk_tf_report(phi, m, y)?;
    Ok(StalkEntry {
        m,
        module: r.module,
        in_heart: r.in_heart,
        text: r.text,
    })
}

/// All filtrations of a job, with their names, in document order.
pub fn job_filtrations(
    job: &JobDoc,
    spec: &Arc<PrimePoset>,
    limits: &Limits,
) -> Result<Vec<(Option<String>, SpFiltration)>> {
    let mut out = Vec::new();
    for entry in &job.filtrations {
        match entry {
            FiltrationEntry::Inline(doc) => out.push((doc.name.clone(), doc.build(spec)?)),
            FiltrationEntry::Enumerate { enumerate: w } => {
                for phi in enumerate_filtrations(spec, w.lo, w.hi, limits)? {
                    out.push((None, phi));
                }
            }
        }
    }
    Ok(out)
}

pub fn run_job(job: &JobDoc, opts: ClassifyOptions, limits: &Limits) -> Result<JobReport> {
    let ring = job.ring.build()?;
    let spec = Arc::new(ring.spectrum());
    let complexes = job
        .complexes
        .iter()
        .enumerate()
        .map(|(i, c)| Ok((c.name.clone().unwrap_or_else(|| format!("#{}", i + 1)), c.build(&spec)?)))
        .collect::<Result<Vec<_>>>()?;
    let stalks = job
        .stalks
        .iter()
        .map(|s| Ok((s.m, s.module.build()?)))
        .collect::<Result<Vec<_>>>()?;
    let mut classifications = Vec::new();
    for (name, phi) in job_filtrations(job, &spec, limits)? {
        let c = classify(&ring, &phi, opts)?;
        let mut r = ClassificationReport::from_classification(name, &phi, &c);
        for (cname, x) in &complexes {
            let a = aisle_membership(x, &phi)?;
            r.aisle.push(AisleReport {
                complex: cname.clone(),
                member: a.member,
                violations: a.violations,
            });
        }
        for (m, y) in &stalks {
            r.stalks.push(stalk_entry(&phi, *m, y)?);
        }
        classifications.push(r);
    }
    let verifications = job
        .verifications
        .iter()
        .map(|params| run_suite(params, DEFAULT_SEED, limits))
        .collect::<Result<Vec<_>>>()?;
    Ok(JobReport {
        ring: ring.name(),
        classifications,
        verifications,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    pub filtration: String,
    pub verdict: Verdict,
    #[serde(rename = "ring_A", skip_serializing_if = "Option::is_none")]
    pub ring_a: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerateReport {
    pub ring: String,
    pub window: (i64, i64),
    pub total: u64,
    pub counts: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub listing: Option<Vec<CensusEntry>>,
}

impl EnumerateReport {
    pub fn render_text(&self) -> String {
        let mut out = format!("ring: {}\nwindow: {}:{}\n", self.ring, self.window.0, self.window.1);
        if let Some(list) = &self.listing {
            for e in list {
                match &e.ring_a {
                    Some(a) => out.push_str(&format!("{} => {} [{a}]\n", e.filtration, e.verdict)),
                    None => out.push_str(&format!("{} => {}\n", e.filtration, e.verdict)),
                }
            }
        }
        out.push_str(&format!("total: {}\n", self.total));
        for (v, n) in &self.counts {
            out.push_str(&format!("  {v}: {n}\n"));
        }
        out
    }
}

/// Census of every filtration with jumps in `[lo, hi]`; with `summary_only`
/// the per-filtration listing is dropped.
pub fn enumerate_report(
    ring: &RingSpec,
    lo: i64,
    hi: i64,
    summary_only: bool,
    opts: ClassifyOptions,
    limits: &Limits,
) -> Result<EnumerateReport> {
    if lo > hi {
        return Err(Error::Input(format!("empty window {lo}:{hi}")));
    }
    let spec = Arc::new(ring.spectrum());
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut listing = Vec::new();
    let mut total = 0;
    for phi in enumerate_filtrations(&spec, lo, hi, limits)? {
        let c = classify(ring, &phi, opts)?;
        total += 1;
        *counts.entry(c.verdict.as_str().to_string()).or_default() += 1;
        if !summary_only {
            listing.push(CensusEntry {
                filtration: phi.to_string(),
                verdict: c.verdict,
                ring_a: c.ring_a.as_ref().map(|a| a.render()),
            });
        }
    }
    Ok(EnumerateReport {
        ring: ring.name(),
        window: (lo, hi),
        total,
        counts,
        listing: (!summary_only).then_some(listing),
    })
}
