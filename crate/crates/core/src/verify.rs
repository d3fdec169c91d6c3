//! Exhaustive verification suites over desk-scale domains.
//!
//! Each suite sweeps a finite family (posets, filtrations in a window,
//! module catalogs, random matrices) and compares two independent ways of
//! deciding the same property. Failures carry a concrete counterexample.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifier::{left_nondegenerate_fastpath, module_verdict, Verdict};
use crate::doc::{PosetDoc, RingDoc, WindowDoc};
use crate::error::{input, Error, Result};
use crate::filtration::{enumerate_filtrations, Level, SpFiltration};
use crate::limits::Limits;
use crate::matrix::{smith_normal_form, Matrix};
use crate::module::{module_catalog, tf_membership, tf_membership_up_to, verify_lemma31, Base, FgModule};
use crate::poset::{connected_posets_up_to_iso, PrimePoset, SpSubset};
use crate::ring::{RingSpec, GENERIC_POINT};

fn d_degrees() -> Vec<u32> {
    vec![0, 1, 2]
}
fn d_module_bound() -> u64 {
    64
}
fn d_torsion_bound() -> u64 {
    4096
}
fn d_ms() -> Vec<i64> {
    vec![-1, 0, 1]
}
fn d_window() -> WindowDoc {
    WindowDoc { lo: -1, hi: 1 }
}
fn d_k_max() -> u32 {
    8
}
fn d_four() -> usize {
    4
}
fn d_width4() -> i64 {
    4
}
fn d_three() -> usize {
    3
}
fn d_six() -> usize {
    6
}
fn d_width3() -> i64 {
    3
}
fn d_count() -> usize {
    500
}
fn d_entry_bound() -> i64 {
    20
}

/// Suite name plus parameters, as found in `verifications` lists and in
/// `tstruct verify` parameter files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "suite", deny_unknown_fields)]
pub enum SuiteParams {
    /// Vanishing of `Ext^i(-, M)` on `T_Z` versus on `R/p`, `p ∈ Z`.
    #[serde(rename = "lemma31")]
    Lemma31 {
        ring: RingDoc,
        #[serde(default = "d_degrees")]
        degrees: Vec<u32>,
        #[serde(default = "d_module_bound")]
        module_bound: u64,
        #[serde(default = "d_torsion_bound")]
        torsion_bound: u64,
    },
    /// Stalk complexes in the heart: the `k <= 3` reduction against the
    /// literal conditions, and `TF_0 = T_0`, `TF_{-1} = T_{-1} ∩ F_0` for
    /// filtrations with `φ(0) ≠ ∅ = φ(1)`.
    #[serde(rename = "prop32")]
    Prop32 {
        ring: RingDoc,
        #[serde(default = "d_window")]
        window: WindowDoc,
        #[serde(default = "d_ms")]
        m: Vec<i64>,
        #[serde(default = "d_module_bound")]
        module_bound: u64,
        #[serde(default = "d_k_max")]
        k_max: u32,
    },
    /// Connected posets, eventually trivial filtrations: module category iff
    /// `φ(m) = Spec` and `φ(m+1) = ∅` for some `m`.
    #[serde(rename = "prop53")]
    Prop53 {
        #[serde(default)]
        poset: Option<PosetDoc>,
        #[serde(default = "d_four")]
        max_elements: usize,
        #[serde(default)]
        lo: i64,
        #[serde(default = "d_width4")]
        width: i64,
    },
    /// Connected posets, `⋂ φ = ∅`: module category iff `φ` is a shifted
    /// standard filtration; the fast path must agree.
    #[serde(rename = "cor512")]
    Cor512 {
        #[serde(default)]
        poset: Option<PosetDoc>,
        #[serde(default = "d_four")]
        max_elements: usize,
        #[serde(default)]
        lo: i64,
        #[serde(default = "d_width4")]
        width: i64,
    },
    /// Disjoint unions of small connected posets: the verdict is the
    /// conjunction of the verdicts on the components.
    #[serde(rename = "component-split")]
    ComponentSplit {
        #[serde(default = "d_three")]
        max_component_elements: usize,
        #[serde(default = "d_six")]
        max_elements: usize,
        #[serde(default)]
        lo: i64,
        #[serde(default = "d_width3")]
        width: i64,
    },
    /// Smith normal form on seeded random matrices.
    #[serde(rename = "snf")]
    Snf {
        #[serde(default = "d_count")]
        count: usize,
        #[serde(default = "d_four_plus_two")]
        max_dim: usize,
        #[serde(default = "d_entry_bound")]
        entry_bound: i64,
    },
}

fn d_four_plus_two() -> usize {
    6
}

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x7357_5eed;

pub const SUITE_NAMES: [&str; 6] = ["lemma31", "prop32", "prop53", "cor512", "component-split", "snf"];

impl SuiteParams {
    pub fn name(&self) -> &'static str {
        match self {
            SuiteParams::Lemma31 { .. } => "lemma31",
            SuiteParams::Prop32 { .. } => "prop32",
            SuiteParams::Prop53 { .. } => "prop53",
            SuiteParams::Cor512 { .. } => "cor512",
            SuiteParams::ComponentSplit { .. } => "component-split",
            SuiteParams::Snf { .. } => "snf",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub cases: Vec<CaseReport>,
}

impl SuiteReport {
    fn new(suite: &str, cases: Vec<CaseReport>) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            passed: cases.iter().all(|c| c.passed),
            cases,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {} :: {} ({} checked)\n", self.suite, c.name, c.checked));
            if let Some(ce) = &c.counterexample {
                for line in ce.lines() {
                    out.push_str(&format!("    {line}\n"));
                }
            }
        }
        let overall = if self.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{overall} {} ({} cases)\n", self.suite, self.cases.len()));
        out
    }
}

/// Tallies one case, keeping the first counterexample.
struct Case {
    name: String,
    checked: u64,
    counterexample: Option<String>,
}

impl Case {
    fn new(name: impl Into<String>) -> Self {
        Case {
            name: name.into(),
            checked: 0,
            counterexample: None,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    fn finish(self) -> CaseReport {
        CaseReport {
            name: self.name,
            passed: self.counterexample.is_none(),
            checked: self.checked,
            counterexample: self.counterexample,
        }
    }
}

pub fn run_suite(params: &SuiteParams, seed: u64, limits: &Limits) -> Result<SuiteReport> {
    let cases = match params {
        SuiteParams::Lemma31 {
            ring,
            degrees,
            module_bound,
            torsion_bound,
        } => lemma31_suite(&ring.build()?, degrees, *module_bound, *torsion_bound, limits)?,
        SuiteParams::Prop32 {
            ring,
            window,
            m,
            module_bound,
            k_max,
        } => prop32_suite(&ring.build()?, *window, m, *module_bound, *k_max, limits)?,
        SuiteParams::Prop53 {
            poset,
            max_elements,
            lo,
            width,
        } => connected_sweep(poset.as_ref(), *max_elements, *lo, *width, limits, Equivalence::StepToEmpty)?,
        SuiteParams::Cor512 {
            poset,
            max_elements,
            lo,
            width,
        } => connected_sweep(poset.as_ref(), *max_elements, *lo, *width, limits, Equivalence::CanonicalShift)?,
        SuiteParams::ComponentSplit {
            max_component_elements,
            max_elements,
            lo,
            width,
        } => component_split_suite(*max_component_elements, *max_elements, *lo, *width, limits)?,
        SuiteParams::Snf {
            count,
            max_dim,
            entry_bound,
        } => vec![snf_suite(*count, *max_dim, *entry_bound, seed)],
    };
    Ok(SuiteReport::new(params.name(), cases))
}

fn base_primes(ring: &RingSpec) -> Result<(Base, Vec<u64>)> {
    let base = Base::of_ring(ring)
        .ok_or_else(|| Error::Precondition(format!("module suites need Z/n or marked Z, not {}", ring.name())))?;
    let spec = ring.spectrum();
    let primes = spec
        .labels()
        .iter()
        .filter(|l| l.as_str() != GENERIC_POINT)
        .map(|l| {
            l.as_str()
                .trim_start_matches('(')
                .trim_end_matches(')')
                .parse::<u64>()
                .map_err(|_| Error::Input(format!("unexpected prime label {l}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((base, primes))
}

/// Torsion catalog, plus `M ⊕ ℤ` over `ℤ`.
fn test_modules(base: Base, primes: &[u64], bound: u64) -> Result<Vec<FgModule>> {
    let mut out = module_catalog(base, primes, u128::from(bound))?;
    if base == Base::Integers {
        let z = FgModule::free(base, 1);
        let with_free = out.iter().map(|m| m.direct_sum(&z)).collect::<Result<Vec<_>>>()?;
        out.extend(with_free);
    }
    Ok(out)
}

fn lemma31_suite(
    ring: &RingSpec,
    degrees: &[u32],
    module_bound: u64,
    torsion_bound: u64,
    limits: &Limits,
) -> Result<Vec<CaseReport>> {
    let (base, primes) = base_primes(ring)?;
    let spec = Arc::new(ring.spectrum());
    let modules = test_modules(base, &primes, module_bound)?;
    let mut cases = Vec::new();
    for z in spec.enumerate_sp_subsets(limits)? {
        let z = SpSubset::new(Arc::clone(&spec), z)?;
        if z.contains(GENERIC_POINT) {
            continue;
        }
        for &i in degrees {
            let mut case = Case::new(format!("Z = {z}, i = {i}"));
            for m in &modules {
                let out = verify_lemma31(ring, &z, i, m, u128::from(torsion_bound))?;
                case.check(out.holds, || {
                    format!(
                        "M = {m}: Ext^{i}(T, M) = 0 on T_Z is {}, Ext^{i}(R/p, M) = 0 on Z is {}; witness {}",
                        out.torsion_side,
                        out.prime_side,
                        out.counterexample.as_ref().map_or("-".into(), ToString::to_string)
                    )
                });
            }
            cases.push(case.finish());
        }
    }
    Ok(cases)
}

fn prop32_suite(
    ring: &RingSpec,
    window: WindowDoc,
    ms: &[i64],
    module_bound: u64,
    k_max: u32,
    limits: &Limits,
) -> Result<Vec<CaseReport>> {
    let (base, primes) = base_primes(ring)?;
    let spec = Arc::new(ring.spectrum());
    let modules = test_modules(base, &primes, module_bound)?;
    let mut reduction = Case::new(format!("k <= 3 decides all k <= {k_max}"));
    let mut tf0 = Case::new("TF_0 = T_0 when phi(0) != {} = phi(1)");
    let mut tf_minus = Case::new("TF_-1 = T_-1 meet F_0 when phi(0) != {} = phi(1)");
    for phi in enumerate_filtrations(&spec, window.lo, window.hi, limits)? {
        let example_shape = !phi.set_at(0).is_empty() && phi.set_at(1).is_empty();
        for y in &modules {
            let supp = y.support(&spec)?.set();
            for &m in ms {
                if !supp.is_subset(phi.set_at(m)) {
                    continue;
                }
                let short = tf_membership(y, m, &phi)?.verdict;
                let long = tf_membership_up_to(y, m, &phi, k_max)?.verdict;
                reduction.check(short == long, || format!("Y = {y}, m = {m}, phi: {phi}: k<=3 gives {short}, k<={k_max} gives {long}"));
            }
            if example_shape {
                if supp.is_subset(phi.set_at(0)) {
                    let v = tf_membership(y, 0, &phi)?.verdict;
                    tf0.check(v, || format!("Y = {y} in T_0 but not in TF_0 for phi: {phi}"));
                }
                if supp.is_subset(phi.set_at(-1)) {
                    let v = tf_membership(y, -1, &phi)?.verdict;
                    // F_0: no associated prime in φ(0)
                    let ass = y.associated_primes(&spec)?;
                    let in_f0 = ass.iter().all(|p| !phi.value_at(0).contains(p.as_str()));
                    tf_minus.check(v == in_f0, || {
                        format!("Y = {y}, phi: {phi}: TF_-1 membership {v}, F_0 membership {in_f0}")
                    });
                }
            }
        }
    }
    Ok(vec![reduction.finish(), tf0.finish(), tf_minus.finish()])
}

/// `Some(description)` if the localized filtration at some finite-level
/// prime outside `Z` is not two-step at that level.
pub fn localization_violation(phi: &SpFiltration) -> Result<Option<String>> {
    let poset = phi.poset();
    for p in 0..poset.len() {
        let Level::Finite(level) = phi.level_of(p) else { continue };
        let label = poset.label(p);
        let local = phi.localize(label.as_str())?;
        let ok = local.steps() == [(level, local.poset().full())];
        if !ok {
            return Ok(Some(format!("phi localized at {label} is {local}, expected two-step at {level}")));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy)]
enum Equivalence {
    StepToEmpty,
    CanonicalShift,
}

fn sweep_posets(poset: Option<&PosetDoc>, max_elements: usize) -> Result<Vec<PrimePoset>> {
    match poset {
        Some(doc) => {
            let p = doc.build()?;
            if !p.is_connected() {
                return input("this suite needs a connected poset");
            }
            Ok(vec![p])
        }
        None => {
            if max_elements > 6 {
                return Err(Error::Resource(format!(
                    "posets are generated up to isomorphism only up to 6 elements (asked {max_elements})"
                )));
            }
            let mut all = Vec::new();
            for n in 1..=max_elements {
                all.extend(connected_posets_up_to_iso(n)?);
            }
            Ok(all)
        }
    }
}

fn connected_sweep(
    poset: Option<&PosetDoc>,
    max_elements: usize,
    lo: i64,
    width: i64,
    limits: &Limits,
    kind: Equivalence,
) -> Result<Vec<CaseReport>> {
    let mut cases = Vec::new();
    for p in sweep_posets(poset, max_elements)? {
        let p = Arc::new(p);
        let ring = RingSpec::abstract_poset(Arc::clone(&p), vec![], false)?;
        let mut case = Case::new(format!("poset {}", describe_poset(&p)));
        for phi in enumerate_filtrations(&p, lo, lo + width, limits)? {
            if phi.is_constant() || !phi.tail_set().is_empty() {
                continue;
            }
            let c = module_verdict(&ring, &phi)?;
            let is_module = c.verdict == Verdict::ModuleCategory;
            let expected = match kind {
                Equivalence::StepToEmpty => {
                    (lo - 1..=lo + width).any(|m| phi.set_at(m) == p.full() && phi.set_at(m + 1).is_empty())
                }
                Equivalence::CanonicalShift => phi.classify_shape().canonical_shift.is_some(),
            };
            case.check(is_module == expected, || {
                format!("phi: {phi}: verdict {}, expected module = {expected}", c.verdict)
            });
            if let Equivalence::CanonicalShift = kind {
                if let Some(f) = left_nondegenerate_fastpath(&phi) {
                    case.check(f.verdict == c.verdict, || {
                        format!("phi: {phi}: fast path says {}, full procedure {}", f.verdict, c.verdict)
                    });
                }
            }
            if is_module {
                let v = localization_violation(&phi)?;
                case.check(v.is_none(), || format!("phi: {phi}: {}", v.clone().unwrap_or_default()));
            }
        }
        cases.push(case.finish());
    }
    Ok(cases)
}

fn describe_poset(p: &PrimePoset) -> String {
    let covers: Vec<String> = p.covers().iter().map(|(a, b)| format!("{a}<{b}")).collect();
    if covers.is_empty() {
        p.format_set(p.full())
    } else {
        format!("{} with {}", p.format_set(p.full()), covers.join(", "))
    }
}

/// Multisets (non-increasing index lists) of connected types, at least two
/// parts, total size at most `max_elements`.
fn disjoint_unions(max_component_elements: usize, max_elements: usize) -> Result<Vec<PrimePoset>> {
    let mut types = Vec::new();
    for n in 1..=max_component_elements {
        types.extend(connected_posets_up_to_iso(n)?);
    }
    fn go(types: &[PrimePoset], start: usize, room: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() >= 2 {
            out.push(cur.clone());
        }
        for t in start..types.len() {
            if types[t].len() <= room {
                cur.push(t);
                go(types, t, room - types[t].len(), cur, out);
                cur.pop();
            }
        }
    }
    let mut combos = Vec::new();
    go(&types, 0, max_elements, &mut Vec::new(), &mut combos);
    combos
        .into_iter()
        .map(|c| PrimePoset::disjoint_union(&c.iter().map(|&t| types[t].clone()).collect::<Vec<_>>()))
        .collect()
}

fn combine(verdicts: &[Verdict]) -> Option<Verdict> {
    let live: Vec<Verdict> = verdicts
        .iter()
        .copied()
        .filter(|v| !matches!(v, Verdict::Degenerate | Verdict::ZeroAisle))
        .collect();
    if live.is_empty() {
        None
    } else if live.contains(&Verdict::NotModule) {
        Some(Verdict::NotModule)
    } else if live.contains(&Verdict::Conditional) {
        Some(Verdict::Conditional)
    } else {
        Some(Verdict::ModuleCategory)
    }
}

fn component_split_suite(
    max_component_elements: usize,
    max_elements: usize,
    lo: i64,
    width: i64,
    limits: &Limits,
) -> Result<Vec<CaseReport>> {
    let mut cases = Vec::new();
    for p in disjoint_unions(max_component_elements, max_elements)? {
        let p = Arc::new(p);
        let ring = RingSpec::abstract_poset(Arc::clone(&p), vec![], false)?;
        let components = p.connected_components();
        let mut case = Case::new(format!("poset {}", describe_poset(&p)));
        for phi in enumerate_filtrations(&p, lo, lo + width, limits)? {
            let global = module_verdict(&ring, &phi)?.verdict;
            let mut parts = Vec::new();
            for &k in &components {
                let local = phi.restrict_to_component(k)?;
                let local_ring = RingSpec::abstract_poset(Arc::clone(local.poset()), vec![], false)?;
                parts.push(module_verdict(&local_ring, &local)?.verdict);
            }
            let expected = combine(&parts);
            let ok = match expected {
                None => matches!(global, Verdict::Degenerate | Verdict::ZeroAisle),
                Some(v) => v == global,
            };
            case.check(ok, || format!("phi: {phi}: verdict {global}, components {parts:?}"));
            if global == Verdict::ModuleCategory {
                let v = localization_violation(&phi)?;
                case.check(v.is_none(), || format!("phi: {phi}: {}", v.clone().unwrap_or_default()));
            }
        }
        cases.push(case.finish());
    }
    Ok(cases)
}

/// Checks `D = U·A·V`, `|det U| = |det V| = 1`, diagonal shape and the
/// divisibility chain.
pub fn snf_violation(a: &Matrix) -> Option<String> {
    let s = smith_normal_form(a);
    if s.u.mul(&a.widen()).mul(&s.v) != s.d {
        return Some(format!("U·A·V != D for A = {a}"));
    }
    if !s.u.determinant().abs().is_one() || !s.v.determinant().abs().is_one() {
        return Some(format!("non-unimodular transform for A = {a}"));
    }
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            if i != j && !s.d.entry(i, j).is_zero() {
                return Some(format!("D is not diagonal for A = {a}: {}", s.d));
            }
        }
    }
    let diag = s.diagonal();
    for w in diag.windows(2) {
        let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
        if w[0].is_negative() || !divides {
            return Some(format!("divisibility fails for A = {a}: {}", s.d));
        }
    }
    None
}

pub fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, entry_bound: i64) -> Matrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, i128::from(rng.gen_range(-entry_bound..=entry_bound)));
        }
    }
    m
}

fn snf_suite(count: usize, max_dim: usize, entry_bound: i64, seed: u64) -> CaseReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut case = Case::new(format!("{count} random matrices up to {max_dim}x{max_dim}, seed {seed}"));
    for _ in 0..count {
        let a = random_matrix(&mut rng, max_dim.max(1), entry_bound.max(0));
        let v = snf_violation(&a);
        case.check(v.is_none(), || v.clone().unwrap_or_default());
    }
    case.finish()
}
