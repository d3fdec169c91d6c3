//! End-to-end classification: job documents in, reports out, and the fast
//! paths checked against the full decision procedure.

use std::collections::BTreeMap;
use std::sync::Arc;

use tstruct_core::classifier::classify_fastpaths;
use tstruct_core::report::{enumerate_report, run_job, spectrum_report, to_json, ClassifyOptions, JobReport};
use tstruct_core::verify::{run_suite, SuiteParams};
use tstruct_core::{
    enumerate_filtrations, module_verdict, parse_job, Limits, PrimeId, PrimePoset, PrimeSet, RingSpec, SpFiltration, Verdict,
};

fn job(text: &str) -> JobReport {
    run_job(&parse_job(text).unwrap(), ClassifyOptions::default(), &Limits::default()).unwrap()
}

const V_POSET: &str = r#"{"elements": ["p1", "p2", "m"], "covers": [["p1", "m"], ["p2", "m"]],
    "residues": {"p1": "k(p1)", "p2": "k(p2)", "m": "k"}}"#;

#[test]
fn v_poset_with_two_minimal_primes() {
    let r = job(&format!(
        r#"{{"ring": {{"variant": "abstract", "poset": {V_POSET}, "reduced": true}},
            "filtrations": [{{"name": "example", "steps": [{{"upto": -2, "value": ["p1", "p2", "m"]}},
                                                          {{"upto": -1, "value": ["p1", "m"]}}], "tail": ["m"]}}]}}"#
    ));
    let c = &r.classifications[0];
    assert_eq!(c.name.as_deref(), Some("example"));
    assert_eq!(c.verdict, Verdict::ModuleCategory);
    assert!(c.grothendieck);
    assert_eq!(c.z, vec![PrimeId::from("m")]);
    assert_eq!(c.ring_a.as_deref(), Some("k(p2) x k(p1)"));
}

#[test]
fn v_poset_dropping_to_empty_is_not_a_module_category() {
    let r = job(&format!(
        r#"{{"ring": {{"variant": "abstract", "poset": {V_POSET}, "perfect": [["m"]]}},
            "filtrations": [{{"steps": [{{"upto": 0, "value": ["p1", "m"]}}]}}]}}"#
    ));
    let c = &r.classifications[0];
    assert_eq!(c.verdict, Verdict::NotModule);
    assert!(c.grothendieck);
    assert!(c.witness.is_some());
}

#[test]
fn undeclared_perfectness_is_conditional() {
    let r = job(&format!(
        r#"{{"ring": {{"variant": "abstract", "poset": {V_POSET}}},
            "filtrations": [{{"steps": [{{"upto": -2, "value": ["p1", "p2", "m"]}},
                                         {{"upto": -1, "value": ["p1", "m"]}}], "tail": ["m"]}}]}}"#
    ));
    assert!(r.has_conditional());
    assert_eq!(r.classifications[0].verdict, Verdict::Conditional);
}

#[test]
fn canonical_shift_gives_the_ring_itself() {
    for ring in [r#"{"variant": "zmod", "n": 12}"#, r#"{"variant": "dedekind", "base": "Z", "marked": [2, 3]}"#] {
        let r = job(&format!(
            r#"{{"ring": {ring}, "filtrations": [{{"steps": [{{"upto": 3, "value": {all}}}]}}]}}"#,
            all = serde_json::to_string(&labels_of(ring)).unwrap()
        ));
        let c = &r.classifications[0];
        assert_eq!(c.verdict, Verdict::ModuleCategory, "{ring}");
        assert!(c.z.is_empty());
        assert_eq!(c.ring_a.as_deref(), Some(r.ring.as_str()), "{ring}");
    }
}

fn labels_of(ring_doc: &str) -> Vec<String> {
    let ring = parse_job(ring_doc).unwrap().ring.build().unwrap();
    ring.spectrum().labels().iter().map(|l| l.as_str().to_string()).collect()
}

#[test]
fn marked_integers_localize_away_from_the_tail() {
    let r = job(
        r#"{"ring": {"variant": "dedekind", "base": "Z", "marked": [2, 3]},
            "filtrations": [{"steps": [{"upto": 0, "value": ["(0)", "(2)", "(3)"]}], "tail": ["(2)", "(3)"]}]}"#,
    );
    let c = &r.classifications[0];
    assert_eq!(c.verdict, Verdict::ModuleCategory);
    assert_eq!(c.ring_a.as_deref(), Some("Z[1/2, 1/3]"));
}

#[test]
fn dvr_style_chain_with_closed_point_tail() {
    // (0) < (2) in Spec Z marked at 2: φ(0) = Spec, φ(1) = {(2)} forever
    let r = job(
        r#"{"ring": {"variant": "dedekind", "base": "Z", "marked": [2]},
            "filtrations": [{"steps": [{"upto": 0, "value": ["(0)", "(2)"]}], "tail": ["(2)"]}]}"#,
    );
    let c = &r.classifications[0];
    assert_eq!(c.verdict, Verdict::ModuleCategory);
    assert_eq!(c.ring_a.as_deref(), Some("Z[1/2]"));
    // …whereas dropping on to ∅ afterwards breaks the module property
    let r = job(
        r#"{"ring": {"variant": "dedekind", "base": "Z", "marked": [2]},
            "filtrations": [{"steps": [{"upto": 0, "value": ["(0)", "(2)"]}, {"upto": 1, "value": ["(2)"]}]}]}"#,
    );
    assert_eq!(r.classifications[0].verdict, Verdict::NotModule);
}

#[test]
fn constant_filtrations_are_flagged() {
    let r = job(
        r#"{"ring": {"variant": "zmod", "n": 6},
            "filtrations": [{"steps": [], "tail": ["(2)", "(3)"]}, {"steps": [], "tail": []}]}"#,
    );
    assert_eq!(r.classifications[0].verdict, Verdict::Degenerate);
    assert_eq!(r.classifications[1].verdict, Verdict::ZeroAisle);
}

#[test]
fn aisle_and_stalk_checks_in_a_job() {
    let r = job(&format!(
        r#"{{"ring": {{"variant": "abstract", "poset": {V_POSET}, "reduced": true}},
            "filtrations": [{{"steps": [{{"upto": -2, "value": ["p1", "p2", "m"]}},
                                         {{"upto": -1, "value": ["p1", "m"]}}], "tail": ["m"]}}],
            "complexes": [{{"name": "stalk", "entries": [{{"degree": 0, "support": ["p1", "m"]}}]}},
                          {{"name": "low", "entries": [{{"degree": -1, "support": ["p1", "m"]}}]}}]}}"#
    ));
    let aisle = &r.classifications[0].aisle;
    assert!(!aisle[0].member);
    assert_eq!(aisle[0].violations, vec![(0, vec![PrimeId::from("p1")])]);
    assert!(aisle[1].member);

    let r = job(
        r#"{"ring": {"variant": "zmod", "n": 8},
            "filtrations": [{"steps": [{"upto": 0, "value": ["(2)"]}]}],
            "stalks": [{"m": -1, "module": {"base": {"zmod": 8}, "cyclic": [2]}}, {"m": 0, "module": {"base": {"zmod": 8}, "cyclic": [2]}}]}"#,
    );
    let stalks = &r.classifications[0].stalks;
    assert!(!stalks[0].in_heart, "{}", stalks[0].text);
    assert!(stalks[1].in_heart, "{}", stalks[1].text);
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let text = format!(
        r#"{{"ring": {{"variant": "abstract", "poset": {V_POSET}, "reduced": true}},
            "filtrations": [{{"enumerate": {{"lo": 0, "hi": 1}}}}]}}"#
    );
    let a = to_json(&job(&text));
    let b = to_json(&job(&text));
    assert_eq!(a, b);
    let value: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(serde_json::to_string_pretty(&value).unwrap(), a);
    let first = &value["classifications"][0];
    for key in ["verdict", "Z", "pieces", "grothendieck", "reason"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn spectrum_reports() {
    let r = spectrum_report(&RingSpec::zmod(12).unwrap());
    assert_eq!(r.components.len(), 2);
    let idempotents: BTreeMap<String, String> = r
        .components
        .iter()
        .map(|c| (c.primes.iter().map(PrimeId::as_str).collect::<Vec<_>>().join(","), c.idempotent.clone().unwrap()))
        .collect();
    assert_eq!(idempotents["(2)"], "9 mod 12");
    assert_eq!(idempotents["(3)"], "4 mod 12");
    let r = spectrum_report(&RingSpec::dedekind_integers(&[2, 3]).unwrap());
    assert_eq!((r.elements.len(), r.covers.len()), (3, 2));
    assert_eq!(to_json(&r), to_json(&spectrum_report(&RingSpec::dedekind_integers(&[2, 3]).unwrap())));
}

#[test]
fn census_counts() {
    let chain = parse_job(r#"{"variant": "abstract", "poset": {"elements": ["a", "b"], "covers": [["a", "b"]]}}"#)
        .unwrap()
        .ring
        .build()
        .unwrap();
    let r = enumerate_report(&chain, 0, 1, false, ClassifyOptions::default(), &Limits::default()).unwrap();
    assert_eq!(r.total, 6);
    assert_eq!(r.counts.values().sum::<u64>(), 6);
    assert_eq!(r.listing.as_ref().unwrap().len(), 6);
    let summary = enumerate_report(&chain, 0, 1, true, ClassifyOptions::default(), &Limits::default()).unwrap();
    assert_eq!(summary.counts, r.counts);
    assert!(summary.listing.is_none());
    let point = RingSpec::zmod(2).unwrap();
    assert_eq!(enumerate_report(&point, 0, 0, true, ClassifyOptions::default(), &Limits::default()).unwrap().total, 2);
    assert!(enumerate_report(&chain, 0, 40, true, ClassifyOptions::default(), &Limits::default()).is_err());
}

fn sweep_rings() -> Vec<RingSpec> {
    let mut rings = vec![
        RingSpec::zmod(12).unwrap(),
        RingSpec::zmod(30).unwrap(),
        RingSpec::dedekind_integers(&[2]).unwrap(),
        RingSpec::dedekind_integers(&[2, 3]).unwrap(),
        RingSpec::dedekind_integers(&[2, 3, 5]).unwrap(),
        RingSpec::product(vec![RingSpec::zmod(4).unwrap(), RingSpec::dedekind_integers(&[3]).unwrap()]).unwrap(),
    ];
    for n in 1..=3 {
        for p in tstruct_core::poset::connected_posets_up_to_iso(n).unwrap() {
            let p = Arc::new(p);
            let ups = p.enumerate_sp_subsets(&Limits::default()).unwrap();
            rings.push(RingSpec::abstract_poset(Arc::clone(&p), ups.clone(), true).unwrap());
            rings.push(RingSpec::abstract_poset(p, Vec::new(), false).unwrap());
        }
    }
    rings
}

#[test]
fn fast_paths_agree_with_the_full_procedure() {
    let mut decided = 0;
    for ring in sweep_rings() {
        let poset = Arc::new(ring.spectrum());
        for phi in enumerate_filtrations(&poset, -1, 1, &Limits::default()).unwrap() {
            let full = module_verdict(&ring, &phi).unwrap();
            let fast = classify_fastpaths(&ring, &phi).unwrap();
            assert_eq!(fast.grothendieck, full.grothendieck);
            if fast.verdict != Verdict::GrothendieckOnly {
                decided += 1;
                assert_eq!(fast.verdict, full.verdict, "{} on {phi}: {}", ring.name(), fast.reason);
            }
        }
    }
    assert!(decided > 0);
}

#[test]
fn verdicts_respect_shifts() {
    for ring in sweep_rings() {
        let poset = Arc::new(ring.spectrum());
        for phi in enumerate_filtrations(&poset, 0, 1, &Limits::default()).unwrap() {
            let a = module_verdict(&ring, &phi).unwrap();
            let b = module_verdict(&ring, &phi.shift(5)).unwrap();
            assert_eq!(a.verdict, b.verdict, "{} on {phi}", ring.name());
            assert_eq!(a.z, b.z);
            assert_eq!(a.ring_a.map(|d| d.render()), b.ring_a.map(|d| d.render()));
        }
    }
}

#[test]
fn every_filtration_on_a_finite_spectrum_is_grothendieck() {
    let v = Arc::new(PrimePoset::new(&["p1", "p2", "m"], &[("p1", "m"), ("p2", "m")], BTreeMap::new()).unwrap());
    let ring = RingSpec::abstract_poset(Arc::clone(&v), Vec::new(), false).unwrap();
    for phi in enumerate_filtrations(&v, -1, 2, &Limits::default()).unwrap() {
        assert!(module_verdict(&ring, &phi).unwrap().grothendieck);
    }
    let phi = SpFiltration::new(Arc::clone(&v), &[(0, v.full()), (1, PrimeSet::EMPTY)]).unwrap();
    assert_eq!(module_verdict(&ring, &phi).unwrap().verdict, Verdict::ModuleCategory);
}

#[test]
fn default_suites_pass() {
    for text in [
        r#"{"suite": "lemma31", "ring": {"variant": "zmod", "n": 8}}"#,
        r#"{"suite": "lemma31", "ring": {"variant": "dedekind", "base": "Z", "marked": [2, 3]}, "degrees": [1], "module_bound": 12}"#,
        r#"{"suite": "prop32", "ring": {"variant": "zmod", "n": 12}}"#,
        r#"{"suite": "prop53"}"#,
        r#"{"suite": "cor512", "poset": {"elements": ["a", "b", "c"], "covers": [["a", "b"], ["b", "c"]]}}"#,
        r#"{"suite": "component-split", "max_elements": 4}"#,
        r#"{"suite": "snf", "count": 50}"#,
    ] {
        let params: SuiteParams = serde_json::from_str(text).unwrap();
        let report = run_suite(&params, 7, &Limits::default()).unwrap();
        assert!(report.passed, "{}", report.render_text());
        assert!(report.cases.iter().all(|c| c.checked > 0), "{}", report.render_text());
    }
}

#[test]
fn malformed_documents_are_input_errors() {
    for text in [
        "{",
        r#"{"variant": "zmod"}"#,
        r#"{"variant": "zmod", "n": 0}"#,
        r#"{"ring": {"variant": "zmod", "n": 4}, "filtrations": [{"steps": [{"upto": 0, "value": ["(5)"]}]}]}"#,
        r#"{"ring": {"variant": "zmod", "n": 4}, "unknown": 1}"#,
    ] {
        let err = parse_job(text).and_then(|j| run_job(&j, ClassifyOptions::default(), &Limits::default()));
        assert!(matches!(err, Err(tstruct_core::Error::Input(_))), "{text}: {err:?}");
    }
}
