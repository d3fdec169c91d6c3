//! JSON input documents: posets, rings, filtrations, modules, complexes and
//! whole jobs.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::classifier::{ComplexDescriptor, HomologyEntry};
use crate::error::{input, Error, Result};
use crate::filtration::SpFiltration;
use crate::module::{Base, FgModule};
use crate::poset::{PrimePoset, PrimeSet, SpSubset};
use crate::ring::{FieldSpec, RingSpec};
use crate::verify::SuiteParams;

/// `{ "elements": [...], "covers": [[lower, upper], ...], "residues": {...} }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub residues: BTreeMap<String, String>,
}

impl PosetDoc {
    pub fn build(&self) -> Result<PrimePoset> {
        let residues = self
            .residues
            .iter()
            .map(|(k, v)| (k.as_str().into(), v.clone()))
            .collect();
        PrimePoset::new(&self.elements, &self.covers, residues)
    }

    pub fn from_poset(p: &PrimePoset) -> Self {
        PosetDoc {
            elements: p.labels().iter().map(|l| l.0.clone()).collect(),
            covers: p.covers().into_iter().map(|(a, b)| (a.0, b.0)).collect(),
            residues: p.residues().iter().map(|(k, v)| (k.0.clone(), v.clone())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MarkedDoc {
    /// A rational prime `p`, for the base `Z`.
    Integer(u64),
    /// Coefficients of an irreducible polynomial, low degree first.
    Poly(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDoc {
    pub coeffs: Vec<i64>,
    #[serde(default = "one")]
    pub exp: u32,
}

fn one() -> u32 {
    1
}

/// Ring document, tagged by `"variant"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum RingDoc {
    Zmod {
        n: u64,
    },
    Dedekind {
        /// `"Z"`, `"F_p[x]"` or `"Q[x]"`.
        base: String,
        #[serde(default)]
        marked: Vec<MarkedDoc>,
    },
    PolyQuotient {
        field: String,
        factors: Vec<FactorDoc>,
    },
    Abstract {
        poset: PosetDoc,
        #[serde(default)]
        perfect: Vec<Vec<String>>,
        #[serde(default)]
        reduced: bool,
    },
    Product {
        factors: Vec<RingDoc>,
    },
}

impl RingDoc {
    pub fn build(&self) -> Result<RingSpec> {
        match self {
            RingDoc::Zmod { n } => RingSpec::zmod(*n),
            RingDoc::Dedekind { base, marked } => {
                if base == "Z" {
                    let primes = marked
                        .iter()
                        .map(|m| match m {
                            MarkedDoc::Integer(p) => Ok(*p),
                            MarkedDoc::Poly(_) => input("marked primes of Z are integers"),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    return RingSpec::dedekind_integers(&primes);
                }
                let field: FieldSpec = base
                    .strip_suffix("[x]")
                    .ok_or_else(|| Error::Input(format!("unknown Dedekind base {base:?} (expected Z, F_p[x] or Q[x])")))?
                    .parse()?;
                let polys = marked
                    .iter()
                    .map(|m| match m {
                        MarkedDoc::Poly(c) => Ok(c.clone()),
                        MarkedDoc::Integer(_) => input("marked primes of k[x] are coefficient lists"),
                    })
                    .collect::<Result<Vec<_>>>()?;
                RingSpec::dedekind_poly(field, &polys)
            }
            RingDoc::PolyQuotient { field, factors } => {
                let field: FieldSpec = field.parse()?;
                let f: Vec<(Vec<i64>, u32)> = factors.iter().map(|f| (f.coeffs.clone(), f.exp)).collect();
                RingSpec::poly_quotient(field, &f)
            }
            RingDoc::Abstract {
                poset,
                perfect,
                reduced,
            } => {
                let p = Arc::new(poset.build()?);
                let sets = perfect
                    .iter()
                    .map(|labels| p.set_from_labels(labels))
                    .collect::<Result<Vec<PrimeSet>>>()?;
                RingSpec::abstract_poset(p, sets, *reduced)
            }
            RingDoc::Product { factors } => {
                RingSpec::product(factors.iter().map(RingDoc::build).collect::<Result<Vec<_>>>()?)
            }
        }
    }
}

/// `{ "base": "Z" | {"zmod": n}, "presentation": [[...], ...] }` or
/// `{ "base": ..., "cyclic": [d, ...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub base: Base,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<Vec<u64>>,
}

impl ModuleDoc {
    pub fn build(&self) -> Result<FgModule> {
        match (&self.presentation, &self.cyclic) {
            (Some(rows), None) => FgModule::from_rows(self.base, rows),
            (None, Some(orders)) => FgModule::from_cyclics(self.base, orders),
            _ => input("a module needs exactly one of \"presentation\" and \"cyclic\""),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    /// Inclusive threshold.
    pub upto: i64,
    pub value: Vec<String>,
}

/// `{ "steps": [{"upto": i, "value": [...]}, ...], "tail": [...] }`; the
/// tail (value past the last threshold) defaults to `[]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub steps: Vec<StepDoc>,
    #[serde(default)]
    pub tail: Vec<String>,
}

impl FiltrationDoc {
    pub fn build(&self, poset: &Arc<PrimePoset>) -> Result<SpFiltration> {
        let steps = self
            .steps
            .iter()
            .map(|s| Ok((s.upto, poset.set_from_labels(&s.value)?)))
            .collect::<Result<Vec<_>>>()?;
        let tail = poset.set_from_labels(&self.tail)?;
        SpFiltration::with_tail(Arc::clone(poset), &steps, tail)
    }

    pub fn from_filtration(phi: &SpFiltration) -> Self {
        let poset = phi.poset();
        let names = |s: PrimeSet| poset.labels_of(s).into_iter().map(|l| l.0).collect();
        FiltrationDoc {
            name: None,
            steps: phi
                .steps()
                .iter()
                .map(|&(t, v)| StepDoc {
                    upto: t,
                    value: names(v),
                })
                .collect(),
            tail: names(phi.tail_set()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowDoc {
    pub lo: i64,
    pub hi: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FiltrationEntry {
    /// `{ "enumerate": {"lo": a, "hi": b} }`: every filtration in the window.
    Enumerate { enumerate: WindowDoc },
    Inline(FiltrationDoc),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexEntryDoc {
    pub degree: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub entries: Vec<ComplexEntryDoc>,
}

impl ComplexDoc {
    pub fn build(&self, poset: &Arc<PrimePoset>) -> Result<ComplexDescriptor> {
        let mut x = ComplexDescriptor::new();
        for e in &self.entries {
            let entry = match (&e.module, &e.support) {
                (Some(m), None) => HomologyEntry::Module(m.build()?),
                (None, Some(s)) => HomologyEntry::Support(SpSubset::from_labels(Arc::clone(poset), s)?),
                _ => return input(format!("degree {}: give exactly one of \"module\" and \"support\"", e.degree)),
            };
            x.insert(e.degree, entry)?;
        }
        Ok(x)
    }
}

/// A stalk complex `Y[-m]` to test for membership in each heart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StalkDoc {
    pub m: i64,
    pub module: ModuleDoc,
}

/// A classification job.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobDoc {
    pub ring: RingDoc,
    #[serde(default)]
    pub filtrations: Vec<FiltrationEntry>,
    #[serde(default)]
    pub complexes: Vec<ComplexDoc>,
    #[serde(default)]
    pub stalks: Vec<StalkDoc>,
    #[serde(default)]
    pub verifications: Vec<SuiteParams>,
}

/// A job document, or a bare ring document (treated as a job without
/// filtrations).
pub fn parse_job(text: &str) -> Result<JobDoc> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid JSON: {e}")))?;
    if value.get("variant").is_some() {
        let ring: RingDoc =
            serde_json::from_value(value).map_err(|e| Error::Input(format!("invalid ring document: {e}")))?;
        return Ok(JobDoc {
            ring,
            filtrations: Vec::new(),
            complexes: Vec::new(),
            stalks: Vec::new(),
            verifications: Vec::new(),
        });
    }
    serde_json::from_value(value).map_err(|e| Error::Input(format!("invalid job document: {e}")))
}
