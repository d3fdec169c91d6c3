//! Torsion classes `T_Z` over `ℤ/8` and `ℤ/12` against brute-force subgroup
//! enumeration: closure under submodules, quotients and extensions, and the
//! torsion radical `Γ_Z`.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::has_element_of_order;
use tstruct_core::module::{Base, FgModule};
use tstruct_core::{Limits, RingSpec, SpSubset};

/// `⊕ ℤ/d_j` with elements encoded in mixed radix; at most 64 elements so
/// subgroups fit in a bitmask.
struct Group {
    factors: Vec<u64>,
    order: u64,
}

impl Group {
    fn new(factors: &[u64]) -> Self {
        let order = factors.iter().product();
        assert!(order <= 64);
        Group {
            factors: factors.to_vec(),
            order,
        }
    }

    fn decode(&self, mut x: u64) -> Vec<u64> {
        self.factors
            .iter()
            .map(|&d| {
                let c = x % d;
                x /= d;
                c
            })
            .collect()
    }

    fn encode(&self, coords: &[u64]) -> u64 {
        coords.iter().zip(&self.factors).rev().fold(0, |acc, (&c, &d)| acc * d + c % d)
    }

    fn add(&self, x: u64, y: u64) -> u64 {
        let (a, b) = (self.decode(x), self.decode(y));
        self.encode(&a.iter().zip(&b).map(|(s, t)| s + t).collect::<Vec<_>>())
    }

    fn scale(&self, k: u64, x: u64) -> u64 {
        self.encode(&self.decode(x).iter().map(|c| c * k).collect::<Vec<_>>())
    }

    fn closure(&self, mut set: u64, g: u64) -> u64 {
        set |= 1;
        let mut frontier = vec![g];
        while let Some(x) = frontier.pop() {
            for y in 0..self.order {
                if set >> y & 1 == 1 {
                    let s = self.add(x, y);
                    if set >> s & 1 == 0 {
                        set |= 1 << s;
                        frontier.push(s);
                    }
                }
            }
            if set >> x & 1 == 0 {
                set |= 1 << x;
            }
        }
        set
    }

    fn subgroups(&self) -> BTreeSet<u64> {
        let mut found = BTreeSet::from([1u64]);
        let mut queue = vec![1u64];
        while let Some(s) = queue.pop() {
            for g in 0..self.order {
                let t = self.closure(s, g);
                if found.insert(t) {
                    queue.push(t);
                }
            }
        }
        found
    }

    /// Isomorphism type of a subgroup `S` or of `G/S`, from the counts of
    /// elements killed by `p^k`.
    fn structure(&self, subgroup: u64, quotient: bool) -> Vec<u64> {
        let size = u64::from(subgroup.count_ones());
        let mut orders = Vec::new();
        for p in [2u64, 3] {
            let count = |k: u32| -> u64 {
                let pk = p.pow(k);
                let killed = (0..self.order).filter(|&x| {
                    let y = self.scale(pk, x);
                    if quotient {
                        subgroup >> y & 1 == 1
                    } else {
                        subgroup >> x & 1 == 1 && y == 0
                    }
                });
                let n = killed.count() as u64;
                if quotient {
                    n / size
                } else {
                    n
                }
            };
            let log = |n: u64| -> u32 {
                let mut e = 0;
                let mut m = n;
                while m % p == 0 && m > 1 {
                    m /= p;
                    e += 1;
                }
                e
            };
            // number of cyclic p-factors of exponent >= k is log(c_k) - log(c_{k-1})
            let mut at_least = Vec::new();
            let mut prev = 0;
            for k in 1..=6 {
                let c = log(count(k));
                at_least.push(c - prev);
                prev = c;
            }
            for k in 0..at_least.len() {
                let next = at_least.get(k + 1).copied().unwrap_or(0);
                for _ in 0..at_least[k] - next {
                    orders.push(p.pow(k as u32 + 1));
                }
            }
        }
        orders
    }
}

const ZMOD8: [&[u64]; 6] = [&[2], &[4], &[8], &[2, 2], &[2, 4], &[2, 2, 2]];
const ZMOD12: [&[u64]; 8] = [&[2], &[3], &[4], &[6], &[12], &[2, 6], &[2, 12], &[6, 6]];

fn check_closure(n: u64, modules: &[&[u64]]) {
    let ring = RingSpec::zmod(n).unwrap();
    let spec = Arc::new(ring.spectrum());
    let base = Base::Zmod(n);
    let zs: Vec<SpSubset> = spec
        .enumerate_sp_subsets(&Limits::default())
        .unwrap()
        .into_iter()
        .map(|s| SpSubset::new(Arc::clone(&spec), s).unwrap())
        .collect();
    for factors in modules {
        let g = Group::new(factors);
        let m = FgModule::from_cyclics(base, factors).unwrap();
        let subgroups = g.subgroups();
        for z in &zs {
            let m_in = m.is_torsion_member(z).unwrap();
            for &s in &subgroups {
                let sub = FgModule::from_cyclics(base, &g.structure(s, false)).unwrap();
                let quo = FgModule::from_cyclics(base, &g.structure(s, true)).unwrap();
                assert_eq!(
                    sub.cardinality().unwrap() * quo.cardinality().unwrap(),
                    u128::from(g.order),
                    "orders for {factors:?}"
                );
                let (s_in, q_in) = (sub.is_torsion_member(z).unwrap(), quo.is_torsion_member(z).unwrap());
                if m_in {
                    assert!(s_in && q_in, "T_Z not closed in {m} (Z = {z}): {sub}, {quo}");
                }
                // extensions: 0 → S → M → M/S → 0
                if s_in && q_in {
                    assert!(m_in, "T_Z not closed under the extension {sub} → {m} → {quo} (Z = {z})");
                }
            }
        }
    }
}

#[test]
fn torsion_classes_are_closed_over_zmod8() {
    check_closure(8, &ZMOD8);
}

#[test]
fn torsion_classes_are_closed_over_zmod12() {
    check_closure(12, &ZMOD12);
}

#[test]
fn torsion_radical_against_element_orders() {
    for (n, modules) in [(8u64, &ZMOD8[..]), (12, &ZMOD12[..])] {
        let spec = Arc::new(RingSpec::zmod(n).unwrap().spectrum());
        for z in spec.enumerate_sp_subsets(&Limits::default()).unwrap() {
            let z = SpSubset::new(Arc::clone(&spec), z).unwrap();
            let primes: Vec<u64> = z
                .labels()
                .iter()
                .map(|l| l.as_str().trim_matches(|c| c == '(' || c == ')').parse().unwrap())
                .collect();
            for factors in modules {
                let g = Group::new(factors);
                // Γ_Z(M): elements whose order involves only primes of Z
                let gamma = (0..g.order)
                    .filter(|&x| {
                        let mut k = 1;
                        while g.scale(k, x) != 0 {
                            k += 1;
                        }
                        let mut r = k;
                        for &p in &primes {
                            while r % p == 0 {
                                r /= p;
                            }
                        }
                        r == 1
                    })
                    .count() as u128;
                let m = FgModule::from_cyclics(Base::Zmod(n), factors).unwrap();
                let split = m.torsion_radical(&z).unwrap();
                assert_eq!(split.torsion.cardinality(), Some(gamma), "{m}, Z = {z}");
                assert_eq!(split.quotient.cardinality(), Some(u128::from(g.order) / gamma));
                assert!(split.torsion.is_torsion_member(&z).unwrap());
                for &p in &primes {
                    assert!(!has_element_of_order(split.quotient.decompose(), p), "{m}/Γ_Z has {p}-torsion");
                }
            }
        }
    }
}

#[test]
fn subgroup_structure_sanity() {
    let g = Group::new(&[2, 4]);
    // ℤ/2 ⊕ ℤ/4 has 8 subgroups
    assert_eq!(g.subgroups().len(), 8);
    let all = (1u64 << g.order) - 1;
    assert_eq!(g.structure(all, false), vec![2, 4]);
    assert_eq!(g.structure(all, true), Vec::<u64>::new());
    assert_eq!(g.structure(1, true), vec![2, 4]);
}

#[test]
fn integer_torsion_over_marked_primes() {
    let spec = Arc::new(RingSpec::dedekind_integers(&[2, 3]).unwrap().spectrum());
    let z = SpSubset::from_labels(Arc::clone(&spec), &["(2)"]).unwrap();
    let m = FgModule::from_cyclics(Base::Integers, &[12, 0]).unwrap();
    let split = m.torsion_radical(&z).unwrap();
    assert_eq!(split.torsion.decompose(), &[4]);
    assert_eq!(split.quotient.decompose(), &[3, 0]);
    assert!(FgModule::from_cyclics(Base::Integers, &[4]).unwrap().is_torsion_member(&z).unwrap());
    assert!(!FgModule::free(Base::Integers, 1).is_torsion_member(&z).unwrap());
    assert!(FgModule::zero(Base::Integers).is_torsion_member(&z).unwrap());
}
