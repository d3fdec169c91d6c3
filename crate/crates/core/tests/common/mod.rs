//! Independent oracles for the integration and acceptance tests.
//!
//! Nothing here calls the library's closed forms: Ext groups come from
//! literally computed resolutions, invariant factors from determinantal
//! divisors, associated primes from element orders.

#![allow(dead_code)]

use std::collections::HashMap;

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Generator of a subgroup of `ℤ/n` given as a membership table: the
/// smallest element whose multiples are exactly the subgroup.
fn ideal_generator(n: u64, member: &[bool]) -> u64 {
    let size = member.iter().filter(|&&b| b).count();
    (0..n)
        .filter(|&x| member[x as usize])
        .find(|&x| {
            let mut seen = vec![false; n as usize];
            let mut count = 0;
            for k in 0..n {
                let y = ((k * x) % n) as usize;
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                }
            }
            count == size
        })
        .expect("ideals of Z/n are principal")
}

/// Differentials of a free resolution `⋯ → R →(g_2) R →(g_1) R → ℤ/q → 0`
/// over `R = ℤ/n`, found by computing each kernel element by element.
/// `None` means the resolution has stopped (kernel zero).
pub fn resolution(n: u64, q: u64, length: usize) -> Vec<Option<u64>> {
    assert!(q >= 1 && n % q == 0, "Z/{q} is not a Z/{n}-module");
    let mut out = Vec::with_capacity(length);
    // kernel of R → ℤ/q, 1 ↦ 1
    let mut kernel: Vec<bool> = (0..n).map(|x| x % q == 0).collect();
    for _ in 0..length {
        if kernel.iter().filter(|&&b| b).count() == 1 {
            out.push(None);
            continue;
        }
        let g = ideal_generator(n, &kernel);
        out.push(Some(g));
        kernel = (0..n).map(|y| (y * g) % n == 0).collect();
    }
    out
}

/// `|Ext^i_{ℤ/n}(ℤ/q, ℤ/r)|` from the literal resolution: homology of
/// `Hom(P_•, ℤ/r)`, counted element by element.
pub fn cyclic_ext_order(n: u64, q: u64, r: u64, i: usize) -> u64 {
    assert!(n % r == 0);
    let d = resolution(n, q, i + 1);
    // δ^k : Hom(P_k, N) → Hom(P_{k+1}, N) is multiplication by g_{k+1}
    let cochain_present = |k: usize| k == 0 || d[k - 1].is_some();
    if !cochain_present(i) {
        return 1;
    }
    let ker = match d[i] {
        Some(g) => (0..r).filter(|&y| (y * g) % r == 0).count() as u64,
        None => r,
    };
    let im = if i == 0 {
        1
    } else {
        let g = d[i - 1].expect("present cochain");
        let mut seen = vec![false; r as usize];
        for y in 0..r {
            seen[((y * g) % r) as usize] = true;
        }
        seen.iter().filter(|&&b| b).count() as u64
    };
    ker / im
}

/// `|Ext^i(⊕ ℤ/q_j, ⊕ ℤ/r_k)|` over `ℤ/n` by additivity, memoized.
#[derive(Default)]
pub struct ExtOracle {
    memo: HashMap<(u64, u64, u64, usize), u64>,
}

impl ExtOracle {
    pub fn cyclic(&mut self, n: u64, q: u64, r: u64, i: usize) -> u64 {
        *self.memo.entry((n, q, r, i)).or_insert_with(|| cyclic_ext_order(n, q, r, i))
    }

    pub fn order(&mut self, n: u64, m: &[u64], target: &[u64], i: usize) -> u64 {
        let mut total = 1;
        for &q in m {
            for &r in target {
                total *= self.cyclic(n, q, r, i);
            }
        }
        total
    }
}

/// Multisets (non-increasing) of divisors `d > 1` of `n` whose prime
/// factors lie in `primes`, with product at most `bound`. Several multisets
/// may describe the same module; that only repeats checks.
pub fn divisor_multisets(n: u64, primes: &[u64], bound: u64) -> Vec<Vec<u64>> {
    let allowed = |d: u64| {
        let mut x = d;
        for &p in primes {
            while x % p == 0 {
                x /= p;
            }
        }
        x == 1
    };
    let divisors: Vec<u64> = (2..=n).rev().filter(|d| n % d == 0 && allowed(*d)).collect();
    fn go(divs: &[u64], start: usize, room: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        out.push(cur.clone());
        for k in start..divs.len() {
            if divs[k] <= room {
                cur.push(divs[k]);
                go(divs, k, room / divs[k], cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&divisors, 0, bound, &mut Vec::new(), &mut out);
    out
}

/// Whether `⊕ ℤ/d_j` has an element of order exactly `p`, by enumeration.
pub fn has_element_of_order(factors: &[u64], p: u64) -> bool {
    let total: u64 = factors.iter().product();
    (1..total).any(|mut code| {
        let mut coords = Vec::with_capacity(factors.len());
        for &d in factors {
            coords.push(code % d);
            code /= d;
        }
        coords.iter().zip(factors).all(|(&x, &d)| (x * p) % d == 0)
    })
}

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * det(&minor);
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// `Δ_k`: gcd of all `k × k` minors, `k = 1..=min(rows, cols)`.
pub fn determinantal_divisors(a: &[Vec<i128>]) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    (1..=rows.min(cols))
        .map(|k| {
            let mut g = 0;
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    let minor: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c]).collect()).collect();
                    g = gcd(g, det(&minor));
                    if g == 1 {
                        break;
                    }
                }
                if g == 1 {
                    break;
                }
            }
            g
        })
        .collect()
}

/// Invariant factors from determinantal divisors: `d_k = Δ_k / Δ_{k-1}`
/// (zero once `Δ_k` vanishes).
pub fn invariant_factors_oracle(a: &[Vec<i128>]) -> Vec<i128> {
    let deltas = determinantal_divisors(a);
    let mut prev = 1;
    deltas
        .iter()
        .map(|&d| {
            if d == 0 {
                0
            } else {
                let f = d / prev;
                prev = d;
                f
            }
        })
        .collect()
}

/// Number of isomorphism types of posets (all / connected) on `n` points.
pub const POSET_COUNTS: [usize; 7] = [1, 1, 2, 5, 16, 63, 318];
pub const CONNECTED_POSET_COUNTS: [usize; 7] = [0, 1, 1, 3, 10, 44, 238];
