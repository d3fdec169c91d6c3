//! Integer and univariate polynomial helpers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Prime factorization `n = ∏ p^a`, primes increasing. `n >= 1`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut a = 0;
            while n % d == 0 {
                n /= d;
                a += 1;
            }
            out.push((d, a));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Exponent of `p` in `n` and the cofactor; `n > 0`.
pub fn split_prime(mut n: u64, p: u64) -> (u32, u64) {
    let mut a = 0;
    while n % p == 0 {
        n /= p;
        a += 1;
    }
    (a, n)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// CRT idempotent of the `p^a` factor of `n`: `e ≡ 1 (mod p^a)`, `e ≡ 0 (mod n/p^a)`.
pub fn crt_idempotent(n: u64, prime_power: u64) -> u64 {
    let rest = n / prime_power;
    if rest == 1 {
        return 1 % n.max(2);
    }
    let inv = mod_inverse(rest % prime_power, prime_power).expect("coprime factors");
    ((rest as u128 * inv as u128) % n as u128) as u64
}

/// Coefficient field of a polynomial ring.
pub trait Field: Clone {
    type Elem: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `a^{-1}`; `a` nonzero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
    fn render(&self, a: &Self::Elem) -> String;
}

/// `𝔽_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField(pub u64);

impl Field for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.0 as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a % self.0) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        mod_inverse(*a, self.0).expect("nonzero element of a prime field")
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// `ℚ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.to_integer().to_string()
        } else if a.is_negative() {
            format!("-{}", -a)
        } else {
            a.to_string()
        }
    }
}

/// Dense univariate polynomial, coefficients low degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_i64(field: F, coeffs: &[i64]) -> Self {
        let c = coeffs.iter().map(|&v| field.from_i64(v)).collect();
        Self::new(field, c)
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = self.field.inv(lead);
                self.scale(&inv)
            }
        }
    }

    fn scale(&self, c: &F::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.field.mul(a, c)).collect();
        Self::new(self.field.clone(), coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = self.field.zero();
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&z);
                let b = other.coeffs.get(i).unwrap_or(&z);
                self.field.add(a, b)
            })
            .collect();
        Self::new(self.field.clone(), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&self.field.neg(&self.field.one())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(self.field.clone(), vec![]);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = self.field.add(&out[i + j], &self.field.mul(a, b));
            }
        }
        Self::new(self.field.clone(), out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(self.field.clone(), self.field.one()), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder; `divisor` nonzero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let f = &self.field;
        let d = divisor.degree().expect("division by zero polynomial");
        let lead_inv = f.inv(&divisor.coeffs[d]);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); self.coeffs.len().saturating_sub(d).max(1)];
        while rem.len() > d && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = f.mul(&rem[k], &lead_inv);
            if !f.is_zero(&c) {
                for (i, b) in divisor.coeffs.iter().enumerate() {
                    let t = f.mul(&c, b);
                    rem[k - d + i] = f.add(&rem[k - d + i], &f.neg(&t));
                }
                quot[k - d] = c;
            }
            rem.pop();
            while rem.last().is_some_and(|x| f.is_zero(x)) {
                rem.pop();
            }
        }
        (Self::new(f.clone(), quot), Self::new(f.clone(), rem))
    }

    /// `(g, s, t)` with `g = s·a + t·b`, `g` monic (or zero).
    pub fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let field = a.field.clone();
        let zero = Self::new(field.clone(), vec![]);
        let one = Self::constant(field.clone(), field.one());
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.coeffs.last() {
            None => (r0, s0, t0),
            Some(lead) => {
                let inv = field.inv(lead);
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// CRT idempotent of the factor `q` of `f`: `≡ 1 (mod q)`, `≡ 0 (mod f/q)`,
    /// reduced mod `f`. `q` and `f/q` must be coprime.
    pub fn crt_idempotent(f: &Self, q: &Self) -> Option<Self> {
        let (rest, r) = f.div_rem(q);
        if !r.is_zero() {
            return None;
        }
        let (g, _, t) = Self::ext_gcd(q, &rest);
        if g.degree() != Some(0) {
            return None;
        }
        // s·q + t·rest = 1, so t·rest ≡ 1 mod q and ≡ 0 mod rest
        Some(t.mul(&rest).div_rem(f).1)
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let one = *c == f.one();
            let coeff = f.render(c);
            let term = match (i, one) {
                (0, _) => coeff,
                (1, true) => "x".into(),
                (1, false) => format!("{coeff}x"),
                (_, true) => format!("x^{i}"),
                (_, false) => format!("{coeff}x^{i}"),
            };
            terms.push(term);
        }
        terms.join("+").replace("+-", "-")
    }
}

/// Irreducibility over `𝔽_p` by trial division with every monic polynomial
/// of degree `<= deg/2`. Returns `None` when that search would be too large.
pub fn is_irreducible_mod_p(poly: &Poly<PrimeField>) -> Option<bool> {
    let field = poly.field;
    let p = field.0;
    let d = poly.degree()?;
    if d == 0 {
        return Some(false);
    }
    if d == 1 {
        return Some(true);
    }
    let half = d / 2;
    let budget = (p as f64).powi(half as i32);
    if budget > 2.0e6 {
        return None;
    }
    for deg in 1..=half {
        let count = p.pow(deg as u32);
        for code in 0..count {
            let mut c = code;
            let mut coeffs: Vec<u64> = (0..deg)
                .map(|_| {
                    let v = c % p;
                    c /= p;
                    v
                })
                .collect();
            coeffs.push(1);
            let divisor = Poly::new(field, coeffs);
            if poly.div_rem(&divisor).1.is_zero() {
                return Some(false);
            }
        }
    }
    Some(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization_round_trips() {
        for n in 1..500u64 {
            let f = factorize(n);
            assert_eq!(f.iter().map(|&(p, a)| p.pow(a)).product::<u64>(), n);
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
    }

    #[test]
    fn crt_idempotents_of_twelve() {
        assert_eq!(crt_idempotent(12, 4), 9);
        assert_eq!(crt_idempotent(12, 3), 4);
        for n in 2..200u64 {
            let es: Vec<u64> = factorize(n)
                .iter()
                .map(|&(p, a)| crt_idempotent(n, p.pow(a)))
                .collect();
            assert_eq!(es.iter().sum::<u64>() % n, 1 % n);
            for (i, &a) in es.iter().enumerate() {
                assert_eq!(a * a % n, a);
                for &b in &es[i + 1..] {
                    assert_eq!(a * b % n, 0);
                }
            }
        }
    }

    #[test]
    fn polynomial_division_and_gcd() {
        let f2 = PrimeField(2);
        let g = Poly::from_i64(f2, &[1, 1, 1]);
        assert_eq!(g.render(), "x^2+x+1");
        assert_eq!(is_irreducible_mod_p(&g), Some(true));
        let sq = Poly::from_i64(f2, &[1, 0, 1]); // (x+1)^2
        assert_eq!(is_irreducible_mod_p(&sq), Some(false));
        let (q, r) = sq.div_rem(&Poly::from_i64(f2, &[1, 1]));
        assert!(r.is_zero());
        assert_eq!(q.render(), "x+1");
        let f = g.mul(&sq);
        let e = Poly::crt_idempotent(&f, &g).unwrap();
        assert!(e.mul(&e).sub(&e).div_rem(&f).1.is_zero());
        assert!(e.sub(&Poly::from_i64(f2, &[1])).div_rem(&g).1.is_zero());
        assert!(e.div_rem(&sq).1.is_zero());
    }

    #[test]
    fn rational_polynomials() {
        let x2m1 = Poly::from_i64(Rationals, &[-1, 0, 1]);
        let xm1 = Poly::from_i64(Rationals, &[-1, 1]);
        let e = Poly::crt_idempotent(&x2m1, &xm1).unwrap();
        assert_eq!(e.render(), "1/2x+1/2");
        assert_eq!(x2m1.render(), "x^2-1");
    }
}
