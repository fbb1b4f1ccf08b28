//! Finite fields GF(p^e) in a polynomial basis.
//!
//! Elements are indexed `0..p^e` by their coefficient vectors: the element
//! `c_0 + c_1 t + ... + c_{e-1} t^{e-1}` has index `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`,
//! so the prime field occupies indices `0..p`. All arithmetic goes through
//! precomputed tables.

use std::fmt;

use crate::error::{Error, Result};

/// Largest field order we build tables for.
pub const MAX_FIELD_ORDER: u32 = 1 << 10;

/// A field element, stored as its index.
pub type Fe = u32;

#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, constant term first, length `e + 1`.
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField").field("p", &self.p).field("e", &self.e).field("modulus", &self.modulus).finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^e` with `p` prime.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p as u32, e))
}

// Polynomials over GF(p) as coefficient vectors, constant term first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    result as u32
}

fn digits(mut index: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(index % p);
        index /= p;
    }
    out
}

/// Whether a monic polynomial (constant term first) is irreducible over GF(p).
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut f = digits(low, p, d);
            f.push(1);
            if poly_rem(poly, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The lexicographically least monic irreducible polynomial of degree `e`,
/// comparing coefficient lists from the constant term up.
pub fn least_irreducible(p: u32, e: u32) -> Vec<u32> {
    let len = e as usize;
    let count = p.pow(e);
    for rank in 0..count {
        // c_0 is the most significant digit of the lexicographic rank.
        let mut coeffs = digits(rank, p, len);
        coeffs.reverse();
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    /// Builds GF(p^e). Without a modulus the least irreducible one is used.
    pub fn new(p: u32, e: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::InvalidModulus("extension degree must be at least 1".into()));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::InvalidModulus(format!("field order {p}^{e} is too large")))?;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected {} coefficients for a degree {e} modulus, got {}",
                        e + 1,
                        m.len()
                    )));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidModulus(format!("coefficients must lie in 0..{p}")));
                }
                if m[e as usize] != 1 {
                    return Err(Error::InvalidModulus("modulus must be monic".into()));
                }
                if !is_irreducible(m, p) {
                    return Err(Error::ReducibleModulus(m.to_vec()));
                }
                m.to_vec()
            }
            None => least_irreducible(p, e),
        };

        let n = q as usize;
        let len = e as usize;
        let coeffs: Vec<Vec<u32>> = (0..q).map(|i| digits(i, p, len)).collect();
        let index_of = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                let sum: Vec<u32> = coeffs[a].iter().zip(&coeffs[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * n + b] = index_of(&sum) as u16;

                let mut prod = vec![0u32; 2 * len - 1];
                for (i, &x) in coeffs[a].iter().enumerate() {
                    for (j, &y) in coeffs[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(&prod, &modulus, p);
                r.resize(len, 0);
                mul[a * n + b] = index_of(&r) as u16;
            }
        }
        let mut neg = vec![0u16; n];
        let mut inv = vec![0u16; n];
        for a in 0..n {
            neg[a] = (0..n).find(|&b| add[a * n + b] == 0).unwrap() as u16;
            if a != 0 {
                inv[a] = (1..n).find(|&b| mul[a * n + b] == 1).ok_or_else(|| {
                    Error::InvalidModulus("element without inverse; modulus is not irreducible".into())
                })? as u16;
            }
        }
        Ok(FiniteField { p, e, q, modulus, add, mul, neg, inv })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        self.add[(a * self.q + b) as usize] as Fe
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        self.mul[(a * self.q + b) as usize] as Fe
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.neg[a as usize] as Fe
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        (a != 0).then(|| self.inv[a as usize] as Fe)
    }

    pub fn pow(&self, a: Fe, mut exp: u64) -> Fe {
        let mut result = 1;
        let mut base = a;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        result
    }

    /// `x^(p^k)`.
    pub fn frobenius(&self, x: Fe, k: u32) -> Fe {
        (0..k).fold(x, |acc, _| self.pow(acc, self.p as u64))
    }

    /// The element `t` (the class of the indeterminate); `None` for prime fields.
    pub fn generator_t(&self) -> Option<Fe> {
        (self.e > 1).then_some(self.p)
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: Fe) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let mut k = 1;
        let mut x = a;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        Some(k)
    }

    /// Least-index generator of the multiplicative group.
    pub fn primitive_element(&self) -> Fe {
        (1..self.q)
            .find(|&a| self.element_order(a) == Some(self.q - 1))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    pub fn is_square(&self, a: Fe) -> bool {
        (0..self.q).any(|y| self.mul(y, y) == a)
    }

    pub fn coefficients(&self, a: Fe) -> Vec<u32> {
        digits(a, self.p, self.e as usize)
    }

    /// Element with the given coefficients (constant term first).
    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<Fe> {
        if coeffs.len() > self.e as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidModulus(format!("{coeffs:?} is not an element of GF({})", self.q)));
        }
        Ok(coeffs.iter().rev().fold(0, |acc, &d| acc * self.p + d))
    }

    /// Integer `k` reduced into the prime field.
    pub fn from_int(&self, k: i64) -> Fe {
        k.rem_euclid(self.p as i64) as Fe
    }

    /// Displays an element as an integer (prime fields) or a polynomial in `t`.
    pub fn format(&self, a: Fe) -> String {
        if self.e == 1 {
            return a.to_string();
        }
        let coeffs = self.coefficients(a);
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}t"),
                _ => format!("{coef}t^{i}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Parses an element written as in [`FiniteField::format`], e.g. `t^2+t+1` or `5`.
    pub fn parse(&self, s: &str) -> Result<Fe> {
        let bad = || Error::InvalidModulus(format!("cannot parse field element `{s}`"));
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let mut acc = 0;
        for term in s.split('+') {
            let (coef, power) = match term.find('t') {
                None => (term.parse::<i64>().map_err(|_| bad())?, 0u32),
                Some(pos) => {
                    let coef = if pos == 0 { 1 } else { term[..pos].parse::<i64>().map_err(|_| bad())? };
                    let rest = &term[pos + 1..];
                    let power = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(bad)?.parse::<u32>().map_err(|_| bad())?
                    };
                    (coef, power)
                }
            };
            let t = if power == 0 { 1 } else { self.generator_t().ok_or_else(bad)? };
            let value = self.mul(self.from_int(coef), self.pow(t, power as u64));
            acc = self.add(acc, value);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> FiniteField {
        FiniteField::new(2, 3, Some(&[1, 1, 0, 1])).unwrap()
    }

    #[test]
    fn gf8_powers_of_t_match_table() {
        let f = gf8();
        let t = f.generator_t().unwrap();
        let expect = ["t", "t^2", "t+1", "t^2+t", "t^2+t+1", "t^2+1", "1"];
        for (k, s) in expect.iter().enumerate() {
            assert_eq!(f.format(f.pow(t, k as u64 + 1)), *s);
        }
        assert_eq!(f.mul(t, f.pow(t, 3)), f.parse("t^2+t").unwrap());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FiniteField::new(7, 1, None).unwrap();
        assert_eq!(f.add(3, 5), 1);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.neg(2), 5);
        assert_eq!(f.inv(3), Some(5));
    }

    #[test]
    fn gf32_multiplicative_group_is_cyclic() {
        let f = FiniteField::new(2, 5, None).unwrap();
        let orders: Vec<u32> = (1..32).map(|a| f.element_order(a).unwrap()).collect();
        assert!(orders.contains(&31));
        assert!(orders.iter().all(|&o| 31 % o == 0));
    }

    #[test]
    fn frobenius_on_gf8() {
        let f = gf8();
        let t = f.generator_t().unwrap();
        assert_eq!(f.frobenius(t, 1), f.pow(t, 2));
        for x in 0..8 {
            assert_eq!(f.frobenius(x, 0), x);
            assert_eq!(f.frobenius(f.frobenius(f.frobenius(x, 1), 1), 1), x);
        }
    }

    #[test]
    fn fixed_field_of_frobenius_is_prime_field() {
        for (p, e) in [(2, 3), (3, 2), (2, 4), (3, 3), (5, 2)] {
            let f = FiniteField::new(p, e, None).unwrap();
            let fixed: Vec<Fe> = (0..f.order()).filter(|&x| f.frobenius(x, 1) == x).collect();
            assert_eq!(fixed, (0..p).collect::<Vec<_>>());
        }
    }

    #[test]
    fn default_modulus_is_lexicographically_least() {
        // Degree 3 over GF(2): t^3+t^2+1 -> (1,0,1,1) precedes t^3+t+1 -> (1,1,0,1).
        assert_eq!(least_irreducible(2, 3), vec![1, 0, 1, 1]);
        assert_eq!(least_irreducible(2, 1), vec![0, 1]);
        assert_eq!(least_irreducible(3, 2), vec![1, 0, 1]);
    }

    #[test]
    fn reducible_modulus_rejected() {
        // t^2 + 1 = (t+1)^2 over GF(2).
        assert!(matches!(FiniteField::new(2, 2, Some(&[1, 0, 1])), Err(Error::ReducibleModulus(_))));
        assert!(matches!(FiniteField::new(4, 1, None), Err(Error::NotPrime(4))));
        assert!(FiniteField::new(2, 2, Some(&[1, 1, 0])).is_err());
    }

    #[test]
    fn field_axioms_exhaustive_small_orders() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (5, 1), (7, 1), (2, 4), (2, 5), (3, 3)] {
            let f = FiniteField::new(p, e, None).unwrap();
            let q = f.order();
            for a in 0..q {
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    // Frobenius is additive.
                    assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
                    if q <= 32 {
                        for c in 0..q {
                            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parse_round_trips() {
        let f = FiniteField::new(3, 2, None).unwrap();
        for a in 0..9 {
            assert_eq!(f.parse(&f.format(a)).unwrap(), a);
        }
    }
}
