//! Small finite fields `F_{l^k}` in a polynomial basis over the prime field, with
//! discrete-log tables for multiplication and inversion.
//!
//! Elements are encoded as integers `0..l^k`: the base-`l` digits are the coefficients of the
//! residue polynomial, lowest degree first. `0` is zero and `1` is one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};
use crate::laurent::LaurentPolynomial;
use crate::root_datum::is_prime;

/// Encoded field element.
pub type Fq = u32;

/// Largest field size accepted.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteField {
    characteristic: u32,
    degree: u32,
    size: u32,
    /// Monic modulus, coefficients lowest degree first (length `degree + 1`).
    modulus: Vec<u32>,
    exp: Vec<Fq>,
    log: Vec<u32>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.characteristic == other.characteristic && self.degree == other.degree && self.modulus == other.modulus
    }
}

impl FiniteField {
    /// The field with `ell^k` elements.
    pub fn new(ell: u64, k: u32) -> Result<FiniteField> {
        if !is_prime(ell) {
            return Err(AtlasError::InvalidField(format!("characteristic {ell} is not prime")));
        }
        if k == 0 {
            return Err(AtlasError::InvalidField("degree must be positive".into()));
        }
        let size = ell.checked_pow(k).filter(|&s| s <= MAX_FIELD_SIZE).ok_or_else(|| {
            AtlasError::InvalidField(format!("{ell}^{k} exceeds the field size budget {MAX_FIELD_SIZE}"))
        })?;
        let p = ell as u32;
        let size = size as u32;
        // Search monic polynomials of degree k for one with x primitive.
        for tail in 0..size {
            let mut modulus = digits(tail, p, k);
            if modulus[0] == 0 && k > 1 {
                continue;
            }
            modulus.push(1);
            if let Some((exp, log)) = primitive_tables(p, k, size, &modulus) {
                return Ok(FiniteField { characteristic: p, degree: k, size, modulus, exp, log });
            }
        }
        Err(AtlasError::InvalidField(format!("no primitive polynomial found for {ell}^{k}")))
    }

    /// Prime field `F_ell`.
    pub fn prime(ell: u64) -> Result<FiniteField> {
        Self::new(ell, 1)
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Fq {
        0
    }

    pub fn one(&self) -> Fq {
        1
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Fq {
        n.rem_euclid(self.characteristic as i64) as Fq
    }

    pub fn from_bigint(&self, n: &BigInt) -> Fq {
        n.mod_floor(&BigInt::from(self.characteristic)).to_u32().expect("residue fits")
    }

    /// A fixed primitive element (the class of `x`, or a primitive root for prime fields).
    pub fn generator(&self) -> Fq {
        self.exp[1 % (self.size as usize - 1).max(1)]
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        0..self.size
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fq> {
        1..self.size
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.degree == 1 {
            return (a + b) % self.characteristic;
        }
        let p = self.characteristic;
        let (mut a, mut b, mut out, mut place) = (a, b, 0u32, 1u32);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: Fq) -> Fq {
        if self.degree == 1 {
            return (self.characteristic - a) % self.characteristic;
        }
        let p = self.characteristic;
        let (mut a, mut out, mut place) = (a, 0u32, 1u32);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.size - 1;
        let s = (self.log[a as usize] + self.log[b as usize]) % n;
        self.exp[s as usize]
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a == 0 {
            return None;
        }
        let n = self.size - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn div(&self, a: Fq, b: Fq) -> Option<Fq> {
        Some(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for any integer `e` (`None` for negative powers of zero).
    pub fn pow(&self, a: Fq, e: i64) -> Option<Fq> {
        if a == 0 {
            return match e.cmp(&0) {
                std::cmp::Ordering::Greater => Some(0),
                std::cmp::Ordering::Equal => Some(1),
                std::cmp::Ordering::Less => None,
            };
        }
        let n = (self.size - 1) as i64;
        let l = (self.log[a as usize] as i64 * e.rem_euclid(n)).rem_euclid(n);
        Some(self.exp[l as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fq) -> u32 {
        let n = self.size - 1;
        n / n.gcd(&self.log[a as usize])
    }

    /// Discrete log base `generator()`.
    pub fn log(&self, a: Fq) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn sqrt_all(&self, a: Fq) -> Vec<Fq> {
        let mut roots: Vec<Fq> = self.elements().filter(|&x| self.mul(x, x) == a).collect();
        roots.sort_unstable();
        roots
    }

    pub fn sum<I: IntoIterator<Item = Fq>>(&self, it: I) -> Fq {
        it.into_iter().fold(0, |acc, x| self.add(acc, x))
    }

    /// Human-readable element: integer residue for prime fields, polynomial in `a` otherwise.
    pub fn format(&self, x: Fq) -> String {
        if self.degree == 1 {
            return x.to_string();
        }
        let d = digits(x, self.characteristic, self.degree);
        let parts: Vec<String> = d
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}*a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}*a^{i}"),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

fn digits(mut x: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn encode(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Powers of `x` modulo `modulus`; returns exp/log tables when `x` has order `size - 1`.
fn primitive_tables(p: u32, k: u32, size: u32, modulus: &[u32]) -> Option<(Vec<Fq>, Vec<u32>)> {
    let n = size - 1;
    if k == 1 {
        // Prime field: search a primitive root directly.
        for g in 1..size {
            let mut exp = Vec::with_capacity(n as usize);
            let mut x = 1u64;
            let mut ok = true;
            for i in 0..n {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x as u32);
                x = x * g as u64 % p as u64;
            }
            if ok && x == 1 {
                return Some(finish_tables(exp, size));
            }
        }
        return None;
    }
    let mut cur = vec![0u32; k as usize];
    cur[0] = 1;
    let mut exp = Vec::with_capacity(n as usize);
    for i in 0..n {
        let code = encode(&cur, p);
        if i > 0 && code == 1 {
            return None;
        }
        exp.push(code);
        // multiply by x and reduce: x^k = -(m_0 + .. + m_{k-1} x^{k-1})
        let top = cur[k as usize - 1];
        for j in (1..k as usize).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for j in 0..k as usize {
                cur[j] = (cur[j] + (p - top) * modulus[j] % p) % p;
            }
        }
    }
    (encode(&cur, p) == 1).then(|| finish_tables(exp, size))
}

fn finish_tables(exp: Vec<Fq>, size: u32) -> (Vec<Fq>, Vec<u32>) {
    let mut log = vec![0u32; size as usize];
    for (i, &e) in exp.iter().enumerate() {
        log[e as usize] = i as u32;
    }
    (exp, log)
}

/// Univariate polynomial over a finite field, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldPoly {
    pub coeffs: Vec<Fq>,
}

impl FieldPoly {
    pub fn new(mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FieldPoly { coeffs }
    }

    pub fn zero() -> Self {
        FieldPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, f: &FiniteField, x: Fq) -> Fq {
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self, f: &FiniteField) -> Self {
        FieldPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.from_int(i as i64), c)).collect())
    }

    pub fn mul(&self, other: &FieldPoly, f: &FiniteField) -> FieldPoly {
        if self.is_zero() || other.is_zero() {
            return FieldPoly::zero();
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        FieldPoly::new(out)
    }

    pub fn rem(&self, divisor: &FieldPoly, f: &FiniteField) -> FieldPoly {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = divisor.coeffs.len() - 1;
        let lead_inv = f.inv(divisor.coeffs[dd]).expect("nonzero leading coefficient");
        while r.len() > dd && !r.is_empty() {
            let top = *r.last().unwrap();
            if top == 0 {
                r.pop();
                continue;
            }
            let c = f.mul(top, lead_inv);
            let shift = r.len() - 1 - dd;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                r[shift + j] = f.sub(r[shift + j], f.mul(c, d));
            }
            r.pop();
        }
        FieldPoly::new(r)
    }

    pub fn monic(&self, f: &FiniteField) -> FieldPoly {
        match self.coeffs.last() {
            None => FieldPoly::zero(),
            Some(&lead) => {
                let inv = f.inv(lead).expect("nonzero");
                FieldPoly::new(self.coeffs.iter().map(|&c| f.mul(c, inv)).collect())
            }
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &FieldPoly, f: &FiniteField) -> FieldPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }
}

/// Reduction of an integer Laurent polynomial modulo the characteristic, evaluated at a point.
/// Returns `None` if a negative power of a zero coordinate is needed.
pub fn eval_laurent(p: &LaurentPolynomial, f: &FiniteField, point: &[Fq]) -> Option<Fq> {
    assert_eq!(point.len(), p.nvars());
    let mut acc = 0;
    for (e, c) in p.terms() {
        let mut term = f.from_bigint(c);
        if term == 0 {
            continue;
        }
        for (&x, &k) in point.iter().zip(e) {
            if k != 0 {
                term = f.mul(term, f.pow(x, k)?);
            }
        }
        acc = f.add(acc, term);
    }
    Some(acc)
}

/// Univariate integer Laurent polynomial as a field polynomial, after clearing the most
/// negative power (so the zero set away from 0 is unchanged).
pub fn laurent_to_field_poly(p: &LaurentPolynomial, f: &FiniteField) -> FieldPoly {
    assert_eq!(p.nvars(), 1);
    let shift = p.terms().map(|(e, _)| e[0]).min().unwrap_or(0).min(0);
    let top = p.terms().map(|(e, _)| e[0]).max().unwrap_or(0);
    let mut coeffs = vec![0; (top - shift + 1).max(0) as usize];
    for (e, c) in p.terms() {
        let i = (e[0] - shift) as usize;
        coeffs[i] = f.add(coeffs[i], f.from_bigint(c));
    }
    FieldPoly::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &FiniteField) {
        let elems: Vec<Fq> = f.elements().collect();
        for &a in &elems {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for &b in elems.iter().step_by(3) {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in elems.iter().step_by(5) {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn small_fields_satisfy_axioms() {
        for (l, k) in [(2, 1), (5, 1), (7, 1), (2, 3), (3, 2), (5, 2), (2, 4)] {
            let f = FiniteField::new(l, k).unwrap();
            assert_eq!(f.size() as u64, l.pow(k));
            check_axioms(&f);
        }
    }

    #[test]
    fn frobenius_is_additive_in_extension() {
        let f = FiniteField::new(3, 3).unwrap();
        for a in f.elements() {
            for b in f.elements().step_by(7) {
                let lhs = f.pow(f.add(a, b), 3).unwrap();
                let rhs = f.add(f.pow(a, 3).unwrap(), f.pow(b, 3).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FiniteField::new(4, 1).is_err());
        assert!(FiniteField::new(2, 17).is_err());
        assert!(FiniteField::new(3, 0).is_err());
    }

    #[test]
    fn poly_gcd_finds_repeated_root() {
        let f = FiniteField::prime(7).unwrap();
        // (x - 2)^2 (x + 1) = x^3 - 3x^2 + 4 over F_7
        let p = FieldPoly::new(vec![4, 0, f.from_int(-3), 1]);
        let g = p.gcd(&p.derivative(&f), &f);
        assert_eq!(g, FieldPoly::new(vec![f.from_int(-2), 1]));
    }

    #[test]
    fn generator_has_full_order() {
        for (l, k) in [(11, 1), (11, 2), (2, 8)] {
            let f = FiniteField::new(l, k).unwrap();
            assert_eq!(f.order(f.generator()), f.size() - 1);
        }
    }
}
