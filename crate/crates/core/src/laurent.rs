//! Exact multivariate Laurent polynomials with arbitrary-precision integer coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::lattice::{IntMatrix, Weight};

/// Finite sum of monomials `c * x^v`, `v` an integer exponent vector of fixed length.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct LaurentPolynomial {
    nvars: usize,
    terms: BTreeMap<Weight, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero(nvars: usize) -> Self {
        LaurentPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exponent: Weight, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(exponent.len());
        p.add_term(exponent, c.into());
        p
    }

    /// The coordinate `x_i`.
    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (Weight, BigInt)>>(nvars: usize, terms: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponent: &[i64]) -> BigInt {
        self.terms.get(exponent).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exponent: Weight, c: BigInt) {
        assert_eq!(exponent.len(), self.nvars, "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponent) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_scaled(&mut self, other: &LaurentPolynomial, c: &BigInt) {
        for (e, d) in &other.terms {
            self.add_term(e.clone(), d * c);
        }
    }

    /// `self - c * other`, in place.
    pub fn sub_scaled(&mut self, other: &LaurentPolynomial, c: &BigInt) {
        self.add_scaled(other, &-c);
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, d)| (e.clone(), d * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Reindexes every exponent through `f`, summing coefficients that collide.
    pub fn map_exponents(&self, nvars: usize, f: impl Fn(&[i64]) -> Weight) -> Self {
        Self::from_terms(nvars, self.terms.iter().map(|(e, c)| (f(e), c.clone())))
    }

    /// Pullback along a lattice endomorphism: `x^v -> x^{M v}`.
    pub fn act(&self, m: &IntMatrix) -> Self {
        self.map_exponents(m.rows(), |e| m.apply(e))
    }

    /// The Adams operation `x^v -> x^{q v}` (pullback along the q-th power map of the torus).
    pub fn adams(&self, q: i64) -> Self {
        self.map_exponents(self.nvars, |e| e.iter().map(|x| x * q).collect())
    }

    /// Formal partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[i] != 0).map(|(e, c)| {
                let mut e2 = e.clone();
                e2[i] -= 1;
                (e2, c * BigInt::from(e[i]))
            }),
        )
    }

    /// Total degree of the monomial with largest total degree (`None` for zero).
    pub fn max_total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Substitutes a polynomial for each variable. Negative powers are only allowed for
    /// variables whose substituted value is a single monomial with coefficient ±1.
    pub fn substitute(&self, values: &[LaurentPolynomial]) -> Option<LaurentPolynomial> {
        assert_eq!(values.len(), self.nvars);
        let target = values.first().map_or(0, |v| v.nvars);
        let inverses: Vec<Option<LaurentPolynomial>> = values.iter().map(|v| v.monomial_inverse()).collect();
        let mut out = LaurentPolynomial::zero(target);
        let mut cache: BTreeMap<(usize, i64), LaurentPolynomial> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut term = LaurentPolynomial::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if let std::collections::btree_map::Entry::Vacant(e) = cache.entry((i, k)) {
                    let p = if k > 0 { values[i].pow(k as u32) } else { inverses[i].as_ref()?.pow((-k) as u32) };
                    e.insert(p);
                }
                term = &term * &cache[&(i, k)];
            }
            out.add_scaled(&term, &BigInt::one());
        }
        Some(out)
    }

    /// Inverse of a unit monomial `±x^v`.
    pub fn monomial_inverse(&self) -> Option<LaurentPolynomial> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        if !c.abs().is_one() {
            return None;
        }
        Some(LaurentPolynomial::monomial(e.iter().map(|x| -x).collect(), c.clone()))
    }

    /// Monomials sorted in descending degree-lex order (total degree, then exponent vector).
    pub fn sorted_terms(&self) -> Vec<(&Weight, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| degree_lex(b.0, a.0));
        v
    }

    /// Canonical text form, e.g. `c^3 - 4*c` or `e1*e2^-1 + 2`.
    pub fn format_with(&self, symbols: &[String]) -> String {
        assert_eq!(symbols.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = format_monomial(e, symbols);
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => out.push_str(&mag.to_string()),
                (false, true) => out.push_str(&mono),
                (false, false) => {
                    out.push_str(&mag.to_string());
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }
}

/// Ascending degree-lex comparison of exponent vectors.
pub fn degree_lex(a: &[i64], b: &[i64]) -> Ordering {
    let da: i64 = a.iter().sum();
    let db: i64 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

fn format_monomial(e: &[i64], symbols: &[String]) -> String {
    e.iter()
        .zip(symbols)
        .filter(|(&k, _)| k != 0)
        .map(|(&k, s)| if k == 1 { s.clone() } else { format!("{s}^{k}") })
        .collect::<Vec<_>>()
        .join("*")
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigInt::one());
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        out.sub_scaled(rhs, &BigInt::one());
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        self.scale(&-BigInt::one())
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = LaurentPolynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Weight = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> LaurentPolynomial {
        LaurentPolynomial::variable(n, i)
    }

    #[test]
    fn arithmetic_cancels_exactly() {
        let a = &x(1, 0) + &LaurentPolynomial::monomial(vec![-1], 1);
        let sq = &a * &a;
        assert_eq!(sq.coeff(&[0]), BigInt::from(2));
        let diff = &sq - &sq;
        assert!(diff.is_zero());
    }

    #[test]
    fn adams_on_x_plus_inverse() {
        let c = &x(1, 0) + &LaurentPolynomial::monomial(vec![-1], 1);
        let expected = &LaurentPolynomial::monomial(vec![2], 1) + &LaurentPolynomial::monomial(vec![-2], 1);
        assert_eq!(c.adams(2), expected);
        assert_eq!(c.adams(1), c);
    }

    #[test]
    fn canonical_formatting() {
        let syms = vec!["c".to_string()];
        let p = LaurentPolynomial::from_terms(1, [(vec![3], BigInt::from(1)), (vec![1], BigInt::from(-4))]);
        assert_eq!(p.format_with(&syms), "c^3 - 4*c");
        let syms2 = vec!["e1".to_string(), "e2".to_string()];
        let q = LaurentPolynomial::from_terms(
            2,
            [(vec![1, -1], BigInt::from(-1)), (vec![0, 0], BigInt::from(2)), (vec![2, 0], BigInt::from(1))],
        );
        assert_eq!(q.format_with(&syms2), "e1^2 - e1*e2^-1 + 2");
    }

    #[test]
    fn derivative_of_laurent_monomial() {
        let p = LaurentPolynomial::monomial(vec![-2, 3], 5);
        let d = p.derivative(0);
        assert_eq!(d, LaurentPolynomial::monomial(vec![-3, 3], -10));
    }

    #[test]
    fn substitute_expands() {
        // P(c) = c^2 - 2 at c = x + 1/x gives x^2 + x^-2.
        let p = LaurentPolynomial::from_terms(1, [(vec![2], BigInt::from(1)), (vec![0], BigInt::from(-2))]);
        let c = &x(1, 0) + &LaurentPolynomial::monomial(vec![-1], 1);
        let expected = &LaurentPolynomial::monomial(vec![2], 1) + &LaurentPolynomial::monomial(vec![-2], 1);
        assert_eq!(p.substitute(std::slice::from_ref(&c)).unwrap(), expected);
        let inv = LaurentPolynomial::monomial(vec![-1], 1);
        assert!(inv.substitute(&[c]).is_none());
    }
}
