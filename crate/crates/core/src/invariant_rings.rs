//! Weyl-invariant Laurent polynomials on the maximal torus, Adams operations, rewriting in
//! fundamental invariants, and presentations of the Frobenius-twisted fixed ring
//! `O((T//W)^{Fr^-1 [q]})`.
//!
//! Rewriting uses the orbit-sum basis: every invariant is a combination of orbit sums `m_lambda`
//! over dominant `lambda`, and a product of generators `prod g_k^{a_k}` has leading dominant
//! term `sum a_k w_k` with coefficient 1, where `w_k` is the leading weight of `g_k`. Repeatedly
//! cancelling the leading dominant term (largest height, then largest exponent vector) strictly
//! lowers that key, which is the termination argument.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};
use crate::finite_field::{eval_laurent, laurent_to_field_poly, FiniteField, Fq};
use crate::lattice::{IntMatrix, Weight};
use crate::laurent::LaurentPolynomial;
use crate::root_datum::{weyl_elements, Family, GroupDatum, WeylElement};

/// Hard cap on rewriting steps; hitting it means the generator set is wrong.
const MAX_REWRITE_STEPS: usize = 2_000_000;

/// Default enumeration budget for point counts.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Sum of `x^mu` over the Weyl orbit of `weight`, each with coefficient 1.
pub fn orbit_sum(datum: &GroupDatum, weight: &[i64]) -> LaurentPolynomial {
    orbit_sum_with(&weyl_elements(datum), datum.torus_rank, weight)
}

fn orbit_sum_with(weyl: &[WeylElement], rank: usize, weight: &[i64]) -> LaurentPolynomial {
    let orbit: BTreeSet<Weight> = weyl.iter().map(|w| w.apply(weight)).collect();
    LaurentPolynomial::from_terms(rank, orbit.into_iter().map(|e| (e, BigInt::from(1))))
}

/// Generators of `Z[X*(T)]^W` as a polynomial ring (Laurent in the central characters).
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantGeneratorSet {
    pub generators: Vec<LaurentPolynomial>,
    pub leading_weights: Vec<Weight>,
    pub invertible_flags: Vec<bool>,
    /// Marks the similitude character of `GSp`.
    pub similitude_flags: Vec<bool>,
    pub symbols: Vec<String>,
    basis_inverse: IntMatrix,
}

impl InvariantGeneratorSet {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Exponents `a` with `lambda = sum_k a_k w_k`.
    fn coordinates(&self, weight: &[i64]) -> Weight {
        self.basis_inverse.apply(weight)
    }
}

/// Fundamental invariants: elementary symmetric functions for `GL_n`/`U_n` (top one invertible),
/// `e_1..e_{n-1}` for `SL_n`, and the orbit sums of `e_1+..+e_k` plus the invertible similitude
/// `nu` for `GSp_2m`.
pub fn fundamental_invariants(datum: &GroupDatum) -> InvariantGeneratorSet {
    let weyl = weyl_elements(datum);
    let weights = datum.fundamental_weights();
    let k = weights.len();
    let family = datum.preset.family;
    let n = datum.preset.n;
    let symbols: Vec<String> = match family {
        Family::GL if n == 1 => vec!["x".into()],
        Family::SL if n == 2 => vec!["c".into()],
        Family::GL | Family::U | Family::SL => (1..=k).map(|i| format!("e{i}")).collect(),
        Family::GSp => (1..k).map(|i| format!("g{i}")).chain(std::iter::once("nu".to_string())).collect(),
    };
    let central = |i: usize| match family {
        Family::GL | Family::U | Family::GSp => i == k - 1,
        Family::SL => false,
    };
    let invertible_flags: Vec<bool> = (0..k).map(central).collect();
    let similitude_flags: Vec<bool> = (0..k).map(|i| family == Family::GSp && i == k - 1).collect();
    let generators = weights.iter().map(|w| orbit_sum_with(&weyl, datum.torus_rank, w)).collect();
    let basis_inverse =
        IntMatrix::from_columns(&weights).unimodular_inverse().expect("fundamental weights form a lattice basis");
    InvariantGeneratorSet {
        generators,
        leading_weights: weights,
        invertible_flags,
        similitude_flags,
        symbols,
        basis_inverse,
    }
}

/// Adams operation on functions: exponent vectors scaled by `q`.
pub fn adams(f: &LaurentPolynomial, q: u64) -> LaurentPolynomial {
    f.adams(q as i64)
}

/// First Weyl element (in enumeration order) that moves `f`, if any.
pub fn moving_element<'a>(weyl: &'a [WeylElement], f: &LaurentPolynomial) -> Option<&'a WeylElement> {
    weyl.iter().find(|w| &f.act(&w.matrix) != f)
}

/// Rewriter with a cache of generator monomials, reused across calls on the same datum.
pub struct Rewriter<'a> {
    datum: &'a GroupDatum,
    gens: &'a InvariantGeneratorSet,
    weyl: Vec<WeylElement>,
    powers: HashMap<(usize, i64), LaurentPolynomial>,
    monomials: HashMap<Weight, LaurentPolynomial>,
    dominant_monomials: HashMap<Weight, LaurentPolynomial>,
}

impl<'a> Rewriter<'a> {
    pub fn new(datum: &'a GroupDatum, gens: &'a InvariantGeneratorSet) -> Self {
        Rewriter {
            datum,
            gens,
            weyl: weyl_elements(datum),
            powers: HashMap::new(),
            monomials: HashMap::new(),
            dominant_monomials: HashMap::new(),
        }
    }

    fn power(&mut self, k: usize, a: i64) -> LaurentPolynomial {
        if let Some(p) = self.powers.get(&(k, a)) {
            return p.clone();
        }
        let g = &self.gens.generators[k];
        let p = match a {
            0 => LaurentPolynomial::one(self.datum.torus_rank),
            1 => g.clone(),
            a if a < 0 => g.monomial_inverse().expect("invertible generators are monomials").pow((-a) as u32),
            a => {
                let prev = self.power(k, a - 1);
                &prev * g
            }
        };
        self.powers.insert((k, a), p.clone());
        p
    }

    /// Expansion of `prod_k g_k^{a_k}`.
    fn monomial(&mut self, a: &[i64]) -> LaurentPolynomial {
        if let Some(p) = self.monomials.get(a) {
            return p.clone();
        }
        // Peel off the last nonzero exponent to reuse smaller cached monomials.
        let p = match a.iter().rposition(|&x| x != 0) {
            None => LaurentPolynomial::one(self.datum.torus_rank),
            Some(k) => {
                let mut rest = a.to_vec();
                rest[k] = 0;
                let head = self.monomial(&rest);
                let pk = self.power(k, a[k]);
                &head * &pk
            }
        };
        self.monomials.insert(a.to_vec(), p.clone());
        p
    }

    fn dominant_part(&self, p: &LaurentPolynomial) -> LaurentPolynomial {
        let terms = p.terms().filter(|(e, _)| self.datum.is_dominant(e)).map(|(e, c)| (e.clone(), c.clone()));
        LaurentPolynomial::from_terms(p.nvars(), terms)
    }

    fn dominant_monomial(&mut self, a: &[i64]) -> LaurentPolynomial {
        if let Some(p) = self.dominant_monomials.get(a) {
            return p.clone();
        }
        let m = self.monomial(a);
        let p = self.dominant_part(&m);
        self.dominant_monomials.insert(a.to_vec(), p.clone());
        p
    }

    /// Expresses a Weyl-invariant `f` as a polynomial in the generators. An invariant is
    /// determined by its dominant terms, so only those are tracked during elimination.
    pub fn rewrite(&mut self, f: &LaurentPolynomial) -> Result<LaurentPolynomial> {
        if let Some(w) = moving_element(&self.weyl, f) {
            return Err(AtlasError::NotInvariant { word: w.word.clone() });
        }
        let k = self.gens.len();
        let mut rest = self.dominant_part(f);
        let mut out = LaurentPolynomial::zero(k);
        let mut last_key: Option<(i64, Weight)> = None;
        for _ in 0..MAX_REWRITE_STEPS {
            let lead =
                rest.terms().map(|(e, c)| ((self.datum.height(e), e.clone()), c.clone())).max_by(|a, b| a.0.cmp(&b.0));
            let Some((key, c)) = lead else {
                if rest.is_zero() {
                    return Ok(out);
                }
                return Err(AtlasError::RewriteDiverged("invariant remainder has no dominant term".into()));
            };
            if let Some(prev) = &last_key {
                if key >= *prev {
                    return Err(AtlasError::RewriteDiverged(format!(
                        "leading weight {:?} did not decrease below {:?}",
                        key.1, prev.1
                    )));
                }
            }
            let a = self.gens.coordinates(&key.1);
            if a.iter().zip(&self.gens.invertible_flags).any(|(&x, &inv)| x < 0 && !inv) {
                return Err(AtlasError::RewriteDiverged(format!(
                    "dominant weight {:?} needs a negative power of a non-invertible generator",
                    key.1
                )));
            }
            let m = self.dominant_monomial(&a);
            rest.sub_scaled(&m, &c);
            out.add_term(a, c);
            last_key = Some(key);
        }
        Err(AtlasError::RewriteDiverged(format!("exceeded {MAX_REWRITE_STEPS} steps")))
    }
}

/// One-shot rewriting of a Weyl-invariant `f` in the generators `gens`.
pub fn rewrite_in_generators(
    datum: &GroupDatum,
    gens: &InvariantGeneratorSet,
    f: &LaurentPolynomial,
) -> Result<LaurentPolynomial> {
    Rewriter::new(datum, gens).rewrite(f)
}

/// Expands a polynomial in the generator symbols back to a Laurent polynomial on the torus.
pub fn expand_in_torus(gens: &InvariantGeneratorSet, p: &LaurentPolynomial) -> LaurentPolynomial {
    p.substitute(&gens.generators).expect("negative powers only on monomial generators")
}

/// Generators, invertibility, and relations presenting `O(B_G)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingPresentation {
    pub group: String,
    pub q: u64,
    pub generator_symbols: Vec<String>,
    pub invertible_flags: Vec<bool>,
    #[serde(skip)]
    pub relations: Vec<LaurentPolynomial>,
}

impl RingPresentation {
    pub fn ngens(&self) -> usize {
        self.generator_symbols.len()
    }

    /// Relations in canonical order: ascending total degree, then by printed form.
    pub fn sorted_relations(&self) -> Vec<(String, &LaurentPolynomial)> {
        let mut v: Vec<(i64, String, &LaurentPolynomial)> = self
            .relations
            .iter()
            .map(|r| (r.max_total_degree().unwrap_or(0), r.format_with(&self.generator_symbols), r))
            .collect();
        v.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        v.into_iter().map(|(_, s, r)| (s, r)).collect()
    }

    pub fn relation_strings(&self) -> Vec<String> {
        self.sorted_relations().into_iter().map(|(s, _)| s).collect()
    }

    pub fn invertible_symbols(&self) -> Vec<&str> {
        self.generator_symbols.iter().zip(&self.invertible_flags).filter(|(_, &f)| f).map(|(s, _)| s.as_str()).collect()
    }
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring: B_G({}, q={})", self.group, self.q)?;
        writeln!(f, "generators: {}", self.generator_symbols.join(", "))?;
        let inv = self.invertible_symbols();
        writeln!(f, "invertible: {}", if inv.is_empty() { "none".to_string() } else { inv.join(", ") })?;
        for r in self.relation_strings() {
            writeln!(f, "relation: {r}")?;
        }
        Ok(())
    }
}

/// Presentation of `O((T//W)^{Fr^-1 [q]})`: for each generator `g`, the relation
/// `rewrite(adams(Fr* g, q)) - g`. The similitude relation `nu^q - nu` is divided by the unit
/// `nu`, giving `nu^{q-1} - 1`.
pub fn bg_presentation(datum: &GroupDatum, q: u64) -> Result<RingPresentation> {
    if q < 2 {
        return Err(AtlasError::InvalidContext(format!("q = {q} must be at least 2")));
    }
    let gens = fundamental_invariants(datum);
    let mut rewriter = Rewriter::new(datum, &gens);
    let k = gens.len();
    let mut relations = Vec::with_capacity(k);
    for (i, g) in gens.generators.iter().enumerate() {
        let twisted = adams(&g.act(&datum.frobenius_dual), q);
        let p = rewriter.rewrite(&twisted)?;
        let mut rel = &p - &LaurentPolynomial::variable(k, i);
        if gens.similitude_flags[i] {
            let mut shift = vec![0; k];
            shift[i] = -1;
            rel = &rel * &LaurentPolynomial::monomial(shift, 1);
        }
        relations.push(rel);
    }
    Ok(RingPresentation {
        group: datum.preset.to_string(),
        q,
        generator_symbols: gens.symbols.clone(),
        invertible_flags: gens.invertible_flags.clone(),
        relations,
    })
}

/// Outcome of enumerating the solutions of a presentation over a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCount {
    pub field_size: u64,
    pub points: u64,
    /// For single-generator presentations: degree of `gcd(relation, relation')` over `F_l`.
    pub repeated_factor_degree: Option<usize>,
}

/// Counts points of `Spec O(B_G)` over `F_{ell^k}`; invertible generators range over nonzero
/// values.
pub fn count_points(pres: &RingPresentation, ell: u64, k: u32, budget: u128) -> Result<PointCount> {
    let field = FiniteField::new(ell, k)?;
    count_points_in(pres, &field, budget)
}

pub fn count_points_in(pres: &RingPresentation, field: &FiniteField, budget: u128) -> Result<PointCount> {
    let n = pres.ngens();
    let size = field.size() as u128;
    let required = size.checked_pow(n as u32).unwrap_or(u128::MAX);
    if required > budget {
        return Err(AtlasError::BudgetExceeded { required, budget });
    }
    let ranges: Vec<Vec<Fq>> = pres
        .invertible_flags
        .iter()
        .map(|&inv| if inv { field.nonzero_elements().collect() } else { field.elements().collect() })
        .collect();
    let mut idx = vec![0usize; n];
    let mut points = 0u64;
    let mut point: Vec<Fq> = ranges.iter().map(|r| r[0]).collect();
    'outer: loop {
        if pres.relations.iter().all(|r| eval_laurent(r, field, &point) == Some(0)) {
            points += 1;
        }
        for i in 0..n {
            idx[i] += 1;
            if idx[i] < ranges[i].len() {
                point[i] = ranges[i][idx[i]];
                continue 'outer;
            }
            idx[i] = 0;
            point[i] = ranges[i][0];
        }
        break;
    }
    let repeated_factor_degree = (n == 1 && pres.relations.len() == 1).then(|| {
        let prime = FiniteField::prime(field.characteristic() as u64).expect("prime field");
        let p = laurent_to_field_poly(&pres.relations[0], &prime);
        p.gcd(&p.derivative(&prime), &prime).degree().unwrap_or(0)
    });
    Ok(PointCount { field_size: field.size() as u64, points, repeated_factor_degree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::build_group;

    fn parse_univariate(terms: &[(i64, i64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(1, terms.iter().map(|&(e, c)| (vec![e], BigInt::from(c))))
    }

    #[test]
    fn orbit_sums_of_small_weights() {
        let sl2 = build_group("SL", 2).unwrap();
        assert_eq!(orbit_sum(&sl2, &[1]), parse_univariate(&[(1, 1), (-1, 1)]));
        let gl2 = build_group("GL", 2).unwrap();
        let s = orbit_sum(&gl2, &[1, 0]);
        assert_eq!(s.len(), 2);
        assert_eq!(s.coeff(&[0, 1]), BigInt::from(1));
        let gsp4 = build_group("GSp", 4).unwrap();
        assert_eq!(orbit_sum(&gsp4, &[1, 0, 0]).len(), 4);
    }

    #[test]
    fn fundamental_invariant_shapes() {
        let sl2 = fundamental_invariants(&build_group("SL", 2).unwrap());
        assert_eq!(sl2.symbols, vec!["c"]);
        assert_eq!(sl2.invertible_flags, vec![false]);
        let gl3 = fundamental_invariants(&build_group("GL", 3).unwrap());
        assert_eq!(gl3.invertible_flags, vec![false, false, true]);
        let gsp4 = fundamental_invariants(&build_group("GSp", 4).unwrap());
        assert_eq!(gsp4.symbols, vec!["g1", "g2", "nu"]);
        assert_eq!(gsp4.invertible_flags, vec![false, false, true]);
        assert_eq!(gsp4.generators[1].len(), 4);
    }

    #[test]
    fn rewrite_rejects_non_invariant() {
        let gl2 = build_group("GL", 2).unwrap();
        let gens = fundamental_invariants(&gl2);
        let f = LaurentPolynomial::variable(2, 0);
        let err = rewrite_in_generators(&gl2, &gens, &f).unwrap_err();
        assert_eq!(err, AtlasError::NotInvariant { word: vec![0] });
    }

    #[test]
    fn newton_identities() {
        let gl2 = build_group("GL", 2).unwrap();
        let gens = fundamental_invariants(&gl2);
        let p2 = rewrite_in_generators(&gl2, &gens, &adams(&gens.generators[0], 2)).unwrap();
        assert_eq!(p2.format_with(&gens.symbols), "e1^2 - 2*e2");
        let gl3 = build_group("GL", 3).unwrap();
        let gens = fundamental_invariants(&gl3);
        let p3 = rewrite_in_generators(&gl3, &gens, &adams(&gens.generators[0], 3)).unwrap();
        assert_eq!(p3.format_with(&gens.symbols), "e1^3 - 3*e1*e2 + 3*e3");
    }

    #[test]
    fn sl2_squares() {
        let sl2 = build_group("SL", 2).unwrap();
        let gens = fundamental_invariants(&sl2);
        let f = parse_univariate(&[(2, 1), (-2, 1)]);
        let p = rewrite_in_generators(&sl2, &gens, &f).unwrap();
        assert_eq!(p.format_with(&gens.symbols), "c^2 - 2");
    }

    #[test]
    fn small_presentations() {
        let sl2 = build_group("SL", 2).unwrap();
        assert_eq!(bg_presentation(&sl2, 3).unwrap().relation_strings(), vec!["c^3 - 4*c"]);
        let gl1 = build_group("GL", 1).unwrap();
        let p = bg_presentation(&gl1, 5).unwrap();
        assert_eq!(p.relation_strings(), vec!["x^5 - x"]);
        assert_eq!(p.invertible_flags, vec![true]);
        let gsp4 = build_group("GSp", 4).unwrap();
        let p = bg_presentation(&gsp4, 3).unwrap();
        assert!(p.relation_strings().contains(&"nu^2 - 1".to_string()));
        assert_eq!(p.relations.len(), 3);
    }

    #[test]
    fn counts_on_sl2() {
        let sl2 = build_group("SL", 2).unwrap();
        let pc = count_points(&bg_presentation(&sl2, 3).unwrap(), 5, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(pc.points, 3);
        assert_eq!(pc.repeated_factor_degree, Some(0));
        // c^2 - c - 2 = (c - 2)(c + 1) over F_7.
        let pc = count_points(&bg_presentation(&sl2, 2).unwrap(), 7, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(pc.points, 2);
    }

    #[test]
    fn free_invertible_generator_counts_units() {
        let pres = RingPresentation {
            group: "test".into(),
            q: 2,
            generator_symbols: vec!["t".into()],
            invertible_flags: vec![true],
            relations: vec![],
        };
        for (l, k) in [(5, 1), (3, 2), (2, 3)] {
            let pc = count_points(&pres, l, k, DEFAULT_BUDGET).unwrap();
            assert_eq!(pc.points, l.pow(k) - 1);
        }
    }

    #[test]
    fn count_budget_is_enforced() {
        let gsp4 = build_group("GSp", 4).unwrap();
        let p = bg_presentation(&gsp4, 3).unwrap();
        let err = count_points(&p, 101, 2, DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, AtlasError::BudgetExceeded { .. }));
    }
}
