//! Pointwise check of rewritten Adams twists: for a torus point `t`, the rewritten polynomial
//! evaluated at the generator values `g_k(t)` must equal `g(Fr(t)^q)`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::finite_field::{eval_laurent, FiniteField, Fq};
use crate::invariant_rings::{adams, expand_in_torus, fundamental_invariants, InvariantGeneratorSet, Rewriter};
use crate::laurent::LaurentPolynomial;
use crate::root_datum::{Family, GroupDatum};

/// Frobenius on torus points, written directly: `t -> (t_n^-1, ..., t_1^-1)` for `U_n`, the
/// identity otherwise.
pub fn torus_frobenius(datum: &GroupDatum, t: &[Fq], f: &FiniteField) -> Vec<Fq> {
    match datum.preset.family {
        Family::U => t.iter().rev().map(|&x| f.inv(x).expect("torus coordinates are units")).collect(),
        _ => t.to_vec(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalFailure {
    pub generator: String,
    pub point: Vec<String>,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalReport {
    pub group: String,
    pub q: u64,
    pub field_size: u32,
    pub trials: usize,
    pub passed: usize,
    /// Whether expanding each rewritten polynomial reproduces the twisted generator exactly.
    pub round_trip: bool,
    pub first_failure: Option<EvalFailure>,
}

impl EvalReport {
    pub fn pass(&self) -> bool {
        self.round_trip && self.passed == self.trials && self.first_failure.is_none()
    }
}

/// Rewritten twists `rewrite(adams(Fr* g_k, q))` for every generator, with a round-trip flag.
pub struct TwistedRewrites {
    pub gens: InvariantGeneratorSet,
    pub rewritten: Vec<LaurentPolynomial>,
    pub round_trip: bool,
}

pub fn twisted_rewrites(datum: &GroupDatum, q: u64) -> Result<TwistedRewrites> {
    let gens = fundamental_invariants(datum);
    let mut rewriter = Rewriter::new(datum, &gens);
    let mut rewritten = Vec::new();
    let mut round_trip = true;
    for g in &gens.generators {
        let twisted = adams(&g.act(&datum.frobenius_dual), q);
        let p = rewriter.rewrite(&twisted)?;
        round_trip &= expand_in_torus(&gens, &p) == twisted;
        rewritten.push(p);
    }
    Ok(TwistedRewrites { gens, rewritten, round_trip })
}

/// Checks one torus point; returns the first failing generator.
pub fn check_point(datum: &GroupDatum, rw: &TwistedRewrites, q: u64, f: &FiniteField, t: &[Fq]) -> Option<EvalFailure> {
    let values: Vec<Fq> =
        rw.gens.generators.iter().map(|g| eval_laurent(g, f, t).expect("torus point has unit coordinates")).collect();
    let moved: Vec<Fq> = torus_frobenius(datum, t, f).iter().map(|&x| f.pow(x, q as i64).expect("unit")).collect();
    for (k, (g, p)) in rw.gens.generators.iter().zip(&rw.rewritten).enumerate() {
        let expected = eval_laurent(g, f, &moved).expect("unit coordinates");
        let found = eval_laurent(p, f, &values).expect("invertible generators take unit values");
        if expected != found {
            return Some(EvalFailure {
                generator: rw.gens.symbols[k].clone(),
                point: t.iter().map(|&x| f.format(x)).collect(),
                expected: f.format(expected),
                found: f.format(found),
            });
        }
    }
    None
}

/// Runs `trials` random torus points over `f`, seeded.
pub fn eval_identity_trials(
    datum: &GroupDatum,
    q: u64,
    f: &FiniteField,
    trials: usize,
    seed: u64,
) -> Result<EvalReport> {
    let rw = twisted_rewrites(datum, q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut first_failure = None;
    for _ in 0..trials {
        let t = random_torus_point(datum, f, &mut rng);
        match check_point(datum, &rw, q, f, &t) {
            None => passed += 1,
            Some(fail) => {
                first_failure.get_or_insert(fail);
            }
        }
    }
    Ok(EvalReport {
        group: datum.preset.to_string(),
        q,
        field_size: f.size(),
        trials,
        passed,
        round_trip: rw.round_trip,
        first_failure,
    })
}

pub fn random_torus_point(datum: &GroupDatum, f: &FiniteField, rng: &mut ChaCha8Rng) -> Vec<Fq> {
    (0..datum.torus_rank).map(|_| rng.gen_range(1..f.size())).collect()
}

/// Cache of rewrites keyed by preset tag and `q`, for mixed-configuration trial runs.
#[derive(Default)]
pub struct RewriteCache {
    entries: HashMap<(String, u64), TwistedRewrites>,
}

impl RewriteCache {
    pub fn get(&mut self, datum: &GroupDatum, q: u64) -> Result<&TwistedRewrites> {
        let key = (datum.preset.to_string(), q);
        if !self.entries.contains_key(&key) {
            let rw = twisted_rewrites(datum, q)?;
            self.entries.insert(key.clone(), rw);
        }
        Ok(&self.entries[&key])
    }
}
