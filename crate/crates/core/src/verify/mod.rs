//! Randomized conformance suites for the residue laws, with exact
//! cross-checks between independent computation paths.

mod gen;
mod rules;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residue::{lambda_via_residue, residue_of_function, tate_lambda, tate_presentation, DenomTuple};
use crate::ring::{CoeffField, Poly, RingContext};

pub(crate) use gen::{Gen, BASE_NAMES, FIBER_NAMES};

/// Size bounds and seed for random instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    /// Fiber variables, 1 to 3.
    pub n: usize,
    /// Base variables, 0 to 2.
    pub m: usize,
    /// Degree bound, 1 to 4.
    pub degree: u32,
    pub field: CoeffField,
    pub seed: u64,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        InstanceSpec { n: 2, m: 1, degree: 3, field: CoeffField::Rationals, seed: 0 }
    }
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.n) {
            return Err(Error::Usage(format!("fiber dimension {} outside 1..=3", self.n)));
        }
        if self.m > 2 {
            return Err(Error::Usage(format!("base dimension {} outside 0..=2", self.m)));
        }
        if !(1..=4).contains(&self.degree) {
            return Err(Error::Usage(format!("degree bound {} outside 1..=4", self.degree)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    #[serde(rename = "jacobian")]
    Jacobian,
    #[serde(rename = "tate")]
    Tate,
    #[serde(rename = "pairing")]
    Pairing,
    #[serde(rename = "sum")]
    Sum,
    #[serde(rename = "cech")]
    Cech,
}

impl Rule {
    pub const ALL: [Rule; 15] = [
        Rule::R1,
        Rule::R2,
        Rule::R3,
        Rule::R4,
        Rule::R5,
        Rule::R6,
        Rule::R7,
        Rule::R8,
        Rule::R9,
        Rule::R10,
        Rule::Jacobian,
        Rule::Tate,
        Rule::Pairing,
        Rule::Sum,
        Rule::Cech,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
            Rule::R5 => "R5",
            Rule::R6 => "R6",
            Rule::R7 => "R7",
            Rule::R8 => "R8",
            Rule::R9 => "R9",
            Rule::R10 => "R10",
            Rule::Jacobian => "jacobian",
            Rule::Tate => "tate",
            Rule::Pairing => "pairing",
            Rule::Sum => "sum",
            Rule::Cech => "cech",
        }
    }

    fn stream(self) -> u64 {
        Rule::ALL.iter().position(|&r| r == self).expect("listed") as u64
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rule> {
        Rule::ALL
            .iter()
            .copied()
            .find(|r| r.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Usage(format!("unknown rule `{s}`")))
    }
}

/// One failing trial: enough to replay it and both exact sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: u64,
    pub instance: serde_json::Value,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub rule: String,
    pub seed: u64,
    pub attempted: u64,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<u64>,
}

pub(crate) enum Outcome {
    Pass,
    Fail { instance: serde_json::Value, lhs: String, rhs: String },
    Skip,
}

pub(crate) fn compare<T: PartialEq + fmt::Display>(instance: serde_json::Value, lhs: T, rhs: T) -> Outcome {
    if lhs == rhs {
        Outcome::Pass
    } else {
        Outcome::Fail { instance, lhs: lhs.to_string(), rhs: rhs.to_string() }
    }
}

/// Deterministic generator for trial `trial` of `rule`.
pub(crate) fn trial_gen(rule: Rule, spec: &InstanceSpec, trial: u64) -> Gen {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream((rule.stream() << 40) | trial);
    Gen { rng, field: spec.field.clone() }
}

/// Runs one trial standalone; failures replay exactly from `(rule, spec, trial)`.
pub fn replay_trial(rule: Rule, spec: &InstanceSpec, trial: u64) -> Result<Option<Failure>> {
    spec.validate()?;
    let outcome = rules::run_trial(rule, spec, trial);
    Ok(match outcome {
        Outcome::Fail { instance, lhs, rhs } => Some(Failure { trial, instance, lhs, rhs }),
        _ => None,
    })
}

/// Runs `trials` random trials of `rule` (exhaustive rules ignore
/// `trials`), in parallel, aggregating in trial order.
pub fn run_rule(rule: Rule, trials: u64, spec: &InstanceSpec) -> Result<VerifyReport> {
    spec.validate()?;
    let start = Instant::now();
    let count = rules::trial_count(rule, trials, spec);
    let outcomes: Vec<Outcome> = (0..count).into_par_iter().map(|t| rules::run_trial(rule, spec, t)).collect();
    let mut report = VerifyReport {
        rule: rule.name().to_string(),
        seed: spec.seed,
        attempted: count,
        passed: 0,
        failed: 0,
        skipped: 0,
        failures: Vec::new(),
        wall_time_ms: None,
    };
    for (trial, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Pass => report.passed += 1,
            Outcome::Skip => report.skipped += 1,
            Outcome::Fail { instance, lhs, rhs } => {
                report.failed += 1;
                report.failures.push(Failure { trial: trial as u64, instance, lhs, rhs });
            }
        }
    }
    report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

/// Random `f_i = T_i^{d_i} + g_i` tuple per `spec` (relative when `m > 0`),
/// re-certified zero-dimensional.
pub fn gen_zero_dim_ci(spec: &InstanceSpec) -> Result<DenomTuple> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(u64::MAX);
    let mut g = Gen { rng, field: spec.field.clone() };
    let ctx = RingContext::relative(spec.field.clone(), &BASE_NAMES[..spec.m], &FIBER_NAMES[..spec.n])?;
    DenomTuple::new(g.ci(&ctx, 2, spec.degree))
}

/// Three-way check on an absolute instance: for `ω = φ · det(∂f/∂T) dT`,
/// (a) the residue engine, (b) `λ` from the Bezoutian and (c) the trace of
/// `φ` agree, and (a) = (b) also holds for `φ dT` itself.
pub fn cross_oracle_residue(f: &[Poly], phi: &Poly) -> Result<bool> {
    let pres = tate_presentation(f)?;
    let d = pres.denoms();
    let q = d.quotient()?;
    let jac = rules::jacobian(f);
    let g = phi * &jac;
    let a = residue_of_function(&g, d)?.constant_coeff();
    let b = tate_lambda(&pres, &g)?;
    let c = q.canonical_trace(phi).constant_coeff();
    let plain_a = lambda_via_residue(d, phi)?;
    let plain_b = tate_lambda(&pres, phi)?;
    Ok(a == b && b == c && plain_a == plain_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::certify_zero_dimensional;

    #[test]
    fn generated_tuples_are_certified() {
        for seed in 0..10 {
            for (n, m) in [(1, 0), (2, 0), (2, 1), (3, 0)] {
                let spec = InstanceSpec { n, m, degree: 3, field: CoeffField::Rationals, seed };
                let d = gen_zero_dim_ci(&spec).unwrap();
                assert!(certify_zero_dimensional(d.gb()).is_some());
                assert!(d.quotient().is_ok());
            }
        }
        let spec = InstanceSpec { n: 1, m: 0, degree: 2, field: CoeffField::Rationals, seed: 5 };
        let d = gen_zero_dim_ci(&spec).unwrap();
        assert_eq!(d.denoms()[0].degree_in(0), Some(2));
    }

    #[test]
    fn cross_oracle_examples() {
        let c = RingContext::absolute(CoeffField::Rationals, &["T"]).unwrap();
        let t = Poly::var(&c, 0);
        let half = Poly::constant(&c, c.field().from_ratio(&1.into(), &2.into()).unwrap());
        assert!(cross_oracle_residue(&[&t.pow(2) - &Poly::one(&c)], &half).unwrap());
        assert!(cross_oracle_residue(&[t.clone()], &Poly::one(&c)).unwrap());
    }

    #[test]
    fn rule_names_round_trip() {
        for r in Rule::ALL {
            assert_eq!(r.name().parse::<Rule>().unwrap(), r);
        }
        assert!("R11".parse::<Rule>().is_err());
    }

    #[test]
    fn small_runs_pass_and_are_deterministic() {
        let spec = InstanceSpec { n: 2, m: 1, degree: 2, field: CoeffField::Rationals, seed: 3 };
        for rule in Rule::ALL {
            let mut a = run_rule(rule, 3, &spec).unwrap();
            let mut b = run_rule(rule, 3, &spec).unwrap();
            assert_eq!(a.failed, 0, "{rule}: {:?}", a.failures);
            a.wall_time_ms = None;
            b.wall_time_ms = None;
            assert_eq!(a, b);
        }
    }
}
