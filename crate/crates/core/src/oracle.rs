//! Randomised and structural self-checks, shared by the test suite and the
//! command-line `oracle` run.
//!
//! Three independent cross-checks pin the engine's conventions:
//! the projective residue identity (fixed-point sums against `1/w`
//! expansion coefficients), the shear-invariance of the iterated residue,
//! and truncation-budget doubling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::EngineError;
use crate::pipeline::{tautological_integral, IntegrandConfig, IntegrandForm};
use crate::rational::Rational;
use crate::residue::{fixed_point_sum, projective_residue, UniPoly};

/// Outcome of an oracle run. `transcript` is deterministic for a fixed seed.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub total: u32,
    pub failures: u32,
    pub transcript: Vec<String>,
    pub first_counterexample: Option<String>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record_failure(&mut self, line: String) {
        self.failures += 1;
        if self.first_counterexample.is_none() {
            self.first_counterexample = Some(line.clone());
        }
        self.transcript.push(line);
    }
}

fn random_rational(rng: &mut ChaCha8Rng, num_span: i64, den_span: i64) -> Rational {
    let num = rng.gen_range(-num_span..=num_span);
    let den = rng.gen_range(1..=den_span);
    Rational::new(num, den)
}

/// Randomised projective-residue identity: for each trial, a polynomial of
/// degree at most `2n` and `n ≤ 6` distinct rational weights, the fixed-point
/// sum must equal the `w^{-1}` expansion coefficient exactly.
pub fn run_projective_oracle(trials: u32, seed: u64) -> Result<OracleReport, EngineError> {
    if trials < 1 {
        return Err(EngineError::InvalidConfig(
            "oracle needs at least one trial".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = OracleReport {
        total: trials,
        failures: 0,
        transcript: Vec::new(),
        first_counterexample: None,
    };
    for t in 0..trials {
        let n = rng.gen_range(1..=6u32);
        let deg = rng.gen_range(0..=2 * n) as usize;
        let poly = UniPoly::new(
            (0..=deg)
                .map(|_| random_rational(&mut rng, 9, 9))
                .collect(),
        );
        let mut lambdas: Vec<Rational> = Vec::with_capacity(n as usize);
        while lambdas.len() < n as usize {
            let l = random_rational(&mut rng, 12, 4);
            if !lambdas.contains(&l) {
                lambdas.push(l);
            }
        }
        let lhs = fixed_point_sum(&poly, &lambdas)?;
        let rhs = projective_residue(&poly, &lambdas)?;
        if lhs == rhs {
            report
                .transcript
                .push(format!("trial {t}: n={n} deg={deg} ok ({lhs})"));
        } else {
            report.record_failure(format!(
                "trial {t}: n={n} deg={deg} MISMATCH sum={lhs} residue={rhs} \
                 weights={lambdas:?} poly={:?}",
                poly.coeffs
            ));
        }
    }
    Ok(report)
}

/// Shear-invariance: the integral computed in the sheared frame must equal
/// the one computed in the unsheared frame, exactly, for each dimension.
pub fn run_shear_oracle(dims: &[u32], epsilon: &Rational) -> Result<OracleReport, EngineError> {
    let mut report = OracleReport {
        total: dims.len() as u32,
        failures: 0,
        transcript: Vec::new(),
        first_counterexample: None,
    };
    for &n in dims {
        let cfg = IntegrandConfig::new(n, epsilon.clone());
        let sheared = tautological_integral(&cfg)?;
        let unsheared =
            tautological_integral(&cfg.clone().with_form(IntegrandForm::Unsheared))?;
        if sheared == unsheared {
            report.transcript.push(format!("shear n={n}: ok"));
        } else {
            report.record_failure(format!(
                "shear n={n}: MISMATCH sheared={:?} unsheared={:?}",
                sheared.to_coeffpoly(),
                unsheared.to_coeffpoly()
            ));
        }
    }
    Ok(report)
}

/// Budget-doubling: recomputing with twice the truncation budget must
/// reproduce the degree polynomial exactly.
pub fn run_truncation_oracle(dims: &[u32], epsilon: &Rational) -> Result<OracleReport, EngineError> {
    let mut report = OracleReport {
        total: dims.len() as u32,
        failures: 0,
        transcript: Vec::new(),
        first_counterexample: None,
    };
    for &n in dims {
        let cfg = IntegrandConfig::new(n, epsilon.clone());
        let base = tautological_integral(&cfg)?;
        let doubled =
            tautological_integral(&cfg.clone().with_truncation_multiplier(2))?;
        if base == doubled {
            report.transcript.push(format!("truncation n={n}: ok"));
        } else {
            report.record_failure(format!(
                "truncation n={n}: MISMATCH base={:?} doubled={:?}",
                base.to_coeffpoly(),
                doubled.to_coeffpoly()
            ));
        }
    }
    Ok(report)
}
