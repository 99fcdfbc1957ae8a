//! Exact normalization verification for autoregressors.
//!
//! A locally normalized machine can still leak mass into dead ends or
//! endless loops, so the verdict has two parts. Boolean semiring: every
//! reachable state offers some continuation and can reach a state that
//! allows end-of-string. Real semiring: every reachable state's row sums
//! to exactly one, every reachable state can reach positive
//! end-of-string weight, and the termination masses
//! `t(s) = a(s)(eos) + Σ_σ a(s)(σ) · t(δ(s, σ))`, solved exactly over the
//! rationals, all equal one. The `t` vector is returned as certificate.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Autoregressor, EncoderMachine, ModelError, StateEncoder};
use crate::semiring::{ExtRat, SemiringKind, SemiringValue};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalizationReport {
    Normalized {
        /// Termination mass per reachable state (real semiring only).
        termination: Option<Vec<(String, BigRational)>>,
    },
    NotNormalized {
        failure: NormalizationFailure,
    },
}

impl NormalizationReport {
    pub fn is_normalized(&self) -> bool {
        matches!(self, NormalizationReport::Normalized { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalizationFailure {
    /// A reachable state's next-symbol weights do not sum to one.
    LocalSum { state: String, sum: String },
    /// A reachable state cannot reach positive end-of-string weight:
    /// a dead end or an endless loop.
    DeadEnd { state: String },
    /// The termination system has no unique solution.
    SingularSystem,
    /// Termination mass strictly below one at a reachable state.
    TerminationDeficit { state: String, mass: String },
}

/// Verifies the suffix-normalization condition for an autoregressor whose
/// encoder has a finite machine form.
pub fn verify_normalization(a: &Autoregressor) -> Result<NormalizationReport, ModelError> {
    let machine = a.encoder().machine()?;
    match a.kind() {
        SemiringKind::Boolean => verify_boolean(a, &machine),
        SemiringKind::Real => verify_real(a, &machine),
    }
}

/// States reachable from the initial one through transitions whose symbol
/// weight is nonzero.
fn reachable_by_nonzero(
    a: &Autoregressor,
    machine: &EncoderMachine,
) -> Result<Vec<usize>, ModelError> {
    let n = machine.dfa.num_states();
    let mut seen = alloc::vec![false; n];
    let mut queue = alloc::vec![machine.dfa.initial()];
    seen[machine.dfa.initial()] = true;
    while let Some(q) = queue.pop() {
        let row = a.row(machine.tokens[q])?;
        for sym in machine.dfa.alphabet().ids() {
            if row[sym].is_zero() {
                continue;
            }
            let dst = machine.dfa.step(q, sym);
            if !seen[dst] {
                seen[dst] = true;
                queue.push(dst);
            }
        }
    }
    Ok((0..n).filter(|&q| seen[q]).collect())
}

/// Within the nonzero-weight transition graph, which of `states` can reach
/// a state whose end-of-string weight is nonzero?
fn can_terminate(
    a: &Autoregressor,
    machine: &EncoderMachine,
    states: &[usize],
) -> Result<Vec<bool>, ModelError> {
    let n = machine.dfa.num_states();
    let eos_index = machine.dfa.alphabet().len();
    let mut good = alloc::vec![false; n];
    let mut frontier = Vec::new();
    for &q in states {
        if !a.row(machine.tokens[q])?[eos_index].is_zero() {
            good[q] = true;
            frontier.push(q);
        }
    }
    // Reverse reachability restricted to nonzero-weight edges.
    let mut preds: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    for &q in states {
        let row = a.row(machine.tokens[q])?;
        for sym in machine.dfa.alphabet().ids() {
            if row[sym].is_zero() {
                continue;
            }
            preds[machine.dfa.step(q, sym)].push(q);
        }
    }
    while let Some(q) = frontier.pop() {
        for &p in &preds[q] {
            if !good[p] {
                good[p] = true;
                frontier.push(p);
            }
        }
    }
    Ok(states.iter().map(|&q| good[q]).collect())
}

fn verify_boolean(
    a: &Autoregressor,
    machine: &EncoderMachine,
) -> Result<NormalizationReport, ModelError> {
    let reachable = reachable_by_nonzero(a, machine)?;
    for &q in &reachable {
        let row = a.row(machine.tokens[q])?;
        if row.iter().all(SemiringValue::is_zero) {
            return Ok(NormalizationReport::NotNormalized {
                failure: NormalizationFailure::LocalSum {
                    state: machine.dfa.state_name(q).to_string(),
                    sum: "false".to_string(),
                },
            });
        }
    }
    let terminating = can_terminate(a, machine, &reachable)?;
    for (&q, &ok) in reachable.iter().zip(&terminating) {
        if !ok {
            return Ok(NormalizationReport::NotNormalized {
                failure: NormalizationFailure::DeadEnd {
                    state: machine.dfa.state_name(q).to_string(),
                },
            });
        }
    }
    Ok(NormalizationReport::Normalized { termination: None })
}

fn finite(v: &SemiringValue) -> Option<BigRational> {
    match v {
        SemiringValue::ExtRat(ExtRat::Finite(r)) => Some(r.clone()),
        _ => None,
    }
}

fn verify_real(
    a: &Autoregressor,
    machine: &EncoderMachine,
) -> Result<NormalizationReport, ModelError> {
    let reachable = reachable_by_nonzero(a, machine)?;
    // Local sums must be exactly one (an infinity can never cancel).
    for &q in &reachable {
        let row = a.row(machine.tokens[q])?;
        let mut sum = SemiringValue::zero(SemiringKind::Real);
        for v in row {
            sum = sum.add(v).expect("same kind");
        }
        if !sum.is_one() {
            return Ok(NormalizationReport::NotNormalized {
                failure: NormalizationFailure::LocalSum {
                    state: machine.dfa.state_name(q).to_string(),
                    sum: alloc::format!("{}", sum),
                },
            });
        }
    }
    let terminating = can_terminate(a, machine, &reachable)?;
    for (&q, &ok) in reachable.iter().zip(&terminating) {
        if !ok {
            return Ok(NormalizationReport::NotNormalized {
                failure: NormalizationFailure::DeadEnd {
                    state: machine.dfa.state_name(q).to_string(),
                },
            });
        }
    }

    // Termination masses: t = eos + M t over the reachable states, where
    // M is the substochastic symbol-step matrix. Every reachable state
    // reaches positive eos weight, so I - M is nonsingular and the unique
    // solution is the true termination mass vector.
    let k = reachable.len();
    let index_of = |q: usize| reachable.iter().position(|&r| r == q).expect("reachable");
    let mut matrix = alloc::vec![alloc::vec![BigRational::zero(); k]; k];
    let mut rhs = alloc::vec![BigRational::zero(); k];
    for (i, &q) in reachable.iter().enumerate() {
        let row = a.row(machine.tokens[q])?;
        matrix[i][i] = BigRational::one();
        for sym in machine.dfa.alphabet().ids() {
            let w = finite(&row[sym]).expect("local sums exclude infinities");
            if w.is_zero() {
                continue;
            }
            let j = index_of(machine.dfa.step(q, sym));
            matrix[i][j] = &matrix[i][j] - &w;
        }
        rhs[i] = finite(&row[machine.dfa.alphabet().len()]).expect("finite eos weight");
    }
    let masses = match super::linalg::gaussian_solve(matrix, rhs) {
        Some(t) => t,
        None => {
            return Ok(NormalizationReport::NotNormalized {
                failure: NormalizationFailure::SingularSystem,
            })
        }
    };
    for (i, &q) in reachable.iter().enumerate() {
        if masses[i] != BigRational::one() {
            return Ok(NormalizationReport::NotNormalized {
                failure: NormalizationFailure::TerminationDeficit {
                    state: machine.dfa.state_name(q).to_string(),
                    mass: alloc::format!("{}", masses[i]),
                },
            });
        }
    }
    let certificate = reachable
        .iter()
        .enumerate()
        .map(|(i, &q)| (machine.dfa.state_name(q).to_string(), masses[i].clone()))
        .collect();
    Ok(NormalizationReport::Normalized {
        termination: Some(certificate),
    })
}
