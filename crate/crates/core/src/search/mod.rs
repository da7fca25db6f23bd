//! Exhaustive search over bounded circuit families for the best Bell-state
//! discrimination, and the beam-splitter cascade experiment.
//!
//! Scores are computed per `(circuit, detector)` pair, possibly in parallel,
//! and reduced in enumeration order afterwards, so the result does not depend
//! on the number of workers.

mod cascade;
mod space;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::outcome_distribution;
use crate::discrimination::{bayes_success, unambiguous_success, Conditioned};
use crate::error::{Error, Result};
use crate::evolution::apply_unitary;
use crate::fock::{bell_state, BellKind, PhotonicState};
use crate::optics::{compose_circuit, CircuitSpec};

pub use cascade::{cascade_experiment, CascadeStage};
pub use space::{enumerate_circuits, CircuitEnumerator, SearchSpace};

/// Best unambiguous success allowed before a result is flagged.
pub const CEILING: f64 = 0.5;
pub const CEILING_TOL: f64 = 1e-9;
/// Scores within this of the maximum count as ties.
pub const TIE_TOL: f64 = 1e-10;
/// At most this many tied circuits are written out; the total is always kept.
pub const MAX_RECORDED_TIES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    /// Position of the circuit in enumeration order.
    pub index: u64,
    /// Index into the space's detector list.
    pub detector: usize,
    pub circuit: CircuitSpec,
}

/// All `(circuit, detector)` pairs attaining a maximum, capped in length.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TieSet {
    pub total: u64,
    pub recorded: Vec<Candidate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub space: SearchSpace,
    pub circuits_evaluated: u64,
    pub evaluations: u64,
    pub best_unambiguous: f64,
    pub best_bayes: f64,
    pub unambiguous_argmax: TieSet,
    pub bayes_argmax: TieSet,
    /// Set when `best_unambiguous` exceeds one half.
    pub ceiling_exceeded: bool,
    /// Set when the family contains no circuits at all.
    pub empty_family: bool,
    pub wall_time_secs: f64,
}

impl SearchResult {
    /// Copy with timing zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        SearchResult {
            wall_time_secs: 0.0,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Score {
    unambiguous: f64,
    bayes: f64,
}

fn bell_inputs() -> Result<Vec<PhotonicState>> {
    BellKind::ALL.into_iter().map(|k| bell_state(k, 1, 2)).collect()
}

fn score_circuit(
    circuit: &CircuitSpec,
    inputs: &[PhotonicState],
    space: &SearchSpace,
) -> Result<Vec<Score>> {
    let u = compose_circuit(circuit)?;
    let outputs = inputs
        .iter()
        .map(|s| apply_unitary(s, &u))
        .collect::<Result<Vec<_>>>()?;
    space
        .detector_configs
        .iter()
        .map(|cfg| {
            let d = |i: usize| outcome_distribution(&outputs[i], cfg);
            let conditioned = Conditioned::new([d(0)?, d(1)?, d(2)?, d(3)?]);
            Ok(Score {
                unambiguous: unambiguous_success(&conditioned),
                bayes: bayes_success(&conditioned),
            })
        })
        .collect()
}

fn ties(
    scores: &[Score],
    best: f64,
    pick: impl Fn(&Score) -> f64,
    enumerator: &CircuitEnumerator,
    detectors: usize,
) -> TieSet {
    let mut set = TieSet::default();
    for (i, s) in scores.iter().enumerate() {
        if pick(s) >= best - TIE_TOL {
            set.total += 1;
            if set.recorded.len() < MAX_RECORDED_TIES {
                let index = (i / detectors) as u64;
                set.recorded.push(Candidate {
                    index,
                    detector: i % detectors,
                    circuit: enumerator.circuit_at(index).expect("index in range"),
                });
            }
        }
    }
    set
}

/// Evaluates every circuit of the family against every detector setup.
///
/// `workers == 0` uses rayon's default pool size; `workers == 1` runs on the
/// calling thread.
pub fn search_max_success(space: &SearchSpace, workers: usize) -> Result<SearchResult> {
    let start = Instant::now();
    let enumerator = CircuitEnumerator::new(space)?;
    let inputs = bell_inputs()?;
    let n = enumerator.len();
    let detectors = space.detector_configs.len();

    let eval = |i: u64| -> Result<Vec<Score>> {
        let circuit = enumerator.circuit_at(i).expect("index in range");
        score_circuit(&circuit, &inputs, space)
    };
    let per_circuit: Vec<Vec<Score>> = if workers == 1 {
        (0..n).map(eval).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
        pool.install(|| (0..n).into_par_iter().map(eval).collect::<Result<_>>())?
    };
    let scores: Vec<Score> = per_circuit.into_iter().flatten().collect();

    let best_unambiguous = scores.iter().map(|s| s.unambiguous).fold(0.0, f64::max);
    let best_bayes = scores.iter().map(|s| s.bayes).fold(0.0, f64::max);
    let (unambiguous_argmax, bayes_argmax) = if scores.is_empty() {
        (TieSet::default(), TieSet::default())
    } else {
        (
            ties(&scores, best_unambiguous, |s| s.unambiguous, &enumerator, detectors),
            ties(&scores, best_bayes, |s| s.bayes, &enumerator, detectors),
        )
    };

    Ok(SearchResult {
        space: space.clone(),
        circuits_evaluated: n,
        evaluations: scores.len() as u64,
        best_unambiguous,
        best_bayes,
        unambiguous_argmax,
        bayes_argmax,
        ceiling_exceeded: best_unambiguous > CEILING + CEILING_TOL,
        empty_family: n == 0,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}
