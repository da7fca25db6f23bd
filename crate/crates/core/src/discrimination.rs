//! How well one fixed circuit and detector setup tells the four Bell states
//! apart: Bayes (maximum-likelihood) success, unambiguous success and
//! pairwise total-variation distances, all under a uniform prior.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::detection::{outcome_distribution, DetectionEvent, DetectorConfig, OutcomeDistribution};
use crate::error::{invalid, Error, Result};
use crate::evolution::apply_unitary;
use crate::fock::{bell_state, BellKind};
use crate::optics::{compose_circuit_with, CircuitSpec, ModeUnitary, PnpSigns};

/// A conditional probability below this counts as zero when deciding
/// whether an event is unambiguous.
pub const ZERO_TOL: f64 = 1e-10;

const PRIOR: f64 = 0.25;

/// One outcome distribution per Bell state, for the same circuit and detectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "BTreeMap<BellKind, OutcomeDistribution>")]
#[serde(try_from = "BTreeMap<BellKind, OutcomeDistribution>")]
pub struct Conditioned {
    per_kind: [OutcomeDistribution; 4],
}

impl Conditioned {
    pub fn new(per_kind: [OutcomeDistribution; 4]) -> Self {
        Conditioned { per_kind }
    }

    pub fn get(&self, kind: BellKind) -> &OutcomeDistribution {
        &self.per_kind[kind.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (BellKind, &OutcomeDistribution)> + '_ {
        BellKind::ALL.into_iter().map(|k| (k, self.get(k)))
    }

    /// Union of the four supports.
    pub fn events(&self) -> BTreeSet<&DetectionEvent> {
        self.per_kind.iter().flat_map(|d| d.events()).collect()
    }
}

impl From<Conditioned> for BTreeMap<BellKind, OutcomeDistribution> {
    fn from(c: Conditioned) -> Self {
        BellKind::ALL.into_iter().zip(c.per_kind).collect()
    }
}

impl TryFrom<BTreeMap<BellKind, OutcomeDistribution>> for Conditioned {
    type Error = Error;

    fn try_from(mut map: BTreeMap<BellKind, OutcomeDistribution>) -> Result<Self> {
        let mut take = |k: BellKind| {
            map.remove(&k)
                .ok_or_else(|| Error::InvalidInput(format!("missing distribution for {}", k.selector())))
        };
        Ok(Conditioned::new([
            take(BellKind::PsiMinus)?,
            take(BellKind::PsiPlus)?,
            take(BellKind::PhiMinus)?,
            take(BellKind::PhiPlus)?,
        ]))
    }
}

/// Evolves each Bell state (injected on `input_modes`) through the circuit
/// and measures it with `cfg`.
pub fn conditioned_distributions(
    spec: &CircuitSpec,
    cfg: &DetectorConfig,
    input_modes: (usize, usize),
) -> Result<Conditioned> {
    conditioned_distributions_with(spec, cfg, input_modes, PnpSigns::Calibrated)
}

pub fn conditioned_distributions_with(
    spec: &CircuitSpec,
    cfg: &DetectorConfig,
    input_modes: (usize, usize),
    signs: PnpSigns,
) -> Result<Conditioned> {
    let u = compose_circuit_with(spec, signs)?;
    cfg.validate(spec.spatial_mode_count)?;
    let (a, b) = input_modes;
    if a > spec.spatial_mode_count || b > spec.spatial_mode_count {
        return invalid(format!(
            "input modes ({a}, {b}) outside circuit with {} modes",
            spec.spatial_mode_count
        ));
    }
    conditioned_from_unitary(&u, cfg, input_modes)
}

/// Same as [`conditioned_distributions`] for an already composed circuit.
pub fn conditioned_from_unitary(
    u: &ModeUnitary,
    cfg: &DetectorConfig,
    input_modes: (usize, usize),
) -> Result<Conditioned> {
    let run = |kind: BellKind| -> Result<OutcomeDistribution> {
        let input = bell_state(kind, input_modes.0, input_modes.1)?;
        outcome_distribution(&apply_unitary(&input, u)?, cfg)
    };
    Ok(Conditioned::new([
        run(BellKind::PsiMinus)?,
        run(BellKind::PsiPlus)?,
        run(BellKind::PhiMinus)?,
        run(BellKind::PhiPlus)?,
    ]))
}

/// `1/4 * sum_e max_k P(e|k)`.
pub fn bayes_success(conditioned: &Conditioned) -> f64 {
    conditioned
        .events()
        .into_iter()
        .map(|e| {
            conditioned
                .per_kind
                .iter()
                .map(|d| d.probability(e))
                .fold(0.0, f64::max)
        })
        .sum::<f64>()
        * PRIOR
}

/// Probability mass on events that only one Bell state can produce.
pub fn unambiguous_success(conditioned: &Conditioned) -> f64 {
    let mut total = 0.0;
    for e in conditioned.events() {
        let possible: Vec<f64> = conditioned
            .per_kind
            .iter()
            .map(|d| d.probability(e))
            .filter(|&p| p > ZERO_TOL)
            .collect();
        if let [p] = possible[..] {
            total += p;
        }
    }
    total * PRIOR
}

/// `(1/2) sum_e |p(e) - q(e)|`
pub fn total_variation(p: &OutcomeDistribution, q: &OutcomeDistribution) -> f64 {
    let events: BTreeSet<&DetectionEvent> = p.events().chain(q.events()).collect();
    0.5 * events
        .into_iter()
        .map(|e| (p.probability(e) - q.probability(e)).abs())
        .sum::<f64>()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusablePair {
    pub first: BellKind,
    pub second: BellKind,
    pub total_variation: f64,
}

/// Total-variation distance for each of the six pairs, in `BellKind` order.
pub fn confusability(conditioned: &Conditioned) -> Vec<ConfusablePair> {
    let mut out = Vec::with_capacity(6);
    for (i, &first) in BellKind::ALL.iter().enumerate() {
        for &second in &BellKind::ALL[i + 1..] {
            out.push(ConfusablePair {
                first,
                second,
                total_variation: total_variation(conditioned.get(first), conditioned.get(second)),
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guess {
    Kind(BellKind),
    Abstain,
}

/// A decision rule from detection events to guesses.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Strategy {
    rules: BTreeMap<DetectionEvent, Guess>,
}

impl Strategy {
    pub fn new<I: IntoIterator<Item = (DetectionEvent, Guess)>>(rules: I) -> Self {
        Strategy {
            rules: rules.into_iter().collect(),
        }
    }

    /// Guesses the most likely state for every event; ties go to the first
    /// kind in `BellKind` order.
    pub fn maximum_a_posteriori(conditioned: &Conditioned) -> Self {
        Strategy::new(conditioned.events().into_iter().map(|e| {
            let mut best = (BellKind::PsiMinus, f64::NEG_INFINITY);
            for (k, d) in conditioned.iter() {
                let p = d.probability(e);
                if p > best.1 {
                    best = (k, p);
                }
            }
            (e.clone(), Guess::Kind(best.0))
        }))
    }

    /// Names a state only on events no other state can produce.
    pub fn unambiguous(conditioned: &Conditioned) -> Self {
        Strategy::new(conditioned.events().into_iter().map(|e| {
            let possible: Vec<BellKind> = conditioned
                .iter()
                .filter(|(_, d)| d.probability(e) > ZERO_TOL)
                .map(|(k, _)| k)
                .collect();
            let guess = match possible[..] {
                [k] => Guess::Kind(k),
                _ => Guess::Abstain,
            };
            (e.clone(), guess)
        }))
    }

    pub fn guess(&self, event: &DetectionEvent) -> Option<Guess> {
        self.rules.get(event).copied()
    }

    /// Covers every event any Bell state can produce.
    pub fn is_total(&self, conditioned: &Conditioned) -> bool {
        conditioned.events().into_iter().all(|e| self.rules.contains_key(e))
    }

    /// Average probability of naming the right state; abstaining earns nothing.
    pub fn success(&self, conditioned: &Conditioned) -> f64 {
        conditioned
            .iter()
            .map(|(k, d)| {
                d.iter()
                    .filter(|(e, _)| self.guess(e) == Some(Guess::Kind(k)))
                    .map(|(_, p)| p)
                    .sum::<f64>()
            })
            .sum::<f64>()
            * PRIOR
    }

    /// Whether the strategy never names a wrong state.
    pub fn is_error_free(&self, conditioned: &Conditioned) -> bool {
        conditioned.iter().all(|(k, d)| {
            d.iter().all(|(e, p)| match self.guess(e) {
                Some(Guess::Kind(g)) => g == k || p <= ZERO_TOL,
                _ => true,
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationReport {
    pub conditioned: Conditioned,
    pub bayes_success: f64,
    pub unambiguous_success: f64,
    pub confusable_pairs: Vec<ConfusablePair>,
}

impl DiscriminationReport {
    pub fn from_conditioned(conditioned: Conditioned) -> Self {
        DiscriminationReport {
            bayes_success: bayes_success(&conditioned),
            unambiguous_success: unambiguous_success(&conditioned),
            confusable_pairs: confusability(&conditioned),
            conditioned,
        }
    }
}

pub fn discriminate(
    spec: &CircuitSpec,
    cfg: &DetectorConfig,
    input_modes: (usize, usize),
) -> Result<DiscriminationReport> {
    Ok(DiscriminationReport::from_conditioned(conditioned_distributions(
        spec,
        cfg,
        input_modes,
    )?))
}
