//! Born-rule outcome distributions over detector click patterns.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::{OccupationVector, PhotonicState, Polarization};

/// Outcomes below this probability are dropped.
pub const EVENT_TOL: f64 = 1e-12;

/// Probabilities of a distribution must sum to one within this.
pub const PROBABILITY_TOL: f64 = 1e-10;

/// What the detectors can tell apart, and which spatial modes they watch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorConfig {
    pub polarization_resolving: bool,
    pub number_resolving: bool,
    pub monitored_spatial_modes: BTreeSet<usize>,
}

impl DetectorConfig {
    /// Polarization- and number-resolving detectors on modes `1..=spatial_modes`.
    pub fn full(spatial_modes: usize) -> Self {
        DetectorConfig {
            polarization_resolving: true,
            number_resolving: true,
            monitored_spatial_modes: (1..=spatial_modes).collect(),
        }
    }

    pub fn with_capabilities(mut self, polarization_resolving: bool, number_resolving: bool) -> Self {
        self.polarization_resolving = polarization_resolving;
        self.number_resolving = number_resolving;
        self
    }

    pub fn validate(&self, spatial_modes: usize) -> Result<()> {
        if self.monitored_spatial_modes.is_empty() {
            return invalid("detector configuration monitors no modes");
        }
        if let Some(&m) = self
            .monitored_spatial_modes
            .iter()
            .find(|&&m| m == 0 || m > spatial_modes)
        {
            return invalid(format!(
                "detector on mode {m} outside spatial modes 1..={spatial_modes}"
            ));
        }
        Ok(())
    }

    pub fn is_full_resolving(&self) -> bool {
        self.polarization_resolving && self.number_resolving
    }

    fn channel(&self, spatial: usize, polarization: Polarization) -> Channel {
        Channel {
            spatial,
            polarization: self.polarization_resolving.then_some(polarization),
        }
    }

    /// The event these detectors register for a Fock basis ket.
    pub fn event_for(&self, occupation: &OccupationVector) -> Result<DetectionEvent> {
        let mut counts: BTreeMap<Channel, u32> = BTreeMap::new();
        for (label, n) in occupation.iter() {
            if !self.monitored_spatial_modes.contains(&label.spatial) {
                return Err(Error::Coverage(format!(
                    "photons in unmonitored spatial mode {}",
                    label.spatial
                )));
            }
            *counts.entry(self.channel(label.spatial, label.polarization)).or_insert(0) += n;
        }
        Ok(DetectionEvent::from_counts(counts, self.number_resolving))
    }

    /// Maps an event recorded by full-resolving detectors to what these
    /// detectors would have shown.
    pub fn coarsen(&self, fine: &DetectionEvent) -> Result<DetectionEvent> {
        let mut counts: BTreeMap<Channel, u32> = BTreeMap::new();
        for (ch, n) in fine.iter() {
            let Some(pol) = ch.polarization else {
                return invalid("coarsen expects a polarization-resolved event");
            };
            if !self.monitored_spatial_modes.contains(&ch.spatial) {
                return Err(Error::Coverage(format!(
                    "photons in unmonitored spatial mode {}",
                    ch.spatial
                )));
            }
            *counts.entry(self.channel(ch.spatial, pol)).or_insert(0) += n;
        }
        Ok(DetectionEvent::from_counts(counts, self.number_resolving))
    }
}

/// A detector channel: a spatial mode, optionally split by polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Channel {
    pub spatial: usize,
    pub polarization: Option<Polarization>,
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarization {
            Some(p) => write!(f, "{}{}", self.spatial, p),
            None => write!(f, "{}", self.spatial),
        }
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (digits, polarization) = match s.chars().last() {
            Some('H') => (&s[..s.len() - 1], Some(Polarization::H)),
            Some('V') => (&s[..s.len() - 1], Some(Polarization::V)),
            _ => (s, None),
        };
        match digits.parse::<usize>() {
            Ok(spatial) if spatial >= 1 => Ok(Channel {
                spatial,
                polarization,
            }),
            _ => invalid(format!("bad channel `{s}`")),
        }
    }
}

impl Serialize for Channel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Channel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Counts per channel. With threshold detectors every count is 1 (a click).
/// Serialized as a JSON object such as `{"1H": 1, "2V": 1}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DetectionEvent {
    counts: BTreeMap<Channel, u32>,
}

impl DetectionEvent {
    fn from_counts(mut counts: BTreeMap<Channel, u32>, number_resolving: bool) -> Self {
        counts.retain(|_, n| *n > 0);
        if !number_resolving {
            counts.values_mut().for_each(|n| *n = 1);
        }
        DetectionEvent { counts }
    }

    /// Builds an event from explicit `(channel, count)` pairs.
    pub fn new<I: IntoIterator<Item = (Channel, u32)>>(counts: I) -> Self {
        let mut map = BTreeMap::new();
        for (ch, n) in counts {
            *map.entry(ch).or_insert(0) += n;
        }
        Self::from_counts(map, true)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Channel, u32)> + '_ {
        self.counts.iter().map(|(&c, &n)| (c, n))
    }

    pub fn count(&self, channel: Channel) -> u32 {
        self.counts.get(&channel).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u32 {
        self.counts.values().sum()
    }

    pub fn spatial_modes(&self) -> BTreeSet<usize> {
        self.counts.keys().map(|c| c.spatial).collect()
    }

    /// Applies `f` to every channel, merging counts that collide.
    pub fn relabel<F: Fn(Channel) -> Channel>(&self, f: F) -> Self {
        DetectionEvent::new(self.iter().map(|(c, n)| (f(c), n)))
    }
}

impl fmt::Display for DetectionEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (c, n)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}:{n}")?;
        }
        f.write_str("}")
    }
}

/// Probability mass function over detection events.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<EventProbability>", try_from = "Vec<EventProbability>")]
pub struct OutcomeDistribution {
    probs: BTreeMap<DetectionEvent, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventProbability {
    pub event: DetectionEvent,
    pub probability: f64,
}

impl From<OutcomeDistribution> for Vec<EventProbability> {
    fn from(d: OutcomeDistribution) -> Self {
        d.probs
            .into_iter()
            .map(|(event, probability)| EventProbability { event, probability })
            .collect()
    }
}

impl TryFrom<Vec<EventProbability>> for OutcomeDistribution {
    type Error = Error;

    fn try_from(entries: Vec<EventProbability>) -> Result<Self> {
        OutcomeDistribution::from_pairs(entries.into_iter().map(|e| (e.event, e.probability)))
    }
}

impl OutcomeDistribution {
    /// Sums repeated events, drops those below [`EVENT_TOL`] and checks the
    /// result is a probability distribution.
    pub fn from_pairs<I: IntoIterator<Item = (DetectionEvent, f64)>>(pairs: I) -> Result<Self> {
        let mut probs: BTreeMap<DetectionEvent, f64> = BTreeMap::new();
        for (ev, p) in pairs {
            if !(p.is_finite() && p >= -PROBABILITY_TOL) {
                return invalid(format!("bad probability {p} for {ev}"));
            }
            *probs.entry(ev).or_insert(0.0) += p;
        }
        probs.retain(|_, p| *p >= EVENT_TOL);
        let d = OutcomeDistribution { probs };
        let total = d.total();
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return invalid(format!("probabilities sum to {total}, not 1"));
        }
        Ok(d)
    }

    pub fn probability(&self, event: &DetectionEvent) -> f64 {
        self.probs.get(event).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DetectionEvent, f64)> + '_ {
        self.probs.iter().map(|(e, &p)| (e, p))
    }

    pub fn events(&self) -> impl Iterator<Item = &DetectionEvent> + '_ {
        self.probs.keys()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// Pushes the distribution forward through an event map.
    pub fn map_events<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&DetectionEvent) -> Result<DetectionEvent>,
    {
        let pairs = self
            .probs
            .iter()
            .map(|(e, &p)| Ok((f(e)?, p)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_pairs(pairs)
    }

    /// Largest absolute probability difference over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.events()
            .chain(other.events())
            .map(|e| (self.probability(e) - other.probability(e)).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for OutcomeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, p) in self.iter() {
            writeln!(f, "{p:.12}  {e}")?;
        }
        Ok(())
    }
}

/// Born rule `P(n) = |<n|psi>|^2`, coarse-grained by the detector model.
pub fn outcome_distribution(state: &PhotonicState, cfg: &DetectorConfig) -> Result<OutcomeDistribution> {
    if cfg.monitored_spatial_modes.is_empty() {
        return invalid("detector configuration monitors no modes");
    }
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > PROBABILITY_TOL {
        return invalid(format!("state is not normalized (norm^2 = {norm})"));
    }
    let pairs = state
        .terms()
        .map(|(occ, amp)| Ok((cfg.event_for(occ)?, amp.norm_sqr())))
        .collect::<Result<Vec<_>>>()?;
    OutcomeDistribution::from_pairs(pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    Split,
    Bunched,
}

/// Split when the two detected photons sit in different spatial modes,
/// bunched when they share one. Polarization is ignored.
pub fn classify_pattern(event: &DetectionEvent) -> Result<Pattern> {
    let total = event.total();
    if total != 2 {
        return invalid(format!("classification needs exactly 2 detected photons, got {total}"));
    }
    Ok(if event.spatial_modes().len() == 1 {
        Pattern::Bunched
    } else {
        Pattern::Split
    })
}

/// `(P(split), P(bunched))`.
pub fn pattern_probabilities(dist: &OutcomeDistribution) -> Result<(f64, f64)> {
    let mut split = 0.0;
    let mut bunched = 0.0;
    for (event, p) in dist.iter() {
        match classify_pattern(event)? {
            Pattern::Split => split += p,
            Pattern::Bunched => bunched += p,
        }
    }
    Ok((split, bunched))
}
