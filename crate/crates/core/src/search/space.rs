//! Bounded circuit families and their deterministic enumeration.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use serde::{Deserialize, Serialize};

use crate::detection::DetectorConfig;
use crate::error::{invalid, Result};
use crate::optics::{CircuitSpec, ElementKind, ElementSpec};

/// A finite family of circuits plus the detector setups to try on each.
///
/// Photons are always injected on spatial modes 1 and 2; higher modes start
/// empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpace {
    #[serde(rename = "modes")]
    pub spatial_mode_count: usize,
    pub max_depth: usize,
    pub element_kinds: Vec<ElementKind>,
    #[serde(rename = "angles", default)]
    pub angle_set: Vec<f64>,
    #[serde(rename = "detectors")]
    pub detector_configs: Vec<DetectorConfig>,
}

impl SearchSpace {
    /// 3 modes, depth <= 4, {PP, PNP, rotator}, angles {0, π/8, π/4},
    /// full-resolving detectors on every mode.
    pub fn desk_default() -> Self {
        SearchSpace {
            spatial_mode_count: 3,
            max_depth: 4,
            element_kinds: vec![ElementKind::PpBs, ElementKind::PnpBs, ElementKind::PolRotator],
            angle_set: vec![0.0, FRAC_PI_8, FRAC_PI_4],
            detector_configs: vec![DetectorConfig::full(3)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.spatial_mode_count < 2 {
            return invalid("search space needs at least 2 spatial modes (photons enter on 1 and 2)");
        }
        if self.max_depth == 0 {
            return invalid("max_depth must be at least 1");
        }
        if self.element_kinds.iter().any(|k| k.is_parameterized()) && self.angle_set.is_empty() {
            return invalid("angle set must be non-empty when rotators or phase shifters are allowed");
        }
        if let Some(a) = self.angle_set.iter().find(|a| !a.is_finite()) {
            return invalid(format!("angle {a} is not finite"));
        }
        if self.detector_configs.is_empty() {
            return invalid("search space lists no detector configurations");
        }
        for (i, cfg) in self.detector_configs.iter().enumerate() {
            cfg.validate(self.spatial_mode_count)
                .map_err(|e| crate::error::Error::InvalidInput(format!("detector {i}: {e}")))?;
        }
        Ok(())
    }

    /// Every single element the family can use, in enumeration order: kinds
    /// in `ElementKind` order, then ports lexicographically, then angles in
    /// the order given.
    pub fn alphabet(&self) -> Vec<ElementSpec> {
        let mut kinds = self.element_kinds.clone();
        kinds.sort();
        kinds.dedup();
        let m = self.spatial_mode_count;
        let mut out = Vec::new();
        for kind in kinds {
            match kind {
                ElementKind::PpBs | ElementKind::PnpBs => {
                    for i in 1..=m {
                        for j in i + 1..=m {
                            out.push(ElementSpec {
                                kind,
                                ports: vec![i, j],
                                angle: None,
                            });
                        }
                    }
                }
                ElementKind::PolRotator | ElementKind::PhaseShifter => {
                    for p in 1..=m {
                        for &a in &self.angle_set {
                            out.push(ElementSpec {
                                kind,
                                ports: vec![p],
                                angle: Some(a),
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

/// Random-access view of all element sequences of length `1..=max_depth`
/// over the space's alphabet, depth-major then lexicographic.
#[derive(Debug, Clone)]
pub struct CircuitEnumerator {
    spatial_mode_count: usize,
    alphabet: Vec<ElementSpec>,
    /// `depth_offsets[d - 1]` is the index of the first depth-`d` circuit;
    /// the last entry is the total.
    depth_offsets: Vec<u64>,
}

impl CircuitEnumerator {
    pub fn new(space: &SearchSpace) -> Result<Self> {
        space.validate()?;
        let alphabet = space.alphabet();
        let a = alphabet.len() as u64;
        let mut depth_offsets = vec![0u64];
        let mut per_depth = 1u64;
        for _ in 0..space.max_depth {
            per_depth = per_depth
                .checked_mul(a)
                .ok_or_else(|| crate::error::Error::InvalidInput("search space too large".into()))?;
            let next = depth_offsets.last().unwrap().checked_add(per_depth);
            depth_offsets.push(next.ok_or_else(|| {
                crate::error::Error::InvalidInput("search space too large".into())
            })?);
        }
        Ok(CircuitEnumerator {
            spatial_mode_count: space.spatial_mode_count,
            alphabet,
            depth_offsets,
        })
    }

    pub fn alphabet(&self) -> &[ElementSpec] {
        &self.alphabet
    }

    pub fn len(&self) -> u64 {
        *self.depth_offsets.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Alphabet indices of circuit `index`, first-applied element first.
    pub fn digits_at(&self, index: u64) -> Option<Vec<usize>> {
        if index >= self.len() {
            return None;
        }
        let depth = self.depth_offsets.partition_point(|&o| o <= index);
        let mut local = index - self.depth_offsets[depth - 1];
        let a = self.alphabet.len() as u64;
        let mut digits = vec![0usize; depth];
        for d in digits.iter_mut().rev() {
            *d = (local % a) as usize;
            local /= a;
        }
        Some(digits)
    }

    pub fn circuit_at(&self, index: u64) -> Option<CircuitSpec> {
        let digits = self.digits_at(index)?;
        Some(CircuitSpec::new(
            self.spatial_mode_count,
            digits.into_iter().map(|d| self.alphabet[d].clone()).collect(),
        ))
    }

    pub fn iter(&self) -> impl Iterator<Item = CircuitSpec> + '_ {
        (0..self.len()).map(move |i| self.circuit_at(i).expect("index in range"))
    }
}

/// Stream of every circuit in the family, each exactly once.
pub fn enumerate_circuits(space: &SearchSpace) -> Result<impl Iterator<Item = CircuitSpec>> {
    let e = CircuitEnumerator::new(space)?;
    Ok((0..e.len()).map(move |i| e.circuit_at(i).expect("index in range")))
}
