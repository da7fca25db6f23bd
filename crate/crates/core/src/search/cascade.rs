//! Repeatedly splitting a bunched photon pair on fresh beam splitters.
//!
//! Stage `k` mixes the bunched spatial mode with an empty mode `k + 1` on a
//! polarization-preserving splitter, records split/bunch probabilities, then
//! post-selects the bunched branch and carries it on to the next stage.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::evolution::apply_unitary;
use crate::fock::{inner_product, PhotonicState};
use crate::optics::pp_bs_matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeStage {
    pub stage: usize,
    pub split_probability: f64,
    pub bunch_probability: f64,
    /// Squared overlap of the renormalized bunched branch with the initial
    /// polarization content; the worse of the two output ports.
    pub fidelity: f64,
}

/// The single spatial mode holding every photon, if there is one.
fn bunched_mode(state: &PhotonicState) -> Option<usize> {
    let modes = state.spatial_modes();
    match modes.len() {
        1 => modes.into_iter().next(),
        _ => None,
    }
}

pub fn cascade_experiment(initial: &PhotonicState, stages: usize) -> Result<Vec<CascadeStage>> {
    if stages == 0 {
        return invalid("cascade needs at least one stage");
    }
    let Some(mode) = bunched_mode(initial) else {
        return invalid("cascade input must have all photons in one spatial mode");
    };
    let reference = initial.relabel_spatial(mode, 1)?.normalize()?;
    let mut current = reference.clone();
    let mut records = Vec::with_capacity(stages);

    for stage in 1..=stages {
        let fresh = stage + 1;
        let out = apply_unitary(&current, &pp_bs_matrix(1, fresh)?)?;
        let bunched = out.project(|occ| occ.spatial_modes().len() == 1);
        let bunch_probability = bunched.norm_sqr();
        let split_probability = out.norm_sqr() - bunch_probability;

        let mut fidelity = f64::INFINITY;
        let mut carried = None;
        for port in [1, fresh] {
            let branch = bunched.project(|occ| occ.spatial_modes().contains(&port));
            let content = branch.relabel_spatial(port, 1)?.normalize()?;
            let overlap: Complex64 = inner_product(&reference, &content)?;
            fidelity = fidelity.min(overlap.norm_sqr());
            if port == 1 {
                carried = Some(content);
            }
        }
        records.push(CascadeStage {
            stage,
            split_probability,
            bunch_probability,
            fidelity,
        });
        current = carried.expect("port 1 is always visited");
    }
    Ok(records)
}
