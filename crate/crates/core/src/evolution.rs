//! State evolution by creation-operator substitution.
//!
//! Each basis ket `|n>` is rewritten as `prod (a^dag)^{n_m} / sqrt(n_m!) |0>`,
//! every `a^dag_in` is replaced by `sum_out U[out][in] b^dag_out`, the product
//! is multiplied out and monomials are collected. A collected monomial
//! `prod (b^dag)^{m_k}` equals `sqrt(prod m_k!) |m>`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::fock::{ModeLabel, OccupationVector, PhotonicState};
use crate::optics::{CircuitSpec, ModeUnitary, PnpSigns};

/// Unitarity slack accepted by [`apply_unitary`]; tighter checks happen when
/// unitaries are constructed.
const APPLY_UNITARITY_TOL: f64 = 1e-9;

pub fn apply_unitary(state: &PhotonicState, u: &ModeUnitary) -> Result<PhotonicState> {
    let err = u.unitarity_error();
    if err.is_nan() || err > APPLY_UNITARITY_TOL {
        return invalid(format!("refusing to apply non-unitary matrix (error {err:e})"));
    }
    let mut monomials: BTreeMap<OccupationVector, Complex64> = BTreeMap::new();
    let mut columns: BTreeMap<ModeLabel, Vec<(ModeLabel, Complex64)>> = BTreeMap::new();
    for (occ, amp) in state.terms() {
        let inputs = occ.labels();
        for label in &inputs {
            columns.entry(*label).or_insert_with(|| u.column(*label));
        }
        let prefactor = amp / occ.factorial_product().sqrt();
        let cols: Vec<&[(ModeLabel, Complex64)]> =
            inputs.iter().map(|l| columns[l].as_slice()).collect();
        expand(&cols, prefactor, &mut Vec::with_capacity(cols.len()), &mut monomials);
    }
    let terms = monomials
        .into_iter()
        .map(|(occ, coeff)| {
            let norm = occ.factorial_product().sqrt();
            (occ, coeff * norm)
        })
        .collect();
    Ok(PhotonicState::pruned(state.photon_number(), terms))
}

/// Multiplies out `prod_k (sum_j cols[k][j])` and accumulates each monomial.
fn expand(
    cols: &[&[(ModeLabel, Complex64)]],
    coeff: Complex64,
    chosen: &mut Vec<ModeLabel>,
    out: &mut BTreeMap<OccupationVector, Complex64>,
) {
    let Some((first, rest)) = cols.split_first() else {
        *out.entry(OccupationVector::from_labels(chosen.iter().copied()))
            .or_default() += coeff;
        return;
    };
    for &(label, entry) in first.iter() {
        chosen.push(label);
        expand(rest, coeff * entry, chosen, out);
        chosen.pop();
    }
}

/// Applies the circuit's elements one after another.
pub fn evolve_circuit(state: &PhotonicState, spec: &CircuitSpec) -> Result<PhotonicState> {
    evolve_circuit_with(state, spec, PnpSigns::Calibrated)
}

pub fn evolve_circuit_with(
    state: &PhotonicState,
    spec: &CircuitSpec,
    signs: PnpSigns,
) -> Result<PhotonicState> {
    spec.validate()?;
    check_fits(state, spec)?;
    spec.elements
        .iter()
        .try_fold(state.clone(), |s, e| apply_unitary(&s, &e.matrix_with(signs)?))
}

pub(crate) fn check_fits(state: &PhotonicState, spec: &CircuitSpec) -> Result<()> {
    let max = state.max_spatial_mode();
    if max > spec.spatial_mode_count {
        return invalid(format!(
            "state occupies spatial mode {max} but the circuit has {} modes",
            spec.spatial_mode_count
        ));
    }
    Ok(())
}
