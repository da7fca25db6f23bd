//! Mode matrices for the optical elements and their composition into circuits.
//!
//! A [`ModeUnitary`] stores the creation-operator substitution table
//! `a^dag_in = sum_out U[out][in] b^dag_out`. Sequential elements compose as
//! `U_total = U_last * ... * U_first`.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::{ModeLabel, Polarization};

/// Tolerance for `U^dag U = I`.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Unitary acting on an explicit, sorted set of modes; identity elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeUnitary {
    modes: Vec<ModeLabel>,
    matrix: DMatrix<Complex64>,
}

impl ModeUnitary {
    /// `modes` must be strictly increasing and `matrix` square, of matching
    /// size and unitary within [`UNITARITY_TOL`].
    pub fn new(modes: Vec<ModeLabel>, matrix: DMatrix<Complex64>) -> Result<Self> {
        if modes.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("mode labels of a unitary must be sorted and distinct");
        }
        if matrix.nrows() != modes.len() || matrix.ncols() != modes.len() {
            return invalid(format!(
                "{}x{} matrix for {} modes",
                matrix.nrows(),
                matrix.ncols(),
                modes.len()
            ));
        }
        let u = ModeUnitary { modes, matrix };
        let err = u.unitarity_error();
        if err.is_nan() || err > UNITARITY_TOL {
            return invalid(format!("matrix is not unitary (max |U'U - I| = {err:e})"));
        }
        Ok(u)
    }

    pub fn identity(modes: Vec<ModeLabel>) -> Self {
        let mut modes = modes;
        modes.sort();
        modes.dedup();
        let n = modes.len();
        ModeUnitary {
            modes,
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.modes.len()
    }

    fn position(&self, label: ModeLabel) -> Option<usize> {
        self.modes.binary_search(&label).ok()
    }

    /// `U[out][in]`, including the implicit identity outside the declared modes.
    pub fn entry(&self, out: ModeLabel, input: ModeLabel) -> Complex64 {
        match (self.position(out), self.position(input)) {
            (Some(o), Some(i)) => self.matrix[(o, i)],
            (None, None) if out == input => Complex64::new(1.0, 0.0),
            _ => Complex64::default(),
        }
    }

    /// Non-zero entries of the column for `input`: the output operators an
    /// input creation operator is replaced by.
    pub fn column(&self, input: ModeLabel) -> Vec<(ModeLabel, Complex64)> {
        match self.position(input) {
            Some(i) => self
                .modes
                .iter()
                .enumerate()
                .map(|(o, &label)| (label, self.matrix[(o, i)]))
                .filter(|(_, amp)| *amp != Complex64::default())
                .collect(),
            None => vec![(input, Complex64::new(1.0, 0.0))],
        }
    }

    /// Re-expresses this unitary on a superset of its modes.
    pub fn embed(&self, modes: &[ModeLabel]) -> Result<Self> {
        let target: BTreeSet<ModeLabel> = modes.iter().copied().collect();
        if let Some(missing) = self.modes.iter().find(|m| !target.contains(m)) {
            return invalid(format!("cannot embed: mode {missing} not in target set"));
        }
        let target: Vec<ModeLabel> = target.into_iter().collect();
        let n = target.len();
        let matrix = DMatrix::from_fn(n, n, |o, i| self.entry(target[o], target[i]));
        Ok(ModeUnitary {
            modes: target,
            matrix,
        })
    }

    /// The circuit "apply `self`, then `next`".
    pub fn then(&self, next: &ModeUnitary) -> ModeUnitary {
        let union: Vec<ModeLabel> = self
            .modes
            .iter()
            .chain(next.modes.iter())
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let first = self.embed(&union).expect("union covers own modes");
        let second = next.embed(&union).expect("union covers own modes");
        ModeUnitary {
            modes: union,
            matrix: &second.matrix * &first.matrix,
        }
    }

    pub fn adjoint(&self) -> ModeUnitary {
        ModeUnitary {
            modes: self.modes.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    /// `max |(U^dag U - I)_{kl}|`
    pub fn unitarity_error(&self) -> f64 {
        let n = self.modes.len();
        let gram = self.matrix.adjoint() * &self.matrix;
        let id = DMatrix::<Complex64>::identity(n, n);
        (gram - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_error() <= UNITARITY_TOL
    }

    pub fn determinant(&self) -> Complex64 {
        self.matrix.clone().determinant()
    }

    /// Largest entrywise difference after embedding both into the union of modes.
    pub fn max_abs_diff(&self, other: &ModeUnitary) -> f64 {
        let union: Vec<ModeLabel> = self
            .modes
            .iter()
            .chain(other.modes.iter())
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let a = self.embed(&union).expect("union");
        let b = other.embed(&union).expect("union");
        (a.matrix - b.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ModeUnitary, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }
}

/// Sign placement for the V block of the polarization-non-preserving splitter.
///
/// `Calibrated` reproduces the PP-PNP Mach-Zehnder output
/// `a_1H a_1V -> -c_2H c_1V` and the split of `Ψ⁺`. `Literal` takes the lower
/// signs of the printed substitution rules at face value, which instead gives
/// the bunched `-c_2H c_2V`; it is kept only to exercise the claim checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PnpSigns {
    #[default]
    Calibrated,
    Literal,
}

fn distinct_ports(i: usize, j: usize) -> Result<()> {
    if i == 0 || j == 0 {
        return invalid("spatial ports are 1-based");
    }
    if i == j {
        return invalid(format!("beam splitter needs two distinct ports, got {i} twice"));
    }
    Ok(())
}

/// Builds a 4x4 beam-splitter unitary from the two 2x2 blocks acting on the
/// (port_i, port_j) pair for each polarization. Block entries are
/// `[[U[i][i], U[i][j]], [U[j][i], U[j][j]]]`.
fn beam_splitter(
    port_i: usize,
    port_j: usize,
    h_block: [[f64; 2]; 2],
    v_block: [[f64; 2]; 2],
) -> ModeUnitary {
    let mut modes = vec![
        ModeLabel::h(port_i),
        ModeLabel::v(port_i),
        ModeLabel::h(port_j),
        ModeLabel::v(port_j),
    ];
    modes.sort();
    let mut matrix = DMatrix::zeros(4, 4);
    let pos = |l: ModeLabel| modes.binary_search(&l).unwrap();
    for (pol, block) in [(Polarization::H, h_block), (Polarization::V, v_block)] {
        let ports = [port_i, port_j];
        for (r, &out) in ports.iter().enumerate() {
            for (c, &inp) in ports.iter().enumerate() {
                matrix[(pos(ModeLabel::new(out, pol)), pos(ModeLabel::new(inp, pol)))] =
                    Complex64::new(block[r][c], 0.0);
            }
        }
    }
    ModeUnitary { modes, matrix }
}

const S: f64 = FRAC_1_SQRT_2;

/// `a_i -> (b_i - b_j)/√2`, `a_j -> (b_i + b_j)/√2` on both polarizations.
const PP_BLOCK: [[f64; 2]; 2] = [[S, S], [-S, S]];
/// V block of the PNP splitter: `a_iV -> (b_iV + b_jV)/√2`, `a_jV -> (-b_iV + b_jV)/√2`.
const PNP_V_CALIBRATED: [[f64; 2]; 2] = [[S, -S], [S, S]];
/// `a_iV -> (b_iV + b_jV)/√2`, `a_jV -> (b_iV - b_jV)/√2`.
const PNP_V_LITERAL: [[f64; 2]; 2] = [[S, S], [S, -S]];

/// Polarization-preserving 50:50 beam splitter between `port_i` and `port_j`.
pub fn pp_bs_matrix(port_i: usize, port_j: usize) -> Result<ModeUnitary> {
    distinct_ports(port_i, port_j)?;
    Ok(beam_splitter(port_i, port_j, PP_BLOCK, PP_BLOCK))
}

/// Polarization-non-preserving 50:50 beam splitter (calibrated signs).
pub fn pnp_bs_matrix(port_i: usize, port_j: usize) -> Result<ModeUnitary> {
    pnp_bs_matrix_with(port_i, port_j, PnpSigns::Calibrated)
}

pub fn pnp_bs_matrix_with(port_i: usize, port_j: usize, signs: PnpSigns) -> Result<ModeUnitary> {
    distinct_ports(port_i, port_j)?;
    let v_block = match signs {
        PnpSigns::Calibrated => PNP_V_CALIBRATED,
        PnpSigns::Literal => PNP_V_LITERAL,
    };
    Ok(beam_splitter(port_i, port_j, PP_BLOCK, v_block))
}

/// Rotation by `angle` in the (H, V) plane of one spatial mode:
/// `H -> cos H + sin V`, `V -> -sin H + cos V`.
pub fn pol_rotator_matrix(port: usize, angle: f64) -> Result<ModeUnitary> {
    if port == 0 {
        return invalid("spatial ports are 1-based");
    }
    if !angle.is_finite() {
        return invalid("rotator angle must be finite");
    }
    let (s, c) = angle.sin_cos();
    let matrix = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(c, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(c, 0.0),
        ],
    );
    Ok(ModeUnitary {
        modes: vec![ModeLabel::h(port), ModeLabel::v(port)],
        matrix,
    })
}

/// Phase `e^{i angle}` on both polarizations of one spatial mode.
pub fn phase_shifter_matrix(port: usize, angle: f64) -> Result<ModeUnitary> {
    if port == 0 {
        return invalid("spatial ports are 1-based");
    }
    if !angle.is_finite() {
        return invalid("phase angle must be finite");
    }
    let phase = Complex64::from_polar(1.0, angle);
    Ok(ModeUnitary {
        modes: vec![ModeLabel::h(port), ModeLabel::v(port)],
        matrix: DMatrix::from_diagonal_element(2, 2, phase),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ElementKind {
    #[serde(rename = "ppbs")]
    PpBs,
    #[serde(rename = "pnpbs")]
    PnpBs,
    #[serde(rename = "rotator")]
    PolRotator,
    #[serde(rename = "phase")]
    PhaseShifter,
}

impl ElementKind {
    pub const ALL: [ElementKind; 4] = [
        ElementKind::PpBs,
        ElementKind::PnpBs,
        ElementKind::PolRotator,
        ElementKind::PhaseShifter,
    ];

    pub fn port_count(self) -> usize {
        match self {
            ElementKind::PpBs | ElementKind::PnpBs => 2,
            ElementKind::PolRotator | ElementKind::PhaseShifter => 1,
        }
    }

    pub fn is_parameterized(self) -> bool {
        self.port_count() == 1
    }

    pub fn name(self) -> &'static str {
        match self {
            ElementKind::PpBs => "ppbs",
            ElementKind::PnpBs => "pnpbs",
            ElementKind::PolRotator => "rotator",
            ElementKind::PhaseShifter => "phase",
        }
    }
}

/// One element of a circuit: `{"kind": ..., "ports": [...], "angle": ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    pub kind: ElementKind,
    pub ports: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

impl ElementSpec {
    pub fn ppbs(i: usize, j: usize) -> Self {
        ElementSpec {
            kind: ElementKind::PpBs,
            ports: vec![i, j],
            angle: None,
        }
    }

    pub fn pnpbs(i: usize, j: usize) -> Self {
        ElementSpec {
            kind: ElementKind::PnpBs,
            ports: vec![i, j],
            angle: None,
        }
    }

    pub fn rotator(port: usize, angle: f64) -> Self {
        ElementSpec {
            kind: ElementKind::PolRotator,
            ports: vec![port],
            angle: Some(angle),
        }
    }

    pub fn phase(port: usize, angle: f64) -> Self {
        ElementSpec {
            kind: ElementKind::PhaseShifter,
            ports: vec![port],
            angle: Some(angle),
        }
    }

    /// Checks port count, port range `1..=spatial_modes`, and the angle.
    pub fn validate(&self, spatial_modes: usize) -> Result<()> {
        let want = self.kind.port_count();
        if self.ports.len() != want {
            return invalid(format!(
                "{} takes {want} port(s), got {}",
                self.kind.name(),
                self.ports.len()
            ));
        }
        if let Some(&p) = self.ports.iter().find(|&&p| p == 0 || p > spatial_modes) {
            return invalid(format!(
                "port {p} outside spatial modes 1..={spatial_modes}"
            ));
        }
        if want == 2 && self.ports[0] == self.ports[1] {
            return invalid(format!("{} ports must be distinct", self.kind.name()));
        }
        match (self.kind.is_parameterized(), self.angle) {
            (true, None) => invalid(format!("{} needs an angle", self.kind.name())),
            (true, Some(a)) if !a.is_finite() => invalid("angle must be finite"),
            (false, Some(_)) => invalid(format!("{} takes no angle", self.kind.name())),
            _ => Ok(()),
        }
    }

    pub fn matrix(&self) -> Result<ModeUnitary> {
        self.matrix_with(PnpSigns::Calibrated)
    }

    pub fn matrix_with(&self, signs: PnpSigns) -> Result<ModeUnitary> {
        self.validate(usize::MAX)?;
        let angle = self.angle.unwrap_or(0.0);
        match self.kind {
            ElementKind::PpBs => pp_bs_matrix(self.ports[0], self.ports[1]),
            ElementKind::PnpBs => pnp_bs_matrix_with(self.ports[0], self.ports[1], signs),
            ElementKind::PolRotator => pol_rotator_matrix(self.ports[0], angle),
            ElementKind::PhaseShifter => phase_shifter_matrix(self.ports[0], angle),
        }
    }
}

impl fmt::Display for ElementSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.kind.name())?;
        for (k, p) in self.ports.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        if let Some(a) = self.angle {
            write!(f, ";{a}")?;
        }
        f.write_str(")")
    }
}

/// Ordered element list on `spatial_mode_count` spatial modes; the first
/// element acts first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSpec {
    #[serde(rename = "modes")]
    pub spatial_mode_count: usize,
    pub elements: Vec<ElementSpec>,
}

impl CircuitSpec {
    pub fn new(spatial_mode_count: usize, elements: Vec<ElementSpec>) -> Self {
        CircuitSpec {
            spatial_mode_count,
            elements,
        }
    }

    pub fn empty(spatial_mode_count: usize) -> Self {
        Self::new(spatial_mode_count, Vec::new())
    }

    pub fn validate(&self) -> Result<()> {
        if self.spatial_mode_count == 0 {
            return invalid("circuit needs at least one spatial mode");
        }
        for (index, element) in self.elements.iter().enumerate() {
            element.validate(self.spatial_mode_count).map_err(|e| match e {
                Error::InvalidInput(msg) => Error::InvalidInput(format!("element {index}: {msg}")),
                other => other,
            })?;
        }
        Ok(())
    }

    /// All mode labels of the circuit in canonical order.
    pub fn mode_labels(&self) -> Vec<ModeLabel> {
        ModeLabel::all(self.spatial_mode_count)
    }
}

impl fmt::Display for CircuitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} modes:", self.spatial_mode_count)?;
        for e in &self.elements {
            write!(f, " {e}")?;
        }
        f.write_str("]")
    }
}

/// Product of the embedded element matrices, over every mode of the circuit.
pub fn compose_circuit(spec: &CircuitSpec) -> Result<ModeUnitary> {
    compose_circuit_with(spec, PnpSigns::Calibrated)
}

pub fn compose_circuit_with(spec: &CircuitSpec, signs: PnpSigns) -> Result<ModeUnitary> {
    spec.validate()?;
    let labels = spec.mode_labels();
    let mut total = ModeUnitary::identity(labels.clone());
    for element in &spec.elements {
        let m = element.matrix_with(signs)?.embed(&labels)?;
        total.matrix = &m.matrix * &total.matrix;
    }
    Ok(total)
}
