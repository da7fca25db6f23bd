//! Pure bosonic states of fixed photon number over polarization/spatial modes.
//!
//! A basis ket is an [`OccupationVector`]: photon counts per [`ModeLabel`].
//! The amplitude stored for an occupation vector `n` is the coefficient of the
//! normalized Fock ket `|n> = prod_m (a_m^dag)^{n_m} / sqrt(n_m!) |0>`.
//! Because occupation vectors only record counts, `|HV>_11` and `|VH>_11`
//! are literally the same key and there is no way to build an ordered
//! two-photon product inside one spatial mode.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Amplitudes with smaller magnitude are dropped from a state.
pub const PRUNE_TOL: f64 = 1e-12;

/// Tolerance on the norm of a normalized state.
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::H, Polarization::V];

    pub fn index(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::H => "H",
            Polarization::V => "V",
        })
    }
}

/// One optical mode: a 1-based spatial index and a polarization.
///
/// Ordering is spatial-major with `H` before `V`, so `1H < 1V < 2H < ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel {
    pub spatial: usize,
    pub polarization: Polarization,
}

impl ModeLabel {
    /// Panics if `spatial` is zero; spatial indices are 1-based.
    pub fn new(spatial: usize, polarization: Polarization) -> Self {
        assert!(spatial >= 1, "spatial mode indices are 1-based");
        ModeLabel {
            spatial,
            polarization,
        }
    }

    pub fn h(spatial: usize) -> Self {
        Self::new(spatial, Polarization::H)
    }

    pub fn v(spatial: usize) -> Self {
        Self::new(spatial, Polarization::V)
    }

    /// Position of this label in the canonical ordering of `1..=spatial_modes`.
    pub fn dense_index(self) -> usize {
        2 * (self.spatial - 1) + self.polarization.index()
    }

    pub fn from_dense_index(index: usize) -> Self {
        let polarization = if index.is_multiple_of(2) {
            Polarization::H
        } else {
            Polarization::V
        };
        ModeLabel::new(index / 2 + 1, polarization)
    }

    /// All labels on spatial modes `1..=spatial_modes`, in canonical order.
    pub fn all(spatial_modes: usize) -> Vec<ModeLabel> {
        (0..2 * spatial_modes).map(Self::from_dense_index).collect()
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.spatial, self.polarization)
    }
}

impl FromStr for ModeLabel {
    type Err = Error;

    /// Parses labels such as `1H`, `2v` or `3x` (`x` is `H`, `y` is `V`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some(last) = s.chars().last() else {
            return invalid("empty mode label");
        };
        let polarization = match last.to_ascii_uppercase() {
            'H' | 'X' => Polarization::H,
            'V' | 'Y' => Polarization::V,
            _ => return invalid(format!("mode label `{s}` must end in H or V")),
        };
        let digits = &s[..s.len() - last.len_utf8()];
        match digits.parse::<usize>() {
            Ok(spatial) if spatial >= 1 => Ok(ModeLabel::new(spatial, polarization)),
            _ => invalid(format!("mode label `{s}` needs a spatial index >= 1")),
        }
    }
}

impl Serialize for ModeLabel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ModeLabel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Photon counts per mode, zero entries omitted.
///
/// Serialized as the multiset of occupied labels, e.g. `["1H", "1H"]` for two
/// horizontally polarized photons in spatial mode 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<ModeLabel>", from = "Vec<ModeLabel>")]
pub struct OccupationVector {
    counts: BTreeMap<ModeLabel, u32>,
}

impl OccupationVector {
    /// The occupation vector of the creation monomial `prod a^dag_label`.
    /// Repeated labels add up; label order is irrelevant.
    pub fn from_labels<I: IntoIterator<Item = ModeLabel>>(labels: I) -> Self {
        let mut counts = BTreeMap::new();
        for label in labels {
            *counts.entry(label).or_insert(0) += 1;
        }
        OccupationVector { counts }
    }

    pub fn from_counts<I: IntoIterator<Item = (ModeLabel, u32)>>(counts: I) -> Self {
        let mut out = BTreeMap::new();
        for (label, n) in counts {
            if n > 0 {
                *out.entry(label).or_insert(0) += n;
            }
        }
        OccupationVector { counts: out }
    }

    pub fn count(&self, label: ModeLabel) -> u32 {
        self.counts.get(&label).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeLabel, u32)> + '_ {
        self.counts.iter().map(|(&l, &n)| (l, n))
    }

    pub fn photon_count(&self) -> u32 {
        self.counts.values().sum()
    }

    /// Occupied labels with multiplicity, in canonical order.
    pub fn labels(&self) -> Vec<ModeLabel> {
        self.counts
            .iter()
            .flat_map(|(&l, &n)| std::iter::repeat_n(l, n as usize))
            .collect()
    }

    pub fn spatial_modes(&self) -> BTreeSet<usize> {
        self.counts.keys().map(|l| l.spatial).collect()
    }

    pub fn max_spatial_mode(&self) -> usize {
        self.counts.keys().map(|l| l.spatial).max().unwrap_or(0)
    }

    /// `prod_m n_m!`
    pub fn factorial_product(&self) -> f64 {
        self.counts
            .values()
            .map(|&n| (1..=n).map(f64::from).product::<f64>())
            .product()
    }
}

impl From<OccupationVector> for Vec<ModeLabel> {
    fn from(occ: OccupationVector) -> Self {
        occ.labels()
    }
}

impl From<Vec<ModeLabel>> for OccupationVector {
    fn from(labels: Vec<ModeLabel>) -> Self {
        OccupationVector::from_labels(labels)
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for (i, (label, n)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if n == 1 {
                write!(f, "{label}")?;
            } else {
                write!(f, "{n}x{label}")?;
            }
        }
        f.write_str(">")
    }
}

/// A pure state of `photon_number` photons as a sparse amplitude table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "StateRepr", try_from = "StateRepr")]
pub struct PhotonicState {
    photon_number: u32,
    terms: BTreeMap<OccupationVector, Complex64>,
}

impl PhotonicState {
    /// Sums repeated occupation vectors and prunes amplitudes below
    /// [`PRUNE_TOL`]. The result may be the zero vector; use
    /// [`PhotonicState::normalize`] to get a physical state.
    pub fn from_terms<I>(photon_number: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (OccupationVector, Complex64)>,
    {
        if photon_number == 0 {
            return invalid("photon number must be positive");
        }
        let mut acc: BTreeMap<OccupationVector, Complex64> = BTreeMap::new();
        for (occ, amp) in terms {
            if occ.photon_count() != photon_number {
                return invalid(format!(
                    "term {occ} has {} photons, expected {photon_number}",
                    occ.photon_count()
                ));
            }
            if !(amp.re.is_finite() && amp.im.is_finite()) {
                return invalid(format!("non-finite amplitude on {occ}"));
            }
            *acc.entry(occ).or_default() += amp;
        }
        Ok(Self::pruned(photon_number, acc))
    }

    /// State `sum_k c_k prod_{l in monomial_k} a^dag_l |0>`, given as
    /// creation-operator monomials. A monomial with occupation `m` contributes
    /// `c_k sqrt(prod m!)` to the Fock amplitude of `|m>`.
    pub fn from_monomials<I, L>(photon_number: u32, monomials: I) -> Result<Self>
    where
        I: IntoIterator<Item = (L, Complex64)>,
        L: IntoIterator<Item = ModeLabel>,
    {
        Self::from_terms(
            photon_number,
            monomials.into_iter().map(|(labels, c)| {
                let occ = OccupationVector::from_labels(labels);
                let f = occ.factorial_product().sqrt();
                (occ, c * f)
            }),
        )
    }

    /// Moves every photon on spatial mode `from` to spatial mode `to`,
    /// keeping polarization.
    pub fn relabel_spatial(&self, from: usize, to: usize) -> Result<Self> {
        if to == 0 {
            return invalid("spatial mode indices are 1-based");
        }
        Self::from_terms(
            self.photon_number,
            self.terms.iter().map(|(occ, &a)| {
                let moved = OccupationVector::from_counts(occ.iter().map(|(l, n)| {
                    if l.spatial == from {
                        (ModeLabel::new(to, l.polarization), n)
                    } else {
                        (l, n)
                    }
                }));
                (moved, a)
            }),
        )
    }

    /// Single basis ket with amplitude one.
    pub fn basis(occupation: OccupationVector) -> Result<Self> {
        let n = occupation.photon_count();
        Self::from_terms(n, [(occupation, Complex64::new(1.0, 0.0))])
    }

    pub(crate) fn pruned(
        photon_number: u32,
        mut terms: BTreeMap<OccupationVector, Complex64>,
    ) -> Self {
        terms.retain(|_, amp| amp.norm() >= PRUNE_TOL);
        PhotonicState {
            photon_number,
            terms,
        }
    }

    pub fn photon_number(&self) -> u32 {
        self.photon_number
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OccupationVector, Complex64)> + '_ {
        self.terms.iter().map(|(o, &a)| (o, a))
    }

    pub fn amplitude(&self, occupation: &OccupationVector) -> Complex64 {
        self.terms.get(occupation).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn spatial_modes(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|o| o.spatial_modes()).collect()
    }

    pub fn max_spatial_mode(&self) -> usize {
        self.terms
            .keys()
            .map(OccupationVector::max_spatial_mode)
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let terms = self.terms.iter().map(|(o, &a)| (o.clone(), a * factor)).collect();
        Self::pruned(self.photon_number, terms)
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Result<Self> {
        if self.photon_number != other.photon_number {
            return invalid("cannot superpose states of different photon number");
        }
        let mut acc: BTreeMap<OccupationVector, Complex64> = BTreeMap::new();
        for (o, &a) in &self.terms {
            *acc.entry(o.clone()).or_default() += alpha * a;
        }
        for (o, &a) in &other.terms {
            *acc.entry(o.clone()).or_default() += beta * a;
        }
        Ok(Self::pruned(self.photon_number, acc))
    }

    /// Keeps only the terms accepted by `keep`; the result is not renormalized.
    pub fn project<F: Fn(&OccupationVector) -> bool>(&self, keep: F) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(o, _)| keep(o))
            .map(|(o, &a)| (o.clone(), a))
            .collect();
        PhotonicState {
            photon_number: self.photon_number,
            terms,
        }
    }

    /// Same ray with unit norm.
    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if norm < PRUNE_TOL {
            return Err(Error::DegenerateState(
                "state has zero norm (all terms cancelled)".into(),
            ));
        }
        Ok(self.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    /// Elementwise comparison with absolute tolerance on amplitudes.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.photon_number == other.photon_number && self.max_abs_diff(other) <= tol
    }

    /// Largest absolute amplitude difference over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let keys: BTreeSet<&OccupationVector> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .map(|k| (self.amplitude(k) - other.amplitude(k)).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for PhotonicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (occ, amp)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:.6}{:+.6}i){}", amp.re, amp.im, occ)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    modes: OccupationVector,
    amplitude: Complex64,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    photons: u32,
    terms: Vec<TermRepr>,
}

impl From<PhotonicState> for StateRepr {
    fn from(s: PhotonicState) -> Self {
        StateRepr {
            photons: s.photon_number,
            terms: s
                .terms
                .into_iter()
                .map(|(modes, amplitude)| TermRepr { modes, amplitude })
                .collect(),
        }
    }
}

impl TryFrom<StateRepr> for PhotonicState {
    type Error = Error;

    fn try_from(r: StateRepr) -> Result<Self> {
        PhotonicState::from_terms(r.photons, r.terms.into_iter().map(|t| (t.modes, t.amplitude)))
    }
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner_product(a: &PhotonicState, b: &PhotonicState) -> Result<Complex64> {
    if a.photon_number != b.photon_number {
        return invalid(format!(
            "inner product of {}-photon and {}-photon states",
            a.photon_number, b.photon_number
        ));
    }
    let (small, large, swap) = if a.terms.len() <= b.terms.len() {
        (a, b, false)
    } else {
        (b, a, true)
    };
    let mut acc = Complex64::default();
    for (occ, &x) in &small.terms {
        if let Some(&y) = large.terms.get(occ) {
            acc += if swap { y.conj() * x } else { x.conj() * y };
        }
    }
    Ok(acc)
}

/// The four polarization Bell states, in fixed iteration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BellKind {
    #[serde(rename = "psi-")]
    PsiMinus,
    #[serde(rename = "psi+")]
    PsiPlus,
    #[serde(rename = "phi-")]
    PhiMinus,
    #[serde(rename = "phi+")]
    PhiPlus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PsiMinus,
        BellKind::PsiPlus,
        BellKind::PhiMinus,
        BellKind::PhiPlus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// ASCII selector used on the command line and in JSON.
    pub fn selector(self) -> &'static str {
        match self {
            BellKind::PsiMinus => "psi-",
            BellKind::PsiPlus => "psi+",
            BellKind::PhiMinus => "phi-",
            BellKind::PhiPlus => "phi+",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BellKind::PsiMinus => "Ψ⁻",
            BellKind::PsiPlus => "Ψ⁺",
            BellKind::PhiMinus => "Φ⁻",
            BellKind::PhiPlus => "Φ⁺",
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for BellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BellKind::ALL
            .into_iter()
            .find(|k| k.selector() == s)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown Bell state `{s}` (expected psi-, psi+, phi-, phi+)"
                ))
            })
    }
}

/// Two-photon polarization Bell state across spatial modes `a` and `b`:
///
/// * `Ψ± = (|H>_a|V>_b ± |V>_a|H>_b)/√2`
/// * `Φ± = (|H>_a|H>_b ± |V>_a|V>_b)/√2`
pub fn bell_state(kind: BellKind, spatial_a: usize, spatial_b: usize) -> Result<PhotonicState> {
    if spatial_a == spatial_b {
        return invalid(format!(
            "Bell state needs two distinct spatial modes, got {spatial_a} twice"
        ));
    }
    if spatial_a == 0 || spatial_b == 0 {
        return invalid("spatial mode indices are 1-based");
    }
    let (first, second, sign) = match kind {
        BellKind::PsiMinus => (Polarization::H, Polarization::V, -1.0),
        BellKind::PsiPlus => (Polarization::H, Polarization::V, 1.0),
        BellKind::PhiMinus => (Polarization::H, Polarization::H, -1.0),
        BellKind::PhiPlus => (Polarization::H, Polarization::H, 1.0),
    };
    let flip = |p: Polarization| match p {
        Polarization::H => Polarization::V,
        Polarization::V => Polarization::H,
    };
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    let t1 = OccupationVector::from_labels([
        ModeLabel::new(spatial_a, first),
        ModeLabel::new(spatial_b, second),
    ]);
    let t2 = OccupationVector::from_labels([
        ModeLabel::new(spatial_a, flip(first)),
        ModeLabel::new(spatial_b, flip(second)),
    ]);
    PhotonicState::from_terms(
        2,
        [
            (t1, Complex64::new(amp, 0.0)),
            (t2, Complex64::new(sign * amp, 0.0)),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn psi_minus_amplitudes() {
        let s = bell_state(BellKind::PsiMinus, 1, 2).unwrap();
        assert_eq!(s.len(), 2);
        let hv = OccupationVector::from_labels([ModeLabel::h(1), ModeLabel::v(2)]);
        let vh = OccupationVector::from_labels([ModeLabel::v(1), ModeLabel::h(2)]);
        assert!((s.amplitude(&hv) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((s.amplitude(&vh) - c(-FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn phi_plus_amplitudes() {
        let s = bell_state(BellKind::PhiPlus, 1, 2).unwrap();
        let hh = OccupationVector::from_labels([ModeLabel::h(1), ModeLabel::h(2)]);
        let vv = OccupationVector::from_labels([ModeLabel::v(1), ModeLabel::v(2)]);
        assert_eq!(s.len(), 2);
        assert!((s.amplitude(&hh) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((s.amplitude(&vv) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn bell_states_normalized_and_orthonormal() {
        for a in BellKind::ALL {
            let sa = bell_state(a, 1, 2).unwrap();
            assert!((sa.norm() - 1.0).abs() < 1e-12);
            for b in BellKind::ALL {
                let sb = bell_state(b, 1, 2).unwrap();
                let ip = inner_product(&sa, &sb).unwrap();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip - c(want)).norm() < 1e-12, "<{a}|{b}> = {ip}");
            }
        }
    }

    #[test]
    fn bell_state_rejects_equal_modes() {
        assert!(matches!(
            bell_state(BellKind::PsiPlus, 2, 2),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn inner_product_rejects_photon_mismatch() {
        let one = PhotonicState::basis(OccupationVector::from_labels([ModeLabel::h(1)])).unwrap();
        let two = bell_state(BellKind::PhiMinus, 1, 2).unwrap();
        assert!(matches!(inner_product(&one, &two), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn normalize_rescales() {
        let psi = bell_state(BellKind::PsiPlus, 1, 2).unwrap();
        let doubled = psi.scale(c(2.0));
        assert!(doubled.normalize().unwrap().approx_eq(&psi, 1e-12));

        let occ_a = OccupationVector::from_labels([ModeLabel::h(1), ModeLabel::h(2)]);
        let occ_b = OccupationVector::from_labels([ModeLabel::v(1), ModeLabel::v(2)]);
        let s = PhotonicState::from_terms(2, [(occ_a, c(0.6)), (occ_b, c(0.8))]).unwrap();
        assert!(s.normalize().unwrap().approx_eq(&s, 1e-12));
    }

    #[test]
    fn hv_minus_vh_in_one_mode_is_degenerate() {
        // |HV>_11 and |VH>_11 are the same occupation vector.
        let hv = OccupationVector::from_labels([ModeLabel::h(1), ModeLabel::v(1)]);
        let vh = OccupationVector::from_labels([ModeLabel::v(1), ModeLabel::h(1)]);
        assert_eq!(hv, vh);
        let s = PhotonicState::from_terms(2, [(hv, c(1.0)), (vh, c(-1.0))]).unwrap();
        assert!(s.is_zero());
        assert!(matches!(s.normalize(), Err(Error::DegenerateState(_))));
    }

    #[test]
    fn from_terms_rejects_wrong_photon_count() {
        let occ = OccupationVector::from_labels([ModeLabel::h(1)]);
        assert!(PhotonicState::from_terms(2, [(occ, c(1.0))]).is_err());
    }

    #[test]
    fn mode_label_parsing() {
        assert_eq!("1H".parse::<ModeLabel>().unwrap(), ModeLabel::h(1));
        assert_eq!("12y".parse::<ModeLabel>().unwrap(), ModeLabel::v(12));
        assert!("0H".parse::<ModeLabel>().is_err());
        assert!("H".parse::<ModeLabel>().is_err());
        assert!("1Q".parse::<ModeLabel>().is_err());
    }

    #[test]
    fn mode_ordering_is_spatial_major() {
        let mut labels = vec![ModeLabel::v(2), ModeLabel::h(2), ModeLabel::v(1), ModeLabel::h(1)];
        labels.sort();
        assert_eq!(labels, ModeLabel::all(2));
    }

    #[test]
    fn state_json_shape() {
        let s = bell_state(BellKind::PsiMinus, 1, 2).unwrap();
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(json["photons"], 2);
        assert_eq!(json["terms"][0]["modes"], serde_json::json!(["1H", "2V"]));
        let back: PhotonicState = serde_json::from_value(json).unwrap();
        assert_eq!(back, s);
    }

    fn arb_label(modes: usize) -> impl Strategy<Value = ModeLabel> {
        (0..2 * modes).prop_map(ModeLabel::from_dense_index)
    }

    fn arb_terms() -> impl Strategy<Value = Vec<(OccupationVector, Complex64)>> {
        prop::collection::btree_map(
            (arb_label(3), arb_label(3)).prop_map(|(a, b)| OccupationVector::from_labels([a, b])),
            (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im)),
            1..8,
        )
        .prop_map(|m| m.into_iter().collect())
    }

    proptest! {
        #[test]
        fn insertion_order_does_not_matter(terms in arb_terms(), seed in any::<u64>()) {
            let mut shuffled = terms.clone();
            let n = shuffled.len();
            shuffled.rotate_left((seed as usize) % n);
            shuffled.reverse();
            let a = PhotonicState::from_terms(2, terms).unwrap();
            let b = PhotonicState::from_terms(2, shuffled).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn self_inner_product_is_norm(terms in arb_terms()) {
            let s = PhotonicState::from_terms(2, terms).unwrap();
            let ip = inner_product(&s, &s).unwrap();
            prop_assert!(ip.im.abs() < 1e-12);
            prop_assert!((ip.re - s.norm_sqr()).abs() < 1e-12);
            prop_assert!(ip.re >= 0.0);
            if let Ok(n) = s.normalize() {
                let ip = inner_product(&n, &n).unwrap();
                prop_assert!((ip.re - 1.0).abs() < 1e-12);
            }
        }
    }
}
