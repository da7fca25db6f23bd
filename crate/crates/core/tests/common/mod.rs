//! Test-only oracles for two-photon evolution.
//!
//! * [`exact_evolve`] multiplies out creation-operator products element by
//!   element in exact `Q(√2, i)` arithmetic, using its own transcription of the
//!   element substitution rules.
//! * [`permanent_evolve`] uses the boson-sampling formula
//!   `<m|U|n> = perm(U[m, n]) / sqrt(prod n! prod m!)` in floating point.
//!
//! Neither calls into the crate's evolution code.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use belldisc_core::{ElementSpec, ModeLabel, OccupationVector, PhotonicState, Polarization};
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use rand::Rng;

/// `a + b √2` with rational `a`, `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Surd {
    a: Rational64,
    b: Rational64,
}

impl Surd {
    pub fn int(n: i64) -> Self {
        Surd { a: Rational64::from_integer(n), b: Rational64::from_integer(0) }
    }
    pub fn zero() -> Self {
        Self::int(0)
    }
    /// `1/√2 = √2/2`
    pub fn inv_sqrt2() -> Self {
        Surd { a: Rational64::from_integer(0), b: Rational64::new(1, 2) }
    }
    pub fn sqrt2() -> Self {
        Surd { a: Rational64::from_integer(0), b: Rational64::from_integer(1) }
    }
    pub fn to_f64(self) -> f64 {
        let f = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
        f(self.a) + f(self.b) * std::f64::consts::SQRT_2
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, o: Surd) -> Surd {
        Surd { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, o: Surd) -> Surd {
        Surd { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { a: -self.a, b: -self.b }
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, o: Surd) -> Surd {
        let two = Rational64::from_integer(2);
        Surd {
            a: self.a * o.a + two * self.b * o.b,
            b: self.a * o.b + self.b * o.a,
        }
    }
}

/// Complex number with [`Surd`] parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exact {
    re: Surd,
    im: Surd,
}

impl Exact {
    pub fn new(re: Surd, im: Surd) -> Self {
        Exact { re, im }
    }
    pub fn real(re: Surd) -> Self {
        Exact { re, im: Surd::zero() }
    }
    pub fn zero() -> Self {
        Self::real(Surd::zero())
    }
    pub fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(self, o: Exact) -> Exact {
        Exact { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Mul for Exact {
    type Output = Exact;
    fn mul(self, o: Exact) -> Exact {
        Exact {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

/// `(spatial, polarization)` with `0 = H`, `1 = V`.
pub type Label = (usize, u8);

/// Elements whose matrices are exact in `Q(√2, i)`.
#[derive(Debug, Clone, Copy)]
pub enum ExactElement {
    Pp(usize, usize),
    Pnp(usize, usize),
    /// Polarization rotation by `k π/4`.
    Rotator(usize, i64),
    /// Phase `e^{i k π/2}`.
    Phase(usize, i64),
}

impl ExactElement {
    pub fn spec(self) -> ElementSpec {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
        match self {
            ExactElement::Pp(i, j) => ElementSpec::ppbs(i, j),
            ExactElement::Pnp(i, j) => ElementSpec::pnpbs(i, j),
            ExactElement::Rotator(p, k) => ElementSpec::rotator(p, k as f64 * FRAC_PI_4),
            ExactElement::Phase(p, k) => ElementSpec::phase(p, k as f64 * FRAC_PI_2),
        }
    }

    /// Substitution table: input label -> sum of (output label, coefficient).
    fn substitution(self, input: Label) -> Vec<(Label, Exact)> {
        let r = Surd::inv_sqrt2();
        let one = Surd::int(1);
        let re = Exact::real;
        match self {
            ExactElement::Pp(i, j) | ExactElement::Pnp(i, j) => {
                let (s, pol) = input;
                if s != i && s != j {
                    return vec![(input, re(one))];
                }
                let pnp_v = matches!(self, ExactElement::Pnp(..)) && pol == 1;
                // PP (and PNP on H): a_i -> (b_i - b_j)/√2, a_j -> (b_i + b_j)/√2
                // PNP on V:          a_i -> (b_i + b_j)/√2, a_j -> (-b_i + b_j)/√2
                let (ci, cj) = match (s == i, pnp_v) {
                    (true, false) => (r, -r),
                    (false, false) => (r, r),
                    (true, true) => (r, r),
                    (false, true) => (-r, r),
                };
                vec![((i, pol), re(ci)), ((j, pol), re(cj))]
            }
            ExactElement::Rotator(p, k) => {
                let (s, pol) = input;
                if s != p {
                    return vec![(input, re(one))];
                }
                let z = Surd::zero();
                let cos = [one, r, z, -r, -one, -r, z, r];
                let sin = [z, r, one, r, z, -r, -one, -r];
                let k = k.rem_euclid(8) as usize;
                let (c, sn) = (cos[k], sin[k]);
                // H -> cos H + sin V ; V -> -sin H + cos V
                if pol == 0 {
                    vec![((p, 0), re(c)), ((p, 1), re(sn))]
                } else {
                    vec![((p, 0), re(-sn)), ((p, 1), re(c))]
                }
            }
            ExactElement::Phase(p, k) => {
                let (s, _) = input;
                if s != p {
                    return vec![(input, re(one))];
                }
                let z = Surd::zero();
                let phase = match k.rem_euclid(4) {
                    0 => Exact::new(one, z),
                    1 => Exact::new(z, one),
                    2 => Exact::new(-one, z),
                    _ => Exact::new(z, -one),
                };
                vec![(input, phase)]
            }
        }
    }
}

/// A two-photon state written as a polynomial in creation operators:
/// sorted label pair -> coefficient.
pub type Polynomial = BTreeMap<Vec<Label>, Exact>;

/// Fock amplitudes (counts <= 2) to creation-operator coefficients.
pub fn to_polynomial(fock: &[(Vec<Label>, Exact)]) -> Polynomial {
    let mut poly = Polynomial::new();
    for (labels, amp) in fock {
        let mut labels = labels.clone();
        labels.sort();
        let doubled = labels.windows(2).any(|w| w[0] == w[1]);
        // |2_m> = a^dag^2 / √2 |0>
        let coeff = if doubled { *amp * Exact::real(Surd::inv_sqrt2()) } else { *amp };
        let e = poly.entry(labels).or_insert_with(Exact::zero);
        *e = *e + coeff;
    }
    poly
}

pub fn substitute(poly: &Polynomial, element: ExactElement) -> Polynomial {
    let mut out = Polynomial::new();
    for (labels, coeff) in poly {
        let mut partial: Vec<(Vec<Label>, Exact)> = vec![(Vec::new(), *coeff)];
        for &l in labels {
            let mut next = Vec::new();
            for (chosen, c) in &partial {
                for (o, u) in element.substitution(l) {
                    let mut ch = chosen.clone();
                    ch.push(o);
                    next.push((ch, *c * u));
                }
            }
            partial = next;
        }
        for (mut ch, c) in partial {
            ch.sort();
            let e = out.entry(ch).or_insert_with(Exact::zero);
            *e = *e + c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Fock amplitudes of a creation-operator polynomial.
pub fn to_fock(poly: &Polynomial) -> Vec<(Vec<Label>, Exact)> {
    poly.iter()
        .map(|(labels, c)| {
            let doubled = labels.windows(2).any(|w| w[0] == w[1]);
            let amp = if doubled { *c * Exact::real(Surd::sqrt2()) } else { *c };
            (labels.clone(), amp)
        })
        .filter(|(_, a)| !a.is_zero())
        .collect()
}

pub fn exact_evolve(fock: &[(Vec<Label>, Exact)], circuit: &[ExactElement]) -> Vec<(Vec<Label>, Exact)> {
    let poly = circuit.iter().fold(to_polynomial(fock), |p, &e| substitute(&p, e));
    to_fock(&poly)
}

pub fn mode_label(l: Label) -> ModeLabel {
    ModeLabel::new(l.0, if l.1 == 0 { Polarization::H } else { Polarization::V })
}

pub fn to_state(fock: &[(Vec<Label>, Exact)]) -> PhotonicState {
    PhotonicState::from_terms(
        2,
        fock.iter().map(|(labels, a)| {
            (OccupationVector::from_labels(labels.iter().map(|&l| mode_label(l))), a.to_complex())
        }),
    )
    .unwrap()
}

fn small_surd<R: Rng>(rng: &mut R) -> Surd {
    Surd {
        a: Rational64::new(rng.random_range(-4..=4), rng.random_range(1..=4)),
        b: Rational64::new(rng.random_range(-2..=2), rng.random_range(1..=3)),
    }
}

pub fn random_label<R: Rng>(rng: &mut R, modes: usize) -> Label {
    (rng.random_range(1..=modes), rng.random_range(0..=1))
}

/// Up to four two-photon terms with small exact amplitudes (not normalized).
pub fn random_exact_state<R: Rng>(rng: &mut R, modes: usize) -> Vec<(Vec<Label>, Exact)> {
    let n = rng.random_range(1..=4);
    (0..n)
        .map(|_| {
            let labels = vec![random_label(rng, modes), random_label(rng, modes)];
            (labels, Exact::new(small_surd(rng), small_surd(rng)))
        })
        .collect()
}

pub fn random_exact_element<R: Rng>(rng: &mut R, modes: usize) -> ExactElement {
    let i = rng.random_range(1..=modes);
    let mut j = rng.random_range(1..modes);
    if j >= i {
        j += 1;
    }
    match rng.random_range(0..4) {
        0 => ExactElement::Pp(i, j),
        1 => ExactElement::Pnp(i, j),
        2 => ExactElement::Rotator(i, rng.random_range(-8..8)),
        _ => ExactElement::Phase(i, rng.random_range(-4..4)),
    }
}

/// Any element with a uniformly drawn angle.
pub fn random_element<R: Rng>(rng: &mut R, modes: usize) -> ElementSpec {
    let i = rng.random_range(1..=modes);
    let mut j = rng.random_range(1..modes);
    if j >= i {
        j += 1;
    }
    let angle = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    match rng.random_range(0..4) {
        0 => ElementSpec::ppbs(i, j),
        1 => ElementSpec::pnpbs(i, j),
        2 => ElementSpec::rotator(i, angle),
        _ => ElementSpec::phase(i, angle),
    }
}

/// Random normalized two-photon state with complex amplitudes.
pub fn random_state<R: Rng>(rng: &mut R, modes: usize) -> PhotonicState {
    loop {
        let n = rng.random_range(1..=6);
        let terms = (0..n).map(|_| {
            let occ = OccupationVector::from_labels([
                mode_label(random_label(rng, modes)),
                mode_label(random_label(rng, modes)),
            ]);
            (occ, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        });
        if let Ok(s) = PhotonicState::from_terms(2, terms.collect::<Vec<_>>()).unwrap().normalize() {
            return s;
        }
    }
}

/// Gram-Schmidt on a random complex matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, dim: usize) -> DMatrix<Complex64> {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        for _ in 0..2 {
            for c in &cols {
                let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in v.iter_mut().zip(c) {
                    *x -= proj * a;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    DMatrix::from_fn(dim, dim, |r, c| cols[c][r])
}

pub fn permanent(m: &[Vec<Complex64>]) -> Complex64 {
    fn go(m: &[Vec<Complex64>], row: usize, used: &mut Vec<bool>) -> Complex64 {
        if row == m.len() {
            return Complex64::new(1.0, 0.0);
        }
        let mut acc = Complex64::default();
        for col in 0..m.len() {
            if !used[col] {
                used[col] = true;
                acc += m[row][col] * go(m, row + 1, used);
                used[col] = false;
            }
        }
        acc
    }
    go(m, 0, &mut vec![false; m.len()])
}

/// All two-photon occupation vectors over `labels`.
pub fn two_photon_basis(labels: &[ModeLabel]) -> Vec<OccupationVector> {
    let mut out = Vec::new();
    for a in 0..labels.len() {
        for b in a..labels.len() {
            out.push(OccupationVector::from_labels([labels[a], labels[b]]));
        }
    }
    out
}

/// Evolution through `u` (indexed by `ModeLabel::dense_index`) via permanents.
pub fn permanent_evolve(state: &PhotonicState, u: &DMatrix<Complex64>, modes: usize) -> PhotonicState {
    let labels = ModeLabel::all(modes);
    let mut terms = Vec::new();
    for out in two_photon_basis(&labels) {
        let outs = out.labels();
        let mut amp = Complex64::default();
        for (inp, a) in state.terms() {
            let ins = inp.labels();
            let sub: Vec<Vec<Complex64>> = outs
                .iter()
                .map(|o| ins.iter().map(|i| u[(o.dense_index(), i.dense_index())]).collect())
                .collect();
            let norm = (inp.factorial_product() * out.factorial_product()).sqrt();
            amp += a * permanent(&sub) / norm;
        }
        terms.push((out, amp));
    }
    PhotonicState::from_terms(2, terms).unwrap()
}

/// Outcome of a randomized property run.
#[derive(Debug, Clone, Copy, Default)]
pub struct Tally {
    pub cases: usize,
    pub failures: usize,
    pub worst: f64,
}

impl Tally {
    pub fn record(&mut self, deviation: f64, tol: f64) {
        self.cases += 1;
        self.worst = self.worst.max(deviation);
        if deviation.is_nan() || deviation > tol {
            self.failures += 1;
        }
    }
}

fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// `evolve_circuit` against the exact polynomial expansion.
pub fn exact_oracle_run(seed: u64, cases: usize) -> Tally {
    use belldisc_core::{evolve_circuit, CircuitSpec};
    let mut rng = seeded(seed);
    let mut tally = Tally::default();
    for _ in 0..cases {
        let modes = rng.random_range(2..=4);
        let depth = rng.random_range(1..=5);
        let circuit: Vec<ExactElement> = (0..depth).map(|_| random_exact_element(&mut rng, modes)).collect();
        let input = random_exact_state(&mut rng, modes);
        let want = to_state(&exact_evolve(&input, &circuit));
        let spec = CircuitSpec::new(modes, circuit.iter().map(|e| e.spec()).collect());
        let got = evolve_circuit(&to_state(&input), &spec).unwrap();
        tally.record(got.max_abs_diff(&want), 1e-12);
    }
    tally
}

/// `apply_unitary` against the permanent formula on random unitaries.
pub fn permanent_oracle_run(seed: u64, cases: usize) -> Tally {
    use belldisc_core::{apply_unitary, ModeUnitary};
    let mut rng = seeded(seed);
    let mut tally = Tally::default();
    for _ in 0..cases {
        let modes = rng.random_range(2..=3);
        let m = random_unitary(&mut rng, 2 * modes);
        let u = ModeUnitary::new(ModeLabel::all(modes), m.clone()).unwrap();
        let s = random_state(&mut rng, modes);
        let got = apply_unitary(&s, &u).unwrap();
        let want = permanent_evolve(&s, &m, modes);
        tally.record(got.max_abs_diff(&want), 1e-12);
    }
    tally
}

/// `| ||U s|| - ||s|| |` over random circuits and states.
pub fn norm_preservation_run(seed: u64, cases: usize) -> Tally {
    use belldisc_core::{apply_unitary, evolve_circuit, CircuitSpec, ModeUnitary};
    let mut rng = seeded(seed);
    let mut tally = Tally::default();
    for k in 0..cases {
        let modes = rng.random_range(2..=4);
        let s = random_state(&mut rng, modes);
        let out = if k % 2 == 0 {
            let depth = rng.random_range(0..=6);
            let spec = CircuitSpec::new(modes, (0..depth).map(|_| random_element(&mut rng, modes)).collect());
            evolve_circuit(&s, &spec).unwrap()
        } else {
            let u = ModeUnitary::new(ModeLabel::all(modes), random_unitary(&mut rng, 2 * modes)).unwrap();
            apply_unitary(&s, &u).unwrap()
        };
        tally.record((out.norm() - s.norm()).abs(), 1e-12);
    }
    tally
}

/// Element-by-element evolution against the composed circuit unitary.
pub fn composition_coherence_run(seed: u64, cases: usize) -> Tally {
    use belldisc_core::{apply_unitary, compose_circuit, evolve_circuit, CircuitSpec};
    let mut rng = seeded(seed);
    let mut tally = Tally::default();
    for _ in 0..cases {
        let modes = rng.random_range(2..=4);
        let depth = rng.random_range(0..=6);
        let spec = CircuitSpec::new(modes, (0..depth).map(|_| random_element(&mut rng, modes)).collect());
        let s = random_state(&mut rng, modes);
        let a = evolve_circuit(&s, &spec).unwrap();
        let b = apply_unitary(&s, &compose_circuit(&spec).unwrap()).unwrap();
        tally.record(a.max_abs_diff(&b), 1e-12);
    }
    tally
}

/// `U^dag U = I` for every element constructor with random ports and angles.
pub fn unitarity_run(seed: u64, cases: usize) -> Tally {
    use belldisc_core::PnpSigns;
    let mut rng = seeded(seed);
    let mut tally = Tally::default();
    for _ in 0..cases {
        let modes = rng.random_range(2..=5);
        let e = random_element(&mut rng, modes);
        for signs in [PnpSigns::Calibrated, PnpSigns::Literal] {
            tally.record(e.matrix_with(signs).unwrap().unitarity_error(), 1e-12);
        }
    }
    tally
}
