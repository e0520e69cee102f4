//! Machine checks of the QCA ↔ coined-walk correspondences.
//!
//! Every check evolves both sides independently (the QCA through
//! [`qca_step`], the walk through [`walk_step`]) and reports the worst
//! deviation of the amplitude and probability identities linking them.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use thiserror::Error;

use crate::amplitudes::{superpose, to_distribution, AmplitudeField, Distribution};
use crate::coined::{
    generalized_blocks_from_qca, plain_blocks, walk_distribution, walk_step, ChiralityOrder,
    CoinBlocks, CoinMatrix, Family, QubitState, WalkError, WalkState,
};
use crate::linalg::{Mat2, WindowMatrix};
use crate::qca::{
    classify, params_from_angles, qca_step, AngleTriple, QcaError, QcaParams, QcaTypeClass,
};
use crate::IDENTITY_TOL;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorrespondenceError {
    #[error("expected a {expected} tuple, found {found}")]
    WrongType {
        expected: QcaTypeClass,
        found: QcaTypeClass,
    },
    #[error("angle {name} = {value} outside [0, 2π)")]
    AngleOutOfRange { name: &'static str, value: f64 },
    #[error(transparent)]
    Qca(#[from] QcaError),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

/// Outcome of one correspondence check.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrespondenceReport {
    pub identity_name: String,
    pub steps_checked: usize,
    pub max_amplitude_error: f64,
    pub max_probability_error: f64,
}

impl CorrespondenceReport {
    fn new(identity_name: &str) -> Self {
        Self {
            identity_name: identity_name.to_string(),
            steps_checked: 0,
            max_amplitude_error: 0.0,
            max_probability_error: 0.0,
        }
    }

    fn record(&mut self, amplitude: f64, probability: f64) {
        self.max_amplitude_error = self.max_amplitude_error.max(amplitude);
        self.max_probability_error = self.max_probability_error.max(probability);
    }

    pub fn max_error(&self) -> f64 {
        self.max_amplitude_error.max(self.max_probability_error)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_error() <= tol
    }
}

/// Chirality of a paired QCA site.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Chirality {
    L,
    R,
}

/// A-type pairs QCA sites `(2k − 1, 2k)` as `(R, L)` of walk site `k`;
/// B-type pairs `(2k, 2k + 1)` as `(L, R)`.
fn walk_site_of(family: Family, qca_site: i64) -> (i64, Chirality) {
    let odd = qca_site.rem_euclid(2) == 1;
    match (family, odd) {
        (Family::A, true) => ((qca_site + 1) / 2, Chirality::R),
        (Family::A, false) => (qca_site / 2, Chirality::L),
        (Family::B, false) => (qca_site / 2, Chirality::L),
        (Family::B, true) => ((qca_site - 1) / 2, Chirality::R),
    }
}

fn qca_site_of(family: Family, walk_site: i64, chirality: Chirality) -> i64 {
    match (family, chirality) {
        (Family::A, Chirality::R) => 2 * walk_site - 1,
        (Family::A, Chirality::L) => 2 * walk_site,
        (Family::B, Chirality::L) => 2 * walk_site,
        (Family::B, Chirality::R) => 2 * walk_site + 1,
    }
}

/// Start sites of the two deltas combined in each family's identity:
/// A-type uses `α η^{(0)} + β η^{(−1)}`, B-type `α η^{(0)} + β η^{(1)}`.
fn paired_start(family: Family) -> i64 {
    match family {
        Family::A => -1,
        Family::B => 1,
    }
}

fn walk_order(family: Family) -> ChiralityOrder {
    match family {
        Family::A => ChiralityOrder::RUpper,
        Family::B => ChiralityOrder::LUpper,
    }
}

/// Reads a superposed QCA field as a walk state through the family's pairing.
pub fn walk_state_from_qca_field(field: &AmplitudeField, family: Family) -> WalkState {
    let mut state = WalkState::empty(walk_order(family));
    for (site, amp) in field.iter() {
        let (k, chirality) = walk_site_of(family, site);
        match chirality {
            Chirality::L => state.add_chiral(k, amp, ZERO),
            Chirality::R => state.add_chiral(k, ZERO, amp),
        }
    }
    state
}

fn compare_walk_to_qca(
    walk: &WalkState,
    own: &AmplitudeField,
    neighbour: &AmplitudeField,
    qubit: &QubitState,
    family: Family,
) -> (f64, f64) {
    let field = superpose(own, neighbour, qubit.alpha(), qubit.beta());
    let x = to_distribution(&field);
    let mut sites: Vec<i64> = field.iter().map(|(s, _)| s).collect();
    for k in walk.sites() {
        sites.push(qca_site_of(family, k, Chirality::L));
        sites.push(qca_site_of(family, k, Chirality::R));
    }
    let mut amp_err = 0.0f64;
    let mut prob_err = 0.0f64;
    for s in sites {
        let (k, chirality) = walk_site_of(family, s);
        let psi = match chirality {
            Chirality::L => walk.left(k),
            Chirality::R => walk.right(k),
        };
        // ψ = α η^{(0)}_s + β η^{(0±1)}_s
        let expected = qubit.alpha() * own.get(s) + qubit.beta() * neighbour.get(s);
        amp_err = amp_err.max((psi - expected).norm());
        prob_err = prob_err.max((psi.norm_sqr() - x.get(s)).abs());
    }
    (amp_err, prob_err)
}

fn verify_generalized(
    params: &QcaParams,
    qubit: &QubitState,
    n_max: usize,
    family: Family,
) -> CorrespondenceReport {
    let name = match family {
        Family::A => "qca<->generalized-A",
        Family::B => "qca<->generalized-B",
    };
    let mut report = CorrespondenceReport::new(name);
    let blocks = generalized_blocks_from_qca(params, family);
    let mut own = AmplitudeField::delta(0);
    let mut neighbour = AmplitudeField::delta(paired_start(family));
    let mut walk = walk_state_from_qca_field(
        &superpose(&own, &neighbour, qubit.alpha(), qubit.beta()),
        family,
    );
    for n in 0..=n_max {
        if n > 0 {
            own = qca_step(&own, params);
            neighbour = qca_step(&neighbour, params);
            walk = walk_step(&walk, &blocks).expect("blocks and state share the family order");
        }
        let (a, p) = compare_walk_to_qca(&walk, &own, &neighbour, qubit, family);
        report.record(a, p);
        report.steps_checked = n;
    }
    report
}

/// QCA ↔ generalized A-type walk, for every step up to `n_max`:
/// `ψ^R_k = β η^{(−1)}_{2k−1} + α η^{(0)}_{2k−1}`,
/// `ψ^L_k = β η^{(−1)}_{2k} + α η^{(0)}_{2k}`, and the matching
/// `x^{(0:−)}` probabilities.
///
/// The walk starts from the state those identities give at `n = 0`.
pub fn verify_a_correspondence(
    params: &QcaParams,
    qubit: &QubitState,
    n_max: usize,
) -> CorrespondenceReport {
    verify_generalized(params, qubit, n_max, Family::A)
}

/// QCA ↔ generalized B-type walk, for every step up to `n_max`:
/// `ψ^L_k = α η^{(0)}_{2k} + β η^{(1)}_{2k}`,
/// `ψ^R_k = α η^{(0)}_{2k+1} + β η^{(1)}_{2k+1}`, and the matching
/// `x^{(0:+)}` probabilities.
pub fn verify_b_correspondence(
    params: &QcaParams,
    qubit: &QubitState,
    n_max: usize,
) -> CorrespondenceReport {
    verify_generalized(params, qubit, n_max, Family::B)
}

/// The plain coin a Type III (A-type) or Type IV (B-type) tuple reduces to:
/// `[[d, c], [c, d]]` for Type III and `[[d, a], [a, d]]` for Type IV.
pub fn reduced_coin(params: &QcaParams, family: Family) -> Result<CoinMatrix, CorrespondenceError> {
    let expected = match family {
        Family::A => QcaTypeClass::TypeIII,
        Family::B => QcaTypeClass::TypeIV,
    };
    let found = classify(params)?;
    if found != expected {
        return Err(CorrespondenceError::WrongType { expected, found });
    }
    let [a, _, c, d] = params.tuple();
    let coin = match family {
        Family::A => CoinMatrix::new(d, c, c, d)?,
        Family::B => CoinMatrix::new(d, a, a, d)?,
    };
    Ok(coin)
}

/// Type III → plain A-type walk and Type IV → plain B-type walk.
///
/// The plain walk (L-upper, qubit at the origin) is compared amplitude by
/// amplitude with the generalized walk, and its position distribution with
/// the QCA distribution summed over each site pair.
pub fn verify_type_reduction(
    params: &QcaParams,
    qubit: &QubitState,
    n_max: usize,
    family: Family,
) -> Result<CorrespondenceReport, CorrespondenceError> {
    let coin = reduced_coin(params, family)?;
    let name = match family {
        Family::A => "typeIII<->plain-A",
        Family::B => "typeIV<->plain-B",
    };
    let mut report = CorrespondenceReport::new(name);
    let plain = plain_blocks(&coin, family);
    let generalized = generalized_blocks_from_qca(params, family);
    debug_assert!(generalized.is_plain());

    let mut plain_state = WalkState::at_origin(qubit, ChiralityOrder::LUpper);
    let mut gen_state = WalkState::at_origin(qubit, generalized.order);
    let mut own = AmplitudeField::delta(0);
    let mut neighbour = AmplitudeField::delta(paired_start(family));
    for n in 0..=n_max {
        if n > 0 {
            plain_state = walk_step(&plain_state, &plain)?;
            gen_state = walk_step(&gen_state, &generalized)?;
            own = qca_step(&own, params);
            neighbour = qca_step(&neighbour, params);
        }
        let gen_l = match gen_state.order() {
            ChiralityOrder::LUpper => gen_state.clone(),
            ChiralityOrder::RUpper => gen_state.reordered(),
        };
        let amp = plain_state.max_abs_diff(&gen_l);

        let x = to_distribution(&superpose(&own, &neighbour, qubit.alpha(), qubit.beta()));
        let paired =
            Distribution::from_entries(x.iter().map(|(s, m)| (walk_site_of(family, s).0, m)));
        let prob = walk_distribution(&plain_state).max_abs_diff(&paired);
        report.record(amp, prob);
        report.steps_checked = n;
    }
    Ok(report)
}

/// Factor coins of a two-step walk whose composite step is one QCA step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoStepFactors {
    pub p1: Mat2,
    pub q1: Mat2,
    pub p2: Mat2,
    pub q2: Mat2,
    pub theta1: f64,
    pub theta2: f64,
    pub family: Family,
}

impl TwoStepFactors {
    /// `U(1) = P(1) + Q(1)`.
    pub fn u1(&self) -> Mat2 {
        self.p1 + self.q1
    }

    /// `U(2) = P(2) + Q(2)`.
    pub fn u2(&self) -> Mat2 {
        self.p2 + self.q2
    }

    /// The first half-step as plain blocks, in the family's generalized order.
    pub fn first_blocks(&self) -> CoinBlocks {
        self.half_step(self.p1, self.q1)
    }

    pub fn second_blocks(&self) -> CoinBlocks {
        self.half_step(self.p2, self.q2)
    }

    fn half_step(&self, p: Mat2, q: Mat2) -> CoinBlocks {
        CoinBlocks {
            p,
            t: Mat2::ZERO,
            q,
            family: self.family,
            order: walk_order(self.family),
        }
    }

    /// Residuals of `P = P(2)P(1)`, `Q = Q(2)Q(1)` and
    /// `T = P(2)Q(1) + Q(2)P(1)` against `target`.
    pub fn product_residuals(&self, target: &CoinBlocks) -> [f64; 3] {
        [
            (self.p2 * self.p1).max_abs_diff(&target.p),
            (self.q2 * self.q1).max_abs_diff(&target.q),
            (self.p2 * self.q1 + self.q2 * self.p1).max_abs_diff(&target.t),
        ]
    }

    /// Worst of `U(1)†U(1) − I` and `U(2)†U(2) − I`.
    pub fn unitarity_defect(&self) -> f64 {
        self.u1()
            .unitarity_defect()
            .max(self.u2().unitarity_defect())
    }
}

/// Two-step factor coins for the tuple generated by `angles`.
///
/// First step (both families share `U(1)`):
/// `U(1) = [[i cos φ e^{iθ₂}, sin φ e^{iθ₂}], [sin φ e^{iθ₁}, i cos φ e^{iθ₁}]]`.
/// Second step:
/// `U(2) = e^{iδ} [[sin θ e^{−iθ₂}, −i cos θ e^{−iθ₁}], [−i cos θ e^{−iθ₂}, sin θ e^{−iθ₁}]]`.
/// A-type splits each coin by rows, B-type by columns.
pub fn two_step_factorize(
    angles: AngleTriple,
    theta1: f64,
    theta2: f64,
    family: Family,
) -> Result<TwoStepFactors, CorrespondenceError> {
    for (name, value) in [("theta1", theta1), ("theta2", theta2)] {
        if !(0.0..TAU).contains(&value) {
            return Err(CorrespondenceError::AngleOutOfRange { name, value });
        }
    }
    let i = Complex64::i();
    let (st, ct) = angles.theta.sin_cos();
    let (sp, cp) = angles.phi.sin_cos();
    let e1 = Complex64::from_polar(1.0, theta1);
    let e2 = Complex64::from_polar(1.0, theta2);
    let phase = Complex64::from_polar(1.0, angles.delta);

    let u1 = Mat2::new(i * cp * e2, sp * e2, sp * e1, i * cp * e1);
    let u2 = Mat2::new(
        st * e2.conj(),
        -i * ct * e1.conj(),
        -i * ct * e2.conj(),
        st * e1.conj(),
    )
    .scale(phase);

    let split = |u: Mat2| -> (Mat2, Mat2) {
        let [[a, b], [c, d]] = u.0;
        match family {
            Family::A => (Mat2::new(a, b, ZERO, ZERO), Mat2::new(ZERO, ZERO, c, d)),
            Family::B => (Mat2::new(a, ZERO, c, ZERO), Mat2::new(ZERO, b, ZERO, d)),
        }
    };
    let (p1, q1) = split(u1);
    let (p2, q2) = split(u2);
    Ok(TwoStepFactors {
        p1,
        q1,
        p2,
        q2,
        theta1,
        theta2,
        family,
    })
}

/// Checks the product identities against the generalized blocks of
/// `angles`, then runs `n_max` generalized steps against `2 n_max` plain
/// half-steps alternating `U(1)`, `U(2)`. Generalized site `k` is read at
/// half-step site `2k`; odd half-step sites must stay empty after each full
/// round.
pub fn verify_two_step(
    angles: AngleTriple,
    theta1: f64,
    theta2: f64,
    family: Family,
    qubit: &QubitState,
    n_max: usize,
) -> Result<CorrespondenceReport, CorrespondenceError> {
    let factors = two_step_factorize(angles, theta1, theta2, family)?;
    let generalized = generalized_blocks_from_qca(&params_from_angles(angles), family);
    let mut report = CorrespondenceReport::new(match family {
        Family::A => "two-step-A",
        Family::B => "two-step-B",
    });
    let residual = factors
        .product_residuals(&generalized)
        .into_iter()
        .fold(factors.unitarity_defect(), f64::max);
    report.record(residual, 0.0);

    let (first, second) = (factors.first_blocks(), factors.second_blocks());
    let mut gen_state = WalkState::at_origin(qubit, generalized.order);
    let mut fine = gen_state.clone();
    for n in 0..=n_max {
        if n > 0 {
            gen_state = walk_step(&gen_state, &generalized)?;
            fine = walk_step(&walk_step(&fine, &first)?, &second)?;
        }
        let mut amp = 0.0f64;
        let mut coarse = WalkState::empty(fine.order());
        for (site, v) in fine.iter() {
            if site.rem_euclid(2) == 0 {
                coarse.add(site / 2, v);
            } else {
                amp = amp.max(v[0].norm().max(v[1].norm()));
            }
        }
        amp = amp.max(coarse.max_abs_diff(&gen_state));
        let prob = walk_distribution(&coarse).max_abs_diff(&walk_distribution(&gen_state));
        report.record(amp, prob);
        report.steps_checked = n;
    }
    Ok(report)
}

/// Mixing angles `(φ₁, φ₂)` of the even and odd layers, each in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatelParams {
    pub phi1: f64,
    pub phi2: f64,
}

impl PatelParams {
    pub fn new(phi1: f64, phi2: f64) -> Result<Self, CorrespondenceError> {
        for (name, value) in [("phi1", phi1), ("phi2", phi2)] {
            if !(0.0..TAU).contains(&value) {
                return Err(CorrespondenceError::AngleOutOfRange { name, value });
            }
        }
        Ok(Self { phi1, phi2 })
    }

    /// `(θ, φ, δ) = (φ₁, π/2 − φ₂, π/2)`, reduced into `[0, 2π)`.
    pub fn angles(&self) -> AngleTriple {
        AngleTriple::wrapped(self.phi1, FRAC_PI_2 - self.phi2, FRAC_PI_2)
    }

    /// `(i cos φ₁ sin φ₂, cos φ₁ cos φ₂, i sin φ₁ cos φ₂, −sin φ₁ sin φ₂)`.
    pub fn closed_form_tuple(&self) -> [Complex64; 4] {
        let (s1, c1) = self.phi1.sin_cos();
        let (s2, c2) = self.phi2.sin_cos();
        [
            Complex64::new(0.0, c1 * s2),
            Complex64::new(c1 * c2, 0.0),
            Complex64::new(0.0, s1 * c2),
            Complex64::new(-s1 * s2, 0.0),
        ]
    }
}

/// `[[cos φ, i sin φ], [i sin φ, cos φ]]`.
pub fn layer_block(phi: f64) -> Mat2 {
    let (s, c) = phi.sin_cos();
    Mat2::new(
        Complex64::new(c, 0.0),
        Complex64::new(0.0, s),
        Complex64::new(0.0, s),
        Complex64::new(c, 0.0),
    )
}

/// Applies `block` to every site pair `(2k + shift, 2k + shift + 1)`.
fn apply_pair_layer(field: &AmplitudeField, block: &Mat2, shift: i64) -> AmplitudeField {
    let mut out = AmplitudeField::new();
    let mut firsts: Vec<i64> = field
        .iter()
        .map(|(s, _)| s - (s - shift).rem_euclid(2))
        .collect();
    firsts.dedup();
    for first in firsts {
        let v = block.apply([field.get(first), field.get(first + 1)]);
        out.add(first, v[0]);
        out.add(first + 1, v[1]);
    }
    out
}

/// `Ū_e`: the `φ₁` block on pairs `(2k, 2k + 1)`.
pub fn apply_even_layer(field: &AmplitudeField, phi1: f64) -> AmplitudeField {
    apply_pair_layer(field, &layer_block(phi1), 0)
}

/// `Ū_o`: the `φ₂` block on pairs `(2k − 1, 2k)`.
pub fn apply_odd_layer(field: &AmplitudeField, phi2: f64) -> AmplitudeField {
    apply_pair_layer(field, &layer_block(phi2), 1)
}

fn layer_matrix(origin: i64, dim: usize, phi: f64, shift: i64) -> WindowMatrix {
    let block = layer_block(phi);
    let mut m = WindowMatrix::zeros(origin, dim);
    for first in m.sites().filter(|s| (s - shift).rem_euclid(2) == 0) {
        for i in 0..2 {
            for j in 0..2 {
                m.set(first + i, first + j, block.get(i as usize, j as usize));
            }
        }
    }
    m
}

const PATEL_WINDOW_ORIGIN: i64 = -8;
const PATEL_WINDOW_DIM: usize = 18;
/// Rows whose product entries do not touch the truncated window edge.
const PATEL_INTERIOR: std::ops::RangeInclusive<i64> = -5..=6;

/// Multiplies `Ū_e Ū_o` (odd layer first) on a finite window, reads
/// `(a, b, c, d)` off row 0, and checks it against the closed-form tuple,
/// the angle identification `θ = φ₁, φ = π/2 − φ₂, δ = π/2`, the row
/// pattern of every interior row, and the sparse layer application against
/// [`qca_step`].
pub fn patel_factorize(
    p: PatelParams,
) -> Result<(QcaParams, CorrespondenceReport), CorrespondenceError> {
    let even = layer_matrix(PATEL_WINDOW_ORIGIN, PATEL_WINDOW_DIM, p.phi1, 0);
    let odd = layer_matrix(PATEL_WINDOW_ORIGIN, PATEL_WINDOW_DIM, p.phi2, 1);
    let product = even.matmul(&odd);
    let extracted = [
        product.get(0, -1),
        product.get(0, 0),
        product.get(0, 1),
        product.get(0, 2),
    ];
    let [a, b, c, d] = extracted;
    let params = QcaParams::new(a, b, c, d)?;

    let mut report = CorrespondenceReport::new("even-odd-layers");
    let tuple_err = |t: [Complex64; 4]| {
        extracted
            .iter()
            .zip(t)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    };
    report.record(tuple_err(p.closed_form_tuple()), 0.0);
    report.record(tuple_err(params_from_angles(p.angles()).tuple()), 0.0);

    // Every interior row follows the banded pattern, zeros included.
    for row in PATEL_INTERIOR {
        let (base, coeffs) = if row.rem_euclid(2) == 0 {
            (row - 1, [a, b, c, d])
        } else {
            (row - 2, [d, c, b, a])
        };
        for col in product.sites() {
            let want = match col - base {
                off @ 0..=3 => coeffs[off as usize],
                _ => ZERO,
            };
            report.record((product.get(row, col) - want).norm(), 0.0);
        }
    }

    for field in probe_fields() {
        let layered = apply_even_layer(&apply_odd_layer(&field, p.phi2), p.phi1);
        let stepped = qca_step(&field, &params);
        let amp = crate::amplitudes::max_abs_diff(&layered, &stepped);
        let prob = to_distribution(&layered).max_abs_diff(&to_distribution(&stepped));
        report.record(amp, prob);
    }
    report.steps_checked = 1;
    Ok((params, report))
}

fn probe_fields() -> Vec<AmplitudeField> {
    let c = Complex64::new;
    vec![
        AmplitudeField::delta(0),
        AmplitudeField::delta(1),
        AmplitudeField::delta(-3),
        AmplitudeField::from_entries([(-2, c(0.5, 0.0)), (1, c(0.0, 0.5)), (4, c(0.5, 0.5))]),
    ]
}

/// Angle substitution `δ → 3π/2, φ → ρ, θ → π/2 + θ` for the lattice-gas form.
pub fn meyer_angles(rho: f64, theta: f64) -> AngleTriple {
    AngleTriple::wrapped(FRAC_PI_2 + theta, rho, 3.0 * FRAC_PI_2)
}

/// Whether every error in `report` is within [`IDENTITY_TOL`].
pub fn within_identity_tol(report: &CorrespondenceReport) -> bool {
    report.passes(IDENTITY_TOL)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

    use proptest::prelude::*;

    use super::*;
    use crate::qca::wrap_angle;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(x: f64) -> Complex64 {
        c(x, 0.0)
    }

    fn patel_angles() -> AngleTriple {
        AngleTriple::new(FRAC_PI_4, FRAC_PI_4, FRAC_PI_2).unwrap()
    }

    #[test]
    fn pairing_round_trips() {
        for fam in [Family::A, Family::B] {
            for s in -9..9 {
                let (k, ch) = walk_site_of(fam, s);
                assert_eq!(qca_site_of(fam, k, ch), s);
            }
        }
    }

    #[test]
    fn a_and_b_examples() {
        let q = QubitState::symmetric();
        let ra = verify_a_correspondence(&QcaParams::patel(), &q, 50);
        assert_eq!(ra.steps_checked, 50);
        assert!(ra.passes(1e-12), "{ra:?}");
        let rb = verify_b_correspondence(&QcaParams::patel(), &q, 50);
        assert!(rb.passes(1e-12), "{rb:?}");

        let r0 = verify_a_correspondence(&QcaParams::patel(), &q, 0);
        assert_eq!(r0.max_error(), 0.0);
    }

    #[test]
    fn b_initial_state_is_the_qubit_at_origin() {
        let field = superpose(
            &AmplitudeField::delta(0),
            &AmplitudeField::delta(1),
            r(1.0),
            r(0.0),
        );
        let w = walk_state_from_qca_field(&field, Family::B);
        assert_eq!(w.left(0), r(1.0));
        assert_eq!(w.sites().count(), 1);
        let rep = verify_b_correspondence(&QcaParams::patel(), &QubitState::basis_l(), 0);
        assert_eq!(rep.max_error(), 0.0);
    }

    #[test]
    fn a_initial_state_puts_beta_on_r() {
        let q = QubitState::new(r(0.6), c(0.0, 0.8)).unwrap();
        let field = superpose(
            &AmplitudeField::delta(0),
            &AmplitudeField::delta(-1),
            q.alpha(),
            q.beta(),
        );
        let w = walk_state_from_qca_field(&field, Family::A);
        assert_eq!(w.order(), ChiralityOrder::RUpper);
        assert_eq!(w.get(0), [q.beta(), q.alpha()]);
    }

    #[test]
    fn type_reductions() {
        let h = FRAC_1_SQRT_2;
        let q = QubitState::new(r(0.6), c(0.0, 0.8)).unwrap();
        let type_iii = QcaParams::new(r(0.0), r(0.0), r(h), c(0.0, h)).unwrap();
        let rep = verify_type_reduction(&type_iii, &q, 50, Family::A).unwrap();
        assert!(rep.passes(1e-12), "{rep:?}");

        let type_iv = QcaParams::new(c(0.0, h), r(0.0), r(0.0), r(h)).unwrap();
        let rep = verify_type_reduction(&type_iv, &q, 50, Family::B).unwrap();
        assert!(rep.passes(1e-12), "{rep:?}");

        assert!(matches!(
            verify_type_reduction(&QcaParams::patel(), &q, 5, Family::A),
            Err(CorrespondenceError::WrongType { .. })
        ));
    }

    #[test]
    fn two_step_patel_point() {
        let f = two_step_factorize(patel_angles(), 0.0, 0.0, Family::A).unwrap();
        let h = FRAC_1_SQRT_2;
        let want = Mat2::new(c(0.0, h), r(h), r(h), c(0.0, h));
        assert!(f.u1().max_abs_diff(&want) < 1e-15);
        assert!(f.u2().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn two_step_special_lines() {
        for &(theta, t1) in &[(0.3, 0.0), (1.2, 2.5), (0.0, 5.0), (FRAC_PI_4, 1.0)] {
            let phi = FRAC_PI_2 - theta;
            let delta = wrap_angle(2.0 * t1 + FRAC_PI_2);
            let f = two_step_factorize(
                AngleTriple::new(theta, phi, delta).unwrap(),
                t1,
                t1,
                Family::A,
            )
            .unwrap();
            assert!(f.u1().max_abs_diff(&f.u2()) < 1e-12);

            // On θ + φ = 3π/2 the same phase choice gives U(2) = −U(1).
            let phi = wrap_angle(1.5 * PI - theta);
            let f = two_step_factorize(
                AngleTriple::new(theta, phi, delta).unwrap(),
                t1,
                t1,
                Family::A,
            )
            .unwrap();
            assert!(f.u1().max_abs_diff(&f.u2().scale(r(-1.0))) < 1e-12);
        }
    }

    #[test]
    fn two_step_walks_agree() {
        let q = QubitState::new(r(0.6), c(0.0, 0.8)).unwrap();
        let angles = AngleTriple::new(0.4, 1.3, 2.9).unwrap();
        for fam in [Family::A, Family::B] {
            let rep = verify_two_step(angles, 0.7, 4.1, fam, &q, 30).unwrap();
            assert!(rep.passes(1e-12), "{rep:?}");
        }
    }

    #[test]
    fn patel_examples() {
        let p = PatelParams::new(FRAC_PI_4, FRAC_PI_4).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!(
            layer_block(p.phi1).max_abs_diff(&Mat2::new(r(h), c(0.0, h), c(0.0, h), r(h))) < 1e-15
        );
        let (params, rep) = patel_factorize(p).unwrap();
        assert!(params.max_abs_diff(&QcaParams::patel()) < 1e-15);
        assert!(rep.passes(1e-12), "{rep:?}");

        let p = PatelParams::new(0.0, 0.9).unwrap();
        let (params, rep) = patel_factorize(p).unwrap();
        assert!(rep.passes(1e-12));
        assert!((params.a() - c(0.0, 0.9f64.sin())).norm() < 1e-15);
        assert!((params.b() - r(0.9f64.cos())).norm() < 1e-15);
        assert_eq!(classify(&params), Ok(QcaTypeClass::TypeII));

        let (params, _) = patel_factorize(PatelParams::new(0.0, 0.0).unwrap()).unwrap();
        assert_eq!(classify(&params), Ok(QcaTypeClass::TrivialB));
    }

    #[test]
    fn layers_in_the_wrong_order_do_not_reproduce_the_tuple() {
        let p = PatelParams::new(0.4, 1.1).unwrap();
        let f = AmplitudeField::delta(0);
        let right = apply_even_layer(&apply_odd_layer(&f, p.phi2), p.phi1);
        let wrong = apply_odd_layer(&apply_even_layer(&f, p.phi1), p.phi2);
        let (params, _) = patel_factorize(p).unwrap();
        let stepped = qca_step(&f, &params);
        assert!(crate::amplitudes::max_abs_diff(&right, &stepped) < 1e-15);
        assert!(crate::amplitudes::max_abs_diff(&wrong, &stepped) > 1e-3);
    }

    #[test]
    fn meyer_examples() {
        let m = meyer_angles(0.0, 0.0);
        assert_eq!((m.theta, m.phi, m.delta), (FRAC_PI_2, 0.0, 1.5 * PI));
        let m = meyer_angles(FRAC_PI_4, 0.0);
        assert_eq!((m.theta, m.phi, m.delta), (FRAC_PI_2, FRAC_PI_4, 1.5 * PI));
        assert!(params_from_angles(meyer_angles(2.0, 5.5))
            .residuals()
            .within(1e-12));
    }

    fn arb_angles() -> impl Strategy<Value = AngleTriple> {
        (0.0..TAU, 0.0..TAU, 0.0..TAU).prop_map(|(t, p, d)| AngleTriple::new(t, p, d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn factorization_closes(angles in arb_angles(), t1 in 0.0..TAU, t2 in 0.0..TAU) {
            for fam in [Family::A, Family::B] {
                let f = two_step_factorize(angles, t1, t2, fam).unwrap();
                let target = generalized_blocks_from_qca(&params_from_angles(angles), fam);
                prop_assert!(f.product_residuals(&target).iter().all(|&e| e <= 1e-12));
                prop_assert!(f.unitarity_defect() <= 1e-12);
            }
            let a = two_step_factorize(angles, t1, t2, Family::A).unwrap();
            let b = two_step_factorize(angles, t1, t2, Family::B).unwrap();
            prop_assert!(a.u1().max_abs_diff(&b.u1()) < 1e-15);
            prop_assert!(a.u2().max_abs_diff(&b.u2()) < 1e-15);
        }

        #[test]
        fn correspondences_are_exact(angles in arb_angles(), chi in 0.0..TAU, mu in 0.0..TAU) {
            let q = QubitState::new(r(chi.cos()), Complex64::from_polar(chi.sin(), mu)).unwrap();
            let p = params_from_angles(angles);
            prop_assert!(verify_a_correspondence(&p, &q, 20).passes(1e-12));
            prop_assert!(verify_b_correspondence(&p, &q, 20).passes(1e-12));
        }
    }
}
