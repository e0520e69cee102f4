//! The banded QCA unitary `Ū` built from a coefficient tuple `(a, b, c, d)`.
//!
//! Row convention, read off the displayed operator: even rows `2k` carry
//! `(a, b, c, d)` and odd rows `2k + 1` carry `(d, c, b, a)`, both over the
//! columns `2k − 1 ..= 2k + 2`.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::amplitudes::{superpose, to_distribution, AmplitudeField, Distribution};
use crate::coined::QubitState;
use crate::IDENTITY_TOL;

/// Magnitudes below this count as zero when classifying.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QcaError {
    #[error("tuple is not unitary: largest residual {max_residual:e} exceeds {IDENTITY_TOL:e}")]
    NotUnitary { max_residual: f64 },
    #[error("tuple has {nonzero} nonzero coefficients in a pattern no unitary tuple can have")]
    Unclassifiable { nonzero: usize },
    #[error("angle {name} = {value} outside [0, 2π)")]
    AngleOutOfRange { name: &'static str, value: f64 },
}

/// Residual magnitudes of the five unitarity conditions, in order:
/// `|a|²+|b|²+|c|²+|d|² − 1`, `a d̄ + ā d + b c̄ + b̄ c`, `a c̄ + b d̄`,
/// `a b̄ + ā b`, `c d̄ + c̄ d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitarityResiduals(pub [f64; 5]);

impl UnitarityResiduals {
    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    pub fn within(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

pub fn unitarity_residuals(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
) -> UnitarityResiduals {
    UnitarityResiduals([
        (a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr() - 1.0).abs(),
        (a * d.conj() + a.conj() * d + b * c.conj() + b.conj() * c).norm(),
        (a * c.conj() + b * d.conj()).norm(),
        (a * b.conj() + a.conj() * b).norm(),
        (c * d.conj() + c.conj() * d).norm(),
    ])
}

/// A coefficient tuple that has passed unitarity validation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QcaParams {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl QcaParams {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, QcaError> {
        let residuals = unitarity_residuals(a, b, c, d);
        if !residuals.within(IDENTITY_TOL) {
            return Err(QcaError::NotUnitary {
                max_residual: residuals.max(),
            });
        }
        Ok(Self { a, b, c, d })
    }

    /// The tuple `(i/2, 1/2, i/2, −1/2)` of the symmetric even/odd Hadamard-like case.
    pub fn patel() -> Self {
        Self {
            a: Complex64::new(0.0, 0.5),
            b: Complex64::new(0.5, 0.0),
            c: Complex64::new(0.0, 0.5),
            d: Complex64::new(-0.5, 0.0),
        }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }
    pub fn b(&self) -> Complex64 {
        self.b
    }
    pub fn c(&self) -> Complex64 {
        self.c
    }
    pub fn d(&self) -> Complex64 {
        self.d
    }

    pub fn tuple(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn residuals(&self) -> UnitarityResiduals {
        unitarity_residuals(self.a, self.b, self.c, self.d)
    }

    /// Same tuple times a global phase `e^{i phase}`.
    pub fn with_global_phase(&self, phase: f64) -> Self {
        let p = Complex64::from_polar(1.0, phase);
        Self {
            a: self.a * p,
            b: self.b * p,
            c: self.c * p,
            d: self.d * p,
        }
    }

    /// Largest component-wise modulus of the difference of two tuples.
    pub fn max_abs_diff(&self, other: &QcaParams) -> f64 {
        self.tuple()
            .iter()
            .zip(other.tuple())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

/// Angles `(θ, φ, δ)`, each in `[0, 2π)`, generating a unitary tuple.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleTriple {
    pub theta: f64,
    pub phi: f64,
    pub delta: f64,
}

impl AngleTriple {
    pub fn new(theta: f64, phi: f64, delta: f64) -> Result<Self, QcaError> {
        for (name, value) in [("theta", theta), ("phi", phi), ("delta", delta)] {
            if !(0.0..TAU).contains(&value) {
                return Err(QcaError::AngleOutOfRange { name, value });
            }
        }
        Ok(Self { theta, phi, delta })
    }

    /// Reduces each angle into `[0, 2π)`.
    pub fn wrapped(theta: f64, phi: f64, delta: f64) -> Self {
        Self {
            theta: wrap_angle(theta),
            phi: wrap_angle(phi),
            delta: wrap_angle(delta),
        }
    }
}

/// `x mod 2π` in `[0, 2π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// `e^{iδ} (cos θ cos φ, −i cos θ sin φ, sin θ sin φ, i sin θ cos φ)`.
pub fn params_from_angles(angles: AngleTriple) -> QcaParams {
    let (st, ct) = angles.theta.sin_cos();
    let (sp, cp) = angles.phi.sin_cos();
    let phase = Complex64::from_polar(1.0, angles.delta);
    let i = Complex64::i();
    // Unitary for every angle triple up to round-off; no validation needed.
    QcaParams {
        a: phase * (ct * cp),
        b: phase * (-i * (ct * sp)),
        c: phase * (st * sp),
        d: phase * (i * (st * cp)),
    }
}

/// The nine classes of unitary tuples by which coefficients vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QcaTypeClass {
    TrivialA,
    TrivialB,
    TrivialC,
    TrivialD,
    TypeI,
    TypeII,
    TypeIII,
    TypeIV,
    TypeV,
}

impl QcaTypeClass {
    pub fn name(&self) -> &'static str {
        match self {
            QcaTypeClass::TrivialA => "TrivialA",
            QcaTypeClass::TrivialB => "TrivialB",
            QcaTypeClass::TrivialC => "TrivialC",
            QcaTypeClass::TrivialD => "TrivialD",
            QcaTypeClass::TypeI => "TypeI",
            QcaTypeClass::TypeII => "TypeII",
            QcaTypeClass::TypeIII => "TypeIII",
            QcaTypeClass::TypeIV => "TypeIV",
            QcaTypeClass::TypeV => "TypeV",
        }
    }
}

impl fmt::Display for QcaTypeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify(params: &QcaParams) -> Result<QcaTypeClass, QcaError> {
    let nz = params.tuple().map(|z| z.norm() >= ZERO_TOL);
    let count = nz.iter().filter(|&&x| x).count();
    use QcaTypeClass::*;
    let class = match nz {
        [true, false, false, false] => TrivialA,
        [false, true, false, false] => TrivialB,
        [false, false, true, false] => TrivialC,
        [false, false, false, true] => TrivialD,
        [false, true, true, false] => TypeI,
        [true, true, false, false] => TypeII,
        [false, false, true, true] => TypeIII,
        [true, false, false, true] => TypeIV,
        [true, true, true, true] => TypeV,
        _ => return Err(QcaError::Unclassifiable { nonzero: count }),
    };
    Ok(class)
}

/// Validates a raw tuple, then classifies it.
pub fn classify_tuple(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
) -> Result<QcaTypeClass, QcaError> {
    classify(&QcaParams::new(a, b, c, d)?)
}

/// One application of `Ū`.
pub fn qca_step(field: &AmplitudeField, params: &QcaParams) -> AmplitudeField {
    let Some((lo, hi)) = field.bounds() else {
        return AmplitudeField::new();
    };
    let QcaParams { a, b, c, d } = *params;
    // Contiguous copy of the occupied range, padded by two sites each side.
    let base_site = lo - 2;
    let mut dense = vec![Complex64::new(0.0, 0.0); (hi - lo + 5) as usize];
    for (k, v) in field.iter() {
        dense[(k - base_site) as usize] = v;
    }
    let read = |site: i64| {
        usize::try_from(site - base_site)
            .ok()
            .and_then(|i| dense.get(i).copied())
            .unwrap_or_default()
    };
    let mut out = AmplitudeField::new();
    // Column j reaches rows j-2 ..= j+2.
    for row in (lo - 2)..=(hi + 2) {
        let (first, coeffs) = if row.rem_euclid(2) == 0 {
            (row - 1, [a, b, c, d])
        } else {
            (row - 2, [d, c, b, a])
        };
        let value: Complex64 = coeffs
            .iter()
            .zip(first..)
            .map(|(&w, site)| w * read(site))
            .sum();
        out.add(row, value);
    }
    out
}

/// `η^{(m)}(n)`: `n` steps of `Ū` from the unit delta at `m`.
pub fn evolve_eta(m: i64, n: usize, params: &QcaParams) -> AmplitudeField {
    let mut field = AmplitudeField::delta(m);
    for _ in 0..n {
        field = qca_step(&field, params);
    }
    field
}

/// Which neighbouring start site pairs with `m` in `x^{(m:±)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn offset(self) -> i64 {
        match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }
}

/// `x^{(m:±)}_k(n) = |α η^{(m)}_k(n) + β η^{(m±1)}_k(n)|²`.
pub fn qca_distribution(
    m: i64,
    branch: Branch,
    qubit: &QubitState,
    n: usize,
    params: &QcaParams,
) -> Distribution {
    to_distribution(&qca_superposed_field(m, branch, qubit, n, params))
}

/// The amplitude field `α η^{(m)}(n) + β η^{(m±1)}(n)` underlying [`qca_distribution`].
pub fn qca_superposed_field(
    m: i64,
    branch: Branch,
    qubit: &QubitState,
    n: usize,
    params: &QcaParams,
) -> AmplitudeField {
    let own = evolve_eta(m, n, params);
    let neighbour = evolve_eta(m + branch.offset(), n, params);
    superpose(&own, &neighbour, qubit.alpha(), qubit.beta())
}
