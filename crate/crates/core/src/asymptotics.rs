//! Weak-limit law of the symmetric two-step walk and finite-`n` comparisons.
//!
//! For the even/odd Hadamard-like tuple `(i/2, 1/2, i/2, −1/2)` started from
//! the qubit `ᵗ(1/√2, 1/√2)`, the QCA position divided by `n` converges in
//! law to the density
//!
//! ```text
//! f(x) = 4 / (π (4 − x²) √(4 − 2x²)),   |x| < √2.
//! ```

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use thiserror::Error;

use crate::amplitudes::{superpose, to_distribution, AmplitudeField, Distribution};
use crate::coined::QubitState;
use crate::qca::{qca_step, Branch, QcaParams};

/// Absolute tolerance requested from the CDF quadrature.
pub const CDF_QUADRATURE_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("rescaling needs at least one step")]
    ZeroSteps,
}

pub fn limit_density(x: f64) -> f64 {
    if x.abs() >= SQRT_2 {
        return 0.0;
    }
    let x2 = x * x;
    4.0 / (PI * (4.0 - x2) * (4.0 - 2.0 * x2).sqrt())
}

/// `∫_{−√2}^{x} f`.
///
/// With `x = √2 sin t` the integrand becomes `√2 / (π (2 − sin² t))`, which
/// is smooth on `[−π/2, π/2]`, so both inverse-square-root endpoint
/// singularities disappear before the adaptive rule sees them.
pub fn limit_cdf(x: f64) -> f64 {
    if x <= -SQRT_2 {
        return 0.0;
    }
    if x >= SQRT_2 {
        return 1.0;
    }
    let upper = (x / SQRT_2).clamp(-1.0, 1.0).asin();
    let integrand = |t: f64| {
        let s = t.sin();
        SQRT_2 / (PI * (2.0 - s * s))
    };
    let (value, _) = quadrature::integrate(integrand, -FRAC_PI_2, upper, CDF_QUADRATURE_TOL);
    value.clamp(0.0, 1.0)
}

/// Total mass of the limit law, `∫_{−√2}^{√2} f`, evaluated by quadrature.
pub fn limit_total_mass() -> f64 {
    let integrand = |t: f64| {
        let s = t.sin();
        SQRT_2 / (PI * (2.0 - s * s))
    };
    quadrature::integrate(integrand, -FRAC_PI_2, FRAC_PI_2, CDF_QUADRATURE_TOL).0
}

/// Point masses at the rescaled positions `k / n`, sorted by position.
#[derive(Clone, Debug, PartialEq)]
pub struct RescaledSample {
    pub n: usize,
    pub points: Vec<(f64, f64)>,
}

impl RescaledSample {
    pub fn from_distribution(dist: &Distribution, n: usize) -> Result<Self, AsymptoticsError> {
        if n == 0 {
            return Err(AsymptoticsError::ZeroSteps);
        }
        let scale = n as f64;
        Ok(Self {
            n,
            points: dist.iter().map(|(k, m)| (k as f64 / scale, m)).collect(),
        })
    }

    pub fn total_mass(&self) -> f64 {
        self.points.iter().map(|p| p.1).sum()
    }

    pub fn mean(&self) -> f64 {
        self.points.iter().map(|(x, m)| x * m).sum()
    }
}

/// `X_n / n` for the `x^{(0:+)}` distribution after `n` steps.
pub fn rescaled_qca_sample(
    params: &QcaParams,
    qubit: &QubitState,
    n: usize,
) -> Result<RescaledSample, AsymptoticsError> {
    if n == 0 {
        return Err(AsymptoticsError::ZeroSteps);
    }
    let dist = crate::qca::qca_distribution(0, Branch::Plus, qubit, n, params);
    RescaledSample::from_distribution(&dist, n)
}

/// Steps `α δ_0 + β δ_1` forward once per call, yielding `x^{(0:+)}(n)` for
/// `n = 1, 2, …`. Equivalent to evolving `η^{(0)}` and `η^{(1)}` separately
/// by linearity, at half the cost.
pub struct PlusBranchRun {
    params: QcaParams,
    field: AmplitudeField,
    step: usize,
}

impl PlusBranchRun {
    pub fn new(params: &QcaParams, qubit: &QubitState) -> Self {
        let field = superpose(
            &AmplitudeField::delta(0),
            &AmplitudeField::delta(1),
            qubit.alpha(),
            qubit.beta(),
        );
        Self {
            params: *params,
            field,
            step: 0,
        }
    }
}

impl Iterator for PlusBranchRun {
    type Item = (usize, Distribution);

    fn next(&mut self) -> Option<Self::Item> {
        self.field = qca_step(&self.field, &self.params);
        self.step += 1;
        Some((self.step, to_distribution(&self.field)))
    }
}

/// `sup_x |F_n(x) − F(x)|` between the sample's step CDF and [`limit_cdf`].
///
/// The limit CDF is continuous, so the supremum is attained at a jump of the
/// sample CDF, from one side or the other.
pub fn kolmogorov_distance(sample: &RescaledSample) -> f64 {
    let mut points = sample.points.clone();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut below = 0.0;
    let mut worst = 0.0f64;
    for (x, m) in points {
        let limit = limit_cdf(x);
        let above = below + m;
        worst = worst.max((below - limit).abs()).max((above - limit).abs());
        below = above;
    }
    worst.min(1.0)
}

/// `max_u |mass(center + u) − mass(center − u)|`. Mirror images that are not
/// lattice sites carry zero mass.
pub fn symmetry_defect(dist: &Distribution, center: f64) -> f64 {
    dist.iter()
        .map(|(k, m)| {
            let mirror = 2.0 * center - k as f64;
            let mirrored = if (mirror - mirror.round()).abs() < 1e-9 {
                dist.get(mirror.round() as i64)
            } else {
                0.0
            };
            (m - mirrored).abs()
        })
        .fold(0.0, f64::max)
}

/// Adaptive Gauss–Kronrod (7, 15) integration.
mod quadrature {
    const XGK: [f64; 8] = [
        0.991_455_371_120_812_6,
        0.949_107_912_342_758_5,
        0.864_864_423_359_769_1,
        0.741_531_185_599_394_4,
        0.586_087_235_467_691_1,
        0.405_845_151_377_397_2,
        0.207_784_955_007_898_5,
        0.0,
    ];
    const WGK: [f64; 8] = [
        0.022_935_322_010_529_22,
        0.063_092_092_629_978_55,
        0.104_790_010_322_250_2,
        0.140_653_259_715_525_9,
        0.169_004_726_639_267_9,
        0.190_350_578_064_785_4,
        0.204_432_940_075_298_9,
        0.209_482_141_084_727_8,
    ];
    // Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
    const WG: [f64; 4] = [
        0.129_484_966_168_869_7,
        0.279_705_391_489_276_7,
        0.381_830_050_505_118_9,
        0.417_959_183_673_469_4,
    ];
    const MAX_DEPTH: u32 = 50;

    fn rule<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let fc = f(center);
        let mut kronrod = WGK[7] * fc;
        let mut gauss = WG[3] * fc;
        for (i, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
            let dx = half * x;
            let pair = f(center - dx) + f(center + dx);
            kronrod += w * pair;
            if i % 2 == 1 {
                gauss += WG[i / 2] * pair;
            }
        }
        (kronrod * half, ((kronrod - gauss) * half).abs())
    }

    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> (f64, f64) {
        let (value, err) = rule(f, a, b);
        if err <= tol || depth >= MAX_DEPTH {
            return (value, err);
        }
        let mid = 0.5 * (a + b);
        let (l, le) = recurse(f, a, mid, 0.5 * tol, depth + 1);
        let (r, re) = recurse(f, mid, b, 0.5 * tol, depth + 1);
        (l + r, le + re)
    }

    /// `∫_a^b f` with an absolute error estimate.
    pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
        if a == b {
            return (0.0, 0.0);
        }
        recurse(&f, a, b, tol, 0)
    }

}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    /// Independent closed form of the CDF: `1/2 + arctan(x / √(4 − 2x²)) / π`.
    fn closed_form_cdf(x: f64) -> f64 {
        if x <= -SQRT_2 {
            0.0
        } else if x >= SQRT_2 {
            1.0
        } else {
            0.5 + (x / (4.0 - 2.0 * x * x).sqrt()).atan() / PI
        }
    }

    /// `m` equal masses at the limit law's mid-quantiles, placed with the
    /// inverse of the closed form: `x = 2y / √(1 + 2y²)`, `y = tan(π(F − 1/2))`.
    fn discretized_limit(m: usize) -> RescaledSample {
        let points = (0..m)
            .map(|i| {
                let f = (i as f64 + 0.5) / m as f64;
                let y = (PI * (f - 0.5)).tan();
                (2.0 * y / (1.0 + 2.0 * y * y).sqrt(), 1.0 / m as f64)
            })
            .collect();
        RescaledSample { n: m, points }
    }

    #[test]
    fn density_examples() {
        assert!((limit_density(0.0) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert_eq!(limit_density(2.0), 0.0);
        assert_eq!(limit_density(SQRT_2), 0.0);
        assert!((limit_density(1.0) - 4.0 / (3.0 * SQRT_2 * PI)).abs() < 1e-15);
        assert!((limit_density(1.0) - 0.300_105_438_719_847_2).abs() < 1e-12);
    }

    #[test]
    fn cdf_examples() {
        assert!((limit_cdf(0.0) - 0.5).abs() < 1e-12);
        assert_eq!(limit_cdf(SQRT_2), 1.0);
        assert_eq!(limit_cdf(-SQRT_2), 0.0);
        assert!((limit_total_mass() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cdf_matches_closed_form_near_the_edges() {
        for x in [-SQRT_2 + 1e-9, -1.41, -1.3, -0.2, 0.7, 1.4, SQRT_2 - 1e-10] {
            assert!((limit_cdf(x) - closed_form_cdf(x)).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn kolmogorov_self_comparison() {
        assert!(kolmogorov_distance(&discretized_limit(2000)) < 0.01);
    }

    #[test]
    fn symmetry_defect_examples() {
        let delta = Distribution::from_entries([(3, 1.0)]);
        assert_eq!(symmetry_defect(&delta, 3.0), 0.0);
        let p = QcaParams::patel();
        let d = crate::qca::qca_distribution(0, Branch::Plus, &QubitState::basis_l(), 1, &p);
        assert!(symmetry_defect(&d, 0.5) > 0.2);
    }

    #[test]
    fn rescaled_sample_examples() {
        let p = QcaParams::patel();
        assert_eq!(
            rescaled_qca_sample(&p, &QubitState::symmetric(), 0),
            Err(AsymptoticsError::ZeroSteps)
        );
        let s = rescaled_qca_sample(&p, &QubitState::basis_l(), 1).unwrap();
        let xs: Vec<f64> = s.points.iter().map(|p| p.0).collect();
        assert_eq!(xs, vec![-2.0, -1.0, 0.0, 1.0]);
        assert!(s.points.iter().all(|p| (p.1 - 0.25).abs() < 1e-15));
    }

    #[test]
    fn incremental_run_matches_direct_evolution() {
        let p = QcaParams::patel();
        let q = QubitState::new(
            num_complex::Complex64::new(0.6, 0.0),
            num_complex::Complex64::new(0.0, 0.8),
        )
        .unwrap();
        for (n, d) in PlusBranchRun::new(&p, &q).take(12) {
            let direct = crate::qca::qca_distribution(0, Branch::Plus, &q, n, &p);
            assert!(d.max_abs_diff(&direct) < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn density_is_even(x in -2.0f64..2.0) {
            prop_assert_eq!(limit_density(x), limit_density(-x));
        }

        #[test]
        fn cdf_is_antisymmetric_and_matches_closed_form(x in -1.5f64..1.5) {
            prop_assert!((limit_cdf(x) + limit_cdf(-x) - 1.0).abs() < 1e-9);
            prop_assert!((limit_cdf(x) - closed_form_cdf(x)).abs() < 1e-10);
        }

        #[test]
        fn cdf_is_monotone(x in -1.5f64..1.5, dx in 0.0f64..0.5) {
            prop_assert!(limit_cdf(x + dx) >= limit_cdf(x) - 1e-12);
        }
    }
}
