//! Finitely supported fields over the integer lattice.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

/// Entries whose modulus falls below this are treated as exact zeros and dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Complex amplitudes keyed by lattice site. Zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AmplitudeField {
    entries: BTreeMap<i64, Complex64>,
}

impl AmplitudeField {
    pub fn new() -> Self {
        Self::default()
    }

    /// Unit amplitude at `site`.
    pub fn delta(site: i64) -> Self {
        Self::delta_with(site, Complex64::new(1.0, 0.0))
    }

    pub fn delta_with(site: i64, amplitude: Complex64) -> Self {
        let mut field = Self::new();
        field.add(site, amplitude);
        field
    }

    /// Builds a field from `(site, amplitude)` pairs, summing repeated sites.
    pub fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut field = Self::new();
        for (site, amp) in entries {
            field.add(site, amp);
        }
        field
    }

    /// Accumulates `amplitude` into `site`, pruning the entry if it cancels.
    pub fn add(&mut self, site: i64, amplitude: Complex64) {
        let slot = self.entries.entry(site).or_insert(Complex64::new(0.0, 0.0));
        *slot += amplitude;
        if slot.norm() < PRUNE_THRESHOLD {
            self.entries.remove(&site);
        }
    }

    /// Amplitude at `site`, zero when absent.
    pub fn get(&self, site: i64) -> Complex64 {
        self.entries
            .get(&site)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Smallest and largest occupied sites.
    pub fn bounds(&self) -> Option<(i64, i64)> {
        let lo = *self.entries.keys().next()?;
        let hi = *self.entries.keys().next_back()?;
        Some((lo, hi))
    }

    /// Every entry multiplied by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::from_entries(self.iter().map(|(k, v)| (k, v * factor)))
    }

    /// The field translated by `offset` sites.
    pub fn shifted(&self, offset: i64) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|(&k, &v)| (k + offset, v))
                .collect(),
        }
    }
}

/// `Σ_k |field(k)|²`.
pub fn norm_sq(field: &AmplitudeField) -> f64 {
    field.entries.values().map(|v| v.norm_sqr()).sum()
}

/// Sites carrying a nonzero amplitude.
pub fn support(field: &AmplitudeField) -> BTreeSet<i64> {
    field.entries.keys().copied().collect()
}

/// Pointwise `alpha * f + beta * g`.
pub fn superpose(
    f: &AmplitudeField,
    g: &AmplitudeField,
    alpha: Complex64,
    beta: Complex64,
) -> AmplitudeField {
    let mut out = AmplitudeField::new();
    for (k, v) in f.iter() {
        out.add(k, alpha * v);
    }
    for (k, v) in g.iter() {
        out.add(k, beta * v);
    }
    out
}

/// Born-rule probabilities `|field(k)|²`.
pub fn to_distribution(field: &AmplitudeField) -> Distribution {
    Distribution::from_entries(field.iter().map(|(k, v)| (k, v.norm_sqr())))
}

/// Nonnegative masses keyed by lattice site. Zero masses are not stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Distribution {
    masses: BTreeMap<i64, f64>,
}

impl Distribution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a distribution from `(site, mass)` pairs, summing repeated sites.
    ///
    /// # Panics
    ///
    /// If any mass is negative or not finite.
    pub fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (i64, f64)>,
    {
        let mut masses = BTreeMap::new();
        for (site, mass) in entries {
            assert!(
                mass.is_finite() && mass >= 0.0,
                "invalid probability mass {mass} at site {site}"
            );
            if mass > 0.0 {
                *masses.entry(site).or_insert(0.0) += mass;
            }
        }
        Self { masses }
    }

    pub fn get(&self, site: i64) -> f64 {
        self.masses.get(&site).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.masses.iter().map(|(&k, &v)| (k, v))
    }

    pub fn total(&self) -> f64 {
        self.masses.values().sum()
    }

    pub fn support(&self) -> BTreeSet<i64> {
        self.masses.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// Largest absolute mass difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        self.support()
            .union(&other.support())
            .map(|&k| (self.get(k) - other.get(k)).abs())
            .fold(0.0, f64::max)
    }
}

/// Largest entry-wise modulus of `f - g`.
pub fn max_abs_diff(f: &AmplitudeField, g: &AmplitudeField) -> f64 {
    support(f)
        .union(&support(g))
        .map(|&k| (f.get(k) - g.get(k)).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_1_SQRT_2;

    use proptest::prelude::*;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn patel_column() -> AmplitudeField {
        AmplitudeField::from_entries([
            (-2, c(-0.5, 0.0)),
            (-1, c(0.0, 0.5)),
            (0, c(0.5, 0.0)),
            (1, c(0.0, 0.5)),
        ])
    }

    #[test]
    fn norm_sq_examples() {
        assert_eq!(norm_sq(&AmplitudeField::new()), 0.0);
        assert_eq!(norm_sq(&AmplitudeField::delta(0)), 1.0);
        let f = AmplitudeField::from_entries([
            (-1, c(0.0, 0.5)),
            (0, c(0.5, 0.0)),
            (1, c(0.0, 0.5)),
            (2, c(-0.5, 0.0)),
        ]);
        assert!((norm_sq(&f) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn support_examples() {
        assert!(support(&AmplitudeField::new()).is_empty());
        assert_eq!(support(&AmplitudeField::delta(5)), BTreeSet::from([5]));
        assert_eq!(support(&patel_column()), BTreeSet::from([-2, -1, 0, 1]));
    }

    #[test]
    fn superpose_examples() {
        let f = patel_column();
        let g = AmplitudeField::delta(7);
        assert_eq!(superpose(&f, &g, c(1.0, 0.0), c(0.0, 0.0)), f);

        let d0 = AmplitudeField::delta(0);
        let h = FRAC_1_SQRT_2;
        assert!(superpose(&d0, &d0, c(h, 0.0), c(-h, 0.0)).is_empty());

        let s = superpose(&d0, &AmplitudeField::delta(1), c(h, 0.0), c(h, 0.0));
        assert_eq!(s.len(), 2);
        assert_eq!(s.get(0), c(h, 0.0));
        assert_eq!(s.get(1), c(h, 0.0));
    }

    #[test]
    fn to_distribution_examples() {
        let d = to_distribution(&AmplitudeField::delta_with(0, c(0.0, 1.0)));
        assert_eq!(d.get(0), 1.0);
        assert_eq!(d.len(), 1);

        let h = FRAC_1_SQRT_2;
        let d = to_distribution(&AmplitudeField::from_entries([
            (0, c(h, 0.0)),
            (1, c(0.0, h)),
        ]));
        assert!((d.get(0) - 0.5).abs() < 1e-15);
        assert!((d.get(1) - 0.5).abs() < 1e-15);

        let d = to_distribution(&patel_column());
        for k in -2..=1 {
            assert_eq!(d.get(k), 0.25);
        }
    }

    #[test]
    fn dust_is_pruned() {
        let mut f = AmplitudeField::delta(3);
        f.add(3, c(-1.0, 1e-16));
        assert!(f.is_empty());
    }

    #[test]
    #[should_panic(expected = "invalid probability mass")]
    fn negative_mass_rejected() {
        Distribution::from_entries([(0, -0.1)]);
    }

    fn arb_field() -> impl Strategy<Value = AmplitudeField> {
        prop::collection::vec((-20i64..20, -1.0f64..1.0, -1.0f64..1.0), 0..12).prop_map(|v| {
            AmplitudeField::from_entries(v.into_iter().map(|(k, re, im)| (k, c(re, im))))
        })
    }

    proptest! {
        #[test]
        fn disjoint_superposition_adds_weighted_norms(
            f in arb_field(),
            g in arb_field(),
            ar in -1.0f64..1.0, ai in -1.0f64..1.0,
            br in -1.0f64..1.0, bi in -1.0f64..1.0,
        ) {
            // Move g well clear of f so the supports are disjoint.
            let g = g.shifted(100);
            let (alpha, beta) = (c(ar, ai), c(br, bi));
            let lhs = norm_sq(&superpose(&f, &g, alpha, beta));
            let rhs = alpha.norm_sqr() * norm_sq(&f) + beta.norm_sqr() * norm_sq(&g);
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn distribution_preserves_mass_and_support(f in arb_field()) {
            let d = to_distribution(&f);
            prop_assert!((d.total() - norm_sq(&f)).abs() < 1e-12);
            prop_assert_eq!(d.support(), support(&f));
        }
    }
}
