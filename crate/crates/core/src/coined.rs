//! A-type and B-type coined quantum walks on the integer line.
//!
//! A walk step is defined by a block triple `(P, T, Q)`:
//!
//! ```text
//! Ψ_k(n+1) = P Ψ_{k∓1}(n) + T Ψ_k(n) + Q Ψ_{k±1}(n)
//! ```
//!
//! `P` always carries amplitude in the direction of the chirality stored in
//! the upper component and `Q` in the direction of the lower one. With the
//! L-upper ordering this is `P Ψ_{k+1} + Q Ψ_{k−1}` (plain walks and the
//! generalized B-type walk); with the R-upper ordering it is
//! `P Ψ_{k−1} + Q Ψ_{k+1}` (the generalized A-type walk). Plain walks have
//! `T = 0`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::amplitudes::{Distribution, PRUNE_THRESHOLD};
use crate::linalg::Mat2;
use crate::qca::QcaParams;
use crate::IDENTITY_TOL;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("coin matrix is not unitary: defect {defect:e}")]
    NonUnitaryCoin { defect: f64 },
    #[error("coin blocks do not assemble a unitary walk operator: defect {defect:e}")]
    NonUnitaryBlocks { defect: f64 },
    #[error("state is stored {state} but blocks are written {blocks}")]
    ChiralityMismatch {
        state: ChiralityOrder,
        blocks: ChiralityOrder,
    },
    #[error("qubit is not normalized: |α|² + |β|² = {norm_sq}")]
    UnnormalizedQubit { norm_sq: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::B => "B",
        })
    }
}

/// Which chirality occupies the upper component of a site 2-vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChiralityOrder {
    LUpper,
    RUpper,
}

impl ChiralityOrder {
    /// Site offset read by `P`; `Q` reads the opposite neighbour.
    fn p_source_offset(self) -> i64 {
        match self {
            ChiralityOrder::LUpper => 1,
            ChiralityOrder::RUpper => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            ChiralityOrder::LUpper => ChiralityOrder::RUpper,
            ChiralityOrder::RUpper => ChiralityOrder::LUpper,
        }
    }
}

impl fmt::Display for ChiralityOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChiralityOrder::LUpper => "L-upper",
            ChiralityOrder::RUpper => "R-upper",
        })
    }
}

/// Initial coin state `ᵗ(α, β)`: `α` on the left chirality, `β` on the right.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState {
    alpha: Complex64,
    beta: Complex64,
}

impl QubitState {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self, WalkError> {
        let norm_sq = alpha.norm_sqr() + beta.norm_sqr();
        if (norm_sq - 1.0).abs() > IDENTITY_TOL {
            return Err(WalkError::UnnormalizedQubit { norm_sq });
        }
        Ok(Self { alpha, beta })
    }

    /// `ᵗ(1, 0)`.
    pub fn basis_l() -> Self {
        Self {
            alpha: Complex64::new(1.0, 0.0),
            beta: ZERO,
        }
    }

    /// `ᵗ(1/√2, 1/√2)`.
    pub fn symmetric() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { alpha: h, beta: h }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// `|α β̄ − ᾱ β|`; zero means the walk distribution is mirror symmetric.
    pub fn symmetry_defect(&self) -> f64 {
        (self.alpha * self.beta.conj() - self.alpha.conj() * self.beta).norm()
    }
}

/// A validated 2×2 unitary coin `[[a', b'], [c', d']]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinMatrix(Mat2);

impl CoinMatrix {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, WalkError> {
        Self::from_matrix(Mat2::new(a, b, c, d))
    }

    pub fn from_matrix(m: Mat2) -> Result<Self, WalkError> {
        let defect = coin_defect(&m);
        if defect > IDENTITY_TOL {
            return Err(WalkError::NonUnitaryCoin { defect });
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> Mat2 {
        self.0
    }
}

/// Largest violation of the coin conditions: orthonormal rows, `|Δ| = 1`,
/// `c' = −Δ b̄'` and `d' = Δ ā'` where `Δ = a'd' − b'c'`.
pub fn coin_defect(m: &Mat2) -> f64 {
    let [[a, b], [c, d]] = m.0;
    let det = m.det();
    [
        (a.norm_sqr() + b.norm_sqr() - 1.0).abs(),
        (c.norm_sqr() + d.norm_sqr() - 1.0).abs(),
        (a * c.conj() + b * d.conj()).norm(),
        (det.norm() - 1.0).abs(),
        (c + det * b.conj()).norm(),
        (d - det * a.conj()).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// The block triple of one (generalized) walk step, written in `order`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinBlocks {
    pub p: Mat2,
    pub t: Mat2,
    pub q: Mat2,
    pub family: Family,
    pub order: ChiralityOrder,
}

impl CoinBlocks {
    pub fn new(
        p: Mat2,
        t: Mat2,
        q: Mat2,
        family: Family,
        order: ChiralityOrder,
    ) -> Result<Self, WalkError> {
        let blocks = Self {
            p,
            t,
            q,
            family,
            order,
        };
        let defect = blocks.unitarity_defect();
        if defect > IDENTITY_TOL {
            return Err(WalkError::NonUnitaryBlocks { defect });
        }
        Ok(blocks)
    }

    /// Largest entry-wise violation of `P†P + T†T + Q†Q = I`,
    /// `P†T + T†Q = 0` and `P†Q = 0`, which together make the
    /// block-tridiagonal walk operator unitary.
    pub fn unitarity_defect(&self) -> f64 {
        let (p, t, q) = (self.p, self.t, self.q);
        let diag = p.adjoint() * p + t.adjoint() * t + q.adjoint() * q;
        let near = p.adjoint() * t + t.adjoint() * q;
        let far = p.adjoint() * q;
        diag.max_abs_diff(&Mat2::IDENTITY)
            .max(near.max_abs())
            .max(far.max_abs())
    }

    pub fn is_plain(&self) -> bool {
        self.t == Mat2::ZERO
    }

    /// `P + T + Q`, the coin seen by a walker at rest.
    pub fn total(&self) -> Mat2 {
        self.p + self.t + self.q
    }

    /// The same operator written in the opposite chirality order.
    pub fn reordered(&self) -> Self {
        Self {
            p: self.q.swap_basis(),
            t: self.t.swap_basis(),
            q: self.p.swap_basis(),
            family: self.family,
            order: self.order.flipped(),
        }
    }
}

/// Splits a coin into the family's move matrices, L-upper:
/// A-type by rows (`P = [[a', b'], [0, 0]]`), B-type by columns
/// (`P = [[a', 0], [c', 0]]`).
pub fn plain_blocks(coin: &CoinMatrix, family: Family) -> CoinBlocks {
    let [[a, b], [c, d]] = coin.matrix().0;
    let (p, q) = match family {
        Family::A => (Mat2::new(a, b, ZERO, ZERO), Mat2::new(ZERO, ZERO, c, d)),
        Family::B => (Mat2::new(a, ZERO, c, ZERO), Mat2::new(ZERO, b, ZERO, d)),
    };
    CoinBlocks {
        p,
        t: Mat2::ZERO,
        q,
        family,
        order: ChiralityOrder::LUpper,
    }
}

/// Block form of `Ū` on paired QCA sites.
///
/// A-type pairs `(2k − 1, 2k)` as `(R, L)` and is written R-upper:
/// `P = [[d, c], [0, 0]]`, `T = [[b, a], [a, b]]`, `Q = [[0, 0], [c, d]]`.
/// B-type pairs `(2k, 2k + 1)` as `(L, R)` and is written L-upper:
/// `P = [[d, 0], [a, 0]]`, `T = [[b, c], [c, b]]`, `Q = [[0, a], [0, d]]`.
pub fn generalized_blocks_from_qca(params: &QcaParams, family: Family) -> CoinBlocks {
    let [a, b, c, d] = params.tuple();
    match family {
        Family::A => CoinBlocks {
            p: Mat2::new(d, c, ZERO, ZERO),
            t: Mat2::new(b, a, a, b),
            q: Mat2::new(ZERO, ZERO, c, d),
            family,
            order: ChiralityOrder::RUpper,
        },
        Family::B => CoinBlocks {
            p: Mat2::new(d, ZERO, a, ZERO),
            t: Mat2::new(b, c, c, b),
            q: Mat2::new(ZERO, a, ZERO, d),
            family,
            order: ChiralityOrder::LUpper,
        },
    }
}

/// Chirality 2-vectors keyed by walk site.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkState {
    sites: BTreeMap<i64, [Complex64; 2]>,
    order: ChiralityOrder,
}

impl WalkState {
    pub fn empty(order: ChiralityOrder) -> Self {
        Self {
            sites: BTreeMap::new(),
            order,
        }
    }

    /// The qubit placed at the origin: `α` on L, `β` on R.
    pub fn at_origin(qubit: &QubitState, order: ChiralityOrder) -> Self {
        let mut state = Self::empty(order);
        state.add_chiral(0, qubit.alpha(), qubit.beta());
        state
    }

    pub fn order(&self) -> ChiralityOrder {
        self.order
    }

    /// Adds `(upper, lower)` amplitudes at `site`, pruning round-off dust.
    pub fn add(&mut self, site: i64, v: [Complex64; 2]) {
        let slot = self.sites.entry(site).or_insert([ZERO; 2]);
        for (s, x) in slot.iter_mut().zip(v) {
            *s += x;
            if s.norm() < PRUNE_THRESHOLD {
                *s = ZERO;
            }
        }
        if slot.iter().all(|&s| s == ZERO) {
            self.sites.remove(&site);
        }
    }

    /// Adds amplitudes given by chirality rather than position.
    pub fn add_chiral(&mut self, site: i64, left: Complex64, right: Complex64) {
        let v = match self.order {
            ChiralityOrder::LUpper => [left, right],
            ChiralityOrder::RUpper => [right, left],
        };
        self.add(site, v);
    }

    /// `(upper, lower)` at `site`.
    pub fn get(&self, site: i64) -> [Complex64; 2] {
        self.sites.get(&site).copied().unwrap_or([ZERO; 2])
    }

    pub fn left(&self, site: i64) -> Complex64 {
        let v = self.get(site);
        match self.order {
            ChiralityOrder::LUpper => v[0],
            ChiralityOrder::RUpper => v[1],
        }
    }

    pub fn right(&self, site: i64) -> Complex64 {
        let v = self.get(site);
        match self.order {
            ChiralityOrder::LUpper => v[1],
            ChiralityOrder::RUpper => v[0],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, [Complex64; 2])> + '_ {
        self.sites.iter().map(|(&k, &v)| (k, v))
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> + '_ {
        self.sites.keys().copied()
    }

    pub fn norm_sq(&self) -> f64 {
        self.sites
            .values()
            .map(|v| v[0].norm_sqr() + v[1].norm_sqr())
            .sum()
    }

    /// Same physical state stored in the other chirality order.
    pub fn reordered(&self) -> Self {
        Self {
            sites: self.sites.iter().map(|(&k, v)| (k, [v[1], v[0]])).collect(),
            order: self.order.flipped(),
        }
    }

    /// Largest modulus of the difference at any site, per chirality.
    ///
    /// # Panics
    ///
    /// If the two states use different chirality orders.
    pub fn max_abs_diff(&self, other: &WalkState) -> f64 {
        assert_eq!(self.order, other.order, "compare states in the same order");
        self.sites
            .keys()
            .chain(other.sites.keys())
            .map(|&k| {
                let (x, y) = (self.get(k), other.get(k));
                (x[0] - y[0]).norm().max((x[1] - y[1]).norm())
            })
            .fold(0.0, f64::max)
    }
}

/// One step of the (generalized) walk.
pub fn walk_step(state: &WalkState, blocks: &CoinBlocks) -> Result<WalkState, WalkError> {
    if state.order != blocks.order {
        return Err(WalkError::ChiralityMismatch {
            state: state.order,
            blocks: blocks.order,
        });
    }
    // Scatter: the amplitude at site j reaches j - offset through P and
    // j + offset through Q.
    let offset = blocks.order.p_source_offset();
    let mut out = WalkState::empty(state.order);
    for (site, v) in state.iter() {
        out.add(site - offset, blocks.p.apply(v));
        out.add(site + offset, blocks.q.apply(v));
        if !blocks.is_plain() {
            out.add(site, blocks.t.apply(v));
        }
    }
    Ok(out)
}

/// `n` successive steps.
pub fn evolve_walk(
    state: &WalkState,
    blocks: &CoinBlocks,
    n: usize,
) -> Result<WalkState, WalkError> {
    let mut current = state.clone();
    for _ in 0..n {
        current = walk_step(&current, blocks)?;
    }
    Ok(current)
}

/// Position probabilities `|ψ^L_k|² + |ψ^R_k|²`.
pub fn walk_distribution(state: &WalkState) -> Distribution {
    Distribution::from_entries(
        state
            .iter()
            .map(|(k, v)| (k, v[0].norm_sqr() + v[1].norm_sqr())),
    )
}
