//! Measure catalog and three-term recurrence coefficients.
//!
//! A [`RecurrenceTable`] holds the coefficients of the orthonormal recurrence
//!
//! ```text
//! p_{k+1}(x) = ((x - alpha_k) p_k(x) - sqrt(beta_k) p_{k-1}(x)) / sqrt(beta_{k+1})
//! ```
//!
//! with `beta_0` the total mass of the measure and `p_0 = beta_0^{-1/2}`.
//! Jacobi and Laguerre tables come from closed forms; Freud tables from a
//! discretized Stieltjes procedure. [`christoffel_step`] maps the table of a
//! measure to the table of `|x - c| dmu` by a Cholesky LR step on the Jacobi
//! matrix, and [`ladder`] iterates it.

use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::opq::gauss_quadrature;
use crate::scalar::{KahanSum, Real};

const MODULE: &str = "measures";

/// Admissible Freud exponents (weight `exp(-2 |x|^a)`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreudExponent {
    Two,
    Four,
}

impl FreudExponent {
    pub fn value(self) -> u32 {
        match self {
            FreudExponent::Two => 2,
            FreudExponent::Four => 4,
        }
    }
}

/// Weight family with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeasureFamily<R: Real> {
    /// `2^(alpha-beta) (1-x)^alpha (1+x)^beta` on `[-1, 1]`, `alpha, beta > -1`.
    Jacobi { alpha: R, beta: R },
    /// `x^alpha e^(-x)` on `[0, inf)`, `alpha > -1`.
    Laguerre { alpha: R },
    /// `exp(-2 |x|^a)` on the real line, `a` in `{2, 4}`.
    Freud { alpha: FreudExponent },
}

/// A validated measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureSpec<R: Real> {
    family: MeasureFamily<R>,
}

/// Which side of the support a Christoffel shift point sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeOrientation {
    /// `c <= inf(supp)`, the factor `x - c` is nonnegative on the support.
    Left,
    /// `c >= sup(supp)`, the factor `c - x` is nonnegative on the support.
    Right,
}

impl<R: Real> MeasureSpec<R> {
    pub fn jacobi(alpha: R, beta: R) -> Result<Self> {
        let neg_one = -R::one();
        if !(alpha > neg_one) || !alpha.is_finite() || !(beta > neg_one) || !beta.is_finite() {
            return Err(Error::InvalidParameter {
                module: MODULE,
                message: format!("Jacobi parameters must be finite and > -1, got ({alpha}, {beta})"),
            });
        }
        Ok(Self {
            family: MeasureFamily::Jacobi { alpha, beta },
        })
    }

    pub fn laguerre(alpha: R) -> Result<Self> {
        if !(alpha > -R::one()) || !alpha.is_finite() {
            return Err(Error::InvalidParameter {
                module: MODULE,
                message: format!("Laguerre parameter must be finite and > -1, got {alpha}"),
            });
        }
        Ok(Self {
            family: MeasureFamily::Laguerre { alpha },
        })
    }

    pub fn freud(alpha: u32) -> Result<Self> {
        let alpha = match alpha {
            2 => FreudExponent::Two,
            4 => FreudExponent::Four,
            other => {
                return Err(Error::InvalidParameter {
                    module: MODULE,
                    message: format!("Freud exponent must be 2 or 4, got {other}"),
                })
            }
        };
        Ok(Self {
            family: MeasureFamily::Freud { alpha },
        })
    }

    pub fn family(&self) -> &MeasureFamily<R> {
        &self.family
    }

    pub fn support_inf(&self) -> R {
        match self.family {
            MeasureFamily::Jacobi { .. } => -R::one(),
            MeasureFamily::Laguerre { .. } => R::zero(),
            MeasureFamily::Freud { .. } => R::neg_infinity(),
        }
    }

    pub fn support_sup(&self) -> R {
        match self.family {
            MeasureFamily::Jacobi { .. } => R::one(),
            MeasureFamily::Laguerre { .. } => R::infinity(),
            MeasureFamily::Freud { .. } => R::infinity(),
        }
    }

    /// Symmetry about the origin.
    pub fn is_symmetric(&self) -> bool {
        match self.family {
            MeasureFamily::Jacobi { alpha, beta } => alpha == beta,
            MeasureFamily::Laguerre { .. } => false,
            MeasureFamily::Freud { .. } => true,
        }
    }

    /// Classify `c` relative to the support; `c` strictly inside is an error.
    pub fn edge_orientation(&self, c: R) -> Result<EdgeOrientation> {
        if c <= self.support_inf() {
            Ok(EdgeOrientation::Left)
        } else if c >= self.support_sup() {
            Ok(EdgeOrientation::Right)
        } else {
            Err(Error::InvalidParameter {
                module: MODULE,
                message: format!("point {c} lies in the interior of the support"),
            })
        }
    }

    /// Three-term recurrence coefficients up to degree `n_max`.
    pub fn recurrence_coefficients(&self, n_max: usize) -> Result<RecurrenceTable<R>> {
        recurrence_coefficients(self, n_max)
    }
}

/// Recurrence coefficients of an orthonormal polynomial family.
///
/// `alpha` has `n_max` entries (`alpha_0 .. alpha_{n_max-1}`), `beta` has
/// `n_max + 1` entries with `beta[0]` the total mass. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceTable<R: Real> {
    alpha: Vec<R>,
    beta: Vec<R>,
}

impl<R: Real> RecurrenceTable<R> {
    /// Build from raw coefficient vectors. `beta` must be one longer than
    /// `alpha` and strictly positive.
    pub fn new(alpha: Vec<R>, beta: Vec<R>) -> Result<Self> {
        if beta.len() != alpha.len() + 1 {
            return Err(Error::InvalidParameter {
                module: MODULE,
                message: format!(
                    "beta must have one more entry than alpha ({} vs {})",
                    beta.len(),
                    alpha.len()
                ),
            });
        }
        if let Some(k) = beta.iter().position(|b| !(*b > R::zero()) || !b.is_finite()) {
            return Err(Error::InvalidParameter {
                module: MODULE,
                message: format!("beta[{k}] is not positive and finite"),
            });
        }
        Ok(Self { alpha, beta })
    }

    /// Highest usable polynomial degree.
    pub fn n_max(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self, k: usize) -> R {
        self.alpha[k]
    }

    pub fn beta(&self, k: usize) -> R {
        self.beta[k]
    }

    /// Total mass of the measure.
    pub fn mass(&self) -> R {
        self.beta[0]
    }

    pub fn alphas(&self) -> &[R] {
        &self.alpha
    }

    pub fn betas(&self) -> &[R] {
        &self.beta
    }

    /// `ln gamma_n` where `gamma_n = (beta_0 beta_1 ... beta_n)^{-1/2}` is the
    /// leading coefficient of `p_n`. Kept in log form: the product under- or
    /// overflows binary64 well before degree 200.
    pub fn log_leading(&self, n: usize) -> R {
        let half = R::from_f64_lit(0.5);
        let mut acc = KahanSum::new();
        for k in 0..=n {
            acc.add(self.beta[k].ln());
        }
        -half * acc.value()
    }

    /// Ratio `gamma_n(self) / gamma_m(other)` of leading coefficients,
    /// evaluated through logs.
    pub fn leading_ratio(&self, n: usize, other: &Self, m: usize) -> R {
        (self.log_leading(n) - other.log_leading(m)).exp()
    }

    /// Truncate to a smaller degree bound (no-op if already small enough).
    pub fn truncated(&self, n_max: usize) -> Self {
        if n_max >= self.n_max() {
            return self.clone();
        }
        Self {
            alpha: self.alpha[..n_max].to_vec(),
            beta: self.beta[..=n_max].to_vec(),
        }
    }
}

/// Recurrence coefficients for a supported measure.
///
/// Jacobi and Laguerre use closed forms; Freud runs the discretized Stieltjes
/// procedure on a composite Gauss-Legendre grid, refined until the `beta_k`
/// stabilize to 1e-12 relative.
pub fn recurrence_coefficients<R: Real>(
    measure: &MeasureSpec<R>,
    n_max: usize,
) -> Result<RecurrenceTable<R>> {
    if n_max < 1 {
        return Err(Error::InvalidParameter {
            module: MODULE,
            message: "degree bound must be at least 1".into(),
        });
    }
    match *measure.family() {
        MeasureFamily::Laguerre { alpha } => Ok(laguerre_table(alpha, n_max)),
        MeasureFamily::Jacobi { alpha, beta } => Ok(jacobi_table(alpha, beta, n_max)),
        MeasureFamily::Freud { alpha } => freud_table(alpha, n_max),
    }
}

fn laguerre_table<R: Real>(alpha: R, n_max: usize) -> RecurrenceTable<R> {
    let two = R::from_f64_lit(2.0);
    let a: Vec<R> = (0..n_max)
        .map(|k| two * R::from_index(k) + alpha + R::one())
        .collect();
    let mut b = Vec::with_capacity(n_max + 1);
    b.push(gamma(alpha + R::one()));
    for k in 1..=n_max {
        let kf = R::from_index(k);
        b.push(kf * (kf + alpha));
    }
    RecurrenceTable { alpha: a, beta: b }
}

fn jacobi_table<R: Real>(alpha: R, beta: R, n_max: usize) -> RecurrenceTable<R> {
    let one = R::one();
    let two = R::from_f64_lit(2.0);
    let four = R::from_f64_lit(4.0);
    let s = alpha + beta;

    let mut a = Vec::with_capacity(n_max);
    a.push((beta - alpha) / (s + two));
    for k in 1..n_max {
        let kf = R::from_index(k);
        let t = two * kf + s;
        a.push((beta * beta - alpha * alpha) / (t * (t + two)));
    }

    let mut b = Vec::with_capacity(n_max + 1);
    // Total mass of 2^(alpha-beta) (1-x)^alpha (1+x)^beta on [-1, 1].
    let mass = two.powf(two * alpha + one) * gamma(alpha + one) * gamma(beta + one)
        / gamma(s + two);
    b.push(mass);
    if n_max >= 1 {
        // k = 1 in the cancelled form: the general expression is 0/0 at
        // alpha + beta = -1.
        b.push(four * (one + alpha) * (one + beta) / ((s + two) * (s + two) * (s + two + one)));
    }
    for k in 2..=n_max {
        let kf = R::from_index(k);
        let t = two * kf + s;
        b.push(
            four * kf * (kf + alpha) * (kf + beta) * (kf + s)
                / (t * t * (t + one) * (t - one)),
        );
    }
    RecurrenceTable { alpha: a, beta: b }
}

/// Discretized recurrence coefficients for the symmetric Freud weight
/// `exp(-2 |x|^a)`.
///
/// The grid is a composite Gauss-Legendre rule on `[0, X]` plus its mirror
/// image, with `X` chosen so the weight tail beyond `X` is below 1e-18 of the
/// total mass. The panel count doubles until all `beta_k` are stable to 1e-12
/// relative. The reduction from the discrete measure to recurrence
/// coefficients uses the Lanczos-type (Gragg-Harrod) recursion: the plain
/// Stieltjes recursion is pseudo-unstable on unbounded supports and saturates
/// at the discretization scale near degree 15.
/// The f64 discretization is limited by weight representability: past this
/// degree the weight underflows at the turning point of the needed
/// polynomials. For `exp(-2x^2)` that happens near degree 370; we switch to
/// the exact scaled-Hermite coefficients well before.
const FREUD_TWO_DISCRETIZATION_LIMIT: usize = 256;

fn freud_table<R: Real>(exponent: FreudExponent, n_max: usize) -> Result<RecurrenceTable<R>> {
    let a = exponent.value() as f64;
    if exponent == FreudExponent::Two && n_max > FREUD_TWO_DISCRETIZATION_LIMIT {
        // exp(-2x^2) is Hermite under x -> sqrt(2) x: beta_k = k/4 exactly.
        // The discretized route cannot reach these degrees in binary64 (the
        // weight is below the smallest subnormal at the turning point); the
        // two routes are cross-checked at lower degree in the tests.
        let alpha = vec![R::zero(); n_max];
        let mut beta = Vec::with_capacity(n_max + 1);
        beta.push(R::from_f64_lit((std::f64::consts::PI / 2.0).sqrt()));
        let quarter = R::from_f64_lit(0.25);
        for k in 1..=n_max {
            beta.push(R::from_index(k) * quarter);
        }
        return RecurrenceTable::new(alpha, beta);
    }
    let cutoff = R::from_f64_lit(freud_cutoff(a, n_max)?);
    let weight = move |x: R| {
        let two = R::from_f64_lit(2.0);
        (-two * x.abs().powf(R::from_f64_lit(a))).exp()
    };

    let nodes_per_panel = 24;
    let panel_rule = legendre_panel_rule::<R>(nodes_per_panel)?;
    let target = R::from_f64_lit(1e-12);

    let mut previous: Option<Vec<R>> = None;
    let mut achieved = R::infinity();
    let mut panels = 16usize.max(n_max / 8);
    for _ in 0..6 {
        let (mut points, mut weights) = symmetric_discretization(&panel_rule, cutoff, panels, &weight);
        sort_by_ascending_weight(&mut points, &mut weights);
        let betas = lanczos_recurrence(&points, &weights, n_max);
        if let Some(prev) = &previous {
            achieved = betas
                .iter()
                .zip(prev.iter())
                .map(|(b, p)| ((*b - *p) / *b).abs())
                .fold(R::zero(), R::max);
            if achieved <= target {
                let alpha = vec![R::zero(); n_max];
                return RecurrenceTable::new(alpha, betas);
            }
        }
        previous = Some(betas);
        panels *= 2;
    }
    Err(Error::NonConvergence {
        module: MODULE,
        what: "discretized recurrence refinement",
        residual: achieved.to_f64().unwrap_or(f64::NAN),
    })
}

/// Truncation point for the Freud discretization.
///
/// A mass-based tail criterion is not enough: the grid must cover the zero
/// region of the highest-degree polynomials (the Mhaskar-Rakhmanov-Saff
/// interval) with a buffer, and the moment integrand `x^{2n} w(x)` at the
/// cutoff must sit far below its saddle-point peak. Otherwise the computed
/// `beta_k` saturate at the truncation scale instead of growing. The cutoff
/// is also capped where the weight underflows to zero in binary64; if the
/// required interval does not fit under that cap the degree is not reachable
/// by discretization.
fn freud_cutoff(a: f64, n_max: usize) -> Result<f64> {
    let n = (n_max + 8).max(1) as f64;

    // Saddle-point criterion on x^{2n} w(x).
    let log_density = |x: f64| 2.0 * n * x.ln() - 2.0 * x.powf(a);
    let saddle = (n / a).powf(1.0 / a);
    let target = log_density(saddle) - 50.0;
    let mut lo = saddle;
    let mut hi = saddle.max(1.0);
    while log_density(hi) > target {
        hi *= 2.0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if log_density(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // The grid must cover the zero region, whose edge is 2 sqrt(beta_n):
    // beta_n = n/4 exactly for a = 2, and 24 beta_n^2 ~ n (string relation)
    // for a = 4.
    let beta_n = match a as u32 {
        2 => n / 4.0,
        4 => (n / 24.0).sqrt(),
        _ => unreachable!("validated exponent"),
    };
    let zero_edge = 2.0 * beta_n.sqrt();
    let needed = hi.max(1.15 * zero_edge);

    // exp(-2 x^a) underflows past 2 x^a > 744.
    let representable = 372.0f64.powf(1.0 / a);
    if 1.1 * zero_edge > representable {
        return Err(Error::DegreeOutOfRange {
            module: MODULE,
            requested: n_max,
            capacity: FREUD_TWO_DISCRETIZATION_LIMIT,
        });
    }
    Ok(needed.min(representable))
}

/// Gauss-Legendre nodes and weights on the reference panel `[-1, 1]`.
fn legendre_panel_rule<R: Real>(n: usize) -> Result<(Vec<R>, Vec<R>)> {
    let legendre = jacobi_table(R::zero(), R::zero(), n);
    gauss_quadrature(&legendre, n)
}

/// Composite rule for `w(x) dx` on `[-X, X]`, mirrored about the origin.
fn symmetric_discretization<R: Real>(
    panel_rule: &(Vec<R>, Vec<R>),
    cutoff: R,
    panels: usize,
    weight: &impl Fn(R) -> R,
) -> (Vec<R>, Vec<R>) {
    let (ref_x, ref_w) = panel_rule;
    let half = R::from_f64_lit(0.5);
    let width = cutoff / R::from_index(panels);
    let mut points = Vec::with_capacity(2 * panels * ref_x.len());
    let mut weights = Vec::with_capacity(points.capacity());
    for p in 0..panels {
        let lo = width * R::from_index(p);
        let mid = lo + half * width;
        for (&xi, &wi) in ref_x.iter().zip(ref_w.iter()) {
            let x = mid + half * width * xi;
            let w = half * width * wi * weight(x);
            points.push(x);
            weights.push(w);
            points.push(-x);
            weights.push(w);
        }
    }
    (points, weights)
}

/// Order discretization points by ascending weight. The reduction inserts
/// points one at a time and forms ratios of the incoming weight against the
/// accumulated prefix mass; ascending order keeps those ratios moderate,
/// where insertion of an exponentially small weight into an O(1) mass
/// underflows and silently drops the tail information.
fn sort_by_ascending_weight<R: Real>(points: &mut [R], weights: &mut [R]) {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| weights[a].partial_cmp(&weights[b]).expect("finite weights"));
    let sorted_points: Vec<R> = order.iter().map(|&i| points[i]).collect();
    let sorted_weights: Vec<R> = order.iter().map(|&i| weights[i]).collect();
    points.copy_from_slice(&sorted_points);
    weights.copy_from_slice(&sorted_weights);
}

/// Lanczos-type (Gragg-Harrod / RKPW) reduction of a discrete measure to its
/// recurrence coefficients. Only the `beta` sequence is returned; the grid is
/// symmetric so the centers are zero by parity.
fn lanczos_recurrence<R: Real>(points: &[R], weights: &[R], n_max: usize) -> Vec<R> {
    let ncap = points.len();
    assert!(ncap > n_max, "discretization must exceed the degree bound");
    let mut p0: Vec<R> = points.to_vec();
    let mut p1: Vec<R> = vec![R::zero(); ncap];
    p1[0] = weights[0];

    for i in 0..ncap - 1 {
        let mut pi = weights[i + 1];
        let mut gam = R::one();
        let mut sig = R::zero();
        let mut t = R::zero();
        let lam = points[i + 1];
        for k in 0..=i + 1 {
            let rho = p1[k] + pi;
            let tmp = gam * rho;
            let tsig = sig;
            if rho <= R::zero() {
                gam = R::one();
                sig = R::zero();
            } else {
                gam = p1[k] / rho;
                sig = pi / rho;
            }
            let tk = sig * (p0[k] - lam) - gam * t;
            p0[k] = p0[k] - (tk - t);
            t = tk;
            pi = if sig <= R::zero() {
                tsig * p1[k]
            } else {
                t * t / sig
            };
            p1[k] = tmp;
        }
    }
    p1.truncate(n_max + 1);
    p1
}

/// One Christoffel step: the recurrence table of `|x - c| dmu` from the table
/// of `dmu`, with one fewer usable degree.
///
/// Implemented as the shifted Cholesky LR step on the Jacobi matrix: factor
/// `J - cI = L L^T` (left edge) or `cI - J = L L^T` (right edge), reassemble
/// `L^T L` and shift back. The new total mass is recomputed by quadrature
/// against the source table so that leading coefficients stay exact.
pub fn christoffel_step<R: Real>(
    table: &RecurrenceTable<R>,
    c: R,
    orientation: EdgeOrientation,
) -> Result<RecurrenceTable<R>> {
    let n = table.n_max();
    if n < 2 {
        return Err(Error::DegreeOutOfRange {
            module: MODULE,
            requested: 2,
            capacity: n,
        });
    }
    let shifted = |d: R| match orientation {
        EdgeOrientation::Left => d - c,
        EdgeOrientation::Right => c - d,
    };

    // Bidiagonal Cholesky of the shifted Jacobi matrix: diag l_k, subdiag m_k.
    let mut l_sq = Vec::with_capacity(n);
    let mut m_sq = Vec::with_capacity(n);
    m_sq.push(R::zero()); // unused slot so m_sq[k] pairs with e_k
    let d0 = shifted(table.alpha(0));
    if !(d0 > R::zero()) {
        return Err(Error::ChristoffelBreakdown { pivot: 0 });
    }
    l_sq.push(d0);
    for k in 1..n {
        let e_sq = table.beta(k);
        let mk_sq = e_sq / l_sq[k - 1];
        let pivot = shifted(table.alpha(k)) - mk_sq;
        if !(pivot > R::zero()) {
            return Err(Error::ChristoffelBreakdown { pivot: k });
        }
        m_sq.push(mk_sq);
        l_sq.push(pivot);
    }

    // Reassemble L^T L and undo the shift. The last diagonal entry of L^T L
    // would need the truncated m_n, so the new table loses one degree.
    let new_n = n - 1;
    let mut alpha = Vec::with_capacity(new_n);
    for k in 0..new_n {
        let t = l_sq[k] + m_sq[k + 1];
        alpha.push(match orientation {
            EdgeOrientation::Left => t + c,
            EdgeOrientation::Right => c - t,
        });
    }
    let mut beta = Vec::with_capacity(new_n + 1);
    beta.push(transformed_mass(table, c)?);
    for k in 1..=new_n {
        beta.push(m_sq[k] * l_sq[k]);
    }
    RecurrenceTable::new(alpha, beta)
}

/// Total mass of `|x - c| dmu` by a two-point Gauss rule of the source table
/// (exact: the integrand is degree one on the support side of `c`).
fn transformed_mass<R: Real>(table: &RecurrenceTable<R>, c: R) -> Result<R> {
    let (nodes, weights) = gauss_quadrature(table, 2.min(table.n_max()))?;
    let mut acc = KahanSum::new();
    for (&x, &w) in nodes.iter().zip(weights.iter()) {
        acc.add(w * (x - c).abs());
    }
    Ok(acc.value())
}

/// Recurrence tables for the measures `|x - c|^j dmu`, `j = 0..=depth`.
#[derive(Clone, Debug)]
pub struct ChristoffelLadder<R: Real> {
    tables: Vec<RecurrenceTable<R>>,
    c: R,
    orientation: EdgeOrientation,
}

impl<R: Real> ChristoffelLadder<R> {
    /// Number of levels above the base table.
    pub fn depth(&self) -> usize {
        self.tables.len() - 1
    }

    /// Table of `|x - c|^j dmu`.
    pub fn table(&self, j: usize) -> &RecurrenceTable<R> {
        &self.tables[j]
    }

    pub fn c(&self) -> R {
        self.c
    }

    pub fn orientation(&self) -> EdgeOrientation {
        self.orientation
    }

    /// Sign relating the signed and absolute modifications:
    /// `(x - c)^j dmu = sign(j) |x - c|^j dmu`. Always `+1` at a left edge;
    /// `(-1)^j` at a right edge. Even levels, the only ones entering the
    /// connection formula, are insensitive to it.
    pub fn sign(&self, j: usize) -> R {
        match self.orientation {
            EdgeOrientation::Left => R::one(),
            EdgeOrientation::Right => {
                if j % 2 == 0 {
                    R::one()
                } else {
                    -R::one()
                }
            }
        }
    }
}

/// Build a Christoffel ladder for a measure, deriving the edge orientation
/// from the location of `c`. The base table is sized so that level `depth`
/// still supports degree `n_max`.
pub fn ladder<R: Real>(
    measure: &MeasureSpec<R>,
    c: R,
    depth: usize,
    n_max: usize,
) -> Result<ChristoffelLadder<R>> {
    let orientation = measure.edge_orientation(c)?;
    let base = recurrence_coefficients(measure, n_max + depth)?;
    ladder_from_table(&base, c, orientation, depth)
}

/// Ladder built on an explicit base table (used by the symmetrized half-line
/// problems, where the measure is not in the named catalog).
pub fn ladder_from_table<R: Real>(
    base: &RecurrenceTable<R>,
    c: R,
    orientation: EdgeOrientation,
    depth: usize,
) -> Result<ChristoffelLadder<R>> {
    let mut tables = Vec::with_capacity(depth + 1);
    tables.push(base.clone());
    for j in 0..depth {
        let next = christoffel_step(&tables[j], c, orientation)?;
        tables.push(next);
    }
    Ok(ChristoffelLadder {
        tables,
        c,
        orientation,
    })
}


#[cfg(test)]
mod discretization_tests {
    use super::*;

    /// The discretized route (used up to the crossover degree) and the closed
    /// form (used beyond) must agree where both are available.
    #[test]
    fn freud_two_routes_agree_at_crossover() {
        let n_max = 200usize;
        let table = MeasureSpec::<f64>::freud(2)
            .unwrap()
            .recurrence_coefficients(n_max)
            .unwrap();
        assert!(
            ((table.beta(0) - (std::f64::consts::PI / 2.0).sqrt()) / table.beta(0)).abs() < 1e-12
        );
        for k in 1..=n_max {
            let exact = k as f64 / 4.0;
            assert!(
                ((table.beta(k) - exact) / exact).abs() < 1e-12,
                "beta_{k} = {} vs {}",
                table.beta(k),
                exact
            );
        }
    }

    /// Independent structural check for the alpha = 4 exponent: the string
    /// relation 8 b_n (b_{n-1} + b_n + b_{n+1}) = n holds for exp(-2 x^4).
    #[test]
    fn freud_four_string_relation() {
        let table = MeasureSpec::<f64>::freud(4)
            .unwrap()
            .recurrence_coefficients(40)
            .unwrap();
        for n in 2..39usize {
            let lhs = 8.0
                * table.beta(n)
                * (table.beta(n - 1) + table.beta(n) + table.beta(n + 1));
            assert!(
                (lhs - n as f64).abs() < 1e-10,
                "string relation at n={n}: {lhs}"
            );
        }
    }

    #[test]
    fn freud_two_high_degree_uses_closed_form() {
        let table = MeasureSpec::<f64>::freud(2)
            .unwrap()
            .recurrence_coefficients(410)
            .unwrap();
        assert_eq!(table.beta(404), 101.0);
    }

    #[test]
    fn freud_four_degree_limit_reported() {
        match MeasureSpec::<f64>::freud(4)
            .unwrap()
            .recurrence_coefficients(2000)
        {
            Err(Error::DegreeOutOfRange { .. }) => {}
            other => panic!("expected degree error, got {:?}", other.map(|t| t.n_max())),
        }
    }
}
