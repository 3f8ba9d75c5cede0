//! Construction of discrete Sobolev orthonormal families.
//!
//! The inner product is
//!
//! ```text
//! <p, q> = integral p q dmu + sum_{i=0}^r M_i p^(i)(c) q^(i)(c)
//! ```
//!
//! with all `M_i >= 0`. The family `q_n` is stored in the basis of the plain
//! orthonormal family `p_n` of `dmu` (lower-triangular coefficient rows with
//! positive diagonal), which keeps the construction well conditioned and
//! turns the integral part of the inner product into a dot product.
//!
//! Two independent construction routes are provided: the recursive
//! one-mass-at-a-time kernel update ([`SobolevFamily::build`]) and a Gram
//! matrix factorization ([`SobolevFamily::build_gram_oracle`]). They must
//! agree; tests treat the second as the oracle for the first.

use crate::error::{Error, Result};
use crate::measures::{MeasureSpec, RecurrenceTable};
use crate::opq::eval_with_derivatives;
use crate::scalar::{KahanSum, Real};

const MODULE: &str = "sobolev";

/// A validated discrete Sobolev inner product.
#[derive(Clone, Debug)]
pub struct SobolevProduct<R: Real> {
    measure: MeasureSpec<R>,
    c: R,
    masses: Vec<R>,
}

impl<R: Real> SobolevProduct<R> {
    /// `masses[i]` is the coefficient of `p^(i)(c) q^(i)(c)`; all must be
    /// nonnegative. The point must lie at or beyond an edge of the support,
    /// or at the origin for a symmetric measure.
    pub fn new(measure: MeasureSpec<R>, c: R, masses: Vec<R>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidParameter {
                module: MODULE,
                message: "at least one mass (possibly zero) is required".into(),
            });
        }
        if let Some(i) = masses.iter().position(|m| !(*m >= R::zero()) || !m.is_finite()) {
            return Err(Error::InvalidParameter {
                module: MODULE,
                message: format!("mass M_{i} must be finite and nonnegative"),
            });
        }
        let symmetric_origin = measure.is_symmetric() && c == R::zero();
        if !symmetric_origin && measure.edge_orientation(c).is_err() {
            return Err(Error::InvalidParameter {
                module: MODULE,
                message: format!(
                    "point {c} must sit at or beyond a support edge (or at 0 for a symmetric measure)"
                ),
            });
        }
        Ok(Self { measure, c, masses })
    }

    pub fn measure(&self) -> &MeasureSpec<R> {
        &self.measure
    }

    pub fn c(&self) -> R {
        self.c
    }

    pub fn masses(&self) -> &[R] {
        &self.masses
    }

    /// Highest derivative order carrying a mass.
    pub fn r(&self) -> usize {
        self.masses.len() - 1
    }
}

/// Norm ratios `gamma_{n,s} / gamma_{n,s-1}` recorded while absorbing the
/// positive mass of derivative order `order`.
#[derive(Clone, Debug)]
pub struct StageRatios<R: Real> {
    pub order: usize,
    pub ratios: Vec<R>,
}

/// A constructed Sobolev orthonormal family in the p-basis.
#[derive(Clone, Debug)]
pub struct SobolevFamily<R: Real> {
    coeffs: Vec<Vec<R>>,
    stage_ratios: Vec<StageRatios<R>>,
    base: RecurrenceTable<R>,
    c: R,
    masses: Vec<R>,
}

impl<R: Real> SobolevFamily<R> {
    /// Build by the recursive kernel construction, absorbing the positive
    /// masses one at a time in increasing derivative order.
    pub fn build(product: &SobolevProduct<R>, n_max: usize) -> Result<Self> {
        let base = product.measure.recurrence_coefficients(n_max)?;
        Self::build_from_table(&base, product.c, &product.masses, n_max)
    }

    /// Kernel construction on an explicit base table (the symmetrized
    /// half-line problems use this entry point).
    pub fn build_from_table(
        base: &RecurrenceTable<R>,
        c: R,
        masses: &[R],
        n_max: usize,
    ) -> Result<Self> {
        let order: Vec<usize> = (0..masses.len()).filter(|&j| masses[j] > R::zero()).collect();
        Self::build_with_stage_order(base, c, masses, n_max, &order)
    }

    /// Kernel construction with an explicit stage order (a permutation of the
    /// positive-mass derivative orders). The result must not depend on the
    /// order; exposing it makes that property testable.
    pub fn build_with_stage_order(
        base: &RecurrenceTable<R>,
        c: R,
        masses: &[R],
        n_max: usize,
        stage_order: &[usize],
    ) -> Result<Self> {
        validate_build_inputs(base, masses, n_max)?;
        {
            let mut sorted: Vec<usize> = stage_order.to_vec();
            sorted.sort_unstable();
            let expected: Vec<usize> =
                (0..masses.len()).filter(|&j| masses[j] > R::zero()).collect();
            if sorted != expected {
                return Err(Error::InvalidParameter {
                    module: MODULE,
                    message: "stage order must be a permutation of the positive-mass orders".into(),
                });
            }
        }

        let max_order = stage_order.iter().copied().max().unwrap_or(0);
        let p_at_c = eval_with_derivatives(base, n_max, c, max_order)?;

        // Stage 0: q_n = p_n.
        let mut coeffs: Vec<Vec<R>> = (0..=n_max)
            .map(|n| {
                let mut row = vec![R::zero(); n + 1];
                row[n] = R::one();
                row
            })
            .collect();
        let mut stage_ratios = Vec::with_capacity(stage_order.len());

        for &j in stage_order {
            let mass = masses[j];
            // Derivative values of the current family at c.
            let deriv_at_c: Vec<R> = coeffs
                .iter()
                .map(|row| {
                    let mut acc = KahanSum::new();
                    for (k, &cv) in row.iter().enumerate() {
                        acc.add(cv * p_at_c.value(k, j));
                    }
                    acc.value()
                })
                .collect();

            let mut new_coeffs: Vec<Vec<R>> = Vec::with_capacity(n_max + 1);
            let mut ratios = Vec::with_capacity(n_max + 1);
            // Prefix kernel K_{n-1}^{(0,j)}(x, c) in p-coefficients, and
            // K_{n-1}^{(j,j)}(c, c), both compensated.
            let mut kernel_vec = vec![R::zero(); n_max + 1];
            let mut kernel_carry = vec![R::zero(); n_max + 1];
            let mut kernel_cc = KahanSum::new();

            for n in 0..=n_max {
                let denom = R::one() + mass * kernel_cc.value();
                if !(denom > R::zero()) {
                    return Err(Error::NumericalBreakdown {
                        module: MODULE,
                        message: format!("kernel denominator not positive at degree {n}"),
                    });
                }
                let coef = mass * deriv_at_c[n] / denom;
                let ratio_sq_inv = R::one() + mass * deriv_at_c[n] * deriv_at_c[n] / denom;
                if !(ratio_sq_inv > R::zero()) {
                    return Err(Error::NumericalBreakdown {
                        module: MODULE,
                        message: format!("norm ratio not positive at degree {n}"),
                    });
                }
                let ratio = ratio_sq_inv.sqrt().recip();

                let old_row = &coeffs[n];
                let mut row = Vec::with_capacity(n + 1);
                for k in 0..=n {
                    row.push(ratio * (old_row[k] - coef * kernel_vec[k]));
                }
                ratios.push(ratio);

                // Fold degree n into the prefix kernel for the next degree.
                for (k, &cv) in old_row.iter().enumerate() {
                    let term = deriv_at_c[n] * cv;
                    let y = term - kernel_carry[k];
                    let t = kernel_vec[k] + y;
                    kernel_carry[k] = (t - kernel_vec[k]) - y;
                    kernel_vec[k] = t;
                }
                kernel_cc.add(deriv_at_c[n] * deriv_at_c[n]);
                new_coeffs.push(row);
            }
            coeffs = new_coeffs;
            stage_ratios.push(StageRatios { order: j, ratios });
        }

        Ok(Self {
            coeffs,
            stage_ratios,
            base: base.truncated(n_max),
            c,
            masses: masses.to_vec(),
        })
    }

    /// Independent construction: Cholesky-factor the Sobolev Gram matrix of
    /// the p-basis, `G = I + V^T diag(M) V` with `V[i][k] = p_k^(i)(c)`, and
    /// take the rows of the inverse factor.
    pub fn build_gram_oracle(product: &SobolevProduct<R>, n_max: usize) -> Result<Self> {
        let base = product.measure.recurrence_coefficients(n_max)?;
        Self::build_gram_from_table(&base, product.c, &product.masses, n_max)
    }

    /// Gram-route construction on an explicit base table.
    pub fn build_gram_from_table(
        base: &RecurrenceTable<R>,
        c: R,
        masses: &[R],
        n_max: usize,
    ) -> Result<Self> {
        validate_build_inputs(base, masses, n_max)?;
        let r = masses.len() - 1;
        let p_at_c = eval_with_derivatives(base, n_max, c, r)?;
        let dim = n_max + 1;

        // Lower triangle of G (dense storage; the rank of the correction is
        // only r+1 but the factorization wants the full leading blocks).
        let mut g = vec![R::zero(); dim * dim];
        for row in 0..dim {
            for col in 0..=row {
                let mut acc = KahanSum::new();
                if row == col {
                    acc.add(R::one());
                }
                for (i, &m) in masses.iter().enumerate() {
                    if m > R::zero() {
                        acc.add(m * p_at_c.value(row, i) * p_at_c.value(col, i));
                    }
                }
                g[row * dim + col] = acc.value();
            }
        }

        // In-place Cholesky, G = L L^T.
        for jcol in 0..dim {
            let mut diag = g[jcol * dim + jcol];
            for k in 0..jcol {
                diag = diag - g[jcol * dim + k] * g[jcol * dim + k];
            }
            if !(diag > R::zero()) {
                return Err(Error::NumericalBreakdown {
                    module: MODULE,
                    message: format!("Gram matrix lost positive definiteness at index {jcol}"),
                });
            }
            let l_jj = diag.sqrt();
            g[jcol * dim + jcol] = l_jj;
            for row in jcol + 1..dim {
                let mut v = g[row * dim + jcol];
                for k in 0..jcol {
                    v = v - g[row * dim + k] * g[jcol * dim + k];
                }
                g[row * dim + jcol] = v / l_jj;
            }
        }

        // Rows of L^{-1} by forward substitution; diagonal 1/L_nn > 0 gives
        // the positive leading coefficient.
        let mut coeffs: Vec<Vec<R>> = Vec::with_capacity(dim);
        for n in 0..dim {
            let mut row = vec![R::zero(); n + 1];
            row[n] = g[n * dim + n].recip();
            for k in (0..n).rev() {
                let mut acc = KahanSum::new();
                for m in k + 1..=n {
                    acc.add(g[m * dim + k] * row[m]);
                }
                row[k] = -acc.value() / g[k * dim + k];
            }
            coeffs.push(row);
        }

        Ok(Self {
            coeffs,
            stage_ratios: Vec::new(),
            base: base.truncated(n_max),
            c,
            masses: masses.to_vec(),
        })
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `p_k` in `q_n`.
    pub fn coefficient(&self, n: usize, k: usize) -> R {
        if k <= n {
            self.coeffs[n][k]
        } else {
            R::zero()
        }
    }

    /// Coefficient row of `q_n` over `p_0 .. p_n`.
    pub fn coefficients(&self, n: usize) -> &[R] {
        &self.coeffs[n]
    }

    pub fn base_table(&self) -> &RecurrenceTable<R> {
        &self.base
    }

    pub fn c(&self) -> R {
        self.c
    }

    pub fn masses(&self) -> &[R] {
        &self.masses
    }

    pub fn r(&self) -> usize {
        self.masses.len() - 1
    }

    /// Norm-ratio sequences recorded per absorbed mass (kernel route only).
    pub fn stage_ratios(&self) -> &[StageRatios<R>] {
        &self.stage_ratios
    }

    /// `q_n^(k)(x)` for `k <= max_deriv`.
    pub fn eval(&self, n: usize, x: R, max_deriv: usize) -> Result<Vec<R>> {
        if n > self.n_max() {
            return Err(Error::DegreeOutOfRange {
                module: MODULE,
                requested: n,
                capacity: self.n_max(),
            });
        }
        let p = eval_with_derivatives(&self.base, n, x, max_deriv)?;
        let row = &self.coeffs[n];
        Ok((0..=max_deriv)
            .map(|k| {
                let mut acc = KahanSum::new();
                for (i, &cv) in row.iter().enumerate() {
                    acc.add(cv * p.value(i, k));
                }
                acc.value()
            })
            .collect())
    }

    /// `q_n(x)`.
    pub fn value(&self, n: usize, x: R) -> Result<R> {
        Ok(self.eval(n, x, 0)?[0])
    }

    /// Derivative values `q_n^(k)(c)` for every degree at once
    /// (`result[n][k]`, `k <= max_deriv`).
    pub fn derivatives_at_c(&self, max_deriv: usize) -> Result<Vec<Vec<R>>> {
        let p = eval_with_derivatives(&self.base, self.n_max(), self.c, max_deriv)?;
        Ok(self
            .coeffs
            .iter()
            .map(|row| {
                (0..=max_deriv)
                    .map(|k| {
                        let mut acc = KahanSum::new();
                        for (i, &cv) in row.iter().enumerate() {
                            acc.add(cv * p.value(i, k));
                        }
                        acc.value()
                    })
                    .collect()
            })
            .collect())
    }

    /// Sobolev inner product of two polynomials given by p-basis coefficient
    /// vectors: orthonormality of the p-basis reduces the integral term to a
    /// dot product; the mass terms come from derivative values at c.
    pub fn inner(&self, f: &[R], g: &[R]) -> Result<R> {
        inner_from_table(&self.base, self.c, &self.masses, f, g)
    }
}

fn validate_build_inputs<R: Real>(
    base: &RecurrenceTable<R>,
    masses: &[R],
    n_max: usize,
) -> Result<()> {
    if n_max > base.n_max() {
        return Err(Error::DegreeOutOfRange {
            module: MODULE,
            requested: n_max,
            capacity: base.n_max(),
        });
    }
    if masses.is_empty() {
        return Err(Error::InvalidParameter {
            module: MODULE,
            message: "at least one mass is required".into(),
        });
    }
    if let Some(i) = masses.iter().position(|m| !(*m >= R::zero()) || !m.is_finite()) {
        return Err(Error::InvalidParameter {
            module: MODULE,
            message: format!("mass M_{i} must be finite and nonnegative"),
        });
    }
    Ok(())
}

/// Sobolev inner product against an explicit base table (see
/// [`SobolevFamily::inner`]).
pub fn inner_from_table<R: Real>(
    base: &RecurrenceTable<R>,
    c: R,
    masses: &[R],
    f: &[R],
    g: &[R],
) -> Result<R> {
    let len = f.len().max(g.len());
    if len > base.n_max() + 1 {
        return Err(Error::DegreeOutOfRange {
            module: MODULE,
            requested: len - 1,
            capacity: base.n_max(),
        });
    }
    let mut acc = KahanSum::new();
    for i in 0..f.len().min(g.len()) {
        acc.add(f[i] * g[i]);
    }
    let r = masses.len() - 1;
    if masses.iter().any(|m| *m > R::zero()) {
        let p = eval_with_derivatives(base, len.saturating_sub(1), c, r)?;
        for (i, &m) in masses.iter().enumerate() {
            if m > R::zero() {
                let df = dot_deriv(f, &p, i);
                let dg = dot_deriv(g, &p, i);
                acc.add(m * df * dg);
            }
        }
    }
    Ok(acc.value())
}

fn dot_deriv<R: Real>(coeffs: &[R], p: &crate::opq::EvalResult<R>, deriv: usize) -> R {
    let mut acc = KahanSum::new();
    for (k, &cv) in coeffs.iter().enumerate() {
        acc.add(cv * p.value(k, deriv));
    }
    acc.value()
}

/// One entry of a derivative-ratio table.
#[derive(Clone, Copy, Debug)]
pub struct DerivativeRatio<R: Real> {
    pub n: usize,
    /// `q_n^(k)(c) / p_n^(k)(c)`; `None` when the denominator vanishes
    /// (possible only away from a support edge).
    pub ratio: Option<R>,
    /// `n^{2 f(k) + 1} * ratio`, populated when `M_k > 0` and a scaling
    /// exponent function `f` was supplied.
    pub compensated: Option<R>,
}

/// Ratios `q_n^(k)(c) / p_n^(k)(c)` over a degree range. When the mass `M_k`
/// is positive the ratio decays like `n^-(2 f(k) + 1)`; passing the scaling
/// exponents `f(x) = slope * x + intercept` adds the compensated column that
/// should approach a nonzero constant.
pub fn derivative_ratio_table<R: Real>(
    family: &SobolevFamily<R>,
    k: usize,
    degrees: &[usize],
    f_exponents: Option<(R, R)>,
) -> Result<Vec<DerivativeRatio<R>>> {
    let max_n = degrees.iter().copied().max().unwrap_or(0);
    if max_n > family.n_max() {
        return Err(Error::DegreeOutOfRange {
            module: MODULE,
            requested: max_n,
            capacity: family.n_max(),
        });
    }
    let q_at_c = family.derivatives_at_c(k)?;
    let p_at_c = eval_with_derivatives(family.base_table(), max_n, family.c, k)?;
    let mass_positive = family.masses.get(k).map_or(false, |m| *m > R::zero());

    Ok(degrees
        .iter()
        .map(|&n| {
            let p_val = p_at_c.value(n, k);
            let scale = R::from_f64_lit(1e-13) * local_scale(&p_at_c, n, k);
            if p_val.abs() <= scale {
                return DerivativeRatio {
                    n,
                    ratio: None,
                    compensated: None,
                };
            }
            let ratio = q_at_c[n][k] / p_val;
            let compensated = match (mass_positive, f_exponents) {
                (true, Some((slope, intercept))) => {
                    let fk = slope * R::from_index(k) + intercept;
                    let exponent = R::from_f64_lit(2.0) * fk + R::one();
                    Some(R::from_index(n).powf(exponent) * ratio)
                }
                _ => None,
            };
            DerivativeRatio {
                n,
                ratio: Some(ratio),
                compensated,
            }
        })
        .collect())
}

fn local_scale<R: Real>(p: &crate::opq::EvalResult<R>, n: usize, k: usize) -> R {
    let lo = n.saturating_sub(2);
    let mut scale = R::zero();
    for i in lo..=n {
        scale = scale.max(p.value(i, k).abs());
    }
    scale.max(R::one())
}

/// Limit of `q_n^(r+1)(c) / p_n^(r+1)(c)` predicted by the derivative-ratio
/// analysis: the product of `(f(r+1) - f(j)) / (f(r+1) + f(j) + 1)` over the
/// positive-mass orders `j`.
pub fn derivative_ratio_limit<R: Real>(masses: &[R], f_slope: R, f_intercept: R) -> R {
    let r = masses.len() - 1;
    let f = |k: usize| f_slope * R::from_index(k) + f_intercept;
    let top = f(r + 1);
    masses
        .iter()
        .enumerate()
        .filter(|(_, m)| **m > R::zero())
        .map(|(j, _)| (top - f(j)) / (top + f(j) + R::one()))
        .fold(R::one(), |acc, t| acc * t)
}
