//! Hard-edge asymptotics: Mehler-Heine scaling laws, scaled evaluation,
//! convergence-error tables, Sobolev zeros and zero-acceleration tables.
//!
//! Near a hard edge `c` the plain orthonormal family satisfies a local limit
//! of the form
//!
//! ```text
//! a_n^{1/2} p_n(c + z^2 / b_n)  ->  z^(-nu) J_nu(2z)
//! ```
//!
//! (with `c - z^2/b_n` at a right edge and `z/b_n` at the origin of a
//! symmetric measure), and the Sobolev family with all masses positive trades
//! `J_nu` for `(-1)^(r+1) J_(nu+2r+2)` at unchanged scale. Scaled evaluation
//! here folds the edge parity `(-1)^n` of the positive-leading convention
//! into the output so the returned sequences converge to those fixed limit
//! functions.

use crate::bessel::bessel_j_scaled;
use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::hessenberg::Hessenberg;
use crate::measures::{MeasureFamily, MeasureSpec, RecurrenceTable};
use crate::opq::eval_with_derivatives;
use crate::scalar::Real;
use crate::sobolev::SobolevFamily;
use crate::symmetry::reconstruct_value;

const MODULE: &str = "asymptotics";

/// Where the scaled evaluation point approaches its limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MhEdge {
    /// `c + z^2 / b_n`, `c` the lower support endpoint.
    Left,
    /// `c - z^2 / b_n`, `c` the upper support endpoint.
    Right,
    /// `z / b_n` around the origin of a symmetric measure.
    SymmetricOrigin,
}

/// Mehler-Heine scaling data of a measure at a hard edge: `a_n^{-1/2} = A n^a`
/// and `b_n = B n^b`, the Bessel order `nu`, and the edge orientation. The
/// exponents also define `f(k) = b k + a`, the growth exponent of the k-th
/// derivative at the edge.
#[derive(Clone, Copy, Debug)]
pub struct ScalingLaw<R: Real> {
    a_prefactor: R,
    a_exponent: R,
    b_prefactor: R,
    b_exponent: R,
    nu: R,
    edge: MhEdge,
    c: R,
}

impl<R: Real> ScalingLaw<R> {
    /// `a_n^{-1/2}`.
    pub fn a_inv_sqrt(&self, n: usize) -> R {
        self.a_prefactor * R::from_index(n).powf(self.a_exponent)
    }

    /// `a_n^{1/2}`.
    pub fn a_sqrt(&self, n: usize) -> R {
        self.a_inv_sqrt(n).recip()
    }

    /// `b_n`.
    pub fn b(&self, n: usize) -> R {
        self.b_prefactor * R::from_index(n).powf(self.b_exponent)
    }

    pub fn nu(&self) -> R {
        self.nu
    }

    pub fn edge(&self) -> MhEdge {
        self.edge
    }

    /// The edge point (the origin for symmetric laws).
    pub fn c(&self) -> R {
        self.c
    }

    /// Slope of `f(k) = b k + a`.
    pub fn f_slope(&self) -> R {
        self.b_exponent
    }

    /// Intercept of `f(k) = b k + a`.
    pub fn f_intercept(&self) -> R {
        self.a_exponent
    }

    pub fn f(&self, k: usize) -> R {
        self.b_exponent * R::from_index(k) + self.a_exponent
    }

    /// Scaled evaluation point for index `n`.
    pub fn argument(&self, n: usize, z: R) -> R {
        match self.edge {
            MhEdge::Left => self.c + z * z / self.b(n),
            MhEdge::Right => self.c - z * z / self.b(n),
            MhEdge::SymmetricOrigin => z / self.b(n),
        }
    }

    /// Edge-parity sign folded into scaled outputs so they converge: `+1` at
    /// a right edge, `(-1)^n` at a left edge (`n` the scaling index).
    fn parity(&self, n: usize) -> R {
        match self.edge {
            MhEdge::Right => R::one(),
            MhEdge::Left | MhEdge::SymmetricOrigin => {
                if n % 2 == 0 {
                    R::one()
                } else {
                    -R::one()
                }
            }
        }
    }
}

/// Catalog of scaling laws. For Jacobi the edge follows the sign of `c`
/// (`nu = alpha` at `+1`, `nu = beta` at `-1`); Laguerre scales at its lower
/// edge `c = 0`, Freud at the symmetric origin.
pub fn scaling_law<R: Real>(measure: &MeasureSpec<R>, c: R) -> Result<ScalingLaw<R>> {
    let half = R::from_f64_lit(0.5);
    let two = R::from_f64_lit(2.0);
    match *measure.family() {
        MeasureFamily::Laguerre { alpha } => {
            if c != R::zero() {
                return Err(Error::InvalidParameter {
                    module: MODULE,
                    message: "Laguerre scaling law is defined at the edge c = 0".into(),
                });
            }
            Ok(ScalingLaw {
                a_prefactor: R::one(),
                a_exponent: alpha * half,
                b_prefactor: R::one(),
                b_exponent: R::one(),
                nu: alpha,
                edge: MhEdge::Left,
                c,
            })
        }
        MeasureFamily::Jacobi { alpha, beta } => {
            let (nu, edge) = if c == R::one() {
                (alpha, MhEdge::Right)
            } else if c == -R::one() {
                (beta, MhEdge::Left)
            } else {
                return Err(Error::InvalidParameter {
                    module: MODULE,
                    message: "Jacobi scaling law is defined at c = 1 or c = -1".into(),
                });
            };
            // The 2^(alpha-beta) weight normalization makes the amplitude
            // prefactor 2^-alpha at BOTH edges (reflect x -> -x to see it);
            // it coincides with 2^-nu only at the right edge.
            Ok(ScalingLaw {
                a_prefactor: two.powf(-alpha),
                a_exponent: nu + half,
                b_prefactor: half,
                b_exponent: two,
                nu,
                edge,
                c,
            })
        }
        MeasureFamily::Freud { alpha } => {
            if c != R::zero() {
                return Err(Error::InvalidParameter {
                    module: MODULE,
                    message: "Freud scaling law is defined at the origin".into(),
                });
            }
            let a = R::from_index(alpha.value() as usize);
            // c_a = (sqrt(pi)/2) Gamma(a/2) / Gamma((a+1)/2)
            let c_a = R::from_f64_lit(std::f64::consts::PI.sqrt() / 2.0) * gamma(a * half)
                / gamma((a + R::one()) * half);
            let two_ca = two * c_a;
            Ok(ScalingLaw {
                a_prefactor: two.sqrt() * two_ca.powf(-(two * a).recip()),
                a_exponent: -(two * a).recip(),
                b_prefactor: a / (a - R::one()) * two_ca.powf(-a.recip()),
                b_exponent: R::one() - a.recip(),
                nu: -half,
                edge: MhEdge::SymmetricOrigin,
                c,
            })
        }
    }
}

/// Scaled evaluation of a ladder-level polynomial at an edge law:
/// `(+-1) a_n^{1/2} b_n^{-j} p_n(arg)` for the family of `|x-c|^{2j} dmu`,
/// which converges to [`mh_limit_ladder`].
pub fn scaled_eval_table<R: Real>(
    table: &RecurrenceTable<R>,
    law: &ScalingLaw<R>,
    n: usize,
    z: R,
    half_level: usize,
) -> Result<R> {
    if law.edge == MhEdge::SymmetricOrigin {
        return Err(Error::InvalidParameter {
            module: MODULE,
            message: "use the symmetric entry points for origin laws".into(),
        });
    }
    let x = law.argument(n, z);
    let p = eval_with_derivatives(table, n, x, 0)?;
    let scale = law.a_sqrt(n) * law.b(n).powf(-R::from_index(half_level));
    Ok(law.parity(n) * scale * p.value(n, 0))
}

/// Scaled evaluation of a Sobolev polynomial at an edge law:
/// `(+-1) a_n^{1/2} q_n(arg)`, converging to [`mh_limit_q`] when all masses
/// are positive.
pub fn scaled_eval_q<R: Real>(
    family: &SobolevFamily<R>,
    law: &ScalingLaw<R>,
    n: usize,
    z: R,
) -> Result<R> {
    if law.edge == MhEdge::SymmetricOrigin {
        return Err(Error::InvalidParameter {
            module: MODULE,
            message: "use the symmetric entry points for origin laws".into(),
        });
    }
    let x = law.argument(n, z);
    Ok(law.parity(n) * law.a_sqrt(n) * family.value(n, x)?)
}

/// Scaled evaluation of a plain symmetric-family polynomial of degree `m`
/// (`p_{2n}` or `p_{2n+1}`, scaling index `n = m/2`).
pub fn scaled_eval_symmetric_table<R: Real>(
    table: &RecurrenceTable<R>,
    law: &ScalingLaw<R>,
    m: usize,
    z: R,
) -> Result<R> {
    let n = m / 2;
    let x = law.argument(n, z);
    let p = eval_with_derivatives(table, m, x, 0)?;
    Ok(law.parity(n) * law.a_sqrt(n) * p.value(m, 0))
}

/// Scaled evaluation of the symmetric Sobolev polynomial `q_m` reconstructed
/// from the half-line families.
pub fn scaled_eval_q_symmetric<R: Real>(
    even: &SobolevFamily<R>,
    odd: &SobolevFamily<R>,
    law: &ScalingLaw<R>,
    m: usize,
    z: R,
) -> Result<R> {
    let n = m / 2;
    let x = law.argument(n, z);
    Ok(law.parity(n) * law.a_sqrt(n) * reconstruct_value(even, odd, m, x)?)
}

/// Limit of the scaled ladder-level family: `z^-(nu+2j) J_(nu+2j)(2z)`.
pub fn mh_limit_ladder<R: Real>(law: &ScalingLaw<R>, half_level: usize, z: R) -> Result<R> {
    bessel_j_scaled(law.nu + R::from_index(2 * half_level), z)
}

/// Limit of the scaled Sobolev family with all masses positive:
/// `(-1)^(r+1) z^-nu J_(nu+2r+2)(2z)`.
pub fn mh_limit_q<R: Real>(law: &ScalingLaw<R>, r: usize, z: R) -> Result<R> {
    let order = law.nu + R::from_index(2 * r + 2);
    let sign = if r % 2 == 0 { -R::one() } else { R::one() };
    Ok(sign * z.powi(2 * (r as i32) + 2) * bessel_j_scaled(order, z)?)
}

/// Odd-parity limit in the symmetric case:
/// `(-1)^(r+1) z^-nu J_(nu+2r+3)(2z)`.
pub fn mh_limit_q_symmetric_odd<R: Real>(law: &ScalingLaw<R>, r: usize, z: R) -> Result<R> {
    let order = law.nu + R::from_index(2 * r + 3);
    let sign = if r % 2 == 0 { -R::one() } else { R::one() };
    Ok(sign * z.powi(2 * (r as i32) + 3) * bessel_j_scaled(order, z)?)
}

/// Sup-norm distance between a scaled sequence and its limit over a z-grid,
/// one entry per requested index.
pub fn mh_error_table<R: Real>(
    n_list: &[usize],
    z_grid: &[R],
    mut scaled: impl FnMut(usize, R) -> Result<R>,
    mut limit: impl FnMut(R) -> Result<R>,
) -> Result<Vec<R>> {
    let targets: Vec<R> = z_grid.iter().map(|&z| limit(z)).collect::<Result<_>>()?;
    n_list
        .iter()
        .map(|&n| {
            let mut worst = R::zero();
            for (&z, &t) in z_grid.iter().zip(targets.iter()) {
                worst = worst.max((scaled(n, z)? - t).abs());
            }
            Ok(worst)
        })
        .collect()
}

/// Zeros of the Sobolev polynomial `q_n`: eigenvalues of the comrade matrix
/// (multiplication by `x` in the p-basis, last column corrected by the
/// coefficients of `q_n`). The zeros are real and simple in theory, so an
/// eigenvalue with a visible imaginary part is reported as a numerical
/// failure.
pub fn sobolev_zeros<R: Real>(family: &SobolevFamily<R>, n: usize) -> Result<Vec<R>> {
    if n == 0 || n > family.n_max() {
        return Err(Error::DegreeOutOfRange {
            module: MODULE,
            requested: n,
            capacity: family.n_max(),
        });
    }
    let table = family.base_table();
    let lead = family.coefficient(n, n);
    let ratio = table.beta(n).sqrt() / lead;
    // Multiplication by x in the p-basis, reduced modulo q_n: the tridiagonal
    // Jacobi part (upper Hessenberg) with the last column corrected by the
    // coefficients of q_n.
    let mut comrade = Hessenberg::new(n);
    for col in 0..n {
        comrade.set(col + 1, col + 1, table.alpha(col));
        if col + 1 < n {
            comrade.set(col + 2, col + 1, table.beta(col + 1).sqrt());
        }
        if col > 0 {
            comrade.set(col, col + 1, table.beta(col).sqrt());
        }
    }
    for row in 0..n {
        let mut v = -ratio * family.coefficient(n, row);
        if row == n - 1 {
            v = v + table.alpha(n - 1);
        }
        if row + 2 == n {
            v = v + table.beta(n - 1).sqrt();
        }
        comrade.set(row + 1, n, v);
    }

    let eigen = comrade.eigenvalues()?;
    let scale = eigen.iter().map(|e| e.0.abs()).fold(R::one(), R::max);
    let mut zeros: Vec<R> = Vec::with_capacity(n);
    for (re, im) in eigen {
        if im.abs() > R::from_f64_lit(1e-8) * scale {
            return Err(Error::NumericalBreakdown {
                module: MODULE,
                message: format!(
                    "comrade eigenvalue {re} + {im}i has non-negligible imaginary part"
                ),
            });
        }
        zeros.push(re);
    }
    zeros.sort_by(|a, b| a.partial_cmp(b).expect("finite zeros"));
    Ok(zeros)
}

/// One row of a zero-acceleration table.
#[derive(Clone, Copy, Debug)]
pub struct ScaledZero<R: Real> {
    /// Index among the edge-ordered zeros, starting at 1.
    pub k: usize,
    /// `b_n (xi_k - c)` oriented toward the edge (or `b_n |xi_k|` for
    /// symmetric laws).
    pub zeta: R,
    /// Limit target in the same scaling: 0 for accelerated zeros, then the
    /// squared half Bessel zero `(j/2)^2` for edge laws or `j/2` for
    /// symmetric laws.
    pub target: R,
    /// The plain Bessel zero `j_k`, the literal normalization used in the
    /// asymptotic statement; printed alongside for comparison.
    pub target_plain: R,
}

/// Scale the zeros of one polynomial toward the edge and pair them with their
/// Bessel targets.
///
/// `zeros` are the raw zeros; `accelerated` is the number of leading zeros
/// whose scaled limit is 0 (`r + 1` for a Sobolev family with all masses
/// positive, 0 for a plain family); `limit_order` is the order of the Bessel
/// function in the limit. For symmetric laws the caller passes the
/// nonnegative zeros and the symmetric scaling index.
pub fn scaled_zero_table<R: Real>(
    zeros: &[R],
    law: &ScalingLaw<R>,
    n_index: usize,
    accelerated: usize,
    limit_order: R,
    k_max: usize,
) -> Result<Vec<ScaledZero<R>>> {
    let b_n = law.b(n_index);
    let oriented: Vec<R> = match law.edge {
        MhEdge::Left => zeros.iter().map(|&x| b_n * (x - law.c)).collect(),
        MhEdge::Right => zeros.iter().rev().map(|&x| b_n * (law.c - x)).collect(),
        MhEdge::SymmetricOrigin => {
            // Zeros come in mirrored pairs (plus one at the origin for odd
            // degrees); keep one representative per pair.
            let scale = zeros.iter().map(|z| z.abs()).fold(R::zero(), R::max);
            let tol = R::from_f64_lit(1e-10) * scale.max(R::one());
            let mut v: Vec<R> = zeros
                .iter()
                .filter(|&&x| x > tol)
                .map(|&x| b_n * x)
                .collect();
            let origin = zeros.iter().filter(|x| x.abs() <= tol).count();
            for _ in 0..origin.div_ceil(2) {
                v.push(R::zero());
            }
            v.sort_by(|a, b| a.partial_cmp(b).expect("finite zeros"));
            v
        }
    };
    let mut rows = Vec::with_capacity(k_max.min(oriented.len()));
    for (i, &zeta) in oriented.iter().take(k_max).enumerate() {
        let k = i + 1;
        let (target, target_plain) = if k <= accelerated {
            (R::zero(), R::zero())
        } else {
            let j = crate::bessel::bessel_zero(limit_order, k - accelerated)?;
            let half = j * R::from_f64_lit(0.5);
            match law.edge {
                MhEdge::Left | MhEdge::Right => (half * half, j),
                MhEdge::SymmetricOrigin => (half, j),
            }
        };
        rows.push(ScaledZero {
            k,
            zeta,
            target,
            target_plain,
        });
    }
    Ok(rows)
}

/// Count sign changes of a function sampled on a uniform grid over `[0, z_max]`
/// (the Hurwitz-style zero counter; no deflation).
pub fn sign_change_count<R: Real>(
    mut f: impl FnMut(R) -> Result<R>,
    z_max: R,
    points: usize,
) -> Result<usize> {
    let mut count = 0usize;
    let mut prev: Option<R> = None;
    for i in 0..points {
        let z = z_max * R::from_index(i) / R::from_index(points - 1);
        let v = f(z)?;
        if v == R::zero() {
            continue;
        }
        if let Some(p) = prev {
            if p.signum() != v.signum() {
                count += 1;
            }
        }
        prev = Some(v);
    }
    Ok(count)
}
