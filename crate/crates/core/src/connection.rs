//! Connection coefficients between a Sobolev family and its Christoffel
//! ladder.
//!
//! For `n >= r + 1` the Sobolev polynomial decomposes as
//!
//! ```text
//! q_n(x) = sum_{j=0}^{r+1} lambda_{j,n} (x - c)^j p_{n-j}^[2j](x)
//! ```
//!
//! where `p^[2j]` is orthonormal for `(x - c)^{2j} dmu`. The coefficients are
//! computed by matching derivatives at `c`, which makes the system lower
//! triangular: no quadrature enters the construction, and the defining
//! orthogonality of the remainder is then available as an independent check.

use crate::error::{Error, Result};
use crate::measures::ChristoffelLadder;
use crate::opq::eval_with_derivatives;
use crate::scalar::{KahanSum, Real};
use crate::sobolev::SobolevFamily;

const MODULE: &str = "connection";

/// Connection coefficients of a single degree.
#[derive(Clone, Debug)]
pub struct ConnectionRow<R: Real> {
    pub n: usize,
    /// `lambda_{0,n} .. lambda_{r+1,n}`.
    pub lambdas: Vec<R>,
    /// Maximum relative residual of the connection identity over the sample
    /// points of the last [`verify_connection`] call.
    pub residual: Option<R>,
}

/// Solve for the connection coefficients of degree `n`.
///
/// Differentiating the connection formula `k` times at `c` leaves only the
/// `j <= k` terms, with the `j = k` term carried by the ladder value itself:
///
/// ```text
/// q_n^(k)(c) = sum_{j<=k} lambda_j * k!/(k-j)! * (p_{n-j}^[2j])^(k-j)(c)
/// ```
///
/// A vanishing diagonal value `p_{n-k}^[2k](c)` means the nonvanishing
/// condition behind the formula fails (possible only away from a support
/// edge) and is reported as an error.
pub fn connection_coefficients<R: Real>(
    family: &SobolevFamily<R>,
    ladder: &ChristoffelLadder<R>,
    n: usize,
) -> Result<ConnectionRow<R>> {
    let r = family.r();
    let order = r + 1;
    if n < order {
        return Err(Error::InvalidParameter {
            module: MODULE,
            message: format!("connection formula needs n >= r + 1 = {order}, got {n}"),
        });
    }
    if ladder.depth() < 2 * order {
        return Err(Error::InvalidParameter {
            module: MODULE,
            message: format!(
                "ladder depth {} too shallow for r = {r} (need {})",
                ladder.depth(),
                2 * order
            ),
        });
    }
    let c = ladder.c();
    let q_at_c = family.eval(n, c, order)?;

    // Ladder values (p_{n-j}^[2j])^(m)(c), m <= r + 1 - j.
    let ladder_vals: Vec<_> = (0..=order)
        .map(|j| eval_with_derivatives(ladder.table(2 * j), n - j, c, order - j))
        .collect::<Result<_>>()?;

    let mut lambdas: Vec<R> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut rhs = q_at_c[k];
        let mut falling = R::one(); // k!/(k-j)!, advanced after each term
        for (j, lambda) in lambdas.iter().enumerate() {
            rhs = rhs - *lambda * falling * ladder_vals[j].value(n - j, k - j);
            falling = falling * R::from_index(k - j);
        }
        let diag_val = ladder_vals[k].value(n - k, 0);
        let diag = factorial::<R>(k) * diag_val;
        let scale = R::from_f64_lit(1e-13) * near_degree_scale(&ladder_vals[k], n - k);
        if diag_val.abs() <= scale {
            return Err(Error::ConditionViolation {
                level: k,
                degree: n,
            });
        }
        lambdas.push(rhs / diag);
    }
    Ok(ConnectionRow {
        n,
        lambdas,
        residual: None,
    })
}

/// Evaluate the right-hand side of the connection formula.
pub fn connection_value<R: Real>(
    ladder: &ChristoffelLadder<R>,
    lambdas: &[R],
    n: usize,
    x: R,
) -> Result<R> {
    let c = ladder.c();
    let mut acc = KahanSum::new();
    let mut shift_pow = R::one();
    for (j, &lambda) in lambdas.iter().enumerate() {
        let p = eval_with_derivatives(ladder.table(2 * j), n - j, x, 0)?;
        acc.add(lambda * shift_pow * p.value(n - j, 0));
        shift_pow = shift_pow * (x - c);
    }
    Ok(acc.value())
}

/// Check the connection identity at the sample points and record the maximum
/// relative residual in the row.
pub fn verify_connection<R: Real>(
    row: &mut ConnectionRow<R>,
    family: &SobolevFamily<R>,
    ladder: &ChristoffelLadder<R>,
    sample_points: &[R],
) -> Result<R> {
    let mut worst = R::zero();
    for &x in sample_points {
        let q = family.value(row.n, x)?;
        let rhs = connection_value(ladder, &row.lambdas, row.n, x)?;
        let denom = R::one().max(q.abs());
        worst = worst.max((q - rhs).abs() / denom);
    }
    row.residual = Some(worst);
    Ok(worst)
}

/// Connection rows over a degree range.
pub fn lambda_table<R: Real>(
    family: &SobolevFamily<R>,
    ladder: &ChristoffelLadder<R>,
    degrees: &[usize],
) -> Result<Vec<ConnectionRow<R>>> {
    degrees
        .iter()
        .map(|&n| connection_coefficients(family, ladder, n))
        .collect()
}

fn factorial<R: Real>(k: usize) -> R {
    let mut acc = R::one();
    for i in 2..=k {
        acc = acc * R::from_index(i);
    }
    acc
}

fn near_degree_scale<R: Real>(vals: &crate::opq::EvalResult<R>, n: usize) -> R {
    let lo = n.saturating_sub(2);
    let mut scale = R::zero();
    for i in lo..=n {
        scale = scale.max(vals.value(i, 0).abs());
    }
    scale.max(R::one())
}
