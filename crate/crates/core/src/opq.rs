//! Evaluation backbone: orthonormal polynomial values and derivatives,
//! Christoffel-Darboux-type kernels, Gaussian quadrature, classical zeros.

use crate::error::{Error, Result};
use crate::measures::RecurrenceTable;
use crate::scalar::{KahanSum, Real};

const MODULE: &str = "opq";

/// Values `p_i^{(k)}(x)` for `i <= n`, `k <= m`, from one forward recurrence.
#[derive(Clone, Debug)]
pub struct EvalResult<R: Real> {
    values: Vec<R>,
    degree: usize,
    deriv: usize,
}

impl<R: Real> EvalResult<R> {
    /// `p_i^{(k)}(x)`.
    #[inline]
    pub fn value(&self, i: usize, k: usize) -> R {
        self.values[i * (self.deriv + 1) + k]
    }

    /// Row of all derivative orders for degree `i`.
    pub fn row(&self, i: usize) -> &[R] {
        &self.values[i * (self.deriv + 1)..(i + 1) * (self.deriv + 1)]
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn max_derivative(&self) -> usize {
        self.deriv
    }
}

/// Evaluate `p_0 .. p_n` and their first `m` derivatives at `x`.
///
/// The derivative columns satisfy the k-times differentiated three-term
/// recurrence exactly, by construction:
///
/// ```text
/// p_{i+1}^(k) = ((x - alpha_i) p_i^(k) + k p_i^(k-1) - sqrt(beta_i) p_{i-1}^(k)) / sqrt(beta_{i+1})
/// ```
pub fn eval_with_derivatives<R: Real>(
    table: &RecurrenceTable<R>,
    n: usize,
    x: R,
    m: usize,
) -> Result<EvalResult<R>> {
    if n > table.n_max() {
        return Err(Error::DegreeOutOfRange {
            module: MODULE,
            requested: n,
            capacity: table.n_max(),
        });
    }
    let stride = m + 1;
    let mut values = vec![R::zero(); (n + 1) * stride];
    values[0] = table.beta(0).sqrt().recip();
    if n == 0 {
        return Ok(EvalResult {
            values,
            degree: n,
            deriv: m,
        });
    }

    let mut sqrt_beta_i = R::zero(); // sqrt(beta_0) multiplies p_{-1} = 0
    for i in 0..n {
        let a = table.alpha(i);
        let sqrt_beta_next = table.beta(i + 1).sqrt();
        for k in 0..=m {
            let lower = k
                .checked_sub(1)
                .map(|km1| R::from_index(k) * values[i * stride + km1])
                .unwrap_or_else(R::zero);
            let prev = if i == 0 {
                R::zero()
            } else {
                values[(i - 1) * stride + k]
            };
            values[(i + 1) * stride + k] =
                ((x - a) * values[i * stride + k] + lower - sqrt_beta_i * prev) / sqrt_beta_next;
        }
        sqrt_beta_i = sqrt_beta_next;
    }
    Ok(EvalResult {
        values,
        degree: n,
        deriv: m,
    })
}

/// Derivative kernel `K_n^{(k,h)}(x, y) = sum_{i<=n} p_i^(k)(x) p_i^(h)(y)`,
/// with compensated summation.
pub fn kernel<R: Real>(
    table: &RecurrenceTable<R>,
    n: usize,
    x: R,
    y: R,
    k: usize,
    h: usize,
) -> Result<R> {
    let px = eval_with_derivatives(table, n, x, k)?;
    let py = eval_with_derivatives(table, n, y, h)?;
    let mut acc = KahanSum::new();
    for i in 0..=n {
        acc.add(px.value(i, k) * py.value(i, h));
    }
    Ok(acc.value())
}

/// Gauss rule of the measure behind `table`: nodes are the eigenvalues of the
/// n-by-n Jacobi matrix, weights come from the first eigenvector components
/// scaled by the total mass. Exact for polynomials of degree `2n - 1`.
pub fn gauss_quadrature<R: Real>(
    table: &RecurrenceTable<R>,
    n: usize,
) -> Result<(Vec<R>, Vec<R>)> {
    if n == 0 || n > table.n_max() {
        return Err(Error::DegreeOutOfRange {
            module: MODULE,
            requested: n,
            capacity: table.n_max(),
        });
    }
    let mut diag: Vec<R> = (0..n).map(|k| table.alpha(k)).collect();
    let mut off: Vec<R> = (1..n).map(|k| table.beta(k).sqrt()).collect();
    let mut first_row = vec![R::zero(); n];
    first_row[0] = R::one();
    tridiagonal_ql(&mut diag, &mut off, Some(&mut first_row))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[a].partial_cmp(&diag[b]).expect("finite eigenvalues"));
    let nodes: Vec<R> = order.iter().map(|&i| diag[i]).collect();
    let mass = table.mass();
    let weights: Vec<R> = order
        .iter()
        .map(|&i| mass * first_row[i] * first_row[i])
        .collect();
    Ok((nodes, weights))
}

/// Zeros of `p_n`, ascending: the eigenvalues of the n-by-n Jacobi matrix.
pub fn classical_zeros<R: Real>(table: &RecurrenceTable<R>, n: usize) -> Result<Vec<R>> {
    if n == 0 || n > table.n_max() {
        return Err(Error::DegreeOutOfRange {
            module: MODULE,
            requested: n,
            capacity: table.n_max(),
        });
    }
    let mut diag: Vec<R> = (0..n).map(|k| table.alpha(k)).collect();
    let mut off: Vec<R> = (1..n).map(|k| table.beta(k).sqrt()).collect();
    tridiagonal_ql(&mut diag, &mut off, None)?;
    diag.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(diag)
}

/// Implicit-shift QL for a symmetric tridiagonal matrix.
///
/// `diag` (length n) receives the eigenvalues, unsorted. `off` holds the
/// subdiagonal in its first n-1 slots. When `first_row` is given it is
/// updated with the first components of the eigenvectors (enough for
/// quadrature weights).
fn tridiagonal_ql<R: Real>(
    diag: &mut [R],
    off: &mut [R],
    mut first_row: Option<&mut [R]>,
) -> Result<()> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    // Shift the subdiagonal so e[i] couples (i, i+1) with a spare slot at the end.
    let mut e = vec![R::zero(); n];
    e[..n - 1].copy_from_slice(&off[..n - 1]);

    let two = R::from_f64_lit(2.0);
    let eps = R::epsilon();
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NonConvergence {
                    module: MODULE,
                    what: "tridiagonal QL iteration",
                    residual: e[l].abs().to_f64().unwrap_or(f64::NAN),
                });
            }
            let mut g = (diag[l + 1] - diag[l]) / (two * e[l]);
            let mut r = g.hypot(R::one());
            let sign_r = if g >= R::zero() { r.abs() } else { -r.abs() };
            g = diag[m] - diag[l] + e[l] / (g + sign_r);
            let mut s = R::one();
            let mut c = R::one();
            let mut p = R::zero();
            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == R::zero() {
                    diag[i + 1] = diag[i + 1] - p;
                    e[m] = R::zero();
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + two * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                if let Some(row) = first_row.as_deref_mut() {
                    f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if underflowed {
                continue;
            }
            diag[l] = diag[l] - p;
            e[l] = g;
            e[m] = R::zero();
        }
    }
    Ok(())
}
