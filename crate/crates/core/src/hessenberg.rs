//! Eigenvalues of a real upper Hessenberg matrix by the shifted double-QR
//! iteration (EISPACK hqr lineage), eigenvalues only.
//!
//! The exceptional shifts every ten stalled iterations matter here: comrade
//! matrices of symmetric measures carry exactly paired eigenvalues, on which
//! an unshifted Francis iteration can cycle forever.

use crate::error::{Error, Result};
use crate::scalar::Real;

const MODULE: &str = "hessenberg";

/// Dense square matrix with 1-based indexing (row/column 0 unused), matching
/// the classical formulation of the algorithm.
pub(crate) struct Hessenberg<R: Real> {
    a: Vec<R>,
    n: usize,
}

impl<R: Real> Hessenberg<R> {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            a: vec![R::zero(); (n + 1) * (n + 1)],
            n,
        }
    }

    #[inline]
    pub(crate) fn set(&mut self, row: usize, col: usize, value: R) {
        self.a[row * (self.n + 1) + col] = value;
    }

    #[inline]
    fn at(&self, row: usize, col: usize) -> R {
        self.a[row * (self.n + 1) + col]
    }

    #[inline]
    fn at_mut(&mut self, row: usize, col: usize) -> &mut R {
        &mut self.a[row * (self.n + 1) + col]
    }

    /// Consume the matrix and return the eigenvalues as (re, im) pairs.
    pub(crate) fn eigenvalues(mut self) -> Result<Vec<(R, R)>> {
        let n = self.n;
        let mut wr = vec![R::zero(); n + 1];
        let mut wi = vec![R::zero(); n + 1];
        let zero = R::zero();
        let sign = |a: R, b: R| if b >= zero { a.abs() } else { -a.abs() };

        let mut anorm = R::zero();
        for i in 1..=n {
            for j in i.saturating_sub(1).max(1)..=n {
                anorm = anorm + self.at(i, j).abs();
            }
        }

        let mut nn = n;
        let mut t = R::zero();
        while nn >= 1 {
            let mut its = 0usize;
            loop {
                // Find a negligible subdiagonal element.
                let mut l = nn;
                while l >= 2 {
                    let mut s = self.at(l - 1, l - 1).abs() + self.at(l, l).abs();
                    if s == zero {
                        s = anorm;
                    }
                    if self.at(l, l - 1).abs() + s == s {
                        self.set(l, l - 1, zero);
                        break;
                    }
                    l -= 1;
                }
                let mut x = self.at(nn, nn);
                if l == nn {
                    wr[nn] = x + t;
                    wi[nn] = zero;
                    nn -= 1;
                    break;
                }
                let mut y = self.at(nn - 1, nn - 1);
                let mut w = self.at(nn, nn - 1) * self.at(nn - 1, nn);
                if l == nn - 1 {
                    let p = R::from_f64_lit(0.5) * (y - x);
                    let q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x = x + t;
                    if q >= zero {
                        z = p + sign(z, p);
                        wr[nn - 1] = x + z;
                        wr[nn] = if z != zero { x - w / z } else { x + z };
                        wi[nn - 1] = zero;
                        wi[nn] = zero;
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn] = z;
                        wi[nn - 1] = -z;
                    }
                    nn -= 2;
                    break;
                }
                if its == 30 {
                    return Err(Error::NonConvergence {
                        module: MODULE,
                        what: "double-QR iteration",
                        residual: self.at(nn, nn - 1).abs().to_f64().unwrap_or(f64::NAN),
                    });
                }
                if its == 10 || its == 20 {
                    // Exceptional shift.
                    t = t + x;
                    for i in 1..=nn {
                        *self.at_mut(i, i) = self.at(i, i) - x;
                    }
                    let s = self.at(nn, nn - 1).abs() + self.at(nn - 1, nn - 2).abs();
                    x = R::from_f64_lit(0.75) * s;
                    y = x;
                    w = R::from_f64_lit(-0.4375) * s * s;
                }
                its += 1;

                // Two consecutive small subdiagonals.
                let mut m = nn - 2;
                let mut p = zero;
                let mut q = zero;
                let mut r = zero;
                while m >= l {
                    let z = self.at(m, m);
                    let rr = x - z;
                    let ss = y - z;
                    p = (rr * ss - w) / self.at(m + 1, m) + self.at(m, m + 1);
                    q = self.at(m + 1, m + 1) - z - rr - ss;
                    r = self.at(m + 2, m + 1);
                    let scale = p.abs() + q.abs() + r.abs();
                    p = p / scale;
                    q = q / scale;
                    r = r / scale;
                    if m == l {
                        break;
                    }
                    let u = self.at(m, m - 1).abs() * (q.abs() + r.abs());
                    let v = p.abs()
                        * (self.at(m - 1, m - 1).abs() + z.abs() + self.at(m + 1, m + 1).abs());
                    if u + v == v {
                        break;
                    }
                    m -= 1;
                }
                for i in m + 2..=nn {
                    self.set(i, i - 2, zero);
                    if i != m + 2 {
                        self.set(i, i - 3, zero);
                    }
                }

                // Double QR sweep over rows l..=nn, columns k..=nn.
                for k in m..=nn - 1 {
                    if k != m {
                        p = self.at(k, k - 1);
                        q = self.at(k + 1, k - 1);
                        r = if k != nn - 1 {
                            self.at(k + 2, k - 1)
                        } else {
                            zero
                        };
                        x = p.abs() + q.abs() + r.abs();
                        if x != zero {
                            p = p / x;
                            q = q / x;
                            r = r / x;
                        }
                    }
                    let s = sign((p * p + q * q + r * r).sqrt(), p);
                    if s == zero {
                        continue;
                    }
                    if k == m {
                        if l != m {
                            *self.at_mut(k, k - 1) = -self.at(k, k - 1);
                        }
                    } else {
                        self.set(k, k - 1, -s * x);
                    }
                    p = p + s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q = q / p;
                    r = r / p;
                    for j in k..=nn {
                        let mut pj = self.at(k, j) + q * self.at(k + 1, j);
                        if k != nn - 1 {
                            pj = pj + r * self.at(k + 2, j);
                            *self.at_mut(k + 2, j) = self.at(k + 2, j) - pj * z;
                        }
                        *self.at_mut(k + 1, j) = self.at(k + 1, j) - pj * y;
                        *self.at_mut(k, j) = self.at(k, j) - pj * x;
                    }
                    let mmin = nn.min(k + 3);
                    for i in l..=mmin {
                        let mut pi = x * self.at(i, k) + y * self.at(i, k + 1);
                        if k != nn - 1 {
                            pi = pi + z * self.at(i, k + 2);
                            *self.at_mut(i, k + 2) = self.at(i, k + 2) - pi * r;
                        }
                        *self.at_mut(i, k + 1) = self.at(i, k + 1) - pi * q;
                        *self.at_mut(i, k) = self.at(i, k) - pi;
                    }
                }
            }
            if nn == 0 {
                break;
            }
        }
        Ok((1..=n).map(|i| (wr[i], wi[i])).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eigen_of(entries: &[&[f64]]) -> Vec<(f64, f64)> {
        let n = entries.len();
        let mut h = Hessenberg::new(n);
        for (i, row) in entries.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                h.set(i + 1, j + 1, v);
            }
        }
        let mut eig = h.eigenvalues().unwrap();
        eig.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        eig
    }

    #[test]
    fn diagonal_matrix() {
        let eig = eigen_of(&[&[3.0, 0.0], &[0.0, -1.0]]);
        assert!((eig[0].0 + 1.0).abs() < 1e-14);
        assert!((eig[1].0 - 3.0).abs() < 1e-14);
    }

    #[test]
    fn companion_of_cubic() {
        // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3), companion matrix form.
        let eig = eigen_of(&[
            &[6.0, -11.0, 6.0],
            &[1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
        ]);
        for (k, &target) in [1.0, 2.0, 3.0].iter().enumerate() {
            assert!((eig[k].0 - target).abs() < 1e-10, "{eig:?}");
            assert!(eig[k].1.abs() < 1e-12);
        }
    }

    #[test]
    fn complex_pair_detected() {
        // Rotation-like block: eigenvalues +-i.
        let eig = eigen_of(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!(eig.iter().all(|e| e.0.abs() < 1e-14));
        let mut ims: Vec<f64> = eig.iter().map(|e| e.1).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ims[0] + 1.0).abs() < 1e-14);
        assert!((ims[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn symmetric_pair_spectrum_terminates() {
        // Tridiagonal with zero diagonal: eigenvalues come in exact +- pairs,
        // the structure that stalls unshifted iterations.
        let n = 24usize;
        let mut h = Hessenberg::<f64>::new(n);
        for i in 1..n {
            let b = (i as f64 / 4.0).sqrt();
            h.set(i + 1, i, b);
            h.set(i, i + 1, b);
        }
        let eig = h.eigenvalues().unwrap();
        assert_eq!(eig.len(), n);
        assert!(eig.iter().all(|e| e.1 == 0.0));
        let sum: f64 = eig.iter().map(|e| e.0).sum();
        assert!(sum.abs() < 1e-10, "trace should vanish, got {sum}");
    }
}
