//! Symmetrization of origin-mass problems on symmetric measures.
//!
//! For a symmetric measure on `(-d, d)` with all masses at `c = 0`, the
//! Sobolev family splits by parity. Writing `nu` for the image of `mu` under
//! `x -> x^2`, the even and odd parts are Sobolev families of two half-line
//! problems on `(0, d^2)`:
//!
//! ```text
//! q_{2n}(x) = s_n(x^2)        s_n orthonormal for  dnu  + even-mass terms
//! q_{2n+1}(x) = x s*_n(x^2)   s*_n orthonormal for x dnu + odd-mass terms
//! ```
//!
//! with the mass vectors rescaled by `((2i)!/i!)^2` and `((2i+1)!/i!)^2`.
//! The origin is the lower support edge of both half-line measures, so the
//! whole edge machinery (ladders, connection formulas) applies there; this is
//! the point of the construction.

use crate::connection::{connection_coefficients, ConnectionRow};
use crate::error::{Error, Result};
use crate::measures::{
    ladder_from_table, ChristoffelLadder, EdgeOrientation, MeasureSpec, RecurrenceTable,
};
use crate::scalar::Real;
use crate::sobolev::SobolevFamily;

const MODULE: &str = "symmetry";

/// The two half-line problems induced by a symmetric origin-mass problem.
#[derive(Clone, Debug)]
pub struct SymmetricSplit<R: Real> {
    nu_table: RecurrenceTable<R>,
    nu_star_table: RecurrenceTable<R>,
    even_masses: Vec<R>,
    odd_masses: Vec<R>,
}

impl<R: Real> SymmetricSplit<R> {
    /// Recurrence table of `nu` (image of `mu` under `x -> x^2`).
    pub fn nu_table(&self) -> &RecurrenceTable<R> {
        &self.nu_table
    }

    /// Recurrence table of `x dnu`.
    pub fn nu_star_table(&self) -> &RecurrenceTable<R> {
        &self.nu_star_table
    }

    /// Rescaled masses of the even (⟨.,.⟩ on `dnu`) problem.
    pub fn even_masses(&self) -> &[R] {
        &self.even_masses
    }

    /// Rescaled masses of the odd (⟨.,.⟩ on `x dnu`) problem.
    pub fn odd_masses(&self) -> &[R] {
        &self.odd_masses
    }

    /// Highest derivative order per half-line problem.
    pub fn r(&self) -> usize {
        self.even_masses.len() - 1
    }
}

/// Split a symmetric origin-mass problem into its half-line problems.
///
/// `masses` holds `M_0 .. M_{2r+1}`; an odd-length vector is padded with a
/// trailing zero. The half-line tables are computed to degree `capacity` by
/// the exact even/odd fold of the `mu` recurrence (no quadrature), which
/// requires the `mu` table up to degree `2 * capacity + 2`.
pub fn symmetrize<R: Real>(
    measure: &MeasureSpec<R>,
    masses: &[R],
    capacity: usize,
) -> Result<SymmetricSplit<R>> {
    if !measure.is_symmetric() {
        return Err(Error::InvalidParameter {
            module: MODULE,
            message: "symmetrization requires a symmetric measure".into(),
        });
    }
    if masses.is_empty() {
        return Err(Error::InvalidParameter {
            module: MODULE,
            message: "at least one mass is required".into(),
        });
    }
    let mut padded = masses.to_vec();
    if padded.len() % 2 == 1 {
        padded.push(R::zero());
    }

    let mu = measure.recurrence_coefficients(2 * capacity + 2)?;
    let (nu_table, nu_star_table) = fold_symmetric_table(&mu, capacity)?;

    let pairs = padded.len() / 2;
    let mut even_masses = Vec::with_capacity(pairs);
    let mut odd_masses = Vec::with_capacity(pairs);
    let mut fact_i = R::one(); // i!
    let mut fact_2i = R::one(); // (2i)!
    for i in 0..pairs {
        if i > 0 {
            fact_i = fact_i * R::from_index(i);
            fact_2i = fact_2i * R::from_index(2 * i - 1) * R::from_index(2 * i);
        }
        let even_scale = fact_2i / fact_i;
        let odd_scale = even_scale * R::from_index(2 * i + 1);
        even_masses.push(even_scale * even_scale * padded[2 * i]);
        odd_masses.push(odd_scale * odd_scale * padded[2 * i + 1]);
    }

    Ok(SymmetricSplit {
        nu_table,
        nu_star_table,
        even_masses,
        odd_masses,
    })
}

/// Exact even/odd fold: with `mu` symmetric (all centers zero) and offsets
/// `b_k`, the measures `nu` and `x dnu` have
///
/// ```text
/// nu:    alpha_0 = b_1,  alpha_k = b_{2k} + b_{2k+1},  beta_k = b_{2k-1} b_{2k}
/// x dnu: alpha_k = b_{2k+1} + b_{2k+2},                beta_k = b_{2k} b_{2k+1}
/// ```
///
/// so that `u_n(x^2) = p_{2n}(x)` and `x u*_n(x^2) = p_{2n+1}(x)`.
fn fold_symmetric_table<R: Real>(
    mu: &RecurrenceTable<R>,
    capacity: usize,
) -> Result<(RecurrenceTable<R>, RecurrenceTable<R>)> {
    if mu.n_max() < 2 * capacity + 2 {
        return Err(Error::DegreeOutOfRange {
            module: MODULE,
            requested: 2 * capacity + 2,
            capacity: mu.n_max(),
        });
    }
    let b = |k: usize| mu.beta(k);

    let mut nu_alpha = Vec::with_capacity(capacity);
    let mut nu_beta = Vec::with_capacity(capacity + 1);
    nu_beta.push(b(0));
    if capacity >= 1 {
        nu_alpha.push(b(1));
    }
    for k in 1..capacity {
        nu_alpha.push(b(2 * k) + b(2 * k + 1));
    }
    for k in 1..=capacity {
        nu_beta.push(b(2 * k - 1) * b(2 * k));
    }

    let mut star_alpha = Vec::with_capacity(capacity);
    let mut star_beta = Vec::with_capacity(capacity + 1);
    star_beta.push(b(0) * b(1));
    for k in 0..capacity {
        star_alpha.push(b(2 * k + 1) + b(2 * k + 2));
    }
    for k in 1..=capacity {
        star_beta.push(b(2 * k) * b(2 * k + 1));
    }

    Ok((
        RecurrenceTable::new(nu_alpha, nu_beta)?,
        RecurrenceTable::new(star_alpha, star_beta)?,
    ))
}

/// Build the even and odd Sobolev families of a split, to half-line degree
/// `n_half`.
pub fn even_odd_families<R: Real>(
    split: &SymmetricSplit<R>,
    n_half: usize,
) -> Result<(SobolevFamily<R>, SobolevFamily<R>)> {
    let even = SobolevFamily::build_from_table(
        split.nu_table(),
        R::zero(),
        split.even_masses(),
        n_half,
    )?;
    let odd = SobolevFamily::build_from_table(
        split.nu_star_table(),
        R::zero(),
        split.odd_masses(),
        n_half,
    )?;
    Ok((even, odd))
}

/// Value of the symmetric Sobolev polynomial `q_m` reconstructed from the
/// half-line families: `s_{m/2}(x^2)` for even `m`, `x s*_{(m-1)/2}(x^2)`
/// for odd `m`.
pub fn reconstruct_value<R: Real>(
    even: &SobolevFamily<R>,
    odd: &SobolevFamily<R>,
    m: usize,
    x: R,
) -> Result<R> {
    let t = x * x;
    if m % 2 == 0 {
        even.value(m / 2, t)
    } else {
        Ok(x * odd.value((m - 1) / 2, t)?)
    }
}

/// Christoffel ladders of the two half-line measures at their shared lower
/// edge `c = 0`.
pub fn half_line_ladders<R: Real>(
    split: &SymmetricSplit<R>,
    depth: usize,
) -> Result<(ChristoffelLadder<R>, ChristoffelLadder<R>)> {
    let even = ladder_from_table(split.nu_table(), R::zero(), EdgeOrientation::Left, depth)?;
    let odd = ladder_from_table(
        split.nu_star_table(),
        R::zero(),
        EdgeOrientation::Left,
        depth,
    )?;
    Ok((even, odd))
}

/// Connection rows of the even and odd half-line families over a range of
/// half-line degrees. Mapping through `x -> x^2` turns these into the
/// connection formulas for `q_{2n}` and `q_{2n+1}` over the `p^[4j]` ladder.
pub fn symmetric_connection<R: Real>(
    split: &SymmetricSplit<R>,
    even: &SobolevFamily<R>,
    odd: &SobolevFamily<R>,
    degrees: &[usize],
) -> Result<(Vec<ConnectionRow<R>>, Vec<ConnectionRow<R>>)> {
    let depth = 2 * (split.r() + 1);
    let (even_ladder, odd_ladder) = half_line_ladders(split, depth)?;
    let even_rows = degrees
        .iter()
        .map(|&n| connection_coefficients(even, &even_ladder, n))
        .collect::<Result<Vec<_>>>()?;
    let odd_rows = degrees
        .iter()
        .map(|&n| connection_coefficients(odd, &odd_ladder, n))
        .collect::<Result<Vec<_>>>()?;
    Ok((even_rows, odd_rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::christoffel_step;
    use crate::opq::eval_with_derivatives;
    use crate::sobolev::SobolevProduct;
    use approx::assert_relative_eq;

    fn freud_split(masses: &[f64], capacity: usize) -> SymmetricSplit<f64> {
        let measure = MeasureSpec::freud(2).unwrap();
        symmetrize(&measure, masses, capacity).unwrap()
    }

    #[test]
    fn freud_fold_matches_scaled_laguerre_forms() {
        // nu is t^(-1/2) e^(-2t) on (0, inf): alpha_k = k + 1/4,
        // beta_k = k (k - 1/2) / 4. x dnu: alpha_k = k + 3/4,
        // beta_k = k (k + 1/2) / 4.
        let split = freud_split(&[0.0, 0.0], 20);
        let nu = split.nu_table();
        let star = split.nu_star_table();
        for k in 0..20 {
            let kf = k as f64;
            assert_relative_eq!(nu.alpha(k), kf + 0.25, max_relative = 1e-12);
            assert_relative_eq!(star.alpha(k), kf + 0.75, max_relative = 1e-12);
        }
        for k in 1..=20 {
            let kf = k as f64;
            assert_relative_eq!(nu.beta(k), kf * (kf - 0.5) / 4.0, max_relative = 1e-12);
            assert_relative_eq!(star.beta(k), kf * (kf + 0.5) / 4.0, max_relative = 1e-12);
        }
        assert_relative_eq!(
            nu.beta(0),
            (std::f64::consts::PI / 2.0).sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn nu_star_is_christoffel_step_of_nu() {
        let split = freud_split(&[1.0, 1.0], 24);
        let stepped = christoffel_step(split.nu_table(), 0.0, EdgeOrientation::Left).unwrap();
        for k in 0..stepped.n_max() {
            assert_relative_eq!(
                stepped.alpha(k),
                split.nu_star_table().alpha(k),
                max_relative = 1e-10
            );
        }
        for k in 0..=stepped.n_max() {
            assert_relative_eq!(
                stepped.beta(k),
                split.nu_star_table().beta(k),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn symmetrization_identities() {
        // u_n(x^2) = p_2n(x) and x u*_n(x^2) = p_{2n+1}(x) on a sample grid.
        let measure = MeasureSpec::<f64>::freud(2).unwrap();
        let split = freud_split(&[0.0, 0.0], 50);
        let mu = measure.recurrence_coefficients(101).unwrap();
        for &x in &[0.0f64, 0.3, 0.9, 1.7, 2.6] {
            let p = eval_with_derivatives(&mu, 101, x, 0).unwrap();
            let u = eval_with_derivatives(split.nu_table(), 50, x * x, 0).unwrap();
            let us = eval_with_derivatives(split.nu_star_table(), 50, x * x, 0).unwrap();
            for n in (0..=50).step_by(7) {
                let even_scale = p.value(2 * n, 0).abs().max(1.0);
                assert!(
                    (p.value(2 * n, 0) - u.value(n, 0)).abs() <= 1e-10 * even_scale,
                    "even identity at n={n}, x={x}"
                );
                if 2 * n + 1 <= 101 {
                    let odd_scale = p.value(2 * n + 1, 0).abs().max(1.0);
                    assert!(
                        (p.value(2 * n + 1, 0) - x * us.value(n, 0)).abs() <= 1e-10 * odd_scale,
                        "odd identity at n={n}, x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn mass_rescaling_factors() {
        let split = freud_split(&[1.0, 1.0, 1.0, 1.0], 8);
        assert_relative_eq!(split.even_masses()[0], 1.0, max_relative = 1e-15);
        assert_relative_eq!(split.odd_masses()[0], 1.0, max_relative = 1e-15);
        // ((2)!/1!)^2 = 4 and ((3)!/1!)^2 = 36.
        assert_relative_eq!(split.even_masses()[1], 4.0, max_relative = 1e-15);
        assert_relative_eq!(split.odd_masses()[1], 36.0, max_relative = 1e-15);
        // Odd-length input pads the last odd mass with zero.
        let padded = freud_split(&[1.0, 1.0, 1.0], 8);
        assert_eq!(padded.odd_masses()[1], 0.0);
    }

    #[test]
    fn reconstruction_matches_direct_build() {
        // Direct Sobolev build on the real line (the kernel construction does
        // not need an edge) against the split reconstruction.
        let measure = MeasureSpec::freud(2).unwrap();
        let masses = [1.0f64, 1.0, 0.0, 0.0];
        let split = freud_split(&masses, 16);
        let (even, odd) = even_odd_families(&split, 16).unwrap();
        let product = SobolevProduct::new(measure, 0.0, masses.to_vec()).unwrap();
        let direct = SobolevFamily::build(&product, 32).unwrap();
        for m in 0..=32usize {
            for &x in &[0.0f64, 0.4, 1.1, 2.3] {
                let via_split = reconstruct_value(&even, &odd, m, x).unwrap();
                let directly = direct.value(m, x).unwrap();
                let scale = directly.abs().max(1.0);
                assert!(
                    (via_split - directly).abs() <= 1e-9 * scale,
                    "q_{m}({x}): split {via_split} vs direct {directly}"
                );
            }
        }
    }

    #[test]
    fn massless_reconstruction_gives_plain_family() {
        let measure = MeasureSpec::<f64>::freud(2).unwrap();
        let split = freud_split(&[0.0, 0.0], 10);
        let (even, odd) = even_odd_families(&split, 10).unwrap();
        let mu = measure.recurrence_coefficients(21).unwrap();
        for m in 0..=20usize {
            for &x in &[0.2f64, 1.4] {
                let p = eval_with_derivatives(&mu, m, x, 0).unwrap();
                let rec = reconstruct_value(&even, &odd, m, x).unwrap();
                let scale = p.value(m, 0).abs().max(1.0);
                assert!((rec - p.value(m, 0)).abs() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn parity_is_exact() {
        let split = freud_split(&[1.0, 1.0], 12);
        let (even, odd) = even_odd_families(&split, 12).unwrap();
        for &x in &[0.5f64, 1.9] {
            assert_eq!(
                reconstruct_value(&even, &odd, 8, x).unwrap(),
                reconstruct_value(&even, &odd, 8, -x).unwrap()
            );
            assert_eq!(
                reconstruct_value(&even, &odd, 9, x).unwrap(),
                -reconstruct_value(&even, &odd, 9, -x).unwrap()
            );
        }
    }

    #[test]
    fn symmetric_connection_trivial_and_verified() {
        // Massless: lambda_0 = 1. With positive masses: the mapped-back even
        // identity q_{2n}(x) = sum_j lambda_j x^{2j} p^[4j]_{2n-2j}(x) holds
        // to 1e-8 at sample points.
        let massless = freud_split(&[0.0, 0.0], 12);
        let (e0, o0) = even_odd_families(&massless, 10).unwrap();
        let (rows_e, rows_o) = symmetric_connection(&massless, &e0, &o0, &[4, 8]).unwrap();
        for row in rows_e.iter().chain(rows_o.iter()) {
            assert_relative_eq!(row.lambdas[0], 1.0, max_relative = 1e-10);
            assert!(row.lambdas[1].abs() < 1e-10);
        }

        let split = freud_split(&[1.0, 1.0], 36);
        let (even, odd) = even_odd_families(&split, 32).unwrap();
        let (rows_e, rows_o) = symmetric_connection(&split, &even, &odd, &[10, 20, 30]).unwrap();
        let (lad_e, lad_o) = half_line_ladders(&split, 2).unwrap();
        for (rows, family, lad, parity) in [
            (&rows_e, &even, &lad_e, 0usize),
            (&rows_o, &odd, &lad_o, 1usize),
        ] {
            for row in rows.iter() {
                for &x in &[0.1f64, 0.8, 1.9, 3.0] {
                    let lhs = family.value(row.n, x * x).unwrap();
                    let rhs =
                        crate::connection::connection_value(lad, &row.lambdas, row.n, x * x)
                            .unwrap();
                    let scale = lhs.abs().max(1.0);
                    assert!(
                        (lhs - rhs).abs() <= 1e-8 * scale,
                        "parity {parity} n={} x={x}",
                        row.n
                    );
                }
            }
        }
    }
}
