//! Command implementations: build, lambda, mh, zeros, verify.

use std::path::Path;

use rayon::prelude::*;

use sobolev_mh_core::asymptotics::{
    mh_limit_q, mh_limit_q_symmetric_odd, scaled_eval_q, scaled_eval_q_symmetric,
    scaled_eval_symmetric_table, scaled_eval_table, scaled_zero_table, scaling_law, sobolev_zeros,
};
use sobolev_mh_core::bessel::bessel_j_scaled;
use sobolev_mh_core::connection::{connection_coefficients, verify_connection};
use sobolev_mh_core::measures::{ladder, MeasureSpec, RecurrenceTable};
use sobolev_mh_core::opq::{classical_zeros, eval_with_derivatives, gauss_quadrature};
use sobolev_mh_core::sobolev::{SobolevFamily, SobolevProduct};
use sobolev_mh_core::symmetry::{even_odd_families, half_line_ladders, symmetrize, SymmetricSplit};

use crate::config::{ConfigError, ExperimentConfig, MAX_DEGREE};
use crate::output::{write_csv, Cell};

pub enum CliError {
    /// Invalid configuration or usage: exit code 2.
    Config(String),
    /// Numerical failure during the run: exit code 3.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<sobolev_mh_core::Error> for CliError {
    fn from(e: sobolev_mh_core::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn check_degree_cap(cfg: &ExperimentConfig) -> CliResult<()> {
    if cfg.n_max > MAX_DEGREE {
        // Documented error-growth cap; reported as a numerical failure.
        return Err(CliError::Numerical(format!(
            "requested degree {} exceeds the supported cap {MAX_DEGREE}",
            cfg.n_max
        )));
    }
    Ok(())
}

fn ensure_out_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))
}

fn write(path: &Path, header: &[&str], rows: &[Vec<Cell>]) -> CliResult<()> {
    write_csv(path, header, rows).map_err(CliError::Numerical)
}

fn build_family(cfg: &ExperimentConfig) -> CliResult<(SobolevFamily<f64>, f64)> {
    let c = cfg.c()?;
    let product = SobolevProduct::new(cfg.measure, c, cfg.masses.clone())
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok((SobolevFamily::build(&product, cfg.n_max)?, c))
}

/// Sample points for connection-identity verification, spread over the
/// representative part of the support.
fn sample_points(measure: &MeasureSpec<f64>, points: usize) -> Vec<f64> {
    let lo = measure.support_inf().max(-1.0);
    let hi = measure.support_sup().min(10.0);
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

fn z_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    (0..cfg.z_points)
        .map(|i| cfg.z_max * i as f64 / (cfg.z_points - 1) as f64)
        .collect()
}

/// Max |<q_i, q_j> - delta_ij| with the integral term by Gauss quadrature of
/// the base measure and the mass terms from derivative values at c.
fn orthonormality_rows(
    family: &SobolevFamily<f64>,
    measure: &MeasureSpec<f64>,
    n_cap: usize,
) -> CliResult<Vec<(usize, usize, f64)>> {
    let table = family.base_table();
    let rule_table = measure.recurrence_coefficients(n_cap + 2)?;
    let (nodes, weights) = gauss_quadrature(&rule_table, n_cap + 1)?;
    let evals: Vec<_> = nodes
        .iter()
        .map(|&x| eval_with_derivatives(table, n_cap, x, 0))
        .collect::<Result<_, _>>()?;
    let mut q_at_nodes = vec![vec![0.0f64; nodes.len()]; n_cap + 1];
    for n in 0..=n_cap {
        for (m, ev) in evals.iter().enumerate() {
            let mut acc = 0.0;
            for (k, &cv) in family.coefficients(n).iter().enumerate() {
                acc += cv * ev.value(k, 0);
            }
            q_at_nodes[n][m] = acc;
        }
    }
    let r = family.r();
    let q_derivs = family.derivatives_at_c(r)?;
    let mut rows = Vec::new();
    for i in 0..=n_cap {
        for j in 0..=i {
            let mut acc = 0.0f64;
            for (m, &w) in weights.iter().enumerate() {
                acc += w * q_at_nodes[i][m] * q_at_nodes[j][m];
            }
            for (l, &mass) in family.masses().iter().enumerate() {
                if mass > 0.0 {
                    acc += mass * q_derivs[i][l] * q_derivs[j][l];
                }
            }
            let expected = if i == j { 1.0 } else { 0.0 };
            rows.push((j, i, (acc - expected).abs()));
        }
    }
    Ok(rows)
}

pub fn cmd_build(cfg: &ExperimentConfig, out: &Path) -> CliResult<()> {
    check_degree_cap(cfg)?;
    let (family, _) = build_family(cfg)?;
    ensure_out_dir(out)?;

    let mut header_owned: Vec<String> = vec!["n".into()];
    for k in 0..=cfg.n_max {
        header_owned.push(format!("c{k}"));
    }
    let header: Vec<&str> = header_owned.iter().map(String::as_str).collect();
    let rows: Vec<Vec<Cell>> = (0..=cfg.n_max)
        .map(|n| {
            let mut row: Vec<Cell> = Vec::with_capacity(cfg.n_max + 2);
            row.push(n.into());
            for k in 0..=cfg.n_max {
                row.push(family.coefficient(n, k).into());
            }
            row
        })
        .collect();
    write(&out.join("q_coeffs.csv"), &header, &rows)?;

    let cap = cfg.n_max.min(50);
    let residuals = orthonormality_rows(&family, &cfg.measure, cap)?;
    let rows: Vec<Vec<Cell>> = residuals
        .into_iter()
        .map(|(i, j, r)| vec![i.into(), j.into(), r.into()])
        .collect();
    write(
        &out.join("orthonormality_residual.csv"),
        &["i", "j", "residual"],
        &rows,
    )?;
    Ok(())
}

/// Everything the symmetric-origin pathway needs, built once.
struct SymmetricRun {
    split: SymmetricSplit<f64>,
    even: SobolevFamily<f64>,
    odd: SobolevFamily<f64>,
}

fn symmetric_run(cfg: &ExperimentConfig) -> CliResult<SymmetricRun> {
    let r_half = (cfg.masses.len() + 1) / 2 - 1;
    let depth = 2 * (r_half + 1);
    let half_cap = cfg.n_max / 2 + depth + 1;
    let split = symmetrize(&cfg.measure, &cfg.masses, half_cap)?;
    let (even, odd) = even_odd_families(&split, half_cap - depth)?;
    Ok(SymmetricRun { split, even, odd })
}

pub fn cmd_lambda(cfg: &ExperimentConfig, out: &Path) -> CliResult<()> {
    check_degree_cap(cfg)?;
    ensure_out_dir(out)?;
    let c = cfg.c()?;

    let (order, rows): (usize, Vec<(usize, Vec<f64>, f64)>) = if cfg.symmetric_origin() {
        let run = symmetric_run(cfg)?;
        let depth = 2 * (run.split.r() + 1);
        let (lad_e, lad_o) = half_line_ladders(&run.split, depth)?;
        let order = run.split.r() + 1;
        let min_degree = 2 * order;
        if cfg.n_list.iter().any(|&m| m < min_degree) {
            return Err(CliError::Config(format!(
                "connection rows need degree >= {min_degree} in the symmetric case"
            )));
        }
        let points: Vec<f64> = sample_points(&cfg.measure, 20)
            .iter()
            .map(|x| x * x)
            .collect();
        let rows = cfg
            .n_list
            .par_iter()
            .map(|&m| -> CliResult<(usize, Vec<f64>, f64)> {
                let half = m / 2;
                let (family, lad) = if m % 2 == 0 {
                    (&run.even, &lad_e)
                } else {
                    (&run.odd, &lad_o)
                };
                let mut row = connection_coefficients(family, lad, half)?;
                let residual = verify_connection(&mut row, family, lad, &points)?;
                Ok((m, row.lambdas, residual))
            })
            .collect::<CliResult<Vec<_>>>()?;
        (order, rows)
    } else {
        let order = cfg.masses.len();
        if cfg.n_list.iter().any(|&n| n < order) {
            return Err(CliError::Config(format!(
                "connection rows need n >= r + 1 = {order}"
            )));
        }
        let (family, _) = build_family(cfg)?;
        let lad = ladder(&cfg.measure, c, 2 * order, cfg.n_max + order)?;
        let points = sample_points(&cfg.measure, 20);
        let rows = cfg
            .n_list
            .par_iter()
            .map(|&n| -> CliResult<(usize, Vec<f64>, f64)> {
                let mut row = connection_coefficients(&family, &lad, n)?;
                let residual = verify_connection(&mut row, &family, &lad, &points)?;
                Ok((n, row.lambdas, residual))
            })
            .collect::<CliResult<Vec<_>>>()?;
        (order, rows)
    };

    let mut header_owned: Vec<String> = vec!["n".into()];
    for j in 0..=order {
        header_owned.push(format!("lambda_{j}"));
    }
    header_owned.push("residual".into());
    let header: Vec<&str> = header_owned.iter().map(String::as_str).collect();
    let csv_rows: Vec<Vec<Cell>> = rows
        .into_iter()
        .map(|(n, lambdas, residual)| {
            let mut row: Vec<Cell> = vec![n.into()];
            row.extend(lambdas.into_iter().map(Cell::from));
            row.push(residual.into());
            row
        })
        .collect();
    write(&out.join("lambda_table.csv"), &header, &csv_rows)?;
    Ok(())
}

enum MassMode {
    AllZero,
    AllPositive,
}

fn mass_mode(cfg: &ExperimentConfig) -> CliResult<MassMode> {
    if cfg.masses.iter().all(|&m| m == 0.0) {
        Ok(MassMode::AllZero)
    } else if cfg.masses.iter().all(|&m| m > 0.0) {
        Ok(MassMode::AllPositive)
    } else {
        Err(CliError::Config(
            "the scaled limits are stated for all masses positive (or all zero)".into(),
        ))
    }
}

pub fn cmd_mh(cfg: &ExperimentConfig, out: &Path) -> CliResult<()> {
    check_degree_cap(cfg)?;
    ensure_out_dir(out)?;
    let c = cfg.c()?;
    let law = scaling_law(&cfg.measure, c)?;
    let grid = z_grid(cfg);
    let mode = mass_mode(cfg)?;

    // scaled(n, z) and limit(z) per mode and pathway.
    let profile_n = *cfg.n_list.last().unwrap();
    let (errors, profile): (Vec<(usize, f64)>, Vec<(f64, f64, f64)>) = if cfg.symmetric_origin() {
        match mode {
            MassMode::AllZero => {
                let table = cfg.measure.recurrence_coefficients(cfg.n_max)?;
                let limit = |m: usize, z: f64| -> CliResult<f64> {
                    let nu = law.nu();
                    Ok(if m % 2 == 0 {
                        bessel_j_scaled(nu, z)?
                    } else {
                        z * bessel_j_scaled(nu + 1.0, z)?
                    })
                };
                collect_mh(cfg, &grid, profile_n, |m, z| {
                    Ok(scaled_eval_symmetric_table(&table, &law, m, z)?)
                }, limit)?
            }
            MassMode::AllPositive => {
                let run = symmetric_run(cfg)?;
                let r = run.split.r();
                let limit = |m: usize, z: f64| -> CliResult<f64> {
                    Ok(if m % 2 == 0 {
                        mh_limit_q(&law, r, z)?
                    } else {
                        mh_limit_q_symmetric_odd(&law, r, z)?
                    })
                };
                collect_mh(cfg, &grid, profile_n, |m, z| {
                    Ok(scaled_eval_q_symmetric(&run.even, &run.odd, &law, m, z)?)
                }, limit)?
            }
        }
    } else {
        match mode {
            MassMode::AllZero => {
                let table = cfg.measure.recurrence_coefficients(cfg.n_max)?;
                collect_mh(
                    cfg,
                    &grid,
                    profile_n,
                    |n, z| Ok(scaled_eval_table(&table, &law, n, z, 0)?),
                    |_, z| Ok(bessel_j_scaled(law.nu(), z)?),
                )?
            }
            MassMode::AllPositive => {
                let (family, _) = build_family(cfg)?;
                let r = family.r();
                collect_mh(
                    cfg,
                    &grid,
                    profile_n,
                    |n, z| Ok(scaled_eval_q(&family, &law, n, z)?),
                    |_, z| Ok(mh_limit_q(&law, r, z)?),
                )?
            }
        }
    };

    let rows: Vec<Vec<Cell>> = errors
        .into_iter()
        .map(|(n, e)| vec![n.into(), e.into()])
        .collect();
    write(&out.join("mh_error.csv"), &["n", "sup_error"], &rows)?;

    let rows: Vec<Vec<Cell>> = profile
        .into_iter()
        .map(|(z, v, t)| vec![z.into(), v.into(), t.into()])
        .collect();
    write(
        &out.join(format!("mh_profile_n{profile_n}.csv")),
        &["z", "scaled_value", "limit_value"],
        &rows,
    )?;
    Ok(())
}

fn collect_mh(
    cfg: &ExperimentConfig,
    grid: &[f64],
    profile_n: usize,
    scaled: impl Fn(usize, f64) -> CliResult<f64> + Sync,
    limit: impl Fn(usize, f64) -> CliResult<f64> + Sync,
) -> CliResult<(Vec<(usize, f64)>, Vec<(f64, f64, f64)>)> {
    let errors = cfg
        .n_list
        .par_iter()
        .map(|&n| -> CliResult<(usize, f64)> {
            let mut sup = 0.0f64;
            for &z in grid {
                sup = sup.max((scaled(n, z)? - limit(n, z)?).abs());
            }
            Ok((n, sup))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let profile = grid
        .iter()
        .map(|&z| -> CliResult<(f64, f64, f64)> {
            Ok((z, scaled(profile_n, z)?, limit(profile_n, z)?))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((errors, profile))
}

pub fn cmd_zeros(cfg: &ExperimentConfig, out: &Path) -> CliResult<()> {
    check_degree_cap(cfg)?;
    ensure_out_dir(out)?;
    let c = cfg.c()?;
    let law = scaling_law(&cfg.measure, c)?;
    let mode = mass_mode(cfg)?;
    if cfg.k_max > *cfg.n_list.first().unwrap() {
        return Err(CliError::Config(
            "k_max must not exceed the smallest n_list entry".into(),
        ));
    }

    let symmetric = cfg.symmetric_origin();
    let r_half = (cfg.masses.len() + 1) / 2 - 1;
    let table: Option<RecurrenceTable<f64>> = match mode {
        MassMode::AllZero => Some(cfg.measure.recurrence_coefficients(cfg.n_max)?),
        MassMode::AllPositive => None,
    };
    let family: Option<SobolevFamily<f64>> = match mode {
        MassMode::AllZero => None,
        MassMode::AllPositive => Some(build_family(cfg)?.0),
    };

    let per_n = cfg
        .n_list
        .par_iter()
        .map(|&n| -> CliResult<Vec<Vec<Cell>>> {
            let zeros = match (&table, &family) {
                (Some(t), _) => classical_zeros(t, n)?,
                (_, Some(f)) => sobolev_zeros(f, n)?,
                _ => unreachable!(),
            };
            let (index, accelerated, order) = if symmetric {
                let half = n / 2;
                let acc = match mode {
                    MassMode::AllZero => usize::from(n % 2 == 1),
                    // The pinned origin zero of odd degrees counts as
                    // collapsed alongside the r+1 accelerated pairs.
                    MassMode::AllPositive => r_half + 1 + usize::from(n % 2 == 1),
                };
                let order = match mode {
                    MassMode::AllZero => law.nu() + f64::from(n as u32 % 2),
                    MassMode::AllPositive => {
                        law.nu() + (2 * r_half + 2) as f64 + f64::from(n as u32 % 2)
                    }
                };
                (half, acc, order)
            } else {
                let acc = match mode {
                    MassMode::AllZero => 0,
                    MassMode::AllPositive => cfg.masses.len(),
                };
                let order = match mode {
                    MassMode::AllZero => law.nu(),
                    MassMode::AllPositive => law.nu() + (2 * cfg.masses.len()) as f64,
                };
                (n, acc, order)
            };
            let scaled = scaled_zero_table(&zeros, &law, index, accelerated, order, cfg.k_max)?;
            Ok(scaled
                .into_iter()
                .map(|row| {
                    vec![
                        Cell::from(n),
                        Cell::from(row.k),
                        Cell::from(row.zeta),
                        Cell::from(row.target),
                        Cell::from(row.target_plain),
                    ]
                })
                .collect())
        })
        .collect::<CliResult<Vec<_>>>()?;

    let rows: Vec<Vec<Cell>> = per_n.into_iter().flatten().collect();
    write(
        &out.join("zeros_scaled.csv"),
        &["n", "k", "zeta", "target", "target_plain"],
        &rows,
    )?;
    Ok(())
}

pub fn cmd_verify(cfg: &ExperimentConfig) -> CliResult<()> {
    check_degree_cap(cfg)?;
    let c = cfg.c()?;
    let mut all_pass = true;
    let mut report = |name: &str, measured: f64, tol: f64| {
        let ok = measured <= tol;
        all_pass &= ok;
        println!(
            "{} {name}: measured {measured:.3e}, tolerance {tol:.1e}",
            if ok { "PASS" } else { "FAIL" }
        );
    };

    let (family, _) = build_family(cfg)?;

    // Sobolev orthonormality by quadrature.
    let cap = cfg.n_max.min(50);
    let worst = orthonormality_rows(&family, &cfg.measure, cap)?
        .into_iter()
        .map(|(_, _, r)| r)
        .fold(0.0f64, f64::max);
    report(
        "sobolev orthonormality",
        worst,
        cfg.tolerance("orthonormality", 1e-8),
    );

    // Construction-route equivalence.
    let eq_cap = cfg.n_max.min(40);
    let product = SobolevProduct::new(cfg.measure, c, cfg.masses.clone())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let oracle = SobolevFamily::build_gram_oracle(&product, eq_cap)?;
    let mut diff = 0.0f64;
    for n in 0..=eq_cap {
        for k in 0..=n {
            diff = diff.max((family.coefficient(n, k) - oracle.coefficient(n, k)).abs());
        }
    }
    report(
        "construction route equivalence",
        diff,
        cfg.tolerance("route_equivalence", 1e-8),
    );

    // Connection residuals over the configured degrees.
    let order = if cfg.symmetric_origin() {
        (cfg.masses.len() + 1) / 2
    } else {
        cfg.masses.len()
    };
    let degrees: Vec<usize> = cfg
        .n_list
        .iter()
        .copied()
        .filter(|&n| n >= 2 * order && n <= cfg.n_max)
        .collect();
    if !degrees.is_empty() {
        let mut worst = 0.0f64;
        if cfg.symmetric_origin() {
            let run = symmetric_run(cfg)?;
            let (lad_e, lad_o) = half_line_ladders(&run.split, 2 * (run.split.r() + 1))?;
            let points: Vec<f64> = sample_points(&cfg.measure, 20)
                .iter()
                .map(|x| x * x)
                .collect();
            for &m in &degrees {
                let (fam, lad) = if m % 2 == 0 {
                    (&run.even, &lad_e)
                } else {
                    (&run.odd, &lad_o)
                };
                let mut row = connection_coefficients(fam, lad, m / 2)?;
                worst = worst.max(verify_connection(&mut row, fam, lad, &points)?);
            }
        } else {
            let lad = ladder(&cfg.measure, c, 2 * order, cfg.n_max + order)?;
            let points = sample_points(&cfg.measure, 20);
            for &n in &degrees {
                let mut row = connection_coefficients(&family, &lad, n)?;
                worst = worst.max(verify_connection(&mut row, &family, &lad, &points)?);
            }
        }
        report(
            "connection residual",
            worst,
            cfg.tolerance("connection_residual", 1e-8),
        );
    }

    // Quasi-orthogonality of q_n against (x-c)^k under the full product.
    let (nodes, weights) = gauss_quadrature(
        &cfg.measure.recurrence_coefficients(cap + 2)?,
        (cap + cfg.masses.len()) / 2 + 2,
    )?;
    let evals: Vec<_> = nodes
        .iter()
        .map(|&x| eval_with_derivatives(family.base_table(), cap, x, 0))
        .collect::<Result<_, _>>()?;
    let q_derivs = family.derivatives_at_c(family.r())?;
    let mut worst = 0.0f64;
    let mut factorial = 1.0f64;
    for k in 0..cfg.masses.len() {
        if k > 0 {
            factorial *= k as f64;
        }
        for n in k + 1..=cap {
            let mut acc = 0.0f64;
            for (m, &w) in weights.iter().enumerate() {
                let mut q = 0.0;
                for (i, &cv) in family.coefficients(n).iter().enumerate() {
                    q += cv * evals[m].value(i, 0);
                }
                acc += w * q * (nodes[m] - c).powi(k as i32);
            }
            acc += cfg.masses[k] * factorial * q_derivs[n][k];
            worst = worst.max(acc.abs());
        }
    }
    report(
        "quasi-orthogonality",
        worst,
        cfg.tolerance("quasi_orthogonality", 1e-9),
    );

    if all_pass {
        println!("verify: all checks passed");
        Ok(())
    } else {
        Err(CliError::Numerical("verification checks failed".into()))
    }
}
