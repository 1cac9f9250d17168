//! Sector diagonalization and the global ground state of H(xi).
//!
//! Every (N, l) sector matrix is symmetric tridiagonal in the n-ladder
//! ordering, so it is solved directly with an implicit-shift QL sweep
//! (the classic EISPACK tql2 scheme) with eigenvector accumulation.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::fock::{build_sector, hamiltonian_matrix, SectorMatrix};
use crate::{Error, Result};

/// Exact ground state of H(xi) for a given (N, xi): the minimizing sector l,
/// the energy, and the real coefficients keyed by (n, m) with l = n - 2m.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub n_total: u32,
    pub xi: f64,
    /// Angular-momentum sector of the global minimum.
    pub l: i32,
    pub energy: f64,
    /// Coefficient map over the ground sector; entries outside it are zero.
    pub coeffs: BTreeMap<(u32, u32), f64>,
}

impl GroundState {
    pub fn energy_per_particle(&self) -> f64 {
        self.energy / self.n_total as f64
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix, accumulating the
/// rotations so `z` columns end up as eigenvectors. `diag` is overwritten
/// with the (unsorted) eigenvalues.
fn tridiag_ql(diag: &mut [f64], off: &[f64], z: &mut [Vec<f64>]) -> std::result::Result<(), ()> {
    let n = diag.len();
    if n <= 1 {
        return Ok(());
    }
    let mut e = off.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(());
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                for zk in z.iter_mut() {
                    f = zk[i + 1];
                    zk[i + 1] = s * zk[i] + c * f;
                    zk[i] = c * zk[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn solve_matrix(matrix: &SectorMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = matrix.dim();
    let mut d = matrix.diag.clone();
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = vec![0.0; n];
            row[i] = 1.0;
            row
        })
        .collect();
    tridiag_ql(&mut d, &matrix.off_diag, &mut z).map_err(|_| Error::EigensolverFailed {
        n_total: matrix.n_total,
        l: matrix.l,
    })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let energies: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let lowest_col = order[0];
    let mut vec: Vec<f64> = (0..n).map(|row| z[row][lowest_col]).collect();
    let norm = vec.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in &mut vec {
        *v /= norm;
    }
    // deterministic sign: largest-magnitude component positive
    let lead = vec
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| a.abs().partial_cmp(&b.abs()).unwrap().then(ib.cmp(ia)))
        .map(|(_, &v)| v)
        .unwrap_or(1.0);
    if lead < 0.0 {
        for v in &mut vec {
            *v = -*v;
        }
    }
    Ok((energies, vec))
}

/// Diagonalize the (N, l) sector of H(xi). Returns all eigenvalues in
/// ascending order plus the unit-norm eigenvector of the smallest one,
/// signed so its largest-magnitude component is positive.
pub fn solve_sector(n_total: u32, l: i32, xi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let sector = build_sector(n_total, l)?;
    let h = hamiltonian_matrix(&sector, xi)?;
    solve_matrix(&h)
}

/// Two sector minima closer than this (relative) are treated as degenerate
/// and resolved by the (|l|, l) tie-break. Sector gaps of physical origin
/// scale like 1/N and sit many orders above this at any reachable N.
const DEGENERACY_TOL: f64 = 1e-9;

/// Scan every sector l = -N..N and return the global ground state.
/// Degeneracies are broken by smallest |l|, then smallest l.
pub fn ground_state(n_total: u32, xi: f64) -> Result<GroundState> {
    if n_total < 2 {
        return Err(Error::BosonNumberTooSmall(n_total));
    }
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::XiOutOfRange(xi));
    }
    let ls: Vec<i32> = (-(n_total as i32)..=n_total as i32).collect();
    let solved: Vec<(i32, Vec<f64>, Vec<f64>)> = ls
        .par_iter()
        .map(|&l| solve_sector(n_total, l, xi).map(|(es, v)| (l, es, v)))
        .collect::<Result<_>>()?;
    let mut best: Option<&(i32, Vec<f64>, Vec<f64>)> = None;
    for cand in &solved {
        match best {
            None => best = Some(cand),
            Some(cur) => {
                let (lc, ec) = (cand.0, cand.1[0]);
                let (lb, eb) = (cur.0, cur.1[0]);
                let scale = 1.0 + eb.abs().max(ec.abs());
                let tied = (ec - eb).abs() <= DEGENERACY_TOL * scale;
                let better = if tied {
                    (lc.abs(), lc) < (lb.abs(), lb)
                } else {
                    ec < eb
                };
                if better {
                    best = Some(cand);
                }
            }
        }
    }
    let (l, energies, vec) = best.expect("sector scan is never empty");
    let sector = build_sector(n_total, *l)?;
    let coeffs = sector
        .n_values
        .iter()
        .zip(vec)
        .map(|(&n, &c)| {
            let m = ((n as i64 - *l as i64) / 2) as u32;
            ((n, m), c)
        })
        .collect();
    Ok(GroundState {
        n_total,
        xi,
        l: *l,
        energy: energies[0],
        coeffs,
    })
}

/// Per-particle exact ground energies over a xi grid, in input order.
pub fn energy_curve(n_total: u32, xi_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    xi_grid
        .iter()
        .map(|&xi| ground_state(n_total, xi).map(|gs| (xi, gs.energy_per_particle())))
        .collect()
}
