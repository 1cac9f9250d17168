//! Fock-space bookkeeping for the totally symmetric U(3) representation.
//!
//! Basis vectors |N; n, l> carry the total boson number N, the vector-boson
//! count n and the 2D angular momentum l, with occupations
//! (sigma, tau+, tau-) = (N - n, (n + l)/2, (n - l)/2). Both the SO(3)
//! Casimir W^2 and the model Hamiltonian
//!
//!   H(xi) = (1 - xi) n_hat + xi (N(N + 1) - W^2) / (N - 1)
//!
//! conserve l and the parity (-1)^n, so they decompose into symmetric
//! tridiagonal blocks over the n-ladder of each (N, l) sector. This module
//! builds those blocks; diagonalization lives in [`crate::spectra`].

use crate::{Error, Result};

/// Quantum numbers (N, n, l) of one symmetric-representation basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    /// Total boson number N (representation label).
    pub n_total: u32,
    /// Vector-boson count n, 0 <= n <= N.
    pub n: u32,
    /// 2D angular momentum l, |l| <= n and n - l even.
    pub l: i32,
}

impl BasisIndex {
    pub fn new(n_total: u32, n: u32, l: i32) -> Result<Self> {
        let valid = n <= n_total && l.unsigned_abs() <= n && (n as i64 - l as i64) % 2 == 0;
        if !valid {
            return Err(Error::InvalidBasisIndex { n_total, n, l });
        }
        Ok(Self { n_total, n, l })
    }

    /// m = (n - l)/2, the tau- occupation; also the second index of the
    /// ground-state coefficient maps.
    pub fn m(&self) -> u32 {
        ((self.n as i64 - self.l as i64) / 2) as u32
    }

    /// Occupations (sigma, tau+, tau-).
    pub fn occupations(&self) -> (u32, u32, u32) {
        let tau_minus = self.m();
        let tau_plus = self.n - tau_minus;
        (self.n_total - self.n, tau_plus, tau_minus)
    }
}

/// All basis vectors of fixed (N, l), ordered by ascending n. Along this
/// ladder n steps by 2, so n-changing operators are tridiagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    pub n_total: u32,
    pub l: i32,
    /// Ascending n with |l| <= n <= N and n = l (mod 2).
    pub n_values: Vec<u32>,
}

impl SectorBasis {
    pub fn dim(&self) -> usize {
        self.n_values.len()
    }

    /// Parity (-1)^n shared by every vector in the sector.
    pub fn parity(&self) -> i32 {
        if self.l.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}

/// Real symmetric tridiagonal matrix over the n-ladder of one sector.
/// `off_diag[i]` couples `n_values[i]` to `n_values[i + 1]` (a Delta n = 2
/// step); every entry with |Delta n| outside {0, 2} vanishes identically.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorMatrix {
    pub n_total: u32,
    pub l: i32,
    pub diag: Vec<f64>,
    pub off_diag: Vec<f64>,
}

impl SectorMatrix {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Entry by position in the sector ordering. Symmetric by construction.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag[i]
        } else if i.abs_diff(j) == 1 {
            self.off_diag[i.min(j)]
        } else {
            0.0
        }
    }

    /// Dense row-major copy, mainly for tests and cross-checks.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        (0..d)
            .map(|i| (0..d).map(|j| self.entry(i, j)).collect())
            .collect()
    }
}

/// Enumerate the (N, l) sector: n runs over {|l|, |l| + 2, ..., <= N}.
pub fn build_sector(n_total: u32, l: i32) -> Result<SectorBasis> {
    if l.unsigned_abs() > n_total {
        return Err(Error::InvalidSector { n_total, l });
    }
    let n_values = (l.unsigned_abs()..=n_total).step_by(2).collect();
    Ok(SectorBasis {
        n_total,
        l,
        n_values,
    })
}

/// W^2 = (D+ D- + D- D+)/2 + l^2 restricted to one sector.
///
/// Diagonal at n: (N - n)(n + 2) + (N - n + 1) n + l^2.
/// Coupling n <-> n - 2: -sqrt((N - n + 2)(N - n + 1)(n + l)(n - l)).
/// All factors are integers below 2^53 for any N this crate targets, so the
/// products are computed exactly in f64 before the square root.
pub fn w2_matrix(sector: &SectorBasis) -> SectorMatrix {
    let nt = sector.n_total as f64;
    let l = sector.l as f64;
    let diag = sector
        .n_values
        .iter()
        .map(|&n| {
            let n = n as f64;
            (nt - n) * (n + 2.0) + (nt - n + 1.0) * n + l * l
        })
        .collect();
    let off_diag = sector
        .n_values
        .windows(2)
        .map(|w| {
            // entry <n | W^2 | n + 2> with n the lower member of the pair
            let n = w[1] as f64;
            -((nt - n + 2.0) * (nt - n + 1.0) * (n + l) * (n - l)).sqrt()
        })
        .collect();
    SectorMatrix {
        n_total: sector.n_total,
        l: sector.l,
        diag,
        off_diag,
    }
}

/// H(xi) = (1 - xi) n_hat + xi (N(N + 1) - W^2)/(N - 1) on one sector.
pub fn hamiltonian_matrix(sector: &SectorBasis, xi: f64) -> Result<SectorMatrix> {
    if sector.n_total < 2 {
        return Err(Error::BosonNumberTooSmall(sector.n_total));
    }
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::XiOutOfRange(xi));
    }
    let w2 = w2_matrix(sector);
    let nt = sector.n_total as f64;
    let casimir_shift = nt * (nt + 1.0);
    let denom = nt - 1.0;
    let diag = sector
        .n_values
        .iter()
        .zip(&w2.diag)
        .map(|(&n, &w)| (1.0 - xi) * n as f64 + xi * (casimir_shift - w) / denom)
        .collect();
    let off_diag = w2.off_diag.iter().map(|&w| -xi * w / denom).collect();
    Ok(SectorMatrix {
        n_total: sector.n_total,
        l: sector.l,
        diag,
        off_diag,
    })
}
