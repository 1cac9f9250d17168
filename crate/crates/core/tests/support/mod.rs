//! Brute-force operator oracle used by the W^2 tests and the acceptance
//! suite. It never touches the closed-form matrix elements: it applies the
//! raw boson operators sigma, tau+, tau- to occupation-number vectors and
//! evaluates W^2 = (D+ D- + D- D+)/2 + l^2 from the operator products
//!   D+ = sqrt(2) (tau+^dag sigma - sigma^dag tau-)
//!   D- = sqrt(2) (-tau-^dag sigma + sigma^dag tau+)
//!   l  = tau+^dag tau+ - tau-^dag tau-.

use std::collections::HashMap;

use vibron_core::fock::BasisIndex;

/// Sparse vector over occupation states (n_sigma, n_tau_plus, n_tau_minus).
pub type OccState = HashMap<(u32, u32, u32), f64>;

#[derive(Clone, Copy)]
pub enum Mode {
    Sigma,
    TauPlus,
    TauMinus,
}

pub fn annihilate(state: &OccState, mode: Mode) -> OccState {
    let mut out = OccState::new();
    for (&(ns, np, nm), &amp) in state {
        let (occ, next) = match mode {
            Mode::Sigma => (ns, (ns.wrapping_sub(1), np, nm)),
            Mode::TauPlus => (np, (ns, np.wrapping_sub(1), nm)),
            Mode::TauMinus => (nm, (ns, np, nm.wrapping_sub(1))),
        };
        if occ > 0 {
            *out.entry(next).or_insert(0.0) += amp * (occ as f64).sqrt();
        }
    }
    out
}

pub fn create(state: &OccState, mode: Mode) -> OccState {
    let mut out = OccState::new();
    for (&(ns, np, nm), &amp) in state {
        let (occ, next) = match mode {
            Mode::Sigma => (ns, (ns + 1, np, nm)),
            Mode::TauPlus => (np, (ns, np + 1, nm)),
            Mode::TauMinus => (nm, (ns, np, nm + 1)),
        };
        *out.entry(next).or_insert(0.0) += amp * (occ as f64 + 1.0).sqrt();
    }
    out
}

pub fn scaled(state: &OccState, factor: f64) -> OccState {
    state.iter().map(|(&k, &a)| (k, a * factor)).collect()
}

pub fn add(a: &OccState, b: &OccState) -> OccState {
    let mut out = a.clone();
    for (&k, &amp) in b {
        *out.entry(k).or_insert(0.0) += amp;
    }
    out
}

pub fn dipole_plus(state: &OccState) -> OccState {
    // sqrt(2) (tau+^dag sigma - sigma^dag tau-)
    let t1 = create(&annihilate(state, Mode::Sigma), Mode::TauPlus);
    let t2 = create(&annihilate(state, Mode::TauMinus), Mode::Sigma);
    scaled(&add(&t1, &scaled(&t2, -1.0)), 2.0_f64.sqrt())
}

pub fn dipole_minus(state: &OccState) -> OccState {
    // sqrt(2) (-tau-^dag sigma + sigma^dag tau+)
    let t1 = create(&annihilate(state, Mode::Sigma), Mode::TauMinus);
    let t2 = create(&annihilate(state, Mode::TauPlus), Mode::Sigma);
    scaled(&add(&scaled(&t1, -1.0), &t2), 2.0_f64.sqrt())
}

pub fn angular_momentum(state: &OccState) -> OccState {
    state
        .iter()
        .map(|(&(ns, np, nm), &amp)| ((ns, np, nm), amp * (np as f64 - nm as f64)))
        .collect()
}

pub fn w2_apply(state: &OccState) -> OccState {
    let pm = dipole_plus(&dipole_minus(state));
    let mp = dipole_minus(&dipole_plus(state));
    let ll = angular_momentum(&angular_momentum(state));
    add(&scaled(&add(&pm, &mp), 0.5), &ll)
}

pub fn dot(a: &OccState, b: &OccState) -> f64 {
    a.iter()
        .map(|(k, &amp)| amp * b.get(k).copied().unwrap_or(0.0))
        .sum()
}

pub fn basis_state(idx: BasisIndex) -> OccState {
    let mut out = OccState::new();
    out.insert(idx.occupations(), 1.0);
    out
}
