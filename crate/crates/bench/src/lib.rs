//! Shared input builders for the criterion benchmarks.

use vibron_core::husimi::HusimiField;
use vibron_core::spectra::{ground_state, GroundState};

pub fn reference_ground_state(n_total: u32, xi: f64) -> GroundState {
    ground_state(n_total, xi).expect("reference ground state")
}

pub fn reference_fields(n_total: u32, xi: f64) -> Vec<HusimiField> {
    let gs = reference_ground_state(n_total, xi);
    vec![
        HusimiField::exact(&gs),
        HusimiField::cs(n_total, 0.6),
        HusimiField::cat(n_total, 0.6),
    ]
}
