//! Zero manifolds of the variational cat Husimi distribution.
//!
//! The even cat amplitude factorizes into N linear factors in
//! z2bar - z1bar, so its Husimi density vanishes on straight lines: in the
//! split coordinates z_j = x_j + i p_j they satisfy x1 = x2 together with
//! p2 = p1 + (sqrt 2 / r) tan((2 l + 1) pi / (2 N)). The amplitude algebra
//! produces the opposite overall sign of the offset, but the index symmetry
//! l <-> -l - 1 maps one signed family onto the other, so the stored
//! (positively signed) form describes the identical set of lines.

use num_complex::Complex64;

use crate::coherent::PhasePoint;
use crate::husimi::husimi_cat;
use crate::variational::cat_equilibrium;
use crate::{Error, Result};

/// One zero line of the cat Husimi density: x1 = x2 and p2 - p1 = offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroLine {
    /// Index l in [-floor(N/2), floor(N/2) - 1].
    pub index: i32,
    /// The p2 - p1 intercept, (sqrt 2 / r) tan((2 l + 1) pi / (2 N)).
    pub offset: f64,
}

/// Enumerate the zero lines at radius r: none at r = 0, otherwise exactly
/// 2 floor(N/2) lines with offsets symmetric under negation.
pub fn zero_lines(n_total: u32, radius: f64) -> Vec<ZeroLine> {
    if radius == 0.0 {
        return Vec::new();
    }
    let half = (n_total / 2) as i32;
    let scale = 2.0_f64.sqrt() / radius;
    (-half..half)
        .map(|index| {
            let odd = 2 * index + 1;
            // |2l + 1| < N over the whole index range, so tan stays off its pole
            debug_assert!(odd.unsigned_abs() < n_total);
            let angle = odd as f64 * std::f64::consts::PI / (2.0 * n_total as f64);
            ZeroLine {
                index,
                offset: scale * angle.tan(),
            }
        })
        .collect()
}

/// Sample every zero line and return the largest cat Husimi value found.
/// Points run over a deterministic sweep of the free line coordinates
/// (x1 = x2 = x, p1 free).
pub fn verify_zeros(n_total: u32, radius: f64, samples_per_line: usize) -> f64 {
    let lines = zero_lines(n_total, radius);
    let mut worst = 0.0_f64;
    for line in &lines {
        for k in 0..samples_per_line.max(1) {
            let frac = if samples_per_line > 1 {
                k as f64 / (samples_per_line - 1) as f64
            } else {
                0.5
            };
            let x = -1.5 + 3.0 * frac;
            let p1 = -2.0 + 4.0 * frac;
            let point = PhasePoint::new(Complex64::new(x, p1), Complex64::new(x, p1 + line.offset));
            worst = worst.max(husimi_cat(n_total, radius, &point));
        }
    }
    worst
}

/// Density of zero-line offsets inside |offset| <= window at the cat
/// equilibrium radius of (N, xi); zero throughout the linear phase.
pub fn zero_density(n_total: u32, xi: f64, window: f64) -> Result<f64> {
    if window <= 0.0 {
        return Err(Error::NonPositiveTolerance(window));
    }
    let (radius, _) = cat_equilibrium(n_total, xi)?;
    if radius == 0.0 {
        return Ok(0.0);
    }
    let count = zero_lines(n_total, radius)
        .iter()
        .filter(|l| l.offset.abs() <= window)
        .count();
    Ok(count as f64 / window)
}
