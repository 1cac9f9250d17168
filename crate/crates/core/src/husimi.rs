//! Husimi distributions of the exact ground state and of the variational
//! coherent/cat states, evaluated pointwise or on cross-section grids.
//!
//! Every distribution here is the squared overlap of a unit vector with a
//! coherent state, so values lie in [0, 1]. Evaluation works in normalized
//! homogeneous coordinates; overlaps become inner products of unit
//! 3-vectors raised to the N-th power, which neither overflows nor loses
//! the phase coherence needed near the zero manifolds.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coherent::{cat_norm, PhasePoint};
use crate::spectra::GroundState;
use crate::util::ln_factorial;
use crate::{Error, Result};

/// Above this boson number the N-th powers of moduli go through log space.
const LOG_SPACE_THRESHOLD: u32 = 150;

fn complex_pow_n(base: Complex64, n: u32) -> Complex64 {
    if n <= LOG_SPACE_THRESHOLD {
        base.powu(n)
    } else if base == Complex64::ZERO {
        Complex64::ZERO
    } else {
        (base.ln() * n as f64).exp()
    }
}

fn modulus_sq_pow_n(norm_sqr: f64, n: u32) -> f64 {
    if n <= LOG_SPACE_THRESHOLD {
        norm_sqr.powi(n as i32)
    } else if norm_sqr <= 0.0 {
        0.0
    } else {
        (n as f64 * norm_sqr.ln()).exp()
    }
}

/// Exact-ground-state evaluator: coefficients premultiplied by the
/// square-rooted multinomials, ready for the power-table contraction.
#[derive(Debug, Clone)]
pub struct ExactField {
    n_total: u32,
    xi: f64,
    sector_l: i32,
    /// (n, m, c_{nm} * sqrt(multinomial)).
    terms: Vec<(u32, u32, f64)>,
}

/// A Husimi distribution over CP^2: exact ground state, ordinary
/// coherent-state ansatz, or even-parity cat ansatz.
#[derive(Debug, Clone)]
pub enum HusimiField {
    Exact(ExactField),
    Cs { n_total: u32, radius: f64 },
    Cat { n_total: u32, radius: f64 },
}

impl HusimiField {
    pub fn exact(gs: &GroundState) -> Self {
        let terms = gs
            .coeffs
            .iter()
            .map(|(&(n, m), &c)| {
                let ln_multinomial = ln_factorial(gs.n_total)
                    - ln_factorial(gs.n_total - n)
                    - ln_factorial(n - m)
                    - ln_factorial(m);
                (n, m, c * (0.5 * ln_multinomial).exp())
            })
            .collect();
        HusimiField::Exact(ExactField {
            n_total: gs.n_total,
            xi: gs.xi,
            sector_l: gs.l,
            terms,
        })
    }

    pub fn cs(n_total: u32, radius: f64) -> Self {
        HusimiField::Cs { n_total, radius }
    }

    pub fn cat(n_total: u32, radius: f64) -> Self {
        HusimiField::Cat { n_total, radius }
    }

    pub fn n_total(&self) -> u32 {
        match self {
            HusimiField::Exact(f) => f.n_total,
            HusimiField::Cs { n_total, .. } | HusimiField::Cat { n_total, .. } => *n_total,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            HusimiField::Exact(_) => "exact",
            HusimiField::Cs { .. } => "cs",
            HusimiField::Cat { .. } => "cat",
        }
    }

    /// Sector label of an exact field (None for the variational kinds).
    pub fn sector_l(&self) -> Option<i32> {
        match self {
            HusimiField::Exact(f) => Some(f.sector_l),
            _ => None,
        }
    }

    /// Control parameter of an exact field, if any.
    pub fn xi(&self) -> Option<f64> {
        match self {
            HusimiField::Exact(f) => Some(f.xi),
            _ => None,
        }
    }

    pub fn eval(&self, point: &PhasePoint) -> f64 {
        let (u0, u1, u2) = point.homogeneous();
        self.eval_normalized(u0, u1, u2)
    }

    /// Evaluate at normalized homogeneous coordinates, u0^2 + |u1|^2 +
    /// |u2|^2 = 1. This is the hot path for the quadrature modules.
    pub fn eval_normalized(&self, u0: f64, u1: Complex64, u2: Complex64) -> f64 {
        match self {
            HusimiField::Exact(field) => {
                let nt = field.n_total as usize;
                // conjugated power tables for the overlap <z | psi>
                let c1 = u1.conj();
                let c2 = u2.conj();
                let mut pow1 = Vec::with_capacity(nt + 1);
                let mut pow2 = Vec::with_capacity(nt + 1);
                let mut pow0 = Vec::with_capacity(nt + 1);
                let mut a = Complex64::ONE;
                let mut b = Complex64::ONE;
                let mut c = 1.0;
                for _ in 0..=nt {
                    pow1.push(a);
                    pow2.push(b);
                    pow0.push(c);
                    a *= c1;
                    b *= c2;
                    c *= u0;
                }
                let overlap: Complex64 = field
                    .terms
                    .iter()
                    .map(|&(n, m, w)| {
                        pow1[(n - m) as usize]
                            * pow2[m as usize]
                            * (w * pow0[(field.n_total - n) as usize])
                    })
                    .sum();
                overlap.norm_sqr()
            }
            HusimiField::Cs { n_total, radius } => {
                let g = condensate_inner(u0, u1, u2, *radius, false);
                modulus_sq_pow_n(g.norm_sqr(), *n_total)
            }
            HusimiField::Cat { n_total, radius } => {
                let g_plus = condensate_inner(u0, u1, u2, *radius, false);
                let g_minus = condensate_inner(u0, u1, u2, *radius, true);
                let amp = complex_pow_n(g_plus, *n_total) + complex_pow_n(g_minus, *n_total);
                amp.norm_sqr() / cat_norm(*n_total, *radius).powi(2)
            }
        }
    }
}

/// Inner product u-bar . c of the evaluation point with the normalized
/// condensate vector (1, -+ r/sqrt 2, +- r/sqrt 2)/sqrt(1 + r^2).
fn condensate_inner(
    u0: f64,
    u1: Complex64,
    u2: Complex64,
    radius: f64,
    mirrored: bool,
) -> Complex64 {
    let sign = if mirrored { -1.0 } else { 1.0 };
    let amp = sign * radius / 2.0_f64.sqrt();
    let scale = 1.0 / (1.0 + radius * radius).sqrt();
    (Complex64::from(u0) - u1.conj() * amp + u2.conj() * amp) * scale
}

/// Husimi value of the exact ground state at one phase point.
pub fn husimi_exact(gs: &GroundState, point: &PhasePoint) -> f64 {
    HusimiField::exact(gs).eval(point)
}

/// Husimi value of the ordinary condensate ansatz at radius r.
pub fn husimi_cs(n_total: u32, radius: f64, point: &PhasePoint) -> f64 {
    HusimiField::cs(n_total, radius).eval(point)
}

/// Husimi value of the even-parity cat ansatz at radius r.
pub fn husimi_cat(n_total: u32, radius: f64, point: &PhasePoint) -> f64 {
    HusimiField::cat(n_total, radius).eval(point)
}

/// Which two-dimensional slice of phase space a cross section samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionAxis {
    /// z real: (x1, x2) with p1 = p2 = 0.
    Position,
    /// z imaginary: (p1, p2) with x1 = x2 = 0.
    Momentum,
}

impl SectionAxis {
    fn point(&self, a: f64, b: f64) -> PhasePoint {
        match self {
            SectionAxis::Position => PhasePoint::from_position(a, b),
            SectionAxis::Momentum => PhasePoint::from_momentum(a, b),
        }
    }
}

/// Uniform grid specification shared by both section coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && step.is_finite()) {
            return Err(Error::InvalidGridSpec("non-finite grid bounds".into()));
        }
        if max <= min {
            return Err(Error::InvalidGridSpec(format!(
                "empty or inverted range [{min}, {max}]"
            )));
        }
        if step <= 0.0 {
            return Err(Error::InvalidGridSpec(format!("non-positive step {step}")));
        }
        Ok(Self { min, max, step })
    }

    pub fn coords(&self) -> Vec<f64> {
        let count = ((self.max - self.min) / self.step + 1.0 + 1e-9).floor() as usize;
        (0..count)
            .map(|k| self.min + k as f64 * self.step)
            .collect()
    }
}

/// Sampled cross section: `values[i][j]` is the field at
/// `(coords[i], coords[j])` on the chosen axis, row-major in the first
/// coordinate.
#[derive(Debug, Clone)]
pub struct CrossSectionGrid {
    pub axis: SectionAxis,
    pub coords: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl CrossSectionGrid {
    /// Strict local maxima over 8-neighborhoods, ignoring values below
    /// `rel_floor` times the grid maximum. Boundary samples never count.
    pub fn local_maxima(&self, rel_floor: f64) -> Vec<(usize, usize)> {
        let n = self.coords.len();
        let peak_floor = rel_floor
            * self
                .values
                .iter()
                .flatten()
                .cloned()
                .fold(0.0_f64, f64::max);
        let mut peaks = Vec::new();
        for i in 1..n.saturating_sub(1) {
            for j in 1..n - 1 {
                let v = self.values[i][j];
                if v < peak_floor {
                    continue;
                }
                let strict = (-1..=1)
                    .flat_map(|di| (-1..=1).map(move |dj| (di, dj)))
                    .all(|(di, dj): (i32, i32)| {
                        (di == 0 && dj == 0)
                            || v > self.values[(i as i32 + di) as usize][(j as i32 + dj) as usize]
                    });
                if strict {
                    peaks.push((i, j));
                }
            }
        }
        peaks
    }
}

/// Sample `field` on a position or momentum cross section.
pub fn cross_section(
    field: &HusimiField,
    axis: SectionAxis,
    spec: &GridSpec,
) -> Result<CrossSectionGrid> {
    let coords = spec.coords();
    if coords.len() < 2 {
        return Err(Error::InvalidGridSpec(
            "grid needs at least two samples per axis".into(),
        ));
    }
    let values: Vec<Vec<f64>> = coords
        .par_iter()
        .map(|&a| {
            coords
                .iter()
                .map(|&b| field.eval(&axis.point(a, b)))
                .collect()
        })
        .collect();
    Ok(CrossSectionGrid {
        axis,
        coords,
        values,
    })
}
