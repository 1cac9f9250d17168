//! Variational energy functionals, equilibrium radii and the second-order
//! criticality analysis of the linear-to-bent transition at xi = 1/5.

use crate::coherent::{cat_mean_n, cat_mean_w2};
use crate::util::golden_section_min;
use crate::{Error, Result};

/// Upper end of the radius search domain; the closed-form equilibrium radius
/// reaches 1 only at xi = 1, so keeping the boundary excluded leaves every
/// interior minimum reachable.
const RADIUS_MAX: f64 = 1.0 - 1e-9;
/// Coarse pre-scan step; the cat functional flattens near the critical
/// point, and the scan keeps the refinement from settling on a shoulder.
const SCAN_STEP: f64 = 1e-3;
const RADIUS_TOL: f64 = 1e-10;

/// Per-particle energy of the plain condensate at radius r; independent of
/// the boson number.
pub fn cs_energy(xi: f64, radius: f64) -> f64 {
    let r2 = radius * radius;
    let bend = (1.0 - r2) / (1.0 + r2);
    (1.0 - xi) * r2 / (1.0 + r2) + xi * bend * bend
}

/// Closed-form equilibrium of the condensate ansatz: radius 0 and energy xi
/// in the linear phase, sqrt((5 xi - 1)/(3 xi + 1)) and
/// (-9 xi^2 + 10 xi - 1)/(16 xi) beyond xi = 1/5.
pub fn cs_equilibrium(xi: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::XiOutOfRange(xi));
    }
    if xi <= 0.2 {
        Ok((0.0, xi))
    } else {
        let radius = ((5.0 * xi - 1.0) / (3.0 * xi + 1.0)).sqrt();
        let energy = (-9.0 * xi * xi + 10.0 * xi - 1.0) / (16.0 * xi);
        Ok((radius, energy))
    }
}

/// Per-particle energy of the even cat state at radius r.
pub fn cat_energy(n_total: u32, xi: f64, radius: f64) -> f64 {
    debug_assert!(n_total >= 2);
    let nt = n_total as f64;
    (1.0 - xi) * cat_mean_n(n_total, radius) / nt
        + xi * (nt * (nt + 1.0) - cat_mean_w2(n_total, radius)) / (nt * (nt - 1.0))
}

/// Numerical equilibrium of the cat functional: coarse scan over
/// [0, 1), then golden-section refinement of the bracketing interval.
pub fn cat_equilibrium(n_total: u32, xi: f64) -> Result<(f64, f64)> {
    if n_total < 2 {
        return Err(Error::BosonNumberTooSmall(n_total));
    }
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::XiOutOfRange(xi));
    }
    let f = |r: f64| cat_energy(n_total, xi, r);
    let steps = (RADIUS_MAX / SCAN_STEP).floor() as usize;
    let mut best_k = 0;
    let mut best_val = f(0.0);
    for k in 1..=steps {
        let v = f((k as f64 * SCAN_STEP).min(RADIUS_MAX));
        if v < best_val {
            best_val = v;
            best_k = k;
        }
    }
    let lo = (best_k.saturating_sub(1)) as f64 * SCAN_STEP;
    let hi = ((best_k + 1) as f64 * SCAN_STEP).min(RADIUS_MAX);
    let (radius, energy) = golden_section_min(f, lo, hi, RADIUS_TOL);
    // the scan cannot distinguish an exact boundary minimum at r = 0 from a
    // shallow interior one; the functional value decides
    let at_zero = f(0.0);
    if at_zero <= energy {
        Ok((0.0, at_zero))
    } else {
        Ok((radius, energy))
    }
}

/// Ansatz family of a variational solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ansatz {
    Cs,
    Cat,
}

/// One solved variational point: ansatz, boson number (None marks the
/// thermodynamic limit), equilibrium radius and per-particle energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalSolution {
    pub n_total: Option<u32>,
    pub xi: f64,
    pub radius: f64,
    pub energy_per_particle: f64,
    pub ansatz: Ansatz,
}

impl VariationalSolution {
    /// Condensate ansatz; the thermodynamic-limit radius coincides with the
    /// closed form at any N, so no boson number is recorded.
    pub fn solve_cs(xi: f64) -> Result<Self> {
        let (radius, energy_per_particle) = cs_equilibrium(xi)?;
        Ok(Self {
            n_total: None,
            xi,
            radius,
            energy_per_particle,
            ansatz: Ansatz::Cs,
        })
    }

    /// Cat ansatz at finite N, or the closed-form limit when `n_total` is
    /// None.
    pub fn solve_cat(n_total: Option<u32>, xi: f64) -> Result<Self> {
        match n_total {
            None => {
                let (radius, energy_per_particle) = cs_equilibrium(xi)?;
                Ok(Self {
                    n_total: None,
                    xi,
                    radius,
                    energy_per_particle,
                    ansatz: Ansatz::Cat,
                })
            }
            Some(n) => {
                let (radius, energy_per_particle) = cat_equilibrium(n, xi)?;
                Ok(Self {
                    n_total: Some(n),
                    xi,
                    radius,
                    energy_per_particle,
                    ansatz: Ansatz::Cat,
                })
            }
        }
    }
}

/// Locate the second-derivative discontinuity of the condensate equilibrium
/// energy on a uniform xi grid. Returns the estimated critical point and
/// the jump size (right minus left second derivative).
///
/// The kink is located from the centroid of the large consecutive changes
/// of the central second difference; the two branch values are then read
/// off a few steps away from the smeared zone, the right one extrapolated
/// linearly back to the critical point. A stride-2 rerun guards the
/// estimate against discretization artifacts.
pub fn criticality_scan(xi_grid: &[f64]) -> Result<(f64, f64)> {
    let (xi_c, jump) = criticality_scan_once(xi_grid)?;
    if xi_grid.len() >= 9 {
        let coarse: Vec<f64> = xi_grid.iter().copied().step_by(2).collect();
        let (xi_c2, _) = criticality_scan_once(&coarse)?;
        let h = xi_grid[1] - xi_grid[0];
        if (xi_c - xi_c2).abs() > 8.0 * h {
            return Err(Error::InvalidGridSpec(
                "criticality scan inconsistent across resolutions".into(),
            ));
        }
    }
    Ok((xi_c, jump))
}

fn criticality_scan_once(xi_grid: &[f64]) -> Result<(f64, f64)> {
    let n = xi_grid.len();
    if n < 3 {
        return Err(Error::GridTooCoarse { need: 3, got: n });
    }
    let h = xi_grid[1] - xi_grid[0];
    if h <= 0.0 {
        return Err(Error::InvalidGridSpec(
            "xi grid must be strictly increasing".into(),
        ));
    }
    for w in xi_grid.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1e-12) {
            return Err(Error::InvalidGridSpec("xi grid must be uniform".into()));
        }
    }
    let energies: Vec<f64> = xi_grid
        .iter()
        .map(|&xi| cs_equilibrium(xi).map(|(_, e)| e))
        .collect::<Result<_>>()?;
    // central second differences on interior points
    let d2: Vec<f64> = (1..n - 1)
        .map(|i| (energies[i + 1] - 2.0 * energies[i] + energies[i - 1]) / (h * h))
        .collect();
    if d2.len() < 2 {
        return Err(Error::GridTooCoarse { need: 4, got: n });
    }
    let d3: Vec<f64> = d2.windows(2).map(|w| w[1] - w[0]).collect();
    let d3_max = d3.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
    if d3_max == 0.0 {
        return Err(Error::InvalidGridSpec(
            "no curvature change on the xi grid".into(),
        ));
    }
    // centroid of the significant consecutive changes; midpoints of the d3
    // slots sit at the xi of the corresponding interior pair
    let mut weight = 0.0;
    let mut center = 0.0;
    let mut k_star = 0;
    let mut best = 0.0;
    for (k, &v) in d3.iter().enumerate() {
        let a = v.abs();
        if a >= 0.25 * d3_max {
            let mid = 0.5 * (xi_grid[k + 1] + xi_grid[k + 2]);
            weight += a;
            center += a * mid;
        }
        if a > best {
            best = a;
            k_star = k;
        }
    }
    let xi_c = center / weight;
    // branch values clear of the finite-difference smearing around the kink
    let left_idx = k_star.saturating_sub(3);
    let left = d2[left_idx];
    let r1 = (k_star + 3).min(d2.len() - 1);
    let r2 = (k_star + 5).min(d2.len() - 1);
    let jump = if r2 > r1 {
        let x1 = xi_grid[r1 + 1];
        let x2 = xi_grid[r2 + 1];
        let slope = (d2[r2] - d2[r1]) / (x2 - x1);
        d2[r1] + slope * (xi_c - x1) - left
    } else {
        d2[r1] - left
    };
    Ok((xi_c, jump))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::ground_state;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cs_energy_reference_values() {
        for &xi in &[0.0, 0.3, 0.9] {
            assert_abs_diff_eq!(cs_energy(xi, 0.0), xi, epsilon = 1e-15);
        }
        for &r in &[0.2, 0.8, 1.3] {
            assert_abs_diff_eq!(cs_energy(0.0, r), r * r / (1.0 + r * r), epsilon = 1e-15);
        }
        assert_abs_diff_eq!(cs_energy(1.0, 1.0), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn cs_equilibrium_branches() {
        let (r, e) = cs_equilibrium(0.1).unwrap();
        assert_eq!(r, 0.0);
        assert_abs_diff_eq!(e, 0.1, epsilon = 1e-15);

        let (r, e) = cs_equilibrium(0.5).unwrap();
        assert_abs_diff_eq!(r, 0.6_f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(e, 0.21875, epsilon = 1e-14);

        // both branches agree at the critical point
        let (r, e) = cs_equilibrium(0.2).unwrap();
        assert_eq!(r, 0.0);
        assert_abs_diff_eq!(e, 0.2, epsilon = 1e-14);
        let bent = (-9.0 * 0.04 + 10.0 * 0.2 - 1.0) / (16.0 * 0.2);
        assert_abs_diff_eq!(bent, 0.2, epsilon = 1e-14);

        assert!(cs_equilibrium(1.2).is_err());
    }

    #[test]
    fn cs_equilibrium_matches_dense_scan_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let xi: f64 = rng.gen_range(0.0..=1.0);
            let (_, e_closed) = cs_equilibrium(xi).unwrap();
            let mut e_scan = f64::INFINITY;
            let mut k = 0usize;
            loop {
                let r = k as f64 * 1e-4;
                if r > 0.9999999 {
                    break;
                }
                e_scan = e_scan.min(cs_energy(xi, r));
                k += 1;
            }
            assert!(
                (e_closed - e_scan).abs() <= 1e-8,
                "xi={xi}: closed {e_closed} vs scan {e_scan}"
            );
        }
    }

    #[test]
    fn cat_energy_reference_values() {
        for &(n, xi) in &[(2u32, 0.3), (8, 0.7), (40, 0.05)] {
            assert_abs_diff_eq!(cat_energy(n, xi, 0.0), xi, epsilon = 1e-13);
        }
        // finite-N corrections vanish exponentially with N
        for &xi in &[0.1, 0.4, 0.8] {
            assert_abs_diff_eq!(cat_energy(200, xi, 0.5), cs_energy(xi, 0.5), epsilon = 1e-6);
        }
    }

    #[test]
    fn cat_equilibrium_reference_values() {
        for &n in &[4u32, 8, 60] {
            let (r, e) = cat_equilibrium(n, 0.0).unwrap();
            assert_eq!(r, 0.0, "radius must vanish exactly at xi = 0");
            assert_eq!(e, 0.0);
        }

        let (r, _) = cat_equilibrium(60, 0.5).unwrap();
        assert!((r - 0.6_f64.sqrt()).abs() < 0.02, "N=60 radius {r}");

        // dense-scan oracle at N = 60, xi = 0.5
        let mut best = (0.0, f64::INFINITY);
        let mut k = 0usize;
        loop {
            let rr = k as f64 * 1e-4;
            if rr > RADIUS_MAX {
                break;
            }
            let v = cat_energy(60, 0.5, rr);
            if v < best.1 {
                best = (rr, v);
            }
            k += 1;
        }
        let (r_golden, e_golden) = cat_equilibrium(60, 0.5).unwrap();
        assert!((r_golden - best.0).abs() <= 2e-4);
        assert!(e_golden <= best.1 + 1e-12);

        assert!(cat_equilibrium(1, 0.5).is_err());
        assert!(cat_equilibrium(8, -0.1).is_err());
    }

    #[test]
    fn finite_size_radii_bracket_the_limit_curve() {
        // below the critical point the finite-N radii smooth the kink from
        // above and decrease with N; all curves converge deep in the bent
        // phase
        for &xi in &[0.12, 0.15, 0.18, 0.2] {
            let r8 = cat_equilibrium(8, xi).unwrap().0;
            let r60 = cat_equilibrium(60, xi).unwrap().0;
            let rinf = cs_equilibrium(xi).unwrap().0;
            assert!(r8 >= r60 - 1e-9, "xi={xi}: r8={r8} r60={r60}");
            assert!(r60 >= rinf - 1e-9, "xi={xi}: r60={r60} rinf={rinf}");
        }
        let r8 = cat_equilibrium(8, 0.9).unwrap().0;
        let rinf = cs_equilibrium(0.9).unwrap().0;
        assert!((r8 - rinf).abs() < 0.05);
    }

    #[test]
    fn cat_radius_converges_to_closed_form() {
        let mut max_dev = 0.0_f64;
        for k in 0..=6 {
            let xi = 0.3 + 0.1 * k as f64;
            let r = cat_equilibrium(200, xi).unwrap().0;
            let rinf = cs_equilibrium(xi).unwrap().0;
            max_dev = max_dev.max((r - rinf).abs());
        }
        assert!(max_dev < 5e-3, "N=200 radius deviation {max_dev}");
    }

    #[test]
    fn radii_stay_inside_unit_interval() {
        for &xi in &[0.0, 0.2, 0.5, 0.9, 1.0] {
            for &n in &[4u32, 16] {
                let s = VariationalSolution::solve_cat(Some(n), xi).unwrap();
                assert!(
                    (0.0..1.0).contains(&s.radius),
                    "cat radius {} at xi={xi}",
                    s.radius
                );
            }
            let s = VariationalSolution::solve_cs(xi).unwrap();
            assert!((0.0..=1.0).contains(&s.radius));
        }
    }

    #[test]
    fn variational_energies_bound_the_exact_ground_state() {
        for &n in &[4u32, 8, 16] {
            for k in 0..=20 {
                let xi = k as f64 * 0.05;
                let exact = ground_state(n, xi).unwrap().energy_per_particle();
                let cat = cat_equilibrium(n, xi).unwrap().1;
                let (_, cs) = cs_equilibrium(xi).unwrap();
                assert!(
                    exact <= cat + 1e-10,
                    "N={n}, xi={xi}: exact {exact} > cat {cat}"
                );
                assert!(cat <= cs + 1e-10, "N={n}, xi={xi}: cat {cat} > cs {cs}");
            }
        }
    }

    #[test]
    fn criticality_scan_locates_the_transition() {
        let grid: Vec<f64> = (1..1000).map(|k| k as f64 * 1e-3).collect();
        let (xi_c, jump) = criticality_scan(&grid).unwrap();
        assert!((xi_c - 0.2).abs() <= 1e-3, "xi_c = {xi_c}");
        assert!((jump - (-15.625)).abs() <= 0.5, "jump = {jump}");
    }

    #[test]
    fn first_derivative_is_continuous_at_the_kink() {
        let h = 1e-5;
        let left = (cs_equilibrium(0.2).unwrap().1 - cs_equilibrium(0.2 - h).unwrap().1) / h;
        let right = (cs_equilibrium(0.2 + h).unwrap().1 - cs_equilibrium(0.2).unwrap().1) / h;
        assert_abs_diff_eq!(left, 1.0, epsilon = 1e-3);
        assert_abs_diff_eq!(right, 1.0, epsilon = 1e-3);
    }

    #[test]
    fn criticality_scan_rejects_bad_grids() {
        assert!(matches!(
            criticality_scan(&[0.1, 0.2]),
            Err(Error::GridTooCoarse { .. })
        ));
        assert!(criticality_scan(&[0.1, 0.2, 0.25, 0.5]).is_err());
    }
}
