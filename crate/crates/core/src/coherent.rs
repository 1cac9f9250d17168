//! SU(3) projective coherent states and parity-adapted cat superpositions.
//!
//! A coherent state |z1, z2> is an N-boson condensate of the single mode
//! (sigma + z1 tau+ + z2 tau-)/sqrt(1 + |z1|^2 + |z2|^2); its Fock
//! coefficients are the square-rooted multinomial amplitudes
//! phi_{n,m}(z1, z2). The boson-condensate family restricts (z1, z2) to
//! (-r e^{-i theta}, r e^{i theta})/sqrt(2); projecting the condensate onto
//! even parity yields the two-packet cat state used as the variational
//! ansatz for the bent phase.
//!
//! All amplitudes are computed in normalized homogeneous coordinates
//! (u0, u1, u2) = (1, z1, z2)/sqrt(1 + |z|^2), whose components never exceed
//! unit modulus, so powers stay finite at any representation size; the
//! multinomial square roots go through log-gamma for the same reason.

use num_complex::Complex64;

use crate::util::ln_factorial;
use crate::{Error, Result};

/// A point of CP^2 in the affine chart, z = (z1, z2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl PhasePoint {
    pub fn new(z1: Complex64, z2: Complex64) -> Self {
        debug_assert!(
            z1.is_finite() && z2.is_finite(),
            "phase point off the affine chart"
        );
        Self { z1, z2 }
    }

    /// Real section: z = (x1, x2).
    pub fn from_position(x1: f64, x2: f64) -> Self {
        Self::new(Complex64::new(x1, 0.0), Complex64::new(x2, 0.0))
    }

    /// Imaginary section: z = (i p1, i p2).
    pub fn from_momentum(p1: f64, p2: f64) -> Self {
        Self::new(Complex64::new(0.0, p1), Complex64::new(0.0, p2))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }

    /// Normalized homogeneous coordinates (u0, u1, u2), u0 real positive.
    pub fn homogeneous(&self) -> (f64, Complex64, Complex64) {
        let scale = 1.0 / (1.0 + self.norm_sqr()).sqrt();
        (scale, self.z1 * scale, self.z2 * scale)
    }

    /// The antipodal map z -> -z, which flips the sign of every odd-n
    /// Fock amplitude.
    pub fn mirrored(&self) -> Self {
        Self::new(-self.z1, -self.z2)
    }
}

/// Coherent-state Fock coefficient phi_{n,m}(z1, z2) for |N; n, l = n - 2m>.
pub fn cs_coefficient(n_total: u32, n: u32, m: u32, point: &PhasePoint) -> Result<Complex64> {
    if n > n_total || m > n {
        return Err(Error::InvalidBasisIndex {
            n_total,
            n,
            l: n as i32 - 2 * m as i32,
        });
    }
    let ln_multinomial =
        ln_factorial(n_total) - ln_factorial(n_total - n) - ln_factorial(n - m) - ln_factorial(m);
    let (u0, u1, u2) = point.homogeneous();
    Ok(
        u1.powu(n - m)
            * u2.powu(m)
            * ((0.5 * ln_multinomial).exp() * u0.powi((n_total - n) as i32)),
    )
}

/// Overlap <z | z'> of two coherent states, (u-bar . u')^N in normalized
/// coordinates.
pub fn cs_overlap(p: &PhasePoint, q: &PhasePoint, n_total: u32) -> Complex64 {
    let (a0, a1, a2) = p.homogeneous();
    let (b0, b1, b2) = q.homogeneous();
    let inner = Complex64::from(a0 * b0) + a1.conj() * b1 + a2.conj() * b2;
    inner.powu(n_total)
}

/// Boson-condensate point (z1, z2) = (-r e^{-i theta}, r e^{i theta})/sqrt(2).
/// Every such point satisfies z1 = -conj(z2).
pub fn condensate_point(radius: f64, theta: f64) -> PhasePoint {
    let amp = radius / 2.0_f64.sqrt();
    PhasePoint::new(
        -amp * Complex64::new(theta.cos(), -theta.sin()),
        amp * Complex64::new(theta.cos(), theta.sin()),
    )
}

/// Overlap <N; -r | N; r> = ((1 - r^2)/(1 + r^2))^N of the two condensate
/// packets.
pub fn cat_overlap(n_total: u32, radius: f64) -> f64 {
    let r2 = radius * radius;
    ((1.0 - r2) / (1.0 + r2)).powi(n_total as i32)
}

/// Normalization constant of the even projection, sqrt(2 (1 + overlap)).
pub fn cat_norm(n_total: u32, radius: f64) -> f64 {
    (2.0 * (1.0 + cat_overlap(n_total, radius))).sqrt()
}

/// <n_hat> in the even cat state at radius r (not divided by N).
///
/// Writing kappa = (1 - r^2)/(1 + r^2) for the packet overlap per boson,
/// `<n>_+ = N r^2 (1 - kappa^{N-1}) / ((1 + r^2)(1 + kappa^N))`.
pub fn cat_mean_n(n_total: u32, radius: f64) -> f64 {
    let nt = n_total as f64;
    let r2 = radius * radius;
    let kappa = (1.0 - r2) / (1.0 + r2);
    nt * r2 * (1.0 - kappa.powi(n_total as i32 - 1))
        / ((1.0 + r2) * (1.0 + kappa.powi(n_total as i32)))
}

/// <W^2> in the even cat state at radius r (not divided by N).
///
/// Direct condensate algebra: the two diagonal packet terms contribute
/// 4N(N-1) r^2 (1+r^2)^{N-2} + 2N (1+r^2)^N and the parity cross term
/// 2N (1-r^2)^N, all over (1+r^2)^N + (1-r^2)^N. The diagonal part regroups
/// into 2N (1+r^2)^{N-2} (1 + 2N r^2 + r^4), the form implemented here after
/// dividing through by (1+r^2)^N. It reduces to 2N at r = 0, to N(N+1) at
/// r = 1, and is validated against a Fock-expansion oracle in the tests.
pub fn cat_mean_w2(n_total: u32, radius: f64) -> f64 {
    let nt = n_total as f64;
    let r2 = radius * radius;
    let kappa = (1.0 - r2) / (1.0 + r2);
    let diagonal = (1.0 + 2.0 * nt * r2 + r2 * r2) / ((1.0 + r2) * (1.0 + r2));
    2.0 * nt * (diagonal + kappa.powi(n_total as i32)) / (1.0 + kappa.powi(n_total as i32))
}

/// Even-parity projected condensate (|N; r> + |N; -r>)/norm at theta = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatState {
    pub n_total: u32,
    pub radius: f64,
}

impl CatState {
    pub fn new(n_total: u32, radius: f64) -> Self {
        debug_assert!(radius >= 0.0);
        Self { n_total, radius }
    }

    pub fn overlap(&self) -> f64 {
        cat_overlap(self.n_total, self.radius)
    }

    pub fn norm(&self) -> f64 {
        cat_norm(self.n_total, self.radius)
    }

    pub fn mean_n(&self) -> f64 {
        cat_mean_n(self.n_total, self.radius)
    }

    pub fn mean_w2(&self) -> f64 {
        cat_mean_w2(self.n_total, self.radius)
    }

    /// Real Fock amplitudes <N; n, n-2m | N; r, +> over the full (n, m) grid.
    pub fn fock_amplitudes(&self) -> Vec<((u32, u32), f64)> {
        let plus = condensate_point(self.radius, 0.0);
        let minus = plus.mirrored();
        let norm = self.norm();
        let mut amps = Vec::new();
        for n in 0..=self.n_total {
            for m in 0..=n {
                let a = cs_coefficient(self.n_total, n, m, &plus).unwrap()
                    + cs_coefficient(self.n_total, n, m, &minus).unwrap();
                amps.push(((n, m), a.re / norm));
            }
        }
        amps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_sector, w2_matrix};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng) -> PhasePoint {
        PhasePoint::new(
            Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)),
            Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)),
        )
    }

    #[test]
    fn coefficient_examples() {
        let origin = PhasePoint::from_position(0.0, 0.0);
        let c = cs_coefficient(7, 0, 0, &origin).unwrap();
        assert_abs_diff_eq!(c.re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.im, 0.0, epsilon = 1e-14);

        // N=2, n=1, m=0 at z=(1,0): sqrt(2) * 1 / 2
        let p = PhasePoint::from_position(1.0, 0.0);
        let c = cs_coefficient(2, 1, 0, &p).unwrap();
        assert_abs_diff_eq!(c.re, 2.0_f64.sqrt() / 2.0, epsilon = 1e-14);

        assert!(cs_coefficient(4, 5, 0, &origin).is_err());
        assert!(cs_coefficient(4, 2, 3, &origin).is_err());
    }

    #[test]
    fn coefficients_are_normalized() {
        let p = PhasePoint::new(Complex64::new(0.3, 0.1), Complex64::new(0.0, -0.2));
        for n_total in [6u32, 20] {
            let total: f64 = (0..=n_total)
                .flat_map(|n| (0..=n).map(move |m| (n, m)))
                .map(|(n, m)| cs_coefficient(n_total, n, m, &p).unwrap().norm_sqr())
                .sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let p = random_point(&mut rng);
            let total: f64 = (0..=12u32)
                .flat_map(|n| (0..=n).map(move |m| (n, m)))
                .map(|(n, m)| cs_coefficient(12, n, m, &p).unwrap().norm_sqr())
                .sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn overlap_examples_and_coefficient_sum_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = random_point(&mut rng);
        let s = cs_overlap(&p, &p, 9);
        assert_abs_diff_eq!(s.re, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(s.im, 0.0, epsilon = 1e-13);

        let origin = PhasePoint::from_position(0.0, 0.0);
        let q = PhasePoint::from_position(1.0, 0.0);
        let s = cs_overlap(&origin, &q, 2);
        assert_abs_diff_eq!(s.re, 0.5, epsilon = 1e-14);

        // <p|q> = sum_{n,m} conj(phi_{n,m}(p)) phi_{n,m}(q) at N = 4
        for _ in 0..8 {
            let p = random_point(&mut rng);
            let q = random_point(&mut rng);
            let direct = cs_overlap(&p, &q, 4);
            let summed: Complex64 = (0..=4u32)
                .flat_map(|n| (0..=n).map(move |m| (n, m)))
                .map(|(n, m)| {
                    cs_coefficient(4, n, m, &p).unwrap().conj()
                        * cs_coefficient(4, n, m, &q).unwrap()
                })
                .sum();
            assert_abs_diff_eq!(direct.re, summed.re, epsilon = 1e-12);
            assert_abs_diff_eq!(direct.im, summed.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn condensate_point_examples() {
        let p = condensate_point(0.0, 0.0);
        assert_eq!(p, PhasePoint::from_position(0.0, 0.0));

        let p = condensate_point(1.0, 0.0);
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        assert_abs_diff_eq!(p.z1.re, -inv_sqrt2, epsilon = 1e-15);
        assert_abs_diff_eq!(p.z2.re, inv_sqrt2, epsilon = 1e-15);

        for &(r, theta) in &[(0.4, 0.0), (0.9, 1.3), (1.7, -2.2)] {
            let p = condensate_point(r, theta);
            let mirror = -p.z2.conj();
            assert_abs_diff_eq!(p.z1.re, mirror.re, epsilon = 1e-14);
            assert_abs_diff_eq!(p.z1.im, mirror.im, epsilon = 1e-14);
        }
    }

    #[test]
    fn cat_overlap_and_norm_examples() {
        assert_abs_diff_eq!(cat_overlap(5, 0.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cat_overlap(5, 1.0), 0.0, epsilon = 1e-15);
        let r = (1.0_f64 / 3.0).sqrt();
        assert_abs_diff_eq!(cat_overlap(2, r), 0.25, epsilon = 1e-14);

        assert_abs_diff_eq!(cat_norm(5, 0.0), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cat_norm(5, 1.0), 2.0_f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(cat_norm(2, r), (2.0_f64 * 1.25).sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn cat_overlap_is_monotone() {
        for n_total in [2u32, 5, 9] {
            let mut prev = cat_overlap(n_total, 0.0);
            for k in 1..=20 {
                let cur = cat_overlap(n_total, k as f64 / 20.0);
                assert!(cur < prev, "overlap not decreasing in r at N={n_total}");
                prev = cur;
            }
        }
        for k in 1..10 {
            let r = k as f64 / 10.0;
            assert!(cat_overlap(6, r) < cat_overlap(5, r));
        }
    }

    #[test]
    fn cat_mean_values_at_zero_radius() {
        for n_total in [2u32, 4, 8, 16] {
            assert_abs_diff_eq!(cat_mean_n(n_total, 0.0), 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(
                cat_mean_w2(n_total, 0.0),
                2.0 * n_total as f64,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn cat_expansion_has_even_parity_only() {
        let cat = CatState::new(7, 0.6);
        for ((n, _), amp) in cat.fock_amplitudes() {
            if n % 2 == 1 {
                assert!(amp.abs() <= 1e-14, "odd-n amplitude {amp} at n={n}");
            }
        }
    }

    /// Fock-expansion oracle: expand the cat state in the basis, apply the
    /// diagonal n operator and the per-sector W^2 matrices, and compare the
    /// expectation values against the closed forms.
    #[test]
    fn cat_means_match_fock_expansion_oracle() {
        for n_total in 2..=10u32 {
            for k in 1..=9 {
                let r = k as f64 / 10.0;
                let cat = CatState::new(n_total, r);
                let amps = cat.fock_amplitudes();
                let norm: f64 = amps.iter().map(|(_, a)| a * a).sum();
                assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);

                let mean_n: f64 = amps.iter().map(|&((n, _), a)| n as f64 * a * a).sum();
                assert_abs_diff_eq!(mean_n, cat_mean_n(n_total, r), epsilon = 1e-10);

                // <W^2> block by block over the l sectors
                let mut mean_w2 = 0.0;
                for l in -(n_total as i32)..=n_total as i32 {
                    let sector = build_sector(n_total, l).unwrap();
                    let w2 = w2_matrix(&sector);
                    let v: Vec<f64> = sector
                        .n_values
                        .iter()
                        .map(|&n| {
                            let m = ((n as i64 - l as i64) / 2) as u32;
                            amps.iter()
                                .find(|(k, _)| *k == (n, m))
                                .map(|(_, a)| *a)
                                .unwrap()
                        })
                        .collect();
                    for i in 0..v.len() {
                        for j in 0..v.len() {
                            mean_w2 += v[i] * w2.entry(i, j) * v[j];
                        }
                    }
                }
                assert_abs_diff_eq!(mean_w2, cat_mean_w2(n_total, r), epsilon = 1e-10);
            }
        }
    }
}
