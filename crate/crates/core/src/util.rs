//! Small numerical helpers shared by the physics modules.

/// Natural log of n! by direct summation. Exact semantics for integer
/// arguments, accurate to a few ulps up to n ~ 10^4, which covers every
/// representation size this crate targets.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n as u64).map(|k| (k as f64).ln()).sum()
}

/// Deterministic pairwise summation. The reduction tree depends only on the
/// slice length, so results are bit-identical no matter how the terms were
/// produced (serially or by a thread pool writing into an indexed buffer).
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Gauss-Legendre nodes and weights on [0, 1].
///
/// Newton iteration on the Legendre polynomial with the usual Chebyshev-like
/// initial guesses; nodes are then mapped from [-1, 1] to [0, 1].
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one quadrature node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // initial guess for the i-th root of P_n on [-1, 1]
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x) by the three-term recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        weights[i] = w;
        nodes[n - 1 - i] = -x;
        weights[n - 1 - i] = w;
    }
    // map [-1, 1] -> [0, 1], descending cos-guesses become ascending nodes
    let mut out: Vec<(f64, f64)> = nodes
        .iter()
        .zip(&weights)
        .map(|(&x, &w)| (0.5 * (1.0 - x), 0.5 * w))
        .collect();
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out.into_iter().unzip()
}

/// Golden-section minimization of a unimodal function on [a, b].
/// Runs a fixed, deterministic number of shrink steps until the bracket is
/// below `xtol`, then returns the midpoint and its value.
pub fn golden_section_min<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    xtol: f64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
