use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes in descending order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_pair(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_pair(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

#[inline]
pub(crate) fn tri(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Orthonormal associated Legendre functions `Λ_l^m(θ)` for `0 ≤ m ≤ l ≤ lmax`,
/// without the Condon–Shortley phase, so that
/// `∫₀^π (Λ_l^m)² sin θ dθ = 1/(2π)` (the `√2` of the real basis lives in the
/// longitude factor). Returned in triangular layout `tri(l, m)`.
pub(crate) fn normalized_legendre(lmax: usize, cos_t: f64, sin_t: f64) -> Vec<f64> {
    let mut out = vec![0.0; tri(lmax, lmax) + 1];
    let mut pmm = (0.25 / PI).sqrt();
    for m in 0..=lmax {
        if m > 0 {
            pmm *= ((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * sin_t;
        }
        out[tri(m, m)] = pmm;
        if m == lmax {
            break;
        }
        let mut prev2 = pmm;
        let mut prev = (2.0 * m as f64 + 3.0).sqrt() * cos_t * pmm;
        out[tri(m + 1, m)] = prev;
        for l in (m + 2)..=lmax {
            let a = recurrence_coeff(l, m);
            let b = recurrence_coeff(l - 1, m);
            let cur = a * (cos_t * prev - prev2 / b);
            out[tri(l, m)] = cur;
            prev2 = prev;
            prev = cur;
        }
    }
    out
}

fn recurrence_coeff(l: usize, m: usize) -> f64 {
    let (l, m) = (l as f64, m as f64);
    ((4.0 * l * l - 1.0) / (l * l - m * m)).sqrt()
}

/// `dΛ_l^m/dθ` from the table of `Λ`, using the ladder relations in `m`
/// (no division by `sin θ`).
pub(crate) fn theta_derivative(lmax: usize, lam: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; lam.len()];
    for l in 0..=lmax {
        let lf = l as f64;
        for m in 0..=l {
            let mf = m as f64;
            let up = if m < l {
                ((lf - mf) * (lf + mf + 1.0)).sqrt() * lam[tri(l, m + 1)]
            } else {
                0.0
            };
            out[tri(l, m)] = if m == 0 {
                -up
            } else {
                let down = ((lf + mf) * (lf - mf + 1.0)).sqrt() * lam[tri(l, m - 1)];
                0.5 * (down - up)
            };
        }
    }
    out
}

/// Real orthonormal spherical harmonic `Y_lm(θ, φ)`:
/// `√2 Λ_l^m cos(mφ)` for `m > 0`, `Λ_l^0` for `m = 0`, `√2 Λ_l^|m| sin(|m|φ)` for `m < 0`.
pub fn real_ylm(l: usize, m: i64, theta: f64, phi: f64) -> f64 {
    let am = m.unsigned_abs() as usize;
    assert!(am <= l, "|m| must not exceed l");
    let lam = normalized_legendre(l, theta.cos(), theta.sin());
    let p = lam[tri(l, am)];
    match m.cmp(&0) {
        std::cmp::Ordering::Equal => p,
        std::cmp::Ordering::Greater => std::f64::consts::SQRT_2 * p * (am as f64 * phi).cos(),
        std::cmp::Ordering::Less => std::f64::consts::SQRT_2 * p * (am as f64 * phi).sin(),
    }
}
