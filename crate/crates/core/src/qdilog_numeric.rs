//! Numerical evaluation of the non-compact quantum dilogarithm Φ^ħ via its
//! contour-integral definition, with analytic continuation by the difference
//! relations, plus the companion constant α_ħ and the compact product Ψ^q.
//!
//! Φ^ħ(z) = exp(−¼ ∫_Ω e^{−ipz} / (sinh(πp) sinh(πħp)) dp/p), where Ω runs
//! along the real line and detours above the origin by a small half-circle.
//! The two symmetric real rays are folded into one integral of
//! −2i·sin(pz)/(sinh(πp)sinh(πħp)p); everything is integrated by
//! Gauss–Legendre panels with a two-resolution error estimate.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QdError {
    #[error("argument within {0:e} of a pole or zero of the continued function")]
    PoleProximity(f64),
    #[error("quadrature error estimate {est:e} exceeds tolerance {tolerance:e}")]
    QuadratureFailure { est: f64, tolerance: f64 },
    #[error("compact dilogarithm requires |q| < 1")]
    DivergentParameter,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Evaluation parameters for Φ^ħ.
#[derive(Clone, Debug)]
pub struct QDParams {
    pub hbar: f64,
    /// Radius of the half-circle detour above the origin.
    pub circle_radius: f64,
    /// Gauss–Legendre nodes per panel.
    pub nodes: usize,
    /// Panel width on the real rays.
    pub panel_width: f64,
    /// Acceptable quadrature error estimate.
    pub tolerance: f64,
}

impl QDParams {
    pub fn new(hbar: f64) -> Result<Self, QdError> {
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(QdError::InvalidParams("hbar must be positive".into()));
        }
        Ok(QDParams {
            hbar,
            circle_radius: 0.5,
            nodes: 40,
            panel_width: 2.0,
            tolerance: 1e-11,
        })
    }
}

/// α_ħ = e^{iπ(ħ + ħ⁻¹)/24}.
pub fn alpha(hbar: f64) -> Complex64 {
    (Complex64::i() * PI * (hbar + 1.0 / hbar) / 24.0).exp()
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // Recurrence for P_n(x) and its derivative.
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=n {
            let k = k as f64;
            let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl_panel<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    nodes: &[f64],
    weights: &[f64],
) -> Complex64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = Complex64::new(0.0, 0.0);
    for (x, w) in nodes.iter().zip(weights) {
        sum += f(mid + half * x) * *w;
    }
    sum * half
}

/// The contour integral with given resolution; `z` must be in the strip.
fn contour_integral(z: Complex64, p: &QDParams, nodes_n: usize, width: f64) -> Complex64 {
    let hbar = p.hbar;
    // Stay inside the pole-free disc: the integrand has poles at p = ik and
    // p = ik/ħ, so the detour must not reach |p| = min(1, 1/ħ).
    let r = p.circle_radius.min(0.5 / hbar.max(1.0));
    let delta = PI * (1.0 + hbar) - z.im.abs();
    let cutoff = (42.0 / delta).max(r + 1.0);
    let (nodes, weights) = gauss_legendre(nodes_n);

    // Folded real rays: ∫_r^R −2i·sin(pz) / (sinh(πp) sinh(πħp) p) dp.
    let real_part = |t: f64| -> Complex64 {
        let denom = (PI * t).sinh() * (PI * hbar * t).sinh() * t;
        (z * t).sin() * Complex64::new(0.0, -2.0) / denom
    };
    let mut total = Complex64::new(0.0, 0.0);
    let mut a = r;
    while a < cutoff {
        let b = (a + width).min(cutoff);
        total += gl_panel(&real_part, a, b, &nodes, &weights);
        a = b;
    }

    // Half-circle above the origin, θ: π → 0, p = r e^{iθ}.
    let arc = |theta: f64| -> Complex64 {
        let pc = Complex64::from_polar(r, theta);
        let dp = Complex64::i() * pc; // dp/dθ
        let denom = (PI * pc).sinh() * (PI * hbar * pc).sinh() * pc;
        (-Complex64::i() * pc * z).exp() / denom * dp
    };
    total -= gl_panel(&arc, 0.0, PI, &nodes, &weights);
    total
}

/// Φ^ħ(z) with an error estimate from two quadrature resolutions; arguments
/// outside the strip |Im z| ≤ π(1+ħ)/2 are reached by the difference
/// relation Φ(z + 2πiħ) = (1 + e^{iπħ} e^z) Φ(z).
pub fn phi_with_error(z: Complex64, params: &QDParams) -> Result<(Complex64, f64), QdError> {
    let hbar = params.hbar;
    let threshold = 0.5 * PI * (1.0 + hbar);
    let pole_tol = 1e-9;

    if z.im.abs() > threshold {
        // At most this many 2πħ steps are ever needed to reach the strip.
        let steps = (z.im.abs() / (2.0 * PI * hbar)).ceil() as usize + 1;
        let mut w = z;
        let mut factors = Vec::new(); // (factor, multiply?) applied in order
        for _ in 0..steps {
            if w.im.abs() <= threshold {
                break;
            }
            if w.im > 0.0 {
                // Φ(w) = (1 + e^{iπħ} e^{w − 2πiħ}) Φ(w − 2πiħ).
                let shifted = w - Complex64::new(0.0, 2.0 * PI * hbar);
                let f = Complex64::new(1.0, 0.0)
                    + (Complex64::i() * PI * hbar).exp() * shifted.exp();
                factors.push((f, true));
                w = shifted;
            } else {
                // Φ(w) = Φ(w + 2πiħ) / (1 + e^{iπħ} e^w).
                let f = Complex64::new(1.0, 0.0) + (Complex64::i() * PI * hbar).exp() * w.exp();
                factors.push((f, false));
                w += Complex64::new(0.0, 2.0 * PI * hbar);
            }
        }
        if w.im.abs() > threshold {
            return Err(QdError::InvalidParams(
                "continuation failed to reach the strip".into(),
            ));
        }
        for (f, _) in &factors {
            if f.norm() < pole_tol {
                return Err(QdError::PoleProximity(pole_tol));
            }
        }
        let (mut value, est) = phi_with_error(w, params)?;
        for (f, multiply) in factors.iter().rev() {
            if *multiply {
                value *= f;
            } else {
                value /= f;
            }
        }
        return Ok((value, est));
    }

    let coarse = contour_integral(z, params, params.nodes, params.panel_width);
    let fine = contour_integral(z, params, params.nodes + 8, 0.5 * params.panel_width);
    let est = (coarse - fine).norm();
    if est > params.tolerance {
        return Err(QdError::QuadratureFailure { est, tolerance: params.tolerance });
    }
    Ok(((fine * -0.25).exp(), est))
}

/// Φ^ħ(z); see [`phi_with_error`].
pub fn phi(z: Complex64, params: &QDParams) -> Result<Complex64, QdError> {
    phi_with_error(z, params).map(|(v, _)| v)
}

/// Truncated compact quantum dilogarithm Ψ^q(z) = Π_{i≥1} (1 + q^{2i−1}z)^{−1},
/// returning the value and a bound on the dropped log-tail.
pub fn psi_compact(
    z: Complex64,
    q: Complex64,
    terms: usize,
) -> Result<(Complex64, f64), QdError> {
    let qn = q.norm();
    if qn >= 1.0 {
        return Err(QdError::DivergentParameter);
    }
    let mut value = Complex64::new(1.0, 0.0);
    let mut qpow = q; // q^{2i−1}
    for _ in 0..terms {
        let factor = Complex64::new(1.0, 0.0) + qpow * z;
        if factor.norm() < 1e-12 {
            return Err(QdError::PoleProximity(1e-12));
        }
        value /= factor;
        qpow *= q * q;
    }
    // |log Π_{i>terms}| ≤ Σ |q|^{2i−1}|z| = |q|^{2·terms+1}|z|/(1−|q|²).
    let tail = qn.powi(2 * terms as i32 + 1) * z.norm() / (1.0 - qn * qn);
    Ok((value, tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(h: f64) -> QDParams {
        QDParams::new(h).unwrap()
    }

    const HBARS: [f64; 3] = [0.3, 1.0, 2.7];

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(5);
        // Degree ≤ 9 exactness: ∫_{-1}^1 t^8 dt = 2/9.
        let s: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(8)).sum();
        assert!((s - 2.0 / 9.0).abs() < 1e-14);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn unitarity_on_real_grid() {
        for h in HBARS {
            let p = params(h);
            for i in 0..25 {
                let x = -6.0 + 12.0 * (i as f64) / 24.0;
                let v = phi(Complex64::new(x, 0.0), &p).unwrap();
                assert!((v.norm() - 1.0).abs() < 1e-10, "hbar={h}, x={x}");
            }
        }
    }

    #[test]
    fn phi_at_zero_is_inverse_alpha() {
        for h in HBARS {
            let v = phi(Complex64::new(0.0, 0.0), &params(h)).unwrap();
            let expect = alpha(h).inv();
            assert!((v - expect).norm() < 1e-9, "hbar={h}");
        }
    }

    #[test]
    fn difference_relations() {
        for h in HBARS {
            let p = params(h);
            for i in 0..8 {
                let x = -1.5 + 0.43 * i as f64;
                let z = Complex64::new(x, -0.3 * h);
                // First relation.
                let lhs = phi(z + Complex64::new(0.0, 2.0 * PI * h), &p).unwrap();
                let rhs = (Complex64::new(1.0, 0.0)
                    + (Complex64::i() * PI * h).exp() * z.exp())
                    * phi(z, &p).unwrap();
                assert!((lhs - rhs).norm() < 1e-8, "rel1 hbar={h}, x={x}");
                // Second relation.
                let lhs = phi(z + Complex64::new(0.0, 2.0 * PI), &p).unwrap();
                let rhs = (Complex64::new(1.0, 0.0)
                    + (Complex64::i() * PI / h).exp() * (z / h).exp())
                    * phi(z, &p).unwrap();
                assert!((lhs - rhs).norm() < 1e-8, "rel2 hbar={h}, x={x}");
            }
        }
    }

    #[test]
    fn reflexivity() {
        for h in HBARS {
            let p = params(h);
            for (x, y) in [(0.7, 0.2), (-1.3, -0.4), (2.0, 0.0)] {
                let z = Complex64::new(x, y);
                let lhs = phi(z, &p).unwrap() * phi(-z, &p).unwrap();
                let rhs = alpha(h).powi(-2) * (z * z / (4.0 * PI * Complex64::i() * h)).exp();
                assert!((lhs - rhs).norm() < 1e-8, "hbar={h}, z={z}");
            }
        }
    }

    #[test]
    fn continuation_agrees_with_direct_in_overlap() {
        for h in HBARS {
            let p = params(h);
            // Pick z in the direct-evaluation strip whose downward shift also is.
            let z = Complex64::new(0.4, 0.45 * PI * (1.0 + h));
            let direct = phi(z, &p).unwrap();
            let shifted = z - Complex64::new(0.0, 2.0 * PI * h);
            let via_shift = (Complex64::new(1.0, 0.0)
                + (Complex64::i() * PI * h).exp() * shifted.exp())
                * phi(shifted, &p).unwrap();
            assert!((direct - via_shift).norm() < 1e-7, "hbar={h}");
        }
    }

    #[test]
    fn detour_radius_independence() {
        let mut p = params(1.0);
        let z = Complex64::new(0.9, 1.1);
        let v1 = phi(z, &p).unwrap();
        p.circle_radius = 0.3;
        let v2 = phi(z, &p).unwrap();
        p.circle_radius = 0.7;
        let v3 = phi(z, &p).unwrap();
        assert!((v1 - v2).norm() < 1e-10 && (v1 - v3).norm() < 1e-10);
    }

    #[test]
    fn alpha_properties() {
        let a = alpha(1.0);
        assert!((a - (Complex64::i() * PI / 12.0).exp()).norm() < 1e-15);
        assert!((alpha(0.3) - alpha(1.0 / 0.3)).norm() < 1e-15);
        assert!((a.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn psi_compact_behaviour() {
        let (v, _) = psi_compact(Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), 30).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let (v20, t20) =
            psi_compact(Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0), 20).unwrap();
        let (v40, _) =
            psi_compact(Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0), 40).unwrap();
        assert!(t20 < 1e-12 && (v20 - v40).norm() < 1e-12);
        assert!(matches!(
            psi_compact(Complex64::new(1.0, 0.0), Complex64::new(1.2, 0.0), 5),
            Err(QdError::DivergentParameter)
        ));
        // z = −q^{−1} makes the first factor vanish.
        assert!(matches!(
            psi_compact(Complex64::new(-10.0, 0.0), Complex64::new(0.1, 0.0), 5),
            Err(QdError::PoleProximity(_))
        ));
    }

    #[test]
    fn bad_hbar_rejected() {
        assert!(QDParams::new(0.0).is_err());
        assert!(QDParams::new(-1.0).is_err());
    }
}
