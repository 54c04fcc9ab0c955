//! Numerical Schrödinger-model operator symbols and rank-one Weil
//! intertwiners on a uniform grid, cross-checking the Maslov phase law
//! against the exact Kashiwara indices.
//!
//! A symplectic decomposition (ℓ, 𝓑) of a rank-one space determines a frame
//! (w*, v): the dual basis vector of ℓ with B(w*, v) = 1 and the single
//! supplementary vector. In the Schrödinger model on L²(ℝ) the frame acts by
//! π(w*) = −i·(t·) and π(v) = −i·(−i d/dt). The intertwiner between two
//! decompositions is the linear canonical transform of the exact 2×2 matrix
//! S expressing frame₂ in frame₁ coordinates modulo the radical; its kernel
//! is derived from the intertwining equations and normalized positively,
//! which reproduces the standard Fourier kernel e^{−ixy}/√(2π) on the
//! worked swap pair.

use crate::phase_calculus::LinearForm;
use crate::ratlin::{Mat, Rat};
use crate::symplectic_core::{
    dual_basis, rat_to_f64, CentralCharacter, SkewSpace, SymplecticDecomposition, SymplecticError,
};
use num_complex::Complex64;
use num_traits::Zero;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WeilError {
    #[error("numerical intertwiners support only half-rank 1, got {0}")]
    RankUnsupported(usize),
    #[error("grid too coarse: unitarity defect {defect:e} exceeds {tolerance:e}")]
    GridTooCoarse { defect: f64, tolerance: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

/// Operator symbol π^ħ_{ℓ,𝓑}(x) = −√(2πħ)·(Σ m_j t_j + Σ a_j i∂_j) + scalar.
/// The coefficient vectors are exact rationals; the scalar collects the
/// central-character and central-symbol contributions.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSymbol {
    pub mult_coeffs: Vec<Rat>,
    pub deriv_coeffs: Vec<Rat>,
    pub scalar: Complex64,
}

impl OperatorSymbol {
    pub fn is_zero(&self) -> bool {
        self.mult_coeffs.iter().all(Rat::is_zero)
            && self.deriv_coeffs.iter().all(Rat::is_zero)
            && self.scalar.norm() == 0.0
    }
}

/// The symbol of `x` ∈ V + ℝc in the Schrödinger model of a decomposition,
/// splitting x into radical + ℓ + span(𝓑) + central parts.
pub fn operator_symbol(
    x: &LinearForm,
    space: &SkewSpace,
    d: &SymplecticDecomposition,
    lam: &CentralCharacter,
    hbar: f64,
) -> Result<OperatorSymbol, WeilError> {
    if hbar <= 0.0 {
        return Err(WeilError::Invalid("hbar must be positive".into()));
    }
    let rad = space.radical();
    let wd = dual_basis(space, d);
    let r = wd.len();
    // Solve x = (radical part) + Σ c_i w_i + Σ a_j v_j exactly.
    let mut cols: Vec<Vec<Rat>> = rad.basis().to_vec();
    cols.extend(wd.iter().cloned());
    cols.extend(d.supplementary.iter().cloned());
    let basis = Mat::new(cols).transpose();
    let dense = x.to_dense(&space.basis_labels);
    let coords = basis
        .solve(&dense)
        .ok_or_else(|| WeilError::Invalid("vector outside V".into()))?;
    let nrad = rad.dim();
    let mut u = vec![Rat::zero(); space.dim()];
    for (c, b) in coords[..nrad].iter().zip(rad.basis()) {
        for (ui, bi) in u.iter_mut().zip(b) {
            *ui += c * bi;
        }
    }
    let mut w_part = vec![Rat::zero(); space.dim()];
    for (c, b) in coords[nrad..nrad + r].iter().zip(&wd) {
        for (wi, bi) in w_part.iter_mut().zip(b) {
            *wi += c * bi;
        }
    }
    let mult_coeffs: Vec<Rat> = d
        .supplementary
        .iter()
        .map(|v| space.pair(v, &w_part))
        .collect();
    let deriv_coeffs: Vec<Rat> = coords[nrad + r..].to_vec();
    let s = (2.0 * PI * hbar).sqrt();
    let scalar = Complex64::new(s * (rat_to_f64(&x.constant) - lam.eval(&u)?), 0.0);
    Ok(OperatorSymbol { mult_coeffs, deriv_coeffs, scalar })
}

/// Exact commutator pairing: [π(x), π(y)] = 2πiħ · Σ_j (a^x_j m^y_j − a^y_j m^x_j),
/// which must equal 2πiħ·B(x, y). Returns the exact rational sum.
pub fn symbol_commutator(a: &OperatorSymbol, b: &OperatorSymbol) -> Rat {
    let mut sum = Rat::zero();
    for j in 0..a.deriv_coeffs.len() {
        sum += &a.deriv_coeffs[j] * &b.mult_coeffs[j] - &b.deriv_coeffs[j] * &a.mult_coeffs[j];
    }
    sum
}

/// Uniform symmetric grid: n midpoints on [−L, L].
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub l: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n).map(|k| -self.l + (k as f64 + 0.5) * dx).collect()
    }
    pub fn dx(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }
}

/// Dense grid realization of a rank-one intertwiner.
#[derive(Clone)]
pub struct GridTransform {
    pub kernel: Vec<Vec<Complex64>>,
    pub from: SymplecticDecomposition,
    pub to: SymplecticDecomposition,
    pub grid: GridSpec,
}

impl GridTransform {
    /// Apply to a grid vector: (Uψ)_i = Σ_j K[i][j] ψ_j dx.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let dx = self.grid.dx();
        self.kernel
            .iter()
            .map(|row| row.iter().zip(psi).map(|(k, p)| k * p).sum::<Complex64>() * dx)
            .collect()
    }

    /// Kernel of self ∘ inner (dx-weighted matrix product).
    pub fn compose(&self, inner: &GridTransform) -> GridTransform {
        let n = self.grid.n;
        let dx = self.grid.dx();
        let mut kernel = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for (kk, inner_row) in inner.kernel.iter().enumerate() {
                let a = self.kernel[i][kk] * dx;
                let out = &mut kernel[i];
                for (o, b) in out.iter_mut().zip(inner_row) {
                    *o += a * b;
                }
            }
        }
        GridTransform {
            kernel,
            from: inner.from.clone(),
            to: self.to.clone(),
            grid: self.grid,
        }
    }
}

/// The exact 2×2 frame-change matrix S (columns: frame₂ = (w₂*, v₂) in
/// coordinates of frame₁ = (w₁*, v₁), modulo the radical); det S = 1.
fn frame_change(
    space: &SkewSpace,
    d1: &SymplecticDecomposition,
    d2: &SymplecticDecomposition,
) -> Result<[[Rat; 2]; 2], WeilError> {
    let w1 = dual_basis(space, d1).remove(0);
    let v1 = d1.supplementary[0].clone();
    let w2 = dual_basis(space, d2).remove(0);
    let v2 = d2.supplementary[0].clone();
    let mut cols: Vec<Vec<Rat>> = vec![w1, v1];
    cols.extend(space.radical().basis().to_vec());
    let basis = Mat::new(cols).transpose();
    let cw = basis
        .solve(&w2)
        .ok_or_else(|| WeilError::Invalid("frames not compatible modulo radical".into()))?;
    let cv = basis
        .solve(&v2)
        .ok_or_else(|| WeilError::Invalid("frames not compatible modulo radical".into()))?;
    Ok([
        [cw[0].clone(), cv[0].clone()],
        [cw[1].clone(), cv[1].clone()],
    ])
}

/// LCT kernel for a frame change with β = S₂₁ ≠ 0:
/// K(y, x) = (2π|β|)^{−1/2} exp(i(α x² − 2xy + δ y²)/(2β)), derived from the
/// intertwining equations; the Fourier pair gives e^{−ixy}/√(2π).
fn lct_kernel(s: &[[Rat; 2]; 2], grid: &GridSpec) -> Vec<Vec<Complex64>> {
    let alpha = rat_to_f64(&s[0][0]);
    let beta = rat_to_f64(&s[1][0]);
    let delta = rat_to_f64(&s[1][1]);
    let norm = 1.0 / (2.0 * PI * beta.abs()).sqrt();
    let pts = grid.points();
    pts.iter()
        .map(|&y| {
            pts.iter()
                .map(|&x| {
                    let ph = (alpha * x * x - 2.0 * x * y + delta * y * y) / (2.0 * beta);
                    Complex64::from_polar(norm, ph)
                })
                .collect()
        })
        .collect()
}

/// Rank-one Weil intertwiner ℋ_{d1} → ℋ_{d2} on the grid. A frame change
/// with β = 0 (no Fourier content) is realized by splitting S = S_A · F with
/// the exact Fourier matrix F, composing the two non-degenerate kernels.
pub fn weil_transform_rank1(
    space: &SkewSpace,
    d1: &SymplecticDecomposition,
    d2: &SymplecticDecomposition,
    grid: GridSpec,
    _hbar: f64,
) -> Result<GridTransform, WeilError> {
    let r = space.half_rank();
    if r != 1 {
        return Err(WeilError::RankUnsupported(r));
    }
    d1.validate(space)?;
    d2.validate(space)?;
    let s = frame_change(space, d1, d2)?;
    if !s[1][0].is_zero() {
        return Ok(GridTransform {
            kernel: lct_kernel(&s, &grid),
            from: d1.clone(),
            to: d2.clone(),
            grid,
        });
    }
    // S = S_A · F, so U = U_F ∘ U_A with both factors non-degenerate:
    // S_A = S·F^{-1} = [[−γ, α], [−δ, β]] and F = [[0, −1], [1, 0]].
    let s_a = [
        [-s[0][1].clone(), s[0][0].clone()],
        [-s[1][1].clone(), s[1][0].clone()],
    ];
    let f: [[Rat; 2]; 2] = [
        [Rat::zero(), -Rat::from_integer(1.into())],
        [Rat::from_integer(1.into()), Rat::zero()],
    ];
    let ka = GridTransform {
        kernel: lct_kernel(&s_a, &grid),
        from: d1.clone(),
        to: d2.clone(),
        grid,
    };
    let kf = GridTransform {
        kernel: lct_kernel(&f, &grid),
        from: d1.clone(),
        to: d2.clone(),
        grid,
    };
    let mut composed = kf.compose(&ka);
    composed.from = d1.clone();
    composed.to = d2.clone();
    Ok(composed)
}

/// Gaussian probe e^{−x²/2} on the grid.
pub fn gaussian_probe(grid: &GridSpec) -> Vec<Complex64> {
    grid.points()
        .iter()
        .map(|&x| Complex64::new((-0.5 * x * x).exp(), 0.0))
        .collect()
}

fn inner(a: &[Complex64], b: &[Complex64], dx: f64) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>() * dx
}

/// Apply F_{ℓ3→ℓ1} ∘ F_{ℓ2→ℓ3} ∘ F_{ℓ1→ℓ2} to a Gaussian probe and return
/// the measured scalar ⟨ψ, Uψ⟩/⟨ψ, ψ⟩; by the Maslov phase law it must be
/// e^{iπτ(ℓ1,ℓ2,ℓ3)/4}.
pub fn triple_phase_check(
    space: &SkewSpace,
    d1: &SymplecticDecomposition,
    d2: &SymplecticDecomposition,
    d3: &SymplecticDecomposition,
    grid: GridSpec,
    hbar: f64,
) -> Result<Complex64, WeilError> {
    let u12 = weil_transform_rank1(space, d1, d2, grid, hbar)?;
    let u23 = weil_transform_rank1(space, d2, d3, grid, hbar)?;
    let u31 = weil_transform_rank1(space, d3, d1, grid, hbar)?;
    let psi = gaussian_probe(&grid);
    let out = u31.apply(&u23.apply(&u12.apply(&psi)));
    let dx = grid.dx();
    Ok(inner(&psi, &out, dx) / inner(&psi, &psi, dx))
}

/// Round-trip defect ‖F_{ℓ2→ℓ1} F_{ℓ1→ℓ2} ψ − ψ‖ / ‖ψ‖ on the Gaussian probe.
pub fn involutivity_defect(
    space: &SkewSpace,
    d1: &SymplecticDecomposition,
    d2: &SymplecticDecomposition,
    grid: GridSpec,
    hbar: f64,
) -> Result<f64, WeilError> {
    let u12 = weil_transform_rank1(space, d1, d2, grid, hbar)?;
    let u21 = weil_transform_rank1(space, d2, d1, grid, hbar)?;
    let psi = gaussian_probe(&grid);
    let back = u21.apply(&u12.apply(&psi));
    let num: f64 = back
        .iter()
        .zip(&psi)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let den: f64 = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    Ok(num / den)
}
