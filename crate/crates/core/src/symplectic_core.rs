//! Exact symplectic linear algebra over the rationals: radicals, essential
//! Lagrangians, symplectic decompositions, central characters, and the
//! Maslov/Kashiwara index.
//!
//! Everything here is exact; no operation introduces floating point. A
//! [`Subspace`] is canonicalized by reduced row-echelon form so subspace
//! equality is structural equality — the rewrite engine relies on that for
//! its decomposition-labelled objects.

use crate::ratlin::{bilinear, rat, signature, Mat, Rat};
use crate::seed_surface::Triangulation;
use num_traits::{One, Zero};
use thiserror::Error;

/// Errors from the exact symplectic layer.
#[derive(Debug, Error)]
pub enum SymplecticError {
    #[error("the form is identically zero on this space: no symplectic decomposition")]
    DegenerateSpace,
    #[error("vector lies in the radical")]
    RadicalVector,
    #[error("subspace is not an essential Lagrangian: {0}")]
    NotLagrangian(String),
    #[error("puncture elements do not span the radical")]
    RankMismatch,
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Vector space with ordered basis labels and a skew-symmetric rational form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewSpace {
    pub basis_labels: Vec<u32>,
    pub form: Mat,
}

impl SkewSpace {
    pub fn new(basis_labels: Vec<u32>, form: Mat) -> Result<Self, SymplecticError> {
        if form.nrows() != basis_labels.len() || !form.is_skew_symmetric() {
            return Err(SymplecticError::Invalid(
                "form must be square, skew-symmetric, and match the label count".into(),
            ));
        }
        Ok(SkewSpace { basis_labels, form })
    }

    /// Space V_T with B_T = ε for a triangulation (or any integer matrix).
    pub fn from_epsilon(labels: &[u32], epsilon: &[Vec<i64>]) -> Self {
        SkewSpace {
            basis_labels: labels.to_vec(),
            form: Mat::from_i64(epsilon),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis_labels.len()
    }

    /// B(u, v).
    pub fn pair(&self, u: &[Rat], v: &[Rat]) -> Rat {
        bilinear(&self.form, u, v)
    }

    /// Half the rank of B: the `r` of the Schrödinger model L²(ℝ^r).
    pub fn half_rank(&self) -> usize {
        (self.dim() - self.radical().dim()) / 2
    }

    /// Radical V⊥ = ker B as a canonical subspace.
    pub fn radical(&self) -> Subspace {
        Subspace {
            rows: self.form.kernel(),
        }
    }
}

/// Subspace in canonical (reduced row-echelon) form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    rows: Mat,
}

impl Subspace {
    /// Canonicalize a spanning set.
    pub fn from_span(vectors: &[Vec<Rat>]) -> Self {
        let mut m = Mat::new(vectors.to_vec());
        m.rref();
        Subspace { rows: m }
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.rows.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.nrows()
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut m = self.rows.clone();
        m.rows.push(v.to_vec());
        m.rank() == self.dim()
    }

    /// Dimension of the intersection with another subspace.
    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        let stacked = self.rows.vstack(&other.rows).rank();
        self.dim() + other.dim() - stacked
    }

    /// Image under an invertible linear map given by its matrix.
    pub fn map_by(&self, m: &Mat) -> Subspace {
        let imgs: Vec<Vec<Rat>> = self.basis().iter().map(|v| m.mul_vec(v)).collect();
        Subspace::from_span(&imgs)
    }
}

/// Essential-Lagrangian test: isotropic, trivial intersection with the
/// radical, and of the maximal dimension r (Def of essential Lagrangian).
pub fn is_essential_lagrangian(space: &SkewSpace, l: &Subspace) -> bool {
    let basis = l.basis();
    for u in basis {
        for v in basis {
            if !space.pair(u, v).is_zero() {
                return false;
            }
        }
    }
    l.intersection_dim(&space.radical()) == 0 && l.dim() == space.half_rank()
}

/// Symplectic decomposition (ℓ, 𝓑): an essential Lagrangian plus an ordered
/// isotropic supplementary basis pairing ℓ non-degenerately.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymplecticDecomposition {
    pub lagrangian: Subspace,
    pub supplementary: Vec<Vec<Rat>>,
}

impl SymplecticDecomposition {
    /// Validate all decomposition invariants against a space.
    pub fn validate(&self, space: &SkewSpace) -> Result<(), SymplecticError> {
        let r = space.half_rank();
        if !is_essential_lagrangian(space, &self.lagrangian) {
            return Err(SymplecticError::NotLagrangian(
                "lagrangian part fails the essential-Lagrangian test".into(),
            ));
        }
        if self.supplementary.len() != r {
            return Err(SymplecticError::Invalid(format!(
                "expected {r} supplementary vectors, got {}",
                self.supplementary.len()
            )));
        }
        let span = Subspace::from_span(&self.supplementary);
        if !is_essential_lagrangian(space, &span) {
            return Err(SymplecticError::NotLagrangian(
                "supplementary span fails the essential-Lagrangian test".into(),
            ));
        }
        if self.lagrangian.intersection_dim(&span) != 0 {
            return Err(SymplecticError::Invalid(
                "lagrangian meets the supplementary span".into(),
            ));
        }
        // V = V⊥ + ℓ + span(𝓑): dimensions add up and pairwise meets are 0
        // (the pairwise checks above plus a rank check on the union).
        let mut all: Vec<Vec<Rat>> = space.radical().basis().to_vec();
        all.extend(self.lagrangian.basis().iter().cloned());
        all.extend(self.supplementary.iter().cloned());
        if Mat::new(all).rank() != space.dim() {
            return Err(SymplecticError::Invalid(
                "radical + lagrangian + supplementary do not span V".into(),
            ));
        }
        Ok(())
    }

    /// Image decomposition under an invertible form-respecting map.
    pub fn map_by(&self, m: &Mat) -> SymplecticDecomposition {
        SymplecticDecomposition {
            lagrangian: self.lagrangian.map_by(m),
            supplementary: self.supplementary.iter().map(|v| m.mul_vec(v)).collect(),
        }
    }
}

/// Central character λ: real weights on a stored basis of the radical.
/// `f(u)` is the λ-linear functional evaluated on radical vectors.
#[derive(Clone, Debug)]
pub struct CentralCharacter {
    /// Basis of V⊥ the weights refer to (e.g. the puncture elements).
    pub radical_basis: Vec<Vec<Rat>>,
    pub weights: Vec<f64>,
}

impl CentralCharacter {
    /// Evaluate f on a radical vector by solving for its coordinates in the
    /// stored basis.
    pub fn eval(&self, u: &[Rat]) -> Result<f64, SymplecticError> {
        if self.radical_basis.is_empty() {
            return Ok(0.0);
        }
        let m = Mat::new(self.radical_basis.clone()).transpose();
        let coords = m
            .solve(u)
            .ok_or(SymplecticError::Invalid("vector outside the radical".into()))?;
        Ok(coords
            .iter()
            .zip(&self.weights)
            .map(|(c, w)| rat_to_f64(c) * w)
            .sum())
    }
}

pub(crate) fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().expect("rational within f64 range")
}

/// Radical of the space (kernel of B).
pub fn radical(space: &SkewSpace) -> Subspace {
    space.radical()
}

/// Puncture elements x_p = Σ_e σ^e_p x_e; returned in puncture order.
/// They form a basis of the radical of (V_T, B_T); a failed rank check
/// signals a combinatorial bug upstream.
pub fn puncture_elements(t: &Triangulation) -> Result<Vec<Vec<Rat>>, SymplecticError> {
    let inc = t.incidences();
    let eps = t.exchange_matrix();
    let space = SkewSpace::from_epsilon(&t.edges, &eps);
    let xs: Vec<Vec<Rat>> = t
        .punctures
        .iter()
        .map(|&p| {
            t.edges
                .iter()
                .map(|&e| rat(inc.get(e, p) as i64))
                .collect()
        })
        .collect();
    let rad = space.radical();
    let span = Subspace::from_span(&xs);
    if span != rad || span.dim() != xs.len() {
        return Err(SymplecticError::RankMismatch);
    }
    Ok(xs)
}

/// Deterministic symplectic Gram–Schmidt in basis-label order.
///
/// Repeatedly takes the first remaining candidate `w` that pairs nonzero with
/// some later candidate `v` (first such, normalized so B(w,v)=1), records the
/// pair, and reduces the rest to be B-orthogonal to both. The leftover
/// candidates span the radical. Returns (ℓ = span of the w's, 𝓑 = the v's).
pub fn canonical_decomposition(
    space: &SkewSpace,
) -> Result<SymplecticDecomposition, SymplecticError> {
    decomposition_from_candidates(space, standard_basis(space.dim()))
}

/// Decomposition whose Lagrangian contains `must_contain` (which must lie
/// outside the radical): the vector is simply placed first in the candidate
/// list of the Gram–Schmidt sweep.
pub fn constrained_decomposition(
    space: &SkewSpace,
    must_contain: &[Rat],
) -> Result<SymplecticDecomposition, SymplecticError> {
    if space.radical().contains(must_contain) {
        return Err(SymplecticError::RadicalVector);
    }
    let mut candidates = vec![must_contain.to_vec()];
    candidates.extend(standard_basis(space.dim()));
    decomposition_from_candidates(space, candidates)
}

fn standard_basis(n: usize) -> Vec<Vec<Rat>> {
    (0..n)
        .map(|i| {
            let mut v = vec![Rat::zero(); n];
            v[i] = Rat::one();
            v
        })
        .collect()
}

fn decomposition_from_candidates(
    space: &SkewSpace,
    mut candidates: Vec<Vec<Rat>>,
) -> Result<SymplecticDecomposition, SymplecticError> {
    let mut ws: Vec<Vec<Rat>> = Vec::new();
    let mut vs: Vec<Vec<Rat>> = Vec::new();
    loop {
        // First candidate pairing nonzero with a later one, in order.
        let mut found = None;
        'outer: for a in 0..candidates.len() {
            for b in 0..candidates.len() {
                if a != b && !space.pair(&candidates[a], &candidates[b]).is_zero() {
                    found = Some((a, b));
                    break 'outer;
                }
            }
        }
        let Some((a, b)) = found else { break };
        let w = candidates[a].clone();
        let scale = space.pair(&w, &candidates[b]);
        let v: Vec<Rat> = candidates[b].iter().map(|x| x / &scale).collect();
        // Reduce the rest: c ↦ c + B(c,w)·v − B(c,v)·w kills both pairings.
        let keep: Vec<Vec<Rat>> = candidates
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != a && i != b)
            .map(|(_, c)| {
                let cw = space.pair(c, &w);
                let cv = space.pair(c, &v);
                c.iter()
                    .enumerate()
                    .map(|(j, x)| x + &cw * &v[j] - &cv * &w[j])
                    .collect()
            })
            .collect();
        candidates = keep;
        ws.push(w);
        vs.push(v);
    }
    if ws.is_empty() {
        return Err(SymplecticError::DegenerateSpace);
    }
    Ok(SymplecticDecomposition {
        lagrangian: Subspace::from_span(&ws),
        supplementary: vs,
    })
}

/// Unique ordered basis {w_1..w_r} of ℓ with B(w_i, v_j) = δ_ij exactly.
pub fn dual_basis(space: &SkewSpace, d: &SymplecticDecomposition) -> Vec<Vec<Rat>> {
    let lb = d.lagrangian.basis();
    let r = lb.len();
    // M[m][j] = B(ℓ_m, v_j); the dual basis is w = M^{-1} · (ℓ basis).
    let m = Mat::new(
        lb.iter()
            .map(|u| d.supplementary.iter().map(|v| space.pair(u, v)).collect())
            .collect(),
    );
    let minv = m.inverse().expect("decomposition pairs non-degenerately");
    (0..r)
        .map(|i| {
            let mut w = vec![Rat::zero(); space.dim()];
            for (mcol, u) in minv.rows[i].iter().zip(lb) {
                for (wj, uj) in w.iter_mut().zip(u) {
                    *wj += mcol * uj;
                }
            }
            w
        })
        .collect()
}

/// Gram matrix of the Maslov quadratic form
/// Q(x₁+x₂+x₃) = B(x₁,x₂) + B(x₂,x₃) + B(x₃,x₁)
/// on ℓ₁ ⊕ ℓ₂ ⊕ ℓ₃ in the concatenated canonical bases.
pub fn maslov_form(
    space: &SkewSpace,
    l1: &Subspace,
    l2: &Subspace,
    l3: &Subspace,
) -> Result<Mat, SymplecticError> {
    for (i, l) in [l1, l2, l3].iter().enumerate() {
        if !is_essential_lagrangian(space, l) {
            return Err(SymplecticError::NotLagrangian(format!(
                "argument {} fails the essential-Lagrangian test",
                i + 1
            )));
        }
    }
    let blocks = [l1.basis(), l2.basis(), l3.basis()];
    let dims = [blocks[0].len(), blocks[1].len(), blocks[2].len()];
    let n = dims.iter().sum();
    let offset = [0, dims[0], dims[0] + dims[1]];
    let mut g = Mat::zero(n, n);
    let half = rat(1) / rat(2);
    // Polarizing Q gives, for u in block a < b in block b:
    // 2·G = B(u,v) for (a,b) ∈ {(1,2),(2,3)} and −B(u,v) for (a,b) = (1,3);
    // diagonal blocks vanish (the ℓ_i are isotropic).
    for (a, b, sign) in [(0usize, 1usize, 1i64), (1, 2, 1), (0, 2, -1)] {
        for (i, u) in blocks[a].iter().enumerate() {
            for (j, v) in blocks[b].iter().enumerate() {
                let val = &half * space.pair(u, v) * rat(sign);
                g.rows[offset[a] + i][offset[b] + j] = val.clone();
                g.rows[offset[b] + j][offset[a] + i] = val;
            }
        }
    }
    Ok(g)
}

/// Kashiwara index τ(ℓ₁,ℓ₂,ℓ₃): the signature of the Maslov form, computed
/// by exact congruence diagonalization.
pub fn kashiwara_index(
    space: &SkewSpace,
    l1: &Subspace,
    l2: &Subspace,
    l3: &Subspace,
) -> Result<i64, SymplecticError> {
    Ok(signature(&maslov_form(space, l1, l2, l3)?))
}
