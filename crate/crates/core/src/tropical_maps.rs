//! Cluster (tropical) linear maps between seed vector spaces: the flip maps
//! C_k^(ε), their inverses, label-change maps C_σ, the neat composite C_k,
//! and compositions along mutation paths.
//!
//! All maps are exact rational matrices with their source and target
//! [`SkewSpace`]s attached; columns are images of source basis vectors.
//! A flip map `c_k(seed, k, s)` goes from the mutated space V_{T'} back to
//! the unmutated space V_T, and its coefficients use the exchange matrix of
//! the *target* (unprimed) seed.

use crate::ratlin::{positive_part, rat, Mat, Rat};
use crate::seed_surface::{Seed, SurfaceError};
use crate::symplectic_core::SkewSpace;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Errors from building or composing tropical maps.
#[derive(Debug, Error)]
pub enum TropicalError {
    #[error("path mismatch: {0}")]
    PathMismatch(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Sign of a flip, serialized as "+" or "-".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn val(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(if *self == Sign::Plus { "+" } else { "-" })
    }
}

/// Exact linear map with its endpoints attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub source: SkewSpace,
    pub target: SkewSpace,
    /// Columns are the images of the source basis vectors.
    pub matrix: Mat,
}

impl LinearMap {
    pub fn identity(space: &SkewSpace) -> Self {
        LinearMap {
            source: space.clone(),
            target: space.clone(),
            matrix: Mat::identity(space.dim()),
        }
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        self.matrix.mul_vec(v)
    }

    /// self ∘ inner (apply `inner` first).
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap, TropicalError> {
        if inner.target != self.source {
            return Err(TropicalError::PathMismatch(
                "composition endpoints do not match".into(),
            ));
        }
        Ok(LinearMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&inner.matrix),
        })
    }

    pub fn inverse(&self) -> Option<LinearMap> {
        Some(LinearMap {
            source: self.target.clone(),
            target: self.source.clone(),
            matrix: self.matrix.inverse()?,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.matrix == Mat::identity(self.matrix.nrows())
    }

    /// Exact check of B_source(x, y) = B_target(Cx, Cy), i.e. Mᵀ·B_tgt·M = B_src.
    pub fn respects_forms(&self) -> bool {
        let mt = self.matrix.transpose();
        mt.mul(&self.target.form).mul(&self.matrix) == self.source.form
    }
}

fn space_of(seed: &Seed) -> SkewSpace {
    SkewSpace::from_epsilon(&seed.labels, &seed.epsilon)
}

/// The cluster map C_k^(s) : V_{T'} → V_T for the flip of `seed` at `k`.
///
/// C(x'_k) = −x_k and C(x'_e) = x_e + [s·ε_ek]_+ x_k for e ≠ k, with ε the
/// exchange matrix of the unmutated `seed`.
pub fn c_k(seed: &Seed, k: u32, sign: Sign) -> Result<LinearMap, TropicalError> {
    let kk = seed.index_of(k)?;
    let mutated = seed.mutate(k)?;
    let n = seed.labels.len();
    let mut m = Mat::zero(n, n);
    for e in 0..n {
        if e == kk {
            m.rows[kk][kk] = -Rat::one();
        } else {
            m.rows[e][e] = Rat::one();
            m.rows[kk][e] = positive_part(&rat(sign.val() * seed.epsilon[e][kk]));
        }
    }
    Ok(LinearMap {
        source: space_of(&mutated),
        target: space_of(seed),
        matrix: m,
    })
}

/// Exact inverse (C_k^(s))^{-1} : V_T → V_{T'}, by closed form:
/// x_k ↦ −x'_k and x_e ↦ x'_e + [s·ε_ek]_+ x'_k.
pub fn c_k_inverse(seed: &Seed, k: u32, sign: Sign) -> Result<LinearMap, TropicalError> {
    let fwd = c_k(seed, k, sign)?;
    Ok(LinearMap {
        source: fwd.target,
        target: fwd.source,        // same diagonal-±1 shape: self-inverse matrix
        matrix: fwd.matrix.clone(),
    })
}

/// Label-change map C_σ : V_{T'} → V_T for T' = σ(T), sending x'_{σ(e)} ↦ x_e.
pub fn c_sigma(seed: &Seed, sigma: &BTreeMap<u32, u32>) -> Result<LinearMap, TropicalError> {
    let relabeled = seed.relabel(sigma)?;
    let n = seed.labels.len();
    let mut m = Mat::zero(n, n);
    for &e in &seed.labels {
        let img = *sigma.get(&e).unwrap_or(&e);
        m.rows[seed.index_of(e)?][relabeled.index_of(img)?] = Rat::one();
    }
    Ok(LinearMap {
        source: space_of(&relabeled),
        target: space_of(seed),
        matrix: m,
    })
}

/// The sign-independent composite C_k := C_k^(+) ∘ (C_k^(−))^{-1} : V_T → V_T,
/// which must equal x ↦ x + B(x, x_k)·x_k.
pub fn c_neat(seed: &Seed, k: u32) -> Result<LinearMap, TropicalError> {
    c_k(seed, k, Sign::Plus)?.compose(&c_k_inverse(seed, k, Sign::Minus)?)
}

/// One step of a mutation path. Serializes as
/// `{"flip": k, "sign": "+"}` or `{"perm": {"0": 1, "1": 0}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PathStepWire", into = "PathStepWire")]
pub enum PathStep {
    Flip { flip: u32, sign: Sign },
    Perm { perm: BTreeMap<u32, u32> },
}

/// JSON-facing shape: permutation keys are strings so untagged matching
/// works under serde's internal buffering.
#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum PathStepWire {
    Flip { flip: u32, sign: Sign },
    Perm { perm: BTreeMap<String, u32> },
}

impl From<PathStep> for PathStepWire {
    fn from(s: PathStep) -> Self {
        match s {
            PathStep::Flip { flip, sign } => PathStepWire::Flip { flip, sign },
            PathStep::Perm { perm } => PathStepWire::Perm {
                perm: perm.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            },
        }
    }
}

impl TryFrom<PathStepWire> for PathStep {
    type Error = String;
    fn try_from(w: PathStepWire) -> Result<Self, String> {
        Ok(match w {
            PathStepWire::Flip { flip, sign } => PathStep::Flip { flip, sign },
            PathStepWire::Perm { perm } => PathStep::Perm {
                perm: perm
                    .into_iter()
                    .map(|(k, v)| k.parse::<u32>().map(|k| (k, v)).map_err(|e| e.to_string()))
                    .collect::<Result<_, _>>()?,
            },
        })
    }
}

/// Compose cluster maps along a path of flips and relabelings starting at
/// `seed`. Each factor is built on its recomputed intermediate seed; the
/// result maps V_{final} → V_{initial}. Also returns the final seed.
pub fn compose_tropical(
    seed: &Seed,
    path: &[PathStep],
) -> Result<(LinearMap, Seed), TropicalError> {
    let mut current = seed.clone();
    let mut total = LinearMap::identity(&space_of(seed));
    for (i, step) in path.iter().enumerate() {
        let (factor, next) = match step {
            PathStep::Flip { flip, sign } => {
                let f = c_k(&current, *flip, *sign).map_err(|e| {
                    TropicalError::PathMismatch(format!("step {i}: {e}"))
                })?;
                (f, current.mutate(*flip)?)
            }
            PathStep::Perm { perm } => {
                let f = c_sigma(&current, perm).map_err(|e| {
                    TropicalError::PathMismatch(format!("step {i}: {e}"))
                })?;
                (f, current.relabel(perm)?)
            }
        };
        total = total.compose(&factor)?;
        current = next;
    }
    Ok((total, current))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed_surface::Triangulation;
    use crate::symplectic_core::{canonical_decomposition, puncture_elements};

    fn seed_2x2() -> Seed {
        Seed::new(vec![0, 1], vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    fn torus_seed() -> Seed {
        Seed::from_triangulation(&Triangulation::standard(1, 1).unwrap())
    }

    fn basis_vec(n: usize, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); n];
        v[i] = Rat::one();
        v
    }

    #[test]
    fn c_k_images() {
        let s = seed_2x2();
        // ε_01 = 1, so flipping at label 1 with sign +: x'_1 ↦ −x_1 and
        // x'_0 ↦ x_0 + [ε_01]_+ x_1 = x_0 + x_1.
        let f = c_k(&s, 1, Sign::Plus).unwrap();
        assert_eq!(f.apply(&basis_vec(2, 1)), vec![rat(0), rat(-1)]);
        assert_eq!(f.apply(&basis_vec(2, 0)), vec![rat(1), rat(1)]);
        // sign −: [−1]_+ = 0, so x'_0 ↦ x_0.
        let f = c_k(&s, 1, Sign::Minus).unwrap();
        assert_eq!(f.apply(&basis_vec(2, 0)), vec![rat(1), rat(0)]);
        // Torus: ε_01 = 2 → x'_0 ↦ x_0 + 2x_1 for sign +.
        let t = torus_seed();
        assert_eq!(t.epsilon[0][1], 2);
        let f = c_k(&t, 1, Sign::Plus).unwrap();
        assert_eq!(f.apply(&basis_vec(3, 0)), vec![rat(1), rat(2), rat(0)]);
    }

    #[test]
    fn inverse_matches_matrix_inverse() {
        for s in [seed_2x2(), torus_seed()] {
            for &k in &s.labels {
                for sign in [Sign::Plus, Sign::Minus] {
                    let f = c_k(&s, k, sign).unwrap();
                    let inv = c_k_inverse(&s, k, sign).unwrap();
                    assert_eq!(inv.matrix, f.matrix.inverse().unwrap());
                    assert!(f.compose(&inv).unwrap().is_identity());
                }
            }
        }
    }

    #[test]
    fn c_sigma_behaviour() {
        let s = torus_seed();
        let id = c_sigma(&s, &BTreeMap::new()).unwrap();
        assert!(id.is_identity());
        let swap = BTreeMap::from([(0, 1), (1, 0)]);
        let f = c_sigma(&s, &swap).unwrap();
        assert_eq!(f.matrix, f.matrix.inverse().unwrap());
        // C_σ C_γ = C_{σ∘γ}: build on the relabeled seed and compare matrices.
        let gamma = BTreeMap::from([(0, 2), (2, 1), (1, 0)]);
        let s_g = s.relabel(&gamma).unwrap();
        let f_sigma_on_g = c_sigma(&s_g, &swap).unwrap();
        let comp = c_sigma(&s, &gamma).unwrap().compose(&f_sigma_on_g).unwrap();
        let mut sg = BTreeMap::new();
        for e in [0u32, 1, 2] {
            sg.insert(e, *swap.get(gamma.get(&e).unwrap()).unwrap_or(gamma.get(&e).unwrap()));
        }
        assert_eq!(comp.matrix, c_sigma(&s, &sg).unwrap().matrix);
    }

    #[test]
    fn c_neat_closed_formula() {
        for s in [seed_2x2(), torus_seed()] {
            for &k in &s.labels {
                let f = c_neat(&s, k).unwrap();
                let n = s.labels.len();
                let kk = s.index_of(k).unwrap();
                let space = SkewSpace::from_epsilon(&s.labels, &s.epsilon);
                for e in 0..n {
                    let x = basis_vec(n, e);
                    let mut expect = x.clone();
                    let b = space.pair(&x, &basis_vec(n, kk));
                    expect[kk] += b;
                    assert_eq!(f.apply(&x), expect);
                }
            }
        }
    }

    #[test]
    fn maps_respect_forms_and_decompositions() {
        let s = torus_seed();
        for &k in &s.labels {
            for sign in [Sign::Plus, Sign::Minus] {
                let f = c_k(&s, k, sign).unwrap();
                assert!(f.respects_forms());
                let d = canonical_decomposition(&f.source).unwrap();
                d.map_by(&f.matrix).validate(&f.target).unwrap();
            }
        }
        let swap = BTreeMap::from([(0, 2), (2, 0)]);
        assert!(c_sigma(&s, &swap).unwrap().respects_forms());
    }

    #[test]
    fn flip_maps_preserve_puncture_elements() {
        for (g, s) in [(1usize, 1usize), (0, 3), (0, 4), (1, 2), (2, 1), (2, 4)] {
            let t = Triangulation::standard(g, s).unwrap();
            let seed = Seed::from_triangulation(&t);
            let xs = puncture_elements(&t).unwrap();
            for &k in &t.edges {
                // A regular flip stays within self-folded-free triangulations;
                // the puncture-element compatibility only holds there.
                let Ok(t2) = t.flip(k) else { continue };
                if t2.has_self_folded() {
                    continue;
                }
                let xs2 = puncture_elements(&t2).unwrap();
                for sign in [Sign::Plus, Sign::Minus] {
                    let f = c_k(&seed, k, sign).unwrap();
                    for (x2, x) in xs2.iter().zip(&xs) {
                        assert_eq!(&f.apply(x2), x, "(g,s)=({g},{s}), k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn standard_path_compositions() {
        // (k,+)(k,−) = Id on the torus.
        let s = torus_seed();
        let path = vec![
            PathStep::Flip { flip: 0, sign: Sign::Plus },
            PathStep::Flip { flip: 0, sign: Sign::Minus },
        ];
        let (f, end) = compose_tropical(&s, &path).unwrap();
        assert!(f.is_identity());
        assert_eq!(end, s);

        // ε_ij = 0 square and ε_ij = 1 pentagon on small abstract seeds.
        let sq = Seed::new(
            vec![0, 1, 2],
            vec![vec![0, 0, 1], vec![0, 0, 1], vec![-1, -1, 0]],
        )
        .unwrap();
        assert_eq!(sq.epsilon[0][1], 0);
        let path: Vec<PathStep> = [(0, Sign::Plus), (1, Sign::Plus), (0, Sign::Minus), (1, Sign::Minus)]
            .iter()
            .map(|&(flip, sign)| PathStep::Flip { flip, sign })
            .collect();
        let (f, _) = compose_tropical(&sq, &path).unwrap();
        assert!(f.is_identity());

        let pent = seed_2x2(); // ε_01 = 1
        let path: Vec<PathStep> = [
            (0, Sign::Plus),
            (1, Sign::Plus),
            (0, Sign::Minus),
            (1, Sign::Minus),
            (0, Sign::Minus),
        ]
        .iter()
        .map(|&(flip, sign)| PathStep::Flip { flip, sign })
        .collect();
        let (f, _) = compose_tropical(&pent, &path).unwrap();
        let swap = BTreeMap::from([(0u32, 1u32), (1, 0)]);
        assert_eq!(f.matrix, c_sigma(&pent, &swap).unwrap().matrix);
    }

    #[test]
    fn path_json_roundtrip() {
        let path = vec![
            PathStep::Flip { flip: 3, sign: Sign::Plus },
            PathStep::Perm { perm: BTreeMap::from([(0, 1), (1, 0)]) },
            PathStep::Flip { flip: 0, sign: Sign::Minus },
        ];
        let s = serde_json::to_string(&path).unwrap();
        assert!(s.contains("\"flip\":3") && s.contains("\"sign\":\"+\""));
        let back: Vec<PathStep> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, path);
    }

    #[test]
    fn bad_paths_error() {
        let s = torus_seed();
        let path = vec![PathStep::Flip { flip: 9, sign: Sign::Plus }];
        assert!(matches!(
            compose_tropical(&s, &path),
            Err(TropicalError::PathMismatch(_))
        ));
    }
}
