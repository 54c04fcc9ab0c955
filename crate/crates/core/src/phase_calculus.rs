//! Symbolic normalization of intertwiner words over the symplectic Ptolemy
//! groupoid: the engine that computes exact phase constants of groupoid
//! relations.
//!
//! A word is an ordered list of factors — scalar phases, quantum-dilogarithm
//! factors Φ(x̂)^±1, Weil intertwiners F between two decompositions of one
//! seed space, and monomial transformations R along a cluster map — with the
//! leftmost factor applied *last*. Normalization pushes all monomial parts
//! (F, R) to the right past the Φ factors, conjugating their arguments,
//! merges and drops the monomial tail while recording exact eighth-root
//! phases through Kashiwara indices, and then cancels Φ factors directly,
//! through commuting neighbours, or through directed pentagon patterns.

use crate::ratlin::{rat, Mat, Rat};
use crate::seed_surface::{Seed, SurfaceError};
use crate::symplectic_core::{
    canonical_decomposition, kashiwara_index, SkewSpace, SymplecticDecomposition, SymplecticError,
};
use crate::tropical_maps::{c_k, c_sigma, LinearMap, Sign, TropicalError};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

/// Errors from word construction and normalization.
#[derive(Debug, Error)]
pub enum PhaseError {
    #[error("seeds are not related by the flip at {0}")]
    NotAFlip(u32),
    #[error("seeds are not related by the given relabeling")]
    NotARelabel,
    #[error("word is not composable at position {0}: {1}")]
    NonComposable(usize, String),
    #[error("irreducible residual word ({residual}); partial phase {phase}")]
    IrreducibleResidual { phase: Phase, residual: String },
    #[error("loop does not close up: {0}")]
    LoopNotClosed(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

/// Scalar phase α_ħ^a · ζ₈^e with ζ₈ = e^{iπ/4}; the eighth power is either
/// an exact residue mod 8 or marked indeterminate (it then absorbs every
/// further eighth-root contribution).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phase {
    pub alpha_pow: i64,
    /// `Some(e)` with 0 ≤ e < 8, or `None` for indeterminate.
    pub eighth_pow: Option<i64>,
}

impl Phase {
    pub fn one() -> Self {
        Phase { alpha_pow: 0, eighth_pow: Some(0) }
    }

    pub fn alpha(n: i64) -> Self {
        Phase { alpha_pow: n, eighth_pow: Some(0) }
    }

    pub fn eighth(e: i64) -> Self {
        Phase { alpha_pow: 0, eighth_pow: Some(e.rem_euclid(8)) }
    }

    pub fn indeterminate() -> Self {
        Phase { alpha_pow: 0, eighth_pow: None }
    }

    pub fn mul(&self, other: &Phase) -> Phase {
        Phase {
            alpha_pow: self.alpha_pow + other.alpha_pow,
            eighth_pow: match (self.eighth_pow, other.eighth_pow) {
                (Some(a), Some(b)) => Some((a + b).rem_euclid(8)),
                _ => None,
            },
        }
    }

    /// Forget the eighth power, as a sign-swap comparison does.
    pub fn forget_eighth(&self) -> Phase {
        Phase { alpha_pow: self.alpha_pow, eighth_pow: None }
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.eighth_pow {
            Some(e) => write!(f, "alpha^{} * zeta8^{}", self.alpha_pow, e),
            None => write!(f, "alpha^{} * zeta8^indeterminate", self.alpha_pow),
        }
    }
}

/// Finitely supported linear form Σ c_e x̂_e + c·(central symbol).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub coefficients: BTreeMap<u32, Rat>,
    pub constant: Rat,
}

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm { coefficients: BTreeMap::new(), constant: Rat::zero() }
    }

    pub fn basis(label: u32) -> Self {
        let mut c = BTreeMap::new();
        c.insert(label, rat(1));
        LinearForm { coefficients: c, constant: Rat::zero() }
    }

    fn normalized(mut self) -> Self {
        self.coefficients.retain(|_, v| !v.is_zero());
        self
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        let mut c = self.coefficients.clone();
        for (k, v) in &other.coefficients {
            *c.entry(*k).or_insert_with(Rat::zero) += v;
        }
        LinearForm { coefficients: c, constant: &self.constant + &other.constant }.normalized()
    }

    pub fn scale(&self, s: &Rat) -> LinearForm {
        LinearForm {
            coefficients: self.coefficients.iter().map(|(k, v)| (*k, v * s)).collect(),
            constant: &self.constant * s,
        }
        .normalized()
    }

    pub fn neg(&self) -> LinearForm {
        self.scale(&rat(-1))
    }

    /// Dense coefficient vector in the order of `labels` (absent labels → 0).
    pub fn to_dense(&self, labels: &[u32]) -> Vec<Rat> {
        labels
            .iter()
            .map(|l| self.coefficients.get(l).cloned().unwrap_or_else(Rat::zero))
            .collect()
    }

    pub fn from_dense(labels: &[u32], v: &[Rat]) -> LinearForm {
        LinearForm {
            coefficients: labels.iter().cloned().zip(v.iter().cloned()).collect(),
            constant: Rat::zero(),
        }
        .normalized()
    }

    /// Image under a linear map between labelled spaces; the central
    /// constant is carried along unchanged.
    pub fn map_by(&self, map: &LinearMap) -> LinearForm {
        let dense = self.to_dense(&map.source.basis_labels);
        let mut out = LinearForm::from_dense(&map.target.basis_labels, &map.apply(&dense));
        out.constant = self.constant.clone();
        out
    }

    /// Exact symbol commutator: [x̂_a, x̂_b] = 2πiħ·B(a,b), returned as the
    /// rational B(a,b) (central constants commute with everything).
    pub fn commutator(space: &SkewSpace, a: &LinearForm, b: &LinearForm) -> Rat {
        space.pair(&a.to_dense(&space.basis_labels), &b.to_dense(&space.basis_labels))
    }
}

impl std::fmt::Display for LinearForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (k, v) in &self.coefficients {
            if first {
                write!(f, "{v}*x{k}")?;
                first = false;
            } else {
                write!(f, " + {v}*x{k}")?;
            }
        }
        if !self.constant.is_zero() || first {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}*c", self.constant)?;
        }
        Ok(())
    }
}

/// Object of the symplectic Ptolemy groupoid: a seed with a symplectic
/// decomposition of its skew space.
#[derive(Clone, Debug, PartialEq)]
pub struct SPtObject {
    pub seed: Seed,
    pub decomp: SymplecticDecomposition,
}

impl SPtObject {
    pub fn new(seed: Seed, decomp: SymplecticDecomposition) -> Result<Self, PhaseError> {
        let space = SkewSpace::from_epsilon(&seed.labels, &seed.epsilon);
        decomp.validate(&space)?;
        Ok(SPtObject { seed, decomp })
    }

    /// Object with the canonical decomposition of the seed's space.
    pub fn canonical(seed: Seed) -> Result<Self, PhaseError> {
        let space = SkewSpace::from_epsilon(&seed.labels, &seed.epsilon);
        let decomp = canonical_decomposition(&space)?;
        Ok(SPtObject { seed, decomp })
    }

    pub fn space(&self) -> SkewSpace {
        SkewSpace::from_epsilon(&self.seed.labels, &self.seed.epsilon)
    }
}

/// One factor of an intertwiner word (leftmost in a word is applied last).
#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    /// Scalar phase.
    Phase(Phase),
    /// Quantum-dilogarithm factor Φ(x̂_argument)^exponent acting on `object`.
    Phi { object: SPtObject, argument: LinearForm, exponent: Sign },
    /// Weil intertwiner between two decompositions of one seed space.
    F { from: SPtObject, to: SPtObject },
    /// Monomial transformation along `via` (which maps `from.decomp` to
    /// `to.decomp`); conjugation applies `via` to symbol arguments.
    R { from: SPtObject, to: SPtObject, via: LinearMap },
}

impl Factor {
    fn dom(&self) -> Option<&SPtObject> {
        match self {
            Factor::Phase(_) => None,
            Factor::Phi { object, .. } => Some(object),
            Factor::F { from, .. } | Factor::R { from, .. } => Some(from),
        }
    }

    fn cod(&self) -> Option<&SPtObject> {
        match self {
            Factor::Phase(_) => None,
            Factor::Phi { object, .. } => Some(object),
            Factor::F { to, .. } | Factor::R { to, .. } => Some(to),
        }
    }

    pub fn summary(&self) -> String {
        match self {
            Factor::Phase(p) => format!("[{p}]"),
            Factor::Phi { argument, exponent, .. } => format!("Phi({argument})^{exponent}1"),
            Factor::F { .. } => "F".into(),
            Factor::R { .. } => "R".into(),
        }
    }
}

/// Check the object chain: the codomain of each factor must equal the domain
/// of the factor to its left (scalars are transparent).
pub fn check_composable(word: &[Factor]) -> Result<(), PhaseError> {
    let mut pending: Option<(usize, &SPtObject)> = None;
    for (i, f) in word.iter().enumerate() {
        if let Some(cod) = f.cod() {
            if let Some((j, dom)) = pending {
                if cod != dom {
                    return Err(PhaseError::NonComposable(
                        j,
                        format!("codomain of factor {i} differs from domain of factor {j}"),
                    ));
                }
            }
        }
        if let Some(dom) = f.dom() {
            pending = Some((i, dom));
        }
    }
    Ok(())
}

fn word_summary(word: &[Factor]) -> String {
    word.iter().map(Factor::summary).collect::<Vec<_>>().join(" ")
}

/// The elementary flip intertwiner K_k^(sign) as a word
/// α^sign · Φ(sign·x̂_k)^sign · F · R mapping `from` (flipped seed) to `to`.
pub fn elementary_flip_word(
    from: &SPtObject,
    to: &SPtObject,
    k: u32,
    sign: Sign,
) -> Result<Vec<Factor>, PhaseError> {
    if to.seed.mutate(k)? != from.seed {
        return Err(PhaseError::NotAFlip(k));
    }
    let c = c_k(&to.seed, k, sign)?;
    let mid = SPtObject {
        seed: to.seed.clone(),
        decomp: from.decomp.map_by(&c.matrix),
    };
    let arg = match sign {
        Sign::Plus => LinearForm::basis(k),
        Sign::Minus => LinearForm::basis(k).neg(),
    };
    Ok(vec![
        Factor::Phase(Phase::alpha(sign.val())),
        Factor::Phi { object: to.clone(), argument: arg, exponent: sign },
        Factor::F { from: mid.clone(), to: to.clone() },
        Factor::R { from: from.clone(), to: mid, via: c },
    ])
}

/// The elementary label-change intertwiner P_σ as a word F · R with the
/// monomial part along C_σ, mapping `from` (relabeled seed) to `to`.
pub fn elementary_perm_word(
    from: &SPtObject,
    to: &SPtObject,
    sigma: &BTreeMap<u32, u32>,
) -> Result<Vec<Factor>, PhaseError> {
    if to.seed.relabel(sigma)? != from.seed {
        return Err(PhaseError::NotARelabel);
    }
    let c = c_sigma(&to.seed, sigma)?;
    let mid = SPtObject {
        seed: to.seed.clone(),
        decomp: from.decomp.map_by(&c.matrix),
    };
    Ok(vec![
        Factor::F { from: mid.clone(), to: to.clone() },
        Factor::R { from: from.clone(), to: mid, via: c },
    ])
}

/// One move of a groupoid loop.
#[derive(Clone, Debug, PartialEq)]
pub enum LoopMove {
    /// Flip at `k` with a sign choice; optional decomposition for the
    /// arrived-at object (canonical if absent, base decomposition for the
    /// final move).
    Flip { k: u32, sign: Sign, decomp: Option<SymplecticDecomposition> },
    /// Relabel by `sigma`, with the same optional decomposition choice.
    Perm { sigma: BTreeMap<u32, u32>, decomp: Option<SymplecticDecomposition> },
    /// Change only the decomposition (an F factor).
    DecompChange { decomp: SymplecticDecomposition },
}

/// Build the object chain of a loop: base, then one object per move.
pub fn loop_objects(
    base: &SPtObject,
    moves: &[LoopMove],
) -> Result<Vec<SPtObject>, PhaseError> {
    let mut objects = vec![base.clone()];
    for (i, mv) in moves.iter().enumerate() {
        let last = i + 1 == moves.len();
        let current = objects.last().unwrap();
        let (seed, decomp) = match mv {
            LoopMove::Flip { k, decomp, .. } => (current.seed.mutate(*k)?, decomp.clone()),
            LoopMove::Perm { sigma, decomp } => (current.seed.relabel(sigma)?, decomp.clone()),
            LoopMove::DecompChange { decomp } => (current.seed.clone(), Some(decomp.clone())),
        };
        let obj = match decomp {
            Some(d) => SPtObject::new(seed, d)?,
            None if last => SPtObject::new(seed, base.decomp.clone())?,
            None => SPtObject::canonical(seed)?,
        };
        objects.push(obj);
    }
    Ok(objects)
}

/// The composite intertwiner word of a loop (leftmost factor applied last);
/// errors if the loop does not return to `base`.
pub fn loop_word(base: &SPtObject, moves: &[LoopMove]) -> Result<Vec<Factor>, PhaseError> {
    let objects = loop_objects(base, moves)?;
    let end = objects.last().unwrap();
    if end != base {
        return Err(PhaseError::LoopNotClosed(if end.seed == base.seed {
            "final decomposition differs from the base decomposition".into()
        } else {
            "final seed differs from the base seed".into()
        }));
    }
    let mut word = Vec::new();
    for (i, mv) in moves.iter().enumerate() {
        let (to, from) = (&objects[i], &objects[i + 1]);
        match mv {
            LoopMove::Flip { k, sign, .. } => {
                word.extend(elementary_flip_word(from, to, *k, *sign)?)
            }
            LoopMove::Perm { sigma, .. } => word.extend(elementary_perm_word(from, to, sigma)?),
            LoopMove::DecompChange { .. } => {
                word.push(Factor::F { from: from.clone(), to: to.clone() })
            }
        }
    }
    check_composable(&word)?;
    Ok(word)
}

/// Rules (a)–(e): push monomial parts right past Φ factors (conjugating
/// arguments), swap F·R to R·F, merge R·R and F·F (recording the Kashiwara
/// eighth-root phase), and drop identity F/R. Runs to a fixed point;
/// afterwards every Φ is to the left of every monomial factor.
pub fn push_monomials(word: Vec<Factor>) -> Result<(Phase, Vec<Factor>), PhaseError> {
    check_composable(&word)?;
    let mut phase = Phase::one();
    let mut w = word;
    while structural_step(&mut w, &mut phase)? {}
    Ok((phase, w))
}

fn is_identity_matrix(m: &Mat) -> bool {
    *m == Mat::identity(m.nrows())
}

fn structural_step(w: &mut Vec<Factor>, phase: &mut Phase) -> Result<bool, PhaseError> {
    // Single-factor simplifications first.
    for i in 0..w.len() {
        match &w[i] {
            Factor::Phase(p) => {
                *phase = phase.mul(p);
                w.remove(i);
                return Ok(true);
            }
            Factor::F { from, to } if from == to => {
                w.remove(i);
                return Ok(true);
            }
            Factor::R { from, to, via } if from == to && is_identity_matrix(&via.matrix) => {
                w.remove(i);
                return Ok(true);
            }
            _ => {}
        }
    }
    // Adjacent-pair rewrites, first match wins; w[i] is applied after w[i+1].
    for i in 0..w.len().saturating_sub(1) {
        match (&w[i], &w[i + 1]) {
            // (a) F·Φ → Φ·F: a Weil intertwiner between decompositions of one
            // space conjugates symbols trivially.
            (Factor::F { from: _, to }, Factor::Phi { argument, exponent, .. }) => {
                let new_phi = Factor::Phi {
                    object: to.clone(),
                    argument: argument.clone(),
                    exponent: *exponent,
                };
                let f = w[i].clone();
                w[i] = new_phi;
                w[i + 1] = f;
                return Ok(true);
            }
            // (a) R·Φ → Φ'·R: conjugation applies the cluster map to the symbol.
            (Factor::R { to, via, .. }, Factor::Phi { argument, exponent, .. }) => {
                let new_phi = Factor::Phi {
                    object: to.clone(),
                    argument: argument.map_by(via),
                    exponent: *exponent,
                };
                let r = w[i].clone();
                w[i] = new_phi;
                w[i + 1] = r;
                return Ok(true);
            }
            // (b) F·R → R·F with the intermediate object pulled back through
            // the monomial map.
            (Factor::F { to: b, .. }, Factor::R { from: x, via, .. }) => {
                let g_inv = via.matrix.inverse().expect("cluster maps are invertible");
                let mid = SPtObject {
                    seed: x.seed.clone(),
                    decomp: b.decomp.map_by(&g_inv),
                };
                let new_r = Factor::R {
                    from: mid.clone(),
                    to: b.clone(),
                    via: via.clone(),
                };
                let new_f = Factor::F { from: x.clone(), to: mid };
                w[i] = new_r;
                w[i + 1] = new_f;
                return Ok(true);
            }
            // (c) R·R → R.
            (Factor::R { to: b, via: g2, .. }, Factor::R { from: x, via: g1, .. }) => {
                let merged = Factor::R {
                    from: x.clone(),
                    to: b.clone(),
                    via: g2.compose(g1)?,
                };
                w[i] = merged;
                w.remove(i + 1);
                return Ok(true);
            }
            // (d) F·F → ζ₈^τ · F with the exact Kashiwara index of the three
            // Lagrangians (all in the common seed space).
            (Factor::F { from: a, to: b }, Factor::F { from: x, .. }) => {
                let space = a.space();
                let tau = kashiwara_index(
                    &space,
                    &x.decomp.lagrangian,
                    &a.decomp.lagrangian,
                    &b.decomp.lagrangian,
                )?;
                *phase = phase.mul(&Phase::eighth(tau));
                let merged = Factor::F { from: x.clone(), to: b.clone() };
                w[i] = merged;
                w.remove(i + 1);
                return Ok(true);
            }
            _ => {}
        }
    }
    Ok(false)
}

fn phi_parts(f: &Factor) -> Option<(&SPtObject, &LinearForm, Sign)> {
    match f {
        Factor::Phi { object, argument, exponent } => Some((object, argument, *exponent)),
        _ => None,
    }
}

/// Rules (f)+(g): cancel an inverse Φ pair, possibly through a run of
/// intermediate Φ factors whose arguments all commute with the cancelled one.
fn phi_cancel_step(w: &mut Vec<Factor>) -> bool {
    for i in 0..w.len() {
        let Some((obj, arg, exp)) = phi_parts(&w[i]) else { continue };
        let space = obj.space();
        let a = arg.clone();
        let s = exp;
        let mut j = i + 1;
        while j < w.len() {
            let Some((_, arg_j, exp_j)) = phi_parts(&w[j]) else { break };
            if *arg_j == a && exp_j == s.flip() {
                w.remove(j);
                w.remove(i);
                return true;
            }
            if LinearForm::commutator(&space, &a, arg_j).is_zero() {
                j += 1;
            } else {
                break;
            }
        }
    }
    false
}

/// Rule (h): directed pentagon patterns on five consecutive Φ factors with
/// B(p,q) = 1, in the two orientations produced by the groupoid pentagons.
fn pentagon_step(w: &mut Vec<Factor>) -> bool {
    if w.len() < 5 {
        return false;
    }
    for i in 0..=w.len() - 5 {
        let window: Option<Vec<_>> = w[i..i + 5].iter().map(phi_parts).collect();
        let Some(win) = window else { continue };
        let space = win[0].0.space();
        let args: Vec<&LinearForm> = win.iter().map(|t| t.1).collect();
        let exps: Vec<Sign> = win.iter().map(|t| t.2).collect();
        use Sign::{Minus as M, Plus as P};
        // Φ(p)Φ(q)Φ(p)⁻¹Φ(p+q)⁻¹Φ(q)⁻¹ with B(p,q) = 1.
        let direct = exps == [P, P, M, M, M]
            && args[2] == args[0]
            && args[4] == args[1]
            && *args[3] == args[0].add(args[1])
            && LinearForm::commutator(&space, args[0], args[1]) == rat(1);
        // Φ(q)Φ(p+q)Φ(p)Φ(q)⁻¹Φ(p)⁻¹ with B(p,q) = 1.
        let reversed = exps == [P, P, P, M, M]
            && args[3] == args[0]
            && args[4] == args[2]
            && *args[1] == args[0].add(args[2])
            && LinearForm::commutator(&space, args[2], args[0]) == rat(1);
        if direct || reversed {
            w.drain(i..i + 5);
            return true;
        }
    }
    false
}

/// Full normalization: rules (a)–(e) to a fixed point, interleaved with Φ
/// cancellation (f)(g) and the directed pentagon matcher (h), until nothing
/// applies. Deterministic by fixed rule order and left-to-right scanning.
pub fn normalize(word: Vec<Factor>) -> Result<(Phase, Vec<Factor>), PhaseError> {
    let (mut phase, mut w) = push_monomials(word)?;
    loop {
        if structural_step(&mut w, &mut phase)? {
            continue;
        }
        if phi_cancel_step(&mut w) {
            continue;
        }
        if pentagon_step(&mut w) {
            continue;
        }
        break;
    }
    Ok((phase, w))
}

/// Phase constant of a groupoid loop; errors with the stuck word if the
/// rewrite system cannot reduce it to a scalar.
pub fn phase_of_loop(base: &SPtObject, moves: &[LoopMove]) -> Result<Phase, PhaseError> {
    let word = loop_word(base, moves)?;
    let (phase, residual) = normalize(word)?;
    if residual.is_empty() {
        Ok(phase)
    } else {
        Err(PhaseError::IrreducibleResidual {
            phase,
            residual: word_summary(&residual),
        })
    }
}

/// The Φ arguments (with exponents) of a word, in order — used to inspect
/// the conjugated arguments after the monomial stage.
pub fn phi_arguments(word: &[Factor]) -> Vec<(LinearForm, Sign)> {
    word.iter()
        .filter_map(|f| phi_parts(f).map(|(_, a, s)| (a.clone(), s)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed_surface::Triangulation;
    use crate::symplectic_core::constrained_decomposition;

    fn pentagon_seed() -> Seed {
        Seed::new(vec![0, 1], vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    fn square_seed() -> Seed {
        Seed::new(
            vec![0, 1, 2],
            vec![vec![0, 0, 1], vec![0, 0, 1], vec![-1, -1, 0]],
        )
        .unwrap()
    }

    fn torus_base() -> SPtObject {
        SPtObject::canonical(Seed::from_triangulation(
            &Triangulation::standard(1, 1).unwrap(),
        ))
        .unwrap()
    }

    fn flip(k: u32, sign: Sign) -> LoopMove {
        LoopMove::Flip { k, sign, decomp: None }
    }

    #[test]
    fn twice_flip_loop_is_scalar_with_zero_alpha() {
        for base in [
            torus_base(),
            SPtObject::canonical(pentagon_seed()).unwrap(),
        ] {
            for &k in &base.seed.labels.clone() {
                let phase =
                    phase_of_loop(&base, &[flip(k, Sign::Plus), flip(k, Sign::Minus)]).unwrap();
                assert_eq!(phase.alpha_pow, 0);
                assert!(phase.eighth_pow.is_some());
            }
        }
    }

    #[test]
    fn square_loop_is_scalar_with_zero_alpha() {
        let base = SPtObject::canonical(square_seed()).unwrap();
        let moves = [
            flip(0, Sign::Plus),
            flip(1, Sign::Plus),
            flip(0, Sign::Minus),
            flip(1, Sign::Minus),
        ];
        let phase = phase_of_loop(&base, &moves).unwrap();
        assert_eq!(phase.alpha_pow, 0);
        assert!(phase.eighth_pow.is_some());
    }

    #[test]
    fn pentagon_loop_alpha_is_minus_one() {
        let base = SPtObject::canonical(pentagon_seed()).unwrap();
        let swap = BTreeMap::from([(0u32, 1u32), (1, 0)]);
        let moves = [
            flip(0, Sign::Plus),
            flip(1, Sign::Plus),
            flip(0, Sign::Minus),
            flip(1, Sign::Minus),
            flip(0, Sign::Minus),
            LoopMove::Perm { sigma: swap, decomp: None },
        ];
        let phase = phase_of_loop(&base, &moves).unwrap();
        assert_eq!(phase.alpha_pow, -1);
        assert!(phase.eighth_pow.is_some());
    }

    #[test]
    fn pentagon_opposite_sign_case_alpha_is_plus_one() {
        // ε_01 = −1 case: signs (+,+,+,−,−), then the relabel factor.
        let seed = Seed::new(vec![0, 1], vec![vec![0, -1], vec![1, 0]]).unwrap();
        let base = SPtObject::canonical(seed).unwrap();
        let swap = BTreeMap::from([(0u32, 1u32), (1, 0)]);
        let moves = [
            flip(0, Sign::Plus),
            flip(1, Sign::Plus),
            flip(0, Sign::Plus),
            flip(1, Sign::Minus),
            flip(0, Sign::Minus),
            LoopMove::Perm { sigma: swap, decomp: None },
        ];
        let phase = phase_of_loop(&base, &moves).unwrap();
        assert_eq!(phase.alpha_pow, 1);
        assert!(phase.eighth_pow.is_some());
    }

    #[test]
    fn pentagon_five_phi_arguments_are_the_worked_ones() {
        let base = SPtObject::canonical(pentagon_seed()).unwrap();
        let swap = BTreeMap::from([(0u32, 1u32), (1, 0)]);
        let moves = [
            flip(0, Sign::Plus),
            flip(1, Sign::Plus),
            flip(0, Sign::Minus),
            flip(1, Sign::Minus),
            flip(0, Sign::Minus),
            LoopMove::Perm { sigma: swap, decomp: None },
        ];
        let word = loop_word(&base, &moves).unwrap();
        let (_, pushed) = push_monomials(word).unwrap();
        let args = phi_arguments(&pushed);
        let xi = LinearForm::basis(0);
        let xj = LinearForm::basis(1);
        let expected = [
            (xi.clone(), Sign::Plus),
            (xj.clone(), Sign::Plus),
            (xi.clone(), Sign::Minus),
            (xi.add(&xj), Sign::Minus),
            (xj.clone(), Sign::Minus),
        ];
        assert_eq!(args, expected);
    }

    #[test]
    fn perm_identity_and_roundtrip() {
        let base = torus_base();
        let id = BTreeMap::new();
        let phase = phase_of_loop(&base, &[LoopMove::Perm { sigma: id, decomp: None }]).unwrap();
        assert_eq!(phase, Phase::one());
        let sigma = BTreeMap::from([(0u32, 2u32), (2, 0)]);
        let phase = phase_of_loop(
            &base,
            &[
                LoopMove::Perm { sigma: sigma.clone(), decomp: None },
                LoopMove::Perm { sigma, decomp: None },
            ],
        )
        .unwrap();
        assert_eq!(phase.alpha_pow, 0);
        assert!(phase.eighth_pow.is_some());
    }

    #[test]
    fn f_triangle_loop_gives_kashiwara_index() {
        let base = SPtObject::canonical(pentagon_seed()).unwrap();
        let space = base.space();
        let d1 = base.decomp.clone();
        let d2 = constrained_decomposition(&space, &[rat(0), rat(1)]).unwrap();
        let d3 = constrained_decomposition(&space, &[rat(1), rat(1)]).unwrap();
        let tau = kashiwara_index(
            &space,
            &d1.lagrangian,
            &d2.lagrangian,
            &d3.lagrangian,
        )
        .unwrap();
        assert_eq!(tau, -1);
        // Traverse D1 → D3 → D2 → D1; the two F·F merges yield exactly
        // ζ₈^{τ(ℓ2,ℓ3,ℓ1)} = ζ₈^{τ(ℓ1,ℓ2,ℓ3)}.
        let moves = [
            LoopMove::DecompChange { decomp: d3 },
            LoopMove::DecompChange { decomp: d2 },
            LoopMove::DecompChange { decomp: d1 },
        ];
        let phase = phase_of_loop(&base, &moves).unwrap();
        assert_eq!(phase.alpha_pow, 0);
        assert_eq!(phase.eighth_pow, Some(tau.rem_euclid(8)));
    }

    #[test]
    fn conjugation_loop_is_scalar() {
        // P_σ K_{σ(k)} P_{σ⁻¹} against K_k, closed up as
        // K_k^+ · P_σ · K_{σ(k)}^− · P_{σ⁻¹}.
        let base = torus_base();
        let sigma = BTreeMap::from([(0u32, 1u32), (1, 0)]);
        let moves = [
            flip(0, Sign::Plus),
            LoopMove::Perm { sigma: sigma.clone(), decomp: None },
            flip(1, Sign::Minus),
            LoopMove::Perm { sigma, decomp: None },
        ];
        let phase = phase_of_loop(&base, &moves).unwrap();
        assert_eq!(phase.alpha_pow, 0);
        assert!(phase.eighth_pow.is_some());
    }

    #[test]
    fn decomposition_change_covariance() {
        // The same pentagon loop over a different decomposition family still
        // reduces to a scalar with the same α exponent.
        let seed = pentagon_seed();
        let space = SkewSpace::from_epsilon(&seed.labels, &seed.epsilon);
        let alt = constrained_decomposition(&space, &[rat(1), rat(3)]).unwrap();
        let base = SPtObject::new(seed, alt).unwrap();
        let swap = BTreeMap::from([(0u32, 1u32), (1, 0)]);
        let moves = [
            flip(0, Sign::Plus),
            flip(1, Sign::Plus),
            flip(0, Sign::Minus),
            flip(1, Sign::Minus),
            flip(0, Sign::Minus),
            LoopMove::Perm { sigma: swap, decomp: None },
        ];
        let phase = phase_of_loop(&base, &moves).unwrap();
        assert_eq!(phase.alpha_pow, -1);
        assert!(phase.eighth_pow.is_some());
    }

    #[test]
    fn commutation_relations_exact() {
        for seed in [pentagon_seed(), square_seed(), torus_base().seed] {
            let space = SkewSpace::from_epsilon(&seed.labels, &seed.epsilon);
            for &e in &seed.labels {
                for &f in &seed.labels {
                    let c = LinearForm::commutator(
                        &space,
                        &LinearForm::basis(e),
                        &LinearForm::basis(f),
                    );
                    let ei = seed.index_of(e).unwrap();
                    let fi = seed.index_of(f).unwrap();
                    assert_eq!(c, rat(seed.epsilon[ei][fi]));
                }
            }
        }
    }

    #[test]
    fn unclosed_loop_rejected() {
        let base = torus_base();
        let err = phase_of_loop(&base, &[flip(0, Sign::Plus)]).unwrap_err();
        assert!(matches!(err, PhaseError::LoopNotClosed(_)));
    }

    #[test]
    fn phase_algebra() {
        let p = Phase::alpha(2).mul(&Phase::eighth(5)).mul(&Phase::eighth(5));
        assert_eq!(p, Phase { alpha_pow: 2, eighth_pow: Some(2) });
        let q = p.mul(&Phase::indeterminate());
        assert_eq!(q.eighth_pow, None);
        assert_eq!(q.alpha_pow, 2);
        assert_eq!(p.forget_eighth().eighth_pow, None);
    }
}
