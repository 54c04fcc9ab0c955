//! Relation-verification harness for the symplectic Ptolemy groupoid:
//! loop specifications, replay, the standard relation loops of a seed, and a
//! parallel verifier driving the phase engine over all of them.

use crate::phase_calculus::{
    loop_objects, phase_of_loop, LoopMove, Phase, PhaseError, SPtObject,
};
use crate::ratlin::{rat_from_str, rat_to_string, Rat};
use crate::seed_surface::{Seed, SurfaceError, Triangulation};
use crate::symplectic_core::{
    canonical_decomposition, constrained_decomposition, SkewSpace, Subspace,
    SymplecticDecomposition,
};
use crate::tropical_maps::Sign;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupoidError {
    #[error("step {0} is inapplicable: {1}")]
    BrokenChain(usize, String),
    #[error("loop endpoint differs from the base object")]
    NotALoop,
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("invalid loop data: {0}")]
    Invalid(String),
}

/// A loop in the symplectic Ptolemy groupoid: a base object and a list of
/// elementary moves expected to return to it.
#[derive(Clone, Debug)]
pub struct LoopSpec {
    pub base: SPtObject,
    pub steps: Vec<LoopMove>,
}

impl LoopSpec {
    /// Replay the chain of objects visited by the loop.
    pub fn replay(&self) -> Result<Vec<SPtObject>, GroupoidError> {
        let objects = loop_objects(&self.base, &self.steps).map_err(|e| match e {
            PhaseError::Surface(s) => GroupoidError::BrokenChain(0, s.to_string()),
            other => GroupoidError::Phase(other),
        })?;
        if objects.last() != Some(&self.base) {
            return Err(GroupoidError::NotALoop);
        }
        Ok(objects)
    }

    pub fn phase(&self) -> Result<Phase, GroupoidError> {
        Ok(phase_of_loop(&self.base, &self.steps)?)
    }
}

/// The relation family a standard loop instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopKind {
    TwiceFlip,
    Square,
    /// Pentagon with ε_ij = 1, signs (+,+,−,−,−).
    PentagonPlus,
    /// Pentagon with ε_ij = −1, signs (+,+,+,−,−).
    PentagonMinus,
    PermIdentity,
    FTriangle,
    Conjugation,
    CompatibilitySquare,
}

impl LoopKind {
    /// The α exponent every loop of this kind must produce.
    pub fn expected_alpha(self) -> i64 {
        match self {
            LoopKind::PentagonPlus => -1,
            LoopKind::PentagonMinus => 1,
            _ => 0,
        }
    }
}

/// A named standard loop.
#[derive(Clone, Debug)]
pub struct NamedLoop {
    pub name: String,
    pub kind: LoopKind,
    pub spec: LoopSpec,
}

fn flip(k: u32, sign: Sign) -> LoopMove {
    LoopMove::Flip { k, sign, decomp: None }
}

/// Distinct decompositions of a space: the canonical one plus constrained
/// ones seeded by non-radical standard basis vectors.
fn sample_decompositions(space: &SkewSpace, max: usize) -> Vec<SymplecticDecomposition> {
    let mut out = Vec::new();
    if let Ok(d) = canonical_decomposition(space) {
        out.push(d);
    }
    let n = space.dim();
    for i in 0..n {
        if out.len() >= max {
            break;
        }
        let mut v = vec![Rat::from_integer(0.into()); n];
        v[i] = Rat::from_integer(1.into());
        // A shifted second component makes the sample family richer.
        if i + 1 < n {
            v[i + 1] = Rat::from_integer(1.into());
        }
        if let Ok(d) = constrained_decomposition(space, &v) {
            if !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

/// All standard relation loops instantiable at this seed: twice-flips,
/// squares (ε_ij = 0), pentagons (ε_ij = ±1) closed by P_(ij), permutation
/// identities, F-triangles over sampled decompositions, flip/permutation
/// conjugation loops, and flip/decomposition-change compatibility squares.
pub fn standard_relation_loops(seed: &Seed) -> Result<Vec<NamedLoop>, GroupoidError> {
    let base = SPtObject::canonical(seed.clone())?;
    let space = base.space();
    let mut loops = Vec::new();

    // Twice-flip at every label.
    for &k in &seed.labels {
        loops.push(NamedLoop {
            name: format!("twice_flip_k{k}"),
            kind: LoopKind::TwiceFlip,
            spec: LoopSpec {
                base: base.clone(),
                steps: vec![flip(k, Sign::Plus), flip(k, Sign::Minus)],
            },
        });
    }

    // Squares and pentagons per label pair.
    let n = seed.labels.len();
    for a in 0..n {
        for b in a + 1..n {
            let (i, j) = (seed.labels[a], seed.labels[b]);
            let eps = seed.epsilon[a][b];
            if eps == 0 {
                loops.push(NamedLoop {
                    name: format!("square_{i}_{j}"),
                    kind: LoopKind::Square,
                    spec: LoopSpec {
                        base: base.clone(),
                        steps: vec![
                            flip(i, Sign::Plus),
                            flip(j, Sign::Plus),
                            flip(i, Sign::Minus),
                            flip(j, Sign::Minus),
                        ],
                    },
                });
            } else if eps.abs() == 1 {
                let swap = BTreeMap::from([(i, j), (j, i)]);
                let (kind, signs) = if eps == 1 {
                    (
                        LoopKind::PentagonPlus,
                        [Sign::Plus, Sign::Plus, Sign::Minus, Sign::Minus, Sign::Minus],
                    )
                } else {
                    (
                        LoopKind::PentagonMinus,
                        [Sign::Plus, Sign::Plus, Sign::Plus, Sign::Minus, Sign::Minus],
                    )
                };
                let ks = [i, j, i, j, i];
                let mut steps: Vec<LoopMove> = ks
                    .iter()
                    .zip(signs)
                    .map(|(&k, sign)| flip(k, sign))
                    .collect();
                steps.push(LoopMove::Perm { sigma: swap, decomp: None });
                loops.push(NamedLoop {
                    name: format!("pentagon_{i}_{j}_eps{eps}"),
                    kind,
                    spec: LoopSpec { base: base.clone(), steps },
                });
            }
        }
    }

    // Permutation identities: P_γ P_σ closed by P_{(γ∘σ)⁻¹}.
    if n >= 2 {
        let labels = &seed.labels;
        // σ: cyclic shift, γ: swap of the first two labels.
        let sigma: BTreeMap<u32, u32> = labels
            .iter()
            .zip(labels.iter().cycle().skip(1))
            .map(|(&a, &b)| (a, b))
            .collect();
        let gamma = BTreeMap::from([(labels[0], labels[1]), (labels[1], labels[0])]);
        let compose = |f: &BTreeMap<u32, u32>, g: &BTreeMap<u32, u32>| -> BTreeMap<u32, u32> {
            labels
                .iter()
                .map(|&x| {
                    let gx = *g.get(&x).unwrap_or(&x);
                    (x, *f.get(&gx).unwrap_or(&gx))
                })
                .collect()
        };
        let total = compose(&gamma, &sigma);
        let inverse: BTreeMap<u32, u32> = total.iter().map(|(&a, &b)| (b, a)).collect();
        loops.push(NamedLoop {
            name: "perm_identity".into(),
            kind: LoopKind::PermIdentity,
            spec: LoopSpec {
                base: base.clone(),
                steps: vec![
                    LoopMove::Perm { sigma, decomp: None },
                    LoopMove::Perm { sigma: gamma, decomp: None },
                    LoopMove::Perm { sigma: inverse, decomp: None },
                ],
            },
        });
    }

    // F-triangles over sampled decompositions (needs a non-degenerate form).
    let ds = sample_decompositions(&space, 3);
    if ds.len() == 3 {
        loops.push(NamedLoop {
            name: "f_triangle".into(),
            kind: LoopKind::FTriangle,
            spec: LoopSpec {
                base: SPtObject::new(seed.clone(), ds[0].clone())?,
                steps: vec![
                    LoopMove::DecompChange { decomp: ds[2].clone() },
                    LoopMove::DecompChange { decomp: ds[1].clone() },
                    LoopMove::DecompChange { decomp: ds[0].clone() },
                ],
            },
        });
    }

    // Conjugation loops K_k P_σ K_{σ(k)} P_{σ⁻¹} for the first label pair.
    if n >= 2 {
        let (i, j) = (seed.labels[0], seed.labels[1]);
        let swap = BTreeMap::from([(i, j), (j, i)]);
        loops.push(NamedLoop {
            name: format!("conjugation_{i}_{j}"),
            kind: LoopKind::Conjugation,
            spec: LoopSpec {
                base: base.clone(),
                steps: vec![
                    flip(i, Sign::Plus),
                    LoopMove::Perm { sigma: swap.clone(), decomp: None },
                    flip(j, Sign::Minus),
                    LoopMove::Perm { sigma: swap, decomp: None },
                ],
            },
        });
    }

    // Compatibility squares: a twice-flip threaded through alternative
    // decompositions on both sides.
    if let Some(&k) = seed.labels.first() {
        let mutated = seed.mutate(k)?;
        let mspace = SkewSpace::from_epsilon(&mutated.labels, &mutated.epsilon);
        let alts = sample_decompositions(&mspace, 2);
        let homes = sample_decompositions(&space, 2);
        if alts.len() == 2 && homes.len() == 2 {
            loops.push(NamedLoop {
                name: format!("compat_square_k{k}"),
                kind: LoopKind::CompatibilitySquare,
                spec: LoopSpec {
                    base: base.clone(),
                    steps: vec![
                        flip(k, Sign::Plus),
                        LoopMove::DecompChange { decomp: alts[1].clone() },
                        LoopMove::Flip {
                            k,
                            sign: Sign::Minus,
                            decomp: Some(homes[1].clone()),
                        },
                        LoopMove::DecompChange { decomp: base.decomp.clone() },
                    ],
                },
            });
        }
    }

    Ok(loops)
}

/// Verification outcome for one standard loop.
#[derive(Clone, Debug, Serialize)]
pub struct LoopReport {
    pub name: String,
    pub kind: LoopKind,
    pub alpha_pow: i64,
    pub eighth_pow: Option<i64>,
    pub ok: bool,
    pub detail: String,
}

fn verify_one(l: &NamedLoop) -> LoopReport {
    match l.spec.phase() {
        Ok(phase) => {
            let ok = phase.alpha_pow == l.kind.expected_alpha() && phase.eighth_pow.is_some();
            LoopReport {
                name: l.name.clone(),
                kind: l.kind,
                alpha_pow: phase.alpha_pow,
                eighth_pow: phase.eighth_pow,
                ok,
                detail: if ok {
                    "reduced to a scalar".into()
                } else {
                    format!(
                        "alpha {} (expected {}) or inexact eighth power",
                        phase.alpha_pow,
                        l.kind.expected_alpha()
                    )
                },
            }
        }
        Err(e) => LoopReport {
            name: l.name.clone(),
            kind: l.kind,
            alpha_pow: 0,
            eighth_pow: None,
            ok: false,
            detail: e.to_string(),
        },
    }
}

/// Number of worker threads: PTOLEMY_PHASE_THREADS if set, else the
/// available parallelism, capped by the number of loops.
fn thread_count(jobs: usize) -> usize {
    let cap = std::env::var("PTOLEMY_PHASE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        });
    cap.min(jobs).max(1)
}

/// Run the phase engine over every standard loop of the seed, in parallel.
pub fn verify_relations(seed: &Seed) -> Result<Vec<LoopReport>, GroupoidError> {
    let loops = standard_relation_loops(seed)?;
    let workers = thread_count(loops.len());
    if workers <= 1 || loops.len() <= 1 {
        return Ok(loops.iter().map(verify_one).collect());
    }
    let mut reports: Vec<Option<LoopReport>> = vec![None; loops.len()];
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<&mut Option<LoopReport>>> =
        reports.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= loops.len() {
                    break;
                }
                **slots[i].lock().unwrap() = Some(verify_one(&loops[i]));
            });
        }
    });
    Ok(reports.into_iter().map(|r| r.expect("all slots filled")).collect())
}

/// Relabel a whole loop by a global permutation γ (mapping-class-group-style
/// action restricted to relabelings): base seed, flip labels, and conjugated
/// permutations; the phase must be unchanged.
pub fn relabel_loop(spec: &LoopSpec, gamma: &BTreeMap<u32, u32>) -> Result<LoopSpec, GroupoidError> {
    let labels = spec.base.seed.labels.clone();
    // Replay the original chain so every relabeled step can carry the
    // permuted decomposition explicitly; defaulting to canonical ones would
    // pick different intermediate objects in the new coordinate order.
    let chain = loop_objects(&spec.base, &spec.steps)?;
    let g = |x: u32| *gamma.get(&x).unwrap_or(&x);
    let base_seed = spec
        .base
        .seed
        .relabel(gamma)
        .map_err(|e| GroupoidError::Invalid(e.to_string()))?;
    // The decomposition lives on coordinates indexed by sorted labels; the
    // relabeled coordinates permute accordingly.
    let perm_vec = |v: &[Rat]| -> Vec<Rat> {
        let mut out = vec![Rat::from_integer(0.into()); v.len()];
        for (idx, &l) in labels.iter().enumerate() {
            let new_idx = labels.binary_search(&g(l)).expect("permutation within labels");
            out[new_idx] = v[idx].clone();
        }
        out
    };
    let perm_decomp = |d: &SymplecticDecomposition| SymplecticDecomposition {
        lagrangian: Subspace::from_span(
            &d.lagrangian.basis().iter().map(|v| perm_vec(v)).collect::<Vec<_>>(),
        ),
        supplementary: d.supplementary.iter().map(|v| perm_vec(v)).collect(),
    };
    let base = SPtObject::new(base_seed, perm_decomp(&spec.base.decomp))?;
    let steps = spec
        .steps
        .iter()
        .enumerate()
        .map(|(i, mv)| {
            let arrived = perm_decomp(&chain[i + 1].decomp);
            match mv {
                LoopMove::Flip { k, sign, .. } => LoopMove::Flip {
                    k: g(*k),
                    sign: *sign,
                    decomp: Some(arrived),
                },
                LoopMove::Perm { sigma, .. } => LoopMove::Perm {
                    sigma: labels
                        .iter()
                        .map(|&x| (g(x), g(*sigma.get(&x).unwrap_or(&x))))
                        .collect(),
                    decomp: Some(arrived),
                },
                LoopMove::DecompChange { .. } => LoopMove::DecompChange { decomp: arrived },
            }
        })
        .collect();
    Ok(LoopSpec { base, steps })
}

/// Bounded breadth-first flip search between triangulations (small surfaces
/// only); returns the flip sequence if one exists within `max_depth`.
pub fn flip_path_bfs(
    from: &Triangulation,
    to: &Triangulation,
    max_depth: usize,
) -> Option<Vec<u32>> {
    let key = |t: &Triangulation| (t.triangles.clone(), t.endpoints.clone());
    let mut seen = std::collections::BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(key(from));
    queue.push_back((from.clone(), Vec::new()));
    while let Some((t, path)) = queue.pop_front() {
        if t == *to {
            return Some(path);
        }
        if path.len() >= max_depth {
            continue;
        }
        for &k in &t.edges.clone() {
            if let Ok(next) = t.flip(k) {
                if seen.insert(key(&next)) {
                    let mut p = path.clone();
                    p.push(k);
                    queue.push_back((next, p));
                }
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// JSON wire formats
// ---------------------------------------------------------------------------

/// JSON form of a symplectic decomposition, rationals as "p/q" strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub lagrangian: Vec<Vec<String>>,
    pub supplementary: Vec<Vec<String>>,
}

impl DecompositionJson {
    pub fn from_decomposition(d: &SymplecticDecomposition) -> Self {
        let ser = |rows: &[Vec<Rat>]| {
            rows.iter()
                .map(|v| v.iter().map(rat_to_string).collect())
                .collect()
        };
        DecompositionJson {
            lagrangian: ser(d.lagrangian.basis()),
            supplementary: ser(&d.supplementary),
        }
    }

    pub fn to_decomposition(&self) -> Result<SymplecticDecomposition, GroupoidError> {
        let de = |rows: &[Vec<String>]| -> Result<Vec<Vec<Rat>>, GroupoidError> {
            rows.iter()
                .map(|v| {
                    v.iter()
                        .map(|s| {
                            rat_from_str(s).ok_or_else(|| {
                                GroupoidError::Invalid(format!("bad rational {s:?}"))
                            })
                        })
                        .collect()
                })
                .collect()
        };
        Ok(SymplecticDecomposition {
            lagrangian: Subspace::from_span(&de(&self.lagrangian)?),
            supplementary: de(&self.supplementary)?,
        })
    }
}

/// JSON form of one loop move:
/// `{"flip": k, "sign": "+"}`, `{"perm": {"0": 1, ...}}`, or
/// `{"decomp_change": {...}}`; flips and perms accept an optional
/// `"decomp"` for the arrived-at object.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LoopMoveJson {
    Flip {
        flip: u32,
        sign: Sign,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        decomp: Option<DecompositionJson>,
    },
    Perm {
        perm: BTreeMap<String, u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        decomp: Option<DecompositionJson>,
    },
    DecompChange { decomp_change: DecompositionJson },
}

impl LoopMoveJson {
    pub fn from_move(mv: &LoopMove) -> Self {
        match mv {
            LoopMove::Flip { k, sign, decomp } => LoopMoveJson::Flip {
                flip: *k,
                sign: *sign,
                decomp: decomp.as_ref().map(DecompositionJson::from_decomposition),
            },
            LoopMove::Perm { sigma, decomp } => LoopMoveJson::Perm {
                perm: sigma.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                decomp: decomp.as_ref().map(DecompositionJson::from_decomposition),
            },
            LoopMove::DecompChange { decomp } => LoopMoveJson::DecompChange {
                decomp_change: DecompositionJson::from_decomposition(decomp),
            },
        }
    }

    pub fn to_move(&self) -> Result<LoopMove, GroupoidError> {
        Ok(match self {
            LoopMoveJson::Flip { flip, sign, decomp } => LoopMove::Flip {
                k: *flip,
                sign: *sign,
                decomp: decomp.as_ref().map(|d| d.to_decomposition()).transpose()?,
            },
            LoopMoveJson::Perm { perm, decomp } => LoopMove::Perm {
                sigma: perm
                    .iter()
                    .map(|(k, v)| {
                        k.parse::<u32>()
                            .map(|k| (k, *v))
                            .map_err(|e| GroupoidError::Invalid(e.to_string()))
                    })
                    .collect::<Result<_, _>>()?,
                decomp: decomp.as_ref().map(|d| d.to_decomposition()).transpose()?,
            },
            LoopMoveJson::DecompChange { decomp_change } => LoopMove::DecompChange {
                decomp: decomp_change.to_decomposition()?,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::rat;

    fn torus_seed() -> Seed {
        Seed::from_triangulation(&Triangulation::standard(1, 1).unwrap())
    }

    fn pentagon_seed() -> Seed {
        Seed::new(vec![0, 1], vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn replay_and_closure() {
        let base = SPtObject::canonical(torus_seed()).unwrap();
        let spec = LoopSpec {
            base: base.clone(),
            steps: vec![flip(0, Sign::Plus), flip(0, Sign::Minus)],
        };
        let objs = spec.replay().unwrap();
        assert_eq!(objs.len(), 3);
        assert_eq!(objs[0], objs[2]);
        let open = LoopSpec { base, steps: vec![flip(0, Sign::Plus)] };
        assert!(matches!(open.replay(), Err(GroupoidError::NotALoop)));
    }

    #[test]
    fn torus_standard_loops() {
        let loops = standard_relation_loops(&torus_seed()).unwrap();
        // All |ε_ij| = 2: no squares, no pentagons.
        assert_eq!(
            loops.iter().filter(|l| l.kind == LoopKind::TwiceFlip).count(),
            3
        );
        assert!(!loops.iter().any(|l| matches!(
            l.kind,
            LoopKind::Square | LoopKind::PentagonPlus | LoopKind::PentagonMinus
        )));
    }

    #[test]
    fn pentagon_seed_has_pentagon_loop() {
        let loops = standard_relation_loops(&pentagon_seed()).unwrap();
        assert!(loops.iter().any(|l| l.kind == LoopKind::PentagonPlus));
    }

    #[test]
    fn mixed_seed_square_and_pentagon() {
        let seed = Seed::new(
            vec![0, 1, 2],
            vec![vec![0, 0, 1], vec![0, 0, 1], vec![-1, -1, 0]],
        )
        .unwrap();
        let loops = standard_relation_loops(&seed).unwrap();
        assert!(loops.iter().any(|l| l.name == "square_0_1"));
        assert!(loops.iter().any(|l| l.kind == LoopKind::PentagonPlus));
        for r in loops.iter().map(verify_one) {
            assert!(r.ok, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn verify_relations_on_small_seeds() {
        for seed in [torus_seed(), pentagon_seed()] {
            let reports = verify_relations(&seed).unwrap();
            assert!(!reports.is_empty());
            for r in &reports {
                assert!(r.ok, "{}: {}", r.name, r.detail);
            }
        }
    }

    #[test]
    fn thread_cap_respected() {
        std::env::set_var("PTOLEMY_PHASE_THREADS", "1");
        let reports = verify_relations(&pentagon_seed()).unwrap();
        std::env::remove_var("PTOLEMY_PHASE_THREADS");
        assert!(reports.iter().all(|r| r.ok));
    }

    #[test]
    fn mcg_relabel_invariance() {
        let loops = standard_relation_loops(&pentagon_seed()).unwrap();
        let gamma = BTreeMap::from([(0u32, 1u32), (1, 0)]);
        for l in loops {
            let relabeled = relabel_loop(&l.spec, &gamma).unwrap();
            let p1 = l.spec.phase().unwrap();
            let p2 = relabeled.phase().unwrap();
            assert_eq!(p1.alpha_pow, p2.alpha_pow, "{}", l.name);
            assert_eq!(p1.eighth_pow, p2.eighth_pow, "{}", l.name);
        }
    }

    #[test]
    fn bfs_finds_flip_paths() {
        let t = Triangulation::standard(1, 1).unwrap();
        assert_eq!(flip_path_bfs(&t, &t, 3), Some(vec![]));
        let t2 = t.flip(0).unwrap();
        let path = flip_path_bfs(&t, &t2, 3).unwrap();
        assert!(!path.is_empty());
    }

    #[test]
    fn loop_json_roundtrip() {
        let d = canonical_decomposition(&SkewSpace::from_epsilon(
            &[0, 1],
            &[vec![0, 1], vec![-1, 0]],
        ))
        .unwrap();
        let moves = vec![
            LoopMove::Flip { k: 0, sign: Sign::Plus, decomp: None },
            LoopMove::Perm {
                sigma: BTreeMap::from([(0, 1), (1, 0)]),
                decomp: Some(d.clone()),
            },
            LoopMove::DecompChange { decomp: d },
        ];
        let wire: Vec<LoopMoveJson> = moves.iter().map(LoopMoveJson::from_move).collect();
        let text = serde_json::to_string(&wire).unwrap();
        assert!(text.contains("\"flip\":0") && text.contains("decomp_change"));
        let back: Vec<LoopMoveJson> = serde_json::from_str(&text).unwrap();
        let back_moves: Vec<LoopMove> =
            back.iter().map(|m| m.to_move().unwrap()).collect();
        assert_eq!(back_moves, moves);
    }
}
