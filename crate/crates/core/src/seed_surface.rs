//! Ideal triangulations of punctured surfaces and abstract cluster seeds.
//!
//! A [`Triangulation`] is pure gluing data: oriented triangles listed as
//! counterclockwise triples of edge labels, with every edge appearing in
//! exactly two triangle slots. Vertices (ideal points = punctures) are not
//! stored directly; they are recovered as equivalence classes of triangle
//! corners under the orientation-reversing edge gluing, and matched against
//! the declared `endpoints` table at construction time. That corner machinery
//! is what lets [`Triangulation::flip`] compute the endpoints of the new
//! diagonal without any embedded geometry.
//!
//! A [`Seed`] is the abstract counterpart: an ordered label set with a
//! skew-symmetric integer exchange matrix, optionally remembering the
//! triangulation it came from. Matrix mutation ([`mutate_epsilon`]) and the
//! combinatorial flip commute through [`exchange_matrix`]; this is checked
//! exhaustively in tests.
//!
//! Orientation convention: for a counterclockwise triangle `(e0, e1, e2)`,
//! the corner between the consecutive sides `e_i`, `e_{i+1}` contributes
//! `+1` to the corner count `a[e_i][e_{i+1}]` ("`e_i` on the left"). The
//! exchange matrix is `ε = a − aᵀ`. Only the global sign of ε depends on
//! this choice, and the flip/mutation compatibility holds either way.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Edge label.
pub type EdgeId = u32;
/// Puncture label.
pub type PunctureId = u32;

/// Errors from surface and seed combinatorics.
#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("flip at edge {0} touches a self-folded configuration")]
    SelfFoldedFlip(EdgeId),
    #[error("unknown edge label {0}")]
    UnknownEdge(EdgeId),
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("no standard triangulation for genus {0}, punctures {1}")]
    UnsupportedSurface(usize, usize),
}

/// Ideal triangulation of a genus-`g` surface with `s` punctures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    pub genus: usize,
    /// Sorted, distinct puncture ids.
    pub punctures: Vec<PunctureId>,
    /// Sorted, distinct edge labels; matrix rows/columns follow this order.
    pub edges: Vec<EdgeId>,
    /// Counterclockwise triples of boundary edges.
    pub triangles: Vec<[EdgeId; 3]>,
    /// Unordered endpoint pair of each edge (stored as given).
    pub endpoints: BTreeMap<EdgeId, (PunctureId, PunctureId)>,
    /// Derived: puncture sitting at corner `i` of triangle `t` (the corner at
    /// the tail of side `i`, sides directed counterclockwise).
    corner_vertex: Vec<[PunctureId; 3]>,
}

/// Incidence counts σ^e_p ∈ {0,1,2}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceTable {
    pub sigma: BTreeMap<(EdgeId, PunctureId), u8>,
}

impl IncidenceTable {
    pub fn get(&self, e: EdgeId, p: PunctureId) -> u8 {
        *self.sigma.get(&(e, p)).unwrap_or(&0)
    }
}

/// Minimal union-find over corner indices.
struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Triangulation {
    /// Validate gluing data and derive the corner-vertex table.
    pub fn new(
        genus: usize,
        punctures: Vec<PunctureId>,
        edges: Vec<EdgeId>,
        triangles: Vec<[EdgeId; 3]>,
        endpoints: BTreeMap<EdgeId, (PunctureId, PunctureId)>,
    ) -> Result<Self, SurfaceError> {
        let invalid = |msg: String| SurfaceError::InvalidTriangulation(msg);
        let s = punctures.len();
        if s == 0 {
            return Err(invalid("at least one puncture required".into()));
        }
        if 2 >= 2 * genus + s {
            return Err(invalid(format!(
                "Euler characteristic 2 - 2*{genus} - {s} must be negative"
            )));
        }
        let expected_edges = 6 * genus + 3 * s - 6;
        if edges.len() != expected_edges {
            return Err(invalid(format!(
                "expected {expected_edges} edges for genus {genus}, {s} punctures; got {}",
                edges.len()
            )));
        }
        if !edges.windows(2).all(|w| w[0] < w[1]) {
            return Err(invalid("edge labels must be sorted and distinct".into()));
        }
        if !punctures.windows(2).all(|w| w[0] < w[1]) {
            return Err(invalid("puncture ids must be sorted and distinct".into()));
        }

        // Each edge label must fill exactly two triangle slots.
        let mut occurrences: BTreeMap<EdgeId, Vec<(usize, usize)>> = BTreeMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for (i, e) in tri.iter().enumerate() {
                if !edges.contains(e) {
                    return Err(invalid(format!("triangle {t} uses unknown edge {e}")));
                }
                occurrences.entry(*e).or_default().push((t, i));
            }
        }
        for e in &edges {
            let n = occurrences.get(e).map_or(0, Vec::len);
            if n != 2 {
                return Err(invalid(format!("edge {e} fills {n} triangle slots, need 2")));
            }
        }
        for e in &edges {
            let Some(&(p, q)) = endpoints.get(e) else {
                return Err(invalid(format!("edge {e} has no endpoints entry")));
            };
            if !punctures.contains(&p) || !punctures.contains(&q) {
                return Err(invalid(format!("edge {e} has unknown endpoint")));
            }
        }
        if endpoints.len() != edges.len() {
            return Err(invalid("endpoints table mentions unknown edges".into()));
        }

        // Glue corners. Corner 3t+i is the tail vertex of side i of triangle t;
        // identifying an edge's two occurrences reverses direction (oriented
        // surface), so tail of one occurrence meets head of the other.
        let ncorners = 3 * triangles.len();
        let mut uf = UnionFind::new(ncorners);
        for occ in occurrences.values() {
            let (t1, i1) = occ[0];
            let (t2, i2) = occ[1];
            uf.union(3 * t1 + i1, 3 * t2 + (i2 + 1) % 3);
            uf.union(3 * t1 + (i1 + 1) % 3, 3 * t2 + i2);
        }
        let mut class_of = vec![0usize; ncorners];
        let mut classes: Vec<usize> = Vec::new();
        for c in 0..ncorners {
            let r = uf.find(c);
            if !classes.contains(&r) {
                classes.push(r);
            }
            class_of[c] = r;
        }
        if classes.len() != s {
            return Err(invalid(format!(
                "gluing has {} ideal vertices but {s} punctures were declared",
                classes.len()
            )));
        }
        classes.sort_unstable();

        // Match vertex classes to the declared punctures: for each edge the
        // unordered pair of its corner classes must map to its declared
        // endpoint pair. Solved by backtracking with forward checking; any
        // consistent bijection is accepted (ambiguity only arises from
        // endpoint-preserving symmetries, which are harmless).
        let mut constraints = Vec::new();
        for (e, occ) in &occurrences {
            let (t, i) = occ[0];
            let tail = class_of[3 * t + i];
            let head = class_of[3 * t + (i + 1) % 3];
            let (p, q) = endpoints[e];
            constraints.push((tail, head, p, q));
        }
        let assignment = solve_assignment(&classes, &constraints, &punctures)
            .ok_or_else(|| invalid("endpoints are inconsistent with the gluing".into()))?;

        let corner_vertex = (0..triangles.len())
            .map(|t| {
                [
                    assignment[&class_of[3 * t]],
                    assignment[&class_of[3 * t + 1]],
                    assignment[&class_of[3 * t + 2]],
                ]
            })
            .collect();

        Ok(Triangulation {
            genus,
            punctures,
            edges,
            triangles,
            endpoints,
            corner_vertex,
        })
    }

    /// Position of an edge label in the sorted edge list.
    pub fn edge_index(&self, e: EdgeId) -> Result<usize, SurfaceError> {
        self.edges
            .binary_search(&e)
            .map_err(|_| SurfaceError::UnknownEdge(e))
    }

    /// Exchange matrix ε = a − aᵀ from signed corner counts (see module docs
    /// for the orientation convention).
    pub fn exchange_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.edges.len();
        let mut a = vec![vec![0i64; n]; n];
        for tri in &self.triangles {
            for i in 0..3 {
                let left = self.edge_index(tri[i]).expect("validated edge");
                let right = self.edge_index(tri[(i + 1) % 3]).expect("validated edge");
                a[left][right] += 1;
            }
        }
        let mut eps = vec![vec![0i64; n]; n];
        for e in 0..n {
            for f in 0..n {
                eps[e][f] = a[e][f] - a[f][e];
            }
        }
        eps
    }

    /// Incidence counts σ^e_p from the endpoints table.
    pub fn incidences(&self) -> IncidenceTable {
        let mut sigma = BTreeMap::new();
        for (&e, &(p, q)) in &self.endpoints {
            *sigma.entry((e, p)).or_insert(0u8) += 1;
            *sigma.entry((e, q)).or_insert(0u8) += 1;
        }
        IncidenceTable { sigma }
    }

    /// Flip the diagonal `k` of its adjacent quadrilateral.
    ///
    /// Requires the two triangles adjacent to `k` to be distinct and neither
    /// self-folded. The new diagonal keeps the label `k`; its endpoints are
    /// the two quadrilateral corners opposite the old diagonal, read off the
    /// corner-vertex table.
    pub fn flip(&self, k: EdgeId) -> Result<Triangulation, SurfaceError> {
        self.edge_index(k)?;
        let mut occ = Vec::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for (i, e) in tri.iter().enumerate() {
                if *e == k {
                    occ.push((t, i));
                }
            }
        }
        let [(t1, j1), (t2, j2)] = occ[..] else {
            unreachable!("validated: every edge fills two slots");
        };
        if t1 == t2 {
            return Err(SurfaceError::SelfFoldedFlip(k));
        }
        // Rotate each triangle so k sits in slot 0: sides (k, a, b) / (k, c, d),
        // tail vertices (V0, V1, V2) / (W0, W1, W2).
        let side = |t: usize, j: usize, r: usize| self.triangles[t][(j + r) % 3];
        let vert = |t: usize, j: usize, r: usize| self.corner_vertex[t][(j + r) % 3];
        let (a, b) = (side(t1, j1, 1), side(t1, j1, 2));
        let (c, d) = (side(t2, j2, 1), side(t2, j2, 2));
        if a == b || a == k || b == k || c == d || c == k || d == k {
            return Err(SurfaceError::SelfFoldedFlip(k));
        }
        // Quadrilateral boundary counterclockwise: a, b, c, d; the new diagonal
        // joins the corner between a,b (= V2) to the corner between c,d (= W2),
        // and the two new counterclockwise triangles are (b, c, k), (d, a, k).
        let new_endpoint = (vert(t1, j1, 2), vert(t2, j2, 2));
        let mut triangles = self.triangles.clone();
        triangles[t1] = [b, c, k];
        triangles[t2] = [d, a, k];
        let mut endpoints = self.endpoints.clone();
        endpoints.insert(k, new_endpoint);
        Triangulation::new(
            self.genus,
            self.punctures.clone(),
            self.edges.clone(),
            triangles,
            endpoints,
        )
    }

    /// True if some triangle repeats an edge label. Flip paths are expected
    /// to stay within self-folded-free triangulations; several structural
    /// facts (e.g. puncture-element compatibility of the cluster maps) only
    /// hold there.
    pub fn has_self_folded(&self) -> bool {
        self.triangles
            .iter()
            .any(|t| t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
    }

    /// Rename edge `i` to `sigma(i)`; the edge set (hence the sorted edge
    /// list) is unchanged, so `ε'_{σ(i)σ(j)} = ε_{ij}` indexed by label.
    pub fn relabel(&self, sigma: &BTreeMap<EdgeId, EdgeId>) -> Result<Triangulation, SurfaceError> {
        check_permutation(&self.edges, sigma)?;
        let map = |e: EdgeId| *sigma.get(&e).unwrap_or(&e);
        let triangles = self
            .triangles
            .iter()
            .map(|t| [map(t[0]), map(t[1]), map(t[2])])
            .collect();
        let endpoints = self
            .endpoints
            .iter()
            .map(|(&e, &pq)| (map(e), pq))
            .collect();
        Triangulation::new(
            self.genus,
            self.punctures.clone(),
            self.edges.clone(),
            triangles,
            endpoints,
        )
    }

    /// Standard triangulation for small families: the two-triangle sphere for
    /// `(0, 3)`, a triangulated `4g`-gon with standard side identifications
    /// for `(g ≥ 1, 1)`, and additional punctures inserted into triangle
    /// interiors (each insertion adds one puncture, three edges, two
    /// triangles).
    pub fn standard(genus: usize, s: usize) -> Result<Triangulation, SurfaceError> {
        if s == 0 || 2 >= 2 * genus + s || (genus == 0 && s < 3) {
            return Err(SurfaceError::UnsupportedSurface(genus, s));
        }
        let mut t = if genus == 0 {
            // Thrice-punctured sphere: triangles (0,1,2) and (2,1,0).
            let endpoints = BTreeMap::from([(0, (0, 1)), (1, (1, 2)), (2, (2, 0))]);
            Triangulation::new(0, vec![0, 1, 2], vec![0, 1, 2], vec![[0, 1, 2], [2, 1, 0]], endpoints)?
        } else {
            polygon_surface(genus)?
        };
        let base = if genus == 0 { 3 } else { 1 };
        for _ in base..s {
            t = t.puncture_triangle()?;
        }
        Ok(t)
    }

    /// Insert a new puncture in the interior of the last triangle, splitting
    /// it into three. Used by [`Triangulation::standard`].
    fn puncture_triangle(&self) -> Result<Triangulation, SurfaceError> {
        let t = self
            .triangles
            .iter()
            .rposition(|tri| tri[0] != tri[1] && tri[1] != tri[2] && tri[0] != tri[2])
            .ok_or_else(|| {
                SurfaceError::InvalidTriangulation("no triangle with distinct edges".into())
            })?;
        let [e0, e1, e2] = self.triangles[t];
        let [va, vb, vc] = self.corner_vertex[t];
        let p = self.punctures.iter().max().unwrap() + 1;
        let g0 = self.edges.iter().max().unwrap() + 1; // joins corner A to p
        let g1 = g0 + 1; // joins corner B to p
        let g2 = g0 + 2; // joins corner C to p
        let mut triangles = self.triangles.clone();
        // Sides of triangle t ran A→B→C; the three replacement triangles are
        // (A,B,p), (B,C,p), (C,A,p), all counterclockwise.
        triangles[t] = [e0, g1, g0];
        triangles.push([e1, g2, g1]);
        triangles.push([e2, g0, g2]);
        let mut punctures = self.punctures.clone();
        punctures.push(p);
        punctures.sort_unstable();
        let mut edges = self.edges.clone();
        edges.extend([g0, g1, g2]);
        edges.sort_unstable();
        let mut endpoints = self.endpoints.clone();
        endpoints.insert(g0, (va, p));
        endpoints.insert(g1, (vb, p));
        endpoints.insert(g2, (vc, p));
        Triangulation::new(self.genus, punctures, edges, triangles, endpoints)
    }
}

/// One-punctured genus-g surface from the standard `4g`-gon with side word
/// `a₁b₁a₁⁻¹b₁⁻¹ ⋯`, triangulated by the diagonal fan from vertex 0.
fn polygon_surface(g: usize) -> Result<Triangulation, SurfaceError> {
    let nsides = 4 * g;
    // Polygon side j carries edge label 2m (for a_m, j = 4m or 4m+2) or
    // 2m+1 (for b_m, j = 4m+1 or 4m+3); diagonals 0–j get labels 2g+(j−2).
    let side_label = |j: usize| -> EdgeId {
        let (m, r) = (j / 4, j % 4);
        (2 * m + (r % 2)) as EdgeId
    };
    let diag_label = |j: usize| -> EdgeId { (2 * g + j - 2) as EdgeId };
    // Fan triangle j (1 ≤ j ≤ 4g−2) has vertices (0, j, j+1) with sides
    // δ_j, side_j, δ_{j+1}, where δ_1 and δ_{4g−1} are polygon sides.
    let delta = |j: usize| -> EdgeId {
        if j == 1 {
            side_label(0)
        } else if j == nsides - 1 {
            side_label(nsides - 1)
        } else {
            diag_label(j)
        }
    };
    let triangles: Vec<[EdgeId; 3]> = (1..=nsides - 2)
        .map(|j| [delta(j), side_label(j), delta(j + 1)])
        .collect();
    let edges: Vec<EdgeId> = (0..(6 * g - 3) as EdgeId).collect();
    let endpoints = edges.iter().map(|&e| (e, (0, 0))).collect();
    Triangulation::new(g, vec![0], edges, triangles, endpoints)
}

/// Validate that `sigma` is a permutation of the label set (labels absent
/// from the map are fixed).
pub fn check_permutation(
    labels: &[EdgeId],
    sigma: &BTreeMap<EdgeId, EdgeId>,
) -> Result<(), SurfaceError> {
    for (k, v) in sigma {
        if !labels.contains(k) || !labels.contains(v) {
            return Err(SurfaceError::BadPermutation(format!(
                "{k} -> {v} leaves the label set"
            )));
        }
    }
    let mut image: Vec<EdgeId> = labels
        .iter()
        .map(|e| *sigma.get(e).unwrap_or(e))
        .collect();
    image.sort_unstable();
    if image != labels {
        return Err(SurfaceError::BadPermutation("map is not a bijection".into()));
    }
    Ok(())
}

/// Backtracking search for a bijection vertex-class → puncture satisfying all
/// edge-endpoint constraints, with forward checking against the already
/// assigned classes. Classes and candidates are scanned in sorted order so
/// the result is deterministic.
fn solve_assignment(
    classes: &[usize],
    constraints: &[(usize, usize, PunctureId, PunctureId)],
    punctures: &[PunctureId],
) -> Option<BTreeMap<usize, PunctureId>> {
    fn consistent(
        assign: &BTreeMap<usize, PunctureId>,
        constraints: &[(usize, usize, PunctureId, PunctureId)],
    ) -> bool {
        constraints.iter().all(|&(ca, cb, p, q)| {
            match (assign.get(&ca), assign.get(&cb)) {
                (Some(&x), Some(&y)) => (x, y) == (p, q) || (x, y) == (q, p),
                (Some(&x), None) | (None, Some(&x)) => x == p || x == q,
                (None, None) => true,
            }
        })
    }
    fn go(
        rest: &[usize],
        assign: &mut BTreeMap<usize, PunctureId>,
        used: &mut Vec<PunctureId>,
        constraints: &[(usize, usize, PunctureId, PunctureId)],
        punctures: &[PunctureId],
    ) -> bool {
        let Some((&cls, rest)) = rest.split_first() else {
            return true;
        };
        for &p in punctures {
            if used.contains(&p) {
                continue;
            }
            assign.insert(cls, p);
            used.push(p);
            if consistent(assign, constraints)
                && go(rest, assign, used, constraints, punctures)
            {
                return true;
            }
            used.pop();
            assign.remove(&cls);
        }
        false
    }
    let mut assign = BTreeMap::new();
    let mut used = Vec::new();
    go(classes, &mut assign, &mut used, constraints, punctures).then_some(assign)
}

/// Matrix mutation at the index of label `k`:
/// `ε'_ef = −ε_ef` if `k ∈ {e,f}`, else `ε_ef + (|ε_ek|ε_kf + ε_ek|ε_kf|)/2`.
pub fn mutate_epsilon(eps: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    let n = eps.len();
    assert!(k < n, "mutation index out of range");
    let mut out = vec![vec![0i64; n]; n];
    for e in 0..n {
        for f in 0..n {
            out[e][f] = if e == k || f == k {
                -eps[e][f]
            } else {
                eps[e][f] + (eps[e][k].abs() * eps[k][f] + eps[e][k] * eps[k][f].abs()) / 2
            };
        }
    }
    out
}

/// Abstract labeled seed: ordered label set with skew-symmetric integer
/// exchange matrix, optionally backed by a triangulation.
///
/// Equality and hashing ignore `provenance`: two seeds are the same object of
/// the (symplectic) Ptolemy groupoid exactly when labels and matrix agree.
#[derive(Clone, Debug)]
pub struct Seed {
    pub labels: Vec<u32>,
    pub epsilon: Vec<Vec<i64>>,
    pub provenance: Option<Triangulation>,
}

impl PartialEq for Seed {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.epsilon == other.epsilon
    }
}
impl Eq for Seed {}

impl std::hash::Hash for Seed {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.labels.hash(state);
        self.epsilon.hash(state);
    }
}

impl Seed {
    pub fn new(labels: Vec<u32>, epsilon: Vec<Vec<i64>>) -> Result<Self, SurfaceError> {
        let n = labels.len();
        if !labels.windows(2).all(|w| w[0] < w[1]) {
            return Err(SurfaceError::InvalidSeed(
                "labels must be sorted and distinct".into(),
            ));
        }
        if epsilon.len() != n || epsilon.iter().any(|r| r.len() != n) {
            return Err(SurfaceError::InvalidSeed("epsilon shape mismatch".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if epsilon[i][j] != -epsilon[j][i] {
                    return Err(SurfaceError::InvalidSeed(
                        "epsilon is not skew-symmetric".into(),
                    ));
                }
            }
        }
        Ok(Seed {
            labels,
            epsilon,
            provenance: None,
        })
    }

    pub fn from_triangulation(t: &Triangulation) -> Self {
        Seed {
            labels: t.edges.clone(),
            epsilon: t.exchange_matrix(),
            provenance: Some(t.clone()),
        }
    }

    pub fn index_of(&self, label: u32) -> Result<usize, SurfaceError> {
        self.labels
            .binary_search(&label)
            .map_err(|_| SurfaceError::UnknownEdge(label))
    }

    /// Seed mutation at label `k`. The backing triangulation is flipped along;
    /// if its flip is barred (self-folded configuration) the provenance is
    /// dropped while the matrix mutation proceeds.
    pub fn mutate(&self, k: u32) -> Result<Seed, SurfaceError> {
        let idx = self.index_of(k)?;
        Ok(Seed {
            labels: self.labels.clone(),
            epsilon: mutate_epsilon(&self.epsilon, idx),
            provenance: self
                .provenance
                .as_ref()
                .and_then(|t| t.flip(k).ok())
                .filter(|t| t.exchange_matrix() == mutate_epsilon(&self.epsilon, idx)),
        })
    }

    /// Label-change by σ: `ε'_{σ(i)σ(j)} = ε_{ij}`.
    pub fn relabel(&self, sigma: &BTreeMap<u32, u32>) -> Result<Seed, SurfaceError> {
        check_permutation(&self.labels, sigma)?;
        let n = self.labels.len();
        let map_idx: Vec<usize> = (0..n)
            .map(|i| {
                let img = *sigma.get(&self.labels[i]).unwrap_or(&self.labels[i]);
                self.index_of(img).expect("permutation stays in label set")
            })
            .collect();
        let mut eps = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                eps[map_idx[i]][map_idx[j]] = self.epsilon[i][j];
            }
        }
        Ok(Seed {
            labels: self.labels.clone(),
            epsilon: eps,
            provenance: self
                .provenance
                .as_ref()
                .and_then(|t| t.relabel(sigma).ok()),
        })
    }
}

// ---------------------------------------------------------------------------
// JSON schemas
// ---------------------------------------------------------------------------

/// JSON shape of a triangulation:
/// `{"genus": g, "punctures": [..], "edges": [..], "triangles": [[e,f,g],..],
///   "endpoints": {"e": [p, q], ..}}`.
#[derive(Serialize, Deserialize)]
pub struct TriangulationJson {
    pub genus: usize,
    pub punctures: Vec<PunctureId>,
    pub edges: Vec<EdgeId>,
    pub triangles: Vec<[EdgeId; 3]>,
    pub endpoints: BTreeMap<String, [PunctureId; 2]>,
}

impl Triangulation {
    pub fn to_json(&self) -> TriangulationJson {
        TriangulationJson {
            genus: self.genus,
            punctures: self.punctures.clone(),
            edges: self.edges.clone(),
            triangles: self.triangles.clone(),
            endpoints: self
                .endpoints
                .iter()
                .map(|(e, &(p, q))| (e.to_string(), [p, q]))
                .collect(),
        }
    }

    pub fn from_json(j: &TriangulationJson) -> Result<Self, SurfaceError> {
        let mut endpoints = BTreeMap::new();
        for (e, &[p, q]) in &j.endpoints {
            let e: EdgeId = e.parse().map_err(|_| {
                SurfaceError::InvalidTriangulation(format!("bad edge key {e:?}"))
            })?;
            endpoints.insert(e, (p, q));
        }
        Triangulation::new(
            j.genus,
            j.punctures.clone(),
            j.edges.clone(),
            j.triangles.clone(),
            endpoints,
        )
    }
}

/// JSON shape of a seed: `{"labels": [..], "epsilon": [[..]]}`.
#[derive(Serialize, Deserialize)]
pub struct SeedJson {
    pub labels: Vec<u32>,
    pub epsilon: Vec<Vec<i64>>,
}

impl Seed {
    pub fn to_json(&self) -> SeedJson {
        SeedJson {
            labels: self.labels.clone(),
            epsilon: self.epsilon.clone(),
        }
    }

    pub fn from_json(j: &SeedJson) -> Result<Self, SurfaceError> {
        Seed::new(j.labels.clone(), j.epsilon.clone())
    }
}
