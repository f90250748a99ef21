//! Exact convex hulls and face lattices at desk scale.
//!
//! Facets are found by exhaustive candidate-hyperplane search over δ-subsets
//! of the input points, with every facet certified by an exact supporting
//! functional; an output-sensitive ridge-pivoting enumerator takes over when
//! the subset count would be unreasonable (Minkowski candidate clouds). Both
//! produce identical results and are cross-checked in tests.
//!
//! All work happens in integer coordinates: inputs are scaled per axis by
//! denominator lcms (a positive diagonal map, which preserves the face
//! lattice), and degenerate inputs are mapped to intrinsic coordinates of
//! their affine span first.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use itertools::Itertools;
use num::{Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{int_rank, Int, Rational};
use crate::vectors::FVector;

#[derive(Debug, thiserror::Error)]
pub enum GeomError {
    #[error("empty point set")]
    Empty,
    #[error("points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("coordinate vector {0} has length {1}, expected {2}")]
    CoordinateLength(usize, usize, usize),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("affine span has dimension {0}; need at least 1")]
    DegenerateSpan(usize),
    #[error("lattice is not simplicial")]
    NotSimplicial,
    #[error("point {0} is not a vertex of the hull")]
    NotAVertex(usize),
}

/// A set of point indices, stored as a bitset. All sets living in one
/// lattice share the same word count.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet { words: vec![0; universe.div_ceil(64).max(1)] }
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        debug_assert_eq!(self.words.len(), other.words.len());
        VertexSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        VertexSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn without(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.words[i / 64] &= !(1 << (i % 64));
        s
    }

    pub fn with(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.insert(i);
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let t = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(w * 64 + t)
                }
            })
        })
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.indices())
    }
}

/// Finite set of labelled points with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    pub dim: usize,
    pub points: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<usize>>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<Rational>>) -> Result<Self, GeomError> {
        let ps = PointSet { dim, points, labels: None };
        ps.validate()?;
        Ok(ps)
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        if self.points.is_empty() {
            return Err(GeomError::Empty);
        }
        for (i, p) in self.points.iter().enumerate() {
            if p.len() != self.dim {
                return Err(GeomError::CoordinateLength(i, p.len(), self.dim));
            }
        }
        let mut seen = BTreeMap::new();
        for (i, p) in self.points.iter().enumerate() {
            if let Some(&j) = seen.get(p) {
                return Err(GeomError::DuplicatePoints(j, i));
            }
            seen.insert(p.clone(), i);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A face identified by its (hull-)vertex set, with its affine dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub dim: i64,
}

/// A facet with its exact supporting certificate: the affine functional is
/// nonpositive on every input point and zero exactly on `zero_set`.
#[derive(Clone, Debug)]
pub struct Facet {
    /// hull vertices lying on the facet
    pub vertices: VertexSet,
    /// all input points lying on the supporting hyperplane
    pub zero_set: VertexSet,
    pub functional: AffineFunctional,
}

/// c0 + c·x over the intrinsic integer coordinates used by the enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFunctional {
    pub c0: Int,
    pub c: Vec<Int>,
}

impl AffineFunctional {
    fn eval(&self, p: &[Int]) -> Int {
        let mut acc = self.c0.clone();
        for (ci, xi) in self.c.iter().zip(p) {
            acc += ci * xi;
        }
        acc
    }

    fn negate(&mut self) {
        self.c0 = -std::mem::take(&mut self.c0);
        for ci in &mut self.c {
            *ci = -std::mem::take(ci);
        }
    }

    fn normalize(&mut self) {
        let mut g = self.c0.abs();
        for ci in &self.c {
            g = g.gcd(ci);
        }
        if !g.is_zero() && !g.is_one() {
            self.c0 = &self.c0 / &g;
            for ci in &mut self.c {
                *ci = &*ci / &g;
            }
        }
    }

    fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c.iter().all(Zero::is_zero)
    }
}

/// The boundary complex of a polytope: all proper faces keyed by vertex set,
/// grouped by dimension (-1 up to δ-1), plus the certified facets.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    /// dimension of the hull
    pub delta: usize,
    pub n_points: usize,
    /// `by_dim[k + 1]` holds the k-faces, k = -1 .. δ-1, each level sorted
    pub by_dim: Vec<Vec<VertexSet>>,
    pub facets: Vec<Facet>,
    pub hull_vertices: VertexSet,
    /// input points that are not vertices of the hull
    pub dropped_points: Vec<usize>,
}

impl FaceLattice {
    pub fn f_vector(&self) -> FVector {
        FVector::new(
            self.delta,
            self.by_dim.iter().map(|lvl| Int::from(lvl.len() as u64)).collect(),
        )
        .expect("by_dim has delta+1 levels")
    }

    pub fn faces_of_dim(&self, k: i64) -> &[VertexSet] {
        &self.by_dim[(k + 1) as usize]
    }

    /// All nonempty faces, ascending dimension.
    pub fn nonempty_faces(&self) -> impl Iterator<Item = &VertexSet> {
        self.by_dim.iter().skip(1).flatten()
    }

    pub fn contains_face(&self, f: &VertexSet) -> bool {
        self.by_dim.iter().any(|lvl| lvl.binary_search(f).is_ok())
    }

    /// True iff every proper k-face has exactly k+1 vertices.
    pub fn is_simplicial(&self) -> bool {
        self.by_dim
            .iter()
            .enumerate()
            .skip(1)
            .all(|(lvl, faces)| faces.iter().all(|f| f.len() == lvl))
    }
}

/// A plain set of simplicial faces (links, mixed-face slices, closures).
/// Faces are nonempty vertex sets; whether ∅ belongs is tracked separately
/// because literal and conventional empty-face counts differ by context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSet {
    /// δ: the f-vector has entries f_{-1}..f_{δ-1}
    pub delta: usize,
    pub faces: BTreeSet<VertexSet>,
    pub contains_empty: bool,
}

impl FaceSet {
    pub fn new(delta: usize) -> Self {
        FaceSet { delta, faces: BTreeSet::new(), contains_empty: false }
    }

    /// Literal f-vector: f_{-1} is 1 or 0 according to `contains_empty`,
    /// f_k counts faces with k+1 vertices (faces must be simplices).
    pub fn f_vector_literal(&self) -> FVector {
        let mut entries = vec![Int::zero(); self.delta + 1];
        if self.contains_empty {
            entries[0] = Int::one();
        }
        for f in &self.faces {
            entries[f.len()] += 1;
        }
        FVector::new(self.delta, entries).expect("sized to delta+1")
    }

    /// Maximum face dimension present (-1 if only the empty face).
    pub fn max_dim(&self) -> i64 {
        self.faces.iter().map(|f| f.len() as i64 - 1).max().unwrap_or(-1)
    }

    pub fn contains(&self, f: &VertexSet) -> bool {
        self.faces.contains(f)
    }

    /// Link of `v`: { F \ {v} : F ∈ self, v ∈ F }, with δ one lower.
    /// ∅ enters iff {v} is itself a face.
    pub fn link(&self, v: usize) -> FaceSet {
        let mut out = FaceSet::new(self.delta.saturating_sub(1));
        for f in &self.faces {
            if f.contains(v) {
                let g = f.without(v);
                if g.is_empty() {
                    out.contains_empty = true;
                } else {
                    out.faces.insert(g);
                }
            }
        }
        out
    }
}

// ---- integer preparation ----

/// Scales rational coordinates to integers, one positive factor per axis.
fn scale_axes_to_int(points: &[Vec<Rational>], dim: usize) -> Vec<Vec<Int>> {
    let mut lcms = vec![Int::one(); dim];
    for p in points {
        for (j, x) in p.iter().enumerate() {
            lcms[j] = lcms[j].lcm(x.denominator());
        }
    }
    points
        .iter()
        .map(|p| {
            p.iter()
                .enumerate()
                .map(|(j, x)| x.numerator() * (&lcms[j] / x.denominator()))
                .collect()
        })
        .collect()
}

/// Affine rank of a point cloud and indices of an affine basis
/// (basis[0] is the base point; rank = basis.len() - 1).
fn affine_basis(coords: &[Vec<Int>]) -> Vec<usize> {
    let n = coords.len();
    let mut basis = vec![0usize];
    let mut rows: Vec<Vec<Int>> = Vec::new();
    for i in 1..n {
        let diff: Vec<Int> = coords[i].iter().zip(&coords[0]).map(|(a, b)| a - b).collect();
        let mut trial: Vec<Vec<Int>> = rows.clone();
        trial.push(diff.clone());
        let mut work = trial.clone();
        if int_rank(&mut work) > rows.len() {
            rows.push(diff);
            basis.push(i);
        }
    }
    basis
}

/// Rational reduced row echelon form; returns pivot column per row.
fn rref(mat: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = mat.len();
    let cols = mat.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].recip().expect("pivot nonzero");
        for x in &mut mat[r] {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let factor = mat[i][c].clone();
                for j in 0..cols {
                    let t = &mat[r][j] * &factor;
                    mat[i][j] = &mat[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Basis of the null space of the integer matrix, scaled back to integers.
fn nullspace_basis(rows: &[Vec<Int>], cols: usize) -> Vec<Vec<Int>> {
    let mut mat: Vec<Vec<Rational>> = rows
        .iter()
        .map(|row| row.iter().map(|x| Rational::from(x.clone())).collect())
        .collect();
    let pivots = rref(&mut mat);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); cols];
            v[fc] = Rational::one();
            for (row, &pc) in mat.iter().zip(&pivots) {
                v[pc] = -row[fc].clone();
            }
            // clear denominators
            let mut l = Int::one();
            for x in &v {
                l = l.lcm(x.denominator());
            }
            v.iter().map(|x| x.numerator() * (&l / x.denominator())).collect()
        })
        .collect()
}

/// Maps points into exact integer coordinates of their affine span.
/// Returns (intrinsic dimension δ, n × δ integer coordinates).
fn intrinsic_coords(coords: &[Vec<Int>]) -> (usize, Vec<Vec<Int>>) {
    let dim = coords.first().map_or(0, Vec::len);
    let basis = affine_basis(coords);
    let delta = basis.len() - 1;
    if delta == dim {
        return (delta, coords.to_vec());
    }
    if delta == 0 {
        return (0, coords.iter().map(|_| Vec::new()).collect());
    }
    // solve B λ = p - b0 using δ independent rows of B
    let b0 = &coords[basis[0]];
    let bmat: Vec<Vec<Int>> = basis[1..]
        .iter()
        .map(|&bi| coords[bi].iter().zip(b0).map(|(a, b)| a - b).collect())
        .collect();
    // pick δ independent coordinate axes: rref of B as a (δ × dim) matrix,
    // pivot columns give the axes
    let mut probe: Vec<Vec<Rational>> = bmat
        .iter()
        .map(|row| row.iter().map(|x| Rational::from(x.clone())).collect())
        .collect();
    let axes = rref(&mut probe);
    debug_assert_eq!(axes.len(), delta);
    // invert the δ×δ system on those axes once, as an rref of [B_sub | I]
    let mut aug: Vec<Vec<Rational>> = (0..delta)
        .map(|r| {
            let mut row: Vec<Rational> = axes.iter().map(|&c| Rational::from(bmat[r][c].clone())).collect();
            for i in 0..delta {
                row.push(if i == r { Rational::one() } else { Rational::zero() });
            }
            row
        })
        .collect();
    // solve for λ via transposed system: we need λ with Σ λ_r B[r][axis] = rhs[axis]
    // i.e. (B_sub)^T λ = rhs_sub; build that matrix instead
    for r in 0..delta {
        for c in 0..delta {
            aug[r][c] = Rational::from(bmat[c][axes[r]].clone());
        }
    }
    let piv = rref(&mut aug);
    debug_assert_eq!(piv, (0..delta).collect::<Vec<_>>());
    let rational_coords: Vec<Vec<Rational>> = coords
        .iter()
        .map(|p| {
            let rhs: Vec<Rational> = axes
                .iter()
                .map(|&c| Rational::from(&p[c] - &b0[c]))
                .collect();
            (0..delta)
                .map(|i| {
                    let mut acc = Rational::zero();
                    for (j, r) in rhs.iter().enumerate() {
                        acc = acc + &aug[i][delta + j] * r;
                    }
                    acc
                })
                .collect()
        })
        .collect();
    (delta, scale_axes_to_int(&rational_coords, delta))
}

// ---- facet enumeration ----

struct RawFacet {
    zero_set: VertexSet,
    functional: AffineFunctional,
}

/// Functional through δ given points: the (δ+1)×(δ+1) determinant with the
/// probe row last, expanded by cofactors. Returns None if the points are
/// affinely dependent.
fn hyperplane_through(coords: &[Vec<Int>], combo: &[usize], delta: usize) -> Option<AffineFunctional> {
    let top: Vec<Vec<Int>> = combo
        .iter()
        .map(|&i| {
            let mut row = Vec::with_capacity(delta + 1);
            row.push(Int::one());
            row.extend(coords[i].iter().cloned());
            row
        })
        .collect();
    let mut out = Vec::with_capacity(delta + 1);
    for j in 0..=delta {
        let mut minor: Vec<Vec<Int>> = top
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let m = crate::arith::int_det_bareiss(&mut minor);
        let sign_neg = (delta + j) % 2 == 1;
        out.push(if sign_neg { -m } else { m });
    }
    let mut f = AffineFunctional { c0: out[0].clone(), c: out[1..].to_vec() };
    if f.is_zero() {
        return None;
    }
    f.normalize();
    Some(f)
}

/// Classifies a functional against all points; returns the zero set if it
/// supports (all points on one closed side), oriented nonpositive.
fn classify(coords: &[Vec<Int>], f: &mut AffineFunctional) -> Option<VertexSet> {
    let n = coords.len();
    let mut zero = VertexSet::empty(n);
    let mut pos = false;
    let mut neg = false;
    let mut values = Vec::with_capacity(n);
    for (i, p) in coords.iter().enumerate() {
        let v = f.eval(p);
        match v.sign() {
            num::bigint::Sign::Plus => pos = true,
            num::bigint::Sign::Minus => neg = true,
            num::bigint::Sign::NoSign => zero.insert(i),
        }
        if pos && neg {
            return None;
        }
        values.push(v);
    }
    if pos {
        f.negate();
    }
    Some(zero)
}

fn facets_raw_exhaustive(coords: &[Vec<Int>], delta: usize) -> Vec<RawFacet> {
    let n = coords.len();
    let mut seen: BTreeMap<VertexSet, AffineFunctional> = BTreeMap::new();
    for combo in (0..n).combinations(delta) {
        let Some(mut f) = hyperplane_through(coords, &combo, delta) else {
            continue;
        };
        if let Some(zero) = classify(coords, &mut f) {
            seen.entry(zero).or_insert(f);
        }
    }
    seen.into_iter()
        .map(|(zero_set, functional)| RawFacet { zero_set, functional })
        .collect()
}

/// Among points strictly below `alpha`, finds the set maximizing the
/// rotation key β(p)/(-α(p)) and returns the rotated supporting functional
/// together with its zero set.
fn rotate_to_support(
    coords: &[Vec<Int>],
    alpha: &AffineFunctional,
    beta: &AffineFunctional,
) -> Option<(AffineFunctional, VertexSet)> {
    let mut best: Option<(Int, Int, usize)> = None; // (β(p), -α(p), index)
    for (i, p) in coords.iter().enumerate() {
        let a = alpha.eval(p);
        if !a.is_negative() {
            continue;
        }
        let bnum = beta.eval(p);
        let aneg = -a;
        let better = match &best {
            None => true,
            // β(p)/(-α(p)) > β(q)/(-α(q))  ⇔  β(p)(-α(q)) > β(q)(-α(p))
            Some((bq, aq, _)) => &bnum * aq > bq * &aneg,
        };
        if better {
            best = Some((bnum, aneg, i));
        }
    }
    let (b_star, a_star, p_star) = best?;
    let _ = p_star;
    // H = β(p*)·α - α(p*)·β = b*·α + a*·β (a* = -α(p*) > 0)
    let mut h = AffineFunctional {
        c0: &b_star * &alpha.c0 + &a_star * &beta.c0,
        c: alpha
            .c
            .iter()
            .zip(&beta.c)
            .map(|(ac, bc)| &b_star * ac + &a_star * bc)
            .collect(),
    };
    h.normalize();
    let zero = classify(coords, &mut h).expect("rotated functional supports by construction");
    Some((h, zero))
}

/// First facet: start from a coordinate extreme and rotate until the
/// touching set spans a (δ-1)-flat.
fn bootstrap_facet(coords: &[Vec<Int>], delta: usize) -> RawFacet {
    let max0 = coords.iter().map(|p| p[0].clone()).max().expect("nonempty");
    let mut alpha = AffineFunctional {
        c0: -max0,
        c: std::iter::once(Int::one())
            .chain(std::iter::repeat_with(Int::zero).take(delta - 1))
            .collect(),
    };
    let mut zero = classify(coords, &mut alpha).expect("coordinate extreme supports");
    loop {
        let touching: Vec<usize> = zero.indices();
        let touch_coords: Vec<Vec<Int>> = touching.iter().map(|&i| coords[i].clone()).collect();
        let basis = affine_basis(&touch_coords);
        if basis.len() == delta {
            return RawFacet { zero_set: zero, functional: alpha };
        }
        // null space of the affine constraints on the touching flat
        let rows: Vec<Vec<Int>> = basis
            .iter()
            .map(|&bi| {
                let mut row = vec![Int::one()];
                row.extend(touch_coords[bi].iter().cloned());
                row
            })
            .collect();
        let null = nullspace_basis(&rows, delta + 1);
        let beta_raw = null
            .into_iter()
            .map(|v| AffineFunctional { c0: v[0].clone(), c: v[1..].to_vec() })
            .find(|b| !is_proportional(b, &alpha))
            .expect("null space has dimension >= 2 while flat is deficient");
        let (nf, nz) = rotate_to_support(coords, &alpha, &beta_raw)
            .expect("points affinely span, so some point lies off the hyperplane");
        alpha = nf;
        zero = nz;
    }
}

fn is_proportional(a: &AffineFunctional, b: &AffineFunctional) -> bool {
    let av: Vec<&Int> = std::iter::once(&a.c0).chain(&a.c).collect();
    let bv: Vec<&Int> = std::iter::once(&b.c0).chain(&b.c).collect();
    for i in 0..av.len() {
        for j in i + 1..av.len() {
            if av[i] * bv[j] != av[j] * bv[i] {
                return false;
            }
        }
    }
    true
}

/// Ridges of a facet: facets of the facet's own point cloud, one dimension
/// down, as global zero sets.
fn facet_ridges(coords: &[Vec<Int>], facet: &RawFacet, delta: usize) -> Vec<VertexSet> {
    let members = facet.zero_set.indices();
    if delta == 1 {
        return vec![VertexSet::empty(coords.len())];
    }
    if members.len() == delta {
        // simplicial facet
        return members
            .iter()
            .map(|&drop| {
                VertexSet::from_indices(coords.len(), members.iter().copied().filter(|&i| i != drop))
            })
            .collect();
    }
    let sub_coords: Vec<Vec<Int>> = members.iter().map(|&i| coords[i].clone()).collect();
    let (sub_delta, sub_int) = intrinsic_coords(&sub_coords);
    debug_assert_eq!(sub_delta, delta - 1);
    facets_raw_exhaustive(&sub_int, sub_delta)
        .into_iter()
        .map(|rf| {
            VertexSet::from_indices(coords.len(), rf.zero_set.iter().map(|local| members[local]))
        })
        .collect()
}

fn facets_raw_pivoting(coords: &[Vec<Int>], delta: usize) -> Vec<RawFacet> {
    let n = coords.len();
    let first = bootstrap_facet(coords, delta);
    let mut seen: BTreeMap<VertexSet, AffineFunctional> = BTreeMap::new();
    let mut queue = VecDeque::new();
    seen.insert(first.zero_set.clone(), first.functional.clone());
    queue.push_back(first);
    while let Some(facet) = queue.pop_front() {
        for ridge in facet_ridges(coords, &facet, delta) {
            // β vanishes on the ridge flat, negative on the facet's other points
            let ridge_pts: Vec<Vec<Int>> = ridge.iter().map(|i| coords[i].clone()).collect();
            let rows: Vec<Vec<Int>> = if ridge_pts.is_empty() {
                Vec::new()
            } else {
                affine_basis(&ridge_pts)
                    .iter()
                    .map(|&bi| {
                        let mut row = vec![Int::one()];
                        row.extend(ridge_pts[bi].iter().cloned());
                        row
                    })
                    .collect()
            };
            let null = nullspace_basis(&rows, delta + 1);
            let mut beta = null
                .into_iter()
                .map(|v| AffineFunctional { c0: v[0].clone(), c: v[1..].to_vec() })
                .find(|b| !is_proportional(b, &facet.functional))
                .expect("ridge flat leaves a 2-dimensional pencil");
            let f_star = facet
                .zero_set
                .iter()
                .find(|&i| !ridge.contains(i))
                .expect("facet has points off each ridge");
            if beta.eval(&coords[f_star]).is_positive() {
                beta.negate();
            }
            debug_assert!(beta.eval(&coords[f_star]).is_negative());
            let Some((nf, nz)) = rotate_to_support(coords, &facet.functional, &beta) else {
                continue;
            };
            if !seen.contains_key(&nz) {
                seen.insert(nz.clone(), nf.clone());
                queue.push_back(RawFacet { zero_set: nz, functional: nf });
            }
        }
        let _ = n;
    }
    seen.into_iter()
        .map(|(zero_set, functional)| RawFacet { zero_set, functional })
        .collect()
}

// ---- hull assembly ----

/// Work estimate that decides between exhaustive and pivoting enumeration.
fn exhaustive_is_reasonable(n: usize, delta: usize) -> bool {
    let mut combos: f64 = 1.0;
    for i in 0..delta {
        combos *= (n - i) as f64 / (i + 1) as f64;
    }
    combos <= 150_000.0
}

struct Hull {
    delta: usize,
    raw_facets: Vec<RawFacet>,
    coords: Vec<Vec<Int>>,
}

fn hull_of(ps: &PointSet) -> Result<Hull, GeomError> {
    ps.validate()?;
    let scaled = scale_axes_to_int(&ps.points, ps.dim);
    let (delta, coords) = intrinsic_coords(&scaled);
    if delta == 0 {
        return Err(GeomError::DegenerateSpan(0));
    }
    let raw_facets = if exhaustive_is_reasonable(coords.len(), delta) {
        facets_raw_exhaustive(&coords, delta)
    } else {
        facets_raw_pivoting(&coords, delta)
    };
    Ok(Hull { delta, raw_facets, coords })
}

fn hull_vertices(n: usize, raw_facets: &[RawFacet]) -> VertexSet {
    let mut verts = VertexSet::empty(n);
    for i in 0..n {
        let mut smallest: Option<VertexSet> = None;
        for f in raw_facets {
            if f.zero_set.contains(i) {
                smallest = Some(match smallest {
                    None => f.zero_set.clone(),
                    Some(s) => s.intersect(&f.zero_set),
                });
            }
        }
        if let Some(s) = smallest {
            if s.len() == 1 {
                verts.insert(i);
            }
        }
    }
    verts
}

/// Every facet of the convex hull, exactly once, with non-vertex points
/// excluded from the reported vertex sets.
pub fn facets(ps: &PointSet) -> Result<Vec<Face>, GeomError> {
    let hull = hull_of(ps)?;
    let verts = hull_vertices(hull.coords.len(), &hull.raw_facets);
    Ok(hull
        .raw_facets
        .iter()
        .map(|f| Face {
            vertices: f.zero_set.intersect(&verts).indices(),
            dim: hull.delta as i64 - 1,
        })
        .collect())
}

/// Full boundary complex: all faces of all dimensions -1..δ-1, computed by
/// closing the facet vertex sets under pairwise intersection.
pub fn face_lattice(ps: &PointSet) -> Result<FaceLattice, GeomError> {
    let hull = hull_of(ps)?;
    let n = hull.coords.len();
    let verts = hull_vertices(n, &hull.raw_facets);
    let facet_vsets: Vec<VertexSet> = hull
        .raw_facets
        .iter()
        .map(|f| f.zero_set.intersect(&verts))
        .collect();

    let mut seen: BTreeSet<VertexSet> = facet_vsets.iter().cloned().collect();
    let mut queue: VecDeque<VertexSet> = seen.iter().cloned().collect();
    while let Some(f) = queue.pop_front() {
        for g in &facet_vsets {
            let i = f.intersect(g);
            if !seen.contains(&i) {
                seen.insert(i.clone());
                queue.push_back(i);
            }
        }
    }
    seen.insert(VertexSet::empty(n));

    let mut by_dim: Vec<Vec<VertexSet>> = vec![Vec::new(); hull.delta + 1];
    for face in seen {
        let d = face_dim(&hull.coords, &face);
        by_dim[(d + 1) as usize].push(face);
    }
    for lvl in &mut by_dim {
        lvl.sort();
    }

    let facets = hull
        .raw_facets
        .into_iter()
        .map(|rf| Facet {
            vertices: rf.zero_set.intersect(&verts),
            zero_set: rf.zero_set,
            functional: rf.functional,
        })
        .collect();
    let dropped = (0..n).filter(|&i| !verts.contains(i)).collect();
    Ok(FaceLattice {
        delta: hull.delta,
        n_points: n,
        by_dim,
        facets,
        hull_vertices: verts,
        dropped_points: dropped,
    })
}

fn face_dim(coords: &[Vec<Int>], face: &VertexSet) -> i64 {
    let idx = face.indices();
    match idx.len() {
        0 => -1,
        1 => 0,
        _ => {
            let pts: Vec<Vec<Int>> = idx.iter().map(|&i| coords[i].clone()).collect();
            (affine_basis(&pts).len() - 1) as i64
        }
    }
}

/// True iff every proper face of dimension k has exactly k+1 vertices.
pub fn is_simplicial(lat: &FaceLattice) -> bool {
    lat.is_simplicial()
}

/// Link of a vertex in a simplicial boundary complex: the faces of star(v)
/// not containing v, of dimension δ-2.
pub fn vertex_link(lat: &FaceLattice, v: usize) -> Result<FaceSet, GeomError> {
    if !lat.hull_vertices.contains(v) {
        return Err(GeomError::NotAVertex(v));
    }
    if !lat.is_simplicial() {
        return Err(GeomError::NotSimplicial);
    }
    let mut out = FaceSet::new(lat.delta - 1);
    for f in lat.nonempty_faces() {
        if f.contains(v) {
            let g = f.without(v);
            if g.is_empty() {
                out.contains_empty = true;
            } else {
                out.faces.insert(g);
            }
        }
    }
    Ok(out)
}

/// Candidate vertex set of a Minkowski sum: all r-wise sums of one vertex
/// per summand, deduplicated. Hull extraction is the caller's job.
pub fn minkowski_sum(families: &[PointSet]) -> Result<PointSet, GeomError> {
    let dim = families.first().ok_or(GeomError::Empty)?.dim;
    for f in families {
        if f.dim != dim {
            return Err(GeomError::DimensionMismatch(f.dim, dim));
        }
        f.validate()?;
    }
    let mut sums: BTreeSet<Vec<Rational>> = BTreeSet::new();
    let mut stack = vec![vec![Rational::zero(); dim]];
    for fam in families {
        let mut next = Vec::new();
        for acc in &stack {
            for p in &fam.points {
                let s: Vec<Rational> = acc.iter().zip(p).map(|(a, b)| a + b).collect();
                next.push(s);
            }
        }
        stack = next;
    }
    sums.extend(stack);
    Ok(PointSet { dim, points: sums.into_iter().collect(), labels: None })
}

/// Exhaustive check that the nonempty faces are closed under pairwise
/// intersection (test helper; cost is quadratic in the face count).
pub fn closed_under_intersection(lat: &FaceLattice) -> bool {
    let all: BTreeSet<&VertexSet> = lat.by_dim.iter().flatten().collect();
    for f in lat.nonempty_faces() {
        for g in lat.nonempty_faces() {
            if !all.contains(&f.intersect(g)) {
                return false;
            }
        }
    }
    true
}

/// Points on the moment curve t -> (t, t^2, ..., t^delta) at t = 1..n.
pub fn moment_curve_points(delta: usize, n: usize) -> PointSet {
    let points = (1..=n as i64)
        .map(|t| {
            (1..=delta as u32)
                .map(|e| Rational::from_int(Int::from(t).pow(e)))
                .collect()
        })
        .collect();
    PointSet { dim: delta, points, labels: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vectors::f_to_h;

    fn pt(coords: &[i64]) -> Vec<Rational> {
        coords.iter().map(|&c| Rational::from(c)).collect()
    }

    fn simplex(d: usize) -> PointSet {
        let mut points = vec![pt(&vec![0; d])];
        for i in 0..d {
            let mut c = vec![0i64; d];
            c[i] = 1;
            points.push(pt(&c));
        }
        PointSet::new(d, points).unwrap()
    }

    fn cube(d: usize) -> PointSet {
        let points = (0..1u32 << d)
            .map(|m| pt(&(0..d).map(|i| ((m >> i) & 1) as i64).collect::<Vec<_>>()))
            .collect();
        PointSet::new(d, points).unwrap()
    }

    fn cross_polytope(d: usize) -> PointSet {
        let mut points = Vec::new();
        for i in 0..d {
            for s in [1i64, -1] {
                let mut c = vec![0i64; d];
                c[i] = s;
                points.push(pt(&c));
            }
        }
        PointSet::new(d, points).unwrap()
    }

    #[test]
    fn simplex_has_d_plus_one_facets() {
        assert_eq!(facets(&simplex(3)).unwrap().len(), 4);
    }

    #[test]
    fn square_has_four_edges() {
        let sq = cube(2);
        let fs = facets(&sq).unwrap();
        assert_eq!(fs.len(), 4);
        assert!(fs.iter().all(|f| f.vertices.len() == 2 && f.dim == 1));
    }

    #[test]
    fn cyclic_c4_6_has_nine_facets() {
        let fs = facets(&moment_curve_points(4, 6)).unwrap();
        assert_eq!(fs.len(), 9);
    }

    #[test]
    fn simplex_face_lattice() {
        let lat = face_lattice(&simplex(3)).unwrap();
        assert_eq!(lat.f_vector(), FVector::from_i64(3, &[1, 4, 6, 4]).unwrap());
        assert!(lat.is_simplicial());
    }

    #[test]
    fn cube_face_lattice() {
        let lat = face_lattice(&cube(3)).unwrap();
        assert_eq!(lat.f_vector(), FVector::from_i64(3, &[1, 8, 12, 6]).unwrap());
        assert!(!lat.is_simplicial());
        assert!(closed_under_intersection(&lat));
    }

    #[test]
    fn cyclic_c4_6_face_lattice_and_euler() {
        let lat = face_lattice(&moment_curve_points(4, 6)).unwrap();
        let f = lat.f_vector();
        assert_eq!(f, FVector::from_i64(4, &[1, 6, 15, 18, 9]).unwrap());
        // Euler-Poincaré: 6 - 15 + 18 - 9 = 0
        assert_eq!(6 - 15 + 18 - 9, 0);
        assert!(lat.is_simplicial());
    }

    #[test]
    fn interior_points_are_dropped() {
        // square plus its center: center is not a vertex
        let mut points = cube(2).points;
        points.push(vec![Rational::new(1.into(), 2.into()).unwrap(); 2]);
        let ps = PointSet::new(2, points).unwrap();
        let lat = face_lattice(&ps).unwrap();
        assert_eq!(lat.dropped_points, vec![4]);
        assert_eq!(lat.f_vector(), FVector::from_i64(2, &[1, 4, 4]).unwrap());
    }

    #[test]
    fn boundary_midpoint_is_dropped() {
        // segment with midpoint: midpoint lies on no facet... in dim 1 the
        // facets are the endpoints, so the midpoint is interior
        let ps = PointSet::new(1, vec![pt(&[0]), pt(&[2]), pt(&[1])]).unwrap();
        let lat = face_lattice(&ps).unwrap();
        assert_eq!(lat.dropped_points, vec![2]);
        assert_eq!(lat.delta, 1);
    }

    #[test]
    fn degenerate_span_reports_true_delta() {
        // square living in a plane inside R^3
        let points = vec![pt(&[0, 0, 5]), pt(&[1, 0, 5]), pt(&[0, 1, 5]), pt(&[1, 1, 5])];
        let lat = face_lattice(&PointSet::new(3, points).unwrap()).unwrap();
        assert_eq!(lat.delta, 2);
        assert_eq!(lat.f_vector(), FVector::from_i64(2, &[1, 4, 4]).unwrap());
    }

    #[test]
    fn duplicate_points_rejected() {
        let ps = PointSet { dim: 2, points: vec![pt(&[0, 0]), pt(&[0, 0])], labels: None };
        assert!(matches!(ps.validate(), Err(GeomError::DuplicatePoints(0, 1))));
    }

    #[test]
    fn vertex_link_of_simplex_is_triangle_boundary() {
        let lat = face_lattice(&simplex(3)).unwrap();
        let link = vertex_link(&lat, 0).unwrap();
        let f = link.f_vector_literal();
        assert_eq!(f, FVector::from_i64(2, &[1, 3, 3]).unwrap());
    }

    #[test]
    fn vertex_link_of_cross_polytope_is_four_cycle() {
        let lat = face_lattice(&cross_polytope(3)).unwrap();
        let link = vertex_link(&lat, 0).unwrap();
        assert_eq!(link.f_vector_literal(), FVector::from_i64(2, &[1, 4, 4]).unwrap());
    }

    #[test]
    fn vertex_link_rejects_non_simplicial_and_non_vertices() {
        let lat = face_lattice(&cube(3)).unwrap();
        assert!(matches!(vertex_link(&lat, 0), Err(GeomError::NotSimplicial)));
        let mut points = cube(2).points;
        points.push(vec![Rational::new(1.into(), 2.into()).unwrap(); 2]);
        let lat2 = face_lattice(&PointSet::new(2, points).unwrap()).unwrap();
        assert!(matches!(vertex_link(&lat2, 4), Err(GeomError::NotAVertex(4))));
    }

    #[test]
    fn minkowski_square_from_segments() {
        let seg_x = PointSet::new(2, vec![pt(&[0, 0]), pt(&[1, 0])]).unwrap();
        let seg_y = PointSet::new(2, vec![pt(&[0, 0]), pt(&[0, 1])]).unwrap();
        let sum = minkowski_sum(&[seg_x, seg_y]).unwrap();
        let lat = face_lattice(&sum).unwrap();
        assert_eq!(lat.f_vector(), FVector::from_i64(2, &[1, 4, 4]).unwrap());
    }

    #[test]
    fn minkowski_translation_invariance() {
        let p = simplex(3);
        let shift = PointSet::new(3, vec![pt(&[7, -2, 5])]).unwrap();
        let sum = minkowski_sum(&[p.clone(), shift]).unwrap();
        assert_eq!(
            face_lattice(&sum).unwrap().f_vector(),
            face_lattice(&p).unwrap().f_vector()
        );
    }

    #[test]
    fn minkowski_two_cubes_is_scaled_cube() {
        let sum = minkowski_sum(&[cube(3), cube(3)]).unwrap();
        let lat = face_lattice(&sum).unwrap();
        assert_eq!(lat.f_vector(), FVector::from_i64(3, &[1, 8, 12, 6]).unwrap());
    }

    #[test]
    fn minkowski_dim_mismatch_is_error() {
        assert!(minkowski_sum(&[cube(2), cube(3)]).is_err());
    }

    #[test]
    fn pivoting_matches_exhaustive() {
        for ps in [cube(3), cross_polytope(3), moment_curve_points(4, 7), simplex(4)] {
            let scaled = scale_axes_to_int(&ps.points, ps.dim);
            let (delta, coords) = intrinsic_coords(&scaled);
            let ex: BTreeSet<VertexSet> = facets_raw_exhaustive(&coords, delta)
                .into_iter()
                .map(|f| f.zero_set)
                .collect();
            let pv: BTreeSet<VertexSet> = facets_raw_pivoting(&coords, delta)
                .into_iter()
                .map(|f| f.zero_set)
                .collect();
            assert_eq!(ex, pv, "dim {}", ps.dim);
        }
    }

    #[test]
    fn classical_dehn_sommerville_on_simplicial_boundaries() {
        for ps in [simplex(4), cross_polytope(4), moment_curve_points(3, 7), moment_curve_points(5, 8)] {
            let lat = face_lattice(&ps).unwrap();
            assert!(lat.is_simplicial());
            let h = f_to_h(&lat.f_vector());
            assert!(h.is_palindromic(), "h = {:?}", h);
        }
    }

    #[test]
    fn euler_poincare_on_enumerated_boundaries() {
        for ps in [simplex(3), cube(3), cross_polytope(4), moment_curve_points(4, 6)] {
            let lat = face_lattice(&ps).unwrap();
            let f = lat.f_vector();
            let mut alt = Int::zero();
            for k in 0..lat.delta as i64 {
                let v = f.f(k);
                if k % 2 == 0 {
                    alt += v;
                } else {
                    alt -= v;
                }
            }
            let expected = if (lat.delta - 1) % 2 == 0 { Int::from(2) } else { Int::zero() };
            assert_eq!(alt, expected, "dim {}", ps.dim);
        }
    }

    #[test]
    fn mcmullen_link_identity_on_simplicial_boundaries() {
        // sum_v h_k(link(v)) = (k+1) h_{k+1} + (d-k) h_k
        for ps in [simplex(4), cross_polytope(3), moment_curve_points(4, 7)] {
            let lat = face_lattice(&ps).unwrap();
            let d = lat.delta as i64;
            let h = f_to_h(&lat.f_vector());
            let links: Vec<_> = lat
                .hull_vertices
                .iter()
                .map(|v| f_to_h(&vertex_link(&lat, v).unwrap().f_vector_literal()))
                .collect();
            for k in 0..d {
                let lhs: Int = links.iter().map(|lh| lh.h(k)).sum();
                let rhs = Int::from(k + 1) * h.h(k + 1) + Int::from(d - k) * h.h(k);
                assert_eq!(lhs, rhs, "k={k}");
            }
        }
    }
}
