//! The Cayley embedding and everything extracted from it: mixed-face sets
//! F_R, their closures K_R, vertex links inside them, the face-count
//! correspondence with the Minkowski sum, and the purely combinatorial
//! boundary of the stellar-subdivision polytope Q_R.
//!
//! A single enumeration of the Cayley polytope over R serves every nonempty
//! S ⊆ R: the faces of C_S are exactly the faces of C_R whose vertex labels
//! stay inside S, because C_S is itself a (trivial) face of C_R.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};

use crate::arith::{factorial, Int, Rational};
use crate::combid::stirling2;
use crate::geom::{self, FaceLattice, FaceSet, GeomError, PointSet, VertexSet};
use crate::subset::Subset;
use crate::vectors::FVector;

#[derive(Debug, thiserror::Error)]
pub enum CayleyError {
    #[error("need 2 <= r < d, got r = {r}, d = {d}")]
    BadArity { r: usize, d: usize },
    #[error("summand {0} is not full-dimensional (affine rank {1} < {2})")]
    NotFullDimensional(usize, usize, usize),
    #[error("summand {0} contains a non-vertex point {1}")]
    NonVertexPoint(usize, usize),
    #[error("summand {0}: {1}")]
    Summand(usize, GeomError),
    #[error("subset {0} is empty or not within [r]")]
    BadSubset(Subset),
    #[error("geometry: {0}")]
    Geom(#[from] GeomError),
    #[error("slice for subset {0} is not simplicial")]
    NotSimplicialSlice(Subset),
    #[error("missing slice for subset {0}")]
    MissingSlice(Subset),
}

/// The r labeled vertex sets of d-polytopes that every pipeline starts from.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct SummandFamily {
    pub d: usize,
    pub summands: Vec<PointSet>,
}

impl SummandFamily {
    /// Validates the standing hypotheses: d >= 2, 1 <= r < d, each summand
    /// full-dimensional in R^d with every point a vertex of its own hull.
    pub fn new(d: usize, summands: Vec<PointSet>) -> Result<Self, CayleyError> {
        let fam = Self::new_allow_degenerate(d, summands)?;
        for (i, s) in fam.summands.iter().enumerate() {
            let lat = geom::face_lattice(s).map_err(|e| CayleyError::Summand(i, e))?;
            if lat.delta != d {
                return Err(CayleyError::NotFullDimensional(i, lat.delta, d));
            }
            if let Some(&p) = lat.dropped_points.first() {
                return Err(CayleyError::NonVertexPoint(i, p));
            }
        }
        Ok(fam)
    }

    /// Same bookkeeping without the full-dimensionality check. Needed for
    /// the ζ = 0 comparison families, whose summands live in proper flats.
    pub fn new_allow_degenerate(d: usize, summands: Vec<PointSet>) -> Result<Self, CayleyError> {
        let r = summands.len();
        if r == 0 || r >= d || d < 2 {
            return Err(CayleyError::BadArity { r, d });
        }
        for (i, s) in summands.iter().enumerate() {
            if s.dim != d {
                return Err(CayleyError::Summand(i, GeomError::DimensionMismatch(s.dim, d)));
            }
            s.validate().map_err(|e| CayleyError::Summand(i, e))?;
        }
        Ok(SummandFamily { d, summands })
    }

    pub fn r(&self) -> usize {
        self.summands.len()
    }

    pub fn n(&self, i: usize) -> usize {
        self.summands[i].len()
    }

    pub fn n_of(&self, s: Subset) -> usize {
        s.iter().map(|i| self.n(i)).sum()
    }

    pub fn vertex_counts(&self) -> Vec<usize> {
        self.summands.iter().map(PointSet::len).collect()
    }
}

/// Cayley polytope of the summands indexed by `subset`, fully enumerated.
#[derive(Clone, Debug)]
pub struct CayleyPolytope {
    pub family: SummandFamily,
    pub subset: Subset,
    /// points (e_p, v) in R^{|R|-1+d}, labels = original summand indices
    pub embedded: PointSet,
    pub lattice: FaceLattice,
    /// label (summand index) of each embedded point
    pub labels: Vec<usize>,
    /// the (1/|R|, ..., 1/|R|) prefix of the section flat
    pub flat_w: Vec<Rational>,
}

impl CayleyPolytope {
    /// Global index range of the vertices carrying labels in `s`.
    pub fn vertex_set_of(&self, s: Subset) -> VertexSet {
        VertexSet::from_indices(
            self.embedded.len(),
            self.labels
                .iter()
                .enumerate()
                .filter(|(_, &l)| s.contains(l))
                .map(|(i, _)| i),
        )
    }

    pub fn label_set_of(&self, face: &VertexSet) -> Subset {
        let mut s = Subset::EMPTY;
        for v in face.iter() {
            s = s.insert(self.labels[v]);
        }
        s
    }

    /// True iff every proper face that is not a trivial face C_S is a simplex.
    pub fn is_as_simplicial_as_possible(&self) -> bool {
        let trivial: BTreeSet<VertexSet> = self
            .subset
            .nonempty_subsets()
            .map(|s| self.vertex_set_of(s))
            .collect();
        for (level, faces) in self.lattice.by_dim.iter().enumerate().skip(1) {
            for f in faces {
                if f.len() != level && !trivial.contains(f) {
                    return false;
                }
            }
        }
        true
    }
}

/// Builds the Cayley polytope of the summands in `r_set`: summand i at
/// position p (within the sorted subset) is embedded as (e_p, v) with
/// e_0 = 0 and e_p the p-th unit vector of R^{|R|-1}.
pub fn build_cayley(family: &SummandFamily, r_set: Subset) -> Result<CayleyPolytope, CayleyError> {
    if r_set.is_empty() || !r_set.is_subset_of(Subset::full(family.r())) {
        return Err(CayleyError::BadSubset(r_set));
    }
    let members: Vec<usize> = r_set.iter().collect();
    let s = members.len();
    let dim = family.d + s - 1;
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (pos, &i) in members.iter().enumerate() {
        for v in &family.summands[i].points {
            let mut coords = vec![Rational::zero(); s - 1];
            if pos > 0 {
                coords[pos - 1] = Rational::one();
            }
            coords.extend(v.iter().cloned());
            points.push(coords);
            labels.push(i);
        }
    }
    let embedded = PointSet { dim, points, labels: Some(labels.clone()) };
    let lattice = geom::face_lattice(&embedded)?;
    let flat_w = vec![
        Rational::new(Int::one(), Int::from(s as u64)).expect("nonzero");
        s - 1
    ];
    Ok(CayleyPolytope {
        family: family.clone(),
        subset: r_set,
        embedded,
        lattice,
        labels,
        flat_w,
    })
}

/// The mixed faces of C_S: faces touching every V_i, i ∈ S, as vertex sets
/// in the owning Cayley polytope's indexing, with their face counts.
#[derive(Clone, Debug)]
pub struct MixedFaceSet {
    pub subset: Subset,
    /// δ = d + |S| - 1; the f-vector has entries f_{-1}..f_{δ-1}
    pub delta: usize,
    pub faces: BTreeSet<VertexSet>,
    /// conventional f-vector: f_{-1} = (-1)^{|S|-1}, higher entries literal
    pub f: FVector,
    pub simplicial: bool,
}

impl MixedFaceSet {
    pub fn contains(&self, f: &VertexSet) -> bool {
        self.faces.contains(f)
    }

    /// Link of v within the mixed faces: { F \ {v} : F ∈ F_S, v ∈ F },
    /// counted literally (∅ enters only when {v} is itself mixed, i.e. |S|=1).
    pub fn link(&self, v: usize) -> FaceSet {
        let mut out = FaceSet::new(self.delta - 1);
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

/// Extracts F_S from a Cayley polytope built over any superset of S: the
/// lattice faces with label set exactly S, minus the trivial face C_S.
pub fn mixed_faces(cp: &CayleyPolytope, s: Subset) -> Result<MixedFaceSet, CayleyError> {
    if s.is_empty() || !s.is_subset_of(cp.subset) {
        return Err(CayleyError::BadSubset(s));
    }
    let delta = cp.family.d + s.len() - 1;
    let trivial = cp.vertex_set_of(s);
    let mut faces = BTreeSet::new();
    let mut counts = vec![Int::zero(); delta + 1];
    let mut simplicial = true;
    for (level, lvl_faces) in cp.lattice.by_dim.iter().enumerate().skip(1) {
        let dim = level as i64 - 1;
        for f in lvl_faces {
            if cp.label_set_of(f) == s && *f != trivial {
                if f.len() != level {
                    simplicial = false;
                }
                counts[(dim + 1) as usize] += 1;
                faces.insert(f.clone());
            }
        }
    }
    counts[0] = if s.len() % 2 == 1 { Int::one() } else { -Int::one() };
    let f = FVector::new(delta, counts).expect("counts sized to delta+1");
    Ok(MixedFaceSet { subset: s, delta, faces, f, simplicial })
}

/// The closure K_S of the mixed faces under subface inclusion, together
/// with its literal f-vector (f_{-1} = 1).
#[derive(Clone, Debug)]
pub struct ClosureSet {
    pub subset: Subset,
    pub delta: usize,
    /// nonempty faces; the empty face is implicit (f_{-1} = 1)
    pub faces: BTreeSet<VertexSet>,
    pub f: FVector,
    /// every maximal face has dimension δ-1
    pub pure: bool,
}

impl ClosureSet {
    pub fn contains(&self, f: &VertexSet) -> bool {
        self.faces.contains(f)
    }

    /// Link of v in the complex K_S, counted literally.
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

/// Builds K_S from the owning Cayley polytope: all lattice faces contained
/// in some mixed face of some nonempty X ⊆ S... equivalently, contained in
/// some face of F_S itself (every F_X face with X ⊂ S is a subface of an
/// F_S facet only in the pure case, so the union over X is taken here).
pub fn closure_k(cp: &CayleyPolytope, s: Subset) -> Result<ClosureSet, CayleyError> {
    let delta = cp.family.d + s.len() - 1;
    let mut mixed_union: Vec<VertexSet> = Vec::new();
    for x in s.nonempty_subsets() {
        let mf = mixed_faces(cp, x)?;
        mixed_union.extend(mf.faces.iter().cloned());
    }
    // keep only maximal mixed faces to cut the containment scans
    let mut maximal: Vec<VertexSet> = Vec::new();
    for f in &mixed_union {
        if !mixed_union.iter().any(|g| g != f && f.is_subset_of(g)) {
            maximal.push(f.clone());
        }
    }
    let mut faces = BTreeSet::new();
    let mut counts = vec![Int::zero(); delta + 1];
    counts[0] = Int::one();
    let mut top_dim = -1i64;
    let mut by_face_dim: Vec<(VertexSet, i64)> = Vec::new();
    for (level, lvl_faces) in cp.lattice.by_dim.iter().enumerate().skip(1) {
        let dim = level as i64 - 1;
        for f in lvl_faces {
            if maximal.iter().any(|m| f.is_subset_of(m)) {
                counts[(dim + 1) as usize] += 1;
                faces.insert(f.clone());
                top_dim = top_dim.max(dim);
                by_face_dim.push((f.clone(), dim));
            }
        }
    }
    // purity: every maximal face of the closure reaches the top dimension
    let pure = by_face_dim.iter().all(|(f, dim)| {
        *dim == top_dim || by_face_dim.iter().any(|(g, gd)| *gd > *dim && f.is_subset_of(g))
    });
    let f = FVector::new(delta, counts).expect("counts sized to delta+1");
    Ok(ClosureSet { subset: s, delta, faces, f, pure })
}

/// Everything a verification pass needs about one family, enumerated once:
/// the Cayley polytope over [r] and the F_S / K_S slices for every subset.
#[derive(Clone, Debug)]
pub struct Instance {
    pub cp: CayleyPolytope,
    pub mixed: BTreeMap<Subset, MixedFaceSet>,
    pub closures: BTreeMap<Subset, ClosureSet>,
    pub as_simplicial_as_possible: bool,
}

impl Instance {
    pub fn build(family: &SummandFamily) -> Result<Instance, CayleyError> {
        let full = Subset::full(family.r());
        let cp = build_cayley(family, full)?;
        let mut mixed = BTreeMap::new();
        let mut closures = BTreeMap::new();
        for s in full.nonempty_subsets() {
            mixed.insert(s, mixed_faces(&cp, s)?);
            closures.insert(s, closure_k(&cp, s)?);
        }
        let as_simplicial_as_possible = cp.is_as_simplicial_as_possible();
        Ok(Instance { cp, mixed, closures, as_simplicial_as_possible })
    }

    pub fn d(&self) -> usize {
        self.cp.family.d
    }

    pub fn r(&self) -> usize {
        self.cp.family.r()
    }

    pub fn full(&self) -> Subset {
        self.cp.subset
    }

    pub fn mixed(&self, s: Subset) -> Result<&MixedFaceSet, CayleyError> {
        self.mixed.get(&s).ok_or(CayleyError::MissingSlice(s))
    }

    pub fn closure(&self, s: Subset) -> Result<&ClosureSet, CayleyError> {
        self.closures.get(&s).ok_or(CayleyError::MissingSlice(s))
    }
}

/// One compared index of the Cayley/Minkowski correspondence.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CorrespondenceRow {
    pub k: i64,
    #[serde(with = "crate::arith::serde_int")]
    pub mixed: Int,
    #[serde(with = "crate::arith::serde_int")]
    pub minkowski: Int,
}

/// Both sides of the Cayley/Minkowski face-count correspondence
/// f_{k-1}(F_[r]) = f_{k-r}(P_1 + ... + P_r), independently enumerated.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CorrespondenceReport {
    pub mixed_f: FVector,
    pub minkowski_f: FVector,
    /// rows for r <= k <= d+r-1
    pub rows: Vec<CorrespondenceRow>,
    pub matches: bool,
}

/// Verifies the correspondence by enumerating the Minkowski sum directly.
pub fn minkowski_correspondence(
    cp: &CayleyPolytope,
    family: &SummandFamily,
) -> Result<CorrespondenceReport, CayleyError> {
    let r = family.r();
    let d = family.d;
    assert_eq!(cp.subset, Subset::full(r), "correspondence needs the full Cayley polytope");
    let mixed = mixed_faces(cp, Subset::full(r))?;
    let sum_points = geom::minkowski_sum(&family.summands)?;
    let sum_lat = geom::face_lattice(&sum_points)?;
    let sum_f = sum_lat.f_vector();
    let mut rows = Vec::new();
    let mut matches = true;
    for k in r as i64..=(d + r - 1) as i64 {
        let lhs = mixed.f.f(k - 1);
        let rhs = sum_f.f(k - r as i64);
        if lhs != rhs {
            matches = false;
        }
        rows.push(CorrespondenceRow { k, mixed: lhs, minkowski: rhs });
    }
    Ok(CorrespondenceReport { mixed_f: mixed.f.clone(), minkowski_f: sum_f, rows, matches })
}

/// Link of a vertex within the mixed faces F_R (see [`MixedFaceSet::link`]).
pub fn link_in_f(ms: &MixedFaceSet, v: usize) -> FaceSet {
    ms.link(v)
}

/// The boundary complex of the stellar-subdivision polytope Q_R, built
/// purely combinatorially: faces of the F_S slices joined with strictly
/// increasing chains of auxiliary vertices y_{S_1} ⊂ ... ⊂ y_{S_l}.
#[derive(Clone, Debug)]
pub struct QrBoundary {
    /// δ = d + |R| - 1 (the complex has dimension δ - 1)
    pub delta: usize,
    pub universe: usize,
    /// auxiliary vertex index per proper nonempty subset of R
    pub aux_index: BTreeMap<Subset, usize>,
    pub faces: FaceSet,
}

impl QrBoundary {
    pub fn f_vector(&self) -> FVector {
        self.faces.f_vector_literal()
    }
}

/// Builds ∂Q_R from the mixed-face slices of all nonempty S ⊆ R. Every
/// slice must be simplicial.
pub fn build_qr_boundary(
    slices: &BTreeMap<Subset, MixedFaceSet>,
    r_set: Subset,
) -> Result<QrBoundary, CayleyError> {
    let mut universe = 0usize;
    for s in r_set.nonempty_subsets() {
        let sl = slices.get(&s).ok_or(CayleyError::MissingSlice(s))?;
        if !sl.simplicial {
            return Err(CayleyError::NotSimplicialSlice(s));
        }
        for f in &sl.faces {
            universe = universe.max(f.iter().max().map_or(0, |m| m + 1));
        }
    }
    let top = slices.get(&r_set).ok_or(CayleyError::MissingSlice(r_set))?;
    let delta = top.delta;

    let proper: Vec<Subset> = r_set.proper_nonempty_subsets().collect();
    let mut aux_index = BTreeMap::new();
    for (k, s) in proper.iter().enumerate() {
        aux_index.insert(*s, universe + k);
    }
    let total = universe + proper.len();

    // strictly increasing chains S_1 ⊂ ... ⊂ S_l of proper nonempty subsets
    let mut chains: Vec<Vec<Subset>> = Vec::new();
    fn extend_chains(proper: &[Subset], current: &mut Vec<Subset>, out: &mut Vec<Vec<Subset>>) {
        let last = *current.last().expect("nonempty prefix");
        for &next in proper {
            if last.is_subset_of(next) && next != last {
                current.push(next);
                out.push(current.clone());
                extend_chains(proper, current, out);
                current.pop();
            }
        }
    }
    for &s in &proper {
        let mut cur = vec![s];
        chains.push(cur.clone());
        extend_chains(&proper, &mut cur, &mut chains);
    }

    let mut faces = FaceSet::new(delta);
    faces.contains_empty = true;
    // (a) the mixed faces themselves (re-indexed into the larger universe)
    for s in r_set.nonempty_subsets() {
        for f in &slices[&s].faces {
            faces.faces.insert(VertexSet::from_indices(total, f.iter()));
        }
    }
    // (b) faces joined with chains above their slice, and (c) bare chains
    for chain in &chains {
        let chain_set = VertexSet::from_indices(total, chain.iter().map(|s| aux_index[s]));
        faces.faces.insert(chain_set.clone());
        let lowest = chain[0];
        for s in lowest.nonempty_subsets() {
            for f in &slices[&s].faces {
                let joined = VertexSet::from_indices(total, f.iter()).union(&chain_set);
                faces.faces.insert(joined);
            }
        }
    }
    Ok(QrBoundary { delta, universe: total, aux_index, faces })
}

/// f_k(∂Q_R) predicted from the F-slices:
/// f_k(F_R) + sum over proper S of sum_i i!·S(|R|-|S|+1, i+1)·f_{k-i}(F_S).
pub fn qr_f_from_mixed(slices: &BTreeMap<Subset, MixedFaceSet>, r_set: Subset, k: i64) -> Int {
    let mut acc = slices[&r_set].f.f(k);
    for s in r_set.proper_nonempty_subsets() {
        let m = (r_set.len() - s.len()) as u32;
        for i in 0..=m {
            acc += factorial(i) * stirling2(m + 1, i + 1) * slices[&s].f.f(k - i as i64);
        }
    }
    acc
}

/// f_k(∂Q_R) predicted from the K-closures:
/// f_k(K_R) + sum over proper S of sum_i (i+1)!·S(|R|-|S|, i+1)·f_{k-1-i}(K_S).
pub fn qr_f_from_closures(closures: &BTreeMap<Subset, ClosureSet>, r_set: Subset, k: i64) -> Int {
    let mut acc = closures[&r_set].f.f(k);
    for s in r_set.proper_nonempty_subsets() {
        let m = (r_set.len() - s.len()) as u32;
        for i in 0..m {
            acc += factorial(i + 1) * stirling2(m, i + 1) * closures[&s].f.f(k - 1 - i as i64);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vectors::{f_f_from_k, f_k_from_f, f_to_h, g_of, h_relations_kf, HRelationDirection};

    fn pt(coords: &[i64]) -> Vec<Rational> {
        coords.iter().map(|&c| Rational::from(c)).collect()
    }

    pub(crate) fn two_tetrahedra() -> SummandFamily {
        let t1 = PointSet::new(
            3,
            vec![pt(&[0, 0, 0]), pt(&[4, 0, 1]), pt(&[1, 5, 0]), pt(&[0, 1, 6])],
        )
        .unwrap();
        let t2 = PointSet::new(
            3,
            vec![pt(&[10, 2, 3]), pt(&[13, 9, 2]), pt(&[9, 13, 4]), pt(&[11, 3, 12])],
        )
        .unwrap();
        SummandFamily::new(3, vec![t1, t2]).unwrap()
    }

    #[test]
    fn rejects_r_not_less_than_d() {
        let tri = PointSet::new(2, vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])]).unwrap();
        let err = SummandFamily::new(2, vec![tri.clone(), tri]).unwrap_err();
        assert!(matches!(err, CayleyError::BadArity { r: 2, d: 2 }));
    }

    #[test]
    fn single_summand_cayley_is_the_summand() {
        let fam = two_tetrahedra();
        let cp = build_cayley(&fam, Subset::singleton(0)).unwrap();
        assert_eq!(cp.embedded.dim, 3);
        assert_eq!(
            cp.lattice.f_vector(),
            FVector::from_i64(3, &[1, 4, 6, 4]).unwrap()
        );
        let mf = mixed_faces(&cp, Subset::singleton(0)).unwrap();
        assert_eq!(mf.f, FVector::from_i64(3, &[1, 4, 6, 4]).unwrap());
    }

    #[test]
    fn two_tetrahedra_cayley_polytope() {
        let fam = two_tetrahedra();
        let cp = build_cayley(&fam, Subset::full(2)).unwrap();
        assert_eq!(cp.embedded.dim, 4);
        assert_eq!(cp.embedded.len(), 8);
        assert_eq!(cp.lattice.delta, 4);
        assert!(cp.is_as_simplicial_as_possible());
        // f_{-1}(F_S) bookkeeping
        let f12 = mixed_faces(&cp, Subset::full(2)).unwrap();
        assert_eq!(f12.f.f(-1), Int::from(-1));
        let f1 = mixed_faces(&cp, Subset::singleton(0)).unwrap();
        assert_eq!(f1.f.f(-1), Int::from(1));
        // mixed faces all touch both summands
        for face in &f12.faces {
            assert_eq!(cp.label_set_of(face), Subset::full(2));
        }
    }

    #[test]
    fn closure_union_identity_two_tetrahedra() {
        let fam = two_tetrahedra();
        let inst = Instance::build(&fam).unwrap();
        let r = Subset::full(2);
        // f_k(K_R) = sum_S f_k(F_S) via the vectors module
        let parts: BTreeMap<Subset, FVector> =
            inst.mixed.iter().map(|(s, m)| (*s, m.f.clone())).collect();
        let k_direct = inst.closure(r).unwrap().f.clone();
        assert_eq!(f_k_from_f(&parts, r).unwrap(), k_direct);
        // and the Möbius inverse recovers F_R from the K-closures
        let kparts: BTreeMap<Subset, FVector> =
            inst.closures.iter().map(|(s, c)| (*s, c.f.clone())).collect();
        assert_eq!(f_f_from_k(&kparts, r).unwrap(), inst.mixed(r).unwrap().f);
        // purity of K_R
        assert!(k_direct.f(-1) == Int::one());
        assert!(inst.closure(r).unwrap().pure);
    }

    #[test]
    fn h_relation_matches_direct_closure_count() {
        let fam = two_tetrahedra();
        let inst = Instance::build(&fam).unwrap();
        let r = Subset::full(2);
        let hf: BTreeMap<Subset, _> = inst
            .mixed
            .iter()
            .map(|(s, m)| (*s, f_to_h(&m.f)))
            .collect();
        let hk = h_relations_kf(&hf, r, HRelationDirection::KFromF).unwrap();
        assert_eq!(hk, f_to_h(&inst.closure(r).unwrap().f));
        let hks: BTreeMap<Subset, _> = inst
            .closures
            .iter()
            .map(|(s, c)| (*s, f_to_h(&c.f)))
            .collect();
        let hf_back = h_relations_kf(&hks, r, HRelationDirection::FFromK).unwrap();
        assert_eq!(hf_back, f_to_h(&inst.mixed(r).unwrap().f));
    }

    #[test]
    fn correspondence_two_tetrahedra() {
        let fam = two_tetrahedra();
        let cp = build_cayley(&fam, Subset::full(2)).unwrap();
        let rep = minkowski_correspondence(&cp, &fam).unwrap();
        assert!(rep.matches, "rows: {:?}", rep.rows);
    }

    #[test]
    fn correspondence_is_translation_invariant() {
        let fam = two_tetrahedra();
        let mut shifted = fam.clone();
        for p in &mut shifted.summands[1].points {
            p[0] = &p[0] + &Rational::from(100);
        }
        let a = minkowski_correspondence(&build_cayley(&fam, Subset::full(2)).unwrap(), &fam)
            .unwrap();
        let b = minkowski_correspondence(
            &build_cayley(&shifted, Subset::full(2)).unwrap(),
            &shifted,
        )
        .unwrap();
        assert!(a.matches && b.matches);
        assert_eq!(a.minkowski_f, b.minkowski_f);
    }

    #[test]
    fn degenerate_squares_are_not_as_simplicial_as_possible() {
        // two axis-aligned squares in parallel planes of R^3
        let sq1 = PointSet::new(
            3,
            vec![pt(&[0, 0, 0]), pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[1, 1, 0])],
        )
        .unwrap();
        let sq2 = PointSet::new(
            3,
            vec![pt(&[0, 0, 5]), pt(&[3, 0, 5]), pt(&[0, 3, 5]), pt(&[3, 3, 5])],
        )
        .unwrap();
        let fam = SummandFamily::new_allow_degenerate(3, vec![sq1, sq2]).unwrap();
        let cp = build_cayley(&fam, Subset::full(2)).unwrap();
        assert!(!cp.is_as_simplicial_as_possible());
    }

    #[test]
    fn link_in_f_conventions() {
        let fam = two_tetrahedra();
        let inst = Instance::build(&fam).unwrap();
        let r = Subset::full(2);
        let ms = inst.mixed(r).unwrap();
        // a vertex of summand 1: link is nonempty, never contains ∅ for |R|=2
        let link = link_in_f(ms, 0);
        assert!(!link.contains_empty);
        assert!(link.max_dim() <= inst.d() as i64 + 2 - 3);
        // single-summand case: ordinary vertex link with ∅
        let m1 = inst.mixed(Subset::singleton(0)).unwrap();
        let l1 = link_in_f(m1, 0);
        assert!(l1.contains_empty);
    }

    #[test]
    fn recurrence_equality_raw_check() {
        // (k+1) h_{k+1}(F_R) + (d+|R|-1-k) h_k(F_R) = sum_v h_k(F_R/v)
        let fam = two_tetrahedra();
        let inst = Instance::build(&fam).unwrap();
        let r = Subset::full(2);
        let ms = inst.mixed(r).unwrap();
        let h = f_to_h(&ms.f);
        let n = inst.cp.embedded.len();
        let delta = ms.delta as i64;
        for k in 0..delta {
            let mut rhs = Int::zero();
            for v in 0..n {
                let lh = f_to_h(&ms.link(v).f_vector_literal());
                rhs += lh.h(k);
            }
            let lhs = Int::from(k + 1) * h.h(k + 1) + Int::from(delta - k) * h.h(k);
            assert_eq!(lhs, rhs, "k = {k}");
        }
    }

    #[test]
    fn qr_boundary_two_tetrahedra() {
        let fam = two_tetrahedra();
        let inst = Instance::build(&fam).unwrap();
        let r = Subset::full(2);
        let qr = build_qr_boundary(&inst.mixed, r).unwrap();
        let f = qr.f_vector();
        // one auxiliary vertex per proper nonempty subset
        assert_eq!(qr.aux_index.len(), 2);
        for k in -1..=f.delta as i64 - 1 {
            assert_eq!(f.f(k), qr_f_from_mixed(&inst.mixed, r, k), "F-form k={k}");
            assert_eq!(f.f(k), qr_f_from_closures(&inst.closures, r, k), "K-form k={k}");
        }
        // ∂Q_R is a simplicial polytope boundary: h palindromic
        let h = f_to_h(&f);
        assert!(h.is_palindromic(), "h = {h:?}");
    }

    #[test]
    fn qr_boundary_single_summand_is_identity() {
        let fam = two_tetrahedra();
        let inst = Instance::build(&fam).unwrap();
        let s = Subset::singleton(1);
        let mut just_one = BTreeMap::new();
        just_one.insert(s, inst.mixed(s).unwrap().clone());
        let qr = build_qr_boundary(&just_one, s).unwrap();
        assert!(qr.aux_index.is_empty());
        assert_eq!(qr.f_vector(), inst.mixed(s).unwrap().f);
    }

    #[test]
    fn qr_h_relations_eulerian() {
        // h(∂Q_R) from h(F_S) with Eulerian weights t^{j+1}, and from h(K_S)
        // with weights t^j
        let fam = two_tetrahedra();
        let inst = Instance::build(&fam).unwrap();
        let r = Subset::full(2);
        let qr = build_qr_boundary(&inst.mixed, r).unwrap();
        let hq = f_to_h(&qr.f_vector());
        let delta = qr.delta as i64;
        for k in 0..=delta {
            // F-form: the t^{j+1} weight lands on h_{k+j+1-m}(F_S)
            let mut acc = f_to_h(&inst.mixed(r).unwrap().f).h(k);
            for s in r.proper_nonempty_subsets() {
                let m = (r.len() - s.len()) as i64;
                let hs = f_to_h(&inst.mixed(s).unwrap().f);
                for j in 0..m {
                    acc += crate::combid::eulerian(m as u32, j) * hs.h(k + j + 1 - m);
                }
            }
            assert_eq!(hq.h(k), acc, "F-form k={k}");
            // K-form: the t^j weight lands on h_{k+j-m}(K_S)
            let mut acc2 = f_to_h(&inst.closure(r).unwrap().f).h(k);
            for s in r.proper_nonempty_subsets() {
                let m = (r.len() - s.len()) as i64;
                let hs = f_to_h(&inst.closure(s).unwrap().f);
                for j in 0..m {
                    acc2 += crate::combid::eulerian(m as u32, j) * hs.h(k + j - m);
                }
            }
            assert_eq!(hq.h(k), acc2, "K-form k={k}");
        }
        let _ = g_of(&hq, 0, 0);
    }
}
