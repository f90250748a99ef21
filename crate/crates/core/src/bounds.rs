//! The upper-bound tables: the recursively defined functions Φ^{(m)} and Ψ,
//! the spans bound for mixed-face counts, cyclic-polytope face numbers, and
//! the neighborliness predicates with their equality characterizations.
//!
//! Inside these formulas the binomial is the polynomial one
//! (`binom_poly`), which keeps C(x, 0) = 1 for negative x; the alternating
//! subset sums rely on that. The combinatorial convention would silently
//! change Φ at small indices whenever some n_S < d + |R|.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num::Zero;
use serde::Serialize;

use crate::arith::{binom, binom_poly, serde_int, Int};
use crate::cayley::Instance;
use crate::geom::VertexSet;
use crate::laws::{verdict_le, CheckRow, LawCheck, Verdict};
use crate::subset::Subset;
use crate::vectors::{f_to_h, FVector};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("cyclic polytope needs n >= delta+1, got n = {n}, delta = {delta}")]
    TooFewVertices { n: usize, delta: usize },
    #[error("missing vertex count for summand {0}")]
    MissingCount(usize),
    #[error("need n_i >= d+1 for all i (summand {0} has {1}, d = {2})")]
    CountTooSmall(usize, usize, usize),
}

/// Exact f-vector of the cyclic polytope C_δ(n).
pub fn cyclic_f(delta: usize, n: usize) -> Result<FVector, BoundsError> {
    if n < delta + 1 {
        return Err(BoundsError::TooFewVertices { n, delta });
    }
    let entries = (0..=delta as i64)
        .map(|k| cyclic_f_formal(delta, n as i64, k))
        .collect();
    Ok(FVector::new(delta, entries).expect("delta+1 entries"))
}

/// The starred-sum face formula of C_δ(n) evaluated formally (polynomial
/// binomials), which is what the spans definition consumes for small n_S.
/// Returns the number of (k-1)-faces; k = 0 gives 1.
fn cyclic_f_formal(delta: usize, n: i64, k: i64) -> Int {
    let delta = delta as i64;
    let mut acc = Int::zero();
    for i in 0..=delta / 2 {
        let mut coeff = binom(delta - i, k - i);
        if !(delta % 2 == 0 && i == delta / 2) {
            coeff += binom(i, k - delta + i);
        }
        acc += coeff * binom_poly(n - delta - 1 + i, i);
    }
    acc
}

/// Memoized evaluator for Φ^{(m)}_k, Ψ_k and spans_k over a fixed dimension
/// and vertex-count assignment.
#[derive(Debug)]
pub struct BoundEngine {
    d: usize,
    n: BTreeMap<usize, usize>,
    memo: RefCell<HashMap<(u32, usize, i64), Int>>,
}

impl BoundEngine {
    pub fn new(d: usize, n: BTreeMap<usize, usize>) -> Result<Self, BoundsError> {
        for (&i, &ni) in &n {
            if ni < d + 1 {
                return Err(BoundsError::CountTooSmall(i, ni, d));
            }
        }
        Ok(BoundEngine { d, n, memo: RefCell::new(HashMap::new()) })
    }

    pub fn for_family(fam: &crate::cayley::SummandFamily) -> Result<Self, BoundsError> {
        Self::new(fam.d, (0..fam.r()).map(|i| (i, fam.n(i))).collect())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    fn n_of(&self, s: Subset) -> Result<i64, BoundsError> {
        let mut acc = 0i64;
        for i in s.iter() {
            acc += *self.n.get(&i).ok_or(BoundsError::MissingCount(i))? as i64;
        }
        Ok(acc)
    }

    fn delta_of(&self, s: Subset) -> i64 {
        self.d as i64 + s.len() as i64 - 1
    }

    /// Φ^{(m)}_k(S); zero for empty S or out-of-range k.
    pub fn phi(&self, s: Subset, m: usize, k: i64) -> Result<Int, BoundsError> {
        if s.is_empty() {
            return Ok(Int::zero());
        }
        if let Some(v) = self.memo.borrow().get(&(s.0, m, k)) {
            return Ok(v.clone());
        }
        let v = if m > 0 {
            self.phi(s, m - 1, k)? - self.phi(s, m - 1, k - 1)?
        } else {
            let delta = self.delta_of(s);
            if k < 0 || k > delta {
                Int::zero()
            } else if 2 * k <= delta {
                // the closed lower-half form
                let mut acc = Int::zero();
                for x in s.nonempty_subsets() {
                    let term = binom_poly(self.n_of(x)? - self.d as i64 - s.len() as i64 + k, k);
                    if (s.len() - x.len()) % 2 == 1 {
                        acc -= term;
                    } else {
                        acc += term;
                    }
                }
                acc
            } else {
                self.psi(s, delta - k)?
            }
        };
        self.memo.borrow_mut().insert((s.0, m, k), v.clone());
        Ok(v)
    }

    /// Ψ_k(S) = sum over nonempty X ⊆ S of Φ^{(|S|-|X|)}_k(X).
    pub fn psi(&self, s: Subset, k: i64) -> Result<Int, BoundsError> {
        let mut acc = Int::zero();
        for x in s.nonempty_subsets() {
            acc += self.phi(x, s.len() - x.len(), k)?;
        }
        Ok(acc)
    }

    /// spans_k(S) by the displayed definition: the alternating formal-cyclic
    /// sum plus the proper-subset correction. Cross-checked on every call
    /// against the Φ-transform route, and against the simplified alternating
    /// binomial form on the lower half; those are identities, so any
    /// disagreement is a bug.
    pub fn spans(&self, s: Subset, k: i64) -> Result<Int, BoundsError> {
        let delta = self.delta_of(s);
        let mut displayed = Int::zero();
        for x in s.nonempty_subsets() {
            let term = cyclic_f_formal(delta as usize, self.n_of(x)?, k);
            if (s.len() - x.len()) % 2 == 1 {
                displayed -= term;
            } else {
                displayed += term;
            }
        }
        for i in 0..=(delta - 1) / 2 {
            let coeff = binom(i, k - delta + i);
            if coeff.is_zero() {
                continue;
            }
            let mut correction = Int::zero();
            for x in s.proper_nonempty_subsets() {
                correction += self.phi(x, s.len() - x.len(), i)?;
            }
            displayed += coeff * correction;
        }

        let mut via_phi = Int::zero();
        for i in 0..=delta {
            via_phi += binom(delta - i, k - i) * self.phi(s, 0, i)?;
        }
        assert_eq!(
            displayed, via_phi,
            "spans routes disagree at S={s:?}, k={k} (d={}, n={:?})",
            self.d, self.n
        );
        if k >= 0 && 2 * k <= delta {
            let mut simplified = Int::zero();
            for x in s.nonempty_subsets() {
                let term = binom(self.n_of(x)?, k);
                if (s.len() - x.len()) % 2 == 1 {
                    simplified -= term;
                } else {
                    simplified += term;
                }
            }
            assert_eq!(
                displayed, simplified,
                "spans lower-half simplification disagrees at S={s:?}, k={k}"
            );
        }
        Ok(displayed)
    }

    /// The lower-half recurrence that Φ must satisfy, checked over exact
    /// integers after clearing the k+1 denominator:
    /// (k+1)Φ_{k+1}(R) = (n_R-d-|R|+k+1)Φ_k(R) + sum_i n_i Φ^{(1)}_k(R\{i}),
    /// for every k with k+1 still in the lower half (beyond it Φ_{k+1} is
    /// the Ψ-dual value and the identity genuinely stops holding).
    pub fn phi_recurrence_check(&self, s: Subset) -> Result<bool, BoundsError> {
        let delta = self.delta_of(s);
        for k in 0..=(delta / 2 - 1).max(0) {
            let lhs = Int::from(k + 1) * self.phi(s, 0, k + 1)?;
            let mut rhs = Int::from(self.n_of(s)? - delta + k) * self.phi(s, 0, k)?;
            for i in s.iter() {
                rhs += Int::from(self.n[&i] as i64) * self.phi(s.remove(i), 1, k)?;
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Materialized bound tables for one (d, R, n) context.
#[derive(Clone, Debug, Serialize)]
pub struct BoundTable {
    pub d: usize,
    pub r_set: Subset,
    pub n: BTreeMap<usize, usize>,
    /// n_S per nonempty subset
    pub n_s: BTreeMap<String, usize>,
    /// Φ^{(m)}_k(S) rows keyed "S|m|k"
    pub phi: BTreeMap<String, PhiRow>,
    /// Ψ_k(S) rows keyed "S|k"
    pub psi: BTreeMap<String, PsiRow>,
    /// spans_k(S) rows keyed "S|k"
    pub spans: BTreeMap<String, PsiRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiRow {
    pub subset: Subset,
    pub m: usize,
    pub k: i64,
    #[serde(with = "serde_int")]
    pub value: Int,
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiRow {
    pub subset: Subset,
    pub k: i64,
    #[serde(with = "serde_int")]
    pub value: Int,
}

/// Builds the full table for every nonempty S ⊆ R, orders m up to |R|-|S|,
/// indices 0..=d+|S|-1.
pub fn bound_table(
    d: usize,
    r: usize,
    n: BTreeMap<usize, usize>,
) -> Result<BoundTable, BoundsError> {
    let engine = BoundEngine::new(d, n.clone())?;
    let r_set = Subset::full(r);
    let mut phi = BTreeMap::new();
    let mut psi = BTreeMap::new();
    let mut spans = BTreeMap::new();
    let mut n_s = BTreeMap::new();
    for s in r_set.nonempty_subsets() {
        let delta = engine.delta_of(s);
        n_s.insert(format!("{s}"), engine.n_of(s)? as usize);
        for m in 0..=(r - s.len()) {
            for k in 0..=delta + m as i64 {
                let value = engine.phi(s, m, k)?;
                phi.insert(format!("{s}|{m}|{k}"), PhiRow { subset: s, m, k, value });
            }
        }
        for k in 0..=delta {
            psi.insert(
                format!("{s}|{k}"),
                PsiRow { subset: s, k, value: engine.psi(s, k)? },
            );
            spans.insert(
                format!("{s}|{k}"),
                PsiRow { subset: s, k, value: engine.spans(s, k)? },
            );
        }
    }
    Ok(BoundTable { d, r_set, n, n_s, phi, psi, spans })
}

/// h_k(F_R) <= Φ_k(R) for all 0 <= k <= d+|R|-1.
pub fn check_phi_bound(inst: &Instance, r: Subset) -> Result<LawCheck, BoundsError> {
    let engine = BoundEngine::for_family(&inst.cp.family)?;
    let h = f_to_h(&inst.mixed.get(&r).expect("slice present").f);
    let delta = engine.delta_of(r);
    let rows = (0..=delta)
        .map(|k| {
            Ok(CheckRow { k, lhs: h.h(k), rhs: engine.phi(r, 0, k)? })
        })
        .collect::<Result<Vec<_>, BoundsError>>()?;
    let verdict = verdict_le(&rows);
    Ok(LawCheck {
        law: "phi_bound".into(),
        statement: "h_k(F_R) <= Phi_k(R)".into(),
        subset: r,
        verdict,
        rows,
    })
}

/// h_k(K_R) <= Ψ_k(R) for all 0 <= k <= d+|R|-1.
pub fn check_psi_bound(inst: &Instance, r: Subset) -> Result<LawCheck, BoundsError> {
    let engine = BoundEngine::for_family(&inst.cp.family)?;
    let h = f_to_h(&inst.closures.get(&r).expect("slice present").f);
    let delta = engine.delta_of(r);
    let rows = (0..=delta)
        .map(|k| Ok(CheckRow { k, lhs: h.h(k), rhs: engine.psi(r, k)? }))
        .collect::<Result<Vec<_>, BoundsError>>()?;
    let verdict = verdict_le(&rows);
    Ok(LawCheck {
        law: "psi_bound".into(),
        statement: "h_k(K_R) <= Psi_k(R)".into(),
        subset: r,
        verdict,
        rows,
    })
}

/// f_{k-1}(F_R) <= spans_k(R) for |R| <= k <= d+|R|-1, reported at the
/// mixed-face level (the normative form) and in the Minkowski-sum
/// restatement f_{k-1}(sum) <= spans_{k+r-1}([r]) obtained through the
/// face-count correspondence.
#[derive(Clone, Debug, Serialize)]
pub struct UbtmReport {
    pub subset: Subset,
    pub f_level: Vec<CheckRow>,
    pub minkowski_level: Vec<CheckRow>,
    pub holds: bool,
}

pub fn ubtm_bound_report(inst: &Instance, r: Subset) -> Result<UbtmReport, BoundsError> {
    let engine = BoundEngine::for_family(&inst.cp.family)?;
    let f = &inst.mixed.get(&r).expect("slice present").f;
    let rsize = r.len() as i64;
    let delta = engine.delta_of(r);
    let mut f_level = Vec::new();
    for k in rsize..=delta {
        f_level.push(CheckRow { k, lhs: f.f(k - 1), rhs: engine.spans(r, k)? });
    }
    // Minkowski restatement: f_{k-1}(sum) = f_{k+r-2}(F_R) <= spans_{k+r-1}
    let mut minkowski_level = Vec::new();
    for k in 1..=(delta - rsize + 1) {
        minkowski_level.push(CheckRow {
            k,
            lhs: f.f(k + rsize - 2),
            rhs: engine.spans(r, k + rsize - 1)?,
        });
    }
    let holds = verdict_le(&f_level) == Verdict::Passed;
    Ok(UbtmReport { subset: r, f_level, minkowski_level, holds })
}

/// Outcome of the R-neighborliness test by exhaustive spanning-subset
/// enumeration against the enumerated face lattice.
#[derive(Clone, Debug, Serialize)]
pub struct NeighborlinessVerdict {
    pub subset: Subset,
    pub is_neighborly: bool,
    /// first spanning subset (global vertex indices) that is not a face
    pub witness: Option<Vec<usize>>,
    /// inclusive size range of the spanning subsets checked
    pub checked_sizes: (usize, usize),
}

/// Every spanning subset of ∪_{i∈R} V_i of size |R| <= l <= (d+|R|-1)/2
/// must be a face of C_R.
pub fn is_r_neighborly(inst: &Instance, r: Subset) -> NeighborlinessVerdict {
    let d = inst.d();
    let lo = r.len();
    let hi = (d + r.len() - 1) / 2;
    let closure = inst.closures.get(&r).expect("slice present");
    let verts: Vec<usize> = inst.cp.vertex_set_of(r).indices();
    let n_total = inst.cp.embedded.len();
    for size in lo..=hi.max(lo).min(verts.len()) {
        if size > hi {
            break;
        }
        for combo in verts.iter().copied().combinations(size) {
            let mut labels = Subset::EMPTY;
            for &v in &combo {
                labels = labels.insert(inst.cp.labels[v]);
            }
            if labels != r {
                continue;
            }
            let face = VertexSet::from_indices(n_total, combo.iter().copied());
            if !closure.contains(&face) {
                return NeighborlinessVerdict {
                    subset: r,
                    is_neighborly: false,
                    witness: Some(combo),
                    checked_sizes: (lo, hi),
                };
            }
        }
    }
    NeighborlinessVerdict { subset: r, is_neighborly: true, witness: None, checked_sizes: (lo, hi) }
}

/// The three equivalent characterizations of R-neighborliness, evaluated
/// independently over the whole lower half; they must agree.
#[derive(Clone, Debug, Serialize)]
pub struct NeighborlyEquivalence {
    pub subset: Subset,
    pub spanning_subsets_are_faces: bool,
    pub f_formula_holds: bool,
    pub h_formula_holds: bool,
    pub consistent: bool,
}

pub fn neighborly_equivalence_check(
    inst: &Instance,
    r: Subset,
) -> Result<NeighborlyEquivalence, BoundsError> {
    let d = inst.d() as i64;
    let rsize = r.len() as i64;
    let delta = d + rsize - 1;
    let fam = &inst.cp.family;
    let ms = inst.mixed.get(&r).expect("slice present");
    let h = f_to_h(&ms.f);

    let cond_i = is_r_neighborly(inst, r).is_neighborly;

    let mut cond_ii = true;
    let mut cond_iii = true;
    for ell in 0..=delta / 2 {
        let mut f_expected = Int::zero();
        let mut h_expected = Int::zero();
        for x in r.nonempty_subsets() {
            let n_x = fam.n_of(x) as i64;
            let ft = binom(n_x, ell);
            let ht = binom_poly(n_x - d - rsize + ell, ell);
            if (r.len() - x.len()) % 2 == 1 {
                f_expected -= ft;
                h_expected -= ht;
            } else {
                f_expected += ft;
                h_expected += ht;
            }
        }
        if ms.f.f(ell - 1) != f_expected {
            cond_ii = false;
        }
        if h.h(ell) != h_expected {
            cond_iii = false;
        }
    }
    let consistent = cond_i == cond_ii && cond_ii == cond_iii;
    Ok(NeighborlyEquivalence {
        subset: r,
        spanning_subsets_are_faces: cond_i,
        f_formula_holds: cond_ii,
        h_formula_holds: cond_iii,
        consistent,
    })
}
