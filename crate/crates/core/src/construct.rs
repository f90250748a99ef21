//! The tightness construction: r moment-like curves, a parameter schedule
//! (grid points x_{i,j}, a small ε shift, exponents β_i, padding values M'),
//! and a two-phase halving search for τ and ζ that makes every spanning
//! subset of every Cayley sub-polytope a face.
//!
//! The supporting-hyperplane determinants are the fast pre-filter; the
//! ground truth is always full hull enumeration plus the neighborliness
//! predicate.

use std::collections::BTreeMap;

use num::Zero;
use serde::Serialize;

use crate::arith::{Matrix, Rational};
use crate::bounds::{is_r_neighborly, BoundEngine, NeighborlinessVerdict};
use crate::cayley::{Instance, SummandFamily};
use crate::geom::PointSet;
use crate::laws::{verdict_equal, CheckRow, Verdict};
use crate::subset::Subset;

#[derive(Debug, thiserror::Error)]
pub enum ConstructError {
    #[error("parameter ordering violated: {0}")]
    Ordering(String),
    #[error("need 1 <= r < d, got r = {r}, d = {d}")]
    BadArity { r: usize, d: usize },
    #[error("search budget exhausted in the {phase} phase; last violation: {witness}")]
    BudgetExhausted { phase: &'static str, witness: String },
    #[error("zeta must be positive for the perturbed determinant")]
    ZetaZero,
    #[error("malformed spanning subset: {0}")]
    BadSpanningSubset(String),
    #[error(transparent)]
    Cayley(#[from] crate::cayley::CayleyError),
    #[error(transparent)]
    Bounds(#[from] crate::bounds::BoundsError),
}

/// Full parameter schedule of the construction.
#[derive(Clone, Debug, Serialize)]
pub struct ConstructionParams {
    pub d: usize,
    pub r: usize,
    pub n: Vec<usize>,
    /// x_{i,j} per summand, strictly increasing, with x_{i,n_i} < x_{i+1,1}
    pub x: Vec<Vec<Rational>>,
    pub epsilon: Rational,
    /// strictly decreasing non-negative exponents, β_r smallest
    pub beta: Vec<u32>,
    /// padding values M'_1 < ... < M'_{d+r}, above every x + ε
    pub m_prime: Vec<Rational>,
    pub tau: Rational,
    pub zeta: Rational,
}

impl ConstructionParams {
    /// The default integer grid: x_{i,j} = (i-1)·n_max + j, ε = 1/100,
    /// β_i = r - i, M'_s = x_{r,n_r} + s, with τ = ζ = 1 as search starts.
    pub fn default_schedule(d: usize, r: usize, n: &[usize]) -> Result<Self, ConstructError> {
        if r == 0 || r >= d {
            return Err(ConstructError::BadArity { r, d });
        }
        assert_eq!(n.len(), r);
        let n_max = *n.iter().max().expect("r >= 1") as i64;
        let x: Vec<Vec<Rational>> = (0..r)
            .map(|i| {
                (1..=n[i] as i64)
                    .map(|j| Rational::from(i as i64 * n_max + j))
                    .collect()
            })
            .collect();
        let top = x[r - 1].last().expect("n_i >= 1").clone();
        let m_prime = (1..=(d + r) as i64).map(|s| &top + &Rational::from(s)).collect();
        let params = ConstructionParams {
            d,
            r,
            n: n.to_vec(),
            x,
            epsilon: Rational::new(1.into(), 100.into()).expect("nonzero"),
            beta: (0..r).map(|i| (r - 1 - i) as u32).collect(),
            m_prime,
            tau: Rational::one(),
            zeta: Rational::one(),
        };
        params.validate()?;
        Ok(params)
    }

    /// Checks the ordering chain the construction relies on.
    pub fn validate(&self) -> Result<(), ConstructError> {
        let bad = |msg: &str| Err(ConstructError::Ordering(msg.to_string()));
        if self.r == 0 || self.r >= self.d {
            return Err(ConstructError::BadArity { r: self.r, d: self.d });
        }
        if self.epsilon.signum() <= 0 {
            return bad("epsilon must be positive");
        }
        if self.tau.signum() <= 0 {
            return bad("tau must be positive");
        }
        if self.zeta.signum() < 0 {
            return bad("zeta must be non-negative");
        }
        for i in 0..self.r {
            if self.x[i].len() != self.n[i] {
                return bad("x row length must equal n_i");
            }
            for j in 0..self.n[i] {
                if self.x[i][j].signum() <= 0 {
                    return bad("x values must be positive");
                }
                if j + 1 < self.n[i] && &self.x[i][j] + &self.epsilon >= self.x[i][j + 1] {
                    return bad("need x_{i,j} + epsilon < x_{i,j+1}");
                }
            }
            if i + 1 < self.r && self.x[i].last() >= self.x[i + 1].first() {
                return bad("need x_{i,n_i} < x_{i+1,1}");
            }
        }
        if self.m_prime.len() != self.d + self.r {
            return bad("need d + r padding values");
        }
        let top = self.x[self.r - 1].last().expect("n_r >= 1") + &self.epsilon;
        if self.m_prime[0] <= top {
            return bad("M'_1 must exceed x_{r,n_r} + epsilon");
        }
        for w in self.m_prime.windows(2) {
            if w[0] >= w[1] {
                return bad("M' values must increase");
            }
        }
        for w in self.beta.windows(2) {
            if w[0] <= w[1] {
                return bad("beta must strictly decrease");
            }
        }
        Ok(())
    }

    fn tau_pow(&self, beta: u32) -> Rational {
        self.tau.pow(beta as i32).expect("tau positive")
    }

    /// curve parameter y_{i,j} = x_{i,j} τ^{β_i}
    pub fn y(&self, i: usize, j: usize) -> Rational {
        &self.x[i][j] * &self.tau_pow(self.beta[i])
    }

    /// shifted companion (x_{i,j} + ε) τ^{β_i}
    pub fn y_shifted(&self, i: usize, j: usize) -> Rational {
        (&self.x[i][j] + &self.epsilon) * self.tau_pow(self.beta[i])
    }

    /// padding value M_s = M'_s τ^{β_r}
    pub fn m_val(&self, s: usize) -> Rational {
        &self.m_prime[s] * &self.tau_pow(self.beta[self.r - 1])
    }
}

/// The moment-like curve of summand i (0-based) at parameter t:
/// slot i carries t, the other cross slots j carry ζ t^{d-r+2+j}, and the
/// tail carries t^2, ..., t^{d-r+1}.
pub fn curve_point(d: usize, r: usize, i: usize, t: &Rational, zeta: &Rational) -> Vec<Rational> {
    let mut x = Vec::with_capacity(d);
    for j in 0..r {
        if j == i {
            x.push(t.clone());
        } else {
            x.push(zeta * &t.pow((d - r + 2 + j) as i32).expect("positive t"));
        }
    }
    for m in 0..d - r {
        x.push(t.pow((m + 2) as i32).expect("positive t"));
    }
    x
}

/// The r summands of the construction at the schedule's (τ, ζ).
pub fn generate_family(params: &ConstructionParams) -> Result<SummandFamily, ConstructError> {
    params.validate()?;
    let summands = (0..params.r)
        .map(|i| {
            let points = (0..params.n[i])
                .map(|j| curve_point(params.d, params.r, i, &params.y(i, j), &params.zeta))
                .collect();
            PointSet { dim: params.d, points, labels: None }
        })
        .collect();
    Ok(SummandFamily::new_allow_degenerate(params.d, summands)?)
}

/// A spanning subset for the determinant machinery: per summand in R, the
/// (0-based) grid indices of its chosen points.
pub type SpanningSelection = BTreeMap<usize, Vec<usize>>;

fn selection_subset(u: &SpanningSelection) -> Subset {
    let mut s = Subset::EMPTY;
    for &i in u.keys() {
        s = s.insert(i);
    }
    s
}

/// Parity of the row swaps that move the cross rows of summands outside R
/// to the bottom of the determinant.
fn sigma(d: usize, r: usize, r_set: Subset) -> u32 {
    let outside: Vec<usize> = (0..r).filter(|&j| !r_set.contains(j)).collect();
    let m = outside.len();
    let mut total = 0i64;
    for (t, &j0) in outside.iter().enumerate() {
        let j = (j0 + 1) as i64; // 1-based slot
        total += d as i64 - j - m as i64 + (t as i64 + 1);
    }
    total.rem_euclid(2) as u32
}

fn det_sign(d: usize, r: usize, r_set: Subset) -> i32 {
    let s = r_set.len() as u32;
    let exp = s * (s - 1) / 2 + sigma(d, r, r_set);
    if exp % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Cayley coordinates (e_p, x) of a curve point for the sub-polytope over
/// `r_set`; `pos` is the summand's position within the sorted subset.
fn cayley_column(pos: usize, s: usize, x: &[Rational]) -> Vec<Rational> {
    let mut col = Vec::with_capacity(s + x.len());
    col.push(Rational::one());
    for p in 1..s {
        col.push(if p == pos { Rational::one() } else { Rational::zero() });
    }
    col.extend(x.iter().cloned());
    col
}

fn build_det_columns(
    params: &ConstructionParams,
    u: &SpanningSelection,
    probe: &[Rational],
    probe_pos: usize,
    zeta: &Rational,
) -> Result<Vec<Vec<Rational>>, ConstructError> {
    let r_set = selection_subset(u);
    let members: Vec<usize> = r_set.iter().collect();
    let s = members.len();
    let d = params.d;
    let size = d + s;
    let total: usize = u.values().map(Vec::len).sum();
    let pad = (d + s - 1)
        .checked_sub(2 * total)
        .ok_or_else(|| ConstructError::BadSpanningSubset("selection too large".into()))?;
    if pad > params.m_prime.len() {
        return Err(ConstructError::BadSpanningSubset("not enough padding values".into()));
    }
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(size);
    cols.push(cayley_column(probe_pos, s, probe));
    for (pos, &i) in members.iter().enumerate() {
        for &j in &u[&i] {
            if j >= params.n[i] {
                return Err(ConstructError::BadSpanningSubset(format!(
                    "index {j} out of range for summand {i}"
                )));
            }
            let p1 = curve_point(d, params.r, i, &params.y(i, j), zeta);
            let p2 = curve_point(d, params.r, i, &params.y_shifted(i, j), zeta);
            cols.push(cayley_column(pos, s, &p1));
            cols.push(cayley_column(pos, s, &p2));
        }
    }
    let last = *members.last().expect("nonempty subset");
    for t in 0..pad {
        let m = params.m_val(t);
        let p = curve_point(d, params.r, last, &m, zeta);
        cols.push(cayley_column(s - 1, s, &p));
    }
    debug_assert!(cols.iter().all(|c| c.len() == size));
    Ok(cols)
}

fn det_of_columns(cols: Vec<Vec<Rational>>) -> Rational {
    let size = cols.len();
    let rows: Vec<Vec<Rational>> = (0..size)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    Matrix::from_rows(rows).expect("square").det().expect("square")
}

/// The signed supporting-hyperplane value
/// (-1)^{|R|(|R|-1)/2 + σ(R)} ζ^{|R|-r} D_U(probe; ζ) for ζ > 0, where the
/// probe is the vertex (summand `probe_i`, grid index `probe_j`).
pub fn hyperplane_det(
    params: &ConstructionParams,
    u: &SpanningSelection,
    probe_i: usize,
    probe_j: usize,
) -> Result<Rational, ConstructError> {
    if params.zeta.is_zero() {
        return Err(ConstructError::ZetaZero);
    }
    let r_set = selection_subset(u);
    let members: Vec<usize> = r_set.iter().collect();
    let probe_pos = members
        .iter()
        .position(|&i| i == probe_i)
        .ok_or_else(|| ConstructError::BadSpanningSubset("probe summand outside R".into()))?;
    let probe = curve_point(params.d, params.r, probe_i, &params.y(probe_i, probe_j), &params.zeta);
    let cols = build_det_columns(params, u, &probe, probe_pos, &params.zeta)?;
    let det = det_of_columns(cols);
    let sign = Rational::from(det_sign(params.d, params.r, r_set) as i64);
    let zeta_pow = params
        .zeta
        .pow(r_set.len() as i32 - params.r as i32)
        .expect("zeta positive here");
    Ok(sign * zeta_pow * det)
}

/// The ζ -> 0 limit of the signed value, evaluated on the unperturbed
/// family: cross rows of summands outside R are replaced by their
/// ζ-quotients (pure powers; the probe contributes 0 there).
pub fn hyperplane_det_limit(
    params: &ConstructionParams,
    u: &SpanningSelection,
    probe_i: usize,
    probe_j: usize,
) -> Result<Rational, ConstructError> {
    let r_set = selection_subset(u);
    let members: Vec<usize> = r_set.iter().collect();
    let probe_pos = members
        .iter()
        .position(|&i| i == probe_i)
        .ok_or_else(|| ConstructError::BadSpanningSubset("probe summand outside R".into()))?;
    let zero = Rational::zero();
    let probe = curve_point(params.d, params.r, probe_i, &params.y(probe_i, probe_j), &zero);
    let mut cols = build_det_columns(params, u, &probe, probe_pos, &zero)?;
    // rows for cross slots outside R sit at index |R| + slot (0-based slot);
    // restore their ζ-coefficients column by column
    let s = members.len();
    for (c, col) in cols.iter_mut().enumerate() {
        // column 0 is the probe (coefficient 0); curve columns follow
        let source: Option<(usize, Rational)> = if c == 0 {
            None
        } else {
            // which summand and parameter produced this column?
            let mut idx = c - 1;
            let mut found = None;
            'outer: for (pos, &i) in members.iter().enumerate() {
                let cnt = u[&i].len() * 2;
                if idx < cnt {
                    let j = u[&i][idx / 2];
                    let t = if idx % 2 == 0 { params.y(i, j) } else { params.y_shifted(i, j) };
                    found = Some((pos, t));
                    break 'outer;
                }
                idx -= cnt;
            }
            Some(found.unwrap_or_else(|| (s - 1, params.m_val(idx))))
        };
        for j0 in 0..params.r {
            if r_set.contains(j0) {
                continue;
            }
            let row = s + j0;
            col[row] = match &source {
                None => Rational::zero(),
                Some((_, t)) => t.pow((params.d - params.r + 2 + j0) as i32).expect("positive"),
            };
        }
    }
    let det = det_of_columns(cols);
    Ok(Rational::from(det_sign(params.d, params.r, r_set) as i64) * det)
}

/// All spanning selections over the nonempty subsets of [r], with sizes
/// between |R| and (d+|R|-1)/2, paired with their probe vertices.
fn sweep_selections(params: &ConstructionParams) -> Vec<(SpanningSelection, usize, usize)> {
    use itertools::Itertools;
    let mut out = Vec::new();
    for r_set in Subset::full(params.r).nonempty_subsets() {
        let members: Vec<usize> = r_set.iter().collect();
        let hi = (params.d + members.len() - 1) / 2;
        if hi < members.len() {
            continue;
        }
        // distribute sizes kappa_i >= 1 with sum <= hi
        let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(0, Vec::new(), 0)];
        let mut distributions = Vec::new();
        while let Some((idx, acc, total)) = stack.pop() {
            if idx == members.len() {
                distributions.push(acc);
                continue;
            }
            let remaining = members.len() - idx - 1;
            for kappa in 1..=(hi - total).saturating_sub(remaining) {
                let mut next = acc.clone();
                next.push(kappa);
                stack.push((idx + 1, next, total + kappa));
            }
        }
        for dist in distributions {
            let choices: Vec<Vec<Vec<usize>>> = members
                .iter()
                .zip(&dist)
                .map(|(&i, &kappa)| (0..params.n[i]).combinations(kappa).collect())
                .collect();
            let mut idxs = vec![0usize; members.len()];
            loop {
                let sel: SpanningSelection = members
                    .iter()
                    .enumerate()
                    .map(|(pos, &i)| (i, choices[pos][idxs[pos]].clone()))
                    .collect();
                for &i in &members {
                    for j in 0..params.n[i] {
                        if !sel[&i].contains(&j) {
                            out.push((sel.clone(), i, j));
                        }
                    }
                }
                // advance the mixed-radix counter
                let mut pos = 0;
                loop {
                    if pos == members.len() {
                        break;
                    }
                    idxs[pos] += 1;
                    if idxs[pos] < choices[pos].len() {
                        break;
                    }
                    idxs[pos] = 0;
                    pos += 1;
                }
                if pos == members.len() {
                    break;
                }
            }
        }
    }
    out
}

/// Search outcome: the certified pair and the iteration bookkeeping.
#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub tau: Rational,
    pub zeta: Rational,
    pub tau_iterations: u32,
    pub zeta_iterations: u32,
    /// the last determinant violation seen before success, if any
    pub last_violation: Option<String>,
}

/// Two-phase halving: τ first (against the ζ -> 0 limit determinants),
/// then ζ at the found τ, with the final candidate certified by full hull
/// enumeration and the neighborliness predicate on every subset.
pub fn search_tau_zeta(
    params: &ConstructionParams,
    budget: u32,
) -> Result<(ConstructionParams, SearchOutcome), ConstructError> {
    let sweep = sweep_selections(params);
    let mut p = params.clone();
    let mut last_violation: Option<String> = None;

    let mut tau_iterations = 0;
    loop {
        if tau_iterations >= budget {
            return Err(ConstructError::BudgetExhausted {
                phase: "tau",
                witness: last_violation.unwrap_or_else(|| "no violation recorded".into()),
            });
        }
        tau_iterations += 1;
        let bad = sweep.iter().find(|(u, i, j)| {
            hyperplane_det_limit(&p, u, *i, *j)
                .map(|v| v.signum() <= 0)
                .unwrap_or(true)
        });
        match bad {
            None => break,
            Some((u, i, j)) => {
                last_violation = Some(format!("tau={} U={:?} probe=({},{})", p.tau, u, i, j));
                p.tau = &p.tau / &Rational::from(2);
            }
        }
    }

    let mut zeta_iterations = 0;
    loop {
        if zeta_iterations >= budget {
            return Err(ConstructError::BudgetExhausted {
                phase: "zeta",
                witness: last_violation.unwrap_or_else(|| "no violation recorded".into()),
            });
        }
        zeta_iterations += 1;
        let bad = sweep.iter().find(|(u, i, j)| {
            hyperplane_det(&p, u, *i, *j)
                .map(|v| v.signum() <= 0)
                .unwrap_or(true)
        });
        if let Some((u, i, j)) = bad {
            last_violation = Some(format!("zeta={} U={:?} probe=({},{})", p.zeta, u, i, j));
            p.zeta = &p.zeta / &Rational::from(2);
            continue;
        }
        // determinants all positive: confirm by enumeration (ground truth)
        let family = generate_family(&p)?;
        let inst = Instance::build(&family)?;
        let all_neighborly = Subset::full(p.r)
            .nonempty_subsets()
            .all(|s| is_r_neighborly(&inst, s).is_neighborly);
        if all_neighborly {
            let outcome = SearchOutcome {
                tau: p.tau.clone(),
                zeta: p.zeta.clone(),
                tau_iterations,
                zeta_iterations,
                last_violation,
            };
            return Ok((p, outcome));
        }
        last_violation = Some(format!("zeta={} passed determinants but not enumeration", p.zeta));
        p.zeta = &p.zeta / &Rational::from(2);
    }
}

/// Tightness certificate: neighborliness of every nonempty S ⊆ [r] plus
/// the lower-half equalities f_{k-1}(F_S) = spans_k(S).
#[derive(Clone, Debug, Serialize)]
pub struct TightnessReport {
    pub neighborly: Vec<NeighborlinessVerdict>,
    pub equalities: Vec<SubsetEqualities>,
    pub minkowski_neighborly: bool,
    pub tight: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubsetEqualities {
    pub subset: Subset,
    /// rows (k, f_{k-1}(F_S), spans_k(S)) over the lower half
    pub rows: Vec<CheckRow>,
    pub exact: bool,
}

pub fn certify_tightness(family: &SummandFamily) -> Result<TightnessReport, ConstructError> {
    let inst = Instance::build(family)?;
    let engine = BoundEngine::for_family(family)?;
    let mut neighborly = Vec::new();
    let mut equalities = Vec::new();
    let mut all_neighborly = true;
    let mut all_exact = true;
    for s in Subset::full(family.r()).nonempty_subsets() {
        let verdict = is_r_neighborly(&inst, s);
        all_neighborly &= verdict.is_neighborly;
        neighborly.push(verdict);
        let delta = (family.d + s.len() - 1) as i64;
        let f = &inst.mixed.get(&s).expect("slice present").f;
        let rows: Vec<CheckRow> = (s.len() as i64..=delta / 2)
            .map(|k| {
                Ok(CheckRow { k, lhs: f.f(k - 1), rhs: engine.spans(s, k)? })
            })
            .collect::<Result<_, ConstructError>>()?;
        let exact = verdict_equal(&rows) == Verdict::Passed;
        all_exact &= exact;
        equalities.push(SubsetEqualities { subset: s, rows, exact });
    }
    Ok(TightnessReport {
        neighborly,
        equalities,
        minkowski_neighborly: all_neighborly,
        tight: all_neighborly && all_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::cyclic_f;
    use crate::geom;

    #[test]
    fn default_schedule_orders_correctly() {
        let p = ConstructionParams::default_schedule(4, 2, &[6, 6]).unwrap();
        assert_eq!(p.beta, vec![1, 0]);
        assert_eq!(p.m_prime.len(), 6);
        p.validate().unwrap();
    }

    #[test]
    fn zeta_zero_gives_embedded_cyclic_summands() {
        let mut p = ConstructionParams::default_schedule(4, 2, &[6, 6]).unwrap();
        p.zeta = Rational::zero();
        let fam = generate_family(&p).unwrap();
        for (i, s) in fam.summands.iter().enumerate() {
            // each summand sits in the flat where the other cross slots vanish
            for pt in &s.points {
                for j in 0..p.r {
                    if j != i {
                        assert!(pt[j].is_zero());
                    }
                }
            }
            // and is a cyclic (d-r+1)-polytope there
            let lat = geom::face_lattice(s).unwrap();
            assert_eq!(lat.delta, p.d - p.r + 1);
            assert_eq!(lat.f_vector(), cyclic_f(p.d - p.r + 1, p.n[i]).unwrap());
        }
    }

    #[test]
    fn positive_zeta_summands_are_cyclic_d_polytopes() {
        let mut p = ConstructionParams::default_schedule(4, 2, &[6, 6]).unwrap();
        p.tau = Rational::new(1.into(), 8.into()).unwrap();
        p.zeta = Rational::new(1.into(), 16.into()).unwrap();
        let fam = generate_family(&p).unwrap();
        for (i, s) in fam.summands.iter().enumerate() {
            let lat = geom::face_lattice(s).unwrap();
            assert_eq!(lat.delta, p.d, "summand {i} must be full-dimensional");
            assert_eq!(lat.f_vector(), cyclic_f(p.d, p.n[i]).unwrap(), "summand {i}");
        }
    }

    #[test]
    fn probe_inside_selection_gives_zero() {
        let p = ConstructionParams::default_schedule(4, 2, &[6, 6]).unwrap();
        let mut u = SpanningSelection::new();
        u.insert(0, vec![0]);
        u.insert(1, vec![3]);
        let v = hyperplane_det(&p, &u, 0, 0).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn determinant_antisymmetry_under_column_swap() {
        // swapping two chosen grid indices inside one summand flips nothing
        // visible (the map orders them), but swapping the roles of two
        // selections must negate the raw determinant; exercise via the raw
        // column builder
        let p = ConstructionParams::default_schedule(4, 2, &[6, 6]).unwrap();
        let mut u = SpanningSelection::new();
        u.insert(0, vec![1]);
        u.insert(1, vec![2]);
        let probe = curve_point(p.d, p.r, 0, &p.y(0, 4), &p.zeta);
        let cols = build_det_columns(&p, &u, &probe, 0, &p.zeta).unwrap();
        let mut swapped = cols.clone();
        swapped.swap(1, 2);
        assert_eq!(det_of_columns(cols), -det_of_columns(swapped));
    }

    #[test]
    fn search_certifies_d4_r2() {
        let p = ConstructionParams::default_schedule(4, 2, &[6, 6]).unwrap();
        let (found, outcome) = search_tau_zeta(&p, 12).unwrap();
        let fam = generate_family(&found).unwrap();
        let report = certify_tightness(&fam).unwrap();
        assert!(report.minkowski_neighborly, "outcome: {outcome:?}");
        assert!(report.tight);
    }

    #[test]
    fn unsearched_parameters_fail_somewhere() {
        // τ = ζ = 1 straight from the grid: the determinant sweep must
        // reject it (this is the negative control the search exists for)
        let p = ConstructionParams::default_schedule(4, 2, &[6, 6]).unwrap();
        let sweep = sweep_selections(&p);
        let any_bad = sweep.iter().any(|(u, i, j)| {
            hyperplane_det(&p, u, *i, *j).unwrap().signum() <= 0
        });
        assert!(any_bad, "expected tau = zeta = 1 to violate some hyperplane");
    }
}
