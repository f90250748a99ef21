//! The verification engine: every equality and inequality the library
//! claims about mixed-face sets is checked on concrete enumerated instances,
//! recording both sides of every comparison, never just a boolean.
//!
//! Checks that require simpliciality refuse (distinct from failing) on
//! degenerate input. Inequalities compare integers after clearing
//! denominators.

use std::collections::BTreeMap;

use num::Zero;
use serde::Serialize;

use crate::arith::{serde_int, Int};
use crate::cayley::{build_qr_boundary, CayleyError, Instance};
use crate::subset::Subset;
use crate::vectors::{f_to_h, g_of, HVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail")]
pub enum Verdict {
    Passed,
    Failed { first_bad_k: i64 },
    Refused { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub k: i64,
    #[serde(with = "serde_int")]
    pub lhs: Int,
    #[serde(with = "serde_int")]
    pub rhs: Int,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawCheck {
    pub law: String,
    /// the claim being instantiated, in h/f-vector notation
    pub statement: String,
    pub subset: Subset,
    pub verdict: Verdict,
    pub rows: Vec<CheckRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub instance: String,
    pub checks: Vec<LawCheck>,
}

impl VerificationReport {
    pub fn new(instance: impl Into<String>) -> Self {
        VerificationReport { instance: instance.into(), checks: Vec::new() }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Passed)
    }

    pub fn push(&mut self, check: LawCheck) {
        self.checks.push(check);
    }
}

/// Verdict for an equality law: every row must have lhs = rhs.
pub fn verdict_equal(rows: &[CheckRow]) -> Verdict {
    match rows.iter().find(|r| r.lhs != r.rhs) {
        Some(bad) => Verdict::Failed { first_bad_k: bad.k },
        None => Verdict::Passed,
    }
}

/// Verdict for an upper-bound law: every row must have lhs <= rhs.
pub fn verdict_le(rows: &[CheckRow]) -> Verdict {
    match rows.iter().find(|r| r.lhs > r.rhs) {
        Some(bad) => Verdict::Failed { first_bad_k: bad.k },
        None => Verdict::Passed,
    }
}

fn refused(law: &str, statement: &str, subset: Subset, reason: &str) -> LawCheck {
    LawCheck {
        law: law.into(),
        statement: statement.into(),
        subset,
        verdict: Verdict::Refused { reason: reason.into() },
        rows: Vec::new(),
    }
}

// ---- vector-level kernels (perturbable by tests) ----

/// Rows of h_{δ-k}(F_R) = h_k(K_R) for 0 <= k <= δ.
pub fn dehn_sommerville_rows(h_f: &HVector, h_k: &HVector) -> Vec<CheckRow> {
    let delta = h_f.delta as i64;
    (0..=delta)
        .map(|k| CheckRow { k, lhs: h_f.h(delta - k), rhs: h_k.h(k) })
        .collect()
}

/// Rows of (k+1)h_{k+1}(F_R) + (δ-k)h_k(F_R) = sum_v h_k(F_R/v).
pub fn recurrence_equality_rows(h_f: &HVector, link_hs: &[HVector]) -> Vec<CheckRow> {
    let delta = h_f.delta as i64;
    (0..delta)
        .map(|k| {
            let lhs = Int::from(k + 1) * h_f.h(k + 1) + Int::from(delta - k) * h_f.h(k);
            let rhs = link_hs.iter().map(|lh| lh.h(k)).sum();
            CheckRow { k, lhs, rhs }
        })
        .collect()
}

// ---- instance-level checks ----

/// Dehn-Sommerville for the pair (F_R, K_R): h_{d+|R|-1-k}(F_R) = h_k(K_R).
pub fn check_dehn_sommerville(inst: &Instance, r: Subset) -> Result<LawCheck, CayleyError> {
    let statement = "h_{d+|R|-1-k}(F_R) = h_k(K_R)";
    let h_f = f_to_h(&inst.mixed(r)?.f);
    let h_k = f_to_h(&inst.closure(r)?.f);
    let rows = dehn_sommerville_rows(&h_f, &h_k);
    let verdict = verdict_equal(&rows);
    Ok(LawCheck { law: "ds".into(), statement: statement.into(), subset: r, verdict, rows })
}

/// The exact link recurrence:
/// (k+1)h_{k+1}(F_R) + (d+|R|-1-k)h_k(F_R) = sum over v in V_R of h_k(F_R/v).
pub fn check_recurrence_equality(inst: &Instance, r: Subset) -> Result<LawCheck, CayleyError> {
    let statement = "(k+1)h_{k+1}(F_R) + (d+|R|-1-k)h_k(F_R) = sum_v h_k(F_R/v)";
    if !inst.as_simplicial_as_possible {
        return Ok(refused("recurrence", statement, r, "instance is not as simplicial as possible"));
    }
    let ms = inst.mixed(r)?;
    let h_f = f_to_h(&ms.f);
    let link_hs: Vec<HVector> = inst
        .cp
        .vertex_set_of(r)
        .iter()
        .map(|v| f_to_h(&ms.link(v).f_vector_literal()))
        .collect();
    let rows = recurrence_equality_rows(&h_f, &link_hs);
    let verdict = verdict_equal(&rows);
    Ok(LawCheck { law: "recurrence".into(), statement: statement.into(), subset: r, verdict, rows })
}

/// The recurrence inequality, denominators cleared:
/// (k+1)h_{k+1}(F_R) <= (n_R-d-|R|+1+k)h_k(F_R) + sum_i n_i g_k(F_{R\{i}}).
pub fn check_recurrence_inequality(inst: &Instance, r: Subset) -> Result<LawCheck, CayleyError> {
    let statement =
        "(k+1)h_{k+1}(F_R) <= (n_R-d-|R|+1+k)h_k(F_R) + sum_i n_i g_k(F_{R minus i})";
    if !inst.as_simplicial_as_possible {
        return Ok(refused(
            "recurrence_inequality",
            statement,
            r,
            "instance is not as simplicial as possible",
        ));
    }
    let d = inst.d() as i64;
    let fam = &inst.cp.family;
    if r.iter().any(|i| fam.n(i) < inst.d() + 1) {
        return Ok(refused("recurrence_inequality", statement, r, "some n_i < d+1"));
    }
    let rsize = r.len() as i64;
    let n_r = fam.n_of(r) as i64;
    let h_f = f_to_h(&inst.mixed(r)?.f);
    let sub_h: BTreeMap<usize, HVector> = r
        .iter()
        .map(|i| {
            let s = r.remove(i);
            let h = if s.is_empty() {
                HVector::zero(0)
            } else {
                f_to_h(&inst.mixed.get(&s).expect("slice present").f)
            };
            (i, h)
        })
        .collect();
    let delta = d + rsize - 1;
    let rows = (0..delta)
        .map(|k| {
            let lhs = Int::from(k + 1) * h_f.h(k + 1);
            let mut rhs = Int::from(n_r - d - rsize + 1 + k) * h_f.h(k);
            for i in r.iter() {
                let g = if r.remove(i).is_empty() {
                    Int::zero()
                } else {
                    g_of(&sub_h[&i], 1, k)
                };
                rhs += Int::from(fam.n(i) as i64) * g;
            }
            CheckRow { k, lhs, rhs }
        })
        .collect::<Vec<_>>();
    let verdict = verdict_le(&rows);
    Ok(LawCheck {
        law: "recurrence_inequality".into(),
        statement: statement.into(),
        subset: r,
        verdict,
        rows,
    })
}

/// The link/non-link inequality:
/// sum_S (-1)^{|R|-|S|} sum_{v in V_S} g_k^{(|R|-|S|)}(K_S/v)
///   <= sum_S (-1)^{|R|-|S|} sum_{v in V_S} g_k^{(|R|-|S|)}(K_S).
pub fn check_link_inequality(inst: &Instance, r: Subset) -> Result<LawCheck, CayleyError> {
    let statement = "sum_S (-1)^{|R|-|S|} sum_{v in V_S} g_k^{(|R|-|S|)}(K_S/v) <= same with K_S";
    if !inst.as_simplicial_as_possible {
        return Ok(refused("link_inequality", statement, r, "instance is not as simplicial as possible"));
    }
    let delta = (inst.d() + r.len() - 1) as i64;
    // per subset: h(K_S), link h-vectors, and n_S copies of h(K_S) on the right
    let mut lhs_acc = vec![Int::zero(); (delta + 1) as usize];
    let mut rhs_acc = vec![Int::zero(); (delta + 1) as usize];
    for s in r.nonempty_subsets() {
        let m = r.len() - s.len();
        let neg = m % 2 == 1;
        let cl = inst.closure(s)?;
        let h_k = f_to_h(&cl.f);
        let verts = inst.cp.vertex_set_of(s);
        for k in 0..=delta {
            let mut link_sum = Int::zero();
            for v in verts.iter() {
                let lh = f_to_h(&cl.link(v).f_vector_literal());
                link_sum += g_of(&lh, m, k);
            }
            let full = Int::from(verts.len() as u64) * g_of(&h_k, m, k);
            if neg {
                lhs_acc[k as usize] -= link_sum;
                rhs_acc[k as usize] -= full;
            } else {
                lhs_acc[k as usize] += link_sum;
                rhs_acc[k as usize] += full;
            }
        }
    }
    let rows: Vec<CheckRow> = (0..=delta)
        .map(|k| CheckRow {
            k,
            lhs: lhs_acc[k as usize].clone(),
            rhs: rhs_acc[k as usize].clone(),
        })
        .collect();
    let verdict = verdict_le(&rows);
    Ok(LawCheck {
        law: "link_inequality".into(),
        statement: statement.into(),
        subset: r,
        verdict,
        rows,
    })
}

/// The simplification identity (exact, any violation is a bug):
/// sum_S (-1)^{|R|-|S|} n_S g_k^{(|R|-|S|)}(K_S)
///   = n_R h_k(F_R) + sum_i n_i g_k(F_{R\{i}}).
pub fn check_simplify_identity(inst: &Instance, r: Subset) -> Result<LawCheck, CayleyError> {
    let statement =
        "sum_S (-1)^{|R|-|S|} n_S g_k^{(|R|-|S|)}(K_S) = n_R h_k(F_R) + sum_i n_i g_k(F_{R minus i})";
    let fam = &inst.cp.family;
    let delta = (inst.d() + r.len() - 1) as i64;
    let h_f = f_to_h(&inst.mixed(r)?.f);
    let rows = (0..=delta)
        .map(|k| {
            let mut lhs = Int::zero();
            for s in r.nonempty_subsets() {
                let m = r.len() - s.len();
                let h_ks = f_to_h(&inst.closure(s).expect("slice present").f);
                let term = Int::from(fam.n_of(s) as u64) * g_of(&h_ks, m, k);
                if m % 2 == 1 {
                    lhs -= term;
                } else {
                    lhs += term;
                }
            }
            let mut rhs = Int::from(fam.n_of(r) as u64) * h_f.h(k);
            for i in r.iter() {
                let s = r.remove(i);
                if !s.is_empty() {
                    let h_sub = f_to_h(&inst.mixed.get(&s).expect("slice present").f);
                    rhs += Int::from(fam.n(i) as u64) * g_of(&h_sub, 1, k);
                }
            }
            CheckRow { k, lhs, rhs }
        })
        .collect::<Vec<_>>();
    let verdict = verdict_equal(&rows);
    Ok(LawCheck { law: "simplify".into(), statement: statement.into(), subset: r, verdict, rows })
}

/// h_0(F_R) = (-1)^{|R|-1}.
pub fn check_h0_convention(inst: &Instance, r: Subset) -> Result<LawCheck, CayleyError> {
    let statement = "h_0(F_R) = (-1)^{|R|-1}";
    let h_f = f_to_h(&inst.mixed(r)?.f);
    let expected = if r.len() % 2 == 1 { Int::from(1) } else { Int::from(-1) };
    let rows = vec![CheckRow { k: 0, lhs: h_f.h(0), rhs: expected }];
    let verdict = verdict_equal(&rows);
    Ok(LawCheck { law: "h0".into(), statement: statement.into(), subset: r, verdict, rows })
}

/// Consistency of the combinatorial ∂Q_R: its literal face counts must match
/// both slice-based predictions, and its h-vector must be palindromic.
pub fn check_qr_consistency(inst: &Instance, r: Subset) -> Result<LawCheck, CayleyError> {
    let statement = "f(∂Q_R) matches both slice predictions; h(∂Q_R) palindromic";
    if !inst.as_simplicial_as_possible {
        return Ok(refused("qr_consistency", statement, r, "instance is not as simplicial as possible"));
    }
    let qr = build_qr_boundary(&inst.mixed, r)?;
    let f = qr.f_vector();
    let mut rows = Vec::new();
    for k in -1..=(f.delta as i64 - 1) {
        rows.push(CheckRow {
            k,
            lhs: f.f(k),
            rhs: crate::cayley::qr_f_from_mixed(&inst.mixed, r, k),
        });
        rows.push(CheckRow {
            k,
            lhs: f.f(k),
            rhs: crate::cayley::qr_f_from_closures(&inst.closures, r, k),
        });
    }
    let h = f_to_h(&f);
    for k in 0..=(f.delta as i64) {
        rows.push(CheckRow { k, lhs: h.h(k), rhs: h.h(f.delta as i64 - k) });
    }
    let verdict = verdict_equal(&rows);
    Ok(LawCheck {
        law: "qr_consistency".into(),
        statement: statement.into(),
        subset: r,
        verdict,
        rows,
    })
}

/// Internal consistency gate: h(K_R) computed by direct enumeration equals
/// the subset-lattice relation from the h(F_S).
pub fn check_h_relation_consistency(inst: &Instance, r: Subset) -> Result<LawCheck, CayleyError> {
    let statement = "h_k(K_R) = sum_S g_k^{(|R|-|S|)}(F_S)";
    let h_k_direct = f_to_h(&inst.closure(r)?.f);
    let delta = h_k_direct.delta as i64;
    let rows = (0..=delta)
        .map(|k| {
            let mut rhs = Int::zero();
            for s in r.nonempty_subsets() {
                let m = r.len() - s.len();
                let h_fs = f_to_h(&inst.mixed.get(&s).expect("slice present").f);
                rhs += g_of(&h_fs, m, k);
            }
            CheckRow { k, lhs: h_k_direct.h(k), rhs }
        })
        .collect::<Vec<_>>();
    let verdict = verdict_equal(&rows);
    Ok(LawCheck {
        law: "h_relation".into(),
        statement: statement.into(),
        subset: r,
        verdict,
        rows,
    })
}

/// Names of the instance-level laws, in reporting order.
pub const LAW_NAMES: &[&str] = &[
    "ds",
    "recurrence",
    "recurrence_inequality",
    "link_inequality",
    "simplify",
    "h0",
    "qr_consistency",
    "h_relation",
];

/// Runs the selected laws for every nonempty R ⊆ [r] on the instance.
pub fn run_laws(
    inst: &Instance,
    filter: Option<&[String]>,
    report: &mut VerificationReport,
) -> Result<(), CayleyError> {
    let wanted = |name: &str| filter.is_none_or(|f| f.iter().any(|x| x == name));
    for r in inst.full().nonempty_subsets() {
        if wanted("ds") {
            report.push(check_dehn_sommerville(inst, r)?);
        }
        if wanted("recurrence") {
            report.push(check_recurrence_equality(inst, r)?);
        }
        if wanted("recurrence_inequality") {
            report.push(check_recurrence_inequality(inst, r)?);
        }
        if wanted("link_inequality") {
            report.push(check_link_inequality(inst, r)?);
        }
        if wanted("simplify") {
            report.push(check_simplify_identity(inst, r)?);
        }
        if wanted("h0") {
            report.push(check_h0_convention(inst, r)?);
        }
        if wanted("qr_consistency") {
            report.push(check_qr_consistency(inst, r)?);
        }
        if wanted("h_relation") {
            report.push(check_h_relation_consistency(inst, r)?);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::SummandFamily;
    use crate::geom::PointSet;
    use crate::Rational;

    fn pt(coords: &[i64]) -> Vec<Rational> {
        coords.iter().map(|&c| Rational::from(c)).collect()
    }

    fn two_tetrahedra() -> SummandFamily {
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
    fn all_laws_pass_on_two_tetrahedra() {
        let inst = Instance::build(&two_tetrahedra()).unwrap();
        let mut report = VerificationReport::new("two-tetrahedra");
        run_laws(&inst, None, &mut report).unwrap();
        for c in &report.checks {
            assert_eq!(c.verdict, Verdict::Passed, "law {} on {}: {:?}", c.law, c.subset, c.rows);
        }
        assert!(report.all_passed());
    }

    #[test]
    fn ds_negative_control_localizes_the_bad_index() {
        let inst = Instance::build(&two_tetrahedra()).unwrap();
        let r = Subset::full(2);
        let h_f = f_to_h(&inst.mixed(r).unwrap().f);
        let mut h_k = f_to_h(&inst.closure(r).unwrap().f);
        h_k.entries[2] += 1;
        let rows = dehn_sommerville_rows(&h_f, &h_k);
        assert_eq!(verdict_equal(&rows), Verdict::Failed { first_bad_k: 2 });
    }

    #[test]
    fn recurrence_negative_control() {
        let inst = Instance::build(&two_tetrahedra()).unwrap();
        let r = Subset::full(2);
        let ms = inst.mixed(r).unwrap();
        let mut h_f = f_to_h(&ms.f);
        h_f.entries[1] += 1;
        let link_hs: Vec<HVector> = inst
            .cp
            .vertex_set_of(r)
            .iter()
            .map(|v| f_to_h(&ms.link(v).f_vector_literal()))
            .collect();
        let rows = recurrence_equality_rows(&h_f, &link_hs);
        assert!(matches!(verdict_equal(&rows), Verdict::Failed { .. }));
    }

    #[test]
    fn degenerate_instance_is_refused_not_failed() {
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
        let inst = Instance::build(&fam).unwrap();
        let c = check_recurrence_equality(&inst, Subset::full(2)).unwrap();
        assert!(matches!(c.verdict, Verdict::Refused { .. }));
    }

    #[test]
    fn single_summand_collapses_to_classical_laws() {
        let inst = Instance::build(&two_tetrahedra()).unwrap();
        let r = Subset::singleton(0);
        let ds = check_dehn_sommerville(&inst, r).unwrap();
        assert_eq!(ds.verdict, Verdict::Passed);
        let rec = check_recurrence_equality(&inst, r).unwrap();
        assert_eq!(rec.verdict, Verdict::Passed);
        let h0 = check_h0_convention(&inst, r).unwrap();
        assert_eq!(h0.verdict, Verdict::Passed);
        // |R| = 1 simplify identity degenerates to n·h = n·h
        let si = check_simplify_identity(&inst, r).unwrap();
        assert_eq!(si.verdict, Verdict::Passed);
    }

    #[test]
    fn report_serializes_to_json() {
        let inst = Instance::build(&two_tetrahedra()).unwrap();
        let mut report = VerificationReport::new("two-tetrahedra");
        run_laws(&inst, Some(&["ds".to_string()]), &mut report).unwrap();
        assert_eq!(report.checks.len(), 3); // one per nonempty subset
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"law\":\"ds\""));
        assert!(json.contains("\"status\":\"Passed\""));
    }
}
