//! f-vector / h-vector / g-vector calculus.
//!
//! An `FVector` with parameter δ stores the entries f_{-1}, f_0, ..., f_{δ-1}
//! of a face set of dimension δ-1 (the entry at index i is f_{i-1}; this
//! offset is the one place the crate allows an off-by-one to hide, so it is
//! kept explicit everywhere). Entries are signed: mixed-face slices
//! legitimately carry f_{-1} = (-1)^{|S|-1}. Out-of-range reads are 0.

use std::collections::BTreeMap;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{binom, Int};
use crate::subset::Subset;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum VectorError {
    #[error("entry count {0} does not match delta {1}")]
    Length(usize, usize),
    #[error("delta mismatch: expected {expected}, got {got}")]
    DeltaMismatch { expected: usize, got: usize },
    #[error("missing subset {0} in parts map")]
    MissingSubset(Subset),
}

fn ser_entries<S: serde::Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for e in v {
        let n: serde_json::Number = e
            .to_string()
            .parse()
            .map_err(|_| serde::ser::Error::custom("bigint to json number"))?;
        seq.serialize_element(&n)?;
    }
    seq.end()
}

fn de_entries<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<Int>, D::Error> {
    let nums = Vec::<serde_json::Number>::deserialize(d)?;
    nums.iter()
        .map(|n| n.to_string().parse().map_err(serde::de::Error::custom))
        .collect()
}

/// Face-count vector (f_{-1}, f_0, ..., f_{δ-1}) of a set of faces of
/// dimension δ-1. `entries[i]` stores f_{i-1}; the serialized form carries
/// the index offset explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector {
    pub delta: usize,
    /// Always -1: `entries[0]` is the empty-face entry.
    pub offset: i32,
    #[serde(serialize_with = "ser_entries", deserialize_with = "de_entries")]
    pub entries: Vec<Int>,
}

/// h-vector (h_0, ..., h_δ) companion of an [`FVector`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HVector {
    pub delta: usize,
    /// Always 0: `entries[0]` is h_0.
    pub offset: i32,
    #[serde(serialize_with = "ser_entries", deserialize_with = "de_entries")]
    pub entries: Vec<Int>,
}

impl FVector {
    pub fn new(delta: usize, entries: Vec<Int>) -> Result<Self, VectorError> {
        if entries.len() != delta + 1 {
            return Err(VectorError::Length(entries.len(), delta));
        }
        Ok(FVector { delta, offset: -1, entries })
    }

    pub fn from_i64(delta: usize, entries: &[i64]) -> Result<Self, VectorError> {
        Self::new(delta, entries.iter().map(|&x| Int::from(x)).collect())
    }

    /// f_k, with out-of-range k reading 0.
    pub fn f(&self, k: i64) -> Int {
        let idx = k + 1;
        if idx < 0 || idx as usize >= self.entries.len() {
            Int::zero()
        } else {
            self.entries[idx as usize].clone()
        }
    }

    /// Sets f_k (k in -1..=delta-1).
    pub fn set_f(&mut self, k: i64, value: Int) {
        self.entries[(k + 1) as usize] = value;
    }
}

impl HVector {
    pub fn new(delta: usize, entries: Vec<Int>) -> Result<Self, VectorError> {
        if entries.len() != delta + 1 {
            return Err(VectorError::Length(entries.len(), delta));
        }
        Ok(HVector { delta, offset: 0, entries })
    }

    pub fn from_i64(delta: usize, entries: &[i64]) -> Result<Self, VectorError> {
        Self::new(delta, entries.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn zero(delta: usize) -> Self {
        HVector { delta, offset: 0, entries: vec![Int::zero(); delta + 1] }
    }

    /// h_k, with out-of-range k reading 0.
    pub fn h(&self, k: i64) -> Int {
        if k < 0 || k as usize >= self.entries.len() {
            Int::zero()
        } else {
            self.entries[k as usize].clone()
        }
    }

    pub fn is_palindromic(&self) -> bool {
        (0..=self.delta).all(|k| self.entries[k] == self.entries[self.delta - k])
    }
}

/// h_k = sum_{i=0}^{δ} (-1)^{k-i} C(δ-i, δ-k) f_{i-1}, exactly.
pub fn f_to_h(f: &FVector) -> HVector {
    let delta = f.delta as i64;
    let entries = (0..=delta)
        .map(|k| {
            let mut acc = Int::zero();
            for i in 0..=delta {
                let c = binom(delta - i, delta - k) * f.f(i - 1);
                if (k - i) % 2 == 0 {
                    acc += c;
                } else {
                    acc -= c;
                }
            }
            acc
        })
        .collect();
    HVector { delta: f.delta, offset: 0, entries }
}

/// Exact inverse of [`f_to_h`]: f_{k-1} = sum_i C(δ-i, k-i) h_i.
pub fn h_to_f(h: &HVector) -> FVector {
    let delta = h.delta as i64;
    let entries = (0..=delta)
        .map(|k| {
            let mut acc = Int::zero();
            for i in 0..=k {
                acc += binom(delta - i, k - i) * h.h(i);
            }
            acc
        })
        .collect();
    FVector { delta: h.delta, offset: -1, entries }
}

/// Backward m-order finite differences of an h-vector. Row m is defined for
/// all k >= 0 (entries vanish beyond δ+m); rows are materialized up to
/// `max_order` but [`GTable::g`] answers any order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GTable {
    pub base: HVector,
    pub orders: BTreeMap<usize, Vec<Int>>,
}

impl GTable {
    pub fn new(base: HVector, max_order: usize) -> Self {
        let mut orders = BTreeMap::new();
        let delta = base.delta;
        let mut prev: Vec<Int> = base.entries.clone();
        orders.insert(0usize, prev.clone());
        for m in 1..=max_order {
            let len = delta + m + 1;
            let row: Vec<Int> = (0..len as i64)
                .map(|k| {
                    let a = prev.get(k as usize).cloned().unwrap_or_else(Int::zero);
                    let b = if k == 0 {
                        Int::zero()
                    } else {
                        prev.get(k as usize - 1).cloned().unwrap_or_else(Int::zero)
                    };
                    a - b
                })
                .collect();
            orders.insert(m, row.clone());
            prev = row;
        }
        GTable { base, orders }
    }

    /// g^{(m)}_k, total in both arguments (0 outside the stored support).
    pub fn g(&self, m: usize, k: i64) -> Int {
        if k < 0 {
            return Int::zero();
        }
        match self.orders.get(&m) {
            Some(row) => row.get(k as usize).cloned().unwrap_or_else(Int::zero),
            None => {
                // closed form: g^{(m)}_k = sum_i (-1)^i C(m,i) h_{k-i}
                let mut acc = Int::zero();
                for i in 0..=m as i64 {
                    let c = binom(m as i64, i) * self.base.h(k - i);
                    if i % 2 == 0 {
                        acc += c;
                    } else {
                        acc -= c;
                    }
                }
                acc
            }
        }
    }
}

/// g^{(m)}_k of an h-vector straight from the closed form, without a table.
pub fn g_of(h: &HVector, m: usize, k: i64) -> Int {
    let mut acc = Int::zero();
    for i in 0..=m as i64 {
        let c = binom(m as i64, i) * h.h(k - i);
        if i % 2 == 0 {
            acc += c;
        } else {
            acc -= c;
        }
    }
    acc
}

/// f_k(K_R) = sum over ∅ ⊂ S ⊆ R of f_k(F_S), with the convention
/// f_{-1}(F_S) = (-1)^{|S|-1} already baked into each part. Parts must be
/// present for every nonempty S ⊆ R, with δ_S = base_delta - (|R| - |S|).
pub fn f_k_from_f(parts: &BTreeMap<Subset, FVector>, r: Subset) -> Result<FVector, VectorError> {
    let delta = expect_deltas(parts, r)?;
    let mut out = FVector::new(delta, vec![Int::zero(); delta + 1]).unwrap();
    for s in r.nonempty_subsets() {
        let part = &parts[&s];
        for k in -1..=part.delta as i64 - 1 {
            let v = out.f(k) + part.f(k);
            out.set_f(k, v);
        }
    }
    Ok(out)
}

/// Möbius inverse of [`f_k_from_f`]:
/// f_k(F_R) = sum over ∅ ⊂ S ⊆ R of (-1)^{|R|-|S|} f_k(K_S).
pub fn f_f_from_k(parts: &BTreeMap<Subset, FVector>, r: Subset) -> Result<FVector, VectorError> {
    let delta = expect_deltas(parts, r)?;
    let mut out = FVector::new(delta, vec![Int::zero(); delta + 1]).unwrap();
    for s in r.nonempty_subsets() {
        let part = &parts[&s];
        let neg = (r.len() - s.len()) % 2 == 1;
        for k in -1..=part.delta as i64 - 1 {
            let v = if neg { out.f(k) - part.f(k) } else { out.f(k) + part.f(k) };
            out.set_f(k, v);
        }
    }
    Ok(out)
}

fn expect_deltas(parts: &BTreeMap<Subset, FVector>, r: Subset) -> Result<usize, VectorError> {
    let base = parts.get(&r).ok_or(VectorError::MissingSubset(r))?.delta;
    for s in r.nonempty_subsets() {
        let part = parts.get(&s).ok_or(VectorError::MissingSubset(s))?;
        let expected = base - (r.len() - s.len());
        if part.delta != expected {
            return Err(VectorError::DeltaMismatch { expected, got: part.delta });
        }
    }
    Ok(base)
}

/// Direction of the subset-lattice h-vector relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HRelationDirection {
    /// parts are h(F_S); produces h(K_R) = sum_S g^{(|R|-|S|)}(F_S)
    KFromF,
    /// parts are h(K_S); produces h(F_R) = sum_S (-1)^{|R|-|S|} g^{(|R|-|S|)}(K_S)
    FFromK,
}

/// The h-vector analogue of the inclusion-exclusion relations.
pub fn h_relations_kf(
    parts: &BTreeMap<Subset, HVector>,
    r: Subset,
    direction: HRelationDirection,
) -> Result<HVector, VectorError> {
    let base = parts.get(&r).ok_or(VectorError::MissingSubset(r))?.delta;
    let mut entries = vec![Int::zero(); base + 1];
    for s in r.nonempty_subsets() {
        let part = parts.get(&s).ok_or(VectorError::MissingSubset(s))?;
        let expected = base - (r.len() - s.len());
        if part.delta != expected {
            return Err(VectorError::DeltaMismatch { expected, got: part.delta });
        }
        let m = r.len() - s.len();
        let neg = matches!(direction, HRelationDirection::FFromK) && m % 2 == 1;
        for (k, e) in entries.iter_mut().enumerate() {
            let g = g_of(part, m, k as i64);
            if neg {
                *e -= g;
            } else {
                *e += g;
            }
        }
    }
    Ok(HVector { delta: base, offset: 0, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fv(delta: usize, e: &[i64]) -> FVector {
        FVector::from_i64(delta, e).unwrap()
    }

    fn hv(delta: usize, e: &[i64]) -> HVector {
        HVector::from_i64(delta, e).unwrap()
    }

    #[test]
    fn simplex_boundary_h_vector() {
        // boundary of the 3-simplex: f = (1; 4, 6, 4), h = (1,1,1,1)
        assert_eq!(f_to_h(&fv(3, &[1, 4, 6, 4])), hv(3, &[1, 1, 1, 1]));
        assert_eq!(h_to_f(&hv(3, &[1, 1, 1, 1])), fv(3, &[1, 4, 6, 4]));
    }

    #[test]
    fn empty_complex_h_is_alternating_binomials() {
        // f_{-1} = 1, everything else 0: h_k = (-1)^k C(δ, k)
        let h = f_to_h(&fv(4, &[1, 0, 0, 0, 0]));
        assert_eq!(h, hv(4, &[1, -4, 6, -4, 1]));
    }

    #[test]
    fn cyclic_c4_6_h_vector() {
        // frozen from the brute-force hull of 6 moment-curve points (see geom)
        assert_eq!(f_to_h(&fv(4, &[1, 6, 15, 18, 9])), hv(4, &[1, 2, 3, 2, 1]));
        assert_eq!(h_to_f(&hv(4, &[1, 2, 3, 2, 1])), fv(4, &[1, 6, 15, 18, 9]));
    }

    #[test]
    fn hvector_length_must_match_delta() {
        assert!(HVector::from_i64(5, &[1, 2, 3, 2, 1]).is_err());
        assert!(HVector::from_i64(4, &[1, 2, 3, 2, 1]).is_ok());
    }

    #[test]
    fn g_table_examples() {
        let h = hv(2, &[1, 2, 3]);
        let t = GTable::new(h, 2);
        assert_eq!((0..3).map(|k| t.g(0, k)).collect::<Vec<_>>(), vec![1.into(), 2.into(), 3.into()]);
        assert_eq!((0..3).map(|k| t.g(1, k)).collect::<Vec<_>>(), vec![1.into(), 1.into(), 1.into()]);
        assert_eq!((0..3).map(|k| t.g(2, k)).collect::<Vec<_>>(), vec![1.into(), 0.into(), 0.into()]);
        // beyond the stored rows the closed form answers
        assert_eq!(t.g(3, 0), Int::from(1));
        assert_eq!(t.g(1, 3), Int::from(-3));
    }

    #[test]
    fn g_table_closed_form_matches_differencing() {
        let h = hv(5, &[1, 7, -2, 4, 0, 3]);
        let t = GTable::new(h.clone(), 6);
        for m in 0..=6usize {
            for k in 0..(h.delta + m + 2) as i64 {
                assert_eq!(t.g(m, k), g_of(&h, m, k), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn inclusion_exclusion_round_trip_two_summands() {
        // fabricated slices with the f_{-1} convention: |S|=1 -> +1, |S|=2 -> -1
        let r = Subset::full(2);
        let mut f_parts = BTreeMap::new();
        f_parts.insert(Subset::singleton(0), fv(3, &[1, 4, 6, 4]));
        f_parts.insert(Subset::singleton(1), fv(3, &[1, 5, 9, 6]));
        f_parts.insert(r, fv(4, &[-1, 0, 13, 30, 18]));
        let k_r = f_k_from_f(&f_parts, r).unwrap();
        assert_eq!(k_r.f(-1), Int::from(1)); // 1 + 1 - 1

        // rebuild K_S for every S, then invert
        let mut k_parts = BTreeMap::new();
        for s in r.nonempty_subsets() {
            k_parts.insert(s, f_k_from_f(&f_parts, s).unwrap());
        }
        let back = f_f_from_k(&k_parts, r).unwrap();
        assert_eq!(back, f_parts[&r]);
    }

    #[test]
    fn h_relations_round_trip() {
        let r = Subset::full(2);
        let mut hf = BTreeMap::new();
        hf.insert(Subset::singleton(0), hv(3, &[1, 1, 1, 1]));
        hf.insert(Subset::singleton(1), hv(3, &[1, 2, 2, 1]));
        hf.insert(r, hv(4, &[-1, 3, 7, 3, -1]));
        let hk = h_relations_kf(&hf, r, HRelationDirection::KFromF).unwrap();

        let mut hk_parts = BTreeMap::new();
        for s in r.nonempty_subsets() {
            let sub: BTreeMap<_, _> = s
                .nonempty_subsets()
                .map(|x| (x, hf[&x].clone()))
                .collect();
            hk_parts.insert(s, h_relations_kf(&sub, s, HRelationDirection::KFromF).unwrap());
        }
        assert_eq!(hk_parts[&r], hk);
        let back = h_relations_kf(&hk_parts, r, HRelationDirection::FFromK).unwrap();
        assert_eq!(back, hf[&r]);
    }

    #[test]
    fn single_summand_relations_collapse() {
        let r = Subset::singleton(0);
        let mut parts = BTreeMap::new();
        parts.insert(r, fv(3, &[1, 4, 6, 4]));
        assert_eq!(f_k_from_f(&parts, r).unwrap(), parts[&r]);
        assert_eq!(f_f_from_k(&parts, r).unwrap(), parts[&r]);
    }

    #[test]
    fn missing_subset_is_an_error() {
        let r = Subset::full(2);
        let mut parts = BTreeMap::new();
        parts.insert(r, fv(4, &[-1, 0, 13, 30, 18]));
        assert!(matches!(
            f_k_from_f(&parts, r).unwrap_err(),
            VectorError::MissingSubset(_)
        ));
    }

    proptest! {
        #[test]
        fn f_h_round_trip(delta in 0usize..=12, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = FVector::new(
                delta,
                (0..=delta).map(|_| Int::from(rng.gen_range(-50i64..=50))).collect(),
            )
            .unwrap();
            prop_assert_eq!(h_to_f(&f_to_h(&f)), f.clone());
            let h = HVector::new(
                delta,
                (0..=delta).map(|_| Int::from(rng.gen_range(-50i64..=50))).collect(),
            )
            .unwrap();
            prop_assert_eq!(f_to_h(&h_to_f(&h)), h);
        }
    }
}
