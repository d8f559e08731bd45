//! Exhaustive enumeration of all size-n terms and brute-force census by
//! reduction length, normal-form status, subterm containment and
//! typeability.
//!
//! Terms are indexed by a flat rank in `0 .. d^(n+1) * Catalan(n)`: the
//! quotient by `d^(n+1)` selects the tree shape (shapes ordered by left
//! subtree size, then recursively), the remainder selects the labelling
//! (base-d digits, leftmost leaf most significant). The order is therefore
//! deterministic and the index space shards freely across workers.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::basis::Basis;
use crate::reduce::{normalize, ReductionOutcome};
use crate::series::catalan;
use crate::term::Term;
use crate::types::infer_principal_type;

/// `d^(n+1) * Catalan(n)`, the number of size-n terms over a basis of
/// cardinality d.
pub fn count_terms(d: u64, n: u64) -> BigUint {
    assert!(d >= 1, "basis cardinality must be positive");
    BigUint::from(d).pow(n as u32 + 1) * catalan(n)
}

fn catalan_table(n: usize) -> Vec<u64> {
    let mut cat = vec![1u64; n + 1];
    for k in 0..n {
        cat[k + 1] = cat[k]
            .checked_mul(2 * (2 * k as u64 + 1))
            .expect("size too large for 64-bit enumeration")
            / (k as u64 + 2);
    }
    cat
}

fn pow_table(d: u64, n: usize) -> Vec<u64> {
    let mut pows = vec![1u64; n + 2];
    for k in 0..n + 1 {
        pows[k + 1] = pows[k]
            .checked_mul(d)
            .expect("size too large for 64-bit enumeration");
    }
    pows
}

/// Precomputed tables for unranking size-n terms over a fixed basis.
struct Unranker {
    n: usize,
    cat: Vec<u64>,
    /// pows[k] = d^k; pows[n+1] labellings in total.
    pows: Vec<u64>,
}

impl Unranker {
    fn new(basis: &Basis, n: usize) -> Unranker {
        Unranker {
            n,
            cat: catalan_table(n),
            pows: pow_table(basis.cardinality() as u64, n),
        }
    }

    fn total(&self) -> u64 {
        self.cat[self.n]
            .checked_mul(self.pows[self.n + 1])
            .expect("size too large for 64-bit enumeration")
    }

    fn term(&self, index: u64) -> Term {
        debug_assert!(index < self.total());
        let labellings = self.pows[self.n + 1];
        self.build(self.n, index / labellings, index % labellings)
    }

    fn build(&self, n: usize, mut shape_rank: u64, label_rank: u64) -> Term {
        if n == 0 {
            return Term::leaf(label_rank as usize);
        }
        let mut left = 0;
        loop {
            let block = self.cat[left] * self.cat[n - 1 - left];
            if shape_rank < block {
                break;
            }
            shape_rank -= block;
            left += 1;
        }
        let right = n - 1 - left;
        let (lshape, rshape) = (shape_rank / self.cat[right], shape_rank % self.cat[right]);
        // the right subtree carries the n - left least significant digits
        let right_labellings = self.pows[right + 1];
        let (llab, rlab) = (label_rank / right_labellings, label_rank % right_labellings);
        Term::app(self.build(left, lshape, llab), self.build(right, rshape, rlab))
    }
}

/// The size-n term at rank `index` in the canonical enumeration order.
pub fn unrank(basis: &Basis, n: u64, index: u64) -> Term {
    Unranker::new(basis, n as usize).term(index)
}

/// Yields every size-n term exactly once, in canonical order.
pub fn enumerate_terms<'a>(basis: &'a Basis, n: u64) -> impl Iterator<Item = Term> + 'a {
    let ur = Unranker::new(basis, n as usize);
    (0..ur.total()).map(move |i| ur.term(i))
}

/// Exact classification of all size-n terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusResult {
    pub size: u64,
    pub total: BigUint,
    /// Reduction length -> number of terms normalising in exactly that
    /// many steps. Key 0 holds the normal forms.
    pub by_reduction_length: BTreeMap<u64, BigUint>,
    /// Terms that did not reach a normal form within the fuel budget.
    pub fuel_exhausted: BigUint,
    pub normal_forms: BigUint,
    pub typeable: Option<BigUint>,
    pub containing_pattern: Option<BigUint>,
}

#[derive(Default)]
struct Shard {
    buckets: BTreeMap<u64, u64>,
    fuel_exhausted: u64,
    typeable: u64,
    containing: u64,
}

impl Shard {
    fn merge(mut self, other: Shard) -> Shard {
        for (k, v) in other.buckets {
            *self.buckets.entry(k).or_insert(0) += v;
        }
        self.fuel_exhausted += other.fuel_exhausted;
        self.typeable += other.typeable;
        self.containing += other.containing;
        self
    }
}

/// Enumerates every size-n term and classifies it by reduction length under
/// the given fuel; optionally also counts terms containing `pattern` and
/// principal-typeable terms (S/K basis only). Sharded across the rayon
/// thread pool; the result is independent of worker count.
pub fn census(
    basis: &Basis,
    n: u64,
    fuel: u64,
    pattern: Option<&Term>,
    typecheck: bool,
) -> CensusResult {
    assert!(fuel >= 1, "census requires fuel >= 1");
    if typecheck {
        assert!(
            basis.s_id().is_some() && basis.k_id().is_some() && basis.cardinality() == 2,
            "typeability census requires the S/K basis"
        );
    }
    let total = Unranker::new(basis, n as usize).total();
    // patterns cross shard boundaries as text because terms are Rc-based
    let pattern_text = pattern.map(|p| p.print(basis));

    const SHARD: u64 = 1 << 16;
    let shards = total.div_ceil(SHARD).max(1);
    let merged = (0..shards)
        .into_par_iter()
        .map(|s| {
            let ur = Unranker::new(basis, n as usize);
            let pat = pattern_text
                .as_deref()
                .map(|t| Term::parse(t, basis).expect("pattern round-trips"));
            let mut out = Shard::default();
            for i in s * SHARD..((s + 1) * SHARD).min(total) {
                let term = ur.term(i);
                match normalize(&term, basis, fuel) {
                    ReductionOutcome::NormalForm { steps, .. } => {
                        *out.buckets.entry(steps).or_insert(0) += 1;
                    }
                    ReductionOutcome::FuelExhausted { .. } => out.fuel_exhausted += 1,
                }
                if let Some(p) = &pat {
                    if term.contains_subterm(p) {
                        out.containing += 1;
                    }
                }
                if typecheck && infer_principal_type(&term, basis).unwrap().is_some() {
                    out.typeable += 1;
                }
            }
            out
        })
        .reduce(Shard::default, Shard::merge);

    let by_reduction_length: BTreeMap<u64, BigUint> = merged
        .buckets
        .iter()
        .map(|(&k, &v)| (k, BigUint::from(v)))
        .collect();
    let normal_forms = by_reduction_length.get(&0).cloned().unwrap_or_default();
    CensusResult {
        size: n,
        total: BigUint::from(total),
        by_reduction_length,
        fuel_exhausted: BigUint::from(merged.fuel_exhausted),
        normal_forms,
        typeable: typecheck.then(|| BigUint::from(merged.typeable)),
        containing_pattern: pattern.map(|_| BigUint::from(merged.containing)),
    }
}

impl CensusResult {
    /// Number of terms with the given exact reduction length.
    pub fn bucket(&self, steps: u64) -> BigUint {
        self.by_reduction_length
            .get(&steps)
            .cloned()
            .unwrap_or_default()
    }

    /// Checks `total = sum of buckets + fuel_exhausted`.
    pub fn is_consistent(&self) -> bool {
        let sum: BigUint = self.by_reduction_length.values().sum::<BigUint>()
            + &self.fuel_exhausted;
        sum == self.total && self.normal_forms == self.bucket(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use std::collections::HashSet;

    fn sk() -> Basis {
        Basis::sk()
    }

    #[test]
    fn count_values() {
        assert_eq!(count_terms(2, 0), BigUint::from(2u32));
        assert_eq!(count_terms(2, 1), BigUint::from(4u32));
        assert_eq!(count_terms(2, 2), BigUint::from(16u32));
        assert_eq!(count_terms(2, 3), BigUint::from(80u32));
        assert_eq!(count_terms(2, 10), BigUint::from(34398208u32));
        assert_eq!(count_terms(3, 2), BigUint::from(54u32));
    }

    #[test]
    fn enumerate_size_zero_and_one() {
        let b = sk();
        let atoms: Vec<String> = enumerate_terms(&b, 0).map(|t| t.print(&b)).collect();
        assert_eq!(atoms, ["S", "K"]);
        let apps: Vec<String> = enumerate_terms(&b, 1).map(|t| t.print(&b)).collect();
        assert_eq!(apps, ["S S", "S K", "K S", "K K"]);
    }

    #[test]
    fn enumeration_is_complete_and_duplicate_free() {
        let b = sk();
        for n in 0..=5u64 {
            let terms: Vec<Term> = enumerate_terms(&b, n).collect();
            let expected = count_terms(2, n).to_u64().unwrap();
            assert_eq!(terms.len() as u64, expected);
            let distinct: HashSet<Term> = terms.iter().cloned().collect();
            assert_eq!(distinct.len(), terms.len());
            for t in &terms {
                assert_eq!(t.size(), n);
            }
        }
    }

    #[test]
    fn enumeration_over_larger_basis() {
        let b = Basis::from_json(
            r#"{"primitives":[
                {"name":"S","arity":3,"template":"1 3 (2 3)"},
                {"name":"K","arity":2,"template":"1"},
                {"name":"I","arity":1,"template":"1"}]}"#,
        )
        .unwrap();
        let terms: Vec<Term> = enumerate_terms(&b, 2).collect();
        assert_eq!(terms.len(), 54);
        let distinct: HashSet<Term> = terms.into_iter().collect();
        assert_eq!(distinct.len(), 54);
    }

    #[test]
    fn unrank_agrees_with_enumeration() {
        let b = sk();
        for (i, t) in enumerate_terms(&b, 4).enumerate() {
            assert_eq!(unrank(&b, 4, i as u64), t);
        }
    }

    #[test]
    fn census_size_two() {
        let b = sk();
        let kk = Term::parse("K K", &b).unwrap();
        let res = census(&b, 2, 100, Some(&kk), true);
        assert_eq!(res.total, BigUint::from(16u32));
        assert_eq!(res.normal_forms, BigUint::from(12u32));
        assert_eq!(res.bucket(1), BigUint::from(4u32));
        assert_eq!(res.fuel_exhausted, BigUint::from(0u32));
        assert_eq!(res.containing_pattern, Some(BigUint::from(4u32)));
        assert_eq!(res.typeable, Some(BigUint::from(14u32)));
        assert!(res.is_consistent());
    }

    #[test]
    fn census_size_three_bucket_one() {
        let b = sk();
        let res = census(&b, 3, 100, None, false);
        assert_eq!(res.bucket(1), BigUint::from(32u32));
        assert!(res.is_consistent());
        assert_eq!(res.typeable, None);
        assert_eq!(res.containing_pattern, None);
    }
}
