//! Normal-order (leftmost-outermost) reduction for arbitrary bases.
//!
//! A redex is a node whose left spine applies a primitive `X` to exactly
//! `arity(X)` arguments; extra arguments belong to enclosing applications.
//! The leftmost-outermost redex is the redex whose root comes first in
//! preorder traversal (node, then left subtree, then right subtree).
//!
//! Reduction length convention: contracting an arity-`m` primitive adds
//! `max(1, m - 1)` to the reduction length, so for the S/K basis a
//! K-contraction counts one step and an S-contraction counts two. This is
//! the convention under which the per-step counting sequences reproduced by
//! the census and series modules were tabulated. `step` itself performs a
//! single contraction.

use crate::basis::{Basis, PrimId, PrimitiveCombinator, Template};
use crate::term::{Term, TermNode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Left,
    Right,
}

/// Path from the root to the root of a redex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedexSite {
    pub path: Vec<Direction>,
}

/// Result of fuel-bounded normalisation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionOutcome {
    NormalForm { result: Term, steps: u64 },
    FuelExhausted { last: Term, steps_taken: u64 },
}

impl ReductionOutcome {
    pub fn is_normal_form(&self) -> bool {
        matches!(self, ReductionOutcome::NormalForm { .. })
    }

    pub fn steps(&self) -> u64 {
        match self {
            ReductionOutcome::NormalForm { steps, .. } => *steps,
            ReductionOutcome::FuelExhausted { steps_taken, .. } => *steps_taken,
        }
    }
}

fn step_cost(prim: &PrimitiveCombinator) -> u64 {
    u64::from(prim.arity.saturating_sub(1)).max(1)
}

/// If the left spine of `t` ends in a primitive applied to exactly its
/// arity, returns the head primitive id.
fn redex_head(t: &Term, basis: &Basis) -> Option<PrimId> {
    let mut apps = 0u32;
    let mut cur = t;
    loop {
        match cur.node() {
            TermNode::App(l, _) => {
                apps += 1;
                cur = l;
            }
            TermNode::Leaf(id) => {
                let prim = basis.primitive(*id);
                return (apps == prim.arity).then_some(*id);
            }
        }
    }
}

/// Preorder-first redex site, or `None` when `t` is in normal form.
pub fn find_leftmost_outermost_redex(t: &Term, basis: &Basis) -> Option<RedexSite> {
    let mut path = Vec::new();
    find(t, basis, &mut path).then_some(RedexSite { path })
}

fn find(t: &Term, basis: &Basis, path: &mut Vec<Direction>) -> bool {
    if redex_head(t, basis).is_some() {
        return true;
    }
    if let TermNode::App(l, r) = t.node() {
        path.push(Direction::Left);
        if find(l, basis, path) {
            return true;
        }
        path.pop();
        path.push(Direction::Right);
        if find(r, basis, path) {
            return true;
        }
        path.pop();
    }
    false
}

fn instantiate(template: &Template, args: &[Term]) -> Term {
    match template {
        Template::Var(i) => args[(*i - 1) as usize].clone(),
        Template::App(l, r) => Term::app(instantiate(l, args), instantiate(r, args)),
    }
}

/// Contracts a redex rooted at `t`. Caller must ensure `t` is a redex.
fn contract(t: &Term, basis: &Basis) -> (Term, u64) {
    let mut rev_args = Vec::new();
    let mut cur = t;
    let head = loop {
        match cur.node() {
            TermNode::App(l, r) => {
                rev_args.push(r.clone());
                cur = l;
            }
            TermNode::Leaf(id) => break *id,
        }
    };
    rev_args.reverse();
    let prim = basis.primitive(head);
    debug_assert_eq!(rev_args.len(), prim.arity as usize);
    (instantiate(&prim.template, &rev_args), step_cost(prim))
}

/// Contracts the leftmost-outermost redex; `None` iff `t` is normal.
pub fn step(t: &Term, basis: &Basis) -> Option<Term> {
    step_with_cost(t, basis).map(|(t, _)| t)
}

/// Like [`step`], also reporting the length contribution of the contraction.
pub fn step_with_cost(t: &Term, basis: &Basis) -> Option<(Term, u64)> {
    let site = find_leftmost_outermost_redex(t, basis)?;
    Some(contract_at(t, basis, &site.path))
}

fn contract_at(t: &Term, basis: &Basis, path: &[Direction]) -> (Term, u64) {
    match path.split_first() {
        None => contract(t, basis),
        Some((dir, rest)) => match t.node() {
            TermNode::App(l, r) => match dir {
                Direction::Left => {
                    let (l2, cost) = contract_at(l, basis, rest);
                    (Term::app(l2, r.clone()), cost)
                }
                Direction::Right => {
                    let (r2, cost) = contract_at(r, basis, rest);
                    (Term::app(l.clone(), r2), cost)
                }
            },
            TermNode::Leaf(_) => unreachable!("redex path into a leaf"),
        },
    }
}

/// Iterates leftmost-outermost contraction until normal form or the length
/// budget runs out. Equivalent to iterating [`step`], but runs in time
/// proportional to the work done instead of rescanning from the root.
pub fn normalize(t: &Term, basis: &Basis, fuel: u64) -> ReductionOutcome {
    let mut steps = 0u64;
    match norm(t, basis, fuel, &mut steps) {
        Ok(result) => ReductionOutcome::NormalForm { result, steps },
        Err(last) => ReductionOutcome::FuelExhausted {
            last,
            steps_taken: steps,
        },
    }
}

/// Head-reduces with an explicit spine stack, then normalises the remaining
/// arguments left to right. `Err` carries the partially reduced term.
fn norm(t: &Term, basis: &Basis, fuel: u64, steps: &mut u64) -> Result<Term, Term> {
    let mut current = t.clone();
    let mut stack: Vec<Term> = Vec::new();
    let head = loop {
        while let TermNode::App(l, r) = current.node() {
            stack.push(r.clone());
            let l = l.clone();
            current = l;
        }
        let id = match current.node() {
            TermNode::Leaf(id) => *id,
            TermNode::App(..) => unreachable!(),
        };
        let prim = basis.primitive(id);
        let m = prim.arity as usize;
        if stack.len() < m {
            break id;
        }
        let cost = step_cost(prim);
        if *steps + cost > fuel {
            return Err(rebuild(current, &mut stack));
        }
        *steps += cost;
        let at = stack.len() - m;
        let args: Vec<Term> = stack.drain(at..).rev().collect();
        current = instantiate(&prim.template, &args);
    };
    // Head-normal: primitive applied to fewer arguments than its arity.
    // Remaining reductions happen inside the arguments, leftmost first.
    let mut result = Term::leaf(head);
    while let Some(arg) = stack.pop() {
        match norm(&arg, basis, fuel, steps) {
            Ok(nf) => result = Term::app(result, nf),
            Err(partial) => {
                result = Term::app(result, partial);
                return Err(rebuild(result, &mut stack));
            }
        }
    }
    Ok(result)
}

fn rebuild(mut head: Term, stack: &mut Vec<Term>) -> Term {
    while let Some(arg) = stack.pop() {
        head = Term::app(head, arg);
    }
    head
}

/// Reduction length of `t`, or `None` when the fuel is exhausted first.
pub fn reduction_length(t: &Term, basis: &Basis, fuel: u64) -> Option<u64> {
    match normalize(t, basis, fuel) {
        ReductionOutcome::NormalForm { steps, .. } => Some(steps),
        ReductionOutcome::FuelExhausted { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::omega_omega;

    fn sk() -> Basis {
        Basis::sk()
    }

    fn t(text: &str, b: &Basis) -> Term {
        Term::parse(text, b).unwrap()
    }

    #[test]
    fn root_redex() {
        let b = sk();
        let site = find_leftmost_outermost_redex(&t("K S S", &b), &b).unwrap();
        assert!(site.path.is_empty());
    }

    #[test]
    fn underapplied_is_normal() {
        let b = sk();
        assert!(find_leftmost_outermost_redex(&t("S K", &b), &b).is_none());
        assert!(step(&t("S K", &b), &b).is_none());
    }

    #[test]
    fn leftmost_redex_of_two() {
        let b = sk();
        // (K S S)(K K K): both factors are redexes, the left one comes first
        let site = find_leftmost_outermost_redex(&t("(K S S)(K K K)", &b), &b).unwrap();
        assert_eq!(site.path, vec![Direction::Left]);
        let stepped = step(&t("(K S S)(K K K)", &b), &b).unwrap();
        assert_eq!(stepped, t("S (K K K)", &b));
    }

    #[test]
    fn outer_redex_before_inner_on_spine() {
        let b = sk();
        // K (K S S) K: root is the redex even though the argument also reduces
        let stepped = step(&t("K (K S S) K", &b), &b).unwrap();
        assert_eq!(stepped, t("K S S", &b));
    }

    #[test]
    fn k_contraction() {
        let b = sk();
        assert_eq!(step(&t("K S K", &b), &b).unwrap(), t("S", &b));
    }

    #[test]
    fn s_contraction() {
        let b = sk();
        assert_eq!(step(&t("S K K K", &b), &b).unwrap(), t("K K (K K)", &b));
    }

    #[test]
    fn normalize_zero_fuel_on_normal_form() {
        let b = sk();
        let out = normalize(&t("S", &b), &b, 0);
        assert_eq!(
            out,
            ReductionOutcome::NormalForm {
                result: t("S", &b),
                steps: 0
            }
        );
    }

    #[test]
    fn normalize_skkk() {
        let b = sk();
        // S K K K -> K K (K K) -> K, one S-contraction plus one K-contraction
        let out = normalize(&t("S K K K", &b), &b, 10);
        assert_eq!(
            out,
            ReductionOutcome::NormalForm {
                result: t("K", &b),
                steps: 3
            }
        );
    }

    #[test]
    fn reduction_length_examples() {
        let b = sk();
        assert_eq!(reduction_length(&t("S K", &b), &b, 10), Some(0));
        assert_eq!(reduction_length(&t("K S K", &b), &b, 10), Some(1));
        assert_eq!(reduction_length(&t("S S K K", &b), &b, 10), Some(2));
    }

    #[test]
    fn omega_omega_exhausts_fuel() {
        let b = sk();
        let ww = omega_omega(&b).unwrap();
        match normalize(&ww, &b, 1000) {
            ReductionOutcome::FuelExhausted { steps_taken, .. } => {
                assert!(steps_taken <= 1000);
                assert!(steps_taken >= 999);
            }
            other => panic!("expected fuel exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn machine_agrees_with_single_steps() {
        let b = sk();
        for text in [
            "S K K K",
            "S S S S",
            "K (K S S) (S K K)",
            "S (S K K) (S K K) K",
            "S S (K S) (K K S)",
        ] {
            let term = t(text, &b);
            // oracle: iterate step(), summing contraction costs
            let mut cur = term.clone();
            let mut len = 0;
            while let Some((next, cost)) = step_with_cost(&cur, &b) {
                cur = next;
                len += cost;
                assert!(len < 10_000);
            }
            let out = normalize(&term, &b, 10_000);
            assert_eq!(
                out,
                ReductionOutcome::NormalForm {
                    result: cur,
                    steps: len
                }
            );
        }
    }

    #[test]
    fn k_contraction_strictly_decreases_size() {
        let b = sk();
        for text in ["K S K", "K (S S) (K K K)", "K K (S S S)"] {
            let term = t(text, &b);
            let stepped = step(&term, &b).unwrap();
            assert!(stepped.size() < term.size(), "{text}");
        }
    }

    #[test]
    fn monotone_fuel() {
        let b = sk();
        let term = t("S S K K", &b);
        let out = normalize(&term, &b, 2);
        assert!(out.is_normal_form());
        for fuel in 2..10 {
            assert_eq!(normalize(&term, &b, fuel), out);
        }
        // below the requirement: exhausted
        assert!(!normalize(&term, &b, 1).is_normal_form());
    }
}
