//! Principal simple-type inference for terms over the S/K basis.
//!
//! Leaves get fresh instantiations of the axiom schemes
//! `K : a -> b -> a` and `S : (a -> b -> c) -> (a -> b) -> a -> c`;
//! applications are typed by modus ponens with first-order unification
//! (with occurs check). The result, when it exists, is the principal type.

use thiserror::Error;

use crate::basis::Basis;
use crate::term::{Term, TermNode};

/// A simple type, canonicalised so that variables are numbered in order of
/// first appearance in a left-to-right depth-first walk. Two principal
/// types are alpha-equivalent iff their canonical forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SimpleType {
    Var(u32),
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn var(i: u32) -> SimpleType {
        SimpleType::Var(i)
    }

    pub fn arrow(from: SimpleType, to: SimpleType) -> SimpleType {
        SimpleType::Arrow(Box::new(from), Box::new(to))
    }
}

impl std::fmt::Display for SimpleType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn go(t: &SimpleType, f: &mut std::fmt::Formatter<'_>, parens: bool) -> std::fmt::Result {
            match t {
                SimpleType::Var(i) => write!(f, "t{i}"),
                SimpleType::Arrow(l, r) => {
                    if parens {
                        write!(f, "(")?;
                    }
                    go(l, f, true)?;
                    write!(f, " -> ")?;
                    go(r, f, false)?;
                    if parens {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, f, false)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("type inference requires the S/K basis; primitive {0:?} has no axiom scheme")]
    UnsupportedPrimitive(String),
}

/// Infers the principal type of `t`, or `None` when `t` is untypeable.
/// Every leaf must be the basis's designated S or K primitive.
pub fn infer_principal_type(t: &Term, basis: &Basis) -> Result<Option<SimpleType>, TypeError> {
    let mut inf = Infer { nodes: Vec::new() };
    match inf.infer(t, basis)? {
        Some(ty) => {
            let mut next = 0u32;
            let mut names = std::collections::HashMap::new();
            Ok(Some(inf.extract(ty, &mut next, &mut names)))
        }
        None => Ok(None),
    }
}

enum TyNode {
    /// Unbound variable, or bound to another node once unified.
    Var(Option<usize>),
    Arrow(usize, usize),
}

struct Infer {
    nodes: Vec<TyNode>,
}

impl Infer {
    fn fresh(&mut self) -> usize {
        self.nodes.push(TyNode::Var(None));
        self.nodes.len() - 1
    }

    fn arrow(&mut self, from: usize, to: usize) -> usize {
        self.nodes.push(TyNode::Arrow(from, to));
        self.nodes.len() - 1
    }

    /// Follows variable bindings to the representative node.
    fn resolve(&self, mut i: usize) -> usize {
        while let TyNode::Var(Some(next)) = self.nodes[i] {
            i = next;
        }
        i
    }

    fn occurs(&self, var: usize, i: usize) -> bool {
        let i = self.resolve(i);
        match self.nodes[i] {
            TyNode::Var(_) => i == var,
            TyNode::Arrow(l, r) => self.occurs(var, l) || self.occurs(var, r),
        }
    }

    fn unify(&mut self, a: usize, b: usize) -> bool {
        let a = self.resolve(a);
        let b = self.resolve(b);
        if a == b {
            return true;
        }
        match (&self.nodes[a], &self.nodes[b]) {
            (TyNode::Var(_), _) => {
                if self.occurs(a, b) {
                    return false;
                }
                self.nodes[a] = TyNode::Var(Some(b));
                true
            }
            (_, TyNode::Var(_)) => {
                if self.occurs(b, a) {
                    return false;
                }
                self.nodes[b] = TyNode::Var(Some(a));
                true
            }
            (&TyNode::Arrow(al, ar), &TyNode::Arrow(bl, br)) => {
                self.unify(al, bl) && self.unify(ar, br)
            }
        }
    }

    /// Returns the node of `t`'s type, or `None` on unification failure.
    fn infer(&mut self, t: &Term, basis: &Basis) -> Result<Option<usize>, TypeError> {
        match t.node() {
            TermNode::Leaf(id) => {
                if Some(*id) == basis.k_id() {
                    // a -> b -> a
                    let a = self.fresh();
                    let b = self.fresh();
                    let ba = self.arrow(b, a);
                    Ok(Some(self.arrow(a, ba)))
                } else if Some(*id) == basis.s_id() {
                    // (a -> b -> c) -> (a -> b) -> a -> c
                    let a = self.fresh();
                    let b = self.fresh();
                    let c = self.fresh();
                    let bc = self.arrow(b, c);
                    let abc = self.arrow(a, bc);
                    let ab = self.arrow(a, b);
                    let ac = self.arrow(a, c);
                    let tail = self.arrow(ab, ac);
                    Ok(Some(self.arrow(abc, tail)))
                } else {
                    Err(TypeError::UnsupportedPrimitive(
                        basis.primitive(*id).name.clone(),
                    ))
                }
            }
            TermNode::App(l, r) => {
                let Some(tl) = self.infer(l, basis)? else {
                    return Ok(None);
                };
                let Some(tr) = self.infer(r, basis)? else {
                    return Ok(None);
                };
                let result = self.fresh();
                let expected = self.arrow(tr, result);
                Ok(self.unify(tl, expected).then_some(result))
            }
        }
    }

    fn extract(
        &self,
        i: usize,
        next: &mut u32,
        names: &mut std::collections::HashMap<usize, u32>,
    ) -> SimpleType {
        let i = self.resolve(i);
        match self.nodes[i] {
            TyNode::Var(_) => {
                let n = *names.entry(i).or_insert_with(|| {
                    let n = *next;
                    *next += 1;
                    n
                });
                SimpleType::Var(n)
            }
            TyNode::Arrow(l, r) => {
                let lt = self.extract(l, next, names);
                let rt = self.extract(r, next, names);
                SimpleType::arrow(lt, rt)
            }
        }
    }
}
