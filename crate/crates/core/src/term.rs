//! Terms over a combinator basis: plane binary trees with primitive-labelled
//! leaves. Structure is shared through `Rc`, so cloning is cheap and the
//! duplication performed by rewrite rules does not copy subtrees.

use std::rc::Rc;

use thiserror::Error;

use crate::basis::{Basis, PrimId};

#[derive(Debug)]
pub enum TermNode {
    Leaf(PrimId),
    App(Term, Term),
}

/// A combinator term. Size is the number of application nodes.
#[derive(Clone, Debug)]
pub struct Term(Rc<TermNode>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown primitive {name:?} at byte {pos}")]
    UnknownPrimitive { name: String, pos: usize },
    #[error("unexpected character {ch:?} at byte {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unbalanced parenthesis at byte {pos}")]
    Unbalanced { pos: usize },
    #[error("empty term at byte {pos}")]
    Empty { pos: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("basis has no designated S and K primitives")]
    MissingSk,
}

impl Term {
    pub fn leaf(id: PrimId) -> Term {
        Term(Rc::new(TermNode::Leaf(id)))
    }

    pub fn app(left: Term, right: Term) -> Term {
        Term(Rc::new(TermNode::App(left, right)))
    }

    pub fn node(&self) -> &TermNode {
        &self.0
    }

    pub fn is_leaf(&self) -> bool {
        matches!(*self.0, TermNode::Leaf(_))
    }

    fn ptr_eq(&self, other: &Term) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }

    /// Number of application nodes.
    pub fn size(&self) -> u64 {
        let mut count = 0u64;
        let mut stack = vec![self.clone()];
        while let Some(t) = stack.pop() {
            if let TermNode::App(l, r) = t.node() {
                count += 1;
                stack.push(l.clone());
                stack.push(r.clone());
            }
        }
        count
    }

    /// True iff `pattern` occurs as a (not necessarily proper) subtree.
    pub fn contains_subterm(&self, pattern: &Term) -> bool {
        let mut stack = vec![self.clone()];
        while let Some(t) = stack.pop() {
            if t == *pattern {
                return true;
            }
            if let TermNode::App(l, r) = t.node() {
                stack.push(l.clone());
                stack.push(r.clone());
            }
        }
        false
    }

    /// Parses `text` over `basis`. Juxtaposition associates to the left:
    /// `S K K` is `((S K) K)` and `M N (P Q)` is `((M N) (P Q))`.
    pub fn parse(text: &str, basis: &Basis) -> Result<Term, ParseError> {
        let mut p = Parser {
            bytes: text.as_bytes(),
            pos: 0,
            basis,
        };
        p.skip_ws();
        let t = p.term()?;
        p.skip_ws();
        if p.pos < p.bytes.len() {
            return Err(ParseError::UnexpectedChar {
                ch: text[p.pos..].chars().next().unwrap(),
                pos: p.pos,
            });
        }
        Ok(t)
    }

    /// Renders the term using the basis names; inverse of [`Term::parse`].
    pub fn print(&self, basis: &Basis) -> String {
        let mut out = String::new();
        self.print_into(basis, &mut out, false);
        out
    }

    fn print_into(&self, basis: &Basis, out: &mut String, parens: bool) {
        match self.node() {
            TermNode::Leaf(id) => out.push_str(&basis.primitive(*id).name),
            TermNode::App(l, r) => {
                if parens {
                    out.push('(');
                }
                l.print_into(basis, out, false);
                out.push(' ');
                r.print_into(basis, out, true);
                if parens {
                    out.push(')');
                }
            }
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        match (self.node(), other.node()) {
            (TermNode::Leaf(a), TermNode::Leaf(b)) => a == b,
            (TermNode::App(al, ar), TermNode::App(bl, br)) => al == bl && ar == br,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl std::hash::Hash for Term {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self.node() {
            TermNode::Leaf(id) => {
                state.write_u8(0);
                state.write_usize(*id);
            }
            TermNode::App(l, r) => {
                state.write_u8(1);
                l.hash(state);
                r.hash(state);
            }
        }
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    basis: &'a Basis,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut acc: Option<Term> = None;
        loop {
            self.skip_ws();
            let atom = match self.bytes.get(self.pos) {
                Some(b'(') => {
                    let open = self.pos;
                    self.pos += 1;
                    let inner = self.term()?;
                    self.skip_ws();
                    if self.bytes.get(self.pos) != Some(&b')') {
                        return Err(ParseError::Unbalanced { pos: open });
                    }
                    self.pos += 1;
                    inner
                }
                Some(c) if c.is_ascii_alphabetic() => self.name()?,
                _ => break,
            };
            acc = Some(match acc {
                None => atom,
                Some(f) => Term::app(f, atom),
            });
        }
        match acc {
            Some(t) => Ok(t),
            None => match self.bytes.get(self.pos) {
                Some(&c) => Err(ParseError::UnexpectedChar {
                    ch: c as char,
                    pos: self.pos,
                }),
                None => Err(ParseError::Empty { pos: self.pos }),
            },
        }
    }

    fn name(&mut self) -> Result<Term, ParseError> {
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric())
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        match self.basis.lookup(name) {
            Some(id) => Ok(Term::leaf(id)),
            None => Err(ParseError::UnknownPrimitive {
                name: name.to_string(),
                pos: start,
            }),
        }
    }
}

/// Builds `omega = S (S K K) (S K K)` from the basis's designated S and K.
pub fn omega(basis: &Basis) -> Result<Term, TermError> {
    let (s, k) = match (basis.s_id(), basis.k_id()) {
        (Some(s), Some(k)) => (s, k),
        _ => return Err(TermError::MissingSk),
    };
    let skk = || {
        Term::app(
            Term::app(Term::leaf(s), Term::leaf(k)),
            Term::leaf(k),
        )
    };
    Ok(Term::app(Term::app(Term::leaf(s), skk()), skk()))
}

/// `omega omega`, the canonical non-normalising term of size 13.
pub fn omega_omega(basis: &Basis) -> Result<Term, TermError> {
    let w = omega(basis)?;
    Ok(Term::app(w.clone(), w))
}

/// Replaces the leftmost leaf of `t` (first leaf in left-spine order) by
/// `omega omega`; every other node is preserved. Size grows by exactly 13.
pub fn phi_transform(t: &Term, basis: &Basis) -> Result<Term, TermError> {
    let ww = omega_omega(basis)?;
    Ok(replace_leftmost(t, &ww))
}

fn replace_leftmost(t: &Term, replacement: &Term) -> Term {
    match t.node() {
        TermNode::Leaf(_) => replacement.clone(),
        TermNode::App(l, r) => Term::app(replace_leftmost(l, replacement), r.clone()),
    }
}
