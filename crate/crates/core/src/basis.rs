//! Combinator bases: finite sets of primitive combinators, each carrying an
//! arity and a rewrite template.

use serde::Deserialize;
use thiserror::Error;

/// Index of a primitive combinator within its ambient [`Basis`].
pub type PrimId = usize;

/// Binary tree whose leaves are 1-based metavariable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Template {
    Var(u32),
    App(Box<Template>, Box<Template>),
}

impl Template {
    /// Parses templates like `1 3 (2 3)` (juxtaposition, left-associative).
    pub fn parse(text: &str) -> Result<Template, BasisError> {
        let mut toks = tokenize(text);
        let t = parse_template(&mut toks)?;
        if !toks.is_empty() {
            return Err(BasisError::Template(format!(
                "trailing input in template {text:?}"
            )));
        }
        Ok(t)
    }

    fn max_var(&self) -> u32 {
        match self {
            Template::Var(i) => *i,
            Template::App(l, r) => l.max_var().max(r.max_var()),
        }
    }

    fn min_var(&self) -> u32 {
        match self {
            Template::Var(i) => *i,
            Template::App(l, r) => l.min_var().min(r.min_var()),
        }
    }
}

fn tokenize(text: &str) -> Vec<String> {
    let mut toks = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
                toks.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        toks.push(cur);
    }
    toks.reverse(); // pop() takes from the front
    toks
}

fn parse_template(toks: &mut Vec<String>) -> Result<Template, BasisError> {
    let mut acc: Option<Template> = None;
    while let Some(tok) = toks.last() {
        let atom = match tok.as_str() {
            ")" => break,
            "(" => {
                toks.pop();
                let inner = parse_template(toks)?;
                match toks.pop() {
                    Some(t) if t == ")" => inner,
                    _ => return Err(BasisError::Template("unbalanced parenthesis".into())),
                }
            }
            _ => {
                let tok = toks.pop().unwrap();
                let idx: u32 = tok
                    .parse()
                    .map_err(|_| BasisError::Template(format!("bad metavariable {tok:?}")))?;
                Template::Var(idx)
            }
        };
        acc = Some(match acc {
            None => atom,
            Some(f) => Template::App(Box::new(f), Box::new(atom)),
        });
    }
    acc.ok_or_else(|| BasisError::Template("empty template".into()))
}

/// A primitive combinator `X` with rule `X N_1 ... N_m -> M`.
#[derive(Clone, Debug)]
pub struct PrimitiveCombinator {
    pub name: String,
    pub arity: u32,
    pub template: Template,
}

/// An ordered finite set of primitive combinators.
#[derive(Clone, Debug)]
pub struct Basis {
    primitives: Vec<PrimitiveCombinator>,
    /// Primitive playing the role of S (needed by the omega construction).
    s_id: Option<PrimId>,
    /// Primitive playing the role of K.
    k_id: Option<PrimId>,
}

#[derive(Debug, Error)]
pub enum BasisError {
    #[error("basis must contain at least one primitive")]
    Empty,
    #[error("duplicate or empty primitive name {0:?}")]
    BadName(String),
    #[error("primitive {0:?} has arity 0")]
    ZeroArity(String),
    #[error("template of {0:?} uses metavariable outside 1..={1}")]
    VarOutOfRange(String, u32),
    #[error("invalid template: {0}")]
    Template(String),
    #[error("invalid basis file: {0}")]
    Json(String),
}

#[derive(Deserialize)]
struct BasisFile {
    primitives: Vec<PrimitiveFile>,
}

#[derive(Deserialize)]
struct PrimitiveFile {
    name: String,
    arity: u32,
    template: String,
}

impl Basis {
    pub fn new(primitives: Vec<PrimitiveCombinator>) -> Result<Basis, BasisError> {
        if primitives.is_empty() {
            return Err(BasisError::Empty);
        }
        let mut seen = std::collections::HashSet::new();
        for p in &primitives {
            if p.name.is_empty() || !seen.insert(p.name.clone()) {
                return Err(BasisError::BadName(p.name.clone()));
            }
            if p.arity == 0 {
                return Err(BasisError::ZeroArity(p.name.clone()));
            }
            if p.template.max_var() > p.arity || p.template.min_var() == 0 {
                return Err(BasisError::VarOutOfRange(p.name.clone(), p.arity));
            }
        }
        let s_id = primitives.iter().position(|p| p.name == "S" && p.arity == 3);
        let k_id = primitives.iter().position(|p| p.name == "K" && p.arity == 2);
        Ok(Basis {
            primitives,
            s_id,
            k_id,
        })
    }

    /// The standard S/K basis.
    pub fn sk() -> Basis {
        Basis::new(vec![
            PrimitiveCombinator {
                name: "S".into(),
                arity: 3,
                template: Template::parse("1 3 (2 3)").unwrap(),
            },
            PrimitiveCombinator {
                name: "K".into(),
                arity: 2,
                template: Template::parse("1").unwrap(),
            },
        ])
        .unwrap()
    }

    /// Loads a basis description of the form
    /// `{"primitives":[{"name":"S","arity":3,"template":"1 3 (2 3)"}, ...]}`.
    pub fn from_json(text: &str) -> Result<Basis, BasisError> {
        let file: BasisFile =
            serde_json::from_str(text).map_err(|e| BasisError::Json(e.to_string()))?;
        let prims = file
            .primitives
            .into_iter()
            .map(|p| {
                Ok(PrimitiveCombinator {
                    template: Template::parse(&p.template)?,
                    name: p.name,
                    arity: p.arity,
                })
            })
            .collect::<Result<Vec<_>, BasisError>>()?;
        Basis::new(prims)
    }

    /// Number of primitives, the `d` of the counting formula.
    pub fn cardinality(&self) -> usize {
        self.primitives.len()
    }

    pub fn primitives(&self) -> &[PrimitiveCombinator] {
        &self.primitives
    }

    pub fn primitive(&self, id: PrimId) -> &PrimitiveCombinator {
        &self.primitives[id]
    }

    pub fn lookup(&self, name: &str) -> Option<PrimId> {
        self.primitives.iter().position(|p| p.name == name)
    }

    pub fn s_id(&self) -> Option<PrimId> {
        self.s_id
    }

    pub fn k_id(&self) -> Option<PrimId> {
        self.k_id
    }

    /// True for the plain two-primitive S/K basis.
    pub fn is_sk(&self) -> bool {
        self.cardinality() == 2 && self.s_id == Some(0) && self.k_id == Some(1)
    }
}
