//! Textual descriptions of symbolic sets.
//!
//! ```text
//! setspec := "group:" gens
//!          | "cone:" gens
//!          | "cosets:" gens ";" scalar ";" scalar
//!          | "image:[" rat "," rat ";" rat "," rat "]:" setspec
//! gens    := scalar { "," scalar }
//! ```
//!
//! `group:1,1*sqrt(2)` is `ℤ + ℤ√2`, `cone:` its nonnegative part,
//! `cosets:4;0;1` is `(4ℤ) ∪ (4ℤ + 1)`, and `image:[m11,m12;m21,m22]:S` is the
//! image of `S` under the matrix acting on `(p, q)` for `p + q√d`. Scalars use
//! the usual literal grammar; all `sqrt` terms share one radicand.

use std::fmt;

use subline_core::scalar::{parse_literal, Radicand, ScalarError};
use subline_core::{AdditiveMap, Lattice, QuadScalar, SymbolicError, SymbolicSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSpecError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for SetSpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for SetSpecError {}

#[derive(Debug, Clone)]
struct Lit {
    column: usize,
    value: QuadScalar,
    radicand: Option<Radicand>,
}

#[derive(Debug, Clone)]
enum Ast {
    Group(Vec<Lit>),
    Cone(Vec<Lit>),
    Cosets(Vec<Lit>, Box<(Lit, Lit)>),
    Image(Box<[Lit; 4]>, Box<Ast>),
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, SetSpecError> {
        Err(SetSpecError { column: self.pos + 1, message: message.into() })
    }

    fn eat(&mut self, s: &str) -> bool {
        let s: Vec<char> = s.chars().collect();
        if self.chars[self.pos..].starts_with(&s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), SetSpecError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.error(format!("expected {s:?}"))
        }
    }

    fn literal(&mut self) -> Result<Lit, SetSpecError> {
        let start = self.pos;
        while self.pos < self.chars.len() && !matches!(self.chars[self.pos], ',' | ';' | ']') {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        if text.is_empty() {
            return Err(SetSpecError { column: start + 1, message: "expected a scalar".into() });
        }
        let lit = parse_literal(&text).map_err(|e| match e {
            ScalarError::Syntax { column, message } => {
                SetSpecError { column: start + column, message: message.into() }
            }
            other => SetSpecError { column: start + 1, message: other.to_string() },
        })?;
        Ok(Lit { column: start + 1, value: lit.value, radicand: lit.written_radicand })
    }

    fn gens(&mut self) -> Result<Vec<Lit>, SetSpecError> {
        let mut out = vec![self.literal()?];
        while self.eat(",") {
            out.push(self.literal()?);
        }
        Ok(out)
    }

    fn spec(&mut self) -> Result<Ast, SetSpecError> {
        if self.eat("group:") {
            Ok(Ast::Group(self.gens()?))
        } else if self.eat("cone:") {
            Ok(Ast::Cone(self.gens()?))
        } else if self.eat("cosets:") {
            let h = self.gens()?;
            self.expect(";")?;
            let a = self.literal()?;
            self.expect(";")?;
            let b = self.literal()?;
            Ok(Ast::Cosets(h, Box::new((a, b))))
        } else if self.eat("image:[") {
            let m11 = self.literal()?;
            self.expect(",")?;
            let m12 = self.literal()?;
            self.expect(";")?;
            let m21 = self.literal()?;
            self.expect(",")?;
            let m22 = self.literal()?;
            self.expect("]:")?;
            Ok(Ast::Image(Box::new([m11, m12, m21, m22]), Box::new(self.spec()?)))
        } else {
            self.error("expected one of \"group:\", \"cone:\", \"cosets:\", \"image:[\"")
        }
    }
}

impl Ast {
    fn literals(&self) -> Vec<&Lit> {
        match self {
            Ast::Group(g) | Ast::Cone(g) => g.iter().collect(),
            Ast::Cosets(h, ab) => h.iter().chain([&ab.0, &ab.1]).collect(),
            Ast::Image(m, inner) => m.iter().chain(inner.literals()).collect(),
        }
    }

    fn build(&self, radicand: Radicand) -> Result<SymbolicSet, SetSpecError> {
        let at = |lit: &Lit| {
            let column = lit.column;
            move |e: SymbolicError| SetSpecError { column, message: e.to_string() }
        };
        let lattice = |g: &[Lit]| {
            Lattice::new(g.iter().map(|l| l.value.clone()).collect()).map_err(at(&g[0]))
        };
        Ok(match self {
            Ast::Group(g) => SymbolicSet::Group(lattice(g)?),
            Ast::Cone(g) => SymbolicSet::Cone(lattice(g)?),
            Ast::Cosets(h, ab) => SymbolicSet::CosetPair {
                subgroup: lattice(h)?,
                a: ab.0.value.clone(),
                b: ab.1.value.clone(),
            },
            Ast::Image(m, inner) => {
                for lit in m.iter() {
                    if !lit.value.is_rational() {
                        return Err(SetSpecError { column: lit.column, message: "matrix entries must be rational".into() });
                    }
                }
                if radicand.is_rational() {
                    return Err(SetSpecError {
                        column: m[0].column,
                        message: "image needs an irrational field; write a sqrt term or pass --d".into(),
                    });
                }
                let e = |i: usize| m[i].value.rat_part().clone();
                let map = AdditiveMap::new([[e(0), e(1)], [e(2), e(3)]], radicand).map_err(at(&m[0]))?;
                SymbolicSet::image(map, inner.build(radicand)?)
            }
        })
    }
}

/// Parse a set description. `radicand` pins the field, otherwise the first
/// `sqrt` term decides it.
pub fn parse_setspec(text: &str, radicand: Option<Radicand>) -> Result<SymbolicSet, SetSpecError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let ast = p.spec()?;
    if p.pos != p.chars.len() {
        return p.error("unexpected trailing input");
    }
    let mut field = radicand;
    for lit in ast.literals() {
        if let Some(r) = lit.radicand.filter(|r| !r.is_rational()) {
            match field {
                None => field = Some(r),
                Some(f) if f != r => {
                    return Err(SetSpecError {
                        column: lit.column,
                        message: format!("mixed radicands: sqrt({}) here, sqrt({}) expected", r.get(), f.get()),
                    })
                }
                _ => {}
            }
        }
    }
    ast.build(field.unwrap_or(Radicand::ONE))
}
