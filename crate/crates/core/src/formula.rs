//! Formulas of multiplicative-exponential linear logic with the paragraph
//! modality, and the ♭-wrapped labels that only appear on net edges.
//!
//! Negation is stored on atoms only. The dual of a compound formula is
//! always computed through the De Morgan laws, so two formulas denote the
//! same proposition exactly when they are structurally equal.
//!
//! The ASCII syntax is
//!
//! ```text
//! F ::= ident | ident^ | 1 | bot | (F * F) | (F @ F) | !F | ?F | #F
//! ```
//!
//! where `*` is tensor, `@` is par, `#` is paragraph and `^` marks a dual
//! atom. Edge labels may additionally be written `%F` for ♭F.

use std::fmt;

use thiserror::Error;

/// Name of the atom used by the default atomic substitution.
pub const BULLET_ATOM: &str = "X";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom { name: String, dual: bool },
    One,
    Bottom,
    Tensor(Box<Formula>, Box<Formula>),
    Par(Box<Formula>, Box<Formula>),
    OfCourse(Box<Formula>),
    WhyNot(Box<Formula>),
    Paragraph(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom { name: name.into(), dual: false }
    }

    pub fn dual_atom(name: impl Into<String>) -> Formula {
        Formula::Atom { name: name.into(), dual: true }
    }

    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Tensor(Box::new(a), Box::new(b))
    }

    pub fn par(a: Formula, b: Formula) -> Formula {
        Formula::Par(Box::new(a), Box::new(b))
    }

    pub fn of_course(a: Formula) -> Formula {
        Formula::OfCourse(Box::new(a))
    }

    pub fn why_not(a: Formula) -> Formula {
        Formula::WhyNot(Box::new(a))
    }

    pub fn paragraph(a: Formula) -> Formula {
        Formula::Paragraph(Box::new(a))
    }

    /// Linear implication `a ⊸ b`, i.e. `a⊥ ⅋ b`.
    pub fn lolli(a: Formula, b: Formula) -> Formula {
        Formula::par(a.dual(), b)
    }

    /// De Morgan dual.
    pub fn dual(&self) -> Formula {
        match self {
            Formula::Atom { name, dual } => Formula::Atom { name: name.clone(), dual: !dual },
            Formula::One => Formula::Bottom,
            Formula::Bottom => Formula::One,
            Formula::Tensor(a, b) => Formula::par(a.dual(), b.dual()),
            Formula::Par(a, b) => Formula::tensor(a.dual(), b.dual()),
            Formula::OfCourse(a) => Formula::why_not(a.dual()),
            Formula::WhyNot(a) => Formula::of_course(a.dual()),
            Formula::Paragraph(a) => Formula::paragraph(a.dual()),
        }
    }

    /// `A⁺`: every `!` becomes `!§` and every `?` becomes `?§`.
    pub fn shift(&self) -> Formula {
        match self {
            Formula::Atom { .. } | Formula::One | Formula::Bottom => self.clone(),
            Formula::Tensor(a, b) => Formula::tensor(a.shift(), b.shift()),
            Formula::Par(a, b) => Formula::par(a.shift(), b.shift()),
            Formula::OfCourse(a) => Formula::of_course(Formula::paragraph(a.shift())),
            Formula::WhyNot(a) => Formula::why_not(Formula::paragraph(a.shift())),
            Formula::Paragraph(a) => Formula::paragraph(a.shift()),
        }
    }

    /// `A•`: every atom becomes `X ⊗ X` and every dual atom `X⊥ ⅋ X⊥`.
    pub fn bullet(&self) -> Formula {
        match self {
            Formula::Atom { dual: false, .. } => {
                Formula::tensor(Formula::atom(BULLET_ATOM), Formula::atom(BULLET_ATOM))
            }
            Formula::Atom { dual: true, .. } => {
                Formula::par(Formula::dual_atom(BULLET_ATOM), Formula::dual_atom(BULLET_ATOM))
            }
            Formula::One | Formula::Bottom => self.clone(),
            Formula::Tensor(a, b) => Formula::tensor(a.bullet(), b.bullet()),
            Formula::Par(a, b) => Formula::par(a.bullet(), b.bullet()),
            Formula::OfCourse(a) => Formula::of_course(a.bullet()),
            Formula::WhyNot(a) => Formula::why_not(a.bullet()),
            Formula::Paragraph(a) => Formula::paragraph(a.bullet()),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom { .. })
    }

    /// True when no `!` or `?` occurs in the formula.
    pub fn is_exponential_free(&self) -> bool {
        match self {
            Formula::Atom { .. } | Formula::One | Formula::Bottom => true,
            Formula::Tensor(a, b) | Formula::Par(a, b) => {
                a.is_exponential_free() && b.is_exponential_free()
            }
            Formula::OfCourse(_) | Formula::WhyNot(_) => false,
            Formula::Paragraph(a) => a.is_exponential_free(),
        }
    }

    /// Number of connective and atom occurrences.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom { .. } | Formula::One | Formula::Bottom => 1,
            Formula::Tensor(a, b) | Formula::Par(a, b) => 1 + a.size() + b.size(),
            Formula::OfCourse(a) | Formula::WhyNot(a) | Formula::Paragraph(a) => 1 + a.size(),
        }
    }

    pub fn parse(text: &str) -> Result<Formula, ParseError> {
        let mut p = Parser::new(text);
        let f = p.formula()?;
        p.finish()?;
        Ok(f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { name, dual: false } => write!(f, "{name}"),
            Formula::Atom { name, dual: true } => write!(f, "{name}^"),
            Formula::One => write!(f, "1"),
            Formula::Bottom => write!(f, "bot"),
            Formula::Tensor(a, b) => write!(f, "({a} * {b})"),
            Formula::Par(a, b) => write!(f, "({a} @ {b})"),
            Formula::OfCourse(a) => write!(f, "!{a}"),
            Formula::WhyNot(a) => write!(f, "?{a}"),
            Formula::Paragraph(a) => write!(f, "#{a}"),
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Formula::parse(s)
    }
}

/// Label of a net edge: a formula, or a ♭-formula. `♭♭A` is unrepresentable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeLabel {
    Plain(Formula),
    Flat(Formula),
}

impl EdgeLabel {
    pub fn formula(&self) -> &Formula {
        match self {
            EdgeLabel::Plain(f) | EdgeLabel::Flat(f) => f,
        }
    }

    pub fn is_flat(&self) -> bool {
        matches!(self, EdgeLabel::Flat(_))
    }

    pub fn as_plain(&self) -> Option<&Formula> {
        match self {
            EdgeLabel::Plain(f) => Some(f),
            EdgeLabel::Flat(_) => None,
        }
    }

    /// Applies `f` to the underlying formula, keeping the ♭ marker.
    pub fn map(&self, f: impl FnOnce(&Formula) -> Formula) -> EdgeLabel {
        match self {
            EdgeLabel::Plain(a) => EdgeLabel::Plain(f(a)),
            EdgeLabel::Flat(a) => EdgeLabel::Flat(f(a)),
        }
    }

    pub fn parse(text: &str) -> Result<EdgeLabel, ParseError> {
        let trimmed = text.trim_start();
        if let Some(rest) = trimmed.strip_prefix('%') {
            let offset = text.len() - rest.len();
            let mut p = Parser::new(text);
            p.pos = offset;
            let f = p.formula()?;
            p.finish()?;
            Ok(EdgeLabel::Flat(f))
        } else {
            Formula::parse(text).map(EdgeLabel::Plain)
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeLabel::Plain(a) => write!(f, "{a}"),
            EdgeLabel::Flat(a) => write!(f, "%{a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => self.error(format!("expected '{c}', found '{d}'")),
            None => self.error(format!("expected '{c}', found end of input")),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(format!("unexpected trailing '{c}'")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        let Some(c) = self.peek() else {
            return self.error("expected a formula, found end of input");
        };
        match c {
            '!' | '?' | '#' => {
                self.pos += 1;
                let body = self.formula()?;
                Ok(match c {
                    '!' => Formula::of_course(body),
                    '?' => Formula::why_not(body),
                    _ => Formula::paragraph(body),
                })
            }
            '(' => {
                self.pos += 1;
                let left = self.formula()?;
                self.skip_ws();
                let op = self.peek();
                let make: fn(Formula, Formula) -> Formula = match op {
                    Some('*') => Formula::tensor,
                    Some('@') => Formula::par,
                    Some(d) => return self.error(format!("expected '*' or '@', found '{d}'")),
                    None => return self.error("expected '*' or '@', found end of input"),
                };
                self.pos += 1;
                let right = self.formula()?;
                self.expect(')')?;
                Ok(make(left, right))
            }
            '1' => {
                self.pos += 1;
                Ok(Formula::One)
            }
            '%' => self.error("'%' (flat) is only allowed at the head of an edge label"),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while let Some(d) = self.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let ident = &self.src[start..self.pos];
                if ident == "bot" {
                    return Ok(Formula::Bottom);
                }
                let dual = if self.peek() == Some('^') {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                Ok(Formula::Atom { name: ident.to_string(), dual })
            }
            other => self.error(format!("unexpected '{other}'")),
        }
    }
}
