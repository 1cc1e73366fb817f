//! Nelson terms, equations, and the text syntax for both.
//!
//! Grammar, loosest to tightest:
//!
//! ```text
//! equation := imp '=' imp
//! imp      := join ( '->' imp )?          right associative
//! join     := meet ( '\/' meet )*         left associative
//! meet     := unary ( '/\' unary )*       left associative
//! unary    := '~' unary | atom
//! atom     := identifier | '0' | '1' | '(' imp ')'
//! ```
//!
//! `∼`, `∧`, `∨` and `→` are accepted as aliases of the ASCII operators.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Neg(Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Imp(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

pub fn var(name: &str) -> Term {
    assert!(!name.is_empty(), "variable names are nonempty");
    Term::Var(name.to_string())
}

impl Term {
    pub fn neg(self) -> Term {
        Term::Neg(Box::new(self))
    }

    pub fn meet(self, rhs: Term) -> Term {
        Term::Meet(Box::new(self), Box::new(rhs))
    }

    pub fn join(self, rhs: Term) -> Term {
        Term::Join(Box::new(self), Box::new(rhs))
    }

    pub fn imp(self, rhs: Term) -> Term {
        Term::Imp(Box::new(self), Box::new(rhs))
    }

    /// Weak negation `x -> 0`.
    pub fn weak_neg(self) -> Term {
        self.imp(Term::Zero)
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero | Term::One => {}
            Term::Neg(t) => t.collect_vars(out),
            Term::Meet(a, b) | Term::Join(a, b) | Term::Imp(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Imp(..) => 1,
            Term::Join(..) => 2,
            Term::Meet(..) => 3,
            Term::Neg(..) => 4,
            _ => 5,
        }
    }
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut v = self.lhs.variables();
        v.extend(self.rhs.variables());
        v
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, t: &Term, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

/// Prints with the minimal parentheses needed to parse back to the same tree.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Neg(t) => {
                write!(f, "~")?;
                write_operand(f, t, t.precedence() < 4)
            }
            Term::Meet(a, b) => {
                write_operand(f, a, a.precedence() < 3)?;
                write!(f, " /\\ ")?;
                write_operand(f, b, b.precedence() <= 3)
            }
            Term::Join(a, b) => {
                write_operand(f, a, a.precedence() < 2)?;
                write!(f, " \\/ ")?;
                write_operand(f, b, b.precedence() <= 2)
            }
            Term::Imp(a, b) => {
                write_operand(f, a, a.precedence() <= 1)?;
                write!(f, " -> ")?;
                write_operand(f, b, false)
            }
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// The five-valued identity `((x->z)->y)->(((y->x)->y)->y) = 1`.
pub fn nt3() -> Equation {
    let (x, y, z) = (var("x"), var("y"), var("z"));
    let lhs = x
        .clone()
        .imp(z)
        .imp(y.clone())
        .imp(y.clone().imp(x).imp(y.clone()).imp(y));
    Equation::new(lhs, Term::One)
}

/// Linearity: `(x->y) \/ (y->x) = 1`.
pub fn linearity() -> Equation {
    let (x, y) = (var("x"), var("y"));
    Equation::new(x.clone().imp(y.clone()).join(y.imp(x)), Term::One)
}

/// The five identities FN1–FN5 that are equivalent to NT3 in any Nelson
/// algebra, in order. Negations written `¬` there are the weak negation.
pub fn five_valued_equivalents() -> Vec<(&'static str, Equation)> {
    let (x, y, z) = (var("x"), var("y"), var("z"));
    let yx_y = y.clone().imp(x.clone()).imp(y.clone());
    let wx_y = x.clone().weak_neg().imp(y.clone());
    vec![
        (
            "FN1",
            Equation::new(
                x.clone()
                    .join(y.clone().weak_neg())
                    .join(x.clone().imp(y.clone())),
                Term::One,
            ),
        ),
        (
            "FN2",
            Equation::new(
                y.clone(),
                x.clone().imp(z).imp(y.clone()).meet(yx_y.clone()),
            ),
        ),
        ("FN3", Equation::new(y.clone(), wx_y.clone().meet(yx_y.clone()))),
        (
            "FN4",
            Equation::new(
                yx_y.clone().imp(wx_y.clone().imp(y.clone())),
                Term::One,
            ),
        ),
        ("FN5", Equation::new(wx_y.imp(yx_y.imp(y)), Term::One)),
    ]
}

/// Byte offsets and 1-based line/column of a syntax node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

/// A term tree annotated with the source span of every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpannedTerm {
    pub span: Span,
    pub node: SpannedNode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpannedNode {
    Var(String),
    Zero,
    One,
    Neg(Box<SpannedTerm>),
    Meet(Box<SpannedTerm>, Box<SpannedTerm>),
    Join(Box<SpannedTerm>, Box<SpannedTerm>),
    Imp(Box<SpannedTerm>, Box<SpannedTerm>),
}

impl SpannedTerm {
    pub fn to_term(&self) -> Term {
        match &self.node {
            SpannedNode::Var(v) => Term::Var(v.clone()),
            SpannedNode::Zero => Term::Zero,
            SpannedNode::One => Term::One,
            SpannedNode::Neg(t) => t.to_term().neg(),
            SpannedNode::Meet(a, b) => a.to_term().meet(b.to_term()),
            SpannedNode::Join(a, b) => a.to_term().join(b.to_term()),
            SpannedNode::Imp(a, b) => a.to_term().imp(b.to_term()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedEquation {
    pub lhs: SpannedTerm,
    pub rhs: SpannedTerm,
}

impl ParsedEquation {
    pub fn equation(&self) -> Equation {
        Equation::new(self.lhs.to_term(), self.rhs.to_term())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Neg,
    Meet,
    Join,
    Imp,
    LParen,
    RParen,
    Eq,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::One => "`1`".into(),
            Tok::Neg => "`~`".into(),
            Tok::Meet => "`/\\`".into(),
            Tok::Join => "`\\/`".into(),
            Tok::Imp => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eq => "`=`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(input: &str) -> Result<Vec<(Tok, Span)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = input.char_indices().collect();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        let here = |end: usize| Span {
            start,
            end,
            line,
            column,
        };
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let (tok, width) = match (c, next) {
            ('~' | '∼', _) => (Tok::Neg, 1),
            ('/', Some('\\')) => (Tok::Meet, 2),
            ('\\', Some('/')) => (Tok::Join, 2),
            ('-', Some('>')) => (Tok::Imp, 2),
            ('∧', _) => (Tok::Meet, 1),
            ('∨', _) => (Tok::Join, 1),
            ('→', _) => (Tok::Imp, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('=', _) => (Tok::Eq, 1),
            ('0' | '1', n) if !n.is_some_and(|n| n.is_ascii_alphanumeric()) => {
                (if c == '0' { Tok::Zero } else { Tok::One }, 1)
            }
            (c, _) if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].1.is_ascii_alphanumeric() || matches!(chars[j].1, '_' | '\''))
                {
                    j += 1;
                }
                let name: String = chars[i..j].iter().map(|&(_, c)| c).collect();
                (Tok::Ident(name), j - i)
            }
            _ => {
                return Err(Error::Syntax {
                    line,
                    column,
                    found: format!("character `{c}`"),
                    expected: vec![
                        "identifier".into(),
                        "`0`".into(),
                        "`1`".into(),
                        "`~`".into(),
                        "`(`".into(),
                        "operator".into(),
                    ],
                })
            }
        };
        let end = chars.get(i + width).map_or(input.len(), |&(b, _)| b);
        out.push((tok, here(end)));
        i += width;
        column += width;
    }
    out.push((
        Tok::End,
        Span {
            start: input.len(),
            end: input.len(),
            line,
            column,
        },
    ));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

const ATOM_START: &[&str] = &["identifier", "`0`", "`1`", "`~`", "`(`"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> Error {
        let (tok, span) = &self.toks[self.pos];
        Error::Syntax {
            line: span.line,
            column: span.column,
            found: tok.describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn join_spans(a: Span, b: Span) -> Span {
        Span {
            start: a.start,
            end: b.end,
            line: a.line,
            column: a.column,
        }
    }

    fn imp(&mut self) -> Result<SpannedTerm> {
        let lhs = self.join()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.imp()?;
            let span = Self::join_spans(lhs.span, rhs.span);
            return Ok(SpannedTerm {
                span,
                node: SpannedNode::Imp(Box::new(lhs), Box::new(rhs)),
            });
        }
        Ok(lhs)
    }

    fn join(&mut self) -> Result<SpannedTerm> {
        let mut lhs = self.meet()?;
        while *self.peek() == Tok::Join {
            self.bump();
            let rhs = self.meet()?;
            lhs = SpannedTerm {
                span: Self::join_spans(lhs.span, rhs.span),
                node: SpannedNode::Join(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn meet(&mut self) -> Result<SpannedTerm> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Meet {
            self.bump();
            let rhs = self.unary()?;
            lhs = SpannedTerm {
                span: Self::join_spans(lhs.span, rhs.span),
                node: SpannedNode::Meet(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<SpannedTerm> {
        if *self.peek() == Tok::Neg {
            let (_, start) = self.bump();
            let inner = self.unary()?;
            return Ok(SpannedTerm {
                span: Self::join_spans(start, inner.span),
                node: SpannedNode::Neg(Box::new(inner)),
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<SpannedTerm> {
        let span = self.span();
        let node = match self.peek().clone() {
            Tok::Ident(name) => SpannedNode::Var(name),
            Tok::Zero => SpannedNode::Zero,
            Tok::One => SpannedNode::One,
            Tok::LParen => {
                self.bump();
                let inner = self.imp()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["`)`", "`->`", "`\\/`", "`/\\`"]));
                }
                let (_, close) = self.bump();
                return Ok(SpannedTerm {
                    span: Self::join_spans(span, close),
                    node: inner.node,
                });
            }
            _ => return Err(self.error(ATOM_START)),
        };
        self.bump();
        Ok(SpannedTerm { span, node })
    }

    fn expect_end(&self, allow_eq: bool) -> Result<()> {
        if *self.peek() == Tok::End {
            return Ok(());
        }
        let mut expected = vec!["`->`", "`\\/`", "`/\\`", "end of input"];
        if allow_eq {
            expected.insert(3, "`=`");
        }
        Err(self.error(&expected))
    }
}

pub fn parse_spanned_term(input: &str) -> Result<SpannedTerm> {
    let mut p = Parser {
        toks: tokenize(input)?,
        pos: 0,
    };
    let t = p.imp()?;
    p.expect_end(false)?;
    Ok(t)
}

pub fn parse_term(input: &str) -> Result<Term> {
    parse_spanned_term(input).map(|t| t.to_term())
}

pub fn parse_spanned_equation(input: &str) -> Result<ParsedEquation> {
    let mut p = Parser {
        toks: tokenize(input)?,
        pos: 0,
    };
    let lhs = p.imp()?;
    if *p.peek() != Tok::Eq {
        return Err(p.error(&["`=`", "`->`", "`\\/`", "`/\\`"]));
    }
    p.bump();
    let rhs = p.imp()?;
    p.expect_end(false)?;
    Ok(ParsedEquation { lhs, rhs })
}

pub fn parse_equation(input: &str) -> Result<Equation> {
    parse_spanned_equation(input).map(|e| e.equation())
}
