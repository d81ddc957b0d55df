//! Operator expressions typed on the command line.
//!
//! ```text
//! sum   := prod (('+' | '-') prod)*
//! prod  := unary (('*' | '/') unary)*
//! unary := '-' unary | juxt
//! juxt  := post post*              scalar multiplication by juxtaposition
//! post  := atom '\''*              dagger
//! atom  := number | 'i' | 'adag' '(' k ')' | 'a' '(' k ')' | 'N' ['(' k ')']
//!        | 'sqrt' '(' sum ')' | '(' sum ')'
//! ```
//!
//! Mode indices are 1-based. Division and `sqrt` accept scalar operands only.

use std::fmt;

use fermirep::{Complex64, Error as CoreError, FockOperator, LadderSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    I,
    Adag(usize),
    A(usize),
    /// Total number operator.
    N,
    /// Number operator of one mode.
    Ni(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Juxt(Box<Expr>, Box<Expr>),
    Dagger(Box<Expr>),
    Sqrt(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("parse error at column {column}: {message}\n  {source_text}\n  {marker}^")]
    Parse {
        column: usize,
        message: String,
        source_text: String,
        marker: String,
    },
    #[error("evaluation error: {0}")]
    Eval(String),
}

impl ExprError {
    fn at(src: &str, pos: usize, message: impl Into<String>) -> Self {
        let column = src[..pos.min(src.len())].chars().count() + 1;
        ExprError::Parse {
            column,
            message: message.into(),
            source_text: src.to_string(),
            marker: " ".repeat(column - 1),
        }
    }
}

impl From<CoreError> for ExprError {
    fn from(e: CoreError) -> Self {
        ExprError::Eval(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Int(usize),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let ch = src[pos..].chars().next().expect("in bounds");
        if ch.is_whitespace() {
            pos += ch.len_utf8();
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'.') {
                pos += 1;
            }
            if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
                let mut p = pos + 1;
                if p < bytes.len() && (bytes[p] == b'+' || bytes[p] == b'-') {
                    p += 1;
                }
                if p < bytes.len() && bytes[p].is_ascii_digit() {
                    while p < bytes.len() && bytes[p].is_ascii_digit() {
                        p += 1;
                    }
                    pos = p;
                }
            }
            let text = &src[start..pos];
            let tok =
                if text.bytes().all(|b| b.is_ascii_digit()) {
                    text.parse::<usize>().map(Tok::Int).map_err(|_| {
                        ExprError::at(src, start, format!("integer `{text}` too large"))
                    })?
                } else {
                    Tok::Num(text.parse::<f64>().map_err(|_| {
                        ExprError::at(src, start, format!("malformed number `{text}`"))
                    })?)
                };
            out.push((tok, start));
        } else if ch.is_ascii_alphabetic() {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_alphanumeric() {
                pos += 1;
            }
            out.push((Tok::Ident(src[start..pos].to_string()), start));
        } else if "+-*/()'".contains(ch) {
            out.push((Tok::Sym(ch), pos));
            pos += 1;
        } else {
            return Err(ExprError::at(
                src,
                pos,
                format!("unexpected character `{ch}`"),
            ));
        }
    }
    Ok(out)
}

struct Parser<'s> {
    src: &'s str,
    toks: Vec<(Tok, usize)>,
    at: usize,
    modes: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.src.len(), |&(_, p)| p)
    }

    fn err(&self, message: impl Into<String>) -> ExprError {
        ExprError::at(self.src, self.pos(), message)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.prod()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.prod()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.prod()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn prod(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.juxt()
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_) | Tok::Int(_) | Tok::Ident(_) | Tok::Sym('('))
        )
    }

    fn juxt(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.post()?;
        while self.starts_atom() {
            lhs = Expr::Juxt(Box::new(lhs), Box::new(self.post()?));
        }
        Ok(lhs)
    }

    fn post(&mut self) -> Result<Expr, ExprError> {
        let mut e = self.atom()?;
        while self.eat('\'') {
            e = Expr::Dagger(Box::new(e));
        }
        Ok(e)
    }

    fn mode_index(&mut self) -> Result<usize, ExprError> {
        self.expect('(')?;
        let pos = self.pos();
        let k = match self.peek() {
            Some(&Tok::Int(k)) => k,
            _ => return Err(self.err("expected a mode index")),
        };
        if k == 0 || k > self.modes {
            return Err(ExprError::at(
                self.src,
                pos,
                format!("mode index {k} outside 1..={}", self.modes),
            ));
        }
        self.at += 1;
        self.expect(')')?;
        Ok(k)
    }

    /// `N` followed by `( integer )` is a mode number operator.
    fn mode_index_follows(&self) -> bool {
        matches!(
            (
                self.toks.get(self.at).map(|t| &t.0),
                self.toks.get(self.at + 1).map(|t| &t.0),
                self.toks.get(self.at + 2).map(|t| &t.0),
            ),
            (Some(Tok::Sym('(')), Some(Tok::Int(_)), Some(Tok::Sym(')')))
        )
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| self.err("unexpected end of expression"))?;
        match tok {
            Tok::Num(v) => {
                self.at += 1;
                Ok(Expr::Num(v))
            }
            Tok::Int(k) => {
                self.at += 1;
                Ok(Expr::Num(k as f64))
            }
            Tok::Sym('(') => {
                self.at += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let start = self.at;
                self.at += 1;
                match name.as_str() {
                    "i" => Ok(Expr::I),
                    "adag" => Ok(Expr::Adag(self.mode_index()?)),
                    "a" => Ok(Expr::A(self.mode_index()?)),
                    "N" if self.mode_index_follows() => Ok(Expr::Ni(self.mode_index()?)),
                    "N" => Ok(Expr::N),
                    "sqrt" => {
                        self.expect('(')?;
                        let e = self.sum()?;
                        self.expect(')')?;
                        Ok(Expr::Sqrt(Box::new(e)))
                    }
                    _ => {
                        self.at = start;
                        Err(self.err(format!("unknown name `{name}`")))
                    }
                }
            }
            Tok::Sym(c) => Err(self.err(format!("unexpected `{c}`"))),
        }
    }
}

/// A parsed expression over `modes` fermionic modes.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorExpression {
    pub ast: Expr,
    pub modes: usize,
}

impl OperatorExpression {
    pub fn parse(src: &str, modes: usize) -> Result<Self, ExprError> {
        let toks = lex(src)?;
        let mut p = Parser {
            src,
            toks,
            at: 0,
            modes,
        };
        let ast = p.sum()?;
        if p.at < p.toks.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(Self { ast, modes })
    }

    pub fn eval(&self) -> Result<FockOperator, ExprError> {
        let ladders = LadderSet::new(self.modes)?;
        Ok(match eval(&self.ast, &ladders)? {
            Value::Scalar(s) => ladders.identity().scale(s),
            Value::Op(op) => op,
        })
    }
}

enum Value {
    Scalar(Complex64),
    Op(FockOperator),
}

fn eval(e: &Expr, lad: &LadderSet) -> Result<Value, ExprError> {
    use Value::{Op, Scalar};
    let as_op = |v: Value| match v {
        Scalar(s) => lad.identity().scale(s),
        Op(o) => o,
    };
    Ok(match e {
        Expr::Num(v) => Scalar(Complex64::new(*v, 0.0)),
        Expr::I => Scalar(Complex64::i()),
        Expr::Adag(k) => Op(lad.try_adag(*k)?.clone()),
        Expr::A(k) => Op(lad.try_a(*k)?.clone()),
        Expr::N => Op(lad.total_number()),
        Expr::Ni(k) => {
            lad.try_a(*k)?;
            Op(lad.number(*k))
        }
        Expr::Neg(x) => match eval(x, lad)? {
            Scalar(s) => Scalar(-s),
            Op(o) => Op(-&o),
        },
        Expr::Add(x, y) | Expr::Sub(x, y) => {
            let sign = if matches!(e, Expr::Add(..)) {
                1.0
            } else {
                -1.0
            };
            match (eval(x, lad)?, eval(y, lad)?) {
                (Scalar(a), Scalar(b)) => Scalar(a + b * sign),
                (a, b) => Op(&as_op(a) + &(&as_op(b) * sign)),
            }
        }
        Expr::Mul(x, y) | Expr::Juxt(x, y) => match (eval(x, lad)?, eval(y, lad)?) {
            (Scalar(a), Scalar(b)) => Scalar(a * b),
            (Scalar(s), Op(o)) | (Op(o), Scalar(s)) => Op(o.scale(s)),
            (Op(a), Op(b)) => Op(&a * &b),
        },
        Expr::Div(x, y) => {
            let d = match eval(y, lad)? {
                Scalar(d) if d.norm() > 0.0 => d,
                Scalar(_) => return Err(ExprError::Eval("division by zero".into())),
                Op(_) => return Err(ExprError::Eval("cannot divide by an operator".into())),
            };
            match eval(x, lad)? {
                Scalar(a) => Scalar(a / d),
                Op(o) => Op(o.scale(d.inv())),
            }
        }
        Expr::Dagger(x) => match eval(x, lad)? {
            Scalar(s) => Scalar(s.conj()),
            Op(o) => Op(o.adjoint()),
        },
        Expr::Sqrt(x) => match eval(x, lad)? {
            Scalar(s) => Scalar(s.sqrt()),
            Op(_) => return Err(ExprError::Eval("sqrt of an operator".into())),
        },
    })
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Juxt(..) => 4,
        Expr::Dagger(..) => 5,
        _ => 6,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if prec(e) < min {
        write!(f, "(")?;
        write_expr(f, e)?;
        write!(f, ")")
    } else {
        write_expr(f, e)
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match e {
        Expr::Num(v) => write!(f, "{v}"),
        Expr::I => write!(f, "i"),
        Expr::Adag(k) => write!(f, "adag({k})"),
        Expr::A(k) => write!(f, "a({k})"),
        Expr::N => write!(f, "N"),
        Expr::Ni(k) => write!(f, "N({k})"),
        Expr::Neg(x) => {
            write!(f, "-")?;
            write_at(f, x, 3)
        }
        Expr::Add(x, y) | Expr::Sub(x, y) => {
            write_at(f, x, 1)?;
            write!(
                f,
                " {} ",
                if matches!(e, Expr::Add(..)) { '+' } else { '-' }
            )?;
            write_at(f, y, 2)
        }
        Expr::Mul(x, y) | Expr::Div(x, y) => {
            write_at(f, x, 2)?;
            write!(
                f,
                " {} ",
                if matches!(e, Expr::Mul(..)) { '*' } else { '/' }
            )?;
            write_at(f, y, 3)
        }
        Expr::Juxt(x, y) => {
            write_at(f, x, 4)?;
            write!(f, " ")?;
            write_at(f, y, 5)
        }
        Expr::Dagger(x) => {
            write_at(f, x, 5)?;
            write!(f, "'")
        }
        Expr::Sqrt(x) => {
            write!(f, "sqrt(")?;
            write_expr(f, x)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self)
    }
}

impl fmt::Display for OperatorExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, &self.ast)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fermirep::fock::{annihilation, creation, number_operator};
    use fermirep::liealg::gell_mann;
    use fermirep::schwinger::nssfr_un;
    use proptest::prelude::*;

    fn parse(src: &str, n: usize) -> OperatorExpression {
        OperatorExpression::parse(src, n).unwrap()
    }

    #[test]
    fn precedence() {
        let e = parse("1 + 2 * 3 a(1)", 1).ast;
        let want = Expr::Add(
            Box::new(Expr::Num(1.0)),
            Box::new(Expr::Mul(
                Box::new(Expr::Num(2.0)),
                Box::new(Expr::Juxt(Box::new(Expr::Num(3.0)), Box::new(Expr::A(1)))),
            )),
        );
        assert_eq!(e, want);
        assert_eq!(parse("a(1)'", 1).ast, Expr::Dagger(Box::new(Expr::A(1))));
        assert_eq!(parse("N", 2).ast, Expr::N);
        assert_eq!(parse("N(2)", 2).ast, Expr::Ni(2));
        assert_eq!(
            parse("N (1 - 1)", 2).ast,
            Expr::Juxt(
                Box::new(Expr::N),
                Box::new(Expr::Sub(
                    Box::new(Expr::Num(1.0)),
                    Box::new(Expr::Num(1.0))
                ))
            )
        );
    }

    #[test]
    fn hopping_sum_on_two_modes() {
        let op = parse("adag(1)*a(2) + adag(2)*a(1)", 2).eval().unwrap();
        let want = &(&creation(2, 1).unwrap() * &annihilation(2, 2).unwrap())
            + &(&creation(2, 2).unwrap() * &annihilation(2, 1).unwrap());
        assert_eq!(op, want);
        assert_eq!(op.nnz(), 2);
    }

    #[test]
    fn dressed_hopping_matches_built_generator() {
        let op = parse("(adag(1)*a(3) + adag(3)*a(1)) * (1 - 2*N(2))", 3)
            .eval()
            .unwrap();
        let built = nssfr_un(&gell_mann(), 3).unwrap();
        assert_eq!(op.max_abs_diff(&built.ops[3]).unwrap(), 0.0);
    }

    #[test]
    fn scalars_dagger_and_sqrt() {
        let op = parse("-i*adag(1)*a(2) + i adag(2)*a(1)", 2).eval().unwrap();
        assert!(op.is_hermitian(0.0));
        let dag = parse("(i adag(1))'", 1).eval().unwrap();
        assert_eq!(dag, annihilation(1, 1).unwrap().scale(-Complex64::i()));
        let half = parse("sqrt(4)/8 * N(1)", 1).eval().unwrap();
        assert_eq!(
            half,
            number_operator(1, 1)
                .unwrap()
                .scale(Complex64::new(0.25, 0.0))
        );
        let id = parse("2", 2).eval().unwrap();
        assert_eq!(id.trace(), Complex64::new(8.0, 0.0));
    }

    #[test]
    fn errors_carry_positions() {
        match OperatorExpression::parse("a(5)", 3) {
            Err(ExprError::Parse { column, .. }) => assert_eq!(column, 3),
            other => panic!("{other:?}"),
        }
        match OperatorExpression::parse("adag(1) + $", 3) {
            Err(ExprError::Parse { column, .. }) => assert_eq!(column, 11),
            other => panic!("{other:?}"),
        }
        let msg = OperatorExpression::parse("a(1) +", 3)
            .unwrap_err()
            .to_string();
        assert!(msg.contains("column 7"), "{msg}");
        assert!(OperatorExpression::parse("b(1)", 3).is_err());
        assert!(OperatorExpression::parse("(a(1)", 3).is_err());
        assert!(OperatorExpression::parse("a(0)", 3).is_err());
        assert!(parse("a(1) / a(1)", 1).eval().is_err());
        assert!(parse("sqrt(N)", 1).eval().is_err());
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u32..1000, 0u32..4)
                .prop_map(|(v, s)| Expr::Num(v as f64 / [1.0, 2.0, 4.0, 10.0][s as usize])),
            Just(Expr::I),
            (1usize..=3).prop_map(Expr::Adag),
            (1usize..=3).prop_map(Expr::A),
            Just(Expr::N),
            (1usize..=3).prop_map(Expr::Ni),
        ];
        leaf.prop_recursive(5, 48, 2, |inner| {
            let b = |e| Box::new(e);
            prop_oneof![
                inner.clone().prop_map(move |x| Expr::Neg(b(x))),
                (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Add(b(x), b(y))),
                (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Sub(b(x), b(y))),
                (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Mul(b(x), b(y))),
                (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Div(b(x), b(y))),
                (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Juxt(b(x), b(y))),
                inner.clone().prop_map(move |x| Expr::Dagger(b(x))),
                inner.prop_map(move |x| Expr::Sqrt(b(x))),
            ]
        })
    }

    proptest! {
        #[test]
        fn pretty_print_round_trips(ast in arb_expr()) {
            let expr = OperatorExpression { ast, modes: 3 };
            let text = expr.to_string();
            let back = OperatorExpression::parse(&text, 3).unwrap();
            prop_assert_eq!(back, expr, "{}", text);
        }
    }
}
