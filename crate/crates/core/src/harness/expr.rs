//! Expression grammar for polynomials and one-forms.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := integer | integer '/' integer | variable | covector
//!        | 'd' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Variables are `x y z u t` or `x1..x9`, `z1..z9`; covectors prefix a
//! variable with `d`. Whitespace is insignificant.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{QSeries, Rational};
use crate::error::{Error, Result};
use crate::exterior::{exterior_derivative_of, QForm};

const LETTERS: [&str; 5] = ["x", "y", "z", "u", "t"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Var(String),
    Covector(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    D(Box<Expr>),
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn visit_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) | Expr::Covector(v) => out.push(v),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::D(a) => a.visit_names(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.visit_names(out);
                b.visit_names(out);
            }
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Prints with the parentheses needed to reparse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) if q.is_negative() => write!(f, "({q})"),
            Expr::Num(q) => write!(f, "{q}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Covector(v) => write!(f, "d{v}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_child(f, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_child(f, 1)?;
                write!(f, " {} ", if matches!(self, Expr::Add(..)) { '+' } else { '-' })?;
                b.write_child(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write_child(f, 2)?;
                write!(f, "*")?;
                b.write_child(f, 3)
            }
            Expr::Pow(a, e) => {
                a.write_child(f, 5)?;
                write!(f, "^{e}")
            }
            Expr::D(a) => write!(f, "d({a})"),
        }
    }
}

/// Ordered variable names; position is the variable index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe(pub Vec<String>);

impl Universe {
    /// `x y z u t` truncated to `n` names (`n ≤ 5`), else `x1..xn`.
    pub fn standard(n: usize) -> Self {
        if n <= LETTERS.len() {
            Self(LETTERS[..n].iter().map(|s| s.to_string()).collect())
        } else {
            Self((1..=n).map(|i| format!("x{i}")).collect())
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn index(&self, name: &str) -> Result<usize> {
        self.0.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.into()))
    }

    /// Smallest universe containing the names used: letters in the order
    /// `x y z u t` up to the last one used, or `x1..xk` / `z1..zk`.
    fn infer(names: &[&str]) -> Result<Self> {
        if names.is_empty() {
            return Ok(Self::standard(1));
        }
        let indexed = |n: &str| -> Option<(char, usize)> {
            let mut it = n.chars();
            let head = it.next()?;
            let k: usize = it.as_str().parse().ok()?;
            (matches!(head, 'x' | 'z') && (1..=9).contains(&k)).then_some((head, k))
        };
        if let Some((head, _)) = indexed(names[0]) {
            let mut top = 0;
            for n in names {
                match indexed(n) {
                    Some((h, k)) if h == head => top = top.max(k),
                    _ => return Err(Error::UnknownVariable(format!("{n} (mixed with {head}1..{head}9 names)"))),
                }
            }
            return Ok(Self((1..=top).map(|k| format!("{head}{k}")).collect()));
        }
        let mut top = 0;
        for n in names {
            match LETTERS.iter().position(|l| l == n) {
                Some(i) => top = top.max(i + 1),
                None => return Err(Error::UnknownVariable((*n).into())),
            }
        }
        Ok(Self::standard(top))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormExpression {
    pub source: String,
    pub ast: Expr,
    pub universe: Universe,
}

impl FormExpression {
    /// Evaluates to an exact 1-form truncated at `order`.
    pub fn to_form(&self, order: usize) -> Result<QForm> {
        match eval(&self.ast, &self.universe, order + 1)? {
            Value::Form(c) => Ok(QForm::one_form(c)?.truncated(order)),
            Value::Function(f) if f.is_zero() => Ok(QForm::zero(1, self.universe.len(), order)),
            Value::Function(_) => Err(Error::Precondition("expression is a function, not a 1-form".into())),
        }
    }

    /// Evaluates to a polynomial truncated at `order`.
    pub fn to_series(&self, order: usize) -> Result<QSeries> {
        match eval(&self.ast, &self.universe, order)? {
            Value::Function(f) => Ok(f),
            Value::Form(_) => Err(Error::Precondition("expression is a 1-form, not a function".into())),
        }
    }
}

enum Value {
    Function(QSeries),
    Form(Vec<QSeries>),
}

fn eval(e: &Expr, u: &Universe, order: usize) -> Result<Value> {
    let n = u.len();
    let form = |c: Vec<QSeries>| Value::Form(c);
    Ok(match e {
        Expr::Num(q) => Value::Function(QSeries::constant(n, order, q.clone())),
        Expr::Var(v) => Value::Function(QSeries::var(n, u.index(v)?, order)),
        Expr::Covector(v) => {
            let i = u.index(v)?;
            form((0..n).map(|k| if k == i { QSeries::one(n, order) } else { QSeries::zero(n, order) }).collect())
        }
        Expr::Neg(a) => match eval(a, u, order)? {
            Value::Function(f) => Value::Function(-f),
            Value::Form(c) => form(c.into_iter().map(|s| -s).collect()),
        },
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let sign = if matches!(e, Expr::Sub(..)) { -Rational::one() } else { Rational::one() };
            match (eval(a, u, order)?, eval(b, u, order)?) {
                (Value::Function(f), Value::Function(g)) => Value::Function(&f + &g.scale(&sign)),
                (Value::Form(c), Value::Form(d)) => form(c.iter().zip(&d).map(|(x, y)| x + &y.scale(&sign)).collect()),
                (Value::Form(c), Value::Function(f)) if f.is_zero() => form(c),
                (Value::Function(f), Value::Form(c)) if f.is_zero() => form(c.iter().map(|s| s.scale(&sign)).collect()),
                _ => return Err(Error::Precondition("cannot add a function and a 1-form".into())),
            }
        }
        Expr::Mul(a, b) => match (eval(a, u, order)?, eval(b, u, order)?) {
            (Value::Function(f), Value::Function(g)) => Value::Function(&f * &g),
            (Value::Function(f), Value::Form(c)) | (Value::Form(c), Value::Function(f)) => {
                form(c.iter().map(|s| &f * s).collect())
            }
            (Value::Form(_), Value::Form(_)) => {
                return Err(Error::Precondition("products of covectors are not supported".into()))
            }
        },
        Expr::Pow(a, k) => match eval(a, u, order)? {
            Value::Function(f) => {
                let mut acc = QSeries::one(n, order);
                for _ in 0..*k {
                    acc = &acc * &f;
                }
                Value::Function(acc)
            }
            Value::Form(_) => return Err(Error::Precondition("powers of covectors are not supported".into())),
        },
        Expr::D(a) => match eval(a, u, order + 1)? {
            Value::Function(f) => form(exterior_derivative_of(&f).truncated(order).components().to_vec()),
            Value::Form(_) => return Err(Error::Precondition("d(...) takes a function".into())),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Lexer {
    fn new(src: &str) -> Result<Self> {
        let mut toks = Vec::new();
        let chars: Vec<char> = src.chars().collect();
        let (mut line, mut col, mut i) = (1, 1, 0);
        while i < chars.len() {
            let c = chars[i];
            let (l0, c0) = (line, col);
            if c == '\n' {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            if c.is_whitespace() {
                i += 1;
                col += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                toks.push((Tok::Int(s.parse().expect("digits")), l0, c0));
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                col += i - start;
                toks.push((Tok::Ident(chars[start..i].iter().collect()), l0, c0));
            } else if "+-*^/()".contains(c) {
                toks.push((Tok::Sym(c), l0, c0));
                i += 1;
                col += 1;
            } else if c == '−' {
                // Typographic minus.
                toks.push((Tok::Sym('-'), l0, c0));
                i += 1;
                col += 1;
            } else {
                return Err(Error::Parse { line, column: col, message: format!("unexpected character `{c}`") });
            }
        }
        toks.push((Tok::End, line, col));
        Ok(Self { toks, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (_, line, column) = self.toks[self.pos];
        Error::Parse { line, column, message: message.into() }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.next();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Sym('*') {
            self.next();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Sym('-') {
            self.next();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.next();
        match self.next() {
            Tok::Int(k) => match k.to_u32() {
                Some(k) if k <= 64 => Ok(Expr::Pow(Box::new(base), k)),
                _ => Err(self.error("exponent too large")),
            },
            _ => Err(self.error("expected an integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next() {
            Tok::Int(p) => {
                if *self.peek() == Tok::Sym('/') {
                    self.next();
                    match self.next() {
                        Tok::Int(q) if !q.is_zero() => Ok(Expr::Num(Rational::new(p, q))),
                        Tok::Int(_) => Err(self.error("zero denominator")),
                        _ => Err(self.error("expected a denominator")),
                    }
                } else {
                    Ok(Expr::Num(Rational::from_integer(p)))
                }
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) if name == "d" => {
                self.expect('(')?;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(Expr::D(Box::new(e)))
            }
            Tok::Ident(name) => match name.strip_prefix('d') {
                Some(v) if !v.is_empty() => Ok(Expr::Covector(v.to_string())),
                _ => Ok(Expr::Var(name)),
            },
            Tok::End => Err(self.error("unexpected end of input")),
            t => {
                self.pos -= 1;
                Err(self.error(format!("unexpected {t:?}")))
            }
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut lx = Lexer::new(text)?;
    let e = lx.expr()?;
    if *lx.peek() != Tok::End {
        return Err(lx.error("trailing input"));
    }
    Ok(e)
}

/// Parses with the smallest universe containing the names used.
pub fn parse_form(text: &str) -> Result<FormExpression> {
    let ast = parse_expr(text)?;
    let mut names = Vec::new();
    ast.visit_names(&mut names);
    let universe = Universe::infer(&names)?;
    Ok(FormExpression { source: text.to_string(), ast, universe })
}

/// Parses in a fixed universe; unknown names are rejected.
pub fn parse_form_in(text: &str, universe: &Universe) -> Result<FormExpression> {
    let ast = parse_expr(text)?;
    let mut names = Vec::new();
    ast.visit_names(&mut names);
    for n in names {
        universe.index(n)?;
    }
    Ok(FormExpression { source: text.to_string(), ast, universe: universe.clone() })
}
