//! Recursive-descent parser for operator, function and form expressions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' INT)?
//! atom  := INT | 'x' | 'y' | 'Dx' | 'Dy' | 'v' | 'w' | '(' expr ')'
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{BigRational, RatFunc, Var};
use crate::ore::DiffOp;
use crate::symbolform::BinaryForm;

const MAX_DEPTH: usize = 256;
const MAX_EXPONENT: u32 = 64;
/// Cap on exponents of bare variables and on every degree of an evaluated
/// value, so that printed output always reads back.
const MAX_DEGREE: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    fn error(self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Int(BigInt),
    Var(Var),
    D(Var),
    /// Symbol variable: `v` for `Var::X`, `w` for `Var::Y`.
    Sym(Var),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Atom(Atom, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer {
            chars: s.chars().peekable(),
            pos: Pos { line: 1, column: 1 },
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Pos)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
                self.bump();
            }
            let start = self.pos;
            let Some(&c) = self.chars.peek() else {
                out.push((Tok::End, start));
                return Ok(out);
            };
            if c.is_ascii_digit() {
                let mut s = String::new();
                while let Some(&d) = self.chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    self.bump();
                }
                out.push((Tok::Int(s.parse().expect("digits")), start));
            } else if c.is_ascii_alphabetic() {
                let mut s = String::new();
                while let Some(&d) = self.chars.peek() {
                    if !d.is_ascii_alphanumeric() {
                        break;
                    }
                    s.push(d);
                    self.bump();
                }
                out.push((Tok::Ident(s), start));
            } else if "+-*/^()".contains(c) {
                self.bump();
                out.push((Tok::Op(c), start));
            } else {
                return Err(start.error(format!("unexpected character '{c}'")));
            }
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, op: char) -> bool {
        if *self.peek() == Tok::Op(op) {
            self.next();
            true
        } else {
            false
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.pos().error("expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if *self.peek() == Tok::Op('/') {
                let (_, pos) = self.next();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else {
                break;
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let (tok, pos) = self.next();
        let Tok::Int(n) = tok else {
            return Err(pos.error("exponent must be a nonnegative integer literal"));
        };
        let cap = if matches!(base, Expr::Atom(Atom::Var(_) | Atom::D(_) | Atom::Sym(_), _)) {
            MAX_DEGREE
        } else {
            MAX_EXPONENT
        };
        let k = u32::try_from(&n)
            .ok()
            .filter(|&k| k <= cap)
            .ok_or_else(|| pos.error(format!("exponent larger than {cap}")))?;
        if *self.peek() == Tok::Op('^') {
            return Err(self.pos().error("chained exponents need parentheses"));
        }
        Ok(Expr::Pow(Box::new(base), k))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = self.next();
        match tok {
            Tok::Int(n) => Ok(Expr::Atom(Atom::Int(n), pos)),
            Tok::Ident(s) => {
                let atom = match s.as_str() {
                    "x" => Atom::Var(Var::X),
                    "y" => Atom::Var(Var::Y),
                    "v" => Atom::Sym(Var::X),
                    "w" => Atom::Sym(Var::Y),
                    _ if s.eq_ignore_ascii_case("dx") => Atom::D(Var::X),
                    _ if s.eq_ignore_ascii_case("dy") => Atom::D(Var::Y),
                    _ => return Err(pos.error(format!("unknown identifier '{s}'"))),
                };
                Ok(Expr::Atom(atom, pos))
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.pos().error("expected ')'"));
                }
                Ok(e)
            }
            Tok::Op(c) => Err(pos.error(format!("unexpected '{c}'"))),
            Tok::End => Err(pos.error("unexpected end of input")),
        }
    }
}

/// Syntax tree of `text`.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, at: 0, depth: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.pos().error("unexpected trailing input"));
    }
    Ok(e)
}

fn first_pos(e: &Expr) -> Pos {
    match e {
        Expr::Atom(_, p) => *p,
        Expr::Neg(a) | Expr::Pow(a, _) => first_pos(a),
        Expr::Add(a, _) | Expr::Sub(a, _) | Expr::Mul(a, _) | Expr::Div(a, _, _) => first_pos(a),
    }
}

fn int(n: &BigInt) -> RatFunc {
    RatFunc::constant(BigRational::from_integer(n.clone()))
}

fn ratfunc_degree(f: &RatFunc) -> u32 {
    f.num().total_degree().unwrap_or(0).max(f.den().total_degree().unwrap_or(0))
}

fn operator_degree(p: &DiffOp) -> u32 {
    p.terms()
        .map(|(k, c)| k.order().max(ratfunc_degree(c)))
        .max()
        .unwrap_or(0)
}

fn bounded(p: DiffOp, e: &Expr) -> Result<DiffOp, ParseError> {
    if operator_degree(&p) > MAX_DEGREE {
        return Err(first_pos(e).error(format!("value has degree above {MAX_DEGREE}")));
    }
    Ok(p)
}

/// Evaluate a syntax tree to an operator. Symbol variables are rejected.
pub fn eval_operator(e: &Expr) -> Result<DiffOp, ParseError> {
    let p = match e {
        Expr::Atom(a, pos) => match a {
            Atom::Int(n) => DiffOp::scalar(int(n)),
            Atom::Var(v) => DiffOp::scalar(RatFunc::var(*v)),
            Atom::D(v) => DiffOp::d(*v),
            Atom::Sym(_) => return Err(pos.error("symbol variables v, w are not allowed here")),
        },
        Expr::Neg(a) => eval_operator(a)?.neg(),
        Expr::Add(a, b) => eval_operator(a)?.add(&eval_operator(b)?),
        Expr::Sub(a, b) => eval_operator(a)?.sub(&eval_operator(b)?),
        Expr::Mul(a, b) => eval_operator(a)?.mul(&eval_operator(b)?),
        Expr::Pow(a, k) => {
            let base = eval_operator(a)?;
            if operator_degree(&base) * k > MAX_DEGREE {
                return Err(first_pos(e).error(format!("value has degree above {MAX_DEGREE}")));
            }
            base.pow(*k)
        }
        Expr::Div(a, b, pos) => {
            let num = eval_operator(a)?;
            let den = eval_operator(b)?
                .as_scalar()
                .ok_or_else(|| pos.error("operator denominator: only functions may divide"))?;
            let inv = den.checked_inv().map_err(|_| pos.error("division by zero"))?;
            num.scale_left(&inv)
        }
    };
    bounded(p, e)
}

/// Commutative polynomial in `(v, w)` keyed by `(deg_v, deg_w)`.
type FormPoly = BTreeMap<(u32, u32), RatFunc>;

fn form_add(mut a: FormPoly, b: FormPoly, sign: bool) -> FormPoly {
    for (k, c) in b {
        let c = if sign { c } else { -c };
        let s = a.remove(&k).map_or(c.clone(), |old| old + c);
        if !s.is_zero() {
            a.insert(k, s);
        }
    }
    a
}

fn form_mul(a: &FormPoly, b: &FormPoly) -> FormPoly {
    let mut out = FormPoly::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let k = (ka.0 + kb.0, ka.1 + kb.1);
            out = form_add(out, FormPoly::from([(k, ca * cb)]), true);
        }
    }
    out
}

fn scalar_form(c: RatFunc) -> FormPoly {
    if c.is_zero() {
        FormPoly::new()
    } else {
        FormPoly::from([((0, 0), c)])
    }
}

fn form_degree(f: &FormPoly) -> u32 {
    f.iter()
        .map(|((i, j), c)| (i + j).max(ratfunc_degree(c)))
        .max()
        .unwrap_or(0)
}

fn eval_form(e: &Expr) -> Result<FormPoly, ParseError> {
    let f = match e {
        Expr::Atom(a, pos) => match a {
            Atom::Int(n) => scalar_form(int(n)),
            Atom::Var(v) => scalar_form(RatFunc::var(*v)),
            Atom::Sym(Var::X) => FormPoly::from([((1, 0), RatFunc::one())]),
            Atom::Sym(Var::Y) => FormPoly::from([((0, 1), RatFunc::one())]),
            Atom::D(_) => return Err(pos.error("derivations are not allowed in a form")),
        },
        Expr::Neg(a) => form_add(FormPoly::new(), eval_form(a)?, false),
        Expr::Add(a, b) => form_add(eval_form(a)?, eval_form(b)?, true),
        Expr::Sub(a, b) => form_add(eval_form(a)?, eval_form(b)?, false),
        Expr::Mul(a, b) => form_mul(&eval_form(a)?, &eval_form(b)?),
        Expr::Pow(a, k) => {
            let base = eval_form(a)?;
            if form_degree(&base) * k > MAX_DEGREE {
                return Err(first_pos(e).error(format!("value has degree above {MAX_DEGREE}")));
            }
            (0..*k).fold(scalar_form(RatFunc::one()), |acc, _| form_mul(&acc, &base))
        }
        Expr::Div(a, b, pos) => {
            let num = eval_form(a)?;
            let den = eval_form(b)?;
            let den = match den.len() {
                0 => return Err(pos.error("division by zero")),
                1 if den.contains_key(&(0, 0)) => den[&(0, 0)].clone(),
                _ => return Err(pos.error("form denominator: only functions may divide")),
            };
            let inv = den.checked_inv().map_err(|_| pos.error("division by zero"))?;
            num.into_iter().map(|(k, c)| (k, c * &inv)).collect()
        }
    };
    if form_degree(&f) > MAX_DEGREE {
        return Err(first_pos(e).error(format!("value has degree above {MAX_DEGREE}")));
    }
    Ok(f)
}

pub fn parse_operator(text: &str) -> Result<DiffOp, ParseError> {
    eval_operator(&parse(text)?)
}

pub fn parse_ratfunc(text: &str) -> Result<RatFunc, ParseError> {
    let e = parse(text)?;
    eval_operator(&e)?
        .as_scalar()
        .ok_or_else(|| first_pos(&e).error("expected a function of x and y, found an operator"))
}

/// A homogeneous form in `v`, `w`. The zero form has degree 0.
pub fn parse_binary_form(text: &str) -> Result<BinaryForm, ParseError> {
    let e = parse(text)?;
    let f = eval_form(&e)?;
    let mut degrees = f.keys().map(|(i, j)| i + j);
    let Some(n) = degrees.next() else {
        return Ok(BinaryForm::zero());
    };
    if degrees.any(|d| d != n) {
        return Err(first_pos(&e).error("form is not homogeneous in v, w"));
    }
    let mut coeffs = vec![RatFunc::zero(); n as usize + 1];
    for ((i, _), c) in f {
        coeffs[i as usize] = c;
    }
    Ok(BinaryForm::new(n, coeffs))
}

/// A form of degree exactly 1.
pub fn parse_linear_form(text: &str) -> Result<BinaryForm, ParseError> {
    let f = parse_binary_form(text)?;
    if f.is_zero() || f.degree() != 1 {
        return Err(Pos { line: 1, column: 1 }.error("expected a linear form a*v + b*w"));
    }
    Ok(f)
}
