//! Tokenizer and recursive-descent parser for the expression language.
//!
//! Precedence, tightest first: `^`, unary `-`, `*` `/`, `+` `-`. Binary
//! operators associate to the left. Exponents are signed integers or a
//! parenthesized rational such as `(-1/2)`.

use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::CliError;

pub const FUNCTIONS: &[(&str, &[usize])] = &[
    ("inv", &[1]),
    ("root", &[2]),
    ("towerroot", &[1]),
    ("val", &[1]),
    ("lead", &[1]),
    ("comm", &[2]),
    ("inH1M", &[1]),
    ("kummer", &[1, 2]),
    ("central", &[1]),
    ("rand", &[0]),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Int(BigInt),
    /// `w` (order `None`, meaning the ring's `m`) or `w<k>`.
    Omega(Option<u64>),
    /// Coordinate index: `x_i` is `2(i-1)`, `y_i` is `2(i-1)+1`.
    Var(usize),
    Name(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, BigRational),
    Call(String, Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Range<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Let(String, Expr),
    Expr(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    Let,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, Range<usize>)>, CliError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(src[start..i].parse().unwrap()), start..i));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &src[start..i];
            let tok = if word == "let" { Tok::Let } else { Tok::Ident(word.to_string()) };
            out.push((tok, start..i));
        } else if "+-*/^(),=".contains(c) {
            i += 1;
            out.push((Tok::Sym(c), start..i));
        } else {
            return Err(CliError::Syntax { pos: start, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(Tok, Range<usize>)],
    pos: usize,
    end: usize,
    rank: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, s)| s.start)
    }

    fn last_end(&self) -> usize {
        self.pos.checked_sub(1).map_or(0, |i| self.toks[i].1.end)
    }

    fn bump(&mut self) -> Option<(Tok, Range<usize>)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), CliError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(CliError::Syntax { pos: self.offset(), msg: format!("expected '{c}'") })
        }
    }

    fn sum(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym('+')) => BinOp::Add,
                Some(Tok::Sym('-')) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.product()?;
            let span = lhs.span.start..rhs.span.end;
            lhs = Expr { kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), span };
        }
    }

    fn product(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym('*')) => BinOp::Mul,
                Some(Tok::Sym('/')) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            let span = lhs.span.start..rhs.span.end;
            lhs = Expr { kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), span };
        }
    }

    fn unary(&mut self) -> Result<Expr, CliError> {
        let start = self.offset();
        if self.eat('-') {
            let inner = self.unary()?;
            let span = start..inner.span.end;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), span });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, CliError> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        let span = base.span.start..self.last_end();
        Ok(Expr { kind: ExprKind::Pow(Box::new(base), e), span })
    }

    fn integer(&mut self) -> Result<BigInt, CliError> {
        let neg = self.eat('-');
        match self.bump() {
            Some((Tok::Int(n), _)) => Ok(if neg { -n } else { n }),
            _ => {
                self.pos -= 1;
                Err(CliError::Syntax { pos: self.offset(), msg: "expected an integer exponent".into() })
            }
        }
    }

    fn exponent(&mut self) -> Result<BigRational, CliError> {
        if self.eat('(') {
            let num = self.integer()?;
            let den = if self.eat('/') {
                let pos = self.offset();
                let d = self.integer()?;
                if d.sign() != num_bigint::Sign::Plus {
                    return Err(CliError::Syntax { pos, msg: "exponent denominator must be positive".into() });
                }
                d
            } else {
                BigInt::from(1)
            };
            self.expect(')')?;
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(self.integer()?))
        }
    }

    fn primary(&mut self) -> Result<Expr, CliError> {
        let pos = self.offset();
        match self.bump() {
            Some((Tok::Int(n), span)) => Ok(Expr { kind: ExprKind::Int(n), span }),
            Some((Tok::Sym('('), _)) => {
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(Expr { kind: inner.kind, span: pos..self.last_end() })
            }
            Some((Tok::Ident(name), span)) => {
                if self.peek() == Some(&Tok::Sym('(')) {
                    return self.call(name, span);
                }
                let kind = self.identifier(&name, span.start)?;
                Ok(Expr { kind, span })
            }
            Some((_, span)) => Err(CliError::Syntax { pos: span.start, msg: "expected an expression".into() }),
            None => Err(CliError::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }

    fn identifier(&self, name: &str, pos: usize) -> Result<ExprKind, CliError> {
        if name == "w" {
            return Ok(ExprKind::Omega(None));
        }
        let (head, digits) = name.split_at(1);
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) && !digits.starts_with('0') {
            let k: usize = digits.parse().map_err(|_| CliError::UnknownIdentifier(name.to_string()))?;
            match head {
                "w" => return Ok(ExprKind::Omega(Some(k as u64))),
                "x" | "y" if k <= self.rank => {
                    return Ok(ExprKind::Var(2 * (k - 1) + usize::from(head == "y")));
                }
                "x" | "y" => return Err(CliError::UnknownIdentifier(name.to_string())),
                _ => {}
            }
        }
        if FUNCTIONS.iter().any(|(f, _)| *f == name) {
            return Err(CliError::Syntax { pos, msg: format!("function '{name}' needs arguments") });
        }
        Ok(ExprKind::Name(name.to_string()))
    }

    fn call(&mut self, name: String, head: Range<usize>) -> Result<Expr, CliError> {
        let Some((_, arities)) = FUNCTIONS.iter().find(|(f, _)| *f == name) else {
            return Err(CliError::UnknownIdentifier(name));
        };
        self.expect('(')?;
        let mut args = Vec::new();
        if !self.eat(')') {
            loop {
                args.push(self.sum()?);
                if self.eat(')') {
                    break;
                }
                self.expect(',')?;
            }
        }
        if !arities.contains(&args.len()) {
            return Err(CliError::Arity { name, expected: arities.to_vec(), got: args.len() });
        }
        let span = head.start..self.last_end();
        Ok(Expr { kind: ExprKind::Call(name, args), span })
    }
}

/// Parses one expression over a ring with `rank` variable pairs.
pub fn parse(src: &str, rank: usize) -> Result<Expr, CliError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks: &toks, pos: 0, end: src.len(), rank };
    let e = p.sum()?;
    if p.pos < toks.len() {
        return Err(CliError::Syntax { pos: p.offset(), msg: "trailing input".into() });
    }
    Ok(e)
}

/// Parses a statement; `None` for blank and comment-only lines.
pub fn parse_statement(src: &str, rank: usize) -> Result<Option<Statement>, CliError> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Ok(None);
    }
    let mut p = Parser { toks: &toks, pos: 0, end: src.len(), rank };
    let binding = if p.peek() == Some(&Tok::Let) {
        p.pos += 1;
        let name = match p.bump() {
            Some((Tok::Ident(n), span)) => {
                if !matches!(p.identifier(&n, span.start)?, ExprKind::Name(_)) {
                    return Err(CliError::Syntax { pos: span.start, msg: format!("'{n}' is reserved") });
                }
                n
            }
            _ => {
                p.pos -= 1;
                return Err(CliError::Syntax { pos: p.offset(), msg: "expected a name after 'let'".into() });
            }
        };
        p.expect('=')?;
        Some(name)
    } else {
        None
    };
    let e = p.sum()?;
    if p.pos < toks.len() {
        return Err(CliError::Syntax { pos: p.offset(), msg: "trailing input".into() });
    }
    Ok(Some(match binding {
        Some(name) => Statement::Let(name, e),
        None => Statement::Expr(e),
    }))
}
