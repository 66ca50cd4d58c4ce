//! A small arithmetic language for σ: numbers, `x`, `+ - * / ^`, unary minus,
//! `abs exp log min max` and parentheses. `^` is right-associative and binds
//! tighter than unary minus, so `-x^2` is `-(x^2)`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

// Float math for no_std builds; shadowed by std's inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Abs,
    Exp,
    Log,
    Min,
    Max,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Abs => "abs",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Min => "min",
            Func::Max => "max",
        }
    }
    fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max => 2,
            _ => 1,
        }
    }
    fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "abs" => Func::Abs,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "min" => Func::Min,
            "max" => Func::Max,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    Num(f64),
    X,
    Neg(Box<ExprNode>),
    Bin(BinOp, Box<ExprNode>, Box<ExprNode>),
    Call(Func, Vec<ExprNode>),
}

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

impl BinOp {
    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => PREC_ADD,
            BinOp::Mul | BinOp::Div => PREC_MUL,
            BinOp::Pow => PREC_POW,
        }
    }
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

impl ExprNode {
    fn prec(&self) -> u8 {
        match self {
            ExprNode::Num(_) | ExprNode::X | ExprNode::Call(..) => PREC_ATOM,
            ExprNode::Neg(_) => PREC_NEG,
            ExprNode::Bin(op, ..) => op.prec(),
        }
    }

    /// Evaluates at `x`. Overflow to ±∞ is allowed; undefined operations
    /// (division by zero, log of a non-positive number, NaN) are errors.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            ExprNode::Num(v) => *v,
            ExprNode::X => x,
            ExprNode::Neg(e) => -e.eval(x)?,
            ExprNode::Bin(op, l, r) => {
                let (a, b) = (l.eval(x)?, r.eval(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div if b == 0.0 => return Err(Error::Eval(format!("division by zero at x = {x}"))),
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            ExprNode::Call(f, args) => {
                let a = args[0].eval(x)?;
                match f {
                    Func::Abs => a.abs(),
                    Func::Exp => a.exp(),
                    Func::Log if a <= 0.0 => return Err(Error::Eval(format!("log({a}) at x = {x}"))),
                    Func::Log => a.ln(),
                    Func::Min => a.min(args[1].eval(x)?),
                    Func::Max => a.max(args[1].eval(x)?),
                }
            }
        };
        if v.is_nan() {
            Err(Error::Eval(format!("undefined value at x = {x}")))
        } else {
            Ok(v)
        }
    }
}

impl fmt::Display for ExprNode {
    /// Canonical form with the fewest parentheses that parse back to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(f: &mut fmt::Formatter<'_>, e: &ExprNode, paren: bool) -> fmt::Result {
            if paren {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            ExprNode::Num(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => write!(f, "({v})"),
            ExprNode::Num(v) => write!(f, "{v}"),
            ExprNode::X => f.write_str("x"),
            ExprNode::Neg(e) => {
                f.write_str("-")?;
                wrap(f, e, e.prec() < PREC_NEG)
            }
            ExprNode::Bin(op, l, r) => {
                let p = op.prec();
                let right_assoc = *op == BinOp::Pow;
                wrap(f, l, l.prec() < p || (right_assoc && l.prec() <= p))?;
                write!(f, "{}", op.symbol())?;
                wrap(f, r, r.prec() < p || (!right_assoc && r.prec() <= p))
            }
            ExprNode::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() || c == '.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lit = &text[start..i];
            Tok::Num(lit.parse().map_err(|_| Error::Parse { offset: start, expected: vec!["number"] })?)
        } else if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Ident(text[start..i].into())
        } else {
            i += 1;
            match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                _ => return Err(Error::Parse { offset: start, expected: vec!["operator", "operand"] }),
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }
    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }
    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }
    fn fail<T>(&self, expected: Vec<&'static str>) -> Result<T> {
        Err(Error::Parse { offset: self.offset(), expected })
    }
    fn expect(&mut self, t: Tok, name: &'static str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.fail(vec![name])
        }
    }

    fn expr(&mut self, min_prec: u8) -> Result<ExprNode> {
        let mut lhs = self.prefix()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                Tok::Op('^') => BinOp::Pow,
                _ => break,
            };
            let p = op.prec();
            if p < min_prec {
                break;
            }
            self.bump();
            let next_min = if op == BinOp::Pow { p } else { p + 1 };
            let rhs = self.expr(next_min)?;
            lhs = ExprNode::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<ExprNode> {
        let offset = self.offset();
        match self.bump() {
            Tok::Num(v) => Ok(ExprNode::Num(v)),
            Tok::Op('-') => Ok(ExprNode::Neg(Box::new(self.expr(PREC_NEG)?))),
            Tok::LParen => {
                let e = self.expr(0)?;
                self.expect(Tok::RParen, ")")?;
                Ok(e)
            }
            Tok::Ident(name) if name == "x" => Ok(ExprNode::X),
            Tok::Ident(name) => {
                let Some(func) = Func::lookup(&name) else {
                    return Err(Error::Parse { offset, expected: vec!["x", "abs", "exp", "log", "min", "max"] });
                };
                self.expect(Tok::LParen, "(")?;
                let mut args = vec![self.expr(0)?];
                while args.len() < func.arity() {
                    self.expect(Tok::Comma, ",")?;
                    args.push(self.expr(0)?);
                }
                self.expect(Tok::RParen, ")")?;
                Ok(ExprNode::Call(func, args))
            }
            _ => Err(Error::Parse { offset, expected: vec!["number", "x", "function", "(", "-"] }),
        }
    }
}

/// Parses a σ expression.
pub fn parse_sigma(text: &str) -> Result<ExprNode> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr(0)?;
    if *p.peek() != Tok::End {
        return p.fail(vec!["operator", "end of input"]);
    }
    Ok(e)
}
