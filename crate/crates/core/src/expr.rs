//! A small closed expression grammar for one-variable functions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' unary)?
//! atom  := number | var | const | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Functions: `sin cos tan sec sinh cosh exp log sqrt` (`ln` is an alias of
//! `log`). Constants: `pi`, `e`. Evaluation goes through [`Jet`] arithmetic,
//! so every parsed expression provides exact derivatives up to order three.

use std::fmt;

use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::jet::{DomainViolation, Jet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sec,
    Sinh,
    Cosh,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sec" => Func::Sec,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "exp" => Func::Exp,
            "log" | "ln" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn apply(self, x: Jet) -> std::result::Result<Jet, DomainViolation> {
        match self {
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Tan => x.tan(),
            Func::Sec => x.sec(),
            Func::Sinh => Ok(x.sinh()),
            Func::Cosh => Ok(x.cosh()),
            Func::Exp => Ok(x.exp()),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    fn has_var(&self) -> bool {
        match self {
            Node::Const(_) => false,
            Node::Var => true,
            Node::Neg(a) | Node::Call(_, a) => a.has_var(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
                a.has_var() || b.has_var()
            }
        }
    }

    fn eval(&self, t: Jet) -> std::result::Result<Jet, DomainViolation> {
        Ok(match self {
            Node::Const(c) => Jet::constant(*c),
            Node::Var => t,
            Node::Neg(a) => -a.eval(t)?,
            Node::Add(a, b) => a.eval(t)? + b.eval(t)?,
            Node::Sub(a, b) => a.eval(t)? - b.eval(t)?,
            Node::Mul(a, b) => a.eval(t)? * b.eval(t)?,
            Node::Div(a, b) => a.eval(t)?.checked_div(b.eval(t)?)?,
            Node::Pow(a, b) => {
                let base = a.eval(t)?;
                if b.has_var() {
                    base.pow(b.eval(t)?)?
                } else {
                    base.powf(b.eval(t)?.value)?
                }
            }
            Node::Call(f, a) => f.apply(a.eval(t)?)?,
        })
    }
}

/// A parsed expression in a single named variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    source: String,
    var: String,
    root: Node,
}

impl Expr {
    /// Parses `text` as a function of the variable named `var`.
    pub fn parse(text: &str, var: &str) -> Result<Expr> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens: &tokens, pos: 0, var };
        let root = p.expr()?;
        if let Some(tok) = p.peek() {
            return Err(parse_error("unexpected trailing input", tok));
        }
        Ok(Expr { source: text.trim().to_string(), var: var.to_string(), root })
    }

    pub fn constant(c: f64, var: &str) -> Expr {
        Expr { source: format!("{c:?}"), var: var.to_string(), root: Node::Const(c) }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        Ok(self.jet(t)?.value)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl ScalarFunction for Expr {
    fn jet(&self, t: f64) -> Result<Jet> {
        let j = self.root.eval(Jet::variable(t)).map_err(|e| Error::Domain { op: e.op, t })?;
        if !j.is_finite() {
            return Err(Error::Domain { op: "non-finite result", t });
        }
        Ok(j)
    }

    fn describe(&self) -> String {
        self.source.clone()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    text: String,
    pos: usize,
}

fn parse_error(message: &str, tok: &Token) -> Error {
    Error::Parse { message: message.to_string(), token: tok.text.clone(), position: tok.pos }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            // exponent part, only if followed by digits
            if i < chars.len() && matches!(chars[i].1, 'e' | 'E') {
                let mut j = i + 1;
                if j < chars.len() && matches!(chars[j].1, '+' | '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].1.is_ascii_digit() {
                    while j < chars.len() && chars[j].1.is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            let value = s.parse::<f64>().map_err(|_| Error::Parse {
                message: "malformed number".into(),
                token: s.clone(),
                position: pos,
            })?;
            out.push(Token { tok: Tok::Num(value), text: s, pos });
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push(Token { tok: Tok::Ident(s.clone()), text: s, pos });
        } else if "+-*/^()".contains(c) {
            i += 1;
            out.push(Token { tok: Tok::Op(c), text: c.to_string(), pos });
        } else {
            return Err(Error::Parse { message: "unexpected character".into(), token: c.to_string(), position: pos });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    var: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_op(&self) -> Option<char> {
        match self.peek() {
            Some(Token { tok: Tok::Op(c), .. }) => Some(*c),
            _ => None,
        }
    }

    fn end_error(&self) -> Error {
        let position = self.tokens.last().map(|t| t.pos + t.text.len()).unwrap_or(0);
        Error::Parse { message: "unexpected end of input".into(), token: String::new(), position }
    }

    fn expect_op(&mut self, op: char) -> Result<()> {
        match self.peek() {
            Some(Token { tok: Tok::Op(c), .. }) if *c == op => {
                self.pos += 1;
                Ok(())
            }
            Some(tok) => Err(parse_error(&format!("expected `{op}`"), tok)),
            None => Err(self.end_error()),
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' {
                Node::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Node::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if op == '*' {
                Node::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Node::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Node::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let tok = self.peek().ok_or_else(|| self.end_error())?;
        self.pos += 1;
        match &tok.tok {
            Tok::Num(v) => Ok(Node::Const(*v)),
            Tok::Op('(') => {
                let inner = self.expr()?;
                self.expect_op(')')?;
                Ok(inner)
            }
            Tok::Op(_) => Err(parse_error("expected a number, variable or `(`", tok)),
            Tok::Ident(name) => {
                if name == self.var {
                    return Ok(Node::Var);
                }
                if let Some(func) = Func::from_name(name) {
                    self.expect_op('(')?;
                    let arg = self.expr()?;
                    self.expect_op(')')?;
                    return Ok(Node::Call(func, Box::new(arg)));
                }
                match name.as_str() {
                    "pi" => Ok(Node::Const(std::f64::consts::PI)),
                    "e" => Ok(Node::Const(std::f64::consts::E)),
                    _ => Err(parse_error(&format!("unknown identifier (the variable is `{}`)", self.var), tok)),
                }
            }
        }
    }
}
