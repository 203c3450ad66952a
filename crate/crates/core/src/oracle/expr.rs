//! Cost expressions over `x[i][j]` (1-based player and coordinate) with
//! rational literals, `+`, `-`, `*`, unary minus and `abs(·)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CostExpr {
    Const(Rational),
    /// 1-based player and coordinate, as written.
    Var {
        player: usize,
        index: usize,
    },
    Neg(Box<CostExpr>),
    Add(Box<CostExpr>, Box<CostExpr>),
    Sub(Box<CostExpr>, Box<CostExpr>),
    Mul(Box<CostExpr>, Box<CostExpr>),
    Abs(Box<CostExpr>),
}

/// Maps `x[i][j]` to a joint coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyLayout {
    offsets: Vec<usize>,
    dims: Vec<usize>,
}

impl StrategyLayout {
    pub fn new(dims: &[usize]) -> Self {
        let offsets = dims
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        Self {
            offsets,
            dims: dims.to_vec(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Joint coordinate of 1-based `x[player][index]`.
    pub fn coordinate(&self, player: usize, index: usize) -> Result<usize> {
        let unknown = Error::UnknownVariable { player, index };
        if player == 0 || index == 0 || player > self.dims.len() || index > self.dims[player - 1] {
            return Err(unknown);
        }
        Ok(self.offsets[player - 1] + index - 1)
    }
}

impl CostExpr {
    /// Exact value at the joint point `x`.
    pub fn eval(&self, layout: &StrategyLayout, x: &[Rational]) -> Result<Rational> {
        Ok(match self {
            CostExpr::Const(c) => c.clone(),
            CostExpr::Var { player, index } => x[layout.coordinate(*player, *index)?].clone(),
            CostExpr::Neg(a) => -a.eval(layout, x)?,
            CostExpr::Add(a, b) => a.eval(layout, x)? + b.eval(layout, x)?,
            CostExpr::Sub(a, b) => a.eval(layout, x)? - b.eval(layout, x)?,
            CostExpr::Mul(a, b) => a.eval(layout, x)? * b.eval(layout, x)?,
            CostExpr::Abs(a) => a.eval(layout, x)?.abs(),
        })
    }

    /// Fails with `UnknownVariable` on the first variable outside `layout`.
    pub fn check_variables(&self, layout: &StrategyLayout) -> Result<()> {
        match self {
            CostExpr::Const(_) => Ok(()),
            CostExpr::Var { player, index } => layout.coordinate(*player, *index).map(|_| ()),
            CostExpr::Neg(a) | CostExpr::Abs(a) => a.check_variables(layout),
            CostExpr::Add(a, b) | CostExpr::Sub(a, b) | CostExpr::Mul(a, b) => {
                a.check_variables(layout)?;
                b.check_variables(layout)
            }
        }
    }

    /// `row · x` written as a sum of `coefficient * x[i][j]` terms.
    pub fn from_linear(row: &[Rational], layout: &StrategyLayout) -> CostExpr {
        let mut terms = Vec::new();
        for (p, &d) in layout.dims.iter().enumerate() {
            for j in 0..d {
                let c = &row[layout.offsets[p] + j];
                if c.is_zero() {
                    continue;
                }
                let var = CostExpr::Var {
                    player: p + 1,
                    index: j + 1,
                };
                let term = CostExpr::Mul(Box::new(CostExpr::Const(c.abs())), Box::new(var));
                terms.push(if c.is_negative() {
                    CostExpr::Neg(Box::new(term))
                } else {
                    term
                });
            }
        }
        terms
            .into_iter()
            .reduce(|a, b| CostExpr::Add(Box::new(a), Box::new(b)))
            .unwrap_or_else(|| CostExpr::Const(Rational::zero()))
    }
}

/// Fully parenthesized, so printing and reparsing gives the same tree.
impl fmt::Display for CostExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostExpr::Const(c) if c.is_negative() => write!(f, "(-{})", format_rational(&-c)),
            CostExpr::Const(c) => write!(f, "{}", format_rational(c)),
            CostExpr::Var { player, index } => write!(f, "x[{player}][{index}]"),
            CostExpr::Neg(a) => write!(f, "(-{a})"),
            CostExpr::Add(a, b) => write!(f, "({a} + {b})"),
            CostExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            CostExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            CostExpr::Abs(a) => write!(f, "abs({a})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected `{}`", c as char))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected digits");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("nonempty digit string"))
    }

    fn small_integer(&mut self) -> Result<usize> {
        let start = self.pos;
        let v = self.integer()?;
        usize::try_from(v).or_else(|_| {
            self.pos = start;
            self.error("index out of range")
        })
    }

    fn expr(&mut self) -> Result<CostExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = CostExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = CostExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<CostExpr> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = CostExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<CostExpr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(CostExpr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<CostExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let at = self.pos;
                    let den = self.integer()?;
                    if den.is_zero() {
                        self.pos = at;
                        return self.error("zero denominator");
                    }
                    Ok(CostExpr::Const(Rational::new(num, den)))
                } else {
                    Ok(CostExpr::Const(Rational::from_integer(num)))
                }
            }
            Some(b'x') => {
                self.pos += 1;
                self.expect(b'[')?;
                let player = self.small_integer()?;
                self.expect(b']')?;
                self.expect(b'[')?;
                let index = self.small_integer()?;
                self.expect(b']')?;
                Ok(CostExpr::Var { player, index })
            }
            Some(b'a') if self.src[self.pos..].starts_with(b"abs") => {
                self.pos += 3;
                self.expect(b'(')?;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(CostExpr::Abs(Box::new(e)))
            }
            Some(_) => self.error("unexpected character"),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses a cost expression. Precedence: unary minus, then `*`, then binary
/// `+`/`-`, all left-associative.
pub fn parse_cost(src: &str) -> Result<CostExpr> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.error("trailing input");
    }
    Ok(e)
}

/// Parses and checks every variable against `layout`.
pub fn parse_cost_for(src: &str, layout: &StrategyLayout) -> Result<CostExpr> {
    let e = parse_cost(src)?;
    e.check_variables(layout)?;
    Ok(e)
}
