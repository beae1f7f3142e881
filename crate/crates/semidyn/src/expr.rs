//! Tiny arithmetic expressions for user-defined maps.
//!
//! The grammar is deliberately small: addition, subtraction,
//! multiplication, `mod1(..)`, `abs(..)`, decimal constants, and the
//! coordinates `x` and `y`. Everything a piecewise-linear circle or torus
//! map needs, nothing that would make evaluation nondeterministic.

use crate::space::wrap;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// Coordinate reference: 0 is `x`, 1 is `y`.
    Coord(u8),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Mod1(Box<Expr>),
    Abs(Box<Expr>),
}

impl Expr {
    pub fn eval(&self, coords: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Coord(i) => coords[*i as usize],
            Expr::Add(a, b) => a.eval(coords) + b.eval(coords),
            Expr::Sub(a, b) => a.eval(coords) - b.eval(coords),
            Expr::Mul(a, b) => a.eval(coords) * b.eval(coords),
            Expr::Mod1(a) => wrap(a.eval(coords)),
            Expr::Abs(a) => a.eval(coords).abs(),
        }
    }

    /// Highest coordinate index referenced, if any.
    pub fn max_coord(&self) -> Option<u8> {
        match self {
            Expr::Const(_) => None,
            Expr::Coord(i) => Some(*i),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                match (a.max_coord(), b.max_coord()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
            Expr::Mod1(a) | Expr::Abs(a) => a.max_coord(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Coord(0) => write!(f, "x"),
            Expr::Coord(_) => write!(f, "y"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Mod1(a) => write!(f, "mod1({a})"),
            Expr::Abs(a) => write!(f, "abs({a})"),
        }
    }
}
