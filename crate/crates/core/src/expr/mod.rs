//! A small expression language in one variable `t`.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          (right-associative)
//! primary := number | 't' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | exp | log | sqrt | abs
//! ```
//!
//! Expressions are immutable trees. [`Expr::eval`] is total on its domain and
//! reports an [`Error::Eval`] for log/sqrt of negative arguments, division by
//! zero and non-finite intermediate results.

mod diff;
mod parser;

use std::fmt;

use crate::error::{Error, Result};

pub use parser::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedConst {
    Pi,
    E,
}

impl NamedConst {
    pub fn value(self) -> f64 {
        match self {
            NamedConst::Pi => std::f64::consts::PI,
            NamedConst::E => std::f64::consts::E,
        }
    }

    fn name(self) -> &'static str {
        match self {
            NamedConst::Pi => "pi",
            NamedConst::E => "e",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn apply(self, x: f64, t: f64) -> Result<f64> {
        match self {
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Exp => Ok(x.exp()),
            Func::Log if x > 0.0 => Ok(x.ln()),
            Func::Log => Err(Error::eval(t, format!("log of non-positive argument {x}"))),
            Func::Sqrt if x >= 0.0 => Ok(x.sqrt()),
            Func::Sqrt => Err(Error::eval(t, format!("sqrt of negative argument {x}"))),
            Func::Abs => Ok(x.abs()),
        }
    }
}

/// Parsed expression tree. Numeric literals are never negative; negation is
/// always an explicit [`Expr::Neg`] node so printing and re-parsing is lossless.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Const(NamedConst),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Literal node; negative values become `Neg(Num(|v|))`.
    pub fn num(v: f64) -> Expr {
        if v.is_sign_negative() && v != 0.0 {
            Expr::Neg(Box::new(Expr::Num(-v)))
        } else {
            Expr::Num(v.abs())
        }
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    /// True when the expression does not reference `t`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Const(_) => true,
            Expr::Var => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.is_constant(),
            Expr::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Literal value if this node is a (possibly negated) number.
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Expr::Num(v) => Some(*v),
            Expr::Neg(inner) => match **inner {
                Expr::Num(v) => Some(-v),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Var => t,
            Expr::Const(c) => c.value(),
            Expr::Neg(e) => -e.eval(t)?,
            Expr::Call(f, e) => f.apply(e.eval(t)?, t)?,
            Expr::Binary(op, a, b) => {
                let x = a.eval(t)?;
                let y = b.eval(t)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(Error::eval(t, "division by zero"));
                        }
                        x / y
                    }
                    BinOp::Pow => power(x, y, b.is_constant(), t)?,
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::eval(t, format!("non-finite value in `{self}`")))
        }
    }

    /// Exact symbolic derivative with respect to `t`, lightly simplified.
    pub fn differentiate(&self) -> Expr {
        diff::derivative(self)
    }

    /// Local constant folding and identity removal (`x*1`, `x+0`, `x^1`, ...).
    pub fn simplify(&self) -> Expr {
        diff::simplify(self)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, _, _) => op.precedence(),
            Expr::Neg(_) => 3,
            _ => 5,
        }
    }
}

// A constant exponent allows a negative base with an integral exponent; a
// t-dependent exponent means u^v = exp(v ln u) and needs u > 0.
fn power(base: f64, exponent: f64, constant_exponent: bool, t: f64) -> Result<f64> {
    if constant_exponent {
        if base < 0.0 && exponent.fract() != 0.0 {
            return Err(Error::eval(
                t,
                format!("negative base {base} with non-integer exponent {exponent}"),
            ));
        }
        if base == 0.0 && exponent < 0.0 {
            return Err(Error::eval(t, "zero raised to a negative power"));
        }
        Ok(base.powf(exponent))
    } else {
        if base <= 0.0 {
            return Err(Error::eval(
                t,
                format!("non-positive base {base} with variable exponent"),
            ));
        }
        Ok((exponent * base.ln()).exp())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var => f.write_str("t"),
            Expr::Const(c) => f.write_str(c.name()),
            Expr::Neg(e) => {
                f.write_str("-")?;
                write_child(f, e, e.precedence() < 3)
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
            Expr::Binary(op, a, b) => {
                let p = op.precedence();
                let (left_parens, right_parens) = match op {
                    BinOp::Pow => (a.precedence() <= p, b.precedence() < 3),
                    _ => (a.precedence() < p, b.precedence() <= p),
                };
                write_child(f, a, left_parens)?;
                write!(f, "{}", op.symbol())?;
                write_child(f, b, right_parens)
            }
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}
