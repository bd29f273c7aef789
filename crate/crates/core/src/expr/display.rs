use std::fmt;

use super::chart::CoordinateChart;
use super::node::{Expression, Node};
use super::number::Number;

const ADD: u8 = 1;
const MUL: u8 = 2;
const NEG: u8 = 3;
const POW: u8 = 4;
const ATOM: u8 = 5;

/// Renders an expression in the same infix grammar the parser accepts.
pub struct Printer<'a> {
    expr: &'a Expression,
    names: Option<&'a [String]>,
}

impl<'a> Printer<'a> {
    /// Coordinates print as `x0, x1, ...`.
    pub fn generic(expr: &'a Expression) -> Self {
        Printer { expr, names: None }
    }

    pub fn with_chart(expr: &'a Expression, chart: &'a CoordinateChart) -> Self {
        Printer { expr, names: Some(chart.names()) }
    }

    fn precedence(e: &Expression) -> u8 {
        match e.node() {
            Node::Const(n) => match n {
                Number::Rational(r) if !r.is_integer() => MUL,
                _ if n.is_negative() => NEG,
                _ => ATOM,
            },
            Node::Coord(_) | Node::Time | Node::Func(..) => ATOM,
            Node::Neg(_) => NEG,
            Node::Add(..) | Node::Sub(..) => ADD,
            Node::Mul(..) | Node::Div(..) => MUL,
            Node::PowInt(..) | Node::Pow(..) => POW,
        }
    }

    fn child(&self, f: &mut fmt::Formatter<'_>, e: &Expression, required: u8) -> fmt::Result {
        if Self::precedence(e) < required {
            f.write_str("(")?;
            self.write(f, e)?;
            f.write_str(")")
        } else {
            self.write(f, e)
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, e: &Expression) -> fmt::Result {
        match e.node() {
            Node::Const(n) => write!(f, "{n}"),
            Node::Coord(i) => match self.names.and_then(|names| names.get(*i)) {
                Some(name) => f.write_str(name),
                None => write!(f, "x{i}"),
            },
            Node::Time => f.write_str("t"),
            Node::Neg(a) => {
                f.write_str("-")?;
                self.child(f, a, NEG)
            }
            Node::Add(a, b) if matches!(b.node(), Node::Neg(_)) => {
                let Node::Neg(inner) = b.node() else { unreachable!() };
                self.child(f, a, ADD)?;
                f.write_str(" - ")?;
                self.child(f, inner, MUL)
            }
            Node::Add(a, b) if matches!(b.node(), Node::Mul(_, c) if matches!(c.node(), Node::Neg(_))) => {
                let Node::Mul(c, neg) = b.node() else { unreachable!() };
                let Node::Neg(inner) = neg.node() else { unreachable!() };
                self.child(f, a, ADD)?;
                f.write_str(" - ")?;
                self.child(f, c, MUL)?;
                f.write_str("*")?;
                self.child(f, inner, NEG)
            }
            Node::Add(a, b) => {
                self.child(f, a, ADD)?;
                f.write_str(" + ")?;
                self.child(f, b, ADD)
            }
            Node::Sub(a, b) => {
                self.child(f, a, ADD)?;
                f.write_str(" - ")?;
                self.child(f, b, MUL)
            }
            Node::Mul(a, b) => {
                self.child(f, a, MUL)?;
                f.write_str("*")?;
                self.child(f, b, NEG)
            }
            Node::Div(a, b) => {
                self.child(f, a, MUL)?;
                f.write_str("/")?;
                self.child(f, b, NEG)
            }
            Node::PowInt(a, k) => {
                self.child(f, a, ATOM)?;
                if *k < 0 {
                    write!(f, "^({k})")
                } else {
                    write!(f, "^{k}")
                }
            }
            Node::Pow(a, b) => {
                self.child(f, a, ATOM)?;
                f.write_str("^")?;
                self.child(f, b, POW)
            }
            Node::Func(func, a) => {
                write!(f, "{}(", func.name())?;
                self.write(f, a)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.expr)
    }
}

impl Expression {
    pub fn display<'a>(&'a self, chart: &'a CoordinateChart) -> Printer<'a> {
        Printer::with_chart(self, chart)
    }

    pub fn to_text(&self, chart: &CoordinateChart) -> String {
        self.display(chart).to_string()
    }
}
