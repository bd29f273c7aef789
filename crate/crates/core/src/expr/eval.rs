use thiserror::Error;

use super::node::{Expression, Function, Node};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{function} is undefined at {argument}")]
    Domain { function: &'static str, argument: f64 },
    #[error("expression references time but no time was supplied")]
    MissingTime,
    #[error("coordinate index {index} out of range for a {dim}-dimensional point")]
    CoordinateOutOfRange { index: usize, dim: usize },
    #[error("non-finite result")]
    NonFinite,
}

pub(crate) fn apply_function(f: Function, x: f64) -> Result<f64, EvalError> {
    let domain = |function| EvalError::Domain { function, argument: x };
    Ok(match f {
        Function::Sin => x.sin(),
        Function::Cos => x.cos(),
        Function::Tan => x.tan(),
        Function::Sinh => x.sinh(),
        Function::Cosh => x.cosh(),
        Function::Exp => x.exp(),
        Function::Ln if x > 0.0 => x.ln(),
        Function::Ln => return Err(domain("ln")),
        Function::Sqrt if x >= 0.0 => x.sqrt(),
        Function::Sqrt => return Err(domain("sqrt")),
    })
}

impl Expression {
    /// Evaluates at a coordinate point, with `time` required iff the
    /// expression references `t`.
    pub fn eval(&self, point: &[f64], time: Option<f64>) -> Result<f64, EvalError> {
        let v = self.eval_inner(point, time)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    /// Evaluation at a point and time; `t` is ignored by time-free expressions.
    pub fn eval_at(&self, point: &[f64], t: f64) -> Result<f64, EvalError> {
        self.eval(point, Some(t))
    }

    fn eval_inner(&self, p: &[f64], t: Option<f64>) -> Result<f64, EvalError> {
        Ok(match self.node() {
            Node::Const(n) => n.to_f64(),
            Node::Coord(i) => *p.get(*i).ok_or(EvalError::CoordinateOutOfRange { index: *i, dim: p.len() })?,
            Node::Time => t.ok_or(EvalError::MissingTime)?,
            Node::Neg(a) => -a.eval_inner(p, t)?,
            Node::Add(a, b) => a.eval_inner(p, t)? + b.eval_inner(p, t)?,
            Node::Sub(a, b) => a.eval_inner(p, t)? - b.eval_inner(p, t)?,
            Node::Mul(a, b) => a.eval_inner(p, t)? * b.eval_inner(p, t)?,
            Node::Div(a, b) => {
                let den = b.eval_inner(p, t)?;
                if den == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                a.eval_inner(p, t)? / den
            }
            Node::PowInt(a, k) => {
                let base = a.eval_inner(p, t)?;
                if base == 0.0 && *k < 0 {
                    return Err(EvalError::DivisionByZero);
                }
                base.powi(*k)
            }
            Node::Pow(a, b) => {
                let base = a.eval_inner(p, t)?;
                let exp = b.eval_inner(p, t)?;
                if base < 0.0 && exp.fract() != 0.0 {
                    return Err(EvalError::Domain { function: "pow", argument: base });
                }
                if base == 0.0 && exp < 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                base.powf(exp)
            }
            Node::Func(f, a) => apply_function(*f, a.eval_inner(p, t)?)?,
        })
    }
}
