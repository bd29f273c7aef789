use super::node::{Expression, Function, Node, Variable};

impl Expression {
    /// Exact partial derivative with respect to a coordinate or time.
    pub fn diff(&self, v: Variable) -> Expression {
        if !self.depends_on(v) {
            return Expression::zero();
        }
        match self.node() {
            Node::Const(_) => Expression::zero(),
            Node::Coord(i) => {
                if v == Variable::Coord(*i) {
                    Expression::one()
                } else {
                    Expression::zero()
                }
            }
            Node::Time => {
                if v == Variable::Time {
                    Expression::one()
                } else {
                    Expression::zero()
                }
            }
            Node::Neg(a) => a.diff(v).neg(),
            Node::Add(a, b) => a.diff(v).add(&b.diff(v)),
            Node::Sub(a, b) => a.diff(v).sub(&b.diff(v)),
            Node::Mul(a, b) => a.diff(v).mul(b).add(&a.mul(&b.diff(v))),
            Node::Div(a, b) => {
                let da = a.diff(v);
                let db = b.diff(v);
                if db.is_zero() {
                    da.div(b)
                } else {
                    da.mul(b).sub(&a.mul(&db)).div(&b.powi(2))
                }
            }
            Node::PowInt(a, k) => Expression::int(*k as i64).mul(&a.powi(k - 1)).mul(&a.diff(v)),
            Node::Pow(a, b) => {
                let db = b.diff(v);
                if db.is_zero() {
                    // d(a^c) = c a^(c-1) a'
                    b.mul(&a.pow(&b.sub(&Expression::one()))).mul(&a.diff(v))
                } else {
                    // d(a^b) = a^b (b' ln a + b a'/a)
                    self.mul(&db.mul(&a.ln()).add(&b.mul(&a.diff(v)).div(a)))
                }
            }
            Node::Func(f, a) => {
                let inner = a.diff(v);
                let outer = match f {
                    Function::Sin => a.cos(),
                    Function::Cos => a.sin().neg(),
                    Function::Tan => a.cos().powi(-2),
                    Function::Sinh => a.cosh(),
                    Function::Cosh => a.sinh(),
                    Function::Exp => self.clone(),
                    Function::Ln => Expression::one().div(a),
                    Function::Sqrt => Expression::ratio(1, 2).div(self),
                };
                outer.mul(&inner)
            }
        }
    }

    pub fn diff_coord(&self, index: usize) -> Expression {
        self.diff(Variable::Coord(index))
    }

    pub fn diff_time(&self) -> Expression {
        self.diff(Variable::Time)
    }

    /// Gradient over the first `dim` coordinates.
    pub fn gradient(&self, dim: usize) -> Vec<Expression> {
        (0..dim).map(|i| self.diff_coord(i)).collect()
    }
}
