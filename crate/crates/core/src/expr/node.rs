use std::fmt;
use std::ops;
use std::sync::Arc;

use super::number::Number;

/// Elementary functions understood by the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Function {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Exp,
    Ln,
    Sqrt,
}

impl Function {
    pub const ALL: [Function; 8] = [
        Function::Sin,
        Function::Cos,
        Function::Tan,
        Function::Sinh,
        Function::Cosh,
        Function::Exp,
        Function::Ln,
        Function::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::Sin => "sin",
            Function::Cos => "cos",
            Function::Tan => "tan",
            Function::Sinh => "sinh",
            Function::Cosh => "cosh",
            Function::Exp => "exp",
            Function::Ln => "ln",
            Function::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Function::ALL.into_iter().find(|f| f.name() == name).or(match name {
            "log" => Some(Function::Ln),
            _ => None,
        })
    }
}

/// The variable an expression is differentiated with respect to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variable {
    /// Index into the coordinate chart.
    Coord(usize),
    Time,
}

#[derive(Debug, PartialEq)]
pub enum Node {
    Const(Number),
    Coord(usize),
    Time,
    Neg(Expression),
    Add(Expression, Expression),
    Sub(Expression, Expression),
    Mul(Expression, Expression),
    Div(Expression, Expression),
    PowInt(Expression, i32),
    Pow(Expression, Expression),
    Func(Function, Expression),
}

/// Immutable, cheaply clonable scalar expression over chart coordinates and time.
///
/// The constructors fold constants and drop additive and multiplicative
/// identities; nothing else is rewritten.
#[derive(Clone, PartialEq)]
pub struct Expression(Arc<Node>);

impl Expression {
    fn wrap(node: Node) -> Self {
        Expression(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(n: Number) -> Self {
        Self::wrap(Node::Const(n))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Number::int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::constant(Number::ratio(num, den))
    }

    /// A real constant; snapped to an exact integer when it is one.
    pub fn real(x: f64) -> Self {
        if x.fract() == 0.0 && x.abs() < 1e15 {
            Self::int(x as i64)
        } else {
            Self::constant(Number::Real(x))
        }
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn coord(index: usize) -> Self {
        Self::wrap(Node::Coord(index))
    }

    pub fn time() -> Self {
        Self::wrap(Node::Time)
    }

    pub fn var(v: Variable) -> Self {
        match v {
            Variable::Coord(i) => Self::coord(i),
            Variable::Time => Self::time(),
        }
    }

    pub fn as_number(&self) -> Option<Number> {
        match self.node() {
            Node::Const(n) => Some(*n),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_number().is_some_and(Number::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_number().is_some_and(Number::is_one)
    }

    pub fn neg(&self) -> Self {
        match self.node() {
            Node::Const(n) => Self::constant(n.neg()),
            Node::Neg(inner) => inner.clone(),
            _ => Self::wrap(Node::Neg(self.clone())),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self.as_number(), other.as_number()) {
            (Some(a), Some(b)) => Self::constant(a.add(b)),
            (Some(a), _) if a.is_zero() => other.clone(),
            (_, Some(b)) if b.is_zero() => self.clone(),
            _ => Self::wrap(Node::Add(self.clone(), other.clone())),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        match (self.as_number(), other.as_number()) {
            (Some(a), Some(b)) => Self::constant(a.sub(b)),
            (Some(a), _) if a.is_zero() => other.neg(),
            (_, Some(b)) if b.is_zero() => self.clone(),
            _ => Self::wrap(Node::Sub(self.clone(), other.clone())),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self.as_number(), other.as_number()) {
            (Some(a), Some(b)) => Self::constant(a.mul(b)),
            (Some(a), _) if a.is_zero() => Self::zero(),
            (_, Some(b)) if b.is_zero() => Self::zero(),
            (Some(a), _) if a.is_one() => other.clone(),
            (_, Some(b)) if b.is_one() => self.clone(),
            (Some(a), _) if a.neg().is_one() => other.neg(),
            (_, Some(b)) if b.neg().is_one() => self.neg(),
            (Some(a), None) => match other.node() {
                Node::Mul(l, r) if l.as_number().is_some() => Self::constant(a).mul(l).mul(r),
                _ => Self::wrap(Node::Mul(self.clone(), other.clone())),
            },
            (None, Some(_)) => other.mul(self),
            _ => Self::wrap(Node::Mul(self.clone(), other.clone())),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        match (self.as_number(), other.as_number()) {
            (Some(a), Some(b)) => match a.div(b) {
                Some(q) => Self::constant(q),
                None => Self::wrap(Node::Div(self.clone(), other.clone())),
            },
            (Some(a), _) if a.is_zero() && !other.is_zero() => Self::zero(),
            (_, Some(b)) if b.is_one() => self.clone(),
            _ => Self::wrap(Node::Div(self.clone(), other.clone())),
        }
    }

    pub fn powi(&self, exp: i32) -> Self {
        if exp == 0 {
            return Self::one();
        }
        if exp == 1 {
            return self.clone();
        }
        if let Some(n) = self.as_number() {
            if let Some(v) = n.powi(exp) {
                return Self::constant(v);
            }
        }
        Self::wrap(Node::PowInt(self.clone(), exp))
    }

    /// Real power; integer exponents are routed to [`Expression::powi`].
    pub fn pow(&self, exp: &Self) -> Self {
        if let Some(k) = exp.as_number().and_then(Number::as_i32) {
            return self.powi(k);
        }
        if let (Some(a), Some(b)) = (self.as_number(), exp.as_number()) {
            let v = a.to_f64().powf(b.to_f64());
            if v.is_finite() {
                return Self::real(v);
            }
        }
        Self::wrap(Node::Pow(self.clone(), exp.clone()))
    }

    pub fn apply(&self, f: Function) -> Self {
        if let Some(n) = self.as_number() {
            if let Ok(v) = super::eval::apply_function(f, n.to_f64()) {
                if v.is_finite() {
                    return Self::real(v);
                }
            }
        }
        Self::wrap(Node::Func(f, self.clone()))
    }

    pub fn sin(&self) -> Self {
        self.apply(Function::Sin)
    }
    pub fn cos(&self) -> Self {
        self.apply(Function::Cos)
    }
    pub fn tan(&self) -> Self {
        self.apply(Function::Tan)
    }
    pub fn sinh(&self) -> Self {
        self.apply(Function::Sinh)
    }
    pub fn cosh(&self) -> Self {
        self.apply(Function::Cosh)
    }
    pub fn exp(&self) -> Self {
        self.apply(Function::Exp)
    }
    pub fn ln(&self) -> Self {
        self.apply(Function::Ln)
    }
    pub fn sqrt(&self) -> Self {
        self.apply(Function::Sqrt)
    }

    /// Scales by a real factor, keeping exact factors exact.
    pub fn scale(&self, factor: f64) -> Self {
        Self::real(factor).mul(self)
    }

    /// True when the variable occurs anywhere in the tree.
    pub fn depends_on(&self, v: Variable) -> bool {
        match self.node() {
            Node::Const(_) => false,
            Node::Coord(i) => v == Variable::Coord(*i),
            Node::Time => v == Variable::Time,
            Node::Neg(a) | Node::PowInt(a, _) | Node::Func(_, a) => a.depends_on(v),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
                a.depends_on(v) || b.depends_on(v)
            }
        }
    }

    pub fn references_time(&self) -> bool {
        self.depends_on(Variable::Time)
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_coord(&self) -> Option<usize> {
        match self.node() {
            Node::Const(_) | Node::Time => None,
            Node::Coord(i) => Some(*i),
            Node::Neg(a) | Node::PowInt(a, _) | Node::Func(_, a) => a.max_coord(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
                match (a.max_coord(), b.max_coord()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
        }
    }

    /// Number of nodes in the tree (shared subtrees counted each time).
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Const(_) | Node::Coord(_) | Node::Time => 1,
            Node::Neg(a) | Node::PowInt(a, _) | Node::Func(_, a) => 1 + a.size(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Sum of a list of expressions (zero for an empty list).
    pub fn sum<'a>(terms: impl IntoIterator<Item = &'a Expression>) -> Self {
        terms.into_iter().fold(Self::zero(), |acc, t| acc.add(t))
    }
}

impl fmt::Debug for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::display::Printer::generic(self))
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $inherent:ident) => {
        impl ops::$trait<&Expression> for &Expression {
            type Output = Expression;
            fn $method(self, rhs: &Expression) -> Expression {
                Expression::$inherent(self, rhs)
            }
        }
        impl ops::$trait<Expression> for Expression {
            type Output = Expression;
            fn $method(self, rhs: Expression) -> Expression {
                Expression::$inherent(&self, &rhs)
            }
        }
        impl ops::$trait<&Expression> for Expression {
            type Output = Expression;
            fn $method(self, rhs: &Expression) -> Expression {
                Expression::$inherent(&self, rhs)
            }
        }
        impl ops::$trait<Expression> for &Expression {
            type Output = Expression;
            fn $method(self, rhs: Expression) -> Expression {
                Expression::$inherent(self, &rhs)
            }
        }
    };
}

binary_op!(Add, add, add);
binary_op!(Sub, sub, sub);
binary_op!(Mul, mul, mul);
binary_op!(Div, div, div);

impl ops::Neg for Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        Expression::neg(&self)
    }
}

impl ops::Neg for &Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        Expression::neg(self)
    }
}

impl From<i64> for Expression {
    fn from(n: i64) -> Self {
        Expression::int(n)
    }
}

impl From<f64> for Expression {
    fn from(x: f64) -> Self {
        Expression::real(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_are_eliminated() {
        let x = Expression::coord(0);
        assert_eq!(&x + &Expression::zero(), x);
        assert_eq!(&Expression::one() * &x, x);
        assert!((&x * &Expression::zero()).is_zero());
        assert_eq!(x.powi(1), x);
        assert!(x.powi(0).is_one());
        assert_eq!((-(-x.clone())), x);
    }

    #[test]
    fn constants_fold_exactly() {
        let e = Expression::ratio(1, 3) + Expression::ratio(1, 6);
        assert_eq!(e.as_number(), Some(Number::ratio(1, 2)));
        let p = Expression::int(2).pow(&Expression::int(10));
        assert_eq!(p.as_number(), Some(Number::int(1024)));
        assert!(Expression::zero().exp().is_one());
    }

    #[test]
    fn division_by_literal_zero_is_kept() {
        let e = Expression::one() / Expression::zero();
        assert!(matches!(e.node(), Node::Div(..)));
    }

    #[test]
    fn dependency_tracking() {
        let e = Expression::coord(1).sin() * Expression::time();
        assert!(e.depends_on(Variable::Coord(1)));
        assert!(!e.depends_on(Variable::Coord(0)));
        assert!(e.references_time());
        assert_eq!(e.max_coord(), Some(1));
    }
}
