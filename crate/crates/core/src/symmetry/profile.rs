use crate::expr::Expression;

/// Closed form of `T` with `T'' = mT`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProfileBranch {
    /// `c₁e^{kt} + c₂e^{−kt}`, `k = √m`.
    Exponential { k: f64 },
    /// `c₁ + c₂t`.
    Linear,
    /// `c₁cos(ωt) + c₂sin(ωt)`, `ω = √−m`.
    Trigonometric { omega: f64 },
}

/// Time factor `T(t) = c₁ T₁ + c₂ T₂` of a Case II symmetry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeProfile {
    pub m: f64,
    pub c1: f64,
    pub c2: f64,
}

impl TimeProfile {
    pub fn new(m: f64, c1: f64, c2: f64) -> Self {
        TimeProfile { m, c1, c2 }
    }

    /// The two basis profiles `(1, 0)` and `(0, 1)` for `m`.
    pub fn basis(m: f64) -> [TimeProfile; 2] {
        [TimeProfile::new(m, 1.0, 0.0), TimeProfile::new(m, 0.0, 1.0)]
    }

    pub fn branch(&self) -> ProfileBranch {
        if self.m > 0.0 {
            ProfileBranch::Exponential { k: self.m.sqrt() }
        } else if self.m < 0.0 {
            ProfileBranch::Trigonometric { omega: (-self.m).sqrt() }
        } else {
            ProfileBranch::Linear
        }
    }

    fn pieces(&self) -> [Expression; 2] {
        let t = Expression::time();
        match self.branch() {
            ProfileBranch::Exponential { k } => [t.mul(&constant(k)).exp(), t.mul(&constant(-k)).exp()],
            ProfileBranch::Linear => [Expression::one(), t],
            ProfileBranch::Trigonometric { omega } => {
                let arg = t.mul(&constant(omega));
                [arg.cos(), arg.sin()]
            }
        }
    }

    fn combine(&self, a: &Expression, b: &Expression) -> Expression {
        constant(self.c1).mul(a).add(&constant(self.c2).mul(b))
    }

    /// `T(t)`.
    pub fn expr(&self) -> Expression {
        let [a, b] = self.pieces();
        self.combine(&a, &b)
    }

    /// `T'(t)`.
    pub fn derivative_expr(&self) -> Expression {
        self.expr().diff_time()
    }

    /// `∫T dt` with vanishing integration constant.
    pub fn integral_expr(&self) -> Expression {
        let [a, b] = self.pieces();
        match self.branch() {
            ProfileBranch::Exponential { k } => self.combine(&a, &b.neg()).div(&constant(k)),
            ProfileBranch::Linear => {
                self.combine(&Expression::time(), &Expression::ratio(1, 2).mul(&Expression::time().powi(2)))
            }
            ProfileBranch::Trigonometric { omega } => self.combine(&b, &a.neg()).div(&constant(omega)),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.expr().eval(&[], Some(t)).unwrap_or(f64::NAN)
    }

    pub fn eval_second(&self, t: f64) -> f64 {
        self.derivative_expr().diff_time().eval(&[], Some(t)).unwrap_or(f64::NAN)
    }

    /// `max |T'' − mT|` over the given times.
    pub fn ode_residual(&self, times: &[f64]) -> f64 {
        times.iter().map(|&t| (self.eval_second(t) - self.m * self.eval(t)).abs()).fold(0.0, f64::max)
    }
}

/// A constant that snaps to a small-denominator rational when it is one.
pub(crate) fn constant(x: f64) -> Expression {
    match crate::linalg::simple_rational(x, 64, 1e-12) {
        Some((p, q)) => Expression::ratio(p, q),
        None => Expression::real(x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_solve_their_ode() {
        let times: Vec<f64> = (0..20).map(|i| -1.0 + 0.1 * i as f64).collect();
        for m in [2.0, 0.0, -3.0, 1.5] {
            for p in TimeProfile::basis(m).into_iter().chain([TimeProfile::new(m, 0.7, -1.3)]) {
                assert!(p.ode_residual(&times) < 1e-12 * (1.0 + m.abs()) * 10.0, "{p:?}");
                let i = p.integral_expr();
                for &t in &times {
                    let d = i.diff_time().eval(&[], Some(t)).unwrap();
                    assert!((d - p.eval(t)).abs() < 1e-12, "{p:?}");
                }
            }
        }
        let zero = TimeProfile::new(0.0, 1.0, 0.0).integral_expr();
        assert_eq!(zero.eval(&[], Some(0.0)).unwrap(), 0.0);
    }
}
