use std::fmt;

use super::eom::{eom_rhs, EquationsOfMotion};
use super::DynamicsError;
use crate::geometry::DEFAULT_MARGIN;

pub const DEFAULT_RK4_STEP: f64 = 1e-3;
pub const DEFAULT_RK45_TOLERANCE: f64 = 1e-10;
const MAX_ADAPTIVE_STEPS: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// Classic fixed-step fourth order Runge–Kutta.
    Rk4 { step: f64 },
    /// Dormand–Prince 5(4) with error control on `atol + rtol·|y|`.
    Rk45 { atol: f64, rtol: f64 },
}

impl Method {
    pub fn rk4() -> Self {
        Method::Rk4 { step: DEFAULT_RK4_STEP }
    }

    pub fn rk45() -> Self {
        Method::Rk45 { atol: DEFAULT_RK45_TOLERANCE, rtol: DEFAULT_RK45_TOLERANCE }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Method::Rk4 { .. } => "RK4",
            Method::Rk45 { .. } => "RK45",
        }
    }

    fn validate(&self) -> Result<(), DynamicsError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        let valid = match *self {
            Method::Rk4 { step } => ok(step),
            Method::Rk45 { atol, rtol } => ok(atol) && ok(rtol),
        };
        if valid {
            Ok(())
        } else {
            Err(DynamicsError::InvalidStep)
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Rk4 { step } => write!(f, "RK4 h={step:e}"),
            Method::Rk45 { atol, rtol } => write!(f, "RK45 atol={atol:e} rtol={rtol:e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum HaltReason {
    /// The state came within the margin of an excluded locus.
    ExcludedLocus(String),
    /// The right-hand side could not be evaluated.
    Singular(String),
    StepUnderflow {
        step: f64,
    },
    TooManySteps,
}

impl fmt::Display for HaltReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HaltReason::ExcludedLocus(label) => write!(f, "reached the margin of `{label}`"),
            HaltReason::Singular(msg) => write!(f, "singular right-hand side: {msg}"),
            HaltReason::StepUnderflow { step } => write!(f, "step size underflow (h = {step:e})"),
            HaltReason::TooManySteps => write!(f, "more than {MAX_ADAPTIVE_STEPS} adaptive steps"),
        }
    }
}

/// Where and why an integration stopped before the end of its span.
#[derive(Clone, Debug, PartialEq)]
pub struct Halt {
    pub time: f64,
    pub reason: HaltReason,
}

/// Accepted states `(x, ẋ)` on an increasing time grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub method: Method,
    pub dim: usize,
    pub span: (f64, f64),
    /// Set when the run stopped early; the recorded prefix stays valid.
    pub halt: Option<Halt>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.halt.is_none()
    }

    pub fn x(&self, k: usize) -> &[f64] {
        &self.states[k][..self.dim]
    }

    pub fn v(&self, k: usize) -> &[f64] {
        &self.states[k][self.dim..]
    }

    pub fn last(&self) -> (f64, &[f64]) {
        let k = self.len() - 1;
        (self.times[k], &self.states[k])
    }
}

fn axpy(y: &[f64], h: f64, terms: &[(f64, &[f64])]) -> Vec<f64> {
    let mut out = y.to_vec();
    for (c, k) in terms {
        for (o, v) in out.iter_mut().zip(k.iter()) {
            *o += h * c * v;
        }
    }
    out
}

struct Run<'a> {
    e: &'a EquationsOfMotion,
    margin: f64,
}

impl Run<'_> {
    fn f(&self, y: &[f64]) -> Result<Vec<f64>, HaltReason> {
        eom_rhs(self.e, y).map_err(|err| HaltReason::Singular(err.to_string()))
    }

    fn admissible(&self, y: &[f64]) -> Result<(), HaltReason> {
        let chart = self.e.metric().chart();
        match chart.violated_locus(&y[..self.e.dim()], self.margin) {
            Some(locus) => Err(HaltReason::ExcludedLocus(locus.label.clone())),
            None => Ok(()),
        }
    }

    /// The increment `y(t + h) − y(t)` of one classical RK4 step.
    fn rk4_increment(&self, y: &[f64], h: f64) -> Result<Vec<f64>, HaltReason> {
        let k1 = self.f(y)?;
        let k2 = self.f(&axpy(y, h, &[(0.5, &k1)]))?;
        let k3 = self.f(&axpy(y, h, &[(0.5, &k2)]))?;
        let k4 = self.f(&axpy(y, h, &[(1.0, &k3)]))?;
        let zero = vec![0.0; y.len()];
        Ok(axpy(&zero, h, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)]))
    }

    /// One Dormand–Prince step; returns the fifth order solution, its
    /// derivative (reused as the next first stage) and the error estimate.
    fn dopri_step(&self, y: &[f64], k1: &[f64], h: f64) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>), HaltReason> {
        let k2 = self.f(&axpy(y, h, &[(1.0 / 5.0, k1)]))?;
        let k3 = self.f(&axpy(y, h, &[(3.0 / 40.0, k1), (9.0 / 40.0, &k2)]))?;
        let k4 = self.f(&axpy(y, h, &[(44.0 / 45.0, k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)]))?;
        let k5 = self.f(&axpy(
            y,
            h,
            &[(19372.0 / 6561.0, k1), (-25360.0 / 2187.0, &k2), (64448.0 / 6561.0, &k3), (-212.0 / 729.0, &k4)],
        ))?;
        let k6 = self.f(&axpy(
            y,
            h,
            &[
                (9017.0 / 3168.0, k1),
                (-355.0 / 33.0, &k2),
                (46732.0 / 5247.0, &k3),
                (49.0 / 176.0, &k4),
                (-5103.0 / 18656.0, &k5),
            ],
        ))?;
        let y5 = axpy(
            y,
            h,
            &[
                (35.0 / 384.0, k1),
                (500.0 / 1113.0, &k3),
                (125.0 / 192.0, &k4),
                (-2187.0 / 6784.0, &k5),
                (11.0 / 84.0, &k6),
            ],
        );
        let k7 = self.f(&y5)?;
        let e = [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];
        let stages = [k1, &k2[..], &k3, &k4, &k5, &k6, &k7];
        let err = (0..y.len()).map(|i| h * stages.iter().zip(e).map(|(k, c)| c * k[i]).sum::<f64>()).collect();
        Ok((y5, k7, err))
    }
}

/// Integrates from `(x0, v0)` over `span`, recording every accepted step.
///
/// A run that meets an excluded locus or a singular right-hand side stops
/// there and returns the partial trajectory with [`Trajectory::halt`] set.
pub fn integrate(
    e: &EquationsOfMotion,
    x0: &[f64],
    v0: &[f64],
    span: (f64, f64),
    method: Method,
) -> Result<Trajectory, DynamicsError> {
    integrate_with_margin(e, x0, v0, span, method, DEFAULT_MARGIN)
}

/// [`integrate`] with an explicit excluded-locus margin.
pub fn integrate_with_margin(
    e: &EquationsOfMotion,
    x0: &[f64],
    v0: &[f64],
    span: (f64, f64),
    method: Method,
    margin: f64,
) -> Result<Trajectory, DynamicsError> {
    let n = e.dim();
    for (len, what) in [(x0.len(), "initial position entries"), (v0.len(), "initial velocity entries")] {
        if len != n {
            return Err(DynamicsError::DimensionMismatch { expected: n, found: len, what });
        }
    }
    let (t0, t1) = span;
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(DynamicsError::InvalidSpan(t0, t1));
    }
    method.validate()?;
    let run = Run { e, margin };
    let y0: Vec<f64> = x0.iter().chain(v0).copied().collect();
    if let Err(HaltReason::ExcludedLocus(label)) = run.admissible(&y0) {
        return Err(DynamicsError::InitialStateExcluded(label));
    }
    eom_rhs(e, &y0)?;
    let mut tr = Trajectory { times: vec![t0], states: vec![y0], method, dim: n, span, halt: None };
    let outcome = match method {
        Method::Rk4 { step } => rk4(&run, &mut tr, step),
        Method::Rk45 { atol, rtol } => rk45(&run, &mut tr, atol, rtol),
    };
    if let Err(reason) = outcome {
        let time = *tr.times.last().expect("trajectory holds the initial state");
        log::warn!("integration halted at t = {time}: {reason}");
        tr.halt = Some(Halt { time, reason });
    }
    Ok(tr)
}

fn rk4(run: &Run<'_>, tr: &mut Trajectory, step: f64) -> Result<(), HaltReason> {
    let (t0, t1) = tr.span;
    let count = ((t1 - t0) / step - 1e-9).ceil().max(1.0) as usize;
    let h = (t1 - t0) / count as f64;
    tr.times.reserve(count);
    tr.states.reserve(count);
    // Compensated summation keeps the accumulated rounding below the truncation error.
    let mut carry = vec![0.0; tr.dim * 2];
    for k in 1..=count {
        let prev = tr.states.last().expect("nonempty");
        let delta = run.rk4_increment(prev, h)?;
        let mut y = prev.clone();
        for ((yi, c), d) in y.iter_mut().zip(carry.iter_mut()).zip(delta) {
            let corrected = d - *c;
            let sum = *yi + corrected;
            *c = (sum - *yi) - corrected;
            *yi = sum;
        }
        run.admissible(&y)?;
        tr.times.push(if k == count { t1 } else { t0 + k as f64 * h });
        tr.states.push(y);
    }
    Ok(())
}

fn rk45(run: &Run<'_>, tr: &mut Trajectory, atol: f64, rtol: f64) -> Result<(), HaltReason> {
    let (t0, t1) = tr.span;
    let mut t = t0;
    let mut y = tr.states[0].clone();
    let mut k1 = run.f(&y)?;
    let mut h = ((t1 - t0) * 1e-3).min(1e-2);
    for _ in 0..MAX_ADAPTIVE_STEPS {
        if t >= t1 {
            return Ok(());
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        if h <= 1e-14 * t.abs().max(1.0) {
            return Err(HaltReason::StepUnderflow { step: h });
        }
        let (y5, k7, err) = match run.dopri_step(&y, &k1, h) {
            Ok(step) => step,
            Err(HaltReason::Singular(_)) => {
                h *= 0.25;
                continue;
            }
            Err(other) => return Err(other),
        };
        let norm = (err
            .iter()
            .zip(y.iter().zip(&y5))
            .map(|(e, (a, b))| (e / (atol + rtol * a.abs().max(b.abs()))).powi(2))
            .sum::<f64>()
            / y.len() as f64)
            .sqrt();
        if norm.is_finite() && norm <= 1.0 {
            run.admissible(&y5)?;
            t = if last { t1 } else { t + h };
            y = y5;
            k1 = k7;
            tr.times.push(t);
            tr.states.push(y.clone());
        }
        let factor = if norm == 0.0 {
            5.0
        } else if norm.is_finite() {
            (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            0.2
        };
        h *= factor;
    }
    if t >= t1 {
        Ok(())
    } else {
        Err(HaltReason::TooManySteps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collineation::sphere_metric;
    use crate::expr::{parse, Expression};
    use crate::geometry::{ForceField, Metric};

    #[test]
    fn free_particle() {
        let e = EquationsOfMotion::new(Metric::euclidean(1), ForceField::zero(1)).unwrap();
        let tr = integrate(&e, &[0.0], &[1.0], (0.0, 1.0), Method::rk4()).unwrap();
        assert!(tr.is_complete());
        assert_eq!(tr.len(), 1001);
        assert!((tr.x(1000)[0] - 1.0).abs() < 1e-12);
        assert!(tr.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn harmonic_oscillator() {
        let m = Metric::euclidean(1);
        let v = parse("x1^2/2", m.chart()).unwrap();
        let e = EquationsOfMotion::from_potential(m, v).unwrap();
        let tau = 2.0 * std::f64::consts::PI;
        let rk4 = integrate(&e, &[1.0], &[0.0], (0.0, tau), Method::rk4()).unwrap();
        assert!((rk4.last().1[0] - 1.0).abs() < 1e-9);
        let rk45 = integrate(&e, &[1.0], &[0.0], (0.0, tau), Method::rk45()).unwrap();
        assert!((rk45.last().1[0] - 1.0).abs() < 1e-8);
        assert!(rk45.len() < rk4.len());
    }

    #[test]
    fn halts_near_pole() {
        let m = sphere_metric(1);
        let e = EquationsOfMotion::from_potential(m, Expression::zero()).unwrap();
        let tr = integrate(&e, &[0.5], &[-1.0], (0.0, 2.0), Method::rk4()).unwrap_err();
        assert!(matches!(tr, DynamicsError::DimensionMismatch { .. }));
        let tr = integrate(&e, &[0.5, 0.0], &[-1.0, 0.0], (0.0, 2.0), Method::rk4()).unwrap();
        let halt = tr.halt.as_ref().unwrap();
        assert!(matches!(halt.reason, HaltReason::ExcludedLocus(_)));
        assert!(halt.time > 0.39 && halt.time < 0.41, "{}", halt.time);
        assert!(integrate(&e, &[0.01, 0.0], &[1.0, 0.0], (0.0, 1.0), Method::rk4()).is_err());
    }
}
