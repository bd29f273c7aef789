use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::expr::{Expression, Node, Number};
use crate::geometry::SymmetryVector;
use crate::linalg::rational_rref;

pub(crate) type Poly = BTreeMap<Vec<u32>, BigRational>;

/// Exponent vectors of degree ≤ `d` in `n` variables, in descending
/// graded-lexicographic order (highest degree first).
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(i: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == current.len() {
            current[i] = left;
            out.push(current.clone());
            return;
        }
        for e in (0..=left).rev() {
            current[i] = e;
            rec(i + 1, left - e, current, out);
        }
    }
    for deg in (0..=d).rev() {
        if n == 0 {
            break;
        }
        rec(0, deg, &mut current, &mut out);
    }
    out
}

pub(crate) fn number_to_rational(n: Number) -> Option<BigRational> {
    let r = n.as_rational()?;
    Some(BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
}

fn add_into(acc: &mut Poly, other: &Poly, sign: &BigRational) {
    for (m, c) in other {
        let entry = acc.entry(m.clone()).or_insert_with(BigRational::zero);
        *entry += c * sign;
    }
    acc.retain(|_, c| !c.is_zero());
}

fn mul_poly(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            *out.entry(m).or_insert_with(BigRational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Expands a time-free expression with exact rational coefficients into a polynomial in `n` variables.
pub(crate) fn expand(e: &Expression, n: usize) -> Option<Poly> {
    let one = BigRational::one();
    Some(match e.node() {
        Node::Const(c) => {
            let r = number_to_rational(*c)?;
            let mut p = Poly::new();
            if !r.is_zero() {
                p.insert(vec![0; n], r);
            }
            p
        }
        Node::Coord(i) => {
            if *i >= n {
                return None;
            }
            let mut m = vec![0; n];
            m[*i] = 1;
            Poly::from([(m, one)])
        }
        Node::Neg(a) => {
            let mut p = Poly::new();
            add_into(&mut p, &expand(a, n)?, &-one);
            p
        }
        Node::Add(a, b) | Node::Sub(a, b) => {
            let mut p = expand(a, n)?;
            let sign = if matches!(e.node(), Node::Add(..)) { one } else { -one };
            add_into(&mut p, &expand(b, n)?, &sign);
            p
        }
        Node::Mul(a, b) => mul_poly(&expand(a, n)?, &expand(b, n)?),
        Node::Div(a, b) => {
            let d = number_to_rational(b.as_number()?)?;
            if d.is_zero() {
                return None;
            }
            let mut p = Poly::new();
            add_into(&mut p, &expand(a, n)?, &d.recip());
            p
        }
        Node::PowInt(a, k) if *k >= 0 => {
            let base = expand(a, n)?;
            let mut p = Poly::from([(vec![0; n], one)]);
            for _ in 0..*k {
                p = mul_poly(&p, &base);
            }
            p
        }
        _ => return None,
    })
}

/// Coefficients of a time-independent polynomial field in the solver's column
/// layout: monomial-major over [`monomials`], component-minor.
pub fn field_coefficients(v: &SymmetryVector, degree: u32) -> Option<Vec<BigRational>> {
    let n = v.dim();
    let monos = monomials(n, degree);
    let index: BTreeMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut out = vec![BigRational::zero(); monos.len() * n];
    for (i, comp) in v.eta().iter().enumerate() {
        for (m, c) in expand(comp, n)? {
            let pos = *index.get(&m)?;
            out[pos * n + i] = c;
        }
    }
    Some(out)
}

fn rank(rows: Vec<Vec<BigRational>>) -> usize {
    rational_rref(rows).0.len()
}

/// Exact membership of `v` in the span of `basis` (as polynomial fields of degree ≤ `degree`).
pub fn exact_span_contains(basis: &[SymmetryVector], v: &SymmetryVector, degree: u32) -> Option<bool> {
    let rows: Vec<_> = basis.iter().map(|b| field_coefficients(b, degree)).collect::<Option<_>>()?;
    let r0 = rank(rows.clone());
    let mut with = rows;
    with.push(field_coefficients(v, degree)?);
    Some(rank(with) == r0)
}

/// True when both lists span the same space of polynomial fields.
pub fn exact_span_equal(a: &[SymmetryVector], b: &[SymmetryVector], degree: u32) -> Option<bool> {
    let ra: Vec<_> = a.iter().map(|v| field_coefficients(v, degree)).collect::<Option<_>>()?;
    let rb: Vec<_> = b.iter().map(|v| field_coefficients(v, degree)).collect::<Option<_>>()?;
    let (na, nb) = (rank(ra.clone()), rank(rb.clone()));
    let joint = rank(ra.into_iter().chain(rb).collect());
    Some(na == nb && joint == na)
}
