#![allow(dead_code)]

use geonoether::expr::{CoordinateChart, Expression};
use proptest::prelude::*;

pub const DIM: usize = 3;

pub fn chart() -> CoordinateChart {
    CoordinateChart::numbered(DIM)
}

fn leaf() -> impl Strategy<Value = Expression> {
    prop_oneof![
        (0..DIM).prop_map(Expression::coord),
        Just(Expression::time()),
        (-4i64..=4).prop_map(Expression::int),
        (-6i64..=6, 1i64..=5).prop_map(|(p, q)| Expression::ratio(p, q)),
        (-2.0f64..2.0).prop_map(Expression::real),
    ]
}

/// Random expressions that stay finite and smooth on `[-1, 1]³ × [0, 1]`.
pub fn arb_expression() -> impl Strategy<Value = Expression> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        let one = || Expression::one();
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.sub(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(&b)),
            (inner.clone(), inner.clone()).prop_map(move |(a, b)| a.div(&one().add(&b.powi(2)))),
            inner.clone().prop_map(|a| a.neg()),
            (inner.clone(), 0i32..=3).prop_map(|(a, k)| a.powi(k)),
            inner.clone().prop_map(|a| a.sin()),
            inner.clone().prop_map(|a| a.cos()),
            inner.clone().prop_map(|a| a.sin().tan()),
            inner.clone().prop_map(|a| a.sin().sinh()),
            inner.clone().prop_map(|a| a.sin().cosh()),
            inner.clone().prop_map(|a| a.sin().exp()),
            inner.clone().prop_map(move |a| one().add(&a.powi(2)).ln()),
            inner.clone().prop_map(move |a| one().add(&a.powi(2)).sqrt()),
            (inner, -1.5f64..1.5).prop_map(move |(a, p)| one().add(&a.powi(2)).pow(&Expression::real(p))),
        ]
    })
}

pub fn arb_point() -> impl Strategy<Value = (Vec<f64>, f64)> {
    (proptest::collection::vec(-1.0f64..1.0, DIM), 0.0f64..1.0)
}

/// Every built-in scenario at its representative parameters.
pub fn builtin_scenarios() -> Vec<geonoether::Scenario> {
    use geonoether::scenarios::*;
    let mut out = Vec::new();
    for k in [1i8, -1] {
        for row in 1..=TABLE7_ROWS {
            out.push(table7_scenario(row, k, 1, 2, 1).expect("Table 7"));
        }
        out.push(sphere_scenario(k, geonoether::Expression::int(2)).expect("constant potential"));
    }
    let params = NewtonianParams::default();
    for n in 1..=3 {
        for r in 1..=4 {
            for row in
                [NewtonianRow::Table3(r), NewtonianRow::Table4(r), NewtonianRow::Table5(r), NewtonianRow::Table6(r)]
            {
                if let Ok(sc) = newtonian_scenario(n, row, &params) {
                    out.push(sc);
                }
            }
        }
    }
    out.push(ermakov_scenario(4.0).expect("Ermakov"));
    for kind in BianchiType::ALL {
        for family in PotentialFamily::ALL {
            out.push(bianchi_scenario(BianchiModel::new(kind, family)).expect("Bianchi"));
        }
    }
    out
}
