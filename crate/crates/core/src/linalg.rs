//! Exact rational elimination and thresholded numeric nullspaces.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Reduced row-echelon form over ℚ. Returns the nonzero rows and their pivot columns.
pub fn rational_rref(mut rows: Vec<Vec<BigRational>>) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Basis of `{ v : A v = 0 }` in reduced row-echelon form.
pub fn rational_nullspace(rows: Vec<Vec<BigRational>>, ncols: usize) -> Vec<Vec<BigRational>> {
    let (reduced, pivots) = rational_rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect();
    rational_rref(basis).0
}

/// Subtracts multiples of the RREF rows `lower` so that `v` vanishes on their pivots.
pub fn reduce_against(v: &mut [BigRational], lower: &[Vec<BigRational>], pivots: &[usize]) {
    for (row, &p) in lower.iter().zip(pivots) {
        if v[p].is_zero() {
            continue;
        }
        let f = v[p].clone();
        for (x, r) in v.iter_mut().zip(row) {
            if !r.is_zero() {
                *x -= &f * r;
            }
        }
    }
}

pub fn rational_from_i64(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Converts to `i64` numerator and denominator when both fit.
pub fn rational_to_i64_pair(r: &BigRational) -> Option<(i64, i64)> {
    use num_traits::ToPrimitive;
    Some((r.numer().to_i64()?, r.denom().to_i64()?))
}

/// The fraction `p/q` with the smallest `q ≤ max_den` within `tol·max(1, |x|)` of `x`.
pub fn simple_rational(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    (1..=max_den).find_map(|q| {
        let p = (x * q as f64).round();
        ((p / q as f64 - x).abs() <= tol * x.abs().max(1.0)).then_some((p as i64, q))
    })
}

pub fn is_rational_zero_vec(v: &[BigRational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Outcome of a thresholded SVD nullspace computation.
#[derive(Clone, Debug)]
pub struct NumericNullspace {
    /// Orthonormalised and then row-reduced basis vectors.
    pub basis: Vec<Vec<f64>>,
    /// Singular values of the column-equilibrated matrix, descending.
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    /// Singular values within a factor 10 of the threshold.
    pub ambiguous: Vec<f64>,
}

impl NumericNullspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_ambiguous(&self) -> bool {
        !self.ambiguous.is_empty()
    }
}

/// Nullspace of `a` via SVD after scaling every nonzero column to unit norm.
///
/// Singular values at or below `rel_threshold × σ_max` count as zero. The
/// returned basis is put in reduced row-echelon form with entries below
/// `1e-10` flushed to zero.
pub fn numeric_nullspace(a: &DMatrix<f64>, rel_threshold: f64) -> NumericNullspace {
    let (rows, cols) = a.shape();
    let norms: Vec<f64> = (0..cols).map(|c| a.column(c).norm()).collect();
    let largest = norms.iter().copied().fold(0.0, f64::max);
    // Columns at roundoff level relative to the largest are left unscaled.
    let scales: Vec<f64> = norms.iter().map(|&norm| if norm > 1e-12 * largest { 1.0 / norm } else { 1.0 }).collect();
    let mut m = DMatrix::zeros(rows.max(cols), cols);
    for c in 0..cols {
        for r in 0..rows {
            m[(r, c)] = a[(r, c)] * scales[c];
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let smax = singular_values.first().copied().unwrap_or(0.0);
    let threshold = rel_threshold * smax;
    let ambiguous = singular_values.iter().copied().filter(|&s| s > threshold / 10.0 && s < threshold * 10.0).collect();
    let null: Vec<Vec<f64>> = order
        .iter()
        .filter(|&&i| smax == 0.0 || svd.singular_values[i] <= threshold)
        .map(|&i| (0..cols).map(|c| v_t[(i, c)] * scales[c]).collect())
        .collect();
    NumericNullspace { basis: numeric_rref(null, 1e-10), singular_values, threshold, ambiguous }
}

/// Reduced row-echelon form with partial pivoting; entries with magnitude
/// below `tol` become exact zeros.
pub fn numeric_rref(mut rows: Vec<Vec<f64>>, tol: f64) -> Vec<Vec<f64>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let (p, best) =
            (r..rows.len()).map(|i| (i, rows[i][c].abs())).fold((r, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol {
            continue;
        }
        rows.swap(r, p);
        let inv = 1.0 / rows[r][c];
        for v in rows[r].iter_mut() {
            *v *= inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0.0 {
                let f = row[c];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    for row in rows.iter_mut() {
        for v in row.iter_mut() {
            if v.abs() < tol {
                *v = 0.0;
            }
        }
    }
    rows
}

/// Rank of a set of row vectors under a relative singular-value threshold.
pub fn numeric_rank(rows: &[Vec<f64>], rel_threshold: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |r, c| rows[r][c]);
    let sv = m.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > rel_threshold * smax).count()
}
