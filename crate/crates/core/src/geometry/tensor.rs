/// Dense array over `n^R` entries with row-major index order.
#[derive(Clone, Debug, PartialEq)]
pub struct Array<const R: usize> {
    n: usize,
    data: Vec<f64>,
}

/// Rank-3 array indexed `(i, j, k)`, used for `Γⁱ_jk` and its Lie derivative.
pub type Rank3 = Array<3>;
/// Rank-4 array indexed `(i, j, k, m)`, used for `Γⁱ_jk,m`.
pub type Rank4 = Array<4>;

impl<const R: usize> Array<R> {
    pub fn zeros(n: usize) -> Self {
        Array { n, data: vec![0.0; n.pow(R as u32)] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn offset(&self, idx: [usize; R]) -> usize {
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.n);
            acc * self.n + i
        })
    }

    pub fn get(&self, idx: [usize; R]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: [usize; R], value: f64) {
        let o = self.offset(idx);
        self.data[o] = value;
    }

    pub fn add_to(&mut self, idx: [usize; R], value: f64) {
        let o = self.offset(idx);
        self.data[o] += value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl Rank3 {
    pub fn at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.get([i, j, k])
    }
}

impl Rank4 {
    pub fn at(&self, i: usize, j: usize, k: usize, m: usize) -> f64 {
        self.get([i, j, k, m])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_round_trip() {
        let mut a = Rank3::zeros(3);
        a.set([2, 1, 0], 4.0);
        a.add_to([2, 1, 0], 1.0);
        assert_eq!(a.at(2, 1, 0), 5.0);
        assert_eq!(a.at(0, 1, 2), 0.0);
        assert_eq!(a.max_abs(), 5.0);
        assert_eq!(a.as_slice().len(), 27);
    }
}
