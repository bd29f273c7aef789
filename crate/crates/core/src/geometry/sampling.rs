use crate::expr::CoordinateChart;

/// Default distance kept from excluded loci.
pub const DEFAULT_MARGIN: f64 = 0.1;

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
const SEED_STRIDE: u64 = 1 << 20;

/// Axis-aligned coordinate box plus a time interval.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub time: (f64, f64),
}

impl SampleBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, time: (f64, f64)) -> Self {
        assert_eq!(lower.len(), upper.len(), "box bounds differ in dimension");
        SampleBox { lower, upper, time }
    }

    /// `[lo, hi]^n` with time in `[0, 1]`.
    pub fn cube(n: usize, lo: f64, hi: f64) -> Self {
        Self::new(vec![lo; n], vec![hi; n], (0.0, 1.0))
    }

    pub fn with_time(mut self, lo: f64, hi: f64) -> Self {
        self.time = (lo, hi);
        self
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }
}

/// A sample point `(t, x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub x: Vec<f64>,
    pub t: f64,
}

/// Radical inverse of `index` in base `b`.
fn radical_inverse(mut index: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut r = 0.0;
    while index > 0 {
        r += f * (index % b) as f64;
        index /= b;
        f *= inv;
    }
    r
}

/// Deterministic Halton sequence over a sample box, with time as the last axis.
///
/// The seed selects a disjoint block of the sequence, so distinct seeds give
/// disjoint point sets.
#[derive(Clone, Debug)]
pub struct HaltonSampler {
    bounds: SampleBox,
    seed: u64,
    margin: f64,
}

impl HaltonSampler {
    pub fn new(bounds: SampleBox, seed: u64) -> Self {
        assert!(bounds.dim() < PRIMES.len(), "sampler supports at most {} coordinates", PRIMES.len() - 1);
        HaltonSampler { bounds, seed, margin: DEFAULT_MARGIN }
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }

    pub fn bounds(&self) -> &SampleBox {
        &self.bounds
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The same box under another seed.
    pub fn reseeded(&self, seed: u64) -> Self {
        HaltonSampler { seed, ..self.clone() }
    }

    fn raw(&self, index: u64) -> Sample {
        let n = self.bounds.dim();
        let x = (0..n)
            .map(|d| {
                let u = radical_inverse(index, PRIMES[d]);
                self.bounds.lower[d] + u * (self.bounds.upper[d] - self.bounds.lower[d])
            })
            .collect();
        let (t0, t1) = self.bounds.time;
        let t = t0 + radical_inverse(index, PRIMES[n]) * (t1 - t0);
        Sample { x, t }
    }

    /// The first `count` sequence points that keep the margin from every
    /// excluded locus of `chart`.
    ///
    /// Returns fewer points only if the box is almost entirely excluded.
    pub fn points(&self, chart: &CoordinateChart, count: usize) -> Vec<Sample> {
        let start = 1 + self.seed.wrapping_mul(SEED_STRIDE);
        let mut out = Vec::with_capacity(count);
        let budget = (count as u64).saturating_mul(50).max(1000);
        for k in 0..budget {
            if out.len() == count {
                break;
            }
            let s = self.raw(start.wrapping_add(k));
            if chart.violated_locus(&s.x, self.margin).is_none() {
                out.push(s);
            }
        }
        if out.len() < count {
            log::warn!("sampler produced {} of {} requested points", out.len(), count);
        }
        out
    }
}
