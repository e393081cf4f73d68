use num_rational::Ratio;

/// Exact Bernoulli numbers `B_0 … B_max` (convention `B_1 = -1/2`).
///
/// Values are generated from the recurrence `Σ_{k=0}^{m} C(m+1, k) B_k = 0`
/// in 128-bit rational arithmetic, which is exact well beyond the default
/// range of 20.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliTable {
    values: Vec<Ratio<i128>>,
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new(20)
    }
}

impl BernoulliTable {
    pub fn new(max: usize) -> Self {
        let mut values: Vec<Ratio<i128>> = Vec::with_capacity(max + 1);
        values.push(Ratio::from_integer(1));
        for m in 1..=max {
            let mut acc = Ratio::from_integer(0);
            for (k, b) in values.iter().enumerate() {
                acc += b * Ratio::from_integer(binomial(m + 1, k));
            }
            values.push(-acc / Ratio::from_integer((m + 1) as i128));
        }
        Self { values }
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// Exact `B_j`. Panics if `j` exceeds the table.
    pub fn exact(&self, j: usize) -> Ratio<i128> {
        self.values[j]
    }

    pub fn value(&self, j: usize) -> f64 {
        ratio_to_f64(self.values[j])
    }

    /// Exact `B_j / j!`.
    pub fn exact_over_factorial(&self, j: usize) -> Ratio<i128> {
        self.values[j] / Ratio::from_integer(factorial(j))
    }

    /// `B_j / j!` as a float; these are the `dexp⁻¹` series coefficients.
    pub fn over_factorial(&self, j: usize) -> f64 {
        ratio_to_f64(self.exact_over_factorial(j))
    }
}

fn ratio_to_f64(r: Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn binomial(n: usize, k: usize) -> i128 {
    let k = k.min(n - k);
    let mut c: i128 = 1;
    for i in 0..k {
        c = c * (n - i) as i128 / (i + 1) as i128;
    }
    c
}

fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}
