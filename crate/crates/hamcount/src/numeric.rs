//! Small numeric helpers shared by the scaling, bound and oracle code.

/// Compensated (Kahan) summation. Long accumulations of log terms and
/// alternating-sign series go through this to keep drift near machine eps.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// log(Σ exp(x_i)) computed relative to the maximum to avoid overflow.
/// Returns `-inf` for an empty slice or when every term is `-inf`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut acc = KahanSum::new();
    for &x in xs {
        acc.add((x - m).exp());
    }
    m + acc.value().ln()
}

/// ln(m!) by direct summation of logs. Exact enough for padding values and
/// never forms the factorial itself.
pub fn ln_factorial(m: u64) -> f64 {
    let mut acc = KahanSum::new();
    for k in 2..=m {
        acc.add((k as f64).ln());
    }
    acc.value()
}

/// Deterministic 64-bit mix used to derive per-instance seeds from
/// (master seed, labels). SplitMix64 finalizer.
pub fn mix_seed(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed
        .wrapping_add(a.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(b.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_handles_small_additions() {
        let mut s = KahanSum::new();
        s.add(1.0);
        for _ in 0..10_000_000 {
            s.add(1e-16);
        }
        assert!((s.value() - (1.0 + 1e-9)).abs() < 1e-12);
    }

    #[test]
    fn ln_factorial_matches_direct_products() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-12);
        assert!((ln_factorial(20) - 2.432902008176640e18f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn log_sum_exp_is_shift_invariant() {
        let a = log_sum_exp(&[0.0, 1.0, 2.0]);
        let b = log_sum_exp(&[1000.0, 1001.0, 1002.0]);
        assert!((b - a - 1000.0).abs() < 1e-9);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert_eq!(
            log_sum_exp(&[f64::NEG_INFINITY, f64::NEG_INFINITY]),
            f64::NEG_INFINITY
        );
    }
}
