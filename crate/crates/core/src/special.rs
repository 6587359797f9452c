//! Log-factorials and generalized Laguerre polynomials.

/// Table of `ln(k!)` for `k = 0..=n_max`, accumulated as a running sum of
/// `ln k`. Exact to a few ulps for the sizes used here.
#[derive(Debug, Clone)]
pub struct LogFactorial {
    table: Vec<f64>,
}

impl LogFactorial {
    pub fn new(n_max: usize) -> Self {
        let mut table = Vec::with_capacity(n_max + 1);
        table.push(0.0);
        let mut acc = 0.0;
        for k in 1..=n_max {
            acc += (k as f64).ln();
            table.push(acc);
        }
        Self { table }
    }

    #[inline]
    pub fn get(&self, k: usize) -> f64 {
        self.table[k]
    }

    pub fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        self.get(n) - self.get(k) - self.get(n - k)
    }
}

/// Generalized Laguerre polynomial `L_n^(alpha)(x)` by the three-term
/// recurrence in the degree.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `base^exp` with `0^0 = 1`, returned as `(sign, ln|value|)`.
/// A zero result is reported as `ln = -inf` with sign `+1`.
#[inline]
pub(crate) fn signed_ln_pow(base: f64, exp: usize) -> (f64, f64) {
    if exp == 0 {
        return (1.0, 0.0);
    }
    if base == 0.0 {
        return (1.0, f64::NEG_INFINITY);
    }
    let sign = if base < 0.0 && exp % 2 == 1 {
        -1.0
    } else {
        1.0
    };
    (sign, exp as f64 * base.abs().ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_factorial_small_values() {
        let lf = LogFactorial::new(20);
        assert_eq!(lf.get(0), 0.0);
        assert_eq!(lf.get(1), 0.0);
        assert!((lf.get(5) - 120f64.ln()).abs() < 1e-14);
        assert!((lf.get(20) - 2432902008176640000f64.ln()).abs() < 1e-12);
        assert!((lf.ln_binomial(10, 3) - 120f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn laguerre_low_orders() {
        // L_2^a(x) = (x^2 - 2(a+2)x + (a+1)(a+2)) / 2
        for &(a, x) in &[(0.0, 0.3), (2.0, 1.7), (5.0, 0.5)] {
            let expect = (x * x - 2.0 * (a + 2.0) * x + (a + 1.0) * (a + 2.0)) / 2.0;
            assert!((laguerre(2, a, x) - expect).abs() < 1e-13);
        }
        // L_n^a(0) = C(n + a, n)
        assert!((laguerre(4, 3.0, 0.0) - 35.0).abs() < 1e-12);
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        assert_eq!(signed_ln_pow(0.0, 0), (1.0, 0.0));
        assert_eq!(signed_ln_pow(0.0, 3).1, f64::NEG_INFINITY);
        let (s, l) = signed_ln_pow(-0.5, 3);
        assert_eq!(s, -1.0);
        assert!((l - 0.125f64.ln()).abs() < 1e-15);
    }
}
