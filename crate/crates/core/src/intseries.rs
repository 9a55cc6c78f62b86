//! Dense integer power series `Σ_{n<len} c_n q^n` as plain vectors.
//!
//! These are the fast paths behind the oracles: eta products, Eisenstein
//! series and j are integral, so they are built here and only converted to
//! [`QSeries`](crate::QSeries) at the end.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Nonzero terms of `∏_{n≥1}(1 − q^n)` below `q^len` as `(exponent, ±1)`,
/// from Euler's pentagonal number theorem.
pub fn pentagonal_terms(len: usize) -> Vec<(usize, i64)> {
    let mut out = vec![(0usize, 1i64)];
    let mut k: usize = 1;
    loop {
        let sign = if k % 2 == 1 { -1 } else { 1 };
        let e1 = k * (3 * k - 1) / 2;
        let e2 = k * (3 * k + 1) / 2;
        if e1 >= len {
            break;
        }
        out.push((e1, sign));
        if e2 < len {
            out.push((e2, sign));
        }
        k += 1;
    }
    out.sort_unstable();
    out
}

/// Truncated product of two dense series.
pub fn mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Quotient `a / b` for `b` with constant term `±1`.
pub fn div_unit(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let b0 = &b[0];
    assert!(b0.is_one() || (-b0).is_one(), "divisor must start with a unit");
    let mut out: Vec<BigInt> = Vec::with_capacity(len);
    for n in 0..len {
        let mut acc = a.get(n).cloned().unwrap_or_default();
        for i in 1..=n.min(b.len().saturating_sub(1)) {
            if !b[i].is_zero() {
                acc -= &b[i] * &out[n - i];
            }
        }
        out.push(acc * b0);
    }
    out
}

/// `∏_k ∏_{n≥1} (1 − q^{kn})^{m_k}` below `q^len` for signed multiplicities.
///
/// Uses the logarithmic derivative: with
/// `g(j) = −Σ_{k | j} m_k · k · σ₁(j/k)` the coefficients satisfy
/// `n·c_n = Σ_{j=1}^{n} g(j) c_{n−j}`.
pub fn eta_core(parts: &[(u64, i64)], len: usize) -> Vec<BigInt> {
    if let Some(v) = eta_core_i128(parts, len) {
        return v.into_iter().map(BigInt::from).collect();
    }
    let g = log_derivative(parts, len);
    let mut c: Vec<BigInt> = Vec::with_capacity(len);
    if len == 0 {
        return c;
    }
    c.push(BigInt::one());
    for n in 1..len {
        let mut acc = BigInt::zero();
        for j in 1..=n {
            if g[j] != 0 {
                acc += &c[n - j] * g[j];
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(n));
        debug_assert!(r.is_zero());
        c.push(q);
    }
    c
}

fn log_derivative(parts: &[(u64, i64)], len: usize) -> Vec<i64> {
    let mut sigma1 = vec![0i64; len.max(1)];
    for d in 1..len {
        let mut m = d;
        while m < len {
            sigma1[m] += d as i64;
            m += d;
        }
    }
    let mut g = vec![0i64; len.max(1)];
    for &(k, m) in parts {
        let k = k as usize;
        let mut t = 1;
        while k * t < len {
            g[k * t] -= m * (k as i64) * sigma1[t];
            t += 1;
        }
    }
    g
}

fn eta_core_i128(parts: &[(u64, i64)], len: usize) -> Option<Vec<i128>> {
    let g = log_derivative(parts, len);
    let mut c: Vec<i128> = Vec::with_capacity(len);
    if len == 0 {
        return Some(c);
    }
    c.push(1);
    for n in 1..len {
        let mut acc: i128 = 0;
        for j in 1..=n {
            if g[j] != 0 {
                acc = acc.checked_add(c[n - j].checked_mul(g[j] as i128)?)?;
            }
        }
        if acc % (n as i128) != 0 {
            return None;
        }
        c.push(acc / n as i128);
    }
    Some(c)
}

/// `E4 = 1 + 240 Σ σ₃(n) q^n` below `q^len`.
pub fn eisenstein_e4(len: usize) -> Vec<BigInt> {
    let mut sigma3 = vec![BigInt::zero(); len.max(1)];
    for d in 1..len {
        let d3 = BigInt::from(d as u64).pow(3);
        let mut m = d;
        while m < len {
            sigma3[m] += &d3;
            m += d;
        }
    }
    let mut out: Vec<BigInt> = sigma3.into_iter().map(|s| s * 240).collect();
    if !out.is_empty() {
        out[0] = BigInt::one();
    }
    out.truncate(len);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_euler(len: usize) -> Vec<i64> {
        let mut c = vec![0i64; len];
        c[0] = 1;
        for n in 1..len {
            for i in (n..len).rev() {
                c[i] -= c[i - n];
            }
        }
        c
    }

    #[test]
    fn pentagonal_matches_naive_product() {
        let len = 60;
        let mut dense = vec![0i64; len];
        for (e, s) in pentagonal_terms(len) {
            dense[e] = s;
        }
        assert_eq!(dense, naive_euler(len));
    }

    #[test]
    fn eta_core_single_factor_is_euler_product() {
        let v = eta_core(&[(1, 1)], 40);
        let expected: Vec<BigInt> = naive_euler(40).into_iter().map(BigInt::from).collect();
        assert_eq!(v, expected);
    }

    #[test]
    fn quotient_inverts_product() {
        let a = eta_core(&[(1, 3), (2, -1)], 30);
        let b = eta_core(&[(2, 1)], 30);
        let prod = mul(&a, &b, 30);
        assert_eq!(prod, eta_core(&[(1, 3)], 30));
        assert_eq!(div_unit(&prod, &b, 30), a);
    }

    #[test]
    fn bigint_path_agrees_with_i128_path() {
        let parts = [(1u64, 24i64)];
        let small = eta_core_i128(&parts, 50).unwrap();
        let g = log_derivative(&parts, 50);
        let mut c = vec![BigInt::one()];
        for n in 1..50usize {
            let acc: BigInt = (1..=n).map(|j| &c[n - j] * g[j]).sum();
            c.push(acc / n);
        }
        let small: Vec<BigInt> = small.into_iter().map(BigInt::from).collect();
        assert_eq!(small, c);
    }

    #[test]
    fn e4_prefix() {
        let e = eisenstein_e4(4);
        assert_eq!(e, vec![1, 240, 2160, 6720].into_iter().map(BigInt::from).collect::<Vec<_>>());
    }
}
