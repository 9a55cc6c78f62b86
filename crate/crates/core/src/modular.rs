//! Classical oracles: the Dedekind eta function, E4, Δ and the normalized
//! modular invariant `J = j − 744`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::intseries;
use crate::qseries::{exp, exp_frac, Exponent, QSeries};

fn integer_len(lead: Exponent, trunc: Exponent) -> usize {
    if trunc <= lead {
        0
    } else {
        (trunc - lead).ceil().to_integer() as usize
    }
}

fn from_ints(lead: Exponent, coeffs: Vec<BigInt>, trunc: Exponent) -> QSeries {
    let coeffs = coeffs.into_iter().map(BigRational::from_integer).collect();
    QSeries::new(lead, exp(1), coeffs, trunc).expect("oracle grid is valid")
}

/// `η(q) = q^{1/24} ∏(1 − q^n)` known below `q^trunc`.
pub fn eta(trunc: Exponent) -> QSeries {
    let lead = exp_frac(1, 24);
    let len = integer_len(lead, trunc);
    let mut c = vec![BigInt::zero(); len];
    for (e, s) in intseries::pentagonal_terms(len) {
        c[e] = BigInt::from(s);
    }
    from_ints(lead, c, trunc)
}

/// `E4 = 1 + 240 Σ σ₃(n) q^n` known below `q^trunc`.
pub fn e4(trunc: Exponent) -> QSeries {
    let len = integer_len(exp(0), trunc);
    from_ints(exp(0), intseries::eisenstein_e4(len), trunc)
}

/// `Δ = η^24 = Σ τ(n) q^n` known below `q^trunc`.
pub fn delta(trunc: Exponent) -> QSeries {
    let len = integer_len(exp(1), trunc);
    from_ints(exp(1), intseries::eta_core(&[(1, 24)], len), trunc)
}

/// `τ(1), …, τ(n)` as integers (index 0 holds τ(1)).
pub fn tau(n: usize) -> Vec<BigInt> {
    intseries::eta_core(&[(1, 24)], n)
}

/// Coefficients `[a_0, a_1, …, a_top]` of `J = E4³/Δ − 744 = q^{-1} + Σ a_k q^k`,
/// with `a_0 = 0`.
pub fn j_coefficients(top: usize) -> Vec<BigInt> {
    // q·j = E4³ / (Δ/q), indices 0..=top+1.
    let len = top + 2;
    let e = intseries::eisenstein_e4(len);
    let e2 = intseries::mul(&e, &e, len);
    let e3 = intseries::mul(&e2, &e, len);
    let d = intseries::eta_core(&[(1, 24)], len);
    let qj = intseries::div_unit(&e3, &d, len);
    let mut a: Vec<BigInt> = qj.into_iter().skip(1).collect();
    a[0] -= 744;
    a
}

/// Normalized `J` known below `q^trunc`.
pub fn j_oracle(trunc: Exponent) -> QSeries {
    let top = (trunc - exp(1)).ceil().to_integer().max(0) as usize;
    let mut coeffs = vec![BigInt::from(1)];
    coeffs.extend(j_coefficients(top));
    from_ints(exp(-1), coeffs, trunc)
}
