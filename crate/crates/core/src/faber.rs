//! Faber polynomials of a normalized series `f = q^{-1} + a_0 + Σ a_k q^k`.
//!
//! `F_n` is the unique monic polynomial of degree `n` with
//! `F_n(f) = q^{-n} + O(q)`. Three constructions are provided:
//!
//! * [`faber_by_recursion`]: `F_0 = 1`, `F_1 = w − a_0` and
//!   `F_{n+1} = (w − a_0)F_n − Σ_{k=1}^{n−1} a_k F_{n−k} − (n+1)a_n`;
//! * [`faber_by_elimination`]: cancel negative powers of `q` in `f^n` using
//!   lower powers of `f`;
//! * [`faber_by_determinant`]: `det(zI − A_n)` for the Hessenberg matrix with
//!   rows `[k·a_{k−1}, a_{k−2}, …, a_0, 1]`.
//!
//! [`faber_by_shifted_matrix`] evaluates the same determinant written in the
//! shifted coefficients `b_1 = a_0, b_k = a_{k−1}` with `b_1` standing in for
//! the variable. It differs from `F_n` by the sign `(−1)^n` and the
//! substitution `b_1 = a_0 − z`, both of which it applies explicitly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{format_rat, rat};
use crate::error::{Error, Result};
use crate::qseries::{exp, QSeries};

/// Monic polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaberPolynomial {
    /// Ascending powers: `ascending[k]` multiplies `z^k`.
    ascending: Vec<BigRational>,
}

impl FaberPolynomial {
    fn from_ascending(ascending: Vec<BigRational>) -> Self {
        debug_assert!(ascending.last().is_some_and(|c| c.is_one()));
        FaberPolynomial { ascending }
    }

    pub fn degree(&self) -> usize {
        self.ascending.len() - 1
    }

    /// Coefficients in descending powers, leading 1 first.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.ascending.iter().rev().cloned().collect()
    }

    /// Coefficient of `z^k`.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.ascending.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.ascending.iter().all(|c| c.is_integer())
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.ascending
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * z + c)
    }

    /// `F(f)` by Horner's rule; the result is known below `f.trunc − n + 1`
    /// for a series with a simple pole.
    pub fn compose(&self, f: &QSeries) -> Result<QSeries> {
        let mut acc = QSeries::monomial(BigRational::one(), exp(0), f.trunc() - f.lead_exp())?;
        for c in self.ascending.iter().rev().skip(1) {
            acc = acc.mul(f)?;
            if !c.is_zero() {
                acc = acc.add(&QSeries::monomial(c.clone(), exp(0), acc.trunc())?)?;
            }
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("polynomial serializes")
    }
}

impl std::fmt::Display for FaberPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.degree();
        let mut first = true;
        for k in (0..=n).rev() {
            let c = &self.ascending[k];
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigRational::zero();
            let mag = format_rat(&if neg { -c } else { c.clone() });
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "z".into(),
                _ => format!("z^{k}"),
            };
            match (k, mag.as_str()) {
                (0, _) => write!(f, "{mag}")?,
                (_, "1") => write!(f, "{var}")?,
                _ => write!(f, "{mag}*{var}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for FaberPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("FaberPolynomial", 2)?;
        s.serialize_field("degree", &self.degree())?;
        let coeffs: Vec<String> = self.coeffs().iter().map(format_rat).collect();
        s.serialize_field("coeffs", &coeffs)?;
        s.end()
    }
}

fn require(a: &[BigRational], needed: usize) -> Result<()> {
    if a.len() < needed {
        return Err(Error::InsufficientTruncation {
            needed: format!("a_{}", needed - 1),
            available: format!("a_{}", a.len() as i64 - 1),
        });
    }
    Ok(())
}

/// `F_0, …, F_n` from `[a_0, a_1, …]` (at least `n` entries).
pub fn faber_sequence(a: &[BigRational], n: usize) -> Result<Vec<FaberPolynomial>> {
    faber_sequence_impl(a, n, false)
}

/// `flip` reverses the sign of the `(n+1)a_n` term; used only to exercise the
/// verification suites against a known-bad construction.
pub(crate) fn faber_sequence_impl(a: &[BigRational], n: usize, flip: bool) -> Result<Vec<FaberPolynomial>> {
    require(a, n)?;
    let mut polys: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
    for k in 0..n {
        // F_{k+1} = (w − a_0) F_k − Σ_{j=1}^{k−1} a_j F_{k−j} − (k+1) a_k
        let fk = &polys[k];
        let mut next = vec![BigRational::zero(); k + 2];
        for (i, c) in fk.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * &a[0];
        }
        for j in 1..k {
            if a[j].is_zero() {
                continue;
            }
            for (i, c) in polys[k - j].iter().enumerate() {
                next[i] -= c * &a[j];
            }
        }
        if k >= 1 {
            let term = &a[k] * rat(k as i64 + 1);
            if flip {
                next[0] += term;
            } else {
                next[0] -= term;
            }
        }
        polys.push(next);
    }
    Ok(polys.into_iter().map(FaberPolynomial::from_ascending).collect())
}

pub fn faber_by_recursion(a: &[BigRational], n: usize) -> Result<FaberPolynomial> {
    Ok(faber_sequence(a, n)?.pop().expect("sequence is nonempty"))
}

/// Unique monic `P` of degree `n` with `P(f) = q^{-n} + O(q)`, by eliminating
/// the poles of `f^n` with lower powers of `f`.
pub fn faber_by_elimination(f: &QSeries, n: usize) -> Result<FaberPolynomial> {
    if f.lead_exp() != exp(-1) || f.lead_coeff() != Some(&BigRational::one()) || !f.on_integer_grid() {
        return Err(Error::NotNormalized(format!("{f}")));
    }
    if n == 0 {
        return Ok(FaberPolynomial::from_ascending(vec![BigRational::one()]));
    }
    if f.trunc() < exp(n as i64) {
        return Err(Error::InsufficientTruncation {
            needed: n.to_string(),
            available: f.trunc().to_string(),
        });
    }
    let f = f.truncate(exp(n as i64));
    // powers[k] = f^k, each known at least through q^0.
    let mut powers = vec![QSeries::monomial(BigRational::one(), exp(0), exp(n as i64 + 1))?];
    for k in 1..=n {
        let next = powers[k - 1].mul(&f)?;
        powers.push(next);
    }
    let mut poly = vec![BigRational::zero(); n + 1];
    poly[n] = BigRational::one();
    let mut residual = powers[n].clone();
    for k in (0..n).rev() {
        let c = residual.coeff_int(-(k as i64))?;
        if !c.is_zero() {
            residual = residual.sub(&powers[k].scale(&c))?;
            poly[k] -= &c;
        }
    }
    Ok(FaberPolynomial::from_ascending(poly))
}

/// Hessenberg matrix with rows `[k·a_{k−1}, a_{k−2}, …, a_0]` and ones on the
/// superdiagonal.
pub fn faber_matrix(a: &[BigRational], n: usize) -> Vec<Vec<BigRational>> {
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        let row = &mut m[k - 1];
        row[0] = &a[k - 1] * rat(k as i64);
        for j in 2..=k {
            row[j - 1] = a[k - j].clone();
        }
        if k < n {
            row[k] = BigRational::one();
        }
    }
    m
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pivot;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// Monic degree-`n` polynomial through `(x_i, y_i)`, `i = 0..=n`, by Lagrange
/// interpolation.
fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Vec<BigRational> {
    let n = xs.len();
    let mut out = vec![BigRational::zero(); n];
    for i in 0..n {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &xs[j];
            }
            basis = next;
            denom *= &xs[i] - &xs[j];
        }
        let scale = &ys[i] / denom;
        for (k, c) in basis.iter().enumerate() {
            out[k] += c * &scale;
        }
    }
    out
}

fn sample_points(n: usize) -> Vec<BigRational> {
    (0..=n as i64).map(rat).collect()
}

/// `det(zI − A_n)` recovered from its values at `z = 0, …, n`.
pub fn faber_by_determinant(a: &[BigRational], n: usize) -> Result<FaberPolynomial> {
    require(a, n)?;
    let base = faber_matrix(a, n);
    let xs = sample_points(n);
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|z| {
            let mut m: Vec<Vec<BigRational>> = base.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += z;
            }
            determinant(m)
        })
        .collect();
    Ok(FaberPolynomial::from_ascending(interpolate(&xs, &ys)))
}

/// Matrix in the shifted coefficients `b_1, …, b_n`: row `k` is
/// `[k·b_k, b_{k−1}, …, b_1]` followed by a superdiagonal 1.
pub fn shifted_matrix(b: &[BigRational], n: usize) -> Vec<Vec<BigRational>> {
    // b[0] holds b_1.
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        let row = &mut m[k - 1];
        row[0] = &b[k - 1] * rat(k as i64);
        for j in 2..=k {
            row[j - 1] = b[k - j].clone();
        }
        if k < n {
            row[k] = BigRational::one();
        }
    }
    m
}

/// `(−1)^n det(A_n(b))` with `b_1 = a_0 − z` and `b_k = a_{k−1}`, as a
/// polynomial in `z`.
pub fn faber_by_shifted_matrix(a: &[BigRational], n: usize) -> Result<FaberPolynomial> {
    require(a, n)?;
    let xs = sample_points(n);
    let sign = if n.is_multiple_of(2) { BigRational::one() } else { -BigRational::one() };
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|z| {
            let mut b: Vec<BigRational> = a[..n].to_vec();
            b[0] = &a[0] - z;
            &sign * determinant(shifted_matrix(&b, n))
        })
        .collect();
    Ok(FaberPolynomial::from_ascending(interpolate(&xs, &ys)))
}

/// Same construction without the sign and substitution: `det(A_n(b))` with
/// `b_1` read as the variable. Kept so the discrepancy stays visible.
pub fn shifted_matrix_literal(a: &[BigRational], n: usize) -> Result<Vec<BigRational>> {
    require(a, n)?;
    let xs = sample_points(n);
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|z| {
            let mut b: Vec<BigRational> = a[..n].to_vec();
            b[0] = z.clone();
            determinant(shifted_matrix(&b, n))
        })
        .collect();
    let mut p = interpolate(&xs, &ys);
    p.reverse();
    Ok(p)
}

fn truncated_exp(g: &[BigRational], order: usize) -> Vec<BigRational> {
    // e' = g' e, i.e. n e_n = Σ_{k=1}^{n} k g_k e_{n−k}.
    let mut e = vec![BigRational::one()];
    for n in 1..=order {
        let mut acc = BigRational::zero();
        for k in 1..=n {
            if let Some(gk) = g.get(k) {
                acc += gk * rat(k as i64) * &e[n - k];
            }
        }
        e.push(acc / rat(n as i64));
    }
    e
}

fn power_sums(x: &[BigRational], order: usize) -> Vec<BigRational> {
    let mut p = vec![BigRational::zero(); order + 1];
    for xi in x {
        let mut pw = BigRational::one();
        for pn in p.iter_mut().skip(1) {
            pw *= xi;
            *pn += &pw;
        }
    }
    p
}

fn product_series(x: &[BigRational], sign: i64, order: usize) -> Vec<BigRational> {
    // ∏ (1 + sign·x_i t) mod t^{order+1}
    let mut out = vec![BigRational::zero(); order + 1];
    out[0] = BigRational::one();
    for xi in x {
        let c = xi * rat(sign);
        for k in (1..=order).rev() {
            let add = &out[k - 1] * &c;
            out[k] += add;
        }
    }
    out
}

fn inverse_series(a: &[BigRational], order: usize) -> Vec<BigRational> {
    let mut b = vec![a[0].recip()];
    for n in 1..=order {
        let mut acc = BigRational::zero();
        for k in 1..=n {
            acc -= &a[k] * &b[n - k];
        }
        b.push(acc / &a[0]);
    }
    b
}

/// Checks `∏(1 − x_i t)^{-1} = exp(Σ p_n t^n / n)` and
/// `∏(1 + x_i t) = exp(Σ (−1)^{n−1} p_n t^n / n)` through `t^order`, where
/// `p_n = Σ x_i^n`.
pub fn symmetric_function_check(x: &[BigRational], order: usize) -> bool {
    let p = power_sums(x, order);
    let g_h: Vec<BigRational> = p.iter().enumerate().map(|(n, pn)| if n == 0 { BigRational::zero() } else { pn / rat(n as i64) }).collect();
    let g_e: Vec<BigRational> = g_h
        .iter()
        .enumerate()
        .map(|(n, g)| if n % 2 == 0 { -g } else { g.clone() })
        .collect();
    let complete = inverse_series(&product_series(x, -1, order), order);
    let elementary = product_series(x, 1, order);
    complete == truncated_exp(&g_h, order) && elementary == truncated_exp(&g_e, order)
}

/// The elementary identity with every exponent term negated,
/// `∏(1 + x_i t) = exp(−Σ p_n t^n / n)`; false as soon as some `x_i ≠ 0`.
pub fn elementary_identity_all_negative(x: &[BigRational], order: usize) -> bool {
    let p = power_sums(x, order);
    let g: Vec<BigRational> = p.iter().enumerate().map(|(n, pn)| if n == 0 { BigRational::zero() } else { -pn / rat(n as i64) }).collect();
    product_series(x, 1, order) == truncated_exp(&g, order)
}

/// `[a_0, …, a_top]` of a normalized series.
pub fn normalized_prefix(f: &QSeries, top: usize) -> Result<Vec<BigRational>> {
    let mut a = f.normalized_coefficients()?;
    if a.len() < top + 1 {
        return Err(Error::InsufficientTruncation {
            needed: (top + 1).to_string(),
            available: f.trunc().to_string(),
        });
    }
    a.truncate(top + 1);
    Ok(a)
}

pub fn integer_coeffs(a: &[i64]) -> Vec<BigRational> {
    a.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::FunctionSpec;
    use crate::modular::j_oracle;
    use proptest::prelude::*;

    fn j_prefix(top: usize) -> Vec<BigRational> {
        normalized_prefix(&j_oracle(exp(top as i64 + 1)), top).unwrap()
    }

    #[test]
    fn low_degree_closed_forms() {
        let a = j_prefix(4);
        let f2 = faber_by_recursion(&a, 2).unwrap();
        assert_eq!(f2.coeffs(), integer_coeffs(&[1, 0, -2 * 196884]));
        let f3 = faber_by_recursion(&a, 3).unwrap();
        assert_eq!(f3.coeffs(), integer_coeffs(&[1, 0, -3 * 196884, -3 * 21493760]));
        assert_eq!(faber_by_recursion(&a, 0).unwrap().coeffs(), integer_coeffs(&[1]));
        assert_eq!(faber_by_recursion(&a, 1).unwrap().coeffs(), integer_coeffs(&[1, 0]));
    }

    #[test]
    fn fiction_minus_one() {
        let a = integer_coeffs(&[0, -1, 0]);
        assert_eq!(faber_by_recursion(&a, 2).unwrap().coeffs(), integer_coeffs(&[1, 0, 2]));
        let zero = integer_coeffs(&[0, 0, 0]);
        assert_eq!(faber_by_determinant(&zero, 2).unwrap().coeffs(), integer_coeffs(&[1, 0, 0]));
    }

    #[test]
    fn elimination_on_j() {
        let j = j_oracle(exp(13));
        let a = j_prefix(12);
        for n in 0..=12 {
            assert_eq!(faber_by_elimination(&j, n).unwrap(), faber_by_recursion(&a, n).unwrap(), "n = {n}");
        }
        assert!(faber_by_elimination(&j_oracle(exp(3)), 4).is_err());
    }

    #[test]
    fn determinant_on_j() {
        let a = j_prefix(12);
        for n in 1..=12 {
            let r = faber_by_recursion(&a, n).unwrap();
            assert_eq!(faber_by_determinant(&a, n).unwrap(), r);
            assert_eq!(faber_by_shifted_matrix(&a, n).unwrap(), r);
        }
    }

    #[test]
    fn shifted_matrix_without_sign_disagrees_at_odd_degree() {
        let a = j_prefix(3);
        let lit = shifted_matrix_literal(&a, 3).unwrap();
        let f3 = faber_by_recursion(&a, 3).unwrap().coeffs();
        assert_ne!(lit, f3);
        // (−1)^n F_n(−z): odd positions in descending order change sign.
        let neg: Vec<BigRational> = f3.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect();
        assert_eq!(lit, neg);
    }

    #[test]
    fn poles_are_killed() {
        for spec in [FunctionSpec::J, FunctionSpec::two_b(), FunctionSpec::Fiction(-1), FunctionSpec::Fiction(1)] {
            let f = spec.realize(exp(20)).unwrap();
            for n in 1..=8 {
                let p = faber_by_recursion(&f.normalized_coefficients().unwrap(), n).unwrap();
                let g = p.compose(&f).unwrap();
                let rest = g.sub(&QSeries::monomial(BigRational::one(), exp(-(n as i64)), g.trunc()).unwrap()).unwrap();
                assert!(rest.lead_exp() > exp(0), "{spec} n = {n}: {rest}");
            }
        }
    }

    #[test]
    fn symmetric_functions() {
        assert!(symmetric_function_check(&integer_coeffs(&[1]), 5));
        assert!(symmetric_function_check(&integer_coeffs(&[1, 2]), 6));
        assert!(symmetric_function_check(&[], 3));
        assert!(symmetric_function_check(&[rat(3), BigRational::new(1.into(), 2.into()), rat(-4)], 7));
        assert!(!elementary_identity_all_negative(&integer_coeffs(&[1, 2]), 3));
        assert!(elementary_identity_all_negative(&[], 3));
    }

    #[test]
    fn json_shape() {
        let p = faber_by_recursion(&integer_coeffs(&[0, 5, 0]), 2).unwrap();
        assert_eq!(p.to_json(), serde_json::json!({"degree": 2, "coeffs": ["1", "0", "-10"]}));
        assert_eq!(p.to_string(), "z^2 - 10");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn three_constructions_agree(tail in proptest::collection::vec(-50i64..=50, 12), n in 1usize..=10) {
            let mut a = vec![0i64];
            a.extend(tail);
            let a = integer_coeffs(&a);
            let f = QSeries::from_normalized(&a);
            let r = faber_by_recursion(&a, n).unwrap();
            prop_assert!(r.is_integral());
            prop_assert_eq!(&faber_by_elimination(&f, n).unwrap(), &r);
            prop_assert_eq!(&faber_by_determinant(&a, n).unwrap(), &r);
        }

        #[test]
        fn isobaric(tail in proptest::collection::vec(-20i64..=20, 7), lambda in -5i64..=5, n in 1usize..=6) {
            prop_assume!(lambda != 0);
            let mut a = vec![0i64];
            a.extend(tail);
            let a = integer_coeffs(&a);
            let l = rat(lambda);
            let scaled: Vec<BigRational> = a.iter().enumerate().map(|(k, c)| c * num_traits::pow(l.clone(), k + 1)).collect();
            let p = faber_by_recursion(&a, n).unwrap();
            let ps = faber_by_recursion(&scaled, n).unwrap();
            for z in [-3i64, 0, 2, 7] {
                let z = rat(z);
                prop_assert_eq!(ps.eval(&(&z * &l)), p.eval(&z) * num_traits::pow(l.clone(), n));
            }
        }
    }
}
