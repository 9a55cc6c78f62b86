//! Exact truncated Laurent series in the nome `q`.
//!
//! A [`QSeries`] stores coefficients on an arithmetic exponent grid
//! `lead_exp + i * step` together with an explicit truncation order: every
//! exponent at or above `trunc` is *unknown*, never silently zero. All
//! operations propagate the truncation so that a reported coefficient never
//! depends on information the operands did not carry.
//!
//! Exponents are rationals whose denominators divide
//! [`EXPONENT_DENOMINATOR`] (24, enough for `η(q) = q^{1/24}…`). The
//! `*_on_grid` variants accept a larger denominator bound for callers that
//! need a refined grid temporarily.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{common_denominator, format_rat, parse_rat};
use crate::error::{Error, Result};

/// Rational exponent of `q`.
pub type Exponent = Ratio<i64>;

/// Every exponent denominator divides this bound unless a caller opts into a
/// refined grid explicitly.
pub const EXPONENT_DENOMINATOR: i64 = 24;

pub fn exp(n: i64) -> Exponent {
    Exponent::from_integer(n)
}

pub fn exp_frac(n: i64, d: i64) -> Exponent {
    Exponent::new(n, d)
}

fn check_denominator(x: Exponent, limit: i64, what: &str) -> Result<()> {
    if limit % x.denom() != 0 {
        return Err(Error::IncompatibleGrid(format!(
            "{what} {x} has denominator {} which does not divide {limit}",
            x.denom()
        )));
    }
    Ok(())
}

/// gcd of two non-negative rationals; `gcd(0, x) = x`.
fn exp_gcd(a: Exponent, b: Exponent) -> Exponent {
    let (a, b) = (a.abs(), b.abs());
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    let l = a.denom().lcm(b.denom());
    let an = a.numer() * (l / a.denom());
    let bn = b.numer() * (l / b.denom());
    Exponent::new(an.gcd(&bn), l)
}

/// Number of grid points `lead + i * step` strictly below `trunc`.
fn grid_len(lead: Exponent, step: Exponent, trunc: Exponent) -> usize {
    if trunc <= lead {
        return 0;
    }
    ((trunc - lead) / step).ceil().to_integer() as usize
}

/// Grid index of `e` relative to `lead` with spacing `step`, if `e` is a grid
/// point at or above `lead`.
fn grid_index(lead: Exponent, step: Exponent, e: Exponent) -> Option<usize> {
    if e < lead {
        return None;
    }
    let q = (e - lead) / step;
    q.is_integer().then(|| q.to_integer() as usize)
}

/// Exact truncated Laurent series `Σ c_i q^{lead_exp + i·step} + O(q^trunc)`.
#[derive(Clone, Debug)]
pub struct QSeries {
    lead_exp: Exponent,
    step: Exponent,
    coeffs: Vec<BigRational>,
    trunc: Exponent,
}

impl QSeries {
    /// Builds a series from coefficients on the grid `lead_exp + i·step`.
    ///
    /// `coeffs` must cover every grid point below `trunc`; points at or above
    /// `trunc` are discarded. Leading zeros are stripped.
    pub fn new(
        lead_exp: Exponent,
        step: Exponent,
        coeffs: Vec<BigRational>,
        trunc: Exponent,
    ) -> Result<Self> {
        Self::new_on_grid(lead_exp, step, coeffs, trunc, EXPONENT_DENOMINATOR)
    }

    /// As [`QSeries::new`] with a caller-chosen exponent denominator bound.
    pub fn new_on_grid(
        lead_exp: Exponent,
        step: Exponent,
        coeffs: Vec<BigRational>,
        trunc: Exponent,
        denominator_limit: i64,
    ) -> Result<Self> {
        if step <= Exponent::zero() {
            return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
        }
        check_denominator(lead_exp, denominator_limit, "lead exponent")?;
        check_denominator(step, denominator_limit, "step")?;
        check_denominator(trunc, denominator_limit, "truncation")?;
        let needed = grid_len(lead_exp, step, trunc);
        if coeffs.len() < needed {
            let available = lead_exp + step * exp(coeffs.len() as i64);
            return Err(Error::InsufficientTruncation {
                needed: trunc.to_string(),
                available: available.to_string(),
            });
        }
        Ok(Self::build(lead_exp, step, coeffs, trunc))
    }

    /// Series `q^{lead} (c_0 + c_1 q + c_2 q^2 + …)` known exactly up to the
    /// last supplied coefficient.
    pub fn from_coeffs(lead_exp: Exponent, coeffs: Vec<BigRational>) -> Result<Self> {
        let trunc = lead_exp + exp(coeffs.len() as i64);
        Self::new(lead_exp, exp(1), coeffs, trunc)
    }

    pub fn from_integers<I, T>(lead_exp: i64, coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let coeffs: Vec<BigRational> = coeffs
            .into_iter()
            .map(|c| BigRational::from_integer(c.into()))
            .collect();
        Self::from_coeffs(exp(lead_exp), coeffs).expect("integer grid is always valid")
    }

    /// Normalized series `q^{-1} + Σ_{k≥1} a_k q^k` from `[a_0, a_1, …, a_K]`
    /// (index 0 is the constant term), known below `q^{K+1}`.
    pub fn from_normalized(a: &[BigRational]) -> Self {
        let mut coeffs = Vec::with_capacity(a.len() + 1);
        coeffs.push(BigRational::one());
        coeffs.extend(a.iter().cloned());
        Self::from_coeffs(exp(-1), coeffs).expect("integer grid is always valid")
    }

    /// The zero series known below `q^trunc`.
    pub fn zero(trunc: Exponent) -> Self {
        Self::build(trunc, exp(1), Vec::new(), trunc)
    }

    /// `c·q^e + O(q^trunc)`.
    pub fn monomial(c: BigRational, e: Exponent, trunc: Exponent) -> Result<Self> {
        check_denominator(e, EXPONENT_DENOMINATOR, "exponent")?;
        check_denominator(trunc, EXPONENT_DENOMINATOR, "truncation")?;
        if e >= trunc {
            return Ok(Self::zero(trunc));
        }
        Ok(Self::build(e, exp(1), vec![c], trunc))
    }

    fn build(mut lead: Exponent, step: Exponent, mut coeffs: Vec<BigRational>, trunc: Exponent) -> Self {
        coeffs.truncate(grid_len(lead, step, trunc));
        let first = coeffs.iter().position(|c| !c.is_zero());
        match first {
            None => {
                coeffs.clear();
                lead = trunc;
            }
            Some(k) => {
                coeffs.drain(..k);
                lead += step * exp(k as i64);
            }
        }
        QSeries { lead_exp: lead, step, coeffs, trunc }
    }

    pub fn lead_exp(&self) -> Exponent {
        self.lead_exp
    }

    pub fn step(&self) -> Exponent {
        self.step
    }

    pub fn trunc(&self) -> Exponent {
        self.trunc
    }

    /// Coefficients on the grid starting at the lead exponent.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// True when no nonzero coefficient is known below the truncation.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead_coeff(&self) -> Option<&BigRational> {
        self.coeffs.first()
    }

    /// Nonzero terms as `(exponent, coefficient)` pairs in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &BigRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.lead_exp + self.step * exp(i as i64), c))
    }

    /// Coefficient of `q^e`. Errors when `e` is at or beyond the truncation.
    pub fn coeff(&self, e: Exponent) -> Result<BigRational> {
        if e >= self.trunc {
            return Err(Error::InsufficientTruncation {
                needed: e.to_string(),
                available: self.trunc.to_string(),
            });
        }
        Ok(grid_index(self.lead_exp, self.step, e)
            .and_then(|i| self.coeffs.get(i).cloned())
            .unwrap_or_else(BigRational::zero))
    }

    pub fn coeff_int(&self, n: i64) -> Result<BigRational> {
        self.coeff(exp(n))
    }

    /// The same series with the truncation lowered to `min(trunc, t)`.
    pub fn truncate(&self, t: Exponent) -> Self {
        if t >= self.trunc {
            return self.clone();
        }
        Self::build(self.lead_exp, self.step, self.coeffs.clone(), t)
    }

    /// True when every nonzero exponent is an integer.
    pub fn on_integer_grid(&self) -> bool {
        self.terms().all(|(e, _)| e.is_integer())
    }

    /// Predicate for the normalized shape `q^{-1} + Σ_{k≥1} a_k q^k`.
    pub fn is_normalized(&self) -> bool {
        self.check_normalized().is_ok()
    }

    fn check_normalized(&self) -> Result<()> {
        if self.lead_exp != exp(-1) || self.lead_coeff() != Some(&BigRational::one()) {
            return Err(Error::NotNormalized(format!("leading term is not q^-1: {self}")));
        }
        if self.trunc <= Exponent::zero() {
            return Err(Error::NotNormalized("constant term is unknown".into()));
        }
        if !self.on_integer_grid() {
            return Err(Error::NotNormalized("non-integral exponent present".into()));
        }
        if !self.coeff_int(0)?.is_zero() {
            return Err(Error::NotNormalized("constant term is nonzero".into()));
        }
        Ok(())
    }

    /// `[a_0 = 0, a_1, …, a_K]` for a normalized series, where `K` is the
    /// largest integer exponent below the truncation.
    pub fn normalized_coefficients(&self) -> Result<Vec<BigRational>> {
        self.check_normalized()?;
        let top = (self.trunc - exp(1)).ceil().to_integer();
        (0..=top).map(|n| self.coeff_int(n)).collect()
    }

    /// Largest integer `K` with `q^K` known.
    pub fn last_known_integer_exponent(&self) -> i64 {
        (self.trunc - exp(1)).ceil().to_integer()
    }

    pub fn neg(&self) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::build(
            self.lead_exp,
            self.step,
            self.coeffs.iter().map(|x| x * c).collect(),
            self.trunc,
        )
    }

    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        self.add_on_grid(other, EXPONENT_DENOMINATOR)
    }

    pub fn sub(&self, other: &QSeries) -> Result<QSeries> {
        self.add(&other.neg())
    }

    /// Coefficientwise sum on the common refinement of both grids;
    /// `trunc = min(self.trunc, other.trunc)`.
    pub fn add_on_grid(&self, other: &QSeries, denominator_limit: i64) -> Result<QSeries> {
        let trunc = self.trunc.min(other.trunc);
        if self.is_zero() {
            return Ok(other.truncate(trunc));
        }
        if other.is_zero() {
            return Ok(self.truncate(trunc));
        }
        let step = exp_gcd(exp_gcd(self.step, other.step), self.lead_exp - other.lead_exp);
        check_denominator(step, denominator_limit, "common step")?;
        let lead = self.lead_exp.min(other.lead_exp);
        let len = grid_len(lead, step, trunc);
        let mut out = vec![BigRational::zero(); len];
        for s in [self, other] {
            let offset = grid_index(lead, step, s.lead_exp).expect("lead lies on common grid");
            let stride = (s.step / step).to_integer() as usize;
            for (i, c) in s.coeffs.iter().enumerate() {
                let k = offset + i * stride;
                if k >= len {
                    break;
                }
                out[k] += c;
            }
        }
        Ok(Self::build(lead, step, out, trunc))
    }

    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        self.mul_on_grid(other, EXPONENT_DENOMINATOR)
    }

    /// Cauchy product. A factor known below `q^t` with lead `q^l` contributes
    /// `t + l'` to the product's truncation, where `l'` is the other lead.
    pub fn mul_on_grid(&self, other: &QSeries, denominator_limit: i64) -> Result<QSeries> {
        let trunc = (self.trunc + other.lead_exp).min(other.trunc + self.lead_exp);
        let lead = self.lead_exp + other.lead_exp;
        if self.is_zero() || other.is_zero() {
            check_denominator(trunc, denominator_limit, "truncation")?;
            return Ok(Self::zero(trunc));
        }
        let step = exp_gcd(self.step, other.step);
        check_denominator(step, denominator_limit, "common step")?;
        check_denominator(lead, denominator_limit, "lead exponent")?;
        let len = grid_len(lead, step, trunc);
        let r1 = (self.step / step).to_integer() as usize;
        let r2 = (other.step / step).to_integer() as usize;

        // Integer convolution after clearing denominators.
        let d1 = common_denominator(&self.coeffs);
        let d2 = common_denominator(&other.coeffs);
        let a = integerize(&self.coeffs, &d1);
        let b = integerize(&other.coeffs, &d2);
        let mut out = vec![BigInt::zero(); len];
        for (i, x) in a.iter().enumerate() {
            let base = i * r1;
            if base >= len {
                break;
            }
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let k = base + j * r2;
                if k >= len {
                    break;
                }
                if !y.is_zero() {
                    out[k] += x * y;
                }
            }
        }
        let den = d1 * d2;
        let coeffs = out
            .into_iter()
            .map(|c| BigRational::new(c, den.clone()))
            .collect();
        Ok(Self::build(lead, step, coeffs, trunc))
    }

    /// Multiplicative inverse. The relative precision `trunc - lead_exp` is
    /// preserved.
    pub fn invert(&self) -> Result<QSeries> {
        let c0 = self.lead_coeff().ok_or(Error::ZeroInversion)?;
        let lead = -self.lead_exp;
        let trunc = self.trunc - self.lead_exp * exp(2);
        let len = grid_len(lead, self.step, trunc);
        let d = common_denominator(&self.coeffs);
        let a = integerize(&self.coeffs, &d);
        let a0 = &a[0];
        let mut out: Vec<BigRational> = Vec::with_capacity(len);
        if a0.abs().is_one() {
            // Unit leading coefficient: the inverse of `a` stays integral.
            let mut b: Vec<BigInt> = Vec::with_capacity(len);
            for n in 0..len {
                let mut acc = if n == 0 { BigInt::one() } else { BigInt::zero() };
                for i in 1..=n.min(a.len() - 1) {
                    if !a[i].is_zero() {
                        acc -= &a[i] * &b[n - i];
                    }
                }
                b.push(acc * a0);
            }
            out.extend(b.into_iter().map(|x| BigRational::from_integer(x * &d)));
        } else {
            let inv0 = c0.recip();
            for n in 0..len {
                let mut acc = if n == 0 { BigRational::one() } else { BigRational::zero() };
                for i in 1..=n.min(self.coeffs.len() - 1) {
                    if !self.coeffs[i].is_zero() {
                        acc -= &self.coeffs[i] * &out[n - i];
                    }
                }
                out.push(acc * &inv0);
            }
        }
        Ok(Self::build(lead, self.step, out, trunc))
    }

    /// Integer power; negative exponents go through [`QSeries::invert`].
    pub fn pow(&self, n: i64) -> Result<QSeries> {
        if n < 0 {
            return self.invert()?.pow(-n);
        }
        if n == 0 {
            if self.is_zero() {
                return Err(Error::InvalidArgument("0^0 of an unknown series".into()));
            }
            let t = self.trunc - self.lead_exp;
            return QSeries::monomial(BigRational::one(), exp(0), t);
        }
        let mut result: Option<QSeries> = None;
        let mut base = self.clone();
        let mut e = n;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(result.expect("n >= 1"))
    }

    /// `q ↦ q^k` for a positive rational `k`.
    pub fn substitute(&self, k: Exponent) -> Result<QSeries> {
        self.substitute_on_grid(k, EXPONENT_DENOMINATOR)
    }

    pub fn substitute_on_grid(&self, k: Exponent, denominator_limit: i64) -> Result<QSeries> {
        if k <= Exponent::zero() {
            return Err(Error::InvalidArgument(format!("substitution power must be positive, got {k}")));
        }
        let lead = self.lead_exp * k;
        let step = self.step * k;
        let trunc = self.trunc * k;
        check_denominator(step, denominator_limit, "step")?;
        check_denominator(lead, denominator_limit, "lead exponent")?;
        check_denominator(trunc, denominator_limit, "truncation")?;
        Ok(QSeries { lead_exp: lead, step, coeffs: self.coeffs.clone(), trunc })
    }

    /// Multiplies the coefficient at exponent `e` by `w(e)`.
    pub fn map_terms<F>(&self, mut w: F) -> QSeries
    where
        F: FnMut(Exponent, &BigRational) -> BigRational,
    {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| w(self.lead_exp + self.step * exp(i as i64), c))
            .collect();
        Self::build(self.lead_exp, self.step, coeffs, self.trunc)
    }
}

fn integerize(coeffs: &[BigRational], den: &BigInt) -> Vec<BigInt> {
    coeffs
        .iter()
        .map(|c| c.numer() * (den / c.denom()))
        .collect()
}

impl PartialEq for QSeries {
    /// Equal truncation and equal nonzero terms; grids may differ.
    fn eq(&self, other: &Self) -> bool {
        self.trunc == other.trunc && self.terms().eq(other.terms())
    }
}

impl Eq for QSeries {}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = format_rat(&c.abs());
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "q^{e}")?;
            } else {
                write!(f, "{mag}*q^{e}")?;
            }
        }
        if first {
            write!(f, "O(q^{})", self.trunc)
        } else {
            write!(f, " + O(q^{})", self.trunc)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct QSeriesJson {
    lead_exp: String,
    step: String,
    trunc: String,
    coeffs: Vec<String>,
}

fn parse_exponent(s: &str) -> Result<Exponent> {
    let r = parse_rat(s)?;
    let n: i64 = r.numer().try_into().map_err(|_| Error::Parse(format!("exponent {s} too large")))?;
    let d: i64 = r.denom().try_into().map_err(|_| Error::Parse(format!("exponent {s} too large")))?;
    Ok(Exponent::new(n, d))
}

impl QSeries {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("series serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        QSeriesJson {
            lead_exp: self.lead_exp.to_string(),
            step: self.step.to_string(),
            trunc: self.trunc.to_string(),
            coeffs: self.coeffs.iter().map(format_rat).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = QSeriesJson::deserialize(deserializer)?;
        let lead = parse_exponent(&raw.lead_exp).map_err(D::Error::custom)?;
        let step = parse_exponent(&raw.step).map_err(D::Error::custom)?;
        let trunc = parse_exponent(&raw.trunc).map_err(D::Error::custom)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        QSeries::new(lead, step, coeffs, trunc).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn s(lead: i64, cs: &[i64]) -> QSeries {
        QSeries::from_integers(lead, cs.iter().copied())
    }

    #[test]
    fn doubling_and_identity() {
        let a = s(-1, &[1, 0, 0]);
        assert_eq!(a.add(&a).unwrap(), s(-1, &[2, 0, 0]));
        let z = QSeries::zero(exp(5));
        let f = s(-1, &[1, 0, 7, 3]);
        assert_eq!(f.add(&z).unwrap(), f);
    }

    #[test]
    fn cancelling_the_pole() {
        let j = s(-1, &[1, 0, 196884]);
        let minus = s(-1, &[-1, 0, 0]);
        let sum = j.add(&minus).unwrap();
        assert_eq!(sum.lead_exp(), exp(1));
        assert_eq!(sum.coeff_int(1).unwrap(), rat(196884));
        assert_eq!(sum.trunc(), exp(2));
    }

    #[test]
    fn product_truncation_accounts_for_pole() {
        let a = s(-1, &[1, 0, 5]); // q^-1 + 5q + O(q^2)
        let sq = a.mul(&a).unwrap();
        // min(2 + (-1), 2 + (-1)) = 1
        assert_eq!(sq.trunc(), exp(1));
        assert_eq!(sq.coeff_int(-2).unwrap(), rat(1));
        assert_eq!(sq.coeff_int(0).unwrap(), rat(10));
        assert!(sq.coeff_int(1).is_err());
    }

    #[test]
    fn binomial_square() {
        // (q^-1 + c q)^2 with exact knowledge through q^3
        let c = 7;
        let a = s(-1, &[1, 0, c, 0, 0, 0]);
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.coeff_int(-2).unwrap(), rat(1));
        assert_eq!(sq.coeff_int(0).unwrap(), rat(2 * c));
        assert_eq!(sq.coeff_int(2).unwrap(), rat(c * c));
        assert_eq!(sq.coeff_int(1).unwrap(), rat(0));
    }

    #[test]
    fn inverse_and_geometric_series() {
        let one_minus_q = s(0, &[1, -1, 0, 0, 0, 0]);
        let inv = one_minus_q.invert().unwrap();
        for n in 0..6 {
            assert_eq!(inv.coeff_int(n).unwrap(), rat(1));
        }
        assert_eq!(inv.trunc(), exp(6));
        let pole = s(-1, &[1]);
        let q = s(1, &[1]);
        assert_eq!(pole.mul(&q).unwrap().coeff_int(0).unwrap(), rat(1));
    }

    #[test]
    fn rational_inverse() {
        let a = s(0, &[3, 1, 0, 0]);
        let inv = a.invert().unwrap();
        let prod = a.mul(&inv).unwrap();
        assert_eq!(prod, QSeries::from_integers(0, [1, 0, 0, 0]));
        assert_eq!(inv.coeff_int(1).unwrap(), BigRational::new((-1).into(), 9.into()));
    }

    #[test]
    fn zero_inversion_fails() {
        assert_eq!(QSeries::zero(exp(3)).invert(), Err(Error::ZeroInversion));
    }

    #[test]
    fn substitution_scales_exponents() {
        let a = s(-1, &[1, 0, 1, 0]);
        let b = a.substitute(exp(2)).unwrap();
        assert_eq!(b.coeff_int(-2).unwrap(), rat(1));
        assert_eq!(b.coeff_int(2).unwrap(), rat(1));
        assert_eq!(b.coeff_int(0).unwrap(), rat(0));
        assert_eq!(b.trunc(), exp(6));
        let half = a.substitute(exp_frac(1, 2)).unwrap();
        assert_eq!(half.coeff(exp_frac(-1, 2)).unwrap(), rat(1));
        assert!(a.substitute(exp_frac(1, 48)).is_err());
        assert!(a.substitute_on_grid(exp_frac(1, 48), 48).is_ok());
    }

    #[test]
    fn incompatible_grids_are_rejected() {
        let a = QSeries::new(exp_frac(1, 24), exp(1), vec![rat(1), rat(0)], exp(2)).unwrap();
        let b = QSeries::new(exp_frac(1, 16), exp(1), vec![rat(1), rat(0)], exp(2));
        assert!(matches!(b, Err(Error::IncompatibleGrid(_))));
        let b = QSeries::new_on_grid(exp_frac(1, 16), exp(1), vec![rat(1), rat(0)], exp(2), 48).unwrap();
        // common step 1/48 does not divide into 24ths
        assert!(matches!(a.add(&b), Err(Error::IncompatibleGrid(_))));
        assert!(a.add_on_grid(&b, 48).is_ok());
    }

    #[test]
    fn coefficients_beyond_trunc_are_unknown() {
        let a = s(0, &[1, 2]);
        assert!(a.coeff_int(2).is_err());
        assert_eq!(a.coeff_int(-5).unwrap(), rat(0));
        assert!(QSeries::new(exp(0), exp(1), vec![rat(1)], exp(3)).is_err());
    }

    #[test]
    fn normalized_predicate() {
        assert!(s(-1, &[1, 0, 1]).is_normalized());
        assert!(!s(-1, &[1, 3, 1]).is_normalized());
        assert!(!s(-2, &[1, 0, 1]).is_normalized());
        assert!(!s(-1, &[1]).is_normalized());
    }

    #[test]
    fn json_shape() {
        let a = QSeries::new(exp_frac(1, 24), exp(1), vec![rat(1), rat(-1), rat(-1)], exp(3)).unwrap();
        let v = a.to_json();
        assert_eq!(v["lead_exp"], "1/24");
        assert_eq!(v["step"], "1");
        assert_eq!(v["coeffs"][1], "-1");
        assert_eq!(QSeries::from_json(&v).unwrap(), a);
    }

    #[test]
    fn display() {
        let a = s(-1, &[1, 0, -3]);
        assert_eq!(a.to_string(), "q^-1 - 3*q^1 + O(q^2)");
    }
}
