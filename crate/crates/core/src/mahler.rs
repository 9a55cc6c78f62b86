//! Coefficient recurrences at p = 2.
//!
//! With `f = q^{-1} + Σ a_k q^k` and `g = f^{(2)} = q^{-1} + Σ b_k q^k`, the
//! three values `f(z/2)`, `f((z+1)/2)`, `g(2z)` satisfy
//!
//! ```text
//! e1 = f(z/2) + f((z+1)/2) + g(2z)                        = f² − 2a_1
//! e2 = f(z/2)f((z+1)/2) + g(2z)(f(z/2) + f((z+1)/2))      = 2a_2 f − g + 2(a_4 − a_1)
//! ```
//!
//! Writing `U = Σ a_{2n} q^n` and `W = Σ a_{2n−1} q^n` (so `W_0 = 1`) the
//! `q^n` coefficients of `LHS − RHS` are
//!
//! ```text
//! S(n) = 2a_{2n} + [n even] b_{n/2} − [f²]_n + 2a_1[n = 0]
//! P(n) = [U²]_n − [W²]_{n+1} + 2[U·g(q²)]_n − 2a_2 a_n + b_n        (n ≥ 1)
//! ```
//!
//! `P(n)` and `S(n+2)` share the top term `2a_{2n+4}`; their difference
//! `C(n)` has top term `a_{2n+1}`. Every rule is found by probing which of
//! these residuals is affine in a given unknown with nothing later present.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{format_rat, rat};
use crate::error::{Error, Result};
use crate::qseries::{exp, exp_frac, QSeries};
use crate::replicable::ReplicationFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Residual {
    /// `S(n)`, from the degree-1 identity.
    Sum,
    /// `C(n) = P(n) − S(n+2)`.
    Combined,
    /// `P(n)`, from the degree-2 identity.
    Product,
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Residual::Sum => "S",
            Residual::Combined => "C",
            Residual::Product => "P",
        };
        write!(f, "{s}")
    }
}

/// Coefficient data for evaluating residuals. Missing indices read as zero.
#[derive(Clone, Copy)]
pub struct Coefficients<'a> {
    pub a: &'a [BigRational],
    /// `None` means `f^{(2)} = f`.
    pub b: Option<&'a [BigRational]>,
}

impl Coefficients<'_> {
    fn a(&self, i: i64) -> BigRational {
        if i < 1 {
            return BigRational::zero();
        }
        self.a.get(i as usize).cloned().unwrap_or_default()
    }

    fn b(&self, i: i64) -> BigRational {
        match self.b {
            None => self.a(i),
            Some(b) if i >= 1 => b.get(i as usize).cloned().unwrap_or_default(),
            Some(_) => BigRational::zero(),
        }
    }
}

fn square_coeff(x: impl Fn(i64) -> BigRational, n: i64) -> BigRational {
    let mut acc = BigRational::zero();
    for i in 0..=n {
        let xi = x(i);
        if !xi.is_zero() {
            acc += xi * x(n - i);
        }
    }
    acc
}

/// `S(n)` for `n ≥ 0`.
pub fn sum_residual(c: &Coefficients<'_>, n: i64) -> BigRational {
    let mut r = c.a(2 * n) * rat(2);
    if n % 2 == 0 {
        r += c.b(n / 2);
    }
    // [f²]_n = 2a_{n+1} + Σ_{i=1}^{n-1} a_i a_{n-i}
    r -= c.a(n + 1) * rat(2);
    for i in 1..n {
        r -= c.a(i) * c.a(n - i);
    }
    if n == 0 {
        r += c.a(1) * rat(2);
    }
    r
}

/// `P(n)` for `n ≥ 1`.
pub fn product_residual(c: &Coefficients<'_>, n: i64) -> BigRational {
    let u = |i: i64| if i >= 1 { c.a(2 * i) } else { BigRational::zero() };
    let w = |i: i64| if i == 0 { BigRational::one() } else { c.a(2 * i - 1) };
    let mut r = square_coeff(u, n) - square_coeff(w, n + 1);
    let mut ug = u(n + 2);
    for k in 1..=n / 2 {
        ug += u(n - 2 * k) * c.b(k);
    }
    r += ug * rat(2);
    r -= c.a(2) * c.a(n) * rat(2);
    r += c.b(n);
    r
}

pub fn residual(kind: Residual, c: &Coefficients<'_>, n: i64) -> BigRational {
    match kind {
        Residual::Sum => sum_residual(c, n),
        Residual::Product => product_residual(c, n),
        Residual::Combined => product_residual(c, n) - sum_residual(c, n + 2),
    }
}

/// `LHS − RHS` of both identities as series in `q`, expanded on the
/// `q^{1/2}` grid with `f((z+1)/2)` obtained by the sign `(−1)^{2e}`.
pub fn identity_residual_series(f: &QSeries, g: &QSeries) -> Result<(QSeries, QSeries)> {
    let a = f.normalized_coefficients()?;
    let half = f.substitute(exp_frac(1, 2))?;
    let shifted = half.map_terms(|e, c| if (e * exp(2)).to_integer() % 2 == 0 { c.clone() } else { -c });
    let g2 = g.substitute(exp(2))?;
    let t = f.trunc();
    let c = |v: BigRational| QSeries::monomial(v, exp(0), t);
    let get = |i: usize| a.get(i).cloned().unwrap_or_default();

    let pair = half.add(&shifted)?;
    let e1 = pair.add(&g2)?;
    let rhs1 = f.mul(f)?.sub(&c(get(1) * rat(2))?)?;
    let e2 = half.mul(&shifted)?.add(&g2.mul(&pair)?)?;
    let rhs2 = f.scale(&(get(2) * rat(2))).sub(g)?.add(&c((get(4) - get(1)) * rat(2))?)?;
    Ok((e1.sub(&rhs1)?, e2.sub(&rhs2)?))
}

/// `a_m` for `m = 4k + residue`, `k ≥ first_k`, solved from
/// `kind(n_scale·k + n_offset)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub residue: u64,
    pub first_k: u64,
    pub residual: Residual,
    pub n_scale: i64,
    pub n_offset: i64,
}

impl Rule {
    pub fn equation_for(&self, m: u64) -> Option<(Residual, i64)> {
        if m % 4 != self.residue || m / 4 < self.first_k {
            return None;
        }
        let k = (m / 4) as i64;
        Some((self.residual, self.n_scale * k + self.n_offset))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let off = match self.n_offset {
            0 => String::new(),
            o if o > 0 => format!("+{o}"),
            o => o.to_string(),
        };
        write!(f, "a_{{4k+{}}} (k>={}) from {}({}k{})", self.residue, self.first_k, self.residual, self.n_scale, off)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceSet {
    pub prime: u64,
    /// True when the rules were derived with `f^{(2)} = f`.
    pub coupled: bool,
    pub seeds: Vec<u64>,
    pub rules: Vec<Rule>,
    /// Indices up to which the rules were derived and checked.
    pub derived_to: u64,
}

impl RecurrenceSet {
    pub fn rule_for(&self, m: u64) -> Option<(Residual, i64)> {
        self.rules.iter().find_map(|r| r.equation_for(m))
    }
}

const DERIVE_LIMIT: u64 = 48;

fn probe_values(len: usize, salt: i64) -> Vec<BigRational> {
    (0..len as i64).map(|i| if i == 0 { BigRational::zero() } else { rat((i * i * 7 + 3 * i + 11 * salt) % 97 + 2) }).collect()
}

/// Evaluates the residual with slot `m` set to `x` and slots above `m` taken
/// from `tail`.
fn probe(kind: Residual, n: i64, m: usize, x: i64, base: &[BigRational], tail: &[BigRational], b: Option<&[BigRational]>) -> BigRational {
    let mut a: Vec<BigRational> = base[..m].to_vec();
    a.push(rat(x));
    a.extend_from_slice(&tail[m + 1..]);
    residual(kind, &Coefficients { a: &a, b }, n)
}

/// Whether `kind(n)` is affine in `a_m` with nonzero slope and free of every
/// `a_j`, `j > m` (and, when coupled, of `b_j = a_j` for `j > m`).
fn solves(kind: Residual, n: i64, m: usize, coupled: bool) -> bool {
    let len = 2 * n as usize + 8;
    if m >= len {
        return false;
    }
    let base = probe_values(len, 1);
    let tails = [probe_values(len, 2), probe_values(len, 3), vec![BigRational::zero(); len]];
    let b_data = probe_values(len, 5);
    let b = if coupled { None } else { Some(&b_data[..]) };
    let mut slope = None;
    for tail in &tails {
        let e0 = probe(kind, n, m, 0, &base, tail, b);
        let e1 = probe(kind, n, m, 1, &base, tail, b);
        let e2 = probe(kind, n, m, 2, &base, tail, b);
        let s = &e1 - &e0;
        if e2 - &e0 != &s * rat(2) {
            return false;
        }
        match &slope {
            None => slope = Some((s, e0)),
            Some((s0, c0)) => {
                if s0 != &s || c0 != &e0 {
                    return false;
                }
            }
        }
    }
    matches!(slope, Some((s, _)) if !s.is_zero())
}

fn first_solver(m: usize, coupled: bool) -> Option<(Residual, i64)> {
    for kind in [Residual::Sum, Residual::Combined, Residual::Product] {
        let lo = if kind == Residual::Sum { 0 } else { 1 };
        for n in lo..=m as i64 {
            if solves(kind, n, m, coupled) {
                return Some((kind, n));
            }
        }
    }
    None
}

/// Derives the four residue-class rules by probing. `coupled` selects
/// `f^{(2)} = f`.
pub fn derive_rules(coupled: bool) -> Result<RecurrenceSet> {
    let mut seeds = Vec::new();
    let mut by_class: BTreeMap<u64, Vec<(u64, Residual, i64)>> = BTreeMap::new();
    for m in 1..=DERIVE_LIMIT {
        match first_solver(m as usize, coupled) {
            None => seeds.push(m),
            Some((kind, n)) => by_class.entry(m % 4).or_default().push((m / 4, kind, n)),
        }
    }
    let mut rules = Vec::new();
    for residue in 0..4 {
        let found = by_class.get(&residue).filter(|v| v.len() >= 2).ok_or_else(|| {
            Error::Underdetermined(residue, "no residual determines this residue class".into())
        })?;
        let (k0, kind, n0) = found[0];
        let (k1, _, n1) = found[1];
        let scale = (n1 - n0) / (k1 - k0) as i64;
        let offset = n0 - scale * k0 as i64;
        for &(k, kd, n) in found {
            if kd != kind || n != scale * k as i64 + offset {
                return Err(Error::Underdetermined(4 * k + residue, format!("rule changes shape at k = {k}")));
            }
        }
        let ks: Vec<u64> = found.iter().map(|x| x.0).collect();
        if ks.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(Error::Underdetermined(residue, "rule has gaps".into()));
        }
        rules.push(Rule { residue, first_k: k0, residual: kind, n_scale: scale, n_offset: offset });
    }
    Ok(RecurrenceSet { prime: 2, coupled, seeds, rules, derived_to: DERIVE_LIMIT })
}

/// Rules for a family, coupled exactly when its `f^{(2)}` is `f`.
pub fn derive_p2_recurrences(fam: &ReplicationFamily) -> Result<RecurrenceSet> {
    let g = fam.get(2)?;
    derive_rules(g == fam.base())
}

/// Where `b_k = a_k^{(2)}` comes from during the recurrence.
#[derive(Clone, Debug, PartialEq)]
pub enum SecondReplicate {
    /// `f^{(2)} = f`.
    SelfReplicate,
    Series(QSeries),
}

/// `q^{-1} + Σ a_k q^k` below `q^trunc` from the seed coefficients and the
/// p = 2 rules alone.
pub fn mahler_compute(seeds: &BTreeMap<u64, BigRational>, source: &SecondReplicate, trunc: i64) -> Result<QSeries> {
    let coupled = matches!(source, SecondReplicate::SelfReplicate);
    let rules = derive_rules(coupled)?;
    let top = (trunc - 1).max(0) as u64;
    let b_data = match source {
        SecondReplicate::SelfReplicate => None,
        SecondReplicate::Series(g) => Some(g.normalized_coefficients()?),
    };
    let integral = seeds.values().all(|v| v.is_integer())
        && b_data.as_ref().is_none_or(|b| b.iter().all(|v| v.is_integer()));
    let mut a = vec![BigRational::zero()];
    for m in 1..=top {
        let value = if rules.seeds.contains(&m) {
            seeds
                .get(&m)
                .cloned()
                .ok_or_else(|| Error::InvalidArgument(format!("seed a_{m} is required")))?
        } else {
            let (kind, n) = rules.rule_for(m).ok_or(Error::Underdetermined(m, "no rule".into()))?;
            if let Some(b) = &b_data {
                // S(n) reads b up to n/2, P(n) and C(n) up to n.
                let need = if kind == Residual::Sum { n / 2 } else { n } as usize;
                if b.len() <= need {
                    return Err(Error::InsufficientTruncation {
                        needed: format!("f^(2) known to q^{need}"),
                        available: format!("q^{}", b.len() - 1),
                    });
                }
            }
            let b = b_data.as_deref();
            let e0 = residual(kind, &Coefficients { a: &a, b }, n);
            a.push(BigRational::one());
            let e1 = residual(kind, &Coefficients { a: &a, b }, n);
            a.pop();
            let v = -&e0 / (e1 - &e0);
            if integral && !v.is_integer() {
                return Err(Error::NonIntegral { location: format!("a_{m}"), value: format_rat(&v) });
            }
            v
        };
        a.push(value);
    }
    Ok(QSeries::from_normalized(&a))
}

/// The displayed four-rule forms, as printed and with the repairs that make
/// them agree with the identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisplayCheck {
    pub residue: u64,
    pub literal_holds: bool,
    pub repaired_holds: bool,
    pub repair: &'static str,
}

fn displayed(c: &Coefficients<'_>, residue: u64, k: i64, repaired: bool) -> BigRational {
    let a = |i: i64| c.a(i);
    let b = |i: i64| c.b(i);
    let half = |x: BigRational| x / rat(2);
    let sum = |lo: i64, hi: i64, t: &dyn Fn(i64) -> BigRational| (lo..=hi).fold(BigRational::zero(), |acc, j| acc + t(j));
    let alt = |hi: i64, top: i64| sum(1, hi, &|j| if j % 2 == 0 { a(j) * a(top - j) } else { -(a(j) * a(top - j)) });
    match residue {
        0 => {
            let v = sum(1, k - 1, &|j| a(j) * a(2 * k - j)) + half(a(k) * a(k) - b(k));
            if repaired {
                v + a(2 * k + 1)
            } else {
                v
            }
        }
        1 => {
            let s = sum(1, k, &|j| a(j) * a(2 * k + 2 - j));
            let head = if repaired { a(2 * k + 3) + s } else { a(2 * k + 3) * s };
            let mid = if repaired { half(a(2 * k) * a(2 * k) + b(2 * k)) } else { half(a(2 * k) * a(2 * k) - b(2 * k)) };
            head + half(a(k + 1) * a(k + 1) - b(k + 1)) + mid - a(2) * a(2 * k)
                + sum(1, k, &|j| b(j) * a(4 * k - 4 * j))
                + alt(2 * k - 1, 4 * k)
        }
        2 => a(2 * k + 2) + sum(1, if repaired { k } else { k - 1 }, &|j| a(j) * a(2 * k + 1 - j)),
        _ => {
            let s = sum(1, k + 1, &|j| a(j) * a(2 * k + 3 - j));
            let head = if repaired { a(2 * k + 4) + s } else { a(2 * k + 4) * s };
            let odd = a(2 * k + 1);
            let mid = if repaired { -half(&odd * &odd - b(2 * k + 1)) } else { half(&odd * &odd - &odd) };
            head + mid - a(2) * odd + sum(1, k, &|j| b(j) * a(4 * k + 2 - 4 * j)) + alt(2 * k, 4 * k + 2)
        }
    }
}

/// Evaluates the displayed rules against known coefficients for
/// `1 ≤ k ≤ k_max` (`2 ≤ k` for the `4k+1` class, whose `k = 1` case is the
/// seed `a_5`).
pub fn display_cross_check(c: &Coefficients<'_>, k_max: i64) -> Vec<DisplayCheck> {
    const REPAIRS: [&str; 4] = [
        "add the missing a_{2k+1} term",
        "read the juxtaposition after a_{2k+3} as +, read a_{4k+} as a_{4k+1}, and flip the sign of a_{2k}^{(2)}",
        "run the sum to j = k instead of k - 1",
        "read the juxtaposition after a_{2k+4} as +, and replace (a_{2k+1}^2 - a_{2k+1})/2 by -(a_{2k+1}^2 - a_{2k+1}^{(2)})/2",
    ];
    (0..4u64)
        .map(|residue| {
            let lo = if residue == 1 { 2 } else { 1 };
            let holds = |repaired: bool| {
                (lo..=k_max).all(|k| displayed(c, residue, k, repaired) == c.a(4 * k + residue as i64))
            };
            DisplayCheck { residue, literal_holds: holds(false), repaired_holds: holds(true), repair: REPAIRS[residue as usize] }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddLevelReport {
    pub seeds: Vec<u64>,
    pub trunc: i64,
    pub matches_oracle: bool,
    pub first_mismatch: Option<u64>,
}

/// Rebuilds `f` from `a_1, a_2, a_3, a_5` alone, taking `f^{(2)} = f`, and
/// compares with the reference series.
pub fn odd_level_experiment(reference: &QSeries, trunc: i64) -> Result<OddLevelReport> {
    let a = reference.normalized_coefficients()?;
    let rules = derive_rules(true)?;
    let seeds: BTreeMap<u64, BigRational> =
        rules.seeds.iter().filter_map(|&k| a.get(k as usize).map(|v| (k, v.clone()))).collect();
    let rebuilt = mahler_compute(&seeds, &SecondReplicate::SelfReplicate, trunc)?;
    let first_mismatch = (1..trunc).find(|&i| rebuilt.coeff_int(i).ok() != reference.coeff_int(i).ok()).map(|i| i as u64);
    Ok(OddLevelReport { seeds: rules.seeds, trunc, matches_oracle: first_mismatch.is_none(), first_mismatch })
}

pub fn to_big(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::FunctionSpec;
    use crate::modular::{j_coefficients, j_oracle};

    fn j_a(top: usize) -> Vec<BigRational> {
        to_big(&j_coefficients(top))
    }

    #[test]
    fn residuals_vanish_on_j_and_two_b() {
        let a = j_a(120);
        let c = Coefficients { a: &a, b: None };
        for n in 0..50 {
            assert!(sum_residual(&c, n).is_zero(), "S({n})");
        }
        for n in 1..50 {
            assert!(product_residual(&c, n).is_zero(), "P({n})");
        }
        let f = FunctionSpec::two_b().realize(exp(121)).unwrap().normalized_coefficients().unwrap();
        let c = Coefficients { a: &f, b: Some(&a) };
        for n in 1..50 {
            assert!(sum_residual(&c, n).is_zero() && product_residual(&c, n).is_zero(), "n = {n}");
        }
        // With g = f the second identity is wrong for 2B.
        let wrong = Coefficients { a: &f, b: None };
        assert!((1..10).any(|n| !product_residual(&wrong, n).is_zero()));
    }

    #[test]
    fn q0_of_first_identity_is_f2_constant() {
        let a = j_a(10);
        assert!(sum_residual(&Coefficients { a: &a, b: None }, 0).is_zero());
    }

    #[test]
    fn series_expansion_matches_index_formulas() {
        let a: Vec<BigRational> = (0..40).map(|i| if i == 0 { rat(0) } else { rat((i * 13 % 7) - 3) }).collect();
        let b: Vec<BigRational> = (0..40).map(|i| if i == 0 { rat(0) } else { rat((i * 5 % 11) - 4) }).collect();
        let f = QSeries::from_normalized(&a);
        let g = QSeries::from_normalized(&b);
        let (r1, r2) = identity_residual_series(&f, &g).unwrap();
        let c = Coefficients { a: &a, b: Some(&b) };
        for n in 0..15 {
            assert_eq!(r1.coeff_int(n).unwrap(), sum_residual(&c, n), "S({n})");
        }
        for n in 1..15 {
            assert_eq!(r2.coeff_int(n).unwrap(), product_residual(&c, n), "P({n})");
        }
        assert!(r1.coeff_int(-2).unwrap().is_zero() && r1.coeff_int(-1).unwrap().is_zero());
        assert!(r1.coeff(exp_frac(-1, 2)).unwrap().is_zero());
    }

    #[test]
    fn identities_hold_as_series() {
        let j = j_oracle(exp(60));
        let (r1, r2) = identity_residual_series(&j, &j).unwrap();
        assert!(r1.is_zero() && r2.is_zero(), "{r1} / {r2}");
        let f = FunctionSpec::two_b().realize(exp(60)).unwrap();
        let (r1, r2) = identity_residual_series(&f, &j).unwrap();
        assert!(r1.is_zero() && r2.is_zero());
    }

    #[test]
    fn derived_rules() {
        for coupled in [true, false] {
            let r = derive_rules(coupled).unwrap();
            assert_eq!(r.seeds, vec![1, 2, 3, 5]);
            let expect = [
                Rule { residue: 0, first_k: 1, residual: Residual::Sum, n_scale: 2, n_offset: 0 },
                Rule { residue: 1, first_k: 2, residual: Residual::Combined, n_scale: 2, n_offset: 0 },
                Rule { residue: 2, first_k: 1, residual: Residual::Sum, n_scale: 2, n_offset: 1 },
                Rule { residue: 3, first_k: 1, residual: Residual::Combined, n_scale: 2, n_offset: 1 },
            ];
            assert_eq!(r.rules, expect);
        }
        assert_eq!(derive_rules(true).unwrap().rules[1].to_string(), "a_{4k+1} (k>=2) from C(2k)");
    }

    #[test]
    fn a6_from_rule() {
        let a = j_a(6);
        let r = derive_rules(true).unwrap();
        assert_eq!(r.rule_for(6), Some((Residual::Sum, 3)));
        let seeds: BTreeMap<u64, BigRational> = [1u64, 2, 3, 5].iter().map(|&k| (k, a[k as usize].clone())).collect();
        let f = mahler_compute(&seeds, &SecondReplicate::SelfReplicate, 7).unwrap();
        assert_eq!(f.coeff_int(6).unwrap(), a[6]);
        assert_eq!(f.coeff_int(3).unwrap(), rat(864299970));
        assert_eq!(f.coeff_int(4).unwrap(), rat(20245856256));
    }

    #[test]
    fn j_to_two_hundred() {
        let a = j_a(199);
        let seeds: BTreeMap<u64, BigRational> = [1u64, 2, 3, 5].iter().map(|&k| (k, a[k as usize].clone())).collect();
        let f = mahler_compute(&seeds, &SecondReplicate::SelfReplicate, 200).unwrap();
        assert_eq!(f, QSeries::from_normalized(&a));
    }

    #[test]
    fn two_b_from_j() {
        let f = FunctionSpec::two_b().realize(exp(80)).unwrap();
        let a = f.normalized_coefficients().unwrap();
        let seeds: BTreeMap<u64, BigRational> = [1u64, 2, 3, 5].iter().map(|&k| (k, a[k as usize].clone())).collect();
        let g = SecondReplicate::Series(j_oracle(exp(80)));
        assert_eq!(mahler_compute(&seeds, &g, 80).unwrap(), f);
        let fam = ReplicationFamily::two_b(2, 20).unwrap();
        assert!(!derive_p2_recurrences(&fam).unwrap().coupled);
    }

    #[test]
    fn missing_seed() {
        let seeds: BTreeMap<u64, BigRational> = [(1, rat(1)), (2, rat(0))].into();
        assert!(mahler_compute(&seeds, &SecondReplicate::SelfReplicate, 10).is_err());
    }

    #[test]
    fn display_cross_check_on_j_and_two_b() {
        let a = j_a(80);
        for c in display_cross_check(&Coefficients { a: &a, b: None }, 12) {
            assert!(!c.literal_holds && c.repaired_holds, "{c:?}");
        }
        let f = FunctionSpec::two_b().realize(exp(81)).unwrap().normalized_coefficients().unwrap();
        for c in display_cross_check(&Coefficients { a: &f, b: Some(&a) }, 12) {
            assert!(c.repaired_holds, "{c:?}");
        }
    }

    #[test]
    fn odd_level() {
        let r = odd_level_experiment(&j_oracle(exp(30)), 30).unwrap();
        assert_eq!(r.seeds, vec![1, 2, 3, 5]);
        assert!(r.matches_oracle);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]
            #[test]
            fn index_formulas_track_series(a in proptest::collection::vec(-9i64..10, 24), b in proptest::collection::vec(-9i64..10, 24)) {
                let mut av = vec![rat(0)];
                av.extend(a.iter().map(|&x| rat(x)));
                let mut bv = vec![rat(0)];
                bv.extend(b.iter().map(|&x| rat(x)));
                let (r1, r2) = identity_residual_series(&QSeries::from_normalized(&av), &QSeries::from_normalized(&bv)).unwrap();
                let c = Coefficients { a: &av, b: Some(&bv) };
                for n in 1..10 {
                    prop_assert_eq!(r1.coeff_int(n).unwrap(), sum_residual(&c, n));
                    prop_assert_eq!(r2.coeff_int(n).unwrap(), product_residual(&c, n));
                }
            }
        }
    }
}
