//! Partitions, frame shapes and eta products.
//!
//! A frame shape `∏ k^{m_k} / ∏ k^{n_k}` stands for the eta quotient
//! `∏ η(q^k)^{m_k} / ∏ η(q^k)^{n_k}`. For partitions of 24 the product starts
//! at `q^1`, so its coefficients form a sequence `c(1) = 1, c(2), …` which
//! can be tested for weak multiplicativity.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{format_rat, is_prime};
use crate::error::{Error, Result};
use crate::intseries;
use crate::qseries::{exp, Exponent, QSeries};

/// Multiset of positive integers, stored ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("partition must be nonempty".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("partition parts must be positive".into()));
        }
        parts.sort_unstable();
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn degree(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Balance number `N` if the outside-in products `a_i · a_{t+1−i}` of the
/// sorted parts all coincide.
pub fn is_balanced(p: &Partition) -> Option<u64> {
    let a = p.parts();
    let t = a.len();
    let n = a[0] * a[t - 1];
    (0..t.div_ceil(2))
        .all(|i| a[i] * a[t - 1 - i] == n)
        .then_some(n)
}

/// All partitions of `n`, each ascending, in lexicographic order.
pub fn partitions_of(n: u64) -> Vec<Partition> {
    fn go(rem: u64, min: u64, cur: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for k in min..=rem {
            if rem - k != 0 && rem - k < k {
                continue;
            }
            cur.push(k);
            go(rem - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 1, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Formal eta quotient with numerator and denominator multiplicities.
/// Parts common to both sides cancel on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrameShape {
    numerator: BTreeMap<u64, u64>,
    denominator: BTreeMap<u64, u64>,
}

impl FrameShape {
    pub fn new<I, J>(numerator: I, denominator: J) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64)>,
        J: IntoIterator<Item = (u64, u64)>,
    {
        let mut net: BTreeMap<u64, i64> = BTreeMap::new();
        for (sign, side) in [(1i64, numerator.into_iter().collect::<Vec<_>>()), (-1, denominator.into_iter().collect())] {
            for (part, mult) in side {
                if part == 0 || mult == 0 {
                    return Err(Error::Parse(format!("frame shape needs positive part and multiplicity, got {part}^{mult}")));
                }
                *net.entry(part).or_insert(0) += sign * mult as i64;
            }
        }
        let numerator = net.iter().filter(|(_, &m)| m > 0).map(|(&k, &m)| (k, m as u64)).collect();
        let denominator = net.iter().filter(|(_, &m)| m < 0).map(|(&k, &m)| (k, (-m) as u64)).collect();
        Ok(FrameShape { numerator, denominator })
    }

    pub fn from_partition(p: &Partition) -> Self {
        let mut numerator = BTreeMap::new();
        for &k in p.parts() {
            *numerator.entry(k).or_insert(0) += 1;
        }
        FrameShape { numerator, denominator: BTreeMap::new() }
    }

    /// Numerator parts with repetition, ascending.
    pub fn numerator(&self) -> Vec<u64> {
        expand(&self.numerator)
    }

    pub fn denominator(&self) -> Vec<u64> {
        expand(&self.denominator)
    }

    /// Numerator as a partition when the shape has no denominator.
    pub fn as_partition(&self) -> Option<Partition> {
        if !self.denominator.is_empty() || self.numerator.is_empty() {
            return None;
        }
        Partition::new(self.numerator()).ok()
    }

    /// `(part, signed multiplicity)` pairs.
    pub fn signed_parts(&self) -> Vec<(u64, i64)> {
        let mut v: Vec<(u64, i64)> = self.numerator.iter().map(|(&k, &m)| (k, m as i64)).collect();
        v.extend(self.denominator.iter().map(|(&k, &m)| (k, -(m as i64))));
        v.sort_unstable();
        v
    }

    /// `(Σ numerator parts − Σ denominator parts) / 24`.
    pub fn lead_exponent(&self) -> Exponent {
        let s: i64 = self.signed_parts().iter().map(|&(k, m)| k as i64 * m).sum();
        Exponent::new(s, 24)
    }

    /// Half the signed number of parts.
    pub fn weight(&self) -> Ratio<i64> {
        let s: i64 = self.signed_parts().iter().map(|&(_, m)| m).sum();
        Ratio::new(s, 2)
    }
}

fn expand(m: &BTreeMap<u64, u64>) -> Vec<u64> {
    m.iter().flat_map(|(&k, &c)| std::iter::repeat_n(k, c as usize)).collect()
}

fn fmt_side(m: &BTreeMap<u64, u64>) -> String {
    m.iter().map(|(k, c)| format!("{k}^{c}")).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for FrameShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_side(&self.numerator))?;
        if !self.denominator.is_empty() {
            write!(f, "/{}", fmt_side(&self.denominator))?;
        }
        Ok(())
    }
}

fn parse_side(s: &str) -> Result<Vec<(u64, u64)>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty side in frame shape".into()));
    }
    s.split_whitespace()
        .map(|tok| {
            let (p, m) = tok
                .split_once('^')
                .ok_or_else(|| Error::Parse(format!("frame token {tok:?} is not part^mult")))?;
            let p: u64 = p.parse().map_err(|_| Error::Parse(format!("bad part in {tok:?}")))?;
            let m: u64 = m.parse().map_err(|_| Error::Parse(format!("bad multiplicity in {tok:?}")))?;
            if p == 0 || m == 0 {
                return Err(Error::Parse(format!("part and multiplicity must be positive in {tok:?}")));
            }
            Ok((p, m))
        })
        .collect()
}

impl FromStr for FrameShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (parse_side(n)?, parse_side(d)?),
            None => (parse_side(s)?, Vec::new()),
        };
        FrameShape::new(num, den)
    }
}

/// `∏ η(q^k)^{m_k} / ∏ η(q^k)^{n_k}` known below `q^trunc`.
pub fn eta_product(s: &FrameShape, trunc: Exponent) -> QSeries {
    let lead = s.lead_exponent();
    let len = if trunc <= lead { 0 } else { (trunc - lead).ceil().to_integer() as usize };
    let core = intseries::eta_core(&s.signed_parts(), len);
    let coeffs = core.into_iter().map(BigRational::from_integer).collect();
    QSeries::new(lead, exp(1), coeffs, trunc).expect("eta product grid is valid")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicativityFailure {
    pub m: u64,
    pub n: u64,
    pub c_m: String,
    pub c_n: String,
    pub c_mn: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicativityReport {
    pub verdict: bool,
    pub bound: u64,
    pub first_failure: Option<MultiplicativityFailure>,
}

/// `[c(0), c(1), …, c(bound)]` of a series on the integer grid, normalized so
/// that `c(1) = 1`.
fn positive_coefficients(f: &QSeries, bound: u64) -> Result<Vec<BigInt>> {
    let mut out = Vec::with_capacity(bound as usize + 1);
    out.push(BigInt::zero());
    for n in 1..=bound as i64 {
        let c = f.coeff_int(n)?;
        if !c.is_integer() {
            return Err(Error::NonIntegral { location: format!("q^{n}"), value: format_rat(&c) });
        }
        out.push(c.to_integer());
    }
    if bound >= 1 {
        if out[1].is_one() {
        } else if (-&out[1]).is_one() {
            out.iter_mut().for_each(|c| *c = -c.clone());
        } else {
            return Err(Error::CannotNormalize(out[1].to_string()));
        }
    }
    Ok(out)
}

fn scan_multiplicative(c: &[BigInt], bound: u64) -> Option<MultiplicativityFailure> {
    // Ordered by product, then by the smaller factor.
    for mn in 6..=bound {
        for m in 2..mn {
            if m * m >= mn {
                break;
            }
            if mn % m != 0 {
                continue;
            }
            let n = mn / m;
            if m.gcd(&n) != 1 {
                continue;
            }
            let (cm, cn, cmn) = (&c[m as usize], &c[n as usize], &c[mn as usize]);
            if &(cm * cn) != cmn {
                return Some(MultiplicativityFailure {
                    m,
                    n,
                    c_m: cm.to_string(),
                    c_n: cn.to_string(),
                    c_mn: cmn.to_string(),
                });
            }
        }
    }
    None
}

/// Tests `c(mn) = c(m)c(n)` for coprime `m, n` with `mn ≤ bound`.
pub fn weak_multiplicativity(f: &QSeries, bound: u64) -> Result<MultiplicativityReport> {
    let c = positive_coefficients(f, bound)?;
    let first_failure = scan_multiplicative(&c, bound);
    Ok(MultiplicativityReport { verdict: first_failure.is_none(), bound, first_failure })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifiedShape {
    pub shape: String,
    pub parts: Vec<u64>,
    pub balance: Option<u64>,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub examined: usize,
    pub bound: u64,
    pub shapes: Vec<ClassifiedShape>,
}

const SCREEN_BOUND: u64 = 100;

fn coefficients_of_partition(p: &Partition, bound: u64) -> Vec<BigInt> {
    let shape = FrameShape::from_partition(p);
    let parts = shape.signed_parts();
    // Lead exponent is 1, so c(n) is index n−1 of the core product.
    let mut c = vec![BigInt::zero()];
    c.extend(intseries::eta_core(&parts, bound as usize));
    c
}

/// Eta products of all partitions of 24 that are weakly multiplicative up to
/// `bound`, in lexicographic order of their parts.
pub fn classify_degree24(bound: u64) -> Result<Classification> {
    if bound < SCREEN_BOUND {
        return Err(Error::InvalidArgument(format!("classification bound must be at least {SCREEN_BOUND}")));
    }
    let all = partitions_of(24);
    let survivors: Vec<Partition> = all
        .par_iter()
        .filter(|p| scan_multiplicative(&coefficients_of_partition(p, SCREEN_BOUND), SCREEN_BOUND).is_none())
        .cloned()
        .collect();
    let mut shapes: Vec<(Partition, ClassifiedShape)> = survivors
        .par_iter()
        .filter(|p| scan_multiplicative(&coefficients_of_partition(p, bound), bound).is_none())
        .map(|p| {
            let shape = FrameShape::from_partition(p);
            let w = shape.weight();
            (
                p.clone(),
                ClassifiedShape {
                    shape: shape.to_string(),
                    parts: p.parts().to_vec(),
                    balance: is_balanced(p),
                    weight: w.to_string(),
                },
            )
        })
        .collect();
    shapes.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Classification {
        examined: all.len(),
        bound,
        shapes: shapes.into_iter().map(|(_, s)| s).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerFactorReport {
    pub prime: u64,
    pub weight: u64,
    /// `c(p)² − c(p²)`.
    pub lhs: String,
    /// `p^{w−1}`.
    pub expected: String,
    pub identity_holds: bool,
    /// Largest `r` with `c(p^{r+1})` checked against the recursion.
    pub recursion_depth: u32,
    pub recursion_holds: bool,
    /// Set for `p = 3`, which is reported separately rather than interpreted.
    pub flagged: bool,
}

impl EulerFactorReport {
    pub fn holds(&self) -> bool {
        self.identity_holds && self.recursion_holds
    }
}

/// Checks the Euler factor `(1 − c(p)p^{-s} + p^{w−1−2s})^{-1}`: the identity
/// `c(p)² − c(p²) = p^{w−1}` and `c(p^{r+1}) = c(p)c(p^r) − p^{w−1}c(p^{r−1})`
/// for every power visible below the truncation.
pub fn euler_factor_check(f: &QSeries, p: u64, weight: u64) -> Result<EulerFactorReport> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if weight == 0 {
        return Err(Error::InvalidArgument("weight must be positive".into()));
    }
    let top = f.last_known_integer_exponent();
    if top < (p * p) as i64 {
        return Err(Error::InsufficientTruncation {
            needed: format!("{}", p * p + 1),
            available: f.trunc().to_string(),
        });
    }
    let c = positive_coefficients(f, top as u64)?;
    let bp = BigInt::from(p).pow(weight as u32 - 1);
    let cp = &c[p as usize];
    let lhs = cp * cp - &c[(p * p) as usize];
    let identity_holds = lhs == bp;
    let mut depth = 0;
    let mut recursion_holds = true;
    let mut prev = BigInt::one();
    let mut cur = cp.clone();
    let mut pk = p;
    while let Some(next_idx) = pk.checked_mul(p).filter(|&i| i <= top as u64) {
        let predicted = cp * &cur - &bp * &prev;
        if predicted != c[next_idx as usize] {
            recursion_holds = false;
            break;
        }
        depth += 1;
        prev = cur;
        cur = c[next_idx as usize].clone();
        pk = next_idx;
    }
    Ok(EulerFactorReport {
        prime: p,
        weight,
        lhs: lhs.to_string(),
        expected: bp.to_string(),
        identity_holds,
        recursion_depth: depth,
        recursion_holds,
        flagged: p == 3,
    })
}

/// Number of parts divided by two, for a partition whose eta product is a
/// candidate cusp form.
pub fn partition_weight(p: &Partition) -> Option<u64> {
    p.len().is_multiple_of(2).then(|| p.len() as u64 / 2)
}
