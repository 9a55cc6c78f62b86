//! Replicability, replication powers and the mod-p congruence.
//!
//! A normalized `f` is replicable when its Grunsky coefficients satisfy
//! `h_{m,n} = h_{lcm(m,n), gcd(m,n)}`. Its replicates are
//! `f^{(k)} = q^{-1} + Σ_i h_i^{(k)} q^i` with
//! `h_i^{(k)} = k Σ_{d|k} μ(d) h_{k/d, dki}`, and conversely
//! `h_{m,n} = Σ_{d|(m,n)} (1/d) h^{(d)}_{mn/d²}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{divisors, format_rat, mobius, rat};
use crate::error::{Error, Result};
use crate::faber::{faber_sequence, normalized_prefix};
use crate::function::FunctionSpec;
use crate::grunsky::GrunskyTable;
use crate::qseries::{exp, QSeries};

/// The base series together with the replicates `f^{(a)}` a caller supplied
/// or computed.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplicationFamily {
    powers: BTreeMap<u64, QSeries>,
}

fn require_normalized(f: &QSeries) -> Result<()> {
    if f.is_normalized() {
        Ok(())
    } else {
        Err(Error::NotNormalized(f.to_string()))
    }
}

impl ReplicationFamily {
    pub fn new(base: QSeries) -> Result<Self> {
        require_normalized(&base)?;
        Ok(ReplicationFamily { powers: BTreeMap::from([(1, base)]) })
    }

    /// Sets `f^{(a)}`. Replacing `f^{(1)}` is refused.
    pub fn with_power(mut self, a: u64, series: QSeries) -> Result<Self> {
        if a == 0 {
            return Err(Error::InvalidArgument("replicate index must be positive".into()));
        }
        if a == 1 && series != self.powers[&1] {
            return Err(Error::InvalidArgument("f^(1) is the base series".into()));
        }
        require_normalized(&series)?;
        self.powers.insert(a, series);
        Ok(self)
    }

    /// Family with `f^{(a)} = f` for every `a ≤ max_index`.
    pub fn self_replicating(f: QSeries, max_index: u64) -> Result<Self> {
        let mut fam = Self::new(f.clone())?;
        for a in 2..=max_index {
            fam = fam.with_power(a, f.clone())?;
        }
        Ok(fam)
    }

    /// Replicates `2..=max_index` computed from the Grunsky coefficients of
    /// `f`, each known below `q^trunc`.
    pub fn computed(f: QSeries, max_index: u64, trunc: i64) -> Result<Self> {
        let mut fam = Self::new(f.clone())?;
        for a in 2..=max_index {
            let r = replicate(&f, a, trunc)?;
            fam = fam.with_power(a, r)?;
        }
        Ok(fam)
    }

    /// Closed-form family of `q^{-1} + cq`: `f^{(a)} = q^{-1} + c^a q`.
    pub fn fiction(c: i8, max_index: u64, trunc: i64) -> Result<Self> {
        let base = FunctionSpec::fiction(c)?.realize(exp(trunc))?;
        let mut fam = Self::new(base)?;
        for a in 2..=max_index {
            let ca = (c as i64).pow(a as u32).signum();
            fam = fam.with_power(a, FunctionSpec::Fiction(ca as i8).realize(exp(trunc))?)?;
        }
        Ok(fam)
    }

    /// The 2B family: `f = η(q)^24/η(q^2)^24 + 24`, with `f^{(a)} = f` for odd
    /// `a` and `f^{(a)} = J` for even `a`.
    pub fn two_b(max_index: u64, trunc: i64) -> Result<Self> {
        let f = FunctionSpec::two_b().realize(exp(trunc))?;
        let j = FunctionSpec::J.realize(exp(trunc))?;
        let mut fam = Self::new(f.clone())?;
        for a in 2..=max_index {
            fam = fam.with_power(a, if a % 2 == 0 { j.clone() } else { f.clone() })?;
        }
        Ok(fam)
    }

    pub fn base(&self) -> &QSeries {
        &self.powers[&1]
    }

    pub fn get(&self, a: u64) -> Result<&QSeries> {
        self.powers.get(&a).ok_or(Error::MissingReplicate(a))
    }

    pub fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.powers.keys().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplicabilityCounterexample {
    pub m: u64,
    pub n: u64,
    pub lcm: u64,
    pub gcd: u64,
    pub h_mn: String,
    pub h_lcm_gcd: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplicabilityVerdict {
    pub replicable: bool,
    pub grade_bound: u64,
    /// Pairs `(m, n)` with `m ∤ n` whose partner `(lcm, gcd)` fits the table.
    pub checked_pairs: usize,
    /// Largest grade `lcm + gcd` reached by a checked pair.
    pub max_partner_grade: u64,
    pub counterexample: Option<ReplicabilityCounterexample>,
}

/// Checks `h_{m,n} = h_{lcm,gcd}` on every pair whose partner fits the table,
/// scanning by ascending grade.
pub fn is_replicable(t: &GrunskyTable) -> ReplicabilityVerdict {
    let g = t.grade_bound();
    let mut checked = 0;
    let mut max_partner_grade = 0;
    for grade in 2..=g {
        for m in 1..=grade / 2 {
            let n = grade - m;
            let (l, d) = (m.lcm(&n), m.gcd(&n));
            if d == m || l + d > g {
                continue;
            }
            let (Some(h), Some(h2)) = (t.get(m, n), t.get(l, d)) else {
                continue;
            };
            checked += 1;
            max_partner_grade = max_partner_grade.max(l + d);
            if h != h2 {
                return ReplicabilityVerdict {
                    replicable: false,
                    grade_bound: g,
                    checked_pairs: checked,
                    max_partner_grade,
                    counterexample: Some(ReplicabilityCounterexample {
                        m,
                        n,
                        lcm: l,
                        gcd: d,
                        h_mn: format_rat(h),
                        h_lcm_gcd: format_rat(h2),
                    }),
                };
            }
        }
    }
    ReplicabilityVerdict { replicable: true, grade_bound: g, checked_pairs: checked, max_partner_grade, counterexample: None }
}

/// `f^{(k)}` known below `q^trunc`, with every needed `h_{k/d, dki}` read from
/// `F_{k/d}(f)` at `q^{dki}`. Requires `f` known below `q^{k²(trunc−1)+1}`.
pub fn replicate(f: &QSeries, k: u64, trunc: i64) -> Result<QSeries> {
    require_normalized(f)?;
    if k == 0 {
        return Err(Error::InvalidArgument("replicate index must be positive".into()));
    }
    if trunc < 1 {
        return Err(Error::InvalidArgument("replicate truncation must be at least 1".into()));
    }
    if k == 1 {
        return Ok(f.truncate(exp(trunc)));
    }
    let top = trunc - 1;
    let needed = (k * k) as i64 * top + 1;
    if f.trunc() < exp(needed) {
        return Err(Error::InsufficientTruncation {
            needed: needed.to_string(),
            available: f.trunc().to_string(),
        });
    }
    let ds: Vec<(u64, i64)> = divisors(k).into_iter().map(|d| (d, mobius(d))).filter(|&(_, mu)| mu != 0).collect();
    let max_m = k as usize;
    let a = normalized_prefix(f, max_m)?;
    let polys = faber_sequence(&a, max_m)?;
    let mut faber_values: BTreeMap<u64, QSeries> = BTreeMap::new();
    for &(d, _) in &ds {
        let m = k / d;
        let reach = (d * k) as i64 * top + 1;
        let fm = polys[m as usize].compose(&f.truncate(exp(reach + m as i64 - 1)))?;
        faber_values.insert(m, fm);
    }
    let mut coeffs = vec![BigRational::zero()];
    for i in 1..=top {
        let mut acc = BigRational::zero();
        for &(d, mu) in &ds {
            let m = k / d;
            let n = (d * k) as i64 * i;
            let h = faber_values[&m].coeff_int(n)? / rat(m as i64);
            acc += h * rat(mu);
        }
        coeffs.push(acc * rat(k as i64));
    }
    Ok(QSeries::from_normalized(&coeffs))
}

/// As [`replicate`] but reading `h_{k/d, dki}` from a precomputed table.
pub fn replicate_from_table(t: &GrunskyTable, k: u64, trunc: i64) -> Result<QSeries> {
    if k == 0 || trunc < 1 {
        return Err(Error::InvalidArgument("replicate needs k ≥ 1 and trunc ≥ 1".into()));
    }
    let top = (trunc - 1) as u64;
    let needed = 1 + k * k * top;
    if top > 0 && t.grade_bound() < needed {
        return Err(Error::TableTooSmall { needed, available: t.grade_bound() });
    }
    let mut coeffs = vec![BigRational::zero()];
    for i in 1..=top {
        let mut acc = BigRational::zero();
        for d in divisors(k) {
            let mu = mobius(d);
            if mu != 0 {
                acc += t.h(k / d, d * k * i)? * rat(mu);
            }
        }
        coeffs.push(acc * rat(k as i64));
    }
    Ok(QSeries::from_normalized(&coeffs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseIdentityFailure {
    pub m: u64,
    pub n: u64,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseIdentityReport {
    pub holds: bool,
    pub checked_pairs: usize,
    pub gcd_bound: u64,
    pub first_failure: Option<InverseIdentityFailure>,
}

/// Checks `h_{m,n} = Σ_{d|(m,n)} (1/d) h^{(d)}_{mn/d²}` on every table pair
/// with `gcd(m,n) ≤ bound`.
pub fn inverse_identity_check(fam: &ReplicationFamily, t: &GrunskyTable, bound: u64) -> Result<InverseIdentityReport> {
    let mut checked = 0;
    for (m, n, h) in t.entries() {
        let g = m.gcd(&n);
        if g > bound {
            continue;
        }
        let mut rhs = BigRational::zero();
        for d in divisors(g) {
            let idx = (m * n / (d * d)) as i64;
            rhs += fam.get(d)?.coeff_int(idx)? / rat(d as i64);
        }
        checked += 1;
        if &rhs != h {
            return Ok(InverseIdentityReport {
                holds: false,
                checked_pairs: checked,
                gcd_bound: bound,
                first_failure: Some(InverseIdentityFailure { m, n, lhs: format_rat(h), rhs: format_rat(&rhs) }),
            });
        }
    }
    Ok(InverseIdentityReport { holds: true, checked_pairs: checked, gcd_bound: bound, first_failure: None })
}

fn integer_coefficient(f: &QSeries, i: i64) -> Result<BigInt> {
    let c = f.coeff_int(i)?;
    if !c.is_integer() {
        return Err(Error::NonIntegral { location: format!("q^{i}"), value: format_rat(&c) });
    }
    Ok(c.to_integer())
}

/// `a_i ≡ a_i^{(p)} (mod p)` for `1 ≤ i ≤ bound`.
pub fn mod_p_congruence(f: &QSeries, fp: &QSeries, p: u64, bound: u64) -> Result<bool> {
    require_normalized(f)?;
    require_normalized(fp)?;
    let p = BigInt::from(p);
    for i in 1..=bound as i64 {
        let d = integer_coefficient(f, i)? - integer_coefficient(fp, i)?;
        if !d.is_multiple_of(&p) {
            return Ok(false);
        }
    }
    Ok(true)
}
