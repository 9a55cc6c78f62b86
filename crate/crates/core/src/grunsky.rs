//! Grunsky coefficients `h_{m,n}`, defined by
//! `F_n(f) = q^{-n} + n Σ_{m≥1} h_{m,n} q^m`.
//!
//! Three routes: reading the coefficients off Faber polynomials
//! ([`grunsky_from_faber`]), the grade recursion ([`grunsky_by_recursion`]),
//! and the bivariate logarithm ([`grunsky_bivariate_check`]).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{format_rat, rat};
use crate::error::{Error, Result};
use crate::faber::{faber_sequence, normalized_prefix};
use crate::qseries::{exp, QSeries};

/// Symmetric table of `h_{m,n}` for `m, n ≥ 1`, `m + n ≤ grade_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrunskyTable {
    grade_bound: u64,
    /// Keyed by `(min(m,n), max(m,n))`.
    entries: BTreeMap<(u64, u64), BigRational>,
}

#[derive(Serialize)]
struct EntryJson {
    m: u64,
    n: u64,
    h: String,
}

#[derive(Serialize)]
struct TableJson {
    grade_bound: u64,
    entries: Vec<EntryJson>,
}

fn key(m: u64, n: u64) -> (u64, u64) {
    (m.min(n), m.max(n))
}

impl GrunskyTable {
    pub fn empty(grade_bound: u64) -> Self {
        GrunskyTable { grade_bound, entries: BTreeMap::new() }
    }

    pub fn grade_bound(&self) -> u64 {
        self.grade_bound
    }

    pub fn get(&self, m: u64, n: u64) -> Option<&BigRational> {
        self.entries.get(&key(m, n))
    }

    /// `h_{m,n}`, failing when the pair lies beyond the table.
    pub fn h(&self, m: u64, n: u64) -> Result<&BigRational> {
        self.get(m, n).ok_or(Error::TableTooSmall { needed: m + n, available: self.grade_bound })
    }

    pub fn insert(&mut self, m: u64, n: u64, h: BigRational) {
        assert!(m >= 1 && n >= 1 && m + n <= self.grade_bound, "pair ({m},{n}) outside grade {}", self.grade_bound);
        self.entries.insert(key(m, n), h);
    }

    /// Entries as `(m, n, h)` with `m ≤ n`.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u64, &BigRational)> {
        self.entries.iter().map(|(&(m, n), h)| (m, n, h))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `h_k = h_{k,1} = a_k` for `1 ≤ k < grade_bound`.
    pub fn coefficients(&self) -> Vec<BigRational> {
        let mut a = vec![BigRational::zero()];
        a.extend((1..self.grade_bound).map(|k| self.get(k, 1).cloned().unwrap_or_default()));
        a
    }

    /// The sub-table of entries with grade at most `g`.
    pub fn restrict(&self, g: u64) -> GrunskyTable {
        GrunskyTable {
            grade_bound: g.min(self.grade_bound),
            entries: self.entries.iter().filter(|((m, n), _)| m + n <= g).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    /// Pairs whose `h_{m,n}` has a denominator not dividing `gcd(m,n)`.
    pub fn denominator_violations(&self) -> Vec<(u64, u64)> {
        self.entries()
            .filter(|(m, n, h)| !(*h * rat(num_integer::gcd(*m, *n) as i64)).is_integer())
            .map(|(m, n, _)| (m, n))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let t = TableJson {
            grade_bound: self.grade_bound,
            entries: self.entries().map(|(m, n, h)| EntryJson { m, n, h: format_rat(h) }).collect(),
        };
        serde_json::to_value(t).expect("table serializes")
    }
}

/// `h_{m,n}` from the `q^n` coefficient of `F_m(f)`.
pub fn grunsky_entry_from_faber(f: &QSeries, m: u64, n: u64) -> Result<BigRational> {
    let a = normalized_prefix(f, m as usize)?;
    let fm = faber_sequence(&a, m as usize)?.pop().expect("nonempty");
    let g = fm.compose(f)?;
    Ok(g.coeff_int(n as i64)? / rat(m as i64))
}

/// Table to grade `g` by reading `F_m(f)` at `q^n` for every `m ≤ n`.
pub fn grunsky_from_faber(f: &QSeries, g: u64) -> Result<GrunskyTable> {
    if f.trunc() < exp(g as i64) {
        return Err(Error::InsufficientTruncation {
            needed: g.to_string(),
            available: f.trunc().to_string(),
        });
    }
    let f = f.truncate(exp(g as i64));
    let mut table = GrunskyTable::empty(g);
    let max_m = g / 2;
    if max_m == 0 {
        return Ok(table);
    }
    let a = normalized_prefix(&f, max_m as usize)?;
    let polys = faber_sequence(&a, max_m as usize)?;
    for m in 1..=max_m {
        let fm = polys[m as usize].compose(&f)?;
        for n in m..=g - m {
            table.insert(m, n, fm.coeff_int(n as i64)? / rat(m as i64));
        }
    }
    Ok(table)
}

/// Table to grade `g` from `[a_0 = 0, a_1, …, a_{g−1}]` by
/// `h_{r,s} = a_{r+s−1} + (1/(r+s)) Σ_{m<r} Σ_{n<s} a_{m+n−1}(r+s−m−n) h_{r−m,s−n}`.
pub fn grunsky_by_recursion(a: &[BigRational], g: u64) -> Result<GrunskyTable> {
    if g >= 2 && (a.len() as u64) < g {
        return Err(Error::InsufficientTruncation {
            needed: format!("a_{}", g - 1),
            available: format!("a_{}", a.len() as i64 - 1),
        });
    }
    let mut table = GrunskyTable::empty(g);
    for grade in 2..=g {
        for r in 1..=grade / 2 {
            let s = grade - r;
            let h = recursion_entry(&table, a, r, s)?;
            table.insert(r, s, h);
        }
    }
    Ok(table)
}

/// Correction term `(1/(r+s)) Σ …` of the recursion, from entries of lower
/// grade.
pub(crate) fn recursion_correction(table: &GrunskyTable, a: &[BigRational], r: u64, s: u64) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for m in 1..r {
        for n in 1..s {
            let ak = &a[(m + n - 1) as usize];
            if ak.is_zero() {
                continue;
            }
            let h = table.h(r - m, s - n)?;
            if h.is_zero() {
                continue;
            }
            acc += ak * rat((r + s - m - n) as i64) * h;
        }
    }
    Ok(acc / rat((r + s) as i64))
}

fn recursion_entry(table: &GrunskyTable, a: &[BigRational], r: u64, s: u64) -> Result<BigRational> {
    Ok(&a[(r + s - 1) as usize] + recursion_correction(table, a, r, s)?)
}

type Bivariate = Vec<Vec<BigRational>>;

fn bivariate_zero(g: usize) -> Bivariate {
    vec![vec![BigRational::zero(); g + 1]; g + 1]
}

/// `X = Σ_k a_k Σ_{i+j=k−1} p^{i+1} q^{j+1}`, indexed `[deg_p][deg_q]`.
fn x_series(a: &[BigRational], g: usize) -> Bivariate {
    let mut x = bivariate_zero(g);
    for (k, ak) in a.iter().enumerate().skip(1) {
        if k + 1 > g || ak.is_zero() {
            continue;
        }
        for i in 0..k {
            x[i + 1][k - i] += ak;
        }
    }
    x
}

fn bmul(a: &Bivariate, b: &Bivariate, g: usize) -> Bivariate {
    let mut out = bivariate_zero(g);
    for i in 0..=g {
        for j in 0..=g - i {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..=g - i - j {
                for l in 0..=g - i - j - k {
                    if !b[k][l].is_zero() {
                        out[i + k][j + l] += &a[i][j] * &b[k][l];
                    }
                }
            }
        }
    }
    out
}

/// Route A: `−ln((q − p + Σ a_k(p^{k+1}q − pq^{k+1})) / (q − p))` by exact
/// division followed by the Euler-operator logarithm `d·L_d = d·D_d − Σ e L_e D_{d−e}`.
fn bivariate_by_division(a: &[BigRational], g: usize) -> Bivariate {
    // N(p, q) = pq (f(p) − f(q)) up to total degree g + 1.
    let mut num = bivariate_zero(g + 1);
    num[0][1] += BigRational::one();
    num[1][0] -= BigRational::one();
    for (k, ak) in a.iter().enumerate().skip(1) {
        if k + 2 > g + 1 || ak.is_zero() {
            continue;
        }
        num[k + 1][1] += ak;
        num[1][k + 1] -= ak;
    }
    // D = N / (q − p): solve (q − p)·D = N degree by degree, eliminating the
    // highest power of q first.
    let mut d = bivariate_zero(g);
    let mut rem = num;
    for total in (1..=g + 1).rev() {
        for j in (1..=total).rev() {
            let i = total - j;
            let c = rem[i][j].clone();
            if c.is_zero() {
                continue;
            }
            // c p^i q^j = c p^i q^{j−1} (q − p) + c p^{i+1} q^{j−1}
            if i + j - 1 <= g {
                d[i][j - 1] += &c;
            }
            rem[i][j] = BigRational::zero();
            rem[i + 1][j - 1] += &c;
        }
    }
    debug_assert!(rem.iter().flatten().all(|c| c.is_zero()));
    // Homogeneous components of D by total degree.
    let mut log = bivariate_zero(g);
    for total in 1..=g {
        for i in 0..=total {
            let j = total - i;
            let mut acc = &d[i][j] * rat(total as i64);
            for e in 1..total {
                for i1 in 0..=e.min(i) {
                    let j1 = e - i1;
                    if j1 > j || log[i1][j1].is_zero() {
                        continue;
                    }
                    let (i2, j2) = (i - i1, j - j1);
                    acc -= rat(e as i64) * &log[i1][j1] * &d[i2][j2];
                }
            }
            log[i][j] = acc / rat(total as i64);
        }
    }
    log.iter().map(|row| row.iter().map(|c| -c).collect()).collect()
}

/// Route B: `−ln(1 − X) = Σ_r X^r / r`.
fn bivariate_by_power_sum(a: &[BigRational], g: usize) -> Bivariate {
    let x = x_series(a, g);
    let mut out = bivariate_zero(g);
    let mut power = x.clone();
    let mut r = 1;
    while 2 * r <= g {
        for i in 0..=g {
            for j in 0..=g - i {
                if !power[i][j].is_zero() {
                    out[i][j] += &power[i][j] / rat(r as i64);
                }
            }
        }
        power = bmul(&power, &x, g);
        r += 1;
    }
    out
}

/// Result of comparing the bivariate generating function with a table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BivariateReport {
    pub grade: u64,
    pub routes_agree: bool,
    pub table_agrees: bool,
    pub first_mismatch: Option<(u64, u64)>,
}

impl BivariateReport {
    pub fn holds(&self) -> bool {
        self.routes_agree && self.table_agrees
    }
}

/// Compares the coefficient of `p^n q^m` in both expansions of
/// `−ln((f(p) − f(q))/(1/p − 1/q))` with `table` for every `m + n ≤ g`.
pub fn bivariate_compare(a: &[BigRational], table: &GrunskyTable, g: u64) -> BivariateReport {
    let gu = g as usize;
    let by_div = bivariate_by_division(a, gu);
    let by_sum = bivariate_by_power_sum(a, gu);
    let routes_agree = by_div == by_sum;
    let mut first_mismatch = None;
    'outer: for total in 2..=g {
        for m in 1..total {
            let n = total - m;
            let coeff = &by_sum[n as usize][m as usize];
            if table.get(m, n) != Some(coeff) {
                first_mismatch = Some((m, n));
                break 'outer;
            }
        }
    }
    BivariateReport { grade: g, routes_agree, table_agrees: first_mismatch.is_none(), first_mismatch }
}

/// Bivariate check of the Faber-extracted table of `f` to grade `g`.
pub fn grunsky_bivariate_check(f: &QSeries, g: u64) -> Result<bool> {
    let table = grunsky_from_faber(f, g)?;
    let a = normalized_prefix(f, (g as usize).saturating_sub(1))?;
    Ok(bivariate_compare(&a, &table, g).holds())
}

/// Integer coefficient vector `[0, a_1, …]` as rationals.
pub fn to_rationals(a: &[BigInt]) -> Vec<BigRational> {
    a.iter().cloned().map(BigRational::from_integer).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::faber::integer_coeffs;
    use crate::function::FunctionSpec;
    use crate::modular::{j_coefficients, j_oracle};
    use proptest::prelude::*;

    #[test]
    fn j_low_entries() {
        let t = grunsky_from_faber(&j_oracle(exp(12)), 12).unwrap();
        assert_eq!(t.h(1, 1).unwrap(), &rat(196884));
        assert_eq!(t.h(2, 1).unwrap(), &rat(21493760));
        assert_eq!(t.h(1, 2).unwrap(), &rat(21493760));
        assert!(t.h(6, 7).is_err());
    }

    #[test]
    fn fiction_zero_table_vanishes() {
        let f = FunctionSpec::Fiction(0).realize(exp(10)).unwrap();
        let t = grunsky_from_faber(&f, 10).unwrap();
        assert!(t.entries().all(|(_, _, h)| h.is_zero()));
    }

    #[test]
    fn recursion_matches_extraction_on_j() {
        let j = j_oracle(exp(20));
        let a = to_rationals(&j_coefficients(19));
        let by_faber = grunsky_from_faber(&j, 20).unwrap();
        let by_rec = grunsky_by_recursion(&a, 20).unwrap();
        assert_eq!(by_faber, by_rec);
        assert_eq!(by_rec.h(1, 1).unwrap(), &a[1]);
        assert_eq!(by_rec.h(1, 2).unwrap(), &a[2]);
    }

    #[test]
    fn symmetry_from_separate_polynomials() {
        let j = j_oracle(exp(21));
        for m in 1..=10u64 {
            for n in m + 1..=10 {
                if m + n > 20 {
                    continue;
                }
                assert_eq!(
                    grunsky_entry_from_faber(&j, m, n).unwrap(),
                    grunsky_entry_from_faber(&j, n, m).unwrap(),
                    "({m},{n})"
                );
            }
        }
    }

    #[test]
    fn bivariate_routes() {
        let j = j_oracle(exp(8));
        assert!(grunsky_bivariate_check(&j, 8).unwrap());
        let fic = FunctionSpec::Fiction(1).realize(exp(6)).unwrap();
        assert!(grunsky_bivariate_check(&fic, 6).unwrap());
        let a = normalized_prefix(&j, 7).unwrap();
        let mut t = grunsky_from_faber(&j, 8).unwrap();
        let bumped = t.h(2, 3).unwrap() + BigRational::one();
        t.insert(2, 3, bumped);
        let r = bivariate_compare(&a, &t, 8);
        assert!(r.routes_agree);
        assert_eq!(r.first_mismatch, Some((2, 3)));
    }

    #[test]
    fn grading_only_uses_lower_coefficients() {
        let a = to_rationals(&j_coefficients(15));
        let full = grunsky_by_recursion(&a, 16).unwrap();
        let short = grunsky_by_recursion(&a[..11], 11).unwrap();
        assert_eq!(full.restrict(11), short);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn denominators_divide_gcd(tail in proptest::collection::vec(-30i64..=30, 19)) {
            let mut a = vec![0i64];
            a.extend(tail);
            let a = integer_coeffs(&a);
            let t = grunsky_by_recursion(&a, 20).unwrap();
            prop_assert!(t.denominator_violations().is_empty());
        }

        #[test]
        fn routes_agree_on_random_series(tail in proptest::collection::vec(-30i64..=30, 11)) {
            let mut a = vec![0i64];
            a.extend(tail);
            let a = integer_coeffs(&a);
            let f = QSeries::from_normalized(&a);
            let by_faber = grunsky_from_faber(&f, 12).unwrap();
            let by_rec = grunsky_by_recursion(&a, 12).unwrap();
            prop_assert_eq!(&by_faber, &by_rec);
            prop_assert!(bivariate_compare(&a, &by_rec, 12).holds());
        }
    }
}
