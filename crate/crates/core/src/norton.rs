//! Reducing pairs and reconstruction from the twelve basis coefficients.
//!
//! A reducing pair at grade `N` is `(r, s) → (r', s')` with `r + s = N`,
//! equal gcd and lcm, and `r' + s' < N`. Replicability gives
//! `h_{r,s} = h_{r',s'}`, which fixes `a_{N-1}` through the Grunsky recursion.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::format_rat;
use crate::error::{Error, Result};
use crate::grunsky::{recursion_correction, GrunskyTable};
use crate::qseries::QSeries;

/// Indices `k` whose `h_k` generate all coefficients of a replicable function.
pub const NORTON_BASIS: [u64; 12] = [1, 2, 3, 4, 5, 7, 8, 9, 11, 17, 19, 23];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReducingPair {
    pub grade: u64,
    pub from_pair: (u64, u64),
    pub to_pair: (u64, u64),
}

impl ReducingPair {
    fn new(grade: u64, from_pair: (u64, u64), to_pair: (u64, u64)) -> Self {
        ReducingPair { grade, from_pair, to_pair }
    }

    pub fn scaled(&self, k: u64) -> Self {
        let (r, s) = self.from_pair;
        let (u, v) = self.to_pair;
        ReducingPair::new(self.grade * k, (r * k, s * k), (u * k, v * k))
    }

    /// The defining conditions checked by direct arithmetic.
    pub fn is_valid(&self) -> bool {
        let (r, s) = self.from_pair;
        let (u, v) = self.to_pair;
        r >= 1
            && s >= 1
            && u >= 1
            && v >= 1
            && r + s == self.grade
            && r.gcd(&s) == u.gcd(&v)
            && r.lcm(&s) == u.lcm(&v)
            && u + v < self.grade
    }
}

fn two_adic(n: u64) -> u32 {
    n.trailing_zeros()
}

fn base_case(n: u64) -> Option<ReducingPair> {
    match n {
        16 => return Some(ReducingPair::new(16, (1, 15), (3, 5))),
        36 => return Some(ReducingPair::new(36, (1, 35), (5, 7))),
        40 => return Some(ReducingPair::new(40, (1, 39), (3, 13))),
        _ => {}
    }
    if n % 2 == 1 && n > 1 {
        let m = n - 1;
        if m.is_power_of_two() {
            let a = two_adic(m);
            if a >= 4 {
                let p = 1u64 << a;
                return Some(ReducingPair::new(n, (p - 2, 3), (p / 2 - 1, 6)));
            }
            return None;
        }
        let r = two_adic(m);
        return Some(ReducingPair::new(n, (m, 1), (m >> r, 1 << r)));
    }
    None
}

/// The pair given by the case analysis: the explicit cases at their own
/// grade, otherwise a case at the largest proper divisor scaled up.
pub fn case_analysis_pair(n: u64) -> Option<ReducingPair> {
    if n < 2 {
        return None;
    }
    let mut divs = crate::arith::divisors(n);
    divs.reverse();
    divs.into_iter().filter(|&d| d >= 2).find_map(|d| base_case(d).map(|p| p.scaled(n / d)))
}

/// Every reducing pair at grade `n` with `r ≤ s` and `r' ≤ s'`.
pub fn all_reducing_pairs(n: u64) -> Vec<ReducingPair> {
    let mut out = Vec::new();
    for r in 1..=n / 2 {
        let s = n - r;
        let (g, prod) = (r.gcd(&s), r * s);
        let mut u = g;
        while u * u <= prod {
            if prod % u == 0 {
                let v = prod / u;
                if u + v < n && u.gcd(&v) == g {
                    out.push(ReducingPair::new(n, (r, s), (u, v)));
                }
            }
            u += g;
        }
    }
    out
}

/// Deterministic choice among all reducing pairs: smallest `r' + s'`, then
/// smallest `r'`, then smallest `r`.
pub fn exhaustive_pair(n: u64) -> Option<ReducingPair> {
    all_reducing_pairs(n).into_iter().min_by_key(|p| (p.to_pair.0 + p.to_pair.1, p.to_pair.0, p.from_pair.0))
}

/// Case analysis first, exhaustive search when it has nothing to say.
pub fn find_reducing_pair(n: u64) -> Option<ReducingPair> {
    case_analysis_pair(n).or_else(|| exhaustive_pair(n))
}

/// Grades in `2..=limit` admitting no reducing pair.
pub fn irreducible_grades(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&n| all_reducing_pairs(n).is_empty()).collect()
}

/// Parses `{"h": {"1": "196884", …}}`.
pub fn basis_from_json(v: &serde_json::Value) -> Result<BTreeMap<u64, BigRational>> {
    let h = v
        .get("h")
        .and_then(|h| h.as_object())
        .ok_or_else(|| Error::Parse("basis JSON needs an object under \"h\"".into()))?;
    let mut out = BTreeMap::new();
    for (k, val) in h {
        let k: u64 = k.parse().map_err(|_| Error::Parse(format!("bad basis index {k:?}")))?;
        let s = val.as_str().ok_or_else(|| Error::Parse(format!("basis value for {k} must be a string")))?;
        out.insert(k, crate::arith::parse_rat(s)?);
    }
    Ok(out)
}

pub fn basis_to_json(basis: &BTreeMap<u64, BigRational>) -> serde_json::Value {
    let h: serde_json::Map<String, serde_json::Value> =
        basis.iter().map(|(k, v)| (k.to_string(), serde_json::Value::String(format_rat(v)))).collect();
    serde_json::json!({ "h": h })
}

/// The given coefficients restricted to the indices in `indices`.
pub fn basis_values(a: &[BigRational], indices: &[u64]) -> BTreeMap<u64, BigRational> {
    indices.iter().filter(|&&k| (k as usize) < a.len()).map(|&k| (k, a[k as usize].clone())).collect()
}

/// Rebuilds `q^{-1} + Σ a_k q^k` below `q^trunc` from `a_k` for `k` in the
/// basis, assuming replicability. Indices present in `basis` are taken as
/// given; every other `a_k` comes from a reducing pair at grade `k + 1`.
pub fn reconstruct_from_basis(basis: &BTreeMap<u64, BigRational>, trunc: i64) -> Result<QSeries> {
    let (a, _) = reconstruct_with_table(basis, trunc)?;
    Ok(QSeries::from_normalized(&a))
}

/// As [`reconstruct_from_basis`], also returning the Grunsky table built on
/// the way.
pub fn reconstruct_with_table(basis: &BTreeMap<u64, BigRational>, trunc: i64) -> Result<(Vec<BigRational>, GrunskyTable)> {
    if trunc < 1 {
        return Err(Error::InvalidArgument("trunc must be at least 1".into()));
    }
    let top = (trunc - 1) as u64;
    let integral_input = basis.values().all(|v| v.is_integer());
    let mut a = vec![BigRational::zero()];
    let mut table = GrunskyTable::empty(top + 1);
    for k in 1..=top {
        let grade = k + 1;
        let ak = match basis.get(&k) {
            Some(v) => v.clone(),
            None => {
                let pair = exhaustive_pair(grade).ok_or(Error::DescentFailure(grade))?;
                let (r, s) = pair.from_pair;
                let (u, v) = pair.to_pair;
                let target = table.h(u, v)?.clone();
                let ak = target - recursion_correction(&table, &a, r, s)?;
                if integral_input && !ak.is_integer() {
                    return Err(Error::NonIntegral { location: format!("a_{k}"), value: format_rat(&ak) });
                }
                ak
            }
        };
        a.push(ak);
        for m in 1..=grade / 2 {
            let n = grade - m;
            let h = &a[(m + n - 1) as usize] + recursion_correction(&table, &a, m, n)?;
            table.insert(m, n, h);
        }
    }
    Ok((a, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::grunsky::to_rationals;
    use crate::modular::j_coefficients;

    #[test]
    fn explicit_cases() {
        assert_eq!(find_reducing_pair(16), Some(ReducingPair::new(16, (1, 15), (3, 5))));
        assert_eq!(find_reducing_pair(40), Some(ReducingPair::new(40, (1, 39), (3, 13))));
        assert_eq!(find_reducing_pair(72), Some(ReducingPair::new(72, (2, 70), (10, 14))));
        assert_eq!(case_analysis_pair(17), Some(ReducingPair::new(17, (14, 3), (7, 6))));
        assert_eq!(case_analysis_pair(13), Some(ReducingPair::new(13, (12, 1), (3, 4))));
        assert_eq!(find_reducing_pair(24), None);
        assert!(all_reducing_pairs(24).is_empty());
    }

    #[test]
    fn irreducible_set() {
        assert_eq!(irreducible_grades(24), vec![2, 3, 4, 5, 6, 8, 9, 10, 12, 18, 20, 24]);
        let from_basis: Vec<u64> = NORTON_BASIS.iter().map(|k| k + 1).collect();
        let mut expected = irreducible_grades(24);
        expected.sort();
        assert_eq!(from_basis, expected);
    }

    #[test]
    fn case_analysis_matches_exhaustive() {
        for n in 2..=200 {
            let c = case_analysis_pair(n);
            assert_eq!(c.is_some(), exhaustive_pair(n).is_some(), "grade {n}");
            if let Some(p) = c {
                assert!(p.is_valid(), "{p:?}");
                assert_eq!(p.grade, n);
            }
        }
    }

    #[test]
    fn reconstructs_j() {
        let a = to_rationals(&j_coefficients(40));
        let basis = basis_values(&a, &NORTON_BASIS);
        let (b, _) = reconstruct_with_table(&basis, 41).unwrap();
        assert_eq!(b, a);
    }

    #[test]
    fn reconstructs_fiction() {
        let basis: BTreeMap<u64, BigRational> =
            NORTON_BASIS.iter().map(|&k| (k, if k == 1 { rat(1) } else { rat(0) })).collect();
        let f = reconstruct_from_basis(&basis, 20).unwrap();
        let mut expected = vec![rat(0); 20];
        expected[1] = rat(1);
        assert_eq!(f, QSeries::from_normalized(&expected));
    }

    #[test]
    fn grade_seven_descent() {
        let a = to_rationals(&j_coefficients(6));
        let mut basis = basis_values(&a, &NORTON_BASIS);
        basis.retain(|&k, _| k < 6);
        let (b, _) = reconstruct_with_table(&basis, 7).unwrap();
        assert_eq!(exhaustive_pair(7).unwrap(), ReducingPair::new(7, (1, 6), (2, 3)));
        assert_eq!(b[6], a[6]);
    }

    #[test]
    fn missing_basis_value_is_a_descent_failure() {
        let mut basis = basis_values(&to_rationals(&j_coefficients(10)), &NORTON_BASIS);
        basis.remove(&4);
        assert_eq!(reconstruct_from_basis(&basis, 10), Err(Error::DescentFailure(5)));
    }

    #[test]
    fn basis_json_round_trip() {
        let basis = basis_values(&to_rationals(&j_coefficients(23)), &NORTON_BASIS);
        let v = basis_to_json(&basis);
        assert_eq!(v["h"]["1"], "196884");
        assert_eq!(basis_from_json(&v).unwrap(), basis);
        assert!(basis_from_json(&serde_json::json!({"h": {"1": 3}})).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn returned_pairs_are_valid(n in 2u64..2000) {
                if let Some(p) = find_reducing_pair(n) {
                    prop_assert!(p.is_valid());
                }
                prop_assert_eq!(case_analysis_pair(n).is_some(), exhaustive_pair(n).is_some());
            }

            #[test]
            fn integral_basis_stays_integral(values in proptest::collection::vec(-3i64..4, 12)) {
                let basis: BTreeMap<u64, BigRational> = NORTON_BASIS.iter().zip(&values).map(|(&k, &v)| (k, rat(v))).collect();
                let (a, _) = reconstruct_with_table(&basis, 26).unwrap();
                prop_assert!(a.iter().all(|x| x.is_integer()));
            }
        }
    }
}
