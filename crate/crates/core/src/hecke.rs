//! Weight-0 Hecke operators on integer-grid Laurent series.
//!
//! `T_n f = (1/n) Σ_{ad=n} Σ_{0≤b<d} f((az+b)/d)`. Summing over `b` keeps
//! only exponents divisible by `d`, so the `q^j` coefficient of `T_n f` is
//! `(1/n) Σ_{a | gcd(n,j), ad=n} d·c(jd/a)`.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{divisors, format_rat, rat};
use crate::error::{Error, Result};
use crate::faber::{faber_sequence_impl, normalized_prefix};
use crate::qseries::{exp, QSeries};
use crate::replicable::ReplicationFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SublatticeRep {
    pub a: u64,
    pub b: u64,
    pub d: u64,
}

/// The `σ₁(n)` matrices `[[a, b], [0, d]]` with `ad = n`, `0 ≤ b < d`,
/// ordered by `a` then `b`.
pub fn sublattice_reps(n: u64) -> Vec<SublatticeRep> {
    assert!(n >= 1, "index must be positive");
    divisors(n)
        .into_iter()
        .flat_map(|a| {
            let d = n / a;
            (0..d).map(move |b| SublatticeRep { a, b, d })
        })
        .collect()
}

fn integer_lead(f: &QSeries) -> Result<i64> {
    if !f.on_integer_grid() {
        return Err(Error::IncompatibleGrid(format!("Hecke operators need integer exponents: {f}")));
    }
    if f.is_zero() {
        return Ok(f.last_known_integer_exponent() + 1);
    }
    Ok(f.lead_exp().to_integer())
}

fn c(f: &QSeries, lead: i64, i: i64) -> Result<BigRational> {
    if i < lead {
        Ok(BigRational::zero())
    } else {
        f.coeff_int(i)
    }
}

fn ceil_div(x: i64, n: i64) -> i64 {
    Integer::div_ceil(&x, &n)
}

/// `T_n f` by the divisor-sum coefficient formula. Known below
/// `ceil(trunc/n)` when `f` is known below `trunc`.
pub fn hecke_tn(f: &QSeries, n: u64) -> Result<QSeries> {
    let lead = integer_lead(f)?;
    let t = f.trunc().ceil().to_integer();
    let ni = n as i64;
    let out_trunc = ceil_div(t, ni);
    let out_lead = (lead * ni).min(lead);
    let mut coeffs = Vec::new();
    for j in out_lead..out_trunc {
        let mut acc = BigRational::zero();
        for a in divisors(n) {
            let ai = a as i64;
            if j % ai != 0 {
                continue;
            }
            let d = ni / ai;
            acc += c(f, lead, j / ai * d)? * rat(d);
        }
        coeffs.push(acc / rat(ni));
    }
    QSeries::new(exp(out_lead), exp(1), coeffs, exp(out_trunc))
}

/// `U_p: Σ c_k q^k ↦ Σ c_{pk} q^k`. Exponents not divisible by `p`, the pole
/// `q^{-1}` among them, are dropped.
pub fn up(f: &QSeries, p: u64) -> Result<QSeries> {
    let lead = integer_lead(f)?;
    let t = f.trunc().ceil().to_integer();
    let pi = p as i64;
    let out_lead = ceil_div(lead, pi);
    let out_trunc = ceil_div(t, pi);
    let coeffs = (out_lead..out_trunc).map(|k| c(f, lead, k * pi)).collect::<Result<Vec<_>>>()?;
    QSeries::new(exp(out_lead), exp(1), coeffs, exp(out_trunc))
}

/// `V_p: f(q) ↦ f(q^p)`.
pub fn vp(f: &QSeries, p: u64) -> Result<QSeries> {
    f.substitute(exp(p as i64))
}

/// `T̂_n f = (1/n) Σ_{ad=n} Σ_b f^{(a)}((az+b)/d)`, the twisted operator that
/// draws the `a`-th term from the replicate `f^{(a)}`.
pub fn twisted_tn(fam: &ReplicationFamily, n: u64) -> Result<QSeries> {
    let ni = n as i64;
    let mut members = Vec::new();
    let mut out_trunc = i64::MAX;
    for a in divisors(n) {
        let g = fam.get(a)?;
        let lead = integer_lead(g)?;
        let t = g.trunc().ceil().to_integer();
        out_trunc = out_trunc.min(ceil_div(t * (a * a) as i64, ni));
        members.push((a as i64, g, lead));
    }
    let out_lead = -ni;
    let mut coeffs = Vec::new();
    for j in out_lead..out_trunc {
        let mut acc = BigRational::zero();
        for (a, g, lead) in &members {
            if j % a != 0 {
                continue;
            }
            let d = ni / a;
            acc += c(g, *lead, j / a * d)? * rat(d);
        }
        coeffs.push(acc / rat(ni));
    }
    QSeries::new(exp(out_lead), exp(1), coeffs, exp(out_trunc))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeMismatch {
    pub exponent: i64,
    pub hecke: String,
    pub faber: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeFaberEntry {
    pub n: u64,
    pub holds: bool,
    pub first_mismatch: Option<HeckeMismatch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeFaberReport {
    pub trunc: i64,
    pub entries: Vec<HeckeFaberEntry>,
}

impl HeckeFaberReport {
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|e| e.holds)
    }
}

/// Compares `T̂_n f` with `F_n(f)/n` below `q^trunc` for `1 ≤ n ≤ n_max`.
pub fn hecke_faber_verify(fam: &ReplicationFamily, n_max: u64, trunc: i64) -> Result<HeckeFaberReport> {
    hecke_faber_verify_impl(fam, n_max, trunc, false)
}

pub(crate) fn hecke_faber_verify_impl(fam: &ReplicationFamily, n_max: u64, trunc: i64, flip: bool) -> Result<HeckeFaberReport> {
    let f = fam.base();
    let a = normalized_prefix(f, n_max as usize)?;
    let polys = faber_sequence_impl(&a, n_max as usize, flip)?;
    let mut entries = Vec::new();
    for n in 1..=n_max {
        let lhs = twisted_tn(fam, n)?;
        let rhs = polys[n as usize].compose(f)?.scale(&(BigRational::one() / rat(n as i64)));
        let top = trunc.min(lhs.trunc().ceil().to_integer()).min(rhs.trunc().ceil().to_integer());
        if top < trunc {
            return Err(Error::InsufficientTruncation { needed: trunc.to_string(), available: top.to_string() });
        }
        let mut first_mismatch = None;
        for e in -(n as i64)..trunc {
            let (l, r) = (lhs.coeff_int(e)?, rhs.coeff_int(e)?);
            if l != r {
                first_mismatch = Some(HeckeMismatch { exponent: e, hecke: format_rat(&l), faber: format_rat(&r) });
                break;
            }
        }
        entries.push(HeckeFaberEntry { n, holds: first_mismatch.is_none(), first_mismatch });
    }
    Ok(HeckeFaberReport { trunc, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sigma;
    use crate::function::FunctionSpec;
    use crate::modular::j_oracle;
    use crate::qseries::Exponent;
    use std::collections::BTreeMap;

    /// Elements of `Q[x]/Φ_d` for `d ≤ 4`, stored as coefficient vectors.
    fn cyclotomic(d: u64) -> Vec<BigRational> {
        // monic Φ_d, ascending
        let v: Vec<i64> = match d {
            1 => vec![-1, 1],
            2 => vec![1, 1],
            3 => vec![1, 1, 1],
            4 => vec![1, 0, 1],
            _ => panic!("oracle covers d ≤ 4"),
        };
        v.into_iter().map(rat).collect()
    }

    fn reduce(mut p: Vec<BigRational>, phi: &[BigRational]) -> Vec<BigRational> {
        let deg = phi.len() - 1;
        while p.len() > deg {
            let top = p.pop().unwrap();
            let shift = p.len() - deg;
            for (i, c) in phi.iter().take(deg).enumerate() {
                p[shift + i] -= &top * c;
            }
        }
        p
    }

    /// `T_n f` by summing `f((az+b)/d)` over the sublattice representatives
    /// with `ζ_d^{bm}` kept symbolic until the end.
    fn hecke_by_substitution(f: &QSeries, n: u64) -> BTreeMap<Exponent, BigRational> {
        let mut sums: BTreeMap<(u64, Exponent), Vec<BigRational>> = BTreeMap::new();
        for rep in sublattice_reps(n) {
            for (e, coef) in f.terms() {
                let m = e.to_integer();
                let power = (rep.b as i64 * m).rem_euclid(rep.d as i64) as usize;
                let new_e = e * Exponent::new(rep.a as i64, rep.d as i64);
                let entry = sums.entry((rep.d, new_e)).or_insert_with(|| vec![BigRational::zero(); 4]);
                entry[power] += coef;
            }
        }
        let mut out: BTreeMap<Exponent, BigRational> = BTreeMap::new();
        for ((d, e), v) in sums {
            let r = reduce(v, &cyclotomic(d));
            assert!(r.iter().skip(1).all(|c| c.is_zero()), "irrational coefficient at {e}");
            *out.entry(e).or_insert_with(BigRational::zero) += &r[0] / rat(n as i64);
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    #[test]
    fn sublattice_counts() {
        assert_eq!(sublattice_reps(1), vec![SublatticeRep { a: 1, b: 0, d: 1 }]);
        assert_eq!(sublattice_reps(2).len(), 3);
        assert_eq!(sublattice_reps(6).len(), 12);
        for n in 1..30 {
            assert_eq!(BigRational::from_integer(sigma(1, n)), rat(sublattice_reps(n).len() as i64));
        }
        let r = sublattice_reps(4);
        assert!(r.windows(2).all(|w| (w[0].a, w[0].b) < (w[1].a, w[1].b)));
    }

    #[test]
    fn t1_is_identity() {
        let j = j_oracle(exp(10));
        assert_eq!(hecke_tn(&j, 1).unwrap(), j);
    }

    #[test]
    fn substitution_oracle_agrees() {
        let f = QSeries::from_integers(-1, [1, 0, 3, -2, 5, 7, 0, -1, 4, 2, 9, -3, 1]);
        for n in 1..=4 {
            let t = hecke_tn(&f, n).unwrap();
            let direct = hecke_by_substitution(&f, n);
            let from_formula: BTreeMap<Exponent, BigRational> = t.terms().map(|(e, c)| (e, c.clone())).collect();
            let known: BTreeMap<Exponent, BigRational> = direct.into_iter().filter(|(e, _)| *e < t.trunc()).collect();
            assert_eq!(from_formula, known, "n = {n}");
        }
    }

    #[test]
    fn t2_of_j_is_half_faber() {
        let j = j_oracle(exp(41));
        let t2 = hecke_tn(&j, 2).unwrap();
        let a1 = j.coeff_int(1).unwrap();
        let f2 = j.mul(&j).unwrap().sub(&QSeries::monomial(a1 * rat(2), exp(0), exp(41)).unwrap()).unwrap();
        let half = f2.scale(&(BigRational::one() / rat(2)));
        assert_eq!(t2, half.truncate(t2.trunc()));
        assert_eq!(t2.lead_exp(), exp(-2));
    }

    #[test]
    fn up_and_vp() {
        let f = QSeries::from_integers(-1, [1, 0, 0, 1]);
        let u = up(&f, 2).unwrap();
        assert_eq!(u.terms().map(|(e, c)| (e, c.clone())).collect::<Vec<_>>(), vec![(exp(1), rat(1))]);
        let g = FunctionSpec::Fiction(1).realize(exp(3)).unwrap();
        let v = vp(&g, 3).unwrap();
        assert_eq!(v.terms().map(|(e, _)| e).collect::<Vec<_>>(), vec![exp(-3), exp(3)]);
    }

    #[test]
    fn twisted_collapses_for_j() {
        let j = j_oracle(exp(60));
        let fam = ReplicationFamily::self_replicating(j.clone(), 6).unwrap();
        assert_eq!(twisted_tn(&fam, 2).unwrap(), hecke_tn(&j, 2).unwrap());
        assert_eq!(twisted_tn(&fam, 1).unwrap(), j);
    }

    #[test]
    fn hecke_faber_on_families() {
        let j = ReplicationFamily::self_replicating(j_oracle(exp(200)), 6).unwrap();
        assert!(hecke_faber_verify(&j, 6, 30).unwrap().holds());
        let two_b = ReplicationFamily::two_b(6, 200).unwrap();
        assert!(hecke_faber_verify(&two_b, 6, 30).unwrap().holds());
        let fic = ReplicationFamily::fiction(-1, 4, 40).unwrap();
        assert!(hecke_faber_verify(&fic, 4, 8).unwrap().holds());
    }

    #[test]
    fn wrong_family_fails_at_two() {
        let f = FunctionSpec::two_b().realize(exp(200)).unwrap();
        let fam = ReplicationFamily::self_replicating(f, 2).unwrap();
        let r = hecke_faber_verify(&fam, 2, 30).unwrap();
        assert!(r.entries[0].holds);
        assert!(!r.entries[1].holds);
        assert!(r.entries[1].first_mismatch.is_some());
    }

    #[test]
    fn self_fiction_minus_one_is_not_a_family() {
        let f = FunctionSpec::Fiction(-1).realize(exp(40)).unwrap();
        let fam = ReplicationFamily::self_replicating(f, 4).unwrap();
        let r = hecke_faber_verify(&fam, 4, 8).unwrap();
        assert!(r.entries[0].holds);
        assert!(!r.entries[1].holds);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(50))]
            #[test]
            fn tp_splits(coeffs in proptest::collection::vec(-50i64..50, 40), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
                let mut c = vec![1i64, 0];
                c.extend(coeffs);
                let f = QSeries::from_integers(-1, c);
                let lhs = hecke_tn(&f, p).unwrap();
                let rhs = vp(&f, p).unwrap().scale(&(BigRational::one() / rat(p as i64))).add(&up(&f, p).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn pole_is_normalized(n in 1u64..7) {
                let j = ReplicationFamily::self_replicating(j_oracle(exp(60)), 6).unwrap();
                let t = twisted_tn(&j, n).unwrap();
                prop_assert_eq!(t.lead_exp(), exp(-(n as i64)));
                prop_assert_eq!(t.coeff_int(-(n as i64)).unwrap() * rat(n as i64), rat(1));
            }
        }
    }
}
