//! Verification suites over the whole toolkit.
//!
//! Each suite runs a fixed list of checks and reports every one of them with
//! the range it covered. A [`Fault`] can be injected to confirm that the
//! suites notice a broken construction.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::rat;
use crate::error::{Error, Result};
use crate::faber::{
    faber_by_determinant, faber_by_elimination, faber_sequence_impl, integer_coeffs,
    elementary_identity_all_negative, symmetric_function_check, FaberPolynomial,
};
use crate::function::FunctionSpec;
use crate::grunsky::{bivariate_compare, grunsky_by_recursion, to_rationals, GrunskyTable};
use crate::hecke::{hecke_faber_verify_impl, hecke_tn, up, vp};
use crate::mahler::{display_cross_check, derive_rules, mahler_compute, odd_level_experiment, Coefficients, SecondReplicate};
use crate::modular::{j_coefficients, j_oracle};
use crate::norton::{
    basis_values, case_analysis_pair, exhaustive_pair, irreducible_grades, reconstruct_from_basis, NORTON_BASIS,
};
use crate::qseries::{exp, QSeries};
use crate::replicable::{inverse_identity_check, is_replicable, mod_p_congruence, replicate, ReplicationFamily};

/// A deliberate defect threaded through the Faber-based checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Flips the sign of the `(n+1)a_n` term in the Faber recursion.
    FaberSign,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Fault::None),
            "faber-sign" => Ok(Fault::FaberSign),
            _ => Err(Error::Parse(format!("unknown fault {s:?}"))),
        }
    }
}

impl Fault {
    fn flip(self) -> bool {
        self == Fault::FaberSign
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Faber,
    Grunsky,
    Replicable,
    Basis,
    Hecke,
    Mahler,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Faber, Suite::Grunsky, Suite::Replicable, Suite::Basis, Suite::Hecke, Suite::Mahler];

    /// Suites named by `name`, where `all` expands to every suite.
    pub fn parse_selection(name: &str) -> Result<Vec<Suite>> {
        if name == "all" {
            Ok(Self::ALL.to_vec())
        } else {
            Ok(vec![name.parse()?])
        }
    }

    fn default_trunc(self) -> i64 {
        match self {
            Suite::Basis => 50,
            Suite::Mahler => 200,
            _ => 30,
        }
    }

    fn default_grade(self) -> u64 {
        match self {
            Suite::Faber | Suite::Grunsky => 12,
            Suite::Replicable => 24,
            Suite::Basis => 500,
            Suite::Hecke | Suite::Mahler => 6,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Faber => "faber",
            Suite::Grunsky => "grunsky",
            Suite::Replicable => "replicable",
            Suite::Basis => "basis",
            Suite::Hecke => "hecke",
            Suite::Mahler => "mahler",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    pub trunc: Option<i64>,
    pub grade: Option<u64>,
    pub fault: Fault,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    /// Informational checks are reported but do not affect the verdict.
    pub informational: bool,
    pub detail: Value,
}

impl Check {
    fn new(name: &str, holds: bool, detail: Value) -> Self {
        Check { name: name.into(), holds, informational: false, detail }
    }

    fn info(name: &str, holds: bool, detail: Value) -> Self {
        Check { name: name.into(), holds, informational: true, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub verified: bool,
    pub trunc: i64,
    pub grade: u64,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub verified: bool,
    pub suites: Vec<SuiteReport>,
}

pub fn run(suites: &[Suite], opts: VerifyOptions) -> Result<VerifyReport> {
    let reports = suites.par_iter().map(|&s| run_suite(s, opts)).collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { verified: reports.iter().all(|r| r.verified), suites: reports })
}

pub fn run_suite(suite: Suite, opts: VerifyOptions) -> Result<SuiteReport> {
    let trunc = opts.trunc.unwrap_or(suite.default_trunc());
    let grade = opts.grade.unwrap_or(suite.default_grade());
    if trunc < 2 || grade < 2 {
        return Err(Error::InvalidArgument("trunc and grade must be at least 2".into()));
    }
    let checks = match suite {
        Suite::Faber => faber_suite(grade.min(40) as usize, opts.fault)?,
        Suite::Grunsky => grunsky_suite(grade, opts.fault)?,
        Suite::Replicable => replicable_suite(grade, trunc)?,
        Suite::Basis => basis_suite(grade, trunc)?,
        Suite::Hecke => hecke_suite(grade, trunc, opts.fault)?,
        Suite::Mahler => mahler_suite(trunc)?,
    };
    let verified = checks.iter().all(|c| c.informational || c.holds);
    Ok(SuiteReport { suite, verified, trunc, grade, checks })
}

fn faber(a: &[BigRational], n: usize, fault: Fault) -> Result<Vec<FaberPolynomial>> {
    faber_sequence_impl(a, n, fault.flip())
}

fn j_prefix(top: usize) -> Vec<BigRational> {
    to_rationals(&j_coefficients(top))
}

/// Integer series `q^{-1} + Σ c_k q^k` with coefficients from a fixed
/// arithmetic scramble.
fn scrambled(seed: i64, len: usize) -> Vec<BigRational> {
    (0..len as i64)
        .map(|i| if i == 0 { BigRational::zero() } else { rat((i * i * 31 + 17 * i * seed + 7 * seed * seed) % 201 - 100) })
        .collect()
}

fn faber_suite(n: usize, fault: Fault) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let a = j_prefix(n.max(3));
    let polys = faber(&a, 3, fault)?;
    let f2 = vec![rat(1), rat(0), -&a[1] * rat(2)];
    let f3 = vec![rat(1), rat(0), -&a[1] * rat(3), -&a[2] * rat(3)];
    let closed = polys[2].coeffs() == f2 && polys[3].coeffs() == f3;
    checks.push(Check::new("closed forms of F_2 and F_3 on j", closed, json!({ "F_2": polys[2].to_string(), "F_3": polys[3].to_string() })));

    let mut inputs: Vec<(String, Vec<BigRational>)> = vec![("j".into(), j_prefix(n)), ("fiction:c=1".into(), {
        let mut v = vec![rat(0); n + 1];
        v[1] = rat(1);
        v
    })];
    for s in 1..=4 {
        inputs.push((format!("scrambled:{s}"), scrambled(s, n + 1)));
    }
    for (name, a) in &inputs {
        let rec = faber(a, n, fault)?;
        let f = QSeries::from_normalized(a);
        let mut first = None;
        for k in 1..=n {
            let e = faber_by_elimination(&f, k)?;
            let d = faber_by_determinant(a, k)?;
            if rec[k] != e || rec[k] != d {
                first = Some(k);
                break;
            }
        }
        checks.push(Check::new(
            &format!("recursion, elimination and determinant agree on {name}"),
            first.is_none(),
            json!({ "max_degree": n, "first_disagreement": first }),
        ));
    }
    let x = integer_coeffs(&[2, -3, 5, 7]);
    checks.push(Check::new("power-sum generating functions", symmetric_function_check(&x, 8), json!({ "order": 8 })));
    checks.push(Check::new(
        "all-negative elementary form is refuted",
        !elementary_identity_all_negative(&x, 8),
        json!({ "order": 8 }),
    ));
    Ok(checks)
}

fn extracted_table(f: &QSeries, a: &[BigRational], g: u64, fault: Fault) -> Result<GrunskyTable> {
    let polys = faber(a, g as usize, fault)?;
    let mut t = GrunskyTable::empty(g);
    for m in 1..g {
        let fm = polys[m as usize].compose(f)?;
        for n in m..=g - m {
            t.insert(m, n, fm.coeff_int(n as i64)? / rat(m as i64));
        }
    }
    Ok(t)
}

fn grunsky_suite(g: u64, fault: Fault) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let a = j_prefix(g as usize);
    let f = QSeries::from_normalized(&a);
    let extracted = extracted_table(&f, &a, g, fault)?;
    let recursed = grunsky_by_recursion(&a, g)?;
    let mismatch = recursed.entries().find(|(m, n, h)| extracted.get(*m, *n) != Some(*h)).map(|(m, n, _)| (m, n));
    checks.push(Check::new("extraction and recursion agree on j", mismatch.is_none(), json!({ "grade": g, "first_mismatch": mismatch })));

    let s = g.min(10);
    let polys = faber(&a, s as usize, fault)?;
    let mut asym = None;
    'outer: for m in 1..=s / 2 {
        for n in m + 1..=s - m {
            let hmn = polys[m as usize].compose(&f)?.coeff_int(n as i64)? / rat(m as i64);
            let hnm = polys[n as usize].compose(&f)?.coeff_int(m as i64)? / rat(n as i64);
            if hmn != hnm {
                asym = Some((m, n));
                break 'outer;
            }
        }
    }
    checks.push(Check::new("h_{m,n} = h_{n,m} on j", asym.is_none(), json!({ "grade": s, "first_asymmetry": asym })));

    let deep = grunsky_by_recursion(&j_prefix(40), 40)?;
    let violations = deep.denominator_violations();
    checks.push(Check::new("gcd(m,n) h_{m,n} integral on j", violations.is_empty(), json!({ "grade": 40, "violations": violations })));

    let b = g.min(12);
    let report = bivariate_compare(&a[..b as usize], &extracted.restrict(b), b);
    checks.push(Check::new("bivariate logarithm matches the table", report.holds(), serde_json::to_value(&report).expect("report")));
    Ok(checks)
}

fn replicable_suite(g: u64, trunc: i64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let a = j_prefix(g as usize);
    let verdict = is_replicable(&grunsky_by_recursion(&a, g)?);
    checks.push(Check::new("j is replicable", verdict.replicable, serde_json::to_value(&verdict).expect("verdict")));
    let mut caught = Vec::new();
    for i in 1..=6usize {
        let mut b = a.clone();
        b[i] += BigRational::one();
        caught.push(!is_replicable(&grunsky_by_recursion(&b, g)?).replicable);
    }
    checks.push(Check::new("perturbing any of a_1..a_6 breaks replicability", caught.iter().all(|&c| c), json!({ "caught": caught })));

    let ks = [2u64, 3, 4, 6];
    let j = j_oracle(exp(36 * (trunc - 1) + 1));
    let mut bad = Vec::new();
    for k in ks {
        if replicate(&j, k, trunc)? != j.truncate(exp(trunc)) {
            bad.push(k);
        }
    }
    checks.push(Check::new("f^(k) = j for k in {2,3,4,6}", bad.is_empty(), json!({ "trunc": trunc, "failing": bad })));

    let fam = ReplicationFamily::self_replicating(j.truncate(exp((g * g / 4) as i64 + 1)), 4)?;
    let inv = inverse_identity_check(&fam, &grunsky_by_recursion(&a, g)?, 4)?;
    checks.push(Check::new("inverse replication identity, gcd <= 4", inv.holds, serde_json::to_value(&inv).expect("report")));

    let two_b = FunctionSpec::two_b().realize(exp(51))?;
    let cong = mod_p_congruence(&two_b, &j_oracle(exp(51)), 2, 50)?;
    checks.push(Check::new("2B congruent to its replicate mod 2", cong, json!({ "bound": 50 })));
    Ok(checks)
}

fn basis_suite(grade: u64, trunc: i64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let irr = irreducible_grades(24);
    let expected: Vec<u64> = NORTON_BASIS.iter().map(|k| k + 1).collect();
    checks.push(Check::new("irreducible grades up to 24", irr == expected, json!({ "grades": irr })));
    let mut disagreements = Vec::new();
    let mut invalid = Vec::new();
    for n in 2..=grade {
        let c = case_analysis_pair(n);
        if c.is_some() != exhaustive_pair(n).is_some() {
            disagreements.push(n);
        }
        if c.is_some_and(|p| !p.is_valid()) {
            invalid.push(n);
        }
    }
    checks.push(Check::new(
        "case analysis agrees with exhaustive search",
        disagreements.is_empty() && invalid.is_empty(),
        json!({ "grade": grade, "disagreements": disagreements, "invalid_pairs": invalid }),
    ));
    let a = j_prefix((trunc - 1).max(23) as usize);
    let rebuilt = reconstruct_from_basis(&basis_values(&a, &NORTON_BASIS), trunc)?;
    checks.push(Check::new(
        "j rebuilt from its basis values",
        rebuilt == QSeries::from_normalized(&a).truncate(exp(trunc)),
        json!({ "trunc": trunc }),
    ));
    let basis: BTreeMap<u64, BigRational> = NORTON_BASIS.iter().map(|&k| (k, if k == 1 { rat(1) } else { rat(0) })).collect();
    let fic = reconstruct_from_basis(&basis, trunc)?;
    checks.push(Check::new(
        "q^-1 + q rebuilt from its basis values",
        fic == FunctionSpec::Fiction(1).realize(exp(trunc))?,
        json!({ "trunc": trunc }),
    ));
    Ok(checks)
}

fn hecke_suite(n_max: u64, trunc: i64, fault: Fault) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut split_failures = Vec::new();
    for s in 0..50 {
        let f = QSeries::from_normalized(&scrambled(s + 1, 60));
        for p in [2u64, 3, 5, 7] {
            let rhs = vp(&f, p)?.scale(&(BigRational::one() / rat(p as i64))).add(&up(&f, p)?)?;
            if hecke_tn(&f, p)? != rhs {
                split_failures.push((s, p));
            }
        }
    }
    checks.push(Check::new("T_p = V_p/p + U_p", split_failures.is_empty(), json!({ "series": 50, "failures": split_failures })));

    let reach = (n_max as i64) * trunc + n_max as i64 + 1;
    let families = [
        ("j", ReplicationFamily::self_replicating(j_oracle(exp(reach)), n_max)?),
        ("fiction:c=-1", ReplicationFamily::fiction(-1, n_max, reach)?),
        ("fiction:c=0", ReplicationFamily::fiction(0, n_max, reach)?),
        ("fiction:c=1", ReplicationFamily::fiction(1, n_max, reach)?),
        ("2B", ReplicationFamily::two_b(n_max, reach)?),
    ];
    for (name, fam) in &families {
        let r = hecke_faber_verify_impl(fam, n_max, trunc, fault.flip())?;
        checks.push(Check::new(&format!("twisted Hecke equals F_n/n on {name}"), r.holds(), serde_json::to_value(&r).expect("report")));
    }
    let wrong = ReplicationFamily::self_replicating(FunctionSpec::two_b().realize(exp(reach))?, 2)?;
    let r = hecke_faber_verify_impl(&wrong, 2, trunc, fault.flip())?;
    let caught = r.entries.len() == 2 && r.entries[0].holds && !r.entries[1].holds;
    checks.push(Check::new("2B with f^(2) := f fails at n = 2", caught, serde_json::to_value(&r).expect("report")));
    Ok(checks)
}

fn seeds_of(a: &[BigRational], idx: &[u64]) -> BTreeMap<u64, BigRational> {
    idx.iter().map(|&k| (k, a[k as usize].clone())).collect()
}

fn mahler_suite(trunc: i64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let rules = derive_rules(true)?;
    checks.push(Check::new(
        "derived seeds are a_1, a_2, a_3, a_5",
        rules.seeds == [1, 2, 3, 5],
        json!({ "seeds": rules.seeds, "rules": rules.rules.iter().map(|r| r.to_string()).collect::<Vec<_>>() }),
    ));
    let a = j_prefix((trunc - 1) as usize);
    let f = mahler_compute(&seeds_of(&a, &rules.seeds), &SecondReplicate::SelfReplicate, trunc)?;
    let first = (1..trunc).find(|&i| f.coeff_int(i).ok() != Some(a[i as usize].clone()));
    checks.push(Check::new("recurrence reproduces j", first.is_none(), json!({ "trunc": trunc, "first_mismatch": first })));

    let t2 = trunc.min(100);
    let two_b = FunctionSpec::two_b().realize(exp(t2))?;
    let b = two_b.normalized_coefficients()?;
    let rebuilt = mahler_compute(&seeds_of(&b, &rules.seeds), &SecondReplicate::Series(j_oracle(exp(t2))), t2)?;
    checks.push(Check::new("recurrence reproduces 2B from f^(2) = j", rebuilt == two_b, json!({ "trunc": t2 })));

    let ja = j_prefix(80);
    let display = display_cross_check(&Coefficients { a: &ja, b: None }, 12);
    let repaired = display.iter().all(|d| d.repaired_holds);
    checks.push(Check::new("repaired displayed rules hold on j", repaired, serde_json::to_value(&display).expect("display")));
    checks.push(Check::info(
        "displayed rules hold as printed",
        display.iter().all(|d| d.literal_holds),
        json!(display.iter().map(|d| (d.residue, d.literal_holds)).collect::<Vec<_>>()),
    ));
    let odd = odd_level_experiment(&j_oracle(exp(30)), 30)?;
    checks.push(Check::info("odd level: a_1, a_2, a_3, a_5 determine j", odd.matches_oracle, serde_json::to_value(&odd).expect("odd")));
    Ok(checks)
}
