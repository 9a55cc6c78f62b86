use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::prelude::*;

use moonshine_core::arith::rat;
use moonshine_core::faber::faber_sequence;
use moonshine_core::grunsky::{grunsky_by_recursion, to_rationals};
use moonshine_core::hecke::{hecke_faber_verify, hecke_tn};
use moonshine_core::mahler::{mahler_compute, SecondReplicate};
use moonshine_core::modular::{j_coefficients, j_oracle};
use moonshine_core::norton::{basis_values, reconstruct_from_basis, NORTON_BASIS};
use moonshine_core::qseries::{exp, QSeries};
use moonshine_core::replicable::{is_replicable, replicate, ReplicationFamily};
use moonshine_core::verify::{run, Fault, Suite, VerifyOptions};
use moonshine_core::FunctionSpec;

fn j_prefix(top: usize) -> Vec<BigRational> {
    to_rationals(&j_coefficients(top))
}

#[test]
fn two_b_through_every_route() {
    let trunc = 40;
    let f = FunctionSpec::two_b().realize(exp(trunc)).unwrap();
    let a = f.normalized_coefficients().unwrap();

    let t = grunsky_by_recursion(&a[..24], 23).unwrap();
    assert!(is_replicable(&t).replicable);

    let rebuilt = reconstruct_from_basis(&basis_values(&a, &NORTON_BASIS), trunc).unwrap();
    assert_eq!(rebuilt, f);

    let seeds: BTreeMap<u64, BigRational> = [1u64, 2, 3, 5].iter().map(|&k| (k, a[k as usize].clone())).collect();
    let by_rec = mahler_compute(&seeds, &SecondReplicate::Series(j_oracle(exp(trunc))), trunc).unwrap();
    assert_eq!(by_rec, f);

    let wide = FunctionSpec::two_b().realize(exp(4 * 19 + 2)).unwrap();
    assert_eq!(replicate(&wide, 2, 20).unwrap(), j_oracle(exp(20)));
}

#[test]
fn computed_family_of_j_passes_hecke() {
    let (n_max, trunc) = (4u64, 12i64);
    let reach = n_max as i64 * trunc + n_max as i64 + 1;
    let j = j_oracle(exp(16 * reach));
    let fam = ReplicationFamily::computed(j, n_max, reach).unwrap();
    assert!(hecke_faber_verify(&fam, n_max, trunc).unwrap().holds());
}

#[test]
fn each_suite_reacts_to_the_fault_as_expected() {
    let clean = run(&Suite::ALL, VerifyOptions::default()).unwrap();
    assert!(clean.verified);
    let broken = run(&Suite::ALL, VerifyOptions { fault: Fault::FaberSign, ..Default::default() }).unwrap();
    let falsified: Vec<Suite> = broken.suites.iter().filter(|s| !s.verified).map(|s| s.suite).collect();
    assert_eq!(falsified, vec![Suite::Faber, Suite::Grunsky, Suite::Hecke]);
}

#[test]
fn untwisted_hecke_on_j_matches_faber() {
    let j = j_oracle(exp(200));
    let a = j_prefix(5);
    let polys = faber_sequence(&a, 5).unwrap();
    for n in 1..=5u64 {
        let t = hecke_tn(&j, n).unwrap();
        let rhs = polys[n as usize].compose(&j).unwrap().scale(&(BigRational::from_integer(1.into()) / rat(n as i64)));
        for e in -(n as i64)..20 {
            assert_eq!(t.coeff_int(e).unwrap(), rhs.coeff_int(e).unwrap(), "n = {n}, q^{e}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hecke_is_linear(xs in prop::collection::vec(-50i64..50, 30), ys in prop::collection::vec(-50i64..50, 30), n in 1u64..7) {
        let mk = |v: &[i64]| {
            let mut a = vec![rat(0)];
            a.extend(v.iter().map(|&x| rat(x)));
            QSeries::from_normalized(&a)
        };
        let (f, g) = (mk(&xs), mk(&ys));
        let sum = f.add(&g).unwrap();
        let lhs = hecke_tn(&sum, n).unwrap();
        let rhs = hecke_tn(&f, n).unwrap().add(&hecke_tn(&g, n).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn grunsky_table_is_integral_times_gcd_for_integer_input(v in prop::collection::vec(-30i64..30, 14)) {
        let mut a = vec![rat(0)];
        a.extend(v.iter().map(|&x| rat(x)));
        let t = grunsky_by_recursion(&a, 14).unwrap();
        // m·h_{m,n} is a coefficient of F_m(f), and h is symmetric.
        for (m, n, h) in t.entries() {
            prop_assert!((h * rat(num_integer::gcd(m, n) as i64)).is_integer(), "h_{{{},{}}} = {}", m, n, h);
        }
    }
}
