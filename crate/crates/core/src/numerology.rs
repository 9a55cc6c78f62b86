//! Small closed arithmetic checks around the `j` coefficients.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::modular::j_coefficients;

/// Number of replicable functions as quoted in the literature. Not computed.
pub const QUOTED_REPLICABLE_COUNT: u64 = 616;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumerologyReport {
    /// `1² + … + 24²`.
    pub square_sum: String,
    pub seventy_squared: String,
    pub square_sum_holds: bool,
    /// `Σ_{k=1}^{24} a_k² mod 70` for the `j` coefficients.
    pub j_square_sum_mod_70: u64,
    pub j_square_sum_holds: bool,
    /// `360 + 256` and `120 + 2·248`.
    pub sum_616_first: u64,
    pub sum_616_second: u64,
    pub sum_616_holds: bool,
    pub quoted_replicable_count: u64,
}

impl NumerologyReport {
    pub fn holds(&self) -> bool {
        self.square_sum_holds && self.j_square_sum_holds && self.sum_616_holds
    }
}

pub fn square_sum(n: u64) -> u64 {
    (1..=n).map(|k| k * k).sum()
}

pub fn j_square_sum_mod(count: usize, modulus: u64) -> u64 {
    let a = j_coefficients(count);
    let s: BigInt = a[1..=count].iter().map(|x| x * x).sum();
    (s % BigInt::from(modulus)).to_u64().expect("residue fits")
}

pub fn numerology() -> NumerologyReport {
    let s = square_sum(24);
    let r = j_square_sum_mod(24, 70);
    let (x, y) = (360 + 256, 120 + 2 * 248);
    NumerologyReport {
        square_sum: s.to_string(),
        seventy_squared: (70u64 * 70).to_string(),
        square_sum_holds: s == 70 * 70,
        j_square_sum_mod_70: r,
        j_square_sum_holds: r == 42,
        sum_616_first: x,
        sum_616_second: y,
        sum_616_holds: x == QUOTED_REPLICABLE_COUNT && y == QUOTED_REPLICABLE_COUNT,
        quoted_replicable_count: QUOTED_REPLICABLE_COUNT,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report() {
        let r = numerology();
        assert!(r.holds());
        assert_eq!(r.square_sum, "4900");
        assert_eq!(r.j_square_sum_mod_70, 42);
    }

    #[test]
    fn square_sum_closed_form() {
        for n in 0..100u64 {
            assert_eq!(square_sum(n), n * (n + 1) * (2 * n + 1) / 6);
        }
        // 24 is the only n > 1 with a square pyramidal number that is square.
        let squares: Vec<u64> = (2..2000u64)
            .filter(|&n| {
                let s = square_sum(n);
                let r = (s as f64).sqrt() as u64;
                (r.saturating_sub(1)..=r + 1).any(|t| t * t == s)
            })
            .collect();
        assert_eq!(squares, vec![24]);
    }

    #[test]
    fn mod_70_depends_on_the_range() {
        assert_ne!(j_square_sum_mod(23, 70), 42);
        assert_ne!(j_square_sum_mod(25, 70), 42);
    }
}
