//! Named source functions and their realization as normalized series.
//!
//! Text grammar:
//!
//! ```text
//! j
//! fiction:c=<-1|0|1>
//! eta:<frame>            raw eta quotient
//! eta:<frame>+<int>      eta quotient plus a constant
//! eta:<frame>-<int>
//! eta:<frame>+shift      constant chosen to cancel the q^0 term
//! explicit:a1,a2,...     q^-1 + a1 q + a2 q^2 + ...
//! ```

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{format_rat, parse_rat, rat};
use crate::error::{Error, Result};
use crate::frames::{eta_product, FrameShape};
use crate::modular::j_oracle;
use crate::qseries::{exp, Exponent, QSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionSpec {
    J,
    /// Eta quotient plus an optional constant. `+shift` is resolved to a
    /// concrete constant when parsed.
    EtaQuotient { frame: FrameShape, shift: Option<BigRational> },
    Fiction(i8),
    /// `[a_1, a_2, …]` of `q^{-1} + Σ a_k q^k`.
    Explicit(Vec<BigRational>),
}

impl FunctionSpec {
    pub fn fiction(c: i8) -> Result<Self> {
        if !(-1..=1).contains(&c) {
            return Err(Error::InvalidArgument(format!("fiction constant must be -1, 0 or 1, got {c}")));
        }
        Ok(FunctionSpec::Fiction(c))
    }

    /// Eta quotient with the constant that cancels its `q^0` term.
    pub fn eta_normalized(frame: FrameShape) -> Self {
        let c0 = eta_product(&frame, exp(1)).coeff_int(0).unwrap_or_else(|_| BigRational::zero());
        FunctionSpec::EtaQuotient { frame, shift: Some(-c0) }
    }

    /// The 2B function `η(q)^24/η(q^2)^24 + 24`.
    pub fn two_b() -> Self {
        FunctionSpec::EtaQuotient {
            frame: "1^24/2^24".parse().expect("static frame"),
            shift: Some(rat(24)),
        }
    }

    /// The spec of `f^{(2)}` when it is known in closed form.
    pub fn second_replicate(&self) -> Option<FunctionSpec> {
        match self {
            FunctionSpec::J => Some(FunctionSpec::J),
            FunctionSpec::Fiction(c) => Some(FunctionSpec::Fiction(c * c)),
            s if *s == FunctionSpec::two_b() => Some(FunctionSpec::J),
            _ => None,
        }
    }

    /// Normalized series `q^{-1} + Σ a_k q^k` known below `q^trunc`.
    pub fn realize(&self, trunc: Exponent) -> Result<QSeries> {
        let f = self.expand(trunc)?;
        if !f.is_normalized() {
            return Err(Error::NotNormalized(format!("{self} realizes to {f}")));
        }
        Ok(f)
    }

    /// Series for the spec without demanding the normalized shape.
    pub fn expand(&self, trunc: Exponent) -> Result<QSeries> {
        match self {
            FunctionSpec::J => Ok(j_oracle(trunc)),
            FunctionSpec::Fiction(c) => {
                let pole = QSeries::monomial(BigRational::one(), exp(-1), trunc)?;
                pole.add(&QSeries::monomial(rat(*c as i64), exp(1), trunc)?)
            }
            FunctionSpec::EtaQuotient { frame, shift } => {
                let e = eta_product(frame, trunc);
                match shift {
                    Some(s) if !s.is_zero() => e.add(&QSeries::monomial(s.clone(), exp(0), trunc)?),
                    _ => Ok(e),
                }
            }
            FunctionSpec::Explicit(a) => {
                let available = exp(a.len() as i64 + 1);
                if trunc > available {
                    return Err(Error::InsufficientTruncation {
                        needed: trunc.to_string(),
                        available: available.to_string(),
                    });
                }
                let mut coeffs = vec![BigRational::zero()];
                coeffs.extend(a.iter().cloned());
                Ok(QSeries::from_normalized(&coeffs).truncate(trunc))
            }
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::J => write!(f, "j"),
            FunctionSpec::Fiction(c) => write!(f, "fiction:c={c}"),
            FunctionSpec::EtaQuotient { frame, shift } => {
                write!(f, "eta:{frame}")?;
                if let Some(s) = shift {
                    if s >= &BigRational::zero() {
                        write!(f, "+")?;
                    }
                    write!(f, "{}", format_rat(s))?;
                }
                Ok(())
            }
            FunctionSpec::Explicit(a) => {
                let parts: Vec<String> = a.iter().map(format_rat).collect();
                write!(f, "explicit:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("j") {
            return Ok(FunctionSpec::J);
        }
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown function spec {s:?}")))?;
        match kind {
            "fiction" => {
                let c = body
                    .strip_prefix("c=")
                    .ok_or_else(|| Error::Parse(format!("expected fiction:c=<-1|0|1>, got {s:?}")))?;
                let c: i8 = c.parse().map_err(|_| Error::Parse(format!("bad fiction constant in {s:?}")))?;
                FunctionSpec::fiction(c).map_err(|e| Error::Parse(e.to_string()))
            }
            "eta" => {
                let split = body.find(['+', '-']);
                let (frame, shift) = match split {
                    Some(i) => (&body[..i], Some(&body[i..])),
                    None => (body, None),
                };
                let frame: FrameShape = frame.parse()?;
                match shift {
                    None => Ok(FunctionSpec::EtaQuotient { frame, shift: None }),
                    Some("+shift") => Ok(FunctionSpec::eta_normalized(frame)),
                    Some(t) => {
                        let t = t.strip_prefix('+').unwrap_or(t);
                        let v = parse_rat(t)?;
                        Ok(FunctionSpec::EtaQuotient { frame, shift: Some(v) })
                    }
                }
            }
            "explicit" => {
                let a = body
                    .split(',')
                    .map(parse_rat)
                    .collect::<Result<Vec<_>>>()?;
                if a.is_empty() {
                    return Err(Error::Parse("explicit spec needs at least one coefficient".into()));
                }
                Ok(FunctionSpec::Explicit(a))
            }
            _ => Err(Error::Parse(format!("unknown function kind {kind:?}"))),
        }
    }
}
