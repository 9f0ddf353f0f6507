use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::{domain, Error};

/// An extended exponent `p` in `[1, inf]`.
///
/// Finite values are stored as floats; infinity gets an explicit tag so the
/// `p = inf` branches (max norms, dual exponent 1) never rely on IEEE
/// infinity arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Inf,
}

impl Exponent {
    /// Construct a finite exponent, rejecting `p < 1`, NaN and infinities.
    pub fn finite(p: f64) -> Result<Self, Error> {
        if !p.is_finite() {
            return Err(domain("finite exponent must be a finite float"));
        }
        if p < 1.0 {
            return Err(domain("exponent must satisfy p >= 1"));
        }
        Ok(Exponent::Finite(p))
    }

    /// Construct from a float, mapping IEEE infinity to the `Inf` tag.
    pub fn from_f64(p: f64) -> Result<Self, Error> {
        if p.is_infinite() && p > 0.0 {
            Ok(Exponent::Inf)
        } else {
            Exponent::finite(p)
        }
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Exponent::Inf)
    }

    /// The finite value, if any.
    pub fn as_finite(&self) -> Option<f64> {
        match self {
            Exponent::Finite(p) => Some(*p),
            Exponent::Inf => None,
        }
    }

    /// The value as a float, with `Inf` mapped to IEEE infinity.
    pub fn as_f64(&self) -> f64 {
        match self {
            Exponent::Finite(p) => *p,
            Exponent::Inf => f64::INFINITY,
        }
    }

    /// The dual (conjugate) exponent `p' = p / (p - 1)`.
    pub fn dual(&self) -> Exponent {
        dual_exponent(*self)
    }
}

/// Dual exponent: `1 -> inf`, `inf -> 1`, otherwise `p / (p - 1)`.
pub fn dual_exponent(p: Exponent) -> Exponent {
    match p {
        Exponent::Inf => Exponent::Finite(1.0),
        Exponent::Finite(1.0) => Exponent::Inf,
        Exponent::Finite(v) => Exponent::Finite(v / (v - 1.0)),
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.as_f64().partial_cmp(&other.as_f64())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Inf => write!(f, "inf"),
        }
    }
}

/// Parses `"inf"` (or `"∞"`) and decimal values `>= 1`.
impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Exponent::Inf);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| domain("exponent must be a decimal number or 'inf'"))?;
        Exponent::finite(v)
    }
}
