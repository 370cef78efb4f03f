//! Ordinals below ω^ω in Cantor normal form, and the truth-value chain
//!
//! ```text
//! F(0) < F(1) < ... < F(w) < ... < 0 < ... < T(w) < ... < T(1) < T(0)
//! ```
//!
//! Only the successor operation is needed on ordinals: negation is the only
//! connective that moves a value to a different degree.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("malformed ordinal `{0}`")]
    Malformed(String),
    #[error("ordinal `{0}` is not below w^w")]
    AboveCeiling(String),
    #[error("malformed truth value `{0}`")]
    MalformedTruthValue(String),
}

/// A countable ordinal `Σ ω^e·c` with naturals as exponents.
///
/// Terms are kept with strictly decreasing exponents and positive
/// coefficients; the empty term list is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

impl Ordinal {
    pub const ZERO: Ordinal = Ordinal { terms: Vec::new() };

    pub fn zero() -> Self {
        Self::ZERO
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Self::ZERO
        } else {
            Ordinal {
                terms: vec![(0, n)],
            }
        }
    }

    pub fn omega() -> Self {
        Ordinal {
            terms: vec![(1, 1)],
        }
    }

    /// `ω^exponent · coefficient`.
    pub fn monomial(exponent: u32, coefficient: u64) -> Self {
        if coefficient == 0 {
            Self::ZERO
        } else {
            Ordinal {
                terms: vec![(exponent, coefficient)],
            }
        }
    }

    /// Builds an ordinal from `(exponent, coefficient)` pairs, rejecting
    /// anything that is not already in normal form.
    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<Self, OrdinalError> {
        let sorted = terms.windows(2).all(|w| w[0].0 > w[1].0);
        if !sorted || terms.iter().any(|&(_, c)| c == 0) {
            return Err(OrdinalError::Malformed(format!("{terms:?}")));
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|&(e, _)| e == 0)
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && self.terms.last().is_some_and(|&(e, _)| e > 0)
    }

    pub fn succ(&self) -> Ordinal {
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some((0, c)) => *c += 1,
            _ => terms.push((0, 1)),
        }
        Ordinal { terms }
    }

    /// Lexicographic comparison on the `(exponent, coefficient)` sequence,
    /// largest exponent first.
    pub fn compare(&self, other: &Ordinal) -> Ordering {
        for (&(ea, ca), &(eb, cb)) in self.terms.iter().zip(&other.terms) {
            match ea.cmp(&eb).then(ca.cmp(&cb)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::finite(n)
    }
}

impl From<usize> for Ordinal {
    fn from(n: usize) -> Self {
        Ordinal::finite(n as u64)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "w*{c}")?,
                _ => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    /// Accepts the rendered form (`w^2*3 + w*1 + 4`) as well as the
    /// shorthands `w`, `w^2`, `w*2` and `ω`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || OrdinalError::Malformed(s.to_string());
        let mut terms: Vec<(u32, u64)> = Vec::new();
        for raw in s.split('+') {
            let part: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
            if part.is_empty() {
                return Err(malformed());
            }
            let (exponent, coefficient) = if let Some(rest) = part
                .strip_prefix('w')
                .or_else(|| part.strip_prefix('ω'))
            {
                let (exp_part, coeff_part) = match rest.split_once('*') {
                    Some((a, b)) => (a, Some(b)),
                    None => (rest, None),
                };
                let exponent = match exp_part.strip_prefix('^') {
                    Some(e) if e.starts_with('w') || e.starts_with('ω') => {
                        return Err(OrdinalError::AboveCeiling(s.to_string()))
                    }
                    Some(e) => e.parse::<u32>().map_err(|_| malformed())?,
                    None if exp_part.is_empty() => 1,
                    None => return Err(malformed()),
                };
                let coefficient = match coeff_part {
                    Some(c) => c.parse::<u64>().map_err(|_| malformed())?,
                    None => 1,
                };
                (exponent, coefficient)
            } else {
                (0, part.parse::<u64>().map_err(|_| malformed())?)
            };
            if coefficient == 0 {
                if terms.is_empty() && exponent == 0 && s.split('+').count() == 1 {
                    return Ok(Ordinal::ZERO);
                }
                return Err(malformed());
            }
            if terms.last().is_some_and(|&(e, _)| e <= exponent) {
                return Err(malformed());
            }
            terms.push((exponent, coefficient));
        }
        Ok(Ordinal { terms })
    }
}

/// The degree of a truth value; the undefined value has degree ∞.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degree {
    Finite(Ordinal),
    Infinity,
}

impl Degree {
    pub fn ordinal(&self) -> Option<&Ordinal> {
        match self {
            Degree::Finite(o) => Some(o),
            Degree::Infinity => None,
        }
    }

    pub fn is_below(&self, bound: &Ordinal) -> bool {
        matches!(self, Degree::Finite(o) if o < bound)
    }

    pub fn is_at_most(&self, bound: &Ordinal) -> bool {
        matches!(self, Degree::Finite(o) if o <= bound)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(o) => o.fmt(f),
            Degree::Infinity => f.write_str("inf"),
        }
    }
}

/// An element of the truth-value chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TruthValue {
    False(Ordinal),
    Zero,
    True(Ordinal),
}

impl TruthValue {
    /// `F(0)`, the least element.
    pub const BOTTOM: TruthValue = TruthValue::False(Ordinal::ZERO);
    /// `T(0)`, the greatest element.
    pub const TOP: TruthValue = TruthValue::True(Ordinal::ZERO);

    pub fn f(n: u64) -> Self {
        TruthValue::False(Ordinal::finite(n))
    }

    pub fn t(n: u64) -> Self {
        TruthValue::True(Ordinal::finite(n))
    }

    pub fn degree(&self) -> Degree {
        match self {
            TruthValue::False(a) | TruthValue::True(a) => Degree::Finite(a.clone()),
            TruthValue::Zero => Degree::Infinity,
        }
    }

    pub fn degree_ordinal(&self) -> Option<&Ordinal> {
        match self {
            TruthValue::False(a) | TruthValue::True(a) => Some(a),
            TruthValue::Zero => None,
        }
    }

    pub fn is_false(&self) -> bool {
        matches!(self, TruthValue::False(_))
    }

    pub fn is_true(&self) -> bool {
        matches!(self, TruthValue::True(_))
    }

    /// `F_α ↦ T_{α+1}`, `T_α ↦ F_{α+1}`, `0 ↦ 0`.
    pub fn negate(&self) -> TruthValue {
        match self {
            TruthValue::False(a) => TruthValue::True(a.succ()),
            TruthValue::True(a) => TruthValue::False(a.succ()),
            TruthValue::Zero => TruthValue::Zero,
        }
    }

    pub fn compare(&self, other: &TruthValue) -> Ordering {
        use TruthValue::*;
        match (self, other) {
            (False(a), False(b)) => a.cmp(b),
            (True(a), True(b)) => b.cmp(a),
            (Zero, Zero) => Ordering::Equal,
            (False(_), _) | (Zero, True(_)) => Ordering::Less,
            (True(_), _) | (Zero, False(_)) => Ordering::Greater,
        }
    }

    /// Least upper bound of a finite set; `F(0)` for the empty set.
    pub fn sup<'a, I>(values: I) -> TruthValue
    where
        I: IntoIterator<Item = &'a TruthValue>,
    {
        values
            .into_iter()
            .max()
            .cloned()
            .unwrap_or(TruthValue::BOTTOM)
    }

    /// Greatest lower bound of a finite set; `T(0)` for the empty set.
    pub fn inf<'a, I>(values: I) -> TruthValue
    where
        I: IntoIterator<Item = &'a TruthValue>,
    {
        values.into_iter().min().cloned().unwrap_or(TruthValue::TOP)
    }
}

impl Ord for TruthValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl PartialOrd for TruthValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruthValue::False(a) => write!(f, "F({a})"),
            TruthValue::True(a) => write!(f, "T({a})"),
            TruthValue::Zero => f.write_str("0"),
        }
    }
}

impl FromStr for TruthValue {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(TruthValue::Zero);
        }
        let malformed = || OrdinalError::MalformedTruthValue(s.to_string());
        let (ctor, rest): (fn(Ordinal) -> TruthValue, &str) = if let Some(r) = s.strip_prefix('T')
        {
            (TruthValue::True, r)
        } else if let Some(r) = s.strip_prefix('F') {
            (TruthValue::False, r)
        } else {
            return Err(malformed());
        };
        let inner = rest
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(malformed)?;
        Ok(ctor(inner.parse()?))
    }
}
