//! One-dimensional polynomial potentials `V(x) = Σ c_k x^k` obeying the PT
//! condition `V(-x)* = V(x)`.
//!
//! For a polynomial that condition is equivalent to: every even-power
//! coefficient is real and every odd-power coefficient is purely imaginary.
//! The input format carries real and imaginary parts separately, so the check
//! is an exact-zero test on the forbidden component.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest power accepted in a potential.
pub const MAX_DEGREE: u32 = 16;

/// A single monomial `coeff · x^power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub power: u32,
    pub coeff: Complex64,
}

impl Term {
    pub fn new(power: u32, re: f64, im: f64) -> Self {
        Self {
            power,
            coeff: Complex64::new(re, im),
        }
    }

    fn check_pt(&self) -> Result<()> {
        let forbidden = if self.power.is_multiple_of(2) {
            self.coeff.im
        } else {
            self.coeff.re
        };
        if forbidden != 0.0 {
            return Err(Error::PtViolation {
                power: self.power,
                re: self.coeff.re,
                im: self.coeff.im,
            });
        }
        Ok(())
    }
}

/// A validated PT-symmetric polynomial potential. Terms are sorted by
/// ascending power with at most one term per power.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PotentialSpec {
    terms: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRecord {
    power: u32,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialRecord {
    terms: Vec<TermRecord>,
}

impl PotentialSpec {
    /// Validates and sorts `terms`.
    pub fn new(terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        let mut terms: Vec<Term> = terms.into_iter().collect();
        terms.sort_by_key(|t| t.power);
        for pair in terms.windows(2) {
            if pair[0].power == pair[1].power {
                return Err(Error::DuplicatePower(pair[0].power));
            }
        }
        for t in &terms {
            if t.power > MAX_DEGREE {
                return Err(Error::DegreeTooLarge(t.power));
            }
            if !(t.coeff.re.is_finite() && t.coeff.im.is_finite()) {
                return Err(Error::Malformed(format!("non-finite coefficient at power {}", t.power)));
            }
            t.check_pt()?;
        }
        if terms.last().is_none_or(|t| t.power == 0) {
            return Err(Error::DegreeTooSmall);
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest power present, or 0 for an empty potential.
    pub fn degree(&self) -> u32 {
        self.terms.last().map_or(0, |t| t.power)
    }

    /// Parses the JSON term-list format `{"terms":[{"power":k,"re":a,"im":b},...]}`.
    pub fn parse(text: &str) -> Result<Self> {
        let record: PotentialRecord = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::new(record.terms.into_iter().map(|t| Term::new(t.power, t.re, t.im)))
    }

    /// Serializes to the JSON term-list format, powers ascending.
    pub fn to_json(&self) -> String {
        let record = PotentialRecord {
            terms: self
                .terms
                .iter()
                .map(|t| TermRecord {
                    power: t.power,
                    re: t.coeff.re,
                    im: t.coeff.im,
                })
                .collect(),
        };
        serde_json::to_string(&record).expect("potential serialization is infallible")
    }

    /// Splits into the even part `Re V` and the odd part `i Im V`.
    pub fn decompose(&self) -> (PotentialSpec, PotentialSpec) {
        let (even, odd): (Vec<Term>, Vec<Term>) = self.terms.iter().partition(|t| t.power % 2 == 0);
        (PotentialSpec { terms: even }, PotentialSpec { terms: odd })
    }

    /// Inverse of [`decompose`](Self::decompose).
    pub fn recombine(even: &PotentialSpec, odd: &PotentialSpec) -> PotentialSpec {
        let mut terms: Vec<Term> = even.terms.iter().chain(&odd.terms).copied().collect();
        terms.sort_by_key(|t| t.power);
        PotentialSpec { terms }
    }

    /// Horner evaluation of `V(x)`.
    pub fn evaluate(&self, x: Complex64) -> Complex64 {
        let degree = self.degree() as usize;
        let mut dense = vec![Complex64::new(0.0, 0.0); degree + 1];
        for t in &self.terms {
            dense[t.power as usize] = t.coeff;
        }
        dense.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// Flags potentials that are probably not confining: the leading term is
    /// even with a negative coefficient. The potential is still accepted.
    pub fn confinement_warning(&self) -> Option<String> {
        let lead = self.terms.last()?;
        if lead.power % 2 == 0 && lead.coeff.re < 0.0 {
            Some(format!(
                "leading term {}x^{} is even with negative coefficient; spectrum may not be bounded below",
                lead.coeff.re, lead.power
            ))
        } else {
            None
        }
    }
}
