//! Threshold classifier on a continuous response.

use serde::{Deserialize, Serialize};

use crate::error::{Error, EvalError, Result};

/// Binary class tag. `Minor` is the class of interest (response at or above the limit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Class {
    /// C1: value >= limit.
    Minor,
    /// C2: value < limit.
    Major,
}

impl Class {
    pub fn as_str(self) -> &'static str {
        match self {
            Class::Minor => "C1",
            Class::Major => "C2",
        }
    }
}

/// Class rule `C1 iff value >= limit`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassRule {
    pub limit: f64,
}

impl ClassRule {
    pub fn new(limit: f64) -> Self {
        ClassRule { limit }
    }

    /// Classifies a finite value; non-finite values are evaluation errors.
    pub fn classify(&self, value: f64) -> Result<Class> {
        if !value.is_finite() {
            return Err(Error::Eval(EvalError::NonFinite {
                point: Vec::new(),
                value,
            }));
        }
        Ok(self.class_of(value))
    }

    #[inline]
    pub(crate) fn class_of(&self, value: f64) -> Class {
        if value >= self.limit {
            Class::Minor
        } else {
            Class::Major
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_is_minor() {
        let rule = ClassRule::new(0.25);
        assert_eq!(rule.classify(0.25).unwrap(), Class::Minor);
        assert_eq!(rule.classify(0.25 - 1e-12).unwrap(), Class::Major);
    }

    #[test]
    fn higdon_peak_is_minor() {
        let y = crate::problems::higdon(2.5);
        assert!((y - 0.5).abs() < 1e-12);
        assert_eq!(ClassRule::new(0.0).classify(y).unwrap(), Class::Minor);
    }

    #[test]
    fn non_finite_is_an_error() {
        let rule = ClassRule::new(0.0);
        assert!(rule.classify(f64::NAN).is_err());
        assert!(rule.classify(f64::INFINITY).is_err());
    }
}
