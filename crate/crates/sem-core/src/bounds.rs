//! Admissible parameter regions: open intervals and sign-split unions.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SemError};

/// One open interval (lo, hi). Serialized as the pair `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64)", into = "(f64, f64)")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl TryFrom<(f64, f64)> for Interval {
    type Error = SemError;

    fn try_from((lo, hi): (f64, f64)) -> Result<Self> {
        Interval::new(lo, hi)
    }
}

impl From<Interval> for (f64, f64) {
    fn from(iv: Interval) -> Self {
        (iv.lo, iv.hi)
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(SemError::InvalidSpec(format!(
                "interval ({lo}, {hi}) is empty"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Sub-interval spanning the central `frac` of this interval.
    pub fn central(&self, frac: f64) -> Interval {
        let margin = 0.5 * (1.0 - frac) * self.width();
        Interval {
            lo: self.lo + margin,
            hi: self.hi - margin,
        }
    }
}

/// Admissible set for one parameter: a union of disjoint open intervals,
/// e.g. `(-100, 0) ∪ (0, 100)` for a sign-split loading or `(0.01, 100)`
/// for a variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalUnion(pub Vec<Interval>);

impl IntervalUnion {
    pub fn single(lo: f64, hi: f64) -> Result<Self> {
        Ok(Self(vec![Interval::new(lo, hi)?]))
    }

    pub fn validate(&self) -> Result<()> {
        if self.0.is_empty() {
            return Err(SemError::InvalidSpec("empty interval union".into()));
        }
        for w in self.0.windows(2) {
            if w[0].hi > w[1].lo {
                return Err(SemError::InvalidSpec(format!(
                    "interval union not sorted/disjoint: ({}, {}) then ({}, {})",
                    w[0].lo, w[0].hi, w[1].lo, w[1].hi
                )));
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.0.iter().any(|iv| iv.contains(x))
    }

    /// The branch (interval) of the union that contains `x`, if any.
    pub fn branch_of(&self, x: f64) -> Option<Interval> {
        self.0.iter().copied().find(|iv| iv.contains(x))
    }

    pub fn branches(&self) -> &[Interval] {
        &self.0
    }

    /// Every interval has a strictly positive lower endpoint.
    pub fn strictly_positive(&self) -> bool {
        self.0.iter().all(|iv| iv.lo > 0.0)
    }
}

/// Per-parameter admissible sets for a whole model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bounds(pub Vec<IntervalUnion>);

impl Bounds {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, j: usize) -> &IntervalUnion {
        &self.0[j]
    }

    pub fn contains(&self, theta: &[f64]) -> bool {
        theta.len() == self.0.len()
            && theta.iter().zip(&self.0).all(|(x, u)| u.contains(*x))
    }

    pub fn validate(&self) -> Result<()> {
        for u in &self.0 {
            u.validate()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_respects_open_endpoints() {
        let u = IntervalUnion(vec![
            Interval::new(-100.0, 0.0).unwrap(),
            Interval::new(0.0, 100.0).unwrap(),
        ]);
        assert!(u.contains(-5.0));
        assert!(u.contains(5.0));
        assert!(!u.contains(0.0));
        assert!(!u.contains(-100.0));
        assert!(!u.contains(100.0));
    }

    #[test]
    fn branch_lookup() {
        let u = IntervalUnion(vec![
            Interval::new(-100.0, 0.0).unwrap(),
            Interval::new(0.0, 100.0).unwrap(),
        ]);
        assert_eq!(u.branch_of(-1.0).unwrap().hi, 0.0);
        assert_eq!(u.branch_of(1.0).unwrap().lo, 0.0);
        assert!(u.branch_of(0.0).is_none());
    }

    #[test]
    fn central_fraction() {
        let iv = Interval::new(0.0, 100.0).unwrap();
        let c = iv.central(0.5);
        assert_eq!(c.lo, 25.0);
        assert_eq!(c.hi, 75.0);
    }

    #[test]
    fn serde_pair_form() {
        let u: IntervalUnion = serde_json::from_str("[[-100, 0], [0, 100]]").unwrap();
        assert_eq!(u.branches().len(), 2);
        assert_eq!(u.branches()[0], Interval::new(-100.0, 0.0).unwrap());
        assert_eq!(
            serde_json::to_string(&u).unwrap(),
            "[[-100.0,0.0],[0.0,100.0]]"
        );
        assert!(serde_json::from_str::<Interval>("[3, 2]").is_err());
    }

    #[test]
    fn positivity_check() {
        let pos = IntervalUnion::single(0.01, 100.0).unwrap();
        assert!(pos.strictly_positive());
        let split = IntervalUnion(vec![
            Interval::new(-100.0, 0.0).unwrap(),
            Interval::new(0.0, 100.0).unwrap(),
        ]);
        assert!(!split.strictly_positive());
    }
}
