//! Smooth bijection between the bounded parameter space and ℝ^q.
//!
//! Each coordinate maps through a scaled logistic onto one interval of its
//! bound union: θ = lo + (hi − lo)·σ(u). For sign-split unions such as
//! (−100, 0) ∪ (0, 100) the interval containing the start value selects the
//! branch; the optimizer then stays inside it because the branch boundary
//! is a pole of the transform.

use sem_core::{Bounds, Interval};

use crate::error::{QmleError, Result};

/// Numerically stable logistic function.
fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

/// Per-coordinate logistic reparameterization, pinned to one branch of
/// each coordinate's bound union.
#[derive(Debug, Clone)]
pub struct BranchTransform {
    intervals: Vec<Interval>,
}

impl BranchTransform {
    /// Choose, for every coordinate, the branch containing the start value.
    pub fn for_start(bounds: &Bounds, start: &[f64]) -> Result<Self> {
        if start.len() != bounds.len() {
            return Err(QmleError::InvalidInput(format!(
                "start has length {}, bounds have {}",
                start.len(),
                bounds.len()
            )));
        }
        let mut intervals = Vec::with_capacity(start.len());
        for (j, value) in start.iter().enumerate() {
            let iv = bounds.get(j).branch_of(*value).ok_or_else(|| {
                QmleError::InvalidInput(format!(
                    "start component {j} = {value} lies in no branch of its bounds"
                ))
            })?;
            intervals.push(iv);
        }
        Ok(BranchTransform { intervals })
    }

    /// Dimension q.
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    /// True when the transform has no coordinates.
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// θ → u (logit of the position inside the branch).
    pub fn to_unconstrained(&self, theta: &[f64]) -> Vec<f64> {
        self.intervals
            .iter()
            .zip(theta)
            .map(|(iv, t)| {
                let z = (t - iv.lo) / (iv.hi - iv.lo);
                (z / (1.0 - z)).ln()
            })
            .collect()
    }

    /// u → θ.
    pub fn to_theta(&self, u: &[f64]) -> Vec<f64> {
        self.intervals
            .iter()
            .zip(u)
            .map(|(iv, v)| iv.lo + (iv.hi - iv.lo) * sigmoid(*v))
            .collect()
    }

    /// dθⱼ/duⱼ = (hi − lo)·σ(u)(1 − σ(u)).
    pub fn dtheta_du(&self, u: &[f64]) -> Vec<f64> {
        self.intervals
            .iter()
            .zip(u)
            .map(|(iv, v)| {
                let s = sigmoid(*v);
                (iv.hi - iv.lo) * s * (1.0 - s)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use sem_core::IntervalUnion;

    fn split_union() -> IntervalUnion {
        IntervalUnion(vec![
            Interval::new(-100.0, 0.0).unwrap(),
            Interval::new(0.0, 100.0).unwrap(),
        ])
    }

    #[test]
    fn roundtrip_is_identity_inside_the_branch() {
        let bounds = Bounds(vec![
            IntervalUnion::single(0.01, 100.0).unwrap(),
            split_union(),
        ]);
        let start = [0.64, -0.6];
        let tr = BranchTransform::for_start(&bounds, &start).unwrap();
        let u = tr.to_unconstrained(&start);
        let back = tr.to_theta(&u);
        assert_relative_eq!(back[0], 0.64, max_relative = 1e-12);
        assert_relative_eq!(back[1], -0.6, max_relative = 1e-12);
    }

    #[test]
    fn negative_start_selects_negative_branch() {
        let bounds = Bounds(vec![split_union()]);
        let tr = BranchTransform::for_start(&bounds, &[-0.6]).unwrap();
        // Any unconstrained value stays strictly inside (-100, 0).
        for u in [-30.0, -1.0, 0.0, 1.0, 30.0] {
            let theta = tr.to_theta(&[u]);
            assert!(theta[0] > -100.0 && theta[0] < 0.0, "u={u} escaped: {}", theta[0]);
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let bounds = Bounds(vec![IntervalUnion::single(0.01, 100.0).unwrap()]);
        let tr = BranchTransform::for_start(&bounds, &[0.5]).unwrap();
        for u in [-3.0, -1.0, 0.0, 2.0] {
            let d = tr.dtheta_du(&[u])[0];
            let eps = 1e-6;
            let fd = (tr.to_theta(&[u + eps])[0] - tr.to_theta(&[u - eps])[0]) / (2.0 * eps);
            assert_relative_eq!(d, fd, max_relative = 1e-8);
        }
    }

    #[test]
    fn start_on_a_boundary_is_rejected() {
        let bounds = Bounds(vec![split_union()]);
        assert!(BranchTransform::for_start(&bounds, &[0.0]).is_err());
        assert!(BranchTransform::for_start(&bounds, &[150.0]).is_err());
    }
}
