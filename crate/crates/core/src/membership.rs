//! B-spline membership functions.
//!
//! A basis of order `q` with `h` functions lives on a clamped uniform knot
//! vector of `h + q` knots: `q` copies of each domain endpoint and `h - q`
//! equally spaced interior knots. On such a vector the functions are
//! non-negative, have local support of at most `q` spans and sum to one at
//! every point of the domain, so a synapse output is a convex combination of
//! its weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipBasis {
    order: usize,
    count: usize,
    knots: Vec<f64>,
}

impl MembershipBasis {
    /// Builds a clamped uniform basis of `count` functions of order `order`
    /// on `[lo, hi]`. Order 2 gives triangular functions, order 4 cubic ones.
    pub fn new(order: usize, count: usize, lo: f64, hi: f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("spline order must be at least 1".into()));
        }
        if count < order {
            return Err(Error::InvalidArgument(format!(
                "membership count {count} is smaller than the spline order {order}"
            )));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument(format!("degenerate domain [{lo}, {hi}]")));
        }
        let spans = count - order + 1;
        let width = hi - lo;
        let mut knots = Vec::with_capacity(count + order);
        knots.extend(std::iter::repeat_n(lo, order));
        knots.extend((1..spans).map(|j| lo + width * (j as f64) / (spans as f64)));
        knots.extend(std::iter::repeat_n(hi, order));
        Ok(Self { order, count, knots })
    }

    /// Basis on the unit interval.
    pub fn unit(order: usize, count: usize) -> Result<Self> {
        Self::new(order, count, 0.0, 1.0)
    }

    /// Rebuilds a basis from stored parts, checking the clamped-knot layout.
    pub fn from_parts(order: usize, count: usize, knots: Vec<f64>) -> Result<Self> {
        if order == 0 || count < order || knots.len() != count + order {
            return Err(Error::InvalidArgument(format!(
                "inconsistent basis: order {order}, count {count}, {} knots",
                knots.len()
            )));
        }
        if knots.iter().any(|k| !k.is_finite()) || knots.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument("knots must be finite and non-decreasing".into()));
        }
        let (lo, hi) = (knots[0], knots[knots.len() - 1]);
        let clamped = knots[..order].iter().all(|&k| k == lo)
            && knots[count..].iter().all(|&k| k == hi)
            && lo < hi;
        if !clamped {
            return Err(Error::InvalidArgument("knot vector is not clamped".into()));
        }
        Ok(Self { order, count, knots })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    /// Index `s` of the knot span `[c_s, c_{s+1})` holding `x`, restricted to
    /// the non-empty spans `order-1 ..= count-1`. The top endpoint belongs to
    /// the last span.
    fn span(&self, x: f64) -> usize {
        let first = self.order - 1;
        let last = self.count - 1;
        if x >= self.knots[last + 1] {
            return last;
        }
        if x <= self.knots[first] {
            return first;
        }
        // knots[first..=last+1] is sorted; find the last knot <= x.
        let upper = self.knots[first..=last + 1].partition_point(|&k| k <= x);
        first + upper - 1
    }

    /// Membership levels of `x`, written into `out` (length `count`).
    pub fn eval_into(&self, x: f64, out: &mut [f64]) {
        assert_eq!(out.len(), self.count, "output buffer has wrong length");
        out.iter_mut().for_each(|v| *v = 0.0);

        let degree = self.order - 1;
        let span = self.span(x);
        let k = &self.knots;

        // Triangular evaluation of the order-1..order recursion restricted
        // to the functions that are non-zero on `span`.
        let mut local = vec![0.0; self.order];
        let mut left = vec![0.0; self.order];
        let mut right = vec![0.0; self.order];
        local[0] = 1.0;
        for j in 1..=degree {
            left[j] = x - k[span + 1 - j];
            right[j] = k[span + j] - x;
            let mut saved = 0.0;
            for r in 0..j {
                let denom = right[r + 1] + left[j - r];
                let temp = if denom == 0.0 { 0.0 } else { local[r] / denom };
                local[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            local[j] = saved;
        }
        out[span - degree..=span].copy_from_slice(&local);
    }

    /// Membership levels `μ_1(x), …, μ_h(x)`. `x` is expected inside the
    /// domain; callers clip beforehand.
    pub fn eval(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.count];
        self.eval_into(x, &mut out);
        out
    }
}
