//! Normalized Gaussian-product fuzzy basis functions and linearly
//! parameterized function approximators.
//!
//! An approximator value is `thetaᵀ xi(x)` where `xi` is the vector of
//! normalized rule activations over a tensor grid of membership centers.
//! Parameter vectors are kept inside a norm ball (and optionally outside a
//! norm floor) by [`project`], and an output floor can keep an input-gain
//! estimate strictly positive.

use crate::plants::StateVec;
use crate::{Error, Result};

/// Gaussian membership degree `exp(-((value - center) / width)^2)`.
///
/// Errors on non-positive width; the result is in `(0, 1]` with the peak at
/// the center.
pub fn membership(value: f64, center: f64, width: f64) -> Result<f64> {
    if !(width > 0.0) {
        return Err(Error::Config(format!(
            "membership width must be positive, got {width}"
        )));
    }
    Ok(gaussian(value, center, width))
}

#[inline]
fn gaussian(value: f64, center: f64, width: f64) -> f64 {
    let r = (value - center) / width;
    (-r * r).exp()
}

/// One input dimension of a membership grid: which state component feeds it
/// and where its membership functions sit.
#[derive(Debug, Clone, PartialEq)]
pub struct GridInput {
    pub state_index: usize,
    pub centers: Vec<f64>,
    pub width: f64,
}

impl GridInput {
    /// Evenly spaced centers over `[lo, hi]` with width equal to the spacing
    /// (a single center gets `hi - lo` as its width, or 1 if the span is
    /// empty).
    pub fn uniform(state_index: usize, lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::Config(format!(
                "grid input {state_index}: center count must be at least 1"
            )));
        }
        if !(hi > lo) {
            return Err(Error::Config(format!(
                "grid input {state_index}: need lo < hi, got [{lo}, {hi}]"
            )));
        }
        let (centers, width) = if count == 1 {
            (vec![0.5 * (lo + hi)], hi - lo)
        } else {
            let spacing = (hi - lo) / (count - 1) as f64;
            let centers = (0..count).map(|i| lo + spacing * i as f64).collect();
            (centers, spacing)
        };
        let input = GridInput {
            state_index,
            centers,
            width,
        };
        input.validate()?;
        Ok(input)
    }

    fn validate(&self) -> Result<()> {
        if self.state_index > 3 {
            return Err(Error::Config(format!(
                "grid input index {} out of range 0..4",
                self.state_index
            )));
        }
        if self.centers.is_empty() {
            return Err(Error::Config(format!(
                "grid input {}: needs at least one center",
                self.state_index
            )));
        }
        if !self.centers.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config(format!(
                "grid input {}: centers must be strictly increasing",
                self.state_index
            )));
        }
        if !(self.width > 0.0) || !self.width.is_finite() {
            return Err(Error::Config(format!(
                "grid input {}: width must be positive and finite, got {}",
                self.state_index, self.width
            )));
        }
        Ok(())
    }
}

/// Tensor grid of membership functions over selected state components.
///
/// A rule is one choice of center per input; rules are ordered row-major with
/// the last input varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipGrid {
    inputs: Vec<GridInput>,
}

impl MembershipGrid {
    pub fn new(inputs: Vec<GridInput>) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::Config("membership grid needs at least one input".into()));
        }
        for input in &inputs {
            input.validate()?;
        }
        Ok(MembershipGrid { inputs })
    }

    pub fn inputs(&self) -> &[GridInput] {
        &self.inputs
    }

    /// Number of rules (product of per-input center counts).
    pub fn rule_count(&self) -> usize {
        self.inputs.iter().map(|i| i.centers.len()).product()
    }

    /// Normalized rule activations at `x`: each component is the product of
    /// per-input membership degrees for that rule, divided by the sum over
    /// all rules. Components are non-negative and sum to 1.
    ///
    /// Errors with [`Error::DegenerateActivation`] when every product
    /// underflows to zero.
    pub fn basis_vector(&self, x: &StateVec) -> Result<Vec<f64>> {
        // Per-input membership degrees, then the tensor product in rule order.
        let degrees: Vec<Vec<f64>> = self
            .inputs
            .iter()
            .map(|input| {
                let v = x[input.state_index];
                input
                    .centers
                    .iter()
                    .map(|&c| gaussian(v, c, input.width))
                    .collect()
            })
            .collect();

        let n = self.rule_count();
        let mut products = vec![1.0; n];
        let mut block = n;
        for degs in &degrees {
            block /= degs.len();
            for (rule, p) in products.iter_mut().enumerate() {
                *p *= degs[(rule / block) % degs.len()];
            }
        }

        let sum: f64 = products.iter().sum();
        if sum <= 0.0 || !sum.is_finite() {
            return Err(Error::DegenerateActivation);
        }
        for p in &mut products {
            *p /= sum;
        }
        Ok(products)
    }
}

/// Norm bounds for a parameter vector, plus an optional floor applied to the
/// approximator output when it estimates an input gain that must stay
/// positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionBounds {
    pub norm_max: f64,
    pub norm_min: f64,
    pub value_floor: f64,
}

impl ProjectionBounds {
    pub fn new(norm_max: f64, norm_min: f64, value_floor: f64) -> Result<Self> {
        let b = ProjectionBounds {
            norm_max,
            norm_min,
            value_floor,
        };
        b.validate()?;
        Ok(b)
    }

    /// Norm ball only: `‖theta‖ ≤ norm_max`, no floor.
    pub fn ball(norm_max: f64) -> Result<Self> {
        Self::new(norm_max, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.norm_min >= 0.0 && self.norm_min < self.norm_max) {
            return Err(Error::Config(format!(
                "projection bounds need 0 <= norm_min < norm_max, got [{}, {}]",
                self.norm_min, self.norm_max
            )));
        }
        if !(self.value_floor >= 0.0) {
            return Err(Error::Config(format!(
                "value floor must be non-negative, got {}",
                self.value_floor
            )));
        }
        Ok(())
    }
}

fn norm(theta: &[f64]) -> f64 {
    theta.iter().map(|t| t * t).sum::<f64>().sqrt()
}

/// Radial projection of `theta` onto the norm shell `[norm_min, norm_max]`.
///
/// Vectors outside the ball rescale down to `norm_max`; non-zero vectors
/// inside the floor rescale up to `norm_min`; the zero vector (with a
/// positive floor) maps to `norm_min` along the first coordinate. The output
/// is a fixed point: projecting twice gives the same vector bit for bit.
pub fn project(theta: &[f64], bounds: &ProjectionBounds) -> Vec<f64> {
    let mut out = theta.to_vec();
    let mut nrm = norm(&out);

    if nrm == 0.0 && bounds.norm_min > 0.0 {
        out[0] = bounds.norm_min;
        return out;
    }
    // Rounding in the rescale can leave the norm a final ulp outside the
    // shell, so repeat until it lands inside; this terminates in at most a
    // couple of passes and makes the projection exactly idempotent.
    while nrm > bounds.norm_max {
        let scale = bounds.norm_max / nrm;
        for v in &mut out {
            *v *= scale;
        }
        nrm = norm(&out);
    }
    while nrm > 0.0 && nrm < bounds.norm_min {
        let scale = bounds.norm_min / nrm;
        for v in &mut out {
            *v *= scale;
        }
        nrm = norm(&out);
    }
    out
}

/// Linearly parameterized approximator `thetaᵀ xi(x)` over a membership grid,
/// with projection bounds on `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyApproximator {
    grid: MembershipGrid,
    theta: Vec<f64>,
    bounds: ProjectionBounds,
}

impl FuzzyApproximator {
    pub fn new(grid: MembershipGrid, theta: Vec<f64>, bounds: ProjectionBounds) -> Result<Self> {
        bounds.validate()?;
        if theta.len() != grid.rule_count() {
            return Err(Error::Config(format!(
                "theta length {} does not match rule count {}",
                theta.len(),
                grid.rule_count()
            )));
        }
        let nrm = norm(&theta);
        if nrm > bounds.norm_max || nrm < bounds.norm_min {
            return Err(Error::Config(format!(
                "initial theta norm {nrm} outside projection bounds [{}, {}]",
                bounds.norm_min, bounds.norm_max
            )));
        }
        Ok(FuzzyApproximator { grid, theta, bounds })
    }

    /// All parameters set to the same value.
    pub fn constant(grid: MembershipGrid, value: f64, bounds: ProjectionBounds) -> Result<Self> {
        let theta = vec![value; grid.rule_count()];
        Self::new(grid, theta, bounds)
    }

    pub fn grid(&self) -> &MembershipGrid {
        &self.grid
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn theta_norm(&self) -> f64 {
        norm(&self.theta)
    }

    pub fn bounds(&self) -> &ProjectionBounds {
        &self.bounds
    }

    pub fn basis_vector(&self, x: &StateVec) -> Result<Vec<f64>> {
        self.grid.basis_vector(x)
    }

    /// `thetaᵀ xi(x)`, floored at `value_floor` when a floor is configured.
    pub fn approximate(&self, x: &StateVec) -> Result<f64> {
        let xi = self.basis_vector(x)?;
        Ok(self.approximate_with_basis(&xi))
    }

    /// Same as [`approximate`](Self::approximate) with a precomputed basis.
    pub fn approximate_with_basis(&self, xi: &[f64]) -> f64 {
        debug_assert_eq!(xi.len(), self.theta.len());
        let raw: f64 = self.theta.iter().zip(xi).map(|(t, b)| t * b).sum();
        if self.bounds.value_floor > 0.0 {
            raw.max(self.bounds.value_floor)
        } else {
            raw
        }
    }

    /// Replace `theta`, projecting onto the bounds. This is the only mutation
    /// path; the closed-loop runner calls it once per integration step.
    pub fn set_theta_projected(&mut self, theta: &[f64]) {
        debug_assert_eq!(theta.len(), self.theta.len());
        self.theta = project(theta, &self.bounds);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn grid_2x2() -> MembershipGrid {
        // Two inputs, two centers each, centers 2w apart.
        MembershipGrid::new(vec![
            GridInput {
                state_index: 0,
                centers: vec![0.0, 2.0],
                width: 1.0,
            },
            GridInput {
                state_index: 1,
                centers: vec![0.0, 2.0],
                width: 1.0,
            },
        ])
        .unwrap()
    }

    #[test]
    fn membership_peaks_at_center() {
        for (c, w) in [(0.0, 1.0), (-3.5, 0.2), (7.0, 12.0)] {
            assert_eq!(membership(c, c, w).unwrap(), 1.0);
        }
    }

    #[test]
    fn membership_one_width_out() {
        let d = membership(1.5, 0.5, 1.0).unwrap();
        assert_relative_eq!(d, 0.36787944117144233, max_relative = 1e-15);
    }

    #[test]
    fn membership_even_symmetry() {
        for d in [0.1, 0.7, 2.3, 10.0] {
            let left = membership(-d, 0.0, 0.8).unwrap();
            let right = membership(d, 0.0, 0.8).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn membership_rejects_bad_width() {
        assert!(matches!(membership(0.0, 0.0, 0.0), Err(Error::Config(_))));
        assert!(matches!(membership(0.0, 0.0, -1.0), Err(Error::Config(_))));
    }

    #[test]
    fn basis_single_rule_is_one() {
        let grid = MembershipGrid::new(vec![GridInput {
            state_index: 0,
            centers: vec![0.3],
            width: 2.0,
        }])
        .unwrap();
        let xi = grid.basis_vector(&StateVec::new([5.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(xi, vec![1.0]);
    }

    // Expected values from a by-hand product-and-normalize evaluation of the
    // four rules: degrees are 1 and e^-4 on both inputs, so the products are
    // [1, e^-4, e^-4, e^-8] and the sum is 1 + 2e^-4 + e^-8.
    #[test]
    fn basis_2x2_at_first_corner() {
        let grid = grid_2x2();
        let xi = grid.basis_vector(&StateVec::new([0.0, 0.0, 9.0, -9.0])).unwrap();
        let expected = [
            0.9643510838246173,
            0.017662706213291114,
            0.017662706213291114,
            0.00032350374880044157,
        ];
        assert_eq!(xi.len(), 4);
        for (got, want) in xi.iter().zip(expected) {
            assert_relative_eq!(*got, want, max_relative = 1e-14);
        }
    }

    #[test]
    fn basis_matches_brute_force_oracle() {
        // Independent oracle: enumerate the rules explicitly.
        let grid = grid_2x2();
        let x = StateVec::new([0.7, -0.4, 0.0, 0.0]);
        let m = |v: f64, c: f64| membership(v, c, 1.0).unwrap();
        let products = [
            m(0.7, 0.0) * m(-0.4, 0.0),
            m(0.7, 0.0) * m(-0.4, 2.0),
            m(0.7, 2.0) * m(-0.4, 0.0),
            m(0.7, 2.0) * m(-0.4, 2.0),
        ];
        let sum: f64 = products.iter().sum();
        let xi = grid.basis_vector(&x).unwrap();
        for (got, p) in xi.iter().zip(products) {
            assert_relative_eq!(*got, p / sum, max_relative = 1e-14);
        }
    }

    #[test]
    fn basis_degenerate_activation_errors() {
        let grid = MembershipGrid::new(vec![GridInput {
            state_index: 0,
            centers: vec![0.0, 1e-3],
            width: 1e-3,
        }])
        .unwrap();
        // (1e6)^2 = 1e12 >> 745, so both activations underflow to zero.
        let far = StateVec::new([1e3, 0.0, 0.0, 0.0]);
        assert_eq!(grid.basis_vector(&far), Err(Error::DegenerateActivation));
    }

    #[test]
    fn grid_rejects_bad_inputs() {
        let bad_index = GridInput {
            state_index: 4,
            centers: vec![0.0, 1.0],
            width: 1.0,
        };
        assert!(MembershipGrid::new(vec![bad_index]).is_err());

        let not_increasing = GridInput {
            state_index: 0,
            centers: vec![1.0, 1.0],
            width: 1.0,
        };
        assert!(MembershipGrid::new(vec![not_increasing]).is_err());

        assert!(GridInput::uniform(0, 1.0, 1.0, 3).is_err());
        assert!(GridInput::uniform(0, -1.0, 1.0, 0).is_err());
    }

    #[test]
    fn approximate_zero_theta_is_zero() {
        let approx =
            FuzzyApproximator::constant(grid_2x2(), 0.0, ProjectionBounds::ball(10.0).unwrap())
                .unwrap();
        let v = approx.approximate(&StateVec::new([0.4, 1.2, 0.0, 0.0])).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn approximate_constant_theta_is_constant() {
        // A convex combination of equal weights returns the weight.
        let approx =
            FuzzyApproximator::constant(grid_2x2(), 2.5, ProjectionBounds::ball(10.0).unwrap())
                .unwrap();
        for x in [[0.0, 0.0], [1.3, -0.8], [2.0, 2.0]] {
            let v = approx
                .approximate(&StateVec::new([x[0], x[1], 0.0, 0.0]))
                .unwrap();
            assert_relative_eq!(v, 2.5, max_relative = 1e-13);
        }
    }

    #[test]
    fn approximate_matches_dot_product_oracle() {
        let theta = vec![0.3, -1.7, 2.2, 0.9];
        let approx = FuzzyApproximator::new(
            grid_2x2(),
            theta.clone(),
            ProjectionBounds::ball(10.0).unwrap(),
        )
        .unwrap();
        let x = StateVec::new([1.1, 0.6, 0.0, 0.0]);
        let xi = approx.basis_vector(&x).unwrap();
        // Independent multiply-accumulate.
        let mut want = 0.0;
        for i in 0..theta.len() {
            want += theta[i] * xi[i];
        }
        assert_relative_eq!(approx.approximate(&x).unwrap(), want, max_relative = 1e-14);
    }

    #[test]
    fn approximate_applies_value_floor() {
        let bounds = ProjectionBounds::new(10.0, 0.05, 0.5).unwrap();
        let approx = FuzzyApproximator::constant(grid_2x2(), 0.1, bounds).unwrap();
        // Raw value is 0.1 < floor 0.5.
        let v = approx.approximate(&StateVec::new([0.0; 4])).unwrap();
        assert_eq!(v, 0.5);
    }

    #[test]
    fn project_interior_point_unchanged() {
        let bounds = ProjectionBounds::ball(4.0).unwrap();
        let theta = vec![1.0, 1.0, 1.0, 1.0]; // norm 2 = norm_max / 2
        assert_eq!(project(&theta, &bounds), theta);
    }

    #[test]
    fn project_rescales_to_ball() {
        let bounds = ProjectionBounds::ball(2.5).unwrap();
        assert_eq!(project(&[3.0, 4.0], &bounds), vec![1.5, 2.0]);
    }

    #[test]
    fn project_zero_vector_with_floor() {
        let bounds = ProjectionBounds::new(1.0, 0.1, 0.0).unwrap();
        assert_eq!(project(&[0.0, 0.0, 0.0], &bounds), vec![0.1, 0.0, 0.0]);
    }

    #[test]
    fn projected_theta_respected_after_updates() {
        let bounds = ProjectionBounds::new(5.0, 0.5, 0.0).unwrap();
        let grid = grid_2x2();
        let mut approx = FuzzyApproximator::constant(grid, 1.0, bounds).unwrap();
        // Alternate huge and tiny updates; the invariant must hold after each.
        for step in 0..20 {
            let scale = if step % 2 == 0 { 100.0 } else { 1e-4 };
            let next: Vec<f64> = approx.theta().iter().map(|t| t * scale).collect();
            approx.set_theta_projected(&next);
            let n = approx.theta_norm();
            assert!((0.5..=5.0).contains(&n), "norm {n} escaped bounds");
        }
    }

    proptest! {
        #[test]
        fn basis_is_a_partition_of_unity(
            a in -0.5236f64..0.5236,
            b in -2.0f64..2.0,
        ) {
            let grid = MembershipGrid::new(vec![
                GridInput::uniform(0, -0.5236, 0.5236, 5).unwrap(),
                GridInput::uniform(1, -2.0, 2.0, 5).unwrap(),
            ]).unwrap();
            let xi = grid.basis_vector(&StateVec::new([a, b, 0.0, 0.0])).unwrap();
            let sum: f64 = xi.iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
            prop_assert!(xi.iter().all(|&v| (0.0..=1.0).contains(&v)));
        }

        #[test]
        fn approximate_is_linear_in_theta(
            t1 in proptest::collection::vec(-5.0f64..5.0, 4),
            t2 in proptest::collection::vec(-5.0f64..5.0, 4),
            a in -3.0f64..3.0,
            b in -3.0f64..3.0,
            x0 in -1.0f64..3.0,
            x1 in -1.0f64..3.0,
        ) {
            let bounds = ProjectionBounds::ball(1e6).unwrap();
            let grid = grid_2x2();
            let x = StateVec::new([x0, x1, 0.0, 0.0]);
            let mk = |theta: Vec<f64>| {
                FuzzyApproximator::new(grid.clone(), theta, bounds).unwrap()
            };
            let combined: Vec<f64> = t1.iter().zip(&t2).map(|(p, q)| a * p + b * q).collect();
            let lhs = mk(combined).approximate(&x).unwrap();
            let rhs = a * mk(t1).approximate(&x).unwrap() + b * mk(t2).approximate(&x).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
        }

        #[test]
        fn project_is_idempotent(
            theta in proptest::collection::vec(-20.0f64..20.0, 1..8),
            norm_max in 0.5f64..10.0,
            norm_min_frac in 0.0f64..0.9,
        ) {
            let bounds = ProjectionBounds::new(norm_max, norm_min_frac * norm_max, 0.0).unwrap();
            let once = project(&theta, &bounds);
            let twice = project(&once, &bounds);
            prop_assert_eq!(once, twice);
        }
    }
}
