//! Groups, projective factors, linearized bundles and scenarios.
//!
//! Sign convention: a monomial `z^α` in the coordinates of a factor is a
//! section of weight `Σ α_i w_i`, where `w_i` is the weight of the `i`-th
//! homogeneous coordinate. A section of `L^k` additionally picks up the
//! uniform character shift `k·c`, where `c` is the bundle's twist. With the
//! weights `(-1, 1, 1)` on `P²`, the monomial `z₀^c z₁^a z₂^b` therefore has
//! weight `a + b - c`. The opposite convention amounts to `μ ↦ -μ`.

use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    /// The torus `(S¹)^g`.
    CirclePower,
    /// `SU(2)`, real dimension 3, maximal torus of rank 1.
    Su2,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::CirclePower => "circle_power",
            GroupKind::Su2 => "su2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub kind: GroupKind,
    /// Real dimension `g` of the group.
    pub rank: usize,
}

impl GroupSpec {
    pub fn circle(g: usize) -> Self {
        GroupSpec {
            kind: GroupKind::CirclePower,
            rank: g,
        }
    }

    pub fn su2() -> Self {
        GroupSpec {
            kind: GroupKind::Su2,
            rank: 3,
        }
    }

    /// Rank of the maximal torus, i.e. the length of a weight vector.
    pub fn torus_rank(&self) -> usize {
        match self.kind {
            GroupKind::CirclePower => self.rank,
            GroupKind::Su2 => 1,
        }
    }

    fn validate(&self) -> Result<()> {
        match self.kind {
            GroupKind::CirclePower if self.rank == 0 => {
                Err(Error::InvalidGroup("circle_power needs g >= 1".into()))
            }
            GroupKind::Su2 if self.rank != 3 => Err(Error::InvalidGroup(format!(
                "su2 has real dimension 3, got g = {}",
                self.rank
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FactorWeights {
    /// One integer weight vector (length `g`) per homogeneous coordinate.
    Circle(Vec<Vec<i64>>),
    /// The coordinate space is `⊕ Sym^{m_i}(V)` for the listed `m_i`.
    Su2(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectiveFactor {
    pub dim: usize,
    pub weights: FactorWeights,
}

impl ProjectiveFactor {
    pub fn new(dim: usize, weights: FactorWeights) -> Self {
        ProjectiveFactor { dim, weights }
    }

    /// A circle factor with one weight vector per coordinate; `dim` is taken
    /// from the coordinate count.
    pub fn circle(weights: Vec<Vec<i64>>) -> Self {
        let dim = weights.len().saturating_sub(1);
        ProjectiveFactor::new(dim, FactorWeights::Circle(weights))
    }

    /// A rank-one circle factor given by scalar coordinate weights.
    pub fn circle1(weights: &[i64]) -> Self {
        ProjectiveFactor::circle(weights.iter().map(|&w| vec![w]).collect())
    }

    pub fn su2(sym_powers: Vec<u32>) -> Self {
        let coords: usize = sym_powers.iter().map(|&m| m as usize + 1).sum();
        ProjectiveFactor::new(coords.saturating_sub(1), FactorWeights::Su2(sym_powers))
    }

    pub fn coordinate_count(&self) -> usize {
        self.dim + 1
    }

    /// Weights of the homogeneous coordinates under the maximal torus.
    ///
    /// For an SU(2) block `Sym^m(V)` the coordinates `x^{m-j} y^j` have torus
    /// weights `m - 2j`, listed for `j = 0..=m`.
    pub fn torus_weights(&self) -> Vec<Vec<i64>> {
        match &self.weights {
            FactorWeights::Circle(w) => w.clone(),
            FactorWeights::Su2(powers) => powers
                .iter()
                .flat_map(|&m| (0..=m as i64).map(move |j| vec![m as i64 - 2 * j]))
                .collect(),
        }
    }

    /// True when every coordinate carries the same torus weight.
    pub fn acts_trivially(&self) -> bool {
        let w = self.torus_weights();
        w.windows(2).all(|p| p[0] == p[1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearizedBundle {
    /// One degree per factor, each at least 1.
    pub degrees: Vec<i64>,
    /// Character twist, length `g` for circle groups and empty for SU(2).
    pub twist: Vec<i64>,
}

impl LinearizedBundle {
    pub fn new(degrees: Vec<i64>, twist: Vec<i64>) -> Self {
        LinearizedBundle { degrees, twist }
    }

    pub fn tensor_power(&self, p: u64) -> Result<LinearizedBundle> {
        if p == 0 {
            return Err(Error::ZeroPower);
        }
        let p = p as i64;
        Ok(LinearizedBundle {
            degrees: self.degrees.iter().map(|d| d * p).collect(),
            twist: self.twist.iter().map(|c| c * p).collect(),
        })
    }

    /// Componentwise sum of multidegrees and twists.
    pub fn tensor(&self, other: &LinearizedBundle) -> LinearizedBundle {
        LinearizedBundle {
            degrees: zip_add(&self.degrees, &other.degrees),
            twist: zip_add(&self.twist, &other.twist),
        }
    }
}

fn zip_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect()
}

/// A torus weight. For circle groups this is a vector of length `g`; for
/// SU(2) it is the single highest-weight integer `μ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn scalar(mu: i64) -> Self {
        Weight(vec![mu])
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(zip_add(&self.0, &other.0))
    }

    pub fn scaled(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|x| x * k).collect())
    }

    /// Max-coordinate norm.
    pub fn max_norm(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "(")?;
            for (i, x) in self.0.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scenario {
    pub group: GroupSpec,
    pub factors: Vec<ProjectiveFactor>,
    pub bundle: LinearizedBundle,
}

impl Scenario {
    /// Builds and validates a scenario.
    pub fn new(
        group: GroupSpec,
        factors: Vec<ProjectiveFactor>,
        bundle: LinearizedBundle,
    ) -> Result<Scenario> {
        Scenario {
            group,
            factors,
            bundle,
        }
        .validate()
    }

    /// Checks consistency and returns the normalized scenario: SU(2) block
    /// lists are sorted in decreasing order, an SU(2) twist is cleared, and an
    /// omitted circle twist becomes the zero vector.
    pub fn validate(&self) -> Result<Scenario> {
        self.group.validate()?;
        if self.factors.is_empty() {
            return Err(Error::NoFactors);
        }
        let g = self.group.rank;
        let mut factors = Vec::with_capacity(self.factors.len());
        for (j, f) in self.factors.iter().enumerate() {
            let weights = match (&f.weights, self.group.kind) {
                (FactorWeights::Circle(w), GroupKind::CirclePower) => {
                    if w.len() != f.dim + 1 {
                        return Err(Error::DimensionMismatch {
                            factor: j,
                            dim: f.dim,
                            found: w.len(),
                            expected: f.dim + 1,
                        });
                    }
                    if let Some(bad) = w.iter().find(|v| v.len() != g) {
                        return Err(Error::WeightLength {
                            factor: j,
                            found: bad.len(),
                            expected: g,
                        });
                    }
                    FactorWeights::Circle(w.clone())
                }
                (FactorWeights::Su2(m), GroupKind::Su2) => {
                    let coords: usize = m.iter().map(|&x| x as usize + 1).sum();
                    if coords != f.dim + 1 {
                        return Err(Error::DimensionMismatch {
                            factor: j,
                            dim: f.dim,
                            found: coords,
                            expected: f.dim + 1,
                        });
                    }
                    let mut m = m.clone();
                    m.sort_unstable_by(|a, b| b.cmp(a));
                    FactorWeights::Su2(m)
                }
                (_, kind) => {
                    return Err(Error::GroupMismatch {
                        factor: j,
                        kind: kind.name(),
                    })
                }
            };
            if f.dim == 0 {
                return Err(Error::DimensionMismatch {
                    factor: j,
                    dim: 0,
                    found: f.dim + 1,
                    expected: 2,
                });
            }
            factors.push(ProjectiveFactor::new(f.dim, weights));
        }
        if self.bundle.degrees.len() != factors.len() {
            return Err(Error::DegreeCount {
                found: self.bundle.degrees.len(),
                expected: factors.len(),
            });
        }
        if let Some((j, &d)) = self
            .bundle
            .degrees
            .iter()
            .enumerate()
            .find(|(_, &d)| d < 1)
        {
            return Err(Error::NonPositiveDegree {
                factor: j,
                degree: d,
            });
        }
        let twist = match self.group.kind {
            GroupKind::CirclePower => {
                if self.bundle.twist.is_empty() {
                    vec![0; g]
                } else if self.bundle.twist.len() != g {
                    return Err(Error::TwistLength {
                        found: self.bundle.twist.len(),
                        expected: g,
                    });
                } else {
                    self.bundle.twist.clone()
                }
            }
            GroupKind::Su2 => {
                if self.bundle.twist.iter().any(|&c| c != 0) {
                    return Err(Error::Su2Twist);
                }
                Vec::new()
            }
        };
        Ok(Scenario {
            group: self.group.clone(),
            factors,
            bundle: LinearizedBundle::new(self.bundle.degrees.clone(), twist),
        })
    }

    /// Complex dimension `n = Σ n_j`.
    pub fn n(&self) -> usize {
        self.factors.iter().map(|f| f.dim).sum()
    }

    /// Real dimension `g` of the group.
    pub fn g(&self) -> usize {
        self.group.rank
    }

    pub fn torus_rank(&self) -> usize {
        self.group.torus_rank()
    }

    pub fn is_su2(&self) -> bool {
        self.group.kind == GroupKind::Su2
    }

    /// The expected quotient dimension `n - g`; negative only for SU(2).
    pub fn quotient_dimension(&self) -> i64 {
        self.n() as i64 - self.g() as i64
    }

    /// Exponent used in the volume normalization, `max(n - g, 0)`.
    pub fn volume_exponent(&self) -> u32 {
        self.quotient_dimension().max(0) as u32
    }

    /// True when `n - g < 0` and the normalization exponent was clamped.
    pub fn exponent_clamped(&self) -> bool {
        self.quotient_dimension() < 0
    }

    /// Twist as a weight (zero for SU(2)).
    pub fn twist(&self) -> Weight {
        if self.bundle.twist.is_empty() {
            Weight::zero(self.torus_rank())
        } else {
            Weight(self.bundle.twist.clone())
        }
    }

    /// The same space and action with another bundle.
    pub fn with_bundle(&self, bundle: LinearizedBundle) -> Result<Scenario> {
        Scenario::new(self.group.clone(), self.factors.clone(), bundle)
    }

    /// The scenario for `L^{⊗p}`.
    pub fn power(&self, p: u64) -> Result<Scenario> {
        self.with_bundle(self.bundle.tensor_power(p)?)
    }

    /// Negates all circle weights and the twist.
    pub fn negated(&self) -> Result<Scenario> {
        if self.is_su2() {
            return Err(Error::Unsupported("negation of su2 weights".into()));
        }
        let factors = self
            .factors
            .iter()
            .map(|f| {
                let w = f
                    .torus_weights()
                    .into_iter()
                    .map(|v| v.into_iter().map(|x| -x).collect())
                    .collect();
                ProjectiveFactor::new(f.dim, FactorWeights::Circle(w))
            })
            .collect();
        let bundle = LinearizedBundle::new(
            self.bundle.degrees.clone(),
            self.bundle.twist.iter().map(|c| -c).collect(),
        );
        Scenario::new(self.group.clone(), factors, bundle)
    }

    /// `dim H⁰(M, L^k) = Π_j C(n_j + k d_j, n_j)`.
    pub fn total_dimension(&self, k: u64) -> Result<u128> {
        self.factors
            .iter()
            .zip(&self.bundle.degrees)
            .try_fold(1u128, |acc, (f, &d)| {
                let top = f.dim as u128 + k as u128 * d as u128;
                binomial(top, f.dim as u128)
                    .and_then(|b| acc.checked_mul(b))
                    .ok_or(Error::CountOverflow)
            })
    }

    /// Degree of factor `j` in `L^k`.
    pub fn factor_degree(&self, j: usize, k: u64) -> u64 {
        self.bundle.degrees[j] as u64 * k
    }

    /// Weight of a monomial section of some tensor power `L^k`.
    ///
    /// `exponents[j]` holds the exponents of the homogeneous coordinates of
    /// factor `j` (in [`ProjectiveFactor::torus_weights`] order). The block
    /// degrees must equal `k·d_j` for one common `k`; the result is
    /// `Σ α_i w_i + k·c`.
    pub fn weight_of_monomial(&self, exponents: &[Vec<u64>]) -> Result<Weight> {
        if exponents.len() != self.factors.len() {
            return Err(Error::DegreeMismatch(format!(
                "{} exponent blocks for {} factors",
                exponents.len(),
                self.factors.len()
            )));
        }
        let rank = self.torus_rank();
        let mut level: Option<u64> = None;
        let mut total = vec![0i64; rank];
        for (j, (f, alpha)) in self.factors.iter().zip(exponents).enumerate() {
            let weights = f.torus_weights();
            if alpha.len() != weights.len() {
                return Err(Error::DegreeMismatch(format!(
                    "factor {j}: {} exponents for {} coordinates",
                    alpha.len(),
                    weights.len()
                )));
            }
            let deg: u64 = alpha.iter().sum();
            let d = self.bundle.degrees[j] as u64;
            if !deg.is_multiple_of(d) {
                return Err(Error::DegreeMismatch(format!(
                    "factor {j}: degree {deg} is not a multiple of {d}"
                )));
            }
            let k = deg / d;
            match level {
                None => level = Some(k),
                Some(k0) if k0 != k => {
                    return Err(Error::DegreeMismatch(format!(
                        "factor {j} sits in L^{k}, earlier factors in L^{k0}"
                    )))
                }
                _ => {}
            }
            for (a, w) in alpha.iter().zip(&weights) {
                for (t, x) in total.iter_mut().zip(w) {
                    *t += *a as i64 * x;
                }
            }
        }
        let k = level.unwrap_or(0) as i64;
        let shift = self.twist().scaled(k);
        Ok(Weight(total).add(&shift))
    }
}

pub(crate) fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1(weights: &[i64], d: i64, c: i64) -> Scenario {
        Scenario::new(
            GroupSpec::circle(1),
            vec![ProjectiveFactor::circle1(weights)],
            LinearizedBundle::new(vec![d], vec![c]),
        )
        .unwrap()
    }

    #[test]
    fn p1_circle_is_valid() {
        let s = p1(&[1, -1], 1, 0);
        assert_eq!(s.n(), 1);
        assert_eq!(s.g(), 1);
    }

    #[test]
    fn coordinate_count_mismatch() {
        let err = Scenario::new(
            GroupSpec::circle(1),
            vec![ProjectiveFactor::new(
                1,
                FactorWeights::Circle(vec![vec![1], vec![-1], vec![0]]),
            )],
            LinearizedBundle::new(vec![1], vec![0]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn su2_on_p3() {
        let s = Scenario::new(
            GroupSpec::su2(),
            vec![ProjectiveFactor::su2(vec![1, 1])],
            LinearizedBundle::new(vec![1], vec![]),
        )
        .unwrap();
        assert_eq!(s.n(), 3);
        assert_eq!(s.g(), 3);
        assert_eq!(s.quotient_dimension(), 0);
    }

    #[test]
    fn su2_rejects_circle_weights() {
        let err = Scenario::new(
            GroupSpec::su2(),
            vec![ProjectiveFactor::circle1(&[1, -1])],
            LinearizedBundle::new(vec![1], vec![]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::GroupMismatch { .. }));
    }

    #[test]
    fn nonpositive_degree() {
        let err = Scenario::new(
            GroupSpec::circle(1),
            vec![ProjectiveFactor::circle1(&[1, -1])],
            LinearizedBundle::new(vec![0], vec![0]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonPositiveDegree { .. }));
    }

    #[test]
    fn tensor_powers() {
        let b = LinearizedBundle::new(vec![1], vec![0]);
        assert_eq!(b.tensor_power(2).unwrap(), LinearizedBundle::new(vec![2], vec![0]));
        let b = LinearizedBundle::new(vec![1, 2], vec![3]);
        assert_eq!(b.tensor_power(3).unwrap(), LinearizedBundle::new(vec![3, 6], vec![9]));
        let b = LinearizedBundle::new(vec![2], vec![-1]);
        assert_eq!(b.tensor_power(1).unwrap(), b);
        assert_eq!(b.tensor_power(0), Err(Error::ZeroPower));
    }

    #[test]
    fn monomial_weights() {
        // z0^2 z1 z2 on P² with weights (-1, 1, 1): a + b - c = 1 + 1 - 2
        let s = Scenario::new(
            GroupSpec::circle(1),
            vec![ProjectiveFactor::circle1(&[-1, 1, 1])],
            LinearizedBundle::new(vec![1], vec![0]),
        )
        .unwrap();
        assert_eq!(s.weight_of_monomial(&[vec![2, 1, 1]]).unwrap(), Weight::scalar(0));
        // z0^k on P¹ with weights (1, -1)
        let s = p1(&[1, -1], 1, 0);
        assert_eq!(s.weight_of_monomial(&[vec![7, 0]]).unwrap(), Weight::scalar(7));
        // twist c = 1 at k = 2 shifts by 2
        let s = p1(&[1, -1], 1, 1);
        assert_eq!(s.weight_of_monomial(&[vec![1, 1]]).unwrap(), Weight::scalar(2));
    }

    #[test]
    fn monomial_degree_mismatch() {
        let s = Scenario::new(
            GroupSpec::circle(1),
            vec![ProjectiveFactor::circle1(&[1, -1]), ProjectiveFactor::circle1(&[0, 1])],
            LinearizedBundle::new(vec![1, 2], vec![0]),
        )
        .unwrap();
        assert!(s.weight_of_monomial(&[vec![1, 1], vec![2, 1]]).is_err());
        assert!(s.weight_of_monomial(&[vec![1, 1], vec![3, 1]]).is_ok());
    }

    #[test]
    fn su2_block_order_is_canonical() {
        let s = Scenario::new(
            GroupSpec::su2(),
            vec![ProjectiveFactor::su2(vec![1, 3])],
            LinearizedBundle::new(vec![1], vec![0]),
        )
        .unwrap();
        assert_eq!(s.factors[0].weights, FactorWeights::Su2(vec![3, 1]));
        assert!(s.bundle.twist.is_empty());
        assert_eq!(s.validate().unwrap(), s);
    }

    #[test]
    fn total_dimension_is_binomial_product() {
        let s = Scenario::new(
            GroupSpec::circle(1),
            vec![ProjectiveFactor::circle1(&[-1, 1, 1]), ProjectiveFactor::circle1(&[1, -1])],
            LinearizedBundle::new(vec![1, 2], vec![0]),
        )
        .unwrap();
        // C(2 + 3, 2) * C(1 + 6, 1)
        assert_eq!(s.total_dimension(3).unwrap(), 10 * 7);
    }
}
