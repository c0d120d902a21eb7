//! Moment images, stability, generic stabilizers and compatibility.
//!
//! For a torus acting on a product of projective spaces the moment image of
//! `L` is the convex hull of the points `Σ_j d_j w_{j,i_j} + c`, and the
//! critical values of the moment map are the images of the sub-tori fixed
//! point sets ("walls"). For SU(2) the relevant data is the highest-weight
//! interval, and stability is decided with the Hilbert–Mumford criterion on
//! tuples of binary forms.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::asymptotics::{VolumeEstimate, VolumeStatus};
use crate::error::{Error, Result};
use crate::lattice::{smith_normal_form, SmithForm};
use crate::model::{FactorWeights, Rational, Scenario, Weight};
use crate::multiplicity::{check_weight, irrep_dimension};

type Point = [i64; 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MomentImage {
    /// Rank-one torus: the interval `[lo, hi]`.
    Interval { lo: i64, hi: i64 },
    /// Rank-two torus: a convex lattice polygon with vertices in
    /// counter-clockwise order. One or two vertices for degenerate images.
    Polygon { vertices: Vec<Point> },
    /// SU(2): intersection of the image with the closed positive chamber.
    Dominant { lo: i64, hi: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Position {
    Inside,
    Boundary,
    Outside,
}

impl MomentImage {
    /// Position of `μ / k` relative to the image.
    pub fn locate(&self, mu: &Weight, k: u64) -> Position {
        let k = k as i128;
        match self {
            MomentImage::Interval { lo, hi } | MomentImage::Dominant { lo, hi } => {
                let (lo, hi, x) = (*lo as i128 * k, *hi as i128 * k, mu.0[0] as i128);
                if x < lo || x > hi {
                    Position::Outside
                } else if lo < x && x < hi {
                    Position::Inside
                } else {
                    Position::Boundary
                }
            }
            MomentImage::Polygon { vertices } => {
                let x = [mu.0[0] as i128, mu.0[1] as i128];
                let scaled: Vec<[i128; 2]> = vertices
                    .iter()
                    .map(|v| [v[0] as i128 * k, v[1] as i128 * k])
                    .collect();
                locate_in_polygon(&scaled, x)
            }
        }
    }

    pub fn contains(&self, mu: &Weight, k: u64) -> bool {
        self.locate(mu, k) != Position::Outside
    }
}

impl fmt::Display for MomentImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentImage::Interval { lo, hi } => write!(f, "[{lo}, {hi}]"),
            MomentImage::Dominant { lo, hi } => write!(f, "[{lo}, {hi}] (dominant)"),
            MomentImage::Polygon { vertices } => {
                let parts: Vec<String> = vertices
                    .iter()
                    .map(|v| format!("({},{})", v[0], v[1]))
                    .collect();
                write!(f, "conv{{{}}}", parts.join(", "))
            }
        }
    }
}

fn cross(o: [i128; 2], a: [i128; 2], b: [i128; 2]) -> i128 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn on_segment(a: [i128; 2], b: [i128; 2], x: [i128; 2]) -> bool {
    cross(a, b, x) == 0
        && x[0] >= a[0].min(b[0])
        && x[0] <= a[0].max(b[0])
        && x[1] >= a[1].min(b[1])
        && x[1] <= a[1].max(b[1])
}

fn locate_in_polygon(v: &[[i128; 2]], x: [i128; 2]) -> Position {
    match v.len() {
        0 => Position::Outside,
        1 => {
            if v[0] == x {
                Position::Boundary
            } else {
                Position::Outside
            }
        }
        2 => {
            if on_segment(v[0], v[1], x) {
                Position::Boundary
            } else {
                Position::Outside
            }
        }
        len => {
            let mut boundary = false;
            for i in 0..len {
                let c = cross(v[i], v[(i + 1) % len], x);
                if c < 0 {
                    return Position::Outside;
                }
                boundary |= c == 0;
            }
            if boundary {
                Position::Boundary
            } else {
                Position::Inside
            }
        }
    }
}

/// Convex hull by the monotone chain, counter-clockwise, without collinear
/// points.
fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let wide = |p: Point| [p[0] as i128, p[1] as i128];
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2
            && cross(wide(lower[lower.len() - 2]), wide(lower[lower.len() - 1]), wide(p)) <= 0
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(wide(upper[upper.len() - 2]), wide(upper[upper.len() - 1]), wide(p)) <= 0
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn circle_factor_weights(s: &Scenario, j: usize) -> Vec<Vec<i64>> {
    let mut w = s.factors[j].torus_weights();
    w.sort();
    w.dedup();
    w
}

fn su2_single_factor(s: &Scenario) -> Result<(&[u32], i64)> {
    match (s.factors.as_slice(), s.bundle.degrees.as_slice()) {
        ([f], [d]) => match &f.weights {
            FactorWeights::Su2(p) => Ok((p.as_slice(), *d)),
            FactorWeights::Circle(_) => Err(Error::GroupMismatch {
                factor: 0,
                kind: "circle",
            }),
        },
        _ => Err(Error::Unsupported(
            "su2 geometry is implemented for a single projective factor".into(),
        )),
    }
}

fn su2_unstable(powers: &[u32]) -> bool {
    powers == [1]
}

/// The moment image `Δ(L)`.
pub fn moment_image(s: &Scenario) -> Result<MomentImage> {
    if s.is_su2() {
        let (powers, d) = su2_single_factor(s)?;
        let top = powers.iter().copied().max().unwrap_or(0) as i64;
        let lo = if su2_unstable(powers) { d } else { 0 };
        return Ok(MomentImage::Dominant { lo, hi: d * top });
    }
    let c = s.twist();
    match s.g() {
        1 => {
            let (mut lo, mut hi) = (c.0[0], c.0[0]);
            for (j, &d) in s.bundle.degrees.iter().enumerate() {
                let w = circle_factor_weights(s, j);
                lo += d * w.first().map_or(0, |v| v[0]);
                hi += d * w.last().map_or(0, |v| v[0]);
            }
            Ok(MomentImage::Interval { lo, hi })
        }
        2 => {
            let mut acc: Vec<Point> = vec![[c.0[0], c.0[1]]];
            for (j, &d) in s.bundle.degrees.iter().enumerate() {
                let w = circle_factor_weights(s, j);
                let next = acc
                    .iter()
                    .flat_map(|p| w.iter().map(move |v| [p[0] + d * v[0], p[1] + d * v[1]]))
                    .collect();
                acc = convex_hull(next);
            }
            Ok(MomentImage::Polygon { vertices: acc })
        }
        g => Err(Error::Unsupported(format!(
            "moment images of tori of rank {g}"
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StabilityClass {
    Regular,
    Boundary,
    UnstableEverywhere,
    TrivialAction,
}

impl StabilityClass {
    pub fn name(self) -> &'static str {
        match self {
            StabilityClass::Regular => "regular",
            StabilityClass::Boundary => "boundary",
            StabilityClass::UnstableEverywhere => "unstable_everywhere",
            StabilityClass::TrivialAction => "trivial_action",
        }
    }
}

impl fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZeroPosition {
    Inside,
    OnWall,
    Outside,
}

impl ZeroPosition {
    pub fn name(self) -> &'static str {
        match self {
            ZeroPosition::Inside => "inside",
            ZeroPosition::OnWall => "on_wall",
            ZeroPosition::Outside => "outside",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub class: StabilityClass,
    pub moment_image: MomentImage,
    pub zero_position: ZeroPosition,
}

/// Values `Σ_j d_j w_{j,i_j} + c` over all choices of one weight per factor.
fn fixed_point_values(s: &Scenario) -> BTreeSet<i64> {
    let mut acc: BTreeSet<i64> = [s.twist().0[0]].into();
    for (j, &d) in s.bundle.degrees.iter().enumerate() {
        let w = circle_factor_weights(s, j);
        acc = acc
            .iter()
            .flat_map(|a| w.iter().map(move |v| a + d * v[0]))
            .collect();
    }
    acc
}

/// True if 0 lies on the image of a fixed-point component of a one-parameter
/// subgroup, for a rank-two torus.
fn zero_on_wall_rank2(s: &Scenario) -> bool {
    let weights: Vec<Vec<Vec<i64>>> = (0..s.factors.len())
        .map(|j| circle_factor_weights(s, j))
        .collect();
    let mut directions: BTreeSet<Point> = BTreeSet::new();
    for w in &weights {
        for a in w {
            for b in w {
                let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
                if (dx, dy) > (0, 0) {
                    let g = dx.gcd(&dy);
                    directions.insert([dx / g, dy / g]);
                }
            }
        }
    }
    let c = s.twist();
    let origin = [0i128; 2];
    for v in directions {
        let key = |w: &Vec<i64>| v[0] * w[1] - v[1] * w[0];
        let along = |w: &Vec<i64>| v[0] * w[0] + v[1] * w[1];
        // per factor: the lines parallel to v, as (min point, max point)
        let groups: Vec<Vec<(Point, Point)>> = weights
            .iter()
            .map(|w| {
                let keys: BTreeSet<i64> = w.iter().map(key).collect();
                keys.into_iter()
                    .map(|kv| {
                        let line: Vec<&Vec<i64>> = w.iter().filter(|x| key(x) == kv).collect();
                        let lo = line.iter().min_by_key(|x| along(x)).unwrap();
                        let hi = line.iter().max_by_key(|x| along(x)).unwrap();
                        ([lo[0], lo[1]], [hi[0], hi[1]])
                    })
                    .collect()
            })
            .collect();
        let mut segments: Vec<([i128; 2], [i128; 2])> =
            vec![([c.0[0] as i128, c.0[1] as i128], [c.0[0] as i128, c.0[1] as i128])];
        for (g, &d) in groups.iter().zip(&s.bundle.degrees) {
            let d = d as i128;
            segments = segments
                .iter()
                .flat_map(|(a, b)| {
                    g.iter().map(move |(lo, hi)| {
                        (
                            [a[0] + d * lo[0] as i128, a[1] + d * lo[1] as i128],
                            [b[0] + d * hi[0] as i128, b[1] + d * hi[1] as i128],
                        )
                    })
                })
                .collect();
        }
        if segments.iter().any(|&(a, b)| on_segment(a, b, origin)) {
            return true;
        }
    }
    false
}

/// Classifies the stability of `(M, L)` from the position of 0 relative to
/// the moment image and its walls.
pub fn classify_stability(s: &Scenario) -> Result<StabilityReport> {
    let moment_image = moment_image(s)?;
    if s.is_su2() {
        let (powers, _) = su2_single_factor(s)?;
        let (class, zero_position) = if powers.iter().all(|&m| m == 0) {
            (StabilityClass::TrivialAction, ZeroPosition::OnWall)
        } else if su2_unstable(powers) {
            (StabilityClass::UnstableEverywhere, ZeroPosition::Outside)
        } else if powers.iter().all(|m| m % 2 == 1) {
            (StabilityClass::Regular, ZeroPosition::Inside)
        } else {
            (StabilityClass::Boundary, ZeroPosition::OnWall)
        };
        return Ok(StabilityReport {
            class,
            moment_image,
            zero_position,
        });
    }

    let zero = Weight::zero(s.g());
    let position = moment_image.locate(&zero, 1);
    let trivial = s.factors.iter().all(|f| f.acts_trivially());
    let (class, zero_position) = match position {
        Position::Outside => (StabilityClass::UnstableEverywhere, ZeroPosition::Outside),
        _ if trivial => (StabilityClass::TrivialAction, ZeroPosition::OnWall),
        Position::Boundary => (StabilityClass::Boundary, ZeroPosition::OnWall),
        Position::Inside => {
            let on_wall = match s.g() {
                1 => fixed_point_values(s).contains(&0),
                _ => zero_on_wall_rank2(s),
            };
            if on_wall {
                (StabilityClass::Boundary, ZeroPosition::OnWall)
            } else {
                (StabilityClass::Regular, ZeroPosition::Inside)
            }
        }
    };
    Ok(StabilityReport {
        class,
        moment_image,
        zero_position,
    })
}

/// The generic stabilizer `K` of the action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerData {
    pub finite: bool,
    /// `|K|` when finite.
    pub order: Option<u64>,
    /// Invariant factors of the character group of `K` (torus case);
    /// `[2]` for `{±1} ⊂ SU(2)`.
    pub invariant_factors: Vec<i64>,
    pub central: bool,
    smith: Option<SmithForm>,
}

fn difference_smith(s: &Scenario) -> SmithForm {
    let g = s.g();
    let mut columns: Vec<Vec<i64>> = Vec::new();
    for f in &s.factors {
        let w = f.torus_weights();
        for x in &w[1..] {
            columns.push((0..g).map(|r| x[r] - w[0][r]).collect());
        }
    }
    let matrix: Vec<Vec<i64>> = (0..g)
        .map(|r| columns.iter().map(|col| col[r]).collect())
        .collect();
    smith_normal_form(&matrix, g, columns.len())
}

pub fn generic_stabilizer(s: &Scenario) -> Result<StabilizerData> {
    if s.is_su2() {
        let blocks: Vec<u32> = s
            .factors
            .iter()
            .flat_map(|f| match &f.weights {
                FactorWeights::Su2(p) => p.clone(),
                FactorWeights::Circle(_) => Vec::new(),
            })
            .collect();
        let infinite = StabilizerData {
            finite: false,
            order: None,
            invariant_factors: Vec::new(),
            central: false,
            smith: None,
        };
        if blocks.iter().all(|&m| m == 0) {
            return Ok(infinite);
        }
        match blocks.as_slice() {
            [1] | [2] => return Ok(infinite),
            // binary cubics and quartics have binary dihedral stabilizers
            [3] => {
                return Ok(StabilizerData {
                    finite: true,
                    order: Some(12),
                    invariant_factors: Vec::new(),
                    central: false,
                    smith: None,
                })
            }
            [4] => {
                return Ok(StabilizerData {
                    finite: true,
                    order: Some(8),
                    invariant_factors: Vec::new(),
                    central: false,
                    smith: None,
                })
            }
            _ => {}
        }
        let same_parity = blocks.iter().all(|m| m % 2 == blocks[0] % 2);
        let (order, invariant_factors) = if same_parity { (2, vec![2]) } else { (1, vec![]) };
        return Ok(StabilizerData {
            finite: true,
            order: Some(order),
            invariant_factors,
            central: true,
            smith: None,
        });
    }

    let smith = difference_smith(s);
    let finite = smith.rank() == s.g();
    let order = finite.then(|| smith.invariants.iter().map(|&d| d as u64).product());
    Ok(StabilizerData {
        finite,
        order,
        invariant_factors: smith.invariants.clone(),
        central: true,
        smith: Some(smith),
    })
}

/// Witness data for numerical compatibility of `μ` with `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityCertificate {
    pub stabilizer: StabilizerData,
    /// The character `χ` by which `K` acts on the fiber of `L`.
    pub chi: Vec<i64>,
    /// The restriction `μ|_K`.
    pub mu_k: Vec<i64>,
    /// Smallest `r ≥ 1` with `r·χ = μ|_K`, if any.
    pub witness: Option<u64>,
    /// Order of `χ`, the exponent `e_G(L)` in the regular case.
    pub chi_order: u64,
}

impl CompatibilityCertificate {
    pub fn compatible(&self) -> bool {
        self.witness.is_some()
    }
}

/// Reduces a weight to its class in the character group of the stabilizer.
type ResidueMap = Box<dyn Fn(&[i64]) -> Vec<i64>>;

pub fn numerically_compatible(s: &Scenario, mu: &Weight) -> Result<CompatibilityCertificate> {
    check_weight(s, mu)?;
    let stabilizer = generic_stabilizer(s)?;
    if !stabilizer.finite {
        return Err(Error::InfiniteStabilizer);
    }
    if !stabilizer.central {
        return Err(Error::NonCentralStabilizer);
    }
    let order = stabilizer.order.unwrap_or(1);

    let (residue, chi): (ResidueMap, Vec<i64>) = if s.is_su2() {
        if order == 1 {
            (Box::new(|_: &[i64]| Vec::new()), Vec::new())
        } else {
            let parity: i64 = s
                .factors
                .iter()
                .zip(&s.bundle.degrees)
                .map(|(f, &d)| match &f.weights {
                    FactorWeights::Su2(p) => d * i64::from(p[0] % 2),
                    FactorWeights::Circle(_) => 0,
                })
                .sum();
            (
                Box::new(|v: &[i64]| vec![v[0].rem_euclid(2)]),
                vec![parity.rem_euclid(2)],
            )
        }
    } else {
        let smith = stabilizer.smith.clone().expect("torus stabilizer carries its Smith form");
        let c = s.twist();
        let mut reference = c.0.clone();
        for (f, &d) in s.factors.iter().zip(&s.bundle.degrees) {
            let w = f.torus_weights();
            for (r, x) in reference.iter_mut().zip(&w[0]) {
                *r += d * x;
            }
            for x in &w[1..] {
                let diff: Vec<i64> = x.iter().zip(&w[0]).map(|(a, b)| d * (a - b)).collect();
                if smith.residue(&diff).iter().any(|&t| t != 0) {
                    return Err(Error::IllDefinedCharacter(format!(
                        "coordinate weights {x:?} and {:?} restrict differently",
                        w[0]
                    )));
                }
            }
        }
        let chi = smith.residue(&reference);
        (Box::new(move |v: &[i64]| smith.residue(v)), chi)
    };

    let mu_k = residue(&mu.0);
    let chi_scaled = |r: u64| -> Vec<i64> {
        let v: Vec<i64> = chi.iter().map(|x| x * r as i64).collect();
        // chi is already reduced, so reducing the scaled coordinates is enough
        if s.is_su2() {
            v.iter().map(|x| x.rem_euclid(2)).collect()
        } else {
            v.iter()
                .zip(&stabilizer.invariant_factors)
                .map(|(x, m)| x.rem_euclid(*m))
                .collect()
        }
    };
    let chi_order = (1..=order).find(|&r| chi_scaled(r).iter().all(|&x| x == 0)).unwrap_or(order);
    let witness = (1..=order).find(|&r| chi_scaled(r) == mu_k);
    Ok(CompatibilityCertificate {
        stabilizer,
        chi,
        mu_k,
        witness,
        chi_order,
    })
}

/// `(dim V_μ)² · vol₀(L)` if `μ` is numerically compatible with `L`, else 0.
pub fn predicted_volume(s: &Scenario, mu: &Weight, vol0: &VolumeEstimate) -> Result<VolumeEstimate> {
    let report = classify_stability(s)?;
    if report.class != StabilityClass::Regular {
        return Err(Error::Precondition(format!(
            "prediction needs a regular scenario, got {}",
            report.class
        )));
    }
    if vol0.status != VolumeStatus::Exact {
        return Err(Error::Precondition(format!(
            "prediction needs an exact positive vol_0, got {}",
            vol0.status
        )));
    }
    let cert = numerically_compatible(s, mu)?;
    if !cert.compatible() {
        return Ok(VolumeEstimate::zero());
    }
    let dim = Rational::from_integer(BigInt::from(irrep_dimension(s, mu)));
    Ok(VolumeEstimate::finite(&dim * &dim * &vol0.value, None))
}

fn solve_rational(columns: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let rows = rhs.len();
    let cols = columns.len();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut out = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        out[c] = m[i][cols].clone();
    }
    Some(out)
}

fn rational_polygon_area(mut pts: Vec<[Rational; 2]>) -> Rational {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return Rational::zero();
    }
    let cross = |o: &[Rational; 2], a: &[Rational; 2], b: &[Rational; 2]| {
        (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
    };
    let mut hull: Vec<[Rational; 2]> = Vec::new();
    for pass in [pts.clone(), pts.iter().rev().cloned().collect()] {
        let start = hull.len();
        for p in pass {
            while hull.len() >= start + 2
                && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= Rational::zero()
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let len = hull.len();
    let twice: Rational = (0..len)
        .map(|i| {
            let (a, b) = (&hull[i], &hull[(i + 1) % len]);
            &a[0] * &b[1] - &a[1] * &b[0]
        })
        .sum();
    twice.abs() / Rational::from_integer(2.into())
}

/// Normalized lattice volume of the slice polytope
/// `{α ≥ 0 : Σα = d, Σ α_i w_i = -c}`, times `(n - 1)!`.
///
/// Independent geometric check of `vol₀(L)` for a circle acting on a single
/// projective space of dimension at most 3 with 0 a regular value.
pub fn dh_slice_volume(s: &Scenario) -> Result<Rational> {
    if s.is_su2() || s.g() != 1 || s.factors.len() != 1 || s.n() > 3 {
        return Err(Error::Precondition(
            "slice volumes need a circle acting on one projective space of dimension <= 3".into(),
        ));
    }
    let report = classify_stability(s)?;
    if report.class != StabilityClass::Regular {
        return Err(Error::Precondition(format!(
            "slice volume needs a regular scenario, got {}",
            report.class
        )));
    }
    let n = s.n();
    if n == 1 {
        return Ok(Rational::from_integer(1.into()));
    }
    let d = s.bundle.degrees[0];
    let c = s.twist().0[0];
    let w: Vec<i64> = s.factors[0].torus_weights().iter().map(|v| v[0]).collect();
    let u: Vec<i64> = w.iter().map(|x| d * x + c).collect();

    let mut vertices: Vec<Vec<Rational>> = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            if u[i] < 0 && u[j] > 0 {
                let denom = u[j] - u[i];
                let mut x = vec![Rational::zero(); n + 1];
                x[i] = Rational::new((d * u[j]).into(), denom.into());
                x[j] = Rational::new((-d * u[i]).into(), denom.into());
                vertices.push(x);
            }
        }
    }

    let constraints = vec![vec![1i64; n + 1], w.clone()];
    let basis: Vec<Vec<Rational>> = smith_normal_form(&constraints, 2, n + 1)
        .kernel_basis()
        .into_iter()
        .map(|v| v.into_iter().map(|x| Rational::from_integer(x.into())).collect())
        .collect();
    let coords: Vec<Vec<Rational>> = vertices
        .iter()
        .map(|x| {
            let rhs: Vec<Rational> = x.iter().zip(&vertices[0]).map(|(a, b)| a - b).collect();
            solve_rational(&basis, &rhs).expect("slice vertices differ by kernel vectors")
        })
        .collect();
    Ok(match n {
        2 => {
            let ts = coords.iter().map(|t| t[0].clone());
            let max = ts.clone().max().unwrap();
            let min = ts.min().unwrap();
            max - min
        }
        _ => {
            let area = rational_polygon_area(coords.into_iter().map(|t| [t[0].clone(), t[1].clone()]).collect());
            area * Rational::from_integer(2.into())
        }
    })
}

/// A level `r_μ` such that `H⁰(M, L^k)_μ = 0` for all `k ≥ r_μ`, when 0 lies
/// outside the moment image. `None` when 0 is in the image.
pub fn vanishing_certificate(s: &Scenario, mu: &Weight) -> Result<Option<u64>> {
    check_weight(s, mu)?;
    let image = moment_image(s)?;
    if image.contains(&Weight::zero(s.torus_rank()), 1) {
        return Ok(None);
    }
    // a functional u with u·x >= h > 0 on the image
    let (value, h): (i128, i128) = match &image {
        MomentImage::Interval { lo, hi } => {
            let (lo, hi) = (*lo as i128, *hi as i128);
            let dist = if lo > 0 { lo } else { -hi };
            ((mu.0[0] as i128).abs(), dist)
        }
        MomentImage::Dominant { lo, .. } => (mu.0[0] as i128, *lo as i128),
        MomentImage::Polygon { vertices } => {
            let v: Vec<[i128; 2]> = vertices.iter().map(|p| [p[0] as i128, p[1] as i128]).collect();
            let (u, h) = separating_functional(&v);
            (u[0] * mu.0[0] as i128 + u[1] * mu.0[1] as i128, h)
        }
    };
    let r = Integer::div_ceil(&value.max(0), &h) + 1;
    Ok(Some(r as u64))
}

fn separating_functional(v: &[[i128; 2]]) -> ([i128; 2], i128) {
    let dot = |a: [i128; 2], b: [i128; 2]| a[0] * b[0] + a[1] * b[1];
    match v.len() {
        1 => (v[0], dot(v[0], v[0])),
        2 => {
            let (a, b) = (v[0], v[1]);
            let e = [b[0] - a[0], b[1] - a[1]];
            let side = cross(a, b, [0, 0]);
            if side != 0 {
                let normal = [-e[1], e[0]];
                let u = if dot(normal, a) > 0 { normal } else { [e[1], -e[0]] };
                (u, dot(u, a))
            } else {
                let u = if dot(e, a) > 0 { e } else { [-e[0], -e[1]] };
                (u, dot(u, a).min(dot(u, b)))
            }
        }
        len => {
            let i = (0..len)
                .find(|&i| cross(v[i], v[(i + 1) % len], [0, 0]) < 0)
                .expect("origin outside the polygon");
            let (a, b) = (v[i], v[(i + 1) % len]);
            let u = [-(b[1] - a[1]), b[0] - a[0]];
            (u, dot(u, a))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GroupSpec, LinearizedBundle, ProjectiveFactor};

    fn circle1(w: &[i64], d: i64, c: i64) -> Scenario {
        Scenario::new(
            GroupSpec::circle(1),
            vec![ProjectiveFactor::circle1(w)],
            LinearizedBundle::new(vec![d], vec![c]),
        )
        .unwrap()
    }

    fn su2(powers: Vec<u32>, d: i64) -> Scenario {
        Scenario::new(
            GroupSpec::su2(),
            vec![ProjectiveFactor::su2(powers)],
            LinearizedBundle::new(vec![d], vec![]),
        )
        .unwrap()
    }

    fn torus2(w: Vec<Vec<i64>>, d: i64, c: [i64; 2]) -> Scenario {
        Scenario::new(
            GroupSpec::circle(2),
            vec![ProjectiveFactor::circle(w)],
            LinearizedBundle::new(vec![d], c.to_vec()),
        )
        .unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn circle_classes() {
        let class = |s: &Scenario| classify_stability(s).unwrap().class;
        assert_eq!(class(&circle1(&[0, 0, 0], 1, 0)), StabilityClass::TrivialAction);
        assert_eq!(class(&circle1(&[0, 0, 0], 1, 1)), StabilityClass::UnstableEverywhere);
        assert_eq!(class(&circle1(&[-1, 1, 1], 1, 0)), StabilityClass::Regular);
        assert_eq!(class(&circle1(&[1, 2], 1, 0)), StabilityClass::UnstableEverywhere);
        assert_eq!(class(&circle1(&[1, -1], 1, 0)), StabilityClass::Regular);
        assert_eq!(class(&circle1(&[1, -1], 2, 0)), StabilityClass::Regular);
        assert_eq!(class(&circle1(&[1, -1], 2, 2)), StabilityClass::Boundary);
        assert_eq!(class(&circle1(&[-1, 0, 1], 1, 0)), StabilityClass::Boundary);
        assert_eq!(class(&circle1(&[0, 1, 1, 1], 1, 0)), StabilityClass::Boundary);
    }

    #[test]
    fn images() {
        assert_eq!(
            moment_image(&circle1(&[-1, 1, 1], 2, 1)).unwrap(),
            MomentImage::Interval { lo: -1, hi: 3 }
        );
        let tri = torus2(vec![vec![1, 0], vec![0, 1], vec![-1, -1]], 1, [0, 0]);
        let MomentImage::Polygon { vertices } = moment_image(&tri).unwrap() else {
            panic!()
        };
        assert_eq!(vertices.len(), 3);
        assert_eq!(classify_stability(&tri).unwrap().class, StabilityClass::Regular);
        assert_eq!(
            moment_image(&su2(vec![1], 3)).unwrap(),
            MomentImage::Dominant { lo: 3, hi: 3 }
        );
    }

    #[test]
    fn rank_two_walls() {
        // square image with the origin on the segment joining two weights
        let sq = torus2(vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]], 1, [0, 0]);
        let r = classify_stability(&sq).unwrap();
        assert_eq!(r.class, StabilityClass::Boundary);
        assert_eq!(r.zero_position, ZeroPosition::OnWall);
    }

    #[test]
    fn su2_classes() {
        let class = |p: Vec<u32>| classify_stability(&su2(p, 1)).unwrap().class;
        assert_eq!(class(vec![1, 1]), StabilityClass::Regular);
        assert_eq!(class(vec![1, 1, 1]), StabilityClass::Regular);
        assert_eq!(class(vec![1]), StabilityClass::UnstableEverywhere);
        assert_eq!(class(vec![2]), StabilityClass::Boundary);
        assert_eq!(class(vec![1, 0]), StabilityClass::Boundary);
        assert_eq!(class(vec![0, 0]), StabilityClass::TrivialAction);
    }

    #[test]
    fn stabilizers() {
        let k = generic_stabilizer(&circle1(&[-1, 1, 1], 1, 0)).unwrap();
        assert_eq!(k.order, Some(2));
        let k = generic_stabilizer(&circle1(&[0, 0, 0], 1, 0)).unwrap();
        assert!(!k.finite);
        let tri = torus2(vec![vec![1, 0], vec![0, 1], vec![-1, -1]], 1, [0, 0]);
        assert_eq!(generic_stabilizer(&tri).unwrap().order, Some(3));
        let k = generic_stabilizer(&su2(vec![1, 1], 1)).unwrap();
        assert_eq!((k.order, k.central), (Some(2), true));
        assert_eq!(generic_stabilizer(&su2(vec![2, 1], 1)).unwrap().order, Some(1));
        assert!(!generic_stabilizer(&su2(vec![3], 1)).unwrap().central);
    }

    #[test]
    fn compatibility() {
        let s = circle1(&[-1, 1, 1], 1, 0);
        let even = numerically_compatible(&s, &Weight::scalar(0)).unwrap();
        assert_eq!((even.chi.clone(), even.witness, even.chi_order), (vec![1], Some(2), 2));
        assert_eq!(numerically_compatible(&s, &Weight::scalar(3)).unwrap().witness, Some(1));

        let p3 = su2(vec![1, 1], 1);
        assert!(numerically_compatible(&p3, &Weight::scalar(1)).unwrap().compatible());
        assert!(numerically_compatible(&p3, &Weight::scalar(2)).unwrap().compatible());
        let p3_even = su2(vec![1, 1], 2);
        assert!(!numerically_compatible(&p3_even, &Weight::scalar(1)).unwrap().compatible());

        assert_eq!(
            numerically_compatible(&circle1(&[0, 0], 1, 0), &Weight::scalar(0)),
            Err(Error::InfiniteStabilizer)
        );
        assert_eq!(
            numerically_compatible(&su2(vec![3], 1), &Weight::scalar(1)),
            Err(Error::NonCentralStabilizer)
        );
    }

    #[test]
    fn predictions() {
        let s = circle1(&[-1, 1, 1], 1, 0);
        let vol0 = VolumeEstimate::finite(rat(1, 2), None);
        assert_eq!(predicted_volume(&s, &Weight::scalar(4), &vol0).unwrap().value, rat(1, 2));
        let su = su2(vec![1, 1], 1);
        let v = predicted_volume(&su, &Weight::scalar(2), &VolumeEstimate::finite(rat(1, 6), None)).unwrap();
        assert_eq!(v.value, rat(9, 6));
        assert!(predicted_volume(&circle1(&[-1, 0, 1], 1, 0), &Weight::scalar(0), &vol0).is_err());
    }

    #[test]
    fn slice_volumes() {
        assert_eq!(dh_slice_volume(&circle1(&[-1, 1, 1], 1, 0)).unwrap(), rat(1, 2));
        assert_eq!(dh_slice_volume(&circle1(&[-1, 1, 1], 3, 1)).unwrap(), rat(1, 1));
        assert_eq!(dh_slice_volume(&circle1(&[-1, -1, 1, 1], 1, 0)).unwrap(), rat(1, 2));
        assert_eq!(dh_slice_volume(&circle1(&[1, -1], 1, 0)).unwrap(), rat(1, 1));
        assert!(dh_slice_volume(&circle1(&[-1, 0, 1], 1, 0)).is_err());
    }

    #[test]
    fn certificates() {
        assert_eq!(vanishing_certificate(&circle1(&[-1, 1, 1], 1, 0), &Weight::scalar(0)).unwrap(), None);
        assert_eq!(vanishing_certificate(&circle1(&[1, 2], 1, 0), &Weight::scalar(5)).unwrap(), Some(6));
        assert_eq!(vanishing_certificate(&su2(vec![1], 1), &Weight::scalar(3)).unwrap(), Some(4));
        let off = torus2(vec![vec![1, 0], vec![0, 1], vec![1, 1]], 1, [0, 0]);
        assert!(vanishing_certificate(&off, &Weight(vec![2, 2])).unwrap().is_some());
    }
}
