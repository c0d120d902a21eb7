//! Exact isotypic section counts.
//!
//! For every factor, the number of monomials of each degree `t` and torus
//! weight `w` is obtained from the generating function
//! `Π_i 1/(1 - s·x^{w_i})` by adding one coordinate at a time, which is the
//! unbounded-knapsack recurrence `T_i[t][w] = T_{i-1}[t][w] + T_i[t-1][w - w_i]`.
//! Factors are combined by convolving their weight distributions at degree
//! `k·d_j`, and the twist shifts everything by `k·c`.
//!
//! For SU(2) the same computation over torus weights gives the weight
//! multiplicities `m(·)` of `Sym^{kd}(W)`; the multiplicity of the
//! irreducible `V_μ` is `m(μ) - m(μ + 2)`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{binomial, Scenario, Weight};

/// Memory guard for the dense weight tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of cells allowed in a single weight table.
    pub max_cells: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cells: 4_000_000,
        }
    }
}

/// Dense table of counts over an integer box `[lo, lo + ext)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Grid {
    lo: Vec<i64>,
    ext: Vec<usize>,
    data: Vec<u128>,
}

impl Grid {
    fn new(lo: Vec<i64>, hi: &[i64], limits: Limits) -> Result<Grid> {
        let ext: Vec<usize> = lo.iter().zip(hi).map(|(l, h)| (h - l + 1) as usize).collect();
        let cells = ext.iter().try_fold(1usize, |acc, &e| acc.checked_mul(e));
        match cells {
            Some(c) if c <= limits.max_cells => Ok(Grid {
                lo,
                ext,
                data: vec![0; c],
            }),
            Some(c) => Err(Error::WeightRangeExceeded {
                cells: c,
                bound: limits.max_cells,
            }),
            None => Err(Error::WeightRangeExceeded {
                cells: usize::MAX,
                bound: limits.max_cells,
            }),
        }
    }

    fn hi(&self) -> Vec<i64> {
        self.lo
            .iter()
            .zip(&self.ext)
            .map(|(l, e)| l + *e as i64 - 1)
            .collect()
    }

    fn index(&self, w: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for ((x, l), e) in w.iter().zip(&self.lo).zip(&self.ext) {
            let off = x - l;
            if off < 0 || off as usize >= *e {
                return None;
            }
            idx = idx * e + off as usize;
        }
        Some(idx)
    }

    fn coords(&self, mut idx: usize) -> Vec<i64> {
        let mut out = vec![0; self.lo.len()];
        for c in (0..self.lo.len()).rev() {
            out[c] = self.lo[c] + (idx % self.ext[c]) as i64;
            idx /= self.ext[c];
        }
        out
    }

    fn get(&self, w: &[i64]) -> u128 {
        self.index(w).map_or(0, |i| self.data[i])
    }

    /// Calls `f` on every nonzero cell, in index order.
    fn for_each_nonzero(&self, mut f: impl FnMut(&[i64], u128) -> Result<()>) -> Result<()> {
        let mut w = self.lo.clone();
        let dims = w.len();
        for &v in &self.data {
            if v != 0 {
                f(&w, v)?;
            }
            // odometer, last component fastest
            for c in (0..dims).rev() {
                w[c] += 1;
                if w[c] < self.lo[c] + self.ext[c] as i64 {
                    break;
                }
                w[c] = self.lo[c];
            }
        }
        Ok(())
    }

    fn nonzero(&self) -> impl Iterator<Item = (Vec<i64>, u128)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (self.coords(i), v))
    }

    fn convolve(&self, other: &Grid, limits: Limits) -> Result<Grid> {
        let lo: Vec<i64> = self.lo.iter().zip(&other.lo).map(|(a, b)| a + b).collect();
        let hi: Vec<i64> = self.hi().iter().zip(other.hi()).map(|(a, b)| a + b).collect();
        let mut out = Grid::new(lo, &hi, limits)?;
        let rhs: Vec<(Vec<i64>, u128)> = other.nonzero().collect();
        let mut w = vec![0i64; self.lo.len()];
        self.for_each_nonzero(|a, va| {
            for (b, vb) in &rhs {
                for (c, slot) in w.iter_mut().enumerate() {
                    *slot = a[c] + b[c];
                }
                let i = out.index(&w).expect("sum lies in the sum box");
                let prod = va.checked_mul(*vb).ok_or(Error::CountOverflow)?;
                out.data[i] = out.data[i].checked_add(prod).ok_or(Error::CountOverflow)?;
            }
            Ok(())
        })?;
        Ok(out)
    }

    /// `Σ_a self[a] · other[target - a]`.
    fn dot_at(&self, other: &Grid, target: &[i64]) -> Result<u128> {
        let mut acc: u128 = 0;
        let mut b = vec![0i64; target.len()];
        self.for_each_nonzero(|a, va| {
            for (c, slot) in b.iter_mut().enumerate() {
                *slot = target[c] - a[c];
            }
            let vb = other.get(&b);
            if vb != 0 {
                let prod = va.checked_mul(vb).ok_or(Error::CountOverflow)?;
                acc = acc.checked_add(prod).ok_or(Error::CountOverflow)?;
            }
            Ok(())
        })?;
        Ok(acc)
    }
}

/// Weight tables of degree-`t` monomials of one factor, for each requested `t`.
fn factor_rows(
    weights: &[Vec<i64>],
    degrees: &BTreeSet<u64>,
    limits: Limits,
) -> Result<BTreeMap<u64, Grid>> {
    let rank = weights[0].len();
    let lo: Vec<i64> = (0..rank).map(|c| weights.iter().map(|w| w[c]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..rank).map(|c| weights.iter().map(|w| w[c]).max().unwrap()).collect();
    let boxed = |t: i64| -> Result<Grid> {
        let l: Vec<i64> = lo.iter().map(|x| x * t).collect();
        let h: Vec<i64> = hi.iter().map(|x| x * t).collect();
        Grid::new(l, &h, limits)
    };

    let mut out = BTreeMap::new();
    let Some(&top) = degrees.iter().next_back() else {
        return Ok(out);
    };
    // cur[i]: monomials in the first i + 1 coordinates, at the current degree
    let mut unit = boxed(0)?;
    unit.data[0] = 1;
    let mut cur = vec![unit; weights.len()];
    if degrees.contains(&0) {
        out.insert(0, cur[weights.len() - 1].clone());
    }
    for t in 1..=top {
        let mut next: Vec<Grid> = Vec::with_capacity(weights.len());
        for (i, w) in weights.iter().enumerate() {
            let mut row = match next.last() {
                Some(prev) => prev.clone(),
                None => boxed(t as i64)?,
            };
            let mut dst = vec![0i64; rank];
            cur[i].for_each_nonzero(|src, v| {
                for (c, slot) in dst.iter_mut().enumerate() {
                    *slot = src[c] + w[c];
                }
                let j = row.index(&dst).expect("shifted weight stays in the box");
                row.data[j] = row.data[j].checked_add(v).ok_or(Error::CountOverflow)?;
                Ok(())
            })?;
            next.push(row);
        }
        cur = next;
        if degrees.contains(&t) {
            out.insert(t, cur[weights.len() - 1].clone());
        }
    }
    Ok(out)
}

pub(crate) fn check_weight(s: &Scenario, mu: &Weight) -> Result<()> {
    if mu.rank() != s.torus_rank() {
        return Err(Error::InvalidWeight(format!(
            "weight {mu} has rank {}, expected {}",
            mu.rank(),
            s.torus_rank()
        )));
    }
    if s.is_su2() && mu.0[0] < 0 {
        return Err(Error::InvalidWeight(format!(
            "su2 highest weight must be >= 0, got {mu}"
        )));
    }
    Ok(())
}

/// `dim V_μ`: 1 for torus characters, `μ + 1` for SU(2).
pub fn irrep_dimension(s: &Scenario, mu: &Weight) -> u128 {
    if s.is_su2() {
        mu.0[0] as u128 + 1
    } else {
        1
    }
}

/// Precomputed weight tables of a scenario for a fixed set of levels `k`.
#[derive(Clone, Debug)]
pub struct SectionCounter {
    scenario: Scenario,
    levels: BTreeSet<u64>,
    rows: Vec<BTreeMap<u64, Grid>>,
    limits: Limits,
}

impl SectionCounter {
    pub fn new(
        scenario: &Scenario,
        levels: impl IntoIterator<Item = u64>,
        limits: Limits,
    ) -> Result<SectionCounter> {
        let levels: BTreeSet<u64> = levels.into_iter().collect();
        let rows = scenario
            .factors
            .iter()
            .enumerate()
            .map(|(j, f)| {
                let degrees = levels.iter().map(|&k| scenario.factor_degree(j, k)).collect();
                factor_rows(&f.torus_weights(), &degrees, limits)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SectionCounter {
            scenario: scenario.clone(),
            levels,
            rows,
            limits,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn levels(&self) -> &BTreeSet<u64> {
        &self.levels
    }

    fn factor_row(&self, j: usize, k: u64) -> Result<&Grid> {
        self.rows[j]
            .get(&self.scenario.factor_degree(j, k))
            .ok_or(Error::LevelNotPrepared(k))
    }

    /// Numbers of monomial sections of `L^k` with the given torus weights.
    fn torus_counts(&self, k: u64, targets: &[Weight]) -> Result<Vec<u128>> {
        if !self.levels.contains(&k) {
            return Err(Error::LevelNotPrepared(k));
        }
        let shift = self.scenario.twist().scaled(k as i64);
        let m = self.scenario.factors.len();
        let last = self.factor_row(m - 1, k)?;
        let mut head: Option<Grid> = None;
        for j in 0..m - 1 {
            let row = self.factor_row(j, k)?;
            head = Some(match head {
                None => row.clone(),
                Some(h) => h.convolve(row, self.limits)?,
            });
        }
        targets
            .iter()
            .map(|t| {
                let w: Vec<i64> = t.0.iter().zip(&shift.0).map(|(a, b)| a - b).collect();
                match &head {
                    None => Ok(last.get(&w)),
                    Some(h) => h.dot_at(last, &w),
                }
            })
            .collect()
    }

    /// Full torus-weight distribution of `H⁰(M, L^k)`.
    fn torus_distribution(&self, k: u64) -> Result<BTreeMap<Weight, u128>> {
        if !self.levels.contains(&k) {
            return Err(Error::LevelNotPrepared(k));
        }
        let shift = self.scenario.twist().scaled(k as i64);
        let mut acc: Option<Grid> = None;
        for j in 0..self.scenario.factors.len() {
            let row = self.factor_row(j, k)?;
            acc = Some(match acc {
                None => row.clone(),
                Some(a) => a.convolve(row, self.limits)?,
            });
        }
        let grid = acc.expect("at least one factor");
        Ok(grid
            .nonzero()
            .map(|(w, v)| (Weight(w).add(&shift), v))
            .collect())
    }

    /// Multiplicity `N^{(k)}(μ)` of `V_μ` in `H⁰(M, L^k)`.
    pub fn multiplicity(&self, k: u64, mu: &Weight) -> Result<u128> {
        check_weight(&self.scenario, mu)?;
        if self.scenario.is_su2() {
            let up = Weight::scalar(mu.0[0] + 2);
            let c = self.torus_counts(k, &[mu.clone(), up])?;
            assert!(
                c[0] >= c[1],
                "su2 weight multiplicities are not unimodal at k = {k}, mu = {mu}"
            );
            Ok(c[0] - c[1])
        } else {
            Ok(self.torus_counts(k, std::slice::from_ref(mu))?[0])
        }
    }

    /// `dim H⁰(M, L^k)_μ = dim V_μ · N^{(k)}(μ)`.
    pub fn section_dimension(&self, k: u64, mu: &Weight) -> Result<u128> {
        let n = self.multiplicity(k, mu)?;
        n.checked_mul(irrep_dimension(&self.scenario, mu))
            .ok_or(Error::CountOverflow)
    }

    /// The isotypic decomposition at level `k`, as `μ ↦ N^{(k)}(μ)` over the
    /// nonzero multiplicities.
    pub fn distribution(&self, k: u64) -> Result<BTreeMap<Weight, u128>> {
        let torus = self.torus_distribution(k)?;
        if !self.scenario.is_su2() {
            return Ok(torus);
        }
        let mut out = BTreeMap::new();
        for (w, &m) in torus.range(Weight::scalar(0)..) {
            let above = torus.get(&Weight::scalar(w.0[0] + 2)).copied().unwrap_or(0);
            assert!(m >= above, "su2 weight multiplicities are not unimodal at k = {k}");
            if m > above {
                out.insert(w.clone(), m - above);
            }
        }
        Ok(out)
    }
}

/// `dim H⁰(M, L^k)_μ`.
pub fn section_dimension(s: &Scenario, k: u64, mu: &Weight) -> Result<u128> {
    SectionCounter::new(s, [k], Limits::default())?.section_dimension(k, mu)
}

/// `N^{(k)}(μ)`, the number of copies of `V_μ` in `H⁰(M, L^k)`.
pub fn multiplicity(s: &Scenario, k: u64, mu: &Weight) -> Result<u128> {
    SectionCounter::new(s, [k], Limits::default())?.multiplicity(k, mu)
}

/// The complete decomposition `μ ↦ N^{(k)}(μ)` at level `k`.
pub fn full_weight_distribution(s: &Scenario, k: u64) -> Result<BTreeMap<Weight, u128>> {
    SectionCounter::new(s, [k], Limits::default())?.distribution(k)
}

/// Multiplicities `N^{(k)}(μ)` for `k = 0..=k_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotypicTable {
    pub scenario: Scenario,
    pub k_max: u64,
    pub entries: BTreeMap<(u64, Weight), u128>,
}

impl IsotypicTable {
    pub fn build(s: &Scenario, k_max: u64, limits: Limits) -> Result<IsotypicTable> {
        let counter = SectionCounter::new(s, 0..=k_max, limits)?;
        let mut entries = BTreeMap::new();
        for k in 0..=k_max {
            for (mu, n) in counter.distribution(k)? {
                entries.insert((k, mu), n);
            }
        }
        Ok(IsotypicTable {
            scenario: s.clone(),
            k_max,
            entries,
        })
    }

    pub fn get(&self, k: u64, mu: &Weight) -> u128 {
        self.entries.get(&(k, mu.clone())).copied().unwrap_or(0)
    }

    /// `Σ_μ dim V_μ · N^{(k)}(μ)`.
    pub fn weighted_total(&self, k: u64) -> u128 {
        self.entries
            .range((k, Weight(vec![i64::MIN; self.scenario.torus_rank()]))..)
            .take_while(|((kk, _), _)| *kk == k)
            .map(|((_, mu), n)| irrep_dimension(&self.scenario, mu) * n)
            .sum()
    }
}

/// `C(n + k, n)`, exposed for callers checking total dimensions.
pub fn monomial_count(n: u64, k: u64) -> Option<u128> {
    binomial(n as u128 + k as u128, n as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GroupSpec, LinearizedBundle, ProjectiveFactor};

    fn circle(factors: Vec<ProjectiveFactor>, d: Vec<i64>, c: Vec<i64>, g: usize) -> Scenario {
        Scenario::new(GroupSpec::circle(g), factors, LinearizedBundle::new(d, c)).unwrap()
    }

    fn su2(powers: Vec<u32>, d: i64) -> Scenario {
        Scenario::new(
            GroupSpec::su2(),
            vec![ProjectiveFactor::su2(powers)],
            LinearizedBundle::new(vec![d], vec![]),
        )
        .unwrap()
    }

    #[test]
    fn p2_invariants_grow_linearly() {
        let s = circle(vec![ProjectiveFactor::circle1(&[-1, 1, 1])], vec![1], vec![0], 1);
        for r in 1..=2u64 {
            assert_eq!(section_dimension(&s, 2 * r, &Weight::scalar(0)).unwrap(), 1 + r as u128);
        }
    }

    #[test]
    fn su2_p3_isotypic_dimension() {
        let s = su2(vec![1, 1], 1);
        assert_eq!(section_dimension(&s, 5, &Weight::scalar(3)).unwrap(), 16);
        assert_eq!(multiplicity(&s, 5, &Weight::scalar(3)).unwrap(), 4);
    }

    #[test]
    fn unreachable_weight_is_zero() {
        let s = circle(vec![ProjectiveFactor::circle1(&[1, -1])], vec![1], vec![0], 1);
        assert_eq!(section_dimension(&s, 3, &Weight::scalar(9)).unwrap(), 0);
        assert_eq!(section_dimension(&s, 4, &Weight::scalar(2)).unwrap(), 1);
    }

    #[test]
    fn p1_distribution() {
        let s = circle(vec![ProjectiveFactor::circle1(&[1, -1])], vec![1], vec![0], 1);
        let d = full_weight_distribution(&s, 2).unwrap();
        let expected: BTreeMap<Weight, u128> =
            [(-2, 1), (0, 1), (2, 1)].map(|(w, n)| (Weight::scalar(w), n)).into();
        assert_eq!(d, expected);
    }

    #[test]
    fn su2_p3_distribution_at_two() {
        let d = full_weight_distribution(&su2(vec![1, 1], 1), 2).unwrap();
        let expected: BTreeMap<Weight, u128> =
            [(0, 1), (2, 3)].map(|(w, n)| (Weight::scalar(w), n)).into();
        assert_eq!(d, expected);
    }

    #[test]
    fn level_zero_is_constants() {
        let s = circle(vec![ProjectiveFactor::circle1(&[1, -1])], vec![1], vec![3], 1);
        let d = full_weight_distribution(&s, 0).unwrap();
        assert_eq!(d, [(Weight::scalar(0), 1)].into());
        let d = full_weight_distribution(&su2(vec![1, 1], 1), 0).unwrap();
        assert_eq!(d, [(Weight::scalar(0), 1)].into());
    }

    #[test]
    fn rank_two_square() {
        let s = circle(
            vec![
                ProjectiveFactor::circle(vec![vec![1, 0], vec![-1, 0]]),
                ProjectiveFactor::circle(vec![vec![0, 1], vec![0, -1]]),
            ],
            vec![1, 1],
            vec![0, 0],
            2,
        );
        let d = full_weight_distribution(&s, 1).unwrap();
        assert_eq!(d.len(), 4);
        assert!(d.values().all(|&n| n == 1));
        assert_eq!(section_dimension(&s, 2, &Weight(vec![0, 0])).unwrap(), 1);
        assert_eq!(section_dimension(&s, 2, &Weight(vec![1, 0])).unwrap(), 0);
    }

    #[test]
    fn conservation_on_product() {
        let s = circle(
            vec![ProjectiveFactor::circle1(&[-1, 1, 1]), ProjectiveFactor::circle1(&[1, -1])],
            vec![1, 2],
            vec![1],
            1,
        );
        let table = IsotypicTable::build(&s, 6, Limits::default()).unwrap();
        for k in 0..=6 {
            assert_eq!(table.weighted_total(k), s.total_dimension(k).unwrap());
        }
    }

    #[test]
    fn su2_conservation() {
        let s = su2(vec![3, 1, 0], 2);
        let table = IsotypicTable::build(&s, 5, Limits::default()).unwrap();
        for k in 0..=5 {
            assert_eq!(table.weighted_total(k), s.total_dimension(k).unwrap());
        }
    }

    #[test]
    fn negative_su2_weight_rejected() {
        assert!(section_dimension(&su2(vec![1, 1], 1), 2, &Weight::scalar(-2)).is_err());
    }

    #[test]
    fn weight_guard() {
        let s = circle(vec![ProjectiveFactor::circle1(&[-1000, 1000])], vec![1], vec![0], 1);
        let err = SectionCounter::new(&s, [10], Limits { max_cells: 1000 }).unwrap_err();
        assert!(matches!(err, Error::WeightRangeExceeded { .. }));
    }

    #[test]
    fn unprepared_level() {
        let s = circle(vec![ProjectiveFactor::circle1(&[1, -1])], vec![1], vec![0], 1);
        let c = SectionCounter::new(&s, [2, 4], Limits::default()).unwrap();
        assert_eq!(c.section_dimension(3, &Weight::scalar(1)), Err(Error::LevelNotPrepared(3)));
    }
}
