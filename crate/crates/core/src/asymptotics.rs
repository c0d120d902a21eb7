//! G-semigroups, G-exponents and equivariant volumes.
//!
//! On products of projective spaces `k ↦ dim H⁰(M, L^k)_μ` is eventually a
//! quasi-polynomial in `k`, so the limsup defining the volume is computed
//! exactly: along each residue class `k ≡ f (mod e)` the sequence is split
//! into sub-progressions of step `P = Q·e`, each of which must satisfy a
//! vanishing finite-difference test of order `n - g + 1` past some onset.
//! The normalized leading coefficient of a stabilized sub-progression is
//! `Δ^{n-g} h / P^{n-g}`, and the residue volume is the largest of these.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry;
use crate::model::{Rational, Scenario, Weight};
use crate::multiplicity::{check_weight, Limits, SectionCounter};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FitParams {
    /// Horizon for semigroup sampling.
    pub m_max: u64,
    /// Extra samples beyond `n - g + 1` required in the stabilized window.
    pub window_extra: u64,
    /// Largest refinement factor `Q`; periods go up to `period_cap · e`.
    pub period_cap: u64,
    /// Largest onset (in samples per sub-progression) searched.
    pub onset_max: u64,
    pub limits: Limits,
}

impl Default for FitParams {
    fn default() -> Self {
        FitParams {
            m_max: 60,
            window_extra: 3,
            period_cap: 24,
            onset_max: 32,
            limits: Limits::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentResult {
    /// `{m ∈ [1, m_max] : H⁰(M, L^m)^G ≠ 0}`.
    pub semigroup: BTreeSet<u64>,
    /// `gcd` of the semigroup sample, `None` if the sample is empty.
    pub exponent: Option<u64>,
    pub m_max: u64,
    /// Every multiple of the exponent in `(m_stab, m_max]` is in the sample.
    pub m_stab: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VolumeStatus {
    Exact,
    Zero,
    Infinite,
    NotStabilized,
}

impl VolumeStatus {
    pub fn name(self) -> &'static str {
        match self {
            VolumeStatus::Exact => "exact",
            VolumeStatus::Zero => "zero",
            VolumeStatus::Infinite => "infinite",
            VolumeStatus::NotStabilized => "not_stabilized",
        }
    }
}

impl fmt::Display for VolumeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitData {
    /// Residue class `f` of the levels.
    pub residue: u64,
    /// Exponent `e` used for the residue classes.
    pub exponent: u64,
    /// Detected period `P` (a multiple of `e`).
    pub period: u64,
    /// First level of the stabilized window.
    pub onset: u64,
    /// Polynomial degree of the fitted sub-progression.
    pub degree: u32,
    /// `(k, dim H⁰(M, L^k)_μ)` along the winning sub-progression.
    pub samples: Vec<(u64, u128)>,
    /// Coefficient of `k^{n-g}`.
    pub leading: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeEstimate {
    /// Meaningful for `Exact` and `Zero` only.
    pub value: Rational,
    pub status: VolumeStatus,
    pub fit: Option<FitData>,
}

impl VolumeEstimate {
    pub fn zero() -> Self {
        VolumeEstimate {
            value: Rational::zero(),
            status: VolumeStatus::Zero,
            fit: None,
        }
    }

    pub fn infinite(fit: Option<FitData>) -> Self {
        VolumeEstimate {
            value: Rational::zero(),
            status: VolumeStatus::Infinite,
            fit,
        }
    }

    pub fn not_stabilized() -> Self {
        VolumeEstimate {
            value: Rational::zero(),
            status: VolumeStatus::NotStabilized,
            fit: None,
        }
    }

    pub fn finite(value: Rational, fit: Option<FitData>) -> Self {
        let status = if value.is_zero() {
            VolumeStatus::Zero
        } else {
            VolumeStatus::Exact
        };
        VolumeEstimate { value, status, fit }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.status, VolumeStatus::Exact | VolumeStatus::Zero)
    }

    pub fn is_positive(&self) -> bool {
        self.status == VolumeStatus::Infinite
            || (self.is_finite() && self.value > Rational::zero())
    }

    /// `p/q` rendering of the value, or the status for non-finite estimates.
    pub fn render(&self) -> String {
        match self.status {
            VolumeStatus::Exact | VolumeStatus::Zero => self.value.to_string(),
            VolumeStatus::Infinite => "inf".to_string(),
            VolumeStatus::NotStabilized => "nan".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueVolume {
    pub f: u64,
    pub value: VolumeEstimate,
}

fn semigroup_at(s: &Scenario, mu: &Weight, m_max: u64, limits: Limits) -> Result<BTreeSet<u64>> {
    check_weight(s, mu)?;
    let counter = SectionCounter::new(s, 1..=m_max, limits)?;
    let mut out = BTreeSet::new();
    for m in 1..=m_max {
        if counter.section_dimension(m, mu)? > 0 {
            out.insert(m);
        }
    }
    Ok(out)
}

/// `{m ∈ [1, m_max] : H⁰(M, L^m)^G ≠ 0}`.
pub fn g_semigroup(s: &Scenario, m_max: u64) -> Result<BTreeSet<u64>> {
    semigroup_at(s, &Weight::zero(s.torus_rank()), m_max, Limits::default())
}

/// `{m ∈ [1, m_max] : H⁰(M, L^m)_μ ≠ 0}`.
pub fn mu_semigroup(s: &Scenario, mu: &Weight, m_max: u64) -> Result<BTreeSet<u64>> {
    semigroup_at(s, mu, m_max, Limits::default())
}

pub fn g_exponent(s: &Scenario, m_max: u64) -> Result<ExponentResult> {
    let semigroup = g_semigroup(s, m_max)?;
    Ok(exponent_of(semigroup, m_max))
}

pub(crate) fn exponent_of(semigroup: BTreeSet<u64>, m_max: u64) -> ExponentResult {
    let exponent = semigroup.iter().copied().reduce(|a, b| a.gcd(&b));
    let m_stab = exponent.map(|e| {
        // largest multiple of e that is missing, or 0
        (1..=m_max / e)
            .rev()
            .map(|i| i * e)
            .find(|m| !semigroup.contains(m))
            .unwrap_or(0)
    });
    ExponentResult {
        semigroup,
        exponent,
        m_max,
        m_stab,
    }
}

fn differences(seq: &[BigInt], order: usize) -> Vec<BigInt> {
    let mut cur = seq.to_vec();
    for _ in 0..order {
        cur = cur.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    cur
}

/// Smallest onset `t0 ≤ onset_max` past which `seq` is a polynomial of
/// degree `≤ degree`, with at least `degree + 1 + extra` samples.
fn polynomial_tail(seq: &[BigInt], degree: usize, extra: usize, onset_max: usize) -> Option<usize> {
    let need = degree + 1 + extra;
    (0..=onset_max)
        .take_while(|&t0| seq.len() >= t0 + need)
        .find(|&t0| differences(&seq[t0..], degree + 1).iter().all(Zero::is_zero))
}

enum SubFit {
    Finite { value: Rational, onset: usize, degree: u32 },
    Overshoot { onset: usize, degree: u32 },
}

fn fit_subsequence(seq: &[BigInt], target: u32, top: u32, step: u64, params: &FitParams, onset_max: usize) -> Option<SubFit> {
    let extra = params.window_extra as usize;
    if let Some(t0) = polynomial_tail(seq, target as usize, extra, onset_max) {
        let tail = &seq[t0..];
        let degree = (0..=target)
            .find(|&d| differences(tail, d as usize + 1).iter().all(Zero::is_zero))
            .unwrap_or(target);
        let lead = differences(tail, target as usize)[0].clone();
        let value = Rational::new(lead, BigInt::from(step).pow(target));
        return Some(SubFit::Finite { value, onset: t0, degree });
    }
    for degree in target + 1..=top {
        if let Some(t0) = polynomial_tail(seq, degree as usize, extra, onset_max) {
            let lead = &differences(&seq[t0..], degree as usize)[0];
            if lead.is_positive() {
                return Some(SubFit::Overshoot { onset: t0, degree });
            }
        }
    }
    None
}

/// `υ_μ(L, f)` along `k ≡ f (mod e)` for a given exponent `e`.
pub fn residue_volume_with_exponent(
    s: &Scenario,
    mu: &Weight,
    f: i64,
    e: u64,
    params: &FitParams,
) -> Result<ResidueVolume> {
    fit_residue(s, mu, f, e, params, &CounterCache::default())
}

/// Section counters keyed by their level sets, shared between weights.
#[derive(Debug, Default)]
struct CounterCache(RefCell<BTreeMap<Vec<u64>, Rc<SectionCounter>>>);

impl CounterCache {
    fn get(&self, s: &Scenario, levels: Vec<u64>, limits: Limits) -> Result<Rc<SectionCounter>> {
        if let Some(c) = self.0.borrow().get(&levels) {
            return Ok(Rc::clone(c));
        }
        let counter = Rc::new(SectionCounter::new(s, levels.iter().copied(), limits)?);
        self.0.borrow_mut().insert(levels, Rc::clone(&counter));
        Ok(counter)
    }
}

fn fit_residue(
    s: &Scenario,
    mu: &Weight,
    f: i64,
    e: u64,
    params: &FitParams,
    cache: &CounterCache,
) -> Result<ResidueVolume> {
    check_weight(s, mu)?;
    if e == 0 {
        return Err(Error::Precondition("exponent must be positive".into()));
    }
    let f = f.rem_euclid(e as i64) as u64;
    let target = s.volume_exponent();
    let top = (s.n() as u32).max(target);
    // skip the level k = 0
    let base = if f == 0 { e } else { f };

    let mut onset_max = 4u64.min(params.onset_max);
    loop {
        for q in 1..=params.period_cap {
            let step = q * e;
            let len = onset_max + u64::from(top) + 1 + params.window_extra;
            let levels: Vec<u64> = (0..q * len).map(|i| base + i * e).collect();
            let counter = cache.get(s, levels, params.limits)?;
            let mut best: Option<(Rational, FitData)> = None;
            let mut overshoot: Option<FitData> = None;
            let mut ok = true;
            for j in 0..q {
                let ks: Vec<u64> = (0..len).map(|t| base + (j + t * q) * e).collect();
                let samples: Vec<(u64, u128)> = ks
                    .iter()
                    .map(|&k| counter.section_dimension(k, mu).map(|h| (k, h)))
                    .collect::<Result<_>>()?;
                let seq: Vec<BigInt> = samples.iter().map(|&(_, h)| BigInt::from(h)).collect();
                match fit_subsequence(&seq, target, top, step, params, onset_max as usize) {
                    Some(SubFit::Finite { value, onset, degree }) => {
                        let fit = FitData {
                            residue: f,
                            exponent: e,
                            period: step,
                            onset: ks[onset],
                            degree,
                            leading: &value / factorial(target),
                            samples,
                        };
                        if best.as_ref().is_none_or(|(v, _)| value > *v) {
                            best = Some((value, fit));
                        }
                    }
                    Some(SubFit::Overshoot { onset, degree }) => {
                        overshoot.get_or_insert(FitData {
                            residue: f,
                            exponent: e,
                            period: step,
                            onset: ks[onset],
                            degree,
                            leading: Rational::zero(),
                            samples,
                        });
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let value = match overshoot {
                Some(fit) => VolumeEstimate::infinite(Some(fit)),
                None => {
                    let (v, fit) = best.expect("q >= 1 sub-progressions");
                    VolumeEstimate::finite(v, Some(fit))
                }
            };
            return Ok(ResidueVolume { f, value });
        }
        if onset_max >= params.onset_max {
            return Ok(ResidueVolume {
                f,
                value: VolumeEstimate::not_stabilized(),
            });
        }
        onset_max = (onset_max * 2).min(params.onset_max);
    }
}

/// `υ_μ(L, f)`, with `f` taken modulo `e_G(L)`.
pub fn residue_volume(s: &Scenario, mu: &Weight, f: i64, params: &FitParams) -> Result<ResidueVolume> {
    VolumeSolver::new(s, *params)?.residue_volume(mu, f)
}

/// Residue volumes for every class `f ∈ [0, e)`.
pub fn residue_volumes(s: &Scenario, mu: &Weight, params: &FitParams) -> Result<Vec<ResidueVolume>> {
    VolumeSolver::new(s, *params)?.residue_volumes(mu)
}

/// `vol_μ(L) = max_f υ_μ(L, f)`.
///
/// When no invariant sections are found up to `m_max` and the moment image
/// misses the origin, the vanishing certificate settles the volume as zero.
pub fn equivariant_volume(s: &Scenario, mu: &Weight, params: &FitParams) -> Result<VolumeEstimate> {
    VolumeSolver::new(s, *params)?.volume(mu)
}

/// Volume computations for one scenario and many weights: the G-exponent is
/// computed once and section counters are reused across weights.
#[derive(Debug)]
pub struct VolumeSolver<'a> {
    scenario: &'a Scenario,
    params: FitParams,
    exponent: ExponentResult,
    cache: CounterCache,
}

impl<'a> VolumeSolver<'a> {
    pub fn new(scenario: &'a Scenario, params: FitParams) -> Result<Self> {
        let zero = Weight::zero(scenario.torus_rank());
        let semigroup = semigroup_at(scenario, &zero, params.m_max, params.limits)?;
        Ok(VolumeSolver {
            scenario,
            params,
            exponent: exponent_of(semigroup, params.m_max),
            cache: CounterCache::default(),
        })
    }

    pub fn exponent(&self) -> &ExponentResult {
        &self.exponent
    }

    /// `e_G(L)`, or 1 when the semigroup sample is empty.
    pub fn working_exponent(&self) -> u64 {
        self.exponent.exponent.unwrap_or(1)
    }

    pub fn residue_volume(&self, mu: &Weight, f: i64) -> Result<ResidueVolume> {
        fit_residue(self.scenario, mu, f, self.working_exponent(), &self.params, &self.cache)
    }

    pub fn residue_volumes(&self, mu: &Weight) -> Result<Vec<ResidueVolume>> {
        (0..self.working_exponent() as i64)
            .map(|f| self.residue_volume(mu, f))
            .collect()
    }

    pub fn volume(&self, mu: &Weight) -> Result<VolumeEstimate> {
        check_weight(self.scenario, mu)?;
        if self.exponent.exponent.is_none() {
            let certificate = match geometry::vanishing_certificate(self.scenario, mu) {
                Err(Error::Unsupported(_)) => None,
                other => other?,
            };
            if certificate.is_some() {
                return Ok(VolumeEstimate::zero());
            }
        }
        Ok(max_of_residues(self.residue_volumes(mu)?))
    }
}

pub(crate) fn max_of_residues(residues: Vec<ResidueVolume>) -> VolumeEstimate {
    let mut best: Option<VolumeEstimate> = None;
    for r in residues {
        match r.value.status {
            VolumeStatus::NotStabilized => return VolumeEstimate::not_stabilized(),
            VolumeStatus::Infinite => best = Some(r.value),
            _ => {
                let replace = match &best {
                    None => true,
                    Some(b) => b.is_finite() && r.value.value > b.value,
                };
                if replace {
                    best = Some(r.value);
                }
            }
        }
    }
    best.unwrap_or_else(VolumeEstimate::zero)
}

/// `vol_μ(L^q) = (q / a)^{n-g} · vol_μ(L^a)` with `a = gcd(q, e_G(L))`.
pub fn homogeneity_transform(
    vol: &VolumeEstimate,
    from: u64,
    to: u64,
    exponent: u64,
    quotient_exponent: u32,
) -> Result<VolumeEstimate> {
    if from == 0 || to == 0 || exponent == 0 {
        return Err(Error::Precondition("powers and exponent must be positive".into()));
    }
    if from != to.gcd(&exponent) {
        return Err(Error::Precondition(format!(
            "expected a = gcd({to}, {exponent}) = {}, got {from}",
            to.gcd(&exponent)
        )));
    }
    if !vol.is_finite() {
        return Ok(VolumeEstimate {
            value: vol.value.clone(),
            status: vol.status,
            fit: None,
        });
    }
    let scale = Rational::from_integer(BigInt::from(to / from).pow(quotient_exponent));
    Ok(VolumeEstimate::finite(&vol.value * scale, None))
}

pub(crate) fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    Rational::from_integer(acc)
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

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn semigroups() {
        let s = circle1(&[1, -1], 1, 0);
        assert_eq!(g_semigroup(&s, 8).unwrap(), [2, 4, 6, 8].into());
        let s2 = circle1(&[1, -1], 2, 0);
        assert_eq!(g_semigroup(&s2, 5).unwrap(), (1..=5).collect());
        assert!(g_semigroup(&circle1(&[1, 2], 1, 0), 10).unwrap().is_empty());

        let odd = mu_semigroup(&s, &Weight::scalar(1), 9).unwrap();
        assert_eq!(odd, [1, 3, 5, 7, 9].into());
        assert!(mu_semigroup(&s2, &Weight::scalar(1), 12).unwrap().is_empty());
        assert_eq!(mu_semigroup(&s, &Weight::scalar(0), 12).unwrap(), g_semigroup(&s, 12).unwrap());
    }

    #[test]
    fn exponents() {
        let r = g_exponent(&circle1(&[1, -1], 1, 0), 60).unwrap();
        assert_eq!(r.exponent, Some(2));
        assert_eq!(r.m_stab, Some(0));
        assert_eq!(g_exponent(&circle1(&[1, -1], 2, 0), 60).unwrap().exponent, Some(1));
        let empty = g_exponent(&circle1(&[1, 2], 1, 0), 20).unwrap();
        assert_eq!(empty.exponent, None);
    }

    #[test]
    fn p2_residue_volumes() {
        let s = circle1(&[-1, 1, 1], 1, 0);
        let p = FitParams::default();
        let r = residue_volume(&s, &Weight::scalar(0), 0, &p).unwrap();
        assert_eq!(r.value.value, rat(1, 2));
        assert_eq!(r.value.status, VolumeStatus::Exact);
        let r = residue_volume(&s, &Weight::scalar(0), 1, &p).unwrap();
        assert_eq!(r.value.status, VolumeStatus::Zero);
    }

    #[test]
    fn p1_odd_residue_is_zero() {
        let s = circle1(&[1, -1], 1, 0);
        let r = residue_volume(&s, &Weight::scalar(0), 1, &FitParams::default()).unwrap();
        assert_eq!(r.value.status, VolumeStatus::Zero);
        // f is read modulo e
        let r3 = residue_volume(&s, &Weight::scalar(0), 3, &FitParams::default()).unwrap();
        assert_eq!(r3.f, 1);
    }

    #[test]
    fn unstable_residues_vanish() {
        let s = circle1(&[1, 2], 1, 0);
        for mu in [0, 3, 5] {
            let r = residue_volume(&s, &Weight::scalar(mu), 0, &FitParams::default()).unwrap();
            assert_eq!(r.value.status, VolumeStatus::Zero, "mu = {mu}");
        }
    }

    #[test]
    fn trivial_action_is_infinite() {
        let s = circle1(&[0, 0, 0], 1, 0);
        let v = equivariant_volume(&s, &Weight::scalar(0), &FitParams::default()).unwrap();
        assert_eq!(v.status, VolumeStatus::Infinite);
        let v = equivariant_volume(&s, &Weight::scalar(1), &FitParams::default()).unwrap();
        assert_eq!(v.status, VolumeStatus::Zero);
    }

    #[test]
    fn transform() {
        let half = VolumeEstimate::finite(rat(1, 2), None);
        let v = homogeneity_transform(&half, 1, 3, 2, 1).unwrap();
        assert_eq!(v.value, rat(3, 2));
        let v = homogeneity_transform(&half, 2, 2, 2, 1).unwrap();
        assert_eq!(v.value, rat(1, 2));
        let v = homogeneity_transform(&half, 1, 4, 1, 2).unwrap();
        assert_eq!(v.value, rat(8, 1));
        assert!(homogeneity_transform(&half, 1, 4, 2, 1).is_err());
    }

    #[test]
    fn difference_tail() {
        let seq: Vec<BigInt> = [7, 0, 0, 1, 2, 3, 4, 5, 6].map(BigInt::from).to_vec();
        assert_eq!(polynomial_tail(&seq, 1, 2, 8), Some(2));
        assert_eq!(polynomial_tail(&seq, 0, 2, 8), None);
    }
}
