//! Verification suites tying counted section dimensions to the structural
//! predictions (homogeneity, exponent law, compatibility, vanishing,
//! monotonicity, translation, continuity) and to the brute-force oracle.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use equivol_core::asymptotics::{
    equivariant_volume, g_exponent, homogeneity_transform, FitParams, VolumeEstimate, VolumeSolver,
    VolumeStatus,
};
use equivol_core::geometry::{
    classify_stability, dh_slice_volume, moment_image, numerically_compatible, predicted_volume,
    vanishing_certificate, StabilityClass,
};
use equivol_core::multiplicity::SectionCounter;
use equivol_core::oracle::brute_force_oracle;
use equivol_core::{
    GroupSpec, LinearizedBundle, ProjectiveFactor, Rational, Scenario, Weight,
};

use crate::document::NamedScenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Oracle,
    Homogeneity,
    #[value(name = "exponent_law")]
    ExponentLaw,
    Compatibility,
    Vanishing,
    Monotonicity,
    Translation,
    Continuity,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Oracle,
        Suite::Homogeneity,
        Suite::ExponentLaw,
        Suite::Compatibility,
        Suite::Vanishing,
        Suite::Monotonicity,
        Suite::Translation,
        Suite::Continuity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Homogeneity => "homogeneity",
            Suite::ExponentLaw => "exponent_law",
            Suite::Compatibility => "compatibility",
            Suite::Vanishing => "vanishing",
            Suite::Monotonicity => "monotonicity",
            Suite::Translation => "translation",
            Suite::Continuity => "continuity",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub params: FitParams,
    /// Range of μ (per coordinate for rank one; SU(2) uses its nonnegative part).
    pub mu_range: (i64, i64),
    /// Per-coordinate μ range for rank-two tori.
    pub mu_range_rank2: (i64, i64),
    /// Levels compared against the oracle.
    pub oracle_k_max: u64,
    /// Largest tensor power in the exponent-law suite.
    pub p_max: u64,
    /// Largest level for the vanishing checks.
    pub vanishing_k_max: u64,
    pub vanishing_mu_range: (i64, i64),
    /// Largest twisted power `q` in the homogeneity suite.
    pub q_max: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            params: FitParams::default(),
            mu_range: (-4, 4),
            mu_range_rank2: (-2, 2),
            oracle_k_max: 8,
            p_max: 12,
            vanishing_k_max: 40,
            vanishing_mu_range: (-6, 6),
            q_max: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub scenario: String,
    pub claim: String,
    pub lhs: String,
    pub rhs: String,
    pub passed: bool,
    pub witness: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridPoint {
    pub degree: i64,
    pub twist: i64,
    pub vol0: String,
}

/// Fitted Lipschitz-type constant for vol₀ on a grid of bundles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuityFit {
    pub family: String,
    pub norm: String,
    pub exponent: u32,
    pub constant: String,
    #[serde(skip)]
    pub constant_value: Rational,
    pub grid: Vec<GridPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub scenarios: Vec<String>,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub continuity: Option<ContinuityFit>,
}

impl SuiteReport {
    fn new(suite: Suite, scenarios: Vec<String>, checks: Vec<CheckRecord>) -> SuiteReport {
        let passed = checks.iter().filter(|c| c.passed).count();
        SuiteReport {
            suite,
            scenarios,
            summary: Summary {
                checks: checks.len(),
                passed,
                failed: checks.len() - passed,
            },
            checks,
            continuity: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Recorder<'a> {
    scenario: &'a str,
    checks: Vec<CheckRecord>,
}

impl<'a> Recorder<'a> {
    fn new(scenario: &'a str) -> Self {
        Recorder {
            scenario,
            checks: Vec::new(),
        }
    }

    fn record(&mut self, claim: String, lhs: String, rhs: String, passed: bool, witness: &[(&str, String)]) {
        self.checks.push(CheckRecord {
            scenario: self.scenario.to_string(),
            claim,
            lhs,
            rhs,
            passed,
            witness: witness.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        });
    }

    fn error(&mut self, claim: String, err: impl fmt::Display) {
        self.record(claim, format!("error: {err}"), String::new(), false, &[]);
    }
}

/// The μ values exercised for a scenario.
pub fn mu_values(s: &Scenario, range: (i64, i64), range2: (i64, i64)) -> Vec<Weight> {
    if s.is_su2() {
        (range.0.max(0)..=range.1).map(Weight::scalar).collect()
    } else if s.torus_rank() == 1 {
        (range.0..=range.1).map(Weight::scalar).collect()
    } else {
        let r = range2.0..=range2.1;
        r.clone()
            .flat_map(|a| r.clone().map(move |b| Weight(vec![a, b])))
            .collect()
    }
}

fn describe(v: &VolumeEstimate) -> String {
    match v.status {
        VolumeStatus::Exact | VolumeStatus::Zero => v.value.to_string(),
        other => other.name().to_string(),
    }
}

fn render_set(set: &BTreeSet<u64>) -> String {
    let parts: Vec<String> = set.iter().map(u64::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn render_distribution(d: &BTreeMap<Weight, u128>) -> String {
    let parts: Vec<String> = d.iter().map(|(mu, n)| format!("{mu}:{n}")).collect();
    format!("{{{}}}", parts.join(" "))
}

/// `(semigroup sample, exponent, m_stab)` of `L` up to `m_max`.
fn exponent_data(s: &Scenario, m_max: u64) -> equivol_core::Result<(BTreeSet<u64>, Option<u64>, Option<u64>)> {
    let r = g_exponent(s, m_max)?;
    Ok((r.semigroup, r.exponent, r.m_stab))
}

pub fn run_suite(suite: Suite, set: &[NamedScenario], cfg: &SuiteConfig) -> SuiteReport {
    let names: Vec<String> = set.iter().map(|s| s.name.clone()).collect();
    if suite == Suite::Continuity {
        return continuity(cfg);
    }
    let mut checks = Vec::new();
    for ns in set {
        let mut rec = Recorder::new(&ns.name);
        let s = &ns.scenario;
        match suite {
            Suite::Oracle => oracle(&mut rec, s, cfg),
            Suite::Homogeneity => homogeneity(&mut rec, s, cfg),
            Suite::ExponentLaw => exponent_law(&mut rec, s, cfg),
            Suite::Compatibility => compatibility(&mut rec, s, cfg),
            Suite::Vanishing => vanishing(&mut rec, s, cfg),
            Suite::Monotonicity => monotonicity(&mut rec, s, cfg),
            Suite::Translation => translation(&mut rec, s, cfg),
            Suite::Continuity => unreachable!(),
        }
        checks.extend(rec.checks);
    }
    SuiteReport::new(suite, names, checks)
}

fn oracle(rec: &mut Recorder, s: &Scenario, cfg: &SuiteConfig) {
    let counter = match SectionCounter::new(s, 0..=cfg.oracle_k_max, cfg.params.limits) {
        Ok(c) => c,
        Err(e) => return rec.error("full_weight_distribution = brute_force_oracle".into(), e),
    };
    for k in 0..=cfg.oracle_k_max {
        let claim = format!("full_weight_distribution(k={k}) = brute_force_oracle(k={k})");
        let (engine, brute) = match (counter.distribution(k), brute_force_oracle(s, k)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                rec.error(claim, e);
                continue;
            }
        };
        let first_diff = engine
            .keys()
            .chain(brute.keys())
            .find(|mu| engine.get(*mu) != brute.get(*mu))
            .map(|mu| mu.to_string());
        let mut witness = vec![("k", k.to_string()), ("weights", engine.len().to_string())];
        if let Some(mu) = first_diff {
            witness.push(("first_difference", mu));
        }
        rec.record(
            claim,
            render_distribution(&engine),
            render_distribution(&brute),
            engine == brute,
            &witness,
        );
    }
}

/// Fit parameters for `L^q`: the semigroup of `L^q` up to `m` is that of `L`
/// up to `q·m`, so the horizon shrinks accordingly.
fn power_params(params: &FitParams, q: u64) -> FitParams {
    FitParams {
        m_max: params.m_max.div_ceil(q).max(12),
        ..*params
    }
}

fn homogeneity(rec: &mut Recorder, s: &Scenario, cfg: &SuiteConfig) {
    let p = &cfg.params;
    let solver = match VolumeSolver::new(s, *p) {
        Ok(x) => x,
        Err(err) => return rec.error("G-exponent".into(), err),
    };
    let Some(e) = solver.exponent().exponent else {
        return;
    };
    let dim = s.volume_exponent();
    let zero = Weight::zero(s.torus_rank());
    let vol0 = match solver.volume(&zero) {
        Ok(v) => v,
        Err(err) => return rec.error("vol_0(L)".into(), err),
    };
    if vol0.status == VolumeStatus::Infinite {
        return;
    }
    let mut base: BTreeMap<u64, VolumeEstimate> = BTreeMap::new();
    for q in 1..=cfg.q_max {
        let a = q.gcd(&e);
        let claim = format!("vol_0(L^{q}) = ({q}/{a})^{dim} vol_0(L^{a})");
        let result = (|| -> equivol_core::Result<(VolumeEstimate, VolumeEstimate)> {
            let base_a = match base.entry(a) {
                Entry::Occupied(o) => o.into_mut(),
                Entry::Vacant(v) => v.insert(equivariant_volume(&s.power(a)?, &zero, &power_params(p, a))?),
            };
            let rhs = homogeneity_transform(base_a, a, q, e, dim)?;
            let lhs = equivariant_volume(&s.power(q)?, &zero, &power_params(p, q))?;
            Ok((lhs, rhs))
        })();
        match result {
            Ok((lhs, rhs)) => {
                let passed = lhs.is_finite() && rhs.is_finite() && lhs.value == rhs.value;
                rec.record(
                    claim,
                    describe(&lhs),
                    describe(&rhs),
                    passed,
                    &[("q", q.to_string()), ("a", a.to_string()), ("e", e.to_string())],
                );
            }
            Err(err) => rec.error(claim, err),
        }
    }
    for prime_to_e in [3u64, 5] {
        if prime_to_e.gcd(&e) != 1 {
            continue;
        }
        let powered = match s.power(prime_to_e) {
            Ok(x) => x,
            Err(err) => return rec.error(format!("L^{prime_to_e}"), err),
        };
        let powered_solver = match VolumeSolver::new(&powered, power_params(p, prime_to_e)) {
            Ok(x) => x,
            Err(err) => return rec.error(format!("L^{prime_to_e}"), err),
        };
        for mu in mu_values(s, cfg.mu_range, cfg.mu_range_rank2) {
            let claim = format!("vol_{mu}(L^{prime_to_e}) = {prime_to_e}^{dim} vol_{mu}(L)");
            let result = (|| -> equivol_core::Result<(VolumeEstimate, VolumeEstimate)> {
                let lhs = powered_solver.volume(&mu)?;
                let one = solver.volume(&mu)?;
                let rhs = homogeneity_transform(&one, 1, prime_to_e, e, dim)?;
                Ok((lhs, rhs))
            })();
            match result {
                Ok((lhs, rhs)) => {
                    let passed = lhs.is_finite() && rhs.is_finite() && lhs.value == rhs.value;
                    rec.record(
                        claim,
                        describe(&lhs),
                        describe(&rhs),
                        passed,
                        &[("p", prime_to_e.to_string()), ("mu", mu.to_string()), ("e", e.to_string())],
                    );
                }
                Err(err) => rec.error(claim, err),
            }
        }
    }
}

fn exponent_law(rec: &mut Recorder, s: &Scenario, cfg: &SuiteConfig) {
    let m_max = cfg.params.m_max;
    let (e, m_stab) = match exponent_data(s, m_max) {
        Ok((_, Some(e), m_stab)) => (e, m_stab.unwrap_or(0)),
        Ok(_) => return,
        Err(err) => return rec.error("G-exponent".into(), err),
    };
    for p in 1..=cfg.p_max {
        let expected = e / p.gcd(&e);
        // two consecutive multiples of the expected exponent past the stable range
        let horizon = m_stab.div_ceil(p) + 2 * expected + 2;
        let claim = format!("e_G(L^{p}) = e_G(L)/gcd({p}, e_G(L))");
        match s.power(p).and_then(|sp| exponent_data(&sp, horizon)) {
            Ok((semigroup, got, _)) => {
                let lhs = got.map_or("undetermined".to_string(), |x| x.to_string());
                rec.record(
                    claim,
                    lhs,
                    expected.to_string(),
                    got == Some(expected),
                    &[
                        ("p", p.to_string()),
                        ("e", e.to_string()),
                        ("m_max", horizon.to_string()),
                        ("semigroup", render_set(&semigroup)),
                    ],
                );
            }
            Err(err) => rec.error(claim, err),
        }
    }
}

fn is_regular(s: &Scenario) -> bool {
    classify_stability(s).is_ok_and(|r| r.class == StabilityClass::Regular)
}

fn compatibility(rec: &mut Recorder, s: &Scenario, cfg: &SuiteConfig) {
    if !is_regular(s) {
        return;
    }
    let zero = Weight::zero(s.torus_rank());
    let solver = match VolumeSolver::new(s, cfg.params) {
        Ok(x) => x,
        Err(err) => return rec.error("G-exponent".into(), err),
    };
    let vol0 = match solver.volume(&zero) {
        Ok(v) => v,
        Err(err) => return rec.error("vol_0(L)".into(), err),
    };
    for mu in mu_values(s, cfg.mu_range, cfg.mu_range_rank2) {
        let claim = format!("vol_{mu}(L) > 0 iff compatible, and vol_{mu}(L) = dim(V_mu)^2 vol_0(L)");
        let result = (|| -> equivol_core::Result<_> {
            let counted = solver.volume(&mu)?;
            let cert = numerically_compatible(s, &mu)?;
            let predicted = predicted_volume(s, &mu, &vol0)?;
            Ok((counted, cert, predicted))
        })();
        match result {
            Ok((counted, cert, predicted)) => {
                let positive = counted.is_finite() && counted.is_positive();
                let passed = counted.is_finite()
                    && positive == cert.compatible()
                    && counted.value == predicted.value;
                let order = cert.stabilizer.order.unwrap_or(0);
                rec.record(
                    claim,
                    describe(&counted),
                    describe(&predicted),
                    passed,
                    &[
                        ("mu", mu.to_string()),
                        ("witness_r", cert.witness.map_or("none".into(), |r| r.to_string())),
                        ("chi", format!("{:?}", cert.chi)),
                        ("mu_K", format!("{:?}", cert.mu_k)),
                        ("K_order", order.to_string()),
                        ("vol_0", describe(&vol0)),
                    ],
                );
            }
            Err(err) => rec.error(claim, err),
        }
    }
}

fn vanishing(rec: &mut Recorder, s: &Scenario, cfg: &SuiteConfig) {
    let image = match moment_image(s) {
        Ok(i) => i,
        Err(err) => return rec.error("moment image".into(), err),
    };
    let k_max = cfg.vanishing_k_max;
    let counter = match SectionCounter::new(s, 0..=k_max, cfg.params.limits) {
        Ok(c) => c,
        Err(err) => return rec.error("section counts".into(), err),
    };
    let mut outside = Vec::new();
    let mut counted = 0usize;
    for k in 0..=k_max {
        match counter.distribution(k) {
            Ok(d) => {
                for mu in d.keys() {
                    counted += 1;
                    if !image.contains(mu, k) {
                        outside.push(format!("k={k} mu={mu}"));
                    }
                }
            }
            Err(err) => return rec.error("section counts".into(), err),
        }
    }
    rec.record(
        format!("every weight with N^(k)(mu) > 0, k <= {k_max}, lies in k * moment image"),
        outside.len().to_string(),
        "0".into(),
        outside.is_empty(),
        &[
            ("image", image.to_string()),
            ("weights_checked", counted.to_string()),
            ("first_outside", outside.first().cloned().unwrap_or_default()),
        ],
    );

    let unstable = classify_stability(s).is_ok_and(|r| r.class == StabilityClass::UnstableEverywhere);
    if !unstable {
        return;
    }
    for mu in mu_values(s, cfg.vanishing_mu_range, cfg.mu_range_rank2) {
        let claim = format!("dim H^0(L^k)_{mu} = 0 for r_mu <= k <= {k_max}");
        let r = match vanishing_certificate(s, &mu) {
            Ok(Some(r)) => r,
            Ok(None) => {
                rec.record(claim, "no certificate".into(), "certificate".into(), false, &[]);
                continue;
            }
            Err(err) => {
                rec.error(claim, err);
                continue;
            }
        };
        let nonzero: Vec<u64> = (r..=k_max)
            .filter(|&k| counter.section_dimension(k, &mu).map_or(true, |h| h > 0))
            .collect();
        rec.record(
            claim,
            format!("{} nonzero levels", nonzero.len()),
            "0 nonzero levels".into(),
            nonzero.is_empty(),
            &[("mu", mu.to_string()), ("r_mu", r.to_string())],
        );
    }
}

/// G-effective bundles `A` (carrying a nonzero invariant section at level 1).
fn effective_candidates(s: &Scenario, m_max: u64) -> Vec<(String, LinearizedBundle)> {
    let mut out = Vec::new();
    if let Ok((semigroup, _, _)) = exponent_data(s, m_max) {
        if let Some(&m0) = semigroup.iter().next() {
            if let Ok(b) = s.bundle.tensor_power(m0) {
                out.push((format!("L^{m0}"), b));
            }
        }
    }
    if !s.is_su2() {
        // the product of the first coordinates has weight Σ_j w_{j,0} + c
        let mut twist = vec![0i64; s.g()];
        for f in &s.factors {
            for (t, w) in twist.iter_mut().zip(&f.torus_weights()[0]) {
                *t -= w;
            }
        }
        let ones = vec![1i64; s.factors.len()];
        out.push((format!("O(1,..,1) twisted by {twist:?}"), LinearizedBundle::new(ones, twist)));
    }
    out
}

fn monotonicity(rec: &mut Recorder, s: &Scenario, cfg: &SuiteConfig) {
    let p = &cfg.params;
    let solver = match VolumeSolver::new(s, *p) {
        Ok(x) => x,
        Err(err) => return rec.error("G-exponent".into(), err),
    };
    for (label, a) in effective_candidates(s, p.m_max) {
        let combined = match s.with_bundle(s.bundle.tensor(&a)) {
            Ok(x) => x,
            Err(err) => {
                rec.error(format!("H (x) A with A = {label}"), err);
                continue;
            }
        };
        let growth = combined
            .bundle
            .degrees
            .iter()
            .zip(&s.bundle.degrees)
            .filter(|(_, y)| **y > 0)
            .map(|(x, y)| Integer::div_ceil(x, y).max(1) as u64)
            .max()
            .unwrap_or(1);
        let combined_solver = match VolumeSolver::new(&combined, power_params(p, growth)) {
            Ok(x) => x,
            Err(err) => {
                rec.error(format!("H (x) A with A = {label}"), err);
                continue;
            }
        };
        for mu in mu_values(s, cfg.mu_range, cfg.mu_range_rank2) {
            let claim = format!("vol_{mu}(L) <= vol_{mu}(L (x) A), A = {label}");
            let result = solver
                .volume(&mu)
                .and_then(|h| combined_solver.volume(&mu).map(|ha| (h, ha)));
            match result {
                Ok((h, ha)) => {
                    let passed = match (h.status, ha.status) {
                        (VolumeStatus::NotStabilized, _) | (_, VolumeStatus::NotStabilized) => false,
                        (_, VolumeStatus::Infinite) => true,
                        (VolumeStatus::Infinite, _) => false,
                        _ => h.value <= ha.value,
                    };
                    rec.record(claim, describe(&h), describe(&ha), passed, &[("mu", mu.to_string()), ("A", label.clone())]);
                }
                Err(err) => rec.error(claim, err),
            }
        }
    }
}

fn translation(rec: &mut Recorder, s: &Scenario, cfg: &SuiteConfig) {
    if !is_regular(s) {
        return;
    }
    let m_max = cfg.params.m_max;
    let (g_semigroup, m_stab) = match exponent_data(s, m_max) {
        Ok((sg, Some(_), m_stab)) => (sg, m_stab.unwrap_or(0)),
        Ok(_) => return,
        Err(err) => return rec.error("G-exponent".into(), err),
    };
    let counter = match SectionCounter::new(s, 1..=m_max, cfg.params.limits) {
        Ok(c) => c,
        Err(err) => return rec.error("section counts".into(), err),
    };
    for mu in mu_values(s, cfg.mu_range, cfg.mu_range_rank2) {
        let cert = match numerically_compatible(s, &mu) {
            Ok(c) => c,
            Err(err) => {
                rec.error(format!("compatibility of {mu}"), err);
                continue;
            }
        };
        let Some(r) = cert.witness else { continue };
        let lo = (m_max / 2).max(m_stab + r);
        let claim = format!("N_{mu}(L) = {r} + N_G(L) on ({lo}, {m_max}]");
        let mut lhs = BTreeSet::new();
        for k in lo + 1..=m_max {
            match counter.section_dimension(k, &mu) {
                Ok(h) if h > 0 => {
                    lhs.insert(k);
                }
                Ok(_) => {}
                Err(err) => return rec.error(claim, err),
            }
        }
        let rhs: BTreeSet<u64> = std::iter::once(&0)
            .chain(&g_semigroup)
            .map(|m| m + r)
            .filter(|k| (lo + 1..=m_max).contains(k))
            .collect();
        let passed = lhs == rhs;
        rec.record(
            claim,
            render_set(&lhs),
            render_set(&rhs),
            passed,
            &[
                ("mu", mu.to_string()),
                ("r", r.to_string()),
                ("m_stab", m_stab.to_string()),
                ("m_max", m_max.to_string()),
            ],
        );
    }
}

/// The regular members of the family `O_{P²}(d)` twisted by `c`, weights
/// `(-1, 1, 1)`, for `d ∈ [1, 6]`, `c ∈ [-3, 3]`.
pub fn p2_family() -> Vec<(i64, i64, Scenario)> {
    let mut out = Vec::new();
    for d in 1..=6 {
        for c in -3..=3 {
            let s = Scenario::new(
                GroupSpec::circle(1),
                vec![ProjectiveFactor::circle1(&[-1, 1, 1])],
                LinearizedBundle::new(vec![d], vec![c]),
            )
            .expect("family members are valid");
            if is_regular(&s) {
                out.push((d, c, s));
            }
        }
    }
    out
}

fn continuity(cfg: &SuiteConfig) -> SuiteReport {
    let family = "P^2 weights (-1,1,1), O(d) twisted by c, d in [1,6], c in [-3,3], regular only";
    let mut rec = Recorder::new("p2_family");
    let zero = Weight::scalar(0);
    let mut points: Vec<(i64, i64, Rational)> = Vec::new();
    let mut exponent = 0;
    for (d, c, s) in p2_family() {
        exponent = s.volume_exponent();
        let claim = format!("vol_0(d={d}, c={c}) = slice volume");
        match (equivariant_volume(&s, &zero, &cfg.params), dh_slice_volume(&s)) {
            (Ok(v), Ok(slice)) => {
                let passed = v.status == VolumeStatus::Exact && v.value == slice;
                rec.record(claim, describe(&v), slice.to_string(), passed, &[("d", d.to_string()), ("c", c.to_string())]);
                if v.is_finite() {
                    points.push((d, c, v.value));
                }
            }
            (Err(err), _) | (_, Err(err)) => rec.error(claim, err),
        }
    }

    let norm = |d: i64, c: i64| d.abs().max(c.abs());
    let mut constant = Rational::from_integer(0.into());
    let mut worst = String::new();
    for (i, (d1, c1, v1)) in points.iter().enumerate() {
        for (d2, c2, v2) in &points[i + 1..] {
            let dist = norm(d1 - d2, c1 - c2);
            let scale = norm(*d1, *c1).max(norm(*d2, *c2));
            let denom = Rational::from_integer((dist * scale.pow(exponent.saturating_sub(1))).into());
            let diff = if v1 > v2 { v1 - v2 } else { v2 - v1 };
            let ratio = diff / denom;
            if ratio > constant {
                constant = ratio;
                worst = format!("({d1},{c1}) vs ({d2},{c2})");
            }
        }
    }
    // every pair satisfies the bound with the fitted constant
    let violations = points
        .iter()
        .enumerate()
        .flat_map(|(i, a)| points[i + 1..].iter().map(move |b| (a, b)))
        .filter(|((d1, c1, v1), (d2, c2, v2))| {
            let dist = norm(d1 - d2, c1 - c2);
            let scale = norm(*d1, *c1).max(norm(*d2, *c2));
            let bound = &constant * Rational::from_integer((dist * scale.pow(exponent.saturating_sub(1))).into());
            (if v1 > v2 { v1 - v2 } else { v2 - v1 }) > bound
        })
        .count();
    let all_exact = rec.checks.iter().all(|c| c.passed);
    rec.record(
        "|vol_0(D) - vol_0(D')| <= C max(|D|,|D'|)^(n-g-1) |D - D'| over the grid".into(),
        format!("C = {constant}"),
        "finite C".into(),
        all_exact && violations == 0 && !points.is_empty(),
        &[
            ("pairs", (points.len() * points.len().saturating_sub(1) / 2).to_string()),
            ("extremal_pair", worst),
            ("violations", violations.to_string()),
        ],
    );
    let grid = points
        .iter()
        .map(|(d, c, v)| GridPoint {
            degree: *d,
            twist: *c,
            vol0: v.to_string(),
        })
        .collect();
    let mut report = SuiteReport::new(Suite::Continuity, vec!["p2_family".into()], rec.checks);
    report.continuity = Some(ContinuityFit {
        family: family.into(),
        norm: "max(|d|, |c|)".into(),
        exponent,
        constant: constant.to_string(),
        constant_value: constant,
        grid,
    });
    report
}
