//! Implementations of the `equivol` subcommands, returning tables and
//! reports rather than printing.

use std::fmt::Write as _;

use num_integer::Integer;
use serde::Serialize;

use equivol_core::asymptotics::{g_exponent, FitParams, VolumeSolver, VolumeStatus};
use equivol_core::geometry::{
    classify_stability, generic_stabilizer, numerically_compatible, predicted_volume,
    vanishing_certificate, StabilityClass,
};
use equivol_core::multiplicity::{irrep_dimension, IsotypicTable, SectionCounter};
use equivol_core::{Scenario, Weight};

use crate::error::{CliError, Result};
use crate::table::Table;

/// Parses `3` or `1,-1` as a weight of the given rank.
pub fn parse_weight(text: &str, rank: usize) -> Result<Weight> {
    let parts: std::result::Result<Vec<i64>, _> = text
        .trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect();
    let parts = parts.map_err(|e| CliError::Usage(format!("bad weight {text:?}: {e}")))?;
    if parts.len() != rank {
        return Err(CliError::Usage(format!(
            "weight {text:?} has {} coordinates, the torus has rank {rank}",
            parts.len()
        )));
    }
    Ok(Weight(parts))
}

/// Parses `a..b` (inclusive).
pub fn parse_range(text: &str) -> Result<(i64, i64)> {
    let bad = || CliError::Usage(format!("bad range {text:?}, expected a..b"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// All weights with every coordinate in `range`; SU(2) keeps `μ ≥ 0`.
pub fn weights_in_range(s: &Scenario, range: (i64, i64)) -> Vec<Weight> {
    let lo = if s.is_su2() { range.0.max(0) } else { range.0 };
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..s.torus_rank() {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=range.1).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(Weight).collect()
}

/// Rows `k,mu,dim,multiplicity`: the isotypic dimension and `N^(k)(μ)`.
pub fn multiplicity_table(s: &Scenario, k: u64, mu: Option<&Weight>) -> Result<Table> {
    let counter = SectionCounter::new(s, [k], Default::default())?;
    let mut t = Table::new(&["k", "mu", "dim", "multiplicity"]);
    let mut push = |mu: &Weight, n: u128| {
        t.push(vec![
            k.to_string(),
            mu.to_string(),
            (n * irrep_dimension(s, mu)).to_string(),
            n.to_string(),
        ]);
    };
    match mu {
        Some(mu) => push(mu, counter.multiplicity(k, mu)?),
        None => {
            for (mu, n) in counter.distribution(k)? {
                push(&mu, n);
            }
        }
    }
    Ok(t)
}

/// Rows `k,mu,multiplicity,dim` for every `k ≤ k_max`.
pub fn full_table(s: &Scenario, k_max: u64) -> Result<Table> {
    let table = IsotypicTable::build(s, k_max, Default::default())?;
    let mut t = Table::new(&["k", "mu", "multiplicity", "dim"]);
    for ((k, mu), n) in &table.entries {
        t.push(vec![
            k.to_string(),
            mu.to_string(),
            n.to_string(),
            (n * irrep_dimension(s, mu)).to_string(),
        ]);
    }
    Ok(t)
}

/// Rows `mu,value,status,residue,period`; the flag is set when some
/// estimate did not stabilize.
pub fn volume_table(s: &Scenario, mus: &[Weight], params: &FitParams) -> Result<(Table, bool)> {
    let mut t = Table::new(&["mu", "value", "status", "residue", "period"]);
    let mut unstable_fit = false;
    let solver = VolumeSolver::new(s, *params)?;
    for mu in mus {
        let v = solver.volume(mu)?;
        unstable_fit |= v.status == VolumeStatus::NotStabilized;
        let (residue, period) = v
            .fit
            .as_ref()
            .map_or((String::new(), String::new()), |f| (f.residue.to_string(), f.period.to_string()));
        t.push(vec![mu.to_string(), v.render(), v.status.to_string(), residue, period]);
    }
    Ok((t, unstable_fit))
}

/// Rows `p,exponent,expected,m_stab,semigroup` for `L^p`, `p ≤ p_max`.
pub fn exponent_table(s: &Scenario, m_max: u64, p_max: u64) -> Result<(Table, bool)> {
    let base = g_exponent(s, m_max)?;
    let mut t = Table::new(&["p", "exponent", "expected", "m_stab", "semigroup"]);
    let mut ok = true;
    for p in 1..=p_max {
        let r = if p == 1 {
            base.clone()
        } else {
            g_exponent(&s.power(p)?, m_max)?
        };
        let expected = base.exponent.map(|e| e / p.gcd(&e));
        if p > 1 && expected.is_some() && expected != r.exponent {
            ok = false;
        }
        let render = |x: Option<u64>| x.map_or("undetermined".to_string(), |v| v.to_string());
        let semigroup: Vec<String> = r.semigroup.iter().map(u64::to_string).collect();
        t.push(vec![
            p.to_string(),
            render(r.exponent),
            render(expected),
            render(r.m_stab),
            semigroup.join(" "),
        ]);
    }
    Ok((t, ok))
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub class: String,
    pub moment_image: String,
    pub zero_position: String,
    pub stabilizer_finite: bool,
    pub stabilizer_order: Option<u64>,
    pub stabilizer_central: bool,
    pub invariant_factors: Vec<i64>,
    /// `(μ, r_μ)` for unstable-everywhere scenarios.
    pub vanishing: Vec<(String, u64)>,
}

impl ClassifyReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "class: {}", self.class);
        let _ = writeln!(out, "moment image: {}", self.moment_image);
        let _ = writeln!(out, "zero: {}", self.zero_position);
        let stab = match (self.stabilizer_finite, self.stabilizer_order) {
            (true, Some(order)) => format!(
                "finite of order {order}{}, invariant factors {:?}",
                if self.stabilizer_central { "" } else { " (non-central)" },
                self.invariant_factors
            ),
            _ => "infinite".to_string(),
        };
        let _ = writeln!(out, "generic stabilizer: {stab}");
        if !self.vanishing.is_empty() {
            let _ = writeln!(out, "vanishing levels r_mu:");
            for (mu, r) in &self.vanishing {
                let _ = writeln!(out, "  mu = {mu}: r = {r}");
            }
        }
        out
    }
}

pub fn classify_report(s: &Scenario, mu_range: (i64, i64)) -> Result<ClassifyReport> {
    let report = classify_stability(s)?;
    let stab = generic_stabilizer(s)?;
    let mut vanishing = Vec::new();
    if report.class == StabilityClass::UnstableEverywhere {
        for mu in weights_in_range(s, mu_range) {
            if let Some(r) = vanishing_certificate(s, &mu)? {
                vanishing.push((mu.to_string(), r));
            }
        }
    }
    Ok(ClassifyReport {
        class: report.class.to_string(),
        moment_image: report.moment_image.to_string(),
        zero_position: report.zero_position.name().to_string(),
        stabilizer_finite: stab.finite,
        stabilizer_order: stab.order,
        stabilizer_central: stab.central,
        invariant_factors: stab.invariant_factors,
        vanishing,
    })
}

/// Rows `mu,predicted,counted,witness,agree`; the flag is false when some
/// row disagrees.
pub fn predict_table(s: &Scenario, mus: &[Weight], params: &FitParams) -> Result<(Table, bool)> {
    let zero = Weight::zero(s.torus_rank());
    let solver = VolumeSolver::new(s, *params)?;
    let vol0 = solver.volume(&zero)?;
    let mut t = Table::new(&["mu", "predicted", "counted", "witness", "agree"]);
    let mut ok = true;
    for mu in mus {
        let predicted = predicted_volume(s, mu, &vol0)?;
        let counted = solver.volume(mu)?;
        let witness = numerically_compatible(s, mu)?.witness;
        let agree = counted.is_finite() && counted.value == predicted.value;
        ok &= agree;
        t.push(vec![
            mu.to_string(),
            predicted.render(),
            counted.render(),
            witness.map_or(String::new(), |r| r.to_string()),
            agree.to_string(),
        ]);
    }
    Ok((t, ok))
}
