//! Brute-force verification oracle for isotypic decompositions.
//!
//! Every monomial section of `L^k` is enumerated explicitly and its weight
//! is computed with [`Scenario::weight_of_monomial`]. For SU(2) the
//! multiplicity of `V_μ` is obtained as the dimension of the kernel of the
//! raising operator `E` on the weight-`μ` space (highest-weight vectors),
//! with the rank computed by exact rational elimination. Nothing here
//! shares code with the convolution engine in [`crate::multiplicity`].

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{FactorWeights, Scenario, Weight};

/// Default cap on the number of enumerated monomials.
pub const DEFAULT_ENUMERATION_BOUND: u128 = 1_000_000;

type Monomial = Vec<Vec<u64>>;

/// All exponent vectors of length `len` summing to `total`.
fn compositions(total: u64, len: usize) -> Vec<Vec<u64>> {
    if len == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, len - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn all_monomials(s: &Scenario, k: u64) -> Vec<Monomial> {
    let mut acc: Vec<Monomial> = vec![Vec::new()];
    for (j, f) in s.factors.iter().enumerate() {
        let block = compositions(s.factor_degree(j, k), f.coordinate_count());
        acc = acc
            .into_iter()
            .flat_map(|m| {
                block.iter().map(move |b| {
                    let mut m = m.clone();
                    m.push(b.clone());
                    m
                })
            })
            .collect();
    }
    acc
}

/// Same output contract as [`crate::multiplicity::full_weight_distribution`],
/// by explicit enumeration. Refuses inputs with more than
/// [`DEFAULT_ENUMERATION_BOUND`] monomials.
pub fn brute_force_oracle(s: &Scenario, k: u64) -> Result<BTreeMap<Weight, u128>> {
    brute_force_oracle_with_bound(s, k, DEFAULT_ENUMERATION_BOUND)
}

pub fn brute_force_oracle_with_bound(
    s: &Scenario,
    k: u64,
    bound: u128,
) -> Result<BTreeMap<Weight, u128>> {
    let size = s.total_dimension(k)?;
    if size > bound {
        return Err(Error::EnumerationBound { size, bound });
    }
    let monomials = all_monomials(s, k);
    if !s.is_su2() {
        let mut out = BTreeMap::new();
        for m in &monomials {
            *out.entry(s.weight_of_monomial(m)?).or_insert(0u128) += 1;
        }
        return Ok(out);
    }

    let mut by_weight: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
    for m in monomials {
        let w = s.weight_of_monomial(&m)?.0[0];
        by_weight.entry(w).or_default().push(m);
    }
    let raising = RaisingOperator::new(s);
    let mut out = BTreeMap::new();
    for (&mu, basis) in by_weight.range(0..) {
        let target = by_weight.get(&(mu + 2)).map(Vec::as_slice).unwrap_or(&[]);
        let rank = raising.rank_on(basis, target);
        let kernel = basis.len() - rank;
        if kernel > 0 {
            out.insert(Weight::scalar(mu), kernel as u128);
        }
    }
    Ok(out)
}

/// The raising operator `E` of `sl(2)`, extended to polynomials in the
/// coordinates as a derivation. On a block `Sym^m(V)` with basis
/// `v_j = x^{m-j} y^j` it acts by `E v_j = j · v_{j-1}`.
struct RaisingOperator {
    /// For each factor, each coordinate: `Some((coordinate above, coefficient))`.
    images: Vec<Vec<Option<(usize, i64)>>>,
}

impl RaisingOperator {
    fn new(s: &Scenario) -> Self {
        let images = s
            .factors
            .iter()
            .map(|f| match &f.weights {
                FactorWeights::Su2(powers) => {
                    let mut out = Vec::new();
                    let mut offset = 0;
                    for &m in powers {
                        for j in 0..=m as usize {
                            out.push(if j == 0 {
                                None
                            } else {
                                Some((offset + j - 1, j as i64))
                            });
                        }
                        offset += m as usize + 1;
                    }
                    out
                }
                FactorWeights::Circle(_) => unreachable!("raising operator on a circle factor"),
            })
            .collect();
        RaisingOperator { images }
    }

    fn apply(&self, m: &Monomial) -> Vec<(Monomial, i64)> {
        let mut out = Vec::new();
        for (j, block) in m.iter().enumerate() {
            for (c, &a) in block.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                if let Some((up, coeff)) = self.images[j][c] {
                    let mut image = m.clone();
                    image[j][c] -= 1;
                    image[j][up] += 1;
                    out.push((image, a as i64 * coeff));
                }
            }
        }
        out
    }

    /// Rank of `E` restricted to `span(domain) → span(codomain)`.
    fn rank_on(&self, domain: &[Monomial], codomain: &[Monomial]) -> usize {
        if domain.is_empty() || codomain.is_empty() {
            return 0;
        }
        let index: HashMap<&Monomial, usize> =
            codomain.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows: Vec<Vec<BigRational>> = domain
            .iter()
            .map(|m| {
                let mut row = vec![BigRational::zero(); codomain.len()];
                for (image, coeff) in self.apply(m) {
                    let i = index[&image];
                    row[i] += BigRational::from_integer(coeff.into());
                }
                row
            })
            .collect();
        rational_rank(&mut rows)
    }
}

fn rational_rank(rows: &mut [Vec<BigRational>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = BigRational::one() / rows[rank][col].clone();
        let pivot_row: Vec<BigRational> = rows[rank].iter().map(|x| x * &inv).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}
