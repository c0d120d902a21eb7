//! Smith normal form for small integer matrices.
//!
//! Used for generic stabilizers of torus actions (the character group of `K`
//! is `Z^g / Λ` with `Λ` spanned by coordinate-weight differences) and for
//! integer kernels of the slice lattice.

use num_integer::Integer;

/// `left · a · right = diag(invariants, 0, …)` with `left` and `right`
/// unimodular and `invariants[i] | invariants[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    pub invariants: Vec<i64>,
    pub left: Vec<Vec<i64>>,
    pub right: Vec<Vec<i64>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Coordinates of `v` in the decomposition
    /// `Z^rows / col(a) ≅ ⊕ Z/invariants[i] ⊕ Z^{rows - rank}`, with the
    /// torsion coordinates reduced into `[0, invariants[i])`.
    pub fn residue(&self, v: &[i64]) -> Vec<i64> {
        let uv: Vec<i64> = self
            .left
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect();
        uv.into_iter()
            .enumerate()
            .map(|(i, x)| match self.invariants.get(i) {
                Some(&d) => x.mod_floor(&d),
                None => x,
            })
            .collect()
    }

    /// A basis of the integer kernel `{x ∈ Z^cols : a x = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<i64>> {
        (self.rank()..self.cols)
            .map(|j| self.right.iter().map(|row| row[j]).collect())
            .collect()
    }
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// Smith normal form of a `rows × cols` integer matrix given row-major.
pub fn smith_normal_form(a: &[Vec<i64>], rows: usize, cols: usize) -> SmithForm {
    let mut m: Vec<Vec<i64>> = (0..rows)
        .map(|i| (0..cols).map(|j| a.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0)).collect())
        .collect();
    let mut left = identity(rows);
    let mut right = identity(cols);
    let mut invariants = Vec::new();

    for t in 0..rows.min(cols) {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].abs());
            let Some((pi, pj)) = pivot else {
                return SmithForm { rows, cols, invariants, left, right };
            };
            m.swap(t, pi);
            left.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in right.iter_mut() {
                row.swap(t, pj);
            }

            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = Integer::div_floor(&m[i][t], &p);
                if q != 0 {
                    for j in 0..cols {
                        m[i][j] -= q * m[t][j];
                    }
                    for j in 0..rows {
                        left[i][j] -= q * left[t][j];
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = Integer::div_floor(&m[t][j], &p);
                if q != 0 {
                    for i in 0..rows {
                        m[i][j] -= q * m[i][t];
                    }
                    for i in 0..cols {
                        right[i][j] -= q * right[i][t];
                    }
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
            if let Some(i) = offending {
                for j in 0..cols {
                    m[t][j] += m[i][j];
                }
                for j in 0..rows {
                    left[t][j] += left[i][j];
                }
                continue;
            }
            break;
        }
        if m[t][t] < 0 {
            for j in 0..cols {
                m[t][j] = -m[t][j];
            }
            for j in 0..rows {
                left[t][j] = -left[t][j];
            }
        }
        invariants.push(m[t][t]);
    }
    SmithForm { rows, cols, invariants, left, right }
}
