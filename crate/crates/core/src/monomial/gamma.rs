use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::MonomialPair;
use crate::group::{FiniteGroup, Subgroup};

/// `γ_{(K,φ),(L,ψ)} = |{sL ∈ G/L : K ≤ sLs⁻¹ and (^sψ)|_K = φ}|`.
pub fn gamma(g: &FiniteGroup, lower: &MonomialPair, upper: &MonomialPair) -> u64 {
    gamma_with_transversal(g, lower, upper, &g.left_transversal(upper.subgroup()))
}

pub(crate) fn gamma_with_transversal(
    g: &FiniteGroup,
    lower: &MonomialPair,
    upper: &MonomialPair,
    transversal: &[usize],
) -> u64 {
    let (k, l) = (lower.subgroup(), upper.subgroup());
    if l.order() % k.order() != 0 {
        return 0;
    }
    let count = count_fixed(g, lower, upper, transversal.iter().copied());
    debug_assert_eq!(count, shifted_count(g, lower, upper, transversal), "γ depends on the coset representatives");
    count
}

fn count_fixed(g: &FiniteGroup, lower: &MonomialPair, upper: &MonomialPair, reps: impl Iterator<Item = usize>) -> u64 {
    let (k, l) = (lower.subgroup(), upper.subgroup());
    let (phi, psi) = (lower.character(), upper.character());
    reps.filter(|&s| {
        let s_inv = g.inv(s);
        k.generators().all(|x| {
            let y = g.conj(s_inv, x);
            l.contains(y) && psi.value(y) == phi.value(x)
        })
    })
    .count() as u64
}

// same count with every representative s replaced by s·l for a fixed l ∈ L
fn shifted_count(g: &FiniteGroup, lower: &MonomialPair, upper: &MonomialPair, transversal: &[usize]) -> u64 {
    let shift = upper.subgroup().generators().last().unwrap_or(0);
    count_fixed(g, lower, upper, transversal.iter().map(|&s| g.mul(s, shift)))
}

/// Whether `K ≤ sLs⁻¹` for some `s`, i.e. `K` is subconjugate to `L`.
pub fn is_subconjugate(g: &FiniteGroup, k: &Subgroup, l: &Subgroup) -> bool {
    l.order().is_multiple_of(k.order()) && g.left_transversal(l).iter().any(|&s| g.is_in_conjugate(k, s, l))
}

/// Square matrix of γ over the monomial basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaTable {
    pub gamma: Vec<Vec<u64>>,
}

impl GammaTable {
    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.gamma[i][j]
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        bareiss_determinant(&self.gamma)
    }

    pub fn is_nonsingular(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.gamma {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

pub(crate) fn bareiss_determinant(m: &[Vec<u64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let det = sign * &a[n - 1][n - 1];
    debug_assert!(det.is_zero() || det.abs() >= BigInt::one());
    det
}
