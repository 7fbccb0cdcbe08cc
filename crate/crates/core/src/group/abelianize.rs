//! `K → K/[K,K] ≅ ⊕ C_{d_i}` with an explicit projection.
//!
//! The generators of `K` give `Z^r → K`; abelianizing the relations read off
//! the Cayley graph of `K` gives the relation lattice of `K^ab`, and the
//! column transform of its Smith normal form turns word coordinates into
//! invariant-factor coordinates.

use super::{FiniteGroup, Subgroup};

/// Abelianization of a subgroup.
#[derive(Debug, Clone)]
pub struct Abelianization {
    commutator: Subgroup,
    factors: Vec<u64>,
    /// Invariant-factor coordinates, aligned with the sorted members of `K`.
    projection: Vec<Vec<u64>>,
    subgroup: Subgroup,
}

impl Abelianization {
    pub fn commutator_subgroup(&self) -> &Subgroup {
        &self.commutator
    }

    /// Invariant factors `d_1 | d_2 | ...`, all greater than 1.
    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    /// Image of `x ∈ K` in `⊕ Z/d_i`.
    pub fn project(&self, x: usize) -> &[u64] {
        let pos = self.subgroup.position(x).expect("element outside the subgroup");
        &self.projection[pos]
    }
}

impl FiniteGroup {
    pub fn commutator_subgroup(&self, k: &Subgroup) -> Subgroup {
        let kg: Vec<usize> = k.generators().collect();
        let mut gens: Vec<usize> = Vec::new();
        for &a in &kg {
            for &b in &kg {
                gens.push(self.commutator(a, b));
            }
        }
        loop {
            let n = self.closure(&gens);
            let missing = kg
                .iter()
                .flat_map(|&a| n.generators().map(move |x| (a, x)))
                .map(|(a, x)| self.conj(a, x))
                .find(|&y| !n.contains(y));
            match missing {
                Some(y) => gens.push(y),
                None => return n,
            }
        }
    }

    pub fn abelianization(&self, k: &Subgroup) -> Abelianization {
        let gens: Vec<usize> = k.generators().collect();
        let r = gens.len();
        let commutator = self.commutator_subgroup(k);

        // word coordinates along a BFS tree
        let n = self.order();
        let mut coords: Vec<Option<Vec<i128>>> = vec![None; n];
        coords[0] = Some(vec![0; r]);
        let mut queue = vec![0usize];
        let mut head = 0;
        let mut lattice = Lattice::new(r);
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for (j, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                let mut step = coords[x].clone().unwrap();
                step[j] += 1;
                match &coords[y] {
                    None => {
                        coords[y] = Some(step);
                        queue.push(y);
                    }
                    Some(cy) => {
                        let rel: Vec<i128> = step.iter().zip(cy).map(|(a, b)| a - b).collect();
                        lattice.insert(rel);
                    }
                }
            }
        }
        let basis = lattice.into_matrix();
        let (diag, v) = smith_normal_form_i128(&basis);
        let keep: Vec<usize> = (0..r).filter(|&i| diag[i] != 1).collect();
        let factors: Vec<u64> = keep.iter().map(|&i| diag[i] as u64).collect();
        let projection = k
            .members()
            .map(|x| {
                let c = coords[x].as_ref().expect("member reached by BFS");
                keep.iter()
                    .map(|&i| {
                        let s: i128 = (0..r).map(|t| c[t] * v[t][i]).sum();
                        s.rem_euclid(diag[i]) as u64
                    })
                    .collect()
            })
            .collect();
        let ab = Abelianization { commutator, factors, projection, subgroup: k.clone() };
        debug_assert_eq!(ab.order() as usize * ab.commutator.order(), k.order());
        ab
    }
}

/// Incrementally maintained Hermite basis of a sublattice of `Z^r`.
struct Lattice {
    rows: Vec<Option<Vec<i128>>>,
}

impl Lattice {
    fn new(r: usize) -> Self {
        Lattice { rows: vec![None; r] }
    }

    fn insert(&mut self, mut v: Vec<i128>) {
        let r = self.rows.len();
        for i in 0..r {
            if v[i] == 0 {
                continue;
            }
            match self.rows[i].take() {
                None => {
                    if v[i] < 0 {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                    self.rows[i] = Some(v);
                    self.reduce();
                    return;
                }
                Some(b) => {
                    let (g, s, t) = ext_gcd(b[i], v[i]);
                    let (bi, vi) = (b[i] / g, v[i] / g);
                    let new_b: Vec<i128> = b.iter().zip(&v).map(|(x, y)| s * x + t * y).collect();
                    let rest: Vec<i128> = b.iter().zip(&v).map(|(x, y)| vi * x - bi * y).collect();
                    self.rows[i] = Some(new_b);
                    v = rest;
                }
            }
        }
        self.reduce();
    }

    /// Reduces entries right of each pivot modulo the later pivots.
    fn reduce(&mut self) {
        let r = self.rows.len();
        for i in (0..r).rev() {
            for j in i + 1..r {
                let Some(pj) = self.rows[j].as_ref().map(|row| row[j]) else { continue };
                let q = match &self.rows[i] {
                    Some(row) => row[j].div_euclid(pj),
                    None => continue,
                };
                if q != 0 {
                    let rj = self.rows[j].clone().unwrap();
                    let ri = self.rows[i].as_mut().unwrap();
                    for t in 0..r {
                        ri[t] -= q * rj[t];
                    }
                }
            }
        }
    }

    fn into_matrix(self) -> Vec<Vec<i128>> {
        let r = self.rows.len();
        self.rows
            .into_iter()
            .map(|row| row.expect("relation lattice of a finite group has full rank"))
            .inspect(|row| debug_assert_eq!(row.len(), r))
            .collect()
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1, 0);
    let (mut t0, mut t1) = (0, 1);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Smith normal form of an integer matrix.
///
/// Returns the diagonal `d_1 | d_2 | ...` (non-negative, length `min(rows,
/// cols)`) and the unimodular column transform `V` with `U·M·V = D` for some
/// unimodular `U`.
pub fn smith_normal_form(m: &[Vec<i64>]) -> (Vec<i64>, Vec<Vec<i64>>) {
    let wide: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let (d, v) = smith_normal_form_i128(&wide);
    let narrow = |x: i128| i64::try_from(x).expect("Smith form entry exceeds i64");
    (d.into_iter().map(narrow).collect(), v.into_iter().map(|r| r.into_iter().map(narrow).collect()).collect())
}

fn smith_normal_form_i128(m: &[Vec<i128>]) -> (Vec<i128>, Vec<Vec<i128>>) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut v: Vec<Vec<i128>> = (0..cols).map(|i| (0..cols).map(|j| (i == j) as i128).collect()).collect();
    let swap_cols = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    // col_j ← col_j − q·col_i
    let sub_col = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, j: usize, i: usize, q: i128| {
        for row in a.iter_mut() {
            row[j] -= q * row[i];
        }
        for row in v.iter_mut() {
            row[j] -= q * row[i];
        }
    };
    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // smallest nonzero pivot in the lower-right block
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else {
                break;
            };
            a.swap(t, pi);
            if pj != t {
                swap_cols(&mut a, &mut v, t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    let pivot_row = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                        *x -= q * y;
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    sub_col(&mut a, &mut v, j, t, q);
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    let offending = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(&offending) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            a[t][t] = -a[t][t];
            // negate column t of V to keep U·M·V = D with the sign absorbed in U
            for row in a.iter_mut().skip(t + 1) {
                row[t] = -row[t];
            }
            for row in v.iter_mut() {
                row[t] = -row[t];
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_projection_is_hom(g: &FiniteGroup, k: &Subgroup) {
        let ab = g.abelianization(k);
        for x in k.members() {
            for y in k.members() {
                let lhs = ab.project(g.mul(x, y));
                let rhs: Vec<u64> =
                    ab.project(x).iter().zip(ab.project(y)).zip(ab.factors()).map(|((a, b), d)| (a + b) % d).collect();
                assert_eq!(lhs, &rhs[..]);
            }
        }
        // surjective onto ⊕ Z/d_i
        let mut images: Vec<&[u64]> = k.members().map(|x| ab.project(x)).collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len() as u64, ab.order());
    }

    #[test]
    fn abelian_group_is_its_own_abelianization() {
        let g = FiniteGroup::abelian(&[2, 4]);
        let ab = g.abelianization(&g.whole());
        assert_eq!(ab.factors(), &[2, 4]);
        assert_eq!(ab.commutator_subgroup().order(), 1);
        check_projection_is_hom(&g, &g.whole());
        let c6 = FiniteGroup::abelian(&[2, 3]);
        assert_eq!(c6.abelianization(&c6.whole()).factors(), &[6]);
    }

    #[test]
    fn s3_abelianizes_to_c2() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let ab = g.abelianization(&g.whole());
        assert_eq!(ab.factors(), &[2]);
        assert_eq!(ab.commutator_subgroup().order(), 3);
        check_projection_is_hom(&g, &g.whole());
    }

    #[test]
    fn s4_and_subgroups() {
        let g = FiniteGroup::symmetric(4).unwrap();
        for k in g.enumerate_subgroups() {
            check_projection_is_hom(&g, &k);
            // oracle: closure of all commutators
            let comms: Vec<usize> =
                k.members().flat_map(|a| k.members().map(move |b| (a, b))).map(|(a, b)| g.commutator(a, b)).collect();
            assert_eq!(g.commutator_subgroup(&k), g.closure(&comms));
        }
        assert_eq!(g.abelianization(&g.whole()).factors(), &[2]);
    }

    #[test]
    fn snf_small_matrices() {
        let (d, _) = smith_normal_form(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(d, vec![2, 6, 12]);
        let (d, v) = smith_normal_form(&[vec![4, 6], vec![6, 9]]);
        assert_eq!(d, vec![1, 0]);
        assert_eq!(v.len(), 2);
    }
}
