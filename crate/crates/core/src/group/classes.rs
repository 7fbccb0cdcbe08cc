use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{FiniteGroup, Subgroup};
use crate::par;

/// Conjugacy classes of subgroups with their table of marks.
///
/// Each class is represented by its lexicographically least member set, and
/// classes are ordered by `(order, representative members)`. `marks[i][j]` is
/// `|(G/L_j)^{K_i}|`, so the matrix is upper triangular with a positive diagonal.
#[derive(Debug, Clone)]
pub struct SubgroupClassTable {
    subgroups: Vec<Subgroup>,
    index: HashMap<Subgroup, usize>,
    class_of: Vec<usize>,
    to_rep: Vec<usize>,
    reps: Vec<Subgroup>,
    rep_index: Vec<usize>,
    normalizers: Vec<Subgroup>,
    class_sizes: Vec<usize>,
    transversals: Vec<Vec<usize>>,
    marks: Vec<Vec<u64>>,
}

/// JSON export: class representatives as member lists plus the marks matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTableExport {
    pub reps: Vec<Vec<usize>>,
    pub marks: Vec<Vec<u64>>,
}

impl SubgroupClassTable {
    pub fn new(g: &FiniteGroup) -> Self {
        let subgroups = g.enumerate_subgroups();
        let index: HashMap<Subgroup, usize> = subgroups.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let m = subgroups.len();
        let mut class_of = vec![usize::MAX; m];
        let mut to_rep = vec![0usize; m];
        let mut reps = Vec::new();
        let mut rep_index = Vec::new();
        let mut normalizers = Vec::new();
        let mut class_sizes = Vec::new();
        // Subgroups are sorted, so the first unassigned one is the least in its class.
        for i in 0..m {
            if class_of[i] != usize::MAX {
                continue;
            }
            let c = reps.len();
            let rep = subgroups[i].clone();
            let mut norm = Vec::new();
            let mut size = 0;
            for h in 0..g.order() {
                let conj = g.conjugate_subgroup(h, &rep);
                let j = index[&conj];
                if j == i {
                    norm.push(h);
                }
                if class_of[j] == usize::MAX {
                    class_of[j] = c;
                    // h⁻¹ (h R h⁻¹) h = R
                    to_rep[j] = g.inv(h);
                    size += 1;
                }
            }
            reps.push(rep);
            rep_index.push(i);
            normalizers.push(g.closure(&norm));
            class_sizes.push(size);
        }
        let transversals: Vec<Vec<usize>> = reps.iter().map(|l| g.left_transversal(l)).collect();
        let r = reps.len();
        let marks = par::map_range(r, |i| {
            (0..r).map(|j| g.mark_with_transversal(&reps[i], &reps[j], &transversals[j])).collect()
        });
        SubgroupClassTable {
            subgroups,
            index,
            class_of,
            to_rep,
            reps,
            rep_index,
            normalizers,
            class_sizes,
            transversals,
            marks,
        }
    }

    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[Subgroup] {
        &self.reps
    }

    pub fn rep(&self, class: usize) -> &Subgroup {
        &self.reps[class]
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn marks(&self) -> &[Vec<u64>] {
        &self.marks
    }

    pub fn normalizer(&self, class: usize) -> &Subgroup {
        &self.normalizers[class]
    }

    /// Number of subgroups conjugate to the representative.
    pub fn class_size(&self, class: usize) -> usize {
        self.class_sizes[class]
    }

    /// Left transversal of the representative, least element per coset.
    pub fn transversal(&self, class: usize) -> &[usize] {
        &self.transversals[class]
    }

    pub fn subgroup_index(&self, s: &Subgroup) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Class of an arbitrary subgroup.
    pub fn class_of(&self, s: &Subgroup) -> Option<usize> {
        self.subgroup_index(s).map(|i| self.class_of[i])
    }

    /// `(class, h)` with `h S h⁻¹` equal to the class representative.
    pub fn locate(&self, s: &Subgroup) -> Option<(usize, usize)> {
        self.subgroup_index(s).map(|i| (self.class_of[i], self.to_rep[i]))
    }

    /// Index of the class representative in [`Self::subgroups`].
    pub fn rep_subgroup_index(&self, class: usize) -> usize {
        self.rep_index[class]
    }

    /// Class members of class `c`, in subgroup order.
    pub fn class_members(&self, class: usize) -> impl Iterator<Item = &Subgroup> + '_ {
        self.subgroups.iter().zip(&self.class_of).filter(move |(_, &c)| c == class).map(|(s, _)| s)
    }

    pub fn export(&self) -> ClassTableExport {
        ClassTableExport { reps: self.reps.iter().map(|s| s.member_list()).collect(), marks: self.marks.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_classes() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let t = SubgroupClassTable::new(&g);
        let orders: Vec<usize> = t.reps().iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        assert_eq!(t.marks(), &[vec![6, 3, 2, 1], vec![0, 1, 0, 1], vec![0, 0, 2, 1], vec![0, 0, 0, 1]]);
        assert_eq!(t.class_size(1), 3);
        assert_eq!(t.normalizer(1).order(), 2);
    }

    #[test]
    fn c2_has_two_classes() {
        let t = SubgroupClassTable::new(&FiniteGroup::cyclic(2));
        assert_eq!(t.num_classes(), 2);
        assert_eq!(t.marks(), &[vec![2, 1], vec![0, 1]]);
    }

    #[test]
    fn locate_conjugates_onto_rep() {
        let g = FiniteGroup::symmetric(4).unwrap();
        let t = SubgroupClassTable::new(&g);
        for s in t.subgroups() {
            let (c, h) = t.locate(s).unwrap();
            assert_eq!(&g.conjugate_subgroup(h, s), t.rep(c));
        }
        assert_eq!(t.num_classes(), 11);
        let total: usize = (0..t.num_classes()).map(|c| t.class_size(c)).sum();
        assert_eq!(total, 30);
    }
}
