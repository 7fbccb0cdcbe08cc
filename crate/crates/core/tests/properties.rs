use fibered_burnside::group::{are_isomorphic, smith_normal_form};
use fibered_burnside::{AbelianFiber, BurnsideElement, BurnsideRing, FiniteGroup, SubgroupClassTable};
use proptest::prelude::*;

fn relabel(g: &FiniteGroup, perm: &[usize]) -> FiniteGroup {
    // element i of the new table is perm[i] of the old one
    let n = g.order();
    let mut inv = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    let table = (0..n).map(|a| (0..n).map(|b| inv[g.mul(perm[a], perm[b])]).collect()).collect();
    FiniteGroup::from_cayley(table).unwrap()
}

fn small_group() -> impl Strategy<Value = FiniteGroup> {
    prop_oneof![
        (1usize..13).prop_map(FiniteGroup::cyclic),
        prop::collection::vec(2usize..5, 1..3).prop_map(|f| FiniteGroup::abelian(&f)),
        (3usize..7).prop_map(|n| FiniteGroup::dihedral(n).unwrap()),
        Just(FiniteGroup::symmetric(3).unwrap()),
    ]
}

fn fiber() -> impl Strategy<Value = AbelianFiber> {
    prop::collection::vec(1u64..7, 1..3).prop_map(|f| AbelianFiber::new(&f).unwrap())
}

fn det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] as i128 * det(&minor)
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabelled_groups_are_isomorphic(g in small_group(), seed in any::<u64>()) {
        let n = g.order();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = relabel(&g, &perm);
        prop_assert!(are_isomorphic(&g, &h).is_some());
        let (tg, th) = (SubgroupClassTable::new(&g), SubgroupClassTable::new(&h));
        prop_assert_eq!(tg.num_classes(), th.num_classes());
        let diag = |t: &SubgroupClassTable| {
            let mut d: Vec<u64> = (0..t.num_classes()).map(|i| t.marks()[i][i]).collect();
            d.sort();
            d
        };
        prop_assert_eq!(diag(&tg), diag(&th));
    }

    #[test]
    fn ring_axioms_on_random_triples(g in small_group(), a in fiber(), picks in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
        let r = BurnsideRing::new(g, a);
        let n = r.basis_len();
        let [i, j, k] = [picks[0].index(n), picks[1].index(n), picks[2].index(n)];
        let e = |t| r.basis_element(t);
        let m = |x: &BurnsideElement, y: &BurnsideElement| r.multiply(x, y).unwrap();
        prop_assert_eq!(m(&e(i), &e(j)), m(&e(j), &e(i)));
        prop_assert_eq!(m(&m(&e(i), &e(j)), &e(k)), m(&e(i), &m(&e(j), &e(k))));
        prop_assert_eq!(m(&r.identity(), &e(i)), e(i));
        let lhs = r.mark_morphism(&m(&e(i), &e(j))).unwrap();
        let rhs = r.ghost_multiply(&r.mark_morphism(&e(i)).unwrap(), &r.mark_morphism(&e(j)).unwrap()).unwrap();
        prop_assert!(r.is_ghost_fixed(&lhs));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gamma_diagonal_is_stabilizer_index(g in small_group(), a in fiber()) {
        let r = BurnsideRing::new(g, a);
        let t = r.gamma_table();
        for i in 0..r.basis_len() {
            let k = r.pair(i).subgroup().order();
            prop_assert_eq!(t.get(i, i) as usize, r.stabilizer(i).order() / k);
        }
    }

    #[test]
    fn smith_form_divisibility_and_determinant(m in prop::collection::vec(prop::collection::vec(-9i64..10, 3), 3)) {
        let (d, _) = smith_normal_form(&m);
        for w in d.windows(2) {
            prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
        let prod: i128 = d.iter().map(|&x| x as i128).product();
        prop_assert_eq!(prod, det(&m).abs());
    }

    #[test]
    fn fiber_encoding_round_trips(a in fiber(), x in any::<u32>(), y in any::<u32>()) {
        let (x, y) = (x % a.order() as u32, y % a.order() as u32);
        prop_assert_eq!(a.encode(&a.decode(x)), x);
        prop_assert_eq!(a.add(x, a.neg(x)), 0);
        prop_assert_eq!(a.add(x, y), a.add(y, x));
    }
}
