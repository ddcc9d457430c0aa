use std::collections::BTreeSet;

use num_bigint::BigInt;
use positroidal::hypergeom::{
    affine_dim, affine_dim_by_cells, certify, edge_directions_ok, is_matroid_masks, is_positroid_masks,
    splits_compatible, GeomError,
};
use positroidal::subsets::{k_subsets, mask};
use positroidal::webtrop::DEFAULT_MAX_MONOMIALS;
use positroidal::{regular_subdivision, tree_split, Hypersimplex, Models, Rational, Tableau, WeightVector};
use proptest::prelude::*;

fn models() -> &'static Models {
    static M: std::sync::OnceLock<Models> = std::sync::OnceLock::new();
    M.get_or_init(|| Models::in_memory(DEFAULT_MAX_MONOMIALS))
}

/// Grassmann necklace test: `I_i` is the `<_i`-minimal basis and the
/// matroid is a positroid iff it equals the set of k-subsets Gale-above
/// every `I_i` in the shifted order.
fn necklace_positroid(bases: &[u32], k: usize, n: usize) -> bool {
    let shifted = |m: u32, i: usize| -> Vec<usize> {
        let mut v: Vec<usize> = (0..n).filter(|x| m >> x & 1 == 1).map(|x| (x + n - i) % n).collect();
        v.sort();
        v
    };
    let necklace: Vec<Vec<usize>> = (0..n).map(|i| bases.iter().map(|&b| shifted(b, i)).min().unwrap()).collect();
    let envelope: BTreeSet<u32> = k_subsets(n, k)
        .iter()
        .map(|s| mask(s))
        .filter(|&m| (0..n).all(|i| necklace[i].iter().zip(shifted(m, i)).all(|(a, b)| *a <= b)))
        .collect();
    envelope == bases.iter().copied().collect()
}

fn all_matroids(k: usize, n: usize) -> Vec<Vec<u32>> {
    let verts: Vec<u32> = k_subsets(n, k).iter().map(|s| mask(s)).collect();
    (1u32..1 << verts.len())
        .map(|pick| verts.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, &m)| m).collect::<Vec<_>>())
        .filter(|b| is_matroid_masks(b))
        .collect()
}

#[test]
fn positroids_match_grassmann_necklaces() {
    for (k, n) in [(1, 4), (2, 4), (2, 5), (2, 6), (3, 5), (3, 6)] {
        let mut count = 0;
        for b in all_matroids(k, n) {
            let fast = is_positroid_masks(&b, k, n);
            assert_eq!(fast, necklace_positroid(&b, k, n), "k={k} n={n} bases {b:?}");
            count += usize::from(fast);
        }
        assert!(count > 0);
    }
}

/// Supports of 2×n matrices with entries in [-2, 2] and all 2×2 minors
/// nonnegative, built column by column.
fn realizable_rank2(n: usize) -> BTreeSet<Vec<u32>> {
    let vecs: Vec<(i64, i64)> = (-2..=2).flat_map(|a| (-2..=2).map(move |b| (a, b))).collect();
    let mut out = BTreeSet::new();
    let mut cols: Vec<(i64, i64)> = Vec::new();
    fn go(n: usize, vecs: &[(i64, i64)], cols: &mut Vec<(i64, i64)>, out: &mut BTreeSet<Vec<u32>>) {
        if cols.len() == n {
            let mut bases = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if cols[a].0 * cols[b].1 - cols[a].1 * cols[b].0 > 0 {
                        bases.push((1u32 << a) | (1 << b));
                    }
                }
            }
            if !bases.is_empty() {
                bases.sort();
                out.insert(bases);
            }
            return;
        }
        for &v in vecs {
            if cols.iter().all(|c| c.0 * v.1 - c.1 * v.0 >= 0) {
                cols.push(v);
                go(n, vecs, cols, out);
                cols.pop();
            }
        }
    }
    go(n, &vecs, &mut cols, &mut out);
    out
}

#[test]
fn rank2_positroids_are_totally_nonnegative_supports() {
    for n in 3..=5 {
        let realized = realizable_rank2(n);
        let recognized: BTreeSet<Vec<u32>> = all_matroids(2, n)
            .into_iter()
            .filter(|b| is_positroid_masks(b, 2, n))
            .map(|mut b| {
                b.sort();
                b
            })
            .collect();
        assert_eq!(recognized, realized, "n={n}");
    }
}

#[test]
fn tree_and_lp_compatibility_agree() {
    for n in 4..=7 {
        let splits: Vec<_> = (1..n)
            .flat_map(|i| (i + 2..=n).map(move |j| (i, j)))
            .filter(|&(i, j)| !(i == 1 && j == n))
            .map(|p| tree_split(n, p).unwrap())
            .collect();
        for a in &splits {
            for b in splits.iter().filter(|b| b.pair != a.pair) {
                // two bipartitions are compatible when some pair of blocks is disjoint
                let blocks = |t: &positroidal::TreeSplit| {
                    let left: BTreeSet<usize> = t.left.iter().copied().collect();
                    let right: BTreeSet<usize> = (1..=n).filter(|x| !left.contains(x)).collect();
                    [left, right]
                };
                let tree = blocks(a).iter().any(|x| blocks(b).iter().any(|y| x.is_disjoint(y)));
                let lp = splits_compatible(2, n, &a.hyperplane(), &b.hyperplane());
                assert_eq!(lp, tree, "n={n} {:?} {:?}", a.pair, b.pair);
                assert_eq!(a.compatible_with(b), tree);
            }
        }
    }
}

#[test]
fn hypersimplex_vertices() {
    for (k, n) in [(1, 3), (2, 5), (3, 7), (4, 9)] {
        let h = Hypersimplex::new(k, n).unwrap();
        assert_eq!(h.len() as u64, positroidal::subsets::binomial(n, k));
        for v in 0..h.len() {
            let x = h.indicator(v);
            assert!(x.iter().all(|&c| c == 0 || c == 1));
            assert_eq!(x.iter().sum::<i64>(), k as i64);
        }
    }
}

#[test]
fn lineality_has_dimension_n() {
    for (k, n) in [(2, 4), (2, 6), (3, 6), (3, 7)] {
        let h = Hypersimplex::new(k, n).unwrap();
        let sub = regular_subdivision(&h, &WeightVector::zero(k, n).unwrap()).unwrap();
        assert_eq!(sub.cells().len(), 1);
        assert_eq!(affine_dim(&sub), n);
        assert_eq!(affine_dim_by_cells(&sub), n);
    }
}

#[test]
fn trivial_and_frozen_columns_give_one_cell() {
    for (k, n) in [(2, 5), (3, 6), (3, 7)] {
        let h = Hypersimplex::new(k, n).unwrap();
        for col in k_subsets(n, k) {
            if positroidal::subsets::cyclic_blocks(&col, n) != 1 {
                continue;
            }
            let t = Tableau::column(k, n, &col).unwrap();
            let w = models().get(k, n).unwrap().weight_of(&t).unwrap();
            assert_eq!(regular_subdivision(&h, &w).unwrap().cells().len(), 1, "{col:?}");
        }
    }
}

/// Random integer lifts of Δ(3,6): every accepted subdivision certifies
/// with matroid cells, and some lifts are rejected as non-matroidal.
#[test]
fn non_matroidal_weights_are_rejected() {
    use rand::{Rng, SeedableRng};
    let h = Hypersimplex::new(3, 6).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let (mut rejected, mut accepted) = (0, 0);
    for _ in 0..40 {
        let w: Vec<i64> = (0..h.len()).map(|_| rng.gen_range(0..4)).collect();
        let w = WeightVector::from_integers(3, 6, &w).unwrap();
        match regular_subdivision(&h, &w) {
            Err(GeomError::NonMatroidCell { .. }) => rejected += 1,
            Ok(sub) => {
                certify(&sub).unwrap();
                assert!(sub.classification().is_matroidal);
                accepted += 1;
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }
    assert!(rejected > 0, "accepted {accepted}");
}

fn tableau_strategy() -> impl Strategy<Value = Tableau> {
    (2usize..=3, 0usize..=3)
        .prop_flat_map(|(k, extra)| {
            let n = k + 2 + extra;
            let all = k_subsets(n, k);
            (Just(k), Just(n), proptest::collection::vec(proptest::sample::select(all), 1..=3))
        })
        .prop_map(|(k, n, cols)| {
            cols.iter().fold(Tableau::empty(k, n).unwrap(), |t, c| {
                t.union(&Tableau::column(k, n, c).unwrap()).unwrap()
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn subdivisions_certify_and_are_shift_invariant(
        t in tableau_strategy(),
        lambda in proptest::collection::vec(-4i64..=4, 8),
        c in -4i64..=4,
    ) {
        let (k, n) = (t.k(), t.n());
        let (w, sub) = models().subdivide(&t).unwrap();
        prop_assert!(certify(&sub).is_ok());
        let lambda: Vec<Rational> = lambda[..n].iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
        let shifted = w.add_affine(&lambda, &Rational::from_integer(BigInt::from(c)));
        let again = regular_subdivision(&Hypersimplex::new(k, n).unwrap(), &shifted).unwrap();
        prop_assert_eq!(again.canonical_key(), sub.canonical_key());
        prop_assert_eq!(again.classification(), sub.classification());
        let cls = sub.classification();
        prop_assert!(cls.is_matroidal && cls.is_positroidal);
        prop_assert_eq!(cls.is_split, sub.cells().len() == 2);
        if n <= 6 {
            prop_assert_eq!(affine_dim(&sub), affine_dim_by_cells(&sub));
            for cell in sub.cells() {
                prop_assert!(edge_directions_ok(sub.hypersimplex(), &cell.bases));
            }
        }
        let coarsest = sub.cells().len() >= 2 && cls.affine_dim == n + 1;
        prop_assert_eq!(cls.is_coarsest, coarsest);
    }

    #[test]
    fn scaling_preserves_subdivision(t in tableau_strategy(), s in 1i64..=5) {
        let (w, sub) = models().subdivide(&t).unwrap();
        let scaled = w.scale(&Rational::from_integer(BigInt::from(s)));
        let again = regular_subdivision(sub.hypersimplex(), &scaled).unwrap();
        prop_assert_eq!(again.canonical_key(), sub.canonical_key());
    }
}
