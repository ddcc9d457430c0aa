use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;
use positroidal::subsets::k_subsets;
use positroidal::webtrop::{
    three_term_violations, WebCache, WebModel, WeightVector, DEFAULT_MAX_MONOMIALS,
};
use positroidal::{Rational, Tableau};
use proptest::prelude::*;

const SHAPES: [(usize, usize); 5] = [(2, 5), (2, 7), (3, 6), (3, 7), (4, 8)];

fn models() -> &'static Vec<WebModel> {
    static M: OnceLock<Vec<WebModel>> = OnceLock::new();
    M.get_or_init(|| SHAPES.iter().map(|&(k, n)| WebModel::build(k, n, DEFAULT_MAX_MONOMIALS).unwrap()).collect())
}

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

fn point(seed: &[(i64, i64)], dim: usize) -> Vec<Rational> {
    (0..dim).map(|i| {
        let (p, q) = seed[i % seed.len()];
        rat(p + i as i64 % 3, q)
    }).collect()
}

fn rationals() -> impl Strategy<Value = Vec<(i64, i64)>> {
    proptest::collection::vec((-6i64..=6, 1i64..=4), 1..=12)
}

/// Independent positive three-term check: for `S` of size k-2 and
/// `i<j<l<m` outside `S`, `P_{Sil} + P_{Sjm} = min(P_{Sij} + P_{Slm}, P_{Sim} + P_{Sjl})`.
fn three_term_holds(w: &WeightVector) -> bool {
    let (k, n) = (w.k(), w.n());
    let get = |s: &[usize], a: usize, b: usize| {
        let mut v: Vec<usize> = s.to_vec();
        v.push(a);
        v.push(b);
        v.sort();
        w.get(&v).clone()
    };
    let bases: Vec<Vec<usize>> = if k == 2 { vec![vec![]] } else { k_subsets(n, k - 2) };
    for s in &bases {
        let rest: Vec<usize> = (1..=n).filter(|x| !s.contains(x)).collect();
        for quad in k_subsets(rest.len(), 4) {
            let [i, j, l, m] = [rest[quad[0] - 1], rest[quad[1] - 1], rest[quad[2] - 1], rest[quad[3] - 1]];
            let lhs = get(s, i, l) + get(s, j, m);
            let a = get(s, i, j) + get(s, l, m);
            let b = get(s, i, m) + get(s, j, l);
            if lhs != a.min(b) {
                return false;
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homogeneous(which in 0..SHAPES.len(), seed in rationals(), t in (0i64..=5, 1i64..=3), pick in any::<prop::sample::Index>()) {
        let m = &models()[which];
        let y = point(&seed, m.dim());
        let t = rat(t.0, t.1);
        let ty: Vec<Rational> = y.iter().map(|v| v * &t).collect();
        let subsets = k_subsets(m.n(), m.k());
        let j = pick.get(&subsets);
        prop_assert_eq!(m.trop_plucker(j, &ty).unwrap(), &t * m.trop_plucker(j, &y).unwrap());
    }

    #[test]
    fn superadditive_and_monotone(which in 0..SHAPES.len(), a in rationals(), b in rationals(), bump in proptest::collection::vec(0i64..=3, 1..=12)) {
        let m = &models()[which];
        let y1 = point(&a, m.dim());
        let y2 = point(&b, m.dim());
        let sum: Vec<Rational> = y1.iter().zip(&y2).map(|(p, q)| p + q).collect();
        let up: Vec<Rational> = y1.iter().enumerate().map(|(i, v)| v + rat(bump[i % bump.len()], 1)).collect();
        for j in k_subsets(m.n(), m.k()) {
            let p1 = m.trop_plucker(&j, &y1).unwrap();
            let p2 = m.trop_plucker(&j, &y2).unwrap();
            prop_assert!(m.trop_plucker(&j, &sum).unwrap() >= &p1 + &p2);
            prop_assert!(m.trop_plucker(&j, &up).unwrap() >= p1);
        }
    }

    #[test]
    fn weights_of_tableaux_in_positive_dressian(which in 0..SHAPES.len(), cols in proptest::collection::vec(any::<prop::sample::Index>(), 0..=3)) {
        let m = &models()[which];
        let (k, n) = (m.k(), m.n());
        let all = k_subsets(n, k);
        let t = cols.iter().fold(Tableau::empty(k, n).unwrap(), |t, i| {
            t.union(&Tableau::column(k, n, i.get(&all)).unwrap()).unwrap()
        });
        let w = m.weight_of(&t).unwrap();
        prop_assert_eq!(w.len(), all.len());
        prop_assert!(w.is_integral());
        prop_assert!(w.values().iter().all(|v| *v >= Rational::zero()));
        prop_assert!(three_term_holds(&w));
        prop_assert!(three_term_violations(&w).is_empty());
        let text = serde_json::to_string(&w).unwrap();
        prop_assert_eq!(WeightVector::from_json(k, n, &text).unwrap(), w);
    }
}

#[test]
fn exponent_sets_canonical() {
    for m in models() {
        for e in m.minors() {
            let terms = e.terms();
            assert!(!terms.is_empty());
            assert!(terms.windows(2).all(|w| w[0].0 < w[1].0), "exponents sorted and distinct");
            assert!(terms.iter().all(|(exp, coeff)| exp.len() == m.dim() && *coeff > 0));
        }
    }
}

#[test]
fn three_term_oracle_detects_violations() {
    // a generic weight on Δ(2,4) fails the positive relation
    let w = WeightVector::from_integers(2, 4, &[0, 1, 0, 0, 0, 0]).unwrap();
    assert!(!three_term_holds(&w));
    assert!(!three_term_violations(&w).is_empty());
}

#[test]
fn cached_model_matches_fresh_build() {
    let dir = tempfile::tempdir().unwrap();
    let cache = WebCache::new(dir.path().to_path_buf());
    let (cold, _) = cache.get_or_build(3, 7, DEFAULT_MAX_MONOMIALS).unwrap();
    let (warm, _) = cache.get_or_build(3, 7, DEFAULT_MAX_MONOMIALS).unwrap();
    let fresh = WebModel::build(3, 7, DEFAULT_MAX_MONOMIALS).unwrap();
    let t = Tableau::parse("1,3;4,5;6,7", 3, 7).unwrap();
    assert_eq!(cold.weight_of(&t).unwrap(), fresh.weight_of(&t).unwrap());
    assert_eq!(warm.weight_of(&t).unwrap(), fresh.weight_of(&t).unwrap());
    assert_eq!(warm.minors(), fresh.minors());
}
