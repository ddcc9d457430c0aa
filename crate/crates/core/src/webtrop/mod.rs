//! Tropical Plücker coordinates of the web matrix and tableau weights.
//!
//! Convention: min-plus. `P_J(y) = min_m ⟨exponent(m), y⟩` over the
//! monomials of the minor `p_J`; subdivisions are taken from lower faces.

mod cache;
pub mod network;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

pub use cache::{CacheEntry, CacheEvent, WebCache, CACHE_FORMAT_VERSION, CACHE_DIR_ENV};

use crate::subsets;
use crate::tableaux::{Tableau, TableauError};
use crate::Rational;

#[derive(Debug, thiserror::Error)]
pub enum WebError {
    #[error("invalid shape k={k}, n={n}: need 1 <= k < n <= 32")]
    Shape { k: usize, n: usize },
    #[error(
        "expansion of the web model for (k,n)=({k},{n}) exceeded the monomial budget \
         ({monomials} > {cap}); raise --max-monomials"
    )]
    Budget { k: usize, n: usize, monomials: u64, cap: u64 },
    #[error("coefficient overflow during minor expansion")]
    CoefficientOverflow,
    #[error("minor p_{{{subset}}} is not subtraction-free after expansion")]
    NotSubtractionFree { subset: String },
    #[error("evaluation point has length {found}, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("{0:?} is not a {1}-subset of [{2}]")]
    BadSubset(Vec<usize>, usize, usize),
    #[error("tableau shape (k,n)=({0},{1}) does not match the model ({2},{3})")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("weight vector has length {found}, expected C(n,k) = {expected}")]
    WeightLength { expected: usize, found: usize },
    #[error("cannot parse weight entry {0:?}")]
    WeightEntry(String),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error("cache i/o error at {path}: {source}")]
    CacheIo { path: String, source: std::io::Error },
    #[error("cache file {path} is malformed: {reason}")]
    CacheFormat { path: String, reason: String },
}

/// Default monomial cap for [`WebModel::build`].
pub const DEFAULT_MAX_MONOMIALS: u64 = 20_000_000;

/// Monomials of one Plücker minor: distinct exponent vectors with positive
/// coefficients, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSet {
    terms: Vec<(Vec<u8>, u64)>,
}

impl ExponentSet {
    pub fn new(mut terms: Vec<(Vec<u8>, u64)>) -> Option<Self> {
        terms.sort();
        let distinct = terms.windows(2).all(|w| w[0].0 != w[1].0);
        let positive = terms.iter().all(|(_, c)| *c > 0);
        (distinct && positive && !terms.is_empty()).then_some(ExponentSet { terms })
    }

    pub fn terms(&self) -> &[(Vec<u8>, u64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Min-plus evaluation at an integer point.
    pub fn eval_int(&self, y: &[i64]) -> i64 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().zip(y).map(|(&a, &b)| a as i64 * b).sum::<i64>())
            .min()
            .expect("nonempty")
    }

    /// Min-plus evaluation at a rational point.
    pub fn eval(&self, y: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, _)| {
                e.iter()
                    .zip(y)
                    .filter(|(a, _)| **a != 0)
                    .fold(Rational::zero(), |acc, (&a, b)| acc + b * Rational::from_integer(BigInt::from(a)))
            })
            .min()
            .expect("nonempty")
    }
}

/// The web matrix model for `(k, n)`: one exponent set per k-subset, in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WebModel {
    k: usize,
    n: usize,
    minors: Vec<ExponentSet>,
}

impl WebModel {
    /// Expands all `C(n, k)` minors of the web matrix.
    pub fn build(k: usize, n: usize, max_monomials: u64) -> Result<Self, WebError> {
        if k == 0 || k >= n || n > 32 {
            return Err(WebError::Shape { k, n });
        }
        let polys = network::expand_minors(k, n, max_monomials)?;
        let mut minors = Vec::with_capacity(polys.len());
        for (subset, poly) in subsets::k_subsets(n, k).iter().zip(polys) {
            let terms: Option<Vec<(Vec<u8>, u64)>> = poly
                .into_iter()
                .map(|(e, c)| u64::try_from(c).ok().filter(|&c| c > 0).map(|c| (e, c)))
                .collect();
            let set = terms
                .and_then(ExponentSet::new)
                .ok_or_else(|| WebError::NotSubtractionFree { subset: subsets::render(subset) })?;
            minors.push(set);
        }
        Ok(WebModel { k, n, minors })
    }

    pub(crate) fn from_parts(k: usize, n: usize, minors: Vec<ExponentSet>) -> Self {
        WebModel { k, n, minors }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension `(k-1)(n-k)` of the parameter space.
    pub fn dim(&self) -> usize {
        (self.k - 1) * (self.n - self.k)
    }

    pub fn minors(&self) -> &[ExponentSet] {
        &self.minors
    }

    pub fn minor(&self, subset: &[usize]) -> Result<&ExponentSet, WebError> {
        self.check_subset(subset)?;
        Ok(&self.minors[subsets::lex_rank(self.n, subset)])
    }

    fn check_subset(&self, subset: &[usize]) -> Result<(), WebError> {
        let ok = subset.len() == self.k
            && subset.windows(2).all(|w| w[0] < w[1])
            && subset.iter().all(|&x| (1..=self.n).contains(&x));
        if ok {
            Ok(())
        } else {
            Err(WebError::BadSubset(subset.to_vec(), self.k, self.n))
        }
    }

    /// `P_J(y)`.
    pub fn trop_plucker(&self, subset: &[usize], y: &[Rational]) -> Result<Rational, WebError> {
        if y.len() != self.dim() {
            return Err(WebError::Dimension { expected: self.dim(), found: y.len() });
        }
        Ok(self.minor(subset)?.eval(y))
    }

    /// `F_{k,n}(y) = (P_J(y))_J` in lexicographic order.
    pub fn evaluate(&self, y: &[Rational]) -> Result<WeightVector, WebError> {
        if y.len() != self.dim() {
            return Err(WebError::Dimension { expected: self.dim(), found: y.len() });
        }
        let values = self.minors.iter().map(|m| m.eval(y)).collect();
        Ok(WeightVector { k: self.k, n: self.n, values })
    }

    /// `F_{k,n}` at an integer point.
    pub fn evaluate_int(&self, y: &[i64]) -> Result<WeightVector, WebError> {
        if y.len() != self.dim() {
            return Err(WebError::Dimension { expected: self.dim(), found: y.len() });
        }
        let values = self
            .minors
            .iter()
            .map(|m| Rational::from_integer(BigInt::from(m.eval_int(y))))
            .collect();
        Ok(WeightVector { k: self.k, n: self.n, values })
    }

    /// `wt_T = (P_J(v_T))_J`.
    pub fn weight_of(&self, t: &Tableau) -> Result<WeightVector, WebError> {
        if t.k() != self.k || t.n() != self.n {
            return Err(WebError::ShapeMismatch(t.k(), t.n(), self.k, self.n));
        }
        let dec = t.fundamental_decomposition()?;
        let v: Vec<i64> = dec.v().iter().map(|&c| c as i64).collect();
        self.evaluate_int(&v)
    }
}

/// A height per k-subset of `[n]`, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector {
    k: usize,
    n: usize,
    values: Vec<Rational>,
}

impl WeightVector {
    pub fn new(k: usize, n: usize, values: Vec<Rational>) -> Result<Self, WebError> {
        if k == 0 || k > n || n > 32 {
            return Err(WebError::Shape { k, n });
        }
        let expected = subsets::binomial(n, k) as usize;
        if values.len() != expected {
            return Err(WebError::WeightLength { expected, found: values.len() });
        }
        Ok(WeightVector { k, n, values })
    }

    pub fn from_integers(k: usize, n: usize, values: &[i64]) -> Result<Self, WebError> {
        Self::new(k, n, values.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect())
    }

    pub fn zero(k: usize, n: usize) -> Result<Self, WebError> {
        Self::new(k, n, vec![Rational::zero(); subsets::binomial(n, k) as usize])
    }

    /// Parses a JSON array of numbers or `"p/q"` strings.
    pub fn from_json(k: usize, n: usize, text: &str) -> Result<Self, WebError> {
        let raw: Vec<serde_json::Value> =
            serde_json::from_str(text).map_err(|e| WebError::WeightEntry(e.to_string()))?;
        let values = raw.iter().map(parse_entry).collect::<Result<Vec<_>, _>>()?;
        Self::new(k, n, values)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, subset: &[usize]) -> &Rational {
        &self.values[subsets::lex_rank(self.n, subset)]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    /// Integer values, if all entries are integral and fit in `i64`.
    pub fn to_integers(&self) -> Option<Vec<i64>> {
        self.values
            .iter()
            .map(|v| {
                if v.is_integer() {
                    i64::try_from(v.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn add(&self, other: &WeightVector) -> WeightVector {
        assert_eq!((self.k, self.n), (other.k, other.n), "weight shapes differ");
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        WeightVector { k: self.k, n: self.n, values }
    }

    pub fn scale(&self, t: &Rational) -> WeightVector {
        let values = self.values.iter().map(|a| a * t).collect();
        WeightVector { k: self.k, n: self.n, values }
    }

    /// Adds the affine function `B ↦ ⟨λ, e_B⟩ + c`.
    pub fn add_affine(&self, lambda: &[Rational], c: &Rational) -> WeightVector {
        let values = subsets::k_subsets(self.n, self.k)
            .iter()
            .zip(&self.values)
            .map(|(b, v)| b.iter().fold(v + c, |acc, &i| acc + &lambda[i - 1]))
            .collect();
        WeightVector { k: self.k, n: self.n, values }
    }
}

/// Renders an exact rational as an integer or `"p/q"`.
pub fn rational_to_json(x: &Rational) -> serde_json::Value {
    if x.is_integer() {
        if let Ok(v) = i64::try_from(x.to_integer()) {
            return serde_json::Value::from(v);
        }
    }
    serde_json::Value::from(x.to_string())
}

fn parse_entry(v: &serde_json::Value) -> Result<Rational, WebError> {
    match v {
        serde_json::Value::Number(num) => num
            .as_i64()
            .map(|i| Rational::from_integer(BigInt::from(i)))
            .ok_or_else(|| WebError::WeightEntry(num.to_string())),
        serde_json::Value::String(s) => parse_rational(s).ok_or_else(|| WebError::WeightEntry(s.clone())),
        other => Err(WebError::WeightEntry(other.to_string())),
    }
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            (!q.is_zero()).then(|| Rational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.values.len()))?;
        for v in &self.values {
            seq.serialize_element(&rational_to_json(v))?;
        }
        seq.end()
    }
}

/// Deserializes a bare JSON array; `k` and `n` are inferred from the length
/// only when unambiguous, so prefer [`WeightVector::from_json`].
impl<'de> Deserialize<'de> for WeightVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            k: usize,
            n: usize,
            values: Vec<serde_json::Value>,
        }
        let r = Repr::deserialize(deserializer)?;
        let values = r.values.iter().map(parse_entry).collect::<Result<Vec<_>, _>>().map_err(de::Error::custom)?;
        WeightVector::new(r.k, r.n, values).map_err(de::Error::custom)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

/// A failed positive tropical three-term relation
/// `P_{Sil} + P_{Sjm} = min(P_{Sij} + P_{Slm}, P_{Sim} + P_{Sjl})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThreeTermViolation {
    pub base: Vec<usize>,
    pub quad: [usize; 4],
}

/// Checks every positive tropical three-term Plücker relation.
pub fn three_term_violations(w: &WeightVector) -> Vec<ThreeTermViolation> {
    let (k, n) = (w.k, w.n);
    let mut out = Vec::new();
    if k < 2 || n < k + 2 {
        return out;
    }
    let p = |base: &[usize], a: usize, b: usize| {
        let mut s = base.to_vec();
        s.push(a);
        s.push(b);
        s.sort_unstable();
        w.get(&s).clone()
    };
    for base in subsets::k_subsets(n, k - 2) {
        let rest: Vec<usize> = (1..=n).filter(|x| !base.contains(x)).collect();
        for quad in subsets::k_subsets(rest.len(), 4) {
            let [i, j, l, m] = [rest[quad[0] - 1], rest[quad[1] - 1], rest[quad[2] - 1], rest[quad[3] - 1]];
            let lhs = p(&base, i, l) + p(&base, j, m);
            let a = p(&base, i, j) + p(&base, l, m);
            let b = p(&base, i, m) + p(&base, j, l);
            if lhs != a.min(b) {
                out.push(ThreeTermViolation { base: base.clone(), quad: [i, j, l, m] });
            }
        }
    }
    out
}

/// `true` if the weight satisfies all positive three-term relations.
pub fn in_positive_dressian(w: &WeightVector) -> bool {
    three_term_violations(w).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> Rational {
        Rational::from_integer(BigInt::from(x))
    }

    #[test]
    fn trivial_model() {
        let m = WebModel::build(1, 2, DEFAULT_MAX_MONOMIALS).unwrap();
        assert_eq!(m.dim(), 0);
        assert_eq!(m.minors().len(), 2);
        for minor in m.minors() {
            assert_eq!(minor.terms(), &[(vec![], 1)]);
        }
        assert_eq!(m.trop_plucker(&[1], &[]).unwrap(), q(0));
    }

    #[test]
    fn trop_examples() {
        let m = WebModel::build(2, 5, DEFAULT_MAX_MONOMIALS).unwrap();
        assert_eq!(m.trop_plucker(&[2, 3], &[q(1), q(0), q(0)]).unwrap(), q(1));
        assert_eq!(m.trop_plucker(&[1, 4], &[q(0), q(0), q(0)]).unwrap(), q(0));
        assert!(matches!(m.trop_plucker(&[2, 3], &[q(1)]), Err(WebError::Dimension { .. })));
        let m = WebModel::build(3, 7, DEFAULT_MAX_MONOMIALS).unwrap();
        let mut y = vec![q(0); 8];
        y[3] = q(1);
        assert_eq!(m.trop_plucker(&[5, 6, 7], &y).unwrap(), q(1));
    }

    #[test]
    fn printed_fixtures() {
        let m = WebModel::build(2, 5, DEFAULT_MAX_MONOMIALS).unwrap();
        let cases: [(&str, [i64; 10]); 5] = [
            ("1;3", [0, 0, 0, 0, 1, 0, 0, 0, 0, 0]),
            ("1;4", [0, 0, 0, 0, 1, 1, 0, 1, 0, 0]),
            ("2;4", [0, 0, 0, 0, 0, 0, 0, 1, 0, 0]),
            ("2;5", [0, 0, 0, 0, 0, 0, 0, 1, 1, 1]),
            ("3;5", [0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
        ];
        for (text, expected) in cases {
            let t = Tableau::parse(text, 2, 5).unwrap();
            assert_eq!(m.weight_of(&t).unwrap().to_integers().unwrap(), expected, "{text}");
        }
        let m = WebModel::build(3, 7, DEFAULT_MAX_MONOMIALS).unwrap();
        let t1 = Tableau::parse("3;4;7", 3, 7).unwrap();
        let t2 = Tableau::parse("4;6;7", 3, 7).unwrap();
        let mut w1 = vec![0i64; 35];
        for i in [12, 13, 14, 22, 23, 24, 28, 29, 30, 31, 32, 33] {
            w1[i] = 1;
        }
        w1[34] = 2;
        let mut w2 = vec![0i64; 35];
        w2[34] = 1;
        let a = m.weight_of(&t1).unwrap();
        let b = m.weight_of(&t2).unwrap();
        assert_eq!(a.to_integers().unwrap(), w1);
        assert_eq!(b.to_integers().unwrap(), w2);
        assert_eq!(m.weight_of(&t1.union(&t2).unwrap()).unwrap(), a.add(&b));
    }

    #[test]
    fn weight_json() {
        let w = WeightVector::new(2, 4, vec![q(0), q(1), Rational::new(BigInt::from(1), BigInt::from(2)), q(0), q(0), q(-3)])
            .unwrap();
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"[0,1,"1/2",0,0,-3]"#);
        assert_eq!(WeightVector::from_json(2, 4, &s).unwrap(), w);
        assert!(matches!(WeightVector::from_json(2, 5, &s), Err(WebError::WeightLength { .. })));
    }

    #[test]
    fn three_term_on_split() {
        let m = WebModel::build(2, 5, DEFAULT_MAX_MONOMIALS).unwrap();
        let w = m.evaluate_int(&[1, 0, 0]).unwrap();
        assert!(in_positive_dressian(&w));
        // a crossing weight that is not in the positive Dressian
        let mut bad = vec![0i64; 10];
        bad[subsets::lex_rank(5, &[1, 3])] = 1;
        let bad = WeightVector::from_integers(2, 5, &bad).unwrap();
        assert!(!in_positive_dressian(&bad));
    }
}
