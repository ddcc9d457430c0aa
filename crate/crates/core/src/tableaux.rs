//! Rectangular semistandard Young tableaux with `k` rows and entries in `[n]`.
//!
//! A [`Tableau`] is stored by its rows (weakly increasing multisets of equal
//! length); its columns are read off by position. Rows determine the tableau,
//! so equality of tableaux is row equality, and the positional columns are
//! automatically in lexicographic order.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::subsets;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableauError {
    #[error("invalid shape k={k}, n={n}: need 1 <= k <= n")]
    Shape { k: usize, n: usize },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("row {row} has {found} entries but row 1 has {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("row {row}, column {col}: cannot parse entry {text:?}")]
    BadEntry { row: usize, col: usize, text: String },
    #[error("row {row}, column {col}: entry {value} outside [1, {n}]")]
    OutOfRange { row: usize, col: usize, value: usize, n: usize },
    #[error("row {row} is not weakly increasing at column {col}")]
    RowNotIncreasing { row: usize, col: usize },
    #[error("column {col} is not strictly increasing at row {row}")]
    ColumnNotIncreasing { col: usize, row: usize },
    #[error("{col:?} is not a strictly increasing {k}-subset of [{n}]")]
    BadColumn { col: Vec<usize>, k: usize, n: usize },
    #[error("shape mismatch: (k,n)=({k1},{n1}) vs ({k2},{n2})")]
    Mismatch { k1: usize, n1: usize, k2: usize, n2: usize },
    #[error("not a factor: row {row} of the divisor is not contained in the dividend")]
    NotFactor { row: usize },
    #[error("quotient is not semistandard: column {col} fails at row {row}")]
    QuotientNotSemistandard { col: usize, row: usize },
    #[error("operation requires k = 2, got k = {k}")]
    RequiresK2 { k: usize },
    #[error("fundamental decomposition of {tableau:?} is not equivalent to it")]
    DecompositionInconsistent { tableau: String },
    #[error("no pairwise weakly separated column decomposition exists")]
    NotDecomposable,
    #[error("column search exceeded {cap} candidates")]
    SearchBudget { cap: u64 },
}

type Result<T> = std::result::Result<T, TableauError>;

/// A rectangular semistandard tableau. The empty tableau is the unit `𝟙`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TableauRepr", into = "TableauRepr")]
pub struct Tableau {
    k: usize,
    n: usize,
    rows: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TableauRepr {
    k: usize,
    n: usize,
    columns: Vec<Vec<usize>>,
}

impl TryFrom<TableauRepr> for Tableau {
    type Error = TableauError;
    fn try_from(r: TableauRepr) -> Result<Self> {
        Tableau::from_columns(r.k, r.n, r.columns)
    }
}

impl From<Tableau> for TableauRepr {
    fn from(t: Tableau) -> Self {
        TableauRepr { k: t.k, n: t.n, columns: t.columns() }
    }
}

fn check_shape(k: usize, n: usize) -> Result<()> {
    if k == 0 || n < k || n > 32 {
        return Err(TableauError::Shape { k, n });
    }
    Ok(())
}

fn check_column(col: &[usize], k: usize, n: usize) -> Result<()> {
    let ok = col.len() == k
        && col.windows(2).all(|w| w[0] < w[1])
        && col.iter().all(|&x| (1..=n).contains(&x));
    if ok {
        Ok(())
    } else {
        Err(TableauError::BadColumn { col: col.to_vec(), k, n })
    }
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// `a \ b` as sorted multisets, or `None` when `b` is not contained in `a`.
fn remove_sorted(a: &[usize], b: &[usize]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(a.len());
    let mut j = 0;
    for &x in a {
        if j < b.len() && b[j] == x {
            j += 1;
        } else if j < b.len() && b[j] < x {
            return None;
        } else {
            out.push(x);
        }
    }
    (j == b.len()).then_some(out)
}

fn multiplicity(row: &[usize], value: usize) -> usize {
    let lo = row.partition_point(|&x| x < value);
    let hi = row.partition_point(|&x| x <= value);
    hi - lo
}

impl Tableau {
    /// The empty tableau `𝟙` of shape `(k, n)`.
    pub fn empty(k: usize, n: usize) -> Result<Self> {
        check_shape(k, n)?;
        Ok(Tableau { k, n, rows: vec![Vec::new(); k] })
    }

    /// Builds a tableau from positional rows (top to bottom), validating the
    /// semistandard conditions.
    pub fn from_rows(k: usize, n: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        check_shape(k, n)?;
        if rows.len() != k {
            return Err(TableauError::RowCount { expected: k, found: rows.len() });
        }
        let width = rows[0].len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(TableauError::Ragged { row: r + 1, expected: width, found: row.len() });
            }
            for (c, &x) in row.iter().enumerate() {
                if !(1..=n).contains(&x) {
                    return Err(TableauError::OutOfRange { row: r + 1, col: c + 1, value: x, n });
                }
                if c > 0 && row[c - 1] > x {
                    return Err(TableauError::RowNotIncreasing { row: r + 1, col: c + 1 });
                }
            }
        }
        for c in 0..width {
            for r in 1..k {
                if rows[r - 1][c] >= rows[r][c] {
                    return Err(TableauError::ColumnNotIncreasing { col: c + 1, row: r + 1 });
                }
            }
        }
        Ok(Tableau { k, n, rows })
    }

    /// The union of the given one-column tableaux.
    pub fn from_columns(k: usize, n: usize, columns: Vec<Vec<usize>>) -> Result<Self> {
        check_shape(k, n)?;
        let mut rows = vec![Vec::with_capacity(columns.len()); k];
        for col in &columns {
            check_column(col, k, n)?;
            for (r, &x) in col.iter().enumerate() {
                rows[r].push(x);
            }
        }
        for row in &mut rows {
            row.sort_unstable();
        }
        Tableau::from_rows(k, n, rows)
    }

    pub fn column(k: usize, n: usize, col: &[usize]) -> Result<Self> {
        Tableau::from_columns(k, n, vec![col.to_vec()])
    }

    /// Parses the row-list text format: rows top to bottom separated by `;`,
    /// entries separated by `,`. Blank text is the empty tableau.
    pub fn parse(text: &str, k: usize, n: usize) -> Result<Self> {
        check_shape(k, n)?;
        let text = text.trim();
        if text.is_empty() {
            return Tableau::empty(k, n);
        }
        let raw_rows: Vec<&str> = text.split(';').collect();
        if raw_rows.len() != k {
            return Err(TableauError::RowCount { expected: k, found: raw_rows.len() });
        }
        let mut rows = Vec::with_capacity(k);
        for (r, raw) in raw_rows.iter().enumerate() {
            let raw = raw.trim();
            let mut row = Vec::new();
            if !raw.is_empty() {
                for (c, tok) in raw.split(',').enumerate() {
                    let tok = tok.trim();
                    let value = tok.parse::<usize>().map_err(|_| TableauError::BadEntry {
                        row: r + 1,
                        col: c + 1,
                        text: tok.to_string(),
                    })?;
                    row.push(value);
                }
            }
            rows.push(row);
        }
        Tableau::from_rows(k, n, rows)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of columns.
    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.width() == 0
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Positional columns, left to right (lexicographically sorted).
    pub fn columns(&self) -> Vec<Vec<usize>> {
        (0..self.width())
            .map(|c| self.rows.iter().map(|row| row[c]).collect())
            .collect()
    }

    fn same_shape(&self, other: &Tableau) -> Result<()> {
        if self.k != other.k || self.n != other.n {
            return Err(TableauError::Mismatch { k1: self.k, n1: self.n, k2: other.k, n2: other.n });
        }
        Ok(())
    }

    /// Row-wise multiset union `S ∪ T`.
    pub fn union(&self, other: &Tableau) -> Result<Tableau> {
        self.same_shape(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| merge_sorted(a, b))
            .collect();
        Tableau::from_rows(self.k, self.n, rows)
    }

    /// `T^{∪m}`.
    pub fn power(&self, m: usize) -> Tableau {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut r: Vec<usize> = row.iter().flat_map(|&x| std::iter::repeat_n(x, m)).collect();
                r.sort_unstable();
                r
            })
            .collect();
        Tableau { k: self.k, n: self.n, rows }
    }

    /// Whether `self` is a factor of `of` (row multisets contained).
    pub fn is_factor_of(&self, of: &Tableau) -> bool {
        self.k == of.k
            && self.n == of.n
            && self.rows.iter().zip(&of.rows).all(|(a, b)| remove_sorted(b, a).is_some())
    }

    /// `T / S` for a factor `S` of `T`.
    pub fn quotient(&self, divisor: &Tableau) -> Result<Tableau> {
        self.same_shape(divisor)?;
        let mut rows = Vec::with_capacity(self.k);
        for (r, (a, b)) in self.rows.iter().zip(&divisor.rows).enumerate() {
            rows.push(remove_sorted(a, b).ok_or(TableauError::NotFactor { row: r + 1 })?);
        }
        Tableau::from_rows(self.k, self.n, rows).map_err(|e| match e {
            TableauError::ColumnNotIncreasing { col, row } => {
                TableauError::QuotientNotSemistandard { col, row }
            }
            other => other,
        })
    }

    /// Every column consists of consecutive integers.
    pub fn is_trivial(&self) -> bool {
        self.columns().iter().all(|c| c.windows(2).all(|w| w[1] == w[0] + 1))
    }

    /// The maximal trivial factor. Trivial columns `[a, a+k-1]` with different
    /// `a` touch disjoint values in every row, so the multiplicity of each
    /// start value is independently `min_i mult(a+i-1, row i)`.
    pub fn maximal_trivial_factor(&self) -> Tableau {
        let mut columns = Vec::new();
        for a in 1..=self.n + 1 - self.k {
            let m = (0..self.k)
                .map(|i| multiplicity(&self.rows[i], a + i))
                .min()
                .unwrap_or(0);
            for _ in 0..m {
                columns.push((a..a + self.k).collect());
            }
        }
        Tableau::from_columns(self.k, self.n, columns).expect("trivial columns are valid")
    }

    /// `T_red`: `T` with its maximal trivial factor removed. Idempotent.
    pub fn reduce(&self) -> Tableau {
        let trivial = self.maximal_trivial_factor();
        if trivial.is_empty() {
            return self.clone();
        }
        // removing a trivial column keeps columns strictly increasing
        self.quotient(&trivial).expect("maximal trivial factor divides T")
    }

    /// `S ∼ T` iff `S_red = T_red`. Tableaux of different shape are never
    /// equivalent.
    pub fn equivalent(&self, other: &Tableau) -> bool {
        self.k == other.k && self.n == other.n && self.reduce() == other.reduce()
    }

    /// `(S, m)` with `T = S^{∪m}` and `m` maximal. The empty tableau gives
    /// `(𝟙, 1)`.
    pub fn root(&self) -> (Tableau, usize) {
        let mut g = 0usize;
        for row in &self.rows {
            let mut i = 0;
            while i < row.len() {
                let m = multiplicity(row, row[i]);
                g = num_integer::gcd(g, m);
                i += m;
            }
        }
        if g <= 1 {
            return (self.clone(), 1);
        }
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().step_by(g).copied().collect())
            .collect();
        (Tableau { k: self.k, n: self.n, rows }, g)
    }

    /// Factorization into fundamental tableaux, as the multiplicity matrix
    /// `c(i, j)`. Each column `a_1 < ... < a_k` contributes one to `c(i, j)`
    /// for `j ∈ [a_i - i + 1, a_{i+1} - i - 1]`; the result is checked to be
    /// `∼`-equivalent to `self`.
    pub fn fundamental_decomposition(&self) -> Result<FundamentalDecomposition> {
        let (k, n) = (self.k, self.n);
        let width = n - k;
        let mut counts = vec![0u64; (k - 1) * width];
        for col in self.columns() {
            for i in 1..k {
                let lo = col[i - 1] + 1 - i;
                let hi = col[i] - i - 1;
                for j in lo..=hi {
                    counts[(i - 1) * width + (j - 1)] += 1;
                }
            }
        }
        let dec = FundamentalDecomposition { k, n, counts };
        if !dec.to_tableau().equivalent(self) {
            return Err(TableauError::DecompositionInconsistent { tableau: self.to_string() });
        }
        Ok(dec)
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return Ok(());
        }
        let rows: Vec<String> = self.rows.iter().map(|r| subsets::render(r)).collect();
        write!(f, "{}", rows.join(";"))
    }
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tableau(k={}, n={}, \"{}\")", self.k, self.n, self)
    }
}

/// The fundamental tableau `T_{i,j}` with entries `[j, j+k] \ {i+j}`.
pub fn fundamental_tableau(i: usize, j: usize, k: usize, n: usize) -> Result<Tableau> {
    if i == 0 || i >= k || j == 0 || j > n - k {
        return Err(TableauError::Shape { k, n });
    }
    let col: Vec<usize> = (j..=j + k).filter(|&x| x != i + j).collect();
    Tableau::column(k, n, &col)
}

/// Multiplicities `c(i, j)` of fundamental tableaux, `(i, j) ∈ [k-1] × [n-k]`,
/// flattened row-major into `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalDecomposition {
    k: usize,
    n: usize,
    counts: Vec<u64>,
}

impl FundamentalDecomposition {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self, i: usize, j: usize) -> u64 {
        self.counts[(i - 1) * (self.n - self.k) + (j - 1)]
    }

    /// The vector `v_T`.
    pub fn v(&self) -> &[u64] {
        &self.counts
    }

    /// Nonzero entries as `((i, j), c(i, j))`.
    pub fn support(&self) -> BTreeMap<(usize, usize), u64> {
        let width = self.n - self.k;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(idx, &c)| ((idx / width + 1, idx % width + 1), c))
            .collect()
    }

    /// The small-gap tableau `∪ T_{i,j}^{∪c(i,j)}`.
    pub fn to_tableau(&self) -> Tableau {
        let (k, n) = (self.k, self.n);
        let mut columns = Vec::new();
        for ((i, j), c) in self.support() {
            let col: Vec<usize> = (j..=j + k).filter(|&x| x != i + j).collect();
            for _ in 0..c {
                columns.push(col.clone());
            }
        }
        Tableau::from_columns(k, n, columns).expect("fundamental columns are valid")
    }
}

/// Tag of a single column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColumnClass {
    /// Consecutive entries `[a, a+k-1]`.
    Trivial,
    /// A cyclic interval that wraps past `n`.
    FrozenWrap,
    /// `[j, j+k] \ {i+j}`.
    Fundamental { i: usize, j: usize },
    Generic,
}

impl fmt::Display for ColumnClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnClass::Trivial => f.write_str("trivial"),
            ColumnClass::FrozenWrap => f.write_str("frozen-wrap"),
            ColumnClass::Fundamental { i, j } => write!(f, "fundamental({i};{j})"),
            ColumnClass::Generic => f.write_str("generic"),
        }
    }
}

pub fn classify_column(col: &[usize], k: usize, n: usize) -> Result<ColumnClass> {
    check_shape(k, n)?;
    check_column(col, k, n)?;
    if col.windows(2).all(|w| w[1] == w[0] + 1) {
        return Ok(ColumnClass::Trivial);
    }
    if subsets::cyclic_blocks(col, n) == 1 {
        return Ok(ColumnClass::FrozenWrap);
    }
    let j = col[0];
    if col[k - 1] == j + k {
        // exactly one value of [j, j+k] is missing
        let missing = (j..=j + k).find(|x| col.binary_search(x).is_err());
        if let Some(m) = missing {
            return Ok(ColumnClass::Fundamental { i: m - j, j });
        }
    }
    Ok(ColumnClass::Generic)
}

/// Whether the entries of `col` form a cyclic interval of `[n]`.
pub fn is_frozen_column(col: &[usize], n: usize) -> bool {
    subsets::cyclic_blocks(col, n) == 1
}

/// `A` and `B` are weakly separated: `A \ B` and `B \ A` do not interleave
/// cyclically.
pub fn weakly_separated(a: &[usize], b: &[usize]) -> bool {
    let ma = subsets::mask(a);
    let mb = subsets::mask(b);
    let mut labels = Vec::new();
    for x in 0..32 {
        let bit = 1u32 << x;
        match (ma & bit != 0, mb & bit != 0) {
            (true, false) => labels.push(true),
            (false, true) => labels.push(false),
            _ => {}
        }
    }
    // cyclic run count; interleaving means at least four runs
    let changes = (0..labels.len())
        .filter(|&t| labels[t] != labels[(t + 1) % labels.len()])
        .count();
    changes <= 2
}

/// Whether the one-column subset has exactly two maximal cyclic blocks.
pub fn one_cyclic_gap(col: &[usize], n: usize) -> bool {
    subsets::cyclic_blocks(col, n) == 2
}

/// For `k = 2`: `T` is a single column `{a, b}` that is not a cyclic interval.
pub fn nonfrozen_prime_k2(t: &Tableau) -> Result<bool> {
    if t.k != 2 {
        return Err(TableauError::RequiresK2 { k: t.k });
    }
    if t.width() != 1 {
        return Ok(false);
    }
    Ok(!is_frozen_column(&t.columns()[0], t.n))
}

/// Result of [`ws_column_decomposition`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WsDecomposition {
    /// Columns of the lexicographically first decomposition.
    pub columns: Vec<Vec<usize>>,
    /// Whether the exhaustive search found no other decomposition.
    pub unique: bool,
}

/// Default candidate cap for [`ws_column_decomposition`].
pub const WS_SEARCH_CAP: u64 = 1_000_000;

/// Splits `T` into one-column tableaux that are pairwise weakly separated
/// and whose union is `T`, by exhaustive search over row matchings.
pub fn ws_column_decomposition(t: &Tableau, cap: u64) -> Result<WsDecomposition> {
    struct Search {
        k: usize,
        remaining: Vec<BTreeMap<usize, usize>>,
        chosen: Vec<Vec<usize>>,
        solutions: Vec<Vec<Vec<usize>>>,
        visited: u64,
        cap: u64,
        width: usize,
    }

    impl Search {
        fn run(&mut self) -> Result<()> {
            if self.solutions.len() >= 2 {
                return Ok(());
            }
            if self.chosen.len() == self.width {
                self.solutions.push(self.chosen.clone());
                return Ok(());
            }
            let first = *self.remaining[0].keys().next().expect("rows not exhausted");
            let mut col = vec![first];
            self.extend(&mut col)
        }

        fn extend(&mut self, col: &mut Vec<usize>) -> Result<()> {
            self.visited += 1;
            if self.visited > self.cap {
                return Err(TableauError::SearchBudget { cap: self.cap });
            }
            let r = col.len();
            if r == self.k {
                if let Some(last) = self.chosen.last() {
                    if col.as_slice() < last.as_slice() {
                        return Ok(());
                    }
                }
                if !self.chosen.iter().all(|c| weakly_separated(c, col)) {
                    return Ok(());
                }
                for (i, &x) in col.iter().enumerate() {
                    take(&mut self.remaining[i], x);
                }
                self.chosen.push(col.clone());
                self.run()?;
                self.chosen.pop();
                for (i, &x) in col.iter().enumerate() {
                    *self.remaining[i].entry(x).or_insert(0) += 1;
                }
                return Ok(());
            }
            let prev = col[r - 1];
            let options: Vec<usize> = self.remaining[r].range(prev + 1..).map(|(&x, _)| x).collect();
            for x in options {
                col.push(x);
                self.extend(col)?;
                col.pop();
            }
            Ok(())
        }
    }

    fn take(m: &mut BTreeMap<usize, usize>, x: usize) {
        let c = m.get_mut(&x).expect("value present");
        *c -= 1;
        if *c == 0 {
            m.remove(&x);
        }
    }

    if t.is_empty() {
        return Ok(WsDecomposition { columns: Vec::new(), unique: true });
    }
    let remaining = t
        .rows
        .iter()
        .map(|row| {
            let mut m = BTreeMap::new();
            for &x in row {
                *m.entry(x).or_insert(0) += 1;
            }
            m
        })
        .collect();
    let mut s = Search {
        k: t.k,
        remaining,
        chosen: Vec::new(),
        solutions: Vec::new(),
        visited: 0,
        cap,
        width: t.width(),
    };
    s.run()?;
    let unique = s.solutions.len() == 1;
    let columns = s.solutions.into_iter().next().ok_or(TableauError::NotDecomposable)?;
    Ok(WsDecomposition { columns, unique })
}
