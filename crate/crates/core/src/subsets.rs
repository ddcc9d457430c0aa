//! k-subsets of `[n] = {1, ..., n}` in lexicographic order.
//!
//! Subsets are stored as strictly increasing `Vec<usize>` with 1-based
//! entries; bitmasks use bit `i - 1` for element `i`.

/// All k-subsets of `[n]` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(cur.clone());
        // rightmost position that can still be advanced
        let mut pos = k;
        while pos > 0 && cur[pos - 1] == n - k + pos {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        cur[pos - 1] += 1;
        for t in pos..k {
            cur[t] = cur[t - 1] + 1;
        }
    }
    out
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Position of `subset` in [`k_subsets`]`(n, subset.len())`.
pub fn lex_rank(n: usize, subset: &[usize]) -> usize {
    let k = subset.len();
    let mut rank = 0u64;
    let mut prev = 0;
    for (pos, &x) in subset.iter().enumerate() {
        for skipped in prev + 1..x {
            rank += binomial(n - skipped, k - pos - 1);
        }
        prev = x;
    }
    rank as usize
}

pub fn mask(subset: &[usize]) -> u32 {
    subset.iter().fold(0u32, |m, &x| m | (1 << (x - 1)))
}

pub fn from_mask(m: u32) -> Vec<usize> {
    (0..32).filter(|b| m & (1 << b) != 0).map(|b| b + 1).collect()
}

/// Renders a subset as `"1,3,4"`.
pub fn render(subset: &[usize]) -> String {
    subset
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses `"1,3,4"` into a subset; entries must be strictly increasing.
pub fn parse(text: &str) -> Option<Vec<usize>> {
    let v: Vec<usize> = text
        .split(',')
        .map(|t| t.trim().parse().ok())
        .collect::<Option<_>>()?;
    if v.windows(2).all(|w| w[0] < w[1]) && v.first().is_none_or(|&x| x >= 1) {
        Some(v)
    } else {
        None
    }
}

/// The cyclic interval `{start, start+1, ..., start+len-1}` modulo `n`, sorted.
pub fn cyclic_interval(n: usize, start: usize, len: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..len).map(|t| (start - 1 + t) % n + 1).collect();
    v.sort_unstable();
    v
}

/// All proper nonempty cyclic intervals of `[n]`, each listed once.
pub fn cyclic_intervals(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for len in 1..n {
        for start in 1..=n {
            out.push(cyclic_interval(n, start, len));
        }
    }
    out
}

/// Number of maximal cyclic blocks of `subset` inside `Z/n`.
///
/// The empty set has zero blocks and the full set one.
pub fn cyclic_blocks(subset: &[usize], n: usize) -> usize {
    if subset.is_empty() {
        return 0;
    }
    if subset.len() == n {
        return 1;
    }
    let m = mask(subset);
    // count elements whose cyclic predecessor is absent
    subset
        .iter()
        .filter(|&&x| {
            let pred = if x == 1 { n } else { x - 1 };
            m & (1 << (pred - 1)) == 0
        })
        .count()
}
