//! Exact and log-space counting of binary words by dyadic-pair statistics.
//!
//! A length-n word is summarized by `(ones, pairs)` where `ones` is its
//! digit-1 count and `pairs` counts positions `k` with `2k <= n` and bits
//! `k` and `2k` both 1. Because the pair constraint only links positions
//! inside one dyadic chain, the joint tally factors over the chain
//! decomposition and is computed by dynamic programming along chains:
//! exactly with big integers, or in log space (natural log) for word
//! lengths where exact tables are impractical.
//!
//! Windowed level-set counts at large n avoid materializing the full
//! table: an exponentially tilted pass recenters the count distribution on
//! the requested window, so cells there are computed to near machine
//! precision while irrelevant far tails underflow harmlessly.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::chains::{chains, decompose};
use crate::spectra::binary_entropy;

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

/// Largest n accepted by exact-mode profile matrices (memory guard).
pub const EXACT_MODE_MAX_N: u32 = 1 << 12;

/// Largest n accepted by the brute-force enumeration oracle.
pub const BRUTE_FORCE_MAX_N: u32 = 22;

/// Largest n for which `level_set_count` in log mode materializes the
/// full matrix; above this a windowed tilted pass is used instead.
pub const FULL_LOG_WINDOW_MAX_N: u32 = 1024;

/// Largest n accepted by `count_a` / `count_b` (the exact integers grow
/// linearly in n; use `counting_growth_rate` beyond this).
pub const EXACT_COUNT_MAX_N: u64 = 1 << 24;

/// Slack coefficient on epsilon in `cover_bound`. Chosen generously; the
/// bound is an envelope, not a sharp constant.
pub const COVER_EPS_COEFF: f64 = 8.0;

/// Slack coefficient on `2^-m` in `cover_bound`.
pub const COVER_DEPTH_COEFF: f64 = 2.0;

#[derive(Debug, Error)]
pub enum CountError {
    #[error("length must be >= 1")]
    ZeroLength,
    #[error("exact mode supports n <= {max}; n = {n} requires log-space mode", max = EXACT_MODE_MAX_N)]
    ExactOverflow { n: u32 },
    #[error("brute-force enumeration supports n <= {max}, got {n}", max = BRUTE_FORCE_MAX_N)]
    BruteForceTooLarge { n: u32 },
    #[error("exact counts support n <= {max}, got {n}; use counting_growth_rate", max = EXACT_COUNT_MAX_N)]
    CountTooLarge { n: u64 },
    #[error("binomial requires k <= n, got k = {k}, n = {n}")]
    BinomialDomain { n: u64, k: u64 },
    #[error("cover bound requires N > m >= 1, got N = {n_exp}, m = {m}")]
    CoverDomain { n_exp: u32, m: u32 },
    #[error("cover bound requires epsilon in (0, 1/2), got {0}")]
    CoverEpsilon(f64),
    #[error("alpha = {0} > 1/2: the normal level set is empty in this regime")]
    EmptySetRegime(f64),
    #[error("alpha must be >= 0, got {0}")]
    NegativeAlpha(f64),
    #[error(
        "window is below the resolution of the tilted pass at n = {n}; \
             narrow the window or use a full matrix"
    )]
    WindowResolution { n: u32 },
    #[error(transparent)]
    Chain(#[from] crate::chains::ChainError),
}

// ---------------------------------------------------------------------------
// Scalar helpers: stable log-sum-exp, log-gamma, Fibonacci
// ---------------------------------------------------------------------------

/// log(exp(a) + exp(b)) without overflow; NEG_INFINITY encodes zero.
#[inline]
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a >= b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

/// Two-pass log-sum-exp over a slice, in a fixed order.
pub fn log_sum(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = values.iter().map(|&v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Natural log of a positive big integer, accurate to ~1e-15 relative.
pub fn log_biguint(value: &BigCount) -> f64 {
    if value.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = value.bits();
    if bits <= 64 {
        let small: u64 = value.iter_u64_digits().next().unwrap_or(0);
        return (small as f64).ln();
    }
    // Keep the top 64 bits as a float mantissa, track the shift exactly.
    let shift = bits - 64;
    let top: BigUint = value >> shift;
    let mantissa: u64 = top.iter_u64_digits().next().unwrap();
    (mantissa as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Lanczos log-gamma (g = 7, 9 terms), |rel err| < 1e-13 for x >= 1.
fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507343278686905,
        -0.13857109526572012,
        9.984_369_578_019_572e-6,
        1.5056327351493116e-7,
    ];
    debug_assert!(x > 0.0);
    let x = x - 1.0;
    let mut acc = 0.999_999_999_999_809_9;
    for (i, &c) in COEFFS.iter().enumerate() {
        acc += c / (x + (i + 1) as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Fibonacci with Fib(1) = Fib(2) = 1. Valid up to k = 92 in u64.
pub fn fib(k: u32) -> u64 {
    assert!(
        (1..=92).contains(&k),
        "fib index {k} out of supported 1..=92"
    );
    let (mut a, mut b) = (1u64, 1u64); // Fib(1), Fib(2)
    for _ in 2..k {
        let next = a + b;
        a = b;
        b = next;
    }
    if k == 1 {
        1
    } else {
        b
    }
}

// ---------------------------------------------------------------------------
// Chain profiles
// ---------------------------------------------------------------------------

/// Joint tally of the `2^L` binary strings of length L by
/// `(ones, adjacent 11 pairs)`. Adjacency is along the chain, i.e. the
/// pair statistic of a single chain of length L.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainProfile {
    length: u32,
    coefficients: BTreeMap<(u32, u32), BigCount>,
}

impl ChainProfile {
    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn coefficient(&self, ones: u32, pairs: u32) -> BigCount {
        self.coefficients
            .get(&(ones, pairs))
            .cloned()
            .unwrap_or_else(BigCount::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), &BigCount)> {
        self.coefficients.iter().map(|(&k, v)| (k, v))
    }

    pub fn total(&self) -> BigCount {
        self.coefficients.values().sum()
    }
}

/// Tally all length-L strings by (ones, adjacent-11 pairs) via a DP over
/// positions with the last bit as state — never by enumeration.
pub fn chain_profile(length: u32) -> Result<ChainProfile, CountError> {
    if length == 0 {
        return Err(CountError::ZeroLength);
    }
    // state[last_bit] : map (ones, pairs) -> count
    let mut ending0: BTreeMap<(u32, u32), BigCount> = BTreeMap::new();
    let mut ending1: BTreeMap<(u32, u32), BigCount> = BTreeMap::new();
    ending0.insert((0, 0), BigCount::one());
    ending1.insert((1, 0), BigCount::one());
    for _ in 1..length {
        let mut next0: BTreeMap<(u32, u32), BigCount> = BTreeMap::new();
        let mut next1: BTreeMap<(u32, u32), BigCount> = BTreeMap::new();
        for ((ones, pairs), count) in ending0.iter().chain(ending1.iter()) {
            let slot = next0.entry((*ones, *pairs)).or_insert_with(BigCount::zero);
            *slot += count;
        }
        for ((ones, pairs), count) in &ending0 {
            let slot = next1
                .entry((ones + 1, *pairs))
                .or_insert_with(BigCount::zero);
            *slot += count;
        }
        for ((ones, pairs), count) in &ending1 {
            let slot = next1
                .entry((ones + 1, pairs + 1))
                .or_insert_with(BigCount::zero);
            *slot += count;
        }
        ending0 = next0;
        ending1 = next1;
    }
    let mut coefficients = ending0;
    for (key, count) in ending1 {
        let slot = coefficients.entry(key).or_insert_with(BigCount::zero);
        *slot += count;
    }
    Ok(ChainProfile {
        length,
        coefficients,
    })
}

// ---------------------------------------------------------------------------
// Profile matrices
// ---------------------------------------------------------------------------

/// Count representation of a profile matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    /// Arbitrary-precision integer entries.
    Exact,
    /// f64 natural-log entries, NEG_INFINITY for zero.
    LogSpace,
}

enum ProfileData {
    Exact(Vec<BigCount>),
    Log(Vec<f64>),
}

/// Joint tally of all length-n words by `(ones, pairs)`:
/// `ones` in `0..=n`, `pairs` in `0..=n/2`.
pub struct ProfileMatrix {
    n: u32,
    cols: usize,
    data: ProfileData,
}

/// A level-set count: exact integer or natural-log value.
#[derive(Debug, Clone, PartialEq)]
pub enum LevelSetCount {
    Exact(BigCount),
    Log(f64),
}

impl LevelSetCount {
    /// Natural log of the count (NEG_INFINITY for zero).
    pub fn log_value(&self) -> f64 {
        match self {
            LevelSetCount::Exact(c) => log_biguint(c),
            LevelSetCount::Log(l) => *l,
        }
    }
}

impl ProfileMatrix {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mode(&self) -> CountMode {
        match self.data {
            ProfileData::Exact(_) => CountMode::Exact,
            ProfileData::Log(_) => CountMode::LogSpace,
        }
    }

    /// Number of pair columns, `n/2 + 1`.
    pub fn pair_columns(&self) -> u32 {
        self.cols as u32
    }

    #[inline]
    fn index(&self, ones: u32, pairs: u32) -> Option<usize> {
        if ones > self.n || pairs as usize >= self.cols {
            return None;
        }
        Some(ones as usize * self.cols + pairs as usize)
    }

    /// Exact entry; zero when out of range. Panics in log mode.
    pub fn entry_exact(&self, ones: u32, pairs: u32) -> BigCount {
        match &self.data {
            ProfileData::Exact(cells) => self
                .index(ones, pairs)
                .map(|i| cells[i].clone())
                .unwrap_or_else(BigCount::zero),
            ProfileData::Log(_) => panic!("entry_exact called on a log-space matrix"),
        }
    }

    /// Natural-log entry in either mode; NEG_INFINITY when zero or out of
    /// range.
    pub fn entry_log(&self, ones: u32, pairs: u32) -> f64 {
        match &self.data {
            ProfileData::Exact(cells) => self
                .index(ones, pairs)
                .map(|i| log_biguint(&cells[i]))
                .unwrap_or(f64::NEG_INFINITY),
            ProfileData::Log(cells) => self
                .index(ones, pairs)
                .map(|i| cells[i])
                .unwrap_or(f64::NEG_INFINITY),
        }
    }

    /// Sum of all entries (exact mode).
    pub fn total_exact(&self) -> BigCount {
        match &self.data {
            ProfileData::Exact(cells) => cells.iter().sum(),
            ProfileData::Log(_) => panic!("total_exact called on a log-space matrix"),
        }
    }

    /// Log-sum of all entries, valid in either mode.
    pub fn total_log(&self) -> f64 {
        match &self.data {
            ProfileData::Exact(cells) => log_biguint(&cells.iter().sum::<BigCount>()),
            ProfileData::Log(cells) => log_sum(cells),
        }
    }

    /// Sum entries over the inclusive window rectangle. Empty or inverted
    /// windows give zero.
    pub fn window_sum(&self, ones_window: (u32, u32), pairs_window: (u32, u32)) -> LevelSetCount {
        let (o_lo, o_hi) = ones_window;
        let (p_lo, p_hi) = pairs_window;
        let o_hi = o_hi.min(self.n);
        let p_hi = (p_hi as usize).min(self.cols - 1) as u32;
        match &self.data {
            ProfileData::Exact(cells) => {
                let mut total = BigCount::zero();
                let mut ones = o_lo;
                while ones <= o_hi {
                    let row = ones as usize * self.cols;
                    let mut pairs = p_lo;
                    while pairs <= p_hi {
                        total += &cells[row + pairs as usize];
                        pairs += 1;
                    }
                    ones += 1;
                }
                LevelSetCount::Exact(total)
            }
            ProfileData::Log(cells) => {
                if o_lo > o_hi || p_lo > p_hi {
                    return LevelSetCount::Log(f64::NEG_INFINITY);
                }
                let mut max = f64::NEG_INFINITY;
                for ones in o_lo..=o_hi {
                    let row = ones as usize * self.cols;
                    for pairs in p_lo..=p_hi {
                        max = max.max(cells[row + pairs as usize]);
                    }
                }
                if max == f64::NEG_INFINITY {
                    return LevelSetCount::Log(f64::NEG_INFINITY);
                }
                let mut sum = 0.0;
                for ones in o_lo..=o_hi {
                    let row = ones as usize * self.cols;
                    for pairs in p_lo..=p_hi {
                        let v = cells[row + pairs as usize];
                        if v > f64::NEG_INFINITY {
                            sum += (v - max).exp();
                        }
                    }
                }
                LevelSetCount::Log(max + sum.ln())
            }
        }
    }

    /// CSV dump: header `ones,pairs,count` (exact) or
    /// `ones,pairs,log_count` (log space); only nonzero cells, row-major.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        match &self.data {
            ProfileData::Exact(cells) => {
                writeln!(out, "ones,pairs,count")?;
                for ones in 0..=self.n {
                    let row = ones as usize * self.cols;
                    for pairs in 0..self.cols {
                        let cell = &cells[row + pairs];
                        if !cell.is_zero() {
                            writeln!(out, "{ones},{pairs},{cell}")?;
                        }
                    }
                }
            }
            ProfileData::Log(cells) => {
                writeln!(out, "ones,pairs,log_count")?;
                for ones in 0..=self.n {
                    let row = ones as usize * self.cols;
                    for pairs in 0..self.cols {
                        let cell = cells[row + pairs];
                        if cell > f64::NEG_INFINITY {
                            writeln!(out, "{ones},{pairs},{cell}")?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// JSON value: `{n, mode, entries: [{ones, pairs, count|log_count}]}`
    /// with exact counts serialized as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct ExactEntry {
            ones: u32,
            pairs: u32,
            count: String,
        }
        #[derive(Serialize)]
        struct LogEntry {
            ones: u32,
            pairs: u32,
            log_count: f64,
        }
        match &self.data {
            ProfileData::Exact(cells) => {
                let mut entries = Vec::new();
                for ones in 0..=self.n {
                    let row = ones as usize * self.cols;
                    for pairs in 0..self.cols {
                        let cell = &cells[row + pairs];
                        if !cell.is_zero() {
                            entries.push(ExactEntry {
                                ones,
                                pairs: pairs as u32,
                                count: cell.to_string(),
                            });
                        }
                    }
                }
                serde_json::json!({ "n": self.n, "mode": "exact", "entries": entries })
            }
            ProfileData::Log(cells) => {
                let mut entries = Vec::new();
                for ones in 0..=self.n {
                    let row = ones as usize * self.cols;
                    for pairs in 0..self.cols {
                        let cell = cells[row + pairs];
                        if cell > f64::NEG_INFINITY {
                            entries.push(LogEntry {
                                ones,
                                pairs: pairs as u32,
                                log_count: cell,
                            });
                        }
                    }
                }
                serde_json::json!({ "n": self.n, "mode": "log", "entries": entries })
            }
        }
    }
}

// ---------------------------------------------------------------------------
// The chain DP
// ---------------------------------------------------------------------------

/// Cell arithmetic shared by the exact and log-space drivers. Only
/// addition is needed: appending a bit moves mass between cells, it never
/// multiplies counts.
trait ProfileCell: Clone {
    fn cell_zero() -> Self;
    fn cell_one() -> Self;
    fn cell_add(a: &Self, b: &Self) -> Self;
}

impl ProfileCell for BigCount {
    fn cell_zero() -> Self {
        <BigCount as Zero>::zero()
    }
    fn cell_one() -> Self {
        <BigCount as One>::one()
    }
    fn cell_add(a: &Self, b: &Self) -> Self {
        a + b
    }
}

/// f64 in log space: NEG_INFINITY is zero, 0.0 is one.
impl ProfileCell for f64 {
    fn cell_zero() -> Self {
        f64::NEG_INFINITY
    }
    fn cell_one() -> Self {
        0.0
    }
    fn cell_add(a: &Self, b: &Self) -> Self {
        log_add(*a, *b)
    }
}

/// Dense (ones x pairs) plane with per-row occupied column ranges
/// `[lo, hi)`. Cells outside the range always hold zero.
struct Plane<T> {
    cols: usize,
    cells: Vec<T>,
    range: Vec<(u32, u32)>,
}

impl<T: ProfileCell> Plane<T> {
    fn new(rows: usize, cols: usize) -> Self {
        Plane {
            cols,
            cells: vec![T::cell_zero(); rows * cols],
            range: vec![(0, 0); rows],
        }
    }

    #[inline]
    fn row(&self, o: usize) -> &[T] {
        &self.cells[o * self.cols..(o + 1) * self.cols]
    }
}

fn union_range(a: (u32, u32), b: (u32, u32)) -> (u32, u32) {
    let a_empty = a.0 >= a.1;
    let b_empty = b.0 >= b.1;
    match (a_empty, b_empty) {
        (true, true) => (0, 0),
        (true, false) => b,
        (false, true) => a,
        (false, false) => (a.0.min(b.0), a.1.max(b.1)),
    }
}

fn shift_range(r: (u32, u32), by: u32, cap: u32) -> (u32, u32) {
    if r.0 >= r.1 {
        (0, 0)
    } else {
        ((r.0 + by).min(cap), (r.1 + by).min(cap))
    }
}

/// Stale and fresh column ranges of one output row in a DP step.
#[derive(Clone, Copy)]
struct RowSpans {
    old0: (u32, u32),
    new0: (u32, u32),
    old1: (u32, u32),
    new1: (u32, u32),
}

/// One position step of the chain DP.
///
/// State: `cur0` / `cur1` hold the joint tally with the previous position
/// of the *current chain* equal to 0 / 1. Appending the next position:
///
/// - next bit 0: no new one, no new pair, from either state;
/// - next bit 1: one more one; one more pair iff the previous chain bit
///   was 1 *and* this position extends the same chain (`counts_pair`).
///
/// When `counts_pair` is false the step starts a fresh chain head: the
/// fold over the old chain's final bit happens implicitly because both
/// sources are read with the same pair index.
///
/// Rows of the output planes are disjoint, so they are filled by up to
/// `workers` scoped threads; every cell depends only on the previous
/// planes, which makes the result identical for any worker count.
fn dp_step<T: ProfileCell + Send + Sync>(
    cur0: &Plane<T>,
    cur1: &Plane<T>,
    nxt0: &mut Plane<T>,
    nxt1: &mut Plane<T>,
    live_rows: usize,
    counts_pair: bool,
    workers: usize,
) {
    let cols = cur0.cols as u32;
    let pair_shift = u32::from(counts_pair);

    // Range bookkeeping is cheap; do it sequentially up front.
    let mut spans = Vec::with_capacity(live_rows + 1);
    for o in 0..=live_rows {
        let new0 = union_range(cur0.range[o], cur1.range[o]);
        let new1 = if o == 0 {
            (0, 0)
        } else {
            union_range(
                cur0.range[o - 1],
                shift_range(cur1.range[o - 1], pair_shift, cols),
            )
        };
        spans.push(RowSpans {
            old0: nxt0.range[o],
            new0,
            old1: nxt1.range[o],
            new1,
        });
        nxt0.range[o] = new0;
        nxt1.range[o] = new1;
    }

    let row_len = cur0.cols;
    let mut work: Vec<(usize, &mut [T], &mut [T])> = nxt0.cells[..(live_rows + 1) * row_len]
        .chunks_mut(row_len)
        .zip(nxt1.cells[..(live_rows + 1) * row_len].chunks_mut(row_len))
        .enumerate()
        .map(|(o, (row0, row1))| (o, row0, row1))
        .collect();

    let run_chunk = |chunk: &mut [(usize, &mut [T], &mut [T])]| {
        for (o, row0, row1) in chunk.iter_mut() {
            let o = *o;
            let span = spans[o];
            fill_row(row0, span.old0, span.new0, |p| {
                T::cell_add(&cur0.row(o)[p as usize], &cur1.row(o)[p as usize])
            });
            fill_row(row1, span.old1, span.new1, |p| {
                let from0 = &cur0.row(o - 1)[p as usize];
                if p >= pair_shift {
                    T::cell_add(from0, &cur1.row(o - 1)[(p - pair_shift) as usize])
                } else {
                    from0.clone()
                }
            });
        }
    };

    if workers <= 1 || live_rows < 256 {
        run_chunk(&mut work);
    } else {
        let chunk_size = work.len().div_ceil(workers);
        std::thread::scope(|scope| {
            for chunk in work.chunks_mut(chunk_size) {
                scope.spawn(|| run_chunk(chunk));
            }
        });
    }
}

/// Overwrite one row on `new_range` with `value(p)`, clearing stale cells
/// left from two steps ago.
fn fill_row<T: ProfileCell>(
    row: &mut [T],
    old_range: (u32, u32),
    new_range: (u32, u32),
    value: impl Fn(u32) -> T,
) {
    let span = union_range(old_range, new_range);
    for p in span.0..span.1 {
        row[p as usize] = if p >= new_range.0 && p < new_range.1 {
            value(p)
        } else {
            T::cell_zero()
        };
    }
}

/// Run the full chain DP for words of length n and return the folded
/// final plane as a flat row-major vector.
fn run_profile_dp<T: ProfileCell + Send + Sync>(n: u32, workers: usize) -> Vec<T> {
    let rows = n as usize + 1;
    let cols = n as usize / 2 + 1;
    let mut cur0 = Plane::<T>::new(rows, cols);
    let mut cur1 = Plane::<T>::new(rows, cols);
    let mut nxt0 = Plane::<T>::new(rows, cols);
    let mut nxt1 = Plane::<T>::new(rows, cols);
    cur0.cells[0] = T::cell_one();
    cur0.range[0] = (0, 1);

    let mut processed = 0usize;
    for (_head, len) in chains(u64::from(n)) {
        for step in 0..len {
            processed += 1;
            let live = processed.min(rows - 1);
            dp_step(&cur0, &cur1, &mut nxt0, &mut nxt1, live, step > 0, workers);
            std::mem::swap(&mut cur0, &mut nxt0);
            std::mem::swap(&mut cur1, &mut nxt1);
        }
    }

    // Fold the final chain state.
    let mut result = vec![T::cell_zero(); rows * cols];
    for o in 0..rows {
        let span = union_range(cur0.range[o], cur1.range[o]);
        for p in span.0..span.1 {
            result[o * cols + p as usize] =
                T::cell_add(&cur0.row(o)[p as usize], &cur1.row(o)[p as usize]);
        }
    }
    result
}

/// Environment variable capping the worker threads used by the heavy
/// log-space loops. Defaults to the available parallelism.
pub const THREADS_ENV_VAR: &str = "DYADIC_SPECTRA_THREADS";

fn configured_workers() -> usize {
    let default = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let cap = std::env::var(THREADS_ENV_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(default);
    cap.clamp(1, 64).min(default.max(1))
}

/// Build the profile matrix of length-n words.
///
/// Exact mode is limited to n <= 2^12 and its cost grows steeply (the DP
/// touches O(n^3) big-integer cells); log-space mode works for any n the
/// caller can afford, at O(n^3) f64 operations and O(n^2) memory, spread
/// over the configured workers.
pub fn profile_matrix(n: u32, mode: CountMode) -> Result<ProfileMatrix, CountError> {
    if n == 0 {
        return Err(CountError::ZeroLength);
    }
    let cols = n as usize / 2 + 1;
    match mode {
        CountMode::Exact => {
            if n > EXACT_MODE_MAX_N {
                return Err(CountError::ExactOverflow { n });
            }
            // Exact mode stays sequential: schedule independence is by
            // construction and the big-integer sizes dominate anyway.
            let cells = run_profile_dp::<BigCount>(n, 1);
            Ok(ProfileMatrix {
                n,
                cols,
                data: ProfileData::Exact(cells),
            })
        }
        CountMode::LogSpace => {
            let cells = run_profile_dp::<f64>(n, configured_workers());
            Ok(ProfileMatrix {
                n,
                cols,
                data: ProfileData::Log(cells),
            })
        }
    }
}

/// Enumeration oracle: tally all 2^n words directly. Exact mode output,
/// n <= 22.
pub fn brute_force_profile(n: u32) -> Result<ProfileMatrix, CountError> {
    if n == 0 {
        return Err(CountError::ZeroLength);
    }
    if n > BRUTE_FORCE_MAX_N {
        return Err(CountError::BruteForceTooLarge { n });
    }
    let cols = n as usize / 2 + 1;
    let rows = n as usize + 1;
    let mut tallies = vec![0u64; rows * cols];
    for word in 0u32..(1u32 << n) {
        let ones = word.count_ones() as usize;
        let mut pairs = 0usize;
        for k in 1..=(n / 2) {
            if (word >> (k - 1)) & (word >> (2 * k - 1)) & 1 == 1 {
                pairs += 1;
            }
        }
        tallies[ones * cols + pairs] += 1;
    }
    let cells = tallies.into_iter().map(BigCount::from).collect();
    Ok(ProfileMatrix {
        n,
        cols,
        data: ProfileData::Exact(cells),
    })
}

// ---------------------------------------------------------------------------
// Constrained-set counts and growth rate
// ---------------------------------------------------------------------------

/// Number of length-n words with no in-range (k, 2k) pair equal to 11.
///
/// Each chain of length l contributes independently; strings with no
/// adjacent 11 are Fibonacci-counted, so the answer is the product over
/// the histogram of `Fib(l + 2) ^ multiplicity`.
pub fn count_a(n: u64) -> Result<BigCount, CountError> {
    if n == 0 {
        return Err(CountError::ZeroLength);
    }
    if n > EXACT_COUNT_MAX_N {
        return Err(CountError::CountTooLarge { n });
    }
    let decomposition = decompose(n)?;
    let mut total = BigCount::one();
    for (len, mult) in decomposition.iter() {
        total *= BigCount::from(fib(len + 2)).pow(mult.try_into().expect("multiplicity fits u32"));
    }
    Ok(total)
}

/// Number of length-n words with every in-range pair equal: one free bit
/// per chain, so `2 ^ ceil(n / 2)`.
pub fn count_b(n: u64) -> Result<BigCount, CountError> {
    if n == 0 {
        return Err(CountError::ZeroLength);
    }
    if n > EXACT_COUNT_MAX_N {
        return Err(CountError::CountTooLarge { n });
    }
    Ok(<BigCount as One>::one() << n.div_ceil(2))
}

/// `(1/n) * ln count_A(n)` computed from the histogram in log space;
/// works up to n = 2^60.
pub fn counting_growth_rate(n: u64) -> Result<f64, CountError> {
    if n == 0 {
        return Err(CountError::ZeroLength);
    }
    let decomposition = decompose(n)?;
    let mut log_total = 0.0f64;
    for (len, mult) in decomposition.iter() {
        log_total += mult as f64 * (fib(len + 2) as f64).ln();
    }
    Ok(log_total / n as f64)
}

/// Exact natural log of `C(n, k)` via log-gamma.
pub fn log_binomial(n: u64, k: u64) -> Result<f64, CountError> {
    if k > n {
        return Err(CountError::BinomialDomain { n, k });
    }
    if k == 0 || k == n {
        return Ok(0.0);
    }
    Ok(ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0))
}

/// Leading-order upper envelope for the log cylinder count of the
/// normal/pair-window intersection at scale `2^N`:
///
/// `2^(N-1) * (ln 2 + H(2 alpha)) + 2^N * (C1 * eps + C2 * 2^-m)`.
///
/// The slack coefficients are deliberately generous (non-sharp).
pub fn cover_bound(n_exp: u32, m: u32, epsilon: f64, alpha: f64) -> Result<f64, CountError> {
    if m < 1 || n_exp <= m {
        return Err(CountError::CoverDomain { n_exp, m });
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(CountError::CoverEpsilon(epsilon));
    }
    if alpha < 0.0 {
        return Err(CountError::NegativeAlpha(alpha));
    }
    if alpha > 0.5 {
        return Err(CountError::EmptySetRegime(alpha));
    }
    let scale = (n_exp as i32 - 1).min(62);
    let half = 2.0f64.powi(scale);
    let whole = 2.0 * half;
    let entropy_term = binary_entropy(2.0 * alpha).expect("2*alpha in [0,1]");
    let slack = COVER_EPS_COEFF * epsilon + COVER_DEPTH_COEFF * 2.0f64.powi(-(m as i32));
    Ok(half * (std::f64::consts::LN_2 + entropy_term) + whole * slack)
}

// ---------------------------------------------------------------------------
// Windowed level-set counts
// ---------------------------------------------------------------------------

/// Sum the profile matrix over inclusive `(ones, pairs)` windows.
///
/// Exact mode materializes the matrix (n <= 2^12). Log mode materializes
/// it up to n = 1024 and switches to the tilted windowed pass beyond, so
/// window queries stay fast at n = 2^12 and above.
pub fn level_set_count(
    n: u32,
    ones_window: (u32, u32),
    pairs_window: (u32, u32),
    mode: CountMode,
) -> Result<LevelSetCount, CountError> {
    if n == 0 {
        return Err(CountError::ZeroLength);
    }
    if ones_window.0 > ones_window.1 || pairs_window.0 > pairs_window.1 {
        return Ok(match mode {
            CountMode::Exact => LevelSetCount::Exact(<BigCount as Zero>::zero()),
            CountMode::LogSpace => LevelSetCount::Log(f64::NEG_INFINITY),
        });
    }
    match mode {
        CountMode::Exact => {
            let matrix = profile_matrix(n, CountMode::Exact)?;
            Ok(matrix.window_sum(ones_window, pairs_window))
        }
        CountMode::LogSpace => {
            if n <= FULL_LOG_WINDOW_MAX_N {
                let matrix = profile_matrix(n, CountMode::LogSpace)?;
                Ok(matrix.window_sum(ones_window, pairs_window))
            } else {
                windowed_log_level_set_count(n, ones_window, pairs_window).map(LevelSetCount::Log)
            }
        }
    }
}

/// Integer window from a fractional one: `[ceil(lo * scale), floor(hi *
/// scale)]` with a 1e-9 slop so grid arithmetic lands on intended
/// endpoints.
pub fn window_from_fractions(scale: u32, lo: f64, hi: f64) -> (u32, u32) {
    let s = scale as f64;
    let lo_cell = (lo * s - 1e-9).ceil().max(0.0) as u32;
    let hi_cell = (hi * s + 1e-9).floor().min(s) as u32;
    (lo_cell, hi_cell)
}

/// Tilt cap: e^(+-40) per unit of statistic is enough to park the mean at
/// any achievable corner.
const TILT_CAP: f64 = 40.0;

/// Relative floor for tilted cells; cells this far below the running
/// maximum cannot influence the window value and are dropped.
const TILT_FLOOR: f64 = 1e-120;

/// Tilted means of (ones, pairs) for one chain of length `len` under cell
/// weight `exp(l1 * ones + l2 * pairs)`, via a renormalized transfer
/// recursion.
fn chain_tilted_moments(len: u32, l1: f64, l2: f64) -> (f64, f64) {
    let x = l1.exp();
    let y = l2.exp();
    // Weighted sums over strings ending in 0 / 1, with first-order
    // accumulators for ones and pairs.
    let (mut z0, mut z1) = (1.0f64, x);
    let (mut o0, mut o1) = (0.0f64, x); // sum of weight * ones
    let (mut p0, mut p1) = (0.0f64, 0.0f64); // sum of weight * pairs
    for _ in 1..len {
        let nz0 = z0 + z1;
        let nz1 = x * z0 + x * y * z1;
        let no0 = o0 + o1;
        let no1 = x * (o0 + z0) + x * y * (o1 + z1);
        let np0 = p0 + p1;
        let np1 = x * p0 + x * y * (p1 + z1);
        let norm = nz0 + nz1;
        z0 = nz0 / norm;
        z1 = nz1 / norm;
        o0 = no0 / norm;
        o1 = no1 / norm;
        p0 = np0 / norm;
        p1 = np1 / norm;
    }
    let z = z0 + z1;
    ((o0 + o1) / z, (p0 + p1) / z)
}

/// Tilted means of the whole-word statistics, summed over the chain
/// histogram.
fn word_tilted_moments(n: u32, l1: f64, l2: f64) -> (f64, f64) {
    let decomposition = decompose(u64::from(n)).expect("n >= 1");
    let mut ones = 0.0;
    let mut pairs = 0.0;
    for (len, mult) in decomposition.iter() {
        let (o, p) = chain_tilted_moments(len, l1, l2);
        ones += mult as f64 * o;
        pairs += mult as f64 * p;
    }
    (ones, pairs)
}

/// Solve for tilt parameters centering the tilted distribution on the
/// target (ones, pairs) totals. Newton with a finite-difference Jacobian;
/// precision requirements are loose (a few sigma of slack remain).
fn solve_tilt(n: u32, target_ones: f64, target_pairs: f64) -> (f64, f64) {
    let mut l1 = 0.0f64;
    let mut l2 = 0.0f64;
    let tol = 0.01 * (n as f64).sqrt() + 0.5;
    for _ in 0..80 {
        let (mo, mp) = word_tilted_moments(n, l1, l2);
        let f1 = mo - target_ones;
        let f2 = mp - target_pairs;
        if f1.abs() < tol && f2.abs() < tol {
            break;
        }
        let h = 1e-4;
        let (mo_a, mp_a) = word_tilted_moments(n, l1 + h, l2);
        let (mo_b, mp_b) = word_tilted_moments(n, l1, l2 + h);
        let j11 = (mo_a - mo) / h;
        let j12 = (mo_b - mo) / h;
        let j21 = (mp_a - mp) / h;
        let j22 = (mp_b - mp) / h;
        let det = j11 * j22 - j12 * j21;
        if !det.is_finite() || det.abs() < 1e-12 {
            break;
        }
        let d1 = (-f1 * j22 + f2 * j12) / det;
        let d2 = (f1 * j21 - f2 * j11) / det;
        l1 = (l1 + d1.clamp(-2.0, 2.0)).clamp(-TILT_CAP, TILT_CAP);
        l2 = (l2 + d2.clamp(-2.0, 2.0)).clamp(-TILT_CAP, TILT_CAP);
    }
    (l1, l2)
}

/// Linear plane for the tilted pass: thresholded occupied ranges plus the
/// untrimmed structural ranges (what the exact DP would occupy), used to
/// distinguish "count is exactly zero" from "below resolution".
struct TiltedPlane {
    cols: usize,
    cells: Vec<f64>,
    range: Vec<(u32, u32)>,
    structural: Vec<(u32, u32)>,
}

impl TiltedPlane {
    fn new(rows: usize, cols: usize) -> Self {
        TiltedPlane {
            cols,
            cells: vec![0.0; rows * cols],
            range: vec![(0, 0); rows],
            structural: vec![(0, 0); rows],
        }
    }
}

/// Natural log of the window sum of the length-n profile matrix, computed
/// by an exponentially tilted linear DP without materializing the matrix.
///
/// The tilt recenters the count distribution on the window, so window
/// cells carry O(1) relative weight and are exact to ~1e-12; cells more
/// than ~276 nats (1e-120) below the running maximum are truncated. If the
/// requested window cannot be resolved against that floor the function
/// reports `WindowResolution` rather than returning an underestimate.
pub fn windowed_log_level_set_count(
    n: u32,
    ones_window: (u32, u32),
    pairs_window: (u32, u32),
) -> Result<f64, CountError> {
    if n == 0 {
        return Err(CountError::ZeroLength);
    }
    let rows = n as usize + 1;
    let cols = n as usize / 2 + 1;
    let (o_lo, o_hi) = (ones_window.0, ones_window.1.min(n));
    let (p_lo, p_hi) = (pairs_window.0, pairs_window.1.min(cols as u32 - 1));
    if o_lo > o_hi || p_lo > p_hi {
        return Ok(f64::NEG_INFINITY);
    }

    let target_ones = f64::from(o_lo + o_hi) / 2.0;
    let target_pairs = f64::from(p_lo + p_hi) / 2.0;
    let (l1, l2) = solve_tilt(n, target_ones, target_pairs);
    let x = l1.exp();
    let xy = (l1 + l2).exp();

    let mut cur0 = TiltedPlane::new(rows, cols);
    let mut cur1 = TiltedPlane::new(rows, cols);
    let mut nxt0 = TiltedPlane::new(rows, cols);
    let mut nxt1 = TiltedPlane::new(rows, cols);
    cur0.cells[0] = 1.0;
    cur0.range[0] = (0, 1);
    cur0.structural[0] = (0, 1);

    // Exact power-of-two rescaling offset: true cell = cell * 2^offset.
    let mut offset_bits: i64 = 0;
    let mut running_max = 1.0f64;

    let mut processed = 0usize;
    for (_head, len) in chains(u64::from(n)) {
        for step in 0..len {
            processed += 1;
            let live = processed.min(rows - 1);
            let pair_shift = u32::from(step > 0);
            let threshold = running_max * TILT_FLOOR;
            let mut step_max = 0.0f64;

            for o in 0..=live {
                // nxt0 = cur0 + cur1 (same cell)
                let r0 = union_range(cur0.range[o], cur1.range[o]);
                let s0 = union_range(cur0.structural[o], cur1.structural[o]);
                tilted_write(&mut nxt0, o, r0, s0, threshold, &mut step_max, |p| {
                    cur0.cells[o * cols + p as usize] + cur1.cells[o * cols + p as usize]
                });
                // nxt1 = x * cur0[o-1][p] + x*y^shift * cur1[o-1][p-shift]
                let (r1, s1) = if o == 0 {
                    ((0, 0), (0, 0))
                } else {
                    (
                        union_range(
                            cur0.range[o - 1],
                            shift_range(cur1.range[o - 1], pair_shift, cols as u32),
                        ),
                        union_range(
                            cur0.structural[o - 1],
                            shift_range(cur1.structural[o - 1], pair_shift, cols as u32),
                        ),
                    )
                };
                let w1 = if pair_shift == 1 { xy } else { x };
                tilted_write(&mut nxt1, o, r1, s1, threshold, &mut step_max, |p| {
                    let a = x * cur0.cells[(o - 1) * cols + p as usize];
                    if p >= pair_shift {
                        a + w1 * cur1.cells[(o - 1) * cols + (p - pair_shift) as usize]
                    } else {
                        a
                    }
                });
            }

            std::mem::swap(&mut cur0, &mut nxt0);
            std::mem::swap(&mut cur1, &mut nxt1);
            running_max = step_max.max(f64::MIN_POSITIVE);

            // Keep the running maximum near 1 with exact binary rescales.
            if !(1e-150..=1e150).contains(&running_max) {
                let shift = -running_max.log2().round() as i32;
                let factor = 2.0f64.powi(shift);
                offset_bits -= i64::from(shift);
                for plane in [&mut cur0, &mut cur1] {
                    for o in 0..=live {
                        let (lo, hi) = plane.range[o];
                        for p in lo..hi {
                            plane.cells[o * cols + p as usize] *= factor;
                        }
                    }
                }
                running_max *= factor;
            }
        }
    }

    // Fold the final chain state and evaluate the window.
    let floor = running_max * TILT_FLOOR;
    let mut window_logs: Vec<f64> = Vec::new();
    let mut window_peak_rel = 0.0f64;
    let mut structural_hit = false;
    let offset_ln = offset_bits as f64 * std::f64::consts::LN_2;
    for o in o_lo..=o_hi {
        let row = o as usize * cols;
        let r = union_range(cur0.range[o as usize], cur1.range[o as usize]);
        let s = union_range(cur0.structural[o as usize], cur1.structural[o as usize]);
        for p in p_lo..=p_hi {
            if p >= s.0 && p < s.1 {
                structural_hit = true;
            }
            if p >= r.0 && p < r.1 {
                let v = cur0.cells[row + p as usize] + cur1.cells[row + p as usize];
                if v > 0.0 {
                    window_peak_rel = window_peak_rel.max(v / running_max);
                    window_logs.push(v.ln() + offset_ln - l1 * f64::from(o) - l2 * f64::from(p));
                }
            }
        }
    }

    if !structural_hit {
        // The window lies outside the combinatorially reachable cells.
        return Ok(f64::NEG_INFINITY);
    }
    if window_logs.is_empty() || window_peak_rel < floor / running_max * 1e20 {
        return Err(CountError::WindowResolution { n });
    }
    Ok(log_sum(&window_logs))
}

/// Write one row of a tilted plane: fill `new_range`, clear stale cells,
/// then trim both ends against the underflow threshold.
#[allow(clippy::too_many_arguments)]
fn tilted_write(
    plane: &mut TiltedPlane,
    o: usize,
    new_range: (u32, u32),
    structural: (u32, u32),
    threshold: f64,
    step_max: &mut f64,
    value: impl Fn(u32) -> f64,
) {
    let old_range = plane.range[o];
    let span = union_range(old_range, new_range);
    let row = &mut plane.cells[o * plane.cols..(o + 1) * plane.cols];
    let (mut lo, mut hi) = new_range;
    for p in span.0..span.1 {
        if p >= new_range.0 && p < new_range.1 {
            let v = value(p);
            row[p as usize] = v;
        } else {
            row[p as usize] = 0.0;
        }
    }
    // Trim ends below the floor so ranges track the live band.
    while lo < hi && row[lo as usize] < threshold {
        row[lo as usize] = 0.0;
        lo += 1;
    }
    while hi > lo && row[(hi - 1) as usize] < threshold {
        row[(hi - 1) as usize] = 0.0;
        hi -= 1;
    }
    let mut row_max = 0.0f64;
    for p in lo..hi {
        row_max = row_max.max(row[p as usize]);
    }
    *step_max = step_max.max(row_max);
    plane.range[o] = (lo, hi);
    plane.structural[o] = structural;
}
