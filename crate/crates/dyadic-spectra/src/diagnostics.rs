//! Finite-scale diagnostics for normality and level-set membership.
//!
//! The upper-bound combinatorics partition the positions below `2^N` into
//! the sets `R(N, i) = {2^i (2k-1) : k <= 2^(N-i-1)}` (level i = number of
//! factors of two) and each of those into three parts by magnitude:
//! part I below `2^(N-2)`, part II up to `2^(N-1)`, part III the rest.
//! The X-table tallies digit and pair values over these blocks; eight
//! exact identities tie consecutive levels together because doubling maps
//! the parts onto each other.
//!
//! The membership checks are the windowed, finite-data versions of the
//! defining conditions: every block 1-frequency near 1/2 (normality
//! proxy), and every dyadic-scale pair frequency near alpha (level-set
//! proxy). Block frequencies and arithmetic subsequences cover the
//! classical normal-number checks.

use serde::Serialize;
use thiserror::Error;

use crate::word::Word;

#[derive(Debug, Error, PartialEq)]
pub enum DiagnosticsError {
    #[error("word length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("word of length {len} is shorter than the 2^{n_exp} positions required")]
    WordTooShort { len: usize, n_exp: u32 },
    #[error("level i = {i} out of range; need i <= N - 3 = {max}")]
    LevelOutOfRange { i: u32, max: i64 },
    #[error("m = {m} out of range; need 1 <= m <= N - 3 = {max}")]
    DepthOutOfRange { m: u32, max: i64 },
    #[error("block order {0} exceeds the supported maximum 16")]
    BlockOrderTooLarge(u32),
    #[error("block order must be >= 1")]
    BlockOrderZero,
    #[error("word of length {len} has no window of order {order}")]
    NoWindows { len: usize, order: u32 },
    #[error("subsequence stride must be >= 1")]
    StrideZero,
}

/// The three magnitude parts of an R-set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RPart {
    I,
    II,
    III,
}

impl RPart {
    pub const ALL: [RPart; 3] = [RPart::I, RPart::II, RPart::III];

    fn index(self) -> usize {
        match self {
            RPart::I => 0,
            RPart::II => 1,
            RPart::III => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RPart::I => "I",
            RPart::II => "II",
            RPart::III => "III",
        }
    }
}

/// `R(N, i)`: all positions `2^i * odd` below `2^N`, in increasing order.
pub fn r_set_full(n_exp: u32, i: u32) -> Result<Vec<u64>, DiagnosticsError> {
    if i + 1 > n_exp {
        return Err(DiagnosticsError::LevelOutOfRange {
            i,
            max: i64::from(n_exp) - 3,
        });
    }
    let count = 1u64 << (n_exp - i - 1);
    Ok((1..=count).map(|k| (2 * k - 1) << i).collect())
}

/// One part of `R(N, i)`: part I is `R(N-2, i)`, part II is
/// `R(N-1, i) \ R(N-2, i)`, part III is `R(N, i) \ R(N-1, i)`.
/// Requires `i <= N - 3` so all three parts are nonempty.
pub fn r_set(n_exp: u32, i: u32, part: RPart) -> Result<Vec<u64>, DiagnosticsError> {
    if n_exp < 3 || i > n_exp - 3 {
        return Err(DiagnosticsError::LevelOutOfRange {
            i,
            max: i64::from(n_exp) - 3,
        });
    }
    let count = |scale: u32| 1u64 << (scale - i - 1);
    let (k_lo, k_hi) = match part {
        RPart::I => (1, count(n_exp - 2)),
        RPart::II => (count(n_exp - 2) + 1, count(n_exp - 1)),
        RPart::III => (count(n_exp - 1) + 1, count(n_exp)),
    };
    Ok((k_lo..=k_hi).map(|k| (2 * k - 1) << i).collect())
}

/// The X-statistics of a word of length exactly `2^N`.
///
/// `pair(i, k1, k2, part)` counts positions in `R(N, i-1, part)` (part I
/// or II only) whose own bit is k1 and doubled-position bit is k2, for
/// `i = 1..=m`. `marginal(i, k1, part)` counts positions in
/// `R(N, i, part)` with bit k1, for `i = 0..=m` and all three parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XTable {
    n_exp: u32,
    m: u32,
    /// pairs[i-1][2*k1 + k2][part I|II]
    pairs: Vec<[[u64; 2]; 4]>,
    /// marginals[i][k1][part I|II|III]
    marginals: Vec<[[u64; 3]; 2]>,
}

impl XTable {
    pub fn n_exp(&self) -> u32 {
        self.n_exp
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `X^i_{k1 k2, part}` for i in 1..=m; part must be I or II.
    pub fn pair(&self, i: u32, k1: u8, k2: u8, part: RPart) -> u64 {
        assert!(
            i >= 1 && i <= self.m,
            "pair level {i} out of 1..={}",
            self.m
        );
        assert!(
            part != RPart::III,
            "pair statistics exist for parts I and II only"
        );
        self.pairs[(i - 1) as usize][(2 * k1 + k2) as usize][part.index()]
    }

    /// `X^i_{k1, part}` for i in 0..=m.
    pub fn marginal(&self, i: u32, k1: u8, part: RPart) -> u64 {
        assert!(i <= self.m, "marginal level {i} out of 0..={}", self.m);
        self.marginals[i as usize][k1 as usize][part.index()]
    }

    /// The eight exact level-coupling identities, as
    /// `(label, lhs, rhs)` triples for every i in 1..=m.
    pub fn relations(&self) -> Vec<(String, u64, u64)> {
        let mut out = Vec::new();
        for i in 1..=self.m {
            let p = |k1: u8, k2: u8, part: RPart| self.pair(i, k1, k2, part);
            let m_prev = |k1: u8, part: RPart| self.marginal(i - 1, k1, part);
            let m_cur = |k1: u8, part: RPart| self.marginal(i, k1, part);
            // Summing pair counts over the doubled bit recovers the
            // own-bit marginal one level down.
            out.push((
                format!("own-split I bit 1 i={i}"),
                p(1, 0, RPart::I) + p(1, 1, RPart::I),
                m_prev(1, RPart::I),
            ));
            out.push((
                format!("own-split I bit 0 i={i}"),
                p(0, 0, RPart::I) + p(0, 1, RPart::I),
                m_prev(0, RPart::I),
            ));
            out.push((
                format!("own-split II bit 1 i={i}"),
                p(1, 0, RPart::II) + p(1, 1, RPart::II),
                m_prev(1, RPart::II),
            ));
            out.push((
                format!("own-split II bit 0 i={i}"),
                p(0, 0, RPart::II) + p(0, 1, RPart::II),
                m_prev(0, RPart::II),
            ));
            // Summing over the own bit tallies the doubled positions,
            // which land in the parts the doubling map dictates.
            out.push((
                format!("double-image I bit 1 i={i}"),
                p(0, 1, RPart::I) + p(1, 1, RPart::I),
                m_cur(1, RPart::I) + m_cur(1, RPart::II),
            ));
            out.push((
                format!("double-image I bit 0 i={i}"),
                p(0, 0, RPart::I) + p(1, 0, RPart::I),
                m_cur(0, RPart::I) + m_cur(0, RPart::II),
            ));
            out.push((
                format!("double-image II bit 1 i={i}"),
                p(0, 1, RPart::II) + p(1, 1, RPart::II),
                m_cur(1, RPart::III),
            ));
            out.push((
                format!("double-image II bit 0 i={i}"),
                p(0, 0, RPart::II) + p(1, 0, RPart::II),
                m_cur(0, RPart::III),
            ));
        }
        out
    }

    pub fn relations_hold(&self) -> bool {
        self.relations().iter().all(|(_, lhs, rhs)| lhs == rhs)
    }
}

/// Tally the X-statistics of a word of length exactly `2^N` in one pass:
/// each position's level is its number of trailing zero bits, its part is
/// fixed by magnitude.
pub fn x_table(word: &Word, m: u32) -> Result<XTable, DiagnosticsError> {
    let len = word.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(DiagnosticsError::NotPowerOfTwo(len));
    }
    let n_exp = len.trailing_zeros();
    if m < 1 || m + 3 > n_exp {
        return Err(DiagnosticsError::DepthOutOfRange {
            m,
            max: i64::from(n_exp) - 3,
        });
    }
    let mut pairs = vec![[[0u64; 2]; 4]; m as usize];
    let mut marginals = vec![[[0u64; 3]; 2]; m as usize + 1];
    let quarter = len / 4;
    let half = len / 2;
    for pos in 1..=len {
        let level = pos.trailing_zeros();
        let part = if pos <= quarter {
            0
        } else if pos <= half {
            1
        } else {
            2
        };
        let bit = word.bit_u8(pos) as usize;
        if level <= m {
            marginals[level as usize][bit][part] += 1;
        }
        if level < m && part < 2 {
            // pos is in R(N, level, I|II); its pair statistic feeds
            // X^{level+1}. 2*pos <= len is implied by part I|II.
            let k2 = word.bit_u8(2 * pos) as usize;
            pairs[level as usize][2 * bit + k2][part] += 1;
        }
    }
    Ok(XTable {
        n_exp,
        m,
        pairs,
        marginals,
    })
}

/// One frequency block in a membership report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyBlock {
    pub scale: u32,
    pub level: u32,
    pub part: RPart,
    pub ones: u64,
    pub size: u64,
    pub frequency: f64,
}

/// Result of the block-frequency normality proxy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalMembership {
    pub pass: bool,
    /// Scales n actually checked: from N up to log2(word length).
    pub scales_checked: (u32, u32),
    pub epsilon: f64,
    /// Blocks whose 1-frequency left `[1/2 - eps, 1/2 + eps]`.
    pub violations: Vec<FrequencyBlock>,
}

/// Check that in every `R(n, i, part)` block (n from N up to the data
/// horizon, i <= m) the frequency of ones lies within `1/2 +- epsilon`.
///
/// The defining condition quantifies over all n >= N; the check is
/// truncated at `floor(log2(len))` and the truncation is reported in
/// `scales_checked`.
pub fn membership_normal(
    word: &Word,
    n_exp: u32,
    m: u32,
    epsilon: f64,
) -> Result<NormalMembership, DiagnosticsError> {
    let len = word.len();
    if n_exp < 3 || len < (1usize << n_exp) {
        return Err(DiagnosticsError::WordTooShort { len, n_exp });
    }
    let max_scale = usize::BITS - 1 - len.leading_zeros();
    let mut violations = Vec::new();
    for scale in n_exp..=max_scale {
        let depth = m.min(scale - 3);
        for i in 0..=depth {
            for part in RPart::ALL {
                let positions = r_set(scale, i, part).expect("validated scale/level");
                let ones: u64 = positions
                    .iter()
                    .map(|&p| u64::from(word.bit(p as usize)))
                    .sum();
                let size = positions.len() as u64;
                let frequency = ones as f64 / size as f64;
                if (frequency - 0.5).abs() > epsilon {
                    violations.push(FrequencyBlock {
                        scale,
                        level: i,
                        part,
                        ones,
                        size,
                        frequency,
                    });
                }
            }
        }
    }
    Ok(NormalMembership {
        pass: violations.is_empty(),
        scales_checked: (n_exp, max_scale),
        epsilon,
        violations,
    })
}

/// One dyadic scale of the pair-frequency check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairScaleCheck {
    pub scale: u32,
    pub pairs: u64,
    pub slots: u64,
    pub frequency: f64,
    pub pass: bool,
}

/// Result of the pair-frequency membership proxy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairMembership {
    pub pass: bool,
    pub alpha: f64,
    pub epsilon: f64,
    pub scales_checked: (u32, u32),
    pub scales: Vec<PairScaleCheck>,
}

/// Check that at every dyadic scale `2^n` (n from N up to the data
/// horizon) the prefix pair frequency, pairs per `2^(n-1)` slots, lies
/// strictly inside `(alpha - eps, alpha + eps)`.
pub fn membership_pair_freq(
    word: &Word,
    alpha: f64,
    n_exp: u32,
    epsilon: f64,
) -> Result<PairMembership, DiagnosticsError> {
    let len = word.len();
    if n_exp < 1 || len < (1usize << n_exp) {
        return Err(DiagnosticsError::WordTooShort { len, n_exp });
    }
    let max_scale = usize::BITS - 1 - len.leading_zeros();
    let mut scales = Vec::new();
    for scale in n_exp..=max_scale {
        let prefix = 1usize << scale;
        let slots = (prefix / 2) as u64;
        let pairs = word.pair_count_prefix(prefix);
        let frequency = pairs as f64 / slots as f64;
        let pass = frequency > alpha - epsilon && frequency < alpha + epsilon;
        scales.push(PairScaleCheck {
            scale,
            pairs,
            slots,
            frequency,
            pass,
        });
    }
    Ok(PairMembership {
        pass: scales.iter().all(|s| s.pass),
        alpha,
        epsilon,
        scales_checked: (n_exp, max_scale),
        scales,
    })
}

/// Occurrence counting mode for block frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockMode {
    /// Sliding window, the standard normal-number convention.
    Overlapping,
    /// Consecutive disjoint blocks.
    Disjoint,
}

/// Frequencies of all `2^m` blocks of order m in a word.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockFrequencyReport {
    pub order: u32,
    pub mode: BlockMode,
    pub windows: u64,
    /// `counts[b]` for the block whose bits, read left to right, are the
    /// binary digits of b (most significant first).
    pub counts: Vec<u64>,
    pub max_deviation: f64,
}

impl BlockFrequencyReport {
    pub fn frequency(&self, block: u32) -> f64 {
        self.counts[block as usize] as f64 / self.windows as f64
    }

    /// |frequency - 2^-m| for one block.
    pub fn deviation(&self, block: u32) -> f64 {
        (self.frequency(block) - 0.5f64.powi(self.order as i32)).abs()
    }
}

/// Overlapping-occurrence block frequencies (the normal-number default).
pub fn block_frequencies(
    word: &Word,
    order: u32,
) -> Result<BlockFrequencyReport, DiagnosticsError> {
    block_frequencies_with_mode(word, order, BlockMode::Overlapping)
}

pub fn block_frequencies_with_mode(
    word: &Word,
    order: u32,
    mode: BlockMode,
) -> Result<BlockFrequencyReport, DiagnosticsError> {
    if order == 0 {
        return Err(DiagnosticsError::BlockOrderZero);
    }
    if order > 16 {
        return Err(DiagnosticsError::BlockOrderTooLarge(order));
    }
    let len = word.len();
    if len < order as usize {
        return Err(DiagnosticsError::NoWindows { len, order });
    }
    let mask = (1u32 << order) - 1;
    let mut counts = vec![0u64; 1 << order];
    let windows;
    match mode {
        BlockMode::Overlapping => {
            windows = (len - order as usize + 1) as u64;
            let mut value = 0u32;
            for pos in 1..=len {
                value = (value << 1 | u32::from(word.bit(pos))) & mask;
                if pos >= order as usize {
                    counts[value as usize] += 1;
                }
            }
        }
        BlockMode::Disjoint => {
            windows = (len / order as usize) as u64;
            for chunk in 0..windows as usize {
                let mut value = 0u32;
                for j in 1..=order as usize {
                    value = value << 1 | u32::from(word.bit(chunk * order as usize + j));
                }
                counts[value as usize] += 1;
            }
        }
    }
    let uniform = 0.5f64.powi(order as i32);
    let max_deviation = counts
        .iter()
        .map(|&c| (c as f64 / windows as f64 - uniform).abs())
        .fold(0.0, f64::max);
    Ok(BlockFrequencyReport {
        order,
        mode,
        windows,
        counts,
        max_deviation,
    })
}

/// Restrict a word to the arithmetic positions `offset + k * stride`,
/// k = 1, 2, ... (so `(0, 1)` is the word itself).
pub fn arithmetic_subsequence(
    word: &Word,
    offset: usize,
    stride: usize,
) -> Result<Word, DiagnosticsError> {
    if stride == 0 {
        return Err(DiagnosticsError::StrideZero);
    }
    let mut out = Word::empty();
    let mut pos = offset + stride;
    while pos <= word.len() {
        out.push(word.bit(pos));
        pos += stride;
    }
    Ok(out)
}

/// Gap report for the near-normality bound
/// `|X^i_{11,part} - X^i_{00,part}| <= eps * 2^(N-1-i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NnormLevel {
    pub level: u32,
    pub gap_part_i: u64,
    pub gap_part_ii: u64,
    pub bound: f64,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NnormReport {
    pub epsilon: f64,
    pub levels: Vec<NnormLevel>,
    /// Smallest epsilon making every level bound hold.
    pub min_epsilon: f64,
}

/// Evaluate the 11/00 balance gaps of an X-table against
/// `eps * 2^(N-1-i)` and report the smallest epsilon that would pass.
pub fn nnorm_gap(table: &XTable, epsilon: f64) -> NnormReport {
    let mut levels = Vec::new();
    let mut min_epsilon = 0.0f64;
    for i in 1..=table.m() {
        let gap = |part: RPart| {
            table
                .pair(i, 1, 1, part)
                .abs_diff(table.pair(i, 0, 0, part))
        };
        let gap_part_i = gap(RPart::I);
        let gap_part_ii = gap(RPart::II);
        let scale = 2.0f64.powi(table.n_exp() as i32 - 1 - i as i32);
        let bound = epsilon * scale;
        let level_eps = gap_part_i.max(gap_part_ii) as f64 / scale;
        min_epsilon = min_epsilon.max(level_eps);
        levels.push(NnormLevel {
            level: i,
            gap_part_i,
            gap_part_ii,
            bound,
            within: gap_part_i as f64 <= bound && gap_part_ii as f64 <= bound,
        });
    }
    NnormReport {
        epsilon,
        levels,
        min_epsilon,
    }
}
