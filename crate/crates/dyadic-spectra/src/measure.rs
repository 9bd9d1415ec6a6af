//! The telescopic measure family on binary sequences.
//!
//! A marginal `(p0, p1)` on odd positions and a transition row
//! `(p_i0, p_i1)` from position k to position 2k define a product measure
//! over dyadic chains:
//!
//! ```text
//! mu(C_n(w)) = prod_{k <= ceil(n/2)} p_{w(2k-1)} * prod_{k <= floor(n/2)} p_{w(k) w(2k)}
//! ```
//!
//! Positions in different chains are independent; within a chain the bit
//! at 2k depends on the bit at k through the transition row. The family
//! contains the two specializations used throughout:
//!
//! - `from_alpha`: fair odd marginal with transition matrix
//!   `[[2a, 1-2a], [1-2a, 2a]]`, whose typical sequences are normal with
//!   pair frequency a;
//! - `from_theta_alpha`: marginal `(1-p, p)` with rows `(1-p, p)` /
//!   `(1-q, q)` at `p = (2t-a)/(2-t)`, `q = a/t`, whose typical sequences
//!   have digit frequency t and pair frequency a.
//!
//! Everything is deterministic: sampling splits one ChaCha stream per
//! chain head, so a sample of length n is a prefix of the sample of
//! length 2n under the same seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectra::xlnx;
use crate::word::Word;

#[derive(Debug, Error, PartialEq)]
pub enum MeasureError {
    #[error("probability {name} = {value} outside [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },
    #[error("{name} row must sum to 1, got {sum}")]
    RowSum { name: &'static str, sum: f64 },
    #[error("degenerate transition data: |p01 - p11| = 2")]
    DegenerateTransitions,
    #[error("alpha = {0} outside [0, 1/2]; the normal level set is empty beyond 1/2")]
    AlphaOutOfRange(f64),
    #[error("(theta, alpha) = ({theta}, {alpha}) outside alpha <= theta <= (2+alpha)/3: empty level set")]
    ThetaOutsideDomain { theta: f64, alpha: f64 },
    #[error("word must be nonempty")]
    EmptyWord,
    #[error("word length {0} must be even")]
    OddLength(usize),
    #[error("cylinder has measure zero: local entropy is infinite")]
    InfiniteLocalEntropy,
}

/// Tolerance for user-supplied probability rows summing to 1.
const ROW_SUM_TOL: f64 = 1e-9;

/// The six probabilities defining a telescopic measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "RawMeasureParams")]
pub struct MeasureParams {
    p0: f64,
    p1: f64,
    p00: f64,
    p01: f64,
    p10: f64,
    p11: f64,
}

/// Serde mirror without invariants, for JSON interchange.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasureParams {
    p0: f64,
    p1: f64,
    p00: f64,
    p01: f64,
    p10: f64,
    p11: f64,
}

impl From<MeasureParams> for RawMeasureParams {
    fn from(p: MeasureParams) -> Self {
        RawMeasureParams {
            p0: p.p0,
            p1: p.p1,
            p00: p.p00,
            p01: p.p01,
            p10: p.p10,
            p11: p.p11,
        }
    }
}

impl TryFrom<RawMeasureParams> for MeasureParams {
    type Error = MeasureError;
    fn try_from(raw: RawMeasureParams) -> Result<Self, Self::Error> {
        MeasureParams::new(raw.p0, raw.p1, raw.p00, raw.p01, raw.p10, raw.p11)
    }
}

impl<'de> Deserialize<'de> for MeasureParams {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawMeasureParams::deserialize(deserializer)?;
        MeasureParams::try_from(raw).map_err(serde::de::Error::custom)
    }
}

/// Almost-sure digit-1 frequency under the measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Xi(f64);

impl Xi {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Xi> for f64 {
    fn from(xi: Xi) -> f64 {
        xi.0
    }
}

impl MeasureParams {
    pub fn new(
        p0: f64,
        p1: f64,
        p00: f64,
        p01: f64,
        p10: f64,
        p11: f64,
    ) -> Result<Self, MeasureError> {
        for (name, value) in [
            ("p0", p0),
            ("p1", p1),
            ("p00", p00),
            ("p01", p01),
            ("p10", p10),
            ("p11", p11),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(MeasureError::InvalidProbability { name, value });
            }
        }
        for (name, sum) in [
            ("(p0, p1)", p0 + p1),
            ("(p00, p01)", p00 + p01),
            ("(p10, p11)", p10 + p11),
        ] {
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(MeasureError::RowSum { name, sum });
            }
        }
        // Implied by the range checks, but it is the stated nontriviality
        // condition keeping the xi denominator away from zero.
        if ((p01 - p11).abs() - 2.0).abs() < f64::EPSILON {
            return Err(MeasureError::DegenerateTransitions);
        }
        Ok(MeasureParams {
            p0,
            p1,
            p00,
            p01,
            p10,
            p11,
        })
    }

    /// Uniform Bernoulli: every parameter 1/2.
    pub fn uniform() -> Self {
        MeasureParams {
            p0: 0.5,
            p1: 0.5,
            p00: 0.5,
            p01: 0.5,
            p10: 0.5,
            p11: 0.5,
        }
    }

    /// The normal-slice family: fair odd marginal, transition matrix
    /// `[[2a, 1-2a], [1-2a, 2a]]`. Defined for alpha in [0, 1/2]; at 0 it
    /// is supported on the no-11 set, at 1/2 on the equal-pairs set.
    pub fn from_alpha(alpha: f64) -> Result<Self, MeasureError> {
        if !(0.0..=0.5).contains(&alpha) {
            return Err(MeasureError::AlphaOutOfRange(alpha));
        }
        let stay = 2.0 * alpha;
        MeasureParams::new(0.5, 0.5, stay, 1.0 - stay, 1.0 - stay, stay)
    }

    /// The frequency-slice family at digit frequency theta and pair
    /// frequency alpha: `p = (2 theta - alpha)/(2 - theta)`,
    /// `q = alpha / theta`, marginal `(1-p, p)`, rows `(1-p, p)` and
    /// `(1-q, q)`. The admissible domain is `alpha <= theta <= (2 +
    /// alpha)/3`; (0, 0) is the point mass on the all-zeros sequence.
    pub fn from_theta_alpha(theta: f64, alpha: f64) -> Result<Self, MeasureError> {
        if !(0.0..=1.0).contains(&theta)
            || !(0.0..=1.0).contains(&alpha)
            || alpha > theta
            || theta > (2.0 + alpha) / 3.0
        {
            return Err(MeasureError::ThetaOutsideDomain { theta, alpha });
        }
        if theta == 0.0 {
            return MeasureParams::new(1.0, 0.0, 1.0, 0.0, 1.0, 0.0);
        }
        let p = (2.0 * theta - alpha) / (2.0 - theta);
        let q = alpha / theta;
        // Clamp float spill at the domain boundary (p = 1 or q = 1).
        let p = p.clamp(0.0, 1.0);
        let q = q.clamp(0.0, 1.0);
        MeasureParams::new(1.0 - p, p, 1.0 - p, p, 1.0 - q, q)
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }
    pub fn p1(&self) -> f64 {
        self.p1
    }
    pub fn p00(&self) -> f64 {
        self.p00
    }
    pub fn p01(&self) -> f64 {
        self.p01
    }
    pub fn p10(&self) -> f64 {
        self.p10
    }
    pub fn p11(&self) -> f64 {
        self.p11
    }

    /// Almost-sure digit frequency `(p1 + p01) / (2 - p11 + p01)`.
    pub fn xi(&self) -> Xi {
        Xi((self.p1 + self.p01) / (2.0 - self.p11 + self.p01))
    }

    /// Almost-sure pair frequency `xi * p11`.
    pub fn expected_pair_freq(&self) -> f64 {
        self.xi().value() * self.p11
    }

    /// Almost-sure local entropy
    /// `-(1/2) [p0 ln p0 + p1 ln p1 + (1-xi)(p00 ln p00 + p01 ln p01)
    ///          + xi (p10 ln p10 + p11 ln p11)]`
    /// with 0 ln 0 = 0.
    pub fn local_entropy(&self) -> f64 {
        let xi = self.xi().value();
        -0.5 * (xlnx(self.p0)
            + xlnx(self.p1)
            + (1.0 - xi) * (xlnx(self.p00) + xlnx(self.p01))
            + xi * (xlnx(self.p10) + xlnx(self.p11)))
    }

    /// Exact marginal `mu(w(position) = 1)` by iterating the transition
    /// row down the position's chain.
    pub fn marginal_one(&self, position: u64) -> f64 {
        assert!(position >= 1);
        let level = position.trailing_zeros();
        let mut x = self.p1;
        for _ in 0..level {
            x = x * self.p11 + (1.0 - x) * self.p01;
        }
        x
    }

    /// Cylinder measure of the word, as a direct product. Underflows to 0
    /// for very long words; prefer [`MeasureParams::log_cylinder_prob`].
    pub fn cylinder_prob(&self, word: &Word) -> f64 {
        let mut prob = 1.0f64;
        let n = word.len();
        for k in 1..=n.div_ceil(2) {
            prob *= if word.bit(2 * k - 1) {
                self.p1
            } else {
                self.p0
            };
        }
        for k in 1..=n / 2 {
            prob *= self.transition(word.bit(k), word.bit(2 * k));
        }
        prob
    }

    #[inline]
    fn transition(&self, from: bool, to: bool) -> f64 {
        match (from, to) {
            (false, false) => self.p00,
            (false, true) => self.p01,
            (true, false) => self.p10,
            (true, true) => self.p11,
        }
    }

    /// Natural log of the cylinder measure, computed from the six
    /// statistic tallies so very long words neither underflow nor
    /// accumulate rounding. NEG_INFINITY when the cylinder has measure 0.
    pub fn log_cylinder_prob(&self, word: &Word) -> f64 {
        let tallies = WordTallies::of(word);
        let mut log_prob = 0.0f64;
        for (count, p) in [
            (tallies.odd_zeros, self.p0),
            (tallies.odd_ones, self.p1),
            (tallies.n00, self.p00),
            (tallies.n01, self.p01),
            (tallies.n10, self.p10),
            (tallies.n11, self.p11),
        ] {
            if count > 0 {
                if p == 0.0 {
                    return f64::NEG_INFINITY;
                }
                log_prob += count as f64 * p.ln();
            }
        }
        log_prob
    }

    /// `liminf -log mu(C_n) / n` evaluated at this finite word; an error
    /// signals an infinite value (zero-measure cylinder).
    pub fn empirical_local_entropy(&self, word: &Word) -> Result<f64, MeasureError> {
        if word.is_empty() {
            return Err(MeasureError::EmptyWord);
        }
        let log_prob = self.log_cylinder_prob(word);
        if log_prob == f64::NEG_INFINITY {
            return Err(MeasureError::InfiniteLocalEntropy);
        }
        Ok(-log_prob / word.len() as f64)
    }

    /// `log mu(C_2n) - log mu(C_n)` for a word of even length 2n.
    pub fn h_n_increment(&self, word: &Word) -> Result<f64, MeasureError> {
        if word.is_empty() {
            return Err(MeasureError::EmptyWord);
        }
        if !word.len().is_multiple_of(2) {
            return Err(MeasureError::OddLength(word.len()));
        }
        let whole = self.log_cylinder_prob(word);
        let half = self.log_cylinder_prob(&word.prefix(word.len() / 2));
        if whole == f64::NEG_INFINITY || half == f64::NEG_INFINITY {
            return Err(MeasureError::InfiniteLocalEntropy);
        }
        Ok(whole - half)
    }

    /// Draw a length-n word. One ChaCha stream per chain head; the head
    /// bit uses the odd marginal and each doubling step the transition
    /// row, so `sample(n, seed)` is a prefix of `sample(2n, seed)`.
    pub fn sample(&self, n: usize, seed: u64) -> Word {
        let mut word = Word::zeros(n);
        let base = ChaCha12Rng::seed_from_u64(seed);
        for head in (1..=n).step_by(2) {
            let mut rng = base.clone();
            rng.set_stream(head as u64);
            let mut bit = rng.random_bool(self.p1);
            word.set(head, bit);
            let mut pos = head;
            while pos * 2 <= n {
                pos *= 2;
                bit = rng.random_bool(if bit { self.p11 } else { self.p01 });
                word.set(pos, bit);
            }
        }
        word
    }
}

/// The six statistic tallies of a word: odd-position digits and in-range
/// pair values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WordTallies {
    pub odd_zeros: u64,
    pub odd_ones: u64,
    pub n00: u64,
    pub n01: u64,
    pub n10: u64,
    pub n11: u64,
}

impl WordTallies {
    pub fn of(word: &Word) -> Self {
        let n = word.len();
        let mut tallies = WordTallies::default();
        for k in (1..=n).step_by(2) {
            if word.bit(k) {
                tallies.odd_ones += 1;
            } else {
                tallies.odd_zeros += 1;
            }
        }
        for k in 1..=n / 2 {
            match (word.bit(k), word.bit(2 * k)) {
                (false, false) => tallies.n00 += 1,
                (false, true) => tallies.n01 += 1,
                (true, false) => tallies.n10 += 1,
                (true, true) => tallies.n11 += 1,
            }
        }
        tallies
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const LN_2: f64 = std::f64::consts::LN_2;

    fn h(t: f64) -> f64 {
        crate::spectra::binary_entropy(t).unwrap()
    }

    #[test]
    fn from_alpha_examples() {
        let uniform = MeasureParams::from_alpha(0.25).unwrap();
        for v in [
            uniform.p0,
            uniform.p1,
            uniform.p00,
            uniform.p01,
            uniform.p10,
            uniform.p11,
        ] {
            assert_eq!(v, 0.5);
        }
        let supported_on_a = MeasureParams::from_alpha(0.0).unwrap();
        assert_eq!(supported_on_a.p11, 0.0);
        assert_eq!(supported_on_a.p01, 1.0);
        let supported_on_b = MeasureParams::from_alpha(0.5).unwrap();
        assert_eq!(supported_on_b.p11, 1.0);
        assert_eq!(supported_on_b.p01, 0.0);
        assert!(MeasureParams::from_alpha(0.6).is_err());
        assert!(MeasureParams::from_alpha(-0.1).is_err());
    }

    #[test]
    fn from_theta_alpha_examples() {
        let params = MeasureParams::from_theta_alpha(0.5, 0.0).unwrap();
        assert!((params.p01 - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(params.p11, 0.0);

        // theta = alpha forces q = 1.
        let params = MeasureParams::from_theta_alpha(0.3, 0.3).unwrap();
        assert_eq!(params.p11, 1.0);

        // theta = (2 + alpha) / 3 forces p = 1.
        let alpha = 0.1;
        let params = MeasureParams::from_theta_alpha((2.0 + alpha) / 3.0, alpha).unwrap();
        assert!((params.p1 - 1.0).abs() < 1e-12);

        assert!(MeasureParams::from_theta_alpha(0.7, 0.0).is_err());
        assert!(MeasureParams::from_theta_alpha(0.1, 0.2).is_err());

        // The origin is the all-zeros point mass with zero entropy.
        let origin = MeasureParams::from_theta_alpha(0.0, 0.0).unwrap();
        assert_eq!(origin.p1, 0.0);
        assert_eq!(origin.local_entropy(), 0.0);
        assert_eq!(origin.xi().value(), 0.0);
    }

    #[test]
    fn xi_values() {
        for alpha in [0.0, 0.1, 0.25, 0.4, 0.5] {
            let xi = MeasureParams::from_alpha(alpha).unwrap().xi().value();
            assert!((xi - 0.5).abs() < 1e-15, "alpha={alpha}");
        }
        for (theta, alpha) in [(0.4, 0.1), (0.5, 0.0), (0.3, 0.3), (0.62, 0.2)] {
            let xi = MeasureParams::from_theta_alpha(theta, alpha)
                .unwrap()
                .xi()
                .value();
            assert!((xi - theta).abs() < 1e-12, "theta={theta} alpha={alpha}");
        }
        assert_eq!(MeasureParams::uniform().xi().value(), 0.5);
    }

    #[test]
    fn expected_pair_freq_values() {
        for alpha in [0.0, 0.2, 0.5] {
            let params = MeasureParams::from_alpha(alpha).unwrap();
            assert!((params.expected_pair_freq() - alpha).abs() < 1e-15);
        }
        for (theta, alpha) in [(0.4, 0.1), (0.5, 0.25)] {
            let params = MeasureParams::from_theta_alpha(theta, alpha).unwrap();
            assert!((params.expected_pair_freq() - alpha).abs() < 1e-12);
        }
        assert!((MeasureParams::uniform().expected_pair_freq() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn local_entropy_values() {
        for alpha in [0.0, 0.1, 0.25, 0.5] {
            let params = MeasureParams::from_alpha(alpha).unwrap();
            let expected = 0.5 * LN_2 + 0.5 * h(2.0 * alpha);
            assert!(
                (params.local_entropy() - expected).abs() < 1e-12,
                "alpha={alpha}"
            );
        }
        for (theta, alpha) in [(0.4, 0.1), (0.5, 0.0), (0.45, 0.2)] {
            let params = MeasureParams::from_theta_alpha(theta, alpha).unwrap();
            let expected = crate::spectra::h_freq(theta, alpha)
                .unwrap()
                .entropy_nats
                .unwrap();
            assert!(
                (params.local_entropy() - expected).abs() < 1e-12,
                "theta={theta} alpha={alpha}"
            );
        }
        assert!((MeasureParams::uniform().local_entropy() - LN_2).abs() < 1e-15);
    }

    #[test]
    fn cylinder_prob_examples() {
        let uniform = MeasureParams::uniform();
        for text in ["0", "01", "110", "10110"] {
            let w = Word::parse_ascii(text).unwrap();
            let expected = 0.5f64.powi(w.len() as i32);
            assert!((uniform.cylinder_prob(&w) - expected).abs() < 1e-15);
        }
        // Word "11": p1 * p11 = (1/2)(2 alpha) = alpha.
        for alpha in [0.1, 0.3, 0.5] {
            let params = MeasureParams::from_alpha(alpha).unwrap();
            let w = Word::parse_ascii("11").unwrap();
            assert!((params.cylinder_prob(&w) - alpha).abs() < 1e-15);
        }
    }

    #[test]
    fn cylinder_normalization() {
        let params = MeasureParams::from_theta_alpha(0.45, 0.2).unwrap();
        for n in 1..=10usize {
            let mut total = 0.0;
            for bits in 0u32..(1 << n) {
                let w = Word::from_fn(n, |pos| (bits >> (pos - 1)) & 1 == 1);
                total += params.cylinder_prob(&w);
            }
            assert!((total - 1.0).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn log_cylinder_matches_direct() {
        let params = MeasureParams::from_alpha(0.2).unwrap();
        for text in ["0", "0110", "10110010", "001101011010"] {
            let w = Word::parse_ascii(text).unwrap();
            let direct = params.cylinder_prob(&w).ln();
            let logp = params.log_cylinder_prob(&w);
            assert!((direct - logp).abs() < 1e-12, "{text}");
        }
        // Zero-measure cylinder: after a 1, another 1 is impossible at alpha=0.
        let params = MeasureParams::from_alpha(0.0).unwrap();
        let w = Word::parse_ascii("11").unwrap();
        assert_eq!(params.log_cylinder_prob(&w), f64::NEG_INFINITY);
        assert_eq!(
            params.empirical_local_entropy(&w),
            Err(MeasureError::InfiniteLocalEntropy)
        );
    }

    #[test]
    fn empirical_local_entropy_examples() {
        let uniform = MeasureParams::uniform();
        let w = Word::parse_ascii("0110101101").unwrap();
        assert!((uniform.empirical_local_entropy(&w).unwrap() - LN_2).abs() < 1e-15);

        // All-zeros under the equal-pairs measure: only odd factors 1/2
        // contribute, so the value is ceil(n/2) ln 2 / n -> (1/2) ln 2.
        let params = MeasureParams::from_alpha(0.5).unwrap();
        for n in [7usize, 64, 1001] {
            let w = Word::zeros(n);
            let expected = n.div_ceil(2) as f64 * LN_2 / n as f64;
            assert!((params.empirical_local_entropy(&w).unwrap() - expected).abs() < 1e-12);
        }

        // At alpha = 0 the all-zeros cylinder has measure zero (the
        // transition after a 0 is forced to 1), so the signal is infinite.
        let params = MeasureParams::from_alpha(0.0).unwrap();
        assert_eq!(
            params.empirical_local_entropy(&Word::zeros(8)),
            Err(MeasureError::InfiniteLocalEntropy)
        );
    }

    #[test]
    fn h_n_increment_examples() {
        let uniform = MeasureParams::uniform();
        let w = Word::parse_ascii("01101011").unwrap();
        // log mu(C_2n) - log mu(C_n) = -(2n) ln2 + n ln2 = -n ln 2.
        assert!((uniform.h_n_increment(&w).unwrap() + 4.0 * LN_2).abs() < 1e-15);

        // Length-2 word "10": log(p1 p10) - log(p1) = log p10.
        let params = MeasureParams::from_theta_alpha(0.45, 0.2).unwrap();
        let w = Word::parse_ascii("10").unwrap();
        assert!((params.h_n_increment(&w).unwrap() - params.p10().ln()).abs() < 1e-12);

        assert_eq!(
            uniform.h_n_increment(&Word::parse_ascii("011").unwrap()),
            Err(MeasureError::OddLength(3))
        );
    }

    #[test]
    fn marginal_one_matches_cylinder_sums() {
        // Independent oracle: sum the cylinder measure over all words
        // with a 1 at the target position.
        let params = MeasureParams::from_theta_alpha(0.5, 0.15).unwrap();
        for position in [1usize, 2, 4, 6, 8, 12] {
            let n = position;
            let mut total = 0.0;
            for bits in 0u32..(1 << n) {
                let w = Word::from_fn(n, |pos| (bits >> (pos - 1)) & 1 == 1);
                if w.bit(position) {
                    total += params.cylinder_prob(&w);
                }
            }
            let marginal = params.marginal_one(position as u64);
            assert!((total - marginal).abs() < 1e-12, "position={position}");
        }
    }

    #[test]
    fn marginal_recursion_holds() {
        let params = MeasureParams::from_theta_alpha(0.42, 0.13).unwrap();
        for m in 1..=4096u64 {
            let lhs = params.marginal_one(2 * m);
            let rhs = params.marginal_one(m) * params.p11()
                + (1.0 - params.marginal_one(m)) * params.p01();
            assert!((lhs - rhs).abs() < 1e-14, "m={m}");
        }
    }

    #[test]
    fn sampler_respects_hard_constraints() {
        // alpha = 0: no in-range (1,1) pair ever.
        let params = MeasureParams::from_alpha(0.0).unwrap();
        let w = params.sample(4096, 7);
        assert_eq!(w.pair_count(), 0);

        // alpha = 1/2: every in-range pair equal.
        let params = MeasureParams::from_alpha(0.5).unwrap();
        let w = params.sample(4096, 7);
        for k in 1..=w.len() / 2 {
            assert_eq!(w.bit(k), w.bit(2 * k), "k={k}");
        }
    }

    #[test]
    fn sampler_prefix_property() {
        let params = MeasureParams::from_theta_alpha(0.4, 0.1).unwrap();
        for (n, seed) in [(377usize, 3u64), (1024, 99), (2048, 5)] {
            let small = params.sample(n, seed);
            let big = params.sample(2 * n, seed);
            assert_eq!(big.prefix(n), small, "n={n} seed={seed}");
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let params = MeasureParams::from_alpha(0.3).unwrap();
        assert_eq!(params.sample(999, 42), params.sample(999, 42));
        assert_ne!(params.sample(999, 42), params.sample(999, 43));
    }

    #[test]
    fn uniform_digit_frequency_concentrates() {
        let n = 1_000_000usize;
        let w = MeasureParams::uniform().sample(n, 20260808);
        let freq = w.count_ones() as f64 / n as f64;
        // 3 sigma for a fair coin at this n is 0.0015.
        assert!((freq - 0.5).abs() < 0.0015, "freq={freq}");
    }

    #[test]
    fn params_json_round_trip() {
        let params = MeasureParams::from_theta_alpha(0.4, 0.1).unwrap();
        let json = serde_json::to_string(&params).unwrap();
        for field in ["p0", "p1", "p00", "p01", "p10", "p11"] {
            assert!(json.contains(field), "{json}");
        }
        let back: MeasureParams = serde_json::from_str(&json).unwrap();
        assert_eq!(back, params);

        // Validation runs on deserialization.
        let bad = r#"{"p0":0.5,"p1":0.5,"p00":0.9,"p01":0.9,"p10":0.5,"p11":0.5}"#;
        assert!(serde_json::from_str::<MeasureParams>(bad).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

        #[test]
        fn cylinder_additivity(
            p1 in 0.0f64..=1.0,
            p01 in 0.0f64..=1.0,
            p11 in 0.0f64..=1.0,
            bits in prop::collection::vec(any::<bool>(), 1..12),
        ) {
            let params = MeasureParams::new(1.0 - p1, p1, 1.0 - p01, p01, 1.0 - p11, p11).unwrap();
            let w: Word = bits.iter().copied().collect();
            let mut w0 = w.clone();
            w0.push(false);
            let mut w1 = w.clone();
            w1.push(true);
            let lhs = params.cylinder_prob(&w);
            let rhs = params.cylinder_prob(&w0) + params.cylinder_prob(&w1);
            prop_assert!((lhs - rhs).abs() <= 1e-12);
        }

        #[test]
        fn xi_is_a_probability(
            p1 in 0.0f64..=1.0,
            p01 in 0.0f64..=1.0,
            p11 in 0.0f64..=1.0,
        ) {
            let params = MeasureParams::new(1.0 - p1, p1, 1.0 - p01, p01, 1.0 - p11, p11).unwrap();
            let xi = params.xi().value();
            prop_assert!((0.0..=1.0).contains(&xi));
            // The nontriviality condition keeps the denominator >= 1.
            prop_assert!(2.0 - params.p11() + params.p01() >= 1.0);
        }
    }
}
