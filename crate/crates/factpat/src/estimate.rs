//! Evaluators for the explicit bounds under test: the pattern-count error
//! bounds, the family-size bounds, the square-free probability bound, the
//! DDF-completion reference value, and the cost-model quantities.
//!
//! Everything is exact rational arithmetic.  Expressions containing q^{1/2}
//! or δ_G^{13/6} are evaluated with directed rounding so that a reported
//! "holds" is rigorous: claimed error bounds are rounded *down* and claimed
//! lower bounds are rounded *up*, hence a check can raise a false alarm but
//! can never falsely report success.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::patterns::Ratio;
use crate::{Error, Result};

/// The Golomb constant ξ: the limit of E_r/(r+1), to the printed precision.
pub const XI: f64 = 0.62432945;

/// e^{−γ}: the limiting probability that a random permutation has all cycle
/// lengths pairwise distinct.
pub const E_NEG_GAMMA: f64 = 0.561_459_483_566_885_1;

/// Scaling exponent for directed-rounding root intervals (roots are
/// bracketed to within 2^{−30}).
const ROOT_SCALE_BITS: u32 = 30;

/// Exact bracket lo ≤ √n ≤ hi with hi − lo = 2^{−30}.
pub fn sqrt_interval(n: u128) -> (Ratio, Ratio) {
    let scaled = BigInt::from(n) << (2 * ROOT_SCALE_BITS);
    let root = scaled.sqrt();
    let denom = BigInt::one() << ROOT_SCALE_BITS;
    (
        Ratio::new(root.clone(), denom.clone()),
        Ratio::new(root + 1, denom),
    )
}

/// Exact bracket lo ≤ n^{13/6} ≤ hi (used for δ_G^{13/6}).
pub fn pow_13_6_interval(n: u128) -> (Ratio, Ratio) {
    let scaled = BigInt::from(n).pow(13) << (6 * ROOT_SCALE_BITS);
    let root = scaled.nth_root(6);
    let denom = BigInt::one() << ROOT_SCALE_BITS;
    (
        Ratio::new(root.clone(), denom.clone()),
        Ratio::new(root + 1, denom),
    )
}

/// The size-bound hypothesis q > 15·δ_G^{13/3}, tested exactly as
/// q³ > 3375·δ_G^13.
pub fn size_hypothesis_met(q: u64, delta_g: u128) -> bool {
    BigInt::from(q).pow(3) > BigInt::from(3375) * BigInt::from(delta_g).pow(13)
}

/// One evaluated inequality |observed − main_term| ≤ error_bound.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    /// Theorem tag for reports.
    pub theorem: String,
    /// The predicted main term (exact, rendered as `num/den`).
    pub main_term: String,
    /// The evaluated error bound (rounded down; `num/den`).
    pub error_bound: String,
    /// The measured count.
    pub observed: i128,
    /// Whether |observed − main_term| ≤ error_bound.
    pub holds: bool,
    /// error_bound − |observed − main_term| as a float (≥ 0 iff holds).
    pub slack: f64,
    /// Float renderings for quick reading.
    pub main_term_f64: f64,
    pub error_bound_f64: f64,
}

impl BoundReport {
    /// Evaluates the inequality with exact comparisons.
    pub fn evaluate(theorem: &str, main_term: Ratio, error_bound: Ratio, observed: i128) -> BoundReport {
        let dev = (Ratio::from(BigInt::from(observed)) - &main_term).abs();
        let slack = &error_bound - &dev;
        BoundReport {
            theorem: theorem.to_string(),
            main_term: main_term.to_string(),
            error_bound: error_bound.to_string(),
            observed,
            holds: !slack.is_negative(),
            slack: crate::patterns::rat_to_f64(&slack),
            main_term_f64: crate::patterns::rat_to_f64(&main_term),
            error_bound_f64: crate::patterns::rat_to_f64(&error_bound),
        }
    }
}

fn qpow(q: u64, e: usize) -> Ratio {
    Ratio::from(BigInt::from(q).pow(e as u32))
}

/// The square-free pattern-count error bound
/// `𝒯(λ)·q^{r−m−1}·((δ(D−2)+2)·q^{1/2} + 14D²δ² + r²δ)`,
/// rounded down (the q^{1/2} factor uses the interval endpoint that
/// minimizes the expression, so "holds" against this value is rigorous).
pub fn pattern_bound_sq(q: u64, r: usize, m: usize, delta: u128, big_d: u128, t: &Ratio) -> Result<Ratio> {
    if m >= r {
        return Err(Error::SizeMismatch(format!("pattern bound needs m < r, got m = {m}, r = {r}")));
    }
    // δ(D−2)+2 is signed (D may be 0 or 1)
    let c: BigInt =
        BigInt::from(delta) * (BigInt::from(big_d) - BigInt::from(2)) + BigInt::from(2);
    let (sq_lo, sq_hi) = sqrt_interval(q as u128);
    let sq = if c.is_negative() { sq_hi } else { sq_lo };
    let inner = Ratio::from(c) * sq
        + Ratio::from(BigInt::from(14u32) * BigInt::from(big_d).pow(2) * BigInt::from(delta).pow(2))
        + Ratio::from(BigInt::from(r as u64).pow(2) * BigInt::from(delta));
    Ok(t * qpow(q, r - m - 1) * inner)
}

/// The all-polynomials error bound: [`pattern_bound_sq`] plus the extra
/// `q^{r−m−1}·r²δ` term outside 𝒯(λ).
pub fn pattern_bound_all(q: u64, r: usize, m: usize, delta: u128, big_d: u128, t: &Ratio) -> Result<Ratio> {
    let extra = qpow(q, r - m - 1) * Ratio::from(BigInt::from(r as u64).pow(2) * BigInt::from(delta));
    Ok(pattern_bound_sq(q, r, m, delta, big_d, t)? + extra)
}

/// The introduction's simplified form of the same bound,
/// `q^{r−m−1}(𝒯(λ)(Dδ·q^{1/2} + 14D²δ² + r²δ) + r²δ)`, rounded *up*, for
/// numeric comparison against [`pattern_bound_all`].
pub fn pattern_bound_simplified(q: u64, r: usize, m: usize, delta: u128, big_d: u128, t: &Ratio) -> Result<Ratio> {
    if m >= r {
        return Err(Error::SizeMismatch(format!("pattern bound needs m < r, got m = {m}, r = {r}")));
    }
    let (_, sq_hi) = sqrt_interval(q as u128);
    let inner = Ratio::from(BigInt::from(big_d) * BigInt::from(delta)) * sq_hi
        + Ratio::from(BigInt::from(14u32) * BigInt::from(big_d).pow(2) * BigInt::from(delta).pow(2))
        + Ratio::from(BigInt::from(r as u64).pow(2) * BigInt::from(delta));
    let extra = Ratio::from(BigInt::from(r as u64).pow(2) * BigInt::from(delta));
    Ok(qpow(q, r - m - 1) * (t * inner + extra))
}

/// The family-size bounds, or a hypothesis marker when q ≤ 15δ_G^{13/3}.
#[derive(Debug, Clone, PartialEq)]
pub enum SizeBounds {
    /// q ≤ 15·δ_G^{13/3}: no bound is claimed.
    HypothesisUnmet,
    /// The three bounds of the size theorem.
    Met {
        /// |𝒜| ≥ lower = q^{r−m}(1 − 3δ_G^{13/6}/q^{1/2}) (rounded up).
        lower: Ratio,
        /// 1/|𝒜| ≤ inv_upper = q^{m−r}(1 + 15δ_G^{13/6}/q^{1/2})
        /// (rounded down).
        inv_upper: Ratio,
        /// |𝒜| ≥ q^{r−m}/2.
        half_lower: Ratio,
    },
}

/// Evaluates the size theorem for a family with r − m free coefficients.
pub fn family_size_bounds(q: u64, r: usize, m: usize, delta_g: u128) -> SizeBounds {
    if !size_hypothesis_met(q, delta_g) {
        return SizeBounds::HypothesisUnmet;
    }
    let (dg_lo, dg_hi) = pow_13_6_interval(delta_g);
    let (sq_lo, sq_hi) = sqrt_interval(q as u128);
    // lower rounded up: subtract the smallest possible 3δ^{13/6}/√q
    let lower = qpow(q, r - m) * (Ratio::one() - Ratio::from(BigInt::from(3)) * dg_lo / sq_hi.clone());
    // inv_upper rounded down: add the smallest possible 15δ^{13/6}/√q
    let (dg_lo2, _) = (pow_13_6_interval(delta_g).0, dg_hi);
    let inv_upper =
        (Ratio::one() + Ratio::from(BigInt::from(15)) * dg_lo2 / sq_hi) / qpow(q, r - m);
    let half_lower = qpow(q, r - m) / Ratio::from(BigInt::from(2));
    let _ = sq_lo;
    SizeBounds::Met { lower, inv_upper, half_lower }
}

/// The square-free probability bound 1 − 2r²δ_G/q together with whether the
/// theorem hypothesis q > 15δ_G^{13/3} holds.  The value is always computed
/// (it is a plain formula); callers must treat `hypothesis_met = false`
/// rows as "no claim" rather than pass/fail.
pub struct SqProbabilityBound {
    /// 1 − 2r²δ_G/q, exact.
    pub value: Ratio,
    /// q > 15δ_G^{13/3}, tested exactly.
    pub hypothesis_met: bool,
}

/// Evaluates the square-free probability bound.
pub fn sq_probability_bound(q: u64, r: usize, delta_g: u128) -> SqProbabilityBound {
    SqProbabilityBound {
        value: Ratio::one()
            - Ratio::new(
                BigInt::from(2u32) * BigInt::from(r as u64).pow(2) * BigInt::from(delta_g),
                BigInt::from(q),
            ),
        hypothesis_met: size_hypothesis_met(q, delta_g),
    }
}

/// The asymptotic reference e^{−γ}(1 + 1/r) for the probability that DDF
/// alone completes the factorization.  The dropped O(log r/r²) term has no
/// printed constant, so this is a reference value, not a certified bound.
pub fn ddf_completion_reference(r: usize) -> f64 {
    E_NEG_GAMMA * (1.0 + 1.0 / r as f64)
}

/// Number of ones in the binary expansion.
pub fn nu(e: u128) -> u32 {
    e.count_ones()
}

/// λ(e) = ⌊log₂ e⌋ + ν(e) − 1: the multiplication count of left-to-right
/// binary exponentiation to the e-th power (e ≥ 1).
pub fn lambda(e: u128) -> u64 {
    assert!(e >= 1);
    (127 - e.leading_zeros()) as u64 + nu(e) as u64 - 1
}

/// The model quantities of the average-cost analysis.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CostModel {
    pub q: u64,
    pub r: usize,
    /// M(r) = r·log r·log log r (base-2 logs, inner log clamped at 1 so the
    /// desk-scale values r ∈ {2, 3} stay positive).
    pub m_r: f64,
    /// U(r) = M(r)·log r.
    pub u_r: f64,
    /// λ(q).
    pub lambda_q: u64,
    /// ν(q).
    pub nu_q: u32,
    /// μ_k = λ((q^k − 1)/2) for 1 ≤ k ≤ ⌈r/2⌉.
    pub mu: Vec<u64>,
    /// α_k = 1/2 − 1/(2q^k), same index range as `mu`.
    pub alpha: Vec<f64>,
    /// β_k = 1/2 + 1/(2q^k).
    pub beta: Vec<f64>,
    /// The Golomb constant ξ.
    pub xi: f64,
    /// e^{−γ}.
    pub e_neg_gamma: f64,
}

/// Computes the cost-model record; q must be odd (μ_k is defined through
/// the EDF exponent (q^k − 1)/2).
pub fn cost_model(q: u64, r: usize) -> Result<CostModel> {
    if r < 2 {
        return Err(Error::SizeMismatch(format!("cost model needs r ≥ 2, got {r}")));
    }
    if q % 2 == 0 {
        return Err(Error::EvenFieldEdf);
    }
    let lg = (r as f64).log2();
    let m_r = r as f64 * lg * lg.log2().max(1.0);
    let u_r = m_r * lg;
    let kmax = r.div_ceil(2);
    let mut mu = vec![];
    let mut alpha = vec![];
    let mut beta = vec![];
    let mut qk: u128 = 1;
    for k in 1..=kmax {
        qk = qk
            .checked_mul(q as u128)
            .ok_or_else(|| Error::Overflow(format!("q^{k} in cost model")))?;
        mu.push(lambda((qk - 1) / 2));
        let inv = 1.0 / (2.0 * qk as f64);
        alpha.push(0.5 - inv);
        beta.push(0.5 + inv);
    }
    Ok(CostModel {
        q,
        r,
        m_r,
        u_r,
        lambda_q: lambda(q as u128),
        nu_q: nu(q as u128),
        mu,
        alpha,
        beta,
        xi: XI,
        e_neg_gamma: E_NEG_GAMMA,
    })
}
