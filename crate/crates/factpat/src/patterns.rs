//! Combinatorics of factorization patterns (= cycle types of permutations):
//! enumeration, weights w(λ), exact proportions 𝒯(λ), and the permutation
//! statistics used by the distribution analysis.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Exact probability type: arbitrary-precision reduced rationals.  The
/// weights w(λ) overflow 64-bit factorials quickly and every downstream
/// check is exact, so no floating point enters before report boundaries.
pub type Ratio = BigRational;

/// A factorization pattern λ = (λ₁, …, λ_r) with Σ i·λ_i = r: λ_i counts
/// the irreducible factors of degree i (with multiplicity), equivalently the
/// i-cycles of a permutation of S_r.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorizationPattern {
    lambda: Vec<u32>,
}

impl FactorizationPattern {
    /// Builds a pattern from the full multiplicity vector (λ₁..λ_r); the
    /// vector length must equal r = Σ i·λ_i.
    pub fn new(lambda: Vec<u32>) -> Result<FactorizationPattern> {
        let r: usize = lambda.iter().enumerate().map(|(i, l)| (i + 1) * *l as usize).sum();
        if r == 0 || lambda.len() != r {
            return Err(Error::SizeMismatch(format!(
                "pattern vector of length {} with Σ i·λ_i = {r}",
                lambda.len()
            )));
        }
        Ok(FactorizationPattern { lambda })
    }

    /// The multiplicity vector (λ₁..λ_r).
    pub fn lambda(&self) -> &[u32] {
        &self.lambda
    }

    /// The degree r = Σ i·λ_i.
    pub fn r(&self) -> usize {
        self.lambda.len()
    }

    /// Largest i with λ_i > 0 (the longest cycle length).
    pub fn longest_part(&self) -> usize {
        self.lambda
            .iter()
            .rposition(|&l| l > 0)
            .map(|i| i + 1)
            .expect("patterns are nonempty")
    }

    /// True when every λ_i ∈ {0, 1} (all cycle lengths pairwise distinct).
    pub fn has_distinct_lengths(&self) -> bool {
        self.lambda.iter().all(|&l| l <= 1)
    }

    /// Text form `"1^a 2^b …"` omitting zero exponents, e.g. `"1^1 2^1"`.
    pub fn render(&self) -> String {
        self.lambda
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 0)
            .map(|(i, l)| format!("{}^{}", i + 1, l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses the text form produced by [`render`](Self::render).
    pub fn parse(s: &str) -> Result<FactorizationPattern> {
        let mut entries: Vec<(usize, u32)> = vec![];
        for tok in s.split_whitespace() {
            let (i, l) = tok
                .split_once('^')
                .ok_or_else(|| Error::Parse(format!("pattern term {tok:?} lacks '^'")))?;
            let i: usize = i.parse().map_err(|_| Error::Parse(format!("bad part {i:?}")))?;
            let l: u32 = l.parse().map_err(|_| Error::Parse(format!("bad exponent {l:?}")))?;
            if i == 0 || l == 0 {
                return Err(Error::Parse(format!("pattern term {tok:?} must be positive")));
            }
            if entries.iter().any(|(j, _)| *j == i) {
                return Err(Error::Parse(format!("repeated part {i}")));
            }
            entries.push((i, l));
        }
        if entries.is_empty() {
            return Err(Error::Parse("empty pattern".into()));
        }
        let r: usize = entries.iter().map(|(i, l)| i * *l as usize).sum();
        let mut lambda = vec![0u32; r];
        for (i, l) in entries {
            if i > r {
                return Err(Error::Parse(format!("part {i} exceeds degree {r}")));
            }
            lambda[i - 1] = l;
        }
        FactorizationPattern::new(lambda)
    }
}

impl std::fmt::Display for FactorizationPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

/// All integer partitions of r in multiplicity form, in reverse-lexicographic
/// order on the descending part list ([r], [r−1, 1], …, [1, …, 1]).
pub fn enumerate_patterns(r: usize) -> Vec<FactorizationPattern> {
    assert!(r >= 1, "enumerate_patterns requires r ≥ 1");
    let mut out = vec![];
    let mut parts: Vec<usize> = vec![];
    rec_partitions(r, r, &mut parts, &mut out);
    out
}

fn rec_partitions(
    remaining: usize,
    max_part: usize,
    parts: &mut Vec<usize>,
    out: &mut Vec<FactorizationPattern>,
) {
    if remaining == 0 {
        let r: usize = parts.iter().sum();
        let mut lambda = vec![0u32; r];
        for &p in parts.iter() {
            lambda[p - 1] += 1;
        }
        out.push(FactorizationPattern { lambda });
        return;
    }
    for p in (1..=max_part.min(remaining)).rev() {
        parts.push(p);
        rec_partitions(remaining - p, p, parts, out);
        parts.pop();
    }
}

/// The weight w(λ) = ∏ i^{λ_i} λ_i!: the number of permutations commuting
/// with a fixed permutation of cycle type λ, so that r!/w(λ) permutations
/// have that type.
pub fn weight(lambda: &FactorizationPattern) -> BigInt {
    let mut w = BigInt::one();
    for (i, &l) in lambda.lambda.iter().enumerate() {
        let base = BigInt::from(i + 1);
        for _ in 0..l {
            w *= &base;
        }
        for j in 2..=l as u64 {
            w *= BigInt::from(j);
        }
    }
    w
}

/// The exact proportion 𝒯(λ) = 1/w(λ) of permutations of S_r with cycle
/// type λ.
pub fn proportion(lambda: &FactorizationPattern) -> Ratio {
    Ratio::new(BigInt::one(), weight(lambda))
}

/// E_r: the expected length of the longest cycle of a uniformly random
/// permutation of S_r, exactly: Σ_i i · Σ_{λ with longest part i} 𝒯(λ).
pub fn expected_longest_cycle(r: usize) -> Ratio {
    let mut e = Ratio::zero();
    for lambda in enumerate_patterns(r) {
        e += Ratio::from(BigInt::from(lambda.longest_part())) * proportion(&lambda);
    }
    e
}

/// Probability that a random permutation of S_r has all cycle lengths
/// pairwise distinct: Σ over λ ∈ {0,1}^r of 𝒯(λ).
pub fn prob_distinct_lengths(r: usize) -> Ratio {
    enumerate_patterns(r)
        .iter()
        .filter(|l| l.has_distinct_lengths())
        .map(proportion)
        .sum()
}

/// Probability that a random permutation of S_r has exactly j cycles of
/// length k: `(1/(j!·k^j)) Σ_{i=0}^{⌊r/k⌋−j} (−1)^i / (i!·k^i)`.
pub fn prob_j_cycles_of_length_k(r: usize, j: usize, k: usize) -> Result<Ratio> {
    if k < 1 || k > r {
        return Err(Error::IndexOutOfRange(format!("cycle length k = {k} with r = {r}")));
    }
    if j > r / k {
        return Err(Error::IndexOutOfRange(format!("j = {j} cycles of length {k} in S_{r}")));
    }
    let mut sum = Ratio::zero();
    let mut denom = BigInt::one(); // i! k^i
    for i in 0..=(r / k - j) {
        if i > 0 {
            denom *= BigInt::from(i) * BigInt::from(k);
        }
        let term = Ratio::new(BigInt::one(), denom.clone());
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let mut lead = BigInt::one(); // j! k^j
    for t in 1..=j {
        lead *= BigInt::from(t) * BigInt::from(k);
    }
    Ok(sum / Ratio::from(lead))
}

/// Report-boundary conversion to floating point (the only place exact
/// rationals are allowed to degrade).
pub fn rat_to_f64(r: &Ratio) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().expect("rational magnitude fits in f64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    /// Cycle type of a permutation given as images `perm[i]`.
    fn cycle_type(perm: &[usize]) -> Vec<u32> {
        let r = perm.len();
        let mut seen = vec![false; r];
        let mut lambda = vec![0u32; r];
        for start in 0..r {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = perm[cur];
                len += 1;
            }
            lambda[len - 1] += 1;
        }
        lambda
    }

    /// All permutations of {0..r−1} by simple recursion.
    fn all_perms(r: usize) -> Vec<Vec<usize>> {
        fn rec(avail: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if avail.is_empty() {
                out.push(cur.clone());
                return;
            }
            for i in 0..avail.len() {
                let v = avail.remove(i);
                cur.push(v);
                rec(avail, cur, out);
                cur.pop();
                avail.insert(i, v);
            }
        }
        let mut out = vec![];
        rec(&mut (0..r).collect(), &mut vec![], &mut out);
        out
    }

    fn factorial(r: usize) -> BigInt {
        (1..=r).map(BigInt::from).product()
    }

    #[test]
    fn enumeration_examples() {
        let p3 = enumerate_patterns(3);
        assert_eq!(p3.len(), 3);
        assert_eq!(p3[0].lambda(), &[0, 0, 1]);
        assert_eq!(p3[1].lambda(), &[1, 1, 0]);
        assert_eq!(p3[2].lambda(), &[3, 0, 0]);
        assert_eq!(enumerate_patterns(5).len(), 7);
        let p1 = enumerate_patterns(1);
        assert_eq!(p1.len(), 1);
        assert_eq!(p1[0].lambda(), &[1]);
        // deterministic, no repeats, valid invariant
        for r in 1..=12 {
            let ps = enumerate_patterns(r);
            let set: std::collections::HashSet<_> = ps.iter().cloned().collect();
            assert_eq!(set.len(), ps.len());
            for l in &ps {
                let total: usize = l.lambda().iter().enumerate().map(|(i, &x)| (i + 1) * x as usize).sum();
                assert_eq!(total, r);
            }
        }
    }

    #[test]
    fn weight_examples() {
        let l = FactorizationPattern::new(vec![3, 0, 0]).unwrap();
        assert_eq!(weight(&l), BigInt::from(6));
        let l = FactorizationPattern::new(vec![1, 1, 0]).unwrap();
        assert_eq!(weight(&l), BigInt::from(2));
        for r in 1..=10usize {
            let mut lambda = vec![0u32; r];
            lambda[r - 1] = 1;
            let l = FactorizationPattern::new(lambda).unwrap();
            assert_eq!(weight(&l), BigInt::from(r));
        }
    }

    #[test]
    fn proportions_match_brute_force_s_r() {
        // 𝒯(λ)·r! equals the exhaustive count of permutations of S_r with
        // cycle type λ, for all r ≤ 8.
        for r in 1..=8usize {
            let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
            for perm in all_perms(r) {
                *counts.entry(cycle_type(&perm)).or_insert(0) += 1;
            }
            let rf = factorial(r);
            let patterns = enumerate_patterns(r);
            assert_eq!(patterns.len(), counts.len());
            for l in patterns {
                let expected = proportion(&l) * Ratio::from(rf.clone());
                assert!(expected.is_integer());
                assert_eq!(
                    expected.to_integer(),
                    BigInt::from(counts[l.lambda()]),
                    "pattern {l} over S_{r}"
                );
            }
        }
    }

    #[test]
    fn proportions_sum_to_one() {
        for r in 1..=20usize {
            let total: Ratio = enumerate_patterns(r).iter().map(proportion).sum();
            assert!(total.is_one(), "Σ 𝒯(λ) = {total} for r = {r}");
        }
    }

    #[test]
    fn expected_longest_cycle_examples() {
        assert!(expected_longest_cycle(1).is_one());
        assert_eq!(
            expected_longest_cycle(3),
            Ratio::new(BigInt::from(13), BigInt::from(6))
        );
        // monotone nondecreasing and E_r/(r+1) ≤ ξ (Golomb constant)
        let xi = 0.624_329_45f64;
        let mut prev = Ratio::zero();
        for r in 1..=30usize {
            let e = expected_longest_cycle(r);
            assert!(e >= prev, "E_r not monotone at r = {r}");
            let ratio = rat_to_f64(&e) / (r as f64 + 1.0);
            assert!(ratio <= xi, "E_{r}/(r+1) = {ratio} > ξ");
            prev = e;
        }
    }

    #[test]
    fn prob_distinct_lengths_examples() {
        assert!(prob_distinct_lengths(1).is_one());
        assert_eq!(
            prob_distinct_lengths(3),
            Ratio::new(BigInt::from(5), BigInt::from(6))
        );
        // brute force cross-check for small r
        for r in 2..=7usize {
            let count = all_perms(r)
                .iter()
                .filter(|p| cycle_type(p).iter().all(|&l| l <= 1))
                .count();
            assert_eq!(
                prob_distinct_lengths(r),
                Ratio::new(BigInt::from(count), factorial(r))
            );
        }
        // approach to e^{−γ}(1 + 1/r): the gap at r = 30 is of order log₂r/r²
        let egamma = 0.561_459_483_566_885_1f64;
        let v30 = rat_to_f64(&prob_distinct_lengths(30));
        let target = egamma * (1.0 + 1.0 / 30.0);
        let c = 2.0; // calibrated: exact gap at r = 30 is ≈ 0.0036 < 2·log₂30/900
        assert!((v30 - target).abs() <= c * 30f64.log2() / 900.0);
    }

    #[test]
    fn prob_j_cycles_examples() {
        assert_eq!(
            prob_j_cycles_of_length_k(3, 1, 3).unwrap(),
            Ratio::new(BigInt::from(1), BigInt::from(3))
        );
        assert_eq!(
            prob_j_cycles_of_length_k(4, 2, 2).unwrap(),
            Ratio::new(BigInt::from(1), BigInt::from(8))
        );
        // total probability is 1 for every (r, k), r ≤ 15
        for r in 1..=15usize {
            for k in 1..=r {
                let total: Ratio = (0..=r / k)
                    .map(|j| prob_j_cycles_of_length_k(r, j, k).unwrap())
                    .sum();
                assert!(total.is_one(), "Σ_j P = {total} for r = {r}, k = {k}");
            }
        }
        // out-of-range arguments error
        assert!(prob_j_cycles_of_length_k(3, 2, 2).is_err());
        assert!(prob_j_cycles_of_length_k(3, 0, 4).is_err());
    }

    #[test]
    fn marginalizing_patterns_matches_alternating_sum() {
        // Σ_{λ: λ_k = j} 𝒯(λ) equals the alternating-sum formula, r ≤ 10.
        for r in 1..=10usize {
            let patterns = enumerate_patterns(r);
            for k in 1..=r {
                for j in 0..=r / k {
                    let marginal: Ratio = patterns
                        .iter()
                        .filter(|l| l.lambda()[k - 1] as usize == j)
                        .map(proportion)
                        .sum();
                    assert_eq!(
                        marginal,
                        prob_j_cycles_of_length_k(r, j, k).unwrap(),
                        "(r, j, k) = ({r}, {j}, {k})"
                    );
                }
            }
        }
    }

    #[test]
    fn render_parse_roundtrip() {
        let l = FactorizationPattern::new(vec![1, 1, 0]).unwrap();
        assert_eq!(l.render(), "1^1 2^1");
        for r in 1..=9usize {
            for l in enumerate_patterns(r) {
                assert_eq!(FactorizationPattern::parse(&l.render()).unwrap(), l);
            }
        }
        assert!(FactorizationPattern::parse("").is_err());
        assert!(FactorizationPattern::parse("0^1").is_err());
        assert!(FactorizationPattern::parse("2^0").is_err());
        assert!(FactorizationPattern::parse("1^1 1^2").is_err());
    }
}
