//! The polynomial families whose factorization-pattern statistics are under
//! test: prescribed-coefficient linear families, the trinomial-plus-one
//! family T^r + g(T)T + 1, the Toeplitz–Hessenberg nonlinear family, and a
//! user-supplied filter escape hatch.  Each spec carries the weighted and
//! plain constraint degrees from which the bound parameters δ, D, δ_G are
//! derived.

use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;
use serde_json::json;

use crate::ff::FieldCtx;
use crate::poly::Poly;
use crate::symfun;
use crate::{Error, Result};

/// Membership predicate for filter families, over the coefficient index
/// vector (a₀..a_{r−1}) of a candidate monic polynomial.
pub type FilterPredicate = Arc<dyn Fn(&[u64]) -> bool + Send + Sync>;

/// Kind-specific family data.
#[derive(Clone)]
pub enum FamilyKind {
    /// Coefficients at the given positions are prescribed to the given
    /// element indices; all other coefficients are free.
    PrescribedLinear { prescribed: Vec<(usize, u64)> },
    /// T^r + g(T)·T + 1 with deg g ≤ s−1: free a₁..a_s, a₀ = 1, higher
    /// non-leading coefficients zero.
    TrinomialPlusOne { s: usize },
    /// Degree r+1 members T^{r+1} + a_r T^r + ⋯ + a₀ with
    /// G(a_r, …, a₁) = 0 for the generic Toeplitz–Hessenberg determinant G
    /// of order r (stored here; the member degree is r+1).
    ToeplitzHessenberg { th_r: usize },
    /// Arbitrary predicate; hypotheses unverified.
    ExplicitFilter { predicate: FilterPredicate, equalities: Vec<(usize, u64)> },
}

/// A family of monic degree-r polynomials cut out by m coefficient
/// constraints, with the degree bookkeeping needed by the bound evaluators.
#[derive(Clone)]
pub struct FamilySpec {
    r: usize,
    m: usize,
    excluded_index: usize,
    kind: FamilyKind,
    wt_degrees: Vec<u64>,
    plain_degrees: Vec<u64>,
    verified: bool,
    warnings: Vec<String>,
    descriptor: String,
}

impl std::fmt::Debug for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FamilySpec")
            .field("descriptor", &self.descriptor)
            .field("r", &self.r)
            .field("m", &self.m)
            .field("verified", &self.verified)
            .finish()
    }
}

impl FamilySpec {
    /// Degree of the family members.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of constraints m (< r).
    pub fn m(&self) -> usize {
        self.m
    }

    /// The coefficient index absent from every constraint.
    pub fn excluded_index(&self) -> usize {
        self.excluded_index
    }

    /// Kind-specific data.
    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    /// Weighted degrees wt(G_i) of the constraints.
    pub fn wt_degrees(&self) -> &[u64] {
        &self.wt_degrees
    }

    /// Plain degrees deg(G_i) of the constraints.
    pub fn plain_degrees(&self) -> &[u64] {
        &self.plain_degrees
    }

    /// δ = ∏ wt(G_i) (1 for m = 0).
    pub fn delta(&self) -> Result<u128> {
        product_u128(&self.wt_degrees, "δ")
    }

    /// D = Σ (wt(G_i) − 1).
    pub fn big_d(&self) -> u128 {
        self.wt_degrees.iter().map(|&w| w as u128 - 1).sum()
    }

    /// δ_G = ∏ deg(G_i) (1 for m = 0).
    pub fn delta_g(&self) -> Result<u128> {
        product_u128(&self.plain_degrees, "δ_G")
    }

    /// True for the built-in families whose hypotheses the underlying
    /// theorems cover; false for user filters.
    pub fn verified(&self) -> bool {
        self.verified
    }

    /// Construction-time warnings (hypothesis caveats).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// The canonical description string (also the parse input form).
    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// Characteristic hypotheses that can only be checked against a
    /// concrete field; returns human-readable violations (empty = all met).
    pub fn check_hypotheses(&self, ctx: &FieldCtx) -> Vec<String> {
        let p = ctx.p();
        let mut out = vec![];
        match &self.kind {
            FamilyKind::PrescribedLinear { prescribed } => {
                let n = prescribed.iter().map(|(i, _)| *i).min().unwrap_or(self.r);
                if n == 2 {
                    let r = self.r as u64;
                    if (r % p) * ((r - 1) % p) % p == 0 {
                        out.push(format!(
                            "prescribed family with lowest position 2 requires char ∤ r(r−1); char {p} divides {r}·{}",
                            r - 1
                        ));
                    }
                }
            }
            FamilyKind::TrinomialPlusOne { .. } => {
                if p <= 3 {
                    out.push(format!("trinomial family requires char > 3, got {p}"));
                }
            }
            FamilyKind::ToeplitzHessenberg { th_r } => {
                let r = *th_r;
                if p <= 3 {
                    out.push(format!("Toeplitz–Hessenberg family requires char > 3, got {p}"));
                }
                // char must not divide (r−1)(r+1)((r−1)^{r−1} + r^r)
                let a = BigUint::from(r - 1) * BigUint::from(r + 1);
                let b = BigUint::from(r - 1).pow(r as u32 - 1) + BigUint::from(r).pow(r as u32);
                if ((a * b) % BigUint::from(p)) == BigUint::ZERO {
                    out.push(format!(
                        "char {p} divides (r−1)(r+1)((r−1)^(r−1)+r^r) for r = {r}"
                    ));
                }
            }
            FamilyKind::ExplicitFilter { .. } => {
                out.push("filter family: hypotheses (H1)–(H6) unverified".into());
            }
        }
        out
    }

    /// Number of free coefficient slots iterated by enumeration: r − m for
    /// the parametrized kinds, r for filters (which scan the whole space).
    pub fn free_exponent(&self) -> usize {
        match &self.kind {
            FamilyKind::ExplicitFilter { .. } => self.r,
            _ => self.r - self.m,
        }
    }

    /// Size of the raw index space `q^free_exponent` walked by enumeration.
    pub fn raw_space_size(&self, ctx: &FieldCtx) -> Result<u128> {
        let mut acc: u128 = 1;
        for _ in 0..self.free_exponent() {
            acc = acc
                .checked_mul(ctx.q() as u128)
                .ok_or_else(|| Error::Overflow(format!("q^{}", self.free_exponent())))?;
        }
        Ok(acc)
    }

    /// Decodes raw index → member.  For the parametrized kinds every index
    /// yields a member (each exactly once); for filters the index addresses
    /// a candidate tuple and `None` means it fails the predicate.  Workers
    /// may partition `0..raw_space_size` into disjoint ranges.
    pub fn member_at(&self, index: u128, ctx: &FieldCtx) -> Result<Option<Poly>> {
        let q = ctx.q() as u128;
        if index >= self.raw_space_size(ctx)? {
            return Err(Error::IndexOutOfRange(format!(
                "family index {index} with raw space size {}",
                self.raw_space_size(ctx)?
            )));
        }
        let mut idx = index;
        let digits: Vec<u64> = (0..self.digit_count())
            .map(|_| {
                let d = (idx % q) as u64;
                idx /= q;
                d
            })
            .collect();
        self.member_from_digits(&digits, ctx)
    }

    /// Free base-q digits per raw index (little-endian over the free
    /// coefficient positions, ascending).
    fn digit_count(&self) -> usize {
        match &self.kind {
            FamilyKind::PrescribedLinear { prescribed } => self.r - prescribed.len(),
            FamilyKind::TrinomialPlusOne { s } => *s,
            FamilyKind::ToeplitzHessenberg { th_r } => *th_r,
            FamilyKind::ExplicitFilter { .. } => self.r,
        }
    }

    /// Builds the member for one free-coefficient tuple; shared by indexed
    /// enumeration and direct sampling (which never materializes q^free as
    /// an integer, so huge spaces stay sampleable).
    fn member_from_digits(&self, d: &[u64], ctx: &FieldCtx) -> Result<Option<Poly>> {
        debug_assert_eq!(d.len(), self.digit_count());
        match &self.kind {
            FamilyKind::PrescribedLinear { prescribed } => {
                let free: Vec<usize> =
                    (0..self.r).filter(|i| !prescribed.iter().any(|(j, _)| j == i)).collect();
                let mut coeffs = vec![0u64; self.r + 1];
                coeffs[self.r] = 1;
                for (pos, val) in free.iter().zip(d) {
                    coeffs[*pos] = *val;
                }
                for (pos, val) in prescribed {
                    coeffs[*pos] = *val;
                }
                Ok(Some(Poly::from_indices(ctx, &coeffs)))
            }
            FamilyKind::TrinomialPlusOne { s } => {
                let mut coeffs = vec![0u64; self.r + 1];
                coeffs[self.r] = 1;
                coeffs[0] = 1;
                coeffs[1..=*s].copy_from_slice(d);
                Ok(Some(Poly::from_indices(ctx, &coeffs)))
            }
            FamilyKind::ToeplitzHessenberg { th_r } => {
                let r = *th_r;
                // free tuple (a₀, a₂, a₃, …, a_r); a₁ solved from G = 0
                let mut coeffs = vec![ctx.zero(); self.r + 1];
                coeffs[self.r] = ctx.one();
                coeffs[0] = ctx.element_from_index(d[0]);
                for t in 2..=r {
                    coeffs[t] = ctx.element_from_index(d[t - 1]);
                }
                coeffs[1] = solve_th_a1(&coeffs[1..=r], r, ctx)?;
                Ok(Some(Poly::from_coeffs(ctx, coeffs)))
            }
            FamilyKind::ExplicitFilter { predicate, .. } => {
                if !predicate(d) {
                    return Ok(None);
                }
                let mut coeffs = vec![0u64; self.r + 1];
                coeffs[self.r] = 1;
                coeffs[..self.r].copy_from_slice(d);
                Ok(Some(Poly::from_indices(ctx, &coeffs)))
            }
        }
    }

    /// All members, each exactly once, in raw-index order.  Errors when the
    /// raw space exceeds `budget` (default cap used by callers: 10⁸).
    pub fn enumerate_members(&self, ctx: &FieldCtx, budget: u128) -> Result<Vec<Poly>> {
        let total = self.raw_space_size(ctx)?;
        if total > budget {
            return Err(Error::BudgetExceeded(format!(
                "family raw space {total} exceeds budget {budget}"
            )));
        }
        let mut out = vec![];
        for idx in 0..total {
            if let Some(p) = self.member_at(idx, ctx)? {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Uniform member: parametrized kinds sample the free tuple exactly;
    /// filter kinds use rejection sampling capped at `cap` attempts.
    pub fn sample_member(&self, ctx: &FieldCtx, rng: &mut impl Rng, cap: u64) -> Result<Poly> {
        // draw each free digit directly — uniform over the raw space without
        // ever computing q^free, which can exceed u128
        let q = ctx.q();
        let draw = |rng: &mut dyn rand::RngCore| -> Vec<u64> {
            (0..self.digit_count()).map(|_| sample_u64_below(q, rng)).collect()
        };
        match &self.kind {
            FamilyKind::ExplicitFilter { .. } => {
                for _ in 0..cap {
                    if let Some(p) = self.member_from_digits(&draw(rng), ctx)? {
                        return Ok(p);
                    }
                }
                Err(Error::RejectionCapExceeded(cap))
            }
            _ => Ok(self
                .member_from_digits(&draw(rng), ctx)?
                .expect("parametrized kinds are total")),
        }
    }

    /// Membership test for an arbitrary polynomial.
    pub fn contains(&self, f: &Poly, ctx: &FieldCtx) -> Result<bool> {
        if f.degree() != Some(self.r) || !f.is_monic(ctx) {
            return Ok(false);
        }
        let idx_at = |i: usize| ctx.index_of(&f.coeff(ctx, i));
        match &self.kind {
            FamilyKind::PrescribedLinear { prescribed } => {
                Ok(prescribed.iter().all(|(pos, val)| idx_at(*pos) == *val))
            }
            FamilyKind::TrinomialPlusOne { s } => {
                Ok(idx_at(0) == 1 && (*s + 1..self.r).all(|i| idx_at(i) == 0))
            }
            FamilyKind::ToeplitzHessenberg { th_r } => {
                let r = *th_r;
                let a: Vec<_> = (1..=r).map(|i| f.coeff(ctx, i)).collect();
                let g = symfun::toeplitz_hessenberg_det(&a, r, ctx)?;
                Ok(ctx.is_zero(&g))
            }
            FamilyKind::ExplicitFilter { predicate, .. } => {
                let d: Vec<u64> = (0..self.r).map(idx_at).collect();
                Ok(predicate(&d))
            }
        }
    }

    /// JSON form for reports; filter families carry an `"unverified"`
    /// marker.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "descriptor": self.descriptor,
            "r": self.r,
            "m": self.m,
            "excluded_index": self.excluded_index,
            "wt_degrees": self.wt_degrees,
            "plain_degrees": self.plain_degrees,
            "verified": self.verified,
            "hypotheses": if self.verified { "verified-by-paper" } else { "unverified" },
            "warnings": self.warnings,
        })
    }

    /// Parses a family description string:
    /// `prescribed:r=6;a5=0;a4=1` · `trinomial:r=5;s=3` · `toephess:r=4` ·
    /// `filter:r=4;m=1;wt=4;deg=1;a0=1` (filter `wt`/`deg` are
    /// comma-separated lists of length m; the `aJ=V` clauses define the
    /// conjunction-of-equalities predicate and may be absent when m = 0).
    pub fn parse(desc: &str) -> Result<FamilySpec> {
        let (kind, rest) = desc
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("family descriptor {desc:?} lacks ':'")))?;
        let mut fields: Vec<(&str, &str)> = vec![];
        for clause in rest.split(';') {
            if clause.is_empty() {
                continue;
            }
            let (k, v) = clause
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("family clause {clause:?} lacks '='")))?;
            fields.push((k, v));
        }
        let get = |name: &str| -> Result<u64> {
            fields
                .iter()
                .find(|(k, _)| *k == name)
                .ok_or_else(|| Error::Parse(format!("family descriptor missing {name}=")))?
                .1
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer for {name}")))
        };
        let coeff_clauses = |fields: &[(&str, &str)]| -> Result<Vec<(usize, u64)>> {
            let mut out = vec![];
            for (k, v) in fields {
                if let Some(ix) = k.strip_prefix('a') {
                    let pos: usize =
                        ix.parse().map_err(|_| Error::Parse(format!("bad coefficient {k:?}")))?;
                    let val: u64 =
                        v.parse().map_err(|_| Error::Parse(format!("bad value for {k}")))?;
                    out.push((pos, val));
                }
            }
            Ok(out)
        };
        match kind {
            "prescribed" => {
                let r = get("r")? as usize;
                family_prescribed_linear(r, &coeff_clauses(&fields)?)
            }
            "trinomial" => family_trinomial_plus_one(get("r")? as usize, get("s")? as usize),
            "toephess" => family_toeplitz_hessenberg(get("r")? as usize),
            "filter" => {
                let r = get("r")? as usize;
                let m = get("m")? as usize;
                let list = |name: &str| -> Result<Vec<u64>> {
                    match fields.iter().find(|(k, _)| *k == name) {
                        None if m == 0 => Ok(vec![]),
                        None => Err(Error::Parse(format!("filter family missing {name}="))),
                        Some((_, v)) => v
                            .split(',')
                            .map(|t| {
                                t.parse().map_err(|_| Error::Parse(format!("bad {name} list")))
                            })
                            .collect(),
                    }
                };
                let eqs = coeff_clauses(&fields)?;
                family_explicit_filter(r, m, list("wt")?, list("deg")?, eqs)
            }
            other => Err(Error::Parse(format!("unknown family kind {other:?}"))),
        }
    }
}

/// Solves G(a_r, …, a₁) = 0 for a₁ given a₂..a_r (slice `a` holds a₁..a_r
/// with a₁ ignored).  G is monic of degree 1 in A₁ with coefficient
/// (−1)^{r−1}, so one determinant evaluation at a₁ = 0 suffices:
/// a₁ = (−1)^r · G(a_r, …, a₂, 0).
fn solve_th_a1(a: &[crate::ff::FieldElement], r: usize, ctx: &FieldCtx) -> Result<crate::ff::FieldElement> {
    let mut probe = a.to_vec();
    probe[0] = ctx.zero();
    let g0 = symfun::toeplitz_hessenberg_det(&probe, r, ctx)?;
    if r % 2 == 0 {
        Ok(g0)
    } else {
        ctx.neg(&g0)
    }
}

fn product_u128(ds: &[u64], what: &str) -> Result<u128> {
    let mut acc: u128 = 1;
    for &d in ds {
        acc = acc
            .checked_mul(d as u128)
            .ok_or_else(|| Error::Overflow(what.to_string()))?;
    }
    Ok(acc)
}

/// Uniform draw below `bound` by rejection from the top zone.
fn sample_u64_below(bound: u64, rng: &mut dyn rand::RngCore) -> u64 {
    let zone = u64::MAX - u64::MAX % bound;
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % bound;
        }
    }
}

#[allow(dead_code)]
fn sample_u128_below(bound: u128, rng: &mut impl Rng) -> u128 {
    // rejection from the next power of two; bound ≥ 1
    let bits = 128 - bound.leading_zeros();
    loop {
        let raw: u128 = ((rng.gen::<u64>() as u128) << 64) | rng.gen::<u64>() as u128;
        let candidate = raw >> (128 - bits.max(1));
        if candidate < bound {
            return candidate;
        }
    }
}

/// Prescribed-coefficient family: members are monic degree-r polynomials
/// with the listed coefficients fixed (position, element-index value); the
/// pivot of the constraint at position j is i = r − j, giving
/// δ = ∏ i_j and D = Σ (i_j − 1).
pub fn family_prescribed_linear(r: usize, prescribed: &[(usize, u64)]) -> Result<FamilySpec> {
    let m = prescribed.len();
    if m == 0 {
        return Err(Error::BadFamily(
            "prescribed family needs at least one constraint (use a filter with m = 0 for the full set)".into(),
        ));
    }
    if m >= r {
        return Err(Error::BadFamily(format!("m = {m} constraints must be < r = {r}")));
    }
    let mut seen = std::collections::HashSet::new();
    for (pos, _) in prescribed {
        if *pos >= r {
            return Err(Error::BadFamily(format!("prescribed position {pos} out of range for degree {r}")));
        }
        if !seen.insert(*pos) {
            return Err(Error::BadFamily(format!("position {pos} prescribed twice")));
        }
    }
    let mut prescribed: Vec<(usize, u64)> = prescribed.to_vec();
    prescribed.sort_by_key(|(p, _)| std::cmp::Reverse(*p));
    let n = prescribed.iter().map(|(p, _)| *p).min().unwrap();
    let mut warnings = vec![];
    if n < 2 {
        warnings.push(format!(
            "lowest prescribed position {n} is below 2: outside the proven hypothesis range"
        ));
    } else if n == 2 {
        warnings.push(
            "lowest prescribed position is 2: requires char ∤ r(r−1) (checked against the field at census time)"
                .into(),
        );
    }
    let wt_degrees: Vec<u64> = prescribed.iter().map(|(p, _)| (r - p) as u64).collect();
    let plain_degrees = vec![1; m];
    let excluded_index = (0..r).find(|i| !seen.contains(i)).expect("m < r leaves a free index");
    let mut desc_parts: Vec<String> = prescribed.iter().map(|(p, v)| format!("a{p}={v}")).collect();
    desc_parts.insert(0, format!("r={r}"));
    Ok(FamilySpec {
        r,
        m,
        excluded_index,
        kind: FamilyKind::PrescribedLinear { prescribed },
        wt_degrees,
        plain_degrees,
        verified: n >= 2,
        warnings,
        descriptor: format!("prescribed:{}", desc_parts.join(";")),
    })
}

/// The family T^r + g(T)·T + 1 with deg g ≤ s−1: m = r − s constraints of
/// weighted degrees (r, r−s−1, r−s−2, …, 1), all linear in the
/// coefficients, so δ = r·(r−s−1)!, D = r−1+(r−s−2)(r−s−1)/2, δ_G = 1.
pub fn family_trinomial_plus_one(r: usize, s: usize) -> Result<FamilySpec> {
    if s < 3 || s > r.saturating_sub(2) {
        return Err(Error::BadFamily(format!("trinomial family needs 3 ≤ s ≤ r−2, got r = {r}, s = {s}")));
    }
    let m = r - s;
    let mut wt_degrees = vec![r as u64];
    wt_degrees.extend((1..=(r - s - 1) as u64).rev());
    let plain_degrees = vec![1; m];
    Ok(FamilySpec {
        r,
        m,
        excluded_index: 1,
        kind: FamilyKind::TrinomialPlusOne { s },
        wt_degrees,
        plain_degrees,
        verified: true,
        warnings: vec![],
        descriptor: format!("trinomial:r={r};s={s}"),
    })
}

/// The nonlinear Toeplitz–Hessenberg family: monic degree r+1 members whose
/// coefficients (a_r, …, a₁) satisfy G = 0 for the order-r generic
/// Toeplitz–Hessenberg determinant.  One constraint of weighted degree r
/// and plain degree r: δ = δ_G = r, D = r − 1.
pub fn family_toeplitz_hessenberg(r: usize) -> Result<FamilySpec> {
    if r == 0 || r % 2 != 0 {
        return Err(Error::BadFamily(format!("Toeplitz–Hessenberg family needs even r ≥ 2, got {r}")));
    }
    Ok(FamilySpec {
        r: r + 1,
        m: 1,
        excluded_index: 0,
        kind: FamilyKind::ToeplitzHessenberg { th_r: r },
        wt_degrees: vec![r as u64],
        plain_degrees: vec![r as u64],
        verified: true,
        warnings: vec![],
        descriptor: format!("toephess:r={r}"),
    })
}

/// User-supplied family from coefficient equalities (conjunction), with m,
/// wt-degrees and plain degrees declared by the caller and hypotheses
/// explicitly unverified.  `equalities` may be empty with m = 0 (the full
/// set of monic degree-r polynomials).
pub fn family_explicit_filter(
    r: usize,
    m: usize,
    wt_degrees: Vec<u64>,
    plain_degrees: Vec<u64>,
    equalities: Vec<(usize, u64)>,
) -> Result<FamilySpec> {
    if r == 0 || m >= r {
        return Err(Error::BadFamily(format!("filter family needs 0 ≤ m < r, got r = {r}, m = {m}")));
    }
    if wt_degrees.len() != m || plain_degrees.len() != m {
        return Err(Error::BadFamily(format!(
            "filter family needs {m} wt-degrees and plain degrees, got {} and {}",
            wt_degrees.len(),
            plain_degrees.len()
        )));
    }
    if wt_degrees.iter().chain(&plain_degrees).any(|&d| d == 0) {
        return Err(Error::BadFamily("constraint degrees must be ≥ 1".into()));
    }
    for (pos, _) in &equalities {
        if *pos >= r {
            return Err(Error::BadFamily(format!("filter position {pos} out of range for degree {r}")));
        }
    }
    let eqs = equalities.clone();
    let predicate: FilterPredicate =
        Arc::new(move |coeffs: &[u64]| eqs.iter().all(|(pos, val)| coeffs[*pos] == *val));
    let constrained: std::collections::HashSet<usize> =
        equalities.iter().map(|(p, _)| *p).collect();
    let excluded_index = (0..r).find(|i| !constrained.contains(i)).unwrap_or(0);
    let mut desc = format!("filter:r={r};m={m}");
    if m > 0 {
        desc.push_str(&format!(
            ";wt={};deg={}",
            wt_degrees.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
            plain_degrees.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
        ));
    }
    for (pos, val) in &equalities {
        desc.push_str(&format!(";a{pos}={val}"));
    }
    Ok(FamilySpec {
        r,
        m,
        excluded_index,
        kind: FamilyKind::ExplicitFilter { predicate, equalities },
        wt_degrees,
        plain_degrees,
        verified: false,
        warnings: vec!["hypotheses (H1)–(H6) unverified for filter families".into()],
        descriptor: desc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prescribed_parameters() {
        // a_{r−1} = 0 only: pivot 1, δ = 1, D = 0
        let spec = family_prescribed_linear(6, &[(5, 0)]).unwrap();
        assert_eq!(spec.m(), 1);
        assert_eq!(spec.delta().unwrap(), 1);
        assert_eq!(spec.big_d(), 0);
        assert_eq!(spec.delta_g().unwrap(), 1);
        assert!(spec.verified());
        assert_eq!(spec.descriptor(), "prescribed:r=6;a5=0");

        // two prescriptions: pivots r−j
        let spec = family_prescribed_linear(6, &[(5, 0), (4, 1)]).unwrap();
        assert_eq!(spec.wt_degrees(), &[1, 2]);
        assert_eq!(spec.delta().unwrap(), 2);
        assert_eq!(spec.big_d(), 1);

        // empty rejected; bad positions rejected; m ≥ r rejected
        assert!(family_prescribed_linear(6, &[]).is_err());
        assert!(family_prescribed_linear(6, &[(6, 0)]).is_err());
        assert!(family_prescribed_linear(2, &[(0, 0), (1, 0)]).is_err());
        // duplicate positions rejected
        assert!(family_prescribed_linear(6, &[(5, 0), (5, 1)]).is_err());

        // lowest position 2 → conditional warning; census-time char check
        let spec = family_prescribed_linear(7, &[(2, 0)]).unwrap();
        assert!(!spec.warnings().is_empty());
        let f7 = FieldCtx::prime(7).unwrap();
        // r(r−1) = 42: char 7 divides it → violation reported
        assert!(!spec.check_hypotheses(&f7).is_empty());
        let f11 = FieldCtx::prime(11).unwrap();
        assert!(spec.check_hypotheses(&f11).is_empty());
    }

    #[test]
    fn trinomial_parameters() {
        let spec = family_trinomial_plus_one(5, 3).unwrap();
        assert_eq!(spec.m(), 2);
        assert_eq!(spec.delta().unwrap(), 5); // 5·1!
        assert_eq!(spec.big_d(), 4); // 4 + 0
        assert_eq!(spec.delta_g().unwrap(), 1);
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(spec.raw_space_size(&f5).unwrap(), 125);
        assert!(family_trinomial_plus_one(5, 2).is_err());
        assert!(family_trinomial_plus_one(5, 4).is_err());

        // members: constant term 1, vanishing a_{s+1}..a_{r−1}
        let members = spec.enumerate_members(&f5, 1_000_000).unwrap();
        assert_eq!(members.len(), 125);
        for f in &members {
            assert_eq!(f5.index_of(&f.coeff(&f5, 0)), 1);
            assert_eq!(f5.index_of(&f.coeff(&f5, 4)), 0);
            assert!(spec.contains(f, &f5).unwrap());
        }
        // no repeats
        let set: std::collections::HashSet<String> =
            members.iter().map(|f| f.render()).collect();
        assert_eq!(set.len(), 125);
        // char ≤ 3 flagged
        let f3 = FieldCtx::prime(3).unwrap();
        assert!(!spec.check_hypotheses(&f3).is_empty());
        assert!(spec.check_hypotheses(&f5).is_empty());
    }

    #[test]
    fn toeplitz_hessenberg_family() {
        let spec = family_toeplitz_hessenberg(4).unwrap();
        assert_eq!(spec.r(), 5);
        assert_eq!(spec.m(), 1);
        assert_eq!(spec.delta().unwrap(), 4);
        assert_eq!(spec.big_d(), 3);
        assert_eq!(spec.delta_g().unwrap(), 4);
        assert!(family_toeplitz_hessenberg(3).is_err());

        let f7 = FieldCtx::prime(7).unwrap();
        // char 7 ∤ 3·5·(3³+4⁴) = 3·5·283
        assert!(spec.check_hypotheses(&f7).is_empty());
        // every member satisfies G = 0, exactly q^r members
        let members = spec.enumerate_members(&f7, 10_000_000).unwrap();
        assert_eq!(members.len(), 2401);
        let set: std::collections::HashSet<String> =
            members.iter().map(|f| f.render()).collect();
        assert_eq!(set.len(), 2401);
        for f in members.iter().take(200) {
            assert!(spec.contains(f, &f7).unwrap());
        }
        // exhaustive cross-check on a smaller field: members = all monic
        // degree-5 polynomials over F_5 with G(a₄..a₁) = 0
        let f5 = FieldCtx::prime(5).unwrap();
        let members5 = spec.enumerate_members(&f5, 10_000_000).unwrap();
        assert_eq!(members5.len(), 625);
        let mut brute = 0usize;
        for code in 0..5u64.pow(5) {
            let coeffs: Vec<u64> = (0..5).map(|i| code / 5u64.pow(i) % 5).collect();
            let mut full = coeffs.clone();
            full.push(1);
            let f = Poly::from_indices(&f5, &full);
            if spec.contains(&f, &f5).unwrap() {
                brute += 1;
            }
        }
        assert_eq!(brute, 625);
    }

    #[test]
    fn filter_family() {
        // m = 0: full set of size q^r
        let spec = family_explicit_filter(4, 0, vec![], vec![], vec![]).unwrap();
        let f3 = FieldCtx::prime(3).unwrap();
        assert_eq!(spec.enumerate_members(&f3, 1_000_000).unwrap().len(), 81);
        assert!(!spec.verified());
        assert_eq!(spec.delta().unwrap(), 1);
        assert_eq!(spec.big_d(), 0);
        assert_eq!(
            spec.to_json()["hypotheses"],
            serde_json::Value::String("unverified".into())
        );

        // predicate a₀ = 1 with m = 1, wt = r: size q^{r−1}
        let spec = family_explicit_filter(4, 1, vec![4], vec![1], vec![(0, 1)]).unwrap();
        let members = spec.enumerate_members(&f3, 1_000_000).unwrap();
        assert_eq!(members.len(), 27);
        for f in &members {
            assert_eq!(f3.index_of(&f.coeff(&f3, 0)), 1);
        }
        // budget enforcement
        assert!(matches!(
            spec.enumerate_members(&f3, 10),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn descriptor_roundtrip() {
        for desc in [
            "prescribed:r=6;a5=0;a4=1",
            "trinomial:r=5;s=3",
            "toephess:r=4",
            "filter:r=4;m=1;wt=4;deg=1;a0=1",
            "filter:r=4;m=0",
        ] {
            let spec = FamilySpec::parse(desc).unwrap();
            assert_eq!(spec.descriptor(), desc, "descriptor roundtrip for {desc}");
            let reparsed = FamilySpec::parse(spec.descriptor()).unwrap();
            assert_eq!(reparsed.descriptor(), desc);
        }
        assert!(FamilySpec::parse("nope:r=4").is_err());
        assert!(FamilySpec::parse("trinomial:r=5").is_err());
        assert!(FamilySpec::parse("filter:r=4;m=1;a0=1").is_err());
    }

    #[test]
    fn sampling_uniform_and_deterministic() {
        let spec = family_trinomial_plus_one(5, 3).unwrap();
        let f5 = FieldCtx::prime(5).unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = spec.sample_member(&f5, &mut r1, 100).unwrap();
            let b = spec.sample_member(&f5, &mut r2, 100).unwrap();
            assert_eq!(a, b);
            assert!(spec.contains(&a, &f5).unwrap());
        }
        // chi-square uniformity over the 125-member family, 10⁵ samples
        let mut counts = std::collections::HashMap::new();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 100_000usize;
        for _ in 0..n {
            let f = spec.sample_member(&f5, &mut rng, 100).unwrap();
            *counts.entry(f.render()).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 125);
        let expect = n as f64 / 125.0;
        let chi2: f64 = counts.values().map(|&c| {
            let d = c as f64 - expect;
            d * d / expect
        }).sum();
        // 124 dof: critical value at 10⁻³ ≈ 181.99
        assert!(chi2 < 182.0, "chi-square {chi2} too large");

        // rejection cap error is reachable
        let never = family_explicit_filter(3, 1, vec![1], vec![1], vec![(0, 999)]).unwrap();
        let f3 = FieldCtx::prime(3).unwrap();
        assert!(matches!(
            never.sample_member(&f3, &mut rng, 10),
            Err(Error::RejectionCapExceeded(10))
        ));
    }

    #[test]
    fn member_at_partitioning_is_consistent() {
        // range-partitioned decoding matches full enumeration
        let spec = family_toeplitz_hessenberg(4).unwrap();
        let f5 = FieldCtx::prime(5).unwrap();
        let total = spec.raw_space_size(&f5).unwrap();
        let full = spec.enumerate_members(&f5, 1_000_000).unwrap();
        let mut pieced = vec![];
        let chunk = total / 3;
        for range in [0..chunk, chunk..2 * chunk, 2 * chunk..total] {
            for idx in range {
                if let Some(p) = spec.member_at(idx, &f5).unwrap() {
                    pieced.push(p);
                }
            }
        }
        assert_eq!(pieced, full);
        assert!(spec.member_at(total, &f5).is_err());
    }
}
