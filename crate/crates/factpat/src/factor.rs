//! The classical four-stage factorization algorithm with per-stage cost
//! counters.
//!
//! Stage 1 (ERF) eliminates repeated factors; stage 2 (DDF) splits the
//! square-free part into products of irreducibles of equal degree; stage 3
//! (EDF) splits each of those products completely; stage 4 recurses on the
//! quotient by the square-free part.  Each stage is implemented exactly as
//! analyzed — in particular DDF runs its main loop once per degree up to the
//! largest factor degree with no early exit, and EDF is the Las Vegas
//! square-root split (odd `q` only).

use rand::Rng;
use serde::Serialize;

use crate::count::{self, CostTally};
use crate::ff::{CtxId, FieldCtx};
use crate::poly::Poly;
use crate::{Error, Result};

/// A complete factorization into distinct monic irreducibles with
/// multiplicities, canonically sorted (degree, then lexicographic on
/// coefficient indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(Poly, u32)>,
    ctx: CtxId,
}

impl Factorization {
    /// The sorted `(irreducible, multiplicity)` pairs.
    pub fn factors(&self) -> &[(Poly, u32)] {
        &self.factors
    }

    /// The owning field context id.
    pub fn ctx_id(&self) -> CtxId {
        self.ctx
    }

    /// Assembles and canonically sorts a factorization from possibly
    /// unsorted, possibly repeated factors.
    pub fn from_parts(ctx: &FieldCtx, parts: Vec<(Poly, u32)>) -> Factorization {
        let mut merged: Vec<(Poly, u32)> = vec![];
        for (p, e) in parts {
            if let Some(slot) = merged.iter_mut().find(|(q, _)| *q == p) {
                slot.1 += e;
            } else {
                merged.push((p, e));
            }
        }
        merged.sort_by(|(a, _), (b, _)| canonical_cmp(ctx, a, b));
        Factorization { factors: merged, ctx: ctx.id() }
    }

    /// Multiplies the factorization back out.
    pub fn product(&self, ctx: &FieldCtx) -> Result<Poly> {
        let mut acc = Poly::constant(ctx, ctx.one());
        for (p, e) in &self.factors {
            for _ in 0..*e {
                acc = acc.mul(p, ctx)?;
            }
        }
        Ok(acc)
    }

    /// Total degree Σ eᵢ·deg fᵢ.
    pub fn total_degree(&self) -> usize {
        self.factors
            .iter()
            .map(|(p, e)| p.degree().unwrap_or(0) * *e as usize)
            .sum()
    }

    /// Text form `"poly^mult * poly^mult * ..."` in the coefficient format.
    pub fn render(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|(p, e)| format!("{}^{}", p.render(), e))
            .collect::<Vec<_>>()
            .join(" * ")
    }

    /// JSON-friendly form mirroring the type.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "factors": self.factors.iter().map(|(p, e)| {
                serde_json::json!({ "poly": p.render(), "mult": e })
            }).collect::<Vec<_>>()
        })
    }
}

/// Canonical factor order: by degree, then lexicographic on coefficient
/// indices ascending degree.
fn canonical_cmp(ctx: &FieldCtx, a: &Poly, b: &Poly) -> std::cmp::Ordering {
    let da = a.degree().unwrap_or(0);
    let db = b.degree().unwrap_or(0);
    da.cmp(&db).then_with(|| {
        for i in 0..=da {
            let ia = ctx.index_of(&a.coeff(ctx, i));
            let ib = ctx.index_of(&b.coeff(ctx, i));
            match ia.cmp(&ib) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// Per-stage operation tallies for one `factor` run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CostReport {
    /// ERF (elimination of repeated factors).
    pub x1: CostTally,
    /// DDF (distinct-degree factorization).
    pub x2: CostTally,
    /// EDF (equal-degree factorization), summed over parts.
    pub x3: CostTally,
    /// The recursion on `f / ERF(f)`, including the division itself.
    pub x4: CostTally,
    /// Input degree.
    pub r: usize,
    /// Field size.
    pub q: u64,
}

impl CostReport {
    /// Sum of the four stage tallies.
    pub fn total(&self) -> CostTally {
        self.x1 + self.x2 + self.x3 + self.x4
    }

    /// Merges another report (tallies add; `r`, `q` must agree in sensible
    /// uses and are kept from `self`).
    pub fn merge(&mut self, other: &CostReport) {
        self.x1 += other.x1;
        self.x2 += other.x2;
        self.x3 += other.x3;
        self.x4 += other.x4;
    }
}

/// Output of distinct-degree factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DdfOutput {
    /// `parts[k−1] = b(k)`, the product of all degree-k irreducible factors
    /// of the input (possibly 1); trailing `b(k) = 1` entries are trimmed.
    pub parts: Vec<Poly>,
    /// Largest irreducible-factor degree (0 for constant input).
    pub s: usize,
}

/// Stage 1 — elimination of repeated factors.
///
/// Implements exactly: `u := gcd(f, f′)`, `v := f/u`,
/// `w := u / gcd(u, v^r)`, and if `w ≠ 1` returns `v · erf(w^{1/p})`.
/// The power `v^r` is computed modulo `u` (same gcd, bounded degree).  The
/// exponent `r` is the degree of the current recursion input: any exponent
/// at least the maximal multiplicity yields the same result.
pub fn erf(f: &Poly, ctx: &FieldCtx) -> Result<(Poly, CostTally)> {
    if !f.is_monic(ctx) {
        return Err(Error::NotMonic);
    }
    if f.degree() == Some(0) {
        return Err(Error::DegreeTooSmall("erf needs degree ≥ 1".into()));
    }
    let (out, tally) = count::with_scope(|| erf_inner(f, ctx));
    Ok((out?, tally))
}

fn erf_inner(f: &Poly, ctx: &FieldCtx) -> Result<Poly> {
    let r = f.degree().expect("nonconstant");
    let fd = f.derivative(ctx)?;
    let u = f.gcd(&fd, ctx)?; // gcd(f, 0) = monic f handles p-th powers
    let (v, _) = f.divrem(&u, ctx)?;
    // gcd(u, v^r) with v^r reduced mod u; for square-free f, u = 1 and the
    // reduction is trivial, so the branch still performs exactly two gcds
    // and one division.
    let t = if u.degree().unwrap_or(0) >= 1 {
        v.powmod(r as u128, &u, ctx)?
    } else {
        Poly::zero(ctx)
    };
    let g2 = u.gcd(&t, ctx)?;
    if g2 == u {
        // w = u / gcd(u, v^r) = 1: recursion bottoms out.
        return Ok(v);
    }
    let (w, _) = u.divrem(&g2, ctx)?;
    let root = pth_root_poly(&w, ctx)?;
    let rest = erf_inner(&root, ctx)?;
    v.mul(&rest, ctx)
}

/// p-th root of a polynomial of the form `w = Σ c_i T^{p·i}`:
/// `Σ pth_root(c_i) T^i`.
fn pth_root_poly(w: &Poly, ctx: &FieldCtx) -> Result<Poly> {
    let p = ctx.p() as usize;
    let d = w.degree().expect("nonzero");
    debug_assert_eq!(d % p, 0, "input must be a p-th power");
    let mut coeffs = Vec::with_capacity(d / p + 1);
    for i in 0..=d / p {
        let c = w.coeff(ctx, p * i);
        coeffs.push(ctx.pth_root(&c)?);
    }
    // sanity: intermediate coefficients must vanish
    debug_assert!((0..=d).all(|i| i % p == 0 || ctx.is_zero(&w.coeff(ctx, i))));
    Ok(Poly::from_coeffs(ctx, coeffs))
}

/// Stage 2 — distinct-degree factorization of a monic square-free input.
///
/// `g := a`, `h := T`; while `g ≠ 1`: `h := h^q mod g`,
/// `b(k) := gcd(h − T, g)`, `g := g / b(k)`.  The loop runs exactly once per
/// degree up to the largest factor degree (no early exit), matching the
/// analyzed per-iteration cost of one `powmod` by `q`, one gcd and one exact
/// division.
pub fn ddf(a: &Poly, ctx: &FieldCtx) -> Result<(DdfOutput, CostTally)> {
    if !a.is_monic(ctx) {
        return Err(Error::NotMonic);
    }
    let (out, tally) = count::with_scope(|| ddf_inner(a, ctx));
    Ok((out?, tally))
}

fn ddf_inner(a: &Poly, ctx: &FieldCtx) -> Result<DdfOutput> {
    let q = ctx.q();
    let t = Poly::x(ctx);
    let mut g = a.clone();
    let mut h = t.clone();
    let mut parts: Vec<Poly> = vec![];
    while g.degree().unwrap_or(0) >= 1 {
        h = h.powmod(q as u128, &g, ctx)?;
        let diff = h.sub(&t, ctx)?;
        // gcd(0, g) = g covers the case where every remaining factor has
        // degree dividing k; the gcd call is made unconditionally so each
        // iteration records exactly one gcd.
        let b = diff.gcd(&g, ctx)?;
        let (next, _) = g.divrem(&b, ctx)?;
        g = next;
        parts.push(b);
        // h is carried as-is; the next powmod reduces it modulo the smaller
        // g internally, so each iteration stays at exactly one powmod, one
        // gcd and one division.
    }
    // trim trailing b(k) = 1 entries so s = max factor degree
    while parts.last().is_some_and(|p| p.is_one(ctx)) {
        parts.pop();
    }
    let s = parts.len();
    Ok(DdfOutput { parts, s })
}

/// Stage 3 — equal-degree factorization (odd `q` only).
///
/// Input: monic square-free `c` whose irreducible factors all have degree
/// `k`.  Picks a random `h` with `deg h = deg c − 1` (nonzero leading
/// coefficient), computes `g := h^{(q^k−1)/2} − 1 mod c`, `d := gcd(g, c)`,
/// and recurses on `d` and `c/d`; trivial splits simply trigger another
/// round (Las Vegas).  Deterministic given the rng seed.
pub fn edf(c: &Poly, k: usize, ctx: &FieldCtx, rng: &mut impl Rng) -> Result<(Vec<Poly>, CostTally)> {
    if ctx.q() % 2 == 0 {
        return Err(Error::EvenFieldEdf);
    }
    if !c.is_monic(ctx) {
        return Err(Error::NotMonic);
    }
    let deg = c.degree().unwrap_or(0);
    if k == 0 || deg % k != 0 {
        return Err(Error::BadEdfDegree { k, deg });
    }
    // deg == k never uses the exponent, and q^k may not fit u128 there
    let e = if deg == k { 0 } else { edf_exponent(ctx.q(), k)? };
    let (out, tally) = count::with_scope(|| edf_inner(c, k, e, ctx, rng));
    let mut factors = out?;
    factors.sort_by(|a, b| canonical_cmp(ctx, a, b));
    Ok((factors, tally))
}

/// `(q^k − 1) / 2`, the splitting exponent.
fn edf_exponent(q: u64, k: usize) -> Result<u128> {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc
            .checked_mul(q as u128)
            .ok_or_else(|| Error::Overflow(format!("q^{k} with q = {q}")))?;
    }
    Ok((acc - 1) / 2)
}

fn edf_inner(
    c: &Poly,
    k: usize,
    e: u128,
    ctx: &FieldCtx,
    rng: &mut impl Rng,
) -> Result<Vec<Poly>> {
    let deg = c.degree().unwrap_or(0);
    if deg == 0 {
        return Ok(vec![]);
    }
    if deg == k {
        return Ok(vec![c.clone()]);
    }
    let (d, _) = edf_round(c, e, ctx, rng)?;
    let (rest, _) = c.divrem(&d, ctx)?;
    let mut left = edf_inner(&d, k, e, ctx, rng)?;
    let right = edf_inner(&rest, k, e, ctx, rng)?;
    left.extend(right);
    Ok(left)
}

/// One EDF splitting round: draws `h`, computes
/// `g := h^{(q^k−1)/2} − 1 mod c` and `d := gcd(g, c)` (with `gcd(0, c) = c`).
/// Returns `(d, split)` where `split` is true iff `1 ≤ deg d < deg c`.
/// Public so the experiment harness can measure per-round split frequencies.
pub fn edf_round(
    c: &Poly,
    e: u128,
    ctx: &FieldCtx,
    rng: &mut impl Rng,
) -> Result<(Poly, bool)> {
    let deg = c.degree().expect("nonconstant input");
    // random h of degree deg c − 1 with nonzero leading coefficient
    let mut coeffs: Vec<_> = (0..deg - 1).map(|_| ctx.random_element(rng)).collect();
    coeffs.push(ctx.random_nonzero(rng));
    let h = Poly::from_coeffs(ctx, coeffs);
    let pow = h.powmod(e, c, ctx)?;
    let g = pow.sub(&Poly::constant(ctx, ctx.one()), ctx)?;
    let d = if g.is_zero() {
        c.clone()
    } else {
        g.gcd(c, ctx)?
    };
    let dd = d.degree().unwrap_or(0);
    Ok((d, dd >= 1 && dd < deg))
}

/// The splitting exponent `(q^k − 1)/2` for external callers (experiments).
pub fn splitting_exponent(ctx: &FieldCtx, k: usize) -> Result<u128> {
    if ctx.q() % 2 == 0 {
        return Err(Error::EvenFieldEdf);
    }
    edf_exponent(ctx.q(), k)
}

/// The four-stage driver: `a_f := erf(f)`, `ddf(a_f)`, `edf` per part, then
/// recursion on `f / a_f` with the entire recursive call booked under `x4`.
pub fn factor(f: &Poly, ctx: &FieldCtx, rng: &mut impl Rng) -> Result<(Factorization, CostReport)> {
    if !f.is_monic(ctx) {
        return Err(Error::NotMonic);
    }
    let r = f.degree().ok_or(Error::DegreeTooSmall("factor needs degree ≥ 1".into()))?;
    if r == 0 {
        return Err(Error::DegreeTooSmall("factor needs degree ≥ 1".into()));
    }
    if ctx.q() % 2 == 0 {
        return Err(Error::EvenFieldEdf);
    }
    let mut report = CostReport { r, q: ctx.q(), ..CostReport::default() };

    let (a_f, t1) = erf(f, ctx)?;
    report.x1 = t1;

    let (ddf_out, t2) = ddf(&a_f, ctx)?;
    report.x2 = t2;

    let mut parts: Vec<(Poly, u32)> = vec![];
    for (i, b) in ddf_out.parts.iter().enumerate() {
        let k = i + 1;
        if b.degree().unwrap_or(0) == 0 {
            continue;
        }
        let (factors, t3) = edf(b, k, ctx, rng)?;
        report.x3 += t3;
        parts.extend(factors.into_iter().map(|p| (p, 1)));
    }

    // Stage 4: divide out the square-free part and recurse on the rest.
    let (div_res, t4div) = count::with_scope(|| f.divrem(&a_f, ctx));
    let (rest, _) = div_res?;
    report.x4 = t4div;
    if rest.degree().unwrap_or(0) >= 1 {
        let (sub_fz, sub_report) = factor(&rest, ctx, rng)?;
        report.x4 += sub_report.total();
        parts.extend(sub_fz.factors.iter().cloned());
    }

    Ok((Factorization::from_parts(ctx, parts), report))
}

/// Rabin irreducibility test: `f` monic of degree `r` is irreducible iff
/// `T^{q^r} ≡ T (mod f)` and `gcd(T^{q^{r/ℓ}} − T, f) = 1` for every prime
/// `ℓ | r`.  The `q^j`-th powers are taken as `j` successive `powmod`s by
/// `q`, so exponents never overflow.
pub fn is_irreducible(f: &Poly, ctx: &FieldCtx) -> Result<bool> {
    if !f.is_monic(ctx) {
        return Err(Error::NotMonic);
    }
    let r = f.degree().unwrap();
    if r == 0 {
        return Err(Error::DegreeTooSmall("irreducibility needs degree ≥ 1".into()));
    }
    if r == 1 {
        return Ok(true);
    }
    let q = ctx.q() as u128;
    let t = Poly::x(ctx);
    let qth_power_iterate = |start: &Poly, steps: usize| -> Result<Poly> {
        let mut h = start.divrem(f, ctx)?.1;
        for _ in 0..steps {
            h = h.powmod(q, f, ctx)?;
        }
        Ok(h)
    };
    if qth_power_iterate(&t, r)? != t.divrem(f, ctx)?.1 {
        return Ok(false);
    }
    for l in prime_divisors(r as u64) {
        let h = qth_power_iterate(&t, r / l as usize)?;
        let diff = h.sub(&t, ctx)?;
        if diff.is_zero() {
            return Ok(false);
        }
        if !diff.gcd(f, ctx)?.is_one(ctx) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The factorization pattern λ of a degree-r factorization:
/// `λ_i` = sum of multiplicities of the degree-i factors; `Σ i·λ_i = r`.
pub fn pattern_of(fz: &Factorization) -> crate::patterns::FactorizationPattern {
    let r = fz.total_degree();
    let mut lambda = vec![0u32; r];
    for (p, e) in fz.factors() {
        let d = p.degree().unwrap_or(0);
        if d >= 1 {
            lambda[d - 1] += *e;
        }
    }
    crate::patterns::FactorizationPattern::new(lambda).expect("degrees sum to r by construction")
}
