//! Dense univariate polynomial arithmetic over `F_q`.
//!
//! Polynomials store ascending coefficients; the zero polynomial is the empty
//! vector and its degree is a "negative infinity" sentinel (`None`), distinct
//! from degree-0 constants.  Multiplication is schoolbook with Karatsuba
//! above a fixed threshold; resultants and the first subresultant come from
//! the polynomial remainder sequence with explicit sign and leading
//! coefficient bookkeeping, normalized to the determinant of the Sylvester
//! matrix with the rows of the *first* argument on top (the test suite pins
//! this against a Sylvester-minor determinant oracle).

use std::fmt;

use crate::count;
use crate::ff::{CtxId, FieldCtx, FieldElement};
use crate::{Error, Result};

/// Degree above which multiplication switches from schoolbook to Karatsuba.
const KARATSUBA_THRESHOLD: usize = 32;

/// A dense univariate polynomial over one field context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ctx: CtxId,
    /// Ascending coefficients; empty for the zero polynomial; the last entry
    /// is nonzero otherwise.
    coeffs: Vec<FieldElement>,
}

impl Poly {
    /// The zero polynomial.
    pub fn zero(ctx: &FieldCtx) -> Poly {
        Poly { ctx: ctx.id(), coeffs: vec![] }
    }

    /// The constant polynomial `a`.
    pub fn constant(ctx: &FieldCtx, a: FieldElement) -> Poly {
        Poly::from_coeffs(ctx, vec![a])
    }

    /// The identity polynomial `T`.
    pub fn x(ctx: &FieldCtx) -> Poly {
        Poly { ctx: ctx.id(), coeffs: vec![ctx.zero(), ctx.one()] }
    }

    /// Builds a polynomial from ascending coefficients, trimming leading
    /// zeros.  All coefficients must belong to `ctx`.
    pub fn from_coeffs(ctx: &FieldCtx, mut coeffs: Vec<FieldElement>) -> Poly {
        assert!(
            coeffs.iter().all(|c| c.ctx_id() == ctx.id()),
            "coefficient from a different field context"
        );
        while coeffs.last().is_some_and(|c| ctx.is_zero(c)) {
            coeffs.pop();
        }
        Poly { ctx: ctx.id(), coeffs }
    }

    /// Builds a polynomial whose coefficients are given by canonical element
    /// indices (convenient in tests and enumeration).
    pub fn from_indices(ctx: &FieldCtx, idx: &[u64]) -> Poly {
        let coeffs = idx.iter().map(|&i| ctx.element_from_index(i)).collect();
        Poly::from_coeffs(ctx, coeffs)
    }

    /// Parses the text format: comma-separated ascending coefficients, each
    /// in the field-element format (`"1,0,1"` is `T²+1`; extension
    /// coefficients use semicolon-separated coordinates).
    pub fn parse(ctx: &FieldCtx, s: &str) -> Result<Poly> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Poly::zero(ctx));
        }
        let coeffs = s
            .split(',')
            .map(|c| FieldElement::parse(ctx, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(ctx, coeffs))
    }

    /// Renders the text format parsed by [`Poly::parse`]; the zero
    /// polynomial renders as `"0"`.
    pub fn render(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        parts.join(",")
    }

    /// The owning context id.
    pub fn ctx_id(&self) -> CtxId {
        self.ctx
    }

    /// Ascending coefficients (empty for zero).
    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial (negative infinity).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True iff this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True iff this is a (nonzero) constant.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// True iff this is the constant 1.
    pub fn is_one(&self, ctx: &FieldCtx) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ctx.one()
    }

    /// The leading coefficient (`None` for zero).
    pub fn leading_coefficient(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    /// The coefficient of `T^i` (zero beyond the degree).
    pub fn coeff(&self, ctx: &FieldCtx, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ctx.zero())
    }

    /// True iff monic.
    pub fn is_monic(&self, ctx: &FieldCtx) -> bool {
        self.leading_coefficient().is_some_and(|c| *c == ctx.one())
    }

    fn check(&self, ctx: &FieldCtx) -> Result<()> {
        if self.ctx == ctx.id() {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn check_pair(&self, other: &Poly, ctx: &FieldCtx) -> Result<()> {
        self.check(ctx)?;
        other.check(ctx)
    }

    /// `self + other`.
    pub fn add(&self, other: &Poly, ctx: &FieldCtx) -> Result<Poly> {
        self.check_pair(other, ctx)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ctx.add_unchecked(&self.coeff(ctx, i), &other.coeff(ctx, i)));
        }
        Ok(Poly::from_coeffs(ctx, out))
    }

    /// `self - other`.
    pub fn sub(&self, other: &Poly, ctx: &FieldCtx) -> Result<Poly> {
        self.check_pair(other, ctx)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ctx.sub_unchecked(&self.coeff(ctx, i), &other.coeff(ctx, i)));
        }
        Ok(Poly::from_coeffs(ctx, out))
    }

    /// `-self`.
    pub fn neg(&self, ctx: &FieldCtx) -> Result<Poly> {
        self.check(ctx)?;
        let out = self.coeffs.iter().map(|c| ctx.neg_unchecked(c)).collect();
        Ok(Poly { ctx: self.ctx, coeffs: out })
    }

    /// Scales every coefficient by `a`.
    pub fn scale(&self, a: &FieldElement, ctx: &FieldCtx) -> Result<Poly> {
        self.check(ctx)?;
        if ctx.is_zero(a) {
            return Ok(Poly::zero(ctx));
        }
        let out = self.coeffs.iter().map(|c| ctx.mul_unchecked(c, a)).collect();
        Ok(Poly::from_coeffs(ctx, out))
    }

    /// `self * other`; schoolbook below the Karatsuba threshold.  Field
    /// multiplications are recorded in the active counter scope.
    pub fn mul(&self, other: &Poly, ctx: &FieldCtx) -> Result<Poly> {
        self.check_pair(other, ctx)?;
        Ok(mul_impl(ctx, &self.coeffs, &other.coeffs))
    }

    /// Euclidean division: returns `(quot, rem)` with
    /// `self = quot·other + rem` and `deg rem < deg other`.
    pub fn divrem(&self, other: &Poly, ctx: &FieldCtx) -> Result<(Poly, Poly)> {
        self.check_pair(other, ctx)?;
        count::record_divrem_call();
        divrem_impl(ctx, self, other)
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(&self, other: &Poly, ctx: &FieldCtx) -> Result<Poly> {
        self.check_pair(other, ctx)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdBothZero);
        }
        count::record_gcd_call();
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        while !r1.is_zero() {
            let rem = divrem_impl(ctx, &r0, &r1)?.1;
            r0 = r1;
            r1 = rem;
        }
        r0.monic(ctx)
    }

    /// Monic normalization: divides by the leading coefficient.
    pub fn monic(&self, ctx: &FieldCtx) -> Result<Poly> {
        self.check(ctx)?;
        match self.leading_coefficient() {
            None => Ok(self.clone()),
            Some(lc) if *lc == ctx.one() => Ok(self.clone()),
            Some(lc) => {
                let inv = ctx.inv(lc)?;
                self.scale(&inv, ctx)
            }
        }
    }

    /// `self^e mod modulus` by left-to-right square and multiply.  For
    /// `e ≥ 1` the recorded modular-multiplication count is exactly
    /// `⌊log₂ e⌋ + ν(e) − 1`.
    pub fn powmod(&self, e: u128, modulus: &Poly, ctx: &FieldCtx) -> Result<Poly> {
        self.check_pair(modulus, ctx)?;
        match modulus.degree() {
            None => return Err(Error::DivisionByZero),
            Some(0) => return Err(Error::ConstantModulus),
            Some(_) => {}
        }
        let base = divrem_impl(ctx, self, modulus)?.1;
        if e == 0 {
            return divrem_impl(ctx, &Poly::constant(ctx, ctx.one()), modulus).map(|(_, r)| r);
        }
        let modmul = |a: &Poly, b: &Poly| -> Result<Poly> {
            count::record_powmod_mul();
            let prod = mul_impl(ctx, &a.coeffs, &b.coeffs);
            Ok(divrem_impl(ctx, &prod, modulus)?.1)
        };
        let mut acc = base.clone();
        let bits = 128 - e.leading_zeros();
        for i in (0..bits - 1).rev() {
            acc = modmul(&acc, &acc)?;
            if (e >> i) & 1 == 1 {
                acc = modmul(&acc, &base)?;
            }
        }
        Ok(acc)
    }

    /// Formal derivative (respects characteristic p).
    pub fn derivative(&self, ctx: &FieldCtx) -> Result<Poly> {
        self.check(ctx)?;
        if self.coeffs.len() <= 1 {
            return Ok(Poly::zero(ctx));
        }
        let p = ctx.p();
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            // multiply by the scalar i mod p via repeated structure: i < 2^63
            let scalar = ctx.element_from_index({
                // scalar i·1 in F_p embeds in any F_q through the prime field
                (i as u64) % p
            });
            out.push(small_scalar_mul(ctx, &scalar, c));
        }
        Ok(Poly::from_coeffs(ctx, out))
    }

    /// Horner evaluation `self(a)`.
    pub fn evaluate(&self, a: &FieldElement, ctx: &FieldCtx) -> Result<FieldElement> {
        self.check(ctx)?;
        if a.ctx_id() != ctx.id() {
            return Err(Error::FieldMismatch);
        }
        let mut acc = ctx.zero();
        for c in self.coeffs.iter().rev() {
            acc = ctx.add_unchecked(&ctx.mul_unchecked(&acc, a), c);
        }
        Ok(acc)
    }

    /// Resultant of `self` and `other`, normalized as the determinant of the
    /// Sylvester matrix of `(self, other)` with the rows of `self` first.
    /// Computed by the remainder sequence with exact sign and leading
    /// coefficient bookkeeping.
    pub fn resultant(&self, other: &Poly, ctx: &FieldCtx) -> Result<FieldElement> {
        self.check_pair(other, ctx)?;
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroResultantInput);
        }
        resultant_impl(ctx, self, other)
    }

    /// Discriminant `Disc(f) = Res(f, f′)` (no extra scaling).  By
    /// convention `Res(f, 0) = 0` when `f′` vanishes identically, which
    /// preserves `Disc(f) = 0 ⟺ f not square-free`.
    pub fn discriminant(&self, ctx: &FieldCtx) -> Result<FieldElement> {
        self.check(ctx)?;
        match self.degree() {
            None | Some(0) => Err(Error::DegreeTooSmall("discriminant needs degree ≥ 1".into())),
            Some(_) => {
                let d = self.derivative(ctx)?;
                if d.is_zero() {
                    return Ok(ctx.zero());
                }
                resultant_impl(ctx, self, &d)
            }
        }
    }

    /// First subdiscriminant: the degree-1 principal subresultant coefficient
    /// of `(f, f′)`, from the same remainder sequence.
    pub fn subdiscriminant1(&self, ctx: &FieldCtx) -> Result<FieldElement> {
        self.check(ctx)?;
        match self.degree() {
            None | Some(0) | Some(1) => {
                Err(Error::DegreeTooSmall("subdiscriminant needs degree ≥ 2".into()))
            }
            Some(_) => {
                let d = self.derivative(ctx)?;
                if d.is_zero() {
                    // f is a p-th power: gcd(f, f′) = f of degree ≥ 2, so the
                    // first subresultant vanishes.
                    return Ok(ctx.zero());
                }
                principal_subresultant(ctx, self, &d, 1)
            }
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

fn small_scalar_mul(ctx: &FieldCtx, scalar: &FieldElement, c: &FieldElement) -> FieldElement {
    if ctx.is_zero(scalar) {
        ctx.zero()
    } else {
        ctx.mul_unchecked(scalar, c)
    }
}

// --- multiplication ---

fn mul_impl(ctx: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Poly { ctx: ctx.id(), coeffs: vec![] };
    }
    let coeffs = if a.len().min(b.len()) > KARATSUBA_THRESHOLD {
        karatsuba(ctx, a, b)
    } else {
        schoolbook(ctx, a, b)
    };
    Poly::from_coeffs(ctx, coeffs)
}

fn schoolbook(ctx: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut out = vec![ctx.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if ctx.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if ctx.is_zero(y) {
                continue;
            }
            out[i + j] = ctx.add_unchecked(&out[i + j], &ctx.mul_unchecked(x, y));
        }
    }
    out
}

fn karatsuba(ctx: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    if a.len().min(b.len()) <= KARATSUBA_THRESHOLD {
        return schoolbook(ctx, a, b);
    }
    let half = a.len().max(b.len()).div_ceil(2);
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));
    let z0 = karatsuba(ctx, a0, b0);
    let z2 = if a1.is_empty() || b1.is_empty() { vec![] } else { karatsuba(ctx, a1, b1) };
    let sa = slice_add(ctx, a0, a1);
    let sb = slice_add(ctx, b0, b1);
    let z1 = karatsuba(ctx, &sa, &sb);

    let mut out = vec![ctx.zero(); a.len() + b.len() - 1];
    for (i, c) in z0.iter().enumerate() {
        out[i] = ctx.add_unchecked(&out[i], c);
    }
    for (i, c) in z1.iter().enumerate() {
        // middle term: z1 − z0 − z2
        let mut m = c.clone();
        if let Some(c0) = z0.get(i) {
            m = ctx.sub_unchecked(&m, c0);
        }
        if let Some(c2) = z2.get(i) {
            m = ctx.sub_unchecked(&m, c2);
        }
        out[half + i] = ctx.add_unchecked(&out[half + i], &m);
    }
    for (i, c) in z2.iter().enumerate() {
        out[2 * half + i] = ctx.add_unchecked(&out[2 * half + i], c);
    }
    out
}

fn slice_add(ctx: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => ctx.add_unchecked(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

// --- division (internal entry; public divrem records the call) ---

fn divrem_impl(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
    let Some(db) = b.degree() else {
        return Err(Error::DivisionByZero);
    };
    let Some(da) = a.degree() else {
        return Ok((Poly::zero(ctx), Poly::zero(ctx)));
    };
    if da < db {
        return Ok((Poly::zero(ctx), a.clone()));
    }
    let lead_inv = ctx.inv(b.leading_coefficient().unwrap())?;
    let mut rem = a.coeffs.clone();
    let mut quot = vec![ctx.zero(); da - db + 1];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db].clone();
        if ctx.is_zero(&c) {
            continue;
        }
        let qc = ctx.mul_unchecked(&c, &lead_inv);
        for (j, bc) in b.coeffs.iter().enumerate() {
            if !ctx.is_zero(bc) {
                let t = ctx.mul_unchecked(&qc, bc);
                rem[i + j] = ctx.sub_unchecked(&rem[i + j], &t);
            }
        }
        quot[i] = qc;
    }
    Ok((Poly::from_coeffs(ctx, quot), Poly::from_coeffs(ctx, rem)))
}

// --- resultant and subresultants via the remainder sequence ---

/// Res(f, g) for nonzero f, g, Sylvester convention "f-rows first":
/// iteratively applies Res(f, g) = (−1)^{deg f·deg g} lc(g)^{deg f − deg r}
/// Res(g, r) with r = f rem g, with base case Res(f, c) = c^{deg f}.
fn resultant_impl(ctx: &FieldCtx, f: &Poly, g: &Poly) -> Result<FieldElement> {
    let mut f = f.clone();
    let mut g = g.clone();
    let mut acc = ctx.one();
    let mut negate = false;
    loop {
        let df = f.degree().expect("nonzero by invariant");
        let dg = g.degree().expect("nonzero by invariant");
        if df == 0 {
            // Res(c, g) = c^{deg g}
            let base = elem_pow(ctx, &f.coeffs[0], dg as u64);
            return Ok(finish(ctx, acc, negate, base));
        }
        if dg == 0 {
            let base = elem_pow(ctx, &g.coeffs[0], df as u64);
            return Ok(finish(ctx, acc, negate, base));
        }
        if df < dg {
            // swap with sign (−1)^{df·dg}
            if df % 2 == 1 && dg % 2 == 1 {
                negate = !negate;
            }
            std::mem::swap(&mut f, &mut g);
            continue;
        }
        let r = divrem_impl(ctx, &f, &g)?.1;
        let Some(dr) = r.degree() else {
            // nontrivial common factor
            return Ok(ctx.zero());
        };
        if df % 2 == 1 && dg % 2 == 1 {
            negate = !negate;
        }
        let lc = g.leading_coefficient().unwrap();
        acc = ctx.mul_unchecked(&acc, &elem_pow(ctx, lc, (df - dr) as u64));
        f = g;
        g = r;
    }
}

fn finish(ctx: &FieldCtx, acc: FieldElement, negate: bool, base: FieldElement) -> FieldElement {
    let v = ctx.mul_unchecked(&acc, &base);
    if negate {
        ctx.neg_unchecked(&v)
    } else {
        v
    }
}

fn elem_pow(ctx: &FieldCtx, a: &FieldElement, e: u64) -> FieldElement {
    if e == 0 {
        return ctx.one();
    }
    if ctx.is_zero(a) {
        return ctx.zero();
    }
    ctx.pow_unchecked(a, e)
}

/// j-th principal subresultant coefficient of (f, g), deg f ≥ deg g, both
/// nonzero, under the same f-rows-first Sylvester convention.  Recursive
/// structure theorem for the remainder sequence: with r = f rem g,
/// sres_j(f, g) = (−1)^{(deg f−j)(deg g−j)} lc(g)^{deg f − deg r}
/// sres_j(g, r) for j < deg g, vanishing between remainder degrees, with
/// sres_m(f, g) = lc(g)^{deg f − m} at m = deg g.  The sign is pinned by the
/// exhaustive Sylvester-minor oracle in the tests.
pub(crate) fn principal_subresultant(
    ctx: &FieldCtx,
    f: &Poly,
    g: &Poly,
    j: usize,
) -> Result<FieldElement> {
    let df = f.degree().ok_or(Error::ZeroResultantInput)?;
    let dg = g.degree().ok_or(Error::ZeroResultantInput)?;
    if df < dg {
        // not needed by callers; keep the contract narrow
        return Err(Error::SizeMismatch("principal_subresultant needs deg f ≥ deg g".into()));
    }
    if j > dg {
        // The subresultant of nominal index j does not exist below deg g in
        // this convention; treat as zero (only reachable for degenerate
        // derivative degrees in small characteristic).
        return Ok(ctx.zero());
    }
    if j == dg {
        return Ok(elem_pow(ctx, g.leading_coefficient().unwrap(), (df - dg) as u64));
    }
    let r = divrem_impl(ctx, f, g)?.1;
    let Some(dr) = r.degree() else {
        return Ok(ctx.zero()); // gcd has degree dg > j
    };
    if j > dr {
        return Ok(ctx.zero());
    }
    let sign_flip = (df - j) % 2 == 1 && (dg - j) % 2 == 1;
    let factor = elem_pow(ctx, g.leading_coefficient().unwrap(), (df - dr) as u64);
    let sub = principal_subresultant(ctx, &g, &r, j)?;
    let v = ctx.mul_unchecked(&factor, &sub);
    Ok(if sign_flip { ctx.neg_unchecked(&v) } else { v })
}

#[cfg(test)]
pub(crate) mod test_oracle {
    //! Sylvester-minor determinant oracle for resultants and principal
    //! subresultants, kept independent of the remainder-sequence route.

    use super::*;

    /// Determinant by Gaussian elimination over the field.
    pub fn det(ctx: &FieldCtx, mut m: Vec<Vec<FieldElement>>) -> FieldElement {
        let n = m.len();
        let mut acc = ctx.one();
        let mut negate = false;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !ctx.is_zero(&m[r][col])) else {
                return ctx.zero();
            };
            if pivot != col {
                m.swap(pivot, col);
                negate = !negate;
            }
            let pv = m[col][col].clone();
            acc = ctx.mul_unchecked(&acc, &pv);
            let inv = ctx.inv(&pv).unwrap();
            for r in col + 1..n {
                if ctx.is_zero(&m[r][col]) {
                    continue;
                }
                let factor = ctx.mul_unchecked(&m[r][col], &inv);
                for c in col..n {
                    let t = ctx.mul_unchecked(&factor, &m[col][c]);
                    m[r][c] = ctx.sub_unchecked(&m[r][c], &t);
                }
            }
        }
        if negate {
            ctx.neg_unchecked(&acc)
        } else {
            acc
        }
    }

    /// The j-th principal subresultant of (f, g) as the determinant of the
    /// Sylvester submatrix: deg g − j shifted rows of f first, then
    /// deg f − j shifted rows of g, columns for degrees
    /// deg f + deg g − j − 1 down to j.  j = 0 is the full Sylvester matrix.
    pub fn sylvester_minor(ctx: &FieldCtx, f: &Poly, g: &Poly, j: usize) -> FieldElement {
        let n = f.degree().expect("nonzero f");
        let m = g.degree().expect("nonzero g");
        assert!(j <= m.min(n));
        let size = n + m - 2 * j;
        if size == 0 {
            return ctx.one(); // empty determinant
        }
        let cols = n + m - j; // degrees n+m−j−1 .. 0; we keep the first `size`
        let mut rows: Vec<Vec<FieldElement>> = Vec::with_capacity(size);
        // row for X^s · h, h of degree d: coefficient of degree t sits in
        // column (n+m−j−1 − t).
        let mut push_row = |h: &Poly, s: usize| {
            let mut row = vec![ctx.zero(); cols];
            for (i, c) in h.coeffs().iter().enumerate() {
                let t = i + s;
                row[n + m - j - 1 - t] = c.clone();
            }
            row.truncate(size);
            rows.push(row);
        };
        for s in (0..m - j).rev() {
            push_row(f, s);
        }
        for s in (0..n - j).rev() {
            push_row(g, s);
        }
        det(ctx, rows)
    }
}
