//! Exact arithmetic in `F_q` for `q = p^k`.
//!
//! Prime fields are native-integer residues; extension fields are dense
//! coefficient vectors over `F_p` reduced by a stored monic irreducible
//! modulus.  If no modulus is supplied the constructor searches monic degree-k
//! polynomials over `F_p` in canonical order and takes the first irreducible,
//! so a given `(p, k)` always yields the same field presentation.
//!
//! Elements carry a compact context id rather than a full field description;
//! combining elements from different contexts is a typed error.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;

use crate::count;
use crate::{Error, Result};

/// Largest supported field size: `q` must fit comfortably in a machine word
/// so that products fit the word pair (`u128`).
pub const MAX_Q: u64 = 1 << 62;

static NEXT_CTX_ID: AtomicU64 = AtomicU64::new(1);

/// Opaque identifier tying elements to their owning [`FieldCtx`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CtxId(u64);

/// A finite field `F_q`, `q = p^k`.
#[derive(Debug)]
pub struct FieldCtx {
    id: CtxId,
    p: u64,
    k: u32,
    q: u64,
    /// Monic irreducible modulus over `F_p`, ascending coefficients of length
    /// `k + 1`; present iff `k > 1`.
    modulus: Option<Vec<u64>>,
}

/// An element of some [`FieldCtx`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    ctx: CtxId,
    rep: Rep,
}

/// Canonical residue representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Rep {
    /// Residue in `[0, p)` for prime fields.
    Prime(u64),
    /// Coefficient vector of length `k` over `F_p`, each coordinate reduced.
    Ext(Vec<u64>),
}

impl FieldCtx {
    /// Constructs the prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_Q {
            return Err(Error::FieldTooLarge { p, k: 1 });
        }
        Ok(FieldCtx { id: fresh_id(), p, k: 1, q: p, modulus: None })
    }

    /// Constructs `F_{p^k}` with the first irreducible modulus in canonical
    /// order (for `k = 1` this is just `F_p`).
    pub fn extension(p: u64, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parse("extension degree k must be positive".into()));
        }
        if k == 1 {
            return Self::prime(p);
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let q = checked_pow(p, k).ok_or(Error::FieldTooLarge { p, k })?;
        if q > MAX_Q {
            return Err(Error::FieldTooLarge { p, k });
        }
        let modulus = search_irreducible_modulus(p, k)?;
        Ok(FieldCtx { id: fresh_id(), p, k, q, modulus: Some(modulus) })
    }

    /// Constructs `F_{p^k}` with a caller-pinned modulus (ascending
    /// coefficients of length `k + 1`; must be monic irreducible over `F_p`).
    pub fn extension_with_modulus(p: u64, k: u32, modulus: Vec<u64>) -> Result<Self> {
        if k < 2 {
            return Err(Error::BadModulus("explicit modulus requires k >= 2".into()));
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let q = checked_pow(p, k).ok_or(Error::FieldTooLarge { p, k })?;
        if q > MAX_Q {
            return Err(Error::FieldTooLarge { p, k });
        }
        if modulus.len() != k as usize + 1 {
            return Err(Error::BadModulus(format!(
                "modulus must have {} coefficients, got {}",
                k + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadModulus("modulus coefficients must be reduced mod p".into()));
        }
        if modulus[k as usize] != 1 {
            return Err(Error::BadModulus("modulus must be monic".into()));
        }
        if !modulus_is_irreducible(p, &modulus)? {
            return Err(Error::BadModulus("modulus is not irreducible over F_p".into()));
        }
        Ok(FieldCtx { id: fresh_id(), p, k, q, modulus: Some(modulus) })
    }

    /// Parses a field description: `"p"`, `"p^k"`, or `"p^k/c0,c1,...,ck"`.
    pub fn parse(desc: &str) -> Result<Self> {
        let desc = desc.trim();
        let (pk, modpart) = match desc.split_once('/') {
            Some((a, b)) => (a, Some(b)),
            None => (desc, None),
        };
        let (p, k) = match pk.split_once('^') {
            Some((ps, ks)) => {
                let p = ps.trim().parse::<u64>().map_err(|_| bad_desc(desc))?;
                let k = ks.trim().parse::<u32>().map_err(|_| bad_desc(desc))?;
                (p, k)
            }
            None => (pk.parse::<u64>().map_err(|_| bad_desc(desc))?, 1),
        };
        match modpart {
            None => Self::extension(p, k),
            Some(cs) => {
                let coeffs = cs
                    .split(',')
                    .map(|c| c.trim().parse::<u64>().map_err(|_| bad_desc(desc)))
                    .collect::<Result<Vec<_>>>()?;
                Self::extension_with_modulus(p, k, coeffs)
            }
        }
    }

    /// Renders the field description in the same format `parse` accepts.
    pub fn describe(&self) -> String {
        match &self.modulus {
            None => format!("{}", self.p),
            Some(m) => {
                let coeffs: Vec<String> = m.iter().map(|c| c.to_string()).collect();
                format!("{}^{}/{}", self.p, self.k, coeffs.join(","))
            }
        }
    }

    /// The context id elements of this field carry.
    pub fn id(&self) -> CtxId {
        self.id
    }

    /// Field characteristic `p`.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Extension degree `k`.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Field size `q = p^k`.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// The stored modulus (ascending coefficients), present iff `k > 1`.
    pub fn modulus(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    fn check(&self, a: &FieldElement) -> Result<()> {
        if a.ctx == self.id {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(&self, rep: Rep) -> FieldElement {
        FieldElement { ctx: self.id, rep }
    }

    /// The additive identity.
    pub fn zero(&self) -> FieldElement {
        if self.k == 1 {
            self.wrap(Rep::Prime(0))
        } else {
            self.wrap(Rep::Ext(vec![0; self.k as usize]))
        }
    }

    /// The multiplicative identity.
    pub fn one(&self) -> FieldElement {
        self.element_from_index(1)
    }

    /// True iff `a` is zero (context-checked by the caller where it matters).
    pub fn is_zero(&self, a: &FieldElement) -> bool {
        match &a.rep {
            Rep::Prime(x) => *x == 0,
            Rep::Ext(v) => v.iter().all(|&c| c == 0),
        }
    }

    /// The element with canonical index `i` (see [`FieldCtx::index_of`]);
    /// `i` is reduced mod `q`.
    pub fn element_from_index(&self, i: u64) -> FieldElement {
        let i = i % self.q;
        if self.k == 1 {
            self.wrap(Rep::Prime(i))
        } else {
            let mut v = vec![0u64; self.k as usize];
            let mut n = i;
            for c in v.iter_mut() {
                *c = n % self.p;
                n /= self.p;
            }
            self.wrap(Rep::Ext(v))
        }
    }

    /// Canonical index in `[0, q)`: the residue itself for prime fields,
    /// base-`p` digits with the constant coordinate least significant for
    /// extensions.  This is also the enumeration order.
    pub fn index_of(&self, a: &FieldElement) -> u64 {
        match &a.rep {
            Rep::Prime(x) => *x,
            Rep::Ext(v) => {
                let mut n = 0u64;
                for &c in v.iter().rev() {
                    n = n * self.p + c;
                }
                n
            }
        }
    }

    /// Yields all `q` elements exactly once in canonical order
    /// (lexicographic on coefficient vectors, constant coordinate fastest;
    /// the first element is always 0).
    pub fn enumerate(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |i| self.element_from_index(i))
    }

    /// A uniform random element (deterministic given the rng seed).
    pub fn random_element(&self, rng: &mut impl Rng) -> FieldElement {
        if self.k == 1 {
            self.wrap(Rep::Prime(rng.gen_range(0..self.p)))
        } else {
            let v = (0..self.k).map(|_| rng.gen_range(0..self.p)).collect();
            self.wrap(Rep::Ext(v))
        }
    }

    /// A uniform random *nonzero* element.
    pub fn random_nonzero(&self, rng: &mut impl Rng) -> FieldElement {
        loop {
            let a = self.random_element(rng);
            if !self.is_zero(&a) {
                return a;
            }
        }
    }

    /// `a + b`.
    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (&a.rep, &b.rep) {
            (Rep::Prime(x), Rep::Prime(y)) => {
                let s = x + y;
                self.wrap(Rep::Prime(if s >= self.p { s - self.p } else { s }))
            }
            (Rep::Ext(u), Rep::Ext(v)) => {
                let w = u
                    .iter()
                    .zip(v)
                    .map(|(&x, &y)| {
                        let s = x + y;
                        if s >= self.p { s - self.p } else { s }
                    })
                    .collect();
                self.wrap(Rep::Ext(w))
            }
            _ => unreachable!("mismatched representations within one context"),
        }
    }

    /// `a - b`.
    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.sub_unchecked(a, b))
    }

    pub(crate) fn sub_unchecked(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add_unchecked(a, &self.neg_unchecked(b))
    }

    /// `-a`.
    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        Ok(self.neg_unchecked(a))
    }

    pub(crate) fn neg_unchecked(&self, a: &FieldElement) -> FieldElement {
        match &a.rep {
            Rep::Prime(x) => self.wrap(Rep::Prime(if *x == 0 { 0 } else { self.p - x })),
            Rep::Ext(v) => {
                let w = v.iter().map(|&c| if c == 0 { 0 } else { self.p - c }).collect();
                self.wrap(Rep::Ext(w))
            }
        }
    }

    /// `a * b`; records one field multiplication in the active counter scope.
    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        count::record_field_mul();
        match (&a.rep, &b.rep) {
            (Rep::Prime(x), Rep::Prime(y)) => {
                self.wrap(Rep::Prime(mulmod(*x, *y, self.p)))
            }
            (Rep::Ext(u), Rep::Ext(v)) => {
                let k = self.k as usize;
                let p = self.p;
                // Schoolbook convolution over F_p ...
                let mut prod = vec![0u64; 2 * k - 1];
                for (i, &x) in u.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in v.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
                    }
                }
                // ... then reduction by the stored monic modulus.
                let modulus = self.modulus.as_ref().expect("extension has modulus");
                for i in (k..prod.len()).rev() {
                    let c = prod[i];
                    if c == 0 {
                        continue;
                    }
                    prod[i] = 0;
                    for j in 0..k {
                        let m = modulus[j];
                        if m != 0 {
                            let t = mulmod(c, m, p);
                            let idx = i - k + j;
                            prod[idx] = (prod[idx] + p - t) % p;
                        }
                    }
                }
                prod.truncate(k);
                self.wrap(Rep::Ext(prod))
            }
            _ => unreachable!("mismatched representations within one context"),
        }
    }

    /// `a^{-1}`; records one field inversion.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if self.is_zero(a) {
            return Err(Error::ZeroInverse);
        }
        count::record_field_inv();
        match &a.rep {
            Rep::Prime(x) => Ok(self.wrap(Rep::Prime(invmod(*x, self.p)))),
            Rep::Ext(v) => {
                let modulus = self.modulus.as_ref().expect("extension has modulus");
                let inv = ext_inverse(self.p, v, modulus);
                Ok(self.wrap(Rep::Ext(inv)))
            }
        }
    }

    /// `a^e` by left-to-right binary exponentiation.  For `e >= 1` the
    /// recorded multiplication count is exactly `⌊log₂ e⌋ + ν(e) − 1`.
    pub fn pow(&self, a: &FieldElement, e: u64) -> Result<FieldElement> {
        self.check(a)?;
        if e == 0 {
            if self.is_zero(a) {
                return Err(Error::ZeroToZero);
            }
            return Ok(self.one());
        }
        Ok(self.pow_unchecked(a, e))
    }

    pub(crate) fn pow_unchecked(&self, a: &FieldElement, e: u64) -> FieldElement {
        debug_assert!(e >= 1);
        let mut acc = a.clone();
        let bits = 64 - e.leading_zeros();
        for i in (0..bits - 1).rev() {
            acc = self.mul_unchecked(&acc, &acc);
            if (e >> i) & 1 == 1 {
                acc = self.mul_unchecked(&acc, a);
            }
        }
        acc
    }

    /// The Frobenius map `a ↦ a^p` (identity on prime fields).
    pub fn frobenius(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if self.k == 1 || self.is_zero(a) {
            return Ok(a.clone());
        }
        Ok(self.pow_unchecked(a, self.p))
    }

    /// The unique p-th root: `pth_root(a)^p = a`.  Computed as
    /// `a^{p^{k−1}}`, i.e. `k − 1` Frobenius steps; the identity on `F_p`.
    pub fn pth_root(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if self.k == 1 || self.is_zero(a) {
            return Ok(a.clone());
        }
        let mut out = a.clone();
        for _ in 0..self.k - 1 {
            out = self.pow_unchecked(&out, self.p);
        }
        Ok(out)
    }
}

impl fmt::Display for FieldElement {
    /// Prime-field elements print as their residue; extension elements as
    /// semicolon-separated `F_p` coordinates in ascending degree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rep {
            Rep::Prime(x) => write!(f, "{x}"),
            Rep::Ext(v) => {
                let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join(";"))
            }
        }
    }
}

impl FieldElement {
    /// The owning context id.
    pub fn ctx_id(&self) -> CtxId {
        self.ctx
    }

    /// Parses an element in the `Display` format of the given context.
    pub fn parse(ctx: &FieldCtx, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        if ctx.k == 1 {
            let x = s
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad field element {s:?}")))?;
            Ok(ctx.wrap(Rep::Prime(x % ctx.p)))
        } else {
            let coords = s
                .split(';')
                .map(|c| {
                    c.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad field element {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if coords.len() > ctx.k as usize {
                return Err(Error::Parse(format!(
                    "element {s:?} has more than k = {} coordinates",
                    ctx.k
                )));
            }
            let mut v: Vec<u64> = coords.into_iter().map(|c| c % ctx.p).collect();
            v.resize(ctx.k as usize, 0);
            Ok(ctx.wrap(Rep::Ext(v)))
        }
    }
}

fn fresh_id() -> CtxId {
    CtxId(NEXT_CTX_ID.fetch_add(1, Ordering::Relaxed))
}

fn bad_desc(desc: &str) -> Error {
    Error::Parse(format!("bad field description {desc:?}"))
}

fn checked_pow(p: u64, k: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Modular inverse of `a` mod prime `p` via the extended Euclidean algorithm.
fn invmod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128);
    while new_r != 0 {
        let quotient = r / new_r;
        (t, new_t) = (new_t, t - quotient * new_t);
        (r, new_r) = (new_r, r - quotient * new_r);
    }
    debug_assert_eq!(r, 1, "inverse of nonunit");
    (t.rem_euclid(p as i128)) as u64
}

/// Deterministic Miller–Rabin for u64.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &sp in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == sp {
            return true;
        }
        if n % sp == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn powmod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

// --- modulus search and verification (raw F_p[x] vectors, not counted) ---

/// Extended Euclid in `F_p[x]` returning the inverse of `a` modulo `modulus`.
/// Coefficient vectors are ascending; `a` nonzero of degree < k.
fn ext_inverse(p: u64, a: &[u64], modulus: &[u64]) -> Vec<u64> {
    let k = modulus.len() - 1;
    let mut r0: Vec<u64> = modulus.to_vec();
    let mut r1: Vec<u64> = trim(a.to_vec());
    let mut t0: Vec<u64> = vec![];
    let mut t1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (quot, rem) = raw_divrem(p, &r0, &r1);
        let t2 = raw_sub(p, &t0, &raw_mul(p, &quot, &t1));
        r0 = r1;
        r1 = rem;
        t0 = t1;
        t1 = t2;
    }
    // r0 is a nonzero constant gcd; scale t0 by its inverse.
    debug_assert_eq!(r0.len(), 1);
    let scale = invmod(r0[0], p);
    let mut out: Vec<u64> = t0.iter().map(|&c| mulmod(c, scale, p)).collect();
    out.resize(k, 0);
    out
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn raw_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(out)
}

fn raw_sub(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(out)
}

fn raw_divrem(p: u64, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    debug_assert!(!b.is_empty());
    if a.len() < b.len() {
        return (vec![], a.to_vec());
    }
    let mut rem = a.to_vec();
    let mut quot = vec![0u64; a.len() - b.len() + 1];
    let lead_inv = invmod(*b.last().unwrap(), p);
    for i in (0..quot.len()).rev() {
        let c = rem[i + b.len() - 1];
        if c == 0 {
            continue;
        }
        let qc = mulmod(c, lead_inv, p);
        quot[i] = qc;
        for (j, &bc) in b.iter().enumerate() {
            if bc != 0 {
                let t = mulmod(qc, bc, p);
                rem[i + j] = (rem[i + j] + p - t) % p;
            }
        }
    }
    (trim(quot), trim(rem))
}

fn raw_powmod(p: u64, h: &[u64], e: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = raw_divrem(p, h, m).1;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = raw_divrem(p, &raw_mul(p, &acc, &base), m).1;
        }
        base = raw_divrem(p, &raw_mul(p, &base, &base), m).1;
        e >>= 1;
    }
    acc
}

fn raw_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    while !r1.is_empty() {
        let rem = raw_divrem(p, &r0, &r1).1;
        r0 = r1;
        r1 = rem;
    }
    // monic-normalize
    if let Some(&lc) = r0.last() {
        let s = invmod(lc, p);
        for c in r0.iter_mut() {
            *c = mulmod(*c, s, p);
        }
    }
    r0
}

/// Rabin irreducibility test for a monic polynomial over `F_p`, on raw
/// coefficient vectors (used during field construction, before the extension
/// context exists; the public test in `factor` works over any `F_q`).
fn modulus_is_irreducible(p: u64, modulus: &[u64]) -> Result<bool> {
    let k = modulus.len() - 1;
    debug_assert!(k >= 1);
    let x = vec![0u64, 1];
    // T^{p^k} ≡ T mod f, via k successive p-th powers.
    let mut h = raw_divrem(p, &x, modulus).1;
    for _ in 0..k {
        h = raw_powmod(p, &h, p, modulus);
    }
    if trim(raw_sub(p, &h, &x)) != Vec::<u64>::new() {
        return Ok(false);
    }
    // gcd(T^{p^{k/ℓ}} − T, f) = 1 for every prime ℓ | k.
    for l in prime_divisors(k as u64) {
        let steps = k as u64 / l;
        let mut h = raw_divrem(p, &x, modulus).1;
        for _ in 0..steps {
            h = raw_powmod(p, &h, p, modulus);
        }
        let diff = raw_sub(p, &h, &x);
        let g = raw_gcd(p, modulus, &diff);
        if g.len() != 1 {
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

/// First monic irreducible of degree `k` over `F_p` in canonical order
/// (constant coordinate fastest over the non-leading coefficients).
fn search_irreducible_modulus(p: u64, k: u32) -> Result<Vec<u64>> {
    let k = k as usize;
    let total = checked_pow(p, k as u32).ok_or(Error::FieldTooLarge { p, k: k as u32 })?;
    for idx in 0..total {
        let mut coeffs = vec![0u64; k + 1];
        let mut n = idx;
        for c in coeffs.iter_mut().take(k) {
            *c = n % p;
            n /= p;
        }
        coeffs[k] = 1;
        if modulus_is_irreducible(p, &coeffs)? {
            return Ok(coeffs);
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}
