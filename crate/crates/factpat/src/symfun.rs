//! Symmetric-function evaluation and numeric verification of the
//! determinant identities behind the geometric argument: the Trudi identity
//! det 𝒯_i = H_i, the (r−1)×(r−1) Jacobian-minor identity
//! det M_{r−k,l} = (−1)^{r−k−1} Δ_l x_l^k, and the Toeplitz–Hessenberg
//! expansion of the constraint polynomial G.
//!
//! All identities are checked numerically at points over fields large
//! enough that Schwartz–Zippel makes accidental agreement negligible;
//! symbolic multivariate algebra is deliberately out of scope.

use crate::ff::{FieldCtx, FieldElement};
use crate::{Error, Result};

/// An evaluation point x = (x₁, …, x_r) with all coordinates in one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointVector {
    coords: Vec<FieldElement>,
}

impl PointVector {
    /// Wraps coordinates after checking they share the context.
    pub fn new(ctx: &FieldCtx, coords: Vec<FieldElement>) -> Result<PointVector> {
        if coords.iter().any(|c| c.ctx_id() != ctx.id()) {
            return Err(Error::FieldMismatch);
        }
        Ok(PointVector { coords })
    }

    /// The coordinates (x₁..x_r).
    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    /// Number of coordinates r.
    pub fn r(&self) -> usize {
        self.coords.len()
    }
}

/// The i-th elementary symmetric polynomial Π_i(x), via the one-pass
/// expansion of ∏(1 + x_j t): after processing x_j, `e[i]` holds
/// Π_i(x₁..x_j).
pub fn elem_sym(x: &PointVector, i: usize, ctx: &FieldCtx) -> Result<FieldElement> {
    let r = x.r();
    if i > r {
        return Err(Error::IndexOutOfRange(format!("elem_sym index {i} with r = {r}")));
    }
    Ok(elem_sym_all(x, ctx)[i].clone())
}

/// All of Π₀..Π_r at once (Π₀ = 1).
pub fn elem_sym_all(x: &PointVector, ctx: &FieldCtx) -> Vec<FieldElement> {
    let r = x.r();
    let mut e = vec![ctx.zero(); r + 1];
    e[0] = ctx.one();
    for (j, xj) in x.coords.iter().enumerate() {
        for i in (1..=j + 1).rev() {
            let add = ctx.mul_unchecked(&e[i - 1], xj);
            e[i] = ctx.add_unchecked(&e[i], &add);
        }
    }
    e
}

/// The i-th complete homogeneous symmetric function H_i(x), by the
/// prefix recurrence H_i(x₁..x_j) = H_i(x₁..x_{j−1}) + x_j·H_{i−1}(x₁..x_j).
pub fn complete_hom(x: &PointVector, i: usize, ctx: &FieldCtx) -> Result<FieldElement> {
    // h[t] carries H_t over the processed prefix
    let mut h = vec![ctx.zero(); i + 1];
    h[0] = ctx.one();
    for xj in &x.coords {
        for t in 1..=i {
            let add = ctx.mul_unchecked(&h[t - 1], xj);
            h[t] = ctx.add_unchecked(&h[t], &add);
        }
    }
    Ok(h[i].clone())
}

/// Determinant of the n×n generic Toeplitz–Hessenberg matrix with first
/// column (a_n, a_{n−1}, …, a₁) top to bottom, Toeplitz lower part
/// (entry (i, j) = a_{n−i+j} for j ≤ i) and unit superdiagonal, by the
/// Hessenberg last-row recurrence
/// `f_i = Σ_{j=1}^i (−1)^{i−j} a_{n−i+j} f_{j−1}`, `f₀ = 1`.
///
/// The input `a` lists (a₁, …, a_n).
pub fn toeplitz_hessenberg_det(a: &[FieldElement], n: usize, ctx: &FieldCtx) -> Result<FieldElement> {
    if n == 0 || a.len() != n {
        return Err(Error::SizeMismatch(format!(
            "toeplitz_hessenberg_det needs |a| = n ≥ 1, got |a| = {}, n = {n}",
            a.len()
        )));
    }
    if a.iter().any(|c| c.ctx_id() != ctx.id()) {
        return Err(Error::FieldMismatch);
    }
    let mut f = vec![ctx.one()];
    for i in 1..=n {
        let mut acc = ctx.zero();
        for j in 1..=i {
            // entry (i, j) of the generic matrix is a_{n−i+j}
            let term = ctx.mul_unchecked(&a[n - i + j - 1], &f[j - 1]);
            if (i - j) % 2 == 0 {
                acc = ctx.add_unchecked(&acc, &term);
            } else {
                acc = ctx.sub_unchecked(&acc, &term);
            }
        }
        f.push(acc);
    }
    Ok(f[n].clone())
}

/// The multinomial expansion of the same determinant:
/// `G = Σ_{t₁+2t₂+⋯+n·t_n = n} (−1)^{n−Σt_i} (Σt_i)!/(t₁!⋯t_n!)
///  a_n^{t₁} a_{n−1}^{t₂} ⋯ a₁^{t_n}`.
/// Used as an independent oracle for [`toeplitz_hessenberg_det`] and for the
/// weighted-homogeneity check; practical for n ≤ ~12.
pub fn toeplitz_hessenberg_expansion(a: &[FieldElement], n: usize, ctx: &FieldCtx) -> Result<FieldElement> {
    if n == 0 || a.len() != n {
        return Err(Error::SizeMismatch(format!(
            "expansion needs |a| = n ≥ 1, got |a| = {}, n = {n}",
            a.len()
        )));
    }
    let mut total = ctx.zero();
    for lambda in crate::patterns::enumerate_patterns(n) {
        let t = lambda.lambda(); // t_i = number of parts equal to i
        let parts: u64 = t.iter().map(|&x| x as u64).sum();
        // multinomial (Σt)!/(∏ t_i!) as an exact integer, then reduced mod p
        let mut coeff: u128 = 1;
        let mut used = 0u64;
        for &ti in t {
            for s in 1..=ti as u128 {
                used += 1;
                coeff = coeff * used as u128 / s;
            }
        }
        let mut term = ctx.element_from_index((coeff % ctx.p() as u128) as u64);
        if (n as u64 - parts) % 2 == 1 {
            term = ctx.neg(&term)?;
        }
        for (i, &ti) in t.iter().enumerate() {
            // monomial factor A_{n−i}^{t_{i+1}}: t_{i+1} parts of size i+1
            // multiply by a_{n−i} (0-indexed a[n−1−i]) raised to t_{i+1}
            for _ in 0..ti {
                term = ctx.mul_unchecked(&term, &a[n - 1 - i]);
            }
        }
        total = ctx.add_unchecked(&total, &term);
    }
    Ok(total)
}

/// Dense determinant by Gaussian elimination with partial (first-nonzero)
/// pivoting; consumes the matrix.
pub(crate) fn det(ctx: &FieldCtx, mut m: Vec<Vec<FieldElement>>) -> Result<FieldElement> {
    let n = m.len();
    for row in &m {
        if row.len() != n {
            return Err(Error::SizeMismatch("determinant needs a square matrix".into()));
        }
    }
    let mut sign_flip = false;
    let mut acc = ctx.one();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !ctx.is_zero(&m[i][col]));
        let Some(pivot) = pivot else {
            return Ok(ctx.zero());
        };
        if pivot != col {
            m.swap(pivot, col);
            sign_flip = !sign_flip;
        }
        let pv = m[col][col].clone();
        acc = ctx.mul_unchecked(&acc, &pv);
        let inv = ctx.inv(&pv)?;
        for i in col + 1..n {
            if ctx.is_zero(&m[i][col]) {
                continue;
            }
            let factor = ctx.mul_unchecked(&m[i][col], &inv);
            for j in col..n {
                let sub = ctx.mul_unchecked(&factor, &m[col][j]);
                m[i][j] = ctx.sub_unchecked(&m[i][j], &sub);
            }
        }
    }
    if sign_flip {
        acc = ctx.neg(&acc)?;
    }
    Ok(acc)
}

/// Checks the Trudi identity det 𝒯_i(x) = H_i(x), with 𝒯_i built literally
/// from its display: diagonal Π₁, unit-negative superdiagonal, lower
/// Toeplitz entries (s, t) = (−1)^{s−t} Π_{s−t+1}.
pub fn trudi_check(x: &PointVector, i: usize, ctx: &FieldCtx) -> Result<bool> {
    let r = x.r();
    if i < 1 || i > r {
        return Err(Error::IndexOutOfRange(format!("trudi index {i} with r = {r}")));
    }
    let pis = elem_sym_all(x, ctx);
    let mut m = vec![vec![ctx.zero(); i]; i];
    for (s, row) in m.iter_mut().enumerate() {
        for (t, entry) in row.iter_mut().enumerate() {
            if t == s + 1 {
                *entry = ctx.neg(&ctx.one())?;
            } else if t <= s {
                let mut v = pis[s - t + 1].clone();
                if (s - t) % 2 == 1 {
                    v = ctx.neg(&v)?;
                }
                *entry = v;
            }
        }
    }
    let lhs = det(ctx, m)?;
    let rhs = complete_hom(x, i, ctx)?;
    Ok(lhs == rhs)
}

/// Checks det M_{r−k,l} = (−1)^{r−k−1} Δ_l(x) x_l^k, where M_{r−k,l} is the
/// Jacobian of the elementary symmetric polynomials at x with row r−k and
/// column l deleted, and Δ_l = ∏_{i<j, i,j≠l}(x_j − x_i).
///
/// The Jacobian is built from its displayed factorization B_r·A_r (B_r lower
/// triangular with entries (−1)^{i−j+1} Π_{i−j}, A_r the Vandermonde
/// (x_j^{i−1})); the B_r rows carry a sign (−1)^i relative to the bare
/// partial-derivative formula, and the stated minor identity is for this
/// normalization.
pub fn minor_identity_check(x: &PointVector, k: usize, l: usize, ctx: &FieldCtx) -> Result<bool> {
    let r = x.r();
    if k > r - 1 {
        return Err(Error::IndexOutOfRange(format!("minor row index k = {k} with r = {r}")));
    }
    if l < 1 || l > r {
        return Err(Error::IndexOutOfRange(format!("minor column index l = {l} with r = {r}")));
    }
    let pis = elem_sym_all(x, ctx);
    // jac[i][j] = Σ_{t=1}^{i+1} (−1)^{i+1−t+1} Π_{i+1−t} x_j^{t−1}, rows/cols 0-based
    let mut jac = vec![vec![ctx.zero(); r]; r];
    for (j, xj) in x.coords.iter().enumerate() {
        let mut pw = ctx.one(); // x_j^{t−1}
        let mut powers = Vec::with_capacity(r);
        for _ in 0..r {
            powers.push(pw.clone());
            pw = ctx.mul_unchecked(&pw, xj);
        }
        for i in 1..=r {
            let mut acc = ctx.zero();
            for t in 1..=i {
                let mut term = ctx.mul_unchecked(&pis[i - t], &powers[t - 1]);
                if (i - t + 1) % 2 == 1 {
                    term = ctx.neg(&term)?;
                }
                acc = ctx.add_unchecked(&acc, &term);
            }
            jac[i - 1][j] = acc;
        }
    }
    // delete row r−k (1-based) and column l (1-based)
    let mut minor = Vec::with_capacity(r - 1);
    for (i, row) in jac.into_iter().enumerate() {
        if i + 1 == r - k {
            continue;
        }
        let pruned: Vec<_> = row
            .into_iter()
            .enumerate()
            .filter(|(j, _)| *j + 1 != l)
            .map(|(_, v)| v)
            .collect();
        minor.push(pruned);
    }
    let lhs = det(ctx, minor)?;

    let mut delta = ctx.one();
    for i in 0..r {
        for j in i + 1..r {
            if i + 1 == l || j + 1 == l {
                continue;
            }
            let diff = ctx.sub_unchecked(&x.coords[j], &x.coords[i]);
            delta = ctx.mul_unchecked(&delta, &diff);
        }
    }
    let mut rhs = delta;
    for _ in 0..k {
        rhs = ctx.mul_unchecked(&rhs, &x.coords[l - 1]);
    }
    if (r - k - 1) % 2 == 1 {
        rhs = ctx.neg(&rhs)?;
    }
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(ctx: &FieldCtx, r: usize, rng: &mut impl Rng) -> PointVector {
        PointVector::new(ctx, (0..r).map(|_| ctx.random_element(rng)).collect()).unwrap()
    }

    #[test]
    fn elem_sym_examples() {
        let f7 = FieldCtx::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for r in 1..=8usize {
            let x = random_point(&f7, r, &mut rng);
            assert_eq!(elem_sym(&x, 0, &f7).unwrap(), f7.one());
            let prod = x
                .coords()
                .iter()
                .fold(f7.one(), |acc, c| f7.mul_unchecked(&acc, c));
            assert_eq!(elem_sym(&x, r, &f7).unwrap(), prod);
            // coefficients of ∏(T − x_j) are (−1)^{r−j} Π_{r−j}
            let mut poly = Poly::constant(&f7, f7.one());
            for c in x.coords() {
                let lin = Poly::from_coeffs(&f7, vec![f7.neg(c).unwrap(), f7.one()]);
                poly = poly.mul(&lin, &f7).unwrap();
            }
            for j in 0..=r {
                let mut expect = elem_sym(&x, r - j, &f7).unwrap();
                if (r - j) % 2 == 1 {
                    expect = f7.neg(&expect).unwrap();
                }
                assert_eq!(poly.coeff(&f7, j), expect);
            }
        }
        assert!(elem_sym(&random_point(&f7, 3, &mut rng), 4, &f7).is_err());
    }

    #[test]
    fn elem_sym_exhaustive_f3_r4() {
        // exhaustive over all x ∈ F_3⁴ against the poly-product expansion
        let f3 = FieldCtx::prime(3).unwrap();
        for code in 0..81u64 {
            let coords: Vec<_> = (0..4)
                .map(|i| f3.element_from_index(code / 3u64.pow(i) % 3))
                .collect();
            let x = PointVector::new(&f3, coords).unwrap();
            let mut poly = Poly::constant(&f3, f3.one());
            for c in x.coords() {
                let lin = Poly::from_coeffs(&f3, vec![f3.neg(c).unwrap(), f3.one()]);
                poly = poly.mul(&lin, &f3).unwrap();
            }
            for j in 0..=4usize {
                let mut expect = elem_sym(&x, 4 - j, &f3).unwrap();
                if (4 - j) % 2 == 1 {
                    expect = f3.neg(&expect).unwrap();
                }
                assert_eq!(poly.coeff(&f3, j), expect, "x code {code}, coeff {j}");
            }
        }
    }

    #[test]
    fn complete_hom_examples() {
        let f13 = FieldCtx::prime(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let r = 1 + rng.gen_range(0..6);
            let x = random_point(&f13, r, &mut rng);
            assert_eq!(complete_hom(&x, 0, &f13).unwrap(), f13.one());
            assert_eq!(complete_hom(&x, 1, &f13).unwrap(), elem_sym(&x, 1, &f13).unwrap());
            // Newton-type identity Σ_{i=0}^k (−1)^i H_i Π_{k−i} = 0
            for k in 1..=r {
                let mut acc = f13.zero();
                for i in 0..=k {
                    let mut term = f13.mul_unchecked(
                        &complete_hom(&x, i, &f13).unwrap(),
                        &elem_sym(&x, k - i, &f13).unwrap(),
                    );
                    if i % 2 == 1 {
                        term = f13.neg(&term).unwrap();
                    }
                    acc = f13.add_unchecked(&acc, &term);
                }
                assert!(f13.is_zero(&acc), "Newton identity fails at k = {k}");
            }
        }
    }

    #[test]
    fn toeplitz_hessenberg_det_examples() {
        let f11 = FieldCtx::prime(11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        // n = 1 → a₁
        let a = vec![f11.element_from_index(5)];
        assert_eq!(toeplitz_hessenberg_det(&a, 1, &f11).unwrap(), a[0]);
        // n = 2 → A₂² − A₁
        let a = vec![f11.element_from_index(3), f11.element_from_index(4)];
        let want = f11
            .sub(&f11.mul_unchecked(&a[1], &a[1]), &a[0])
            .unwrap();
        assert_eq!(toeplitz_hessenberg_det(&a, 2, &f11).unwrap(), want);
        // equals the multinomial expansion, n ≤ 6, 100 random points
        for _ in 0..100 {
            let n = 1 + rng.gen_range(0..6);
            let a: Vec<_> = (0..n).map(|_| f11.random_element(&mut rng)).collect();
            assert_eq!(
                toeplitz_hessenberg_det(&a, n, &f11).unwrap(),
                toeplitz_hessenberg_expansion(&a, n, &f11).unwrap()
            );
        }
        assert!(toeplitz_hessenberg_det(&a, 3, &f11).is_err());
    }

    #[test]
    fn hessenberg_recurrence_matches_dense_det() {
        let f101 = FieldCtx::prime(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..50 {
            let n = 1 + rng.gen_range(0..8);
            let a: Vec<_> = (0..n).map(|_| f101.random_element(&mut rng)).collect();
            // build the dense matrix literally
            let mut m = vec![vec![f101.zero(); n]; n];
            for (i, row) in m.iter_mut().enumerate() {
                for (j, entry) in row.iter_mut().enumerate() {
                    if j == i + 1 {
                        *entry = f101.one();
                    } else if j <= i {
                        *entry = a[n - (i + 1) + (j + 1) - 1].clone();
                    }
                }
            }
            assert_eq!(
                toeplitz_hessenberg_det(&a, n, &f101).unwrap(),
                det(&f101, m).unwrap()
            );
        }
    }

    #[test]
    fn g_weighted_homogeneity() {
        // wt(A_i) = r+1−i; G(c^{wt} a) = c^r G(a) for random c ≠ 0
        let f101 = FieldCtx::prime(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..100 {
            let r = 2 + rng.gen_range(0..5);
            let a: Vec<_> = (0..r).map(|_| f101.random_element(&mut rng)).collect();
            let c = f101.random_nonzero(&mut rng);
            // a[i−1] holds a_i with wt(A_i) = r+1−i
            let scaled: Vec<_> = a
                .iter()
                .enumerate()
                .map(|(idx, v)| {
                    let w = (r + 1 - (idx + 1)) as u64;
                    f101.mul_unchecked(&f101.pow(&c, w).unwrap(), v)
                })
                .collect();
            let lhs = toeplitz_hessenberg_expansion(&scaled, r, &f101).unwrap();
            let rhs = f101.mul_unchecked(
                &f101.pow(&c, r as u64).unwrap(),
                &toeplitz_hessenberg_expansion(&a, r, &f101).unwrap(),
            );
            assert_eq!(lhs, rhs, "weighted homogeneity at r = {r}");
        }
    }

    #[test]
    fn trudi_examples() {
        let f13 = FieldCtx::prime(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..100 {
            let r = 1 + rng.gen_range(0..6);
            let x = random_point(&f13, r, &mut rng);
            for i in 1..=r {
                assert!(trudi_check(&x, i, &f13).unwrap(), "Trudi fails at i = {i}, r = {r}");
            }
        }
        let x = random_point(&f13, 3, &mut rng);
        assert!(trudi_check(&x, 0, &f13).is_err());
        assert!(trudi_check(&x, 4, &f13).is_err());
    }

    #[test]
    fn minor_identity_examples() {
        // r = 2, k = 0, l = 1: minor is the single entry −1; RHS = −Δ₁ = −1
        let f13 = FieldCtx::prime(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let x = random_point(&f13, 2, &mut rng);
        assert!(minor_identity_check(&x, 0, 1, &f13).unwrap());

        // 200 random points, r ≤ 6, all (k, l)
        let f10007 = FieldCtx::prime(10007).unwrap();
        for _ in 0..200 {
            let r = 2 + rng.gen_range(0..5);
            let x = random_point(&f10007, r, &mut rng);
            for k in 0..r {
                for l in 1..=r {
                    assert!(
                        minor_identity_check(&x, k, l, &f10007).unwrap(),
                        "minor identity fails at r = {r}, k = {k}, l = {l}"
                    );
                }
            }
        }

        // repeated coordinate away from l: both sides vanish (still holds)
        let coords = vec![
            f13.element_from_index(2),
            f13.element_from_index(2),
            f13.element_from_index(5),
        ];
        let x = PointVector::new(&f13, coords).unwrap();
        for k in 0..3 {
            assert!(minor_identity_check(&x, k, 3, &f13).unwrap());
        }

        // bad indices
        assert!(minor_identity_check(&x, 3, 1, &f13).is_err());
        assert!(minor_identity_check(&x, 0, 0, &f13).is_err());
        assert!(minor_identity_check(&x, 0, 4, &f13).is_err());
    }
}
