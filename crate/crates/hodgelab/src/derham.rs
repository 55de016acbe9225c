//! The de Rham ring: the graded subring of `Z[t,z]` cut out degreewise by
//! Poincare duality `h^i = h^{2n-i}` together with evenness of the middle
//! number in odd dimension.
//!
//! Degree n is free of rank n+1. The collapse map `s` (x, y -> t) carries
//! the Hodge side onto this ring, and `psi = s . phi` presents it by the
//! same four generators A, B, C, D modulo the ideal
//! `J = (A^2 C - D^2, AB - 2D, B^2 - 4C, BD - 2AC)`.

use crate::check::VerifyFailure;
use crate::hodge::{self, GenMonomial, HodgeDiamond};
use crate::lattice::{self, kernel_basis, kernel_mod, lattice_equal, lattice_le, snf, span_mod_equal, IntMatrix};
use crate::poly::{ctx, GradedPolynomial};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DeRhamError {
    #[error("entry {i} breaks Poincare duality in degree {n}")]
    NotPoincareDual { n: usize, i: usize },
    #[error("middle number must be even in odd degree {n}")]
    OddMiddle { n: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("polynomial does not fit degree {n}: {detail}")]
    InvalidShape { n: usize, detail: String },
    #[error("monomial basis matrix is not unimodular in degree {degree}")]
    InternalBasisDefect { degree: usize },
    #[error("computed annihilator does not match the named span in degree {degree}")]
    SpanMismatch { degree: usize },
}

/// Degree-n vector of de Rham numbers `h^0 .. h^{2n}`. Membership in the
/// ring requires `h^i = h^{2n-i}` and, for odd n, an even middle number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeRhamVector {
    n: usize,
    h: Vec<BigInt>,
}

impl DeRhamVector {
    pub fn zero(n: usize) -> Self {
        DeRhamVector {
            n,
            h: vec![BigInt::zero(); 2 * n + 1],
        }
    }

    pub fn from_entries(n: usize, h: Vec<BigInt>) -> Self {
        assert_eq!(h.len(), 2 * n + 1, "entry count mismatch");
        DeRhamVector { n, h }
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        assert!(entries.len() % 2 == 1, "entry count must be odd");
        let n = entries.len() / 2;
        DeRhamVector {
            n,
            h: entries.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize) -> &BigInt {
        &self.h[i]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.h
    }

    pub fn is_zero(&self) -> bool {
        self.h.iter().all(|x| x.is_zero())
    }

    pub fn membership_violation(&self) -> Option<DeRhamError> {
        let n = self.n;
        for i in 0..=2 * n {
            if self.h[i] != self.h[2 * n - i] {
                return Some(DeRhamError::NotPoincareDual { n, i });
            }
        }
        if n % 2 == 1 && !self.h[n].is_even() {
            return Some(DeRhamError::OddMiddle { n });
        }
        None
    }

    pub fn is_member(&self) -> bool {
        self.membership_violation().is_none()
    }

    pub fn to_poly(&self) -> GradedPolynomial {
        GradedPolynomial::from_terms(
            &ctx::de_rham(),
            self.h
                .iter()
                .enumerate()
                .map(|(i, c)| (vec![i as u32, self.n as u32], c.clone())),
        )
    }

    pub fn from_poly(p: &GradedPolynomial, n: usize) -> Result<Self, DeRhamError> {
        let mut v = DeRhamVector::zero(n);
        for (exp, coef) in p.terms() {
            let (i, k) = (exp[0] as usize, exp[1] as usize);
            if k != n || i > 2 * n {
                return Err(DeRhamError::InvalidShape {
                    n,
                    detail: format!("term t^{i}z^{k}"),
                });
            }
            v.h[i] = coef.clone();
        }
        Ok(v)
    }

    /// Product of two members, in degree `n1 + n2`.
    pub fn mul(&self, other: &Self) -> Result<Self, DeRhamError> {
        for v in [self, other] {
            if let Some(e) = v.membership_violation() {
                return Err(e);
            }
        }
        Self::from_poly(&(&self.to_poly() * &other.to_poly()), self.n + other.n)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "degree mismatch");
        DeRhamVector {
            n: self.n,
            h: self.h.iter().zip(&other.h).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "degree mismatch");
        DeRhamVector {
            n: self.n,
            h: self.h.iter().zip(&other.h).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        DeRhamVector {
            n: self.n,
            h: self.h.iter().map(|x| x * k).collect(),
        }
    }

    pub fn full_coords(&self) -> Vec<BigInt> {
        self.h.clone()
    }

    /// Alternating sum of the entries.
    pub fn chi(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, v) in self.h.iter().enumerate() {
            if i % 2 == 0 {
                acc += v;
            } else {
                acc -= v;
            }
        }
        acc
    }

    pub fn h0(&self) -> BigInt {
        self.h[0].clone()
    }

    /// Coefficients over the standard basis; `None` when the vector is not
    /// a member (the middle coefficient would be fractional).
    pub fn basis_coefficients(&self) -> Option<Vec<BigInt>> {
        if !self.is_member() {
            return None;
        }
        let n = self.n;
        let mut c: Vec<BigInt> = self.h[..n].to_vec();
        if n % 2 == 1 {
            c.push(self.h[n].clone() / BigInt::from(2));
        } else {
            c.push(self.h[n].clone());
        }
        Some(c)
    }
}

impl fmt::Display for DeRhamVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// Graded family of de Rham vectors, carried as a polynomial in `Z[t,z]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeRhamFamily {
    poly: GradedPolynomial,
}

impl DeRhamFamily {
    pub fn from_poly(poly: GradedPolynomial) -> Result<Self, DeRhamError> {
        assert_eq!(poly.ctx(), &ctx::de_rham(), "family lives in Z[t,z]");
        for (exp, _) in poly.terms() {
            if exp[0] > 2 * exp[1] {
                return Err(DeRhamError::InvalidShape {
                    n: exp[1] as usize,
                    detail: format!("term t^{}z^{}", exp[0], exp[1]),
                });
            }
        }
        Ok(DeRhamFamily { poly })
    }

    pub fn piece(&self, n: usize) -> DeRhamVector {
        DeRhamVector::from_poly(&self.poly.graded_piece(n as u32), n)
            .expect("validated at construction")
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.poly.degrees().into_iter().map(|d| d as usize).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn as_poly(&self) -> &GradedPolynomial {
        &self.poly
    }
}

/// Degree n is free of rank n+1.
pub fn rank(n: usize) -> usize {
    n + 1
}

/// The standard basis: `(t^i + t^{2n-i}) z^n` for i < n, then the middle
/// `t^n z^n` for even n or `2 t^n z^n` for odd n.
pub fn basis(n: usize) -> Vec<DeRhamVector> {
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut v = DeRhamVector::zero(n);
        v.h[i] = BigInt::one();
        v.h[2 * n - i] = BigInt::one();
        out.push(v);
    }
    let mut mid = DeRhamVector::zero(n);
    mid.h[n] = if n % 2 == 0 {
        BigInt::one()
    } else {
        BigInt::from(2)
    };
    out.push(mid);
    out
}

/// Collapse map on polynomials: x, y -> t, z -> z.
pub fn s_poly(p: &GradedPolynomial) -> GradedPolynomial {
    assert_eq!(p.ctx(), &ctx::hodge(), "s expects Z[x,y,z]");
    let tz = ctx::de_rham();
    let t = GradedPolynomial::var(&tz, "t");
    let z = GradedPolynomial::var(&tz, "z");
    p.substitute(&tz, &[("x", t.clone()), ("y", t), ("z", z)])
        .expect("all variables mapped")
}

/// Collapse a single diamond: `h^m = sum_{i+j=m} h^{i,j}`.
pub fn s(d: &HodgeDiamond) -> DeRhamVector {
    DeRhamVector::from_poly(&s_poly(&d.to_poly()), d.dim()).expect("degrees collapse within range")
}

/// Collapse a graded family.
pub fn s_family(f: &hodge::HodgeFamily) -> DeRhamFamily {
    DeRhamFamily::from_poly(s_poly(f.as_poly())).expect("degrees collapse within range")
}

/// Images of A, B, C, D in `Z[t,z]`:
/// `(1+t^2)z`, `2tz`, `t^2 z^2`, `(t+t^3) z^2`.
pub fn psi_images() -> &'static [GradedPolynomial; 4] {
    static IMAGES: OnceLock<[GradedPolynomial; 4]> = OnceLock::new();
    IMAGES.get_or_init(|| {
        let c = ctx::de_rham();
        let p = |terms: &[(u32, u32, i64)]| {
            GradedPolynomial::from_terms(
                &c,
                terms.iter().map(|&(i, k, v)| (vec![i, k], BigInt::from(v))),
            )
        };
        [
            p(&[(0, 1, 1), (2, 1, 1)]),
            p(&[(1, 1, 2)]),
            p(&[(2, 2, 1)]),
            p(&[(1, 2, 1), (3, 2, 1)]),
        ]
    })
}

/// The presentation map `psi = s . phi`.
pub fn psi(p: &GradedPolynomial) -> DeRhamFamily {
    assert_eq!(p.ctx(), &ctx::generators(), "psi expects Z[A,B,C,D]");
    DeRhamFamily::from_poly(hodge::apply_images(p, psi_images()))
        .expect("generator images fit the degree bound")
}

fn abcd_poly(terms: &[(u32, u32, u32, u32, i64)]) -> GradedPolynomial {
    GradedPolynomial::from_terms(
        &ctx::generators(),
        terms
            .iter()
            .map(|&(a, b, c, d, k)| (vec![a, b, c, d], BigInt::from(k))),
    )
}

/// Generators of the kernel ideal `J`:
/// `A^2 C - D^2`, `AB - 2D`, `B^2 - 4C`, `BD - 2AC`.
pub fn ideal_j_generators() -> Vec<GradedPolynomial> {
    vec![
        abcd_poly(&[(2, 0, 1, 0, 1), (0, 0, 0, 2, -1)]),
        abcd_poly(&[(1, 1, 0, 0, 1), (0, 0, 0, 1, -2)]),
        abcd_poly(&[(0, 2, 0, 0, 1), (0, 0, 1, 0, -4)]),
        abcd_poly(&[(0, 1, 0, 1, 1), (1, 0, 1, 0, -2)]),
    ]
}

/// The degree-n normal monomials of the quotient by J, in the block order
/// `A^i D^l`, then `C^k D^l` (k > 0), then `A C^k D^l` (k > 0), then
/// `B C^k`, each block lexicographically ascending in its exponents.
pub fn normal_monomials(n: usize) -> Vec<GenMonomial> {
    let n = n as u32;
    let mut out = Vec::new();
    // A^i D^l, i + 2l = n
    for a in 0..=n {
        let rem = n - a;
        if rem % 2 == 0 {
            out.push(GenMonomial {
                a,
                b: 0,
                c: 0,
                d: rem / 2,
            });
        }
    }
    // C^k D^l, k > 0, 2k + 2l = n
    if n % 2 == 0 {
        for c in 1..=(n / 2) {
            out.push(GenMonomial {
                a: 0,
                b: 0,
                c,
                d: n / 2 - c,
            });
        }
    }
    // A C^k D^l, k > 0, 1 + 2k + 2l = n
    if n % 2 == 1 {
        for c in 1..=(n - 1) / 2 {
            out.push(GenMonomial {
                a: 1,
                b: 0,
                c,
                d: (n - 1) / 2 - c,
            });
        }
    }
    // B C^k, 1 + 2k = n
    if n % 2 == 1 {
        out.push(GenMonomial {
            a: 0,
            b: 1,
            c: (n - 1) / 2,
            d: 0,
        });
    }
    out
}

struct DegreeSolver {
    monomials: Vec<GenMonomial>,
    inverse: IntMatrix,
}

fn solver(n: usize) -> Result<Arc<DegreeSolver>, DeRhamError> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<DegreeSolver>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().unwrap().get(&n) {
        return Ok(s.clone());
    }
    let monos = normal_monomials(n);
    assert_eq!(monos.len(), rank(n), "normal monomial count must equal the rank");
    let images = hodge::monomial_images(psi_images(), &monos);
    let cols: Vec<Vec<BigInt>> = images
        .iter()
        .map(|img| {
            DeRhamVector::from_poly(img, n)
                .expect("images fit the degree bound")
                .basis_coefficients()
                .expect("images are members")
        })
        .collect();
    let m = IntMatrix::from_cols(rank(n), &cols);
    let inverse =
        lattice::inverse_unimodular(&m).ok_or(DeRhamError::InternalBasisDefect { degree: n })?;
    let s = Arc::new(DegreeSolver {
        monomials: monos,
        inverse,
    });
    cache.lock().unwrap().insert(n, s.clone());
    Ok(s)
}

/// The unique integer coefficients over the normal monomials whose image
/// under `psi` is the given member.
pub fn decompose(v: &DeRhamVector) -> Result<Vec<(GenMonomial, BigInt)>, DeRhamError> {
    if let Some(e) = v.membership_violation() {
        return Err(e);
    }
    let s = solver(v.dim())?;
    let c = v.basis_coefficients().expect("membership checked");
    let x = s.inverse.mul_vec(&c);
    Ok(s.monomials.iter().copied().zip(x).collect())
}

/// Named Poincare-difference functionals on the `2n+1` coordinates;
/// `parity` holds the extra mod-2 middle functional scaled for modulus m.
#[derive(Debug, Clone)]
pub struct NamedDrFunctional {
    pub name: String,
    /// mu[i] pairs with h^i.
    pub mu: Vec<BigInt>,
    pub modulus: Option<BigInt>,
}

fn poincare_family(n: usize) -> Vec<NamedDrFunctional> {
    (0..n)
        .map(|i| {
            let mut mu = vec![BigInt::zero(); 2 * n + 1];
            mu[i] += BigInt::one();
            mu[2 * n - i] -= BigInt::one();
            NamedDrFunctional {
                name: format!("poincare[{i}]"),
                mu,
                modulus: None,
            }
        })
        .collect()
}

/// The middle coordinate functional scaled by m/2: the parity congruence
/// as a mod-m statement.
fn parity_functional(n: usize, m: &BigInt) -> NamedDrFunctional {
    let mut mu = vec![BigInt::zero(); 2 * n + 1];
    mu[n] = m / BigInt::from(2);
    NamedDrFunctional {
        name: "parity".to_string(),
        mu,
        modulus: Some(m.clone()),
    }
}

/// Exact annihilator of degree n: the Poincare differences.
pub fn relations(n: usize) -> Result<Vec<NamedDrFunctional>, DeRhamError> {
    let coords = 2 * n + 1;
    let bas = basis(n);
    let rows = IntMatrix::from_fn(bas.len(), coords, |k, c| bas[k].h[c].clone());
    let computed = kernel_basis(&rows);
    let named = poincare_family(n);
    let named_cols: Vec<Vec<BigInt>> = named.iter().map(|f| f.mu.clone()).collect();
    if !lattice_equal(
        &IntMatrix::from_cols(coords, &computed),
        &IntMatrix::from_cols(coords, &named_cols),
    ) {
        return Err(DeRhamError::SpanMismatch { degree: n });
    }
    Ok(named)
}

/// Mod-m annihilator of degree n: the Poincare differences plus, for even
/// m in odd degree, the scaled parity functional.
pub fn congruences(n: usize, m: &BigInt) -> Result<Vec<NamedDrFunctional>, DeRhamError> {
    let coords = 2 * n + 1;
    let bas = basis(n);
    let rows = IntMatrix::from_fn(bas.len(), coords, |k, c| bas[k].h[c].clone());
    let computed = kernel_mod(&rows, m);
    let mut named: Vec<NamedDrFunctional> = poincare_family(n)
        .into_iter()
        .map(|f| NamedDrFunctional {
            modulus: Some(m.clone()),
            ..f
        })
        .collect();
    if m.is_even() && n % 2 == 1 {
        named.push(parity_functional(n, m));
    }
    let named_cols: Vec<Vec<BigInt>> = named.iter().map(|f| f.mu.clone()).collect();
    if !span_mod_equal(
        &IntMatrix::from_cols(coords, &computed),
        &IntMatrix::from_cols(coords, &named_cols),
        m,
    ) {
        return Err(DeRhamError::SpanMismatch { degree: n });
    }
    Ok(named)
}

fn ints_json(v: &[BigInt]) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(|x| serde_json::json!(x.to_string())).collect())
}

fn mismatch_failure(
    check: &str,
    n: usize,
    left: &IntMatrix,
    right: &IntMatrix,
    left_name: &str,
    right_name: &str,
) -> VerifyFailure {
    let (detail, witness) = match lattice_le(left, right) {
        Err(j) => (
            format!("{left_name} generator {j} is outside the {right_name} lattice"),
            ints_json(&left.col(j)),
        ),
        Ok(()) => match lattice_le(right, left) {
            Err(j) => (
                format!("{right_name} generator {j} is outside the {left_name} lattice"),
                ints_json(&right.col(j)),
            ),
            Ok(()) => (
                "lattices agree columnwise but differ in normal form".to_string(),
                serde_json::Value::Null,
            ),
        },
    };
    VerifyFailure::new(check, n, detail, witness)
}

/// Degree-by-degree certification of the de Rham presentation: the
/// psi-monomial lattice equals the full degree, the kernel equals the
/// degree part of J, and the collapse map s is surjective on the basis.
pub fn verify_presentation(max_n: usize) -> Result<(), VerifyFailure> {
    verify_presentation_with_ideal(&ideal_j_generators(), max_n)
}

/// Same check with a caller-supplied ideal generator list (the negative
/// control drops a generator and must fail).
pub fn verify_presentation_with_ideal(
    j_gens: &[GradedPolynomial],
    max_n: usize,
) -> Result<(), VerifyFailure> {
    const CHECK: &str = "derham.presentation";
    for n in 0..=max_n {
        let monos = hodge::monomials(n);
        let image_polys = hodge::monomial_images(psi_images(), &monos);
        let coords = 2 * n + 1;
        let mut img_cols = Vec::with_capacity(monos.len());
        for (m, img) in monos.iter().zip(&image_polys) {
            match DeRhamVector::from_poly(&img.graded_piece(n as u32), n) {
                Ok(v) => {
                    if let Some(e) = v.membership_violation() {
                        return Err(VerifyFailure::new(
                            CHECK,
                            n,
                            format!("image of {m} is not a member: {e}"),
                            serde_json::json!(m.to_string()),
                        ));
                    }
                    img_cols.push(v.full_coords());
                }
                Err(e) => {
                    return Err(VerifyFailure::new(
                        CHECK,
                        n,
                        format!("image of {m} does not fit: {e}"),
                        serde_json::json!(m.to_string()),
                    ))
                }
            }
        }
        let img_matrix = IntMatrix::from_cols(coords, &img_cols);
        let basis_cols: Vec<Vec<BigInt>> = basis(n).iter().map(|b| b.full_coords()).collect();
        let basis_matrix = IntMatrix::from_cols(coords, &basis_cols);
        if !lattice_equal(&img_matrix, &basis_matrix) {
            return Err(mismatch_failure(
                CHECK,
                n,
                &img_matrix,
                &basis_matrix,
                "monomial image",
                "degree basis",
            ));
        }
        // surjectivity in basis coordinates: invariant factors all 1
        let coeff_cols: Vec<Vec<BigInt>> = monos
            .iter()
            .zip(&image_polys)
            .map(|(_, img)| {
                DeRhamVector::from_poly(&img.graded_piece(n as u32), n)
                    .expect("checked above")
                    .basis_coefficients()
                    .expect("checked above")
            })
            .collect();
        let coeff_matrix = IntMatrix::from_cols(rank(n), &coeff_cols);
        let factors = snf(&coeff_matrix).factors;
        if !(factors.len() == rank(n).min(monos.len()) && factors.iter().all(|f| f.is_one())) {
            return Err(VerifyFailure::new(
                CHECK,
                n,
                "monomial coefficient matrix has invariant factors beyond 1",
                ints_json(&factors),
            ));
        }

        // kernel equals the degree-n part of J
        let kernel = kernel_basis(&img_matrix);
        let kernel_matrix = IntMatrix::from_cols(monos.len(), &kernel);
        let index_of: HashMap<GenMonomial, usize> =
            monos.iter().enumerate().map(|(k, m)| (*m, k)).collect();
        let mut j_cols = Vec::new();
        for g in j_gens {
            let deg = g.degrees();
            assert_eq!(deg.len(), 1, "ideal generators are homogeneous");
            let gdeg = deg[0] as usize;
            if gdeg > n {
                continue;
            }
            for m in hodge::monomials(n - gdeg) {
                let prod = g * &m.to_poly();
                let mut col = vec![BigInt::zero(); monos.len()];
                for (exp, coef) in prod.terms() {
                    let key = GenMonomial {
                        a: exp[0],
                        b: exp[1],
                        c: exp[2],
                        d: exp[3],
                    };
                    col[index_of[&key]] = coef.clone();
                }
                j_cols.push(col);
            }
        }
        let j_matrix = IntMatrix::from_cols(monos.len(), &j_cols);
        if !lattice_equal(&kernel_matrix, &j_matrix) {
            return Err(mismatch_failure(
                CHECK,
                n,
                &kernel_matrix,
                &j_matrix,
                "kernel",
                "ideal multiples",
            ));
        }

        // s carries the Hodge basis onto a generating set of this degree
        let s_cols: Vec<Vec<BigInt>> = hodge::basis(n)
            .iter()
            .map(|b| s(b).full_coords())
            .collect();
        let s_matrix = IntMatrix::from_cols(coords, &s_cols);
        if !lattice_equal(&s_matrix, &basis_matrix) {
            return Err(mismatch_failure(
                CHECK,
                n,
                &s_matrix,
                &basis_matrix,
                "collapse image",
                "degree basis",
            ));
        }
    }
    Ok(())
}

/// Relation/congruence spans for the de Rham coordinates alone.
pub fn verify_relation_spans(max_n: usize, moduli: &[i64]) -> Result<(), VerifyFailure> {
    const CHECK: &str = "derham.relations";
    for n in 0..=max_n {
        relations(n)
            .map_err(|e| VerifyFailure::new(CHECK, n, e.to_string(), serde_json::Value::Null))?;
        for m in moduli {
            congruences(n, &BigInt::from(*m)).map_err(|e| {
                VerifyFailure::new(CHECK, n, e.to_string(), serde_json::Value::Null)
            })?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn rank_is_n_plus_one() {
        assert_eq!(rank(0), 1);
        assert_eq!(rank(2), 3);
        assert_eq!(rank(7), 8);
    }

    #[test]
    fn basis_matches_stated_lists() {
        assert_eq!(
            basis(1),
            vec![DeRhamVector::from_i64(&[1, 0, 1]), DeRhamVector::from_i64(&[0, 2, 0])]
        );
        assert_eq!(
            basis(2),
            vec![
                DeRhamVector::from_i64(&[1, 0, 0, 0, 1]),
                DeRhamVector::from_i64(&[0, 1, 0, 1, 0]),
                DeRhamVector::from_i64(&[0, 0, 1, 0, 0]),
            ]
        );
        assert_eq!(basis(0), vec![DeRhamVector::from_i64(&[1])]);
    }

    #[test]
    fn membership_checks() {
        assert!(DeRhamVector::from_i64(&[1, 2, 1]).is_member());
        assert!(matches!(
            DeRhamVector::from_i64(&[1, 1, 1]).membership_violation(),
            Some(DeRhamError::OddMiddle { n: 1 })
        ));
        assert!(matches!(
            DeRhamVector::from_i64(&[1, 0, 2]).membership_violation(),
            Some(DeRhamError::NotPoincareDual { n: 1, i: 0 })
        ));
    }

    #[test]
    fn collapse_map_examples() {
        let p1 = HodgeDiamond::from_rows_i64(&[&[1, 0], &[0, 1]]);
        assert_eq!(s(&p1), DeRhamVector::from_i64(&[1, 0, 1]));
        let e = HodgeDiamond::from_rows_i64(&[&[1, 1], &[1, 1]]);
        assert_eq!(s(&e), DeRhamVector::from_i64(&[1, 2, 1]));
        assert_eq!(s(&HodgeDiamond::zero(2)), DeRhamVector::zero(2));
    }

    #[test]
    fn psi_images_and_kernel_elements() {
        let d = GradedPolynomial::var(&ctx::generators(), "D");
        assert_eq!(psi(&d).piece(2), DeRhamVector::from_i64(&[0, 1, 0, 1, 0]));

        let ab_minus_2d = abcd_poly(&[(1, 1, 0, 0, 1), (0, 0, 0, 1, -2)]);
        assert!(psi(&ab_minus_2d).is_zero());

        let b2_minus_4c = abcd_poly(&[(0, 2, 0, 0, 1), (0, 0, 1, 0, -4)]);
        assert!(psi(&b2_minus_4c).is_zero());

        for g in ideal_j_generators() {
            assert!(psi(&g).is_zero());
        }
    }

    #[test]
    fn normal_monomial_counts_and_order() {
        assert_eq!(
            normal_monomials(2).iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            ["D", "A^2", "C"]
        );
        assert_eq!(
            normal_monomials(1).iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            ["A", "B"]
        );
        for n in 0..=9 {
            assert_eq!(normal_monomials(n).len(), rank(n));
        }
    }

    #[test]
    fn decompose_recovers_known_classes() {
        // projective plane: 1 + t^2 + t^4 decomposes as A^2 - C
        let v = DeRhamVector::from_i64(&[1, 0, 1, 0, 1]);
        let coeffs = decompose(&v).unwrap();
        let nonzero: Vec<(String, BigInt)> = coeffs
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.to_string(), c.clone()))
            .collect();
        assert_eq!(nonzero, vec![("A^2".to_string(), bi(1)), ("C".to_string(), bi(-1))]);

        // psi(D) decomposes as D alone
        let v = DeRhamVector::from_i64(&[0, 1, 0, 1, 0]);
        let coeffs = decompose(&v).unwrap();
        let nonzero: Vec<(String, BigInt)> = coeffs
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.to_string(), c.clone()))
            .collect();
        assert_eq!(nonzero, vec![("D".to_string(), bi(1))]);

        // elliptic curve: 1 + 2t + t^2 decomposes as A + B
        let v = DeRhamVector::from_i64(&[1, 2, 1]);
        let coeffs = decompose(&v).unwrap();
        let nonzero: Vec<(String, BigInt)> = coeffs
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.to_string(), c.clone()))
            .collect();
        assert_eq!(nonzero, vec![("A".to_string(), bi(1)), ("B".to_string(), bi(1))]);

        assert!(decompose(&DeRhamVector::from_i64(&[1, 1, 1])).is_err());
    }

    #[test]
    fn chi_and_h0_examples() {
        assert_eq!(DeRhamVector::from_i64(&[1, 2, 1]).chi(), bi(0));
        assert_eq!(DeRhamVector::from_i64(&[1, 0, 0, 0, 1]).h0(), bi(1));
        let p2 = HodgeDiamond::from_rows_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(p2.chi(), bi(3));
        assert_eq!(p2.h00(), bi(1));
    }

    #[test]
    fn presentation_verifies_through_degree_six() {
        verify_presentation(6).unwrap();
    }

    #[test]
    fn presentation_rejects_truncated_ideal() {
        // dropping BD - 2AC leaves an index-2 gap in degree 3
        let mut gens = ideal_j_generators();
        gens.remove(3);
        let err = verify_presentation_with_ideal(&gens, 4).unwrap_err();
        assert_eq!(err.check, "derham.presentation");
        assert_eq!(err.degree, Some(3));
    }

    #[test]
    fn relation_spans_hold() {
        verify_relation_spans(6, &[2, 3, 4, 5, 6, 9]).unwrap();
    }

    #[test]
    fn congruences_include_parity_only_when_due() {
        let c = congruences(1, &bi(2)).unwrap();
        assert!(c.iter().any(|f| f.name == "parity"));
        let c = congruences(2, &bi(2)).unwrap();
        assert!(!c.iter().any(|f| f.name == "parity"));
        let c = congruences(1, &bi(3)).unwrap();
        assert!(!c.iter().any(|f| f.name == "parity"));
        // mod 4 the parity statement is 2 h^1 ≡ 0
        let c = congruences(1, &bi(4)).unwrap();
        let parity = c.iter().find(|f| f.name == "parity").unwrap();
        assert_eq!(parity.mu, vec![bi(0), bi(2), bi(0)]);
    }

    proptest! {
        #[test]
        fn decompose_round_trips(n in 0usize..=6, seed in proptest::collection::vec(-9i64..=9, 7)) {
            let mut h = vec![BigInt::zero(); 2 * n + 1];
            for i in 0..n {
                h[i] = bi(seed[i]);
                h[2 * n - i] = bi(seed[i]);
            }
            h[n] = if n % 2 == 1 { bi(2 * seed[n]) } else { bi(seed[n]) };
            let v = DeRhamVector::from_entries(n, h);
            let coeffs = decompose(&v).unwrap();
            let mut p = GradedPolynomial::zero(&ctx::generators());
            for (m, c) in coeffs {
                p = &p + &GradedPolynomial::monomial(&ctx::generators(), m.exponents(), c);
            }
            prop_assert_eq!(psi(&p).piece(n), v);
        }

        #[test]
        fn s_is_a_ring_map_on_members(
            c1 in proptest::collection::vec(-5i64..=5, hodge::rank(2)),
            c2 in proptest::collection::vec(-5i64..=5, hodge::rank(1)),
        ) {
            let d1 = HodgeDiamond::from_rep_coords(2, &c1.iter().map(|&x| bi(x)).collect::<Vec<_>>());
            let d2 = HodgeDiamond::from_rep_coords(1, &c2.iter().map(|&x| bi(x)).collect::<Vec<_>>());
            let lhs = s(&d1.kunneth(&d2).unwrap());
            let rhs = s(&d1).mul(&s(&d2)).unwrap();
            prop_assert_eq!(lhs, rhs);
            // the collapse of a member always satisfies the parity invariant
            prop_assert!(s(&d1).is_member() && s(&d2).is_member());
        }

        #[test]
        fn psi_factors_through_s(
            terms in proptest::collection::vec(
                (0u32..=2, 0u32..=2, 0u32..=1, 0u32..=1, -4i64..=4), 0..5)
        ) {
            let p = GradedPolynomial::from_terms(
                &ctx::generators(),
                terms.into_iter().map(|(a, b, c, d, k)| (vec![a, b, c, d], BigInt::from(k))),
            );
            let via_phi = s_poly(hodge::phi(&p).as_poly());
            let direct = psi(&p);
            prop_assert_eq!(direct.as_poly(), &via_phi);
        }

        #[test]
        fn products_of_members_are_members(n1 in 0usize..=3, n2 in 0usize..=3, seed in -9i64..=9) {
            let mk = |n: usize, shift: i64| {
                let mut h = vec![BigInt::zero(); 2 * n + 1];
                for i in 0..n {
                    h[i] = bi(seed + shift + i as i64);
                    h[2 * n - i] = h[i].clone();
                }
                h[n] = if n % 2 == 1 { bi(2 * (seed + shift)) } else { bi(seed + shift) };
                DeRhamVector::from_entries(n, h)
            };
            let a = mk(n1, 0);
            let b = mk(n2, 3);
            let prod = a.mul(&b).unwrap();
            prop_assert!(prod.is_member());
        }
    }
}
