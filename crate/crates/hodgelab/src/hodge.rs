//! The Hodge ring: the graded subring of `Z[x,y,z]` cut out degreewise by
//! Serre duality `h^{i,j} = h^{n-i,n-j}`.
//!
//! Degree n is free of rank `r_n` on the symmetrized monomials; the whole
//! ring is presented by four generators A, B, C, D subject to the single
//! relation `G = D^2 - ABD + C(A^2 + B^2 - 4C)`. This module carries the
//! diamonds, the presentation map `phi`, normal forms modulo G,
//! decomposition over the monomial basis, the universal linear relations
//! and congruences, and the birational ideal `(C)`.

use crate::check::VerifyFailure;
use crate::lattice::{
    self, kernel_basis, kernel_mod, lattice_equal, lattice_le, snf, span_mod_equal, IntMatrix,
};
use crate::poly::{ctx, GradedPolynomial};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HodgeError {
    #[error("entry ({i},{j}) breaks Serre duality in degree {n}")]
    NotSerreDual { n: usize, i: usize, j: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("polynomial does not fit a diamond of dimension {n}: {detail}")]
    InvalidShape { n: usize, detail: String },
    #[error("monomial basis matrix is not unimodular in degree {degree}")]
    InternalBasisDefect { degree: usize },
    #[error("computed annihilator does not match the Serre span in degree {degree}")]
    SpanMismatch { degree: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

/// Degree-n element of the ambient coordinate space: an (n+1) x (n+1)
/// integer array with entry (i, j) holding `h^{i,j}`. Membership in the
/// Hodge ring is exactly Serre duality, tested by [`HodgeDiamond::is_member`].
/// Negative entries are allowed: the ring contains virtual classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeDiamond {
    n: usize,
    h: Vec<BigInt>,
}

impl HodgeDiamond {
    pub fn zero(n: usize) -> Self {
        HodgeDiamond {
            n,
            h: vec![BigInt::zero(); (n + 1) * (n + 1)],
        }
    }

    pub fn from_entries(n: usize, h: Vec<BigInt>) -> Self {
        assert_eq!(h.len(), (n + 1) * (n + 1), "entry count mismatch");
        HodgeDiamond { n, h }
    }

    pub fn from_rows_i64(rows: &[&[i64]]) -> Self {
        let n = rows.len() - 1;
        let mut h = Vec::with_capacity((n + 1) * (n + 1));
        for r in rows {
            assert_eq!(r.len(), n + 1, "diamond must be square");
            h.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        HodgeDiamond { n, h }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.h[i * (self.n + 1) + j]
    }

    fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.h[i * (self.n + 1) + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.h.iter().all(|x| x.is_zero())
    }

    /// First Serre-duality violation, if any.
    pub fn serre_violation(&self) -> Option<(usize, usize)> {
        let n = self.n;
        for i in 0..=n {
            for j in 0..=n {
                if self.get(i, j) != self.get(n - i, n - j) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Serre duality holds entrywise.
    pub fn is_member(&self) -> bool {
        self.serre_violation().is_none()
    }

    pub fn to_poly(&self) -> GradedPolynomial {
        let n = self.n;
        GradedPolynomial::from_terms(
            &ctx::hodge(),
            (0..=n).flat_map(|i| {
                (0..=n).map(move |j| {
                    (
                        vec![i as u32, j as u32, n as u32],
                        self.get(i, j).clone(),
                    )
                })
            }),
        )
    }

    /// Extract a diamond from a polynomial homogeneous of degree n in z
    /// whose x- and y-exponents stay within 0..=n.
    pub fn from_poly(p: &GradedPolynomial, n: usize) -> Result<Self, HodgeError> {
        let mut d = HodgeDiamond::zero(n);
        for (exp, coef) in p.terms() {
            let (i, j, k) = (exp[0] as usize, exp[1] as usize, exp[2] as usize);
            if k != n || i > n || j > n {
                return Err(HodgeError::InvalidShape {
                    n,
                    detail: format!("term x^{i}y^{j}z^{k}"),
                });
            }
            d.set(i, j, coef.clone());
        }
        Ok(d)
    }

    /// Product of two members, re-extracted in dimension `n1 + n2`.
    pub fn kunneth(&self, other: &Self) -> Result<Self, HodgeError> {
        for d in [self, other] {
            if let Some((i, j)) = d.serre_violation() {
                return Err(HodgeError::NotSerreDual { n: d.n, i, j });
            }
        }
        let prod = &self.to_poly() * &other.to_poly();
        Self::from_poly(&prod, self.n + other.n)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "diamond degree mismatch");
        let h = self.h.iter().zip(&other.h).map(|(a, b)| a + b).collect();
        HodgeDiamond { n: self.n, h }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "diamond degree mismatch");
        let h = self.h.iter().zip(&other.h).map(|(a, b)| a - b).collect();
        HodgeDiamond { n: self.n, h }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        HodgeDiamond {
            n: self.n,
            h: self.h.iter().map(|x| x * k).collect(),
        }
    }

    /// Row-major coordinates, length (n+1)^2.
    pub fn full_coords(&self) -> Vec<BigInt> {
        self.h.clone()
    }

    /// Values at the Serre-orbit representatives, length `rank(n)`.
    /// For a member these coordinates determine the diamond.
    pub fn rep_coords(&self) -> Vec<BigInt> {
        orbit_reps(self.n)
            .into_iter()
            .map(|(i, j)| self.get(i, j).clone())
            .collect()
    }

    /// Rebuild a member from representative coordinates by mirroring.
    pub fn from_rep_coords(n: usize, coords: &[BigInt]) -> Self {
        let reps = orbit_reps(n);
        assert_eq!(coords.len(), reps.len(), "coordinate count mismatch");
        let mut d = HodgeDiamond::zero(n);
        for ((i, j), v) in reps.into_iter().zip(coords) {
            d.set(i, j, v.clone());
            d.set(n - i, n - j, v.clone());
        }
        d
    }

    /// Euler characteristic: alternating sum of the entries.
    pub fn chi(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for i in 0..=self.n {
            for j in 0..=self.n {
                if (i + j) % 2 == 0 {
                    acc += self.get(i, j);
                } else {
                    acc -= self.get(i, j);
                }
            }
        }
        acc
    }

    pub fn h00(&self) -> BigInt {
        self.get(0, 0).clone()
    }
}

impl fmt::Display for HodgeDiamond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// Graded family of diamonds, carried as a polynomial in `Z[x,y,z]` whose
/// pieces all fit diamonds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeFamily {
    poly: GradedPolynomial,
}

impl HodgeFamily {
    pub fn from_poly(poly: GradedPolynomial) -> Result<Self, HodgeError> {
        assert_eq!(poly.ctx(), &ctx::hodge(), "family lives in Z[x,y,z]");
        for (exp, _) in poly.terms() {
            if exp[0] > exp[2] || exp[1] > exp[2] {
                return Err(HodgeError::InvalidShape {
                    n: exp[2] as usize,
                    detail: format!("term x^{}y^{}z^{}", exp[0], exp[1], exp[2]),
                });
            }
        }
        Ok(HodgeFamily { poly })
    }

    pub fn piece(&self, n: usize) -> HodgeDiamond {
        HodgeDiamond::from_poly(&self.poly.graded_piece(n as u32), n)
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

/// Rank of degree n: `((n+1)^2 + 1)/2` for even n, `(n+1)^2 / 2` for odd n.
pub fn rank(n: usize) -> usize {
    let sq = (n + 1) * (n + 1);
    if n % 2 == 0 {
        (sq + 1) / 2
    } else {
        sq / 2
    }
}

/// One representative per Serre orbit `{(i,j), (n-i,n-j)}`: the
/// lexicographically smaller pair, in lexicographic order.
pub fn orbit_reps(n: usize) -> Vec<(usize, usize)> {
    let mut reps = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            if (i, j) <= (n - i, n - j) {
                reps.push((i, j));
            }
        }
    }
    reps
}

/// The standard basis of degree n: `(x^i y^j + x^{n-i} y^{n-j}) z^n` over
/// the non-fixed orbits and the lone center monomial for even n.
pub fn basis(n: usize) -> Vec<HodgeDiamond> {
    orbit_reps(n)
        .into_iter()
        .map(|(i, j)| {
            let mut d = HodgeDiamond::zero(n);
            d.set(i, j, BigInt::one());
            if (i, j) != (n - i, n - j) {
                d.set(n - i, n - j, BigInt::one());
            }
            d
        })
        .collect()
}

/// Monomial `A^a B^b C^c D^d` in the generator ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenMonomial {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl GenMonomial {
    pub fn degree(&self) -> u32 {
        self.a + self.b + 2 * self.c + 2 * self.d
    }

    pub fn exponents(&self) -> Vec<u32> {
        vec![self.a, self.b, self.c, self.d]
    }

    pub fn to_poly(&self) -> GradedPolynomial {
        GradedPolynomial::monomial(&ctx::generators(), self.exponents(), 1)
    }
}

impl fmt::Display for GenMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == 0 && self.b == 0 && self.c == 0 && self.d == 0 {
            return write!(f, "1");
        }
        for (name, e) in [("A", self.a), ("B", self.b), ("C", self.c), ("D", self.d)] {
            if e == 1 {
                write!(f, "{name}")?;
            } else if e > 1 {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// All degree-n monomials in A, B, C, D, lexicographically ascending in
/// (a, b, c, d).
pub fn monomials(n: usize) -> Vec<GenMonomial> {
    let n = n as u32;
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=(n - a) {
            let rem = n - a - b;
            if rem % 2 != 0 {
                continue;
            }
            for c in 0..=(rem / 2) {
                out.push(GenMonomial {
                    a,
                    b,
                    c,
                    d: rem / 2 - c,
                });
            }
        }
    }
    out
}

/// The degree-n basis monomials of the quotient by G: the D-free block
/// `A^i B^j C^k` (i+j+2k = n) in lexicographic order, then the same list in
/// degree n-2 with a single factor of D appended.
pub fn normal_monomials(n: usize) -> Vec<GenMonomial> {
    let mut out = Vec::new();
    let block = |deg: i64, d: u32, out: &mut Vec<GenMonomial>| {
        if deg < 0 {
            return;
        }
        let deg = deg as u32;
        for a in 0..=deg {
            for b in 0..=(deg - a) {
                let rem = deg - a - b;
                if rem % 2 == 0 {
                    out.push(GenMonomial {
                        a,
                        b,
                        c: rem / 2,
                        d,
                    });
                }
            }
        }
    };
    block(n as i64, 0, &mut out);
    block(n as i64 - 2, 1, &mut out);
    out
}

fn abcd_poly(terms: &[(u32, u32, u32, u32, i64)]) -> GradedPolynomial {
    GradedPolynomial::from_terms(
        &ctx::generators(),
        terms
            .iter()
            .map(|&(a, b, c, d, k)| (vec![a, b, c, d], BigInt::from(k))),
    )
}

/// Images of A, B, C, D in `Z[x,y,z]`:
/// `(1+xy)z`, `(x+y)z`, `xy z^2`, `(x + x y^2) z^2`.
pub fn phi_images() -> &'static [GradedPolynomial; 4] {
    static IMAGES: OnceLock<[GradedPolynomial; 4]> = OnceLock::new();
    IMAGES.get_or_init(|| {
        let c = ctx::hodge();
        let p = |terms: &[(u32, u32, u32)]| {
            GradedPolynomial::from_terms(
                &c,
                terms.iter().map(|&(i, j, k)| (vec![i, j, k], BigInt::one())),
            )
        };
        [
            p(&[(0, 0, 1), (1, 1, 1)]),
            p(&[(1, 0, 1), (0, 1, 1)]),
            p(&[(1, 1, 2)]),
            p(&[(1, 0, 2), (1, 2, 2)]),
        ]
    })
}

/// The defining relation `G = D^2 - ABD + C(A^2 + B^2 - 4C)`.
pub fn relation_poly() -> GradedPolynomial {
    abcd_poly(&[
        (0, 0, 0, 2, 1),
        (1, 1, 0, 1, -1),
        (2, 0, 1, 0, 1),
        (0, 2, 1, 0, 1),
        (0, 0, 2, 0, -4),
    ])
}

/// Substitute generator images into a polynomial in `Z[A,B,C,D]`.
pub(crate) fn apply_images(
    p: &GradedPolynomial,
    images: &[GradedPolynomial; 4],
) -> GradedPolynomial {
    let target = images[0].ctx().clone();
    p.substitute(
        &target,
        &[
            ("A", images[0].clone()),
            ("B", images[1].clone()),
            ("C", images[2].clone()),
            ("D", images[3].clone()),
        ],
    )
    .expect("all generators have images")
}

/// The presentation map: substitute the standard images and split into a
/// graded family of diamonds.
pub fn phi(p: &GradedPolynomial) -> HodgeFamily {
    assert_eq!(p.ctx(), &ctx::generators(), "phi expects Z[A,B,C,D]");
    HodgeFamily::from_poly(apply_images(p, phi_images()))
        .expect("generator images satisfy the diamond shape")
}

/// Products of image powers for a monomial list, sharing power tables.
pub(crate) fn monomial_images(
    images: &[GradedPolynomial; 4],
    monos: &[GenMonomial],
) -> Vec<GradedPolynomial> {
    let target = images[0].ctx().clone();
    let mut powers: Vec<Vec<GradedPolynomial>> = images
        .iter()
        .map(|img| vec![GradedPolynomial::one(&target), img.clone()])
        .collect();
    let power = |g: usize, e: u32, powers: &mut Vec<Vec<GradedPolynomial>>| {
        while powers[g].len() <= e as usize {
            let next = powers[g].last().unwrap() * &powers[g][1];
            powers[g].push(next);
        }
        powers[g][e as usize].clone()
    };
    monos
        .iter()
        .map(|m| {
            let mut acc = GradedPolynomial::one(&target);
            for (g, e) in [(0, m.a), (1, m.b), (2, m.c), (3, m.d)] {
                if e > 0 {
                    acc = &acc * &power(g, e, &mut powers);
                }
            }
            acc
        })
        .collect()
}

/// Class in the quotient ring written in the normal form `P0 + P1 * D`
/// with P0, P1 free of D.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationElement {
    p0: GradedPolynomial,
    p1: GradedPolynomial,
}

impl PresentationElement {
    pub fn new(p0: GradedPolynomial, p1: GradedPolynomial) -> Self {
        for p in [&p0, &p1] {
            assert_eq!(p.ctx(), &ctx::generators(), "presentation lives in Z[A,B,C,D]");
            assert!(
                p.terms().all(|(e, _)| e[3] == 0),
                "normal-form parts must be free of D"
            );
        }
        PresentationElement { p0, p1 }
    }

    pub fn zero() -> Self {
        let z = GradedPolynomial::zero(&ctx::generators());
        PresentationElement {
            p0: z.clone(),
            p1: z,
        }
    }

    pub fn p0(&self) -> &GradedPolynomial {
        &self.p0
    }

    pub fn p1(&self) -> &GradedPolynomial {
        &self.p1
    }

    pub fn is_zero(&self) -> bool {
        self.p0.is_zero() && self.p1.is_zero()
    }

    /// Lift back to `Z[A,B,C,D]` as `P0 + P1 * D`.
    pub fn to_poly(&self) -> GradedPolynomial {
        let d = GradedPolynomial::var(&ctx::generators(), "D");
        &self.p0 + &(&self.p1 * &d)
    }
}

impl fmt::Display for PresentationElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// `-C(A^2 + B^2 - 4C)` and `AB`: the two coefficients of the rewrite
/// `D^2 -> AB*D - C(A^2+B^2-4C)`.
fn rewrite_parts() -> (GradedPolynomial, GradedPolynomial) {
    (
        abcd_poly(&[(2, 0, 1, 0, -1), (0, 2, 1, 0, -1), (0, 0, 2, 0, 4)]),
        abcd_poly(&[(1, 1, 0, 0, 1)]),
    )
}

/// Rewrite every power `D^l` with l >= 2 via the relation until the
/// D-degree is at most 1. The result is the unique normal form.
pub fn normal_form(p: &GradedPolynomial) -> PresentationElement {
    assert_eq!(p.ctx(), &ctx::generators(), "normal_form expects Z[A,B,C,D]");
    let (alpha_step, beta_step) = rewrite_parts();
    let one = GradedPolynomial::one(&ctx::generators());
    let zero = GradedPolynomial::zero(&ctx::generators());
    // D^l = alpha[l] + beta[l] * D
    let mut alpha = vec![one.clone(), zero.clone()];
    let mut beta = vec![zero.clone(), one];
    let max_d = p.terms().map(|(e, _)| e[3]).max().unwrap_or(0) as usize;
    while alpha.len() <= max_d {
        let l = alpha.len() - 1;
        alpha.push(&beta[l] * &alpha_step);
        beta.push(&alpha[l] + &(&beta[l] * &beta_step));
    }
    let mut p0 = zero.clone();
    let mut p1 = zero;
    for (exp, coef) in p.terms() {
        let base = GradedPolynomial::monomial(
            &ctx::generators(),
            vec![exp[0], exp[1], exp[2], 0],
            coef.clone(),
        );
        let l = exp[3] as usize;
        p0 = &p0 + &(&base * &alpha[l]);
        p1 = &p1 + &(&base * &beta[l]);
    }
    PresentationElement { p0, p1 }
}

/// Product in the quotient ring, directly in normal form.
pub fn nf_mul(e1: &PresentationElement, e2: &PresentationElement) -> PresentationElement {
    let (alpha, beta) = rewrite_parts();
    let cross = &e1.p1 * &e2.p1;
    let p0 = &(&e1.p0 * &e2.p0) + &(&cross * &alpha);
    let p1 = &(&(&e1.p0 * &e2.p1) + &(&e1.p1 * &e2.p0)) + &(&cross * &beta);
    PresentationElement { p0, p1 }
}

struct DegreeSolver {
    monomials: Vec<GenMonomial>,
    inverse: IntMatrix,
}

fn solver(n: usize) -> Result<Arc<DegreeSolver>, HodgeError> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<DegreeSolver>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().unwrap().get(&n) {
        return Ok(s.clone());
    }
    let monos = normal_monomials(n);
    let images = monomial_images(phi_images(), &monos);
    let r = rank(n);
    assert_eq!(monos.len(), r, "normal monomial count must equal the rank");
    let cols: Vec<Vec<BigInt>> = images
        .iter()
        .map(|img| {
            HodgeDiamond::from_poly(img, n)
                .expect("generator images satisfy the diamond shape")
                .rep_coords()
        })
        .collect();
    let m = IntMatrix::from_cols(r, &cols);
    let inverse =
        lattice::inverse_unimodular(&m).ok_or(HodgeError::InternalBasisDefect { degree: n })?;
    let s = Arc::new(DegreeSolver {
        monomials: monos,
        inverse,
    });
    cache.lock().unwrap().insert(n, s.clone());
    Ok(s)
}

/// Write a member of degree n over the normal monomial basis: the unique
/// `P0 + P1 * D` with `phi(P0 + P1*D)` equal to the diamond.
pub fn decompose(d: &HodgeDiamond) -> Result<PresentationElement, HodgeError> {
    if let Some((i, j)) = d.serre_violation() {
        return Err(HodgeError::NotSerreDual { n: d.dim(), i, j });
    }
    let s = solver(d.dim())?;
    let x = s.inverse.mul_vec(&d.rep_coords());
    let mut p0 = GradedPolynomial::zero(&ctx::generators());
    let mut p1 = GradedPolynomial::zero(&ctx::generators());
    for (mono, coef) in s.monomials.iter().zip(x) {
        if coef.is_zero() {
            continue;
        }
        let stripped = GenMonomial { d: 0, ..*mono };
        let t = GradedPolynomial::monomial(&ctx::generators(), stripped.exponents(), coef);
        if mono.d == 0 {
            p0 = &p0 + &t;
        } else {
            p1 = &p1 + &t;
        }
    }
    Ok(PresentationElement { p0, p1 })
}

/// Integer functional on the `(n+1)^2` diamond coordinates, optionally
/// taken modulo m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFunctional {
    pub n: usize,
    /// Row-major, lambda[i*(n+1)+j] pairs with h^{i,j}.
    pub lambda: Vec<BigInt>,
    pub modulus: Option<BigInt>,
}

impl LinearFunctional {
    pub fn new(n: usize, lambda: Vec<BigInt>, modulus: Option<BigInt>) -> Self {
        assert_eq!(lambda.len(), (n + 1) * (n + 1), "coefficient count mismatch");
        LinearFunctional { n, lambda, modulus }
    }

    /// The coordinate functional `e_{i,j}`.
    pub fn elementary(n: usize, i: usize, j: usize) -> Self {
        let mut lambda = vec![BigInt::zero(); (n + 1) * (n + 1)];
        lambda[i * (n + 1) + j] = BigInt::one();
        LinearFunctional {
            n,
            lambda,
            modulus: None,
        }
    }

    /// `e_{i,j} - e_{n-i,n-j}`.
    pub fn serre_difference(n: usize, i: usize, j: usize) -> Self {
        let mut lambda = vec![BigInt::zero(); (n + 1) * (n + 1)];
        lambda[i * (n + 1) + j] += BigInt::one();
        lambda[(n - i) * (n + 1) + (n - j)] -= BigInt::one();
        LinearFunctional {
            n,
            lambda,
            modulus: None,
        }
    }

    pub fn with_modulus(mut self, m: BigInt) -> Self {
        self.modulus = Some(m);
        self
    }

    pub fn eval(&self, d: &HodgeDiamond) -> BigInt {
        assert_eq!(d.dim(), self.n, "functional degree mismatch");
        lattice::dot(&self.lambda, &d.full_coords())
    }

    /// Zero exactly, or zero mod m when a modulus is set.
    pub fn vanishes_on(&self, d: &HodgeDiamond) -> bool {
        let v = self.eval(d);
        match &self.modulus {
            Some(m) => v.mod_floor(m).is_zero(),
            None => v.is_zero(),
        }
    }
}

/// Functional with the display name the CLI prints (`serre[i,j]`, ...).
#[derive(Debug, Clone)]
pub struct NamedFunctional {
    pub name: String,
    pub functional: LinearFunctional,
}

fn serre_family(n: usize) -> Vec<NamedFunctional> {
    orbit_reps(n)
        .into_iter()
        .filter(|&(i, j)| (i, j) != (n - i, n - j))
        .map(|(i, j)| NamedFunctional {
            name: format!("serre[{i},{j}]"),
            functional: LinearFunctional::serre_difference(n, i, j),
        })
        .collect()
}

/// Basis of the annihilator of degree n inside functionals on the
/// `(n+1)^2` coordinates. The computed annihilator is checked against the
/// Serre-difference span and the named family is returned.
pub fn relations(n: usize) -> Result<Vec<NamedFunctional>, HodgeError> {
    let coords = (n + 1) * (n + 1);
    let bas = basis(n);
    let rows = IntMatrix::from_fn(bas.len(), coords, |k, c| bas[k].full_coords()[c].clone());
    let computed = kernel_basis(&rows);
    let named = serre_family(n);
    let named_cols: Vec<Vec<BigInt>> = named
        .iter()
        .map(|f| f.functional.lambda.clone())
        .collect();
    if !lattice_equal(
        &IntMatrix::from_cols(coords, &computed),
        &IntMatrix::from_cols(coords, &named_cols),
    ) {
        return Err(HodgeError::SpanMismatch { degree: n });
    }
    Ok(named)
}

/// Generating set of the mod-m annihilator of the lattice spanned by the
/// degree-n monomial images, checked to equal the Serre span mod m.
pub fn congruences(n: usize, m: &BigInt) -> Result<Vec<NamedFunctional>, HodgeError> {
    let coords = (n + 1) * (n + 1);
    let images = monomial_images(phi_images(), &monomials(n));
    let rows = IntMatrix::from_fn(images.len(), coords, |k, c| {
        HodgeDiamond::from_poly(&images[k], n)
            .expect("images fit diamonds")
            .full_coords()[c]
            .clone()
    });
    let computed = kernel_mod(&rows, m);
    let named: Vec<NamedFunctional> = serre_family(n)
        .into_iter()
        .map(|f| NamedFunctional {
            name: f.name,
            functional: f.functional.with_modulus(m.clone()),
        })
        .collect();
    let named_cols: Vec<Vec<BigInt>> = named
        .iter()
        .map(|f| f.functional.lambda.clone())
        .collect();
    if !span_mod_equal(
        &IntMatrix::from_cols(coords, &computed),
        &IntMatrix::from_cols(coords, &named_cols),
        m,
    ) {
        return Err(HodgeError::SpanMismatch { degree: n });
    }
    Ok(named)
}

/// Lattice basis of the degree-n part of the ideal `(C)`: the basis of
/// degree n-2 multiplied by `xy z^2`. Empty below degree 2.
pub fn birational_ideal_basis(n: usize) -> Vec<HodgeDiamond> {
    if n < 2 {
        return Vec::new();
    }
    let c_img = &phi_images()[2];
    basis(n - 2)
        .iter()
        .map(|b| {
            HodgeDiamond::from_poly(&(c_img * &b.to_poly()), n)
                .expect("product of members fits a diamond")
        })
        .collect()
}

/// The coordinate pairs on the two outer edges i = 0 and j = 0, row-major.
/// By Serre duality these span the same functionals as the full outer frame
/// including i = n and j = n.
fn outer_edge_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            if i == 0 || j == 0 {
                out.push((i, j));
            }
        }
    }
    out
}

/// All outer-frame pairs (i or j equal to 0 or n), row-major; the
/// certificate of a birational invariant is expressed over these.
pub fn outer_frame_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            if i == 0 || j == 0 || i == n || j == n {
                out.push((i, j));
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub enum BirationalVerdict {
    /// Coefficients over the outer-frame coordinate functionals expressing
    /// the functional modulo the Serre span (and modulo m when set).
    Invariant {
        outer: Vec<((usize, usize), BigInt)>,
    },
    /// An ideal class on which the functional does not vanish.
    Violates {
        class: HodgeDiamond,
        value: BigInt,
        basis_index: usize,
    },
}

impl BirationalVerdict {
    pub fn is_invariant(&self) -> bool {
        matches!(self, BirationalVerdict::Invariant { .. })
    }
}

/// A linear combination of Hodge numbers is a birational invariant exactly
/// when it kills the ideal `(C)` in its degree; on success the certificate
/// rewrites it over the outer-frame numbers modulo Serre duality.
pub fn is_birational_invariant(f: &LinearFunctional) -> Result<BirationalVerdict, HodgeError> {
    let n = f.n;
    for (k, cls) in birational_ideal_basis(n).into_iter().enumerate() {
        if !f.vanishes_on(&cls) {
            return Ok(BirationalVerdict::Violates {
                value: f.eval(&cls),
                class: cls,
                basis_index: k,
            });
        }
    }
    // certificate: f = sum over outer frame + Serre combination (+ mZ)
    let coords = (n + 1) * (n + 1);
    let outer = outer_frame_pairs(n);
    let mut cols: Vec<Vec<BigInt>> = outer
        .iter()
        .map(|&(i, j)| LinearFunctional::elementary(n, i, j).lambda)
        .collect();
    for nf in serre_family(n) {
        cols.push(nf.functional.lambda);
    }
    if let Some(m) = &f.modulus {
        for c in 0..coords {
            let mut col = vec![BigInt::zero(); coords];
            col[c] = m.clone();
            cols.push(col);
        }
    }
    let gens = IntMatrix::from_cols(coords, &cols);
    let x = lattice::solve_exact(&gens, &f.lambda).map_err(|_| {
        HodgeError::Internal("vanishing functional without outer certificate".into())
    })?;
    let outer_coeffs = outer
        .into_iter()
        .zip(x)
        .filter(|(_, c)| !c.is_zero())
        .collect();
    Ok(BirationalVerdict::Invariant {
        outer: outer_coeffs,
    })
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

/// Degree-by-degree certification of the presentation: the images of the
/// degree-n monomials span exactly the Serre-dual lattice, and the kernel of
/// the monomial-image map is generated by multiples of the relation G.
pub fn verify_presentation(max_n: usize) -> Result<(), VerifyFailure> {
    verify_presentation_with_images(phi_images(), max_n)
}

/// Same check against a caller-supplied image table (used by the negative
/// controls in the test suite).
pub fn verify_presentation_with_images(
    images: &[GradedPolynomial; 4],
    max_n: usize,
) -> Result<(), VerifyFailure> {
    const CHECK: &str = "hodge.presentation";
    for n in 0..=max_n {
        let monos = monomials(n);
        let image_polys = monomial_images(images, &monos);
        let coords = (n + 1) * (n + 1);
        let mut img_cols = Vec::with_capacity(monos.len());
        for (m, img) in monos.iter().zip(&image_polys) {
            match HodgeDiamond::from_poly(&img.graded_piece(n as u32), n) {
                Ok(d) => {
                    if let Some((i, j)) = d.serre_violation() {
                        return Err(VerifyFailure::new(
                            CHECK,
                            n,
                            format!("image of {m} breaks Serre duality at ({i},{j})"),
                            serde_json::json!(m.to_string()),
                        ));
                    }
                    img_cols.push(d.full_coords());
                }
                Err(e) => {
                    return Err(VerifyFailure::new(
                        CHECK,
                        n,
                        format!("image of {m} does not fit a diamond: {e}"),
                        serde_json::json!(m.to_string()),
                    ))
                }
            }
        }
        let img_matrix = IntMatrix::from_cols(coords, &img_cols);
        let basis_cols: Vec<Vec<BigInt>> = basis(n).iter().map(|b| b.full_coords()).collect();
        let basis_matrix = IntMatrix::from_cols(coords, &basis_cols);

        // surjectivity: invariant factors of the representative-coordinate
        // matrix are all 1, and the image lattice equals the full degree
        let rep_rows = orbit_reps(n).len();
        let rep_matrix = IntMatrix::from_fn(rep_rows, monos.len(), |r, c| {
            let (i, j) = orbit_reps(n)[r];
            img_cols[c][i * (n + 1) + j].clone()
        });
        let factors = snf(&rep_matrix).factors;
        if !(factors.len() == rep_rows.min(monos.len()) && factors.iter().all(|f| f.is_one())) {
            return Err(VerifyFailure::new(
                CHECK,
                n,
                "monomial image matrix has invariant factors beyond 1",
                ints_json(&factors),
            ));
        }
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

        // kernel: spanned by G * (monomials of degree n-4)
        let kernel = kernel_basis(&img_matrix);
        let kernel_matrix = IntMatrix::from_cols(monos.len(), &kernel);
        let index_of: HashMap<GenMonomial, usize> = monos
            .iter()
            .enumerate()
            .map(|(k, m)| (*m, k))
            .collect();
        let relation = relation_poly();
        let mut rel_cols = Vec::new();
        if n >= 4 {
            for m in monomials(n - 4) {
                let prod = &relation * &m.to_poly();
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
                rel_cols.push(col);
            }
        }
        let rel_matrix = IntMatrix::from_cols(monos.len(), &rel_cols);
        if !lattice_equal(&kernel_matrix, &rel_matrix) {
            return Err(mismatch_failure(
                CHECK,
                n,
                &kernel_matrix,
                &rel_matrix,
                "kernel",
                "relation multiples",
            ));
        }
    }
    Ok(())
}

/// Degree-by-degree certification of the birational structure: the kernel
/// of the outer-edge projection is `(C)` in each degree and the projected
/// image is free of rank 2n on the stated outer basis.
pub fn verify_birational(max_n: usize) -> Result<(), VerifyFailure> {
    const CHECK: &str = "hodge.birational";
    for n in 2..=max_n {
        let bas = basis(n);
        let outer = outer_edge_pairs(n);
        // kernel of the projection restricted to the degree lattice
        let proj = IntMatrix::from_fn(outer.len(), bas.len(), |r, c| {
            let (i, j) = outer[r];
            bas[c].get(i, j).clone()
        });
        let kernel = kernel_basis(&proj);
        let coords = (n + 1) * (n + 1);
        let kernel_cols: Vec<Vec<BigInt>> = kernel
            .iter()
            .map(|y| {
                let mut acc = HodgeDiamond::zero(n);
                for (b, coef) in bas.iter().zip(y) {
                    acc = acc.add(&b.scale(coef));
                }
                acc.full_coords()
            })
            .collect();
        let ideal_cols: Vec<Vec<BigInt>> = birational_ideal_basis(n)
            .iter()
            .map(|d| d.full_coords())
            .collect();
        let kernel_matrix = IntMatrix::from_cols(coords, &kernel_cols);
        let ideal_matrix = IntMatrix::from_cols(coords, &ideal_cols);
        if !lattice_equal(&kernel_matrix, &ideal_matrix) {
            return Err(mismatch_failure(
                CHECK,
                n,
                &kernel_matrix,
                &ideal_matrix,
                "projection kernel",
                "ideal",
            ));
        }
        if lattice::rank(&ideal_matrix) != rank(n) - 2 * n {
            return Err(VerifyFailure::new(
                CHECK,
                n,
                format!("ideal rank is not rank(n) - 2n = {}", rank(n) - 2 * n),
                serde_json::Value::Null,
            ));
        }
        // image: rank 2n, spanned by y^j (j < n), x^i (0 < i < n), x^n + y^n
        if lattice::rank(&proj) != 2 * n {
            return Err(VerifyFailure::new(
                CHECK,
                n,
                format!("projected image rank is not 2n = {}", 2 * n),
                serde_json::Value::Null,
            ));
        }
        let image_matrix = {
            let cols: Vec<Vec<BigInt>> = (0..proj.cols()).map(|j| proj.col(j)).collect();
            IntMatrix::from_cols(outer.len(), &cols)
        };
        let pos = |i: usize, j: usize| {
            outer
                .iter()
                .position(|&p| p == (i, j))
                .expect("outer pair present")
        };
        let mut stated_cols = Vec::new();
        for j in 0..n {
            let mut col = vec![BigInt::zero(); outer.len()];
            col[pos(0, j)] = BigInt::one();
            stated_cols.push(col);
        }
        for i in 1..n {
            let mut col = vec![BigInt::zero(); outer.len()];
            col[pos(i, 0)] = BigInt::one();
            stated_cols.push(col);
        }
        let mut col = vec![BigInt::zero(); outer.len()];
        col[pos(n, 0)] = BigInt::one();
        col[pos(0, n)] = BigInt::one();
        stated_cols.push(col);
        let stated = IntMatrix::from_cols(outer.len(), &stated_cols);
        if !lattice_equal(&image_matrix, &stated) {
            return Err(mismatch_failure(
                CHECK,
                n,
                &image_matrix,
                &stated,
                "projected image",
                "stated outer basis",
            ));
        }
        // the inner coordinate functional in the middle must be rejected
        let e11 = LinearFunctional::elementary(n, 1, 1);
        match is_birational_invariant(&e11) {
            Ok(BirationalVerdict::Violates { .. }) => {}
            _ => {
                return Err(VerifyFailure::new(
                    CHECK,
                    n,
                    "e[1,1] was not rejected as a birational invariant",
                    serde_json::Value::Null,
                ))
            }
        }
    }
    Ok(())
}

/// Relation/congruence span certification across degrees: the computed
/// annihilators equal the Serre spans exactly and modulo every listed m.
pub fn verify_relation_spans(max_n: usize, moduli: &[i64]) -> Result<(), VerifyFailure> {
    verify_relation_spans_with(max_n, moduli, false)
}

/// Negative-control variant: when `tamper` is set the named table drops a
/// generator, which must be reported as a failure.
pub fn verify_relation_spans_with(
    max_n: usize,
    moduli: &[i64],
    tamper: bool,
) -> Result<(), VerifyFailure> {
    const CHECK: &str = "hodge.relations";
    for n in 0..=max_n {
        let named = relations(n).map_err(|e| {
            VerifyFailure::new(CHECK, n, e.to_string(), serde_json::Value::Null)
        })?;
        let expected = (n + 1) * (n + 1) - rank(n);
        let got = if tamper && !named.is_empty() {
            named.len() - 1
        } else {
            named.len()
        };
        if got != expected {
            return Err(VerifyFailure::new(
                CHECK,
                n,
                format!("relation count {got} differs from coordinate count minus rank {expected}"),
                serde_json::Value::Null,
            ));
        }
        for m in moduli {
            congruences(n, &BigInt::from(*m)).map_err(|e| {
                VerifyFailure::new(CHECK, n, e.to_string(), serde_json::Value::Null)
            })?;
        }
    }
    Ok(())
}
