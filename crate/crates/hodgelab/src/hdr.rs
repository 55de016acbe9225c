//! The Hodge-de Rham ring: pairs `(a, b)` of a diamond and a de Rham
//! vector of the same degree subject to the two constraints shared by both
//! sides of an actual variety, equal component count `h^{0,0}(a) = h^0(b)`
//! and equal Euler characteristic `chi(a) = chi(b)`.
//!
//! The kernel of `(chi, h^0)` on the de Rham side is the ideal generated by
//! `g2 = (t + 2t^2 + t^3) z^2` and `g3 = (t^2 + 2t^3 + t^4) z^3`; adjoining
//! the classes `(0, g2)` and `(0, g3)` to the image of `(phi, psi)` hits
//! the whole ring, which is what `verify_tau_surjective` certifies.

use crate::check::VerifyFailure;
use crate::derham::{self, DeRhamVector};
use crate::hodge::{self, GenMonomial, HodgeDiamond, PresentationElement};
use crate::lattice::{
    self, kernel_basis, kernel_mod, lattice_equal, lattice_le, span_mod_contains, span_mod_equal,
    IntMatrix,
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
pub enum HdrError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("pair is not a member: {0}")]
    NotMember(String),
    #[error(transparent)]
    Hodge(#[from] hodge::HodgeError),
    #[error(transparent)]
    DeRham(#[from] derham::DeRhamError),
    #[error("computed annihilator does not match the named span in degree {degree}")]
    SpanMismatch { degree: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

/// A degree-n pair (diamond, de Rham vector). Membership additionally
/// requires the component and Euler-characteristic constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HdrElement {
    pub hodge: HodgeDiamond,
    pub derham: DeRhamVector,
}

impl HdrElement {
    pub fn new(hodge: HodgeDiamond, derham: DeRhamVector) -> Result<Self, HdrError> {
        if hodge.dim() != derham.dim() {
            return Err(HdrError::DegreeMismatch {
                left: hodge.dim(),
                right: derham.dim(),
            });
        }
        Ok(HdrElement { hodge, derham })
    }

    pub fn dim(&self) -> usize {
        self.hodge.dim()
    }

    pub fn membership_violation(&self) -> Option<String> {
        if let Some((i, j)) = self.hodge.serre_violation() {
            return Some(format!("Serre duality fails at ({i},{j})"));
        }
        if let Some(e) = self.derham.membership_violation() {
            return Some(e.to_string());
        }
        if self.hodge.h00() != self.derham.h0() {
            return Some("component counts differ".to_string());
        }
        if self.hodge.chi() != self.derham.chi() {
            return Some("Euler characteristics differ".to_string());
        }
        None
    }

    pub fn is_member(&self) -> bool {
        self.membership_violation().is_none()
    }

    /// Componentwise product.
    pub fn product(&self, other: &Self) -> Result<Self, HdrError> {
        Ok(HdrElement {
            hodge: self.hodge.kunneth(&other.hodge)?,
            derham: self.derham.mul(&other.derham)?,
        })
    }

    /// All diamond coordinates row-major, then `h^0 .. h^{2n}`.
    pub fn combined_coords(&self) -> Vec<BigInt> {
        let mut v = self.hodge.full_coords();
        v.extend(self.derham.full_coords());
        v
    }
}

impl fmt::Display for HdrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.hodge, self.derham)
    }
}

/// Both membership constraints for a pair already known to have one degree.
pub fn is_member(a: &HodgeDiamond, b: &DeRhamVector) -> Result<bool, HdrError> {
    if a.dim() != b.dim() {
        return Err(HdrError::DegreeMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(HdrElement {
        hodge: a.clone(),
        derham: b.clone(),
    }
    .is_member())
}

/// `g2 = (t + 2t^2 + t^3) z^2`.
pub fn g2_vector() -> DeRhamVector {
    DeRhamVector::from_i64(&[0, 1, 2, 1, 0])
}

/// `g3 = (t^2 + 2t^3 + t^4) z^3`.
pub fn g3_vector() -> DeRhamVector {
    DeRhamVector::from_i64(&[0, 0, 1, 2, 1, 0, 0])
}

pub fn g2_poly() -> GradedPolynomial {
    g2_vector().to_poly()
}

pub fn g3_poly() -> GradedPolynomial {
    g3_vector().to_poly()
}

/// The normalized surface class `(0, g2)`.
pub fn sprime() -> HdrElement {
    HdrElement {
        hodge: HodgeDiamond::zero(2),
        derham: g2_vector(),
    }
}

/// The normalized threefold class `(0, g3)`.
pub fn tprime() -> HdrElement {
    HdrElement {
        hodge: HodgeDiamond::zero(3),
        derham: g3_vector(),
    }
}

/// Basis of `I_n = {v in DR_n : chi(v) = 0, h^0(v) = 0}`, the degree-n part
/// of the kernel of `(chi, h^0)`.
pub fn ideal_kernel_basis(n: usize) -> Vec<DeRhamVector> {
    let bas = derham::basis(n);
    let m = IntMatrix::from_fn(2, bas.len(), |r, c| {
        if r == 0 {
            bas[c].chi()
        } else {
            bas[c].h0()
        }
    });
    kernel_basis(&m)
        .into_iter()
        .map(|y| {
            let mut acc = DeRhamVector::zero(n);
            for (b, coef) in bas.iter().zip(&y) {
                acc = acc.add(&b.scale(coef));
            }
            acc
        })
        .collect()
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

/// Certify degreewise that the kernel of `(chi, h^0)` is generated by g2
/// and g3: `I_n = g2 * DR_{n-2} + g3 * DR_{n-3}` for each n up to `max_n`.
pub fn verify_kernel_ideal(max_n: usize) -> Result<(), VerifyFailure> {
    const CHECK: &str = "hdr.kernel-ideal";
    for n in 2..=max_n {
        let coords = 2 * n + 1;
        let kernel_cols: Vec<Vec<BigInt>> = ideal_kernel_basis(n)
            .iter()
            .map(|v| v.full_coords())
            .collect();
        if kernel_cols.len() != n - 1 {
            return Err(VerifyFailure::new(
                CHECK,
                n,
                format!("kernel rank {} instead of n-1 = {}", kernel_cols.len(), n - 1),
                serde_json::Value::Null,
            ));
        }
        let mut gen_cols: Vec<Vec<BigInt>> = Vec::new();
        for b in derham::basis(n - 2) {
            gen_cols.push(g2_vector().mul(&b).expect("members").full_coords());
        }
        if n >= 3 {
            for b in derham::basis(n - 3) {
                gen_cols.push(g3_vector().mul(&b).expect("members").full_coords());
            }
        }
        let kernel_matrix = IntMatrix::from_cols(coords, &kernel_cols);
        let gen_matrix = IntMatrix::from_cols(coords, &gen_cols);
        if !lattice_equal(&kernel_matrix, &gen_matrix) {
            return Err(mismatch_failure(
                CHECK,
                n,
                &kernel_matrix,
                &gen_matrix,
                "kernel",
                "ideal generators",
            ));
        }
    }
    Ok(())
}

/// Certify the degree-3 replacement rule: together with `g2 * DR_1`, an
/// element w of `I_3` generates the whole of `I_3` exactly when its
/// `h^2` is odd.
pub fn verify_alternative_generators() -> Result<(), VerifyFailure> {
    const CHECK: &str = "hdr.alternative-generators";
    let n = 3;
    let coords = 2 * n + 1;
    let i3 = ideal_kernel_basis(n);
    let i3_matrix = IntMatrix::from_cols(
        coords,
        &i3.iter().map(|v| v.full_coords()).collect::<Vec<_>>(),
    );
    let g2_block: Vec<Vec<BigInt>> = derham::basis(1)
        .iter()
        .map(|b| g2_vector().mul(b).expect("members").full_coords())
        .collect();

    let mut candidates: Vec<DeRhamVector> = Vec::new();
    for p in -2i64..=2 {
        for q in -2i64..=2 {
            if p == 0 && q == 0 {
                continue;
            }
            candidates.push(i3[0].scale(&BigInt::from(p)).add(&i3[1].scale(&BigInt::from(q))));
        }
    }
    candidates.push(g3_vector());
    candidates.push(g3_vector().scale(&BigInt::from(2)));
    // g2 * (1 + t^2) z lies in the g2-ideal and has even middle-adjacent entry
    candidates.push(
        g2_vector()
            .mul(&derham::basis(1)[0])
            .expect("members"),
    );

    for w in candidates {
        let mut cols = g2_block.clone();
        cols.push(w.full_coords());
        let gen_matrix = IntMatrix::from_cols(coords, &cols);
        let generates = lattice_equal(&gen_matrix, &i3_matrix);
        let odd = w.get(2).is_odd();
        if generates != odd {
            return Err(VerifyFailure::new(
                CHECK,
                n,
                format!(
                    "element with h^2 = {} {} the kernel ideal in degree 3",
                    w.get(2),
                    if generates { "generates" } else { "fails to generate" },
                ),
                ints_json(&w.full_coords()),
            ));
        }
    }
    Ok(())
}

/// Graded family of pairs, carried as the two image polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HdrFamily {
    hodge: hodge::HodgeFamily,
    derham: derham::DeRhamFamily,
}

impl HdrFamily {
    pub fn piece(&self, n: usize) -> HdrElement {
        HdrElement {
            hodge: self.hodge.piece(n),
            derham: self.derham.piece(n),
        }
    }

    pub fn hodge(&self) -> &hodge::HodgeFamily {
        &self.hodge
    }

    pub fn derham(&self) -> &derham::DeRhamFamily {
        &self.derham
    }
}

/// The combined presentation map on `Z[A,B,C,D,S,T]`: A..D go to their
/// image pairs, S to the normalized surface class `(0, g2)`, T to the
/// normalized threefold class `(0, g3)`.
pub fn tau(p: &GradedPolynomial) -> HdrFamily {
    assert_eq!(p.ctx(), &ctx::generators_st(), "tau expects Z[A,B,C,D,S,T]");
    let xyz = ctx::hodge();
    let tz = ctx::de_rham();
    let phi = hodge::phi_images();
    let psi = derham::psi_images();
    let zero_xyz = GradedPolynomial::zero(&xyz);
    let hodge_poly = p
        .substitute(
            &xyz,
            &[
                ("A", phi[0].clone()),
                ("B", phi[1].clone()),
                ("C", phi[2].clone()),
                ("D", phi[3].clone()),
                ("S", zero_xyz.clone()),
                ("T", zero_xyz),
            ],
        )
        .expect("all generators mapped");
    let derham_poly = p
        .substitute(
            &tz,
            &[
                ("A", psi[0].clone()),
                ("B", psi[1].clone()),
                ("C", psi[2].clone()),
                ("D", psi[3].clone()),
                ("S", g2_poly()),
                ("T", g3_poly()),
            ],
        )
        .expect("all generators mapped");
    HdrFamily {
        hodge: hodge::HodgeFamily::from_poly(hodge_poly).expect("images fit diamonds"),
        derham: derham::DeRhamFamily::from_poly(derham_poly).expect("images fit the degree bound"),
    }
}

fn basis_cache(n: usize) -> Arc<Vec<HdrElement>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<HdrElement>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().unwrap().get(&n) {
        return b.clone();
    }
    let bh = hodge::basis(n);
    let bd = derham::basis(n);
    let k = bh.len() + bd.len();
    let m = IntMatrix::from_fn(2, k, |r, c| {
        let (h_part, d_part): (BigInt, BigInt) = if c < bh.len() {
            (bh[c].h00(), bh[c].chi())
        } else {
            (-bd[c - bh.len()].h0(), -bd[c - bh.len()].chi())
        };
        if r == 0 {
            h_part
        } else {
            d_part
        }
    });
    let elements: Vec<HdrElement> = kernel_basis(&m)
        .into_iter()
        .map(|y| {
            let mut a = HodgeDiamond::zero(n);
            for (b, coef) in bh.iter().zip(&y[..bh.len()]) {
                a = a.add(&b.scale(coef));
            }
            let mut v = DeRhamVector::zero(n);
            for (b, coef) in bd.iter().zip(&y[bh.len()..]) {
                v = v.add(&b.scale(coef));
            }
            HdrElement {
                hodge: a,
                derham: v,
            }
        })
        .collect();
    let arc = Arc::new(elements);
    cache.lock().unwrap().insert(n, arc.clone());
    arc
}

/// Rank of the degree-n constrained lattice, computed by the kernel, not
/// assumed: `r_n + n - 1` for n >= 1 and 1 in degree 0.
pub fn rank(n: usize) -> usize {
    basis_cache(n).len()
}

/// Lattice basis of degree n, canonical per the Hermite convention.
pub fn basis(n: usize) -> Vec<HdrElement> {
    basis_cache(n).as_ref().clone()
}

/// Combined coordinates of the tau generator classes in degree n: the
/// image pairs of the degree-n monomials, plus the `(0, g2)` multiples,
/// plus (unless withheld) the `(0, g3)` multiples.
fn tau_generator_coords(n: usize, include_tprime: bool) -> Vec<Vec<BigInt>> {
    let hodge_coords = (n + 1) * (n + 1);
    let dr_coords = 2 * n + 1;
    let mut cols = Vec::new();
    let monos = hodge::monomials(n);
    let phi_imgs = hodge::monomial_images(hodge::phi_images(), &monos);
    let psi_imgs = hodge::monomial_images(derham::psi_images(), &monos);
    for (hp, dp) in phi_imgs.iter().zip(&psi_imgs) {
        let a = HodgeDiamond::from_poly(hp, n).expect("images fit diamonds");
        let b = DeRhamVector::from_poly(dp, n).expect("images fit the degree bound");
        let mut col = a.full_coords();
        col.extend(b.full_coords());
        cols.push(col);
    }
    let mut ideal_block = |g: &DeRhamVector, deg: usize| {
        let monos = hodge::monomials(deg);
        let psi_imgs = hodge::monomial_images(derham::psi_images(), &monos);
        for dp in &psi_imgs {
            let b = DeRhamVector::from_poly(dp, deg).expect("images fit the degree bound");
            let prod = g.mul(&b).expect("members");
            let mut col = vec![BigInt::zero(); hodge_coords];
            col.extend(prod.full_coords());
            cols.push(col);
        }
    };
    if n >= 2 {
        ideal_block(&g2_vector(), n - 2);
    }
    if n >= 3 && include_tprime {
        ideal_block(&g3_vector(), n - 3);
    }
    let _ = dr_coords;
    cols
}

/// Certify degreewise that the tau generator classes span the whole
/// constrained lattice.
pub fn verify_tau_surjective(max_n: usize) -> Result<(), VerifyFailure> {
    verify_tau_surjective_with(max_n, true)
}

/// Negative control: withholding the threefold class must break degree 3.
pub fn verify_tau_surjective_with(
    max_n: usize,
    include_tprime: bool,
) -> Result<(), VerifyFailure> {
    const CHECK: &str = "hdr.tau-surjectivity";
    for n in 0..=max_n {
        let coords = (n + 1) * (n + 1) + 2 * n + 1;
        let gen_matrix = IntMatrix::from_cols(coords, &tau_generator_coords(n, include_tprime));
        let basis_cols: Vec<Vec<BigInt>> =
            basis(n).iter().map(|e| e.combined_coords()).collect();
        let basis_matrix = IntMatrix::from_cols(coords, &basis_cols);
        if !lattice_equal(&gen_matrix, &basis_matrix) {
            return Err(mismatch_failure(
                CHECK,
                n,
                &gen_matrix,
                &basis_matrix,
                "tau image",
                "constrained lattice",
            ));
        }
    }
    Ok(())
}

/// Integer functional on the combined coordinates: `lambda` on the diamond
/// entries, `mu` on the de Rham entries, optionally taken modulo m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinedFunctional {
    pub n: usize,
    pub lambda: Vec<BigInt>,
    pub mu: Vec<BigInt>,
    pub modulus: Option<BigInt>,
}

impl CombinedFunctional {
    pub fn new(n: usize, lambda: Vec<BigInt>, mu: Vec<BigInt>, modulus: Option<BigInt>) -> Self {
        assert_eq!(lambda.len(), (n + 1) * (n + 1), "lambda length mismatch");
        assert_eq!(mu.len(), 2 * n + 1, "mu length mismatch");
        CombinedFunctional {
            n,
            lambda,
            mu,
            modulus,
        }
    }

    pub fn coords(&self) -> Vec<BigInt> {
        let mut v = self.lambda.clone();
        v.extend(self.mu.clone());
        v
    }

    pub fn eval(&self, e: &HdrElement) -> BigInt {
        assert_eq!(e.dim(), self.n, "functional degree mismatch");
        lattice::dot(&self.lambda, &e.hodge.full_coords())
            + lattice::dot(&self.mu, &e.derham.full_coords())
    }

    pub fn vanishes_on(&self, e: &HdrElement) -> bool {
        let v = self.eval(e);
        match &self.modulus {
            Some(m) => v.mod_floor(m).is_zero(),
            None => v.is_zero(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NamedCombined {
    pub name: String,
    pub functional: CombinedFunctional,
}

/// The four exact relation families: Serre differences, Poincare
/// differences, the component equality, and the Euler characteristic.
/// In degree 0 the last two coincide.
pub fn named_relation_families(n: usize) -> Vec<NamedCombined> {
    let hc = (n + 1) * (n + 1);
    let dc = 2 * n + 1;
    let mut out = Vec::new();
    for (i, j) in hodge::orbit_reps(n) {
        if (i, j) == (n - i, n - j) {
            continue;
        }
        let mut lambda = vec![BigInt::zero(); hc];
        lambda[i * (n + 1) + j] += BigInt::one();
        lambda[(n - i) * (n + 1) + (n - j)] -= BigInt::one();
        out.push(NamedCombined {
            name: format!("serre[{i},{j}]"),
            functional: CombinedFunctional::new(n, lambda, vec![BigInt::zero(); dc], None),
        });
    }
    for i in 0..n {
        let mut mu = vec![BigInt::zero(); dc];
        mu[i] += BigInt::one();
        mu[2 * n - i] -= BigInt::one();
        out.push(NamedCombined {
            name: format!("poincare[{i}]"),
            functional: CombinedFunctional::new(n, vec![BigInt::zero(); hc], mu, None),
        });
    }
    let mut lambda = vec![BigInt::zero(); hc];
    lambda[0] = BigInt::one();
    let mut mu = vec![BigInt::zero(); dc];
    mu[0] = -BigInt::one();
    out.push(NamedCombined {
        name: "components".to_string(),
        functional: CombinedFunctional::new(n, lambda, mu, None),
    });
    let mut lambda = vec![BigInt::zero(); hc];
    for i in 0..=n {
        for j in 0..=n {
            lambda[i * (n + 1) + j] = if (i + j) % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
        }
    }
    let mut mu = vec![BigInt::zero(); dc];
    for (i, entry) in mu.iter_mut().enumerate() {
        *entry = if i % 2 == 0 {
            -BigInt::one()
        } else {
            BigInt::one()
        };
    }
    out.push(NamedCombined {
        name: "euler".to_string(),
        functional: CombinedFunctional::new(n, lambda, mu, None),
    });
    out
}

/// The middle de Rham coordinate functional scaled by m/2, the mod-m form
/// of the parity congruence.
pub fn parity_functional(n: usize, m: &BigInt) -> NamedCombined {
    let mut mu = vec![BigInt::zero(); 2 * n + 1];
    mu[n] = m / BigInt::from(2);
    NamedCombined {
        name: "parity".to_string(),
        functional: CombinedFunctional::new(
            n,
            vec![BigInt::zero(); (n + 1) * (n + 1)],
            mu,
            Some(m.clone()),
        ),
    }
}

/// Basis of the annihilator of degree n in combined functionals, checked
/// against the named span and returned in named form.
pub fn relations(n: usize) -> Result<Vec<NamedCombined>, HdrError> {
    let coords = (n + 1) * (n + 1) + 2 * n + 1;
    let bas = basis(n);
    let rows = IntMatrix::from_fn(bas.len(), coords, |k, c| bas[k].combined_coords()[c].clone());
    let computed = kernel_basis(&rows);
    let named = named_relation_families(n);
    let named_cols: Vec<Vec<BigInt>> = named.iter().map(|f| f.functional.coords()).collect();
    if !lattice_equal(
        &IntMatrix::from_cols(coords, &computed),
        &IntMatrix::from_cols(coords, &named_cols),
    ) {
        return Err(HdrError::SpanMismatch { degree: n });
    }
    Ok(named)
}

/// Generating set of the mod-m annihilator of the tau-generated lattice:
/// the named exact families plus, for even m in odd degree, the scaled
/// parity functional. Checked against the computed kernel mod m.
pub fn congruences(n: usize, m: &BigInt) -> Result<Vec<NamedCombined>, HdrError> {
    let coords = (n + 1) * (n + 1) + 2 * n + 1;
    let gens = tau_generator_coords(n, true);
    let rows = IntMatrix::from_fn(gens.len(), coords, |k, c| gens[k][c].clone());
    let computed = kernel_mod(&rows, m);
    let mut named: Vec<NamedCombined> = named_relation_families(n)
        .into_iter()
        .map(|f| NamedCombined {
            name: f.name,
            functional: CombinedFunctional {
                modulus: Some(m.clone()),
                ..f.functional
            },
        })
        .collect();
    if m.is_even() && n % 2 == 1 {
        named.push(parity_functional(n, m));
    }
    let named_cols: Vec<Vec<BigInt>> = named.iter().map(|f| f.functional.coords()).collect();
    if !span_mod_equal(
        &IntMatrix::from_cols(coords, &computed),
        &IntMatrix::from_cols(coords, &named_cols),
        m,
    ) {
        return Err(HdrError::SpanMismatch { degree: n });
    }
    Ok(named)
}

/// Is the bare middle functional `h^n_dR` a congruence mod m in degree n?
/// True exactly for m = 2 in odd degree; mod larger even m only the scaled
/// form (m/2) h^n_dR survives.
pub fn parity_is_congruence(n: usize, m: &BigInt) -> bool {
    let coords = (n + 1) * (n + 1) + 2 * n + 1;
    let gens = tau_generator_coords(n, true);
    let rows = IntMatrix::from_fn(gens.len(), coords, |k, c| gens[k][c].clone());
    let computed = kernel_mod(&rows, m);
    let mut parity = vec![BigInt::zero(); coords];
    parity[(n + 1) * (n + 1) + n] = BigInt::one();
    span_mod_contains(&IntMatrix::from_cols(coords, &computed), &parity, m)
}

/// Certify the combined relation and congruence spans, the computed rank
/// formula, and the parity criterion across degrees.
pub fn verify_combined_relations(max_n: usize, moduli: &[i64]) -> Result<(), VerifyFailure> {
    const CHECK: &str = "hdr.relations";
    for n in 0..=max_n {
        relations(n)
            .map_err(|e| VerifyFailure::new(CHECK, n, e.to_string(), serde_json::Value::Null))?;
        let expected_rank = if n == 0 { 1 } else { hodge::rank(n) + n - 1 };
        if rank(n) != expected_rank {
            return Err(VerifyFailure::new(
                CHECK,
                n,
                format!("constrained rank {} differs from {expected_rank}", rank(n)),
                serde_json::Value::Null,
            ));
        }
        for m in moduli {
            let m_big = BigInt::from(*m);
            congruences(n, &m_big).map_err(|e| {
                VerifyFailure::new(CHECK, n, e.to_string(), serde_json::Value::Null)
            })?;
            if *m == 2 {
                let expected = n % 2 == 1;
                if parity_is_congruence(n, &m_big) != expected {
                    return Err(VerifyFailure::new(
                        CHECK,
                        n,
                        format!("parity congruence mod {m} expected {expected}"),
                        serde_json::Value::Null,
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Canonical decomposition of a member `(a, b)`: the degenerate pair
/// `(a, s(a))` decomposed over the presentation, plus the ideal part
/// `b - s(a)` written over `g2` and `g3` multiples of the de Rham normal
/// monomials by the Hermite-canonical solve.
#[derive(Debug, Clone)]
pub struct HdrDecomposition {
    pub presentation: PresentationElement,
    pub ideal_g2: Vec<(GenMonomial, BigInt)>,
    pub ideal_g3: Vec<(GenMonomial, BigInt)>,
}

pub fn decompose(e: &HdrElement) -> Result<HdrDecomposition, HdrError> {
    if let Some(reason) = e.membership_violation() {
        return Err(HdrError::NotMember(reason));
    }
    let n = e.dim();
    let presentation = hodge::decompose(&e.hodge)?;
    let c = e.derham.sub(&derham::s(&e.hodge));
    let mut monos_g2 = Vec::new();
    let mut monos_g3 = Vec::new();
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    if n >= 2 {
        for m in derham::normal_monomials(n - 2) {
            let img = derham::psi(&m.to_poly()).piece(n - 2);
            cols.push(g2_vector().mul(&img).expect("members").full_coords());
            monos_g2.push(m);
        }
    }
    if n >= 3 {
        for m in derham::normal_monomials(n - 3) {
            let img = derham::psi(&m.to_poly()).piece(n - 3);
            cols.push(g3_vector().mul(&img).expect("members").full_coords());
            monos_g3.push(m);
        }
    }
    let gens = IntMatrix::from_cols(2 * n + 1, &cols);
    let x = lattice::solve_exact(&gens, &c.full_coords())
        .map_err(|_| HdrError::Internal("ideal part escaped the generator span".into()))?;
    let (g2_part, g3_part) = x.split_at(monos_g2.len());
    Ok(HdrDecomposition {
        presentation,
        ideal_g2: monos_g2.into_iter().zip(g2_part.iter().cloned()).collect(),
        ideal_g3: monos_g3.into_iter().zip(g3_part.iter().cloned()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn p1_pair() -> HdrElement {
        HdrElement {
            hodge: HodgeDiamond::from_rows_i64(&[&[1, 0], &[0, 1]]),
            derham: DeRhamVector::from_i64(&[1, 0, 1]),
        }
    }

    #[test]
    fn membership_examples() {
        assert!(p1_pair().is_member());
        assert!(sprime().is_member());
        assert!(tprime().is_member());

        let doubled = HdrElement {
            hodge: HodgeDiamond::from_rows_i64(&[&[1, 0], &[0, 1]]),
            derham: DeRhamVector::from_i64(&[2, 0, 2]),
        };
        assert!(!doubled.is_member());

        assert!(matches!(
            is_member(&HodgeDiamond::zero(1), &DeRhamVector::zero(2)),
            Err(HdrError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn kernel_ideal_small_degrees() {
        let i2 = ideal_kernel_basis(2);
        assert_eq!(i2.len(), 1);
        let m1 = IntMatrix::from_cols(5, &[i2[0].full_coords()]);
        let m2 = IntMatrix::from_cols(5, &[g2_vector().full_coords()]);
        assert!(lattice_equal(&m1, &m2));

        assert_eq!(ideal_kernel_basis(3).len(), 2);
        verify_kernel_ideal(6).unwrap();
    }

    #[test]
    fn alternative_generator_rule_holds() {
        verify_alternative_generators().unwrap();
        // explicit spot checks of the three named cases
        let i3 = ideal_kernel_basis(3);
        let i3_m = IntMatrix::from_cols(
            7,
            &i3.iter().map(|v| v.full_coords()).collect::<Vec<_>>(),
        );
        let block: Vec<Vec<BigInt>> = derham::basis(1)
            .iter()
            .map(|b| g2_vector().mul(b).unwrap().full_coords())
            .collect();
        let with = |w: &DeRhamVector| {
            let mut cols = block.clone();
            cols.push(w.full_coords());
            lattice_equal(&IntMatrix::from_cols(7, &cols), &i3_m)
        };
        assert!(with(&g3_vector()));
        assert!(!with(&g3_vector().scale(&bi(2))));
        let in_g2 = DeRhamVector::from_i64(&[0, 1, 2, 2, 2, 1, 0]);
        assert!(!with(&in_g2));
    }

    #[test]
    fn tau_on_generators() {
        let st = ctx::generators_st();
        let a = GradedPolynomial::var(&st, "A");
        assert_eq!(tau(&a).piece(1), p1_pair());

        let s_var = GradedPolynomial::var(&st, "S");
        assert_eq!(tau(&s_var).piece(2), sprime());
        let t_var = GradedPolynomial::var(&st, "T");
        assert_eq!(tau(&t_var).piece(3), tprime());

        // S^2 lands on (0, g2^2) in degree 4
        let s2 = s_var.pow(2);
        let e = tau(&s2).piece(4);
        assert!(e.hodge.is_zero());
        assert_eq!(e.derham, g2_vector().mul(&g2_vector()).unwrap());
        assert_eq!(e, sprime().product(&sprime()).unwrap());
    }

    #[test]
    fn rank_and_basis_small_degrees() {
        assert_eq!(rank(0), 1);
        assert_eq!(rank(1), 2);
        assert_eq!(rank(2), 6);
        // degree-1 basis spans the expected pairs
        let expected = [
            HdrElement {
                hodge: HodgeDiamond::from_rows_i64(&[&[1, 0], &[0, 1]]),
                derham: DeRhamVector::from_i64(&[1, 0, 1]),
            },
            HdrElement {
                hodge: HodgeDiamond::from_rows_i64(&[&[0, 1], &[1, 0]]),
                derham: DeRhamVector::from_i64(&[0, 2, 0]),
            },
        ];
        let coords = 4 + 3;
        let got = IntMatrix::from_cols(
            coords,
            &basis(1).iter().map(|e| e.combined_coords()).collect::<Vec<_>>(),
        );
        let want = IntMatrix::from_cols(
            coords,
            &expected.iter().map(|e| e.combined_coords()).collect::<Vec<_>>(),
        );
        assert!(lattice_equal(&got, &want));
        for e in basis(3) {
            assert!(e.is_member());
        }
    }

    #[test]
    fn tau_surjectivity_with_negative_control() {
        verify_tau_surjective(4).unwrap();
        let err = verify_tau_surjective_with(3, false).unwrap_err();
        assert_eq!(err.degree, Some(3));
    }

    #[test]
    fn relation_spans_hold() {
        let r1 = relations(1).unwrap();
        assert_eq!(r1.len(), 5); // 2 serre + 1 poincare + components + euler
        verify_combined_relations(3, &[2, 3]).unwrap();
    }

    #[test]
    fn parity_appears_exactly_in_odd_degrees_mod_even() {
        assert!(parity_is_congruence(1, &bi(2)));
        assert!(!parity_is_congruence(2, &bi(2)));
        assert!(parity_is_congruence(3, &bi(2)));
        assert!(!parity_is_congruence(1, &bi(3)));
        // mod 4 only the doubled middle functional survives
        assert!(!parity_is_congruence(1, &bi(4)));
        let c = congruences(1, &bi(2)).unwrap();
        assert!(c.iter().any(|f| f.name == "parity"));
        let c = congruences(2, &bi(2)).unwrap();
        assert!(!c.iter().any(|f| f.name == "parity"));
    }

    #[test]
    fn decompose_examples() {
        // the normalized surface class: ideal coefficient 1 on g2 * 1
        let d = decompose(&sprime()).unwrap();
        assert!(d.presentation.is_zero());
        assert_eq!(d.ideal_g2.len(), 1);
        assert_eq!(d.ideal_g2[0].1, bi(1));
        assert!(d.ideal_g3.is_empty());

        // a degenerate pair has no ideal part
        let e = HdrElement {
            hodge: HodgeDiamond::from_rows_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
            derham: DeRhamVector::from_i64(&[1, 0, 1, 0, 1]),
        };
        let d = decompose(&e).unwrap();
        assert_eq!(d.presentation.to_string(), "A^2 - C");
        assert!(d.ideal_g2.iter().all(|(_, c)| c.is_zero()));

        let bad = HdrElement {
            hodge: HodgeDiamond::zero(2),
            derham: DeRhamVector::from_i64(&[1, 0, 0, 0, 1]),
        };
        assert!(matches!(decompose(&bad), Err(HdrError::NotMember(_))));
    }

    proptest! {
        #[test]
        fn degenerate_pairs_are_members(
            n in 0usize..=4,
            seed in proptest::collection::vec(-9i64..=9, 13),
        ) {
            let coords: Vec<BigInt> = seed.into_iter().take(hodge::rank(n)).map(BigInt::from).collect();
            let a = HodgeDiamond::from_rep_coords(n, &coords);
            let e = HdrElement { hodge: a.clone(), derham: derham::s(&a) };
            prop_assert!(e.is_member());
        }

        #[test]
        fn products_of_members_are_members(
            c1 in proptest::collection::vec(-4i64..=4, 2),
            c2 in proptest::collection::vec(-4i64..=4, 6),
        ) {
            // member of degree 1 built from the basis, one of degree 2
            let e1 = {
                let b = basis(1);
                let mut acc = HdrElement { hodge: HodgeDiamond::zero(1), derham: DeRhamVector::zero(1) };
                for (e, c) in b.iter().zip(&c1) {
                    acc = HdrElement {
                        hodge: acc.hodge.add(&e.hodge.scale(&bi(*c))),
                        derham: acc.derham.add(&e.derham.scale(&bi(*c))),
                    };
                }
                acc
            };
            let e2 = {
                let b = basis(2);
                let mut acc = HdrElement { hodge: HodgeDiamond::zero(2), derham: DeRhamVector::zero(2) };
                for (e, c) in b.iter().zip(&c2) {
                    acc = HdrElement {
                        hodge: acc.hodge.add(&e.hodge.scale(&bi(*c))),
                        derham: acc.derham.add(&e.derham.scale(&bi(*c))),
                    };
                }
                acc
            };
            prop_assert!(e1.is_member());
            prop_assert!(e2.is_member());
            let prod = e1.product(&e2).unwrap();
            prop_assert!(prod.is_member());
        }

        #[test]
        fn decompose_round_trips(
            c in proptest::collection::vec(-6i64..=6, 10),
        ) {
            // random degree-3 member from the basis
            let b = basis(3);
            let mut acc = HdrElement { hodge: HodgeDiamond::zero(3), derham: DeRhamVector::zero(3) };
            for (e, coef) in b.iter().zip(&c) {
                acc = HdrElement {
                    hodge: acc.hodge.add(&e.hodge.scale(&bi(*coef))),
                    derham: acc.derham.add(&e.derham.scale(&bi(*coef))),
                };
            }
            let d = decompose(&acc).unwrap();
            // rebuild: hodge part from the presentation, de Rham part from
            // s(a) plus the ideal coefficients
            let a = hodge::phi(&d.presentation.to_poly()).piece(3);
            prop_assert_eq!(&a, &acc.hodge);
            let mut v = derham::s(&a);
            for (m, coef) in d.ideal_g2.iter() {
                let img = derham::psi(&m.to_poly()).piece(1);
                v = v.add(&g2_vector().mul(&img).unwrap().scale(coef));
            }
            for (m, coef) in d.ideal_g3.iter() {
                let img = derham::psi(&m.to_poly()).piece(0);
                v = v.add(&g3_vector().mul(&img).unwrap().scale(coef));
            }
            prop_assert_eq!(v, acc.derham);
        }
    }
}
