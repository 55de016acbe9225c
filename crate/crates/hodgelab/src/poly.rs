//! Sparse multivariate polynomials over arbitrary-precision integers,
//! graded by a weight attached to each variable.
//!
//! One carrier type serves every ring in the crate: `Z[x,y,z]` (x, y of
//! weight 0, z of weight 1), `Z[t,z]`, `Z[A,B,C,D]` (A, B of weight 1,
//! C, D of weight 2) and its extension `Z[A,B,C,D,S,T]`. Values are
//! immutable after construction and all operations are pure.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("ring context mismatch: {0} vs {1}")]
    ContextMismatch(String, String),
    #[error("no image supplied for variable {0}")]
    MissingImage(String),
    #[error("malformed term list: {0}")]
    BadTermList(String),
}

/// A named variable together with its contribution to the grading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSpec {
    pub name: String,
    pub weight: u32,
}

/// Ordered variable list shared by all polynomials of one ring.
#[derive(Debug, PartialEq, Eq)]
pub struct RingContext {
    vars: Vec<VariableSpec>,
}

pub type Ctx = Arc<RingContext>;

impl RingContext {
    /// Panics if a variable name repeats.
    pub fn new(vars: &[(&str, u32)]) -> Ctx {
        let specs: Vec<VariableSpec> = vars
            .iter()
            .map(|(n, w)| VariableSpec {
                name: (*n).to_string(),
                weight: *w,
            })
            .collect();
        for (i, v) in specs.iter().enumerate() {
            assert!(
                specs[..i].iter().all(|u| u.name != v.name),
                "duplicate variable name {}",
                v.name
            );
        }
        Arc::new(RingContext { vars: specs })
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[VariableSpec] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn weighted_degree(&self, exp: &[u32]) -> u32 {
        exp.iter()
            .zip(&self.vars)
            .map(|(e, v)| e * v.weight)
            .sum()
    }

    pub fn describe(&self) -> String {
        let names: Vec<&str> = self.vars.iter().map(|v| v.name.as_str()).collect();
        format!("Z[{}]", names.join(","))
    }
}

/// Built-in ring contexts, each created once and shared.
pub mod ctx {
    use super::{Ctx, RingContext};
    use std::sync::OnceLock;

    fn cached(cell: &OnceLock<Ctx>, vars: &[(&str, u32)]) -> Ctx {
        cell.get_or_init(|| RingContext::new(vars)).clone()
    }

    /// `Z[x,y,z]`: Hodge polynomials; x, y carry the bidegree, z the dimension.
    pub fn hodge() -> Ctx {
        static C: OnceLock<Ctx> = OnceLock::new();
        cached(&C, &[("x", 0), ("y", 0), ("z", 1)])
    }

    /// `Z[t,z]`: de Rham polynomials.
    pub fn de_rham() -> Ctx {
        static C: OnceLock<Ctx> = OnceLock::new();
        cached(&C, &[("t", 0), ("z", 1)])
    }

    /// `Z[A,B,C,D]`: the four ring generators, A and B of degree 1, C and D of degree 2.
    pub fn generators() -> Ctx {
        static C: OnceLock<Ctx> = OnceLock::new();
        cached(&C, &[("A", 1), ("B", 1), ("C", 2), ("D", 2)])
    }

    /// `Z[A,B,C,D,S,T]`: generators extended by a surface class S and a threefold class T.
    pub fn generators_st() -> Ctx {
        static C: OnceLock<Ctx> = OnceLock::new();
        cached(&C, &[("A", 1), ("B", 1), ("C", 2), ("D", 2), ("S", 2), ("T", 3)])
    }

    /// `Z[z]`: target of the Euler-characteristic and constant-coefficient maps.
    pub fn dim_only() -> Ctx {
        static C: OnceLock<Ctx> = OnceLock::new();
        cached(&C, &[("z", 1)])
    }
}

/// Sparse polynomial: exponent vector -> nonzero coefficient.
///
/// Terms iterate in lexicographic exponent order, so printing and
/// serialization are reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPolynomial {
    ctx: Ctx,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

pub(crate) fn int_pow(base: &BigInt, exp: u32) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

impl GradedPolynomial {
    pub fn zero(ctx: &Ctx) -> Self {
        GradedPolynomial {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Ctx, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(ctx);
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(vec![0; ctx.arity()], c);
        }
        p
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::constant(ctx, 1)
    }

    /// Panics if the name is not a variable of the context.
    pub fn var(ctx: &Ctx, name: &str) -> Self {
        let i = ctx
            .index_of(name)
            .unwrap_or_else(|| panic!("unknown variable {name} in {}", ctx.describe()));
        let mut exp = vec![0; ctx.arity()];
        exp[i] = 1;
        Self::monomial(ctx, exp, 1)
    }

    pub fn monomial(ctx: &Ctx, exp: Vec<u32>, coef: impl Into<BigInt>) -> Self {
        assert_eq!(exp.len(), ctx.arity(), "exponent arity mismatch");
        let mut p = Self::zero(ctx);
        let coef = coef.into();
        if !coef.is_zero() {
            p.terms.insert(exp, coef);
        }
        p
    }

    pub fn from_terms<I>(ctx: &Ctx, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = Self::zero(ctx);
        for (exp, c) in terms {
            p.add_term(exp, c);
        }
        p
    }

    fn add_term(&mut self, exp: Vec<u32>, c: BigInt) {
        assert_eq!(exp.len(), self.ctx.arity(), "exponent arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exp: &[u32]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_else(BigInt::zero)
    }

    fn check_ctx(&self, other: &Self) -> Result<(), PolyError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch(
                self.ctx.describe(),
                other.ctx.describe(),
            ))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ctx(other)?;
        let mut out = Self::zero(&self.ctx);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exp: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exp, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= k;
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..exp {
            acc = acc.try_mul(self).expect("same context");
        }
        acc
    }

    /// Weighted degree of each term; the set of degrees with a nonzero piece.
    pub fn degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self
            .terms
            .keys()
            .map(|e| self.ctx.weighted_degree(e))
            .collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Sum of the terms of weighted degree exactly `n`.
    pub fn graded_piece(&self, n: u32) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (e, c) in &self.terms {
            if self.ctx.weighted_degree(e) == n {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// True when every term has weighted degree `n`.
    pub fn is_homogeneous_of(&self, n: u32) -> bool {
        self.terms
            .keys()
            .all(|e| self.ctx.weighted_degree(e) == n)
    }

    /// Ring-homomorphism evaluation: replace each variable by its image.
    ///
    /// Every variable that actually occurs must have an image, and all
    /// images must live in `target`.
    pub fn substitute(
        &self,
        target: &Ctx,
        images: &[(&str, GradedPolynomial)],
    ) -> Result<GradedPolynomial, PolyError> {
        for (_, img) in images {
            if &img.ctx != target {
                return Err(PolyError::ContextMismatch(
                    img.ctx.describe(),
                    target.describe(),
                ));
            }
        }
        let arity = self.ctx.arity();
        let mut image_of: Vec<Option<&GradedPolynomial>> = vec![None; arity];
        for (name, img) in images {
            if let Some(i) = self.ctx.index_of(name) {
                image_of[i] = Some(img);
            }
        }
        // powers[v][e] built lazily up to the largest exponent used
        let mut powers: Vec<Vec<GradedPolynomial>> = vec![Vec::new(); arity];
        let mut out = GradedPolynomial::zero(target);
        for (exp, coef) in &self.terms {
            let mut term = GradedPolynomial::constant(target, coef.clone());
            for (v, &e) in exp.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let img = image_of[v].ok_or_else(|| {
                    PolyError::MissingImage(self.ctx.vars[v].name.clone())
                })?;
                let pw = &mut powers[v];
                if pw.is_empty() {
                    pw.push(GradedPolynomial::one(target));
                }
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap().try_mul(img)?;
                    pw.push(next);
                }
                term = term.try_mul(&pw[e as usize])?;
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Evaluate at an integer point. Independent of the polynomial
    /// arithmetic above except for term storage, so tests use it as a
    /// cross-check on products and substitutions.
    pub fn evaluate(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.ctx.arity());
        let mut acc = BigInt::zero();
        for (exp, coef) in &self.terms {
            let mut t = coef.clone();
            for (v, &e) in exp.iter().enumerate() {
                t *= int_pow(&point[v], e);
            }
            acc += t;
        }
        acc
    }

    /// Round-trippable term-list form: `[{"exp":[..],"coef":"<decimal>"}, ..]`.
    pub fn to_term_list(&self) -> serde_json::Value {
        let items: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                serde_json::json!({
                    "exp": e,
                    "coef": c.to_string(),
                })
            })
            .collect();
        serde_json::Value::Array(items)
    }

    pub fn from_term_list(ctx: &Ctx, v: &serde_json::Value) -> Result<Self, PolyError> {
        let arr = v
            .as_array()
            .ok_or_else(|| PolyError::BadTermList("expected array".into()))?;
        let mut p = Self::zero(ctx);
        for item in arr {
            let exp = item
                .get("exp")
                .and_then(|e| e.as_array())
                .ok_or_else(|| PolyError::BadTermList("missing exp".into()))?;
            let exp: Vec<u32> = exp
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|u| u as u32)
                        .ok_or_else(|| PolyError::BadTermList("bad exponent".into()))
                })
                .collect::<Result<_, _>>()?;
            if exp.len() != ctx.arity() {
                return Err(PolyError::BadTermList("exponent arity mismatch".into()));
            }
            let coef = item
                .get("coef")
                .ok_or_else(|| PolyError::BadTermList("missing coef".into()))?;
            let coef: BigInt = match coef {
                serde_json::Value::String(s) => s
                    .parse()
                    .map_err(|_| PolyError::BadTermList(format!("bad coefficient {s}")))?,
                serde_json::Value::Number(n) => {
                    if let Some(i) = n.as_i64() {
                        BigInt::from(i)
                    } else {
                        return Err(PolyError::BadTermList(format!("bad coefficient {n}")));
                    }
                }
                other => return Err(PolyError::BadTermList(format!("bad coefficient {other}"))),
            };
            p.add_term(exp, coef);
        }
        Ok(p)
    }
}

impl std::ops::Add for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn add(self, rhs: Self) -> GradedPolynomial {
        self.try_add(rhs).expect("context mismatch in +")
    }
}

impl std::ops::Sub for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn sub(self, rhs: Self) -> GradedPolynomial {
        self.try_sub(rhs).expect("context mismatch in -")
    }
}

impl std::ops::Mul for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn mul(self, rhs: Self) -> GradedPolynomial {
        self.try_mul(rhs).expect("context mismatch in *")
    }
}

impl std::ops::Neg for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        GradedPolynomial::neg(self)
    }
}

// Rendering. Terms are split into a weight-0 part (printed ascending, as in
// "1+2xy+x^2y^2") and a positive-weight part; groups sharing the latter are
// printed together, ordered by weighted degree then descending exponents.
// Purely cosmetic; the term map is the canonical form.

fn render_monomial(ctx: &RingContext, exp: &[u32], keep: impl Fn(usize) -> bool) -> String {
    let mut s = String::new();
    for (v, &e) in exp.iter().enumerate() {
        if e == 0 || !keep(v) {
            continue;
        }
        s.push_str(&ctx.vars()[v].name);
        if e > 1 {
            s.push('^');
            s.push_str(&e.to_string());
        }
    }
    s
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ctx = &self.ctx;
        let weight0 = |v: usize| ctx.vars()[v].weight == 0;
        // outer exponent -> inner terms
        let mut groups: BTreeMap<Vec<u32>, Vec<(Vec<u32>, BigInt)>> = BTreeMap::new();
        for (exp, coef) in &self.terms {
            let outer: Vec<u32> = exp
                .iter()
                .enumerate()
                .map(|(v, &e)| if weight0(v) { 0 } else { e })
                .collect();
            groups.entry(outer).or_default().push((exp.clone(), coef.clone()));
        }
        let mut ordered: Vec<(Vec<u32>, Vec<(Vec<u32>, BigInt)>)> = groups.into_iter().collect();
        ordered.sort_by(|(a, _), (b, _)| {
            let da = ctx.weighted_degree(a);
            let db = ctx.weighted_degree(b);
            da.cmp(&db).then(b.cmp(a))
        });

        let mut first = true;
        for (outer, inner) in ordered {
            let outer_str = render_monomial(ctx, &outer, |v| !weight0(v));
            let (negative, body) = if inner.len() == 1 {
                let (exp, coef) = &inner[0];
                let inner_str = render_monomial(ctx, exp, weight0);
                let mono = format!("{inner_str}{outer_str}");
                let mag = coef.abs();
                let body = if mono.is_empty() {
                    mag.to_string()
                } else if mag.is_one() {
                    mono
                } else {
                    format!("{mag}{mono}")
                };
                (coef.is_negative(), body)
            } else {
                let mut s = String::new();
                for (k, (exp, coef)) in inner.iter().enumerate() {
                    let inner_str = render_monomial(ctx, exp, weight0);
                    let mag = coef.abs();
                    let piece = if inner_str.is_empty() {
                        mag.to_string()
                    } else if mag.is_one() {
                        inner_str
                    } else {
                        format!("{mag}{inner_str}")
                    };
                    if k == 0 {
                        if coef.is_negative() {
                            s.push('-');
                        }
                    } else {
                        s.push(if coef.is_negative() { '-' } else { '+' });
                    }
                    s.push_str(&piece);
                }
                if outer_str.is_empty() {
                    (false, s)
                } else {
                    (false, format!("({s}){outer_str}"))
                }
            };
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

/// Parse builders used across the crate: `p("x")`, powers, etc. are too
/// verbose at call sites, so modules assemble polynomials from terms.
#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    /// xyz-context polynomial from (i, j, k, coef) terms.
    fn xyz(terms: &[(u32, u32, u32, i64)]) -> GradedPolynomial {
        GradedPolynomial::from_terms(
            &ctx::hodge(),
            terms.iter().map(|&(i, j, k, c)| (vec![i, j, k], bi(c))),
        )
    }

    fn abcd(terms: &[(u32, u32, u32, u32, i64)]) -> GradedPolynomial {
        GradedPolynomial::from_terms(
            &ctx::generators(),
            terms
                .iter()
                .map(|&(a, b, c, d, k)| (vec![a, b, c, d], bi(k))),
        )
    }

    #[test]
    fn add_matches_hand_examples() {
        let p = xyz(&[(0, 0, 1, 1), (1, 1, 1, 1)]); // (1+xy)z
        let q = xyz(&[(1, 0, 1, 1), (0, 1, 1, 1)]); // (x+y)z
        let sum = xyz(&[(0, 0, 1, 1), (1, 0, 1, 1), (0, 1, 1, 1), (1, 1, 1, 1)]);
        assert_eq!(p.try_add(&q).unwrap(), sum);

        let zero = GradedPolynomial::zero(&ctx::hodge());
        assert_eq!(p.try_add(&zero).unwrap(), p);

        let x = xyz(&[(1, 0, 1, 1)]);
        assert!(x.try_add(&x.neg()).unwrap().is_zero());
    }

    #[test]
    fn context_mismatch_is_rejected() {
        let p = GradedPolynomial::one(&ctx::hodge());
        let q = GradedPolynomial::one(&ctx::de_rham());
        assert!(matches!(
            p.try_add(&q),
            Err(PolyError::ContextMismatch(_, _))
        ));
        assert!(matches!(
            p.try_mul(&q),
            Err(PolyError::ContextMismatch(_, _))
        ));
    }

    #[test]
    fn mul_binomial_square() {
        let p = xyz(&[(0, 0, 1, 1), (1, 1, 1, 1)]); // (1+xy)z
        let sq = xyz(&[(0, 0, 2, 1), (1, 1, 2, 2), (2, 2, 2, 1)]);
        assert_eq!(p.try_mul(&p).unwrap(), sq);

        let one = GradedPolynomial::one(&ctx::hodge());
        assert_eq!(p.try_mul(&one).unwrap(), p);
    }

    /// Independent dense-array expansion used as the multiplication oracle.
    fn dense_mul_xyz(
        p: &GradedPolynomial,
        q: &GradedPolynomial,
    ) -> BTreeMap<(u32, u32, u32), BigInt> {
        let mut out: BTreeMap<(u32, u32, u32), BigInt> = BTreeMap::new();
        for (e1, c1) in p.terms() {
            for (e2, c2) in q.terms() {
                let key = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]);
                let entry = out.entry(key).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    #[test]
    fn mul_full_square_against_dense_oracle() {
        // (1+x+y+xy)z squared
        let p = xyz(&[(0, 0, 1, 1), (1, 0, 1, 1), (0, 1, 1, 1), (1, 1, 1, 1)]);
        let got = p.try_mul(&p).unwrap();
        let oracle = dense_mul_xyz(&p, &p);
        let got_map: BTreeMap<(u32, u32, u32), BigInt> = got
            .terms()
            .map(|(e, c)| ((e[0], e[1], e[2]), c.clone()))
            .collect();
        assert_eq!(got_map, oracle);
        // frozen expansion: 1+2x+2y+x^2+4xy+y^2+2x^2y+2xy^2+x^2y^2, all times z^2
        let expected = xyz(&[
            (0, 0, 2, 1),
            (1, 0, 2, 2),
            (0, 1, 2, 2),
            (2, 0, 2, 1),
            (1, 1, 2, 4),
            (0, 2, 2, 1),
            (2, 1, 2, 2),
            (1, 2, 2, 2),
            (2, 2, 2, 1),
        ]);
        assert_eq!(got, expected);
    }

    #[test]
    fn graded_piece_selects_by_weight() {
        let p = xyz(&[(0, 0, 1, 1), (1, 1, 1, 1), (0, 0, 2, 3)]);
        assert_eq!(p.graded_piece(1), xyz(&[(0, 0, 1, 1), (1, 1, 1, 1)]));
        assert_eq!(p.graded_piece(2), xyz(&[(0, 0, 2, 3)]));
        assert!(GradedPolynomial::zero(&ctx::hodge())
            .graded_piece(5)
            .is_zero());
        let q = xyz(&[(0, 0, 1, 1), (1, 1, 1, 1)]);
        assert!(q.graded_piece(2).is_zero());
    }

    #[test]
    fn substitute_generator_images() {
        let target = ctx::hodge();
        let a_img = xyz(&[(0, 0, 1, 1), (1, 1, 1, 1)]); // (1+xy)z
        let a = GradedPolynomial::var(&ctx::generators(), "A");
        let a2 = a.pow(2);
        let img = a2.substitute(&target, &[("A", a_img.clone())]).unwrap();
        assert_eq!(img, a_img.pow(2));

        // B^2 - 4C maps to zero on the de Rham side
        let tz = ctx::de_rham();
        let b_img = GradedPolynomial::from_terms(&tz, [(vec![1, 1], bi(2))]); // 2tz
        let c_img = GradedPolynomial::from_terms(&tz, [(vec![2, 2], bi(1))]); // t^2 z^2
        let expr = abcd(&[(0, 2, 0, 0, 1), (0, 0, 1, 0, -4)]);
        let img = expr
            .substitute(&tz, &[("B", b_img), ("C", c_img)])
            .unwrap();
        assert!(img.is_zero());

        let seven = GradedPolynomial::constant(&ctx::generators(), 7);
        let img = seven.substitute(&target, &[]).unwrap();
        assert_eq!(img, GradedPolynomial::constant(&target, 7));
    }

    #[test]
    fn substitute_missing_image_errors() {
        let a = GradedPolynomial::var(&ctx::generators(), "A");
        let err = a.substitute(&ctx::hodge(), &[]).unwrap_err();
        assert_eq!(err, PolyError::MissingImage("A".into()));
    }

    #[test]
    fn display_matches_expected_forms() {
        let p = xyz(&[(0, 0, 2, 1), (1, 1, 2, 2), (2, 2, 2, 1)]);
        assert_eq!(p.to_string(), "(1+2xy+x^2y^2)z^2");
        let c = xyz(&[(1, 1, 2, 1)]);
        assert_eq!(c.to_string(), "xyz^2");
        assert_eq!(GradedPolynomial::zero(&ctx::hodge()).to_string(), "0");
        let q = abcd(&[(2, 0, 0, 0, 1), (0, 0, 1, 0, -1)]);
        assert_eq!(q.to_string(), "A^2 - C");
        let neg = xyz(&[(1, 0, 1, -2)]);
        assert_eq!(neg.to_string(), "-2xz");
        let mixed = xyz(&[(0, 0, 1, 1), (1, 1, 1, 1), (1, 0, 2, 1)]);
        assert_eq!(mixed.to_string(), "(1+xy)z + xz^2");
    }

    #[test]
    fn term_list_round_trip() {
        let p = xyz(&[(0, 0, 1, 1), (1, 1, 1, -12345)]);
        let j = p.to_term_list();
        let back = GradedPolynomial::from_term_list(&ctx::hodge(), &j).unwrap();
        assert_eq!(p, back);
    }

    fn arb_poly(ctx: Ctx, max_exp: u32) -> impl Strategy<Value = GradedPolynomial> {
        let arity = ctx.arity();
        proptest::collection::vec(
            (
                proptest::collection::vec(0..=max_exp, arity),
                -9i64..=9,
            ),
            0..5,
        )
        .prop_map(move |terms| {
            GradedPolynomial::from_terms(
                &ctx,
                terms.into_iter().map(|(e, c)| (e, BigInt::from(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_laws(
            p in arb_poly(ctx::generators(), 3),
            q in arb_poly(ctx::generators(), 3),
            r in arb_poly(ctx::generators(), 3),
        ) {
            prop_assert_eq!(&p + &q, &q + &p);
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        }

        #[test]
        fn substitution_is_a_ring_map(
            p in arb_poly(ctx::generators(), 2),
            q in arb_poly(ctx::generators(), 2),
        ) {
            let target = ctx::hodge();
            let images = [
                ("A", GradedPolynomial::from_terms(&target, [(vec![0,0,1], BigInt::from(1)), (vec![1,1,1], BigInt::from(1))])),
                ("B", GradedPolynomial::from_terms(&target, [(vec![1,0,1], BigInt::from(1)), (vec![0,1,1], BigInt::from(1))])),
                ("C", GradedPolynomial::from_terms(&target, [(vec![1,1,2], BigInt::from(1))])),
                ("D", GradedPolynomial::from_terms(&target, [(vec![1,0,2], BigInt::from(1)), (vec![1,2,2], BigInt::from(1))])),
            ];
            let s = |f: &GradedPolynomial| f.substitute(&target, &images).unwrap();
            prop_assert_eq!(s(&(&p * &q)), &s(&p) * &s(&q));
            prop_assert_eq!(s(&(&p + &q)), &s(&p) + &s(&q));
        }

        #[test]
        fn graded_pieces_sum_back(p in arb_poly(ctx::generators(), 3)) {
            let mut acc = GradedPolynomial::zero(p.ctx());
            for n in p.degrees() {
                acc = acc.try_add(&p.graded_piece(n)).unwrap();
            }
            prop_assert_eq!(acc, p);
        }

        #[test]
        fn grading_respects_products(
            p in arb_poly(ctx::generators(), 2),
            q in arb_poly(ctx::generators(), 2),
        ) {
            let prod = &p * &q;
            for n in prod.degrees() {
                let mut conv = GradedPolynomial::zero(p.ctx());
                for a in 0..=n {
                    conv = conv
                        .try_add(&(&p.graded_piece(a) * &q.graded_piece(n - a)))
                        .unwrap();
                }
                prop_assert_eq!(prod.graded_piece(n), conv);
            }
        }

        #[test]
        fn product_agrees_with_integer_evaluation(
            p in arb_poly(ctx::hodge(), 3),
            q in arb_poly(ctx::hodge(), 3),
            x in -3i64..=3, y in -3i64..=3, z in -3i64..=3,
        ) {
            let point = [BigInt::from(x), BigInt::from(y), BigInt::from(z)];
            let lhs = (&p * &q).evaluate(&point);
            let rhs = p.evaluate(&point) * q.evaluate(&point);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
