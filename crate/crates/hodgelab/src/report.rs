//! One-shot verification driver: runs every structural check at a chosen
//! depth and assembles a deterministic, machine-readable report.
//!
//! Checks are independent and may run on several threads; records are
//! assembled in check-id order regardless of completion order.

use crate::check::VerifyFailure;
use crate::{catalog, derham, hdr, hodge};
use serde::Serialize;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

/// Moduli exercised by the congruence checks.
pub const HODGE_MODULI: [i64; 6] = [2, 3, 4, 5, 6, 9];
pub const HDR_MODULI: [i64; 3] = [2, 3, 4];

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Depth for the Hodge and de Rham checks.
    pub max_degree: usize,
    /// Depth for the pair-ring checks.
    pub max_hdr: usize,
    /// Depth for the kernel-ideal check.
    pub max_kernel: usize,
    /// Keep only checks whose id starts with one of these prefixes.
    pub only: Vec<String>,
    pub jobs: usize,
    /// Corruption hook for negative-control tests; never set in normal use.
    pub tamper: Option<String>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_degree: 8,
            max_hdr: 5,
            max_kernel: 6,
            only: Vec::new(),
            jobs: 1,
            tamper: None,
        }
    }
}

impl VerifyOptions {
    /// Derive all depths from a single cap: the pair-ring checks stop at 5
    /// and the kernel-ideal check at 6, never beyond the cap. Depths above
    /// 12 grow combinatorially; the cap is not enforced but documented.
    pub fn with_max(max: usize) -> Self {
        VerifyOptions {
            max_degree: max,
            max_hdr: max.min(5),
            max_kernel: max.min(6),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub claim: String,
    pub degrees: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<VerifyFailure>,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema: String,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

fn rank_formula_check() -> Result<(), VerifyFailure> {
    for n in 0..=12usize {
        let expected = if n % 2 == 0 {
            ((n + 1) * (n + 1) + 1) / 2
        } else {
            (n + 1) * (n + 1) / 2
        };
        if hodge::rank(n) != expected || hodge::basis(n).len() != expected {
            return Err(VerifyFailure::new(
                "rank-formulas",
                n,
                "Hodge rank or basis count deviates from the closed formula",
                serde_json::Value::Null,
            ));
        }
        if derham::rank(n) != n + 1 || derham::basis(n).len() != n + 1 {
            return Err(VerifyFailure::new(
                "rank-formulas",
                n,
                "de Rham rank or basis count deviates from n+1",
                serde_json::Value::Null,
            ));
        }
    }
    Ok(())
}

fn catalog_check() -> Result<(), VerifyFailure> {
    for entry in catalog::list() {
        if let Some(pair) = entry.pair() {
            if let Some(reason) = pair.membership_violation() {
                return Err(VerifyFailure::new(
                    "catalog.consistency",
                    None,
                    format!("catalog entry {} is not a member: {reason}", entry.name),
                    serde_json::json!(entry.name),
                ));
            }
        }
    }
    for name in ["point", "P1", "E", "P2"] {
        let pair = catalog::get(name).expect("built-in").pair().expect("concrete");
        if pair.derham != derham::s(&pair.hodge) {
            return Err(VerifyFailure::new(
                "catalog.consistency",
                None,
                format!("{name} must be a degenerate pair"),
                serde_json::json!(name),
            ));
        }
    }
    let sq = catalog::product(&["P1", "P1"]).expect("concrete entries");
    if !sq.is_member() {
        return Err(VerifyFailure::new(
            "catalog.consistency",
            None,
            "product of members fell outside the ring",
            serde_json::Value::Null,
        ));
    }
    Ok(())
}

type CheckFn = Box<dyn Fn() -> Result<(), VerifyFailure> + Send + Sync>;

struct CheckSpec {
    id: &'static str,
    claim: &'static str,
    degrees: String,
    run: CheckFn,
}

fn build_checks(opts: &VerifyOptions) -> Vec<CheckSpec> {
    let tamper = |what: &str| opts.tamper.as_deref() == Some(what);
    let max = opts.max_degree;
    let max_hdr = opts.max_hdr;
    let max_kernel = opts.max_kernel;

    let mut checks: Vec<CheckSpec> = Vec::new();

    checks.push(CheckSpec {
        id: "rank-formulas",
        claim: "graded ranks match ((n+1)^2+1)/2 resp. (n+1)^2/2 on the Hodge side and n+1 on the de Rham side",
        degrees: "0..=12".to_string(),
        run: Box::new(rank_formula_check),
    });

    let corrupt_images = tamper("phi-image");
    checks.push(CheckSpec {
        id: "hodge.presentation",
        claim: "degree-n monomial images span the full Serre-dual lattice and the kernel of the monomial map is generated by D^2 - ABD + C(A^2+B^2-4C)",
        degrees: format!("0..={max}"),
        run: Box::new(move || {
            if corrupt_images {
                let mut images = hodge::phi_images().clone();
                images[3] = images[3].scale(&num_bigint::BigInt::from(2));
                hodge::verify_presentation_with_images(&images, max)
            } else {
                hodge::verify_presentation(max)
            }
        }),
    });

    let corrupt_relations = tamper("relations");
    checks.push(CheckSpec {
        id: "hodge.relations",
        claim: "the only universal linear relations and mod-m congruences between the h^{i,j} are spanned by the Serre-duality differences",
        degrees: format!("0..={max}, m in {HODGE_MODULI:?}"),
        run: Box::new(move || {
            hodge::verify_relation_spans_with(max, &HODGE_MODULI, corrupt_relations)
        }),
    });

    checks.push(CheckSpec {
        id: "hodge.birational",
        claim: "the kernel of the outer-edge projection is the ideal (C), the projected image is free of rank 2n on the stated basis, and inner functionals are rejected with a witness",
        degrees: format!("2..={max}"),
        run: Box::new(move || hodge::verify_birational(max)),
    });

    let corrupt_ideal = tamper("derham-kernel");
    checks.push(CheckSpec {
        id: "derham.presentation",
        claim: "the de Rham monomial images span the full degree, the kernel is the ideal (A^2C - D^2, AB - 2D, B^2 - 4C, BD - 2AC), and the collapse map x,y -> t is surjective degreewise",
        degrees: format!("0..={max}"),
        run: Box::new(move || {
            if corrupt_ideal {
                let mut gens = derham::ideal_j_generators();
                gens.remove(3);
                derham::verify_presentation_with_ideal(&gens, max)
            } else {
                derham::verify_presentation(max)
            }
        }),
    });

    checks.push(CheckSpec {
        id: "derham.relations",
        claim: "the only relations between the h^i_dR are the Poincare differences, joined mod even m in odd degree by the middle-parity congruence",
        degrees: format!("0..={max}, m in {HODGE_MODULI:?}"),
        run: Box::new(move || derham::verify_relation_spans(max, &HODGE_MODULI)),
    });

    checks.push(CheckSpec {
        id: "hdr.kernel-ideal",
        claim: "the kernel of (chi, h^0) on the de Rham side is generated by (t+2t^2+t^3)z^2 and (t^2+2t^3+t^4)z^3",
        degrees: format!("2..={max_kernel}"),
        run: Box::new(move || hdr::verify_kernel_ideal(max_kernel)),
    });

    checks.push(CheckSpec {
        id: "hdr.alternative-generators",
        claim: "together with the g2 multiples, a degree-3 kernel element generates exactly when its h^2 is odd",
        degrees: "3".to_string(),
        run: Box::new(hdr::verify_alternative_generators),
    });

    let withhold_tprime = tamper("tau");
    checks.push(CheckSpec {
        id: "hdr.tau-surjectivity",
        claim: "the monomial image pairs together with the (0,g2) and (0,g3) multiples span the whole constrained lattice",
        degrees: format!("0..={max_hdr}"),
        run: Box::new(move || hdr::verify_tau_surjective_with(max_hdr, !withhold_tprime)),
    });

    checks.push(CheckSpec {
        id: "hdr.relations",
        claim: "the combined relations are spanned by Serre, Poincare, components, and Euler; mod 2 the middle-parity congruence appears exactly in odd degree",
        degrees: format!("0..={max_hdr}, m in {HDR_MODULI:?}"),
        run: Box::new(move || hdr::verify_combined_relations(max_hdr, &HDR_MODULI)),
    });

    checks.push(CheckSpec {
        id: "catalog.consistency",
        claim: "every concrete catalog pair satisfies both membership constraints and the honest varieties are degenerate pairs",
        degrees: "-".to_string(),
        run: Box::new(catalog_check),
    });

    if !opts.only.is_empty() {
        checks.retain(|c| opts.only.iter().any(|p| c.id.starts_with(p.as_str())));
    }
    checks
}

/// Run the configured checks and assemble the report. Output ordering is
/// fixed by check id order, not completion order.
pub fn run_verification(opts: &VerifyOptions) -> VerificationReport {
    let checks = build_checks(opts);
    let results: Mutex<Vec<Option<CheckRecord>>> = Mutex::new(vec![None; checks.len()]);
    let next = AtomicUsize::new(0);
    let workers = opts.jobs.max(1).min(checks.len().max(1));

    let run_one = |idx: usize| {
        let spec = &checks[idx];
        let start = Instant::now();
        let outcome = (spec.run)();
        let millis = start.elapsed().as_millis();
        let record = match outcome {
            Ok(()) => CheckRecord {
                id: spec.id.to_string(),
                claim: spec.claim.to_string(),
                degrees: spec.degrees.clone(),
                status: "pass".to_string(),
                failure: None,
                millis,
            },
            Err(f) => CheckRecord {
                id: spec.id.to_string(),
                claim: spec.claim.to_string(),
                degrees: spec.degrees.clone(),
                status: "fail".to_string(),
                failure: Some(f),
                millis,
            },
        };
        results.lock().unwrap()[idx] = Some(record);
    };

    if workers <= 1 {
        for idx in 0..checks.len() {
            run_one(idx);
        }
    } else {
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let idx = next.fetch_add(1, Ordering::Relaxed);
                    if idx >= checks.len() {
                        break;
                    }
                    run_one(idx);
                });
            }
        });
    }

    let checks: Vec<CheckRecord> = results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every check ran"))
        .collect();
    let passed = checks.iter().all(|c| c.status == "pass");
    VerificationReport {
        schema: crate::json::SCHEMA.to_string(),
        passed,
        checks,
    }
}
