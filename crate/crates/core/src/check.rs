//! Theorem checks over single groupoids and over seeded corpora, with machine-readable
//! reports.

use std::collections::HashSet;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::abelian::{char_group_structure, characters, invariant_factors, FiniteAbelianGroup};
use crate::algebra::{diagonal, quotient_hom};
use crate::functional::{enumerate_characters, gelfand_transform};
use crate::generators::{
    abelian_types, klein_cross, pair_groupoid, random_abelian_bundle, random_groupoid,
    s3_a3_bundle, s3_groupoid, shuffled_abelian_group,
};
use crate::groupoid::FiniteGroupoid;
use crate::ideal::{abelianization_dim, abelianization_hom, commutator_ideal};
use crate::quotient::{abelianize_groupoid, has_abelian_isotropy, normal_subgroupoids};

/// Groupoids up to this size get the exhaustive normal-subgroupoid checks.
pub const NORMAL_ENUMERATION_LIMIT: usize = 24;
/// `|det|` threshold for Gelfand invertibility in complex evaluation.
pub const DET_TOLERANCE: f64 = 1e-6;
/// Axiom-suite corpus: seeds `0..AXIOM_SEEDS` at this arrow budget.
pub const AXIOM_SEEDS: u64 = 200;
pub const AXIOM_BUDGET: usize = 60;
pub const AXIOM_SECONDS: f64 = 10.0;
pub const DUALITY_MAX_ORDER: usize = 64;
pub const GELFAND_BUNDLES: u64 = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub millis: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl CheckReport {
    pub fn new(checks: Vec<CheckResult>) -> Self {
        Self {
            passed: checks.iter().all(CheckResult::passed),
            checks,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Runs `f`, timing it; `Err(witness)` marks a failure.
fn timed(name: impl Into<String>, f: impl FnOnce() -> Result<(), Value>) -> CheckResult {
    let start = Instant::now();
    let outcome = f();
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let (status, witness) = match outcome {
        Ok(()) => (Status::Pass, None),
        Err(w) => (Status::Fail, Some(w)),
    };
    CheckResult {
        name: name.into(),
        status,
        witness,
        millis,
    }
}

fn labels(g: &FiniteGroupoid, set: impl IntoIterator<Item = usize>) -> Vec<String> {
    set.into_iter().map(|a| g.label(a).to_string()).collect()
}

/// Every per-groupoid check. Stops after `validate` if the axioms fail.
pub fn check_groupoid(name: &str, g: &FiniteGroupoid) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let validate = timed(format!("{name}/validate"), || {
        let report = g.validate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(json!(report.violations))
        }
    });
    let valid = validate.passed();
    out.push(validate);
    if !valid {
        return out;
    }

    if g.len() <= NORMAL_ENUMERATION_LIMIT {
        let normals = normal_subgroupoids(g);
        out.push(timed(format!("{name}/exactness"), || {
            for h in &normals {
                let q = crate::quotient::quotient(g, h);
                if !q.quotient.validate().is_ok() || !q.is_homomorphism(g) {
                    return Err(json!({ "H": labels(g, h.carrier().iter()), "reason": "quotient structure" }));
                }
                if q.preimage_of_units() != *h.carrier() {
                    return Err(json!({
                        "H": labels(g, h.carrier().iter()),
                        "preimage": labels(g, q.preimage_of_units().iter()),
                    }));
                }
            }
            Ok(())
        }));
        let diag = diagonal(g);
        let kernels: Vec<_> = normals
            .iter()
            .map(|h| {
                let (hom, _) = quotient_hom(g, h);
                (h, hom)
            })
            .collect();
        out.push(timed(format!("{name}/quotient_star_hom"), || {
            for (h, hom) in &kernels {
                if !hom.is_surjective() {
                    return Err(
                        json!({ "H": labels(g, h.carrier().iter()), "reason": "not surjective" }),
                    );
                }
                if let Some((a, b)) = hom.multiplicativity_witness() {
                    return Err(
                        json!({ "H": labels(g, h.carrier().iter()), "pair": labels(g, [a, b]) }),
                    );
                }
                if let Some(a) = hom.star_witness() {
                    return Err(json!({ "H": labels(g, h.carrier().iter()), "star": g.label(a) }));
                }
            }
            Ok(())
        }));
        let kernel_spaces: Vec<_> = kernels.iter().map(|(h, hom)| (*h, hom.kernel())).collect();
        out.push(timed(format!("{name}/kernel_diagonal"), || {
            for (h, k) in &kernel_spaces {
                let d = k.intersection_dim(&diag);
                if d != 0 {
                    return Err(
                        json!({ "H": labels(g, h.carrier().iter()), "intersection_dim": d }),
                    );
                }
            }
            Ok(())
        }));
        out.push(timed(format!("{name}/injectivity_criterion"), || {
            for (h, k) in &kernel_spaces {
                let is_units = *h.carrier() == g.unit_set();
                if k.is_zero() != is_units {
                    return Err(json!({
                        "H": labels(g, h.carrier().iter()),
                        "kernel_dim": k.dim(),
                        "h_is_units": is_units,
                    }));
                }
            }
            Ok(())
        }));
    }

    let phis = enumerate_characters(g);
    out.push(timed(format!("{name}/character_count"), || {
        let oracle = abelianization_dim(g);
        if phis.len() != oracle {
            return Err(json!({ "functionals": phis.len(), "abelianization_dim": oracle }));
        }
        let distinct: HashSet<_> = phis.iter().map(|p| &p.values).collect();
        if distinct.len() != phis.len() {
            return Err(json!({ "reason": "duplicate functionals" }));
        }
        for phi in &phis {
            let at = g.label(phi.point);
            if let Some((a, b)) = phi.multiplicativity_witness(g) {
                return Err(json!({ "unit": at, "not_multiplicative": labels(g, [a, b]) }));
            }
            if let Some(a) = phi.star_witness(g) {
                return Err(json!({ "unit": at, "not_star": g.label(a) }));
            }
            if phi.diagonal_point(g) != Some(phi.point) {
                return Err(
                    json!({ "unit": at, "reason": "diagonal restriction is not evaluation" }),
                );
            }
        }
        Ok(())
    }));
    out.push(timed(format!("{name}/pi_kernel"), || {
        let pi = abelianization_hom(g);
        let ideal = commutator_ideal(g);
        if !ideal.is_two_sided(g) {
            return Err(json!({ "reason": "commutator ideal not closed" }));
        }
        if !pi.is_star_homomorphism() || !pi.is_surjective() {
            return Err(json!({ "reason": "pi is not a surjective *-homomorphism" }));
        }
        let k = pi.kernel();
        if k != ideal.space {
            return Err(json!({ "ker_pi_dim": k.dim(), "ideal_dim": ideal.dim() }));
        }
        Ok(())
    }));
    out.push(timed(format!("{name}/gelfand_abelianization"), || {
        gelfand_check(abelianize_groupoid(g).groupoid())
    }));
    if g.is_group_bundle() && has_abelian_isotropy(g) {
        out.push(timed(format!("{name}/gelfand"), || gelfand_check(g)));
    }
    out
}

/// Invertibility (`|det| > 1e-6`) and exact pointwise multiplicativity.
pub fn gelfand_check(g: &FiniteGroupoid) -> Result<(), Value> {
    let m = gelfand_transform(g).map_err(|e| json!({ "error": e.to_string() }))?;
    let det = m.determinant().norm();
    if m.size() != g.len() || det <= DET_TOLERANCE {
        return Err(json!({ "size": m.size(), "abs_det": det }));
    }
    if let Some((a, b)) = m.pointwise_witness(g) {
        return Err(json!({ "pair": labels(g, [a, b]) }));
    }
    Ok(())
}

/// Every corpus seed validates, within the time budget.
pub fn axiom_suite() -> CheckResult {
    let start = Instant::now();
    let mut result = timed("corpus/axiom_suite", || {
        for seed in 0..AXIOM_SEEDS {
            let g = random_groupoid(seed, AXIOM_BUDGET);
            let report = g.validate();
            if !report.is_ok() || g.len() > AXIOM_BUDGET {
                return Err(json!({ "seed": seed, "violations": report.violations }));
            }
        }
        Ok(())
    });
    let secs = start.elapsed().as_secs_f64();
    if result.passed() && secs >= AXIOM_SECONDS {
        result.status = Status::Fail;
        result.witness = Some(json!({ "seconds": secs }));
    }
    result
}

/// `|Â| = |A|` and `Â ≅ A` by invariant factors, for every abelian type of order ≤ 64.
pub fn duality_suite() -> CheckResult {
    timed("corpus/duality", || {
        for (order, types) in abelian_types(DUALITY_MAX_ORDER) {
            for (i, factors) in types.iter().enumerate() {
                let a = FiniteAbelianGroup::new(shuffled_abelian_group(
                    factors,
                    (order * 31 + i) as u64,
                ))
                .expect("abelian");
                let d = invariant_factors(&a);
                let expect: Vec<u64> = factors.iter().map(|&f| f as u64).collect();
                if d.factors != expect {
                    return Err(json!({ "factors": factors, "computed": d.factors }));
                }
                let chars = characters(&a);
                if chars.len() != a.order() {
                    return Err(json!({ "factors": factors, "characters": chars.len() }));
                }
                let dual = char_group_structure(&a, &chars)
                    .map_err(|e| json!({ "factors": factors, "error": e.to_string() }))?;
                let dual_factors = invariant_factors(&dual).factors;
                if dual_factors != expect {
                    return Err(json!({ "factors": factors, "dual_factors": dual_factors }));
                }
            }
        }
        Ok(())
    })
}

pub fn gelfand_bundle_suite(seed: u64, count: u64) -> CheckResult {
    timed("corpus/gelfand_bundles", || {
        for s in seed..seed + count {
            let g = random_abelian_bundle(s);
            gelfand_check(&g).map_err(|w| json!({ "seed": s, "witness": w }))?;
        }
        Ok(())
    })
}

pub fn named_regressions() -> CheckResult {
    timed("named/regressions", || {
        let s3 = abelianization_dim(&s3_groupoid());
        let bundle = abelianization_dim(&s3_a3_bundle());
        let k = klein_cross();
        let phis = enumerate_characters(&k);
        let center = k.index_of("(e,c)").expect("center");
        let at_center = phis.iter().all(|p| p.point == center);
        let pair = enumerate_characters(&pair_groupoid(2)).len();
        if s3 == 2 && bundle == 5 && phis.len() == 4 && at_center && pair == 0 {
            Ok(())
        } else {
            Err(json!({
                "s3_dim": s3, "s3_a3_dim": bundle,
                "klein_cross_characters": phis.len(), "klein_cross_at_center": at_center,
                "pair_characters": pair,
            }))
        }
    })
}

/// Corpus instance `seed`: budgets cycle through 24, 42 and 60 arrows.
pub fn corpus_groupoid(seed: u64) -> FiniteGroupoid {
    random_groupoid(seed, 24 + (seed % 3) as usize * 18)
}

/// The full corpus run: per-instance checks on `count` seeds starting at `seed`, plus the
/// global axiom, duality, Gelfand and named-regression checks.
pub fn run_corpus(seed: u64, count: u64, jobs: usize) -> CheckReport {
    let seeds: Vec<u64> = (seed..seed + count).collect();
    let jobs = jobs.max(1);
    let chunk = seeds.len().div_ceil(jobs).max(1);
    let per_instance: Vec<CheckResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .flat_map(|&s| check_groupoid(&format!("seed{s}"), &corpus_groupoid(s)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker"))
            .collect()
    });
    let mut checks = vec![axiom_suite()];
    checks.extend(per_instance);
    checks.push(duality_suite());
    checks.push(gelfand_bundle_suite(seed, GELFAND_BUNDLES));
    checks.push(named_regressions());
    CheckReport::new(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_cross_passes_everything() {
        let checks = check_groupoid("klein", &klein_cross());
        assert!(checks.iter().all(CheckResult::passed), "{checks:#?}");
        assert!(checks.iter().any(|c| c.name == "klein/exactness"));
    }

    #[test]
    fn corrupted_fixture_fails_validate_first() {
        let g = s3_groupoid();
        let mut inv = g.inv_table().to_vec();
        inv.swap(1, 3);
        let comp = (0..36).map(|i| g.compose(i / 6, i % 6)).collect();
        let bad = FiniteGroupoid::from_tables(
            g.labels().to_vec(),
            g.units().to_vec(),
            g.src_table().to_vec(),
            g.rng_table().to_vec(),
            comp,
            inv,
        );
        let checks = check_groupoid("bad", &bad);
        assert_eq!(checks.len(), 1);
        assert_eq!(checks[0].name, "bad/validate");
        assert!(!checks[0].passed());
        assert!(!CheckReport::new(checks).passed);
    }

    #[test]
    fn named_pass() {
        assert!(named_regressions().passed());
    }
}
