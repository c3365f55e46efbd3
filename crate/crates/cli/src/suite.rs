//! The aggregated verification suite behind `verify`.

use std::collections::HashMap;

use moishezon_core::branch::{
    hyperelliptic_genus, infinity_chart, is_admissible, moduli_dimension, nonreduced_fibers,
    ruled_base_genus,
};
use moishezon_core::lattice::{
    build_minitwistor_T, build_surface_S, validate_T, validate_configuration,
};
use moishezon_core::linsys::{
    ledger_report, movable_part_numbers, verify_Y_classes, verify_nontrivial_member,
};
use moishezon_core::models::{
    branch_polynomial, conic_bundle_form, degree_by_slicing, dehomogenization_report,
    derive_branch, verify_mt_identity,
};
use moishezon_core::{ModelParams, Rational, UniPoly, VerificationReport};

/// Seed of the parameters used when `verify` gets no params file.
pub const DEFAULT_SEED: u64 = 0;

pub fn lattice_suite(n: usize) -> VerificationReport {
    let mut r = VerificationReport::new();
    match build_surface_S(n) {
        Ok(s) => r.extend(validate_configuration(&s).prefixed("lattice.")),
        Err(e) => {
            r.check("lattice.S.build", "ok", e);
        }
    }
    match build_minitwistor_T(n) {
        Ok(t) => r.extend(validate_T(&t).prefixed("lattice.")),
        Err(e) => {
            r.check("lattice.T.build", "ok", e);
        }
    }
    r
}

pub fn linsys_suite(n: usize) -> VerificationReport {
    let mut r = VerificationReport::new();
    r.extend(verify_nontrivial_member(n));
    r.extend(verify_Y_classes(n));
    for (m, want) in [(n - 2, 2), (n - 1, 4)] {
        let computed = movable_part_numbers(n, m)
            .map(|(sq, _)| sq.to_string())
            .unwrap_or_else(|e| e.to_string());
        r.check(format!("linsys.movable(m={m}).square"), want, computed);
        let nef = movable_part_numbers(n, m)
            .map(|(_, nef)| nef)
            .unwrap_or(false);
        r.check(format!("linsys.movable(m={m}).nef_on_curves"), true, nef);
    }
    r.extend(ledger_report(n).prefixed("linsys."));
    r
}

pub fn models_suite(p: &ModelParams, deep: bool) -> VerificationReport {
    let n = p.n;
    let mut r = VerificationReport::new();
    r.check("models.mt_identity", true, verify_mt_identity(p));
    let d = derive_branch(p);
    r.check(
        "models.derive.imaginary_part_zero",
        true,
        d.imaginary_part_zero,
    );
    r.check("models.derive=branch_polynomial", true, d.matches_branch);
    if p.real_c().is_ok() {
        r.extend(dehomogenization_report(p));
    }
    match conic_bundle_form(n) {
        Ok(c) => r.extend(c.report),
        Err(e) => {
            r.check("models.conic.build", "ok", e);
        }
    }
    if deep && n <= 4 {
        let computed = degree_by_slicing(p, 0)
            .map(|d| d.to_string())
            .unwrap_or_else(|e| e.to_string());
        r.check("models.degree_by_slicing", 2 * (n - 1), computed);
    }
    r
}

/// Genus of the `η₁ = 0` slice of the branch polynomial, which is `ĝ² - q`
/// read off the derived equation rather than assembled from the parameters.
fn genus_from_branch_slice(p: &ModelParams) -> String {
    let slice = branch_polynomial(p)
        .partial_eval(&HashMap::from([("eta1", Rational::from_integer(0.into()))]));
    match UniPoly::from_multi(&slice, "lambda")
        .map_err(|e| e.to_string())
        .and_then(|u| hyperelliptic_genus(&u).map_err(|e| e.to_string()))
    {
        Ok(g) => g.genus.to_string(),
        Err(e) => e,
    }
}

/// `generic` adds the claim that the genus is `n - 2`, which holds only for
/// generic `ĝ`.
pub fn branch_suite(p: &ModelParams, generic: bool) -> VerificationReport {
    let n = p.n;
    let mut r = VerificationReport::new();
    let computed = is_admissible(p)
        .map(|a| a.genus().to_string())
        .unwrap_or_else(|e| e.to_string());
    r.check(
        "branch.genus(two routes)",
        genus_from_branch_slice(p),
        &computed,
    );
    if generic {
        r.check("branch.genus=n-2", n - 2, &computed);
    }
    r.check("branch.ruled_base_genus", (n - 1) / 2, ruled_base_genus(p));
    r.extend(nonreduced_fibers(p).report);
    let chart = infinity_chart(p);
    r.check("branch.infinity.exponent", 3 * n - 8, chart.exponent);
    r.check("branch.infinity.q_tilde(0)", 1, &chart.q_tilde_at_zero);
    r.check(
        "branch.infinity.closed_form",
        true,
        chart.matches_closed_form,
    );
    r.check("branch.moduli.dimension", n, moduli_dimension(n).dimension);
    r
}

/// All suites. Without a params file the seeded defaults are used and the
/// generic genus is asserted.
pub fn full_report(
    n: usize,
    params: Option<&ModelParams>,
    deep: bool,
) -> Result<VerificationReport, String> {
    let default;
    let (p, generic) = match params {
        Some(p) => (p, false),
        None => {
            default = ModelParams::seeded(n, DEFAULT_SEED).map_err(|e| e.to_string())?;
            (&default, true)
        }
    };
    let mut r = lattice_suite(n);
    r.extend(linsys_suite(n));
    r.extend(models_suite(p, deep));
    r.extend(branch_suite(p, generic));
    Ok(r)
}
