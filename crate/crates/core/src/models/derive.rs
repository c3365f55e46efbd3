//! The branch divisor of the projection to the plane scroll, derived from
//! the fiber equations by eliminating `ξ₂` and taking a discriminant in `ξ₁`.

use std::collections::HashMap;

use super::ModelParams;
use crate::poly::{discriminant, int, MultiPoly, Rational};

const BRANCH_VARS: [&str; 3] = ["eta1", "eta2", "lambda"];
const WORK_VARS: [&str; 5] = ["eta1", "eta2", "lambda", "xi1", "i"];

/// `(η₁η₂ - ĝ(λ))² - λ∏(λ - λᵢ)` in `(η₁, η₂, λ)`.
pub fn branch_polynomial(params: &ModelParams) -> MultiPoly {
    let w = eta_minus_ghat(params, &BRANCH_VARS);
    let q = params
        .q()
        .to_multi("lambda")
        .with_vars(&BRANCH_VARS)
        .expect("lambda only");
    &w.pow(2) - &q
}

fn eta_minus_ghat(params: &ModelParams, vars: &[&str]) -> MultiPoly {
    let e = &MultiPoly::var(vars, "eta1") * &MultiPoly::var(vars, "eta2");
    let g = params
        .g_hat
        .to_multi("lambda")
        .with_vars(vars)
        .expect("lambda only");
    &e - &g
}

/// Reduces powers of the variable `i` by `i² = -1`.
pub fn reduce_i(p: &MultiPoly) -> MultiPoly {
    let Some(idx) = p.vars().iter().position(|v| v == "i") else {
        return p.clone();
    };
    let vars: Vec<&str> = p.vars().iter().map(|s| s.as_str()).collect();
    let mut out = MultiPoly::zero(&vars);
    for (e, c) in p.terms() {
        let mut e = e.clone();
        let k = e[idx];
        e[idx] = k % 2;
        let c = if (k / 2) % 2 == 1 {
            -c.clone()
        } else {
            c.clone()
        };
        out = &out + &MultiPoly::from_terms(&vars, [(e, c)]);
    }
    out
}

/// Outcome of the derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedBranch {
    /// Discriminant in `ξ₁`, as a polynomial in `(η₁, η₂, λ)`.
    pub discriminant: MultiPoly,
    /// `(η₁η₂ - ĝ)² - 4|c|²q`, the expected discriminant for general `c`.
    pub expected_general: MultiPoly,
    /// No `i` survives after reducing `i² = -1`.
    pub imaginary_part_zero: bool,
    /// `discriminant == branch_polynomial(params)`.
    pub matches_branch: bool,
}

/// Substitutes `ξ₂ = c̄⁻¹(η₁η₂ - ĝ(λ) - cξ₁)` into `ξ₁ξ₂ = q(λ)`, multiplies by
/// `c̄`, and takes the discriminant of the resulting quadratic in `ξ₁`.
/// Arithmetic in `ℚ(i)` uses a formal variable `i` reduced by `i² = -1`.
pub fn derive_branch(params: &ModelParams) -> DerivedBranch {
    let v = WORK_VARS;
    let i = MultiPoly::var(&v, "i");
    let (re, im) = (&params.c.0, &params.c.1);
    let c = &MultiPoly::constant(&v, re.clone()) + &i.scale(im);
    let cbar = &MultiPoly::constant(&v, re.clone()) - &i.scale(im);
    let norm: Rational = re * re + im * im;
    let cbar_inv = c.scale(&(int(1) / norm));
    let w = eta_minus_ghat(params, &v);
    let xi1 = MultiPoly::var(&v, "xi1");
    let xi2 = reduce_i(&(&cbar_inv * &(&w - &(&c * &xi1))));
    let q = params
        .q()
        .to_multi("lambda")
        .with_vars(&v)
        .expect("lambda only");
    let nt20 = &(&xi1 * &MultiPoly::var(&v, "xi2")) - &q;
    let substituted = nt20.substitute(&HashMap::from([("xi2", xi2)]));
    let quadratic = reduce_i(&(&cbar * &substituted))
        .with_vars(&v)
        .expect("no xi2 left");
    let disc = reduce_i(&discriminant(&quadratic, "xi1"));
    let imaginary_part_zero = disc.degree_in("i").unwrap_or(0) == 0;
    let real: MultiPoly = {
        let idx = disc.vars().iter().position(|s| s == "i");
        let vars: Vec<&str> = disc.vars().iter().map(|s| s.as_str()).collect();
        let kept = disc
            .terms()
            .filter(|(e, _)| idx.map(|k| e[k] == 0).unwrap_or(true));
        MultiPoly::from_terms(&vars, kept.map(|(e, c)| (e.clone(), c.clone())))
    };
    let discriminant = real.with_vars(&BRANCH_VARS).expect("xi1 eliminated");
    let wb = eta_minus_ghat(params, &BRANCH_VARS);
    let qb = params
        .q()
        .to_multi("lambda")
        .with_vars(&BRANCH_VARS)
        .expect("lambda only");
    let expected_general = &wb.pow(2) - &qb.scale(&(params.c_norm_squared() * int(4)));
    let matches_branch =
        imaginary_part_zero && (&discriminant - &branch_polynomial(params)).is_zero();
    DerivedBranch {
        discriminant,
        expected_general,
        imaginary_part_zero,
        matches_branch,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, UniPoly};

    fn params(g: &[i64]) -> ModelParams {
        ModelParams::new(
            3,
            vec![int(1), int(2)],
            UniPoly::new(g.iter().map(|&x| int(x)).collect()),
        )
        .unwrap()
    }

    #[test]
    fn n3_matches_branch() {
        let p = params(&[3, -1, 2]);
        let d = derive_branch(&p);
        assert!(d.imaginary_part_zero);
        assert!(d.matches_branch);
        assert_eq!(d.discriminant, d.expected_general);
    }

    #[test]
    fn complex_c_still_real() {
        let p = params(&[1, 1]).with_c(rat(3, 10), rat(2, 5)).unwrap();
        let d = derive_branch(&p);
        assert!(d.imaginary_part_zero);
        assert!(d.matches_branch);
    }

    #[test]
    fn unnormalized_c_shows_factor_four() {
        let p = params(&[1]).with_c_unnormalized(int(1), int(0)).unwrap();
        let d = derive_branch(&p);
        assert!(!d.matches_branch);
        assert_eq!(d.discriminant, d.expected_general);
        let diff = &d.discriminant - &branch_polynomial(&p);
        let q = p.q().to_multi("lambda").with_vars(&BRANCH_VARS).unwrap();
        assert_eq!(diff, q.scale(&int(-3)));
    }

    #[test]
    fn zero_ghat() {
        let p = params(&[]);
        let v = BRANCH_VARS;
        let e = &MultiPoly::var(&v, "eta1") * &MultiPoly::var(&v, "eta2");
        let q = p.q().to_multi("lambda").with_vars(&v).unwrap();
        assert_eq!(derive_branch(&p).discriminant, &e.pow(2) - &q);
    }

    #[test]
    fn i_reduction() {
        let i = MultiPoly::x("i");
        assert_eq!(reduce_i(&i.pow(2)), MultiPoly::constant(&["i"], int(-1)));
        assert_eq!(reduce_i(&i.pow(3)), -i.clone());
        assert_eq!(reduce_i(&i.pow(4)), MultiPoly::constant(&["i"], int(1)));
    }
}
