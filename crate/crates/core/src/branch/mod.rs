//! The branch divisor `(η₁η₂ - ĝ(λ))² = λ∏(λ - λᵢ)` of the double covering:
//! genus of the curve `ĝ² = q` that decides rationality, the genus of the
//! ruled surface it is birational to, its non-reduced fibers, the chart at
//! `λ = ∞`, the moduli count, and a search for rational `ĝ` of genus 0.

mod search;

use std::collections::HashMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::models::ModelParams;
use crate::poly::{
    rational_sqrt, squarefree_decomposition, MultiPoly, PolyError, Rational, SquareFree, UniPoly,
};
use crate::report::VerificationReport;

pub use crate::models::branch_polynomial;
pub use search::{
    find_admissible_g, find_admissible_g_with, AdmissibleCandidate, SearchError, SearchMethod,
    SearchOptions,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BranchError {
    #[error("the zero polynomial defines no double covering")]
    ZeroPolynomial,
}

impl From<PolyError> for BranchError {
    fn from(_: PolyError) -> Self {
        BranchError::ZeroPolynomial
    }
}

/// Genus data of the double covering of the line branched along the odd
/// part of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusData {
    pub squarefree: SquareFree,
    pub odd_part_degree: usize,
    /// Finite branch points plus `∞` when the odd part has odd degree.
    pub branch_points: usize,
    pub genus: usize,
    /// No branch points: the covering splits into two rational sheets.
    pub split: bool,
}

/// Genus of `w² = p(λ)`: `B = deg(odd part) + (deg mod 2)`, genus `B/2 - 1`;
/// a split covering (`B = 0`) reports genus 0 with the `split` flag.
pub fn hyperelliptic_genus(p: &UniPoly) -> Result<GenusData, BranchError> {
    let squarefree = squarefree_decomposition(p)?;
    let odd_part_degree = squarefree.odd_part().degree().unwrap_or(0);
    let branch_points = odd_part_degree + odd_part_degree % 2;
    let split = branch_points == 0;
    let genus = if split { 0 } else { branch_points / 2 - 1 };
    Ok(GenusData {
        squarefree,
        odd_part_degree,
        branch_points,
        genus,
        split,
    })
}

/// Rationality analysis of `ĝ² - q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchAnalysis {
    pub p: UniPoly,
    pub data: GenusData,
    pub admissible: bool,
    /// `deg ĝ = n - 1`, the degree the generic count assumes.
    pub generic_degree: bool,
}

impl BranchAnalysis {
    pub fn genus(&self) -> usize {
        self.data.genus
    }

    pub fn split(&self) -> bool {
        self.data.split
    }

    /// `{ "genus", "branch_points", "odd_part_degree", "admissible", "split" }`.
    pub fn to_json(&self) -> Value {
        json!({
            "genus": self.data.genus,
            "branch_points": self.data.branch_points,
            "odd_part_degree": self.data.odd_part_degree,
            "admissible": self.admissible,
            "split": self.data.split,
        })
    }
}

/// `ĝ² - q` and its genus; admissible iff the genus is 0.
pub fn is_admissible(params: &ModelParams) -> Result<BranchAnalysis, BranchError> {
    let p = &params.g_hat.pow(2) - &params.q();
    let data = hyperelliptic_genus(&p)?;
    let admissible = data.genus == 0;
    let generic_degree = params.g_hat.degree() == Some(params.n - 1);
    Ok(BranchAnalysis {
        p,
        data,
        admissible,
        generic_degree,
    })
}

/// Genus of `w² = λ∏(λ - λᵢ)`, the base of the ruled surface.
pub fn ruled_base_genus(params: &ModelParams) -> usize {
    hyperelliptic_genus(&params.q())
        .expect("q is nonzero")
        .genus
}

/// True iff `u` is the square of a polynomial over `ℚ`.
pub fn is_perfect_square(u: &UniPoly) -> bool {
    if u.is_zero() {
        return true;
    }
    let sf = squarefree_decomposition(u).expect("nonzero");
    sf.factors.iter().all(|(_, m)| m % 2 == 0) && rational_sqrt(&sf.lc).is_some()
}

/// Restriction of a polynomial in `(η₁, η₂)` that depends only on `e = η₁η₂`,
/// as a polynomial in `e`.
fn as_poly_in_product(p: &MultiPoly, a: &str, b: &str) -> Option<UniPoly> {
    let p = p.with_vars(&[a, b]).ok()?;
    let mut coeffs = Vec::new();
    for (e, c) in p.terms() {
        if e[0] != e[1] {
            return None;
        }
        let k = e[0] as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rational::zero());
        }
        coeffs[k] = c.clone();
    }
    Some(UniPoly::new(coeffs))
}

/// Whether the fiber of the branch divisor over `λ = a` is a double curve.
pub fn fiber_is_square(params: &ModelParams, a: &Rational) -> bool {
    let fiber = branch_polynomial(params).partial_eval(&HashMap::from([("lambda", a.clone())]));
    as_poly_in_product(&fiber, "eta1", "eta2")
        .map(|u| is_perfect_square(&u))
        .unwrap_or(false)
}

/// Fibers of the branch divisor that are non-reduced.
#[derive(Clone, Debug)]
pub struct NonreducedFibers {
    pub finite: Vec<Rational>,
    pub infinity: bool,
    pub report: VerificationReport,
}

/// `{0, λ₃, …, λ_{n+1}, ∞}`: each finite value is checked to make the branch
/// polynomial an exact square, a non-root control to make it not one, and
/// `∞` is checked in the `μ = 1/λ` chart.
pub fn nonreduced_fibers(params: &ModelParams) -> NonreducedFibers {
    let mut finite = vec![Rational::zero()];
    finite.extend(params.lambdas.iter().cloned());
    let mut r = VerificationReport::new();
    for a in &finite {
        r.check(
            format!("branch.fiber[{a}].square"),
            true,
            fiber_is_square(params, a),
        );
    }
    // A point strictly between or beyond the roots is not a root of q.
    let control = finite.iter().fold(
        Rational::zero(),
        |m, x| if x.abs_ge(&m) { x.clone() } else { m },
    ) * Rational::from_integer(2.into())
        + Rational::from_integer(1.into());
    r.check(
        format!("branch.fiber[{control}].square"),
        false,
        fiber_is_square(params, &control),
    );
    let chart = infinity_chart(params);
    r.check(
        "branch.fiber[inf].square",
        true,
        chart.fiber_at_zero_is_square,
    );
    NonreducedFibers {
        finite,
        infinity: chart.fiber_at_zero_is_square,
        report: r,
    }
}

trait AbsGe {
    fn abs_ge(&self, other: &Self) -> bool;
}

impl AbsGe for Rational {
    fn abs_ge(&self, other: &Self) -> bool {
        use num_traits::Signed;
        self.abs() >= other.abs()
    }
}

/// The branch divisor in the chart `μ = 1/λ`, `η̂ᵢ = ηᵢμ^{n-2}`.
#[derive(Clone, Debug)]
pub struct InfinityChart {
    /// `(η̂₁η̂₂ - μ^{n-3}g̃(μ))² - μ^{3n-8}q̃(μ)` in `(etahat1, etahat2, mu)`.
    pub equation: MultiPoly,
    /// `μ`-adic valuation of `w² - equation` with `w = η̂₁η̂₂ - μ^{n-3}g̃`.
    pub exponent: u32,
    /// `q̃(0)`, which is 1 since `q` is monic.
    pub q_tilde_at_zero: Rational,
    /// `A_{exponent-1}` when the exponent is at least 2; `None` for a smooth point.
    pub a_type: Option<u32>,
    pub fiber_at_zero_is_square: bool,
    /// The substituted equation agrees with the closed form.
    pub matches_closed_form: bool,
}

const CHART_VARS: [&str; 3] = ["etahat1", "etahat2", "mu"];

/// Rewrites the branch polynomial in the chart at `λ = ∞` and reads off the
/// local form `w² = μ^{3n-8}·unit`.
pub fn infinity_chart(params: &ModelParams) -> InfinityChart {
    let n = params.n as u32;
    let v = CHART_VARS;
    let b = branch_polynomial(params)
        .with_vars(&["eta1", "eta2", "lambda"])
        .expect("branch variables");
    // η^a η^b λ^c ↦ η̂^a η̂^b μ^{4(n-2) - (n-2)(a+b) - c}.
    let weight = 4 * (n - 2);
    let mut equation = MultiPoly::zero(&v);
    for (e, c) in b.terms() {
        let drop = (n - 2) * (e[0] + e[1]) + e[2];
        let m = weight
            .checked_sub(drop)
            .expect("total weight bounds every term");
        equation = &equation + &MultiPoly::from_terms(&v, [(vec![e[0], e[1], m], c.clone())]);
    }
    let reverse = |u: &UniPoly, d: usize| {
        let mut c: Vec<Rational> = (0..=d).map(|k| u.coeff(d - k)).collect();
        c.truncate(d + 1);
        UniPoly::new(c)
            .to_multi("mu")
            .with_vars(&v)
            .expect("mu only")
    };
    let g_tilde = reverse(&params.g_hat, params.n - 1);
    let q_tilde = reverse(&params.q(), params.n);
    let mu = MultiPoly::var(&v, "mu");
    let w = &(&MultiPoly::var(&v, "etahat1") * &MultiPoly::var(&v, "etahat2"))
        - &(&mu.pow(n - 3) * &g_tilde);
    let closed = &w.pow(2) - &(&mu.pow(3 * n - 8) * &q_tilde);
    let rest = &w.pow(2) - &equation;
    let exponent = rest.terms().map(|(e, _)| e[2]).min().unwrap_or(0);
    let q_tilde_at_zero = q_tilde.eval_at(&[Rational::zero(), Rational::zero(), Rational::zero()]);
    let at_zero = equation.partial_eval(&HashMap::from([("mu", Rational::zero())]));
    let fiber_at_zero_is_square = as_poly_in_product(&at_zero, "etahat1", "etahat2")
        .map(|u| is_perfect_square(&u))
        .unwrap_or(false);
    InfinityChart {
        matches_closed_form: closed == equation,
        equation,
        exponent,
        q_tilde_at_zero,
        a_type: (exponent >= 2).then(|| exponent - 1),
        fiber_at_zero_is_square,
    }
}

/// Parameter count for the moduli of the twistor spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModuliCount {
    pub params_g: usize,
    pub params_lambda: usize,
    pub scaling: usize,
    pub rationality_constraints: usize,
    pub dimension: usize,
}

/// `ĝ` has `n` coefficients and the λ's `n - 1`; one scaling of `λ` and the
/// `n - 2` conditions for the genus `n - 2` curve to become rational are
/// subtracted.
pub fn moduli_dimension(n: usize) -> ModuliCount {
    let (params_g, params_lambda, scaling, rationality_constraints) = (n, n - 1, 1, n - 2);
    ModuliCount {
        params_g,
        params_lambda,
        scaling,
        rationality_constraints,
        dimension: params_g + params_lambda - scaling - rationality_constraints,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn u(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&x| int(x)).collect())
    }

    fn params(n: usize, g: &[i64]) -> ModelParams {
        ModelParams::new(n, (1..n as i64).map(int).collect(), u(g)).unwrap()
    }

    #[test]
    fn genus_examples() {
        let p = UniPoly::from_roots(&[int(0), int(1), int(2)]);
        let g = hyperelliptic_genus(&p).unwrap();
        assert_eq!((g.genus, g.branch_points, g.split), (1, 4, false));
        let sq = UniPoly::from_roots(&[int(1), int(1), int(3), int(3)]);
        let g = hyperelliptic_genus(&sq).unwrap();
        assert_eq!((g.genus, g.branch_points, g.split), (0, 0, true));
        assert_eq!(
            hyperelliptic_genus(&UniPoly::zero()),
            Err(BranchError::ZeroPolynomial)
        );
        let two = UniPoly::from_roots(&[int(1), int(2), int(5), int(5)]);
        assert_eq!(hyperelliptic_genus(&two).unwrap().genus, 0);
    }

    #[test]
    fn generic_and_admissible_n3() {
        let a = is_admissible(&params(5, &[1, -2, 3, 1, 2])).unwrap();
        assert_eq!((a.genus(), a.admissible), (3, false));
        // ĝ = (λ² - 2λ + 2)/2 gives ĝ² - q = ((λ² - 4λ + 2)/2)².
        let p = ModelParams::new(
            3,
            vec![int(1), int(2)],
            UniPoly::new(vec![int(1), int(-1), rat(1, 2)]),
        )
        .unwrap();
        let a = is_admissible(&p).unwrap();
        assert!(a.admissible && a.split());
        assert_eq!(
            a.to_json(),
            json!({"genus": 0, "branch_points": 0, "odd_part_degree": 0, "admissible": true, "split": true})
        );
    }

    #[test]
    fn admissible_with_double_root() {
        // λ's (1, 13/4): q(4) = 9, so ĝ(4) = 3 and ĝ'(4) = q'(4)/6 give a
        // double root at 4.
        let lam = vec![int(1), rat(13, 4)];
        let q = UniPoly::from_roots(&[int(0), int(1), rat(13, 4)]);
        assert_eq!(q.eval(&int(4)), int(9));
        let slope = q.derivative().eval(&int(4)) / int(6);
        let g = UniPoly::new(vec![int(3) - &slope * int(4), slope]);
        let p = ModelParams::new(3, lam, g).unwrap();
        let a = is_admissible(&p).unwrap();
        assert!(a.admissible && !a.split(), "{:?}", a.data);
        assert!(!a.generic_degree);
    }

    #[test]
    fn ruled_base() {
        for n in 3..=12 {
            assert_eq!(ruled_base_genus(&params(n, &[1])), (n - 1) / 2, "n={n}");
        }
    }

    #[test]
    fn nonreduced() {
        let nr = nonreduced_fibers(&params(4, &[1, 2, 0, 1]));
        assert_eq!(nr.finite, vec![int(0), int(1), int(2), int(3)]);
        assert!(nr.infinity);
        assert!(nr.report.all_pass(), "{}", nr.report.to_text());
        assert!(!fiber_is_square(&params(4, &[1]), &rat(1, 2)));
    }

    #[test]
    fn infinity() {
        for n in 3..=10 {
            let ch = infinity_chart(&params(n, &[2, -1, 1]));
            assert!(ch.matches_closed_form, "n={n}");
            assert_eq!(ch.exponent, 3 * n as u32 - 8);
            assert_eq!(ch.q_tilde_at_zero, int(1));
            assert!(ch.fiber_at_zero_is_square);
        }
        assert_eq!(infinity_chart(&params(4, &[1])).a_type, Some(3));
        assert_eq!(infinity_chart(&params(5, &[1])).a_type, Some(6));
        assert_eq!(infinity_chart(&params(3, &[1])).a_type, None);
        let ch = infinity_chart(&params(5, &[1, 2, 3, 4, 5]));
        let at0 = ch.equation.partial_eval(&HashMap::from([("mu", int(0))]));
        let e = &MultiPoly::var(&CHART_VARS, "etahat1") * &MultiPoly::var(&CHART_VARS, "etahat2");
        assert_eq!(at0.with_vars(&CHART_VARS).unwrap(), e.pow(2));
    }

    #[test]
    fn moduli() {
        for n in 3..=12 {
            assert_eq!(moduli_dimension(n).dimension, n);
        }
    }
}
