//! Defining equations of the models and their consistency checks.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::{z, zvars, Ideal, ModelError, ModelParams};
use crate::lattice::{build_minitwistor_T, DivisorClass, LatticeError};
use crate::poly::{MultiPoly, Rational, UniPoly};
use crate::report::VerificationReport;

/// `σ₁..σ_m` of `m` values.
pub fn elementary_symmetric(lambdas: &[Rational]) -> Vec<Rational> {
    // ∏(λ - λᵢ) has coefficient (-1)^k σ_k on λ^{m-k}.
    let p = UniPoly::from_roots(lambdas);
    let m = lambdas.len();
    (1..=m)
        .map(|k| {
            let c = p.coeff(m - k);
            if k % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// The 2×2 minors `zᵢz_{j+1} - z_{i+1}z_j`, `1 ≤ i < j ≤ n-1`, cutting out the
/// cone over the rational normal curve of degree `n - 1` in `(z₁..z_n)`.
pub fn scroll_relations(n: usize) -> Ideal {
    let mut ideal = Ideal::new(zvars(n));
    scroll_minors_into(&mut ideal, n);
    ideal
}

fn scroll_minors_into(ideal: &mut Ideal, n: usize) {
    let vars: Vec<String> = ideal.variables.clone();
    let v: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let zz = |k: usize| MultiPoly::var(&v, &z(k));
    for i in 1..n - 1 {
        for j in i + 1..n {
            let p = &(&zz(i) * &zz(j + 1)) - &(&zz(i + 1) * &zz(j));
            ideal.push(format!("rnc({i},{j})"), p);
        }
    }
}

/// `z_n - σ₁z_{n-1} + σ₂z_{n-2} - … + (-1)^{n-1}σ_{n-1}z₁` over `vars`.
fn bracket_form(vars: &[&str], n: usize, sigmas: &[Rational]) -> MultiPoly {
    let mut acc = MultiPoly::var(vars, &z(n));
    for (k, s) in sigmas.iter().enumerate() {
        let k = k + 1;
        let sign = if k % 2 == 0 { s.clone() } else { -s.clone() };
        acc = &acc + &MultiPoly::var(vars, &z(n - k)).scale(&sign);
    }
    acc
}

fn quadric_with_factor(params: &ModelParams, vars: &[&str], factor: usize) -> MultiPoly {
    let n = params.n;
    let sig = elementary_symmetric(&params.lambdas);
    let lhs = &MultiPoly::var(vars, &z(n + 1)) * &MultiPoly::var(vars, &z(n + 2));
    &lhs - &(&MultiPoly::var(vars, &z(factor)) * &bracket_form(vars, n, &sig))
}

/// `z_{n+1}z_{n+2} - z₂(z_n - σ₁z_{n-1} + … + (-1)^{n-1}σ_{n-1}z₁)` in
/// `z₁..z_{n+2}`.
pub fn minitwistor_quadric(params: &ModelParams) -> MultiPoly {
    let vars = zvars(params.n + 2);
    let v: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    quadric_with_factor(params, &v, 2)
}

/// The minitwistor space in `CP^{n+1}`: the scroll minors in `z₁..z_n` and
/// the quadric, tagged `nt3`.
pub fn minitwistor_ideal(params: &ModelParams) -> Ideal {
    let mut ideal = Ideal::new(zvars(params.n + 2));
    scroll_minors_into(&mut ideal, params.n);
    ideal.push("nt3", minitwistor_quadric(params));
    ideal
}

/// The branch polynomial as a one-generator ideal in `(eta1, eta2, lambda)`,
/// tagged `branch1`.
pub fn branch_ideal(params: &ModelParams) -> Ideal {
    let mut ideal = Ideal::new(
        ["eta1", "eta2", "lambda"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    ideal.push("branch1", super::branch_polynomial(params));
    ideal
}

/// The same relation with the factor `z₁` in place of `z₂`, as printed among
/// the equations of `X`; in `z₁..z_{n+6}`. It is not satisfied on `X` (see
/// [`dehomogenization_report`]).
pub fn nt14_as_printed(params: &ModelParams) -> MultiPoly {
    let vars = zvars(params.n + 6);
    let v: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    quadric_with_factor(params, &v, 1)
}

/// Image under `z_k ↦ y₁^{n-k} y₂^{k-1}` (`k ≤ n`); other variables are kept.
pub fn scroll_image(p: &MultiPoly, n: usize) -> MultiPoly {
    let y = ["y1", "y2"];
    let mut b = HashMap::new();
    let names = zvars(n);
    for (k, name) in names.iter().enumerate() {
        let k = k + 1;
        let mono = &MultiPoly::var(&y, "y1").pow((n - k) as u32)
            * &MultiPoly::var(&y, "y2").pow((k - 1) as u32);
        b.insert(name.as_str(), mono);
    }
    p.substitute(&b)
}

/// `y₁^{n-2} y₂ ∏(y₂ - λᵢy₁)` equals the right-hand side of the quadric with
/// the given `σ`'s under `z_k ↦ y₁^{n-k}y₂^{k-1}`.
pub fn mt_identity_holds(n: usize, lambdas: &[Rational], sigmas: &[Rational]) -> bool {
    let y = ["y1", "y2"];
    let y1 = MultiPoly::var(&y, "y1");
    let y2 = MultiPoly::var(&y, "y2");
    let mut lhs = &y1.pow((n - 2) as u32) * &y2;
    for l in lambdas {
        lhs = &lhs * &(&y2 - &y1.scale(l));
    }
    let vars = zvars(n);
    let v: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let rhs = &MultiPoly::var(&v, &z(2)) * &bracket_form(&v, n, sigmas);
    let rhs = scroll_image(&rhs, n)
        .with_vars(&y)
        .expect("only y's remain");
    lhs == rhs
}

pub fn verify_mt_identity(params: &ModelParams) -> bool {
    mt_identity_holds(
        params.n,
        &params.lambdas,
        &elementary_symmetric(&params.lambdas),
    )
}

/// `g = Σ ĝ_{k-1} z_k + c z_{n+1} + c̄ z_{n+2}` over `vars`.
fn g_form(params: &ModelParams, vars: &[&str]) -> Result<MultiPoly, ModelError> {
    let coeffs = params.g_linear()?;
    let mut acc = MultiPoly::zero(vars);
    for (k, c) in coeffs.iter().enumerate() {
        acc = &acc + &MultiPoly::var(vars, &z(k + 1)).scale(c);
    }
    Ok(acc)
}

/// Equations of `X ⊂ CP^{n+5}`: the scroll minors, `z₁z_{n+5} - z₂z_{n+3}`,
/// `z₁z_{n+6} - z₂z_{n+4}`, the quadric relation and `z_{n+3}z_{n+4} - z₁g`.
/// The quadric carries the factor `z₂` under the tag `nt14` (the printed
/// factor `z₁` is available from [`nt14_as_printed`]). Requires real `c`.
#[allow(non_snake_case)]
pub fn model_X_ideal(params: &ModelParams) -> Result<Ideal, ModelError> {
    let n = params.n;
    let mut ideal = Ideal::new(zvars(n + 6));
    scroll_minors_into(&mut ideal, n);
    let vars = ideal.variables.clone();
    let v: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let zz = |k: usize| MultiPoly::var(&v, &z(k));
    ideal.push("nt12", &(&zz(1) * &zz(n + 5)) - &(&zz(2) * &zz(n + 3)));
    ideal.push("nt13", &(&zz(1) * &zz(n + 6)) - &(&zz(2) * &zz(n + 4)));
    ideal.push("nt14", quadric_with_factor(params, &v, 2));
    let g = g_form(params, &v)?;
    ideal.push("nt15", &(&zz(n + 3) * &zz(n + 4)) - &(&zz(1) * &g));
    Ok(ideal)
}

const FIBER_VARS: [&str; 7] = ["lambda", "xi1", "xi2", "xi3", "xi4", "xi5", "xi6"];

/// Fiberwise equations of the strict transform in `(λ, ξ₁..ξ₆)`.
pub fn fiber_model(params: &ModelParams) -> Result<Ideal, ModelError> {
    let mut ideal = Ideal::new(FIBER_VARS.iter().map(|s| s.to_string()).collect());
    let v = FIBER_VARS;
    let x = |name: &str| MultiPoly::var(&v, name);
    let lam = x("lambda");
    ideal.push("nt16", &x("xi5") - &(&lam * &x("xi3")));
    ideal.push("nt17", &x("xi6") - &(&lam * &x("xi4")));
    let q = params.q().to_multi("lambda");
    ideal.push("nt18", &(&x("xi1") * &x("xi2")) - &q);
    let c = params.real_c()?;
    let g = &(&params.g_hat.to_multi("lambda") + &x("xi1").scale(&c)) + &x("xi2").scale(&c);
    ideal.push("nt19", &(&x("xi3") * &x("xi4")) - &g);
    Ok(ideal)
}

/// Inverts `λ = z₂/z₁`, `ξᵢ = z_{n+i}/z₁` and clears denominators with the
/// least power `z₁^D`. Returns the polynomial in `z₁..z_{n+6}` and `D`.
pub fn homogenize_fiber(p: &MultiPoly, n: usize) -> (MultiPoly, u32) {
    let p = p.with_vars(&FIBER_VARS).expect("fiber variables");
    let d = p
        .terms()
        .map(|(e, _)| e.iter().sum::<u32>())
        .max()
        .unwrap_or(0);
    let vars = zvars(n + 6);
    let v: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let mut out = MultiPoly::zero(&v);
    for (e, c) in p.terms() {
        let mut exp = vec![0u32; n + 6];
        exp[0] = d - e.iter().sum::<u32>();
        exp[1] += e[0];
        for i in 1..=6 {
            exp[n + i - 1] += e[i];
        }
        out = &out + &MultiPoly::from_terms(&v, [(exp, c.clone())]);
    }
    (out, d)
}

/// Dehomogenization consistency: each fiber equation, homogenized, differs
/// from `z₁^{D-2}` times the matching equation of `X` by an element of the
/// scroll ideal (equivalently, the difference vanishes on the cone). The
/// printed `z₁` form of the quadric relation fails the same test.
pub fn dehomogenization_report(params: &ModelParams) -> VerificationReport {
    let mut r = VerificationReport::new();
    let (fiber, x) = match (fiber_model(params), model_X_ideal(params)) {
        (Ok(f), Ok(x)) => (f, x),
        (Err(e), _) | (_, Err(e)) => {
            r.check("models.dehomogenization", "ok", e);
            return r;
        }
    };
    let n = params.n;
    let vars = zvars(n + 6);
    let v: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let z1 = MultiPoly::var(&v, "z1");
    let lands = |fib: &MultiPoly, xg: &MultiPoly| {
        let (h, d) = homogenize_fiber(fib, n);
        let diff = &h - &(&z1.pow(d - 2) * xg);
        scroll_image(&diff, n).is_zero()
    };
    for (ft, xt) in [
        ("nt16", "nt12"),
        ("nt17", "nt13"),
        ("nt18", "nt14"),
        ("nt19", "nt15"),
    ] {
        let ok = lands(fiber.get(ft).expect("fiber tag"), x.get(xt).expect("X tag"));
        r.check(format!("models.dehomogenize.{ft}->{xt}"), true, ok);
    }
    let printed_ok = lands(
        fiber.get("nt18").expect("fiber tag"),
        &nt14_as_printed(params),
    );
    r.check(
        "models.dehomogenize.nt18->nt14(printed z1 factor)",
        false,
        printed_ok,
    );
    r
}

/// `(z₁..z_{n-1}, z_{n+3}, z_{n+4})` of a point of `CP^{n+5}`.
pub fn project_f(point: &[Rational]) -> Result<Vec<Rational>, ModelError> {
    if point.len() < 9 {
        return Err(ModelError::PointLength(point.len()));
    }
    let n = point.len() - 6;
    let mut out: Vec<Rational> = point[..n - 1].to_vec();
    out.push(point[n + 2].clone());
    out.push(point[n + 3].clone());
    if out.iter().all(|x| x.is_zero()) {
        return Err(ModelError::ProjectionCenter);
    }
    Ok(out)
}

/// The zero divisors of `P₀` and `P₁` in the conic-bundle form `xy = P₀P₁t²`
/// over the resolved minitwistor surface, with their consistency report.
#[derive(Clone, Debug)]
pub struct ConicBundleForm {
    pub p0: Vec<(String, DivisorClass)>,
    pub p1: Vec<(String, DivisorClass)>,
    pub report: VerificationReport,
}

/// `P₀` is the curve `C̃₀`; `P₁` consists of the two sections `Γ, Γ̄` and every
/// component of the reducible fibers other than those over `λ₂ = 0` and `λ₃`.
pub fn conic_bundle_form(n: usize) -> Result<ConicBundleForm, LatticeError> {
    let t = build_minitwistor_T(n)?;
    let c0 = t.class("C0")?;
    let f = t.class("f")?;
    let p0 = vec![("C0".to_string(), c0.clone())];
    let mut p1 = vec![
        ("Gamma".to_string(), t.class("Gamma")?),
        ("Gammabar".to_string(), t.class("Gammabar")?),
    ];
    for fiber in &t.fibers {
        let over_excluded = fiber
            .iter()
            .any(|(s, _)| s.starts_with("s2") || s.starts_with("s3"));
        if !over_excluded {
            p1.extend(fiber.iter().cloned());
        }
    }
    let sum = |v: &[(String, DivisorClass)]| {
        v.iter()
            .fold(DivisorClass::zero(t.rank()), |a, (_, c)| &a + c)
    };
    let (c_p0, c_p1) = (sum(&p0), sum(&p1));
    let ni = n as i64;
    let mut r = VerificationReport::new();
    r.check("models.conic.P1.components", 3 * n - 3, p1.len());
    let want_p1 = &(&t.class("Gamma")? + &t.class("Gammabar")?) + &f.scale(ni - 1);
    r.check(
        "models.conic.P1=Gamma+Gammabar+(n-1)f",
        true,
        c_p1 == want_p1,
    );
    r.check("models.conic.C0.f", 2, t.dot(&c0, &f));
    r.check("models.conic.(P0+P1).f", 4, t.dot(&(&c_p0 + &c_p1), &f));
    let excluded = p1
        .iter()
        .any(|(s, _)| ["s2+", "s2-", "s3+", "s3-"].contains(&s.as_str()));
    r.check(
        "models.conic.fibers over 0 and l3 excluded",
        true,
        !excluded,
    );
    Ok(ConicBundleForm { p0, p1, report: r })
}

/// Evaluates `z_k = λ^{k-1}` for `k = 1..n`.
pub(crate) fn rnc_point(n: usize, lam: &Rational) -> Vec<Rational> {
    let mut v = Vec::with_capacity(n);
    let mut cur = Rational::one();
    for _ in 0..n {
        v.push(cur.clone());
        cur *= lam;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn params(n: usize, l: &[i64], g: &[i64]) -> ModelParams {
        ModelParams::new(
            n,
            l.iter().map(|&x| int(x)).collect(),
            UniPoly::new(g.iter().map(|&x| int(x)).collect()),
        )
        .unwrap()
    }

    #[test]
    fn sigmas() {
        assert_eq!(
            elementary_symmetric(&[int(1), int(2)]),
            vec![int(3), int(2)]
        );
        assert_eq!(
            elementary_symmetric(&[int(1), int(2), int(3)]),
            vec![int(6), int(11), int(6)]
        );
    }

    #[test]
    fn scroll_minor_counts() {
        let i3 = scroll_relations(3);
        assert_eq!(i3.len(), 1);
        assert_eq!(i3.generators[0].1.to_canonical(), "1 * z1 * z3 + -1 * z2^2");
        assert_eq!(scroll_relations(5).len(), 6);
        let i5 = scroll_relations(5);
        for l in [int(2), rat(-3, 7), int(0)] {
            assert!(i5.vanishes_at(&rnc_point(5, &l)));
        }
    }

    #[test]
    fn quadric_n3() {
        let p = params(3, &[1, 2], &[]);
        let v = ["z1", "z2", "z3", "z4", "z5"];
        let x = |s: &str| MultiPoly::var(&v, s);
        let expect = &(&x("z4") * &x("z5"))
            - &(&x("z2") * &(&(&x("z3") - &x("z2").scale(&int(3))) + &x("z1").scale(&int(2))));
        assert_eq!(minitwistor_quadric(&p), expect);
    }

    #[test]
    fn sign_of_last_sigma() {
        for n in 3..=6 {
            let l: Vec<i64> = (1..n as i64).collect();
            let p = params(n, &l, &[]);
            let q = minitwistor_quadric(&p);
            let sig = elementary_symmetric(&p.lambdas);
            let mut e = vec![0u32; n + 2];
            e[0] = 1;
            e[1] = 1;
            let coeff = q
                .terms()
                .find(|(k, _)| **k == e)
                .map(|(_, c)| c.clone())
                .unwrap();
            let want = if n % 2 == 0 {
                sig[n - 2].clone()
            } else {
                -sig[n - 2].clone()
            };
            assert_eq!(coeff, want);
        }
    }

    #[test]
    fn mt_identity_and_negative_control() {
        let p = params(4, &[1, 3, 7], &[]);
        assert!(verify_mt_identity(&p));
        let mut s = elementary_symmetric(&p.lambdas);
        s[1] += int(1);
        assert!(!mt_identity_holds(4, &p.lambdas, &s));
    }

    #[test]
    fn model_x_counts_and_tags() {
        let p = params(4, &[1, 2, 3], &[1, 2]);
        let x = model_X_ideal(&p).unwrap();
        assert_eq!(x.len(), 7);
        assert!(x.get("nt14").is_some());
        assert_ne!(x.get("nt14").unwrap(), &nt14_as_printed(&p));
    }

    #[test]
    fn fiber_model_n3() {
        let p = params(3, &[1, 2], &[]);
        let f = fiber_model(&p).unwrap();
        let v = FIBER_VARS;
        let l = MultiPoly::var(&v, "lambda");
        let q = &(&l * &(&l - &MultiPoly::constant(&v, int(1))))
            * &(&l - &MultiPoly::constant(&v, int(2)));
        let want = &(&MultiPoly::var(&v, "xi1") * &MultiPoly::var(&v, "xi2")) - &q;
        assert_eq!(f.get("nt18").unwrap(), &want);
        let at = f
            .get("nt18")
            .unwrap()
            .partial_eval(&HashMap::from([("lambda", int(2))]));
        assert_eq!(at, &MultiPoly::var(&v, "xi1") * &MultiPoly::var(&v, "xi2"));
    }

    #[test]
    fn dehomogenization_consistency() {
        for n in 3..=6 {
            let l: Vec<i64> = (1..n as i64).collect();
            let g: Vec<i64> = (0..n as i64).map(|k| k - 2).collect();
            let rep = dehomogenization_report(&params(n, &l, &g));
            assert!(rep.all_pass(), "{}", rep.to_text());
        }
    }

    #[test]
    fn projection() {
        let n = 4;
        let mut e = vec![int(0); n + 6];
        e[n + 4] = int(1);
        assert_eq!(project_f(&e), Err(ModelError::ProjectionCenter));
        let lam = int(3);
        let (a, b) = (int(5), int(-2));
        let mut pt = rnc_point(n, &lam);
        pt.extend([int(7), int(11), a.clone(), b.clone(), &lam * &a, &lam * &b]);
        let f = project_f(&pt).unwrap();
        assert_eq!(f, vec![int(1), int(3), int(9), a, b]);
        let scaled: Vec<Rational> = pt.iter().map(|x| x * int(2)).collect();
        assert_eq!(
            project_f(&scaled).unwrap(),
            f.iter().map(|x| x * int(2)).collect::<Vec<_>>()
        );
        assert_eq!(project_f(&[int(1)]), Err(ModelError::PointLength(1)));
    }

    #[test]
    fn conic_bundle() {
        for n in 3..=8 {
            let cb = conic_bundle_form(n).unwrap();
            assert!(cb.report.all_pass(), "n={n}\n{}", cb.report.to_text());
        }
    }

    #[test]
    fn minitwistor_and_branch_ideals() {
        let p = params(3, &[1, 2], &[1, 0, 1]);
        let mt = minitwistor_ideal(&p);
        assert_eq!(mt.len(), 2);
        assert_eq!(mt.get("nt3"), Some(&minitwistor_quadric(&p)));
        assert!(mt.to_text().contains("nt3: "));
        let b = branch_ideal(&p);
        assert_eq!(b.variables, vec!["eta1", "eta2", "lambda"]);
        assert_eq!(b.len(), 1);
    }
}
