//! Divisor-class checks on `S`: membership in `|m(-K)|`, the halves of the
//! anticanonical cycle cut by the reducible members `Sᵢ^±`, the classes of
//! the restrictions of `Y + Ȳ`, and movable-part numerics.

mod ledger;

use std::collections::BTreeMap;
use std::fmt;

use crate::lattice::{build_surface_S, c_name, DivisorClass, LatticeError, SurfaceS};
use crate::report::VerificationReport;

pub use ledger::{
    compare_with_printed, elimination_ledger, ledger_report, printed_generators, Center, Generator,
    LedgerError, LedgerStage,
};

/// Which half of a reducible member: `Sᵢ⁺` contains `C_{n+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// Formal integer combination of named curves of `S`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CurveCombination {
    pub terms: BTreeMap<String, i64>,
}

impl CurveCombination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: &str, k: i64) -> &mut Self {
        let e = self.terms.entry(name.to_string()).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.remove(name);
        }
        self
    }

    pub fn plus(&self, other: &CurveCombination, k: i64) -> Self {
        let mut out = self.clone();
        for (n, c) in &other.terms {
            out.add(n, k * c);
        }
        out
    }

    pub fn class(&self, s: &SurfaceS) -> Result<DivisorClass, LatticeError> {
        let mut acc = DivisorClass::zero(s.rank());
        for (name, k) in &self.terms {
            acc = &acc + &s.curve(name)?.scale(*k);
        }
        Ok(acc)
    }

    /// The conjugate combination (`Cᵢ ↔ C̄ᵢ`, `Bⱼ ↔ B̄ⱼ`).
    pub fn conjugate(&self) -> Self {
        let mut out = Self::new();
        for (n, k) in &self.terms {
            let m = match n.strip_suffix("bar") {
                Some(b) => b.to_string(),
                None => format!("{n}bar"),
            };
            out.add(&m, *k);
        }
        out
    }
}

impl fmt::Display for CurveCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(n, k)| format!("{k}*{n}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// True iff the class of `d` equals `m·(-K)`.
pub fn is_in_pluri_anticanonical(
    s: &SurfaceS,
    d: &CurveCombination,
    m: i64,
) -> Result<bool, LatticeError> {
    Ok(d.class(s)? == s.anticanonical().scale(m))
}

/// `Sᵢ⁺|_S = Cᵢ + … + C_{n+1} + C̄₁ + … + C̄_{i-1}`; `Sᵢ⁻|_S` is its conjugate.
pub fn half_restriction(n: usize, i: usize, sign: Sign) -> Result<CurveCombination, LatticeError> {
    if i == 0 || i > n + 1 {
        return Err(LatticeError::UnknownCurve(format!(
            "S{i}{}",
            if sign == Sign::Plus { "+" } else { "-" }
        )));
    }
    let bar = sign == Sign::Minus;
    let mut c = CurveCombination::new();
    for j in i..=n + 1 {
        c.add(&c_name(j, bar), 1);
    }
    for j in 1..i {
        c.add(&c_name(j, !bar), 1);
    }
    Ok(c)
}

/// `Cⱼ ⊂ Sᵢ⁺` iff `i ≤ j`; `Cⱼ ⊂ Sᵢ⁻` iff `i > j`; `C̄ⱼ` symmetrically.
pub fn contains_cycle_curve(i: usize, sign: Sign, j: usize, bar: bool) -> bool {
    match (sign, bar) {
        (Sign::Plus, false) | (Sign::Minus, true) => i <= j,
        (Sign::Plus, true) | (Sign::Minus, false) => i > j,
    }
}

/// `(n-2)·half(1, s₁) + Σ_{i≥2} half(i, sᵢ)` for the given sign choices.
pub fn nontrivial_member(n: usize, signs: &[Sign]) -> CurveCombination {
    assert_eq!(signs.len(), n + 1, "one sign per index");
    let mut d = CurveCombination::new();
    for (k, &sg) in signs.iter().enumerate() {
        let i = k + 1;
        let mult = if i == 1 { n as i64 - 2 } else { 1 };
        d = d.plus(&half_restriction(n, i, sg).expect("in range"), mult);
    }
    d
}

/// Both non-trivial members restrict to `(n-1)(-K)`.
pub fn verify_nontrivial_member(n: usize) -> VerificationReport {
    let mut r = VerificationReport::new();
    let s = match build_surface_S(n) {
        Ok(s) => s,
        Err(e) => {
            r.check("linsys.build", "ok", e);
            return r;
        }
    };
    for (label, sign) in [("+", Sign::Plus), ("-", Sign::Minus)] {
        let d = nontrivial_member(n, &vec![sign; n + 1]);
        let ok = is_in_pluri_anticanonical(&s, &d, n as i64 - 1).unwrap_or(false);
        r.check(format!("linsys.nontrivial{label}"), true, ok);
    }
    for i in 1..=n + 1 {
        let p = half_restriction(n, i, Sign::Plus).and_then(|h| h.class(&s));
        let m = half_restriction(n, i, Sign::Minus).and_then(|h| h.class(&s));
        let ok = matches!((p, m), (Ok(p), Ok(m)) if &p + &m == s.anticanonical());
        r.check(format!("linsys.half({i},+)+half({i},-)=-K"), true, ok);
    }
    r
}

fn rest1(n: usize) -> CurveCombination {
    let mut c = CurveCombination::new();
    c.add("C1", n as i64 - 2);
    for i in 2..=n {
        c.add(&c_name(i, false), (n + 1 - i) as i64);
    }
    c.add("B1", 1);
    c.add("B2", 1);
    c
}

/// `(n-2)(C₁+C̄₁) + Σ_{i=2}^n (n+1-i)(Cᵢ+C̄ᵢ)`.
fn rest3(n: usize) -> CurveCombination {
    let mut c = CurveCombination::new();
    for bar in [false, true] {
        c.add(&c_name(1, bar), n as i64 - 2);
        for i in 2..=n {
            c.add(&c_name(i, bar), (n + 1 - i) as i64);
        }
    }
    c
}

/// One step of the peeling argument: the component whose pairing with the
/// residual was negative, and that pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelStep {
    pub curve: usize,
    pub pairing: i64,
}

/// Starting from `(n-1)(-K)` minus the components forced by the base locus
/// and the multiplicity along `C₂`, removes conjugate pairs `Cᵢ + C̄ᵢ` that the
/// residual must contain because it pairs negatively with `Cᵢ`. The first two
/// rounds remove `C₁` and `C₃` together, the third removes `C₄`; after that
/// the first negative component in `C₁, C₃, …, C_n` is removed until none is
/// left. Returns the trace (with the pairing before each removal) and the
/// total removed combination, along with the initial pairing against `C₁`.
///
/// The base locus used is `C - C_{n+1} - C̄_{n+1}` for `|(n-1)F|`; one
/// printed statement attaches it to `|(n-2)F|` instead, which is not followed.
pub fn peel_residual(s: &SurfaceS) -> (i64, Vec<PeelStep>, CurveCombination) {
    let n = s.n;
    let mut removed = CurveCombination::new();
    for bar in [false, true] {
        removed.add(&c_name(1, bar), 1);
        removed.add(&c_name(2, bar), n as i64 - 1);
        for i in 3..=n {
            removed.add(&c_name(i, bar), 1);
        }
    }
    let target = s.anticanonical().scale(n as i64 - 1);
    let residual = |rem: &CurveCombination| &target - &rem.class(s).expect("cycle curves");
    let first = s.dot(&residual(&removed), &s.c(1));
    let mut trace = Vec::new();
    let mut round = |removed: &mut CurveCombination, curves: &[usize]| -> bool {
        let res = residual(removed);
        let pairings: Vec<i64> = curves.iter().map(|&i| s.dot(&res, &s.c(i))).collect();
        if pairings.iter().any(|&v| v >= 0) {
            return false;
        }
        for (&i, &v) in curves.iter().zip(&pairings) {
            trace.push(PeelStep {
                curve: i,
                pairing: v,
            });
            removed.add(&c_name(i, false), 1);
            removed.add(&c_name(i, true), 1);
        }
        true
    };
    let scripted: &[&[usize]] = &[&[1, 3], &[1, 3], &[4]];
    for curves in scripted {
        if curves.iter().any(|&i| i > n) || !round(&mut removed, curves) {
            break;
        }
    }
    let order: Vec<usize> = std::iter::once(1).chain(3..=n).collect();
    'outer: loop {
        for &i in &order {
            if round(&mut removed, &[i]) {
                continue 'outer;
            }
        }
        break;
    }
    (first, trace, removed)
}

/// Class checks for the restriction of `Y + Ȳ`.
#[allow(non_snake_case)]
pub fn verify_Y_classes(n: usize) -> VerificationReport {
    let mut r = VerificationReport::new();
    let s = match build_surface_S(n) {
        Ok(s) => s,
        Err(e) => {
            r.check("linsys.build", "ok", e);
            return r;
        }
    };
    let ni = n as i64;
    let y = rest1(n);
    let a = y.plus(&y.conjugate(), 1);
    r.check(
        "linsys.rest1+conj in |(n-1)(-K)|",
        true,
        is_in_pluri_anticanonical(&s, &a, ni - 1).unwrap_or(false),
    );
    let mut b = y.clone();
    for i in 1..=n + 1 {
        b.add(&c_name(i, true), ni - 3);
    }
    r.check(
        "linsys.rest2 in |(n-2)(-K)|",
        true,
        is_in_pluri_anticanonical(&s, &b, ni - 2).unwrap_or(false),
    );

    let (first, trace, removed) = peel_residual(&s);
    let at = |k: usize| trace.get(k).map(|p| (p.curve, p.pairing));
    r.check("linsys.cohom3.C1", (ni - 1) * (3 - ni), first);
    if n >= 4 {
        r.check(
            "linsys.cohom3.C3<0",
            true,
            matches!(at(1), Some((3, v)) if v < 0),
        );
    }
    if n >= 5 {
        r.check(
            "linsys.cohom4.C1",
            format!("{:?}", Some((1, (ni - 1) * (4 - ni)))),
            format!("{:?}", at(2)),
        );
        r.check(
            "linsys.cohom4.C3",
            format!("{:?}", Some((3, 4 - ni))),
            format!("{:?}", at(3)),
        );
        r.check(
            "linsys.cohom5.C4",
            format!("{:?}", Some((4, -2))),
            format!("{:?}", at(4)),
        );
    }
    r.check(
        "linsys.peeled=rest3",
        rest3(n).to_string(),
        removed.to_string(),
    );
    let bsum = {
        let mut c = CurveCombination::new();
        for name in ["B1", "B1bar", "B2", "B2bar"] {
            c.add(name, 1);
        }
        c
    };
    let leftover = &s.anticanonical().scale(ni - 1) - &removed.class(&s).expect("cycle");
    r.check(
        "linsys.residual=B1+B2+conj",
        true,
        leftover == bsum.class(&s).expect("B curves"),
    );
    r
}

/// The fixed part used for `|m(-K)|`, `m ∈ {n-2, n-1}`.
pub fn fixed_part(n: usize, m: usize) -> Option<CurveCombination> {
    let ni = n as i64;
    let mut c = CurveCombination::new();
    if m + 2 == n {
        for bar in [false, true] {
            for i in 1..=4.min(n) {
                c.add(&c_name(i, bar), ni - 3);
            }
            for i in 5..=n {
                c.add(&c_name(i, bar), (n + 1 - i) as i64);
            }
        }
    } else if m + 1 == n {
        for bar in [false, true] {
            for i in 1..=2 {
                c.add(&c_name(i, bar), ni - 2);
            }
            for i in 3..=n {
                c.add(&c_name(i, bar), (n + 1 - i) as i64);
            }
        }
    } else {
        return None;
    }
    Some(c)
}

/// `M = m(-K) - fixed part`: returns `M²` and whether `M·D ≥ 0` for every
/// cycle component and `B` curve.
pub fn movable_part_numbers(n: usize, m: usize) -> Result<(i64, bool), LatticeError> {
    let s = build_surface_S(n)?;
    let fixed = fixed_part(n, m).ok_or(LatticeError::BadN(m))?;
    let mv = &s.anticanonical().scale(m as i64) - &fixed.class(&s)?;
    let nef = s
        .named_curves()
        .iter()
        .all(|name| s.dot(&mv, s.curve(name).expect("named")) >= 0);
    Ok((s.dot(&mv, &mv), nef))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halves_at_one() {
        let n = 5;
        let minus = half_restriction(n, 1, Sign::Minus).unwrap();
        let mut all_bar = CurveCombination::new();
        for i in 1..=n + 1 {
            all_bar.add(&c_name(i, true), 1);
        }
        assert_eq!(minus, all_bar);
        assert_eq!(
            half_restriction(n, 1, Sign::Plus).unwrap(),
            all_bar.conjugate()
        );
        assert!(half_restriction(n, n + 2, Sign::Plus).is_err());
    }

    #[test]
    fn incidence_agrees_with_halves() {
        let n = 6;
        for i in 1..=n + 1 {
            for sign in [Sign::Plus, Sign::Minus] {
                let h = half_restriction(n, i, sign).unwrap();
                for j in 1..=n + 1 {
                    for bar in [false, true] {
                        assert_eq!(
                            h.terms.contains_key(&c_name(j, bar)),
                            contains_cycle_curve(i, sign, j, bar)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn membership_examples() {
        let s = build_surface_S(4).unwrap();
        let mut cyc = CurveCombination::new();
        for name in s.cycle_names() {
            cyc.add(&name, 1);
        }
        assert!(is_in_pluri_anticanonical(&s, &cyc, 1).unwrap());
        let y = rest1(4);
        assert!(is_in_pluri_anticanonical(&s, &y.plus(&y.conjugate(), 1), 3).unwrap());
        let mut c1 = CurveCombination::new();
        c1.add("C1", 1);
        assert!(!is_in_pluri_anticanonical(&s, &c1, 1).unwrap());
    }

    #[test]
    fn nontrivial_member_negative_control() {
        let n = 5;
        let s = build_surface_S(n).unwrap();
        let mut signs = vec![Sign::Plus; n + 1];
        assert!(is_in_pluri_anticanonical(&s, &nontrivial_member(n, &signs), 4).unwrap());
        signs[2] = Sign::Minus;
        assert!(!is_in_pluri_anticanonical(&s, &nontrivial_member(n, &signs), 4).unwrap());
    }

    #[test]
    fn y_classes_n4_value() {
        let rep = verify_Y_classes(4);
        assert_eq!(rep.get("linsys.cohom3.C1").unwrap().computed, "-3");
        assert!(rep.all_pass(), "{}", rep.to_text());
    }

    #[test]
    fn movable_parts() {
        assert_eq!(movable_part_numbers(5, 3).unwrap(), (2, true));
        assert_eq!(movable_part_numbers(5, 4).unwrap(), (4, true));
        assert_eq!(movable_part_numbers(3, 1).unwrap(), (2, true));
    }
}

#[cfg(test)]
mod range_tests {
    use super::*;

    #[test]
    fn reports_pass_over_a_range() {
        for n in 3..=10 {
            let r = verify_Y_classes(n);
            assert!(r.all_pass(), "n={n}\n{}", r.to_text());
            let r = verify_nontrivial_member(n);
            assert!(r.all_pass(), "n={n}\n{}", r.to_text());
            if n >= 4 {
                assert_eq!(movable_part_numbers(n, n - 2).unwrap(), (2, true), "n={n}");
            }
            assert_eq!(movable_part_numbers(n, n - 1).unwrap(), (4, true), "n={n}");
        }
    }
}
