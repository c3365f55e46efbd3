//! The minimal resolution of the minitwistor surface as an abstract lattice.
//!
//! The surface is a conic bundle over `CP¹` with fiber class `f` and two
//! disjoint sections `Γ`, `Γ̄` of self-intersection `1 - n`. Over `λ₂..λ_{n+1}`
//! the fiber splits into two `(-1)`-curves `sᵢ⁺ + sᵢ⁻`; the fiber through the
//! touching point is the chain `s₁⁺ - f₁ - … - f_{n-2}` with `f₁..f_{n-3}` of
//! self-intersection `-2` and the two ends `(-1)`. `Γ` meets every `sᵢ⁻` and
//! `f_{n-2}`; `Γ̄` meets every `sᵢ⁺` and `s₁⁺`.
//!
//! Basis: `Γ, f, s₃⁺, d₄..d_{n+1} (dᵢ = sᵢ⁺), s₂⁻, f₁..f_{n-2}`.

use super::{adjunction_genus, DivisorClass, Lattice, LatticeError};
use crate::report::VerificationReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceT {
    pub n: usize,
    pub lattice: Lattice,
    pub canonical: DivisorClass,
    /// Distinguished classes: `Gamma`, `Gammabar`, `f`, `C0`, `h`.
    pub classes: Vec<(String, DivisorClass)>,
    /// Components of each reducible fiber; the touching fiber comes first,
    /// then the fibers over `λ₂, …, λ_{n+1}`.
    pub fibers: Vec<Vec<(String, DivisorClass)>>,
}

impl SurfaceT {
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn dot(&self, a: &DivisorClass, b: &DivisorClass) -> i64 {
        self.lattice.intersect(a, b).expect("classes of T")
    }

    pub fn class(&self, name: &str) -> Result<DivisorClass, LatticeError> {
        if let Some((_, c)) = self.classes.iter().find(|(n, _)| n == name) {
            return Ok(c.clone());
        }
        for fiber in &self.fibers {
            if let Some((_, c)) = fiber.iter().find(|(n, _)| n == name) {
                return Ok(c.clone());
            }
        }
        self.lattice
            .class_of(name)
            .ok_or_else(|| LatticeError::UnknownCurve(name.to_string()))
    }

    pub fn virtual_genus(&self, d: &DivisorClass) -> Result<i64, LatticeError> {
        adjunction_genus(self.dot(d, d), self.dot(&self.canonical, d))
    }

    pub fn c1_squared(&self) -> i64 {
        self.dot(&self.canonical, &self.canonical)
    }

    pub fn component_count(&self) -> usize {
        self.fibers.iter().map(|f| f.len()).sum()
    }
}

fn basis_names(n: usize) -> Vec<String> {
    let mut v = vec!["Gamma".to_string(), "f".to_string(), "s3+".to_string()];
    for i in 4..=n + 1 {
        v.push(format!("d{i}"));
    }
    v.push("s2-".to_string());
    for j in 1..=n - 2 {
        v.push(format!("f{j}"));
    }
    v
}

/// Builds the lattice, its canonical class and the distinguished classes.
#[allow(non_snake_case)]
pub fn build_minitwistor_T(n: usize) -> Result<SurfaceT, LatticeError> {
    if n < 3 {
        return Err(LatticeError::BadN(n));
    }
    let names = basis_names(n);
    let r = names.len();
    debug_assert_eq!(r, 2 * n);
    let idx = |s: &str| names.iter().position(|x| x == s).expect("basis name");
    let mut gram = vec![vec![0i64; r]; r];
    let mut set = |a: usize, b: usize, v: i64| {
        gram[a][b] = v;
        gram[b][a] = v;
    };
    let (g, f) = (idx("Gamma"), idx("f"));
    set(g, g, 1 - n as i64);
    set(g, f, 1);
    set(idx("s3+"), idx("s3+"), -1);
    for i in 4..=n + 1 {
        let d = idx(&format!("d{i}"));
        set(d, d, -1);
    }
    let s2m = idx("s2-");
    set(s2m, s2m, -1);
    set(g, s2m, 1);
    let chain: Vec<usize> = (1..=n - 2).map(|j| idx(&format!("f{j}"))).collect();
    for (pos, &c) in chain.iter().enumerate() {
        let last = pos + 1 == chain.len();
        set(c, c, if last { -1 } else { -2 });
        if pos > 0 {
            set(chain[pos - 1], c, 1);
        }
    }
    set(g, *chain.last().expect("n >= 3"), 1);
    let lattice = Lattice {
        names: names.clone(),
        gram,
    };

    // Every basis curve is smooth rational: K·b = -2 - b².
    let rhs: Vec<i64> = (0..r).map(|i| -2 - lattice.gram[i][i]).collect();
    let canonical = lattice.solve_integral(&rhs).expect("unimodular lattice");

    let b = |s: &str| lattice.class_of(s).expect("basis");
    let ff = b("f");
    let gamma = b("Gamma");
    let chain_sum = (1..=n - 2).fold(DivisorClass::zero(r), |acc, j| &acc + &b(&format!("f{j}")));
    let weighted_chain = (1..=n - 2).fold(DivisorClass::zero(r), |acc, j| {
        &acc + &b(&format!("f{j}")).scale(j as i64)
    });
    let d_sum = (4..=n + 1).fold(DivisorClass::zero(r), |acc, i| &acc + &b(&format!("d{i}")));

    let c0 = &(&(&(&gamma.scale(2) + &ff.scale(n as i64 - 1)) + &b("s2-")) + &weighted_chain)
        - &(&b("s3+") + &d_sum);
    let h = &(&gamma + &b("s2-")) + &weighted_chain;
    let gammabar = &(&(&gamma - &b("s3+")) - &d_sum) + &(&b("s2-") + &weighted_chain);

    let mut fibers = Vec::new();
    let mut touching = vec![("s1+".to_string(), &ff - &chain_sum)];
    for j in 1..=n - 2 {
        touching.push((format!("f{j}"), b(&format!("f{j}"))));
    }
    fibers.push(touching);
    fibers.push(vec![
        ("s2+".to_string(), &ff - &b("s2-")),
        ("s2-".to_string(), b("s2-")),
    ]);
    fibers.push(vec![
        ("s3+".to_string(), b("s3+")),
        ("s3-".to_string(), &ff - &b("s3+")),
    ]);
    for i in 4..=n + 1 {
        let d = b(&format!("d{i}"));
        fibers.push(vec![
            (format!("s{i}+"), d.clone()),
            (format!("s{i}-"), &ff - &d),
        ]);
    }

    let classes = vec![
        ("Gamma".to_string(), gamma),
        ("Gammabar".to_string(), gammabar),
        ("f".to_string(), ff),
        ("C0".to_string(), c0),
        ("h".to_string(), h),
    ];
    Ok(SurfaceT {
        n,
        lattice,
        canonical,
        classes,
        fibers,
    })
}

/// Numbers of the curve `C̃₀` cut by the hyperplane through the two nodes.
#[allow(non_snake_case)]
pub fn check_C0_numbers(n: usize) -> VerificationReport {
    let mut r = VerificationReport::new();
    let t = match build_minitwistor_T(n) {
        Ok(t) => t,
        Err(e) => {
            r.check("T.build", "ok", e);
            return r;
        }
    };
    let c0 = t.class("C0").expect("C0");
    let n_i = n as i64;
    r.check("T.C0^2", 2 * n_i - 2, t.dot(&c0, &c0));
    r.check("T.K.C0", -4, t.dot(&t.canonical, &c0));
    r.check(
        "T.genus(C0)",
        n_i - 2,
        t.virtual_genus(&c0)
            .map(|g| g.to_string())
            .unwrap_or_else(|e| e.to_string()),
    );
    r
}

/// Every invariant of the lattice, as a report.
#[allow(non_snake_case)]
pub fn validate_T(t: &SurfaceT) -> VerificationReport {
    let n = t.n as i64;
    let mut r = check_C0_numbers(t.n);
    let k = &t.canonical;
    let cls = |s: &str| t.class(s).expect("distinguished class");
    let (c0, f, h, g, gb) = (cls("C0"), cls("f"), cls("h"), cls("Gamma"), cls("Gammabar"));
    r.check("T.rank", 2 * n, t.rank());
    r.check("T.c1^2", 10 - 2 * n, t.c1_squared());
    r.check("T.det", "-1", t.lattice.determinant());
    let (p, q, z) = t.lattice.signature();
    r.check(
        "T.signature",
        format!("(1, {}, 0)", 2 * n - 1),
        format!("({p}, {q}, {z})"),
    );
    r.check("T.f^2", 0, t.dot(&f, &f));
    r.check("T.K.f", -2, t.dot(k, &f));
    r.check("T.C0.f", 2, t.dot(&c0, &f));
    r.check("T.C0.Gamma", 0, t.dot(&c0, &g));
    r.check("T.C0.Gammabar", 0, t.dot(&c0, &gb));
    r.check("T.h.C0", n - 1, t.dot(&h, &c0));
    r.check("T.h^2", 0, t.dot(&h, &h));
    r.check("T.K.h", -2, t.dot(k, &h));
    r.check("T.Gammabar^2", 1 - n, t.dot(&gb, &gb));
    r.check("T.Gamma.Gammabar", 0, t.dot(&g, &gb));
    r.check("T.reducible_fibers", n + 1, t.fibers.len());
    r.check("T.components", 3 * n - 1, t.component_count());
    for fiber in &t.fibers {
        let sum = fiber
            .iter()
            .fold(DivisorClass::zero(t.rank()), |acc, (_, c)| &acc + c);
        let label = fiber
            .iter()
            .map(|(s, _)| s.as_str())
            .collect::<Vec<_>>()
            .join("+");
        r.check(format!("T.fiber[{label}]=f"), true, sum == f);
        for (name, c) in fiber {
            let sq = t.dot(c, c);
            r.check(
                format!("T.{name}^2 in {{-1,-2}}"),
                true,
                sq == -1 || sq == -2,
            );
            r.check(
                format!("T.genus({name})"),
                0,
                t.virtual_genus(c)
                    .map(|x| x.to_string())
                    .unwrap_or_default(),
            );
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n4_basics() {
        let t = build_minitwistor_T(4).unwrap();
        assert_eq!(t.c1_squared(), 2);
        assert_eq!(t.rank(), 8);
        let c0 = t.class("C0").unwrap();
        assert_eq!(t.dot(&c0, &t.class("f").unwrap()), 2);
        assert_eq!(t.dot(&c0, &t.class("Gamma").unwrap()), 0);
        assert_eq!(t.dot(&c0, &t.class("s2-").unwrap()), 1);
        assert_eq!(t.virtual_genus(&c0), Ok(2));
    }

    #[test]
    fn c0_is_sum_of_sections_plus_fibers() {
        for n in 3..=8 {
            let t = build_minitwistor_T(n).unwrap();
            let expect = &(&t.class("Gamma").unwrap() + &t.class("Gammabar").unwrap())
                + &t.class("f").unwrap().scale(n as i64 - 1);
            assert_eq!(t.class("C0").unwrap(), expect);
        }
    }

    #[test]
    fn full_validation() {
        for n in 3..=9 {
            let t = build_minitwistor_T(n).unwrap();
            let rep = validate_T(&t);
            assert!(rep.all_pass(), "n={n}\n{}", rep.to_text());
        }
    }
}
