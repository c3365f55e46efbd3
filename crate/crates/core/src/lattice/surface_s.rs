//! The surface `S`: the quadric blown up at `2n` points in two conjugate
//! towers, carrying a cycle of `2n + 2` rational curves in `|-K|`.

use super::blowup::{blow_up, new_base_quadric};
use super::{signature, BlowupSurface, DivisorClass, LatticeError, PointSpec};
use crate::report::VerificationReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceS {
    pub n: usize,
    pub surface: BlowupSurface,
}

/// Name of the `i`-th cycle curve on the `e` side (`C1`..) or its conjugate
/// (`C1bar`..).
pub fn c_name(i: usize, bar: bool) -> String {
    if bar {
        format!("C{i}bar")
    } else {
        format!("C{i}")
    }
}

fn b_name(j: usize, bar: bool) -> String {
    if bar {
        format!("B{j}bar")
    } else {
        format!("B{j}")
    }
}

impl SurfaceS {
    pub fn rank(&self) -> usize {
        self.surface.rank()
    }

    pub fn canonical(&self) -> &DivisorClass {
        self.surface.canonical()
    }

    pub fn c(&self, i: usize) -> DivisorClass {
        self.surface
            .curve(&c_name(i, false))
            .expect("cycle curve")
            .clone()
    }

    pub fn cbar(&self, i: usize) -> DivisorClass {
        self.surface
            .curve(&c_name(i, true))
            .expect("cycle curve")
            .clone()
    }

    /// `Cᵢ` or `C̄ᵢ`.
    pub fn cycle_curve(&self, i: usize, bar: bool) -> DivisorClass {
        if bar {
            self.cbar(i)
        } else {
            self.c(i)
        }
    }

    pub fn b(&self, j: usize, bar: bool) -> DivisorClass {
        self.surface
            .curve(&b_name(j, bar))
            .expect("B curve")
            .clone()
    }

    pub fn curve(&self, name: &str) -> Result<&DivisorClass, LatticeError> {
        self.surface.curve(name)
    }

    pub fn dot(&self, a: &DivisorClass, b: &DivisorClass) -> i64 {
        self.surface.intersect(a, b).expect("classes of S")
    }

    /// The cycle in order `C₁, …, C_{n+1}, C̄₁, …, C̄_{n+1}`.
    pub fn cycle_names(&self) -> Vec<String> {
        let m = self.n + 1;
        (1..=m)
            .map(|i| c_name(i, false))
            .chain((1..=m).map(|i| c_name(i, true)))
            .collect()
    }

    /// Sum of all cycle curves.
    pub fn cycle_class(&self) -> DivisorClass {
        self.cycle_names()
            .iter()
            .fold(DivisorClass::zero(self.rank()), |acc, n| {
                &acc + self.curve(n).expect("cycle")
            })
    }

    pub fn anticanonical(&self) -> DivisorClass {
        -self.canonical()
    }

    /// All named curves: the cycle and the four `B` curves.
    pub fn named_curves(&self) -> Vec<String> {
        let mut v = self.cycle_names();
        for j in [1, 2] {
            v.push(b_name(j, false));
            v.push(b_name(j, true));
        }
        v
    }
}

/// Runs the blow-up script for `S`.
///
/// Curves tracked on the quadric: `C₁`, `C̄₁` in `|A|`, `C_{n+1}`, `C̄_{n+1}` in
/// `|B|`, and `B₂`, `B̄₂` in `|A + (n-1)B|`. The `e` tower starts at
/// `C₁ ∩ C_{n+1}` and climbs along `C₁` through each new exceptional curve;
/// the last center lies on the previous exceptional curve only. The `f`
/// tower mirrors it. Exceptional curves `E₁..E_{n-1}` become `C_n..C_2` and
/// `E_n` becomes `B₁`.
#[allow(non_snake_case)]
pub fn build_surface_S(n: usize) -> Result<SurfaceS, LatticeError> {
    if n < 3 {
        return Err(LatticeError::BadN(n));
    }
    let m = n + 1;
    let mut s = new_base_quadric();
    for bar in [false, true] {
        s.track(&c_name(1, bar), s.base_class(1, 0));
        s.track(&c_name(m, bar), s.base_class(0, 1));
        s.track(&b_name(2, bar), s.base_class(1, n as i64 - 1));
    }
    for bar in [false, true] {
        let (t, tower) = if bar { ("F", "f") } else { ("E", "e") };
        let c1 = c_name(1, bar);
        let cm = c_name(m, bar);
        let own_b2 = b_name(2, bar);
        let other_b2 = b_name(2, !bar);
        for k in 1..=n {
            let label = format!("{tower}{k}");
            let prev = format!("{t}{}", k - 1);
            let mut on: Vec<&str> = Vec::new();
            if k == 1 {
                on.extend([c1.as_str(), cm.as_str()]);
            } else {
                on.push(&prev);
                if k < n {
                    on.push(&c1);
                }
            }
            if k < n {
                on.push(&own_b2);
            }
            on.push(&other_b2);
            let p = PointSpec::new(&on, &label).tracked(&format!("{t}{k}"));
            s = blow_up(&s, &p)?;
        }
        for k in 1..n {
            let class = s.untrack(&format!("{t}{k}")).expect("tracked");
            s.track(&c_name(n + 1 - k, bar), class);
        }
        let class = s.untrack(&format!("{t}{n}")).expect("tracked");
        s.track(&b_name(1, bar), class);
    }
    // Fixed display order: the cycle, then B curves.
    let mut ordered = BlowupSurface::clone(&s);
    let names: Vec<String> = {
        let tmp = SurfaceS {
            n,
            surface: s.clone(),
        };
        tmp.named_curves()
    };
    for name in &names {
        let c = ordered.untrack(name).expect("named");
        ordered.track(name, c);
    }
    Ok(SurfaceS {
        n,
        surface: ordered,
    })
}

/// The real structure on `H²`: fixes `A`, `B` and swaps the two towers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjugation {
    n: usize,
}

impl Conjugation {
    pub fn apply(&self, d: &DivisorClass) -> DivisorClass {
        let n = self.n;
        let mut v = d.0.clone();
        for k in 0..n {
            v.swap(2 + k, 2 + n + k);
        }
        DivisorClass(v)
    }

    /// Matrix of the involution (columns are images of basis vectors).
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let r = 2 * self.n + 2;
        let mut m = vec![vec![0; r]; r];
        for j in 0..r {
            let img = self.apply(&DivisorClass::basis(r, j));
            for i in 0..r {
                m[i][j] = img.0[i];
            }
        }
        m
    }
}

pub fn conjugation(s: &SurfaceS) -> Conjugation {
    Conjugation { n: s.n }
}

fn conj_name(name: &str) -> String {
    match name.strip_suffix("bar") {
        Some(base) => base.to_string(),
        None => format!("{name}bar"),
    }
}

/// Checks every stated intersection datum of `S`.
pub fn validate_configuration(s: &SurfaceS) -> VerificationReport {
    let mut r = VerificationReport::new();
    let n = s.n as i64;
    let m = s.n + 1;
    let k = s.canonical();
    r.check("S.K^2", 8 - 2 * n, s.dot(k, k));
    r.check("S.K^2+rank", 10, s.dot(k, k) + s.rank() as i64);
    r.check("S.signature", format!("(1, {})", s.rank() - 1), {
        let (p, q, z) = signature(&s.surface.lattice().gram);
        if z == 0 {
            format!("({p}, {q})")
        } else {
            format!("({p}, {q}, degenerate {z})")
        }
    });
    for bar in [false, true] {
        for i in 1..=m {
            let c = s.cycle_curve(i, bar);
            let expected = if i == 1 {
                1 - n
            } else if i == m {
                -1
            } else {
                -2
            };
            r.check(format!("S.{}^2", c_name(i, bar)), expected, s.dot(&c, &c));
        }
    }
    let cyc = s.cycle_names();
    let len = cyc.len();
    r.check("S.cycle_length", 2 * n + 2, len);
    for a in 0..len {
        for b in a + 1..len {
            let adjacent = b == a + 1 || (a == 0 && b == len - 1);
            let ca = s.curve(&cyc[a]).expect("cycle");
            let cb = s.curve(&cyc[b]).expect("cycle");
            r.check(
                format!("S.{}.{}", cyc[a], cyc[b]),
                i64::from(adjacent),
                s.dot(ca, cb),
            );
        }
    }
    r.check(
        "S.cycle=-K",
        format!("{:?}", s.anticanonical().0),
        format!("{:?}", s.cycle_class().0),
    );
    for bar in [false, true] {
        for j in [1, 2] {
            let b = s.b(j, bar);
            r.check(format!("S.{}^2", b_name(j, bar)), -1, s.dot(&b, &b));
        }
    }
    r.check("S.B1.C2", 1, s.dot(&s.b(1, false), &s.c(2)));
    r.check("S.B1bar.C2bar", 1, s.dot(&s.b(1, true), &s.cbar(2)));
    r.check("S.B2.B1bar", 1, s.dot(&s.b(2, false), &s.b(1, true)));
    r.check("S.B2bar.B1", 1, s.dot(&s.b(2, true), &s.b(1, false)));
    r.check("S.B1.B2", 0, s.dot(&s.b(1, false), &s.b(2, false)));
    r.check("S.B1bar.B2bar", 0, s.dot(&s.b(1, true), &s.b(2, true)));
    for name in s.named_curves() {
        let c = s.curve(&name).expect("named");
        let g = s
            .surface
            .virtual_genus(c)
            .map(|g| g.to_string())
            .unwrap_or_else(|e| e.to_string());
        r.check(format!("S.genus({name})"), 0, g);
    }
    let sigma = conjugation(s);
    let rank = s.rank();
    let mut isometric = true;
    let mut involutive = true;
    for i in 0..rank {
        let ei = DivisorClass::basis(rank, i);
        involutive &= sigma.apply(&sigma.apply(&ei)) == ei;
        for j in 0..rank {
            let ej = DivisorClass::basis(rank, j);
            isometric &= s.dot(&ei, &ej) == s.dot(&sigma.apply(&ei), &sigma.apply(&ej));
        }
    }
    r.check("S.sigma.isometry", true, isometric);
    r.check("S.sigma.involution", true, involutive);
    r.check("S.sigma(K)=K", true, sigma.apply(k) == *k);
    let naming = s.named_curves().iter().all(|name| {
        let img = sigma.apply(s.curve(name).expect("named"));
        s.curve(&conj_name(name))
            .map(|c| *c == img)
            .unwrap_or(false)
    });
    r.check("S.sigma.naming", true, naming);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n4_numbers() {
        let s = build_surface_S(4).unwrap();
        assert_eq!(s.dot(&s.c(1), &s.c(1)), -3);
        assert_eq!(s.surface.k_squared(), 0);
        assert_eq!(s.dot(&s.c(1), &s.c(2)), 1);
    }

    #[test]
    fn n3_self_intersections() {
        let s = build_surface_S(3).unwrap();
        assert_eq!(s.surface.k_squared(), 2);
        assert_eq!(s.dot(&s.c(2), &s.c(2)), -2);
        assert_eq!(s.dot(&s.c(3), &s.c(3)), -2);
        assert_eq!(s.dot(&s.c(4), &s.c(4)), -1);
    }

    #[test]
    fn validation_passes_and_catches_corruption() {
        let s = build_surface_S(5).unwrap();
        let rep = validate_configuration(&s);
        assert!(rep.all_pass(), "{}", rep.to_text());
        let mut bad = s.clone();
        let mut b2 = bad.b(2, false);
        b2.0[0] += 1;
        bad.surface.track("B2", b2);
        let rep = validate_configuration(&bad);
        assert!(!rep.get("S.B2.B1bar").unwrap().pass || !rep.get("S.B2^2").unwrap().pass);
        assert!(!rep.all_pass());
    }

    #[test]
    fn conjugation_maps_c3() {
        let s = build_surface_S(5).unwrap();
        assert_eq!(conjugation(&s).apply(&s.c(3)), s.cbar(3));
    }

    #[test]
    fn explicit_classes_match_script() {
        let n = 5;
        let s = build_surface_S(n).unwrap();
        let e = |k: usize| s.surface.basis_class(&format!("e{k}")).unwrap();
        let f = |k: usize| s.surface.basis_class(&format!("f{k}")).unwrap();
        let a = s.surface.base_class(1, 0);
        let b = s.surface.base_class(0, 1);
        let mut c1 = a.clone();
        for k in 1..n {
            c1 = &c1 - &e(k);
        }
        assert_eq!(s.c(1), c1);
        for i in 2..=n {
            assert_eq!(s.c(i), &e(n + 1 - i) - &e(n + 2 - i));
        }
        assert_eq!(s.c(n + 1), &b - &e(1));
        assert_eq!(s.b(1, false), e(n));
        let mut b2 = &a + &b.scale(n as i64 - 1);
        for k in 1..n {
            b2 = &b2 - &e(k);
        }
        for k in 1..=n {
            b2 = &b2 - &f(k);
        }
        assert_eq!(s.b(2, false), b2);
    }

    #[test]
    fn rejects_small_n() {
        assert_eq!(build_surface_S(2), Err(LatticeError::BadN(2)));
    }
}
