//! Blow-ups of the quadric with tracked curve classes.

use super::{adjunction_genus, DivisorClass, Lattice, LatticeError};

/// Center of a blow-up: a point lying (smoothly) on the named tracked curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSpec {
    pub on_curves: Vec<String>,
    /// Name of the new basis class (e.g. `e3`).
    pub basis_label: String,
    /// If set, the exceptional curve is tracked under this name, so later
    /// centers may lie on it.
    pub track_as: Option<String>,
}

impl PointSpec {
    pub fn new(on: &[&str], basis_label: &str) -> Self {
        PointSpec {
            on_curves: on.iter().map(|s| s.to_string()).collect(),
            basis_label: basis_label.to_string(),
            track_as: None,
        }
    }

    pub fn tracked(mut self, name: &str) -> Self {
        self.track_as = Some(name.to_string());
        self
    }
}

/// `CP¹ × CP¹` blown up at a sequence of points. Basis: `A`, `B`, then one
/// exceptional class per blow-up in order; `A·B = 1`, `A² = B² = 0`,
/// `eᵢ² = -1`, all other pairings zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupSurface {
    basis: Vec<String>,
    history: Vec<PointSpec>,
    curves: Vec<(String, DivisorClass)>,
    canonical: DivisorClass,
}

impl BlowupSurface {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn history(&self) -> &[PointSpec] {
        &self.history
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn curves(&self) -> &[(String, DivisorClass)] {
        &self.curves
    }

    pub fn curve(&self, name: &str) -> Result<&DivisorClass, LatticeError> {
        self.curves
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c)
            .ok_or_else(|| LatticeError::UnknownCurve(name.to_string()))
    }

    /// Adds or replaces a tracked curve.
    pub fn track(&mut self, name: &str, class: DivisorClass) {
        assert_eq!(class.rank(), self.rank(), "rank mismatch");
        match self.curves.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = class,
            None => self.curves.push((name.to_string(), class)),
        }
    }

    /// Removes a tracked curve (used when renaming).
    pub fn untrack(&mut self, name: &str) -> Option<DivisorClass> {
        let i = self.curves.iter().position(|(n, _)| n == name)?;
        Some(self.curves.remove(i).1)
    }

    /// Class `a·A + b·B`.
    pub fn base_class(&self, a: i64, b: i64) -> DivisorClass {
        let mut v = vec![0; self.rank()];
        v[0] = a;
        v[1] = b;
        DivisorClass(v)
    }

    /// The basis class with the given label.
    pub fn basis_class(&self, label: &str) -> Option<DivisorClass> {
        self.basis
            .iter()
            .position(|n| n == label)
            .map(|i| DivisorClass::basis(self.rank(), i))
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64, LatticeError> {
        let r = self.rank();
        for c in [a, b] {
            if c.rank() != r {
                return Err(LatticeError::DimensionMismatch(c.rank(), r));
            }
        }
        let (x, y) = (&a.0, &b.0);
        let mut s = x[0] * y[1] + x[1] * y[0];
        for i in 2..r {
            s -= x[i] * y[i];
        }
        Ok(s)
    }

    pub fn self_intersection(&self, a: &DivisorClass) -> Result<i64, LatticeError> {
        self.intersect(a, a)
    }

    pub fn virtual_genus(&self, d: &DivisorClass) -> Result<i64, LatticeError> {
        adjunction_genus(self.intersect(d, d)?, self.intersect(&self.canonical, d)?)
    }

    pub fn k_squared(&self) -> i64 {
        self.intersect(&self.canonical, &self.canonical)
            .expect("same rank")
    }

    /// The intersection form as an explicit lattice.
    pub fn lattice(&self) -> Lattice {
        let r = self.rank();
        let mut gram = vec![vec![0; r]; r];
        gram[0][1] = 1;
        gram[1][0] = 1;
        for (i, row) in gram.iter_mut().enumerate().skip(2) {
            row[i] = -1;
        }
        Lattice {
            names: self.basis.clone(),
            gram,
        }
    }
}

/// The unblown quadric: rank 2, `K = -2A - 2B`, `K² = 8`.
pub fn new_base_quadric() -> BlowupSurface {
    BlowupSurface {
        basis: vec!["A".into(), "B".into()],
        history: vec![],
        curves: vec![],
        canonical: DivisorClass(vec![-2, -2]),
    }
}

/// Blows up one point. Every curve named in `p` loses one unit against the
/// new exceptional class; `K` gains it.
pub fn blow_up(s: &BlowupSurface, p: &PointSpec) -> Result<BlowupSurface, LatticeError> {
    for name in &p.on_curves {
        s.curve(name)?;
    }
    let mut out = BlowupSurface {
        basis: s.basis.clone(),
        history: s.history.clone(),
        curves: s
            .curves
            .iter()
            .map(|(n, c)| (n.clone(), c.extended()))
            .collect(),
        canonical: s.canonical.extended(),
    };
    out.basis.push(p.basis_label.clone());
    out.history.push(p.clone());
    let last = out.rank() - 1;
    for (name, class) in out.curves.iter_mut() {
        if p.on_curves.contains(name) {
            class.0[last] -= 1;
        }
    }
    out.canonical.0[last] += 1;
    if let Some(t) = &p.track_as {
        out.track(t, DivisorClass::basis(out.rank(), last));
    }
    Ok(out)
}

impl BlowupSurface {
    pub fn new_base_quadric() -> Self {
        new_base_quadric()
    }

    pub fn blow_up(&self, p: &PointSpec) -> Result<Self, LatticeError> {
        blow_up(self, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::signature;

    #[test]
    fn quadric_basics() {
        let q = new_base_quadric();
        let a = q.base_class(1, 0);
        let b = q.base_class(0, 1);
        assert_eq!(q.k_squared(), 8);
        assert_eq!(q.intersect(&a, &a), Ok(0));
        assert_eq!(q.intersect(&a, &b), Ok(1));
        assert_eq!(q.intersect(q.canonical(), &a), Ok(-2));
    }

    #[test]
    fn blowing_up_a_point_on_a_curve() {
        let mut q = new_base_quadric();
        q.track("C1", q.base_class(1, 0));
        let s = blow_up(&q, &PointSpec::new(&["C1"], "e1")).unwrap();
        let c1 = s.curve("C1").unwrap();
        assert_eq!(s.self_intersection(c1), Ok(-1));
        assert_eq!(s.k_squared(), 7);
        let s2 = blow_up(&s, &PointSpec::new(&[], "e2")).unwrap();
        assert_eq!(s2.k_squared(), 6);
        let e1 = s2.basis_class("e1").unwrap();
        let e2 = s2.basis_class("e2").unwrap();
        assert_eq!(s2.intersect(&e1, &e2), Ok(0));
        assert_eq!(s2.intersect(&e1, &e1), Ok(-1));
        assert_eq!(signature(&s2.lattice().gram), (1, 3, 0));
    }

    #[test]
    fn unknown_curve_is_rejected() {
        let q = new_base_quadric();
        assert_eq!(
            blow_up(&q, &PointSpec::new(&["X"], "e1")),
            Err(LatticeError::UnknownCurve("X".into()))
        );
    }

    #[test]
    fn dimension_mismatch() {
        let q = new_base_quadric();
        assert!(q
            .intersect(&DivisorClass(vec![1]), &q.base_class(1, 0))
            .is_err());
    }
}
