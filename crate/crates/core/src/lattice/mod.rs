//! Picard lattices of rational surfaces.
//!
//! [`BlowupSurface`] tracks curve classes through point blow-ups of the
//! quadric; [`SurfaceS`] is the surface with its anticanonical cycle of
//! `2n + 2` curves; [`SurfaceT`] is the resolved minitwistor surface, given as
//! an abstract lattice.

mod blowup;
mod surface_s;
mod surface_t;

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::poly::{int, Rational};

pub use blowup::{blow_up, new_base_quadric, BlowupSurface, PointSpec};
pub use surface_s::{
    build_surface_S, c_name, conjugation, validate_configuration, Conjugation, SurfaceS,
};
pub use surface_t::{build_minitwistor_T, check_C0_numbers, validate_T, SurfaceT};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("class lengths differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("unknown curve {0}")]
    UnknownCurve(String),
    #[error("adjunction gives a half-integer genus (D^2 + K.D = {0})")]
    HalfIntegerGenus(i64),
    #[error("n = {0} is out of range (need n >= 3)")]
    BadN(usize),
}

/// Integer coefficient vector in a lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass(pub Vec<i64>);

impl DivisorClass {
    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![0; rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        DivisorClass(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn scale(&self, k: i64) -> Self {
        DivisorClass(self.0.iter().map(|x| x * k).collect())
    }

    /// Appends a zero coordinate (used after a blow-up).
    pub fn extended(&self) -> Self {
        let mut v = self.0.clone();
        v.push(0);
        DivisorClass(v)
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(-1)
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

/// A symmetric integer form on named basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub names: Vec<String>,
    pub gram: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64, LatticeError> {
        let r = self.rank();
        if a.rank() != r {
            return Err(LatticeError::DimensionMismatch(a.rank(), r));
        }
        if b.rank() != r {
            return Err(LatticeError::DimensionMismatch(b.rank(), r));
        }
        let mut s = 0;
        for i in 0..r {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..r {
                s += a.0[i] * self.gram[i][j] * b.0[j];
            }
        }
        Ok(s)
    }

    /// The basis vector called `name`.
    pub fn class_of(&self, name: &str) -> Option<DivisorClass> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| DivisorClass::basis(self.rank(), i))
    }

    pub fn determinant(&self) -> Rational {
        determinant(&self.gram)
    }

    pub fn signature(&self) -> (usize, usize, usize) {
        signature(&self.gram)
    }

    /// Solves `gram · x = rhs` exactly; `None` if singular or non-integral.
    pub fn solve_integral(&self, rhs: &[i64]) -> Option<DivisorClass> {
        let x = solve_rational(&self.gram, rhs)?;
        x.iter()
            .map(|v| {
                v.is_integer()
                    .then(|| i64::try_from(v.to_integer()).ok())
                    .flatten()
            })
            .collect::<Option<Vec<i64>>>()
            .map(DivisorClass)
    }
}

/// `1 + (D² + K·D)/2`, failing on odd `D² + K·D`.
pub fn adjunction_genus(d2: i64, kd: i64) -> Result<i64, LatticeError> {
    let s = d2 + kd;
    if s % 2 != 0 {
        return Err(LatticeError::HalfIntegerGenus(s));
    }
    Ok(1 + s / 2)
}

fn to_rational_matrix(m: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    m.iter()
        .map(|row| row.iter().map(|&x| int(x)).collect())
        .collect()
}

/// Exact determinant by Gaussian elimination over ℚ.
pub fn determinant(m: &[Vec<i64>]) -> Rational {
    let mut a = to_rational_matrix(m);
    let n = a.len();
    let mut det = int(1);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return int(0);
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= &a[k][k];
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

fn solve_rational(m: &[Vec<i64>], rhs: &[i64]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = to_rational_matrix(m);
    for (row, &r) in a.iter_mut().zip(rhs) {
        row.push(int(r));
    }
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(p, k);
        let piv = a[k][k].clone();
        for j in k..=n {
            a[k][j] = &a[k][j] / &piv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in k..=n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Inertia `(positive, negative, zero)` of a symmetric integer matrix, by
/// exact congruence diagonalization.
pub fn signature(m: &[Vec<i64>]) -> (usize, usize, usize) {
    let mut a = to_rational_matrix(m);
    let n = a.len();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            // Bring a nonzero diagonal into place, or create one from an
            // off-diagonal entry by adding a row/column.
            if let Some(p) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                a.swap(k, p);
                for row in a.iter_mut() {
                    row.swap(k, p);
                }
            } else if let Some(p) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                for j in 0..n {
                    let t = a[p][j].clone();
                    a[k][j] += t;
                }
                for i in 0..n {
                    let t = a[i][p].clone();
                    a[i][k] += t;
                }
            } else {
                zero += 1;
                k += 1;
                continue;
            }
        }
        let d = a[k][k].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &d;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
            for r in a.iter_mut().skip(k) {
                let t = &f * &r[k];
                r[i] -= t;
            }
        }
        k += 1;
    }
    (pos, neg, zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_of_hyperbolic_plane_plus_negatives() {
        let m = vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -1]];
        assert_eq!(signature(&m), (1, 2, 0));
        assert_eq!(determinant(&m), int(1));
        assert_eq!(signature(&[vec![0, 0], vec![0, 0]]), (0, 0, 2));
        assert_eq!(signature(&[vec![2, 1], vec![1, 2]]), (2, 0, 0));
    }

    #[test]
    fn solve_integral_on_unimodular() {
        let l = Lattice {
            names: vec!["a".into(), "b".into()],
            gram: vec![vec![0, 1], vec![1, 0]],
        };
        assert_eq!(
            l.solve_integral(&[-2, -2]),
            Some(DivisorClass(vec![-2, -2]))
        );
    }

    #[test]
    fn genus_parity() {
        assert_eq!(adjunction_genus(-2, 0), Ok(0));
        assert!(adjunction_genus(-1, 0).is_err());
    }
}
