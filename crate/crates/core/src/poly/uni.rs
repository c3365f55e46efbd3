//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::multi::MultiPoly;
use super::rational::{fmt_rational, Rational};
use super::PolyError;

/// Coefficients in ascending degree; trailing zeros trimmed, zero is empty.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monic linear polynomial `x - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    /// `∏ (x - rᵢ)`.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, r| &acc * &Self::linear_root(r))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Rational::one() / self.lc()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer((k as i64).into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `p(q(x))`.
    pub fn compose(&self, q: &UniPoly) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &Self::constant(c.clone());
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.coeffs.clone();
        let lc = d.lc();
        let n = self.coeffs.len();
        if n <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    /// Exact quotient; `None` when the remainder is nonzero.
    pub fn div_exact(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = Rational::one() / r0.lc();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse modulo `m` when `gcd(self, m) = 1`.
    pub fn inverse_mod(&self, m: &UniPoly) -> Option<UniPoly> {
        let (g, s, _) = self.ext_gcd(m);
        (g.degree() == Some(0)).then(|| s.rem(m))
    }

    /// Embeds as a polynomial in the variable `var`.
    pub fn to_multi(&self, var: &str) -> MultiPoly {
        MultiPoly::from_terms(
            &[var],
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (vec![k as u32], c.clone())),
        )
    }

    /// Reads a polynomial that depends on `var` only.
    pub fn from_multi(p: &MultiPoly, var: &str) -> Result<UniPoly, PolyError> {
        let q = p.with_vars(&[var])?;
        let deg = q.degree_in(var).unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (e, c) in q.terms() {
            coeffs[e[0] as usize] = c.clone();
        }
        Ok(UniPoly::new(coeffs))
    }

    /// Canonical text in the variable `var` (same format as `MultiPoly`).
    pub fn to_canonical(&self, var: &str) -> String {
        self.to_multi(var).to_canonical()
    }

    /// Float coefficients (ascending).
    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(super::rational::to_f64).collect()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(fmt_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Output of Yun's algorithm: `p = lc · ∏ fᵢ^{mᵢ}` with monic, squarefree,
/// pairwise coprime `fᵢ` and strictly increasing `mᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareFree {
    pub lc: Rational,
    pub factors: Vec<(UniPoly, u32)>,
}

impl SquareFree {
    /// Re-expands the decomposition.
    pub fn expand(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::constant(self.lc.clone()), |acc, (f, m)| {
                &acc * &f.pow(*m)
            })
    }

    /// Product of the factors with odd multiplicity.
    pub fn odd_part(&self) -> UniPoly {
        self.factors
            .iter()
            .filter(|(_, m)| m % 2 == 1)
            .fold(UniPoly::one(), |acc, (f, _)| &acc * f)
    }
}

/// Yun's square-free decomposition over ℚ; errors on the zero polynomial.
pub fn squarefree_decomposition(p: &UniPoly) -> Result<SquareFree, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let lc = p.lc();
    let a = p.monic();
    let mut factors = Vec::new();
    if a.degree() == Some(0) {
        return Ok(SquareFree { lc, factors });
    }
    let da = a.derivative();
    let b = a.gcd(&da);
    let mut c = a.div_exact(&b).expect("gcd divides");
    let mut d = &da.div_exact(&b).expect("gcd divides") - &c.derivative();
    let mut i = 1u32;
    while c.degree() != Some(0) {
        let g = c.gcd(&d);
        if g.degree().unwrap_or(0) > 0 {
            factors.push((g.clone(), i));
        }
        c = c.div_exact(&g).expect("gcd divides");
        d = &d.div_exact(&g).expect("gcd divides") - &c.derivative();
        i += 1;
    }
    Ok(SquareFree { lc, factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, rat};

    fn up(cs: &[i64]) -> UniPoly {
        UniPoly::new(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn yun_on_repeated_root() {
        let p = &UniPoly::from_roots(&[int(1), int(1)]) * &UniPoly::linear_root(&int(-2));
        let sf = squarefree_decomposition(&p).unwrap();
        assert_eq!(sf.factors, vec![(up(&[2, 1]), 1), (up(&[-1, 1]), 2)]);
        assert_eq!(sf.expand(), p);
    }

    #[test]
    fn squarefree_input_is_returned_whole() {
        let p = up(&[0, -2, 3, 7]);
        let sf = squarefree_decomposition(&p).unwrap();
        assert_eq!(sf.factors.len(), 1);
        assert_eq!(sf.factors[0].1, 1);
        assert_eq!(sf.expand(), p);
    }

    #[test]
    fn zero_is_an_error() {
        assert!(squarefree_decomposition(&UniPoly::zero()).is_err());
    }

    #[test]
    fn division_and_gcd() {
        let a = UniPoly::from_roots(&[int(1), int(2), rat(1, 3)]);
        let b = UniPoly::from_roots(&[int(2), int(5)]);
        assert_eq!(a.gcd(&b), UniPoly::linear_root(&int(2)));
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        let inv = UniPoly::linear_root(&int(3)).inverse_mod(&b).unwrap();
        assert_eq!(
            (&inv * &UniPoly::linear_root(&int(3))).rem(&b),
            UniPoly::one()
        );
    }
}
