//! Resultants and discriminants by fraction-free (Bareiss) elimination of the
//! Sylvester matrix.

use num_traits::{One, Zero};

use super::multi::MultiPoly;
use super::rational::Rational;
use super::uni::UniPoly;

/// Determinant of a square matrix of polynomials via Bareiss elimination.
/// All divisions are exact by Sylvester's identity.
pub fn bareiss_det(mut m: Vec<Vec<MultiPoly>>) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::constant(&[], Rational::one());
    }
    let mut sign = Rational::one();
    let mut prev = MultiPoly::constant(&[], Rational::one());
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return MultiPoly::zero(&[]),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = MultiPoly::zero(&[]);
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].scale(&sign)
}

/// Resultant of `p` and `q` with respect to `var`. The coefficients may
/// involve any other variables.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: &str) -> MultiPoly {
    let a = p.coeffs_in(var);
    let b = q.coeffs_in(var);
    if a.is_empty() || b.is_empty() {
        return MultiPoly::zero(&[]);
    }
    let (m, n) = (a.len() - 1, b.len() - 1);
    if m == 0 && n == 0 {
        return MultiPoly::constant(&[], Rational::one());
    }
    if m == 0 {
        return a[0].pow(n as u32);
    }
    if n == 0 {
        return b[0].pow(m as u32);
    }
    let size = m + n;
    let zero = MultiPoly::zero(&[]);
    let mut mat = vec![vec![zero; size]; size];
    // Rows hold coefficients from the leading one down.
    for r in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            mat[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            mat[n + r][r + k] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Discriminant `(-1)^{d(d-1)/2} res(p, ∂p) / lc(p)` with respect to `var`.
pub fn discriminant(p: &MultiPoly, var: &str) -> MultiPoly {
    let cs = p.coeffs_in(var);
    let d = cs.len().saturating_sub(1);
    if d == 0 {
        return MultiPoly::zero(&[]);
    }
    let res = resultant(p, &p.derivative(var), var);
    let lc = cs.last().expect("nonempty");
    let quo = res
        .div_exact(lc)
        .expect("leading coefficient divides res(p, p')");
    if (d * (d - 1) / 2) % 2 == 1 {
        -quo
    } else {
        quo
    }
}

/// Resultant of two univariate rational polynomials.
pub fn resultant_uni(p: &UniPoly, q: &UniPoly) -> Rational {
    resultant(&p.to_multi("x"), &q.to_multi("x"), "x")
        .as_constant()
        .unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::int;

    #[test]
    fn resultant_is_evaluation_for_linear_factor() {
        let x = MultiPoly::x("x");
        let a = MultiPoly::x("a");
        let b = MultiPoly::x("b");
        let p = &x.pow(2) - &a;
        let q = &x - &b;
        assert_eq!(resultant(&p, &q, "x"), &b.pow(2) - &a);
    }

    #[test]
    fn quadratic_discriminant() {
        let x = MultiPoly::x("x");
        let (c, w, d) = (MultiPoly::x("c"), MultiPoly::x("w"), MultiPoly::x("d"));
        let p = &(&(&c * &x.pow(2)) - &(&w * &x)) + &d;
        let expected = &w.pow(2) - &(&c * &d).scale(&int(4));
        assert_eq!(discriminant(&p, "x"), expected);
    }

    #[test]
    fn swap_sign() {
        let p = UniPoly::from_roots(&[int(1), int(2)]);
        let q = UniPoly::from_roots(&[int(3), int(-1), int(5)]);
        let r1 = resultant_uni(&p, &q);
        let r2 = resultant_uni(&q, &p);
        // (-1)^{2*3} = 1
        assert_eq!(r1, r2);
        // Product over roots: ∏ q(αᵢ) for monic p.
        assert_eq!(r1, q.eval(&int(1)) * q.eval(&int(2)));
    }
}
