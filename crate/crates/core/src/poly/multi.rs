//! Sparse multivariate polynomials over the rationals.
//!
//! Binary operations on polynomials with different variable lists merge the
//! lists by name: the left operand's variables keep their order and any
//! variables only present on the right are appended in their own order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::rational::{fmt_rational, Rational};
use super::PolyError;

#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl PartialEq for MultiPoly {
    /// Equality as polynomials: variable lists are merged first.
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = align(self, other);
        a.terms == b.terms
    }
}

impl Eq for MultiPoly {}

fn align(a: &MultiPoly, b: &MultiPoly) -> (MultiPoly, MultiPoly) {
    if a.vars == b.vars {
        return (a.clone(), b.clone());
    }
    let mut vars = a.vars.clone();
    for v in &b.vars {
        if !vars.contains(v) {
            vars.push(v.clone());
        }
    }
    (a.extend_to(&vars), b.extend_to(&vars))
}

impl MultiPoly {
    /// The zero polynomial over `vars`.
    pub fn zero(vars: &[&str]) -> Self {
        MultiPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    /// A constant over `vars`.
    pub fn constant(vars: &[&str], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    /// The variable `name` over `vars`; `name` is appended if absent.
    pub fn var(vars: &[&str], name: &str) -> Self {
        let mut p = Self::zero(vars);
        let idx = p.index_or_push(name);
        let mut e = vec![0; p.vars.len()];
        e[idx] = 1;
        p.terms.insert(e, Rational::one());
        p
    }

    /// Single-variable shorthand for `var(&[name], name)`.
    pub fn x(name: &str) -> Self {
        Self::var(&[name], name)
    }

    /// Builds from explicit terms; zero coefficients are dropped and equal
    /// exponents summed.
    pub fn from_terms(
        vars: &[&str],
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent arity");
            p.add_term(e, c);
        }
        p
    }

    fn index_or_push(&mut self, name: &str) -> usize {
        if let Some(i) = self.vars.iter().position(|v| v == name) {
            return i;
        }
        self.vars.push(name.to_string());
        let old = std::mem::take(&mut self.terms);
        for (mut e, c) in old {
            e.push(0);
            self.terms.insert(e, c);
        }
        self.vars.len() - 1
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant value if the polynomial has no variable dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Rewrites over `vars`, which must contain every variable that occurs.
    pub fn with_vars(&self, vars: &[&str]) -> Result<Self, PolyError> {
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect();
        let mut out = Self::zero(vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => ne[j] = x,
                    None => return Err(PolyError::UnknownVariable(self.vars[i].clone())),
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    fn extend_to(&self, vars: &[String]) -> Self {
        let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        self.with_vars(&refs).expect("superset of variables")
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in one variable; `None` for the zero polynomial.
    pub fn degree_in(&self, var: &str) -> Option<u32> {
        let i = match self.vars.iter().position(|v| v == var) {
            Some(i) => i,
            None => return (!self.is_zero()).then_some(0),
        };
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return MultiPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::constant(&[], Rational::one()).extend_to(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Coefficients with respect to `var`, index = power. The returned
    /// polynomials keep the full variable list (with `var` at exponent 0).
    pub fn coeffs_in(&self, var: &str) -> Vec<MultiPoly> {
        let Some(i) = self.vars.iter().position(|v| v == var) else {
            return vec![self.clone()];
        };
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![
            MultiPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::new()
            };
            deg + 1
        ];
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let k = ne[i] as usize;
            ne[i] = 0;
            out[k].add_term(ne, c.clone());
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    /// Reassembles `Σ coeffs[k] * var^k`.
    pub fn from_coeffs_in(coeffs: &[MultiPoly], var: &str) -> Self {
        let mut acc = MultiPoly::zero(&[]);
        let x = MultiPoly::x(var);
        for (k, c) in coeffs.iter().enumerate() {
            acc = &acc + &(c * &x.pow(k as u32));
        }
        acc
    }

    pub fn derivative(&self, var: &str) -> Self {
        let mut out = MultiPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        let Some(i) = self.vars.iter().position(|v| v == var) else {
            return out;
        };
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, c * Rational::from_integer(e[i].into()));
        }
        out
    }

    /// Homomorphic substitution of variables by polynomials. Unbound variables
    /// are kept.
    pub fn substitute(&self, bindings: &HashMap<&str, MultiPoly>) -> Self {
        let mut cache: HashMap<(usize, u32), MultiPoly> = HashMap::new();
        let mut acc = MultiPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            let mut kept = vec![0; self.vars.len()];
            let mut factor = MultiPoly::constant(&[], c.clone());
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match bindings.get(self.vars[i].as_str()) {
                    Some(b) => {
                        let pw = cache.entry((i, x)).or_insert_with(|| b.pow(x));
                        factor = &factor * &*pw;
                    }
                    None => kept[i] = x,
                }
            }
            let mono = MultiPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::from([(kept, Rational::one())]),
            };
            acc = &acc + &(&factor * &mono);
        }
        acc
    }

    /// Substitutes rational values for some variables.
    pub fn partial_eval(&self, values: &HashMap<&str, Rational>) -> Self {
        let b: HashMap<&str, MultiPoly> = values
            .iter()
            .map(|(k, v)| (*k, MultiPoly::constant(&[], v.clone())))
            .collect();
        self.substitute(&b)
    }

    /// Full evaluation; every occurring variable must be bound.
    pub fn eval(&self, values: &HashMap<&str, Rational>) -> Result<Rational, PolyError> {
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let v = values
                    .get(self.vars[i].as_str())
                    .ok_or_else(|| PolyError::UnknownVariable(self.vars[i].clone()))?;
                t *= num_traits::pow(v.clone(), x as usize);
            }
            total += t;
        }
        Ok(total)
    }

    /// Evaluates at a point given in variable order.
    pub fn eval_at(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len(), "point arity");
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    t *= num_traits::pow(point[i].clone(), x as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Leading term under graded-lex order on the declared variable order.
    fn leading(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (mut rem, d) = align(self, d);
        let (de, dc) = {
            let (e, c) = d.leading()?;
            (e.clone(), c.clone())
        };
        let mut q = MultiPoly {
            vars: rem.vars.clone(),
            terms: BTreeMap::new(),
        };
        while let Some((re, rc)) = rem.leading() {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let c = rc / &dc;
            let mono = MultiPoly {
                vars: rem.vars.clone(),
                terms: BTreeMap::from([(e.clone(), c.clone())]),
            };
            rem = &rem - &(&mono * &d);
            q.add_term(e, c);
        }
        Some(q)
    }

    /// Terms in canonical order: graded-lex descending.
    pub fn sorted_terms(&self) -> Vec<(&Vec<u32>, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex(b.0, a.0));
        v
    }

    /// Canonical text: `coeff * var^e` terms in graded-lex descending order
    /// joined by ` + `; exponent 1 is not printed; the zero polynomial is `0`.
    pub fn to_canonical(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (e, c) in self.sorted_terms() {
            let mut s = fmt_rational(c);
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => s.push_str(&format!(" * {}", self.vars[i])),
                    _ => s.push_str(&format!(" * {}^{}", self.vars[i], x)),
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }

    /// Structured form: `[{"coeff": "p/q", "exp": [..]}]` in canonical order.
    pub fn terms_json(&self) -> Value {
        Value::Array(
            self.sorted_terms()
                .into_iter()
                .map(|(e, c)| json!({ "coeff": fmt_rational(c), "exp": e }))
                .collect(),
        )
    }
}

/// Graded lexicographic comparison (total degree, then lex with the first
/// variable most significant).
pub fn grlex(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical())
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let (mut a, b) = align(self, rhs);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let (mut a, b) = align(self, rhs);
        for (e, c) in b.terms {
            a.add_term(e, -c);
        }
        a
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let (a, b) = align(self, rhs);
        let mut out = MultiPoly {
            vars: a.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, rat};

    fn y(i: u32) -> MultiPoly {
        MultiPoly::var(&["y1", "y2"], &format!("y{i}"))
    }

    #[test]
    fn expansion_of_two_linear_factors() {
        let l3 = MultiPoly::constant(&[], int(1));
        let l4 = MultiPoly::constant(&[], int(2));
        let p = (&y(2) - &(&l3 * &y(1))) * (&y(2) - &(&l4 * &y(1)));
        let expected = MultiPoly::from_terms(
            &["y1", "y2"],
            [
                (vec![0, 2], int(1)),
                (vec![1, 1], int(-3)),
                (vec![2, 0], int(2)),
            ],
        );
        assert_eq!(p, expected);
    }

    #[test]
    fn canonical_text_is_grlex_descending() {
        let p = MultiPoly::from_terms(
            &["z1", "z2"],
            [
                (vec![0, 1], rat(1, 2)),
                (vec![2, 0], int(-3)),
                (vec![1, 1], int(1)),
                (vec![0, 0], int(7)),
            ],
        );
        assert_eq!(p.to_canonical(), "-3 * z1^2 + 1 * z1 * z2 + 1/2 * z2 + 7");
        assert_eq!(MultiPoly::zero(&["a"]).to_canonical(), "0");
    }

    #[test]
    fn monomial_substitution() {
        let z2 = MultiPoly::x("z2");
        let img = &y(1).pow(2) * &y(2);
        let b = HashMap::from([("z2", img)]);
        let got = z2.pow(2).substitute(&b);
        assert_eq!(got, &y(1).pow(4) * &y(2).pow(2));
    }

    #[test]
    fn merging_appends_new_variables() {
        let p = &MultiPoly::x("b") + &MultiPoly::x("a");
        assert_eq!(p.vars(), ["b", "a"]);
    }

    #[test]
    fn exact_division() {
        let a = &y(1) + &y(2);
        let b = &y(1) - &y(2);
        let p = &a * &b;
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!((&p + &y(1)).div_exact(&a), None);
    }

    #[test]
    fn coefficient_split_round_trips() {
        let p = (&y(1) * &y(2) + y(2).pow(3)).scale(&rat(2, 3));
        let cs = p.coeffs_in("y2");
        assert_eq!(cs.len(), 4);
        assert_eq!(MultiPoly::from_coeffs_in(&cs, "y2"), p);
    }
}
