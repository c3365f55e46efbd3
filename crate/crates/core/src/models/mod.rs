//! Explicit projective models: the minitwistor surface in `CP^{n+1}`, the
//! image `X` in `CP^{n+5}`, its fiberwise equations, the conic-bundle form on
//! the resolved minitwistor surface, the projection to the plane scroll, and
//! the derivation of the branch divisor.

mod derive;
mod equations;
mod slicing;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::poly::{fmt_rational, int, rat, MultiPoly, Rational, UniPoly};

pub use derive::{branch_polynomial, derive_branch, reduce_i, DerivedBranch};
pub use equations::{
    branch_ideal, conic_bundle_form, dehomogenization_report, elementary_symmetric, fiber_model,
    homogenize_fiber, minitwistor_ideal, minitwistor_quadric, model_X_ideal, mt_identity_holds,
    nt14_as_printed, project_f, scroll_image, scroll_relations, verify_mt_identity,
    ConicBundleForm,
};
pub use slicing::{degree_by_slicing, lift_to_X, sample_points_on_T, slice_eliminant};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("n = {0} is out of range (need n >= 3)")]
    BadN(usize),
    #[error("invalid lambdas: {0}")]
    Lambdas(String),
    #[error("g_hat has degree {0}, above n - 1 = {1}")]
    GHatDegree(usize, usize),
    #[error("|c|^2 = {0}, expected 1/4")]
    Normalization(String),
    #[error("c = 0 is not allowed")]
    ZeroC,
    #[error("c has nonzero imaginary part; the ideal has no rational form")]
    NonRealC,
    #[error("g_linear inconsistent with g_hat and c: {0}")]
    GLinear(String),
    #[error("the point lies in the projection center")]
    ProjectionCenter,
    #[error("point has length {0}, expected at least 9")]
    PointLength(usize),
    #[error("degree oracle supports n in {{3, 4}}, got {0}")]
    UnsupportedN(usize),
    #[error("no non-degenerate slice found after {0} attempts")]
    DegenerateSlice(usize),
}

/// Parameters of one twistor-space model: `n`, the roots `λ₃..λ_{n+1}` of
/// the reducible fibers (`λ₂ = 0` is implicit), the real polynomial `ĝ`, and
/// the coefficient `c = re + i·im` of `ξ₁` in `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelParams {
    pub n: usize,
    pub lambdas: Vec<Rational>,
    pub g_hat: UniPoly,
    pub c: (Rational, Rational),
}

impl ModelParams {
    /// Validates `n ≥ 3`, `n - 1` nonzero λ's strictly monotone away from 0
    /// and `deg ĝ ≤ n - 1`; `c` defaults to `1/2`.
    pub fn new(n: usize, lambdas: Vec<Rational>, g_hat: UniPoly) -> Result<Self, ModelError> {
        if n < 3 {
            return Err(ModelError::BadN(n));
        }
        if lambdas.len() != n - 1 {
            return Err(ModelError::Lambdas(format!(
                "expected {} values, got {}",
                n - 1,
                lambdas.len()
            )));
        }
        if lambdas.iter().any(|l| l.is_zero()) {
            return Err(ModelError::Lambdas(
                "zero is reserved for the second reducible fiber".into(),
            ));
        }
        let increasing = lambdas[0].is_positive() && lambdas.windows(2).all(|w| w[0] < w[1]);
        let decreasing = lambdas[0].is_negative() && lambdas.windows(2).all(|w| w[0] > w[1]);
        if !(increasing || decreasing) {
            return Err(ModelError::Lambdas(
                "need 0 < l3 < l4 < ... or 0 > l3 > l4 > ...".into(),
            ));
        }
        if let Some(d) = g_hat.degree() {
            if d > n - 1 {
                return Err(ModelError::GHatDegree(d, n - 1));
            }
        }
        Ok(ModelParams {
            n,
            lambdas,
            g_hat,
            c: (rat(1, 2), int(0)),
        })
    }

    /// Sets `c`, requiring the normalization `|c|² = 1/4`.
    pub fn with_c(self, re: Rational, im: Rational) -> Result<Self, ModelError> {
        let p = self.with_c_unnormalized(re, im)?;
        p.validate_normalization()?;
        Ok(p)
    }

    /// Sets any nonzero `c` (used for the `4|c|²` negative control).
    pub fn with_c_unnormalized(mut self, re: Rational, im: Rational) -> Result<Self, ModelError> {
        if re.is_zero() && im.is_zero() {
            return Err(ModelError::ZeroC);
        }
        self.c = (re, im);
        Ok(self)
    }

    pub fn c_norm_squared(&self) -> Rational {
        &self.c.0 * &self.c.0 + &self.c.1 * &self.c.1
    }

    pub fn validate_normalization(&self) -> Result<(), ModelError> {
        let nsq = self.c_norm_squared();
        if nsq != rat(1, 4) {
            return Err(ModelError::Normalization(fmt_rational(&nsq)));
        }
        Ok(())
    }

    /// Real `c`, as needed for a rational form of `g`.
    pub fn real_c(&self) -> Result<Rational, ModelError> {
        if !self.c.1.is_zero() {
            return Err(ModelError::NonRealC);
        }
        Ok(self.c.0.clone())
    }

    /// `∏ᵢ₌₃^{n+1} (λ - λᵢ)`.
    pub fn bracket(&self) -> UniPoly {
        UniPoly::from_roots(&self.lambdas)
    }

    /// `q(λ) = λ ∏ (λ - λᵢ)`, monic of degree `n`.
    pub fn q(&self) -> UniPoly {
        let mut roots = vec![int(0)];
        roots.extend(self.lambdas.iter().cloned());
        UniPoly::from_roots(&roots)
    }

    /// Coefficients of `g` on `z₁..z_{n+2}`:
    /// `Σ ĝ_{k-1} z_k + c z_{n+1} + c̄ z_{n+2}`. Requires real `c`.
    pub fn g_linear(&self) -> Result<Vec<Rational>, ModelError> {
        let c = self.real_c()?;
        let mut v: Vec<Rational> = (0..self.n).map(|k| self.g_hat.coeff(k)).collect();
        v.push(c.clone());
        v.push(c);
        Ok(v)
    }

    /// Checks a user-supplied linear form against `ĝ` and `c`.
    pub fn check_g_linear(&self, given: &[Rational]) -> Result<(), ModelError> {
        if given.len() != self.n + 2 {
            return Err(ModelError::GLinear(format!(
                "expected {} coefficients, got {}",
                self.n + 2,
                given.len()
            )));
        }
        let want = self.g_linear()?;
        for (k, (a, b)) in given.iter().zip(&want).enumerate() {
            if a != b {
                return Err(ModelError::GLinear(format!(
                    "coefficient of z{} is {}, expected {}",
                    k + 1,
                    fmt_rational(a),
                    fmt_rational(b)
                )));
            }
        }
        Ok(())
    }

    /// [`ModelParams::random`] from a ChaCha8 stream seeded with `seed`.
    pub fn seeded(n: usize, seed: u64) -> Result<Self, ModelError> {
        Self::random(n, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
    }

    /// Random valid parameters: increasing positive λ's and a random `ĝ` of
    /// exact degree `n - 1`; `c = 1/2`.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Result<Self, ModelError> {
        let mut lambdas = Vec::with_capacity(n - 1);
        let mut cur = int(0);
        for _ in 0..n.saturating_sub(1) {
            cur += Rational::new(rng.gen_range(1..=12).into(), rng.gen_range(1..=4).into());
            lambdas.push(cur.clone());
        }
        let mut coeffs: Vec<Rational> = (0..n).map(|_| random_rational(rng)).collect();
        if coeffs[n - 1].is_zero() {
            coeffs[n - 1] = Rational::one();
        }
        ModelParams::new(n, lambdas, UniPoly::new(coeffs))
    }
}

/// A small random rational `p/q` with `|p| ≤ 9`, `1 ≤ q ≤ 5`.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=5).into())
}

/// A small random nonzero rational.
pub fn random_nonzero<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let r = random_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Tagged generators over a declared variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub variables: Vec<String>,
    pub generators: Vec<(String, MultiPoly)>,
}

impl Ideal {
    pub fn new(variables: Vec<String>) -> Self {
        Ideal {
            variables,
            generators: vec![],
        }
    }

    fn push(&mut self, tag: impl Into<String>, p: MultiPoly) {
        let vars: Vec<&str> = self.variables.iter().map(|s| s.as_str()).collect();
        let p = p
            .with_vars(&vars)
            .expect("generator uses declared variables");
        assert!(!p.is_zero(), "zero generator");
        self.generators.push((tag.into(), p));
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn get(&self, tag: &str) -> Option<&MultiPoly> {
        self.generators
            .iter()
            .find(|(t, _)| t == tag)
            .map(|(_, p)| p)
    }

    /// True iff every generator vanishes at `point` (given in variable order).
    pub fn vanishes_at(&self, point: &[Rational]) -> bool {
        self.generators
            .iter()
            .all(|(_, p)| p.eval_at(point).is_zero())
    }

    /// `{ "variables": [...], "generators": [{ "tag": ..., "terms": [...] }] }`.
    pub fn to_json(&self) -> Value {
        json!({
            "variables": self.variables,
            "generators": self
                .generators
                .iter()
                .map(|(t, p)| json!({ "tag": t, "terms": p.terms_json() }))
                .collect::<Vec<_>>(),
        })
    }

    /// One `tag: polynomial` line per generator.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (t, p) in &self.generators {
            s.push_str(&format!("{t}: {}\n", p.to_canonical()));
        }
        s
    }
}

pub(crate) fn z(k: usize) -> String {
    format!("z{k}")
}

pub(crate) fn zvars(m: usize) -> Vec<String> {
    (1..=m).map(z).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(3, lam(&[1, 2]), UniPoly::zero()).is_ok());
        assert!(ModelParams::new(3, lam(&[-1, -2]), UniPoly::zero()).is_ok());
        assert_eq!(
            ModelParams::new(2, lam(&[1]), UniPoly::zero()),
            Err(ModelError::BadN(2))
        );
        assert!(ModelParams::new(3, lam(&[2, 1]), UniPoly::zero()).is_err());
        assert!(ModelParams::new(3, lam(&[1, 1]), UniPoly::zero()).is_err());
        assert!(ModelParams::new(3, lam(&[0, 1]), UniPoly::zero()).is_err());
        assert!(ModelParams::new(3, lam(&[-1, 2]), UniPoly::zero()).is_err());
        let cubic = UniPoly::new(lam(&[0, 0, 0, 1]));
        assert_eq!(
            ModelParams::new(3, lam(&[1, 2]), cubic),
            Err(ModelError::GHatDegree(3, 2))
        );
    }

    #[test]
    fn normalization() {
        let p = ModelParams::new(3, lam(&[1, 2]), UniPoly::zero()).unwrap();
        assert!(p.validate_normalization().is_ok());
        assert!(p.clone().with_c(int(0), rat(1, 2)).is_ok());
        assert!(p.clone().with_c(rat(3, 10), rat(2, 5)).is_ok());
        assert!(p.clone().with_c(int(1), int(0)).is_err());
        assert_eq!(
            p.clone().with_c_unnormalized(int(0), int(0)),
            Err(ModelError::ZeroC)
        );
        assert_eq!(
            p.with_c(int(0), rat(1, 2)).unwrap().g_linear(),
            Err(ModelError::NonRealC)
        );
    }

    #[test]
    fn g_linear_consistency() {
        let p = ModelParams::new(3, lam(&[1, 2]), UniPoly::new(lam(&[5, 0, -1]))).unwrap();
        let g = p.g_linear().unwrap();
        assert_eq!(g, vec![int(5), int(0), int(-1), rat(1, 2), rat(1, 2)]);
        assert!(p.check_g_linear(&g).is_ok());
        let mut bad = g.clone();
        bad[1] = int(1);
        assert!(p.check_g_linear(&bad).is_err());
    }

    #[test]
    fn q_is_monic_degree_n() {
        let p = ModelParams::new(4, lam(&[1, 2, 3]), UniPoly::zero()).unwrap();
        assert_eq!(p.q().degree(), Some(4));
        assert_eq!(p.q().lc(), int(1));
        assert_eq!(p.q().eval(&int(0)), int(0));
    }
}
