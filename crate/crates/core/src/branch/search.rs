//! Search for rational `ĝ` with `ĝ² - q` of genus 0.
//!
//! Floats find, rationals verify. A damped minimum-norm Gauss–Newton
//! iteration solves `ĝ² - q = r²h` (`r` monic of degree `n - 2`, `deg h ≤ 2`)
//! coefficientwise from a seeded start. The float solution is then turned
//! into an exact candidate, whose genus is recomputed over `ℚ`:
//!
//! 1. rounding every coefficient of `ĝ` to a nearby rational;
//! 2. for `deg r ≤ 2`, snapping `r` to a nearby rational polynomial for which
//!    `q` has a square root modulo `r`, then lifting that root modulo `r²`;
//! 3. optionally, a split covering `ĝ = (u + v)/2` from a factorization
//!    `q = uv`, chosen closest to the float solution.
//!
//! Only the exact genus decides admissibility.

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{is_admissible, BranchAnalysis};
use crate::models::ModelParams;
use crate::poly::{approximate, rational_sqrt, to_f64, Rational, UniPoly};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SearchError {
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error("seed {seed}: no convergence (residual {residual:e})")]
    NoConvergence { seed: u64, residual: f64 },
    #[error("seed {seed}: converged, but no exact candidate has genus 0 (rounded genus {genus})")]
    RoundingSpoiled { seed: u64, genus: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMethod {
    Rounding,
    HenselSnap,
    Split,
}

impl SearchMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchMethod::Rounding => "rounding",
            SearchMethod::HenselSnap => "hensel-snap",
            SearchMethod::Split => "split",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub max_iters: usize,
    /// Denominator bound when rounding `ĝ`.
    pub max_den: i64,
    /// Half-width of the window searched around each float coefficient of `r`.
    pub snap_window: f64,
    /// Denominator bound for snapped coefficients of `r`.
    pub snap_max_den: i64,
    pub allow_split: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_iters: 200,
            max_den: 1000,
            snap_window: 1.0,
            snap_max_den: 12,
            allow_split: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AdmissibleCandidate {
    pub seed: u64,
    pub params: ModelParams,
    /// Sup-norm residual of the float solution.
    pub residual: f64,
    pub iterations: usize,
    pub method: SearchMethod,
    pub analysis: BranchAnalysis,
}

impl AdmissibleCandidate {
    pub fn g_hat(&self) -> &UniPoly {
        &self.params.g_hat
    }
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Unknowns `x = (ĝ₀..ĝ_{n-1}, r₀..r_{n-3}, h₀, h₁, h₂)`.
struct System {
    n: usize,
    q: Vec<f64>,
}

impl System {
    fn split<'a>(&self, x: &'a [f64]) -> (&'a [f64], Vec<f64>, &'a [f64]) {
        let n = self.n;
        let mut r = x[n..2 * n - 2].to_vec();
        r.push(1.0);
        (&x[..n], r, &x[2 * n - 2..])
    }

    fn eqs(&self) -> usize {
        2 * self.n - 1
    }

    fn residual(&self, x: &[f64]) -> DVector<f64> {
        let (g, r, h) = self.split(x);
        let g2 = poly_mul(g, g);
        let r2h = poly_mul(&poly_mul(&r, &r), h);
        DVector::from_fn(self.eqs(), |k, _| {
            g2.get(k).copied().unwrap_or(0.0)
                - self.q.get(k).copied().unwrap_or(0.0)
                - r2h.get(k).copied().unwrap_or(0.0)
        })
    }

    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.n;
        let (g, r, h) = self.split(x);
        let rh = poly_mul(&r, h);
        let r2 = poly_mul(&r, &r);
        let mut j = DMatrix::zeros(self.eqs(), x.len());
        let mut put = |col: usize, shift: usize, p: &[f64], s: f64| {
            for (k, v) in p.iter().enumerate() {
                if k + shift < self.eqs() {
                    j[(k + shift, col)] += s * v;
                }
            }
        };
        for k in 0..n {
            put(k, k, g, 2.0);
        }
        for k in 0..n - 2 {
            put(n + k, k, &rh, -2.0);
        }
        for k in 0..3 {
            put(2 * n - 2 + k, k, &r2, -1.0);
        }
        j
    }
}

fn sup(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Levenberg-damped minimum-norm Gauss–Newton: `(JJᵀ + μI)y = F`, `Δ = -Jᵀy`.
fn newton(sys: &System, mut x: Vec<f64>, tol: f64, max_iters: usize) -> (Vec<f64>, f64, usize) {
    let mut mu = 1e-3;
    let mut f = sys.residual(&x);
    for it in 0..max_iters {
        let res = sup(&f);
        if res < tol {
            return (x, res, it);
        }
        let j = sys.jacobian(&x);
        let a = &j * j.transpose() + DMatrix::identity(sys.eqs(), sys.eqs()) * mu;
        let Some(y) = a.lu().solve(&f) else {
            mu *= 10.0;
            continue;
        };
        let dx = -(j.transpose() * y);
        let trial: Vec<f64> = x.iter().zip(dx.iter()).map(|(a, b)| a + b).collect();
        let ft = sys.residual(&trial);
        if ft.norm() < f.norm() {
            x = trial;
            f = ft;
            mu = (mu * 0.3).max(1e-15);
        } else {
            mu *= 10.0;
        }
    }
    let res = sup(&f);
    (x, res, max_iters)
}

/// Rationals with denominator at most `max_den` within `window` of `x`,
/// nearest first.
fn nearby_rationals(x: f64, window: f64, max_den: i64) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    for d in 1..=max_den {
        let lo = ((x - window) * d as f64).ceil() as i64;
        let hi = ((x + window) * d as f64).floor() as i64;
        for k in lo..=hi {
            out.push(Rational::new(k.into(), d.into()));
        }
    }
    out.sort();
    out.dedup();
    out.sort_by(|a, b| (to_f64(a) - x).abs().total_cmp(&(to_f64(b) - x).abs()));
    out
}

/// Square roots of `q` modulo monic `r` of degree 1 or 2, as polynomials of
/// degree below `deg r`.
fn sqrt_mod(q: &UniPoly, r: &UniPoly) -> Vec<UniPoly> {
    let rem = q.rem(r);
    let mut roots = Vec::new();
    match r.degree() {
        Some(1) => {
            if let Some(s) = rational_sqrt(&rem.coeff(0)) {
                roots.push(UniPoly::constant(s));
            }
        }
        Some(2) => {
            // (uλ + v)² ≡ αλ + β mod λ² + bλ + c means 2uv - bu² = α and
            // v² - cu² = β; with t = u² this is
            // (b² - 4c)t² + (2αb - 4β)t + α² = 0.
            let (b, c) = (r.coeff(1), r.coeff(0));
            let (alpha, beta) = (rem.coeff(1), rem.coeff(0));
            let two = Rational::from_integer(2.into());
            let four = Rational::from_integer(4.into());
            let qa = &b * &b - &four * &c;
            let qb = &two * &alpha * &b - &four * &beta;
            let qc = &alpha * &alpha;
            let mut ts = Vec::new();
            if qa.is_zero() {
                if !qb.is_zero() {
                    ts.push(-&qc / &qb);
                }
            } else if let Some(s) = rational_sqrt(&(&qb * &qb - &four * &qa * &qc)) {
                ts.push((-&qb + &s) / (&two * &qa));
                ts.push((-&qb - &s) / (&two * &qa));
            }
            for t in ts {
                if t.is_negative() {
                    continue;
                }
                if t.is_zero() {
                    if alpha.is_zero() {
                        if let Some(v) = rational_sqrt(&beta) {
                            roots.push(UniPoly::constant(v));
                        }
                    }
                    continue;
                }
                if let Some(u) = rational_sqrt(&t) {
                    let v = (&alpha + &b * &t) / (&two * &u);
                    roots.push(UniPoly::new(vec![v, u]));
                }
            }
        }
        _ => {}
    }
    roots.retain(|s| (&s.pow(2) - q).rem(r).is_zero());
    roots
}

/// Lifts `s₀² ≡ q (mod r)` to `ĝ` with `ĝ² ≡ q (mod r²)`; `top` is the
/// coefficient of `r²` when the degree bound leaves room for it.
fn hensel_lift(q: &UniPoly, r: &UniPoly, s0: &UniPoly, top: Option<Rational>) -> Option<UniPoly> {
    let e = (q - &s0.pow(2)).div_exact(r)?;
    let inv = s0.scale(&Rational::from_integer(2.into())).inverse_mod(r)?;
    let s1 = (&e * &inv).rem(r);
    let mut g = s0 + &(r * &s1);
    if let Some(t) = top {
        g = &g + &r.pow(2).scale(&t);
    }
    Some(g)
}

fn analyse(n: usize, lambdas: &[Rational], g: UniPoly) -> Option<(ModelParams, BranchAnalysis)> {
    let p = ModelParams::new(n, lambdas.to_vec(), g).ok()?;
    let a = is_admissible(&p).ok()?;
    Some((p, a))
}

/// Looks for an admissible `ĝ` from one seed. `tol` bounds the sup-norm of
/// the float residual; `tol ≤ 0` can never be met.
pub fn find_admissible_g(
    n: usize,
    lambdas: &[Rational],
    seed: u64,
    tol: f64,
) -> Result<AdmissibleCandidate, SearchError> {
    find_admissible_g_with(n, lambdas, seed, tol, &SearchOptions::default())
}

pub fn find_admissible_g_with(
    n: usize,
    lambdas: &[Rational],
    seed: u64,
    tol: f64,
    opts: &SearchOptions,
) -> Result<AdmissibleCandidate, SearchError> {
    let base = ModelParams::new(n, lambdas.to_vec(), UniPoly::zero())
        .map_err(|e| SearchError::BadInput(e.to_string()))?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(SearchError::NoConvergence {
            seed,
            residual: f64::INFINITY,
        });
    }
    let q = base.q();
    let sys = System { n, q: q.to_f64() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0: Vec<f64> = (0..2 * n + 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let (x, residual, iterations) = newton(&sys, x0, tol, opts.max_iters);
    if residual.is_nan() || residual >= tol {
        return Err(SearchError::NoConvergence { seed, residual });
    }
    let done = |params, analysis, method| AdmissibleCandidate {
        seed,
        params,
        residual,
        iterations,
        method,
        analysis,
    };

    let g_float = &x[..n];
    let rounded = UniPoly::new(
        g_float
            .iter()
            .map(|&c| approximate(c, opts.max_den))
            .collect(),
    );
    let (rp, ra) = analyse(n, lambdas, rounded)
        .ok_or_else(|| SearchError::BadInput("rounded g_hat".into()))?;
    if ra.admissible {
        return Ok(done(rp, ra, SearchMethod::Rounding));
    }
    let rounded_genus = ra.genus();

    let d = n - 2;
    if d <= 2 {
        let r_float: Vec<f64> = x[n..2 * n - 2].to_vec();
        let grids: Vec<Vec<Rational>> = r_float
            .iter()
            .map(|&c| nearby_rationals(c, opts.snap_window, opts.snap_max_den))
            .collect();
        let top = (n - 1 == 2 * d).then(|| approximate(g_float[n - 1], opts.snap_max_den));
        let mut pairs: Vec<(f64, Vec<Rational>)> = Vec::new();
        if d == 1 {
            for a in &grids[0] {
                pairs.push(((to_f64(a) - r_float[0]).abs(), vec![a.clone()]));
            }
        } else {
            for a in &grids[0] {
                for b in &grids[1] {
                    let dist = (to_f64(a) - r_float[0]).powi(2) + (to_f64(b) - r_float[1]).powi(2);
                    pairs.push((dist, vec![a.clone(), b.clone()]));
                }
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        // A split covering is kept only as a fallback to a genuine snap.
        let mut split_hit = None;
        for (_, mut coeffs) in pairs {
            coeffs.push(Rational::one());
            let r = UniPoly::new(coeffs);
            for s0 in sqrt_mod(&q, &r) {
                let Some(g) = hensel_lift(&q, &r, &s0, top.clone()) else {
                    continue;
                };
                if let Some((p, a)) = analyse(n, lambdas, g) {
                    if a.admissible && !a.split() {
                        return Ok(done(p, a, SearchMethod::HenselSnap));
                    }
                    if a.admissible && split_hit.is_none() {
                        split_hit = Some((p, a));
                    }
                }
            }
        }
        if let Some((p, a)) = split_hit {
            return Ok(done(p, a, SearchMethod::HenselSnap));
        }
    }

    if opts.allow_split {
        let mut roots = vec![Rational::zero()];
        roots.extend(lambdas.iter().cloned());
        let scalars = [1i64, -1, 2, -2].map(|k| Rational::from_integer(k.into()));
        let halves = scalars
            .clone()
            .map(|k| k / Rational::from_integer(2.into()));
        let mut best: Option<(f64, UniPoly)> = None;
        for mask in 1u32..(1 << n) - 1 {
            let (ins, outs): (Vec<_>, Vec<_>) = roots
                .iter()
                .enumerate()
                .partition(|(i, _)| mask & (1 << i) != 0);
            let u0 =
                UniPoly::from_roots(&ins.into_iter().map(|(_, x)| x.clone()).collect::<Vec<_>>());
            let v0 =
                UniPoly::from_roots(&outs.into_iter().map(|(_, x)| x.clone()).collect::<Vec<_>>());
            for k in scalars.iter().chain(halves.iter()) {
                let u = u0.scale(k);
                let v = v0.scale(&(Rational::one() / k));
                let g = (&u + &v).scale(&Rational::new(1.into(), 2.into()));
                if g.degree().unwrap_or(0) > n - 1 {
                    continue;
                }
                let dist: f64 = (0..n)
                    .map(|i| (to_f64(&g.coeff(i)) - g_float[i]).powi(2))
                    .sum();
                if best.as_ref().is_none_or(|(bd, _)| dist < *bd) {
                    best = Some((dist, g));
                }
            }
        }
        if let Some((_, g)) = best {
            if let Some((p, a)) = analyse(n, lambdas, g) {
                if a.admissible {
                    return Ok(done(p, a, SearchMethod::Split));
                }
            }
        }
    }
    Err(SearchError::RoundingSpoiled {
        seed,
        genus: rounded_genus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn lam(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn zero_tolerance_never_converges() {
        assert!(matches!(
            find_admissible_g(3, &lam(&[1, 2]), 0, 0.0),
            Err(SearchError::NoConvergence { .. })
        ));
    }

    #[test]
    fn bad_input() {
        assert!(matches!(
            find_admissible_g(3, &lam(&[2, 1]), 0, 1e-9),
            Err(SearchError::BadInput(_))
        ));
    }

    #[test]
    fn newton_converges_for_n4() {
        let sys = System {
            n: 4,
            q: UniPoly::from_roots(&lam(&[0, 1, 2, 3])).to_f64(),
        };
        let ok = (0..32u64).any(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x0: Vec<f64> = (0..9).map(|_| rng.gen_range(-2.0..2.0)).collect();
            newton(&sys, x0, 1e-9, 200).1 < 1e-9
        });
        assert!(ok);
    }

    #[test]
    fn sqrt_mod_quadratic() {
        // q ≡ (λ + 1)² mod r is built in by choosing q = (λ + 1)² + r·k.
        let r = UniPoly::new(vec![int(2), int(-3), int(1)]);
        let s = UniPoly::new(vec![int(1), int(1)]);
        let q = &s.pow(2) + &(&r * &UniPoly::new(vec![int(5), int(1)]));
        let roots = sqrt_mod(&q, &r);
        assert!(roots.contains(&s) || roots.contains(&-&s), "{roots:?}");
        let g = hensel_lift(&q, &r, &roots[0], None).unwrap();
        assert!((&g.pow(2) - &q).rem(&r.pow(2)).is_zero());
    }

    #[test]
    fn nearby_rationals_are_sorted() {
        let v = nearby_rationals(0.34, 0.1, 3);
        assert_eq!(v[0], rat(1, 3));
        assert!(v.iter().all(|x| (to_f64(x) - 0.34).abs() <= 0.1 + 1e-12));
    }

    #[test]
    fn n3_only_split_solutions() {
        let c = find_admissible_g(3, &lam(&[1, 2]), 0, 1e-9).unwrap();
        assert!(c.analysis.admissible);
        assert_eq!(c.method, SearchMethod::Split);
        let strict = SearchOptions {
            allow_split: false,
            ..SearchOptions::default()
        };
        assert!(matches!(
            find_admissible_g_with(3, &lam(&[1, 2]), 0, 1e-9, &strict),
            Err(SearchError::RoundingSpoiled { .. })
        ));
    }

    #[test]
    fn n4_non_split_candidate() {
        let strict = SearchOptions {
            allow_split: false,
            ..SearchOptions::default()
        };
        let found = (0..32u64)
            .find_map(|s| find_admissible_g_with(4, &lam(&[1, 2, 3]), s, 1e-9, &strict).ok());
        let c = found.expect("some seed snaps");
        assert!(c.analysis.admissible && !c.analysis.split());
        assert_eq!(c.method, SearchMethod::HenselSnap);
    }
}
