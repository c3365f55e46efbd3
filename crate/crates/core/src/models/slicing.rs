//! Sample points on the minitwistor surface and the degree oracle: cut the
//! surface by a random codimension-two linear space and count intersection
//! points with multiplicity.

use std::collections::HashMap;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::equations::rnc_point;
use super::{
    minitwistor_quadric, random_nonzero, random_rational, scroll_relations, z, zvars, ModelError,
    ModelParams,
};
use crate::poly::{int, resultant, squarefree_decomposition, MultiPoly, Rational, UniPoly};

/// `count` points of the surface in `CP^{n+1}`: `z_k = λ^{k-1}` for random
/// `λ`, random nonzero `z_{n+1}` and `z_{n+2}` solving the quadric. Values of
/// `λ` that are roots of `q` are resampled.
#[allow(non_snake_case)]
pub fn sample_points_on_T(params: &ModelParams, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.n;
    let q = params.q();
    let scroll = scroll_relations(n);
    let quad = minitwistor_quadric(params);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let lam = random_rational(&mut rng);
        let rhs = q.eval(&lam);
        if rhs.is_zero() {
            continue;
        }
        let mut pt = rnc_point(n, &lam);
        let a = random_nonzero(&mut rng);
        let b = &rhs / &a;
        pt.push(a);
        pt.push(b);
        debug_assert!(scroll.vanishes_at(&pt[..n]) && quad.eval_at(&pt).is_zero());
        out.push(pt);
    }
    out
}

/// Lifts a point of the surface (with `z₁ ≠ 0`) to `X ⊂ CP^{n+5}`: random
/// nonzero `z_{n+3}`, then `z_{n+4} = z₁g/z_{n+3}`, `z_{n+5} = z₂z_{n+3}/z₁`,
/// `z_{n+6} = z₂z_{n+4}/z₁`. Requires real `c`.
#[allow(non_snake_case)]
pub fn lift_to_X(
    params: &ModelParams,
    point: &[Rational],
    seed: u64,
) -> Result<Vec<Rational>, ModelError> {
    let n = params.n;
    if point.len() != n + 2 || point[0].is_zero() {
        return Err(ModelError::PointLength(point.len()));
    }
    let g: Rational = params
        .g_linear()?
        .iter()
        .zip(point)
        .map(|(c, x)| c * x)
        .sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_nonzero(&mut rng);
    let b = &(&point[0] * &g) / &a;
    let mut out = point.to_vec();
    out.push(a.clone());
    out.push(b.clone());
    out.push(&(&point[1] * &a) / &point[0]);
    out.push(&(&point[1] * &b) / &point[0]);
    Ok(out)
}

/// On the chart `z₁ = 1`, slices with `z_{n+1} = Σ aᵢzᵢ`, `z_{n+2} = Σ bᵢzᵢ`
/// (sums over `i ≤ n`) and eliminates `z_n, …, z₃` by resultants against the
/// linear minors `z_k - z₂z_{k-1}`. Returns the eliminant in `z₂`.
pub fn slice_eliminant(params: &ModelParams, a: &[Rational], b: &[Rational]) -> UniPoly {
    let n = params.n;
    let vars = zvars(n + 2);
    let v: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    // Substitution is simultaneous, so z₁ = 1 is applied inside the slice too.
    let lin = |c: &[Rational]| {
        c.iter()
            .enumerate()
            .fold(MultiPoly::zero(&v), |acc, (i, ci)| {
                let zi = if i == 0 {
                    MultiPoly::constant(&v, int(1))
                } else {
                    MultiPoly::var(&v, &z(i + 1))
                };
                &acc + &zi.scale(ci)
            })
    };
    let mut bind = HashMap::from([("z1", MultiPoly::constant(&v, int(1)))]);
    bind.insert(vars[n].as_str(), lin(a));
    bind.insert(vars[n + 1].as_str(), lin(b));
    let mut p = minitwistor_quadric(params).substitute(&bind);
    for k in (3..=n).rev() {
        let minor = &MultiPoly::var(&v, &z(k))
            - &(&MultiPoly::var(&v, "z2") * &MultiPoly::var(&v, &z(k - 1)));
        p = resultant(&p, &minor, &z(k));
    }
    UniPoly::from_multi(&p.with_vars(&["z2"]).expect("only z2 remains"), "z2").expect("univariate")
}

/// Every generator restricted to the slice and the curve `z_k = z₂^{k-1}`,
/// as univariate polynomials in `z₂`.
fn restricted_generators(params: &ModelParams, a: &[Rational], b: &[Rational]) -> Vec<UniPoly> {
    let n = params.n;
    let t = UniPoly::new(vec![int(0), int(1)]);
    let zs: Vec<UniPoly> = (0..n).map(|k| t.pow(k as u32)).collect();
    let lin = |c: &[Rational]| {
        c.iter()
            .zip(&zs)
            .fold(UniPoly::zero(), |acc, (ci, zk)| &acc + &zk.scale(ci))
    };
    let mut vals = zs.clone();
    vals.push(lin(a));
    vals.push(lin(b));
    let vars = zvars(n + 2);
    let mut gens: Vec<MultiPoly> = scroll_relations(n)
        .generators
        .into_iter()
        .map(|(_, p)| p)
        .collect();
    gens.push(minitwistor_quadric(params));
    gens.iter()
        .map(|g| {
            let v: Vec<&str> = g.vars().iter().map(|s| s.as_str()).collect();
            let bind: HashMap<&str, MultiPoly> = vars
                .iter()
                .zip(&vals)
                .filter(|(name, _)| v.contains(&name.as_str()))
                .map(|(name, p)| (name.as_str(), p.to_multi("t")))
                .collect();
            let s = g.substitute(&bind);
            let names: Vec<&str> = s
                .vars()
                .iter()
                .map(|x| x.as_str())
                .filter(|x| *x == "t")
                .collect();
            let s = s
                .with_vars(if names.is_empty() { &[] } else { &["t"] })
                .expect("only t remains");
            UniPoly::from_multi(&s, "t").unwrap_or_else(|_| UniPoly::zero())
        })
        .collect()
}

/// Degree of the surface by slicing (`n ∈ {3, 4}`): the number of points, with
/// multiplicity, in the intersection with a random codimension-two linear
/// space. Every factor of the eliminant is back-substituted into all
/// generators before its roots are counted; degenerate slices are resampled.
pub fn degree_by_slicing(params: &ModelParams, seed: u64) -> Result<usize, ModelError> {
    const ATTEMPTS: usize = 20;
    let n = params.n;
    if !(3..=4).contains(&n) {
        return Err(ModelError::UnsupportedN(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let a: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng)).collect();
        let b: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng)).collect();
        // With a_n b_n ≠ 0 the slice has no points on z₁ = 0.
        if a[n - 1].is_zero() || b[n - 1].is_zero() {
            continue;
        }
        let p = slice_eliminant(params, &a, &b);
        if p.degree().unwrap_or(0) == 0 {
            continue;
        }
        let sf = squarefree_decomposition(&p).expect("nonzero");
        let gens = restricted_generators(params, &a, &b);
        let mut count = 0;
        for (f, m) in &sf.factors {
            if gens.iter().all(|g| g.rem(f).is_zero()) {
                count += *m as usize * f.degree().unwrap_or(0);
            }
        }
        return Ok(count);
    }
    Err(ModelError::DegenerateSlice(ATTEMPTS))
}
