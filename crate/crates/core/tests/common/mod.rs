//! Slow, obviously-correct reference implementations.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::Zero;
use segre_core::{Context, GaussianRational, SeriesVector, TruncatedSeries};

/// A polynomial as a map from exponent vectors to coefficients.
pub type Dense = BTreeMap<Vec<u32>, GaussianRational>;

pub fn dense(s: &TruncatedSeries) -> Dense {
    s.terms().map(|(m, c)| (m.exponents().to_vec(), c.clone())).collect()
}

pub fn to_series(ctx: &Context, order: u32, d: &Dense) -> TruncatedSeries {
    TruncatedSeries::from_terms(ctx, order, d.iter().map(|(e, c)| (e.clone(), c.clone()))).unwrap()
}

fn deg(e: &[u32]) -> u32 {
    e.iter().sum()
}

fn push(out: &mut Dense, e: Vec<u32>, c: GaussianRational) {
    let slot = out.entry(e).or_insert_with(GaussianRational::zero);
    *slot += &c;
}

fn clean(mut d: Dense) -> Dense {
    d.retain(|_, c| !c.is_zero());
    d
}

pub fn add(a: &Dense, b: &Dense) -> Dense {
    let mut out = a.clone();
    for (e, c) in b {
        push(&mut out, e.clone(), c.clone());
    }
    clean(out)
}

/// Product of all pairs of terms, dropping degrees above `order`.
pub fn mul(a: &Dense, b: &Dense, order: u32) -> Dense {
    let mut out = Dense::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if deg(&e) <= order {
                push(&mut out, e, ca * cb);
            }
        }
    }
    clean(out)
}

pub fn one(n: usize) -> Dense {
    let mut d = Dense::new();
    d.insert(vec![0; n], GaussianRational::from_ints(1, 0));
    d
}

/// Substitute `inner[i]` for variable `i`, term by term, powers by repeated products.
pub fn compose(outer: &Dense, inner: &[Dense], inner_nvars: usize, order: u32) -> Dense {
    let mut out = Dense::new();
    for (e, c) in outer {
        let mut term = one(inner_nvars);
        for (i, &p) in e.iter().enumerate() {
            for _ in 0..p {
                term = mul(&term, &inner[i], order);
            }
        }
        for (te, tc) in term {
            push(&mut out, te, &tc * c);
        }
    }
    clean(out)
}

pub fn differentiate(a: &Dense, i: usize) -> Dense {
    let mut out = Dense::new();
    for (e, c) in a {
        if e[i] > 0 {
            let mut f = e.clone();
            f[i] -= 1;
            push(&mut out, f, c * &GaussianRational::int(e[i] as i64));
        }
    }
    clean(out)
}

pub fn eval(a: &Dense, point: &[GaussianRational]) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for (e, c) in a {
        let mut t = c.clone();
        for (x, &p) in point.iter().zip(e) {
            for _ in 0..p {
                t = &t * x;
            }
        }
        acc += &t;
    }
    acc
}

/// Rank by fraction-exact Gaussian elimination.
pub fn rank(mut m: Vec<Vec<GaussianRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, p) in row.iter_mut().zip(&pivot) {
                    let v = &f * p;
                    *x -= &v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Jacobian of `v` in the columns `cols`, evaluated at `point`.
pub fn jacobian_at(v: &SeriesVector, cols: &[usize], point: &[GaussianRational]) -> Vec<Vec<GaussianRational>> {
    v.components().iter().map(|s| cols.iter().map(|&c| eval(&differentiate(&dense(s), c), point)).collect()).collect()
}
