//! Substitution of series into series.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{SeriesVector, TruncatedSeries};
use crate::coeff::GaussianRational;
use crate::error::{Error, Result};

/// `outer(inner_1, ..., inner_m)`.
///
/// `outer` lives in `m` variables; every inner series must have zero
/// constant term. The result lives in the inner context and is exact
/// through `min(order(outer), order(inner))`.
///
/// Evaluation is Horner-style, one variable block at a time: the terms of
/// `outer` are grouped by the exponent of the leading variable and folded
/// from the highest exponent down.
pub fn compose(outer: &TruncatedSeries, inner: &SeriesVector) -> Result<TruncatedSeries> {
    let m = outer.context().nvars();
    if inner.len() != m {
        return Err(Error::ArityMismatch { expected: m, found: inner.len() });
    }
    for (i, s) in inner.components().iter().enumerate() {
        if !s.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm { index: i });
        }
    }
    let order = outer.order().min(inner.order());
    let terms: Vec<(&[u32], &GaussianRational)> =
        outer.terms().filter(|(mono, _)| mono.degree() <= order).map(|(mono, c)| (mono.exponents(), c)).collect();
    let inner = inner.truncated(order);
    horner(&terms, 0, &inner, order)
}

/// Compose every component of `outer` with `inner`.
pub fn compose_vector(outer: &SeriesVector, inner: &SeriesVector) -> Result<SeriesVector> {
    let comps = outer.components().iter().map(|o| compose(o, inner)).collect::<Result<Vec<_>>>()?;
    let mut v = SeriesVector::new(inner.context(), comps)?;
    if outer.is_empty() {
        v = SeriesVector::empty(inner.context(), outer.order().min(inner.order()));
    }
    Ok(v)
}

fn horner(
    terms: &[(&[u32], &GaussianRational)],
    var: usize,
    inner: &SeriesVector,
    order: u32,
) -> Result<TruncatedSeries> {
    let ctx = inner.context();
    if terms.is_empty() {
        return Ok(TruncatedSeries::zero(ctx, order));
    }
    if var == inner.len() {
        let mut c = GaussianRational::from(0);
        for (_, coeff) in terms {
            c += coeff;
        }
        return Ok(TruncatedSeries::constant(ctx, order, c));
    }
    let mut groups: BTreeMap<u32, Vec<(&[u32], &GaussianRational)>> = BTreeMap::new();
    for &(exps, c) in terms {
        groups.entry(exps[var]).or_default().push((exps, c));
    }
    if groups.len() == 1 && groups.contains_key(&0) {
        return horner(terms, var + 1, inner, order);
    }
    let x = &inner[var];
    let mut iter = groups.iter().rev();
    let (&top, group) = iter.next().expect("nonempty");
    let mut acc = horner(group, var + 1, inner, order)?;
    let mut prev = top;
    for (&e, group) in iter {
        for _ in e..prev {
            acc = acc.mul(x)?;
        }
        acc = acc.add(&horner(group, var + 1, inner, order)?)?;
        prev = e;
    }
    for _ in 0..prev {
        acc = acc.mul(x)?;
    }
    Ok(acc)
}
