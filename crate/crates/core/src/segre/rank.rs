//! Generic rank of series matrices, reported as a certificate.
//!
//! Truncated arithmetic can witness that a minor is nonzero (a nonzero
//! coefficient at some degree within the tracked order) but never that it
//! vanishes. The certified rank is therefore a lower bound, and is marked
//! conclusive only when it reaches `min(rows, cols)`.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::coeff::GaussianRational;
use crate::error::{Error, Result};
use crate::linalg::{combinations, series_determinant};
use crate::series::{Monomial, SeriesVector, TruncatedSeries};

/// A nonvanishing minor: the row and column sets and its lowest nonzero term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub monomial: Monomial,
    pub coeff: GaussianRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub certified_rank: usize,
    /// Witness for the top size; `None` when the certified rank is 0.
    pub witness: Option<MinorWitness>,
    /// Order through which the minors are exact.
    pub truncation_order: u32,
    pub max_rank: usize,
    pub conclusive: bool,
}

/// Generic rank of a `rows × cols` matrix of series over a common context.
///
/// `col_order` lists the column indices in enumeration order. Minors are
/// searched size by size, rows and columns in lexicographic order of
/// subsets; the first nonzero minor of each size is the witness, so the
/// result is deterministic. The enumeration order only affects which
/// witness is found first, never the rank.
pub fn series_matrix_rank(m: &[Vec<TruncatedSeries>], col_order: &[usize]) -> Result<RankCertificate> {
    let nrows = m.len();
    let ncols = col_order.len();
    let max_rank = nrows.min(ncols);
    let Some(first) = m.iter().flat_map(|r| r.iter()).next() else {
        return Ok(RankCertificate {
            certified_rank: 0,
            witness: None,
            truncation_order: 0,
            max_rank,
            conclusive: max_rank == 0,
        });
    };
    let ctx = first.context().clone();
    let order = m.iter().flat_map(|r| col_order.iter().map(move |&c| r[c].order())).min().unwrap_or(0);
    // Rows that vanish through the tracked order cannot contribute.
    let live_rows: Vec<usize> = (0..nrows).filter(|&r| col_order.iter().any(|&c| !m[r][c].is_zero())).collect();
    let mut best: Option<MinorWitness> = None;
    let mut rank = 0;
    'size: for s in 1..=max_rank {
        for rows in combinations(live_rows.len(), s) {
            let rows: Vec<usize> = rows.iter().map(|&i| live_rows[i]).collect();
            for cols in combinations(ncols, s) {
                let cols: Vec<usize> = cols.iter().map(|&i| col_order[i]).collect();
                let det = minor(m, &rows, &cols, &ctx, order)?;
                if let Some((mono, c)) = det.lowest_term() {
                    best = Some(MinorWitness { rows, cols, monomial: mono.clone(), coeff: c.clone() });
                    rank = s;
                    continue 'size;
                }
            }
        }
        break;
    }
    Ok(RankCertificate {
        certified_rank: rank,
        witness: best,
        truncation_order: order,
        max_rank,
        conclusive: rank == max_rank,
    })
}

fn minor(
    m: &[Vec<TruncatedSeries>],
    rows: &[usize],
    cols: &[usize],
    ctx: &crate::series::Context,
    order: u32,
) -> Result<TruncatedSeries> {
    let sub: Vec<Vec<TruncatedSeries>> =
        rows.iter().map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect()).collect();
    series_determinant(ctx, order, &sub)
}

/// Recompute just the witness minor and check its stated coefficient.
pub fn verify_witness(m: &[Vec<TruncatedSeries>], w: &MinorWitness) -> Result<bool> {
    let Some(first) = m.first().and_then(|r| r.first()) else {
        return Ok(false);
    };
    let ctx = first.context().clone();
    let order = m.iter().flat_map(|r| r.iter().map(|s| s.order())).min().unwrap_or(0);
    let det = minor(m, &w.rows, &w.cols, &ctx, order)?;
    Ok(!w.coeff.is_zero() && det.coeff(&w.monomial) == w.coeff)
}

/// Jacobian `∂F_i/∂x_v` for the global variable indices `vars`.
pub fn jacobian(f: &SeriesVector, vars: &[usize]) -> Result<Vec<Vec<TruncatedSeries>>> {
    if f.context().nvars() < vars.iter().copied().max().map_or(0, |v| v + 1) {
        return Err(Error::UnknownVariable(vars.iter().copied().max().unwrap_or(0)));
    }
    f.components().iter().map(|fi| vars.iter().map(|&v| fi.differentiate(v)).collect()).collect()
}

/// Generic rank of `F` with respect to the variables of the named blocks.
///
/// Columns are enumerated newest block first (the last listed block
/// first), ascending within a block. Witness columns are reported as
/// global variable indices.
pub fn generic_rank(f: &SeriesVector, wrt_blocks: &[&str]) -> Result<RankCertificate> {
    let ctx = f.context();
    let mut vars: Vec<usize> = Vec::new();
    for name in wrt_blocks {
        let r = ctx
            .block_range(name)
            .ok_or_else(|| Error::Precondition(alloc::format!("unknown variable block `{}`", name)))?;
        vars.extend(r);
    }
    let jac = jacobian(f, &vars)?;
    let mut col_order: Vec<usize> = Vec::with_capacity(vars.len());
    let mut offset = vars.len();
    for name in wrt_blocks.iter().rev() {
        let len = ctx.block_range(name).expect("checked").len();
        offset -= len;
        col_order.extend(offset..offset + len);
    }
    let mut cert = series_matrix_rank(&jac, &col_order)?;
    if let Some(w) = cert.witness.as_mut() {
        for c in w.cols.iter_mut() {
            *c = vars[*c];
        }
    }
    Ok(cert)
}

/// Recheck a [`generic_rank`] certificate against `F`.
pub fn verify_rank_certificate(f: &SeriesVector, cert: &RankCertificate) -> Result<bool> {
    let Some(w) = &cert.witness else {
        return Ok(cert.certified_rank == 0);
    };
    let jac = jacobian(f, &w.cols)?;
    let local = MinorWitness { rows: w.rows.clone(), cols: (0..w.cols.len()).collect(), ..w.clone() };
    verify_witness(&jac, &local)
}
