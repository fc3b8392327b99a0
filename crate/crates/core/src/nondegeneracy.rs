//! CR vector fields and the nondegeneracy conditions built from them.
//!
//! On the complexification `{ρ(Z, ζ) = 0}` the `(0,1)` fields tangent to
//! `M` are written in the `ζ`-derivations,
//! `L_i = ∂/∂ζ_{u_i} + Σ_j c_ij(Z, ζ) ∂/∂ζ_{s_j}`,
//! where `s` are the solved indices and `u` the remaining ones. The
//! coefficients come from one exact linear solve so that `L_i ρ ≡ 0`.
//! Their conjugates `L̄_i` are the `(1,0)` fields obtained by `conj_swap`
//! of the coefficients.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::GaussianRational;
use crate::error::{Error, Result};
use crate::linalg::{series_inverse, Matrix};
use crate::manifold::{conj_swap, DefiningSystem};
use crate::segre::{series_matrix_rank, solve_gamma, RankCertificate};
use crate::series::{compose, Context, SeriesVector, TruncatedSeries};

/// Default `kMax = N + 2`.
pub fn default_kmax(ambient_dim: usize) -> usize {
    ambient_dim + 2
}

/// Default bracket depth `2(N + 1)`.
pub fn default_depth_max(ambient_dim: usize) -> usize {
    2 * (ambient_dim + 1)
}

/// A formal vector field `Σ a_k ∂/∂x_k` on `(Z, ζ)`-space; components
/// `0..N` are the `∂/∂Z` part, `N..2N` the `∂/∂ζ` part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorField {
    coeffs: Vec<TruncatedSeries>,
}

impl VectorField {
    pub fn new(coeffs: Vec<TruncatedSeries>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[TruncatedSeries] {
        &self.coeffs
    }

    pub fn order(&self) -> u32 {
        self.coeffs.iter().map(|c| c.order()).min().unwrap_or(u32::MAX)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `X f = Σ a_k ∂f/∂x_k`.
    pub fn apply(&self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        let order = f.order().saturating_sub(1).min(self.order());
        let mut acc = TruncatedSeries::zero(f.context(), order);
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            acc = acc.add(&a.mul(&f.differentiate(k)?)?)?;
        }
        Ok(acc)
    }

    /// `[X, Y]_k = X(Y_k) − Y(X_k)`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        let coeffs = (0..self.coeffs.len())
            .map(|k| self.apply(&other.coeffs[k])?.sub(&other.apply(&self.coeffs[k])?))
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorField { coeffs })
    }

    /// Coefficients at the origin.
    pub fn value_at_zero(&self) -> Vec<GaussianRational> {
        self.coeffs.iter().map(|c| c.constant_term()).collect()
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect::<Result<Vec<_>>>()?;
        Ok(VectorField { coeffs })
    }
}

/// The normalized basis `L_1, …, L_n` of tangent `(0,1)` fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrFieldBasis {
    ctx: Context,
    ambient_dim: usize,
    order: u32,
    solved: Vec<usize>,
    unsolved: Vec<usize>,
    /// `c[i][j]`: coefficient of `∂/∂ζ_{solved[j]}` in `L_i`.
    coeffs: Vec<Vec<TruncatedSeries>>,
}

impl CrFieldBasis {
    pub fn len(&self) -> usize {
        self.unsolved.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unsolved.is_empty()
    }

    pub fn solved(&self) -> &[usize] {
        &self.solved
    }

    pub fn unsolved(&self) -> &[usize] {
        &self.unsolved
    }

    pub fn coeff(&self, i: usize, j: usize) -> &TruncatedSeries {
        &self.coeffs[i][j]
    }

    /// `L_i f`.
    pub fn apply(&self, i: usize, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        let n = self.ambient_dim;
        let mut acc = f.differentiate(n + self.unsolved[i])?;
        for (j, &s) in self.solved.iter().enumerate() {
            let c = &self.coeffs[i][j];
            if c.is_zero() {
                acc = acc.truncated(c.order());
                continue;
            }
            acc = acc.add(&c.mul(&f.differentiate(n + s)?)?)?;
        }
        Ok(acc)
    }

    fn field(&self, i: usize, conjugate: bool) -> Result<VectorField> {
        let n = self.ambient_dim;
        let order = self.coeffs.iter().flatten().map(|c| c.order()).min().unwrap_or(self.order);
        let mut coeffs = vec![TruncatedSeries::zero(&self.ctx, order); 2 * n];
        let offset = if conjugate { 0 } else { n };
        coeffs[offset + self.unsolved[i]] = TruncatedSeries::one(&self.ctx, order);
        for (j, &s) in self.solved.iter().enumerate() {
            let c = &self.coeffs[i][j];
            coeffs[offset + s] = if conjugate { conj_swap(c) } else { c.clone() };
        }
        Ok(VectorField::new(coeffs))
    }

    /// `L_1, …, L_n` as vector fields.
    pub fn fields(&self) -> Result<Vec<VectorField>> {
        (0..self.len()).map(|i| self.field(i, false)).collect()
    }

    /// `L̄_1, …, L̄_n` as vector fields.
    pub fn conjugate_fields(&self) -> Result<Vec<VectorField>> {
        (0..self.len()).map(|i| self.field(i, true)).collect()
    }
}

/// Solve `L_i ρ ≡ 0` for the normalized coefficients.
pub fn cr_field_basis(sys: &DefiningSystem) -> Result<CrFieldBasis> {
    let n = sys.ambient_dim();
    let d = sys.codim();
    let ctx = sys.context().clone();
    let order = sys.order();
    let solved = sys.default_solved().to_vec();
    let unsolved: Vec<usize> = (0..n).filter(|i| !solved.contains(i)).collect();
    if unsolved.is_empty() {
        return Ok(CrFieldBasis { ctx, ambient_dim: n, order, solved, unsolved, coeffs: Vec::new() });
    }
    let rho = sys.rho();
    let b: Vec<Vec<TruncatedSeries>> =
        (0..d).map(|k| solved.iter().map(|&s| rho[k].differentiate(n + s)).collect()).collect::<Result<_>>()?;
    let b_inv = series_inverse(&ctx, order - 1, &b).map_err(|e| match e {
        Error::NotAUnit => Error::Fatal(String::from("solved ζ-block of ∂ρ/∂ζ is singular at 0")),
        other => other,
    })?;
    let mut coeffs = Vec::with_capacity(unsolved.len());
    for &u in &unsolved {
        let col: Vec<TruncatedSeries> = (0..d).map(|k| rho[k].differentiate(n + u)).collect::<Result<_>>()?;
        let mut ci = Vec::with_capacity(d);
        for row in b_inv.iter() {
            let mut acc = TruncatedSeries::zero(&ctx, order - 1);
            for (b, c) in row.iter().zip(&col) {
                acc = acc.add(&b.mul(c)?)?;
            }
            ci.push(acc.neg());
        }
        coeffs.push(ci);
    }
    Ok(CrFieldBasis { ctx, ambient_dim: n, order: order - 1, solved, unsolved, coeffs })
}

/// One row of the span matrix: `L^α ρ_{j,Z}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanRow {
    pub alpha: Vec<usize>,
    pub j: usize,
    pub entries: Vec<TruncatedSeries>,
}

/// The vectors `ρ_{j,Z}` and `L^α ρ_{j,Z}` for `|α| <= k_used`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanMatrix {
    pub rows: Vec<SpanRow>,
    pub k_used: usize,
}

impl SpanMatrix {
    /// The rows evaluated at the origin.
    pub fn at_zero(&self) -> Matrix {
        let mut m = Matrix::zeros(0, 0);
        for r in &self.rows {
            m.push_row(r.entries.iter().map(|e| e.constant_term()).collect());
        }
        m
    }
}

/// Rows of the span matrix for `|α| = 0, 1, …` up to `kmax`, built by
/// `L^α = L_{i} L^{α − e_i}` with `i` the first nonzero index of `α`.
/// Stops early if the truncation order is used up; `k_used` records how far
/// it got.
pub fn span_matrix(sys: &DefiningSystem, basis: &CrFieldBasis, kmax: usize) -> Result<SpanMatrix> {
    let d = sys.codim();
    let ncr = basis.len();
    let grad = sys.raw().z_gradient()?;
    let mut rows: Vec<SpanRow> = (0..d).map(|j| SpanRow { alpha: vec![0; ncr], j, entries: grad[j].clone() }).collect();
    let mut layer_start = 0;
    let mut k_used = 0;
    if ncr == 0 {
        return Ok(SpanMatrix { rows, k_used });
    }
    for k in 1..=kmax {
        let prev: Vec<SpanRow> = rows[layer_start..].to_vec();
        if prev.iter().any(|r| r.entries.iter().any(|e| e.order() == 0)) {
            break;
        }
        layer_start = rows.len();
        // Each α with |α| = k arises once as e_i + β with i <= first nonzero index of β.
        for r in &prev {
            let first_nonzero = r.alpha.iter().position(|&a| a > 0).unwrap_or(ncr - 1);
            for i in 0..=first_nonzero.min(ncr - 1) {
                let mut alpha = r.alpha.clone();
                alpha[i] += 1;
                let entries = r.entries.iter().map(|e| basis.apply(i, e)).collect::<Result<Vec<_>>>()?;
                rows.push(SpanRow { alpha, j: r.j, entries });
            }
        }
        k_used = k;
    }
    Ok(SpanMatrix { rows, k_used })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KVerdict {
    /// Smallest `k` with full span at 0.
    KNondegenerate(usize),
    /// No `k <= kmax` (or truncation ran out at `k_reached`).
    Inconclusive { kmax: usize, k_reached: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KNondegeneracy {
    pub verdict: KVerdict,
    pub levi_nondegenerate: bool,
    /// Rank at 0 of the rows with `|α| <= k`, for `k = 0..=k_reached`.
    pub span_ranks: Vec<usize>,
}

/// Smallest `k <= kmax` with `span{ρ_{j,Z}(0), L^α ρ_{j,Z}(0) : |α| <= k} = ℂ^N`.
pub fn k_nondegeneracy(sys: &DefiningSystem, kmax: usize) -> Result<KNondegeneracy> {
    let basis = cr_field_basis(sys)?;
    let span = span_matrix(sys, &basis, kmax)?;
    let n = sys.ambient_dim();
    let mut span_ranks = Vec::new();
    let mut found = None;
    for k in 0..=span.k_used {
        let rows: Vec<SpanRow> = span.rows.iter().filter(|r| r.alpha.iter().sum::<usize>() <= k).cloned().collect();
        let rank = SpanMatrix { rows, k_used: k }.at_zero().rank();
        span_ranks.push(rank);
        if rank == n && found.is_none() {
            found = Some(k);
            break;
        }
    }
    let verdict = match found {
        Some(k) => KVerdict::KNondegenerate(k),
        None => KVerdict::Inconclusive { kmax, k_reached: span.k_used },
    };
    let levi_nondegenerate = matches!(verdict, KVerdict::KNondegenerate(k) if k <= 1);
    Ok(KNondegeneracy { verdict, levi_nondegenerate, span_ranks })
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum HolomorphicVerdict {
    /// Generic rank `N` reached using rows with `|α| <= k`.
    Nondegenerate {
        k: usize,
        certificate: RankCertificate,
    },
    DegenerateToOrder {
        kmax: usize,
        order: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolomorphicNondegeneracy {
    pub verdict: HolomorphicVerdict,
    /// Certified generic rank of the rows with `|α| <= k`.
    pub generic_ranks: Vec<usize>,
}

/// Generic rank (on the complexified manifold, not at 0) of the span
/// matrix rows; full rank at some `k` means finite nondegeneracy on a dense
/// set, i.e. holomorphic nondegeneracy.
///
/// Rows are restricted to `{ρ = 0}` through its parametrization
/// `(ζ, t) ↦ (γ(ζ, t), ζ)` before the rank is taken.
pub fn holomorphic_nondegeneracy(sys: &DefiningSystem, kmax: usize) -> Result<HolomorphicNondegeneracy> {
    let basis = cr_field_basis(sys)?;
    let span = span_matrix(sys, &basis, kmax)?;
    let gamma = solve_gamma(sys, None)?;
    let gctx = gamma.gamma().context().clone();
    let zeta = SeriesVector::variables(&gctx, gamma.order(), 0..sys.ambient_dim())?;
    let param = gamma.gamma().concat(&zeta)?;
    let restricted: Vec<(usize, Vec<TruncatedSeries>)> = span
        .rows
        .iter()
        .map(|r| {
            let entries = r.entries.iter().map(|e| compose(e, &param)).collect::<Result<Vec<_>>>()?;
            Ok((r.alpha.iter().sum::<usize>(), entries))
        })
        .collect::<Result<_>>()?;
    let n = sys.ambient_dim();
    let cols: Vec<usize> = (0..n).collect();
    let mut generic_ranks = Vec::new();
    for k in 0..=span.k_used {
        let rows: Vec<Vec<TruncatedSeries>> =
            restricted.iter().filter(|(a, _)| *a <= k).map(|(_, e)| e.clone()).collect();
        let cert = series_matrix_rank(&rows, &cols)?;
        generic_ranks.push(cert.certified_rank);
        if cert.certified_rank == n {
            return Ok(HolomorphicNondegeneracy {
                verdict: HolomorphicVerdict::Nondegenerate { k, certificate: cert },
                generic_ranks,
            });
        }
    }
    Ok(HolomorphicNondegeneracy {
        verdict: HolomorphicVerdict::DegenerateToOrder { kmax, order: sys.order() },
        generic_ranks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieVerdict {
    /// Span of brackets of length `<= depth` at 0 is all of `ℂT_0M`.
    FiniteType {
        depth: usize,
    },
    Inconclusive {
        depth_max: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieFiniteType {
    pub verdict: LieVerdict,
    /// `dim ℂT_0M = 2N − d`.
    pub tangent_dim: usize,
    /// Dimension of the span at 0 after brackets of length `1, 2, …`.
    pub span_dims: Vec<usize>,
    pub note: Option<String>,
}

impl LieFiniteType {
    pub fn is_finite_type(&self) -> bool {
        matches!(self.verdict, LieVerdict::FiniteType { .. })
    }
}

/// Upper bound on the number of distinct fields kept per bracket layer.
pub const MAX_LAYER_FIELDS: usize = 4096;

/// Finite type by iterated Lie brackets of `L_i` and `L̄_i`.
pub fn finite_type_lie(sys: &DefiningSystem, depth_max: usize) -> Result<LieFiniteType> {
    let n = sys.ambient_dim();
    let d = sys.codim();
    let tangent_dim = 2 * n - d;
    let basis = cr_field_basis(sys)?;
    if basis.is_empty() {
        return Ok(LieFiniteType {
            verdict: LieVerdict::Inconclusive { depth_max },
            tangent_dim,
            span_dims: Vec::new(),
            note: Some(String::from(
                "n = 0: there are no nontrivial (0,1) vector fields tangent to M, so the bracket span is {0}",
            )),
        });
    }
    let mut generators = basis.fields()?;
    generators.extend(basis.conjugate_fields()?);
    let mut span = Matrix::zeros(0, 0);
    let mut span_dims = Vec::new();
    let mut layer: Vec<VectorField> = generators.clone();
    let mut note = None;
    for depth in 1..=depth_max {
        for f in &layer {
            span.push_row(f.value_at_zero());
        }
        let dim = span.rank();
        span_dims.push(dim);
        if dim == tangent_dim {
            return Ok(LieFiniteType { verdict: LieVerdict::FiniteType { depth }, tangent_dim, span_dims, note });
        }
        if depth == depth_max {
            break;
        }
        let mut seen: BTreeSet<Vec<String>> = BTreeSet::new();
        let mut next = Vec::new();
        'outer: for g in &generators {
            for x in &layer {
                if g.order() == 0 || x.order() == 0 {
                    note = Some(String::from("truncation order exhausted before the depth limit"));
                    continue;
                }
                let b = g.bracket(x)?;
                if b.is_zero() {
                    continue;
                }
                let key: Vec<String> = b.coeffs().iter().map(|c| c.to_canonical_string()).collect();
                if seen.insert(key) {
                    next.push(b);
                    if next.len() >= MAX_LAYER_FIELDS {
                        note = Some(String::from("bracket layer size limit reached"));
                        break 'outer;
                    }
                }
            }
        }
        if next.is_empty() {
            note.get_or_insert_with(|| String::from("all further brackets vanish through the tracked order"));
            break;
        }
        layer = next;
    }
    Ok(LieFiniteType { verdict: LieVerdict::Inconclusive { depth_max }, tangent_dim, span_dims, note })
}

/// Tangency residuals `L_i ρ_j`; all zero for a correct basis.
pub fn tangency_residuals(sys: &DefiningSystem, basis: &CrFieldBasis) -> Result<Vec<TruncatedSeries>> {
    let mut out = Vec::new();
    for i in 0..basis.len() {
        for r in sys.rho().components() {
            out.push(basis.apply(i, r)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
