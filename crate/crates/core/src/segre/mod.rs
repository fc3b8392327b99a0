//! Segre variety mappings, iterated Segre mappings, and the rank criterion
//! for finite type.
//!
//! For a generic system `ρ(Z, ζ)` of codimension `d` in `ℂ^N` with
//! `n = N - d`, a Segre variety mapping `γ(ζ, t)` solves
//! `ρ(γ(ζ, t), ζ) = 0` with `∂γ/∂t(0,0)` of rank `n`. The iterated Segre
//! mappings are `v¹(t¹) = γ(0, t¹)` and `v^{j+1} = γ(v̄^j, t^{j+1})`, where
//! the bar conjugates coefficients only. `M` is of finite type at 0 iff
//! the generic rank of `v^{d+1}` is `N`.

pub mod rank;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::manifold::{DefiningSystem, ZETA_BLOCK};
use crate::series::{compose_vector, Context, SeriesVector, TruncatedSeries, VarBlock};

pub use rank::{generic_rank, jacobian, series_matrix_rank, verify_rank_certificate, MinorWitness, RankCertificate};

/// Name of the parameter block of `γ`.
pub const T_BLOCK: &str = "t";

/// Name of the `j`-th parameter block (1-based) of an iterated mapping.
pub fn t_block_name(j: usize) -> String {
    alloc::format!("t{}", j)
}

/// Context `(ζ, t)` for `γ`.
pub fn gamma_context(ambient_dim: usize, cr_dim: usize) -> Context {
    Context::new(vec![VarBlock::new(ZETA_BLOCK, ambient_dim), VarBlock::new(T_BLOCK, cr_dim)]).expect("distinct")
}

/// Context `(t¹, …, t^j)` for `v^j`.
pub fn iterate_context(cr_dim: usize, j: usize) -> Context {
    Context::new((1..=j).map(|k| VarBlock::new(&t_block_name(k), cr_dim)).collect()).expect("distinct")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegreVarietyMapping {
    gamma: SeriesVector,
    solved: Vec<usize>,
    unsolved: Vec<usize>,
}

impl SegreVarietyMapping {
    /// `γ` as `N` series in `(ζ, t)`.
    pub fn gamma(&self) -> &SeriesVector {
        &self.gamma
    }

    /// Z-indices expressed implicitly through `ρ = 0`.
    pub fn solved_vars(&self) -> &[usize] {
        &self.solved
    }

    /// Z-indices with `γ_i = t_k`, ascending.
    pub fn unsolved_vars(&self) -> &[usize] {
        &self.unsolved
    }

    pub fn ambient_dim(&self) -> usize {
        self.gamma.len()
    }

    pub fn cr_dim(&self) -> usize {
        self.unsolved.len()
    }

    pub fn order(&self) -> u32 {
        self.gamma.order()
    }
}

/// Solve `ρ(γ(ζ, t), ζ) = 0` order by order.
///
/// The unsolved coordinates are fixed to `t` in ascending index order; the
/// solved ones start at zero and are corrected by
/// `γ_S ← γ_S − A⁻¹ ρ(γ, ζ)` with the constant matrix `A = ∂ρ/∂Z_S(0)`,
/// which gains at least one degree of accuracy per step.
pub fn solve_gamma(sys: &DefiningSystem, solved: Option<&[usize]>) -> Result<SegreVarietyMapping> {
    let n_amb = sys.ambient_dim();
    let d = sys.codim();
    let solved: Vec<usize> = match solved {
        Some(s) => {
            let mut s = s.to_vec();
            s.sort_unstable();
            s.dedup();
            if s.len() != d || s.iter().any(|&i| i >= n_amb) {
                return Err(Error::Precondition(alloc::format!(
                    "solved variables must be {} distinct indices below {}",
                    d,
                    n_amb
                )));
            }
            s
        }
        None => sys.default_solved().to_vec(),
    };
    let rows: Vec<usize> = (0..d).collect();
    let a = sys.raw().z_gradient_at_zero().select(&rows, &solved);
    let a_inv = a.inverse().ok_or_else(|| Error::SingularMinor(solved.clone()))?;
    let unsolved: Vec<usize> = (0..n_amb).filter(|i| !solved.contains(i)).collect();
    let cr = unsolved.len();
    let order = sys.order();
    let ctx = gamma_context(n_amb, cr);

    let mut gamma: Vec<TruncatedSeries> = vec![TruncatedSeries::zero(&ctx, order); n_amb];
    for (k, &i) in unsolved.iter().enumerate() {
        gamma[i] = TruncatedSeries::var(&ctx, order, n_amb + k)?;
    }
    let zeta = SeriesVector::variables(&ctx, order, 0..n_amb)?;

    for _ in 0..=order + 1 {
        let residual = gamma_residual(sys, &ctx, &gamma, &zeta)?;
        if residual.components().iter().all(|r| r.is_zero()) {
            let gamma = SeriesVector::new(&ctx, gamma)?;
            return Ok(SegreVarietyMapping { gamma, solved, unsolved });
        }
        for (row, &i) in solved.iter().enumerate() {
            let mut correction = TruncatedSeries::zero(&ctx, order);
            for k in 0..d {
                if a_inv[(row, k)].is_zero() {
                    continue;
                }
                correction = correction.add(&residual[k].scale(&a_inv[(row, k)]))?;
            }
            gamma[i] = gamma[i].sub(&correction)?;
        }
    }
    Err(Error::Fatal(String::from("Segre variety mapping iteration did not converge")))
}

fn gamma_residual(
    sys: &DefiningSystem,
    ctx: &Context,
    gamma: &[TruncatedSeries],
    zeta: &SeriesVector,
) -> Result<SeriesVector> {
    let inner = SeriesVector::new(ctx, gamma.to_vec())?.concat(zeta)?;
    compose_vector(sys.rho(), &inner)
}

/// `ρ(γ(ζ,t), ζ)`; identically zero for a correct `γ`.
pub fn gamma_check(sys: &DefiningSystem, gamma: &SegreVarietyMapping) -> Result<SeriesVector> {
    let ctx = gamma.gamma.context().clone();
    let zeta = SeriesVector::variables(&ctx, gamma.order(), 0..sys.ambient_dim())?;
    gamma_residual(sys, &ctx, gamma.gamma.components(), &zeta)
}

/// One iterated Segre mapping `v^j` in `(t¹, …, t^j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IteratedSegre {
    pub j: usize,
    pub v: SeriesVector,
}

/// `v¹, …, v^j` by the recursion `v¹ = γ(0, t¹)`, `v^{k+1} = γ(v̄^k, t^{k+1})`.
pub fn iterate_segre(gamma: &SegreVarietyMapping, j: usize) -> Result<Vec<IteratedSegre>> {
    if j == 0 {
        return Err(Error::Precondition(String::from("iteration index must be at least 1")));
    }
    let n_amb = gamma.ambient_dim();
    let cr = gamma.cr_dim();
    let order = gamma.order();
    let mut out: Vec<IteratedSegre> = Vec::with_capacity(j);
    for k in 1..=j {
        let ctx = iterate_context(cr, k);
        let first_new = cr * (k - 1);
        let fresh = SeriesVector::variables(&ctx, order, first_new..first_new + cr)?;
        let base = match out.last() {
            None => SeriesVector::new(&ctx, vec![TruncatedSeries::zero(&ctx, order); n_amb])?,
            Some(prev) => prev.v.conj_coeffs().embed(&ctx)?,
        };
        let inner = base.concat(&fresh)?;
        let v = compose_vector(gamma.gamma(), &inner)?;
        out.push(IteratedSegre { j: k, v });
    }
    Ok(out)
}

/// Residual `ρ(v^{k+1}, v̄^k)`; identically zero through the tracked order.
pub fn idv_residual(sys: &DefiningSystem, iterates: &[IteratedSegre], k: usize) -> Result<SeriesVector> {
    if k == 0 || iterates.len() < k + 1 {
        return Err(Error::Precondition(alloc::format!("need v^1..v^{} for k = {}", k + 1, k)));
    }
    let next = &iterates[k].v;
    let prev = iterates[k - 1].v.conj_coeffs().embed(next.context())?;
    compose_vector(sys.rho(), &next.concat(&prev)?)
}

/// Residual of the identity `ρ(v^{k+1}, v̄^k) = 0` for the default `γ`.
pub fn check_idv(sys: &DefiningSystem, k: usize) -> Result<SeriesVector> {
    let gamma = solve_gamma(sys, None)?;
    let iterates = iterate_segre(&gamma, k + 1)?;
    idv_residual(sys, &iterates, k)
}

/// Same as [`check_idv`] but a nonzero residual is an error.
pub fn verify_idv(sys: &DefiningSystem, k: usize) -> Result<()> {
    let r = check_idv(sys, k)?;
    if let Some((j, s)) = r.components().iter().enumerate().find(|(_, s)| !s.is_zero()) {
        return Err(Error::Fatal(alloc::format!(
            "iterated Segre identity fails for k = {} in component {}: {}",
            k,
            j + 1,
            s
        )));
    }
    Ok(())
}

/// A Segre variety mapping with its iterates and their rank certificates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegreChain {
    pub gamma: SegreVarietyMapping,
    pub iterates: Vec<IteratedSegre>,
    pub ranks: Vec<RankCertificate>,
}

impl SegreChain {
    pub fn build(sys: &DefiningSystem, solved: Option<&[usize]>, j: usize) -> Result<Self> {
        let gamma = solve_gamma(sys, solved)?;
        let iterates = iterate_segre(&gamma, j)?;
        let ranks = iterates.iter().map(iterate_rank).collect::<Result<Vec<_>>>()?;
        Ok(Self { gamma, iterates, ranks })
    }

    pub fn rank_chain(&self) -> Vec<usize> {
        self.ranks.iter().map(|r| r.certified_rank).collect()
    }
}

/// Generic rank of `v^j` with respect to all its parameter blocks.
pub fn iterate_rank(it: &IteratedSegre) -> Result<RankCertificate> {
    let names: Vec<String> = (1..=it.j).map(t_block_name).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    generic_rank(&it.v, &refs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum SegreFiniteType {
    /// `Rk v^{d+1} = N`, with the certificate for `v^{d+1}`.
    FiniteType(RankCertificate),
    /// `Rk v^{d+1} < N` as far as truncation order `T` can witness.
    NotFiniteTypeToOrder(u32),
}

impl SegreFiniteType {
    pub fn is_finite_type(&self) -> bool {
        matches!(self, Self::FiniteType(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegreFiniteTypeReport {
    pub verdict: SegreFiniteType,
    /// `Rk v¹, …, Rk v^{d+1}`.
    pub rank_chain: Vec<usize>,
    pub chain: SegreChain,
}

/// Finite type at 0 by the rank criterion `Rk v^{d+1} = N`.
pub fn finite_type_segre(sys: &DefiningSystem) -> Result<SegreFiniteTypeReport> {
    let chain = SegreChain::build(sys, None, sys.codim() + 1)?;
    let top = chain.ranks.last().expect("d+1 >= 1").clone();
    let verdict = if top.certified_rank == sys.ambient_dim() {
        SegreFiniteType::FiniteType(top)
    } else {
        SegreFiniteType::NotFiniteTypeToOrder(sys.order())
    };
    Ok(SegreFiniteTypeReport { verdict, rank_chain: chain.rank_chain(), chain })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    /// Each admissible solved-variable set with its rank chain `Rk v¹..Rk v^{d+1}`.
    pub frames: Vec<(Vec<usize>, Vec<usize>)>,
    /// Only one admissible choice existed.
    pub degenerate: bool,
    pub consistent: bool,
}

/// Rank chains under every admissible choice of solved variables.
pub fn gamma_independence_check(sys: &DefiningSystem) -> Result<IndependenceReport> {
    let mut frames = Vec::new();
    for s in sys.admissible_solved_sets() {
        let chain = SegreChain::build(sys, Some(s), sys.codim() + 1)?;
        frames.push((s.clone(), chain.rank_chain()));
    }
    let consistent = frames.windows(2).all(|w| w[0].1 == w[1].1);
    Ok(IndependenceReport { degenerate: frames.len() < 2, frames, consistent })
}

/// Rank chains of `sys` and of the same manifold after each linear change
/// of coordinates in `frames`; all chains must agree.
pub fn rank_chain_across_frames(sys: &DefiningSystem, frames: &[Matrix]) -> Result<Vec<Vec<usize>>> {
    let mut out = vec![SegreChain::build(sys, None, sys.codim() + 1)?.rank_chain()];
    for a in frames {
        let other = sys.linear_change(a)?;
        out.push(SegreChain::build(&other, None, other.codim() + 1)?.rank_chain());
    }
    Ok(out)
}
