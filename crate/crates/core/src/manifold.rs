//! Defining expressions of real submanifolds and their complexification.
//!
//! A real-analytic submanifold `M ⊂ ℂ^N` of codimension `d` is given by
//! `d` real-valued expressions in `Z` and `conj(Z)`. Complexifying treats
//! `conj(Z)` as an independent block `ζ`, producing `ρ(Z, ζ)` in the ring
//! of series in `2N` indeterminates, with the base point moved to the
//! origin.
//!
//! Reality is certified in complexified form: with `conj_swap` meaning
//! "conjugate every coefficient and exchange the `Z` and `ζ` blocks", a
//! system is real when `conj_swap(ρ) = U·ρ` for a constant invertible
//! `d×d` matrix `U`. This accepts constant recombinations of real
//! functions such as `w - τ - 2izχ` (which is `2i` times a real function).

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::coeff::GaussianRational;
use crate::error::{Error, Result};
use crate::linalg::{combinations, Matrix};
use crate::segre::rank::{series_matrix_rank, RankCertificate};
use crate::series::{Context, Monomial, SeriesVector, TruncatedSeries, VarBlock};

/// Name of the holomorphic variable block.
pub const Z_BLOCK: &str = "Z";
/// Name of the complexified conjugate block.
pub const ZETA_BLOCK: &str = "zeta";

/// Default truncation order `2(d+1) + 4`.
pub fn default_order(d: usize) -> u32 {
    2 * (d as u32 + 1) + 4
}

/// Expression tree for a defining function. Variable indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DefiningExpr {
    Const(GaussianRational),
    Z(usize),
    /// The complexified conjugate variable `ζ_i`; same as `Conj(Z(i))`.
    Zeta(usize),
    Add(Box<DefiningExpr>, Box<DefiningExpr>),
    Sub(Box<DefiningExpr>, Box<DefiningExpr>),
    Mul(Box<DefiningExpr>, Box<DefiningExpr>),
    /// Division by an expression that evaluates to a nonzero constant.
    Div(Box<DefiningExpr>, Box<DefiningExpr>),
    Neg(Box<DefiningExpr>),
    Pow(Box<DefiningExpr>, u32),
    Conj(Box<DefiningExpr>),
    Re(Box<DefiningExpr>),
    Im(Box<DefiningExpr>),
    /// `u * conj(u)`.
    Abs2(Box<DefiningExpr>),
}

impl DefiningExpr {
    pub fn z(i: usize) -> Self {
        Self::Z(i)
    }

    pub fn int(n: i64) -> Self {
        Self::Const(GaussianRational::int(n))
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::Const(c)
    }

    pub fn re(e: Self) -> Self {
        Self::Re(Box::new(e))
    }

    pub fn im(e: Self) -> Self {
        Self::Im(Box::new(e))
    }

    pub fn abs2(e: Self) -> Self {
        Self::Abs2(Box::new(e))
    }

    pub fn conj(e: Self) -> Self {
        Self::Conj(Box::new(e))
    }

    pub fn pow(self, e: u32) -> Self {
        Self::Pow(Box::new(self), e)
    }

    /// Largest variable index used, if any.
    pub fn max_index(&self) -> Option<usize> {
        match self {
            Self::Const(_) => None,
            Self::Z(i) | Self::Zeta(i) => Some(*i),
            Self::Add(a, b) | Self::Sub(a, b) | Self::Mul(a, b) | Self::Div(a, b) => {
                match (a.max_index(), b.max_index()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
            Self::Neg(a) | Self::Pow(a, _) | Self::Conj(a) | Self::Re(a) | Self::Im(a) | Self::Abs2(a) => a.max_index(),
        }
    }

    /// True when no conjugation (explicit or implied) occurs.
    pub fn is_holomorphic(&self) -> bool {
        match self {
            Self::Const(_) | Self::Z(_) => true,
            Self::Zeta(_) | Self::Conj(_) | Self::Re(_) | Self::Im(_) | Self::Abs2(_) => false,
            Self::Add(a, b) | Self::Sub(a, b) | Self::Mul(a, b) | Self::Div(a, b) => {
                a.is_holomorphic() && b.is_holomorphic()
            }
            Self::Neg(a) | Self::Pow(a, _) => a.is_holomorphic(),
        }
    }

    /// Value at a point `Z = point`, conjugates taken literally.
    pub fn evaluate(&self, point: &[GaussianRational]) -> Result<GaussianRational> {
        Ok(match self {
            Self::Const(c) => c.clone(),
            Self::Z(i) => point.get(*i).cloned().ok_or(Error::UnknownVariable(*i))?,
            Self::Zeta(i) => point.get(*i).ok_or(Error::UnknownVariable(*i))?.conj(),
            Self::Add(a, b) => &a.evaluate(point)? + &b.evaluate(point)?,
            Self::Sub(a, b) => &a.evaluate(point)? - &b.evaluate(point)?,
            Self::Mul(a, b) => &a.evaluate(point)? * &b.evaluate(point)?,
            Self::Div(a, b) => {
                let den = b.evaluate(point)?;
                let inv = den.inv().ok_or_else(|| Error::InvalidManifold(String::from("division by zero")))?;
                &a.evaluate(point)? * &inv
            }
            Self::Neg(a) => -a.evaluate(point)?,
            Self::Pow(a, e) => {
                let base = a.evaluate(point)?;
                let mut acc = GaussianRational::one();
                for _ in 0..*e {
                    acc = &acc * &base;
                }
                acc
            }
            Self::Conj(a) => a.evaluate(point)?.conj(),
            Self::Re(a) => GaussianRational::real(a.evaluate(point)?.re),
            Self::Im(a) => GaussianRational::real(a.evaluate(point)?.im),
            Self::Abs2(a) => GaussianRational::real(a.evaluate(point)?.norm_sqr()),
        })
    }
}

macro_rules! expr_binop {
    ($tr:ident, $method:ident, $variant:ident) => {
        impl core::ops::$tr for DefiningExpr {
            type Output = DefiningExpr;
            fn $method(self, rhs: DefiningExpr) -> DefiningExpr {
                DefiningExpr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}
expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);
expr_binop!(Div, div, Div);

impl core::ops::Neg for DefiningExpr {
    type Output = DefiningExpr;
    fn neg(self) -> DefiningExpr {
        DefiningExpr::Neg(Box::new(self))
    }
}

impl fmt::Display for DefiningExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Const(c) => write!(f, "({})", c),
            Self::Z(i) => write!(f, "Z{}", i + 1),
            Self::Zeta(i) => write!(f, "zeta{}", i + 1),
            Self::Add(a, b) => write!(f, "({} + {})", a, b),
            Self::Sub(a, b) => write!(f, "({} - {})", a, b),
            Self::Mul(a, b) => write!(f, "{}*{}", a, b),
            Self::Div(a, b) => write!(f, "{}/{}", a, b),
            Self::Neg(a) => write!(f, "-{}", a),
            Self::Pow(a, e) => write!(f, "{}^{}", a, e),
            Self::Conj(a) => write!(f, "conj({})", a),
            Self::Re(a) => write!(f, "Re({})", a),
            Self::Im(a) => write!(f, "Im({})", a),
            Self::Abs2(a) => write!(f, "abs2({})", a),
        }
    }
}

/// A germ `(M, p)` as the user describes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldSpec {
    pub ambient_dim: usize,
    pub codim: usize,
    pub exprs: Vec<DefiningExpr>,
    pub basepoint: Vec<GaussianRational>,
    pub order: u32,
}

impl ManifoldSpec {
    /// Validated spec; `basepoint = None` means the origin, `order = None`
    /// the default `2(d+1)+4`.
    pub fn new(
        ambient_dim: usize,
        codim: usize,
        exprs: Vec<DefiningExpr>,
        basepoint: Option<Vec<GaussianRational>>,
        order: Option<u32>,
    ) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::InvalidManifold(String::from("N must be at least 1")));
        }
        if codim == 0 || codim > ambient_dim {
            return Err(Error::InvalidManifold(alloc::format!(
                "codimension d = {} must satisfy 1 <= d <= N = {}",
                codim,
                ambient_dim
            )));
        }
        if exprs.len() != codim {
            return Err(Error::InvalidManifold(alloc::format!(
                "expected d = {} defining expressions, found {}",
                codim,
                exprs.len()
            )));
        }
        for (j, e) in exprs.iter().enumerate() {
            if let Some(i) = e.max_index() {
                if i >= ambient_dim {
                    return Err(Error::InvalidManifold(alloc::format!(
                        "expression {} uses variable index {} but N = {}",
                        j + 1,
                        i + 1,
                        ambient_dim
                    )));
                }
            }
        }
        let basepoint = basepoint.unwrap_or_else(|| vec![GaussianRational::zero(); ambient_dim]);
        if basepoint.len() != ambient_dim {
            return Err(Error::InvalidManifold(alloc::format!(
                "base point has {} coordinates, expected {}",
                basepoint.len(),
                ambient_dim
            )));
        }
        let order = order.unwrap_or_else(|| default_order(codim));
        Ok(Self { ambient_dim, codim, exprs, basepoint, order })
    }
}

/// The `(Z, ζ)` context for ambient dimension `n`.
pub fn z_zeta_context(n: usize) -> Context {
    Context::new(vec![VarBlock::new(Z_BLOCK, n), VarBlock::new(ZETA_BLOCK, n)]).expect("distinct names")
}

/// The `Z` context for ambient dimension `n`.
pub fn z_context(n: usize) -> Context {
    Context::new(vec![VarBlock::new(Z_BLOCK, n)]).expect("single block")
}

/// Conjugate coefficients and exchange the `Z` and `ζ` blocks.
pub fn conj_swap(s: &TruncatedSeries) -> TruncatedSeries {
    let n = s.context().nvars() / 2;
    let mut out = TruncatedSeries::zero(s.context(), s.order());
    for (m, c) in s.terms() {
        let e = m.exponents();
        let mut swapped = Vec::with_capacity(2 * n);
        swapped.extend_from_slice(&e[n..]);
        swapped.extend_from_slice(&e[..n]);
        out.add_term(Monomial::new(swapped), c.conj());
    }
    out
}

fn complexify_expr(
    e: &DefiningExpr,
    ctx: &Context,
    order: u32,
    z: &[TruncatedSeries],
    zeta: &[TruncatedSeries],
) -> Result<TruncatedSeries> {
    let rec = |x: &DefiningExpr| complexify_expr(x, ctx, order, z, zeta);
    let half = GaussianRational::from_fracs(1, 2, 0, 1);
    Ok(match e {
        DefiningExpr::Const(c) => TruncatedSeries::constant(ctx, order, c.clone()),
        DefiningExpr::Z(i) => z.get(*i).cloned().ok_or(Error::UnknownVariable(*i))?,
        DefiningExpr::Zeta(i) => zeta.get(*i).cloned().ok_or(Error::UnknownVariable(*i))?,
        DefiningExpr::Add(a, b) => rec(a)?.add(&rec(b)?)?,
        DefiningExpr::Sub(a, b) => rec(a)?.sub(&rec(b)?)?,
        DefiningExpr::Mul(a, b) => rec(a)?.mul(&rec(b)?)?,
        DefiningExpr::Div(a, b) => {
            let den = rec(b)?;
            let c = den.constant_term();
            if den.terms().any(|(m, _)| m.degree() > 0) || c.is_zero() {
                return Err(Error::InvalidManifold(String::from("division is only allowed by a nonzero constant")));
            }
            rec(a)?.scale(&c.inv().expect("nonzero"))
        }
        DefiningExpr::Neg(a) => rec(a)?.neg(),
        DefiningExpr::Pow(a, k) => rec(a)?.pow(*k)?,
        DefiningExpr::Conj(a) => conj_swap(&rec(a)?),
        DefiningExpr::Re(a) => {
            let p = rec(a)?;
            p.add(&conj_swap(&p))?.scale(&half)
        }
        DefiningExpr::Im(a) => {
            let p = rec(a)?;
            let two_i_inv = GaussianRational::from_fracs(0, 1, -1, 2);
            p.sub(&conj_swap(&p))?.scale(&two_i_inv)
        }
        DefiningExpr::Abs2(a) => {
            let p = rec(a)?;
            p.mul(&conj_swap(&p))?
        }
    })
}

/// A holomorphic expression as a series in `Z` (ambient dimension `n`).
pub fn holomorphic_series(e: &DefiningExpr, n: usize, order: u32) -> Result<TruncatedSeries> {
    if !e.is_holomorphic() {
        return Err(Error::Precondition(String::from("expression is not holomorphic in Z")));
    }
    if let Some(i) = e.max_index() {
        if i >= n {
            return Err(Error::UnknownVariable(i));
        }
    }
    let ctx = z_context(n);
    let z: Vec<TruncatedSeries> = (0..n).map(|i| TruncatedSeries::var(&ctx, order, i)).collect::<Result<_>>()?;
    complexify_expr(e, &ctx, order, &z, &[])
}

/// Complexified defining functions with a verified reality certificate,
/// before any genericity requirement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexifiedSystem {
    ambient_dim: usize,
    rho: SeriesVector,
    reality: Matrix,
    scale: Vec<GaussianRational>,
}

impl ComplexifiedSystem {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn codim(&self) -> usize {
        self.rho.len()
    }

    pub fn rho(&self) -> &SeriesVector {
        &self.rho
    }

    pub fn order(&self) -> u32 {
        self.rho.order()
    }

    /// The certificate `U` with `conj_swap(ρ) = U·ρ`.
    pub fn reality_matrix(&self) -> &Matrix {
        &self.reality
    }

    /// Factors `c_j` with `ρ_j = c_j · (complexified input j)`.
    pub fn normalization(&self) -> &[GaussianRational] {
        &self.scale
    }

    /// `d×N` matrix of `∂ρ_j/∂Z_k` at the origin.
    pub fn z_gradient_at_zero(&self) -> Matrix {
        gradient_at_zero(&self.rho, 0, self.ambient_dim)
    }

    /// `d×N` matrix of `∂ρ_j/∂ζ_k` at the origin.
    pub fn zeta_gradient_at_zero(&self) -> Matrix {
        gradient_at_zero(&self.rho, self.ambient_dim, self.ambient_dim)
    }

    /// The `d×N` matrix of series `∂ρ_j/∂Z_k`.
    pub fn z_gradient(&self) -> Result<Vec<Vec<TruncatedSeries>>> {
        (0..self.codim()).map(|j| (0..self.ambient_dim).map(|k| self.rho[j].differentiate(k)).collect()).collect()
    }
}

fn gradient_at_zero(rho: &SeriesVector, offset: usize, n: usize) -> Matrix {
    let nvars = rho.context().nvars();
    let mut m = Matrix::zeros(rho.len(), n);
    for j in 0..rho.len() {
        for k in 0..n {
            m[(j, k)] = rho[j].coeff(&Monomial::var(nvars, offset + k));
        }
    }
    m
}

/// Complexify a spec: eliminate `Re`/`Im`/`abs2`/`conj` via `Z̄ ↦ ζ`,
/// translate the base point to the origin, normalize and certify reality.
/// Genericity is not required here.
pub fn complexify_raw(spec: &ManifoldSpec) -> Result<ComplexifiedSystem> {
    let n = spec.ambient_dim;
    let order = spec.order;
    let ctx = z_zeta_context(n);
    let mut z = Vec::with_capacity(n);
    let mut zeta = Vec::with_capacity(n);
    for i in 0..n {
        let p = &spec.basepoint[i];
        z.push(TruncatedSeries::var(&ctx, order, i)?.add(&TruncatedSeries::constant(&ctx, order, p.clone()))?);
        zeta.push(TruncatedSeries::var(&ctx, order, n + i)?.add(&TruncatedSeries::constant(&ctx, order, p.conj()))?);
    }
    let mut rho = Vec::with_capacity(spec.codim);
    for (j, e) in spec.exprs.iter().enumerate() {
        let s = complexify_expr(e, &ctx, order, &z, &zeta)?;
        if !s.constant_term().is_zero() {
            return Err(Error::BasePointNotOnManifold { index: j + 1 });
        }
        rho.push(s);
    }
    let rho = SeriesVector::new(&ctx, rho)?;
    build_complexified(n, rho)
}

/// Accept already-complexified `ρ(Z, ζ)` (context `(Z, ζ)`, vanishing at 0);
/// normalizes and certifies reality.
pub fn from_complexified(ambient_dim: usize, rho: SeriesVector) -> Result<ComplexifiedSystem> {
    if *rho.context() != z_zeta_context(ambient_dim) {
        return Err(Error::ContextMismatch);
    }
    for (j, s) in rho.components().iter().enumerate() {
        if !s.constant_term().is_zero() {
            return Err(Error::BasePointNotOnManifold { index: j + 1 });
        }
    }
    build_complexified(ambient_dim, rho)
}

fn build_complexified(n: usize, rho: SeriesVector) -> Result<ComplexifiedSystem> {
    let ctx = rho.context().clone();
    let nvars = ctx.nvars();
    // Rescale each component so that the last nonzero entry of its Z-gradient at 0 is 1.
    let mut scale = Vec::with_capacity(rho.len());
    let mut normalized = Vec::with_capacity(rho.len());
    for s in rho.components() {
        let lead = (0..n).rev().map(|k| s.coeff(&Monomial::var(nvars, k))).find(|c| !c.is_zero());
        let c = match lead {
            Some(c) => c.inv().expect("nonzero"),
            None => GaussianRational::one(),
        };
        normalized.push(s.scale(&c));
        scale.push(c);
    }
    let rho = SeriesVector::new(&ctx, normalized)?;
    let reality = reality_certificate(&rho)?;
    Ok(ComplexifiedSystem { ambient_dim: n, rho, reality, scale })
}

/// Find the constant `U` with `conj_swap(ρ) = U·ρ`, verifying all terms.
fn reality_certificate(rho: &SeriesVector) -> Result<Matrix> {
    let d = rho.len();
    let swapped: Vec<TruncatedSeries> = rho.components().iter().map(conj_swap).collect();
    let mut monomials: Vec<Monomial> = Vec::new();
    for s in rho.components().iter().chain(swapped.iter()) {
        for (m, _) in s.terms() {
            monomials.push(m.clone());
        }
    }
    monomials.sort();
    monomials.dedup();
    let lowest: Vec<Monomial> = monomials.iter().filter(|m| m.degree() <= 1).cloned().collect();
    let coeff_matrix = |ms: &[Monomial]| {
        let mut a = Matrix::zeros(ms.len(), d);
        for (r, m) in ms.iter().enumerate() {
            for k in 0..d {
                a[(r, k)] = rho[k].coeff(m);
            }
        }
        a
    };
    let linear = coeff_matrix(&lowest);
    let full = coeff_matrix(&monomials);
    let use_linear = linear.rank() == d;
    let mut u = Matrix::zeros(d, d);
    for j in 0..d {
        let (a, ms) = if use_linear { (&linear, &lowest) } else { (&full, &monomials) };
        let b: Vec<GaussianRational> = ms.iter().map(|m| swapped[j].coeff(m)).collect();
        let x = a.solve(&b).ok_or_else(|| {
            Error::RealityFailure(alloc::format!(
                "no constant recombination of the defining functions equals the conjugate of function {} at lowest order",
                j + 1
            ))
        })?;
        for k in 0..d {
            u[(j, k)] = x[k].clone();
        }
    }
    for j in 0..d {
        let mut combo = TruncatedSeries::zero(rho.context(), rho.order());
        for k in 0..d {
            combo = combo.add(&rho[k].scale(&u[(j, k)]))?;
        }
        let diff = combo.sub(&swapped[j])?;
        if let Some((m, _)) = diff.lowest_term() {
            return Err(Error::RealityFailure(alloc::format!(
                "conj-swap of function {} differs from U·rho at degree {}",
                j + 1,
                m.degree()
            )));
        }
    }
    if u.determinant().is_zero() {
        return Err(Error::RealityFailure(String::from("reality matrix U is singular")));
    }
    Ok(u)
}

/// Verdict on the CR number `r(0) = d - rank{ρ_{j,Z}(0)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrVerdict {
    /// `r(0) = 0`.
    Generic,
    /// `r(0) > 0` but the gradient rank at 0 equals the certified generic rank.
    CrCertified { r: usize },
    /// The gradient rank drops at 0.
    NotCrAtZero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrNumber {
    pub rank_at_zero: usize,
    pub generic_rank: RankCertificate,
    pub r_at_zero: usize,
    pub verdict: CrVerdict,
}

/// CR number of a complexified system.
pub fn cr_number(sys: &ComplexifiedSystem) -> Result<CrNumber> {
    let d = sys.codim();
    let rank_at_zero = sys.z_gradient_at_zero().rank();
    let grad = sys.z_gradient()?;
    let cols: Vec<usize> = (0..sys.ambient_dim()).collect();
    let generic_rank = series_matrix_rank(&grad, &cols)?;
    let r_at_zero = d - rank_at_zero;
    let verdict = if r_at_zero == 0 {
        CrVerdict::Generic
    } else if rank_at_zero == generic_rank.certified_rank {
        CrVerdict::CrCertified { r: r_at_zero }
    } else {
        CrVerdict::NotCrAtZero
    };
    Ok(CrNumber { rank_at_zero, generic_rank, r_at_zero, verdict })
}

/// A validated, generic, complexified defining system at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningSystem {
    raw: ComplexifiedSystem,
    admissible: Vec<Vec<usize>>,
}

impl DefiningSystem {
    /// Require genericity at the origin: the `Z`-gradients at 0 are independent.
    pub fn new(raw: ComplexifiedSystem) -> Result<Self> {
        let d = raw.codim();
        let grad = raw.z_gradient_at_zero();
        let rank = grad.rank();
        if rank < d {
            return Err(Error::NotGeneric { r: d - rank });
        }
        let n = raw.ambient_dim();
        let zeta_grad = raw.zeta_gradient_at_zero();
        let admissible: Vec<Vec<usize>> = combinations(n, d)
            .into_iter()
            .filter(|s| {
                let rows: Vec<usize> = (0..d).collect();
                !grad.select(&rows, s).determinant().is_zero() && !zeta_grad.select(&rows, s).determinant().is_zero()
            })
            .collect();
        if admissible.is_empty() {
            return Err(Error::Fatal(String::from("generic system without an admissible solved-variable set")));
        }
        Ok(Self { raw, admissible })
    }

    pub fn raw(&self) -> &ComplexifiedSystem {
        &self.raw
    }

    pub fn ambient_dim(&self) -> usize {
        self.raw.ambient_dim
    }

    pub fn codim(&self) -> usize {
        self.raw.codim()
    }

    /// `n = N - d`, the CR dimension.
    pub fn cr_dim(&self) -> usize {
        self.ambient_dim() - self.codim()
    }

    pub fn rho(&self) -> &SeriesVector {
        &self.raw.rho
    }

    pub fn order(&self) -> u32 {
        self.raw.order()
    }

    pub fn context(&self) -> &Context {
        self.raw.rho.context()
    }

    pub fn gradient_rank(&self) -> usize {
        self.codim()
    }

    pub fn reality_matrix(&self) -> &Matrix {
        &self.raw.reality
    }

    /// All `d`-subsets `S` of Z-indices whose `d×d` minors of `∂ρ/∂Z(0)`
    /// and `∂ρ/∂ζ(0)` are invertible, in lexicographic order.
    pub fn admissible_solved_sets(&self) -> &[Vec<usize>] {
        &self.admissible
    }

    /// The lexicographically last admissible set (prefers high indices).
    pub fn default_solved(&self) -> &[usize] {
        self.admissible.last().expect("nonempty")
    }

    /// Same manifold in new linear coordinates `Z = A·Z'` (so `ζ = Ā·ζ'`),
    /// renormalized and revalidated.
    pub fn linear_change(&self, a: &Matrix) -> Result<DefiningSystem> {
        let n = self.ambient_dim();
        if a.rows() != n || a.cols() != n || a.determinant().is_zero() {
            return Err(Error::DimensionMismatch(String::from("coordinate change must be an invertible NxN matrix")));
        }
        let ctx = self.context().clone();
        let order = self.order();
        let mut inner = Vec::with_capacity(2 * n);
        for conj in [false, true] {
            for i in 0..n {
                let mut s = TruncatedSeries::zero(&ctx, order);
                for k in 0..n {
                    let c = if conj { a[(i, k)].conj() } else { a[(i, k)].clone() };
                    let var = if conj { n + k } else { k };
                    s = s.add(&TruncatedSeries::var(&ctx, order, var)?.scale(&c))?;
                }
                inner.push(s);
            }
        }
        let inner = SeriesVector::new(&ctx, inner)?;
        let rho = crate::series::compose_vector(self.rho(), &inner)?;
        DefiningSystem::new(from_complexified(n, rho)?)
    }

    /// Canonical text form, used for golden files.
    pub fn to_canonical_string(&self) -> String {
        let mut out = alloc::format!("N={}\nd={}\norder={}\n", self.ambient_dim(), self.codim(), self.order());
        out.push_str("U=");
        let u = self.reality_matrix();
        for i in 0..u.rows() {
            if i > 0 {
                out.push(';');
            }
            for j in 0..u.cols() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&u[(i, j)].to_canonical_string());
            }
        }
        out.push('\n');
        for (j, s) in self.rho().components().iter().enumerate() {
            out.push_str(&alloc::format!("rho{}: {}\n", j + 1, s.to_canonical_string()));
        }
        out
    }
}

/// Complexify and require genericity.
pub fn complexify(spec: &ManifoldSpec) -> Result<DefiningSystem> {
    DefiningSystem::new(complexify_raw(spec)?)
}

/// `Im(Z2) - |Z1|^2` at the origin.
pub fn lewy_spec(order: u32) -> ManifoldSpec {
    let e = DefiningExpr::im(DefiningExpr::z(1)) - DefiningExpr::abs2(DefiningExpr::z(0));
    ManifoldSpec::new(2, 1, vec![e], None, Some(order)).expect("valid")
}

/// Canonically normalized Lewy system `w - τ - 2izχ`.
pub fn lewy_system(order: u32) -> DefiningSystem {
    complexify(&lewy_spec(order)).expect("Lewy hypersurface is generic")
}
