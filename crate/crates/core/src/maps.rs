//! Formal mappings between pointed spaces, the "sends `M` into `M′`" test,
//! classification, jet comparison and the reflection computation on the
//! Lewy hypersurface.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::coeff::GaussianRational;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::manifold::{lewy_system, z_context, DefiningSystem};
use crate::segre::{iterate_segre, solve_gamma};
use crate::series::{compose, compose_vector, Context, Monomial, SeriesVector, TruncatedSeries, VarBlock};

/// `F = (F_1, …, F_{N′})` in the `Z` variables of `ℂ^N`, with `F(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalMap {
    components: SeriesVector,
}

impl FormalMap {
    pub fn new(components: SeriesVector) -> Result<Self> {
        for (i, c) in components.components().iter().enumerate() {
            if !c.constant_term().is_zero() {
                return Err(Error::MapNotBasePointPreserving { index: i });
            }
        }
        Ok(Self { components })
    }

    pub fn identity(n: usize, order: u32) -> Self {
        let ctx = z_context(n);
        Self { components: SeriesVector::variables(&ctx, order, 0..n).expect("in range") }
    }

    pub fn source_dim(&self) -> usize {
        self.components.context().nvars()
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> u32 {
        self.components.order()
    }

    pub fn components(&self) -> &SeriesVector {
        &self.components
    }

    pub fn context(&self) -> &Context {
        self.components.context()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &FormalMap) -> Result<FormalMap> {
        FormalMap::new(compose_vector(&self.components, &inner.components)?)
    }

    /// `dF(0)` as an `N′ × N` matrix.
    pub fn jacobian_at_zero(&self) -> Matrix {
        let n = self.source_dim();
        let mut m = Matrix::zeros(0, 0);
        for c in self.components.components() {
            m.push_row((0..n).map(|j| c.coeff(&Monomial::var(n, j))).collect());
        }
        if m.rows() == 0 {
            return Matrix::zeros(0, n);
        }
        m
    }

    pub fn truncated(&self, order: u32) -> FormalMap {
        FormalMap { components: self.components.truncated(order) }
    }
}

/// Lowest-degree term of a nonzero residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OffendingTerm {
    pub component: usize,
    pub monomial: Monomial,
    pub coeff: GaussianRational,
}

impl OffendingTerm {
    pub fn degree(&self) -> u32 {
        self.monomial.degree()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SendsIntoReport {
    /// `ρ′(F(γ(ζ,t)), F̄(ζ))` in the `(ζ, t)` variables.
    pub residual: SeriesVector,
    pub passes: bool,
    pub offending: Option<OffendingTerm>,
    /// Order through which the residual is exact.
    pub order: u32,
}

fn check_dims(f: &FormalMap, m: &DefiningSystem, m2: &DefiningSystem) -> Result<()> {
    if f.source_dim() != m.ambient_dim() || f.target_dim() != m2.ambient_dim() {
        return Err(Error::DimensionMismatch(alloc::format!(
            "map ℂ^{} → ℂ^{} between manifolds in ℂ^{} and ℂ^{}",
            f.source_dim(),
            f.target_dim(),
            m.ambient_dim(),
            m2.ambient_dim()
        )));
    }
    Ok(())
}

fn lowest_offending(residual: &SeriesVector) -> Option<OffendingTerm> {
    residual
        .components()
        .iter()
        .enumerate()
        .filter_map(|(i, s)| s.lowest_term().map(|(m, c)| (i, m.clone(), c.clone())))
        .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
        .map(|(component, monomial, coeff)| OffendingTerm { component, monomial, coeff })
}

/// Does `F` send `M` into `M′` as a formal identity?
///
/// The complexification of `M` is parametrized by `(ζ, t) ↦ (γ(ζ,t), ζ)`,
/// so `ρ′(F(Z), F̄(ζ))` vanishes on it iff the substituted series is zero.
pub fn sends_into(f: &FormalMap, m: &DefiningSystem, m2: &DefiningSystem) -> Result<SendsIntoReport> {
    check_dims(f, m, m2)?;
    let gamma = solve_gamma(m, None)?;
    let gctx = gamma.gamma().context().clone();
    let order = gamma.order().min(f.order()).min(m2.order());
    let zeta = SeriesVector::variables(&gctx, order, 0..m.ambient_dim())?;
    let fz = compose_vector(f.components(), &gamma.gamma().truncated(order))?;
    let fbar = compose_vector(&f.components().conj_coeffs(), &zeta)?;
    let residual = compose_vector(m2.rho(), &fz.concat(&fbar)?)?;
    let offending = lowest_offending(&residual);
    Ok(SendsIntoReport { passes: offending.is_none(), order: residual.order(), residual, offending })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Finiteness {
    /// `dim ℂ[[Z]]/(F)` certified.
    Finite(usize),
    NotCertified,
    /// Finiteness is defined for maps `(ℂ^N, 0) → (ℂ^N, 0)` only.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapClassification {
    pub invertible: bool,
    pub finite: Finiteness,
    pub cr_transversal: bool,
    /// `dim ℂ[Z]/((F) + m^c)` for `c = 1, 2, …` as computed.
    pub quotient_dims: Vec<usize>,
}

/// Monomials of total degree `< cap` in `n` variables, indexed.
fn monomial_index(n: usize, cap: u32) -> BTreeMap<Vec<u32>, usize> {
    let mut out = BTreeMap::new();
    let mut stack: Vec<(Vec<u32>, u32)> = vec![(Vec::new(), 0)];
    while let Some((prefix, deg)) = stack.pop() {
        if prefix.len() == n {
            let k = out.len();
            out.insert(prefix, k);
            continue;
        }
        for e in 0..cap - deg {
            let mut p = prefix.clone();
            p.push(e);
            stack.push((p, deg + e));
        }
    }
    for (k, v) in out.values_mut().enumerate() {
        *v = k;
    }
    out
}

/// `dim ℂ[Z]/((F) + m^cap)`; needs `cap - 1 <= order(F)`.
pub fn quotient_dimension(f: &FormalMap, cap: u32) -> Result<usize> {
    if cap == 0 {
        return Ok(0);
    }
    if cap - 1 > f.order() {
        return Err(Error::JetOrderTooLarge { requested: cap - 1, order: f.order() });
    }
    let n = f.source_dim();
    let index = monomial_index(n, cap);
    let mut m = Matrix::zeros(0, 0);
    for comp in f.components().components() {
        let Some(val) = comp.valuation() else { continue };
        if val >= cap {
            continue;
        }
        for beta in index.keys() {
            let bdeg: u32 = beta.iter().sum();
            if bdeg + val >= cap {
                continue;
            }
            let mut row = vec![GaussianRational::zero(); index.len()];
            for (mono, c) in comp.terms() {
                if mono.degree() + bdeg >= cap {
                    continue;
                }
                let exps: Vec<u32> = mono.exponents().iter().zip(beta).map(|(a, b)| a + b).collect();
                row[index[&exps]] += c;
            }
            m.push_row(row);
        }
    }
    Ok(index.len() - if m.rows() == 0 { 0 } else { m.rank() })
}

/// Finite codimension of `(F)` certified when `dim ℂ[Z]/((F) + m^c)` is
/// equal for two consecutive caps `c, c + 1` (then `m^c ⊂ (F)` by
/// Nakayama's lemma).
pub fn finiteness(f: &FormalMap) -> Result<(Finiteness, Vec<usize>)> {
    if f.source_dim() != f.target_dim() {
        return Ok((Finiteness::NotApplicable, Vec::new()));
    }
    let mut dims: Vec<usize> = Vec::new();
    for cap in 1..=f.order() + 1 {
        let dim = quotient_dimension(f, cap)?;
        if dims.last() == Some(&dim) {
            dims.push(dim);
            return Ok((Finiteness::Finite(dim), dims));
        }
        dims.push(dim);
    }
    Ok((Finiteness::NotCertified, dims))
}

/// `dF(0)(ℂT_0M) ⊄ 𝒱′_0 ⊕ 𝒱̄′_0`.
///
/// In the `(Z, ζ)` splitting a complex tangent vector of `M` at 0 is a pair
/// `(X, Y)` with `ρ_Z(0)X + ρ_ζ(0)Y = 0`; `dF(0)` sends it to
/// `(F′(0)X, conj(F′(0))Y)`, which lies in `𝒱′_0 ⊕ 𝒱̄′_0` iff
/// `ρ′_Z(0)F′(0)X = 0` and `ρ′_ζ(0)conj(F′(0))Y = 0`.
pub fn cr_transversal(f: &FormalMap, m: &DefiningSystem, m2: &DefiningSystem) -> Result<bool> {
    check_dims(f, m, m2)?;
    let n = m.ambient_dim();
    let rz = m.raw().z_gradient_at_zero();
    let rzeta = m.raw().zeta_gradient_at_zero();
    let mut stacked = Matrix::zeros(0, 0);
    for i in 0..rz.rows() {
        let mut row = rz.row(i).to_vec();
        row.extend_from_slice(rzeta.row(i));
        stacked.push_row(row);
    }
    let tangent = stacked.kernel();
    let jac = f.jacobian_at_zero();
    let jac_bar = conj_matrix(&jac);
    let a = m2.raw().z_gradient_at_zero().mul(&jac);
    let b = m2.raw().zeta_gradient_at_zero().mul(&jac_bar);
    for v in &tangent {
        let x = &v[..n];
        let y = &v[n..];
        if a.mul_vec(x).iter().any(|c| !c.is_zero()) || b.mul_vec(y).iter().any(|c| !c.is_zero()) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn conj_matrix(m: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(0, 0);
    for i in 0..m.rows() {
        out.push_row(m.row(i).iter().map(|c| c.conj()).collect());
    }
    if out.rows() == 0 {
        return Matrix::zeros(0, m.cols());
    }
    out
}

/// Invertible when `N = N′` and `det dF(0) ≠ 0`.
pub fn is_invertible(f: &FormalMap) -> bool {
    f.source_dim() == f.target_dim() && !f.jacobian_at_zero().determinant().is_zero()
}

/// Classification of a map already known to send `M` into `M′`.
pub fn classify(f: &FormalMap, m: &DefiningSystem, m2: &DefiningSystem) -> Result<MapClassification> {
    let report = sends_into(f, m, m2)?;
    if !report.passes {
        return Err(Error::Precondition(String::from("the map does not send the source into the target")));
    }
    let invertible = is_invertible(f);
    let (finite, quotient_dims) = finiteness(f)?;
    let cr_transversal = cr_transversal(f, m, m2)?;
    Ok(MapClassification { invertible, finite, cr_transversal, quotient_dims })
}

/// All components agree through total degree `k`.
pub fn jets_agree(f: &FormalMap, g: &FormalMap, k: u32) -> Result<bool> {
    if f.source_dim() != g.source_dim() || f.target_dim() != g.target_dim() {
        return Err(Error::DimensionMismatch(String::from("maps have different source or target")));
    }
    SeriesVector::jets_equal(f.components(), g.components(), k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminationReport {
    pub k: u32,
    /// Indices into the family, grouped by equal `k`-jets, in first-seen order.
    pub classes: Vec<Vec<usize>>,
    /// Classes holding at least two different maps.
    pub counterexamples: Vec<Vec<usize>>,
}

impl DeterminationReport {
    pub fn determination_fails(&self) -> bool {
        !self.counterexamples.is_empty()
    }
}

/// Group maps sending `M` into `M′` by their `k`-jets.
pub fn determination_experiment(
    m: &DefiningSystem,
    m2: &DefiningSystem,
    family: &[FormalMap],
    k: u32,
) -> Result<DeterminationReport> {
    for (i, f) in family.iter().enumerate() {
        if !sends_into(f, m, m2)?.passes {
            return Err(Error::Precondition(alloc::format!("map {} does not send the source into the target", i)));
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, f) in family.iter().enumerate() {
        let mut placed = false;
        for class in classes.iter_mut() {
            if jets_agree(&family[class[0]], f, k)? {
                class.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![i]);
        }
    }
    let counterexamples = classes
        .iter()
        .filter(|c| c.iter().any(|&i| family[i].components() != family[c[0]].components()))
        .cloned()
        .collect();
    Ok(DeterminationReport { k, classes, counterexamples })
}

/// First-jet data of `f̄` and `ḡ` along `t ↦ (t, 0)`, as series in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionJets {
    pub f_bar: TruncatedSeries,
    pub f_bar_chi: TruncatedSeries,
    pub f_bar_tau: TruncatedSeries,
    pub g_bar: TruncatedSeries,
    pub g_bar_tau: TruncatedSeries,
}

impl ReflectionJets {
    /// Compare through the smaller of the two tracked orders per entry.
    pub fn agrees_with(&self, other: &ReflectionJets) -> Result<bool> {
        let pairs = [
            (&self.f_bar, &other.f_bar),
            (&self.f_bar_chi, &other.f_bar_chi),
            (&self.f_bar_tau, &other.f_bar_tau),
            (&self.g_bar, &other.g_bar),
            (&self.g_bar_tau, &other.g_bar_tau),
        ];
        for (a, b) in pairs {
            let k = a.order().min(b.order());
            if !TruncatedSeries::jets_equal(a, b, k)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionResult {
    /// `R(t¹, t²)` with `f̄(v̄²(t¹,t²)) = R(t¹,t²)`.
    pub r: TruncatedSeries,
    pub matched_through: u32,
    /// Recovered from `R` alone.
    pub jets: ReflectionJets,
    /// Read off the map directly, for comparison.
    pub direct: ReflectionJets,
    pub jets_match: bool,
    pub v2: SeriesVector,
    pub v3: SeriesVector,
}

fn single_var_context() -> Context {
    Context::new(vec![VarBlock::new("t", 1)]).expect("one block")
}

/// `h(0, t)` for `h` in `(t¹, t²)`, as a series in one variable.
fn along_second(h: &TruncatedSeries, line: &Context) -> Result<TruncatedSeries> {
    let zero = TruncatedSeries::zero(line, h.order());
    let t = TruncatedSeries::var(line, h.order(), 0)?;
    compose(h, &SeriesVector::new(line, vec![zero, t])?)
}

/// `h(t, 0)` for `h` in `(z, w)`.
fn along_first(h: &TruncatedSeries, line: &Context) -> Result<TruncatedSeries> {
    let zero = TruncatedSeries::zero(line, h.order());
    let t = TruncatedSeries::var(line, h.order(), 0)?;
    compose(h, &SeriesVector::new(line, vec![t, zero])?)
}

/// The reflection computation for an invertible self-map `F = (f, g)` of
/// the Lewy hypersurface `w − τ − 2izχ = 0`.
///
/// With `v³ = (t³, 2it²(t³ − t¹))` and `v̄² = (t², −2it¹t²)` the map
/// identity reads `g(v³) − ḡ(v̄²) = 2i f(v³) f̄(v̄²)`. Differentiating in
/// `t³` and setting `t³ = t¹` (where `v³ = (t¹, 0)`) gives
/// `f̄(v̄²) = (g_z + 2it²g_w)(t¹,0) / (2i (f_z + 2it²f_w)(t¹,0)) =: R`.
pub fn lewy_reflection(f: &FormalMap) -> Result<ReflectionResult> {
    if f.source_dim() != 2 || f.target_dim() != 2 {
        return Err(Error::DimensionMismatch(String::from("the Lewy hypersurface lives in ℂ²")));
    }
    if !is_invertible(f) {
        return Err(Error::NotInvertible);
    }
    let order = f.order();
    if order < 3 {
        return Err(Error::Precondition(String::from("truncation order must be at least 3")));
    }
    let lewy = lewy_system(order);
    let report = sends_into(f, &lewy, &lewy)?;
    if !report.passes {
        return Err(Error::Precondition(String::from("the map does not send the Lewy hypersurface into itself")));
    }
    let gamma = solve_gamma(&lewy, None)?;
    let its = iterate_segre(&gamma, 3)?;
    let v3 = its[2].v.clone();
    let ctx3 = v3.context().clone();
    let v2 = its[1].v.clone();
    let v2bar = v2.conj_coeffs();
    let fbar = f.components().conj_coeffs();

    // (a) the identity ρ(F(v³), F̄(v̄²)) = 0
    let f_v3 = compose_vector(f.components(), &v3)?;
    let fbar_v2bar = compose_vector(&fbar, &v2bar)?;
    let identity = compose_vector(lewy.rho(), &f_v3.concat(&fbar_v2bar.embed(&ctx3)?)?)?;
    if let Some(t) = lowest_offending(&identity) {
        return Err(Error::Fatal(alloc::format!(
            "reflection identity fails at {} in component {}",
            t.monomial.degree(),
            t.component + 1
        )));
    }

    // (b) g(z, 0) ≡ 0
    let line = single_var_context();
    let g_line = along_first(&f.components()[1], &line)?;
    if !g_line.is_zero() {
        return Err(Error::Fatal(String::from("g(z, 0) does not vanish")));
    }

    // (c) differentiate in t³ and set t³ = t¹
    let ctx2 = v2.context().clone();
    let at_diag = SeriesVector::new(
        &ctx2,
        vec![
            TruncatedSeries::var(&ctx2, order, 0)?,
            TruncatedSeries::var(&ctx2, order, 1)?,
            TruncatedSeries::var(&ctx2, order, 0)?,
        ],
    )?;
    let dg = compose(&f_v3[1].differentiate(2)?, &at_diag)?;
    let df = compose(&f_v3[0].differentiate(2)?, &at_diag)?;
    let two_i = GaussianRational::from_ints(0, 2);
    let r = TruncatedSeries::divide_by_unit(&dg, &df.scale(&two_i)).map_err(|e| match e {
        Error::NotAUnit => Error::NotInvertible,
        other => other,
    })?;
    let lhs = fbar_v2bar[0].clone();
    let matched_through = r.order().min(lhs.order());
    if !TruncatedSeries::jets_equal(&lhs, &r, matched_through)? {
        return Err(Error::Fatal(String::from("f̄ ∘ v̄² differs from R")));
    }

    // (d) first jets along (t, 0) recovered from R
    let r_line = along_second(&r, &line)?;
    let f_bar_chi = r_line.differentiate(0)?;
    let dr1 = along_second(&r.differentiate(0)?, &line)?;
    let f_bar_tau = dr1.divide_by_var(0)?.scale(&-(GaussianRational::one() / two_i.clone()));
    let f_line = r_line.conj_coeffs();
    let t1 = SeriesVector::new(&ctx2, vec![TruncatedSeries::var(&ctx2, order, 0)?])?;
    let f_of_t1 = compose(&f_line, &t1)?;
    let h = f_of_t1.mul(&r)?.scale(&two_i);
    let dh = along_second(&h.differentiate(0)?, &line)?;
    let g_bar_tau = dh.divide_by_var(0)?.scale(&(GaussianRational::one() / two_i.clone()));
    let jets = ReflectionJets {
        f_bar: r_line.clone(),
        f_bar_chi,
        f_bar_tau,
        g_bar: TruncatedSeries::zero(&line, r_line.order()),
        g_bar_tau,
    };

    let direct = ReflectionJets {
        f_bar: along_first(&fbar[0], &line)?,
        f_bar_chi: along_first(&fbar[0].differentiate(0)?, &line)?,
        f_bar_tau: along_first(&fbar[0].differentiate(1)?, &line)?,
        g_bar: along_first(&fbar[1], &line)?,
        g_bar_tau: along_first(&fbar[1].differentiate(1)?, &line)?,
    };
    let jets_match = jets.agrees_with(&direct)?;
    Ok(ReflectionResult { r, matched_through, jets, direct, jets_match, v2, v3 })
}

/// Builtin self-maps of the Lewy hypersurface.
pub mod builtin {
    use super::*;

    fn lewy_map(f: TruncatedSeries, g: TruncatedSeries) -> FormalMap {
        let ctx = z_context(2);
        FormalMap::new(SeriesVector::new(&ctx, vec![f, g]).expect("same context")).expect("F(0) = 0")
    }

    fn zvar(order: u32, i: usize) -> TruncatedSeries {
        TruncatedSeries::var(&z_context(2), order, i).expect("in range")
    }

    pub fn identity(order: u32) -> FormalMap {
        FormalMap::identity(2, order)
    }

    /// `(z, w) ↦ (λz, λ²w)` for real `λ`.
    pub fn dilation(order: u32, lambda: &GaussianRational) -> Result<FormalMap> {
        if !lambda.is_real() || lambda.is_zero() {
            return Err(Error::Precondition(String::from("dilation factor must be real and nonzero")));
        }
        let l2 = lambda * lambda;
        Ok(lewy_map(zvar(order, 0).scale(lambda), zvar(order, 1).scale(&l2)))
    }

    /// `(z, w) ↦ (uz, w)` for `|u| = 1`.
    pub fn rotation(order: u32, u: &GaussianRational) -> Result<FormalMap> {
        if !u.norm_sqr().is_one() {
            return Err(Error::Precondition(String::from("rotation factor must have modulus 1")));
        }
        Ok(lewy_map(zvar(order, 0).scale(u), zvar(order, 1)))
    }

    /// The isotropy element `(z + aw, w) / (1 − 2iāz − i|a|²w)` fixing 0.
    pub fn isotropy(order: u32, a: &GaussianRational) -> Result<FormalMap> {
        let ctx = z_context(2);
        let z = zvar(order, 0);
        let w = zvar(order, 1);
        let two_i = GaussianRational::from_ints(0, 2);
        let abar = a.conj();
        let den = TruncatedSeries::one(&ctx, order)
            .sub(&z.scale(&(&two_i * &abar)))?
            .sub(&w.scale(&(GaussianRational::i() * GaussianRational::real(a.norm_sqr()))))?;
        let f = TruncatedSeries::divide_by_unit(&z.add(&w.scale(a))?, &den)?;
        let g = TruncatedSeries::divide_by_unit(&w, &den)?;
        Ok(lewy_map(f, g))
    }
}

#[cfg(test)]
mod tests;
