//! Truncated multivariate formal power series with exact Gaussian-rational
//! coefficients.
//!
//! A [`TruncatedSeries`] carries every monomial of total degree `<= order`
//! exactly; nothing is known about higher degrees. Every operation records
//! the largest degree through which its result is exact, and never reads
//! past the order of its inputs.

mod compose;
mod text;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Zero};

use crate::coeff::GaussianRational;
use crate::error::{Error, Result};

pub use compose::{compose, compose_vector};

/// A named family of indeterminates, e.g. `Z` of size `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarBlock {
    pub name: String,
    pub arity: usize,
}

impl VarBlock {
    pub fn new(name: &str, arity: usize) -> Self {
        Self { name: String::from(name), arity }
    }
}

/// Ordered list of variable blocks; their concatenation is the global
/// indeterminate list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Context(Arc<[VarBlock]>);

impl Context {
    pub fn new(blocks: Vec<VarBlock>) -> Result<Self> {
        for (i, b) in blocks.iter().enumerate() {
            if blocks[..i].iter().any(|o| o.name == b.name) {
                return Err(Error::InvalidManifold(alloc::format!("duplicate variable block name `{}`", b.name)));
            }
        }
        Ok(Self(blocks.into()))
    }

    pub fn blocks(&self) -> &[VarBlock] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.iter().map(|b| b.arity).sum()
    }

    /// Global index of the first variable of block `name`, with its arity.
    pub fn block_range(&self, name: &str) -> Option<core::ops::Range<usize>> {
        let mut offset = 0;
        for b in self.0.iter() {
            if b.name == name {
                return Some(offset..offset + b.arity);
            }
            offset += b.arity;
        }
        None
    }

    /// Global index of the `i`-th (0-based) variable of block `name`.
    pub fn var_index(&self, name: &str, i: usize) -> Option<usize> {
        let r = self.block_range(name)?;
        (i < r.len()).then(|| r.start + i)
    }

    /// Printable name of a global variable index.
    ///
    /// A block whose name ends in a digit and has arity one prints as the
    /// bare block name (`t2`); otherwise the 1-based index is appended,
    /// separated by `_` when the block name ends in a digit (`t2_1`, `Z3`).
    pub fn var_name(&self, index: usize) -> String {
        let mut offset = 0;
        for b in self.0.iter() {
            if index < offset + b.arity {
                let k = index - offset + 1;
                let ends_digit = b.name.chars().last().is_some_and(|c| c.is_ascii_digit());
                return match (ends_digit, b.arity) {
                    (true, 1) => b.name.clone(),
                    (true, _) => alloc::format!("{}_{}", b.name, k),
                    (false, _) => alloc::format!("{}{}", b.name, k),
                };
            }
            offset += b.arity;
        }
        alloc::format!("x{}", index)
    }

    /// `x1*y2^3`-style name of a monomial; empty for the constant monomial.
    pub fn monomial_name(&self, m: &Monomial) -> String {
        let mut out = String::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(&self.var_name(i));
            if e > 1 {
                out.push_str(&alloc::format!("^{}", e));
            }
        }
        out
    }

    /// This context followed by `more`.
    pub fn extended(&self, more: &[VarBlock]) -> Result<Self> {
        let mut blocks: Vec<VarBlock> = self.0.to_vec();
        blocks.extend_from_slice(more);
        Self::new(blocks)
    }

    /// True when `self` is a prefix of `other`.
    pub fn is_prefix_of(&self, other: &Context) -> bool {
        self.0.len() <= other.0.len() && self.0[..] == other.0[..self.0.len()]
    }
}

/// Exponent vector over a context's global indeterminate list.
///
/// Ordered graded-lexicographically: lower total degree first; within a
/// degree, larger exponents on earlier variables first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let deg = exps.iter().sum();
        Self { deg, exps }
    }

    pub fn one(nvars: usize) -> Self {
        Self { deg: 0, exps: vec![0; nvars] }
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Self { deg: 1, exps }
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { deg: self.deg + other.deg, exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A power series in the indeterminates of `context`, exact through total
/// degree `order`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    ctx: Context,
    order: u32,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl TruncatedSeries {
    pub fn zero(ctx: &Context, order: u32) -> Self {
        Self { ctx: ctx.clone(), order, terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &Context, order: u32, c: GaussianRational) -> Self {
        let mut s = Self::zero(ctx, order);
        if !c.is_zero() {
            s.terms.insert(Monomial::one(ctx.nvars()), c);
        }
        s
    }

    pub fn one(ctx: &Context, order: u32) -> Self {
        Self::constant(ctx, order, GaussianRational::one())
    }

    /// The indeterminate with global index `index`.
    pub fn var(ctx: &Context, order: u32, index: usize) -> Result<Self> {
        if index >= ctx.nvars() {
            return Err(Error::UnknownVariable(index));
        }
        let mut s = Self::zero(ctx, order);
        if order >= 1 {
            s.terms.insert(Monomial::var(ctx.nvars(), index), GaussianRational::one());
        }
        Ok(s)
    }

    /// Build from `(exponents, coefficient)` pairs; like terms are summed,
    /// zero coefficients and terms above `order` dropped.
    pub fn from_terms<I>(ctx: &Context, order: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, GaussianRational)>,
    {
        let mut s = Self::zero(ctx, order);
        for (exps, c) in terms {
            if exps.len() != ctx.nvars() {
                return Err(Error::ContextMismatch);
            }
            s.add_term(Monomial::new(exps), c);
        }
        Ok(s)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if m.deg > self.order || c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn coeff_of(&self, exps: &[u32]) -> GaussianRational {
        self.coeff(&Monomial::new(exps.to_vec()))
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(&Monomial::one(self.ctx.nvars()))
    }

    /// Zero through the tracked order.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest term in graded-lex order.
    pub fn lowest_term(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next()
    }

    /// Smallest degree of a stored term.
    pub fn valuation(&self) -> Option<u32> {
        self.lowest_term().map(|(m, _)| m.deg)
    }

    /// Highest degree of a stored term.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.deg)
    }

    /// Lower the truncation order to `order` (no-op if already lower).
    pub fn truncated(&self, order: u32) -> Self {
        if order >= self.order {
            return self.clone();
        }
        let terms = self.terms.iter().filter(|(m, _)| m.deg <= order).map(|(m, c)| (m.clone(), c.clone())).collect();
        Self { ctx: self.ctx.clone(), order, terms }
    }

    /// Reinterpret a series whose coefficients are known exactly to higher
    /// degree (e.g. a polynomial) at a larger order. The caller asserts the
    /// missing terms vanish.
    pub fn with_order_unchecked(&self, order: u32) -> Self {
        let mut s = self.truncated(order);
        s.order = order;
        s
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let order = self.order.min(other.order);
        let mut out = self.truncated(order);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let order = self.order.min(other.order);
        let mut out = self.truncated(order);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Self { ctx: self.ctx.clone(), order: self.order, terms }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx, self.order);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Self { ctx: self.ctx.clone(), order: self.order, terms }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let order = self.order.min(other.order);
        let mut acc: BTreeMap<Monomial, GaussianRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            if ma.deg > order {
                break;
            }
            for (mb, cb) in &other.terms {
                if ma.deg + mb.deg > order {
                    break;
                }
                let m = ma.mul(mb);
                let p = ca * cb;
                match acc.entry(m) {
                    alloc::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(p);
                    }
                    alloc::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += &p;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Self { ctx: self.ctx.clone(), order, terms: acc })
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut out = Self::one(&self.ctx, self.order);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Conjugate every coefficient; monomials unchanged.
    pub fn conj_coeffs(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect();
        Self { ctx: self.ctx.clone(), order: self.order, terms }
    }

    /// Formal partial derivative in the global variable `index`; order drops by one.
    pub fn differentiate(&self, index: usize) -> Result<Self> {
        if index >= self.ctx.nvars() {
            return Err(Error::UnknownVariable(index));
        }
        if self.order == 0 {
            return Err(Error::OrderExhausted);
        }
        let mut out = Self::zero(&self.ctx, self.order - 1);
        for (m, c) in &self.terms {
            let e = m.exps[index];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[index] -= 1;
            out.add_term(Monomial::new(exps), c * &GaussianRational::int(e as i64));
        }
        Ok(out)
    }

    /// Exact quotient by the variable `index`; fails if some term lacks it.
    /// Order drops by one.
    pub fn divide_by_var(&self, index: usize) -> Result<Self> {
        if index >= self.ctx.nvars() {
            return Err(Error::UnknownVariable(index));
        }
        if self.order == 0 {
            return Err(Error::OrderExhausted);
        }
        let mut out = Self::zero(&self.ctx, self.order - 1);
        for (m, c) in &self.terms {
            if m.exps[index] == 0 {
                return Err(Error::NotDivisible);
            }
            let mut exps = m.exps.clone();
            exps[index] -= 1;
            out.add_term(Monomial::new(exps), c.clone());
        }
        Ok(out)
    }

    /// Homogeneous component of degree `k`.
    pub fn homogeneous(&self, k: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.deg == k).map(|(m, c)| (m.clone(), c.clone())).collect();
        Self { ctx: self.ctx.clone(), order: self.order, terms }
    }

    /// `num / den` for a unit `den` (nonzero constant term).
    pub fn divide_by_unit(num: &Self, den: &Self) -> Result<Self> {
        num.check_ctx(den)?;
        let d0 = den.constant_term();
        let d0_inv = d0.inv().ok_or(Error::NotAUnit)?;
        let order = num.order.min(den.order);
        let den_parts: Vec<Self> = (0..=order).map(|k| den.homogeneous(k)).collect();
        let mut quotient_parts: Vec<Self> = Vec::with_capacity(order as usize + 1);
        for k in 0..=order {
            let mut rhs = num.homogeneous(k).truncated(order);
            for i in 1..=k {
                let q = &quotient_parts[(k - i) as usize];
                if den_parts[i as usize].is_zero() || q.is_zero() {
                    continue;
                }
                rhs = rhs.sub(&den_parts[i as usize].truncated(order).mul(&q.truncated(order))?)?;
            }
            quotient_parts.push(rhs.scale(&d0_inv));
        }
        let mut out = Self::zero(&num.ctx, order);
        for part in quotient_parts {
            for (m, c) in part.terms {
                out.add_term(m, c);
            }
        }
        Ok(out)
    }

    /// The `k`-jet: terms of total degree `<= k`.
    pub fn jet(&self, k: u32) -> Result<Self> {
        if k > self.order {
            return Err(Error::JetOrderTooLarge { requested: k, order: self.order });
        }
        Ok(self.truncated(k))
    }

    /// Coefficient-wise equality of the `k`-jets.
    pub fn jets_equal(a: &Self, b: &Self, k: u32) -> Result<bool> {
        a.check_ctx(b)?;
        let (ja, jb) = (a.jet(k)?, b.jet(k)?);
        Ok(ja.terms == jb.terms)
    }

    /// Move into a larger context of which this one is a prefix.
    pub fn embed(&self, ctx: &Context) -> Result<Self> {
        if !self.ctx.is_prefix_of(ctx) {
            return Err(Error::ContextMismatch);
        }
        let extra = ctx.nvars() - self.ctx.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = m.exps.clone();
                exps.extend(core::iter::repeat_n(0, extra));
                (Monomial { deg: m.deg, exps }, c.clone())
            })
            .collect();
        Ok(Self { ctx: ctx.clone(), order: self.order, terms })
    }

    /// Canonical text form (see the module-level format notes in `text`).
    pub fn to_canonical_string(&self) -> String {
        text::canonical(self)
    }
}

/// Ordered list of series sharing one context and truncation order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesVector {
    ctx: Context,
    order: u32,
    components: Vec<TruncatedSeries>,
}

impl SeriesVector {
    /// Components are truncated to their common minimum order.
    pub fn new(ctx: &Context, components: Vec<TruncatedSeries>) -> Result<Self> {
        if components.iter().any(|c| c.ctx != *ctx) {
            return Err(Error::ContextMismatch);
        }
        let order = components.iter().map(|c| c.order).min().unwrap_or(u32::MAX);
        let components = components.into_iter().map(|c| c.truncated(order)).collect();
        Ok(Self { ctx: ctx.clone(), order, components })
    }

    /// Empty vector carrying `order` explicitly.
    pub fn empty(ctx: &Context, order: u32) -> Self {
        Self { ctx: ctx.clone(), order, components: Vec::new() }
    }

    /// The variables of `ctx` with indices `indices`, as a vector.
    pub fn variables(ctx: &Context, order: u32, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let comps = indices.into_iter().map(|i| TruncatedSeries::var(ctx, order, i)).collect::<Result<Vec<_>>>()?;
        let mut v = Self::new(ctx, comps)?;
        v.order = order;
        Ok(v)
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[TruncatedSeries] {
        &self.components
    }

    pub fn get(&self, i: usize) -> &TruncatedSeries {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<TruncatedSeries> {
        self.components
    }

    pub fn conj_coeffs(&self) -> Self {
        Self {
            ctx: self.ctx.clone(),
            order: self.order,
            components: self.components.iter().map(|c| c.conj_coeffs()).collect(),
        }
    }

    pub fn embed(&self, ctx: &Context) -> Result<Self> {
        let comps = self.components.iter().map(|c| c.embed(ctx)).collect::<Result<Vec<_>>>()?;
        Ok(Self { ctx: ctx.clone(), order: self.order, components: comps })
    }

    pub fn truncated(&self, order: u32) -> Self {
        Self {
            ctx: self.ctx.clone(),
            order: self.order.min(order),
            components: self.components.iter().map(|c| c.truncated(order)).collect(),
        }
    }

    /// Concatenate two vectors over the same context.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        let mut comps = self.components.clone();
        comps.extend(other.components.iter().cloned());
        let mut v = Self::new(&self.ctx, comps)?;
        v.order = v.order.min(self.order).min(other.order);
        Ok(v)
    }

    pub fn jets_equal(a: &Self, b: &Self, k: u32) -> Result<bool> {
        if a.len() != b.len() {
            return Err(Error::ArityMismatch { expected: a.len(), found: b.len() });
        }
        for (x, y) in a.components.iter().zip(&b.components) {
            if !TruncatedSeries::jets_equal(x, y, k)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Canonical text, one component per line.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&c.to_canonical_string());
        }
        out
    }
}

impl core::ops::Index<usize> for SeriesVector {
    type Output = TruncatedSeries;
    fn index(&self, i: usize) -> &TruncatedSeries {
        &self.components[i]
    }
}

#[cfg(test)]
mod tests;
