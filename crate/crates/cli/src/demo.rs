//! The annotated Lewy walkthrough.

use std::fmt::Write as _;
use std::path::PathBuf;

use segre_core::manifold::lewy_system;
use segre_core::maps::{builtin, lewy_reflection, sends_into, FormalMap};
use segre_core::segre::{gamma_check, iterate_rank, iterate_segre, solve_gamma};
use segre_core::{Error, GaussianRational, SeriesVector};

use crate::commands::{assert_idv, load_map};
use crate::error::KitError;
use crate::format::parse_constant;

pub const DEFAULT_ORDER: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DemoMap {
    Identity,
    Dilation(GaussianRational),
    Rotation(GaussianRational),
    Isotropy(GaussianRational),
    File(PathBuf),
}

impl DemoMap {
    /// `identity`, `dilation=λ`, `rotation=u`, `isotropy=a`, or a map file path.
    pub fn parse(s: &str) -> Result<Self, KitError> {
        let constant = |v: &str| parse_constant(v).map_err(|e| KitError::Input(format!("--map {}: {}", s, e)));
        Ok(match s.split_once('=') {
            None if s == "identity" => DemoMap::Identity,
            Some(("dilation", v)) => DemoMap::Dilation(constant(v)?),
            Some(("rotation", v)) => DemoMap::Rotation(constant(v)?),
            Some(("isotropy", v)) => DemoMap::Isotropy(constant(v)?),
            _ => DemoMap::File(PathBuf::from(s)),
        })
    }

    fn describe(&self) -> String {
        match self {
            DemoMap::Identity => String::from("identity"),
            DemoMap::Dilation(l) => format!("dilation (z, w) -> ({l} z, {l}^2 w), lambda = {l}", l = l),
            DemoMap::Rotation(u) => format!("rotation (z, w) -> (u z, w), u = {}", u),
            DemoMap::Isotropy(a) => format!("isotropy (z + a w, w)/(1 - 2i conj(a) z - i|a|^2 w), a = {}", a),
            DemoMap::File(p) => format!("map file {}", p.display()),
        }
    }

    fn build(&self, order: u32, seed: u64) -> Result<FormalMap, KitError> {
        Ok(match self {
            DemoMap::Identity => builtin::identity(order),
            DemoMap::Dilation(l) => builtin::dilation(order, l)?,
            DemoMap::Rotation(u) => builtin::rotation(order, u)?,
            DemoMap::Isotropy(a) => builtin::isotropy(order, a)?,
            DemoMap::File(p) => {
                let mf = load_map(p, seed)?;
                mf.to_formal_map(2, mf.order.unwrap_or(order).min(order))
                    .map_err(|e| KitError::parse(&p.display().to_string(), e))?
            }
        })
    }
}

fn vector_text(v: &SeriesVector) -> String {
    let parts: Vec<String> = v.components().iter().map(|s| s.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn fatal(msg: &str) -> KitError {
    KitError::Fatal(msg.to_string())
}

/// Run the walkthrough; any failed check aborts with FATAL.
pub fn run(map: &DemoMap, order: u32, seed: u64) -> Result<String, KitError> {
    let mut out = String::new();
    let sys = lewy_system(order);
    let _ = writeln!(out, "Lewy hypersurface Im w = |z|^2 in C^2, truncation order {}", order);
    let _ = writeln!(out, "  complexified and normalized: rho = {}   [Z = (z, w), zeta = (chi, tau)]", sys.rho()[0]);

    let gamma = solve_gamma(&sys, None)?;
    if gamma_check(&sys, &gamma)?.components().iter().any(|s| !s.is_zero()) {
        return Err(fatal("rho(gamma(zeta, t), zeta) is not zero"));
    }
    let _ = writeln!(out, "\nSegre variety mapping, solved for w:");
    let _ = writeln!(out, "  gamma(chi, tau, t) = {}   rho(gamma, zeta) = 0 exactly", vector_text(gamma.gamma()));

    let its = iterate_segre(&gamma, 3)?;
    let _ = writeln!(out, "\nIterated Segre mappings v^(j+1)(t1..t(j+1)) = gamma(conj v^j, t(j+1)):");
    let mut ranks = Vec::new();
    for it in &its {
        let cert = iterate_rank(it)?;
        ranks.push(cert.certified_rank);
        let _ = writeln!(out, "  v{} = {}   Rk = {}", it.j, vector_text(&it.v), cert.certified_rank);
    }
    if ranks[..2] != [1, 2] {
        return Err(fatal(&format!("expected Rk v1 = 1 and Rk v2 = 2, found {:?}", &ranks[..2])));
    }
    let _ = writeln!(out, "  Rk v2 = 2 = N, so the hypersurface is of finite type at 0");
    assert_idv(&sys, 2)?;
    let _ = writeln!(out, "  rho(v^(k+1), conj v^k) = 0 exactly for k = 1, 2");

    let f = map.build(order, seed)?;
    let _ = writeln!(out, "\nMap F = (f, g): {}", map.describe());
    let _ = writeln!(out, "  F = {}", vector_text(f.components()));
    let rep = sends_into(&f, &sys, &sys)?;
    if !rep.passes {
        return Err(KitError::Input(String::from("the map does not send the Lewy hypersurface into itself")));
    }
    let _ = writeln!(out, "  F sends M into M: residual zero through order {}", rep.order);

    let refl = lewy_reflection(&f).map_err(|e| match e {
        Error::NotInvertible => KitError::Input(String::from("the map is not invertible at 0")),
        other => other.into(),
    })?;
    let _ = writeln!(
        out,
        "\nReflection: differentiate g(v3) - conj g(conj v2) = 2i f(v3) conj f(conj v2) in t3, set t3 = t1:"
    );
    let _ = writeln!(out, "  R(t1, t2) = {}", refl.r);
    let _ = writeln!(out, "  conj f(conj v2(t1, t2)) = R(t1, t2) exactly through order {}", refl.matched_through);
    if !refl.jets_match {
        return Err(fatal("jets recovered from R differ from the map's own derivatives"));
    }
    let _ = writeln!(out, "\nFirst jets of conj F along (t, 0), recovered from R alone:");
    let rows = [
        ("conj f(t, 0)      ", &refl.jets.f_bar),
        ("d conj f/d chi    ", &refl.jets.f_bar_chi),
        ("d conj f/d tau    ", &refl.jets.f_bar_tau),
        ("conj g(t, 0)      ", &refl.jets.g_bar),
        ("d conj g/d tau    ", &refl.jets.g_bar_tau),
    ];
    for (name, s) in rows {
        let _ = writeln!(out, "  {} = {}", name, s);
    }
    let _ = writeln!(out, "  all five agree with direct differentiation of F");
    Ok(out)
}
