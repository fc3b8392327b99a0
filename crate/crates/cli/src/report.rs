//! The per-manifold analysis report and its JSON form.

use std::fmt::Write as _;
use std::time::Instant;

use segre_core::manifold::{complexify_raw, cr_number, CrVerdict, DefiningSystem};
use segre_core::nondegeneracy::{
    default_depth_max, default_kmax, finite_type_lie, holomorphic_nondegeneracy, k_nondegeneracy, HolomorphicVerdict,
    KVerdict, LieVerdict,
};
use segre_core::segre::{finite_type_segre, gamma_independence_check, verify_idv, RankCertificate, SegreFiniteType};
use segre_core::series::Context;
use segre_core::{Error, ManifoldSpec};
use serde::Serialize;

use crate::error::KitError;
use crate::format::ManifoldFile;

pub const SCHEMA: &str = "segre-kit-report/1";

#[derive(Clone, Debug, Default)]
pub struct AnalyzeOptions {
    pub order: Option<u32>,
    pub kmax: Option<usize>,
    pub depth_max: Option<usize>,
    pub seed: u64,
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessJson {
    pub rows: Vec<usize>,
    pub cols: Vec<String>,
    pub monomial: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateJson {
    pub certified_rank: usize,
    pub max_rank: usize,
    pub conclusive: bool,
    pub truncation_order: u32,
    pub witness: Option<WitnessJson>,
}

impl CertificateJson {
    /// `ctx` names the witness columns and monomial.
    pub fn new(cert: &RankCertificate, ctx: &Context) -> Self {
        CertificateJson {
            certified_rank: cert.certified_rank,
            max_rank: cert.max_rank,
            conclusive: cert.conclusive,
            truncation_order: cert.truncation_order,
            witness: cert.witness.as_ref().map(|w| WitnessJson {
                rows: w.rows.iter().map(|r| r + 1).collect(),
                cols: w.cols.iter().map(|&c| ctx.var_name(c)).collect(),
                monomial: match ctx.monomial_name(&w.monomial) {
                    s if s.is_empty() => String::from("1"),
                    s => s,
                },
                coeff: w.coeff.to_string(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrJson {
    pub criterion: &'static str,
    pub rank_at_zero: usize,
    pub generic_rank: usize,
    pub r_at_zero: usize,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KJson {
    pub criterion: &'static str,
    pub verdict: &'static str,
    pub k: Option<usize>,
    pub kmax: usize,
    pub span_ranks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HolomorphicJson {
    pub criterion: &'static str,
    pub verdict: &'static str,
    pub k: Option<usize>,
    pub kmax: usize,
    pub generic_ranks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegreJson {
    pub criterion: &'static str,
    pub verdict: &'static str,
    pub rank_chain: Vec<usize>,
    pub certificate: CertificateJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LieJson {
    pub criterion: &'static str,
    pub verdict: &'static str,
    pub depth: Option<usize>,
    pub depth_max: usize,
    pub tangent_dim: usize,
    pub span_dims: Vec<usize>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteTypeJson {
    pub segre: SegreJson,
    pub lie: LieJson,
    pub agreement: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrameJson {
    pub solved: Vec<usize>,
    pub rank_chain: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChecksJson {
    /// `k` values for which `ρ(v^{k+1}, v̄^k) = 0` was verified.
    pub segre_identity_k: Vec<usize>,
    pub frames: Vec<FrameJson>,
    pub frames_consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub manifold: String,
    pub ambient_dim: usize,
    pub codim: usize,
    pub cr_dim: usize,
    pub order: u32,
    pub basepoint: Vec<String>,
    pub generic: bool,
    pub cr: CrJson,
    pub defining_functions: Vec<String>,
    pub levi_nondegenerate: Option<bool>,
    pub k_nondegeneracy: Option<KJson>,
    pub holomorphic_nondegeneracy: Option<HolomorphicJson>,
    pub finite_type: Option<FiniteTypeJson>,
    pub checks: Option<ChecksJson>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// A report plus what went wrong, if anything.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub report: AnalysisReport,
    /// Set when the manifold is not generic at the base point.
    pub invalid: Option<String>,
    /// Set when an internal consistency check failed.
    pub fatal: Option<String>,
}

impl Analysis {
    pub fn exit_code(&self) -> i32 {
        if self.fatal.is_some() {
            3
        } else if self.invalid.is_some() {
            2
        } else {
            0
        }
    }
}

pub const CR_CRITERION: &str = "r(p) = d - dim span{rho_j,Z(p)}";
pub const K_CRITERION: &str = "span{rho_j,Z(0), L^a rho_j,Z(0) : |a| <= k} = C^N";
pub const HOLO_CRITERION: &str = "generic rank of {rho_j,Z, L^a rho_j,Z : |a| <= k} on M reaches N";
pub const SEGRE_CRITERION: &str = "iterated Segre rank criterion: finite type iff Rk v^(d+1) = N";
pub const LIE_CRITERION: &str = "brackets of L_i and conj(L_i) span CT_0M";

/// `spec` with its truncation order replaced when `order` is given.
pub fn with_order(spec: &ManifoldSpec, order: Option<u32>) -> Result<ManifoldSpec, KitError> {
    match order {
        None => Ok(spec.clone()),
        Some(t) => Ok(ManifoldSpec::new(
            spec.ambient_dim,
            spec.codim,
            spec.exprs.clone(),
            Some(spec.basepoint.clone()),
            Some(t),
        )?),
    }
}

/// Run every analysis on one manifold.
pub fn analyze(file: &ManifoldFile, opts: &AnalyzeOptions) -> Result<Analysis, KitError> {
    let start = Instant::now();
    let spec = with_order(&file.spec, opts.order)?;
    let n = spec.ambient_dim;
    let raw = complexify_raw(&spec)?;
    let crn = cr_number(&raw)?;
    let cr = CrJson {
        criterion: CR_CRITERION,
        rank_at_zero: crn.rank_at_zero,
        generic_rank: crn.generic_rank.certified_rank,
        r_at_zero: crn.r_at_zero,
        verdict: match crn.verdict {
            CrVerdict::Generic => String::from("GENERIC"),
            CrVerdict::CrCertified { r } => format!("CR(r={})", r),
            CrVerdict::NotCrAtZero => String::from("NOT_CR_AT_0"),
        },
    };
    let mut report = AnalysisReport {
        schema: SCHEMA,
        manifold: file.id.clone(),
        ambient_dim: n,
        codim: spec.codim,
        cr_dim: n - spec.codim,
        order: spec.order,
        basepoint: spec.basepoint.iter().map(|c| c.to_string()).collect(),
        generic: false,
        cr,
        defining_functions: raw.rho().components().iter().map(|s| s.to_string()).collect(),
        levi_nondegenerate: None,
        k_nondegeneracy: None,
        holomorphic_nondegeneracy: None,
        finite_type: None,
        checks: None,
        seed: opts.seed,
        timing_ms: None,
    };
    let sys = match DefiningSystem::new(raw) {
        Ok(sys) => sys,
        Err(e @ Error::NotGeneric { .. }) => {
            if opts.timing {
                report.timing_ms = Some(start.elapsed().as_millis());
            }
            return Ok(Analysis { report, invalid: Some(e.to_string()), fatal: None });
        }
        Err(e) => return Err(e.into()),
    };
    report.generic = true;
    let mut fatal: Option<String> = None;

    let kmax = opts.kmax.unwrap_or_else(|| default_kmax(n));
    let depth_max = opts.depth_max.unwrap_or_else(|| default_depth_max(n));

    let k = k_nondegeneracy(&sys, kmax)?;
    report.levi_nondegenerate = Some(k.levi_nondegenerate);
    report.k_nondegeneracy = Some(KJson {
        criterion: K_CRITERION,
        verdict: match k.verdict {
            KVerdict::KNondegenerate(_) => "K_NONDEGENERATE",
            KVerdict::Inconclusive { .. } => "INCONCLUSIVE",
        },
        k: match k.verdict {
            KVerdict::KNondegenerate(k) => Some(k),
            _ => None,
        },
        kmax,
        span_ranks: k.span_ranks.clone(),
    });

    let h = holomorphic_nondegeneracy(&sys, kmax)?;
    report.holomorphic_nondegeneracy = Some(HolomorphicJson {
        criterion: HOLO_CRITERION,
        verdict: match h.verdict {
            HolomorphicVerdict::Nondegenerate { .. } => "HOLOMORPHICALLY_NONDEGENERATE",
            HolomorphicVerdict::DegenerateToOrder { .. } => "DEGENERATE_TO_ORDER",
        },
        k: match &h.verdict {
            HolomorphicVerdict::Nondegenerate { k, .. } => Some(*k),
            _ => None,
        },
        kmax,
        generic_ranks: h.generic_ranks.clone(),
    });

    let segre = finite_type_segre(&sys)?;
    let top = segre.chain.ranks.last().expect("d + 1 >= 1");
    let top_ctx = segre.chain.iterates.last().expect("d + 1 >= 1").v.context().clone();
    let segre_json = SegreJson {
        criterion: SEGRE_CRITERION,
        verdict: match segre.verdict {
            SegreFiniteType::FiniteType(_) => "FINITE_TYPE",
            SegreFiniteType::NotFiniteTypeToOrder(_) => "NOT_FINITE_TYPE_TO_ORDER",
        },
        rank_chain: segre.rank_chain.clone(),
        certificate: CertificateJson::new(top, &top_ctx),
    };
    let lie = finite_type_lie(&sys, depth_max)?;
    let lie_json = LieJson {
        criterion: LIE_CRITERION,
        verdict: match lie.verdict {
            LieVerdict::FiniteType { .. } => "FINITE_TYPE",
            LieVerdict::Inconclusive { .. } => "INCONCLUSIVE",
        },
        depth: match lie.verdict {
            LieVerdict::FiniteType { depth } => Some(depth),
            _ => None,
        },
        depth_max,
        tangent_dim: lie.tangent_dim,
        span_dims: lie.span_dims.clone(),
        note: lie.note.clone(),
    };
    let agreement = if segre.verdict.is_finite_type() == lie.is_finite_type() {
        String::from("agree")
    } else {
        let msg = format!(
            "finite-type verdicts disagree: Segre rank says {}, Lie brackets say {}",
            segre_json.verdict, lie_json.verdict
        );
        fatal = Some(msg.clone());
        format!("FATAL: {}", msg)
    };
    report.finite_type = Some(FiniteTypeJson { segre: segre_json, lie: lie_json, agreement });

    let d = sys.codim();
    let mut idv_k = Vec::new();
    for kk in 1..=d + 2 {
        match verify_idv(&sys, kk) {
            Ok(()) => idv_k.push(kk),
            Err(Error::Fatal(m)) => {
                fatal.get_or_insert(m);
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let ind = gamma_independence_check(&sys)?;
    if !ind.consistent {
        fatal.get_or_insert_with(|| String::from("rank chains differ between admissible Segre variety mappings"));
    }
    report.checks = Some(ChecksJson {
        segre_identity_k: idv_k,
        frames: ind
            .frames
            .iter()
            .map(|(s, c)| FrameJson { solved: s.iter().map(|i| i + 1).collect(), rank_chain: c.clone() })
            .collect(),
        frames_consistent: ind.consistent,
    });
    if opts.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    Ok(Analysis { report, invalid: None, fatal })
}

/// Plain-text rendering of a report.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "manifold {} in C^{} (d = {}, n = {}), truncation order {}",
        r.manifold, r.ambient_dim, r.codim, r.cr_dim, r.order
    );
    let _ = writeln!(out, "  base point       ({})", r.basepoint.join(", "));
    for (j, f) in r.defining_functions.iter().enumerate() {
        let _ = writeln!(out, "  rho{}             {}", j + 1, f);
    }
    let _ = writeln!(
        out,
        "  CR number        r(0) = {}, rank at 0 = {}, generic rank = {}: {}",
        r.cr.r_at_zero, r.cr.rank_at_zero, r.cr.generic_rank, r.cr.verdict
    );
    if !r.generic {
        let _ = writeln!(out, "  not generic at the base point; no further analysis");
        return out;
    }
    if let Some(l) = r.levi_nondegenerate {
        let _ = writeln!(out, "  Levi             {}", if l { "nondegenerate" } else { "degenerate at 0" });
    }
    if let Some(k) = &r.k_nondegeneracy {
        match k.k {
            Some(kk) => {
                let _ = writeln!(out, "  k-nondegeneracy  {}-nondegenerate (span ranks {:?})", kk, k.span_ranks);
            }
            None => {
                let _ = writeln!(
                    out,
                    "  k-nondegeneracy  INCONCLUSIVE up to k = {} (span ranks {:?})",
                    k.kmax, k.span_ranks
                );
            }
        }
    }
    if let Some(h) = &r.holomorphic_nondegeneracy {
        match h.k {
            Some(kk) => {
                let _ = writeln!(out, "  holomorphic      nondegenerate (generic rank N at k = {})", kk);
            }
            None => {
                let _ = writeln!(
                    out,
                    "  holomorphic      DEGENERATE_TO_ORDER (kmax = {}, T = {}, generic ranks {:?})",
                    h.kmax, r.order, h.generic_ranks
                );
            }
        }
    }
    if let Some(ft) = &r.finite_type {
        let c = &ft.segre.certificate;
        let _ =
            writeln!(out, "  finite type      Segre ranks: {} (Rk v^j = {:?})", ft.segre.verdict, ft.segre.rank_chain);
        if let Some(w) = &c.witness {
            let _ = writeln!(
                out,
                "                   witness rows {:?} cols [{}], {} at {}",
                w.rows,
                w.cols.join(", "),
                w.coeff,
                w.monomial
            );
        }
        match ft.lie.depth {
            Some(depth) => {
                let _ = writeln!(
                    out,
                    "                   Lie brackets: FINITE_TYPE at depth {} (span dims {:?})",
                    depth, ft.lie.span_dims
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "                   Lie brackets: INCONCLUSIVE up to depth {} (span dims {:?})",
                    ft.lie.depth_max, ft.lie.span_dims
                );
            }
        }
        if let Some(note) = &ft.lie.note {
            let _ = writeln!(out, "                   note: {}", note);
        }
        let _ = writeln!(out, "                   {}", ft.agreement);
    }
    if let Some(ch) = &r.checks {
        let _ = writeln!(out, "  checks           Segre identity zero for k = {:?}", ch.segre_identity_k);
        for f in &ch.frames {
            let _ = writeln!(out, "                   solved {:?}: ranks {:?}", f.solved, f.rank_chain);
        }
    }
    if let Some(t) = r.timing_ms {
        let _ = writeln!(out, "  time             {} ms", t);
    }
    out
}
