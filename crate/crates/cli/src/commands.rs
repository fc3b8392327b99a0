//! The subcommands, as functions from parsed flags to printed output.

use std::fmt::Write as _;
use std::path::Path;

use segre_core::manifold::{complexify_raw, DefiningSystem};
use segre_core::maps::{classify, determination_experiment, jets_agree, sends_into, Finiteness, FormalMap};
use segre_core::segre::{gamma_check, iterate_rank, iterate_segre, solve_gamma, verify_idv};
use segre_core::{Error, SeriesVector};
use serde::Serialize;
use serde_json::json;

use crate::error::KitError;
use crate::format::{parse_manifold, parse_map, ManifoldFile, MapFile};
use crate::report::{analyze, render_text, with_order, Analysis, AnalyzeOptions, CertificateJson};

/// What a command prints and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: 0 }
    }
}

fn file_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| String::from("input"))
}

pub fn load_manifold(path: &Path) -> Result<ManifoldFile, KitError> {
    let doc = std::fs::read_to_string(path).map_err(|e| KitError::Input(format!("{}: {}", path.display(), e)))?;
    parse_manifold(&doc, &file_id(path)).map_err(|e| KitError::parse(&path.display().to_string(), e))
}

pub fn load_map(path: &Path, seed: u64) -> Result<MapFile, KitError> {
    let doc = std::fs::read_to_string(path).map_err(|e| KitError::Input(format!("{}: {}", path.display(), e)))?;
    parse_map(&doc, &file_id(path), seed).map_err(|e| KitError::parse(&path.display().to_string(), e))
}

pub fn system_of(file: &ManifoldFile, order: Option<u32>) -> Result<DefiningSystem, KitError> {
    let spec = with_order(&file.spec, order)?;
    Ok(DefiningSystem::new(complexify_raw(&spec)?)?)
}

fn formal_map(path: &Path, map: &MapFile, n: usize, order: u32) -> Result<FormalMap, KitError> {
    map.to_formal_map(n, map.order.unwrap_or(order).min(order))
        .map_err(|e| KitError::parse(&path.display().to_string(), e))
}

fn vector_text(v: &SeriesVector) -> String {
    let parts: Vec<String> = v.components().iter().map(|s| s.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// `analyze`: one report per file, in input order.
pub fn cmd_analyze(files: &[std::path::PathBuf], opts: &AnalyzeOptions, as_json: bool) -> Outcome {
    let results: Vec<Result<Analysis, KitError>> = std::thread::scope(|s| {
        let handles: Vec<_> =
            files.iter().map(|p| s.spawn(move || load_manifold(p).and_then(|f| analyze(&f, opts)))).collect();
        handles.into_iter().map(|h| h.join().expect("analysis thread")).collect()
    });
    let mut out = Outcome::ok(String::new());
    let mut reports = Vec::new();
    for r in results {
        match r {
            Ok(a) => {
                if let Some(m) = &a.invalid {
                    let _ = writeln!(out.stderr, "error: {}: {}", a.report.manifold, m);
                }
                if let Some(m) = &a.fatal {
                    let _ = writeln!(out.stderr, "FATAL: {}: {}", a.report.manifold, m);
                }
                out.code = out.code.max(a.exit_code());
                reports.push(a.report);
            }
            Err(e) => {
                let _ = writeln!(out.stderr, "{}", e);
                out.code = out.code.max(e.exit_code());
            }
        }
    }
    if as_json {
        out.stdout = match reports.as_slice() {
            [one] => one.to_json(),
            many => serde_json::to_string_pretty(many).expect("reports serialize") + "\n",
        };
    } else {
        for (i, r) in reports.iter().enumerate() {
            if i > 0 {
                out.stdout.push('\n');
            }
            out.stdout.push_str(&render_text(r));
        }
    }
    out
}

#[derive(Serialize)]
struct IterateJson {
    j: usize,
    v: Vec<String>,
    rank: usize,
    certificate: CertificateJson,
}

/// `segre`: `γ` and `v¹..v^J` with rank certificates.
pub fn cmd_segre(
    path: &Path,
    j: usize,
    gamma_vars: Option<&[usize]>,
    order: Option<u32>,
    as_json: bool,
) -> Result<Outcome, KitError> {
    let file = load_manifold(path)?;
    let sys = system_of(&file, order)?;
    let solved: Option<Vec<usize>> = match gamma_vars {
        None => None,
        Some(v) => {
            if v.iter().any(|&i| i == 0 || i > sys.ambient_dim()) {
                return Err(KitError::Input(format!("--gamma-vars indices must lie in 1..={}", sys.ambient_dim())));
            }
            Some(v.iter().map(|i| i - 1).collect())
        }
    };
    let gamma = solve_gamma(&sys, solved.as_deref())?;
    let residual = gamma_check(&sys, &gamma)?;
    if residual.components().iter().any(|s| !s.is_zero()) {
        return Err(KitError::Fatal(String::from("rho(gamma(zeta, t), zeta) is not zero")));
    }
    let its = iterate_segre(&gamma, j)?;
    let mut rows = Vec::new();
    for it in &its {
        let cert = iterate_rank(it)?;
        rows.push(IterateJson {
            j: it.j,
            v: it.v.components().iter().map(|s| s.to_string()).collect(),
            rank: cert.certified_rank,
            certificate: CertificateJson::new(&cert, it.v.context()),
        });
    }
    let solved_1: Vec<usize> = gamma.solved_vars().iter().map(|i| i + 1).collect();
    if as_json {
        let v = json!({
            "manifold": file.id,
            "order": sys.order(),
            "solved": solved_1,
            "gamma": gamma.gamma().components().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "iterates": rows,
        });
        return Ok(Outcome::ok(serde_json::to_string_pretty(&v).expect("serializes") + "\n"));
    }
    let mut out = String::new();
    let _ = writeln!(out, "manifold {} in C^{}, truncation order {}", file.id, sys.ambient_dim(), sys.order());
    let solved_names: Vec<String> = solved_1.iter().map(|i| format!("Z{}", i)).collect();
    let _ = writeln!(out, "solved for {}", solved_names.join(", "));
    let _ = writeln!(out, "gamma(zeta, t) = {}", vector_text(gamma.gamma()));
    for (it, row) in its.iter().zip(&rows) {
        let _ = writeln!(out, "v{}  = {}", it.j, vector_text(&it.v));
        let c = &row.certificate;
        let _ = write!(
            out,
            "      Rk = {} of {}{}",
            c.certified_rank,
            c.max_rank,
            if c.conclusive { "" } else { " (lower bound)" }
        );
        match &c.witness {
            Some(w) => {
                let _ = writeln!(
                    out,
                    "; minor rows {:?} cols [{}] has {} at {}",
                    w.rows,
                    w.cols.join(", "),
                    w.coeff,
                    w.monomial
                );
            }
            None => {
                let _ = writeln!(out, "; no nonzero minor");
            }
        }
    }
    Ok(Outcome::ok(out))
}

fn finiteness_text(f: &Finiteness) -> String {
    match f {
        Finiteness::Finite(d) => format!("FINITE (dim C[[Z]]/(F) = {})", d),
        Finiteness::NotCertified => String::from("NOT_CERTIFIED"),
        Finiteness::NotApplicable => String::from("NOT_APPLICABLE"),
    }
}

pub struct CheckMapArgs<'a> {
    pub map: &'a Path,
    pub source: &'a Path,
    pub target: &'a Path,
    pub classify: bool,
    pub jets_vs: Option<&'a Path>,
    pub k: u32,
    pub order: Option<u32>,
    pub seed: u64,
    pub json: bool,
}

/// `check-map`: does the map send the source into the target?
///
/// A failing check exits with code 2.
pub fn cmd_check_map(a: &CheckMapArgs<'_>) -> Result<Outcome, KitError> {
    let src = load_manifold(a.source)?;
    let tgt = load_manifold(a.target)?;
    let m = system_of(&src, a.order)?;
    let m2 = system_of(&tgt, a.order)?;
    let mf = load_map(a.map, a.seed)?;
    let order = m.order().min(m2.order());
    let f = formal_map(a.map, &mf, m.ambient_dim(), order)?;
    let rep = sends_into(&f, &m, &m2)?;
    let mut out = String::new();
    let mut js = json!({
        "map": mf.id,
        "source": src.id,
        "target": tgt.id,
        "seed": mf.seed,
        "order": rep.order,
        "sends_into": if rep.passes { "PASS" } else { "FAIL" },
    });
    let _ = writeln!(out, "map {} : {} -> {} (seed {})", mf.id, src.id, tgt.id, mf.seed);
    let _ = writeln!(out, "  F = {}", vector_text(f.components()));
    match &rep.offending {
        None => {
            let _ = writeln!(out, "  sends into: PASS through order {}", rep.order);
        }
        Some(t) => {
            let ctx = rep.residual.context();
            let mono = match ctx.monomial_name(&t.monomial) {
                s if s.is_empty() => String::from("1"),
                s => s,
            };
            let _ = writeln!(
                out,
                "  sends into: FAIL, component {} has {} at {} (degree {})",
                t.component + 1,
                t.coeff,
                mono,
                t.degree()
            );
            js["offending"] = json!({
                "component": t.component + 1,
                "monomial": mono,
                "coeff": t.coeff.to_string(),
                "degree": t.degree(),
            });
        }
    }
    if a.classify && rep.passes {
        let c = classify(&f, &m, &m2)?;
        let _ = writeln!(out, "  invertible: {}", c.invertible);
        let _ = writeln!(out, "  finite: {} (quotient dims {:?})", finiteness_text(&c.finite), c.quotient_dims);
        let _ = writeln!(out, "  CR transversal: {}", c.cr_transversal);
        js["classification"] = json!({
            "invertible": c.invertible,
            "finite": finiteness_text(&c.finite),
            "quotient_dims": c.quotient_dims,
            "cr_transversal": c.cr_transversal,
        });
    }
    if let Some(other) = a.jets_vs {
        let gf = load_map(other, a.seed)?;
        let g = formal_map(other, &gf, m.ambient_dim(), order)?;
        let same = jets_agree(&f, &g, a.k)?;
        let _ = writeln!(out, "  {}-jets agree with {}: {}", a.k, gf.id, same);
        js["jets_vs"] = json!({ "map": gf.id, "k": a.k, "agree": same });
    }
    let stdout = if a.json { serde_json::to_string_pretty(&js).expect("serializes") + "\n" } else { out };
    Ok(Outcome { stdout, stderr: String::new(), code: if rep.passes { 0 } else { 2 } })
}

/// `jets`: group maps of `source → target` by their `K`-jets.
pub fn cmd_jets(
    maps: &[std::path::PathBuf],
    ks: &[u32],
    source: &Path,
    target: Option<&Path>,
    order: Option<u32>,
    seed: u64,
    as_json: bool,
) -> Result<Outcome, KitError> {
    let src = load_manifold(source)?;
    let m = system_of(&src, order)?;
    let (tgt_id, m2) = match target {
        Some(t) => {
            let f = load_manifold(t)?;
            let s = system_of(&f, order)?;
            (f.id, s)
        }
        None => (src.id.clone(), m.clone()),
    };
    let o = m.order().min(m2.order());
    let mut ids = Vec::new();
    let mut family = Vec::new();
    for p in maps {
        let mf = load_map(p, seed)?;
        family.push(formal_map(p, &mf, m.ambient_dim(), o)?);
        ids.push(mf.id);
    }
    let mut out = String::new();
    let _ = writeln!(out, "{} maps {} -> {}", family.len(), src.id, tgt_id);
    let mut rows = Vec::new();
    for &k in ks {
        let rep = determination_experiment(&m, &m2, &family, k).map_err(|e| match e {
            Error::Precondition(msg) => KitError::Input(msg),
            other => other.into(),
        })?;
        let named = |c: &Vec<usize>| c.iter().map(|&i| ids[i].clone()).collect::<Vec<_>>();
        let classes: Vec<Vec<String>> = rep.classes.iter().map(named).collect();
        let verdict = if rep.determination_fails() { "DETERMINATION_FAILS" } else { "DETERMINED" };
        let _ = writeln!(out, "  K = {}: {} ({} classes)", k, verdict, classes.len());
        for c in &rep.counterexamples {
            let _ = writeln!(out, "    equal {}-jets: {}", k, named(c).join(", "));
        }
        rows.push(json!({ "k": k, "verdict": verdict, "classes": classes }));
    }
    if as_json {
        let v = json!({ "source": src.id, "target": tgt_id, "seed": seed, "maps": ids, "results": rows });
        return Ok(Outcome::ok(serde_json::to_string_pretty(&v).expect("serializes") + "\n"));
    }
    Ok(Outcome::ok(out))
}

/// Fails with FATAL unless `ρ(v^{k+1}, v̄^k)` vanishes for `k = 1..=kmax`.
pub fn assert_idv(sys: &DefiningSystem, kmax: usize) -> Result<(), KitError> {
    for k in 1..=kmax {
        verify_idv(sys, k)?;
    }
    Ok(())
}
