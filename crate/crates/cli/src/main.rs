use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tvb_core::bundle::{
    ci_stability, classify, is_complete_intersection, region_table, uniform_sparse_stability,
    BundleData,
};
use tvb_core::cox;
use tvb_core::error::Error;
use tvb_core::gz::{self, format_word, normal_form_word, parse_word, subduct, Trace};
use tvb_core::io::{load_bundle, Report};
use tvb_core::poly::text::format_polynomial;
use tvb_core::poly::{GbCaps, Ideal, TermOrder, VarTable};
use tvb_core::schur::cauchy_verify;
use tvb_core::suite::{run_suite, Level, Outcome, SuiteOptions};

#[derive(Parser)]
#[command(name = "tvb", version, about = "Exact computations for toric vector bundles")]
struct Cli {
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CapArgs {
    /// Largest S-pair degree in Groebner computations.
    #[arg(long, global = true, default_value_t = GbCaps::default().max_degree)]
    max_degree: u32,
    /// Largest Groebner basis size.
    #[arg(long, global = true, default_value_t = GbCaps::default().max_basis)]
    max_basis: usize,
}

impl CapArgs {
    fn caps(&self) -> GbCaps {
        GbCaps {
            max_degree: self.max_degree,
            max_basis: self.max_basis,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a bundle file and compute its CI-stability.
    Analyze { file: PathBuf },
    /// CI test at a given ℓ, or the uniform sparse formula for (r, s).
    CiStability {
        file: Option<PathBuf>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long, requires = "s", conflicts_with = "file")]
        r: Option<usize>,
        #[arg(long, requires = "r")]
        s: Option<usize>,
    },
    /// Uniform sparse stability table over (r, s).
    Region {
        #[arg(long, default_value_t = 6)]
        r_max: usize,
        #[arg(long, default_value_t = 8)]
        s_max: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Cox ring presentations of tangent bundles.
    #[command(subcommand)]
    Cox(CoxCommand),
    /// Cauchy identity for all d, dim E, dim V up to the bounds.
    Cauchy {
        #[arg(long, default_value_t = 8)]
        max_d: u32,
        #[arg(long, default_value_t = 5)]
        max_dim: u32,
    },
    /// Gel'fand-Zetlin pattern and subduction checks for flag bundles.
    #[command(subcommand)]
    Gz(GzCommand),
    /// Run the acceptance suite.
    Suite {
        #[arg(long, default_value = "fast")]
        level: String,
        #[arg(long, default_value_t = 4)]
        workers: usize,
        /// Only these criteria, comma separated.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
        /// Negate the image of this generator (negative control).
        #[arg(long)]
        inject_psi_sign_flip: Option<String>,
    },
}

#[derive(Subcommand)]
enum CoxCommand {
    /// Presentation ideal for Φ_m; `--verify` compares it with ker Φ.
    Tangent {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        verify: bool,
    },
    /// Quiver ideal; `--verify` compares it with the δ-initial ideal.
    Quiver {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        verify: bool,
    },
    /// Row-sum and maximal-minor generators for a column set S.
    LemmaJs {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
    },
    /// Match the n = 2 presentation with the Gr(2,5) Plücker ideal.
    PlueckerMatch,
}

#[derive(Subcommand)]
enum GzCommand {
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long)]
        flip: Option<String>,
    },
    /// Rewrite two words to canonical form and compare.
    Subduct {
        #[arg(long)]
        n: usize,
        first: String,
        second: Option<String>,
    },
}

/// Report plus the pass/fail verdict of any check it ran.
struct Outcomes {
    report: Report,
    ok: bool,
}

fn polys(ps: &[tvb_core::poly::Polynomial], vars: &VarTable) -> Vec<String> {
    let order = TermOrder::grevlex(vars.len());
    ps.iter().map(|p| format_polynomial(p, vars, &order)).collect()
}

fn ideal_json(i: &Ideal, vars: &VarTable) -> Value {
    json!({ "variables": vars.names(), "generators": polys(i.gens(), vars) })
}

fn trace_json(t: &Trace) -> Value {
    json!({
        "start": format_word(&t.start),
        "canonical": format_word(&t.canonical),
        "steps": t.steps.iter().map(|s| json!({
            "rule": s.rule,
            "removed": format_word(&s.removed),
            "added": format_word(&s.added),
            "word": format_word(&s.word),
        })).collect::<Vec<_>>(),
    })
}

fn read(path: &Path) -> Result<(String, BundleData)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (_, b) = load_bundle(&text)?;
    Ok((text, b))
}

fn analyze(path: &Path) -> Result<Outcomes> {
    let start = Instant::now();
    let (text, b) = read(path)?;
    let class = classify(&b);
    let ci = is_complete_intersection(&b, 1)?;
    let stability = if ci { Some(ci_stability(&b)?) } else { None };
    let results = json!({
        "n": b.n(), "s": b.s(), "d": b.d(),
        "classification": class,
        "complete_intersection": ci,
        "stability": stability.as_ref().map(|s| json!({
            "iterative": s.iterative.to_string(),
            "closed_form": s.closed_form.to_string(),
            "witness": s.witness,
        })),
    });
    let ok = stability.as_ref().is_none_or(|s| s.agree());
    let report = Report::new("analyze", &json!({ "file": text }), results)
        .timing("total", start.elapsed().as_millis());
    Ok(Outcomes { report, ok })
}

fn run(cli: &Cli) -> Result<Outcomes> {
    let caps = cli.caps.caps();
    let caps_json = json!({ "max_degree": caps.max_degree, "max_basis": caps.max_basis });
    let start = Instant::now();
    let done = |command: &str, inputs: Value, results: Value, ok: bool| Outcomes {
        report: Report::new(command, &inputs, results).timing("total", start.elapsed().as_millis()),
        ok,
    };
    Ok(match &cli.command {
        Command::Analyze { file } => analyze(file)?,
        Command::CiStability { file, ell, r, s } => match (file, r, s) {
            (None, Some(r), Some(s)) => {
                let l = uniform_sparse_stability(*r, *s)?;
                done("ci-stability", json!({ "r": r, "s": s }), json!({ "stability": l }), true)
            }
            (Some(path), None, None) => {
                let (text, b) = read(path)?;
                let inputs = json!({ "file": text, "ell": ell });
                match ell {
                    Some(l) => {
                        let ci = is_complete_intersection(&b, *l)?;
                        done("ci-stability", inputs, json!({ "ell": l, "complete_intersection": ci }), true)
                    }
                    None => {
                        let st = ci_stability(&b)?;
                        let results = json!({
                            "iterative": st.iterative.to_string(),
                            "closed_form": st.closed_form.to_string(),
                            "witness": st.witness,
                        });
                        done("ci-stability", inputs, results, st.agree())
                    }
                }
            }
            _ => bail!(Error::InvalidInput("give a bundle file or both --r and --s".into())),
        },
        Command::Region { r_max, s_max, csv, svg } => {
            let table = region_table(*r_max, *s_max)?;
            if let Some(p) = csv {
                std::fs::write(p, table.to_csv()).with_context(|| format!("writing {}", p.display()))?;
            }
            if let Some(p) = svg {
                std::fs::write(p, table.to_svg()).with_context(|| format!("writing {}", p.display()))?;
            }
            done("region", json!({ "r_max": r_max, "s_max": s_max }), serde_json::to_value(&table)?, true)
        }
        Command::Cox(c) => match c {
            CoxCommand::Tangent { n, m, verify } => {
                let m = m.unwrap_or(*n);
                let spec = cox::tangent_cox_ideal(*n, m)?;
                let degrees: Vec<_> = spec.generators.iter().map(|g| spec.bidegree(g)).collect();
                let mut results = json!({
                    "presentation": ideal_json(&spec.ideal(), &spec.ring.vars),
                    "bidegrees": degrees,
                });
                let mut ok = true;
                if *verify {
                    let k = cox::verify_kernel(*n, caps)?;
                    ok = k.equal;
                    results["kernel"] = json!({ "equal": k.equal, "generators": k.kernel_generators });
                }
                done("cox tangent", json!({ "n": n, "m": m, "verify": verify, "caps": caps_json }), results, ok)
            }
            CoxCommand::Quiver { n, verify } => {
                let (ring, ideal) = cox::quiver_ideal(*n)?;
                let mut results = json!({ "quiver": ideal_json(&ideal, &ring.vars) });
                let mut ok = true;
                if *verify {
                    let r = cox::verify_delta_initial(*n, caps)?;
                    ok = r.equals_quiver_ideal;
                    results["initial_ideal"] = json!({
                        "equals_quiver_ideal": r.equals_quiver_ideal,
                        "dimension": r.dimension,
                    });
                }
                done("cox quiver", json!({ "n": n, "verify": verify, "caps": caps_json }), results, ok)
            }
            CoxCommand::LemmaJs { n, set } => {
                let inst = cox::lemma_js(*n, set)?;
                let r = cox::verify_lemma(*n, set)?;
                let results = json!({
                    "generators": polys(&inst.generators, &inst.vars),
                    "report": r,
                });
                done("cox lemma-js", json!({ "n": n, "set": set }), results, r.passed())
            }
            CoxCommand::PlueckerMatch => {
                let m = cox::pluecker_match(caps)?;
                let ok = m.found && m.ideal_equal;
                done("cox pluecker-match", json!({ "caps": caps_json }), serde_json::to_value(&m)?, ok)
            }
        },
        Command::Cauchy { max_d, max_dim } => {
            let mut failures = Vec::new();
            let mut checked = 0;
            for d in 0..=*max_d {
                for e in 1..=*max_dim {
                    for v in 1..=*max_dim {
                        let c = cauchy_verify(d, e, v);
                        checked += 1;
                        if !c.equal {
                            failures.push(json!({ "d": d, "e": e, "v": v, "lhs": c.lhs.to_string(), "rhs": c.rhs.to_string() }));
                        }
                    }
                }
            }
            let ok = failures.is_empty();
            done(
                "cauchy",
                json!({ "max_d": max_d, "max_dim": max_dim }),
                json!({ "checked": checked, "failures": failures }),
                ok,
            )
        }
        Command::Gz(g) => match g {
            GzCommand::Verify { n, max_len, flip } => {
                let r = gz::verify_gz(*n, *max_len, caps, flip.as_deref())?;
                let mut results = serde_json::to_value(&r)?;
                results["first_failure"] = json!(r.first_failure());
                let inputs = json!({ "n": n, "max_len": max_len, "flip": flip, "caps": caps_json });
                done("gz verify", inputs, results, r.passed())
            }
            GzCommand::Subduct { n, first, second } => {
                let w1 = parse_word(first, *n)?;
                let inputs = json!({ "n": n, "first": first, "second": second });
                match second {
                    Some(text) => {
                        let w2 = parse_word(text, *n)?;
                        let s = subduct(&w1, &w2, *n)?;
                        let results = json!({
                            "first": trace_json(&s.first),
                            "second": trace_json(&s.second),
                            "joined": s.joined,
                        });
                        done("gz subduct", inputs, results, s.joined)
                    }
                    None => {
                        let t = normal_form_word(&w1, *n)?;
                        done("gz subduct", inputs, json!({ "first": trace_json(&t) }), true)
                    }
                }
            }
        },
        Command::Suite { level, workers, only, inject_psi_sign_flip } => {
            let level: Level = level.parse()?;
            let opts = SuiteOptions {
                level,
                caps,
                workers: *workers,
                inject_psi_sign_flip: inject_psi_sign_flip.clone(),
            };
            let r = run_suite(&opts, only)?;
            for c in &r.criteria {
                eprintln!(
                    "criterion {:>2} {:<24} {:?} ({} ms) {}",
                    c.id, c.name, c.outcome, c.elapsed_ms, c.detail
                );
            }
            if r.cap_exceeded() {
                bail!(Error::CapExceeded {
                    what: format!("suite criterion {}", r.first_failure().map_or(0, |c| c.id)),
                    degree: caps.max_degree,
                });
            }
            if let Some(f) = r.first_failure() {
                eprintln!("first failure: criterion {} ({}): {}", f.id, f.name, f.detail);
            }
            let mut results = serde_json::to_value(&r)?;
            // timings live in the report's own field
            for c in results["criteria"].as_array_mut().expect("criteria array") {
                c.as_object_mut().expect("criterion object").remove("elapsed_ms");
            }
            let mut report = Report::new(
                "suite",
                &json!({ "level": level, "only": only, "flip": inject_psi_sign_flip, "caps": caps_json }),
                results,
            );
            for c in &r.criteria {
                report = report.timing(&format!("criterion {}", c.id), c.elapsed_ms);
            }
            let ok = r.passed() && !r.criteria.iter().any(|c| c.outcome == Outcome::Error);
            Outcomes { report: report.timing("total", start.elapsed().as_millis()), ok }
        }
    })
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::CapExceeded { .. }) => 3,
        Some(Error::Precondition(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcomes { report, ok }) => {
            let text = report.to_json();
            print!("{text}");
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: writing {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
