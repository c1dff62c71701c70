use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use log::info;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use critset::completion::{
    complete_unique, count_completions, count_completions_with, enumerate_completions, CompletionBudget, SearchOptions,
};
use critset::constructions::{
    b_certificate, b_max_critical, b_max_critical_relaxed, build_b, build_m_k, build_x, build_y, critical_x,
    critical_y, spectrum, sup_pair, CompositionPair,
};
use critset::defsets::{is_defining, minimize_to_critical, CertifiedCriticalSet};
use critset::error::Error;
use critset::extremal::{class_report, class_report_reduced};
use critset::matrix::{ClassSpec, Entry, PartialMatrix};
use critset::trades::{decompose_cycles, find_cycle_through, trade_between, Cycle};
use critset::walks::{search_exact_certificate, search_walk_certificate, WalkCertificate};

use crate::io::{matrix, pair, read_matrix, read_set};
use crate::{Cli, Command, Family};

/// What to print and whether the checked claim held.
pub struct Outcome {
    pub text: String,
    pub holds: bool,
}

struct Out {
    json: bool,
}

impl Out {
    fn emit(&self, holds: bool, text: String, value: Value) -> Result<Outcome> {
        let text = if self.json { serde_json::to_string_pretty(&value)? + "\n" } else { text };
        Ok(Outcome { text, holds })
    }
}

fn circuit_text(c: &Cycle) -> String {
    c.circuit().iter().map(|t| format!("({},{},{})", t.row, t.col, u8::from(t.value))).collect::<Vec<_>>().join(" ")
}

fn certificate_text(c: &WalkCertificate) -> String {
    let join = |v: Vec<usize>| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    format!(
        "row order: {}\ncolumn order: {}\nwalk depths: {}\n",
        join(c.row_perm.one_based()),
        join(c.col_perm.one_based()),
        join(c.walk.depth().to_vec())
    )
}

/// Attaches an exact certificate when one is cheap to find.
fn with_certificate(mut c: CertifiedCriticalSet) -> Result<CertifiedCriticalSet> {
    if c.certificate.is_none() && c.matrix.rows() <= 16 && c.matrix.cols() <= 16 {
        c.certificate = search_exact_certificate(&c.matrix, &c.cells)?;
    }
    Ok(c)
}

/// The first cell whose removal keeps `d` defining, if any.
fn removable_cell(d: &PartialMatrix) -> Result<Option<(usize, usize)>> {
    let mut probe = d.clone();
    for t in d.triples() {
        probe.set(t.row, t.col, Entry::Empty);
        if count_completions(&probe, CompletionBudget::new(2))? == 1 {
            return Ok(Some((t.row, t.col)));
        }
        probe.set(t.row, t.col, Entry::from_bit(t.value));
    }
    Ok(None)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let out = Out { json: cli.json };
    match &cli.command {
        Command::VerifyDefining(input) => {
            let (m, d) = pair(input)?;
            let ok = is_defining(&m, &d)?;
            let text = if ok { format!("defining, size {}\n", d.size()) } else { "not defining\n".into() };
            out.emit(ok, text, json!({ "defining": ok, "size": d.size() }))
        }
        Command::VerifyCritical { input, certificates } => {
            let (m, d) = pair(input)?;
            if !is_defining(&m, &d)? {
                return out.emit(false, "not critical: not defining\n".into(), json!({ "critical": false, "reason": "not defining" }));
            }
            if *certificates {
                let Some(cert) = search_exact_certificate(&m, &d)? else {
                    let why = "no walk certificate induces this set";
                    return out.emit(false, format!("not critical: {why}\n"), json!({ "critical": false, "reason": why }));
                };
                let mut c = CertifiedCriticalSet::new(m, d);
                c.certificate = Some(cert);
                let ok = c.verify_by_certificates()?;
                let text = if ok { format!("critical, size {} (certified)\n", c.size()) } else { "not critical\n".into() };
                return out.emit(ok, text, json!({ "critical": ok, "size": c.size(), "certificate": c.certificate }));
            }
            match removable_cell(&d)? {
                None => out.emit(true, format!("critical, size {}\n", d.size()), json!({ "critical": true, "size": d.size() })),
                Some((i, j)) => out.emit(
                    false,
                    format!("not critical: cell ({i},{j}) can be removed\n"),
                    json!({ "critical": false, "reason": "removable cell", "cell": [i, j] }),
                ),
            }
        }
        Command::Complete { set, all } => {
            let d = read_matrix(set)?;
            if let Some(limit) = all {
                let found = enumerate_completions(&d, CompletionBudget::new(*limit))?;
                let text = found.iter().map(|m| m.to_text()).collect::<Vec<_>>().join("\n");
                let value = json!({ "completions": found.iter().map(|m| json!(m)).collect::<Vec<_>>() });
                return out.emit(!found.is_empty(), text, value);
            }
            match complete_unique(&d) {
                Ok(m) => out.emit(true, m.to_text(), json!({ "status": "unique", "completion": m })),
                Err(Error::NoCompletion) => out.emit(false, "no completion\n".into(), json!({ "status": "none" })),
                Err(Error::Ambiguous) => {
                    out.emit(false, "more than one completion\n".into(), json!({ "status": "ambiguous" }))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Count { set, limit, node_cap, plain } => {
            let d = read_matrix(set)?;
            let mut budget = limit.map_or(CompletionBudget::unlimited(), CompletionBudget::new);
            if let Some(cap) = node_cap {
                budget = budget.with_node_cap(*cap);
            }
            let opts = if *plain { SearchOptions::PLAIN } else { SearchOptions::default() };
            let n = count_completions_with(&d, budget, opts)?;
            out.emit(true, format!("{n}\n"), json!({ "completions": n, "limit": limit }))
        }
        Command::Minimize { input, set, shuffle } => {
            let m = matrix(input)?;
            let d = match set {
                Some(p) => read_set(p, m.margins())?,
                None => m.clone(),
            };
            let mut order: Vec<(usize, usize)> = d.triples().iter().map(|t| (t.row, t.col)).collect();
            if *shuffle {
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(cli.seed));
            }
            info!("minimising {} cells", order.len());
            let c = with_certificate(minimize_to_critical(&m, &d, Some(&order))?)?;
            let text = format!("{}# critical set, size {}\n", c.cells.to_text(), c.size());
            out.emit(true, text, json!(&c))
        }
        Command::Decompose { input, other } => {
            let m = matrix(input)?;
            let o = read_set(other, m.margins())?;
            let Some(t) = trade_between(&m, &o)? else {
                return out.emit(true, "identical matrices\n".into(), json!({ "trade": null, "cycles": [] }));
            };
            let cycles = decompose_cycles(&t);
            let mut text = format!("trade of {} cells, {} cycle(s)\n", t.size(), cycles.len());
            for c in &cycles {
                writeln!(text, "{}", circuit_text(c))?;
            }
            out.emit(true, text, json!({ "trade": t.body(), "cycles": cycles }))
        }
        Command::CycleThrough { input, row, col } => {
            let (m, d) = pair(input)?;
            match find_cycle_through(&m, &d, *row, *col)? {
                Some(c) => out.emit(true, circuit_text(&c) + "\n", json!({ "cycle": c })),
                None => out.emit(
                    false,
                    format!("no cycle meets the set only at ({row},{col})\n"),
                    json!({ "cycle": null }),
                ),
            }
        }
        Command::Construct { family, m, k, with_critical } => construct(&out, *family, *m, *k, *with_critical),
        Command::Spectrum { m, verify } => {
            let sets = spectrum(*m)?;
            let mut text = String::new();
            let mut all_ok = true;
            let mut entries = serde_json::Map::new();
            for (k, c) in &sets {
                let status = if *verify {
                    let ok = if *m <= 3 { c.verify_by_counting()? } else { c.clone().verify_by_certificates()? };
                    all_ok &= ok;
                    if ok { "verified" } else { "FAILED" }
                } else {
                    "certified by walk"
                };
                writeln!(text, "{k:>4}  {status}")?;
                entries.insert(k.to_string(), json!(c));
            }
            let value = json!({ "m": m, "sizes": sets.keys().collect::<Vec<_>>(), "sets": entries });
            out.emit(all_ok, text, value)
        }
        Command::BAnalysis { m, relaxed } => {
            let r = b_max_critical(*m)?;
            let unit = 2 * m * m - m;
            let mut text = format!(
                "largest critical set of B_{}: {} (s = {:?}, t = {:?}; {} pairs)\nunit pair gives 2m²-m = {}\n",
                2 * m,
                r.size,
                r.witness.s,
                r.witness.t,
                r.pairs_checked,
                unit
            );
            let mut value = json!({ "m": m, "max": r, "unitPair": unit });
            if *relaxed {
                let rr = b_max_critical_relaxed(*m)?;
                writeln!(text, "relaxed bound: {}", rr.size)?;
                value["relaxed"] = json!(&rr);
            }
            out.emit(true, text, value)
        }
        Command::SupPair { input } => {
            let m = matrix(input)?;
            let (c1, c2) = sup_pair(&m)?;
            let half = m.rows() / 2;
            let bound = 3 * half * half + 1 - 2 * half;
            let sum = c1.size() + c2.size();
            let text = format!(
                "{}# C1, size {}\n{}# C2, size {}\n|C1| + |C2| = {} (bound {})\n",
                c1.cells.to_text(),
                c1.size(),
                c2.cells.to_text(),
                c2.size(),
                sum,
                bound
            );
            out.emit(sum >= bound, text, json!({ "c1": c1, "c2": c2, "sum": sum, "bound": bound }))
        }
        Command::Extremal { n, x, reduced } => {
            let spec = ClassSpec::uniform(*n, *x)?;
            let r = if *reduced { class_report_reduced(&spec)? } else { class_report(&spec)? };
            out.emit(true, format!("{r}\n"), json!(&r))
        }
        Command::CertifyWalk { input, exact } => {
            let (m, d) = pair(input)?;
            let cert = if *exact { search_exact_certificate(&m, &d)? } else { search_walk_certificate(&m, &d)? };
            match cert {
                Some(c) => {
                    let size = c.induced_set(&m)?.size();
                    let text = format!("{}induced set size: {}\n", certificate_text(&c), size);
                    out.emit(true, text, json!({ "certificate": c, "inducedSize": size }))
                }
                None => out.emit(false, "no walk certificate\n".into(), json!({ "certificate": null })),
            }
        }
    }
}

fn construct(out: &Out, family: Family, m: usize, k: Option<usize>, with_critical: bool) -> Result<Outcome> {
    let certified = match family {
        Family::X => {
            build_x(m)?;
            critical_x(m)?
        }
        Family::Y => critical_y(m)?,
        Family::Mk => build_m_k(m, k.context("mk needs --k")?)?,
        Family::B => {
            let b = build_b(m)?;
            CertifiedCriticalSet::with_certificate(b, b_certificate(m, &CompositionPair::unit(m))?)?
        }
    };
    if family != Family::Mk && k.is_some() {
        bail!("--k only applies to mk");
    }
    if family == Family::Y {
        // Y is defined from X, so build it through the public builder too
        debug_assert_eq!(build_y(m)?, certified.matrix);
    }
    let mut text = certified.matrix.to_text();
    let mut value = json!({ "matrix": certified.matrix });
    if with_critical {
        write!(text, "# critical set, size {}\n{}", certified.size(), certified.cells.to_text())?;
        value["critical"] = json!(&certified);
    }
    out.emit(true, text, value)
}
