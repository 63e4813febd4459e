//! The command-line front end: tower-file commands, budgets, exit codes,
//! and machine-readable output.
//!
//! Every command reads a tower file (except `examples`), prints a human
//! table on standard output, or — with `--json` — a single machine document
//! tagged `"schema": "iwagraph/1"`. Exit codes: 0 success, 1 a requested
//! check failed (or the operation errored), 2 usage errors, 3 a size budget
//! was exceeded.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::corpus::golden_suite;
use crate::error::{Error, Result};
use crate::exact::{CyclotomicElem, LaurentPoly};
use crate::ihara::interpolation_check;
use crate::iwasawa::{
    growth_table, invariants_l1, invariants_l2, nu_from_growth, voltage_laplacian, GrowthMethod,
    GrowthRow,
};
use crate::jacobian::{
    fukuda_stabilize, jacobian_of_cover, rank_sequence, ComputeBudget, JacobianMethod,
    RankIdealSpec,
};
use crate::tower::{parse_tower_file, parse_tower_file_relaxed, TowerSpec};
use crate::voltage::{derived_graph, VoltageAssignment};

const SCHEMA: &str = "iwagraph/1";

#[derive(Parser)]
#[command(
    name = "iwagraph",
    version,
    about = "Exact Jacobian growth along p-power voltage covers of multigraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit one machine-readable JSON document instead of the human table
    #[arg(long, global = true)]
    json: bool,

    /// Largest cover (in vertices) the exact Smith-normal-form engine accepts
    #[arg(long, global = true, default_value_t = 5000)]
    max_vertices: usize,

    /// Largest cover the valuation-only mod-p^K engine accepts
    #[arg(long, global = true, default_value_t = 50_000)]
    max_vertices_modp: usize,

    /// Covers up to this size get full invariant-factor chains; larger ones
    /// only the p-valuation
    #[arg(long, global = true, default_value_t = 400)]
    exact_snf_threshold: usize,

    /// Accept tower files whose covers fall apart into disconnected sheets
    #[arg(long, global = true)]
    allow_disconnected: bool,
}

#[derive(Subcommand)]
enum Command {
    /// p-part of the Jacobian of the level-m cover
    Jacobian {
        #[arg(long)]
        level: u32,
        file: PathBuf,
    },
    /// Unroll the level-m cover and write it as a tower file
    Derived {
        #[arg(long)]
        level: u32,
        /// Output path for the unrolled graph
        #[arg(long)]
        out: PathBuf,
        file: PathBuf,
    },
    /// The voltage Laplacian determinant, in the shifted T/S variables
    Det { file: PathBuf },
    /// Growth invariants: μ and λ for rank 1, m₀ and l₀ for rank 2
    Invariants { file: PathBuf },
    /// Jacobian p-valuations level by level
    Growth {
        #[arg(long)]
        max_level: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        file: PathBuf,
    },
    /// Compare the brute-force and analytic engines at every level
    Verify {
        #[arg(long)]
        max_level: u32,
        file: PathBuf,
    },
    /// Check zeta values against determinant specializations at one level
    Ihara {
        #[arg(long)]
        level: u32,
        file: PathBuf,
    },
    /// Ideal-quotient ranks level by level and their stabilization
    Fukuda {
        /// Ideal generators, e.g. "3,T" or "3^8,T^2+3*T" (T = τ-1, S = σ-1)
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        max_level: u32,
        file: PathBuf,
    },
    /// Run the built-in golden suite and print its pass/fail table
    Examples,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Snf,
    Analytic,
    Both,
}

impl From<MethodArg> for GrowthMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Snf => GrowthMethod::Snf,
            MethodArg::Analytic => GrowthMethod::Analytic,
            MethodArg::Both => GrowthMethod::Both,
        }
    }
}

/// Parse arguments from the process environment, run, and hand back the
/// process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e @ Error::BudgetExceeded { .. }) => {
            eprintln!("error: {e}");
            3
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn budget_of(cli: &Cli) -> ComputeBudget {
    ComputeBudget {
        max_vertices_exact: cli.max_vertices,
        max_vertices_modp: cli.max_vertices_modp,
        exact_snf_threshold: cli.exact_snf_threshold,
    }
}

fn load(cli: &Cli, path: &Path) -> Result<TowerSpec> {
    if cli.allow_disconnected {
        parse_tower_file_relaxed(path)
    } else {
        parse_tower_file(path)
    }
}

/// A command's result: the machine document, the human rendering, and
/// whether every requested check passed.
struct Outcome {
    doc: Value,
    human: String,
    pass: bool,
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let outcome = match &cli.command {
        Command::Jacobian { level, file } => cmd_jacobian(cli, file, *level)?,
        Command::Derived { level, out, file } => cmd_derived(cli, file, *level, out)?,
        Command::Det { file } => cmd_det(cli, file)?,
        Command::Invariants { file } => cmd_invariants(cli, file)?,
        Command::Growth {
            max_level,
            method,
            file,
        } => cmd_growth(cli, file, *max_level, (*method).into())?,
        Command::Verify { max_level, file } => cmd_verify(cli, file, *max_level)?,
        Command::Ihara { level, file } => cmd_ihara(cli, file, *level)?,
        Command::Fukuda {
            ideal,
            max_level,
            file,
        } => cmd_fukuda(cli, file, ideal, *max_level)?,
        Command::Examples => cmd_examples()?,
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&outcome.doc).expect("valid document"));
    } else {
        print!("{}", outcome.human);
    }
    Ok(if outcome.pass { 0 } else { 1 })
}

fn doc_header(command: &str, spec: &TowerSpec) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "p": spec.p(),
        "l": spec.l(),
        "label": spec.label(),
    })
}

fn poly_json(poly: &LaurentPoly) -> Value {
    let terms: Vec<Value> = poly
        .terms()
        .map(|(exponents, coeff)| json!({"exponents": exponents, "coeff": coeff.to_string()}))
        .collect();
    Value::Array(terms)
}

fn cyclo_json(x: &CyclotomicElem) -> Value {
    json!({
        "conductor_exponent": x.conductor_exponent(),
        "coeffs": x.coeffs().iter().map(BigInt::to_string).collect::<Vec<_>>(),
    })
}

fn fmt_cyclo(x: &CyclotomicElem) -> String {
    let coeffs = x.coeffs();
    if coeffs.is_empty() {
        return "0".to_string();
    }
    if coeffs.iter().skip(1).all(num_traits::Zero::is_zero) {
        return coeffs[0].to_string();
    }
    let parts: Vec<String> = coeffs.iter().map(BigInt::to_string).collect();
    format!("[{}] (coefficients on 1, ζ, ζ², …)", parts.join(", "))
}

fn header_line(spec: &TowerSpec) -> String {
    let label = spec
        .label()
        .map(|l| format!(" — {l}"))
        .unwrap_or_default();
    format!(
        "tower: p = {}, l = {}, base has {} vertices / {} edges{label}\n",
        spec.p(),
        spec.l(),
        spec.graph().vertex_count(),
        spec.graph().edge_count(),
    )
}

fn cmd_jacobian(cli: &Cli, file: &Path, level: u32) -> Result<Outcome> {
    let spec = load(cli, file)?;
    let data = jacobian_of_cover(spec.graph(), spec.assignment(), level, &budget_of(cli))?;

    let method = match data.method {
        JacobianMethod::ExactSnf => "exact-snf".to_string(),
        JacobianMethod::LocalPk { k } => format!("local-p^{k}"),
    };
    let nontrivial: Vec<String> = data
        .invariant_factors
        .iter()
        .flatten()
        .filter(|d| **d != BigInt::from(1))
        .map(BigInt::to_string)
        .collect();
    let trivial_count = data
        .invariant_factors
        .as_ref()
        .map(|d| d.len() - nontrivial.len());

    let mut human = header_line(&spec);
    human += &format!(
        "level {level} cover: {} vertices\nv_{}(|J|) = {}\n",
        data.vertex_count,
        spec.p(),
        data.vp
    );
    if let Some(order) = &data.order {
        human += &format!("|J| = {order}\n");
    }
    if !nontrivial.is_empty() {
        human += &format!(
            "invariant factors: {} (and {} trivial)\n",
            nontrivial.join(", "),
            trivial_count.unwrap_or(0)
        );
    }
    human += &format!("method: {method}\n");

    let mut doc = doc_header("jacobian", &spec);
    doc["level"] = json!(level);
    doc["vertices"] = json!(data.vertex_count);
    doc["vp"] = json!(data.vp);
    doc["order"] = json!(data.order.as_ref().map(BigInt::to_string));
    doc["invariant_factors_nontrivial"] = json!(nontrivial);
    doc["invariant_factors_trivial_count"] = json!(trivial_count);
    doc["method"] = json!(method);
    Ok(Outcome {
        doc,
        human,
        pass: true,
    })
}

fn cmd_derived(cli: &Cli, file: &Path, level: u32, out: &Path) -> Result<Outcome> {
    let spec = load(cli, file)?;
    let cover = derived_graph(
        spec.graph(),
        spec.assignment(),
        level,
        budget_of(cli).max_vertices_modp,
    )?;
    let graph = cover.graph().clone();
    let (vertices, edges) = (graph.vertex_count(), graph.edge_count());
    let label = match spec.label() {
        Some(l) => format!("{l} / level {level} cover"),
        None => format!("level {level} cover"),
    };
    // The unrolled graph is exported as a plain graph: same format, same
    // (p, l), untwisted voltages. Re-reading it as a tower therefore needs
    // --allow-disconnected.
    let trivial = VoltageAssignment::trivial(spec.p(), spec.l(), edges)?;
    let derived_spec = TowerSpec::new(graph, trivial, Some(label))?;
    std::fs::write(out, derived_spec.canonical_string())?;

    let mut human = header_line(&spec);
    human += &format!(
        "wrote the level-{level} cover ({vertices} vertices, {edges} edges) to {}\n",
        out.display()
    );
    let mut doc = doc_header("derived", &spec);
    doc["level"] = json!(level);
    doc["vertices"] = json!(vertices);
    doc["edges"] = json!(edges);
    doc["out"] = json!(out.display().to_string());
    Ok(Outcome {
        doc,
        human,
        pass: true,
    })
}

fn cmd_det(cli: &Cli, file: &Path) -> Result<Outcome> {
    let spec = load(cli, file)?;
    let n = spec.graph().vertex_count();
    let entries = voltage_laplacian(spec.graph(), spec.assignment())?;
    let det = crate::exact::det_ring(n, &entries).canonical();
    let shifted = det.shift_vars_plus_one();

    let mut human = header_line(&spec);
    human += &format!("det Δ∞ (T = τ-1{}) = {shifted}\n", if spec.l() == 2 { ", S = σ-1" } else { "" });

    let mut doc = doc_header("det", &spec);
    doc["det_shifted"] = poly_json(&shifted);
    doc["det_group_basis"] = poly_json(&det);
    doc["display"] = json!(shifted.to_string());
    Ok(Outcome {
        doc,
        human,
        pass: true,
    })
}

fn cmd_invariants(cli: &Cli, file: &Path) -> Result<Outcome> {
    let spec = load(cli, file)?;
    let mut human = header_line(&spec);
    let mut doc = doc_header("invariants", &spec);
    match spec.l() {
        1 => {
            let inv = invariants_l1(spec.graph(), spec.assignment())?;
            human += &format!(
                "characteristic polynomial: {}\nμ = {}\nλ = {}\n",
                inv.char_t, inv.mu, inv.lambda
            );
            doc["mu"] = json!(inv.mu);
            doc["lambda"] = json!(inv.lambda);
            doc["char_t"] = poly_json(&inv.char_t);
            doc["char_display"] = json!(inv.char_t.to_string());
        }
        2 => {
            let inv = invariants_l2(spec.graph(), spec.assignment())?;
            human += &format!(
                "m₀ = {}\nl₀ = {}\ndistinguished part mod {}: {}\n",
                inv.m0,
                inv.l0,
                spec.p(),
                inv.distinguished_mod_p
            );
            doc["m0"] = json!(inv.m0);
            doc["l0"] = json!(inv.l0);
            doc["distinguished_mod_p"] = poly_json(&inv.distinguished_mod_p);
            doc["distinguished_display"] = json!(inv.distinguished_mod_p.to_string());
        }
        got => return Err(Error::WrongArity { expected: 2, got }),
    }
    Ok(Outcome {
        doc,
        human,
        pass: true,
    })
}

fn growth_rows_json(rows: &[GrowthRow]) -> Value {
    let out: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "level": r.level,
                "vertices": r.vertices.to_string(),
                "snf_vp": r.snf_vp,
                "analytic_vp": r.analytic_vp,
                "snf_skipped": r.snf_skipped,
            })
        })
        .collect();
    Value::Array(out)
}

fn growth_rows_table(rows: &[GrowthRow]) -> String {
    let mut s = format!(
        "{:<6} {:>10} {:>12} {:>12}\n",
        "level", "vertices", "brute-force", "analytic"
    );
    for r in rows {
        let fmt_opt = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
        s += &format!(
            "{:<6} {:>10} {:>12} {:>12}{}\n",
            r.level,
            r.vertices,
            fmt_opt(r.snf_vp),
            fmt_opt(r.analytic_vp),
            r.snf_skipped
                .as_deref()
                .map(|m| format!("   ({m})"))
                .unwrap_or_default(),
        );
    }
    s
}

/// Fit μ·p^m + λ·m + ν through the computed valuations when the tower has
/// rank one (μ, λ from the characteristic polynomial; ν from the rows).
fn l1_fit(spec: &TowerSpec, rows: &[GrowthRow]) -> Option<(u64, u64, i64, u32)> {
    if spec.l() != 1 {
        return None;
    }
    let inv = invariants_l1(spec.graph(), spec.assignment()).ok()?;
    let samples: Vec<(u32, u64)> = rows
        .iter()
        .filter_map(|r| r.analytic_vp.or(r.snf_vp).map(|v| (r.level, v)))
        .collect();
    let (nu, stable_from) = nu_from_growth(&samples, spec.p(), inv.mu, inv.lambda).ok()?;
    Some((inv.mu, inv.lambda, nu, stable_from))
}

fn cmd_growth(cli: &Cli, file: &Path, max_level: u32, method: GrowthMethod) -> Result<Outcome> {
    let spec = load(cli, file)?;
    let rows = growth_table(
        spec.graph(),
        spec.assignment(),
        max_level,
        method,
        &budget_of(cli),
    )?;

    let mut human = header_line(&spec);
    human += &growth_rows_table(&rows);
    let fit = l1_fit(&spec, &rows);
    if let Some((mu, lambda, nu, stable_from)) = &fit {
        let tail = if *nu < 0 {
            format!("- {}", -nu)
        } else {
            format!("+ {nu}")
        };
        human += &format!(
            "fit: v_{p}(|J|) = {mu}·{p}^m + {lambda}·m {tail} for m ≥ {stable_from}\n",
            p = spec.p()
        );
    }

    let mut doc = doc_header("growth", &spec);
    doc["rows"] = growth_rows_json(&rows);
    doc["fit"] = fit.map_or(Value::Null, |(mu, lambda, nu, stable_from)| {
        json!({"mu": mu, "lambda": lambda, "nu": nu, "stable_from": stable_from})
    });
    Ok(Outcome {
        doc,
        human,
        pass: true,
    })
}

fn cmd_verify(cli: &Cli, file: &Path, max_level: u32) -> Result<Outcome> {
    let spec = load(cli, file)?;
    let rows = growth_table(
        spec.graph(),
        spec.assignment(),
        max_level,
        GrowthMethod::Both,
        &budget_of(cli),
    )?;
    let mut mismatches = Vec::new();
    let mut compared = 0usize;
    for r in &rows {
        if let (Some(snf), Some(analytic)) = (r.snf_vp, r.analytic_vp) {
            compared += 1;
            if snf != analytic {
                mismatches.push(r.level);
            }
        }
    }
    let pass = mismatches.is_empty();

    let mut human = header_line(&spec);
    human += &growth_rows_table(&rows);
    human += &if pass {
        format!("verified: brute force and analytic agree on {compared} level(s)\n")
    } else {
        format!("MISMATCH at level(s) {mismatches:?}\n")
    };

    let mut doc = doc_header("verify", &spec);
    doc["rows"] = growth_rows_json(&rows);
    doc["compared_levels"] = json!(compared);
    doc["mismatched_levels"] = json!(mismatches);
    doc["all_match"] = json!(pass);
    Ok(Outcome { doc, human, pass })
}

fn cmd_ihara(cli: &Cli, file: &Path, level: u32) -> Result<Outcome> {
    let spec = load(cli, file)?;
    let report = interpolation_check(spec.graph(), spec.assignment(), level)?;

    let mut human = header_line(&spec);
    human += &format!(
        "level {level}: {} nontrivial character(s)\n",
        report.checks.len()
    );
    for c in &report.checks {
        if c.matches {
            human += &format!("  ψ = {:?}: P_ψ(1) = ψ(det) = {}\n", c.exponents, fmt_cyclo(&c.zeta_side));
        } else {
            human += &format!(
                "  ψ = {:?}: MISMATCH P_ψ(1) = {} but ψ(det) = {}\n",
                c.exponents,
                fmt_cyclo(&c.zeta_side),
                fmt_cyclo(&c.determinant_side)
            );
        }
    }
    human += &if report.all_match {
        "zeta values interpolate the determinant at every character\n".to_string()
    } else {
        "INTERPOLATION FAILED\n".to_string()
    };

    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "character": c.exponents,
                "zeta_side": cyclo_json(&c.zeta_side),
                "determinant_side": cyclo_json(&c.determinant_side),
                "matches": c.matches,
            })
        })
        .collect();
    let mut doc = doc_header("ihara", &spec);
    doc["level"] = json!(level);
    doc["checks"] = Value::Array(checks);
    doc["all_match"] = json!(report.all_match);
    Ok(Outcome {
        doc,
        human,
        pass: report.all_match,
    })
}

fn cmd_fukuda(cli: &Cli, file: &Path, ideal: &str, max_level: u32) -> Result<Outcome> {
    let spec = load(cli, file)?;
    let parsed = match parse_ideal_spec(ideal, spec.p(), spec.l()) {
        Ok(p) => p,
        Err(message) => {
            return Err(Error::TowerField {
                field: "--ideal".into(),
                message,
            })
        }
    };
    let budget = budget_of(cli);
    let ranks = rank_sequence(spec.graph(), spec.assignment(), &parsed, max_level, &budget)?;
    let stable = fukuda_stabilize(spec.graph(), spec.assignment(), &parsed, max_level, &budget)?;

    let mut human = header_line(&spec);
    human += &format!("ideal ({ideal}): v_p-ranks by level: {ranks:?}\n");
    human += &match stable {
        Some((m, rank)) => format!(
            "stabilizes at level {m}: consecutive levels agree at rank {rank}, hence all later levels do\n"
        ),
        None => format!("no two consecutive levels agree up to m = {max_level}\n"),
    };

    let mut doc = doc_header("fukuda", &spec);
    doc["ideal"] = json!(ideal);
    doc["ranks"] = json!(ranks);
    doc["stable_from"] = json!(stable.map(|(m, _)| m));
    doc["stable_rank"] = json!(stable.map(|(_, r)| r));
    Ok(Outcome {
        doc,
        human,
        pass: true,
    })
}

fn cmd_examples() -> Result<Outcome> {
    let rows = golden_suite();
    let failed = rows.iter().filter(|r| !r.pass).count();

    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut human = String::new();
    for r in &rows {
        human += &format!(
            "{:<width$}  {}  {}\n",
            r.name,
            if r.pass { "PASS" } else { "FAIL" },
            r.detail,
        );
    }
    human += &format!("{} rows, {} failed\n", rows.len(), failed);

    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| json!({"name": r.name, "pass": r.pass, "detail": r.detail}))
        .collect();
    let doc = json!({
        "schema": SCHEMA,
        "command": "examples",
        "rows": json_rows,
        "total": rows.len(),
        "failed": failed,
    });
    Ok(Outcome {
        doc,
        human,
        pass: failed == 0,
    })
}

/// Parse an ideal description like `"3,T"` or `"3^8,T^2+3*T"`: one p-power
/// generator (base must be the tower's prime) plus polynomial generators in
/// T (and S for rank-two towers), which are mapped into the deck-group
/// algebra via T = τ − 1, S = σ − 1.
pub fn parse_ideal_spec(
    spec: &str,
    p: u64,
    rank: usize,
) -> std::result::Result<RankIdealSpec, String> {
    let mut p_power: Option<u32> = None;
    let mut polys = Vec::new();
    for part in spec.split(',') {
        let part: String = part.chars().filter(|c| !c.is_whitespace()).collect();
        if part.is_empty() {
            return Err("empty generator in ideal description".into());
        }
        if let Some(power) = parse_p_power(&part, p)? {
            if p_power.replace(power).is_some() {
                return Err("more than one p-power generator".into());
            }
        } else {
            polys.push(parse_shifted_poly(&part, rank)?.shift_vars_minus_one());
        }
    }
    let p_power = p_power.ok_or("ideal needs one p-power generator, e.g. \"3\" or \"3^8\"")?;
    Ok(RankIdealSpec::new(p_power, polys))
}

/// `"125"`-style or `"5^3"`-style powers of the tower prime; `None` when the
/// generator isn't purely numeric.
fn parse_p_power(part: &str, p: u64) -> std::result::Result<Option<u32>, String> {
    if !part.chars().all(|c| c.is_ascii_digit() || c == '^') {
        return Ok(None);
    }
    let (base, exponent) = match part.split_once('^') {
        Some((b, e)) => (
            b.parse::<u64>().map_err(|_| format!("bad integer `{b}`"))?,
            e.parse::<u32>().map_err(|_| format!("bad exponent `{e}`"))?,
        ),
        None => (
            part.parse::<u64>()
                .map_err(|_| format!("bad integer `{part}`"))?,
            1,
        ),
    };
    if base == p {
        return Ok(Some(exponent));
    }
    // Accept a literal power like 125 for p = 5.
    let mut value = base;
    let mut e = 0u32;
    while value % p == 0 {
        value /= p;
        e += 1;
    }
    if value == 1 && e > 0 {
        Ok(Some(e * exponent))
    } else {
        Err(format!(
            "numeric generator `{part}` is not a power of the tower's prime {p}"
        ))
    }
}

/// A polynomial in T (and S), nonnegative powers, integer coefficients:
/// sums of `coeff*VAR^k` terms.
fn parse_shifted_poly(s: &str, rank: usize) -> std::result::Result<LaurentPoly, String> {
    let mut out = LaurentPoly::zero(rank);
    let mut term = String::new();
    let mut terms: Vec<String> = Vec::new();
    let mut prev = None::<char>;
    for (i, c) in s.chars().enumerate() {
        // +/- separate terms unless they sit inside a power like T^-1
        // (kept together so the power check can reject it by name).
        let separates = (c == '+' || c == '-') && i > 0 && prev != Some('^');
        if separates {
            terms.push(std::mem::take(&mut term));
        }
        if !(separates && c == '+') {
            term.push(c);
        }
        prev = Some(c);
    }
    terms.push(term);
    for t in terms {
        out = out.add(&parse_term(&t, rank)?);
    }
    Ok(out)
}

fn parse_term(t: &str, rank: usize) -> std::result::Result<LaurentPoly, String> {
    let mut coeff: i64 = 1;
    let mut exponents = vec![0i64; rank];
    let body = match t.strip_prefix('-') {
        Some(rest) => {
            coeff = -1;
            rest
        }
        None => t,
    };
    if body.is_empty() {
        return Err("dangling sign in ideal polynomial".into());
    }
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err(format!("empty factor in term `{t}`"));
        }
        if factor.chars().all(|c| c.is_ascii_digit()) {
            let value: i64 = factor
                .parse()
                .map_err(|_| format!("bad integer `{factor}`"))?;
            coeff = coeff
                .checked_mul(value)
                .ok_or_else(|| format!("coefficient overflow in `{t}`"))?;
            continue;
        }
        let (var, power) = match factor.split_once('^') {
            Some((v, e)) => (
                v,
                e.parse::<i64>().map_err(|_| format!("bad power `{e}`"))?,
            ),
            None => (factor, 1),
        };
        if power < 0 {
            return Err(format!("negative power in `{factor}`"));
        }
        let index = match var {
            "T" | "t" => 0usize,
            "S" | "s" => 1,
            _ => return Err(format!("unknown variable `{var}` (use T and S)")),
        };
        if index >= rank {
            return Err(format!(
                "variable `{var}` needs a rank-{} tower but this one has rank {rank}",
                index + 1
            ));
        }
        exponents[index] += power;
    }
    Ok(LaurentPoly::monomial(rank, &exponents, coeff))
}
