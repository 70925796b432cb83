//! `hrk`: command-line access to the hrk-core computations.
//!
//! Exit code 1 means a negative verdict: a ruled-out shape, or a failed
//! nilpotence or regularity check. Usage errors exit with 2 and resource
//! limits with 3.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hrk_core::cyclic2::{burnside_orbit_count, orbit_decompose, CyclicGroup};
use hrk_core::f2poly::{
    bundled_relation_file, c4_mod2_presentation, is_nilpotent_witness, quotient_dim, steenrod_conjugates,
    verify_regularity, Limits, PolyError, RelationFile,
};
use hrk_core::hilbert::{
    dimension, dimension_dense, gaussian_binomial, gaussian_product, poincare_factorization, poincare_series,
    HeightContext, HilbertError,
};
use hrk_core::koszul::{associated_graded, render_table, LayerTable};
use hrk_core::kzero::{
    derive_height_drop_for, height_drop_degree, normalize, quotient_relation, raw_suspension_sum,
    suspend_fixed_points, K0Atom, K0Relation,
};
use hrk_core::moore::{chi_bp, chi_eo, moore_gate, MooreShape, Status};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "hrk", version, about = "Exact algebra for C_{2^n}-equivariant quotients")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
struct GroupHeight {
    /// Group, written C2, C4, C8, ...
    #[arg(long)]
    group: String,
    #[arg(long)]
    m: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DimRoute {
    Cyclotomic,
    Dense,
    Gaussian,
    All,
}

#[derive(Subcommand)]
enum Verb {
    /// F_2-dimension of the height-h quotient ring.
    Dim {
        #[command(flatten)]
        gh: GroupHeight,
        #[arg(long, value_enum, default_value_t = DimRoute::Cyclotomic)]
        route: DimRoute,
    },
    /// Poincaré series of the quotient ring, in halved degrees.
    Series {
        #[command(flatten)]
        gh: GroupHeight,
        /// Print the cyclotomic factorization instead of dense coefficients.
        #[arg(long)]
        factored: bool,
    },
    /// Gaussian binomial (N choose M) at q = 2.
    Binom {
        #[arg(long)]
        top: u64,
        #[arg(long)]
        bottom: u64,
    },
    /// Associated graded of the filtration of M along x, |x| = kdeg·ρ_2.
    Filtration {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 1)]
        kdeg: u64,
        /// One row per summand with its parameters.
        #[arg(long)]
        detail: bool,
    },
    /// Orbits of markings.
    Orbits {
        #[arg(long)]
        group: String,
    },
    /// K_0 relations.
    K0 {
        #[command(subcommand)]
        action: K0Action,
    },
    /// Euler characteristic gate for a generalized Moore spectrum.
    Moore {
        /// Exponents i_0,i_1,...,i_h.
        #[arg(long)]
        exponents: String,
        /// Also report chi against the fixed points for this group (needs --m).
        #[arg(long, requires = "m")]
        group: Option<String>,
        #[arg(long, requires = "group")]
        m: Option<u32>,
    },
    /// Radical membership of elements in the quotient ideal.
    Nilpotence {
        #[command(flatten)]
        gh: GroupHeight,
        /// Polynomial to test, e.g. "t_1^2 + t_2"; defaults to every generator.
        #[arg(long)]
        element: Vec<String>,
        #[arg(long)]
        relations: Option<PathBuf>,
    },
    /// Regularity of (v_1, ..., v_h) by the dimension count.
    Regularity {
        #[command(flatten)]
        gh: GroupHeight,
        #[arg(long)]
        relations: Option<PathBuf>,
    },
    /// Conjugates ζ_k in the dual Steenrod algebra and the C4 quotient.
    Steenrod {
        #[arg(long)]
        m: u32,
    },
}

#[derive(Subcommand)]
enum K0Action {
    /// 2[M^G] = [M^G'] + ... from the filtration.
    Relation {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 1)]
        kdeg: u64,
        /// Print the derivation step by step.
        #[arg(long)]
        proof: bool,
    },
    /// [(Σ^{mρ_G} X)^G] by cells and in closed form.
    Suspension {
        #[arg(long)]
        group: String,
        #[arg(long)]
        m: u64,
    },
    /// |H|[M^H] ≡ [M^e] modulo torsion.
    HeightDrop {
        #[command(flatten)]
        gh: GroupHeight,
    },
}

enum Failure {
    Usage(String),
    Resource(String),
    Other(String),
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::ResourceLimit { .. } => Failure::Resource(e.to_string()),
            PolyError::RelationFile(_) | PolyError::ContextMismatch { .. } | PolyError::Parse(_) | PolyError::UnknownGenerator(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Other(other.to_string()),
        }
    }
}

impl From<HilbertError> for Failure {
    fn from(e: HilbertError) -> Self {
        match e {
            HilbertError::ResourceLimit { .. } | HilbertError::HeightTooLarge { .. } => Failure::Resource(e.to_string()),
            HilbertError::BadGroup(_) => Failure::Usage(e.to_string()),
            other => Failure::Other(other.to_string()),
        }
    }
}

/// A rendered report: the json value, its table rendering, and whether the
/// verdict was negative.
struct Report {
    json: Value,
    table: String,
    negative: bool,
}

impl Report {
    fn new(json: Value, table: String) -> Self {
        Report { json, table, negative: false }
    }
}

fn parse_group(name: &str) -> Result<CyclicGroup, Failure> {
    CyclicGroup::parse(name).map_err(|e| Failure::Usage(e.to_string()))
}

fn height_context(gh: &GroupHeight) -> Result<HeightContext, Failure> {
    let g = parse_group(&gh.group)?;
    HeightContext::new(g.exponent(), gh.m).map_err(Failure::from)
}

fn relations_for(ctx: &HeightContext, path: &Option<PathBuf>) -> Result<(RelationFile, String), Failure> {
    match path {
        Some(p) => Ok((RelationFile::load(p)?, p.display().to_string())),
        None => bundled_relation_file(ctx.n, ctx.m)
            .map(|f| (f, "bundled".to_string()))
            .ok_or_else(|| {
                Failure::Usage(format!(
                    "no bundled relation file for n={}, m={}; pass --relations <path>",
                    ctx.n, ctx.m
                ))
            }),
    }
}

fn layer_rows(table: &LayerTable) -> String {
    let mut out = String::from("grading\tsummands\n");
    for (g, row) in table {
        let parts: Vec<String> = row.iter().map(|s| s.to_string()).collect();
        out.push_str(&format!("{g}\t{}\n", parts.join(" ⊕ ")));
    }
    out
}

fn relation_json(r: &K0Relation) -> Result<Value, Failure> {
    let mut v = serde_json::to_value(r).map_err(|e| Failure::Other(e.to_string()))?;
    v["text"] = json!(r.to_string());
    Ok(v)
}

fn run(verb: &Verb) -> Result<Report, Failure> {
    let limits = Limits::default();
    match verb {
        Verb::Dim { gh, route } => {
            let ctx = height_context(gh)?;
            let mut routes = serde_json::Map::new();
            if matches!(route, DimRoute::Cyclotomic | DimRoute::All) {
                routes.insert("cyclotomic".into(), json!(dimension(&ctx)?.to_string()));
            }
            if matches!(route, DimRoute::Gaussian | DimRoute::All) {
                routes.insert("gaussian".into(), json!(gaussian_product(&ctx).to_string()));
            }
            if matches!(route, DimRoute::Dense | DimRoute::All) {
                routes.insert("dense".into(), json!(dimension_dense(&ctx)?.to_string()));
            }
            let values: Vec<&Value> = routes.values().collect();
            if values.windows(2).any(|w| w[0] != w[1]) {
                return Err(Failure::Other(format!("routes disagree: {routes:?}")));
            }
            let value = values[0].as_str().unwrap().to_string();
            let table = if routes.len() == 1 {
                format!("{value}\n")
            } else {
                routes.iter().map(|(k, v)| format!("{k}\t{}\n", v.as_str().unwrap())).collect()
            };
            Ok(Report::new(
                json!({"n": ctx.n, "m": ctx.m, "h": ctx.h, "dimension": value, "routes": routes}),
                table,
            ))
        }
        Verb::Series { gh, factored } => {
            let ctx = height_context(gh)?;
            if *factored {
                let f = poincare_factorization(&ctx)?;
                let factors: Vec<String> = f
                    .exponents
                    .iter()
                    .map(|(d, e)| if *e == 1 { format!("Φ_{d}") } else { format!("Φ_{d}^{e}") })
                    .collect();
                let exps: serde_json::Map<String, Value> =
                    f.exponents.iter().map(|(d, e)| (d.to_string(), json!(e))).collect();
                let text = if factors.is_empty() { "1".to_string() } else { factors.join(" ") };
                Ok(Report::new(
                    json!({"n": ctx.n, "m": ctx.m, "degree": f.degree(), "value_at_one": f.value_at_one().to_string(), "cyclotomic_exponents": exps}),
                    format!("{text}\n"),
                ))
            } else {
                let s = poincare_series(&ctx)?;
                let coeffs: Vec<String> = s.coefficients().iter().map(|c| c.to_string()).collect();
                Ok(Report::new(
                    json!({"n": ctx.n, "m": ctx.m, "degree": s.degree(), "coefficients": coeffs}),
                    format!("{s}\n"),
                ))
            }
        }
        Verb::Binom { top, bottom } => {
            if bottom > top {
                return Err(Failure::Usage("need bottom <= top".into()));
            }
            let g = gaussian_binomial(*top, *bottom);
            Ok(Report::new(
                json!({"top": top, "bottom": bottom, "value": g.to_string()}),
                format!("{g}\n"),
            ))
        }
        Verb::Filtration { group, kdeg, detail } => {
            let g = parse_group(group)?;
            if *kdeg == 0 {
                return Err(Failure::Usage("--kdeg must be positive".into()));
            }
            let t = associated_graded(g, *kdeg).map_err(|e| Failure::Usage(e.to_string()))?;
            let rows: Vec<Value> = t
                .values()
                .flatten()
                .map(|s| {
                    json!({
                        "grading": s.grading,
                        "induced_from": s.induced_from_exponent,
                        "suspension": s.suspension.map(|x| json!({"multiplier": x.multiplier, "rep_subgroup_exponent": x.rep_subgroup_exponent})),
                        "quotient_vars": s.quotient.vars.iter().map(|v| json!({"acting_subgroup_exponent": v.acting_subgroup_exponent, "offsets": v.conjugate_offsets})).collect::<Vec<_>>(),
                        "n_f": s.n_f,
                        "orbit_size": s.orbit_size,
                        "text": s.to_string(),
                    })
                })
                .collect();
            let table = if *detail { render_table(&t) } else { layer_rows(&t) };
            Ok(Report::new(
                json!({"group": g.to_string(), "kdeg": kdeg, "gradings": t.len(), "summands": rows}),
                table,
            ))
        }
        Verb::Orbits { group } => {
            let g = parse_group(group)?;
            let orbits = orbit_decompose(g).map_err(|e| Failure::Resource(e.to_string()))?;
            let burnside = burnside_orbit_count(g).map_err(|e| Failure::Resource(e.to_string()))?;
            let mut table = String::from("representative\tstabilizer\torbit_size\tn_f\tgrading\n");
            let rows: Vec<Value> = orbits
                .iter()
                .map(|o| {
                    table.push_str(&format!(
                        "{}\tC{}\t{}\t{}\t{}\n",
                        o.representative,
                        o.stabilizer_order(),
                        o.orbit_size,
                        o.n_f,
                        o.grading
                    ));
                    json!({
                        "representative": o.representative.to_string(),
                        "stabilizer_exponent": o.stabilizer_exponent,
                        "orbit_size": o.orbit_size,
                        "n_f": o.n_f,
                        "grading": o.grading,
                    })
                })
                .collect();
            table.push_str(&format!("orbits: {} (Burnside: {burnside})\n", orbits.len()));
            Ok(Report::new(
                json!({"group": g.to_string(), "count": orbits.len(), "burnside": burnside, "orbits": rows}),
                table,
            ))
        }
        Verb::K0 { action } => run_k0(action),
        Verb::Moore { exponents, group, m } => {
            let shape = MooreShape::parse(exponents).map_err(Failure::Usage)?;
            let verdict = moore_gate(&shape).map_err(|e| Failure::Usage(e.to_string()))?;
            let mut out = json!({
                "verdict": serde_json::to_value(&verdict).map_err(|e| Failure::Other(e.to_string()))?,
                "chi_bp": chi_bp(&shape).to_string(),
            });
            let mut table = format!("{verdict}\nchi_bp = {}\n", chi_bp(&shape));
            if let (Some(group), Some(m)) = (group, m) {
                let ctx = height_context(&GroupHeight { group: group.clone(), m: *m })?;
                let eo = chi_eo(&ctx, &shape).map_err(|e| Failure::Usage(e.to_string()))?;
                out["chi_eo"] = json!(eo.to_string());
                table.push_str(&format!("chi_eo = {eo}\n"));
            }
            Ok(Report {
                json: out,
                table,
                negative: verdict.status == Status::RuledOut,
            })
        }
        Verb::Nilpotence { gh, element, relations } => {
            let ctx = height_context(gh)?;
            let (file, source) = relations_for(&ctx, relations)?;
            let ideal = file.ideal()?;
            let ring = &ideal.ring;
            let elements: Vec<String> = if element.is_empty() {
                ring.table.names.clone()
            } else {
                element.clone()
            };
            let mut rows = Vec::new();
            let mut table = String::from("element\tnilpotent\twitness\n");
            let mut all = true;
            for text in &elements {
                let p = ring.parse(text)?;
                let w = is_nilpotent_witness(&p, &ideal, &limits)?;
                all &= w.is_nilpotent();
                let witness = serde_json::to_value(w).map_err(|e| Failure::Other(e.to_string()))?;
                table.push_str(&format!("{text}\t{}\t{}\n", w.is_nilpotent(), witness));
                rows.push(json!({"element": text, "nilpotent": w.is_nilpotent(), "witness": witness}));
            }
            Ok(Report {
                json: json!({"n": ctx.n, "m": ctx.m, "relations": source, "results": rows}),
                table,
                negative: !all,
            })
        }
        Verb::Regularity { gh, relations } => {
            let ctx = height_context(gh)?;
            let (file, source) = relations_for(&ctx, relations)?;
            let report = verify_regularity(&ctx, &file, &limits)?;
            let dim = report
                .quotient_dim
                .finite()
                .map_or("infinite".to_string(), |d| d.to_string());
            let mut table = format!(
                "regular\t{}\nh\t{}\nsequence_length\t{}\ngenerators\t{}\nquotient_dim\t{dim}\n",
                report.regular, report.height, report.sequence_length, report.generator_count
            );
            if let Some(m) = &report.mismatch {
                table.push_str(&format!("mismatch\t{m}\n"));
            }
            let mut v = serde_json::to_value(&report).map_err(|e| Failure::Other(e.to_string()))?;
            v["relations"] = json!(source);
            Ok(Report {
                json: v,
                table,
                negative: !report.regular,
            })
        }
        Verb::Steenrod { m } => {
            if *m == 0 {
                return Err(Failure::Usage("--m must be positive".into()));
            }
            let (ring, zeta) = steenrod_conjugates(*m);
            let dim = quotient_dim(&c4_mod2_presentation(*m), &limits)?;
            let mut table = String::new();
            let mut rows = Vec::new();
            for (k, z) in zeta.iter().enumerate() {
                let text = ring.render(z);
                table.push_str(&format!("zeta_{}\t{text}\n", k + 1));
                rows.push(json!({"index": k + 1, "polynomial": text}));
            }
            let dim_text = dim.finite().map_or("infinite".to_string(), |d| d.to_string());
            table.push_str(&format!("quotient_dim\t{dim_text}\n"));
            Ok(Report::new(
                json!({"m": m, "conjugates": rows, "quotient_dim": dim}),
                table,
            ))
        }
    }
}

fn run_k0(action: &K0Action) -> Result<Report, Failure> {
    match action {
        K0Action::Relation { group, kdeg, proof } => {
            let g = parse_group(group)?;
            if g.exponent() == 0 {
                return Err(Failure::Usage("the group must be nontrivial".into()));
            }
            let r = quotient_relation(g.exponent(), *kdeg).map_err(|e| Failure::Usage(e.to_string()))?;
            let table = if *proof { r.proof() } else { format!("{r}\n") };
            Ok(Report::new(relation_json(&r)?, table))
        }
        K0Action::Suspension { group, m } => {
            let g = parse_group(group)?;
            if *m == 0 {
                return Err(Failure::Usage("--m must be positive".into()));
            }
            let n = g.exponent();
            let raw = raw_suspension_sum("X", n, *m);
            let atom = K0Atom::plain("X", n).suspended(*m, n);
            let closed = suspend_fixed_points(&atom).map_err(|e| Failure::Other(e.to_string()))?;
            let normalized = normalize(&raw);
            let agree = normalized == normalize(&closed);
            Ok(Report::new(
                json!({
                    "atom": atom.to_string(),
                    "raw": raw,
                    "raw_normalized": normalized,
                    "closed_form": closed,
                    "agree": agree,
                }),
                format!("{atom}\nraw:        {raw}\nnormalized: {normalized}\nclosed:     {closed}\n"),
            ))
        }
        K0Action::HeightDrop { gh } => {
            let g = parse_group(&gh.group)?;
            let k_deg = if g.exponent() == 0 {
                1
            } else {
                height_drop_degree(&HeightContext::new(g.exponent(), gh.m)?)
            };
            let d = derive_height_drop_for(g.exponent(), k_deg).map_err(|e| Failure::Other(e.to_string()))?;
            let mut table = String::new();
            for r in d.steps.iter().chain(&d.composed) {
                table.push_str(&format!("{r}\n"));
            }
            let steps = d.steps.iter().map(relation_json).collect::<Result<Vec<_>, _>>()?;
            let composed = d.composed.iter().map(relation_json).collect::<Result<Vec<_>, _>>()?;
            Ok(Report::new(json!({"n": g.exponent(), "m": gh.m, "steps": steps, "composed": composed}), table))
        }
    }
}

fn verb_name(verb: &Verb) -> &'static str {
    match verb {
        Verb::Dim { .. } => "dim",
        Verb::Series { .. } => "series",
        Verb::Binom { .. } => "binom",
        Verb::Filtration { .. } => "filtration",
        Verb::Orbits { .. } => "orbits",
        Verb::K0 { .. } => "k0",
        Verb::Moore { .. } => "moore",
        Verb::Nilpotence { .. } => "nilpotence",
        Verb::Regularity { .. } => "regularity",
        Verb::Steenrod { .. } => "steenrod",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let verb = verb_name(&cli.verb);
    match run(&cli.verb) {
        Ok(report) => {
            let text = match cli.format {
                Format::Table => report.table,
                Format::Json => {
                    let doc = json!({"schema_version": SCHEMA_VERSION, "verb": verb, "result": report.json});
                    serde_json::to_string_pretty(&doc).expect("json renders") + "\n"
                }
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(if report.negative { 1 } else { 0 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nSee `hrk {verb} --help`.");
            ExitCode::from(2)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("resource limit: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
