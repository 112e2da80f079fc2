use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use stratakit_core::canon::{automorphisms_with_budget, is_isomorphic, DEFAULT_SEARCH_BUDGET};
use stratakit_core::category::{Report, DEFAULT_LIMIT_BUDGET, DEFAULT_MORPHISM_BUDGET};
use stratakit_core::charney_lee::{cl_category, comma_equivalence_check, object_automorphisms, orbit_embedding_check, ClInstance};
use stratakit_core::enumerate::{build_poset, enumerate_with_budget, StratumTable, DEFAULT_FORM_BUDGET};
use stratakit_core::formats::{parse_cl_instance, parse_graph, parse_poset};
use stratakit_core::graph::{DualGraph, EdgeSet};
use stratakit_core::homology::{order_complex_homology_with_budget, HomologyResult, DEFAULT_CHAIN_BUDGET};
use stratakit_core::twisted::{
    classes_below, comparison_check, decomposition_report, fibre_certificate, limit_decomposition_check, members, seeded_functors,
    tw_alternative, tw_standard, CertificateOutcome, TwCategory, TwFilter,
};

use crate::error::{CliError, Kind};
use crate::{ClcatAction, Cli, CliResult, Command, Format, StratumType, TwAction};

pub const BUDGET_VAR: &str = "STRATAKIT_BUDGET";

#[derive(Debug, Clone, Copy)]
struct Budgets {
    forms: usize,
    morphisms: usize,
    limit: u64,
    chains: usize,
    search: u64,
}

impl Budgets {
    fn resolve(flag: Option<u64>) -> CliResult<Budgets> {
        let value = match flag {
            Some(v) => Some(v),
            None => match std::env::var(BUDGET_VAR) {
                Ok(s) => {
                    Some(s.trim().parse::<u64>().map_err(|_| CliError::invalid(format!("{BUDGET_VAR}={s:?} is not a positive integer")))?)
                }
                Err(_) => None,
            },
        };
        match value {
            Some(0) => Err(CliError::invalid("budget must be positive")),
            Some(n) => {
                let small = usize::try_from(n).unwrap_or(usize::MAX);
                Ok(Budgets { forms: small, morphisms: small, limit: n, chains: small, search: n })
            }
            None => Ok(Budgets {
                forms: DEFAULT_FORM_BUDGET,
                morphisms: DEFAULT_MORPHISM_BUDGET,
                limit: DEFAULT_LIMIT_BUDGET,
                chains: DEFAULT_CHAIN_BUDGET,
                search: DEFAULT_SEARCH_BUDGET,
            }),
        }
    }
}

/// Text to emit and whether every reported check passed.
struct Output {
    text: String,
    passed: bool,
}

impl Output {
    fn json(value: &Value, passed: bool) -> Output {
        let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
        text.push('\n');
        Output { text, passed }
    }
}

pub fn run(cli: Cli) -> CliResult<u8> {
    let budgets = Budgets::resolve(cli.budget)?;
    let out = match cli.command {
        Command::Enum { ty, format, hasse } => enum_cmd(&ty, format, hasse, budgets)?,
        Command::Poset { ty, homology, max_dim } => poset_cmd(&ty, homology, max_dim, budgets)?,
        Command::Contract { input, edges } => contract_cmd(&input, &edges)?,
        Command::Clutch { input, parts } => clutch_cmd(&input, &parts)?,
        Command::Aut { input } => aut_cmd(&input, budgets)?,
        Command::Iso { first, second } => iso_cmd(&first, &second)?,
        Command::Clcat { action: ClcatAction::Build { spec, report } } => clcat_cmd(&spec, report, budgets)?,
        Command::Tw { action: TwAction::Report { spec, theta, certificates, limits, functors } } => {
            tw_cmd(&spec, &theta, certificates, limits, functors, budgets)?
        }
        Command::Homology { input, max_dim } => {
            let p = parse_poset(&read(&input)?)?;
            let h = order_complex_homology_with_budget(&p, max_dim, budgets.chains)?;
            Output::json(&homology_json(&h), true)
        }
    };
    match cli.out {
        Some(path) => fs::write(&path, &out.text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?,
        None => print!("{}", out.text),
    }
    Ok(if out.passed { 0 } else { 1 })
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> CliResult<DualGraph> {
    parse_graph(&read(path)?).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn table(ty: &StratumType, budgets: Budgets) -> CliResult<StratumTable> {
    Ok(enumerate_with_budget(ty.genus, &ty.legs, budgets.forms)?)
}

fn enum_cmd(ty: &StratumType, format: Format, hasse: bool, budgets: Budgets) -> CliResult<Output> {
    let t = table(ty, budgets)?;
    let p = build_poset(&t)?;
    let covers = p.covers();
    if format == Format::Dot {
        let mut dot = String::from("digraph strata {\n  rankdir=BT;\n");
        for (i, c) in t.classes.iter().enumerate() {
            let _ = writeln!(dot, "  {i} [label=\"{i} ({} edges)\"];", c.edge_count);
        }
        for (a, b) in &covers {
            let _ = writeln!(dot, "  {a} -> {b};");
        }
        dot.push_str("}\n");
        return Ok(Output { text: dot, passed: true });
    }
    let classes: Vec<Value> =
        t.classes.iter().enumerate().map(|(i, c)| json!({"id": i, "edge_count": c.edge_count, "graph": c.graph})).collect();
    let relation: Vec<[usize; 2]> =
        (0..p.len()).flat_map(|a| (0..p.len()).filter(move |&b| a != b).map(move |b| [a, b])).filter(|&[a, b]| p.leq(a, b)).collect();
    let mut value = json!({"genus": t.genus, "legs": t.labels, "classes": classes, "relation": relation});
    if hasse {
        value["hasse"] = json!(covers.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>());
    }
    Ok(Output::json(&value, true))
}

fn homology_json(h: &HomologyResult) -> Value {
    let torsion: Vec<Vec<String>> = h.torsion.iter().map(|t| t.iter().map(|x| x.to_string()).collect()).collect();
    json!({
        "reduced_betti": h.reduced_betti,
        "torsion": torsion,
        "simplex_counts": h.simplex_counts,
        "truncated": h.truncated,
    })
}

fn poset_cmd(ty: &StratumType, homology: bool, max_dim: usize, budgets: Budgets) -> CliResult<Output> {
    let p = build_poset(&table(ty, budgets)?)?;
    let poset = serde_json::to_value(&p).expect("posets serialize");
    if !homology {
        return Ok(Output::json(&poset, true));
    }
    let h = order_complex_homology_with_budget(&p, max_dim, budgets.chains)?;
    Ok(Output::json(&json!({"poset": poset, "homology": homology_json(&h)}), true))
}

fn contract_cmd(input: &Path, edges: &str) -> CliResult<Output> {
    let g = read_graph(input)?;
    let selected: Vec<usize> = match edges.trim() {
        "all" => g.edges().into_iter().map(|(a, _)| a).collect(),
        "none" | "" => Vec::new(),
        "loop" | "loops" => g.edges().into_iter().filter(|&(a, b)| g.owner(a) == g.owner(b)).map(|(a, _)| a).collect(),
        list => list
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| CliError::invalid(format!("--edges: {s:?} is not a half-edge id"))))
            .collect::<CliResult<_>>()?,
    };
    let set = EdgeSet::closure(&g, selected)?;
    let c = g.contract(&set)?;
    Ok(Output::json(&serde_json::to_value(&c.graph).expect("graphs serialize"), true))
}

fn clutch_cmd(input: &Path, parts: &[std::path::PathBuf]) -> CliResult<Output> {
    let g = read_graph(input)?;
    let parts: Vec<DualGraph> = parts.iter().map(|p| read_graph(p)).collect::<CliResult<_>>()?;
    let c = g.clutch(&parts)?;
    Ok(Output::json(&serde_json::to_value(&c.graph).expect("graphs serialize"), true))
}

fn aut_cmd(input: &Path, budgets: Budgets) -> CliResult<Output> {
    let g = read_graph(input)?;
    let aut = automorphisms_with_budget(&g, budgets.search)?;
    let order =
        u64::try_from(aut.order).map_err(|_| CliError { kind: Kind::Budget, message: "automorphism group order overflows".into() })?;
    let value = json!({
        "order": order,
        "generators": aut.group.generators(),
        "vertex_automorphisms": aut.vertex_automorphisms,
    });
    Ok(Output::json(&value, true))
}

fn iso_cmd(first: &Path, second: &Path) -> CliResult<Output> {
    let (a, b) = (read_graph(first)?, read_graph(second)?);
    let value = match is_isomorphic(&a, &b)? {
        Some(iso) => json!({"isomorphic": true, "half_edge_map": iso.half_edge_map, "vertex_map": iso.vertex_map}),
        None => json!({"isomorphic": false}),
    };
    Ok(Output::json(&value, true))
}

fn read_instance(spec: &Path) -> CliResult<ClInstance> {
    parse_cl_instance(&read(spec)?).map_err(|e| {
        let kind = CliError::from(e.clone()).kind;
        CliError { kind, message: format!("{}: {e}", spec.display()) }
    })
}

fn clcat_cmd(spec: &Path, report: bool, budgets: Budgets) -> CliResult<Output> {
    let inst = read_instance(spec)?;
    let cl = cl_category(&inst, budgets.morphisms)?;
    let c = &cl.category;
    let group = &inst.action.group;
    let morphisms: Vec<Value> =
        c.morphisms().iter().enumerate().map(|(f, m)| json!({"src": m.src, "tgt": m.tgt, "rep": group.element(cl.reps[f])})).collect();
    let mut value = json!({
        "objects": c.objects(),
        "group_order": inst.group_order(),
        "delta_orders": (0..inst.poset().len()).map(|s| inst.delta(s).len()).collect::<Vec<_>>(),
        "morphisms": morphisms,
    });
    let mut passed = true;
    if report {
        let mut checks = vec![orbit_embedding_check(&inst, &cl)];
        for s in 0..inst.poset().len() {
            checks.push(object_automorphisms(&inst, &cl, s).report);
            checks.push(comma_equivalence_check(&inst, &cl, s, budgets.morphisms));
        }
        passed = checks.iter().all(|r| r.passed);
        value["report"] = json!(checks);
    }
    Ok(Output::json(&value, passed))
}

fn object_name(tw: &TwCategory, x: usize) -> &str {
    &tw.category().objects()[x]
}

fn certificates_json(inst: &ClInstance, tw: &TwCategory, theta: usize, budgets: Budgets) -> CliResult<(Vec<Value>, bool)> {
    let names = inst.poset().elements();
    let mut out = Vec::new();
    let mut passed = true;
    for nu in classes_below(inst, theta) {
        for x in members(inst, tw, TwFilter::LeqClass { theta, nu })? {
            let mut entry = json!({"nu": names[nu], "object": object_name(tw, x)});
            match fibre_certificate(inst, tw, theta, nu, x, budgets.morphisms)? {
                CertificateOutcome::Certified(c) => {
                    let valid = c.validate();
                    passed &= valid.is_ok();
                    entry["status"] = json!(if valid.is_ok() { "certified" } else { "invalid" });
                    if let Err(e) = valid {
                        entry["witness"] = json!(e);
                    }
                    let terminals: Vec<Value> =
                        c.intersection_terminals.iter().map(|(k, t)| json!({"members": k, "terminal": t})).collect();
                    entry["certificate"] = json!({
                        "fibre_objects": c.fibre_objects.iter().map(|&o| object_name(tw, o)).collect::<Vec<_>>(),
                        "cover_points": c.cover_points.iter().map(|&q| &names[q]).collect::<Vec<_>>(),
                        "cover": c.cover,
                        "intersection_terminals": terminals,
                        "initial_intersection": c.intersection_poset_initial,
                    });
                }
                CertificateOutcome::Failed(f) => {
                    passed = false;
                    entry["status"] = json!("failed");
                    entry["obstruction"] = json!(f.obstruction);
                    if let Some(h) = f.heuristic {
                        entry["heuristic"] = json!({"label": h.label, "classes": h.classes, "homology": homology_json(&h.homology)});
                    }
                }
            }
            out.push(entry);
        }
    }
    Ok((out, passed))
}

fn tw_cmd(spec: &Path, theta: &str, certificates: bool, limits: Option<u64>, functors: usize, budgets: Budgets) -> CliResult<Output> {
    let inst = read_instance(spec)?;
    let theta_id = inst.poset().index_of(theta).map_err(|e| CliError::invalid(format!("--theta: {e}")))?;
    let cl = cl_category(&inst, budgets.morphisms)?;
    let tw = tw_alternative(&inst, budgets.morphisms)?;
    let std = tw_standard(&cl.category, budgets.morphisms)?;
    let mut checks: Vec<Report> = vec![comparison_check(&inst, &cl, &tw, &std)];
    checks.extend(decomposition_report(&inst, &tw, theta_id, budgets.morphisms)?.checks);
    let mut passed = checks.iter().all(|r| r.passed);
    let objects: BTreeSet<&str> = members(&inst, &tw, TwFilter::Theta(theta_id))?.into_iter().map(|x| object_name(&tw, x)).collect();
    let mut value = json!({"theta": theta, "objects": objects, "checks": checks});
    if certificates {
        let (entries, ok) = certificates_json(&inst, &tw, theta_id, budgets)?;
        passed &= ok;
        value["certificates"] = json!(entries);
    }
    if let Some(seed) = limits {
        let mut entries = Vec::new();
        for (i, f) in seeded_functors(&inst, &tw, theta_id, seed, functors)?.iter().enumerate() {
            let r = limit_decomposition_check(&inst, &tw, theta_id, f, budgets.limit)?;
            passed &= r.passed();
            entries.push(json!({"functor": i, "sizes": f.sizes, "checks": r.checks, "cardinalities": r.cardinalities}));
        }
        value["limits"] = json!(entries);
    }
    Ok(Output::json(&value, passed))
}
