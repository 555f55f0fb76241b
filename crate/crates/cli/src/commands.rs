use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use cfsem::dist::{check_markov, counterfactual_dist_pearl, counterfactual_dist_with_cap};
use cfsem::dsep::{backdoor_criterion_with_limit, d_connecting_path, enumerate_admissible_sets_with_limit};
use cfsem::verify::{
    check_consistency_event_with_cap, check_ffrcistg_preserved_with_cap, check_ffrcistg_with_cap,
    check_lemma_equalities_with, Counterexample, LemmaClaim, TheoremBench,
};
use cfsem::{
    exact_joint_with_cap, from_json, generate_random_sem, is_d_separated, to_json, Assignment, Dag, Error, ExactSem,
    GeneratorProfile, Intervention, NodeId, NodeSet, SeparationQuery, Surgeries,
};
use serde_json::{json, Value as Json};

use crate::output::{disturbance_text, verdict, Outcome, Style};
use crate::query::{parse_counterfactual, parse_query};
use crate::{BackdoorArgs, Cli, Command, DistArgs, DsepArgs, GenerateArgs, VerifyArgs};

pub fn run(cli: &Cli) -> Result<Outcome> {
    let style = Style {
        precision: cli.precision as usize,
    };
    match &cli.command {
        Command::Dsep(args) => dsep(args, cli.path_limit),
        Command::Backdoor(args) => backdoor(args, cli.path_limit),
        Command::Verify(args) => verify(args, cli.cap, style),
        Command::Dist(args) => dist(args, cli.cap, style),
        Command::Generate(args) => generate(args),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Graph text, or the graph of a model JSON file.
fn load_graph(path: &Path) -> Result<Dag> {
    let text = read(path)?;
    let dag = if text.trim_start().starts_with('{') {
        load_model_text(&text)?.dag().clone()
    } else {
        Dag::parse_text(&text)?
    };
    Ok(dag)
}

fn load_model_text(text: &str) -> Result<ExactSem> {
    Ok(from_json(text)?)
}

fn load_model(path: &Path) -> Result<ExactSem> {
    load_model_text(&read(path)?).with_context(|| format!("invalid model file {}", path.display()))
}

fn node_set(g: &Dag, list: &str) -> Result<NodeSet> {
    Ok(g.node_set(list.split(',').map(str::trim).filter(|s| !s.is_empty()))?)
}

fn braces(g: &Dag, set: &NodeSet) -> String {
    format!("{{{}}}", g.set_labels(set).join(", "))
}

fn dsep(args: &DsepArgs, limit: usize) -> Result<Outcome> {
    let g = load_graph(&args.graph)?;
    let q = SeparationQuery::new(&g, node_set(&g, &args.x)?, node_set(&g, &args.y)?, node_set(&g, &args.z)?)?;
    let separated = is_d_separated(&g, &q);
    let (x, y, z) = (braces(&g, &q.x), braces(&g, &q.y), braces(&g, &q.z));
    let mut text = Vec::new();
    let mut witness = None;
    if separated {
        text.push(format!("d-separated: {x} and {y} given {z}"));
    } else {
        text.push(format!("d-connected: {x} and {y} given {z}"));
        match d_connecting_path(&g, &q, limit) {
            Ok(Some(p)) => {
                let shown = p.display(&g).to_string();
                text.push(format!("witness: {shown}"));
                witness = Some(shown);
            }
            Ok(None) => {}
            Err(Error::PathOverflow { limit }) => text.push(format!("witness: not listed, more than {limit} paths")),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Outcome {
        pass: separated,
        text,
        json: json!({
            "x": g.set_labels(&q.x), "y": g.set_labels(&q.y), "z": g.set_labels(&q.z),
            "separated": separated, "witness": witness,
        }),
        raw: None,
    })
}

fn backdoor(args: &BackdoorArgs, limit: usize) -> Result<Outcome> {
    let g = load_graph(&args.graph)?;
    let a_set = node_set(&g, &args.a)?;
    let y = g.node(args.y.trim())?;
    if let Some(candidates) = &args.enumerate {
        let candidates = node_set(&g, candidates)?;
        let sets = enumerate_admissible_sets_with_limit(&g, &a_set, y, &candidates, limit)?;
        let mut text = vec![format!(
            "admissible adjustment sets for {} -> {} among {}: {}",
            braces(&g, &a_set),
            g.label(y),
            braces(&g, &candidates),
            sets.len()
        )];
        text.extend(
            sets.iter()
                .map(|s| format!("  {}{}", braces(&g, &s.set), if s.minimal { " (minimal)" } else { "" })),
        );
        let listed: Vec<Json> = sets
            .iter()
            .map(|s| json!({ "set": g.set_labels(&s.set), "minimal": s.minimal }))
            .collect();
        return Ok(Outcome {
            pass: !sets.is_empty(),
            text,
            json: json!({ "treatments": g.set_labels(&a_set), "outcome": g.label(y), "admissible": listed }),
            raw: None,
        });
    }
    let l = node_set(&g, &args.l)?;
    let r = backdoor_criterion_with_limit(&g, &a_set, y, &l, limit)?;
    let holds = r.holds();
    let mut text = vec![format!(
        "back-door criterion for {} -> {} given {}: {}",
        braces(&g, &a_set),
        g.label(y),
        braces(&g, &l),
        if holds { "holds" } else { "fails" }
    )];
    let mut cond1 = format!("condition 1 (no adjustment node descends from a treatment): {}", verdict(r.no_descendants));
    if !r.no_descendants {
        cond1.push_str(&format!(", offending {}", braces(&g, &r.offending_descendants)));
    }
    text.push(cond1);
    let mut cond2 = format!(
        "condition 2 (every back-door path blocked, {} checked): {}",
        r.paths_checked,
        verdict(r.blocks_backdoor)
    );
    let witness = r.witness.as_ref().map(|w| w.path.display(&g).to_string());
    if let (Some(shown), Some(w)) = (&witness, &r.witness) {
        cond2.push_str(&format!(", witness {shown}"));
        if w.through_treatment {
            cond2.push_str(" (passes through another treatment)");
        }
    }
    text.push(cond2);
    Ok(Outcome {
        pass: holds,
        text,
        json: json!({
            "treatments": g.set_labels(&a_set), "outcome": g.label(y), "adjustment": g.set_labels(&l),
            "holds": holds, "no_descendants": r.no_descendants,
            "offending_descendants": g.set_labels(&r.offending_descendants),
            "blocks_backdoor": r.blocks_backdoor, "paths_checked": r.paths_checked, "witness": witness,
        }),
        raw: None,
    })
}

fn claim_text(claim: LemmaClaim) -> &'static str {
    match claim {
        LemmaClaim::PearlEqualsNew => "V_a = V^a off the treatments",
        LemmaClaim::TreatmentPreserved => "A^a = A",
        LemmaClaim::NonDescendantFixed => "non-descendants unchanged",
    }
}

fn counterexample_text(m: &ExactSem, c: &Counterexample) -> String {
    let value = |x: usize| m.domains()[c.node][x].to_string();
    format!(
        "{} violated at {} on {}: factual {}, pearl {}, new {}",
        claim_text(c.claim),
        disturbance_text(m, &c.u),
        m.dag().label(c.node),
        value(c.factual),
        value(c.pearl),
        value(c.new)
    )
}

fn verify(args: &VerifyArgs, cap: u64, style: Style) -> Result<Outcome> {
    let m = load_model(&args.model)?;
    let g = m.dag();
    let iv = Intervention::parse(&m, &args.intervention)?;
    let a_set = iv.treatments();
    if a_set.is_empty() {
        bail!("the intervention must fix at least one node");
    }
    let y = match &args.y {
        Some(label) => g.node(label.trim())?,
        None => g
            .nodes()
            .filter(|&v| !a_set.contains(v))
            .last()
            .ok_or_else(|| anyhow!("every node is intervened on; pass --y"))?,
    };
    if a_set.contains(y) {
        bail!("outcome `{}` is a treatment", g.label(y));
    }
    let suffix = iv.display(&m).replace(", ", ",");
    let outcome_label = format!("{}^{{{suffix}}}", g.label(y));
    let mut pass = true;
    let mut text = vec![format!(
        "model {} ({} nodes, {}), intervention {}",
        args.model.display(),
        m.len(),
        m.mode().as_str(),
        iv.display(&m)
    )];
    let mut report = serde_json::Map::new();
    report.insert("intervention".into(), json!(iv.display(&m)));

    let cf = counterfactual_dist_with_cap(&m, &iv, &NodeSet::singleton(y), cap)?;
    text.push(format!("counterfactual law of {outcome_label}:"));
    let mut cf_rows = Vec::new();
    for (k, value) in m.domains()[y].iter().enumerate() {
        let p = cf.get(&[k]);
        text.push(format!("  P({outcome_label}={value}) = {}", style.prob(p)));
        cf_rows.push(json!({ "value": value.to_string(), "p": style.prob_json(p) }));
    }
    report.insert("counterfactual".into(), json!({ "variable": outcome_label, "rows": cf_rows }));

    let surgeries = Surgeries::build(&m, &iv)?;
    let lemmas = check_lemma_equalities_with(&m, &surgeries, cap)?;
    pass &= lemmas.passes();
    text.push(format!(
        "pointwise equalities over {} disturbance tuples: {}",
        lemmas.tuples_checked,
        verdict(lemmas.passes())
    ));
    if !lemmas.nested_treatments.is_empty() {
        text.push(format!(
            "  A^a = A not required for {} (descends from another treatment)",
            braces(g, &lemmas.nested_treatments)
        ));
    }
    let found: Vec<&Counterexample> = [
        &lemmas.pearl_equals_new,
        &lemmas.treatment_preserved,
        &lemmas.non_descendants_fixed,
    ]
    .into_iter()
    .flatten()
    .collect();
    for c in &found {
        text.push(format!("  {}", counterexample_text(&m, c)));
    }
    report.insert(
        "pointwise".into(),
        json!({
            "pass": lemmas.passes(), "tuples": lemmas.tuples_checked.to_string(),
            "counterexamples": found.iter().map(|c| json!({
                "claim": claim_text(c.claim), "u": c.u, "node": g.label(c.node),
            })).collect::<Vec<_>>(),
        }),
    );

    if let Some(l) = &args.l {
        let l = node_set(g, l)?;
        let bench = TheoremBench::new(&m, &iv, cap)?;
        let r = bench.check(y, &l)?;
        let criterion = r.criterion.holds();
        let theorem_pass = criterion && r.positivity && r.ignorability && r.formula_holds();
        pass &= theorem_pass;
        text.push(format!(
            "back-door theorem for {} given {}: {}",
            g.label(y),
            braces(g, &l),
            verdict(theorem_pass)
        ));
        let mut crit = format!("  criterion: {}", if criterion { "holds" } else { "fails" });
        if !r.criterion.no_descendants {
            crit.push_str(&format!(
                ", condition 1 offending {}",
                braces(g, &r.criterion.offending_descendants)
            ));
        }
        if let Some(w) = &r.criterion.witness {
            crit.push_str(&format!(", condition 2 witness {}", w.path.display(g)));
        }
        text.push(crit);
        match &r.positivity_violation {
            None => text.push("  positivity: pass".into()),
            Some(cell) => text.push(format!("  positivity: FAIL, P({cell}) = 0")),
        }
        text.push(format!(
            "  ignorability {outcome_label} _||_ {} | {}: {}",
            braces(g, &a_set),
            braces(g, &l),
            verdict(r.ignorability)
        ));
        let mut formula_json = Json::Null;
        match &r.formula {
            None => text.push("  adjustment formula: undefined at this intervention level".into()),
            Some(f) => {
                text.push(format!("  adjustment formula vs counterfactual law: {}", verdict(f.equal)));
                let mut rows = Vec::new();
                for (k, value) in m.domains()[y].iter().enumerate() {
                    let (adj, cf) = (f.adjusted.get(&[k]), f.counterfactual.get(&[k]));
                    text.push(format!(
                        "    {}={value}: adjusted {}, counterfactual {}",
                        g.label(y),
                        style.prob(adj),
                        style.prob(cf)
                    ));
                    rows.push(json!({
                        "value": value.to_string(), "adjusted": style.prob_json(adj),
                        "counterfactual": style.prob_json(cf),
                    }));
                }
                formula_json = json!({ "equal": f.equal, "rows": rows });
            }
        }
        report.insert(
            "backdoor".into(),
            json!({
                "outcome": g.label(y), "adjustment": g.set_labels(&l), "pass": theorem_pass,
                "criterion": criterion,
                "witness": r.criterion.witness.as_ref().map(|w| w.path.display(g).to_string()),
                "positivity": r.positivity, "positivity_violation": r.positivity_violation,
                "ignorability": r.ignorability, "formula": formula_json,
            }),
        );
    }

    if args.all_lemmas {
        let w: NodeSet = g.nodes().filter(|&v| !a_set.contains(v)).collect();
        let consistency = check_consistency_event_with_cap(&m, &iv, &w, cap)?;
        pass &= consistency.holds;
        text.push(format!(
            "consistency events over W={} ({} values): {}",
            braces(g, &w),
            consistency.events_compared,
            verdict(consistency.holds)
        ));
        if let Some((values, u)) = &consistency.witness {
            let shown: Vec<String> = w
                .iter()
                .zip(values)
                .map(|(v, &x)| format!("{}={}", g.label(v), m.domains()[v][x]))
                .collect();
            text.push(format!("  events differ for {} at {}", shown.join(", "), disturbance_text(&m, u)));
        }

        let surged = &surgeries.new;
        let markov = check_markov(&exact_joint_with_cap(surged, cap)?, surged.dag())?;
        pass &= markov;
        text.push(format!(
            "new-surgery law factorizes along the graph without edges out of {}: {}",
            braces(g, &a_set),
            verdict(markov)
        ));

        let by_new = counterfactual_dist_with_cap(&m, &iv, &w, cap)?;
        let by_pearl = counterfactual_dist_pearl(&m, &iv, &w, cap)?;
        let routes = by_new.same(&by_pearl);
        pass &= routes;
        text.push(format!(
            "counterfactual law of {} identical under both surgeries: {}",
            braces(g, &w),
            verdict(routes)
        ));
        report.insert(
            "lemmas".into(),
            json!({ "consistency": consistency.holds, "markov": markov, "route_equivalence": routes }),
        );
    }

    if args.ffrcistg {
        let base = check_ffrcistg_with_cap(&m, cap)?;
        pass &= base.holds;
        text.push(format!(
            "cross-world independence ({} assignments checked): {}",
            base.assignments_checked,
            verdict(base.holds)
        ));
        if let Some(v) = &base.witness {
            text.push(format!("  structural variables dependent at {}", Assignment(v.clone()).display(&m)));
        }
        let mut preserved_json = Json::Null;
        if base.holds {
            let p = check_ffrcistg_preserved_with_cap(&m, &iv, cap)?;
            pass &= p.holds();
            text.push(format!(
                "preserved by the new surgery: {} (cross-world {}, Markov {})",
                verdict(p.holds()),
                verdict(p.surged.holds),
                verdict(p.markov)
            ));
            preserved_json = json!(p.holds());
        }
        report.insert(
            "ffrcistg".into(),
            json!({
                "holds": base.holds,
                "witness": base.witness.as_ref().map(|v| Assignment(v.clone()).display(&m)),
                "preserved": preserved_json,
            }),
        );
    }

    report.insert("pass".into(), json!(pass));
    text.push(format!("overall: {}", verdict(pass)));
    Ok(Outcome {
        pass,
        text,
        json: Json::Object(report),
        raw: None,
    })
}

fn evidence(m: &ExactSem, pairs: &[(String, String)]) -> Result<Vec<(NodeId, usize)>> {
    pairs
        .iter()
        .map(|(label, value)| {
            let v = m.dag().node(label)?;
            Ok((v, m.value_index(v, value)?))
        })
        .collect()
}

fn dist(args: &DistArgs, cap: u64, style: Style) -> Result<Outcome> {
    let m = load_model(&args.model)?;
    let (header, table) = if let Some(text) = &args.query.query {
        let q = parse_query(text).map_err(|e| anyhow!("invalid query `{text}`: {e}"))?;
        let targets = m.dag().node_set(&q.targets)?;
        let given = evidence(&m, &q.evidence)?;
        let joint = exact_joint_with_cap(&m, cap)?;
        let table = if given.is_empty() {
            joint.marginal(&targets)?
        } else {
            joint.conditional(&targets, &given)?
        };
        let cond: Vec<String> = q.evidence.iter().map(|(l, v)| format!("{l}={v}")).collect();
        let header = if cond.is_empty() {
            format!("P({})", q.targets.join(", "))
        } else {
            format!("P({} | {})", q.targets.join(", "), cond.join(", "))
        };
        (header, table)
    } else {
        let text = args.query.counterfactual.as_deref().expect("clap enforces one query");
        let q = parse_counterfactual(text).map_err(|e| anyhow!("invalid counterfactual query `{text}`: {e}"))?;
        let targets = m.dag().node_set(&q.targets)?;
        let iv = Intervention::from_labels(&m, &q.intervention)?;
        let table = counterfactual_dist_with_cap(&m, &iv, &targets, cap)?;
        (format!("P({} | do({}))", q.targets.join(", "), iv.display(&m)), table)
    };
    let mut text = vec![header.clone()];
    text.extend(style.table_lines(&table).into_iter().map(|l| format!("  {l}")));
    let mut json = style.table_json(&table);
    json["query"] = json!(header);
    Ok(Outcome {
        pass: true,
        text,
        json,
        raw: None,
    })
}

fn generate(args: &GenerateArgs) -> Result<Outcome> {
    let profile = GeneratorProfile {
        nodes: args.nodes,
        max_domain: args.max_domain,
        max_disturbance: args.max_disturbance,
        edge_probability: args.edge_probability,
        ffrcistg: args.ffrcistg,
    };
    let m = generate_random_sem(args.seed, &profile)?;
    let body = to_json(&m);
    match &args.output {
        None => Ok(Outcome {
            pass: true,
            text: Vec::new(),
            json: Json::Null,
            raw: Some(body),
        }),
        Some(path) => {
            fs::write(path, &body).with_context(|| format!("cannot write {}", path.display()))?;
            Ok(Outcome {
                pass: true,
                text: vec![format!(
                    "wrote {} ({} nodes, {}, seed {})",
                    path.display(),
                    m.len(),
                    m.mode().as_str(),
                    args.seed
                )],
                json: json!({ "path": path.display().to_string(), "nodes": m.len(), "mode": m.mode().as_str(), "seed": args.seed }),
                raw: None,
            })
        }
    }
}
