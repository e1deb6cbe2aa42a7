use std::fmt;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};
use treexp_core::random::{random_instance, random_tree, seeded, RandomTreeConfig};
use treexp_core::{
    batch_report, entails, enumerate_pi_explanations, is_minimal_explanation, is_path_redundant,
    literals_from_json, literals_to_json, load_tree, one_pi_explanation_instance, one_pi_explanation_path,
    parse_instance_json, parse_instances_csv, DecisionTree, Error, Explanation, Instance, LiteralSet, Mode, Oracle,
    OracleBudget, TreePath,
};

use crate::{Cli, Command, Format, InstanceSource, ModeArg, Target};

/// Fast result disagrees with the oracle.
#[derive(Debug)]
pub struct Mismatch(pub String);

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "oracle mismatch: {}", self.0)
    }
}

impl std::error::Error for Mismatch {}

/// Bad flag combination found after parsing.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Mismatch>().is_some() {
        return 3;
    }
    if err.downcast_ref::<Usage>().is_some() {
        return 1;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded(_)) => 4,
        Some(Error::ModeSource(_)) => 1,
        _ => 2,
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    budget: OracleBudget,
}

impl Ctx<'_> {
    fn oracle<'t>(&self, tree: &'t DecisionTree) -> Result<Option<Oracle<'t>>> {
        if !self.cli.verify {
            return Ok(None);
        }
        Ok(Some(Oracle::new(tree, self.budget)?))
    }

    fn emit(&self, json: Value, text: impl FnOnce() -> String) {
        match self.cli.format {
            Format::Json => println!("{}", serde_json::to_string(&json).expect("json values always serialize")),
            Format::Text => print!("{}", text()),
        }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let budget = OracleBudget::new(cli.max_points, cli.max_universe)?;
    let ctx = Ctx { cli, budget };
    match &cli.command {
        Command::Classify { tree, source } => classify(&ctx, tree, source),
        Command::Redundancy { tree, path, .. } => redundancy(&ctx, tree, path.as_deref()),
        Command::Explain { tree, target, mode } => explain(&ctx, tree, target, *mode),
        Command::Enumerate {
            tree,
            target,
            mode,
            limit,
        } => enumerate(&ctx, tree, target, *mode, *limit),
        Command::Stats { trees } => stats(&ctx, trees),
        Command::Check {
            tree,
            explanation,
            class,
        } => check(&ctx, tree, explanation, class.as_deref()),
        Command::Selftest { seed, trees } => selftest(&ctx, *seed, *trees),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
        .into()
    })
}

fn instances(tree: &DecisionTree, inline: Option<&str>, csv: Option<&Path>) -> Result<Vec<Instance>> {
    match (inline, csv) {
        (Some(text), _) => Ok(vec![parse_instance_json(tree.space(), text)?]),
        (None, Some(path)) => Ok(parse_instances_csv(tree.space(), &read(path)?)?),
        (None, None) => bail!(Usage("an instance source is required".into())),
    }
}

/// One JSON value for a single inline instance, an array for CSV input.
fn collect(values: Vec<Value>, single: bool) -> Value {
    if single {
        values.into_iter().next().unwrap_or(Value::Null)
    } else {
        Value::Array(values)
    }
}

fn classify(ctx: &Ctx, tree_path: &Path, source: &InstanceSource) -> Result<()> {
    let tree = load_tree(tree_path)?;
    let oracle = ctx.oracle(&tree)?;
    let space = tree.space();
    let rows = instances(&tree, source.instance.as_deref(), source.csv.as_deref())?;
    let mut json_rows = Vec::new();
    let mut text = String::new();
    for v in &rows {
        let (class, path) = tree.classify(v);
        if let Some(o) = &oracle {
            if o.class_of(v.values()) != class || !path.literals.admits(v) {
                bail!(Mismatch(format!("classification of {:?}", v.names(space))));
            }
        }
        let class = &tree.classes()[class];
        json_rows.push(json!({
            "class": class,
            "path": path.name,
            "literals": literals_to_json(space, &path.literals),
        }));
        text.push_str(&format!("{class}\t{}\t{}\n", path.name, path.literals.display(space)));
    }
    ctx.emit(collect(json_rows, source.instance.is_some()), || text);
    Ok(())
}

fn redundancy(ctx: &Ctx, tree_path: &Path, only: Option<&str>) -> Result<()> {
    let tree = load_tree(tree_path)?;
    let oracle = ctx.oracle(&tree)?;
    let space = tree.space();
    let paths = match only {
        Some(name) => vec![tree.path_by_name(name)?],
        None => tree.paths(),
    };
    let mut json_rows = Vec::new();
    let mut text = String::new();
    for p in &paths {
        let r = is_path_redundant(&tree, p)?;
        if let Some(o) = &oracle {
            if o.is_redundant(p) != r.redundant {
                bail!(Mismatch(format!("redundancy of {}", p.name)));
            }
            if let Some(w) = r.witness {
                if !o.entails(&p.literals.without(w), p.prediction) {
                    bail!(Mismatch(format!("witness for {}", p.name)));
                }
            }
        }
        let witness = r.witness.map(|f| space.feature(f).name.clone());
        json_rows.push(json!({
            "path": p.name,
            "class": tree.classes()[p.prediction],
            "literals": literals_to_json(space, &p.literals),
            "redundant": r.redundant,
            "witness": witness,
        }));
        let verdict = match &witness {
            Some(w) => format!("redundant (drop {w})"),
            None => "irredundant".to_string(),
        };
        text.push_str(&format!("{}\t{}\t{verdict}\n", p.name, p.literals.display(space)));
    }
    ctx.emit(Value::Array(json_rows), || text);
    Ok(())
}

fn mode_of(arg: ModeArg) -> Mode {
    match arg {
        ModeArg::Restricted => Mode::PathRestricted,
        ModeArg::Unrestricted => Mode::PathUnrestricted,
    }
}

enum Subject {
    Path(TreePath),
    Instance(Instance),
}

fn subjects(tree: &DecisionTree, target: &Target, mode: Mode) -> Result<Vec<Subject>> {
    if let Some(name) = &target.path {
        if mode == Mode::PathUnrestricted {
            return Err(Error::ModeSource("path-unrestricted explanations need an instance, not --path").into());
        }
        return Ok(vec![Subject::Path(tree.path_by_name(name)?)]);
    }
    Ok(instances(tree, target.instance.as_deref(), target.csv.as_deref())?
        .into_iter()
        .map(Subject::Instance)
        .collect())
}

/// Candidate literals the explanation must come from.
fn universe(tree: &DecisionTree, subject: &Subject, mode: Mode) -> LiteralSet {
    match (subject, mode) {
        (Subject::Path(p), _) => p.literals.clone(),
        (Subject::Instance(v), Mode::PathRestricted) => tree.classify(v).1.literals,
        (Subject::Instance(v), Mode::PathUnrestricted) => LiteralSet::from_instance(tree.space(), v),
    }
}

fn explain(ctx: &Ctx, tree_path: &Path, target: &Target, mode: ModeArg) -> Result<()> {
    let tree = load_tree(tree_path)?;
    let mode = mode_of(mode);
    let oracle = ctx.oracle(&tree)?;
    let space = tree.space();
    let mut json_rows = Vec::new();
    let mut text = String::new();
    for subject in subjects(&tree, target, mode)? {
        let e: Explanation = match (&subject, mode) {
            (Subject::Path(p), _) => one_pi_explanation_path(&tree, p)?,
            (Subject::Instance(v), Mode::PathRestricted) => one_pi_explanation_path(&tree, &tree.classify(v).1)?,
            (Subject::Instance(v), Mode::PathUnrestricted) => one_pi_explanation_instance(&tree, v),
        };
        if let Some(o) = &oracle {
            let candidates = universe(&tree, &subject, mode);
            if !e.literals.is_subset(&candidates) || !o.is_pi_explanation(&e.literals, e.class) {
                bail!(Mismatch(format!("explanation {}", e.literals.display(space))));
            }
        }
        json_rows.push(literals_to_json(space, &e.literals));
        text.push_str(&format!("{}\t=> {}\n", e.literals.display(space), tree.classes()[e.class]));
    }
    ctx.emit(collect(json_rows, target.csv.is_none()), || text);
    Ok(())
}

fn enumerate(ctx: &Ctx, tree_path: &Path, target: &Target, mode: ModeArg, limit: Option<usize>) -> Result<()> {
    let tree = load_tree(tree_path)?;
    let mode = mode_of(mode);
    let oracle = ctx.oracle(&tree)?;
    let space = tree.space();
    let mut json_rows = Vec::new();
    let mut text = String::new();
    for subject in subjects(&tree, target, mode)? {
        let core_target = match &subject {
            Subject::Path(p) => treexp_core::Target::Path(p),
            Subject::Instance(v) => treexp_core::Target::Instance(v),
        };
        let all = enumerate_pi_explanations(&tree, core_target, mode, limit)?;
        if let Some(o) = &oracle {
            let candidates = universe(&tree, &subject, mode);
            let class = match &subject {
                Subject::Path(p) => p.prediction,
                Subject::Instance(v) => tree.predict(v),
            };
            let mut truth = o.enumerate_pi(candidates.literals(), class)?;
            truth.truncate(limit.unwrap_or(usize::MAX));
            let got: Vec<&LiteralSet> = all.iter().map(|e| &e.literals).collect();
            if got != truth.iter().collect::<Vec<_>>() {
                bail!(Mismatch("explanation enumeration".into()));
            }
        }
        json_rows.push(Value::Array(
            all.iter().map(|e| literals_to_json(space, &e.literals)).collect(),
        ));
        for e in &all {
            text.push_str(&format!("{}\n", e.literals.display(space)));
        }
        if target.csv.is_some() {
            text.push('\n');
        }
    }
    ctx.emit(collect(json_rows, target.csv.is_none()), || text);
    Ok(())
}

fn stats(ctx: &Ctx, trees: &[std::path::PathBuf]) -> Result<()> {
    let report = batch_report(trees);
    if ctx.cli.verify {
        for (row, file) in report.rows.iter().zip(trees) {
            let Ok(r) = &row.outcome else { continue };
            let tree = load_tree(file)?;
            let oracle = Oracle::new(&tree, ctx.budget)?;
            for (p, d) in tree.paths().iter().zip(&r.details) {
                if oracle.is_redundant(p) != d.redundant {
                    bail!(Mismatch(format!("redundancy of {} in {}", p.name, row.source)));
                }
            }
        }
    }
    ctx.emit(report.to_json(), || report.to_text());
    let failed = report.errors().count();
    if failed > 0 {
        bail!("{failed} of {} tree files could not be analysed", report.rows.len());
    }
    Ok(())
}

fn check(ctx: &Ctx, tree_path: &Path, explanation: &str, class: Option<&str>) -> Result<()> {
    let tree = load_tree(tree_path)?;
    let space = tree.space();
    let doc: Value = serde_json::from_str(explanation).context("explanation is not valid JSON")?;
    let literals = literals_from_json(space, &doc)?;
    let class = match class {
        Some(name) => Some(
            tree.class_index(name)
                .ok_or_else(|| Error::UnknownClass(name.to_string()))?,
        ),
        None => (0..tree.classes().len()).find(|&c| entails(&tree, &literals, c)),
    };
    let (entailed, minimal) = match class {
        Some(c) => (entails(&tree, &literals, c), is_minimal_explanation(&tree, &literals, c)),
        None => (false, false),
    };
    if let Some(o) = ctx.oracle(&tree)? {
        let agree = match class {
            Some(c) => o.entails(&literals, c) == entailed && o.is_pi_explanation(&literals, c) == minimal,
            None => (0..tree.classes().len()).all(|c| !o.entails(&literals, c)),
        };
        if !agree {
            bail!(Mismatch(format!("check of {}", literals.display(space))));
        }
    }
    let class_name = class.map(|c| tree.classes()[c].clone());
    ctx.emit(
        json!({"class": class_name, "entails": entailed, "pi_explanation": minimal}),
        || {
            let verdict = if minimal {
                "PI-explanation"
            } else if entailed {
                "sufficient, not minimal"
            } else {
                "not sufficient"
            };
            format!("{}\t{verdict}\n", literals.display(space))
        },
    );
    Ok(())
}

fn selftest(ctx: &Ctx, seed: u64, count: usize) -> Result<()> {
    let cfg = RandomTreeConfig::default();
    let mut rng = seeded(seed);
    let (mut paths, mut instances, mut mismatches) = (0usize, 0usize, Vec::new());
    for t in 0..count {
        let tree = random_tree(&mut rng, &cfg);
        let oracle = Oracle::new(&tree, ctx.budget)?;
        for p in tree.paths() {
            paths += 1;
            if is_path_redundant(&tree, &p)?.redundant != oracle.is_redundant(&p) {
                mismatches.push(format!("tree {t} path {}: redundancy", p.name));
            }
            let e = one_pi_explanation_path(&tree, &p)?;
            if !e.literals.is_subset(&p.literals) || !oracle.is_pi_explanation(&e.literals, p.prediction) {
                mismatches.push(format!("tree {t} path {}: extraction", p.name));
            }
            let all: Vec<LiteralSet> =
                enumerate_pi_explanations(&tree, treexp_core::Target::Path(&p), Mode::PathRestricted, None)?
                    .into_iter()
                    .map(|e| e.literals)
                    .collect();
            if all != oracle.enumerate_pi(p.literals.literals(), p.prediction)? {
                mismatches.push(format!("tree {t} path {}: enumeration", p.name));
            }
        }
        for _ in 0..10 {
            instances += 1;
            let v = random_instance(&mut rng, tree.space());
            let e = one_pi_explanation_instance(&tree, &v);
            if !e.literals.admits(&v) || !oracle.is_pi_explanation(&e.literals, e.class) {
                mismatches.push(format!("tree {t} instance {:?}: extraction", v.values()));
            }
        }
    }
    ctx.emit(
        json!({"seed": seed, "trees": count, "paths": paths, "instances": instances, "mismatches": mismatches}),
        || {
            let mut s = format!(
                "seed {seed}: {count} trees, {paths} paths, {instances} instances, {} mismatches\n",
                mismatches.len()
            );
            for m in &mismatches {
                s.push_str(&format!("  {m}\n"));
            }
            s
        },
    );
    if !mismatches.is_empty() {
        bail!(Mismatch(format!("{} disagreements", mismatches.len())));
    }
    Ok(())
}
