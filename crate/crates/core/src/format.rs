//! JSON tree files, instance input (JSON arrays or CSV) and the JSON form
//! of explanations.
//!
//! Tree file layout:
//!
//! ```json
//! {
//!   "features": [{"name": "x1", "domain": ["0", "1"]}],
//!   "classes": ["0", "1"],
//!   "root": "a",
//!   "nodes": {
//!     "a": {"feature": "x1", "edges": [{"values": ["0"], "child": "b"},
//!                                      {"values": ["1"], "child": "c"}]},
//!     "b": {"leaf": "0"},
//!     "c": {"leaf": "1"}
//!   }
//! }
//! ```
//!
//! An edge may carry `"op"`: `"in"` (default), `"="` (exactly one value)
//! or `"!="` (every value but the listed ones). Ordinal comparisons are
//! rejected.

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::literal::{Literal, LiteralSet, ValueSet};
use crate::space::{Feature, FeatureSpace, Instance};
use crate::tree::{DecisionTree, Edge, Node};

fn syntax(err: serde_json::Error) -> Error {
    Error::Syntax {
        line: err.line(),
        column: err.column(),
        message: err.to_string(),
    }
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn field<'v>(obj: &'v Map<String, Value>, key: &str, ctx: &str) -> Result<&'v Value> {
    obj.get(key)
        .ok_or_else(|| schema(format!("{ctx}: missing field `{key}`")))
}

fn as_str<'v>(v: &'v Value, ctx: &str) -> Result<&'v str> {
    v.as_str()
        .ok_or_else(|| schema(format!("{ctx}: expected a string")))
}

fn as_array<'v>(v: &'v Value, ctx: &str) -> Result<&'v Vec<Value>> {
    v.as_array()
        .ok_or_else(|| schema(format!("{ctx}: expected an array")))
}

fn as_object<'v>(v: &'v Value, ctx: &str) -> Result<&'v Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| schema(format!("{ctx}: expected an object")))
}

fn strings(v: &Value, ctx: &str) -> Result<Vec<String>> {
    as_array(v, ctx)?
        .iter()
        .map(|s| as_str(s, ctx).map(str::to_string))
        .collect()
}

/// Parses and validates a tree file.
pub fn parse_tree(text: &str) -> Result<DecisionTree> {
    let doc: Value = serde_json::from_str(text).map_err(syntax)?;
    let top = as_object(&doc, "top level")?;

    let features = as_array(field(top, "features", "top level")?, "features")?
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let ctx = format!("features[{i}]");
            let obj = as_object(f, &ctx)?;
            Ok(Feature {
                name: as_str(field(obj, "name", &ctx)?, &ctx)?.to_string(),
                domain: strings(field(obj, "domain", &ctx)?, &ctx)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let space = FeatureSpace::new(features)?;
    let classes = strings(field(top, "classes", "top level")?, "classes")?;
    let root_name = as_str(field(top, "root", "top level")?, "root")?;
    let node_map = as_object(field(top, "nodes", "top level")?, "nodes")?;

    let names: Vec<String> = node_map.keys().cloned().collect();
    let index_of = |name: &str| names.iter().position(|n| n == name);
    let root = index_of(root_name).ok_or_else(|| Error::UnknownRoot(root_name.to_string()))?;

    let mut nodes = Vec::with_capacity(names.len());
    for (name, raw) in node_map {
        let ctx = format!("node `{name}`");
        let obj = as_object(raw, &ctx)?;
        if let Some(leaf) = obj.get("leaf") {
            let class = as_str(leaf, &ctx)?;
            let class = classes
                .iter()
                .position(|c| c == class)
                .ok_or_else(|| Error::UnknownClass(class.to_string()))?;
            nodes.push(Node::Leaf { class });
            continue;
        }
        let feature = space.resolve_feature(as_str(field(obj, "feature", &ctx)?, &ctx)?)?;
        let domain_size = space.domain_size(feature);
        let mut edges = Vec::new();
        for raw_edge in as_array(field(obj, "edges", &ctx)?, &ctx)? {
            let eobj = as_object(raw_edge, &ctx)?;
            let listed = strings(field(eobj, "values", &ctx)?, &ctx)?
                .iter()
                .map(|v| space.resolve_value(feature, v))
                .collect::<Result<Vec<_>>>()?;
            let listed = ValueSet::from_values(domain_size, listed);
            let op = match eobj.get("op") {
                Some(op) => as_str(op, &ctx)?,
                None => "in",
            };
            let values = match op {
                "in" => listed,
                "=" if listed.count() == 1 => listed,
                "=" => return Err(schema(format!("{ctx}: `=` edge needs exactly one value"))),
                "!=" => listed.complement(),
                other => {
                    return Err(Error::UnsupportedLiteral {
                        node: name.clone(),
                        op: other.to_string(),
                    })
                }
            };
            let child_name = as_str(field(eobj, "child", &ctx)?, &ctx)?;
            let child = index_of(child_name).ok_or_else(|| Error::DanglingChild {
                node: name.clone(),
                child: child_name.to_string(),
            })?;
            edges.push(Edge { values, child });
        }
        if edges.is_empty() {
            return Err(schema(format!("{ctx}: internal node without edges")));
        }
        nodes.push(Node::Internal { feature, edges });
    }

    DecisionTree::new(space, classes, root, nodes, names)
}

/// Reads a tree file from disk.
pub fn load_tree(path: &std::path::Path) -> Result<DecisionTree> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_tree(&text)
}

/// Serializes a tree back to the file format, preserving node names and
/// edge order.
pub fn tree_to_json(tree: &DecisionTree) -> String {
    let space = tree.space();
    let features: Vec<Value> = space
        .features()
        .iter()
        .map(|f| serde_json::json!({"name": f.name, "domain": f.domain}))
        .collect();
    let mut nodes = Map::new();
    for (id, node) in tree.nodes().iter().enumerate() {
        let value = match node {
            Node::Leaf { class } => serde_json::json!({"leaf": tree.classes()[*class]}),
            Node::Internal { feature, edges } => {
                let f = space.feature(*feature);
                let edges: Vec<Value> = edges
                    .iter()
                    .map(|e| {
                        let values: Vec<&str> = e.values.iter().map(|v| f.domain[v].as_str()).collect();
                        serde_json::json!({"values": values, "child": tree.node_name(e.child)})
                    })
                    .collect();
                serde_json::json!({"feature": f.name, "edges": edges})
            }
        };
        nodes.insert(tree.node_name(id).to_string(), value);
    }
    let doc = serde_json::json!({
        "features": features,
        "classes": tree.classes(),
        "root": tree.node_name(tree.root()),
        "nodes": nodes,
    });
    serde_json::to_string_pretty(&doc).expect("json values always serialize")
}

/// Parses an instance given as a JSON array of value names in feature order.
pub fn parse_instance_json(space: &FeatureSpace, text: &str) -> Result<Instance> {
    let doc: Value = serde_json::from_str(text).map_err(syntax)?;
    let values = strings(&doc, "instance").map_err(|_| {
        Error::Instance("expected a JSON array of value strings".into())
    })?;
    space.instance_from_names(&values)
}

/// Parses CSV rows whose header names the features (in any column order).
pub fn parse_instances_csv(space: &FeatureSpace, text: &str) -> Result<Vec<Instance>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::Instance(e.to_string()))?
        .clone();
    let mut column_of = Vec::with_capacity(space.len());
    for f in space.features() {
        let col = header
            .iter()
            .position(|h| h == f.name)
            .ok_or_else(|| Error::Instance(format!("CSV header lacks feature `{}`", f.name)))?;
        column_of.push(col);
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Instance(e.to_string()))?;
        let values: Vec<&str> = column_of
            .iter()
            .map(|&c| record.get(c).unwrap_or(""))
            .collect();
        out.push(space.instance_from_names(&values)?);
    }
    Ok(out)
}

/// JSON object form of a literal set: `{"feature": "value"}` for equality
/// literals and `{"feature": ["v1", "v2"]}` for set literals, keyed in
/// feature order.
pub fn literals_to_json(space: &FeatureSpace, set: &LiteralSet) -> Value {
    let mut obj = Map::new();
    for lit in set {
        let f = space.feature(lit.feature);
        let value = if lit.is_equality() {
            Value::String(f.domain[lit.allowed.iter().next().unwrap()].clone())
        } else {
            Value::Array(
                lit.allowed
                    .iter()
                    .map(|v| Value::String(f.domain[v].clone()))
                    .collect(),
            )
        };
        obj.insert(f.name.clone(), value);
    }
    Value::Object(obj)
}

/// Inverse of [`literals_to_json`].
pub fn literals_from_json(space: &FeatureSpace, value: &Value) -> Result<LiteralSet> {
    let obj = as_object(value, "explanation")?;
    let mut lits = Vec::with_capacity(obj.len());
    for (name, v) in obj {
        let feature = space.resolve_feature(name)?;
        let n = space.domain_size(feature);
        let allowed = match v {
            Value::String(s) => ValueSet::singleton(n, space.resolve_value(feature, s)?),
            Value::Array(_) => {
                let vals = strings(v, "explanation")?
                    .iter()
                    .map(|s| space.resolve_value(feature, s))
                    .collect::<Result<Vec<_>>>()?;
                ValueSet::from_values(n, vals)
            }
            _ => return Err(schema("explanation values must be strings or arrays")),
        };
        lits.push(Literal::new(feature, allowed)?);
    }
    LiteralSet::new(lits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_tree("{\n  \"features\": [,]\n}").unwrap_err();
        match err {
            Error::Syntax { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn semantic_errors_are_distinct() {
        let base = fixtures::FIG1A;
        let unknown_feature = base.replace("\"feature\": \"x2\"", "\"feature\": \"x9\"");
        assert_eq!(parse_tree(&unknown_feature), Err(Error::UnknownFeature("x9".into())));

        let unknown_value = base.replace("{\"values\": [\"1\"], \"child\": \"l2\"}", "{\"values\": [\"7\"], \"child\": \"l2\"}");
        assert!(matches!(parse_tree(&unknown_value), Err(Error::UnknownValue { .. })));

        let overlapping = base.replace("{\"values\": [\"1\"], \"child\": \"l3\"}", "{\"values\": [\"0\"], \"child\": \"l3\"}");
        assert!(matches!(parse_tree(&overlapping), Err(Error::OverlappingEdges { .. })));

        let dangling = base.replace("\"child\": \"l3\"", "\"child\": \"nowhere\"");
        assert!(matches!(parse_tree(&dangling), Err(Error::DanglingChild { .. })));

        let ordinal = base.replace(
            "{\"values\": [\"0\"], \"child\": \"l1\"}",
            "{\"op\": \"<=\", \"values\": [\"0\"], \"child\": \"l1\"}",
        );
        assert!(matches!(parse_tree(&ordinal), Err(Error::UnsupportedLiteral { .. })));
    }

    #[test]
    fn omitted_domain_value_is_non_covering() {
        let text = r#"{
            "features": [{"name": "a", "domain": ["p", "q", "r"]}],
            "classes": ["0", "1"],
            "root": "n",
            "nodes": {
                "n": {"feature": "a", "edges": [
                    {"values": ["p"], "child": "l"},
                    {"values": ["q"], "child": "m"}]},
                "l": {"leaf": "0"},
                "m": {"leaf": "1"}
            }
        }"#;
        assert_eq!(
            parse_tree(text),
            Err(Error::NonCoveringEdges {
                node: "n".into(),
                value: "r".into()
            })
        );
    }

    #[test]
    fn negated_edges() {
        let text = r#"{
            "features": [{"name": "a", "domain": ["p", "q", "r"]}],
            "classes": ["0", "1"],
            "root": "n",
            "nodes": {
                "n": {"feature": "a", "edges": [
                    {"op": "=", "values": ["p"], "child": "l"},
                    {"op": "!=", "values": ["p"], "child": "m"}]},
                "l": {"leaf": "0"},
                "m": {"leaf": "1"}
            }
        }"#;
        let tree = parse_tree(text).unwrap();
        let paths = tree.paths();
        assert!(paths[1].literals.literals()[0].is_negation());
    }

    #[test]
    fn constant_tree_parses() {
        let tree = parse_tree(fixtures::CONSTANT).unwrap();
        assert_eq!(tree.paths().len(), 1);
        assert!(tree.space().is_empty());
    }

    #[test]
    fn instances() {
        let tree = parse_tree(fixtures::PLAYTENNIS).unwrap();
        let inst = parse_instance_json(tree.space(), r#"["high","overcast","weak"]"#).unwrap();
        assert_eq!(inst.values(), &[1, 0, 1]);
        let rows = parse_instances_csv(
            tree.space(),
            "Outlook,Wind,Humidity\novercast,weak,high\nrain, strong ,normal\n",
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0], inst);
        assert_eq!(rows[1].values(), &[0, 1, 0]);
        assert!(parse_instance_json(tree.space(), r#"{"a":1}"#).is_err());
        assert!(parse_instances_csv(tree.space(), "Outlook,Wind\nrain,weak\n").is_err());
    }

    #[test]
    fn explanation_json_round_trip() {
        let tree = parse_tree(fixtures::PLAYTENNIS).unwrap();
        let space = tree.space();
        let set = LiteralSet::new([
            Literal::equals(space, 0, 1),
            Literal::new(1, ValueSet::from_values(3, [1, 2])).unwrap(),
        ])
        .unwrap();
        let json = literals_to_json(space, &set);
        assert_eq!(json.to_string(), r#"{"Humidity":"high","Outlook":["rain","sunny"]}"#);
        assert_eq!(literals_from_json(space, &json).unwrap(), set);
    }
}
