//! JSON graph specs and CSV path files.
//!
//! ```json
//! {
//!   "vertices": ["a", "b"],
//!   "colors": [{"name": "c1", "alpha": "3/2"}],
//!   "edges": [{"from": "a", "to": "b", "color": "c1", "beta": 1},
//!             {"from": "b", "to": "a", "color": "c1", "beta": "0.5"}],
//!   "x0": "a",
//!   "dummies": [{"from": "a", "to": "b", "count": 1, "edge_colors": ["c1", "c1"]}]
//! }
//! ```
//!
//! Weights are numbers or strings and are parsed exactly (`"3/2"`, `"0.1"`).

use serde::{Deserialize, Serialize};

use crate::dummy::{augment, AugmentedGraph, DummyPlacement};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::schemes::{Color, ColorId, ColoredEdge, ColoredGraph};
use crate::space::{Path, StateId, StateSpace};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Weight {
    Text(String),
    Number(serde_json::Number),
}

impl Weight {
    fn parse(&self, field: &str) -> Result<Rational> {
        let text = match self {
            Weight::Text(s) => s.clone(),
            Weight::Number(n) => n.to_string(),
        };
        let r = parse_rational(&text)
            .map_err(|_| Error::Input(format!("{field}: `{text}` is not a rational number")))?;
        if r <= Rational::from_integer(0.into()) {
            return Err(Error::Input(format!(
                "{field}: weight {text} must be positive"
            )));
        }
        Ok(r)
    }

    fn of(r: &Rational) -> Self {
        Weight::Text(format_rational(r))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColorSpec {
    pub name: String,
    pub alpha: Weight,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub color: String,
    pub beta: Weight,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DummySpec {
    pub from: String,
    pub to: String,
    pub count: usize,
    /// Colors of `(from, i*)` and `(i*, to)`.
    pub edge_colors: [String; 2],
    /// Weights of the same two edges; both 1 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betas: Option<[Weight; 2]>,
}

/// The raw document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpecFile {
    pub vertices: Vec<String>,
    pub colors: Vec<ColorSpec>,
    pub edges: Vec<EdgeSpec>,
    pub x0: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dummies: Vec<DummySpec>,
}

/// A validated spec.
#[derive(Clone, Debug)]
pub struct GraphSpec {
    pub graph: ColoredGraph,
    pub x0: StateId,
    pub dummies: Vec<DummyPlacement>,
}

fn vertex(space: &StateSpace, label: &str, field: &str) -> Result<StateId> {
    space
        .id(label)
        .map_err(|_| Error::Input(format!("{field}: undeclared vertex `{label}`")))
}

fn color(graph_colors: &[Color], name: &str, field: &str) -> Result<ColorId> {
    graph_colors
        .iter()
        .position(|c| c.name == name)
        .map(|k| ColorId(k as u32))
        .ok_or_else(|| Error::Input(format!("{field}: undeclared color `{name}`")))
}

fn prefixed(field: String) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Input(m) | Error::Model(m) | Error::InvalidSpace(m) => {
            Error::Input(format!("{field}: {m}"))
        }
        other => other,
    }
}

impl GraphSpecFile {
    /// Parses JSON; syntax errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("graph spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes") + "\n"
    }

    pub fn validate(&self) -> Result<GraphSpec> {
        let space =
            StateSpace::new(self.vertices.iter().cloned()).map_err(prefixed("vertices".into()))?;
        let mut colors = Vec::with_capacity(self.colors.len());
        for (k, c) in self.colors.iter().enumerate() {
            colors.push(Color {
                name: c.name.clone(),
                alpha: c.alpha.parse(&format!("colors[{k}].alpha"))?,
            });
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for (k, e) in self.edges.iter().enumerate() {
            edges.push(ColoredEdge {
                from: vertex(&space, &e.from, &format!("edges[{k}].from"))?,
                to: vertex(&space, &e.to, &format!("edges[{k}].to"))?,
                color: color(&colors, &e.color, &format!("edges[{k}].color"))?,
                beta: e.beta.parse(&format!("edges[{k}].beta"))?,
            });
        }
        let x0 = vertex(&space, &self.x0, "x0")?;
        let graph = ColoredGraph::new(space.clone(), colors.clone(), edges)
            .map_err(prefixed("edges".into()))?;
        let mut dummies = Vec::with_capacity(self.dummies.len());
        for (k, d) in self.dummies.iter().enumerate() {
            let field = format!("dummies[{k}]");
            let (in_beta, out_beta) = match &d.betas {
                Some([a, b]) => (
                    a.parse(&format!("{field}.betas[0]"))?,
                    b.parse(&format!("{field}.betas[1]"))?,
                ),
                None => (
                    Rational::from_integer(1.into()),
                    Rational::from_integer(1.into()),
                ),
            };
            dummies.push(DummyPlacement {
                from: vertex(&space, &d.from, &format!("{field}.from"))?,
                to: vertex(&space, &d.to, &format!("{field}.to"))?,
                count: d.count,
                in_color: color(
                    &colors,
                    &d.edge_colors[0],
                    &format!("{field}.edge_colors[0]"),
                )?,
                out_color: color(
                    &colors,
                    &d.edge_colors[1],
                    &format!("{field}.edge_colors[1]"),
                )?,
                in_beta,
                out_beta,
            });
        }
        let spec = GraphSpec { graph, x0, dummies };
        if !spec.dummies.is_empty() {
            spec.augmented(false).map_err(prefixed("dummies".into()))?;
        }
        Ok(spec)
    }
}

impl GraphSpec {
    pub fn parse(text: &str) -> Result<Self> {
        GraphSpecFile::from_json(text)?.validate()
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn space(&self) -> &StateSpace {
        self.graph.space()
    }

    pub fn augmented(&self, require_partitioned: bool) -> Result<AugmentedGraph> {
        augment(&self.graph, &self.dummies, require_partitioned)
    }

    pub fn to_file(&self) -> GraphSpecFile {
        let sp = self.graph.space();
        let colors = self.graph.colors();
        GraphSpecFile {
            vertices: sp.labels().to_vec(),
            colors: colors
                .iter()
                .map(|c| ColorSpec {
                    name: c.name.clone(),
                    alpha: Weight::of(&c.alpha),
                })
                .collect(),
            edges: self
                .graph
                .edges()
                .iter()
                .map(|e| EdgeSpec {
                    from: sp.label(e.from).to_string(),
                    to: sp.label(e.to).to_string(),
                    color: colors[e.color.index()].name.clone(),
                    beta: Weight::of(&e.beta),
                })
                .collect(),
            x0: sp.label(self.x0).to_string(),
            dummies: self
                .dummies
                .iter()
                .map(|d| DummySpec {
                    from: sp.label(d.from).to_string(),
                    to: sp.label(d.to).to_string(),
                    count: d.count,
                    edge_colors: [
                        colors[d.in_color.index()].name.clone(),
                        colors[d.out_color.index()].name.clone(),
                    ],
                    betas: Some([Weight::of(&d.in_beta), Weight::of(&d.out_beta)]),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }
}

/// Writes `step,state` rows, step 0 being the start.
pub fn path_to_csv(space: &StateSpace, path: &Path) -> String {
    let mut out = String::from("step,state\n");
    for (t, s) in path.states().enumerate() {
        out.push_str(&format!("{t},{}\n", space.label(s)));
    }
    out
}

/// Reads the output of [`path_to_csv`]; a header-only file is an error since
/// a path has a start.
pub fn path_from_csv(space: &StateSpace, text: &str) -> Result<Path> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == "step,state" => {}
        _ => {
            return Err(Error::Input(
                "path file: line 1: expected header `step,state`".into(),
            ))
        }
    }
    let mut states = Vec::new();
    for (n, line) in lines {
        let lineno = n + 1;
        let (step, label) = line.split_once(',').ok_or_else(|| {
            Error::Input(format!("path file: line {lineno}: expected `step,state`"))
        })?;
        let step: usize = step.trim().parse().map_err(|_| {
            Error::Input(format!(
                "path file: line {lineno}: bad step `{}`",
                step.trim()
            ))
        })?;
        if step != states.len() {
            return Err(Error::Input(format!(
                "path file: line {lineno}: expected step {}, found {step}",
                states.len()
            )));
        }
        let label = label.trim();
        states.push(space.id(label).map_err(|_| {
            Error::Input(format!("path file: line {lineno}: unknown state `{label}`"))
        })?);
    }
    if states.is_empty() {
        return Err(Error::Input("path file: no start state".into()));
    }
    Ok(Path::new(states[0], states[1..].to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    const SPEC: &str = r#"{
        "vertices": ["a", "b", "c"],
        "colors": [{"name": "c1", "alpha": "3/2"}, {"name": "c2", "alpha": 0.25}],
        "edges": [
            {"from": "a", "to": "b", "color": "c1", "beta": 1},
            {"from": "b", "to": "a", "color": "c2", "beta": "2"},
            {"from": "b", "to": "c", "color": "c2", "beta": "0.1"},
            {"from": "c", "to": "a", "color": "c1", "beta": 1}
        ],
        "x0": "a",
        "dummies": [{"from": "a", "to": "b", "count": 2, "edge_colors": ["c1", "c2"]}]
    }"#;

    #[test]
    fn parses_exact_weights() {
        let s = GraphSpec::parse(SPEC).unwrap();
        assert_eq!(s.graph.alpha(ColorId(0)), &ratio(3, 2));
        assert_eq!(s.graph.alpha(ColorId(1)), &ratio(1, 4));
        assert_eq!(
            s.graph.edge(StateId(1), StateId(2)).unwrap().beta,
            ratio(1, 10)
        );
        assert_eq!(s.dummies[0].count, 2);
        assert_eq!(s.augmented(false).unwrap().full().space().len(), 5);
    }

    #[test]
    fn round_trip() {
        let s = GraphSpec::parse(SPEC).unwrap();
        let text = s.to_json();
        let again = GraphSpec::parse(&text).unwrap();
        assert_eq!(again.graph, s.graph);
        assert_eq!(again.dummies, s.dummies);
        assert_eq!(again.to_json(), text);
    }

    #[test]
    fn diagnostics_name_fields() {
        let e = GraphSpec::parse(&SPEC.replace(
            r#""color": "c2", "beta": "2""#,
            r#""color": "c9", "beta": "2""#,
        ))
        .unwrap_err()
        .to_string();
        assert!(e.contains("edges[1].color") && e.contains("c9"), "{e}");
        let e = GraphSpec::parse(&SPEC.replace("\"0.1\"", "\"-1\""))
            .unwrap_err()
            .to_string();
        assert!(e.contains("edges[2].beta"), "{e}");
        let e = GraphSpec::parse(&SPEC.replace("\"x0\": \"a\"", "\"x0\": \"z\""))
            .unwrap_err()
            .to_string();
        assert!(e.contains("x0") && e.contains('z'), "{e}");
        let e = GraphSpec::parse("{\n \"vertices\": [\"a\",\n}")
            .unwrap_err()
            .to_string();
        assert!(e.contains("line 3"), "{e}");
        let e = GraphSpec::parse(&SPEC.replace(r#""to": "b", "count""#, r#""to": "c", "count""#))
            .unwrap_err()
            .to_string();
        assert!(e.contains("dummies") && e.contains("missing edge"), "{e}");
    }

    #[test]
    fn path_csv() {
        let s = GraphSpec::parse(SPEC).unwrap();
        let p = s.space().path("a", &["b", "c"]).unwrap();
        let text = path_to_csv(s.space(), &p);
        assert_eq!(text, "step,state\n0,a\n1,b\n2,c\n");
        assert_eq!(path_from_csv(s.space(), &text).unwrap(), p);
        assert!(path_from_csv(s.space(), "step,state\n0,a\n2,b\n").is_err());
        assert!(path_from_csv(s.space(), "step,state\n").is_err());
    }
}
