//! Exchangeability of colored edge-reinforced walks through the product of
//! reinforced color-set weights, and the partitioned-colors test.

use std::collections::{BTreeSet, HashMap};

use num_traits::One;

use super::{CheckReport, Witness, WitnessDetail};
use crate::enumerate::{condition_b_pairs, PatternBudget};
use crate::rational::{from_count, Rational};
use crate::schemes::{ColorId, ColoredGraph};
use crate::space::{Path, StateId};

/// Groups of colors such that every vertex's color set is exactly one group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorPartition {
    /// Ordered by the first vertex leaving through the group.
    pub groups: Vec<BTreeSet<ColorId>>,
    /// Group of each vertex; `None` for vertices without outgoing edges.
    pub group_of_vertex: Vec<Option<usize>>,
}

impl ColorPartition {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn group_of(&self, i: StateId) -> Option<usize> {
        self.group_of_vertex.get(i.index()).copied().flatten()
    }
}

/// The partition when any two vertices have equal or disjoint color sets.
pub fn is_partitioned_colors(graph: &ColoredGraph) -> Option<ColorPartition> {
    let mut groups: Vec<BTreeSet<ColorId>> = Vec::new();
    let mut group_of_vertex = Vec::with_capacity(graph.space().len());
    for i in graph.space().ids() {
        let set = graph.color_set(i);
        if set.is_empty() {
            group_of_vertex.push(None);
            continue;
        }
        match groups.iter().position(|g| g == set) {
            Some(k) => group_of_vertex.push(Some(k)),
            None => {
                if groups.iter().any(|g| !g.is_disjoint(set)) {
                    return None;
                }
                groups.push(set.clone());
                group_of_vertex.push(Some(groups.len() - 1));
            }
        }
    }
    Some(ColorPartition {
        groups,
        group_of_vertex,
    })
}

/// `Π_{l=2}^{m} [α_{C(y_{l-1})} + T_{C(y_{l-1})}]` along `y` from the end of
/// a history with per-color crossing counts `color_counts`; `None` when `y`
/// leaves the graph.
pub fn color_product(
    graph: &ColoredGraph,
    color_counts: &[u64],
    from: StateId,
    y: &[StateId],
) -> Option<Rational> {
    let mut counts = color_counts.to_vec();
    let mut prev = from;
    let mut product = Rational::one();
    for (l, s) in y.iter().enumerate() {
        let e = graph.edge(prev, *s)?;
        counts[e.color.index()] += 1;
        if l + 1 < y.len() {
            let set = graph.color_set(*s);
            let t: u64 = set.iter().map(|c| counts[c.index()]).sum();
            product *= graph.color_set_weight(*s) + from_count(t);
        }
        prev = *s;
    }
    Some(product)
}

/// A pattern kind with its two strings.
type Pair = (&'static str, Vec<StateId>, Vec<StateId>);

/// Compares the color products of every block-switch pair after every
/// realizable history, within `max_len` total steps.
pub fn check_colored_condition(
    graph: &ColoredGraph,
    x0: StateId,
    max_len: usize,
    patterns: PatternBudget,
) -> CheckReport {
    let mut report = CheckReport::new("colored", max_len);
    let relaxed = PatternBudget {
        max_total: None,
        ..patterns
    };
    let mut cache: HashMap<StateId, Vec<Pair>> = HashMap::new();
    let mut counts = vec![0u64; graph.colors().len()];
    let mut history = Path::empty(x0);
    visit(
        graph,
        &mut history,
        &mut counts,
        max_len,
        relaxed,
        &mut cache,
        &mut report,
    );
    report.finish()
}

fn visit(
    graph: &ColoredGraph,
    history: &mut Path,
    counts: &mut Vec<u64>,
    max_len: usize,
    patterns: PatternBudget,
    cache: &mut HashMap<StateId, Vec<Pair>>,
    report: &mut CheckReport,
) {
    let n = history.len();
    if n + 3 > max_len {
        return;
    }
    let i = history.last();
    report.count("histories", 1);
    let pairs = cache.entry(i).or_insert_with(|| {
        condition_b_pairs(i, graph.space(), patterns)
            .into_iter()
            .map(|p| (p.kind().name(), p.y(), p.y_prime()))
            .collect()
    });
    for (kind, y, y2) in pairs.iter() {
        if n + y.len() > max_len {
            continue;
        }
        let Some(l) = color_product(graph, counts, i, y) else {
            report.count("unrealizable", 1);
            continue;
        };
        let r = color_product(graph, counts, i, y2).expect("y' crosses the same edges as y");
        report.count(kind, 1);
        if l != r {
            report.push(Witness {
                kind: "colored".into(),
                detail: WitnessDetail::ColorProducts {
                    history: history.clone(),
                    left: y.clone(),
                    right: y2.clone(),
                },
                left_value: l,
                right_value: r,
            });
        }
    }
    let out: Vec<(StateId, ColorId)> = graph.out_edges(i).map(|e| (e.to, e.color)).collect();
    for (to, c) in out {
        counts[c.index()] += 1;
        history.push(to);
        visit(graph, history, counts, max_len, patterns, cache, report);
        history.pop();
        counts[c.index()] -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::Budget;
    use crate::exchangeability::brute_force_markov_exchangeable;
    use crate::rational::int;
    use crate::schemes::{Color, ColoredEdge, ColoredScheme};
    use crate::space::StateSpace;

    fn graph(vertices: &[&str], colors: &[&str], edges: &[(&str, &str, &str)]) -> ColoredGraph {
        let sp = StateSpace::new(vertices.iter().copied()).unwrap();
        let cs: Vec<Color> = colors
            .iter()
            .map(|n| Color {
                name: n.to_string(),
                alpha: int(1),
            })
            .collect();
        let es = edges
            .iter()
            .map(|(f, t, c)| ColoredEdge {
                from: sp.id(f).unwrap(),
                to: sp.id(t).unwrap(),
                color: ColorId(colors.iter().position(|x| x == c).unwrap() as u32),
                beta: int(1),
            })
            .collect();
        ColoredGraph::new(sp, cs, es).unwrap()
    }

    fn overlap() -> ColoredGraph {
        graph(
            &["a", "b", "c"],
            &["c1", "c2", "c3"],
            &[
                ("a", "b", "c1"),
                ("a", "c", "c1"),
                ("b", "a", "c1"),
                ("b", "c", "c2"),
                ("c", "a", "c3"),
            ],
        )
    }

    #[test]
    fn partition_detection() {
        let g = overlap();
        assert!(is_partitioned_colors(&g).is_none());
        let mono = graph(
            &["a", "b"],
            &["c"],
            &[("a", "b", "c"), ("b", "a", "c"), ("a", "a", "c")],
        );
        let p = is_partitioned_colors(&mono).unwrap();
        assert_eq!(p.len(), 1);
        let disjoint = graph(
            &["a", "b"],
            &["x", "y"],
            &[("a", "b", "x"), ("b", "a", "y")],
        );
        let p = is_partitioned_colors(&disjoint).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.group_of_vertex, vec![Some(0), Some(1)]);
    }

    #[test]
    fn overlap_is_violated_and_confirmed_by_brute_force() {
        let g = overlap();
        let x0 = g.space().id("a").unwrap();
        let r = check_colored_condition(&g, x0, 5, PatternBudget::default());
        assert!(r.is_violated());
        let s = ColoredScheme::new(g.clone());
        let b = brute_force_markov_exchangeable(&s, g.space(), x0, 5, Budget::default()).unwrap();
        assert!(b.is_violated());
    }

    #[test]
    fn hand_computed_products() {
        let g = overlap();
        let sp = g.space();
        let id = |l| sp.id(l).unwrap();
        let zero = vec![0; 3];
        let y = [id("b"), id("a"), id("c"), id("a")];
        let y2 = [id("c"), id("a"), id("b"), id("a")];
        assert_eq!(color_product(&g, &zero, id("a"), &y), Some(int(9)));
        assert_eq!(color_product(&g, &zero, id("a"), &y2), Some(int(8)));
        assert_eq!(color_product(&g, &zero, id("c"), &[id("b")]), None);
    }

    #[test]
    fn partitioned_graph_holds() {
        let g = graph(
            &["a", "b", "c", "d"],
            &["c1", "c2", "c3"],
            &[
                ("a", "b", "c1"),
                ("a", "c", "c2"),
                ("b", "a", "c1"),
                ("b", "d", "c2"),
                ("c", "d", "c3"),
                ("c", "a", "c3"),
                ("d", "a", "c3"),
                ("d", "d", "c3"),
            ],
        );
        assert_eq!(is_partitioned_colors(&g).unwrap().len(), 2);
        let r = check_colored_condition(&g, StateId(0), 6, PatternBudget::default());
        assert!(r.holds());
        assert!(r.coverage["bii"] > 0);
    }
}
