//! Predicate dependency graph, occurrence polarity and SCC planning.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::ast::{AggOp, Body, CmpOp, Pred, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    NonPositive,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Positive => "positive",
            Polarity::NonPositive => "non-positive",
        })
    }
}

/// Polarity of an atom occurring inside the set expression of
/// `agg S op k`, in a literal of the given sign.
///
/// Positive exactly when making the atom true can only move the aggregate
/// in the direction the comparison already favours: growing counts and
/// maxima for `>`/`>=`, shrinking minima for `<`/`<=`, and the mirror
/// cases for atoms under negation. Equalities and every `sum` comparison
/// are non-positive.
pub fn classify_in_comparison(agg: AggOp, op: CmpOp, literal_positive: bool) -> Polarity {
    use AggOp::*;
    use CmpOp::*;
    let grows_ok = matches!((agg, op), (Count, Gt | Ge) | (Max, Gt | Ge) | (Min, Lt | Le));
    let shrinks_ok = matches!((agg, op), (Count, Lt | Le) | (Max, Lt | Le) | (Min, Gt | Ge));
    if (literal_positive && grows_ok) || (!literal_positive && shrinks_ok) {
        Polarity::Positive
    } else {
        Polarity::NonPositive
    }
}

/// Every predicate-atom occurrence in a hypothesis with its polarity.
///
/// Conjunction, disjunction and quantifiers are monotone, so they pass the
/// polarity of their parts through; negated literals are non-positive.
pub fn occurrences(hyp: &Body) -> Vec<(Pred, Polarity)> {
    let mut out = Vec::new();
    collect_occurrences(hyp, &mut out);
    out
}

fn collect_occurrences(hyp: &Body, out: &mut Vec<(Pred, Polarity)>) {
    match hyp {
        Body::Lit(l) => {
            let pol = if l.positive { Polarity::Positive } else { Polarity::NonPositive };
            out.push((l.atom.pred.base(), pol));
        }
        Body::Cmp(c) => {
            for l in &c.set.body {
                out.push((l.atom.pred.base(), classify_in_comparison(c.agg, c.op, l.positive)));
            }
        }
        Body::And(bs) | Body::Or(bs) => bs.iter().for_each(|b| collect_occurrences(b, out)),
        Body::Exists(_, b) | Body::Forall(_, b) => collect_occurrences(b, out),
        Body::TermEq(..) | Body::TermNeq(..) => {}
    }
}

/// Tie-breaking among SCCs that are ready at the same time. Any choice
/// yields the same founded model; the option exists so that this can be
/// tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    Ascending,
    Descending,
}

/// SCCs listed so that no component depends on a later one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccPlan {
    pub components: Vec<Vec<Pred>>,
}

impl SccPlan {
    pub fn component_of(&self) -> HashMap<Pred, usize> {
        let mut m = HashMap::new();
        for (i, c) in self.components.iter().enumerate() {
            for p in c {
                m.insert(p.clone(), i);
            }
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct DependencyGraph {
    nodes: BTreeSet<Pred>,
    edges: BTreeSet<(Pred, Pred, Polarity)>,
    graph: DiGraph<Pred, Polarity>,
    index: HashMap<Pred, NodeIndex>,
    /// Component id per node, from Tarjan's algorithm.
    scc_of: Vec<usize>,
    sccs: Vec<Vec<NodeIndex>>,
}

impl DependencyGraph {
    pub fn new(prog: &Program) -> Self {
        let nodes = prog.predicates();
        let mut edges = BTreeSet::new();
        for rule in &prog.rules {
            let Some(body) = &rule.body else { continue };
            let head = rule.head.atom.pred.base();
            for (p, pol) in occurrences(body) {
                edges.insert((head.clone(), p, pol));
            }
        }
        Self::from_parts(nodes, edges)
    }

    fn from_parts(nodes: BTreeSet<Pred>, edges: BTreeSet<(Pred, Pred, Polarity)>) -> Self {
        let mut graph = DiGraph::new();
        let mut index = HashMap::new();
        for n in &nodes {
            index.insert(n.clone(), graph.add_node(n.clone()));
        }
        for (q, p, pol) in &edges {
            graph.add_edge(index[q], index[p], *pol);
        }
        let sccs = tarjan_scc(&graph);
        let mut scc_of = vec![0; graph.node_count()];
        for (i, c) in sccs.iter().enumerate() {
            for n in c {
                scc_of[n.index()] = i;
            }
        }
        DependencyGraph { nodes, edges, graph, index, scc_of, sccs }
    }

    pub fn nodes(&self) -> &BTreeSet<Pred> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<(Pred, Pred, Polarity)> {
        &self.edges
    }

    /// Whether some path of one or more edges leads from `q` to `p`.
    pub fn depends_on(&self, q: &Pred, p: &Pred) -> bool {
        let (Some(&qi), Some(&pi)) = (self.index.get(q), self.index.get(p)) else {
            return false;
        };
        let mut seen = vec![false; self.graph.node_count()];
        let mut stack: Vec<NodeIndex> = self.graph.neighbors(qi).collect();
        while let Some(n) = stack.pop() {
            if n == pi {
                return true;
            }
            if !std::mem::replace(&mut seen[n.index()], true) {
                stack.extend(self.graph.neighbors(n));
            }
        }
        false
    }

    /// Whether `p` lies on a cycle that contains a non-positive edge, i.e.
    /// its SCC contains a non-positive edge between two of its members.
    pub fn circular_non_positive(&self, p: &Pred) -> bool {
        let Some(&pi) = self.index.get(p) else { return false };
        let comp = self.scc_of[pi.index()];
        self.graph.edge_indices().any(|e| {
            let (a, b) = self.graph.edge_endpoints(e).unwrap();
            self.graph[e] == Polarity::NonPositive && self.scc_of[a.index()] == comp && self.scc_of[b.index()] == comp
        })
    }

    /// Orders the SCCs so that dependencies come first.
    pub fn scc_plan(&self, tie: TieBreak) -> SccPlan {
        let n = self.sccs.len();
        // Members of each component, sorted, and the component's sort key.
        let members: Vec<Vec<Pred>> = self
            .sccs
            .iter()
            .map(|c| {
                let mut v: Vec<Pred> = c.iter().map(|i| self.graph[*i].clone()).collect();
                v.sort();
                v
            })
            .collect();
        let mut deps: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut users: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for e in self.graph.edge_indices() {
            let (a, b) = self.graph.edge_endpoints(e).unwrap();
            let (ca, cb) = (self.scc_of[a.index()], self.scc_of[b.index()]);
            if ca != cb {
                deps[ca].insert(cb);
                users[cb].insert(ca);
            }
        }
        let mut ready: BTreeMap<&Vec<Pred>, usize> = BTreeMap::new();
        let mut pending: Vec<usize> = deps.iter().map(BTreeSet::len).collect();
        for (i, d) in pending.iter().enumerate() {
            if *d == 0 {
                ready.insert(&members[i], i);
            }
        }
        let mut components = Vec::with_capacity(n);
        while let Some((_, i)) = match tie {
            TieBreak::Ascending => ready.pop_first(),
            TieBreak::Descending => ready.pop_last(),
        } {
            components.push(members[i].clone());
            for &u in &users[i] {
                pending[u] -= 1;
                if pending[u] == 0 {
                    ready.insert(&members[u], u);
                }
            }
        }
        debug_assert_eq!(components.len(), n);
        SccPlan { components }
    }
}

impl fmt::Display for DependencyGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.nodes {
            writeln!(f, "node {}", n.signature())?;
        }
        for (q, p, pol) in &self.edges {
            writeln!(f, "edge {} -> {} {pol}", q.signature(), p.signature())?;
        }
        Ok(())
    }
}
