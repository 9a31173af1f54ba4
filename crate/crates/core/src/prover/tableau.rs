//! Labelled tableau for KD with global assumptions.
//!
//! Nodes are sets of negation-normal-form formulas. Boolean rules saturate a
//! node (disjunctions branch), then every diamond spawns a successor carrying
//! the node's box bodies plus the global assumptions; a node without diamonds
//! still gets one successor, which is what seriality demands. A saturated
//! node whose label is contained in an ancestor's label is blocked and later
//! folded onto that ancestor, which keeps the search finite.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::time::Instant;

use serde::Serialize;

use super::ProverError;
use crate::formula::{Formula, NodeKind};
use crate::semantics::KripkeModel;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Top,
    Bot,
    Lit(String, bool),
    And(usize, usize),
    Or(usize, usize),
    Box(usize),
    Dia(usize),
}

/// Hash-consed NNF formulas.
#[derive(Default)]
struct Arena {
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
}

impl Arena {
    fn intern(&mut self, n: Node) -> usize {
        if let Some(&i) = self.index.get(&n) {
            return i;
        }
        self.nodes.push(n.clone());
        self.index.insert(n, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    /// NNF of `f` (or of its negation when `pos` is false).
    fn nnf(&mut self, f: &Formula, pos: bool) -> Result<usize, ProverError> {
        let n = match f {
            Formula::Top => {
                if pos {
                    Node::Top
                } else {
                    Node::Bot
                }
            }
            Formula::Bot => {
                if pos {
                    Node::Bot
                } else {
                    Node::Top
                }
            }
            Formula::Atom(p) => Node::Lit(p.clone(), pos),
            Formula::Not(a) => return self.nnf(a, !pos),
            Formula::And(a, b) | Formula::Or(a, b) => {
                let (x, y) = (self.nnf(a, pos)?, self.nnf(b, pos)?);
                if matches!(f, Formula::And(..)) == pos {
                    Node::And(x, y)
                } else {
                    Node::Or(x, y)
                }
            }
            Formula::Impl(a, b) => {
                let (x, y) = (self.nnf(a, !pos)?, self.nnf(b, pos)?);
                if pos {
                    Node::Or(x, y)
                } else {
                    Node::And(x, y)
                }
            }
            Formula::Iff(a, b) => {
                let (ap, an, bp, bn) = (
                    self.nnf(a, true)?,
                    self.nnf(a, false)?,
                    self.nnf(b, true)?,
                    self.nnf(b, false)?,
                );
                let (l, r) = if pos {
                    (
                        self.intern(Node::And(ap, bp)),
                        self.intern(Node::And(an, bn)),
                    )
                } else {
                    (
                        self.intern(Node::And(ap, bn)),
                        self.intern(Node::And(an, bp)),
                    )
                };
                Node::Or(l, r)
            }
            Formula::Ob(a) => {
                if pos {
                    Node::Box(self.nnf(a, true)?)
                } else {
                    Node::Dia(self.nnf(a, false)?)
                }
            }
            Formula::Perm(a) => {
                if pos {
                    Node::Dia(self.nnf(a, true)?)
                } else {
                    Node::Box(self.nnf(a, false)?)
                }
            }
            Formula::Forb(a) => {
                if pos {
                    Node::Box(self.nnf(a, false)?)
                } else {
                    Node::Dia(self.nnf(a, true)?)
                }
            }
            other => return Err(ProverError::NotKd(NodeKind::of(other))),
        };
        Ok(self.intern(n))
    }

    fn show(&self, i: usize) -> String {
        match &self.nodes[i] {
            Node::Top => "T".into(),
            Node::Bot => "F".into(),
            Node::Lit(p, true) => p.clone(),
            Node::Lit(p, false) => format!("~{p}"),
            Node::And(a, b) => format!("({} & {})", self.show(*a), self.show(*b)),
            Node::Or(a, b) => format!("({} | {})", self.show(*a), self.show(*b)),
            Node::Box(a) => format!("O({})", self.show(*a)),
            Node::Dia(a) => format!("P({})", self.show(*a)),
        }
    }
}

/// Closing events recorded while refuting the negated goal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TableauTrace {
    pub nodes_expanded: u64,
    pub lines: Vec<String>,
}

const TRACE_LINES: usize = 64;

impl TableauTrace {
    fn note(&mut self, line: String) {
        if self.lines.len() < TRACE_LINES {
            self.lines.push(line);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableauOutcome {
    /// Every branch closed.
    Valid(TableauTrace),
    /// An open branch, folded into a serial countermodel (the root is world 0).
    Refuted(KripkeModel),
}

#[derive(Clone, Copy, Debug)]
pub struct TableauLimits {
    pub max_nodes: u64,
    pub deadline: Option<Instant>,
}

impl Default for TableauLimits {
    fn default() -> Self {
        TableauLimits {
            max_nodes: 2_000_000,
            deadline: None,
        }
    }
}

/// Decides local validity of a KD formula.
pub fn kd_tableau(f: &Formula) -> Result<TableauOutcome, ProverError> {
    kd_tableau_with(&[], f, &TableauLimits::default()).map(|(o, _)| o)
}

/// Decides whether `goal` holds at every world of every serial model in
/// which all of `globals` hold everywhere. Also returns the number of nodes
/// expanded.
pub fn kd_tableau_with(
    globals: &[Formula],
    goal: &Formula,
    limits: &TableauLimits,
) -> Result<(TableauOutcome, u64), ProverError> {
    let mut atoms = goal.atoms();
    for g in globals {
        atoms.extend(g.atoms());
    }
    let mut arena = Arena::default();
    let globals = globals
        .iter()
        .map(|g| arena.nnf(g, true))
        .collect::<Result<Vec<_>, _>>()?;
    let root = arena.nnf(goal, false)?;
    let mut t = Tableau {
        arena,
        globals,
        unsat: HashSet::new(),
        trace: TableauTrace::default(),
        tree: Vec::new(),
        path: Vec::new(),
        limits: *limits,
    };
    let mut start: BTreeSet<usize> = t.globals.iter().copied().collect();
    start.insert(root);
    let open = t.expand(start)?;
    let expanded = t.trace.nodes_expanded;
    Ok(match open {
        None => (TableauOutcome::Valid(t.trace), expanded),
        Some(root) => (TableauOutcome::Refuted(t.extract(root, &atoms)), expanded),
    })
}

struct TreeNode {
    label: BTreeSet<usize>,
    succ: Vec<usize>,
}

struct Tableau {
    arena: Arena,
    globals: Vec<usize>,
    unsat: HashSet<BTreeSet<usize>>,
    trace: TableauTrace,
    tree: Vec<TreeNode>,
    /// Tree indices of the saturated ancestors of the current node.
    path: Vec<usize>,
    limits: TableauLimits,
}

impl Tableau {
    fn tick(&mut self) -> Result<(), ProverError> {
        self.trace.nodes_expanded += 1;
        if self.trace.nodes_expanded > self.limits.max_nodes {
            return Err(ProverError::Budget {
                effort: self.trace.nodes_expanded,
            });
        }
        if self.trace.nodes_expanded % 1024 == 0
            && self.limits.deadline.is_some_and(|d| Instant::now() >= d)
        {
            return Err(ProverError::Budget {
                effort: self.trace.nodes_expanded,
            });
        }
        Ok(())
    }

    /// Returns the tree index of an open model for `label`, or `None` if
    /// every branch closes.
    fn expand(&mut self, label: BTreeSet<usize>) -> Result<Option<usize>, ProverError> {
        if self.unsat.contains(&label) {
            return Ok(None);
        }
        self.tick()?;
        let pending: Vec<usize> = label.iter().copied().collect();
        let open = self.saturate(BTreeSet::new(), pending)?;
        if open.is_none() {
            self.unsat.insert(label);
        }
        Ok(open)
    }

    fn saturate(
        &mut self,
        mut done: BTreeSet<usize>,
        mut pending: Vec<usize>,
    ) -> Result<Option<usize>, ProverError> {
        while let Some(i) = pending.pop() {
            if !done.insert(i) {
                continue;
            }
            match self.arena.nodes[i].clone() {
                Node::Top | Node::Box(_) | Node::Dia(_) => {}
                Node::Bot => {
                    self.trace
                        .note(format!("depth {}: falsum", self.path.len()));
                    return Ok(None);
                }
                Node::Lit(p, pos) => {
                    let dual = self.arena.index.get(&Node::Lit(p.clone(), !pos));
                    if dual.is_some_and(|d| done.contains(d)) {
                        self.trace
                            .note(format!("depth {}: clash on {p}", self.path.len()));
                        return Ok(None);
                    }
                }
                Node::And(a, b) => {
                    pending.push(a);
                    pending.push(b);
                }
                Node::Or(a, b) => {
                    // Branches that would immediately repeat a member are skipped.
                    if done.contains(&a) || done.contains(&b) {
                        continue;
                    }
                    for choice in [a, b] {
                        let mut p = pending.clone();
                        p.push(choice);
                        if let Some(open) = self.saturate(done.clone(), p)? {
                            return Ok(Some(open));
                        }
                    }
                    self.trace.note(format!(
                        "depth {}: both sides of {} close",
                        self.path.len(),
                        self.arena.show(i)
                    ));
                    return Ok(None);
                }
            }
        }
        self.successors(done)
    }

    fn successors(&mut self, label: BTreeSet<usize>) -> Result<Option<usize>, ProverError> {
        if let Some(&anc) = self
            .path
            .iter()
            .rev()
            .find(|&&a| self.tree[a].label.is_superset(&label))
        {
            return Ok(Some(anc));
        }
        let mut boxes = Vec::new();
        let mut dias = Vec::new();
        for &i in &label {
            match self.arena.nodes[i] {
                Node::Box(a) => boxes.push(a),
                Node::Dia(a) => dias.push(Some(a)),
                _ => {}
            }
        }
        if dias.is_empty() {
            dias.push(None);
        }
        let me = self.tree.len();
        self.tree.push(TreeNode {
            label: label.clone(),
            succ: Vec::new(),
        });
        self.path.push(me);
        for d in dias {
            let mut child: BTreeSet<usize> = boxes.iter().chain(&self.globals).copied().collect();
            child.extend(d);
            match self.expand(child)? {
                Some(c) => self.tree[me].succ.push(c),
                None => {
                    if let Some(d) = d {
                        let shown = self.arena.show(self.arena.index[&Node::Dia(d)]);
                        self.trace.note(format!(
                            "depth {}: successor for {shown} closes",
                            self.path.len() - 1
                        ));
                    } else {
                        self.trace.note(format!(
                            "depth {}: serial successor closes",
                            self.path.len() - 1
                        ));
                    }
                    self.path.pop();
                    self.tree.truncate(me);
                    return Ok(None);
                }
            }
        }
        self.path.pop();
        Ok(Some(me))
    }

    fn extract(&self, root: usize, atoms: &BTreeSet<String>) -> KripkeModel {
        // Renumber reachable nodes breadth-first so the root is world 0.
        let mut order = vec![root];
        let mut id = BTreeMap::from([(root, 0usize)]);
        let mut i = 0;
        while i < order.len() {
            for &s in &self.tree[order[i]].succ {
                if let Entry::Vacant(e) = id.entry(s) {
                    e.insert(order.len());
                    order.push(s);
                }
            }
            i += 1;
        }
        let access = order
            .iter()
            .map(|&n| self.tree[n].succ.iter().map(|s| id[s]).collect())
            .collect();
        let mut valuation: BTreeMap<String, Vec<usize>> =
            atoms.iter().map(|a| (a.clone(), Vec::new())).collect();
        for (w, &n) in order.iter().enumerate() {
            for &f in &self.tree[n].label {
                if let Node::Lit(p, true) = &self.arena.nodes[f] {
                    valuation.entry(p.clone()).or_default().push(w);
                }
            }
        }
        KripkeModel::new(order.len(), access, valuation).expect("tableau model is well formed")
    }
}
