//! Multiplicative potentials on a constraint graph.
//!
//! Every nonzero entry `(x, y)` becomes an edge carrying the ratio
//! `r = M(x, y) / L(x, y)`. A BFS tree from a per-component anchor fixes the
//! potentials; every remaining edge is then checked. The first failure yields
//! a closed walk through the anchor whose accumulated ratio differs from 1.

use std::collections::VecDeque;

use crate::bifunction::BiFunction;
use crate::scalar::{Scalar, Tolerance};

use super::{CycleNode, RescalingKind};

pub(crate) struct Constraints<'a> {
    l: &'a BiFunction,
    m: &'a BiFunction,
    kind: RescalingKind,
    tol: Tolerance,
    n: usize,
    /// Entry `(x, y)` behind each edge.
    entries: Vec<(usize, usize)>,
    ends: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
}

pub(crate) struct Solution {
    pub potentials: Vec<Scalar>,
    pub anchors: Vec<(usize, usize)>,
}

pub(crate) struct Failure {
    pub nodes: Vec<usize>,
    pub entries: Vec<(usize, usize)>,
    pub ratio: Scalar,
}

impl<'a> Constraints<'a> {
    /// Assumes equal zero patterns; every nonzero entry of `L` becomes an edge.
    pub fn new(l: &'a BiFunction, m: &'a BiFunction, kind: RescalingKind, tol: Tolerance) -> Self {
        let n = l.size();
        let node_count = if kind == RescalingKind::General { 2 * n } else { n };
        let mut c = Constraints {
            l,
            m,
            kind,
            tol,
            n,
            entries: Vec::new(),
            ends: Vec::new(),
            incident: vec![Vec::new(); node_count],
        };
        let s = l.scale();
        for x in 0..n {
            for y in 0..n {
                // f(x)^2 = 1 is part of the pm1 problem even where L(x, x) = 0.
                let pm1_loop = kind == RescalingKind::Pm1 && x == y;
                if pm1_loop || !tol.is_zero(l.get(x, y), s) {
                    let (a, b) = c.node_ends(x, y);
                    let e = c.entries.len();
                    c.entries.push((x, y));
                    c.ends.push((a, b));
                    c.incident[a].push(e);
                    if b != a {
                        c.incident[b].push(e);
                    }
                }
            }
        }
        c
    }

    fn node_ends(&self, x: usize, y: usize) -> (usize, usize) {
        match self.kind {
            RescalingKind::General => (x, self.n + y),
            _ => (x, y),
        }
    }

    pub fn node(&self, v: usize) -> CycleNode {
        match self.kind {
            RescalingKind::General if v < self.n => CycleNode::Row(v),
            RescalingKind::General => CycleNode::Column(v - self.n),
            _ => CycleNode::Point(v),
        }
    }

    pub fn node_index(&self, node: CycleNode) -> Option<usize> {
        match (self.kind, node) {
            (RescalingKind::General, CycleNode::Row(x)) if x < self.n => Some(x),
            (RescalingKind::General, CycleNode::Column(y)) if y < self.n => Some(self.n + y),
            (RescalingKind::General, _) => None,
            (_, CycleNode::Point(x)) if x < self.n => Some(x),
            _ => None,
        }
    }

    /// A pm1 self-loop at a vanishing diagonal entry: it only encodes `f(x)^2 = 1`.
    fn is_virtual(&self, x: usize, y: usize) -> bool {
        self.kind == RescalingKind::Pm1 && x == y && self.tol.is_zero(self.l.get(x, x), self.l.scale())
    }

    pub fn ratio(&self, x: usize, y: usize) -> Scalar {
        if self.is_virtual(x, y) {
            return Scalar::one();
        }
        self.m.get(x, y) / self.l.get(x, y)
    }

    /// Value at the far end of an edge given the value `cur` at one end.
    pub fn step(&self, cur: &Scalar, r: &Scalar, forward: bool) -> Scalar {
        match (self.kind, forward) {
            (RescalingKind::Hermitean, true) => (r / cur).conj(),
            (RescalingKind::Hermitean, false) => r / &cur.conj(),
            (RescalingKind::Reciprocal, true) => cur / r,
            (RescalingKind::Reciprocal, false) => r * cur,
            _ => r / cur,
        }
    }

    /// Anchor value: 1, or a square root of the diagonal ratio where the kind
    /// ties `f(z)` to it.
    pub fn start_value(&self, anchor: usize) -> Scalar {
        match self.kind {
            RescalingKind::Symmetric => self.ratio(anchor, anchor).sqrt(),
            RescalingKind::Hermitean => {
                let r = self.ratio(anchor, anchor);
                match r.as_exact_real() {
                    Some(q) => Scalar::from_rational(q.clone()).sqrt(),
                    None => Scalar::from_f64(r.re_f64().sqrt()),
                }
            }
            _ => Scalar::one(),
        }
    }

    fn predicted(&self, e: usize, p: &[Scalar]) -> Scalar {
        let (x, y) = self.entries[e];
        let (a, b) = self.ends[e];
        let fg = match self.kind {
            RescalingKind::Hermitean => &p[a] * &p[b].conj(),
            RescalingKind::Reciprocal => &p[a] / &p[b],
            _ => &p[a] * &p[b],
        };
        if self.is_virtual(x, y) {
            return fg;
        }
        &fg * self.l.get(x, y)
    }

    fn consistent(&self, e: usize, p: &[Scalar]) -> bool {
        let (x, y) = self.entries[e];
        let pred = self.predicted(e, p);
        if self.is_virtual(x, y) {
            return self.tol.approx_eq(&pred, &Scalar::one(), 1.0);
        }
        self.tol.approx_eq(&pred, self.m.get(x, y), self.m.scale())
    }

    fn anchor_of(&self, members: &[usize]) -> usize {
        let has_loop = |v: usize| match self.kind {
            RescalingKind::General => v < self.n && self.incident[v].iter().any(|&e| self.ends[e].1 == self.n + v),
            _ => true,
        };
        members.iter().copied().find(|&v| has_loop(v)).unwrap_or(members[0])
    }

    pub fn solve(&self) -> Result<Solution, Failure> {
        let count = self.incident.len();
        let mut potentials: Vec<Option<Scalar>> = vec![None; count];
        let mut parent: Vec<Option<usize>> = vec![None; count];
        let mut anchors = Vec::new();
        let mut seen = vec![false; count];
        for start in 0..count {
            if seen[start] {
                continue;
            }
            let members = self.component(start, &mut seen);
            let anchor = self.anchor_of(&members);
            anchors.push((anchors.len(), anchor));
            potentials[anchor] = Some(self.start_value(anchor));
            let mut queue = VecDeque::from([anchor]);
            while let Some(u) = queue.pop_front() {
                let cur = potentials[u].clone().expect("queued nodes carry potentials");
                for &e in &self.incident[u] {
                    let (a, b) = self.ends[e];
                    let (w, forward) = if a == u { (b, true) } else { (a, false) };
                    if potentials[w].is_none() {
                        let (x, y) = self.entries[e];
                        potentials[w] = Some(self.step(&cur, &self.ratio(x, y), forward));
                        parent[w] = Some(e);
                        queue.push_back(w);
                    }
                }
            }
        }
        let potentials: Vec<Scalar> = potentials.into_iter().map(|p| p.expect("all nodes reached")).collect();
        for e in 0..self.entries.len() {
            if !self.consistent(e, &potentials) {
                return Err(self.witness(e, &parent));
            }
        }
        Ok(Solution { potentials, anchors })
    }

    fn component(&self, start: usize, seen: &mut [bool]) -> Vec<usize> {
        let mut members = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < members.len() {
            let u = members[i];
            for &e in &self.incident[u] {
                let (a, b) = self.ends[e];
                let w = if a == u { b } else { a };
                if !seen[w] {
                    seen[w] = true;
                    members.push(w);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        members
    }

    /// Tree path from the anchor down to `v`: nodes and the edges between them.
    fn tree_path(&self, v: usize, parent: &[Option<usize>]) -> (Vec<usize>, Vec<usize>) {
        let mut nodes = vec![v];
        let mut edges = Vec::new();
        let mut cur = v;
        while let Some(e) = parent[cur] {
            let (a, b) = self.ends[e];
            cur = if a == cur { b } else { a };
            edges.push(e);
            nodes.push(cur);
        }
        nodes.reverse();
        edges.reverse();
        (nodes, edges)
    }

    fn witness(&self, bad: usize, parent: &[Option<usize>]) -> Failure {
        let (a, b) = self.ends[bad];
        let (mut nodes, mut edges) = self.tree_path(a, parent);
        let (back_nodes, back_edges) = self.tree_path(b, parent);
        edges.push(bad);
        nodes.extend(back_nodes.iter().rev());
        edges.extend(back_edges.iter().rev());
        let entries: Vec<(usize, usize)> = edges.iter().map(|&e| self.entries[e]).collect();
        let ratio = self
            .walk_ratio(&nodes, &entries)
            .expect("engine-generated walks are well formed");
        Failure { nodes, entries, ratio }
    }

    /// Propagates the anchor value along a closed walk and returns
    /// `f_end / f_start`. `None` when the walk does not follow its entries.
    pub fn walk_ratio(&self, nodes: &[usize], entries: &[(usize, usize)]) -> Option<Scalar> {
        if nodes.len() != entries.len() + 1 || nodes.first() != nodes.last() {
            return None;
        }
        let start = self.start_value(nodes[0]);
        let mut cur = start.clone();
        for (k, &(x, y)) in entries.iter().enumerate() {
            let (a, b) = self.node_ends(x, y);
            let forward = match (nodes[k], nodes[k + 1]) {
                (u, w) if u == a && w == b => true,
                (u, w) if u == b && w == a => false,
                _ => return None,
            };
            cur = self.step(&cur, &self.ratio(x, y), forward);
        }
        cur.checked_div(&start)
    }
}
