//! Exact k-block transport with normalized Hamming cost.
//!
//! Weights are scaled to integers by their common denominator and the
//! transportation problem is solved as a min-cost flow by the primal-dual
//! method: every phase finds shortest-path potentials and then saturates the
//! zero-reduced-cost subgraph with a blocking-flow max-flow. Hamming costs
//! are integers in `0..=k` and the bipartite graph is complete, so the
//! shortest augmenting path never costs more than `k` and there are at most
//! `k + 1` phases.

use super::blocks::{empirical_blocks, BlockDistribution};
use crate::error::{Error, Result};
use crate::sequence::{format_symbols, Window};
use crate::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};
use std::fmt::Write as _;

/// Default cap on `|supp p| · |supp q|`, the number of transport edges.
pub const DEFAULT_TRANSPORT_BUDGET: u64 = 1 << 22;

/// Largest common denominator the integer solver accepts.
const MAX_SCALE_BITS: u64 = 100;

/// A coupling of two block distributions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportPlan {
    /// `(source block, target block, mass)` with positive mass, sorted.
    pub entries: Vec<(Vec<u8>, Vec<u8>, Rational)>,
    pub cost: Rational,
}

impl TransportPlan {
    /// Row and column sums equal `p` and `q` exactly, and `cost` matches the entries.
    pub fn is_feasible_for(&self, p: &BlockDistribution, q: &BlockDistribution) -> bool {
        let mut rows: BTreeMap<&[u8], Rational> = BTreeMap::new();
        let mut cols: BTreeMap<&[u8], Rational> = BTreeMap::new();
        let mut cost = Rational::zero();
        for (u, v, m) in &self.entries {
            if m <= &Rational::zero() || u.len() != p.k() || v.len() != q.k() {
                return false;
            }
            *rows.entry(u).or_insert_with(Rational::zero) += m;
            *cols.entry(v).or_insert_with(Rational::zero) += m;
            cost += m * Rational::new(BigInt::from(hamming(u, v)), BigInt::from(p.k()));
        }
        let matches = |sums: &BTreeMap<&[u8], Rational>, d: &BlockDistribution| {
            sums.len() == d.support_size() && sums.iter().all(|(b, m)| d.weights().get(*b) == Some(m))
        };
        matches(&rows, p) && matches(&cols, q) && cost == self.cost
    }

    /// `#n=<size> k=<k> cost=<p/q>` followed by `u<TAB>v<TAB>mass` lines.
    pub fn to_text(&self, p: &BlockDistribution) -> String {
        let fmt = crate::report::fmt_rational;
        let mut out = format!("#n={} k={} cost={}\n", p.alphabet().size(), p.k(), fmt(&self.cost));
        for (u, v, m) in &self.entries {
            let a = p.alphabet();
            writeln!(out, "{}\t{}\t{}", format_symbols(a, u), format_symbols(a, v), fmt(m)).unwrap();
        }
        out
    }
}

fn hamming(u: &[u8], v: &[u8]) -> usize {
    u.iter().zip(v).filter(|(a, b)| a != b).count()
}

/// Exact k-block transport distance with the default edge budget.
pub fn dbar_blocks(p: &BlockDistribution, q: &BlockDistribution) -> Result<TransportPlan> {
    dbar_blocks_with_budget(p, q, DEFAULT_TRANSPORT_BUDGET)
}

pub fn dbar_blocks_with_budget(p: &BlockDistribution, q: &BlockDistribution, budget: u64) -> Result<TransportPlan> {
    p.check_compatible(q)?;
    let edges = p.support_size() as u64 * q.support_size() as u64;
    if edges > budget {
        return Err(Error::BudgetExceeded { what: "transport problem", needed: format!("{edges} edges"), budget });
    }
    let scale = p.weights().values().chain(q.weights().values()).fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    if scale.bits() > MAX_SCALE_BITS {
        return Err(Error::BudgetExceeded {
            what: "transport common denominator",
            needed: format!("{} bits", scale.bits()),
            budget: MAX_SCALE_BITS,
        });
    }
    let integral = |w: &Rational| (w * &scale).to_integer().to_i128().expect("scaled weight fits");
    let sources: Vec<(&Vec<u8>, i128)> = p.weights().iter().map(|(b, w)| (b, integral(w))).collect();
    let sinks: Vec<(&Vec<u8>, i128)> = q.weights().iter().map(|(b, w)| (b, integral(w))).collect();
    let total = scale.to_i128().expect("scale fits");

    let mut net = Network::new(sources.len() + sinks.len() + 2);
    let (s, t) = (0, sources.len() + sinks.len() + 1);
    for (i, &(_, supply)) in sources.iter().enumerate() {
        net.add_edge(s, 1 + i, supply, 0);
    }
    let mut middle = Vec::with_capacity(edges as usize);
    for (i, &(u, _)) in sources.iter().enumerate() {
        for (j, &(v, _)) in sinks.iter().enumerate() {
            let e = net.add_edge(1 + i, 1 + sources.len() + j, total, hamming(u, v) as i64);
            middle.push((e, i, j));
        }
    }
    for (j, &(_, demand)) in sinks.iter().enumerate() {
        net.add_edge(1 + sources.len() + j, t, demand, 0);
    }
    let flow = net.min_cost_flow(s, t);
    debug_assert_eq!(flow, total);

    let mut entries = Vec::new();
    let mut weighted = BigInt::zero();
    for (e, i, j) in middle {
        let f = net.flow_on(e);
        if f > 0 {
            let (u, v) = (sources[i].0, sinks[j].0);
            weighted += BigInt::from(f) * BigInt::from(hamming(u, v));
            entries.push((u.clone(), v.clone(), Rational::new(BigInt::from(f), scale.clone())));
        }
    }
    let cost = Rational::new(weighted, scale * BigInt::from(p.k()));
    Ok(TransportPlan { entries, cost })
}

/// Transport costs between the empirical block distributions of `x` and `y`
/// on their common range, one entry per block length in `ks`.
pub fn dbar_ladder(x: &Window, y: &Window, ks: &[usize]) -> Result<Vec<(usize, Rational)>> {
    if x.alphabet() != y.alphabet() {
        return Err(Error::AlphabetMismatch { expected: x.alphabet().size(), found: y.alphabet().size() });
    }
    if ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("block lengths must be strictly increasing".into()));
    }
    let (lo, hi) = x.overlap(y).ok_or(Error::DisjointWindows)?;
    let (x, y) = (x.restrict(lo, hi)?, y.restrict(lo, hi)?);
    ks.par_iter()
        .map(|&k| {
            let plan = dbar_blocks(&empirical_blocks(&x, k)?, &empirical_blocks(&y, k)?)?;
            Ok((k, plan.cost))
        })
        .collect()
}

struct Edge {
    from: usize,
    to: usize,
    cap: i128,
    cost: i64,
}

/// Residual network; edge `e ^ 1` is the reverse of edge `e`.
struct Network {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    potential: Vec<i64>,
}

impl Network {
    fn new(n: usize) -> Self {
        Network { edges: Vec::new(), adj: vec![Vec::new(); n], potential: vec![0; n] }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i128, cost: i64) -> usize {
        let e = self.edges.len();
        self.edges.push(Edge { from, to, cap, cost });
        self.edges.push(Edge { from: to, to: from, cap: 0, cost: -cost });
        self.adj[from].push(e);
        self.adj[to].push(e + 1);
        e
    }

    fn flow_on(&self, e: usize) -> i128 {
        self.edges[e ^ 1].cap
    }

    fn reduced(&self, e: &Edge) -> i64 {
        e.cost + self.potential[e.from] - self.potential[e.to]
    }

    fn min_cost_flow(&mut self, s: usize, t: usize) -> i128 {
        let n = self.adj.len();
        let mut total = 0;
        loop {
            // Dijkstra on reduced costs, which stay nonnegative.
            let mut dist = vec![i64::MAX; n];
            let mut heap = BinaryHeap::new();
            dist[s] = 0;
            heap.push(Reverse((0i64, s)));
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for &e in &self.adj[u] {
                    let edge = &self.edges[e];
                    if edge.cap > 0 {
                        let nd = d + self.reduced(edge);
                        if nd < dist[edge.to] {
                            dist[edge.to] = nd;
                            heap.push(Reverse((nd, edge.to)));
                        }
                    }
                }
            }
            if dist[t] == i64::MAX {
                return total;
            }
            let cap = dist[t];
            for (p, d) in self.potential.iter_mut().zip(&dist) {
                *p += (*d).min(cap);
            }
            total += self.blocking_flows(s, t);
        }
    }

    /// Dinic max-flow restricted to edges of zero reduced cost.
    fn blocking_flows(&mut self, s: usize, t: usize) -> i128 {
        let n = self.adj.len();
        let mut pushed = 0;
        loop {
            let mut level = vec![usize::MAX; n];
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &e in &self.adj[u] {
                    let edge = &self.edges[e];
                    if edge.cap > 0 && level[edge.to] == usize::MAX && self.reduced(edge) == 0 {
                        level[edge.to] = level[u] + 1;
                        queue.push_back(edge.to);
                    }
                }
            }
            if level[t] == usize::MAX {
                return pushed;
            }
            let mut next = vec![0usize; n];
            let mut path: Vec<usize> = Vec::new();
            let mut u = s;
            loop {
                if u == t {
                    let bottleneck = path.iter().map(|&e| self.edges[e].cap).min().expect("nonempty path");
                    for &e in &path {
                        self.edges[e].cap -= bottleneck;
                        self.edges[e ^ 1].cap += bottleneck;
                    }
                    pushed += bottleneck;
                    path.clear();
                    u = s;
                    continue;
                }
                let mut advanced = false;
                while next[u] < self.adj[u].len() {
                    let e = self.adj[u][next[u]];
                    let edge = &self.edges[e];
                    if edge.cap > 0 && level[edge.to] == level[u] + 1 && self.reduced(edge) == 0 {
                        path.push(e);
                        u = edge.to;
                        advanced = true;
                        break;
                    }
                    next[u] += 1;
                }
                if !advanced {
                    if u == s {
                        break;
                    }
                    // Dead end: retreat and never enter `u` again in this round.
                    level[u] = usize::MAX;
                    let e = path.pop().expect("retreat from non-source");
                    u = self.edges[e].from;
                    next[u] += 1;
                }
            }
        }
    }
}
