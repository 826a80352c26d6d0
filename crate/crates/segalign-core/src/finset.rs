//! Finite sets, finite diagrams, their limits and colimits.
//!
//! Elements are addressed by index; a [`FinSet`] only carries the values for
//! display. Limits are lists of index tuples in lexicographic order, one
//! component per node. Diagrams are generating graphs: a limit or colimit
//! over the free category on the graph equals the edgewise solution.
//!
//! # Example
//!
//! ```
//! use segalign_core::finset::{limit, FinDiagram, FinSet, LimitOptions};
//!
//! let mut d = FinDiagram::new();
//! let x = d.add_node(FinSet::new(vec!["p", "q"]).unwrap());
//! let z = d.add_node(FinSet::new(vec!["u", "v"]).unwrap());
//! let y = d.add_node(FinSet::new(vec!["r", "s"]).unwrap());
//! d.add_edge(x, z, vec![0, 1]).unwrap();
//! d.add_edge(y, z, vec![0, 0]).unwrap();
//! let lim = limit(&d, &LimitOptions::default()).unwrap();
//! assert_eq!(lim.tuples(), &[vec![0, 0, 0], vec![0, 0, 1]]);
//! ```

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A finite set of distinct values in construction order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinSet<T> {
    elements: Vec<T>,
}

impl<T: PartialEq> FinSet<T> {
    /// Wraps distinct values.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidInput`] when two values are equal.
    pub fn new(elements: Vec<T>) -> Result<Self> {
        for (i, x) in elements.iter().enumerate() {
            if elements[..i].contains(x) {
                return Err(Error::InvalidInput(format!("duplicate element at {i}")));
            }
        }
        Ok(Self { elements })
    }
}

impl<T> FinSet<T> {
    /// Wraps values assumed distinct by construction.
    pub fn from_distinct(elements: Vec<T>) -> Self {
        Self { elements }
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Whether the set is empty.
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    /// Element at index `i`.
    pub fn get(&self, i: usize) -> &T {
        &self.elements[i]
    }
}

impl FinSet<usize> {
    /// The set `{0, .., n-1}`.
    pub fn range(n: usize) -> Self {
        Self {
            elements: (0..n).collect(),
        }
    }
}

/// A function between two nodes of a diagram, as an index table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    /// Source node.
    pub src: usize,
    /// Target node.
    pub dst: usize,
    /// Image of every source element.
    pub map: Vec<usize>,
}

/// A finite diagram of finite sets presented by a generating graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinDiagram<T> {
    nodes: Vec<FinSet<T>>,
    edges: Vec<Edge>,
}

impl<T> Default for FinDiagram<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> FinDiagram<T> {
    /// The empty diagram.
    pub fn new() -> Self {
        Self {
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Adds a node and returns its index.
    pub fn add_node(&mut self, set: FinSet<T>) -> usize {
        self.nodes.push(set);
        self.nodes.len() - 1
    }

    /// Adds an edge and returns its index.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidInput`] when the map is not a total function
    /// between the node sets.
    pub fn add_edge(&mut self, src: usize, dst: usize, map: Vec<usize>) -> Result<usize> {
        let edge = Edge { src, dst, map };
        check_edge(&self.sizes(), &edge)?;
        self.edges.push(edge);
        Ok(self.edges.len() - 1)
    }

    /// Nodes in order.
    pub fn nodes(&self) -> &[FinSet<T>] {
        &self.nodes
    }

    /// Edges in order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Cardinality of every node.
    pub fn sizes(&self) -> Vec<usize> {
        self.nodes.iter().map(FinSet::len).collect()
    }
}

fn check_edge(sizes: &[usize], e: &Edge) -> Result<()> {
    if e.src >= sizes.len() || e.dst >= sizes.len() {
        return Err(Error::InvalidInput(format!(
            "edge {} -> {} references a missing node",
            e.src, e.dst
        )));
    }
    if e.map.len() != sizes[e.src] || e.map.iter().any(|&y| y >= sizes[e.dst]) {
        return Err(Error::InvalidInput(format!(
            "edge {} -> {} is not a total function",
            e.src, e.dst
        )));
    }
    Ok(())
}

/// Resource limits for [`limit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LimitOptions {
    /// Largest candidate product filtered exhaustively; larger products are
    /// solved by backtracking.
    pub product_cap: u128,
    /// Largest number of limit tuples materialized.
    pub result_cap: usize,
}

impl Default for LimitOptions {
    fn default() -> Self {
        Self {
            product_cap: 10_000_000,
            result_cap: 10_000_000,
        }
    }
}

/// The limit of a diagram: compatible tuples in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limit {
    arity: usize,
    tuples: Vec<Vec<usize>>,
}

impl Limit {
    /// Number of components per tuple.
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Tuples in lexicographic order.
    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    /// Number of tuples.
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    /// Whether the limit is empty.
    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// The projection onto `node`.
    pub fn projection(&self, node: usize) -> Vec<usize> {
        self.tuples.iter().map(|t| t[node]).collect()
    }

    /// Index of a tuple.
    pub fn position(&self, tuple: &[usize]) -> Option<usize> {
        self.tuples.binary_search_by(|t| t.as_slice().cmp(tuple)).ok()
    }
}

/// Size of the full candidate product, saturating.
pub fn product_size(sizes: &[usize]) -> u128 {
    sizes.iter().fold(1u128, |acc, &s| acc.saturating_mul(s as u128))
}

/// Computes the limit of `d`.
///
/// # Errors
///
/// Returns [`Error::ResourceCap`] when more than `opts.result_cap` tuples
/// would be produced.
pub fn limit<T>(d: &FinDiagram<T>, opts: &LimitOptions) -> Result<Limit> {
    limit_of(&d.sizes(), &d.edges, opts)
}

/// Computes the limit of the diagram given by node sizes and edges.
///
/// # Errors
///
/// Returns [`Error::InvalidInput`] for malformed edges and
/// [`Error::ResourceCap`] as [`limit`].
pub fn limit_of(sizes: &[usize], edges: &[Edge], opts: &LimitOptions) -> Result<Limit> {
    for e in edges {
        check_edge(sizes, e)?;
    }
    let mut tuples = Vec::new();
    let mut overflow = false;
    let mut push = |t: &[usize]| {
        if tuples.len() == opts.result_cap {
            overflow = true;
            return false;
        }
        tuples.push(t.to_vec());
        true
    };
    if product_size(sizes) <= opts.product_cap {
        brute_force(sizes, edges, &mut push);
    } else {
        backtrack(sizes, edges, &mut push);
        tuples.sort_unstable();
    }
    if overflow {
        return Err(Error::ResourceCap {
            what: "limit tuples".to_string(),
            needed: opts.result_cap as u128 + 1,
            cap: opts.result_cap as u128,
        });
    }
    Ok(Limit {
        arity: sizes.len(),
        tuples,
    })
}

/// Streams the limit tuples in search order until `visit` returns `false`.
/// Uses backtracking, so memory stays proportional to the arity.
///
/// # Errors
///
/// Returns [`Error::InvalidInput`] for malformed edges.
pub fn for_each_limit_tuple(sizes: &[usize], edges: &[Edge], mut visit: impl FnMut(&[usize]) -> bool) -> Result<()> {
    for e in edges {
        check_edge(sizes, e)?;
    }
    backtrack(sizes, edges, &mut visit);
    Ok(())
}

fn satisfies(edges: &[Edge], t: &[usize]) -> bool {
    edges.iter().all(|e| e.map[t[e.src]] == t[e.dst])
}

fn brute_force(sizes: &[usize], edges: &[Edge], visit: &mut impl FnMut(&[usize]) -> bool) {
    if sizes.contains(&0) {
        return;
    }
    let mut t = vec![0; sizes.len()];
    loop {
        if satisfies(edges, &t) && !visit(&t) {
            return;
        }
        let Some(pos) = (0..t.len()).rev().find(|&i| t[i] + 1 < sizes[i]) else {
            return;
        };
        t[pos] += 1;
        for x in &mut t[pos + 1..] {
            *x = 0;
        }
    }
}

struct Plan {
    order: Vec<usize>,
    forced: Vec<Vec<usize>>,
    checks: Vec<Vec<usize>>,
    preimages: Vec<Vec<(usize, Vec<Vec<usize>>)>>,
}

fn search_order(sizes: &[usize], edges: &[Edge]) -> Vec<usize> {
    let k = sizes.len();
    let mut assigned = vec![false; k];
    let mut order = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(u128, usize, usize)> = None;
        for v in (0..k).filter(|&v| !assigned[v]) {
            let mut branching = sizes[v] as u128;
            let mut open = 0;
            for e in edges {
                if e.dst == v && e.src != v && assigned[e.src] {
                    branching = 1;
                } else if e.src == v && e.dst != v && assigned[e.dst] {
                    let spread = (sizes[v] as u128).div_ceil(sizes[e.dst].max(1) as u128);
                    branching = branching.min(spread);
                } else if (e.src == v) != (e.dst == v) {
                    open += 1;
                }
            }
            let key = (branching, usize::MAX - open, v);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let v = best.expect("an unassigned node remains").2;
        assigned[v] = true;
        order.push(v);
    }
    order
}

fn plan(sizes: &[usize], edges: &[Edge]) -> Plan {
    let k = sizes.len();
    let order = search_order(sizes, edges);
    let mut pos = vec![0; k];
    for (d, &v) in order.iter().enumerate() {
        pos[v] = d;
    }
    let mut forced = vec![Vec::new(); k];
    let mut checks = vec![Vec::new(); k];
    let mut preimages = vec![Vec::new(); k];
    for (ei, e) in edges.iter().enumerate() {
        if pos[e.src] < pos[e.dst] {
            forced[e.dst].push(ei);
        } else if pos[e.src] > pos[e.dst] {
            let mut pre = vec![Vec::new(); sizes[e.dst]];
            for (x, &y) in e.map.iter().enumerate() {
                pre[y].push(x);
            }
            preimages[e.src].push((ei, pre));
        } else {
            checks[e.src].push(ei);
        }
    }
    Plan {
        order,
        forced,
        checks,
        preimages,
    }
}

fn backtrack(sizes: &[usize], edges: &[Edge], visit: &mut impl FnMut(&[usize]) -> bool) {
    let p = plan(sizes, edges);
    let mut t = vec![0; sizes.len()];
    descend(0, sizes, edges, &p, &mut t, visit);
}

fn descend(
    depth: usize,
    sizes: &[usize],
    edges: &[Edge],
    p: &Plan,
    t: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if depth == sizes.len() {
        return visit(t);
    }
    let node = p.order[depth];
    let ok = |x: usize, t: &[usize]| {
        p.forced[node].iter().all(|&ei| edges[ei].map[t[edges[ei].src]] == x)
            && p.checks[node].iter().all(|&ei| edges[ei].map[x] == x)
            && p.preimages[node]
                .iter()
                .all(|(ei, _)| edges[*ei].map[x] == t[edges[*ei].dst])
    };
    let candidates: Vec<usize> = if let Some(&ei) = p.forced[node].first() {
        vec![edges[ei].map[t[edges[ei].src]]]
    } else if let Some((ei, pre)) = p.preimages[node].first() {
        pre[t[edges[*ei].dst]].clone()
    } else {
        (0..sizes[node]).collect()
    };
    for x in candidates {
        if ok(x, t) {
            t[node] = x;
            if !descend(depth + 1, sizes, edges, p, t, visit) {
                return false;
            }
        }
    }
    true
}

/// The colimit of a diagram: equivalence classes of `(node, element)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colimit {
    classes: Vec<Vec<(usize, usize)>>,
    injections: Vec<Vec<usize>>,
}

impl Colimit {
    /// Classes ordered by their least member; members sorted.
    pub fn classes(&self) -> &[Vec<(usize, usize)>] {
        &self.classes
    }

    /// Class index of every element of every node.
    pub fn injections(&self) -> &[Vec<usize>] {
        &self.injections
    }

    /// Number of classes.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    /// Whether there are no classes.
    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Computes the colimit of `d`.
pub fn colimit<T>(d: &FinDiagram<T>) -> Colimit {
    colimit_of(&d.sizes(), &d.edges)
}

/// Computes the colimit of the diagram given by node sizes and edges.
pub fn colimit_of(sizes: &[usize], edges: &[Edge]) -> Colimit {
    let mut offsets = Vec::with_capacity(sizes.len());
    let mut total = 0;
    for &s in sizes {
        offsets.push(total);
        total += s;
    }
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in edges {
        for (x, &y) in e.map.iter().enumerate() {
            let a = find(&mut parent, offsets[e.src] + x);
            let b = find(&mut parent, offsets[e.dst] + y);
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
    }
    let mut class_of_root = vec![usize::MAX; total];
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut injections: Vec<Vec<usize>> = sizes.iter().map(|&s| vec![0; s]).collect();
    for (node, slots) in injections.iter_mut().enumerate() {
        for (x, slot) in slots.iter_mut().enumerate() {
            let r = find(&mut parent, offsets[node] + x);
            if class_of_root[r] == usize::MAX {
                class_of_root[r] = classes.len();
                classes.push(Vec::new());
            }
            let c = class_of_root[r];
            classes[c].push((node, x));
            *slot = c;
        }
    }
    Colimit { classes, injections }
}

/// The canonical arrow from a colimit to the apex of a cocone.
///
/// # Errors
///
/// Returns [`Error::ConeCondition`] when the cocone does not commute or a
/// leg has the wrong length.
pub fn colimit_adjoint(sizes: &[usize], edges: &[Edge], colim: &Colimit, legs: &[Vec<usize>]) -> Result<Vec<usize>> {
    if legs.len() != sizes.len() || legs.iter().zip(sizes).any(|(l, &s)| l.len() != s) {
        return Err(Error::ConeCondition("cocone legs do not match nodes".to_string()));
    }
    for e in edges {
        for (x, &y) in e.map.iter().enumerate() {
            if legs[e.dst][y] != legs[e.src][x] {
                return Err(Error::ConeCondition(format!(
                    "cocone does not commute on edge {} -> {}",
                    e.src, e.dst
                )));
            }
        }
    }
    Ok(colim
        .classes
        .iter()
        .map(|members| {
            let (n, x) = members[0];
            legs[n][x]
        })
        .collect())
}

/// The canonical arrow from a cone apex into the limit.
///
/// # Errors
///
/// Returns [`Error::ConeCondition`] when the legs do not commute with the
/// edges or do not match the node sizes.
pub fn limit_adjoint(
    sizes: &[usize],
    edges: &[Edge],
    lim: &Limit,
    apex_size: usize,
    legs: &[Vec<usize>],
) -> Result<Vec<usize>> {
    if legs.len() != sizes.len()
        || legs
            .iter()
            .zip(sizes)
            .any(|(l, &s)| l.len() != apex_size || l.iter().any(|&y| y >= s))
    {
        return Err(Error::ConeCondition("cone legs do not match nodes".to_string()));
    }
    for e in edges {
        for (&from, &to) in legs[e.src].iter().zip(&legs[e.dst]) {
            if e.map[from] != to {
                return Err(Error::ConeCondition(format!(
                    "cone does not commute on edge {} -> {}",
                    e.src, e.dst
                )));
            }
        }
    }
    (0..apex_size)
        .map(|x| {
            let t: Vec<usize> = legs.iter().map(|l| l[x]).collect();
            lim.position(&t)
                .ok_or_else(|| Error::ConeCondition("tuple missing from the limit".to_string()))
        })
        .collect()
}

/// How a function between finite sets behaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// Injective and surjective.
    Bijective,
    /// Surjective, not injective.
    SurjectiveOnly,
    /// Injective, not surjective.
    InjectiveOnly,
    /// Neither injective nor surjective.
    Neither,
}

impl Classification {
    /// Whether the function is injective.
    pub fn is_injective(self) -> bool {
        matches!(self, Self::Bijective | Self::InjectiveOnly)
    }

    /// Whether the function is surjective.
    pub fn is_surjective(self) -> bool {
        matches!(self, Self::Bijective | Self::SurjectiveOnly)
    }

    /// Combines the two properties.
    pub fn from_flags(injective: bool, surjective: bool) -> Self {
        match (injective, surjective) {
            (true, true) => Self::Bijective,
            (false, true) => Self::SurjectiveOnly,
            (true, false) => Self::InjectiveOnly,
            (false, false) => Self::Neither,
        }
    }

    /// A stable lowercase name.
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Bijective => "bijective",
            Self::SurjectiveOnly => "surjective_only",
            Self::InjectiveOnly => "injective_only",
            Self::Neither => "neither",
        }
    }
}

/// Classifies `map` as a function into a set of `cod_size` elements.
pub fn classify(map: &[usize], cod_size: usize) -> Classification {
    let mut hits = vec![0usize; cod_size];
    for &y in map {
        hits[y] += 1;
    }
    Classification::from_flags(hits.iter().all(|&h| h <= 1), hits.iter().all(|&h| h >= 1))
}
