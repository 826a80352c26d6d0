//! Right Kan extensions of alignment functors along their base inclusion.
//!
//! The value at a segment is the limit of the functor over the comma
//! category of morphisms from that segment into the base. Values are kept
//! factored by the connected components of the comma category, so products
//! such as nine isolated copies of one image stay symbolic. Hub objects with
//! the whole aligned environment as image are replaced by the union of the
//! tuples reaching them; hubs reached by nothing are dropped with a warning.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::alignment_functor::{AlignmentFunctor, BaseCategory};
use crate::chromology::{ConeEdge, SegCone};
use crate::environment::{word_image, AlignedTuple, AlignmentSpec, PointedAlphabet, Word};
use crate::error::{Error, Result};
use crate::finset::{classify, limit_of, product_size, Classification, Edge, Limit, LimitOptions};
use crate::segments::{enumerate_morphisms, push_colors, push_colors_morphism, Segment, SegmentMorphism};
use crate::truncation::{truncate, truncate_morphism, Pointed};

/// An object of a comma category: a base object with a morphism into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommaObject {
    /// Index of the base object.
    pub target: usize,
    /// Morphism from the apex into the base object.
    pub leg: SegmentMorphism,
}

/// An arrow of a comma category, carried by a base morphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommaArrow {
    /// Source comma object.
    pub src: usize,
    /// Target comma object.
    pub dst: usize,
    /// Index of the base morphism.
    pub morphism: usize,
}

/// The category of morphisms from a segment into the objects of a base.
#[derive(Debug, Clone)]
pub struct CommaCategory {
    apex: Segment,
    objects: Vec<CommaObject>,
    arrows: Vec<CommaArrow>,
    lookup: BTreeMap<(usize, Vec<usize>), usize>,
}

impl CommaCategory {
    /// Enumerates every morphism from `apex` into every base object, in base
    /// order and then by node map, with every commuting arrow.
    ///
    /// # Errors
    ///
    /// Returns [`Error::PreorderMismatch`] when `apex` lives over another
    /// order.
    pub fn new(apex: &Segment, base: &BaseCategory) -> Result<Self> {
        let mut objects = Vec::new();
        let mut lookup = BTreeMap::new();
        for (t, s) in base.objects().iter().enumerate() {
            for leg in enumerate_morphisms(apex, s)? {
                lookup.insert((t, leg.f1().to_vec()), objects.len());
                objects.push(CommaObject { target: t, leg });
            }
        }
        let mut arrows = Vec::new();
        for (src, o) in objects.iter().enumerate() {
            for (mi, m) in base.morphisms().iter().enumerate().filter(|(_, m)| m.src == o.target) {
                let leg = m.morphism.after(&o.leg)?;
                let dst = lookup[&(m.dst, leg.f1().to_vec())];
                arrows.push(CommaArrow { src, dst, morphism: mi });
            }
        }
        Ok(Self {
            apex: apex.clone(),
            objects,
            arrows,
            lookup,
        })
    }

    /// The apex segment.
    pub fn apex(&self) -> &Segment {
        &self.apex
    }

    /// Objects in order.
    pub fn objects(&self) -> &[CommaObject] {
        &self.objects
    }

    /// Arrows in order, identities included.
    pub fn arrows(&self) -> &[CommaArrow] {
        &self.arrows
    }

    /// Number of objects.
    pub fn len(&self) -> usize {
        self.objects.len()
    }

    /// Whether there are no objects.
    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Index of the object with the given base object and node map.
    pub fn index_of(&self, target: usize, f1: &[usize]) -> Option<usize> {
        self.lookup.get(&(target, f1.to_vec())).copied()
    }

    /// For each object `(u, f)` of `self`, the index of `(u, f . h)` in
    /// `source`, where `h` runs from the apex of `source` to the apex of
    /// `self`.
    ///
    /// # Errors
    ///
    /// Returns [`Error::EndpointMismatch`] when `h` does not join the apexes.
    pub fn pull_back(&self, h: &SegmentMorphism, source: &CommaCategory) -> Result<Vec<usize>> {
        if h.src() != &source.apex || h.dst() != &self.apex {
            return Err(Error::EndpointMismatch(format!(
                "morphism {} -> {} does not join {} and {}",
                h.src(),
                h.dst(),
                source.apex,
                self.apex
            )));
        }
        self.objects
            .iter()
            .map(|o| {
                let leg = o.leg.after(h)?;
                source
                    .index_of(o.target, leg.f1())
                    .ok_or_else(|| Error::EndpointMismatch("pulled object is missing".to_string()))
            })
            .collect()
    }

    /// Connected components of the objects, each sorted, ordered by their
    /// first object.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components_of(self.objects.len(), self.arrows.iter().map(|a| (a.src, a.dst)))
    }

    /// The comma category pictured as a cone over the base objects it
    /// reaches.
    ///
    /// # Errors
    ///
    /// Returns [`Error::ConeCondition`] if the enumeration is inconsistent.
    pub fn cone(&self, base: &BaseCategory) -> Result<SegCone> {
        let nodes = self.objects.iter().map(|o| base.objects()[o.target].clone()).collect();
        let edges = self
            .arrows
            .iter()
            .map(|a| ConeEdge {
                src: a.src,
                dst: a.dst,
                morphism: base.morphisms()[a.morphism].morphism.clone(),
            })
            .collect();
        let legs = self.objects.iter().map(|o| o.leg.clone()).collect();
        SegCone::new(self.apex.clone(), nodes, edges, legs)
    }
}

fn components_of(n: usize, links: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (a, b) in links {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..n {
        let r = find(&mut parent, x);
        groups.entry(r).or_default().push(x);
    }
    groups.into_values().collect()
}

/// One connected piece of a Kan extension value.
#[derive(Debug, Clone)]
pub struct RanFactor {
    nodes: Vec<usize>,
    sets: Vec<Vec<AlignedTuple>>,
    limit: Limit,
}

impl RanFactor {
    /// Comma objects of the piece.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    /// Candidate tuples at each node, sorted.
    pub fn sets(&self) -> &[Vec<AlignedTuple>] {
        &self.sets
    }

    /// Compatible choices, as indices into [`Self::sets`].
    pub fn limit(&self) -> &Limit {
        &self.limit
    }

    /// Number of compatible choices.
    pub fn len(&self) -> usize {
        self.limit.len()
    }

    /// Whether the piece has no compatible choice.
    pub fn is_empty(&self) -> bool {
        self.limit.is_empty()
    }

    /// Whether the piece has exactly one compatible choice.
    pub fn is_terminal(&self) -> bool {
        self.limit.len() == 1
    }

    /// The tuple at the `k`-th node of choice `e`.
    pub fn value(&self, e: usize, k: usize) -> &AlignedTuple {
        &self.sets[k][self.limit.tuples()[e][k]]
    }
}

/// The value of a right Kan extension at one segment, kept as a product of
/// factors.
#[derive(Debug, Clone)]
pub struct RanValue {
    comma: CommaCategory,
    factors: Vec<RanFactor>,
    locate: Vec<Option<(usize, usize)>>,
    dropped: Vec<usize>,
    warnings: Vec<String>,
}

/// An element of a [`RanValue`]: one choice index per factor.
pub type RanElement = Vec<usize>;

impl RanValue {
    /// The comma category the value was computed over.
    pub fn comma(&self) -> &CommaCategory {
        &self.comma
    }

    /// Factors in order of their first comma object.
    pub fn factors(&self) -> &[RanFactor] {
        &self.factors
    }

    /// Comma objects whose hub image could not be determined.
    pub fn dropped(&self) -> &[usize] {
        &self.dropped
    }

    /// Messages about dropped objects.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Number of elements, saturating.
    pub fn cardinality(&self) -> u128 {
        product_size(&self.factor_sizes())
    }

    /// Number of elements once singleton factors are ignored.
    pub fn reduced_cardinality(&self) -> u128 {
        let sizes: Vec<usize> = self
            .factors
            .iter()
            .filter(|f| !f.is_terminal())
            .map(RanFactor::len)
            .collect();
        product_size(&sizes)
    }

    /// Size of each factor.
    pub fn factor_sizes(&self) -> Vec<usize> {
        self.factors.iter().map(RanFactor::len).collect()
    }

    /// Whether the value has no element.
    pub fn is_empty(&self) -> bool {
        self.factors.iter().any(RanFactor::is_empty)
    }

    /// Factor and position of a comma object, or `None` when dropped.
    pub fn locate(&self, node: usize) -> Option<(usize, usize)> {
        self.locate[node]
    }

    /// The tuple of element `x` at comma object `node`.
    pub fn value(&self, x: &[usize], node: usize) -> Option<&AlignedTuple> {
        self.locate[node].map(|(f, k)| self.factors[f].value(x[f], k))
    }

    /// The tuples of `x` at every comma object, `None` where dropped.
    pub fn family(&self, x: &[usize]) -> Vec<Option<AlignedTuple>> {
        (0..self.comma.len()).map(|c| self.value(x, c).cloned()).collect()
    }

    /// Visits every element in lexicographic order until `visit` returns
    /// `false`.
    pub fn for_each_element(&self, mut visit: impl FnMut(&[usize]) -> bool) {
        let sizes = self.factor_sizes();
        for_each_index(&sizes, &mut visit);
    }

    /// Every element, refused above `cap`.
    ///
    /// # Errors
    ///
    /// Returns [`Error::ResourceCap`] when there are more than `cap`.
    pub fn elements(&self, cap: usize) -> Result<Vec<RanElement>> {
        let n = self.cardinality();
        if n > cap as u128 {
            return Err(Error::ResourceCap {
                what: "kan extension elements".to_string(),
                needed: n,
                cap: cap as u128,
            });
        }
        let mut out = Vec::new();
        self.for_each_element(|x| {
            out.push(x.to_vec());
            true
        });
        Ok(out)
    }

    /// A readable product formula such as `L[4] x T(!9,[0011])[4]^9`.
    pub fn summary(&self, base: &BaseCategory) -> String {
        let mut groups: Vec<(String, usize, usize)> = Vec::new();
        for f in &self.factors {
            let label = if f.is_terminal() {
                "1".to_string()
            } else if f.nodes.len() == 1 {
                let s = &base.objects()[self.comma.objects[f.nodes[0]].target];
                format!("T{}[{}]", s.compact().unwrap_or_else(|| s.to_string()), f.len())
            } else {
                format!("L[{}]", f.len())
            };
            match groups.iter_mut().find(|(l, _, _)| *l == label) {
                Some(g) => g.1 += 1,
                None => groups.push((label, 1, f.len())),
            }
        }
        if groups.is_empty() {
            return "1".to_string();
        }
        groups.sort_by_key(|(l, _, _)| l == "1");
        let parts: Vec<String> = groups
            .into_iter()
            .map(|(l, k, _)| if k == 1 { l } else { format!("{l}^{k}") })
            .collect();
        parts.join(" x ")
    }
}

fn for_each_index(sizes: &[usize], visit: &mut impl FnMut(&[usize]) -> bool) {
    if sizes.contains(&0) {
        return;
    }
    let mut x = vec![0usize; sizes.len()];
    loop {
        if !visit(&x) {
            return;
        }
        let mut k = sizes.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            x[k] += 1;
            if x[k] < sizes[k] {
                break;
            }
            x[k] = 0;
        }
    }
}

type NodeSets = (Vec<Option<Vec<AlignedTuple>>>, Vec<usize>);

fn node_sets(f: &AlignmentFunctor, comma: &CommaCategory) -> Result<NodeSets> {
    let n = comma.len();
    let mut sets: Vec<Option<Vec<AlignedTuple>>> = comma
        .objects
        .iter()
        .map(|o| f.image(o.target).finite().map(<[AlignedTuple]>::to_vec))
        .collect();
    let hubs: Vec<usize> = (0..n).filter(|&c| sets[c].is_none()).collect();
    let mut grown: Vec<BTreeSet<AlignedTuple>> = vec![BTreeSet::new(); n];
    let mut reached = vec![false; n];
    loop {
        let mut changed = false;
        for a in &comma.arrows {
            if a.src == a.dst || sets[a.dst].is_some() {
                continue;
            }
            let xs: Vec<AlignedTuple> = match &sets[a.src] {
                Some(v) => v.clone(),
                None if reached[a.src] => grown[a.src].iter().cloned().collect(),
                None => continue,
            };
            if !reached[a.dst] {
                reached[a.dst] = true;
                changed = true;
            }
            for x in xs {
                changed |= grown[a.dst].insert(f.move_tuple(a.morphism, &x)?);
            }
        }
        if !changed {
            break;
        }
    }
    let mut dropped = Vec::new();
    for &h in &hubs {
        if reached[h] {
            sets[h] = Some(core::mem::take(&mut grown[h]).into_iter().collect());
        } else {
            dropped.push(h);
        }
    }
    loop {
        let mut changed = false;
        for a in &comma.arrows {
            if a.src == a.dst || !hubs.contains(&a.src) {
                continue;
            }
            let (Some(src), Some(dst)) = (&sets[a.src], &sets[a.dst]) else {
                continue;
            };
            let keep: Vec<AlignedTuple> = src
                .iter()
                .filter(|x| {
                    f.move_tuple(a.morphism, x)
                        .map(|y| dst.binary_search(&y).is_ok())
                        .unwrap_or(false)
                })
                .cloned()
                .collect();
            if keep.len() != src.len() {
                sets[a.src] = Some(keep);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok((sets, dropped))
}

/// Evaluates the right Kan extension of `f` at `tau`.
///
/// # Errors
///
/// Returns [`Error::Naturality`] when a finite image leaves its target and
/// [`Error::ResourceCap`] when a factor is too large.
pub fn ran_eval(f: &AlignmentFunctor, tau: &Segment, opts: &LimitOptions) -> Result<RanValue> {
    let comma = CommaCategory::new(tau, f.base())?;
    let (sets, dropped) = node_sets(f, &comma)?;
    let live = |c: usize| sets[c].is_some();
    let comps = components_of(
        comma.len(),
        comma
            .arrows
            .iter()
            .filter(|a| live(a.src) && live(a.dst))
            .map(|a| (a.src, a.dst)),
    );
    let mut locate = vec![None; comma.len()];
    let mut factors = Vec::new();
    for comp in comps.into_iter().filter(|c| live(c[0])) {
        let k = factors.len();
        for (pos, &c) in comp.iter().enumerate() {
            locate[c] = Some((k, pos));
        }
        let local: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(p, &c)| (c, p)).collect();
        let node_sets: Vec<Vec<AlignedTuple>> = comp.iter().map(|&c| sets[c].clone().unwrap_or_default()).collect();
        let mut edges: Vec<Edge> = Vec::new();
        for a in comma
            .arrows
            .iter()
            .filter(|a| local.contains_key(&a.src) && local.contains_key(&a.dst))
        {
            let (s, d) = (local[&a.src], local[&a.dst]);
            let map = node_sets[s]
                .iter()
                .map(|x| {
                    let y = f.move_tuple(a.morphism, x)?;
                    node_sets[d].binary_search(&y).map_err(|_| {
                        Error::Naturality(format!(
                            "{} leaves the image of {}",
                            f.render_tuple(x),
                            f.base().objects()[comma.objects[a.dst].target]
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if s == d && map.iter().enumerate().all(|(i, &j)| i == j) {
                continue;
            }
            let e = Edge { src: s, dst: d, map };
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
        let sizes: Vec<usize> = node_sets.iter().map(Vec::len).collect();
        let limit = limit_of(&sizes, &edges, opts)?;
        factors.push(RanFactor {
            nodes: comp,
            sets: node_sets,
            limit,
        });
    }
    let warnings = dropped
        .iter()
        .map(|&c| {
            let s = &f.base().objects()[comma.objects[c].target];
            format!(
                "hub {} reached by no finite image was dropped",
                s.compact().unwrap_or_else(|| s.to_string())
            )
        })
        .collect();
    Ok(RanValue {
        comma,
        factors,
        locate,
        dropped,
        warnings,
    })
}

/// The map a segment morphism induces between Kan extension values.
#[derive(Debug, Clone)]
pub struct RanMap {
    morphism: SegmentMorphism,
    source: RanValue,
    target: RanValue,
    pull: Vec<usize>,
}

impl RanMap {
    /// The inducing morphism.
    pub fn morphism(&self) -> &SegmentMorphism {
        &self.morphism
    }

    /// Value at the source segment.
    pub fn source(&self) -> &RanValue {
        &self.source
    }

    /// Value at the target segment.
    pub fn target(&self) -> &RanValue {
        &self.target
    }

    /// For each comma object of the target, its pulled object in the source.
    pub fn pull(&self) -> &[usize] {
        &self.pull
    }

    /// Image of a source element.
    ///
    /// # Errors
    ///
    /// Returns [`Error::Naturality`] when the pulled family is not an
    /// element of the target, which signals an inconsistent functor.
    pub fn apply(&self, x: &[usize]) -> Result<RanElement> {
        pull_element(&self.source, &self.target, &self.pull, x)
    }

    /// Classification of the map.
    ///
    /// # Errors
    ///
    /// Returns [`Error::ResourceCap`] when the enumeration is too large and
    /// [`Error::InvalidInput`] when the target has undetermined hubs.
    pub fn classify(&self, opts: &LimitOptions) -> Result<Classification> {
        if !self.target.dropped.is_empty() {
            return Err(Error::InvalidInput(
                "target value has undetermined hub components".to_string(),
            ));
        }
        let flat = flatten(&self.target, opts)?;
        let size = flat.len();
        let targets = [FlatNode {
            pull: &self.pull,
            elements: flat,
        }];
        let sizes = [size];
        let lim = limit_of(&sizes, &[], opts)?;
        arrow_classification(&self.source, &targets, &lim, opts)
    }
}

fn pull_element(source: &RanValue, target: &RanValue, pull: &[usize], x: &[usize]) -> Result<RanElement> {
    target
        .factors
        .iter()
        .map(|fac| {
            let tuple = fac
                .nodes
                .iter()
                .enumerate()
                .map(|(k, &c)| {
                    let v = source
                        .value(x, pull[c])
                        .ok_or_else(|| Error::Naturality("pulled object was dropped".to_string()))?;
                    fac.sets[k]
                        .binary_search(v)
                        .map_err(|_| Error::Naturality("pulled tuple leaves the target factor".to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            fac.limit
                .position(&tuple)
                .ok_or_else(|| Error::Naturality("pulled family is not compatible".to_string()))
        })
        .collect()
}

/// The map induced by `h` between Kan extension values.
///
/// # Errors
///
/// As [`ran_eval`] at both ends.
pub fn ran_on_morphism(f: &AlignmentFunctor, h: &SegmentMorphism, opts: &LimitOptions) -> Result<RanMap> {
    let source = ran_eval(f, h.src(), opts)?;
    let target = ran_eval(f, h.dst(), opts)?;
    let pull = target.comma.pull_back(h, &source.comma)?;
    Ok(RanMap {
        morphism: h.clone(),
        source,
        target,
        pull,
    })
}

struct FlatNode<'a> {
    pull: &'a [usize],
    elements: Vec<Vec<AlignedTuple>>,
}

type Family = Vec<AlignedTuple>;

fn flatten(v: &RanValue, opts: &LimitOptions) -> Result<Vec<Family>> {
    let xs = v.elements(opts.result_cap)?;
    let mut out: Vec<Family> = xs
        .iter()
        .map(|x| {
            v.family(x)
                .into_iter()
                .map(|t| t.expect("value without dropped objects"))
                .collect()
        })
        .collect();
    out.sort();
    Ok(out)
}

fn pulled_family(source: &RanValue, pull: &[usize], x: &[usize]) -> Result<Family> {
    pull.iter()
        .map(|&c| {
            source
                .value(x, c)
                .cloned()
                .ok_or_else(|| Error::Naturality("pulled object was dropped".to_string()))
        })
        .collect()
}

fn arrow_classification(
    source: &RanValue,
    targets: &[FlatNode<'_>],
    lim: &Limit,
    opts: &LimitOptions,
) -> Result<Classification> {
    let mut used = BTreeSet::new();
    for t in targets {
        for &c in t.pull {
            match source.locate(c) {
                Some((fac, _)) => {
                    used.insert(fac);
                }
                None => return Err(Error::Naturality("a leg reads a dropped object".to_string())),
            }
        }
    }
    let used: Vec<usize> = used.into_iter().collect();
    let unused_sizes: Vec<usize> = (0..source.factors.len())
        .filter(|k| !used.contains(k))
        .map(|k| source.factors[k].len())
        .collect();
    if unused_sizes.contains(&0) {
        return Ok(Classification::from_flags(true, lim.is_empty()));
    }
    let used_sizes: Vec<usize> = used.iter().map(|&k| source.factors[k].len()).collect();
    let needed = product_size(&used_sizes);
    if needed > opts.result_cap as u128 {
        return Err(Error::ResourceCap {
            what: "canonical arrow domain".to_string(),
            needed,
            cap: opts.result_cap as u128,
        });
    }
    let mut map = Vec::new();
    let mut failure = None;
    let mut x = vec![0usize; source.factors.len()];
    for_each_index(&used_sizes, &mut |sub: &[usize]| {
        for (j, &k) in used.iter().enumerate() {
            x[k] = sub[j];
        }
        let tuple: Result<Vec<usize>> = targets
            .iter()
            .map(|t| {
                let fam = pulled_family(source, t.pull, &x)?;
                t.elements
                    .binary_search(&fam)
                    .map_err(|_| Error::Naturality("leg image is not an element of its node".to_string()))
            })
            .collect();
        match tuple.and_then(|t| {
            lim.position(&t)
                .ok_or_else(|| Error::ConeCondition("canonical arrow leaves the limit".to_string()))
        }) {
            Ok(p) => {
                map.push(p);
                true
            }
            Err(e) => {
                failure = Some(e);
                false
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let c = classify(&map, lim.len());
    let injective = c.is_injective() && unused_sizes.iter().all(|&s| s <= 1);
    Ok(Classification::from_flags(injective, c.is_surjective()))
}

/// A diagram of segments under an apex, used to compare the Kan value at
/// the apex with the limit of the Kan values at the nodes.
#[derive(Debug, Clone)]
pub struct SegmentDiagram {
    /// The apex.
    pub apex: Segment,
    /// Node segments.
    pub nodes: Vec<Segment>,
    /// `(src, dst, morphism)` between nodes.
    pub edges: Vec<(usize, usize, SegmentMorphism)>,
    /// One morphism from the apex to each node.
    pub legs: Vec<SegmentMorphism>,
}

/// The comparison between the Kan value at an apex and the limit of the
/// Kan values over a diagram.
#[derive(Debug, Clone)]
pub struct KanArrow {
    /// The value at the apex.
    pub source: RanValue,
    /// Size of the limit of the node values.
    pub target_size: usize,
    /// How the canonical arrow behaves.
    pub classification: Classification,
}

/// Computes and classifies the canonical arrow from the Kan value at the
/// apex of `d` to the limit of the Kan values at its nodes.
///
/// Node values with undetermined hubs are replaced by the union of the
/// images of the edges reaching them.
///
/// # Errors
///
/// Returns [`Error::ConeCondition`] when the legs do not commute with the
/// edges, [`Error::InvalidInput`] for an undetermined node without inbound
/// edges and [`Error::ResourceCap`] when an enumeration is too large.
pub fn kan_canonical_arrow(f: &AlignmentFunctor, d: &SegmentDiagram, opts: &LimitOptions) -> Result<KanArrow> {
    if d.legs.len() != d.nodes.len() {
        return Err(Error::ConeCondition(format!(
            "{} legs for {} nodes",
            d.legs.len(),
            d.nodes.len()
        )));
    }
    for (src, dst, m) in &d.edges {
        if m.src() != &d.nodes[*src] || m.dst() != &d.nodes[*dst] || m.after(&d.legs[*src])? != d.legs[*dst] {
            return Err(Error::ConeCondition(format!("edge {src} -> {dst} does not commute")));
        }
    }
    let source = ran_eval(f, &d.apex, opts)?;
    let values = d
        .nodes
        .iter()
        .map(|s| ran_eval(f, s, opts))
        .collect::<Result<Vec<_>>>()?;
    let pulls = d
        .legs
        .iter()
        .zip(&values)
        .map(|(h, v)| v.comma.pull_back(h, &source.comma))
        .collect::<Result<Vec<_>>>()?;
    let edge_pulls = d
        .edges
        .iter()
        .map(|(s, t, m)| values[*t].comma.pull_back(m, &values[*s].comma))
        .collect::<Result<Vec<_>>>()?;
    let mut elements: Vec<Option<Vec<Family>>> = values
        .iter()
        .map(|v| {
            if v.dropped.is_empty() {
                flatten(v, opts).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    loop {
        let mut changed = false;
        for k in 0..values.len() {
            if elements[k].is_some() {
                continue;
            }
            let inbound: Vec<usize> = (0..d.edges.len()).filter(|&e| d.edges[e].1 == k).collect();
            if inbound.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "value at {} is undetermined and reached by no edge",
                    d.nodes[k]
                )));
            }
            if inbound.iter().any(|&e| elements[d.edges[e].0].is_none()) {
                continue;
            }
            let mut set = BTreeSet::new();
            for &e in &inbound {
                for fam in elements[d.edges[e].0].as_ref().expect("checked") {
                    set.insert(edge_pulls[e].iter().map(|&c| fam[c].clone()).collect::<Family>());
                }
            }
            elements[k] = Some(set.into_iter().collect());
            changed = true;
        }
        if !changed {
            break;
        }
    }
    let elements: Vec<Vec<Family>> = elements
        .into_iter()
        .enumerate()
        .map(|(k, e)| e.ok_or_else(|| Error::InvalidInput(format!("value at {} is undetermined", d.nodes[k]))))
        .collect::<Result<Vec<_>>>()?;
    let mut edges = Vec::new();
    for (e, (s, t, _)) in d.edges.iter().enumerate() {
        let map = elements[*s]
            .iter()
            .map(|fam| {
                let img: Family = edge_pulls[e].iter().map(|&c| fam[c].clone()).collect();
                elements[*t]
                    .binary_search(&img)
                    .map_err(|_| Error::Naturality(format!("edge {s} -> {t} leaves its target value")))
            })
            .collect::<Result<Vec<_>>>()?;
        edges.push(Edge { src: *s, dst: *t, map });
    }
    let sizes: Vec<usize> = elements.iter().map(Vec::len).collect();
    let lim = limit_of(&sizes, &edges, opts)?;
    let targets: Vec<FlatNode<'_>> = pulls
        .iter()
        .zip(elements)
        .map(|(p, el)| FlatNode { pull: p, elements: el })
        .collect();
    let classification = arrow_classification(&source, &targets, &lim, opts)?;
    Ok(KanArrow {
        source,
        target_size: lim.len(),
        classification,
    })
}

fn pushed_legs(spec: &AlignmentSpec, i: usize, comma: &CommaCategory) -> Result<Vec<SegmentMorphism>> {
    let f = spec
        .maps()
        .get(i)
        .ok_or_else(|| Error::UnknownElement(format!("index {i}")))?;
    comma.objects.iter().map(|o| push_colors_morphism(f, &o.leg)).collect()
}

/// The unit at the apex of `comma`: moves the word `z` of individual `i`
/// along every pushed leg.
///
/// # Errors
///
/// Returns [`Error::EndpointMismatch`] when `z` does not live over the
/// apex pushed to individual `i`.
pub fn unit_forward(
    spec: &AlignmentSpec,
    alphabet: &PointedAlphabet,
    i: usize,
    z: &Word,
    comma: &CommaCategory,
) -> Result<Vec<Word>> {
    pushed_legs(spec, i, comma)?
        .iter()
        .map(|m| word_image(m, z, alphabet))
        .collect()
}

/// Every word of individual `i` whose unit image agrees with `target` on
/// the comma objects where `target` is given.
///
/// # Errors
///
/// Returns [`Error::EndpointMismatch`] when a target word lives over the
/// wrong segment and [`Error::ResourceCap`] when free positions leave more
/// than `cap` solutions.
pub fn unit_solve(
    spec: &AlignmentSpec,
    alphabet: &PointedAlphabet,
    i: usize,
    level: usize,
    target: &[Option<Word>],
    comma: &CommaCategory,
    cap: usize,
) -> Result<Vec<Word>> {
    let solver = UnitSolver::new(spec, i, level, comma)?;
    let mut assignment = vec![None; solver.width()];
    for (c, w) in target.iter().enumerate() {
        if let Some(w) = w {
            if !solver.constrain(c, w, alphabet, &mut assignment)? {
                return Ok(Vec::new());
            }
        }
    }
    solver.complete(&assignment, alphabet, cap)
}

/// Position constraints linking the unit image of one individual's word to
/// the comma components.
#[derive(Debug, Clone)]
pub struct UnitSolver {
    apex: Segment,
    level: usize,
    width: usize,
    maps: Vec<(Segment, Vec<Option<usize>>)>,
}

impl UnitSolver {
    /// Prepares the constraints of individual `i` at level `level` of the
    /// specification order.
    ///
    /// # Errors
    ///
    /// Returns [`Error::UnknownElement`] for an unknown index.
    pub fn new(spec: &AlignmentSpec, i: usize, level: usize, comma: &CommaCategory) -> Result<Self> {
        let f = spec
            .maps()
            .get(i)
            .ok_or_else(|| Error::UnknownElement(format!("index {i}")))?;
        let b = f.apply(level);
        let apex = push_colors(f, comma.apex())?;
        let width = truncate(&apex, b)?.len();
        let maps = pushed_legs(spec, i, comma)?
            .iter()
            .map(|m| {
                let p = truncate_morphism(m, b)?;
                let ranks = p
                    .mapping()
                    .iter()
                    .map(|q| match q {
                        Pointed::At(s) => p.cod().rank(*s),
                        Pointed::Star => None,
                    })
                    .collect();
                Ok((m.dst().clone(), ranks))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            apex,
            level: b,
            width,
            maps,
        })
    }

    /// Number of letters of a solution.
    pub fn width(&self) -> usize {
        self.width
    }

    /// The segment solutions live over.
    pub fn apex(&self) -> &Segment {
        &self.apex
    }

    /// Adds the constraints of comma object `c` with word `w`; returns
    /// `false` on a contradiction.
    ///
    /// # Errors
    ///
    /// Returns [`Error::EndpointMismatch`] when `w` lives over the wrong
    /// segment.
    pub fn constrain(
        &self,
        c: usize,
        w: &Word,
        alphabet: &PointedAlphabet,
        assignment: &mut [Option<u8>],
    ) -> Result<bool> {
        let (seg, ranks) = &self.maps[c];
        if w.segment() != seg || w.letters().len() != ranks.len() {
            return Err(Error::EndpointMismatch(format!(
                "word over {} given for a component over {}",
                w.segment(),
                seg
            )));
        }
        for (r, &letter) in ranks.iter().zip(w.letters()) {
            match r {
                None if letter != alphabet.basepoint() => return Ok(false),
                None => {}
                Some(p) => match assignment[*p] {
                    Some(old) if old != letter => return Ok(false),
                    _ => assignment[*p] = Some(letter),
                },
            }
        }
        Ok(true)
    }

    /// Every word extending `assignment`, free positions ranging over the
    /// alphabet.
    ///
    /// # Errors
    ///
    /// Returns [`Error::ResourceCap`] when there are more than `cap`.
    pub fn complete(&self, assignment: &[Option<u8>], alphabet: &PointedAlphabet, cap: usize) -> Result<Vec<Word>> {
        let free: Vec<usize> = (0..assignment.len()).filter(|&p| assignment[p].is_none()).collect();
        let sizes = vec![alphabet.len(); free.len()];
        let needed = product_size(&sizes);
        if needed > cap as u128 {
            return Err(Error::ResourceCap {
                what: "unit solutions".to_string(),
                needed,
                cap: cap as u128,
            });
        }
        let mut out = Vec::new();
        let mut letters: Vec<u8> = assignment.iter().map(|a| a.unwrap_or(0)).collect();
        let mut err = None;
        for_each_index(&sizes, &mut |choice: &[usize]| {
            for (k, &p) in free.iter().enumerate() {
                letters[p] = choice[k] as u8;
            }
            match Word::new(self.apex.clone(), self.level, letters.clone()) {
                Ok(w) => {
                    out.push(w);
                    true
                }
                Err(e) => {
                    err = Some(e);
                    false
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }
}
