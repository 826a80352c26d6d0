//! Cones of quasi-homologous segments, their truncation arrows, and
//! pedigrad checks of set-valued functors against them.
//!
//! Truncating a cone of segments with identity node maps yields a cocone of
//! subsets of the apex positions. The induced arrow from its colimit into
//! the apex truncation decides whether the cone is exactly distributive
//! (bijective) or injective at a level.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::environment::PointedAlphabet;
use crate::error::{Error, Result};
use crate::finset::{
    classify, colimit_adjoint, colimit_of, limit_adjoint, limit_of, Classification, Colimit, Edge, LimitOptions,
};
use crate::preorder::{same_preorder, Preorder};
use crate::segments::{Segment, SegmentMorphism};
use crate::truncation::{truncate, truncate_morphism, Pointed, TruncationSet};

/// An arrow between two nodes of a cone diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeEdge {
    /// Source node.
    pub src: usize,
    /// Target node.
    pub dst: usize,
    /// The segment morphism between them.
    pub morphism: SegmentMorphism,
}

/// A cone of segments: an apex with one leg per node of a diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegCone {
    apex: Segment,
    nodes: Vec<Segment>,
    edges: Vec<ConeEdge>,
    legs: Vec<SegmentMorphism>,
}

impl SegCone {
    /// Builds a cone and checks that every triangle commutes.
    ///
    /// # Errors
    ///
    /// Returns [`Error::ConeCondition`] when endpoints disagree or an edge
    /// composed with a leg differs from the other leg.
    pub fn new(apex: Segment, nodes: Vec<Segment>, edges: Vec<ConeEdge>, legs: Vec<SegmentMorphism>) -> Result<Self> {
        if legs.len() != nodes.len() {
            return Err(Error::ConeCondition(format!(
                "{} legs for {} nodes",
                legs.len(),
                nodes.len()
            )));
        }
        for (k, (leg, node)) in legs.iter().zip(&nodes).enumerate() {
            if leg.src() != &apex || leg.dst() != node {
                return Err(Error::ConeCondition(format!("leg {} has wrong endpoints", k + 1)));
            }
        }
        for e in &edges {
            let (Some(s), Some(t)) = (nodes.get(e.src), nodes.get(e.dst)) else {
                return Err(Error::ConeCondition("edge references a missing node".to_string()));
            };
            if e.morphism.src() != s || e.morphism.dst() != t {
                return Err(Error::ConeCondition(format!(
                    "edge {} -> {} has wrong endpoints",
                    e.src + 1,
                    e.dst + 1
                )));
            }
            if e.morphism.after(&legs[e.src])? != legs[e.dst] {
                return Err(Error::ConeCondition(format!(
                    "triangle over edge {} -> {} does not commute",
                    e.src + 1,
                    e.dst + 1
                )));
            }
        }
        Ok(Self {
            apex,
            nodes,
            edges,
            legs,
        })
    }

    /// Builds a cone of quasi-homologous segments, deriving every morphism
    /// from the identity node map.
    ///
    /// # Errors
    ///
    /// Returns [`Error::ConeCondition`] when some required morphism does
    /// not exist.
    pub fn quasi_homologous(apex: Segment, nodes: Vec<Segment>, edges: &[(usize, usize)]) -> Result<Self> {
        let id = |s: &Segment, t: &Segment| {
            crate::segments::quasi_homologous_morphism(s, t)?
                .ok_or_else(|| Error::ConeCondition(format!("no morphism {s} -> {t}")))
        };
        let legs = nodes.iter().map(|n| id(&apex, n)).collect::<Result<Vec<_>>>()?;
        let edges = edges
            .iter()
            .map(|&(a, b)| {
                let (s, t) = nodes
                    .get(a)
                    .zip(nodes.get(b))
                    .ok_or_else(|| Error::ConeCondition("edge references a missing node".to_string()))?;
                Ok(ConeEdge {
                    src: a,
                    dst: b,
                    morphism: id(s, t)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(apex, nodes, edges, legs)
    }

    /// The apex.
    pub fn apex(&self) -> &Segment {
        &self.apex
    }

    /// Diagram nodes.
    pub fn nodes(&self) -> &[Segment] {
        &self.nodes
    }

    /// Diagram edges.
    pub fn edges(&self) -> &[ConeEdge] {
        &self.edges
    }

    /// One leg per node.
    pub fn legs(&self) -> &[SegmentMorphism] {
        &self.legs
    }

    /// Whether every segment shares the apex domain and every arrow has the
    /// identity node map.
    pub fn is_quasi_homologous(&self) -> bool {
        self.legs.iter().all(SegmentMorphism::is_quasi_homologous)
            && self.edges.iter().all(|e| e.morphism.is_quasi_homologous())
    }
}

/// The arrow from the colimit of node truncations to the apex truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalArrow {
    /// Truncation of the apex.
    pub apex: TruncationSet,
    /// Colimit classes over `(node, rank in node truncation)`.
    pub colimit: Colimit,
    /// Apex position of every class.
    pub map: Vec<usize>,
}

impl CanonicalArrow {
    /// Classification of the arrow.
    pub fn classify(&self) -> Classification {
        let ranks: Vec<usize> = self
            .map
            .iter()
            .map(|&i| self.apex.rank(i).expect("class lands in the apex truncation"))
            .collect();
        classify(&ranks, self.apex.len())
    }
}

/// The canonical arrow of a quasi-homologous cone at level `b`.
///
/// # Errors
///
/// Returns [`Error::InvalidInput`] when some leg or edge moves nodes.
pub fn canonical_arrow(c: &SegCone, b: usize) -> Result<CanonicalArrow> {
    if !c.is_quasi_homologous() {
        return Err(Error::InvalidInput(
            "canonical arrows need identity node maps on every arrow".to_string(),
        ));
    }
    let apex = truncate(&c.apex, b)?;
    let trs = c.nodes.iter().map(|n| truncate(n, b)).collect::<Result<Vec<_>>>()?;
    let sizes: Vec<usize> = trs.iter().map(TruncationSet::len).collect();
    let edges: Vec<Edge> = c
        .edges
        .iter()
        .map(|e| Edge {
            src: e.dst,
            dst: e.src,
            map: trs[e.dst]
                .indices()
                .iter()
                .map(|&j| trs[e.src].rank(j).expect("quasi-homologous truncations are nested"))
                .collect(),
        })
        .collect();
    let colimit = colimit_of(&sizes, &edges);
    let legs: Vec<Vec<usize>> = trs.iter().map(|t| t.indices().to_vec()).collect();
    let map = colimit_adjoint(&sizes, &edges, &colimit, &legs)?;
    Ok(CanonicalArrow { apex, colimit, map })
}

/// Whether the canonical arrow at `b` is a bijection.
///
/// # Errors
///
/// Propagates [`canonical_arrow`] errors.
pub fn is_exactly_distributive(c: &SegCone, b: usize) -> Result<bool> {
    Ok(canonical_arrow(c, b)?.classify() == Classification::Bijective)
}

/// Whether the canonical arrow at `b` is an injection.
///
/// # Errors
///
/// Propagates [`canonical_arrow`] errors.
pub fn is_injective(c: &SegCone, b: usize) -> Result<bool> {
    Ok(canonical_arrow(c, b)?.classify().is_injective())
}

/// Cones of quasi-homologous segments grouped by domain size.
#[derive(Debug, Clone)]
pub struct Chromology {
    omega: Arc<Preorder>,
    cones: BTreeMap<usize, Vec<SegCone>>,
}

impl Chromology {
    /// The chromology with no cones.
    pub fn new(omega: Arc<Preorder>) -> Self {
        Self {
            omega,
            cones: BTreeMap::new(),
        }
    }

    /// Adds a cone under the domain size of its apex.
    ///
    /// # Errors
    ///
    /// Returns [`Error::PreorderMismatch`] for a foreign pre-order and
    /// [`Error::InvalidInput`] for cones that move nodes.
    pub fn add(&mut self, cone: SegCone) -> Result<()> {
        if !same_preorder(cone.apex.omega(), &self.omega) {
            return Err(Error::PreorderMismatch("cone over another preorder".to_string()));
        }
        if !cone.is_quasi_homologous() {
            return Err(Error::InvalidInput(
                "chromology cones need identity node maps".to_string(),
            ));
        }
        self.cones.entry(cone.apex.n1()).or_default().push(cone);
        Ok(())
    }

    /// The ambient pre-order.
    pub fn omega(&self) -> &Arc<Preorder> {
        &self.omega
    }

    /// Cones with apex domain `n`.
    pub fn cones_at(&self, n: usize) -> &[SegCone] {
        self.cones.get(&n).map_or(&[], Vec::as_slice)
    }

    /// Every cone, by increasing domain size.
    pub fn cones(&self) -> impl Iterator<Item = &SegCone> {
        self.cones.values().flatten()
    }
}

/// A covariant functor from segments to finite sets, queried on demand.
pub trait SetFunctor {
    /// Cardinality of the image of `s`.
    ///
    /// # Errors
    ///
    /// Implementations report missing data or resource limits.
    fn object_size(&self, s: &Segment) -> Result<usize>;

    /// The image of `m` as an index table.
    ///
    /// # Errors
    ///
    /// Implementations report missing data or resource limits.
    fn arrow(&self, m: &SegmentMorphism) -> Result<Vec<usize>>;

    /// A classification of the limit adjoint of the image of `c` known
    /// without materializing it, if any.
    fn structural(&self, _c: &SegCone) -> Option<Classification> {
        None
    }
}

/// A functor given by explicit tables.
#[derive(Debug, Clone, Default)]
pub struct TableFunctor {
    objects: BTreeMap<Segment, usize>,
    arrows: BTreeMap<(Segment, Segment, Vec<usize>), Vec<usize>>,
}

impl TableFunctor {
    /// The functor with no data.
    pub fn new() -> Self {
        Self::default()
    }

    /// Records the image size of a segment.
    pub fn set_object(&mut self, s: Segment, size: usize) {
        self.objects.insert(s, size);
    }

    /// Records the image of a morphism.
    pub fn set_arrow(&mut self, m: &SegmentMorphism, map: Vec<usize>) {
        self.arrows
            .insert((m.src().clone(), m.dst().clone(), m.f1().to_vec()), map);
    }
}

impl SetFunctor for TableFunctor {
    fn object_size(&self, s: &Segment) -> Result<usize> {
        self.objects
            .get(s)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("no image recorded for {s}")))
    }

    fn arrow(&self, m: &SegmentMorphism) -> Result<Vec<usize>> {
        self.arrows
            .get(&(m.src().clone(), m.dst().clone(), m.f1().to_vec()))
            .cloned()
            .ok_or_else(|| Error::InvalidInput(format!("no image recorded for {} -> {}", m.src(), m.dst())))
    }
}

/// Words on truncations at a fixed level, indexed lexicographically.
#[derive(Debug, Clone)]
pub struct EnvironmentFunctor {
    alphabet: PointedAlphabet,
    level: usize,
    cap: u128,
}

impl EnvironmentFunctor {
    /// Words over `alphabet` at `level`, materializing at most `cap` words
    /// per segment.
    pub fn new(alphabet: PointedAlphabet, level: usize, cap: u128) -> Self {
        Self { alphabet, level, cap }
    }

    fn size_of(&self, s: &Segment) -> Result<u128> {
        let n = truncate(s, self.level)?.len();
        Ok((self.alphabet.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX))
    }

    fn within_cap(&self, s: &Segment) -> Result<usize> {
        let size = self.size_of(s)?;
        if size > self.cap {
            return Err(Error::ResourceCap {
                what: format!("words on {s}"),
                needed: size,
                cap: self.cap,
            });
        }
        Ok(size as usize)
    }
}

impl SetFunctor for EnvironmentFunctor {
    fn object_size(&self, s: &Segment) -> Result<usize> {
        self.within_cap(s)
    }

    fn arrow(&self, m: &SegmentMorphism) -> Result<Vec<usize>> {
        let size = self.within_cap(m.src())?;
        self.within_cap(m.dst())?;
        let pointed = truncate_morphism(m, self.level)?;
        let radix = self.alphabet.len();
        let eps = self.alphabet.basepoint() as usize;
        let n_src = pointed.cod().len();
        let sources: Vec<Option<usize>> = pointed
            .mapping()
            .iter()
            .map(|p| match p {
                Pointed::At(i) => pointed.cod().rank(*i),
                Pointed::Star => None,
            })
            .collect();
        let mut out = Vec::with_capacity(size);
        let mut digits = alloc::vec![0usize; n_src];
        for x in 0..size {
            let mut rest = x;
            for d in digits.iter_mut().rev() {
                *d = rest % radix;
                rest /= radix;
            }
            let y = sources
                .iter()
                .fold(0usize, |acc, s| acc * radix + s.map_or(eps, |r| digits[r]));
            out.push(y);
        }
        Ok(out)
    }

    fn structural(&self, c: &SegCone) -> Option<Classification> {
        if self.alphabet.len() < 2 || !c.is_quasi_homologous() {
            return None;
        }
        let arrow = canonical_arrow(c, self.level).ok()?.classify();
        Some(Classification::from_flags(arrow.is_surjective(), arrow.is_injective()))
    }
}

/// Which class of limit adjoints a pedigrad must produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PedigradMode {
    /// Bijective limit adjoints.
    Bijective,
    /// Surjective limit adjoints.
    Surjective,
}

/// Outcome of checking one cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeReport {
    /// Classification of the limit adjoint.
    pub classification: Classification,
    /// Whether the classification meets the mode.
    pub passed: bool,
    /// Whether the result came from the structural shortcut.
    pub structural: bool,
}

/// Outcome of checking a functor against a chromology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PedigradReport {
    /// One report per cone in chromology order.
    pub cones: Vec<ConeReport>,
}

impl PedigradReport {
    /// Whether every cone passed.
    pub fn passed(&self) -> bool {
        self.cones.iter().all(|c| c.passed)
    }
}

/// Classifies the limit adjoint of the image of `c` under `f`.
///
/// Falls back to [`SetFunctor::structural`] when materializing fails on a
/// resource cap.
///
/// # Errors
///
/// Propagates functor errors other than resource caps with no fallback.
pub fn check_cone<F: SetFunctor + ?Sized>(
    f: &F,
    c: &SegCone,
    mode: PedigradMode,
    opts: &LimitOptions,
) -> Result<ConeReport> {
    let report = |classification: Classification, structural| {
        let passed = match mode {
            PedigradMode::Bijective => classification == Classification::Bijective,
            PedigradMode::Surjective => classification.is_surjective(),
        };
        ConeReport {
            classification,
            passed,
            structural,
        }
    };
    match materialized(f, c, opts) {
        Ok(cls) => Ok(report(cls, false)),
        Err(e @ Error::ResourceCap { .. }) => match f.structural(c) {
            Some(cls) => Ok(report(cls, true)),
            None => Err(e),
        },
        Err(e) => Err(e),
    }
}

fn materialized<F: SetFunctor + ?Sized>(f: &F, c: &SegCone, opts: &LimitOptions) -> Result<Classification> {
    let apex = f.object_size(&c.apex)?;
    let sizes = c.nodes.iter().map(|n| f.object_size(n)).collect::<Result<Vec<_>>>()?;
    let edges = c
        .edges
        .iter()
        .map(|e| {
            Ok(Edge {
                src: e.src,
                dst: e.dst,
                map: f.arrow(&e.morphism)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let legs = c.legs.iter().map(|l| f.arrow(l)).collect::<Result<Vec<_>>>()?;
    let lim = limit_of(&sizes, &edges, opts)?;
    let adjoint = limit_adjoint(&sizes, &edges, &lim, apex, &legs)?;
    Ok(classify(&adjoint, lim.len()))
}

/// Checks every cone of a chromology.
///
/// # Errors
///
/// Propagates [`check_cone`] errors.
pub fn verify_pedigrad<F: SetFunctor + ?Sized>(
    f: &F,
    chrom: &Chromology,
    mode: PedigradMode,
    opts: &LimitOptions,
) -> Result<PedigradReport> {
    let cones = chrom
        .cones()
        .map(|c| check_cone(f, c, mode, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(PedigradReport { cones })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preorder::chain_preorder;
    use alloc::vec;

    fn seg(o: &Arc<Preorder>, s: &str) -> Segment {
        Segment::parse(o, s).unwrap()
    }

    fn three() -> Arc<Preorder> {
        Arc::new(chain_preorder(3))
    }

    fn first_cone(o: &Arc<Preorder>) -> SegCone {
        let nodes = vec![
            seg(o, "(000)(11)(111)(0000)"),
            seg(o, "(000)(11)(000)(2222)"),
            seg(o, "(222)(11)(000)(0000)"),
            seg(o, "(000)(11)(000)(0000)"),
        ];
        SegCone::quasi_homologous(seg(o, "(222)(11)(222)(2222)"), nodes, &[(0, 3), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn first_cone_classes() {
        let o = three();
        let c = first_cone(&o);
        let a1 = canonical_arrow(&c, 1).unwrap();
        assert_eq!(a1.colimit.len(), 12);
        assert_eq!(a1.classify(), Classification::Bijective);
        let a2 = canonical_arrow(&c, 2).unwrap();
        assert_eq!(a2.map, vec![8, 9, 10, 11, 0, 1, 2]);
        assert_eq!(a2.classify(), Classification::InjectiveOnly);
    }

    #[test]
    fn single_arrow_cone() {
        let o = three();
        let c = SegCone::quasi_homologous(
            seg(&o, "(1)(11)(11)(11)(1)(111)(1)"),
            vec![seg(&o, "(000)(11)(000)(1111)")],
            &[],
        )
        .unwrap();
        assert!(is_exactly_distributive(&c, 0).unwrap());
        assert!(!is_exactly_distributive(&c, 1).unwrap());
        assert!(is_injective(&c, 1).unwrap());
    }

    #[test]
    fn broken_triangle_is_rejected() {
        let o = three();
        let apex = seg(&o, "(22)");
        let node = seg(&o, "(11)");
        let leg = crate::segments::quasi_homologous_morphism(&apex, &node)
            .unwrap()
            .unwrap();
        let e = ConeEdge {
            src: 0,
            dst: 0,
            morphism: SegmentMorphism::identity(&node),
        };
        assert!(SegCone::new(apex.clone(), vec![node.clone()], vec![e], vec![leg]).is_ok());
        let bigger = seg(&o, "(11)(0)");
        assert!(SegCone::quasi_homologous(apex, vec![bigger], &[]).is_err());
    }

    #[test]
    fn environment_images_follow_the_theorems() {
        let o = three();
        let c = first_cone(&o);
        let opts = LimitOptions::default();
        for b in 0..3 {
            let f = EnvironmentFunctor::new(PointedAlphabet::letters(1), b, 1 << 16);
            let r = check_cone(&f, &c, PedigradMode::Bijective, &opts).unwrap();
            let arrow = canonical_arrow(&c, b).unwrap().classify();
            assert_eq!(r.classification.is_injective(), arrow.is_surjective());
            assert_eq!(r.classification.is_surjective(), arrow.is_injective());
            assert!(!r.structural);
        }
        let big = EnvironmentFunctor::new(PointedAlphabet::dna(), 1, 1000);
        let r = check_cone(&big, &c, PedigradMode::Bijective, &opts).unwrap();
        assert!(r.structural && r.passed);
    }

    #[test]
    fn identity_cone_is_bijective_for_tables() {
        let o = three();
        let s = seg(&o, "(11)");
        let c = SegCone::quasi_homologous(s.clone(), vec![s.clone()], &[]).unwrap();
        let mut t = TableFunctor::new();
        t.set_object(s.clone(), 3);
        t.set_arrow(&SegmentMorphism::identity(&s), vec![0, 1, 2]);
        let r = check_cone(&t, &c, PedigradMode::Bijective, &LimitOptions::default()).unwrap();
        assert!(r.passed);
        let mut chrom = Chromology::new(o);
        chrom.add(c).unwrap();
        assert!(
            verify_pedigrad(&t, &chrom, PedigradMode::Bijective, &LimitOptions::default())
                .unwrap()
                .passed()
        );
    }

    #[test]
    fn refined_topology_cone() {
        let o = three();
        let nodes = vec![
            seg(&o, "(000)(11)(111)(0000)"),
            seg(&o, "(000)(11)(000)(2222)"),
            seg(&o, "(222)(11)(000)(0000)"),
            seg(&o, "(000)(11)(000)(0000)"),
        ];
        let apex = seg(&o, "(2)(2)(2)(11)(22)(2)(22)(22)");
        let c = SegCone::quasi_homologous(apex, nodes, &[(0, 3), (1, 3), (2, 3)]).unwrap();
        assert!(is_exactly_distributive(&c, 1).unwrap());
        assert!(!is_exactly_distributive(&c, 2).unwrap());
        assert!(is_injective(&c, 2).unwrap());
    }
}
