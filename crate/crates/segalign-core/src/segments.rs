//! Segments over a finite pre-order and their morphisms.
//!
//! A [`Segment`] is a finite interval of nodes grouped into consecutive
//! patches by a surjective monotone topology, each patch carrying a color
//! from the ambient pre-order. Positions and patches are 0-based internally
//! and rendered 1-based only by display helpers.
//!
//! # Example
//!
//! ```
//! use segalign_core::preorder::{boolean_preorder, product};
//! use segalign_core::segments::{enumerate_morphisms, Segment};
//! use std::sync::Arc;
//!
//! let b = Arc::new(boolean_preorder());
//! let (omega, _) = product(&[b.clone(), b.clone(), b.clone(), b]).unwrap();
//! let src = Segment::parse(&omega, "(!8,[1100])").unwrap();
//! let dst = Segment::parse(&omega, "(!9,[1100])").unwrap();
//! assert_eq!(enumerate_morphisms(&src, &dst).unwrap().len(), 9);
//! ```

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};
use core::ops::Range;

use crate::error::{Error, Result};
use crate::preorder::{same_preorder, MonotoneMap, Preorder};

/// A colored, bracketed finite interval `[n1] -> [n0]`.
///
/// Equality, ordering and hashing compare the topology and the colors; the
/// ambient pre-order is checked by the operations that combine segments.
#[derive(Clone)]
pub struct Segment {
    omega: Arc<Preorder>,
    topology: Vec<usize>,
    colors: Vec<usize>,
}

impl Segment {
    /// Builds a segment from a patch index per node and a color per patch.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidSegment`] when the topology is not monotone
    /// and surjective onto the patches or a color is outside `omega`.
    pub fn new(omega: Arc<Preorder>, topology: Vec<usize>, colors: Vec<usize>) -> Result<Self> {
        let n0 = colors.len();
        if topology.is_empty() != (n0 == 0) {
            return Err(Error::InvalidSegment(
                "an empty domain must have no patches and conversely".to_string(),
            ));
        }
        let mut expected = 0;
        for (i, &p) in topology.iter().enumerate() {
            let ok = if i == 0 {
                p == 0
            } else {
                p == expected || p == expected + 1
            };
            if !ok {
                return Err(Error::InvalidSegment(format!(
                    "topology is not monotone and surjective at node {}",
                    i + 1
                )));
            }
            expected = p;
        }
        if !topology.is_empty() && expected + 1 != n0 {
            return Err(Error::InvalidSegment(format!(
                "topology reaches {} patches but {} colors were given",
                expected + 1,
                n0
            )));
        }
        if let Some(&c) = colors.iter().find(|&&c| c >= omega.len()) {
            return Err(Error::InvalidSegment(format!("color index {c} outside the preorder")));
        }
        Ok(Self {
            omega,
            topology,
            colors,
        })
    }

    /// Builds a segment from `(patch length, color)` pairs.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidSegment`] for empty patches or bad colors.
    pub fn from_patches(omega: Arc<Preorder>, patches: &[(usize, usize)]) -> Result<Self> {
        let mut topology = Vec::new();
        let mut colors = Vec::new();
        for (p, &(len, color)) in patches.iter().enumerate() {
            if len == 0 {
                return Err(Error::InvalidSegment(format!("patch {} is empty", p + 1)));
            }
            topology.extend(core::iter::repeat_n(p, len));
            colors.push(color);
        }
        Self::new(omega, topology, colors)
    }

    /// The single-patch segment `(!n, b)`; the empty segment when `n = 0`.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidSegment`] when `b` is outside `omega`.
    pub fn trivial(omega: Arc<Preorder>, n: usize, b: usize) -> Result<Self> {
        if n == 0 {
            if b >= omega.len() {
                return Err(Error::InvalidSegment(format!("color index {b} outside the preorder")));
            }
            return Self::new(omega, Vec::new(), Vec::new());
        }
        Self::new(omega, vec![0; n], vec![b])
    }

    /// Parses the compact form `(!n,label)` or the bracket form.
    ///
    /// The bracket form is a sequence of parenthesised patches whose nodes
    /// are `•` (label `1`), `◦` (label `0`), a one-character label, or a
    /// bracketed label such as `[1010]`. All nodes of a patch must share the
    /// same label. `∅` denotes the empty segment.
    ///
    /// # Errors
    ///
    /// Returns [`Error::Parse`] for malformed text and the errors of
    /// [`Segment::new`] for invalid results.
    pub fn parse(omega: &Arc<Preorder>, text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "∅" || t == "()" {
            return Self::new(omega.clone(), Vec::new(), Vec::new());
        }
        if let Some(body) = t.strip_prefix("(!").and_then(|r| r.strip_suffix(')')) {
            let (n, label) = body
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected `(!n,color)` in `{t}`")))?;
            let n = n.trim().trim_start_matches("_[").trim_start_matches('[');
            let n = n.trim_end_matches(']').trim();
            let n: usize = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad domain size in `{t}`")))?;
            let b = omega.element(label.trim())?;
            return Self::trivial(omega.clone(), n, b);
        }
        parse_brackets(omega, t)
    }

    /// Domain size `n1`.
    pub fn n1(&self) -> usize {
        self.topology.len()
    }

    /// Number of patches `n0`.
    pub fn n0(&self) -> usize {
        self.colors.len()
    }

    /// Ambient pre-order.
    pub fn omega(&self) -> &Arc<Preorder> {
        &self.omega
    }

    /// Patch index of every node.
    pub fn topology(&self) -> &[usize] {
        &self.topology
    }

    /// Color of every patch.
    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    /// Patch containing node `i`.
    pub fn patch_of(&self, i: usize) -> usize {
        self.topology[i]
    }

    /// Color of the patch containing node `i`.
    pub fn node_color(&self, i: usize) -> usize {
        self.colors[self.topology[i]]
    }

    /// Node range of patch `p`.
    pub fn patch_range(&self, p: usize) -> Range<usize> {
        let start = self.topology.partition_point(|&q| q < p);
        let end = self.topology.partition_point(|&q| q <= p);
        start..end
    }

    /// Length of every patch.
    pub fn patch_sizes(&self) -> Vec<usize> {
        (0..self.n0()).map(|p| self.patch_range(p).len()).collect()
    }

    /// The compact form `(!n,label)` for single-patch segments.
    pub fn compact(&self) -> Option<String> {
        match self.n0() {
            1 => Some(format!("(!{},{})", self.n1(), self.omega.label(self.colors[0]))),
            _ => None,
        }
    }

    /// The same segment recolored by label into another pre-order.
    ///
    /// # Errors
    ///
    /// Returns [`Error::UnknownElement`] when a color label is missing from
    /// `target`.
    pub fn rebase(&self, target: &Arc<Preorder>) -> Result<Self> {
        let colors = self
            .colors
            .iter()
            .map(|&c| target.element(self.omega.label(c)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(target.clone(), self.topology.clone(), colors)
    }

    fn key(&self) -> (&[usize], &[usize]) {
        (&self.topology, &self.colors)
    }
}

fn parse_brackets(omega: &Arc<Preorder>, text: &str) -> Result<Segment> {
    let mut patches: Vec<(usize, usize)> = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '(' => {
                let mut label: Option<String> = None;
                let mut len = 0;
                loop {
                    let c = chars
                        .next()
                        .ok_or_else(|| Error::Parse(format!("unclosed patch in `{text}`")))?;
                    let node = match c {
                        ')' => break,
                        ' ' | ',' => continue,
                        '•' => "1".to_string(),
                        '◦' => "0".to_string(),
                        '[' => {
                            let mut s = String::from("[");
                            for d in chars.by_ref() {
                                s.push(d);
                                if d == ']' {
                                    break;
                                }
                            }
                            s
                        }
                        other => other.to_string(),
                    };
                    match &label {
                        Some(l) if *l != node => {
                            return Err(Error::Parse(format!(
                                "patch mixes colors `{l}` and `{node}` in `{text}`"
                            )))
                        }
                        _ => label = Some(node),
                    }
                    len += 1;
                }
                let label = label.ok_or_else(|| Error::Parse(format!("empty patch in `{text}`")))?;
                patches.push((len, omega.element(&label)?));
            }
            ' ' => {}
            other => return Err(Error::Parse(format!("unexpected `{other}` in segment `{text}`"))),
        }
    }
    Segment::from_patches(omega.clone(), &patches)
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl Hash for Segment {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Segment({self})")
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n1() == 0 {
            return f.write_str("∅");
        }
        let boolean = self.omega.elements() == ["0", "1"];
        for p in 0..self.n0() {
            f.write_str("(")?;
            let label = self.omega.label(self.colors[p]);
            let glyph = match (boolean, label) {
                (true, "1") => "•",
                (true, _) => "◦",
                (false, l) => l,
            };
            for _ in self.patch_range(p) {
                f.write_str(glyph)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A morphism of segments: an injective monotone node map with the patch map
/// it induces, subject to the commuting square and color decrease.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SegmentMorphism {
    src: Segment,
    dst: Segment,
    f1: Vec<usize>,
    f0: Vec<usize>,
}

impl SegmentMorphism {
    /// Builds the morphism with node map `f1`, deriving the patch map.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidMorphism`] when no patch map makes the square
    /// commute with decreasing colors, and [`Error::PreorderMismatch`] when
    /// the segments live over different pre-orders.
    pub fn new(src: Segment, dst: Segment, f1: Vec<usize>) -> Result<Self> {
        check_same_omega(&src, &dst)?;
        let f0 = induce_f0(&f1, &src, &dst)
            .ok_or_else(|| Error::InvalidMorphism(format!("node map {f1:?} induces no valid patch map")))?;
        Ok(Self { src, dst, f1, f0 })
    }

    /// Builds a morphism from both maps and checks every invariant.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidMorphism`] naming the first broken invariant.
    pub fn from_parts(src: Segment, dst: Segment, f1: Vec<usize>, f0: Vec<usize>) -> Result<Self> {
        check_same_omega(&src, &dst)?;
        if f0.len() != src.n0() || f0.iter().any(|&q| q >= dst.n0()) {
            return Err(Error::InvalidMorphism("patch map is not total".to_string()));
        }
        if f0.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidMorphism("patch map is not monotone".to_string()));
        }
        match induce_f0(&f1, &src, &dst) {
            Some(g) if g == f0 => Ok(Self { src, dst, f1, f0 }),
            Some(_) => Err(Error::InvalidMorphism(
                "patch map does not commute with the topologies".to_string(),
            )),
            None => Err(Error::InvalidMorphism(format!(
                "node map {f1:?} is not an injective monotone map with a valid square"
            ))),
        }
    }

    /// The identity morphism of `s`.
    pub fn identity(s: &Segment) -> Self {
        Self {
            src: s.clone(),
            dst: s.clone(),
            f1: (0..s.n1()).collect(),
            f0: (0..s.n0()).collect(),
        }
    }

    /// The composite `self ∘ first`.
    ///
    /// # Errors
    ///
    /// Returns [`Error::EndpointMismatch`] when `first.dst()` is not
    /// `self.src()`.
    pub fn after(&self, first: &SegmentMorphism) -> Result<Self> {
        if first.dst != self.src {
            return Err(Error::EndpointMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.src, self.dst, first.src, first.dst
            )));
        }
        Ok(Self {
            src: first.src.clone(),
            dst: self.dst.clone(),
            f1: first.f1.iter().map(|&i| self.f1[i]).collect(),
            f0: first.f0.iter().map(|&p| self.f0[p]).collect(),
        })
    }

    /// Source segment.
    pub fn src(&self) -> &Segment {
        &self.src
    }

    /// Target segment.
    pub fn dst(&self) -> &Segment {
        &self.dst
    }

    /// Node map.
    pub fn f1(&self) -> &[usize] {
        &self.f1
    }

    /// Patch map.
    pub fn f0(&self) -> &[usize] {
        &self.f0
    }

    /// Whether the node map is the identity.
    pub fn is_quasi_homologous(&self) -> bool {
        self.src.n1() == self.dst.n1() && self.f1.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Re-checks all four morphism invariants.
    pub fn is_valid(&self) -> bool {
        Self::from_parts(self.src.clone(), self.dst.clone(), self.f1.clone(), self.f0.clone()).is_ok()
    }
}

fn check_same_omega(a: &Segment, b: &Segment) -> Result<()> {
    if same_preorder(&a.omega, &b.omega) {
        Ok(())
    } else {
        Err(Error::PreorderMismatch(format!("{a} and {b}")))
    }
}

/// The patch map induced by a node map, when it exists and is valid.
///
/// Returns `None` unless `f1` is injective and monotone into `dst`, constant
/// patch-wise on `src`, and compatible with the color decrease condition.
pub fn induce_f0(f1: &[usize], src: &Segment, dst: &Segment) -> Option<Vec<usize>> {
    if f1.len() != src.n1() || f1.iter().any(|&j| j >= dst.n1()) {
        return None;
    }
    if f1.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    let mut f0 = vec![usize::MAX; src.n0()];
    for (i, &j) in f1.iter().enumerate() {
        let p = src.topology[i];
        let q = dst.topology[j];
        if f0[p] == usize::MAX {
            f0[p] = q;
        } else if f0[p] != q {
            return None;
        }
    }
    let omega = &src.omega;
    for (p, &q) in f0.iter().enumerate() {
        if !omega.leq(dst.colors[q], src.colors[p]) {
            return None;
        }
    }
    Some(f0)
}

/// Every morphism `src -> dst`, in lexicographic order of node maps.
///
/// # Errors
///
/// Returns [`Error::PreorderMismatch`] for segments over different pre-orders.
pub fn enumerate_morphisms(src: &Segment, dst: &Segment) -> Result<Vec<SegmentMorphism>> {
    check_same_omega(src, dst)?;
    let k = src.n1();
    let n = dst.n1();
    let mut out = Vec::new();
    if k > n {
        return Ok(out);
    }
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        if let Some(f0) = induce_f0(&combo, src, dst) {
            out.push(SegmentMorphism {
                src: src.clone(),
                dst: dst.clone(),
                f1: combo.clone(),
                f0,
            });
        }
        let Some(pos) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
            break;
        };
        combo[pos] += 1;
        for i in pos + 1..k {
            combo[i] = combo[i - 1] + 1;
        }
    }
    Ok(out)
}

/// The morphism with identity node map between quasi-homologous segments.
///
/// # Errors
///
/// Returns [`Error::EndpointMismatch`] when the domains differ.
pub fn quasi_homologous_morphism(src: &Segment, dst: &Segment) -> Result<Option<SegmentMorphism>> {
    check_same_omega(src, dst)?;
    if src.n1() != dst.n1() {
        return Err(Error::EndpointMismatch(format!(
            "{src} and {dst} have different domains"
        )));
    }
    let f1: Vec<usize> = (0..src.n1()).collect();
    Ok(induce_f0(&f1, src, dst).map(|f0| SegmentMorphism {
        src: src.clone(),
        dst: dst.clone(),
        f1,
        f0,
    }))
}

/// Recolors a segment through a monotone map, keeping its topology.
///
/// # Errors
///
/// Returns [`Error::PreorderMismatch`] when `s` is not colored in `f.dom()`.
pub fn push_colors(f: &MonotoneMap, s: &Segment) -> Result<Segment> {
    if !same_preorder(f.dom(), &s.omega) {
        return Err(Error::PreorderMismatch(format!(
            "segment {s} is not colored in the domain of the map"
        )));
    }
    Ok(Segment {
        omega: f.cod().clone(),
        topology: s.topology.clone(),
        colors: s.colors.iter().map(|&c| f.apply(c)).collect(),
    })
}

/// Recolors both ends of a morphism, keeping its node and patch maps.
///
/// # Errors
///
/// Returns [`Error::PreorderMismatch`] as [`push_colors`].
pub fn push_colors_morphism(f: &MonotoneMap, m: &SegmentMorphism) -> Result<SegmentMorphism> {
    Ok(SegmentMorphism {
        src: push_colors(f, &m.src)?,
        dst: push_colors(f, &m.dst)?,
        f1: m.f1.clone(),
        f0: m.f0.clone(),
    })
}

/// Whether two segments have equal topologies.
pub fn is_homologous(a: &Segment, b: &Segment) -> bool {
    a.topology == b.topology
}

/// Whether two segments have equal domains.
pub fn is_quasi_homologous(a: &Segment, b: &Segment) -> bool {
    a.n1() == b.n1()
}
