//! Truncations of segments and their pointed action on morphisms.
//!
//! `Tr_b(s)` keeps the nodes whose patch color lies above the level `b`.
//! Positions keep their original 0-based labels in the ambient segment.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::segments::{Segment, SegmentMorphism};

/// The nodes of a segment whose color is at least `level`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruncationSet {
    segment: Segment,
    level: usize,
    indices: Vec<usize>,
}

impl TruncationSet {
    /// The truncated segment.
    pub fn segment(&self) -> &Segment {
        &self.segment
    }

    /// The level `b`.
    pub fn level(&self) -> usize {
        self.level
    }

    /// Sorted 0-based node positions.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Sorted 1-based node positions.
    pub fn positions(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }

    /// Number of positions.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    /// Whether no position survives the truncation.
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Whether node `i` survives the truncation.
    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Rank of node `i` inside the truncation.
    pub fn rank(&self, i: usize) -> Option<usize> {
        self.indices.binary_search(&i).ok()
    }
}

/// `Tr_b(s)`: the nodes `i` with `b <= color(topology(i))`.
///
/// # Errors
///
/// Returns [`Error::UnknownElement`] when `b` is outside the ambient order.
pub fn truncate(s: &Segment, b: usize) -> Result<TruncationSet> {
    let omega = s.omega();
    if b >= omega.len() {
        return Err(Error::UnknownElement(format!("level index {b}")));
    }
    let indices = (0..s.n1()).filter(|&i| omega.leq(b, s.node_color(i))).collect();
    Ok(TruncationSet {
        segment: s.clone(),
        level: b,
        indices,
    })
}

/// An element of a truncation extended by a formal basepoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pointed {
    /// The basepoint `★`.
    Star,
    /// A node position.
    At(usize),
}

/// The pointed map `Tr_b(dst) + ★ -> Tr_b(src) + ★` of a morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedIndexMap {
    dom: TruncationSet,
    cod: TruncationSet,
    mapping: Vec<Pointed>,
}

impl PointedIndexMap {
    /// Truncation of the morphism target.
    pub fn dom(&self) -> &TruncationSet {
        &self.dom
    }

    /// Truncation of the morphism source.
    pub fn cod(&self) -> &TruncationSet {
        &self.cod
    }

    /// Image of each position of [`Self::dom`], in order.
    pub fn mapping(&self) -> &[Pointed] {
        &self.mapping
    }

    /// Image of a pointed element.
    ///
    /// # Errors
    ///
    /// Returns [`Error::EndpointMismatch`] for positions outside the domain.
    pub fn apply(&self, p: Pointed) -> Result<Pointed> {
        match p {
            Pointed::Star => Ok(Pointed::Star),
            Pointed::At(j) => self
                .dom
                .rank(j)
                .map(|r| self.mapping[r])
                .ok_or_else(|| Error::EndpointMismatch(format!("position {} not in domain", j + 1))),
        }
    }

    /// The composite `self ∘ first` of pointed maps.
    ///
    /// # Errors
    ///
    /// Returns [`Error::EndpointMismatch`] when the truncations do not chain.
    pub fn after(&self, first: &PointedIndexMap) -> Result<Self> {
        if first.cod != self.dom {
            return Err(Error::EndpointMismatch("pointed maps do not compose".into()));
        }
        let mapping = first
            .mapping
            .iter()
            .map(|&p| self.apply(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            mapping,
        })
    }
}

/// The pointed map of `m` at level `b`: `j` goes to `i` when `j = f1(i)`,
/// every other position goes to `★`.
///
/// # Errors
///
/// Returns [`Error::UnknownElement`] when `b` is outside the ambient order.
pub fn truncate_morphism(m: &SegmentMorphism, b: usize) -> Result<PointedIndexMap> {
    let dom = truncate(m.dst(), b)?;
    let cod = truncate(m.src(), b)?;
    let f1 = m.f1();
    let mapping = dom
        .indices
        .iter()
        .map(|&j| match f1.binary_search(&j) {
            Ok(i) if cod.contains(i) => Pointed::At(i),
            _ => Pointed::Star,
        })
        .collect();
    Ok(PointedIndexMap { dom, cod, mapping })
}
