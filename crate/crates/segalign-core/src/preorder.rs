//! Finite pre-ordered sets, order-preserving maps and finite products.
//!
//! A [`Preorder`] stores its relation transitively and reflexively closed so
//! that every comparison is a table lookup. Elements are addressed by their
//! index in construction order and carry an opaque string label.
//!
//! # Example
//!
//! ```
//! use segalign_core::preorder::{boolean_preorder, product};
//! use std::sync::Arc;
//!
//! let bool2 = Arc::new(boolean_preorder());
//! let (omega, projections) = product(&[bool2.clone(), bool2.clone(), bool2.clone(), bool2]).unwrap();
//! let x = omega.element("[1010]").unwrap();
//! let y = omega.element("[1110]").unwrap();
//! assert!(omega.leq(x, y));
//! assert_eq!(omega.len(), 16);
//! assert_eq!(projections[1].cod().label(projections[1].apply(x)), "0");
//! ```

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A finite set with a reflexive and transitive relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Preorder {
    elements: Vec<String>,
    leq: Vec<bool>,
    factors: Vec<usize>,
}

impl Preorder {
    /// Builds a pre-order from labels and a square relation table.
    ///
    /// The table is closed under reflexivity and transitivity before it is
    /// stored.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidPreorder`] on duplicate labels or a table that
    /// is not square.
    pub fn new(elements: Vec<String>, relation: Vec<Vec<bool>>) -> Result<Self> {
        let n = elements.len();
        for (i, a) in elements.iter().enumerate() {
            if elements[..i].contains(a) {
                return Err(Error::InvalidPreorder(format!("duplicate element `{a}`")));
            }
        }
        if relation.len() != n || relation.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidPreorder(format!("relation must be a {n}x{n} table")));
        }
        let mut leq = vec![false; n * n];
        for (i, row) in relation.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                leq[i * n + j] = v || i == j;
            }
        }
        close_transitively(&mut leq, n);
        Ok(Self {
            elements,
            leq,
            factors: Vec::new(),
        })
    }

    /// Builds a pre-order from labels and generating pairs `x <= y`.
    ///
    /// # Errors
    ///
    /// Returns [`Error::UnknownElement`] when a pair names a missing label and
    /// [`Error::InvalidPreorder`] on duplicate labels.
    pub fn from_pairs(elements: &[&str], pairs: &[(&str, &str)]) -> Result<Self> {
        let labels: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
        let n = labels.len();
        let mut relation = vec![vec![false; n]; n];
        let find = |s: &str| {
            labels
                .iter()
                .position(|l| l == s)
                .ok_or_else(|| Error::UnknownElement(s.to_string()))
        };
        for (a, b) in pairs {
            relation[find(a)?][find(b)?] = true;
        }
        Self::new(labels, relation)
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Whether the carrier is empty.
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Labels in construction order.
    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    /// Label of element `x`.
    pub fn label(&self, x: usize) -> &str {
        &self.elements[x]
    }

    /// Index of the element with the given label, if any.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|l| l == label)
    }

    /// Index of the element with the given label.
    ///
    /// # Errors
    ///
    /// Returns [`Error::UnknownElement`] when no element carries the label.
    pub fn element(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    /// Whether `x <= y` holds.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    /// The closed relation as a square boolean table.
    pub fn relation(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        (0..n).map(|i| (0..n).map(|j| self.leq(i, j)).collect()).collect()
    }

    /// Factor sizes when this pre-order was built by [`product`], else empty.
    pub fn factor_sizes(&self) -> &[usize] {
        &self.factors
    }

    /// Index of the product element with the given component indices.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidPreorder`] when this pre-order is not a product
    /// or the components are out of range.
    pub fn tuple(&self, components: &[usize]) -> Result<usize> {
        if self.factors.is_empty() || components.len() != self.factors.len() {
            return Err(Error::InvalidPreorder(
                "tuple lookup requires a product of matching arity".to_string(),
            ));
        }
        let mut index = 0;
        for (&c, &size) in components.iter().zip(&self.factors) {
            if c >= size {
                return Err(Error::InvalidPreorder(format!("component {c} out of range {size}")));
            }
            index = index * size + c;
        }
        Ok(index)
    }

    /// Component indices of a product element.
    pub fn components(&self, x: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        let mut rest = x;
        for (slot, &size) in out.iter_mut().zip(&self.factors).rev() {
            *slot = rest % size;
            rest /= size;
        }
        out
    }

    /// Whether the stored relation is reflexive.
    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|x| self.leq(x, x))
    }

    /// Whether the stored relation is transitive.
    pub fn is_transitive(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| (0..n).all(|y| !self.leq(x, y) || (0..n).all(|z| !self.leq(y, z) || self.leq(x, z))))
    }
}

fn close_transitively(leq: &mut [bool], n: usize) {
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
}

/// Whether two shared pre-orders are the same value.
pub fn same_preorder(a: &Arc<Preorder>, b: &Arc<Preorder>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// The Boolean pre-order `{0 <= 1}`.
pub fn boolean_preorder() -> Preorder {
    chain_preorder(2)
}

/// The chain `{0 <= 1 <= ... <= n-1}` with decimal labels.
pub fn chain_preorder(n: usize) -> Preorder {
    let elements = (0..n).map(|i| i.to_string()).collect();
    let relation = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
    Preorder::new(elements, relation).expect("chain relation is well formed")
}

/// Cartesian product of pre-orders with the componentwise order.
///
/// Elements are tuples enumerated with the first factor most significant and
/// labelled `[xy...]` when every factor label is one character long, else
/// `[x,y,...]`. The second value holds one projection per factor.
///
/// # Errors
///
/// Returns [`Error::InvalidPreorder`] when `factors` is empty.
pub fn product(factors: &[Arc<Preorder>]) -> Result<(Arc<Preorder>, Vec<MonotoneMap>)> {
    if factors.is_empty() {
        return Err(Error::InvalidPreorder("product needs at least one factor".to_string()));
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let total: usize = sizes.iter().product();
    let compact = factors
        .iter()
        .all(|f| f.elements().iter().all(|l| l.chars().count() == 1));
    let mut shell = Preorder {
        elements: Vec::new(),
        leq: Vec::new(),
        factors: sizes.clone(),
    };
    let tuples: Vec<Vec<usize>> = (0..total).map(|x| shell.components(x)).collect();
    shell.elements = tuples
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t.iter().zip(factors).map(|(&c, f)| f.label(c)).collect();
            if compact {
                format!("[{}]", parts.concat())
            } else {
                format!("[{}]", parts.join(","))
            }
        })
        .collect();
    shell.leq = vec![false; total * total];
    for (i, a) in tuples.iter().enumerate() {
        for (j, b) in tuples.iter().enumerate() {
            shell.leq[i * total + j] = a.iter().zip(b).zip(factors).all(|((&x, &y), f)| f.leq(x, y));
        }
    }
    let omega = Arc::new(shell);
    let projections = factors
        .iter()
        .enumerate()
        .map(|(k, f)| MonotoneMap {
            dom: omega.clone(),
            cod: f.clone(),
            map: tuples.iter().map(|t| t[k]).collect(),
        })
        .collect();
    Ok((omega, projections))
}

/// A total function between the carriers of two pre-orders.
///
/// Values built with [`MonotoneMap::new`] are order-preserving; values built
/// with [`MonotoneMap::from_table`] are only known to be total and can be
/// inspected with [`validate_monotone`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonotoneMap {
    dom: Arc<Preorder>,
    cod: Arc<Preorder>,
    map: Vec<usize>,
}

impl MonotoneMap {
    /// Builds an order-preserving map from an index table.
    ///
    /// # Errors
    ///
    /// Returns [`Error::NotTotal`] for a malformed table and
    /// [`Error::NotMonotone`] when the order is not preserved.
    pub fn new(dom: Arc<Preorder>, cod: Arc<Preorder>, map: Vec<usize>) -> Result<Self> {
        let m = Self::from_table(dom, cod, map)?;
        let violations = validate_monotone(&m);
        if violations.is_empty() {
            Ok(m)
        } else {
            Err(Error::NotMonotone { violations })
        }
    }

    /// Builds a total map from an index table without checking monotonicity.
    ///
    /// # Errors
    ///
    /// Returns [`Error::NotTotal`] when the table length differs from the
    /// domain size or an entry leaves the codomain.
    pub fn from_table(dom: Arc<Preorder>, cod: Arc<Preorder>, map: Vec<usize>) -> Result<Self> {
        if map.len() != dom.len() {
            return Err(Error::NotTotal(format!(
                "table has {} entries for a domain of {}",
                map.len(),
                dom.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= cod.len()) {
            return Err(Error::NotTotal(format!("image {bad} outside the codomain")));
        }
        Ok(Self { dom, cod, map })
    }

    /// Builds a total map from label pairs without checking monotonicity.
    ///
    /// # Errors
    ///
    /// Returns [`Error::UnknownElement`] for unknown labels and
    /// [`Error::NotTotal`] when some domain element has no image.
    pub fn from_labels(dom: Arc<Preorder>, cod: Arc<Preorder>, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut map = vec![usize::MAX; dom.len()];
        for (x, y) in pairs {
            map[dom.element(x)?] = cod.element(y)?;
        }
        if let Some(missing) = map.iter().position(|&y| y == usize::MAX) {
            return Err(Error::NotTotal(format!("no image for `{}`", dom.label(missing))));
        }
        Self::from_table(dom, cod, map)
    }

    /// The identity map of a pre-order.
    pub fn identity(p: Arc<Preorder>) -> Self {
        let map = (0..p.len()).collect();
        Self {
            dom: p.clone(),
            cod: p,
            map,
        }
    }

    /// The composite `self ∘ first`.
    ///
    /// # Errors
    ///
    /// Returns [`Error::EndpointMismatch`] when `first.cod()` differs from
    /// `self.dom()`.
    pub fn after(&self, first: &MonotoneMap) -> Result<Self> {
        if !same_preorder(&first.cod, &self.dom) {
            return Err(Error::EndpointMismatch(
                "codomain of the first map differs from the domain of the second".to_string(),
            ));
        }
        Ok(Self {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            map: first.map.iter().map(|&x| self.map[x]).collect(),
        })
    }

    /// Image of element `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// Domain pre-order.
    pub fn dom(&self) -> &Arc<Preorder> {
        &self.dom
    }

    /// Codomain pre-order.
    pub fn cod(&self) -> &Arc<Preorder> {
        &self.cod
    }

    /// The index table.
    pub fn table(&self) -> &[usize] {
        &self.map
    }
}

/// Pairs `x <= y` of the domain whose images are not ordered, by label.
///
/// An empty result means the map is order-preserving.
pub fn validate_monotone(m: &MonotoneMap) -> Vec<(String, String)> {
    let n = m.dom.len();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if m.dom.leq(x, y) && !m.cod.leq(m.map[x], m.map[y]) {
                out.push((m.dom.label(x).to_string(), m.dom.label(y).to_string()));
            }
        }
    }
    out
}
