//! Finite base categories of segments and alignment functors over them.
//!
//! An [`AlignmentFunctor`] assigns to every object of a [`BaseCategory`] a
//! set of aligned tuples, or the whole aligned environment for hub objects,
//! and moves tuples along base morphisms by gap insertion. The pairwise
//! recipe places each optimal pairwise alignment on the single-patch
//! segment whose color activates exactly that pair, and links pairs through
//! hub objects activating a single individual.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::dp_align::PairAlignments;
use crate::environment::{aligned_image, AlignedTuple, AlignmentSpec, PointedAlphabet, Word};
use crate::error::{Error, Result};
use crate::preorder::{same_preorder, Preorder};
use crate::segments::{enumerate_morphisms, push_colors, quasi_homologous_morphism, Segment, SegmentMorphism};

/// A morphism of the base category between two of its objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseMorphism {
    /// Source object.
    pub src: usize,
    /// Target object.
    pub dst: usize,
    /// The underlying segment morphism.
    pub morphism: SegmentMorphism,
}

/// A finite category of segments with explicit morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseCategory {
    objects: Vec<Segment>,
    morphisms: Vec<BaseMorphism>,
    links: Vec<(usize, usize)>,
}

impl BaseCategory {
    /// The union of the full subcategories of quasi-homologous segments
    /// spanned by `objects`, identities included.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidInput`] for duplicate objects and
    /// [`Error::PreorderMismatch`] for mixed pre-orders.
    pub fn full_quasi_homologous(objects: Vec<Segment>) -> Result<Self> {
        for (i, s) in objects.iter().enumerate() {
            if objects[..i].contains(s) {
                return Err(Error::InvalidInput(format!("duplicate base object {s}")));
            }
            if !same_preorder(s.omega(), objects[0].omega()) {
                return Err(Error::PreorderMismatch(format!("base object {s}")));
            }
        }
        let mut morphisms = Vec::new();
        for (a, s) in objects.iter().enumerate() {
            for (b, t) in objects.iter().enumerate() {
                if s.n1() == t.n1() {
                    if let Some(m) = quasi_homologous_morphism(s, t)? {
                        morphisms.push(BaseMorphism {
                            src: a,
                            dst: b,
                            morphism: m,
                        });
                    }
                }
            }
        }
        Ok(Self {
            objects,
            morphisms,
            links: Vec::new(),
        })
    }

    /// Adds every segment morphism from object `src` to object `dst`.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidInput`] for unknown objects.
    pub fn add_links(&mut self, src: usize, dst: usize) -> Result<usize> {
        let (s, t) = self
            .objects
            .get(src)
            .zip(self.objects.get(dst))
            .ok_or_else(|| Error::InvalidInput("link references a missing object".to_string()))?;
        let found = enumerate_morphisms(s, t)?;
        let before = self.morphisms.len();
        for m in found {
            if !self.morphisms.iter().any(|x| x.morphism == m) {
                self.morphisms.push(BaseMorphism { src, dst, morphism: m });
            }
        }
        self.links.push((src, dst));
        Ok(self.morphisms.len() - before)
    }

    /// Objects in order.
    pub fn objects(&self) -> &[Segment] {
        &self.objects
    }

    /// Morphisms in order.
    pub fn morphisms(&self) -> &[BaseMorphism] {
        &self.morphisms
    }

    /// Object pairs joined by [`Self::add_links`].
    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    /// Position of an object.
    pub fn index_of(&self, s: &Segment) -> Option<usize> {
        self.objects.iter().position(|o| o == s)
    }

    /// Morphisms ending at object `dst`.
    pub fn inbound(&self, dst: usize) -> impl Iterator<Item = (usize, &BaseMorphism)> {
        self.morphisms.iter().enumerate().filter(move |(_, m)| m.dst == dst)
    }

    /// Position of a morphism with the given segment morphism.
    pub fn morphism_index(&self, m: &SegmentMorphism) -> Option<usize> {
        self.morphisms.iter().position(|x| &x.morphism == m)
    }

    /// Whether any two objects share at most one morphism.
    pub fn is_preorder_category(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.morphisms.iter().all(|m| seen.insert((m.src, m.dst)))
    }

    /// Problems with identities and closure under composition.
    pub fn check_category(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, s) in self.objects.iter().enumerate() {
            let id = SegmentMorphism::identity(s);
            if !self
                .morphisms
                .iter()
                .any(|m| m.src == i && m.dst == i && m.morphism == id)
            {
                out.push(format!("object {s} has no identity"));
            }
        }
        for f in &self.morphisms {
            for g in self.morphisms.iter().filter(|g| g.src == f.dst) {
                if let Ok(gf) = g.morphism.after(&f.morphism) {
                    if self.morphism_index(&gf).is_none() {
                        out.push(format!(
                            "composite {} -> {} -> {} is missing",
                            self.objects[f.src], self.objects[f.dst], self.objects[g.dst]
                        ));
                    }
                }
            }
        }
        out
    }
}

/// The image of a base object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectImage {
    /// A finite set of tuples, sorted and without repetition.
    Finite(Vec<AlignedTuple>),
    /// Every aligned tuple over the object.
    Full,
}

impl ObjectImage {
    /// The tuples of a finite image.
    pub fn finite(&self) -> Option<&[AlignedTuple]> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Full => None,
        }
    }

    /// Whether `x` belongs to the image.
    pub fn contains(&self, x: &AlignedTuple) -> bool {
        match self {
            Self::Finite(v) => v.binary_search(x).is_ok(),
            Self::Full => true,
        }
    }
}

/// How hub objects receive their images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HubMode {
    /// The whole aligned environment.
    Full,
    /// Everything reachable from finite images, plus the raw sequence when
    /// its length matches.
    ReachableClosure,
}

/// Which objects the pairwise recipe creates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildPolicy {
    /// Explicit objects, or `None` for every pair object plus the hubs
    /// shared by at least two pair objects of the same length.
    pub objects: Option<Vec<Segment>>,
    /// How hubs are filled.
    pub hub_mode: HubMode,
}

impl Default for BuildPolicy {
    fn default() -> Self {
        Self {
            objects: None,
            hub_mode: HubMode::Full,
        }
    }
}

/// A base category with an image per object inside the aligned environment.
#[derive(Debug, Clone)]
pub struct AlignmentFunctor {
    base: BaseCategory,
    spec: AlignmentSpec,
    alphabet: PointedAlphabet,
    level: usize,
    images: Vec<ObjectImage>,
    sequences: Vec<Vec<u8>>,
    hub_mode: HubMode,
}

/// One problem found by [`AlignmentFunctor::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Offending base morphism, if any.
    pub morphism: Option<usize>,
    /// Offending element, rendered, if any.
    pub element: Option<String>,
    /// What went wrong.
    pub message: String,
}

impl AlignmentFunctor {
    /// Assembles a functor from explicit images.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidInput`] when the number of images differs
    /// from the number of objects or a tuple sits over the wrong object.
    pub fn new(
        base: BaseCategory,
        spec: AlignmentSpec,
        alphabet: PointedAlphabet,
        level: usize,
        images: Vec<ObjectImage>,
    ) -> Result<Self> {
        if images.len() != base.objects.len() {
            return Err(Error::InvalidInput(format!(
                "{} images for {} objects",
                images.len(),
                base.objects.len()
            )));
        }
        let mut images = images;
        for (k, img) in images.iter_mut().enumerate() {
            if let ObjectImage::Finite(v) = img {
                v.sort();
                v.dedup();
                if let Some(x) = v.iter().find(|x| x.segment() != &base.objects[k] || x.level() != level) {
                    return Err(Error::InvalidInput(format!(
                        "tuple over {} placed at {}",
                        x.segment(),
                        base.objects[k]
                    )));
                }
            }
        }
        Ok(Self {
            base,
            spec,
            alphabet,
            level,
            images,
            sequences: Vec::new(),
            hub_mode: HubMode::Full,
        })
    }

    /// The base category.
    pub fn base(&self) -> &BaseCategory {
        &self.base
    }

    /// The alignment specification.
    pub fn spec(&self) -> &AlignmentSpec {
        &self.spec
    }

    /// The alphabet.
    pub fn alphabet(&self) -> &PointedAlphabet {
        &self.alphabet
    }

    /// The level in the specification order.
    pub fn level(&self) -> usize {
        self.level
    }

    /// Image of every object.
    pub fn images(&self) -> &[ObjectImage] {
        &self.images
    }

    /// Image of object `k`.
    pub fn image(&self, k: usize) -> &ObjectImage {
        &self.images[k]
    }

    /// Raw sequences used by the pairwise recipe, as alphabet letters.
    pub fn sequences(&self) -> &[Vec<u8>] {
        &self.sequences
    }

    /// How hubs were filled.
    pub fn hub_mode(&self) -> HubMode {
        self.hub_mode
    }

    /// Records the raw sequences, as alphabet letters.
    pub fn set_sequences(&mut self, sequences: Vec<Vec<u8>>) {
        self.sequences = sequences;
    }

    /// Records how hubs were filled.
    pub fn set_hub_mode(&mut self, mode: HubMode) {
        self.hub_mode = mode;
    }

    /// Replaces the image of object `k`.
    pub fn set_image(&mut self, k: usize, image: ObjectImage) {
        let mut image = image;
        if let ObjectImage::Finite(v) = &mut image {
            v.sort();
            v.dedup();
        }
        self.images[k] = image;
    }

    /// Moves `x` along base morphism `mi`.
    ///
    /// # Errors
    ///
    /// Returns [`Error::EndpointMismatch`] when `x` is not over the source.
    pub fn move_tuple(&self, mi: usize, x: &AlignedTuple) -> Result<AlignedTuple> {
        aligned_image(&self.spec, &self.base.morphisms[mi].morphism, x, &self.alphabet)
    }

    /// The arrow of base morphism `mi` between finite images, as an index
    /// table.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidInput`] when an end is not finite and
    /// [`Error::Naturality`] when an image leaves the target set.
    pub fn arrow(&self, mi: usize) -> Result<Vec<usize>> {
        let m = &self.base.morphisms[mi];
        let (Some(src), Some(dst)) = (self.images[m.src].finite(), self.images[m.dst].finite()) else {
            return Err(Error::InvalidInput("arrow between non-finite images".to_string()));
        };
        src.iter()
            .map(|x| {
                let y = self.move_tuple(mi, x)?;
                dst.binary_search(&y).map_err(|_| {
                    Error::Naturality(format!(
                        "{} leaves the image of {}",
                        self.render_tuple(x),
                        self.base.objects[m.dst]
                    ))
                })
            })
            .collect()
    }

    /// Components of a tuple rendered as plain rows, labelled by index.
    pub fn render_tuple(&self, x: &AlignedTuple) -> String {
        let parts: Vec<String> = self
            .spec
            .labels()
            .iter()
            .zip(x.components())
            .filter(|(_, w)| !w.letters().is_empty())
            .map(|(l, w)| format!("{l}:{}", w.render_plain(&self.alphabet, true)))
            .collect();
        parts.join(" ")
    }

    /// Checks identities, closure, image membership, naturality and the
    /// functor laws.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out: Vec<Violation> = self
            .base
            .check_category()
            .into_iter()
            .map(|message| Violation {
                morphism: None,
                element: None,
                message,
            })
            .collect();
        for (mi, m) in self.base.morphisms.iter().enumerate() {
            let Some(src) = self.images[m.src].finite() else {
                continue;
            };
            for x in src {
                match self.move_tuple(mi, x) {
                    Ok(y) if self.images[m.dst].contains(&y) => {
                        if m.morphism == SegmentMorphism::identity(&self.base.objects[m.src]) && &y != x {
                            out.push(Violation {
                                morphism: Some(mi),
                                element: Some(self.render_tuple(x)),
                                message: "identity does not act trivially".to_string(),
                            });
                        }
                    }
                    Ok(y) => out.push(Violation {
                        morphism: Some(mi),
                        element: Some(self.render_tuple(x)),
                        message: format!(
                            "image {} is missing from {}",
                            self.render_tuple(&y),
                            self.base.objects[m.dst]
                        ),
                    }),
                    Err(e) => out.push(Violation {
                        morphism: Some(mi),
                        element: Some(self.render_tuple(x)),
                        message: e.to_string(),
                    }),
                }
            }
        }
        for (fi, f) in self.base.morphisms.iter().enumerate() {
            let Some(src) = self.images[f.src].finite() else {
                continue;
            };
            for (gi, g) in self.base.morphisms.iter().enumerate().filter(|(_, g)| g.src == f.dst) {
                let Ok(gf) = g.morphism.after(&f.morphism) else {
                    continue;
                };
                let Some(ci) = self.base.morphism_index(&gf) else {
                    continue;
                };
                for x in src {
                    let direct = self.move_tuple(ci, x);
                    let stepwise = self.move_tuple(fi, x).and_then(|y| self.move_tuple(gi, &y));
                    if direct != stepwise {
                        out.push(Violation {
                            morphism: Some(ci),
                            element: Some(self.render_tuple(x)),
                            message: "composite acts differently from its factors".to_string(),
                        });
                    }
                }
            }
        }
        out
    }
}

fn active_indices(spec: &AlignmentSpec, level: usize, s: &Segment) -> Vec<usize> {
    spec.maps()
        .iter()
        .enumerate()
        .filter(|(_, f)| {
            let pushed = push_colors(f, s).expect("segment over the specification order");
            let b = f.apply(level);
            pushed.n1() > 0 && (0..pushed.n0()).all(|p| f.cod().leq(b, pushed.colors()[p]))
        })
        .map(|(k, _)| k)
        .collect()
}

fn row_letters(alphabet: &PointedAlphabet, row: &[Option<u8>]) -> Result<Vec<u8>> {
    row.iter()
        .map(|x| match x {
            None => Ok(alphabet.basepoint()),
            Some(c) => {
                let mut buf = [0u8; 4];
                alphabet
                    .index_of(char::from(*c).encode_utf8(&mut buf))
                    .filter(|&l| l != alphabet.basepoint())
                    .ok_or_else(|| Error::InvalidWord(format!("unknown letter `{}`", char::from(*c))))
            }
        })
        .collect()
}

fn tuple_from_rows(
    spec: &AlignmentSpec,
    segment: &Segment,
    level: usize,
    rows: &[(usize, Vec<u8>)],
) -> Result<AlignedTuple> {
    let components = spec
        .maps()
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let pushed = push_colors(f, segment)?;
            let letters = rows
                .iter()
                .find(|(i, _)| *i == k)
                .map(|(_, r)| r.clone())
                .unwrap_or_default();
            Word::new(pushed, f.apply(level), letters)
        })
        .collect::<Result<Vec<_>>>()?;
    AlignedTuple::new(spec, segment.clone(), level, components)
}

/// The single-patch segment of length `n` whose color activates exactly
/// the indices in `on`, with every other factor at its bottom element.
///
/// # Errors
///
/// Returns [`Error::UnknownElement`] when the order is not a product with
/// one factor per index.
pub fn activation_segment(spec: &AlignmentSpec, level: usize, n: usize, on: &[usize]) -> Result<Segment> {
    let omega = spec.omega();
    if omega.factor_sizes().len() != spec.len() {
        return Err(Error::UnknownElement(
            "activation segments need one product factor per index".to_string(),
        ));
    }
    let top = omega.components(level);
    let comps: Vec<usize> = (0..spec.len())
        .map(|k| if on.contains(&k) { top[k] } else { 0 })
        .collect();
    Segment::trivial(omega.clone(), n, omega.tuple(&comps)?)
}

/// Builds the functor of the pairwise recipe.
///
/// `sequences` are the raw inputs in specification order and `pairwise`
/// their pairwise alignments with the first input on top.
///
/// # Errors
///
/// Returns [`Error::InvalidInput`] for explicit objects activating neither
/// one nor two indices, and letter errors for sequences outside the
/// alphabet.
pub fn build_from_pairwise(
    spec: &AlignmentSpec,
    alphabet: &PointedAlphabet,
    level: usize,
    sequences: &[Vec<u8>],
    pairwise: &[PairAlignments],
    policy: &BuildPolicy,
) -> Result<AlignmentFunctor> {
    if sequences.len() != spec.len() {
        return Err(Error::InvalidInput(format!(
            "{} sequences for {} indices",
            sequences.len(),
            spec.len()
        )));
    }
    let objects = match &policy.objects {
        Some(v) => v.clone(),
        None => auto_objects(spec, level, pairwise)?,
    };
    let letters = sequences
        .iter()
        .map(|s| row_letters(alphabet, &s.iter().map(|&c| Some(c)).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let base = BaseCategory::full_quasi_homologous(objects)?;
    let mut images = Vec::with_capacity(base.objects.len());
    for s in &base.objects {
        let active = active_indices(spec, level, s);
        match active.as_slice() {
            [i, j] => {
                let mut tuples = Vec::new();
                if let Some(p) = pairwise.iter().find(|p| p.first == *i && p.second == *j) {
                    for a in p.alignments.iter().filter(|a| a.len() == s.n1()) {
                        let rows = [
                            (*i, row_letters(alphabet, a.top())?),
                            (*j, row_letters(alphabet, a.bottom())?),
                        ];
                        tuples.push(tuple_from_rows(spec, s, level, &rows)?);
                    }
                }
                tuples.sort();
                images.push(ObjectImage::Finite(tuples));
            }
            [_] => images.push(ObjectImage::Full),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "object {} activates {} indices; the recipe needs one or two",
                    s.compact().unwrap_or_else(|| s.to_string()),
                    active.len()
                )))
            }
        }
    }
    let mut f = AlignmentFunctor::new(base, spec.clone(), alphabet.clone(), level, images)?;
    f.sequences = letters;
    f.hub_mode = policy.hub_mode;
    if policy.hub_mode == HubMode::ReachableClosure {
        close_hubs(&mut f)?;
    }
    Ok(f)
}

fn auto_objects(spec: &AlignmentSpec, level: usize, pairwise: &[PairAlignments]) -> Result<Vec<Segment>> {
    let mut pairs: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    for p in pairwise {
        for a in &p.alignments {
            pairs.insert((a.len(), p.first, p.second));
        }
    }
    let mut objects = Vec::new();
    let mut hubs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(n, i, j) in &pairs {
        objects.push((n, activation_segment(spec, level, n, &[i, j])?));
        for k in [i, j] {
            let shared = pairs.iter().filter(|&&(m, a, b)| m == n && (a == k || b == k)).count();
            if shared >= 2 {
                hubs.insert((n, k));
            }
        }
    }
    for &(n, k) in &hubs {
        objects.push((n, activation_segment(spec, level, n, &[k])?));
    }
    objects.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.colors().cmp(a.1.colors())));
    Ok(objects.into_iter().map(|(_, s)| s).collect())
}

fn close_hubs(f: &mut AlignmentFunctor) -> Result<()> {
    let hubs: Vec<usize> = (0..f.images.len())
        .filter(|&k| f.images[k] == ObjectImage::Full)
        .collect();
    let mut sets: Vec<BTreeSet<AlignedTuple>> = vec![BTreeSet::new(); f.images.len()];
    for &h in &hubs {
        let s = &f.base.objects[h];
        let active = active_indices(&f.spec, f.level, s);
        if let [k] = active.as_slice() {
            if f.sequences.get(*k).is_some_and(|q| q.len() == s.n1()) {
                let row = [(*k, f.sequences[*k].clone())];
                sets[h].insert(tuple_from_rows(&f.spec, s, f.level, &row)?);
            }
        }
    }
    loop {
        let mut changed = false;
        for &h in &hubs {
            let inbound: Vec<usize> = f.base.inbound(h).map(|(mi, _)| mi).collect();
            for mi in inbound {
                let src = f.base.morphisms[mi].src;
                let xs: Vec<AlignedTuple> = match f.images[src].finite() {
                    Some(v) => v.to_vec(),
                    None => sets[src].iter().cloned().collect(),
                };
                for x in xs {
                    changed |= sets[h].insert(f.move_tuple(mi, &x)?);
                }
            }
        }
        if !changed {
            break;
        }
    }
    for h in hubs {
        f.images[h] = ObjectImage::Finite(core::mem::take(&mut sets[h]).into_iter().collect());
    }
    Ok(())
}

/// Instructions for moving a functor to a finer order.
#[derive(Debug, Clone)]
pub struct RecolorPlan {
    /// The specification over the finer order, with the same labels.
    pub target: AlignmentSpec,
    /// `(existing object, new object)`: the new object receives the tuples
    /// of the existing one, letter for letter.
    pub copies: Vec<(Segment, Segment)>,
    /// New hub objects.
    pub hubs: Vec<Segment>,
    /// Object pairs to join by every segment morphism.
    pub links: Vec<(Segment, Segment)>,
}

fn rebase_tuple(target: &AlignmentSpec, seg: &Segment, level: usize, x: &AlignedTuple) -> Result<AlignedTuple> {
    let components = target
        .maps()
        .iter()
        .zip(x.components())
        .map(|(f, w)| Word::new(push_colors(f, seg)?, f.apply(level), w.letters().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    AlignedTuple::new(target, seg.clone(), level, components)
}

fn rebase_level(from: &Arc<Preorder>, to: &Arc<Preorder>, level: usize) -> Result<usize> {
    to.element(from.label(level))
}

/// Moves `f` to the order of `plan.target`, adds recolored copies and hubs,
/// and joins the requested links.
///
/// # Errors
///
/// Returns [`Error::UnknownElement`] when a color label is missing from the
/// target order and [`Error::InvalidInput`] for unknown plan objects.
pub fn extend_colors(f: &AlignmentFunctor, plan: &RecolorPlan) -> Result<AlignmentFunctor> {
    let target = &plan.target;
    if target.labels() != f.spec.labels() {
        return Err(Error::InvalidInput("recoloring must keep the index labels".to_string()));
    }
    let omega = target.omega();
    let level = rebase_level(f.spec.omega(), omega, f.level)?;
    let mut objects: Vec<Segment> = f
        .base
        .objects
        .iter()
        .map(|s| s.rebase(omega))
        .collect::<Result<Vec<_>>>()?;
    let mut images: Vec<ObjectImage> = f
        .images
        .iter()
        .zip(&objects)
        .map(|(img, s)| match img {
            ObjectImage::Full => Ok(ObjectImage::Full),
            ObjectImage::Finite(v) => Ok(ObjectImage::Finite(
                v.iter()
                    .map(|x| rebase_tuple(target, s, level, x))
                    .collect::<Result<Vec<_>>>()?,
            )),
        })
        .collect::<Result<Vec<_>>>()?;
    for (old, new) in &plan.copies {
        let k = f
            .base
            .index_of(old)
            .ok_or_else(|| Error::InvalidInput(format!("{old} is not a base object")))?;
        let tuples = match &images[k] {
            ObjectImage::Finite(v) => v
                .iter()
                .map(|x| rebase_tuple(target, new, level, x))
                .collect::<Result<Vec<_>>>()?,
            ObjectImage::Full => return Err(Error::InvalidInput(format!("{old} has no finite image to copy"))),
        };
        objects.push(new.clone());
        images.push(ObjectImage::Finite(tuples));
    }
    for h in &plan.hubs {
        objects.push(h.clone());
        images.push(ObjectImage::Full);
    }
    let mut base = BaseCategory::full_quasi_homologous(objects)?;
    let old_links: Vec<(usize, usize)> = f.base.links.clone();
    for (a, b) in old_links {
        base.add_links(a, b)?;
    }
    for (s, t) in &plan.links {
        let a = base
            .index_of(s)
            .ok_or_else(|| Error::InvalidInput(format!("{s} is not an object")))?;
        let b = base
            .index_of(t)
            .ok_or_else(|| Error::InvalidInput(format!("{t} is not an object")))?;
        base.add_links(a, b)?;
    }
    let mut g = AlignmentFunctor::new(base, target.clone(), f.alphabet.clone(), level, images)?;
    g.sequences = f.sequences.clone();
    g.hub_mode = f.hub_mode;
    if f.hub_mode == HubMode::ReachableClosure {
        close_hubs(&mut g)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp_align::{align_all_pairs, Mode};

    const SEQS: [&str; 4] = ["ACCGACTG", "ACATCTG", "ACCGTCA", "ACTACTG"];

    fn worked_functor(mode: HubMode) -> AlignmentFunctor {
        let spec = AlignmentSpec::boolean(&["a", "b", "c", "d"]).unwrap();
        let dna = PointedAlphabet::dna();
        let level = spec.omega().element("[1111]").unwrap();
        let seqs: Vec<Vec<u8>> = SEQS.iter().map(|s| s.as_bytes().to_vec()).collect();
        let pairs = align_all_pairs(&seqs, Mode::Global);
        let policy = BuildPolicy {
            objects: None,
            hub_mode: mode,
        };
        build_from_pairwise(&spec, &dna, level, &seqs, &pairs, &policy).unwrap()
    }

    fn size_at(f: &AlignmentFunctor, text: &str) -> Option<usize> {
        let s = Segment::parse(f.spec().omega(), text).unwrap();
        let k = f.base().index_of(&s).unwrap();
        f.image(k).finite().map(<[AlignedTuple]>::len)
    }

    #[test]
    fn worked_objects_and_sizes() {
        let f = worked_functor(HubMode::Full);
        assert_eq!(f.base().objects().len(), 15);
        assert_eq!(size_at(&f, "(!8,[1100])"), Some(3));
        assert_eq!(size_at(&f, "(!9,[1100])"), Some(1));
        assert_eq!(size_at(&f, "(!8,[0011])"), Some(12));
        assert_eq!(size_at(&f, "(!8,[0100])"), None);
        assert_eq!(size_at(&f, "(!7,[0001])"), None);
        assert!(f.validate().is_empty());
        assert!(f.base().is_preorder_category());
    }

    #[test]
    fn reachable_hubs_validate() {
        let f = worked_functor(HubMode::ReachableClosure);
        assert!(f.validate().is_empty());
        assert!(f.images().iter().all(|i| i.finite().is_some()));
    }

    #[test]
    fn deleting_a_hub_element_breaks_naturality() {
        let mut f = worked_functor(HubMode::ReachableClosure);
        let s = Segment::parse(f.spec().omega(), "(!8,[0100])").unwrap();
        let k = f.base().index_of(&s).unwrap();
        let mut v = f.image(k).finite().unwrap().to_vec();
        v.remove(0);
        f.set_image(k, ObjectImage::Finite(v));
        let bad = f.validate();
        assert!(!bad.is_empty());
        assert!(bad.iter().all(|v| v.morphism.is_some() && v.element.is_some()));
    }

    #[test]
    fn empty_base_is_valid() {
        let spec = AlignmentSpec::boolean(&["a"]).unwrap();
        let base = BaseCategory::full_quasi_homologous(Vec::new()).unwrap();
        let f = AlignmentFunctor::new(base, spec, PointedAlphabet::dna(), 1, Vec::new()).unwrap();
        assert!(f.validate().is_empty());
    }

    #[test]
    fn recoloring_adds_linked_copy() {
        let f = worked_functor(HubMode::Full);
        let target = AlignmentSpec::chain(&["a", "b", "c", "d"], 3).unwrap();
        let o = target.omega().clone();
        let seg = |t: &str| Segment::parse(&o, t).unwrap();
        let plan = RecolorPlan {
            target: target.clone(),
            copies: vec![(
                Segment::parse(f.spec().omega(), "(!8,[0011])").unwrap(),
                seg("(!8,[0022])"),
            )],
            hubs: vec![seg("(!9,[0001])")],
            links: vec![(seg("(!8,[0022])"), seg("(!9,[0001])"))],
        };
        let g = extend_colors(&f, &plan).unwrap();
        assert_eq!(g.base().objects().len(), 17);
        assert!(g.validate().is_empty());
        let k = g.base().index_of(&seg("(!8,[0022])")).unwrap();
        assert_eq!(g.image(k).finite().unwrap().len(), 12);
        let up = g.base().index_of(&seg("(!8,[0011])")).unwrap();
        assert!(g.base().morphisms().iter().any(|m| m.src == k && m.dst == up));
        assert!(!g.base().morphisms().iter().any(|m| m.src == up && m.dst == k));
        let empty = RecolorPlan {
            target: f.spec().clone(),
            copies: Vec::new(),
            hubs: Vec::new(),
            links: Vec::new(),
        };
        let same = extend_colors(&f, &empty).unwrap();
        assert_eq!(same.base(), f.base());
        assert_eq!(same.images(), f.images());
    }
}
