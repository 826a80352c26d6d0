//! Slices: Kan extension elements that one individual's word explains.
//!
//! An element `x` of the Kan value at `tau` lifts to the slice of individual
//! `i` when some word `z` of that individual, moved along every leg of the
//! comma category, reproduces the `i`-th rows of `x`. Wide pullbacks keep
//! the elements lifting for several individuals at once, and mechanism
//! templates look for lifts along legs of a prescribed insertion shape.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::alignment_functor::AlignmentFunctor;
use crate::environment::{AlignedTuple, Word};
use crate::error::{Error, Result};
use crate::finset::{product_size, LimitOptions};
use crate::kan::{ran_eval, unit_forward, CommaCategory, RanElement, RanValue, UnitSolver};
use crate::segments::{push_colors_morphism, Segment};

/// An element of a slice: a Kan element with a word that explains it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SliceElement {
    /// The Kan element, one choice per factor.
    pub x: RanElement,
    /// The explaining word of the individual.
    pub z: Word,
}

/// The slice of one individual at one segment.
#[derive(Debug, Clone)]
pub struct Slice {
    index: usize,
    value: RanValue,
    elements: Vec<SliceElement>,
}

impl Slice {
    /// The individual.
    pub fn index(&self) -> usize {
        self.index
    }

    /// The Kan value the slice lives over.
    pub fn value(&self) -> &RanValue {
        &self.value
    }

    /// Lifted pairs in lexicographic order.
    pub fn elements(&self) -> &[SliceElement] {
        &self.elements
    }

    /// Kan elements with at least one lift, sorted.
    pub fn support(&self) -> Vec<RanElement> {
        let mut s: Vec<RanElement> = self.elements.iter().map(|e| e.x.clone()).collect();
        s.dedup();
        s
    }

    /// Words lifting `x`.
    pub fn lifts(&self, x: &[usize]) -> Vec<&Word> {
        self.elements.iter().filter(|e| e.x == x).map(|e| &e.z).collect()
    }

    /// Rechecks that every word reproduces the rows of its element.
    ///
    /// # Errors
    ///
    /// Propagates errors from moving words.
    pub fn verify(&self, f: &AlignmentFunctor) -> Result<bool> {
        for e in &self.elements {
            let img = unit_forward(f.spec(), f.alphabet(), self.index, &e.z, self.value.comma())?;
            for (c, w) in img.iter().enumerate() {
                if let Some(t) = self.value.value(&e.x, c) {
                    if &t.components()[self.index] != w {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

type Assignment = Vec<Option<u8>>;

fn merge(a: &mut [Option<u8>], b: &[Option<u8>]) -> bool {
    for (x, y) in a.iter_mut().zip(b) {
        match (*x, *y) {
            (Some(p), Some(q)) if p != q => return false,
            (None, Some(q)) => *x = Some(q),
            _ => {}
        }
    }
    true
}

fn factor_constraints(
    f: &AlignmentFunctor,
    value: &RanValue,
    solver: &UnitSolver,
    i: usize,
    factor: usize,
    only: Option<&[usize]>,
) -> Result<Vec<(usize, Assignment)>> {
    let fac = &value.factors()[factor];
    let mut out = Vec::new();
    for e in 0..fac.len() {
        let mut a = vec![None; solver.width()];
        let mut ok = true;
        for (k, &c) in fac.nodes().iter().enumerate() {
            if only.is_some_and(|o| !o.contains(&c)) {
                continue;
            }
            let w = &fac.value(e, k).components()[i];
            if !solver.constrain(c, w, f.alphabet(), &mut a)? {
                ok = false;
                break;
            }
        }
        if ok {
            out.push((e, a));
        }
    }
    Ok(out)
}

fn search(
    options: &[(usize, Vec<(usize, Assignment)>)],
    depth: usize,
    x: &mut [usize],
    acc: &Assignment,
    visit: &mut impl FnMut(&[usize], &Assignment) -> Result<bool>,
) -> Result<bool> {
    if depth == options.len() {
        return visit(x, acc);
    }
    let (factor, choices) = &options[depth];
    for (e, a) in choices {
        let mut next = acc.clone();
        if merge(&mut next, a) {
            x[*factor] = *e;
            if !search(options, depth + 1, x, &next, visit)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Computes the slice of individual `i` over an already evaluated Kan value.
///
/// # Errors
///
/// Returns [`Error::ResourceCap`] when more than `opts.result_cap` pairs
/// would be produced.
pub fn slice_of(f: &AlignmentFunctor, value: &RanValue, i: usize, opts: &LimitOptions) -> Result<Slice> {
    let solver = UnitSolver::new(f.spec(), i, f.level(), value.comma())?;
    let options = (0..value.factors().len())
        .map(|k| Ok((k, factor_constraints(f, value, &solver, i, k, None)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut elements = Vec::new();
    let mut x = vec![0usize; value.factors().len()];
    let start = vec![None; solver.width()];
    let cap = opts.result_cap;
    search(&options, 0, &mut x, &start, &mut |x, a| {
        for z in solver.complete(a, f.alphabet(), cap)? {
            if elements.len() == cap {
                return Err(Error::ResourceCap {
                    what: "slice elements".to_string(),
                    needed: cap as u128 + 1,
                    cap: cap as u128,
                });
            }
            elements.push(SliceElement { x: x.to_vec(), z });
        }
        Ok(true)
    })?;
    elements.sort();
    Ok(Slice {
        index: i,
        value: value.clone(),
        elements,
    })
}

/// Computes the slice of individual `i` at `tau`.
///
/// # Errors
///
/// As [`ran_eval`] and [`slice_of`].
pub fn slice_eval(f: &AlignmentFunctor, i: usize, tau: &Segment, opts: &LimitOptions) -> Result<Slice> {
    let value = ran_eval(f, tau, opts)?;
    slice_of(f, &value, i, opts)
}

/// Kan elements lifting for every individual of a subset, with their words.
#[derive(Debug, Clone)]
pub struct WidePullback {
    /// The individuals, sorted.
    pub indices: Vec<usize>,
    /// Each surviving element with the lifting words per individual.
    pub entries: Vec<(RanElement, Vec<Vec<Word>>)>,
}

/// Intersects the slices of `indices` at `tau`.
///
/// # Errors
///
/// As [`slice_eval`]; with no indices, [`Error::ResourceCap`] when the Kan
/// value has more than `opts.result_cap` elements.
pub fn wide_pullback(
    f: &AlignmentFunctor,
    indices: &[usize],
    tau: &Segment,
    opts: &LimitOptions,
) -> Result<WidePullback> {
    let value = ran_eval(f, tau, opts)?;
    let mut idx: Vec<usize> = indices.to_vec();
    idx.sort_unstable();
    idx.dedup();
    let slices = idx
        .iter()
        .map(|&i| slice_of(f, &value, i, opts))
        .collect::<Result<Vec<_>>>()?;
    let support: Vec<RanElement> = match slices.first() {
        None => value.elements(opts.result_cap)?,
        Some(first) => {
            let mut s: BTreeSet<RanElement> = first.support().into_iter().collect();
            for sl in &slices[1..] {
                let other: BTreeSet<RanElement> = sl.support().into_iter().collect();
                s = s.intersection(&other).cloned().collect();
            }
            s.into_iter().collect()
        }
    };
    let entries = support
        .into_iter()
        .map(|x| {
            let ws = slices
                .iter()
                .map(|sl| sl.lifts(&x).into_iter().cloned().collect())
                .collect();
            (x, ws)
        })
        .collect();
    Ok(WidePullback { indices: idx, entries })
}

/// A subset of individuals with the size of its wide pullback.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoPoint {
    /// The individuals, sorted.
    pub indices: Vec<usize>,
    /// Number of Kan elements lifting for all of them.
    pub support: usize,
}

/// The subsets of individuals not dominated in both subset size and
/// wide-pullback support, larger subsets first.
///
/// # Errors
///
/// As [`slice_eval`]; [`Error::InvalidInput`] beyond 20 individuals.
pub fn pareto_subsets(f: &AlignmentFunctor, tau: &Segment, opts: &LimitOptions) -> Result<Vec<ParetoPoint>> {
    let k = f.spec().len();
    if k > 20 {
        return Err(Error::InvalidInput(format!(
            "{k} individuals are too many for subset search"
        )));
    }
    let value = ran_eval(f, tau, opts)?;
    let total = usize::try_from(value.cardinality()).unwrap_or(usize::MAX);
    let supports = (0..k)
        .map(|i| {
            Ok(slice_of(f, &value, i, opts)?
                .support()
                .into_iter()
                .collect::<BTreeSet<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut points = Vec::new();
    for mask in 0u32..(1u32 << k) {
        let indices: Vec<usize> = (0..k).filter(|&i| mask & (1 << i) != 0).collect();
        let support = match indices.split_first() {
            None => total,
            Some((&first, rest)) => {
                let mut s = supports[first].clone();
                for &i in rest {
                    s = s.intersection(&supports[i]).cloned().collect();
                }
                s.len()
            }
        };
        points.push(ParetoPoint { indices, support });
    }
    let front: Vec<ParetoPoint> = points
        .iter()
        .filter(|p| {
            !points.iter().any(|q| {
                q.indices.len() >= p.indices.len()
                    && q.support >= p.support
                    && (q.indices.len() > p.indices.len() || q.support > p.support)
            })
        })
        .cloned()
        .collect();
    let mut front = front;
    front.sort_by(|a, b| {
        b.indices
            .len()
            .cmp(&a.indices.len())
            .then_with(|| a.indices.cmp(&b.indices))
    });
    Ok(front)
}

/// Kinds of mechanism templates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MechanismKind {
    /// A block present once in one sequence and twice in the other.
    Duplication,
    /// A block read backwards in the other sequence.
    Inversion,
    /// A user-supplied leg pattern.
    Custom,
}

impl MechanismKind {
    /// Lowercase name.
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Duplication => "duplication",
            Self::Inversion => "inversion",
            Self::Custom => "custom",
        }
    }
}

/// A family of leg shapes around a block of the apex.
///
/// Each leg is described by the offsets of its inserted positions relative
/// to the block: offset `k` means the insertion follows the first `k`
/// letters of the block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MechanismTemplate {
    /// Kind of mechanism.
    pub kind: MechanismKind,
    /// Display name.
    pub name: String,
    /// Length of the block.
    pub block_len: usize,
    /// Sorted insertion offsets of each leg.
    pub legs: Vec<Vec<usize>>,
}

impl MechanismTemplate {
    /// One insertion before and one after a single letter.
    pub fn duplication() -> Self {
        Self {
            kind: MechanismKind::Duplication,
            name: "duplication".to_string(),
            block_len: 1,
            legs: vec![vec![0], vec![1]],
        }
    }

    /// Two insertions before, between, and after a block of three.
    pub fn inversion() -> Self {
        Self {
            kind: MechanismKind::Inversion,
            name: "inversion".to_string(),
            block_len: 3,
            legs: vec![vec![0, 0], vec![1, 2], vec![3, 3]],
        }
    }

    /// A custom pattern.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidInput`] for an empty pattern, a leg without
    /// insertions, or an offset beyond the block.
    pub fn custom(name: &str, block_len: usize, legs: Vec<Vec<usize>>) -> Result<Self> {
        if legs.is_empty() || legs.iter().any(Vec::is_empty) {
            return Err(Error::InvalidInput("every leg needs an insertion".to_string()));
        }
        if legs.iter().flatten().any(|&o| o > block_len) {
            return Err(Error::InvalidInput("insertion offset beyond the block".to_string()));
        }
        let legs = legs
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l
            })
            .collect();
        Ok(Self {
            kind: MechanismKind::Custom,
            name: name.to_string(),
            block_len,
            legs,
        })
    }
}

/// A lift along legs matching a template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MechanismHit {
    /// Kind of the template.
    pub kind: MechanismKind,
    /// Name of the template.
    pub name: String,
    /// First position of the block in the apex, zero-based.
    pub block_start: usize,
    /// Length of the block.
    pub block_len: usize,
    /// Comma objects matched to the legs, in template order.
    pub nodes: Vec<usize>,
    /// Tuples of the lifted element at the matched objects.
    pub witness: Vec<AlignedTuple>,
    /// The word of the individual explaining them.
    pub z: Word,
    /// Other individuals with letters in the witness.
    pub individuals: Vec<usize>,
}

/// Offsets of the inserted positions of a morphism, counted as the number
/// of source positions preceding each insertion.
pub fn insertion_offsets(f1: &[usize], n_dst: usize) -> Vec<usize> {
    (0..n_dst)
        .filter(|j| f1.binary_search(j).is_err())
        .map(|j| f1.partition_point(|&p| p < j))
        .collect()
}

/// For each block start, the comma objects matching each leg of
/// `template`.
///
/// # Errors
///
/// Returns [`Error::UnknownElement`] for an unknown index.
pub fn match_template(
    f: &AlignmentFunctor,
    i: usize,
    comma: &CommaCategory,
    template: &MechanismTemplate,
) -> Result<Vec<(usize, Vec<Vec<usize>>)>> {
    let map = f
        .spec()
        .maps()
        .get(i)
        .ok_or_else(|| Error::UnknownElement(format!("index {i}")))?;
    let offsets = comma
        .objects()
        .iter()
        .map(|o| {
            let m = push_colors_morphism(map, &o.leg)?;
            Ok(insertion_offsets(m.f1(), m.dst().n1()))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = comma.apex().n1();
    let mut out = Vec::new();
    if template.block_len > n {
        return Ok(out);
    }
    for p in 0..=n - template.block_len {
        let per_leg: Vec<Vec<usize>> = template
            .legs
            .iter()
            .map(|leg| {
                (0..offsets.len())
                    .filter(|&c| {
                        let rel: Option<Vec<usize>> = offsets[c].iter().map(|&o| o.checked_sub(p)).collect();
                        rel.as_deref() == Some(leg.as_slice())
                    })
                    .collect()
            })
            .collect();
        if per_leg.iter().all(|v| !v.is_empty()) {
            out.push((p, per_leg));
        }
    }
    Ok(out)
}

/// Searches for lifts of individual `i` along every instance of every
/// template in the comma category of `tau`.
///
/// # Errors
///
/// As [`ran_eval`]; [`Error::ResourceCap`] when an instance needs more than
/// `opts.result_cap` candidate elements.
pub fn detect_mechanisms(
    f: &AlignmentFunctor,
    i: usize,
    tau: &Segment,
    templates: &[MechanismTemplate],
    opts: &LimitOptions,
) -> Result<Vec<MechanismHit>> {
    let value = ran_eval(f, tau, opts)?;
    let solver = UnitSolver::new(f.spec(), i, f.level(), value.comma())?;
    let mut hits = Vec::new();
    for t in templates {
        for (p, per_leg) in match_template(f, i, value.comma(), t)? {
            let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
            for cands in &per_leg {
                let mut next = Vec::new();
                for c in &combos {
                    for &x in cands.iter().filter(|x| !c.contains(x)) {
                        let mut n = c.clone();
                        n.push(x);
                        next.push(n);
                    }
                }
                combos = next;
            }
            for nodes in combos {
                let Some(factors) = nodes
                    .iter()
                    .map(|&c| value.locate(c).map(|(k, _)| k))
                    .collect::<Option<BTreeSet<usize>>>()
                else {
                    continue;
                };
                let sizes: Vec<usize> = factors.iter().map(|&k| value.factors()[k].len()).collect();
                let needed = product_size(&sizes);
                if needed > opts.result_cap as u128 {
                    return Err(Error::ResourceCap {
                        what: "mechanism candidates".to_string(),
                        needed,
                        cap: opts.result_cap as u128,
                    });
                }
                let options = factors
                    .iter()
                    .map(|&k| Ok((k, factor_constraints(f, &value, &solver, i, k, Some(&nodes))?)))
                    .collect::<Result<Vec<_>>>()?;
                let mut x = vec![0usize; value.factors().len()];
                let start = vec![None; solver.width()];
                let mut found: Vec<(Vec<AlignedTuple>, Word)> = Vec::new();
                search(&options, 0, &mut x, &start, &mut |x, a| {
                    let witness: Vec<AlignedTuple> = nodes
                        .iter()
                        .map(|&c| value.value(x, c).expect("located").clone())
                        .collect();
                    for z in solver.complete(a, f.alphabet(), opts.result_cap)? {
                        if !found.iter().any(|(w, y)| *w == witness && *y == z) {
                            found.push((witness.clone(), z));
                        }
                    }
                    Ok(true)
                })?;
                for (witness, z) in found {
                    let individuals = (0..f.spec().len())
                        .filter(|&j| j != i && witness.iter().any(|w| !w.components()[j].letters().is_empty()))
                        .collect();
                    hits.push(MechanismHit {
                        kind: t.kind,
                        name: t.name.clone(),
                        block_start: p,
                        block_len: t.block_len,
                        nodes: nodes.clone(),
                        witness,
                        z,
                        individuals,
                    });
                }
            }
        }
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment_functor::{
        build_from_pairwise, AlignmentFunctor, BaseCategory, BuildPolicy, HubMode, ObjectImage,
    };
    use crate::dp_align::{align_all_pairs, Mode};
    use crate::environment::{AlignmentSpec, PointedAlphabet};

    fn main_functor() -> AlignmentFunctor {
        let spec = AlignmentSpec::boolean(&["a", "b", "c", "d"]).unwrap();
        let level = spec.omega().element("[1111]").unwrap();
        let seqs: Vec<Vec<u8>> = ["ACCGACTG", "ACATCTG", "ACCGTCA", "ACTACTG"]
            .iter()
            .map(|s| s.as_bytes().to_vec())
            .collect();
        let pairs = align_all_pairs(&seqs, Mode::Global);
        build_from_pairwise(
            &spec,
            &PointedAlphabet::dna(),
            level,
            &seqs,
            &pairs,
            &BuildPolicy::default(),
        )
        .unwrap()
    }

    fn duplication_functor(other: &str) -> (AlignmentFunctor, Segment) {
        let spec = AlignmentSpec::boolean(&["c", "o"]).unwrap();
        let o = spec.omega().clone();
        let level = o.element("[11]").unwrap();
        let node = Segment::parse(&o, "([11][11])([11])([11])([11][11][11][11])").unwrap();
        let tau = Segment::parse(&o, "([11][11])([11])([11][11][11][11])").unwrap();
        let seqs = vec![b"ACGGTCA".to_vec(), other.as_bytes().to_vec()];
        let pairs = align_all_pairs(&seqs, Mode::Global);
        let policy = BuildPolicy {
            objects: Some(vec![node]),
            hub_mode: HubMode::Full,
        };
        let f = build_from_pairwise(&spec, &PointedAlphabet::dna(), level, &seqs, &pairs, &policy).unwrap();
        (f, tau)
    }

    #[test]
    fn craig_slice_is_empty_on_the_distant_gluing() {
        let f = main_functor();
        let tau = Segment::parse(f.spec().omega(), "(!8,[1011])").unwrap();
        let s = slice_eval(&f, 2, &tau, &LimitOptions::default()).unwrap();
        assert!(s.elements().is_empty());
    }

    #[test]
    fn longer_pair_legs_block_the_short_pair_slice() {
        let f = main_functor();
        let tau = Segment::parse(f.spec().omega(), "(!8,[1100])").unwrap();
        let s = slice_eval(&f, 0, &tau, &LimitOptions::default()).unwrap();
        assert_eq!(s.value().cardinality(), 3);
        assert!(s.elements().is_empty());
    }

    #[test]
    fn pair_slice_lifts_every_element() {
        let f = main_functor();
        let tau = Segment::parse(f.spec().omega(), "(!9,[1100])").unwrap();
        let s = slice_eval(&f, 0, &tau, &LimitOptions::default()).unwrap();
        let n = usize::try_from(s.value().cardinality()).unwrap();
        assert!(n > 0);
        assert_eq!(s.support().len(), n);
        assert_eq!(s.elements().len(), n);
        assert!(s.verify(&f).unwrap());
        for e in s.elements() {
            let row = s.value().value(&e.x, 0).unwrap().components()[0].clone();
            assert_eq!(e.z.letters(), row.letters());
        }
        let w = wide_pullback(&f, &[0], &tau, &LimitOptions::default()).unwrap();
        assert_eq!(w.entries.len(), s.support().len());
        let all = wide_pullback(&f, &[], &tau, &LimitOptions::default()).unwrap();
        assert_eq!(all.entries.len(), n);
    }

    #[test]
    fn duplication_is_detected() {
        let (f, tau) = duplication_functor("ACGGGTCA");
        let rows = [["ACεGGTCA", "ACGGGTCA"], ["ACGεGTCA", "ACGGGTCA"]];
        let node = f.base().objects()[0].clone();
        let tuples = rows
            .iter()
            .map(|r| AlignedTuple::from_rows(f.spec(), f.alphabet(), &node, f.level(), r).unwrap())
            .collect();
        let base = BaseCategory::full_quasi_homologous(vec![node]).unwrap();
        let f = AlignmentFunctor::new(
            base,
            f.spec().clone(),
            f.alphabet().clone(),
            f.level(),
            vec![ObjectImage::Finite(tuples)],
        )
        .unwrap();
        let hits = detect_mechanisms(
            &f,
            0,
            &tau,
            &[MechanismTemplate::duplication()],
            &LimitOptions::default(),
        )
        .unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].block_start, 2);
        assert_eq!(hits[0].individuals, vec![1]);
        assert_eq!(hits[0].z.render_plain(f.alphabet(), false), "ACGGTCA");
    }

    #[test]
    fn substitution_is_not_a_duplication() {
        let (g, tau) = duplication_functor("ACGTGTCA");
        let hits = detect_mechanisms(
            &g,
            0,
            &tau,
            &[MechanismTemplate::duplication()],
            &LimitOptions::default(),
        )
        .unwrap();
        assert!(hits.is_empty());
    }

    #[test]
    fn inversion_is_detected() {
        let spec = AlignmentSpec::chain(&["c", "o"], 3).unwrap();
        let o = spec.omega().clone();
        let level = o.element("[11]").unwrap();
        let dna = PointedAlphabet::dna();
        let tau = Segment::parse(&o, "([11][11])([11])([11])([11])([11][11][11][11])").unwrap();
        let shapes = [
            "([11][11])([22])([22])([11])([11])([11])([11][11][11][11])",
            "([11][11])([11])([22])([11])([22])([11])([11][11][11][11])",
            "([11][11])([11])([11])([11])([22])([22])([11][11][11][11])",
        ];
        let rows = [
            ["ACεεACGGTCA", "ACGCAεεGTCA"],
            ["ACAεCεGGTCA", "ACεGCAεGTCA"],
            ["ACACGεεGTCA", "ACεεGCAGTCA"],
        ];
        let nodes: Vec<Segment> = shapes.iter().map(|s| Segment::parse(&o, s).unwrap()).collect();
        let images = nodes
            .iter()
            .zip(rows)
            .map(|(s, r)| ObjectImage::Finite(vec![AlignedTuple::from_rows(&spec, &dna, s, level, &r).unwrap()]))
            .collect();
        let base = BaseCategory::full_quasi_homologous(nodes).unwrap();
        let f = AlignmentFunctor::new(base, spec, dna, level, images).unwrap();
        assert!(f.validate().is_empty());
        let hits = detect_mechanisms(&f, 0, &tau, &[MechanismTemplate::inversion()], &LimitOptions::default()).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].block_start, 2);
        assert_eq!(hits[0].z.render_plain(f.alphabet(), false), "ACACGGTCA");
    }

    #[test]
    fn offsets_count_preceding_positions() {
        assert_eq!(insertion_offsets(&[0, 1, 3, 4], 5), vec![2]);
        assert_eq!(insertion_offsets(&[0, 1, 4, 5], 6), vec![2, 2]);
        assert!(MechanismTemplate::custom("x", 1, vec![vec![2]]).is_err());
    }
}
