//! Pointed alphabets, words over truncations and aligned tuples of words.
//!
//! A [`Word`] stores one letter per truncated position of its segment. Gap
//! insertion along a segment morphism fills positions sent to the basepoint
//! with the gap letter. An [`AlignedTuple`] is one word per individual of an
//! [`AlignmentSpec`], each over the segment recolored by that individual's
//! projection.
//!
//! # Example
//!
//! ```
//! use segalign_core::environment::{word_image, PointedAlphabet, Word};
//! use segalign_core::preorder::boolean_preorder;
//! use segalign_core::segments::{Segment, SegmentMorphism};
//! use std::sync::Arc;
//!
//! let b = Arc::new(boolean_preorder());
//! let dna = PointedAlphabet::dna();
//! let src = Segment::parse(&b, "(•••)(•)").unwrap();
//! let dst = Segment::parse(&b, "(•••••)(•)").unwrap();
//! let m = SegmentMorphism::new(src.clone(), dst, vec![0, 1, 2, 5]).unwrap();
//! let w = Word::parse(&src, 1, &dna, "(AGC)(T)").unwrap();
//! assert_eq!(word_image(&m, &w, &dna).unwrap().render(&dna, true), "(AGCεε)(T)");
//! ```

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::preorder::{boolean_preorder, chain_preorder, product, same_preorder, MonotoneMap, Preorder};
use crate::segments::{push_colors, push_colors_morphism, Segment, SegmentMorphism};
use crate::truncation::{truncate, truncate_morphism, Pointed};

/// A finite alphabet with a distinguished gap letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointedAlphabet {
    symbols: Vec<String>,
    basepoint: u8,
}

impl PointedAlphabet {
    /// Builds an alphabet from distinct symbols and the basepoint label.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidInput`] for duplicate symbols, more than 255
    /// symbols, or a basepoint that is not a symbol.
    pub fn new(symbols: Vec<String>, basepoint: &str) -> Result<Self> {
        if symbols.len() > 255 {
            return Err(Error::InvalidInput("alphabet has more than 255 symbols".to_string()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::InvalidInput(format!("duplicate symbol `{s}`")));
            }
        }
        let basepoint = symbols
            .iter()
            .position(|s| s == basepoint)
            .ok_or_else(|| Error::InvalidInput(format!("basepoint `{basepoint}` is not a symbol")))?;
        Ok(Self {
            symbols,
            basepoint: basepoint as u8,
        })
    }

    /// `A, C, G, T` with the gap `eps`.
    pub fn dna() -> Self {
        Self::new(
            ["A", "C", "G", "T", "eps"].iter().map(|s| s.to_string()).collect(),
            "eps",
        )
        .expect("fixed alphabet is valid")
    }

    /// The first `k` capital letters with the gap `eps`.
    pub fn letters(k: usize) -> Self {
        let mut symbols: Vec<String> = (0..k.min(26)).map(|i| char::from(b'A' + i as u8).to_string()).collect();
        symbols.push("eps".to_string());
        Self::new(symbols, "eps").expect("generated alphabet is valid")
    }

    /// Symbols in canonical order.
    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// Number of symbols, gap included.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Whether the alphabet is empty, which never holds.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Index of the gap letter.
    pub fn basepoint(&self) -> u8 {
        self.basepoint
    }

    /// Index of a symbol, with `ε`, `e` and `-` read as the gap when they
    /// are not symbols themselves.
    pub fn index_of(&self, token: &str) -> Option<u8> {
        if let Some(i) = self.symbols.iter().position(|s| s == token) {
            return Some(i as u8);
        }
        match token {
            "ε" | "e" | "-" => Some(self.basepoint),
            _ => None,
        }
    }

    /// Rendering of a letter, the gap as `ε` or `e`.
    pub fn render(&self, letter: u8, unicode_gap: bool) -> &str {
        if letter == self.basepoint {
            if unicode_gap {
                "ε"
            } else {
                "e"
            }
        } else {
            &self.symbols[letter as usize]
        }
    }

    /// Letter indices of a gap-free sequence of one-character symbols.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidWord`] for unknown characters or gaps.
    pub fn encode(&self, text: &str) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(text.len());
        for c in text.chars() {
            let mut buf = [0u8; 4];
            let l = self
                .index_of(c.encode_utf8(&mut buf))
                .ok_or_else(|| Error::InvalidWord(format!("unknown letter `{c}` in `{text}`")))?;
            if l == self.basepoint {
                return Err(Error::InvalidWord(format!("gap letter inside sequence `{text}`")));
            }
            out.push(l);
        }
        Ok(out)
    }
}

/// A word on the truncation of a segment at some level.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    segment: Segment,
    level: usize,
    letters: Vec<u8>,
}

impl Word {
    /// Builds a word from one letter per truncated position.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidWord`] when the length does not match the
    /// truncation, and truncation errors for a bad level.
    pub fn new(segment: Segment, level: usize, letters: Vec<u8>) -> Result<Self> {
        let tr = truncate(&segment, level)?;
        if tr.len() != letters.len() {
            return Err(Error::InvalidWord(format!(
                "{} letters for a truncation of size {}",
                letters.len(),
                tr.len()
            )));
        }
        Ok(Self {
            segment,
            level,
            letters,
        })
    }

    /// Parses a word, ignoring parentheses and whitespace.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidWord`] for unknown letters or a wrong length.
    pub fn parse(segment: &Segment, level: usize, alphabet: &PointedAlphabet, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        let mut chars = text.chars();
        while let Some(c) = chars.next() {
            if c == '(' || c == ')' || c.is_whitespace() {
                continue;
            }
            let token = if c == '[' {
                let mut s = String::new();
                for d in chars.by_ref() {
                    if d == ']' {
                        break;
                    }
                    s.push(d);
                }
                s
            } else {
                c.to_string()
            };
            letters.push(
                alphabet
                    .index_of(&token)
                    .ok_or_else(|| Error::InvalidWord(format!("unknown letter `{token}` in `{text}`")))?,
            );
        }
        Self::new(segment.clone(), level, letters)
    }

    /// Underlying segment.
    pub fn segment(&self) -> &Segment {
        &self.segment
    }

    /// Truncation level.
    pub fn level(&self) -> usize {
        self.level
    }

    /// Letters in truncation order.
    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// Truncated positions carrying the letters.
    pub fn positions(&self) -> Vec<usize> {
        truncate(&self.segment, self.level)
            .map(|t| t.indices().to_vec())
            .unwrap_or_default()
    }

    /// Letter at a node position, if the position is truncated.
    pub fn letter_at(&self, position: usize) -> Option<u8> {
        let positions = self.positions();
        positions.binary_search(&position).ok().map(|r| self.letters[r])
    }

    /// Patch-bracketed rendering; patches without truncated positions are
    /// omitted.
    pub fn render(&self, alphabet: &PointedAlphabet, unicode_gap: bool) -> String {
        let positions = self.positions();
        let mut out = String::new();
        let mut r = 0;
        for p in 0..self.segment.n0() {
            let range = self.segment.patch_range(p);
            let start = r;
            while r < positions.len() && range.contains(&positions[r]) {
                r += 1;
            }
            if r > start {
                out.push('(');
                for &l in &self.letters[start..r] {
                    out.push_str(alphabet.render(l, unicode_gap));
                }
                out.push(')');
            }
        }
        out
    }

    /// Letters only, without patch brackets.
    pub fn render_plain(&self, alphabet: &PointedAlphabet, unicode_gap: bool) -> String {
        self.letters.iter().map(|&l| alphabet.render(l, unicode_gap)).collect()
    }
}

/// The image of `w` along `m`: letters follow the pointed index map and
/// positions sent to the basepoint receive the gap letter.
///
/// # Errors
///
/// Returns [`Error::EndpointMismatch`] when `w` is not over `m.src()`.
pub fn word_image(m: &SegmentMorphism, w: &Word, alphabet: &PointedAlphabet) -> Result<Word> {
    if &w.segment != m.src() || !same_preorder(w.segment.omega(), m.src().omega()) {
        return Err(Error::EndpointMismatch(format!(
            "word over {} cannot move along a morphism from {}",
            w.segment,
            m.src()
        )));
    }
    let pointed = truncate_morphism(m, w.level)?;
    let src_positions = pointed.cod();
    let letters = pointed
        .mapping()
        .iter()
        .map(|p| match p {
            Pointed::At(i) => w.letters[src_positions.rank(*i).expect("mapped into truncation")],
            Pointed::Star => alphabet.basepoint(),
        })
        .collect();
    Ok(Word {
        segment: m.dst().clone(),
        level: w.level,
        letters,
    })
}

/// Lexicographic iterator over all words on a truncation.
#[derive(Debug, Clone)]
pub struct WordIter {
    segment: Segment,
    level: usize,
    radix: u8,
    next: Option<Vec<u8>>,
}

impl Iterator for WordIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut advanced = false;
        for x in succ.iter_mut().rev() {
            if *x + 1 < self.radix {
                *x += 1;
                advanced = true;
                break;
            }
            *x = 0;
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(Word {
            segment: self.segment.clone(),
            level: self.level,
            letters: current,
        })
    }
}

/// Iterates over every word on `Tr_b(s)` in lexicographic order.
///
/// # Errors
///
/// Returns truncation errors for a bad level.
pub fn enumerate_words(s: &Segment, b: usize, alphabet: &PointedAlphabet) -> Result<WordIter> {
    let tr = truncate(s, b)?;
    let radix = alphabet.len() as u8;
    Ok(WordIter {
        segment: s.clone(),
        level: b,
        radix,
        next: (radix > 0 || tr.is_empty()).then(|| vec![0; tr.len()]),
    })
}

/// Every word on `Tr_b(s)`, refusing to materialize more than `cap`.
///
/// # Errors
///
/// Returns [`Error::ResourceCap`] when `|alphabet|^|Tr_b(s)|` exceeds `cap`.
pub fn words_capped(s: &Segment, b: usize, alphabet: &PointedAlphabet, cap: u128) -> Result<Vec<Word>> {
    let n = truncate(s, b)?.len();
    let needed = (alphabet.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if needed > cap {
        return Err(Error::ResourceCap {
            what: format!("words on a truncation of size {n}"),
            needed,
            cap,
        });
    }
    Ok(enumerate_words(s, b, alphabet)?.collect())
}

/// A labelled family of monotone maps out of a common pre-order.
#[derive(Debug, Clone)]
pub struct AlignmentSpec {
    omega: Arc<Preorder>,
    labels: Vec<String>,
    maps: Vec<MonotoneMap>,
}

impl AlignmentSpec {
    /// Builds a specification.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidInput`] for duplicate labels or a count
    /// mismatch, and [`Error::PreorderMismatch`] when a map does not start
    /// at `omega`.
    pub fn new(omega: Arc<Preorder>, labels: Vec<String>, maps: Vec<MonotoneMap>) -> Result<Self> {
        if labels.len() != maps.len() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} maps",
                labels.len(),
                maps.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidInput(format!("duplicate index label `{l}`")));
            }
        }
        if let Some(m) = maps.iter().find(|m| !same_preorder(m.dom(), &omega)) {
            return Err(Error::PreorderMismatch(format!(
                "map with domain of size {} does not start at the specification order",
                m.dom().len()
            )));
        }
        Ok(Self { omega, labels, maps })
    }

    /// `{0,1}^k` with its projections, one per label.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidInput`] for an empty or duplicated label list.
    pub fn boolean<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        Self::chain(labels, 2)
    }

    /// `{0 <= .. <= levels-1}^k` with its projections, one per label.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidInput`] for an empty or duplicated label list.
    pub fn chain<S: AsRef<str>>(labels: &[S], levels: usize) -> Result<Self> {
        let factor = Arc::new(if levels == 2 {
            boolean_preorder()
        } else {
            chain_preorder(levels)
        });
        let factors = vec![factor; labels.len()];
        let (omega, proj) = product(&factors)?;
        Self::new(omega, labels.iter().map(|l| l.as_ref().to_string()).collect(), proj)
    }

    /// The common domain.
    pub fn omega(&self) -> &Arc<Preorder> {
        &self.omega
    }

    /// Index labels in order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Map of every index.
    pub fn maps(&self) -> &[MonotoneMap] {
        &self.maps
    }

    /// Number of indices.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Whether there are no indices.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Position of a label.
    ///
    /// # Errors
    ///
    /// Returns [`Error::UnknownElement`] for an unknown label.
    pub fn index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownElement(format!("index `{label}`")))
    }
}

/// One word per index, over the recolored segment at the mapped level.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlignedTuple {
    segment: Segment,
    level: usize,
    components: Vec<Word>,
}

impl AlignedTuple {
    /// Builds a tuple and checks every component.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidWord`] when a component is not over the
    /// recolored segment at the mapped level.
    pub fn new(spec: &AlignmentSpec, segment: Segment, level: usize, components: Vec<Word>) -> Result<Self> {
        if components.len() != spec.len() {
            return Err(Error::InvalidWord(format!(
                "{} components for {} indices",
                components.len(),
                spec.len()
            )));
        }
        for (i, (w, f)) in components.iter().zip(spec.maps()).enumerate() {
            let pushed = push_colors(f, &segment)?;
            if w.segment != pushed || w.level != f.apply(level) {
                return Err(Error::InvalidWord(format!(
                    "component `{}` is not over the recolored segment",
                    spec.labels()[i]
                )));
            }
        }
        Ok(Self {
            segment,
            level,
            components,
        })
    }

    /// Builds a tuple from one text row per index; rows of components with
    /// an empty truncation may be empty.
    ///
    /// # Errors
    ///
    /// Returns the errors of [`Word::parse`].
    pub fn from_rows<S: AsRef<str>>(
        spec: &AlignmentSpec,
        alphabet: &PointedAlphabet,
        segment: &Segment,
        level: usize,
        rows: &[S],
    ) -> Result<Self> {
        if rows.len() != spec.len() {
            return Err(Error::InvalidWord(format!(
                "{} rows for {} indices",
                rows.len(),
                spec.len()
            )));
        }
        let components = spec
            .maps()
            .iter()
            .zip(rows)
            .map(|(f, row)| {
                let pushed = push_colors(f, segment)?;
                Word::parse(&pushed, f.apply(level), alphabet, row.as_ref())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            segment: segment.clone(),
            level,
            components,
        })
    }

    /// Underlying segment.
    pub fn segment(&self) -> &Segment {
        &self.segment
    }

    /// Level in the specification order.
    pub fn level(&self) -> usize {
        self.level
    }

    /// Components in index order.
    pub fn components(&self) -> &[Word] {
        &self.components
    }
}

/// The image of an aligned tuple along `m`, componentwise.
///
/// # Errors
///
/// Returns [`Error::EndpointMismatch`] when `x` is not over `m.src()`.
pub fn aligned_image(
    spec: &AlignmentSpec,
    m: &SegmentMorphism,
    x: &AlignedTuple,
    alphabet: &PointedAlphabet,
) -> Result<AlignedTuple> {
    if &x.segment != m.src() {
        return Err(Error::EndpointMismatch(format!(
            "tuple over {} cannot move along a morphism from {}",
            x.segment,
            m.src()
        )));
    }
    let components = spec
        .maps()
        .iter()
        .zip(&x.components)
        .map(|(f, w)| word_image(&push_colors_morphism(f, m)?, w, alphabet))
        .collect::<Result<Vec<_>>>()?;
    Ok(AlignedTuple {
        segment: m.dst().clone(),
        level: x.level,
        components,
    })
}

/// The component of `x` at index `i`.
///
/// # Errors
///
/// Returns [`Error::UnknownElement`] when `i` is out of range.
pub fn project(x: &AlignedTuple, i: usize) -> Result<&Word> {
    x.components
        .get(i)
        .ok_or_else(|| Error::UnknownElement(format!("index {i}")))
}
