//! Universes, subsets as kets over Z2, alternative bases, brackets and the
//! set-level Born rule.
//!
//! A [`BasisFrame`] is always anchored to a canonical [`Universe`]: its matrix
//! columns are the frame's basis kets written in canonical coordinates. Two
//! kets are "the same ket" when their canonical coordinates agree.

use std::fmt;
use std::sync::Arc;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::{BitVec, Gf2Matrix};
use crate::prob::Probability;

/// Maps ASCII primes to the typographic ones, so `a'` and `a′` name the
/// same element.
pub fn normalize_label(label: &str) -> String {
    label.trim().replace("''", "″").replace('\'', "′")
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Universe(Arc<[String]>);

impl Universe {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let labels: Vec<String> = labels
            .into_iter()
            .map(|l| normalize_label(l.as_ref()))
            .collect();
        if labels.is_empty() {
            return Err(Error::Invalid("a universe needs at least one element".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.contains([',', '{', '}', '|', '(', ')']) {
                return Err(Error::Invalid(format!("bad element label `{l}`")));
            }
            if labels[..i].contains(l) {
                return Err(Error::Invalid(format!("duplicate element label `{l}`")));
            }
        }
        Ok(Universe(labels.into()))
    }

    /// Parses `a,b,c` (braces optional).
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
        Universe::new(inner.split(',').map(str::trim).filter(|s| !s.is_empty()))
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        let label = normalize_label(label);
        self.0
            .iter()
            .position(|l| *l == label)
            .ok_or(Error::UnknownLabel(label))
    }

    pub fn empty(&self) -> SubsetKet {
        SubsetKet {
            universe: self.clone(),
            bits: BitVec::zeros(self.size()),
        }
    }

    pub fn full(&self) -> SubsetKet {
        self.ket_from_indices(0..self.size())
            .expect("indices are in range")
    }

    pub fn singleton(&self, i: usize) -> SubsetKet {
        self.ket_from_indices([i]).expect("index in range")
    }

    pub fn ket_from_indices<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<SubsetKet> {
        Ok(SubsetKet {
            universe: self.clone(),
            bits: BitVec::from_indices(self.size(), indices)?,
        })
    }

    pub fn ket_from_bits(&self, bits: BitVec) -> Result<SubsetKet> {
        if bits.len() != self.size() {
            return Err(Error::DimMismatch {
                expected: self.size(),
                found: bits.len(),
            });
        }
        Ok(SubsetKet {
            universe: self.clone(),
            bits,
        })
    }

    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<SubsetKet> {
        let idx = labels
            .iter()
            .map(|l| self.index_of(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.ket_from_indices(idx)
    }

    /// Parses a subset literal such as `{a,b}`, `{}` or `∅`.
    pub fn parse_subset(&self, text: &str) -> Result<SubsetKet> {
        let t = text.trim();
        if t == "∅" {
            return Ok(self.empty());
        }
        let inner = t
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::Invalid(format!("expected a subset like {{a,b}}, got `{t}`")))?;
        let labels: Vec<&str> = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        self.subset(&labels)
    }

    /// All 2^n subsets in binary-counter order (bit i = element i).
    pub fn all_subsets(&self) -> impl Iterator<Item = SubsetKet> + '_ {
        assert!(self.size() < 32, "universe too large to enumerate");
        (0u64..1 << self.size()).map(move |x| SubsetKet {
            universe: self.clone(),
            bits: BitVec::from_u64(self.size(), x),
        })
    }
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Universe{{{}}}", self.0.join(","))
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.join(","))
    }
}

/// A subset of a universe, read as a vector in Z2^n.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsetKet {
    universe: Universe,
    bits: BitVec,
}

impl SubsetKet {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    /// Cardinality of the subset.
    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.bits.iter_ones().collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.bits
            .iter_ones()
            .map(|i| self.universe.label(i).to_string())
            .collect()
    }

    pub(crate) fn same_universe(&self, other: &SubsetKet) -> Result<()> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch);
        }
        Ok(())
    }

    /// Symmetric difference, i.e. vector addition in Z2^n.
    pub fn add(&self, other: &SubsetKet) -> Result<SubsetKet> {
        self.same_universe(other)?;
        Ok(SubsetKet {
            universe: self.universe.clone(),
            bits: self.bits.add(&other.bits)?,
        })
    }

    pub fn intersect(&self, other: &SubsetKet) -> Result<SubsetKet> {
        self.same_universe(other)?;
        Ok(SubsetKet {
            universe: self.universe.clone(),
            bits: self.bits.and(&other.bits)?,
        })
    }

    pub fn is_subset_of(&self, other: &SubsetKet) -> Result<bool> {
        self.same_universe(other)?;
        self.bits.is_subset_of(&other.bits)
    }
}

impl fmt::Display for SubsetKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "{{{}}}", self.labels().join(","))
    }
}

impl fmt::Debug for SubsetKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for SubsetKet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let labels = self.labels();
        let mut seq = s.serialize_seq(Some(labels.len()))?;
        for l in &labels {
            seq.serialize_element(l)?;
        }
        seq.end()
    }
}

/// Basis-dependent bracket `<T|S> = |T ∩ S|`, an integer outside Z2.
pub fn bracket(t: &SubsetKet, s: &SubsetKet) -> Result<usize> {
    Ok(t.intersect(s)?.len())
}

/// Squared norm `|S|`. Square roots are left to display code.
pub fn norm_sq(s: &SubsetKet) -> usize {
    s.len()
}

/// Singletons whose sum is `s`.
pub fn resolve(s: &SubsetKet) -> Vec<SubsetKet> {
    s.bits.iter_ones().map(|i| s.universe.singleton(i)).collect()
}

/// An alternative basis of Z2^n, given by its basis kets in canonical
/// coordinates and a fresh set of labels for them.
#[derive(Clone, PartialEq, Eq)]
pub struct BasisFrame {
    name: String,
    anchor: Universe,
    universe: Universe,
    matrix: Gf2Matrix,
}

impl BasisFrame {
    pub fn new<S: AsRef<str>>(
        name: &str,
        labels: &[S],
        columns: &[SubsetKet],
    ) -> Result<Self> {
        let anchor = columns
            .first()
            .map(|c| c.universe().clone())
            .ok_or_else(|| Error::Invalid("a frame needs at least one basis ket".into()))?;
        for c in columns {
            if *c.universe() != anchor {
                return Err(Error::UniverseMismatch);
            }
        }
        if columns.len() != anchor.size() {
            return Err(Error::DimMismatch {
                expected: anchor.size(),
                found: columns.len(),
            });
        }
        let universe = Universe::new(labels.iter().map(AsRef::as_ref))?;
        if universe.size() != anchor.size() {
            return Err(Error::DimMismatch {
                expected: anchor.size(),
                found: universe.size(),
            });
        }
        let bits: Vec<BitVec> = columns.iter().map(|c| c.bits().clone()).collect();
        let matrix = Gf2Matrix::from_columns(&bits)?;
        Self::from_matrix(name, anchor, universe, matrix)
    }

    pub fn from_matrix(
        name: &str,
        anchor: Universe,
        universe: Universe,
        matrix: Gf2Matrix,
    ) -> Result<Self> {
        let n = anchor.size();
        if matrix.rows() != n || universe.size() != n {
            return Err(Error::DimMismatch {
                expected: n,
                found: matrix.rows(),
            });
        }
        if !matrix.is_nonsingular()? {
            return Err(Error::Singular);
        }
        Ok(BasisFrame {
            name: name.to_string(),
            anchor,
            universe,
            matrix,
        })
    }

    /// The frame of the universe's own singletons.
    pub fn canonical(name: &str, universe: &Universe) -> Self {
        BasisFrame {
            name: name.to_string(),
            anchor: universe.clone(),
            universe: universe.clone(),
            matrix: Gf2Matrix::identity(universe.size()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn anchor(&self) -> &Universe {
        &self.anchor
    }

    /// The frame's own labelled universe (e.g. `{a′,b′,c′}`).
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn matrix(&self) -> &Gf2Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.anchor.size()
    }

    /// Basis ket `j` in canonical coordinates.
    pub fn column(&self, j: usize) -> SubsetKet {
        SubsetKet {
            universe: self.anchor.clone(),
            bits: self.matrix.column(j),
        }
    }

    /// Converts a ket written in this frame back to canonical coordinates.
    pub fn to_canonical(&self, s: &SubsetKet) -> Result<SubsetKet> {
        if *s.universe() == self.anchor && self.anchor == self.universe {
            return Ok(s.clone());
        }
        if *s.universe() != self.universe {
            return Err(mismatch(self.dim(), s));
        }
        Ok(SubsetKet {
            universe: self.anchor.clone(),
            bits: self.matrix.apply(&s.bits)?,
        })
    }
}

fn mismatch(dim: usize, s: &SubsetKet) -> Error {
    if s.universe().size() != dim {
        Error::DimMismatch {
            expected: dim,
            found: s.universe().size(),
        }
    } else {
        Error::UniverseMismatch
    }
}

impl fmt::Debug for BasisFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BasisFrame({} = {} over {})", self.name, self.universe, self.anchor)
    }
}

/// Coordinates of `s` (given in the frame's anchor, or already in the frame)
/// with respect to `frame`.
pub fn to_basis(s: &SubsetKet, frame: &BasisFrame) -> Result<SubsetKet> {
    if *s.universe() == frame.universe {
        return Ok(s.clone());
    }
    if *s.universe() != frame.anchor {
        return Err(mismatch(frame.dim(), s));
    }
    Ok(SubsetKet {
        universe: frame.universe.clone(),
        bits: frame.matrix.solve(&s.bits)?,
    })
}

/// Born rule in a frame: `Pr(u|S) = <{u}|S>^2 / ||S||^2` on the frame's
/// coordinates of `s`. Entries follow the frame's label order.
pub fn born(s: &SubsetKet, frame: &BasisFrame) -> Result<Vec<(String, Probability)>> {
    let coords = to_basis(s, frame)?;
    let total = norm_sq(&coords);
    if total == 0 {
        return Err(Error::ZeroState);
    }
    let universe = coords.universe().clone();
    (0..universe.size())
        .map(|i| {
            let single = universe.singleton(i);
            let amp = bracket(&single, &coords)?;
            Ok((universe.label(i).to_string(), Probability::ratio(amp * amp, total)?))
        })
        .collect()
}

/// Every ket of the space written in each of the given frames.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KetTable {
    pub frames: Vec<String>,
    pub rows: Vec<Vec<SubsetKet>>,
}

/// Rows are ordered by descending cardinality of the canonical subset, then
/// lexicographically by element positions.
pub fn ket_table(dim: usize, frames: &[BasisFrame]) -> Result<KetTable> {
    let first = frames
        .first()
        .ok_or_else(|| Error::Invalid("a ket table needs at least one frame".into()))?;
    let anchor = first.anchor().clone();
    for f in frames {
        if f.dim() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                found: f.dim(),
            });
        }
        if *f.anchor() != anchor {
            return Err(Error::UniverseMismatch);
        }
    }
    let mut kets: Vec<SubsetKet> = anchor.all_subsets().collect();
    kets.sort_by(|x, y| y.len().cmp(&x.len()).then_with(|| x.indices().cmp(&y.indices())));
    let rows = kets
        .iter()
        .map(|k| frames.iter().map(|f| to_basis(k, f)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(KetTable {
        frames: frames.iter().map(|f| f.name().to_string()).collect(),
        rows,
    })
}

impl KetTable {
    /// Column-aligned plain text, one ket per line.
    pub fn render_text(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        render_columns(&self.frames, &cells)
    }
}

/// Column-aligned text with a header row and a rule line.
pub fn render_columns(header: &[String], rows: &[Vec<String>]) -> String {
    let width = |s: &str| s.chars().count();
    let mut widths: Vec<usize> = header.iter().map(|h| width(h)).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(width(c));
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - width(c))))
            .collect();
        padded.join(" | ").trim_end().to_string()
    };
    let mut out = line(header);
    out.push('\n');
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&rule.join("-+-"));
    out.push('\n');
    for r in rows {
        out.push_str(&line(r));
        out.push('\n');
    }
    out
}

impl Serialize for KetTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Row<'a>(&'a [String], &'a [SubsetKet]);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (name, ket) in self.0.iter().zip(self.1) {
                    map.serialize_entry(name, ket)?;
                }
                map.end()
            }
        }
        let mut seq = s.serialize_seq(Some(self.rows.len()))?;
        for r in &self.rows {
            seq.serialize_element(&Row(&self.frames, r))?;
        }
        seq.end()
    }
}
