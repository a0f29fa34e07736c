//! Set partitions: refinement, join, distinctions and the two entropies.

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::prob::{Probability, Rational};
use crate::setspace::{SubsetKet, Universe};

/// Absolute tolerance for comparisons involving Shannon entropy.
pub const SHANNON_TOLERANCE: f64 = 1e-12;

/// Disjoint nonempty blocks covering a universe, ordered by least element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    universe: Universe,
    blocks: Vec<SubsetKet>,
}

impl Partition {
    pub fn new(universe: &Universe, mut blocks: Vec<SubsetKet>) -> Result<Self> {
        let mut seen = universe.empty();
        for b in &blocks {
            if b.universe() != universe {
                return Err(Error::UniverseMismatch);
            }
            if b.is_empty() {
                return Err(Error::Invalid("partition blocks must be nonempty".into()));
            }
            if !b.intersect(&seen)?.is_empty() {
                return Err(Error::Invalid("partition blocks must be disjoint".into()));
            }
            seen = seen.add(b)?;
        }
        if seen.len() != universe.size() {
            return Err(Error::Invalid("partition blocks must cover the universe".into()));
        }
        blocks.sort_by_key(|b| b.indices()[0]);
        Ok(Partition {
            universe: universe.clone(),
            blocks,
        })
    }

    /// Builds the partition in which elements `i` and `j` share a block iff
    /// `ids[i] == ids[j]`.
    pub fn from_block_ids(universe: &Universe, ids: &[usize]) -> Result<Self> {
        if ids.len() != universe.size() {
            return Err(Error::DimMismatch {
                expected: universe.size(),
                found: ids.len(),
            });
        }
        let distinct: BTreeSet<usize> = ids.iter().copied().collect();
        let blocks = distinct
            .into_iter()
            .map(|id| universe.ket_from_indices((0..ids.len()).filter(|&i| ids[i] == id)))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(universe, blocks)
    }

    /// The discrete partition `1` of singletons.
    pub fn discrete(universe: &Universe) -> Self {
        let ids: Vec<usize> = (0..universe.size()).collect();
        Partition::from_block_ids(universe, &ids).expect("valid ids")
    }

    /// The indiscrete partition `0` (the blob).
    pub fn indiscrete(universe: &Universe) -> Self {
        Partition::from_block_ids(universe, &vec![0; universe.size()]).expect("valid ids")
    }

    /// Parses blocks joined by `|`, e.g. `{a,b}|{c}`.
    pub fn parse(universe: &Universe, text: &str) -> Result<Self> {
        let blocks = text
            .split('|')
            .map(|b| universe.parse_subset(b))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(universe, blocks)
    }

    /// Every partition of the universe, via restricted growth strings.
    pub fn all(universe: &Universe) -> Vec<Partition> {
        let n = universe.size();
        let mut out = Vec::new();
        let mut ids = vec![0usize; n];
        fn rec(i: usize, max: usize, ids: &mut Vec<usize>, u: &Universe, out: &mut Vec<Partition>) {
            if i == ids.len() {
                out.push(Partition::from_block_ids(u, ids).expect("valid ids"));
                return;
            }
            for v in 0..=max + 1 {
                ids[i] = v;
                rec(i + 1, max.max(v), ids, u, out);
            }
        }
        // element 0 is always in block 0
        if n > 0 {
            rec(1, 0, &mut ids, universe, &mut out);
        }
        out
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn blocks(&self) -> &[SubsetKet] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.universe.size()
    }

    /// Index of the block containing element `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(i))
            .expect("blocks cover the universe")
    }

    fn block_ids(&self) -> Vec<usize> {
        (0..self.universe.size()).map(|i| self.block_of(i)).collect()
    }

    /// Block probabilities `|B|/|U|` in block order.
    pub fn block_probabilities(&self) -> Vec<Probability> {
        let n = self.universe.size();
        self.blocks
            .iter()
            .map(|b| Probability::ratio(b.len(), n).expect("block within universe"))
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("|"))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.blocks.len()))?;
        for b in &self.blocks {
            seq.serialize_element(b)?;
        }
        seq.end()
    }
}

/// Ordered pairs of elements lying in distinct blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DitSet {
    universe: Universe,
    pairs: BTreeSet<(usize, usize)>,
}

impl DitSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i, j))
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn label_pairs(&self) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|&(i, j)| (self.universe.label(i).to_string(), self.universe.label(j).to_string()))
            .collect()
    }

    pub fn is_subset(&self, other: &DitSet) -> bool {
        self.pairs.is_subset(&other.pairs)
    }
}

pub fn dit_set(p: &Partition) -> DitSet {
    let ids = p.block_ids();
    let n = ids.len();
    let pairs = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| ids[i] != ids[j])
        .collect();
    DitSet {
        universe: p.universe.clone(),
        pairs,
    }
}

/// Partition whose blocks are the nonempty intersections of blocks of `p` and `q`.
pub fn join(p: &Partition, q: &Partition) -> Result<Partition> {
    if p.universe != q.universe {
        return Err(Error::UniverseMismatch);
    }
    let mut blocks = Vec::new();
    for b in &p.blocks {
        for c in &q.blocks {
            let i = b.intersect(c)?;
            if !i.is_empty() {
                blocks.push(i);
            }
        }
    }
    Partition::new(&p.universe, blocks)
}

/// `q ⪯ p`: every block of `p` lies inside some block of `q`.
pub fn refines(q: &Partition, p: &Partition) -> Result<bool> {
    if p.universe != q.universe {
        return Err(Error::UniverseMismatch);
    }
    for b in &p.blocks {
        let mut inside = false;
        for c in &q.blocks {
            if b.is_subset_of(c)? {
                inside = true;
                break;
            }
        }
        if !inside {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Normalized distinction count `|dit(p)| / |U|^2`.
pub fn logical_entropy(p: &Partition) -> Probability {
    let n = p.universe.size();
    Probability::ratio(dit_set(p).len(), n * n).expect("dits fit in U×U")
}

/// Base-2 Shannon entropy of the block probabilities.
pub fn shannon_entropy(p: &Partition) -> f64 {
    p.block_probabilities()
        .iter()
        .map(|pb| {
            let x = pb.to_f64();
            -x * x.log2()
        })
        .sum::<f64>()
        + 0.0
}

/// For a block of probability `p_b`: its logical entropy `1 - p_b` and its
/// Shannon entropy `log2(1/p_b)`, related by `h = 1 - 2^(-H)`.
pub fn block_entropy_relation(p_b: Probability) -> Result<(Probability, f64)> {
    if p_b.is_zero() {
        return Err(Error::OutOfRange(p_b.to_string()));
    }
    Ok((p_b.complement(), -p_b.to_f64().log2() + 0.0))
}

/// `1 - Σ p_B^2`, the block-probability form of logical entropy.
pub fn logical_entropy_from_blocks(p: &Partition) -> Probability {
    let sum: Rational = p
        .block_probabilities()
        .iter()
        .map(|b| b.value() * b.value())
        .sum();
    Probability::new(Rational::from_integer(1) - sum).expect("in range")
}
