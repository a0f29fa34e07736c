//! Subsets of product universes: separated versus entangled states, their
//! equiprobable joint distributions, and the Bell inequality construction on
//! `Z2^2 ⊗ Z2^2`.
//!
//! Pair `(i, j)` of `X × Y` sits at index `i·|Y| + j`; the left factor is the
//! outer index everywhere, matching `Gf2Matrix::kron`.

use std::fmt;

use num_traits::Zero;
use serde::ser::{SerializeMap, SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::prob::{rational_string, Probability, Rational};
use crate::setspace::{born, normalize_label, render_columns, BasisFrame, SubsetKet, Universe};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductUniverse {
    left: Universe,
    right: Universe,
}

impl ProductUniverse {
    pub fn new(left: Universe, right: Universe) -> Self {
        ProductUniverse { left, right }
    }

    pub fn left(&self) -> &Universe {
        &self.left
    }

    pub fn right(&self) -> &Universe {
        &self.right
    }

    pub fn size(&self) -> usize {
        self.left.size() * self.right.size()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.right.size() + j
    }

    pub fn pair(&self, k: usize) -> (usize, usize) {
        (k / self.right.size(), k % self.right.size())
    }

    pub fn state_from_bits(&self, bits: BitVec) -> Result<ProductState> {
        if bits.len() != self.size() {
            return Err(Error::DimMismatch {
                expected: self.size(),
                found: bits.len(),
            });
        }
        if bits.is_zero() {
            return Err(Error::ZeroState);
        }
        Ok(ProductState {
            universe: self.clone(),
            bits,
        })
    }

    pub fn state<S: AsRef<str>>(&self, pairs: &[(S, S)]) -> Result<ProductState> {
        let idx = pairs
            .iter()
            .map(|(l, r)| Ok(self.index(self.left.index_of(l.as_ref())?, self.right.index_of(r.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        self.state_from_bits(BitVec::from_indices(self.size(), idx)?)
    }

    /// Parses `{(a,a),(b,b)}`.
    pub fn parse_state(&self, text: &str) -> Result<ProductState> {
        let t = text.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::Invalid(format!("expected pairs like {{(a,b)}}, got `{t}`")))?;
        let mut pairs = Vec::new();
        let mut rest = inner.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Invalid(format!("expected `(` in `{t}`")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::Invalid(format!("unclosed pair in `{t}`")))?;
            let (l, r) = body[..close]
                .split_once(',')
                .ok_or_else(|| Error::Invalid(format!("pair needs two labels in `{t}`")))?;
            pairs.push((normalize_label(l), normalize_label(r)));
            rest = body[close + 1..].trim_start().trim_start_matches(',').trim_start();
        }
        self.state(&pairs)
    }

    /// All nonempty subsets of `X × Y`.
    pub fn all_states(&self) -> impl Iterator<Item = ProductState> + '_ {
        assert!(self.size() < 32, "product universe too large to enumerate");
        (1u64..1 << self.size()).map(move |x| ProductState {
            universe: self.clone(),
            bits: BitVec::from_u64(self.size(), x),
        })
    }
}

/// A nonempty subset of a product universe.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProductState {
    universe: ProductUniverse,
    bits: BitVec,
}

impl ProductState {
    pub fn universe(&self) -> &ProductUniverse {
        &self.universe
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.bits.iter_ones().map(|k| self.universe.pair(k)).collect()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.bits.get(self.universe.index(i, j))
    }

    pub fn label_pairs(&self) -> Vec<(String, String)> {
        self.pairs()
            .into_iter()
            .map(|(i, j)| {
                (
                    self.universe.left.label(i).to_string(),
                    self.universe.right.label(j).to_string(),
                )
            })
            .collect()
    }
}

impl fmt::Display for ProductState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .label_pairs()
            .into_iter()
            .map(|(l, r)| format!("({l},{r})"))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for ProductState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for ProductState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs = self.label_pairs();
        let mut seq = s.serialize_seq(Some(pairs.len()))?;
        for (l, r) in &pairs {
            seq.serialize_element(&[l, r])?;
        }
        seq.end()
    }
}

/// Projections `S_X` and `S_Y` onto the two factors.
pub fn supports(s: &ProductState) -> (SubsetKet, SubsetKet) {
    let pairs = s.pairs();
    let left = s
        .universe
        .left
        .ket_from_indices(pairs.iter().map(|p| p.0))
        .expect("indices in range");
    let right = s
        .universe
        .right
        .ket_from_indices(pairs.iter().map(|p| p.1))
        .expect("indices in range");
    (left, right)
}

/// `S = S_X × S_Y`. Since `S ⊆ S_X × S_Y` always, comparing sizes suffices.
pub fn is_separated(s: &ProductState) -> bool {
    let (x, y) = supports(s);
    s.len() == x.len() * y.len()
}

/// The equiprobable distribution on a product state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDistribution {
    support: ProductState,
}

impl JointDistribution {
    pub fn equiprobable(support: &ProductState) -> Self {
        JointDistribution {
            support: support.clone(),
        }
    }

    pub fn support(&self) -> &ProductState {
        &self.support
    }

    pub fn prob(&self, i: usize, j: usize) -> Probability {
        if self.support.contains(i, j) {
            Probability::ratio(1, self.support.len()).expect("nonempty support")
        } else {
            Probability::zero()
        }
    }
}

pub type Marginal = Vec<(String, Probability)>;

pub fn marginals(d: &JointDistribution) -> (Marginal, Marginal) {
    let pu = &d.support.universe;
    let n = d.support.len();
    let mut left = vec![0usize; pu.left.size()];
    let mut right = vec![0usize; pu.right.size()];
    for (i, j) in d.support.pairs() {
        left[i] += 1;
        right[j] += 1;
    }
    let side = |u: &Universe, counts: Vec<usize>| -> Marginal {
        u.labels()
            .iter()
            .cloned()
            .zip(counts.into_iter().map(|c| Probability::ratio(c, n).expect("count within support")))
            .collect()
    };
    (side(&pu.left, left), side(&pu.right, right))
}

/// Exact test of `Pr(x,y) = Pr(x)·Pr(y)` at every pair.
pub fn is_independent(d: &JointDistribution) -> bool {
    let (left, right) = marginals(d);
    left.iter().enumerate().all(|(i, (_, px))| {
        right
            .iter()
            .enumerate()
            .all(|(j, (_, py))| d.prob(i, j) == *px * *py)
    })
}

/// Rewrites a product state in the basis `left_frame ⊗ right_frame`.
pub fn product_to_frame(
    s: &ProductState,
    left_frame: &BasisFrame,
    right_frame: &BasisFrame,
) -> Result<ProductState> {
    let target = ProductUniverse::new(left_frame.universe().clone(), right_frame.universe().clone());
    if s.universe == target {
        return Ok(s.clone());
    }
    if s.universe.left.size() != left_frame.dim() || s.universe.right.size() != right_frame.dim() {
        return Err(Error::DimMismatch {
            expected: left_frame.dim() * right_frame.dim(),
            found: s.universe.size(),
        });
    }
    if s.universe.left != *left_frame.anchor() || s.universe.right != *right_frame.anchor() {
        return Err(Error::UniverseMismatch);
    }
    let m = left_frame.matrix().kron(right_frame.matrix());
    target.state_from_bits(m.solve(&s.bits)?)
}

fn measure_side(s: &ProductState, frame: &BasisFrame, outcome: &str, left: bool) -> Result<Probability> {
    let t = product_to_frame(s, frame, frame)?;
    let k = frame.universe().index_of(outcome)?;
    let hits = t
        .pairs()
        .into_iter()
        .filter(|&(i, j)| if left { i == k } else { j == k })
        .count();
    Probability::ratio(hits, t.len())
}

/// Fraction of the pairs of `s`, written in `frame ⊗ frame`, whose left
/// component is `outcome`.
pub fn left_measure_prob(s: &ProductState, frame: &BasisFrame, outcome: &str) -> Result<Probability> {
    measure_side(s, frame, outcome, true)
}

pub fn right_measure_prob(s: &ProductState, frame: &BasisFrame, outcome: &str) -> Result<Probability> {
    measure_side(s, frame, outcome, false)
}

/// Probability of `left_outcome` in a left measurement in `left_frame`,
/// followed by `right_outcome` in a right measurement in `right_frame` on the
/// right-hand state left behind by the collapse.
pub fn sequential_pair_prob(
    s: &ProductState,
    left_frame: &BasisFrame,
    left_outcome: &str,
    right_frame: &BasisFrame,
    right_outcome: &str,
) -> Result<Probability> {
    let t = product_to_frame(s, left_frame, left_frame)?;
    let k = left_frame.universe().index_of(left_outcome)?;
    let kept: Vec<usize> = t
        .pairs()
        .into_iter()
        .filter(|&(i, _)| i == k)
        .map(|(_, j)| j)
        .collect();
    if kept.is_empty() {
        return Err(Error::ImpossibleOutcome(left_outcome.to_string()));
    }
    let p_left = Probability::ratio(kept.len(), t.len())?;
    let right_state = left_frame.to_canonical(&left_frame.universe().ket_from_indices(kept)?)?;
    let r = right_frame.universe().index_of(right_outcome)?;
    let p_right = born(&right_state, right_frame)?[r].1;
    Ok(p_left * p_right)
}

/// `Pr(x,y,z)` on `X × Y × Z` as the product of three left-measurement
/// distributions, one per frame, each conditioned on the same state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterfactualJoint {
    pub labels: [Vec<String>; 3],
    pub probs: Vec<([usize; 3], Probability)>,
    /// `Pr(x₀,y₀)`, `Pr(y₁,z₁)`, `Pr(x₀,z₁)`.
    pub marginals: [Probability; 3],
}

impl CounterfactualJoint {
    pub fn prob(&self, x: usize, y: usize, z: usize) -> Probability {
        self.probs
            .iter()
            .find(|(k, _)| *k == [x, y, z])
            .map(|(_, p)| *p)
            .expect("index in range")
    }

    /// `Pr(x₀,y₀) + Pr(y₁,z₁) − Pr(x₀,z₁)`; nonnegative for any joint distribution.
    pub fn inequality_value(&self) -> Rational {
        self.marginals[0].value() + self.marginals[1].value() - self.marginals[2].value()
    }

    pub fn inequality_holds(&self) -> bool {
        self.inequality_value() >= Rational::zero()
    }
}

fn left_distribution(s: &ProductState, frame: &BasisFrame) -> Result<Vec<Probability>> {
    frame
        .universe()
        .labels()
        .iter()
        .map(|l| left_measure_prob(s, frame, l))
        .collect()
}

fn require_two_outcomes(frames: &[BasisFrame; 3]) -> Result<()> {
    for f in frames {
        if f.dim() < 2 {
            return Err(Error::DimMismatch {
                expected: 2,
                found: f.dim(),
            });
        }
    }
    Ok(())
}

pub fn counterfactual_joint(s: &ProductState, frames: &[BasisFrame; 3]) -> Result<CounterfactualJoint> {
    require_two_outcomes(frames)?;
    let dists = frames
        .iter()
        .map(|f| left_distribution(s, f))
        .collect::<Result<Vec<_>>>()?;
    let mut probs = Vec::new();
    for (x, px) in dists[0].iter().enumerate() {
        for (y, py) in dists[1].iter().enumerate() {
            for (z, pz) in dists[2].iter().enumerate() {
                probs.push(([x, y, z], *px * *py * *pz));
            }
        }
    }
    let marginal = |keep: &dyn Fn(&[usize; 3]) -> bool| -> Result<Probability> {
        let sum: Rational = probs.iter().filter(|(k, _)| keep(k)).map(|(_, p)| p.value()).sum();
        Probability::new(sum)
    };
    let marginals = [
        marginal(&|k| k[0] == 0 && k[1] == 0)?,
        marginal(&|k| k[1] == 1 && k[2] == 1)?,
        marginal(&|k| k[0] == 0 && k[2] == 1)?,
    ];
    Ok(CounterfactualJoint {
        labels: [0, 1, 2].map(|i| frames[i].universe().labels().to_vec()),
        probs,
        marginals,
    })
}

/// The inequality `Pr(x₀,y₀) + Pr(y₁,z₁) ≥ Pr(x₀,z₁)` evaluated with
/// sequential left-then-right probabilities. `summary` prints the
/// inequality as stated followed by whether it held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellReport {
    /// `(name, probability)` for the three terms, in inequality order.
    pub terms: [(String, Probability); 3],
    pub lhs: Rational,
    pub rhs: Rational,
    pub violated: bool,
}

impl BellReport {
    pub fn summary(&self) -> String {
        format!(
            "{} + {} ≥ {} : {}",
            self.terms[0].1,
            self.terms[1].1,
            self.terms[2].1,
            if self.violated { "VIOLATED" } else { "holds" }
        )
    }
}

impl Serialize for BellReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Terms<'a>(&'a [(String, Probability); 3]);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(3))?;
                for (k, v) in self.0 {
                    m.serialize_entry(k, v)?;
                }
                m.end()
            }
        }
        let mut st = s.serialize_struct("BellReport", 4)?;
        st.serialize_field("lhs", &rational_string(&self.lhs))?;
        st.serialize_field("rhs", &rational_string(&self.rhs))?;
        st.serialize_field("violated", &self.violated)?;
        st.serialize_field("terms", &Terms(&self.terms))?;
        st.end()
    }
}

pub fn bell_violation_with(s: &ProductState, frames: &[BasisFrame; 3]) -> Result<BellReport> {
    require_two_outcomes(frames)?;
    let label = |f: usize, i: usize| frames[f].universe().label(i).to_string();
    let specs = [(0, 0, 1, 0), (1, 1, 2, 1), (0, 0, 2, 1)];
    let mut terms = Vec::new();
    for (lf, lo, rf, ro) in specs {
        let (l, r) = (label(lf, lo), label(rf, ro));
        let p = match sequential_pair_prob(s, &frames[lf], &l, &frames[rf], &r) {
            Err(Error::ImpossibleOutcome(_)) => Probability::zero(),
            other => other?,
        };
        terms.push((format!("Pr({l},{r})"), p));
    }
    let terms: [(String, Probability); 3] = terms.try_into().expect("three terms");
    let lhs = terms[0].1.value() + terms[1].1.value();
    let rhs = terms[2].1.value();
    Ok(BellReport {
        lhs,
        rhs,
        violated: lhs < rhs,
        terms,
    })
}

/// Bell inequality check with the three bases of `Z2^2` on `{a,b}`.
pub fn bell_violation(s: &ProductState) -> Result<BellReport> {
    bell_violation_with(s, &crate::presets::bell_frames())
}

/// Born probabilities of each given state in each frame, one row per state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateOutcomeTable {
    pub outcomes: Vec<String>,
    pub rows: Vec<(String, Vec<Probability>)>,
}

pub fn state_outcome_table(states: &[SubsetKet], frames: &[BasisFrame]) -> Result<StateOutcomeTable> {
    let outcomes = frames
        .iter()
        .flat_map(|f| f.universe().labels().iter().cloned())
        .collect();
    let rows = states
        .iter()
        .map(|s| {
            let names: Vec<String> = frames
                .iter()
                .map(|f| Ok(crate::setspace::to_basis(s, f)?.to_string()))
                .collect::<Result<_>>()?;
            let probs = frames
                .iter()
                .map(|f| Ok(born(s, f)?.into_iter().map(|(_, p)| p)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .collect();
            Ok((names.join("="), probs))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StateOutcomeTable { outcomes, rows })
}

impl StateOutcomeTable {
    pub fn render_text(&self) -> String {
        let header: Vec<String> = std::iter::once("state".to_string())
            .chain(self.outcomes.iter().cloned())
            .collect();
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|(name, ps)| {
                std::iter::once(name.clone())
                    .chain(ps.iter().map(ToString::to_string))
                    .collect()
            })
            .collect();
        render_columns(&header, &rows)
    }
}

impl Serialize for StateOutcomeTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Row<'a>(&'a str, &'a [String], &'a [Probability]);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.1.len() + 1))?;
                m.serialize_entry("state", self.0)?;
                for (k, v) in self.1.iter().zip(self.2) {
                    m.serialize_entry(k, v)?;
                }
                m.end()
            }
        }
        let mut seq = s.serialize_seq(Some(self.rows.len()))?;
        for (name, ps) in &self.rows {
            seq.serialize_element(&Row(name, &self.outcomes, ps))?;
        }
        seq.end()
    }
}
