//! Numerical attributes `f: U -> Q` acting as set-level observables.
//!
//! The level sets `f⁻¹(r)` play the role of eigenspaces, `f⁻¹(r) ∩ S` is the
//! projection of a state `S`, and measurement picks an element of `S`
//! uniformly and collapses `S` onto that element's level set.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partitions::{join, Partition};
use crate::prob::{parse_rational, rational_string, Probability, Rational};
use crate::setspace::{SubsetKet, Universe};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    universe: Universe,
    values: Vec<Rational>,
}

impl Attribute {
    pub fn new(universe: &Universe, values: Vec<Rational>) -> Result<Self> {
        if values.len() != universe.size() {
            return Err(Error::DimMismatch {
                expected: universe.size(),
                found: values.len(),
            });
        }
        Ok(Attribute {
            universe: universe.clone(),
            values,
        })
    }

    /// Builds an attribute from `label -> value` pairs covering every element.
    pub fn from_pairs<S: AsRef<str>>(universe: &Universe, pairs: &[(S, Rational)]) -> Result<Self> {
        let mut values: Vec<Option<Rational>> = vec![None; universe.size()];
        for (label, v) in pairs {
            let i = universe.index_of(label.as_ref())?;
            if values[i].replace(*v).is_some() {
                return Err(Error::Invalid(format!("value for `{}` given twice", label.as_ref())));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| Error::Invalid(format!("no value for `{}`", universe.label(i))))
            })
            .collect::<Result<Vec<_>>>()?;
        Attribute::new(universe, values)
    }

    /// Parses `a=1,b=2,c=3/2`.
    pub fn parse(universe: &Universe, text: &str) -> Result<Self> {
        let pairs = text
            .split(',')
            .map(|kv| {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::Invalid(format!("expected label=value, got `{kv}`")))?;
                Ok((k.trim().to_string(), parse_rational(v)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Attribute::from_pairs(universe, &pairs)
    }

    /// `χ_S`: 1 on `S`, 0 elsewhere.
    pub fn characteristic(s: &SubsetKet) -> Self {
        let values = (0..s.universe().size())
            .map(|i| Rational::from_integer(i64::from(s.contains(i))))
            .collect();
        Attribute {
            universe: s.universe().clone(),
            values,
        }
    }

    pub fn constant(universe: &Universe, c: Rational) -> Self {
        Attribute {
            universe: universe.clone(),
            values: vec![c; universe.size()],
        }
    }

    /// `f(u_i) = i + 1`.
    pub fn ordinal(universe: &Universe) -> Self {
        Attribute {
            universe: universe.clone(),
            values: (1..=universe.size() as i64).map(Rational::from_integer).collect(),
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn value(&self, i: usize) -> Rational {
        self.values[i]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// The image `im(f)`, ascending.
    pub fn spectrum(&self) -> BTreeSet<Rational> {
        self.values.iter().copied().collect()
    }

    /// `f⁻¹(r)`.
    pub fn level_set(&self, r: Rational) -> SubsetKet {
        self.universe
            .ket_from_indices((0..self.values.len()).filter(|&i| self.values[i] == r))
            .expect("indices in range")
    }
}

impl Serialize for Attribute {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.values.len()))?;
        for (l, v) in self.universe.labels().iter().zip(&self.values) {
            map.serialize_entry(l, &rational_string(v))?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeasurementOutcome {
    #[serde(with = "crate::prob::serde_rational")]
    pub eigenvalue: Rational,
    pub probability: Probability,
    pub post_state: SubsetKet,
}

pub fn inverse_image_partition(f: &Attribute) -> Partition {
    let blocks = f.spectrum().into_iter().map(|r| f.level_set(r)).collect();
    Partition::new(&f.universe, blocks).expect("level sets partition the universe")
}

/// Projection `f⁻¹(r) ∩ S`; empty when `r` is outside the spectrum.
pub fn project(f: &Attribute, r: Rational, s: &SubsetKet) -> Result<SubsetKet> {
    if *s.universe() != f.universe {
        return Err(Error::UniverseMismatch);
    }
    f.level_set(r).intersect(s)
}

/// `Pr(r|S) = |f⁻¹(r) ∩ S| / |S|` for every eigenvalue with a nonzero projection.
pub fn measure_probs(f: &Attribute, s: &SubsetKet) -> Result<BTreeMap<Rational, Probability>> {
    if *s.universe() != f.universe {
        return Err(Error::UniverseMismatch);
    }
    if s.is_empty() {
        return Err(Error::ZeroState);
    }
    let mut counts: BTreeMap<Rational, usize> = BTreeMap::new();
    for i in s.indices() {
        *counts.entry(f.values[i]).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(r, c)| Ok((r, Probability::ratio(c, s.len())?)))
        .collect()
}

/// Outcome for a chosen eigenvalue, without sampling.
pub fn measure_given(f: &Attribute, s: &SubsetKet, r: Rational) -> Result<MeasurementOutcome> {
    if s.is_empty() {
        return Err(Error::ZeroState);
    }
    let post_state = project(f, r, s)?;
    if post_state.is_empty() {
        return Err(Error::ImpossibleOutcome(r.to_string()));
    }
    Ok(MeasurementOutcome {
        eigenvalue: r,
        probability: Probability::ratio(post_state.len(), s.len())?,
        post_state,
    })
}

/// Draws an element of `S` uniformly and collapses onto its level set.
pub fn measure<R: Rng + ?Sized>(f: &Attribute, s: &SubsetKet, rng: &mut R) -> Result<MeasurementOutcome> {
    if *s.universe() != f.universe {
        return Err(Error::UniverseMismatch);
    }
    let elems = s.indices();
    if elems.is_empty() {
        return Err(Error::ZeroState);
    }
    let pick = elems[rng.random_range(0..elems.len())];
    measure_given(f, s, f.values[pick])
}

pub fn is_compatible(f: &Attribute, g: &Attribute) -> bool {
    f.universe == g.universe
}

/// Whether the join of the attributes' partitions is discrete.
pub fn is_complete(fs: &[Attribute]) -> Result<bool> {
    let first = fs
        .first()
        .ok_or_else(|| Error::Invalid("no attributes given".into()))?;
    if fs.iter().any(|g| !is_compatible(first, g)) {
        return Err(Error::IncompatibleAttributes);
    }
    let mut acc = inverse_image_partition(first);
    for g in &fs[1..] {
        acc = join(&acc, &inverse_image_partition(g))?;
    }
    Ok(acc.is_discrete())
}

/// Each element's tuple of eigenvalues under a complete set of attributes.
pub fn eigenkets(fs: &[Attribute]) -> Result<Vec<(String, Vec<Rational>)>> {
    if !is_complete(fs)? {
        return Err(Error::NotComplete);
    }
    let u = fs[0].universe();
    Ok((0..u.size())
        .map(|i| (u.label(i).to_string(), fs.iter().map(|f| f.values[i]).collect()))
        .collect())
}

/// The pairs `(r, f⁻¹(r) ∩ S)` with a nonempty second component.
pub fn spectral_apply(f: &Attribute, s: &SubsetKet) -> Result<Vec<(Rational, SubsetKet)>> {
    f.spectrum()
        .into_iter()
        .map(|r| Ok((r, project(f, r, s)?)))
        .filter(|x| !matches!(x, Ok((_, k)) if k.is_empty()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{abc, chi, ordinal};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn p(n: usize, d: usize) -> Probability {
        Probability::ratio(n, d).unwrap()
    }

    #[test]
    fn inverse_images() {
        let u = abc();
        assert_eq!(inverse_image_partition(&ordinal()), Partition::discrete(&u));
        assert_eq!(inverse_image_partition(&Attribute::constant(&u, q(7))), Partition::indiscrete(&u));
        assert_eq!(inverse_image_partition(&chi(&["b", "c"])).to_string(), "{a}|{b,c}");
    }

    #[test]
    fn projections() {
        let u = abc();
        let f = ordinal();
        assert_eq!(project(&f, q(3), &u.full()).unwrap().to_string(), "{c}");
        assert!(project(&f, q(9), &u.full()).unwrap().is_empty());
        for s in u.all_subsets() {
            for r in 1..=3 {
                let once = project(&f, q(r), &s).unwrap();
                assert_eq!(project(&f, q(r), &once).unwrap(), once);
            }
        }
        let other = Universe::new(["x", "y", "z"]).unwrap();
        assert_eq!(project(&f, q(1), &other.full()), Err(Error::UniverseMismatch));
    }

    #[test]
    fn measurement_probabilities() {
        let u = abc();
        let probs = measure_probs(&ordinal(), &u.full()).unwrap();
        assert!(probs.values().all(|&x| x == p(1, 3)));
        let probs = measure_probs(&chi(&["b", "c"]), &u.full()).unwrap();
        assert_eq!(probs[&q(0)], p(1, 3));
        assert_eq!(probs[&q(1)], p(2, 3));
        let bc = u.subset(&["b", "c"]).unwrap();
        let probs = measure_probs(&chi(&["a", "b"]), &bc).unwrap();
        assert_eq!(probs[&q(0)], p(1, 2));
        assert_eq!(probs[&q(1)], p(1, 2));
        assert_eq!(measure_probs(&ordinal(), &u.empty()), Err(Error::ZeroState));
    }

    #[test]
    fn collapse() {
        let u = abc();
        let out = measure_given(&ordinal(), &u.full(), q(3)).unwrap();
        assert_eq!((out.post_state.to_string(), out.probability), ("{c}".into(), p(1, 3)));
        let bc = u.subset(&["b", "c"]).unwrap();
        let out = measure_given(&chi(&["a", "b"]), &bc, q(0)).unwrap();
        assert_eq!((out.post_state.to_string(), out.probability), ("{c}".into(), p(1, 2)));
        let again = measure_given(&chi(&["a", "b"]), &out.post_state, q(0)).unwrap();
        assert_eq!((again.post_state, again.probability), (out.post_state.clone(), Probability::one()));
        assert!(matches!(
            measure_given(&chi(&["a", "b"]), &out.post_state, q(1)),
            Err(Error::ImpossibleOutcome(_))
        ));
        assert_eq!(measure_given(&ordinal(), &u.empty(), q(1)), Err(Error::ZeroState));
    }

    #[test]
    fn repeated_sampled_measurement_is_stable() {
        let u = abc();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let first = measure(&chi(&["b", "c"]), &u.full(), &mut rng).unwrap();
            let second = measure(&chi(&["b", "c"]), &first.post_state, &mut rng).unwrap();
            assert_eq!(second.eigenvalue, first.eigenvalue);
            assert_eq!(second.post_state, first.post_state);
        }
    }

    #[test]
    fn sampling_matches_probabilities() {
        let u = Universe::new(["a", "b", "c", "d", "e", "f"]).unwrap();
        let f = Attribute::parse(&u, "a=0,b=0,c=0,d=1,e=1,f=2").unwrap();
        let s = u.subset(&["a", "b", "d", "e", "f"]).unwrap();
        let probs = measure_probs(&f, &s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let trials = 10_000;
        let mut counts: BTreeMap<Rational, usize> = BTreeMap::new();
        for _ in 0..trials {
            *counts.entry(measure(&f, &s, &mut rng).unwrap().eigenvalue).or_default() += 1;
        }
        for (r, pr) in probs {
            let x = pr.to_f64();
            let mean = x * trials as f64;
            let sd = (trials as f64 * x * (1.0 - x)).sqrt();
            let got = counts.get(&r).copied().unwrap_or(0) as f64;
            assert!((got - mean).abs() <= 5.0 * sd, "eigenvalue {r}: {got} vs {mean}±{sd}");
        }
    }

    #[test]
    fn compatibility_and_completeness() {
        let f = chi(&["b", "c"]);
        let g = chi(&["a", "b"]);
        assert!(is_compatible(&f, &g));
        assert!(is_compatible(&f, &f));
        let primed = Universe::new(["a′", "b′", "c′"]).unwrap();
        assert!(!is_compatible(&f, &Attribute::ordinal(&primed)));
        assert!(is_complete(&[f.clone(), g.clone()]).unwrap());
        assert!(!is_complete(std::slice::from_ref(&f)).unwrap());
        assert!(is_complete(&[ordinal()]).unwrap());
        assert_eq!(
            is_complete(&[f.clone(), Attribute::ordinal(&primed)]),
            Err(Error::IncompatibleAttributes)
        );
    }

    #[test]
    fn eigenket_tuples() {
        let tuples = eigenkets(&[chi(&["b", "c"]), chi(&["a", "b"])]).unwrap();
        assert_eq!(
            tuples,
            vec![
                ("a".to_string(), vec![q(0), q(1)]),
                ("b".to_string(), vec![q(1), q(1)]),
                ("c".to_string(), vec![q(1), q(0)]),
            ]
        );
        let single = eigenkets(&[ordinal()]).unwrap();
        assert_eq!(single.iter().map(|(_, t)| t[0]).collect::<Vec<_>>(), vec![q(1), q(2), q(3)]);
        assert_eq!(eigenkets(&[chi(&["b", "c"])]), Err(Error::NotComplete));
    }

    #[test]
    fn spectral_decomposition() {
        let u = abc();
        let ac = u.subset(&["a", "c"]).unwrap();
        let parts = spectral_apply(&ordinal(), &ac).unwrap();
        let shown: Vec<(Rational, String)> = parts.iter().map(|(r, k)| (*r, k.to_string())).collect();
        assert_eq!(shown, vec![(q(1), "{a}".into()), (q(3), "{c}".into())]);
        let c = Attribute::constant(&u, Rational::new(5, 2));
        assert_eq!(spectral_apply(&c, &ac).unwrap(), vec![(Rational::new(5, 2), ac.clone())]);
        for f in [ordinal(), chi(&["b", "c"]), chi(&["a"])] {
            for s in u.all_subsets() {
                let parts = spectral_apply(&f, &s).unwrap();
                let sum = parts.iter().try_fold(u.empty(), |acc, (_, k)| acc.add(k)).unwrap();
                assert_eq!(sum, s);
                let total: usize = parts.iter().map(|(_, k)| k.len()).sum();
                assert_eq!(total, s.len());
                for (i, (_, x)) in parts.iter().enumerate() {
                    for (_, y) in &parts[i + 1..] {
                        assert!(x.intersect(y).unwrap().is_empty());
                    }
                }
            }
        }
    }

    #[test]
    fn json_form() {
        let f = Attribute::parse(&abc(), "a=1,b=1/2,c=-3").unwrap();
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"a":"1/1","b":"1/2","c":"-3/1"}"#
        );
        assert!(Attribute::parse(&abc(), "a=1,b=2").is_err());
        assert!(Attribute::parse(&abc(), "a=1,a=2,b=1,c=1").is_err());
    }
}
