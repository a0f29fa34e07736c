//! Rational density matrices for set states and partitions.
//!
//! `ρ(π)` has `1/|U|` at every indistinction `(u_j, u_k)` of `π` and 0 at
//! every distinction; `ρ(S)` is the constant `1/|S|` block on `S × S`.
//! Entries stay in canonical label order.

use std::fmt;

use num_traits::Zero;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::attributes::{inverse_image_partition, Attribute};
use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::prob::{rational_string, Probability, Rational};
use crate::setspace::{render_columns, SubsetKet, Universe};

#[derive(Clone, PartialEq, Eq)]
pub struct DensityMatrix {
    universe: Universe,
    entries: Vec<Vec<Rational>>,
}

impl DensityMatrix {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, j: usize, k: usize) -> Rational {
        self.entries[j][k]
    }

    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    pub fn trace(&self) -> Rational {
        (0..self.dim()).map(|j| self.entries[j][j]).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|k| self.entries[j][k] == self.entries[k][j]))
    }

    fn from_fn(universe: &Universe, f: impl Fn(usize, usize) -> Rational) -> Self {
        let n = universe.size();
        DensityMatrix {
            universe: universe.clone(),
            entries: (0..n).map(|j| (0..n).map(|k| f(j, k)).collect()).collect(),
        }
    }

    pub fn render_text(&self) -> String {
        let header: Vec<String> = std::iter::once(String::new())
            .chain(self.universe.labels().iter().cloned())
            .collect();
        let rows: Vec<Vec<String>> = self
            .entries
            .iter()
            .enumerate()
            .map(|(j, r)| {
                std::iter::once(self.universe.label(j).to_string())
                    .chain(r.iter().map(ToString::to_string))
                    .collect()
            })
            .collect();
        render_columns(&header, &rows)
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix")?;
        for r in &self.entries {
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(","))?;
        }
        Ok(())
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.dim()))?;
        for r in &self.entries {
            let row: Vec<String> = r.iter().map(rational_string).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

pub fn rho_of_partition(p: &Partition) -> DensityMatrix {
    let u = p.universe();
    let w = Rational::new(1, u.size() as i64);
    DensityMatrix::from_fn(u, |j, k| {
        if p.block_of(j) == p.block_of(k) {
            w
        } else {
            Rational::zero()
        }
    })
}

pub fn rho_of_subset(s: &SubsetKet) -> Result<DensityMatrix> {
    if s.is_empty() {
        return Err(Error::ZeroState);
    }
    let w = Rational::new(1, s.len() as i64);
    Ok(DensityMatrix::from_fn(s.universe(), |j, k| {
        if s.contains(j) && s.contains(k) {
            w
        } else {
            Rational::zero()
        }
    }))
}

/// `tr[ρ²]`.
pub fn purity(rho: &DensityMatrix) -> Probability {
    let n = rho.dim();
    let tr: Rational = (0..n)
        .flat_map(|j| (0..n).map(move |k| (j, k)))
        .map(|(j, k)| rho.entries[j][k] * rho.entries[k][j])
        .sum();
    Probability::new(tr).expect("purity of a density matrix lies in [0,1]")
}

/// `1 - tr[ρ²]`.
pub fn logical_entropy_rho(rho: &DensityMatrix) -> Probability {
    purity(rho).complement()
}

/// `tr[f ρ]` with `f` read as a diagonal matrix.
pub fn expectation(f: &Attribute, rho: &DensityMatrix) -> Result<Rational> {
    if *f.universe() != rho.universe {
        return Err(Error::UniverseMismatch);
    }
    Ok((0..rho.dim()).map(|j| f.value(j) * rho.entries[j][j]).sum())
}

/// `Σ_r P_r ρ P_r` over the level-set projectors of `f`: every entry
/// between elements with different eigenvalues is zeroed.
pub fn measure_density(f: &Attribute, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if *f.universe() != rho.universe {
        return Err(Error::UniverseMismatch);
    }
    let blocks = inverse_image_partition(f);
    Ok(DensityMatrix::from_fn(&rho.universe, |j, k| {
        if blocks.block_of(j) == blocks.block_of(k) {
            rho.entries[j][k]
        } else {
            Rational::zero()
        }
    }))
}

/// Sum of the squares of the entries a measurement zeroed.
pub fn entropy_increase(before: &DensityMatrix, after: &DensityMatrix) -> Result<Probability> {
    if before.dim() != after.dim() {
        return Err(Error::ShapeMismatch);
    }
    let mut sum = Rational::zero();
    for (rb, ra) in before.entries.iter().zip(&after.entries) {
        for (&b, &a) in rb.iter().zip(ra) {
            if a.is_zero() {
                sum += b * b;
            } else if a != b {
                return Err(Error::NotAMeasurement);
            }
        }
    }
    Probability::new(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{join, logical_entropy};
    use crate::presets::{abc, chi, ordinal};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn grid(rows: &[&[(i64, i64)]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&(n, d)| q(n, d)).collect()).collect()
    }

    const Z: (i64, i64) = (0, 1);
    const T: (i64, i64) = (1, 3);
    const H: (i64, i64) = (1, 2);

    #[test]
    fn partition_matrices() {
        let u = abc();
        let p = Partition::parse(&u, "{a,b}|{c}").unwrap();
        assert_eq!(rho_of_partition(&p).entries(), grid(&[&[T, T, Z], &[T, T, Z], &[Z, Z, T]]));
        let blob = rho_of_partition(&Partition::indiscrete(&u));
        assert!(blob.entries().iter().flatten().all(|&x| x == q(1, 3)));
        assert_eq!(
            rho_of_partition(&Partition::discrete(&u)).entries(),
            grid(&[&[T, Z, Z], &[Z, T, Z], &[Z, Z, T]])
        );
    }

    #[test]
    fn subset_matrices() {
        let u = abc();
        let ab = u.subset(&["a", "b"]).unwrap();
        assert_eq!(rho_of_subset(&ab).unwrap().entries(), grid(&[&[H, H, Z], &[H, H, Z], &[Z, Z, Z]]));
        let c = u.subset(&["c"]).unwrap();
        assert_eq!(
            rho_of_subset(&c).unwrap().entries(),
            grid(&[&[Z, Z, Z], &[Z, Z, Z], &[Z, Z, (1, 1)]])
        );
        assert_eq!(rho_of_subset(&u.full()).unwrap(), rho_of_partition(&Partition::indiscrete(&u)));
        assert_eq!(rho_of_subset(&u.empty()), Err(Error::ZeroState));
    }

    #[test]
    fn purity_and_entropy() {
        let u = abc();
        let p = rho_of_partition(&Partition::parse(&u, "{a,b}|{c}").unwrap());
        assert_eq!(purity(&p).value(), q(5, 9));
        assert_eq!(logical_entropy_rho(&p).value(), q(4, 9));
        for s in u.all_subsets().filter(|s| !s.is_empty()) {
            let r = rho_of_subset(&s).unwrap();
            assert_eq!(purity(&r), Probability::one());
            assert_eq!(logical_entropy_rho(&r), Probability::zero());
            assert_eq!(r.trace(), q(1, 1));
            assert!(r.is_symmetric());
        }
        let hat = rho_of_partition(&Partition::discrete(&u));
        assert_eq!(purity(&hat).value(), q(1, 3));
        assert_eq!(logical_entropy_rho(&hat).value(), q(2, 3));
    }

    #[test]
    fn expectations() {
        let u = abc();
        let blob = rho_of_subset(&u.full()).unwrap();
        assert_eq!(expectation(&ordinal(), &blob).unwrap(), q(2, 1));
        let c = Attribute::constant(&u, q(7, 2));
        assert_eq!(expectation(&c, &blob).unwrap(), q(7, 2));
        assert_eq!(expectation(&chi(&["b", "c"]), &blob).unwrap(), q(2, 3));
        let ac = rho_of_subset(&u.subset(&["a", "c"]).unwrap()).unwrap();
        assert_eq!(expectation(&ordinal(), &ac).unwrap(), q(2, 1));
        let other = Universe::new(["x", "y", "z"]).unwrap();
        assert_eq!(expectation(&Attribute::ordinal(&other), &blob), Err(Error::UniverseMismatch));
    }

    #[test]
    fn measurement_zeroes_cross_block_entries() {
        let u = abc();
        let blob = rho_of_subset(&u.full()).unwrap();
        let hat = measure_density(&ordinal(), &blob).unwrap();
        assert_eq!(hat, rho_of_partition(&Partition::discrete(&u)));
        let same = measure_density(&Attribute::constant(&u, q(1, 1)), &blob).unwrap();
        assert_eq!(same, blob);
        let chi_bc = measure_density(&chi(&["b", "c"]), &blob).unwrap();
        assert_eq!(chi_bc.entries(), grid(&[&[T, Z, Z], &[Z, T, T], &[Z, T, T]]));
    }

    #[test]
    fn entropy_increase_examples() {
        let u = abc();
        let blob = rho_of_subset(&u.full()).unwrap();
        let hat = measure_density(&ordinal(), &blob).unwrap();
        assert_eq!(entropy_increase(&blob, &hat).unwrap().value(), q(2, 3));
        assert_eq!(entropy_increase(&blob, &blob).unwrap(), Probability::zero());
        let chi_bc = measure_density(&chi(&["b", "c"]), &blob).unwrap();
        assert_eq!(entropy_increase(&blob, &chi_bc).unwrap().value(), q(4, 9));
        let small = rho_of_subset(&Universe::new(["x"]).unwrap().full()).unwrap();
        assert_eq!(entropy_increase(&blob, &small), Err(Error::ShapeMismatch));
        assert_eq!(entropy_increase(&hat, &blob), Err(Error::NotAMeasurement));
    }

    #[test]
    fn json_form() {
        let u = Universe::new(["a", "b"]).unwrap();
        let r = rho_of_subset(&u.subset(&["a"]).unwrap()).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"[["1/1","0/1"],["0/1","0/1"]]"#);
    }

    #[test]
    fn join_action_and_entropy_accounting() {
        for n in 1..=4 {
            let u = Universe::new((0..n).map(|i| format!("e{i}"))).unwrap();
            let parts = Partition::all(&u);
            for p in &parts {
                let rho = rho_of_partition(p);
                assert_eq!(logical_entropy(p), logical_entropy_rho(&rho));
                for g in &parts {
                    let ids: Vec<Rational> = (0..n).map(|i| Rational::from_integer(g.block_of(i) as i64)).collect();
                    let f = Attribute::new(&u, ids).unwrap();
                    let after = measure_density(&f, &rho).unwrap();
                    assert_eq!(after, rho_of_partition(&join(g, p).unwrap()));
                    assert_eq!(after.trace(), Rational::from_integer(1));
                    let inc = entropy_increase(&rho, &after).unwrap();
                    assert_eq!(
                        inc.value(),
                        logical_entropy_rho(&after).value() - logical_entropy_rho(&rho).value()
                    );
                }
            }
        }
    }
}
