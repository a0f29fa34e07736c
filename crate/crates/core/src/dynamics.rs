//! Nonsingular "time" evolution of set states, interference by cancellation
//! mod 2, and the double-slit experiment with and without which-slit
//! measurement.

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::prob::{Probability, Rational};
use crate::setspace::{born, to_basis, BasisFrame, SubsetKet, Universe};

/// A nonsingular linear map of Z2^n, acting on canonical coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dynamics {
    matrix: Gf2Matrix,
}

impl Dynamics {
    pub fn new(matrix: Gf2Matrix) -> Result<Self> {
        if !matrix.is_nonsingular()? {
            return Err(Error::Singular);
        }
        Ok(Dynamics { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Dynamics {
            matrix: Gf2Matrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &Gf2Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

pub fn evolve(d: &Dynamics, s: &SubsetKet) -> Result<SubsetKet> {
    if s.universe().size() != d.dim() {
        return Err(Error::DimMismatch {
            expected: d.dim(),
            found: s.universe().size(),
        });
    }
    s.universe().ket_from_bits(d.matrix.apply(s.bits())?)
}

/// The frame whose basis kets are the images of `frame`'s basis kets. Labels
/// gain a prime and the name an `A` prefix.
pub fn evolved_frame(d: &Dynamics, frame: &BasisFrame) -> Result<BasisFrame> {
    if frame.dim() != d.dim() {
        return Err(Error::DimMismatch {
            expected: d.dim(),
            found: frame.dim(),
        });
    }
    let labels = Universe::new(frame.universe().labels().iter().map(|l| format!("{l}′")))?;
    BasisFrame::from_matrix(
        &format!("A{}", frame.name()),
        frame.anchor().clone(),
        labels,
        d.matrix.mul(frame.matrix())?,
    )
}

/// Expansion of a ket through an intermediate basis into a target basis:
/// each basis ket `v_j` with `b_j = 1` contributes its target coordinates
/// `α^j`, and the target coefficient of `w_k` is `Σ_j b_j α^j_k` mod 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interference {
    /// `(via label, target coordinates of that basis ket)` for each `b_j = 1`.
    pub terms: Vec<(String, SubsetKet)>,
    pub result: SubsetKet,
}

impl Interference {
    pub fn coefficients(&self) -> Vec<(String, u8)> {
        let u = self.result.universe();
        (0..u.size())
            .map(|k| (u.label(k).to_string(), u8::from(self.result.contains(k))))
            .collect()
    }

    /// Target labels where two or more terms met and cancelled.
    pub fn cancelled(&self) -> Vec<String> {
        let u = self.result.universe();
        (0..u.size())
            .filter(|&k| {
                let hits = self.terms.iter().filter(|(_, t)| t.contains(k)).count();
                hits >= 2 && !self.result.contains(k)
            })
            .map(|k| u.label(k).to_string())
            .collect()
    }
}

/// `s` may be given in `via` coordinates or in the shared anchor.
pub fn interference_coefficients(
    s: &SubsetKet,
    via: &BasisFrame,
    target: &BasisFrame,
) -> Result<Interference> {
    if via.dim() != target.dim() {
        return Err(Error::DimMismatch {
            expected: via.dim(),
            found: target.dim(),
        });
    }
    if via.anchor() != target.anchor() {
        return Err(Error::UniverseMismatch);
    }
    let b = to_basis(s, via)?;
    let mut terms = Vec::new();
    let mut result = target.universe().empty();
    for j in b.indices() {
        let alpha = to_basis(&via.column(j), target)?;
        result = result.add(&alpha)?;
        terms.push((via.universe().label(j).to_string(), alpha));
    }
    Ok(Interference { terms, result })
}

#[derive(Debug, Clone)]
pub struct SlitConfig {
    pub dynamics: Dynamics,
    pub position_frame: BasisFrame,
    pub slit_state: SubsetKet,
}

impl SlitConfig {
    pub fn new(dynamics: Dynamics, position_frame: BasisFrame, slit_state: SubsetKet) -> Result<Self> {
        if slit_state.is_empty() {
            return Err(Error::ZeroState);
        }
        if position_frame.dim() != dynamics.dim() || slit_state.universe().size() != dynamics.dim() {
            return Err(Error::DimMismatch {
                expected: dynamics.dim(),
                found: slit_state.universe().size(),
            });
        }
        if slit_state.universe() != position_frame.anchor() {
            return Err(Error::UniverseMismatch);
        }
        Ok(SlitConfig {
            dynamics,
            position_frame,
            slit_state,
        })
    }
}

/// Exact wall distribution, in position-frame label order.
///
/// With slit measurement the slit state first collapses to a position
/// eigenstate, which then evolves and is measured at the wall; the wall
/// distribution is the mixture over slit outcomes. Without it the
/// superposition itself evolves and is measured once.
pub fn double_slit(cfg: &SlitConfig, measure_at_slits: bool) -> Result<Vec<(String, Probability)>> {
    let frame = &cfg.position_frame;
    if cfg.slit_state.is_empty() {
        return Err(Error::ZeroState);
    }
    if !measure_at_slits {
        return born(&evolve(&cfg.dynamics, &cfg.slit_state)?, frame);
    }
    let mut acc = vec![Rational::zero(); frame.dim()];
    for (j, (_, p_slit)) in born(&cfg.slit_state, frame)?.into_iter().enumerate() {
        if p_slit.is_zero() {
            continue;
        }
        let at_wall = evolve(&cfg.dynamics, &frame.column(j))?;
        for (a, (_, p_wall)) in acc.iter_mut().zip(born(&at_wall, frame)?) {
            *a += p_slit.value() * p_wall.value();
        }
    }
    frame
        .universe()
        .labels()
        .iter()
        .zip(acc)
        .map(|(l, v)| Ok((l.clone(), Probability::new(v)?)))
        .collect()
}

fn sample_element<R: Rng + ?Sized>(coords: &SubsetKet, rng: &mut R) -> Result<usize> {
    let idx = coords.indices();
    if idx.is_empty() {
        return Err(Error::ZeroState);
    }
    Ok(idx[rng.random_range(0..idx.len())])
}

/// Monte Carlo version of [`double_slit`]: hit counts per wall position.
pub fn double_slit_sample<R: Rng + ?Sized>(
    cfg: &SlitConfig,
    measure_at_slits: bool,
    trials: usize,
    rng: &mut R,
) -> Result<Vec<(String, usize)>> {
    let frame = &cfg.position_frame;
    let mut counts = vec![0usize; frame.dim()];
    let superposed = to_basis(&evolve(&cfg.dynamics, &cfg.slit_state)?, frame)?;
    let slit_coords = to_basis(&cfg.slit_state, frame)?;
    for _ in 0..trials {
        let wall_coords = if measure_at_slits {
            let j = sample_element(&slit_coords, rng)?;
            to_basis(&evolve(&cfg.dynamics, &frame.column(j))?, frame)?
        } else {
            superposed.clone()
        };
        counts[sample_element(&wall_coords, rng)?] += 1;
    }
    Ok(frame.universe().labels().iter().cloned().zip(counts).collect())
}
