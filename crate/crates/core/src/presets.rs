//! Named instances used throughout the examples: the three bases of Z2^3 and
//! of Z2^2, the double-slit dynamics, and the standard attributes on `{a,b,c}`.

use crate::attributes::Attribute;
use crate::dynamics::{Dynamics, SlitConfig};
use crate::entangle::{ProductState, ProductUniverse};
use crate::gf2::Gf2Matrix;
use crate::prob::Rational;
use crate::setspace::{BasisFrame, SubsetKet, Universe};

pub fn abc() -> Universe {
    Universe::new(["a", "b", "c"]).expect("valid labels")
}

pub fn ab() -> Universe {
    Universe::new(["a", "b"]).expect("valid labels")
}

fn frame(name: &str, universe: &Universe, labels: &[&str], columns: &[&[&str]]) -> BasisFrame {
    let cols: Vec<SubsetKet> = columns
        .iter()
        .map(|c| universe.subset(c).expect("preset labels exist"))
        .collect();
    BasisFrame::new(name, labels, &cols).expect("preset frames are nonsingular")
}

/// `U′` on `{a,b,c}`: a′={a,b}, b′={b,c}, c′={a,b,c}.
pub fn triad_primed() -> BasisFrame {
    frame(
        "U′",
        &abc(),
        &["a′", "b′", "c′"],
        &[&["a", "b"], &["b", "c"], &["a", "b", "c"]],
    )
}

/// `U″` on `{a,b,c}`: a″={a}, b″={a,b}, c″={a,c}.
pub fn triad_double_primed() -> BasisFrame {
    frame(
        "U″",
        &abc(),
        &["a″", "b″", "c″"],
        &[&["a"], &["a", "b"], &["a", "c"]],
    )
}

pub fn triad_frames() -> [BasisFrame; 3] {
    [
        BasisFrame::canonical("U", &abc()),
        triad_primed(),
        triad_double_primed(),
    ]
}

/// The three bases of Z2^2 on `{a,b}`: a′={a,b}, b′={b}; a″={a,b}, b″={a}.
pub fn bell_frames() -> [BasisFrame; 3] {
    let u = ab();
    [
        BasisFrame::canonical("U", &u),
        frame("U′", &u, &["a′", "b′"], &[&["a", "b"], &["b"]]),
        frame("U″", &u, &["a″", "b″"], &[&["a", "b"], &["a"]]),
    ]
}

pub fn bell_product() -> ProductUniverse {
    ProductUniverse::new(ab(), ab())
}

/// `{(a,a),(b,b)}`.
pub fn bell_state() -> ProductState {
    bell_product()
        .state(&[("a", "a"), ("b", "b")])
        .expect("preset pairs exist")
}

/// `{(a,b),(b,a)}`.
pub fn other_bell_state() -> ProductState {
    bell_product()
        .state(&[("a", "b"), ("b", "a")])
        .expect("preset pairs exist")
}

/// One-period dynamics {a}→{a,b}, {b}→{a,b,c}, {c}→{b,c}.
pub fn double_slit_dynamics() -> Dynamics {
    let m = Gf2Matrix::from_rows(&[[1u8, 1, 0], [1, 1, 1], [0, 1, 1]]).expect("3x3");
    Dynamics::new(m).expect("nonsingular")
}

/// Slits at `{a}` and `{c}`, particle prepared in `{a,c}`.
pub fn double_slit() -> SlitConfig {
    let u = abc();
    SlitConfig::new(
        double_slit_dynamics(),
        BasisFrame::canonical("U", &u),
        u.subset(&["a", "c"]).expect("labels exist"),
    )
    .expect("nonzero slit state")
}

/// f(a)=1, f(b)=2, f(c)=3.
pub fn ordinal() -> Attribute {
    let u = abc();
    Attribute::new(
        &u,
        (1..=3).map(Rational::from_integer).collect(),
    )
    .expect("total on the universe")
}

/// Characteristic function of `labels` on `{a,b,c}`.
pub fn chi(labels: &[&str]) -> Attribute {
    Attribute::characteristic(&abc().subset(labels).expect("labels exist"))
}
