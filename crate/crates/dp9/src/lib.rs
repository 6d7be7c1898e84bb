//! Exact arithmetic on the cohomology of a rational elliptic surface.
//!
//! The surface is the blow-up of the plane at the nine base points of a
//! cubic pencil, specialised so that the elliptic fibration has an
//! `8I1 + 2I2` configuration of singular fibers and carries the four
//! pullback isometries `(-1)*`, `t_zeta*`, `alpha*`, `tau*` of its
//! degree-two cohomology.  On top of that lattice the crate computes the
//! cohomological Fourier-Mukai transform, the spectral involution and its
//! affine shadow on line-bundle classes, `Pic^W` membership and index,
//! the Mordell-Weil group law transported through the Shioda map, and
//! exact Weierstrass discriminant/fiber-multiplicity analysis.
//!
//! Every computation is exact over the rationals; nothing is ever
//! rounded.  The fixed basis of `H^2(B, Z)` is `(l, e1, ..., e9)` in this
//! order, where `l` is the pullback of a line and `e1..e9` are the
//! exceptional classes.  All matrices, serialisations and reports use
//! that order.

pub mod cohomology;
pub mod expr;
pub mod fm;
pub mod geometry;
pub mod isometry;
pub mod linalg;
pub mod mordell_weil;
pub mod spectral;
pub mod verify;

pub use cohomology::{
    ch_line_bundle, ch_rational_curve_sheaf, frac, intersect, named_class, rat, CohClass, H2Class,
    NamedClass, Rational,
};
pub use expr::{format_class, parse_class, ParseError};
pub use fm::{ch_symbol, fm, fm_inv, fm_symbol, t_b, SheafSymbol, VerticalCurve};
pub use isometry::{builtin_map, compose, eigen_lattice, BuiltinMap, PullbackMap};
pub use mordell_weil::{
    is_section_class, mw_add, mw_neg, mw_normalize, mw_quotient_structure, SectionClass,
    TrivialLattice,
};
pub use spectral::{
    omega, spectral_transform_curve, t_full_on_multiple_of_section, t_tilde, PicWLattice,
    SpectralImage,
};
pub use verify::{run_verification, CheckStatus, VerificationReport, DEFAULT_SEED};
