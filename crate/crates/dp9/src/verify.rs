//! The batch verification suite.
//!
//! Recomputes, from first principles, every identity the rest of the
//! crate is built on, and reports one record per check.  Three checks
//! are expected to disagree with their tabulated counterparts; those
//! report as `paper-discrepancy` (with both values shown) rather than
//! `fail`.  A correct build therefore has zero `fail` records and
//! exactly the documented discrepancy set.

use std::fmt::Write as _;

use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::{
    ch_line_bundle, frac, intersect, named_class, rat, CohClass, H2Class, NamedClass, Rational,
    H2_RANK,
};
use crate::expr::{format_class, format_h2, parse_class};
use crate::fm::{ch_symbol, fm, fm_inv, fm_symbol, t_b, SheafSymbol};
use crate::geometry::{
    discriminant, fiber_profile, is_tau_invariant, plane_involution, reduce_point, BinaryForm,
    PlaneCubic,
};
use crate::isometry::{builtin_map, compose, eigen_lattice, BuiltinMap};
use crate::mordell_weil::{
    is_section_class, mw_add, mw_neg, mw_normalize, mw_quotient_structure, SectionClass,
};
use crate::spectral::{
    omega, spectral_transform_curve, t_full_on_multiple_of_section, t_tilde, translation_class,
    PicWLattice,
};

/// Default seed for the pseudo-random parts of the suite.  Override at
/// the CLI through the `DP9_SEED` environment variable.
pub const DEFAULT_SEED: u64 = 0x00D9_5EED;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The computation is internally consistent but contradicts a
    /// printed value it is checked against.
    PaperDiscrepancy,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::PaperDiscrepancy => "paper-discrepancy",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub id: String,
    pub description: String,
    pub status: CheckStatus,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn checks(&self) -> &[CheckRecord] {
        &self.checks
    }

    pub fn has_failures(&self) -> bool {
        self.checks
            .iter()
            .any(|c| c.status == CheckStatus::Fail)
    }

    pub fn discrepancy_ids(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::PaperDiscrepancy)
            .map(|c| c.id.as_str())
            .collect()
    }

    pub fn find(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// One machine-parsable record per line: `id`, `status`,
    /// `expected`, `actual`, tab-separated.
    pub fn to_tsv(&self) -> String {
        let clean = |s: &str| s.replace(['\t', '\n'], " ");
        let mut out = String::new();
        for c in &self.checks {
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                clean(&c.id),
                c.status.as_str(),
                clean(&c.expected),
                clean(&c.actual)
            )
            .unwrap();
        }
        out
    }

    /// Human-readable multi-line report.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            writeln!(out, "[{:>17}] {} — {}", c.status.as_str(), c.id, c.description).unwrap();
            if c.status != CheckStatus::Pass {
                writeln!(out, "{:>19} expected: {}", "", c.expected).unwrap();
                writeln!(out, "{:>19} actual:   {}", "", c.actual).unwrap();
            }
        }
        let fails = self.checks.iter().filter(|c| c.status == CheckStatus::Fail).count();
        let disc = self.discrepancy_ids().len();
        writeln!(
            out,
            "{} checks: {} pass, {} fail, {} paper-discrepancy",
            self.checks.len(),
            self.checks.len() - fails - disc,
            fails,
            disc
        )
        .unwrap();
        out
    }
}

struct Reporter {
    checks: Vec<CheckRecord>,
}

impl Reporter {
    fn new() -> Self {
        Reporter { checks: Vec::new() }
    }

    /// Equality check: pass iff `expected == actual` as strings.
    fn eq(&mut self, id: &str, description: &str, expected: String, actual: String) {
        let status = if expected == actual {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        self.push(id, description, status, expected, actual);
    }

    /// Boolean check with explicit report strings.
    fn ok(&mut self, id: &str, description: &str, ok: bool, expected: &str, actual: String) {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        self.push(id, description, status, expected.to_string(), actual);
    }

    /// A documented contradiction: the computed value is pinned (else
    /// `fail`), and the record carries the printed value it contradicts.
    fn discrepancy(
        &mut self,
        id: &str,
        description: &str,
        printed: &str,
        computed: String,
        pinned_computed: &str,
    ) {
        let status = if computed == pinned_computed {
            CheckStatus::PaperDiscrepancy
        } else {
            CheckStatus::Fail
        };
        self.push(id, description, status, printed.to_string(), computed);
    }

    fn push(
        &mut self,
        id: &str,
        description: &str,
        status: CheckStatus,
        expected: String,
        actual: String,
    ) {
        debug_assert!(
            !self.checks.iter().any(|c| c.id == id),
            "duplicate check id {id}"
        );
        self.checks.push(CheckRecord {
            id: id.to_string(),
            description: description.to_string(),
            status,
            expected,
            actual,
        });
    }
}

fn h(v: [i64; 10]) -> H2Class {
    H2Class::from_ints(v)
}

fn div(d: H2Class) -> CohClass {
    CohClass::from_div(d)
}

fn random_h2(rng: &mut ChaCha8Rng) -> H2Class {
    H2Class::from_ints(std::array::from_fn(|_| rng.gen_range(-5..=5)))
}

/// The twelve-element operation basis `1, f, e1..e9, pt` plus `l`.
fn coh_basis() -> Vec<(String, CohClass)> {
    let mut basis = vec![
        ("1".to_string(), CohClass::one()),
        ("f".to_string(), div(named_class(NamedClass::F))),
    ];
    for i in 1..=9 {
        basis.push((format!("e{}", i), div(H2Class::e(i))));
    }
    basis.push(("pt".to_string(), CohClass::pt()));
    basis.push(("l".to_string(), div(H2Class::l())));
    basis
}

/// Runs the full suite with the given seed.  Failures are data in the
/// returned report, never panics.
pub fn run_verification(seed: u64) -> VerificationReport {
    let mut r = Reporter::new();

    check_lattice(&mut r, seed);
    check_table1(&mut r);
    check_fm(&mut r);
    check_table3(&mut r);
    check_spectral(&mut r, seed);
    check_picw(&mut r);
    check_mordell_weil(&mut r);
    check_curve_transform(&mut r, seed);
    check_geometry(&mut r, seed);
    check_parser(&mut r, seed);

    VerificationReport { checks: r.checks }
}

fn check_lattice(r: &mut Reporter, seed: u64) {
    let gram_ok = (0..H2_RANK).all(|i| {
        (0..H2_RANK).all(|j| {
            let expect = if i != j {
                rat(0)
            } else if i == 0 {
                rat(1)
            } else {
                rat(-1)
            };
            intersect(&H2Class::basis(i), &H2Class::basis(j)) == expect
        })
    });
    r.ok(
        "gram.signature",
        "Gram matrix of (l, e1..e9) is diag(1, -1, ..., -1)",
        gram_ok,
        "diag(1, -1 x 9)",
        if gram_ok { "diag(1, -1 x 9)".into() } else { "mismatch".into() },
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bilinear = true;
    for _ in 0..100 {
        let a = random_h2(&mut rng);
        let b = random_h2(&mut rng);
        let c = random_h2(&mut rng);
        let s = rat(rng.gen_range(-3..=3));
        bilinear &= intersect(&a, &b) == intersect(&b, &a);
        bilinear &= intersect(&(&a.scale(&s) + &c), &b)
            == intersect(&a, &b) * &s + intersect(&c, &b);
    }
    r.ok(
        "intersect.bilinear",
        "intersection pairing is symmetric and bilinear on random triples",
        bilinear,
        "symmetric bilinear",
        if bilinear { "symmetric bilinear".into() } else { "violation found".into() },
    );

    use NamedClass::*;
    let f = named_class(F);
    let relations_ok = &named_class(N1) + &named_class(O1) == f
        && &named_class(N2) + &named_class(O2) == f
        && intersect(&named_class(N1), &named_class(O1)) == rat(2)
        && intersect(&named_class(N2), &named_class(O2)) == rat(2)
        && intersect(&f, &f).is_zero()
        && [N1, O1, N2, O2]
            .iter()
            .all(|&c| intersect(&f, &named_class(c)).is_zero())
        && intersect(&H2Class::e(9), &named_class(N1)).is_one()
        && intersect(&H2Class::e(9), &named_class(N2)).is_one()
        && intersect(&H2Class::e(9), &named_class(O1)).is_zero()
        && intersect(&H2Class::e(9), &named_class(O2)).is_zero();
    r.ok(
        "named.relations",
        "I2 components: n_i + o_i = f, n_i.o_i = 2, zero section meets neutral components",
        relations_ok,
        "all relations hold",
        if relations_ok { "all relations hold".into() } else { "violation found".into() },
    );
}

fn check_table1(r: &mut Reporter) {
    for which in BuiltinMap::ALL {
        let m = builtin_map(which);
        let name = which.name();
        if which != BuiltinMap::TZeta {
            r.ok(
                &format!("table1.{}.involution", name),
                &format!("{}* squares to the identity matrix", name),
                m.is_involution(),
                "square = identity",
                if m.is_involution() { "square = identity".into() } else { "not an involution".into() },
            );
        }
        r.ok(
            &format!("table1.{}.gram", name),
            &format!("{}* preserves the intersection form exactly", name),
            m.preserves_pairing(),
            "M^T G M = G",
            if m.preserves_pairing() { "M^T G M = G".into() } else { "form not preserved".into() },
        );
        let f = named_class(NamedClass::F);
        r.eq(
            &format!("table1.{}.fixes_f", name),
            &format!("{}* fixes the fiber class", name),
            "f".into(),
            format_h2(&m.apply_h2(&f)),
        );
    }
    let t_zeta = builtin_map(BuiltinMap::TZeta);
    let not_inv = !t_zeta.is_involution();
    r.ok(
        "table1.t_zeta.not_involution",
        "translation by a non-torsion section has infinite order",
        not_inv,
        "t_zeta*^2 != id",
        if not_inv { "t_zeta*^2 != id".into() } else { "unexpectedly an involution".into() },
    );

    let alpha = builtin_map(BuiltinMap::Alpha);
    let swaps = alpha.apply_h2(&named_class(NamedClass::O1)) == named_class(NamedClass::O2)
        && alpha.apply_h2(&named_class(NamedClass::N1)) == named_class(NamedClass::N2);
    r.ok(
        "table1.alpha.swaps_i2",
        "alpha* interchanges o1 <-> o2 and n1 <-> n2",
        swaps,
        "o1 <-> o2, n1 <-> n2",
        if swaps { "o1 <-> o2, n1 <-> n2".into() } else { "components not swapped".into() },
    );

    let neg = builtin_map(BuiltinMap::Neg);
    r.eq(
        "table1.alpha.e1_matches_neg",
        "alpha*(e1) = (-1)*(e1), the defining condition for zeta = e1",
        format_h2(&neg.apply_h2(&H2Class::e(1))),
        format_h2(&alpha.apply_h2(&H2Class::e(1))),
    );

    // The bundle-action derivation quotes alpha(e1) = l - e1 - e9,
    // which contradicts the tabulated column (and would break both the
    // pairing and alpha^2 = 1).  The table value is the computed one.
    r.discrepancy(
        "table1.alpha_e1.variant",
        "alpha*(e1): tabulated column vs the variant quoted in the bundle-action derivation",
        "-e1 - e9 + l (variant)",
        format_h2(&alpha.apply_h2(&H2Class::e(1))),
        "-e1 - e7 + l",
    );

    let tau = builtin_map(BuiltinMap::Tau);
    let composed = compose(&alpha, &t_zeta);
    r.ok(
        "compose.contravariant",
        "compose(alpha, t_zeta) equals tau as a 10x10 matrix",
        composed.matrix() == tau.matrix(),
        "alpha* . t_zeta* = tau*",
        if composed.matrix() == tau.matrix() { "alpha* . t_zeta* = tau*".into() } else { "matrices differ".into() },
    );
    let reversed = compose(&t_zeta, &alpha);
    r.ok(
        "compose.order_matters",
        "compose(t_zeta, alpha) differs from tau; witnessed on e1",
        reversed.matrix() != tau.matrix(),
        "t_zeta* . alpha* != tau*",
        format!("image of e1: {}", format_h2(&reversed.apply_h2(&H2Class::e(1)))),
    );
}

fn check_fm(r: &mut Reporter) {
    let basis = coh_basis();
    let inverse_ok = basis.iter().all(|(_, c)| {
        fm_inv(&fm(c)) == *c && fm(&fm_inv(c)) == *c
    });
    r.ok(
        "table2.fm_inverse",
        "fm and fm_inv are mutually inverse on the full cohomology basis",
        inverse_ok,
        "fm . fm_inv = fm_inv . fm = id",
        if inverse_ok { "fm . fm_inv = fm_inv . fm = id".into() } else { "inverse identity fails".into() },
    );

    let mut square_ok = true;
    let mut witness = String::from("square commutes");
    let mut symbols = Vec::new();
    for d in -3..=3 {
        symbols.push(SheafSymbol::BasePullback(d));
        for i in [1usize, 2, 3, 4, 5, 6, 7, 9] {
            symbols.push(SheafSymbol::SectionPush(H2Class::e(i), d));
        }
    }
    for s in &symbols {
        let lhs = ch_symbol(&fm_symbol(s).expect("supported symbol"));
        let rhs = fm(&ch_symbol(s));
        if lhs != rhs {
            square_ok = false;
            witness = format!("fails on {:?}", s);
            break;
        }
    }
    r.ok(
        "fm.commuting_square",
        "ch of the symbolic transform equals fm of the Chern character",
        square_ok,
        "ch . FM = fm . ch",
        witness,
    );
}

fn check_table3(r: &mut Reporter) {
    // Tabulated action of fm^-1 . tau* . fm, row by row; the expected
    // rows are transcribed here in raw (l, e1..e9) coordinates plus a
    // pt coefficient, independently of the composition that computes
    // them.
    let row = |v: [i64; 10], pt: i64| CohClass::new(rat(0), h(v), rat(pt));
    let rows: Vec<(&str, CohClass, CohClass)> = vec![
        ("pt", CohClass::pt(), CohClass::pt()),
        ("f", div(named_class(NamedClass::F)), row([3, -1, -1, -1, -1, -1, -1, -1, -1, -1], 0)),
        // e_j -> 2f + 2 e9 - e_j - 2 pt for j = 1, 2, 3.
        ("e1", div(H2Class::e(1)), row([6, -3, -2, -2, -2, -2, -2, -2, -2, 0], -2)),
        ("e2", div(H2Class::e(2)), row([6, -2, -3, -2, -2, -2, -2, -2, -2, 0], -2)),
        ("e3", div(H2Class::e(3)), row([6, -2, -2, -3, -2, -2, -2, -2, -2, 0], -2)),
        // e_i -> 2f - l + 2 e9 + e7 + e_i - pt for i = 4, 5, 6.
        ("e4", div(H2Class::e(4)), row([5, -2, -2, -2, -1, -2, -2, -1, -2, 0], -1)),
        ("e5", div(H2Class::e(5)), row([5, -2, -2, -2, -2, -1, -2, -1, -2, 0], -1)),
        ("e6", div(H2Class::e(6)), row([5, -2, -2, -2, -2, -2, -1, -1, -2, 0], -1)),
        // e7 -> f + l - e1 - e2 - e3 + e9 - pt.
        ("e7", div(H2Class::e(7)), row([4, -2, -2, -2, -1, -1, -1, -1, -1, 0], -1)),
        // e8 -> 2f - l + 2 e9 + e7 + e8 - pt.
        ("e8", div(H2Class::e(8)), row([5, -2, -2, -2, -2, -2, -2, -1, -1, 0], -1)),
        ("e9", div(H2Class::e(9)), row([0, 0, 0, 0, 0, 0, 0, 0, 0, 1], 0)),
        // l -> 5f - e1 - e2 - e3 + e7 + 5 e9 - 3 pt.
        ("l", div(H2Class::l()), row([15, -6, -6, -6, -5, -5, -5, -4, -5, 0], -3)),
    ];
    for (name, input, printed) in &rows {
        let computed = t_b(input);
        r.eq(
            &format!("table3.{}", name),
            &format!("t_b({}) recomputed by composition matches the tabulated row", name),
            format_class(printed),
            format_class(&computed),
        );
    }

    // Row "1" prints as the identity, but the composition of the two
    // auxiliary tables gives 1 + f + e9 - e1 - pt (which also matches
    // the Chern character of the transformed structure sheaf).
    let computed_one = t_b(&CohClass::one());
    r.discrepancy(
        "table3.one",
        "t_b(1): tabulated row vs the value recomputed from the composition",
        "one",
        format_class(&computed_one),
        "one - e1 + e9 + f - pt",
    );

    let basis = coh_basis();
    let involution_ok = basis.iter().all(|(_, c)| t_b(&t_b(c)) == *c);
    r.ok(
        "tb.involution",
        "t_b . t_b = id on the full cohomology basis",
        involution_ok,
        "t_b^2 = id",
        if involution_ok { "t_b^2 = id".into() } else { "square differs from identity".into() },
    );
}

fn check_spectral(r: &mut Reporter, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51);
    let mut route_ok = true;
    let mut involution_ok = true;
    for _ in 0..1000 {
        let l = random_h2(&mut rng);
        route_ok &= t_tilde(&l) == t_b(&ch_line_bundle(&l)).div;
        involution_ok &= t_tilde(&t_tilde(&l)) == l;
    }
    r.ok(
        "spectral.affine_route",
        "t_tilde agrees with the degree-two part of t_b(exp c1) on 1000 seeded classes",
        route_ok,
        "affine formula = transform route",
        if route_ok { "affine formula = transform route".into() } else { "routes disagree".into() },
    );
    r.ok(
        "spectral.involution",
        "t_tilde is an affine involution on the same sample",
        involution_ok,
        "t_tilde^2 = id",
        if involution_ok { "t_tilde^2 = id".into() } else { "square differs".into() },
    );

    let mut iso_ok = true;
    for _ in 0..200 {
        let a = random_h2(&mut rng);
        let b = random_h2(&mut rng);
        iso_ok &= intersect(&omega(&a), &omega(&b)) == intersect(&a, &b);
    }
    r.ok(
        "omega.isometry",
        "the linear part omega preserves the intersection pairing",
        iso_ok,
        "omega isometric",
        if iso_ok { "omega isometric".into() } else { "pairing broken".into() },
    );

    let o1 = named_class(NamedClass::O1);
    let o2 = named_class(NamedClass::O2);
    r.eq(
        "omega.o1",
        "omega(o1) = -o2",
        format_h2(&-&o2),
        format_h2(&omega(&o1)),
    );
    // The printed value for omega(o2) is -o2, which would contradict
    // omega^2 = id; the formula gives -o1.
    r.discrepancy(
        "omega.o2",
        "omega(o2): printed value vs the value computed from the formula",
        &format_h2(&-&o2),
        format_h2(&omega(&o2)),
        &format_h2(&-&o1),
    );

    let alpha = builtin_map(BuiltinMap::Alpha);
    let kernel = PicWLattice::perp_lattice_basis();
    let mut restrict_ok = kernel.ncols() == 8;
    for j in 0..kernel.ncols() {
        let col = kernel.column(j);
        let v = H2Class::from_coeffs(std::array::from_fn(|i| {
            Rational::from_integer(col[i].clone())
        }));
        restrict_ok &= omega(&v) == alpha.apply_h2(&v);
    }
    r.ok(
        "omega.alpha_restriction",
        "omega restricted to Span(o1, o2)-perp coincides with alpha*",
        restrict_ok,
        "omega|perp = alpha*|perp",
        if restrict_ok { "omega|perp = alpha*|perp".into() } else { "restriction differs".into() },
    );

    // Torsion bookkeeping across the section/multiplicity grid.
    let mut grid_ok = true;
    let mut witness = String::from("coherent on the full grid");
    'grid: for i in [1usize, 2, 3, 4, 5, 6, 7, 9] {
        let xi = SectionClass::new(H2Class::e(i)).expect("basis sections");
        for a in 0..=5i64 {
            let img = match t_full_on_multiple_of_section(a, &xi) {
                Ok(img) => img,
                Err(e) => {
                    grid_ok = false;
                    witness = format!("e{}, a={}: {}", i, a, e);
                    break 'grid;
                }
            };
            let coherent = img.ch() == t_b(&ch_line_bundle(&xi.cls().scale_int(-a)));
            let expected_vanishing = a <= 1
                || (intersect(xi.cls(), &o1).is_zero() && intersect(xi.cls(), &o2).is_zero());
            let vanishes = img.torsion_o1 == 0 && img.torsion_o2 == 0;
            let weights_ok = {
                let w = (a - 1).max(0);
                i64::from(img.torsion_o1)
                    == w * if intersect(xi.cls(), &o1).is_one() { 1 } else { 0 }
                    && i64::from(img.torsion_o2)
                        == w * if intersect(xi.cls(), &o2).is_one() { 1 } else { 0 }
            };
            if !(coherent && weights_ok && vanishes == expected_vanishing) {
                grid_ok = false;
                witness = format!("e{}, a={}: coherence broken", i, a);
                break 'grid;
            }
        }
    }
    r.ok(
        "torsion.grid",
        "ch(h0) - k1 o1 - k2 o2 = t_b(ch(O(-a xi))) with k_i = max(a-1,0)(xi.o_i), for all sections and a <= 5",
        grid_ok,
        "coherent on the full grid",
        witness,
    );
}

fn check_picw(r: &mut Reporter) {
    let picw = PicWLattice::new();
    r.eq(
        "picw.index",
        "Pic^W has index 3 in Span(o1, o2)-perp (Smith normal form)",
        "3".into(),
        picw.index_in_perp().to_string(),
    );
    let members_ok = picw
        .generators()
        .iter()
        .all(|g| picw.contains(g).unwrap_or(false));
    r.ok(
        "picw.generators",
        "all 8 generators pass membership",
        members_ok,
        "8 of 8 members",
        if members_ok { "8 of 8 members".into() } else { "a generator failed membership".into() },
    );
    let e1_out = !picw.contains(&H2Class::e(1)).unwrap_or(true);
    r.ok(
        "picw.e1_rejected",
        "e1 fails membership (it meets o1)",
        e1_out,
        "e1 rejected",
        if e1_out { "e1 rejected".into() } else { "e1 wrongly accepted".into() },
    );
    let perp_rank = PicWLattice::perp_lattice_basis().ncols();
    r.eq(
        "picw.perp_rank",
        "both lattices have rank 8",
        "8".into(),
        perp_rank.to_string(),
    );

    let alpha = builtin_map(BuiltinMap::Alpha);
    let (_, anti_rank) = eigen_lattice(&alpha, -1).expect("alpha is an involution");
    r.eq(
        "eigen.alpha.anti",
        "dim ker(alpha* + 1) = 4 over Q",
        "4".into(),
        anti_rank.to_string(),
    );
    let (_, inv_rank) = eigen_lattice(&alpha, 1).expect("alpha is an involution");
    r.eq(
        "eigen.alpha.invariant",
        "dim ker(alpha* - 1) = 6 over Q",
        "6".into(),
        inv_rank.to_string(),
    );

    let neg = builtin_map(BuiltinMap::Neg);
    let contains = match eigen_lattice(&neg, 1) {
        Ok((basis, _)) => {
            let cols: Vec<Vec<BigInt>> = basis
                .iter()
                .filter_map(|v| v.to_ints().map(|a| a.to_vec()))
                .collect();
            let k = crate::linalg::IntMat::from_columns(&cols);
            [named_class(NamedClass::F), H2Class::e(9)].iter().all(|t| {
                crate::linalg::solve_in_column_lattice(&k, &t.to_ints().unwrap().to_vec())
                    .is_some()
            })
        }
        Err(_) => false,
    };
    r.ok(
        "eigen.neg.contains",
        "the (-1)*-invariant lattice contains f and e9",
        contains,
        "f, e9 invariant",
        if contains { "f, e9 invariant".into() } else { "missing invariant class".into() },
    );
}

fn check_mordell_weil(r: &mut Reporter) {
    let (rank, torsion) = mw_quotient_structure();
    r.eq(
        "mw.rank",
        "Pic/T has free rank 6",
        "6".into(),
        rank.to_string(),
    );
    let torsion_str = if torsion.is_empty() {
        "none".to_string()
    } else {
        torsion
            .iter()
            .map(BigInt::to_string)
            .collect::<Vec<_>>()
            .join(",")
    };
    // Reported, not asserted: the invariant factors as computed.
    r.ok(
        "mw.torsion",
        "torsion invariant factors of Pic/T (reported)",
        true,
        "reported",
        torsion_str,
    );

    let mut samples: Vec<SectionClass> = [1usize, 2, 3, 4, 5, 6, 7, 9]
        .iter()
        .map(|&i| SectionClass::new(H2Class::e(i)).expect("sections"))
        .collect();
    samples.push(mw_neg(&samples[0]));
    let e9 = SectionClass::zero_section();
    let mut axioms_ok = true;
    for x in &samples {
        axioms_ok &= mw_add(x, &e9).map(|s| s == *x).unwrap_or(false);
        axioms_ok &= mw_add(x, &mw_neg(x)).map(|s| s == e9).unwrap_or(false);
        axioms_ok &= mw_neg(&mw_neg(x)) == *x;
        for y in &samples {
            let xy = mw_add(x, y);
            let yx = mw_add(y, x);
            axioms_ok &= match (&xy, &yx) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            };
            axioms_ok &= xy.map(|s| is_section_class(s.cls())).unwrap_or(false);
        }
    }
    for x in samples.iter().take(4) {
        for y in samples.iter().take(4) {
            for z in samples.iter().take(4) {
                let left = mw_add(&mw_add(x, y).unwrap(), z).unwrap();
                let right = mw_add(x, &mw_add(y, z).unwrap()).unwrap();
                axioms_ok &= left == right;
            }
        }
    }
    r.ok(
        "mw.axioms",
        "group axioms hold on the section sample closed under one addition",
        axioms_ok,
        "identity, inverses, commutativity, associativity",
        if axioms_ok { "identity, inverses, commutativity, associativity".into() } else { "an axiom failed".into() },
    );

    let neg_zeta = mw_neg(&samples[0]);
    let mut rows_ok = true;
    for i in 2..=6 {
        let sum = mw_add(&samples[i - 1], &neg_zeta);
        let expect = &(&(&named_class(NamedClass::F) + &H2Class::e(i)) - &H2Class::e(1))
            + &H2Class::e(9);
        rows_ok &= sum.map(|s| s.cls() == &expect).unwrap_or(false);
    }
    r.ok(
        "mw.translation_rows",
        "mw_add(e_i, -e_1) reproduces the t_zeta rows f + e_i - e1 + e9, i = 2..6",
        rows_ok,
        "5 of 5 rows",
        if rows_ok { "5 of 5 rows".into() } else { "a row differs".into() },
    );

    // Brute-force normalisation oracle on 2 e1 - e9.
    let x = &H2Class::e(1).scale_int(2) - &H2Class::e(9);
    let mut found: Option<H2Class> = None;
    let f = named_class(NamedClass::F);
    let n1 = named_class(NamedClass::N1);
    let n2 = named_class(NamedClass::N2);
    for a in -10..=10i64 {
        for b in -2..=2i64 {
            for c in -2..=2i64 {
                let cand = &(&(&x + &f.scale_int(a)) + &n1.scale_int(b)) + &n2.scale_int(c);
                if is_section_class(&cand) {
                    found = Some(cand);
                }
            }
        }
    }
    let oracle = found.map(|v| format_h2(&v)).unwrap_or_else(|| "none".into());
    let computed = mw_normalize(&x)
        .map(|s| format_h2(s.cls()))
        .unwrap_or_else(|e| e.to_string());
    r.eq(
        "mw.normalize_oracle",
        "mw_normalize(2 e1 - e9) matches the brute-force search oracle",
        oracle,
        computed,
    );
}

fn check_curve_transform(r: &mut Reporter, seed: u64) {
    let f = named_class(NamedClass::F);
    let examples = [
        (
            "f",
            f.clone(),
            H2Class::e(9),
            f.clone(),
            &H2Class::e(9) + &translation_class(),
        ),
        (
            "2e9+2f",
            &H2Class::e(9).scale_int(2) + &f.scale_int(2),
            H2Class::zero(),
            &H2Class::e(9).scale_int(2) + &f.scale_int(2),
            translation_class(),
        ),
    ];
    let mut fixed_ok = true;
    let mut witness = String::from("both examples transform as expected");
    for (name, c, l, expect_d, expect_lp) in &examples {
        match spectral_transform_curve(c, l) {
            Ok((d, lp)) => {
                if &d != expect_d || &lp != expect_lp {
                    fixed_ok = false;
                    witness = format!("{}: unexpected image", name);
                }
            }
            Err(e) => {
                fixed_ok = false;
                witness = format!("{}: {}", name, e);
            }
        }
    }
    // e1 must be rejected: it is not in Pic^W.
    if spectral_transform_curve(&H2Class::e(1), &H2Class::zero()).is_ok() {
        fixed_ok = false;
        witness = "e1 was not rejected".into();
    }
    r.ok(
        "curve.fixed_examples",
        "spectral curve transform on |f| and |2e + 2f|, with e1 rejected",
        fixed_ok,
        "images match, e1 rejected",
        witness,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC2);
    let curves = [
        f.clone(),
        &H2Class::e(9).scale_int(2) + &f.scale_int(2),
        &H2Class::e(9).scale_int(3) + &f.scale_int(5),
    ];
    let mut random_ok = true;
    'outer: for c in &curves {
        for _ in 0..100 {
            let l = random_h2(&mut rng);
            // The ch-coherence identity is asserted inside the call.
            let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
                spectral_transform_curve(c, &l)
            }));
            match result {
                Ok(Ok(_)) => {}
                _ => {
                    random_ok = false;
                    break 'outer;
                }
            }
        }
    }
    r.ok(
        "curve.random",
        "ch-level identity holds for C in {f, 2e9+2f, 3e9+5f} and 100 seeded bundles each",
        random_ok,
        "identity holds on all 300 cases",
        if random_ok { "identity holds on all 300 cases".into() } else { "identity failed".into() },
    );
}

fn profile_string(profile: &[(usize, usize)]) -> String {
    profile
        .iter()
        .map(|(m, c)| format!("({m},{c})"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn check_geometry(r: &mut Reporter, seed: u64) {
    let g2 = BinaryForm::monomial(4, 0);
    let g3 = BinaryForm::monomial(6, 6);
    match fiber_profile(&g2, &g3) {
        Ok(fp) => r.eq(
            "geom.generic_profile",
            "t0^4, t1^6 give a squarefree degree-12 discriminant: twelve I1 fibers",
            "(1,12) additive=false".into(),
            format!("{} additive={}", profile_string(&fp.profile), fp.additive_flag),
        ),
        Err(e) => r.ok(
            "geom.generic_profile",
            "t0^4, t1^6 give a squarefree degree-12 discriminant: twelve I1 fibers",
            false,
            "(1,12) additive=false",
            e.to_string(),
        ),
    }

    let g2 = BinaryForm::from_ints(4, &[-3, 0, 1, 0, -3]).unwrap();
    let g3 = BinaryForm::from_ints(6, &[2, 0, 1, 0, 0, 0, 2]).unwrap();
    let invariant = is_tau_invariant(&g2) && is_tau_invariant(&g3);
    match fiber_profile(&g2, &g3) {
        Ok(fp) => r.eq(
            "geom.i2_profile",
            "an invariant pair with two double roots: the 8 I1 + 2 I2 configuration",
            "invariant (1,8) (2,2) additive=false".into(),
            format!(
                "{} {} additive={}",
                if invariant { "invariant" } else { "NOT invariant" },
                profile_string(&fp.profile),
                fp.additive_flag
            ),
        ),
        Err(e) => r.ok(
            "geom.i2_profile",
            "an invariant pair with two double roots: the 8 I1 + 2 I2 configuration",
            false,
            "invariant (1,8) (2,2) additive=false",
            e.to_string(),
        ),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6E09);
    let mut closure_ok = true;
    for _ in 0..100 {
        let mut g2 = BinaryForm::zero(4);
        let mut g3 = BinaryForm::zero(6);
        for k in (0..=4).step_by(2) {
            g2 = g2.add(&BinaryForm::monomial(4, k).scale(&rat(rng.gen_range(-4..=4))));
        }
        for k in (0..=6).step_by(2) {
            g3 = g3.add(&BinaryForm::monomial(6, k).scale(&rat(rng.gen_range(-4..=4))));
        }
        let delta = discriminant(&g2, &g3).expect("degrees are right");
        closure_ok &= is_tau_invariant(&delta);
    }
    r.ok(
        "geom.tau_closure",
        "invariant (g2, g3) always give an invariant discriminant (100 random pairs)",
        closure_ok,
        "parity closed under the discriminant",
        if closure_ok { "parity closed under the discriminant".into() } else { "invariance broken".into() },
    );

    // The plane involution attached to a cubic through (0:0:1).
    let cubic = PlaneCubic::from_int_terms(&[
        (1, (3, 0, 0)),
        (1, (0, 3, 0)),
        (1, (2, 0, 1)),
        (1, (0, 1, 2)),
    ])
    .expect("nonzero cubic");
    let mut square_ok = true;
    let mut line_ok = true;
    let mut checked = 0;
    while checked < 100 {
        let p: [Rational; 3] =
            std::array::from_fn(|_| frac(rng.gen_range(-9..=9), rng.gen_range(1..=5)));
        if p.iter().all(Rational::is_zero) || cubic.eval_dz(&p).is_zero() {
            continue;
        }
        let Ok(q) = plane_involution(&cubic, &p) else {
            square_ok = false;
            break;
        };
        let q_rat: [Rational; 3] = std::array::from_fn(|i| Rational::from_integer(q[i].clone()));
        line_ok &= (&q_rat[0] * &p[1] - &q_rat[1] * &p[0]).is_zero();
        if cubic.eval_dz(&q_rat).is_zero() {
            continue;
        }
        match (plane_involution(&cubic, &q_rat), reduce_point(&p)) {
            (Ok(back), Ok(canon)) => square_ok &= back == canon,
            _ => square_ok = false,
        }
        checked += 1;
    }
    r.ok(
        "geom.involution_square",
        "the plane involution squares to the identity on 100 random points",
        square_ok,
        "alpha^2 = id",
        if square_ok { "alpha^2 = id".into() } else { "double image moved".into() },
    );
    r.ok(
        "geom.involution_line",
        "images stay on the line through (0:0:1): the first two coordinates never move",
        line_ok,
        "lines through b preserved",
        if line_ok { "lines through b preserved".into() } else { "a point left its line".into() },
    );

    // Fixed points: rational points of the cubic away from F_z = 0.
    let on_curve = [
        [rat(1), rat(-1), rat(0)],
        [rat(1), rat(-1), rat(1)],
    ];
    let mut fixes_ok = true;
    for p in &on_curve {
        fixes_ok &= cubic.eval(p).is_zero();
        match (plane_involution(&cubic, p), reduce_point(p)) {
            (Ok(image), Ok(canon)) => fixes_ok &= image == canon,
            _ => fixes_ok = false,
        }
    }
    r.ok(
        "geom.involution_fixes_cubic",
        "points of the cubic with F_z != 0 are fixed",
        fixes_ok,
        "cubic fixed pointwise",
        if fixes_ok { "cubic fixed pointwise".into() } else { "a curve point moved".into() },
    );
}

fn check_parser(r: &mut Reporter, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9A25E);
    let mut roundtrip_ok = true;
    let mut witness = String::from("500 of 500 roundtrips exact");
    for _ in 0..500 {
        let mut c = CohClass::new(
            frac(rng.gen_range(-12..=12), rng.gen_range(1..=6)),
            random_h2(&mut rng),
            frac(rng.gen_range(-12..=12), rng.gen_range(1..=6)),
        );
        // Mix in fractional divisor coefficients now and then.
        if rng.gen_bool(0.3) {
            c.div = c.div.scale(&frac(1, rng.gen_range(2..=5)));
        }
        let printed = format_class(&c);
        match parse_class(&printed) {
            Ok(back) if back == c => {}
            Ok(_) => {
                roundtrip_ok = false;
                witness = format!("value drift on `{}`", printed);
                break;
            }
            Err(e) => {
                roundtrip_ok = false;
                witness = format!("`{}` failed to parse: {}", printed, e);
                break;
            }
        }
    }
    r.ok(
        "parser.roundtrip",
        "parse(format(c)) = c for 500 seeded random classes",
        roundtrip_ok,
        "500 of 500 roundtrips exact",
        witness,
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_green_with_documented_discrepancies() {
        let report = run_verification(DEFAULT_SEED);
        for c in report.checks() {
            assert_ne!(
                c.status,
                CheckStatus::Fail,
                "check {} failed: expected {}, actual {}",
                c.id,
                c.expected,
                c.actual
            );
        }
        let mut ids = report.discrepancy_ids();
        ids.sort_unstable();
        assert_eq!(
            ids,
            vec!["omega.o2", "table1.alpha_e1.variant", "table3.one"],
            "exactly the documented discrepancy set"
        );
        assert!(!report.has_failures());
    }

    #[test]
    fn report_is_seed_stable_in_structure() {
        let a = run_verification(1);
        let b = run_verification(2);
        let ids_a: Vec<_> = a.checks().iter().map(|c| c.id.clone()).collect();
        let ids_b: Vec<_> = b.checks().iter().map(|c| c.id.clone()).collect();
        assert_eq!(ids_a, ids_b, "check ids are stable across seeds");
        // Unique, stable ids.
        let mut sorted = ids_a.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), ids_a.len());
    }

    #[test]
    fn tsv_has_one_record_per_check() {
        let report = run_verification(DEFAULT_SEED);
        let tsv = report.to_tsv();
        assert_eq!(tsv.lines().count(), report.checks().len());
        for line in tsv.lines() {
            assert_eq!(line.split('\t').count(), 4, "bad record: {}", line);
        }
        assert!(report.find("picw.index").is_some());
        assert_eq!(report.find("picw.index").unwrap().actual, "3");
    }
}
