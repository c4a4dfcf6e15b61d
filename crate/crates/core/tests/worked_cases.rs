mod common;

use charp_core::cech::subsets;
use charp_core::frobenius::{find_relation, frob_cochain, frob_orbit};
use charp_core::kill::{ideal_member, kill_all, DEFAULT_WINDOW};
use charp_core::ringfile::ring_hash;
use charp_core::{
    parse_ring, Budget, CechComplex, ClassHandle, Fp, Fraction, PolyRing, Presentation,
};
use common::{binomial, complex_of, hasse_by_expansion, sg4_gaps, sg4_text};

fn ring(p: u64, names: &[&str]) -> PolyRing {
    PolyRing::grevlex(Fp::new(p).unwrap(), names).unwrap()
}

fn pres(r: &PolyRing, gens: &[&str]) -> Presentation {
    let g = gens.iter().map(|s| r.parse(s).unwrap()).collect();
    Presentation::new(r.clone(), g, &Budget::default()).unwrap()
}

fn sg4(p: u64) -> (charp_core::RingSpec, CechComplex) {
    let spec = parse_ring(&sg4_text(p), &Budget::default()).unwrap();
    let cx = complex_of(spec.presentation.clone(), spec.cech.clone());
    (spec, cx)
}

fn fermat(p: u64) -> CechComplex {
    let r = ring(p, &["x", "y", "z"]);
    complex_of(pres(&r, &["x^3+y^3+z^3"]), vec![0, 1])
}

#[test]
fn normal_form_and_membership() {
    let b = Budget::default();
    let r = ring(5, &["x", "y"]);
    let i = pres(&r, &["x"]);
    assert_eq!(i.normal_form(&r.parse("x*y+y").unwrap()), r.parse("y").unwrap());
    assert!(i.ideal().contains(&r.zero()));

    let (spec, _) = sg4(2);
    let s = spec.ring();
    assert!(ideal_member(&spec.presentation, &s.parse("a*c^2").unwrap(), &[s.parse("a").unwrap()], &b).unwrap());
    assert!(!ideal_member(&spec.presentation, &s.parse("b^2").unwrap(), &[s.parse("a").unwrap()], &b).unwrap());
}

#[test]
fn saturations() {
    let b = Budget::default();
    let r = ring(3, &["x", "y"]);
    let i = charp_core::IdealPresentation::new(r.clone(), vec![r.parse("x*y").unwrap()], &b).unwrap();
    let sat = i.saturate(&r.parse("y").unwrap(), &b).unwrap();
    let x = charp_core::IdealPresentation::new(r.clone(), vec![r.parse("x").unwrap()], &b).unwrap();
    assert!(sat.contains_ideal(&x) && x.contains_ideal(&sat));

    let zero = charp_core::IdealPresentation::zero(r.clone());
    let sat = zero.saturate(&r.one(), &b).unwrap();
    assert!(sat.basis().is_empty());
}

#[test]
fn hilbert_functions_match_lattice_counts() {
    for p in [2, 3] {
        let (spec, _) = sg4(p);
        for t in 0..6 {
            // the monoid ring has one monomial per point (i, 4t - i) in S
            let expected = if t == 0 { 1 } else { (4 * t + 1) as usize - sg4_gaps(t) };
            assert_eq!(spec.presentation.hilbert_function(t), expected, "p={p} t={t}");
            assert_eq!(spec.presentation.hilbert_by_rank(t), expected);
        }
    }
    let r = ring(7, &["x", "y"]);
    let plane = pres(&r, &[]);
    assert_eq!(plane.graded_basis(2).len(), 3);
    assert_eq!(plane.hilbert_function(2), 3);
}

#[test]
fn sg4_first_cohomology_is_the_semigroup_gap() {
    let b = Budget::default();
    for p in [2, 3] {
        let (_, cx) = sg4(p);
        for t in -3..=4 {
            assert_eq!(cx.lc_graded_piece(1, t, &b).unwrap().dimension, sg4_gaps(t), "p={p} t={t}");
            assert_eq!(cx.lc_graded_piece(0, t, &b).unwrap().dimension, 0);
        }
    }
}

#[test]
fn top_cohomology_of_polynomial_rings() {
    let b = Budget::default();
    for n in [2usize, 3] {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let r = ring(3, &refs);
        let cx = complex_of(pres(&r, &[]), (0..n).collect());
        for t in -6..=1i64 {
            // monomials x^{-a} with every a_j >= 1 and Σ a_j = -t
            let expected = if t <= -(n as i64) { binomial((-t - 1) as u64, n as u64 - 1) } else { 0 };
            assert_eq!(cx.lc_graded_piece(n, t, &b).unwrap().dimension as u64, expected, "n={n} t={t}");
            for i in 0..n {
                assert_eq!(cx.lc_graded_piece(i, t, &b).unwrap().dimension, 0);
            }
        }
    }
}

#[test]
fn basis_classes_are_not_boundaries() {
    let b = Budget::default();
    let (_, cx) = sg4(3);
    let piece = cx.lc_graded_piece(1, 1, &b).unwrap();
    for c in &piece.basis {
        assert!(cx.is_cocycle(c, &b).unwrap());
        assert!(cx.boundary_solve(c, &b).unwrap().is_none());
    }
}

#[test]
fn adjoining_a_square_root_of_bc() {
    let b = Budget::default();
    let (_, cx) = sg4(2);
    let base = cx.tower().clone();
    let (ext, z) = base.extended_ring("Z").unwrap();
    let monic = ext.sub(&ext.pow(&ext.var(z), 2), &ext.parse("b*c").unwrap());
    let t = base.adjoin_root("Z", monic, vec![], &b).unwrap();
    assert_eq!(t.rank_bound(), 2);
    assert!(t.injectivity_check(&b).unwrap().holds);
    let zp = ext.sub(&ext.pow(&ext.var(z), 2), &ext.parse("a*d").unwrap());
    assert!(t.zero_test(&zp));
    let u = ext.parse("b^2-Z*a").unwrap();
    assert!(!t.zero_test(&u));
    assert!(t.zero_test(&ext.pow(&u, 2)));

    // (b^2 - Z a)/a survives localization at a
    let cx_t = cx.over(t.clone());
    let f = Fraction { numerator: t.normal_form(&u), denom: vec![1, 0] };
    assert!(!cx_t.fraction_is_zero(&f, &[0], &b).unwrap());
}

#[test]
fn localization_kills_torsion() {
    let b = Budget::default();
    let r = ring(5, &["x", "y"]);
    let cx = complex_of(pres(&r, &["y"]), vec![0, 1]);
    let f = Fraction { numerator: r.parse("x*y").unwrap(), denom: vec![1, 0] };
    assert!(cx.fraction_is_zero(&f, &[0], &b).unwrap());
}

#[test]
fn compositum_rank_and_identity() {
    let b = Budget::default();
    let (_, cx) = sg4(2);
    let base = cx.tower().clone();
    let (ext, z) = base.extended_ring("Z").unwrap();
    let t = base.adjoin_root("Z", ext.sub(&ext.pow(&ext.var(z), 2), &ext.parse("b*c").unwrap()), vec![], &b).unwrap();
    let (tt, m1, m2) = t.compositum(&t, &b).unwrap();
    assert_eq!(tt.rank_bound(), t.rank_bound().pow(2));
    assert_ne!(m1[z], m2[z]);
    let (t1, _, _) = t.compositum(&base, &b).unwrap();
    assert_eq!(t1.ring().names(), t.ring().names());
    assert_eq!(t1.rank_bound(), t.rank_bound());
}

#[test]
fn cocycle_checks() {
    let b = Budget::default();
    let (_, cx) = sg4(2);
    let r = cx.ring().clone();
    let c = cx
        .cochain(0, vec![(vec![], Fraction::zero(2))])
        .unwrap();
    assert!(cx.is_cocycle(&c, &b).unwrap());
    let c = cx
        .cochain(1, vec![(vec![0], Fraction { numerator: r.one(), denom: vec![1, 0] }), (vec![1], Fraction::zero(2))])
        .unwrap();
    assert!(!cx.is_cocycle(&c, &b).unwrap());
    let top = cx.cochain(2, vec![(vec![0, 1], Fraction { numerator: r.parse("b").unwrap(), denom: vec![2, 3] })]).unwrap();
    assert!(cx.is_cocycle(&top, &b).unwrap());
}

#[test]
fn boundaries_are_solvable() {
    let b = Budget::default();
    let r = ring(3, &["x", "y", "z"]);
    let cx = complex_of(pres(&r, &["x^3+y^3+z^3"]), vec![0, 1, 2]);
    let gamma = cx
        .cochain(
            1,
            vec![
                (vec![0], Fraction { numerator: r.parse("y^2").unwrap(), denom: vec![1, 0, 0] }),
                (vec![1], Fraction { numerator: r.parse("x*z").unwrap(), denom: vec![0, 1, 0] }),
                (vec![2], Fraction { numerator: r.parse("x^2").unwrap(), denom: vec![0, 0, 1] }),
            ],
        )
        .unwrap();
    let target = cx.differential(&gamma).unwrap();
    let (beta, _) = cx.boundary_solve(&target, &b).unwrap().expect("boundary");
    let diff = cx.sub(&target, &cx.differential(&beta).unwrap());
    assert!(cx.is_zero(&diff, &b).unwrap());
}

#[test]
fn unit_homotopy_in_three_positions() {
    let r = ring(2, &["x", "y", "z"]);
    let cx = complex_of(pres(&r, &[]), vec![0, 1, 2]);
    for level in 1..=3 {
        // constant cocycles of level k are d of constant cochains, except at the top
        let c = if level == 1 {
            cx.cochain(1, subsets(3, 1).into_iter().map(|s| (s, Fraction::constant(r.parse("x+y").unwrap(), 3))).collect())
                .unwrap()
        } else {
            let src = cx
                .cochain(
                    level - 1,
                    subsets(3, level - 1)
                        .into_iter()
                        .enumerate()
                        .map(|(k, s)| (s, Fraction::constant(r.pow(&r.var(k % 3), k as u64 + 1), 3)))
                        .collect(),
                )
                .unwrap();
            cx.differential(&src).unwrap()
        };
        let eta = cx.unit_homotopy(&c).unwrap();
        let diff = cx.sub(&c, &cx.differential(&eta).unwrap());
        assert!(diff.components.values().all(|f| f.numerator.is_zero()), "level {level}");
    }
}

#[test]
fn fermat_cubic_orbits() {
    let b = Budget::default();
    for (p, dies) in [(7u64, false), (5, true), (2, true), (13, false)] {
        let cx = fermat(p);
        let piece = cx.lc_graded_piece(2, 0, &b).unwrap();
        assert_eq!(piece.dimension, 1);
        let alpha = ClassHandle::new(&cx, piece.basis[0].clone(), &b).unwrap();
        let orbit = frob_orbit(&cx, &alpha, 3, &b).unwrap();
        assert_eq!(orbit.last().unwrap().is_zero, dies, "p={p}");
        if dies {
            assert_eq!(orbit.iter().map(|m| m.is_zero).collect::<Vec<_>>(), vec![false, true]);
        }
        let rel = find_relation(&cx, &alpha, &b).unwrap();
        assert_eq!(rel.g.s, 1);
        let lambda = rel.g.coeffs[0].as_constant().unwrap_or(0);
        assert_eq!(lambda as u64, hasse_by_expansion(p), "p={p}");
    }
}

#[test]
fn frobenius_multiplies_degree_by_p() {
    let b = Budget::default();
    for p in [2u64, 3] {
        let (_, cx) = sg4(p);
        let piece = cx.lc_graded_piece(1, 1, &b).unwrap();
        let alpha = &piece.basis[0];
        let f = frob_cochain(&cx, alpha);
        assert_eq!(cx.degree(&f).unwrap(), Some(p as i64));
    }
}

#[test]
fn certificates_survive_further_extensions() {
    let b = Budget::default();
    let (spec, cx) = sg4(2);
    let all = kill_all(&cx, 1, DEFAULT_WINDOW, &ring_hash(&spec), &b).unwrap();
    let (ext, w) = all.tower.extended_ring("W").unwrap();
    let bigger = all.tower.adjoin_root("W", ext.sub(&ext.pow(&ext.var(w), 2), &ext.parse("a").unwrap()), vec![], &b).unwrap();
    assert!(bigger.injectivity_check(&b).unwrap().holds);
    let cert = &all.certificates[0];
    let map: Vec<usize> = (0..all.tower.ring().nvars()).collect();
    let cx_big = cx.over(bigger.clone());
    let from = cx.over(all.tower.clone());
    let mapped = |c: &charp_core::Cochain| from.map_cochain(c, &cx_big, &map);
    let alpha = cx.map_cochain(&cert.class_cocycle, &cx_big, &[0, 1, 2, 3]);
    let bounding = cx_big.add(&mapped(&cert.eta), &mapped(&cert.alpha_tt));
    let diff = cx_big.sub(&alpha, &cx_big.differential(&bounding).unwrap());
    assert!(cx_big.is_zero(&diff, &b).unwrap());
}

#[test]
fn polynomial_rings_need_nothing() {
    let b = Budget::default();
    for p in [2u64, 3, 5] {
        let spec = parse_ring(&format!("p = {p}\nvars = x, y\n"), &b).unwrap();
        let cx = complex_of(spec.presentation.clone(), spec.cech.clone());
        for i in 0..2 {
            let all = kill_all(&cx, i, DEFAULT_WINDOW, &ring_hash(&spec), &b).unwrap();
            assert!(all.tower.is_trivial());
            assert!(all.certificates.is_empty());
        }
    }
}
