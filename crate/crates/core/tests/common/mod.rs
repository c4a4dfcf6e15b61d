#![allow(dead_code)]

use charp_core::cech::subsets;
use charp_core::{Budget, CechComplex, Cochain, Fp, Fraction, Monomial, Poly, PolyRing, Presentation, RingTower};
use rand::seq::SliceRandom;
use rand::Rng;

pub const SG4_GENS: [&str; 4] = ["a*d-b*c", "b^3-a^2*c", "c^3-b*d^2", "b^2*d-a*c^2"];

pub fn sg4_text(p: u64) -> String {
    format!("p = {p}\nvars = a, b, c, d\nideal = {}\ncech = a, d\n", SG4_GENS.join(", "))
}

pub fn complex_of(pres: Presentation, seq: Vec<usize>) -> CechComplex {
    CechComplex::new(RingTower::trivial(pres), seq, &Budget::default()).expect("m-primary sequence")
}

pub fn random_monomial<R: Rng>(rng: &mut R, n: usize, deg: u32) -> Monomial {
    let mut e = vec![0u32; n];
    for _ in 0..deg {
        e[rng.gen_range(0..n)] += 1;
    }
    Monomial::from_exponents(e)
}

/// Up to `terms` random terms; homogeneous of `deg` when `homogeneous`,
/// otherwise of degree at most `deg`.
pub fn random_poly<R: Rng>(rng: &mut R, ring: &PolyRing, terms: usize, deg: u32, homogeneous: bool) -> Poly {
    let n = ring.nvars();
    let p = ring.p();
    let pieces: Vec<Poly> = (0..rng.gen_range(1..=terms))
        .map(|_| {
            let d = if homogeneous { deg } else { rng.gen_range(0..=deg) };
            ring.term(random_monomial(rng, n, d), rng.gen_range(1..p))
        })
        .collect();
    pieces.iter().fold(ring.zero(), |acc, t| ring.add(&acc, t))
}

/// A random standard graded quotient of `F_p[x_0..x_{n-1}]`, `n <= 4`.
pub fn random_presentation<R: Rng>(rng: &mut R) -> Presentation {
    let p = *[2u64, 3, 5].choose(rng).unwrap();
    let n = rng.gen_range(2..=4);
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let ring = PolyRing::grevlex(Fp::new(p).unwrap(), &refs).unwrap();
    let gens: Vec<Poly> = (0..rng.gen_range(0..=2))
        .map(|_| {
            let deg = rng.gen_range(2..=3);
            random_poly(rng, &ring, 3, deg, true)
        })
        .filter(|g| !g.is_zero())
        .collect();
    Presentation::new(ring, gens, &Budget::default()).unwrap()
}

pub fn random_fraction<R: Rng>(rng: &mut R, cx: &CechComplex, subset: &[usize], homogeneous: Option<u32>) -> Fraction {
    let d = cx.len();
    let mut denom = vec![0u32; d];
    for &j in subset {
        denom[j] = rng.gen_range(0..=2);
    }
    let numerator = match homogeneous {
        Some(deg) => random_poly(rng, cx.ring(), 3, deg, true),
        None => random_poly(rng, cx.ring(), 3, 3, false),
    };
    Fraction { numerator: cx.tower().normal_form(&numerator), denom }
}

pub fn random_cochain<R: Rng>(rng: &mut R, cx: &CechComplex, level: usize) -> Cochain {
    let comps = subsets(cx.len(), level).into_iter().map(|s| {
        let f = random_fraction(rng, cx, &s, None);
        (s, f)
    });
    cx.cochain(level, comps.collect()).unwrap()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Points `(i, 4t - i)` of the degree-`t` slice of the normalization of
/// the SG4 semigroup that do not lie in the semigroup itself.
pub fn sg4_gaps(t: i64) -> usize {
    if t <= 0 {
        return 0;
    }
    let gens = [(4i64, 0i64), (3, 1), (1, 3), (0, 4)];
    // semigroup elements of total 4t are sums of exactly t generators
    let mut reach = std::collections::BTreeSet::new();
    reach.insert((0i64, 0i64));
    for _ in 0..t {
        reach = reach.iter().flat_map(|&(x, y)| gens.iter().map(move |&(a, b)| (x + a, y + b))).collect();
    }
    (0..=4 * t).filter(|&i| !reach.contains(&(i, 4 * t - i))).count()
}

/// Coefficient of `(xyz)^{p-1}` in `(x^3 + y^3 + z^3)^{p-1}` mod `p`, by
/// repeated multiplication of exponent maps with machine integers.
pub fn hasse_by_expansion(p: u64) -> u64 {
    use std::collections::HashMap;
    let mut acc: HashMap<[u32; 3], u64> = HashMap::from([([0, 0, 0], 1)]);
    for _ in 0..p - 1 {
        let mut next: HashMap<[u32; 3], u64> = HashMap::new();
        for (e, c) in &acc {
            for k in 0..3 {
                let mut e2 = *e;
                e2[k] += 3;
                *next.entry(e2).or_insert(0) += c;
            }
        }
        acc = next.into_iter().map(|(e, c)| (e, c % p)).collect();
    }
    let q = (p - 1) as u32;
    acc.get(&[q, q, q]).copied().unwrap_or(0)
}

pub type Check = std::result::Result<(), String>;

fn instance<R: Rng>(rng: &mut R) -> CechComplex {
    let pres = random_presentation(rng);
    let n = pres.nvars();
    complex_of(pres, (0..n).collect())
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

pub fn d_squared_vanishes<R: Rng>(rng: &mut R) -> Check {
    let cx = instance(rng);
    let level = rng.gen_range(0..=cx.len() - 2);
    let c = random_cochain(rng, &cx, level);
    let dd = cx.differential(&cx.differential(&c).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(dd.components.values().all(|f| cx.tower().zero_test(&f.numerator)), || format!("d(d c) != 0 for {c:?}"))
}

pub fn normal_form_is_idempotent<R: Rng>(rng: &mut R) -> Check {
    let pres = random_presentation(rng);
    let ring = pres.ring();
    let f = random_poly(rng, ring, 6, 4, false);
    let ideal = pres.ideal();
    let nf = ideal.normal_form(&f);
    ensure(ideal.normal_form(&nf) == nf, || "NF(NF f) != NF f".into())?;
    let (quots, rem) = ideal.division(&f);
    ensure(rem == nf, || "division remainder differs from NF".into())?;
    let mut acc = rem;
    for (q, g) in quots.iter().zip(ideal.basis()) {
        acc = ring.add(&acc, &ring.mul(q, g));
    }
    ensure(acc == f, || format!("transcript does not rebuild {}", ring.format(&f)))?;
    ensure(charp_core::groebner::is_groebner(ring, ideal.basis()), || "basis fails the S-pair criterion".into())
}

pub fn membership_matches_normal_form<R: Rng>(rng: &mut R) -> Check {
    let pres = random_presentation(rng);
    let ring = pres.ring();
    let ideal = pres.ideal();
    let mut comb = ring.zero();
    for g in ideal.generators() {
        comb = ring.add(&comb, &ring.mul(&random_poly(rng, ring, 3, 2, false), g));
    }
    ensure(ideal.contains(&comb), || "combination of generators not a member".into())?;
    let f = random_poly(rng, ring, 4, 3, false);
    let member = charp_core::kill::ideal_member(&pres, &f, &[], &charp_core::Budget::default()).map_err(|e| e.to_string())?;
    ensure(member == ideal.normal_form(&f).is_zero(), || "membership disagrees with NF".into())
}

pub fn freshman_dream<R: Rng>(rng: &mut R) -> Check {
    let pres = random_presentation(rng);
    let ring = pres.ring();
    let u = random_poly(rng, ring, 4, 3, false);
    let v = random_poly(rng, ring, 4, 3, false);
    let lhs = ring.pow(&ring.add(&u, &v), ring.p() as u64);
    let rhs = ring.add(&ring.frobenius(&u), &ring.frobenius(&v));
    ensure(pres.normal_form(&lhs) == pres.normal_form(&rhs), || "(u+v)^p != u^p + v^p".into())
}

pub fn random_frobenius_poly<R: Rng>(rng: &mut R, ring: &PolyRing) -> charp_core::FrobeniusPoly {
    let s = rng.gen_range(1..=2);
    let coeffs = (0..s).map(|_| random_poly(rng, ring, 2, 2, false)).collect();
    charp_core::FrobeniusPoly { s, coeffs }
}

pub fn g_is_additive<R: Rng>(rng: &mut R) -> Check {
    let pres = random_presentation(rng);
    let ring = pres.ring();
    let g = random_frobenius_poly(rng, ring);
    let u = random_poly(rng, ring, 3, 2, false);
    let v = random_poly(rng, ring, 3, 2, false);
    let lifted = g.lifted_coeffs(ring, ring);
    let sum = ring.add(&g.apply(ring, &lifted, &u), &g.apply(ring, &lifted, &v));
    let lhs = g.apply(ring, &lifted, &ring.add(&u, &v));
    ensure(pres.normal_form(&ring.sub(&lhs, &sum)).is_zero(), || "g(u+v) != g(u) + g(v)".into())
}

pub fn frobenius_commutes_with_d<R: Rng>(rng: &mut R) -> Check {
    use charp_core::frobenius::frob_cochain;
    let cx = instance(rng);
    let level = rng.gen_range(0..cx.len());
    let c = random_cochain(rng, &cx, level);
    let a = frob_cochain(&cx, &cx.differential(&c).map_err(|e| e.to_string())?);
    let b = cx.differential(&frob_cochain(&cx, &c)).map_err(|e| e.to_string())?;
    let zero = cx.is_zero(&cx.sub(&a, &b), &charp_core::Budget::default()).map_err(|e| e.to_string())?;
    ensure(zero, || "F(d c) != d(F c)".into())
}

pub fn loc_zero_ignores_scaling<R: Rng>(rng: &mut R) -> Check {
    let cx = instance(rng);
    let budget = charp_core::Budget::default();
    let k = rng.gen_range(1..=cx.len());
    let subs = subsets(cx.len(), k);
    let subset = subs.choose(rng).unwrap().clone();
    let f = random_fraction(rng, &cx, &subset, None);
    let j = *subset.choose(rng).unwrap();
    let e = rng.gen_range(1..=2);
    let ring = cx.ring();
    let mut g = f.clone();
    g.numerator = cx.tower().normal_form(&ring.mul(&f.numerator, &ring.pow(&ring.var(cx.seq()[j]), e as u64)));
    g.denom[j] += e;
    let a = cx.fraction_is_zero(&f, &subset, &budget).map_err(|e| e.to_string())?;
    let b = cx.fraction_is_zero(&g, &subset, &budget).map_err(|e| e.to_string())?;
    ensure(a == b, || "x-scaling changed the localization test".into())
}

pub fn adjoined_roots_are_roots<R: Rng>(rng: &mut R) -> Check {
    let budget = charp_core::Budget::default();
    let pres = random_presentation(rng);
    let tower = RingTower::trivial(pres);
    let (ext, z) = tower.extended_ring("Z").map_err(|e| e.to_string())?;
    let k = rng.gen_range(1..=3u32);
    let mut h = ext.pow(&ext.var(z), k as u64);
    for j in 0..k {
        let base: Vec<usize> = (0..tower.nbase()).collect();
        let c = ext.map_from(tower.ring(), &random_poly(rng, tower.ring(), 2, 2, false), &base);
        h = ext.add(&h, &ext.mul(&c, &ext.pow(&ext.var(z), j as u64)));
    }
    let t = tower.adjoin_root("Z", h.clone(), vec![], &budget).map_err(|e| e.to_string())?;
    ensure(t.zero_test(&h), || "h(Z) is not zero in the tower".into())?;
    ensure(t.spanning_monomials().len() as u128 == t.rank_bound(), || "spanning set size".into())?;
    // every power of Z reduces into the span of 1, Z, .., Z^{k-1}
    let hi = t.normal_form(&ext.pow(&ext.var(z), (k + 2) as u64));
    ensure(hi.terms().iter().all(|(m, _)| m.exp(z) < k), || "Z-power escapes the spanning set".into())?;
    let inj = t.injectivity_check(&budget).map_err(|e| e.to_string())?;
    ensure(inj.holds, || "monic adjunction is not injective".into())
}

pub fn ring_text_round_trips<R: Rng>(rng: &mut R) -> Check {
    use charp_core::ringfile::{ring_hash, serialize_ring};
    let pres = random_presentation(rng);
    let budget = charp_core::Budget::default();
    let ring = pres.ring();
    let gens: Vec<String> = pres.ideal().generators().iter().map(|g| ring.format(g)).collect();
    let text = format!("p = {}\nvars = {}\nideal = {}\n", ring.p(), ring.names().join(", "), gens.join(", "));
    let spec = charp_core::parse_ring(&text, &budget).map_err(|e| e.to_string())?;
    let again = charp_core::parse_ring(&serialize_ring(&spec), &budget).map_err(|e| e.to_string())?;
    ensure(serialize_ring(&again) == serialize_ring(&spec), || "serialization is not stable".into())?;
    ensure(ring_hash(&again) == ring_hash(&spec), || "hash is not stable".into())
}

/// A cochain all of whose components have degree `t`.
pub fn random_homogeneous_cochain<R: Rng>(rng: &mut R, cx: &CechComplex, level: usize, t: i64) -> Cochain {
    let comps = subsets(cx.len(), level).into_iter().map(|s| {
        let mut denom = vec![0u32; cx.len()];
        for &j in &s {
            denom[j] = rng.gen_range(0..=1);
        }
        let e: i64 = denom.iter().map(|&x| x as i64).sum();
        let deg = t + e;
        let numerator = if deg < 0 { cx.ring().zero() } else { random_poly(rng, cx.ring(), 2, deg as u32, true) };
        (s, Fraction { numerator: cx.tower().normal_form(&numerator), denom })
    });
    cx.cochain(level, comps.collect()).unwrap()
}

pub fn boundaries_solve<R: Rng>(rng: &mut R) -> Check {
    let budget = charp_core::Budget::default();
    let cx = instance(rng);
    let level = rng.gen_range(0..cx.len());
    let t = rng.gen_range(0..=1);
    let gamma = random_homogeneous_cochain(rng, &cx, level, t);
    let target = cx.differential(&gamma).map_err(|e| e.to_string())?;
    let Some((beta, _)) = cx.boundary_solve(&target, &budget).map_err(|e| e.to_string())? else {
        return Err("d(γ) not recognised as a boundary".into());
    };
    let diff = cx.sub(&target, &cx.differential(&beta).map_err(|e| e.to_string())?);
    ensure(cx.is_zero(&diff, &budget).map_err(|e| e.to_string())?, || "d(β) != target".into())
}
