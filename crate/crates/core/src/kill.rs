//! Killing local cohomology classes in module-finite extensions, with a
//! certificate for every step, and the resulting trivialization of colon
//! relations on systems of parameters.

use crate::budget::Budget;
use crate::cech::{CechComplex, Cochain, CohomologyPiece, Fraction, SIGN_CONVENTION};
use crate::error::{Error, Result};
use crate::frobenius::{find_relation, ClassHandle, FrobeniusPoly};
use crate::graded::Presentation;
use crate::linalg::Matrix;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poly::{Poly, PolyRing};
use crate::tower::RingTower;

/// One adjoined root. Polynomials live in the certificate's tower ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Adjunction {
    pub name: String,
    /// Čech index of the cochain component the root belongs to.
    pub subset: Vec<usize>,
    /// Denominator exponents of that component.
    pub denom: Vec<u32>,
    pub monic: Poly,
    /// `x^e ρ - numerator` for ρ roots.
    pub identity: Option<Poly>,
}

/// Conventions a certificate was produced under.
#[derive(Clone, Debug, PartialEq)]
pub struct Convention {
    pub order: String,
    pub sign: String,
    pub budget: Budget,
}

impl Convention {
    pub fn new(tower: &RingTower, budget: &Budget) -> Self {
        Convention { order: tower.ring().order().tag(), sign: SIGN_CONVENTION.to_string(), budget: budget.clone() }
    }
}

/// Every object produced while killing one class. Base cochains live in
/// the base ring; everything after the first adjunction lives in `tower`.
#[derive(Clone, Debug, PartialEq)]
pub struct KillCertificate {
    pub ring_hash: String,
    pub seq: Vec<usize>,
    pub level: usize,
    pub degree: i64,
    pub class_cocycle: Cochain,
    pub g: FrobeniusPoly,
    pub beta: Cochain,
    pub koszul_level: u32,
    pub z_adjunctions: Vec<Adjunction>,
    pub alpha_tt: Cochain,
    pub corrected: Cochain,
    pub rho_adjunctions: Vec<Adjunction>,
    pub rho: Cochain,
    pub torsion_relations: Vec<Poly>,
    pub eta: Cochain,
    pub rank_bound: u128,
    pub convention: Convention,
    pub tower: RingTower,
}

impl KillCertificate {
    /// `p^{s (#β components + #ᾱ components)}`.
    pub fn rank_limit(&self, len: usize) -> u128 {
        let p = self.tower.ring().p() as u128;
        let comps = crate::cech::subsets(len, self.level - 1).len() + crate::cech::subsets(len, self.level).len();
        p.saturating_pow(self.g.s * comps as u32)
    }
}

fn fresh_name(ring: &PolyRing, prefix: &str, subset: &[usize]) -> String {
    let base: String = std::iter::once(prefix.to_string()).chain(subset.iter().map(|j| j.to_string())).collect();
    let mut name = base.clone();
    let mut k = 1;
    while ring.var_index(&name).is_some() {
        name = format!("{base}_{k}");
        k += 1;
    }
    name
}

/// `∏ x_{seq[j]}^{exps[j]}` in a ring with `nvars` variables.
pub(crate) fn seq_monomial(nvars: usize, seq: &[usize], exps: &[u32]) -> Monomial {
    let mut m = Monomial::one(nvars);
    for (j, &e) in exps.iter().enumerate() {
        m.exps_mut()[seq[j]] += e;
    }
    m
}

fn prefix_map(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Re-express a cochain from a prefix ring in the ring of `target`.
fn widen(src: &CechComplex, c: &Cochain, target: &CechComplex) -> Cochain {
    src.map_cochain(c, target, &prefix_map(src.ring().nvars()))
}

/// Like [`widen`] but keeps numerators exactly as written.
fn embed(src: &CechComplex, c: &Cochain, target: &CechComplex) -> Cochain {
    let map = prefix_map(src.ring().nvars());
    let components = c
        .components
        .iter()
        .map(|(s, f)| {
            let numerator = target.ring().map_from(src.ring(), &f.numerator, &map);
            (s.clone(), Fraction { numerator, denom: f.denom.clone() })
        })
        .collect();
    Cochain { level: c.level, components }
}

/// `α̃ - d(η + α̃̃)` vanishes in every localization.
pub(crate) fn soundness_holds(
    cx: &CechComplex,
    alpha: &Cochain,
    alpha_tt: &Cochain,
    eta: &Cochain,
    budget: &Budget,
) -> Result<bool> {
    let bounding = cx.add(eta, alpha_tt);
    let diff = cx.sub(alpha, &cx.differential(&bounding)?);
    cx.is_zero(&diff, budget)
}

/// Kill one class of `H^i` (1 <= i < dim R) over the base of `cx`.
pub fn kill_class(
    cx: &CechComplex,
    alpha: &ClassHandle,
    ring_hash: &str,
    budget: &Budget,
) -> Result<(RingTower, KillCertificate)> {
    if !cx.tower().is_trivial() {
        return Err(Error::Precondition("kill_class starts from the base ring".into()));
    }
    let base_tower = cx.tower().clone();
    let base = base_tower.base().clone();
    let i = alpha.level();
    let dim = base.krull_dimension();
    if i == 0 {
        return Err(Error::Precondition("level-0 classes are ring elements; no extension kills them".into()));
    }
    if i >= dim {
        return Err(Error::Precondition(format!("level {i} is not below dim R = {dim}")));
    }
    let rel = find_relation(cx, alpha, budget)?;
    let p = base.ring().p() as u64;
    let top = p.pow(rel.g.s) as u32;
    let seq = cx.seq().to_vec();

    // Z roots: g(Z/x^e) = r/x^e, cleared of denominators.
    let mut tower = base_tower.clone();
    let mut z_steps: Vec<(Vec<usize>, Vec<u32>, String, usize)> = Vec::new();
    for (subset, frac) in &rel.beta.components {
        if frac.numerator.is_zero() {
            continue;
        }
        let name = fresh_name(tower.ring(), "Z", subset);
        let (ring, var) = tower.extended_ring(&name)?;
        let lifted = rel.g.lifted_coeffs(base.ring(), &ring);
        let xe = seq_monomial(ring.nvars(), &seq, &frac.denom);
        let cleared = rel.g.clear_denominator(&ring, &lifted, &ring.var(var), &xe);
        let r = ring.map_from(base.ring(), &frac.numerator, &prefix_map(base.nvars()));
        let monic = ring.sub(&cleared, &ring.mul_monomial(&r, &xe.pow(top - 1)));
        tower = tower.adjoin_root(&name, monic, Vec::new(), budget)?;
        z_steps.push((subset.clone(), frac.denom.clone(), name, var));
    }

    // ᾱ = α̃ - d(α̃̃) over the Z tower.
    let cx1 = cx.over(tower.clone());
    let alpha1 = widen(cx, &alpha.cocycle, &cx1);
    let mut alpha_tt = cx1.zero_cochain(i - 1);
    for (subset, denom, _, var) in &z_steps {
        alpha_tt.components.insert(subset.clone(), Fraction { numerator: cx1.ring().var(*var), denom: denom.clone() });
    }
    let corrected = cx1.sub(&alpha1, &cx1.differential(&alpha_tt)?);

    // ρ roots: g(ρ) = 0 together with x^e ρ = numerator.
    let mut rho_steps: Vec<(Vec<usize>, Vec<u32>, String, usize)> = Vec::new();
    let mut rho_values: Vec<(Vec<usize>, Option<Poly>)> = Vec::new();
    for (subset, frac) in &corrected.components {
        if cx1.fraction_is_zero(frac, subset, budget)? {
            rho_values.push((subset.clone(), None));
            continue;
        }
        if frac.is_constant() {
            rho_values.push((subset.clone(), Some(frac.numerator.clone())));
            continue;
        }
        let name = fresh_name(tower.ring(), "R", subset);
        let (ring, var) = tower.extended_ring(&name)?;
        let lifted = rel.g.lifted_coeffs(base.ring(), &ring);
        let rho = ring.var(var);
        let monic = rel.g.apply(&ring, &lifted, &rho);
        let xe = seq_monomial(ring.nvars(), &seq, &frac.denom);
        let num = ring.map_from(cx1.ring(), &frac.numerator, &prefix_map(cx1.ring().nvars()));
        let identity = ring.sub(&ring.mul_monomial(&rho, &xe), &num);
        tower = tower.adjoin_root(&name, monic, vec![identity], budget)?;
        rho_steps.push((subset.clone(), frac.denom.clone(), name, var));
        rho_values.push((subset.clone(), None));
    }

    // ρ as a constant cochain; clear any torsion in its differential.
    let cx2 = cx.over(tower.clone());
    let ring2 = cx2.ring().clone();
    let n1 = cx1.ring().nvars();
    let mut rho = cx2.zero_cochain(i);
    for (subset, value) in &rho_values {
        let num = if let Some((_, _, _, var)) = rho_steps.iter().find(|s| &s.0 == subset) {
            ring2.var(*var)
        } else {
            match value {
                Some(v) => tower.normal_form(&ring2.map_from(cx1.ring(), v, &prefix_map(n1))),
                None => Poly::zero(),
            }
        };
        rho.components.insert(subset.clone(), Fraction::constant(num, seq.len()));
    }
    let mut torsion_relations = Vec::new();
    if i < seq.len() {
        let drho = cx2.differential(&rho)?;
        for f in drho.components.values() {
            let nf = tower.normal_form(&f.numerator);
            if !nf.is_zero() && !torsion_relations.contains(&nf) {
                torsion_relations.push(nf);
            }
        }
    }
    if !torsion_relations.is_empty() {
        tower = tower.with_relations(torsion_relations.clone(), budget)?;
    }

    let cx3 = cx.over(tower.clone());
    let rho = widen(&cx2, &rho, &cx3);
    let eta = cx3.unit_homotopy(&rho)?;
    let alpha3 = widen(cx, &alpha.cocycle, &cx3);
    let alpha_tt = embed(&cx1, &alpha_tt, &cx3);
    let corrected = embed(&cx1, &corrected, &cx3);
    if !soundness_holds(&cx3, &alpha3, &alpha_tt, &eta, budget)? {
        return Err(Error::VerifyFail("killed class does not bound in the constructed tower".into()));
    }
    let inj = tower.injectivity_check(budget)?;
    if !inj.holds {
        return Err(Error::VerifyFail("injectivity failure in the constructed tower".into()));
    }

    let ring = tower.ring().clone();
    let adj = |steps: &[(Vec<usize>, Vec<u32>, String, usize)]| -> Vec<Adjunction> {
        steps
            .iter()
            .map(|(subset, denom, name, var)| {
                let level = tower.levels().iter().find(|l| l.var == *var).expect("adjoined level");
                Adjunction {
                    name: name.clone(),
                    subset: subset.clone(),
                    denom: denom.clone(),
                    monic: level.monic.clone(),
                    identity: level.extra.first().cloned(),
                }
            })
            .collect()
    };
    let z_adjunctions = adj(&z_steps);
    let rho_adjunctions = adj(&rho_steps);
    let torsion_relations = torsion_relations.iter().map(|g| ring.map_from(&ring2, g, &prefix_map(ring2.nvars()))).collect();
    let cert = KillCertificate {
        ring_hash: ring_hash.to_string(),
        seq,
        level: i,
        degree: alpha.degree,
        class_cocycle: alpha.cocycle.clone(),
        g: rel.g,
        beta: rel.beta,
        koszul_level: rel.level,
        z_adjunctions,
        alpha_tt,
        corrected,
        rho_adjunctions,
        rho,
        torsion_relations,
        eta,
        rank_bound: tower.rank_bound(),
        convention: Convention::new(&tower, budget),
        tower: tower.clone(),
    };
    if cert.rank_bound > cert.rank_limit(cx.len()) {
        return Err(Error::VerifyFail(format!(
            "rank bound {} exceeds {}",
            cert.rank_bound,
            cert.rank_limit(cx.len())
        )));
    }
    Ok((tower, cert))
}

/// Outcome of killing every class of `H^i` in a scanned window.
#[derive(Clone, Debug)]
pub struct KillAll {
    pub tower: RingTower,
    pub certificates: Vec<KillCertificate>,
    /// For each certificate, its tower's variables inside `tower`.
    pub maps: Vec<Vec<usize>>,
    /// Scanned degrees with their dimensions.
    pub dimensions: Vec<(i64, usize)>,
}

/// Default degree window scanned before the guard bands.
pub const DEFAULT_WINDOW: (i64, i64) = (-4, 4);

/// Compute `H^i_t` over `[lo, hi]` and confirm `guard` vanishing degrees on
/// both sides of the nonzero range (finite length evidence).
pub fn scan_window(
    cx: &CechComplex,
    i: usize,
    window: (i64, i64),
    budget: &Budget,
) -> Result<Vec<CohomologyPiece>> {
    let mut pieces = Vec::new();
    for t in window.0..=window.1 {
        pieces.push(cx.lc_graded_piece(i, t, budget)?);
    }
    let nonzero: Vec<i64> = pieces.iter().filter(|p| p.dimension > 0).map(|p| p.t).collect();
    let (Some(&lo), Some(&hi)) = (nonzero.first(), nonzero.last()) else {
        return Ok(pieces);
    };
    let g = budget.guard as i64;
    for t in (lo - g..lo).chain(hi + 1..=hi + g) {
        let dim = match pieces.iter().find(|p| p.t == t) {
            Some(p) => p.dimension,
            None => {
                let p = cx.lc_graded_piece(i, t, budget)?;
                let d = p.dimension;
                pieces.push(p);
                d
            }
        };
        if dim != 0 {
            return Err(Error::Precondition(format!(
                "finite length not evidenced: H^{i} has dimension {dim} in degree {t}, inside the guard band of [{lo}, {hi}]"
            )));
        }
    }
    pieces.sort_by_key(|p| p.t);
    Ok(pieces)
}

/// Kill every basis class of `H^i` found in the window and compose the towers.
pub fn kill_all(
    cx: &CechComplex,
    i: usize,
    window: (i64, i64),
    ring_hash: &str,
    budget: &Budget,
) -> Result<KillAll> {
    let base = cx.tower().base().clone();
    let dim = base.krull_dimension();
    if i >= dim {
        return Err(Error::Precondition(format!("level {i} is not below dim R = {dim}")));
    }
    let pieces = scan_window(cx, i, window, budget)?;
    let dimensions = pieces.iter().map(|p| (p.t, p.dimension)).collect();
    let mut tower = RingTower::trivial(base);
    let mut certificates = Vec::new();
    let mut maps: Vec<Vec<usize>> = Vec::new();
    for piece in pieces.iter().filter(|p| p.dimension > 0) {
        for cocycle in &piece.basis {
            let class = ClassHandle { cocycle: cocycle.clone(), degree: piece.t, piece: Some((i, piece.t)) };
            let (t, cert) = kill_class(cx, &class, ring_hash, budget)?;
            let (joined, _, other) = tower.compositum(&t, budget)?;
            tower = joined;
            maps.push(other);
            certificates.push(cert);
        }
    }
    let out = KillAll { tower, certificates, maps, dimensions };
    recheck_in_compositum(cx, &out, budget)?;
    Ok(out)
}

/// Each certificate's bounding identity, transported into the compositum.
pub fn recheck_in_compositum(cx: &CechComplex, all: &KillAll, budget: &Budget) -> Result<()> {
    let target = cx.over(all.tower.clone());
    for (k, (cert, map)) in all.certificates.iter().zip(&all.maps).enumerate() {
        let own = cx.over(cert.tower.clone());
        let alpha = cx.map_cochain(&cert.class_cocycle, &target, &prefix_map(cx.ring().nvars()));
        let alpha_tt = own.map_cochain(&cert.alpha_tt, &target, map);
        let eta = own.map_cochain(&cert.eta, &target, map);
        if !soundness_holds(&target, &alpha, &alpha_tt, &eta, budget)? {
            return Err(Error::VerifyFail(format!("certificate {k} does not bound in the compositum")));
        }
    }
    if !all.tower.injectivity_check(budget)?.holds {
        return Err(Error::VerifyFail("injectivity failure in the compositum".into()));
    }
    Ok(())
}

/// `f ∈ P + (gens)` in the base ring.
pub fn ideal_member(base: &Presentation, f: &Poly, gens: &[Poly], budget: &Budget) -> Result<bool> {
    Ok(base.ideal().add_generators(gens, budget)?.contains(f))
}

/// Witness `w` of a colon relation `x_j w ∈ (x_1..x_{j-1})` together with
/// cofactors `w = Σ c_k x_k` valid in a module-finite extension.
#[derive(Clone, Debug)]
pub struct TrivializationCertificate {
    pub ring_hash: String,
    pub params: Vec<Poly>,
    pub witness: Poly,
    pub tower: RingTower,
    /// One cofactor per parameter `x_1..x_{j-1}`, in the tower ring.
    pub cofactors: Vec<Poly>,
    pub kills: Vec<KillAll>,
}

/// Kill `H^i` for every `i < j` and search the resulting tower for cofactors.
pub fn trivialize_relation(
    cx: &CechComplex,
    params: &[Poly],
    witness: &Poly,
    ring_hash: &str,
    budget: &Budget,
) -> Result<TrivializationCertificate> {
    let base = cx.tower().base().clone();
    let ring = base.ring().clone();
    let j = params.len();
    if j == 0 {
        return Err(Error::Precondition("empty parameter list".into()));
    }
    let weights = vec![1; ring.nvars()];
    if params.iter().any(|x| !x.is_homogeneous(&weights) || x.total_degree().unwrap_or(0) == 0) {
        return Err(Error::Precondition("parameters must be homogeneous of positive degree".into()));
    }
    let dim = base.krull_dimension();
    let quotient = Presentation::new(ring.clone(), [base.ideal().generators(), params].concat(), budget)?;
    if j > dim || quotient.krull_dimension() != dim - j {
        return Err(Error::Precondition("parameters are not part of a system of parameters".into()));
    }
    let prefix = &params[..j - 1];
    if ideal_member(&base, witness, prefix, budget)? {
        return Err(Error::Precondition("witness already lies in the ideal of the earlier parameters".into()));
    }
    if !ideal_member(&base, &ring.mul(&params[j - 1], witness), prefix, budget)? {
        return Err(Error::Precondition("x_j times the witness is not in the ideal of the earlier parameters".into()));
    }
    let mut tower = RingTower::trivial(base.clone());
    let mut kills = Vec::new();
    for i in 0..j {
        let all = kill_all(cx, i, DEFAULT_WINDOW, ring_hash, budget)?;
        tower = tower.compositum(&all.tower, budget)?.0;
        kills.push(all);
    }
    let cofactors = membership_search(&tower, witness, prefix, budget)?.ok_or_else(|| {
        Error::Budget(format!(
            "no cofactors of total degree <= {} found in the tower (not a disproof)",
            witness.total_degree().unwrap_or(0) + budget.degree_cap as u64
        ))
    })?;
    Ok(TrivializationCertificate {
        ring_hash: ring_hash.to_string(),
        params: params.to_vec(),
        witness: witness.clone(),
        tower,
        cofactors,
        kills,
    })
}

/// Cofactors `c_k` with `w - Σ c_k x_k = 0` in the tower, searched among
/// standard monomials of increasing total degree.
pub fn membership_search(tower: &RingTower, w: &Poly, xs: &[Poly], budget: &Budget) -> Result<Option<Vec<Poly>>> {
    let ring = tower.ring();
    let w = tower.normal_form(&tower.lift(w));
    if w.is_zero() {
        return Ok(Some(vec![Poly::zero(); xs.len()]));
    }
    if xs.is_empty() {
        return Ok(None);
    }
    let xs: Vec<Poly> = xs.iter().map(|x| tower.lift(x)).collect();
    let leads: Vec<Monomial> = tower.ideal().basis().iter().filter_map(|g| g.lead_monomial().cloned()).collect();
    let standard = |m: &Monomial| !leads.iter().any(|l| l.divides(m));
    let mut unknowns: Vec<(usize, Monomial)> = Vec::new();
    let max = (w.total_degree().unwrap_or(0) + budget.degree_cap as u64) as u32;
    for d in 0..=max {
        budget.check_time("membership search")?;
        for m in monomials_of_degree(ring.nvars(), d).into_iter().filter(standard) {
            for k in 0..xs.len() {
                unknowns.push((k, m.clone()));
            }
        }
        let images: Vec<Poly> =
            unknowns.iter().map(|(k, m)| tower.normal_form(&ring.mul_monomial(&xs[*k], m))).collect();
        let mut rows: Vec<Monomial> = images.iter().chain(std::iter::once(&w)).flat_map(|f| f.terms().iter().map(|(m, _)| m.clone())).collect();
        rows.sort();
        rows.dedup();
        let index = |m: &Monomial| rows.binary_search(m).unwrap();
        let mut mat = Matrix::zeros(rows.len(), images.len());
        for (c, f) in images.iter().enumerate() {
            for (m, v) in f.terms() {
                mat.set(index(m), c, *v);
            }
        }
        let mut rhs = vec![0u32; rows.len()];
        for (m, v) in w.terms() {
            rhs[index(m)] = *v;
        }
        if let Some(x) = mat.solve(ring.field(), &rhs) {
            let mut cof = vec![Poly::zero(); xs.len()];
            for ((k, m), &v) in unknowns.iter().zip(&x) {
                if v != 0 {
                    cof[*k] = ring.add(&cof[*k], &ring.term(m.clone(), v));
                }
            }
            let cof = cof.iter().map(|c| tower.normal_form(c)).collect();
            return Ok(Some(cof));
        }
    }
    Ok(None)
}
