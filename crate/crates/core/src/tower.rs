//! Module-finite extensions of a graded base ring, presented as
//! `F_p[base vars, Z_1..Z_m] / (P + monic relations + extra relations)`.
//!
//! Every tower carries an injectivity certificate: the elimination ideal of
//! the combined ideal back to the base variables equals `P`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graded::Presentation;
use crate::ideal::IdealPresentation;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Poly, PolyRing};

/// One adjoined variable with its monic relation and any further
/// relations introduced together with it.
#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    pub name: String,
    pub var: usize,
    pub monic: Poly,
    pub degree: u32,
    pub extra: Vec<Poly>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InjectivityCertificate {
    pub holds: bool,
    /// Reduced Gröbner basis (base grevlex) of the elimination ideal.
    pub elimination_basis: Vec<Poly>,
}

#[derive(Clone, Debug)]
pub struct RingTower {
    base: Presentation,
    ring: PolyRing,
    levels: Vec<Level>,
    relations: Vec<Poly>,
    ideal: IdealPresentation,
    injectivity: InjectivityCertificate,
    sat_cache: Arc<Mutex<HashMap<Vec<usize>, IdealPresentation>>>,
}

impl PartialEq for RingTower {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.ring == other.ring && self.levels == other.levels && self.ideal == other.ideal
    }
}

fn tower_order(nbase: usize, nnew: usize) -> MonomialOrder {
    let mut blocks: Vec<Vec<usize>> = (nbase..nbase + nnew).rev().map(|v| vec![v]).collect();
    blocks.push((0..nbase).collect());
    MonomialOrder::blocks(blocks)
}

/// Check that `h` is monic in `var` under the tower order: the leading
/// monomial is a pure power `var^D` with coefficient 1 and no other term
/// reaches degree `D` in `var`.
pub fn monic_degree(ring: &PolyRing, h: &Poly, var: usize) -> Option<u32> {
    let (lm, lc) = h.lead()?;
    let deg = lm.exp(var);
    if *lc != 1 || deg == 0 || lm.support().any(|v| v != var) {
        return None;
    }
    if h.terms()[1..].iter().any(|(m, _)| m.exp(var) >= deg) {
        return None;
    }
    if h.terms().iter().any(|(m, _)| m.support().any(|v| v > var)) {
        return None;
    }
    let _ = ring;
    Some(deg)
}

impl RingTower {
    pub fn trivial(base: Presentation) -> Self {
        let n = base.nvars();
        let ring = base.ring().with_order(tower_order(n, 0)).expect("grevlex block");
        let ideal = IdealPresentation::from_reduced_basis(ring.clone(), base.ideal().basis().to_vec());
        let injectivity =
            InjectivityCertificate { holds: true, elimination_basis: base.ideal().basis().to_vec() };
        RingTower {
            base,
            ring,
            levels: Vec::new(),
            relations: Vec::new(),
            ideal,
            injectivity,
            sat_cache: Arc::default(),
        }
    }

    pub fn base(&self) -> &Presentation {
        &self.base
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Relations added without a new variable (torsion clearing).
    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn ideal(&self) -> &IdealPresentation {
        &self.ideal
    }

    pub fn injectivity(&self) -> &InjectivityCertificate {
        &self.injectivity
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn nbase(&self) -> usize {
        self.base.nvars()
    }

    /// Upper bound on the rank of the tower as a module over the base.
    pub fn rank_bound(&self) -> u128 {
        self.levels.iter().map(|l| l.degree as u128).product()
    }

    /// Base polynomial viewed in the tower ring.
    pub fn lift(&self, f: &Poly) -> Poly {
        let map: Vec<usize> = (0..self.nbase()).collect();
        self.ring.map_from(self.base.ring(), f, &map)
    }

    /// The tower ring with one more variable `name`, and its index.
    pub fn extended_ring(&self, name: &str) -> Result<(PolyRing, usize)> {
        let mut names = self.ring.names().to_vec();
        names.push(name.to_string());
        let n = names.len();
        let ring = PolyRing::new(self.ring.field(), names, tower_order(self.nbase(), n - self.nbase()))?;
        Ok((ring, n - 1))
    }

    /// Adjoin a root of `monic` (a polynomial in [`RingTower::extended_ring`]),
    /// optionally together with further relations involving the new variable.
    pub fn adjoin_root(&self, name: &str, monic: Poly, extra: Vec<Poly>, budget: &Budget) -> Result<RingTower> {
        let (ring, var) = self.extended_ring(name)?;
        let degree = monic_degree(&ring, &monic, var).ok_or_else(|| {
            Error::Precondition(format!("relation {} is not monic in {name}", ring.format(&monic)))
        })?;
        let map: Vec<usize> = (0..self.ring.nvars()).collect();
        let mut seed: Vec<Poly> = self.ideal.basis().iter().map(|g| ring.map_from(&self.ring, g, &map)).collect();
        seed.push(monic.clone());
        seed.extend(extra.iter().cloned());
        let ideal = IdealPresentation::new(ring.clone(), seed, budget)?;
        let mut levels = self.levels.clone();
        levels.push(Level { name: name.to_string(), var, monic, degree, extra });
        let relations = self.relations.iter().map(|g| ring.map_from(&self.ring, g, &map)).collect();
        RingTower::assemble(self.base.clone(), ring, levels, relations, ideal)
    }

    /// Add relations in existing variables (the result is a quotient tower).
    pub fn with_relations(&self, extra: Vec<Poly>, budget: &Budget) -> Result<RingTower> {
        let ideal = self.ideal.add_generators(&extra, budget)?;
        let mut relations = self.relations.clone();
        relations.extend(extra);
        RingTower::assemble(self.base.clone(), self.ring.clone(), self.levels.clone(), relations, ideal)
    }

    fn assemble(
        base: Presentation,
        ring: PolyRing,
        levels: Vec<Level>,
        relations: Vec<Poly>,
        ideal: IdealPresentation,
    ) -> Result<RingTower> {
        let nbase = base.nvars();
        // The tower order eliminates the adjoined block, so the basis elements
        // free of adjoined variables form the reduced basis of the contraction.
        let contraction: Vec<Poly> = ideal
            .basis()
            .iter()
            .filter(|g| g.terms().iter().all(|(m, _)| m.support().all(|v| v < nbase)))
            .map(|g| {
                let terms = g
                    .terms()
                    .iter()
                    .map(|(m, c)| (Monomial::from_exponents(m.exps()[..nbase].iter().copied()), *c));
                base.ring().from_terms(terms)
            })
            .collect();
        let holds = contraction == base.ideal().basis();
        if !holds {
            let shown: Vec<String> = contraction.iter().map(|g| base.ring().format(g)).collect();
            return Err(Error::VerifyFail(format!(
                "injectivity failure: contraction to the base is ({}) instead of the base ideal",
                shown.join(", ")
            )));
        }
        Ok(RingTower {
            base,
            ring,
            levels,
            relations,
            ideal,
            injectivity: InjectivityCertificate { holds, elimination_basis: contraction },
            sat_cache: Arc::default(),
        })
    }

    /// `u = 0` in the tower.
    pub fn zero_test(&self, u: &Poly) -> bool {
        self.ideal.contains(u)
    }

    pub fn normal_form(&self, u: &Poly) -> Poly {
        self.ideal.normal_form(u)
    }

    /// The ideal `(0 : (∏ vars)^∞)` of the tower, cached per variable set.
    pub fn torsion_ideal(&self, vars: &[usize], budget: &Budget) -> Result<IdealPresentation> {
        let mut key = vars.to_vec();
        key.sort_unstable();
        key.dedup();
        if key.is_empty() {
            return Ok(self.ideal.clone());
        }
        if let Some(hit) = self.sat_cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let prod = key.iter().fold(self.ring.one(), |acc, &v| self.ring.mul(&acc, &self.ring.var(v)));
        let sat = self.ideal.saturate(&prod, budget)?;
        self.sat_cache.lock().unwrap().insert(key, sat.clone());
        Ok(sat)
    }

    /// `u / (∏ vars)^k = 0` in the localization at the product of `vars`.
    pub fn loc_zero_test(&self, numerator: &Poly, vars: &[usize], budget: &Budget) -> Result<bool> {
        if self.zero_test(numerator) {
            return Ok(true);
        }
        Ok(self.torsion_ideal(vars, budget)?.contains(numerator))
    }

    /// Recompute injectivity independently through a fresh elimination.
    pub fn injectivity_check(&self, budget: &Budget) -> Result<InjectivityCertificate> {
        let adjoined: Vec<usize> = (self.nbase()..self.ring.nvars()).collect();
        let elim = self.ideal.eliminate(&adjoined, budget)?;
        let basis: Vec<Poly> = elim
            .basis()
            .iter()
            .map(|g| self.base.ring().embed_by_name(elim.ring(), g))
            .collect::<Result<_>>()?;
        let basis = crate::groebner::reduce_basis(self.base.ring(), basis);
        Ok(InjectivityCertificate { holds: basis == self.base.ideal().basis(), elimination_basis: basis })
    }

    /// Free join of two towers over the same base; the second tower's
    /// variables are renamed apart. Returns the compositum and, for each
    /// input, the map from its variable indices to compositum indices.
    pub fn compositum(&self, other: &RingTower, budget: &Budget) -> Result<(RingTower, Vec<usize>, Vec<usize>)> {
        if self.base != other.base {
            return Err(Error::Precondition("compositum of towers over different bases".into()));
        }
        let nbase = self.nbase();
        let mut names = self.ring.names().to_vec();
        let mut other_map: Vec<usize> = (0..nbase).collect();
        for level in &other.levels {
            let mut name = level.name.clone();
            let mut k = 1;
            while names.contains(&name) {
                name = format!("{}_{k}", level.name);
                k += 1;
            }
            other_map.push(names.len());
            names.push(name);
        }
        let n = names.len();
        let ring = PolyRing::new(self.ring.field(), names, tower_order(nbase, n - nbase))?;
        let self_map: Vec<usize> = (0..self.ring.nvars()).collect();
        let mut seed: Vec<Poly> = self.ideal.basis().iter().map(|g| ring.map_from(&self.ring, g, &self_map)).collect();
        seed.extend(other.ideal.basis().iter().map(|g| ring.map_from(&other.ring, g, &other_map)));
        let ideal = IdealPresentation::new(ring.clone(), seed, budget)?;
        let mut levels: Vec<Level> = self
            .levels
            .iter()
            .map(|l| Level {
                monic: ring.map_from(&self.ring, &l.monic, &self_map),
                extra: l.extra.iter().map(|g| ring.map_from(&self.ring, g, &self_map)).collect(),
                ..l.clone()
            })
            .collect();
        for l in &other.levels {
            let var = other_map[l.var];
            levels.push(Level {
                name: ring.names()[var].clone(),
                var,
                monic: ring.map_from(&other.ring, &l.monic, &other_map),
                degree: l.degree,
                extra: l.extra.iter().map(|g| ring.map_from(&other.ring, g, &other_map)).collect(),
            });
        }
        let mut relations: Vec<Poly> = self.relations.iter().map(|g| ring.map_from(&self.ring, g, &self_map)).collect();
        relations.extend(other.relations.iter().map(|g| ring.map_from(&other.ring, g, &other_map)));
        let tower = RingTower::assemble(self.base.clone(), ring, levels, relations, ideal)?;
        Ok((tower, self_map, other_map))
    }

    /// Monomials in the adjoined variables with exponents below the relation
    /// degrees; they span the tower as a base module.
    pub fn spanning_monomials(&self) -> Vec<Monomial> {
        let n = self.ring.nvars();
        let mut out = vec![Monomial::one(n)];
        for level in &self.levels {
            let mut next = Vec::new();
            for m in &out {
                for e in 0..level.degree {
                    let mut m2 = m.clone();
                    m2.exps_mut()[level.var] = e;
                    next.push(m2);
                }
            }
            out = next;
        }
        out
    }
}
