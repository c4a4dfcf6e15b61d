//! Ideals with their reduced Gröbner basis: membership, normal forms,
//! elimination, intersection, colon and saturation.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groebner::{divide, groebner, normal_form};
use crate::monomial::MonomialOrder;
use crate::poly::{Poly, PolyRing};

/// An ideal of a polynomial ring together with its reduced Gröbner basis
/// under the ring's monomial order.
#[derive(Clone, Debug)]
pub struct IdealPresentation {
    ring: PolyRing,
    generators: Vec<Poly>,
    basis: Vec<Poly>,
}

impl PartialEq for IdealPresentation {
    /// Ideal equality (reduced bases are unique).
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.basis == other.basis
    }
}

impl IdealPresentation {
    pub fn new(ring: PolyRing, generators: Vec<Poly>, budget: &Budget) -> Result<Self> {
        let basis = groebner(&ring, &generators, budget)?;
        Ok(IdealPresentation { ring, generators, basis })
    }

    pub fn zero(ring: PolyRing) -> Self {
        IdealPresentation { ring, generators: Vec::new(), basis: Vec::new() }
    }

    /// Wrap a list already known to be a reduced Gröbner basis.
    pub(crate) fn from_reduced_basis(ring: PolyRing, basis: Vec<Poly>) -> Self {
        IdealPresentation { ring, generators: basis.clone(), basis }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn order(&self) -> &MonomialOrder {
        self.ring.order()
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        normal_form(&self.ring, f, &self.basis)
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn contains_ideal(&self, other: &IdealPresentation) -> bool {
        other.basis.iter().all(|g| self.contains(g))
    }

    /// Quotients of `f` against the reduced basis.
    pub fn division(&self, f: &Poly) -> (Vec<Poly>, Poly) {
        divide(&self.ring, f, &self.basis, true)
    }

    pub fn add_generators(&self, extra: &[Poly], budget: &Budget) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        let mut seed = self.basis.clone();
        seed.extend(extra.iter().cloned());
        let basis = groebner(&self.ring, &seed, budget)?;
        Ok(IdealPresentation { ring: self.ring.clone(), generators: gens, basis })
    }

    /// `self ∩ (polynomials in the kept variables)`, returned in the ring of
    /// kept variables (grevlex-ordered by their original index order unless
    /// `kept_order` is given).
    pub fn eliminate(&self, eliminated: &[usize], budget: &Budget) -> Result<IdealPresentation> {
        let n = self.ring.nvars();
        let kept: Vec<usize> = (0..n).filter(|v| !eliminated.contains(v)).collect();
        let order = MonomialOrder::blocks(vec![eliminated.to_vec(), kept.clone()]);
        let elim_ring = self.ring.with_order(order)?;
        let gens: Vec<Poly> = self.basis.iter().map(|g| elim_ring.from_terms(g.terms().iter().cloned())).collect();
        let basis = groebner(&elim_ring, &gens, budget)?;
        let names: Vec<String> = kept.iter().map(|&v| self.ring.names()[v].clone()).collect();
        let target = PolyRing::new(self.ring.field(), names, MonomialOrder::grevlex(kept.len()))?;
        let map_back = |g: &Poly| {
            let terms = g.terms().iter().map(|(m, c)| {
                (crate::monomial::Monomial::from_exponents(kept.iter().map(|&v| m.exp(v))), *c)
            });
            target.from_terms(terms)
        };
        let restricted: Vec<Poly> = basis
            .iter()
            .filter(|g| g.terms().iter().all(|(m, _)| eliminated.iter().all(|&v| m.exp(v) == 0)))
            .map(map_back)
            .collect();
        IdealPresentation::new(target, restricted, budget)
    }

    /// Ring with one extra variable appended, dominating all others.
    fn extended(&self, name: &str) -> Result<(PolyRing, usize)> {
        let n = self.ring.nvars();
        let mut names = self.ring.names().to_vec();
        let mut fresh = name.to_string();
        while names.contains(&fresh) {
            fresh.push('_');
        }
        names.push(fresh);
        let mut blocks = vec![vec![n]];
        blocks.extend(self.ring.order().block_list().iter().cloned());
        Ok((PolyRing::new(self.ring.field(), names, MonomialOrder::blocks(blocks))?, n))
    }

    fn lift(&self, ext: &PolyRing, f: &Poly) -> Poly {
        let map: Vec<usize> = (0..self.ring.nvars()).collect();
        ext.map_from(&self.ring, f, &map)
    }

    fn drop_last(&self, basis: &[Poly], last: usize) -> Vec<Poly> {
        basis
            .iter()
            .filter(|g| !g.uses_var(last))
            .map(|g| {
                let terms = g.terms().iter().map(|(m, c)| {
                    (crate::monomial::Monomial::from_exponents(m.exps()[..last].iter().copied()), *c)
                });
                self.ring.from_terms(terms)
            })
            .collect()
    }

    /// `(self : f^∞)` via the Rabinowitsch variable.
    pub fn saturate(&self, f: &Poly, budget: &Budget) -> Result<IdealPresentation> {
        if f.is_zero() {
            return Err(Error::Precondition("saturation by the zero polynomial".into()));
        }
        let (ext, u) = self.extended("u_sat")?;
        let mut gens: Vec<Poly> = self.basis.iter().map(|g| self.lift(&ext, g)).collect();
        let uf = ext.mul(&ext.var(u), &self.lift(&ext, f));
        gens.push(ext.sub(&uf, &ext.one()));
        let basis = groebner(&ext, &gens, budget)?;
        let kept = self.drop_last(&basis, u);
        Ok(IdealPresentation::from_reduced_basis(self.ring.clone(), crate::groebner::reduce_basis(&self.ring, kept)))
    }

    /// `self ∩ other` via the tag-variable trick.
    pub fn intersect(&self, other: &IdealPresentation, budget: &Budget) -> Result<IdealPresentation> {
        let (ext, t) = self.extended("t_int")?;
        let tv = ext.var(t);
        let one_minus_t = ext.sub(&ext.one(), &tv);
        let mut gens: Vec<Poly> = self.basis.iter().map(|g| ext.mul(&tv, &self.lift(&ext, g))).collect();
        gens.extend(other.basis.iter().map(|g| ext.mul(&one_minus_t, &self.lift(&ext, g))));
        let basis = groebner(&ext, &gens, budget)?;
        let kept = self.drop_last(&basis, t);
        Ok(IdealPresentation::from_reduced_basis(self.ring.clone(), crate::groebner::reduce_basis(&self.ring, kept)))
    }

    /// `(self : f)`
    pub fn colon(&self, f: &Poly, budget: &Budget) -> Result<IdealPresentation> {
        if f.is_zero() {
            return Ok(IdealPresentation::from_reduced_basis(self.ring.clone(), vec![self.ring.one()]));
        }
        let principal = IdealPresentation::new(self.ring.clone(), vec![f.clone()], budget)?;
        let meet = self.intersect(&principal, budget)?;
        let mut quotients = Vec::new();
        for g in meet.basis() {
            let (q, r) = divide(&self.ring, g, std::slice::from_ref(f), true);
            debug_assert!(r.is_zero());
            quotients.push(q.into_iter().next().unwrap());
        }
        IdealPresentation::new(self.ring.clone(), quotients, budget)
    }

    /// Saturation together with the stabilization check `(J : f) = J`.
    pub fn saturate_certified(&self, f: &Poly, budget: &Budget) -> Result<(IdealPresentation, bool)> {
        let sat = self.saturate(f, budget)?;
        let once_more = sat.colon(f, budget)?;
        let stable = sat.contains_ideal(&once_more) && once_more.contains_ideal(&sat);
        Ok((sat, stable))
    }
}
