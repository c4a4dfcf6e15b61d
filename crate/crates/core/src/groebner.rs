//! Buchberger's algorithm with sugar pair selection and the Gebauer–Möller
//! pair criteria (which include the coprime-leading-monomial criterion).

use std::collections::HashSet;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{Poly, PolyRing};

/// S-polynomial of two nonzero polynomials.
pub fn s_polynomial(ring: &PolyRing, f: &Poly, g: &Poly) -> Poly {
    let (mf, cf) = f.lead().expect("nonzero");
    let (mg, cg) = g.lead().expect("nonzero");
    let l = mf.lcm(mg);
    let fld = ring.field();
    let a = ring.mul_monomial(&ring.scale(f, fld.inv(*cf)), &mf.quotient_of(&l));
    let b = ring.mul_monomial(&ring.scale(g, fld.inv(*cg)), &mg.quotient_of(&l));
    ring.sub(&a, &b)
}

fn find_divisor<'a>(basis: &'a [Poly], m: &Monomial) -> Option<&'a Poly> {
    basis.iter().find(|g| g.lead_monomial().map(|lm| lm.divides(m)).unwrap_or(false))
}

/// Full reduction of `f` by `basis` (any list of nonzero polynomials).
/// When `basis` is a Gröbner basis the result is the unique normal form.
pub fn normal_form(ring: &PolyRing, f: &Poly, basis: &[Poly]) -> Poly {
    divide(ring, f, basis, false).1
}

/// Division with remainder. Returns `(quotients, remainder)` with
/// `f = Σ q_k basis_k + remainder`; quotients are only tracked when asked.
pub fn divide(ring: &PolyRing, f: &Poly, basis: &[Poly], track: bool) -> (Vec<Poly>, Poly) {
    let fld = ring.field();
    let mut quotients = if track { vec![Poly::zero(); basis.len()] } else { Vec::new() };
    let mut rem: Vec<(Monomial, u32)> = Vec::new();
    let mut p = f.clone();
    while let Some((m, c)) = p.lead().cloned() {
        let mut hit = None;
        for (k, g) in basis.iter().enumerate() {
            if let Some(lm) = g.lead_monomial() {
                if lm.divides(&m) {
                    hit = Some(k);
                    break;
                }
            }
        }
        match hit {
            Some(k) => {
                let g = &basis[k];
                let shift = g.lead_monomial().unwrap().quotient_of(&m);
                let coef = fld.div(c, g.lead_coeff());
                p = ring.add_scaled_shifted(&p, g, fld.neg(coef), Some(&shift));
                if track {
                    quotients[k] = ring.add(&quotients[k], &ring.term(shift, coef));
                }
            }
            None => {
                let mut terms = p.into_terms();
                let lead = terms.remove(0);
                rem.push(lead);
                p = Poly::from_sorted_unchecked(terms);
            }
        }
    }
    (quotients, Poly::from_sorted_unchecked(rem))
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u64,
}

struct Engine<'a> {
    ring: &'a PolyRing,
    budget: &'a Budget,
    basis: Vec<Poly>,
    sugar: Vec<u64>,
    pairs: Vec<Pair>,
    processed: usize,
}

impl<'a> Engine<'a> {
    fn lm(&self, k: usize) -> &Monomial {
        self.basis[k].lead_monomial().unwrap()
    }

    fn make_pair(&self, i: usize, j: usize) -> Pair {
        let (a, b) = (self.lm(i), self.lm(j));
        let lcm = a.lcm(b);
        let d = lcm.degree();
        let sugar = (self.sugar[i] + d - a.degree()).max(self.sugar[j] + d - b.degree());
        Pair { i: i.min(j), j: i.max(j), lcm, sugar }
    }

    /// Gebauer–Möller update after appending basis element `h`.
    fn update(&mut self, h: usize) {
        let lm_h = self.lm(h).clone();
        let mut candidates: Vec<Pair> = (0..h).map(|g| self.make_pair(g, h)).collect();
        let mut kept: Vec<Pair> = Vec::new();
        while let Some(pair) = candidates.pop() {
            let other = if pair.i == h { pair.j } else { pair.i };
            let coprime = lm_h.is_coprime(self.lm(other));
            let dominated = candidates.iter().chain(kept.iter()).any(|q| q.lcm.divides(&pair.lcm));
            if coprime || !dominated {
                kept.push(pair);
            }
        }
        let fresh: Vec<Pair> = kept
            .into_iter()
            .filter(|q| {
                let other = if q.i == h { q.j } else { q.i };
                !lm_h.is_coprime(self.lm(other))
            })
            .collect();
        let old = std::mem::take(&mut self.pairs);
        self.pairs = old
            .into_iter()
            .filter(|q| {
                if !lm_h.divides(&q.lcm) {
                    return true;
                }
                let l1 = self.lm(q.i).lcm(&lm_h);
                let l2 = self.lm(q.j).lcm(&lm_h);
                l1 == q.lcm || l2 == q.lcm
            })
            .collect();
        self.pairs.extend(fresh);
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let ring = self.ring;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let better = match a.sugar.cmp(&b.sugar) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => match ring.cmp(&a.lcm, &b.lcm) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Greater => false,
                    std::cmp::Ordering::Equal => (a.i, a.j) < (b.i, b.j),
                },
            };
            if better {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn add(&mut self, f: Poly, sugar: u64) -> Result<()> {
        if f.len() > self.budget.support_cap {
            return Err(Error::Budget(format!(
                "polynomial support {} exceeds cap {}",
                f.len(),
                self.budget.support_cap
            )));
        }
        let f = self.ring.monic(&f);
        self.basis.push(f);
        self.sugar.push(sugar);
        let h = self.basis.len() - 1;
        self.update(h);
        Ok(())
    }

    fn run(&mut self) -> Result<()> {
        while let Some(pair) = self.select() {
            self.processed += 1;
            if self.processed > self.budget.pair_cap {
                return Err(Error::Budget(format!("Gröbner pair cap {} reached", self.budget.pair_cap)));
            }
            self.budget.check_time("Gröbner basis computation")?;
            let s = s_polynomial(self.ring, &self.basis[pair.i], &self.basis[pair.j]);
            let r = normal_form(self.ring, &s, &self.basis);
            if !r.is_zero() {
                self.add(r, pair.sugar)?;
            }
        }
        Ok(())
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted by
/// ascending leading monomial. The zero ideal yields an empty list.
pub fn groebner(ring: &PolyRing, gens: &[Poly], budget: &Budget) -> Result<Vec<Poly>> {
    let mut inputs: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    inputs.sort_by(|a, b| ring.cmp(a.lead_monomial().unwrap(), b.lead_monomial().unwrap()));
    let mut engine = Engine { ring, budget, basis: Vec::new(), sugar: Vec::new(), pairs: Vec::new(), processed: 0 };
    for g in inputs {
        let r = normal_form(ring, &g, &engine.basis);
        if !r.is_zero() {
            let sugar = g.total_degree().unwrap_or(0);
            engine.add(r, sugar)?;
        }
    }
    engine.run()?;
    Ok(reduce_basis(ring, engine.basis))
}

/// Minimalize and interreduce a Gröbner basis.
pub fn reduce_basis(ring: &PolyRing, basis: Vec<Poly>) -> Vec<Poly> {
    let mut basis: Vec<Poly> = basis.into_iter().filter(|g| !g.is_zero()).map(|g| ring.monic(&g)).collect();
    basis.sort_by(|a, b| ring.cmp(a.lead_monomial().unwrap(), b.lead_monomial().unwrap()));
    let mut minimal: Vec<Poly> = Vec::new();
    let mut seen: HashSet<Monomial> = HashSet::new();
    for g in &basis {
        let lm = g.lead_monomial().unwrap();
        if seen.contains(lm) {
            continue;
        }
        if find_divisor(&minimal, lm).is_none() {
            seen.insert(lm.clone());
            minimal.push(g.clone());
        }
    }
    // Elements with smaller leads were inserted first, so no later lead divides an earlier one.
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let g = &minimal[k];
        let (lead_m, _) = g.lead().unwrap().clone();
        let tail = Poly::from_sorted_unchecked(g.terms()[1..].to_vec());
        let others: Vec<Poly> = minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| p.clone()).collect();
        let tail_nf = normal_form(ring, &tail, &others);
        reduced.push(ring.add(&ring.term(lead_m, 1), &tail_nf));
    }
    reduced
}

/// Buchberger's criterion checked over every pair.
pub fn is_groebner(ring: &PolyRing, basis: &[Poly]) -> bool {
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let s = s_polynomial(ring, &basis[i], &basis[j]);
            if !normal_form(ring, &s, basis).is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    fn ring(p: u64, names: &[&str]) -> PolyRing {
        PolyRing::grevlex(Fp::new(p).unwrap(), names).unwrap()
    }

    fn polys(r: &PolyRing, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|x| r.parse(x).unwrap()).collect()
    }

    #[test]
    fn single_generator_is_its_own_basis() {
        let r = ring(3, &["x", "y"]);
        let gb = groebner(&r, &polys(&r, &["y^2 - x"]), &Budget::default()).unwrap();
        assert_eq!(gb, polys(&r, &["y^2 - x"]));
    }

    #[test]
    fn monomial_ideal() {
        let r = ring(3, &["x", "y"]);
        let gb = groebner(&r, &polys(&r, &["x^2", "x*y"]), &Budget::default()).unwrap();
        let mut got: Vec<String> = gb.iter().map(|g| r.format(g)).collect();
        got.sort();
        assert_eq!(got, vec!["x*y", "x^2"]);
    }

    #[test]
    fn sg4_basis_passes_buchberger_criterion() {
        for p in [2, 3, 5, 7] {
            let r = ring(p, &["a", "b", "c", "d"]);
            let gens = polys(&r, &["a*d-b*c", "b^3-a^2*c", "c^3-b*d^2", "b^2*d-a*c^2"]);
            let gb = groebner(&r, &gens, &Budget::default()).unwrap();
            assert!(is_groebner(&r, &gb));
            for g in &gens {
                assert!(normal_form(&r, g, &gb).is_zero());
            }
        }
    }

    #[test]
    fn single_reduction_step() {
        let r = ring(5, &["x", "y"]);
        let gb = groebner(&r, &polys(&r, &["x^2 - y"]), &Budget::default()).unwrap();
        assert_eq!(r.format(&normal_form(&r, &r.parse("x^2").unwrap(), &gb)), "y");
        let gb = groebner(&r, &polys(&r, &["x"]), &Budget::default()).unwrap();
        assert_eq!(r.format(&normal_form(&r, &r.parse("x*y + y").unwrap(), &gb)), "y");
    }

    #[test]
    fn division_transcript_reconstructs_input() {
        let r = ring(7, &["x", "y", "z"]);
        let gb = groebner(&r, &polys(&r, &["x^2 - y*z", "y^3 - x*z^2"]), &Budget::default()).unwrap();
        let f = r.parse("x^4*y + 3*x*y^3*z + z^5 - 2").unwrap();
        let (q, rem) = divide(&r, &f, &gb, true);
        let mut acc = rem.clone();
        for (qk, gk) in q.iter().zip(&gb) {
            acc = r.add(&acc, &r.mul(qk, gk));
        }
        assert_eq!(acc, f);
        assert_eq!(rem, normal_form(&r, &f, &gb));
    }

    #[test]
    fn pair_cap_is_reported() {
        let r = ring(7, &["x", "y", "z"]);
        let budget = Budget { pair_cap: 1, ..Budget::default() };
        let gens = polys(&r, &["x^2 - y*z", "y^3 - x*z^2", "z^4 - x*y^2*z"]);
        assert!(matches!(groebner(&r, &gens, &budget), Err(Error::Budget(_))));
    }

    #[test]
    fn unit_ideal_collapses() {
        let r = ring(2, &["x", "z"]);
        let gb = groebner(&r, &polys(&r, &["z - 1", "z"]), &Budget::default()).unwrap();
        assert_eq!(gb, vec![r.one()]);
    }
}
