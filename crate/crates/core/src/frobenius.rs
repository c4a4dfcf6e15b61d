//! Frobenius action on Čech cochains, Frobenius orbits of cohomology
//! classes, and discovery of monic additive relations
//! `g(T) = T^{p^s} - Σ_{j<s} c_j T^{p^j}` with `g(α) = 0`.

use crate::budget::Budget;
use crate::cech::{CechComplex, Cochain, Fraction};
use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};

/// `g(T) = T^{p^s} - Σ_{j<s} coeffs[j] T^{p^j}`, coefficients in the base ring.
/// `s = 0` is the identity `g(T) = T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusPoly {
    pub s: u32,
    pub coeffs: Vec<Poly>,
}

impl FrobeniusPoly {
    pub fn identity() -> Self {
        FrobeniusPoly { s: 0, coeffs: Vec::new() }
    }

    pub fn pure_power(s: u32) -> Self {
        FrobeniusPoly { s, coeffs: vec![Poly::zero(); s as usize] }
    }

    /// `p^s`
    pub fn degree(&self, p: u32) -> u64 {
        (p as u64).pow(self.s)
    }

    /// Coefficients re-expressed in `ring` (whose first variables are the base's).
    pub fn lifted_coeffs(&self, base: &PolyRing, ring: &PolyRing) -> Vec<Poly> {
        let map: Vec<usize> = (0..base.nvars()).collect();
        self.coeffs.iter().map(|c| ring.map_from(base, c, &map)).collect()
    }

    /// `g(u)` in `ring`, with coefficients already lifted.
    pub fn apply(&self, ring: &PolyRing, lifted: &[Poly], u: &Poly) -> Poly {
        let mut acc = ring.frobenius_iter(u, self.s);
        for (j, c) in lifted.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = ring.mul(c, &ring.frobenius_iter(u, j as u32));
            acc = ring.sub(&acc, &term);
        }
        acc
    }

    /// `x^{e p^s} g(num / x^e)` for the monomial `x^e = denom`:
    /// `num^{p^s} - Σ c_j num^{p^j} x^{e (p^s - p^j)}`.
    pub fn clear_denominator(&self, ring: &PolyRing, lifted: &[Poly], num: &Poly, denom: &crate::Monomial) -> Poly {
        let p = ring.p();
        let top = self.degree(p) as u32;
        let mut acc = ring.frobenius_iter(num, self.s);
        for (j, c) in lifted.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pj = (p as u64).pow(j as u32) as u32;
            let shift = denom.pow(top - pj);
            let term = ring.mul_monomial(&ring.mul(c, &ring.frobenius_iter(num, j as u32)), &shift);
            acc = ring.sub(&acc, &term);
        }
        acc
    }
}

/// A cohomology class given by a representing cocycle of known degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassHandle {
    pub cocycle: Cochain,
    pub degree: i64,
    pub piece: Option<(usize, i64)>,
}

impl ClassHandle {
    pub fn new(cx: &CechComplex, cocycle: Cochain, budget: &Budget) -> Result<Self> {
        if !cx.is_cocycle(&cocycle, budget)? {
            return Err(Error::Precondition("class representative is not a cocycle".into()));
        }
        let degree = cx.degree(&cocycle)?.unwrap_or(0);
        Ok(ClassHandle { cocycle, degree, piece: None })
    }

    pub fn level(&self) -> usize {
        self.cocycle.level
    }
}

/// Componentwise p-th power `r / x^e ↦ r^p / x^{pe}`.
pub fn frob_cochain(cx: &CechComplex, c: &Cochain) -> Cochain {
    let ring = cx.ring();
    let p = ring.p();
    let components = c
        .components
        .iter()
        .map(|(s, f)| {
            let numerator = cx.tower().normal_form(&ring.frobenius(&f.numerator));
            (s.clone(), Fraction { numerator, denom: f.denom.iter().map(|e| e * p).collect() })
        })
        .collect();
    Cochain { level: c.level, components }
}

pub fn frob_iter(cx: &CechComplex, c: &Cochain, times: u32) -> Cochain {
    let mut out = c.clone();
    for _ in 0..times {
        out = frob_cochain(cx, &out);
    }
    out
}

/// `g(c) = F^s(c) - Σ c_j F^j(c)` componentwise.
pub fn apply_to_cochain(cx: &CechComplex, g: &FrobeniusPoly, c: &Cochain) -> Cochain {
    let lifted = g.lifted_coeffs(cx.tower().base().ring(), cx.ring());
    let mut acc = frob_iter(cx, c, g.s);
    let minus_one = cx.ring().constant(cx.ring().p() - 1);
    for (j, coef) in lifted.iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        let term = cx.scale(&frob_iter(cx, c, j as u32), coef);
        acc = cx.combine(&acc, &term, &minus_one);
    }
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitMember {
    pub power: u32,
    pub class: ClassHandle,
    pub is_zero: bool,
}

/// `[α, α^p, α^{p^2}, …]` until a member is a boundary or, in degree 0,
/// until a member falls into the F_p-span of its predecessors.
pub fn frob_orbit(cx: &CechComplex, alpha: &ClassHandle, cap: u32, budget: &Budget) -> Result<Vec<OrbitMember>> {
    let p = cx.ring().p() as i64;
    let mut out: Vec<OrbitMember> = Vec::new();
    let mut current = alpha.cocycle.clone();
    for k in 0..=cap {
        let degree = alpha.degree * p.pow(k);
        let class = ClassHandle { cocycle: current.clone(), degree, piece: alpha.piece.map(|(i, _)| (i, degree)) };
        let is_zero = is_zero_class(cx, &current, budget)?;
        out.push(OrbitMember { power: k, class, is_zero });
        if is_zero {
            return Ok(out);
        }
        if alpha.degree == 0 && k > 0 {
            let prev: Vec<Cochain> = out[..out.len() - 1].iter().map(|m| m.class.cocycle.clone()).collect();
            if cx.solve_combination(&current, &prev, 0, budget)?.is_some() {
                return Ok(out);
            }
        }
        current = frob_cochain(cx, &current);
    }
    Err(Error::Budget(format!("Frobenius orbit not resolved within {cap} powers")))
}

fn is_zero_class(cx: &CechComplex, c: &Cochain, budget: &Budget) -> Result<bool> {
    if c.level == 0 {
        return cx.is_zero(c, budget);
    }
    Ok(cx.boundary_solve(c, budget)?.is_some())
}

/// A relation `g(α) = 0` with its certificate `g(α̃) = d(β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub g: FrobeniusPoly,
    pub beta: Cochain,
    /// Koszul exponent level at which `β` was found.
    pub level: u32,
}

/// Find the relation with the smallest `s`, by one exact linear solve per
/// `s`: `F^s(α) = Σ_j c_j F^j(α) + d(β)` with `c_j` ranging over the graded
/// piece of degree `(p^s - p^j) deg α`. In positive degree this searches
/// module relations (and nilpotence once the ambient pieces vanish); in
/// degree 0 the `c_j` are scalars; in negative degree only `g = T^{p^s}`
/// is possible.
pub fn find_relation(cx: &CechComplex, alpha: &ClassHandle, budget: &Budget) -> Result<Relation> {
    let level = alpha.level();
    let empty_beta = || {
        if level == 0 {
            Cochain { level: 0, components: Default::default() }
        } else {
            cx.zero_cochain(level - 1)
        }
    };
    if alpha.cocycle.is_literally_zero() {
        return Ok(Relation { g: FrobeniusPoly::identity(), beta: empty_beta(), level: 0 });
    }
    if level > 0 {
        if let Some((beta, e)) = cx.boundary_solve(&alpha.cocycle, budget)? {
            return Ok(Relation { g: FrobeniusPoly::identity(), beta, level: e });
        }
    } else if cx.is_zero(&alpha.cocycle, budget)? {
        return Ok(Relation { g: FrobeniusPoly::identity(), beta: empty_beta(), level: 0 });
    }
    let base = cx.tower().base();
    let p = cx.ring().p() as i64;
    let orbit: Vec<Cochain> = {
        let mut v = vec![alpha.cocycle.clone()];
        for _ in 0..budget.orbit_cap {
            let next = frob_cochain(cx, v.last().unwrap());
            v.push(next);
        }
        v
    };
    for s in 1..=budget.orbit_cap {
        budget.check_time("Frobenius relation search")?;
        let target_degree = alpha.degree * p.pow(s);
        if let Some((beta, e)) = cx.boundary_solve(&orbit[s as usize], budget)? {
            return Ok(Relation { g: FrobeniusPoly::pure_power(s), beta, level: e });
        }
        let mut gens = Vec::new();
        let mut labels: Vec<(usize, crate::Monomial)> = Vec::new();
        for (j, member) in orbit.iter().enumerate().take(s as usize) {
            let coef_degree = (p.pow(s) - p.pow(j as u32)) * alpha.degree;
            for m in base.graded_basis(coef_degree) {
                let mono = cx.tower().lift(&base.ring().term(m.clone(), 1));
                let gen = cx.scale(member, &mono);
                // multiples that are already boundaries only add noise to g
                if level > 0 && cx.boundary_solve(&gen, budget)?.is_some() {
                    continue;
                }
                gens.push(gen);
                labels.push((j, m));
            }
        }
        if let Some((a, beta, e)) = cx.solve_combination(&orbit[s as usize], &gens, target_degree, budget)? {
            let mut coeffs = vec![Poly::zero(); s as usize];
            for ((j, m), &x) in labels.iter().zip(&a) {
                if x != 0 {
                    coeffs[*j] = base.ring().add(&coeffs[*j], &base.ring().term(m.clone(), x));
                }
            }
            return Ok(Relation { g: FrobeniusPoly { s, coeffs }, beta, level: e });
        }
    }
    Err(Error::Budget(format!("no Frobenius relation with s <= {}", budget.orbit_cap)))
}
