//! Standard graded quotient rings `F_p[x_0..x_n]/P`: graded pieces, Hilbert
//! function and Krull dimension.

use std::collections::HashMap;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ideal::IdealPresentation;
use crate::linalg::Matrix;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poly::{Poly, PolyRing};

/// A standard graded presentation: every variable has degree 1 and every
/// generator of `P` is homogeneous.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    ideal: IdealPresentation,
}

impl Presentation {
    pub fn new(ring: PolyRing, generators: Vec<Poly>, budget: &Budget) -> Result<Self> {
        if !ring.order().is_grevlex() {
            return Err(Error::Precondition("base presentations use grevlex".into()));
        }
        let weights = vec![1; ring.nvars()];
        for g in &generators {
            if !g.is_homogeneous(&weights) {
                return Err(Error::Precondition(format!(
                    "inhomogeneous generator {} (term degrees {:?})",
                    ring.format(g),
                    g.term_degrees(&weights)
                )));
            }
        }
        Ok(Presentation { ideal: IdealPresentation::new(ring, generators, budget)? })
    }

    pub fn ring(&self) -> &PolyRing {
        self.ideal.ring()
    }

    pub fn ideal(&self) -> &IdealPresentation {
        &self.ideal
    }

    pub fn nvars(&self) -> usize {
        self.ring().nvars()
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        self.ideal.normal_form(f)
    }

    pub fn is_zero(&self, f: &Poly) -> bool {
        self.ideal.contains(f)
    }

    fn leads(&self) -> Vec<&Monomial> {
        self.ideal.basis().iter().filter_map(|g| g.lead_monomial()).collect()
    }

    /// Standard monomials of degree `t`: a basis of `R_t`.
    pub fn graded_basis(&self, t: i64) -> Vec<Monomial> {
        if t < 0 {
            return Vec::new();
        }
        let leads = self.leads();
        let mut out: Vec<Monomial> = monomials_of_degree(self.nvars(), t as u32)
            .into_iter()
            .filter(|m| !leads.iter().any(|l| l.divides(m)))
            .collect();
        out.sort_by(|a, b| self.ring().cmp(b, a));
        out
    }

    pub fn piece(&self, t: i64) -> GradedPiece {
        GradedPiece::new(t, self.graded_basis(t))
    }

    pub fn hilbert_function(&self, t: i64) -> usize {
        self.graded_basis(t).len()
    }

    /// Hilbert function by the rank of the normal forms of all degree-`t`
    /// monomials; independent of the standard-monomial count.
    pub fn hilbert_by_rank(&self, t: i64) -> usize {
        if t < 0 {
            return 0;
        }
        let ring = self.ring();
        let all = monomials_of_degree(self.nvars(), t as u32);
        let nfs: Vec<Poly> = all.iter().map(|m| self.normal_form(&ring.term(m.clone(), 1))).collect();
        let mut cols: HashMap<Monomial, usize> = HashMap::new();
        for f in &nfs {
            for (m, _) in f.terms() {
                let k = cols.len();
                cols.entry(m.clone()).or_insert(k);
            }
        }
        let mut mat = Matrix::zeros(nfs.len(), cols.len());
        for (i, f) in nfs.iter().enumerate() {
            for (m, c) in f.terms() {
                mat.set(i, cols[m], *c);
            }
        }
        mat.rank(ring.field())
    }

    /// Krull dimension: the largest set of variables supporting no leading
    /// monomial of the Gröbner basis.
    pub fn krull_dimension(&self) -> usize {
        let n = self.nvars();
        assert!(n < 24, "too many variables for subset enumeration");
        let leads: Vec<u64> = self
            .leads()
            .iter()
            .map(|m| m.support().fold(0u64, |acc, v| acc | (1 << v)))
            .collect();
        if leads.contains(&0) {
            return 0; // unit ideal; conventionally report 0
        }
        let mut best = 0;
        for set in 0u64..(1 << n) {
            let size = set.count_ones() as usize;
            if size > best && leads.iter().all(|&s| s & !set != 0) {
                best = size;
            }
        }
        best
    }

    /// Whether `R/(elems)` is finite dimensional, i.e. `(elems)` is primary to
    /// the irrelevant ideal.
    pub fn is_primary_to_maximal(&self, elems: &[Poly], budget: &Budget) -> Result<bool> {
        let j = self.ideal.add_generators(elems, budget)?;
        let leads: Vec<&Monomial> = j.basis().iter().filter_map(|g| g.lead_monomial()).collect();
        Ok((0..self.nvars()).all(|v| leads.iter().any(|l| l.support().all(|w| w == v))))
    }
}

/// Coordinates for one graded piece `R_t` in its standard-monomial basis.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub degree: i64,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl GradedPiece {
    pub fn new(degree: i64, monomials: Vec<Monomial>) -> Self {
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        GradedPiece { degree, monomials, index }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    /// Coordinates of a polynomial already in normal form. Panics if a term
    /// lies outside this piece.
    pub fn coords(&self, nf: &Poly) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        for (m, c) in nf.terms() {
            let k = *self.index.get(m).expect("term outside graded piece");
            v[k] = *c;
        }
        v
    }

    pub fn poly(&self, ring: &PolyRing, coords: &[u32]) -> Poly {
        ring.from_terms(self.monomials.iter().cloned().zip(coords.iter().copied()))
    }
}
