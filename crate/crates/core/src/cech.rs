//! Čech cochains over a ring tower, the Čech differential, graded local
//! cohomology pieces via Koszul colimits, boundary solving and the
//! contracting homotopy of the constant subcomplex.
//!
//! Sign convention ([`SIGN_CONVENTION`]): for `J = {j_0 < … < j_i}`,
//! `d(c)_J = Σ_k (-1)^k c_{J \ j_k}` restricted to the localization at `x_J`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graded::GradedPiece;
use crate::linalg::{Echelon, Matrix};
use crate::monomial::Monomial;
use crate::poly::{Poly, PolyRing};
use crate::tower::RingTower;

pub const SIGN_CONVENTION: &str = "alternating-sum-by-position";

/// `numerator / ∏ x_j^{denom[j]}`, indexed by positions in the Čech sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub numerator: Poly,
    pub denom: Vec<u32>,
}

impl Fraction {
    pub fn zero(d: usize) -> Self {
        Fraction { numerator: Poly::zero(), denom: vec![0; d] }
    }

    pub fn constant(numerator: Poly, d: usize) -> Self {
        Fraction { numerator, denom: vec![0; d] }
    }

    pub fn is_constant(&self) -> bool {
        self.denom.iter().all(|&e| e == 0)
    }

    pub fn max_exponent(&self) -> u32 {
        self.denom.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub level: usize,
    pub components: BTreeMap<Vec<usize>, Fraction>,
}

impl Cochain {
    pub fn max_exponent(&self) -> u32 {
        self.components.values().map(|f| f.max_exponent()).max().unwrap_or(0)
    }

    pub fn is_literally_zero(&self) -> bool {
        self.components.values().all(|f| f.numerator.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.components.values().all(|f| f.is_constant())
    }
}

/// All `k`-element subsets of `0..d` in lexicographic order.
pub fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..d {
            cur.push(j);
            rec(j + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= d {
        rec(0, d, k, &mut Vec::new(), &mut out);
    }
    out
}

/// A graded local cohomology piece `H^i_I(R)_t`.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyPiece {
    pub i: usize,
    pub t: i64,
    pub dimension: usize,
    pub basis: Vec<Cochain>,
    pub koszul_level: u32,
}

/// Coordinates of `⊕_{|J|=k} R_{t + e|J|}`.
#[derive(Debug)]
struct Space {
    subsets: Vec<Vec<usize>>,
    pieces: Vec<GradedPiece>,
    offsets: Vec<usize>,
    dim: usize,
}

#[derive(Debug)]
struct LevelHomology {
    boundaries: Echelon,
    reps: Vec<Vec<u32>>,
}

type SpaceKey = (usize, i64, u32);

/// Čech complex of a tower with respect to a sequence of base variables.
#[derive(Debug)]
pub struct CechComplex {
    tower: RingTower,
    seq: Vec<usize>,
    spaces: Mutex<HashMap<SpaceKey, Arc<Space>>>,
    matrices: Mutex<HashMap<SpaceKey, Arc<Matrix>>>,
    homology: Mutex<HashMap<SpaceKey, Arc<LevelHomology>>>,
    nf_cache: Mutex<HashMap<Monomial, Poly>>,
}

impl Clone for CechComplex {
    fn clone(&self) -> Self {
        CechComplex::unchecked(self.tower.clone(), self.seq.clone())
    }
}

impl CechComplex {
    /// Build the complex; the sequence must consist of base variables
    /// generating an ideal primary to the irrelevant ideal.
    pub fn new(tower: RingTower, seq: Vec<usize>, budget: &Budget) -> Result<Self> {
        if seq.is_empty() {
            return Err(Error::Precondition("empty Čech sequence".into()));
        }
        let nbase = tower.nbase();
        let mut seen = seq.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != seq.len() || seq.iter().any(|&v| v >= nbase) {
            return Err(Error::Precondition("Čech sequence must list distinct base variables".into()));
        }
        let base = tower.base();
        let elems: Vec<Poly> = seq.iter().map(|&v| base.ring().var(v)).collect();
        if !base.is_primary_to_maximal(&elems, budget)? {
            return Err(Error::Precondition("Čech sequence does not generate an m-primary ideal".into()));
        }
        Ok(CechComplex::unchecked(tower, seq))
    }

    pub(crate) fn unchecked(tower: RingTower, seq: Vec<usize>) -> Self {
        CechComplex {
            tower,
            seq,
            spaces: Mutex::default(),
            matrices: Mutex::default(),
            homology: Mutex::default(),
            nf_cache: Mutex::default(),
        }
    }

    /// Same sequence over another tower with the same base.
    pub fn over(&self, tower: RingTower) -> CechComplex {
        CechComplex::unchecked(tower, self.seq.clone())
    }

    pub fn tower(&self) -> &RingTower {
        &self.tower
    }

    pub fn ring(&self) -> &PolyRing {
        self.tower.ring()
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// Variable indices of the sequence elements in `subset`.
    pub fn vars_of(&self, subset: &[usize]) -> Vec<usize> {
        subset.iter().map(|&j| self.seq[j]).collect()
    }

    /// `∏ x_j^{exps[j]}` over the sequence.
    pub fn seq_monomial(&self, exps: &[u32]) -> Monomial {
        let mut m = Monomial::one(self.ring().nvars());
        for (j, &e) in exps.iter().enumerate() {
            m.exps_mut()[self.seq[j]] += e;
        }
        m
    }

    pub fn zero_cochain(&self, level: usize) -> Cochain {
        let d = self.len();
        Cochain { level, components: subsets(d, level).into_iter().map(|s| (s, Fraction::zero(d))).collect() }
    }

    pub fn cochain(&self, level: usize, comps: Vec<(Vec<usize>, Fraction)>) -> Result<Cochain> {
        let mut c = self.zero_cochain(level);
        for (s, f) in comps {
            if f.denom.len() != self.len() {
                return Err(Error::Precondition("denominator vector length mismatch".into()));
            }
            if f.denom.iter().enumerate().any(|(j, &e)| e > 0 && !s.contains(&j)) {
                return Err(Error::Precondition(format!("denominator outside component {s:?}")));
            }
            match c.components.get_mut(&s) {
                Some(slot) => *slot = f,
                None => return Err(Error::Precondition(format!("subset {s:?} is not a level-{level} index"))),
            }
        }
        Ok(c)
    }

    /// `a + coef * b` with a common denominator.
    pub fn frac_combine(&self, a: &Fraction, b: &Fraction, coef: &Poly) -> Fraction {
        let ring = self.ring();
        let denom: Vec<u32> = a.denom.iter().zip(&b.denom).map(|(x, y)| *x.max(y)).collect();
        let lift = |f: &Fraction| {
            let shift: Vec<u32> = denom.iter().zip(&f.denom).map(|(d, e)| d - e).collect();
            ring.mul_monomial(&f.numerator, &self.seq_monomial(&shift))
        };
        let numerator = ring.add(&lift(a), &ring.mul(coef, &lift(b)));
        Fraction { numerator: self.tower.normal_form(&numerator), denom }
    }

    /// `a + coef * b` componentwise.
    pub fn combine(&self, a: &Cochain, b: &Cochain, coef: &Poly) -> Cochain {
        assert_eq!(a.level, b.level);
        let components = a
            .components
            .iter()
            .map(|(s, f)| (s.clone(), self.frac_combine(f, &b.components[s], coef)))
            .collect();
        Cochain { level: a.level, components }
    }

    pub fn sub(&self, a: &Cochain, b: &Cochain) -> Cochain {
        self.combine(a, b, &self.ring().constant(self.ring().p() - 1))
    }

    pub fn add(&self, a: &Cochain, b: &Cochain) -> Cochain {
        self.combine(a, b, &self.ring().one())
    }

    pub fn scale(&self, c: &Cochain, r: &Poly) -> Cochain {
        self.combine(&self.zero_cochain(c.level), c, r)
    }

    pub fn differential(&self, c: &Cochain) -> Result<Cochain> {
        let d = self.len();
        if c.level >= d {
            return Err(Error::Precondition(format!("differential out of level {} of a length-{d} complex", c.level)));
        }
        let ring = self.ring();
        let minus_one = ring.constant(ring.p() - 1);
        let one = ring.one();
        let mut out = self.zero_cochain(c.level + 1);
        for (target, slot) in out.components.iter_mut() {
            let mut acc = Fraction::zero(d);
            for k in 0..target.len() {
                let mut face = target.clone();
                face.remove(k);
                let sign = if k % 2 == 0 { &one } else { &minus_one };
                acc = self.frac_combine(&acc, &c.components[&face], sign);
            }
            *slot = acc;
        }
        Ok(out)
    }

    pub fn fraction_is_zero(&self, f: &Fraction, subset: &[usize], budget: &Budget) -> Result<bool> {
        self.tower.loc_zero_test(&f.numerator, &self.vars_of(subset), budget)
    }

    /// Every component vanishes in its localization.
    pub fn is_zero(&self, c: &Cochain, budget: &Budget) -> Result<bool> {
        for (s, f) in &c.components {
            if !self.fraction_is_zero(f, s, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First component (if any) that does not vanish in its localization.
    pub fn first_nonzero(&self, c: &Cochain, budget: &Budget) -> Result<Option<Vec<usize>>> {
        for (s, f) in &c.components {
            if !self.fraction_is_zero(f, s, budget)? {
                return Ok(Some(s.clone()));
            }
        }
        Ok(None)
    }

    pub fn is_cocycle(&self, c: &Cochain, budget: &Budget) -> Result<bool> {
        if c.level >= self.len() {
            return Ok(true);
        }
        self.is_zero(&self.differential(c)?, budget)
    }

    /// Internal degree of a cochain over the base (all variables of degree 1).
    pub fn degree(&self, c: &Cochain) -> Result<Option<i64>> {
        let weights = vec![1i64; self.ring().nvars()];
        let mut deg = None;
        for f in c.components.values() {
            if f.numerator.is_zero() {
                continue;
            }
            if !f.numerator.is_homogeneous(&weights) {
                return Err(Error::Precondition("inhomogeneous cochain component".into()));
            }
            let d = f.numerator.weighted_degree(&weights).unwrap() - f.denom.iter().map(|&e| e as i64).sum::<i64>();
            match deg {
                None => deg = Some(d),
                Some(x) if x != d => return Err(Error::Precondition("cochain components of mixed degree".into())),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Transport a cochain along a variable map into `target`'s ring.
    pub fn map_cochain(&self, c: &Cochain, target: &CechComplex, var_map: &[usize]) -> Cochain {
        let components = c
            .components
            .iter()
            .map(|(s, f)| {
                let num = target.ring().map_from(self.ring(), &f.numerator, var_map);
                (s.clone(), Fraction { numerator: target.tower.normal_form(&num), denom: f.denom.clone() })
            })
            .collect();
        Cochain { level: c.level, components }
    }

    /// Contracting homotopy of the constant subcomplex off sequence index 0:
    /// `η_K = c_{{0} ∪ K}` for `0 ∉ K`, and `η_K = 0` otherwise.
    pub fn unit_homotopy(&self, c: &Cochain) -> Result<Cochain> {
        if c.level == 0 || c.level > self.len() {
            return Err(Error::Precondition(format!("unit homotopy needs 1 <= level <= {}", self.len())));
        }
        if !c.is_constant() {
            return Err(Error::Precondition("unit homotopy needs denominator-free components".into()));
        }
        if c.level < self.len() {
            let dc = self.differential(c)?;
            if let Some((s, _)) = dc.components.iter().find(|(_, f)| !self.tower.zero_test(&f.numerator)) {
                return Err(Error::Precondition(format!(
                    "constant cochain is not a cocycle of the constant subcomplex (component {s:?})"
                )));
            }
        }
        let d = self.len();
        let mut eta = self.zero_cochain(c.level - 1);
        for (k, slot) in eta.components.iter_mut() {
            if k.first() == Some(&0) {
                continue;
            }
            let mut cone = vec![0];
            cone.extend(k.iter().copied());
            *slot = Fraction::constant(c.components[&cone].numerator.clone(), d);
        }
        Ok(eta)
    }

    // ---- graded Koszul machinery (base ring only) ----

    fn require_base(&self) -> Result<()> {
        if !self.tower.is_trivial() {
            return Err(Error::Precondition("graded cohomology is computed over the base ring only".into()));
        }
        Ok(())
    }

    fn nf_monomial(&self, m: &Monomial) -> Poly {
        if let Some(hit) = self.nf_cache.lock().unwrap().get(m) {
            return hit.clone();
        }
        let nf = self.tower.normal_form(&self.ring().term(m.clone(), 1));
        self.nf_cache.lock().unwrap().insert(m.clone(), nf.clone());
        nf
    }

    fn nf(&self, f: &Poly) -> Poly {
        let ring = self.ring();
        let mut acc = Poly::zero();
        for (m, c) in f.terms() {
            acc = ring.combine(&acc, &self.nf_monomial(m), *c);
        }
        acc
    }

    fn space(&self, k: usize, t: i64, e: u32) -> Arc<Space> {
        if let Some(s) = self.spaces.lock().unwrap().get(&(k, t, e)) {
            return s.clone();
        }
        let base = self.tower.base();
        let subs = subsets(self.len(), k);
        let mut pieces = Vec::new();
        let mut offsets = Vec::new();
        let mut dim = 0;
        for s in &subs {
            let piece = base.piece(t + e as i64 * s.len() as i64);
            offsets.push(dim);
            dim += piece.dim();
            pieces.push(piece);
        }
        let space = Arc::new(Space { subsets: subs, pieces, offsets, dim });
        self.spaces.lock().unwrap().insert((k, t, e), space.clone());
        space
    }

    /// Koszul differential `space(k) -> space(k+1)` at exponent `e`.
    fn koszul_matrix(&self, k: usize, t: i64, e: u32) -> Arc<Matrix> {
        if let Some(m) = self.matrices.lock().unwrap().get(&(k, t, e)) {
            return m.clone();
        }
        let src = self.space(k, t, e);
        let dst = self.space(k + 1, t, e);
        let fld = self.ring().field();
        let mut mat = Matrix::zeros(dst.dim, src.dim);
        let dst_index: HashMap<&Vec<usize>, usize> = dst.subsets.iter().enumerate().map(|(i, s)| (s, i)).collect();
        for (si, s) in src.subsets.iter().enumerate() {
            for (mi, m) in src.pieces[si].monomials.iter().enumerate() {
                let col = src.offsets[si] + mi;
                for j in (0..self.len()).filter(|j| !s.contains(j)) {
                    let mut target = s.clone();
                    let pos = target.partition_point(|&x| x < j);
                    target.insert(pos, j);
                    let ti = dst_index[&target];
                    let mut exps = vec![0u32; self.len()];
                    exps[j] = e;
                    let image = self.nf_monomial(&m.mul(&self.seq_monomial(&exps)));
                    let coords = dst.pieces[ti].coords(&image);
                    for (r, &v) in coords.iter().enumerate() {
                        if v != 0 {
                            let v = if pos % 2 == 0 { v } else { fld.neg(v) };
                            let row = dst.offsets[ti] + r;
                            mat.set(row, col, fld.add(mat.get(row, col), v));
                        }
                    }
                }
            }
        }
        let mat = Arc::new(mat);
        self.matrices.lock().unwrap().insert((k, t, e), mat.clone());
        mat
    }

    /// Koszul coordinates of a degree-`t` cochain at exponent level `e`, or
    /// `None` when some denominator exceeds `e`.
    fn koszul_vector(&self, c: &Cochain, t: i64, e: u32) -> Result<Option<Vec<u32>>> {
        let space = self.space(c.level, t, e);
        let ring = self.ring();
        let weights = vec![1i64; ring.nvars()];
        let mut v = vec![0u32; space.dim];
        for (si, s) in space.subsets.iter().enumerate() {
            let f = &c.components[s];
            if f.max_exponent() > e {
                return Ok(None);
            }
            let shift: Vec<u32> =
                (0..self.len()).map(|j| if s.contains(&j) { e - f.denom[j] } else { 0 }).collect();
            let num = self.nf(&ring.mul_monomial(&f.numerator, &self.seq_monomial(&shift)));
            if num.is_zero() {
                continue;
            }
            let expected = space.pieces[si].degree;
            if num.term_degrees(&weights) != [expected] {
                return Err(Error::Precondition(format!("cochain is not homogeneous of degree {t}")));
            }
            let coords = space.pieces[si].coords(&num);
            v[space.offsets[si]..space.offsets[si] + coords.len()].copy_from_slice(&coords);
        }
        Ok(Some(v))
    }

    fn cochain_from_vector(&self, k: usize, t: i64, e: u32, v: &[u32]) -> Cochain {
        let space = self.space(k, t, e);
        let d = self.len();
        let mut c = self.zero_cochain(k);
        for (si, s) in space.subsets.iter().enumerate() {
            let coords = &v[space.offsets[si]..space.offsets[si] + space.pieces[si].dim()];
            let numerator = space.pieces[si].poly(self.ring(), coords);
            let denom = (0..d).map(|j| if s.contains(&j) { e } else { 0 }).collect();
            c.components.insert(s.clone(), Fraction { numerator, denom });
        }
        c
    }

    fn level_homology(&self, i: usize, t: i64, e: u32) -> Arc<LevelHomology> {
        if let Some(h) = self.homology.lock().unwrap().get(&(i, t, e)) {
            return h.clone();
        }
        let fld = self.ring().field();
        let space = self.space(i, t, e);
        let mut boundaries = Echelon::new(fld, space.dim);
        if i > 0 {
            let m = self.koszul_matrix(i - 1, t, e);
            for col in 0..m.cols {
                let v: Vec<u32> = (0..m.rows).map(|r| m.get(r, col)).collect();
                boundaries.insert(&v);
            }
        }
        let cycles = if i < self.len() {
            self.koszul_matrix(i, t, e).kernel(fld)
        } else {
            (0..space.dim).map(|k| (0..space.dim).map(|j| u32::from(j == k)).collect()).collect()
        };
        let mut span = boundaries.clone();
        let mut reps = Vec::new();
        for z in cycles {
            if span.insert(&z) {
                reps.push(z);
            }
        }
        let h = Arc::new(LevelHomology { boundaries, reps });
        self.homology.lock().unwrap().insert((i, t, e), h.clone());
        h
    }

    /// Whether the transition map from level `e` to level `e2` is an isomorphism.
    fn transition_is_iso(&self, i: usize, t: i64, e: u32, e2: u32) -> Result<bool> {
        let h1 = self.level_homology(i, t, e);
        let h2 = self.level_homology(i, t, e2);
        if h1.reps.len() != h2.reps.len() {
            return Ok(false);
        }
        let mut span = h2.boundaries.clone();
        for rep in &h1.reps {
            let c = self.cochain_from_vector(i, t, e, rep);
            let v = self.koszul_vector(&c, t, e2)?.expect("higher level");
            if !span.insert(&v) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `H^i_I(R)_t` via the Koszul colimit, accepted at the first level `e`
    /// whose transition maps to `e+1` and `e+2` are isomorphisms.
    pub fn lc_graded_piece(&self, i: usize, t: i64, budget: &Budget) -> Result<CohomologyPiece> {
        self.require_base()?;
        if i > self.len() {
            return Ok(CohomologyPiece { i, t, dimension: 0, basis: Vec::new(), koszul_level: 0 });
        }
        let mut e = 1;
        while e + 2 <= budget.koszul_cap.max(3) {
            budget.check_time("local cohomology")?;
            if self.transition_is_iso(i, t, e, e + 1)? && self.transition_is_iso(i, t, e, e + 2)? {
                let h = self.level_homology(i, t, e);
                let basis = h.reps.iter().map(|r| self.cochain_from_vector(i, t, e, r)).collect();
                return Ok(CohomologyPiece { i, t, dimension: h.reps.len(), basis, koszul_level: e });
            }
            e += 1;
        }
        let a = self.level_homology(i, t, e).reps.len();
        let b = self.level_homology(i, t, e + 1).reps.len();
        Err(Error::Budget(format!(
            "H^{i}_t for t={t} did not stabilize by Koszul level {}; last dimensions {a}, {b}",
            e + 1
        )))
    }

    fn natural_level(c: &Cochain) -> u32 {
        c.max_exponent().max(1)
    }

    /// Search for `β` with `d(β) = target` among cochains whose denominator
    /// exponents are at most `natural + exp_cap`. `None` only means that no
    /// such `β` exists below the cap. Returns `β` and the level used.
    pub fn boundary_solve(&self, target: &Cochain, budget: &Budget) -> Result<Option<(Cochain, u32)>> {
        self.require_base()?;
        if target.level == 0 {
            return Err(Error::Precondition("boundary_solve needs a target of level >= 1".into()));
        }
        let Some(t) = self.degree(target)? else {
            return Ok(Some((self.zero_cochain(target.level - 1), 0)));
        };
        let start = Self::natural_level(target);
        for e in start..=start + budget.exp_cap {
            budget.check_time("boundary search")?;
            let v = self.koszul_vector(target, t, e)?.expect("level covers denominators");
            let m = self.koszul_matrix(target.level - 1, t, e);
            if let Some(x) = m.solve(self.ring().field(), &v) {
                return Ok(Some((self.cochain_from_vector(target.level - 1, t, e, &x), e)));
            }
        }
        Ok(None)
    }

    /// Solve `target = Σ_k a_k gens_k + d(β)` with scalars `a_k` (gens are
    /// degree-`t` cocycles of the same level). Returns `(a, β, level)`.
    pub fn solve_combination(
        &self,
        target: &Cochain,
        gens: &[Cochain],
        t: i64,
        budget: &Budget,
    ) -> Result<Option<(Vec<u32>, Cochain, u32)>> {
        self.require_base()?;
        let level = target.level;
        let start = gens.iter().map(Self::natural_level).fold(Self::natural_level(target), u32::max);
        for e in start..=start + budget.exp_cap {
            budget.check_time("linear relation search")?;
            let v = self.koszul_vector(target, t, e)?.expect("level covers denominators");
            let mut cols: Vec<Vec<u32>> = Vec::new();
            for g in gens {
                cols.push(self.koszul_vector(g, t, e)?.expect("level covers denominators"));
            }
            let ngens = cols.len();
            if level > 0 {
                let m = self.koszul_matrix(level - 1, t, e);
                for col in 0..m.cols {
                    cols.push((0..m.rows).map(|r| m.get(r, col)).collect());
                }
            }
            let a = Matrix::from_columns(&cols, v.len());
            if let Some(x) = a.solve(self.ring().field(), &v) {
                let beta = if level > 0 {
                    self.cochain_from_vector(level - 1, t, e, &x[ngens..])
                } else {
                    Cochain { level: 0, components: BTreeMap::new() }
                };
                return Ok(Some((x[..ngens].to_vec(), beta, e)));
            }
        }
        Ok(None)
    }

    /// Coordinates of a cocycle's class in the basis of a computed piece.
    pub fn class_coordinates(&self, piece: &CohomologyPiece, c: &Cochain, budget: &Budget) -> Result<Option<Vec<u32>>> {
        Ok(self.solve_combination(c, &piece.basis, piece.t, budget)?.map(|(a, _, _)| a))
    }
}
