//! Exponent-vector monomials and block monomial orders.

use std::cmp::Ordering;

use smallvec::SmallVec;

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents<I: IntoIterator<Item = u32>>(exps: I) -> Self {
        Monomial(exps.into_iter().collect())
    }

    pub fn var(nvars: usize, index: usize, exp: u32) -> Self {
        let mut m = Monomial::one(nvars);
        m.0[index] = exp;
        m
    }

    #[inline]
    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    /// `self | other`
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(self.0.iter()).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i)
    }

    pub(crate) fn exps_mut(&mut self) -> &mut [u32] {
        &mut self.0
    }
}

/// A block order: blocks are compared in sequence, each block by graded
/// reverse lexicographic comparison of the variables it lists.
///
/// Plain grevlex is a single block containing every variable in index order;
/// lex is one singleton block per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    blocks: Vec<Vec<usize>>,
}

impl MonomialOrder {
    pub fn grevlex(nvars: usize) -> Self {
        MonomialOrder { blocks: vec![(0..nvars).collect()] }
    }

    pub fn lex(nvars: usize) -> Self {
        MonomialOrder { blocks: (0..nvars).map(|i| vec![i]).collect() }
    }

    /// Blocks listed from most to least significant.
    pub fn blocks(blocks: Vec<Vec<usize>>) -> Self {
        MonomialOrder { blocks: blocks.into_iter().filter(|b| !b.is_empty()).collect() }
    }

    pub fn block_list(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_grevlex(&self) -> bool {
        self.blocks.len() == 1 && self.blocks[0].iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Short stable name recorded in certificates.
    pub fn tag(&self) -> String {
        if self.is_grevlex() {
            return "grevlex".to_string();
        }
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        format!("block-grevlex[{}]", parts.join("|"))
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        for block in &self.blocks {
            let da: u64 = block.iter().map(|&i| a.exp(i) as u64).sum();
            let db: u64 = block.iter().map(|&i| b.exp(i) as u64).sum();
            match da.cmp(&db) {
                Ordering::Equal => {}
                o => return o,
            }
            for &i in block.iter().rev() {
                match a.exp(i).cmp(&b.exp(i)) {
                    Ordering::Equal => {}
                    o => return o.reverse(),
                }
            }
        }
        Ordering::Equal
    }
}

/// All exponent vectors of `nvars` entries with total degree `deg`, in
/// descending lexicographic order of the exponent vectors.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    if nvars == 0 {
        if deg == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial::from_exponents(cur.iter().copied()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, deg, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.iter().copied())
    }

    #[test]
    fn grevlex_basics() {
        let o = MonomialOrder::grevlex(3);
        // x > y > z in degree 1
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 1, 0])), Ordering::Greater);
        // degree first
        assert_eq!(o.cmp(&m(&[0, 0, 2]), &m(&[1, 0, 0])), Ordering::Greater);
        // x y^2 vs x^2 z : revlex looks at z first; smaller z-exponent wins
        assert_eq!(o.cmp(&m(&[1, 2, 0]), &m(&[2, 0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1, 1]), &m(&[1, 1, 1])), Ordering::Equal);
    }

    #[test]
    fn block_order_eliminates_first_block() {
        // variable 2 dominates everything
        let o = MonomialOrder::blocks(vec![vec![2], vec![0, 1]]);
        assert_eq!(o.cmp(&m(&[0, 0, 1]), &m(&[5, 5, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 1, 1])), Ordering::Greater);
        assert!(!o.is_grevlex());
        assert!(MonomialOrder::grevlex(4).is_grevlex());
    }

    #[test]
    fn lex_is_singleton_blocks() {
        let o = MonomialOrder::lex(2);
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 9])), Ordering::Greater);
    }

    #[test]
    fn degree_enumeration_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(4, 3).len(), 20);
        assert_eq!(monomials_of_degree(1, 5).len(), 1);
        assert_eq!(monomials_of_degree(0, 0).len(), 1);
    }
}
