//! Line-oriented ring and tower files.
//!
//! ```text
//! # comment
//! p = 2
//! vars = a, b, c, d
//! ideal = a*d - b*c, b^3 - a^2*c
//! cech = a, d
//! ```
//!
//! Entries may also be separated by `/` on a single line. Tower files add
//! `adjoin = NAME : MONIC ; EXTRA ; ...` and `relation = POLY` entries.

use sha2::{Digest, Sha256};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::graded::Presentation;
use crate::poly::{Poly, PolyRing};
use crate::tower::RingTower;

/// A parsed ring file: the presentation plus its Čech sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct RingSpec {
    pub presentation: Presentation,
    /// Variable indices of the Čech sequence, in the order written.
    pub cech: Vec<usize>,
    /// Whether `cech` was given explicitly (otherwise all variables).
    pub explicit_cech: bool,
}

impl RingSpec {
    pub fn ring(&self) -> &PolyRing {
        self.presentation.ring()
    }
}

fn entries(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for part in line.split('/') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected `key = value`, found {part:?}")))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
    }
    Ok(out)
}

fn split_list(v: &str) -> Vec<String> {
    v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

struct Fields {
    p: Option<String>,
    vars: Option<String>,
    ideal: Option<String>,
    cech: Option<String>,
    adjoin: Vec<String>,
    relation: Vec<String>,
}

fn collect(text: &str, tower: bool) -> Result<Fields> {
    let mut f = Fields { p: None, vars: None, ideal: None, cech: None, adjoin: Vec::new(), relation: Vec::new() };
    for (k, v) in entries(text)? {
        let slot = match k.as_str() {
            "p" => &mut f.p,
            "vars" => &mut f.vars,
            "ideal" => &mut f.ideal,
            "cech" => &mut f.cech,
            "adjoin" if tower => {
                f.adjoin.push(v);
                continue;
            }
            "relation" if tower => {
                f.relation.push(v);
                continue;
            }
            _ => return Err(Error::Parse(format!("unknown key {k:?}"))),
        };
        if slot.is_some() {
            return Err(Error::Parse(format!("duplicate key {k:?}")));
        }
        *slot = Some(v);
    }
    Ok(f)
}

fn build_spec(f: &Fields, budget: &Budget) -> Result<RingSpec> {
    let p_text = f.p.as_deref().ok_or_else(|| Error::Parse("missing key `p`".into()))?;
    let p: u64 = p_text.parse().map_err(|_| Error::Parse(format!("modulus {p_text:?} is not an integer")))?;
    let field = Fp::new(p)?;
    let names = split_list(f.vars.as_deref().ok_or_else(|| Error::Parse("missing key `vars`".into()))?);
    if names.is_empty() {
        return Err(Error::Parse("empty variable list".into()));
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let ring = PolyRing::grevlex(field, &refs)?;
    let gens: Vec<Poly> =
        f.ideal.as_deref().map(split_list).unwrap_or_default().iter().map(|g| ring.parse(g)).collect::<Result<_>>()?;
    let presentation = Presentation::new(ring.clone(), gens, budget).map_err(|e| match e {
        Error::Precondition(m) => Error::Parse(m),
        other => other,
    })?;
    let (cech, explicit_cech) = match &f.cech {
        Some(v) => {
            let idx = split_list(v)
                .iter()
                .map(|n| ring.var_index(n).ok_or_else(|| Error::Parse(format!("unknown identifier {n:?} in cech"))))
                .collect::<Result<Vec<_>>>()?;
            (idx, true)
        }
        None => ((0..ring.nvars()).collect(), false),
    };
    Ok(RingSpec { presentation, cech, explicit_cech })
}

pub fn parse_ring(text: &str, budget: &Budget) -> Result<RingSpec> {
    build_spec(&collect(text, false)?, budget)
}

pub fn serialize_ring(spec: &RingSpec) -> String {
    let ring = spec.ring();
    let gens: Vec<String> = spec.presentation.ideal().generators().iter().map(|g| ring.format(g)).collect();
    let mut out = format!("p = {}\nvars = {}\nideal = {}\n", ring.p(), ring.names().join(", "), gens.join(", "));
    if spec.explicit_cech {
        let cech: Vec<&str> = spec.cech.iter().map(|&v| ring.names()[v].as_str()).collect();
        out.push_str(&format!("cech = {}\n", cech.join(", ")));
    }
    out
}

/// Hex SHA-256 of the canonical ring text.
pub fn ring_hash(spec: &RingSpec) -> String {
    hex::encode(Sha256::digest(serialize_ring(spec).as_bytes()))
}

pub fn serialize_tower(spec: &RingSpec, tower: &RingTower) -> String {
    let ring = tower.ring();
    let mut out = serialize_ring(spec);
    for level in tower.levels() {
        let mut parts = vec![ring.format(&level.monic)];
        parts.extend(level.extra.iter().map(|g| ring.format(g)));
        out.push_str(&format!("adjoin = {} : {}\n", level.name, parts.join(" ; ")));
    }
    for r in tower.relations() {
        out.push_str(&format!("relation = {}\n", ring.format(r)));
    }
    out
}

/// Rebuild a tower by replaying its adjunctions; each step re-runs the
/// monicity and injectivity checks.
pub fn parse_tower(text: &str, budget: &Budget) -> Result<(RingSpec, RingTower)> {
    let f = collect(text, true)?;
    let spec = build_spec(&f, budget)?;
    let mut tower = RingTower::trivial(spec.presentation.clone());
    for entry in &f.adjoin {
        let (name, rels) =
            entry.split_once(':').ok_or_else(|| Error::Parse(format!("expected `NAME : MONIC`, found {entry:?}")))?;
        let name = name.trim();
        let (ring, _) = tower.extended_ring(name)?;
        let mut polys = rels.split(';').map(|s| ring.parse(s.trim()));
        let monic = polys.next().ok_or_else(|| Error::Parse(format!("no relation for {name}")))??;
        let extra = polys.collect::<Result<Vec<_>>>()?;
        tower = tower.adjoin_root(name, monic, extra, budget)?;
    }
    if !f.relation.is_empty() {
        let rels = f.relation.iter().map(|r| tower.ring().parse(r)).collect::<Result<Vec<_>>>()?;
        tower = tower.with_relations(rels, budget)?;
    }
    Ok((spec, tower))
}
