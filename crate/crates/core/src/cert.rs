//! Certificate files: sorted-key JSON, polynomials as canonical strings,
//! and a verifier that works from the serialized text alone.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::budget::Budget;
use crate::cech::{CechComplex, Cochain, Fraction, SIGN_CONVENTION};
use crate::error::{Error, Result};
use crate::frobenius::FrobeniusPoly;
use crate::kill::{
    ideal_member, recheck_in_compositum, seq_monomial, soundness_holds, Adjunction, Convention, KillAll,
    KillCertificate, TrivializationCertificate,
};
use crate::poly::{Poly, PolyRing};
use crate::ringfile::{ring_hash, RingSpec};
use crate::tower::RingTower;

pub fn cochain_json(ring: &PolyRing, c: &Cochain) -> Value {
    let comps: Vec<Value> = c
        .components
        .iter()
        .map(|(s, f)| json!({"subset": s, "num": ring.format(&f.numerator), "den": f.denom}))
        .collect();
    json!({"level": c.level, "components": comps})
}

fn adjunction_json(ring: &PolyRing, a: &Adjunction) -> Value {
    json!({
        "name": a.name,
        "subset": a.subset,
        "den": a.denom,
        "monic": ring.format(&a.monic),
        "identity": a.identity.as_ref().map(|g| ring.format(g)),
    })
}

fn names_of(ring: &PolyRing, vars: &[usize]) -> Vec<String> {
    vars.iter().map(|&v| ring.names()[v].clone()).collect()
}

pub fn kill_certificate_json(spec: &RingSpec, cert: &KillCertificate) -> Value {
    let base = spec.ring();
    let ring = cert.tower.ring();
    let polys = |v: &[Poly], r: &PolyRing| v.iter().map(|g| r.format(g)).collect::<Vec<_>>();
    json!({
        "ring_hash": cert.ring_hash,
        "seq": names_of(base, &cert.seq),
        "level": cert.level,
        "degree": cert.degree,
        "class": cochain_json(base, &cert.class_cocycle),
        "g": {"s": cert.g.s, "coeffs": polys(&cert.g.coeffs, base)},
        "beta": cochain_json(base, &cert.beta),
        "koszul_level": cert.koszul_level,
        "tower_vars": ring.names(),
        "z_adjunctions": cert.z_adjunctions.iter().map(|a| adjunction_json(ring, a)).collect::<Vec<_>>(),
        "alpha_tt": cochain_json(ring, &cert.alpha_tt),
        "corrected": cochain_json(ring, &cert.corrected),
        "rho_adjunctions": cert.rho_adjunctions.iter().map(|a| adjunction_json(ring, a)).collect::<Vec<_>>(),
        "rho": cochain_json(ring, &cert.rho),
        "torsion_relations": polys(&cert.torsion_relations, ring),
        "eta": cochain_json(ring, &cert.eta),
        "rank_bound": cert.rank_bound as u64,
        "convention": {
            "order": cert.convention.order,
            "sign": cert.convention.sign,
            "budget": serde_json::to_value(&cert.convention.budget).expect("budget serializes"),
        },
    })
}

fn kill_bundle_body(spec: &RingSpec, i: usize, all: &KillAll) -> Value {
    let ring = all.tower.ring();
    json!({
        "kind": "kill",
        "ring_hash": ring_hash(spec),
        "level": i,
        "dimensions": all.dimensions.iter().map(|(t, d)| json!([t, d])).collect::<Vec<_>>(),
        "certificates": all.certificates.iter().map(|c| kill_certificate_json(spec, c)).collect::<Vec<_>>(),
        "compositum": {
            "vars": ring.names(),
            "maps": all.maps.iter().map(|m| names_of(ring, m)).collect::<Vec<_>>(),
        },
    })
}

fn seal(mut body: Value) -> Value {
    let digest = digest_of(&body);
    body.as_object_mut().expect("object").insert("digest".into(), Value::String(digest));
    body
}

fn digest_of(body: &Value) -> String {
    hex::encode(Sha256::digest(serde_json::to_string(body).expect("json").as_bytes()))
}

/// Serialized kill bundle for `H^i`.
pub fn kill_bundle_json(spec: &RingSpec, i: usize, all: &KillAll) -> Value {
    seal(kill_bundle_body(spec, i, all))
}

pub fn trivialization_json(spec: &RingSpec, cert: &TrivializationCertificate) -> Value {
    let base = spec.ring();
    let ring = cert.tower.ring();
    seal(json!({
        "kind": "trivialization",
        "ring_hash": ring_hash(spec),
        "params": cert.params.iter().map(|g| base.format(g)).collect::<Vec<_>>(),
        "witness": base.format(&cert.witness),
        "kills": cert.kills.iter().enumerate().map(|(i, k)| kill_bundle_body(spec, i, k)).collect::<Vec<_>>(),
        "tower_vars": ring.names(),
        "cofactors": cert.cofactors.iter().map(|g| ring.format(g)).collect::<Vec<_>>(),
    }))
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// Identities confirmed during verification, in order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<String>,
}

/// What a verified file contained.
#[derive(Clone, Debug)]
pub enum Verified {
    Kill { level: usize, certificates: Vec<KillCertificate>, tower: RingTower },
    Trivialization { tower: RingTower, cofactors: Vec<Poly> },
}

struct Checker<'a> {
    spec: &'a RingSpec,
    budget: &'a Budget,
    report: VerifyReport,
    context: String,
}

fn malformed(what: impl std::fmt::Display) -> Error {
    Error::VerifyFail(format!("malformed certificate: {what}"))
}

fn field<'v>(v: &'v Value, key: &str) -> Result<&'v Value> {
    v.get(key).ok_or_else(|| malformed(format!("missing field {key:?}")))
}

fn as_str<'v>(v: &'v Value, key: &str) -> Result<&'v str> {
    field(v, key)?.as_str().ok_or_else(|| malformed(format!("{key:?} is not a string")))
}

fn as_u64(v: &Value, key: &str) -> Result<u64> {
    field(v, key)?.as_u64().ok_or_else(|| malformed(format!("{key:?} is not a non-negative integer")))
}

fn as_arr<'v>(v: &'v Value, key: &str) -> Result<&'v Vec<Value>> {
    field(v, key)?.as_array().ok_or_else(|| malformed(format!("{key:?} is not a list")))
}

fn usize_list(v: &Value, what: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| malformed(format!("{what} is not a list")))?
        .iter()
        .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| malformed(format!("{what} entry is not an integer"))))
        .collect()
}

fn u32_list(v: &Value, what: &str) -> Result<Vec<u32>> {
    usize_list(v, what)?
        .into_iter()
        .map(|x| u32::try_from(x).map_err(|_| malformed(format!("{what} entry out of range"))))
        .collect()
}

fn string_list(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| malformed(format!("{what} is not a list")))?
        .iter()
        .map(|x| x.as_str().map(str::to_string).ok_or_else(|| malformed(format!("{what} entry is not a string"))))
        .collect()
}

fn poly_in(ring: &PolyRing, s: &str) -> Result<Poly> {
    ring.parse_canonical(s).map_err(malformed)
}

fn cochain_in(cx: &CechComplex, v: &Value, level: usize) -> Result<Cochain> {
    if as_u64(v, "level")? as usize != level {
        return Err(malformed(format!("cochain level differs from {level}")));
    }
    let mut comps = Vec::new();
    for c in as_arr(v, "components")? {
        let subset = usize_list(field(c, "subset")?, "subset")?;
        if subset.len() != level {
            return Err(malformed("component index of the wrong size"));
        }
        let numerator = poly_in(cx.ring(), as_str(c, "num")?)?;
        let denom = u32_list(field(c, "den")?, "den")?;
        comps.push((subset, Fraction { numerator, denom }));
    }
    if comps.len() != crate::cech::subsets(cx.len(), level).len() {
        return Err(malformed("cochain does not list every component"));
    }
    cx.cochain(level, comps).map_err(malformed)
}

/// Read a cochain written by [`cochain_json`] (class files); input errors
/// are parse errors here, not verification failures.
pub fn cochain_from_json(cx: &CechComplex, v: &Value) -> Result<Cochain> {
    let level = v.get("level").and_then(Value::as_u64).ok_or_else(|| Error::Parse("cochain without a level".into()))?;
    cochain_in(cx, v, level as usize).map_err(|e| match e {
        Error::VerifyFail(m) => Error::Parse(m.replace("malformed certificate", "malformed cochain")),
        other => other,
    })
}

impl<'a> Checker<'a> {
    fn check(&mut self, name: &str, ok: bool) -> Result<()> {
        let name = format!("{}{name}", self.context);
        if ok {
            self.report.checks.push(name);
            Ok(())
        } else {
            Err(Error::VerifyFail(format!("{name} does not hold")))
        }
    }

    /// Run a step whose own errors count as a failure of the named check.
    fn step<T>(&mut self, name: &str, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::VerifyFail(m) if m.starts_with("malformed") => Error::VerifyFail(m),
            other => Error::VerifyFail(format!("{}{name}: {other}", self.context)),
        })
    }

    fn base_complex(&mut self, seq_names: &[String]) -> Result<CechComplex> {
        let ring = self.spec.ring();
        let seq = seq_names
            .iter()
            .map(|n| ring.var_index(n).ok_or_else(|| malformed(format!("unknown sequence variable {n:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let tower = RingTower::trivial(self.spec.presentation.clone());
        let cx = CechComplex::new(tower, seq, self.budget);
        self.step("Čech sequence", cx)
    }

    fn kill_certificate(&mut self, v: &Value) -> Result<KillCertificate> {
        let budget = self.budget;
        self.check("ring hash", as_str(v, "ring_hash")? == ring_hash(self.spec))?;
        let seq_names = string_list(field(v, "seq")?, "seq")?;
        let cx = self.base_complex(&seq_names)?;
        let base = self.spec.presentation.clone();
        let bring = base.ring().clone();
        let level = as_u64(v, "level")? as usize;
        let dim = base.krull_dimension();
        self.check("level below dimension", level >= 1 && level < dim)?;
        let alpha = cochain_in(&cx, field(v, "class")?, level)?;
        let cocycle = cx.is_cocycle(&alpha, budget);
        let cocycle = self.step("class is a cocycle", cocycle)?;
        self.check("class is a cocycle", cocycle)?;
        let degree = field(v, "degree")?.as_i64().ok_or_else(|| malformed("degree"))?;
        let actual = self.step("class degree", cx.degree(&alpha))?;
        self.check("class degree", actual.is_none_or(|d| d == degree))?;

        let gv = field(v, "g")?;
        let s = u32::try_from(as_u64(gv, "s")?).map_err(|_| malformed("s out of range"))?;
        let coeffs =
            string_list(field(gv, "coeffs")?, "coeffs")?.iter().map(|c| poly_in(&bring, c)).collect::<Result<Vec<_>>>()?;
        self.check("g has s lower coefficients", coeffs.len() == s as usize && s <= 16)?;
        let g = FrobeniusPoly { s, coeffs };
        let beta = cochain_in(&cx, field(v, "beta")?, level - 1)?;
        let lhs = crate::frobenius::apply_to_cochain(&cx, &g, &alpha);
        let db = self.step("g(α̃) = d(β)", cx.differential(&beta))?;
        let rel = self.step("g(α̃) = d(β)", cx.is_zero(&cx.sub(&lhs, &db), budget))?;
        self.check("g(α̃) = d(β)", rel)?;

        let p = bring.p() as u64;
        let top = p.pow(s) as u32;
        let seq = cx.seq().to_vec();
        let mut tower = RingTower::trivial(base.clone());

        let mut z_adjunctions = Vec::new();
        let mut z_vars: Vec<(Vec<usize>, Vec<u32>, usize)> = Vec::new();
        for a in as_arr(v, "z_adjunctions")? {
            let name = as_str(a, "name")?.to_string();
            let subset = usize_list(field(a, "subset")?, "subset")?;
            let denom = u32_list(field(a, "den")?, "den")?;
            let label = format!("Z relation for {name}");
            let (ring, var) = self.step(&label, tower.extended_ring(&name))?;
            let monic = poly_in(&ring, as_str(a, "monic")?)?;
            self.check(&format!("{name} has no fraction identity"), field(a, "identity")?.is_null())?;
            let Some(bf) = beta.components.get(&subset) else {
                return Err(malformed(format!("{name} names a missing β component")));
            };
            self.check(&format!("{name} denominator matches β"), bf.denom == denom && !bf.numerator.is_zero())?;
            let lifted = g.lifted_coeffs(&bring, &ring);
            let xe = seq_monomial(ring.nvars(), &seq, &denom);
            let cleared = g.clear_denominator(&ring, &lifted, &ring.var(var), &xe);
            let r = ring.map_from(&bring, &bf.numerator, &(0..bring.nvars()).collect::<Vec<_>>());
            let expected = ring.sub(&cleared, &ring.mul_monomial(&r, &xe.pow(top - 1)));
            self.check(&label, expected == monic)?;
            tower = self.step(&format!("adjunction of {name}"), tower.adjoin_root(&name, monic.clone(), Vec::new(), budget))?;
            z_vars.push((subset.clone(), denom.clone(), var));
            z_adjunctions.push((name, subset, denom, monic, None));
        }
        // Every nonzero β component must have its root.
        let covered = beta
            .components
            .iter()
            .all(|(s, f)| f.numerator.is_zero() || z_vars.iter().any(|(zs, _, _)| zs == s));
        self.check("every β component has a root", covered)?;

        let cx1 = cx.over(tower.clone());
        let alpha_tt = cochain_in(&cx1, field(v, "alpha_tt")?, level - 1)?;
        let tt_ok = alpha_tt.components.iter().all(|(s, f)| match z_vars.iter().find(|(zs, _, _)| zs == s) {
            Some((_, den, var)) => f.numerator == cx1.ring().var(*var) && &f.denom == den,
            None => f.numerator.is_zero(),
        });
        self.check("α̃̃ = Z/x^e", tt_ok)?;
        let corrected = cochain_in(&cx1, field(v, "corrected")?, level)?;
        let alpha1 = cx.map_cochain(&alpha, &cx1, &(0..bring.nvars()).collect::<Vec<_>>());
        let dtt = self.step("ᾱ = α̃ - d(α̃̃)", cx1.differential(&alpha_tt))?;
        let diff = cx1.sub(&cx1.sub(&alpha1, &dtt), &corrected);
        let ok = self.step("ᾱ = α̃ - d(α̃̃)", cx1.is_zero(&diff, budget))?;
        self.check("ᾱ = α̃ - d(α̃̃)", ok)?;

        let mut rho_adjunctions = Vec::new();
        let mut rho_vars: Vec<(Vec<usize>, usize)> = Vec::new();
        for a in as_arr(v, "rho_adjunctions")? {
            let name = as_str(a, "name")?.to_string();
            let subset = usize_list(field(a, "subset")?, "subset")?;
            let denom = u32_list(field(a, "den")?, "den")?;
            let (ring, var) = self.step(&format!("adjunction of {name}"), tower.extended_ring(&name))?;
            let monic = poly_in(&ring, as_str(a, "monic")?)?;
            let identity = match field(a, "identity")?.as_str() {
                Some(s) => poly_in(&ring, s)?,
                None => return Err(malformed(format!("{name} lacks its fraction identity"))),
            };
            let lifted = g.lifted_coeffs(&bring, &ring);
            let rho = ring.var(var);
            self.check(&format!("g({name}) = 0"), g.apply(&ring, &lifted, &rho) == monic)?;
            let Some(cf) = corrected.components.get(&subset) else {
                return Err(malformed(format!("{name} names a missing ᾱ component")));
            };
            let xe = seq_monomial(ring.nvars(), &seq, &denom);
            let num = ring.map_from(cx1.ring(), &cf.numerator, &(0..cx1.ring().nvars()).collect::<Vec<_>>());
            let expected = ring.sub(&ring.mul_monomial(&rho, &xe), &num);
            self.check(&format!("fraction identity for {name}"), cf.denom == denom && expected == identity)?;
            tower = self.step(
                &format!("adjunction of {name}"),
                tower.adjoin_root(&name, monic.clone(), vec![identity.clone()], budget),
            )?;
            rho_vars.push((subset.clone(), var));
            rho_adjunctions.push((name, subset, denom, monic, Some(identity)));
        }
        let torsion = string_list(field(v, "torsion_relations")?, "torsion_relations")?
            .iter()
            .map(|s| poly_in(tower.ring(), s))
            .collect::<Result<Vec<_>>>()?;
        if !torsion.is_empty() {
            tower = self.step("torsion relations", tower.with_relations(torsion.clone(), budget))?;
        }
        let names = string_list(field(v, "tower_vars")?, "tower_vars")?;
        self.check("tower variables", names == tower.ring().names())?;

        let cx3 = cx.over(tower.clone());
        let rho = cochain_in(&cx3, field(v, "rho")?, level)?;
        self.check("ρ is denominator-free", rho.is_constant())?;
        let named = rho_vars.iter().all(|(s, var)| {
            let r = &rho.components[s].numerator;
            tower.zero_test(&tower.ring().sub(r, &tower.ring().var(*var)))
        });
        self.check("ρ components are the adjoined roots", named)?;
        let corrected3 = cx1.map_cochain(&corrected, &cx3, &(0..cx1.ring().nvars()).collect::<Vec<_>>());
        let ok = self.step("ρ = ᾱ", cx3.is_zero(&cx3.sub(&rho, &corrected3), budget))?;
        self.check("ρ = ᾱ", ok)?;
        if level < cx3.len() {
            let drho = self.step("d(ρ) = 0", cx3.differential(&rho))?;
            self.check("d(ρ) = 0", drho.components.values().all(|f| tower.zero_test(&f.numerator)))?;
        }
        let eta = cochain_in(&cx3, field(v, "eta")?, level - 1)?;
        let deta = self.step("d(η) = ᾱ", cx3.differential(&eta))?;
        let exact = cx3.sub(&deta, &rho).components.values().all(|f| tower.zero_test(&f.numerator));
        self.check("d(η) = ᾱ", exact)?;
        let alpha3 = cx.map_cochain(&alpha, &cx3, &(0..bring.nvars()).collect::<Vec<_>>());
        let alpha_tt3 = cx1.map_cochain(&alpha_tt, &cx3, &(0..cx1.ring().nvars()).collect::<Vec<_>>());
        let sound = self.step("class bounds", soundness_holds(&cx3, &alpha3, &alpha_tt3, &eta, budget))?;
        self.check("α̃ = d(η + α̃̃)", sound)?;
        let inj = self.step("injectivity", tower.injectivity_check(budget))?;
        self.check("injectivity", inj.holds)?;

        let widen = |p: &Poly| tower.ring().map_from(cx1.ring(), p, &(0..cx1.ring().nvars()).collect::<Vec<_>>());
        let lift = |(name, subset, denom, _, _): (String, Vec<usize>, Vec<u32>, Poly, Option<Poly>)| {
            let level = tower.levels().iter().find(|l| l.name == name).expect("adjoined");
            Adjunction { name, subset, denom, monic: level.monic.clone(), identity: level.extra.first().cloned() }
        };
        let z_adjunctions: Vec<Adjunction> = z_adjunctions.into_iter().map(lift).collect();
        let rho_adjunctions: Vec<Adjunction> = rho_adjunctions.into_iter().map(lift).collect();

        let cert = KillCertificate {
            ring_hash: ring_hash(self.spec),
            seq,
            level,
            degree,
            class_cocycle: alpha,
            g,
            beta,
            koszul_level: u32::try_from(as_u64(v, "koszul_level")?).map_err(|_| malformed("koszul_level"))?,
            z_adjunctions,
            alpha_tt: cochain_widened(&alpha_tt, &widen),
            corrected: cochain_widened(&corrected, &widen),
            rho_adjunctions,
            rho,
            torsion_relations: torsion,
            eta,
            rank_bound: as_u64(v, "rank_bound")? as u128,
            convention: self.convention(field(v, "convention")?, &tower)?,
            tower: tower.clone(),
        };
        self.check(
            "rank bound",
            cert.rank_bound == tower.rank_bound() && cert.rank_bound <= cert.rank_limit(cx.len()),
        )?;
        Ok(cert)
    }

    fn convention(&mut self, v: &Value, tower: &RingTower) -> Result<Convention> {
        let order = as_str(v, "order")?.to_string();
        let sign = as_str(v, "sign")?.to_string();
        let budget: Budget = serde_json::from_value(field(v, "budget")?.clone()).map_err(malformed)?;
        self.check("convention", order == tower.ring().order().tag() && sign == SIGN_CONVENTION)?;
        Ok(Convention { order, sign, budget })
    }

    fn kill_bundle(&mut self, v: &Value) -> Result<(usize, KillAll)> {
        if as_str(v, "kind")? != "kill" {
            return Err(malformed("expected a kill bundle"));
        }
        self.check("ring hash", as_str(v, "ring_hash")? == ring_hash(self.spec))?;
        let level = as_u64(v, "level")? as usize;
        let mut dimensions = Vec::new();
        for d in as_arr(v, "dimensions")? {
            let pair = d.as_array().filter(|a| a.len() == 2).ok_or_else(|| malformed("dimension entry"))?;
            let t = pair[0].as_i64().ok_or_else(|| malformed("dimension degree"))?;
            let n = pair[1].as_u64().ok_or_else(|| malformed("dimension value"))? as usize;
            dimensions.push((t, n));
        }
        let mut certificates = Vec::new();
        let outer = self.context.clone();
        for (k, c) in as_arr(v, "certificates")?.iter().enumerate() {
            self.context = format!("{outer}certificate {k}: ");
            let cert = self.kill_certificate(c)?;
            self.check("level matches bundle", cert.level == level)?;
            certificates.push(cert);
        }
        self.context = outer;
        let mut tower = RingTower::trivial(self.spec.presentation.clone());
        let mut maps = Vec::new();
        for cert in &certificates {
            let joined = self.step("compositum", tower.compositum(&cert.tower, self.budget))?;
            tower = joined.0;
            maps.push(joined.2);
        }
        let comp = field(v, "compositum")?;
        let names = string_list(field(comp, "vars")?, "vars")?;
        self.check("compositum variables", names == tower.ring().names())?;
        let listed = as_arr(comp, "maps")?;
        let mut maps_ok = listed.len() == maps.len();
        for (m, l) in maps.iter().zip(listed) {
            maps_ok &= string_list(l, "map")? == names_of(tower.ring(), m);
        }
        self.check("compositum maps", maps_ok)?;
        let all = KillAll { tower, certificates, maps, dimensions };
        if let Some(first) = all.certificates.first() {
            let cx = self.base_complex(&names_of(self.spec.ring(), &first.seq))?;
            let r = recheck_in_compositum(&cx, &all, self.budget);
            self.step("certificates in the compositum", r)?;
            self.check("certificates in the compositum", true)?;
        }
        Ok((level, all))
    }

    fn trivialization(&mut self, v: &Value) -> Result<(RingTower, Vec<Poly>)> {
        let base = self.spec.presentation.clone();
        let bring = base.ring().clone();
        self.check("ring hash", as_str(v, "ring_hash")? == ring_hash(self.spec))?;
        let params = string_list(field(v, "params")?, "params")?
            .iter()
            .map(|s| poly_in(&bring, s))
            .collect::<Result<Vec<_>>>()?;
        let witness = poly_in(&bring, as_str(v, "witness")?)?;
        let j = params.len();
        self.check("parameters given", j >= 1)?;
        let prefix = &params[..j - 1];
        let outside = self.step("witness outside the earlier parameters", ideal_member(&base, &witness, prefix, self.budget))?;
        self.check("witness outside the earlier parameters", !outside)?;
        let colon = self.step("colon relation", ideal_member(&base, &bring.mul(&params[j - 1], &witness), prefix, self.budget))?;
        self.check("colon relation", colon)?;
        let mut tower = RingTower::trivial(base.clone());
        let outer = self.context.clone();
        for (k, b) in as_arr(v, "kills")?.iter().enumerate() {
            self.context = format!("{outer}H^{k} bundle: ");
            let (level, all) = self.kill_bundle(b)?;
            self.check("bundle level", level == k)?;
            tower = self.step("compositum", tower.compositum(&all.tower, self.budget))?.0;
        }
        self.context = outer;
        self.check("bundles cover every level below j", as_arr(v, "kills")?.len() == j)?;
        let names = string_list(field(v, "tower_vars")?, "tower_vars")?;
        self.check("tower variables", names == tower.ring().names())?;
        let cofactors = string_list(field(v, "cofactors")?, "cofactors")?
            .iter()
            .map(|s| poly_in(tower.ring(), s))
            .collect::<Result<Vec<_>>>()?;
        self.check("one cofactor per earlier parameter", cofactors.len() == j - 1)?;
        let ring = tower.ring();
        let mut acc = tower.lift(&witness);
        for (c, x) in cofactors.iter().zip(prefix) {
            acc = ring.sub(&acc, &ring.mul(c, &tower.lift(x)));
        }
        self.check("w - Σ c_k x_k = 0", tower.zero_test(&acc))?;
        Ok((tower, cofactors))
    }
}

fn cochain_widened(c: &Cochain, f: &dyn Fn(&Poly) -> Poly) -> Cochain {
    let components = c
        .components
        .iter()
        .map(|(s, fr)| (s.clone(), Fraction { numerator: f(&fr.numerator), denom: fr.denom.clone() }))
        .collect();
    Cochain { level: c.level, components }
}

/// Verify a certificate file against a ring, re-deriving every identity.
/// Every failure, including malformed input, is reported as
/// [`Error::VerifyFail`] naming the first broken check.
pub fn verify_text(text: &str, spec: &RingSpec, budget: &Budget) -> Result<(Verified, VerifyReport)> {
    let v: Value = serde_json::from_str(text).map_err(malformed)?;
    let mut body = v.as_object().ok_or_else(|| malformed("top level is not an object"))?.clone();
    let digest = body.remove("digest").and_then(|d| d.as_str().map(str::to_string));
    let body = Value::Object(body);
    let mut ck = Checker { spec, budget, report: VerifyReport::default(), context: String::new() };
    let out = match as_str(&body, "kind")? {
        "kill" => {
            let (level, all) = ck.kill_bundle(&body)?;
            Verified::Kill { level, certificates: all.certificates, tower: all.tower }
        }
        "trivialization" => {
            let (tower, cofactors) = ck.trivialization(&body)?;
            Verified::Trivialization { tower, cofactors }
        }
        other => return Err(malformed(format!("unknown certificate kind {other:?}"))),
    };
    ck.check("digest", digest.as_deref() == Some(digest_of(&body).as_str()))?;
    Ok((out, ck.report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::ClassHandle;
    use crate::kill::{kill_all, kill_class, trivialize_relation, DEFAULT_WINDOW};
    use crate::ringfile::parse_ring;

    fn sg4(p: u64) -> (RingSpec, CechComplex) {
        let text = format!("p={p} / vars=a,b,c,d / ideal=a*d-b*c, b^3-a^2*c, c^3-b*d^2, b^2*d-a*c^2 / cech=a,d");
        let b = Budget::default();
        let spec = parse_ring(&text, &b).unwrap();
        let cx = CechComplex::new(RingTower::trivial(spec.presentation.clone()), spec.cech.clone(), &b).unwrap();
        (spec, cx)
    }

    #[test]
    fn kill_bundle_round_trip_and_verify() {
        let b = Budget::default();
        let (spec, cx) = sg4(2);
        let all = kill_all(&cx, 1, DEFAULT_WINDOW, &ring_hash(&spec), &b).unwrap();
        assert_eq!(all.certificates.len(), 1);
        let text = to_text(&kill_bundle_json(&spec, 1, &all));
        let (verified, report) = verify_text(&text, &spec, &b).unwrap();
        assert!(report.checks.iter().any(|c| c.ends_with("d(η) = ᾱ")));
        let Verified::Kill { certificates, tower, .. } = verified else { panic!("kind") };
        assert_eq!(certificates, all.certificates);
        assert_eq!(tower, all.tower);
        let again = to_text(&kill_bundle_json(&spec, 1, &KillAll { certificates, tower, ..all.clone() }));
        assert_eq!(again, text);
    }

    #[test]
    fn perturbed_eta_fails_at_its_check() {
        let b = Budget::default();
        let (spec, cx) = sg4(2);
        let piece = cx.lc_graded_piece(1, 1, &b).unwrap();
        let alpha = ClassHandle { cocycle: piece.basis[0].clone(), degree: 1, piece: None };
        let (tower, cert) = kill_class(&cx, &alpha, &ring_hash(&spec), &b).unwrap();
        let all = KillAll { tower: tower.clone(), certificates: vec![cert], maps: vec![(0..tower.ring().nvars()).collect()], dimensions: vec![] };
        let mut v = kill_bundle_json(&spec, 1, &all);
        let num = &mut v["certificates"][0]["eta"]["components"][0]["num"];
        *num = Value::String(format!("{} + a", num.as_str().unwrap()));
        let e = verify_text(&to_text(&v), &spec, &b).unwrap_err();
        assert!(e.to_string().contains("d(η) = ᾱ"), "{e}");
        assert_eq!(e.exit_code(), 4);
    }

    #[test]
    fn zero_class_bundle_verifies() {
        let b = Budget::default();
        let spec = parse_ring("p=5 / vars=x,y", &b).unwrap();
        let cx = CechComplex::new(RingTower::trivial(spec.presentation.clone()), spec.cech.clone(), &b).unwrap();
        let all = kill_all(&cx, 1, DEFAULT_WINDOW, &ring_hash(&spec), &b).unwrap();
        let text = to_text(&kill_bundle_json(&spec, 1, &all));
        assert!(verify_text(&text, &spec, &b).is_ok());
        let other = parse_ring("p=7 / vars=x,y", &b).unwrap();
        assert_eq!(verify_text(&text, &other, &b).unwrap_err().exit_code(), 4);
    }

    #[test]
    fn trivialization_verifies() {
        let b = Budget::default();
        let (spec, cx) = sg4(2);
        let r = spec.ring();
        let params = vec![r.parse("a").unwrap(), r.parse("d").unwrap()];
        let cert = trivialize_relation(&cx, &params, &r.parse("b^2").unwrap(), &ring_hash(&spec), &b).unwrap();
        let text = to_text(&trivialization_json(&spec, &cert));
        let (out, _) = verify_text(&text, &spec, &b).unwrap();
        assert!(matches!(out, Verified::Trivialization { .. }));
    }

    #[test]
    fn garbage_is_verify_fail() {
        let b = Budget::default();
        let (spec, _) = sg4(2);
        for text in ["", "[]", "{\"kind\": \"kill\"}", "{\"kind\": 3}"] {
            assert_eq!(verify_text(text, &spec, &b).unwrap_err().exit_code(), 4, "{text}");
        }
    }
}
