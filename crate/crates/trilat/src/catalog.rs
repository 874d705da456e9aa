//! Table data (parameters, side representatives, mirror stabilizers, hybrid
//! claims) and construction of group instances.
//!
//! The data ships as JSON inside the crate. Setting `TRILAT_DATA_DIR` to a
//! directory holding files of the same names replaces all four.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use cyclo::Cyclotomic;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::forms::{HermitianForm, Mat3, Signature, Vec3};
use crate::stabilizer::{ConeOrder, FuchsianSignature};
use crate::tracefield::FieldClaim;
use crate::words::{Sym, Word};
use crate::TrilatError;

type C = Cyclotomic;

pub const DATA_DIR_ENV: &str = "TRILAT_DATA_DIR";

/// The embedded data files, in the argument order of `Catalog::from_sources`.
pub const EMBEDDED_SOURCES: [&str; 4] = [PARAMETERS_JSON, SIDES_JSON, STABILIZERS_JSON, HYBRIDS_JSON];
const PARAMETERS_JSON: &str = include_str!("../data/parameters.json");
const SIDES_JSON: &str = include_str!("../data/sides.json");
const STABILIZERS_JSON: &str = include_str!("../data/stabilizers.json");
const HYBRIDS_JSON: &str = include_str!("../data/hybrids.json");

const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    S,
    T,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::S => "S",
            Family::T => "T",
        })
    }
}

impl FromStr for Family {
    type Err = TrilatError;
    fn from_str(s: &str) -> Result<Family, TrilatError> {
        match s {
            "S" | "s" => Ok(Family::S),
            "T" | "t" => Ok(Family::T),
            _ => Err(TrilatError::UnknownGroup(format!("family {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Arith {
    A,
    NA,
}

impl fmt::Display for Arith {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arith::A => "A",
            Arith::NA => "NA",
        })
    }
}

/// A sum of products, each factor in the cyclotomic text form.
type Expr = Vec<Vec<String>>;

fn eval_expr(e: &Expr, what: &str) -> Result<C, TrilatError> {
    if e.is_empty() {
        return Err(TrilatError::Data(format!("{what}: empty expression")));
    }
    let mut sum = C::zero();
    for prod in e {
        let mut acc = C::one();
        for f in prod {
            let x = cyclo::parse(f).map_err(|err| TrilatError::Data(format!("{what}: {f:?}: {err}")))?;
            acc = acc.checked_mul(&x)?;
        }
        sum = sum.checked_add(&acc)?;
    }
    Ok(sum)
}

fn de_rational<'de, D: serde::Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    let s = String::deserialize(d)?;
    parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: num_bigint::BigInt = num.parse().ok()?;
    let den: num_bigint::BigInt = den.parse().ok()?;
    if den == num_bigint::BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(num, den))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamFile {
    schema_version: u32,
    #[allow(dead_code)]
    note: Option<String>,
    parameters: Vec<ParamRaw>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamRaw {
    name: String,
    family: Family,
    closed_form: String,
    p: Vec<u32>,
    tau: Expr,
    rho: Option<Expr>,
    sigma: Option<Expr>,
    printed: Option<PrintedRaw>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PrintedRaw {
    closed_form: String,
    sigma: Expr,
}

/// One row of the parameter table.
#[derive(Clone, Debug)]
pub struct Parameter {
    pub name: String,
    pub family: Family,
    pub closed_form: String,
    pub p_values: Vec<u32>,
    pub rho: C,
    pub sigma: C,
    pub tau: C,
    /// A printed value of σ that differs from the one used.
    pub printed: Option<(String, C)>,
}

impl Parameter {
    /// The same parameter with the printed σ in place of the used one.
    pub fn as_printed(&self) -> Option<Parameter> {
        let (form, sigma) = self.printed.as_ref()?;
        Some(Parameter { closed_form: form.clone(), sigma: sigma.clone(), printed: None, ..self.clone() })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SideFile {
    schema_version: u32,
    #[allow(dead_code)]
    note: Option<String>,
    sides: BTreeMap<String, Vec<SideRaw>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SideRaw {
    braid: u32,
    a: Word,
    b: Word,
    c: Word,
    p_orbit: u32,
    top_truncated: Vec<u32>,
    alt: Option<SideAlt>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SideAlt {
    a: Word,
    b: Word,
    c: Word,
}

/// `[n] a; b, c`: a side in the mirror of `a` cut out by the braiding pair
/// `b`, `c` with `br_n(b, c)`.
#[derive(Clone, Debug, Serialize)]
pub struct SideDescriptor {
    pub braid_length: u32,
    pub base_word: Word,
    pub b_word: Word,
    pub c_word: Word,
    pub p_orbit: u32,
    pub truncated_for: Vec<u32>,
    /// The same side written in another conjugate form.
    pub alt: Option<[Word; 3]>,
}

impl SideDescriptor {
    pub fn label(&self) -> String {
        format!("[{}] {}; {}, {}", self.braid_length, self.base_word, self.b_word, self.c_word)
    }

    pub fn top_truncated(&self, p: u32) -> bool {
        self.truncated_for.contains(&p)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StabFile {
    schema_version: u32,
    #[allow(dead_code)]
    note: Option<String>,
    blocks: Vec<BlockRaw>,
    cycles: Vec<CycleData>,
    name_variants: Vec<NameVariant>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockRaw {
    id: String,
    param: String,
    reflection: Word,
    header_reflection: Option<Word>,
    pair: Option<[Word; 2]>,
    header_p: Vec<u32>,
    generators: Vec<Word>,
    corrected_generators: Option<Vec<Word>>,
    rows: Vec<RowRaw>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RowRaw {
    p: u32,
    fixstab: u32,
    signature: FuchsianSignature,
    #[serde(deserialize_with = "de_rational")]
    chi: BigRational,
    #[serde(deserialize_with = "de_rational")]
    area: BigRational,
    field: FieldClaim,
    arith: Arith,
    #[serde(default)]
    disputed: Vec<String>,
}

/// One mirror orbit of a stabilizer table.
#[derive(Clone, Debug)]
pub struct StabilizerBlock {
    pub id: String,
    pub param: String,
    pub reflection: Word,
    /// Reflection word as printed in the block header when it differs.
    pub header_reflection: Option<Word>,
    /// Two reflections whose mirrors have this mirror as common perpendicular.
    pub pair: Option<[Word; 2]>,
    pub header_p: Vec<u32>,
    pub generators: Vec<Word>,
    /// Replacement generators used when the printed ones miss the mirror.
    pub corrected_generators: Option<Vec<Word>>,
    pub rows: Vec<StabilizerRow>,
}

/// A stabilizer table cell group for one value of p.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizerRow {
    pub block_id: String,
    pub param: String,
    pub p: u32,
    pub reflection_word: Word,
    pub pair: Option<[Word; 2]>,
    pub generator_words: Vec<Word>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrected_generators: Option<Vec<Word>>,
    pub fixstab_order: u32,
    pub signature: FuchsianSignature,
    #[serde(serialize_with = "ser_rational")]
    pub chi: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub area_over_pi: BigRational,
    pub tracefield_spec: FieldClaim,
    pub arithmetic: Arith,
    /// Cells whose printed value disagrees with a neighbouring row; a
    /// mismatch there is reported as a finding.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub disputed: Vec<String>,
}

pub(crate) fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(q)
}

/// A vertex cycle on a mirror together with its cycle transformation.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleData {
    pub id: String,
    pub param: String,
    pub mirror: Word,
    pub labels: Vec<Word>,
    pub printed_first_label: Word,
    pub maps: Vec<Word>,
    pub printed_third_map: Word,
    pub transform: Word,
    pub conjugate: Word,
    pub conjugator: Word,
    pub rotation_orders: BTreeMap<u32, ConeOrder>,
}

/// A generator name printed one way and read another.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct NameVariant {
    pub block: String,
    pub printed: Word,
    pub used: Word,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HybridFile {
    schema_version: u32,
    #[allow(dead_code)]
    note: Option<String>,
    claims: Vec<HybridClaim>,
}

/// Two reflections whose mirror stabilizers are claimed to generate the group.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct HybridClaim {
    pub id: String,
    pub param: String,
    pub p: Vec<u32>,
    pub reflections: [Word; 2],
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub parameters: Vec<Parameter>,
    pub sides: BTreeMap<String, Vec<SideDescriptor>>,
    pub blocks: Vec<StabilizerBlock>,
    pub cycles: Vec<CycleData>,
    pub name_variants: Vec<NameVariant>,
    pub hybrids: Vec<HybridClaim>,
}

fn json<'a, T: Deserialize<'a>>(src: &'a str, file: &str) -> Result<T, TrilatError> {
    serde_json::from_str(src).map_err(|e| TrilatError::Data(format!("{file}: {e}")))
}

fn check_version(v: u32, file: &str) -> Result<(), TrilatError> {
    if v != SCHEMA_VERSION {
        return Err(TrilatError::Data(format!("{file}: schema_version {v}, expected {SCHEMA_VERSION}")));
    }
    Ok(())
}

impl Catalog {
    pub fn from_sources(params: &str, sides: &str, stabs: &str, hybrids: &str) -> Result<Catalog, TrilatError> {
        let pf: ParamFile = json(params, "parameters.json")?;
        check_version(pf.schema_version, "parameters.json")?;
        let mut parameters = Vec::new();
        for r in pf.parameters {
            if parameters.iter().any(|q: &Parameter| q.name == r.name) {
                return Err(TrilatError::Data(format!("duplicate parameter {}", r.name)));
            }
            if r.p.is_empty() || r.p.iter().any(|&p| p < 2) {
                return Err(TrilatError::Data(format!("{}: p values must be at least 2", r.name)));
            }
            let tau = eval_expr(&r.tau, &r.name)?;
            let (rho, sigma) = match (r.family, r.rho, r.sigma) {
                (Family::S, None, None) => (tau.clone(), tau.clone()),
                (Family::T, Some(rho), Some(sigma)) => (eval_expr(&rho, &r.name)?, eval_expr(&sigma, &r.name)?),
                _ => {
                    return Err(TrilatError::Data(format!(
                        "{}: S parameters give tau only, T parameters give rho, sigma and tau",
                        r.name
                    )))
                }
            };
            let printed = match r.printed {
                Some(pr) => Some((pr.closed_form, eval_expr(&pr.sigma, &r.name)?)),
                None => None,
            };
            parameters.push(Parameter {
                printed,
                name: r.name,
                family: r.family,
                closed_form: r.closed_form,
                p_values: r.p,
                rho,
                sigma,
                tau,
            });
        }
        let known = |name: &str| parameters.iter().find(|q| q.name == name);

        let sf: SideFile = json(sides, "sides.json")?;
        check_version(sf.schema_version, "sides.json")?;
        let mut side_map = BTreeMap::new();
        for (name, rows) in sf.sides {
            if known(&name).is_none() {
                return Err(TrilatError::Data(format!("sides.json: unknown parameter {name}")));
            }
            let rows = rows
                .into_iter()
                .map(|r| SideDescriptor {
                    braid_length: r.braid,
                    base_word: r.a,
                    b_word: r.b,
                    c_word: r.c,
                    p_orbit: r.p_orbit,
                    truncated_for: r.top_truncated,
                    alt: r.alt.map(|a| [a.a, a.b, a.c]),
                })
                .collect();
            side_map.insert(name, rows);
        }

        let st: StabFile = json(stabs, "stabilizers.json")?;
        check_version(st.schema_version, "stabilizers.json")?;
        let mut blocks: Vec<StabilizerBlock> = Vec::new();
        for b in st.blocks {
            let Some(param) = known(&b.param) else {
                return Err(TrilatError::Data(format!("{}: unknown parameter {}", b.id, b.param)));
            };
            if blocks.iter().any(|x| x.id == b.id) {
                return Err(TrilatError::Data(format!("duplicate block id {}", b.id)));
            }
            let mut rows = Vec::new();
            for r in b.rows {
                if !param.p_values.contains(&r.p) {
                    return Err(TrilatError::Data(format!("{}: p = {} is not listed for {}", b.id, r.p, b.param)));
                }
                if rows.iter().any(|x: &StabilizerRow| x.p == r.p) {
                    return Err(TrilatError::Data(format!("{}: duplicate row p = {}", b.id, r.p)));
                }
                if let Some(c) = r.disputed.iter().find(|c| c.as_str() != "field") {
                    return Err(TrilatError::Data(format!("{}: cannot dispute cell {c}", b.id)));
                }
                rows.push(StabilizerRow {
                    block_id: b.id.clone(),
                    param: b.param.clone(),
                    p: r.p,
                    reflection_word: b.reflection.clone(),
                    pair: b.pair.clone(),
                    generator_words: b.generators.clone(),
                    corrected_generators: b.corrected_generators.clone(),
                    fixstab_order: r.fixstab,
                    signature: r.signature,
                    chi: r.chi,
                    area_over_pi: r.area,
                    tracefield_spec: r.field,
                    arithmetic: r.arith,
                    disputed: r.disputed,
                });
            }
            blocks.push(StabilizerBlock {
                id: b.id,
                param: b.param,
                reflection: b.reflection,
                header_reflection: b.header_reflection,
                pair: b.pair,
                header_p: b.header_p,
                corrected_generators: b.corrected_generators,
                generators: b.generators,
                rows,
            });
        }
        for v in &st.name_variants {
            if !blocks.iter().any(|b| b.id == v.block) {
                return Err(TrilatError::Data(format!("name variant for unknown block {}", v.block)));
            }
        }
        for c in &st.cycles {
            if known(&c.param).is_none() {
                return Err(TrilatError::Data(format!("{}: unknown parameter {}", c.id, c.param)));
            }
        }

        let hf: HybridFile = json(hybrids, "hybrids.json")?;
        check_version(hf.schema_version, "hybrids.json")?;
        for h in &hf.claims {
            if known(&h.param).is_none() {
                return Err(TrilatError::Data(format!("{}: unknown parameter {}", h.id, h.param)));
            }
        }

        Ok(Catalog { parameters, sides: side_map, blocks, cycles: st.cycles, name_variants: st.name_variants, hybrids: hf.claims })
    }

    pub fn embedded() -> Result<Catalog, TrilatError> {
        Catalog::from_sources(PARAMETERS_JSON, SIDES_JSON, STABILIZERS_JSON, HYBRIDS_JSON)
    }

    pub fn from_dir(dir: &std::path::Path) -> Result<Catalog, TrilatError> {
        let read = |name: &str| {
            std::fs::read_to_string(dir.join(name))
                .map_err(|e| TrilatError::Data(format!("{}: {e}", dir.join(name).display())))
        };
        Catalog::from_sources(
            &read("parameters.json")?,
            &read("sides.json")?,
            &read("stabilizers.json")?,
            &read("hybrids.json")?,
        )
    }

    pub fn parameter(&self, name: &str) -> Result<&Parameter, TrilatError> {
        self.parameters
            .iter()
            .find(|q| q.name == name)
            .ok_or_else(|| TrilatError::UnknownGroup(format!("parameter {name:?}")))
    }

    /// Every (family, parameter, p) listed in the parameter table.
    pub fn triples(&self) -> Vec<(Family, String, u32)> {
        self.parameters
            .iter()
            .flat_map(|q| q.p_values.iter().map(move |&p| (q.family, q.name.clone(), p)))
            .collect()
    }

    pub fn build(&self, family: Family, param: &str, p: u32) -> Result<GroupInstance, TrilatError> {
        let q = self.parameter(param)?;
        if q.family != family || !q.p_values.contains(&p) {
            return Err(TrilatError::UnknownGroup(format!("{family}({p},{param}) is not in the parameter table")));
        }
        GroupInstance::construct(q, p)
    }

    /// Build for any p ≥ 2, bypassing the table lookup. The form must still
    /// have signature (2,1).
    pub fn build_unlisted(&self, param: &str, p: u32) -> Result<GroupInstance, TrilatError> {
        let q = self.parameter(param)?;
        if p < 2 {
            return Err(TrilatError::UnknownGroup(format!("p = {p}")));
        }
        GroupInstance::construct(q, p)
    }

    pub fn sides(&self, g: &GroupInstance) -> &[SideDescriptor] {
        self.sides.get(&g.param).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn stabilizer_rows(&self, g: &GroupInstance) -> Vec<&StabilizerRow> {
        self.blocks
            .iter()
            .filter(|b| b.param == g.param)
            .flat_map(|b| b.rows.iter().filter(|r| r.p == g.p))
            .collect()
    }

    pub fn block(&self, id: &str) -> Option<&StabilizerBlock> {
        self.blocks.iter().find(|b| b.id == id)
    }
}

static CATALOG: OnceLock<Result<Catalog, TrilatError>> = OnceLock::new();

/// The process-wide catalog: the directory in `TRILAT_DATA_DIR` if set,
/// otherwise the embedded data.
pub fn catalog() -> Result<&'static Catalog, TrilatError> {
    CATALOG
        .get_or_init(|| match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => Catalog::from_dir(std::path::Path::new(&dir)),
            None => Catalog::embedded(),
        })
        .as_ref()
        .map_err(Clone::clone)
}

/// A constructed group with its form and generator matrices.
#[derive(Clone, Debug)]
pub struct GroupInstance {
    pub family: Family,
    pub param: String,
    pub p: u32,
    /// u = ζ_{3p}
    pub u: C,
    pub rho: C,
    pub sigma: C,
    pub tau: C,
    pub form: HermitianForm,
    pub r: [Mat3; 3],
    r_inv: [Mat3; 3],
    j: Option<(Mat3, Mat3)>,
    pmat: Option<(Mat3, Mat3)>,
    q: (Mat3, Mat3),
}

/// Hermitian matrix of the form for parameters (ρ, σ, τ) and u.
pub fn form_matrix(u: &C, rho: &C, sigma: &C, tau: &C) -> Mat3 {
    let ub = u.conjugate();
    let u3 = u.pow(3);
    let alpha = &(&C::from_integer(2) - &u3) - &u3.conjugate();
    let k = &ub.pow(2) - u;
    let b1 = &k * rho;
    let b2 = &k * sigma;
    let b3 = &k * tau;
    Mat3([
        [alpha.clone(), b1.clone(), b3.conjugate()],
        [b1.conjugate(), alpha.clone(), b2.clone()],
        [b3, b2.conjugate(), alpha],
    ])
}

/// The three generating reflections for parameters (ρ, σ, τ) and u.
pub fn reflections(u: &C, rho: &C, sigma: &C, tau: &C) -> [Mat3; 3] {
    let z = C::zero;
    let ub = u.conjugate();
    let u2 = u.pow(2);
    let r1 = Mat3([
        [u2.clone(), rho.clone(), -&(u * &tau.conjugate())],
        [z(), ub.clone(), z()],
        [z(), z(), ub.clone()],
    ]);
    let r2 = Mat3([
        [ub.clone(), z(), z()],
        [-&(u * &rho.conjugate()), u2.clone(), sigma.clone()],
        [z(), z(), ub.clone()],
    ]);
    let r3 = Mat3([
        [ub.clone(), z(), z()],
        [z(), ub.clone(), z()],
        [tau.clone(), -&(u * &sigma.conjugate()), u2],
    ]);
    [r1, r2, r3]
}

/// Cyclic permutation e1 → e2 → e3 → e1.
pub fn cyclic_j() -> Mat3 {
    Mat3::from_fn(|i, j| if i == (j + 1) % 3 { C::one() } else { C::zero() })
}

fn invariant(ok: bool, what: impl FnOnce() -> String) -> Result<(), TrilatError> {
    if ok {
        Ok(())
    } else {
        Err(TrilatError::Invariant(what()))
    }
}

impl GroupInstance {
    /// Build the group for any p, checking the form signature and the
    /// generator relations.
    pub fn construct(q: &Parameter, p: u32) -> Result<GroupInstance, TrilatError> {
        let u = C::try_root_of_unity(3 * p, 1)?;
        let form = HermitianForm::new(form_matrix(&u, &q.rho, &q.sigma, &q.tau))?;
        let id = format!("{}({},{})", q.family, p, q.name);
        invariant(form.signature == Signature::LORENTZ, || {
            format!("{id}: form has signature {}, not (2,0,1)", form.signature)
        })?;
        let r = reflections(&u, &q.rho, &q.sigma, &q.tau);
        let mut r_inv = Vec::new();
        for (k, m) in r.iter().enumerate() {
            invariant(m.det().is_one(), || format!("{id}: det R{} is not 1", k + 1))?;
            invariant(form.preserves(m), || format!("{id}: R{} does not preserve the form", k + 1))?;
            invariant(projective_order_is(m, p), || format!("{id}: R{} does not have order {p}", k + 1))?;
            r_inv.push(m.adjugate());
        }
        let r_inv: [Mat3; 3] = r_inv.try_into().expect("three generators");
        let (j, pmat) = match q.family {
            Family::S => {
                let j = cyclic_j();
                let j_inv = j.adjugate();
                invariant(form.preserves(&j), || format!("{id}: J does not preserve the form"))?;
                for k in 0..3 {
                    let conj = &(&j * &r[k]) * &j_inv;
                    invariant(conj == r[(k + 1) % 3], || format!("{id}: J R{} J^-1 is not R{}", k + 1, (k + 1) % 3 + 1))?;
                }
                let pm = &r[0] * &j;
                let pm_inv = &j_inv * &r_inv[0];
                (Some((j, j_inv)), Some((pm, pm_inv)))
            }
            Family::T => (None, None),
        };
        let qm = &(&r[0] * &r[1]) * &r[2];
        let qm_inv = &(&r_inv[2] * &r_inv[1]) * &r_inv[0];
        Ok(GroupInstance {
            family: q.family,
            param: q.name.clone(),
            p,
            u,
            rho: q.rho.clone(),
            sigma: q.sigma.clone(),
            tau: q.tau.clone(),
            form,
            r,
            r_inv,
            j,
            pmat,
            q: (qm, qm_inv),
        })
    }

    pub fn id(&self) -> String {
        format!("{}({},{})", self.family, self.p, self.param)
    }

    pub fn generator(&self, sym: Sym, inv: bool) -> Result<&Mat3, TrilatError> {
        let pair = match sym {
            Sym::R1 | Sym::R2 | Sym::R3 => {
                let k = sym as usize;
                return Ok(if inv { &self.r_inv[k] } else { &self.r[k] });
            }
            Sym::J => self.j.as_ref(),
            Sym::P => self.pmat.as_ref(),
            Sym::Q => Some(&self.q),
        };
        match pair {
            Some((m, m_inv)) => Ok(if inv { m_inv } else { m }),
            None => Err(TrilatError::Unavailable { sym: sym.as_char(), family: self.family.to_string() }),
        }
    }

    pub fn invert(&self, m: &Mat3) -> Result<Mat3, TrilatError> {
        m.inverse()
    }

    /// Parse and evaluate a word.
    pub fn eval(&self, w: &str) -> Result<Mat3, TrilatError> {
        Word::parse(w)?.evaluate(self)
    }

    /// Polar vector of the mirror of R_j, j ∈ {1, 2, 3}.
    pub fn polar(&self, j: usize) -> Vec3 {
        Vec3::basis(j - 1)
    }
}

/// m^p is scalar and m^(p/q) is not, for every prime q dividing p.
fn projective_order_is(m: &Mat3, p: u32) -> bool {
    m.pow(p).is_scalar() && prime_divisors(p).into_iter().all(|q| !m.pow(p / q).is_scalar())
}

pub(crate) fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_data_loads() {
        let c = Catalog::embedded().unwrap();
        assert_eq!(c.parameters.len(), 8);
        assert_eq!(c.triples().len(), 26);
        assert_eq!(c.blocks.len(), 29);
        assert_eq!(c.blocks.iter().map(|b| b.rows.len()).sum::<usize>(), 65);
        assert_eq!(c.sides["sigma1"].len(), 4);
        assert_eq!(c.sides["sigma1"][0].label(), "[6] 1; 2, 3");
    }

    #[test]
    fn build_rejects_unlisted() {
        let c = Catalog::embedded().unwrap();
        assert!(matches!(c.build(Family::S, "sigma1", 5), Err(TrilatError::UnknownGroup(_))));
        assert!(c.build(Family::T, "sigma1", 3).is_err());
        assert!(c.build(Family::S, "nope", 3).is_err());
    }

    #[test]
    fn sigma1_p3() {
        let c = Catalog::embedded().unwrap();
        let g = c.build(Family::S, "sigma1", 3).unwrap();
        assert_eq!(g.u, C::root_of_unity(9, 1));
        let i_sqrt2 = C::root_of_unity(8, 1) + C::root_of_unity(8, 3);
        assert_eq!(g.tau, &C::from_integer(-1) + &i_sqrt2);
        assert_eq!(g.form.matrix.0[0][0], C::from_integer(3));
        // J 1 ~J = 2
        assert_eq!(g.eval("J1~J").unwrap(), g.r[1]);
        assert_eq!(g.eval("P").unwrap(), &g.r[0] * &cyclic_j());
    }

    #[test]
    fn t_family_has_no_j() {
        let c = Catalog::embedded().unwrap();
        let g = c.build(Family::T, "E2", 4).unwrap();
        assert!(matches!(g.eval("J"), Err(TrilatError::Unavailable { .. })));
        assert!(g.eval("P").is_err());
        assert_eq!(g.eval("Q").unwrap(), &(&g.r[0] * &g.r[1]) * &g.r[2]);
        let sqrt2 = C::root_of_unity(8, 1) - C::root_of_unity(8, 3);
        assert_eq!(g.rho, sqrt2);
        assert_eq!(g.sigma, -&C::root_of_unity(3, 2));
        let printed = c.parameter("E2").unwrap().as_printed().unwrap();
        assert_eq!(printed.sigma, C::root_of_unity(3, 1));
    }

    #[test]
    fn rejects_malformed_sources() {
        let bad = PARAMETERS_JSON.replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(Catalog::from_sources(&bad, SIDES_JSON, STABILIZERS_JSON, HYBRIDS_JSON).is_err());
        assert!(Catalog::from_sources("{", SIDES_JSON, STABILIZERS_JSON, HYBRIDS_JSON).is_err());
        let bad = STABILIZERS_JSON.replacen("(0;2,2,6,6,inf,inf)", "(0;2,2,6,6,inf,", 1);
        assert!(Catalog::from_sources(PARAMETERS_JSON, SIDES_JSON, &bad, HYBRIDS_JSON).is_err());
    }
}
