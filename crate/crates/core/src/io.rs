//! JSON file formats.
//!
//! * group: `{"cayley": [[..]], "labels"?: [..]}`, `{"abelian": [d₁, ..]}`,
//!   `{"named": "quaternion" | "symmetric3" | ..}`, `{"generators_file": path}`
//!   or `{"generators": <generator object>}`.
//! * generators: `{"degree", "cyclotomic_order", "generators", "labels"?}`;
//!   each matrix entry is a cyclotomic literal: an array of `"num/den"`
//!   coefficients of `1, ζ, ζ², …`, or a bare rational string or integer.
//! * cocycle: `{"modulus", "group": path | group object, "table"}`.
//! * model: `{"generators_file" | "generators", "threshold"}` or the same
//!   with `"arrangement": [[vector, ..], ..]` instead of a threshold.
//!
//! Relative paths inside a file are resolved against that file's directory.
//! Errors carry a JSON pointer to the offending value.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cocycle::{Cocycle2, GSet};
use crate::cyclo::{CycloMatrix, CycloNumber, Subspace};
use crate::error::{Error, Result};
use crate::grp::{named, FiniteGroup, DEFAULT_CLOSURE_BOUND};
use crate::rep::{build_model, matrix_closure, LinearActionModel, MatrixRep};

/// Contents of a file together with its SHA-256 digest.
#[derive(Clone, Debug)]
pub struct Document {
    pub path: PathBuf,
    pub value: Value,
    pub digest: String,
}

impl Document {
    pub fn read(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        let value: Value = serde_json::from_slice(&bytes).map_err(|e| Error::Malformed {
            pointer: format!("{}:{}:{}", path.display(), e.line(), e.column()),
            message: e.to_string(),
        })?;
        Ok(Document {
            path: path.to_path_buf(),
            value,
            digest: sha256_hex(&bytes),
        })
    }

    fn dir(&self) -> PathBuf {
        self.path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default()
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn field<'a>(v: &'a Value, ptr: &str, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::malformed(ptr, format!("missing field {key:?}")))
}

fn as_u64(v: &Value, ptr: &str) -> Result<u64> {
    match v {
        Value::Number(n) => n.as_u64(),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
    .ok_or_else(|| Error::malformed(ptr, "expected a nonnegative integer"))
}

fn as_array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::malformed(ptr, "expected an array"))
}

fn u64_list(v: &Value, ptr: &str) -> Result<Vec<u64>> {
    as_array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_u64(x, &format!("{ptr}/{i}")))
        .collect()
}

fn usize_table(v: &Value, ptr: &str) -> Result<Vec<Vec<usize>>> {
    as_array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            Ok(u64_list(row, &format!("{ptr}/{i}"))?
                .into_iter()
                .map(|x| x as usize)
                .collect())
        })
        .collect()
}

fn string_list(v: &Value, ptr: &str) -> Result<Vec<String>> {
    as_array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::malformed(format!("{ptr}/{i}"), "expected a string"))
        })
        .collect()
}

fn relocate(e: Error, ptr: &str) -> Error {
    match e {
        Error::Malformed { pointer, message } => Error::Malformed {
            pointer: format!("{ptr}{pointer}"),
            message,
        },
        other => other,
    }
}

pub fn decode_cyclo(v: &Value, order: u32, ptr: &str) -> Result<CycloNumber> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|k| CycloNumber::from_int(order, k))
            .ok_or_else(|| Error::malformed(ptr, "expected an integer")),
        Value::String(s) => {
            let q = crate::cyclo::parse_rational(s).map_err(|m| Error::malformed(ptr, m))?;
            Ok(CycloNumber::from_rational(order, q))
        }
        Value::Array(items) => {
            if items.len() > order as usize {
                return Err(Error::malformed(
                    ptr,
                    format!("{} coefficients for cyclotomic order {order}", items.len()),
                ));
            }
            let mut lit = string_list(v, ptr)?;
            lit.resize(order as usize, "0".into());
            CycloNumber::from_literal(order, &lit).map_err(|e| relocate(e, ptr))
        }
        _ => Err(Error::malformed(ptr, "expected a cyclotomic literal")),
    }
}

pub fn encode_cyclo(x: &CycloNumber) -> Value {
    json!(x.to_literal())
}

pub fn decode_vector(v: &Value, order: u32, ptr: &str) -> Result<Vec<CycloNumber>> {
    as_array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, x)| decode_cyclo(x, order, &format!("{ptr}/{i}")))
        .collect()
}

pub fn decode_matrix(v: &Value, d: usize, order: u32, ptr: &str) -> Result<CycloMatrix> {
    let rows = as_array(v, ptr)?;
    if rows.len() != d {
        return Err(Error::malformed(ptr, format!("expected {d} rows")));
    }
    let mut data = Vec::with_capacity(d * d);
    for (i, row) in rows.iter().enumerate() {
        let row = decode_vector(row, order, &format!("{ptr}/{i}"))?;
        if row.len() != d {
            return Err(Error::malformed(
                format!("{ptr}/{i}"),
                format!("expected {d} entries"),
            ));
        }
        data.extend(row);
    }
    CycloMatrix::new(d, d, order, data)
}

pub fn encode_matrix(m: &CycloMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(encode_cyclo).collect()))
            .collect(),
    )
}

/// Matrix generators of a group.
#[derive(Clone, Debug)]
pub struct GeneratorFile {
    pub degree: usize,
    pub cyclotomic_order: u32,
    pub generators: Vec<CycloMatrix>,
    pub labels: Option<Vec<String>>,
}

impl GeneratorFile {
    pub fn decode(v: &Value, ptr: &str) -> Result<Self> {
        let degree = as_u64(field(v, ptr, "degree")?, &format!("{ptr}/degree"))? as usize;
        let order = as_u64(
            field(v, ptr, "cyclotomic_order")?,
            &format!("{ptr}/cyclotomic_order"),
        )?;
        if order == 0 || order > u64::from(crate::cyclo::MAX_CYCLO_ORDER) {
            return Err(Error::malformed(
                format!("{ptr}/cyclotomic_order"),
                "out of range",
            ));
        }
        let order = order as u32;
        let gens_ptr = format!("{ptr}/generators");
        let generators = as_array(field(v, ptr, "generators")?, &gens_ptr)?
            .iter()
            .enumerate()
            .map(|(i, m)| decode_matrix(m, degree, order, &format!("{gens_ptr}/{i}")))
            .collect::<Result<Vec<_>>>()?;
        let labels = v
            .get("labels")
            .map(|l| string_list(l, &format!("{ptr}/labels")))
            .transpose()?;
        Ok(GeneratorFile {
            degree,
            cyclotomic_order: order,
            generators,
            labels,
        })
    }

    pub fn encode(&self) -> Value {
        let mut v = json!({
            "degree": self.degree,
            "cyclotomic_order": self.cyclotomic_order,
            "generators": self.generators.iter().map(encode_matrix).collect::<Vec<_>>(),
        });
        if let Some(l) = &self.labels {
            v["labels"] = json!(l);
        }
        v
    }

    /// Closes the generators; with labels, every element is named by a
    /// shortest word in them.
    pub fn close(&self, bound: usize) -> Result<MatrixRep> {
        let mut rep = matrix_closure(&self.generators, self.cyclotomic_order, bound)?;
        if let Some(names) = &self.labels {
            if names.len() != self.generators.len() {
                return Err(Error::malformed(
                    "/labels",
                    "one label per generator expected",
                ));
            }
            let g = rep.group();
            let gen_names: Vec<String> = g
                .generators()
                .iter()
                .map(|&s| {
                    let i = self
                        .generators
                        .iter()
                        .position(|m| rep.find(m) == Some(s))
                        .unwrap();
                    names[i].clone()
                })
                .collect();
            let tree = g.spanning_tree();
            let mut words = vec![String::from("1"); g.order()];
            for x in g.bfs_order().into_iter().skip(1) {
                let (p, k) = tree[x].unwrap();
                words[x] = if p == 0 {
                    gen_names[k].clone()
                } else {
                    format!("{}*{}", words[p], gen_names[k])
                };
            }
            rep.relabel(words)?;
        }
        Ok(rep)
    }
}

/// A group read from a file: either a bare table or a matrix group.
#[derive(Clone, Debug)]
pub enum LoadedGroup {
    Table(FiniteGroup),
    Matrix(MatrixRep),
}

impl LoadedGroup {
    pub fn group(&self) -> &FiniteGroup {
        match self {
            LoadedGroup::Table(g) => g,
            LoadedGroup::Matrix(r) => r.group(),
        }
    }

    pub fn into_rep(self) -> Option<MatrixRep> {
        match self {
            LoadedGroup::Matrix(r) => Some(r),
            LoadedGroup::Table(_) => None,
        }
    }
}

fn closure_bound() -> usize {
    DEFAULT_CLOSURE_BOUND.min(crate::grp::max_order())
}

/// Decodes a group object; `dir` resolves relative paths.
pub fn decode_group(v: &Value, dir: &Path, ptr: &str) -> Result<LoadedGroup> {
    if let Some(path) = v.as_str() {
        let doc = Document::read(&dir.join(path))?;
        return decode_group(&doc.value, &doc.dir(), "");
    }
    if let Some(t) = v.get("cayley") {
        let table = usize_table(t, &format!("{ptr}/cayley"))?;
        if table.len() > crate::grp::max_order() {
            return Err(Error::OrderBoundExceeded {
                bound: crate::grp::max_order(),
            });
        }
        let mut g = FiniteGroup::from_cayley(&table)?;
        if let Some(l) = v.get("labels") {
            g = g.with_labels(string_list(l, &format!("{ptr}/labels"))?)?;
        }
        return Ok(LoadedGroup::Table(g));
    }
    if let Some(f) = v.get("abelian") {
        let factors = u64_list(f, &format!("{ptr}/abelian"))?;
        if factors.contains(&0) {
            return Err(Error::malformed(
                format!("{ptr}/abelian"),
                "factors must be positive",
            ));
        }
        let order = factors.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d));
        if order.is_none_or(|n| n as usize > crate::grp::max_order()) {
            return Err(Error::OrderBoundExceeded {
                bound: crate::grp::max_order(),
            });
        }
        return Ok(LoadedGroup::Table(named::abelian(&factors)));
    }
    if let Some(n) = v.get("named") {
        let name = n
            .as_str()
            .ok_or_else(|| Error::malformed(format!("{ptr}/named"), "expected a string"))?;
        let g = match name {
            "quaternion" | "Q8" => named::quaternion(),
            s if s.starts_with("symmetric") => named::symmetric(parse_suffix(s, "symmetric", ptr)?),
            s if s.starts_with("dihedral") => named::dihedral(parse_suffix(s, "dihedral", ptr)?),
            s if s.starts_with("cyclic") => named::cyclic(parse_suffix(s, "cyclic", ptr)? as u64),
            other => {
                return Err(Error::malformed(
                    format!("{ptr}/named"),
                    format!("unknown group {other:?}"),
                ))
            }
        };
        return Ok(LoadedGroup::Table(g));
    }
    let (gens, _) = decode_generator_ref(v, dir, ptr)?;
    Ok(LoadedGroup::Matrix(gens.close(closure_bound())?))
}

fn parse_suffix(s: &str, prefix: &str, ptr: &str) -> Result<usize> {
    s[prefix.len()..]
        .parse()
        .ok()
        .filter(|&k| (1..=7).contains(&k))
        .ok_or_else(|| Error::malformed(format!("{ptr}/named"), format!("bad parameter in {s:?}")))
}

/// `"generators_file": path` or `"generators": {..}`, returning the file's
/// digest when one was read.
fn decode_generator_ref(
    v: &Value,
    dir: &Path,
    ptr: &str,
) -> Result<(GeneratorFile, Option<String>)> {
    if let Some(p) = v.get("generators_file") {
        let path = p
            .as_str()
            .ok_or_else(|| Error::malformed(format!("{ptr}/generators_file"), "expected a path"))?;
        let doc = Document::read(&dir.join(path))?;
        return Ok((GeneratorFile::decode(&doc.value, "")?, Some(doc.digest)));
    }
    if let Some(g) = v.get("generators") {
        return Ok((
            GeneratorFile::decode(g, &format!("{ptr}/generators"))?,
            None,
        ));
    }
    Err(Error::malformed(
        ptr,
        "expected one of cayley, abelian, named, generators, generators_file",
    ))
}

pub fn encode_group(g: &FiniteGroup) -> Value {
    let mut v = json!({ "order": g.order(), "cayley": g.table() });
    if let Some(l) = g.labels() {
        v["labels"] = json!(l);
    }
    v
}

/// A cocycle file with its group.
pub struct LoadedCocycle {
    pub group: LoadedGroup,
    pub cocycle: Cocycle2,
}

pub fn decode_cocycle(doc: &Document) -> Result<LoadedCocycle> {
    let v = &doc.value;
    let modulus = as_u64(field(v, "", "modulus")?, "/modulus")?;
    let group = decode_group(field(v, "", "group")?, &doc.dir(), "/group")?;
    let table = as_array(field(v, "", "table")?, "/table")?
        .iter()
        .enumerate()
        .map(|(i, row)| u64_list(row, &format!("/table/{i}")))
        .collect::<Result<Vec<_>>>()?;
    let cocycle = Cocycle2::new(modulus, table)?;
    if cocycle.order() != group.group().order() {
        return Err(Error::malformed(
            "/table",
            format!(
                "table has {} rows for a group of order {}",
                cocycle.order(),
                group.group().order()
            ),
        ));
    }
    Ok(LoadedCocycle { group, cocycle })
}

/// Cocycle object; `group` is either a path or an inline group object.
pub fn encode_cocycle(c: &Cocycle2, group: Value) -> Value {
    json!({ "modulus": c.modulus(), "group": group, "table": c.rows() })
}

pub fn decode_subspace(v: &Value, ambient: usize, order: u32, ptr: &str) -> Result<Subspace> {
    let vectors = as_array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let vec = decode_vector(x, order, &format!("{ptr}/{i}"))?;
            if vec.len() != ambient {
                return Err(Error::malformed(
                    format!("{ptr}/{i}"),
                    format!("expected {ambient} entries"),
                ));
            }
            Ok(vec)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Subspace::from_spanning(ambient, order, vectors))
}

pub fn encode_subspace(s: &Subspace) -> Value {
    Value::Array(
        s.basis()
            .iter()
            .map(|v| Value::Array(v.iter().map(encode_cyclo).collect()))
            .collect(),
    )
}

/// Human-readable basis, one string per vector.
pub fn display_subspace(s: &Subspace) -> Value {
    json!(s
        .basis()
        .iter()
        .map(|v| format!(
            "({})",
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ))
        .collect::<Vec<_>>())
}

pub fn decode_model(doc: &Document) -> Result<LinearActionModel> {
    let v = &doc.value;
    let (gens, _) = decode_generator_ref(v, &doc.dir(), "")?;
    let rep = gens.close(closure_bound())?;
    match (v.get("threshold"), v.get("arrangement")) {
        (Some(t), None) => {
            let t = as_u64(t, "/threshold")? as usize;
            if t == 0 {
                return Err(Error::malformed(
                    "/threshold",
                    "threshold must be at least 1",
                ));
            }
            build_model(rep, t)
        }
        (None, Some(a)) => {
            let (d, n) = (rep.degree(), rep.order());
            let arrangement = as_array(a, "/arrangement")?
                .iter()
                .enumerate()
                .map(|(i, s)| decode_subspace(s, d, n, &format!("/arrangement/{i}")))
                .collect::<Result<Vec<_>>>()?;
            LinearActionModel::with_arrangement(rep, arrangement)
        }
        _ => Err(Error::malformed(
            "",
            "expected exactly one of threshold, arrangement",
        )),
    }
}

/// `{"action": [[g·x for x] for g]}`, or absent for the one-point set.
pub fn decode_gset(v: &Value, g: &FiniteGroup) -> Result<GSet> {
    let action = usize_table(field(v, "", "action")?, "/action")?;
    GSet::new(g, action)
}

/// Writes pretty JSON with a trailing newline.
pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}
