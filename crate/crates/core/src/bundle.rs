//! JSON bundle format: a group, an optional star structure, calculi and
//! named ideals. Scalars are exact strings such as `"-3/4+1/2 i"`; JSON
//! integers are accepted on input, floating point numbers never are.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::algebra::Algebra;
use crate::calculus::FirstOrderCalculus;
use crate::error::{Error, Result};
use crate::fixtures::Fixture;
use crate::group::GroupData;
use crate::linalg::{LinMap, Semilinear, SparseVec};
use crate::scalar::Scalar;

pub const FORMAT_VERSION: u32 = 1;

/// A scalar as it appears in a bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Num(pub Scalar);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Num, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Num;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an exact scalar string or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Num, E> {
                v.parse().map(Num).map_err(|e: Error| E::custom(e))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Num, E> {
                Ok(Num(Scalar::from_int(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Num, E> {
                i64::try_from(v).map(|v| Num(Scalar::from_int(v))).map_err(|_| E::custom("integer too large"))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Num, E> {
                Err(E::custom(format!("floating point number {v} is not an exact scalar")))
            }
        }
        d.deserialize_any(V)
    }
}

/// Dense matrix, one inner list per row.
pub type Matrix = Vec<Vec<Num>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarSection {
    pub matrix: Matrix,
    pub antilinear: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSection {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis_labels: Vec<String>,
    pub unit: Matrix,
    pub mult: Matrix,
    pub coproduct: Matrix,
    pub counit: Matrix,
    pub antipode: Matrix,
    pub sigma: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<StarSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalculusSection {
    pub name: String,
    pub gdim: usize,
    pub mgl: Matrix,
    pub mgr: Matrix,
    pub d: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealSection {
    pub name: String,
    /// Generators as dense vectors of length `dim`.
    pub generators: Vec<Vec<Num>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bundle {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub group: GroupSection,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub calculi: Vec<CalculusSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ideals: Vec<IdealSection>,
}

fn to_matrix(m: &LinMap) -> Matrix {
    m.to_rows().into_iter().map(|row| row.into_iter().map(Num).collect()).collect()
}

fn from_matrix(path: &str, m: &Matrix, cod: usize, dom: usize) -> Result<LinMap> {
    let bad = |why: String| Error::DimMismatch(format!("{path}: {why}"));
    if m.len() != cod {
        return Err(bad(format!("expected {cod} rows, found {}", m.len())));
    }
    let mut rows = Vec::with_capacity(cod);
    for (i, row) in m.iter().enumerate() {
        if row.len() != dom {
            return Err(bad(format!("row {i}: expected {dom} entries, found {}", row.len())));
        }
        rows.push(row.iter().map(|x| x.0.clone()).collect());
    }
    LinMap::from_rows(cod, dom, &rows)
}

fn to_vector(v: &SparseVec, n: usize) -> Vec<Num> {
    v.to_dense(n).into_iter().map(Num).collect()
}

impl Bundle {
    /// Parses a bundle; errors carry the JSON path and position.
    pub fn parse(text: &str) -> Result<Bundle> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let b: Bundle = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                Error::Parse(inner.to_string())
            } else {
                Error::Parse(format!("field {path}: {inner}"))
            }
        })?;
        if b.format_version != FORMAT_VERSION {
            return Err(Error::Schema(format!("unsupported format_version {}", b.format_version)));
        }
        b.validate()?;
        Ok(b)
    }

    /// Checks every matrix shape against `dim` and `gdim`.
    pub fn validate(&self) -> Result<()> {
        self.group_data()?;
        self.star()?;
        for i in 0..self.calculi.len() {
            self.calculus(i)?;
        }
        for i in 0..self.ideals.len() {
            self.ideal_generators(i)?;
        }
        if !self.group.basis_labels.is_empty() && self.group.basis_labels.len() != self.group.dim {
            return Err(Error::DimMismatch("group.basis_labels: one label per basis vector".into()));
        }
        Ok(())
    }

    pub fn group_data(&self) -> Result<GroupData> {
        let n = self.group.dim;
        let s = &self.group;
        let alg = Algebra::new(from_matrix("group.unit", &s.unit, n, 1)?, from_matrix("group.mult", &s.mult, n, n * n)?)?;
        Ok(GroupData {
            alg,
            phi: from_matrix("group.coproduct", &s.coproduct, n * n, n)?,
            eps: from_matrix("group.counit", &s.counit, 1, n)?,
            kappa: from_matrix("group.antipode", &s.antipode, n, n)?,
            sigma: from_matrix("group.sigma", &s.sigma, n * n, n * n)?,
        })
    }

    pub fn star(&self) -> Result<Option<Semilinear>> {
        let n = self.group.dim;
        self.group
            .star
            .as_ref()
            .map(|st| {
                let m = from_matrix("group.star.matrix", &st.matrix, n, n)?;
                Ok(Semilinear { matrix: m, anti: st.antilinear })
            })
            .transpose()
    }

    pub fn calculus(&self, i: usize) -> Result<FirstOrderCalculus> {
        let n = self.group.dim;
        let c = &self.calculi[i];
        let p = |f: &str| format!("calculi[{i}].{f}");
        FirstOrderCalculus::new(
            n,
            c.gdim,
            from_matrix(&p("mgl"), &c.mgl, c.gdim, n * c.gdim)?,
            from_matrix(&p("mgr"), &c.mgr, c.gdim, c.gdim * n)?,
            from_matrix(&p("d"), &c.d, c.gdim, n)?,
        )
    }

    pub fn find_calculus(&self, name: &str) -> Option<usize> {
        self.calculi.iter().position(|c| c.name == name)
    }

    pub fn ideal_generators(&self, i: usize) -> Result<Vec<SparseVec>> {
        let n = self.group.dim;
        self.ideals[i]
            .generators
            .iter()
            .enumerate()
            .map(|(j, v)| {
                if v.len() != n {
                    return Err(Error::DimMismatch(format!(
                        "ideals[{i}].generators[{j}]: expected {n} entries, found {}",
                        v.len()
                    )));
                }
                Ok(SparseVec::from_dense(&v.iter().map(|x| x.0.clone()).collect::<Vec<_>>()))
            })
            .collect()
    }

    pub fn find_ideal(&self, name: &str) -> Option<usize> {
        self.ideals.iter().position(|c| c.name == name)
    }

    pub fn from_parts(name: &str, g: &GroupData, star: Option<&Semilinear>) -> Bundle {
        Bundle {
            format_version: FORMAT_VERSION,
            name: name.to_string(),
            group: GroupSection {
                dim: g.dim(),
                basis_labels: Vec::new(),
                unit: to_matrix(&g.alg.unit),
                mult: to_matrix(&g.alg.mult),
                coproduct: to_matrix(&g.phi),
                counit: to_matrix(&g.eps),
                antipode: to_matrix(&g.kappa),
                sigma: to_matrix(&g.sigma),
                star: star.map(|s| StarSection { matrix: to_matrix(&s.matrix), antilinear: s.anti }),
            },
            calculi: Vec::new(),
            ideals: Vec::new(),
        }
    }

    pub fn from_fixture(f: &Fixture) -> Bundle {
        let mut b = Bundle::from_parts(f.name, &f.group, f.star.as_ref());
        let n = f.group.dim();
        b.ideals = f
            .ideals
            .iter()
            .map(|(name, gens)| IdealSection { name: name.clone(), generators: gens.iter().map(|v| to_vector(v, n)).collect() })
            .collect();
        b
    }

    pub fn push_calculus(&mut self, name: &str, c: &FirstOrderCalculus) {
        self.calculi.push(CalculusSection {
            name: name.to_string(),
            gdim: c.gdim,
            mgl: to_matrix(&c.mgl),
            mgr: to_matrix(&c.mgr),
            d: to_matrix(&c.d),
        });
    }

    /// Canonical text: sorted keys, two-space indent, scalar rows on one
    /// line, trailing newline.
    pub fn to_canonical(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("bundle serializes"))
    }
}

/// The bundles shipped with the command-line tool, keyed by file stem.
/// Each well-formed fixture carries its ideals plus the calculus
/// reconstructed from the zero ideal; `broken` pairs `Z/2` with a calculus
/// that is not left covariant.
pub fn shipped() -> Result<Vec<(String, Bundle)>> {
    let mut out = Vec::new();
    for f in crate::fixtures::all() {
        let g = crate::group::MultiBraidedGroup::new(f.group.clone())?;
        let mut b = Bundle::from_fixture(&f);
        let c = crate::covariant::reconstruct_left(&g, &crate::linalg::Subspace::zero(g.dim()))?;
        b.push_calculus("from_zero", &c);
        out.push((f.name.to_string(), b));
    }
    let k2 = crate::fixtures::k2();
    let mut broken = Bundle::from_parts("broken", &k2.group, None);
    broken.push_calculus("one_edge", &crate::fixtures::k2_one_edge());
    out.push(("broken".to_string(), broken));
    Ok(out)
}

/// Pretty prints JSON with sorted keys, keeping arrays of scalars on a
/// single line.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_array() && !x.is_object()),
        _ => false,
    }
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&serde_json::to_string(k).expect("string"));
                out.push_str(": ");
                write_value(&map[*k], depth + 1, out);
                if i + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        Value::Array(items) if !items.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(x, depth + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(|x| serde_json::to_string(x).expect("scalar")).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        other => out.push_str(&serde_json::to_string(other).expect("scalar")),
    }
}
