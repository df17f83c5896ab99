//! Pass/fail ledger produced by every checker.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Witness};
use crate::linalg::{LinMap, SparseVec, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Serializable form of a [`Witness`]. Vectors are sparse `[index, scalar]`
/// pairs with scalars in canonical text form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessData {
    pub dims: Vec<usize>,
    pub basis_index: Option<Vec<usize>>,
    pub input: Vec<(usize, String)>,
    pub residual: Vec<(usize, String)>,
}

fn vec_data(v: &SparseVec) -> Vec<(usize, String)> {
    v.iter().map(|(i, s)| (*i, s.to_string())).collect()
}

fn vec_parse(v: &[(usize, String)]) -> Result<SparseVec, Error> {
    let entries = v.iter().map(|(i, s)| Ok((*i, s.parse()?))).collect::<Result<Vec<_>, Error>>()?;
    Ok(SparseVec::from_entries(entries))
}

impl From<&Witness> for WitnessData {
    fn from(w: &Witness) -> WitnessData {
        WitnessData {
            dims: w.dims.clone(),
            basis_index: w.basis_index.clone(),
            input: vec_data(&w.input),
            residual: vec_data(&w.residual),
        }
    }
}

impl WitnessData {
    pub fn input_vec(&self) -> Result<SparseVec, Error> {
        vec_parse(&self.input)
    }

    pub fn residual_vec(&self) -> Result<SparseVec, Error> {
        vec_parse(&self.residual)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub id: String,
    pub scope: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessData>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

/// Ordered list of check results. Entries keep insertion order, so a
/// deterministic checker yields a deterministic report.
#[derive(Clone, Debug, Default)]
pub struct Report {
    scope: String,
    pub entries: Vec<Entry>,
    /// Exploratory findings that are recorded but never count as failures.
    pub observations: Vec<Entry>,
}

/// Memo table for [`Report::eq_memo`].
pub type Memo = HashMap<Vec<usize>, (Status, Option<WitnessData>, String)>;

impl Report {
    pub fn new(scope: impl Into<String>) -> Report {
        Report { scope: scope.into(), entries: Vec::new(), observations: Vec::new() }
    }

    pub fn scope(&self) -> &str {
        &self.scope
    }

    pub fn set_scope(&mut self, scope: impl Into<String>) {
        self.scope = scope.into();
    }

    fn push(&mut self, id: String, status: Status, witness: Option<&Witness>, note: String) {
        self.entries.push(Entry { id, scope: self.scope.clone(), status, witness: witness.map(Into::into), note });
    }

    pub fn pass(&mut self, id: impl Into<String>, note: impl Into<String>) {
        self.push(id.into(), Status::Pass, None, note.into());
    }

    pub fn fail(&mut self, id: impl Into<String>, witness: Option<&Witness>, note: impl Into<String>) {
        self.push(id.into(), Status::Fail, witness, note.into());
    }

    pub fn skip(&mut self, id: impl Into<String>, note: impl Into<String>) {
        self.push(id.into(), Status::Skipped, None, note.into());
    }

    pub fn observe(&mut self, id: impl Into<String>, holds: bool, note: impl Into<String>) {
        self.observations.push(Entry {
            id: id.into(),
            scope: self.scope.clone(),
            status: if holds { Status::Pass } else { Status::Fail },
            witness: None,
            note: note.into(),
        });
    }

    /// Records `lhs = rhs` as maps on a space with tensor factors `dims`.
    /// Returns whether the equality holds.
    pub fn eq(&mut self, id: impl Into<String>, lhs: &LinMap, rhs: &LinMap, dims: &[usize]) -> bool {
        let id = id.into();
        match map_residual(lhs, rhs, dims) {
            Ok(None) => {
                self.pass(id, "");
                true
            }
            Ok(Some(w)) => {
                self.fail(id, Some(&w), "");
                false
            }
            Err(note) => {
                self.fail(id, None, note);
                false
            }
        }
    }

    /// Like [`Report::eq`], but reuses the outcome of an earlier check with
    /// the same `class` key. Callers key checks by the exact braid classes
    /// they involve, so equal keys mean identical matrix equations.
    pub fn eq_memo(
        &mut self,
        memo: &mut Memo,
        class: Vec<usize>,
        id: impl Into<String>,
        build: impl FnOnce() -> (LinMap, LinMap, Vec<usize>),
    ) -> bool {
        let id = id.into();
        if let Some((status, witness, first)) = memo.get(&class) {
            self.entries.push(Entry {
                id,
                scope: self.scope.clone(),
                status: *status,
                witness: witness.clone(),
                note: format!("same equation as {first}"),
            });
            return *status == Status::Pass;
        }
        let (lhs, rhs, dims) = build();
        let ok = self.eq(id.clone(), &lhs, &rhs, &dims);
        let e = self.entries.last().expect("just pushed");
        memo.insert(class, (e.status, e.witness.clone(), id));
        ok
    }

    /// Records a check whose outcome is a `Result`.
    pub fn outcome<T>(&mut self, id: impl Into<String>, r: &Result<T, Error>) -> bool {
        match r {
            Ok(_) => {
                self.pass(id, "");
                true
            }
            Err(e) => {
                self.fail(id, e.witness(), e.to_string());
                false
            }
        }
    }

    /// Records `a ⊆ b`; the witness is a basis vector of `a` outside `b`
    /// together with its image in the quotient by `b`.
    pub fn subspace_le(&mut self, id: impl Into<String>, a: &Subspace, b: &Subspace) -> bool {
        match subspace_gap(a, b) {
            None => {
                self.pass(id, "");
                true
            }
            Some(w) => {
                self.fail(id, Some(&w), "not contained");
                false
            }
        }
    }

    pub fn subspace_eq(&mut self, id: impl Into<String>, a: &Subspace, b: &Subspace) -> bool {
        let id = id.into();
        match subspace_gap(a, b).or_else(|| subspace_gap(b, a)) {
            None => {
                self.pass(id, "");
                true
            }
            Some(w) => {
                self.fail(id, Some(&w), "subspaces differ");
                false
            }
        }
    }

    /// Moves every entry from position `start` on to the observation list.
    pub fn demote_from(&mut self, start: usize) {
        let moved: Vec<Entry> = self.entries.drain(start..).collect();
        self.observations.extend(moved);
    }

    /// Appends the entries of `other`, keeping their own scopes.
    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
        self.observations.extend(other.observations);
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for e in &self.entries {
            match e.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        s
    }

    pub fn is_ok(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn get(&self, id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn find(&self, scope: &str, id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.scope == scope && e.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    /// Final serializable document.
    pub fn finish(&self, input_digest: &str) -> ReportDoc {
        let mut doc = ReportDoc {
            engine: format!("mbqg {}", env!("CARGO_PKG_VERSION")),
            input_digest: input_digest.to_string(),
            summary: self.summary(),
            entries: self.entries.clone(),
            observations: self.observations.clone(),
            report_digest: String::new(),
        };
        doc.report_digest = doc.compute_digest();
        doc
    }
}

/// Machine-readable report as written by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub engine: String,
    pub input_digest: String,
    pub summary: Summary,
    pub entries: Vec<Entry>,
    pub observations: Vec<Entry>,
    pub report_digest: String,
}

impl ReportDoc {
    /// SHA-256 over the canonical JSON of everything except the digest.
    pub fn compute_digest(&self) -> String {
        let mut copy = self.clone();
        copy.report_digest.clear();
        sha256_hex(serde_json::to_string(&copy).expect("report serializes").as_bytes())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// First column where `lhs` and `rhs` differ, as a witness.
pub fn map_residual(lhs: &LinMap, rhs: &LinMap, dims: &[usize]) -> Result<Option<Witness>, String> {
    if lhs.dom() != rhs.dom() || lhs.cod() != rhs.cod() {
        return Err(format!("shape mismatch: {}x{} vs {}x{}", lhs.cod(), lhs.dom(), rhs.cod(), rhs.dom()));
    }
    let dims: Vec<usize> = if dims.iter().product::<usize>() == lhs.dom() { dims.to_vec() } else { vec![lhs.dom()] };
    for j in 0..lhs.dom() {
        if lhs.column(j) != rhs.column(j) {
            let r = lhs.column(j).add_scaled(&crate::Scalar::from_int(-1), rhs.column(j));
            return Ok(Some(Witness::basis(&dims, j, r)));
        }
    }
    Ok(None)
}

fn subspace_gap(a: &Subspace, b: &Subspace) -> Option<Witness> {
    let v = a.first_outside(b)?;
    let residual = b.quotient().proj.apply(&v);
    Some(Witness::vector(&[a.ambient()], v, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eq_reports_first_differing_column() {
        let a = LinMap::from_ints(2, 2, &[&[1, 0], &[0, 1]]);
        let b = LinMap::from_ints(2, 2, &[&[1, 0], &[0, 3]]);
        let mut r = Report::new("t");
        assert!(r.eq("SAME", &a, &a, &[2]));
        assert!(!r.eq("DIFF", &a, &b, &[2]));
        let w = r.get("DIFF").unwrap().witness.as_ref().unwrap();
        assert_eq!(w.basis_index, Some(vec![1]));
        assert_eq!(w.residual, vec![(1, "-2".to_string())]);
        assert_eq!(r.summary(), Summary { pass: 1, fail: 1, skipped: 0 });
    }

    #[test]
    fn digest_is_stable() {
        let mut r = Report::new("t");
        r.pass("A", "");
        let d1 = r.finish("x");
        let d2 = r.finish("x");
        assert_eq!(d1.report_digest, d2.report_digest);
        assert_eq!(d1.report_digest, d1.compute_digest());
        assert_ne!(d1.report_digest, r.finish("y").report_digest);
    }
}
