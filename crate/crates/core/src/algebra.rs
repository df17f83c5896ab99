//! Finite-dimensional unital associative algebras given by structure
//! constants.

use crate::error::{Error, Result};
use crate::linalg::{LinMap, SparseVec};
use crate::report::Report;
use crate::id;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    /// `1 -> dim`, the unit element as a column.
    pub unit: LinMap,
    /// `dim ⊗ dim -> dim`.
    pub mult: LinMap,
}

impl Algebra {
    pub fn new(unit: LinMap, mult: LinMap) -> Result<Algebra> {
        let n = unit.cod();
        if unit.dom() != 1 || mult.cod() != n || mult.dom() != n * n {
            return Err(Error::DimMismatch(format!(
                "algebra of dim {n}: unit is {}x{}, mult is {}x{}",
                unit.cod(),
                unit.dom(),
                mult.cod(),
                mult.dom()
            )));
        }
        Ok(Algebra { unit, mult })
    }

    pub fn dim(&self) -> usize {
        self.unit.cod()
    }

    pub fn one(&self) -> SparseVec {
        self.unit.column(0).clone()
    }

    pub fn multiply(&self, x: &SparseVec, y: &SparseVec) -> Result<SparseVec> {
        let n = self.dim();
        for v in [x, y] {
            if v.max_index().is_some_and(|i| i >= n) {
                return Err(Error::DimMismatch(format!("vector does not fit in dimension {n}")));
            }
        }
        Ok(self.mult.apply(&x.kron(y, n)))
    }

    /// The map `y ↦ x·y`.
    pub fn left_mult(&self, x: &SparseVec) -> LinMap {
        let n = self.dim();
        let cols = (0..n).map(|j| self.mult.apply(&x.kron(&SparseVec::unit(j), n))).collect();
        LinMap::from_columns(n, cols).expect("columns fit")
    }

    /// The map `y ↦ y·x`.
    pub fn right_mult(&self, x: &SparseVec) -> LinMap {
        let n = self.dim();
        let cols = (0..n).map(|j| self.mult.apply(&SparseVec::unit(j).kron(x, n))).collect();
        LinMap::from_columns(n, cols).expect("columns fit")
    }
}

/// Associativity and unit laws, recorded as `{prefix}ASSOC`,
/// `{prefix}UNIT_L`, `{prefix}UNIT_R`.
pub fn check_algebra_into(a: &Algebra, prefix: &str, r: &mut Report) -> bool {
    let n = a.dim();
    let m = &a.mult;
    let mut ok = r.eq(format!("{prefix}ASSOC"), &ch!(m, kr!(m, id(n))), &ch!(m, kr!(id(n), m)), &[n, n, n]);
    ok &= r.eq(format!("{prefix}UNIT_L"), &ch!(m, kr!(a.unit, id(n))), &id(n), &[n]);
    ok &= r.eq(format!("{prefix}UNIT_R"), &ch!(m, kr!(id(n), a.unit)), &id(n), &[n]);
    ok
}

pub fn check_algebra(a: &Algebra) -> Report {
    let mut r = Report::new("algebra");
    check_algebra_into(a, "", &mut r);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> Algebra {
        Algebra::new(LinMap::from_ints(2, 1, &[&[1], &[1]]), LinMap::from_ints(2, 4, &[&[1, 0, 0, 0], &[0, 0, 0, 1]]))
            .unwrap()
    }

    #[test]
    fn pointwise_functions_form_an_algebra() {
        let a = k2();
        assert!(check_algebra(&a).is_ok());
        assert!(a.multiply(&SparseVec::unit(0), &SparseVec::unit(1)).unwrap().is_zero());
        assert_eq!(a.multiply(&a.one(), &SparseVec::unit(1)).unwrap(), SparseVec::unit(1));
        assert!(a.multiply(&SparseVec::unit(5), &SparseVec::unit(0)).is_err());
    }

    #[test]
    fn corrupted_product_breaks_associativity() {
        // δ_e·δ_g set to 2δ_g.
        let mut a = k2();
        a.mult = LinMap::from_ints(2, 4, &[&[1, 0, 0, 0], &[0, 2, 0, 1]]);
        let r = check_algebra(&a);
        let e = r.get("ASSOC").unwrap();
        assert_eq!(e.status, crate::Status::Fail);
        assert_eq!(e.witness.as_ref().unwrap().basis_index, Some(vec![0, 0, 1]));
    }
}
