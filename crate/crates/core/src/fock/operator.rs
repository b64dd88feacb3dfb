use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::{cabs, Real, C};

use super::ProductSpace;

/// Dense complex operator on a (product) Fock space.
///
/// The Hermitian and unitary flags are only ever set after the property has
/// been checked numerically.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix<T: Real> {
    space: ProductSpace,
    entries: DMatrix<C<T>>,
    hermitian: bool,
    unitary: bool,
}

fn flag_tolerance<T: Real>(scale: T) -> T {
    T::lit(1e-10).max(T::lit(100.0) * T::EPSILON) * scale.max(T::one())
}

impl<T: Real> OperatorMatrix<T> {
    pub fn new(space: impl Into<ProductSpace>, entries: DMatrix<C<T>>) -> Result<Self> {
        let space = space.into();
        let d = space.dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::param(format!(
                "matrix is {}x{}, space has dimension {d}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self {
            space,
            entries,
            hermitian: false,
            unitary: false,
        })
    }

    pub fn zeros(space: impl Into<ProductSpace>) -> Self {
        let space = space.into();
        let d = space.dim();
        Self {
            space,
            entries: DMatrix::zeros(d, d),
            hermitian: true,
            unitary: false,
        }
    }

    pub fn identity(space: impl Into<ProductSpace>) -> Self {
        let space = space.into();
        let d = space.dim();
        Self {
            space,
            entries: DMatrix::identity(d, d),
            hermitian: true,
            unitary: true,
        }
    }

    pub fn diagonal(space: impl Into<ProductSpace>, diag: &[C<T>]) -> Result<Self> {
        let space = space.into();
        if diag.len() != space.dim() {
            return Err(Error::param("diagonal length differs from space dimension"));
        }
        let m = DMatrix::from_diagonal(&DVector::from_column_slice(diag));
        Self::new(space, m)
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C<T>> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C<T>> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C<T> {
        self.entries[(row, col)]
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space.clone(),
            entries: self.entries.adjoint(),
            hermitian: self.hermitian,
            unitary: self.unitary,
        }
    }

    /// `max |A - A^dagger|`.
    pub fn hermiticity_defect(&self) -> T {
        max_abs(&(&self.entries - self.entries.adjoint()))
    }

    /// `max |A^dagger A - I|`.
    pub fn unitarity_defect(&self) -> T {
        let d = self.dim();
        max_abs(&(self.entries.adjoint() * &self.entries - DMatrix::<C<T>>::identity(d, d)))
    }

    /// Sets the Hermitian flag after checking `max |A - A^dagger| <= 1e-10`
    /// (relative to the largest entry when that exceeds one).
    pub fn checked_hermitian(mut self) -> Result<Self> {
        let defect = self.hermiticity_defect();
        if defect > flag_tolerance(self.max_abs()) {
            return Err(Error::numeric(format!(
                "operator not Hermitian: defect {:e}",
                defect.as_f64()
            )));
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn checked_unitary(mut self) -> Result<Self> {
        let defect = self.unitarity_defect();
        if defect > flag_tolerance(T::one()) {
            return Err(Error::numeric(format!(
                "operator not unitary: defect {:e}",
                defect.as_f64()
            )));
        }
        self.unitary = true;
        Ok(self)
    }

    pub fn max_abs(&self) -> T {
        max_abs(&self.entries)
    }

    /// Largest entry over rows and columns in the interior block of the
    /// space (top level of every mode removed).
    pub fn interior_max_abs(&self) -> T {
        let idx = self.space.interior();
        let mut m = T::zero();
        for &i in &idx {
            for &j in &idx {
                m = m.max(cabs(self.entries[(i, j)]));
            }
        }
        m
    }

    /// Restriction to the interior block.
    pub fn interior_block(&self) -> DMatrix<C<T>> {
        let idx = self.space.interior();
        DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.entries[(idx[i], idx[j])])
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self {
            space: self.space.clone(),
            entries: &self.entries * s,
            hermitian: self.hermitian && s.im == T::zero(),
            unitary: false,
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(C::new(s, T::zero()))
    }

    pub fn apply(&self, v: &DVector<C<T>>) -> Result<DVector<C<T>>> {
        if v.len() != self.dim() {
            return Err(Error::param("vector length differs from operator dimension"));
        }
        Ok(&self.entries * v)
    }

    /// Embeds this operator as factor `position` of `space`, identities
    /// elsewhere. The operator's own space must match the selected factors.
    pub fn embed(&self, space: &ProductSpace, position: usize) -> Result<Self> {
        let own = self.space.factors();
        let all = space.factors();
        if position + own.len() > all.len() || &all[position..position + own.len()] != own {
            return Err(Error::param("operator space does not match target factors"));
        }
        let left: usize = all[..position].iter().map(|f| f.dim()).product();
        let right: usize = all[position + own.len()..].iter().map(|f| f.dim()).product();
        let id_l = DMatrix::<C<T>>::identity(left, left);
        let id_r = DMatrix::<C<T>>::identity(right, right);
        let entries = id_l.kronecker(&self.entries).kronecker(&id_r);
        Ok(Self {
            space: space.clone(),
            entries,
            hermitian: self.hermitian,
            unitary: self.unitary,
        })
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::param("operators act on different spaces"));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            space: self.space.clone(),
            entries: &self.entries + &other.entries,
            hermitian: self.hermitian && other.hermitian,
            unitary: false,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            space: self.space.clone(),
            entries: &self.entries - &other.entries,
            hermitian: self.hermitian && other.hermitian,
            unitary: false,
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            space: self.space.clone(),
            entries: &self.entries * &other.entries,
            hermitian: false,
            unitary: self.unitary && other.unitary,
        })
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<T>> {
        if !self.hermitian {
            return Err(Error::param(
                "eigenvalues requested for an operator not flagged Hermitian",
            ));
        }
        let mut ev: Vec<T> = self.entries.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        Ok(ev)
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<'a, T: Real> $tr<&'a OperatorMatrix<T>> for &'a OperatorMatrix<T> {
            type Output = OperatorMatrix<T>;
            /// Panics when the operands act on different spaces; use the
            /// `try_` form for a checked version.
            fn $method(self, rhs: &'a OperatorMatrix<T>) -> OperatorMatrix<T> {
                self.$inner(rhs).expect("operators on the same space")
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

pub(crate) fn max_abs<T: Real>(m: &DMatrix<C<T>>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(cabs(*z)))
}

/// `AB - BA`.
pub fn commutator<T: Real>(a: &OperatorMatrix<T>, b: &OperatorMatrix<T>) -> Result<OperatorMatrix<T>> {
    a.same_space(b)?;
    Ok(OperatorMatrix {
        space: a.space.clone(),
        entries: &a.entries * &b.entries - &b.entries * &a.entries,
        hermitian: false,
        unitary: false,
    })
}

/// `A (x) B` on the concatenated product space.
pub fn kron<T: Real>(a: &OperatorMatrix<T>, b: &OperatorMatrix<T>) -> OperatorMatrix<T> {
    OperatorMatrix {
        space: a.space.product(&b.space),
        entries: a.entries.kronecker(&b.entries),
        hermitian: a.hermitian && b.hermitian,
        unitary: a.unitary && b.unitary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockSpace;

    fn space(n: usize) -> FockSpace {
        FockSpace::new(n).unwrap()
    }

    #[test]
    fn shape_is_checked() {
        let m = DMatrix::<C<f64>>::zeros(3, 4);
        assert!(OperatorMatrix::new(space(3), m).is_err());
    }

    #[test]
    fn hermitian_flag_requires_check() {
        let mut m = DMatrix::<C<f64>>::zeros(2, 2);
        m[(0, 1)] = C::new(0.0, 1.0);
        m[(1, 0)] = C::new(0.0, -1.0);
        let op = OperatorMatrix::new(space(2), m.clone()).unwrap();
        assert!(!op.is_hermitian());
        assert!(op.checked_hermitian().unwrap().is_hermitian());
        m[(1, 0)] = C::new(0.0, 1.0);
        assert!(OperatorMatrix::new(space(2), m).unwrap().checked_hermitian().is_err());
    }

    #[test]
    fn embedding_matches_kron_with_identity() {
        let s2 = ProductSpace::two_mode(3, 2).unwrap();
        let a = OperatorMatrix::<f64>::new(space(3), DMatrix::from_fn(3, 3, |i, j| C::new((i * 3 + j) as f64, 0.0)))
            .unwrap();
        let e = a.embed(&s2, 0).unwrap();
        let k = kron(&a, &OperatorMatrix::identity(space(2)));
        assert_eq!(e.entries(), k.entries());
        assert!(a.embed(&s2, 1).is_err());
    }

    #[test]
    fn commutator_space_mismatch() {
        let a = OperatorMatrix::<f64>::identity(space(2));
        let b = OperatorMatrix::<f64>::identity(space(3));
        assert!(matches!(commutator(&a, &b), Err(Error::Parameter(_))));
    }

    #[test]
    fn interior_block_drops_top_levels() {
        let s2 = ProductSpace::two_mode(3, 3).unwrap();
        let mut d = vec![C::new(0.0, 0.0); 9];
        d[8] = C::new(5.0, 0.0);
        let op = OperatorMatrix::<f64>::diagonal(s2, &d).unwrap();
        assert_eq!(op.max_abs(), 5.0);
        assert_eq!(op.interior_max_abs(), 0.0);
        assert_eq!(op.interior_block().nrows(), 4);
    }
}
