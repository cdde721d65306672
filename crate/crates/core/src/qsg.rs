//! Quantum semigroups: a finite-dimensional algebra `A` together with a
//! coassociative comultiplication `Delta: A -> A (x) A`, plus constructors
//! from classical semigroup data and morphism checks.

use crate::error::{Error, Result};
use crate::fqs::{check_star_hom, FdAlgebra, LinearMap, StarHomReport};
use crate::scalar::Scalar;

/// A pair `(A, Delta)` with `Delta` a unital *-homomorphism
/// `A -> A (x) A` satisfying coassociativity.
#[derive(Clone, Debug)]
pub struct QSemigroup<S: Scalar> {
    algebra: FdAlgebra,
    comul: LinearMap<S>,
}

/// Validation report for a candidate quantum semigroup.
#[derive(Clone, Debug)]
pub struct QsgReport {
    pub star_hom: StarHomReport,
    pub coassociativity: f64,
}

impl QsgReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.star_hom.passes(tol) && self.coassociativity <= tol
    }
}

impl<S: Scalar> QSemigroup<S> {
    /// Wraps the data without validating; use [`QSemigroup::validate`] or
    /// the checked constructor when the axioms are not known to hold.
    pub fn new_unchecked(algebra: FdAlgebra, comul: LinearMap<S>) -> Result<Self> {
        if comul.source() != &algebra || comul.target() != &algebra.tensor(&algebra) {
            return Err(Error::AlgebraMismatch(
                "comultiplication must map A to A (x) A".into(),
            ));
        }
        Ok(QSemigroup { algebra, comul })
    }

    pub fn new(algebra: FdAlgebra, comul: LinearMap<S>, tol: f64) -> Result<Self> {
        let s = Self::new_unchecked(algebra, comul)?;
        let report = s.validate();
        if !report.passes(tol) {
            return Err(Error::InvalidParameter(format!(
                "comultiplication violates the axioms (star-hom {:.3e}, coassociativity {:.3e})",
                report.star_hom.max(),
                report.coassociativity
            )));
        }
        Ok(s)
    }

    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    pub fn comul(&self) -> &LinearMap<S> {
        &self.comul
    }

    pub fn validate(&self) -> QsgReport {
        QsgReport {
            star_hom: check_star_hom(&self.comul),
            coassociativity: check_coassociativity(self),
        }
    }

    pub fn convert<T: Scalar>(&self, f: &impl Fn(&S) -> T) -> QSemigroup<T> {
        QSemigroup {
            algebra: self.algebra.clone(),
            comul: self.comul.convert(f),
        }
    }
}

/// Residual of `(Delta (x) id) . Delta = (id (x) Delta) . Delta` over the
/// canonical basis.
pub fn check_coassociativity<S: Scalar>(s: &QSemigroup<S>) -> f64 {
    let id = LinearMap::identity(&s.algebra);
    let lhs = s.comul.tensor(&id).compose(&s.comul);
    let rhs = id.tensor(&s.comul).compose(&s.comul);
    lhs.distance(&rhs)
}

/// Residual of `(Lambda (x) Lambda) . Delta_A = Delta_B . Lambda` for a
/// *-homomorphism `Lambda: A -> B`.
///
/// Note the contravariance: as a map of quantum semigroups this is a
/// morphism from the semigroup carried by `B` to the one carried by `A`.
pub fn check_qsemigroup_morphism<S: Scalar>(
    lambda: &LinearMap<S>,
    on_a: &QSemigroup<S>,
    on_b: &QSemigroup<S>,
) -> Result<f64> {
    if lambda.source() != on_a.algebra() || lambda.target() != on_b.algebra() {
        return Err(Error::AlgebraMismatch(
            "morphism must map the first semigroup's algebra to the second's".into(),
        ));
    }
    let lhs = lambda.tensor(lambda).compose(on_a.comul());
    let rhs = on_b.comul().compose(lambda);
    Ok(lhs.distance(&rhs))
}

fn is_associative(table: &[Vec<usize>]) -> Result<()> {
    let k = table.len();
    for (i, row) in table.iter().enumerate() {
        if row.len() != k {
            return Err(Error::InvalidTable(format!("row {i} has wrong length")));
        }
        if let Some(&v) = row.iter().find(|&&v| v >= k) {
            return Err(Error::InvalidTable(format!(
                "entry {v} out of range in row {i}"
            )));
        }
    }
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                if table[table[i][j]][l] != table[i][table[j][l]] {
                    return Err(Error::NotAssociative { i, j, k: l });
                }
            }
        }
    }
    Ok(())
}

/// The quantum semigroup of functions on a finite semigroup: `A = C^k`
/// commutative, `Delta(delta_x) = sum over products y z = x of
/// delta_y (x) delta_z`.
pub fn from_finite_semigroup<S: Scalar>(table: &[Vec<usize>]) -> Result<QSemigroup<S>> {
    is_associative(table)?;
    let k = table.len();
    if k == 0 {
        return Err(Error::InvalidTable("empty table".into()));
    }
    let algebra = FdAlgebra::commutative(k);
    let tensor = algebra.tensor(&algebra);
    let mut images = vec![tensor.zero::<S>(); k];
    for (y, row) in table.iter().enumerate() {
        for (z, &x) in row.iter().enumerate() {
            let idx = algebra.tensor_index(&algebra, y, z);
            let (b, _, _) = tensor.unravel(idx);
            let img = &mut images[x];
            let v = img.block(b).get(0, 0).add(&S::one());
            img.blocks_mut()[b].set(0, 0, v);
        }
    }
    let comul = LinearMap::from_images(&algebra, &tensor, &images);
    QSemigroup::new_unchecked(algebra, comul)
}

/// Multiplication table of the cyclic group Z_n.
pub fn cyclic_group_table(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|i| (0..n).map(|j| (i + j) % n).collect())
        .collect()
}

/// The group algebra of a finite abelian group, realized as the function
/// algebra of its (isomorphic) dual group: a product of cyclic factors.
pub fn from_finite_abelian_group<S: Scalar>(orders: &[usize]) -> Result<QSemigroup<S>> {
    if orders.is_empty() || orders.contains(&0) {
        return Err(Error::InvalidTable("group orders must be positive".into()));
    }
    let k: usize = orders.iter().product();
    let decode = |mut idx: usize| -> Vec<usize> {
        let mut digits = Vec::with_capacity(orders.len());
        for &n in orders.iter().rev() {
            digits.push(idx % n);
            idx /= n;
        }
        digits.reverse();
        digits
    };
    let encode = |digits: &[usize]| -> usize {
        let mut idx = 0;
        for (d, &n) in digits.iter().zip(orders) {
            idx = idx * n + d;
        }
        idx
    };
    let mut table = vec![vec![0usize; k]; k];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let di = decode(i);
            let dj = decode(j);
            let sum: Vec<usize> = di
                .iter()
                .zip(&dj)
                .zip(orders)
                .map(|((a, b), &n)| (a + b) % n)
                .collect();
            *cell = encode(&sum);
        }
    }
    from_finite_semigroup(&table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Exact, C64};

    #[test]
    fn z2_is_coassociative() {
        let s = from_finite_semigroup::<C64>(&cyclic_group_table(2)).unwrap();
        assert_eq!(s.algebra().dim(), 2);
        let report = s.validate();
        assert!(report.passes(1e-12), "{report:?}");
    }

    #[test]
    fn null_semigroup_exact() {
        // xy = 0 for all x, y: Delta(delta_0) has all four terms,
        // Delta(delta_1) = 0; still a coassociative *-homomorphism.
        let table = vec![vec![0, 0], vec![0, 0]];
        let s = from_finite_semigroup::<Exact>(&table).unwrap();
        let report = s.validate();
        assert_eq!(report.coassociativity, 0.0);
        assert_eq!(report.star_hom.max(), 0.0);
        let img1 = s.comul().apply(&s.algebra().basis_element(1));
        assert!(img1.is_zero());
    }

    #[test]
    fn meet_semigroup_comul_shape() {
        // xy = min(x,y) on {0,1}: Delta(delta_1) = delta_1 (x) delta_1 and
        // Delta(delta_0) carries the remaining three product pairs.
        let table = vec![vec![0, 0], vec![0, 1]];
        let s = from_finite_semigroup::<Exact>(&table).unwrap();
        assert_eq!(s.validate().coassociativity, 0.0);
        let alg = s.algebra().clone();
        let img1 = s.comul().apply(&alg.basis_element(1));
        let expect1 = alg.basis_element::<Exact>(1).tensor(&alg.basis_element(1));
        assert_eq!(img1, expect1);
        let img0 = s.comul().apply(&alg.basis_element(0));
        let mut expect0 = alg.basis_element::<Exact>(0).tensor(&alg.basis_element(0));
        expect0 = expect0.add(&alg.basis_element(0).tensor(&alg.basis_element(1)));
        expect0 = expect0.add(&alg.basis_element(1).tensor(&alg.basis_element(0)));
        assert_eq!(img0, expect0);
    }

    #[test]
    fn trivial_monoid() {
        let s = from_finite_semigroup::<C64>(&[vec![0]]).unwrap();
        assert_eq!(s.algebra().dim(), 1);
        assert!(s.validate().passes(1e-15));
    }

    #[test]
    fn left_zero_semigroup() {
        // x * y = x: Delta(delta_x) = delta_x (x) 1
        let table = vec![vec![0, 0], vec![1, 1]];
        let s = from_finite_semigroup::<Exact>(&table).unwrap();
        assert_eq!(s.validate().coassociativity, 0.0);
        let alg = s.algebra().clone();
        for x in 0..2 {
            let img = s.comul().apply(&alg.basis_element(x));
            let expect = alg.basis_element::<Exact>(x).tensor(&alg.unit());
            assert_eq!(img, expect);
        }
    }

    #[test]
    fn non_associative_table_rejected() {
        // x*y = 1 except 1*1 = 0 is not associative on {0,1}
        let table = vec![vec![1, 1], vec![1, 0]];
        assert!(matches!(
            from_finite_semigroup::<C64>(&table),
            Err(Error::NotAssociative { .. })
        ));
    }

    #[test]
    fn corrupted_comul_fails_coassociativity() {
        let s = from_finite_semigroup::<C64>(&cyclic_group_table(2)).unwrap();
        // swap one coefficient in the comultiplication matrix
        let mut m = s.comul().matrix().clone();
        let a = *m.get(0, 0);
        let b = *m.get(0, 1);
        m.set(0, 0, b);
        m.set(0, 1, a);
        let bad = QSemigroup::new_unchecked(
            s.algebra().clone(),
            LinearMap::new(s.algebra().clone(), s.algebra().tensor(s.algebra()), m).unwrap(),
        )
        .unwrap();
        assert!(check_coassociativity(&bad) >= 1.0);
    }

    #[test]
    fn quotient_map_z4_to_z2_is_morphism() {
        // dual to the inclusion Z2 -> Z4, g -> 2g:
        // Lambda(delta_x) = delta_{x/2} for even x, 0 for odd x
        let z4 = from_finite_semigroup::<C64>(&cyclic_group_table(4)).unwrap();
        let z2 = from_finite_semigroup::<C64>(&cyclic_group_table(2)).unwrap();
        let images: Vec<_> = (0..4)
            .map(|x| {
                if x % 2 == 0 {
                    z2.algebra().basis_element::<C64>(x / 2)
                } else {
                    z2.algebra().zero()
                }
            })
            .collect();
        let lambda = LinearMap::from_images(z4.algebra(), z2.algebra(), &images);
        assert!(check_star_hom(&lambda).max() < 1e-15);
        let res = check_qsemigroup_morphism(&lambda, &z4, &z2).unwrap();
        assert!(res < 1e-15);
    }

    #[test]
    fn collapsing_map_is_not_a_morphism() {
        let z4 = from_finite_semigroup::<C64>(&cyclic_group_table(4)).unwrap();
        let z2 = from_finite_semigroup::<C64>(&cyclic_group_table(2)).unwrap();
        let images: Vec<_> = (0..4)
            .map(|_| z2.algebra().basis_element::<C64>(0))
            .collect();
        let lambda = LinearMap::from_images(z4.algebra(), z2.algebra(), &images);
        assert!(check_star_hom(&lambda).max() > 0.5);
        assert!(check_qsemigroup_morphism(&lambda, &z4, &z2).unwrap() > 0.5);
    }

    #[test]
    fn identity_is_a_morphism() {
        let z2 = from_finite_semigroup::<C64>(&cyclic_group_table(2)).unwrap();
        let id = LinearMap::identity(z2.algebra());
        assert!(check_qsemigroup_morphism(&id, &z2, &z2).unwrap() < 1e-15);
    }

    #[test]
    fn abelian_group_constructor() {
        let s = from_finite_abelian_group::<C64>(&[2, 3]).unwrap();
        assert_eq!(s.algebra().dim(), 6);
        assert!(s.validate().passes(1e-12));
    }
}
