//! Finite Abelian groups as explicit products of cyclic factors, their
//! characters, and the right-regular representation as permutation
//! unitaries.
//!
//! Elements are enumerated canonically in mixed radix over the factor list
//! with the last factor fastest, so all matrices built from a group share a
//! deterministic basis ordering.

use std::fmt;

use num_complex::Complex64;

use crate::error::{QrfError, Result};
use crate::linalg::{CMatrix, Unitary, C64};

/// Product of cyclic groups `Z_{n1} x ... x Z_{nk}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    factors: Vec<u32>,
    order: usize,
}

/// Element of a [`FiniteAbelianGroup`], one coordinate per cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    coords: Vec<u32>,
}

/// Character `χ_m(g) = exp(2πi Σ_j m_j g_j / n_j)` labelled by `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    label: Vec<u32>,
    factors: Vec<u32>,
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            write!(f, "{}", self.coords[0])
        } else {
            write!(f, "(")?;
            for (k, c) in self.coords.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")
        }
    }
}

impl GroupElement {
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }
}

/// Build a group from its cyclic factor orders, e.g. `[2]` or `[2, 2]`.
pub fn make_group(factors: &[u32]) -> Result<FiniteAbelianGroup> {
    FiniteAbelianGroup::new(factors)
}

impl FiniteAbelianGroup {
    pub fn new(factors: &[u32]) -> Result<Self> {
        if factors.is_empty() {
            return Err(QrfError::EmptyFactorList);
        }
        if factors.contains(&0) {
            return Err(QrfError::ZeroFactor);
        }
        let order = factors.iter().map(|&n| n as usize).product();
        Ok(Self {
            factors: factors.to_vec(),
            order,
        })
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.factors.len()],
        }
    }

    /// True when every element is its own inverse (all factors divide 2).
    pub fn is_exponent_two(&self) -> bool {
        self.factors.iter().all(|&n| n <= 2)
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if g.coords.len() != self.factors.len() {
            return Err(QrfError::CoordMismatch {
                expected: self.factors.len(),
                got: g.coords.len(),
            });
        }
        for (&c, &n) in g.coords.iter().zip(&self.factors) {
            if c >= n {
                return Err(QrfError::CoordOutOfRange {
                    coord: c as i64,
                    order: n,
                });
            }
        }
        Ok(())
    }

    /// Element from raw coordinates, reduced mod the factor orders.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.factors.len() {
            return Err(QrfError::CoordMismatch {
                expected: self.factors.len(),
                got: coords.len(),
            });
        }
        let coords = coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &n)| c.rem_euclid(n as i64) as u32)
            .collect();
        Ok(GroupElement { coords })
    }

    /// Canonical index of an element: mixed radix, last factor fastest.
    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        self.check(g)?;
        let mut idx = 0usize;
        for (&c, &n) in g.coords.iter().zip(&self.factors) {
            idx = idx * n as usize + c as usize;
        }
        Ok(idx)
    }

    /// Inverse of [`index_of`](Self::index_of).
    pub fn element_at(&self, mut index: usize) -> GroupElement {
        debug_assert!(index < self.order);
        let mut coords = vec![0u32; self.factors.len()];
        for (slot, &n) in coords.iter_mut().zip(&self.factors).rev() {
            let (s, n) = (slot, n as usize);
            *s = (index % n) as u32;
            index /= n;
        }
        GroupElement { coords }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|k| self.element_at(k))
    }

    /// Componentwise sum mod the factor orders; commutative.
    pub fn compose(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        let coords = g
            .coords
            .iter()
            .zip(&h.coords)
            .zip(&self.factors)
            .map(|((&a, &b), &n)| (a + b) % n)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        let coords = g
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &n)| (n - c) % n)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn character(&self, label: &[i64]) -> Result<Character> {
        if label.len() != self.factors.len() {
            return Err(QrfError::CoordMismatch {
                expected: self.factors.len(),
                got: label.len(),
            });
        }
        let label = label
            .iter()
            .zip(&self.factors)
            .map(|(&m, &n)| m.rem_euclid(n as i64) as u32)
            .collect();
        Ok(Character {
            label,
            factors: self.factors.clone(),
        })
    }

    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        (0..self.order).map(|k| {
            let g = self.element_at(k);
            Character {
                label: g.coords,
                factors: self.factors.clone(),
            }
        })
    }

    /// Right-regular representation of `g` as a `|G| x |G|` permutation
    /// unitary: `U_R(g) |x> = |x ∘ g⁻¹>`.
    pub fn regular_rep(&self, g: &GroupElement) -> Result<Unitary> {
        self.check(g)?;
        let g_inv = self.inverse(g)?;
        let mut m = CMatrix::zeros(self.order, self.order);
        for col in 0..self.order {
            let x = self.element_at(col);
            let row = self.index_of(&self.compose(&x, &g_inv)?)?;
            m[(row, col)] = C64::new(1.0, 0.0);
        }
        Unitary::new(m)
    }
}

impl Character {
    pub fn label(&self) -> &[u32] {
        &self.label
    }

    pub fn is_trivial(&self) -> bool {
        self.label.iter().all(|&m| m == 0)
    }

    pub fn eval(&self, g: &GroupElement) -> C64 {
        debug_assert_eq!(g.coords.len(), self.factors.len());
        let phase: f64 = self
            .label
            .iter()
            .zip(&g.coords)
            .zip(&self.factors)
            .map(|((&m, &gj), &n)| (m as f64) * (gj as f64) / (n as f64))
            .sum();
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_distance, identity, is_unitary};
    use approx::assert_relative_eq;

    #[test]
    fn make_group_examples() {
        let z2 = make_group(&[2]).unwrap();
        assert_eq!(z2.order(), 2);
        let trivial = make_group(&[1]).unwrap();
        assert_eq!(trivial.order(), 1);
        let klein = make_group(&[2, 2]).unwrap();
        assert_eq!(klein.order(), 4);
        assert!(matches!(make_group(&[]), Err(QrfError::EmptyFactorList)));
        assert!(matches!(make_group(&[2, 0]), Err(QrfError::ZeroFactor)));
    }

    #[test]
    fn klein_group_table_by_brute_force() {
        // enumerate all 16 sums, check closure and associativity directly
        let g = make_group(&[2, 2]).unwrap();
        let elements: Vec<_> = g.elements().collect();
        assert_eq!(elements.len(), 4);
        for a in &elements {
            for b in &elements {
                let ab = g.compose(a, b).unwrap();
                assert!(g.index_of(&ab).unwrap() < 4);
                for c in &elements {
                    let left = g.compose(&ab, c).unwrap();
                    let right = g.compose(a, &g.compose(b, c).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn compose_examples() {
        let z2 = make_group(&[2]).unwrap();
        let one = z2.element(&[1]).unwrap();
        assert_eq!(z2.compose(&one, &one).unwrap(), z2.identity());

        let z3 = make_group(&[3]).unwrap();
        let a = z3.element(&[1]).unwrap();
        let b = z3.element(&[2]).unwrap();
        assert_eq!(z3.compose(&a, &b).unwrap(), z3.identity());

        let klein = make_group(&[2, 2]).unwrap();
        let x = klein.element(&[1, 0]).unwrap();
        let y = klein.element(&[0, 1]).unwrap();
        assert_eq!(klein.compose(&x, &y).unwrap(), klein.element(&[1, 1]).unwrap());

        let other = klein.identity();
        assert!(z3.compose(&a, &other).is_err());
    }

    #[test]
    fn inverse_examples() {
        let z2 = make_group(&[2]).unwrap();
        let one = z2.element(&[1]).unwrap();
        assert_eq!(z2.inverse(&one).unwrap(), one);

        let z4 = make_group(&[4]).unwrap();
        let one = z4.element(&[1]).unwrap();
        assert_eq!(z4.inverse(&one).unwrap(), z4.element(&[3]).unwrap());

        // brute-force search for the inverse in Z2 x Z3
        let g = make_group(&[2, 3]).unwrap();
        let target = g.element(&[1, 2]).unwrap();
        let found = g
            .elements()
            .find(|x| g.compose(&target, x).unwrap() == g.identity())
            .unwrap();
        assert_eq!(found, g.element(&[1, 1]).unwrap());
        assert_eq!(g.inverse(&target).unwrap(), found);
    }

    #[test]
    fn regular_rep_of_z2_generator_is_pauli_x() {
        let z2 = make_group(&[2]).unwrap();
        let u = z2.regular_rep(&z2.element(&[1]).unwrap()).unwrap();
        assert_eq!(u.matrix(), &crate::gates::pauli_x());
    }

    #[test]
    fn regular_rep_of_identity_is_identity() {
        for factors in [vec![1], vec![3], vec![2, 2], vec![2, 3]] {
            let g = make_group(&factors).unwrap();
            let u = g.regular_rep(&g.identity()).unwrap();
            assert_eq!(u.matrix(), &identity(g.order()));
        }
    }

    #[test]
    fn regular_rep_z3_matches_columnwise_construction() {
        // oracle: apply U_R(1)|g> = |g - 1 mod 3> to each basis vector
        let z3 = make_group(&[3]).unwrap();
        let u = z3.regular_rep(&z3.element(&[1]).unwrap()).unwrap();
        let mut expected = CMatrix::zeros(3, 3);
        for g in 0..3usize {
            let target = (g + 3 - 1) % 3;
            expected[(target, g)] = C64::new(1.0, 0.0);
        }
        assert_eq!(u.matrix(), &expected);
    }

    #[test]
    fn regular_rep_is_a_homomorphism_up_to_order_eight() {
        let groups = [
            vec![2],
            vec![3],
            vec![4],
            vec![2, 2],
            vec![5],
            vec![6],
            vec![7],
            vec![8],
            vec![2, 4],
            vec![2, 2, 2],
        ];
        for factors in groups {
            let g = make_group(&factors).unwrap();
            for a in g.elements() {
                let ua = g.regular_rep(&a).unwrap();
                assert!(is_unitary(ua.matrix(), 1e-12));
                for b in g.elements() {
                    let ub = g.regular_rep(&b).unwrap();
                    let uab = g.regular_rep(&g.compose(&a, &b).unwrap()).unwrap();
                    let dist = frobenius_distance(&(ua.matrix() * ub.matrix()), uab.matrix());
                    assert!(dist < 1e-12, "{factors:?}: {dist}");
                }
            }
        }
    }

    #[test]
    fn character_multiplicativity_and_identity() {
        let g = make_group(&[2, 3]).unwrap();
        for chi in g.characters() {
            assert_relative_eq!((chi.eval(&g.identity()) - C64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
            for a in g.elements() {
                for b in g.elements() {
                    let lhs = chi.eval(&g.compose(&a, &b).unwrap());
                    let rhs = chi.eval(&a) * chi.eval(&b);
                    assert!((lhs - rhs).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn character_orthogonality() {
        for factors in [vec![2], vec![4], vec![2, 2], vec![2, 3]] {
            let g = make_group(&factors).unwrap();
            let chars: Vec<_> = g.characters().collect();
            for (i, chi) in chars.iter().enumerate() {
                for (j, psi) in chars.iter().enumerate() {
                    let sum: C64 = g
                        .elements()
                        .map(|x| chi.eval(&x) * psi.eval(&x).conj())
                        .sum();
                    let expected = if i == j { g.order() as f64 } else { 0.0 };
                    assert!((sum - C64::new(expected, 0.0)).norm() < 1e-10, "{factors:?} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn element_indexing_round_trips() {
        let g = make_group(&[2, 3, 2]).unwrap();
        for k in 0..g.order() {
            assert_eq!(g.index_of(&g.element_at(k)).unwrap(), k);
        }
        // last factor fastest: index 1 flips the final coordinate
        assert_eq!(g.element_at(1).coords(), &[0, 0, 1]);
        assert_eq!(g.element_at(2).coords(), &[0, 1, 0]);
    }
}
