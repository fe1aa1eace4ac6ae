//! Finitely generated abelian groups `Z^r (+) Z/d_1 (+) ... (+) Z/d_k`,
//! subgroup profiles via the Smith normal form, and the decision whether a
//! free subgroup is contained in a free part of the ambient group.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::linalg::{hnf, is_zero_vec, snf, IntMatrix, Lattice};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AbelianError {
    #[error("element has free part of length {got}, group has rank {want}")]
    FreeLength { got: usize, want: usize },
    #[error("element has {got} torsion components, group has {want}")]
    TorsionLength { got: usize, want: usize },
    #[error("torsion orders must be >= 2 and form a divisibility chain")]
    BadTorsionOrders,
    #[error("generators meet the torsion subgroup: the subgroup is not free")]
    NotFree,
}

/// `Z^r` plus torsion with invariant factors `d_1 | d_2 | ... | d_k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FgAbGroup {
    rank: usize,
    torsion_orders: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn new(rank: usize, torsion_orders: Vec<BigInt>) -> Result<Self, AbelianError> {
        for (i, d) in torsion_orders.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(AbelianError::BadTorsionOrders);
            }
            if i + 1 < torsion_orders.len() && !torsion_orders[i + 1].mod_floor(d).is_zero() {
                return Err(AbelianError::BadTorsionOrders);
            }
        }
        Ok(FgAbGroup {
            rank,
            torsion_orders,
        })
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            rank,
            torsion_orders: vec![],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion_orders(&self) -> &[BigInt] {
        &self.torsion_orders
    }

    pub fn torsion_rank(&self) -> usize {
        self.torsion_orders.len()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion_orders.iter().product()
    }

    pub fn element(
        &self,
        free: Vec<BigInt>,
        torsion: Vec<BigInt>,
    ) -> Result<GroupElement, AbelianError> {
        if free.len() != self.rank {
            return Err(AbelianError::FreeLength {
                got: free.len(),
                want: self.rank,
            });
        }
        if torsion.len() != self.torsion_orders.len() {
            return Err(AbelianError::TorsionLength {
                got: torsion.len(),
                want: self.torsion_orders.len(),
            });
        }
        Ok(GroupElement {
            free,
            torsion: self.reduce_torsion(&torsion),
        })
    }

    pub fn element_from_i64(&self, free: &[i64], torsion: &[i64]) -> GroupElement {
        self.element(
            free.iter().map(|&x| BigInt::from(x)).collect(),
            torsion.iter().map(|&x| BigInt::from(x)).collect(),
        )
        .expect("component counts match the group")
    }

    pub fn zero_element(&self) -> GroupElement {
        GroupElement {
            free: vec![BigInt::zero(); self.rank],
            torsion: vec![BigInt::zero(); self.torsion_orders.len()],
        }
    }

    pub fn reduce_torsion(&self, t: &[BigInt]) -> Vec<BigInt> {
        t.iter()
            .zip(&self.torsion_orders)
            .map(|(x, d)| x.mod_floor(d))
            .collect()
    }

    /// Lift a list of elements to the cover `Z^{r+k}` together with the
    /// torsion relations `d_j * e_{r+j}`; the resulting lattice determines the
    /// generated subgroup, so subgroup equality is lattice equality.
    pub fn subgroup_lattice(&self, gens: &[GroupElement]) -> Lattice {
        let r = self.rank;
        let k = self.torsion_orders.len();
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(gens.len() + k);
        for g in gens {
            let mut row = g.free.clone();
            row.extend(g.torsion.iter().cloned());
            rows.push(row);
        }
        for (j, d) in self.torsion_orders.iter().enumerate() {
            let mut row = vec![BigInt::zero(); r + k];
            row[r + j] = d.clone();
            rows.push(row);
        }
        Lattice::from_rows(&IntMatrix::from_rows(r + k, rows))
    }

    /// Equality of the subgroups generated by two element lists.
    pub fn same_subgroup(&self, a: &[GroupElement], b: &[GroupElement]) -> bool {
        self.subgroup_lattice(a) == self.subgroup_lattice(b)
    }
}

/// An element split into free and torsion coordinates; torsion components are
/// always stored reduced into `[0, d_j)`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct GroupElement {
    free: Vec<BigInt>,
    torsion: Vec<BigInt>,
}

impl GroupElement {
    pub fn free(&self) -> &[BigInt] {
        &self.free
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.free) && is_zero_vec(&self.torsion)
    }

    pub fn has_zero_torsion(&self) -> bool {
        is_zero_vec(&self.torsion)
    }
}

/// Divisor profile of a subgroup per the elementary divisor theorem: for any
/// free part with adapted basis `f_1, ..., f_r`, the elements
/// `a_i f_i + t_i` form a basis of the subgroup.
#[derive(Clone, Debug)]
pub struct SubgroupProfile {
    pub divisors: Vec<BigInt>,
    /// Rows are the adapted basis `f_1, ..., f_r` of `Z^r`.
    pub free_basis: IntMatrix,
    pub offsets: Vec<Vec<BigInt>>,
    /// True when the input generators were dependent and had to be reduced.
    pub reduced: bool,
    /// Nonzero purely-torsion generators left over by the reduction; nonempty
    /// means the generated subgroup meets the torsion and is not free.
    pub torsion_leftover: Vec<Vec<BigInt>>,
}

/// Result of the free-part containment test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreePartVerdict {
    /// Basis of a free part that contains the subgroup.
    Contained { witness: Vec<GroupElement> },
    /// `divisors[failing_index]` does not divide the matching offset in the
    /// torsion subgroup (0-based index into the profile).
    NotContained { failing_index: usize },
}

/// Reduce a generator list to one whose free parts are linearly independent,
/// via HNF on the lifted coordinate rows. Returns (independent generators,
/// leftover torsion rows, was_reduced).
fn reduce_generators(
    group: &FgAbGroup,
    gens: &[GroupElement],
) -> (Vec<GroupElement>, Vec<Vec<BigInt>>, bool) {
    let r = group.rank();
    let k = group.torsion_rank();
    let free_rows: Vec<Vec<BigInt>> = gens.iter().map(|g| g.free.clone()).collect();
    let g_matrix = IntMatrix::from_rows(r, free_rows);
    let rank = g_matrix.rank();
    if rank == gens.len() {
        return (gens.to_vec(), vec![], false);
    }
    // lift generators and the torsion relations, then split the HNF rows by
    // whether their free part survives
    let lat = group.subgroup_lattice(gens);
    let mut independent = Vec::new();
    let mut leftover = Vec::new();
    for i in 0..lat.rank() {
        let row = lat.basis().row(i);
        let free: Vec<BigInt> = row[..r].to_vec();
        let torsion: Vec<BigInt> = row[r..r + k].to_vec();
        if is_zero_vec(&free) {
            let t = group.reduce_torsion(&torsion);
            if !is_zero_vec(&t) {
                leftover.push(t);
            }
        } else {
            independent.push(group.element(free, torsion).expect("lengths match"));
        }
    }
    (independent, leftover, true)
}

/// Divisor profile of the subgroup generated by `gens` inside `group`.
///
/// With `u * g * w = s` the Smith normal form of the stacked free parts, the
/// divisors are the diagonal of `s`, the adapted basis is `w^{-1}` and the
/// offsets are `u` applied to the torsion parts.
pub fn subgroup_profile(group: &FgAbGroup, gens: &[GroupElement]) -> SubgroupProfile {
    let (independent, torsion_leftover, reduced) = reduce_generators(group, gens);
    let r = group.rank();
    let h = independent.len();
    let free_rows: Vec<Vec<BigInt>> = independent.iter().map(|g| g.free.clone()).collect();
    let g_matrix = IntMatrix::from_rows(r, free_rows);
    let d = snf(&g_matrix);
    let divisors: Vec<BigInt> = (0..h).map(|i| d.s.at(i, i).clone()).collect();
    debug_assert!(
        divisors.iter().all(|a| !a.is_zero()),
        "independent rows have nonzero divisors"
    );
    // rows of w^{-1}: the HNF transform of a unimodular matrix is its inverse
    let w_inv = hnf(&d.w).u;
    let mut offsets = Vec::with_capacity(h);
    for i in 0..h {
        let mut t = vec![BigInt::zero(); group.torsion_rank()];
        for (j, gen) in independent.iter().enumerate() {
            for (c, tc) in t.iter_mut().enumerate() {
                *tc += d.u.at(i, j) * &gen.torsion[c];
            }
        }
        offsets.push(group.reduce_torsion(&t));
    }
    SubgroupProfile {
        divisors,
        free_basis: w_inv,
        offsets,
        reduced,
        torsion_leftover,
    }
}

/// Solve `a * u = t` in the torsion subgroup, component-wise in each
/// `Z/d_j`; solvable exactly when `gcd(a, d_j)` divides `t_j` for all `j`.
pub fn torsion_divide(a: &BigInt, t: &[BigInt], group: &FgAbGroup) -> Option<Vec<BigInt>> {
    let mut u = Vec::with_capacity(t.len());
    for (tj, d) in t.iter().zip(group.torsion_orders()) {
        let g = a.gcd(d);
        if !tj.mod_floor(&g).is_zero() {
            return None;
        }
        // (a/g) is invertible mod d/g
        let dg = d / &g;
        if dg.is_one() {
            u.push(BigInt::zero());
            continue;
        }
        let ag = (a / &g).mod_floor(&dg);
        let ext = ag.extended_gcd(&dg);
        debug_assert!(ext.gcd.is_one());
        let inv = ext.x.mod_floor(&dg);
        u.push(((tj / &g) * inv).mod_floor(d));
    }
    Some(u)
}

/// Decide whether the free subgroup generated by `gens` is contained in a
/// free part of `group`; on success the witness rows span such a free part.
///
/// The criterion: each profile offset `t_i` must be divisible by its divisor
/// `a_i` inside the torsion subgroup; the witness free part is then spanned by
/// `f_i + u_i` (with `a_i u_i = t_i`) padded by the remaining `f_i`.
pub fn contained_in_free_part(
    group: &FgAbGroup,
    gens: &[GroupElement],
) -> Result<FreePartVerdict, AbelianError> {
    let profile = subgroup_profile(group, gens);
    if !profile.torsion_leftover.is_empty() {
        return Err(AbelianError::NotFree);
    }
    let h = profile.divisors.len();
    let mut lifts = Vec::with_capacity(h);
    for i in 0..h {
        match torsion_divide(&profile.divisors[i], &profile.offsets[i], group) {
            Some(u) => lifts.push(u),
            None => return Ok(FreePartVerdict::NotContained { failing_index: i }),
        }
    }
    let mut witness = Vec::with_capacity(group.rank());
    for i in 0..group.rank() {
        let free = profile.free_basis.row_vec(i);
        let torsion = if i < h {
            lifts[i].clone()
        } else {
            vec![BigInt::zero(); group.torsion_rank()]
        };
        witness.push(group.element(free, torsion).expect("lengths match"));
    }
    Ok(FreePartVerdict::Contained { witness })
}

/// Invariant-factor shape `(rank, torsion orders)` of the quotient of `group`
/// by the subgroup generated by `gens`, via SNF of the lifted presentation.
pub fn quotient_invariants(group: &FgAbGroup, gens: &[GroupElement]) -> (usize, Vec<BigInt>) {
    let lat = group.subgroup_lattice(gens);
    let ambient = group.rank() + group.torsion_rank();
    if lat.rank() == 0 {
        return (group.rank(), group.torsion_orders().to_vec());
    }
    let d = snf(lat.basis());
    let torsion: Vec<BigInt> = d
        .invariant_factors()
        .into_iter()
        .filter(|f| !f.is_one())
        .collect();
    (ambient - lat.rank(), torsion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn z_plus_z2() -> FgAbGroup {
        FgAbGroup::new(1, vec![BigInt::from(2)]).unwrap()
    }

    #[test]
    fn motivating_counterexample() {
        // H = <(2, [1])> in Z (+) Z/2 is not contained in any free part
        let g = z_plus_z2();
        let h = vec![g.element_from_i64(&[2], &[1])];
        let profile = subgroup_profile(&g, &h);
        assert_eq!(profile.divisors, vec![BigInt::from(2)]);
        assert_eq!(profile.offsets, vec![vec![BigInt::one()]]);
        assert_eq!(
            contained_in_free_part(&g, &h).unwrap(),
            FreePartVerdict::NotContained { failing_index: 0 }
        );
    }

    #[test]
    fn torsion_division_cases() {
        let g = z_plus_z2();
        let two = BigInt::from(2);
        assert_eq!(torsion_divide(&two, &[BigInt::one()], &g), None);
        assert_eq!(
            torsion_divide(&two, &[BigInt::zero()], &g),
            Some(vec![BigInt::zero()])
        );
        // 3 * [1] = [1] in Z/2
        assert_eq!(
            torsion_divide(&BigInt::from(3), &[BigInt::one()], &g),
            Some(vec![BigInt::one()])
        );
    }

    #[test]
    fn standard_basis_profile() {
        let g = FgAbGroup::new(2, vec![BigInt::from(4)]).unwrap();
        let gens = vec![
            g.element_from_i64(&[1, 0], &[0]),
            g.element_from_i64(&[0, 1], &[0]),
        ];
        let p = subgroup_profile(&g, &gens);
        assert!(p.divisors.iter().all(|a| a.is_one()));
        assert!(p.offsets.iter().all(|t| is_zero_vec(t)));
        assert!(!p.reduced);
    }

    #[test]
    fn witness_is_a_free_part() {
        // generators whose divisor obstructions all lift
        let g = FgAbGroup::new(2, vec![BigInt::from(2)]).unwrap();
        let gens = vec![
            g.element_from_i64(&[120, 120], &[0]),
            g.element_from_i64(&[60, 120], &[0]),
        ];
        match contained_in_free_part(&g, &gens).unwrap() {
            FreePartVerdict::Contained { witness } => {
                assert_eq!(witness.len(), 2);
                // witness free parts form a unimodular basis of Z^2
                let rows: Vec<Vec<BigInt>> = witness.iter().map(|w| w.free().to_vec()).collect();
                let m = IntMatrix::from_rows(2, rows);
                assert_eq!(m.det().abs(), BigInt::one());
                // each generator lies in the witness subgroup
                let lat = g.subgroup_lattice(&witness);
                for gen in &gens {
                    let mut row = gen.free().to_vec();
                    row.extend(gen.torsion().iter().cloned());
                    assert!(lat.contains(&row));
                }
            }
            other => panic!("expected containment, got {other:?}"),
        }
    }

    #[test]
    fn non_free_subgroup_detected() {
        let g = z_plus_z2();
        let gens = vec![
            g.element_from_i64(&[1], &[0]),
            g.element_from_i64(&[1], &[1]),
        ];
        assert_eq!(
            contained_in_free_part(&g, &gens),
            Err(AbelianError::NotFree)
        );
    }

    #[test]
    fn quotient_shapes() {
        let g = FgAbGroup::new(1, vec![]).unwrap();
        let (r, t) = quotient_invariants(&g, &[g.element_from_i64(&[2], &[])]);
        assert_eq!((r, t), (0, vec![BigInt::from(2)]));

        let g = FgAbGroup::new(2, vec![BigInt::from(2)]).unwrap();
        let (r, t) = quotient_invariants(&g, &[]);
        assert_eq!((r, t), (2, vec![BigInt::from(2)]));

        let gens = vec![
            g.element_from_i64(&[60, 0], &[0]),
            g.element_from_i64(&[0, 120], &[0]),
        ];
        let (r, t) = quotient_invariants(&g, &gens);
        assert_eq!(r, 0);
        let order: BigInt = t.iter().product();
        assert_eq!(order, BigInt::from(14400));
    }
}
