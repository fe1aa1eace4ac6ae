//! The divisor-class pipeline: weight matrix, covering decomposition,
//! class-group presentation, Cartier lattice, Picard subgroup, the purity
//! decision and the Picard characterization inside the weight-space lattice.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::abelian::{
    contained_in_free_part, AbelianError, FgAbGroup, FreePartVerdict, GroupElement,
};
use crate::fans::{
    enumerate_complete_fans, is_complete, m_sigma, multiplicity, Cone, Fan, FanError, FanMatrix,
};
use crate::linalg::{integer_kernel, snf, solve_integer, vec_sub, IntMatrix, Lattice};

#[derive(Debug, thiserror::Error)]
pub enum ToricError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error("weight matrix override is not a basis of the kernel of the fan matrix")]
    BadWeightOverride,
    #[error("torsion matrix override does not present the class group: {0}")]
    BadTorsionOverride(String),
    #[error("weight matrix is not surjective onto Z^r")]
    WeightNotSurjective,
    #[error("vector is not in the column lattice of the weight submatrix {0}")]
    NotInColumnLattice(Cone),
    #[error("variety is impure; the characterization requires a pure variety")]
    NotPure,
    #[error("fan is not complete")]
    NotComplete,
}

/// Canonical weight matrix: the HNF basis of the saturated integer kernel
/// `{x : V x = 0}`, an `r x (n+r)` Gale dual of the fan matrix.
pub fn weight_matrix(matrix: &FanMatrix) -> Result<IntMatrix, ToricError> {
    matrix.validated()?;
    let kernel = integer_kernel(&matrix.as_matrix());
    Ok(kernel.basis().clone())
}

/// Factorization through the universal 1-covering: `input = map * covering`
/// with the covering's row lattice the saturation of the input's.
#[derive(Clone, Debug)]
pub struct CfDecomposition {
    /// Fan matrix of the covering; same shape, saturated row lattice.
    pub covering: FanMatrix,
    /// Square integer matrix carrying covering ray generators to the input's
    /// (column by column); `|det|` is the torsion order of the class group.
    pub covering_map: IntMatrix,
}

impl CfDecomposition {
    pub fn torsion_order(&self) -> BigInt {
        self.covering_map.det().abs()
    }
}

pub fn cf_decomposition(matrix: &FanMatrix) -> Result<CfDecomposition, ToricError> {
    matrix.validated()?;
    let n = matrix.dim();
    let vm = matrix.as_matrix();
    let saturated = Lattice::from_rows(&vm).saturation();
    debug_assert_eq!(saturated.rank(), n);
    let covering_matrix = saturated.basis().clone();
    let covering = FanMatrix::new(
        n,
        (0..covering_matrix.cols())
            .map(|c| covering_matrix.col_vec(c))
            .collect(),
    )
    .expect("shape preserved");
    // solve input = map * covering row-wise: covering^T * map^T = input^T
    let ct = covering_matrix.transpose();
    let mut map_rows = Vec::with_capacity(n);
    for i in 0..n {
        let b = vm.row_vec(i);
        let x = solve_integer(&ct, &b).expect("rows lie in the saturation");
        map_rows.push(x);
    }
    Ok(CfDecomposition {
        covering,
        covering_map: IntMatrix::from_rows(n, map_rows),
    })
}

/// Presentation of the class group `Z^{n+r} / L_r(V)` as `Z^r (+) T` through
/// a weight matrix and a torsion matrix: `x` maps to
/// `(weight * x, torsion * x mod d)`, and the joint kernel is exactly the row
/// lattice of the fan matrix.
#[derive(Clone, Debug)]
pub struct ClassGroupPresentation {
    pub rank: usize,
    pub torsion_orders: Vec<BigInt>,
    pub weight: IntMatrix,
    pub torsion: IntMatrix,
}

impl ClassGroupPresentation {
    pub fn group(&self) -> FgAbGroup {
        FgAbGroup::new(self.rank, self.torsion_orders.clone()).expect("valid invariant factors")
    }

    /// Divisor class of an integer vector of ray coefficients.
    pub fn class_of(&self, x: &[BigInt]) -> GroupElement {
        let free = self.weight.mul_vec(x);
        let torsion = self.torsion.mul_vec(x);
        self.group()
            .element(free, torsion)
            .expect("presentation shapes match")
    }

    /// The joint kernel `{x : weight x = 0 and torsion x = 0 mod d}` as a
    /// lattice; equals the fan matrix row lattice for a valid presentation.
    pub fn joint_kernel(&self) -> Lattice {
        Self::joint_kernel_of(&self.weight, &self.torsion, &self.torsion_orders)
    }

    fn joint_kernel_of(weight: &IntMatrix, torsion: &IntMatrix, orders: &[BigInt]) -> Lattice {
        let free_kernel = integer_kernel(weight);
        let k = orders.len();
        if k == 0 {
            return free_kernel;
        }
        let basis = free_kernel.basis();
        // residues of the kernel basis under the torsion map
        let values = torsion.mul(&basis.transpose());
        let mut relation = IntMatrix::zero(k, k);
        for (j, d) in orders.iter().enumerate() {
            relation.set(j, j, d.clone());
        }
        let stacked = values.hstack(&relation);
        let coeff_kernel = integer_kernel(&stacked);
        let coeffs = coeff_kernel
            .basis()
            .select_columns(&(0..free_kernel.rank()).collect::<Vec<_>>());
        Lattice::from_rows(&coeffs.mul(basis))
    }

    /// Torsion rows reduced entry-wise into `[0, d_j)`.
    fn reduce_torsion_rows(torsion: &IntMatrix, orders: &[BigInt]) -> IntMatrix {
        IntMatrix::from_fn(torsion.rows(), torsion.cols(), |r, c| {
            torsion.at(r, c).mod_floor(&orders[r])
        })
    }

    /// Whether `x -> (weight x, torsion x mod d)` maps onto `Z^r (+) T`:
    /// the stacked matrix together with the torsion relations must have all
    /// invariant factors 1 at full rank.
    pub fn is_surjective(&self) -> bool {
        let k = self.torsion_orders.len();
        let rk = self.rank + k;
        let stacked = self.weight.vstack(&self.torsion);
        let mut relations = IntMatrix::zero(rk, k);
        for (j, d) in self.torsion_orders.iter().enumerate() {
            relations.set(self.rank + j, j, d.clone());
        }
        let full = stacked.hstack(&relations);
        let inv = snf(&full).invariant_factors();
        inv.len() == rk && inv.iter().all(|d| d.is_one())
    }
}

/// Canonical class-group presentation from the Smith normal form of the fan
/// matrix, with the weight rows replaced by the canonical kernel basis.
pub fn class_group(matrix: &FanMatrix) -> Result<ClassGroupPresentation, ToricError> {
    matrix.validated()?;
    let vm = matrix.as_matrix();
    let n = vm.rows();
    let m = vm.cols();
    let r = m - n;
    let d = snf(&vm);
    // coordinates of x in the adapted basis are w^T x; rows n.. give the free
    // part, rows with invariant factor >= 2 give the torsion residues
    let wt = d.w.transpose();
    let diag = d.diagonal();
    let torsion_orders: Vec<BigInt> = diag
        .iter()
        .filter(|x| **x >= BigInt::from(2))
        .cloned()
        .collect();
    let torsion_rows: Vec<usize> = (0..n).filter(|&i| diag[i] >= BigInt::from(2)).collect();
    let weight_raw = wt.select_rows(&(n..m).collect::<Vec<_>>());
    let torsion = ClassGroupPresentation::reduce_torsion_rows(
        &wt.select_rows(&torsion_rows),
        &torsion_orders,
    );

    let weight = weight_matrix(matrix)?;
    debug_assert!(weight.mul(&vm.transpose()).is_zero());
    // the canonical weight matrix differs from the raw free rows by a
    // unimodular change of basis of Z^r only, so the torsion rows still fit
    debug_assert_eq!(Lattice::from_rows(&weight), Lattice::from_rows(&weight_raw),);
    let _ = weight_raw;
    let pres = ClassGroupPresentation {
        rank: r,
        torsion_orders,
        weight,
        torsion,
    };
    debug_assert_eq!(pres.joint_kernel(), Lattice::from_rows(&vm));
    Ok(pres)
}

/// Class-group presentation with caller-supplied weight and torsion matrices
/// (e.g. the ones printed in a reference computation); both are validated
/// against the fan matrix.
pub fn class_group_with(
    matrix: &FanMatrix,
    weight: IntMatrix,
    torsion: IntMatrix,
) -> Result<ClassGroupPresentation, ToricError> {
    let canonical = class_group(matrix)?;
    if Lattice::from_rows(&weight) != Lattice::from_rows(&canonical.weight)
        || weight.rows() != canonical.rank
    {
        return Err(ToricError::BadWeightOverride);
    }
    if torsion.rows() != canonical.torsion_orders.len() {
        return Err(ToricError::BadTorsionOverride(format!(
            "expected {} torsion rows, got {}",
            canonical.torsion_orders.len(),
            torsion.rows()
        )));
    }
    if torsion.cols() != matrix.num_rays() {
        return Err(ToricError::BadTorsionOverride(
            "torsion row length must match the number of rays".into(),
        ));
    }
    let torsion = ClassGroupPresentation::reduce_torsion_rows(&torsion, &canonical.torsion_orders);
    let pres = ClassGroupPresentation {
        rank: canonical.rank,
        torsion_orders: canonical.torsion_orders.clone(),
        weight,
        torsion,
    };
    if pres.joint_kernel() != Lattice::from_rows(&matrix.as_matrix()) {
        return Err(ToricError::BadTorsionOverride(
            "joint kernel of (weight, torsion) is not the row lattice of the fan matrix".into(),
        ));
    }
    if !pres.is_surjective() {
        return Err(ToricError::BadTorsionOverride(
            "presentation is not surjective onto Z^r (+) T".into(),
        ));
    }
    Ok(pres)
}

/// The lattice of torus-invariant Cartier divisors: the intersection over
/// maximal cones of (row lattice of the fan matrix) + (coordinate sublattice
/// on the cone's complement indices).
pub fn cartier_lattice(matrix: &FanMatrix, fan: &Fan) -> Result<Lattice, ToricError> {
    ensure_complete(matrix, fan)?;
    let m = matrix.num_rays();
    let rows = Lattice::from_rows(&matrix.as_matrix());
    let mut result: Option<Lattice> = None;
    for complement in fan.complement_sets() {
        let mut basis_rows: Vec<Vec<BigInt>> = Vec::with_capacity(rows.rank() + complement.len());
        for i in 0..rows.rank() {
            basis_rows.push(rows.basis().row_vec(i));
        }
        for &i in &complement {
            let mut e = vec![BigInt::zero(); m];
            e[i - 1] = BigInt::one();
            basis_rows.push(e);
        }
        let summand = Lattice::from_rows(&IntMatrix::from_rows(m, basis_rows));
        result = Some(match result {
            None => summand,
            Some(acc) => acc.intersection(&summand).expect("same ambient"),
        });
    }
    Ok(result.expect("complete fan has maximal cones"))
}

/// Generators of the Picard subgroup inside the class group: images of a
/// Cartier-lattice basis, reduced to the canonical generating set of the
/// subgroup they span.
pub fn picard_subgroup(
    matrix: &FanMatrix,
    fan: &Fan,
    pres: &ClassGroupPresentation,
) -> Result<Vec<GroupElement>, ToricError> {
    let cartier = cartier_lattice(matrix, fan)?;
    let group = pres.group();
    let images: Vec<GroupElement> = (0..cartier.rank())
        .map(|i| pres.class_of(cartier.basis().row(i)))
        .collect();
    let lat = group.subgroup_lattice(&images);
    let r = group.rank();
    let k = group.torsion_rank();
    let mut gens = Vec::new();
    for i in 0..lat.rank() {
        let row = lat.basis().row(i);
        let g = group
            .element(row[..r].to_vec(), row[r..r + k].to_vec())
            .expect("shapes match");
        if !g.is_zero() {
            gens.push(g);
        }
    }
    Ok(gens)
}

/// How the purity verdict was reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionPath {
    /// `gcd(|det covering_map|, m_sigma_hat) = 1` certifies purity outright.
    SufficientCondition {
        torsion_order: BigInt,
        covering_m_sigma: BigInt,
    },
    /// The free-part containment test decided, with a witness free part on
    /// success or the index of the failing divisor on failure.
    FreePartTest {
        witness: Option<Vec<GroupElement>>,
        failing_index: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Purity {
    Pure,
    Impure,
}

#[derive(Clone, Debug)]
pub struct PurityReport {
    pub verdict: Purity,
    pub via: DecisionPath,
    pub pic_generators: Vec<GroupElement>,
    pub cl: FgAbGroup,
}

/// Certificate that the variety is pure by the coprimality sufficient
/// condition: the covering multiplicity gcd is coprime to the torsion order.
pub fn purity_sufficient(
    matrix: &FanMatrix,
    fan: &Fan,
) -> Result<Option<(BigInt, BigInt)>, ToricError> {
    ensure_complete(matrix, fan)?;
    let decomp = cf_decomposition(matrix)?;
    let torsion_order = decomp.torsion_order();
    let covering_fan = Fan::new(decomp.covering.clone(), fan.max_cones().to_vec())?;
    let m_hat = m_sigma(&covering_fan)?;
    if torsion_order.gcd(&m_hat).is_one() {
        Ok(Some((torsion_order, m_hat)))
    } else {
        Ok(None)
    }
}

/// Decide purity: first the coprimality fast path, then the free-part
/// containment test on the Picard generators.
pub fn is_pure(
    matrix: &FanMatrix,
    fan: &Fan,
    pres: &ClassGroupPresentation,
) -> Result<PurityReport, ToricError> {
    let group = pres.group();
    let gens = picard_subgroup(matrix, fan, pres)?;
    if let Some((torsion_order, covering_m_sigma)) = purity_sufficient(matrix, fan)? {
        return Ok(PurityReport {
            verdict: Purity::Pure,
            via: DecisionPath::SufficientCondition {
                torsion_order,
                covering_m_sigma,
            },
            pic_generators: gens,
            cl: group,
        });
    }
    match contained_in_free_part(&group, &gens)? {
        FreePartVerdict::Contained { witness } => Ok(PurityReport {
            verdict: Purity::Pure,
            via: DecisionPath::FreePartTest {
                witness: Some(witness),
                failing_index: None,
            },
            pic_generators: gens,
            cl: group,
        }),
        FreePartVerdict::NotContained { failing_index } => Ok(PurityReport {
            verdict: Purity::Impure,
            via: DecisionPath::FreePartTest {
                witness: None,
                failing_index: Some(failing_index),
            },
            pic_generators: gens,
            cl: group,
        }),
    }
}

/// Purity certificate via uniqueness of the complete fan on the ray set.
pub fn unique_fan_purity(matrix: &FanMatrix) -> Result<Option<Fan>, ToricError> {
    let fans = enumerate_complete_fans(matrix)?;
    if fans.len() == 1 {
        Ok(Some(fans.into_iter().next().expect("one fan")))
    } else {
        Ok(None)
    }
}

/// Picard group of the covering inside `Z^r`: the intersection over maximal
/// cones of the column lattices of the weight submatrices on complement
/// index sets. Requires a surjective weight matrix.
pub fn pic_of_pws(weight: &IntMatrix, fan: &Fan) -> Result<Lattice, ToricError> {
    let r = weight.rows();
    let inv = snf(weight).invariant_factors();
    if inv.len() != r || !inv.iter().all(|d| d.is_one()) {
        return Err(ToricError::WeightNotSurjective);
    }
    let mut result: Option<Lattice> = None;
    for complement in fan.complement_sets() {
        let cols: Vec<usize> = complement.iter().map(|i| i - 1).collect();
        let sub = weight.select_columns(&cols);
        let col_lattice = Lattice::from_rows(&sub.transpose());
        result = Some(match result {
            None => col_lattice,
            Some(acc) => acc.intersection(&col_lattice).expect("same ambient"),
        });
    }
    result.ok_or(ToricError::NotComplete)
}

/// The coefficient vectors `a_I` (supported on each complement set `I`, with
/// `weight * a_I = x`) and the difference vectors along a canonical spanning
/// chain of ridge-adjacent maximal cones.
#[derive(Clone, Debug)]
pub struct UVectors {
    /// `a_I` per complement set, keyed by the complement indices.
    pub coefficients: BTreeMap<Vec<usize>, Vec<BigInt>>,
    /// `u_{I,J} = a_I - a_J` along the spanning chain, keyed by the pair.
    pub chain: Vec<((Vec<usize>, Vec<usize>), Vec<BigInt>)>,
}

impl UVectors {
    /// `u_{I,J}` for an arbitrary pair of complement sets.
    pub fn difference(&self, i: &[usize], j: &[usize]) -> Option<Vec<BigInt>> {
        let a = self.coefficients.get(i)?;
        let b = self.coefficients.get(j)?;
        Some(vec_sub(a, b))
    }
}

pub fn u_vectors(weight: &IntMatrix, fan: &Fan, x: &[BigInt]) -> Result<UVectors, ToricError> {
    let mut coefficients = BTreeMap::new();
    let m = fan.matrix().num_rays();
    for complement in fan.complement_sets() {
        let cols: Vec<usize> = complement.iter().map(|i| i - 1).collect();
        let sub = weight.select_columns(&cols);
        let y = solve_integer(&sub, x)
            .ok_or_else(|| ToricError::NotInColumnLattice(Cone::new(complement.clone())))?;
        let mut a = vec![BigInt::zero(); m];
        for (pos, &i) in complement.iter().enumerate() {
            a[i - 1] = y[pos].clone();
        }
        coefficients.insert(complement, a);
    }
    let chain = spanning_chain(fan)?
        .into_iter()
        .map(|(i, j)| {
            let u = vec_sub(&coefficients[&i], &coefficients[&j]);
            ((i, j), u)
        })
        .collect();
    Ok(UVectors {
        coefficients,
        chain,
    })
}

/// Spanning tree of the ridge-adjacency graph of the maximal cones, as edges
/// between complement index sets, in canonical BFS order.
fn spanning_chain(fan: &Fan) -> Result<Vec<(Vec<usize>, Vec<usize>)>, ToricError> {
    let cones = fan.max_cones();
    let complements = fan.complement_sets();
    let n = fan.matrix().dim();
    let count = cones.len();
    if count == 0 {
        return Err(ToricError::NotComplete);
    }
    let mut visited = vec![false; count];
    let mut queue = std::collections::VecDeque::new();
    let mut edges = Vec::new();
    visited[0] = true;
    queue.push_back(0);
    while let Some(cur) = queue.pop_front() {
        for next in 0..count {
            if visited[next] {
                continue;
            }
            let shared = cones[cur].intersection_indices(&cones[next]);
            if shared.len() == n - 1 {
                visited[next] = true;
                edges.push((complements[cur].clone(), complements[next].clone()));
                queue.push_back(next);
            }
        }
    }
    if visited.iter().any(|v| !v) {
        return Err(ToricError::NotComplete);
    }
    Ok(edges)
}

/// Characterize the free-coordinate image of the Picard group inside the
/// weight-space `Z^r`: the sublattice of the covering Picard lattice cut out
/// by requiring every chained difference vector to land in the row lattice of
/// the fan matrix (equivalently: zero torsion residues).
///
/// The result always equals the free-coordinate image of [`picard_subgroup`];
/// the purity precondition of the characterization is enforced up front.
pub fn pic_characterization(
    matrix: &FanMatrix,
    fan: &Fan,
    pres: &ClassGroupPresentation,
) -> Result<Lattice, ToricError> {
    let report = is_pure(matrix, fan, pres)?;
    if report.verdict == Purity::Impure {
        return Err(ToricError::NotPure);
    }
    let covering_pic = pic_of_pws(&pres.weight, fan)?;
    let r = pres.rank;
    let k = pres.torsion_orders.len();
    let basis = covering_pic.basis();
    let chain = spanning_chain(fan)?;

    let characterized = if k == 0 || chain.is_empty() {
        covering_pic.clone()
    } else {
        // torsion residues of every chained difference vector, linear in the
        // coefficients c of x = c * basis
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut orders: Vec<BigInt> = Vec::new();
        for (i, j) in &chain {
            let mut per_basis: Vec<Vec<BigInt>> = Vec::with_capacity(basis.rows());
            for b in 0..basis.rows() {
                let uv = u_vectors(&pres.weight, fan, basis.row(b))?;
                let u = uv.difference(i, j).expect("chain endpoints present");
                per_basis.push(pres.torsion.mul_vec(&u));
            }
            for t in 0..k {
                rows.push((0..basis.rows()).map(|b| per_basis[b][t].clone()).collect());
                orders.push(pres.torsion_orders[t].clone());
            }
        }
        let phi = IntMatrix::from_rows(basis.rows(), rows);
        let mut relations = IntMatrix::zero(phi.rows(), phi.rows());
        for (j, d) in orders.iter().enumerate() {
            relations.set(j, j, d.clone());
        }
        let stacked = phi.hstack(&relations);
        let kernel = integer_kernel(&stacked);
        let coeffs = kernel
            .basis()
            .select_columns(&(0..basis.rows()).collect::<Vec<_>>());
        Lattice::from_rows(&coeffs.mul(basis))
    };

    // must coincide with the free-coordinate image of the Picard subgroup
    let free_rows: Vec<Vec<BigInt>> = report
        .pic_generators
        .iter()
        .map(|g| g.free().to_vec())
        .collect();
    let free_image = Lattice::from_rows(&IntMatrix::from_rows(r, free_rows));
    assert_eq!(
        characterized, free_image,
        "characterized lattice must equal the Picard free image"
    );
    Ok(characterized)
}

fn ensure_complete(matrix: &FanMatrix, fan: &Fan) -> Result<(), ToricError> {
    matrix.validated()?;
    if !is_complete(fan)? {
        return Err(ToricError::NotComplete);
    }
    Ok(())
}

/// Transport a fan's cone index sets onto another fan matrix with the same
/// number of columns (the covering shares column indices with the input).
pub fn transport_fan(target: &FanMatrix, fan: &Fan) -> Result<Fan, FanError> {
    Fan::new(target.clone(), fan.max_cones().to_vec())
}

/// Multiplicities of the fan's maximal cones on a given matrix, in the
/// canonical cone order.
pub fn multiplicity_list(matrix: &FanMatrix, fan: &Fan) -> Vec<BigInt> {
    fan.max_cones()
        .iter()
        .map(|c| multiplicity(matrix, c))
        .collect()
}
