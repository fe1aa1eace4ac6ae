//! Rational simplicial cones and fans on the columns of a fan matrix:
//! validation, face and completeness tests, multiplicities, candidate cones
//! and enumeration of all complete fans on a given ray set.

pub mod geometry;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::matrix::{dot, gcd_vec, is_zero_vec, primitive_vector, same_ray};
use crate::linalg::{gcd_maximal_minors, integer_kernel, IntMatrix};
use crate::util::SplitMix64;
use geometry::{cone_contains, intersection_extreme_rays, to_rational};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FanError {
    #[error("cone index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("cone {cone} is not simplicial: its generators are dependent")]
    NotSimplicial { cone: Cone },
    #[error("point length {got} does not match fan dimension {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("operation requires maximal cones of full dimension {dim}")]
    NotFullDimensional { dim: usize },
    #[error("cones {first} and {second} do not intersect in a common face")]
    NotAFan { first: Cone, second: Cone },
    #[error("fan has no maximal cones")]
    EmptyFan,
    #[error("columns do not positively span the ambient space")]
    NotSpanning,
    #[error("fan matrix is invalid: {0:?}")]
    InvalidMatrix(Vec<FanMatrixViolation>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FanMatrixViolation {
    ZeroColumn(usize),
    NonPrimitiveColumn(usize),
    EqualColumns(usize, usize),
    SameRayColumns(usize, usize),
    RankDeficient { rank: usize, dim: usize },
}

impl fmt::Display for FanMatrixViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FanMatrixViolation::ZeroColumn(i) => write!(f, "column {i} is zero"),
            FanMatrixViolation::NonPrimitiveColumn(i) => write!(f, "column {i} is not primitive"),
            FanMatrixViolation::EqualColumns(i, j) => write!(f, "columns {i} and {j} are equal"),
            FanMatrixViolation::SameRayColumns(i, j) => {
                write!(f, "columns {i} and {j} generate the same ray")
            }
            FanMatrixViolation::RankDeficient { rank, dim } => {
                write!(f, "matrix has rank {rank}, expected {dim}")
            }
        }
    }
}

/// An `n x m` integer matrix whose columns are the primitive generators of
/// the rays of a fan. Columns are addressed 1-based throughout, matching the
/// usual `<i, j, k>` cone notation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FanMatrix {
    dim: usize,
    columns: Vec<Vec<BigInt>>,
}

impl FanMatrix {
    pub fn new(dim: usize, columns: Vec<Vec<BigInt>>) -> Result<Self, FanError> {
        for (i, c) in columns.iter().enumerate() {
            if c.len() != dim {
                return Err(FanError::DimensionMismatch {
                    got: c.len(),
                    want: dim,
                });
            }
            let _ = i;
        }
        Ok(FanMatrix { dim, columns })
    }

    /// Columns given as i64 vectors; convenience for fixtures and tests.
    pub fn from_i64(dim: usize, columns: &[&[i64]]) -> Self {
        FanMatrix::new(
            dim,
            columns
                .iter()
                .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("column lengths match dimension")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_rays(&self) -> usize {
        self.columns.len()
    }

    /// Column by 1-based index.
    pub fn column(&self, index: usize) -> &[BigInt] {
        &self.columns[index - 1]
    }

    pub fn as_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.dim, self.columns.len(), |r, c| {
            self.columns[c][r].clone()
        })
    }

    /// Generator matrix of the columns selected by 1-based indices.
    pub fn columns_matrix(&self, indices: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(self.dim, indices.len(), |r, c| {
            self.columns[indices[c] - 1][r].clone()
        })
    }

    /// Check every fan-matrix invariant, reporting all violations.
    pub fn validate(&self) -> Vec<FanMatrixViolation> {
        let mut out = Vec::new();
        for (i, c) in self.columns.iter().enumerate() {
            if is_zero_vec(c) {
                out.push(FanMatrixViolation::ZeroColumn(i + 1));
            } else if gcd_vec(c) != BigInt::from(1) {
                out.push(FanMatrixViolation::NonPrimitiveColumn(i + 1));
            }
        }
        for i in 0..self.columns.len() {
            for j in i + 1..self.columns.len() {
                if self.columns[i] == self.columns[j] {
                    out.push(FanMatrixViolation::EqualColumns(i + 1, j + 1));
                } else if same_ray(&self.columns[i], &self.columns[j]) {
                    out.push(FanMatrixViolation::SameRayColumns(i + 1, j + 1));
                }
            }
        }
        let rank = self.as_matrix().rank();
        if rank != self.dim {
            out.push(FanMatrixViolation::RankDeficient {
                rank,
                dim: self.dim,
            });
        }
        out
    }

    pub fn validated(&self) -> Result<(), FanError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(FanError::InvalidMatrix(v))
        }
    }

    /// Do the columns positively span the whole space? Checked exactly via
    /// conic Caratheodory: `±e_i` must be a nonnegative combination of some
    /// independent column subset.
    pub fn positively_spans(&self) -> bool {
        let n = self.dim;
        for i in 0..n {
            for sign in [1i64, -1] {
                let mut target = vec![BigRational::zero(); n];
                target[i] = BigRational::from(BigInt::from(sign));
                if !self.cone_hull_contains(&target) {
                    return false;
                }
            }
        }
        true
    }

    /// Membership of a point in the cone generated by all columns.
    pub fn cone_hull_contains(&self, p: &[BigRational]) -> bool {
        let m = self.num_rays();
        let n = self.dim;
        for k in 1..=n.min(m) {
            for subset in (1..=m).combinations(k) {
                let w = self.columns_matrix(&subset);
                if w.rank() < k {
                    continue;
                }
                if cone_contains(&w, p) {
                    return true;
                }
            }
        }
        p.iter().all(|x| x.is_zero())
    }
}

/// A simplicial cone described by the sorted set of 1-based column indices of
/// its generators.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Cone {
    indices: Vec<usize>,
}

impl Cone {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Cone { indices }
    }

    pub fn empty() -> Self {
        Cone { indices: vec![] }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_face_index_subset_of(&self, other: &Cone) -> bool {
        self.indices.iter().all(|i| other.contains_index(*i))
    }

    pub fn intersection_indices(&self, other: &Cone) -> Cone {
        Cone::new(
            self.indices
                .iter()
                .copied()
                .filter(|i| other.contains_index(*i))
                .collect(),
        )
    }

    /// All subsets of size `len - 1`.
    pub fn facets(&self) -> Vec<Cone> {
        (0..self.indices.len())
            .map(|drop| {
                Cone::new(
                    self.indices
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != drop)
                        .map(|(_, &i)| i)
                        .collect(),
                )
            })
            .collect()
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{}>",
            self.indices
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// A fan: a fan matrix plus a set of maximal cones (index sets into columns).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fan {
    matrix: FanMatrix,
    max_cones: Vec<Cone>,
}

impl Fan {
    /// Checks index ranges and simpliciality of every cone; pairwise
    /// face-to-face validity is checked separately by [`is_fan`].
    pub fn new(matrix: FanMatrix, cones: Vec<Cone>) -> Result<Fan, FanError> {
        let max = matrix.num_rays();
        let mut seen = BTreeSet::new();
        for c in &cones {
            for &i in c.indices() {
                if i == 0 || i > max {
                    return Err(FanError::IndexOutOfRange { index: i, max });
                }
            }
            let w = matrix.columns_matrix(c.indices());
            if w.rank() < c.len() {
                return Err(FanError::NotSimplicial { cone: c.clone() });
            }
            seen.insert(c.clone());
        }
        Ok(Fan {
            matrix,
            max_cones: seen.into_iter().collect(),
        })
    }

    pub fn from_index_lists(matrix: FanMatrix, cones: &[Vec<usize>]) -> Result<Fan, FanError> {
        Fan::new(matrix, cones.iter().map(|c| Cone::new(c.clone())).collect())
    }

    pub fn matrix(&self) -> &FanMatrix {
        &self.matrix
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    /// 1-based indices of the columns used as rays by some maximal cone.
    pub fn rays_used(&self) -> BTreeSet<usize> {
        self.max_cones
            .iter()
            .flat_map(|c| c.indices().iter().copied())
            .collect()
    }

    /// Complement index sets: for each maximal cone, the column indices not
    /// among its generators.
    pub fn complement_sets(&self) -> Vec<Vec<usize>> {
        let m = self.matrix.num_rays();
        self.max_cones
            .iter()
            .map(|c| (1..=m).filter(|i| !c.contains_index(*i)).collect())
            .collect()
    }

    /// Membership of a rational point in the support of the fan.
    pub fn support_contains(&self, p: &[BigRational]) -> bool {
        self.max_cones
            .iter()
            .any(|c| cone_contains(&self.matrix.columns_matrix(c.indices()), p))
    }
}

/// Is `p` a nonnegative rational combination of the cone's generators?
pub fn cone_contains_point(
    matrix: &FanMatrix,
    cone: &Cone,
    p: &[BigRational],
) -> Result<bool, FanError> {
    if p.len() != matrix.dim() {
        return Err(FanError::DimensionMismatch {
            got: p.len(),
            want: matrix.dim(),
        });
    }
    Ok(cone_contains(&matrix.columns_matrix(cone.indices()), p))
}

/// Outcome of the pairwise face test.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FaceIntersection {
    /// The cones meet exactly in the cone on their shared indices.
    Face(Cone),
    /// A primitive integer point in the intersection but outside the
    /// shared-index cone.
    NotFace(Vec<BigInt>),
}

/// Decide whether two simplicial cones intersect in their common face.
///
/// The geometric intersection is computed exactly; the verdict compares its
/// extreme rays with the cone on the shared generator indices.
pub fn common_face_intersection(matrix: &FanMatrix, c1: &Cone, c2: &Cone) -> FaceIntersection {
    let common = c1.intersection_indices(c2);
    let w1 = matrix.columns_matrix(c1.indices());
    let w2 = matrix.columns_matrix(c2.indices());
    let wc = matrix.columns_matrix(common.indices());
    for ray in intersection_extreme_rays(&w1, &w2) {
        if !cone_contains(&wc, &to_rational(&ray)) {
            return FaceIntersection::NotFace(ray);
        }
    }
    FaceIntersection::Face(common)
}

/// Violation found by [`is_fan`]: the offending pair and a witness point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FanViolation {
    pub first: Cone,
    pub second: Cone,
    pub witness: Vec<BigInt>,
}

/// Check the fan axiom: every pair of maximal cones meets in a common face.
pub fn is_fan(fan: &Fan) -> Result<(), FanViolation> {
    for (a, b) in fan.max_cones.iter().tuple_combinations() {
        if let FaceIntersection::NotFace(witness) = common_face_intersection(&fan.matrix, a, b) {
            return Err(FanViolation {
                first: a.clone(),
                second: b.clone(),
                witness,
            });
        }
    }
    Ok(())
}

/// Multiplicity of a simplicial cone: the index of the subgroup generated by
/// its primitive generators inside the lattice of their linear span, i.e. the
/// gcd of the maximal minors of the generator matrix.
pub fn multiplicity(matrix: &FanMatrix, cone: &Cone) -> BigInt {
    let w = matrix.columns_matrix(cone.indices());
    gcd_maximal_minors(&w, cone.len())
}

/// gcd of the multiplicities of the maximal cones.
pub fn m_sigma(fan: &Fan) -> Result<BigInt, FanError> {
    if fan.max_cones.is_empty() {
        return Err(FanError::EmptyFan);
    }
    Ok(fan.max_cones.iter().fold(BigInt::zero(), |acc, c| {
        acc.gcd(&multiplicity(&fan.matrix, c))
    }))
}

/// Completeness of a simplicial fan with full-dimensional maximal cones: the
/// fan is complete iff every ridge (facet of a maximal cone) is shared by
/// exactly two maximal cones. A deterministic exact point-location pass backs
/// the combinatorial criterion up.
pub fn is_complete(fan: &Fan) -> Result<bool, FanError> {
    let n = fan.matrix.dim();
    if fan.max_cones.is_empty() {
        return Ok(false);
    }
    if fan.max_cones.iter().any(|c| c.len() != n) {
        return Err(FanError::NotFullDimensional { dim: n });
    }
    if let Err(v) = is_fan(fan) {
        return Err(FanError::NotAFan {
            first: v.first,
            second: v.second,
        });
    }
    let mut ridge_count: BTreeMap<Cone, usize> = BTreeMap::new();
    for c in &fan.max_cones {
        for f in c.facets() {
            *ridge_count.entry(f).or_insert(0) += 1;
        }
    }
    let complete = ridge_count.values().all(|&k| k == 2);
    if complete {
        // safety net: sampled exact points must be covered
        let mut rng = SplitMix64::new(0x5eed_c0de);
        for _ in 0..16 {
            let p: Vec<BigRational> = (0..n)
                .map(|_| BigRational::from(BigInt::from(rng.next_i64(-9, 9))))
                .collect();
            assert!(
                fan.support_contains(&p),
                "ridge-paired fan failed point location; this is a bug"
            );
        }
    }
    Ok(complete)
}

/// Ridges of the fan that belong to exactly one maximal cone, with their
/// carrier cones.
pub fn unpaired_ridges(fan: &Fan) -> Vec<(Cone, Cone)> {
    let mut carriers: BTreeMap<Cone, Vec<Cone>> = BTreeMap::new();
    for c in &fan.max_cones {
        for f in c.facets() {
            carriers.entry(f).or_default().push(c.clone());
        }
    }
    carriers
        .into_iter()
        .filter(|(_, cs)| cs.len() == 1)
        .map(|(f, cs)| (f, cs[0].clone()))
        .collect()
}

/// Candidate maximal cones on a fan matrix.
pub struct CandidateCones {
    /// All full-dimensional simplicial cones on column subsets.
    pub total: Vec<Cone>,
    /// Total candidates whose cone contains no column other than its
    /// generators.
    pub minimal: Vec<Cone>,
}

pub fn candidate_cones(matrix: &FanMatrix) -> CandidateCones {
    let n = matrix.dim();
    let m = matrix.num_rays();
    let mut total = Vec::new();
    let mut minimal = Vec::new();
    for subset in (1..=m).combinations(n) {
        let w = matrix.columns_matrix(&subset);
        if w.det().is_zero() {
            continue;
        }
        let cone = Cone::new(subset.clone());
        let is_min = (1..=m)
            .filter(|j| !cone.contains_index(*j))
            .all(|j| !cone_contains(&w, &to_rational(matrix.column(j))));
        total.push(cone.clone());
        if is_min {
            minimal.push(cone);
        }
    }
    CandidateCones { total, minimal }
}

/// gcds of `|det|` over total and minimal candidate cones. The two values
/// agree for every fan matrix; disagreement indicates an internal error.
pub fn minor_gcds(matrix: &FanMatrix) -> (BigInt, BigInt) {
    let cand = candidate_cones(matrix);
    let g = |cones: &[Cone]| {
        cones.iter().fold(BigInt::zero(), |acc, c| {
            acc.gcd(&matrix.columns_matrix(c.indices()).det().abs())
        })
    };
    let m_tot = g(&cand.total);
    let m_min = g(&cand.minimal);
    assert_eq!(m_tot, m_min, "total and minimal minor gcds must coincide");
    (m_tot, m_min)
}

/// Primitive integer normal of the hyperplane spanned by a ridge (an
/// independent set of `dim - 1` columns).
fn ridge_normal(matrix: &FanMatrix, ridge: &Cone) -> Vec<BigInt> {
    let w = matrix.columns_matrix(ridge.indices());
    let kernel = integer_kernel(&w.transpose());
    assert_eq!(kernel.rank(), 1, "ridge must span a hyperplane");
    primitive_vector(kernel.basis().row(0))
}

/// Memoized pairwise face compatibility used by the ridge-driven searches.
struct PairCompat<'a> {
    matrix: &'a FanMatrix,
    cache: HashMap<(Cone, Cone), bool>,
}

impl<'a> PairCompat<'a> {
    fn new(matrix: &'a FanMatrix) -> Self {
        PairCompat {
            matrix,
            cache: HashMap::new(),
        }
    }

    fn compatible(&mut self, a: &Cone, b: &Cone) -> bool {
        let key = if a <= b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        if let Some(&v) = self.cache.get(&key) {
            return v;
        }
        let v = matches!(
            common_face_intersection(self.matrix, &key.0, &key.1),
            FaceIntersection::Face(_)
        );
        self.cache.insert(key, v);
        v
    }
}

/// Grow `chosen` by pairing unpaired ridges against candidate cones until no
/// ridge is unpaired, collecting every completion (or the first when
/// `collect_all` is false). Exploration order is canonical, so results are
/// deterministic.
pub(crate) fn ridge_search(
    matrix: &FanMatrix,
    initial: &[Cone],
    candidates: &[Cone],
    collect_all: bool,
) -> Vec<Vec<Cone>> {
    let mut results: BTreeSet<Vec<Cone>> = BTreeSet::new();
    let mut compat = PairCompat::new(matrix);
    let mut chosen: Vec<Cone> = initial.to_vec();
    chosen.sort();
    search_step(
        matrix,
        &mut chosen,
        candidates,
        collect_all,
        &mut compat,
        &mut results,
    );
    results.into_iter().collect()
}

fn search_step(
    matrix: &FanMatrix,
    chosen: &mut Vec<Cone>,
    candidates: &[Cone],
    collect_all: bool,
    compat: &mut PairCompat,
    results: &mut BTreeSet<Vec<Cone>>,
) {
    if !collect_all && !results.is_empty() {
        return;
    }
    let mut ridge_count: BTreeMap<Cone, (usize, Cone)> = BTreeMap::new();
    for c in chosen.iter() {
        for f in c.facets() {
            let e = ridge_count.entry(f).or_insert((0, c.clone()));
            e.0 += 1;
        }
    }
    if ridge_count.values().any(|&(k, _)| k > 2) {
        return;
    }
    let Some((ridge, (_, carrier))) = ridge_count.iter().find(|(_, (k, _))| *k == 1) else {
        let mut fan = chosen.clone();
        fan.sort();
        results.insert(fan);
        return;
    };
    let ridge = ridge.clone();
    let carrier = carrier.clone();
    let normal = ridge_normal(matrix, &ridge);
    let carrier_extra = carrier
        .indices()
        .iter()
        .copied()
        .find(|i| !ridge.contains_index(*i))
        .expect("carrier has one generator off the ridge");
    let side = dot(&normal, matrix.column(carrier_extra));
    debug_assert!(!side.is_zero());

    for cand in candidates {
        if chosen.contains(cand) || !ridge.is_face_index_subset_of(cand) {
            continue;
        }
        let extra = cand
            .indices()
            .iter()
            .copied()
            .find(|i| !ridge.contains_index(*i))
            .expect("candidate has one generator off the ridge");
        let other_side = dot(&normal, matrix.column(extra));
        if (&side * &other_side).sign() != Sign::Minus {
            continue;
        }
        if !chosen.iter().all(|c| compat.compatible(c, cand)) {
            continue;
        }
        chosen.push(cand.clone());
        search_step(matrix, chosen, candidates, collect_all, compat, results);
        chosen.pop();
        if !collect_all && !results.is_empty() {
            return;
        }
    }
}

/// A generic rational point avoiding every hyperplane spanned by `dim - 1`
/// independent columns; taken on the moment curve, deterministically.
pub(crate) fn generic_point(matrix: &FanMatrix) -> Vec<BigRational> {
    let n = matrix.dim();
    let m = matrix.num_rays();
    't: for t in 1i64.. {
        let p: Vec<BigInt> = (0..n)
            .scan(BigInt::one(), |acc, _| {
                let cur = acc.clone();
                *acc *= BigInt::from(t);
                Some(cur)
            })
            .collect();
        for subset in (1..=m).combinations(n.saturating_sub(1)) {
            let w = matrix.columns_matrix(&subset);
            if w.rank() + 1 != n {
                continue;
            }
            let normal = ridge_normal(matrix, &Cone::new(subset));
            if dot(&normal, &p).is_zero() {
                continue 't;
            }
        }
        return to_rational(&p);
    }
    unreachable!("moment curve escapes finitely many hyperplanes");
}

/// Enumerate all complete simplicial fans whose rays are exactly the columns
/// of the matrix, by seeding on the candidate cones over a fixed generic
/// point and growing across unpaired ridges.
pub fn enumerate_complete_fans(matrix: &FanMatrix) -> Result<Vec<Fan>, FanError> {
    matrix.validated()?;
    if !matrix.positively_spans() {
        return Err(FanError::NotSpanning);
    }
    let cand = candidate_cones(matrix);
    let p = generic_point(matrix);
    let seeds: Vec<&Cone> = cand
        .minimal
        .iter()
        .filter(|c| cone_contains(&matrix.columns_matrix(c.indices()), &p))
        .collect();
    let mut found: BTreeSet<Vec<Cone>> = BTreeSet::new();
    for seed in seeds {
        for fan_cones in ridge_search(matrix, std::slice::from_ref(seed), &cand.minimal, true) {
            found.insert(fan_cones);
        }
    }
    let mut fans = Vec::new();
    for cones in found {
        let fan = Fan::new(matrix.clone(), cones)?;
        debug_assert!(is_fan(&fan).is_ok());
        if is_complete(&fan)? {
            fans.push(fan);
        }
    }
    Ok(fans)
}
