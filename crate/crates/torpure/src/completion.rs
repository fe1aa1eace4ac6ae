//! Constructive fan extension: stellar subdivision when the new ray lies in
//! the current support, visible-facet attachment when it does not, and the
//! derived completion-without-new-rays decision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::fans::geometry::{cone_contains, simplicial_coordinates, to_rational};
use crate::fans::{
    candidate_cones, is_complete, is_fan, ridge_search, unpaired_ridges, Cone, Fan, FanError,
    FanMatrix,
};
use crate::linalg::integer_kernel;
use crate::linalg::matrix::{dot, gcd_vec, primitive_vector};

#[derive(Debug, thiserror::Error)]
pub enum CompletionError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("point lies outside the fan support")]
    OutsideSupport,
    #[error("point lies inside the fan support")]
    InsideSupport,
    #[error("direction vector must be primitive")]
    NotPrimitive,
    #[error("fan support is not (verifiably) a convex cone")]
    SupportNotConvex,
    #[error("fan must be nonempty with full-dimensional maximal cones")]
    NotFullDimensional,
    #[error("intermediate fan failed the face-to-face check: {0} vs {1}")]
    InternalFanCheck(Cone, Cone),
}

/// One step of the extension procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionStep {
    /// The new ray lay inside the support: the minimal cone containing it was
    /// subdivided. `direction` is the 1-based column index of the ray in the
    /// extended fan matrix.
    Stellar {
        subdivided: Cone,
        direction: usize,
        cones_before: usize,
        cones_after: usize,
    },
    /// The new ray lay outside: each visible boundary facet was joined to it.
    VisibleFacets {
        facets: Vec<(Cone, Cone)>,
        direction: usize,
        cones_before: usize,
        cones_after: usize,
    },
}

/// The unique cone of the fan whose relative interior contains `w`: take any
/// maximal cone containing `w` and keep the generators with positive
/// coordinate.
pub fn minimal_containing_cone(fan: &Fan, w: &[BigInt]) -> Result<Cone, CompletionError> {
    let wr = to_rational(w);
    for cone in fan.max_cones() {
        let m = fan.matrix().columns_matrix(cone.indices());
        if let Some(coords) = simplicial_coordinates(&m, &wr) {
            if coords.iter().all(|c| !c.is_negative()) {
                let support: Vec<usize> = cone
                    .indices()
                    .iter()
                    .zip(&coords)
                    .filter(|(_, c)| c.is_positive())
                    .map(|(&i, _)| i)
                    .collect();
                return Ok(Cone::new(support));
            }
        }
    }
    Err(CompletionError::OutsideSupport)
}

/// Index of `w` among the matrix columns (1-based), appending it when new.
fn ray_index(matrix: &FanMatrix, w: &[BigInt]) -> (FanMatrix, usize) {
    for i in 1..=matrix.num_rays() {
        if matrix.column(i) == w {
            return (matrix.clone(), i);
        }
    }
    let mut columns: Vec<Vec<BigInt>> = (1..=matrix.num_rays())
        .map(|i| matrix.column(i).to_vec())
        .collect();
    columns.push(w.to_vec());
    let extended = FanMatrix::new(matrix.dim(), columns).expect("dimension preserved");
    let idx = extended.num_rays();
    (extended, idx)
}

/// Stellar subdivision of the fan at `w`, whose minimal containing cone is
/// `tau`: every maximal cone with `tau` as a face is replaced by the cones
/// obtained by swapping one generator of `tau` for `w`.
pub fn stellar_subdivision(fan: &Fan, w: &[BigInt], tau: &Cone) -> Result<Fan, CompletionError> {
    if gcd_vec(w) != BigInt::from(1) {
        return Err(CompletionError::NotPrimitive);
    }
    let found = minimal_containing_cone(fan, w)?;
    if &found != tau {
        return Err(CompletionError::OutsideSupport);
    }
    // w on an existing ray: nothing to subdivide
    if tau.len() == 1 && fan.matrix().column(tau.indices()[0]) == w {
        return Ok(fan.clone());
    }
    let (matrix, w_idx) = ray_index(fan.matrix(), w);
    let mut cones = Vec::new();
    for cone in fan.max_cones() {
        if tau.is_face_index_subset_of(cone) {
            for &swap_out in tau.indices() {
                let replaced: Vec<usize> = cone
                    .indices()
                    .iter()
                    .copied()
                    .map(|i| if i == swap_out { w_idx } else { i })
                    .collect();
                cones.push(Cone::new(replaced));
            }
        } else {
            cones.push(cone.clone());
        }
    }
    let result = Fan::new(matrix, cones)?;
    if let Err(v) = is_fan(&result) {
        return Err(CompletionError::InternalFanCheck(v.first, v.second));
    }
    Ok(result)
}

/// Boundary facets of the fan support visible from an outside point `w`:
/// facets carried by exactly one maximal cone whose supporting hyperplane has
/// the support on the nonpositive side and `w` strictly on the positive side.
pub fn visible_facets(fan: &Fan, w: &[BigInt]) -> Result<Vec<(Cone, Cone)>, CompletionError> {
    ensure_convex_full_dim(fan)?;
    if fan.support_contains(&to_rational(w)) {
        return Err(CompletionError::InsideSupport);
    }
    let mut out = Vec::new();
    for (facet, carrier, normal) in oriented_boundary_facets(fan)? {
        if dot(&normal, w).is_positive() {
            out.push((facet, carrier));
        }
    }
    assert!(!out.is_empty(), "an outside point sees at least one facet");
    Ok(out)
}

/// Boundary facets with their carrier cone and outward primitive normal.
fn oriented_boundary_facets(fan: &Fan) -> Result<Vec<(Cone, Cone, Vec<BigInt>)>, CompletionError> {
    let matrix = fan.matrix();
    let mut out = Vec::new();
    for (facet, carrier) in unpaired_ridges(fan) {
        let kernel = integer_kernel(&matrix.columns_matrix(facet.indices()).transpose());
        if kernel.rank() != 1 {
            return Err(CompletionError::SupportNotConvex);
        }
        let mut normal = primitive_vector(kernel.basis().row(0));
        let extra = carrier
            .indices()
            .iter()
            .copied()
            .find(|i| !facet.contains_index(*i))
            .expect("carrier has a generator off the facet");
        let side = dot(&normal, matrix.column(extra));
        assert!(
            !side.is_zero(),
            "full-dimensional carrier crosses its facet plane"
        );
        if side.is_positive() {
            normal = normal.iter().map(|x| -x).collect();
        }
        out.push((facet, carrier, normal));
    }
    Ok(out)
}

/// Verify that the support of the fan is a full-dimensional convex cone:
/// every boundary facet's hyperplane must support the hull of all rays, so
/// the support coincides with that single finitely generated cone.
pub fn support_is_convex(fan: &Fan) -> Result<bool, CompletionError> {
    let matrix = fan.matrix();
    let rays: Vec<usize> = fan.rays_used().into_iter().collect();
    for (_, _, normal) in oriented_boundary_facets(fan)? {
        for &i in &rays {
            if dot(&normal, matrix.column(i)).is_positive() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn ensure_convex_full_dim(fan: &Fan) -> Result<(), CompletionError> {
    let n = fan.matrix().dim();
    if fan.max_cones().is_empty() || fan.max_cones().iter().any(|c| c.len() != n) {
        return Err(CompletionError::NotFullDimensional);
    }
    if !support_is_convex(fan)? {
        return Err(CompletionError::SupportNotConvex);
    }
    Ok(())
}

/// Extend a fan with full-dimensional convex support by the rays `ws`,
/// processing them in order: stellar subdivision when the ray falls in the
/// current support, visible-facet attachment otherwise. The result contains
/// the initial fan, uses exactly the old rays plus `ws`, and its support is
/// the cone sum of the old support with the new rays.
pub fn extend_fan(
    initial: &Fan,
    ws: &[Vec<BigInt>],
) -> Result<(Fan, Vec<ExtensionStep>), CompletionError> {
    ensure_convex_full_dim(initial)?;
    if let Err(v) = is_fan(initial) {
        return Err(CompletionError::InternalFanCheck(v.first, v.second));
    }
    for w in ws {
        if gcd_vec(w) != BigInt::from(1) {
            return Err(CompletionError::NotPrimitive);
        }
        if initial.support_contains(&to_rational(w)) {
            return Err(CompletionError::InsideSupport);
        }
    }

    let mut fan = initial.clone();
    let mut steps = Vec::new();
    for w in ws {
        let before = fan.max_cones().len();
        if fan.support_contains(&to_rational(w)) {
            let tau = minimal_containing_cone(&fan, w)?;
            fan = stellar_subdivision(&fan, w, &tau)?;
            let direction = (1..=fan.matrix().num_rays())
                .find(|&i| fan.matrix().column(i) == w)
                .expect("ray present after subdivision");
            steps.push(ExtensionStep::Stellar {
                subdivided: tau,
                direction,
                cones_before: before,
                cones_after: fan.max_cones().len(),
            });
        } else {
            let facets = visible_facets(&fan, w)?;
            let (matrix, w_idx) = ray_index(fan.matrix(), w);
            let mut cones: Vec<Cone> = fan.max_cones().to_vec();
            for (facet, _) in &facets {
                let mut idx = facet.indices().to_vec();
                idx.push(w_idx);
                cones.push(Cone::new(idx));
            }
            fan = Fan::new(matrix, cones)?;
            if let Err(v) = is_fan(&fan) {
                return Err(CompletionError::InternalFanCheck(v.first, v.second));
            }
            steps.push(ExtensionStep::VisibleFacets {
                facets,
                direction: w_idx,
                cones_before: before,
                cones_after: fan.max_cones().len(),
            });
        }
        if !support_is_convex(&fan)? {
            return Err(CompletionError::SupportNotConvex);
        }
    }
    Ok((fan, steps))
}

/// Search for a complete fan on the same fan matrix containing every maximal
/// cone of `fan`, without introducing rays outside the matrix columns.
/// Returns `None` when no such completion exists.
pub fn completable_without_new_rays(fan: &Fan) -> Result<Option<Fan>, CompletionError> {
    let n = fan.matrix().dim();
    if fan.max_cones().iter().any(|c| c.len() != n) {
        return Err(CompletionError::NotFullDimensional);
    }
    if let Err(v) = is_fan(fan) {
        return Err(CompletionError::InternalFanCheck(v.first, v.second));
    }
    if fan.max_cones().is_empty() {
        return Err(CompletionError::NotFullDimensional);
    }
    if is_complete(fan)? {
        return Ok(Some(fan.clone()));
    }
    let matrix = fan.matrix();
    let rays: Vec<usize> = fan.rays_used().into_iter().collect();
    // a candidate strictly containing a ray of the fan can never join it
    let candidates: Vec<Cone> = candidate_cones(matrix)
        .total
        .into_iter()
        .filter(|c| {
            let w = matrix.columns_matrix(c.indices());
            rays.iter()
                .filter(|i| !c.contains_index(**i))
                .all(|&i| !cone_contains(&w, &to_rational(matrix.column(i))))
        })
        .collect();
    let completions = ridge_search(matrix, fan.max_cones(), &candidates, false);
    match completions.into_iter().next() {
        Some(cones) => {
            let complete = Fan::new(matrix.clone(), cones)?;
            debug_assert!(is_complete(&complete)?);
            Ok(Some(complete))
        }
        None => Ok(None),
    }
}

/// Sample `count` deterministic integer points of the fan support; used by
/// tests to compare supports before and after subdivision.
pub fn sample_support_points(fan: &Fan, count: usize, seed: u64) -> Vec<Vec<BigRational>> {
    let mut rng = crate::util::SplitMix64::new(seed);
    let n = fan.matrix().dim();
    let mut out = Vec::new();
    let mut guard = 0usize;
    while out.len() < count && guard < count * 200 {
        guard += 1;
        let p: Vec<BigRational> = (0..n)
            .map(|_| BigRational::from(BigInt::from(rng.next_i64(-8, 8))))
            .collect();
        if fan.support_contains(&p) {
            out.push(p);
        }
    }
    out
}
