//! Fan extension and completion against the reference examples.

mod common;

use common::*;
use num_bigint::BigInt;

use torpure::completion::{
    completable_without_new_rays, extend_fan, minimal_containing_cone, sample_support_points,
    stellar_subdivision, support_is_convex, ExtensionStep,
};
use torpure::fans::{
    candidate_cones, common_face_intersection, is_complete, is_fan, unpaired_ridges, Cone,
    FaceIntersection, Fan,
};
use torpure::util::SplitMix64;

#[test]
fn extend_minimal_cone_to_a_complete_fan_on_all_rays() {
    // seed with a single minimal candidate cone and add the remaining
    // columns: the result is a complete fan on the full ray set containing
    // the seed cone
    let vhat = v_hat();
    let seed = Fan::from_index_lists(vhat.clone(), &[vec![1, 2, 3]]).unwrap();
    let ws: Vec<Vec<BigInt>> = [4usize, 5]
        .iter()
        .map(|&i| vhat.column(i).to_vec())
        .collect();
    let (extended, steps) = extend_fan(&seed, &ws).unwrap();
    assert_eq!(steps.len(), 2);
    assert!(is_fan(&extended).is_ok());
    assert!(is_complete(&extended).unwrap());
    assert!(extended.max_cones().contains(&Cone::new(vec![1, 2, 3])));
    // no new columns were appended: the rays are exactly the five originals
    assert_eq!(extended.matrix().num_rays(), 5);
    assert_eq!(extended.rays_used().len(), 5);
    // the completion lies in the enumerated fan set
    let fans = torpure::fans::enumerate_complete_fans(&vhat).unwrap();
    assert!(fans.iter().any(|f| f.max_cones() == extended.max_cones()));
}

#[test]
fn stellar_subdivision_preserves_support_pointwise() {
    let fan = p2_fan();
    // subdivide a maximal cone at its barycenter: 3 maximal cones become 5
    let w = bivec(&[1, 1]);
    let tau = minimal_containing_cone(&fan, &w).unwrap();
    assert_eq!(tau, Cone::new(vec![1, 2]));
    let sub = stellar_subdivision(&fan, &w, &tau).unwrap();
    assert_eq!(sub.max_cones().len(), fan.max_cones().len() + 1);
    assert_eq!(sub.matrix().num_rays(), fan.matrix().num_rays() + 1);
    assert!(is_complete(&sub).unwrap());
    // the same 100 sampled points are covered before and after
    for p in sample_support_points(&fan, 100, 31415) {
        assert!(sub.support_contains(&p));
    }
    for p in sample_support_points(&sub, 100, 27182) {
        assert!(fan.support_contains(&p));
    }
}

#[test]
fn interior_barycenter_subdivision_replaces_full_cone() {
    // subdividing at an interior point of a maximal cone swaps 1 cone for 3
    let fan = p2_fan();
    let w = bivec(&[2, 1]); // interior of <1,2>? (2,1) = 2*(1,0) + 1*(0,1): yes
    let tau = minimal_containing_cone(&fan, &w).unwrap();
    assert_eq!(tau, Cone::new(vec![1, 2]));
    let sub = stellar_subdivision(&fan, &w, &tau).unwrap();
    assert_eq!(sub.max_cones().len(), 4);
    assert!(is_complete(&sub).unwrap());
}

#[test]
fn minimal_containing_cone_of_a_face_point() {
    // a point on a 2-face of a unimodular 3-cone locates that face
    let m = torpure::fans::FanMatrix::from_i64(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    let fan = Fan::from_index_lists(m, &[vec![1, 2, 3]]).unwrap();
    let w = bivec(&[1, 1, 0]);
    assert_eq!(
        minimal_containing_cone(&fan, &w).unwrap(),
        Cone::new(vec![1, 2])
    );
}

#[test]
fn random_interior_points_locate_their_cone() {
    let fan = fan_on(&v_hat(), &sigma_1_cones());
    let mut rng = SplitMix64::new(17);
    for _ in 0..25 {
        let pick = (rng.next_u64() % fan.max_cones().len() as u64) as usize;
        let cone = fan.max_cones()[pick].clone();
        // random strictly positive combination of the cone generators
        let mut point = vec![BigInt::from(0); 3];
        for &i in cone.indices() {
            let c = BigInt::from(rng.next_i64(1, 7));
            for (j, x) in fan.matrix().column(i).iter().enumerate() {
                point[j] += &c * x;
            }
        }
        let found = minimal_containing_cone(&fan, &point).unwrap();
        assert_eq!(found, cone);
    }
}

#[test]
fn extension_rejects_rays_inside_the_initial_support() {
    let quadrant = Fan::from_index_lists(
        torpure::fans::FanMatrix::from_i64(2, &[&[1, 0], &[0, 1]]),
        &[vec![1, 2]],
    )
    .unwrap();
    assert!(extend_fan(&quadrant, &[bivec(&[1, 1])]).is_err());
    // non-primitive directions are rejected as well
    assert!(extend_fan(&quadrant, &[bivec(&[-2, -2])]).is_err());
}

#[test]
fn extension_steps_record_the_case_split() {
    let quadrant = Fan::from_index_lists(
        torpure::fans::FanMatrix::from_i64(2, &[&[1, 0], &[0, 1]]),
        &[vec![1, 2]],
    )
    .unwrap();
    // first ray outside (visible facets), then one inside the grown support
    let (extended, steps) = extend_fan(&quadrant, &[bivec(&[-1, 1]), bivec(&[-1, 3])]).unwrap();
    assert_eq!(steps.len(), 2);
    assert!(matches!(steps[0], ExtensionStep::VisibleFacets { .. }));
    assert!(matches!(steps[1], ExtensionStep::Stellar { .. }));
    assert!(is_fan(&extended).is_ok());
    assert!(support_is_convex(&extended).unwrap());
}

#[test]
fn noncompletable_obstruction_is_reproduced_facet_by_facet() {
    // every candidate 4-cone pairing the unpaired facet <2,3,6> fails the
    // face check against some cone of the fan
    let v = v_noncompletable();
    let fan = fan_on(&v, &sigma_noncompletable_cones());
    let unpaired: Vec<Cone> = unpaired_ridges(&fan).into_iter().map(|(f, _)| f).collect();
    let target = Cone::new(vec![2, 3, 6]);
    assert!(unpaired.contains(&target));

    let cand = candidate_cones(&v).total;
    let pairing: Vec<&Cone> = cand
        .iter()
        .filter(|c| target.is_face_index_subset_of(c) && !fan.max_cones().contains(*c))
        .collect();
    assert!(!pairing.is_empty());
    for candidate in pairing {
        let clashes = fan.max_cones().iter().any(|existing| {
            matches!(
                common_face_intersection(&v, candidate, existing),
                FaceIntersection::NotFace(_)
            )
        });
        assert!(
            clashes,
            "candidate {candidate} should clash with some cone of the fan"
        );
    }
    assert!(completable_without_new_rays(&fan).unwrap().is_none());
}

#[test]
fn single_reference_cone_completes() {
    let vhat = v_hat();
    let fan = Fan::from_index_lists(vhat, &[vec![1, 2, 3]]).unwrap();
    let completion = completable_without_new_rays(&fan).unwrap().unwrap();
    assert!(is_complete(&completion).unwrap());
    assert!(completion.max_cones().contains(&Cone::new(vec![1, 2, 3])));
}

#[test]
fn completion_keeps_unused_columns_unused_when_possible() {
    // a fourth column inside <1,2> does not obstruct completing the fan
    // {<1,2>} on the remaining rays
    let m = torpure::fans::FanMatrix::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]]);
    let fan = Fan::from_index_lists(m, &[vec![1, 2]]).unwrap();
    let completion = completable_without_new_rays(&fan).unwrap().unwrap();
    assert!(is_complete(&completion).unwrap());
    assert!(completion.max_cones().contains(&Cone::new(vec![1, 2])));
    // ray 4 = (1,1) sits inside <1,2>, so it cannot be a ray of the result
    assert!(!completion.rays_used().contains(&4));
}
