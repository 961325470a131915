use toric_acm::census::{census_box, enumerate_si, is_d_acm_oracle};
use toric_acm::cohomology::{h, hp_chain, support_box};
use toric_acm::validate::{random_bundle_of_rank, seeded_rng};
use toric_acm::{Character, Fan, ShiftingIndices, ToricBundle};

fn has_zero_sum_triple(delta: &ShiftingIndices) -> bool {
    let (lo, hi) = (delta.lower(), delta.upper());
    (lo[0] + 1..=hi[0]).any(|j0| (lo[1] + 1..=hi[1]).any(|j1| (lo[2] + 1..=hi[2]).any(|j2| j0 + j1 + j2 == 0)))
}

#[test]
fn h1_support_is_the_triple_condition() {
    for delta in census_box(3) {
        let e = ToricBundle::from_shifting_indices(&delta);
        assert_eq!(h(&e, 1).unwrap() > 0, has_zero_sum_triple(&delta), "{delta}");
    }
}

#[test]
fn h1_pieces_sit_at_the_triples() {
    // the graded piece at m is nonzero exactly when (m_0, m_1, -m_0-m_1)
    // lies in the three open bands, and then it is one-dimensional
    let delta: ShiftingIndices = "-2,1;-1,2;-3,0".parse().unwrap();
    let e = ToricBundle::from_shifting_indices(&delta);
    let (lo, hi) = (delta.lower(), delta.upper());
    for a in -6..=6 {
        for b in -6..=6 {
            let js = [a, b, -a - b];
            let inside = (0..3).all(|i| lo[i] < js[i] && js[i] <= hi[i]);
            assert_eq!(hp_chain(&e, 1, &Character(vec![a, b])).unwrap(), usize::from(inside));
        }
    }
}

#[test]
fn census_entries_pass_the_oracle() {
    for d in 2..=6 {
        for entry in enumerate_si(d).unwrap() {
            assert!(is_d_acm_oracle(&ToricBundle::from_shifting_indices(&entry.delta), d).unwrap());
        }
    }
}

#[test]
fn split_bundles_are_acm() {
    let plane = Fan::plane();
    for (a, b) in [(0, 0), (3, -2), (-5, 1)] {
        let e = ToricBundle::hyperplane_power(plane, a)
            .direct_sum(&ToricBundle::hyperplane_power(plane, b))
            .unwrap();
        for d in 1..=4 {
            assert!(is_d_acm_oracle(&e, d).unwrap());
        }
    }
}

#[test]
fn endomorphisms_contain_the_identity() {
    let mut rng = seeded_rng(3);
    for _ in 0..20 {
        let e = random_bundle_of_rank(&mut rng, Fan::plane(), 2);
        let end = e.tensor(&e.dual()).unwrap();
        assert!(h(&end, 0).unwrap() >= 1);
        let origin = Character(vec![0, 0]);
        assert!(support_box(&end, 0).unwrap().contains(&origin));
        assert!(hp_chain(&end, 0, &origin).unwrap() >= 1);
    }
}
