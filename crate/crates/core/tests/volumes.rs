use equivol_core::asymptotics::{equivariant_volume, g_exponent, FitParams, VolumeStatus};
use equivol_core::geometry::{classify_stability, dh_slice_volume, StabilityClass};
use equivol_core::multiplicity::section_dimension;
use equivol_core::{GroupSpec, LinearizedBundle, ProjectiveFactor, Rational, Scenario, Weight};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn vol(s: &Scenario, mu: Weight) -> (Rational, VolumeStatus) {
    let v = equivariant_volume(s, &mu, &FitParams::default()).unwrap();
    (v.value, v.status)
}

fn circle1(w: &[i64], d: i64, c: i64) -> Scenario {
    Scenario::new(
        GroupSpec::circle(1),
        vec![ProjectiveFactor::circle1(w)],
        LinearizedBundle::new(vec![d], vec![c]),
    )
    .unwrap()
}

#[test]
fn su2_on_p5_matches_cauchy_formula() {
    let s = Scenario::new(
        GroupSpec::su2(),
        vec![ProjectiveFactor::su2(vec![1, 1, 1])],
        LinearizedBundle::new(vec![1], vec![]),
    )
    .unwrap();
    // Sym^k(V ⊗ C³) = ⊕ S_λ V ⊗ S_λ C³ over two-row partitions λ = (a, b)
    for k in 0..=10u64 {
        for mu in 0..=12i64 {
            let expected = if mu as u64 <= k && (k as i64 - mu) % 2 == 0 {
                let a = (k as i64 + mu) / 2;
                let b = (k as i64 - mu) / 2;
                // dim S_(a,b) C³ = (a-b+1)(a+2)(b+1)/2
                (mu + 1) * (mu + 1) * (a + 2) * (b + 1) / 2
            } else {
                0
            };
            assert_eq!(
                section_dimension(&s, k, &Weight::scalar(mu)).unwrap(),
                expected as u128,
                "k = {k}, mu = {mu}"
            );
        }
    }
    for mu in 0..=3i64 {
        assert_eq!(vol(&s, Weight::scalar(mu)), (rat((mu + 1) * (mu + 1), 4), VolumeStatus::Exact));
    }
}

#[test]
fn p3_circle_volume_matches_slice() {
    let s = circle1(&[-1, -1, 1, 1], 1, 0);
    // even k: (k/2 + 1)² invariant monomials
    for k in (0..=20u64).step_by(2) {
        let m = (k / 2 + 1) as u128;
        assert_eq!(section_dimension(&s, k, &Weight::scalar(0)).unwrap(), m * m);
    }
    assert_eq!(vol(&s, Weight::scalar(0)).0, rat(1, 2));
    assert_eq!(dh_slice_volume(&s).unwrap(), rat(1, 2));
    // odd k carry the odd weights: ((k+1)/2)((k+3)/2) sections of weight 1
    assert_eq!(vol(&s, Weight::scalar(1)).0, rat(1, 2));
    assert_eq!(vol(&s, Weight::scalar(2)).0, rat(1, 2));
}

#[test]
fn p2_family_matches_slice_length() {
    for d in 1..=4i64 {
        for c in -(d - 1)..d {
            let s = circle1(&[-1, 1, 1], d, c);
            assert_eq!(classify_stability(&s).unwrap().class, StabilityClass::Regular);
            let slice = dh_slice_volume(&s).unwrap();
            assert_eq!(slice, rat(d - c, 2), "d = {d}, c = {c}");
            assert_eq!(vol(&s, Weight::scalar(0)).0, slice, "d = {d}, c = {c}");
        }
    }
}

#[test]
fn rank_two_tori() {
    let tri = Scenario::new(
        GroupSpec::circle(2),
        vec![ProjectiveFactor::circle(vec![vec![1, 0], vec![0, 1], vec![-1, -1]])],
        LinearizedBundle::new(vec![1], vec![0, 0]),
    )
    .unwrap();
    assert_eq!(g_exponent(&tri, 30).unwrap().exponent, Some(3));
    assert_eq!(vol(&tri, Weight(vec![0, 0])), (rat(1, 1), VolumeStatus::Exact));
    assert_eq!(vol(&tri, Weight(vec![1, 0])), (rat(1, 1), VolumeStatus::Exact));
    assert_eq!(vol(&tri, Weight(vec![2, -1])), (rat(1, 1), VolumeStatus::Exact));

    let square = Scenario::new(
        GroupSpec::circle(2),
        vec![
            ProjectiveFactor::circle(vec![vec![1, 0], vec![-1, 0]]),
            ProjectiveFactor::circle(vec![vec![0, 1], vec![0, -1]]),
        ],
        LinearizedBundle::new(vec![1, 1], vec![0, 0]),
    )
    .unwrap();
    assert_eq!(g_exponent(&square, 30).unwrap().exponent, Some(2));
    assert_eq!(vol(&square, Weight(vec![1, 1])).0, rat(1, 1));
    assert_eq!(vol(&square, Weight(vec![2, 0])).0, rat(1, 1));
    assert_eq!(vol(&square, Weight(vec![1, 0])).1, VolumeStatus::Zero);
}

#[test]
fn product_p2_p1() {
    let s = Scenario::new(
        GroupSpec::circle(1),
        vec![ProjectiveFactor::circle1(&[-1, 1, 1]), ProjectiveFactor::circle1(&[1, -1])],
        LinearizedBundle::new(vec![1, 2], vec![0]),
    )
    .unwrap();
    assert_eq!(classify_stability(&s).unwrap().class, StabilityClass::Regular);
    let v0 = vol(&s, Weight::scalar(0));
    assert_eq!(v0.1, VolumeStatus::Exact);
    assert_eq!(vol(&s, Weight::scalar(1)).0, v0.0);
    assert_eq!(vol(&s, Weight::scalar(2)).0, v0.0);
}
