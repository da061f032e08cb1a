use kummerlab::covers::{invariants_general, smoothness_check};
use kummerlab::search::{
    classify_orbits, enumerate_assignments, locate_six_tuples, resolve_six_tuples, six_tuple_orderings,
    OrbitClassification, PRINTED_SIX_TUPLES, PRINTED_SIX_TUPLE_ORDER,
};

fn check_classification(class: &OrbitClassification) {
    assert_eq!(class.orbits.iter().map(|o| o.size).sum::<usize>(), class.admissible_count);
    for (i, o) in class.orbits.iter().enumerate() {
        assert_eq!(class.orbit_of(&o.representative), Some(i));
        assert!(o.representative.admissible());
    }
    let reps: Vec<_> = class.orbits.iter().map(|o| o.representative).collect();
    let mut sorted = reps.clone();
    sorted.sort();
    assert_eq!(reps, sorted);
}

#[test]
fn five_classification_and_printed_tuples() {
    let class = classify_orbits(5).unwrap();
    check_classification(&class);
    assert_eq!(class.kernel_dimension, 5);
    assert_eq!(class.admissible_count, 201_600);
    let mut sizes: Vec<usize> = class.orbits.iter().map(|o| o.size).collect();
    sizes.sort();
    assert_eq!(sizes, vec![28_800, 57_600, 57_600, 57_600]);
    for o in &class.orbits {
        assert_eq!((o.k2, o.e, o.chi), (45, 15, 5));
        assert_eq!(o.p_g, o.q + 4);
        let spec = o.representative.to_spec().unwrap();
        assert!(smoothness_check(&spec).unwrap().smooth);
        assert_eq!(invariants_general(&spec).unwrap().k2, 45.into());
    }

    let all = six_tuple_orderings(&class, &PRINTED_SIX_TUPLES);
    assert_eq!(all.len(), 48);
    assert!(all.iter().all(|r| r.orbits == vec![0, 2, 3, 1]));
    let chosen = resolve_six_tuples(&class, &PRINTED_SIX_TUPLES, Some(2)).unwrap();
    assert_eq!(chosen.order, PRINTED_SIX_TUPLE_ORDER);
    assert_eq!(class.orbits[chosen.orbits[2]].q, 0);
    assert!(locate_six_tuples(&class, &PRINTED_SIX_TUPLES, &[0, 1, 2, 3, 4, 5]).is_none());
}

#[test]
fn small_primes_have_no_admissible_assignment() {
    for n in [2u64, 3] {
        let e = enumerate_assignments(n).unwrap();
        assert_eq!(e.kernel_dimension, 5);
        assert_eq!(e.kernel_size, (n as u128).pow(5));
        assert!(e.admissible.is_empty());
        let class = classify_orbits(n).unwrap();
        assert!(class.orbits.is_empty());
    }
}

#[test]
fn composite_order_is_rejected() {
    assert!(enumerate_assignments(4).is_err());
    assert!(classify_orbits(6).is_err());
}
