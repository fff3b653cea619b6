//! Values frozen from a separate brute-force enumeration over all tuples.

use std::sync::Arc;

use num_bigint::BigInt;
use sumprodlab_core::energy::{energy_spectrum, line_solution_count, mult_energy};
use sumprodlab_core::exact::ratio;
use sumprodlab_core::sumprod::{
    char_fourth_moment, exi2_check, solution_count, support_size, Method, Signs,
};
use sumprodlab_core::{FpSet, PrimeField};

fn set(p: u64, xs: &[u64]) -> FpSet {
    let f = Arc::new(PrimeField::new(p).unwrap());
    FpSet::from_elements(&f, xs.iter().copied())
}

#[test]
fn solution_counts_for_each_sign_pattern() {
    let a = set(13, &[0, 1, 3, 9]);
    let expected = [
        ("mm", 14272, 12544),
        ("mp", 8476, 5776),
        ("pm", 8476, 5776),
        ("pp", 5740, 961),
    ];
    for (signs, n_total, n_zero) in expected {
        let signs: Signs = signs.parse().unwrap();
        for m in Method::ALL {
            let rec = solution_count(&a, &a, &a, &a, signs, m).unwrap();
            assert_eq!((rec.n_total, rec.n_zero), (n_total, n_zero), "{signs} {m}");
            assert_eq!(rec.support_size, 13);
        }
    }
}

#[test]
fn solution_counts_with_unrelated_sets() {
    let a = set(11, &[1, 2, 3, 5, 8]);
    let b = set(11, &[0, 4]);
    let c = set(11, &[7]);
    let d = set(11, &[2, 3, 10]);
    for (signs, n_total) in [("mm", 100), ("pp", 104)] {
        let signs: Signs = signs.parse().unwrap();
        for m in Method::ALL {
            let rec = solution_count(&a, &b, &c, &d, signs, m).unwrap();
            assert_eq!((rec.n_total, rec.n_zero), (n_total, 0));
        }
        assert_eq!(support_size(&a, &b, &c, &d, signs).unwrap(), 10);
    }
}

#[test]
fn spectrum_of_an_uneven_set() {
    let a = set(13, &[0, 1, 2, 4, 7]);
    let spec = energy_spectrum(&a).unwrap();
    assert_eq!(
        spec.energies(),
        &[61, 59, 57, 57, 57, 59, 59, 57, 57, 57, 59, 61]
    );
    assert_eq!(spec.sum_of_squares(), BigInt::from(40860));
    assert_eq!(spec.deviation_sum_of_squares(), ratio(217840, 169));
    let exi2 = exi2_check(&a).unwrap();
    assert!(exi2.identity_holds);
    assert_eq!(exi2.rhs_exact, ratio(217840, 169));

    let rec = solution_count(&a, &a, &a, &a, Signs::MM, Method::Transform).unwrap();
    assert_eq!((rec.n_total, rec.n_nonzero), (63985, 13360));
    assert_eq!(char_fourth_moment(&a).unwrap(), 13360);
}

#[test]
fn perfect_difference_set_has_flat_spectrum() {
    let a = set(11, &[1, 2, 3, 5, 8]);
    let spec = energy_spectrum(&a).unwrap();
    assert_eq!(spec.energies(), &[65; 10]);
    assert_eq!(spec.deviation_sum_of_squares(), ratio(81000, 121));
    assert_eq!(char_fourth_moment(&a).unwrap(), 16000);
}

#[test]
fn line_counts() {
    assert_eq!(
        line_solution_count(&set(7, &[1, 2, 4]), &set(7, &[1, 3])).unwrap(),
        60
    );
    assert_eq!(
        line_solution_count(&set(11, &[0, 1, 5]), &set(11, &[2, 3, 7])).unwrap(),
        115
    );
}

#[test]
fn multiplicative_energies_of_translates() {
    let a = set(11, &[1, 2, 3, 5, 8]);
    let f = a.field().clone();
    let got: Vec<u128> = (0..11)
        .map(|x| mult_energy(&a, f.elem(x)).unwrap())
        .collect();
    assert_eq!(got, vec![71, 71, 71, 71, 71, 65, 71, 71, 71, 71, 71]);
}
