use std::f64::consts::PI;

use apo_core::apo::{foraging_factor, foraging_mask, prob_dormancy, prob_forage_mode, proportion_fraction, reproduction_mask};
use apo_core::rng::{Draw, RngStream};

#[test]
fn foraging_factor_identities() {
    for iter_max in [1usize, 2, 10, 500] {
        let mut rng = RngStream::recording(iter_max as u64);
        // end of run: the envelope 1 + cos(pi) vanishes
        assert_eq!(foraging_factor(iter_max, iter_max, &mut rng).unwrap(), 0.0);
        // start of run: exactly twice the uniform
        let f0 = foraging_factor(0, iter_max, &mut rng).unwrap();
        let tape = rng.take_tape();
        let Draw::Uniform(u) = tape[1] else { panic!() };
        assert_eq!(f0, 2.0 * u);
        if iter_max % 2 == 0 {
            let fm = foraging_factor(iter_max / 2, iter_max, &mut rng).unwrap();
            let Draw::Uniform(u) = rng.take_tape()[0] else { panic!() };
            // cos(pi / 2) is 6e-17, not 0, in floating point
            assert_eq!(fm, u * (1.0 + (PI / 2.0).cos()));
            assert!((fm - u).abs() < 1e-15);
        }
    }
}

#[test]
fn forage_mode_probability_identities() {
    for iter_max in [1usize, 4, 100, 500] {
        assert_eq!(prob_forage_mode(0, iter_max).unwrap(), 1.0);
        assert_eq!(prob_forage_mode(iter_max, iter_max).unwrap(), 0.0);
        if iter_max % 2 == 0 {
            let mid = prob_forage_mode(iter_max / 2, iter_max).unwrap();
            assert_eq!(mid, 0.5 * (1.0 + (PI / 2.0).cos()));
            assert!((mid - 0.5).abs() < 1e-16);
        }
        for iter in 1..=iter_max {
            assert!(prob_forage_mode(iter, iter_max).unwrap() <= prob_forage_mode(iter - 1, iter_max).unwrap());
        }
    }
    assert!(prob_forage_mode(5, 4).is_err());
}

#[test]
fn dormancy_probability_identities() {
    for ps in [2usize, 3, 10, 100] {
        assert_eq!(prob_dormancy(ps, ps).unwrap(), 1.0);
        let best = prob_dormancy(1, ps).unwrap();
        assert_eq!(best, 0.5 * (1.0 + ((1.0 - 1.0 / ps as f64) * PI).cos()));
        if ps % 2 == 0 {
            let mid = prob_dormancy(ps / 2, ps).unwrap();
            assert!((mid - 0.5).abs() < 1e-16);
        }
        for i in 2..=ps {
            assert!(prob_dormancy(i, ps).unwrap() >= prob_dormancy(i - 1, ps).unwrap());
        }
        assert!(prob_dormancy(0, ps).is_err());
        assert!(prob_dormancy(ps + 1, ps).is_err());
    }
}

#[test]
fn proportion_fraction_scales_the_uniform() {
    let mut rng = RngStream::recording(4);
    for pf_max in [0.0, 0.1, 0.5, 1.0] {
        let pf = proportion_fraction(pf_max, &mut rng);
        let Draw::Uniform(u) = rng.take_tape()[0] else { panic!() };
        assert_eq!(pf, pf_max * u);
    }
}

#[test]
fn foraging_mask_cardinality() {
    let mut rng = RngStream::new(9);
    for ps in [3usize, 10, 100] {
        for dim in [1usize, 5, 20] {
            for i in 1..=ps {
                let mask = foraging_mask(i, ps, dim, &mut rng);
                let expected = (dim as f64 * i as f64 / ps as f64).ceil() as usize;
                assert_eq!(mask.count(), expected, "ps {ps} dim {dim} rank {i}");
                assert!(mask.count() >= 1);
            }
        }
    }
}

#[test]
fn reproduction_mask_cardinality() {
    let mut rng = RngStream::recording(2);
    for dim in [1usize, 5, 20] {
        for _ in 0..200 {
            let mask = reproduction_mask(dim, &mut rng);
            let tape = rng.take_tape();
            let Draw::Uniform(u) = tape[0] else { panic!() };
            assert_eq!(mask.count(), (dim as f64 * u).ceil() as usize);
            assert_eq!(mask.bits().len(), dim);
        }
    }
}
