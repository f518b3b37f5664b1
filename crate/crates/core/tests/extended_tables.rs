//! Rows 10-12 of the interval and cyclic distributions. Slow on one core;
//! run with `cargo test --release -- --ignored`.

use apseq::enumeration::{distribution, factorial, EnumerateOptions, PARALLEL_MAX_SIZE};
use apseq::group::AdditiveSet;

const INTERVAL: [&[u128]; 3] = [
    &[0, 1066, 1306404, 1902496, 374194, 39420, 4720, 462, 36, 2],
    &[
        0, 2460, 11064306, 23226786, 4929828, 622140, 64020, 6644, 574, 40, 2,
    ],
    &[
        0, 6128, 101355594, 298314654, 68584052, 9719492, 913440, 98472, 9024, 698, 44, 2,
    ],
];

const CYCLIC: [&[u128]; 3] = [
    &[0, 0, 67440, 1795320, 1594640, 146200, 22000, 2840, 320, 40],
    &[
        0, 0, 61050, 17433130, 17373620, 4289340, 662860, 85910, 9790, 990, 110,
    ],
    &[
        0, 0, 12843792, 280207968, 144390384, 37599168, 3453408, 449856, 51264, 5232, 480, 48,
    ],
];

fn options() -> EnumerateOptions {
    EnumerateOptions {
        symmetry: true,
        parallel: Some(std::thread::available_parallelism().map_or(1, |n| n.get())),
        max_size: PARALLEL_MAX_SIZE,
        ..EnumerateOptions::default()
    }
}

#[test]
fn stored_rows_sum_to_factorials() {
    for (i, (a, b)) in INTERVAL.iter().zip(CYCLIC).enumerate() {
        let n = i + 10;
        assert_eq!(a.iter().sum::<u128>(), factorial(n).unwrap());
        assert_eq!(b.iter().sum::<u128>(), factorial(n).unwrap());
    }
}

#[test]
#[ignore]
fn interval_rows_ten_to_twelve() {
    for (i, want) in INTERVAL.iter().enumerate() {
        let set = AdditiveSet::interval(10 + i as u64, 1).unwrap();
        assert_eq!(distribution(&set, &options()).unwrap().counts, *want);
    }
}

#[test]
#[ignore]
fn cyclic_rows_ten_to_twelve() {
    for (i, want) in CYCLIC.iter().enumerate() {
        let set = AdditiveSet::cyclic(10 + i as u64).unwrap();
        assert_eq!(distribution(&set, &options()).unwrap().counts, *want);
    }
}

#[test]
fn cyclic_row_ten() {
    let set = AdditiveSet::cyclic(10).unwrap();
    assert_eq!(distribution(&set, &options()).unwrap().counts, CYCLIC[0]);
}
