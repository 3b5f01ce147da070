//! Fixtures shared by the benchmarks in `benches/`.

use logical_bm::codes;
use logical_bm::prob::rational;
use logical_bm::scheme::{build_optimal, build_static, AnyScheme, Family, StaticKind};
use num_rational::BigRational;

pub fn half() -> BigRational {
    rational(1, 2)
}

pub fn optimal(f: Family) -> AnyScheme {
    build_optimal(&f).expect("built-in family").0.into()
}

pub fn static_rotated(kind: StaticKind, d: usize) -> AnyScheme {
    build_static(kind, &codes::rotated_surface(d, d).expect("rotated code")).expect("static scheme").into()
}
