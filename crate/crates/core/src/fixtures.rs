//! Small worked instances used throughout the tests, the book, and the CLI.

use crate::catalog::{build_matroid, Instance, MatroidSpec};
use crate::matroid::Matroid;

/// Graphic matroid of a triangle: items `a = 01`, `b = 12`, `c = 20`.
pub fn triangle() -> Matroid {
    build_matroid(&triangle_spec()).expect("valid fixture")
}

pub fn triangle_spec() -> MatroidSpec {
    MatroidSpec::graphic(3, &[("a", 0, 1), ("b", 1, 2), ("c", 2, 0)])
}

/// Five vertices, six edges, four buyers.
///
/// | buyer | items (value)     |
/// |-------|-------------------|
/// | 1     | x (2)             |
/// | 2     | y1 (2), y2 (3)    |
/// | 3     | z1 (2), z2 (4)    |
/// | 4     | w (5)             |
///
/// Truthful bidding sells `{y2, z2, w, z1}` at price 2 each.
pub fn four_buyer_graph() -> Instance {
    let spec = MatroidSpec::graphic(
        5,
        &[
            ("x", 0, 1),
            ("y1", 1, 2),
            ("y2", 1, 3),
            ("z1", 2, 3),
            ("z2", 4, 0),
            ("w", 3, 4),
        ],
    );
    Instance::from_ids(
        build_matroid(&spec).expect("valid fixture"),
        &[
            (1, &[("x", 2)]),
            (2, &[("y1", 2), ("y2", 3)]),
            (3, &[("z1", 2), ("z2", 4)]),
            (4, &[("w", 5)]),
        ],
    )
    .expect("valid fixture")
}

/// A three-vertex path where each edge has a parallel twin.
///
/// Buyer 1 owns `e1 (2)` and `f1 (4)`, buyer 2 owns `e2 (3)` and `f2 (3)`;
/// `e*` join vertices 0–1 and `f*` join 1–2.
pub fn parallel_path() -> Instance {
    let spec = MatroidSpec::graphic(3, &[("e1", 0, 1), ("e2", 0, 1), ("f1", 1, 2), ("f2", 1, 2)]);
    Instance::from_ids(
        build_matroid(&spec).expect("valid fixture"),
        &[(1, &[("e1", 2), ("f1", 4)]), (2, &[("e2", 3), ("f2", 3)])],
    )
    .expect("valid fixture")
}

/// A triangle with one doubled side, where a buyer can end up holding a
/// monopsony that contains one critical and one non-critical item.
///
/// Buyer 1 owns `l = 01 (3)` and `m = 02 (2)`, buyer 2 owns `k = 02 (2)`,
/// buyer 3 owns `n = 12 (4)`.
pub fn doubled_triangle() -> Instance {
    let spec = MatroidSpec::graphic(3, &[("k", 0, 2), ("l", 0, 1), ("m", 0, 2), ("n", 1, 2)]);
    Instance::from_ids(
        build_matroid(&spec).expect("valid fixture"),
        &[(1, &[("l", 3), ("m", 2)]), (2, &[("k", 2)]), (3, &[("n", 4)])],
    )
    .expect("valid fixture")
}
