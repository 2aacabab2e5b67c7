//! Grid format round trips and SVG rendering.

use num_bigint::BigInt;
use proptest::prelude::*;

use sl2_core::algebra::{Matrix, Monomial, Polynomial, RingSpec, RingValue};
use sl2_core::catalog::{unit_tiling, wildest_integer_tiling, z36_tiling};
use sl2_core::io::{
    parse_grid, render_model_svg, write_grid, GridDocument, GridKind, RenderOptions, WriteOptions,
};
use sl2_core::tiling::{NumericParams, ParameterAssignment, TilingModel};

fn ring_strategy() -> impl Strategy<Value = RingSpec> {
    prop_oneof![
        Just(RingSpec::Integers),
        Just(RingSpec::Polynomial),
        (2u64..100).prop_map(|n| RingSpec::modular(n).unwrap()),
    ]
}

fn value_strategy(ring: RingSpec) -> BoxedStrategy<RingValue> {
    match ring {
        RingSpec::Polynomial => prop_oneof![
            (-50i64..50).prop_map(|c| RingValue::from_int(RingSpec::Polynomial, c)),
            ((-5i64..5).prop_filter("nonzero", |c| *c != 0), 1u64..40)
                .prop_map(|(c, k)| RingValue::Poly(Polynomial::term(c, Monomial::var(k)))),
        ]
        .boxed(),
        _ => (-1000i64..1000)
            .prop_map(move |c| RingValue::from_int(ring, c))
            .boxed(),
    }
}

fn plain_document() -> impl Strategy<Value = GridDocument> {
    (
        ring_strategy(),
        1usize..7,
        1usize..7,
        any::<bool>(),
        (-20i64..20, -20i64..20),
    )
        .prop_flat_map(|(ring, rows, cols, window, origin)| {
            prop::collection::vec(value_strategy(ring), rows * cols).prop_map(move |entries| {
                GridDocument {
                    ring,
                    kind: if window {
                        GridKind::Window
                    } else {
                        GridKind::Periodic
                    },
                    origin: window.then_some(origin),
                    lattice: None,
                    params: None,
                    entries: Matrix::new(rows, cols, entries).unwrap(),
                }
            })
        })
}

fn patched_document() -> impl Strategy<Value = GridDocument> {
    let numeric = (
        (1i64..30).prop_map(|v| if v % 2 == 0 { v / 2 } else { -v }),
        prop::collection::btree_map((-9i64..9, -9i64..9), 1i64..20, 0..4),
    )
        .prop_map(|(d, overrides)| {
            // Overrides only count at lattice positions.
            let on: Vec<_> = overrides
                .into_iter()
                .map(|((i, _), v)| ((i, (6 - 3 * i).rem_euclid(10)), BigInt::from(v)))
                .collect();
            ParameterAssignment::Numeric(NumericParams::new(BigInt::from(d), on).unwrap())
        });
    prop_oneof![Just(ParameterAssignment::Formal), numeric]
        .prop_map(|a| GridDocument::from_model(&wildest_integer_tiling(a)))
}

fn document() -> impl Strategy<Value = GridDocument> {
    prop_oneof![3 => plain_document(), 1 => patched_document()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn write_then_parse_is_identity(doc in document()) {
        let text = write_grid(&doc, WriteOptions::default()).unwrap();
        let back = parse_grid(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(write_grid(&back, WriteOptions::default()).unwrap(), text);
        let signed = write_grid(&doc, WriteOptions { signed: true }).unwrap();
        prop_assert_eq!(parse_grid(&signed).unwrap(), doc);
    }
}

#[test]
fn parse_canonicalizes_idempotently() {
    let messy = "sl2tiling v1\nring: Z/7\nkind: periodic\nrows: 2\ncols: 2\n\n  -6   +3\n0 -0\n";
    let once = write_grid(&parse_grid(messy).unwrap(), WriteOptions::default()).unwrap();
    assert!(once.ends_with("\n1 3\n0 0\n"));
    let twice = write_grid(&parse_grid(&once).unwrap(), WriteOptions::default()).unwrap();
    assert_eq!(once, twice);
}

#[test]
fn models_survive_the_format() {
    let formal = wildest_integer_tiling(ParameterAssignment::Formal);
    for t in [unit_tiling(), z36_tiling(), formal] {
        let text = write_grid(&GridDocument::from_model(&t), WriteOptions::default()).unwrap();
        let back = parse_grid(&text).unwrap().to_model().unwrap();
        assert_eq!(
            back.extract_window(-7, -3, 12, 12).matrix,
            t.extract_window(-7, -3, 12, 12).matrix
        );
    }
}

/// Black squares whose top-left corner lies in the given cell rectangle.
fn black_cells(svg: &str, cell: usize, r0: usize, c0: usize, h: usize, w: usize) -> usize {
    svg.lines()
        .filter(|l| l.starts_with("<rect") && l.contains(r##"fill="#000000""##))
        .filter(|l| {
            let attr = |name: &str| -> usize {
                let start = l.find(&format!(" {name}=\"")).unwrap() + name.len() + 3;
                l[start..].split('"').next().unwrap().parse().unwrap()
            };
            let (r, c) = (attr("y") / cell, attr("x") / cell);
            (r0..r0 + h).contains(&r) && (c0..c0 + w).contains(&c)
        })
        .count()
}

fn render(t: &TilingModel, rows: usize, cols: usize) -> String {
    render_model_svg(t, 0, 0, rows, cols, &RenderOptions::default()).unwrap()
}

#[test]
fn wildest_render_has_forty_black_cells_per_period() {
    let svg = render(&wildest_integer_tiling(ParameterAssignment::Formal), 20, 20);
    for (r0, c0) in [(0, 0), (10, 0), (0, 10), (10, 10)] {
        assert_eq!(black_cells(&svg, 24, r0, c0, 10, 10), 40);
    }
    assert_eq!(black_cells(&svg, 24, 0, 0, 20, 20), 160);
}

#[test]
fn z36_and_unit_black_counts() {
    assert_eq!(
        black_cells(&render(&z36_tiling(), 4, 4), 24, 0, 0, 4, 4),
        16
    );
    assert_eq!(
        black_cells(&render(&unit_tiling(), 12, 12), 24, 0, 0, 12, 12),
        0
    );
}

#[test]
fn renders_match_snapshots() {
    let cases = [
        ("unit", unit_tiling(), 8),
        (
            "wildest",
            wildest_integer_tiling(ParameterAssignment::Formal),
            20,
        ),
        ("z36", z36_tiling(), 4),
    ];
    for (name, t, n) in cases {
        let opts = RenderOptions {
            labels: true,
            ..RenderOptions::default()
        };
        let a = render_model_svg(&t, 0, 0, n, n, &opts).unwrap();
        let b = render_model_svg(&t, 0, 0, n, n, &opts).unwrap();
        assert_eq!(a, b);
        let path = format!("{}/tests/snapshots/{name}.svg", env!("CARGO_MANIFEST_DIR"));
        let expected = std::fs::read_to_string(&path).unwrap();
        assert_eq!(a, expected, "{name} differs from {path}");
    }
}
