mod common;

use icemetrics::io::{decode_mask, encode_mask};
use icemetrics::{
    connectivity_report, extract_layers, load_mask, save_mask, synth_mask, BinaryMask,
    ConnectivityReport, MaskFormat, SynthSpec,
};
use proptest::prelude::*;

fn mask_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BinaryMask> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(rows, cols)| {
        (0u8..=100).prop_flat_map(move |density| {
            proptest::collection::vec(0u8..100, rows * cols).prop_map(move |noise| {
                let cells = noise.into_iter().map(|v| u8::from(v < density)).collect();
                BinaryMask::new(rows, cols, cells).unwrap()
            })
        })
    })
}

fn synth_strategy() -> impl Strategy<Value = SynthSpec> {
    (2usize..=96, 1usize..=160, any::<u64>(), -1.5f64..1.5, 0.0f64..=1.0).prop_flat_map(
        |(rows, cols, seed, base_slope, break_prob)| {
            (0..=rows.div_ceil(2)).prop_map(move |n_layers| SynthSpec {
                rows,
                cols,
                n_layers,
                base_slope,
                break_prob,
                seed,
            })
        },
    )
}

#[test]
fn staircase_matches_flood_fill() {
    let m = BinaryMask::from_fn(10, 10, |r, c| r == c).unwrap();
    let layers = extract_layers(&m);
    assert_eq!(layers.len(), 1);
    let oracle = common::flood_fill_components(&m);
    assert_eq!(oracle.len(), 1);
    assert_eq!(layers[0].pixels(), oracle[0].as_slice());
}

#[test]
fn pgm_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let m = common::noise_mask(17, 23, 30, 5);
    for (name, format) in [
        ("a.pgm", MaskFormat::PgmBinary),
        ("b.pgm", MaskFormat::PgmAscii),
        ("c.csv", MaskFormat::Csv),
    ] {
        let path = dir.path().join(name);
        save_mask(&m, &path, format).unwrap();
        assert_eq!(load_mask(&path, 128).unwrap(), m);
    }
}

#[test]
fn synth_oracle_seed_seven() {
    let spec = SynthSpec {
        rows: 128,
        cols: 256,
        n_layers: 20,
        base_slope: 0.2,
        break_prob: 0.5,
        seed: 7,
    };
    let out = synth_mask(&spec).unwrap();
    assert_eq!(connectivity_report(&out.mask), out.oracle);
    assert!(out.oracle.dl > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn layers_match_flood_fill(m in mask_strategy(24, 24)) {
        let layers = extract_layers(&m);
        let oracle = common::flood_fill_components(&m);
        prop_assert_eq!(layers.len(), oracle.len());
        for (i, (layer, comp)) in layers.iter().zip(&oracle).enumerate() {
            prop_assert_eq!(layer.id(), i);
            prop_assert_eq!(layer.pixels(), comp.as_slice());
            prop_assert_eq!(layer.col_min(), comp.iter().map(|p| p.1).min().unwrap());
            prop_assert_eq!(layer.col_max(), comp.iter().map(|p| p.1).max().unwrap());
        }
    }

    #[test]
    fn layers_partition_and_reassemble(m in mask_strategy(32, 32)) {
        let layers = extract_layers(&m);
        let total: usize = layers.iter().map(|l| l.len()).sum();
        prop_assert_eq!(total, m.count_ones());

        let mut summed = vec![0u8; m.len()];
        for layer in &layers {
            let own = BinaryMask::from_pixels(m.rows(), m.cols(), layer.pixels().iter().copied()).unwrap();
            for (acc, &v) in summed.iter_mut().zip(own.cells()) {
                *acc += v;
            }
        }
        prop_assert_eq!(summed.as_slice(), m.cells());
    }

    #[test]
    fn encode_decode_round_trip(m in mask_strategy(16, 16)) {
        for format in [MaskFormat::PgmAscii, MaskFormat::PgmBinary, MaskFormat::Csv] {
            let bytes = encode_mask(&m, format);
            prop_assert_eq!(&decode_mask(&bytes, 128).unwrap(), &m);
        }
    }

    #[test]
    fn generator_oracle_holds(spec in synth_strategy()) {
        let out = synth_mask(&spec).unwrap();
        prop_assert_eq!(connectivity_report(&out.mask), out.oracle);
        if spec.break_prob == 0.0 {
            prop_assert_eq!(out.oracle.dl, 0);
        }
    }

    #[test]
    fn report_counts_add_up(m in mask_strategy(24, 24)) {
        let r = connectivity_report(&m);
        prop_assert_eq!(r.tl, r.cl + r.dl);
        prop_assert_eq!(r.tl, extract_layers(&m).len());
    }

    #[test]
    fn mirror_leaves_report_unchanged(m in mask_strategy(24, 24)) {
        prop_assert_eq!(connectivity_report(&m), connectivity_report(&m.flip_cols()));
    }

    #[test]
    fn deleting_a_column_breaks_one_layer(
        seed in any::<u64>(),
        cols in 2usize..80,
        n_layers in 1usize..8,
        pick in any::<proptest::sample::Index>(),
        col_pick in any::<proptest::sample::Index>(),
    ) {
        let spec = SynthSpec { rows: 48, cols, n_layers, base_slope: 0.4, break_prob: 0.0, seed };
        let out = synth_mask(&spec).unwrap();
        let before = connectivity_report(&out.mask);
        prop_assert_eq!(before, ConnectivityReport::new(n_layers, 0));

        let layers = extract_layers(&out.mask);
        let target = &layers[pick.index(layers.len())];
        let col = col_pick.index(cols);
        let m = BinaryMask::from_fn(48, cols, |r, c| {
            out.mask.get(r, c) && !(c == col && target.pixels().contains(&(r, c)))
        }).unwrap();
        let after = connectivity_report(&m);

        prop_assert_eq!(after.cl, before.cl - 1);
        let expected_pieces = if col == 0 || col == cols - 1 { 1 } else { 2 };
        prop_assert_eq!(after.dl, before.dl + expected_pieces);
        prop_assert!(after.tl >= before.tl);
    }
}
