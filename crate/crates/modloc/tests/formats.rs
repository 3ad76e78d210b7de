use std::path::Path;
use std::sync::Arc;

use modloc::config::{self, Mode};
use modloc::formats::*;
use modloc::RunError;
use modloc_core::flap::{Atom, Cell, Density, SampledDistribution};
use modloc_core::geometry::{FourVector, LorentzTransform};
use modloc_core::localization::boundary_function;
use modloc_core::modular::Source;
use modloc_core::regions::PolyRegion;
use modloc_core::shell::{MassShellGrid, WaveFunction};
use modloc_core::C64;
use proptest::prelude::*;

fn sample_wave(seed: u64, grid: Arc<MassShellGrid>) -> WaveFunction {
    let mut s = seed | 1;
    let mut next = || {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        (s >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let n = grid.n_theta * grid.transverse.len();
    let samples = (0..n).map(|_| C64::new(next(), next() * 1e-7)).collect();
    WaveFunction::new(grid, samples).unwrap()
}

#[test]
fn wavefunction_csv_roundtrips_with_transverse_grid() {
    let g = Arc::new(MassShellGrid::with_square_transverse(1.3, 64, 8.0, 3, 2.0).unwrap());
    let w = sample_wave(9, g.clone());
    let text = wavefunction_csv(&w);
    assert!(text.lines().next().unwrap().starts_with('#'));
    let back = read_wavefunction(&text, Path::new("w.csv")).unwrap();
    assert!(grids_match(&g, &back.grid));
    assert_eq!(back.samples, w.samples);
}

#[test]
fn bad_wavefunction_csv_is_an_input_error() {
    let g = Arc::new(MassShellGrid::default_1p1(1.0).unwrap());
    let text = wavefunction_csv(&sample_wave(3, g));
    let truncated: String = text.lines().take(20).map(|l| format!("{l}\n")).collect();
    assert!(read_wavefunction(&truncated, Path::new("t.csv")).is_err());
    let garbled = text.replacen("e-", "x-", 1);
    assert!(matches!(read_wavefunction(&garbled, Path::new("g.csv")), Err(RunError::Io { .. })));
}

#[test]
fn tube_sample_roundtrips() {
    let g = Arc::new(MassShellGrid::default_1p1(1.0).unwrap());
    let v = modloc_core::analytic::AnalyticVector::from_family(modloc_core::shell::AnalyticFamily::gaussian(0.1, 1.0), g.clone());
    let taus = [C64::new(0.0, 0.5), C64::new(-0.3, 2.0)];
    let pts: Vec<(usize, usize)> = (0..g.n_theta).step_by(101).map(|j| (j, 0)).collect();
    let s = boundary_function(Source::Analytic(&v), FourVector::new(0.0, 0.0, 0.0, -1.0), &LorentzTransform::IDENTITY, &taus, &pts).unwrap();
    let text = tube_sample_csv(&s);
    let back = read_tube_points(&text, Path::new("tube.csv")).unwrap();
    assert_eq!(back.len(), s.points.len());
    // overflowed values come back as NaN, so compare the rendered text
    assert_eq!(tube_sample_csv(&modloc_core::localization::TubeSample { points: back, ..s }), text);
}

#[test]
fn example_distributions_parse_and_roundtrip() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/distributions");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let dj: DistributionJson = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let u = dj.build("distribution").unwrap();
        let again = DistributionJson::from_distribution(&u).build("distribution").unwrap();
        assert_eq!(u.atoms, again.atoms, "{}", path.display());
        assert_eq!(u.cells, again.cells, "{}", path.display());
    }
}

#[test]
fn opaque_density_is_kept_by_name() {
    let text = r#"{"n": 1, "cells": [{"lo": [0], "hi": ["inf"], "density": "lognormal"}],
                   "hull": {"halfspaces": [{"n": [-1], "c": 0}]}}"#;
    let u = serde_json::from_str::<DistributionJson>(text).unwrap().build("d").unwrap();
    assert_eq!(u.cells[0].density, Density::Opaque("lognormal".into()));
    assert_eq!(u.cells[0].hi[0], f64::INFINITY);
}

#[test]
fn every_example_config_parses() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples");
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") && !path.ends_with("malformed.json") {
            let cfg = config::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert!(cfg.mode.is_some(), "{}", path.display());
        }
    }
    let err = config::load(&dir.join("malformed.json")).unwrap_err();
    assert!(matches!(err, RunError::Parse { .. } | RunError::Invalid { .. }), "{err}");
}

#[test]
fn config_errors_name_the_field() {
    let p = Path::new("c.json");
    let unknown = config::parse(r#"{"mode": "tomita", "gird": {}}"#, p).unwrap_err();
    assert!(unknown.to_string().contains("gird"), "{unknown}");
    let cfg = config::parse(r#"{"mode": "tomita", "grid": {"n_theta": 15}}"#, p).unwrap();
    let err = cfg.grid.build().unwrap_err();
    assert!(err.to_string().contains("n_theta"), "{err}");
    assert!(Mode::parse("tomtia").is_err());
    assert_eq!(Mode::parse("support-estimate").unwrap(), Mode::SupportEstimate);
}

#[test]
fn atomic_write_replaces_whole_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/out.txt");
    write_atomic(&path, b"first version, longer").unwrap();
    write_atomic(&path, b"second").unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), b"second");
    let leftovers: Vec<_> = std::fs::read_dir(path.parent().unwrap()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(leftovers.len(), 1, "{leftovers:?}");
}

fn finite_or_inf() -> impl Strategy<Value = f64> {
    prop_oneof![8 => -1e6f64..1e6, 1 => Just(f64::INFINITY), 1 => Just(f64::NEG_INFINITY)]
}

proptest! {
    #[test]
    fn floats_roundtrip_through_fmt(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        prop_assert_eq!(fmt(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn series_csv_roundtrips(rows in proptest::collection::vec(proptest::collection::vec(proptest::num::f64::NORMAL, 3), 0..20)) {
        let text = series_csv(&["a", "b", "c"], &rows);
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let back: Vec<Vec<f64>> = rdr.records().map(|r| r.unwrap().iter().map(|s| s.parse().unwrap()).collect()).collect();
        prop_assert_eq!(back, rows);
    }

    #[test]
    fn distribution_json_roundtrips(
        atoms in proptest::collection::vec((-5.0f64..5.0, -2.0f64..2.0, -2.0f64..2.0, 0u32..3), 0..4),
        cells in proptest::collection::vec((-5.0f64..0.0, finite_or_inf(), -2.0f64..2.0, proptest::option::of(-2.0f64..2.0)), 0..3),
    ) {
        let u = SampledDistribution {
            dim: 1,
            atoms: atoms.iter().map(|&(x, re, im, d)| Atom { x: vec![x], w: C64::new(re, im), deriv: vec![d] }).collect(),
            cells: cells
                .iter()
                .map(|&(lo, hi, w, rate)| Cell {
                    lo: vec![lo],
                    hi: vec![hi.max(lo)],
                    w: C64::new(w, 0.0),
                    density: rate.map_or(Density::Const, |r| Density::Exp(vec![r])),
                })
                .collect(),
            order: 2,
            hull: PolyRegion::boxed(&[-5.0], &[5.0]),
        };
        let text = serde_json::to_string(&DistributionJson::from_distribution(&u)).unwrap();
        let back: DistributionJson = serde_json::from_str(&text).unwrap();
        let v = SampledDistribution { hull: u.hull.clone(), ..back_dist(&back) };
        prop_assert_eq!(v.atoms, u.atoms);
        prop_assert_eq!(v.cells, u.cells);
        prop_assert_eq!(v.order, u.order);
    }
}

// Rebuilds without validation, since random cells may leave the hull.
fn back_dist(d: &DistributionJson) -> SampledDistribution {
    SampledDistribution {
        dim: d.n,
        atoms: d.atoms.iter().map(|a| Atom { x: a.x.clone(), w: C64::new(a.w[0], a.w[1]), deriv: a.deriv.clone() }).collect(),
        cells: d
            .cells
            .iter()
            .map(|c| Cell {
                lo: c.lo.iter().map(|b| b.value()).collect(),
                hi: c.hi.iter().map(|b| b.value()).collect(),
                w: C64::new(c.w[0], c.w[1]),
                density: match &c.rate {
                    Some(r) => Density::Exp(r.clone()),
                    None => Density::Const,
                },
            })
            .collect(),
        order: d.order,
        hull: PolyRegion::boxed(&[-5.0], &[5.0]),
    }
}
