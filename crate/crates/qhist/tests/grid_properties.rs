use std::f64::consts::{PI, SQRT_2};

use qhist::grid::{GridHybrid, GridWave, TranslateMethod};
use qhist::random;
use qhist_core::hybrid::{FlipVariant, HybridState};
use qhist_core::qubit::RegisterState;
use qhist_core::C64;
use rand::Rng;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn wave_packet(center: f64, k0: f64, width: f64) -> impl Fn(f64) -> C64 {
    move |x| {
        let env = (-(x - center).powi(2) / (2.0 * width * width)).exp();
        C64::from_polar(env, k0 * (x - center))
    }
}

#[test]
fn spectral_translation_moves_smooth_packets() {
    let (x_min, n) = (-8.0, 1024);
    let h = 16.0 / n as f64;
    for (a, k0) in [(0.5, 0.0), (-1.25, 3.0), (2.0, -5.0), (0.013, 1.0)] {
        let g = GridWave::sample_function(wave_packet(0.0, k0, 0.7), x_min, h, n).unwrap();
        let want = GridWave::sample_function(wave_packet(a, k0, 0.7), x_min, h, n).unwrap();
        let got = g.translate_spectral(a);
        assert!(got.max_abs_diff(&want) <= 1e-9, "a = {a}, k0 = {k0}");
        assert!((got.norm2() - g.norm2()).abs() <= 1e-12);
    }
}

#[test]
fn spectral_translations_compose() {
    let (x_min, n) = (-8.0, 512);
    let h = 16.0 / n as f64;
    let g = GridWave::sample_function(wave_packet(-1.0, 2.0, 0.8), x_min, h, n).unwrap();
    let two = g.translate_spectral(0.3).translate_spectral(0.9);
    assert!(two.max_abs_diff(&g.translate_spectral(1.2)) <= 1e-12);
}

#[test]
fn generator_matches_decimation_on_wider_gaussians() {
    let (x_min, n) = (-12.0, 512);
    let h = 24.0 / n as f64;
    for width in [0.8, 1.0, 1.5] {
        let norm = (PI * width * width).powf(-0.25);
        let f = move |x: f64| c(norm * (-x * x / (2.0 * width * width)).exp());
        let g = GridWave::sample_function(f, x_min, h, n).unwrap();
        let analytic = GridWave::sample_function(|x| f(2.0 * x) * SQRT_2, x_min, h, n).unwrap();
        let out = g.dilation_generator();
        let rel = out.l2_distance(&analytic) / analytic.norm2().sqrt();
        assert!(rel <= 1e-4, "width {width}: {rel}");
        assert!((out.norm2() - g.norm2()).abs() <= 1e-6);
    }
}

#[test]
fn grid_flip_matches_dyadic_flip() {
    let mut rng = random::suite_rng(99, 0);
    let (x_min, n) = (-2.0, 1024);
    let h = 4.0 / n as f64;
    for _ in 0..20 {
        let q_count = rng.gen_range(1..=3);
        let q = rng.gen_range(0..q_count);
        let level = rng.gen_range(0..=4);
        let exact = random::hybrid(&mut rng, q_count, level, -1, 2).unwrap();
        let rows: Vec<GridWave> = (0..exact.dim())
            .map(|i| GridWave::from_dyadic(&exact.row(i), x_min, h, n).unwrap())
            .collect();
        for v in [FlipVariant::OutsideUnit, FlipVariant::InsideOneTwo] {
            let flipped = exact.cond_flip(q, v).unwrap();
            for i in 0..exact.dim() {
                let j = i ^ 1 << q;
                let want = flipped.row(i);
                for s in 0..n {
                    let x = rows[i].x(s);
                    let swap = match v {
                        FlipVariant::OutsideUnit => !(0.0..1.0).contains(&x),
                        FlipVariant::InsideOneTwo => (1.0..2.0).contains(&x),
                    };
                    let got = if swap {
                        rows[j].samples()[s]
                    } else {
                        rows[i].samples()[s]
                    };
                    assert_eq!(got, want.value_at(x));
                }
            }
        }
    }
}

#[test]
fn grid_erase_sequence_tracks_dyadic_for_both_methods() {
    let mut rng = random::suite_rng(5, 1);
    let (x_min, n) = (-2.0, 4096);
    let h = 4.0 / n as f64;
    for _ in 0..5 {
        let pairs: Vec<(C64, C64)> = (0..3).map(|_| random::pair(&mut rng)).collect();
        let mut reg = RegisterState::new(0, vec![c(1.0)]).unwrap();
        for &(a, b) in &pairs {
            reg = reg.tensor(&RegisterState::qubit(a, b).unwrap()).unwrap();
        }
        let psi = random::wave_in(&mut rng, 2, 0, 1).unwrap();
        let psi = psi.scale(c(1.0 / psi.norm2().sqrt()));
        let (exact, _) = HybridState::lift(&reg, &psi)
            .unwrap()
            .erase_sequence(&[0, 1, 2])
            .unwrap();
        let g = GridWave::from_dyadic(&psi, x_min, h, n).unwrap();
        for method in [TranslateMethod::Shift, TranslateMethod::Spectral] {
            let mut grid = GridHybrid::lift(&reg, &g, method);
            for q in 0..3 {
                grid = grid.erase(q).unwrap();
            }
            assert!(grid.l2_distance_to(&exact).unwrap() <= 1e-9);
            assert!((grid.norm2() - 1.0).abs() <= 1e-12);
            assert!(grid.weight_where(0b111) <= 1e-20);
        }
    }
}

#[test]
fn grid_erase_rejects_support_outside_the_unit_interval() {
    let (x_min, n) = (-2.0, 256);
    let h = 4.0 / n as f64;
    let g = GridWave::sample_function(
        |x| {
            if (0.5..1.5).contains(&x) {
                c(1.0)
            } else {
                c(0.0)
            }
        },
        x_min,
        h,
        n,
    )
    .unwrap();
    let reg = RegisterState::qubit(c(1.0), c(0.0)).unwrap();
    let err = GridHybrid::lift(&reg, &g, TranslateMethod::Shift)
        .erase(0)
        .unwrap_err();
    assert!(matches!(err, qhist_core::Error::Contract(_)));
}

#[test]
fn grid_translation_refuses_to_wrap() {
    let (x_min, n) = (-2.0, 256);
    let h = 4.0 / n as f64;
    let g = GridWave::sample_function(
        |x| {
            if (1.0..2.0).contains(&x) {
                c(1.0)
            } else {
                c(0.0)
            }
        },
        x_min,
        h,
        n,
    )
    .unwrap();
    let reg = RegisterState::qubit(c(0.0), c(1.0)).unwrap();
    let lifted = GridHybrid::lift(&reg, &g, TranslateMethod::Shift);
    assert!(lifted.cond_translate(0, 1).is_err());
    assert!(lifted.cond_translate(0, -3).is_ok());
}
