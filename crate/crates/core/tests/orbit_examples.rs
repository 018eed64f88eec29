use apspectra::almostper::*;
use apspectra::mean::{FolnerSchedule, MeanConfig, ShiftRange, Window};
use apspectra::systems::*;
use num_complex::Complex64;
use num_rational::Ratio;

type Q = Ratio<i64>;

#[test]
fn thue_morse_plus_minus_prefix() {
    let f = Observable::<f64>::plus_minus(2).unwrap();
    let track = observable_track(&f, &PointGen::thue_morse(), 0, 7).unwrap();
    let re: Vec<f64> = track.values().iter().map(|v| v.re).collect();
    assert_eq!(re, vec![1.0, -1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0]);
}

#[test]
fn indicator_and_constant_tracks() {
    let x = PointGen::periodic("AB").unwrap();
    let f = Observable::<f64>::indicator(0, 2).unwrap();
    let t = observable_track(&f, &x, 0, 5).unwrap();
    let re: Vec<f64> = t.values().iter().map(|v| v.re).collect();
    assert_eq!(re, vec![1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);

    let c = Complex64::new(-0.3, 0.4);
    let g = Observable::constant(c, 2).unwrap();
    for x in [PointGen::fibonacci(), PointGen::step(), PointGen::bernoulli(0.5, 3).unwrap()] {
        assert!(observable_track(&g, &x, -20, 20).unwrap().values().iter().all(|v| *v == c));
    }
}

#[test]
fn substitution_points_are_fixed() {
    for x in [PointGen::fibonacci(), PointGen::thue_morse(), PointGen::period_doubling()] {
        let PointKind::Substitution { point, .. } = x.kind() else {
            panic!("expected a substitution point")
        };
        let word = x.eval_window(0, 200);
        let mut image = word.clone();
        for _ in 0..point.power() {
            image = point.apply(&image);
        }
        let longer = x.eval_window(0, image.len() as i64 - 1);
        assert_eq!(image, longer, "{}", x.name());
    }
}

#[test]
fn bernoulli_is_reproducible_and_order_independent() {
    let a = PointGen::bernoulli(0.5, 42).unwrap();
    let b = PointGen::bernoulli(0.5, 42).unwrap();
    let whole = a.eval_window(-300, 300);
    let mut pieces = b.eval_window(100, 300);
    let mut left = b.eval_window(-300, 99);
    left.append(&mut pieces);
    assert_eq!(whole, left);
    assert_ne!(whole, PointGen::bernoulli(0.5, 43).unwrap().eval_window(-300, 300));
}

#[test]
fn metric_examples() {
    let x = PointGen::periodic("AB").unwrap();
    assert_eq!(metric_d::<Q>(&x, &x, 8), Q::from_integer(0));
    assert_eq!(metric_d::<Q>(&x, &x.shift(1), 8), Q::from_integer(1));
    assert_eq!(metric_d::<Q>(&x, &x.shift(2), 8), Q::from_integer(0));
    assert_eq!(sup_metric_lb::<Q>(&x, &x.shift(2), 50, 8), Q::from_integer(0));

    let y = PointGen::step();
    let c: Q = (-8..=8i64).map(|k| Q::new(1, 1 << k.unsigned_abs())).sum();
    assert_eq!(sup_metric_lb::<Q>(&y, &y.shift(1), 100, 8), Q::from_integer(1) / c);
}

#[test]
fn averaged_d_examples() {
    let cfg = MeanConfig::<Q>::default();
    let s = FolnerSchedule::intervals(20, 10).unwrap();
    let m = CylinderMetric::<Q>::new(16);
    let x = PointGen::periodic("AB").unwrap();
    assert_eq!(*averaged_d(&x, 2, &s, &m, &cfg).unwrap().last(), Q::from_integer(0));
    assert_eq!(*averaged_d(&x, 1, &s, &m, &cfg).unwrap().last(), Q::from_integer(1));
    let f = PointGen::fibonacci();
    assert!(averaged_d(&f, 0, &s, &m, &cfg).unwrap().partials.iter().all(|(_, v)| *v == Q::from_integer(0)));

    let b = PointGen::bernoulli(0.5, 7).unwrap();
    let sf = FolnerSchedule::intervals(1000, 10).unwrap();
    let mf = CylinderMetric::<f64>::new(16);
    for t in [-3, 1, 17, 250] {
        let d = averaged_d(&b, t, &sf, &mf, &MeanConfig::default()).unwrap();
        assert!((d.last() - 0.5).abs() < 0.05, "t={t}: {}", d.last());
    }
}

#[test]
fn averaged_dn_examples() {
    let m = CylinderMetric::<Q>::new(8);
    let x = PointGen::periodic("AB").unwrap();
    let w = Window::new(0, 10);
    assert_eq!(averaged_dn(&x, 0, w, ShiftRange::symmetric(30), &m).unwrap(), Q::from_integer(0));
    assert_eq!(averaged_dn(&x, 1, w, ShiftRange::symmetric(30), &m).unwrap(), Q::from_integer(1));

    // Oracle: the step mismatch track is 2^{-|s+1|}/C on |s+1| ≤ 8.
    let c: Q = (-8..=8i64).map(|k| Q::new(1, 1 << k.unsigned_abs())).sum();
    let bump = |s: i64| {
        let k = (s + 1).unsigned_abs();
        if k <= 8 {
            Q::new(1, 1 << k) / c
        } else {
            Q::from_integer(0)
        }
    };
    let best = (-30..=30i64)
        .map(|a| (a..a + 10).map(bump).sum::<Q>() / Q::from_integer(10))
        .max()
        .unwrap();
    let got = averaged_dn(&PointGen::step(), 1, w, ShiftRange::symmetric(10_000), &m).unwrap();
    assert_eq!(got, best);
    assert!(got > Q::from_integer(0) && got < Q::new(1, 5));
}

#[test]
fn superlevel_density_examples() {
    let cfg = MeanConfig::<Q>::default();
    let s = FolnerSchedule::intervals(20, 10).unwrap();
    let m = CylinderMetric::<Q>::new(16);
    let x = PointGen::periodic("AB").unwrap();
    assert_eq!(*superlevel_density(&x, 1, Q::new(1, 2), &s, &m, &cfg).unwrap().last(), Q::from_integer(1));
    let f = PointGen::fibonacci();
    assert_eq!(*superlevel_density(&f, 0, Q::new(1, 100), &s, &m, &cfg).unwrap().last(), Q::from_integer(0));
    for t in [1, 3, 8, 13] {
        for delta in [Q::new(1, 10), Q::new(1, 4), Q::new(1, 2)] {
            let dens = superlevel_density(&f, t, delta, &s, &m, &cfg).unwrap();
            let d = averaged_d(&f, t, &s, &m, &cfg).unwrap();
            for ((_, a), (_, b)) in dens.partials.iter().zip(&d.partials) {
                assert!(*a <= *b / delta);
            }
        }
    }
}

#[test]
fn periodic_scans_find_the_period_lattice() {
    let x = PointGen::periodic("ABC").unwrap();
    let budget = ScanBudget::<f64>::new(FolnerSchedule::intervals(30, 10).unwrap());
    for kind in ScanKind::ALL {
        let scan = almost_period_scan(&x, 0.05, kind, 30, &budget).unwrap();
        assert_eq!(scan.periods, (-10..=10).map(|k| 3 * k).collect::<Vec<_>>(), "{kind:?}");
        assert_eq!(scan.max_gap, 3);
    }
}

#[test]
fn bernoulli_mean_scan_is_trivial() {
    let x = PointGen::bernoulli(0.5, 42).unwrap();
    let budget = ScanBudget::<f64>::new(FolnerSchedule::intervals(10, 1000).unwrap());
    let scan = almost_period_scan(&x, 0.2, ScanKind::Mean, 500, &budget).unwrap();
    assert_eq!(scan.periods, vec![0]);
    assert_eq!(scan.max_gap, 500);
    assert!(scan.converged_fraction().unwrap() > 0.5);
}

#[test]
fn fibonacci_mean_scan_gap() {
    let x = PointGen::fibonacci();
    let budget = ScanBudget::<f64>::new(FolnerSchedule::intervals(100, 100).unwrap());
    let scan = almost_period_scan(&x, 0.1, ScanKind::Mean, 500, &budget).unwrap();
    assert!(scan.periods.len() > 1);
    assert!(scan.periods.contains(&0));
    // Recorded from the brute-force scan.
    assert_eq!(scan.max_gap, FIBONACCI_GAP);
    assert!(scan.max_gap <= 55);
}

const FIBONACCI_GAP: u64 = 13;

#[test]
fn almost_periods_difference_property() {
    let x = PointGen::fibonacci();
    let budget = ScanBudget::<f64>::new(FolnerSchedule::intervals(100, 20).unwrap());
    let eps = 0.1;
    let wide = scan_values(&x, ScanKind::Mean, 120, &budget).unwrap();
    let value = |t: i64| wide.iter().find(|r| r.t == t).unwrap().value;
    let narrow = almost_period_scan(&x, eps, ScanKind::Mean, 60, &budget).unwrap();
    for &t in &narrow.periods {
        for &s in &narrow.periods {
            // Slack: boundary terms of the partial windows.
            assert!(value(t - s) < 2.0 * eps + 2.0 * 120.0 / 2000.0, "t={t} s={s}");
        }
    }
}

#[test]
fn classification_examples() {
    let budget = ScanBudget::<f64>::new(FolnerSchedule::intervals(10, 20).unwrap());
    let r = classify_point(&PointGen::periodic("ABB").unwrap(), &ClassifyConfig::new(60), &budget).unwrap();
    for kind in ScanKind::ALL {
        assert_eq!(r.verdict(kind), Evidence::EvidenceFor);
    }

    let budget = ScanBudget::<f64>::new(FolnerSchedule::intervals(10, 1000).unwrap());
    let r = classify_point(&PointGen::bernoulli(0.5, 42).unwrap(), &ClassifyConfig::new(100), &budget).unwrap();
    assert_eq!(r.verdict(ScanKind::Mean), Evidence::EvidenceAgainst);
}

#[test]
fn thue_morse_classification_is_recorded() {
    let budget = ScanBudget::<f64>::new(FolnerSchedule::intervals(100, 100).unwrap());
    let r = classify_point(&PointGen::thue_morse(), &ClassifyConfig::new(200), &budget).unwrap();
    let got: Vec<Evidence> = ScanKind::ALL.iter().map(|k| r.verdict(*k)).collect();
    assert_eq!(got, vec![Evidence::Undecided, Evidence::EvidenceAgainst, Evidence::EvidenceAgainst]);
}

#[test]
fn hierarchy_holds_on_every_report() {
    let budget = ScanBudget::<f64>::new(FolnerSchedule::intervals(50, 20).unwrap());
    for x in [PointGen::fibonacci(), PointGen::period_doubling(), PointGen::step(), PointGen::block()] {
        let r = classify_point(&x, &ClassifyConfig::new(80), &budget).unwrap();
        let [m, w, b] = [ScanKind::Mean, ScanKind::Weyl, ScanKind::Bohr].map(|k| r.verdict(k));
        if b == Evidence::EvidenceFor {
            assert_eq!(w, Evidence::EvidenceFor);
        }
        if w == Evidence::EvidenceFor {
            assert_eq!(m, Evidence::EvidenceFor);
        }
    }
}

#[test]
fn block_point_is_generic_along_dyadic_windows() {
    let b = PointGen::block();
    let d = FolnerSchedule::dyadic(16).unwrap();
    let f = Observable::<f64>::indicator(1, 2).unwrap();
    let est = apspectra::spectral::fourier_bohr(&f, &b, 0.0, &d, &MeanConfig::default()).unwrap();
    assert_eq!(est.last().re, 0.5);
}
