use apspectra::mean::*;
use apspectra::Error;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Signed;

type Q = Ratio<i64>;

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

#[test]
fn constant_samples_converge_to_the_constant() {
    let c = Complex64::new(0.25, -1.5);
    for s in [
        FolnerSchedule::intervals(7, 12).unwrap(),
        FolnerSchedule::dyadic(10).unwrap(),
        FolnerSchedule::alternating(40).unwrap(),
    ] {
        let (lo, hi) = s.hull();
        let est = partial_means(&Track::from_fn(lo, hi, |_| c), &s, s.len(), &MeanConfig::default()).unwrap();
        assert!(est.partials.iter().all(|(_, v)| (*v - c).norm() < 1e-15));
        match est.verdict {
            Verdict::Converged { limit, residual } => {
                assert!((limit - c).norm() < 1e-15);
                assert!(residual < 1e-15);
            }
            v => panic!("{v:?}"),
        }
    }
}

#[test]
fn step_along_alternating_windows_oscillates_exactly() {
    let s = FolnerSchedule::alternating(60).unwrap();
    let (lo, hi) = s.hull();
    let track = Track::from_fn(lo, hi, |t| if t >= 0 { Q::from_integer(1) } else { Q::from_integer(0) });
    let est = partial_means(&track, &s, s.len(), &MeanConfig::default()).unwrap();
    for (n, a) in &est.partials {
        let want = if n % 2 == 0 { 1 } else { 0 };
        assert_eq!(*a, Q::from_integer(want), "n={n}");
    }
    assert_eq!(
        est.verdict,
        Verdict::Oscillating { liminf: Q::from_integer(0), limsup: Q::from_integer(1) }
    );
}

#[test]
fn alternating_signs_average_out() {
    let s = FolnerSchedule::intervals(10, 30).unwrap();
    let (lo, hi) = s.hull();
    let track = Track::from_fn(lo, hi, |t| if t % 2 == 0 { Q::from_integer(1) } else { Q::from_integer(-1) });
    let est = partial_means(&track, &s, s.len(), &MeanConfig::default()).unwrap();
    for (n, a) in &est.partials {
        assert!(a.abs() <= q(1, 10 * *n as i64));
    }
    assert!(matches!(est.verdict, Verdict::Converged { limit, .. } if limit == Q::from_integer(0)));
}

#[test]
fn missing_samples_are_reported() {
    let s = FolnerSchedule::intervals(10, 3).unwrap();
    let track = Track::from_fn(0, 25, |_| 1.0_f64);
    let err = partial_means(&track, &s, 3, &MeanConfig::default()).unwrap_err();
    assert!(matches!(err, Error::MissingSamples { t: 25 }), "{err:?}");
}

#[test]
fn upper_mean_examples() {
    let cfg = MeanConfig::<Q>::default();
    let s = FolnerSchedule::intervals(30, 20).unwrap();
    let zero = Track::from_fn(0, 600, |_| Q::from_integer(0));
    assert_eq!(upper_mean(&zero, &s, 20, &cfg).unwrap(), Q::from_integer(0));

    let d = FolnerSchedule::dyadic(12).unwrap();
    let step = Track::from_fn(0, 4097, |t| if t >= 0 { Q::from_integer(1) } else { Q::from_integer(0) });
    assert_eq!(upper_mean(&step, &d, 12, &cfg).unwrap(), Q::from_integer(1));

    let thirds = Track::from_fn(0, 600, |t| if t % 3 == 0 { Q::from_integer(1) } else { Q::from_integer(0) });
    let m = upper_mean(&thirds, &s, 20, &cfg).unwrap();
    assert!((m - q(1, 3)).abs() <= q(1, 600));
    assert!(m >= Q::from_integer(0) && m <= Q::from_integer(1));
}

#[test]
fn uniform_mean_examples() {
    let c = Track::from_fn(-300, 300, |_| q(3, 7));
    let (v, _) = uniform_mean_mn(&c, Window::new(0, 10), ShiftRange::symmetric(200)).unwrap();
    assert_eq!(v, q(3, 7));

    let bump = Track::from_fn(-300, 300, |t| if (0..100).contains(&t) { 1.0 } else { 0.0 });
    let (v, s) = uniform_mean_mn(&bump, Window::new(0, 10), ShiftRange::symmetric(200)).unwrap();
    assert_eq!(v, 1.0);
    assert!((0..=90).contains(&s));

    let step = Track::from_fn(-300, 300, |t| if t >= 0 { 1.0 } else { 0.0 });
    let (v, s) = uniform_mean_mn(&step, Window::new(0, 10), ShiftRange::symmetric(200)).unwrap();
    assert_eq!((v, s >= 0), (1.0, true));

    // The sup dominates the unshifted window.
    let plain = bump.slice(Window::new(-5, 10)).unwrap().iter().sum::<f64>() / 10.0;
    let (v, _) = uniform_mean_mn(&bump, Window::new(-5, 10), ShiftRange::new(-3, 3)).unwrap();
    assert!(v >= plain);

    assert!(matches!(
        uniform_mean_mn(&bump, Window::new(0, 10), ShiftRange::new(1, 0)),
        Err(Error::EmptyShiftRange)
    ));
}

#[test]
fn seminorm_examples() {
    let s = FolnerSchedule::intervals(10, 50).unwrap();
    let table = [0.1, -0.7, 0.3, 0.65, -0.2, 0.0];
    let t = Track::from_fn(0, 6, |k| table[k as usize]);
    let sup = AdmissibleSeminorm::<f64>::new(SeminormKind::Sup, s.clone());
    assert_eq!(sup.eval(&t).unwrap().value, 0.7);

    let odd = Track::from_fn(0, 500, |k| if k % 2 != 0 { 1.0 } else { 0.0 });
    let mb = AdmissibleSeminorm::<f64>::new(SeminormKind::MeanBar, s.clone());
    assert!((mb.eval(&odd).unwrap().value - 0.5).abs() <= 1.0 / 500.0);

    let sym = FolnerSchedule::symmetric(10, 20).unwrap();
    let wb = AdmissibleSeminorm::<f64>::new(SeminormKind::WeylBar, sym.clone()).with_shift_budget(400);
    let step = Track::from_fn(-1000, 1000, |k| if k >= 0 { 1.0 } else { 0.0 });
    let w = wb.eval(&step).unwrap();
    assert_eq!(w.value, 1.0);
    assert_eq!(w.shift_budget, Some(400));
    let m = AdmissibleSeminorm::<f64>::new(SeminormKind::MeanBar, sym).eval(&step).unwrap();
    assert!((m.value - 0.5).abs() < 0.01);
}

#[test]
fn stabilization_examples() {
    let s = FolnerSchedule::intervals(4, 12).unwrap();
    let shifts = ShiftRange::symmetric(60);
    let zero = Track::from_fn(-200, 200, |_| Q::from_integer(0));
    let r = stabilization_check(&zero, &s, q(1, 10), shifts, None).unwrap();
    assert_eq!((r.first_n_below, r.all_later_below), (1, true));

    // One unit at 0: the level is 1/|B_N|, first below 1/10 once |B_N| > 10.
    let bump = Track::from_fn(-200, 200, |t| if t == 0 { Q::from_integer(1) } else { Q::from_integer(0) });
    let r = stabilization_check(&bump, &s, q(1, 10), shifts, None).unwrap();
    let oracle = s.windows().iter().position(|w| w.len > 10).unwrap() + 1;
    assert_eq!(r.first_n_below, oracle);
    assert!(r.all_later_below);
    assert!(r.margin >= Q::from_integer(0));
    for (n, level) in &r.levels {
        assert_eq!(*level, q(1, s.window(*n).unwrap().len as i64));
    }

    let tm = apspectra::systems::PointGen::thue_morse();
    let pm = Track::from_fn(-200, 200, |t| if tm.at(t) == 0 { 1.0 } else { -1.0 });
    assert!(matches!(
        stabilization_check(&pm, &s, 0.9, shifts, None),
        Err(Error::NeverBelow { smallest, .. }) if smallest == 1.0
    ));
}

#[test]
fn schedules_have_the_documented_windows() {
    let i = FolnerSchedule::intervals(10, 3).unwrap();
    assert_eq!(i.windows(), &[Window::new(0, 10), Window::new(0, 20), Window::new(0, 30)]);
    let d = FolnerSchedule::dyadic(3).unwrap();
    assert_eq!(d.windows(), &[Window::new(1, 2), Window::new(1, 4), Window::new(1, 8)]);
    let a = FolnerSchedule::alternating(4).unwrap();
    assert_eq!(a.window(1), Some(Window::new(-1, 1)));
    assert_eq!(a.window(2), Some(Window::new(0, 3)));
    assert_eq!(a.window(3), Some(Window::new(-3, 3)));
    assert_eq!(a.window(4), Some(Window::new(0, 5)));
}
