use meridian_core::invariants::{derivative_formulas, eight_invariants, oracle_invariants, oracle_second_fundamental};
use meridian_core::{Directrix, Execution, Interval, MeridianSurface, ParamGrid, ProfileCurve};

fn surface(f: &str, phi: &str, u: (f64, f64)) -> MeridianSurface {
    let p = ProfileCurve::from_expr(f, Interval::new(u.0, u.1).unwrap(), 0.0).unwrap();
    let d = Directrix::from_expr(phi, Interval::new(-1.0, 1.0).unwrap()).unwrap();
    MeridianSurface::new(p, d).unwrap()
}

#[test]
fn oracle_agrees_on_a_grid() {
    let s = surface("sqrt(u + 1)", "exp(0.5*v)", (0.0, 2.0));
    let grid = ParamGrid::new(Interval::new(0.2, 1.8).unwrap(), Interval::new(-0.8, 0.8).unwrap(), 6, 6).unwrap();
    for (u, v) in grid.points() {
        let exact = eight_invariants(&s, u, v).unwrap();
        let num = oracle_invariants(&s, u, v, 1e-4).unwrap();
        for (a, b) in exact.eight().iter().zip(num.eight()) {
            assert!((a - b).abs() < 1e-6, "({u}, {v}) {a} vs {b}");
        }
        let sf = oracle_second_fundamental(&s, u, v, 1e-4).unwrap();
        let want = derivative_formulas(&s.local(u, v).unwrap());
        for (num, want) in sf.derivatives.iter().zip(want) {
            for (a, b) in num.to_array().iter().zip(want.to_array()) {
                assert!((a - b).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn oracle_error_is_second_order() {
    let s = surface("cos(u) + 2", "2 + sin(v)", (0.2, 2.8));
    let (u, v) = (1.1, 0.3);
    let exact = eight_invariants(&s, u, v).unwrap();
    let err = |h: f64| {
        let o = oracle_invariants(&s, u, v, h).unwrap();
        exact.eight().iter().zip(o.eight()).map(|(a, b)| (a - b).abs()).sum::<f64>()
    };
    let ratio = err(1e-3) / err(1e-4);
    assert!((50.0..=200.0).contains(&ratio), "{ratio}");
}

#[test]
fn sequential_and_parallel_grids_agree() {
    let s = surface("cos(u) + 2", "2 + sin(v)", (0.2, 2.8));
    let grid = ParamGrid::new(Interval::new(0.3, 2.7).unwrap(), Interval::new(-0.9, 0.9).unwrap(), 12, 9).unwrap();
    let run = |exec| grid.map(exec, |u, v| eight_invariants(&s, u, v).ok().map(|r| r.eight()));
    let (a, b) = (run(Execution::Sequential), run(Execution::Parallel));
    assert_eq!(a.len(), 108);
    // bitwise equality, not just closeness
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
}
