use gevrey_ns::mild::*;
use gevrey_ns::norms::{norm, NormKind};
use gevrey_ns::spectral::{heat_propagate_vector, taylor_green, taylor_green_3d, FrequencyGrid};
use gevrey_ns::GevreyParams;

#[test]
fn picard_reproduces_taylor_green_decay() {
    let g = FrequencyGrid::new(16).unwrap();
    let p = GevreyParams::new(0.1, 1.5, 1.0, 1.0).unwrap();
    let u0 = taylor_green(g);
    let window = largest_certified_window(&u0, &p, SMOOTHING_CONSTANT_K).unwrap().unwrap();
    let t = 0.9 * window;
    let (traj, trace) = picard_solve(&u0, t, &p, &PicardOptions::default()).unwrap();
    assert!(trace.certificate.holds && trace.converged && trace.bound_2y_holds);
    for (t, u) in traj.times.iter().zip(&traj.states) {
        let exact = u0.scaled((-2.0 * p.nu * t).exp());
        assert!(u.difference(&exact).unwrap().max_abs() < 1e-6);
    }
}

#[test]
fn duhamel_node_refinement_is_second_order() {
    let g = FrequencyGrid::new(8).unwrap();
    let p = GevreyParams::new(0.1, 1.5, 1.0, 1.0).unwrap();
    let u0 = taylor_green_3d(g);
    let t_end = 0.5;
    let b = |nodes: usize| {
        let times = uniform_nodes(t_end, nodes).unwrap();
        let states = times.iter().map(|&t| heat_propagate_vector(&u0, p.nu, t).unwrap()).collect();
        let traj = Trajectory::new(times, states, p).unwrap();
        duhamel_bilinear(&traj, &traj, t_end).unwrap()
    };
    let (b1, b2, b3) = (b(5), b(9), b(17));
    let e1 = b1.difference(&b2).unwrap().max_abs();
    let e2 = b2.difference(&b3).unwrap().max_abs();
    let ratio = e1 / e2;
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn continuation_states_stay_valid() {
    let g = FrequencyGrid::new(8).unwrap();
    let p = GevreyParams::new(0.1, 1.5, 1.0, 2.0).unwrap();
    let u0 = taylor_green_3d(g).scaled(0.1);
    let policy = WindowPolicy { max_window: 0.1, ..Default::default() };
    let (traj, rep) = continue_until(&u0, &p, Stop::Budget(0.3), &policy).unwrap();
    assert_eq!(rep.status, ContinuationStatus::BudgetReached);
    for w in &rep.windows {
        assert!(w.trace.certificate.holds && w.trace.converged && w.trace.bound_2y_holds);
    }
    for u in &traj.states {
        assert!(u.is_divergence_free() && u.is_hermitian(1e-12) && u.is_dealiased());
    }
    // agrees with the time stepper
    let ts = timestep_integrate(&u0, 0.3, 1e-3, &p).unwrap();
    let d = traj.final_state().difference(ts.final_state()).unwrap();
    let rel = norm(&d, NormKind::L2, &p) / norm(&u0, NormKind::L2, &p);
    assert!(rel < 1e-6, "relative gap {rel:e}, {} windows", rep.windows.len());
}

#[test]
fn heat_semigroup_is_nonexpansive_in_gevrey_norm() {
    let g = FrequencyGrid::new(16).unwrap();
    let p = GevreyParams::new(0.7, 1.5, 1.0, 0.3).unwrap();
    let u0 = gevrey_ns::spectral::random_divergence_free_field(g, -1.0, (1.0, 5.0), 9).unwrap();
    let n0 = norm(&u0, NormKind::H1Gevrey, &p);
    let mut prev = n0;
    for i in 1..20 {
        let n = norm(&heat_propagate_vector(&u0, p.nu, 0.05 * i as f64).unwrap(), NormKind::H1Gevrey, &p);
        assert!(n <= prev);
        prev = n;
    }
}
