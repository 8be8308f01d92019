// Scratch calibration probe for the acceptance thresholds. Not part of the
// deliverable test suites; run with --release.

use qwalk_core::fisher::*;
use qwalk_core::interference::*;
use qwalk_core::report::fit_t_squared;
use qwalk_core::tangent::*;
use qwalk_core::walk::*;
use std::f64::consts::PI;
use std::time::Instant;

fn main() {
    let t_max = 200usize;
    let a = 50i64;
    let thetas = [PI / 8.0, PI / 4.0, 3.0 * PI / 8.0];

    // --- Criterion 4: H_f bounded vs unbounded at t = 200.
    for &theta in &thetas {
        let ub = SimRecipe::standard(
            InitialSpin::plus(),
            Topology::unbounded(t_max as i64).unwrap(),
            theta,
            t_max,
        )
        .unwrap();
        let bd = SimRecipe::standard(
            InitialSpin::plus(),
            Topology::bounded(a).unwrap(),
            theta,
            t_max,
        )
        .unwrap();
        let h_u = full_qfi(&ub.run_tangent().unwrap()).unwrap();
        let h_b = full_qfi(&bd.run_tangent().unwrap()).unwrap();
        println!(
            "C4 theta={theta:.4}: H_f unbounded {h_u:.6e}, bounded {h_b:.6e}, rel diff {:.3e}",
            (h_u - h_b).abs() / h_u
        );
    }

    // --- Criteria 5 and 6: t^2 fits and exact-ratio saturation.
    for &theta in &thetas {
        let t0 = Instant::now();
        let topo = Topology::unbounded(t_max as i64).unwrap();
        let recipe = SimRecipe::standard(InitialSpin::plus(), topo, theta, t_max).unwrap();
        let mut ts = TangentState::new(&InitialSpin::plus(), &topo, ParamTag::Theta);
        let mut times_fit = Vec::new();
        let mut hf_fit = Vec::new();
        let mut hw_fit = Vec::new();
        let mut ratios = Vec::new();
        for t in 1..=t_max {
            ts = recipe.advance_tangent(&ts).unwrap();
            if t >= 50 {
                let hf = full_qfi(&ts).unwrap();
                times_fit.push(t);
                hf_fit.push(hf);
                let pd = reduce_position(&ts);
                hw_fit.push(position_qfi_paper(&pd));
                if t >= 100 {
                    let hx = position_qfi_exact(&pd, 1e-12);
                    ratios.push(hx / hf);
                }
            }
        }
        let fit_f = fit_t_squared(&times_fit, &hf_fit);
        let fit_w = fit_t_squared(&times_fit, &hw_fit);
        let rmin = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let rmax = ratios.iter().cloned().fold(0.0, f64::max);
        println!(
            "C5/C6 theta={theta:.4}: kappa_f {:.4e} (res {:.3}%), kappa_w {:.4e} (res {:.3}%), ratio [{:.6}, {:.6}] var {:.3}%  [{:?}]",
            fit_f.kappa,
            fit_f.max_rel_residual * 100.0,
            fit_w.kappa,
            fit_w.max_rel_residual * 100.0,
            rmin,
            rmax,
            (rmax - rmin) / rmax * 100.0,
            t0.elapsed()
        );
    }

    // --- Criterion 10: divergence timing, H_w vs mu maps.
    for &theta in &thetas {
        let t0 = Instant::now();
        let topo_u = Topology::unbounded(t_max as i64).unwrap();
        let topo_b = Topology::bounded(a).unwrap();
        let ru = SimRecipe::standard(InitialSpin::plus(), topo_u, theta, t_max).unwrap();
        let rb = SimRecipe::standard(InitialSpin::plus(), topo_b, theta, t_max).unwrap();
        let mut tu = TangentState::new(&InitialSpin::plus(), &topo_u, ParamTag::Theta);
        let mut tb = TangentState::new(&InitialSpin::plus(), &topo_b, ParamTag::Theta);
        let mut t_hw = None;
        for t in 1..=t_max {
            tu = ru.advance_tangent(&tu).unwrap();
            tb = rb.advance_tangent(&tb).unwrap();
            if t_hw.is_none() && t > 10 {
                let hu = position_qfi_paper(&reduce_position(&tu));
                let hb = position_qfi_paper(&reduce_position(&tb));
                if (hu - hb).abs() / hu.abs().max(1e-300) > 1e-6 {
                    t_hw = Some(t);
                    break;
                }
            }
        }
        let mu_u = mu_map(&ru, t_max).unwrap();
        let mu_b = mu_map(&rb, t_max).unwrap();
        let abs_div = first_divergence(&mu_u, &mu_b, 1e-9);
        // relative row divergence
        let mut rel_div = None;
        for t in 0..=t_max {
            let scale = mu_u.max_in_row(t).max(1e-300);
            let half = a;
            let differs = (-half..=half)
                .any(|x| (mu_u.value(t, x) - mu_b.value(t, x)).abs() > 1e-6 * scale);
            if differs {
                rel_div = Some(t);
                break;
            }
        }
        println!(
            "C10 theta={theta:.4}: t_Hw={t_hw:?}, t_mu_abs1e-9={abs_div:?}, t_mu_rel1e-6={rel_div:?}  [{:?}]",
            t0.elapsed()
        );
    }

    // --- Criterion 2: fd discrepancies at t = 100.
    let fd_cases: Vec<(String, SimRecipe<f64>)> = vec![
        (
            "standard unbounded".into(),
            SimRecipe::standard(
                InitialSpin::plus(),
                Topology::unbounded(100).unwrap(),
                PI / 4.0,
                100,
            )
            .unwrap(),
        ),
        (
            "standard bounded".into(),
            SimRecipe::standard(
                InitialSpin::plus(),
                Topology::bounded(50).unwrap(),
                PI / 4.0,
                100,
            )
            .unwrap(),
        ),
        (
            "split tag1".into(),
            SimRecipe::split_step(
                InitialSpin::plus(),
                Topology::unbounded(100).unwrap(),
                PI / 8.0,
                3.0 * PI / 8.0,
                ParamTag::Theta1,
                100,
            )
            .unwrap(),
        ),
        (
            "split tag2".into(),
            SimRecipe::split_step(
                InitialSpin::plus(),
                Topology::unbounded(100).unwrap(),
                PI / 8.0,
                3.0 * PI / 8.0,
                ParamTag::Theta2,
                100,
            )
            .unwrap(),
        ),
    ];
    for (name, recipe) in &fd_cases {
        let disc = fd_check(recipe, 1e-5).unwrap();
        println!("C2 {name}: fd discrepancy {disc:.3e}");
    }

    // --- Criterion 12: split-step sigma vs single-walk sigma at min angle.
    let t_ss = 100usize;
    let topo_ss = Topology::unbounded(t_ss as i64).unwrap();
    let sigma_single = |theta: f64| -> f64 {
        let coin = CoinSpec::new(theta).unwrap();
        let mut w = WalkState::new(&InitialSpin::plus(), &topo_ss);
        for _ in 0..t_ss {
            w = w.step(&coin, &topo_ss).unwrap();
        }
        w.position_distribution().std_dev()
    };
    for &theta2 in &thetas {
        let mut worst: f64 = 0.0;
        let mut worst_at = 0.0;
        for k in 1..=32 {
            let theta1 = k as f64 * PI / 64.0;
            let spec = SplitStepSpec::new(theta1, theta2).unwrap();
            let mut w = WalkState::new(&InitialSpin::plus(), &topo_ss);
            for _ in 0..t_ss {
                w = w.split_step(&spec, &topo_ss).unwrap();
            }
            let s_split = w.position_distribution().std_dev();
            let s_ref = sigma_single(theta1.min(theta2));
            let excess = s_split / s_ref - 1.0;
            if excess > worst {
                worst = excess;
                worst_at = theta1;
            }
        }
        println!(
            "C12 theta2={theta2:.4}: max excess over sigma_single(min) = {:.2}% at theta1={worst_at:.4}",
            worst * 100.0
        );
    }

    // --- Criterion 11: H_w curve extrema for split-step at t = 100.
    let t0 = Instant::now();
    for &fixed in &thetas {
        // H_w(theta2) at fixed theta1: expect minimum at theta2 = theta1.
        let grid: Vec<f64> = (1..32).map(|k| k as f64 * PI / 64.0).collect();
        let mut min_at = (f64::INFINITY, 0.0);
        let mut max_at = (0.0f64, 0.0);
        for &th2 in &grid {
            let recipe = SimRecipe::split_step(
                InitialSpin::plus(),
                topo_ss,
                fixed,
                th2,
                ParamTag::Theta2,
                t_ss,
            )
            .unwrap();
            let hw = position_qfi_paper(&reduce_position(&recipe.run_tangent().unwrap()));
            if hw < min_at.0 {
                min_at = (hw, th2);
            }
            if hw > max_at.0 {
                max_at = (hw, th2);
            }
        }
        let mut min1_at = (f64::INFINITY, 0.0);
        let mut max1_at = (0.0f64, 0.0);
        for &th1 in &grid {
            let recipe = SimRecipe::split_step(
                InitialSpin::plus(),
                topo_ss,
                th1,
                fixed,
                ParamTag::Theta1,
                t_ss,
            )
            .unwrap();
            let hw = position_qfi_paper(&reduce_position(&recipe.run_tangent().unwrap()));
            if hw < min1_at.0 {
                min1_at = (hw, th1);
            }
            if hw > max1_at.0 {
                max1_at = (hw, th1);
            }
        }
        println!(
            "C11 fixed={fixed:.4}: Hw(theta2) min at {:.4} (expect {fixed:.4}); Hw(theta1) max at {:.4} (expect {fixed:.4})",
            min_at.1, max1_at.1
        );
    }
    println!("C11 block took {:?}", t0.elapsed());

    // --- Criterion 14: gap between paper and exact H_w.
    for &theta in &[PI / 16.0, PI / 4.0, 7.0 * PI / 16.0] {
        let topo = Topology::unbounded(200).unwrap();
        let recipe = SimRecipe::standard(InitialSpin::plus(), topo, theta, 200).unwrap();
        let mut ts = TangentState::new(&InitialSpin::plus(), &topo, ParamTag::Theta);
        let mut gaps = Vec::new();
        for t in 1..=200 {
            ts = recipe.advance_tangent(&ts).unwrap();
            if [10, 50, 100, 200].contains(&t) {
                let pd = reduce_position(&ts);
                let hp = position_qfi_paper(&pd);
                let hx = position_qfi_exact(&pd, 1e-12);
                gaps.push((t, (hp - hx).abs() / hx, hp, hx));
            }
        }
        println!("C14 theta={theta:.4}: {gaps:?}");
    }
}
