// Second calibration probe: H_f topology difference structure, exact-QFI
// divergence timing, and the split-step H_w(theta1) curve shape.

use qwalk_core::fisher::*;
use qwalk_core::interference::*;
use qwalk_core::tangent::*;
use qwalk_core::walk::*;
use std::f64::consts::PI;

fn main() {
    // --- H_f bounded vs unbounded as a function of t.
    for &theta in &[PI / 8.0, PI / 4.0] {
        let t_max = 200usize;
        let a = 50i64;
        let topo_u = Topology::unbounded(t_max as i64).unwrap();
        let topo_b = Topology::bounded(a).unwrap();
        let ru = SimRecipe::standard(InitialSpin::plus(), topo_u, theta, t_max).unwrap();
        let rb = SimRecipe::standard(InitialSpin::plus(), topo_b, theta, t_max).unwrap();
        let mut tu = TangentState::new(&InitialSpin::plus(), &topo_u, ParamTag::Theta);
        let mut tb = TangentState::new(&InitialSpin::plus(), &topo_b, ParamTag::Theta);
        print!("HF-diff theta={theta:.4}:");
        for t in 1..=t_max {
            tu = ru.advance_tangent(&tu).unwrap();
            tb = rb.advance_tangent(&tb).unwrap();
            if t % 25 == 0 {
                let hu = full_qfi(&tu).unwrap();
                let hb = full_qfi(&tb).unwrap();
                print!(" t={t}:{:.2e}", (hu - hb).abs() / hu);
            }
        }
        println!();
    }

    // --- Cross-check bounded H_f at t=200 via finite differences of the
    // overlaps (independent of the tangent propagation).
    {
        let theta = PI / 8.0;
        let a = 50i64;
        let t_max = 200usize;
        let topo_b = Topology::bounded(a).unwrap();
        let h = 1e-4;
        let run = |th: f64| -> Vec<num_complex::Complex64> {
            let coin = CoinSpec::new(th).unwrap();
            let mut w = WalkState::new(&InitialSpin::plus(), &topo_b);
            for _ in 0..t_max {
                w = w.step(&coin, &topo_b).unwrap();
            }
            let mut v: Vec<_> = w.up_amplitudes().to_vec();
            v.extend_from_slice(w.down_amplitudes());
            v
        };
        let plus = run(theta + h);
        let minus = run(theta - h);
        let mid = run(theta);
        let dpsi: Vec<_> = plus
            .iter()
            .zip(minus.iter())
            .map(|(p, m)| (p - m) / (2.0 * h))
            .collect();
        let dnorm: f64 = dpsi.iter().map(|z| z.norm_sqr()).sum();
        let ov: num_complex::Complex64 = mid
            .iter()
            .zip(dpsi.iter())
            .map(|(p, d)| p.conj() * d)
            .sum();
        let hf_fd = 4.0 * (dnorm - ov.norm_sqr());
        let rb = SimRecipe::standard(InitialSpin::plus(), topo_b, theta, t_max).unwrap();
        let hf_tan = full_qfi(&rb.run_tangent().unwrap()).unwrap();
        println!(
            "HF-crosscheck bounded theta=pi/8 t=200: tangent {hf_tan:.6e}, fd {hf_fd:.6e}, rel {:.2e}",
            (hf_tan - hf_fd).abs() / hf_tan
        );
    }

    // --- Exact H_w divergence timing and the relative-difference series.
    for &theta in &[PI / 8.0, PI / 4.0, 3.0 * PI / 8.0] {
        let t_max = 200usize;
        let a = 50i64;
        let topo_u = Topology::unbounded(t_max as i64).unwrap();
        let topo_b = Topology::bounded(a).unwrap();
        let ru = SimRecipe::standard(InitialSpin::plus(), topo_u, theta, t_max).unwrap();
        let rb = SimRecipe::standard(InitialSpin::plus(), topo_b, theta, t_max).unwrap();
        let mut tu = TangentState::new(&InitialSpin::plus(), &topo_u, ParamTag::Theta);
        let mut tb = TangentState::new(&InitialSpin::plus(), &topo_b, ParamTag::Theta);
        let mut t_paper = None;
        let mut t_exact = None;
        let mut series = Vec::new();
        for t in 1..=t_max {
            tu = ru.advance_tangent(&tu).unwrap();
            tb = rb.advance_tangent(&tb).unwrap();
            if t >= 40 && (t_paper.is_none() || t_exact.is_none()) {
                let pu = reduce_position(&tu);
                let pb = reduce_position(&tb);
                let hpu = position_qfi_paper(&pu);
                let hpb = position_qfi_paper(&pb);
                let rel_p = (hpu - hpb).abs() / hpu;
                let hxu = position_qfi_exact(&pu, 1e-12);
                let hxb = position_qfi_exact(&pb, 1e-12);
                let rel_x = (hxu - hxb).abs() / hxu;
                if t <= 70 || t % 10 == 0 {
                    series.push((t, rel_p, rel_x));
                }
                if t_paper.is_none() && rel_p > 1e-6 {
                    t_paper = Some(t);
                }
                if t_exact.is_none() && rel_x > 1e-6 {
                    t_exact = Some(t);
                }
            }
        }
        let mu_u = mu_map(&ru, 130).unwrap();
        let mu_b = mu_map(&rb, 130).unwrap();
        let t_mu = first_divergence(&mu_u, &mu_b, 1e-9);
        println!("C10x theta={theta:.4}: t_paper={t_paper:?} t_exact={t_exact:?} t_mu={t_mu:?}");
        println!("      series (t, relHw_paper, relHw_exact): {series:?}");
    }

    // --- Split-step H_w(theta1) curve at theta2 = pi/8, t = 100.
    {
        let t_ss = 100usize;
        let topo = Topology::unbounded(t_ss as i64).unwrap();
        let fixed = PI / 8.0;
        println!("C11x theta2=pi/8, Hw(theta1) over k*pi/64:");
        for k in 1..32 {
            let th1 = k as f64 * PI / 64.0;
            let recipe = SimRecipe::split_step(
                InitialSpin::plus(),
                topo,
                th1,
                fixed,
                ParamTag::Theta1,
                t_ss,
            )
            .unwrap();
            let pd = reduce_position(&recipe.run_tangent().unwrap());
            let hp = position_qfi_paper(&pd);
            let hx = position_qfi_exact(&pd, 1e-12);
            println!("  k={k:2} th1={th1:.4}: Hw_paper {hp:10.3} Hw_exact {hx:10.3}");
        }
    }
}
