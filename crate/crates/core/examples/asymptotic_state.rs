//! The non-decaying state `ψ^av = r(y) + s(y) cos 2x` and its velocity.
//!
//! Compares the finite-difference profiles with the Green's-kernel form and
//! with the alternative upper-tail expression for `s`.

use edamp::asymptotics::{
    kernel_profiles, stream_residual, s_residual, upper_tail_s, zero_mode_vorticity, AverageState,
};
use edamp::harness::ExperimentConfig;

fn main() -> edamp::Result<()> {
    let cfg = ExperimentConfig::default();
    let g = cfg.geometry()?;
    let grid = cfg.strip_grid()?;
    let av = zero_mode_vorticity(&cfg.initial_vorticity()?, &grid, &g);
    let state = AverageState::new(&av, &grid, &g)?;

    println!("{:>6} {:>10} {:>11} {:>11}", "y", "omega_av", "r", "s");
    for j in (0..grid.ny()).step_by(grid.ny() / 8) {
        println!(
            "{:>6.3} {:>10.5} {:>11.3e} {:>11.3e}",
            grid.y(j),
            av[j],
            state.r[j],
            state.s[j]
        );
    }

    let k = kernel_profiles(&av, &grid, &g)?;
    let diff = k.s.iter().zip(&state.s).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("\nkernel vs FD s: max difference {diff:.2e}");
    for (name, s) in [("FD", state.s.clone()), ("kernel", k.s), ("upper tail", upper_tail_s(&av, &grid, &g))] {
        let r = s_residual(&s, &av, &grid, &g);
        println!("{name:>10}: ODE residual {:.2e}, |s(0)|/max|s| {:.2e}", r.interior, r.boundary);
    }
    let split = stream_residual(&state, &g)?;
    println!("Laplacian residual by mode: k=0 {:.1e}, k=2 {:.1e}, other {:.1e}", split.mode0, split.mode2, split.others);
    println!("max |u_perp_av| = {:.4e}", state.u_perp_av.max_abs());
    Ok(())
}
