//! The named constants of the spectrum theory, each solved two ways
//! where a cross-check exists.
//!
//! ```sh
//! cargo run --example solve_constants
//! ```

use dyadic_spectra::spectra::{
    h_a_alpha, solve_corollary_theta, solve_kps, solve_ps, theta_star_closed_form,
};

fn main() {
    // Growth constant of the no-11 constraint set: -ln(1-p) at the root
    // of p^2 = (1-p)^3.
    let kps = solve_kps(1e-12).unwrap();
    println!("base set:    p = {:.12}", kps.p);
    println!(
        "             h = -ln(1-p) = {:.12} nats  (residual {:.1e})",
        kps.entropy_nats, kps.residual
    );

    // The level-set system at a few pair frequencies.
    println!("\nlevel-set system  p^2(1-q) = (1-p)^3,  2pq = alpha(2+p-q):");
    println!("{:>7} {:>14} {:>14} {:>14}", "alpha", "p", "q", "h (nats)");
    for alpha in [0.0, 0.1, 0.25, 0.4, 0.5] {
        let roots = solve_ps(alpha, 1e-12).unwrap();
        let h = h_a_alpha(alpha).unwrap().entropy_nats.unwrap();
        println!(
            "{alpha:>7.2} {:>14.10} {:>14.10} {:>14.10}",
            roots.p, roots.q, h
        );
    }

    // The digit frequency at which the frequency slice exhausts the full
    // level set: a radical expression and a bisection must agree.
    let closed = theta_star_closed_form();
    let solved = solve_corollary_theta(0.0, 1e-12).unwrap();
    println!("\nstationary theta at alpha = 0:");
    println!("  closed form  {closed:.15}");
    println!(
        "  bisection    {:.15}  (relation residual {:.1e})",
        solved.theta, solved.relation_residual
    );
    println!("  gap          {:.1e}", (closed - solved.theta).abs());
}
