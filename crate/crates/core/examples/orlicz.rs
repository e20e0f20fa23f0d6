//! Orlicz functions f = t²log²t and g = t²log⁴t, their Luxemburg and dual
//! norms, and finite witnesses for the inclusions ℓ_g ⊂ ℓ_f ⊂ ℓ₂.

use twistlab::experiments::power_family;
use twistlab::orlicz::{conjugate_eval, criterion_search, dual_norm, luxemburg_norm, OrliczFunction};

fn main() {
    let (sq, f, g) = (OrliczFunction::square(), OrliczFunction::f(), OrliczFunction::g());
    println!("cutoffs: f at {:.5}, g at {:.5}", f.cutoff(), g.cutoff());
    for s in [0.01, 0.1, 1.0] {
        println!("f*({s}) = {:.6e}   g*({s}) = {:.6e}", conjugate_eval(&f, s), conjugate_eval(&g, s));
    }

    println!("\n   n   ‖x‖₂       ‖x‖_f      ‖x‖_g      ‖x‖_f*");
    for k in [4, 8, 12] {
        let x = power_family(1 << k, 0.75);
        println!(
            "{:>5} {:.6}  {:.6}  {:.6}  {:.6}",
            1 << k,
            luxemburg_norm(&sq, &x),
            luxemburg_norm(&f, &x),
            luxemburg_norm(&g, &x),
            dual_norm(&f, &x)
        );
    }

    for (name, m, n) in [("f → square", &f, &sq), ("g → f", &g, &f), ("square → square", &sq, &sq)] {
        match criterion_search(m, n, 8.0, 8) {
            Some(w) => println!("{name:<16} B = 8: τ = {:?}", w.tau),
            None => println!("{name:<16} B = 8: no witness"),
        }
    }
}
