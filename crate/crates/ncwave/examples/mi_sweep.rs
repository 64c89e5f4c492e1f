//! Sweep the modulation-instability growth rate of a plane wave over
//! wavenumber, compare the closed form with the sideband eigenvalues, and
//! locate the unstable bands.

use ncwave::lax::ModelParams;
use ncwave::mi::{growth_rate_closed, growth_rate_numeric, unstable_band};

fn main() {
    let params = ModelParams::new(1.5, 1.0, 1.0);
    let c = 0.5;

    println!("k      Re ω(closed)  growth(eigen)   band?");
    let mut worst = 0.0f64;
    for i in 0..=24 {
        let k = -3.0 + 0.25 * i as f64;
        let closed = growth_rate_closed(k, c, &params);
        let numeric = growth_rate_numeric(k, c, &params);
        worst = worst.max((closed.re - numeric).abs());
        if i % 2 == 0 {
            println!(
                "{k:+.2}  {:>12.6}  {:>13.6}   {}",
                closed.re,
                numeric,
                if numeric > 1e-12 { "unstable" } else { "-" }
            );
        }
    }
    println!("\nmax |closed − eigen| over the sweep: {worst:.3e}");

    let bands = unstable_band(c, &params, 3.0, 1201);
    println!("unstable bands over k ∈ [−3, 3]:");
    for b in &bands {
        println!("  [{:+.6}, {:+.6}]", b.k_lo, b.k_hi);
    }
}
