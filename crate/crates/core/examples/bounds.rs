//! The explicit upper bounds (as log2 values), in floating point and, where
//! every term is rational, exactly.
//!
//!     cargo run --example bounds

use cayley_census::census::{bound_eval, bound_eval_exact, BoundKind, BoundParams};

fn main() -> cayley_census::Result<()> {
    for r in [64u64, 1024, 1 << 16] {
        println!("r = {r}");
        for kind in BoundKind::ALL {
            let n = if kind == BoundKind::T2_4 {
                128.min(r)
            } else {
                16
            };
            let mut p = BoundParams::new(r).with_n(n);
            p.b = 0.0;
            let Ok(v) = bound_eval(kind, &p) else {
                println!("  {kind:<5} n/a (parameters out of range)");
                continue;
            };
            let exact = bound_eval_exact(kind, &p)?.map_or(String::new(), |q| format!(" = {q}"));
            println!(
                "  {kind:<5} log2 bound {v:>14.6}{exact}   excess over r {:>10.3}",
                v - r as f64
            );
        }
    }
    Ok(())
}
