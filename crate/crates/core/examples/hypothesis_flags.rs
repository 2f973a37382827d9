//! Overgroups of the regular representation inside Aut(Γ(R, S)) and the
//! structural flags recorded for each.
//!
//!     cargo run --example hypothesis_flags -- klein4 02

use cayley_census::census::{hypothesis_flags, DEFAULT_OVERGROUP_CAP};
use cayley_census::groups::make_group;
use cayley_census::ConnectionSet;

fn main() -> cayley_census::Result<()> {
    let mut args = std::env::args().skip(1);
    let group = make_group(&args.next().unwrap_or_else(|| "klein4".into()).parse()?)?;
    let s = ConnectionSet::from_hex(group.order(), &args.next().unwrap_or_else(|| "02".into()))?;
    let rep = hypothesis_flags(&group, &s, DEFAULT_OVERGROUP_CAP)?;
    println!(
        "{} S = {}: |Aut| = {}, larger than R: {}",
        group.id(),
        s.to_hex(),
        rep.aut_order,
        rep.h1
    );
    for g in &rep.overgroups {
        println!(
            "  |G| = {:>4}  |G_1| = {:>3}  |core| = {:>3}  h2 {:<5} h3 {:<5} h4 {:<5} h5 {}",
            g.order, g.stabilizer_order, g.core_order, g.h2, g.h3, g.h4, g.h5
        );
    }
    Ok(())
}
