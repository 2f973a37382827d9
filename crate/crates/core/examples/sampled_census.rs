//! Sampled census with a seeded generator and a 95% Wilson interval,
//! checked against the exact proportion.
//!
//!     cargo run --release --example sampled_census -- cyclic:12 4000 1

use cayley_census::census::{exact_census, sampled_census, ExactOptions};
use cayley_census::groups::make_group;
use cayley_census::Error;

fn main() -> cayley_census::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let group = make_group(&args.first().map_or("cyclic:12", String::as_str).parse()?)?;
    let parse = |i: usize, default: u64| {
        args.get(i).map_or(Ok(default), |s| {
            s.parse().map_err(|e| Error::Parse(format!("{e}")))
        })
    };
    let (samples, seed) = (parse(1, 4000)?, parse(2, 1)?);

    let sampled = sampled_census(&group, samples, seed, 0, None)?;
    let ci = sampled.confidence_95.clone().expect("sampled mode");
    println!(
        "{} DRR proportion from {samples} samples: {}",
        group.id(),
        sampled.drr_proportion
    );
    println!(
        "95% interval [{:.4}, {:.4}] (half-width {:.4})",
        ci.low, ci.high, ci.half_width
    );

    let exact = exact_census(&group, &ExactOptions::default(), None)?;
    println!(
        "exact proportion {} lies in the interval: {}",
        exact.drr_proportion,
        ci.contains(exact.drr_proportion.value())
    );
    Ok(())
}
