//! Exact census: classify every connection set of a group, with orbit
//! reduction, parallel workers, a record stream and a resumable checkpoint.
//!
//!     cargo run --release --example exact_census -- dihedral:10 4

use cayley_census::census::{exact_census, CensusRecord, ExactOptions};
use cayley_census::groups::make_group;
use cayley_census::Error;

fn main() -> cayley_census::Result<()> {
    let mut args = std::env::args().skip(1);
    let group = make_group(
        &args
            .next()
            .unwrap_or_else(|| "dihedral:10".into())
            .parse()?,
    )?;
    let workers = args
        .next()
        .map_or(Ok(0), |w| w.parse())
        .map_err(|e| Error::Parse(format!("workers: {e}")))?;

    let opts = ExactOptions {
        reduce_by_aut: true,
        workers,
        ..Default::default()
    };
    let mut shown = 0;
    let mut print_some = |rec: &CensusRecord| {
        if shown < 8 {
            println!("  {}", rec.to_csv_row());
            shown += 1;
        }
        Ok(())
    };
    println!("{}", CensusRecord::CSV_HEADER);
    let summary = exact_census(&group, &opts, Some(&mut print_some))?;
    println!("  ...\n{}", summary.to_json());

    // Interrupt after two chunks, then resume from the checkpoint file.
    let dir = std::env::temp_dir().join(format!("cayley-census-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let ckpt = dir.join("census.jsonl");
    let _ = std::fs::remove_file(&ckpt);
    let interrupted = ExactOptions {
        chunk_size: 16,
        checkpoint: Some(ckpt.clone()),
        stop_after_chunks: Some(2),
        ..opts.clone()
    };
    match exact_census(&group, &interrupted, None) {
        Err(Error::Interrupted { completed }) => println!("stopped after {completed} chunks"),
        other => println!("finished early: {:?}", other.map(|s| s.counts)),
    }
    let resumed = exact_census(
        &group,
        &ExactOptions {
            stop_after_chunks: None,
            ..interrupted
        },
        None,
    )?;
    println!(
        "resumed tallies equal the uninterrupted run: {}",
        resumed.counts == summary.counts
    );
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
