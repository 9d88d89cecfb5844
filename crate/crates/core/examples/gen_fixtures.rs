//! Regenerates the bundled b-file fixtures from the trial-division evaluator.
//!
//! cargo run -p sumlab-core --example gen_fixtures

use std::fs;
use std::path::Path;

use sumlab_core::oeis::{oracle_bfile, KNOWN_SEQUENCES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for seq in &KNOWN_SEQUENCES {
        // Shifted sequences need one extra term to reach k = 1000.
        let terms = if seq.index_shift < 0 { 1001 } else { 1000 };
        let path = dir.join(format!("b{}.txt", &seq.id[1..]));
        fs::write(&path, oracle_bfile(seq, terms)?)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
