//! `corpus`: synthesize the cover/stego PPM tree plus manifest.csv.

use std::path::Path;

use stegwolf_core::stegosim::gen_corpus;

use crate::config::{write_atomic, KeyValues};
use crate::CliResult;

pub const DEFAULTS: &[(&str, &str)] = &[
    ("n_pairs", "16"),
    ("width", "128"),
    ("height", "128"),
    ("payloads", "0.2,0.4"),
    ("seed", "1"),
];

pub fn run(kv: &KeyValues, out_dir: &Path) -> CliResult<()> {
    let n_pairs: usize = kv.parse("n_pairs")?;
    let width: usize = kv.parse("width")?;
    let height: usize = kv.parse("height")?;
    let payloads: Vec<f64> = kv.parse_list("payloads")?;
    let seed: u64 = kv.parse("seed")?;

    let manifest = gen_corpus(out_dir, n_pairs, width, height, &payloads, seed)?;
    write_atomic(&out_dir.join("manifest.csv"), manifest.to_csv().as_bytes())?;
    write_atomic(&out_dir.join("resolved.cfg"), kv.snapshot().as_bytes())?;
    Ok(())
}
