// Saves the sample collection, loads it back and checks the canonical text
// is a fixed point.
//
// Usage: cargo run -p tagnav --example ingest_roundtrip -- [FILE.json]

use std::env;
use std::path::PathBuf;

use tagnav::{fixtures, ingest};

pub fn run_example(path: Option<PathBuf>) -> tagnav::Result<usize> {
    let path = path.unwrap_or_else(|| env::temp_dir().join("tagnav-fig1.json"));
    let original = fixtures::fig1_with_categories();
    ingest::save(&original, &path)?;
    let loaded = ingest::load(&path)?;
    assert_eq!(ingest::to_json(&original), ingest::to_json(&loaded));
    println!(
        "{}: {} resources, {} tags, {} categories",
        path.display(),
        loaded.len(),
        loaded.vocabulary_size(),
        loaded.categories().len()
    );
    match ingest::load_str(r#"{"format_version": 9, "resources": []}"#) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("version 9 is not supported"),
    }
    Ok(loaded.len())
}

#[allow(dead_code)]
fn main() -> tagnav::Result<()> {
    run_example(env::args().nth(1).map(PathBuf::from)).map(|_| ())
}
