// One-level browsing with the inverted index: every tag maps straight to
// its extent, and a conjunction of tags is a postings intersection.

use tagnav::{fixtures, InvertedIndex};

pub fn run_example() -> tagnav::Result<Vec<(String, usize)>> {
    let c = fixtures::fig1();
    let ix = InvertedIndex::build(&c);
    let mut extents: Vec<(String, usize)> = c
        .cloud()
        .ranked(&c)
        .into_iter()
        .map(|(t, _)| {
            let id = c.tag_id(t.as_str()).expect("cloud tags exist");
            (t.to_string(), ix.extent(id).len())
        })
        .collect();
    extents.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    for (tag, n) in &extents {
        println!("{tag:>14} {n}");
    }

    let tags: Vec<_> = ["Protohistoric", "Levant"]
        .iter()
        .map(|l| c.tag_id(l).expect("fixture tag"))
        .collect();
    let hits = ix.conjunctive(&tags);
    let names: Vec<_> = hits
        .iter()
        .map(|&d| c.resource(d).expect("live").id.as_str())
        .collect();
    println!("Protohistoric AND Levant = {names:?}");
    Ok(extents)
}

#[allow(dead_code)]
fn main() -> tagnav::Result<()> {
    run_example().map(|_| ())
}
