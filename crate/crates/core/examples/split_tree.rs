// Shows the automaton's split tree growing lazily as selections are made,
// and staying the same when they are repeated.

use tagnav::{fixtures, NdAutomaton};

pub fn run_example() -> tagnav::Result<String> {
    let c = fixtures::fig1();
    let (mut a, root) = NdAutomaton::init(&c)?;
    let t = |l: &str| c.tag_id(l).expect("fixture tag");
    println!("{} node(s) before browsing", a.node_count());

    let pre = a.select(&c, &root, t("Prehistoric"))?;
    a.select(&c, &pre, t("Cantabrian"))?;
    let levant = a.select(&c, &root, t("Levant"))?;
    println!(
        "Levant from the top: {} frontier nodes, {} resources",
        levant.nodes().len(),
        levant.len()
    );
    let grown = a.node_count();
    let pre = a.select(&c, &root, t("Prehistoric"))?;
    a.select(&c, &pre, t("Cantabrian"))?;
    assert_eq!(a.node_count(), grown);

    let tree = a.export_tree(&c);
    print!("{tree}");
    Ok(tree)
}

#[allow(dead_code)]
fn main() -> tagnav::Result<()> {
    run_example().map(|_| ())
}
