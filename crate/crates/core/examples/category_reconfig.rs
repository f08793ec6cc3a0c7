// Regroups the cloud by category, moves a category subtree and shows that
// browsing answers do not change.

use tagnav::{fixtures, Library, NdAutomaton, Session};

pub fn run_example() -> tagnav::Result<usize> {
    let mut lib = Library::<NdAutomaton>::from_collection(fixtures::fig1_with_categories());
    let mut s = Session::open(&lib)?;
    s.select(&mut lib, "Prehistoric")?;
    let before = s.visit_all(&lib)?;

    print_groups(&lib, &s);
    let tree = lib.collection().categories();
    let region = tree.find("Region").expect("fixture category");
    let period = tree.find("Period").expect("fixture category");
    lib.move_category(region, period)?;
    println!("moved Region under Period");
    print_groups(&lib, &s);

    assert_eq!(s.visit_all(&lib)?, before);
    Ok(before.len())
}

fn print_groups(lib: &Library<NdAutomaton>, s: &Session<tagnav::Frontier>) {
    let c = lib.collection();
    let tree = c.categories();
    for (cat, entries) in tree.group(s.cloud()) {
        let path = tree.path(cat);
        let tags: Vec<String> = entries
            .iter()
            .map(|e| format!("{}:{}", c.tag(e.tag), e.count))
            .collect();
        println!("  {:<20} {}", path.join("/"), tags.join(" "));
    }
}

#[allow(dead_code)]
fn main() -> tagnav::Result<()> {
    run_example().map(|_| ())
}
