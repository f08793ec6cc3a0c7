// Walks the six-resource sample collection from the full cloud down to a
// single resource, printing resources and ranked clouds at every step.

use tagnav::{fixtures, Library, NdAutomaton, Session};

pub fn run_example() -> tagnav::Result<Vec<String>> {
    let mut lib = Library::<NdAutomaton>::from_collection(fixtures::fig1());
    let mut session = Session::open(&lib)?;
    let mut lines = Vec::new();
    for tag in ["", "Prehistoric", "Cantabrian", "Cave-Painting"] {
        if !tag.is_empty() {
            session.select(&mut lib, tag)?;
        }
        let c = lib.collection();
        let ids: Vec<String> = session
            .visit_all(&lib)?
            .into_iter()
            .map(|d| c.resource(d).expect("live").id.to_string())
            .collect();
        let cloud: Vec<String> = session
            .cloud()
            .ranked(c)
            .into_iter()
            .map(|(t, n)| format!("{t}:{n}"))
            .collect();
        let crumbs: Vec<&str> = session
            .breadcrumb_labels(&lib)
            .into_iter()
            .map(|t| t.as_str())
            .collect();
        lines.push(format!(
            "/{} -> [{}] cloud {{{}}}",
            crumbs.join("/"),
            ids.join(", "),
            cloud.join(", ")
        ));
    }
    Ok(lines)
}

#[allow(dead_code)]
fn main() -> tagnav::Result<()> {
    for line in run_example()? {
        println!("{line}");
    }
    Ok(())
}
