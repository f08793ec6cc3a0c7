//! The six-resource sample collection on Spanish prehistoric and
//! protohistoric art used throughout the docs and tests.

use crate::model::{Collection, Metadata};

/// Annotation table of the sample collection, in insertion order.
pub const FIG1: [(&str, [&str; 3]); 6] = [
    ("R1", ["Cave-Painting", "Cantabrian", "Prehistoric"]),
    ("R2", ["Cave-Painting", "Levant", "Prehistoric"]),
    ("R3", ["Megalithic", "Cantabrian", "Prehistoric"]),
    ("R4", ["Tartesian", "Plateau", "Protohistoric"]),
    ("R5", ["Phoenician", "Penibaetic", "Protohistoric"]),
    ("R6", ["Punic", "Levant", "Protohistoric"]),
];

pub fn fig1() -> Collection {
    let mut c = Collection::new();
    for (i, (id, tags)) in FIG1.iter().enumerate() {
        let meta = Metadata {
            title: Some(format!("Resource {}", i + 1)),
            uri: None,
        };
        c.add_resource_with(id, tags.iter(), meta)
            .expect("fixture ids are unique");
    }
    c
}

/// [`fig1`] with a small category hierarchy over its tags.
pub fn fig1_with_categories() -> Collection {
    let mut c = fig1();
    let root = c.categories().root();
    let groups: [(&str, &[&str]); 4] = [
        ("Period", &["Prehistoric", "Protohistoric"]),
        ("Style", &["Cave-Painting", "Megalithic"]),
        ("Region", &["Cantabrian", "Levant", "Plateau", "Penibaetic"]),
        ("Culture", &["Tartesian", "Phoenician", "Punic"]),
    ];
    for (name, tags) in groups {
        let cat = c.add_category(root, name).expect("root exists");
        for t in tags {
            c.assign_category(cat, t).expect("fixture tags are valid");
        }
    }
    c
}
