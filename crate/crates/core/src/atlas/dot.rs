use std::fmt::Write;

use super::{Poset, StratAtlas};

fn digraph<N>(out: &mut String, name: &str, poset: &Poset<N>, label: impl Fn(&N) -> String) {
    writeln!(out, "digraph {name} {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    for (i, n) in poset.nodes.iter().enumerate() {
        writeln!(out, "  n{i} [label=\"{}\"];", label(n).replace('"', "\\\"")).unwrap();
    }
    for [a, b] in &poset.covers {
        writeln!(out, "  n{a} -> n{b};").unwrap();
    }
    out.push_str("}\n");
}

/// One digraph per poset with Hasse edges `lower -> upper`.
pub fn to_dot(atlas: &StratAtlas) -> String {
    let mut out = String::new();
    digraph(&mut out, "kr", &atlas.kr, |n| n.min_rep.clone());
    digraph(&mut out, "ekor", &atlas.ekor, |n| n.elt.clone());
    digraph(&mut out, "newton", &atlas.newton, |n| {
        let nu: Vec<String> = n.nu.to_strings();
        let kappa: Vec<String> = n.kappa.iter().map(|k| k.to_string()).collect();
        format!("nu=[{}] kappa=[{}]", nu.join(","), kappa.join(","))
    });
    out
}
