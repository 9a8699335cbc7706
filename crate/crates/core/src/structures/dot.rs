//! Graphviz DOT export. Digraphs list their arcs; posets are drawn as Hasse
//! diagrams (cover relation only, bottom-up rank direction).

use super::{Digraph, Poset, VertexId};
use std::fmt::Write;

pub fn digraph_dot(g: &Digraph, name: &str) -> String {
    digraph_dot_with(g, name, |_| None)
}

/// `attrs` may return extra node attributes, e.g. a fill color per role.
pub fn digraph_dot_with<F>(g: &Digraph, name: &str, attrs: F) -> String
where
    F: Fn(VertexId) -> Option<String>,
{
    let mut out = String::new();
    writeln!(out, "digraph {name} {{").unwrap();
    for &v in g.ids() {
        match attrs(v) {
            Some(a) => writeln!(out, "  v{v} [label=\"{v}\", {a}];").unwrap(),
            None => writeln!(out, "  v{v} [label=\"{v}\"];").unwrap(),
        }
    }
    for (u, v) in g.arcs_iter() {
        writeln!(out, "  v{u} -> v{v};").unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

pub fn poset_hasse_dot(p: &Poset, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {name} {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    for &v in p.ids() {
        writeln!(out, "  v{v} [label=\"{v}\"];").unwrap();
    }
    for (i, j) in covers(p) {
        writeln!(out, "  v{} -> v{};", p.id_at(i), p.id_at(j)).unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

/// Pairs (i, j) with i < j and no k strictly between.
fn covers(p: &Poset) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..p.n() {
        'pair: for j in p.matrix().row_ones(i).collect::<Vec<_>>() {
            for k in p.matrix().row_ones(i).collect::<Vec<_>>() {
                if k != j && p.lt_pos(k, j) {
                    continue 'pair;
                }
            }
            out.push((i, j));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hasse_omits_transitive_edges() {
        let dot = poset_hasse_dot(&Poset::chain(3), "c3");
        assert!(dot.contains("v0 -> v1"));
        assert!(dot.contains("v1 -> v2"));
        assert!(!dot.contains("v0 -> v2"));
    }

    #[test]
    fn digraph_lists_arcs() {
        let g = Digraph::from_arcs(vec![0, 1], &[(0, 1)]).unwrap();
        let dot = digraph_dot(&g, "g");
        assert!(dot.contains("v0 -> v1;"));
    }
}
