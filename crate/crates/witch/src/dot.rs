//! Graphviz output for Hasse diagrams and bubble trees.

use std::fmt::Write;

use witch_core::strata::StratumPoset;
use witch_core::treepair::{BubbleKind, TreePair};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Covering relations drawn bottom-up, one rank per dimension.
pub fn hasse<T>(poset: &StratumPoset<T>, label: impl Fn(&T) -> String) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n");
    let top = poset.dimension.iter().copied().max().unwrap_or(0);
    for d in 0..=top {
        let ids: Vec<String> = (0..poset.len()).filter(|a| poset.dimension[*a] == d).map(|a| format!("s{a}")).collect();
        if !ids.is_empty() {
            let _ = writeln!(out, "  {{ rank=same; {}; }}", ids.join("; "));
        }
    }
    for (a, e) in poset.elements.iter().enumerate() {
        let _ = writeln!(out, "  s{a} [label={}];", quote(&label(e)));
    }
    for (b, below) in poset.covers.iter().enumerate() {
        for a in below {
            let _ = writeln!(out, "  s{a} -> s{b};");
        }
    }
    out.push_str("}\n");
    out
}

/// The bubble tree, root at the bottom. Edges into seam vertices are solid and edges
/// out of them dashed, so the two styles alternate along every path.
pub fn bubble_tree(pair: &TreePair) -> String {
    let mut out = String::from("digraph bubble_tree {\n  rankdir=BT;\n");
    for (v, vx) in pair.vertices().iter().enumerate() {
        let attrs = match vx.kind {
            BubbleKind::Component => format!("shape=circle, style=filled, fillcolor=lightgray, label={}", quote(&format!("α{v}"))),
            BubbleKind::Seam => format!("shape=point, xlabel={}", quote(&format!("ρ{}", vx.label))),
            BubbleKind::Mark { seam, index } => format!("shape=plaintext, label={}", quote(&format!("μ{seam},{index}"))),
        };
        let _ = writeln!(out, "  b{v} [{attrs}];");
    }
    for (v, vx) in pair.vertices().iter().enumerate() {
        let style = if vx.kind == BubbleKind::Seam { "solid" } else { "dashed" };
        if let Some(p) = vx.parent {
            let _ = writeln!(out, "  b{v} -> b{p} [style={style}, arrowhead=none];");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use witch_core::strata::enumerate_k;

    #[test]
    fn pentagon() {
        let k4 = enumerate_k(4).unwrap();
        let dot = hasse(&k4, |t| t.encoding());
        assert_eq!(dot.matches(" -> ").count(), k4.covers.iter().map(Vec::len).sum::<usize>());
        assert!(dot.contains("label=\"(....)\""));
    }

    #[test]
    fn edge_styles_alternate() {
        let pair = TreePair::smooth(&[2, 0, 1]);
        let dot = bubble_tree(&pair);
        // One component, three seams, three marks.
        assert_eq!(dot.matches("style=solid").count(), 3);
        assert_eq!(dot.matches("style=dashed").count(), 3);
    }
}
