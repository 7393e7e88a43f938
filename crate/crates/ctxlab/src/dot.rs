//! Graphviz export of context graphs.

use ctxlab_core::povm::ContextGraph;

use crate::report::sig;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Undirected DOT graph. Node IDs are the outcome labels; every edge carries
/// a `witness` attribute with the tested magnitude.
pub fn to_dot(g: &ContextGraph) -> String {
    let mut out = String::from("graph contexts {\n");
    for n in &g.nodes {
        out += &format!("  {};\n", quote(n));
    }
    for e in &g.edges {
        out += &format!(
            "  {} -- {} [witness={}];\n",
            quote(&e.a),
            quote(&e.b),
            quote(&sig(e.witness.magnitude))
        );
    }
    out += "}\n";
    out
}
