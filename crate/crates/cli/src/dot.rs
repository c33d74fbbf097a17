use std::fmt::Write;

use dsquiver_core::builder::QuiverInstance;
use dsquiver_core::quiver::VertexId;

/// `v_i_j` for block vertices, `v_i_j_k` for legs.
pub fn vertex_name(v: &VertexId) -> String {
    match *v {
        VertexId::Block { pole, block } => format!("v_{pole}_{block}"),
        VertexId::Leg { pole, block, k } => format!("v_{pole}_{block}_{k}"),
    }
}

/// The quiver as a DOT digraph. Parallel arrows are written one per line.
pub fn render(inst: &QuiverInstance) -> String {
    let q = &inst.quiver;
    let mut out = String::from("digraph quiver {\n");
    for (v, a) in q.vertices().iter().zip(&inst.alpha) {
        let shape = if v.is_leg() { "ellipse" } else { "box" };
        writeln!(out, "  {} [label=\"{v}\\nalpha={a}\", shape={shape}];", vertex_name(v)).unwrap();
    }
    for &(s, t) in q.arrows() {
        writeln!(out, "  {} -> {};", vertex_name(&q.vertices()[s]), vertex_name(&q.vertices()[t])).unwrap();
    }
    out.push_str("}\n");
    out
}
