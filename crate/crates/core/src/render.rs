//! Human-readable report and Graphviz output.

use std::fmt::Write;

use crate::cluster::ClusterTree;
use crate::conductor::{Analysis, Report};
use crate::model::{XGraph, YGraph, YOrigin};

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Indented outline of `T_B` with the per-vertex ledger.
pub fn render_text(report: &Report, tree: &ClusterTree) -> String {
    let mut out = String::new();
    if let Some(label) = &report.label {
        writeln!(out, "instance: {label}").unwrap();
    }
    writeln!(out, "genus: {}", report.genus).unwrap();
    writeln!(
        out,
        "equation discriminant nu(d_f): {} (= nu(Delta) iff the input equation is minimal)",
        report.nu_df
    )
    .unwrap();
    writeln!(
        out,
        "-Art(X/S): {} from the special fiber, {} from local terms",
        report.artin_conductor, report.artin_local_sum
    )
    .unwrap();
    writeln!(out, "components n(X): {}", report.n_components).unwrap();
    writeln!(out, "f~: {}", report.f_tilde).unwrap();
    writeln!(out, "inequality -Art(X/S) <= nu(d_f): {}", yes_no(report.inequality_holds)).unwrap();
    writeln!(out, "equality: {}", yes_no(report.equality_holds)).unwrap();
    write!(out, "X minimal: {}", yes_no(report.x_minimal)).unwrap();
    if !report.x_minimal {
        let ids: Vec<String> = report.nonminimal_vertices.iter().map(|v| format!("#{v}")).collect();
        write!(out, " ((-1)-curves over {})", ids.join(", ")).unwrap();
    }
    writeln!(out).unwrap();
    for w in &report.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "cluster tree (wt, parity, d, D'', =?):").unwrap();
    let mut stack = vec![(0usize, 0usize)];
    while let Some((id, indent)) = stack.pop() {
        let l = &report.vertices[id];
        let mark = if l.equality {
            format!("= {}", l.reason.as_str())
        } else {
            format!("< STRICT by {}", l.defect)
        };
        writeln!(
            out,
            "{:indent$}#{} depth {}: wt={} {} d={} D''={} {}",
            "",
            id,
            l.depth,
            l.wt,
            l.parity,
            l.d,
            l.dpp,
            mark,
            indent = 2 + 2 * indent
        )
        .unwrap();
        for &c in tree.vertex(id).children.iter().rev() {
            stack.push((c, indent + 1));
        }
    }
    out
}

pub fn dot_tb(tree: &ClusterTree) -> String {
    let mut out = String::from("graph T_B {\n  node [shape=circle];\n");
    for v in tree.vertices() {
        writeln!(out, "  b{} [label=\"wt={}/{}\"];", v.id, v.wt, v.parity).unwrap();
    }
    for v in tree.vertices() {
        for &c in &v.children {
            writeln!(out, "  b{} -- b{};", v.id, c).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn dot_ty(y: &YGraph) -> String {
    let mut out = String::from("graph T_Y {\n  node [shape=circle];\n");
    for v in y.vertices() {
        let kind = match v.origin {
            YOrigin::StrictTransform(b) => format!("b{b}"),
            YOrigin::ChainInsert { parent, child } => format!("chain b{parent}-b{child}"),
            YOrigin::HorizontalLeaf { vertex, root } => format!("leaf b{vertex} root {root}"),
        };
        let roots = if v.attached_roots.is_empty() {
            String::new()
        } else {
            let r: Vec<String> = v.attached_roots.iter().map(|r| r.to_string()).collect();
            format!("\\nroots {}", r.join(","))
        };
        writeln!(out, "  y{} [label=\"{}\\n{}{}\"];", v.id, kind, v.parity, roots).unwrap();
    }
    for (a, b) in y.edges() {
        writeln!(out, "  y{a} -- y{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn dot_tx(x: &XGraph) -> String {
    let mut out = String::from("graph T_X {\n  node [shape=ellipse];\n");
    for c in x.components() {
        writeln!(out, "  x{} [label=\"m={}, χ={}\"];", c.id, c.multiplicity, c.chi).unwrap();
    }
    for e in x.edges() {
        for _ in 0..e.weight {
            writeln!(out, "  x{} -- x{};", e.from, e.to).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// `(file name, contents)` for the three graphs.
pub fn dot_files(a: &Analysis) -> [(&'static str, String); 3] {
    [
        ("t_b.dot", dot_tb(&a.tree)),
        ("t_y.dot", dot_ty(&a.y)),
        ("t_x.dot", dot_tx(&a.x)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conductor::{analyze_full, AnalysisInput, AnalyzeOptions};
    use crate::valuation::{parse_rational, Instance, Prime};

    fn fixture(p: u64, roots: &[&str]) -> Analysis {
        let inst = Instance::new(
            Prime::new(p).unwrap(),
            roots.iter().map(|s| parse_rational(s).unwrap()).collect(),
            false,
        )
        .unwrap();
        analyze_full(&AnalysisInput::Roots(inst), &AnalyzeOptions::default()).unwrap()
    }

    #[test]
    fn text_outline_indents_children() {
        let a = fixture(3, &["0", "1", "2", "3", "4", "5"]);
        let text = render_text(&a.report, &a.tree);
        assert!(text.contains("-Art(X/S): 6 from the special fiber, 6 from local terms"));
        assert!(text.contains("  #0 depth 0: wt=6 even d=6 D''=6 = EVEN_ALL_EVEN_CHILDREN_WT2"));
        assert!(text.contains("    #1 depth 1: wt=2 even d=0 D''=0"));
    }

    #[test]
    fn dot_labels_and_double_edges() {
        let a = fixture(5, &["0", "5", "10", "1", "2", "3"]);
        let tb = dot_tb(&a.tree);
        assert!(tb.contains("b1 [label=\"wt=3/odd\"]"));
        let tx = dot_tx(&a.x);
        assert!(tx.contains("x1 [label=\"m=2, χ=2\"]"));
        // the root and {0, 3, 6, 9} are both even and ramified, so they meet twice
        let b = fixture(3, &["0", "3", "6", "9", "1", "2"]);
        let doubled = b.x.edges().iter().filter(|e| e.weight == 2).count();
        assert!(doubled >= 1);
        let lines = dot_tx(&b.x).matches(" -- ").count();
        assert_eq!(lines, b.x.edges().len() + doubled);
    }

    #[test]
    fn dot_is_deterministic() {
        let a = fixture(5, &["0", "25", "1", "2", "3", "4"]);
        let b = fixture(5, &["0", "25", "1", "2", "3", "4"]);
        assert_eq!(dot_files(&a), dot_files(&b));
    }
}
