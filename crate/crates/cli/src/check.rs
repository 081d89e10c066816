use std::path::Path;

use num_traits::Signed;

use zhat::plumbing::{linalg, PlumbedGraph, Tree};

use crate::{load, Failure};

fn names(t: &Tree, vs: &[usize]) -> String {
    if vs.is_empty() {
        return "-".into();
    }
    vs.iter().map(|&v| t.id(v)).collect::<Vec<_>>().join(", ")
}

/// Why `W` fails to be negative definite, in terms of `-W`'s leading minors.
fn diagnosis(g: &PlumbedGraph) -> String {
    let neg: Vec<Vec<i64>> = g
        .linking_matrix()
        .iter()
        .map(|r| r.iter().map(|&x| -x).collect())
        .collect();
    let minors = linalg::leading_principal_minors(&neg);
    match minors.iter().position(|d| !d.is_positive()) {
        Some(k) => format!("leading principal minor {} of -W is {}", k + 1, minors[k]),
        None => "all leading principal minors of -W are positive".into(),
    }
}

pub fn run(file: &Path) -> Result<(), Failure> {
    let g = load(file)?;
    let t = g.tree();
    let part = t.degree_partition();
    println!("file: {}", file.display());
    println!("vertices: {}", t.len());
    println!("edges: {}", t.edges().len());
    println!("V1: {}", names(t, &part.leaves));
    println!("V2: {}", names(t, &part.degree2));
    println!("V3+: {}", names(t, &part.nodes));
    println!("centers: {}", names(t, &t.centers()));
    match g.rooted() {
        Some(rt) => println!(
            "root: {} ({})",
            t.id(rt.root()),
            if rt.is_centered() { "centered" } else { "not centered" }
        ),
        None => println!("root: none"),
    }
    println!("det W: {}", g.det());
    let nd = g.is_negative_definite();
    println!("negative definite: {}", if nd { "yes" } else { "no" });
    if !nd {
        return Err(Failure::Math(format!("not negative definite: {}", diagnosis(&g))));
    }
    match g.theta_form() {
        Ok(s) => {
            println!("S on {}:", names(t, s.index()));
            for row in s.matrix() {
                let cells: Vec<String> = row.iter().map(|x| format!("{}/{}", x.numer(), x.denom())).collect();
                println!("  [{}]", cells.join(", "));
            }
        }
        Err(e) => println!("S: none ({e})"),
    }
    Ok(())
}
