use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::{json, Value};

use zhat::dagcat::Bits;
use zhat::kgroup::{verify_defrag, verify_felder, verify_star_identity, verify_tree_identity};

use crate::Failure;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Star,
    Tree,
    Felder,
    Defrag,
    All,
}

/// One check to run: its JSON description and the check itself.
type Case = (Value, Box<dyn Fn() -> zhat::Result<bool> + Send + Sync>);

fn signs() -> [Bits; 2] {
    [Bits::plus(1), Bits::minus(1)]
}

fn star(max_m: usize, depth: Option<i64>) -> Vec<Case> {
    let mut out: Vec<Case> = Vec::new();
    for lambda in signs() {
        for m in 1..=max_m {
            let n = depth.unwrap_or(if m >= 3 { 14 } else { 20 });
            out.push((
                json!({"suite": "star", "lambda1": lambda.to_string(), "m": m, "N": n}),
                Box::new(move || verify_star_identity(lambda, m, n)),
            ));
        }
    }
    out
}

/// Node multisets `m_1 >= m_2 >= ...` with at most three nodes and entries up to `max_m`.
fn multisets(max_m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 1..=max_m {
        out.push(vec![a]);
        for b in 1..=a {
            out.push(vec![a, b]);
            for c in 1..=b.min(1) {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

fn tree(max_m: usize, depth: Option<i64>) -> Vec<Case> {
    let n = depth.unwrap_or(14);
    multisets(max_m)
        .into_iter()
        .map(|m| -> Case {
            (
                json!({"suite": "tree", "m": m.clone(), "N": n}),
                Box::new(move || verify_tree_identity(&m, n)),
            )
        })
        .collect()
}

fn felder(depth: Option<i64>) -> Vec<Case> {
    let n = depth.unwrap_or(16);
    signs()
        .into_iter()
        .map(|lambda| -> Case {
            (
                json!({"suite": "felder", "lambda1": lambda.to_string(), "h": [-6, 6], "N": n}),
                Box::new(move || verify_felder(lambda, -6, 6, n)),
            )
        })
        .collect()
}

fn defrag(max_m: usize, depth: Option<i64>) -> Vec<Case> {
    let n = depth.unwrap_or(12);
    let mut out: Vec<Case> = Vec::new();
    for m in 1..=max_m {
        for mask in 0u32..1 << m {
            let i_set: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            out.push((
                json!({"suite": "defrag", "m": m, "I": i_set.clone(), "N": n}),
                Box::new(move || verify_defrag(m, &i_set, n)),
            ));
        }
    }
    out
}

pub fn run(suite: Suite, m: Option<usize>, depth: Option<i64>) -> Result<(), Failure> {
    let max_m = m.unwrap_or(3);
    if max_m == 0 || max_m > 6 {
        return Err(Failure::Usage(format!("--m must be in 1..=6, got {max_m}")));
    }
    if depth.is_some_and(|n| n < 0) {
        return Err(Failure::Usage("--N must not be negative".into()));
    }
    let mut cases = Vec::new();
    if matches!(suite, Suite::Star | Suite::All) {
        cases.extend(star(max_m, depth));
    }
    if matches!(suite, Suite::Tree | Suite::All) {
        cases.extend(tree(max_m.min(3), depth));
    }
    if matches!(suite, Suite::Felder | Suite::All) {
        cases.extend(felder(depth));
    }
    if matches!(suite, Suite::Defrag | Suite::All) {
        cases.extend(defrag(max_m, depth));
    }
    let results: Vec<Value> = cases
        .par_iter()
        .map(|(desc, check)| {
            let mut line = desc.clone();
            match check() {
                Ok(pass) => line["pass"] = json!(pass),
                Err(e) => {
                    line["pass"] = json!(false);
                    line["error"] = json!(e.to_string());
                }
            }
            line
        })
        .collect();
    let failed = results.iter().filter(|r| r["pass"] != json!(true)).count();
    for r in &results {
        println!("{r}");
    }
    if failed > 0 {
        return Err(Failure::Math(format!("{failed} of {} cases failed", results.len())));
    }
    Ok(())
}
