//! A small language for naming colored DAGs on the command line:
//!
//! ```text
//! hypercube m=K | hypercube d=<pattern> e=<pattern>
//! even depth=N
//! fragment lambda=<word> [side=left|right] [m=K] depth=N
//! family m=K depth=N
//! product <spec> * <spec> [* <spec> ...]
//! ```
//!
//! Fragments and families are taken over the even chain `[ | )`.

use std::collections::BTreeMap;

use zhat::dagcat::{fragment_left, fragment_right, Bits, ColoredDag, FragmentFamily};

use crate::Failure;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(format!("dag spec: {}", msg.into()))
}

fn args<'a>(words: &[&'a str], allowed: &[&str]) -> Result<BTreeMap<String, &'a str>, Failure> {
    let mut out = BTreeMap::new();
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| usage(format!("expected key=value, got {w:?}")))?;
        let k = if k == "λ" { "lambda" } else { k };
        if !allowed.contains(&k) {
            return Err(usage(format!("unknown parameter {k:?}")));
        }
        if out.insert(k.to_string(), v).is_some() {
            return Err(usage(format!("parameter {k:?} given twice")));
        }
    }
    Ok(out)
}

fn int(a: &BTreeMap<String, &str>, key: &str) -> Result<Option<i64>, Failure> {
    a.get(key)
        .map(|v| v.parse().map_err(|_| usage(format!("{key} must be an integer, got {v:?}"))))
        .transpose()
}

fn required(a: &BTreeMap<String, &str>, key: &str) -> Result<i64, Failure> {
    int(a, key)?.ok_or_else(|| usage(format!("missing {key}=")))
}

fn pattern(s: &str) -> Result<Vec<Bits>, Failure> {
    Bits::pattern(s).map_err(|e| usage(e.to_string()))
}

fn small_m(m: i64) -> Result<usize, Failure> {
    if !(0..=8).contains(&m) {
        return Err(usage(format!("m={m} is outside 0..=8")));
    }
    Ok(m as usize)
}

fn single(spec: &str) -> Result<ColoredDag, Failure> {
    let words: Vec<&str> = spec.split_whitespace().collect();
    let (&name, rest) = words.split_first().ok_or_else(|| usage("empty spec"))?;
    match name {
        "hypercube" => {
            let a = args(rest, &["m", "d", "e"])?;
            let (d, e) = match (int(&a, "m")?, a.get("d"), a.get("e")) {
                (Some(m), None, None) => {
                    let all = pattern(&"±".repeat(small_m(m)?))?;
                    (all.clone(), all)
                }
                (None, Some(d), Some(e)) => (pattern(d)?, pattern(e)?),
                _ => return Err(usage("hypercube takes m=K or d=<pattern> e=<pattern>")),
            };
            Ok(ColoredDag::hypercube(&d, &e)?)
        }
        "even" => {
            let a = args(rest, &["depth"])?;
            Ok(ColoredDag::even_chain(required(&a, "depth")?))
        }
        "fragment" => {
            let a = args(rest, &["lambda", "side", "m", "depth"])?;
            let lambda: Bits = a
                .get("lambda")
                .ok_or_else(|| usage("missing lambda="))?
                .parse()
                .map_err(|e: zhat::error::Error| usage(e.to_string()))?;
            if let Some(m) = int(&a, "m")? {
                if m != lambda.len() as i64 {
                    return Err(usage(format!("m={m} does not match lambda of length {}", lambda.len())));
                }
            }
            let depth = required(&a, "depth")?;
            let base = ColoredDag::even_chain(depth + 2 * lambda.len() as i64 + 2);
            match a.get("side").copied().unwrap_or("left") {
                "left" => Ok(fragment_left(&base, lambda, depth)?),
                "right" => Ok(fragment_right(&base, lambda, depth)?),
                other => Err(usage(format!("side must be left or right, got {other:?}"))),
            }
        }
        "family" => {
            let a = args(rest, &["m", "depth"])?;
            let m = small_m(required(&a, "m")?)?;
            let depth = required(&a, "depth")?;
            let base = ColoredDag::even_chain(depth + 2 * m as i64 + 2);
            Ok(FragmentFamily::full(&base, m, depth)?.into_dag())
        }
        other => Err(usage(format!("unknown constructor {other:?}"))),
    }
}

pub fn build(spec: &str) -> Result<ColoredDag, Failure> {
    match spec.trim().strip_prefix("product") {
        Some(rest) if rest.starts_with(char::is_whitespace) => {
            let mut factors = rest.split('*').map(single);
            let first = factors.next().ok_or_else(|| usage("empty product"))??;
            factors.try_fold(first, |acc, f| Ok(acc.product(&f?)))
        }
        _ => single(spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors() {
        assert_eq!(build("hypercube m=1").unwrap().len(), 4);
        assert_eq!(build("hypercube d=+ e=±").unwrap().len(), 2);
        assert_eq!(build("even depth=6").unwrap().len(), 4);
        assert!(!build("fragment λ=+ m=1 depth=6").unwrap().is_empty());
        assert!(build("fragment lambda=- side=right depth=6").is_ok());
        assert_eq!(build("family m=1 depth=6").unwrap().bit_len(), 1);
        assert_eq!(build("product hypercube m=1 * hypercube m=1").unwrap().len(), 16);
    }

    #[test]
    fn errors() {
        for bad in [
            "",
            "cube m=1",
            "hypercube",
            "hypercube m=x",
            "even",
            "fragment depth=3",
            "fragment lambda=+ m=2 depth=3",
            "fragment lambda=+ side=up depth=3",
            "even depth=3 depth=4",
            "product",
        ] {
            assert!(matches!(build(bad), Err(Failure::Usage(_))), "{bad:?}");
        }
    }
}
